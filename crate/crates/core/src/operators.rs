//! Dense Nyström matrices for `K` and `K*`, null spaces of `I ± K` and
//! `I ± K*`, bordered second-kind solves and the tangential-derivative
//! reduction of `φ ± Kφ = g`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::geometry::Mesh;
use crate::kernels::{dlp_entry, slp_kernel_smoothpart};
use crate::quadrature::{log_weight_row, spectral_antiderivative, spectral_derivative, Grid};

/// Singular values below this count towards a numerical null space.
pub const NULL_TOL: f64 = 1e-6;
/// Relative tolerance of the Fredholm compatibility check.
pub const COMPAT_TOL: f64 = 1e-8;
/// Relative pivot size below which a bordered system is declared singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// Which of `I + L` or `I - L` an equation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Nyström matrix with `dσ` folded into the columns:
/// `A_ij = K(z_i, ζ_j) dσ_j`, or `K(z_j, z_i) dσ_j` for the adjoint.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub matrix: DMatrix<f64>,
    pub adjoint: bool,
}

fn assemble(n: usize, entry: impl Fn(usize, usize) -> f64 + Sync) -> DMatrix<f64> {
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(j, col)| {
        for (i, v) in col.iter_mut().enumerate() {
            *v = entry(i, j);
        }
    });
    DMatrix::from_vec(n, n, data)
}

pub fn assemble_dlp(mesh: &Mesh) -> OperatorMatrix {
    let matrix = assemble(mesh.len(), |i, j| dlp_entry(mesh, i, j) * mesh.weight[j]);
    OperatorMatrix { matrix, adjoint: false }
}

pub fn assemble_dlp_adjoint(mesh: &Mesh) -> OperatorMatrix {
    let matrix = assemble(mesh.len(), |i, j| dlp_entry(mesh, j, i) * mesh.weight[j]);
    OperatorMatrix { matrix, adjoint: true }
}

/// Boundary matrix of the single layer `Wf(z_i) = (1/π)∫ f log|z_i - ζ| dσ`,
/// with the log singularity handled by the product rule on each component.
pub fn assemble_slp(mesh: &Mesh) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = mesh.ranges.iter().map(|r| log_weight_row(r.len)).collect();
    assemble(mesh.len(), |i, j| {
        let c = mesh.component[j];
        let step = mesh.step(j);
        let smooth = slp_kernel_smoothpart(mesh, i, j) * step;
        let singular = if mesh.component[i] == c {
            let r = mesh.ranges[c];
            let d = (i - r.offset + r.len - (j - r.offset)) % r.len;
            rows[c][d] / (2.0 * PI)
        } else {
            0.0
        };
        (singular + smooth) * mesh.speed[j]
    })
}

impl OperatorMatrix {
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(x)).as_slice().to_vec()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.matrix.row_iter().map(|r| r.sum()).collect()
    }

    /// `I ± A`.
    pub fn shifted(&self, sign: Sign) -> DMatrix<f64> {
        let mut m = &self.matrix * sign.factor();
        for i in 0..m.nrows() {
            m[(i, i)] += 1.0;
        }
        m
    }

    /// Singular values of `I ± A`, ascending.
    pub fn singular_values(&self, sign: Sign) -> Vec<f64> {
        let mut s: Vec<f64> = self.shifted(sign).singular_values().iter().copied().collect();
        s.sort_by(f64::total_cmp);
        s
    }
}

/// A linear side condition `Σ_j weights_j φ_j = target`; `weights` already
/// include the quadrature factors.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub weights: Vec<f64>,
    pub target: f64,
}

impl Constraint {
    /// `∫ φ ψ dσ = target`.
    pub fn moment(mesh: &Mesh, psi: &[f64], target: f64) -> Self {
        Constraint { weights: psi.iter().zip(&mesh.weight).map(|(p, w)| p * w).collect(), target }
    }
}

/// Functional against which the right-hand side must vanish, labelled for
/// error reports.
#[derive(Debug, Clone)]
pub struct NullVector {
    pub label: String,
    pub values: Vec<f64>,
}

/// Solves `(I ± A) φ = rhs` subject to `constraints`, bordering the system
/// with the adjoint null vectors as extra columns.
///
/// The number of constraints must equal the number of adjoint null vectors.
/// The right-hand side is checked against each adjoint null vector in the
/// `dσ` inner product first, relative to `max(‖rhs‖, reference)`; pass the
/// norm of the original data as `reference` when `rhs` is a projected
/// remainder that may be pure rounding.
pub fn solve_second_kind(
    op: &OperatorMatrix,
    sign: Sign,
    rhs: &[f64],
    constraints: &[Constraint],
    adjoint_null: &[NullVector],
    weights: &[f64],
    reference: f64,
) -> Result<Vec<f64>> {
    let n = op.len();
    if rhs.len() != n || weights.len() != n {
        return Err(arg(format!("right-hand side of length {} for a system of size {n}", rhs.len())));
    }
    if constraints.len() != adjoint_null.len() {
        return Err(arg(format!(
            "{} constraints given for a null space of dimension {}",
            constraints.len(),
            adjoint_null.len()
        )));
    }
    check_compatible(rhs, adjoint_null, weights, reference)?;

    let k = constraints.len();
    let mut m = DMatrix::zeros(n + k, n + k);
    m.view_mut((0, 0), (n, n)).copy_from(&op.shifted(sign));
    for (c, (con, psi)) in constraints.iter().zip(adjoint_null).enumerate() {
        if con.weights.len() != n || psi.values.len() != n {
            return Err(arg("constraint or null vector of wrong length"));
        }
        for i in 0..n {
            m[(i, n + c)] = psi.values[i];
            m[(n + c, i)] = con.weights[i];
        }
    }
    let mut b = DVector::zeros(n + k);
    b.rows_mut(0, n).copy_from_slice(rhs);
    for (c, con) in constraints.iter().enumerate() {
        b[n + c] = con.target;
    }
    let x = lu_solve(m, b)?;
    Ok(x.as_slice()[..n].to_vec())
}

fn check_compatible(rhs: &[f64], adjoint_null: &[NullVector], weights: &[f64], reference: f64) -> Result<()> {
    let norm = |v: &[f64]| v.iter().zip(weights).map(|(a, w)| a * a * w).sum::<f64>().sqrt();
    let g_norm = norm(rhs).max(reference);
    if g_norm == 0.0 {
        return Ok(());
    }
    for psi in adjoint_null {
        let residual: f64 = rhs.iter().zip(&psi.values).zip(weights).map(|((g, p), w)| g * p * w).sum();
        let relative = residual.abs() / (g_norm * norm(&psi.values));
        if relative > COMPAT_TOL {
            return Err(Error::Incompatible { functional: psi.label.clone(), residual, relative });
        }
    }
    Ok(())
}

/// Dense LU with partial pivoting; fails on relatively tiny pivots.
pub(crate) fn lu_solve(m: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    let lu = m.lu();
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.amax();
    let min = diag.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
    if !(max > 0.0) || min < PIVOT_TOL * max {
        return Err(Error::Rank(format!("bordered system is singular (pivot ratio {:e})", min / max)));
    }
    lu.solve(&b).ok_or_else(|| Error::Rank("LU solve failed".into()))
}

/// Canonical bases of the four null spaces on a domain with `m` holes.
#[derive(Debug, Clone, Serialize)]
pub struct NullSpaces {
    /// `e_0 ≡ 1` spans `ker(I - K)`; `e_1..e_m` (indicators of the inner
    /// components) span `ker(I + K)`.
    pub e: Vec<Vec<f64>>,
    /// `φ_0` spans `ker(I - K*)`; `φ_1..φ_m` span `ker(I + K*)` with
    /// `∫_{γ_i} φ_j dσ = δ_ij`.
    pub phi: Vec<Vec<f64>>,
    /// Smallest singular values of `I + K*` (first `m + 1`) and `I - K*` (first 2).
    pub plus_singular: Vec<f64>,
    pub minus_singular: Vec<f64>,
}

/// Right singular vectors of `m` for its `count` smallest singular values,
/// after checking that exactly `count` lie below [`NULL_TOL`].
fn numerical_null(m: DMatrix<f64>, count: usize, label: &str) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let n = m.nrows();
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let found = sorted.iter().take_while(|&&s| s < NULL_TOL).count();
    if found != count {
        return Err(Error::DegenerateDiscretization { operator: label.into(), expected: count, found });
    }
    let vectors = order[..count].iter().map(|&i| v_t.row(i).iter().copied().collect()).collect();
    Ok((vectors, sorted.into_iter().take(count + 1).collect()))
}

/// Nyström operators of one mesh, with lazily computed null spaces and
/// single-layer matrix.
#[derive(Debug)]
pub struct BoundaryOperators {
    pub mesh: Arc<Mesh>,
    pub k: OperatorMatrix,
    pub k_adj: OperatorMatrix,
    slp: OnceLock<DMatrix<f64>>,
    plus: OnceLock<(Vec<Vec<f64>>, Vec<f64>)>,
    minus: OnceLock<(Vec<f64>, Vec<f64>)>,
}

impl BoundaryOperators {
    pub fn new(mesh: Mesh) -> Self {
        Self::from_arc(Arc::new(mesh))
    }

    pub fn from_arc(mesh: Arc<Mesh>) -> Self {
        let (k, k_adj) = rayon::join(|| assemble_dlp(&mesh), || assemble_dlp_adjoint(&mesh));
        BoundaryOperators {
            mesh,
            k,
            k_adj,
            slp: OnceLock::new(),
            plus: OnceLock::new(),
            minus: OnceLock::new(),
        }
    }

    pub fn holes(&self) -> usize {
        self.mesh.holes()
    }

    pub fn slp(&self) -> &DMatrix<f64> {
        self.slp.get_or_init(|| assemble_slp(&self.mesh))
    }

    /// `φ_1..φ_m`, the normalized basis of `ker(I + K*)`.
    pub fn phi_inner(&self) -> Result<&[Vec<f64>]> {
        if let Some((v, _)) = self.plus.get() {
            return Ok(v);
        }
        let m = self.holes();
        let (raw, sv) = if m == 0 {
            (Vec::new(), self.k_adj.singular_values(Sign::Plus).into_iter().take(1).collect())
        } else {
            numerical_null(self.k_adj.shifted(Sign::Plus), m, "I + K*")?
        };
        let basis = if m == 0 { raw } else { self.normalize_inner(raw)? };
        Ok(&self.plus.get_or_init(|| (basis, sv)).0)
    }

    /// `φ_0` with `∫ φ_0 dσ = 1`, spanning `ker(I - K*)`.
    pub fn phi_0(&self) -> Result<&[f64]> {
        if let Some((v, _)) = self.minus.get() {
            return Ok(v);
        }
        let (mut raw, sv) = numerical_null(self.k_adj.shifted(Sign::Minus), 1, "I - K*")?;
        let mut v = raw.pop().expect("one vector");
        let total = self.mesh.integrate(&v);
        if total.abs() < 1e-300 {
            return Err(Error::DegenerateBasis("null vector of I - K* has zero integral".into()));
        }
        v.iter_mut().for_each(|x| *x /= total);
        Ok(&self.minus.get_or_init(|| (v, sv)).0)
    }

    /// Rescales a raw basis of `ker(I + K*)` so that `∫_{γ_i} φ_j dσ = δ_ij`.
    fn normalize_inner(&self, raw: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
        let m = raw.len();
        let moments = DMatrix::from_fn(m, m, |i, j| self.mesh.integrate_on(i + 1, &raw[j]));
        let inv = moments
            .clone()
            .try_inverse()
            .filter(|_| moments.clone().svd(false, false).singular_values.min() > 1e-12 * moments.amax())
            .ok_or_else(|| Error::DegenerateBasis("moment matrix of ker(I + K*) is singular".into()))?;
        let n = self.mesh.len();
        Ok((0..m)
            .map(|j| (0..n).map(|p| (0..m).map(|k| raw[k][p] * inv[(k, j)]).sum()).collect())
            .collect())
    }

    /// All four bases plus the smallest singular values.
    pub fn null_spaces(&self) -> Result<NullSpaces> {
        let m = self.holes();
        let mut phi = vec![self.phi_0()?.to_vec()];
        phi.extend(self.phi_inner()?.iter().cloned());
        let e = (0..=m).map(|c| self.mesh.indicator(c)).collect();
        Ok(NullSpaces {
            e,
            phi,
            plus_singular: self.plus.get().map(|p| p.1.clone()).unwrap_or_default(),
            minus_singular: self.minus.get().map(|p| p.1.clone()).unwrap_or_default(),
        })
    }

    fn null_vectors(&self, basis: &[Vec<f64>], name: &str, first: usize) -> Vec<NullVector> {
        basis
            .iter()
            .enumerate()
            .map(|(i, v)| NullVector { label: format!("∫ g {name}_{} dσ", i + first), values: v.clone() })
            .collect()
    }

    /// Adjoint null vectors of `I ± K` (`adjoint = false`) or `I ± K*`.
    pub fn adjoint_null(&self, sign: Sign, adjoint: bool) -> Result<Vec<NullVector>> {
        let m = self.holes();
        Ok(match (sign, adjoint) {
            (Sign::Plus, false) => self.null_vectors(self.phi_inner()?, "φ", 1),
            (Sign::Minus, false) => self.null_vectors(&[self.phi_0()?.to_vec()], "φ", 0),
            (Sign::Plus, true) => {
                let e: Vec<_> = (1..=m).map(|c| self.mesh.indicator(c)).collect();
                self.null_vectors(&e, "e", 1)
            }
            (Sign::Minus, true) => self.null_vectors(&[self.mesh.indicator(0)], "e", 0),
        })
    }

    /// `(I ± K)φ = rhs` or `(I ± K*)φ = rhs` with the given side conditions.
    pub fn solve(&self, sign: Sign, adjoint: bool, rhs: &[f64], constraints: &[Constraint]) -> Result<Vec<f64>> {
        self.solve_ref(sign, adjoint, rhs, constraints, 0.0)
    }

    /// [`Self::solve`] with the compatibility check measured against `reference`.
    pub fn solve_ref(
        &self,
        sign: Sign,
        adjoint: bool,
        rhs: &[f64],
        constraints: &[Constraint],
        reference: f64,
    ) -> Result<Vec<f64>> {
        let op = if adjoint { &self.k_adj } else { &self.k };
        let nulls = self.adjoint_null(sign, adjoint)?;
        solve_second_kind(op, sign, rhs, constraints, &nulls, &self.mesh.weight, reference)
    }

    /// `dσ`-norm of `f`.
    pub fn norm(&self, f: &[f64]) -> f64 {
        self.mesh.inner(f, f).sqrt()
    }

    /// The side conditions fixing the solution uniquely: `φ ⊥ ker(I ± K)` for
    /// the direct operator, `φ ⊥ ker(I ± K*)` for the adjoint.
    pub fn orthogonality(&self, sign: Sign, adjoint: bool) -> Result<Vec<Constraint>> {
        let mesh = &self.mesh;
        Ok(match (sign, adjoint) {
            (Sign::Plus, false) => (1..=self.holes()).map(|c| Constraint::moment(mesh, &mesh.indicator(c), 0.0)).collect(),
            (Sign::Minus, false) => vec![Constraint::moment(mesh, &mesh.indicator(0), 0.0)],
            (Sign::Plus, true) => self.phi_inner()?.iter().map(|p| Constraint::moment(mesh, p, 0.0)).collect(),
            (Sign::Minus, true) => vec![Constraint::moment(mesh, self.phi_0()?, 0.0)],
        })
    }

    /// Unique solution of `(I ± K)φ = rhs` (or the adjoint) orthogonal to the
    /// null space.
    pub fn solve_orthogonal(&self, sign: Sign, adjoint: bool, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solve_orthogonal_ref(sign, adjoint, rhs, 0.0)
    }

    pub fn solve_orthogonal_ref(&self, sign: Sign, adjoint: bool, rhs: &[f64], reference: f64) -> Result<Vec<f64>> {
        let cons = self.orthogonality(sign, adjoint)?;
        self.solve_ref(sign, adjoint, rhs, &cons, reference)
    }

    /// `∂_τ f = |γ'|⁻¹ ∂_t f`, componentwise and spectrally.
    pub fn tangential_derivative(&self, f: &[f64]) -> Result<Vec<f64>> {
        let mesh = &self.mesh;
        let mut out = vec![0.0; mesh.len()];
        for r in &mesh.ranges {
            let d = spectral_derivative(&f[r.range()], Grid::new(r.len)?, 1)?;
            for (k, j) in r.range().enumerate() {
                out[j] = d[k] / mesh.speed[j];
            }
        }
        Ok(out)
    }

    /// Componentwise arc-length antiderivative with zero `dσ`-mean on each
    /// component, and the closure residuals `∫_{γ_i} f dσ` that the periodic
    /// antiderivative had to drop.
    pub fn tangential_antiderivative(&self, f: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mesh = &self.mesh;
        let mut out = vec![0.0; mesh.len()];
        let mut closure = Vec::with_capacity(mesh.ranges.len());
        for (c, r) in mesh.ranges.iter().enumerate() {
            let dt: Vec<f64> = r.range().map(|j| f[j] * mesh.speed[j]).collect();
            let big = spectral_antiderivative(&dt, Grid::new(r.len)?)?;
            let mean = r.range().zip(&big).map(|(j, v)| v * mesh.weight[j]).sum::<f64>() / mesh.length(Some(c));
            for (k, j) in r.range().enumerate() {
                out[j] = big[k] - mean;
            }
            closure.push(mesh.integrate_on(c, f));
        }
        Ok((out, closure))
    }

    /// Solves `φ ± Kφ = g` through the tangential derivative: first the
    /// adjoint equation for `∂_τφ`, then integration along each component and
    /// the locally constant part.
    pub fn klem_tangential_path(&self, sign: Sign, g: &[f64]) -> Result<KlemDecomposition> {
        let mesh = &self.mesh;
        let m = self.holes();
        let dg = self.tangential_derivative(g)?;
        let adj = match sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        let phi1 = self.solve_orthogonal(adj, true, &dg)?;

        let (phi1_tilde, d) = match sign {
            Sign::Plus => {
                let phi0 = self.phi_0()?;
                let d0 = mesh.integrate(&phi1);
                let v = phi1.iter().zip(phi0).map(|(a, p)| a - d0 * p).collect::<Vec<_>>();
                (v, vec![d0])
            }
            Sign::Minus => {
                let basis = self.phi_inner()?;
                let d: Vec<f64> = (1..=m).map(|c| mesh.integrate_on(c, &phi1)).collect();
                let mut v = phi1.clone();
                for (di, p) in d.iter().zip(basis) {
                    v.iter_mut().zip(p).for_each(|(x, y)| *x -= di * y);
                }
                (v, d)
            }
        };
        let (phi_hat, closure) = self.tangential_antiderivative(&phi1_tilde)?;
        let k_hat = self.k.apply(&phi_hat);

        let mut c = vec![0.0; m + 1];
        match sign {
            Sign::Plus => {
                let r: Vec<f64> = g.iter().zip(&k_hat).map(|(a, b)| a - b).collect();
                let c0 = mesh.integrate(&r) / (2.0 * mesh.length(None));
                c.fill(-c0);
                c[0] = c0;
            }
            Sign::Minus => {
                let r: Vec<f64> = g.iter().zip(&k_hat).map(|(a, b)| a + b).collect();
                let mut inner = 0.0;
                for (i, ci) in c.iter_mut().enumerate().skip(1) {
                    let part = mesh.integrate_on(i, &r);
                    inner += part;
                    *ci = part / (2.0 * mesh.length(Some(i)));
                }
                c[0] = -inner / (2.0 * mesh.length(None));
            }
        }
        let phi = (0..mesh.len())
            .map(|j| {
                let comp = mesh.component[j];
                phi_hat[j] + c[0] + if comp > 0 { c[comp] } else { 0.0 }
            })
            .collect();
        Ok(KlemDecomposition { phi, phi_hat, phi1: phi1_tilde, coefficients: c, corrections: d, closure })
    }
}

/// Pieces of the tangential-path solution `φ = φ̂ + c_0 e_0 + Σ c_i e_i`.
#[derive(Debug, Clone, Serialize)]
pub struct KlemDecomposition {
    pub phi: Vec<f64>,
    pub phi_hat: Vec<f64>,
    /// `∂_τ φ̂` after the null-space correction.
    pub phi1: Vec<f64>,
    /// `c_0, c_1, …, c_m`.
    pub coefficients: Vec<f64>,
    /// `d_0` for `φ + Kφ = g`, `d_1..d_m` for `φ - Kφ = g`.
    pub corrections: Vec<f64>,
    /// `∫_{γ_i} ∂_τφ̂ dσ` per component; zero when the derivative closes up.
    pub closure: Vec<f64>,
}
