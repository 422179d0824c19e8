//! Riemann maps of simply connected domains and their third order Möbius
//! normalization at a boundary point.
//!
//! With `u` the interior Dirichlet solution for `-log|z - a|` and `φ` its
//! double-layer density, `F = 2Cφ` is holomorphic with `Re F = u`, so
//!
//! ```text
//! R(z) = (z - a) exp(F(z) - i Im F(a))
//! ```
//!
//! maps `Ω` onto the unit disc with `R(a) = 0` and `R'(a) > 0`. Boundary
//! values use the interior Cauchy trace `C⁺`.

use std::sync::Arc;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bvp::{solve_interior_dirichlet, HarmonicSolution};
use crate::error::{arg, Error, Result};
use crate::geometry::{Mesh, MIN_SPEED};
use crate::jet::Jet;
use crate::operators::BoundaryOperators;
use crate::potentials::{cauchy_traces, eval_cauchy};
use crate::quadrature::spectral_derivative_complex;

/// Relative tolerance on `Im R'(1)` when normalizing.
const REAL_TOL: f64 = 1e-6;

/// `L_c(w) = (1 - c̄)/(1 - c) · (w - c)/(1 - c̄ w)`, the disc automorphism
/// fixing 1 and sending `c` to 0.
pub fn disc_automorphism(c: Complex64, w: Complex64) -> Complex64 {
    disc_automorphism_derivatives(c, w)[0]
}

/// `[L_c, L_c', L_c'', L_c''']` at `w`.
pub fn disc_automorphism_derivatives(c: Complex64, w: Complex64) -> [Complex64; 4] {
    let cb = c.conj();
    let k = (1.0 - cb) / (1.0 - c);
    let d = 1.0 - cb * w;
    let m = k * (1.0 - c.norm_sqr());
    [k * (w - c) / d, m / (d * d), 2.0 * cb * m / (d * d * d), 6.0 * cb * cb * m / (d * d * d * d)]
}

/// `w ↦ L_c(rotation · w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub rotation: Complex64,
    pub c: Complex64,
}

impl Mobius {
    pub fn apply(&self, w: Complex64) -> Complex64 {
        disc_automorphism(self.c, self.rotation * w)
    }
}

/// Derivatives of `R` at the boundary point and the normalized invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusInvariants {
    pub r1: Complex64,
    pub r2: Complex64,
    pub r3: Complex64,
    pub s2: f64,
    pub s3: Complex64,
}

/// `S''(1)` and `S'''(1)` of the unique `S` with `S(1) = S'(1) = 1`,
/// `S''(1) ∈ ℝ`, from the derivatives at 1 of any Riemann map `R` with
/// `R(1) = 1`. `R'(1)` must be real and positive.
pub fn mobius_normalize(r1: Complex64, r2: Complex64, r3: Complex64) -> Result<MobiusInvariants> {
    if !(r1.norm() > 1e-12) {
        return Err(Error::CriticalPoint(r1.norm()));
    }
    if !(r1.re > 0.0) || r1.im.abs() > REAL_TOL * r1.norm() {
        return Err(arg(format!("R'(1) = {r1} is not real positive; the map is not normalized at the point")));
    }
    let p = r1.re;
    let i = Complex64::i();
    let q = 1.0 - p;
    let s2 = r2.re / p + q;
    let s3 = (r3 + 3.0 * q * r2 + 1.5 * q * q * p) / p + 1.5 * r2.im * r2.im / (p * p) - 3.0 * i * s2 * r2.im / p;
    Ok(MobiusInvariants { r1: Complex64::new(p, 0.0), r2, r3, s2, s3 })
}

/// How `t`-derivatives of a boundary trace are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMethod {
    /// Differentiate the trigonometric interpolant of the whole trace.
    Spectral,
    /// Least-squares polynomial of degree [`LOCAL_DEGREE`] through the
    /// `2·LOCAL_HALF + 1` nodes around the point. Unresolved features
    /// elsewhere on the curve do not alias into the result.
    #[default]
    Local,
}

pub const LOCAL_HALF: usize = 6;
pub const LOCAL_DEGREE: usize = 10;

fn local_t_derivatives(mesh: &Mesh, trace: &[Complex64], node: usize) -> Result<[Complex64; 3]> {
    let n = mesh.len();
    let m = 2 * LOCAL_HALF + 1;
    if n < 2 * m {
        return Err(arg(format!("local derivatives need at least {} nodes, got {n}", 2 * m)));
    }
    let offsets: Vec<(usize, f64)> = (0..m)
        .map(|i| {
            let j = (node + n + i - LOCAL_HALF) % n;
            let dt = (mesh.param[j] - mesh.param[node] + PI).rem_euclid(2.0 * PI) - PI;
            (j, dt)
        })
        .collect();
    let scale = offsets.iter().map(|(_, dt)| dt.abs()).fold(0.0, f64::max);
    let a = DMatrix::from_fn(m, LOCAL_DEGREE + 1, |i, k| (offsets[i].1 / scale).powi(k as i32));
    let svd = a.svd(true, true);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for part in 0..2 {
        let b = DVector::from_fn(m, |i, _| {
            let v = trace[offsets[i].0];
            if part == 0 { v.re } else { v.im }
        });
        let x = svd.solve(&b, 1e-13).map_err(|e| Error::Rank(format!("local fit: {e}")))?;
        let mut fact = 1.0;
        for k in 1..=3 {
            fact *= k as f64;
            let v = x[k] * fact / scale.powi(k as i32);
            if part == 0 {
                out[k - 1].re = v;
            } else {
                out[k - 1].im = v;
            }
        }
    }
    Ok(out)
}

/// `(R', R'', R''')` at node `p` from the boundary trace `R(γ(t_j))` of a
/// holomorphic function, by `t`-derivatives and the chain rule.
/// The trace must lie on a single component.
pub fn boundary_derivatives_of_trace(mesh: &Mesh, trace: &[Complex64], node: usize, method: DerivativeMethod) -> Result<[Complex64; 3]> {
    if mesh.ranges.len() != 1 {
        return Err(Error::UnsupportedTopology("boundary derivatives need a single boundary component".into()));
    }
    if trace.len() != mesh.len() {
        return Err(arg(format!("trace of length {} on {} nodes", trace.len(), mesh.len())));
    }
    if node >= mesh.len() {
        return Err(arg(format!("node {node} out of range 0..{}", mesh.len())));
    }
    if mesh.speed[node] < MIN_SPEED {
        return Err(Error::DegenerateCurve { t: mesh.param[node], speed: mesh.speed[node] });
    }
    let g = match method {
        DerivativeMethod::Spectral => {
            let mut g = [Complex64::new(0.0, 0.0); 3];
            for k in 1..=3 {
                g[k - 1] = spectral_derivative_complex(trace, k as u32)?[node];
            }
            g
        }
        DerivativeMethod::Local => local_t_derivatives(mesh, trace, node)?,
    };
    let (d1, d2, d3) = (mesh.d1[node], mesh.d2[node], mesh.d3[node]);
    let r1 = g[0] / d1;
    let r2 = (g[1] - r1 * d2) / (d1 * d1);
    let r3 = (g[2] - 3.0 * r2 * d1 * d2 - r1 * d3) / (d1 * d1 * d1);
    Ok([r1, r2, r3])
}

/// A Riemann map `Ω → 𝔻`, optionally followed by disc automorphisms.
#[derive(Debug, Clone)]
pub struct RiemannMap {
    /// The Dirichlet solution `u` for `-log|z - a|`.
    pub solution: HarmonicSolution,
    pub base: Complex64,
    /// `Im F(a)`, removed so that `v(a) = 0`.
    pub phase: f64,
    /// `R` at the boundary nodes before `post`.
    raw_boundary: Vec<Complex64>,
    pub post: Vec<Mobius>,
    pub derivatives: DerivativeMethod,
}

/// Riemann map of the domain of `ops` with `R(a) = 0`, `R'(a) > 0`.
pub fn riemann_map(ops: &Arc<BoundaryOperators>, a: Complex64) -> Result<RiemannMap> {
    let mesh = &ops.mesh;
    if ops.holes() > 0 {
        return Err(Error::UnsupportedTopology(format!(
            "Riemann maps need a simply connected domain, got {} inner components",
            ops.holes()
        )));
    }
    if !mesh.contains(a) {
        return Err(arg(format!("base point {a} is not inside the domain")));
    }
    let f: Vec<f64> = mesh.points.iter().map(|z| -(z - a).norm().ln()).collect();
    let solution = solve_interior_dirichlet(ops, &f)?;
    let phi: Vec<Complex64> = solution.dlp.as_ref().expect("Dirichlet density").iter().map(|&v| Complex64::new(2.0 * v, 0.0)).collect();
    let phase = eval_cauchy(mesh, &phi, &[a])?[0].im;
    let (plus, _) = cauchy_traces(mesh, &phi)?;
    let raw_boundary = mesh
        .points
        .iter()
        .zip(&plus)
        .map(|(z, big_f)| (z - a) * (big_f - Complex64::new(0.0, phase)).exp())
        .collect();
    Ok(RiemannMap { solution, base: a, phase, raw_boundary, post: Vec::new(), derivatives: DerivativeMethod::default() })
}

impl RiemannMap {
    pub fn mesh(&self) -> &Mesh {
        self.solution.mesh()
    }

    fn apply_post(&self, w: Complex64) -> Complex64 {
        self.post.iter().fold(w, |w, m| m.apply(w))
    }

    /// `R` at interior points.
    pub fn eval(&self, points: &[Complex64]) -> Result<Vec<Complex64>> {
        let mesh = self.mesh();
        if let Some(z) = points.iter().find(|z| !mesh.contains(**z)) {
            return Err(Error::WrongSide { x: z.re, y: z.im });
        }
        let phi: Vec<Complex64> = self.solution.dlp.as_ref().expect("Dirichlet density").iter().map(|&v| Complex64::new(2.0 * v, 0.0)).collect();
        let big_f = eval_cauchy(mesh, &phi, points)?;
        Ok(points
            .iter()
            .zip(big_f)
            .map(|(z, f)| self.apply_post((z - self.base) * (f - Complex64::new(0.0, self.phase)).exp()))
            .collect())
    }

    /// `R` at the boundary nodes.
    pub fn boundary_values(&self) -> Vec<Complex64> {
        self.raw_boundary.iter().map(|&w| self.apply_post(w)).collect()
    }

    /// `max_j ||R(γ_j)| - 1|`.
    pub fn modulus_defect(&self) -> f64 {
        self.boundary_values().iter().map(|w| (w.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn with_derivatives(mut self, method: DerivativeMethod) -> Self {
        self.derivatives = method;
        self
    }

    /// Derivatives of the raw map from its trace, pushed through `post`
    /// exactly.
    pub fn boundary_derivatives(&self, node: usize) -> Result<[Complex64; 3]> {
        let [r1, r2, r3] = boundary_derivatives_of_trace(self.mesh(), &self.raw_boundary, node, self.derivatives)?;
        let jet = self.post.iter().fold(Jet([self.raw_boundary[node], r1, r2, r3]), |j, m| {
            let rotated = Jet(j.0.map(|x| x * m.rotation));
            rotated.chain(disc_automorphism_derivatives(m.c, rotated.value()))
        });
        Ok([jet.d(1), jet.d(2), jet.d(3)])
    }

    /// The map followed by `L_c` (which fixes 1 and moves `c` to 0).
    pub fn post_composed(&self, c: Complex64) -> Result<RiemannMap> {
        if !(c.norm() < 1.0) {
            return Err(arg(format!("|c| = {} is not below 1", c.norm())));
        }
        let mut out = self.clone();
        out.post.push(Mobius { rotation: Complex64::new(1.0, 0.0), c });
        Ok(out)
    }

    /// The map rotated so that node `p` goes to 1.
    pub fn normalized_at(&self, node: usize) -> Result<RiemannMap> {
        let w = *self.boundary_values().get(node).ok_or_else(|| arg(format!("node {node} out of range")))?;
        let mut out = self.clone();
        out.post.push(Mobius { rotation: w.conj() / w.norm(), c: Complex64::new(0.0, 0.0) });
        Ok(out)
    }

    /// Invariants at boundary node `p`. The domain is moved rigidly by
    /// `w ↦ γ(p) + ν(p)(w - 1)` so that `∂Ω` is tangent to the unit circle at
    /// 1 with the same outward normal, and `R` is rotated so that `R(p) = 1`;
    /// then `R̃^{(k)}(1) = R(p)̄ ν^k R^{(k)}(γ(p))`.
    pub fn invariants_at(&self, node: usize) -> Result<MobiusInvariants> {
        let [r1, r2, r3] = self.boundary_derivatives(node)?;
        let w = self.boundary_values()[node];
        let rot = w.conj() / w.norm();
        let nu = self.mesh().normal[node];
        mobius_normalize(rot * nu * r1, rot * nu * nu * r2, rot * nu * nu * nu * r3)
    }
}
