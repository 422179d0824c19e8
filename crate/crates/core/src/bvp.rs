//! Interior and exterior Dirichlet and Neumann problems.
//!
//! | problem            | equation                          | side condition            | solution            |
//! |--------------------|-----------------------------------|---------------------------|---------------------|
//! | interior Dirichlet | `(I + K)φ = f - Σ c_i e_i`        | `∫_{γ_i} φ dσ = 0`, i ≥ 1 | `Uφ + Σ c_i μ_ij Wφ_j` |
//! | exterior Dirichlet | `(I - K)φ = -(f - c_0)`           | `∫ φ dσ = 0`              | `Uφ + c_0`          |
//! | interior Neumann   | `(I - K*)φ = -g`                  | `∫ φ φ_0 dσ = 0`          | `Wφ - mean`         |
//! | exterior Neumann   | `(I + K*)φ = g`                   | none (`m = 0`)            | `Wφ - mean`         |
//!
//! with `c_i = ∫ f φ_i dσ` and `μ = (Wφ_i|_{γ_j})⁻¹`. Neumann solutions are
//! normalized to zero `dσ`-mean on `∂Ω`; exterior problems need a simply
//! connected `Ω`.

use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::operators::{BoundaryOperators, Constraint, Sign};
use crate::potentials::{boundary_values, eval_dlp, eval_slp, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    InteriorDirichlet,
    ExteriorDirichlet,
    InteriorNeumann,
    ExteriorNeumann,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::InteriorDirichlet,
        ProblemKind::ExteriorDirichlet,
        ProblemKind::InteriorNeumann,
        ProblemKind::ExteriorNeumann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::InteriorDirichlet => "interior-dirichlet",
            ProblemKind::ExteriorDirichlet => "exterior-dirichlet",
            ProblemKind::InteriorNeumann => "interior-neumann",
            ProblemKind::ExteriorNeumann => "exterior-neumann",
        }
    }

    pub fn is_interior(self) -> bool {
        matches!(self, ProblemKind::InteriorDirichlet | ProblemKind::InteriorNeumann)
    }

    pub fn is_dirichlet(self) -> bool {
        matches!(self, ProblemKind::InteriorDirichlet | ProblemKind::ExteriorDirichlet)
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| arg(format!("unknown problem '{s}'")))
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How the interior Dirichlet density is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirichletMethod {
    /// Bordered dense solve.
    #[default]
    Bordered,
    /// Through the tangential derivative and the adjoint equation.
    Tangential,
}

/// A solved boundary value problem: `u = U[dlp] + W[slp] + constant` on the
/// side given by `kind`.
#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    pub kind: ProblemKind,
    pub ops: Arc<BoundaryOperators>,
    /// Boundary data (`f` or `g`) at the nodes.
    pub data: Vec<f64>,
    /// Double-layer density `φ` (Dirichlet).
    pub dlp: Option<Vec<f64>>,
    /// Single-layer density: `Σ c_i μ_ij φ_j` (interior Dirichlet with holes) or `φ` (Neumann).
    pub slp: Option<Vec<f64>>,
    /// `c_i = ∫ f φ_i dσ`; `c_1..c_m` for interior, `[c_0]` for exterior Dirichlet.
    pub coefficients: Vec<f64>,
    /// `μ = (Wφ_i|_{γ_j})⁻¹`, row-major `m × m`.
    pub mu: Vec<Vec<f64>>,
    /// Condition number of `(Wφ_i|_{γ_j})`.
    pub mu_condition: Option<f64>,
    /// Largest per-component spread of `Wφ_i` on `γ_j` (zero for exactly locally constant traces).
    pub w_spread: Option<f64>,
    pub constant: f64,
    /// `max |trace - data|` (Dirichlet) or `max |∂_ν u - data|` (Neumann).
    pub residual: f64,
}

fn require_simply_connected(ops: &BoundaryOperators, what: &str) -> Result<()> {
    if ops.holes() > 0 {
        return Err(Error::UnsupportedTopology(format!(
            "{what} requires a simply connected domain, got {} inner components",
            ops.holes()
        )));
    }
    Ok(())
}

fn check_data(ops: &BoundaryOperators, data: &[f64]) -> Result<()> {
    if data.len() != ops.mesh.len() {
        return Err(arg(format!("boundary data of length {} for {} nodes", data.len(), ops.mesh.len())));
    }
    if let Some(j) = data.iter().position(|v| !v.is_finite()) {
        return Err(arg(format!("boundary data is not finite at node {j}")));
    }
    Ok(())
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn solve(ops: &Arc<BoundaryOperators>, kind: ProblemKind, data: &[f64]) -> Result<HarmonicSolution> {
    match kind {
        ProblemKind::InteriorDirichlet => solve_interior_dirichlet(ops, data),
        ProblemKind::ExteriorDirichlet => solve_exterior_dirichlet(ops, data),
        ProblemKind::InteriorNeumann => solve_interior_neumann(ops, data),
        ProblemKind::ExteriorNeumann => solve_exterior_neumann(ops, data),
    }
}

pub fn solve_interior_dirichlet(ops: &Arc<BoundaryOperators>, f: &[f64]) -> Result<HarmonicSolution> {
    solve_interior_dirichlet_with(ops, f, DirichletMethod::Bordered)
}

pub fn solve_interior_dirichlet_with(
    ops: &Arc<BoundaryOperators>,
    f: &[f64],
    method: DirichletMethod,
) -> Result<HarmonicSolution> {
    check_data(ops, f)?;
    let mesh = &ops.mesh;
    let m = ops.holes();
    let basis = ops.phi_inner()?;
    let coefficients: Vec<f64> = basis.iter().map(|p| mesh.inner(f, p)).collect();
    let mut g = f.to_vec();
    for (c, ci) in coefficients.iter().enumerate() {
        for j in mesh.ranges[c + 1].range() {
            g[j] -= ci;
        }
    }
    let phi = match method {
        DirichletMethod::Bordered => ops.solve_orthogonal_ref(Sign::Plus, false, &g, ops.norm(f))?,
        DirichletMethod::Tangential => ops.klem_tangential_path(Sign::Plus, &g)?.phi,
    };

    let (slp, mu, mu_condition, w_spread) = if m > 0 {
        // M_ij = Wφ_i on γ_j, read off as the dσ-mean of the trace
        let traces: Vec<Vec<f64>> = basis
            .iter()
            .map(|p| boundary_values(ops, p, Trace::Slp))
            .collect::<Result<_>>()?;
        let mut spread: f64 = 0.0;
        let big_m = DMatrix::from_fn(m, m, |i, j| {
            let comp = j + 1;
            let mean = mesh.integrate_on(comp, &traces[i]) / mesh.length(Some(comp));
            for k in mesh.ranges[comp].range() {
                spread = spread.max((traces[i][k] - mean).abs());
            }
            mean
        });
        let sv = big_m.clone().svd(false, false).singular_values;
        let (smax, smin) = (sv.max(), sv.min());
        if !(smin > 1e-12 * smax) {
            return Err(Error::DegenerateBasis(format!("matrix (Wφ_i|γ_j) is singular (σ_min/σ_max = {:e})", smin / smax)));
        }
        let mu = big_m.try_inverse().ok_or_else(|| Error::DegenerateBasis("matrix (Wφ_i|γ_j) is singular".into()))?;
        let mut psi = vec![0.0; mesh.len()];
        for i in 0..m {
            for j in 0..m {
                let w = coefficients[i] * mu[(i, j)];
                psi.iter_mut().zip(&basis[j]).for_each(|(a, b)| *a += w * b);
            }
        }
        let mu_rows = (0..m).map(|i| (0..m).map(|j| mu[(i, j)]).collect()).collect();
        (Some(psi), mu_rows, Some(smax / smin), Some(spread))
    } else {
        (None, Vec::new(), None, None)
    };

    let mut sol = HarmonicSolution {
        kind: ProblemKind::InteriorDirichlet,
        ops: ops.clone(),
        data: f.to_vec(),
        dlp: Some(phi),
        slp,
        coefficients,
        mu,
        mu_condition,
        w_spread,
        constant: 0.0,
        residual: 0.0,
    };
    sol.residual = max_abs_diff(&sol.trace()?, f);
    Ok(sol)
}

pub fn solve_exterior_dirichlet(ops: &Arc<BoundaryOperators>, f: &[f64]) -> Result<HarmonicSolution> {
    require_simply_connected(ops, "the exterior Dirichlet problem")?;
    check_data(ops, f)?;
    let mesh = &ops.mesh;
    let c0 = mesh.inner(f, ops.phi_0()?);
    let rhs: Vec<f64> = f.iter().map(|v| c0 - v).collect();
    let phi = ops.solve_orthogonal_ref(Sign::Minus, false, &rhs, ops.norm(f))?;
    let mut sol = HarmonicSolution {
        kind: ProblemKind::ExteriorDirichlet,
        ops: ops.clone(),
        data: f.to_vec(),
        dlp: Some(phi),
        slp: None,
        coefficients: vec![c0],
        mu: Vec::new(),
        mu_condition: None,
        w_spread: None,
        constant: c0,
        residual: 0.0,
    };
    sol.residual = max_abs_diff(&sol.trace()?, f);
    Ok(sol)
}

fn neumann(ops: &Arc<BoundaryOperators>, kind: ProblemKind, g: &[f64], phi: Vec<f64>) -> Result<HarmonicSolution> {
    let mesh = &ops.mesh;
    let w = boundary_values(ops, &phi, Trace::Slp)?;
    let mean = mesh.integrate(&w) / mesh.length(None);
    let mut sol = HarmonicSolution {
        kind,
        ops: ops.clone(),
        data: g.to_vec(),
        dlp: None,
        slp: Some(phi),
        coefficients: Vec::new(),
        mu: Vec::new(),
        mu_condition: None,
        w_spread: None,
        constant: -mean,
        residual: 0.0,
    };
    sol.residual = max_abs_diff(&sol.normal_derivative()?, g);
    Ok(sol)
}

pub fn solve_interior_neumann(ops: &Arc<BoundaryOperators>, g: &[f64]) -> Result<HarmonicSolution> {
    check_data(ops, g)?;
    let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
    let phi = ops.solve(Sign::Minus, true, &rhs, &[Constraint::moment(&ops.mesh, ops.phi_0()?, 0.0)])
        .map_err(|e| match e {
            Error::Incompatible { residual, relative, .. } => Error::Incompatible {
                functional: "∫ g dσ".into(),
                residual: -residual,
                relative,
            },
            other => other,
        })?;
    neumann(ops, ProblemKind::InteriorNeumann, g, phi)
}

pub fn solve_exterior_neumann(ops: &Arc<BoundaryOperators>, g: &[f64]) -> Result<HarmonicSolution> {
    require_simply_connected(ops, "the exterior Neumann problem")?;
    check_data(ops, g)?;
    let mesh = &ops.mesh;
    // harmonic at ∞ needs ∫φ dσ = 0, i.e. ∫g dσ = 0
    let residual = mesh.integrate(g);
    let g_norm = mesh.inner(g, g).sqrt();
    let relative = if g_norm > 0.0 { residual.abs() / (g_norm * mesh.length(None).sqrt()) } else { 0.0 };
    if relative > crate::operators::COMPAT_TOL {
        return Err(Error::Incompatible { functional: "∫ g dσ".into(), residual, relative });
    }
    let phi = ops.solve(Sign::Plus, true, g, &[])?;
    neumann(ops, ProblemKind::ExteriorNeumann, g, phi)
}

/// `ι_a(z) = 1/(z - a) + a`, an involution exchanging `a` and `∞`.
pub fn inversion(a: Complex64, z: Complex64) -> Complex64 {
    1.0 / (z - a) + a
}

impl HarmonicSolution {
    pub fn mesh(&self) -> &crate::geometry::Mesh {
        &self.ops.mesh
    }

    fn check_side(&self, points: &[Complex64]) -> Result<()> {
        for &z in points {
            if self.ops.mesh.contains(z) != self.kind.is_interior() {
                return Err(Error::WrongSide { x: z.re, y: z.im });
            }
        }
        Ok(())
    }

    pub fn eval(&self, points: &[Complex64]) -> Result<Vec<f64>> {
        self.check_side(points)?;
        let mesh = &self.ops.mesh;
        let mut out = vec![self.constant; points.len()];
        if let Some(phi) = &self.dlp {
            out.iter_mut().zip(eval_dlp(mesh, phi, points)?).for_each(|(a, b)| *a += b);
        }
        if let Some(psi) = &self.slp {
            out.iter_mut().zip(eval_slp(mesh, psi, points)?).for_each(|(a, b)| *a += b);
        }
        Ok(out)
    }

    /// Interior Dirichlet solution without the `Σ c_i μ_ij Wφ_j` term.
    pub fn eval_without_correction(&self, points: &[Complex64]) -> Result<Vec<f64>> {
        self.check_side(points)?;
        let phi = self.dlp.as_ref().ok_or_else(|| arg("solution has no double-layer part"))?;
        let mut out = eval_dlp(&self.ops.mesh, phi, points)?;
        out.iter_mut().for_each(|v| *v += self.constant);
        Ok(out)
    }

    /// Boundary values of `u` from its own side.
    pub fn trace(&self) -> Result<Vec<f64>> {
        let mut out = vec![self.constant; self.ops.mesh.len()];
        if let Some(phi) = &self.dlp {
            let t = if self.kind.is_interior() { Trace::DlpInterior } else { Trace::DlpExterior };
            out.iter_mut().zip(boundary_values(&self.ops, phi, t)?).for_each(|(a, b)| *a += b);
        }
        if let Some(psi) = &self.slp {
            out.iter_mut().zip(boundary_values(&self.ops, psi, Trace::Slp)?).for_each(|(a, b)| *a += b);
        }
        Ok(out)
    }

    /// Outward normal derivative of a Neumann solution from its own side.
    pub fn normal_derivative(&self) -> Result<Vec<f64>> {
        let phi = self.slp.as_ref().filter(|_| !self.kind.is_dirichlet());
        let phi = phi.ok_or_else(|| arg("normal derivatives are available for Neumann solutions"))?;
        let t = if self.kind.is_interior() { Trace::SlpNormalInterior } else { Trace::SlpNormalExterior };
        boundary_values(&self.ops, phi, t)
    }

    /// `∫_{∂Ω} u dσ`.
    pub fn boundary_mean(&self) -> Result<f64> {
        let mesh = &self.ops.mesh;
        Ok(mesh.integrate(&self.trace()?) / mesh.length(None))
    }

    /// Removability defect of an exterior solution at `∞`: `v = u∘ι_a` is
    /// averaged over circles of radius `ε` and `ε/2` about `a`. A function
    /// harmonic across `a` has equal means; a `log|z|` term shows up as
    /// `c·log 2`.
    pub fn infinity_defect(&self, a: Complex64, eps: f64) -> Result<f64> {
        if self.kind.is_interior() {
            return Err(arg("the behaviour at ∞ concerns exterior solutions"));
        }
        let ring = |r: f64| -> Vec<Complex64> {
            (0..32).map(|k| inversion(a, a + Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 32.0))).collect()
        };
        let mean = |r: f64| -> Result<f64> { Ok(self.eval(&ring(r))?.iter().sum::<f64>() / 32.0) };
        Ok((mean(eps)? - mean(0.5 * eps)?).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, BoundaryCurve, CurveShape, MultiDomain};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ops_for(d: MultiDomain, n: usize) -> Arc<BoundaryOperators> {
        Arc::new(BoundaryOperators::new(d.discretize_uniform(n).unwrap()))
    }

    fn disc(n: usize) -> Arc<BoundaryOperators> {
        ops_for(MultiDomain::simply_connected(CurveShape::circle(c(0.0, 0.0), 1.0)).unwrap(), n)
    }

    fn ellipse(n: usize) -> Arc<BoundaryOperators> {
        ops_for(MultiDomain::simply_connected(CurveShape::ellipse(c(0.0, 0.0), 1.0, 0.6)).unwrap(), n)
    }

    fn annulus(n: usize) -> Arc<BoundaryOperators> {
        ops_for(
            make_domain(
                BoundaryCurve::new(CurveShape::circle(c(0.0, 0.0), 2.0)),
                vec![BoundaryCurve::new(CurveShape::circle(c(0.0, 0.0), 0.5))],
            )
            .unwrap(),
            n,
        )
    }

    #[test]
    fn constants_are_reproduced() {
        for ops in [ellipse(64), annulus(128)] {
            let f = vec![5.0; ops.mesh.len()];
            let sol = solve_interior_dirichlet(&ops, &f).unwrap();
            assert!(sol.residual < 1e-9);
            let probe = if ops.holes() > 0 { c(1.0, 0.6) } else { c(0.1, 0.0) };
            assert_abs_diff_eq!(sol.eval(&[probe]).unwrap()[0], 5.0, epsilon = 1e-9);
        }
        let ops = disc(64);
        let sol = solve_exterior_dirichlet(&ops, &vec![2.5; 64]).unwrap();
        assert_abs_diff_eq!(sol.eval(&[c(3.0, -1.0)]).unwrap()[0], 2.5, epsilon = 1e-9);
    }

    #[test]
    fn ellipse_dirichlet_cubic() {
        let ops = ellipse(256);
        let f: Vec<f64> = ops.mesh.points.iter().map(|z| (z * z * z).re).collect();
        let sol = solve_interior_dirichlet(&ops, &f).unwrap();
        for &z in &[c(0.0, 0.0), c(0.5, 0.1), c(-0.3, -0.3), c(0.2, 0.35)] {
            assert_abs_diff_eq!(sol.eval(&[z]).unwrap()[0], (z * z * z).re, epsilon = 1e-8);
        }
        assert!(matches!(sol.eval(&[c(2.0, 0.0)]), Err(Error::WrongSide { .. })));
    }

    #[test]
    fn annulus_log_needs_the_correction() {
        let ops = annulus(128);
        let f: Vec<f64> = ops.mesh.points.iter().map(|z| z.norm().ln()).collect();
        let sol = solve_interior_dirichlet(&ops, &f).unwrap();
        assert!(sol.w_spread.unwrap() < 1e-7);
        let pts = [c(1.0, 0.0), c(0.0, 1.3), c(-0.9, -0.6)];
        let u = sol.eval(&pts).unwrap();
        let bare = sol.eval_without_correction(&pts).unwrap();
        for (k, z) in pts.iter().enumerate() {
            assert_abs_diff_eq!(u[k], z.norm().ln(), epsilon = 1e-7);
        }
        let worst = bare.iter().zip(&pts).map(|(v, z)| (v - z.norm().ln()).abs()).fold(0.0, f64::max);
        assert!(worst > 1e-2);
    }

    #[test]
    fn tangential_method_agrees() {
        let ops = annulus(128);
        let f: Vec<f64> = ops.mesh.points.iter().map(|z| z.norm().ln() + (z * z).re * 0.1).collect();
        let a = solve_interior_dirichlet(&ops, &f).unwrap();
        let b = solve_interior_dirichlet_with(&ops, &f, DirichletMethod::Tangential).unwrap();
        let pts = [c(1.1, 0.0), c(0.0, -1.2)];
        let (ua, ub) = (a.eval(&pts).unwrap(), b.eval(&pts).unwrap());
        for k in 0..pts.len() {
            assert_abs_diff_eq!(ua[k], ub[k], epsilon = 1e-7);
        }
    }

    #[test]
    fn exterior_dirichlet_on_disc() {
        let ops = disc(256);
        let f: Vec<f64> = ops.mesh.param.iter().map(|t| t.cos()).collect();
        let sol = solve_exterior_dirichlet(&ops, &f).unwrap();
        for &(r, th) in &[(1.2, 0.3), (2.0, 2.0), (5.0, -1.0)] {
            let z = Complex64::from_polar(r, th);
            assert_abs_diff_eq!(sol.eval(&[z]).unwrap()[0], th.cos() / r, epsilon = 1e-8);
        }
        // the dipole cos θ / r decays like 1/r; a constant stays flat at |z| = 1e3
        let spread = |sol: &HarmonicSolution| {
            let far: Vec<f64> = (0..16).map(|k| sol.eval(&[Complex64::from_polar(1e3, k as f64)]).unwrap()[0]).collect();
            far.iter().cloned().fold(f64::MIN, f64::max) - far.iter().cloned().fold(f64::MAX, f64::min)
        };
        let s = spread(&sol);
        assert!(s * 1e3 <= 2.0 && s * 1e3 > 1.9);
        let flat = solve_exterior_dirichlet(&ops, &vec![0.7; 256]).unwrap();
        assert!(spread(&flat) <= 1e-6);
        assert!(sol.infinity_defect(c(0.0, 0.0), 0.1).unwrap() < 1e-10);
        assert!(matches!(solve_exterior_dirichlet(&annulus(32), &vec![0.0; 64]), Err(Error::UnsupportedTopology(_))));
    }

    #[test]
    fn neumann_on_disc() {
        let ops = disc(256);
        let g: Vec<f64> = ops.mesh.param.iter().map(|t| t.cos()).collect();
        let int = solve_interior_neumann(&ops, &g).unwrap();
        let ext = solve_exterior_neumann(&ops, &g).unwrap();
        for &(r, th) in &[(0.5, 0.3), (0.2, 2.0)] {
            let z = Complex64::from_polar(r, th);
            assert_abs_diff_eq!(int.eval(&[z]).unwrap()[0], r * th.cos(), epsilon = 1e-8);
        }
        for &(r, th) in &[(1.2, 0.3), (3.0, 2.0)] {
            let z = Complex64::from_polar(r, th);
            assert_abs_diff_eq!(ext.eval(&[z]).unwrap()[0], -th.cos() / r, epsilon = 1e-7);
        }
        assert!(int.boundary_mean().unwrap().abs() < 1e-9);
        assert!(ext.boundary_mean().unwrap().abs() < 1e-9);
        assert!(ext.infinity_defect(c(0.0, 0.0), 0.1).unwrap() < 1e-10);

        let ones = vec![1.0; 256];
        match solve_interior_neumann(&ops, &ones).unwrap_err() {
            Error::Incompatible { residual, .. } => assert_abs_diff_eq!(residual, 2.0 * PI, epsilon = 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(solve_exterior_neumann(&ops, &ones), Err(Error::Incompatible { .. })));
        let zero = solve_interior_neumann(&ops, &vec![0.0; 256]).unwrap();
        assert!(zero.eval(&[c(0.3, 0.3)]).unwrap()[0].abs() < 1e-14);
    }

    #[test]
    fn ellipse_neumann_quadratic() {
        let ops = ellipse(256);
        let m = &ops.mesh;
        // ∂_ν Re z² = Re(2z ν̄)... written out: ∇(x² - y²)·ν
        let g: Vec<f64> = m.points.iter().zip(&m.normal).map(|(z, n)| 2.0 * z.re * n.re - 2.0 * z.im * n.im).collect();
        let sol = solve_interior_neumann(&ops, &g).unwrap();
        let f: Vec<f64> = m.points.iter().map(|z| (z * z).re).collect();
        let mean = m.integrate(&f) / m.length(None);
        for &z in &[c(0.0, 0.0), c(0.4, 0.2), c(-0.5, -0.1)] {
            assert_abs_diff_eq!(sol.eval(&[z]).unwrap()[0], (z * z).re - mean, epsilon = 1e-6);
        }
        // Neumann then trace reproduces the mean-free Dirichlet data
        let tr = sol.trace().unwrap();
        for (a, b) in tr.iter().zip(&f) {
            assert_abs_diff_eq!(*a, b - mean, epsilon = 1e-6);
        }
        let again = solve_interior_neumann(&ops, &g).unwrap();
        assert!(max_abs_diff(again.slp.as_ref().unwrap(), sol.slp.as_ref().unwrap()) <= 1e-10);
    }

    #[test]
    fn mean_value_at_center() {
        let ops = disc(64);
        let f: Vec<f64> = ops.mesh.param.iter().map(|t| (t.sin()).exp()).collect();
        let sol = solve_interior_dirichlet(&ops, &f).unwrap();
        let mean = ops.mesh.integrate(&f) / (2.0 * PI);
        assert_abs_diff_eq!(sol.eval(&[c(0.0, 0.0)]).unwrap()[0], mean, epsilon = 1e-9);
    }

    #[test]
    fn linear_in_data() {
        let ops = ellipse(128);
        let base: Vec<f64> = ops.mesh.points.iter().map(|z| (z * z).re).collect();
        let probe = [c(0.3, 0.0)];
        let u: Vec<f64> = [0.0, 0.1, 0.2]
            .iter()
            .map(|l| {
                let f: Vec<f64> = base.iter().map(|v| (1.0 + l) * v).collect();
                solve_interior_dirichlet(&ops, &f).unwrap().eval(&probe).unwrap()[0]
            })
            .collect();
        assert!((u[2] - 2.0 * u[1] + u[0]).abs() <= 1e-9);
    }

    #[test]
    fn problem_names_round_trip() {
        for k in ProblemKind::ALL {
            assert_eq!(k.name().parse::<ProblemKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!("dirichlet".parse::<ProblemKind>().is_err());
    }
}
