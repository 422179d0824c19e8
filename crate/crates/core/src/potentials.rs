//! Double-layer `U`, single-layer `W` and Cauchy `C` potentials.
//!
//! Off the boundary every potential is a plain trapezoid sum and targets must
//! stay [`BAND_SPACINGS`] node spacings away from `∂Ω`. On the boundary the
//! traces come from the jump relations:
//!
//! ```text
//! U⁺f = f + Kf      U⁻f = -f + Kf
//! ∂_ν W f (interior side) = -f + K*f
//! ∂_ν W f (exterior side) =  f + K*f
//! C⁺f - C⁻f = f
//! ```
//!
//! `+` is the interior side throughout and `ν` the outward normal of `Ω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::geometry::Mesh;
use crate::kernels::{cauchy_entry, dlp_point, slp_point};
use crate::operators::BoundaryOperators;
use crate::quadrature::{spectral_derivative_complex, upsample};

/// Width of the excluded band around `∂Ω`, in node spacings.
pub const BAND_SPACINGS: f64 = 5.0;

/// Refinement used by [`richardson_trace`].
pub const RICHARDSON_UPSAMPLE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Interior,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// Double layer.
    U,
    /// Single layer.
    W,
}

/// Checks that `z` is outside the band of [`BAND_SPACINGS`] spacings.
pub fn check_band(mesh: &Mesh, z: Complex64) -> Result<()> {
    let band = BAND_SPACINGS * mesh.max_spacing();
    let distance = mesh.distance(z);
    if !(distance >= band) {
        return Err(Error::NearBoundary { x: z.re, y: z.im, distance, band });
    }
    Ok(())
}

fn check_len(mesh: &Mesh, len: usize) -> Result<()> {
    if len != mesh.len() {
        return Err(arg(format!("density of length {len} on a mesh of {} nodes", mesh.len())));
    }
    Ok(())
}

fn eval_points<T: Send>(mesh: &Mesh, points: &[Complex64], f: impl Fn(Complex64) -> T + Sync) -> Result<Vec<T>> {
    points.iter().try_for_each(|&z| check_band(mesh, z))?;
    Ok(points.par_iter().map(|&z| f(z)).collect())
}

/// `Uf(z) = (1/π) ∫ f(ζ) ∂_{τ_ζ} arg(z - ζ) dσ(ζ)`.
pub fn eval_dlp(mesh: &Mesh, density: &[f64], points: &[Complex64]) -> Result<Vec<f64>> {
    check_len(mesh, density.len())?;
    eval_points(mesh, points, |z| dlp_sum(mesh, density, z))
}

fn dlp_sum(mesh: &Mesh, density: &[f64], z: Complex64) -> f64 {
    (0..mesh.len()).map(|j| dlp_point(z, mesh.points[j], mesh.normal[j]) * density[j] * mesh.weight[j]).sum()
}

/// `Wf(z) = (1/π) ∫ f(ζ) log|z - ζ| dσ(ζ)` off the boundary.
pub fn eval_slp(mesh: &Mesh, density: &[f64], points: &[Complex64]) -> Result<Vec<f64>> {
    check_len(mesh, density.len())?;
    eval_points(mesh, points, |z| slp_sum(mesh, density, z))
}

fn slp_sum(mesh: &Mesh, density: &[f64], z: Complex64) -> f64 {
    (0..mesh.len()).map(|j| slp_point(z, mesh.points[j]) * density[j] * mesh.weight[j]).sum()
}

/// `Cf(z) = (1/2πi) ∫ f(ζ)/(ζ - z) dζ`.
pub fn eval_cauchy(mesh: &Mesh, density: &[Complex64], points: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(mesh, density.len())?;
    eval_points(mesh, points, |z| cauchy_sum(mesh, density, z))
}

fn cauchy_sum(mesh: &Mesh, density: &[Complex64], z: Complex64) -> Complex64 {
    (0..mesh.len()).map(|j| density[j] * cauchy_entry(mesh, z, j) * mesh.step(j)).sum()
}

/// Boundary trace of `W f` (continuous across `∂Ω`).
pub fn slp_trace(ops: &BoundaryOperators, density: &[f64]) -> Result<Vec<f64>> {
    check_len(&ops.mesh, density.len())?;
    Ok(mat_vec(ops.slp(), density))
}

fn mat_vec(m: &nalgebra::DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec()
}

/// Which boundary trace [`boundary_values`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trace {
    /// `U⁺f = f + Kf`.
    DlpInterior,
    /// `U⁻f = -f + Kf`.
    DlpExterior,
    /// `W f` on `∂Ω`.
    Slp,
    /// Outward normal derivative of `W f` from inside: `-f + K*f`.
    SlpNormalInterior,
    /// Outward normal derivative of `W f` from outside: `f + K*f`.
    SlpNormalExterior,
}

pub fn boundary_values(ops: &BoundaryOperators, density: &[f64], trace: Trace) -> Result<Vec<f64>> {
    check_len(&ops.mesh, density.len())?;
    let combine = |a: Vec<f64>, s: f64| -> Vec<f64> { a.iter().zip(density).map(|(k, f)| k + s * f).collect() };
    Ok(match trace {
        Trace::DlpInterior => combine(ops.k.apply(density), 1.0),
        Trace::DlpExterior => combine(ops.k.apply(density), -1.0),
        Trace::Slp => mat_vec(ops.slp(), density),
        Trace::SlpNormalInterior => combine(ops.k_adj.apply(density), -1.0),
        Trace::SlpNormalExterior => combine(ops.k_adj.apply(density), 1.0),
    })
}

/// Boundary values of `C f` from inside (`C⁺`) and outside (`C⁻`), by
/// singularity subtraction: `C⁻f(z_i) = (1/2πi) ∫ (f(ζ) - f(z_i))/(ζ - z_i) dζ`
/// with the diagonal limit `f'(t_i)` per unit parameter.
pub fn cauchy_traces(mesh: &Mesh, density: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_len(mesh, density.len())?;
    let mut df = vec![Complex64::new(0.0, 0.0); mesh.len()];
    for r in &mesh.ranges {
        let d = spectral_derivative_complex(&density[r.range()], 1)?;
        df[r.range()].copy_from_slice(&d);
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let minus: Vec<Complex64> = (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let zi = mesh.points[i];
            let fi = density[i];
            let off: Complex64 = (0..mesh.len())
                .filter(|&j| j != i)
                .map(|j| (density[j] - fi) * mesh.d1[j] / (mesh.points[j] - zi) * mesh.step(j))
                .sum();
            (off + df[i] * mesh.step(i)) / two_pi_i
        })
        .collect();
    let plus = minus.iter().zip(density).map(|(m, f)| m + f).collect();
    Ok((plus, minus))
}

/// A layer potential with a fixed density, evaluated off the boundary or
/// traced onto it.
#[derive(Debug, Clone)]
pub struct PotentialField<'a> {
    pub kind: PotentialKind,
    pub density: Vec<f64>,
    pub ops: &'a BoundaryOperators,
}

impl<'a> PotentialField<'a> {
    pub fn new(kind: PotentialKind, ops: &'a BoundaryOperators, density: Vec<f64>) -> Result<Self> {
        check_len(&ops.mesh, density.len())?;
        Ok(PotentialField { kind, density, ops })
    }

    pub fn eval(&self, points: &[Complex64]) -> Result<Vec<f64>> {
        match self.kind {
            PotentialKind::U => eval_dlp(&self.ops.mesh, &self.density, points),
            PotentialKind::W => eval_slp(&self.ops.mesh, &self.density, points),
        }
    }

    /// Trace of the field from `side`.
    pub fn trace(&self, side: Side) -> Result<Vec<f64>> {
        let t = match (self.kind, side) {
            (PotentialKind::U, Side::Interior) => Trace::DlpInterior,
            (PotentialKind::U, Side::Exterior) => Trace::DlpExterior,
            (PotentialKind::W, _) => Trace::Slp,
        };
        boundary_values(self.ops, &self.density, t)
    }
}

/// Limit of `U f` at boundary nodes from `side`, by linear Richardson
/// extrapolation along the normal over distances `2δ` and `δ`, where `δ` is
/// [`BAND_SPACINGS`] spacings of a mesh refined by [`RICHARDSON_UPSAMPLE`] and
/// the density is trigonometrically interpolated onto it.
pub fn richardson_trace(mesh: &Mesh, density: &[f64], nodes: &[usize], side: Side) -> Result<Vec<f64>> {
    check_len(mesh, density.len())?;
    let fine = mesh.refined(RICHARDSON_UPSAMPLE)?;
    let mut fine_density = Vec::with_capacity(fine.len());
    for r in &mesh.ranges {
        fine_density.extend(upsample(&density[r.range()], RICHARDSON_UPSAMPLE));
    }
    let delta = 1.01 * BAND_SPACINGS * fine.max_spacing();
    let dir = match side {
        Side::Interior => -1.0,
        Side::Exterior => 1.0,
    };
    nodes
        .iter()
        .map(|&i| {
            let at = |d: f64| mesh.points[i] + mesh.normal[i] * (dir * d);
            let v = eval_dlp(&fine, &fine_density, &[at(delta), at(2.0 * delta)])?;
            Ok(2.0 * v[0] - v[1])
        })
        .collect()
}
