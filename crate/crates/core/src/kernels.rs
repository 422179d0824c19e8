//! Pointwise kernels on a [`Mesh`].
//!
//! Values are per unit arc length for the double- and single-layer kernels and
//! per unit parameter for the Cauchy kernel; quadrature weights are applied by
//! the callers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Mesh;

/// Targets closer than this to a Cauchy source node are rejected.
pub const CAUCHY_FLOOR: f64 = 1e-12;

/// `K(z, ζ)` for a target `z` off the source node `ζ` with outward normal `ν`.
#[inline]
pub fn dlp_point(z: Complex64, zeta: Complex64, nu: Complex64) -> f64 {
    let d = zeta - z;
    (nu.conj() * d).re / (PI * d.norm_sqr())
}

/// Nyström entry `K(z_i, ζ_j)` without validation; the diagonal carries the
/// limit `κ/(2π)`.
#[inline]
pub(crate) fn dlp_entry(mesh: &Mesh, i: usize, j: usize) -> f64 {
    if i == j {
        mesh.curvature[j] / (2.0 * PI)
    } else {
        dlp_point(mesh.points[i], mesh.points[j], mesh.normal[j])
    }
}

/// `K(z_i, ζ_j)` for boundary nodes `i` (target) and `j` (source). The adjoint
/// kernel is the same call with the roles swapped.
pub fn dlp_kernel(mesh: &Mesh, target: usize, source: usize) -> Result<f64> {
    if target != source && mesh.points[target] == mesh.points[source] {
        return Err(Error::Geometry(format!("boundary nodes {target} and {source} coincide")));
    }
    Ok(dlp_entry(mesh, target, source))
}

/// Smooth remainder of `(1/π) log|z_i - ζ_j|` after removing
/// `(1/2π) log(4 sin²((s-t)/2))` on a shared component; the full kernel across
/// components.
pub fn slp_kernel_smoothpart(mesh: &Mesh, target: usize, source: usize) -> f64 {
    if mesh.component[target] != mesh.component[source] {
        return (mesh.points[target] - mesh.points[source]).norm().ln() / PI;
    }
    if target == source {
        return mesh.speed[source].ln() / PI;
    }
    let half = 0.5 * (mesh.param[target] - mesh.param[source]);
    let s2 = 4.0 * half.sin().powi(2);
    (mesh.points[target] - mesh.points[source]).norm_sqr().ln() / (2.0 * PI) - s2.ln() / (2.0 * PI)
}

/// `(1/π) log|z - ζ|`.
#[inline]
pub fn slp_point(z: Complex64, zeta: Complex64) -> f64 {
    (z - zeta).norm().ln() / PI
}

/// `γ'(t_j) / (2πi (γ(t_j) - z))`.
pub fn cauchy_kernel(mesh: &Mesh, z: Complex64, source: usize) -> Result<Complex64> {
    let d = mesh.points[source] - z;
    if d.norm() < CAUCHY_FLOOR {
        return Err(Error::NearBoundary { x: z.re, y: z.im, distance: d.norm(), band: CAUCHY_FLOOR });
    }
    Ok(cauchy_entry(mesh, z, source))
}

#[inline]
pub(crate) fn cauchy_entry(mesh: &Mesh, z: Complex64, source: usize) -> Complex64 {
    mesh.d1[source] / (Complex64::new(0.0, 2.0 * PI) * (mesh.points[source] - z))
}
