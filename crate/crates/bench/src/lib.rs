//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use bie_core::{BoundaryOperators, Complex64, CurveShape, MultiDomain};

pub fn ellipse(n: usize) -> Arc<BoundaryOperators> {
    let domain = MultiDomain::simply_connected(CurveShape::ellipse(Complex64::new(0.0, 0.0), 1.0, 0.6)).expect("ellipse");
    Arc::new(BoundaryOperators::new(domain.discretize_uniform(n).expect("mesh")))
}

pub fn annulus(n: usize) -> Arc<BoundaryOperators> {
    let domain = bie_core::spec::Spec::parse(
        r#"{"outer": {"kind": "circle", "center": [0, 0], "radius": 2},
            "inners": [{"kind": "circle", "center": [0, 0], "radius": 0.5}]}"#,
    )
    .and_then(|s| s.domain())
    .expect("annulus");
    Arc::new(BoundaryOperators::new(domain.discretize(&[n, n]).expect("mesh")))
}

/// `Re z³` at the nodes.
pub fn cubic_data(ops: &BoundaryOperators) -> Vec<f64> {
    ops.mesh.points.iter().map(|z| (z * z * z).re).collect()
}

/// `n` interior points on a ring well inside the ellipse.
pub fn probes(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(0.3, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}
