use std::sync::Arc;

use bie_core::bvp::{self, solve_interior_dirichlet};
use bie_core::conformal::riemann_map;
use bie_core::{BoundaryOperators, Complex64, CurveShape, MultiDomain, ProblemKind};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ellipse(center: Complex64, a: f64, b: f64, n: usize) -> Arc<BoundaryOperators> {
    let d = MultiDomain::simply_connected(CurveShape::ellipse(center, a, b)).unwrap();
    Arc::new(BoundaryOperators::new(d.discretize_uniform(n).unwrap()))
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 12, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn row_sums_are_one(a in 0.6f64..1.6, b in 0.6f64..1.6, x in -1.0f64..1.0) {
        let ops = ellipse(c(x, 0.3), a, b, 96);
        for s in ops.k.row_sums() {
            prop_assert!((s - 1.0).abs() < 1e-10, "{s}");
        }
    }

    #[test]
    fn harmonic_polynomials_are_reproduced(
        a in 0.7f64..1.4, b in 0.7f64..1.4, k in 1i32..4, re in -1.0f64..1.0, im in -1.0f64..1.0,
    ) {
        let alpha = c(re, im);
        let ops = ellipse(c(0.0, 0.0), a, b, 128);
        let exact = |z: Complex64| (alpha * z.powi(k)).re;
        let f: Vec<f64> = ops.mesh.points.iter().map(|&z| exact(z)).collect();
        let sol = solve_interior_dirichlet(&ops, &f).unwrap();
        let probes = [c(0.0, 0.0), c(0.2 * a, 0.1 * b), c(-0.3 * a, -0.2 * b)];
        for (z, u) in probes.iter().zip(sol.eval(&probes).unwrap()) {
            prop_assert!((u - exact(*z)).abs() < 1e-9, "{z}: {u} vs {}", exact(*z));
        }
    }

    #[test]
    fn solutions_are_linear_in_the_data(s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let ops = ellipse(c(0.1, -0.2), 1.1, 0.8, 96);
        let f: Vec<f64> = ops.mesh.points.iter().map(|z| (z.re * 3.0).sin()).collect();
        let g: Vec<f64> = ops.mesh.points.iter().map(|z| z.im.exp()).collect();
        let h: Vec<f64> = f.iter().zip(&g).map(|(x, y)| s * x + t * y).collect();
        let p = [c(0.1, -0.2), c(0.4, 0.0)];
        let uf = solve_interior_dirichlet(&ops, &f).unwrap().eval(&p).unwrap();
        let ug = solve_interior_dirichlet(&ops, &g).unwrap().eval(&p).unwrap();
        let uh = solve_interior_dirichlet(&ops, &h).unwrap().eval(&p).unwrap();
        for j in 0..p.len() {
            prop_assert!((uh[j] - s * uf[j] - t * ug[j]).abs() < 1e-11);
        }
    }

    #[test]
    fn invariants_do_not_see_translations(x in -2.0f64..2.0, y in -2.0f64..2.0, node in 0usize..256) {
        let base = ellipse(c(0.0, 0.0), 1.0, 0.7, 256);
        let moved = ellipse(c(x, y), 1.0, 0.7, 256);
        let i0 = riemann_map(&base, c(0.1, 0.05)).unwrap().invariants_at(node).unwrap();
        let i1 = riemann_map(&moved, c(0.1 + x, 0.05 + y)).unwrap().invariants_at(node).unwrap();
        prop_assert!((i0.s2 - i1.s2).abs() < 1e-8);
        prop_assert!((i0.s3 - i1.s3).norm() < 1e-7);
    }

    #[test]
    fn interior_neumann_recovers_up_to_a_constant(re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let alpha = c(re, im);
        let ops = ellipse(c(0.0, 0.0), 1.2, 0.8, 128);
        let m = &ops.mesh;
        // ∂_ν Re(α z²) = Re(2αz ν)
        let g: Vec<f64> = m.points.iter().zip(&m.normal).map(|(z, n)| (2.0 * alpha * z * n).re).collect();
        let sol = bvp::solve(&ops, ProblemKind::InteriorNeumann, &g).unwrap();
        let p = [c(0.0, 0.0), c(0.3, 0.2), c(-0.4, 0.1)];
        let u = sol.eval(&p).unwrap();
        let exact: Vec<f64> = p.iter().map(|z| (alpha * z * z).re).collect();
        let shift = u[0] - exact[0];
        for j in 1..p.len() {
            prop_assert!((u[j] - exact[j] - shift).abs() < 1e-9);
        }
        prop_assert!(sol.boundary_mean().unwrap().abs() < 1e-9);
    }
}

#[test]
fn exterior_dirichlet_reproduces_constants_and_decaying_fields() {
    let ops = ellipse(c(0.0, 0.0), 1.0, 0.6, 128);
    let f: Vec<f64> = ops.mesh.points.iter().map(|z| 2.5 + (1.0 / z).re).collect();
    let sol = bvp::solve(&ops, ProblemKind::ExteriorDirichlet, &f).unwrap();
    let p = [c(2.0, 0.0), c(0.0, -3.0), c(-1.5, 1.5)];
    for (z, u) in p.iter().zip(sol.eval(&p).unwrap()) {
        assert!((u - 2.5 - (1.0 / z).re).abs() < 1e-9, "{z}: {u}");
    }
}
