//! λ-sweeps over domain families, divided-difference Taylor coefficients and
//! the non-reflection counterexample experiment.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bvp::{self, ProblemKind};
use crate::conformal::riemann_map;
use crate::error::{arg, ErrorKind, Result};
use crate::geometry::{DomainFamily, FamilyTerm, Mesh, Profile};
use crate::operators::BoundaryOperators;

/// `n + 1` equispaced values from `a` to `b` (`n = 0` gives `[a]`).
pub fn lambda_grid(a: f64, b: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(arg("λ grid needs at least one point"));
    }
    if points == 1 {
        return Ok(vec![a]);
    }
    if !(b > a) {
        return Err(arg(format!("λ grid {a}:{b} is not increasing")));
    }
    Ok((0..points).map(|k| a + (b - a) * k as f64 / (points - 1) as f64).collect())
}

/// Parses `a:b:n`.
pub fn parse_lambda_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || arg(format!("λ grid '{s}' is not of the form a:b:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    lambda_grid(a, b, n)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(arg("empty λ grid"));
    }
    if let Some(l) = grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(arg(format!("λ = {l} outside [0, 1]")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(arg("λ grid is not strictly increasing"));
    }
    Ok(())
}

fn forward_difference<T>(values: &[T], order: usize) -> T
where
    T: Copy + std::ops::Sub<Output = T>,
{
    let mut d = values[..=order].to_vec();
    for k in 0..order {
        for i in 0..order - k {
            d[i] = d[i + 1] - d[i];
        }
    }
    d[0]
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Δⁿ v_0 / (hⁿ n!)`, the forward-difference estimate of `(1/n!) ∂_λⁿ v` at
/// `λ = 0` from values on `0, h, 2h, …`.
pub fn lambda_divided_differences(values: &[f64], h: f64, order: usize) -> Result<f64> {
    check_difference(values.len(), h, order)?;
    Ok(forward_difference(values, order) / (h.powi(order as i32) * factorial(order)))
}

pub fn lambda_divided_differences_complex(values: &[Complex64], h: f64, order: usize) -> Result<Complex64> {
    check_difference(values.len(), h, order)?;
    Ok(forward_difference(values, order) / (h.powi(order as i32) * factorial(order)))
}

fn check_difference(len: usize, h: f64, order: usize) -> Result<()> {
    if len < order + 1 {
        return Err(arg(format!("order {order} needs {} values, got {len}", order + 1)));
    }
    if !(h > 0.0) {
        return Err(arg(format!("step h = {h} is not positive")));
    }
    Ok(())
}

/// A scalar read off each solution of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    /// `u^λ(Γ^λ(z0))`.
    Point { z0: Complex64 },
    /// `(∫ u² dσ)^{1/2}` on `∂Ω^λ`.
    TraceNorm,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::Point { z0 } => format!("u_at_{}_{}", z0.re, z0.im),
            Observable::TraceNorm => "trace_norm".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub nodes: usize,
    /// Boundary residual of the solve.
    pub residual: Option<f64>,
    /// One entry per observable; `NaN` when the solve failed.
    pub values: Vec<f64>,
    pub error: Option<String>,
    pub error_kind: Option<ErrorKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub problem: ProblemKind,
    pub observables: Vec<String>,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn lambdas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lambda).collect()
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.values[k]).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(|r| r.error.is_some())
    }

    /// `lambda,<observables…>,residual,error` with full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda");
        for name in &self.observables {
            out.push(',');
            out.push_str(&csv_field(name));
        }
        out.push_str(",residual,error\n");
        for r in &self.records {
            out.push_str(&format!("{:.16e}", r.lambda));
            for v in &r.values {
                out.push_str(&format!(",{v:.16e}"));
            }
            match r.residual {
                Some(res) => out.push_str(&format!(",{res:.16e}")),
                None => out.push(','),
            }
            out.push(',');
            out.push_str(&csv_field(r.error.as_deref().unwrap_or("")));
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Boundary data at parameter `λ` on the mesh of `Ω^λ`.
pub type DataFn<'a> = dyn Fn(f64, &Mesh) -> Result<Vec<f64>> + Sync + 'a;

/// Solves `kind` on every `Ω^λ` of the grid with `nodes` points per component.
/// Failures at individual λ are recorded in the result.
pub fn sweep(
    family: &DomainFamily,
    kind: ProblemKind,
    nodes: usize,
    data: &DataFn<'_>,
    grid: &[f64],
    observables: &[Observable],
) -> Result<SweepResult> {
    check_grid(grid)?;
    let records = grid
        .par_iter()
        .map(|&lambda| match solve_one(family, kind, nodes, data, lambda, observables) {
            Ok((values, residual)) => SweepRecord {
                lambda,
                nodes,
                residual: Some(residual),
                values,
                error: None,
                error_kind: None,
            },
            Err(e) => SweepRecord {
                lambda,
                nodes,
                residual: None,
                values: vec![f64::NAN; observables.len()],
                error: Some(e.to_string()),
                error_kind: Some(e.kind()),
            },
        })
        .collect();
    Ok(SweepResult { problem: kind, observables: observables.iter().map(Observable::name).collect(), records })
}

fn solve_one(
    family: &DomainFamily,
    kind: ProblemKind,
    nodes: usize,
    data: &DataFn<'_>,
    lambda: f64,
    observables: &[Observable],
) -> Result<(Vec<f64>, f64)> {
    let domain = family.eval(lambda)?;
    let counts = vec![nodes; domain.components.len()];
    let ops = Arc::new(BoundaryOperators::new(domain.discretize(&counts)?));
    let f = data(lambda, &ops.mesh)?;
    let sol = bvp::solve(&ops, kind, &f)?;
    let values = observables
        .iter()
        .map(|o| match o {
            Observable::Point { z0 } => Ok(sol.eval(&[family.pullback(*z0, lambda)])?[0]),
            Observable::TraceNorm => {
                let t = sol.trace()?;
                Ok(ops.mesh.inner(&t, &t).sqrt())
            }
        })
        .collect::<Result<_>>()?;
    Ok((values, sol.residual))
}

/// Parameters of the counterexample experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    /// Number of family terms `ρ_1 … ρ_K`.
    pub k: usize,
    /// Boundary nodes.
    pub nodes: usize,
    /// λ step.
    pub h: f64,
    /// Half width of the bump around `s = π`.
    pub half_width: f64,
    /// Predicted `Re R_n'''(1)` is set to `safety · (n!)²`.
    pub safety: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        CounterexampleConfig { k: 2, nodes: 256, h: 5e-3, half_width: PI / 2.0, safety: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub config: CounterexampleConfig,
    /// `∂_r^j u_1(1)` for the unit-scale profile, `j = 2, 3`.
    pub predictor_j2: f64,
    pub predictor_j3: f64,
    /// Predicted `Re R_1'''(1)` per unit scale: `∂_r³u_1 + 3∂_r²u_1`.
    pub predictor_unit: f64,
    /// `scale_n` of `ρ_n = scale_n · bump · sin⁴(s/2) cos 2s`, `n = 1..K`.
    pub scales: Vec<f64>,
    /// Measured `Re c_n` with `ρ_n` switched off (`0` for `n = 1`).
    pub lower_order: Vec<f64>,
    /// `lower_order[n] + scale_n · predictor_unit`.
    pub predicted: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub s2: Vec<f64>,
    pub s3: Vec<Complex64>,
    /// `c_0 … c_K` by forward differences with step `h`.
    pub coefficients: Vec<Complex64>,
    /// `2 c_1(h/2) - c_1(h)`.
    pub c1_richardson: Complex64,
    /// `|c_n|` with the Richardson value for `n = 1`, `n = 1..K`.
    pub magnitudes: Vec<f64>,
    /// `|c_{n+1}| / |c_n|`, `n = 1..K-1`.
    pub ratios: Vec<f64>,
    /// `(n!)²`, `n = 1..K`.
    pub targets: Vec<f64>,
    pub passes: Vec<bool>,
    /// `|Re c_1 - predicted_1| / |predicted_1|` after Richardson.
    pub c1_relative_gap: f64,
    pub c1_agrees: bool,
}

/// Relative tolerance of the `n = 1` predictor check.
pub const PREDICTOR_TOL: f64 = 0.2;

const PREDICTOR_SAMPLES: usize = 8192;

/// `∂_r^j u(1)` for the harmonic extension `u` of `-ρ(s)` to the unit disc:
/// `-(j!/π) Re ∫ ρ(s) e^{is}/(e^{is} - 1)^{j+1} ds`. `ρ` must vanish near
/// `s = 0`.
pub fn radial_derivative_predictor(profile: &Profile, j: u32) -> f64 {
    let m = PREDICTOR_SAMPLES;
    let w = 2.0 * PI / m as f64;
    let sum: f64 = (0..m)
        .map(|k| {
            let s = w * k as f64;
            let rho = profile.value(s);
            if rho == 0.0 {
                return 0.0;
            }
            let e = Complex64::from_polar(1.0, s);
            (rho * e / (e - 1.0).powu(j + 1)).re
        })
        .sum();
    -factorial(j as usize) / PI * sum * w
}

fn family_for(scales: &[f64], half_width: f64) -> DomainFamily {
    DomainFamily::Radial {
        terms: scales
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != 0.0)
            .map(|(i, &scale)| FamilyTerm { n: i as u32 + 1, profile: Profile::Cutoff { scale, half_width } })
            .collect(),
    }
}

/// `(S''(1), S'''(1))` of `Ω^λ` at the boundary point 1 (node 0).
pub fn invariants_at_one(family: &DomainFamily, lambda: f64, nodes: usize) -> Result<(f64, Complex64)> {
    let domain = family.eval(lambda)?;
    let ops = Arc::new(BoundaryOperators::new(domain.discretize(&[nodes])?));
    let map = riemann_map(&ops, Complex64::new(0.0, 0.0))?;
    let inv = map.invariants_at(0)?;
    Ok((inv.s2, inv.s3))
}

fn s3_on(family: &DomainFamily, lambdas: &[f64], nodes: usize) -> Result<Vec<(f64, Complex64)>> {
    lambdas.par_iter().map(|&l| invariants_at_one(family, l, nodes)).collect()
}

/// Builds `ρ(s, λ) = 1 + Σ λⁿ ρ_n(s)` term by term so that the predicted
/// `Re R_n'''(1)` reaches `safety·(n!)²`, then measures the λ-Taylor
/// coefficients of `S'''(1)`.
pub fn counterexample_run(config: CounterexampleConfig) -> Result<CounterexampleReport> {
    let CounterexampleConfig { k, nodes, h, half_width, safety } = config;
    if !(1..=6).contains(&k) {
        return Err(arg(format!("K = {k} outside 1..6")));
    }
    if !(h > 0.0) || (k as f64) * h > 1.0 {
        return Err(arg(format!("step h = {h} must be positive with K·h ≤ 1")));
    }
    if !(half_width > 0.0 && half_width < PI) {
        return Err(arg(format!("bump half width {half_width} outside (0, π)")));
    }
    let unit = Profile::Cutoff { scale: 1.0, half_width };
    let predictor_j2 = radial_derivative_predictor(&unit, 2);
    let predictor_j3 = radial_derivative_predictor(&unit, 3);
    let predictor_unit = predictor_j3 + 3.0 * predictor_j2;
    if !(predictor_unit.abs() > 1e-12) {
        return Err(arg("the bump profile has a vanishing predictor; change the half width"));
    }

    let grid: Vec<f64> = (0..=k).map(|n| n as f64 * h).collect();
    let mut scales = Vec::with_capacity(k);
    let mut lower_order = Vec::with_capacity(k);
    for n in 1..=k {
        let base = if n == 1 {
            0.0
        } else {
            let fam = family_for(&scales, half_width);
            let s3: Vec<Complex64> = s3_on(&fam, &grid[..=n], nodes)?.into_iter().map(|v| v.1).collect();
            lambda_divided_differences_complex(&s3, h, n)?.re
        };
        lower_order.push(base);
        scales.push((safety * factorial(n).powi(2) - base) / predictor_unit);
    }
    let predicted: Vec<f64> = lower_order.iter().zip(&scales).map(|(b, s)| b + s * predictor_unit).collect();

    let family = family_for(&scales, half_width);
    let mut lambdas = grid.clone();
    lambdas.insert(1, 0.5 * h);
    let values = s3_on(&family, &lambdas, nodes)?;
    let s2: Vec<f64> = values.iter().map(|v| v.0).collect();
    let s3: Vec<Complex64> = values.iter().map(|v| v.1).collect();
    let on_grid: Vec<Complex64> = std::iter::once(s3[0]).chain(s3[2..].iter().copied()).collect();
    let coefficients: Vec<Complex64> = (0..=k)
        .map(|n| lambda_divided_differences_complex(&on_grid, h, n))
        .collect::<Result<_>>()?;
    let c1_half = (s3[1] - s3[0]) / (0.5 * h);
    let c1_richardson = 2.0 * c1_half - coefficients[1];

    let magnitudes: Vec<f64> = (1..=k).map(|n| if n == 1 { c1_richardson.norm() } else { coefficients[n].norm() }).collect();
    let ratios = magnitudes.windows(2).map(|w| w[1] / w[0]).collect();
    let targets: Vec<f64> = (1..=k).map(|n| factorial(n).powi(2)).collect();
    let passes = magnitudes.iter().zip(&targets).map(|(m, t)| m >= t).collect();
    let c1_relative_gap = (c1_richardson.re - predicted[0]).abs() / predicted[0].abs();
    Ok(CounterexampleReport {
        config,
        predictor_j2,
        predictor_j3,
        predictor_unit,
        scales,
        lower_order,
        predicted,
        lambdas,
        s2,
        s3,
        coefficients,
        c1_richardson,
        magnitudes,
        ratios,
        targets,
        passes,
        c1_relative_gap,
        c1_agrees: c1_relative_gap <= PREDICTOR_TOL,
    })
}
