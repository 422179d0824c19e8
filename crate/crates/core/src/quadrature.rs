//! Periodic trapezoid rule, the product rule for `log(4 sin²((s-t)/2))` and
//! Fourier spectral calculus on equispaced grids.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{arg, Result};

/// Equispaced nodes `t_j = 2πj/N` with trapezoid weight `2π/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(arg(format!("grid size {n} must be even and at least 8")));
        }
        Ok(Grid { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(arg(format!("{len} values given for a grid of {} nodes", self.n)));
        }
        Ok(())
    }
}

/// `Σ f(t_j)·2π/N`.
pub fn integrate_smooth(values: &[f64], grid: Grid) -> Result<f64> {
    grid.check(values.len())?;
    Ok(values.iter().sum::<f64>() * grid.weight())
}

/// Weight matrix `R` with `Σ_j R_ij p(t_j) = ∫ log(4 sin²((t_i-t)/2)) p(t) dt`
/// for trigonometric polynomials of degree below `N/2`.
pub fn log_weights(grid: Grid) -> DMatrix<f64> {
    let row = log_weight_row(grid.len());
    let n = grid.len();
    DMatrix::from_fn(n, n, |i, j| row[(i + n - j) % n])
}

/// `R_ij` depends only on `(i - j) mod N`; entry `d` of the result is `R_{d,0}`.
pub fn log_weight_row(n_nodes: usize) -> Vec<f64> {
    let n = n_nodes / 2;
    let nf = n as f64;
    (0..n_nodes)
        .map(|d| {
            // cos is even: fold d onto 0..=n so the row is exactly symmetric
            let d = d.min(n_nodes - d);
            let tau = 2.0 * PI * d as f64 / n_nodes as f64;
            let series: f64 = (1..n).map(|m| (m as f64 * tau).cos() / m as f64).sum();
            -2.0 * PI / nf * series - PI / (nf * nf) * (nf * tau).cos()
        })
        .collect()
}

fn fft(values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(values.len()) } else { planner.plan_fft_forward(values.len()) };
    plan.process(values);
}

/// Signed wavenumber of FFT bin `j` on an `n`-point grid; the Nyquist bin maps to `n/2`.
fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn apply_multiplier(values: &[Complex64], mult: impl Fn(i64, bool) -> Complex64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    fft(&mut buf, false);
    for (j, c) in buf.iter_mut().enumerate() {
        let nyquist = n % 2 == 0 && j == n / 2;
        *c *= mult(wavenumber(j, n), nyquist);
    }
    fft(&mut buf, true);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// `d^order/dt^order` through the multiplier `(ik)^order`; the Nyquist mode is
/// dropped for odd orders.
pub fn spectral_derivative_complex(values: &[Complex64], order: u32) -> Result<Vec<Complex64>> {
    if !(1..=3).contains(&order) {
        return Err(arg(format!("derivative order {order} outside 1..3")));
    }
    Ok(apply_multiplier(values, |k, nyquist| {
        if nyquist && order % 2 == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, k as f64).powu(order)
        }
    }))
}

pub fn spectral_derivative(values: &[f64], grid: Grid, order: u32) -> Result<Vec<f64>> {
    grid.check(values.len())?;
    let z: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(spectral_derivative_complex(&z, order)?.into_iter().map(|c| c.re).collect())
}

/// Mean-zero periodic antiderivative. The mean of `values` (which has no
/// periodic antiderivative) and the Nyquist mode are discarded.
pub fn spectral_antiderivative(values: &[f64], grid: Grid) -> Result<Vec<f64>> {
    grid.check(values.len())?;
    let z: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let out = apply_multiplier(&z, |k, nyquist| {
        if k == 0 || nyquist {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / k as f64)
        }
    });
    Ok(out.into_iter().map(|c| c.re).collect())
}

/// Trigonometric interpolation of `values` onto `factor·N` equispaced nodes.
pub fn upsample_complex(values: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = values.len();
    let m = n * factor;
    if factor == 1 {
        return values.to_vec();
    }
    let mut spec = values.to_vec();
    fft(&mut spec, false);
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    for (j, &c) in spec.iter().enumerate() {
        let k = wavenumber(j, n);
        if n % 2 == 0 && j == n / 2 {
            // split the Nyquist mode symmetrically
            padded[n / 2] += c * 0.5;
            padded[m - n / 2] += c * 0.5;
        } else if k >= 0 {
            padded[k as usize] = c;
        } else {
            padded[(m as i64 + k) as usize] = c;
        }
    }
    fft(&mut padded, true);
    let scale = 1.0 / n as f64;
    padded.iter_mut().for_each(|c| *c *= scale);
    padded
}

pub fn upsample(values: &[f64], factor: usize) -> Vec<f64> {
    let z: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    upsample_complex(&z, factor).into_iter().map(|c| c.re).collect()
}
