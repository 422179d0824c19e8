//! Boundary data generators: named analytic functions and free-form
//! expressions evaluated at the mesh nodes.
//!
//! Expressions see the variables `x`, `y`, `r`, `theta` (polar angle of the
//! node), `t` (curve parameter), `nx`, `ny` (outward normal), `lambda` and
//! `pi`, plus the `math::*` functions of `evalexpr`.

use std::str::FromStr;

use evalexpr::{build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Mesh;

/// Named boundary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Named {
    Zero,
    One,
    /// `Re z²`.
    ReZ2,
    /// `Re z³`.
    ReZ3,
    /// `log|z|`.
    LogAbs,
    /// `cos(kθ)`.
    Cos(u32),
    /// `sin(kθ)`.
    Sin(u32),
    /// `∂_ν Re z² = 2 Re(z ν)`.
    DnReZ2,
}

impl Named {
    pub fn eval(self, z: Complex64, normal: Complex64) -> f64 {
        match self {
            Named::Zero => 0.0,
            Named::One => 1.0,
            Named::ReZ2 => (z * z).re,
            Named::ReZ3 => (z * z * z).re,
            Named::LogAbs => z.norm().ln(),
            Named::Cos(k) => (k as f64 * z.arg()).cos(),
            Named::Sin(k) => (k as f64 * z.arg()).sin(),
            Named::DnReZ2 => 2.0 * (z * normal).re,
        }
    }
}

impl FromStr for Named {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = |rest: &str| -> Option<u32> {
            if rest.is_empty() {
                Some(1)
            } else {
                rest.strip_prefix('_')?.parse().ok()
            }
        };
        Ok(match s {
            "zero" => Named::Zero,
            "one" => Named::One,
            "re_z2" => Named::ReZ2,
            "re_z3" => Named::ReZ3,
            "log_abs" => Named::LogAbs,
            "dn_re_z2" => Named::DnReZ2,
            _ => {
                if let Some(n) = s.strip_prefix("cos").and_then(k) {
                    Named::Cos(n)
                } else if let Some(n) = s.strip_prefix("sin").and_then(k) {
                    Named::Sin(n)
                } else {
                    return Err(Error::Expression(format!("unknown generator '{s}'")));
                }
            }
        })
    }
}

/// A named generator or a compiled expression.
#[derive(Debug, Clone)]
pub enum DataSource {
    Named(Named),
    Expr { text: String, tree: Node<DefaultNumericTypes> },
}

const VARIABLES: [&str; 9] = ["x", "y", "r", "theta", "t", "nx", "ny", "lambda", "pi"];

impl DataSource {
    /// Named generators win; anything else is compiled as an expression.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(named) = s.parse::<Named>() {
            return Ok(DataSource::Named(named));
        }
        let tree = build_operator_tree::<DefaultNumericTypes>(s).map_err(|e| Error::Expression(format!("'{s}': {e}")))?;
        if let Some(v) = tree.iter_variable_identifiers().find(|v| !VARIABLES.contains(v)) {
            return Err(Error::Expression(format!("'{s}': unknown variable '{v}'")));
        }
        Ok(DataSource::Expr { text: s.to_string(), tree })
    }

    pub fn uses_lambda(&self) -> bool {
        match self {
            DataSource::Named(_) => false,
            DataSource::Expr { tree, .. } => tree.iter_variable_identifiers().any(|v| v == "lambda"),
        }
    }

    /// Values at the nodes of `mesh` for parameter `lambda`.
    pub fn eval(&self, mesh: &Mesh, lambda: f64) -> Result<Vec<f64>> {
        let out: Vec<f64> = match self {
            DataSource::Named(named) => (0..mesh.len()).map(|j| named.eval(mesh.points[j], mesh.normal[j])).collect(),
            DataSource::Expr { text, tree } => {
                let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
                let set = |ctx: &mut HashMapContext<DefaultNumericTypes>, k: &str, v: f64| {
                    ctx.set_value(k.into(), Value::from_float(v))
                        .map_err(|e| Error::Expression(format!("'{text}': {e}")))
                };
                set(&mut ctx, "lambda", lambda)?;
                set(&mut ctx, "pi", std::f64::consts::PI)?;
                let mut out = Vec::with_capacity(mesh.len());
                for j in 0..mesh.len() {
                    let z = mesh.points[j];
                    let n = mesh.normal[j];
                    for (k, v) in [("x", z.re), ("y", z.im), ("r", z.norm()), ("theta", z.arg()), ("t", mesh.param[j]), ("nx", n.re), ("ny", n.im)] {
                        set(&mut ctx, k, v)?;
                    }
                    let v = tree.eval_number_with_context(&ctx).map_err(|e| Error::Expression(format!("'{text}': {e}")))?;
                    out.push(v);
                }
                out
            }
        };
        if let Some(j) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::Expression(format!("data is not finite at node {j} ({:?})", mesh.points[j])));
        }
        Ok(out)
    }
}

/// Parses and evaluates `source` at `lambda = 0`.
pub fn boundary_data(source: &str, mesh: &Mesh) -> Result<Vec<f64>> {
    DataSource::parse(source)?.eval(mesh, 0.0)
}
