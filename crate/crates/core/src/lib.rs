//! Boundary integral equation solvers for the Laplace equation on smooth planar
//! domains.
//!
//! The crate discretizes closed parametric curves with the periodic trapezoidal
//! rule, assembles Nyström matrices for the double-layer operator `K` and its
//! adjoint `K*`, and builds on them:
//!
//! * [`geometry`]: curves, multiply connected domains and one-parameter families.
//! * [`quadrature`]: trapezoid weights, the log-singular product rule, spectral
//!   differentiation.
//! * [`kernels`]: pointwise double-layer, single-layer and Cauchy kernels.
//! * [`operators`]: dense `K`/`K*` matrices, null spaces of `I ± K`, `I ± K*`,
//!   bordered second-kind solves and the tangential-derivative reduction.
//! * [`potentials`]: off-boundary evaluation of layer potentials and boundary
//!   traces from the jump relations.
//! * [`bvp`]: interior/exterior Dirichlet and Neumann solvers.
//! * [`conformal`]: Riemann maps from the Dirichlet solver and third order
//!   Möbius normalization at a boundary point.
//! * [`paramlab`]: λ-sweeps over domain families and the non-reflection
//!   counterexample experiment.

pub mod bvp;
pub mod conformal;
pub mod data;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod kernels;
pub mod operators;
pub mod paramlab;
pub mod potentials;
pub mod quadrature;
pub mod spec;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64;

pub use bvp::{HarmonicSolution, ProblemKind};
pub use conformal::{DerivativeMethod, MobiusInvariants, RiemannMap};
pub use geometry::{BoundaryCurve, CurveShape, DomainFamily, Mesh, MultiDomain, Orientation, Profile};
pub use operators::{BoundaryOperators, NullSpaces, OperatorMatrix, Sign};
pub use paramlab::{CounterexampleConfig, CounterexampleReport, SweepResult};
