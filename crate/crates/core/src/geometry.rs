//! Smooth closed curves, multiply connected domains and their discretizations.
//!
//! Every curve is parametrized over `[0, 2π)`. Arc length enters only through
//! the speed `|γ'(t)|`, so `dσ = |γ'(t)| dt` everywhere.
//!
//! Domains use the standard orientation: the outer component runs
//! counterclockwise, inner components clockwise, so the domain is always on the
//! left and `ν = -iτ` is the outward normal of the domain on every component.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::jet::Jet;

const TWO_PI: f64 = 2.0 * PI;

/// Speed below which a curve is considered degenerate.
pub const MIN_SPEED: f64 = 1e-14;
/// Pairwise distance floor for the self-intersection check.
pub const SIMPLE_FLOOR: f64 = 1e-9;
/// Sample count used by [`make_domain`] for orientation and containment.
const DOMAIN_SAMPLES: usize = 1024;
/// Cap on the sample count of the O(M²) simplicity check.
const MAX_SIMPLE_SAMPLES: usize = 2048;

/// A smooth 2π-periodic real profile with closed-form derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant { value: f64 },
    /// `Σ_k cos[k]·cos(kt) + sin[k]·sin(kt)`, `k = 0, 1, …`.
    Trig {
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// `scale · c(t) · sin⁴(t/2) · cos(2t)` where `c` is the smooth bump
    /// `exp(1 - 1/(1 - ((t-π)/w)²))` supported on `|t - π| < w`.
    Cutoff {
        scale: f64,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    Sum { terms: Vec<WeightedProfile> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedProfile {
    pub weight: f64,
    pub profile: Profile,
}

fn default_half_width() -> f64 {
    PI / 2.0
}

/// `t` reduced to `[0, 2π)`.
fn wrap(t: f64) -> f64 {
    t.rem_euclid(TWO_PI)
}

fn trig_series_jet(cos: &[f64], sin: &[f64], t: f64) -> Jet<f64> {
    let mut out = [0.0; 4];
    let n = cos.len().max(sin.len());
    for k in 0..n {
        let a = cos.get(k).copied().unwrap_or(0.0);
        let b = sin.get(k).copied().unwrap_or(0.0);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let kf = k as f64;
        let (s, c) = (kf * t).sin_cos();
        // d^m/dt^m of a cos(kt) + b sin(kt)
        let base = [a * c + b * s, kf * (-a * s + b * c), -kf * kf * (a * c + b * s), kf * kf * kf * (a * s - b * c)];
        for m in 0..4 {
            out[m] += base[m];
        }
    }
    Jet(out)
}

fn cutoff_jet(scale: f64, half_width: f64, t: f64) -> Jet<f64> {
    let s = wrap(t);
    let x = (s - PI) / half_width;
    let q = 1.0 - x * x;
    // exp(1 - 1/q) and all its derivatives are below 1e-30 once q < 0.01
    if q < 0.01 {
        return Jet::constant(0.0);
    }
    let xs = (Jet::variable(s) - Jet::constant(PI)).scale(1.0 / half_width);
    let qj = Jet::constant(1.0) - xs * xs;
    let bump = (Jet::constant(1.0) - qj.recip()).exp();
    let sin4 = Jet::variable(s).scale(0.5).sin().powi(4);
    let cos2 = Jet::variable(s).scale(2.0).cos();
    (bump * sin4 * cos2).scale(scale)
}

impl Profile {
    pub fn jet(&self, t: f64) -> Jet<f64> {
        match self {
            Profile::Constant { value } => Jet::constant(*value),
            Profile::Trig { cos, sin } => trig_series_jet(cos, sin, t),
            Profile::Cutoff { scale, half_width } => cutoff_jet(*scale, *half_width, t),
            Profile::Sum { terms } => terms
                .iter()
                .fold(Jet::constant(0.0), |acc, w| acc + w.profile.jet(t).scale(w.weight)),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t).value()
    }

    /// Minimum over `samples` equispaced points, with the minimizing parameter.
    pub fn sampled_min(&self, samples: usize) -> (f64, f64) {
        (0..samples)
            .map(|j| {
                let t = TWO_PI * j as f64 / samples as f64;
                (t, self.value(t))
            })
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

fn c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// The parametrized shape of a curve, in its native parameter direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveShape {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    /// `center + a cos t + i b sin t`.
    Ellipse {
        #[serde(default)]
        center: [f64; 2],
        a: f64,
        b: f64,
    },
    /// `x(t) = Σ xc[k] cos kt + xs[k] sin kt`, likewise `y(t)`.
    Fourier {
        #[serde(default)]
        xc: Vec<f64>,
        #[serde(default)]
        xs: Vec<f64>,
        #[serde(default)]
        yc: Vec<f64>,
        #[serde(default)]
        ys: Vec<f64>,
    },
    /// `center + ρ(t) e^{it}`.
    Radial {
        #[serde(default)]
        center: [f64; 2],
        rho: Profile,
    },
    /// `(1 - weight)·from(t) + weight·to(t)`.
    Blend {
        from: Box<CurveShape>,
        to: Box<CurveShape>,
        weight: f64,
    },
}

impl CurveShape {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        CurveShape::Circle { center: [center.re, center.im], radius }
    }

    pub fn ellipse(center: Complex64, a: f64, b: f64) -> Self {
        CurveShape::Ellipse { center: [center.re, center.im], a, b }
    }

    pub fn radial(center: Complex64, rho: Profile) -> Self {
        CurveShape::Radial { center: [center.re, center.im], rho }
    }

    pub fn jet(&self, t: f64) -> Jet<Complex64> {
        match self {
            CurveShape::Circle { center, radius } => {
                let e = Jet::variable(t).cis().scale(*radius);
                e + Jet::constant(c(*center))
            }
            CurveShape::Ellipse { center, a, b } => {
                let (s, co) = t.sin_cos();
                let x = [a * co, -a * s, -a * co, a * s];
                let y = [b * s, b * co, -b * s, -b * co];
                let mut out = [Complex64::new(0.0, 0.0); 4];
                for k in 0..4 {
                    out[k] = Complex64::new(x[k], y[k]);
                }
                out[0] += c(*center);
                Jet(out)
            }
            CurveShape::Fourier { xc, xs, yc, ys } => {
                let x = trig_series_jet(xc, xs, t);
                let y = trig_series_jet(yc, ys, t);
                let mut out = [Complex64::new(0.0, 0.0); 4];
                for k in 0..4 {
                    out[k] = Complex64::new(x.d(k), y.d(k));
                }
                Jet(out)
            }
            CurveShape::Radial { center, rho } => {
                rho.jet(t).to_complex() * Jet::variable(t).cis() + Jet::constant(c(*center))
            }
            CurveShape::Blend { from, to, weight } => {
                from.jet(t).scale(1.0 - weight) + to.jet(t).scale(*weight)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Positive,
    Negative,
}

/// Unit tangent, outward normal, speed and signed curvature at a parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub tangent: Complex64,
    pub normal: Complex64,
    pub speed: f64,
    pub curvature: f64,
}

/// A closed curve with a traversal direction. `Negative` traverses the shape
/// backwards: `γ(t) = shape(-t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub shape: CurveShape,
    pub orientation: Orientation,
}

impl BoundaryCurve {
    pub fn new(shape: CurveShape) -> Self {
        BoundaryCurve { shape, orientation: Orientation::Positive }
    }

    pub fn reversed(&self) -> Self {
        let orientation = match self.orientation {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        };
        BoundaryCurve { shape: self.shape.clone(), orientation }
    }

    /// `[γ, γ', γ'', γ''']` at `t` in the traversal parameter.
    pub fn jet(&self, t: f64) -> Jet<Complex64> {
        match self.orientation {
            Orientation::Positive => self.shape.jet(t),
            Orientation::Negative => {
                let [g0, g1, g2, g3] = self.shape.jet(-t).0;
                Jet([g0, -g1, g2, -g3])
            }
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.jet(t).value()
    }

    /// Derivatives `γ, γ', …, γ^(order)` at `t`.
    pub fn derivatives(&self, t: f64, order: usize) -> Result<Vec<Complex64>> {
        if order > 3 {
            return Err(arg(format!("derivative order {order} exceeds 3")));
        }
        Ok(self.jet(t).0[..=order].to_vec())
    }

    pub fn frame(&self, t: f64) -> Result<Frame> {
        frame_from_jet(&self.jet(t), t)
    }

    /// Polygonal signed area from `samples` points; positive for counterclockwise
    /// traversal.
    pub fn signed_area(&self, samples: usize) -> f64 {
        let pts = self.samples(samples);
        polygon_area(&pts)
    }

    pub fn samples(&self, samples: usize) -> Vec<Complex64> {
        (0..samples).map(|j| self.point(TWO_PI * j as f64 / samples as f64)).collect()
    }

    /// Regularity and simplicity at `samples` points.
    pub fn validate(&self, samples: usize) -> Result<()> {
        for j in 0..samples {
            let t = TWO_PI * j as f64 / samples as f64;
            let speed = self.jet(t).d(1).norm();
            if !(speed >= MIN_SPEED) {
                return Err(Error::DegenerateCurve { t, speed });
            }
        }
        let pts = self.samples(samples.min(MAX_SIMPLE_SAMPLES));
        check_simple(&pts)
    }
}

pub(crate) fn frame_from_jet(jet: &Jet<Complex64>, t: f64) -> Result<Frame> {
    let d1 = jet.d(1);
    let d2 = jet.d(2);
    let speed = d1.norm();
    if !(speed >= MIN_SPEED) {
        return Err(Error::DegenerateCurve { t, speed });
    }
    let tangent = d1 / speed;
    Ok(Frame {
        tangent,
        normal: -Complex64::i() * tangent,
        speed,
        curvature: (d2 * d1.conj()).im / (speed * speed * speed),
    })
}

fn polygon_area(pts: &[Complex64]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|j| (pts[j].conj() * pts[(j + 1) % n]).im).sum::<f64>()
}

/// Winding number of the closed polygon `pts` around `z`.
pub fn winding_number(pts: &[Complex64], z: Complex64) -> f64 {
    let n = pts.len();
    let total: f64 = (0..n).map(|j| ((pts[(j + 1) % n] - z) / (pts[j] - z)).arg()).sum();
    total / TWO_PI
}

fn segments_cross(a: Complex64, b: Complex64, p: Complex64, q: Complex64) -> bool {
    let cross = |o: Complex64, u: Complex64, v: Complex64| ((u - o).conj() * (v - o)).im;
    let d1 = cross(p, q, a);
    let d2 = cross(p, q, b);
    let d3 = cross(a, b, p);
    let d4 = cross(a, b, q);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn check_simple(pts: &[Complex64]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if (pts[i] - pts[j]).norm() < SIMPLE_FLOOR {
                return Err(Error::Geometry(format!("curve self-intersects near sample {i} and {j}")));
            }
            if segments_cross(a, b, pts[j], pts[(j + 1) % n]) {
                return Err(Error::Geometry(format!("curve self-intersects between samples {i} and {j}")));
            }
        }
    }
    Ok(())
}

/// One outer curve and zero or more inner curves in standard orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiDomain {
    /// `components[0]` is the outer curve.
    pub components: Vec<BoundaryCurve>,
}

/// Builds a domain, reversing parametrizations as needed so the outer curve is
/// counterclockwise and the inner curves clockwise, and validates containment.
pub fn make_domain(outer: BoundaryCurve, inners: Vec<BoundaryCurve>) -> Result<MultiDomain> {
    let orient = |curve: BoundaryCurve, want_ccw: bool| -> Result<BoundaryCurve> {
        curve.validate(DOMAIN_SAMPLES)?;
        let area = curve.signed_area(DOMAIN_SAMPLES);
        if area.abs() < 1e-14 {
            return Err(Error::Geometry("curve encloses no area".into()));
        }
        Ok(if (area > 0.0) == want_ccw { curve } else { curve.reversed() })
    };
    let outer = orient(outer, true)?;
    let inners = inners.into_iter().map(|c| orient(c, false)).collect::<Result<Vec<_>>>()?;

    let outer_pts = outer.samples(DOMAIN_SAMPLES);
    let inner_pts: Vec<_> = inners.iter().map(|c| c.samples(DOMAIN_SAMPLES)).collect();
    for (i, pts) in inner_pts.iter().enumerate() {
        if pts.iter().any(|&z| winding_number(&outer_pts, z).abs() < 0.5) {
            return Err(Error::Geometry(format!("inner curve {} is not contained in the outer curve", i + 1)));
        }
        for (j, other) in inner_pts.iter().enumerate() {
            if i != j && pts.iter().any(|&z| winding_number(other, z).abs() > 0.5) {
                return Err(Error::Geometry(format!("inner curves {} and {} overlap", i + 1, j + 1)));
            }
        }
    }
    let mut components = vec![outer];
    components.extend(inners);
    Ok(MultiDomain { components })
}

impl MultiDomain {
    pub fn simply_connected(outer: CurveShape) -> Result<Self> {
        make_domain(BoundaryCurve::new(outer), Vec::new())
    }

    /// Number of inner components `m`.
    pub fn holes(&self) -> usize {
        self.components.len() - 1
    }

    pub fn discretize(&self, nodes: &[usize]) -> Result<Mesh> {
        Mesh::new(self.clone(), nodes)
    }

    pub fn discretize_uniform(&self, n: usize) -> Result<Mesh> {
        Mesh::new(self.clone(), &vec![n; self.components.len()])
    }
}

/// Node range of one component inside a [`Mesh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentRange {
    pub offset: usize,
    pub len: usize,
}

impl ComponentRange {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len
    }
}

/// Trapezoidal discretization of a [`MultiDomain`]: per node the point, exact
/// derivatives, frame and arc-length weight `dσ_j = |γ'(t_j)|·2π/N_i`.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub domain: MultiDomain,
    pub ranges: Vec<ComponentRange>,
    pub component: Vec<usize>,
    pub param: Vec<f64>,
    pub points: Vec<Complex64>,
    /// `γ'(t_j)` in the traversal parameter.
    pub d1: Vec<Complex64>,
    pub d2: Vec<Complex64>,
    pub d3: Vec<Complex64>,
    pub tangent: Vec<Complex64>,
    pub normal: Vec<Complex64>,
    pub speed: Vec<f64>,
    pub curvature: Vec<f64>,
    pub weight: Vec<f64>,
}

impl Mesh {
    pub fn new(domain: MultiDomain, nodes: &[usize]) -> Result<Self> {
        let mesh = Self::build(domain, nodes)?;
        for (curve, range) in mesh.domain.components.iter().zip(&mesh.ranges) {
            curve.validate(4 * range.len)?;
        }
        Ok(mesh)
    }

    /// Builds without the sampled simplicity check; for refinements of a mesh
    /// that has already been validated.
    pub(crate) fn build(domain: MultiDomain, nodes: &[usize]) -> Result<Self> {
        if nodes.len() != domain.components.len() {
            return Err(arg(format!(
                "{} node counts given for {} components",
                nodes.len(),
                domain.components.len()
            )));
        }
        if let Some(&n) = nodes.iter().find(|&&n| n < 8 || n % 2 != 0) {
            return Err(arg(format!("node count {n} must be even and at least 8")));
        }
        let total: usize = nodes.iter().sum();
        let mut mesh = Mesh {
            domain,
            ranges: Vec::with_capacity(nodes.len()),
            component: Vec::with_capacity(total),
            param: Vec::with_capacity(total),
            points: Vec::with_capacity(total),
            d1: Vec::with_capacity(total),
            d2: Vec::with_capacity(total),
            d3: Vec::with_capacity(total),
            tangent: Vec::with_capacity(total),
            normal: Vec::with_capacity(total),
            speed: Vec::with_capacity(total),
            curvature: Vec::with_capacity(total),
            weight: Vec::with_capacity(total),
        };
        let mut offset = 0;
        for (ci, &n) in nodes.iter().enumerate() {
            mesh.ranges.push(ComponentRange { offset, len: n });
            let curve = &mesh.domain.components[ci];
            for j in 0..n {
                let t = TWO_PI * j as f64 / n as f64;
                let jet = curve.jet(t);
                let fr = frame_from_jet(&jet, t)?;
                mesh.component.push(ci);
                mesh.param.push(t);
                mesh.points.push(jet.d(0));
                mesh.d1.push(jet.d(1));
                mesh.d2.push(jet.d(2));
                mesh.d3.push(jet.d(3));
                mesh.tangent.push(fr.tangent);
                mesh.normal.push(fr.normal);
                mesh.speed.push(fr.speed);
                mesh.curvature.push(fr.curvature);
                mesh.weight.push(fr.speed * TWO_PI / n as f64);
            }
            offset += n;
        }
        Ok(mesh)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn holes(&self) -> usize {
        self.ranges.len() - 1
    }

    pub fn node_counts(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.len).collect()
    }

    /// Trapezoid step `2π/N_i` of the component owning node `j`.
    pub fn step(&self, j: usize) -> f64 {
        TWO_PI / self.ranges[self.component[j]].len as f64
    }

    /// Largest spacing between neighbouring nodes, `max_j |γ'(t_j)|·2π/N_i`.
    pub fn max_spacing(&self) -> f64 {
        self.weight.iter().copied().fold(0.0, f64::max)
    }

    /// Length of component `c` (or of the whole boundary for `None`).
    pub fn length(&self, c: Option<usize>) -> f64 {
        match c {
            Some(c) => self.ranges[c].range().map(|j| self.weight[j]).sum(),
            None => self.weight.iter().sum(),
        }
    }

    /// `∫ f g dσ` over the whole boundary.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).zip(&self.weight).map(|((a, b), w)| a * b * w).sum()
    }

    /// `∫_{γ_c} f dσ`.
    pub fn integrate_on(&self, c: usize, f: &[f64]) -> f64 {
        self.ranges[c].range().map(|j| f[j] * self.weight[j]).sum()
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.weight).map(|(a, w)| a * w).sum()
    }

    /// Indicator `e_c` of component `c` (`e_0 ≡ 1` for `c = 0`).
    pub fn indicator(&self, c: usize) -> Vec<f64> {
        if c == 0 {
            return vec![1.0; self.len()];
        }
        (0..self.len()).map(|j| if self.component[j] == c { 1.0 } else { 0.0 }).collect()
    }

    /// Distance from `z` to the nearest node.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.points.iter().map(|&p| (p - z).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Whether `z` lies in the open domain, from polygon winding numbers of the
    /// nodes of each component.
    pub fn contains(&self, z: Complex64) -> bool {
        self.ranges.iter().enumerate().all(|(c, r)| {
            let w = winding_number(&self.points[r.range()], z);
            if c == 0 {
                w > 0.5
            } else {
                w.abs() < 0.5
            }
        })
    }

    /// Same domain with every component refined by `factor`, without the O(M²)
    /// simplicity check.
    pub fn refined(&self, factor: usize) -> Result<Mesh> {
        let nodes: Vec<usize> = self.ranges.iter().map(|r| r.len * factor).collect();
        Self::build(self.domain.clone(), &nodes)
    }
}

/// One term `λⁿ ρ_n(t)` of a radial family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyTerm {
    pub n: u32,
    pub profile: Profile,
}

/// A one-parameter family of domains `λ ∈ [0, 1] → Ω^λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DomainFamily {
    /// Componentwise `(1-λ)·from + λ·to`.
    Blend { from: MultiDomain, to: MultiDomain },
    /// `ρ(t,λ) e^{it}` with `ρ(t,λ) = 1 + Σ λⁿ ρ_n(t)`.
    Radial { terms: Vec<FamilyTerm> },
}

impl DomainFamily {
    /// `ρ(·, λ)` of a radial family.
    pub fn radius_profile(&self, lambda: f64) -> Option<Profile> {
        match self {
            DomainFamily::Radial { terms } => {
                let mut sum = vec![WeightedProfile { weight: 1.0, profile: Profile::Constant { value: 1.0 } }];
                sum.extend(terms.iter().map(|term| WeightedProfile {
                    weight: lambda.powi(term.n as i32),
                    profile: term.profile.clone(),
                }));
                Some(Profile::Sum { terms: sum })
            }
            DomainFamily::Blend { .. } => None,
        }
    }

    /// Positivity of `ρ` is sampled at `samples` points.
    pub fn eval_sampled(&self, lambda: f64, samples: usize) -> Result<MultiDomain> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(arg(format!("λ = {lambda} outside [0, 1]")));
        }
        match self {
            DomainFamily::Blend { from, to } => {
                if from.components.len() != to.components.len() {
                    return Err(arg("blend endpoints have different numbers of components"));
                }
                let blend = |a: &BoundaryCurve, b: &BoundaryCurve| {
                    let to = if a.orientation == b.orientation { b.shape.clone() } else { reverse_shape(&b.shape) };
                    BoundaryCurve::new(CurveShape::Blend {
                        from: Box::new(a.shape.clone()),
                        to: Box::new(to),
                        weight: lambda,
                    })
                };
                let mut curves = from.components.iter().zip(&to.components).map(|(a, b)| {
                    let curve = blend(a, b);
                    if a.orientation == Orientation::Negative {
                        curve.reversed()
                    } else {
                        curve
                    }
                });
                let outer = curves.next().expect("domain has an outer component");
                make_domain(outer, curves.collect())
            }
            DomainFamily::Radial { terms } => {
                if terms.iter().any(|t| t.n == 0) {
                    return Err(arg("radial family terms start at n = 1"));
                }
                let rho = self.radius_profile(lambda).expect("radial");
                let (t, min) = rho.sampled_min(samples);
                if !(min > 0.0) {
                    return Err(Error::FamilyDegeneracy { lambda, t, rho: min });
                }
                MultiDomain::simply_connected(CurveShape::radial(Complex64::new(0.0, 0.0), rho))
            }
        }
    }

    pub fn eval(&self, lambda: f64) -> Result<MultiDomain> {
        self.eval_sampled(lambda, DOMAIN_SAMPLES)
    }

    /// Image of a reference point `z0` of the `λ = 0` domain: `r e^{it} ↦ r ρ(t,λ) e^{it}`
    /// for radial families; blend families keep probe points fixed.
    pub fn pullback(&self, z0: Complex64, lambda: f64) -> Complex64 {
        match self {
            DomainFamily::Radial { .. } => {
                if z0.norm() == 0.0 {
                    return z0;
                }
                let rho = self.radius_profile(lambda).expect("radial");
                z0 * rho.value(z0.arg())
            }
            DomainFamily::Blend { .. } => z0,
        }
    }
}

/// Shape traversed backwards, expressed as a shape (for blending curves of
/// opposite native direction).
fn reverse_shape(shape: &CurveShape) -> CurveShape {
    match shape {
        CurveShape::Circle { center, radius } => CurveShape::Ellipse { center: *center, a: *radius, b: -radius },
        CurveShape::Ellipse { center, a, b } => CurveShape::Ellipse { center: *center, a: *a, b: -b },
        CurveShape::Fourier { xc, xs, yc, ys } => CurveShape::Fourier {
            xc: xc.clone(),
            xs: xs.iter().map(|v| -v).collect(),
            yc: yc.clone(),
            ys: ys.iter().map(|v| -v).collect(),
        },
        other => CurveShape::Blend {
            from: Box::new(other.clone()),
            to: Box::new(other.clone()),
            weight: 0.0,
        },
    }
}
