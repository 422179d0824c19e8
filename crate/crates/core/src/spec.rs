//! JSON input specs for domains and domain families.
//!
//! ```json
//! {"outer": {"kind": "ellipse", "center": [0, 0], "a": 1, "b": 0.6}, "inners": []}
//! {"family": "radial", "terms": [{"n": 1, "profile": {"kind": "trig", "cos": [0, 0, 0.1]}}]}
//! {"family": "blend", "from": {"outer": ...}, "to": {"outer": ...}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Inner curves may be given in either
//! direction; orientation is normalized on build.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{make_domain, BoundaryCurve, CurveShape, DomainFamily, FamilyTerm, MultiDomain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub outer: CurveShape,
    #[serde(default)]
    pub inners: Vec<CurveShape>,
}

impl DomainSpec {
    pub fn build(&self) -> Result<MultiDomain> {
        make_domain(
            BoundaryCurve::new(self.outer.clone()),
            self.inners.iter().cloned().map(BoundaryCurve::new).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Blend { from: DomainSpec, to: DomainSpec },
    Radial { terms: Vec<FamilyTerm> },
}

impl FamilySpec {
    pub fn build(&self) -> Result<DomainFamily> {
        Ok(match self {
            FamilySpec::Blend { from, to } => {
                let (from, to) = (from.build()?, to.build()?);
                if from.components.len() != to.components.len() {
                    return Err(Error::Spec("blend endpoints have different numbers of components".into()));
                }
                DomainFamily::Blend { from, to }
            }
            FamilySpec::Radial { terms } => {
                if terms.iter().any(|t| t.n == 0) {
                    return Err(Error::Spec("radial family terms start at n = 1".into()));
                }
                DomainFamily::Radial { terms: terms.clone() }
            }
        })
    }
}

/// Contents of a spec file.
#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Domain(DomainSpec),
    Family(FamilySpec),
}

impl Spec {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        let is_family = value.get("family").is_some();
        let spec = if is_family {
            Spec::Family(serde_json::from_value(value).map_err(|e| Error::Spec(format!("family spec: {e}")))?)
        } else {
            Spec::Domain(serde_json::from_value(value).map_err(|e| Error::Spec(format!("domain spec: {e}")))?)
        };
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        Spec::parse(&text)
    }

    /// The domain of a domain spec, or the `λ = 0` member of a family.
    pub fn domain(&self) -> Result<MultiDomain> {
        match self {
            Spec::Domain(d) => d.build(),
            Spec::Family(f) => f.build()?.eval(0.0),
        }
    }

    pub fn family(&self) -> Result<DomainFamily> {
        match self {
            Spec::Family(f) => f.build(),
            Spec::Domain(_) => Err(Error::Spec("expected a family spec (with a \"family\" field)".into())),
        }
    }
}
