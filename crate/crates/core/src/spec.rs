//! JSON family specification files.
//!
//! ```json
//! {"kind":"joined_uniform","a":1,"b":4,"theta_T":0.5}
//! {"kind":"translation","base":"evd"}
//! {"kind":"translation","base":{"gapped":1.0}}
//! {"kind":"abs_x","of":{"kind":"translation","base":"normal"}}
//! {"kind":"reciprocal","of":{"kind":"translation","base":"evd"}}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::families::{AbsComposite, DynFamily, JoinedUniform, Reciprocal, Translation};
use crate::real::Real;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    JoinedUniform {
        a: f64,
        b: f64,
        #[serde(rename = "theta_T")]
        theta_t: f64,
    },
    Translation {
        base: BaseSpec,
    },
    AbsX {
        of: Box<FamilySpec>,
    },
    Reciprocal {
        of: Box<FamilySpec>,
    },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(NamedBase),
    Gapped { gapped: f64 },
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum NamedBase {
    Evd,
    Normal,
}

impl FamilySpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Whether the outermost constructor is the |x| composite.
    pub fn is_abs_x(&self) -> bool {
        matches!(self, FamilySpec::AbsX { .. })
    }

    pub fn build<T: Real>(&self) -> Result<DynFamily<T>, Error<T>> {
        Ok(match self {
            FamilySpec::JoinedUniform { a, b, theta_t } => Box::new(JoinedUniform::new(
                T::of(*a),
                T::of(*b),
                T::of(*theta_t),
            )?),
            FamilySpec::Translation { base } => match base {
                BaseSpec::Named(NamedBase::Evd) => Box::new(Translation::evd()),
                BaseSpec::Named(NamedBase::Normal) => Box::new(Translation::normal()),
                BaseSpec::Gapped { gapped } => Box::new(Translation::gapped(T::of(*gapped))?),
            },
            FamilySpec::AbsX { of } => Box::new(AbsComposite::new(of.build::<T>()?)?),
            FamilySpec::Reciprocal { of } => Box::new(Reciprocal::new(of.build::<T>()?)),
        })
    }
}
