//! Chern-Simons pairing on homology S³×S¹ models and the covering
//! invariants `Q̃` and `Qˡ`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, SeifertError};
use crate::level::{serde_fraction_vec, Level, Rational};
use crate::seifert::{enumerate_flat_connections, FlatConnection, SeifertData};

/// Supported four-manifold models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum FourManifoldModel {
    /// `Y × S¹` with `φ` dual to `[Y]`.
    Product { y: SeifertData },
    /// Any manifold homotopy equivalent to `S³ × S¹`.
    #[serde(rename = "homotopy-s3xs1")]
    HomotopyS3xS1,
    /// Declared cs spectra (values in `[0,1)`) of the irreducible flat
    /// connections on each `i`-fold cyclic cover.
    ExplicitCovers {
        #[serde(with = "cover_keys")]
        covers: BTreeMap<u32, CoverSpectrum>,
    },
}

// Internally tagged enums buffer map keys as strings, so parse them here.
mod cover_keys {
    use std::collections::BTreeMap;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::CoverSpectrum;

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, CoverSpectrum>, s: S) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<u32, &CoverSpectrum> = m.iter().map(|(k, v)| (*k, v)).collect();
        keyed.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, CoverSpectrum>, D::Error> {
        let raw = BTreeMap::<String, CoverSpectrum>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<u32>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("invalid cover index `{}`", k)))
            })
            .collect()
    }
}

/// List of cs values on one cover.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoverSpectrum(#[serde(with = "serde_fraction_vec")] pub Vec<Rational>);

impl FourManifoldModel {
    pub fn explicit(covers: impl IntoIterator<Item = (u32, Vec<Rational>)>) -> Result<Self, ModelError> {
        let covers: BTreeMap<u32, CoverSpectrum> =
            covers.into_iter().map(|(i, v)| (i, CoverSpectrum(v))).collect();
        let model = FourManifoldModel::ExplicitCovers { covers };
        model.validate()?;
        Ok(model)
    }

    /// Checks the ExplicitCovers invariants (positive keys, values in `[0,1)`).
    pub fn validate(&self) -> Result<(), ModelError> {
        if let FourManifoldModel::ExplicitCovers { covers } = self {
            for (&i, spectrum) in covers {
                if i == 0 {
                    return Err(ModelError::ZeroCover);
                }
                if let Some(v) = spectrum.0.iter().find(|v| **v < Rational::zero() || **v >= Rational::one()) {
                    return Err(ModelError::ValueOutOfRange(v.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            FourManifoldModel::Product { .. } => "product",
            FourManifoldModel::HomotopyS3xS1 => "homotopy-s3xs1",
            FourManifoldModel::ExplicitCovers { .. } => "explicit-covers",
        }
    }
}

/// `Q̃`: a value in `[0, 1/2]` or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QValue(Level);

impl QValue {
    pub const INFINITY: QValue = QValue(Level::Infinity);

    pub fn level(&self) -> Level {
        self.0
    }
}

impl std::fmt::Display for QValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `cs_(Y×S¹)([a],[b]) = cs_Y(a) − cs_Y(b)`; `b = None` is the trivial
/// connection.
pub fn cs_pair(
    model: &FourManifoldModel,
    a: &FlatConnection,
    b: Option<&FlatConnection>,
) -> Result<Rational, ModelError> {
    match model {
        FourManifoldModel::Product { .. } => {
            Ok(a.cs_value - b.map_or_else(Rational::zero, |b| b.cs_value))
        }
        _ => Err(ModelError::UnsupportedModel),
    }
}

/// Distance from `v` to the nearest integer.
fn distance_to_integer(v: &Rational) -> Rational {
    let f = v - v.floor();
    f.min(Rational::one() - f)
}

/// `min_v min_m |v + m|`, or `∞` for an empty spectrum.
pub fn q_tilde(cs_values: &[Rational]) -> QValue {
    cs_values
        .iter()
        .map(distance_to_integer)
        .min()
        .map_or(QValue::INFINITY, |d| QValue(Level::Finite(d)))
}

/// `Qˡ_X = min_{1 ≤ i ≤ l} Q̃` over the `i`-fold cyclic covers.
pub fn q_l(model: &FourManifoldModel, l: u32) -> Result<QValue, QError> {
    if l == 0 {
        return Err(ModelError::ZeroLength.into());
    }
    match model {
        FourManifoldModel::HomotopyS3xS1 => Ok(QValue::INFINITY),
        FourManifoldModel::Product { y } => {
            // every cyclic cover of Y×S¹ is Y×S¹ again
            let values: Vec<Rational> =
                enumerate_flat_connections(y)?.iter().map(|c| c.cs_value).collect();
            Ok(q_tilde(&values))
        }
        FourManifoldModel::ExplicitCovers { covers } => {
            model.validate()?;
            let mut best = QValue::INFINITY;
            for i in 1..=l {
                let spectrum = covers.get(&i).ok_or(ModelError::MissingCover(i))?;
                best = best.min(q_tilde(&spectrum.0));
            }
            Ok(best)
        }
    }
}

/// Errors of [`q_l`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}
