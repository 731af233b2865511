//! JSON job documents consumed by the command-line tool.
//!
//! ```json
//! {
//!   "command": "obstruct",
//!   "y": { "seifert": [2, 3, 11] },
//!   "x": { "model": "homotopy-s3xs1" },
//!   "assumptions": { "theta_nonvanishing": "Froyshov h-invariant" },
//!   "r": "1/2"
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::complex::FilteredComplex;
use crate::cs_q::FourManifoldModel;
use crate::error::{ObstructionError, SeifertError};
use crate::level::{Level, Rational};
use crate::obstruction::{embedding_verdict_at, verdict_for_complex_at, AssumptionSet, ObstructionReport};
use crate::seifert::{build_filtered_generators, SeifertData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Flat,
    Cs,
    Grading,
    Homology,
    Obstruct,
}

/// An explicitly listed complex, for manifolds the enumerator does not cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitY {
    #[serde(flatten)]
    pub complex: FilteredComplex,
    /// `|R(Y)|`; defaults to the generator count plus one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_y: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum YSource {
    Seifert(SeifertData),
    Complex(ExplicitY),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub y: YSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<FourManifoldModel>,
    #[serde(default)]
    pub assumptions: AssumptionSet,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "optional_fraction")]
    pub r: Option<Rational>,
}

mod optional_fraction {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::level::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|t| parse_rational(&t).map_err(serde::de::Error::custom)).transpose()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("cannot parse job: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("command `{0}` needs Seifert multiplicities")]
    NeedsSeifert(&'static str),
    #[error("obstruct needs an `x` model")]
    MissingModel,
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self, JobError> {
        let job: JobSpec = serde_json::from_str(text)?;
        if let Some(x) = &job.x {
            x.validate().map_err(ObstructionError::from)?;
        }
        Ok(job)
    }

    pub fn seifert(&self, command: &'static str) -> Result<&SeifertData, JobError> {
        match &self.y {
            YSource::Seifert(y) => Ok(y),
            YSource::Complex(_) => Err(JobError::NeedsSeifert(command)),
        }
    }

    /// The filtered complex of `y`, however it was supplied.
    pub fn complex(&self) -> Result<FilteredComplex, JobError> {
        match &self.y {
            YSource::Seifert(y) => Ok(build_filtered_generators(y)?),
            YSource::Complex(e) => Ok(e.complex.clone()),
        }
    }

    /// The cut level for `homology`; `∞` when none is given.
    pub fn level(&self) -> Level {
        self.r.map_or(Level::Infinity, Level::Finite)
    }

    pub fn obstruct(&self) -> Result<ObstructionReport, JobError> {
        let x = self.x.as_ref().ok_or(JobError::MissingModel)?;
        match &self.y {
            YSource::Seifert(y) => Ok(embedding_verdict_at(y, x, &self.assumptions, self.r)?),
            YSource::Complex(e) => {
                let l_y = e.l_y.unwrap_or(e.complex.generators().len() as u32 + 1);
                let label = e.label.clone().unwrap_or_else(|| "Y".to_string());
                Ok(verdict_for_complex_at(&label, &e.complex, l_y, x, &self.assumptions, false, self.r)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruction::Verdict;

    #[test]
    fn parses_seifert_job() {
        let job = JobSpec::from_json(
            r#"{"command":"obstruct","y":{"seifert":[2,3,11]},"x":{"model":"homotopy-s3xs1"},
                "assumptions":{"theta_nonvanishing":"Froyshov h-invariant"}}"#,
        )
        .unwrap();
        assert_eq!(job.obstruct().unwrap().verdict, Verdict::Obstructed);
    }

    #[test]
    fn parses_complex_job() {
        let job = JobSpec::from_json(
            r#"{"command":"obstruct",
                "y":{"complex":{"generators":[{"id":"a","grading":1,"cs":"1/3"}],"l_y":2}},
                "x":{"model":"homotopy-s3xs1"},
                "assumptions":{"theta_nonvanishing":"given","nondegeneracy_asserted":true},
                "r":"1/2"}"#,
        )
        .unwrap();
        assert_eq!(job.r, Some(Rational::new(1, 2)));
        let report = job.obstruct().unwrap();
        assert_eq!(report.verdict, Verdict::Obstructed);
        assert_eq!(report.l_y(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(JobSpec::from_json(r#"{"command":"flat","y":{"seifert":[2,4,5]}}"#).is_err());
        assert!(JobSpec::from_json(r#"{"command":"flat","y":{"seifert":[2,3,5]},"r":"x"}"#).is_err());
        assert!(JobSpec::from_json(r#"{"command":"dance","y":{"seifert":[2,3,5]}}"#).is_err());
        let job = JobSpec::from_json(r#"{"command":"obstruct","y":{"seifert":[2,3,5]}}"#).unwrap();
        assert!(matches!(job.obstruct(), Err(JobError::MissingModel)));
    }

    #[test]
    fn round_trips() {
        let text = r#"{"command":"homology","y":{"seifert":[2,3,7]},"r":"1/2"}"#;
        let job = JobSpec::from_json(text).unwrap();
        let again = JobSpec::from_json(&serde_json::to_string(&job).unwrap()).unwrap();
        assert_eq!(job, again);
    }
}
