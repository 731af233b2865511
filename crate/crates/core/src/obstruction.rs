//! The embedding obstruction: a nonzero class `[θʳ]` for some admissible
//! `r ≤ min{Q^{2l_Y+3}_X, 1}` rules out embeddings `Y → X` with `f_*[Y] = 1`.
//!
//! The engine never counts trajectories. Nonvanishing of `θʳ` is certified
//! either from explicit counts or from a declared nonvanishing axiom for the
//! unfiltered class, combined with the degree bookkeeping of the restricted
//! complex.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::complex::{
    admissible_levels, is_coboundary, restrict, CoChain, CoboundaryDecision, DifferentialEntry,
    FilteredComplex, Generator,
};
use crate::cs_q::{q_l, FourManifoldModel, QError, QValue};
use crate::error::{ComplexError, ObstructionError};
use crate::level::{Level, Rational};
use crate::seifert::{build_filtered_generators, enumerate_flat_connections, SeifertData};

impl From<QError> for ObstructionError {
    fn from(e: QError) -> Self {
        match e {
            QError::Model(m) => ObstructionError::Model(m),
            QError::Seifert(s) => ObstructionError::Seifert(s),
        }
    }
}

/// Inputs the engine cannot compute itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionSet {
    /// Trajectory counts `θ(a)` on degree-1 generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_counts: Option<CoChain>,
    /// Source tag of an axiom asserting `[θ] ≠ 0` in unfiltered cohomology.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_nonvanishing: Option<String>,
    /// All flat connections are non-degenerate. Automatic for Brieskorn spheres.
    #[serde(default)]
    pub nondegeneracy_asserted: bool,
}

pub const FROYSHOV_TAG: &str = "Froyshov h-invariant";

impl AssumptionSet {
    pub fn none() -> Self {
        AssumptionSet::default()
    }

    /// Nonvanishing of `[θ]` via the Frøyshov h-invariant.
    pub fn froyshov() -> Self {
        AssumptionSet {
            theta_counts: None,
            theta_nonvanishing: Some(FROYSHOV_TAG.to_string()),
            nondegeneracy_asserted: true,
        }
    }

    pub fn with_counts(mut self, counts: CoChain) -> Self {
        self.theta_counts = Some(counts);
        self
    }

    pub fn has_theta_data(&self) -> bool {
        self.theta_counts.is_some() || self.theta_nonvanishing.is_some()
    }
}

/// `l_Y = |R(Y)|`: irreducible classes plus the trivial connection.
pub fn count_l_y(y: &SeifertData) -> Result<u32, ObstructionError> {
    Ok(l_y_from_irreducibles(enumerate_flat_connections(y)?.len()))
}

pub fn l_y_from_irreducibles(n: usize) -> u32 {
    n as u32 + 1
}

/// The admissible range of filtration levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub l_y: u32,
    /// `2·l_Y + 3`.
    pub cover_length: u32,
    pub q: QValue,
    /// `min{Q, 1}`.
    pub r_max: Level,
    /// Critical levels, which are never admissible.
    #[serde(with = "crate::level::serde_fraction_vec")]
    pub excluded: Vec<Rational>,
    /// `[0, r_max]` minus the excluded levels is nonempty.
    pub nonempty: bool,
}

pub fn window_for_complex(
    c: &FilteredComplex,
    l_y: u32,
    x: &FourManifoldModel,
) -> Result<Window, ObstructionError> {
    let cover_length = 2 * l_y + 3;
    let q = q_l(x, cover_length)?;
    let r_max = q.level().min(Level::one());
    let excluded = admissible_levels(c);
    let r_max_q = r_max.finite().expect("r_max is capped at 1");
    // a closed interval with positive length always survives finitely many exclusions
    let nonempty = r_max_q > Rational::from(0) || !excluded.contains(&r_max_q);
    Ok(Window { l_y, cover_length, q, r_max, excluded, nonempty })
}

/// `r_max = min{Q^{2l_Y+3}_X, 1}` and the excluded critical levels.
pub fn admissible_window(y: &SeifertData, x: &FourManifoldModel) -> Result<Window, ObstructionError> {
    let c = build_filtered_generators(y)?;
    window_for_complex(&c, l_y_from_irreducibles(c.generators().len()), x)
}

/// Candidate cut levels: `r_max` itself when admissible, then the midpoint
/// of every gap between consecutive critical levels inside `[0, r_max]`,
/// from the top down.
pub fn candidate_levels(window: &Window) -> Vec<Rational> {
    let Some(top) = window.r_max.finite() else {
        return Vec::new();
    };
    let zero = Rational::from(0);
    let mut points: BTreeSet<Rational> =
        window.excluded.iter().copied().filter(|v| *v > zero && *v < top).collect();
    points.insert(zero);
    points.insert(top);
    let points: Vec<Rational> = points.into_iter().collect();

    let mut out = Vec::new();
    if !window.excluded.contains(&top) {
        out.push(top);
    }
    for pair in points.windows(2).rev() {
        let mid = (pair[0] + pair[1]) / Rational::from(2);
        if !out.contains(&mid) && !window.excluded.contains(&mid) {
            out.push(mid);
        }
    }
    if out.is_empty() && !window.excluded.contains(&zero) {
        out.push(zero);
    }
    out
}

/// Why a level could not be certified.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum FailureReason {
    /// Even-degree generators below `r` and no explicit counts to decide.
    EvenDegreeBelowLevel { ids: Vec<String> },
    /// Degree-1 generators above `r` may carry all of the assumed cochain.
    DegreeOneAboveLevel { ids: Vec<String> },
    NoDegreeOneGenerators,
    /// The explicit counts vanish on every generator below `r`.
    ThetaVanishesBelowLevel,
    ThetaIsCoboundary,
    DifferentialIncomplete,
    InsufficientAssumptions,
}

impl FailureReason {
    pub fn code(&self) -> &'static str {
        match self {
            FailureReason::EvenDegreeBelowLevel { .. } => "even-degree-below-level",
            FailureReason::DegreeOneAboveLevel { .. } => "degree-one-above-level",
            FailureReason::NoDegreeOneGenerators => "no-degree-one-generators",
            FailureReason::ThetaVanishesBelowLevel => "theta-vanishes-below-level",
            FailureReason::ThetaIsCoboundary => "theta-is-coboundary",
            FailureReason::DifferentialIncomplete => "differential-incomplete",
            FailureReason::InsufficientAssumptions => "insufficient-assumptions",
        }
    }
}

/// Source of the nonvanishing of `θʳ` as a cochain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaEvidence {
    /// Axiom `[θ] ≠ 0`; every degree-1 generator lies below `r`, so the
    /// restriction is the whole cochain.
    Assumed { source: String },
    /// Explicit counts restricted below `r`; nonzero.
    Explicit { restricted: CoChain },
}

/// How `[θʳ] ≠ 0` follows once `θʳ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Route {
    /// No even-degree generator below `r`, so `δʳ` into degree 1 is zero.
    Parity,
    /// A rational functional on `CF¹_r`, integral on `im δʳ` and not on `θʳ`.
    DualWitness { functional: Vec<(String, String)> },
}

/// Self-contained evidence for `0 ≠ [θʳ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub r: Level,
    /// Full generator listing of the complex.
    pub generators: Vec<Generator>,
    pub differential: Vec<DifferentialEntry>,
    pub even_degree_below_r: Vec<String>,
    pub degree_one_below_r: Vec<String>,
    pub theta: ThetaEvidence,
    pub route: Route,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CertOutcome {
    Certified { certificate: Box<Certificate> },
    Failed { reasons: Vec<FailureReason> },
}

impl CertOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertOutcome::Certified { certificate } => Some(certificate),
            CertOutcome::Failed { .. } => None,
        }
    }
}

fn ids<'a>(it: impl IntoIterator<Item = &'a Generator>) -> Vec<String> {
    it.into_iter().map(|g| g.id.clone()).collect()
}

/// Tries to certify `[θʳ] ≠ 0` in `HF¹_r`. Explicit counts are tried
/// first, then the nonvanishing axiom; the first success wins.
pub fn certify_theta_nonvanishing(
    c: &FilteredComplex,
    r: Level,
    assumptions: &AssumptionSet,
) -> Result<CertOutcome, ObstructionError> {
    if !assumptions.has_theta_data() {
        return Err(ObstructionError::InsufficientAssumptions);
    }
    let sub = restrict(c, r)?;
    let even_below: Vec<&Generator> = sub.generators().iter().filter(|g| g.grading % 2 == 0).collect();
    let degree_one_below = ids(sub.generators_in_degree(1));
    let base = |theta: ThetaEvidence, route: Route| Certificate {
        r,
        generators: c.generators().to_vec(),
        differential: c.differential().to_vec(),
        even_degree_below_r: ids(even_below.iter().copied()),
        degree_one_below_r: degree_one_below.clone(),
        theta,
        route,
    };
    let mut reasons = Vec::new();

    if let Some(t) = &assumptions.theta_counts {
        for (id, &v) in &t.coefficients {
            let g = c.generator(id).ok_or_else(|| ComplexError::UnknownGenerator(id.clone()))?;
            if v != 0 && (g.grading != 1 || t.degree != 1) {
                return Err(ComplexError::DegreeMismatch { id: id.clone(), expected: 1, found: g.grading }.into());
            }
        }
        let restricted = t.restrict_to(&sub);
        if restricted.is_zero() {
            reasons.push(FailureReason::ThetaVanishesBelowLevel);
        } else if even_below.is_empty() {
            let cert = base(ThetaEvidence::Explicit { restricted }, Route::Parity);
            return Ok(CertOutcome::Certified { certificate: Box::new(cert) });
        } else if c.differential_incomplete() {
            reasons.push(FailureReason::DifferentialIncomplete);
        } else {
            match is_coboundary(&restricted, c, r)? {
                CoboundaryDecision::Coboundary { .. } => reasons.push(FailureReason::ThetaIsCoboundary),
                CoboundaryDecision::NotCoboundary { dual_witness } => {
                    let functional = dual_witness
                        .into_iter()
                        .map(|(id, w)| (id, crate::level::format_rational(&w)))
                        .collect();
                    let cert = base(ThetaEvidence::Explicit { restricted }, Route::DualWitness { functional });
                    return Ok(CertOutcome::Certified { certificate: Box::new(cert) });
                }
            }
        }
    }

    if let Some(source) = &assumptions.theta_nonvanishing {
        let all_degree_one = c.generators_in_degree(1);
        let above: Vec<&Generator> =
            all_degree_one.iter().copied().filter(|g| !r.exceeds(&g.cs_level)).collect();
        if !even_below.is_empty() {
            reasons.push(FailureReason::EvenDegreeBelowLevel { ids: ids(even_below.iter().copied()) });
        } else if all_degree_one.is_empty() {
            reasons.push(FailureReason::NoDegreeOneGenerators);
        } else if !above.is_empty() {
            reasons.push(FailureReason::DegreeOneAboveLevel { ids: ids(above) });
        } else {
            let cert = base(ThetaEvidence::Assumed { source: source.clone() }, Route::Parity);
            return Ok(CertOutcome::Certified { certificate: Box::new(cert) });
        }
    }
    reasons.sort();
    reasons.dedup();
    Ok(CertOutcome::Failed { reasons })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestedLevel {
    pub r: Level,
    pub outcome: CertOutcome,
}

/// Full record of one obstruction evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub y: String,
    pub x: String,
    pub window: Window,
    pub tested: Vec<TestedLevel>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    /// Axioms the verdict depends on.
    pub axioms: Vec<String>,
}

impl ObstructionReport {
    pub fn r_max(&self) -> Level {
        self.window.r_max
    }

    pub fn l_y(&self) -> u32 {
        self.window.l_y
    }

    /// The certificate behind an `Obstructed` verdict.
    pub fn certificate(&self) -> Option<&Certificate> {
        self.tested.iter().find_map(|t| t.outcome.certificate())
    }
}

/// Evaluates the criterion for a complex given directly.
pub fn verdict_for_complex(
    y_label: &str,
    c: &FilteredComplex,
    l_y: u32,
    x: &FourManifoldModel,
    assumptions: &AssumptionSet,
    nondegenerate_by_construction: bool,
) -> Result<ObstructionReport, ObstructionError> {
    verdict_for_complex_at(y_label, c, l_y, x, assumptions, nondegenerate_by_construction, None)
}

/// As [`verdict_for_complex`], but tests only the level `fixed` when given.
/// A fixed level above `r_max` is recorded as untested.
pub fn verdict_for_complex_at(
    y_label: &str,
    c: &FilteredComplex,
    l_y: u32,
    x: &FourManifoldModel,
    assumptions: &AssumptionSet,
    nondegenerate_by_construction: bool,
    fixed: Option<Rational>,
) -> Result<ObstructionReport, ObstructionError> {
    if !nondegenerate_by_construction && !assumptions.nondegeneracy_asserted {
        return Err(ObstructionError::NondegeneracyNotAsserted);
    }
    let window = window_for_complex(c, l_y, x)?;
    let mut report = ObstructionReport {
        y: y_label.to_string(),
        x: x.name().to_string(),
        window,
        tested: Vec::new(),
        verdict: Verdict::Inconclusive,
        reasons: Vec::new(),
        axioms: Vec::new(),
    };
    if nondegenerate_by_construction {
        report.axioms.push("nondegeneracy: Brieskorn sphere".to_string());
    } else {
        report.axioms.push("nondegeneracy: asserted".to_string());
    }
    if !assumptions.has_theta_data() {
        report.reasons.push(FailureReason::InsufficientAssumptions.code().to_string());
        return Ok(report);
    }

    let mut codes = BTreeSet::new();
    let levels = match fixed {
        None => candidate_levels(&report.window),
        Some(r) if report.window.r_max < Level::Finite(r) => {
            codes.insert("level-above-window".to_string());
            Vec::new()
        }
        Some(r) => vec![r],
    };
    for r in levels {
        let outcome = certify_theta_nonvanishing(c, Level::Finite(r), assumptions)?;
        let done = match &outcome {
            CertOutcome::Certified { certificate } => {
                if let ThetaEvidence::Assumed { source } = &certificate.theta {
                    report.axioms.push(format!("theta nonvanishing: {}", source));
                }
                true
            }
            CertOutcome::Failed { reasons } => {
                codes.extend(reasons.iter().map(|x| x.code().to_string()));
                false
            }
        };
        report.tested.push(TestedLevel { r: Level::Finite(r), outcome });
        if done {
            report.verdict = Verdict::Obstructed;
            return Ok(report);
        }
    }
    if report.tested.is_empty() && codes.is_empty() {
        codes.insert("empty-window".to_string());
    }
    report.reasons = codes.into_iter().collect();
    Ok(report)
}

/// Evaluates the embedding criterion for a Brieskorn sphere `y` in `x`.
pub fn embedding_verdict(
    y: &SeifertData,
    x: &FourManifoldModel,
    assumptions: &AssumptionSet,
) -> Result<ObstructionReport, ObstructionError> {
    embedding_verdict_at(y, x, assumptions, None)
}

pub fn embedding_verdict_at(
    y: &SeifertData,
    x: &FourManifoldModel,
    assumptions: &AssumptionSet,
    fixed: Option<Rational>,
) -> Result<ObstructionReport, ObstructionError> {
    let c = build_filtered_generators(y)?;
    let l_y = l_y_from_irreducibles(c.generators().len());
    verdict_for_complex_at(&y.to_string(), &c, l_y, x, assumptions, true, fixed)
}
