//! Independent re-validation of obstruction certificates.
//!
//! Works only from the serialized generator and differential listing and
//! the recorded window. Nothing here calls the restriction or coboundary
//! routines used to produce the certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::level::{parse_rational, Level, Rational};
use crate::obstruction::{Certificate, ObstructionReport, Route, ThetaEvidence, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("report verdict is not obstructed")]
    NotObstructed,
    #[error("report carries no certificate")]
    Missing,
    #[error("window arithmetic does not check out: {0}")]
    Window(String),
    #[error("level {0} lies above r_max")]
    AboveWindow(String),
    #[error("level {0} coincides with a critical value")]
    CriticalLevel(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("recorded generator set `{0}` does not match the listing")]
    GeneratorSet(&'static str),
    #[error("even-degree generators below r: {0:?}")]
    EvenBelow(Vec<String>),
    #[error("theta evidence invalid: {0}")]
    Theta(String),
    #[error("dual witness invalid: {0}")]
    Witness(String),
}

fn below(r: &Level, v: &Rational) -> bool {
    match r {
        Level::Infinity => true,
        Level::Finite(r) => v < r,
    }
}

fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Checks a certificate on its own terms.
pub fn verify_certificate(cert: &Certificate) -> Result<(), CertificateError> {
    let r = cert.r;
    let mut seen = BTreeSet::new();
    for g in &cert.generators {
        if !seen.insert(g.id.as_str()) {
            return Err(CertificateError::DuplicateGenerator(g.id.clone()));
        }
        if Level::Finite(g.cs_level) == r {
            return Err(CertificateError::CriticalLevel(r.to_string()));
        }
    }

    let degree: BTreeMap<&str, u8> = cert.generators.iter().map(|g| (g.id.as_str(), g.grading)).collect();
    let kept: BTreeSet<&str> =
        cert.generators.iter().filter(|g| below(&r, &g.cs_level)).map(|g| g.id.as_str()).collect();
    let even: Vec<String> = cert
        .generators
        .iter()
        .filter(|g| kept.contains(g.id.as_str()) && g.grading % 2 == 0)
        .map(|g| g.id.clone())
        .collect();
    let ones: Vec<&str> = cert
        .generators
        .iter()
        .filter(|g| kept.contains(g.id.as_str()) && g.grading == 1)
        .map(|g| g.id.as_str())
        .collect();
    if even != cert.even_degree_below_r {
        return Err(CertificateError::GeneratorSet("even_degree_below_r"));
    }
    if ones != cert.degree_one_below_r.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(CertificateError::GeneratorSet("degree_one_below_r"));
    }

    // θʳ as a vector on the degree-1 generators below r
    let theta: BTreeMap<&str, i64> = match &cert.theta {
        ThetaEvidence::Assumed { source } => {
            if source.is_empty() {
                return Err(CertificateError::Theta("empty axiom tag".into()));
            }
            let all_ones = cert.generators.iter().filter(|g| g.grading == 1).count();
            if all_ones == 0 {
                return Err(CertificateError::Theta("no degree-1 generators".into()));
            }
            if all_ones != ones.len() {
                return Err(CertificateError::Theta("degree-1 generators above r".into()));
            }
            if !matches!(cert.route, Route::Parity) {
                return Err(CertificateError::Theta("assumed theta needs the parity route".into()));
            }
            BTreeMap::new()
        }
        ThetaEvidence::Explicit { restricted } => {
            if restricted.degree != 1 {
                return Err(CertificateError::Theta("cochain not in degree 1".into()));
            }
            let mut map = BTreeMap::new();
            for (id, &v) in &restricted.coefficients {
                if v == 0 {
                    continue;
                }
                if !ones.contains(&id.as_str()) {
                    return Err(CertificateError::Theta(format!("support `{}` outside CF¹ below r", id)));
                }
                map.insert(id.as_str(), v);
            }
            if map.is_empty() {
                return Err(CertificateError::Theta("restricted cochain vanishes".into()));
            }
            map
        }
    };

    match &cert.route {
        Route::Parity => {
            if !even.is_empty() {
                return Err(CertificateError::EvenBelow(even));
            }
            Ok(())
        }
        Route::DualWitness { functional } => {
            let mut w: BTreeMap<&str, Rational> = BTreeMap::new();
            for (id, text) in functional {
                if !ones.contains(&id.as_str()) {
                    return Err(CertificateError::Witness(format!("`{}` not a degree-1 generator below r", id)));
                }
                let q = parse_rational(text).map_err(|e| CertificateError::Witness(e.to_string()))?;
                w.insert(id.as_str(), q);
            }
            // columns of δ: C⁰_r → C¹_r, one per degree-0 generator below r
            let mut columns: BTreeMap<&str, Rational> = BTreeMap::new();
            for e in &cert.differential {
                let (s, t) = (e.source.as_str(), e.target.as_str());
                if kept.contains(s) && kept.contains(t) && degree.get(s) == Some(&1) && degree.get(t) == Some(&0) {
                    let wv = w.get(s).copied().unwrap_or_else(Rational::zero);
                    *columns.entry(t).or_insert_with(Rational::zero) += wv * Rational::from(e.coefficient);
                }
            }
            if let Some((id, v)) = columns.iter().find(|(_, v)| !is_integer(v)) {
                return Err(CertificateError::Witness(format!("non-integral on δ of `{}`: {}", id, v)));
            }
            let pairing: Rational = theta
                .iter()
                .map(|(id, &v)| w.get(id).copied().unwrap_or_else(Rational::zero) * Rational::from(v))
                .sum();
            if is_integer(&pairing) {
                return Err(CertificateError::Witness("pairing with theta is integral".into()));
            }
            Ok(())
        }
    }
}

/// Checks an `Obstructed` report: window arithmetic, level placement, and
/// the attached certificate.
pub fn verify_report(report: &ObstructionReport) -> Result<(), CertificateError> {
    if report.verdict != Verdict::Obstructed {
        return Err(CertificateError::NotObstructed);
    }
    let cert = report.certificate().ok_or(CertificateError::Missing)?;
    let w = &report.window;
    if w.cover_length != 2 * w.l_y + 3 {
        return Err(CertificateError::Window(format!("cover length {} for l_Y {}", w.cover_length, w.l_y)));
    }
    if w.r_max != w.q.level().min(Level::one()) {
        return Err(CertificateError::Window(format!("r_max {} for Q {}", w.r_max, w.q)));
    }
    let listed: BTreeSet<Rational> = cert.generators.iter().map(|g| g.cs_level).collect();
    if listed.into_iter().collect::<Vec<_>>() != w.excluded {
        return Err(CertificateError::Window("excluded levels differ from the listing".into()));
    }
    if cert.r > w.r_max {
        return Err(CertificateError::AboveWindow(cert.r.to_string()));
    }
    if let Level::Finite(r) = cert.r {
        if r < Rational::zero() || w.excluded.contains(&r) {
            return Err(CertificateError::CriticalLevel(r.to_string()));
        }
    }
    verify_certificate(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{CoChain, DifferentialEntry, FilteredComplex, Generator};
    use crate::cs_q::FourManifoldModel;
    use crate::obstruction::{certify_theta_nonvanishing, embedding_verdict, AssumptionSet};
    use crate::seifert::validate_seifert;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn obstructed(m: &[i64]) -> ObstructionReport {
        let y = validate_seifert(m).unwrap();
        embedding_verdict(&y, &FourManifoldModel::HomotopyS3xS1, &AssumptionSet::froyshov()).unwrap()
    }

    #[test]
    fn accepts_engine_output() {
        for m in [[2, 3, 11], [2, 3, 29], [2, 3, 47]] {
            verify_report(&obstructed(&m)).unwrap();
        }
    }

    #[test]
    fn rejects_tampering() {
        let good = obstructed(&[2, 3, 11]);

        let mut bad = good.clone();
        bad.window.r_max = q(2, 1).into();
        assert!(verify_report(&bad).is_err());

        let mut bad = good.clone();
        bad.window.cover_length += 1;
        assert!(matches!(verify_report(&bad), Err(CertificateError::Window(_))));

        let mut bad = good.clone();
        let lvl = bad.window.excluded[0];
        if let crate::obstruction::CertOutcome::Certified { certificate } = &mut bad.tested[0].outcome {
            certificate.r = Level::Finite(lvl);
        }
        assert!(verify_report(&bad).is_err());

        let mut bad = good.clone();
        if let crate::obstruction::CertOutcome::Certified { certificate } = &mut bad.tested[0].outcome {
            certificate.generators[0].grading = 0;
        }
        assert!(verify_report(&bad).is_err());

        let mut bad = good;
        bad.verdict = Verdict::Inconclusive;
        assert_eq!(verify_report(&bad), Err(CertificateError::NotObstructed));
    }

    #[test]
    fn dual_witness_checked_from_listing() {
        let c = FilteredComplex::new(
            vec![
                Generator::new("z", 0, q(1, 4)),
                Generator::new("a", 1, q(1, 2)),
                Generator::new("b", 1, q(3, 4)),
            ],
            vec![DifferentialEntry { source: "b".into(), target: "z".into(), coefficient: 2 }],
            false,
        )
        .unwrap();
        let a = AssumptionSet::none().with_counts(CoChain::new(1, [("b".to_string(), 1)]));
        let out = certify_theta_nonvanishing(&c, Level::one(), &a).unwrap();
        let mut cert = out.certificate().unwrap().clone();
        verify_certificate(&cert).unwrap();
        if let Route::DualWitness { functional } = &mut cert.route {
            for (_, v) in functional.iter_mut() {
                *v = "1/3".into();
            }
        }
        assert!(matches!(verify_certificate(&cert), Err(CertificateError::Witness(_))));
    }
}
