//! Filtered Floer chain complexes with integer coefficients.
//!
//! Generators carry a grading mod 8 and a Chern-Simons level in `[0, 1)`.
//! Each generator stands for the canonical lift of its flat connection: the
//! other lifts sit at `(level + n, grading + 8n)` and never fall below a cut
//! `r ≤ 1`, so for those cuts the window test is a plain comparison of the
//! stored level with `r`.
//!
//! The differential `∂` lowers the grading by one and strictly lowers the
//! level, so every sublevel set spans a subcomplex. Cohomology uses the
//! transposed maps `δ = ∂ᵀ`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ComplexError;
use crate::level::{serde_fraction, Level, Rational};
use crate::snf::{smith_normal_form, solve_integer, AbelianGroup, IntMatrix, IntegerSolve};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub grading: u8,
    #[serde(rename = "cs", with = "serde_fraction")]
    pub cs_level: Rational,
}

impl Generator {
    pub fn new(id: impl Into<String>, grading: u8, cs_level: Rational) -> Self {
        Generator { id: id.into(), grading, cs_level }
    }
}

/// One coefficient `⟨∂ source, target⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DifferentialEntry {
    #[serde(rename = "from")]
    pub source: String,
    #[serde(rename = "to")]
    pub target: String,
    #[serde(rename = "coeff")]
    pub coefficient: i64,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    generators: Vec<Generator>,
    #[serde(default)]
    differential: Vec<DifferentialEntry>,
    #[serde(default)]
    differential_incomplete: bool,
}

/// A validated filtered complex. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex", into = "RawComplex")]
pub struct FilteredComplex {
    generators: Vec<Generator>,
    differential: Vec<DifferentialEntry>,
    differential_incomplete: bool,
    index: HashMap<String, usize>,
}

impl TryFrom<RawComplex> for FilteredComplex {
    type Error = ComplexError;
    fn try_from(raw: RawComplex) -> Result<Self, Self::Error> {
        FilteredComplex::new(raw.generators, raw.differential, raw.differential_incomplete)
    }
}

impl From<FilteredComplex> for RawComplex {
    fn from(c: FilteredComplex) -> Self {
        RawComplex {
            generators: c.generators,
            differential: c.differential,
            differential_incomplete: c.differential_incomplete,
        }
    }
}

fn degree_below(g: u8) -> u8 {
    (g + 7) % 8
}

impl FilteredComplex {
    /// Validates generators and differential, merges repeated entries and
    /// checks `∂∘∂ = 0`.
    pub fn new(
        generators: Vec<Generator>,
        differential: Vec<DifferentialEntry>,
        differential_incomplete: bool,
    ) -> Result<Self, ComplexError> {
        let mut index = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.grading >= 8 {
                return Err(ComplexError::GradingOutOfRange(g.id.clone()));
            }
            if g.cs_level < Rational::zero() || g.cs_level >= Rational::one() {
                return Err(ComplexError::LevelOutOfRange(g.id.clone()));
            }
            if index.insert(g.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateId(g.id.clone()));
            }
        }

        let mut merged: BTreeMap<(String, String), i64> = BTreeMap::new();
        for entry in differential {
            let s = *index
                .get(&entry.source)
                .ok_or_else(|| ComplexError::UnknownGenerator(entry.source.clone()))?;
            let t = *index
                .get(&entry.target)
                .ok_or_else(|| ComplexError::UnknownGenerator(entry.target.clone()))?;
            let (gs, gt) = (&generators[s], &generators[t]);
            if entry.coefficient != 0
                && (gt.grading != degree_below(gs.grading) || gt.cs_level >= gs.cs_level)
            {
                return Err(ComplexError::InvalidEntry {
                    source_id: entry.source,
                    target: entry.target,
                });
            }
            *merged.entry((entry.source, entry.target)).or_insert(0) += entry.coefficient;
        }
        let differential: Vec<DifferentialEntry> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((source, target), coefficient)| DifferentialEntry { source, target, coefficient })
            .collect();

        let complex = FilteredComplex { generators, differential, differential_incomplete, index };
        complex.check_square_zero()?;
        Ok(complex)
    }

    pub fn empty() -> Self {
        FilteredComplex::new(Vec::new(), Vec::new(), false).expect("empty complex is valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential(&self) -> &[DifferentialEntry] {
        &self.differential
    }

    pub fn differential_incomplete(&self) -> bool {
        self.differential_incomplete
    }

    pub fn generator(&self, id: &str) -> Option<&Generator> {
        self.index.get(id).map(|&i| &self.generators[i])
    }

    /// Generators of one degree, in complex order.
    pub fn generators_in_degree(&self, degree: u8) -> Vec<&Generator> {
        self.generators.iter().filter(|g| g.grading == degree % 8).collect()
    }

    fn check_square_zero(&self) -> Result<(), ComplexError> {
        let mut out: HashMap<&str, Vec<(&str, i64)>> = HashMap::new();
        for e in &self.differential {
            out.entry(&e.source).or_default().push((&e.target, e.coefficient));
        }
        for g in &self.generators {
            let mut acc: BTreeMap<&str, i64> = BTreeMap::new();
            for &(mid, c1) in out.get(g.id.as_str()).into_iter().flatten() {
                for &(t, c2) in out.get(mid).into_iter().flatten() {
                    *acc.entry(t).or_insert(0) += c1 * c2;
                }
            }
            if let Some((t, &v)) = acc.iter().find(|(_, &v)| v != 0) {
                return Err(ComplexError::NotAComplex {
                    source_id: g.id.clone(),
                    target: t.to_string(),
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Matrix of `∂ : C_degree → C_{degree−1}`; rows follow
    /// `generators_in_degree(degree − 1)`, columns `generators_in_degree(degree)`.
    pub fn boundary_matrix(&self, degree: u8) -> IntMatrix {
        let src = self.generators_in_degree(degree);
        let tgt = self.generators_in_degree(degree_below(degree));
        let col: HashMap<&str, usize> = src.iter().enumerate().map(|(j, g)| (g.id.as_str(), j)).collect();
        let row: HashMap<&str, usize> = tgt.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        for e in &self.differential {
            if let (Some(&i), Some(&j)) = (row.get(e.target.as_str()), col.get(e.source.as_str())) {
                m[(i, j)] += e.coefficient;
            }
        }
        m
    }

    /// Matrix of `δ : C^{degree} → C^{degree+1}`, i.e. the transpose of
    /// `∂ : C_{degree+1} → C_{degree}`.
    pub fn coboundary_matrix(&self, degree: u8) -> IntMatrix {
        self.boundary_matrix((degree + 1) % 8).transpose()
    }
}

/// Integer-valued cochain supported in a single degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoChain {
    pub degree: u8,
    pub coefficients: BTreeMap<String, i64>,
}

impl CoChain {
    pub fn new(degree: u8, coefficients: impl IntoIterator<Item = (String, i64)>) -> Self {
        CoChain {
            degree: degree % 8,
            coefficients: coefficients.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn zero(degree: u8) -> Self {
        CoChain::new(degree, [])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|&c| c == 0)
    }

    pub fn get(&self, id: &str) -> i64 {
        self.coefficients.get(id).copied().unwrap_or(0)
    }

    /// Drops every coefficient whose generator is not in `c`.
    pub fn restrict_to(&self, c: &FilteredComplex) -> CoChain {
        CoChain::new(
            self.degree,
            self.coefficients
                .iter()
                .filter(|(id, _)| c.generator(id).is_some())
                .map(|(id, &v)| (id.clone(), v)),
        )
    }
}

fn ensure_admissible(c: &FilteredComplex, r: Level) -> Result<(), ComplexError> {
    if let Level::Finite(q) = r {
        if c.generators.iter().any(|g| g.cs_level == q) {
            return Err(ComplexError::ForbiddenLevel(r));
        }
    }
    Ok(())
}

/// The subcomplex spanned by generators of level `< r`. `r = ∞` returns
/// the complex unchanged; `r` equal to a critical value is rejected.
pub fn restrict(c: &FilteredComplex, r: Level) -> Result<FilteredComplex, ComplexError> {
    ensure_admissible(c, r)?;
    if r.is_infinite() {
        return Ok(c.clone());
    }
    let kept: Vec<Generator> = c.generators.iter().filter(|g| r.exceeds(&g.cs_level)).cloned().collect();
    let ids: BTreeSet<&str> = kept.iter().map(|g| g.id.as_str()).collect();
    let entries: Vec<DifferentialEntry> = c
        .differential
        .iter()
        .filter(|e| ids.contains(e.source.as_str()) && ids.contains(e.target.as_str()))
        .cloned()
        .collect();
    FilteredComplex::new(kept, entries, c.differential_incomplete)
}

/// `HF^degree_r` as rank plus torsion coefficients.
pub fn cohomology(c: &FilteredComplex, degree: u8, r: Level) -> Result<AbelianGroup, ComplexError> {
    if c.differential_incomplete {
        return Err(ComplexError::DifferentialIncomplete);
    }
    let sub = restrict(c, r)?;
    let degree = degree % 8;
    let n = sub.generators_in_degree(degree).len();
    let outgoing = smith_normal_form(&sub.coboundary_matrix(degree));
    let incoming = smith_normal_form(&sub.coboundary_matrix(degree_below(degree)));
    let incoming_factors = incoming.invariant_factors();
    Ok(AbelianGroup {
        rank: n - outgoing.rank() - incoming_factors.len(),
        torsion: incoming_factors.into_iter().filter(|&d| d > 1).collect(),
    })
}

/// Outcome of the coboundary test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryDecision {
    /// `δn = −t`.
    Coboundary { witness: CoChain },
    /// A rational functional on the degree-`t` generators (listed in complex
    /// order) that is integral on the image of `δ` but not on `t`.
    NotCoboundary { dual_witness: Vec<(String, Rational)> },
}

impl CoboundaryDecision {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryDecision::Coboundary { .. })
    }
}

/// Decides whether `δʳ n = −t` has an integer solution on the restriction of
/// `c` below `r`.
pub fn is_coboundary(t: &CoChain, c: &FilteredComplex, r: Level) -> Result<CoboundaryDecision, ComplexError> {
    if c.differential_incomplete {
        return Err(ComplexError::DifferentialIncomplete);
    }
    let full_ids: BTreeSet<&str> = c.generators.iter().map(|g| g.id.as_str()).collect();
    for id in t.coefficients.keys() {
        if !full_ids.contains(id.as_str()) {
            return Err(ComplexError::UnknownGenerator(id.clone()));
        }
    }
    let sub = restrict(c, r)?;
    for (id, &v) in &t.coefficients {
        if v == 0 {
            continue;
        }
        match sub.generator(id) {
            None => return Err(ComplexError::OutsideWindow(id.clone())),
            Some(g) if g.grading != t.degree => {
                return Err(ComplexError::DegreeMismatch {
                    id: id.clone(),
                    expected: t.degree,
                    found: g.grading,
                })
            }
            Some(_) => {}
        }
    }

    let target_gens = sub.generators_in_degree(t.degree);
    let source_degree = degree_below(t.degree);
    let source_gens = sub.generators_in_degree(source_degree);
    let m = sub.coboundary_matrix(source_degree);
    let rhs: Vec<i64> = target_gens.iter().map(|g| -t.get(&g.id)).collect();
    Ok(match solve_integer(&m, &rhs) {
        IntegerSolve::Solution(x) => CoboundaryDecision::Coboundary {
            witness: CoChain::new(
                source_degree,
                source_gens.iter().zip(x).map(|(g, v)| (g.id.clone(), v)),
            ),
        },
        IntegerSolve::Obstruction(w) => CoboundaryDecision::NotCoboundary {
            dual_witness: target_gens.iter().zip(w).map(|(g, v)| (g.id.clone(), v)).collect(),
        },
    })
}

/// Applies `δ` to a cochain (on the full complex).
pub fn coboundary(n: &CoChain, c: &FilteredComplex) -> CoChain {
    let mut out: BTreeMap<String, i64> = BTreeMap::new();
    for e in &c.differential {
        let target_degree = c.generator(&e.target).map(|g| g.grading);
        if target_degree == Some(n.degree) {
            *out.entry(e.source.clone()).or_insert(0) += e.coefficient * n.get(&e.target);
        }
    }
    CoChain::new((n.degree + 1) % 8, out)
}

/// Sorted distinct critical levels, i.e. the complement of `Λ_Y` in `[0, 1]`.
pub fn admissible_levels(c: &FilteredComplex) -> Vec<Rational> {
    let set: BTreeSet<Rational> = c.generators.iter().map(|g| g.cs_level).collect();
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn sigma_235() -> FilteredComplex {
        FilteredComplex::new(
            vec![
                Generator::new("a", 5, q(71, 120)),
                Generator::new("b", 1, q(119, 120)),
            ],
            vec![],
            false,
        )
        .unwrap()
    }

    /// degree 1 generator `x` at level 1/2 with ∂x = 2y, y in degree 0 at 1/4.
    fn times_two() -> FilteredComplex {
        FilteredComplex::new(
            vec![Generator::new("y", 0, q(1, 4)), Generator::new("x", 1, q(1, 2))],
            vec![DifferentialEntry { source: "x".into(), target: "y".into(), coefficient: 2 }],
            false,
        )
        .unwrap()
    }

    #[test]
    fn restrict_at_infinity_is_identity() {
        let c = times_two();
        assert_eq!(restrict(&c, Level::Infinity).unwrap(), c);
    }

    #[test]
    fn restrict_sigma_235() {
        let c = sigma_235();
        assert_eq!(restrict(&c, Level::one()).unwrap().generators().len(), 2);
        assert_eq!(restrict(&c, q(1, 2).into()).unwrap().generators().len(), 0);
        assert_eq!(
            restrict(&c, q(71, 120).into()),
            Err(ComplexError::ForbiddenLevel(q(71, 120).into()))
        );
    }

    #[test]
    fn cohomology_sigma_235() {
        let c = sigma_235();
        assert_eq!(cohomology(&c, 1, Level::one()).unwrap(), AbelianGroup::free(1));
        assert!(cohomology(&c, 0, Level::one()).unwrap().is_trivial());
        assert!(cohomology(&FilteredComplex::empty(), 3, Level::one()).unwrap().is_trivial());
    }

    #[test]
    fn cohomology_with_torsion() {
        let c = times_two();
        // δ: C^0 → C^1 is ×2, so H^1 = ℤ/2 and H^0 = 0
        assert_eq!(cohomology(&c, 1, Level::one()).unwrap(), AbelianGroup { rank: 0, torsion: vec![2] });
        assert!(cohomology(&c, 0, Level::one()).unwrap().is_trivial());
        // below 1/2 only y survives
        assert_eq!(cohomology(&c, 0, q(1, 3).into()).unwrap(), AbelianGroup::free(1));
    }

    #[test]
    fn incomplete_differential_is_reported() {
        let c = FilteredComplex::new(vec![Generator::new("a", 1, q(1, 2))], vec![], true).unwrap();
        assert_eq!(cohomology(&c, 1, Level::one()), Err(ComplexError::DifferentialIncomplete));
        assert_eq!(
            is_coboundary(&CoChain::zero(1), &c, Level::one()),
            Err(ComplexError::DifferentialIncomplete)
        );
    }

    #[test]
    fn zero_cochain_is_a_coboundary() {
        let d = is_coboundary(&CoChain::zero(1), &sigma_235(), Level::one()).unwrap();
        assert_eq!(d, CoboundaryDecision::Coboundary { witness: CoChain::zero(0) });
    }

    #[test]
    fn theta_on_sigma_235_is_not_a_coboundary() {
        let t = CoChain::new(1, [("b".to_string(), 1)]);
        let d = is_coboundary(&t, &sigma_235(), Level::one()).unwrap();
        assert!(!d.is_coboundary());
    }

    #[test]
    fn times_two_solve() {
        let c = times_two();
        let t = CoChain::new(1, [("x".to_string(), 2)]);
        match is_coboundary(&t, &c, Level::one()).unwrap() {
            CoboundaryDecision::Coboundary { witness } => {
                assert_eq!(witness.get("y").abs(), 1);
                let mut sum = coboundary(&witness, &c);
                *sum.coefficients.entry("x".into()).or_insert(0) += 2;
                assert!(sum.is_zero());
            }
            other => panic!("{:?}", other),
        }
        let odd = CoChain::new(1, [("x".to_string(), 1)]);
        assert!(!is_coboundary(&odd, &c, Level::one()).unwrap().is_coboundary());
    }

    #[test]
    fn cochain_errors() {
        let c = times_two();
        let wrong = CoChain::new(1, [("y".to_string(), 1)]);
        assert!(matches!(is_coboundary(&wrong, &c, Level::one()), Err(ComplexError::DegreeMismatch { .. })));
        let outside = CoChain::new(1, [("x".to_string(), 1)]);
        assert_eq!(
            is_coboundary(&outside, &c, q(1, 3).into()),
            Err(ComplexError::OutsideWindow("x".into()))
        );
        let unknown = CoChain::new(1, [("zz".to_string(), 1)]);
        assert!(matches!(is_coboundary(&unknown, &c, Level::one()), Err(ComplexError::UnknownGenerator(_))));
    }

    #[test]
    fn construction_rejects_bad_input() {
        let g = |id: &str, d, l| Generator::new(id, d, l);
        assert!(matches!(
            FilteredComplex::new(vec![g("a", 1, q(1, 2)), g("a", 3, q(1, 3))], vec![], false),
            Err(ComplexError::DuplicateId(_))
        ));
        assert!(matches!(
            FilteredComplex::new(vec![g("a", 1, q(1, 1))], vec![], false),
            Err(ComplexError::LevelOutOfRange(_))
        ));
        // wrong degree
        let bad = FilteredComplex::new(
            vec![g("a", 2, q(1, 2)), g("b", 0, q(1, 4))],
            vec![DifferentialEntry { source: "a".into(), target: "b".into(), coefficient: 1 }],
            false,
        );
        assert!(matches!(bad, Err(ComplexError::InvalidEntry { .. })));
        // filtration goes up
        let bad = FilteredComplex::new(
            vec![g("a", 1, q(1, 4)), g("b", 0, q(1, 2))],
            vec![DifferentialEntry { source: "a".into(), target: "b".into(), coefficient: 1 }],
            false,
        );
        assert!(matches!(bad, Err(ComplexError::InvalidEntry { .. })));
    }

    #[test]
    fn square_zero_is_enforced() {
        let g = |id: &str, d, l| Generator::new(id, d, l);
        let e = |s: &str, t: &str, c| DifferentialEntry { source: s.into(), target: t.into(), coefficient: c };
        let bad = FilteredComplex::new(
            vec![g("z", 0, q(1, 8)), g("y", 1, q(1, 4)), g("x", 2, q(1, 2))],
            vec![e("x", "y", 1), e("y", "z", 1)],
            false,
        );
        assert!(matches!(bad, Err(ComplexError::NotAComplex { .. })));
        let good = FilteredComplex::new(
            vec![g("z", 0, q(1, 8)), g("y", 1, q(1, 4)), g("w", 1, q(3, 8)), g("x", 2, q(1, 2))],
            vec![e("x", "y", 1), e("x", "w", 1), e("y", "z", 1), e("w", "z", -1)],
            false,
        );
        assert!(good.is_ok());
    }

    #[test]
    fn levels_are_sorted_and_deduplicated() {
        assert_eq!(admissible_levels(&sigma_235()), vec![q(71, 120), q(119, 120)]);
        assert!(admissible_levels(&FilteredComplex::empty()).is_empty());
        let c = FilteredComplex::new(
            vec![Generator::new("a", 1, q(1, 2)), Generator::new("b", 3, q(1, 2))],
            vec![],
            false,
        )
        .unwrap();
        assert_eq!(admissible_levels(&c), vec![q(1, 2)]);
    }

    #[test]
    fn json_round_trip() {
        let c = times_two();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"cs\":\"1/4\""));
        let back: FilteredComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
