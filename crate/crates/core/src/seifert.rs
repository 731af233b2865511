//! Seifert-fibered homology spheres Σ(a₁,…,aₙ) and their irreducible SU(2)
//! flat connections.
//!
//! With the presentation
//!
//! ```text
//! π₁Σ = ⟨x₁,…,xₙ,h | h central, xᵢ^{aᵢ} h^{bᵢ} = 1, x₁⋯xₙ = 1⟩,   Σᵢ bᵢ·a/aᵢ = 1,
//! ```
//!
//! an irreducible representation sends `h ↦ ε = ±1` and `xᵢ` to an element of
//! rotation angle `πℓᵢ/aᵢ` with `0 < ℓᵢ < aᵢ`. The relations force
//! `(−1)^{ℓᵢ} = ε^{bᵢ}`, and `x₁x₂ = x₃⁻¹` has a solution with the first two
//! elements non-commuting exactly when the strict spherical triangle
//! inequality holds for the three angles.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{FilteredComplex, Generator};
use crate::error::SeifertError;
use crate::grading::RInvariant;
use crate::level::{frac_part, serde_fraction, Rational};

/// Pairwise-coprime multiplicities of a Seifert-fibered homology sphere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertData {
    multiplicities: Vec<i64>,
    product: i64,
}

impl SeifertData {
    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    /// `a = a₁⋯aₙ`.
    pub fn product(&self) -> i64 {
        self.product
    }

    pub fn fiber_count(&self) -> usize {
        self.multiplicities.len()
    }

    /// Integers `bᵢ` with `Σ bᵢ·(a/aᵢ) = 1`, normalised so that
    /// `0 ≤ bᵢ < aᵢ` for every fiber but the last.
    pub fn seifert_invariants(&self) -> Vec<i64> {
        let a = self.product as i128;
        let cof: Vec<i128> = self.multiplicities.iter().map(|&ai| a / ai as i128).collect();
        let mut coeffs = vec![0i128; cof.len()];
        coeffs[0] = 1;
        let mut g = cof[0];
        for i in 1..cof.len() {
            let ext = g.extended_gcd(&cof[i]);
            for c in coeffs.iter_mut().take(i) {
                *c *= ext.x;
            }
            coeffs[i] = ext.y;
            g = ext.gcd;
        }
        debug_assert_eq!(g, 1);
        let last = cof.len() - 1;
        let an = self.multiplicities[last] as i128;
        for i in 0..last {
            let ai = self.multiplicities[i] as i128;
            let q = Integer::div_floor(&coeffs[i], &ai);
            coeffs[i] -= q * ai;
            coeffs[last] += q * an;
        }
        debug_assert_eq!(coeffs.iter().zip(&cof).map(|(b, c)| b * c).sum::<i128>(), 1);
        coeffs.into_iter().map(|b| b as i64).collect()
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(i64::to_string).collect();
        write!(f, "Σ({})", parts.join(","))
    }
}

impl Serialize for SeifertData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.multiplicities.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeifertData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = Vec::<i64>::deserialize(d)?;
        validate_seifert(&m).map_err(serde::de::Error::custom)
    }
}

/// Checks the homology-sphere condition and caches the product.
pub fn validate_seifert(multiplicities: &[i64]) -> Result<SeifertData, SeifertError> {
    if multiplicities.len() < 3 {
        return Err(SeifertError::TooFewFibers);
    }
    for (index, &value) in multiplicities.iter().enumerate() {
        if value < 2 {
            return Err(SeifertError::MultiplicityTooSmall { index, value });
        }
    }
    for i in 0..multiplicities.len() {
        for j in i + 1..multiplicities.len() {
            if multiplicities[i].gcd(&multiplicities[j]) > 1 {
                return Err(SeifertError::NotCoprime(i, j));
            }
        }
    }
    let product = multiplicities
        .iter()
        .try_fold(1i64, |acc, &x| acc.checked_mul(x))
        .filter(|&a| a <= i64::MAX / 8)
        .ok_or(SeifertError::Overflow)?;
    Ok(SeifertData { multiplicities: multiplicities.to_vec(), product })
}

/// One irreducible flat connection class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlatConnection {
    /// `ℓᵢ` with `0 < ℓᵢ < aᵢ`: holonomy of `xᵢ` has angle `πℓᵢ/aᵢ`.
    pub rotation_numbers: Vec<i64>,
    /// Holonomy `ε = ±1` of the regular fiber.
    pub fiber_holonomy: i8,
    /// Representative in `[0, a]` of the label `e`, defined mod `2a` up to sign.
    pub e_label: i64,
    /// `−e²/(4a) mod 1`, in `[0, 1)`.
    #[serde(with = "serde_fraction")]
    pub cs_value: Rational,
    /// Floer grading mod 8.
    pub grading: u8,
    pub irreducible: bool,
}

impl FlatConnection {
    /// Generator id used in filtered complexes, e.g. `rho(1,2,4)`.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self.rotation_numbers.iter().map(i64::to_string).collect();
        format!("rho({})", parts.join(","))
    }
}

fn cs_of_label(a: i64, e: i64) -> Rational {
    let four_a = 4 * a as i128;
    let num = (-(e as i128) * (e as i128)).rem_euclid(four_a);
    Rational::new(num as i64, four_a as i64)
}

/// All labels `Σ ±ℓᵢ·a/aᵢ mod 2a` over the sign choices `ℓᵢ ↦ −ℓᵢ`, which
/// leave the conjugacy class of each holonomy unchanged.
fn label_candidates(y: &SeifertData, rotation: &[i64]) -> Vec<i64> {
    let a = y.product;
    let terms: Vec<i64> = rotation
        .iter()
        .zip(&y.multiplicities)
        .map(|(&l, &ai)| l * (a / ai))
        .collect();
    (0u32..1 << terms.len())
        .map(|mask| {
            terms
                .iter()
                .enumerate()
                .map(|(i, &t)| if mask >> i & 1 == 1 { -t } else { t })
                .sum::<i64>()
                .rem_euclid(2 * a)
        })
        .collect()
}

/// Canonical label and its Chern-Simons value; fails if the sign choices
/// disagree on the value.
fn label_and_cs(y: &SeifertData, rotation: &[i64]) -> Result<(i64, Rational), SeifertError> {
    let in_range = rotation.len() == y.fiber_count()
        && rotation
            .iter()
            .zip(&y.multiplicities)
            .all(|(&l, &ai)| 0 < l && l < ai);
    if !in_range {
        return Err(SeifertError::NoCongruenceSolution(rotation.to_vec()));
    }
    let a = y.product;
    let candidates = label_candidates(y, rotation);
    let cs = cs_of_label(a, candidates[0]);
    if candidates.iter().any(|&e| cs_of_label(a, e) != cs) {
        return Err(SeifertError::InconsistentLabel(rotation.to_vec()));
    }
    let e = candidates
        .iter()
        .map(|&e| e.min(2 * a - e))
        .min()
        .expect("at least one sign choice");
    Ok((e, cs))
}

/// Strict spherical triangle condition for the angles `π·Tᵢ/a`, where
/// `Tᵢ = ℓᵢ·a/aᵢ`.
fn triangle_admissible(a: i64, t: [i64; 3]) -> bool {
    let [t1, t2, t3] = t;
    (t1 - t2).abs() < t3 && t3 < (t1 + t2).min(2 * a - t1 - t2)
}

/// Rotation-number tuples of all irreducible flat connections, each paired
/// with its fiber holonomy.
pub fn admissible_rotation_numbers(y: &SeifertData) -> Result<Vec<(Vec<i64>, i8)>, SeifertError> {
    if y.fiber_count() != 3 {
        return Err(SeifertError::Unsupported(y.fiber_count()));
    }
    let a = y.product;
    let m = &y.multiplicities;
    let b = y.seifert_invariants();
    let mut out = Vec::new();
    for eps in [1i8, -1] {
        // required parity of ℓᵢ: even when ε^{bᵢ} = 1, odd otherwise
        let parity: Vec<i64> = b
            .iter()
            .map(|&bi| if eps == -1 && bi.is_odd() { 1 } else { 0 })
            .collect();
        let range = |i: usize| {
            let want = parity[i];
            (1..m[i]).filter(move |l| l.rem_euclid(2) == want)
        };
        for l1 in range(0) {
            for l2 in range(1) {
                for l3 in range(2) {
                    let t = [l1 * (a / m[0]), l2 * (a / m[1]), l3 * (a / m[2])];
                    if triangle_admissible(a, t) {
                        out.push((vec![l1, l2, l3], eps));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The complete list of irreducible flat connections on `y`, sorted by
/// `(cs_value, grading, rotation_numbers)`.
pub fn enumerate_flat_connections(y: &SeifertData) -> Result<Vec<FlatConnection>, SeifertError> {
    let tuples = admissible_rotation_numbers(y)?;
    let r = RInvariant::new(y);
    let mut out = tuples
        .into_iter()
        .map(|(rotation, eps)| {
            let (e, cs) = label_and_cs(y, &rotation)?;
            let grading = r.grading(e)?;
            Ok(FlatConnection {
                rotation_numbers: rotation,
                fiber_holonomy: eps,
                e_label: e,
                cs_value: cs,
                grading,
                irreducible: true,
            })
        })
        .collect::<Result<Vec<_>, SeifertError>>()?;
    out.sort_by(|x, y| {
        (x.cs_value, x.grading, &x.rotation_numbers).cmp(&(y.cs_value, y.grading, &y.rotation_numbers))
    });
    Ok(out)
}

/// Chern-Simons value mod 1 of `c`, recomputed from its rotation numbers.
pub fn cs_invariant(y: &SeifertData, c: &FlatConnection) -> Result<Rational, SeifertError> {
    label_and_cs(y, &c.rotation_numbers).map(|(_, cs)| cs)
}

/// Chern-Simons value of the trivial connection θ.
pub fn trivial_cs() -> Rational {
    Rational::zero()
}

/// Floer grading mod 8 of `c`, recomputed from its rotation numbers.
pub fn floer_grading(y: &SeifertData, c: &FlatConnection) -> Result<u8, SeifertError> {
    let (e, _) = label_and_cs(y, &c.rotation_numbers)?;
    RInvariant::new(y).grading(e)
}

/// Packages the flat connections of `y` as a filtered complex. The
/// differential is zero when all gradings share one parity; otherwise it is
/// left empty and the complex is flagged incomplete.
pub fn build_filtered_generators(y: &SeifertData) -> Result<FilteredComplex, SeifertError> {
    let connections = enumerate_flat_connections(y)?;
    Ok(complex_from_connections(&connections))
}

pub(crate) fn complex_from_connections(connections: &[FlatConnection]) -> FilteredComplex {
    let generators: Vec<Generator> = connections
        .iter()
        .map(|c| Generator::new(c.id(), c.grading, frac_part(&c.cs_value)))
        .collect();
    let single_parity = generators.iter().all(|g| g.grading % 2 == 0)
        || generators.iter().all(|g| g.grading % 2 == 1);
    FilteredComplex::new(generators, Vec::new(), !single_parity)
        .expect("generators of an enumeration are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn cs_set(y: &[i64]) -> BTreeSet<Rational> {
        let y = validate_seifert(y).unwrap();
        enumerate_flat_connections(&y).unwrap().iter().map(|c| c.cs_value).collect()
    }

    #[test]
    fn validation() {
        assert_eq!(validate_seifert(&[2, 3, 5]).unwrap().product(), 30);
        assert_eq!(validate_seifert(&[2, 4, 5]), Err(SeifertError::NotCoprime(0, 1)));
        assert_eq!(validate_seifert(&[2, 3, 71]).unwrap().product(), 426);
        assert_eq!(validate_seifert(&[2, 3]), Err(SeifertError::TooFewFibers));
        assert!(matches!(
            validate_seifert(&[1, 3, 5]),
            Err(SeifertError::MultiplicityTooSmall { index: 0, value: 1 })
        ));
    }

    #[test]
    fn seifert_invariants_solve_the_normalisation() {
        for m in [[2, 3, 5], [2, 3, 71], [3, 5, 7], [4, 9, 11], [7, 11, 13]] {
            let y = validate_seifert(&m).unwrap();
            let b = y.seifert_invariants();
            let s: i64 = b.iter().zip(&m).map(|(bi, ai)| bi * (y.product() / ai)).sum();
            assert_eq!(s, 1, "{:?} -> {:?}", m, b);
        }
    }

    #[test]
    fn counts_of_small_brieskorn_spheres() {
        for (m, n) in [([2, 3, 5], 2), ([2, 3, 7], 2), ([2, 3, 11], 4)] {
            let y = validate_seifert(&m).unwrap();
            assert_eq!(enumerate_flat_connections(&y).unwrap().len(), n, "{:?}", m);
        }
    }

    #[test]
    fn cs_values_of_small_brieskorn_spheres() {
        let r = |n, d| Rational::new(n, d);
        assert_eq!(cs_set(&[2, 3, 5]), [r(71, 120), r(119, 120)].into());
        assert_eq!(cs_set(&[2, 3, 7]), [r(47, 168), r(143, 168)].into());
    }

    #[test]
    fn sigma_235_gradings_and_labels() {
        let y = validate_seifert(&[2, 3, 5]).unwrap();
        let cs = enumerate_flat_connections(&y).unwrap();
        let pairs: Vec<(i64, u8)> = cs.iter().map(|c| (c.e_label, c.grading)).collect();
        assert_eq!(pairs, vec![(7, 5), (1, 1)]);
        for c in &cs {
            assert_eq!(cs_invariant(&y, c).unwrap(), c.cs_value);
            assert_eq!(floer_grading(&y, c).unwrap(), c.grading);
            assert!(c.irreducible);
        }
    }

    #[test]
    fn invariants_of_enumeration() {
        for m in [[2, 3, 13], [3, 5, 7], [2, 5, 9], [4, 5, 7], [3, 8, 11]] {
            let y = validate_seifert(&m).unwrap();
            let a = y.product();
            let cs = enumerate_flat_connections(&y).unwrap();
            let tuples: BTreeSet<&Vec<i64>> = cs.iter().map(|c| &c.rotation_numbers).collect();
            assert_eq!(tuples.len(), cs.len());
            for c in &cs {
                assert!(c.cs_value >= Rational::zero() && c.cs_value < Rational::from(1));
                assert_eq!((4 * a) % c.cs_value.denom(), 0);
                assert!(c.grading < 8);
                let flipped: Vec<i64> =
                    c.rotation_numbers.iter().zip(&m).map(|(l, ai)| ai - l).collect();
                if flipped != c.rotation_numbers {
                    assert!(!tuples.contains(&flipped), "{:?} and its flip both listed", flipped);
                }
            }
        }
    }

    #[test]
    fn cs_rejects_bad_rotation_numbers() {
        let y = validate_seifert(&[2, 3, 5]).unwrap();
        let mut c = enumerate_flat_connections(&y).unwrap()[0].clone();
        c.rotation_numbers = vec![2, 1, 1];
        assert!(matches!(cs_invariant(&y, &c), Err(SeifertError::NoCongruenceSolution(_))));
    }

    #[test]
    fn trivial_connection_has_zero_cs() {
        assert_eq!(trivial_cs(), Rational::zero());
    }

    #[test]
    fn more_fibers_unsupported() {
        let y = validate_seifert(&[2, 3, 5, 7]).unwrap();
        assert_eq!(enumerate_flat_connections(&y), Err(SeifertError::Unsupported(4)));
    }

    #[test]
    fn filtered_generators_of_sigma_235() {
        let y = validate_seifert(&[2, 3, 5]).unwrap();
        let c = build_filtered_generators(&y).unwrap();
        let degrees: BTreeSet<u8> = c.generators().iter().map(|g| g.grading).collect();
        assert_eq!(degrees, [1, 5].into());
        assert!(c.differential().is_empty());
        assert!(!c.differential_incomplete());
    }

    #[test]
    fn filtered_generators_of_sigma_2_3_71() {
        let y = validate_seifert(&[2, 3, 71]).unwrap();
        let c = build_filtered_generators(&y).unwrap();
        assert_eq!(c.generators().len(), 24);
        assert!(c.generators().iter().all(|g| g.grading % 2 == 1));
        assert!(!c.differential_incomplete());
    }

    #[test]
    fn empty_connection_list_gives_empty_complex() {
        let c = complex_from_connections(&[]);
        assert!(c.generators().is_empty());
        assert!(!c.differential_incomplete());
    }
}
