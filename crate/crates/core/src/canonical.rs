//! The operator `phi_w`, canonical parabolic types `I_w`, Bruhat-stratum
//! detection, flag zip data and the (deliberately partial) stratum
//! projection map.

use crate::error::Error;
use crate::rootdata::RootDatum;
use crate::weyl::{self, WeylElement, longest_element, longest_element_parabolic};
use crate::zipdatum::CocharacterDatum;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet};

/// The canonical parabolic type of a stratum, with nilpotency witnesses for
/// the simple roots that die under iteration of `phi_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalType {
    pub w: WeylElement,
    pub i_w: BTreeSet<usize>,
    /// For each `alpha` in `I \ I_w`, the least `m` with
    /// `phi_{w,I}^m(alpha) = 0`.
    pub nilpotent_witness: BTreeMap<usize, usize>,
}

impl CanonicalType {
    pub fn to_json(&self, datum: &RootDatum) -> serde_json::Value {
        serde_json::json!({
            "w": weyl::to_notation(datum, &self.w),
            "I_w": self.i_w.iter().map(|&i| i + 1).collect::<Vec<_>>(),
            "nilpotent": self.nilpotent_witness.iter().map(|(&a, &m)| {
                serde_json::json!({"alpha": a + 1, "m": m})
            }).collect::<Vec<_>>(),
        })
    }
}

/// A flag zip datum: the twisting type `I_0` and its opposite-side type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagZipDatum {
    pub i0_set: BTreeSet<usize>,
    pub j0_set: BTreeSet<usize>,
}

/// Result of projecting a flag stratum to the base stratification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Known(WeylElement),
    /// The projection is not determined combinatorially here; only the
    /// bound `l(pi(w)) <= l(w)` is retained.
    Unknown { length_bound: usize },
}

/// `phi_w(alpha) = (w z^{-1}) sigma(alpha)`, truncated to `I`: the result
/// when it is a simple root of `I`, `None` (the zero symbol) otherwise.
pub fn phi_w(cd: &CocharacterDatum, w: &WeylElement, alpha: Option<usize>) -> Result<Option<usize>> {
    let Some(a) = alpha else {
        return Ok(None);
    };
    if !cd.i_set.contains(&a) {
        return Err(Error::NotInI);
    }
    let zinv = cd.frame().z.inverse();
    let img = w.apply(zinv.apply(cd.sigma.perm[a]));
    if img < cd.datum.rank() && cd.i_set.contains(&img) {
        Ok(Some(img))
    } else {
        Ok(None)
    }
}

/// `I_w` as the stable set of `phi_{w,I}`, iterated from `I`.
pub fn canonical_type(cd: &CocharacterDatum, w: &WeylElement) -> Result<CanonicalType> {
    if !w.is_min_rep(&cd.datum, &cd.i_set) {
        return Err(Error::NotMinimalRep);
    }
    let bound = cd.i_set.len() + 1;
    let mut stable: BTreeSet<usize> = cd.i_set.clone();
    for _ in 0..bound {
        let next: BTreeSet<usize> = stable
            .iter()
            .filter_map(|&a| phi_w(cd, w, Some(a)).expect("alpha in I"))
            .collect();
        if next == stable {
            break;
        }
        stable = next;
    }
    let mut nilpotent_witness = BTreeMap::new();
    for &a in cd.i_set.difference(&stable.clone()) {
        let mut cur = Some(a);
        let mut m = 0usize;
        while let Some(c) = cur {
            cur = phi_w(cd, w, Some(c)).expect("trajectory stays in I");
            m += 1;
            assert!(
                m <= 2 * bound,
                "alpha_{} outside I_w must be nilpotent",
                c + 1
            );
        }
        nilpotent_witness.insert(a, m);
    }
    Ok(CanonicalType { w: w.clone(), i_w: stable, nilpotent_witness })
}

/// Sign-normalized image `{positive part of w(alpha_j) : j in S}`, provided
/// every image is (plus or minus) a simple root.
fn normalized_simple_image(
    datum: &RootDatum,
    w: &WeylElement,
    s: &BTreeSet<usize>,
) -> Option<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for &j in s {
        let img = datum.positive_of(w.apply(j));
        if img >= datum.rank() {
            return None;
        }
        out.insert(img);
    }
    Some(out)
}

/// The stratum of `w` is a full Bruhat stratum iff `w(J) = I` up to signs;
/// cross-checked against the equivalent criterion `I_w = I`.
pub fn is_bruhat_stratum(cd: &CocharacterDatum, w: &WeylElement) -> Result<bool> {
    if !w.is_min_rep(&cd.datum, &cd.i_set) {
        return Err(Error::NotMinimalRep);
    }
    let wj = normalized_simple_image(&cd.datum, w, &cd.frame().j_set);
    let by_image = wj.as_ref() == Some(&cd.i_set);
    debug_assert_eq!(by_image, canonical_type(cd, w)?.i_w == cd.i_set);
    Ok(by_image)
}

/// Closed form for `I_w` at the open stratum `w = w_{0,I} w_0`:
/// `w_{0,I}(I_0)` up to signs, where `I_0` is the largest sigma-stable
/// subset of `I`.
pub fn longest_element_canonical_type(cd: &CocharacterDatum) -> BTreeSet<usize> {
    let i0 = sigma_stable_core(cd);
    let w0i = longest_element_parabolic(&cd.datum, &cd.i_set).expect("I is valid");
    normalized_simple_image(&cd.datum, &w0i, &i0)
        .expect("w_{0,I} permutes the simple roots of I up to sign")
}

/// `I_0 = intersection of sigma^n(I)` over all `n`.
pub fn sigma_stable_core(cd: &CocharacterDatum) -> BTreeSet<usize> {
    let ord = cd.sigma.order();
    let mut out = cd.i_set.clone();
    let mut img = cd.i_set.clone();
    for _ in 1..ord {
        img = cd.sigma.apply_set(&img);
        out = out.intersection(&img).copied().collect();
    }
    out
}

/// The flag zip datum for a twisting type `I_0 <= I`:
/// `J_0 = w_0 sigma(w_{0,I}(I_0))`.
pub fn flag_datum(cd: &CocharacterDatum, i0: &BTreeSet<usize>) -> Result<FlagZipDatum> {
    if !i0.is_subset(&cd.i_set) {
        return Err(Error::NotSubsetOfI);
    }
    let w0 = longest_element(&cd.datum);
    let w0i = longest_element_parabolic(&cd.datum, &cd.i_set).expect("I is valid");
    let sp = cd.datum.sigma_root_perm(&cd.sigma);
    let mut j0_set = BTreeSet::new();
    for &i in i0 {
        let r = w0.apply(sp[w0i.apply(i)] as usize);
        if r >= cd.datum.rank() {
            return Err(Error::FrameAxiomViolation(format!(
                "w_0 sigma(w_{{0,I}} alpha_{}) is not a simple root",
                i + 1
            )));
        }
        j0_set.insert(r);
    }
    Ok(FlagZipDatum { i0_set: i0.clone(), j0_set })
}

/// Projects a flag stratum to the base stratification where a combinatorial
/// answer is available: the identity case `w` already `I`-minimal, and the
/// tabulated odd-orthogonal elements `w = w_i^{(r)}` with image `x_{2n-i}`.
/// Everything else is `Unknown`, carrying only the length bound.
pub fn project_stratum(
    cd: &CocharacterDatum,
    i0: &BTreeSet<usize>,
    w: &WeylElement,
) -> Result<Projection> {
    if !w.is_min_rep(&cd.datum, i0) {
        return Err(Error::NotMinimalRep);
    }
    if w.is_min_rep(&cd.datum, &cd.i_set) {
        return Ok(Projection::Known(w.clone()));
    }
    if let Some(n) = crate::oddorth::bn_split_rank(cd) {
        // I_0 must be one of the canonical types I_j.
        let j_of = (0..n).find(|&j| &crate::oddorth::bn_i_set(n, j) == i0);
        if let Some(j) = j_of {
            for r in 0..(2 * n - 1) {
                for i in 1..=n {
                    if i <= j {
                        continue;
                    }
                    if let Some(wir) = crate::oddorth::bn_wir(&cd.datum, n, r, i) {
                        if &wir == w {
                            let img = crate::oddorth::bn_xj(&cd.datum, n, 2 * n - i)
                                .expect("2n-i in range");
                            return Ok(Projection::Known(img));
                        }
                    }
                }
            }
        }
    }
    Ok(Projection::Unknown { length_bound: w.length(&cd.datum) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{DatumSpec, DynkinType, FrobeniusKind};

    fn gl_datum(rank: usize, r: usize) -> CocharacterDatum {
        let spec =
            DatumSpec::parse(&format!("type=A\nrank={rank}\nsignature={r}")).unwrap();
        let datum = spec.build_root_datum().unwrap();
        let i_set = spec.compact_type(&datum).unwrap();
        let sigma = datum.builtin_frobenius(spec.frobenius_kind()).unwrap();
        CocharacterDatum::new(datum, i_set, sigma).unwrap()
    }

    #[test]
    fn phi_id_is_translation_for_gl() {
        // GL_n split (r,s), w = id: phi(alpha_l) = alpha_{l+s} with indices
        // mod n.
        let n = 7usize;
        let r = 3usize;
        let s = n - r;
        let cd = gl_datum(n - 1, r);
        let id = WeylElement::identity(&cd.datum);
        for l in 1..n {
            if l == r {
                continue;
            }
            let img = phi_w(&cd, &id, Some(l - 1)).unwrap();
            let expect = (l + s) % n;
            if expect == 0 || expect == r {
                assert_eq!(img, None, "alpha_{l}");
            } else {
                assert_eq!(img, Some(expect - 1), "alpha_{l}");
            }
        }
    }

    #[test]
    fn canonical_type_gl_identity_formula() {
        // I_id = {alpha_i : i not divisible by gcd(r,s)}.
        for n in 3..=7usize {
            for r in 1..n {
                let cd = gl_datum(n - 1, r);
                let id = WeylElement::identity(&cd.datum);
                let ct = canonical_type(&cd, &id).unwrap();
                let delta = num::integer::gcd(r, n - r);
                let expect: BTreeSet<usize> =
                    (1..n).filter(|&i| i % delta != 0).map(|i| i - 1).collect();
                assert_eq!(ct.i_w, expect, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn canonical_type_errors_outside_min_reps() {
        let cd = gl_datum(3, 2);
        let s1 = WeylElement::simple(&cd.datum, 0).unwrap();
        assert!(matches!(canonical_type(&cd, &s1), Err(Error::NotMinimalRep)));
    }

    #[test]
    fn identity_bruhat_stratum_detection() {
        // Split GL_7, signature 2: I_id is a strict subset of I, so the
        // identity stratum is not a full Bruhat stratum.
        let cd = gl_datum(5, 2);
        let id = WeylElement::identity(&cd.datum);
        assert!(!is_bruhat_stratum(&cd, &id).unwrap());
        // Split odd orthogonal B_3 with I = Delta minus the first node:
        // w_{0,I} w_0 fixes I up to sign, so the identity is one.
        let datum = crate::rootdata::RootDatum::new(vec![(DynkinType::B, 3)]).unwrap();
        let sigma = datum.builtin_frobenius(FrobeniusKind::Trivial).unwrap();
        let cd = CocharacterDatum::new(datum, (1..3).collect(), sigma).unwrap();
        let id = WeylElement::identity(&cd.datum);
        assert!(is_bruhat_stratum(&cd, &id).unwrap());
    }

    #[test]
    fn longest_element_closed_form_matches_engine() {
        for (rank, r) in [(3usize, 2usize), (4, 2), (5, 3)] {
            let cd = gl_datum(rank, r);
            let top = cd.open_stratum_rep();
            let ct = canonical_type(&cd, &top).unwrap();
            assert_eq!(ct.i_w, longest_element_canonical_type(&cd), "rank={rank} r={r}");
        }
        // Unitary inert case: sigma nontrivial.
        let spec = DatumSpec::parse("type=A\nrank=2\nform=unitary\nsignature=2").unwrap();
        let datum = spec.build_root_datum().unwrap();
        let i_set = spec.compact_type(&datum).unwrap();
        let sigma = datum.builtin_frobenius(spec.frobenius_kind()).unwrap();
        let cd = CocharacterDatum::new(datum, i_set, sigma).unwrap();
        let top = cd.open_stratum_rep();
        let ct = canonical_type(&cd, &top).unwrap();
        assert_eq!(ct.i_w, longest_element_canonical_type(&cd));
        // U_3 inert (2,1): strictly smaller than I.
        assert!(ct.i_w.is_subset(&cd.i_set) && ct.i_w != cd.i_set);
    }

    #[test]
    fn flag_datum_extremes() {
        let cd = gl_datum(3, 2);
        let full = flag_datum(&cd, &cd.i_set).unwrap();
        assert_eq!(full.j0_set, cd.frame().j_set);
        let empty = flag_datum(&cd, &BTreeSet::new()).unwrap();
        assert!(empty.j0_set.is_empty());
        let bad: BTreeSet<usize> = [1usize].into_iter().collect();
        assert!(matches!(flag_datum(&cd, &bad), Err(Error::NotSubsetOfI)));
    }

    #[test]
    fn project_stratum_identity_case() {
        let cd = gl_datum(3, 2);
        let id = WeylElement::identity(&cd.datum);
        assert_eq!(
            project_stratum(&cd, &BTreeSet::new(), &id).unwrap(),
            Projection::Known(id)
        );
        // A full-flag element outside ^IW with no table entry.
        let s1 = WeylElement::simple(&cd.datum, 0).unwrap();
        assert_eq!(
            project_stratum(&cd, &BTreeSet::new(), &s1).unwrap(),
            Projection::Unknown { length_bound: 1 }
        );
    }

    #[test]
    fn bruhat_stratum_criteria_agree_on_small_data() {
        for (ty, n, i_drop) in [
            (DynkinType::A, 4usize, 2usize),
            (DynkinType::B, 3, 1),
            (DynkinType::C, 3, 3),
        ] {
            let datum = crate::rootdata::RootDatum::new(vec![(ty, n)]).unwrap();
            let sigma = datum.builtin_frobenius(FrobeniusKind::Trivial).unwrap();
            let i_set: BTreeSet<usize> = (0..n).filter(|&k| k != i_drop - 1).collect();
            let cd = CocharacterDatum::new(datum, i_set, sigma).unwrap();
            let table = weyl::coset_min_reps(&cd.datum, &cd.i_set, 10_000).unwrap();
            for w in &table.reps {
                let by_image = is_bruhat_stratum(&cd, w).unwrap();
                let by_type = canonical_type(&cd, w).unwrap().i_w == cd.i_set;
                assert_eq!(by_image, by_type, "{ty} {}", weyl::to_notation(&cd.datum, w));
            }
        }
    }
}
