//! w-open substacks and the decision procedure for normality, smoothness
//! and Cohen-Macaulayness of stratum closures: canonical covers,
//! w-boundedness, separating verdicts and the length-one analyzer.

use crate::canonical::{self, Projection};
use crate::error::Error;
use crate::weyl::{self, WeylElement, coset_min_reps_bounded};
use crate::zipdatum::CocharacterDatum;
use crate::Result;
use std::collections::BTreeSet;

/// An open union of strata inside the closure of the `w`-stratum: `w`
/// itself together with the set `gamma` of strata appearing in the union.
#[derive(Debug, Clone)]
pub struct WOpen {
    pub w: WeylElement,
    pub gamma: Vec<WeylElement>,
}

impl WOpen {
    pub fn contains(&self, v: &WeylElement) -> bool {
        self.gamma.iter().any(|g| g == v)
    }

    pub fn is_elementary(&self) -> bool {
        self.gamma.len() == 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Separating {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Conclusion {
    Smooth,
    NormalCM,
    NotNormal,
    NotSmooth,
    Unknown,
}

/// Outcome of the decision procedure, with the reasoning steps taken.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub has_cover: bool,
    pub w_bounded: bool,
    pub separating: Separating,
    pub conclusion: Conclusion,
    pub trace: Vec<String>,
}

/// Validates a w-open: `w` belongs to `gamma`, every element of `gamma`
/// precedes `w`, and `gamma` is upward closed inside the lower set of `w`
/// (no sandwiched stratum is missing).
pub fn make_w_open(cd: &CocharacterDatum, w: &WeylElement, gamma: Vec<WeylElement>) -> Result<WOpen> {
    if !w.is_min_rep(&cd.datum, &cd.i_set) {
        return Err(Error::NotMinimalRep);
    }
    let u = WOpen { w: w.clone(), gamma };
    if !u.contains(w) {
        return Err(Error::NotOpenInClosure {
            witness: weyl::to_notation(&cd.datum, w),
        });
    }
    for v in &u.gamma {
        if !cd.twisted_leq(&cd.i_set, v, w)? {
            return Err(Error::NotOpenInClosure {
                witness: weyl::to_notation(&cd.datum, v),
            });
        }
    }
    let lw = w.length(&cd.datum);
    let table = coset_min_reps_bounded(&cd.datum, &cd.i_set, lw, cd.budget())?;
    for v in &table.reps {
        if u.contains(v) || !cd.twisted_leq(&cd.i_set, v, w)? {
            continue;
        }
        for g in &u.gamma {
            if cd.twisted_leq(&cd.i_set, g, v)? {
                return Err(Error::NotOpenInClosure {
                    witness: weyl::to_notation(&cd.datum, v),
                });
            }
        }
    }
    Ok(u)
}

/// The elementary w-open `U(w, w') = X_w ∪ X_{w'}` for a lower neighbor
/// `w'` of `w`.
pub fn elementary(cd: &CocharacterDatum, w: &WeylElement, w_prime: &WeylElement) -> Result<WOpen> {
    if !w.is_min_rep(&cd.datum, &cd.i_set) || !w_prime.is_min_rep(&cd.datum, &cd.i_set) {
        return Err(Error::NotMinimalRep);
    }
    let gamma_i = cd.lower_neighbors(&cd.i_set, w)?;
    if !gamma_i.iter().any(|(v, _)| v == w_prime) {
        return Err(Error::NotLowerNeighbor);
    }
    Ok(WOpen { w: w.clone(), gamma: vec![w.clone(), w_prime.clone()] })
}

/// Conditions for a `P_0`-cover at twisting type `I_0`: every stratum of
/// the union precedes `w` at the `I_0` level, and every element of
/// `^{I_0}W` sandwiched between the union and `w` belongs to the union.
pub fn admits_cover(cd: &CocharacterDatum, u: &WOpen, i0: &BTreeSet<usize>) -> Result<bool> {
    for v in &u.gamma {
        if !cd.twisted_leq(i0, v, &u.w)? {
            return Ok(false);
        }
    }
    let lw = u.w.length(&cd.datum);
    let table = coset_min_reps_bounded(&cd.datum, i0, lw, cd.budget())?;
    for wp in &table.reps {
        if u.contains(wp) || !cd.twisted_leq(i0, wp, &u.w)? {
            continue;
        }
        for g in &u.gamma {
            if cd.twisted_leq(i0, g, wp)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `I_v ⊆ I_w` for every stratum of the union.
pub fn is_w_bounded(cd: &CocharacterDatum, u: &WOpen) -> Result<bool> {
    let i_w = canonical::canonical_type(cd, &u.w)?.i_w;
    for v in &u.gamma {
        if !canonical::canonical_type(cd, v)?.i_w.is_subset(&i_w) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A separating verdict with its justification and, when undecided, the
/// flag elements that could not be resolved.
#[derive(Debug, Clone)]
pub struct SeparatingReport {
    pub status: Separating,
    pub reason: String,
    pub unresolved: Vec<WeylElement>,
}

/// Decides whether the canonical cover (at `I_0 = I_w`) is separating.
pub fn separating_verdict(cd: &CocharacterDatum, u: &WOpen) -> Result<SeparatingReport> {
    let i_w = canonical::canonical_type(cd, &u.w)?.i_w;
    if !admits_cover(cd, u, &i_w)? {
        return Ok(SeparatingReport {
            status: Separating::No,
            reason: "no canonical cover".into(),
            unresolved: Vec::new(),
        });
    }
    if u.is_elementary() {
        return Ok(SeparatingReport {
            status: Separating::Yes,
            reason: "elementary w-open: separating is automatic".into(),
            unresolved: Vec::new(),
        });
    }
    let lw = u.w.length(&cd.datum);
    let table = coset_min_reps_bounded(&cd.datum, &i_w, lw, cd.budget())?;
    let lower: Vec<&WeylElement> = {
        let mut out = Vec::new();
        for wp in &table.reps {
            if cd.twisted_leq(&i_w, wp, &u.w)? {
                out.push(wp);
            }
        }
        out
    };
    if lower.iter().all(|wp| wp.is_min_rep(&cd.datum, &cd.i_set)) {
        return Ok(SeparatingReport {
            status: Separating::Yes,
            reason: "all flag strata in the closure are base strata".into(),
            unresolved: Vec::new(),
        });
    }
    if is_builtin_yj(cd, u) {
        return Ok(SeparatingReport {
            status: Separating::Yes,
            reason: "built-in odd-orthogonal union Y_j".into(),
            unresolved: Vec::new(),
        });
    }
    // Direct check: if every flag stratum in the closure either is the lift
    // of a stratum of the union or has a known projection landing outside
    // the union, the projection square is Cartesian.
    let mut unresolved = Vec::new();
    for wp in &lower {
        if u.contains(wp) {
            continue;
        }
        match canonical::project_stratum(cd, &i_w, wp)? {
            Projection::Known(img) if !u.contains(&img) => {}
            _ => unresolved.push((*wp).clone()),
        }
    }
    if unresolved.is_empty() {
        return Ok(SeparatingReport {
            status: Separating::Yes,
            reason: "all non-lift flag strata project outside the union".into(),
            unresolved,
        });
    }
    Ok(SeparatingReport {
        status: Separating::Unknown,
        reason: "projection undetermined for some flag strata".into(),
        unresolved,
    })
}

/// Recognizes the odd-orthogonal union `Y_j = X_{x_j} ∪ ... ∪ X_{x_{2n-1-j}}`.
fn is_builtin_yj(cd: &CocharacterDatum, u: &WOpen) -> bool {
    let Some(n) = crate::oddorth::bn_split_rank(cd) else {
        return false;
    };
    let Some(j) = (0..n).find(|&j| {
        crate::oddorth::bn_xj(&cd.datum, n, j).as_ref() == Some(&u.w)
    }) else {
        return false;
    };
    let expected: Vec<WeylElement> = (j..=2 * n - 1 - j)
        .map(|i| crate::oddorth::bn_xj(&cd.datum, n, i).expect("i in range"))
        .collect();
    expected.len() == u.gamma.len() && expected.iter().all(|x| u.contains(x))
}

/// The full decision procedure.
pub fn classify(cd: &CocharacterDatum, u: &WOpen) -> Result<Verdict> {
    let mut trace = Vec::new();
    let i_w = canonical::canonical_type(cd, &u.w)?.i_w;
    trace.push(format!(
        "I_w = {{{}}}",
        i_w.iter().map(|i| format!("a{}", i + 1)).collect::<Vec<_>>().join(",")
    ));

    if u.gamma.len() == 1 {
        trace.push("single stratum: open in its own closure, smooth".into());
        return Ok(Verdict {
            has_cover: true,
            w_bounded: true,
            separating: Separating::Yes,
            conclusion: Conclusion::Smooth,
            trace,
        });
    }

    if u.is_elementary() {
        let w_prime = u.gamma.iter().find(|g| *g != &u.w).expect("two distinct elements");
        let in_gamma_iw = w_prime.is_min_rep(&cd.datum, &i_w)
            && cd.lower_neighbors(&i_w, &u.w)?.iter().any(|(v, _)| v == w_prime);
        trace.push(format!(
            "w' {} Gamma_{{I_w}}(w)",
            if in_gamma_iw { "lies in" } else { "is missing from" }
        ));
        let i_wp = canonical::canonical_type(cd, w_prime)?.i_w;
        let bounded = i_wp.is_subset(&i_w);
        trace.push(format!(
            "I_w' {} I_w",
            if bounded { "is contained in" } else { "is not contained in" }
        ));
        let smooth = in_gamma_iw && bounded;
        trace.push(format!(
            "elementary criterion: {}",
            if smooth { "smooth" } else { "not smooth" }
        ));
        return Ok(Verdict {
            has_cover: in_gamma_iw,
            w_bounded: bounded,
            separating: if in_gamma_iw { Separating::Yes } else { Separating::No },
            conclusion: if smooth { Conclusion::Smooth } else { Conclusion::NotSmooth },
            trace,
        });
    }

    let has_cover = admits_cover(cd, u, &i_w)?;
    trace.push(format!(
        "canonical cover at I_w: {}",
        if has_cover { "admitted" } else { "fails" }
    ));
    let w_bounded = is_w_bounded(cd, u)?;
    trace.push(format!("w-bounded: {w_bounded}"));
    let sep = separating_verdict(cd, u)?;
    trace.push(format!("separating: {:?} ({})", sep.status, sep.reason));

    let conclusion = match (has_cover, w_bounded, sep.status) {
        (true, true, Separating::Yes) => Conclusion::NormalCM,
        (true, false, Separating::Yes) => Conclusion::NotNormal,
        _ => Conclusion::Unknown,
    };
    trace.push(format!("conclusion: {conclusion:?}"));
    Ok(Verdict { has_cover, w_bounded, separating: sep.status, conclusion, trace })
}

/// Per-root report of the length-one analysis.
#[derive(Debug, Clone)]
pub struct LengthOneReport {
    /// The simple root outside `I` (0-based index).
    pub alpha: usize,
    pub i_id: BTreeSet<usize>,
    pub i_alpha: BTreeSet<usize>,
    pub smooth: bool,
}

/// For each `alpha` outside `I`: the closure of the length-one stratum of
/// `s_alpha` is smooth iff `s_alpha(I_id) = I_id` as root subsets.
pub fn length_one_analysis(cd: &CocharacterDatum) -> Result<Vec<LengthOneReport>> {
    let id = WeylElement::identity(&cd.datum);
    let i_id = canonical::canonical_type(cd, &id)?.i_w;
    let mut out = Vec::new();
    for alpha in 0..cd.datum.rank() {
        if cd.i_set.contains(&alpha) {
            continue;
        }
        let s = WeylElement::simple(&cd.datum, alpha)?;
        let i_alpha = canonical::canonical_type(cd, &s)?.i_w;
        if !i_alpha.is_subset(&i_id) {
            return Err(Error::RangeViolation(
                "I_alpha must be contained in I_id".into(),
            ));
        }
        let image: BTreeSet<usize> = i_id
            .iter()
            .map(|&i| cd.datum.positive_of(s.apply(i)))
            .collect();
        // s_alpha(I_id) = I_id iff the image consists of the same simple
        // roots (it stays inside the simple roots exactly in that case).
        let smooth = image == i_id;
        if smooth && i_alpha != i_id {
            return Err(Error::RangeViolation(
                "smooth length-one stratum must have I_alpha = I_id".into(),
            ));
        }
        out.push(LengthOneReport { alpha, i_id: i_id.clone(), i_alpha, smooth });
    }
    Ok(out)
}

/// True iff every elementary `U(w, w')` is singular, i.e. the smooth locus
/// of the closure of the `w`-stratum is the stratum itself.
pub fn smooth_locus_open_stratum_test(cd: &CocharacterDatum, w: &WeylElement) -> Result<bool> {
    for (wp, _) in cd.lower_neighbors(&cd.i_set, w)? {
        let u = elementary(cd, w, &wp)?;
        if classify(cd, &u)?.conclusion == Conclusion::Smooth {
            return Ok(false);
        }
    }
    Ok(true)
}
