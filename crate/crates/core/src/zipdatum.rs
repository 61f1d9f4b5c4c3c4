//! Cocharacter data with Frobenius action, the frame element `z`, the
//! twisted order on minimal coset representatives, lower-neighbor sets and
//! the full stratification poset.
//!
//! The twisted order is decided directly from its defining formula: `w'`
//! precedes `w` when some `x` in the twisting parabolic satisfies
//! `x w' psi(x)^{-1} <= w` with `psi(x) = z^{-1} sigma(x) z`. Enumeration is
//! budgeted and all Bruhat queries are memoized.

use crate::error::Error;
use crate::rootdata::{FrobeniusAction, RootDatum};
use crate::weyl::{
    self, BruhatCache, CosetTable, WeylElement, apply_frobenius, coset_min_reps_bounded,
    enumerate_parabolic, longest_element, longest_element_parabolic,
};
use crate::Result;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

pub const DEFAULT_BUDGET: usize = 200_000;

/// Reads the enumeration budget from `ZIPSTRAT_BUDGET`, falling back to
/// [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("ZIPSTRAT_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// The frame `(z, J)` attached to a cocharacter datum.
#[derive(Debug, Clone)]
pub struct Frame {
    pub z: WeylElement,
    pub j_set: BTreeSet<usize>,
}

/// A root datum with a parabolic type `I`, a Frobenius action and an
/// optional prime.
#[derive(Debug)]
pub struct CocharacterDatum {
    pub datum: RootDatum,
    pub i_set: BTreeSet<usize>,
    pub sigma: FrobeniusAction,
    pub p: Option<u64>,
    budget: usize,
    frame: OnceLock<Frame>,
    bruhat: BruhatCache,
    /// Per twisting set `I_0`: the elements `x` of `W_{I_0}` paired with
    /// `psi(x)^{-1}`.
    twist_tables: Mutex<HashMap<BTreeSet<usize>, Arc<Vec<(WeylElement, WeylElement)>>>>,
    twisted_cache: Mutex<HashMap<(Vec<usize>, Vec<u32>, Vec<u32>), bool>>,
}

impl CocharacterDatum {
    pub fn new(datum: RootDatum, i_set: BTreeSet<usize>, sigma: FrobeniusAction) -> Result<Self> {
        if sigma.datum_id() != datum.id() {
            return Err(Error::DatumMismatch);
        }
        for &i in &i_set {
            if i >= datum.rank() {
                return Err(Error::IndexOutOfRange(i));
            }
        }
        Ok(CocharacterDatum {
            datum,
            i_set,
            sigma,
            p: None,
            budget: budget_from_env(),
            frame: OnceLock::new(),
            bruhat: BruhatCache::new(),
            twist_tables: Mutex::new(HashMap::new()),
            twisted_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Builds the datum, compact type, and Frobenius action described by a
    /// parsed [`DatumSpec`](crate::rootdata::DatumSpec).
    pub fn from_spec(spec: &crate::rootdata::DatumSpec) -> Result<Self> {
        let datum = spec.build_root_datum()?;
        let i_set = spec.compact_type(&datum)?;
        let sigma = datum.builtin_frobenius(spec.frobenius_kind())?;
        CocharacterDatum::new(datum, i_set, sigma)
    }

    pub fn with_prime(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn bruhat(&self) -> &BruhatCache {
        &self.bruhat
    }

    pub fn bruhat_leq(&self, u: &WeylElement, w: &WeylElement) -> bool {
        self.bruhat.leq(&self.datum, u, w)
    }

    /// The standard frame: `z = sigma(w_{0,I}) w_0` and `J = z^{-1} sigma(I)`.
    pub fn frame(&self) -> &Frame {
        self.frame.get_or_init(|| {
            let w0 = longest_element(&self.datum);
            let w0i = longest_element_parabolic(&self.datum, &self.i_set)
                .expect("I validated at construction");
            let z = apply_frobenius(&self.datum, &self.sigma, &w0i)
                .mul(&self.datum, &w0)
                .expect("same datum");
            let zinv = z.inverse();
            let mut j_set = BTreeSet::new();
            for &i in &self.i_set {
                let img = zinv.apply(self.sigma.perm[i]);
                if img >= self.datum.rank() {
                    // Standard z always lands in Delta; anything else is an
                    // internal consistency failure.
                    panic!(
                        "frame axiom violated: z^-1 sigma(alpha_{i}) is not simple"
                    );
                }
                j_set.insert(img);
            }
            Frame { z, j_set }
        })
    }

    /// `psi(x) = z^{-1} sigma(x) z`.
    pub fn psi(&self, x: &WeylElement) -> WeylElement {
        let z = &self.frame().z;
        let sx = apply_frobenius(&self.datum, &self.sigma, x);
        z.inverse()
            .mul(&self.datum, &sx)
            .and_then(|t| t.mul(&self.datum, z))
            .expect("same datum")
    }

    fn twist_table(&self, i0: &BTreeSet<usize>) -> Result<Arc<Vec<(WeylElement, WeylElement)>>> {
        if let Some(t) = self.twist_tables.lock().unwrap().get(i0) {
            return Ok(t.clone());
        }
        let xs = enumerate_parabolic(&self.datum, i0, self.budget)?;
        let table: Vec<(WeylElement, WeylElement)> =
            xs.into_iter().map(|x| { let pi = self.psi(&x).inverse(); (x, pi) }).collect();
        let arc = Arc::new(table);
        self.twist_tables.lock().unwrap().insert(i0.clone(), arc.clone());
        Ok(arc)
    }

    /// Decides `w' preceq_{I_0} w` for `I_0`-minimal representatives.
    pub fn twisted_leq(
        &self,
        i0: &BTreeSet<usize>,
        w_prime: &WeylElement,
        w: &WeylElement,
    ) -> Result<bool> {
        if !w_prime.is_min_rep(&self.datum, i0) || !w.is_min_rep(&self.datum, i0) {
            return Err(Error::NotMinimalRep);
        }
        if w_prime == w {
            return Ok(true);
        }
        if w_prime.length(&self.datum) >= w.length(&self.datum) {
            return Ok(false);
        }
        // x = id covers the plain Bruhat comparison without enumeration.
        if self.bruhat.leq(&self.datum, w_prime, w) {
            return Ok(true);
        }
        let key = (
            i0.iter().copied().collect::<Vec<_>>(),
            w_prime.perm().to_vec(),
            w.perm().to_vec(),
        );
        if let Some(&v) = self.twisted_cache.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let table = self.twist_table(i0)?;
        let mut found = false;
        for (x, psi_inv) in table.iter() {
            if x.is_identity() {
                continue;
            }
            let cand = x
                .mul(&self.datum, w_prime)
                .and_then(|t| t.mul(&self.datum, psi_inv))
                .expect("same datum");
            if self.bruhat.leq(&self.datum, &cand, w) {
                found = true;
                break;
            }
        }
        self.twisted_cache.lock().unwrap().insert(key, found);
        Ok(found)
    }

    /// `Gamma_{I_0}(w)`: the `I_0`-minimal `w'` with `w' preceq_{I_0} w` and
    /// `l(w') = l(w) - 1`. Each neighbor is flagged `true` when it is
    /// already a Bruhat-lower element and `false` when it is exceptional.
    pub fn lower_neighbors(
        &self,
        i0: &BTreeSet<usize>,
        w: &WeylElement,
    ) -> Result<Vec<(WeylElement, bool)>> {
        if !w.is_min_rep(&self.datum, i0) {
            return Err(Error::NotMinimalRep);
        }
        let lw = w.length(&self.datum);
        if lw == 0 {
            return Ok(Vec::new());
        }
        let table = coset_min_reps_bounded(&self.datum, i0, lw - 1, self.budget)?;
        let mut out = Vec::new();
        for cand in table.reps.iter().filter(|c| c.length(&self.datum) + 1 == lw) {
            if self.twisted_leq(i0, cand, w)? {
                let bruhat = self.bruhat.leq(&self.datum, cand, w);
                out.push((cand.clone(), bruhat));
            }
        }
        Ok(out)
    }

    /// Codimension of the `w`-stratum closure: `l(w_{0,I} w_0) - l(w)`.
    pub fn stratum_codim(&self, w: &WeylElement) -> Result<usize> {
        if !w.is_min_rep(&self.datum, &self.i_set) {
            return Err(Error::NotMinimalRep);
        }
        Ok(self.open_stratum_length() - w.length(&self.datum))
    }

    /// `l(w_{0,I} w_0)`, the length of the open stratum's representative.
    pub fn open_stratum_length(&self) -> usize {
        self.datum.num_positive()
            - longest_element_parabolic(&self.datum, &self.i_set)
                .expect("I validated at construction")
                .length(&self.datum)
    }

    /// The open stratum's representative `w_{0,I} w_0` itself.
    pub fn open_stratum_rep(&self) -> WeylElement {
        let w0 = longest_element(&self.datum);
        longest_element_parabolic(&self.datum, &self.i_set)
            .expect("I validated at construction")
            .mul(&self.datum, &w0)
            .expect("same datum")
    }

    /// The full poset `(^{I_0}W, preceq_{I_0})` with covering relations.
    pub fn strata_poset(&self, i0: &BTreeSet<usize>) -> Result<StrataPoset> {
        let table = weyl::coset_min_reps(&self.datum, i0, self.budget)?;
        let n = table.reps.len();
        let lengths: Vec<usize> = table.reps.iter().map(|w| w.length(&self.datum)).collect();
        let mut leq = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                leq[a][b] = self.twisted_leq(i0, &table.reps[a], &table.reps[b])?;
            }
        }
        // Validation: antisymmetry and transitivity of the relation.
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] && leq[b][a] && a != b {
                    return Err(Error::RangeViolation("twisted order is not antisymmetric".into()));
                }
                if !leq[a][b] {
                    continue;
                }
                for c in 0..n {
                    if leq[b][c] && !leq[a][c] {
                        return Err(Error::RangeViolation("twisted order is not transitive".into()));
                    }
                }
                // Bruhat refinement.
                if self.bruhat.leq(&self.datum, &table.reps[a], &table.reps[b]) && !leq[a][b] {
                    return Err(Error::RangeViolation(
                        "twisted order does not refine Bruhat".into(),
                    ));
                }
            }
        }
        // Covers are exactly the length-one drops: the chain property says
        // every related pair is connected through them; validate that.
        let mut covers = Vec::new();
        for b in 0..n {
            for a in 0..n {
                if a != b && leq[a][b] && lengths[a] + 1 == lengths[b] {
                    let bruhat = self.bruhat.leq(&self.datum, &table.reps[a], &table.reps[b]);
                    covers.push((a, b, bruhat));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !(leq[a][b] && a != b) {
                    continue;
                }
                // Walk down from b one length step at a time towards a.
                let mut frontier = vec![b];
                let mut reached = false;
                'walk: for _ in 0..(lengths[b] - lengths[a]) {
                    let mut next = Vec::new();
                    for &v in &frontier {
                        for &(u, vv, _) in &covers {
                            if vv == v && leq[a][u] {
                                if u == a {
                                    reached = true;
                                    break 'walk;
                                }
                                next.push(u);
                            }
                        }
                    }
                    next.sort_unstable();
                    next.dedup();
                    frontier = next;
                }
                if !reached {
                    return Err(Error::RangeViolation(
                        "chain property fails in twisted order".into(),
                    ));
                }
            }
        }
        Ok(StrataPoset { i0_set: i0.clone(), table, lengths, leq, covers })
    }
}

/// The twisted order on `^{I_0}W` as an explicit adjacency structure.
#[derive(Debug)]
pub struct StrataPoset {
    pub i0_set: BTreeSet<usize>,
    pub table: CosetTable,
    pub lengths: Vec<usize>,
    /// `leq[a][b]` holds when `reps[a] preceq reps[b]`.
    pub leq: Vec<Vec<bool>>,
    /// Covering relations `(lower, upper, is_bruhat_lower)`.
    pub covers: Vec<(usize, usize, bool)>,
}

impl StrataPoset {
    pub fn len(&self) -> usize {
        self.table.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.reps.is_empty()
    }

    /// Hasse diagram in DOT format; nodes carry window notation and length,
    /// dashed edges mark exceptional (non-Bruhat) covers.
    pub fn to_dot(&self, datum: &RootDatum) -> String {
        let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
        for (k, w) in self.table.reps.iter().enumerate() {
            out.push_str(&format!(
                "  n{} [label=\"{}\\nl={}\"];\n",
                k,
                weyl::to_notation(datum, w),
                self.lengths[k]
            ));
        }
        for &(a, b, bruhat) in &self.covers {
            let style = if bruhat { "solid" } else { "dashed" };
            out.push_str(&format!("  n{a} -> n{b} [style={style}];\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, datum: &RootDatum) -> serde_json::Value {
        serde_json::json!({
            "i0": self.i0_set.iter().map(|&i| i + 1).collect::<Vec<_>>(),
            "nodes": self.table.reps.iter().enumerate().map(|(k, w)| {
                serde_json::json!({
                    "id": k,
                    "notation": weyl::to_notation(datum, w),
                    "length": self.lengths[k],
                })
            }).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|&(a, b, bruhat)| {
                serde_json::json!({"lower": a, "upper": b, "bruhat": bruhat})
            }).collect::<Vec<_>>(),
        })
    }
}
