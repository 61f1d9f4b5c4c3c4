//! Weyl group elements as root-index permutations: length, descent sets,
//! Bruhat order, longest elements, minimal coset representatives and
//! Bruhat-lower neighbors.
//!
//! An element is the permutation it induces on the full root set, so
//! equality testing is canonical and multiplication is `O(|Phi|)` for every
//! type. Reduced words are derived on demand by greedy descent.

use crate::error::Error;
use crate::rootdata::{DynkinType, FrobeniusAction, RootDatum};
use crate::Result;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Mutex;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// `perm[r]` is the root index of `w(beta_r)`.
    perm: Vec<u32>,
    datum_id: u64,
}

impl WeylElement {
    pub fn identity(datum: &RootDatum) -> Self {
        WeylElement {
            perm: (0..datum.num_roots() as u32).collect(),
            datum_id: datum.id(),
        }
    }

    pub fn simple(datum: &RootDatum, i: usize) -> Result<Self> {
        if i >= datum.rank() {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(WeylElement { perm: datum.simple_perm(i).to_vec(), datum_id: datum.id() })
    }

    pub fn from_reduced_word(datum: &RootDatum, word: &[usize]) -> Result<Self> {
        let mut w = WeylElement::identity(datum);
        for &i in word {
            w = w.mul(datum, &WeylElement::simple(datum, i)?)?;
        }
        Ok(w)
    }

    /// The reflection `s_beta` for the root with index `r`.
    pub fn reflection(datum: &RootDatum, r: usize) -> Result<Self> {
        if r >= datum.num_roots() {
            return Err(Error::IndexOutOfRange(r));
        }
        Ok(WeylElement { perm: datum.reflection_perm(r).to_vec(), datum_id: datum.id() })
    }

    pub fn datum_id(&self) -> u64 {
        self.datum_id
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    /// Root index of `w(beta_r)`.
    pub fn apply(&self, r: usize) -> usize {
        self.perm[r] as usize
    }

    /// Image of a root-lattice vector under `w`.
    pub fn apply_to_vector(&self, datum: &RootDatum, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; datum.rank()];
        for i in 0..datum.rank() {
            if v[i] != 0 {
                let img = datum.root(self.perm[i] as usize);
                for j in 0..datum.rank() {
                    out[j] += v[i] * img[j];
                }
            }
        }
        out
    }

    /// `(self * other)(beta) = self(other(beta))`.
    pub fn mul(&self, datum: &RootDatum, other: &WeylElement) -> Result<Self> {
        if self.datum_id != other.datum_id || self.datum_id != datum.id() {
            return Err(Error::DatumMismatch);
        }
        Ok(WeylElement {
            perm: other.perm.iter().map(|&r| self.perm[r as usize]).collect(),
            datum_id: self.datum_id,
        })
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0u32; self.perm.len()];
        for (r, &img) in self.perm.iter().enumerate() {
            perm[img as usize] = r as u32;
        }
        WeylElement { perm, datum_id: self.datum_id }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(r, &img)| r as u32 == img)
    }

    /// `l(w) = #{beta > 0 : w(beta) < 0}`.
    pub fn length(&self, datum: &RootDatum) -> usize {
        (0..datum.num_positive())
            .filter(|&r| !datum.is_positive(self.perm[r] as usize))
            .count()
    }

    /// Simple `i` with `l(w s_i) < l(w)`, i.e. `w(alpha_i) < 0`.
    pub fn right_descents(&self, datum: &RootDatum) -> Vec<usize> {
        (0..datum.rank())
            .filter(|&i| !datum.is_positive(self.perm[i] as usize))
            .collect()
    }

    /// Simple `i` with `l(s_i w) < l(w)`, i.e. `w^{-1}(alpha_i) < 0`.
    pub fn left_descents(&self, datum: &RootDatum) -> Vec<usize> {
        let inv = self.inverse();
        inv.right_descents(datum)
    }

    pub fn right_mul_simple(&self, datum: &RootDatum, i: usize) -> Self {
        let si = datum.simple_perm(i);
        WeylElement {
            perm: si.iter().map(|&r| self.perm[r as usize]).collect(),
            datum_id: self.datum_id,
        }
    }

    pub fn left_mul_simple(&self, datum: &RootDatum, i: usize) -> Self {
        let si = datum.simple_perm(i);
        WeylElement {
            perm: self.perm.iter().map(|&r| si[r as usize]).collect(),
            datum_id: self.datum_id,
        }
    }

    /// A reduced word for `w`, peeled off by right descents.
    pub fn reduced_word(&self, datum: &RootDatum) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        loop {
            let Some(&i) = w.right_descents(datum).first() else {
                break;
            };
            word.push(i);
            w = w.right_mul_simple(datum, i);
        }
        word.reverse();
        word
    }

    /// `w` lies in `^IW`: `w^{-1}(alpha) > 0` for all `alpha` in `I`.
    pub fn is_min_rep(&self, datum: &RootDatum, i_set: &BTreeSet<usize>) -> bool {
        let inv = self.inverse();
        i_set.iter().all(|&i| datum.is_positive(inv.perm[i] as usize))
    }

    /// `w` lies in `W^J`: `w(alpha) > 0` for all `alpha` in `J`.
    pub fn is_min_rep_right(&self, datum: &RootDatum, j_set: &BTreeSet<usize>) -> bool {
        j_set.iter().all(|&j| datum.is_positive(self.perm[j] as usize))
    }

    /// `w` lies in the parabolic subgroup `W_I`: it permutes the roots
    /// spanned by `I` and fixes all roots with support outside `I`.
    pub fn is_in_parabolic(&self, datum: &RootDatum, i_set: &BTreeSet<usize>) -> bool {
        self.reduced_word(datum).iter().all(|i| i_set.contains(i))
    }
}

/// `^IW` (or `W^J`) with its parabolic type, sorted by length.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub i_set: BTreeSet<usize>,
    pub reps: Vec<WeylElement>,
}

impl CosetTable {
    pub fn contains(&self, w: &WeylElement) -> bool {
        self.reps.iter().any(|r| r == w)
    }
}

/// The longest element `w_0`: repeatedly append any simple reflection that
/// still increases length. Terminates at the unique element mapping every
/// simple root to a negative root.
pub fn longest_element(datum: &RootDatum) -> WeylElement {
    let all: BTreeSet<usize> = (0..datum.rank()).collect();
    longest_element_parabolic(datum, &all).expect("full Delta is valid")
}

/// The longest element `w_{0,I}` of the parabolic subgroup `W_I`.
pub fn longest_element_parabolic(datum: &RootDatum, i_set: &BTreeSet<usize>) -> Result<WeylElement> {
    for &i in i_set {
        if i >= datum.rank() {
            return Err(Error::IndexOutOfRange(i));
        }
    }
    let mut w = WeylElement::identity(datum);
    loop {
        let Some(&i) = i_set.iter().find(|&&i| datum.is_positive(w.perm[i] as usize)) else {
            return Ok(w);
        };
        w = w.right_mul_simple(datum, i);
    }
}

/// `sigma(w) = sigma w sigma^{-1}` as root permutations.
pub fn apply_frobenius(datum: &RootDatum, sigma: &FrobeniusAction, w: &WeylElement) -> WeylElement {
    let sp = datum.sigma_root_perm(sigma);
    let mut sp_inv = vec![0u32; sp.len()];
    for (r, &img) in sp.iter().enumerate() {
        sp_inv[img as usize] = r as u32;
    }
    WeylElement {
        perm: (0..sp.len())
            .map(|r| sp[w.perm[sp_inv[r] as usize] as usize])
            .collect(),
        datum_id: w.datum_id,
    }
}

/// Enumerates `^IW` breadth-first from the identity, appending `s_alpha` on
/// the right only when the length grows and the result stays I-minimal.
/// `^IW` is closed downward under right descents, so this reaches all of it.
pub fn coset_min_reps(datum: &RootDatum, i_set: &BTreeSet<usize>, budget: usize) -> Result<CosetTable> {
    coset_min_reps_bounded(datum, i_set, usize::MAX, budget)
}

/// Length-truncated variant: only representatives with `l(w) <= max_len`.
pub fn coset_min_reps_bounded(
    datum: &RootDatum,
    i_set: &BTreeSet<usize>,
    max_len: usize,
    budget: usize,
) -> Result<CosetTable> {
    for &i in i_set {
        if i >= datum.rank() {
            return Err(Error::IndexOutOfRange(i));
        }
    }
    let mut reps = vec![WeylElement::identity(datum)];
    let mut frontier: Vec<WeylElement> = reps.clone();
    let mut seen: HashSet<WeylElement> = frontier.iter().cloned().collect();
    let mut len = 0usize;
    while !frontier.is_empty() && len < max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for j in 0..datum.rank() {
                // l(w s_j) > l(w) iff w(alpha_j) > 0.
                if !datum.is_positive(w.perm[j] as usize) {
                    continue;
                }
                let ws = w.right_mul_simple(datum, j);
                if seen.contains(&ws) || !ws.is_min_rep(datum, i_set) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded { required: seen.len() + 1, budget });
                }
                seen.insert(ws.clone());
                next.push(ws);
            }
        }
        reps.extend(next.iter().cloned());
        frontier = next;
        len += 1;
    }
    Ok(CosetTable { i_set: i_set.clone(), reps })
}

/// All of `W_I`, breadth-first (so sorted by length).
pub fn enumerate_parabolic(
    datum: &RootDatum,
    i_set: &BTreeSet<usize>,
    budget: usize,
) -> Result<Vec<WeylElement>> {
    for &i in i_set {
        if i >= datum.rank() {
            return Err(Error::IndexOutOfRange(i));
        }
    }
    let mut out = vec![WeylElement::identity(datum)];
    let mut frontier = out.clone();
    let mut seen: HashSet<WeylElement> = frontier.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for &j in i_set {
                if !datum.is_positive(w.perm[j] as usize) {
                    continue;
                }
                let ws = w.right_mul_simple(datum, j);
                if seen.contains(&ws) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded { required: seen.len() + 1, budget });
                }
                seen.insert(ws.clone());
                next.push(ws);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// All `u < w` with `l(u) = l(w) - 1`; these are exactly the `w t_beta`
/// with `t_beta` a reflection dropping the length by one.
pub fn bruhat_lower_neighbors(datum: &RootDatum, w: &WeylElement) -> Vec<WeylElement> {
    let lw = w.length(datum);
    let mut out = Vec::new();
    for b in 0..datum.num_positive() {
        let t = datum.reflection_perm(b);
        let u = WeylElement {
            perm: t.iter().map(|&r| w.perm[r as usize]).collect(),
            datum_id: w.datum_id,
        };
        if u.length(datum) + 1 == lw {
            out.push(u);
        }
    }
    out.sort_by_key(|u| u.perm.clone());
    out.dedup();
    out
}

/// Memoized Bruhat order via the lifting property: for a left descent `i`
/// of `w`, `u <= w` iff `min(u, s_i u) <= s_i w`.
#[derive(Debug, Default)]
pub struct BruhatCache {
    map: Mutex<HashMap<(Vec<u32>, Vec<u32>), bool>>,
}

impl BruhatCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leq(&self, datum: &RootDatum, u: &WeylElement, w: &WeylElement) -> bool {
        if u.is_identity() || u == w {
            return true;
        }
        let (lu, lw) = (u.length(datum), w.length(datum));
        if lu >= lw {
            return false;
        }
        let key = (u.perm.clone(), w.perm.clone());
        if let Some(&v) = self.map.lock().unwrap().get(&key) {
            return v;
        }
        let i = *w.left_descents(datum).first().expect("w != id has a descent");
        let sw = w.left_mul_simple(datum, i);
        let su = u.left_mul_simple(datum, i);
        let u2 = if su.length(datum) < lu { &su } else { u };
        let v = self.leq(datum, u2, &sw);
        self.map.lock().unwrap().insert(key, v);
        v
    }
}

/// Subword oracle: `u <= w` iff some subword of a fixed reduced word for
/// `w` is a reduced word for `u`. Exponential; test oracle for small rank.
pub fn bruhat_leq_subword(datum: &RootDatum, u: &WeylElement, w: &WeylElement) -> bool {
    let word = w.reduced_word(datum);
    let lu = u.length(datum);
    if lu > word.len() {
        return false;
    }
    let n = word.len();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != lu {
            continue;
        }
        let sub: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) != 0).map(|k| word[k]).collect();
        if &WeylElement::from_reduced_word(datum, &sub).unwrap() == u {
            return true;
        }
    }
    false
}

/// One-line window of `w` on the ambient basis of classical factor `f`:
/// entry `a` is the signed index `j` with `w(e_a) = +/- e_j`. For type A
/// all signs are positive and the window is the usual permutation of
/// `{1..n+1}` with `w(e_a) = e_{window[a]}`.
pub fn factor_window(datum: &RootDatum, w: &WeylElement, f: usize) -> Result<Vec<i64>> {
    let (ty, n) = datum.factors()[f];
    let image_of_e = |a: usize| -> Result<Vec<i64>> {
        // Express e_a via roots of the factor and push through w.
        let amb_dim = datum.ambient(f).map(|amb| amb.dim).ok_or_else(|| {
            Error::UnsupportedType("window notation requires a classical factor".into())
        })?;
        let image_of_ambient = |v: &[i64]| -> Vec<i64> {
            let lat = datum.root_from_ambient(f, v).expect("vector in root lattice");
            let img = w.apply_to_vector(datum, &lat);
            // Read the image back in ambient coordinates.
            let mut out = vec![0i64; amb_dim];
            let o = datum.factor_offset(f);
            let amb = datum.ambient(f).unwrap();
            for k in 0..n {
                let c = img[o + k];
                if c != 0 {
                    for (x, &col) in out.iter_mut().zip(amb.root_cols[k].iter()) {
                        *x += c * col;
                    }
                }
            }
            out
        };
        match ty {
            DynkinType::A => {
                // e_a itself is not in the root lattice; images of e_a - e_b
                // determine the window instead (handled by the caller).
                unreachable!("type A handled separately");
            }
            DynkinType::B => {
                let mut v = vec![0i64; amb_dim];
                v[a] = 1;
                Ok(image_of_ambient(&v))
            }
            DynkinType::C => {
                let mut v = vec![0i64; amb_dim];
                v[a] = 2;
                let img = image_of_ambient(&v);
                Ok(img.iter().map(|&x| x / 2).collect())
            }
            DynkinType::D => {
                // e_a = ((e_a - e_b) + (e_a + e_b)) / 2 for any b != a.
                let b = if a == 0 { 1 } else { 0 };
                let mut v1 = vec![0i64; amb_dim];
                v1[a] = 1;
                v1[b] = -1;
                let mut v2 = vec![0i64; amb_dim];
                v2[a] = 1;
                v2[b] = 1;
                let (i1, i2) = (image_of_ambient(&v1), image_of_ambient(&v2));
                Ok(i1.iter().zip(&i2).map(|(x, y)| (x + y) / 2).collect())
            }
            DynkinType::E6 | DynkinType::E7 => Err(Error::UnsupportedType(
                "window notation requires a classical factor".into(),
            )),
        }
    };
    match ty {
        DynkinType::A => {
            // Window of length n+1; recover it from the images of
            // e_a - e_{a+1}, which are roots.
            let o = datum.factor_offset(f);
            let mut window = vec![0i64; n + 1];
            let mut tail = 0i64;
            for a in 0..n {
                let mut lat = vec![0i64; datum.rank()];
                lat[o + a] = 1;
                let img = w.apply_to_vector(datum, &lat);
                let r = datum.root_index(&img).expect("image of a root is a root");
                let (_, amb) = datum.ambient_of_root(r).unwrap();
                let pos = amb.iter().position(|&x| x == 1).unwrap() as i64 + 1;
                let neg = amb.iter().position(|&x| x == -1).unwrap() as i64 + 1;
                window[a] = pos;
                tail = neg;
            }
            window[n] = tail;
            if n == 0 {
                window[0] = 1;
            }
            Ok(window)
        }
        DynkinType::B | DynkinType::C | DynkinType::D => {
            let mut window = vec![0i64; n];
            for a in 0..n {
                let img = image_of_e(a)?;
                let j = img.iter().position(|&x| x != 0).expect("signed basis image");
                window[a] = if img[j] > 0 { (j + 1) as i64 } else { -((j + 1) as i64) };
            }
            Ok(window)
        }
        DynkinType::E6 | DynkinType::E7 => Err(Error::UnsupportedType(
            "window notation requires a classical factor".into(),
        )),
    }
}

/// Serializes an element: one-line windows `[2,1,3]` for classical factors
/// (signed entries for C/D, the `2n+1`-window for B), reduced words
/// `s3*s1*s4` for E factors, factors joined by `x`.
pub fn to_notation(datum: &RootDatum, w: &WeylElement) -> String {
    let parts: Vec<String> = (0..datum.factors().len())
        .map(|f| {
            let (ty, n) = datum.factors()[f];
            match ty {
                DynkinType::E6 | DynkinType::E7 => {
                    let o = datum.factor_offset(f);
                    let word: Vec<usize> = w
                        .reduced_word(datum)
                        .into_iter()
                        .filter(|&i| i >= o && i < o + n)
                        .map(|i| i - o)
                        .collect();
                    if word.is_empty() {
                        "e".to_string()
                    } else {
                        word.iter()
                            .map(|i| format!("s{}", i + 1))
                            .collect::<Vec<_>>()
                            .join("*")
                    }
                }
                DynkinType::B => {
                    let signed = factor_window(datum, w, f).unwrap();
                    let m = 2 * n + 1;
                    let mut win = vec![0i64; m];
                    for (a, &v) in signed.iter().enumerate() {
                        let img = if v > 0 { v } else { (m as i64) + 1 + v };
                        win[a] = img;
                        win[m - 1 - a] = (m as i64) + 1 - img;
                    }
                    win[n] = (n + 1) as i64;
                    format!(
                        "[{}]",
                        win.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                    )
                }
                _ => {
                    let win = factor_window(datum, w, f).unwrap();
                    format!(
                        "[{}]",
                        win.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                    )
                }
            }
        })
        .collect();
    parts.join("x")
}

/// Parses the notation produced by [`to_notation`].
pub fn from_notation(datum: &RootDatum, text: &str) -> Result<WeylElement> {
    let parts: Vec<&str> = text.split('x').map(|s| s.trim()).collect();
    if parts.len() != datum.factors().len() {
        return Err(Error::ParseError {
            line: 0,
            msg: format!("expected {} factors, got {}", datum.factors().len(), parts.len()),
        });
    }
    let mut w = WeylElement::identity(datum);
    for (f, part) in parts.iter().enumerate() {
        let (ty, n) = datum.factors()[f];
        let o = datum.factor_offset(f);
        let wf = match ty {
            DynkinType::E6 | DynkinType::E7 => {
                if *part == "e" {
                    WeylElement::identity(datum)
                } else {
                    let word: Result<Vec<usize>> = part
                        .split('*')
                        .map(|tok| {
                            let tok = tok.trim();
                            let Some(num) = tok.strip_prefix('s') else {
                                return Err(Error::ParseError {
                                    line: 0,
                                    msg: format!("bad generator `{tok}`"),
                                });
                            };
                            let i: usize = num.parse().map_err(|_| Error::ParseError {
                                line: 0,
                                msg: format!("bad generator `{tok}`"),
                            })?;
                            if i == 0 || i > n {
                                return Err(Error::IndexOutOfRange(i));
                            }
                            Ok(o + i - 1)
                        })
                        .collect();
                    WeylElement::from_reduced_word(datum, &word?)?
                }
            }
            _ => {
                let inner = part
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| Error::ParseError {
                        line: 0,
                        msg: "window must be bracketed".into(),
                    })?;
                let entries: std::result::Result<Vec<i64>, _> =
                    inner.split(',').map(|x| x.trim().parse::<i64>()).collect();
                let entries = entries.map_err(|_| Error::ParseError {
                    line: 0,
                    msg: "bad window entry".into(),
                })?;
                element_from_window(datum, f, &entries)?
            }
        };
        w = w.mul(datum, &wf)?;
    }
    Ok(w)
}

/// Builds the factor element from a window: a plain permutation window of
/// length `n+1` for type A, a `2n+1` window or a signed window for type B,
/// and a signed window for types C and D.
pub fn element_from_window(datum: &RootDatum, f: usize, window: &[i64]) -> Result<WeylElement> {
    let (ty, n) = datum.factors()[f];
    let _o = datum.factor_offset(f);
    let bad = |msg: &str| Error::ParseError { line: 0, msg: msg.into() };
    // Reduce every variant to the signed images w(e_a) = sign * e_{j(a)}.
    let signed: Vec<i64> = match ty {
        DynkinType::A => {
            if window.len() != n + 1 {
                return Err(bad("type A window must have length rank+1"));
            }
            let mut seen = vec![false; n + 1];
            for &v in window {
                if v < 1 || v > (n + 1) as i64 || seen[(v - 1) as usize] {
                    return Err(bad("window is not a permutation"));
                }
                seen[(v - 1) as usize] = true;
            }
            window.to_vec()
        }
        DynkinType::B if window.len() == 2 * n + 1 => {
            let m = (2 * n + 1) as i64;
            let mut seen = vec![false; 2 * n + 1];
            for &v in window {
                if v < 1 || v > m || seen[(v - 1) as usize] {
                    return Err(bad("window is not a permutation"));
                }
                seen[(v - 1) as usize] = true;
            }
            for a in 0..2 * n + 1 {
                if window[a] + window[2 * n - a] != m + 1 {
                    return Err(bad("window violates w(i)+w(2n+2-i)=2n+2"));
                }
            }
            (0..n)
                .map(|a| {
                    let v = window[a];
                    if v <= n as i64 {
                        v
                    } else {
                        v - m - 1
                    }
                })
                .collect()
        }
        DynkinType::B | DynkinType::C | DynkinType::D => {
            if window.len() != n {
                return Err(bad("signed window must have length rank"));
            }
            let mut seen = vec![false; n];
            for &v in window {
                let a = v.unsigned_abs() as usize;
                if a < 1 || a > n || seen[a - 1] {
                    return Err(bad("window is not a signed permutation"));
                }
                seen[a - 1] = true;
            }
            if ty == DynkinType::D && window.iter().filter(|&&v| v < 0).count() % 2 == 1 {
                return Err(bad("type D window must have an even number of sign changes"));
            }
            window.to_vec()
        }
        DynkinType::E6 | DynkinType::E7 => {
            return Err(Error::UnsupportedType("window notation requires a classical factor".into()));
        }
    };
    // Images of the factor's simple roots in ambient coordinates.
    let amb = datum.ambient(f).expect("classical factor has ambient");
    let image_e = |a: usize| -> (usize, i64) {
        match ty {
            DynkinType::A => ((signed[a] - 1) as usize, 1),
            _ => {
                let v = signed[a];
                ((v.unsigned_abs() - 1) as usize, v.signum())
            }
        }
    };
    let mut total = WeylElement::identity(datum).perm.clone();
    // Build the permutation on the factor's roots from ambient images.
    let mut mapping: HashMap<usize, usize> = HashMap::new();
    for r in 0..datum.num_roots() {
        if datum.factor_of_root(r) != f {
            continue;
        }
        let (_, a) = datum.ambient_of_root(r).unwrap();
        let mut img = vec![0i64; amb.dim];
        for (pos, &c) in a.iter().enumerate() {
            if c != 0 {
                let (j, s) = image_e(pos);
                img[j] += c * s;
            }
        }
        let lat = datum
            .root_from_ambient(f, &img)
            .ok_or_else(|| bad("window image is not a root"))?;
        let ri = datum.root_index(&lat).ok_or_else(|| bad("window image is not a root"))?;
        mapping.insert(r, ri);
    }
    for (r, ri) in mapping {
        total[r] = ri as u32;
    }
    let w = WeylElement { perm: total, datum_id: datum.id() };
    // A valid window yields a bijection; double-check.
    let mut seen = vec![false; w.perm.len()];
    for &x in &w.perm {
        if seen[x as usize] {
            return Err(bad("window does not define a root permutation"));
        }
        seen[x as usize] = true;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::FrobeniusKind;

    fn datum(ty: DynkinType, n: usize) -> RootDatum {
        RootDatum::new(vec![(ty, n)]).unwrap()
    }

    #[test]
    fn simple_reflection_has_length_one() {
        let d = datum(DynkinType::B, 3);
        for i in 0..3 {
            let s = WeylElement::simple(&d, i).unwrap();
            assert_eq!(s.length(&d), 1);
            assert!(s.mul(&d, &s).unwrap().is_identity());
        }
    }

    #[test]
    fn longest_element_lengths() {
        let cases = [
            (DynkinType::A, 3, 6),
            (DynkinType::B, 3, 9),
            (DynkinType::C, 4, 16),
            (DynkinType::D, 4, 12),
            (DynkinType::E6, 6, 36),
        ];
        for (ty, n, len) in cases {
            let d = datum(ty, n);
            let w0 = longest_element(&d);
            assert_eq!(w0.length(&d), len, "{ty}");
            assert!(w0.mul(&d, &w0).unwrap().is_identity());
        }
    }

    #[test]
    fn reduced_word_roundtrip() {
        let d = datum(DynkinType::B, 3);
        let all = enumerate_parabolic(&d, &(0..3).collect(), 100).unwrap();
        assert_eq!(all.len(), 48);
        for w in &all {
            let word = w.reduced_word(&d);
            assert_eq!(word.len(), w.length(&d));
            assert_eq!(&WeylElement::from_reduced_word(&d, &word).unwrap(), w);
        }
    }

    #[test]
    fn coset_reps_count_a3() {
        // |W(A_3)| = 24, |W_I| = 6 for I = {0,1}: four minimal reps.
        let d = datum(DynkinType::A, 3);
        let table = coset_min_reps(&d, &[0, 1].into_iter().collect(), 1000).unwrap();
        assert_eq!(table.reps.len(), 4);
        let mut last = 0;
        for w in &table.reps {
            let l = w.length(&d);
            assert!(l >= last, "sorted by length");
            last = l;
        }
    }

    #[test]
    fn coset_reps_full_group_when_i_empty() {
        let d = datum(DynkinType::B, 2);
        let table = coset_min_reps(&d, &BTreeSet::new(), 100).unwrap();
        assert_eq!(table.reps.len(), 8);
    }

    #[test]
    fn budget_is_enforced() {
        let d = datum(DynkinType::B, 3);
        let err = coset_min_reps(&d, &BTreeSet::new(), 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn bruhat_lifting_matches_subword_a3() {
        let d = datum(DynkinType::A, 3);
        let all = enumerate_parabolic(&d, &(0..3).collect(), 100).unwrap();
        let cache = BruhatCache::new();
        for u in &all {
            for w in &all {
                assert_eq!(
                    cache.leq(&d, u, w),
                    bruhat_leq_subword(&d, u, w),
                    "u={:?} w={:?}",
                    u.reduced_word(&d),
                    w.reduced_word(&d)
                );
            }
        }
    }

    #[test]
    fn lower_neighbors_are_bruhat_covers() {
        let d = datum(DynkinType::B, 3);
        let w0 = longest_element(&d);
        let cache = BruhatCache::new();
        let lower = bruhat_lower_neighbors(&d, &w0);
        assert!(!lower.is_empty());
        for u in &lower {
            assert_eq!(u.length(&d) + 1, w0.length(&d));
            assert!(cache.leq(&d, u, &w0));
        }
    }

    #[test]
    fn frobenius_conjugation_preserves_length() {
        let d = RootDatum::new(vec![(DynkinType::A, 2), (DynkinType::A, 2)]).unwrap();
        let sigma = d.builtin_frobenius(FrobeniusKind::Shift).unwrap();
        let w = WeylElement::from_reduced_word(&d, &[0, 1]).unwrap();
        let sw = apply_frobenius(&d, &sigma, &w);
        assert_eq!(sw.length(&d), w.length(&d));
        assert_eq!(sw.reduced_word(&d), vec![2, 3]);
    }

    #[test]
    fn gl7_window_example() {
        // w = [4,1,2,5,3,6,7] in GL_7 has length 4 and is I-minimal for
        // I = Delta \ {alpha_3}.
        let d = datum(DynkinType::A, 6);
        let w = from_notation(&d, "[4,1,2,5,3,6,7]").unwrap();
        assert_eq!(w.length(&d), 4);
        let i_set: BTreeSet<usize> = [0, 1, 3, 4, 5].into_iter().collect();
        assert!(w.is_min_rep(&d, &i_set));
        assert_eq!(to_notation(&d, &w), "[4,1,2,5,3,6,7]");
    }

    #[test]
    fn window_roundtrip_all_types() {
        for (ty, n) in [
            (DynkinType::A, 3),
            (DynkinType::B, 3),
            (DynkinType::C, 3),
            (DynkinType::D, 4),
        ] {
            let d = datum(ty, n);
            let all = enumerate_parabolic(&d, &(0..n).collect(), 500).unwrap();
            for w in &all {
                let s = to_notation(&d, w);
                let back = from_notation(&d, &s).unwrap();
                assert_eq!(&back, w, "{ty} {s}");
            }
        }
    }

    #[test]
    fn e6_notation_roundtrip() {
        let d = datum(DynkinType::E6, 6);
        let w = WeylElement::from_reduced_word(&d, &[2, 0, 3]).unwrap();
        let s = to_notation(&d, &w);
        assert_eq!(from_notation(&d, &s).unwrap(), w);
    }

    #[test]
    fn bn_window_embeds_in_s2n1() {
        // In B_2 the window of s_2 (the short reflection) is the signed
        // permutation fixing e_1 and negating e_2; as a 2n+1 window it is
        // [1,5,3,2,4] with w(i)+w(2n+2-i)=2n+2... check the constraint.
        let d = datum(DynkinType::B, 2);
        let s2 = WeylElement::simple(&d, 1).unwrap();
        let s = to_notation(&d, &s2);
        let inner: Vec<i64> = s
            .trim_matches(['[', ']'])
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(inner.len(), 5);
        for a in 0..5 {
            assert_eq!(inner[a] + inner[4 - a], 6);
        }
        assert_eq!(from_notation(&d, &s).unwrap(), s2);
    }

    #[test]
    fn odd_sign_d_window_rejected() {
        let d = datum(DynkinType::D, 3);
        assert!(from_notation(&d, "[1,2,-3]").is_err());
        assert!(from_notation(&d, "[1,-2,-3]").is_ok());
    }
}
