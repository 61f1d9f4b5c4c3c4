//! The odd orthogonal computation suite: the `2n` strata representatives
//! `x_j` of `SO(2n+1)` with the minuscule cocharacter, their canonical
//! types, admissible pairs and lower neighbors, signed-permutation Bruhat
//! oracles, Hasse-invariant weights with exact rational arithmetic,
//! Chevalley wall multiplicities and cycle-class coefficients.
//!
//! Elements of `W(B_n)` are handled through their window in `S_{2n+1}`:
//! permutations with `w(i) + w(2n+2-i) = 2n+2`.

use crate::error::Error;
use crate::rootdata::{DynkinType, RootDatum};
use crate::weyl::{self, WeylElement, longest_element, longest_element_parabolic};
use crate::zipdatum::CocharacterDatum;
use crate::Result;
use num::{BigInt, BigRational, One, Zero};
#[cfg(test)]
use num::Signed;
use std::collections::BTreeSet;

/// Recognizes the built-in datum: a single split `B_n` factor with
/// `I = Delta \ {alpha_1}`. Returns `n`.
pub fn bn_split_rank(cd: &CocharacterDatum) -> Option<usize> {
    match cd.datum.factors() {
        [(DynkinType::B, n)] if cd.sigma.is_trivial() => {
            let want: BTreeSet<usize> = (1..*n).collect();
            (cd.i_set == want).then_some(*n)
        }
        _ => None,
    }
}

/// The canonical type `I_j` of `x_j`: `Delta \ {alpha_1,...,alpha_{j+1}}`,
/// symmetric under `j -> 2n-1-j`.
pub fn bn_i_set(n: usize, j: usize) -> BTreeSet<usize> {
    let j = j.min(2 * n - 1 - j);
    (j + 1..n).collect()
}

/// The representative `x_j` of `^IW`, `0 <= j <= 2n-1`.
pub fn bn_xj(datum: &RootDatum, n: usize, j: usize) -> Option<WeylElement> {
    if j > 2 * n - 1 {
        return None;
    }
    let word: Vec<usize> = if j == 2 * n - 1 {
        Vec::new()
    } else if j >= n - 1 {
        // x_{2n-1-i} = s_1 ... s_i with i = 2n-1-j.
        (0..2 * n - 1 - j).collect()
    } else {
        // x_j = s_1 ... s_{n-1} s_n s_{n-1} ... s_{j+1}.
        (0..n).chain((j..n - 1).rev()).collect()
    };
    Some(WeylElement::from_reduced_word(datum, &word).expect("word over Delta"))
}

/// The window `[w(1),...,w(2n+1)]` of `w` in `S_{2n+1}` (1-based values).
pub fn bn_window(datum: &RootDatum, n: usize, w: &WeylElement) -> Vec<usize> {
    let signed = weyl::factor_window(datum, w, 0).expect("B factor");
    let m = 2 * n + 1;
    let mut win = vec![0usize; m];
    win[n] = n + 1;
    for (a, &v) in signed.iter().enumerate() {
        let img = if v > 0 { v as usize } else { (m as i64 + 1 + v) as usize };
        win[a] = img;
        win[m - 1 - a] = m + 1 - img;
    }
    win
}

fn element_from_bn_window(datum: &RootDatum, win: &[usize]) -> Result<WeylElement> {
    let w: Vec<i64> = win.iter().map(|&x| x as i64).collect();
    weyl::element_from_window(datum, 0, &w)
}

/// `l(w) = M(w) + N(w)` computed directly from the window.
pub fn bn_length_formula(n: usize, win: &[usize]) -> usize {
    let mut m_count = 0usize;
    let mut n_count = 0usize;
    for i in 1..=n {
        for j in i..=n {
            if i < j && win[i - 1] > win[j - 1] {
                m_count += 1;
            }
            if win[i - 1] + win[j - 1] > 2 * n + 1 {
                n_count += 1;
            }
        }
    }
    m_count + n_count
}

/// The tableau criterion: `w1 <= w2` iff `r_{w1}(i,j) >= r_{w2}(i,j)` for
/// all `i, j`, where `r_w(i,j) = #{k <= i : w(k) <= j}`.
pub fn bn_rw_leq(win1: &[usize], win2: &[usize]) -> bool {
    let m = win1.len();
    for i in 1..=m {
        let mut r1 = 0usize;
        let mut r2 = 0usize;
        let mut c1 = vec![0usize; m + 1];
        let mut c2 = vec![0usize; m + 1];
        for k in 0..i {
            c1[win1[k]] = 1;
            c2[win2[k]] = 1;
        }
        for j in 1..=m {
            r1 += c1[j];
            r2 += c2[j];
            if r1 < r2 {
                return false;
            }
        }
    }
    true
}

/// The element `t = (i,j)(2n+2-i, 2n+2-j)` of `W` (positions `i, j` not
/// equal to `n+1`).
pub fn bn_transposition(datum: &RootDatum, n: usize, i: usize, j: usize) -> Option<WeylElement> {
    let m = 2 * n + 1;
    if i == j || i == n + 1 || j == n + 1 || i < 1 || j < 1 || i > m || j > m {
        return None;
    }
    let mut win: Vec<usize> = (1..=m).collect();
    win.swap(i - 1, j - 1);
    let (mi, mj) = (m + 1 - i, m + 1 - j);
    if (mi.min(mj), mi.max(mj)) != (i.min(j), i.max(j)) {
        win.swap(mi - 1, mj - 1);
    }
    element_from_bn_window(datum, &win).ok()
}

/// `w_i^{(r)} = x_r t(i, m_r)` with `m_r = 2n+1-r` for `r <= n-1` and
/// `m_r = 2n-r` otherwise.
pub fn bn_wir(datum: &RootDatum, n: usize, r: usize, i: usize) -> Option<WeylElement> {
    if r > 2 * n - 1 {
        return None;
    }
    let m_r = if r <= n - 1 { 2 * n + 1 - r } else { 2 * n - r };
    if i == m_r {
        return None;
    }
    let xr = bn_xj(datum, n, r)?;
    let t = bn_transposition(datum, n, i, m_r)?;
    Some(xr.mul(datum, &t).expect("same datum"))
}

/// Closed form for `Gamma_{I_j}(x_r)` on the range `0 <= j <= r < 2n-1-j`:
/// `{x_{r+1}} ∪ {w_i^{(r)} : 1 <= i <= j}`.
pub fn bn_gamma_oracle(datum: &RootDatum, n: usize, j: usize, r: usize) -> Option<Vec<WeylElement>> {
    if !(j <= r && r < 2 * n - 1 - j) {
        return None;
    }
    let mut out = vec![bn_xj(datum, n, r + 1)?];
    for i in 1..=j {
        out.push(bn_wir(datum, n, r, i)?);
    }
    Some(out)
}

/// Indices `i` with `X_{x_i}` inside the smooth locus of the closure of
/// `X_{x_j}`, as an inclusive range.
pub fn bn_smooth_locus(n: usize, j: usize) -> (usize, usize) {
    if j <= n - 1 {
        (j, 2 * n - 1 - j)
    } else {
        (j, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// `i < j <= n`; root `e_i - e_j`.
    E1,
    /// `i <= n < j` with `w(i), w(j) <= n`; root `e_i + e_{2n+2-j}`.
    E2,
    /// `j = 2n+2-i`; root `e_i`.
    E3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub i: usize,
    pub j: usize,
    pub class: PairClass,
}

/// The admissible pairs of the window, split into the three classes: pairs
/// `(i,j)` with `i < j` (both different from `n+1`), `w(i) > w(j)`, and no
/// intermediate position `k != n+1` with `w(j) < w(k) < w(i)`.
pub fn bn_admissible_pairs(n: usize, win: &[usize]) -> Vec<AdmissiblePair> {
    let m = 2 * n + 1;
    let mut out = Vec::new();
    for i in 1..=m {
        if i == n + 1 {
            continue;
        }
        for j in i + 1..=m {
            if j == n + 1 || win[i - 1] <= win[j - 1] {
                continue;
            }
            let blocked = (i + 1..j)
                .any(|k| k != n + 1 && win[j - 1] < win[k - 1] && win[k - 1] < win[i - 1]);
            if blocked {
                continue;
            }
            let class = if j <= n {
                PairClass::E1
            } else if i <= n && j > n + 1 && win[i - 1] <= n && win[j - 1] <= n {
                PairClass::E2
            } else if i <= n && j == 2 * n + 2 - i {
                PairClass::E3
            } else {
                continue;
            };
            out.push(AdmissiblePair { i, j, class });
        }
    }
    out
}

/// The root `gamma'(i,j)` of a pair, in ambient coordinates.
pub fn bn_pair_root(n: usize, pair: &AdmissiblePair) -> Vec<i64> {
    let mut v = vec![0i64; n];
    match pair.class {
        PairClass::E1 => {
            v[pair.i - 1] = 1;
            v[pair.j - 1] = -1;
        }
        PairClass::E2 => {
            v[pair.i - 1] = 1;
            v[2 * n + 1 - pair.j] = 1;
        }
        PairClass::E3 => {
            v[pair.i - 1] = 1;
        }
    }
    v
}

/// The Bruhat-lower neighbor attached to a pair: `w s_{gamma'(i,j)}`.
pub fn bn_pair_neighbor(
    datum: &RootDatum,
    n: usize,
    w: &WeylElement,
    pair: &AdmissiblePair,
) -> WeylElement {
    let amb = bn_pair_root(n, pair);
    let lat = datum.root_from_ambient(0, &amb).expect("gamma' is a root");
    let r = datum.root_index(&lat).expect("gamma' is a root");
    let s = WeylElement::reflection(datum, r).expect("valid index");
    w.mul(datum, &s).expect("same datum")
}

/// Exact data of the reduced Hasse invariant on the closure of `X_{x_j}`:
/// the weight `m_j`, the solved character `eta` and the Chevalley wall
/// multiplicities.
#[derive(Debug, Clone)]
pub struct HasseData {
    pub n: usize,
    pub j: usize,
    pub p: u64,
    /// The Hasse weight: the least `m >= 1` making `eta` integral.
    pub m: BigInt,
    /// Solution of `eta - p (z xtilde_j^{-1}) eta = m eta_omega`.
    pub eta: Vec<BigInt>,
    /// `-<xtilde_j^{-1} eta, beta^vee>` on the next wall.
    pub next_wall_multiplicity: BigRational,
    /// `-<xtilde_j^{-1} eta, alpha^vee>` for each simple root of `I_j`.
    pub ij_wall_multiplicities: Vec<BigRational>,
}

/// Pushes a character along the signed window of a group element:
/// `w . lambda = sum_a lambda_a w(e_a)`.
fn push_char(win: &[i64], v: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); v.len()];
    for (a, &img) in win.iter().enumerate() {
        let b = img.unsigned_abs() as usize - 1;
        if img > 0 {
            out[b] += &v[a];
        } else {
            out[b] -= &v[a];
        }
    }
    out
}

fn dot(v: &[BigRational], w: &[i64]) -> BigRational {
    v.iter()
        .zip(w)
        .map(|(x, &y)| x * BigRational::from_integer(BigInt::from(y)))
        .sum()
}

/// Solves the square system `a x = rhs` exactly; the systems here are
/// invertible by construction.
fn solve_rational(mut a: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Vec<BigRational> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("system is invertible");
        a.swap(col, piv);
        rhs.swap(col, piv);
        let inv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &inv;
        }
        rhs[col] /= &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
                let sub = &f * &rhs[col];
                rhs[r] -= sub;
            }
        }
    }
    rhs
}

/// `xtilde_j = x_j w_{0,I_j}`.
pub fn bn_xtilde(datum: &RootDatum, n: usize, j: usize) -> Option<WeylElement> {
    let xj = bn_xj(datum, n, j)?;
    let w0ij = longest_element_parabolic(datum, &bn_i_set(n, j)).ok()?;
    Some(xj.mul(datum, &w0ij).expect("same datum"))
}

/// Solves Eq. `eta - p (z xtilde_j^{-1}) eta = m eta_omega` for the
/// built-in `B_n` datum, with `eta_omega = (-1, 0, ..., 0)`, picking the
/// least weight `m` that makes `eta` integral.
pub fn bn_hasse_data(datum: &RootDatum, n: usize, j: usize, p: u64) -> Result<HasseData> {
    if datum.factors() != [(DynkinType::B, n)] {
        return Err(Error::UnsupportedType("Hasse data requires a single B_n factor".into()));
    }
    if j > n - 1 {
        return Err(Error::RangeViolation(format!("j must be at most n-1, got {j}")));
    }
    let w0 = longest_element(datum);
    let w0i = longest_element_parabolic(datum, &(1..n).collect())?;
    let z = w0i.mul(datum, &w0).expect("same datum");
    let xt = bn_xtilde(datum, n, j).expect("j in range");
    let u = z.mul(datum, &xt.inverse()).expect("same datum");
    let u_win = weyl::factor_window(datum, &u, 0)?;

    // Assemble I - p U column by column.
    let pq = BigRational::from_integer(BigInt::from(p));
    let mut a = vec![vec![BigRational::zero(); n]; n];
    for col in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[col] = BigRational::one();
        let img = push_char(&u_win, &e);
        for row in 0..n {
            a[row][col] = -&pq * &img[row];
        }
        a[col][col] += BigRational::one();
    }
    let mut rhs = vec![BigRational::zero(); n];
    rhs[0] = -BigRational::one();
    let eta1 = solve_rational(a, rhs);

    // Least m >= 1 with m * eta1 integral.
    let mut m = BigInt::one();
    for x in &eta1 {
        let d = x.denom();
        let g = num::Integer::gcd(&m, d);
        m = &m / &g * d;
    }
    let eta: Vec<BigInt> = eta1
        .iter()
        .map(|x| {
            let v = x * BigRational::from_integer(m.clone());
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();

    // Residual check of the defining equation with the chosen m.
    let eta_q: Vec<BigRational> =
        eta.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let pushed = push_char(&u_win, &eta_q);
    for row in 0..n {
        let expect = if row == 0 {
            -BigRational::from_integer(m.clone())
        } else {
            BigRational::zero()
        };
        let got = &eta_q[row] - &pq * &pushed[row];
        if got != expect {
            return Err(Error::RangeViolation("Hasse character residual is nonzero".into()));
        }
    }

    // Wall multiplicities: -<xtilde^{-1} eta, beta^vee> with honest coroots
    // ((e_i - e_k)^vee = e_i - e_k, e_i^vee = 2 e_i).
    let xt_inv_win = weyl::factor_window(datum, &xt.inverse(), 0)?;
    let shifted = push_char(&xt_inv_win, &eta_q);
    let mut beta_cv = vec![0i64; n];
    if j <= n - 2 {
        beta_cv[j] = 1;
        beta_cv[j + 1] = -1;
    } else {
        beta_cv[n - 1] = 2;
    }
    let next_wall_multiplicity = -dot(&shifted, &beta_cv);
    let ij_wall_multiplicities: Vec<BigRational> = bn_i_set(n, j)
        .iter()
        .map(|&i| {
            let mut cv = vec![0i64; n];
            if i == n - 1 {
                cv[n - 1] = 2;
            } else {
                cv[i] = 1;
                cv[i + 1] = -1;
            }
            -dot(&shifted, &cv)
        })
        .collect();

    Ok(HasseData { n, j, p, m, eta, next_wall_multiplicity, ij_wall_multiplicities })
}

/// The coefficient `prod_{i=1}^{j} (p^i - 1)` of the cycle class of the
/// closure of `X_{x_j}`.
pub fn cycle_class_coefficient(j: usize, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut out = BigInt::one();
    let mut pi = BigInt::one();
    for _ in 1..=j {
        pi *= &p;
        out *= &pi - BigInt::one();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::FrobeniusKind;
    use crate::weyl::BruhatCache;

    fn bn(n: usize) -> RootDatum {
        RootDatum::new(vec![(DynkinType::B, n)]).unwrap()
    }

    fn bn_cd(n: usize) -> CocharacterDatum {
        let datum = bn(n);
        let sigma = datum.builtin_frobenius(FrobeniusKind::Trivial).unwrap();
        CocharacterDatum::new(datum, (1..n).collect(), sigma).unwrap()
    }

    #[test]
    fn xj_lengths_and_minimality() {
        for n in 2..=5 {
            let cd = bn_cd(n);
            for j in 0..2 * n {
                let xj = bn_xj(&cd.datum, n, j).unwrap();
                assert_eq!(xj.length(&cd.datum), 2 * n - 1 - j, "n={n} j={j}");
                assert!(xj.is_min_rep(&cd.datum, &cd.i_set));
            }
            // ^IW has exactly 2n elements: the x_j exhaust it.
            let table = weyl::coset_min_reps(&cd.datum, &cd.i_set, 100_000).unwrap();
            assert_eq!(table.reps.len(), 2 * n);
        }
    }

    #[test]
    fn x0_window_matches_matrix() {
        let d = bn(3);
        let x0 = bn_xj(&d, 3, 0).unwrap();
        assert_eq!(bn_window(&d, 3, &x0), vec![7, 2, 3, 4, 5, 6, 1]);
    }

    #[test]
    fn window_constraint_and_roundtrip() {
        let d = bn(3);
        let all = weyl::enumerate_parabolic(&d, &(0..3).collect(), 100).unwrap();
        for w in &all {
            let win = bn_window(&d, 3, w);
            for a in 1..=7 {
                assert_eq!(win[a - 1] + win[7 - a], 8);
            }
            assert_eq!(&element_from_bn_window(&d, &win).unwrap(), w);
            assert_eq!(bn_length_formula(3, &win), w.length(&d));
        }
    }

    #[test]
    fn rw_criterion_matches_lifting_on_b3() {
        let d = bn(3);
        let all = weyl::enumerate_parabolic(&d, &(0..3).collect(), 100).unwrap();
        let cache = BruhatCache::new();
        for u in &all {
            for w in &all {
                let by_rw = bn_rw_leq(&bn_window(&d, 3, u), &bn_window(&d, 3, w));
                assert_eq!(by_rw, cache.leq(&d, u, w));
            }
        }
    }

    #[test]
    fn canonical_types_of_xj() {
        for n in 2..=4 {
            let cd = bn_cd(n);
            for j in 0..2 * n {
                let xj = bn_xj(&cd.datum, n, j).unwrap();
                let ct = crate::canonical::canonical_type(&cd, &xj).unwrap();
                assert_eq!(ct.i_w, bn_i_set(n, j), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn gamma_oracle_matches_engine() {
        for n in 2..=3 {
            let cd = bn_cd(n);
            for j in 0..n {
                for r in j..(2 * n - 1 - j) {
                    let i0 = bn_i_set(n, j);
                    let xr = bn_xj(&cd.datum, n, r).unwrap();
                    let engine: BTreeSet<Vec<u32>> = cd
                        .lower_neighbors(&i0, &xr)
                        .unwrap()
                        .into_iter()
                        .map(|(w, _)| w.perm().to_vec())
                        .collect();
                    let oracle: BTreeSet<Vec<u32>> = bn_gamma_oracle(&cd.datum, n, j, r)
                        .unwrap()
                        .into_iter()
                        .map(|w| w.perm().to_vec())
                        .collect();
                    assert_eq!(engine, oracle, "n={n} j={j} r={r}");
                    assert_eq!(engine.len(), j + 1);
                }
            }
        }
    }

    #[test]
    fn admissible_pairs_biject_with_bruhat_covers() {
        // Exhaustive over W(B_3); the acceptance suite repeats this on B_4.
        let d = bn(3);
        let all = weyl::enumerate_parabolic(&d, &(0..3).collect(), 100).unwrap();
        for w in &all {
            let win = bn_window(&d, 3, w);
            let pairs = bn_admissible_pairs(3, &win);
            let from_pairs: BTreeSet<Vec<u32>> = pairs
                .iter()
                .map(|p| bn_pair_neighbor(&d, 3, w, p).perm().to_vec())
                .collect();
            assert_eq!(from_pairs.len(), pairs.len(), "gamma' is injective");
            let covers: BTreeSet<Vec<u32>> = weyl::bruhat_lower_neighbors(&d, w)
                .into_iter()
                .map(|u| u.perm().to_vec())
                .collect();
            assert_eq!(from_pairs, covers, "w = {win:?}");
        }
    }

    #[test]
    fn hasse_weight_and_eta_formula() {
        for n in 2..=4usize {
            let d = bn(n);
            for j in 0..n {
                for p in [2u64, 3, 5] {
                    let h = bn_hasse_data(&d, n, j, p).unwrap();
                    let expect_m = BigInt::from(p.pow(j as u32 + 1) - 1);
                    assert_eq!(h.m, expect_m, "n={n} j={j} p={p}");
                    // eta = (1, -p^j, ..., -p, 0, ..., 0).
                    let mut expect = vec![BigInt::zero(); n];
                    expect[0] = BigInt::one();
                    for k in 1..=j {
                        expect[k] = -BigInt::from(p.pow((j - k + 1) as u32));
                    }
                    assert_eq!(h.eta, expect, "n={n} j={j} p={p}");
                    for mult in &h.ij_wall_multiplicities {
                        assert!(mult.is_zero());
                    }
                    let one = BigRational::one();
                    if j <= n - 2 {
                        assert_eq!(h.next_wall_multiplicity, one);
                    } else {
                        // Short-root wall: the honest coroot is 2 e_n.
                        assert_eq!(h.next_wall_multiplicity, &one + &one);
                    }
                    assert!(h.next_wall_multiplicity.is_positive());
                }
            }
        }
    }

    #[test]
    fn cycle_class_small_values() {
        assert_eq!(cycle_class_coefficient(0, 5), BigInt::one());
        assert_eq!(cycle_class_coefficient(1, 2), BigInt::from(1));
        assert_eq!(cycle_class_coefficient(2, 2), BigInt::from(3));
        assert_eq!(cycle_class_coefficient(3, 3), BigInt::from(2 * 8 * 26));
    }

    #[test]
    fn smooth_locus_table() {
        assert_eq!(bn_smooth_locus(3, 0), (0, 5));
        assert_eq!(bn_smooth_locus(3, 2), (2, 3));
        assert_eq!(bn_smooth_locus(3, 4), (4, 4));
    }
}
