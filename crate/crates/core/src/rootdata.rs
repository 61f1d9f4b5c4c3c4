//! Finite root systems of types A, B, C, D, E6, E7, including disjoint
//! unions arising from Weil restriction, with diagram automorphisms.
//!
//! Roots are stored as integer vectors in the simple-root basis, one uniform
//! representation for all types. Classical factors additionally carry an
//! ambient (orthonormal `e_i`) coordinate overlay used by the weight
//! arithmetic of the odd-orthogonal suite and by window notation.

use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

static NEXT_DATUM_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    E6,
    E7,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A => write!(f, "A"),
            DynkinType::B => write!(f, "B"),
            DynkinType::C => write!(f, "C"),
            DynkinType::D => write!(f, "D"),
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
        }
    }
}

/// Ambient (Bourbaki) coordinates for one classical factor: the columns of
/// `root_cols` are the ambient coordinates of the factor's simple roots, and
/// `coroot_cols` the ambient coordinates of the simple coroots.
#[derive(Debug, Clone)]
pub struct Ambient {
    pub dim: usize,
    pub root_cols: Vec<Vec<i64>>,
    pub coroot_cols: Vec<Vec<i64>>,
}

/// A finite (possibly reducible) root system.
#[derive(Debug)]
pub struct RootDatum {
    id: u64,
    factors: Vec<(DynkinType, usize)>,
    factor_offsets: Vec<usize>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// All roots, positives first; the negative of root `r` is `r ± n_pos`.
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    n_pos: usize,
    root_index: HashMap<Vec<i64>, usize>,
    /// For each simple `i`, the permutation of root indices under `s_i`.
    simple_perms: Vec<Vec<u32>>,
    ambient: Vec<Option<Ambient>>,
    reflection_perms: OnceLock<Vec<Vec<u32>>>,
}

fn cartan_block(ty: DynkinType, n: usize) -> Result<Vec<Vec<i64>>> {
    let chain = |n: usize| {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    };
    match ty {
        DynkinType::A => {
            if n < 1 {
                return Err(Error::RankOutOfRange { ty: "A".into(), rank: n });
            }
            Ok(chain(n))
        }
        DynkinType::B => {
            if n < 2 {
                return Err(Error::RankOutOfRange { ty: "B".into(), rank: n });
            }
            let mut a = chain(n);
            // alpha_n is short: <alpha_{n-1}, alpha_n^vee> = -2.
            a[n - 1][n - 2] = -2;
            Ok(a)
        }
        DynkinType::C => {
            if n < 2 {
                return Err(Error::RankOutOfRange { ty: "C".into(), rank: n });
            }
            let mut a = chain(n);
            a[n - 2][n - 1] = -2;
            Ok(a)
        }
        DynkinType::D => {
            if n < 2 {
                return Err(Error::RankOutOfRange { ty: "D".into(), rank: n });
            }
            let mut a = chain(n);
            if n >= 3 {
                // Nodes n-1 and n both attach to n-2; no edge between them.
                a[n - 1][n - 2] = 0;
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 3] = -1;
                a[n - 3][n - 1] = -1;
            } else {
                // D_2 = A_1 x A_1.
                a[0][1] = 0;
                a[1][0] = 0;
            }
            Ok(a)
        }
        DynkinType::E6 | DynkinType::E7 => {
            let want = if ty == DynkinType::E6 { 6 } else { 7 };
            if n != want {
                return Err(Error::RankOutOfRange { ty: ty.to_string(), rank: n });
            }
            // Bourbaki numbering: chain 1-3-4-5-6(-7), node 2 attached to 4.
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
            }
            let mut edge = |i: usize, j: usize| {
                a[i - 1][j - 1] = -1;
                a[j - 1][i - 1] = -1;
            };
            edge(1, 3);
            edge(3, 4);
            edge(4, 5);
            edge(5, 6);
            edge(2, 4);
            if want == 7 {
                edge(6, 7);
            }
            Ok(a)
        }
    }
}

fn ambient_block(ty: DynkinType, n: usize) -> Option<Ambient> {
    let e = |dim: usize, entries: &[(usize, i64)]| {
        let mut v = vec![0i64; dim];
        for &(i, c) in entries {
            v[i] = c;
        }
        v
    };
    match ty {
        DynkinType::A => {
            // A_n lives in Z^{n+1}: alpha_i = e_i - e_{i+1}.
            let dim = n + 1;
            let cols: Vec<_> = (0..n).map(|i| e(dim, &[(i, 1), (i + 1, -1)])).collect();
            Some(Ambient { dim, root_cols: cols.clone(), coroot_cols: cols })
        }
        DynkinType::B => {
            let dim = n;
            let mut cols: Vec<_> = (0..n - 1).map(|i| e(dim, &[(i, 1), (i + 1, -1)])).collect();
            cols.push(e(dim, &[(n - 1, 1)]));
            let mut cocols = cols.clone();
            cocols[n - 1] = e(dim, &[(n - 1, 2)]);
            Some(Ambient { dim, root_cols: cols, coroot_cols: cocols })
        }
        DynkinType::C => {
            let dim = n;
            let mut cols: Vec<_> = (0..n - 1).map(|i| e(dim, &[(i, 1), (i + 1, -1)])).collect();
            cols.push(e(dim, &[(n - 1, 2)]));
            let mut cocols = cols.clone();
            cocols[n - 1] = e(dim, &[(n - 1, 1)]);
            Some(Ambient { dim, root_cols: cols, coroot_cols: cocols })
        }
        DynkinType::D => {
            let dim = n;
            let mut cols: Vec<_> = (0..n - 1).map(|i| e(dim, &[(i, 1), (i + 1, -1)])).collect();
            cols.push(e(dim, &[(n - 2, 1), (n - 1, 1)]));
            Some(Ambient { dim, root_cols: cols.clone(), coroot_cols: cols })
        }
        DynkinType::E6 | DynkinType::E7 => None,
    }
}

impl RootDatum {
    /// Builds the root system for a sequence of factors (`d` copies for a
    /// Weil restriction). Roots are generated as the orbit of the simple
    /// roots under the simple reflections.
    pub fn new(factors: Vec<(DynkinType, usize)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::UnsupportedType("empty factor list".into()));
        }
        let mut factor_offsets = Vec::with_capacity(factors.len());
        let mut rank = 0;
        for &(_, n) in &factors {
            factor_offsets.push(rank);
            rank += n;
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut ambient = Vec::with_capacity(factors.len());
        for (f, &(ty, n)) in factors.iter().enumerate() {
            let block = cartan_block(ty, n)?;
            let o = factor_offsets[f];
            for i in 0..n {
                for j in 0..n {
                    cartan[o + i][o + j] = block[i][j];
                }
            }
            ambient.push(ambient_block(ty, n));
        }

        // Closure of the simple (root, coroot) pairs under simple reflections.
        let reflect_root = |cartan: &Vec<Vec<i64>>, i: usize, v: &[i64]| {
            let mut out = v.to_vec();
            let pair: i64 = (0..v.len()).map(|j| cartan[i][j] * v[j]).sum();
            out[i] -= pair;
            out
        };
        let reflect_coroot = |cartan: &Vec<Vec<i64>>, i: usize, c: &[i64]| {
            let mut out = c.to_vec();
            let pair: i64 = (0..c.len()).map(|j| cartan[j][i] * c[j]).sum();
            out[i] -= pair;
            out
        };
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..rank {
            let mut v = vec![0i64; rank];
            v[i] = 1;
            seen.insert(v.clone(), v.clone());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            let c = seen[&v].clone();
            for i in 0..rank {
                let rv = reflect_root(&cartan, i, &v);
                if !seen.contains_key(&rv) {
                    let rc = reflect_coroot(&cartan, i, &c);
                    seen.insert(rv.clone(), rc);
                    queue.push(rv);
                }
            }
        }

        let mut positives: Vec<Vec<i64>> =
            seen.keys().filter(|v| v.iter().all(|&x| x >= 0)).cloned().collect();
        // Reverse-lexicographic tie-break puts `alpha_i` at index `i` among
        // the height-one roots.
        positives.sort_by_key(|v| (v.iter().sum::<i64>(), std::cmp::Reverse(v.clone())));
        let n_pos = positives.len();
        debug_assert_eq!(n_pos * 2, seen.len());
        let mut roots = positives;
        for r in 0..n_pos {
            let neg: Vec<i64> = roots[r].iter().map(|&x| -x).collect();
            roots.push(neg);
        }
        let coroots: Vec<Vec<i64>> = roots.iter().map(|v| seen[v].clone()).collect();
        let root_index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();

        let simple_perms = (0..rank)
            .map(|i| {
                roots
                    .iter()
                    .map(|v| root_index[&reflect_root(&cartan, i, v)] as u32)
                    .collect()
            })
            .collect();

        let datum = RootDatum {
            id: NEXT_DATUM_ID.fetch_add(1, Ordering::Relaxed),
            factors,
            factor_offsets,
            rank,
            cartan,
            roots,
            coroots,
            n_pos,
            root_index,
            simple_perms,
            ambient,
            reflection_perms: OnceLock::new(),
        };
        debug_assert!(datum.validate());
        Ok(datum)
    }

    fn validate(&self) -> bool {
        for i in 0..self.rank {
            if self.cartan[i][i] != 2 {
                return false;
            }
            for j in 0..self.rank {
                if i != j && self.cartan[i][j] > 0 {
                    return false;
                }
            }
        }
        self.roots.iter().all(|v| {
            v.iter().all(|&x| x >= 0) || v.iter().all(|&x| x <= 0)
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[(DynkinType, usize)] {
        &self.factors
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn root(&self, r: usize) -> &[i64] {
        &self.roots[r]
    }

    pub fn coroot(&self, r: usize) -> &[i64] {
        &self.coroots[r]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.root_index.get(v).copied()
    }

    pub fn is_positive(&self, r: usize) -> bool {
        r < self.n_pos
    }

    /// Index of `-beta_r`.
    pub fn neg(&self, r: usize) -> usize {
        if r < self.n_pos {
            r + self.n_pos
        } else {
            r - self.n_pos
        }
    }

    /// Index of the positive root in `{beta_r, -beta_r}`.
    pub fn positive_of(&self, r: usize) -> usize {
        if r < self.n_pos {
            r
        } else {
            r - self.n_pos
        }
    }

    /// `s_i(v) = v - <v, alpha_i^vee> alpha_i` on simple-root-basis vectors.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Result<Vec<i64>> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange(i));
        }
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        let mut out = v.to_vec();
        let pair: i64 = (0..self.rank).map(|j| self.cartan[i][j] * v[j]).sum();
        out[i] -= pair;
        Ok(out)
    }

    /// Exact pairing `<lambda, cv>` of a simple-root-basis weight with a
    /// simple-coroot-basis covector.
    pub fn pairing(&self, lambda: &[i64], cv: &[i64]) -> Result<i64> {
        if lambda.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: lambda.len() });
        }
        if cv.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: cv.len() });
        }
        let mut acc = 0i64;
        for i in 0..self.rank {
            if cv[i] != 0 {
                let row: i64 = (0..self.rank).map(|j| self.cartan[i][j] * lambda[j]).sum();
                acc += cv[i] * row;
            }
        }
        Ok(acc)
    }

    /// `<beta_r, beta_c^vee>` for two root indices.
    pub fn pairing_roots(&self, r: usize, c: usize) -> i64 {
        self.pairing(&self.roots[r], &self.coroots[c]).expect("index in range")
    }

    pub fn simple_perm(&self, i: usize) -> &[u32] {
        &self.simple_perms[i]
    }

    /// Permutation of the root set under the reflection `s_beta` for the
    /// positive root with index `r`. Built lazily for all positive roots.
    pub fn reflection_perm(&self, r: usize) -> &[u32] {
        let all = self.reflection_perms.get_or_init(|| {
            (0..self.n_pos)
                .map(|b| {
                    self.roots
                        .iter()
                        .map(|v| {
                            let pair = self.pairing(v, &self.coroots[b]).unwrap();
                            let img: Vec<i64> = (0..self.rank)
                                .map(|j| v[j] - pair * self.roots[b][j])
                                .collect();
                            self.root_index[&img] as u32
                        })
                        .collect()
                })
                .collect()
        });
        &all[self.positive_of(r)]
    }

    pub fn factor_of_simple(&self, i: usize) -> usize {
        let mut f = 0;
        while f + 1 < self.factors.len() && i >= self.factor_offsets[f + 1] {
            f += 1;
        }
        f
    }

    pub fn factor_of_root(&self, r: usize) -> usize {
        let v = &self.roots[r];
        let i = v.iter().position(|&x| x != 0).expect("root is nonzero");
        self.factor_of_simple(i)
    }

    pub fn factor_offset(&self, f: usize) -> usize {
        self.factor_offsets[f]
    }

    pub fn ambient(&self, f: usize) -> Option<&Ambient> {
        self.ambient[f].as_ref()
    }

    /// Ambient coordinates of a root, together with its factor.
    pub fn ambient_of_root(&self, r: usize) -> Option<(usize, Vec<i64>)> {
        let f = self.factor_of_root(r);
        let amb = self.ambient[f].as_ref()?;
        Some((f, self.factor_to_ambient(f, amb, &self.roots[r])))
    }

    pub fn ambient_of_coroot(&self, r: usize) -> Option<(usize, Vec<i64>)> {
        let f = self.factor_of_root(r);
        let amb = self.ambient[f].as_ref()?;
        let o = self.factor_offsets[f];
        let n = self.factors[f].1;
        let mut out = vec![0i64; amb.dim];
        for k in 0..n {
            let c = self.coroots[r][o + k];
            if c != 0 {
                for (x, col) in out.iter_mut().zip(amb.coroot_cols[k].iter().map(|&v| v)) {
                    *x += c * col;
                }
            }
        }
        Some((f, out))
    }

    fn factor_to_ambient(&self, f: usize, amb: &Ambient, v: &[i64]) -> Vec<i64> {
        let o = self.factor_offsets[f];
        let n = self.factors[f].1;
        let mut out = vec![0i64; amb.dim];
        for k in 0..n {
            let c = v[o + k];
            if c != 0 {
                for (x, &col) in out.iter_mut().zip(amb.root_cols[k].iter()) {
                    *x += c * col;
                }
            }
        }
        out
    }

    /// Inverts the ambient overlay on the root lattice of factor `f`:
    /// returns the global simple-root-basis vector, or `None` when `a` is
    /// not in the factor's root lattice.
    pub fn root_from_ambient(&self, f: usize, a: &[i64]) -> Option<Vec<i64>> {
        let amb = self.ambient[f].as_ref()?;
        if a.len() != amb.dim {
            return None;
        }
        let n = self.factors[f].1;
        // Solve root_cols * x = a exactly over Q by Gaussian elimination.
        let mut m: Vec<Vec<num::Rational64>> = (0..amb.dim)
            .map(|row| {
                (0..n)
                    .map(|col| num::Rational64::from_integer(amb.root_cols[col][row]))
                    .chain(std::iter::once(num::Rational64::from_integer(a[row])))
                    .collect()
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..n {
            let Some(r) = (pivot_row..amb.dim).find(|&r| m[r][col] != num::Rational64::from_integer(0)) else {
                return None;
            };
            m.swap(pivot_row, r);
            let inv = m[pivot_row][col];
            for x in m[pivot_row].iter_mut() {
                *x /= inv;
            }
            for r2 in 0..amb.dim {
                if r2 != pivot_row && m[r2][col] != num::Rational64::from_integer(0) {
                    let factor = m[r2][col];
                    for c2 in 0..=n {
                        let sub = factor * m[pivot_row][c2];
                        m[r2][c2] -= sub;
                    }
                }
            }
            pivots.push(pivot_row);
            pivot_row += 1;
            if pivot_row > amb.dim {
                break;
            }
        }
        // Consistency: zero rows must have zero rhs.
        for r in pivot_row..amb.dim {
            if m[r][n] != num::Rational64::from_integer(0) {
                return None;
            }
        }
        let mut out = vec![0i64; self.rank];
        let o = self.factor_offsets[f];
        for (col, &pr) in pivots.iter().enumerate() {
            let val = m[pr][n];
            if !val.is_integer() {
                return None;
            }
            out[o + col] = val.to_integer();
        }
        Some(out)
    }

    /// The permutation of the whole root set induced by a diagram
    /// automorphism.
    pub fn sigma_root_perm(&self, sigma: &FrobeniusAction) -> Vec<u32> {
        self.roots
            .iter()
            .map(|v| {
                let mut img = vec![0i64; self.rank];
                for i in 0..self.rank {
                    img[sigma.perm[i]] = v[i];
                }
                self.root_index[&img] as u32
            })
            .collect()
    }

    pub fn builtin_frobenius(&self, kind: FrobeniusKind) -> Result<FrobeniusAction> {
        let d = self.factors.len();
        let perm: Vec<usize> = match &kind {
            FrobeniusKind::Trivial => (0..self.rank).collect(),
            FrobeniusKind::Custom(p) => p.clone(),
            FrobeniusKind::Shift | FrobeniusKind::UnitaryShift | FrobeniusKind::DSwap
            | FrobeniusKind::E6Flip => {
                if self.factors.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::IncompatibleKind(
                        "factor shift requires identical factors".into(),
                    ));
                }
                let (ty, n) = self.factors[0];
                let local: Box<dyn Fn(usize, usize) -> usize> = match &kind {
                    FrobeniusKind::Shift => Box::new(|_f, l| l),
                    FrobeniusKind::UnitaryShift => {
                        if ty != DynkinType::A {
                            return Err(Error::IncompatibleKind(
                                "unitary shift requires type A factors".into(),
                            ));
                        }
                        // The wrap-around factor carries the duality flip.
                        Box::new(move |f, l| if f == d - 1 { n - 1 - l } else { l })
                    }
                    FrobeniusKind::DSwap => {
                        if ty != DynkinType::D {
                            return Err(Error::IncompatibleKind(
                                "D-swap requires type D factors".into(),
                            ));
                        }
                        Box::new(move |f, l| {
                            if f == d - 1 && l >= n - 2 {
                                2 * n - 3 - l
                            } else {
                                l
                            }
                        })
                    }
                    FrobeniusKind::E6Flip => {
                        if ty != DynkinType::E6 {
                            return Err(Error::IncompatibleKind(
                                "E6 flip requires type E6 factors".into(),
                            ));
                        }
                        const TAU: [usize; 6] = [5, 1, 4, 3, 2, 0];
                        Box::new(move |f, l| if f == d - 1 { TAU[l] } else { l })
                    }
                    _ => unreachable!(),
                };
                let mut p = vec![0usize; self.rank];
                for f in 0..d {
                    let o = self.factor_offsets[f];
                    let target = self.factor_offsets[(f + 1) % d];
                    let n_f = self.factors[f].1;
                    for l in 0..n_f {
                        p[o + l] = target + local(f, l);
                    }
                }
                p
            }
        };
        FrobeniusAction::new(self, perm, kind)
    }
}

/// A diagram automorphism of the datum, encoding the Frobenius action.
#[derive(Debug, Clone)]
pub struct FrobeniusAction {
    pub perm: Vec<usize>,
    pub kind: FrobeniusKind,
    datum_id: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusKind {
    Trivial,
    /// Cyclic factor shift (split Weil restriction).
    Shift,
    /// Cyclic factor shift with the duality flip on the wrap-around factor.
    UnitaryShift,
    /// Cyclic factor shift with the fork swap on the wrap-around D factor.
    DSwap,
    /// Cyclic factor shift with the diagram involution on the wrap-around
    /// E6 factor.
    E6Flip,
    Custom(Vec<usize>),
}

impl FrobeniusAction {
    pub fn new(datum: &RootDatum, perm: Vec<usize>, kind: FrobeniusKind) -> Result<Self> {
        let n = datum.rank();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || seen[i] {
                return Err(Error::IncompatibleKind("not a permutation of Delta".into()));
            }
            seen[i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if datum.cartan[perm[i]][perm[j]] != datum.cartan[i][j] {
                    return Err(Error::IncompatibleKind(
                        "permutation does not preserve the Cartan matrix".into(),
                    ));
                }
            }
        }
        Ok(FrobeniusAction { perm, kind, datum_id: datum.id() })
    }

    pub fn trivial(datum: &RootDatum) -> Self {
        FrobeniusAction {
            perm: (0..datum.rank()).collect(),
            kind: FrobeniusKind::Trivial,
            datum_id: datum.id(),
        }
    }

    pub fn datum_id(&self) -> u64 {
        self.datum_id
    }

    pub fn is_trivial(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The order of the permutation.
    pub fn order(&self) -> usize {
        let n = self.perm.len();
        let mut ord = 1usize;
        let mut cur: Vec<usize> = self.perm.clone();
        while (0..n).any(|i| cur[i] != i) {
            cur = cur.iter().map(|&i| self.perm[i]).collect();
            ord += 1;
        }
        ord
    }

    /// Applies the automorphism to a set of simple-root indices.
    pub fn apply_set(&self, s: &std::collections::BTreeSet<usize>) -> std::collections::BTreeSet<usize> {
        s.iter().map(|&i| self.perm[i]).collect()
    }
}

/// The `form=` field of a datum specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Split,
    Unitary,
}

/// Parsed datum specification.
///
/// Text format, one `key=value` per line (`;` also accepted as a line
/// separator), unknown keys rejected:
///
/// ```text
/// type=A|B|C|D|E6|E7
/// rank=<Dynkin rank; fixed for E types>
/// d=<number of Weil-restriction copies, default 1>
/// form=split|unitary (default split)
/// frobenius=trivial|shift|unitary-shift|d-swap|e6-flip|custom:<1-based images>
/// signature=r_1,...,r_d
/// ```
///
/// For type A factors the signature entry `r_i` is the cocharacter signature
/// (`I_i = Delta_i \ {alpha_{r_i}}` when `0 < r_i < rank+1`). For types
/// B/C/D/E the entry is the 1-based index of the factor's non-compact simple
/// root, `0` marking a compact factor; when omitted it defaults to the
/// minuscule node (B: 1, C: n, D: 1, E6: 1, E7: 7).
#[derive(Debug, Clone)]
pub struct DatumSpec {
    pub ty: DynkinType,
    pub rank: usize,
    pub d: usize,
    pub form: Form,
    pub frobenius: Option<FrobeniusKind>,
    pub signature: Option<Vec<usize>>,
}

impl DatumSpec {
    pub fn new(ty: DynkinType, rank: usize) -> Self {
        DatumSpec { ty, rank, d: 1, form: Form::Split, frobenius: None, signature: None }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut ty = None;
        let mut rank = None;
        let mut d = 1usize;
        let mut form = Form::Split;
        let mut frobenius = None;
        let mut signature = None;
        let lines = text
            .lines()
            .flat_map(|l| l.split(';'))
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        for (lineno, line) in lines {
            let err = |msg: &str| Error::ParseError { line: lineno, msg: msg.into() };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "type" => {
                    ty = Some(match value {
                        "A" => DynkinType::A,
                        "B" => DynkinType::B,
                        "C" => DynkinType::C,
                        "D" => DynkinType::D,
                        "E6" => DynkinType::E6,
                        "E7" => DynkinType::E7,
                        other => return Err(Error::UnsupportedType(other.into())),
                    });
                }
                "rank" => {
                    rank = Some(value.parse::<usize>().map_err(|_| err("bad rank"))?);
                }
                "d" => {
                    d = value.parse::<usize>().map_err(|_| err("bad d"))?;
                    if d == 0 {
                        return Err(err("d must be >= 1"));
                    }
                }
                "form" => {
                    form = match value {
                        "split" => Form::Split,
                        "unitary" => Form::Unitary,
                        _ => return Err(err("form must be split or unitary")),
                    };
                }
                "frobenius" => {
                    frobenius = Some(match value {
                        "trivial" => FrobeniusKind::Trivial,
                        "shift" => FrobeniusKind::Shift,
                        "unitary-shift" => FrobeniusKind::UnitaryShift,
                        "d-swap" => FrobeniusKind::DSwap,
                        "e6-flip" => FrobeniusKind::E6Flip,
                        other => {
                            let Some(rest) = other.strip_prefix("custom:") else {
                                return Err(err("unknown frobenius kind"));
                            };
                            let perm: std::result::Result<Vec<usize>, _> =
                                rest.split(',').map(|x| x.trim().parse::<usize>()).collect();
                            let perm = perm.map_err(|_| err("bad custom permutation"))?;
                            if perm.iter().any(|&x| x == 0) {
                                return Err(err("custom permutation is 1-based"));
                            }
                            FrobeniusKind::Custom(perm.iter().map(|&x| x - 1).collect())
                        }
                    });
                }
                "signature" => {
                    let sig: std::result::Result<Vec<usize>, _> =
                        value.split(',').map(|x| x.trim().parse::<usize>()).collect();
                    signature = Some(sig.map_err(|_| err("bad signature"))?);
                }
                other => {
                    return Err(Error::ParseError {
                        line: lineno,
                        msg: format!("unknown key `{other}`"),
                    });
                }
            }
        }
        let ty = ty.ok_or(Error::ParseError { line: 0, msg: "missing type".into() })?;
        let rank = match (ty, rank) {
            (DynkinType::E6, r) => {
                if r.unwrap_or(6) != 6 {
                    return Err(Error::RankOutOfRange { ty: "E6".into(), rank: r.unwrap() });
                }
                6
            }
            (DynkinType::E7, r) => {
                if r.unwrap_or(7) != 7 {
                    return Err(Error::RankOutOfRange { ty: "E7".into(), rank: r.unwrap() });
                }
                7
            }
            (_, Some(r)) => r,
            (_, None) => return Err(Error::ParseError { line: 0, msg: "missing rank".into() }),
        };
        Ok(DatumSpec { ty, rank, d, form, frobenius, signature })
    }

    pub fn build_root_datum(&self) -> Result<RootDatum> {
        RootDatum::new(vec![(self.ty, self.rank); self.d])
    }

    /// The Frobenius kind, defaulted from the form when not given
    /// explicitly.
    pub fn frobenius_kind(&self) -> FrobeniusKind {
        if let Some(k) = &self.frobenius {
            return k.clone();
        }
        match (self.form, self.d) {
            (Form::Split, 1) => FrobeniusKind::Trivial,
            (Form::Split, _) => FrobeniusKind::Shift,
            (Form::Unitary, _) => FrobeniusKind::UnitaryShift,
        }
    }

    /// The compact type `I` determined by the signature.
    pub fn compact_type(&self, datum: &RootDatum) -> Result<std::collections::BTreeSet<usize>> {
        let mut i_set: std::collections::BTreeSet<usize> = (0..datum.rank()).collect();
        let default = match self.ty {
            DynkinType::A => None,
            DynkinType::B | DynkinType::D | DynkinType::E6 => Some(1usize),
            DynkinType::C => Some(self.rank),
            DynkinType::E7 => Some(7),
        };
        let signature: Vec<usize> = match (&self.signature, default) {
            (Some(s), _) => {
                if s.len() != self.d {
                    return Err(Error::BadSignature(format!(
                        "expected {} signature entries, got {}",
                        self.d,
                        s.len()
                    )));
                }
                s.clone()
            }
            (None, Some(node)) => vec![node; self.d],
            (None, None) => {
                return Err(Error::BadSignature("type A requires a signature".into()));
            }
        };
        for (f, &r) in signature.iter().enumerate() {
            let o = datum.factor_offset(f);
            match self.ty {
                DynkinType::A => {
                    // Signature r in 0..=rank+1; 0 and rank+1 mean compact.
                    if r > self.rank + 1 {
                        return Err(Error::BadSignature(format!(
                            "signature entry {r} out of range for GL_{}",
                            self.rank + 1
                        )));
                    }
                    if r >= 1 && r <= self.rank {
                        i_set.remove(&(o + r - 1));
                    }
                }
                _ => {
                    if r > self.rank {
                        return Err(Error::BadSignature(format!(
                            "node index {r} out of range for rank {}",
                            self.rank
                        )));
                    }
                    if r >= 1 {
                        i_set.remove(&(o + r - 1));
                    }
                }
            }
        }
        Ok(i_set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_counts_match_type() {
        let cases = [
            (DynkinType::A, 1, 1),
            (DynkinType::A, 3, 6),
            (DynkinType::B, 3, 9),
            (DynkinType::B, 6, 36),
            (DynkinType::C, 3, 9),
            (DynkinType::D, 4, 12),
            (DynkinType::E6, 6, 36),
            (DynkinType::E7, 7, 63),
        ];
        for (ty, n, count) in cases {
            let d = RootDatum::new(vec![(ty, n)]).unwrap();
            assert_eq!(d.num_positive(), count, "{ty} rank {n}");
        }
    }

    #[test]
    fn reducible_datum_counts_add_up() {
        let d = RootDatum::new(vec![(DynkinType::A, 2), (DynkinType::A, 2)]).unwrap();
        assert_eq!(d.num_positive(), 6);
        assert_eq!(d.rank(), 4);
        assert_eq!(d.factor_of_simple(2), 1);
    }

    #[test]
    fn reflect_simple_root_negates() {
        let d = RootDatum::new(vec![(DynkinType::A, 2)]).unwrap();
        let a1 = d.root(0).to_vec();
        assert_eq!(d.reflect(0, &a1).unwrap(), vec![-1, 0]);
        // s_1(alpha_2) = alpha_1 + alpha_2.
        assert_eq!(d.reflect(0, d.root(1)).unwrap(), vec![1, 1]);
    }

    #[test]
    fn reflect_is_involution_on_all_roots() {
        let d = RootDatum::new(vec![(DynkinType::B, 3)]).unwrap();
        for r in 0..d.num_roots() {
            for i in 0..d.rank() {
                let once = d.reflect(i, d.root(r)).unwrap();
                let twice = d.reflect(i, &once).unwrap();
                assert_eq!(twice, d.root(r));
                assert!(d.root_index(&once).is_some(), "W-closure of Phi");
            }
        }
    }

    #[test]
    fn pairing_values() {
        let d = RootDatum::new(vec![(DynkinType::A, 3)]).unwrap();
        assert_eq!(d.pairing_roots(0, 0), 2);
        assert_eq!(d.pairing_roots(0, 2), 0);
        let b = RootDatum::new(vec![(DynkinType::B, 4)]).unwrap();
        // <eta_omega, alpha_1^vee> = -1 in ambient coordinates.
        let (_, a1cv) = b.ambient_of_coroot(0).unwrap();
        let eta_omega = vec![-1i64, 0, 0, 0];
        let dot: i64 = eta_omega.iter().zip(&a1cv).map(|(x, y)| x * y).sum();
        assert_eq!(dot, -1);
    }

    #[test]
    fn ambient_roundtrip_on_roots() {
        for ty in [DynkinType::A, DynkinType::B, DynkinType::C, DynkinType::D] {
            let d = RootDatum::new(vec![(ty, 4)]).unwrap();
            for r in 0..d.num_roots() {
                let (f, a) = d.ambient_of_root(r).unwrap();
                let back = d.root_from_ambient(f, &a).unwrap();
                assert_eq!(&back, d.root(r), "{ty}");
            }
        }
    }

    #[test]
    fn bn_ambient_matches_bourbaki() {
        let d = RootDatum::new(vec![(DynkinType::B, 3)]).unwrap();
        let (_, a1) = d.ambient_of_root(0).unwrap();
        assert_eq!(a1, vec![1, -1, 0]);
        let (_, a3) = d.ambient_of_root(2).unwrap();
        assert_eq!(a3, vec![0, 0, 1]);
        let (_, a3cv) = d.ambient_of_coroot(2).unwrap();
        assert_eq!(a3cv, vec![0, 0, 2]);
    }

    #[test]
    fn frobenius_shift_and_flip() {
        let d = RootDatum::new(vec![(DynkinType::A, 2), (DynkinType::A, 2)]).unwrap();
        let shift = d.builtin_frobenius(FrobeniusKind::Shift).unwrap();
        assert_eq!(shift.perm, vec![2, 3, 0, 1]);
        let unitary = d.builtin_frobenius(FrobeniusKind::UnitaryShift).unwrap();
        assert_eq!(unitary.perm, vec![2, 3, 1, 0]);

        let inert = RootDatum::new(vec![(DynkinType::A, 4)]).unwrap();
        let flip = inert.builtin_frobenius(FrobeniusKind::UnitaryShift).unwrap();
        assert_eq!(flip.perm, vec![3, 2, 1, 0]);

        let e6 = RootDatum::new(vec![(DynkinType::E6, 6)]).unwrap();
        let tau = e6.builtin_frobenius(FrobeniusKind::E6Flip).unwrap();
        assert_eq!(tau.perm, vec![5, 1, 4, 3, 2, 0]);
        assert!(e6.builtin_frobenius(FrobeniusKind::DSwap).is_err());
    }

    #[test]
    fn spec_parser_rejects_unknown_keys() {
        let err = DatumSpec::parse("type=A\nrank=3\ncolor=blue").unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }));
        let spec = DatumSpec::parse("type=B; rank=3").unwrap();
        assert_eq!(spec.ty, DynkinType::B);
        assert_eq!(spec.rank, 3);
    }

    #[test]
    fn spec_compact_type_gl7() {
        let spec = DatumSpec::parse("type=A\nrank=6\nsignature=3").unwrap();
        let datum = spec.build_root_datum().unwrap();
        let i_set = spec.compact_type(&datum).unwrap();
        assert_eq!(i_set, [0, 1, 3, 4, 5].into_iter().collect());
    }
}
