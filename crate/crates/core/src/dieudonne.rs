//! Interval-subspace dynamics for general linear groups: the action of the
//! letters F and V^{-1} on interval indices for the core and almost-core
//! strata, shortest-word search, and verification that the canonical
//! filtration extends across both strata via the same words.

use crate::error::Error;
use crate::Result;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Letter {
    F,
    Vinv,
}

impl std::fmt::Display for Letter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Letter::F => write!(f, "F"),
            Letter::Vinv => write!(f, "Vinv"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    Core,
    AlmostCore,
}

/// Transition rules for the letters F and V^{-1} on interval indices
/// `0..=n`, `n = r + s`. The two strata differ only at index `r`.
#[derive(Debug, Clone, Copy)]
pub struct IntervalDynamics {
    pub r: usize,
    pub s: usize,
    pub stratum: Stratum,
}

impl IntervalDynamics {
    pub fn new(r: usize, s: usize, stratum: Stratum) -> Self {
        IntervalDynamics { r, s, stratum }
    }

    pub fn n(&self) -> usize {
        self.r + self.s
    }

    /// Applies one letter to an interval index.
    pub fn step(&self, letter: Letter, i: usize) -> Result<usize> {
        let (r, n) = (self.r, self.n());
        if i > n {
            return Err(Error::IndexOutOfRange(i));
        }
        if self.stratum == Stratum::AlmostCore {
            match (letter, i) {
                (Letter::F, x) if x == r || x == r + 1 => return Ok(1),
                (Letter::Vinv, x) if x == r => return Ok(n - 1),
                _ => {}
            }
        }
        Ok(match letter {
            Letter::F => {
                if i <= r {
                    0
                } else {
                    i - r
                }
            }
            Letter::Vinv => {
                if i < r {
                    i + self.s
                } else {
                    n
                }
            }
        })
    }

    /// The index sequence visited by a word, starting at `start`.
    pub fn trajectory(&self, word: &[Letter], start: usize) -> Result<Vec<usize>> {
        let mut out = vec![start];
        let mut i = start;
        for &l in word {
            i = self.step(l, i)?;
            out.push(i);
        }
        Ok(out)
    }
}

/// Shortest word over `{F, Vinv}` taking index 0 to `r` under the core
/// dynamics, preferring `Vinv` at equal distance. For coprime `r > s > 0`
/// the word has `n - 1` letters and its prefixes visit `n - 1` distinct
/// indices.
pub fn minimal_word(r: usize, s: usize) -> Result<Vec<Letter>> {
    if r == 0 || s == 0 {
        return Err(Error::BadSignature("need r, s >= 1".into()));
    }
    let dyn_core = IntervalDynamics::new(r, s, Stratum::Core);
    let n = dyn_core.n();
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; n + 1];
    let mut seen = vec![false; n + 1];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if i == r {
            break;
        }
        for l in [Letter::Vinv, Letter::F] {
            let j = dyn_core.step(l, i)?;
            if !seen[j] {
                seen[j] = true;
                prev[j] = Some((i, l));
                queue.push_back(j);
            }
        }
    }
    let mut word = Vec::new();
    let mut i = r;
    while let Some((p, l)) = prev[i] {
        word.push(l);
        i = p;
    }
    if i != 0 {
        return Err(Error::RangeViolation(format!(
            "index {r} unreachable from 0"
        )));
    }
    word.reverse();
    let coprime = {
        fn g(a: usize, b: usize) -> usize {
            if b == 0 { a } else { g(b, a % b) }
        }
        g(r, s) == 1
    };
    if coprime && word.len() != n - 1 {
        return Err(Error::RangeViolation(format!(
            "shortest word has {} letters, expected {}",
            word.len(),
            n - 1
        )));
    }
    Ok(word)
}

/// Checks that the canonical filtration given by the minimal word and its
/// prefixes extends across both strata: the core and almost-core dynamics
/// traverse the identical index sequence, the prefixes visit every index
/// in `1..n` except `r` exactly once before reaching `r` last.
pub fn verify_extension(r: usize, s: usize) -> Result<bool> {
    fn g(a: usize, b: usize) -> usize {
        if b == 0 { a } else { g(b, a % b) }
    }
    if r == 0 || s == 0 || g(r, s) != 1 {
        return Err(Error::NotCoprime);
    }
    let word = minimal_word(r, s)?;
    let n = r + s;
    let core = IntervalDynamics::new(r, s, Stratum::Core).trajectory(&word, 0)?;
    let almost = IntervalDynamics::new(r, s, Stratum::AlmostCore).trajectory(&word, 0)?;
    if core != almost {
        return Ok(false);
    }
    let interior = &core[1..];
    if interior.last() != Some(&r) {
        return Ok(false);
    }
    let mut sorted: Vec<usize> = interior.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let expected: Vec<usize> = (1..n).collect();
    Ok(sorted == expected && interior.len() == n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_rule_examples() {
        let d = IntervalDynamics::new(3, 2, Stratum::Core);
        assert_eq!(d.step(Letter::Vinv, 0).unwrap(), 2);
        assert_eq!(d.step(Letter::F, 4).unwrap(), 1);
        assert_eq!(d.step(Letter::Vinv, 3).unwrap(), 5);
        let a = IntervalDynamics::new(3, 2, Stratum::AlmostCore);
        assert_eq!(a.step(Letter::Vinv, 3).unwrap(), 4);
        assert_eq!(a.step(Letter::F, 3).unwrap(), 1);
        assert_eq!(a.step(Letter::F, 4).unwrap(), 1);
        assert!(d.step(Letter::F, 6).is_err());
    }

    #[test]
    fn minimal_word_32() {
        let w = minimal_word(3, 2).unwrap();
        assert_eq!(w.len(), 4);
        let d = IntervalDynamics::new(3, 2, Stratum::Core);
        assert_eq!(d.trajectory(&w, 0).unwrap(), vec![0, 2, 4, 1, 3]);
    }

    #[test]
    fn minimal_word_21() {
        assert_eq!(minimal_word(2, 1).unwrap().len(), 2);
    }

    #[test]
    fn extension_verified_for_coprime_pairs() {
        fn g(a: usize, b: usize) -> usize {
            if b == 0 { a } else { g(b, a % b) }
        }
        for n in 2..=12usize {
            for r in 1..n {
                let s = n - r;
                if g(r, s) == 1 {
                    assert!(verify_extension(r, s).unwrap(), "({r},{s})");
                    assert_eq!(minimal_word(r, s).unwrap().len(), n - 1, "({r},{s})");
                } else {
                    assert!(matches!(verify_extension(r, s), Err(Error::NotCoprime)));
                }
            }
        }
    }

    #[test]
    fn bfs_distance_law_up_to_30() {
        fn g(a: usize, b: usize) -> usize {
            if b == 0 { a } else { g(b, a % b) }
        }
        for n in 2..=30usize {
            for r in 1..n {
                if g(r, n - r) == 1 {
                    assert_eq!(minimal_word(r, n - r).unwrap().len(), n - 1, "({r},{})", n - r);
                }
            }
        }
    }
}
