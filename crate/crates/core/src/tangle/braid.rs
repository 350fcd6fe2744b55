//! Braid words and torus braids.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::slice::{Slice, SlicedTangle};
use crate::error::{Error, Result};

/// A braid word on `strands` strands. Letter `i > 0` is the generator
/// `sigma_i` (a positive crossing between strands `i` and `i + 1`, 1-based),
/// letter `-i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::input(format!("generator {l} out of range for {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_tangle(&self) -> SlicedTangle {
        let slices = self
            .letters
            .iter()
            .map(|&l| {
                let p = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    Slice::Pos(p)
                } else {
                    Slice::Neg(p)
                }
            })
            .collect();
        SlicedTangle::new(self.strands, slices).expect("letters were range checked")
    }

    /// Read a braid back from a tangle made only of crossings.
    pub fn from_tangle(t: &SlicedTangle) -> Option<Self> {
        if t.bottom() != t.top() {
            return None;
        }
        let mut letters = Vec::with_capacity(t.len());
        for s in t.slices() {
            match *s {
                Slice::Pos(p) => letters.push(p as i32 + 1),
                Slice::Neg(p) => letters.push(-(p as i32 + 1)),
                _ => return None,
            }
        }
        Some(BraidWord { strands: t.bottom(), letters })
    }

    /// Concatenate, `self` first (below).
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Width("braids on different strand counts".into()));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    /// Permutation induced on strand positions: `perm[i]` is the top position
    /// of the strand starting at bottom position `i`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = strand
        for &l in &self.letters {
            let p = l.unsigned_abs() as usize - 1;
            at.swap(p, p + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Number of cycles of the permutation, the component count of the closure.
    pub fn cycle_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for i in 0..self.strands {
            if !seen[i] {
                cycles += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "B{}:{}", self.strands, ls.join(","))
    }
}

/// `(sigma_1 ... sigma_{n-1})^m` for `m >= 0`, and the inverse word
/// `(sigma_{n-1}^-1 ... sigma_1^-1)^|m|` for `m < 0`. One full twist is `m = n`.
pub fn torus_braid_fractional(n: usize, m: i64) -> BraidWord {
    let mut letters = Vec::new();
    if n >= 2 {
        for _ in 0..m.unsigned_abs() {
            if m > 0 {
                letters.extend(1..n as i32);
            } else {
                letters.extend((1..n as i32).rev().map(|i| -i));
            }
        }
    }
    BraidWord { strands: n, letters }
}

/// Torus braid with `twists` full twists given as a fraction `num / den`;
/// `n * num / den` must be an integer.
pub fn torus_braid(n: usize, num: i64, den: i64) -> Result<BraidWord> {
    if n == 0 || den == 0 {
        return Err(Error::input("torus braid needs n >= 1 and a nonzero denominator"));
    }
    let top = n as i64 * num;
    if top % den != 0 {
        return Err(Error::input(format!("{num}/{den} full twists on {n} strands is not a whole number of fractional twists")));
    }
    Ok(torus_braid_fractional(n, top / den))
}

/// `T_n^k`: `k` full twists (negative `k` for left-handed).
pub fn full_twists(n: usize, k: i64) -> BraidWord {
    torus_braid_fractional(n, k * n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_braid_examples() {
        assert_eq!(torus_braid(2, 1, 1).unwrap().letters, vec![1, 1]);
        assert!(torus_braid(1, 5, 1).unwrap().is_empty());
        assert_eq!(torus_braid(3, 2, 3).unwrap().letters, vec![1, 2, 1, 2]);
        assert!(torus_braid(3, 1, 2).is_err());
        assert_eq!(torus_braid_fractional(3, -1).letters, vec![-2, -1]);
    }

    #[test]
    fn word_length_rule() {
        for n in 1..6 {
            for m in -4..5i64 {
                assert_eq!(torus_braid_fractional(n, m).len(), m.unsigned_abs() as usize * (n - 1));
            }
        }
    }

    #[test]
    fn tangle_round_trip() {
        let b = BraidWord::new(4, vec![1, -3, 2, 2, -1]).unwrap();
        assert_eq!(BraidWord::from_tangle(&b.to_tangle()).unwrap(), b);
        assert!(BraidWord::new(3, vec![3]).is_err());
    }

    #[test]
    fn cycles() {
        assert_eq!(BraidWord::new(2, vec![1]).unwrap().cycle_count(), 1);
        assert_eq!(BraidWord::new(2, vec![1, 1]).unwrap().cycle_count(), 2);
        assert_eq!(full_twists(4, 1).cycle_count(), 4);
        assert_eq!(torus_braid_fractional(5, 1).cycle_count(), 1);
    }
}
