//! Gradings, normalization shifts and stabilization bounds.
//!
//! Homological degree `i = r - n-` and quantum degree
//! `j = r + (#v+ - #v-) + n+ - 2 n-`, where `r` counts 1-resolutions.
//! Shifts are never applied to stored groups: results carry
//! [`StableOffsets`] and the normalized degree is `raw - offset`.

use std::ops::{Add, Neg};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tangle::cable::{fill_slots_with_turnback, Handedness, Twisted};
use crate::tangle::diagram::LinkDiagram;
use crate::tangle::slice::SlicedTangle;

/// Exact rational bound.
pub type Bound = Ratio<i64>;

/// Formal homological (suspension) and quantum offsets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StableOffsets {
    pub h: i64,
    pub q: i64,
}

impl StableOffsets {
    pub fn new(h: i64, q: i64) -> Self {
        StableOffsets { h, q }
    }

    /// Normalized `(i, j)` of a raw bidegree.
    pub fn normalize(&self, i: i64, j: i64) -> (i64, i64) {
        (i - self.h, j - self.q)
    }

    /// Raw bidegree of a normalized one.
    pub fn raw(&self, i: i64, j: i64) -> (i64, i64) {
        (i + self.h, j + self.q)
    }
}

impl Add for StableOffsets {
    type Output = StableOffsets;
    fn add(self, o: StableOffsets) -> StableOffsets {
        StableOffsets { h: self.h + o.h, q: self.q + o.q }
    }
}

impl Neg for StableOffsets {
    type Output = StableOffsets;
    fn neg(self) -> StableOffsets {
        StableOffsets { h: -self.h, q: -self.q }
    }
}

/// Degree `i = r - n-` of a resolution.
pub fn hom_degree(d: &LinkDiagram, state: &[bool]) -> Result<i64> {
    if state.len() != d.crossing_count() {
        return Err(Error::input(format!("state has {} bits for {} crossings", state.len(), d.crossing_count())));
    }
    let r = state.iter().filter(|&&b| b).count() as i64;
    Ok(r - d.crossing_signs().1 as i64)
}

/// Degree `j` of a decorated resolution; `decoration[c]` is `true` for `v+`
/// on circle `c` in the numbering of [`LinkDiagram::resolve`].
pub fn q_degree(d: &LinkDiagram, state: &[bool], decoration: &[bool]) -> Result<i64> {
    let (circles, _) = d.resolve(state)?;
    if decoration.len() != circles {
        return Err(Error::input(format!("{} decorations for {circles} circles", decoration.len())));
    }
    let r = state.iter().filter(|&&b| b).count() as i64;
    let plus = decoration.iter().filter(|&&b| b).count() as i64;
    Ok(r + 2 * plus - circles as i64 + d.n_shift())
}

/// Per-twist statistics of a diagram `<T^k, Z>` with one twist region per slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingContext {
    pub n_plus: usize,
    pub n_minus: usize,
    /// `n+ - 2 n-` over one full twist of each slot.
    pub tau: Vec<i64>,
    /// `n-` over one full twist of each slot.
    pub eta: Vec<i64>,
    /// Strand count of each slot.
    pub widths: Vec<usize>,
    /// `n+ - 2 n-` over crossings outside every twist.
    pub n_z: i64,
}

impl GradingContext {
    /// Measure a twisted diagram. Slots without a full twist get `tau = eta = 0`,
    /// which is exact for one-strand slots and otherwise means "unknown".
    pub fn measure(d: &LinkDiagram, tw: &Twisted) -> Self {
        let (n_plus, n_minus) = d.crossing_signs();
        let sign = |c: usize| d.crossings()[c].sign as i64;
        let mut in_twist = vec![false; d.crossing_count()];
        let mut tau = Vec::new();
        let mut eta = Vec::new();
        for slot in &tw.twists {
            for full in slot {
                for &c in full {
                    in_twist[c] = true;
                }
            }
            match slot.first() {
                Some(full) => {
                    tau.push(full.iter().map(|&c| if sign(c) > 0 { 1 } else { -2 }).sum());
                    eta.push(full.iter().filter(|&&c| sign(c) < 0).count() as i64);
                }
                None => {
                    tau.push(0);
                    eta.push(0);
                }
            }
        }
        let n_z = (0..d.crossing_count())
            .filter(|&c| !in_twist[c])
            .map(|c| if sign(c) > 0 { 1 } else { -2 })
            .sum();
        let widths = tw.twists.iter().map(|s| s.first().map_or(0, |f| width_of(f.len()))).collect();
        GradingContext { n_plus, n_minus, tau, eta, widths, n_z }
    }

    /// `N_D = n+ - 2 n-`.
    pub fn n_total(&self) -> i64 {
        self.n_plus as i64 - 2 * self.n_minus as i64
    }

    /// Offsets turning raw degrees of `D(k)` into the normalized degrees
    /// of the twist sequence.
    pub fn sequence_offsets(&self, k: i64, h: Handedness, widths: &[usize]) -> StableOffsets {
        let mut off = StableOffsets::new(0, self.n_z);
        for (s, &n) in widths.iter().enumerate() {
            let full = (n * n.saturating_sub(1)) as i64;
            let (t, e) = (self.tau.get(s).copied().unwrap_or(0), self.eta.get(s).copied().unwrap_or(0));
            off = off
                + match h {
                    Handedness::Right => StableOffsets::new(-k * e, k * t),
                    Handedness::Left => StableOffsets::new(k * (full - e), k * (t + full)),
                };
        }
        off
    }
}

fn width_of(crossings: usize) -> usize {
    // n (n - 1) = crossings
    (1..).find(|n| n * (n - 1) >= crossings).unwrap()
}

/// Shift bookkeeping for the cone along one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeShifts {
    /// `n-(L) - n-(L'')`: `i(L'') = i(L) + a` on the 0-side.
    pub a: i64,
    /// `n-(L) - n-(L') - 1`: `i(L') = i(L) + b` on the 1-side.
    pub b: i64,
    /// `j(L'') = j(L) + q_zero`.
    pub q_zero: i64,
    /// `j(L') = j(L) + q_one`.
    pub q_one: i64,
}

/// Cone shifts for crossing `c`, with both smoothings oriented from `d`
/// where the orientation survives.
pub fn cone_shifts(d: &LinkDiagram, c: usize) -> Result<(ConeShifts, LinkDiagram, LinkDiagram)> {
    if c >= d.crossing_count() {
        return Err(Error::input(format!("no crossing {c}")));
    }
    let zero = d.smoothing(c, false)?;
    let one = d.smoothing(c, true)?;
    let nm = d.crossing_signs().1 as i64;
    let shifts = ConeShifts {
        a: nm - zero.crossing_signs().1 as i64,
        b: nm - one.crossing_signs().1 as i64 - 1,
        q_zero: zero.n_shift() - d.n_shift(),
        q_one: one.n_shift() - d.n_shift() - 1,
    };
    Ok((shifts, zero, one))
}

/// Circle count of a closed tangle's resolution with every crossing set to `bit`.
pub fn circles_uniform(t: &SlicedTangle, bit: bool) -> Result<usize> {
    let d = LinkDiagram::new(t.clone().with_hints(Vec::new()))?;
    Ok(d.circle_count(&vec![bit; d.crossing_count()]))
}

fn turnback_fills(t: &SlicedTangle, slot: usize) -> Result<Vec<SlicedTangle>> {
    let n = t.slots.get(slot).ok_or_else(|| Error::input(format!("no slot {slot}")))?.width;
    if n < 2 {
        return Err(Error::input("bounds need a slot of width at least 2"));
    }
    (1..n)
        .map(|iota| {
            let mut f = fill_slots_with_turnback(t, slot, iota)?;
            f.slots.clear();
            Ok(f)
        })
        .collect()
}

/// `b+ = max over iota of (j + #circ(all-zero of <e_iota, Z>)) / 2n`.
pub fn bound_b_plus(j: i64, t: &SlicedTangle, slot: usize) -> Result<Bound> {
    let n = t.slots[slot.min(t.slots.len().saturating_sub(1))].width as i64;
    let mut best: Option<Bound> = None;
    for f in turnback_fills(t, slot)? {
        let c = circles_uniform(&f, false)? as i64;
        let v = Ratio::new(j + c, 2 * n);
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    Ok(best.unwrap())
}

/// `b- = max over iota of (-j + #cros(Z) + #circ(all-one of <e_iota, Z>)) / 2n`.
pub fn bound_b_minus(j: i64, t: &SlicedTangle, slot: usize) -> Result<Bound> {
    let n = t.slots[slot.min(t.slots.len().saturating_sub(1))].width as i64;
    let mut best: Option<Bound> = None;
    for f in turnback_fills(t, slot)? {
        let c = circles_uniform(&f, true)? as i64;
        let v = Ratio::new(-j + f.crossing_count() as i64 + c, 2 * n);
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    Ok(best.unwrap())
}

/// Smallest integer `k` strictly above a bound.
pub fn first_k_above(b: Bound) -> i64 {
    b.floor().to_integer() + 1
}

/// `s(n, k) = N_{L(n,k)} + k m n (n-1) + n^2 chi + n zeta` from measured `N_{L(n,k)}`.
pub fn s_shift_measured(n_lnk: i64, n: i64, k: i64, m: i64, chi: i64, zeta: i64) -> i64 {
    n_lnk + k * m * n * (n - 1) + n * n * chi + n * zeta
}

/// `s(n, k)` for `L` cabled with parallel strands and `m` left-handed twist
/// regions, where every twist crossing is negative.
pub fn s_shift(l: &LinkDiagram, n: i64, k: i64, m: i64) -> i64 {
    let chi = l.crossing_count() as i64;
    let zeta = l.circle_count(&vec![true; l.crossing_count()]) as i64;
    let n_lnk = n * n * l.n_shift() - 2 * k * m * n * (n - 1);
    s_shift_measured(n_lnk, n, k, m, chi, zeta)
}

/// Rozansky's gradings `(i_R, j_R)` of raw degree `i` and degree `j`
/// normalized by `s(n, k)`, in a diagram with `n+` positive crossings.
pub fn rozansky_gradings(i: i64, j: i64, n_plus: i64) -> (i64, i64) {
    let i_r = n_plus - i;
    (i_r, -j - i_r)
}

/// Inverse of [`rozansky_gradings`]: `i = -i_R + n+` and
/// `j = (-i_R - j_R) + (n+ - 2 n-) + #cros + n zeta` as a raw quantum degree.
pub fn from_rozansky(i_r: i64, j_r: i64, n_plus: i64, n_minus: i64, n_zeta: i64) -> (i64, i64) {
    let cros = n_plus + n_minus;
    (-i_r + n_plus, -i_r - j_r + n_plus - 2 * n_minus + cros + n_zeta)
}

/// Whether `(i_R, j_R)` lies in the region `j_R < -(i_R + chi!)/2` where
/// colored homology must vanish.
pub fn rozansky_vanishing_region(i_r: i64, j_r: i64, chi_min: i64) -> bool {
    2 * j_r < -(i_r + chi_min)
}

/// `f'(a, n) = max((a + n - 1)/n, n - 1)`.
pub fn f_prime(a: i64, n: i64) -> Result<Bound> {
    if n < 1 {
        return Err(Error::input("f' needs n >= 1"));
    }
    Ok(Ratio::new(a + n - 1, n).max(Ratio::from_integer(n - 1)))
}

/// The older bound `f(a, n) = max((a + n - 1)/n, n)`.
pub fn f_old(a: i64, n: i64) -> Result<Bound> {
    if n < 1 {
        return Err(Error::input("f needs n >= 1"));
    }
    Ok(Ratio::new(a + n - 1, n).max(Ratio::from_integer(n)))
}

/// Least `n` with `n > chi! - 2j + 1`.
pub fn badequate_threshold(j: i64, chi_min: i64) -> Result<i64> {
    if j % 2 != 0 {
        return Err(Error::input(format!("odd j = {j}: every block vanishes")));
    }
    if j > 0 {
        return Err(Error::input(format!("j = {j} lies above the top degree")));
    }
    Ok(chi_min - 2 * j + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::braid::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    #[test]
    fn hopf_degrees() {
        let h = closure(2, &[1, 1]);
        assert_eq!(q_degree(&h, &[true, true], &[true, true]).unwrap(), 6);
        assert_eq!(q_degree(&h, &[false, false], &[false, false]).unwrap(), 0);
        assert_eq!(hom_degree(&h, &[true, true]).unwrap(), 2);
        let neg = h.reoriented(&[false, true]).unwrap();
        assert_eq!(hom_degree(&neg, &[false, false]).unwrap(), -2);
        assert!(q_degree(&h, &[true, false], &[true, true]).is_err());
        let u = closure(1, &[]);
        assert_eq!(q_degree(&u, &[], &[false]).unwrap(), -1);
    }

    #[test]
    fn cone_shift_examples() {
        let h = closure(2, &[1, 1]);
        assert_eq!(cone_shifts(&h, 0).unwrap().0.a, 0);
        let u = closure(2, &[1]);
        assert_eq!(cone_shifts(&u, 0).unwrap().0.b, -1);
    }

    #[test]
    fn s_shift_hopf() {
        let h = closure(2, &[1, 1]);
        for n in 1..6 {
            assert_eq!(s_shift(&h, n, 0, 4), 4 * n * n + 2 * n);
        }
        assert_eq!(s_shift(&h, 2, 0, 4), 20);
    }

    #[test]
    fn thresholds_and_f() {
        assert_eq!(badequate_threshold(-2, 2).unwrap(), 8);
        assert_eq!(badequate_threshold(0, 2).unwrap(), 4);
        assert!(badequate_threshold(-1, 2).is_err());
        assert_eq!(f_prime(0, 3).unwrap(), Ratio::from_integer(2));
        assert_eq!(f_old(0, 3).unwrap(), Ratio::from_integer(3));
    }

    #[test]
    fn rozansky_round_trip() {
        let (ir, jr) = rozansky_gradings(5, 0, 5);
        assert_eq!((ir, jr), (0, 0));
        let (i, _) = from_rozansky(ir, jr, 5, 0, 2);
        assert_eq!(i, 5);
    }
}
