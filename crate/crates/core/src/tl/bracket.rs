//! Bracket state sums of sliced diagrams, with slots filled by projectors or
//! by twisting, and the invariants built on them.
//!
//! The sum runs bottom to top over crossingless matchings of the current
//! level, so its cost follows the width of the diagram rather than the
//! number of crossings.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::element::{jones_wenzl, TLMatching};
use crate::algebra::{Int, LaurentPoly, LaurentRational};
use crate::error::{Error, Result};
use crate::grading::GradingContext;
use crate::tangle::cable::{cable, insert_twists, ColoredLink, Handedness, Placement};
use crate::tangle::diagram::LinkDiagram;
use crate::tangle::slice::{Slice, SlicedTangle};
use crate::tangle::spin::SpinNetwork;

/// What goes into the twist slots of a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotFill {
    /// Leave the strands straight.
    Identity,
    /// Insert `P_n`, expanded over matchings.
    Projector,
    /// Insert `k` full twists of the given handedness.
    Twists { k: usize, handedness: Handedness },
}

type Level = Vec<u8>;

/// Replace points `pos..pos + nin` of a level by the top of a flat piece `m`
/// on `nin + nout` points (bottom first). Returns the new level and the loops closed.
fn apply_flat(state: &[u8], pos: usize, nin: usize, nout: usize, m: &[u8]) -> (Level, usize) {
    let w = state.len();
    let new_w = w - nin + nout;
    let old_to_new = |o: usize| if o < pos { o } else { o - nin + nout };
    let mut seen = vec![false; nin];
    // Arrive at old point `o` from below and climb until reaching the new level.
    let climb = |mut o: usize, seen: &mut Vec<bool>| -> usize {
        loop {
            if o < pos || o >= pos + nin {
                return old_to_new(o);
            }
            seen[o - pos] = true;
            let p = m[o - pos] as usize;
            if p >= nin {
                return pos + p - nin;
            }
            seen[p] = true;
            o = state[pos + p] as usize;
        }
    };
    let mut out = vec![0u8; new_w];
    for x in 0..new_w {
        let partner = if x >= pos && x < pos + nout {
            let p = m[nin + x - pos] as usize;
            if p >= nin {
                pos + p - nin
            } else {
                seen[p] = true;
                climb(state[pos + p] as usize, &mut seen)
            }
        } else {
            let o = if x < pos { x } else { x + nin - nout };
            climb(state[o] as usize, &mut seen)
        };
        out[x] = partner as u8;
    }
    let mut loops = 0;
    for b in 0..nin {
        if seen[b] {
            continue;
        }
        loops += 1;
        let mut x = b;
        loop {
            seen[x] = true;
            let y = m[x] as usize;
            seen[y] = true;
            x = state[pos + y] as usize - pos;
            if x == b {
                break;
            }
        }
    }
    (out, loops)
}

const CUP: [u8; 2] = [1, 0];
const VERT: [u8; 4] = [2, 3, 0, 1];
const TURN: [u8; 4] = [1, 0, 3, 2];

/// Running state sum: coefficient of each level matching over a common denominator.
struct Transfer {
    states: HashMap<Level, LaurentPoly>,
    den: LaurentPoly,
    powers: Vec<LaurentPoly>,
}

impl Transfer {
    fn delta_pow(&mut self, k: usize) -> LaurentPoly {
        while self.powers.len() <= k {
            let next = self.powers.last().unwrap() * &LaurentPoly::delta();
            self.powers.push(next);
        }
        self.powers[k].clone()
    }

    /// Apply a combination of flat pieces at `pos`.
    fn apply(&mut self, pos: usize, nin: usize, nout: usize, pieces: &[(&[u8], LaurentPoly)]) {
        let mut next: HashMap<Level, LaurentPoly> = HashMap::new();
        let old = std::mem::take(&mut self.states);
        for (s, c) in old {
            for (m, w) in pieces {
                let (t, loops) = apply_flat(&s, pos, nin, nout, m);
                let v = &(&c * w) * &self.delta_pow(loops);
                let e = next.entry(t).or_insert_with(LaurentPoly::zero);
                *e = &*e + &v;
            }
        }
        next.retain(|_, v| !v.is_zero());
        self.states = next;
    }
}

/// The state sum `sum (-1)^(r - n-) q^(r + n+ - 2n-) (q + q^-1)^#circles` of
/// an oriented diagram, with its slots filled as requested.
pub fn bracket(d: &LinkDiagram, fill: SlotFill) -> Result<LaurentRational> {
    match fill {
        SlotFill::Twists { k, handedness } => {
            let tw = insert_twists(d.tangle(), k, handedness)?;
            let dk = LinkDiagram::new(tw.tangle)?;
            bracket(&dk, SlotFill::Identity)
        }
        SlotFill::Identity => state_sum(d, false),
        SlotFill::Projector => state_sum(d, true),
    }
}

fn state_sum(d: &LinkDiagram, projectors: bool) -> Result<LaurentRational> {
    let t: &SlicedTangle = d.tangle();
    if t.bottom() != 0 {
        return Err(Error::Width("the state sum needs a closed diagram".into()));
    }
    let mut tr = Transfer {
        states: HashMap::from([(Vec::new(), LaurentPoly::one())]),
        den: LaurentPoly::one(),
        powers: vec![LaurentPoly::one()],
    };
    let minus_q = LaurentPoly::monomial(Int::new(-1), 1);
    let one = LaurentPoly::one();
    for l in 0..=t.len() {
        if projectors {
            for s in t.slots.iter().filter(|s| s.level == l && s.width > 1) {
                let p = jones_wenzl(s.width)?;
                let (den, nums) = p.over_common_denominator();
                let pieces: Vec<(&[u8], LaurentPoly)> =
                    nums.iter().map(|(m, c): &(TLMatching, LaurentPoly)| (m.as_slice(), c.clone())).collect();
                tr.apply(s.pos, s.width, s.width, &pieces);
                tr.den = &tr.den * &den;
            }
        }
        if l == t.len() {
            break;
        }
        match t.slices()[l] {
            Slice::Cup(p) => tr.apply(p, 0, 2, &[(&CUP, one.clone())]),
            Slice::Cap(p) => tr.apply(p, 2, 0, &[(&CUP, one.clone())]),
            Slice::Vert(_) => {}
            Slice::Turn(p) => tr.apply(p, 2, 2, &[(&TURN, one.clone())]),
            Slice::Pos(p) => tr.apply(p, 2, 2, &[(&VERT, one.clone()), (&TURN, minus_q.clone())]),
            Slice::Neg(p) => tr.apply(p, 2, 2, &[(&TURN, one.clone()), (&VERT, minus_q.clone())]),
        }
    }
    let total = tr.states.remove(&Vec::new()).unwrap_or_else(LaurentPoly::zero);
    let (_, nm) = d.crossing_signs();
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    let factor = LaurentPoly::monomial(Int::new(sign), d.n_shift() as i32);
    LaurentRational::new(&total * &factor, tr.den)
}

/// Colored Jones: every component cabled with its color and a projector.
pub fn colored_jones(l: &ColoredLink) -> Result<LaurentRational> {
    let t = cable(l, &Placement::PerComponent)?;
    bracket(&LinkDiagram::new(t)?, SlotFill::Projector)
}

/// Evaluation of a spin network: the projector bracket of its bundle diagram,
/// oriented by the default rule. Other orientations change it by a signed power of `q`.
pub fn spin_network_eval(g: &SpinNetwork) -> Result<LaurentRational> {
    let t = g.diagram()?;
    bracket(&LinkDiagram::new(t)?, SlotFill::Projector)
}

/// Agreement of consecutive twist brackets on a window of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailAgreement {
    pub handedness: Handedness,
    /// Degrees of the window, nearest the anchor first.
    pub window: Vec<i64>,
    /// Normalized coefficients on the window, per `k`.
    pub rows: Vec<(usize, Vec<Int>)>,
    /// `agrees[i]` compares `rows[i]` with `rows[i + 1]`.
    pub agrees: Vec<bool>,
    /// First `k` from which every later row agrees.
    pub stable_from: Option<usize>,
    /// Whether the last row matches the series expansion of the projector bracket.
    pub matches_projector: Option<bool>,
}

/// Normalized Euler characteristic of `D(k)`: `(-1)^h q^-qoff` times the bracket.
pub fn shifted_bracket(d: &LinkDiagram, k: usize, h: Handedness) -> Result<LaurentPoly> {
    let tw = insert_twists(d.tangle(), k, h)?;
    let dk = LinkDiagram::new(tw.tangle.clone())?;
    let raw = bracket(&dk, SlotFill::Identity)?.as_poly().expect("a diagram without projectors has a polynomial bracket");
    let widths: Vec<usize> = d.tangle().slots.iter().map(|s| s.width).collect();
    let off = GradingContext::measure(&dk, &tw).sequence_offsets(k as i64, h, &widths);
    let s = if off.h % 2 == 0 { 1 } else { -1 };
    Ok(raw.shift(-off.q as i32).scale(&Int::new(s)))
}

/// Compare consecutive shifted brackets on `width` degrees of matching parity,
/// anchored at the lowest degree for right-handed twisting and the highest for left.
pub fn series_tail_check(
    d: &LinkDiagram,
    h: Handedness,
    ks: RangeInclusive<usize>,
    width: usize,
) -> Result<TailAgreement> {
    let polys: Vec<(usize, LaurentPoly)> =
        ks.clone().map(|k| shifted_bracket(d, k, h).map(|p| (k, p))).collect::<Result<_>>()?;
    let ends: Vec<i32> = polys
        .iter()
        .filter_map(|(_, p)| match h {
            Handedness::Right => p.min_exp(),
            Handedness::Left => p.max_exp(),
        })
        .collect();
    let anchor = match h {
        Handedness::Right => ends.iter().min().copied(),
        Handedness::Left => ends.iter().max().copied(),
    }
    .unwrap_or(0) as i64;
    let step = if h == Handedness::Right { 2 } else { -2 };
    let window: Vec<i64> = (0..width as i64).map(|m| anchor + step * m).collect();
    let rows: Vec<(usize, Vec<Int>)> =
        polys.iter().map(|(k, p)| (*k, window.iter().map(|&e| p.coeff(e as i32)).collect())).collect();
    let agrees: Vec<bool> = rows.windows(2).map(|w| w[0].1 == w[1].1).collect();
    let tail = agrees.iter().rev().take_while(|&&a| a).count();
    let stable_from = rows.len().checked_sub(1 + tail).map(|i| rows[i].0);
    let matches_projector = match rows.last() {
        Some((_, last)) if width > 0 => projector_window(d, h, &window).ok().map(|w| &w == last),
        _ => None,
    };
    Ok(TailAgreement { handedness: h, window, rows, agrees, stable_from, matches_projector })
}

/// Coefficients of the projector bracket, normalized like the twist sequence,
/// expanded as a power series at the anchor end.
fn projector_window(d: &LinkDiagram, h: Handedness, window: &[i64]) -> Result<Vec<Int>> {
    let p = bracket(d, SlotFill::Projector)?.shift(-d.n_shift() as i32);
    let span = window.len() * 2 + 1;
    let coeff_at = |e: i64| -> Result<Int> {
        let (base, c) = match h {
            Handedness::Right => p.series_low(span + (e - window[0]).unsigned_abs() as usize)?,
            Handedness::Left => p.series_high(span + (e - window[0]).unsigned_abs() as usize)?,
        };
        let idx = match h {
            Handedness::Right => e - base as i64,
            Handedness::Left => base as i64 - e,
        };
        Ok(if idx < 0 { Int::new(0) } else { c.get(idx as usize).cloned().unwrap_or_else(|| Int::new(0)) })
    };
    window.iter().map(|&e| coeff_at(e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::braid::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    fn poly(terms: &[(i32, i64)]) -> LaurentRational {
        LaurentRational::from_poly(LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Int::new(c)))))
    }

    #[test]
    fn flat_pieces() {
        // A cup then a cap closes one loop.
        let (s, l) = apply_flat(&[], 0, 0, 2, &CUP);
        assert_eq!((s.clone(), l), (vec![1, 0], 0));
        let (s, l) = apply_flat(&s, 0, 2, 0, &CUP);
        assert_eq!((s, l), (vec![], 1));
        // Nested arcs: the turnback closes the inner one and reopens it.
        let (s, l) = apply_flat(&[3, 2, 1, 0], 1, 2, 2, &TURN);
        assert_eq!((s, l), (vec![3, 2, 1, 0], 1));
        let (s, l) = apply_flat(&[1, 0, 3, 2], 1, 2, 2, &TURN);
        assert_eq!((s, l), (vec![3, 2, 1, 0], 0));
    }

    #[test]
    fn small_brackets() {
        assert_eq!(bracket(&closure(1, &[]), SlotFill::Identity).unwrap(), poly(&[(-1, 1), (1, 1)]));
        // Positive Hopf: 1 + q^2 + q^4 + q^6.
        assert_eq!(
            bracket(&closure(2, &[1, 1]), SlotFill::Identity).unwrap(),
            poly(&[(0, 1), (2, 1), (4, 1), (6, 1)])
        );
        // A one-crossing unknot has the unknot's value.
        assert_eq!(bracket(&closure(2, &[1]), SlotFill::Identity).unwrap(), poly(&[(-1, 1), (1, 1)]));
        assert_eq!(bracket(&closure(2, &[-1]), SlotFill::Identity).unwrap(), poly(&[(-1, 1), (1, 1)]));
    }

    #[test]
    fn colored_unknot() {
        let u = LinkDiagram::new(SlicedTangle::identity(1).trace_closure().unwrap()).unwrap();
        for n in 1..=4 {
            let c = ColoredLink::uniform(u.clone(), n).unwrap();
            let v = colored_jones(&c).unwrap();
            assert_eq!(v, LaurentRational::from_poly(LaurentPoly::quantum_int(n as i32 + 1)));
        }
    }
}
