//! Cabling, twist slots and twist insertion.

use serde::{Deserialize, Serialize};

use super::braid::full_twists;
use super::diagram::LinkDiagram;
use super::slice::{Hint, Slice, SlicedTangle, Slot};
use crate::error::{Error, Result};

/// Direction of the inserted twisting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Right,
    Left,
}

impl Handedness {
    pub fn sign(self) -> i64 {
        match self {
            Handedness::Right => 1,
            Handedness::Left => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Handedness::Right => "right",
            Handedness::Left => "left",
        }
    }
}

impl std::str::FromStr for Handedness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "right" | "r" | "+" => Ok(Handedness::Right),
            "left" | "l" | "-" => Ok(Handedness::Left),
            _ => Err(Error::input(format!("unknown handedness `{s}`"))),
        }
    }
}

/// Where the twist slots of a cabled diagram go.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// One slot per component, on its lowest-leftmost segment.
    PerComponent,
    /// One slot per edge of the 4-valent graph.
    PerEdge,
    /// One slot per listed `(level, pos)` segment of the original diagram.
    At(Vec<(usize, usize)>),
}

/// A diagram with a color per component.
#[derive(Clone, Debug)]
pub struct ColoredLink {
    pub diagram: LinkDiagram,
    pub colors: Vec<usize>,
}

impl ColoredLink {
    pub fn new(diagram: LinkDiagram, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != diagram.component_count() {
            return Err(Error::input(format!(
                "{} colors for {} components",
                colors.len(),
                diagram.component_count()
            )));
        }
        if colors.contains(&0) {
            return Err(Error::input("colors must be at least 1"));
        }
        Ok(ColoredLink { diagram, colors })
    }

    pub fn uniform(diagram: LinkDiagram, n: usize) -> Result<Self> {
        let c = vec![n; diagram.component_count()];
        Self::new(diagram, c)
    }
}

/// Replace every component by parallel copies and record twist slots.
///
/// The result keeps one orientation hint per cable strand at each component's
/// lowest-leftmost block, so cabled strands run parallel to the original.
pub fn cable(link: &ColoredLink, placement: &Placement) -> Result<SlicedTangle> {
    let d = &link.diagram;
    let t = d.tangle();
    let g = d.geometry();
    let color = |l: usize, x: usize| link.colors[g.comp_of[g.seg(l, x)]];
    let offset = |l: usize, x: usize| (0..x).map(|y| color(l, y)).sum::<usize>();

    let mut slices = Vec::new();
    let mut level_map = Vec::with_capacity(t.len() + 1);
    for (l, s) in t.slices().iter().enumerate() {
        level_map.push(slices.len());
        match *s {
            Slice::Pos(p) | Slice::Neg(p) => {
                let (a, b, base) = (color(l, p), color(l, p + 1), offset(l, p));
                for i in (0..a).rev() {
                    for j in 0..b {
                        slices.push(s.with_pos(base + i + j));
                    }
                }
            }
            Slice::Cup(p) => {
                let (c, base) = (color(l + 1, p), offset(l, p));
                slices.extend((base..base + c).map(Slice::Cup));
            }
            Slice::Cap(p) => {
                let (c, base) = (color(l, p), offset(l, p));
                slices.extend((base..base + c).rev().map(Slice::Cap));
            }
            Slice::Turn(p) => {
                let (c, base) = (color(l, p), offset(l, p));
                slices.extend((base..base + c).rev().map(Slice::Cap));
                let c2 = color(l + 1, p);
                slices.extend((base..base + c2).map(Slice::Cup));
            }
            Slice::Vert(_) => {}
        }
    }
    level_map.push(slices.len());
    let mut out = SlicedTangle::new(offset(0, t.width(0)), slices)?;

    let block = |s: usize| {
        let (l, x) = g.locate(s);
        (level_map[l], offset(l, x), color(l, x))
    };
    let mut hints = Vec::new();
    for segs in &g.components {
        let s = *segs.iter().min().unwrap();
        let (level, pos, c) = block(s);
        hints.extend((0..c).map(|i| Hint { level, pos: pos + i, up: d.is_up(s) }));
    }
    out.hints = hints;

    let sites: Vec<usize> = match placement {
        Placement::PerComponent => g.components.iter().map(|segs| *segs.iter().min().unwrap()).collect(),
        Placement::PerEdge => {
            let (np, nn) = d.crossing_signs();
            if np + nn == 0 && d.component_count() > 0 {
                return Err(Error::input("per-edge slots need every component to meet a crossing"));
            }
            let mut first = vec![usize::MAX; d.edge_count()];
            for s in 0..g.segment_count() {
                let e = d.edge_of(s);
                first[e] = first[e].min(s);
            }
            let mut touched = vec![false; d.component_count()];
            for c in d.crossings() {
                for &s in &c.segs {
                    touched[g.comp_of[s]] = true;
                }
            }
            if touched.iter().any(|&x| !x) {
                return Err(Error::input("per-edge slots need every component to meet a crossing"));
            }
            first
        }
        Placement::At(list) => list
            .iter()
            .map(|&(l, x)| {
                if l < g.level_count() && x < g.width(l) {
                    Ok(g.seg(l, x))
                } else {
                    Err(Error::input(format!("slot site ({l}, {x}) is off the diagram")))
                }
            })
            .collect::<Result<_>>()?,
    };
    out.slots = sites
        .into_iter()
        .map(|s| {
            let (level, pos, width) = block(s);
            Slot { level, pos, width }
        })
        .collect();
    Ok(out)
}

/// A diagram with its slots filled by twisting.
#[derive(Clone, Debug)]
pub struct Twisted {
    pub tangle: SlicedTangle,
    /// For each slot, the crossing indices of each inserted full twist, bottom first.
    pub twists: Vec<Vec<Vec<usize>>>,
}

impl Twisted {
    /// Crossing indices of the topmost full twist of every slot that received one.
    pub fn last_twist_crossings(&self) -> Vec<usize> {
        self.twists.iter().filter_map(|t| t.last()).flatten().copied().collect()
    }
}

/// Fill every slot with `k` full twists of the given handedness; `k = 0`
/// just erases the slots.
pub fn insert_twists(t: &SlicedTangle, k: usize, h: Handedness) -> Result<Twisted> {
    let ks = vec![k as i64 * h.sign(); t.slots.len()];
    insert_twists_each(t, &ks)
}

/// Fill slot `s` with `ks[s]` signed full twists. Positive and negative
/// counts may not be mixed.
pub fn insert_twists_each(t: &SlicedTangle, ks: &[i64]) -> Result<Twisted> {
    if ks.len() != t.slots.len() {
        return Err(Error::input(format!("{} twist counts for {} slots", ks.len(), t.slots.len())));
    }
    if ks.iter().any(|&k| k > 0) && ks.iter().any(|&k| k < 0) {
        return Err(Error::input("right- and left-handed twisting cannot be mixed"));
    }
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); t.len() + 1];
    for (i, s) in t.slots.iter().enumerate() {
        if s.level > t.len() || s.pos + s.width > t.width(s.level) {
            return Err(Error::Width(format!("slot {i} does not fit its level")));
        }
        by_level[s.level].push(i);
    }
    let mut slices = Vec::new();
    let mut level_map = Vec::with_capacity(t.len() + 1);
    let mut crossings = 0usize;
    let mut twists = vec![Vec::new(); t.slots.len()];
    for l in 0..=t.len() {
        level_map.push(slices.len());
        let mut here = by_level[l].clone();
        here.sort_by_key(|&i| t.slots[i].pos);
        for i in here {
            let s = t.slots[i];
            let one = full_twists(s.width, ks[i].signum()).to_tangle();
            for _ in 0..ks[i].unsigned_abs() {
                let idx: Vec<usize> = (crossings..crossings + one.len()).collect();
                crossings += one.len();
                twists[i].push(idx);
                slices.extend(one.slices().iter().map(|x| x.shifted(s.pos)));
            }
        }
        if l < t.len() {
            let x = t.slices()[l];
            if x.is_crossing() {
                crossings += 1;
            }
            slices.push(x);
        }
    }
    let mut out = SlicedTangle::new(t.bottom(), slices)?;
    out.hints = t.hints.iter().map(|h| Hint { level: level_map[h.level], ..*h }).collect();
    Ok(Twisted { tangle: out, twists })
}

/// Fill slot `slot` with the turnback `e_iota` (1-based) and leave the other slots in place.
pub fn fill_slots_with_turnback(t: &SlicedTangle, slot: usize, iota: usize) -> Result<SlicedTangle> {
    let s = *t.slots.get(slot).ok_or_else(|| Error::input(format!("no slot {slot}")))?;
    if iota < 1 || iota >= s.width {
        return Err(Error::input(format!("turnback index {iota} outside 1..{}", s.width)));
    }
    let mut out = t.insert_at(s.level, &[Slice::Turn(s.pos + iota - 1)])?;
    out.slots.remove(slot);
    // Hints on the slot level above the turnback would now sit on a different strand.
    out.hints.retain(|h| !(h.level == s.level && h.pos >= s.pos && h.pos < s.pos + s.width));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::braid::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    #[test]
    fn hopf_cable_counts() {
        let h = ColoredLink::uniform(closure(2, &[1, 1]), 3).unwrap();
        let c = cable(&h, &Placement::PerComponent).unwrap();
        assert_eq!(c.crossing_count(), 18);
        assert_eq!(c.slots.len(), 2);
        let d = LinkDiagram::new(c.clone()).unwrap();
        assert_eq!(d.crossing_signs(), (18, 0));
        let tw = insert_twists(&c, 2, Handedness::Left).unwrap();
        assert_eq!(tw.tangle.crossing_count(), 18 + 2 * 2 * 6);
        assert_eq!(tw.twists[1].len(), 2);
    }

    #[test]
    fn trefoil_per_edge() {
        let t = ColoredLink::uniform(closure(2, &[1, 1, 1]), 2).unwrap();
        let c = cable(&t, &Placement::PerEdge).unwrap();
        assert_eq!(c.crossing_count(), 12);
        assert_eq!(c.slots.len(), 6);
    }

    #[test]
    fn unknot_twists_give_torus_links() {
        let u = ColoredLink::uniform(LinkDiagram::new(SlicedTangle::identity(1).trace_closure().unwrap()).unwrap(), 3)
            .unwrap();
        let c = cable(&u, &Placement::PerComponent).unwrap();
        assert_eq!(c.slots.len(), 1);
        let tw = insert_twists(&c, 1, Handedness::Right).unwrap();
        let d = LinkDiagram::new(tw.tangle).unwrap();
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.crossing_signs(), (6, 0));
        assert!(insert_twists(&c, 0, Handedness::Right).unwrap().tangle.slots.is_empty());
    }

    #[test]
    fn mixing_is_rejected() {
        let mut t = SlicedTangle::identity(4);
        t.slots = vec![Slot { level: 0, pos: 0, width: 2 }, Slot { level: 0, pos: 2, width: 2 }];
        assert!(insert_twists_each(&t, &[1, -1]).is_err());
    }
}
