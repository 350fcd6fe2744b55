//! Planar trivalent spin networks, drawn as stacks of labelled bundles.

use serde::{Deserialize, Serialize};

use super::braid::full_twists;
use super::slice::{Slice, SlicedTangle, Slot};
use crate::error::{Error, Result};

/// One slice of a spin network. Positions count bundles, not strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BundleSlice {
    /// A new arc of bundles labelled `label` at `pos`, `pos + 1`.
    Cup { pos: usize, label: usize },
    /// Close bundles `pos` and `pos + 1`, which must share a label.
    Cap { pos: usize },
    /// A vertex: bundle `pos` splits into `left` and `right`.
    Split { pos: usize, left: usize, right: usize },
    /// A vertex: bundles `pos` and `pos + 1` merge into one labelled `label`.
    Merge { pos: usize, label: usize },
    /// Bundle `pos` crosses bundle `pos + 1`; `over_right` has the bundle
    /// moving up-right on top.
    Cross { pos: usize, over_right: bool },
    /// `k` signed full twists of the strands of bundle `pos`.
    Twist { pos: usize, k: i64 },
}

/// Strands shared by each pair of edges at a vertex with labels `(a, b, c)`,
/// in the order `(a b, a c, b c)`: `(a + b - c) / 2` and so on.
pub fn splitting_counts(a: usize, b: usize, c: usize) -> Result<(usize, usize, usize)> {
    if a > b + c || b > a + c || c > a + b {
        return Err(Error::input(format!("labels ({a}, {b}, {c}) break the triangle inequality")));
    }
    if !(a + b + c).is_multiple_of(2) {
        return Err(Error::input(format!("labels ({a}, {b}, {c}) have odd sum")));
    }
    Ok(((a + b - c) / 2, (a + c - b) / 2, (b + c - a) / 2))
}

/// A closed planar spin network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinNetwork {
    pub slices: Vec<BundleSlice>,
    labels: Vec<Vec<usize>>,
}

impl SpinNetwork {
    pub fn new(slices: Vec<BundleSlice>) -> Result<Self> {
        let mut labels = vec![Vec::<usize>::new()];
        for (k, s) in slices.iter().enumerate() {
            let mut cur = labels.last().unwrap().clone();
            let bad = || Error::input(format!("bundle slice {k} ({s:?}) does not fit"));
            match *s {
                BundleSlice::Cup { pos, label } => {
                    if pos > cur.len() || label == 0 {
                        return Err(bad());
                    }
                    cur.splice(pos..pos, [label, label]);
                }
                BundleSlice::Cap { pos } => {
                    if pos + 1 >= cur.len() || cur[pos] != cur[pos + 1] {
                        return Err(bad());
                    }
                    cur.drain(pos..pos + 2);
                }
                BundleSlice::Split { pos, left, right } => {
                    if pos >= cur.len() || left == 0 || right == 0 {
                        return Err(bad());
                    }
                    splitting_counts(left, right, cur[pos])?;
                    cur.splice(pos..pos + 1, [left, right]);
                }
                BundleSlice::Merge { pos, label } => {
                    if pos + 1 >= cur.len() || label == 0 {
                        return Err(bad());
                    }
                    splitting_counts(cur[pos], cur[pos + 1], label)?;
                    cur.splice(pos..pos + 2, [label]);
                }
                BundleSlice::Cross { pos, .. } => {
                    if pos + 1 >= cur.len() {
                        return Err(bad());
                    }
                    cur.swap(pos, pos + 1);
                }
                BundleSlice::Twist { pos, .. } => {
                    if pos >= cur.len() {
                        return Err(bad());
                    }
                }
            }
            labels.push(cur);
        }
        if !labels.last().unwrap().is_empty() {
            return Err(Error::input("spin network must close up"));
        }
        Ok(SpinNetwork { slices, labels })
    }

    /// A single loop labelled `n`.
    pub fn circle(n: usize) -> Result<Self> {
        Self::new(vec![BundleSlice::Cup { pos: 0, label: n }, BundleSlice::Cap { pos: 0 }])
    }

    /// The theta graph with edge labels `a`, `b`, `c`.
    pub fn theta(a: usize, b: usize, c: usize) -> Result<Self> {
        Self::new(vec![
            BundleSlice::Cup { pos: 0, label: c },
            BundleSlice::Split { pos: 0, left: a, right: b },
            BundleSlice::Merge { pos: 1, label: a },
            BundleSlice::Cap { pos: 0 },
        ])
    }

    /// Bundle labels at each level.
    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    /// Graph edges: bundle segments joined through everything but vertices.
    /// Returns the edge of every `(level, pos)` segment and the edge count.
    pub fn edges(&self) -> (Vec<Vec<usize>>, usize) {
        let mut base = Vec::new();
        let mut n = 0;
        for l in &self.labels {
            base.push(n);
            n += l.len();
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut join = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        };
        for (k, s) in self.slices.iter().enumerate() {
            let (lo, hi) = (base[k], base[k + 1]);
            let w = self.labels[k].len();
            let through = |x: usize| -> Option<usize> {
                match *s {
                    BundleSlice::Cup { pos, .. } => Some(if x < pos { x } else { x + 2 }),
                    BundleSlice::Cap { pos } => {
                        if x < pos {
                            Some(x)
                        } else if x > pos + 1 {
                            Some(x - 2)
                        } else {
                            None
                        }
                    }
                    BundleSlice::Split { pos, .. } => match x.cmp(&pos) {
                        std::cmp::Ordering::Less => Some(x),
                        std::cmp::Ordering::Equal => None,
                        std::cmp::Ordering::Greater => Some(x + 1),
                    },
                    BundleSlice::Merge { pos, .. } => {
                        if x < pos {
                            Some(x)
                        } else if x > pos + 1 {
                            Some(x - 1)
                        } else {
                            None
                        }
                    }
                    BundleSlice::Cross { pos, .. } => Some(if x == pos {
                        pos + 1
                    } else if x == pos + 1 {
                        pos
                    } else {
                        x
                    }),
                    BundleSlice::Twist { .. } => Some(x),
                }
            };
            for x in 0..w {
                if let Some(y) = through(x) {
                    join(lo + x, hi + y);
                }
            }
            match *s {
                BundleSlice::Cup { pos, .. } => join(hi + pos, hi + pos + 1),
                BundleSlice::Cap { pos } => join(lo + pos, lo + pos + 1),
                _ => {}
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        let mut out = Vec::new();
        for (l, labels) in self.labels.iter().enumerate() {
            let mut row = Vec::new();
            for x in 0..labels.len() {
                let r = find(&mut parent, base[l] + x);
                if id[r] == usize::MAX {
                    id[r] = count;
                    count += 1;
                }
                row.push(id[r]);
            }
            out.push(row);
        }
        (out, count)
    }

    /// Expand every bundle into parallel strands with balanced splitting at
    /// vertices, and put one projector slot on each graph edge.
    pub fn diagram(&self) -> Result<SlicedTangle> {
        let off = |l: usize, x: usize| self.labels[l][..x].iter().sum::<usize>();
        let mut slices = Vec::new();
        let mut level_map = Vec::new();
        for (k, s) in self.slices.iter().enumerate() {
            level_map.push(slices.len());
            let lab = &self.labels[k];
            match *s {
                BundleSlice::Cup { pos, label } => {
                    let b = off(k, pos);
                    slices.extend((b..b + label).map(Slice::Cup));
                }
                BundleSlice::Cap { pos } => {
                    let b = off(k, pos);
                    slices.extend((b..b + lab[pos]).rev().map(Slice::Cap));
                }
                BundleSlice::Split { pos, left, right } => {
                    let (m, _, _) = splitting_counts(left, right, lab[pos])?;
                    let u = left - m;
                    let b = off(k, pos) + u;
                    slices.extend((b..b + m).map(Slice::Cup));
                }
                BundleSlice::Merge { pos, label } => {
                    let (a, bb) = (lab[pos], lab[pos + 1]);
                    let (m, _, _) = splitting_counts(a, bb, label)?;
                    let b = off(k, pos) + a - m;
                    slices.extend((b..b + m).rev().map(Slice::Cap));
                }
                BundleSlice::Cross { pos, over_right } => {
                    let (a, bb, base) = (lab[pos], lab[pos + 1], off(k, pos));
                    for i in (0..a).rev() {
                        for j in 0..bb {
                            let p = base + i + j;
                            slices.push(if over_right { Slice::Pos(p) } else { Slice::Neg(p) });
                        }
                    }
                }
                BundleSlice::Twist { pos, k: tw } => {
                    let b = off(k, pos);
                    slices.extend(full_twists(lab[pos], tw).to_tangle().slices().iter().map(|x| x.shifted(b)));
                }
            }
        }
        level_map.push(slices.len());
        let mut t = SlicedTangle::new(0, slices)?;
        let (edge, count) = self.edges();
        let mut placed = vec![false; count];
        for (l, row) in edge.iter().enumerate() {
            for (x, &e) in row.iter().enumerate() {
                if !placed[e] {
                    placed[e] = true;
                    t.slots.push(Slot { level: level_map[l], pos: off(l, x), width: self.labels[l][x] });
                }
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert_eq!(splitting_counts(1, 1, 2).unwrap(), (0, 1, 1));
        assert!(SpinNetwork::theta(1, 1, 2).is_ok());
        assert!(SpinNetwork::theta(1, 1, 3).is_err());
        assert!(SpinNetwork::theta(1, 2, 2).is_err());
    }

    #[test]
    fn theta_diagram() {
        let g = SpinNetwork::theta(2, 2, 2).unwrap();
        assert_eq!(g.edges().1, 3);
        let t = g.diagram().unwrap();
        assert!(t.is_closed());
        assert_eq!(t.slots.len(), 3);
        assert!(t.slots.iter().all(|s| s.width == 2));
    }

    #[test]
    fn circle_diagram() {
        let t = SpinNetwork::circle(3).unwrap().diagram().unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.slots, vec![Slot { level: 3, pos: 0, width: 3 }]);
    }
}
