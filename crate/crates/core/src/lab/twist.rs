//! Twist sequences `D(0), D(1), ...` with every slot filled by `k` full
//! twists, read one normalized q-degree at a time.
//!
//! The step `D(k) -> D(k-1)` is the face map onto the resolution of the
//! topmost twist that gives the identity braid: all-zero for right-handed
//! twists (a projection onto a quotient), all-one for left-handed twists (an
//! inclusion of a subcomplex). The step is certified when the complementary
//! part of the cube is acyclic in the degree, read off the scan's flagged
//! objects, and on small diagrams also by building the face map on the cube.

use num_rational::Ratio;

use crate::algebra::RingKind;
use crate::engine::{
    build_cube_where, homology, is_acyclic, is_quasi_iso_f2, scan, ChainComplex, ChainMap, CubeLimits, FlagRule,
    HomologyTable, QBlock, ScanOptions,
};
use crate::error::{Error, Result};
use crate::grading::{bound_b_minus, bound_b_plus, circles_uniform, first_k_above, Bound, GradingContext, StableOffsets};
use crate::tangle::{cable, insert_twists, ColoredLink, Handedness, LinkDiagram, Placement, SlicedTangle};

use super::report::{Cell, Certificate, StabilizationReport};

/// Knobs shared by the experiments.
#[derive(Clone, Debug)]
pub struct LabConfig {
    pub ring: RingKind,
    /// Live-object budget of one scan.
    pub max_objects: usize,
    /// Diagrams up to this many crossings also get the face map checked on the cube.
    pub cube_crossings: usize,
    /// Steps computed past the predicted bound.
    pub extra_steps: usize,
    /// Largest twist count accepted.
    pub k_limit: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig { ring: RingKind::Z, max_objects: 2_000_000, cube_crossings: 12, extra_steps: 2, k_limit: 32 }
    }
}

pub(crate) fn flag_rule(h: Handedness) -> FlagRule {
    match h {
        Handedness::Right => FlagRule::AllZero,
        Handedness::Left => FlagRule::AllOne,
    }
}

/// Homology of a diagram in some raw degrees, with the unflagged part of the scan.
pub(crate) struct ScanCell {
    pub table: HomologyTable,
    pub unflagged: ChainComplex,
    pub signs: [usize; 2],
}

pub(crate) fn scan_cell(
    d: &LinkDiagram,
    designated: &[usize],
    h: Handedness,
    raw_js: Option<&[i64]>,
    offsets: StableOffsets,
    cfg: &LabConfig,
) -> Result<ScanCell> {
    let q_window = raw_js.map(|js| (*js.iter().min().unwrap_or(&0), *js.iter().max().unwrap_or(&0)));
    let opts = ScanOptions { q_window, designated: designated.to_vec(), flag: flag_rule(h), max_objects: cfg.max_objects };
    let out = scan(d, cfg.ring, &opts)?;
    let mut c = out.complex;
    if let Some(js) = raw_js {
        c.blocks.retain(|j, _| js.contains(j));
    }
    let mut table = homology(&c, cfg.ring)?;
    table.offsets = offsets;
    let (p, m) = d.crossing_signs();
    Ok(ScanCell { table, unflagged: out.unflagged, signs: [p, m] })
}

/// Whether the face map between `d` and its face on `designated` induces an
/// isomorphism over F2 in raw degree `raw_j`, built on the cube.
pub fn face_map_is_iso(d: &LinkDiagram, designated: &[usize], h: Handedness, raw_j: i64) -> Result<bool> {
    let mask: u64 = designated.iter().fold(0, |m, &c| m | 1 << c);
    let lim = CubeLimits::default();
    let q = [raw_j];
    let full = build_cube_where(d, Some(&q), &lim, |_| true)?;
    let face = match h {
        Handedness::Right => build_cube_where(d, Some(&q), &lim, |s| s & mask == 0)?,
        Handedness::Left => build_cube_where(d, Some(&q), &lim, |s| s & mask == mask)?,
    };
    let empty = QBlock::new(raw_j);
    let fb = full.block(raw_j).unwrap_or(&empty);
    let eb = face.block(raw_j).unwrap_or(&empty);
    match h {
        Handedness::Right => is_quasi_iso_f2(fb, eb, &ChainMap::by_tags(&full, &face)),
        Handedness::Left => is_quasi_iso_f2(eb, fb, &ChainMap::by_tags(&face, &full)),
    }
}

/// Certificate of the face map out of a scanned cell in raw degree `raw_j`.
pub(crate) fn step_certificate(
    d: &LinkDiagram,
    designated: &[usize],
    h: Handedness,
    cell: &ScanCell,
    raw_j: i64,
    cfg: &LabConfig,
) -> (Certificate, Option<String>) {
    let acyclic = cell.unflagged.block(raw_j).is_none_or(|b| is_acyclic(b, cfg.ring));
    if d.crossing_count() <= cfg.cube_crossings {
        if let Ok(iso) = face_map_is_iso(d, designated, h, raw_j) {
            return match (iso, acyclic) {
                (true, true) => (Certificate::InducedIso, None),
                (false, false) => (Certificate::Failed, None),
                _ => (
                    Certificate::Failed,
                    Some(format!("cube map iso = {iso} but complement acyclic = {acyclic}")),
                ),
            };
        }
    }
    if acyclic {
        (Certificate::ComplementAcyclic, None)
    } else {
        (Certificate::Failed, None)
    }
}

/// Widths of the slots of a tangle.
pub fn slot_widths(t: &SlicedTangle) -> Vec<usize> {
    t.slots.iter().map(|s| s.width).collect()
}

/// The bound `b+` (right) or `b-` (left) at normalized degree `j`, largest
/// over the slots of width at least two; `None` when there is no such slot.
pub fn sequence_bound(base: &SlicedTangle, j: i64, h: Handedness) -> Result<Option<Bound>> {
    let mut best: Option<Bound> = None;
    for (s, slot) in base.slots.iter().enumerate() {
        if slot.width < 2 {
            continue;
        }
        let b = match h {
            Handedness::Right => bound_b_plus(j, base, s)?,
            Handedness::Left => bound_b_minus(j, base, s)?,
        };
        best = Some(best.map_or(b, |x: Bound| x.max(b)));
    }
    Ok(best)
}

/// The diagram `D(0)`: slots erased, orientation from the hints.
pub fn untwisted(base: &SlicedTangle) -> Result<LinkDiagram> {
    LinkDiagram::new(base.clone().without_slots())
}

/// `count` degrees of the right parity starting at the extreme normalized
/// degree the sequence can reach: the lowest for right-handed twisting, the
/// highest for left-handed.
pub fn default_window(base: &SlicedTangle, h: Handedness, count: usize) -> Result<Vec<i64>> {
    let plain = base.clone().without_slots();
    Ok(match h {
        Handedness::Right => {
            let start = -(circles_uniform(&plain, false)? as i64);
            (0..count as i64).map(|t| start + 2 * t).collect()
        }
        Handedness::Left => {
            let top = plain.crossing_count() as i64 + circles_uniform(&plain, true)? as i64;
            (0..count as i64).map(|t| top - 2 * t).collect()
        }
    })
}

/// Twist sequences for several normalized degrees at once. `k_max` defaults
/// to the largest predicted bound plus `cfg.extra_steps`.
pub fn twist_window(
    base: &SlicedTangle,
    js: &[i64],
    h: Handedness,
    k_max: Option<usize>,
    cfg: &LabConfig,
) -> Result<Vec<StabilizationReport>> {
    if !base.is_closed() {
        return Err(Error::input("twist sequences need a closed diagram"));
    }
    if js.is_empty() {
        return Err(Error::input("no degrees requested"));
    }
    let mut bounds = Vec::new();
    for &j in js {
        let b = sequence_bound(base, j, h)?;
        let predicted = b.map_or(0, |b| first_k_above(b).max(0));
        bounds.push((b, predicted));
    }
    let top_predicted = bounds.iter().map(|b| b.1).max().unwrap_or(0) as usize;
    let k_top = match k_max {
        Some(k) if k < top_predicted => {
            return Err(Error::input(format!("k_max = {k} lies below the predicted bound {top_predicted}")));
        }
        Some(k) => k,
        None => top_predicted + cfg.extra_steps,
    };
    if k_top > cfg.k_limit {
        return Err(Error::Resource(format!("k = {k_top} exceeds the twist limit {}", cfg.k_limit)));
    }
    let widths = slot_widths(base);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); js.len()];
    for k in 0..=k_top {
        let tw = insert_twists(base, k, h)?;
        let d = LinkDiagram::new(tw.tangle.clone())?;
        let off = GradingContext::measure(&d, &tw).sequence_offsets(k as i64, h, &widths);
        let raw: Vec<i64> = js.iter().map(|j| j + off.q).collect();
        let designated = tw.last_twist_crossings();
        let sc = match scan_cell(&d, &designated, h, Some(&raw), off, cfg) {
            Ok(sc) => sc,
            Err(Error::Resource(msg)) => {
                for (t, _) in js.iter().enumerate() {
                    let mut c = Cell::new(vec![k as i64], off, Vec::new(), Certificate::Unverified);
                    c.note = Some(msg.clone());
                    cells[t].push(c);
                }
                break;
            }
            Err(e) => return Err(e),
        };
        let normalized = sc.table.normalized();
        for (t, &j) in js.iter().enumerate() {
            let groups = normalized.groups.iter().filter(|g| g.j == j).cloned().collect();
            let (certificate, note) = if k == 0 || designated.is_empty() {
                (Certificate::Base, None)
            } else {
                step_certificate(&d, &designated, h, &sc, raw[t], cfg)
            };
            let mut c = Cell::new(vec![k as i64], off, groups, certificate);
            c.signs = Some(sc.signs);
            c.note = note;
            cells[t].push(c);
        }
    }
    Ok(js
        .iter()
        .zip(bounds)
        .zip(cells)
        .map(|((&j, (b, predicted)), cells)| {
            let (observed, certified) = stabilization(&cells, k_top);
            StabilizationReport {
                j,
                handedness: h,
                bound: b.map_or_else(|| "none".to_string(), |b| format_ratio(&b)),
                predicted,
                observed,
                certified,
                k_max: k_top,
                cells,
            }
        })
        .collect())
}

fn format_ratio(b: &Ratio<i64>) -> String {
    if b.is_integer() {
        b.numer().to_string()
    } else {
        format!("{}/{}", b.numer(), b.denom())
    }
}

/// First index from which all cells carry the same groups, and whether every
/// later step is certified by a chain map.
fn stabilization(cells: &[Cell], k_top: usize) -> (Option<i64>, bool) {
    if cells.len() != k_top + 1 || cells.iter().any(|c| c.certificate == Certificate::Unverified) {
        return (None, false);
    }
    let last = &cells[k_top].groups;
    let mut k0 = k_top;
    while k0 > 0 && cells[k0 - 1].groups == *last {
        k0 -= 1;
    }
    let certified = cells[k0 + 1..].iter().all(|c| c.certificate.is_map_level());
    (Some(k0 as i64), certified)
}

/// One degree of a twist sequence.
pub fn twist_sequence(
    base: &SlicedTangle,
    j: i64,
    h: Handedness,
    k_max: Option<usize>,
    cfg: &LabConfig,
) -> Result<StabilizationReport> {
    Ok(twist_window(base, &[j], h, k_max, cfg)?.remove(0))
}

/// A stabilized block of colored homology.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ColoredBlock {
    /// Degree in the colored labelling: the raw degree for untwisted diagrams.
    pub degree: i64,
    /// The same degree in the normalization of the twist sequence.
    pub j: i64,
    pub k: i64,
    pub cell: Cell,
    pub sequence: StabilizationReport,
}

/// Colored homology of `l` in colored degree `degree` (the raw degree of
/// `D(0)`, shifted along the twist sequence), read at the first certified
/// stable `k`.
pub fn colored_homology(l: &ColoredLink, degree: i64, h: Handedness, cfg: &LabConfig) -> Result<ColoredBlock> {
    let base = cable(l, &Placement::PerComponent)?;
    colored_block(&base, degree, h, cfg)
}

/// [`colored_homology`] for an already cabled diagram.
pub fn colored_block(base: &SlicedTangle, degree: i64, h: Handedness, cfg: &LabConfig) -> Result<ColoredBlock> {
    let n_z = untwisted(base)?.n_shift();
    let j = degree - n_z;
    let seq = twist_sequence(base, j, h, None, cfg)?;
    if seq.unverified() {
        return Err(Error::Resource(format!("degree {degree} did not fit the budget before stabilizing")));
    }
    let mut cell = seq.stable_cell().cloned().ok_or_else(|| Error::Resource("sequence did not stabilize".into()))?;
    // The step into the stable cell changes the groups; the step after it
    // is the one that witnesses stability.
    if let Some(next) = seq.cells.iter().find(|c| c.index[0] == cell.index[0] + 1) {
        cell.certificate = next.certificate;
    }
    if !seq.within_bound() {
        return Err(Error::Arithmetic(format!(
            "degree {degree} stabilized at {:?}, past the predicted {}",
            seq.observed, seq.predicted
        )));
    }
    Ok(ColoredBlock { degree, j, k: cell.index[0], cell, sequence: seq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{khovanov, Method};
    use crate::tangle::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    fn unknot_cable(n: usize) -> SlicedTangle {
        let u = LinkDiagram::new(SlicedTangle::identity(1).trace_closure().unwrap()).unwrap();
        cable(&ColoredLink::uniform(u, n).unwrap(), &Placement::PerComponent).unwrap()
    }

    #[test]
    fn unknot_two_lowest_degree() {
        let c = unknot_cable(2);
        let r = twist_sequence(&c, -2, Handedness::Right, None, &LabConfig::default()).unwrap();
        assert!(r.within_bound(), "{r:?}");
        assert!(r.certified);
        // T(2, 2k) has Z in its lowest degree at i = 0 for every k >= 1.
        let g = &r.stable_cell().unwrap().groups;
        assert_eq!(g.len(), 1);
        assert_eq!((g[0].i, g[0].rank), (0, 1));
    }

    #[test]
    fn below_the_bottom_is_zero() {
        let c = unknot_cable(2);
        let r = twist_sequence(&c, -6, Handedness::Right, None, &LabConfig::default()).unwrap();
        assert_eq!(r.observed, Some(0));
        assert!(r.cells.iter().all(Cell::is_zero));
    }

    #[test]
    fn cube_and_scan_certificates_agree() {
        let c = unknot_cable(2);
        for h in [Handedness::Right, Handedness::Left] {
            let w = default_window(&c, h, 4).unwrap();
            let cfg = LabConfig { cube_crossings: 10, ..Default::default() };
            for r in twist_window(&c, &w, h, Some(4), &cfg).unwrap() {
                for cell in &r.cells {
                    assert_ne!(cell.note.as_deref().map(|n| n.contains("cube")), Some(true), "{cell:?}");
                }
            }
        }
    }

    #[test]
    fn face_map_on_hopf_cable() {
        let h = closure(2, &[1, 1]);
        let c = cable(&ColoredLink::uniform(h, 2).unwrap(), &Placement::PerComponent).unwrap();
        let r = twist_window(&c, &default_window(&c, Handedness::Right, 3).unwrap(), Handedness::Right, None, &LabConfig::default())
            .unwrap();
        for s in &r {
            assert!(s.within_bound() && s.certified, "{s:?}");
        }
    }

    #[test]
    fn all_one_coloring_is_plain_homology() {
        let t = closure(2, &[1, 1, 1]);
        let kh = khovanov(&t, RingKind::Z, Method::Scan, None).unwrap();
        for q in [1, 3, 5, 7, 9] {
            let b = colored_homology(&ColoredLink::uniform(t.clone(), 1).unwrap(), q, Handedness::Right, &LabConfig::default())
                .unwrap();
            let want: Vec<_> = kh.groups.iter().filter(|g| g.j == q).map(|g| (g.i, g.rank, g.torsion.clone())).collect();
            let got: Vec<_> = b.cell.groups.iter().map(|g| (g.i, g.rank, g.torsion.clone())).collect();
            assert_eq!(got, want, "q = {q}");
        }
    }

    #[test]
    fn hopf_top_degree() {
        let h = closure(2, &[1, 1]);
        let b = colored_homology(&ColoredLink::uniform(h, 1).unwrap(), 6, Handedness::Right, &LabConfig::default()).unwrap();
        assert_eq!(b.cell.groups.iter().map(|g| g.rank).sum::<usize>(), 1);
    }

    #[test]
    fn k_max_below_bound_is_rejected() {
        let c = unknot_cable(3);
        assert!(twist_sequence(&c, 6, Handedness::Right, Some(0), &LabConfig::default()).is_err());
        let cfg = LabConfig { k_limit: 2, ..Default::default() };
        assert!(matches!(twist_sequence(&c, 40, Handedness::Right, None, &cfg), Err(Error::Resource(_))));
    }
}
