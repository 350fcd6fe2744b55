//! Negative crossing counts `c_i` of the diagrams `E_i` met while resolving
//! `T(n, n)` down to `T(n, n - 1)`.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::grading::StableOffsets;
use crate::tangle::{torus_braid_fractional, LinkDiagram};

use super::report::{Cell, Certificate, Report, Verdict};

/// Largest `n` accepted; orientations are enumerated exhaustively.
pub const APPENDIX_MAX_N: usize = 10;

/// Data for one `E_i`.
#[derive(Clone, Debug, Serialize)]
pub struct CiRow {
    pub i: usize,
    pub crossings: usize,
    pub components: usize,
    /// Negative crossings of `E_i` with the orientation inherited from `T(n, n)`.
    pub inherited: usize,
    /// Negative crossings with the orientation that follows the turnback
    /// through the pull: the least count over all orientations.
    pub c_i: usize,
    /// First Reidemeister moves of the pull.
    pub r1: usize,
    /// Second Reidemeister moves of the pull; each removes one negative crossing.
    pub r2: usize,
    pub crossing_drop: usize,
}

impl CiRow {
    /// Negative crossings removed by the recorded moves.
    pub fn removed_negative(&self) -> usize {
        self.r1 + self.r2
    }
}

/// `T(n, n)` closed, then the chain `D_i` (0-resolution of the topmost
/// crossing of `D_{i-1}`) and `E_i` (its 1-resolution), `i = 1..n-1`.
pub fn appendix_diagrams(n: usize) -> Result<(Vec<LinkDiagram>, Vec<LinkDiagram>)> {
    if n < 2 {
        return Err(Error::input("the count needs n >= 2"));
    }
    let d0 = LinkDiagram::new(torus_braid_fractional(n, n as i64).to_tangle().trace_closure()?)?;
    let mut ds = vec![d0];
    let mut es = Vec::new();
    for _ in 1..n {
        let prev = ds.last().unwrap();
        let top = (0..prev.crossing_count()).max_by_key(|&c| prev.crossings()[c].slice).unwrap();
        es.push(prev.smoothing(top, true)?);
        ds.push(prev.smoothing(top, false)?);
    }
    Ok((ds, es))
}

fn least_negative(d: &LinkDiagram) -> Result<usize> {
    let m = d.component_count();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << m) {
        let flip: Vec<bool> = (0..m).map(|b| mask >> b & 1 == 1).collect();
        best = best.min(d.reoriented(&flip)?.crossing_signs().1);
    }
    Ok(best)
}

/// Moves of the pull: for `E_1` the turnback passes `n - 2` second moves,
/// one negative first move and `n - 2` more second moves. For `E_i`, `i > 1`,
/// it swings around the torus braid with two negative first moves, leaving
/// `T(n-2, n-3)` behind.
fn recorded_moves(n: usize, i: usize) -> (usize, usize, usize) {
    if i == 1 {
        (1, 2 * (n - 2), 4 * n - 7)
    } else {
        let drop = (n - 1) * (n - 1) - (n - 3) * (n - 3);
        (2, (drop - 2) / 2, drop)
    }
}

pub fn appendix_rows(n: usize) -> Result<Vec<CiRow>> {
    if n > APPENDIX_MAX_N {
        return Err(Error::Resource(format!("n = {n} exceeds the cap {APPENDIX_MAX_N}")));
    }
    let (_, es) = appendix_diagrams(n)?;
    es.iter()
        .enumerate()
        .map(|(k, e)| {
            let i = k + 1;
            let (r1, r2, crossing_drop) = recorded_moves(n, i);
            Ok(CiRow {
                i,
                crossings: e.crossing_count(),
                components: e.component_count(),
                inherited: e.crossing_signs().1,
                c_i: least_negative(e)?,
                r1,
                r2,
                crossing_drop,
            })
        })
        .collect()
}

/// Check `c_i = 2n - 3` for every `i`, both as counted on `E_i` and as
/// tallied from the moves of the pull.
pub fn appendix_ci(n: usize) -> Result<Report> {
    let (ds, _) = appendix_diagrams(n)?;
    let rows = appendix_rows(n)?;
    let target = 2 * n - 3;
    let last = ds.last().unwrap();
    let mut checks = vec![(
        last.crossing_count() == (n - 1) * (n - 1),
        format!("D_{} has (n-1)^2 = {} crossings", n - 1, (n - 1) * (n - 1)),
    )];
    let mut cells = Vec::new();
    for r in &rows {
        checks.push((r.c_i == target, format!("c_{} = {} on E_{}", r.i, r.c_i, r.i)));
        checks.push((r.removed_negative() == target, format!("moves for E_{} remove {} negative crossings", r.i, r.removed_negative())));
        checks.push((r.r1 + 2 * r.r2 == r.crossing_drop, format!("moves for E_{} account for the crossing drop", r.i)));
        let mut c = Cell::new(vec![n as i64, r.i as i64], StableOffsets::default(), Vec::new(), Certificate::Base);
        c.signs = Some([r.crossings - r.c_i, r.c_i]);
        c.note = Some(serde_json::to_string(r).expect("rows serialize"));
        cells.push(c);
    }
    Ok(Report {
        experiment: "appendix_ci".into(),
        params: json!({"axes": ["n", "i"], "n": n, "expected": target, "rows": rows}),
        cells,
        verdict: Verdict::from_checks(&checks, false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_n() {
        let r = appendix_rows(2).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].c_i, 1);
        for n in 2..=6 {
            assert!(appendix_ci(n).unwrap().passed(), "n = {n}");
        }
    }

    #[test]
    fn e_i_sizes() {
        // E_i has the n(n-1) crossings of T(n, n) minus the i resolved ones.
        for n in 3..=5 {
            for r in appendix_rows(n).unwrap() {
                assert_eq!(r.crossings, n * (n - 1) - r.i);
            }
        }
    }

    #[test]
    fn inherited_orientation_differs() {
        let r = appendix_rows(4).unwrap();
        assert!(r.iter().any(|x| x.inherited != x.c_i));
    }
}
