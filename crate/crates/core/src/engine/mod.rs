//! Khovanov complexes: the raw cube, the scanning simplifier, exact homology
//! over F2 and Z, and the mapping cone along a crossing.

pub mod cobordism;
pub mod complex;
pub mod cone;
pub mod cube;
pub mod homology;
pub mod scan;

pub use complex::{ChainComplex, GenTag, Group, HomologyTable, QBlock, SparseMatrix};
pub use cone::{cone_split, induced_rank_f2, is_quasi_iso_f2, ChainMap, ConeSplit};
pub use cube::{build_cube, build_cube_where, CubeLimits};
pub use homology::{block_homology, homology, is_acyclic};
pub use scan::{scan, simplify_scan, FlagRule, ScanOptions, ScanOutput};

use crate::algebra::{LaurentPoly, RingKind};
use crate::error::Result;
use crate::tangle::LinkDiagram;

/// How to build the complex of a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Raw,
    #[default]
    Scan,
}

/// Homology of a diagram, optionally restricted to some raw quantum degrees.
pub fn khovanov(d: &LinkDiagram, ring: RingKind, method: Method, q: Option<&[i64]>) -> Result<HomologyTable> {
    let c = match method {
        Method::Raw => build_cube(d, q)?,
        Method::Scan => {
            let window = q.map(|qs| (*qs.iter().min().unwrap_or(&0), *qs.iter().max().unwrap_or(&0)));
            let mut c = scan(d, ring, &ScanOptions { q_window: window, ..Default::default() })?.complex;
            if let Some(qs) = q {
                c.blocks.retain(|j, _| qs.contains(j));
            }
            c
        }
    };
    homology(&c, ring)
}

/// Graded Euler characteristic of a homology table.
pub fn euler_characteristic(h: &HomologyTable) -> LaurentPoly {
    h.euler_characteristic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    #[test]
    fn known_values() {
        let u = khovanov(&closure(1, &[]), RingKind::Z, Method::Raw, None).unwrap();
        assert_eq!(u.groups.iter().map(|g| (g.i, g.j, g.rank)).collect::<Vec<_>>(), vec![(0, -1, 1), (0, 1, 1)]);
        let h = khovanov(&closure(2, &[1, 1]), RingKind::Z, Method::Raw, None).unwrap();
        assert_eq!(
            h.groups.iter().map(|g| (g.i, g.j, g.rank)).collect::<Vec<_>>(),
            vec![(0, 0, 1), (0, 2, 1), (2, 4, 1), (2, 6, 1)]
        );
        assert!(h.groups.iter().all(|g| g.torsion.is_empty()));
    }

    #[test]
    fn scan_matches_cube() {
        let words: Vec<(usize, Vec<i32>)> = vec![
            (1, vec![]),
            (2, vec![1, 1]),
            (2, vec![-1, -1]),
            (2, vec![1, 1, 1]),
            (3, vec![1, -2, 1, -2]),
            (3, vec![1, 2, 1, 2]),
            (2, vec![1, 1, 1, 1, 1]),
            (3, vec![1, 2, 1, 2, 1, 2, 1, 2]),
            (4, vec![1, -2, 3, 1, 2, -3, -1, 2]),
            (2, vec![1]),
            (3, vec![]),
        ];
        for (n, w) in words {
            let d = closure(n, &w);
            for ring in [RingKind::F2, RingKind::Z] {
                let a = khovanov(&d, ring, Method::Raw, None).unwrap();
                let b = khovanov(&d, ring, Method::Scan, None).unwrap();
                assert_eq!(a, b, "{n} {w:?} {ring:?}");
            }
        }
    }

    #[test]
    fn trefoil_torsion() {
        let t = khovanov(&closure(2, &[1, 1, 1]), RingKind::Z, Method::Scan, None).unwrap();
        assert!(t.groups.iter().any(|g| g.torsion == vec![crate::algebra::Int::new(2)]));
    }
}
