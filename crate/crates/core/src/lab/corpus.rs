//! A fixed corpus of small diagrams for consistency checks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::tangle::{torus_braid_fractional, BraidWord, LinkDiagram, SlicedTangle};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: LinkDiagram,
}

fn closure(w: &BraidWord) -> Result<LinkDiagram> {
    LinkDiagram::new(w.to_tangle().trace_closure()?)
}

/// `count` braids with `letters` nonzero letters on 3 or 4 strands, drawn from `seed`.
pub fn random_braids(seed: u64, count: usize, letters: usize) -> Result<Vec<BraidWord>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n: usize = rng.gen_range(3..=4);
            let w = (0..letters)
                .map(|_| {
                    let g = rng.gen_range(1..n as i32);
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            BraidWord::new(n, w)
        })
        .collect()
}

/// Unknot, `T(2, m)` for `m <= 8`, `T(3, m)` for `m <= 6`, both Hopf links,
/// both trefoils, the figure-eight and 14 random 8-crossing braid closures.
pub fn corpus() -> Result<Vec<CorpusEntry>> {
    let mut out = vec![CorpusEntry {
        name: "unknot".into(),
        diagram: LinkDiagram::new(SlicedTangle::identity(1).trace_closure()?)?,
    }];
    let mut push = |name: String, w: BraidWord| -> Result<()> {
        out.push(CorpusEntry { name, diagram: closure(&w)? });
        Ok(())
    };
    for m in 1..=8 {
        push(format!("T(2,{m})"), torus_braid_fractional(2, m))?;
    }
    for m in 1..=6 {
        push(format!("T(3,{m})"), torus_braid_fractional(3, m))?;
    }
    push("hopf+".into(), BraidWord::new(2, vec![1, 1])?)?;
    push("hopf-".into(), BraidWord::new(2, vec![-1, -1])?)?;
    push("trefoil+".into(), BraidWord::new(2, vec![1, 1, 1])?)?;
    push("trefoil-".into(), BraidWord::new(2, vec![-1, -1, -1])?)?;
    push("figure-eight".into(), BraidWord::new(3, vec![1, -2, 1, -2])?)?;
    for (t, w) in random_braids(8, 14, 8)?.into_iter().enumerate() {
        push(format!("random-{t} {w}"), w)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_size_and_determinism() {
        let a = corpus().unwrap();
        assert!(a.len() >= 30);
        let b = corpus().unwrap();
        let names = |c: &[CorpusEntry]| c.iter().map(|e| e.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
        assert_eq!(a.iter().find(|e| e.name == "T(3,6)").unwrap().diagram.crossing_count(), 12);
    }
}
