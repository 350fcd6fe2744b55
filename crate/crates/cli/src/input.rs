//! Reading diagrams and spin networks from files or inline arguments.

use std::fs;
use std::path::Path;

use khtail_core::tangle::io::parse;
use khtail_core::tangle::{BundleSlice, LinkDiagram, SpinNetwork};

use crate::error::CliError;

/// Contents of `arg` if it names a file, else `arg` itself when it looks like
/// an inline braid (`B2:1,1`) or PD code.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    let p = Path::new(arg);
    if p.is_file() {
        return fs::read_to_string(p).map_err(|e| CliError::Io(format!("{arg}: {e}")));
    }
    let t = arg.trim_start();
    if (t.starts_with('B') && t.contains(':')) || t.starts_with("PD") || t.starts_with('X') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    Err(CliError::Input(format!("{arg}: no such file, and not an inline braid or PD code")))
}

/// A diagram plus its canonical text: the slice list with the orientation pinned.
pub struct Loaded {
    pub diagram: LinkDiagram,
    pub canonical: String,
}

pub fn load_diagram(arg: &str) -> Result<Loaded, CliError> {
    let text = read_source(arg)?;
    let diagram = LinkDiagram::new(parse(&text)?)?;
    let canonical = diagram.oriented_tangle().to_text();
    // Reparse the canonical form so that equal keys always mean equal inputs.
    let diagram = LinkDiagram::new(parse(&canonical)?)?;
    Ok(Loaded { diagram, canonical })
}

/// Spin network text: one slice per line,
///
/// ```text
/// cup POS LABEL | cap POS | split POS LEFT RIGHT | merge POS LABEL
/// cross POS over|under | twist POS K
/// ```
///
/// or one of the shortcuts `circle N` and `theta A B C`, or a JSON array of
/// slices.
pub fn parse_spin(text: &str) -> Result<SpinNetwork, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let slices: Vec<BundleSlice> =
            serde_json::from_str(trimmed).map_err(|e| CliError::Input(format!("spin network JSON: {e}")))?;
        return Ok(SpinNetwork::new(slices)?);
    }
    let mut slices = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| CliError::Input(format!("line {}: {msg}: `{line}`", ln + 1));
        let int = |i: usize| -> Result<i64, CliError> {
            toks.get(i).ok_or_else(|| bad("missing argument"))?.parse::<i64>().map_err(|_| bad("bad number"))
        };
        let nat = |i: usize| -> Result<usize, CliError> { usize::try_from(int(i)?).map_err(|_| bad("negative number")) };
        let want = |n: usize| if toks.len() == n { Ok(()) } else { Err(bad(&format!("expected {} fields", n))) };
        match toks[0] {
            "circle" => {
                want(2)?;
                return Ok(SpinNetwork::circle(nat(1)?)?);
            }
            "theta" => {
                want(4)?;
                return Ok(SpinNetwork::theta(nat(1)?, nat(2)?, nat(3)?)?);
            }
            "cup" => {
                want(3)?;
                slices.push(BundleSlice::Cup { pos: nat(1)?, label: nat(2)? });
            }
            "cap" => {
                want(2)?;
                slices.push(BundleSlice::Cap { pos: nat(1)? });
            }
            "split" => {
                want(4)?;
                slices.push(BundleSlice::Split { pos: nat(1)?, left: nat(2)?, right: nat(3)? });
            }
            "merge" => {
                want(3)?;
                slices.push(BundleSlice::Merge { pos: nat(1)?, label: nat(2)? });
            }
            "cross" => {
                want(3)?;
                let over_right = match toks[2] {
                    "over" => true,
                    "under" => false,
                    _ => return Err(bad("expected `over` or `under`")),
                };
                slices.push(BundleSlice::Cross { pos: nat(1)?, over_right });
            }
            "twist" => {
                want(3)?;
                slices.push(BundleSlice::Twist { pos: nat(1)?, k: int(2)? });
            }
            _ => return Err(bad("unknown slice")),
        }
    }
    Ok(SpinNetwork::new(slices)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_braids_are_accepted() {
        let l = load_diagram("B2:1,1").unwrap();
        assert_eq!(l.diagram.crossing_count(), 2);
        assert!(matches!(read_source("nope.txt"), Err(CliError::Input(_))));
    }

    #[test]
    fn canonical_text_is_stable() {
        let a = load_diagram("B2:1,1").unwrap();
        // Slice lists are only read from files.
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.txt");
        fs::write(&p, &a.canonical).unwrap();
        assert_eq!(load_diagram(p.to_str().unwrap()).unwrap().canonical, a.canonical);
    }

    #[test]
    fn spin_text_forms() {
        assert!(parse_spin("circle 2").is_ok());
        assert!(parse_spin("theta 2 2 2\n").is_ok());
        let s = parse_spin("cup 0 2\ncap 0\n").unwrap();
        assert_eq!(s.labels().len(), SpinNetwork::circle(2).unwrap().labels().len());
        assert!(parse_spin("[{\"Cup\":{\"pos\":0,\"label\":1}},{\"Cap\":{\"pos\":0}}]").is_ok());
        assert!(matches!(parse_spin("wobble 1"), Err(CliError::Input(_))));
    }
}
