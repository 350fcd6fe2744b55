//! Text formats: the slice list, braid shorthand and PD codes.
//!
//! Slice list, one item per line, `#` starts a comment:
//!
//! ```text
//! bottom 0          # optional, strands at the bottom (default 0)
//! orient 2 0 up     # segment at level 2, position 0 points up
//! slot 1 0 2        # twist slot on level 1 covering positions 0..2
//! cup 0
//! x+ 0
//! x- 0
//! cap 0
//! ```
//!
//! Positions are 0-based. `id p` and `tb p` stand for a vertical and a
//! turnback smoothing. A single line `B<n>:1,1,-2` is the closure of that braid,
//! and a list of 4-tuples (`X[1,5,2,4] ...` or `[1,5,2,4],[...]`) is a PD code.

use std::collections::HashMap;

use super::braid::BraidWord;
use super::diagram::{CrossKind, LinkDiagram};
use super::slice::{Hint, Slice, SlicedTangle, Slot};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let t = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    t.parse().map_err(|_| parse_err(line, format!("bad {what} `{t}`")))
}

/// Parse any supported format into a tangle.
pub fn parse(text: &str) -> Result<SlicedTangle> {
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .collect();
    if body.len() == 1 && body[0].starts_with('B') && body[0].contains(':') {
        return parse_braid(body[0])?.to_tangle().trace_closure();
    }
    if body.first().is_some_and(|l| l.starts_with("PD") || l.starts_with('X') || l.starts_with('[')) {
        return from_pd(&parse_pd(&body.join(" "))?);
    }
    parse_slices(text)
}

/// Braid shorthand `B<n>:l1,l2,...`.
pub fn parse_braid(s: &str) -> Result<BraidWord> {
    let s = s.trim();
    let rest = s.strip_prefix('B').ok_or_else(|| parse_err(1, "braid must start with `B`"))?;
    let (n, word) = rest.split_once(':').ok_or_else(|| parse_err(1, "braid needs `:`"))?;
    let n: usize = n.trim().parse().map_err(|_| parse_err(1, format!("bad strand count `{n}`")))?;
    let letters = word
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| parse_err(1, format!("bad letter `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    BraidWord::new(n, letters)
}

/// The line-oriented slice list.
pub fn parse_slices(text: &str) -> Result<SlicedTangle> {
    let mut bottom = 0;
    let mut slices = Vec::new();
    let mut hints = Vec::new();
    let mut slots = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap();
        match head {
            "bottom" => bottom = num(tok.next(), ln, "width")?,
            "orient" => {
                let level = num(tok.next(), ln, "level")?;
                let pos = num(tok.next(), ln, "position")?;
                let up = match tok.next() {
                    Some("up") => true,
                    Some("down") => false,
                    other => return Err(parse_err(ln, format!("expected up or down, got {other:?}"))),
                };
                hints.push(Hint { level, pos, up });
            }
            "slot" => {
                let level = num(tok.next(), ln, "level")?;
                let pos = num(tok.next(), ln, "position")?;
                let width = num(tok.next(), ln, "width")?;
                slots.push(Slot { level, pos, width });
            }
            "x+" | "x-" | "cup" | "cap" | "id" | "tb" => {
                let p = num(tok.next(), ln, "position")?;
                slices.push(match head {
                    "x+" => Slice::Pos(p),
                    "x-" => Slice::Neg(p),
                    "cup" => Slice::Cup(p),
                    "cap" => Slice::Cap(p),
                    "id" => Slice::Vert(p),
                    _ => Slice::Turn(p),
                });
            }
            _ => return Err(parse_err(ln, format!("unknown item `{head}`"))),
        }
        if let Some(extra) = tok.next() {
            return Err(parse_err(ln, format!("unexpected `{extra}`")));
        }
    }
    let mut t = SlicedTangle::new(bottom, slices)?;
    for h in &hints {
        if h.level > t.len() || h.pos >= t.width(h.level) {
            return Err(Error::Orientation(format!("hint ({}, {}) is off the diagram", h.level, h.pos)));
        }
    }
    for s in &slots {
        if s.level > t.len() || s.pos + s.width > t.width(s.level) {
            return Err(Error::Width(format!("slot ({}, {}, {}) does not fit", s.level, s.pos, s.width)));
        }
    }
    t.hints = hints;
    t.slots = slots;
    Ok(t)
}

/// Integers of a PD code grouped in fours.
pub fn parse_pd(s: &str) -> Result<Vec<[i64; 4]>> {
    let nums: Vec<i64> = s
        .split(|c: char| !(c.is_ascii_digit() || c == '-'))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| parse_err(1, format!("bad label `{t}`"))))
        .collect::<Result<_>>()?;
    if !nums.len().is_multiple_of(4) {
        return Err(parse_err(1, "PD code length is not a multiple of 4"));
    }
    Ok(nums.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect())
}

/// Convert a PD code (`[a, b, c, d]`: `a` the incoming under edge, then
/// counterclockwise) to slices by growing a front of open edges one crossing
/// at a time. Edges of the front can be rotated cyclically by wrapping a
/// strand under the bottom of the partial diagram.
pub fn from_pd(pd: &[[i64; 4]]) -> Result<SlicedTangle> {
    let mut count: HashMap<i64, usize> = HashMap::new();
    for x in pd {
        for e in x {
            *count.entry(*e).or_default() += 1;
        }
    }
    if let Some((e, _)) = count.iter().find(|(_, &c)| c != 2) {
        return Err(Error::input(format!("edge {e} does not appear exactly twice")));
    }
    let mut slices: Vec<Slice> = Vec::new();
    let mut hints: Vec<Hint> = Vec::new();
    let mut front: Vec<i64> = Vec::new();
    let mut done = vec![false; pd.len()];

    for _ in 0..pd.len() {
        // Pick the crossing with the most edges on the front that can attach.
        let mut best: Option<(usize, usize, usize, usize)> = None; // (m, x, s, p)
        let mut any_touch = false;
        for (xi, x) in pd.iter().enumerate() {
            if done[xi] {
                continue;
            }
            let m = x.iter().filter(|e| front.contains(e)).count();
            if m > 0 {
                any_touch = true;
            }
            if best.is_some_and(|b| b.0 >= m) {
                continue;
            }
            if m == 0 {
                if best.is_none() {
                    best = Some((0, xi, 0, front.len()));
                }
                continue;
            }
            let w = front.len();
            'search: for s in 0..4 {
                let run: Vec<i64> = (0..m).map(|t| x[(s + t) % 4]).collect();
                if (m..4).any(|t| front.contains(&x[(s + t) % 4])) {
                    continue;
                }
                for p in 0..w {
                    if (0..m).all(|t| front[(p + t) % w] == run[t]) {
                        best = Some((m, xi, s, p));
                        break 'search;
                    }
                }
            }
        }
        let (m, xi, s, mut p) = match best {
            Some(b) if !(b.0 == 0 && any_touch) => b,
            _ => return Err(Error::input("PD code could not be laid out as a planar slice diagram")),
        };
        // Rotate the front so the attaching block does not wrap.
        while m > 0 && p + m > front.len() {
            rotate_left(&mut slices, &mut hints, &mut front);
            p -= 1;
        }
        let x = pd[xi];
        let kind = if s % 2 == 0 { Slice::Neg } else { Slice::Pos };
        let level_of_cross;
        let e = |t: usize| x[(s + t) % 4];
        match m {
            0 => {
                let w = front.len();
                slices.push(Slice::Cup(w));
                slices.push(Slice::Cup(w + 2));
                level_of_cross = slices.len();
                p = w + 1;
                slices.push(kind(p));
                front.extend_from_slice(&[e(0), e(3), e(2), e(1)]);
            }
            1 => {
                slices.push(Slice::Cup(p + 1));
                level_of_cross = slices.len();
                slices.push(kind(p));
                front.splice(p..p + 1, [e(3), e(2), e(1)]);
            }
            2 => {
                level_of_cross = slices.len();
                slices.push(kind(p));
                front.splice(p..p + 2, [e(3), e(2)]);
            }
            3 => {
                level_of_cross = slices.len();
                slices.push(kind(p));
                slices.push(Slice::Cap(p + 1));
                front.splice(p..p + 3, [e(3)]);
            }
            _ => {
                level_of_cross = slices.len();
                slices.push(kind(p));
                slices.push(Slice::Cap(p + 1));
                slices.push(Slice::Cap(p));
                front.drain(p..p + 4);
            }
        }
        // The under strand enters through `a`, at corner (4 - s) % 4 counted
        // counterclockwise from bottom-left.
        let corner = (4 - s) % 4;
        hints.push(match corner {
            0 => Hint { level: level_of_cross, pos: p, up: true },
            1 => Hint { level: level_of_cross, pos: p + 1, up: true },
            2 => Hint { level: level_of_cross + 1, pos: p + 1, up: false },
            _ => Hint { level: level_of_cross + 1, pos: p, up: false },
        });
        done[xi] = true;
        close_adjacent(&mut slices, &mut front);
    }
    let mut guard = 0;
    while !front.is_empty() {
        rotate_left(&mut slices, &mut hints, &mut front);
        close_adjacent(&mut slices, &mut front);
        guard += 1;
        if guard > 4 * pd.len() + 4 {
            return Err(Error::input("PD code does not close up"));
        }
    }
    let mut t = SlicedTangle::new(0, slices)?;
    t.hints = hints;
    Ok(t)
}

fn close_adjacent(slices: &mut Vec<Slice>, front: &mut Vec<i64>) {
    let mut i = 0;
    while i + 1 < front.len() {
        if front[i] == front[i + 1] {
            slices.push(Slice::Cap(i));
            front.drain(i..i + 2);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
}

fn rotate_left(slices: &mut Vec<Slice>, hints: &mut [Hint], front: &mut Vec<i64>) {
    let mut out = Vec::with_capacity(slices.len() + 2);
    out.push(Slice::Cup(0));
    out.extend(slices.iter().map(|s| s.shifted(1)));
    out.push(Slice::Cap(0));
    *slices = out;
    for h in hints.iter_mut() {
        h.level += 1;
        h.pos += 1;
    }
    if !front.is_empty() {
        front.rotate_left(1);
    }
}

/// PD code of an oriented diagram. Edges are numbered from 1 along each
/// component; crossingless components are dropped.
pub fn to_pd(d: &LinkDiagram) -> Vec<[i64; 4]> {
    let g = d.geometry();
    let mut label = vec![0i64; d.edge_count()];
    let mut next = 1;
    for segs in &g.components {
        let s0 = *segs.iter().min().unwrap();
        for (s, _) in g.walk(s0, d.is_up(s0)) {
            let e = d.edge_of(s);
            if label[e] == 0 {
                label[e] = next;
                next += 1;
            }
        }
    }
    d.crossings()
        .iter()
        .map(|c| {
            // Corners counterclockwise: bottom-left, bottom-right, top-right, top-left.
            let corners = [c.segs[0], c.segs[1], c.segs[3], c.segs[2]];
            let under = match c.kind {
                CrossKind::Pos => [1, 3],
                CrossKind::Neg => [0, 2],
            };
            // A bottom corner is incoming when it points up, a top one when it points down.
            let incoming = |k: usize| if k < 2 { d.is_up(corners[k]) } else { !d.is_up(corners[k]) };
            let a = if incoming(under[0]) { under[0] } else { under[1] };
            [0, 1, 2, 3].map(|t| label[d.edge_of(corners[(a + t) % 4])])
        })
        .collect()
}

/// Format a PD code as `X[a,b,c,d] ...`.
pub fn format_pd(pd: &[[i64; 4]]) -> String {
    pd.iter()
        .map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3]))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_text_round_trip() {
        let text = "orient 1 0 down\nslot 1 0 2\ncup 0\nx+ 0\nx- 0\ncap 0\n";
        let t = parse(text).unwrap();
        assert_eq!(t.to_text(), text);
        assert_eq!(parse_slices(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn parse_errors_have_lines() {
        match parse_slices("cup 0\nfoo 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_slices("x+ 0\n").is_err());
    }

    #[test]
    fn braid_shorthand() {
        let t = parse("B2:1,1").unwrap();
        assert_eq!(t.crossing_count(), 2);
        assert_eq!(parse_braid("B3:1,-2,2").unwrap().letters, vec![1, -2, 2]);
        assert!(parse("B1:").unwrap().is_closed());
    }

    #[test]
    fn left_trefoil_from_pd() {
        let t = parse("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let d = LinkDiagram::new(t).unwrap();
        assert_eq!(d.crossing_signs(), (0, 3));
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn pd_round_trip_keeps_signs() {
        let d = LinkDiagram::new(parse("B3:1,-2,1,-2").unwrap()).unwrap();
        let pd = to_pd(&d);
        let back = LinkDiagram::new(from_pd(&pd).unwrap()).unwrap();
        assert_eq!(back.crossing_signs(), d.crossing_signs());
        assert_eq!(back.component_count(), d.component_count());
    }
}
