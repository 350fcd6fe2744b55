//! Report types shared by the experiments. Every report serializes as
//! `{experiment, params, cells, verdict}`.

use serde::Serialize;

use crate::engine::Group;
use crate::grading::StableOffsets;
use crate::tangle::Handedness;

/// How a cell's claimed equivalence with its predecessor was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// First cell of a sequence; nothing to compare against.
    Base,
    /// The face map of the cube was built and checked to induce an isomorphism over F2.
    InducedIso,
    /// The complement of the face is acyclic in this degree, so the face
    /// map is a quasi-isomorphism by the long exact sequence.
    ComplementAcyclic,
    /// Isomorphic as groups; the equivalence of spectra rests on the Whitehead argument.
    GroupIso,
    /// The block vanishes.
    Vanishing,
    /// The map or the groups failed the check.
    Failed,
    /// A resource cap was hit before the cell could be computed.
    Unverified,
}

impl Certificate {
    /// Whether the certificate comes from an explicit chain map.
    pub fn is_map_level(self) -> bool {
        matches!(self, Certificate::InducedIso | Certificate::ComplementAcyclic)
    }
}

/// One computed block.
#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    /// Position of the cell, e.g. `[k]`, `[n, m]` or `[k, j]`; the report's
    /// `params.axes` names the entries.
    pub index: Vec<i64>,
    pub offsets: StableOffsets,
    /// Nonzero groups in normalized degrees.
    pub groups: Vec<Group>,
    pub certificate: Certificate,
    /// `[n+, n-]` of the diagram behind the cell, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signs: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Cell {
    pub fn new(index: Vec<i64>, offsets: StableOffsets, groups: Vec<Group>, certificate: Certificate) -> Self {
        Cell { index, offsets, groups, certificate, signs: None, note: None }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(Group::is_zero)
    }
}

/// Overall outcome of an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Some cell hit a resource cap; nothing failed among the cells computed.
    Unverified,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub notes: Vec<String>,
}

impl Verdict {
    /// Fold named checks into a verdict; failing checks are listed in `notes`.
    pub fn from_checks(checks: &[(bool, String)], unverified: bool) -> Self {
        let notes: Vec<String> = checks.iter().filter(|c| !c.0).map(|c| format!("failed: {}", c.1)).collect();
        let outcome = if !notes.is_empty() {
            Outcome::Fail
        } else if unverified {
            Outcome::Unverified
        } else {
            Outcome::Pass
        };
        Verdict { outcome, notes }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// Generic experiment report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub params: serde_json::Value,
    pub cells: Vec<Cell>,
    pub verdict: Verdict,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// CSV with one row per nonzero group: `index,i,j,rank,torsion,certificate`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,i,j,rank,torsion,certificate\n");
        for c in &self.cells {
            let idx: Vec<String> = c.index.iter().map(|x| x.to_string()).collect();
            let cert = serde_json::to_value(c.certificate).unwrap();
            let cert = cert.as_str().unwrap_or_default().to_string();
            if c.groups.is_empty() {
                s.push_str(&format!("{},,,0,,{cert}\n", idx.join(" ")));
            }
            for g in &c.groups {
                let t: Vec<String> = g.torsion.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("{},{},{},{},{},{cert}\n", idx.join(" "), g.i, g.j, g.rank, t.join(" ")));
            }
        }
        s
    }

    /// A Markdown table with one row per cell.
    pub fn to_markdown(&self) -> String {
        let mut s = format!("### {}\n\n| index | groups | certificate |\n|---|---|---|\n", self.experiment);
        for c in &self.cells {
            let idx: Vec<String> = c.index.iter().map(|x| x.to_string()).collect();
            let groups = if c.groups.is_empty() {
                "0".to_string()
            } else {
                c.groups.iter().map(format_group).collect::<Vec<_>>().join(", ")
            };
            let cert = serde_json::to_value(c.certificate).unwrap();
            s.push_str(&format!("| {} | {} | {} |\n", idx.join(", "), groups, cert.as_str().unwrap_or_default()));
        }
        s.push_str(&format!("\nverdict: {:?}\n", self.verdict.outcome));
        for n in &self.verdict.notes {
            s.push_str(&format!("- {n}\n"));
        }
        s
    }
}

fn format_group(g: &Group) -> String {
    let mut parts = Vec::new();
    if g.rank > 0 {
        parts.push(if g.rank == 1 { "Z".to_string() } else { format!("Z^{}", g.rank) });
    }
    parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
    format!("({},{}): {}", g.i, g.j, parts.join("+"))
}

/// One q-degree of a twist sequence.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    /// Normalized degree of the sequence.
    pub j: i64,
    pub handedness: Handedness,
    /// The exact bound `b+` or `b-` (largest over slots), as `p/q`.
    pub bound: String,
    /// First integer past the bound.
    pub predicted: i64,
    /// First `k` from which every computed cell agrees.
    pub observed: Option<i64>,
    /// Every step past `observed` is backed by a chain map.
    pub certified: bool,
    pub k_max: usize,
    /// Cells indexed by `[k]`.
    pub cells: Vec<Cell>,
}

impl StabilizationReport {
    /// `observed <= predicted`.
    pub fn within_bound(&self) -> bool {
        self.observed.is_some_and(|o| o <= self.predicted)
    }

    pub fn unverified(&self) -> bool {
        self.cells.iter().any(|c| c.certificate == Certificate::Unverified)
    }

    /// The cell at the observed stabilization index.
    pub fn stable_cell(&self) -> Option<&Cell> {
        let o = self.observed?;
        self.cells.iter().find(|c| c.index[0] == o)
    }

    pub fn report(&self) -> Report {
        // A capped sequence has no stabilization index to judge.
        let checks = if self.unverified() {
            Vec::new()
        } else {
            vec![
                (self.within_bound(), format!("observed {:?} <= predicted {}", self.observed, self.predicted)),
                (self.certified, "every step past the observed index is certified by a chain map".to_string()),
            ]
        };
        Report {
            experiment: "twist_sequence".into(),
            params: serde_json::json!({
                "axes": ["k"],
                "j": self.j,
                "handedness": self.handedness,
                "bound": self.bound,
                "predicted": self.predicted,
                "observed": self.observed,
                "k_max": self.k_max,
            }),
            cells: self.cells.clone(),
            verdict: Verdict::from_checks(&checks, self.unverified()),
        }
    }
}
