//! Experiments run end to end on small cables of the unknot and Hopf link.

use khtail_core::lab::verify::{concatenate_slot, idempotency_check, straighten_check, straighten_shifts};
use khtail_core::lab::{default_window, twist_sequence, LabConfig, Outcome};
use khtail_core::tangle::{cable, BraidWord, ColoredLink, Handedness, LinkDiagram, Placement, SlicedTangle};

fn unknot_cable(n: usize) -> SlicedTangle {
    let u = LinkDiagram::new(SlicedTangle::identity(1).trace_closure().unwrap()).unwrap();
    cable(&ColoredLink::uniform(u, n).unwrap(), &Placement::PerComponent).unwrap()
}

#[test]
fn p2_inside_p3_is_absorbed() {
    let c = unknot_cable(3);
    let cfg = LabConfig::default();
    let w = default_window(&c, Handedness::Right, 3).unwrap();
    for offset in [0, 1] {
        let t = concatenate_slot(&c, 0, offset, 2).unwrap();
        let r = idempotency_check(&t, 0, 1, &w, Handedness::Right, &cfg).unwrap();
        assert_eq!(r.verdict.outcome, Outcome::Pass, "{}", r.to_json());
    }
}

#[test]
fn a_full_twist_beside_p2_straightens() {
    let c = unknot_cable(2);
    let cfg = LabConfig::default();
    let beta = BraidWord::new(2, vec![1, 1]).unwrap();
    let (_, s) = straighten_shifts(&c, 0, &beta).unwrap();
    assert_eq!(s.beta_minus, 0);
    let w = default_window(&c, Handedness::Right, 3).unwrap();
    let r = straighten_check(&c, 0, &beta, &w, Handedness::Right, &cfg).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    let inverse = BraidWord::new(2, vec![-1, -1]).unwrap();
    let (_, s) = straighten_shifts(&c, 0, &inverse).unwrap();
    assert_eq!(s.beta_minus, 2);
    assert!(straighten_check(&c, 0, &inverse, &w, Handedness::Right, &cfg).unwrap().passed());
}

#[test]
fn left_and_right_sequences_stay_within_their_bounds() {
    let c = unknot_cable(2);
    let cfg = LabConfig::default();
    for h in [Handedness::Right, Handedness::Left] {
        for j in default_window(&c, h, 3).unwrap() {
            let s = twist_sequence(&c, j, h, None, &cfg).unwrap();
            assert!(s.within_bound() && s.certified, "{h:?} j = {j}: {:?}", s.observed);
        }
    }
}

#[test]
fn a_tiny_budget_reports_unverified_not_fail() {
    let c = unknot_cable(3);
    let cfg = LabConfig { max_objects: 4, ..LabConfig::default() };
    let j = default_window(&c, Handedness::Right, 1).unwrap()[0];
    let s = twist_sequence(&c, j, Handedness::Right, None, &cfg).unwrap();
    assert!(s.unverified());
    assert_eq!(s.report().verdict.outcome, Outcome::Unverified);
}
