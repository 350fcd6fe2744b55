//! Randomized properties over small braid closures and Laurent arithmetic.

use proptest::prelude::*;

use khtail_core::algebra::{Int, LaurentPoly, LaurentRational, RingKind};
use khtail_core::engine::{euler_characteristic, khovanov, Method};
use khtail_core::tangle::{BraidWord, LinkDiagram};
use khtail_core::tl::{bracket, SlotFill};

fn letters() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..7)
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    (-4i32..4, prop::collection::vec(-3i64..4, 1..5))
        .prop_map(|(low, cs)| LaurentPoly::from_parts(low, cs.into_iter().map(Int::new).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_the_euler_characteristic(w in letters()) {
        let d = LinkDiagram::new(BraidWord::new(3, w).unwrap().to_tangle().trace_closure().unwrap()).unwrap();
        let chi = euler_characteristic(&khovanov(&d, RingKind::Z, Method::Scan, None).unwrap());
        prop_assert_eq!(bracket(&d, SlotFill::Identity).unwrap().as_poly(), Some(chi));
    }

    #[test]
    fn f2_and_z_ranks_differ_only_by_torsion(w in letters()) {
        let d = LinkDiagram::new(BraidWord::new(3, w).unwrap().to_tangle().trace_closure().unwrap()).unwrap();
        let z = khovanov(&d, RingKind::Z, Method::Scan, None).unwrap();
        let f = khovanov(&d, RingKind::F2, Method::Scan, None).unwrap();
        // Each Z/2^k summand contributes one F2 rank in its own and the previous degree.
        let even: usize = z.groups.iter().map(|g| g.torsion.iter().filter(|t| t.to_string().parse::<u64>().unwrap() % 2 == 0).count()).sum();
        prop_assert_eq!(f.total_rank(), z.total_rank() + 2 * even);
    }

    #[test]
    fn division_undoes_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let (ra, rb) = (LaurentRational::from_poly(a), LaurentRational::from_poly(b));
        let back = &(&ra * &rb) / &rb;
        prop_assert_eq!(back.unwrap(), ra);
    }
}
