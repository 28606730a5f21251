mod common;

use lewiskit::conditions::{check_condition, ConditionId};
use lewiskit::formula::{normalize, parse, Formula};
use lewiskit::kripke::{forces, frame_validates, is_frame, persistence_holds, Preframe};
use lewiskit::search::{enumerate_frames, posets};
use proptest::prelude::*;

fn f(s: &str) -> Formula {
    normalize(&parse(s).unwrap())
}

#[test]
fn frame_condition_iff_persistence() {
    let mut checked = 0;
    for n in 1..=3 {
        for up in posets(n) {
            for bits in 0u64..(1 << (n * n)) {
                let succ = (0..n).map(|k| (bits >> (k * n)) & ((1 << n) - 1)).collect();
                let p = Preframe::from_masks(up.clone(), succ).unwrap();
                assert_eq!(is_frame(&p), persistence_holds(&p), "{p:?}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 2 + 3 * 16 + 19 * 512);
}

#[test]
fn brilliancy_schemes() {
    let a = f("(p /\\ q) ~> r -> p ~> (q -> r)");
    let b = f("q ~> r -> #t ~> (q -> r)");
    let conv = f("p ~> (q -> r) -> (p /\\ q) ~> r");
    let mut brilliant = 0;
    for n in 1..=3 {
        for fr in enumerate_frames(n, &[]).unwrap() {
            let br = check_condition(&fr, ConditionId::Brilliant);
            brilliant += br as usize;
            assert_eq!(br, frame_validates(&fr, &a), "{fr:?}");
            assert_eq!(br, frame_validates(&fr, &b), "{fr:?}");
            assert!(frame_validates(&fr, &conv));
        }
    }
    assert!(brilliant > 0);
}

#[test]
fn mix_implications() {
    use ConditionId::*;
    for n in 1..=3 {
        for fr in enumerate_frames(n, &[]).unwrap() {
            let c = |k| check_condition(&fr, k);
            if c(ArrowP) && c(Brilliant) {
                assert!(c(Mix), "{fr:?}");
            }
            if c(Mix) {
                assert!(c(ArrowP), "{fr:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn persistence(m in common::arb::model(), g in common::arb::formula(true)) {
        let g = normalize(&g);
        let fr = m.frame();
        for k in 0..fr.len() {
            for l in 0..fr.len() {
                if fr.le(k, l) && forces(&m, k, &g) {
                    prop_assert!(forces(&m, l, &g));
                }
            }
        }
    }

    #[test]
    fn box_is_top_arrow(m in common::arb::model(), g in common::arb::formula(true)) {
        let boxed = Formula::boxed(g.clone());
        let arrow = Formula::strict(Formula::Top, g);
        prop_assert_eq!(m.truth_set(&normalize(&boxed)), m.truth_set(&normalize(&arrow)));
    }

    #[test]
    fn generated_frames_are_frames(fr in common::arb::frame()) {
        prop_assert!(is_frame(&fr));
        prop_assert!(persistence_holds(&fr));
    }
}
