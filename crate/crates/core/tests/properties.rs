use icr_core::channel::{
    apply_channel, draw_channel, ChannelRealization, SymbolVector, C64, DEFAULT_EPS,
};
use icr_core::classifier::{enumerate_patterns, minimal_elements, satisfies_theorem1, Verdict};
use icr_core::csit::{pattern, CsitPattern, SlotCsit};
use icr_core::decoder::{assemble_effective_system, decode};
use icr_core::scheme::{build_plan, is_readable, select_scheme, table1, CsitView, SchemeId};
use proptest::prelude::*;

fn arb_pattern() -> impl Strategy<Value = CsitPattern> {
    (0..729usize).prop_map(|k| CsitPattern::all()[k])
}

fn arb_c64() -> impl Strategy<Value = C64> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn arb_symbols() -> impl Strategy<Value = SymbolVector> {
    [arb_c64(), arb_c64(), arb_c64(), arb_c64()]
        .prop_map(|[a, b, c, d]| SymbolVector::new(a, b, c, d))
}

#[test]
fn dominance_is_a_partial_order() {
    let all = CsitPattern::all();
    for a in &all {
        assert!(a.dominates(a));
        for b in &all {
            if a != b && a.dominates(b) {
                assert!(!b.dominates(a), "{a} {b}");
            }
        }
    }
    // Transitivity over the slot alphabet, which generates the pattern order.
    let slots = SlotCsit::all();
    for a in slots {
        for b in slots {
            for c in slots {
                if a.dominates(&b) && b.dominates(&c) {
                    assert!(a.dominates(&c));
                }
            }
        }
    }
}

#[test]
fn table1_is_the_set_of_minimal_covered_patterns() {
    let atlas = enumerate_patterns();
    let covered: Vec<CsitPattern> = atlas
        .reports
        .iter()
        .filter(|r| r.verdict == Verdict::Synergistic)
        .map(|r| r.pattern)
        .collect();
    let mut minimal = minimal_elements(&covered);
    let mut table: Vec<CsitPattern> = table1().iter().map(|e| e.pattern).collect();
    minimal.sort_by_key(CsitPattern::index);
    table.sort_by_key(CsitPattern::index);
    assert_eq!(minimal, table);
    for a in &table {
        for b in &table {
            assert!(a == b || !a.dominates(b), "{a} >= {b}");
        }
    }
}

#[test]
fn requirements_match_dominance_on_every_pattern() {
    for p in CsitPattern::all() {
        let by_requirements = satisfies_theorem1(&p).all();
        let by_dominance = table1().iter().any(|e| p.dominates(&e.pattern));
        assert_eq!(by_requirements, by_dominance, "{p}");
    }
}

#[test]
fn mirror_plan_is_role_swap_on_swapped_channel() {
    for seed in 0..50 {
        let h = draw_channel(seed, DEFAULT_EPS).unwrap();
        let hs = h.swap_rows();
        for scheme in SchemeId::ICR {
            let plan = build_plan(scheme, &mut CsitView::new(&h, scheme.binding())).unwrap();
            let mirror = scheme.mirror();
            assert_eq!(mirror.binding(), scheme.binding().swap_rows());
            let mplan = build_plan(mirror, &mut CsitView::new(&hs, mirror.binding())).unwrap();
            assert_eq!(mplan.f, plan.swap_roles().f, "{scheme}");
        }
    }
}

#[test]
fn access_log_replays_under_the_binding() {
    let h = draw_channel(5, DEFAULT_EPS).unwrap();
    for scheme in SchemeId::ICR {
        let mut view = CsitView::new(&h, scheme.binding());
        build_plan(scheme, &mut view).unwrap();
        let log = view.access_log().to_vec();
        assert!(!log.is_empty());
        let mut replay = CsitView::new(&h, scheme.binding());
        for r in &log {
            assert!(is_readable(&scheme.binding(), r.rx, r.coef_slot, r.at_slot));
            assert_eq!(
                replay.read(r.rx, r.tx, r.coef_slot, r.at_slot).unwrap(),
                h.coef(r.rx, r.tx, r.coef_slot)
            );
        }
    }
}

#[test]
fn blind_patterns_are_rejected_by_every_icr_scheme() {
    let h = draw_channel(8, DEFAULT_EPS).unwrap();
    for scheme in SchemeId::ICR {
        let mut view = CsitView::new(&h, pattern("NN,NN,NN"));
        assert!(build_plan(scheme, &mut view).is_err(), "{scheme}");
    }
}

#[test]
fn decode_fails_only_on_singular_channels() {
    let sys =
        assemble_effective_system(SchemeId::Scheme1, &ChannelRealization::identity()).unwrap();
    assert!(sys.is_singular());
    let rb = apply_channel(
        &icr_core::channel::TransmitSignals::zeros(),
        &ChannelRealization::identity(),
        0.0,
        0,
    )
    .unwrap();
    assert!(decode(&sys, &rb, None).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn channel_is_linear(seed in any::<u64>(), a in arb_symbols(), b in arb_symbols(), k in arb_c64()) {
        let h = draw_channel(seed, DEFAULT_EPS).unwrap();
        let plan = build_plan(SchemeId::Scheme1, &mut CsitView::new(&h, SchemeId::Scheme1.binding())).unwrap();
        let (xa, xb) = (plan.transmit(&a), plan.transmit(&b));
        let one = C64::new(1.0, 0.0);
        let ya = apply_channel(&xa, &h, 0.0, 0).unwrap();
        let yb = apply_channel(&xb, &h, 0.0, 0).unwrap();
        let yab = apply_channel(&xa.combine(one, &xb, k), &h, 0.0, 0).unwrap();
        for rx in 0..2 {
            for t in 0..3 {
                let want = ya.y[rx][t] + k * yb.y[rx][t];
                prop_assert!((yab.y[rx][t] - want).norm() <= 1e-9 * (1.0 + want.norm()));
            }
        }
    }

    #[test]
    fn draws_are_deterministic_and_floored(seed in any::<u64>()) {
        let a = draw_channel(seed, 1e-3).unwrap();
        prop_assert_eq!(&a, &draw_channel(seed, 1e-3).unwrap());
        prop_assert!(a.min_magnitude() >= 1e-3);
    }

    #[test]
    fn noiseless_round_trip(seed in any::<u64>(), s in arb_symbols()) {
        let h = draw_channel(seed, DEFAULT_EPS).unwrap();
        for scheme in SchemeId::ALL {
            let sys = assemble_effective_system(scheme, &h).unwrap();
            prop_assume!(!sys.is_singular());
            let plan = build_plan(scheme, &mut CsitView::new(&h, scheme.binding())).unwrap();
            let rb = apply_channel(&plan.transmit(&s), &h, 0.0, 0).unwrap();
            let res = decode(&sys, &rb, Some(&s)).unwrap();
            prop_assert!(res.relative_error(&s) < 1e-8, "{} {}", scheme, res.relative_error(&s));
        }
    }

    #[test]
    fn selection_is_monotone(p in arb_pattern(), q in arb_pattern()) {
        if q.dominates(&p) && select_scheme(&p).is_some() {
            prop_assert!(select_scheme(&q).is_some());
        }
        if let Some(e) = select_scheme(&p) {
            prop_assert!(p.dominates(&e.pattern));
            let mut view_ok = true;
            let h = draw_channel(1, DEFAULT_EPS).unwrap();
            let mut view = CsitView::new(&h, p);
            if build_plan(e.scheme, &mut view).is_err() {
                view_ok = false;
            }
            prop_assert!(view_ok, "{} cannot run on {}", e.scheme, p);
        }
    }

    #[test]
    fn covered_set_is_upward_closed(p in arb_pattern(), k in 0..6usize, r in 0..2usize) {
        // Raise one slot-row of p by a step and check coverage is kept.
        let mut q = p;
        let t = k % 3;
        let s = q.slots[t].rows[r];
        q.slots[t].rows[r] = std::cmp::max(s, if k < 3 { icr_core::CsitState::Delayed } else { icr_core::CsitState::Perfect });
        prop_assert!(q.dominates(&p));
        if select_scheme(&p).is_some() {
            prop_assert!(select_scheme(&q).is_some());
        }
    }
}
