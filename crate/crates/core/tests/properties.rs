use proptest::prelude::*;

use fingerpad::contact::shear_capacity;
use fingerpad::grasp::{close_gripper, StopReason};
use fingerpad::harness::config::PullConfig;
use fingerpad::harness::scenario::{grasp_for_case, partition_for_case};
use fingerpad::harness::{pull_trace, table_case, Config};
use fingerpad::membrane::{deflect, loaded_volume, press_against_flat, sealed_pressure};
use fingerpad::model::{load_paper_dataset, ActuationCase, CaseKind, PaperDataset, Target};
use fingerpad::pneumatics::{
    compress_sealed, detect_contact, regulate, seal, ChamberState, PressureTrace, ATMOSPHERE_KPA,
};

fn capacity(cfg: &Config, target: Target, kind: CaseKind, p: f64, static_friction: bool) -> f64 {
    // At 0 kPa every case is the neutral one.
    let case = if p == 0.0 { ActuationCase::neutral() } else { ActuationCase::new(kind, p).unwrap() };
    let (_, part) = partition_for_case(cfg, target, &case).unwrap();
    shear_capacity(&part, cfg.materials.get(target), static_friction)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sealed_pv_constant(p in -50.0..80.0f64, v0 in 100.0..2000.0f64, vols in prop::collection::vec(50.0..3000.0f64, 1..200)) {
        let start = seal(&ChamberState::regulated(p, v0).unwrap());
        let pv0 = start.p_abs() * start.volume;
        let mut s = start;
        for v in vols {
            s = compress_sealed(&s, v).unwrap();
            prop_assert!(((s.p_abs() * s.volume) - pv0).abs() <= 1e-9 * pv0);
        }
    }

    #[test]
    fn regulate_contracts(p in -80.0..80.0f64, sp in -80.0..80.0f64, dt in 1e-4..1.0f64, tau in 1e-3..1.0f64) {
        prop_assume!((p - sp).abs() > 1e-6);
        let s = regulate(&ChamberState::regulated(p, 500.0).unwrap(), sp, dt, tau).unwrap();
        prop_assert!((s.p_gauge - sp).abs() < (p - sp).abs());
    }

    #[test]
    fn detection_ignores_time_shift_and_offset(
        step_at in 30usize..150,
        rise in 1.5..10.0f64,
        shift in -5.0..5.0f64,
        offset in -20.0..20.0f64,
    ) {
        let values: Vec<f64> = (0..200).map(|i| if i >= step_at { rise } else { 0.0 }).collect();
        let shifted: Vec<f64> = values.iter().map(|v| v + offset).collect();
        let base = detect_contact(&PressureTrace::uniform(0.0, 0.01, &values).unwrap(), 0.2, 1.0).unwrap();
        let moved = detect_contact(&PressureTrace::uniform(shift, 0.01, &shifted).unwrap(), 0.2, 1.0).unwrap();
        prop_assert!(base.is_some());
        prop_assert!((moved.unwrap() - shift - base.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn deflection_monotone_and_odd(a in -100.0..100.0f64, b in -100.0..100.0f64) {
        let law = Config::default().law().unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(deflect(&law, lo).unwrap().w0 < deflect(&law, hi).unwrap().w0);
        prop_assert!((deflect(&law, -a).unwrap().w0 + deflect(&law, a).unwrap().w0).abs() < 1e-12);
    }

    #[test]
    fn flat_force_monotone(dp in 0.5..100.0f64, ddp in 0.0..20.0f64, g in 0.0..1.0f64, dg in 0.0..0.5f64) {
        let law = Config::default().law().unwrap();
        let d = deflect(&law, dp).unwrap();
        let near = press_against_flat(&d, g, dp).unwrap().normal_force;
        let far = press_against_flat(&d, g + dg, dp).unwrap().normal_force;
        prop_assert!(far <= near);
        let dp2 = (dp + ddp).min(100.0);
        let harder = press_against_flat(&deflect(&law, dp2).unwrap(), g, dp2).unwrap().normal_force;
        prop_assert!(harder >= near);
    }

    #[test]
    fn flattening_a_sealed_pad_raises_pressure(p in 5.0..60.0f64, frac in 0.0..0.95f64) {
        let cfg = Config::default();
        let law = cfg.law().unwrap();
        let free = vec![None; cfg.geometry.n_active];
        let gas = (p + ATMOSPHERE_KPA) * loaded_volume(&cfg.geometry, &law, p, &free).unwrap();
        let gap = frac * deflect(&law, p).unwrap().w0;
        let pressed = vec![Some(gap); cfg.geometry.n_active];
        prop_assert!(sealed_pressure(&cfg.geometry, &law, gas, &pressed, p).unwrap() > p);
    }

    #[test]
    fn static_capacity_at_least_kinetic(kind_idx in 0usize..5, frac in 0.0..1.0f64, ptfe in any::<bool>()) {
        let cfg = Config::default();
        let kind = CaseKind::ALL[kind_idx];
        let p = match kind {
            CaseKind::N => 0.0,
            CaseKind::DL | CaseKind::DP => -40.0 * (0.05 + 0.95 * frac),
            _ => 40.0 * (0.05 + 0.95 * frac),
        };
        let target = if ptfe { Target::Ptfe } else { Target::Plywood };
        prop_assert!(capacity(&cfg, target, kind, p, true) >= capacity(&cfg, target, kind, p, false));
    }

    #[test]
    fn stick_slip_period_inverse_in_wire_stiffness(k in 5.0..20.0f64) {
        let base = PullConfig { wire_stiffness: k, ..PullConfig::default() };
        let stiff = PullConfig { wire_stiffness: 2.0 * k, ..PullConfig::default() };
        let soft = pull_trace(8.0, 5.0, &base).unwrap().slip_period().unwrap();
        let hard = pull_trace(8.0, 5.0, &stiff).unwrap().slip_period().unwrap();
        prop_assert!((soft / hard - 2.0).abs() < 0.05, "{soft} {hard}");
    }

    #[test]
    fn stage_work_covers_friction(fs in 1.0..15.0f64, ratio in 0.3..1.0f64) {
        let trace = pull_trace(fs, fs * ratio, &PullConfig::default()).unwrap();
        prop_assert!(trace.stage_work >= fs * ratio * trace.slide_distance() - 1e-9);
    }
}

#[test]
fn il_capacity_strictly_increases_with_pressure() {
    let cfg = Config::default();
    for target in Target::ALL {
        let caps: Vec<f64> = (0..=8).map(|i| capacity(&cfg, target, CaseKind::IL, 5.0 * i as f64, true)).collect();
        assert!(caps.windows(2).all(|w| w[1] > w[0]), "{target}: {caps:?}");
    }
}

// Plywood IP capacity still rises slightly between 0 and 5 kPa, before the
// bumps lift the inactive face clear, so the check starts at 5 kPa.
#[test]
fn ip_capacity_non_increasing_with_pressure() {
    let cfg = Config::default();
    for target in Target::ALL {
        let caps: Vec<f64> = (1..=8).map(|i| capacity(&cfg, target, CaseKind::IP, 5.0 * i as f64, true)).collect();
        assert!(caps.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{target}: {caps:?}");
    }
}

#[test]
fn case_ordering_for_both_materials() {
    let cfg = Config::default();
    for target in Target::ALL {
        let il = capacity(&cfg, target, CaseKind::IL, 40.0, true);
        let n = capacity(&cfg, target, CaseKind::N, 0.0, true);
        let ip = capacity(&cfg, target, CaseKind::IP, 40.0, true);
        assert!(il > n && n > ip, "{target}: {il} {n} {ip}");
    }
}

#[test]
fn plywood_grips_harder_than_ptfe_on_the_same_partition() {
    let cfg = Config::default();
    for kind in CaseKind::ALL {
        let (_, part) = partition_for_case(&cfg, Target::Plywood, &table_case(kind)).unwrap();
        assert!(shear_capacity(&part, &cfg.materials.plywood, true) > shear_capacity(&part, &cfg.materials.ptfe, true));
    }
}

#[test]
fn grasp_is_deterministic_and_position_stop_without_threshold() {
    let mut cfg = Config::default();
    let case = ActuationCase::new(CaseKind::IP, 40.0).unwrap();
    let object = cfg.block_object(Target::Ptfe);
    assert_eq!(grasp_for_case(&cfg, &case, &object).unwrap(), grasp_for_case(&cfg, &case, &object).unwrap());
    cfg.gripper.current_threshold = f64::INFINITY;
    let law = cfg.law().unwrap();
    let rest = ChamberState::regulated(0.0, cfg.geometry.dead_volume).unwrap();
    let out = close_gripper(&cfg.gripper, [rest, rest], Some(&object), &cfg.geometry, &law, &cfg.pneumatics).unwrap();
    assert_eq!(out.stop_reason, StopReason::Position);
}

#[test]
fn dataset_round_trips_and_is_ordered() {
    let ds = load_paper_dataset().unwrap();
    let mut buf = Vec::new();
    ds.to_csv(&mut buf).unwrap();
    assert_eq!(PaperDataset::from_csv(buf.as_slice()).unwrap(), ds);
    for t in Target::ALL {
        let fa = |k| ds.row(t, k).unwrap().fa_n;
        assert!(fa(CaseKind::IL) > fa(CaseKind::N) && fa(CaseKind::N) > fa(CaseKind::IP));
    }
}
