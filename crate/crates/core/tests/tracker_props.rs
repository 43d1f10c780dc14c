use std::path::Path;

use dmst::io::{generate_synthetic, SyntheticSpec};
use dmst::{track_sequence, FrameImage, Tracker, TrackerConfig, Variant};
use proptest::prelude::*;

#[allow(clippy::too_many_arguments)]
fn spec_json(
    shape: &str,
    cx: f64,
    cy: f64,
    half: f64,
    vx: f64,
    vy: f64,
    ramp: f64,
    noise: u8,
) -> String {
    format!(
        r#"{{"width": 96, "height": 72, "frames": 16, "seed": 3,
            "background": {{"kind": "noise", "color": [50, 90, 140], "amplitude": {noise}}},
            "target": {{"shape": "{shape}", "center": [{cx}, {cy}], "half_extent": [{half}, {half}],
                        "fill": [220, 80, 30]}},
            "velocity": [{vx}, {vy}], "scale_ramp": {ramp}}}"#
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn windows_respect_floor_and_frame(
        disk in any::<bool>(),
        cx in 30.0f64..66.0,
        cy in 25.0f64..47.0,
        half in 4.0f64..12.0,
        vx in -1.5f64..1.5,
        vy in -1.0f64..1.0,
        ramp in 0.9f64..1.1,
        noise in 0u8..60,
        variant in prop::sample::select(Variant::ALL.to_vec()),
    ) {
        let shape = if disk { "disk" } else { "rectangle" };
        let spec = SyntheticSpec::from_json(&spec_json(shape, cx, cy, half, vx, vy, ramp, noise));
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let seq = generate_synthetic(&spec).unwrap();
        let mut cfg = TrackerConfig::new(variant, seq.ground_truth[0]);
        cfg.scale.period = Some(2);
        cfg.scale.limit = 1;
        let floor = cfg.scale.min_extent;
        let (mut tracker, _) = Tracker::init(&seq.frames[0], cfg).unwrap();
        for f in &seq.frames[1..] {
            let r = tracker.process_frame(f).unwrap();
            let w = r.window;
            prop_assert!(w.cx >= 0.0 && w.cx <= 95.0 && w.cy >= 0.0 && w.cy <= 71.0, "{w:?}");
            if variant.adapts_scale() {
                prop_assert!(w.width() >= floor.min(seq.ground_truth[0].width()) - 1e-9);
                prop_assert!(w.height() >= floor.min(seq.ground_truth[0].height()) - 1e-9);
            } else {
                prop_assert_eq!((w.hx, w.hy), (seq.ground_truth[0].hx, seq.ground_truth[0].hy));
            }
            if let Some(store) = tracker.template_store() {
                prop_assert!((0.5..=0.95).contains(&store.theta()));
                prop_assert!(store.key_model().is_normalized());
            }
        }
    }
}

#[test]
fn no_scale_change_keeps_initial_model() {
    let spec =
        SyntheticSpec::from_json(&spec_json("disk", 48.0, 36.0, 10.0, 0.0, 0.0, 1.0, 0)).unwrap();
    let seq = generate_synthetic(&spec).unwrap();
    let (mut tracker, _) = Tracker::init(
        &seq.frames[0],
        TrackerConfig::new(Variant::Dmst, seq.ground_truth[0]),
    )
    .unwrap();
    for f in &seq.frames[1..] {
        let r = tracker.process_frame(f).unwrap();
        assert_eq!(r.s, 0.0);
    }
    let store = tracker.template_store().unwrap();
    assert_eq!(store.key_model(), store.initial_model());
    assert_eq!(store.change_count(), 0);
}

fn hue_drift() -> (Vec<FrameImage>, dmst::Window) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/hue_drift.json");
    let spec = SyntheticSpec::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    let seq = generate_synthetic(&spec).unwrap();
    let init = seq.ground_truth[0];
    (seq.frames, init)
}

#[test]
fn hue_drift_replaces_only_for_dmst() {
    let (frames, init) = hue_drift();
    let count = |v| {
        track_sequence(&frames, &TrackerConfig::new(v, init))
            .unwrap()
            .iter()
            .filter(|r| r.template_replaced)
            .count()
    };
    assert!(count(Variant::Dmst) >= 1);
    assert_eq!(count(Variant::Cbwh), 0);
}
