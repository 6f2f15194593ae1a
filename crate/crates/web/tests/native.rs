use hsm_pgnn_web::{cosine_demo_impl, jerk_limited_move_impl, Lab, PLOT_POINTS};

#[test]
fn move_reaches_target_within_limits() {
    let m = jerk_limited_move_impl(6.0, 15.0, 80.0, 1000.0).unwrap();
    assert_eq!(m.t().len(), PLOT_POINTS);
    assert!((m.position().last().unwrap() - 6.0).abs() < 1e-12);
    assert!(m.velocity().iter().all(|v| v.abs() <= 15.0 + 1e-9));
    assert!(m.acceleration().iter().all(|a| a.abs() <= 80.0 + 1e-9));
    assert!((m.t().last().unwrap() - m.duration()).abs() < 1e-12);
}

#[test]
fn bad_limits_are_reported() {
    let err = jerk_limited_move_impl(1.0, -1.0, 80.0, 1000.0).err().unwrap();
    assert!(err.contains("v_max") || err.contains("velocity"), "{err}");
}

#[test]
fn stroke_needs_identified_models() {
    let lab = Lab::with_parasitics(true);
    assert!(lab.stroke_impl("pgnn", 5.0).is_err());
    assert!(lab.stroke_impl("pid", 5.0).is_err());
    let s = lab.stroke_impl("none", 5.0).unwrap();
    assert!(s.mae() > 0.0 && s.t().len() <= PLOT_POINTS);
}

#[test]
fn identified_feedforward_improves_tracking() {
    let mut lab = Lab::with_parasitics(true);
    let summary = lab.identify_impl(4.0, 200).unwrap();
    assert!(summary.contains("J ="), "{summary}");
    let none = lab.stroke_impl("none", 10.0).unwrap().mae();
    let phys = lab.stroke_impl("physical", 10.0).unwrap().mae();
    let pgnn = lab.stroke_impl("pgnn", 10.0).unwrap().mae();
    assert!(phys < none && pgnn < phys, "{none} {phys} {pgnn}");
}

#[test]
fn cosine_demo_shows_the_wrapped_input_extrapolating() {
    let c = cosine_demo_impl(2, 3000, 0).unwrap();
    assert_eq!(c.y().len(), c.raw().len());
    assert!(c.mod_extrapolation_error() < c.raw_extrapolation_error());
    assert!(cosine_demo_impl(0, 10, 0).is_err());
}
