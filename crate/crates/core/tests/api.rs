//! Public-API behaviour: curve descriptions in JSON, rejected inputs, the JSON solver.

use schiffer::geometry::{build_model, Comp, CurveSpec, Point};
use schiffer::jump::{self, plemelj_json, PlemeljOutput};
use schiffer::schiffer::grunsky_norm;
use schiffer::{SchifferError, C64};

#[test]
fn curve_spec_round_trips_through_json() {
    for spec in [
        CurveSpec::circle(),
        CurveSpec::ellipse(0.3),
        CurveSpec::interior(&[C64::new(0.1, 0.2)]),
        CurveSpec::torus(C64::new(0.2, 1.1), C64::new(0.5, 0.5), 0.15),
    ] {
        let text = serde_json::to_string(&spec).unwrap();
        let back: CurveSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}

#[test]
fn invalid_surfaces_are_rejected() {
    let too_small = build_model(&CurveSpec::circle(), 4, 1e-10);
    assert!(matches!(too_small, Err(SchifferError::Config(_))));
    // z + 1/z collapses the circle onto a slit.
    let slit = build_model(&CurveSpec::ellipse(1.0), 16, 1e-10);
    assert!(matches!(slit, Err(SchifferError::NonUnivalent(_))), "{slit:?}");
    let flat = build_model(&CurveSpec::torus(C64::new(0.0, -1.0), C64::new(0.5, 0.5), 0.2), 16, 1e-10);
    assert!(matches!(flat, Err(SchifferError::InvalidModulus { .. })), "{flat:?}");
    let huge_disk = build_model(&CurveSpec::torus(C64::new(0.0, 1.0), C64::new(0.5, 0.5), 0.9), 16, 1e-10);
    assert!(huge_disk.is_err());
}

#[test]
fn base_point_must_avoid_the_curve() {
    let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
    assert!(matches!(m.check_q(Point::Finite(C64::new(1.0, 0.0))), Err(SchifferError::QNearCurve(_))));
    assert!(m.check_q(m.q).is_ok());
    assert_eq!(m.component_of(m.q), Some(Comp::Two));
}

#[test]
fn torus_complement_has_no_disk_chart() {
    let m = build_model(&CurveSpec::torus(C64::new(0.0, 1.0), C64::new(0.5, 0.5), 0.2), 8, 1e-10).unwrap();
    assert_eq!(m.genus(), 1);
    assert!(matches!(m.chart(Comp::Two), Err(SchifferError::NotSimplyConnected(2))));
    let h = jump::random_inputs(1, 1, 4, false).remove(0);
    assert!(jump::verify_side_independence(&m, &h, m.q).is_err());
}

#[test]
fn json_solver_splits_circle_data() {
    let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
    let out = plemelj_json(&m, r#"{"c":[0.5,0],"holo":[[1,0],[0,2]],"anti":[[0,-1]]}"#).unwrap();
    let out: PlemeljOutput = serde_json::from_str(&out).unwrap();
    assert!(out.residual < 1e-8);
    // On the unit circle the holomorphic part stays inside and the conjugate
    // part moves outside, with opposite sign.
    assert!((out.h1.holo[0] - C64::new(1.0, 0.0)).norm() < 1e-10);
    assert!((out.h1.holo[1] - C64::new(0.0, 2.0)).norm() < 1e-10);
    assert!(out.h1.anti.iter().all(|b| b.norm() < 1e-10));
    assert!(plemelj_json(&m, "not json").is_err());
}

#[test]
fn interior_map_grunsky_norm_is_below_one() {
    let m = build_model(&CurveSpec::interior(&[C64::new(0.25, 0.0)]), 16, 1e-10).unwrap();
    let g = grunsky_norm(&m, 16).unwrap();
    assert!(g.nu > 0.0 && g.nu < 1.0);
    assert!((g.bound - (1.0 - g.nu * g.nu).sqrt()).abs() < 1e-14);
}
