use biflab::maps::{CubicHenonMap, Sign};
use biflab::orbit::{scan_bifurcations, EventKind, ScanConfig};
use biflab::resonance::{classify_resonant_point, ResonantType};

#[test]
fn period_doubling_of_the_fixed_point() {
    let family = |m2: f64| CubicHenonMap::new(Sign::Plus, 0.0, m2);
    let report = scan_bifurcations(family, &ScanConfig::new(1, (-3.0, -1.0), 40)).unwrap();
    let pd: Vec<_> = report.events.iter().filter(|e| e.kind == EventKind::PeriodDoubling).collect();
    assert!(pd.iter().any(|e| (e.parameter_value + 2.0).abs() < 1e-8), "{:?}", report.events);
}

#[test]
fn empty_range_has_no_events() {
    let family = |m1: f64| CubicHenonMap::new(Sign::Plus, m1, -0.5);
    let report = scan_bifurcations(family, &ScanConfig::new(1, (0.3, 0.3), 10)).unwrap();
    assert!(report.events.is_empty());
}

#[test]
fn events_are_sorted() {
    let family = |m1: f64| CubicHenonMap::new(Sign::Plus, m1, -0.5);
    let report = scan_bifurcations(family, &ScanConfig::new(4, (0.65, 0.8), 31).symmetric()).unwrap();
    assert!(report.events.windows(2).all(|w| w[0].parameter_value <= w[1].parameter_value));
    assert!(report.events.iter().filter(|e| e.kind == EventKind::Pitchfork).count() >= 2);
}

#[test]
fn fixed_point_on_resonance_curve_is_elliptic_type() {
    // every M2 <= 0 on the nu = +1 resonance curve except -1/3
    for m2 in [-2.0, -1.0, -0.5, -0.2, 0.0] {
        assert_eq!(classify_resonant_point(Sign::Plus, m2), ResonantType::EllipticType);
    }
}

#[test]
fn four_orbit_collapse_lands_on_the_quarter_turn_curve() {
    // the fixed point has trace 0 where M1^2 = 4/27 (M2 - 3)^2 (-M2)
    let m2 = -0.5;
    let expected = (4.0 / 27.0 * (m2 - 3.0_f64).powi(2) * -m2).sqrt();
    let family = |m1: f64| CubicHenonMap::new(Sign::Plus, m1, m2);
    let report = scan_bifurcations(family, &ScanConfig::new(4, (0.0, 2.0), 101)).unwrap();
    let hit = report
        .events
        .iter()
        .filter(|e| e.kind == EventKind::ResonanceOneFour)
        .map(|e| (e.parameter_value - expected).abs())
        .fold(f64::INFINITY, f64::min);
    assert!(hit < 1e-8, "closest 1:4 event off by {hit:e}: {:?}", report.events);
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
}
