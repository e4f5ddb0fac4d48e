use plasmon_core::params::{default_geometry, graphene_preset, DetectionGeometry, Geometry};
use plasmon_core::three_wave::*;

#[test]
fn closure_on_every_point() {
    let g = default_geometry();
    let m = graphene_preset();
    for deg in [-60.0, -30.0, 0.0, 20.0, 30.0, 60.0] {
        let p = phase_match(&g, &m, f64::to_radians(deg)).unwrap();
        assert!((g.omega_p - p.omega_i - p.omega_s).abs() <= 1e-12 * g.omega_p);
        assert!((p.q_p - p.q_i - p.q_s).abs() <= 1e-12 * p.q_p.abs());
        assert!((p.mode.omega_s / p.omega_s - 1.0).abs() < 1e-9);
        assert!(p.omega_s > m.v_f * p.q_s.abs());
    }
}

#[test]
fn plasmon_frequency_falls_toward_degenerate_angle() {
    let g = default_geometry();
    let m = graphene_preset();
    let mut last = f64::INFINITY;
    for deg in (0..=44).step_by(4) {
        let w = phase_match(&g, &m, f64::to_radians(deg as f64)).unwrap().omega_s;
        assert!(w < last);
        last = w;
    }
}

#[test]
fn slow_plasmons_enhance_gain_exponent() {
    let (_, xi) = detector_average(0.05, 4e11, 1e11, 1.3e9, 1.0);
    let (_, xi_slow) = detector_average(0.05, 4e11, 1e11, 0.65e9, 1.0);
    assert!((xi_slow / xi - 2.0).abs() < 1e-14);
}

#[test]
fn resonant_and_closed_paths_agree_at_operating_point() {
    let p = phase_match(&default_geometry(), &graphene_preset(), 20f64.to_radians()).unwrap();
    let det = DetectionGeometry { l_x: 0.05, l_y: 0.1, delta_omega: 1e11, a_d: 0.01, t: 300.0 };
    let r = gain_report(&p, 1e16, 1e11, &det, 0.01).unwrap();
    assert!(!r.paths_disagree, "{} vs {}", r.re_g_resonant, r.re_g_closed);
    assert_eq!(r.chi_path, ChiPath::Resonant);
    assert!(r.amplification >= 0.0 && r.i_threshold > 0.0);
}

#[test]
fn detuned_pump_uses_oracle_path() {
    let g = default_geometry();
    let m = graphene_preset();
    let detuned = m.with_e_f(m.e_f * 1.2);
    let p = phase_match(&g, &detuned, 20f64.to_radians()).unwrap();
    assert_eq!(p.chi_path, ChiPath::Numeric);
    assert!(gain_g(&p, 1e16).re.is_finite());
    let closed = phase_match_with(&g, &detuned, 20f64.to_radians(), ChiMethod::Closed).unwrap();
    assert_eq!(closed.chi_path, ChiPath::Closed);
    let rel = (p.chi2_s / closed.chi2_s - 1.0).norm();
    assert!(rel < 0.05, "oracle vs closed χ_s: {rel}");
}

#[test]
fn total_internal_reflection_rejected() {
    let g = Geometry { n1: 2.0, n2: 1.0, ..default_geometry() };
    assert!(phase_match(&g, &graphene_preset(), 1.2).is_err());
}

#[test]
fn flux_increases_with_collection_length() {
    let p = phase_match(&default_geometry(), &graphene_preset(), 20f64.to_radians()).unwrap();
    let det = DetectionGeometry { l_x: 0.01, l_y: 0.1, delta_omega: 1e11, a_d: 0.01, t: 300.0 };
    let i_p = 0.5 * threshold_intensity(&p, 1e11).unwrap();
    let mut last = 0.0;
    for k in 1..10 {
        let f = idler_flux(&p, i_p, &DetectionGeometry { l_x: 0.01 * k as f64, ..det }, 1e11);
        assert!(f > last);
        last = f;
    }
}

#[test]
fn reflected_pair_coefficient_scales_with_mode_normalization() {
    let p = phase_match(&default_geometry(), &graphene_preset(), 20f64.to_radians()).unwrap();
    let r = reflected_idler_coefficients(&p, 1e16).unwrap();
    let expected = p.geom.n1 * p.gamma_coupling.norm() * p.chi2_i.norm() / (plasmon_core::constants::C * p.geom.theta_1i.cos());
    assert!((r.kappa.norm() / expected - 1.0).abs() < 1e-12);
    let gamma_sq_per_e = p.gamma_coupling.norm_sqr() / p.mode.e_s0_sq;
    let k2 = r.kappa.norm_sqr() / (p.chi2_i.norm_sqr() * p.mode.e_s0_sq);
    assert!((k2 / gamma_sq_per_e - (p.geom.n1 / (plasmon_core::constants::C * p.geom.theta_1i.cos())).powi(2)).abs() < 1e-12 * k2 / gamma_sq_per_e);
    assert!((r.pair_ratio - r.kappa.norm_sqr() * r.pump_photons).abs() <= 1e-12 * r.pair_ratio);
}

#[test]
fn regression_gain_and_threshold() {
    let p = phase_match(&default_geometry(), &graphene_preset(), 20f64.to_radians()).unwrap();
    let re_g = gain_g(&p, 1e16).re;
    assert!((re_g / 4.267863799086033e11 - 1.0).abs() < 1e-8, "{re_g:e}");
    let i_th = threshold_intensity(&p, 1e11).unwrap();
    assert!((i_th / 2.343092579979125e15 - 1.0).abs() < 1e-8, "{i_th:e}");
}
