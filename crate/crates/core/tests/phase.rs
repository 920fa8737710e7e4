use lda_shift::phase::{linear_grid, CLOSED_FORM_EPSILON};
use lda_shift::{
    behavior_signature, classify_phase, derivative_at_balance, imbalance_curve, phase_knots,
    Behavior, Phase,
};

#[test]
fn derivative_sign_flips_only_at_the_knots() {
    for delta2 in [1.0, 4.0, 9.0, 16.0] {
        let k = phase_knots(delta2).unwrap();
        for g0 in linear_grid(0.1, 8.0, 0.05) {
            if (g0 - k.gamma_a).abs() <= 0.05 || (g0 - k.gamma_b).abs() <= 0.05 {
                continue;
            }
            let d = derivative_at_balance(g0, delta2, None).unwrap();
            let expect_positive = g0 < k.gamma_a || g0 > k.gamma_b;
            assert_eq!(d > 0.0, expect_positive, "Δ²={delta2} γ0={g0} d={d}");
        }
    }
}

#[test]
fn derivative_matches_closed_form_below_two() {
    // Δ² φ(·) (4 + Δ²) / (16 (Δ² + 2γ0)^{3/2} sqrt(1 − γ0/2))
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    for delta2 in [1.0f64, 9.0, 25.0] {
        for g0 in [0.2f64, 0.5, 1.0, 1.5, 1.9] {
            let s = (1.0 - g0 / 2.0).sqrt();
            let arg = -delta2 * s / (2.0 * (delta2 + 2.0 * g0).sqrt());
            let exact =
                delta2 * phi(arg) * (4.0 + delta2) / (16.0 * (delta2 + 2.0 * g0).powf(1.5) * s);
            let fd = derivative_at_balance(g0, delta2, None).unwrap();
            assert!((fd - exact).abs() <= 1e-7 * exact, "Δ²={delta2} γ0={g0}");
        }
    }
}

#[test]
fn derivative_sign_above_two_follows_the_quadratic() {
    for delta2 in [1.0f64, 9.0, 25.0] {
        for g0 in [2.2f64, 3.0, 4.0, 6.0, 10.0] {
            let q = 4.0 * g0 * g0 - (12.0 - delta2) * g0 - 4.0 * delta2;
            if q.abs() < 1e-3 {
                continue;
            }
            let d = derivative_at_balance(g0, delta2, None).unwrap();
            assert_eq!(d > 0.0, q > 0.0, "Δ²={delta2} γ0={g0}");
        }
    }
}

fn signature(g0: f64) -> Behavior {
    let c = imbalance_curve(g0, 9.0, &linear_grid(1.0, 10.0, 0.25), None, 0.5).unwrap();
    behavior_signature(&c, CLOSED_FORM_EPSILON).unwrap()
}

#[test]
fn behavior_agrees_with_phase() {
    for g0 in [0.25, 0.5, 1.0] {
        assert_eq!(classify_phase(g0, 9.0).unwrap(), Phase::PhaseI);
        assert_eq!(signature(g0), Behavior::I, "γ0={g0}");
    }
    for g0 in [5.0, 6.0] {
        assert_eq!(classify_phase(g0, 9.0).unwrap(), Phase::PhaseIIICandidate);
        assert_eq!(signature(g0), Behavior::III, "γ0={g0}");
    }
}

#[test]
fn phase_two_curves_rebound_within_the_default_grid() {
    // The risk rises to the γ = 1 peak and falls, then turns up again before
    // r = 10, so the shape on this grid is not the plain rise-and-fall.
    for g0 in [2.5, 3.0] {
        assert_eq!(classify_phase(g0, 9.0).unwrap(), Phase::PhaseII);
        assert_eq!(signature(g0), Behavior::Other, "γ0={g0}");
    }
}

#[test]
fn far_ratio_endpoint_is_chance() {
    for g0 in [2.5, 5.0] {
        let c = imbalance_curve(g0, 9.0, &[1.0, 10.0, 1e4], None, 0.5).unwrap();
        let far = *c.risks.last().unwrap();
        assert!((far - 0.5).abs() <= 0.02, "γ0={g0}: {far}");
    }
    // slower at small γ0: 0.4731 at r = 1e4
    let c = imbalance_curve(0.5, 9.0, &[1e2, 1e4, 1e6, 1e8], None, 0.5).unwrap();
    assert!(c
        .risks
        .windows(2)
        .all(|w| (0.5 - w[1]) < 0.5 * (0.5 - w[0])));
    assert!((c.risks[3] - 0.5).abs() <= 1e-5);
}

#[test]
fn strong_ridge_removes_phase_behaviors() {
    for g0 in [0.5, 2.5, 5.0] {
        let c = imbalance_curve(g0, 9.0, &linear_grid(1.0, 10.0, 0.25), Some(1.0), 0.5).unwrap();
        let b = behavior_signature(&c, CLOSED_FORM_EPSILON).unwrap();
        let monotone = lda_shift::phase::sign_pattern(&c.risks, CLOSED_FORM_EPSILON).len() <= 1;
        assert!(b == Behavior::I || monotone, "γ0={g0}: {b:?}");
    }
}
