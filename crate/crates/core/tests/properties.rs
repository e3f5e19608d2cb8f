use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use gmclock::constants::{derive_body, keplerian_frequency, CentralBody, PhysicalConstants};
use gmclock::gem::{
    equatorial_field, gem_clock_effect, gravitomagnetic_moment, level_pair, potential_energy,
    potential_energy_closed_form, rewritten_field,
};
use gmclock::kerr::{kerr_clock_effect, kerr_frequencies, periods_from_frequencies, OrbitSense};
use gmclock::report::format_value;
use gmclock::semiclassical::{
    closure_period, evaluate_state, level_energies, quantum_clock_effect, RotorState,
};

fn rel(value: f64, reference: f64) -> f64 {
    ((value - reference) / reference).abs()
}

fn body_strategy() -> impl Strategy<Value = CentralBody> {
    (18.0..31.0f64, 3.0..9.0f64, -1e-2..1e-2f64)
        .prop_map(|(m, r, w)| CentralBody::new(10f64.powf(m), 10f64.powf(r), w).unwrap())
}

/// a w_k spans (0, 0.99) on a log scale down to 1e-12.
fn kerr_inputs() -> impl Strategy<Value = (f64, f64)> {
    (-12.0..(0.99f64).log10(), -6.0..3.0f64).prop_map(|(x, w)| {
        let omega_k = 10f64.powf(w);
        (10f64.powf(x) / omega_k, omega_k)
    })
}

proptest! {
    #[test]
    fn spin_parameter_balances_angular_momentum(body in body_strategy()) {
        let consts = PhysicalConstants::default();
        let d = derive_body(&body, &consts).unwrap();
        let lhs = d.spin_parameter_a * body.mass * consts.c * consts.c;
        let rhs = d.moment_of_inertia * body.spin_omega;
        prop_assert!(lhs == rhs || rel(lhs, rhs) < 1e-14);
        let again = derive_body(&body, &consts).unwrap();
        prop_assert_eq!(d.spin_parameter_a.to_bits(), again.spin_parameter_a.to_bits());
        prop_assert_eq!(d.moment_of_inertia.to_bits(), again.moment_of_inertia.to_bits());
    }

    #[test]
    fn keplerian_frequency_homogeneity(mass in 1e10..1e31f64, r in 1e3..1e12f64, k in 0.1..10.0f64) {
        let consts = PhysicalConstants::default();
        let base = keplerian_frequency(mass, r, &consts).unwrap();
        let scaled_g = PhysicalConstants { g: k * consts.g, ..consts };
        prop_assert!(rel(keplerian_frequency(mass, r, &scaled_g).unwrap(), k.sqrt() * base) < 1e-14);
        prop_assert!(rel(keplerian_frequency(k * mass, r, &consts).unwrap(), k.sqrt() * base) < 1e-14);
        prop_assert!(rel(keplerian_frequency(mass, k * r, &consts).unwrap(), k.powf(-1.5) * base) < 1e-14);
    }

    #[test]
    fn kerr_delta_t_is_four_pi_a((a, w) in kerr_inputs()) {
        let report = periods_from_frequencies(&kerr_frequencies(a, w).unwrap());
        prop_assert!(rel(report.delta_t, 4.0 * PI * a) < 1e-12);
        prop_assert!(report.t_plus > 0.0 && report.t_minus > 0.0);
        // the rounded periods agree with delta_t up to their own rounding
        prop_assert!((report.t_plus - report.t_minus - report.delta_t).abs() <= 4.0 * f64::EPSILON * report.t_plus);
    }

    #[test]
    fn quantum_route_matches_kerr((a, w) in kerr_inputs()) {
        let consts = PhysicalConstants::default();
        let q = quantum_clock_effect(a, w, &consts).unwrap();
        let k = kerr_clock_effect(a, w).unwrap();
        prop_assert!(rel(q.delta_t, 4.0 * PI * a) < 1e-12);
        prop_assert!(rel(q.t_plus, k.t_plus) < 1e-12);
        prop_assert!(rel(q.t_minus, k.t_minus) < 1e-12);
    }

    #[test]
    fn closure_periods_match_closed_forms((a, w) in kerr_inputs()) {
        let consts = PhysicalConstants::default();
        let (plus, minus) = level_energies(a, w, &consts).unwrap();
        prop_assert!(plus.energy > 0.0 && minus.energy < 0.0);
        let t_plus = closure_period(&RotorState::from_level(&plus), &consts).unwrap();
        let t_minus = closure_period(&RotorState::from_level(&minus), &consts).unwrap();
        prop_assert!(t_plus > 0.0 && t_minus > 0.0);
        prop_assert!(rel(t_plus, TAU * consts.hbar / plus.energy) < 1e-10);
        prop_assert!(rel(t_minus, -TAU * consts.hbar / minus.energy) < 1e-10);
    }

    #[test]
    fn rotor_states_are_single_valued(
        (a, w) in kerr_inputs(),
        modulus in 0.01..100.0f64,
        arg in 0.0..TAU,
        samples in prop::collection::vec((-20.0..20.0f64, -10.0..10.0f64), 100),
    ) {
        let consts = PhysicalConstants::unit();
        let (plus, minus) = level_energies(a, w, &consts).unwrap();
        for level in [plus, minus] {
            let state = RotorState::new(Complex64::from_polar(modulus, arg), level.lz.azimuthal_number(), level.energy).unwrap();
            let period = closure_period(&state, &consts).unwrap();
            for &(cycles, phi) in &samples {
                let t = cycles * period;
                let gap = evaluate_state(&state, t + period, phi + TAU, &consts) - evaluate_state(&state, t, phi, &consts);
                prop_assert!(gap.norm() < 1e-9 * modulus);
                prop_assert!(rel(evaluate_state(&state, t, phi, &consts).norm(), modulus) < 1e-14);
            }
        }
    }

    #[test]
    fn field_forms_and_coupling_agree(body in body_strategy(), lift in 0.01..3.0f64) {
        let consts = PhysicalConstants::default();
        let r = body.radius * 10f64.powf(lift);
        let d = derive_body(&body, &consts).unwrap();
        let w = keplerian_frequency(body.mass, r, &consts).unwrap();
        let b11 = equatorial_field(&body, r, &consts).unwrap().z_component();
        let b12 = rewritten_field(d.spin_j, body.mass, w, &consts).unwrap();
        prop_assert!(b11 == b12 || rel(b12, b11) < 1e-13);
        for sense in [OrbitSense::Prograde, OrbitSense::Retrograde] {
            let composed = potential_energy(sense, d.spin_j, body.mass, w, &consts).unwrap();
            let closed = potential_energy_closed_form(sense, d.spin_j, body.mass, w, &consts).unwrap();
            prop_assert!(composed == closed || rel(composed, closed) < 1e-13);
            prop_assert_eq!(composed, -gravitomagnetic_moment(sense, &consts) * b12);
        }
        let pair = level_pair(d.spin_j, body.mass, w, &consts).unwrap();
        prop_assert!(rel(pair.e_plus + pair.e_minus, -2.0 * consts.hbar * w) < 1e-14);
    }

    #[test]
    fn twelve_digit_text_round_trips(x in prop::num::f64::NORMAL) {
        let text = format_value(Some(x));
        let reread: f64 = text.parse().unwrap();
        prop_assert_eq!(format_value(Some(reread)), text);
        prop_assert!(rel(reread, x) <= 5e-12);
    }
}

#[test]
fn symmetric_frequencies_without_spin() {
    for w in [1e-6, 3.3e-3, 42.0] {
        let f = kerr_frequencies(0.0, w).unwrap();
        assert_eq!(f.w_plus, -f.w_minus);
    }
}

#[test]
fn kerr_delta_t_ignores_omega_k() {
    let a = 1.317e-8;
    let reference = kerr_clock_effect(a, 1e-6).unwrap().delta_t;
    for step in 0..=60 {
        let w = 10f64.powf(-6.0 + step as f64 / 10.0);
        let report = kerr_clock_effect(a, w).unwrap();
        assert!(rel(report.delta_t, reference) < 1e-12, "w_k = {w}");
    }
}

#[test]
fn gem_delta_t_ignores_radius() {
    let consts = PhysicalConstants::default();
    let earth = CentralBody::new(5.972e24, 6.371e6, 7.2921e-5).unwrap();
    let d = derive_body(&earth, &consts).unwrap();
    let reference = gem_clock_effect(
        d.spin_j,
        earth.mass,
        keplerian_frequency(earth.mass, 7e6, &consts).unwrap(),
        &consts,
    )
    .unwrap()
    .delta_t;
    for step in 0..=30 {
        let r = 7e6 * 10f64.powf(step as f64 / 10.0);
        let w = keplerian_frequency(earth.mass, r, &consts).unwrap();
        let report = gem_clock_effect(d.spin_j, earth.mass, w, &consts).unwrap();
        assert!(rel(report.delta_t, reference) < 1e-12, "r = {r}");
    }
}
