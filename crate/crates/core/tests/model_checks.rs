//! Cross-module consistency checks on the physics layer: reduced-model
//! validity, coverage behavior, and crosstalk limits.

use ladder_sim_core::effective::{adiabatic_eliminate, first_peak_height, validity_report};
use ladder_sim_core::propagator::rabi_trace;
use ladder_sim_core::scheme::{preset_three_photon, preset_two_photon, AtomCloud};
use ladder_sim_core::spatial::{
    averaged_a1_analytic, averaged_a1_numeric, coverage_sweep, crosstalk, crosstalk_report,
    gamma_profile, scheme_for_coverage, RadialQuadrature,
};
use ladder_sim_core::units::{um, us};

#[test]
fn intermediate_levels_stay_nearly_unpopulated() {
    // the strong second step keeps n2 + n3 below ten times the static
    // admixture (Omega1^2 + Omega3^2)/Omega2^2
    let scheme = preset_three_photon();
    let t = scheme.transitions();
    let bound = 10.0 * (t[0].peak_rabi.powi(2) + t[2].peak_rabi.powi(2)) / t[1].peak_rabi.powi(2);
    let trace = rabi_trace(&scheme, 0.0, us(1.0), 2001).unwrap();
    for (i, row) in trace.populations.iter().enumerate() {
        let mid = row[1] + row[2];
        assert!(
            mid < bound,
            "n2+n3 = {mid:.3e} at sample {i} exceeds {bound:.3e}"
        );
    }
}

#[test]
fn first_peak_height_matches_full_numerics_on_axis() {
    let eff = adiabatic_eliminate(&preset_three_photon(), 0.0).unwrap();
    let analytic = first_peak_height(&eff).unwrap();
    assert!((analytic - 0.9959).abs() < 5e-4, "envelope peak {analytic}");
}

#[test]
fn coverage_sweep_three_photon_monotone() {
    let sweep = coverage_sweep(&preset_three_photon(), um(1.0), &[1.0, 2.0, 4.0, 8.0]).unwrap();
    for pair in sweep.a1_numeric.windows(2) {
        assert!(
            pair[1] >= pair[0],
            "A1 must not decrease with coverage: {:?}",
            sweep.a1_numeric
        );
    }
    for a1 in &sweep.a1_numeric {
        assert!((0.0..=1.0).contains(a1));
    }
    // analytic column present away from the pole region
    assert!(sweep.a1_analytic[1].is_some());
    assert!(sweep.a1_analytic[3].is_some());
}

#[test]
fn coverage_sweep_single_entry_matches_direct_call() {
    let scheme = preset_three_photon();
    let cloud = AtomCloud::coaxial(um(1.0)).unwrap();
    let sweep = coverage_sweep(&scheme, um(1.0), &[2.0]).unwrap();
    let direct =
        averaged_a1_numeric(&scheme_for_coverage(&scheme, 2.0, um(1.0)).unwrap(), &cloud).unwrap();
    assert_eq!(sweep.a1_numeric[0], direct);
}

#[test]
fn two_photon_contrast_degrades_with_focusing() {
    let sweep = coverage_sweep(&preset_two_photon(), um(1.0), &[1.0, 2.0, 10.0]).unwrap();
    assert!(sweep.a1_numeric[0] < sweep.a1_numeric[1]);
    assert!(sweep.a1_numeric[1] < sweep.a1_numeric[2]);
    assert!(sweep.a1_analytic.iter().all(|a| a.is_none()));
}

#[test]
fn coverage_formula_agrees_with_envelope_quadrature() {
    // averaging the exact peak envelope e^{-Gamma(r) t_pi/2} over the cloud
    // reproduces the linearized coverage formula to first order
    let cloud = AtomCloud::coaxial(um(1.0)).unwrap();
    let quad = RadialQuadrature::for_cloud(&cloud, 48).unwrap();
    for xi in [2.0, 3.0, 4.0, 8.0] {
        let scheme = preset_three_photon()
            .with_uniform_rabi_waists(xi * um(1.0))
            .unwrap();
        let eff = adiabatic_eliminate(&scheme, 0.0).unwrap();
        let t_pi = std::f64::consts::PI / eff.reduced_rabi;
        let averaged_envelope: f64 = quad
            .nodes
            .iter()
            .zip(&quad.weights)
            .map(|(&r, &w)| w * (-gamma_profile(&scheme, r).unwrap() * t_pi / 2.0).exp())
            .sum();
        let formula = averaged_a1_analytic(&scheme, &cloud).unwrap();
        let diff = (averaged_envelope - formula).abs();
        assert!(
            diff < 0.002,
            "xi = {xi}: envelope {averaged_envelope:.5} vs formula {formula:.5}"
        );
    }
}

#[test]
fn crosstalk_on_axis_reduces_to_averaged_peak() {
    let scheme = preset_three_photon()
        .with_uniform_rabi_waists(um(2.0))
        .unwrap();
    let on_axis = AtomCloud::coaxial(um(1.0)).unwrap();
    let eff = adiabatic_eliminate(&scheme, 0.0).unwrap();
    let t_end = std::f64::consts::TAU / eff.reduced_rabi;
    let from_crosstalk = crosstalk(&scheme, &on_axis, t_end).unwrap();
    let from_average = averaged_a1_numeric(&scheme, &on_axis).unwrap();
    assert!(
        (from_crosstalk - from_average).abs() < 1e-4,
        "crosstalk at d = 0 gave {from_crosstalk}, averaged peak {from_average}"
    );
}

#[test]
fn crosstalk_falls_off_beyond_three_waists() {
    let scheme = preset_three_photon()
        .with_uniform_rabi_waists(um(2.0))
        .unwrap();
    let mut last = f64::INFINITY;
    for d_um in [6.0, 8.0, 10.0] {
        let neighbor = AtomCloud::new(um(1.0), um(d_um)).unwrap();
        let value = crosstalk_report(&scheme, &neighbor, us(0.25), 24, 12, 301)
            .unwrap()
            .max_population;
        assert!(
            value < last,
            "crosstalk must fall with distance: {value:.3e} at {d_um} um"
        );
        last = value;
    }
    assert!(last < 1e-6, "far neighbor still sees {last:.3e}");
}

#[test]
fn elimination_invalid_at_neighbor_center_and_models_disagree_there() {
    // at the neighbor center the coupling hierarchy is inverted, the
    // validity flag must say so, and the reduced model misses the true
    // (much smaller) excitation by far more than an order of magnitude
    let scheme = preset_three_photon()
        .with_uniform_rabi_waists(um(2.0))
        .unwrap();
    let report = validity_report(&scheme, um(5.0)).unwrap();
    assert!(!report.elimination_valid);
    assert!(report.ratio_omega1 > 10.0);

    let point = AtomCloud::new(1e-9, um(5.0)).unwrap();
    let full = crosstalk_report(&scheme, &point, us(0.25), 8, 4, 601)
        .unwrap()
        .max_population;
    let effective = ladder_sim_core::spatial::crosstalk_effective_estimate(
        &scheme,
        &point,
        us(0.25),
        8,
        4,
        601,
    )
    .unwrap();
    let ratio = effective.max(full) / effective.min(full).max(1e-300);
    assert!(
        ratio > 10.0,
        "reduced vs full at the neighbor center differ only {ratio:.1}x (full {full:.3e}, reduced {effective:.3e})"
    );
}
