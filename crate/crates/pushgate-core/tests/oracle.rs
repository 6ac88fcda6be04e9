use core::f64::consts::PI;

use pushgate_core::consts::HBAR;
use pushgate_core::oracle::{OracleSetup, MIN_SAMPLES};
use pushgate_core::phase_engine::{ForceDirection, PushGate};
use pushgate_core::thermal_nonuniform::ForceProfile;
use pushgate_core::trap_dynamics::{ForcePulse, IonSpecies, TrapConfig};

/// Gate with `a/d` and `θ` fixed at the requested values.
fn gate(a_over_d: f64, theta: f64, omega_tau: f64) -> PushGate {
    let species = IonSpecies::calcium40();
    let omega = 2.0 * PI * 1e6;
    let a = (HBAR / (species.mass * omega)).sqrt();
    let trap = TrapConfig { omega, separation: a / a_over_d };
    let eps = trap.coulomb_parameter(&species);
    let xi = (theta / ((PI / 8.0).sqrt() * eps * omega_tau)).sqrt();
    let g = PushGate::new(species, trap, ForcePulse { xi, tau: omega_tau / omega }, ForceDirection::Same, 0.0, 0.0)
        .unwrap();
    assert!((g.theta() / theta - 1.0).abs() < 1e-12);
    g
}

fn show(report: &pushgate_core::oracle::OracleReport) {
    for c in &report.comparisons {
        eprintln!("{:32} closed {:.6e} mc {:.6e} ± {:.2e} z {:+.2} pinned {}", c.name, c.closed, c.estimate.mean, c.estimate.std_err, c.z, c.pinned);
    }
}

#[test]
fn echo_fidelity_matches_monte_carlo() {
    let g = gate(1e-3, PI / 2.0, 10.0);
    let setup = OracleSetup::new(g, 10.0, 2024, None).unwrap();
    let report = setup.report(&setup.run(100_000));
    show(&report);
    let echo = &report.comparisons[0];
    assert!((echo.closed - 8.88e-9).abs() < 0.01e-9);
    assert!(echo.z.abs() <= 3.0, "{echo:?}");
    assert!(report.passes(3.0));
}

#[test]
fn nonuniform_fidelity_matches_monte_carlo() {
    let g = gate(1e-3, PI / 2.0, 10.0);
    let w = 4e-6;
    for profile in [
        ForceProfile::Travelling { xi0: g.pulse.xi, x0: 0.8 * w / 2.0, waist: w },
        ForceProfile::Standing { xi0: g.pulse.xi, k: 0.0275 / g.a(), kz0: PI / 4.0 },
        // Small ka: the closed form is the second moment of δϑ, the samples the
        // full sin².
        ForceProfile::Standing { xi0: g.pulse.xi, k: 0.015 / g.a(), kz0: 0.6 },
    ] {
        let setup = OracleSetup::new(g, 10.0, 99, Some(profile)).unwrap();
        let report = setup.report(&setup.run(100_000));
        show(&report);
        assert!(report.passes(3.0), "{profile:?}");
    }
}

#[test]
fn no_echo_printed_and_exact_forms() {
    // θ = π, ξ = 1, a/d = 1e-3, k_BT/ħω = 10 needs a very short pulse; the
    // exact average is pinned only when the excursions stay small.
    let g = gate(1e-4, PI / 2.0, 8.0);
    let setup = OracleSetup::new(g, 10.0, 5, None).unwrap();
    let report = setup.report(&setup.run(100_000));
    show(&report);
    let exact = report.comparisons.iter().find(|c| c.name == "no_echo_infidelity_exact").unwrap();
    let printed = report.comparisons.iter().find(|c| c.name == "no_echo_infidelity_printed").unwrap();
    assert!(exact.pinned && exact.z.abs() <= 3.0, "{exact:?}");
    assert!(!printed.pinned);
    assert!((printed.closed / exact.closed - 2.0).abs() < 0.05);
}

#[test]
fn few_samples_flagged() {
    let g = gate(1e-3, PI / 2.0, 10.0);
    let setup = OracleSetup::new(g, 10.0, 1, None).unwrap();
    let report = setup.report(&setup.run(1));
    assert!(!report.sufficient);
    assert!(MIN_SAMPLES > 1);
}
