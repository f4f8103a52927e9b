use magvpt::effective_potential::{w1, ThermoPoint};
use magvpt::ground_state::{energy_t0, optimize_t0};
use magvpt::optimizer::optimize_frequencies;
use magvpt::strong_field::{binding_ln_b_expansion, optimize_reduced};
use magvpt::trial_oscillator::FrequencyTriple;
use magvpt::weak_field::{solve_weak_field, weak_field_table, SolverMode};

#[test]
fn single_precision_ground_state() {
    for b in [0.0f32, 1.0, 10.0] {
        let s = optimize_t0::<f32>(b).unwrap();
        let d = optimize_t0::<f64>(b as f64).unwrap();
        assert!((s.energy as f64 - d.energy).abs() < 1e-4 * (1.0 + d.energy.abs()), "B = {b}");
    }
}

#[test]
fn cold_potential_at_origin_tracks_ground_state() {
    // Closest the thermal optimizer gets to T = 0: ground-state frequencies,
    // Omega_perp1 = B, and the zero-point logs removed.
    for b in [0.5f64, 2.0] {
        let gs = optimize_t0(b).unwrap();
        let beta = 1e6;
        let p = ThermoPoint::new(beta, b, 0.0, 0.0).unwrap();
        let f = FrequencyTriple::new(b, gs.omega_perp2, gs.omega_par).unwrap();
        let w = w1(&p, &f).unwrap().value;
        let (pm, dm) = ((b + gs.omega_perp2) / 2.0, (gs.omega_perp2 - b).abs() / 2.0);
        let logs: f64 = [pm, dm, gs.omega_par].iter().map(|o| (beta * o).ln()).sum::<f64>() / beta;
        let e = energy_t0(gs.omega_perp2, gs.omega_par, b).unwrap();
        assert!((w + logs - e).abs() < 1e-4, "B = {b}: {} vs {e}", w + logs);
    }
}

#[test]
fn thermal_optimum_bounded_by_ground_state_trial() {
    // The optimized thermal potential at the origin lies below any fixed trial.
    let (beta, b) = (50.0, 1.0);
    let p = ThermoPoint::new(beta, b, 0.0, 0.0).unwrap();
    let seed = FrequencyTriple::new(1.0, 1.5, 0.7).unwrap();
    let r = optimize_frequencies(&p, &seed, 1e-7).unwrap();
    let gs = optimize_t0(b).unwrap();
    let f = r.frequencies;
    let trial = FrequencyTriple::new(f.omega_perp1, gs.omega_perp2, gs.omega_par).unwrap();
    assert!(r.value <= w1(&p, &trial).unwrap().value + 1e-9);
}

#[test]
fn strong_field_full_and_reduced_converge() {
    let mut prev = f64::INFINITY;
    for b in [1e4f64, 1e6, 1e8] {
        let full = optimize_t0(b).unwrap().binding;
        let reduced = optimize_reduced(b).unwrap().binding;
        let rel = ((full - reduced) / full).abs();
        assert!(rel < prev, "B = {b}: {rel}");
        prev = rel;
    }
    assert!(prev < 1e-3, "{prev}");
}

#[test]
fn expansion_approaches_reduced_optimum() {
    let mut prev = f64::INFINITY;
    for b in [1e6f64, 1e12, 1e24] {
        let gap = ((binding_ln_b_expansion(b).unwrap().total() - optimize_reduced(b).unwrap().binding)
            / optimize_reduced(b).unwrap().binding)
            .abs();
        assert!(gap < prev, "B = {b}: {gap}");
        prev = gap;
    }
}

#[test]
fn weak_field_series_matches_optimizer_at_small_field() {
    let sol = solve_weak_field::<f64>(3, &()).unwrap();
    for b in [0.01f64, 0.03] {
        let r = optimize_t0(b).unwrap();
        let series = b / 2.0 - sol.energy_at(b);
        // Truncation after B^6.
        assert!((r.binding - series).abs() < 10.0 * b.powi(8), "B = {b}");
    }
}

#[test]
fn table_modes_consistent() {
    let ext = weak_field_table(4, SolverMode::Extended(30)).unwrap();
    let dbl = weak_field_table(4, SolverMode::Double).unwrap();
    for (x, d) in ext.iter().zip(&dbl) {
        assert!((x.epsilon - d.epsilon).abs() < 1e-10 * (1.0 + x.epsilon.abs()), "n = {}", x.n);
    }
}
