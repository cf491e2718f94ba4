use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stirap_core::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn register_state(reg: &[C64]) -> StateVector<BasisState> {
    let v = StateVector::from_register(canonical_gate_basis().shared(), reg).unwrap();
    normalize(&v).unwrap().0
}

fn random_register(rng: &mut ChaCha8Rng) -> Vec<C64> {
    let reg: Vec<C64> = (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    register_state(&reg).register()
}

fn run(kappa: f64, gamma: f64, psi0: &StateVector<BasisState>, cfg: &IntegratorConfig) -> Trajectory<BasisState> {
    let schedule = cz_schedule(&CzPulseParams::default()).unwrap();
    let params = SystemParams::from_ratios(kappa, gamma).unwrap();
    propagate(&schedule, &params, psi0, cfg).unwrap()
}

fn uniform() -> StateVector<BasisState> {
    register_state(&[c(0.5, 0.0); 4])
}

#[test]
fn norm_never_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (kappa, gamma) in [(0.1, 0.1), (0.2, 0.0), (0.0, 0.2), (0.12, 0.077)] {
        let traj = run(kappa, gamma, &register_state(&random_register(&mut rng)), &IntegratorConfig::default());
        assert!(traj.max_norm_increase <= 1e-12, "growth {}", traj.max_norm_increase);
        assert!(traj.norms().windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn lossless_norm_is_conserved() {
    let traj = run(0.0, 0.0, &uniform(), &IntegratorConfig::default());
    for n in traj.norms() {
        assert!((n - 1.0).abs() < 1e-8, "norm {n}");
    }
}

#[test]
fn propagator_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = IntegratorConfig::default();
    for _ in 0..3 {
        let a = register_state(&random_register(&mut rng));
        let b = register_state(&random_register(&mut rng));
        let (alpha, beta) = (c(0.3, -0.8), c(-1.1, 0.4));
        let mix = a.scaled(alpha).try_add(&b.scaled(beta)).unwrap();
        let (mix_n, n2) = normalize(&mix).unwrap();
        let out = run(0.1, 0.1, &mix_n, &cfg).final_state().scaled(c(n2.sqrt(), 0.0));
        let expect = run(0.1, 0.1, &a, &cfg)
            .final_state()
            .scaled(alpha)
            .try_add(&run(0.1, 0.1, &b, &cfg).final_state().scaled(beta))
            .unwrap();
        assert!(out.max_abs_diff(&expect).unwrap() < 1e-10);
    }
}

#[test]
fn success_probability_decomposes_over_components() {
    let cfg = IntegratorConfig::default();
    let p1 = run(0.1, 0.1, &register_state(&[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]), &cfg).final_norm_sqr();
    let p2 = run(0.1, 0.1, &register_state(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]), &cfg).final_norm_sqr();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let reg = random_register(&mut rng);
        // Register order is 00, 01, 10, 11: β, α, γ, ε.
        let expect = reg[1].norm_sqr() * p1 + reg[0].norm_sqr() * p2 + reg[2].norm_sqr() + reg[3].norm_sqr();
        let got = run(0.1, 0.1, &register_state(&reg), &cfg).final_norm_sqr();
        assert!((got - expect).abs() < 1e-8, "{got} vs {expect}");
    }
}

fn to_nalgebra(m: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.dim(), m.dim(), |r, cc| m[(r, cc)])
}

/// Piecewise-constant propagation: `exp(-i H(t_mid) dt)` on sub-steps of
/// `dt`, applied with the dense matrix exponential.
fn frozen_exponential(
    schedule: &PulseSchedule,
    params: &SystemParams,
    psi0: &StateVector<BasisState>,
    dt_target: f64,
) -> Vec<C64> {
    let n = ((schedule.t_end() - schedule.t_start()) / dt_target).ceil() as usize;
    let dt = (schedule.t_end() - schedule.t_start()) / n as f64;
    let basis = psi0.basis().clone();
    let generator = ConditionalGenerator::with_all_drives(basis.clone(), *params).unwrap();
    let mut h = CMatrix::zeros(basis.len());
    let mut v = nalgebra::DVector::from_column_slice(psi0.amplitudes());
    for k in 0..n {
        let t = schedule.t_start() + (k as f64 + 0.5) * dt;
        generator.fill(&schedule.drives_at(t), &mut h);
        let u = (to_nalgebra(&h) * c(0.0, -dt)).exp();
        v = u * v;
    }
    v.iter().copied().collect()
}

#[test]
fn rk4_agrees_with_frozen_exponential() {
    let schedule = cz_schedule(&CzPulseParams::default()).unwrap();
    let params = SystemParams::from_ratios(0.1, 0.1).unwrap();
    let psi0 = uniform();
    let rk4 = propagate(&schedule, &params, &psi0, &IntegratorConfig::default()).unwrap().final_state();
    let oracle = frozen_exponential(&schedule, &params, &psi0, 0.002);
    let diff = rk4.amplitudes().iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-6, "max difference {diff}");
}

#[test]
fn halving_the_step_changes_nothing() {
    let psi0 = uniform();
    let coarse = run(0.1, 0.1, &psi0, &IntegratorConfig::default()).final_state();
    let fine = run(0.1, 0.1, &psi0, &IntegratorConfig::with_step(0.01)).final_state();
    assert!(coarse.max_abs_diff(&fine).unwrap() < 1e-8);

    let schedule = cz_schedule(&CzPulseParams::default()).unwrap();
    let report = convergence_report(
        &schedule,
        &SystemParams::from_ratios(0.1, 0.1).unwrap(),
        &psi0,
        &IntegratorConfig::default(),
    );
    assert!(report.passed, "{report:?}");
    assert!(report.delta_p_suc < 1e-8);
}

#[test]
fn doubling_the_window_changes_nothing() {
    let schedule = cz_schedule(&CzPulseParams::default()).unwrap();
    let wide =
        PulseSchedule::new(schedule.pulses().to_vec(), 2.0 * schedule.t_start(), 2.0 * schedule.t_end()).unwrap();
    let params = SystemParams::from_ratios(0.1, 0.1).unwrap();
    let cfg = IntegratorConfig::default();
    let a = propagate(&schedule, &params, &uniform(), &cfg).unwrap().final_state();
    let b = propagate(&wide, &params, &uniform(), &cfg).unwrap().final_state();
    // Excited-state transients still ringing down at the edge (~1e-5) are
    // not readouts; the success probability, fidelity and register are.
    assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-8);
    let ideal = gates::ideal_gate_matrix(TargetLabel::T01);
    let fa = propagator::fidelity_against(&normalize(&a).unwrap().0, &ideal, &uniform()).unwrap();
    let fb = propagator::fidelity_against(&normalize(&b).unwrap().0, &ideal, &uniform()).unwrap();
    assert!((fa - fb).abs() < 1e-8);
    for (x, y) in a.register().iter().zip(b.register()) {
        assert!((x - y).norm() < 1e-8);
    }
}

#[test]
fn success_probability_reads_samples() {
    let traj = run(0.1, 0.1, &uniform(), &IntegratorConfig::default());
    assert_eq!(success_probability(&traj, traj.t_start()).unwrap(), 1.0);
    assert_eq!(success_probability(&traj, traj.t_end()).unwrap(), traj.final_norm_sqr());
    assert!(success_probability(&traj, traj.t_end() + 10.0).is_err());
}

#[test]
fn zero_dissipation_succeeds_for_every_input() {
    for i in 0..4 {
        let mut reg = vec![c(0.0, 0.0); 4];
        reg[i] = c(1.0, 0.0);
        let p = run(0.0, 0.0, &register_state(&reg), &IntegratorConfig::default()).final_norm_sqr();
        assert!((p - 1.0).abs() < 1e-6, "input {i}: {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn final_norm_is_a_probability(kappa in 0.0..0.3f64, gamma in 0.0..0.3f64, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = IntegratorConfig { step: 0.05, ..IntegratorConfig::default() };
        let p = run(kappa, gamma, &register_state(&random_register(&mut rng)), &cfg).final_norm_sqr();
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn decoupled_states_never_move(kappa in 0.0..0.5f64, gamma in 0.0..0.5f64, a in -1.0..1.0f64, b in -1.0..1.0f64) {
        prop_assume!(a.abs() + b.abs() > 1e-3);
        let psi0 = register_state(&[c(0.0, 0.0), c(0.0, 0.0), c(a, 0.3), c(b, -0.2)]);
        let cfg = IntegratorConfig { step: 0.05, ..IntegratorConfig::default() };
        let out = run(kappa, gamma, &psi0, &cfg).final_state();
        prop_assert!(out.max_abs_diff(&psi0).unwrap() < 1e-14);
    }
}
