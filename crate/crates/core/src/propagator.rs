//! Time stepping of `i dψ/dt = H_cond(t) ψ` with classical RK4.
//!
//! The state is never renormalized while it evolves: its squared norm is
//! the probability that no photon has been emitted so far.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::hamiltonian::{ConditionalGenerator, LevelStructure, SystemParams};
use crate::linalg::{dot, norm_sqr, CMatrix};
use crate::pulses::PulseSchedule;
use crate::state::{normalize, Label, SharedBasis, StateVector};
use crate::{Error, Result, C64};

/// Allowed growth of the squared norm in one step before the step is
/// declared unstable.
pub const NORM_GROWTH_TOLERANCE: f64 = 1e-12;

/// Step-halving differences above this fail the convergence report.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Nominal step in units of 1/g; the actual step divides the window evenly.
    pub step: f64,
    /// Store every n-th step (the last step is always stored).
    pub sample_every: usize,
    /// Run a step-halving check alongside gate evaluations.
    pub check_convergence: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { step: 0.02, sample_every: 25, check_convergence: false }
    }
}

impl IntegratorConfig {
    pub fn with_step(step: f64) -> Self {
        Self { step, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter { name: "step", value: self.step });
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParameter { name: "sample_every", value: 0.0 });
        }
        Ok(())
    }
}

/// Stored samples of one conditional evolution.
#[derive(Clone, Debug)]
pub struct Trajectory<L: Label> {
    basis: SharedBasis<L>,
    schedule: Arc<PulseSchedule>,
    times: Vec<f64>,
    states: Vec<Vec<C64>>,
    norms: Vec<f64>,
    /// Actual step used.
    pub step: f64,
    pub steps: usize,
    /// Largest total population of states with an excited atom, over every step.
    pub max_excited_population: f64,
    /// Largest total population of states with at least one photon, over every step.
    pub max_photon_population: f64,
    /// Largest single-step increase of the squared norm (≤ 0 when the norm decays).
    pub max_norm_increase: f64,
}

impl<L: Label> Trajectory<L> {
    pub fn basis(&self) -> &SharedBasis<L> {
        &self.basis
    }

    pub fn schedule(&self) -> &PulseSchedule {
        &self.schedule
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Squared norm at each sample.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one sample")
    }

    /// Unnormalized state at sample `i`.
    pub fn sample(&self, i: usize) -> StateVector<L> {
        StateVector::new(Arc::clone(&self.basis), self.states[i].clone()).expect("sample matches basis")
    }

    pub fn sample_amplitudes(&self, i: usize) -> &[C64] {
        &self.states[i]
    }

    /// Unnormalized state `U_cond(t_end, t_start)|ψ0⟩`.
    pub fn final_state(&self) -> StateVector<L> {
        self.sample(self.len() - 1)
    }

    pub fn final_norm_sqr(&self) -> f64 {
        *self.norms.last().expect("nonempty")
    }

    fn nearest_index(&self, t: f64) -> Result<usize> {
        let (t0, t1) = (self.t_start(), self.t_end());
        if !(t >= t0 && t <= t1) {
            return Err(Error::OutOfRange { t, t_start: t0, t_end: t1 });
        }
        let i = self.times.partition_point(|&s| s < t);
        Ok(match i {
            0 => 0,
            i if i == self.times.len() => i - 1,
            i if (self.times[i] - t) < (t - self.times[i - 1]) => i,
            i => i - 1,
        })
    }

    /// Unnormalized state at the sample nearest to `t`.
    pub fn state_at(&self, t: f64) -> Result<StateVector<L>> {
        Ok(self.sample(self.nearest_index(t)?))
    }
}

/// Integrates from `schedule.t_start()` to `schedule.t_end()`.
pub fn propagate<L: LevelStructure>(
    schedule: &PulseSchedule,
    params: &SystemParams,
    psi0: &StateVector<L>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<L>> {
    let generator = ConditionalGenerator::new(Arc::clone(psi0.basis()), *params, &schedule.drives())?;
    propagate_with(&generator, schedule, psi0, cfg)
}

/// As [`propagate`], reusing a compiled generator.
pub fn propagate_with<L: LevelStructure>(
    generator: &ConditionalGenerator<L>,
    schedule: &PulseSchedule,
    psi0: &StateVector<L>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<L>> {
    cfg.validate()?;
    if psi0.basis().states() != generator.basis().states() {
        return Err(Error::BasisMismatch);
    }
    let n0 = psi0.norm_sqr();
    if (n0 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(n0));
    }

    let basis = Arc::clone(psi0.basis());
    let dim = basis.len();
    let excited: Vec<bool> = basis.states().iter().map(|s| s.excited_atoms() > 0).collect();
    let photonic: Vec<bool> = basis.states().iter().map(|s| s.photons() > 0).collect();
    let weight = |psi: &[C64], mask: &[bool]| -> f64 {
        psi.iter().zip(mask).filter(|(_, m)| **m).map(|(a, _)| a.norm_sqr()).sum()
    };

    let span = schedule.duration();
    let steps = libm::ceil(span / cfg.step - 1e-9).max(1.0) as usize;
    let h = span / steps as f64;
    let t0 = schedule.t_start();

    let capacity = steps / cfg.sample_every + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut norms = Vec::with_capacity(capacity);

    let mut psi = psi0.amplitudes().to_vec();
    let mut norm = n0;
    times.push(t0);
    states.push(psi.clone());
    norms.push(norm);
    let mut max_excited = weight(&psi, &excited);
    let mut max_photon = weight(&psi, &photonic);
    let mut max_increase = f64::NEG_INFINITY;

    let zero = C64::new(0.0, 0.0);
    let mut k1 = vec![zero; dim];
    let mut k2 = vec![zero; dim];
    let mut k3 = vec![zero; dim];
    let mut k4 = vec![zero; dim];
    let mut tmp = vec![zero; dim];

    for step in 1..=steps {
        let t = t0 + (step - 1) as f64 * h;
        let d_start = schedule.drives_at(t);
        let d_mid = schedule.drives_at(t + 0.5 * h);
        let d_end = schedule.drives_at(t + h);

        generator.derivative(&d_start, &psi, &mut k1);
        axpy_into(&psi, 0.5 * h, &k1, &mut tmp);
        generator.derivative(&d_mid, &tmp, &mut k2);
        axpy_into(&psi, 0.5 * h, &k2, &mut tmp);
        generator.derivative(&d_mid, &tmp, &mut k3);
        axpy_into(&psi, h, &k3, &mut tmp);
        generator.derivative(&d_end, &tmp, &mut k4);
        let w = h / 6.0;
        for i in 0..dim {
            psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * w;
        }

        let t_now = if step == steps { schedule.t_end() } else { t0 + step as f64 * h };
        let new_norm = norm_sqr(&psi);
        if !new_norm.is_finite() {
            return Err(Error::NumericalFailure { time: t_now });
        }
        let growth = new_norm - norm;
        max_increase = max_increase.max(growth);
        if growth > NORM_GROWTH_TOLERANCE {
            return Err(Error::Instability { time: t_now, growth });
        }
        norm = new_norm;
        max_excited = max_excited.max(weight(&psi, &excited));
        max_photon = max_photon.max(weight(&psi, &photonic));

        if step % cfg.sample_every == 0 || step == steps {
            times.push(t_now);
            states.push(psi.clone());
            norms.push(norm);
        }
    }

    Ok(Trajectory {
        basis,
        schedule: Arc::new(schedule.clone()),
        times,
        states,
        norms,
        step: h,
        steps,
        max_excited_population: max_excited,
        max_photon_population: max_photon,
        max_norm_increase: max_increase,
    })
}

#[inline]
fn axpy_into(x: &[C64], a: f64, y: &[C64], out: &mut [C64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + yi * a;
    }
}

/// `P_suc(t) = ‖U_cond(t, t_start) ψ0‖²`, read at the nearest stored sample.
pub fn success_probability<L: Label>(traj: &Trajectory<L>, t: f64) -> Result<f64> {
    let i = traj.nearest_index(t)?;
    Ok(traj.norms[i])
}

/// `F = |⟨ψ_norm(t_end)| U_ideal |ψ0⟩|²`, with `ideal` acting on the
/// computational register (`2^QUBITS` square).
pub fn gate_fidelity<L: Label>(traj: &Trajectory<L>, ideal: &CMatrix, psi0: &StateVector<L>) -> Result<f64> {
    let (normalized, _) = normalize(&traj.final_state())?;
    fidelity_against(&normalized, ideal, psi0)
}

/// Fidelity of an already normalized output state.
pub fn fidelity_against<L: Label>(output: &StateVector<L>, ideal: &CMatrix, psi0: &StateVector<L>) -> Result<f64> {
    let target = ideal_output(ideal, psi0)?;
    if !output.same_basis(&target) {
        return Err(Error::BasisMismatch);
    }
    // Both vectors are unit; only rounding can push the overlap above 1.
    Ok(dot(output.amplitudes(), target.amplitudes()).norm_sqr().min(1.0))
}

/// `U_ideal |ψ0⟩` embedded back into the full basis.
pub fn ideal_output<L: Label>(ideal: &CMatrix, psi0: &StateVector<L>) -> Result<StateVector<L>> {
    let expected = 1 << L::QUBITS;
    if ideal.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: ideal.dim() });
    }
    if psi0.leakage() > 1e-12 {
        return Err(Error::NotComputational);
    }
    StateVector::from_register(Arc::clone(psi0.basis()), &ideal.mul_vec(&psi0.register()))
}

/// Result of running the same propagation at `h` and `h/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub step: f64,
    pub p_suc: f64,
    pub p_suc_half_step: f64,
    pub delta_p_suc: f64,
    /// Largest amplitude difference between the two final states.
    pub state_distance: f64,
    /// `|1 - P_suc|` at the coarse step; the norm drift when there is no loss.
    pub norm_drift: f64,
    pub passed: bool,
    pub failure: Option<String>,
}

pub fn convergence_report<L: LevelStructure>(
    schedule: &PulseSchedule,
    params: &SystemParams,
    psi0: &StateVector<L>,
    cfg: &IntegratorConfig,
) -> ConvergenceReport {
    let half = IntegratorConfig { step: cfg.step / 2.0, ..*cfg };
    let failed = |e: Error| ConvergenceReport {
        step: cfg.step,
        p_suc: f64::NAN,
        p_suc_half_step: f64::NAN,
        delta_p_suc: f64::NAN,
        state_distance: f64::NAN,
        norm_drift: f64::NAN,
        passed: false,
        failure: Some(e.to_string()),
    };
    let coarse = match propagate(schedule, params, psi0, cfg) {
        Ok(t) => t,
        Err(e) => return failed(e),
    };
    let fine = match propagate(schedule, params, psi0, &half) {
        Ok(t) => t,
        Err(e) => return failed(e),
    };
    let p = coarse.final_norm_sqr();
    let p_half = fine.final_norm_sqr();
    let delta = (p - p_half).abs();
    let distance = coarse.final_state().max_abs_diff(&fine.final_state()).unwrap_or(f64::INFINITY);
    let passed = delta <= CONVERGENCE_THRESHOLD && distance <= CONVERGENCE_THRESHOLD;
    ConvergenceReport {
        step: coarse.step,
        p_suc: p,
        p_suc_half_step: p_half,
        delta_p_suc: delta,
        state_distance: distance,
        norm_drift: (1.0 - p).abs(),
        passed,
        failure: (!passed).then(|| alloc::format!("step halving changed the result by {:e}", delta.max(distance))),
    }
}
