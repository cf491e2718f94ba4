//! Gates built from the STIRAP schedules.
//!
//! The simulated primitive is the conditional phase gate on `|0⟩₁|1⟩₂`. The
//! other three phase gates conjugate it with NOT gates,
//!
//! ```text
//! I_00 = σx,2 · I_01 · σx,2
//! I_10 = σx,1 σx,2 · I_01 · σx,2 σx,1
//! I_11 = σx,1 · I_01 · σx,1
//! ```
//!
//! where each NOT is either the ideal flip or the simulated single-atom
//! three-STIRAP gate. Hadamards are always ideal.
//!
//! Between composed stages the register is projected back onto the
//! computational states (cavity empty) and renormalized, and the no-jump
//! probabilities of the stages multiply.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;
use core::str::FromStr;

use crate::hamiltonian::SystemParams;
use crate::linalg::{norm_sqr, CMatrix};
use crate::propagator::{
    convergence_report, fidelity_against, propagate, ConvergenceReport, IntegratorConfig, Trajectory,
};
use crate::pulses::{cz_schedule, not_schedule, CzPulseParams, Drive, DriveValues, NotPulseParams, NOT_STAGES};
use crate::state::{canonical_gate_basis, normalize, single_atom_basis, AtomLevel, BasisState, Label, StateVector};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Marked two-qubit computational state, written `b1 b2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetLabel {
    T00,
    T01,
    T10,
    T11,
}

impl TargetLabel {
    pub const ALL: [TargetLabel; 4] = [TargetLabel::T00, TargetLabel::T01, TargetLabel::T10, TargetLabel::T11];

    /// Register index `2·b1 + b2`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn bits(self) -> (usize, usize) {
        (self.index() >> 1, self.index() & 1)
    }

    pub fn state(self) -> BasisState {
        let (b1, b2) = self.bits();
        BasisState::computational(b1, b2)
    }

    /// Atoms (1-based) whose NOT conjugates `I_01` into `I_self`.
    pub fn conjugating_atoms(self) -> &'static [usize] {
        match self {
            TargetLabel::T00 => &[2],
            TargetLabel::T01 => &[],
            TargetLabel::T10 => &[1, 2],
            TargetLabel::T11 => &[1],
        }
    }
}

impl fmt::Display for TargetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b1, b2) = self.bits();
        write!(f, "{b1}{b2}")
    }
}

impl FromStr for TargetLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "00" => Ok(TargetLabel::T00),
            "01" => Ok(TargetLabel::T01),
            "10" => Ok(TargetLabel::T10),
            "11" => Ok(TargetLabel::T11),
            other => Err(Error::Parse(other.into())),
        }
    }
}

/// `I_τ = I − 2|τ⟩⟨τ|` on the register ordered `00, 01, 10, 11`.
pub fn ideal_gate_matrix(target: TargetLabel) -> CMatrix {
    let mut m = CMatrix::identity(4);
    m[(target.index(), target.index())] = -ONE;
    m
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn hadamard() -> CMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    CMatrix::from_rows(&[&[h, h], &[h, -h]])
}

/// `H ⊗ H`.
pub fn hadamard_pair() -> CMatrix {
    hadamard().kron(&hadamard())
}

/// Applies a single-atom operator to the listed atoms (1-based) of the
/// two-qubit register.
fn on_atoms(op: &CMatrix, atoms: &[usize]) -> CMatrix {
    let id = CMatrix::identity(2);
    let first = if atoms.contains(&1) { op } else { &id };
    let second = if atoms.contains(&2) { op } else { &id };
    first.kron(second)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecutionMode {
    Ideal,
    Simulated,
}

impl FromStr for ExecutionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(ExecutionMode::Ideal),
            "simulated" => Ok(ExecutionMode::Simulated),
            other => Err(Error::Parse(other.into())),
        }
    }
}

/// Everything a gate run needs besides its input state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateContext {
    pub params: SystemParams,
    pub cz: CzPulseParams,
    pub not: NotPulseParams,
    pub integrator: IntegratorConfig,
}

impl GateContext {
    /// Default pulses and integrator at the given `κ/g`, `Γ/g`.
    pub fn with_rates(kappa_over_g: f64, gamma_over_g: f64) -> Result<Self> {
        Ok(Self {
            params: SystemParams::from_ratios(kappa_over_g, gamma_over_g)?,
            cz: CzPulseParams::default(),
            not: NotPulseParams::default(),
            integrator: IntegratorConfig::default(),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Peak population of states with an excited atom.
    pub max_excited_population: f64,
    /// Peak population of states with a cavity photon.
    pub max_photon_population: f64,
}

impl Diagnostics {
    fn of<L: Label>(traj: &Trajectory<L>) -> Self {
        Self { max_excited_population: traj.max_excited_population, max_photon_population: traj.max_photon_population }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            max_excited_population: self.max_excited_population.max(other.max_excited_population),
            max_photon_population: self.max_photon_population.max(other.max_photon_population),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GateResult<L: Label> {
    /// Probability that no photon was lost during the gate.
    pub success_probability: f64,
    pub fidelity: f64,
    /// Normalized output state.
    pub final_state: StateVector<L>,
    pub diagnostics: Diagnostics,
    /// Present when the integrator config asks for a step-halving check.
    pub convergence: Option<ConvergenceReport>,
}

fn check_computational<L: Label>(psi0: &StateVector<L>) -> Result<()> {
    if psi0.leakage() > 1e-12 {
        return Err(Error::NotComputational);
    }
    Ok(())
}

fn finish<L: crate::hamiltonian::LevelStructure>(
    traj: &Trajectory<L>,
    ideal: &CMatrix,
    psi0: &StateVector<L>,
    convergence: Option<ConvergenceReport>,
) -> Result<GateResult<L>> {
    let (final_state, p) = normalize(&traj.final_state())?;
    let fidelity = fidelity_against(&final_state, ideal, psi0)?;
    // RK4 conserves the lossless norm only to rounding; a probability stays ≤ 1.
    Ok(GateResult {
        success_probability: p.min(1.0),
        fidelity,
        final_state,
        diagnostics: Diagnostics::of(traj),
        convergence,
    })
}

/// The simulated conditional phase gate on `|0⟩₁|1⟩₂`.
pub fn run_cz_01(psi0: &StateVector<BasisState>, ctx: &GateContext) -> Result<GateResult<BasisState>> {
    check_computational(psi0)?;
    let schedule = cz_schedule(&ctx.cz)?;
    let traj = propagate(&schedule, &ctx.params, psi0, &ctx.integrator)?;
    let convergence =
        ctx.integrator.check_convergence.then(|| convergence_report(&schedule, &ctx.params, psi0, &ctx.integrator));
    finish(&traj, &ideal_gate_matrix(TargetLabel::T01), psi0, convergence)
}

/// The simulated single-atom NOT. Only `Γ` (on `|3⟩`) matters; there is no cavity.
pub fn run_not(psi0: &StateVector<AtomLevel>, ctx: &GateContext) -> Result<GateResult<AtomLevel>> {
    check_computational(psi0)?;
    let schedule = not_schedule(&ctx.not)?;
    let traj = propagate(&schedule, &ctx.params, psi0, &ctx.integrator)?;
    let convergence =
        ctx.integrator.check_convergence.then(|| convergence_report(&schedule, &ctx.params, psi0, &ctx.integrator));
    finish(&traj, &pauli_x(), psi0, convergence)
}

/// Dark state of NOT stage `stage` (0-based) for the stage's two drive
/// values: `Ω_first |l_second⟩ − Ω_second |l_first⟩`, normalized.
pub fn not_dark_state(stage: usize, drives: &DriveValues) -> Result<StateVector<AtomLevel>> {
    let (first, second) =
        *NOT_STAGES.get(stage).ok_or(Error::InvalidParameter { name: "stage", value: stage as f64 })?;
    let level = |d: Drive| match d {
        Drive::NotZero => AtomLevel::Zero,
        Drive::NotOne => AtomLevel::One,
        _ => AtomLevel::Sigma,
    };
    let (a, b) = (drives.get(first), drives.get(second));
    if a == ZERO && b == ZERO {
        return Err(Error::DegenerateDarkSpace);
    }
    let v = StateVector::from_components(single_atom_basis().shared(), &[(level(second), a), (level(first), -b)])?;
    Ok(normalize(&v)?.0)
}

/// Conditional map of the simulated NOT restricted to `{|0⟩, |1⟩}`:
/// column `c` is the unnormalized output for input `|c⟩`.
#[derive(Clone, Debug)]
struct NotBlock {
    matrix: CMatrix,
    diagnostics: Diagnostics,
}

fn simulate_not_block(ctx: &GateContext) -> Result<NotBlock> {
    let basis = single_atom_basis().shared();
    let schedule = not_schedule(&ctx.not)?;
    let mut matrix = CMatrix::zeros(2);
    let mut diagnostics = Diagnostics::default();
    for (c, level) in [AtomLevel::Zero, AtomLevel::One].into_iter().enumerate() {
        let psi0 = StateVector::basis_state(Arc::clone(&basis), &level)?;
        let traj = propagate(&schedule, &ctx.params, &psi0, &ctx.integrator)?;
        let out = traj.final_state();
        for (r, row_level) in [AtomLevel::Zero, AtomLevel::One].iter().enumerate() {
            matrix[(r, c)] = out.amplitude(row_level).unwrap_or(ZERO);
        }
        diagnostics = diagnostics.merge(Diagnostics::of(&traj));
    }
    Ok(NotBlock { matrix, diagnostics })
}

/// Applies `op` to a normalized register; returns the renormalized result
/// and the squared norm that survived.
fn apply_register(op: &CMatrix, register: &[C64]) -> Result<(Vec<C64>, f64)> {
    renormalize(op.mul_vec(register))
}

fn renormalize(mut v: Vec<C64>) -> Result<(Vec<C64>, f64)> {
    let p = norm_sqr(&v);
    if !(p > f64::MIN_POSITIVE) || !p.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let s = 1.0 / libm::sqrt(p);
    v.iter_mut().for_each(|a| *a *= s);
    Ok((v, p))
}

/// `I_τ` built from the simulated `I_01`, with ideal or simulated NOTs as
/// selected by `mode`.
pub fn run_conditional_phase(
    target: TargetLabel,
    psi0: &StateVector<BasisState>,
    ctx: &GateContext,
    mode: ExecutionMode,
) -> Result<GateResult<BasisState>> {
    if target == TargetLabel::T01 {
        return run_cz_01(psi0, ctx);
    }
    check_computational(psi0)?;
    let (flip, flip_diag) = match mode {
        ExecutionMode::Ideal => (pauli_x(), Diagnostics::default()),
        ExecutionMode::Simulated => {
            let block = simulate_not_block(ctx)?;
            (block.matrix, block.diagnostics)
        }
    };
    let conj = on_atoms(&flip, target.conjugating_atoms());

    let (before, p_before) = apply_register(&conj, &psi0.register())?;
    let basis = Arc::clone(psi0.basis());
    let middle_in = StateVector::from_register(Arc::clone(&basis), &before)?;
    let middle = run_cz_01(&middle_in, ctx)?;
    let (projected, _) = renormalize(middle.final_state.register())?;
    let (after, p_after) = apply_register(&conj, &projected)?;

    let final_state = StateVector::from_register(basis, &after)?;
    let fidelity = fidelity_against(&final_state, &ideal_gate_matrix(target), psi0)?;
    Ok(GateResult {
        success_probability: (p_before * middle.success_probability * p_after).min(1.0),
        fidelity,
        final_state,
        diagnostics: middle.diagnostics.merge(flip_diag),
        convergence: middle.convergence,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    ConditionalPhase(TargetLabel),
    /// NOT on atom 1 or 2.
    Not {
        atom: usize,
    },
    /// `H ⊗ H`.
    Hadamard,
}

/// One step of a two-qubit circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub mode: ExecutionMode,
}

impl GateSpec {
    pub fn new(kind: GateKind, mode: ExecutionMode) -> Result<Self> {
        match kind {
            GateKind::Hadamard if mode == ExecutionMode::Simulated => {
                Err(Error::InvalidParameter { name: "hadamard mode", value: f64::NAN })
            }
            GateKind::Not { atom } if atom != 1 && atom != 2 => {
                Err(Error::InvalidParameter { name: "atom", value: atom as f64 })
            }
            _ => Ok(Self { kind, mode }),
        }
    }

    pub fn ideal(kind: GateKind) -> Self {
        Self { kind, mode: ExecutionMode::Ideal }
    }

    /// Ideal matrix of this step on the register.
    pub fn ideal_matrix(&self) -> CMatrix {
        match self.kind {
            GateKind::ConditionalPhase(t) => ideal_gate_matrix(t),
            GateKind::Not { atom } => on_atoms(&pauli_x(), &[atom]),
            GateKind::Hadamard => hadamard_pair(),
        }
    }

    /// Runs the step on a normalized register; returns the normalized output
    /// and the step's no-jump probability.
    pub fn apply(&self, register: &[C64], ctx: &GateContext) -> Result<(Vec<C64>, f64)> {
        match (self.mode, self.kind) {
            // Ideal gates lose nothing; the squared norm only carries rounding.
            (ExecutionMode::Ideal, _) => Ok((apply_register(&self.ideal_matrix(), register)?.0, 1.0)),
            (ExecutionMode::Simulated, GateKind::ConditionalPhase(t)) => {
                let psi = StateVector::from_register(canonical_gate_basis().shared(), register)?;
                let res = run_conditional_phase(t, &psi, ctx, ExecutionMode::Simulated)?;
                let (out, _) = renormalize(res.final_state.register())?;
                Ok((out, res.success_probability))
            }
            (ExecutionMode::Simulated, GateKind::Not { atom }) => {
                let block = simulate_not_block(ctx)?;
                apply_register(&on_atoms(&block.matrix, &[atom]), register)
            }
            (ExecutionMode::Simulated, GateKind::Hadamard) => {
                Err(Error::InvalidParameter { name: "hadamard mode", value: f64::NAN })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverOutcome {
    /// Measurement probabilities of `00, 01, 10, 11`.
    pub probabilities: [f64; 4],
    pub amplitudes: Vec<C64>,
    /// Product of the no-jump probabilities of all steps (1 in ideal mode).
    pub cumulative_success: f64,
}

impl GroverOutcome {
    pub fn most_likely(&self) -> TargetLabel {
        let (i, _) =
            self.probabilities
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
        TargetLabel::from_index(i).expect("four outcomes")
    }
}

/// The five steps of one Grover iteration on two qubits:
/// `H⊗H, I_τ, H⊗H, I_00, H⊗H`.
pub fn grover_circuit(target: TargetLabel, mode: ExecutionMode) -> [GateSpec; 5] {
    let h = GateSpec::ideal(GateKind::Hadamard);
    [
        h,
        GateSpec { kind: GateKind::ConditionalPhase(target), mode },
        h,
        GateSpec { kind: GateKind::ConditionalPhase(TargetLabel::T00), mode },
        h,
    ]
}

/// Two-qubit Grover search from `|00⟩`, one iteration.
pub fn grover_search(target: TargetLabel, ctx: &GateContext, mode: ExecutionMode) -> Result<GroverOutcome> {
    let mut register = alloc::vec![ONE, ZERO, ZERO, ZERO];
    let mut cumulative = 1.0;
    for step in grover_circuit(target, mode) {
        let (next, p) = step.apply(&register, ctx)?;
        register = next;
        cumulative *= p;
    }
    let mut probabilities = [0.0; 4];
    for (p, a) in probabilities.iter_mut().zip(&register) {
        *p = a.norm_sqr();
    }
    Ok(GroverOutcome { probabilities, amplitudes: register, cumulative_success: cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_hermitian;
    use alloc::string::ToString;

    #[test]
    fn ideal_matrices() {
        let m = ideal_gate_matrix(TargetLabel::T01);
        assert_eq!(m, CMatrix::from_diagonal(&[ONE, -ONE, ONE, ONE]));
        let m = ideal_gate_matrix(TargetLabel::T00);
        assert_eq!(m, CMatrix::from_diagonal(&[-ONE, ONE, ONE, ONE]));
        for t in TargetLabel::ALL {
            let m = ideal_gate_matrix(t);
            assert_eq!(&m * &m, CMatrix::identity(4));
        }
    }

    #[test]
    fn conjugation_identities_hold_for_ideal_flips() {
        let x = pauli_x();
        let base = ideal_gate_matrix(TargetLabel::T01);
        for t in TargetLabel::ALL {
            let c = on_atoms(&x, t.conjugating_atoms());
            let m = &(&c * &base) * &c;
            assert_eq!(m, ideal_gate_matrix(t), "target {t}");
        }
    }

    #[test]
    fn label_parsing() {
        for t in TargetLabel::ALL {
            assert_eq!(t.to_string().parse::<TargetLabel>().unwrap(), t);
            assert_eq!(t.state().qubit_index(), Some(t.index()));
        }
        assert!("2".parse::<TargetLabel>().is_err());
        assert_eq!("simulated".parse::<ExecutionMode>().unwrap(), ExecutionMode::Simulated);
    }

    #[test]
    fn hadamard_is_ideal_only() {
        assert!(GateSpec::new(GateKind::Hadamard, ExecutionMode::Simulated).is_err());
        assert!(GateSpec::new(GateKind::Not { atom: 3 }, ExecutionMode::Ideal).is_err());
        assert!(GateSpec::new(GateKind::Hadamard, ExecutionMode::Ideal).is_ok());
    }

    #[test]
    fn not_dark_states_are_null_vectors() {
        let basis = single_atom_basis().shared();
        for (k, (a, b)) in NOT_STAGES.iter().enumerate() {
            let d = DriveValues::zero().with(*a, C64::new(0.7, 0.0)).with(*b, C64::new(-1.3, 0.0));
            let v = not_dark_state(k, &d).unwrap();
            let h = build_hermitian(&d, 1.0, &basis).unwrap();
            assert!(h.apply(&v).unwrap().norm_sqr() < 1e-28);
            assert_eq!(v.amplitude(&AtomLevel::Three), Some(ZERO));
        }
        // Stage 1 starts in |1⟩ (only Ω̃_σ on) and ends in |σ⟩ (only Ω̃_1 on).
        let start = not_dark_state(0, &DriveValues::zero().with(Drive::NotSigma, ONE)).unwrap();
        assert_eq!(start.amplitude(&AtomLevel::One), Some(ONE));
        let end = not_dark_state(0, &DriveValues::zero().with(Drive::NotOne, -ONE)).unwrap();
        assert_eq!(end.amplitude(&AtomLevel::Sigma), Some(ONE));
    }

    #[test]
    fn grover_ideal_finds_each_target() {
        let ctx = GateContext::with_rates(0.0, 0.0).unwrap();
        for t in TargetLabel::ALL {
            let out = grover_search(t, &ctx, ExecutionMode::Ideal).unwrap();
            assert!((out.probabilities[t.index()] - 1.0).abs() < 1e-12);
            assert_eq!(out.most_likely(), t);
            assert_eq!(out.cumulative_success, 1.0);
        }
    }

    #[test]
    fn cz_rejects_non_computational_input() {
        let b = canonical_gate_basis().shared();
        let psi = StateVector::basis_state(b, &"1,s,0".parse().unwrap()).unwrap();
        let ctx = GateContext::with_rates(0.0, 0.0).unwrap();
        assert!(matches!(run_cz_01(&psi, &ctx), Err(Error::NotComputational)));
    }
}
