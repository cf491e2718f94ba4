//! Conditional (no-jump) dynamics of STIRAP-driven conditional phase gates
//! for two atoms in a lossy optical cavity.
//!
//! The crate is `no_std` and only needs an allocator. It covers
//!
//! * the labeled product basis and dense state vectors ([`state`]),
//! * Gaussian pulses and the STIRAP schedules for the phase gate and the
//!   single-atom NOT gate ([`pulses`]),
//! * the driven Hamiltonian with the non-Hermitian decay terms of the
//!   no-jump branch, plus the analytic dark states ([`hamiltonian`]),
//! * a fixed-step RK4 propagator with success probability and fidelity
//!   readout ([`propagator`]),
//! * gate composition, including the two-qubit Grover search ([`gates`]).
//!
//! Units: `hbar = 1`, times in `1/g`, rates and Rabi frequencies in `g`.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod gates;
pub mod hamiltonian;
pub mod linalg;
pub mod propagator;
pub mod pulses;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use gates::{
    grover_search, ideal_gate_matrix, run_conditional_phase, run_cz_01, run_not, Diagnostics, ExecutionMode,
    GateContext, GateKind, GateResult, GateSpec, GroverOutcome, TargetLabel,
};
pub use hamiltonian::{
    build_conditional, build_hermitian, dark_states, ConditionalGenerator, HamiltonianMatrix, LevelStructure,
    SystemParams,
};
pub use linalg::CMatrix;
pub use propagator::{
    convergence_report, gate_fidelity, propagate, success_probability, ConvergenceReport, IntegratorConfig, Trajectory,
};
pub use pulses::{
    cz_schedule, drives_at, gaussian_value, not_schedule, CzPulseParams, Drive, DriveValues, NotPulseParams, Pulse,
    PulseSchedule,
};
pub use state::{
    canonical_gate_basis, inner_product, normalize, product_basis, single_atom_basis, AtomLevel, Basis, BasisState,
    Label, SharedBasis, StateVector,
};
