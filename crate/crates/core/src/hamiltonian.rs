//! Driven atom-cavity Hamiltonians and their no-jump (conditional) form
//!
//! `H_cond = H - i(κ/2) a†a - i(Γ/2) Σ_m |e⟩_m⟨e|`
//!
//! where `H` couples `|0⟩₁ ↔ |2⟩₁` with `Ω_{0,1}`, `|σ⟩₂ ↔ |2⟩₂` with
//! `Ω_{σ,2}`, and `|1⟩_m ↔ |2⟩_m` through the cavity with coupling `g`. The
//! single-atom NOT system instead couples `|0⟩, |1⟩, |σ⟩` to `|3⟩`.
//!
//! The coupling structure depends only on the basis, so it is compiled once
//! into a [`ConditionalGenerator`] and then evaluated for each set of
//! instantaneous drive values.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::CMatrix;
use crate::pulses::{Drive, DriveValues};
use crate::state::{AtomLevel, BasisState, Label, SharedBasis, StateVector};
use crate::{Error, Result, C64};

/// Coupling `g` and decay rates, all in the same angular-frequency unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl SystemParams {
    pub fn new(g: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter { name: "g", value: g });
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter { name: "kappa", value: kappa });
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter { name: "gamma", value: gamma });
        }
        Ok(Self { g, kappa, gamma })
    }

    /// `g = 1` with rates given as `κ/g`, `Γ/g`.
    pub fn from_ratios(kappa_over_g: f64, gamma_over_g: f64) -> Result<Self> {
        Self::new(1.0, kappa_over_g, gamma_over_g)
    }

    pub fn lossless(g: f64) -> Result<Self> {
        Self::new(g, 0.0, 0.0)
    }
}

/// Symbolic matrix element of the Hermitian part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling {
    /// `Ω_d` (or `Ω_d*` when `conjugate`).
    Drive { drive: Drive, conjugate: bool },
    /// `g · factor`; the factor is `√n` of the photon number involved.
    Cavity { factor: f64 },
}

/// How a label type is driven and how it decays.
pub trait LevelStructure: Label {
    fn supports(drive: Drive) -> bool;

    /// Calls `emit(target, coupling)` for every matrix element
    /// `⟨target|H|self⟩` that can be nonzero.
    fn transitions(&self, emit: &mut dyn FnMut(Self, Coupling));

    /// Diagonal decay `d` such that `H_cond` carries `-i·d` on this state.
    fn decay(&self, params: &SystemParams) -> f64 {
        0.5 * params.kappa * self.photons() as f64 + 0.5 * params.gamma * self.excited_atoms() as f64
    }
}

impl LevelStructure for BasisState {
    fn supports(drive: Drive) -> bool {
        matches!(drive, Drive::Omega01 | Drive::OmegaSigma2)
    }

    fn transitions(&self, emit: &mut dyn FnMut(Self, Coupling)) {
        use AtomLevel::*;
        let s = *self;
        match s.atom1 {
            Zero => emit(BasisState { atom1: Two, ..s }, Coupling::Drive { drive: Drive::Omega01, conjugate: false }),
            Two => emit(BasisState { atom1: Zero, ..s }, Coupling::Drive { drive: Drive::Omega01, conjugate: true }),
            _ => {}
        }
        match s.atom2 {
            Sigma => {
                emit(BasisState { atom2: Two, ..s }, Coupling::Drive { drive: Drive::OmegaSigma2, conjugate: false })
            }
            Two => {
                emit(BasisState { atom2: Sigma, ..s }, Coupling::Drive { drive: Drive::OmegaSigma2, conjugate: true })
            }
            _ => {}
        }
        // g a |2⟩_m⟨1| + h.c. for both atoms
        let n = s.photons;
        for (level, set) in [
            (s.atom1, (|s: BasisState, l| BasisState { atom1: l, ..s }) as fn(BasisState, AtomLevel) -> BasisState),
            (s.atom2, |s: BasisState, l| BasisState { atom2: l, ..s }),
        ] {
            match level {
                One if n >= 1 => emit(
                    BasisState { photons: n - 1, ..set(s, Two) },
                    Coupling::Cavity { factor: libm::sqrt(n as f64) },
                ),
                Two => emit(
                    BasisState { photons: n + 1, ..set(s, One) },
                    Coupling::Cavity { factor: libm::sqrt((n + 1) as f64) },
                ),
                _ => {}
            }
        }
    }
}

impl LevelStructure for AtomLevel {
    fn supports(drive: Drive) -> bool {
        matches!(drive, Drive::NotZero | Drive::NotOne | Drive::NotSigma)
    }

    fn transitions(&self, emit: &mut dyn FnMut(Self, Coupling)) {
        use AtomLevel::*;
        let ground = [(Zero, Drive::NotZero), (One, Drive::NotOne), (Sigma, Drive::NotSigma)];
        match self {
            Three => {
                for (level, drive) in ground {
                    emit(level, Coupling::Drive { drive, conjugate: true });
                }
            }
            level => {
                if let Some((_, drive)) = ground.iter().find(|(l, _)| l == level) {
                    emit(Three, Coupling::Drive { drive: *drive, conjugate: false });
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Term {
    row: usize,
    col: usize,
    coupling: Coupling,
}

/// Sparse, precompiled form of `H_cond` on a fixed basis.
#[derive(Clone, Debug)]
pub struct ConditionalGenerator<L: LevelStructure> {
    basis: SharedBasis<L>,
    params: SystemParams,
    terms: Vec<Term>,
    decay: Vec<f64>,
}

impl<L: LevelStructure> ConditionalGenerator<L> {
    /// Compiles the couplings reachable with `active` drives (plus the
    /// cavity). Photon numbers above the basis truncation are dropped; any
    /// other coupling that leaves the basis is an error.
    pub fn new(basis: SharedBasis<L>, params: SystemParams, active: &[Drive]) -> Result<Self> {
        if let Some(d) = active.iter().find(|d| !L::supports(**d)) {
            return Err(Error::UnsupportedDrive(*d));
        }
        let mut terms = Vec::new();
        let mut failure = None;
        for (col, state) in basis.states().iter().enumerate() {
            state.transitions(&mut |target, coupling| {
                if let Coupling::Drive { drive, .. } = coupling {
                    if !active.contains(&drive) {
                        return;
                    }
                }
                match basis.index_of(&target) {
                    Some(row) => terms.push(Term { row, col, coupling }),
                    None if matches!(coupling, Coupling::Cavity { .. }) && target.photons() > basis.max_photons() => {}
                    None => {
                        failure
                            .get_or_insert(Error::BasisNotClosed { from: state.to_string(), to: target.to_string() });
                    }
                }
            });
        }
        if let Some(e) = failure {
            return Err(e);
        }
        let decay = basis.states().iter().map(|s| s.decay(&params)).collect();
        Ok(Self { basis, params, terms, decay })
    }

    /// Generator for every drive the label type supports.
    pub fn with_all_drives(basis: SharedBasis<L>, params: SystemParams) -> Result<Self> {
        let active: Vec<Drive> = Drive::ALL.into_iter().filter(|d| L::supports(*d)).collect();
        Self::new(basis, params, &active)
    }

    pub fn basis(&self) -> &SharedBasis<L> {
        &self.basis
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    fn coefficient(&self, coupling: Coupling, drives: &DriveValues) -> C64 {
        match coupling {
            Coupling::Drive { drive, conjugate: false } => drives.get(drive),
            Coupling::Drive { drive, conjugate: true } => drives.get(drive).conj(),
            Coupling::Cavity { factor } => C64::new(self.params.g * factor, 0.0),
        }
    }

    /// `out = H_cond · psi`.
    pub fn apply(&self, drives: &DriveValues, psi: &[C64], out: &mut [C64]) {
        for (o, (p, d)) in out.iter_mut().zip(psi.iter().zip(&self.decay)) {
            *o = C64::new(0.0, -d) * p;
        }
        for t in &self.terms {
            out[t.row] += self.coefficient(t.coupling, drives) * psi[t.col];
        }
    }

    /// `out = -i · H_cond · psi`, the right-hand side of the Schrödinger equation.
    pub fn derivative(&self, drives: &DriveValues, psi: &[C64], out: &mut [C64]) {
        self.apply(drives, psi, out);
        for o in out.iter_mut() {
            *o = C64::new(o.im, -o.re);
        }
    }

    pub fn fill(&self, drives: &DriveValues, out: &mut CMatrix) {
        out.fill_zero();
        for (i, d) in self.decay.iter().enumerate() {
            out[(i, i)] = C64::new(0.0, -d);
        }
        for t in &self.terms {
            out[(t.row, t.col)] += self.coefficient(t.coupling, drives);
        }
    }

    pub fn evaluate(&self, drives: &DriveValues, time: f64) -> HamiltonianMatrix<L> {
        let mut matrix = CMatrix::zeros(self.dim());
        self.fill(drives, &mut matrix);
        HamiltonianMatrix { basis: Arc::clone(&self.basis), time, matrix }
    }
}

/// Dense Hamiltonian over a basis, tagged with the time it was evaluated at.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix<L: Label> {
    pub basis: SharedBasis<L>,
    pub time: f64,
    pub matrix: CMatrix,
}

impl<L: Label> HamiltonianMatrix<L> {
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn apply(&self, v: &StateVector<L>) -> Result<StateVector<L>> {
        if v.basis().states() != self.basis.states() {
            return Err(Error::BasisMismatch);
        }
        StateVector::new(Arc::clone(&self.basis), self.matrix.mul_vec(v.amplitudes()))
    }
}

/// Dense dump for diffing against a hand-written matrix.
impl<L: Label> fmt::Display for HamiltonianMatrix<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# t = {:e}", self.time)?;
        write!(f, "# basis:")?;
        for s in self.basis.states() {
            write!(f, " |{s}⟩")?;
        }
        writeln!(f)?;
        write!(f, "{}", self.matrix)
    }
}

/// `H_cond` for the given instantaneous drives. Drives that are exactly zero
/// are ignored; nonzero drives must have their transitions inside `basis`.
pub fn build_conditional<L: LevelStructure>(
    drives: &DriveValues,
    params: &SystemParams,
    basis: &SharedBasis<L>,
) -> Result<HamiltonianMatrix<L>> {
    let active: Vec<Drive> = drives.active().collect();
    let generator = ConditionalGenerator::new(Arc::clone(basis), *params, &active)?;
    Ok(generator.evaluate(drives, 0.0))
}

/// The Hermitian (lossless) part only.
pub fn build_hermitian<L: LevelStructure>(
    drives: &DriveValues,
    g: f64,
    basis: &SharedBasis<L>,
) -> Result<HamiltonianMatrix<L>> {
    build_conditional(drives, &SystemParams::lossless(g)?, basis)
}

/// Normalized dark states `[|D00⟩, |D01⟩]` of the lossless gate Hamiltonian:
///
/// * `|D00⟩ ∝ g|0,0,0⟩ − Ω01|1,0,1⟩`
/// * `|D01⟩ ∝ gΩσ2|0,1,0⟩ + gΩ01|1,σ,0⟩ − Ω01Ωσ2|1,1,1⟩`
///
/// The unnormalized expressions above are divided by their norm and not
/// rephased, so both vectors are continuous along any smooth drive path,
/// including where `Ωσ2` changes sign between the two STIRAP stages.
pub fn dark_states(
    omega01: C64,
    omega_sigma2: C64,
    g: f64,
    basis: &SharedBasis<BasisState>,
) -> Result<[StateVector<BasisState>; 2]> {
    let zero = C64::new(0.0, 0.0);
    if omega01 == zero && omega_sigma2 == zero {
        return Err(Error::DegenerateDarkSpace);
    }
    if !(g > 0.0) {
        return Err(Error::InvalidParameter { name: "g", value: g });
    }
    use AtomLevel::*;
    let g = C64::new(g, 0.0);
    let d00 = StateVector::from_components(
        Arc::clone(basis),
        &[(BasisState::new(Zero, Zero, 0), g), (BasisState::new(One, Zero, 1), -omega01)],
    )?;
    let d01 = StateVector::from_components(
        Arc::clone(basis),
        &[
            (BasisState::new(Zero, One, 0), g * omega_sigma2),
            (BasisState::new(One, Sigma, 0), g * omega01),
            (BasisState::new(One, One, 1), -omega01 * omega_sigma2),
        ],
    )?;
    let (d00, _) = crate::state::normalize(&d00)?;
    let (d01, _) = crate::state::normalize(&d01)?;
    Ok([d00, d01])
}
