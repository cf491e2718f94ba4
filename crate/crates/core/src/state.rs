//! Labeled product bases and dense state vectors.
//!
//! Two label types are used: [`BasisState`] for two atoms sharing one cavity
//! mode, and [`AtomLevel`] for a single atom with no cavity (the NOT gate).

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::linalg::{dot, norm_sqr};
use crate::{Error, Result, C64};

/// Internal level of one five-level atom.
///
/// `Zero` and `One` hold the qubit, `Sigma` is the auxiliary ground level,
/// `Two` is the excited level reached by the cavity and the gate lasers, and
/// `Three` is the excited level used by the single-atom NOT.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLevel {
    Zero,
    One,
    Sigma,
    Two,
    Three,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 5] =
        [AtomLevel::Zero, AtomLevel::One, AtomLevel::Sigma, AtomLevel::Two, AtomLevel::Three];

    pub fn is_qubit(self) -> bool {
        matches!(self, AtomLevel::Zero | AtomLevel::One)
    }

    pub fn is_excited(self) -> bool {
        matches!(self, AtomLevel::Two | AtomLevel::Three)
    }

    /// Qubit value of a computational level.
    pub fn bit(self) -> Option<usize> {
        match self {
            AtomLevel::Zero => Some(0),
            AtomLevel::One => Some(1),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            AtomLevel::Zero => '0',
            AtomLevel::One => '1',
            AtomLevel::Sigma => 's',
            AtomLevel::Two => '2',
            AtomLevel::Three => '3',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Some(match c {
            '0' => AtomLevel::Zero,
            '1' => AtomLevel::One,
            's' | 'σ' => AtomLevel::Sigma,
            '2' => AtomLevel::Two,
            '3' => AtomLevel::Three,
            _ => return None,
        })
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for AtomLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Self::from_symbol(c).ok_or_else(|| Error::Parse(s.to_string())),
            _ => Err(Error::Parse(s.to_string())),
        }
    }
}

/// `|atom1⟩|atom2⟩|photons⟩`. Serialized as `"a1,a2,n"`, e.g. `"0,s,0"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    pub atom1: AtomLevel,
    pub atom2: AtomLevel,
    pub photons: u32,
}

impl BasisState {
    pub const fn new(atom1: AtomLevel, atom2: AtomLevel, photons: u32) -> Self {
        Self { atom1, atom2, photons }
    }

    /// The computational state `|b1⟩|b2⟩|0⟩`.
    pub fn computational(b1: usize, b2: usize) -> Self {
        let level = |b| if b == 0 { AtomLevel::Zero } else { AtomLevel::One };
        Self::new(level(b1), level(b2), 0)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.atom1, self.atom2, self.photons)
    }
}

impl FromStr for BasisState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [a1, a2, n] = parts.as_slice() else {
            return Err(Error::Parse(s.to_string()));
        };
        let photons = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        Ok(Self::new(a1.parse()?, a2.parse()?, photons))
    }
}

/// What the rest of the crate needs to know about a basis label.
pub trait Label: Copy + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Number of qubits carried by the label type.
    const QUBITS: usize;

    /// Index into the `2^QUBITS` computational register (first qubit most
    /// significant), if the label is a computational state.
    fn qubit_index(&self) -> Option<usize>;

    /// Cavity photon number (0 for labels without a cavity).
    fn photons(&self) -> u32;

    /// Number of atoms in an excited level.
    fn excited_atoms(&self) -> u32;
}

impl Label for BasisState {
    const QUBITS: usize = 2;

    fn qubit_index(&self) -> Option<usize> {
        if self.photons != 0 {
            return None;
        }
        Some(2 * self.atom1.bit()? + self.atom2.bit()?)
    }

    fn photons(&self) -> u32 {
        self.photons
    }

    fn excited_atoms(&self) -> u32 {
        u32::from(self.atom1.is_excited()) + u32::from(self.atom2.is_excited())
    }
}

impl Label for AtomLevel {
    const QUBITS: usize = 1;

    fn qubit_index(&self) -> Option<usize> {
        self.bit()
    }

    fn photons(&self) -> u32 {
        0
    }

    fn excited_atoms(&self) -> u32 {
        u32::from(self.is_excited())
    }
}

/// Ordered list of distinct labels with reverse lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis<L: Label> {
    states: Vec<L>,
    index: BTreeMap<L, usize>,
    max_photons: u32,
}

pub type SharedBasis<L> = Arc<Basis<L>>;

impl<L: Label> Basis<L> {
    pub fn new(states: Vec<L>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(*s, i).is_some() {
                return Err(Error::DuplicateState(s.to_string()));
            }
        }
        let max_photons = states.iter().map(Label::photons).max().unwrap_or(0);
        Ok(Self { states, index, max_photons })
    }

    pub fn shared(self) -> SharedBasis<L> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, index: usize) -> L {
        self.states[index]
    }

    pub fn states(&self) -> &[L] {
        &self.states
    }

    pub fn index_of(&self, state: &L) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn contains(&self, state: &L) -> bool {
        self.index.contains_key(state)
    }

    /// Photon truncation of the basis.
    pub fn max_photons(&self) -> u32 {
        self.max_photons
    }

    /// For each computational register index, the basis position of that
    /// computational state (if present).
    pub fn qubit_positions(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; 1 << L::QUBITS];
        for (i, s) in self.states.iter().enumerate() {
            if let Some(q) = s.qubit_index() {
                out[q] = Some(i);
            }
        }
        out
    }
}

/// The ten states closed under the conditional gate Hamiltonian, in the
/// fixed order used for its matrix:
/// `|0,1,0⟩ |2,1,0⟩ |1,1,1⟩ |1,2,0⟩ |1,σ,0⟩ |0,0,0⟩ |2,0,0⟩ |1,0,1⟩ |1,0,0⟩ |1,1,0⟩`.
pub fn canonical_gate_basis() -> Basis<BasisState> {
    use AtomLevel::*;
    let states = vec![
        BasisState::new(Zero, One, 0),
        BasisState::new(Two, One, 0),
        BasisState::new(One, One, 1),
        BasisState::new(One, Two, 0),
        BasisState::new(One, Sigma, 0),
        BasisState::new(Zero, Zero, 0),
        BasisState::new(Two, Zero, 0),
        BasisState::new(One, Zero, 1),
        BasisState::new(One, Zero, 0),
        BasisState::new(One, One, 0),
    ];
    Basis::new(states).expect("canonical basis has distinct states")
}

/// `{|0⟩, |1⟩, |σ⟩, |3⟩}` for one atom without cavity.
pub fn single_atom_basis() -> Basis<AtomLevel> {
    use AtomLevel::*;
    Basis::new(vec![Zero, One, Sigma, Three]).expect("distinct levels")
}

/// Full product basis `levels1 × levels2 × {0..=n_max}`, atom 1 slowest.
pub fn product_basis(levels1: &[AtomLevel], levels2: &[AtomLevel], n_max: u32) -> Result<Basis<BasisState>> {
    let mut states = Vec::with_capacity(levels1.len() * levels2.len() * (n_max as usize + 1));
    for &a1 in levels1 {
        for &a2 in levels2 {
            for n in 0..=n_max {
                states.push(BasisState::new(a1, a2, n));
            }
        }
    }
    Basis::new(states)
}

/// Complex amplitudes over a shared basis. Not necessarily normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<L: Label> {
    basis: SharedBasis<L>,
    amps: Vec<C64>,
}

impl<L: Label> StateVector<L> {
    pub fn new(basis: SharedBasis<L>, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: amps.len() });
        }
        Ok(Self { basis, amps })
    }

    pub fn zeros(basis: SharedBasis<L>) -> Self {
        let n = basis.len();
        Self { basis, amps: vec![C64::new(0.0, 0.0); n] }
    }

    /// The unit vector on `state`.
    pub fn basis_state(basis: SharedBasis<L>, state: &L) -> Result<Self> {
        Self::from_components(basis, &[(*state, C64::new(1.0, 0.0))])
    }

    pub fn from_components(basis: SharedBasis<L>, components: &[(L, C64)]) -> Result<Self> {
        let mut v = Self::zeros(basis);
        for (s, a) in components {
            let i = v.basis.index_of(s).ok_or_else(|| Error::UnknownState(s.to_string()))?;
            v.amps[i] += *a;
        }
        Ok(v)
    }

    /// Builds a vector from amplitudes on the computational register
    /// (`2^QUBITS` entries, first qubit most significant).
    pub fn from_register(basis: SharedBasis<L>, register: &[C64]) -> Result<Self> {
        let positions = basis.qubit_positions();
        if register.len() != positions.len() {
            return Err(Error::DimensionMismatch { expected: positions.len(), found: register.len() });
        }
        let mut v = Self::zeros(basis);
        for (q, a) in register.iter().enumerate() {
            if *a == C64::new(0.0, 0.0) {
                continue;
            }
            let i = positions[q].ok_or(Error::NotComputational)?;
            v.amps[i] = *a;
        }
        Ok(v)
    }

    /// Amplitudes on the computational register; other components are dropped.
    pub fn register(&self) -> Vec<C64> {
        self.basis.qubit_positions().iter().map(|p| p.map_or(C64::new(0.0, 0.0), |i| self.amps[i])).collect()
    }

    /// Squared norm of everything outside the computational register.
    pub fn leakage(&self) -> f64 {
        self.basis
            .states()
            .iter()
            .zip(&self.amps)
            .filter(|(s, _)| s.qubit_index().is_none())
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn basis(&self) -> &SharedBasis<L> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, state: &L) -> Option<C64> {
        self.basis.index_of(state).map(|i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { basis: self.basis.clone(), amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// `self + other`, provided both share a basis.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_basis(other)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect();
        Ok(Self { basis: self.basis.clone(), amps })
    }

    /// `max_i |self_i - other_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_basis(other)?;
        let m = self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).fold(0.0, f64::max);
        Ok(libm::sqrt(m))
    }

    /// Same basis means the same ordered list of labels, whether or not the
    /// `Arc`s are shared.
    pub fn same_basis(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis.states == other.basis.states
    }

    fn check_same_basis(&self, other: &Self) -> Result<()> {
        if self.same_basis(other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }
}

impl<L: Label> fmt::Display for StateVector<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, a) in self.basis.states().iter().zip(&self.amps) {
            if a.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:.4}{:+.4}i)|{}⟩", a.re, a.im, s)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `⟨a|b⟩`.
pub fn inner_product<L: Label>(a: &StateVector<L>, b: &StateVector<L>) -> Result<C64> {
    a.check_same_basis(b)?;
    Ok(dot(&a.amps, &b.amps))
}

/// Returns `(v / ‖v‖, ‖v‖²)`.
pub fn normalize<L: Label>(v: &StateVector<L>) -> Result<(StateVector<L>, f64)> {
    let p = v.norm_sqr();
    if !(p > f64::MIN_POSITIVE) || !p.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let inv = 1.0 / libm::sqrt(p);
    Ok((v.scaled(C64::new(inv, 0.0)), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn canonical_order() {
        let b = canonical_gate_basis();
        assert_eq!(b.len(), 10);
        assert_eq!(b.state(0), BasisState::new(AtomLevel::Zero, AtomLevel::One, 0));
        assert_eq!(b.state(9), BasisState::new(AtomLevel::One, AtomLevel::One, 0));
        assert_eq!(b.index_of(&"1,s,0".parse().unwrap()), Some(4));
        assert_eq!(b.max_photons(), 1);
    }

    #[test]
    fn canonical_round_trip() {
        let b = canonical_gate_basis();
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
            assert_eq!(b.state(b.index_of(s).unwrap()), *s);
        }
    }

    #[test]
    fn single_atom_layout() {
        let b = single_atom_basis();
        assert_eq!(b.len(), 4);
        assert_eq!(b.index_of(&AtomLevel::Sigma), Some(2));
        assert!(b.states().iter().all(|s| s.photons() == 0));
        assert_eq!(b.qubit_positions(), vec![Some(0), Some(1)]);
    }

    #[test]
    fn product_basis_round_trip_and_duplicates() {
        let b = product_basis(&AtomLevel::ALL, &AtomLevel::ALL, 1).unwrap();
        assert_eq!(b.len(), 50);
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.state(b.index_of(s).unwrap()), *s);
            assert_eq!(b.index_of(s), Some(i));
        }
        let s = BasisState::computational(0, 1);
        assert!(matches!(Basis::new(vec![s, s]), Err(Error::DuplicateState(_))));
    }

    #[test]
    fn label_serialization() {
        let s: BasisState = "0,1,0".parse().unwrap();
        assert_eq!(s, BasisState::computational(0, 1));
        assert_eq!(BasisState::new(AtomLevel::One, AtomLevel::Sigma, 0).to_string(), "1,s,0");
        assert!("0,1".parse::<BasisState>().is_err());
        assert!("0,x,0".parse::<BasisState>().is_err());
        assert!("0,1,-1".parse::<BasisState>().is_err());
    }

    #[test]
    fn computational_indices() {
        let b = canonical_gate_basis();
        let pos = b.qubit_positions();
        assert_eq!(pos, vec![Some(5), Some(0), Some(8), Some(9)]);
    }

    #[test]
    fn inner_product_examples() {
        let b = single_atom_basis().shared();
        let e0 = StateVector::basis_state(b.clone(), &AtomLevel::Zero).unwrap();
        let e1 = StateVector::basis_state(b.clone(), &AtomLevel::One).unwrap();
        assert_eq!(inner_product(&e0, &e0).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&e0, &e1).unwrap(), c(0.0, 0.0));
        let h = e0.try_add(&e1).unwrap().scaled(c(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        let p = inner_product(&h, &e0).unwrap();
        assert!((p.re - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 && p.im == 0.0);
    }

    #[test]
    fn inner_product_rejects_mismatched_bases() {
        let a = StateVector::zeros(single_atom_basis().shared());
        let b = StateVector::zeros(Basis::new(vec![AtomLevel::One, AtomLevel::Zero]).unwrap().shared());
        assert_eq!(inner_product(&a, &b), Err(Error::BasisMismatch));
        // Equal bases built separately are compatible.
        let c = StateVector::zeros(single_atom_basis().shared());
        assert!(inner_product(&a, &c).is_ok());
    }

    #[test]
    fn normalize_examples() {
        let b = single_atom_basis().shared();
        let e0 = StateVector::basis_state(b.clone(), &AtomLevel::Zero).unwrap();
        let (n, p) = normalize(&e0).unwrap();
        assert_eq!(n, e0);
        assert_eq!(p, 1.0);
        let (n, p) = normalize(&e0.scaled(c(0.5, 0.0))).unwrap();
        assert_eq!(n, e0);
        assert_eq!(p, 0.25);
        assert_eq!(normalize(&StateVector::zeros(b)), Err(Error::ZeroNorm));
    }

    #[test]
    fn register_round_trip() {
        let b = canonical_gate_basis().shared();
        let reg = [c(0.1, 0.0), c(0.2, 0.1), c(0.0, -0.3), c(0.4, 0.0)];
        let v = StateVector::from_register(b, &reg).unwrap();
        assert_eq!(v.register(), reg.to_vec());
        assert_eq!(v.leakage(), 0.0);
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| C64::new(r, i)), n)
    }

    proptest! {
        #[test]
        fn inner_product_is_hermitian(a in arb_vec(10), b in arb_vec(10)) {
            let basis = canonical_gate_basis().shared();
            let va = StateVector::new(basis.clone(), a).unwrap();
            let vb = StateVector::new(basis, b).unwrap();
            let ab = inner_product(&va, &vb).unwrap();
            let ba = inner_product(&vb, &va).unwrap();
            prop_assert!((ab - ba.conj()).norm() < 1e-12);
        }

        #[test]
        fn norm_is_self_overlap(a in arb_vec(10)) {
            let basis = canonical_gate_basis().shared();
            let v = StateVector::new(basis, a).unwrap();
            let vv = inner_product(&v, &v).unwrap();
            prop_assert!((vv.re - v.norm_sqr()).abs() < 1e-12);
            prop_assert!(vv.im.abs() < 1e-12);
        }
    }
}
