//! Initial-state selectors shared by the CLI and sweep configs.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use stirap_core::{canonical_gate_basis, normalize, BasisState, StateVector};

use crate::error::{Result, SimError};

/// Register input of the phase gate. Custom amplitudes are given in the
/// order `00, 01, 10, 11` and normalized on use.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    State010,
    State000,
    Uniform,
    Custom(Vec<Complex64>),
}

impl InitialState {
    pub fn register(&self) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            InitialState::State010 => vec![zero, one, zero, zero],
            InitialState::State000 => vec![one, zero, zero, zero],
            InitialState::Uniform => vec![Complex64::new(0.5, 0.0); 4],
            InitialState::Custom(a) => a.clone(),
        }
    }

    pub fn state(&self) -> Result<StateVector<BasisState>> {
        let reg = self.register();
        if reg.len() != 4 {
            return Err(SimError::Config(format!("expected 4 register amplitudes, got {}", reg.len())));
        }
        let v = StateVector::from_register(canonical_gate_basis().shared(), &reg)?;
        Ok(normalize(&v)?.0)
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::State010 => f.write_str("010"),
            InitialState::State000 => f.write_str("000"),
            InitialState::Uniform => f.write_str("uniform"),
            InitialState::Custom(a) => {
                let parts: Vec<String> = a.iter().map(|c| format!("{}{:+}i", c.re, c.im)).collect();
                write!(f, "custom[{}]", parts.join(", "))
            }
        }
    }
}

/// Accepts `uniform`, `010`, `000`, or four comma-separated real
/// amplitudes such as `0.6,0.8,0,0`.
impl FromStr for InitialState {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" => Ok(InitialState::Uniform),
            "010" | "0,1,0" => Ok(InitialState::State010),
            "000" | "0,0,0" => Ok(InitialState::State000),
            other => {
                let amps = other
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map(|x| Complex64::new(x, 0.0)))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| SimError::Config(format!("unknown initial state {other:?}")))?;
                if amps.len() != 4 {
                    return Err(SimError::Config(format!("unknown initial state {other:?}")));
                }
                Ok(InitialState::Custom(amps))
            }
        }
    }
}

/// JSON form: `"uniform" | "010" | "000" | {"amplitudes": [...]}` where each
/// amplitude is a number or a `[re, im]` pair.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum InitialRepr {
    Named(String),
    Custom { amplitudes: Vec<AmplitudeRepr> },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AmplitudeRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl Serialize for InitialState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            InitialState::Custom(a) => {
                InitialRepr::Custom { amplitudes: a.iter().map(|c| AmplitudeRepr::Complex([c.re, c.im])).collect() }
            }
            named => InitialRepr::Named(named.to_string()),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for InitialState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        match InitialRepr::deserialize(d)? {
            InitialRepr::Named(name) => match name.as_str() {
                "uniform" | "010" | "000" => name.parse().map_err(D::Error::custom),
                other => Err(D::Error::custom(format!("unknown initial state {other:?}"))),
            },
            InitialRepr::Custom { amplitudes } => Ok(InitialState::Custom(
                amplitudes
                    .into_iter()
                    .map(|a| match a {
                        AmplitudeRepr::Real(x) => Complex64::new(x, 0.0),
                        AmplitudeRepr::Complex([re, im]) => Complex64::new(re, im),
                    })
                    .collect(),
            )),
        }
    }
}
