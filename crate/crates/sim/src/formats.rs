//! File formats: schedule and gate-result JSON, trajectory and sweep CSV.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use stirap_core::hamiltonian::LevelStructure;
use stirap_core::{Drive, GateResult, Label, Pulse, PulseSchedule, Trajectory};

use crate::error::{Result, SimError};

/// `%g`-style rendering with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new digit (9.999995 -> 10.00000); the
        // extra trailing zero is trimmed below anyway.
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseRecord {
    pub drive: String,
    pub amplitude: f64,
    pub center: f64,
    pub tau: f64,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub pulses: Vec<PulseRecord>,
    pub t_start: f64,
    pub t_end: f64,
}

impl ScheduleDoc {
    pub fn from_schedule(s: &PulseSchedule) -> Self {
        let pulses = s
            .pulses()
            .iter()
            .map(|p| PulseRecord {
                drive: p.drive.name().into(),
                amplitude: p.amplitude,
                center: p.center,
                tau: p.width,
                phase: p.phase,
            })
            .collect();
        Self { pulses, t_start: s.t_start(), t_end: s.t_end() }
    }

    pub fn to_schedule(&self) -> Result<PulseSchedule> {
        let pulses = self
            .pulses
            .iter()
            .map(|r| {
                Ok(Pulse {
                    drive: r.drive.parse::<Drive>()?,
                    amplitude: r.amplitude,
                    center: r.center,
                    width: r.tau,
                    phase: r.phase,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PulseSchedule::new(pulses, self.t_start, self.t_end)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub state: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub max_excited_pop: f64,
    pub max_photon_pop: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateResultDoc {
    pub p_suc: f64,
    pub fidelity: f64,
    pub amplitudes: Vec<AmplitudeRecord>,
    pub diagnostics: DiagnosticsRecord,
}

impl GateResultDoc {
    pub fn from_result<L: Label>(r: &GateResult<L>) -> Self {
        let basis = r.final_state.basis();
        let amplitudes = basis
            .states()
            .iter()
            .zip(r.final_state.amplitudes())
            .map(|(l, a)| AmplitudeRecord { state: l.to_string(), re: a.re, im: a.im })
            .collect();
        Self {
            p_suc: r.success_probability,
            fidelity: r.fidelity,
            amplitudes,
            diagnostics: DiagnosticsRecord {
                max_excited_pop: r.diagnostics.max_excited_population,
                max_photon_pop: r.diagnostics.max_photon_population,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gate result serializes")
    }
}

/// Trajectory CSV: `t,p_suc,pop_<label>...`, one row per stored sample.
pub fn write_trajectory_csv<L: LevelStructure, W: Write>(traj: &Trajectory<L>, mut out: W) -> io::Result<()> {
    let mut header = String::from("t,p_suc");
    for l in traj.basis().states() {
        // Labels contain commas, so they are quoted.
        header.push_str(&format!(",\"pop_{l}\""));
    }
    writeln!(out, "{header}")?;
    for i in 0..traj.len() {
        let amps = traj.sample_amplitudes(i);
        let mut row = format!("{},{}", sig6(traj.times()[i]), sig6(traj.norms()[i]));
        for a in amps {
            row.push(',');
            row.push_str(&sig6(a.norm_sqr()));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub fn write_file(path: &std::path::Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| SimError::io(path, e))
}

pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))
}
