//! `(κ/g, Γ/g)` grid scans of the simulated `|0⟩₁|1⟩₂` phase gate.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stirap_core::{run_cz_01, CzPulseParams, GateContext, IntegratorConfig, NotPulseParams, SystemParams};

use crate::error::{Result, SimError};
use crate::formats::sig6;
use crate::initial::InitialState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { min: 0.0, max: 0.2, points: 41 }
    }
}

impl Grid {
    fn validate(&self, name: &str) -> Result<()> {
        let bad = |why: &str| Err(SimError::Config(format!("{name}: {why}")));
        if self.points == 0 {
            return bad("needs at least one point");
        }
        if !(self.min >= 0.0 && self.max.is_finite()) {
            return bad("values must be finite and non-negative");
        }
        if self.points > 1 && !(self.max > self.min) {
            return bad("max must exceed min");
        }
        if self.points == 1 && self.max != self.min {
            return bad("a single point needs min == max");
        }
        Ok(())
    }

    /// Evenly spaced values; the ends are exact.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.max } else { self.min + (self.max - self.min) * i as f64 / n })
            .collect()
    }
}

/// Pulse block of the sweep config, in the gate's own symbols.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub omega_max: f64,
    #[serde(rename = "T")]
    pub stage_separation: f64,
    pub t0: f64,
    pub tau: f64,
}

impl Default for PulseConfig {
    fn default() -> Self {
        let d = CzPulseParams::default();
        Self { omega_max: d.omega_max, stage_separation: d.stage_separation, t0: d.offset, tau: d.width }
    }
}

impl From<PulseConfig> for CzPulseParams {
    fn from(p: PulseConfig) -> Self {
        CzPulseParams { omega_max: p.omega_max, stage_separation: p.stage_separation, offset: p.t0, width: p.tau }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorBlock {
    pub step: f64,
}

impl Default for IntegratorBlock {
    fn default() -> Self {
        Self { step: IntegratorConfig::default().step }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub kappa_grid: Grid,
    pub gamma_grid: Grid,
    pub initial: InitialState,
    pub pulses: PulseConfig,
    pub integrator: IntegratorBlock,
    /// Thread count; `None` lets rayon decide.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kappa_grid: Grid::default(),
            gamma_grid: Grid::default(),
            initial: InitialState::Uniform,
            pulses: PulseConfig::default(),
            integrator: IntegratorBlock::default(),
            workers: None,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.kappa_grid.validate("kappa_grid")?;
        self.gamma_grid.validate("gamma_grid")?;
        self.initial.state()?;
        stirap_core::cz_schedule(&self.pulses.into())?;
        if !(self.integrator.step > 0.0 && self.integrator.step.is_finite()) {
            return Err(SimError::Config(format!("integrator.step must be positive, got {}", self.integrator.step)));
        }
        if self.workers == Some(0) {
            return Err(SimError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Grid points in output order: Γ-major, then κ.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let kappas = self.kappa_grid.values();
        self.gamma_grid.values().into_iter().flat_map(|g| kappas.iter().map(move |&k| (k, g))).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub kappa_over_g: f64,
    pub gamma_over_g: f64,
    pub p_suc: f64,
    pub fidelity: f64,
    /// Set when the point could not be evaluated; `p_suc` and `fidelity` are NaN.
    pub failure: Option<String>,
}

fn evaluate(cfg: &SweepConfig, kappa: f64, gamma: f64) -> SweepRow {
    let run = || -> Result<(f64, f64)> {
        let ctx = GateContext {
            params: SystemParams::from_ratios(kappa, gamma)?,
            cz: cfg.pulses.into(),
            not: NotPulseParams::default(),
            integrator: IntegratorConfig::with_step(cfg.integrator.step),
        };
        let res = run_cz_01(&cfg.initial.state()?, &ctx)?;
        Ok((res.success_probability, res.fidelity))
    };
    match run() {
        Ok((p_suc, fidelity)) => SweepRow { kappa_over_g: kappa, gamma_over_g: gamma, p_suc, fidelity, failure: None },
        Err(e) => SweepRow {
            kappa_over_g: kappa,
            gamma_over_g: gamma,
            p_suc: f64::NAN,
            fidelity: f64::NAN,
            failure: Some(e.to_string()),
        },
    }
}

/// Evaluates every grid point. Row order follows [`SweepConfig::points`]
/// whatever the worker count; failed points are marked, not fatal.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points = cfg.points();
    let work = || points.par_iter().map(|&(k, g)| evaluate(cfg, k, g)).collect::<Vec<_>>();
    match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SimError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

pub const SWEEP_HEADER: &str = "kappa_over_g,gamma_over_g,p_suc,fidelity";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", sig6(r.kappa_over_g), sig6(r.gamma_over_g), sig6(r.p_suc), sig6(r.fidelity))?;
    }
    Ok(())
}
