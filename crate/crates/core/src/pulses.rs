//! Gaussian pulse envelopes and the STIRAP schedules that drive the gates.
//!
//! All envelopes are real up to a sign (phases are 0 or π), which keeps the
//! adiabatic path real and the geometric phase zero.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::linalg::phase;
use crate::{Error, Result, C64};

/// Envelopes are at most `e^{-12.5}` of their peak at the window edges.
pub const WINDOW_PADDING_WIDTHS: f64 = 5.0;

/// Pulses must sit at least this many widths inside their window.
pub const MIN_PADDING_WIDTHS: f64 = 4.0;

/// Identifies which laser a pulse belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Drive {
    /// Atom 1, `|0⟩ ↔ |2⟩`.
    Omega01,
    /// Atom 2, `|σ⟩ ↔ |2⟩`.
    OmegaSigma2,
    /// NOT gate, `|0⟩ ↔ |3⟩`.
    NotZero,
    /// NOT gate, `|1⟩ ↔ |3⟩`.
    NotOne,
    /// NOT gate, `|σ⟩ ↔ |3⟩`.
    NotSigma,
}

impl Drive {
    pub const ALL: [Drive; 5] = [Drive::Omega01, Drive::OmegaSigma2, Drive::NotZero, Drive::NotOne, Drive::NotSigma];
    pub const COUNT: usize = Self::ALL.len();

    pub fn name(self) -> &'static str {
        match self {
            Drive::Omega01 => "omega_0_1",
            Drive::OmegaSigma2 => "omega_sigma_2",
            Drive::NotZero => "not_0",
            Drive::NotOne => "not_1",
            Drive::NotSigma => "not_sigma",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Drive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Drive {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Drive::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| Error::Parse(alloc::string::String::from(s)))
    }
}

/// Instantaneous complex Rabi frequency of every drive; drives not present
/// in a schedule are exactly zero.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DriveValues([C64; Drive::COUNT]);

impl DriveValues {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, drive: Drive) -> C64 {
        self.0[drive.slot()]
    }

    pub fn set(&mut self, drive: Drive, value: C64) {
        self.0[drive.slot()] = value;
    }

    pub fn with(mut self, drive: Drive, value: C64) -> Self {
        self.set(drive, value);
        self
    }

    /// Drives with a nonzero value.
    pub fn active(&self) -> impl Iterator<Item = Drive> + '_ {
        Drive::ALL.into_iter().filter(|d| self.get(*d) != C64::new(0.0, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pulse {
    pub drive: Drive,
    /// Peak Rabi frequency, units of g.
    pub amplitude: f64,
    /// Units of 1/g.
    pub center: f64,
    /// Gaussian width τ, units of 1/g.
    pub width: f64,
    /// Radians.
    pub phase: f64,
}

impl Pulse {
    pub fn value_at(&self, t: f64) -> C64 {
        let x = (t - self.center) / self.width;
        phase(self.phase) * (self.amplitude * libm::exp(-0.5 * x * x))
    }
}

/// `amplitude · exp[-(t - center)² / 2τ²] · e^{iφ}`.
pub fn gaussian_value(p: &Pulse, t: f64) -> C64 {
    p.value_at(t)
}

/// A list of pulses and the simulation window they live in.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSchedule {
    pulses: Vec<Pulse>,
    t_start: f64,
    t_end: f64,
}

impl PulseSchedule {
    /// Validates amplitudes, widths and that every pulse is padded by at
    /// least four widths inside `[t_start, t_end]`.
    pub fn new(pulses: Vec<Pulse>, t_start: f64, t_end: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(Error::InvalidParameter { name: "t_end", value: t_end });
        }
        for p in &pulses {
            if !(p.amplitude >= 0.0 && p.amplitude.is_finite()) {
                return Err(Error::InvalidParameter { name: "amplitude", value: p.amplitude });
            }
            if !(p.width > 0.0 && p.width.is_finite()) {
                return Err(Error::InvalidParameter { name: "tau", value: p.width });
            }
            if !p.phase.is_finite() {
                return Err(Error::InvalidParameter { name: "phase", value: p.phase });
            }
            let pad = MIN_PADDING_WIDTHS * p.width;
            if p.center - pad < t_start || p.center + pad > t_end {
                return Err(Error::PulseOutsideWindow { center: p.center, t_start, t_end });
            }
        }
        Ok(Self { pulses, t_start, t_end })
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// Drives that appear in the schedule.
    pub fn drives(&self) -> Vec<Drive> {
        let mut d: Vec<Drive> = self.pulses.iter().map(|p| p.drive).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn drives_at(&self, t: f64) -> DriveValues {
        let mut out = DriveValues::zero();
        for p in &self.pulses {
            let v = out.get(p.drive) + p.value_at(t);
            out.set(p.drive, v);
        }
        out
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.pulses.iter().map(|p| p.amplitude).fold(0.0, f64::max)
    }
}

/// Sum of all pulses per drive at time `t`.
pub fn drives_at(schedule: &PulseSchedule, t: f64) -> DriveValues {
    schedule.drives_at(t)
}

/// Timing of the two-STIRAP conditional phase gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CzPulseParams {
    /// Peak Rabi frequency of both lasers, units of g.
    pub omega_max: f64,
    /// Separation `T` between the two STIRAP stages, units of 1/g.
    pub stage_separation: f64,
    /// Half the delay `t0` between the two pulses of a stage, units of 1/g.
    pub offset: f64,
    /// Gaussian width τ, units of 1/g.
    pub width: f64,
}

impl Default for CzPulseParams {
    fn default() -> Self {
        Self { omega_max: 0.16, stage_separation: 200.0, offset: 30.0, width: 40.0 }
    }
}

/// Timing of the three-STIRAP single-atom NOT gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NotPulseParams {
    pub omega_max: f64,
    /// Distance between consecutive stage centers, units of 1/g.
    pub stage_spacing: f64,
    pub offset: f64,
    pub width: f64,
}

impl Default for NotPulseParams {
    fn default() -> Self {
        Self { omega_max: 2.0, stage_spacing: 200.0, offset: 30.0, width: 40.0 }
    }
}

fn check_timing(omega_max: f64, span: f64, span_name: &'static str, offset: f64, width: f64) -> Result<()> {
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::InvalidParameter { name: "omega_max", value: omega_max });
    }
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::InvalidParameter { name: span_name, value: span });
    }
    if !(offset > 0.0 && offset < span / 2.0) {
        return Err(Error::InvalidParameter { name: "t0", value: offset });
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter { name: "tau", value: width });
    }
    Ok(())
}

/// The conditional phase gate on `|0⟩₁|1⟩₂`: two STIRAPs, the second the
/// time-reverse of the first with the `|σ⟩₂` drive shifted by π.
///
/// Stage (i) runs `Ω_{σ,2}` at `-T/2 - t0` before `Ω_{0,1}` at `-T/2 + t0`
/// (counterintuitive order, moving `|0,1,0⟩` to `|1,σ,0⟩`); stage (ii) has
/// `Ω_{0,1}` at `T/2 - t0` and `Ω_{σ,2}` at `T/2 + t0` with phase π.
pub fn cz_schedule(p: &CzPulseParams) -> Result<PulseSchedule> {
    check_timing(p.omega_max, p.stage_separation, "T", p.offset, p.width)?;
    let half = p.stage_separation / 2.0;
    let pulse = |drive, center, phase| Pulse { drive, amplitude: p.omega_max, center, width: p.width, phase };
    let pulses = alloc::vec![
        pulse(Drive::OmegaSigma2, -half - p.offset, 0.0),
        pulse(Drive::Omega01, -half + p.offset, 0.0),
        pulse(Drive::Omega01, half - p.offset, 0.0),
        pulse(Drive::OmegaSigma2, half + p.offset, PI),
    ];
    let edge = half + p.offset + WINDOW_PADDING_WIDTHS * p.width;
    PulseSchedule::new(pulses, -edge, edge)
}

/// Drive order of the three NOT stages: in each pair the first pulse
/// precedes the second.
pub const NOT_STAGES: [(Drive, Drive); 3] =
    [(Drive::NotSigma, Drive::NotOne), (Drive::NotOne, Drive::NotZero), (Drive::NotZero, Drive::NotSigma)];

/// The single-atom NOT: three STIRAPs centered at `-T_step`, `0`, `T_step`
/// taking `|1⟩ → |σ⟩`, then `|0⟩ → |1⟩`, then `|σ⟩ → |0⟩`.
///
/// The two pulses of every stage differ in phase by π. A drive that ends one
/// stage and opens the next keeps its phase across the boundary, so no
/// envelope changes sign while it is on; that puts π on the later pulse of
/// stages 1 and 3 and on the earlier pulse of stage 2.
pub fn not_schedule(p: &NotPulseParams) -> Result<PulseSchedule> {
    check_timing(p.omega_max, p.stage_spacing, "T_step", p.offset, p.width)?;
    let mut pulses = Vec::with_capacity(6);
    let mut carried = 0.0;
    for (k, (first, second)) in NOT_STAGES.into_iter().enumerate() {
        let center = (k as f64 - 1.0) * p.stage_spacing;
        let second_phase = if carried == 0.0 { PI } else { 0.0 };
        pulses.push(Pulse {
            drive: first,
            amplitude: p.omega_max,
            center: center - p.offset,
            width: p.width,
            phase: carried,
        });
        pulses.push(Pulse {
            drive: second,
            amplitude: p.omega_max,
            center: center + p.offset,
            width: p.width,
            phase: second_phase,
        });
        carried = second_phase;
    }
    let edge = p.stage_spacing + p.offset + WINDOW_PADDING_WIDTHS * p.width;
    PulseSchedule::new(pulses, -edge, edge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gaussian_examples() {
        let p = Pulse { drive: Drive::Omega01, amplitude: 0.16, center: 0.0, width: 40.0, phase: 0.0 };
        assert_eq!(gaussian_value(&p, 0.0), C64::new(0.16, 0.0));
        let q = Pulse { amplitude: 0.3, center: 7.0, phase: PI, ..p };
        let v = gaussian_value(&q, 7.0);
        assert!(approx(v.re, -0.3, 1e-15) && v.im.abs() < 1e-15);
        let v = gaussian_value(&Pulse { amplitude: 0.3, ..p }, 40.0);
        assert!(approx(v.re, 0.3 * libm::exp(-0.5), 1e-15));
    }

    #[test]
    fn gaussian_bounded_by_amplitude() {
        let p = Pulse { drive: Drive::NotOne, amplitude: 1.7, center: -3.0, width: 5.0, phase: 1.1 };
        for i in -200..200 {
            assert!(p.value_at(i as f64 * 0.37).norm() <= 1.7 + 1e-15);
        }
    }

    #[test]
    fn cz_default_layout() {
        let s = cz_schedule(&CzPulseParams::default()).unwrap();
        let centers: Vec<f64> = s.pulses().iter().map(|p| p.center).collect();
        assert_eq!(centers, [-130.0, -70.0, 70.0, 130.0]);
        assert_eq!(s.t_start(), -330.0);
        assert_eq!(s.t_end(), 330.0);
        let p = s.pulses();
        assert_eq!((p[0].drive, p[1].drive), (Drive::OmegaSigma2, Drive::Omega01));
        assert!(p[0].center < p[1].center);
        assert_eq!(p[3].drive, Drive::OmegaSigma2);
        assert_eq!(p[3].phase, PI);
        assert!(p.iter().all(|x| x.amplitude == 0.16 && x.width == 40.0));
        assert!(p.iter().all(|x| x.phase == 0.0 || x.phase == PI));
    }

    #[test]
    fn cz_stage_ii_mirrors_stage_i() {
        let params = CzPulseParams { omega_max: 0.2, stage_separation: 150.0, offset: 20.0, width: 25.0 };
        let s = cz_schedule(&params).unwrap();
        let p = s.pulses();
        assert_eq!(p[0].center, -p[3].center);
        assert_eq!(p[1].center, -p[2].center);
        assert_eq!(p[0].drive, p[3].drive);
        assert_eq!(p[1].drive, p[2].drive);
        assert_eq!(s.t_start(), -s.t_end());
    }

    #[test]
    fn cz_rejects_bad_parameters() {
        let d = CzPulseParams::default();
        assert!(cz_schedule(&CzPulseParams { omega_max: 0.0, ..d }).is_err());
        assert!(cz_schedule(&CzPulseParams { stage_separation: -1.0, ..d }).is_err());
        assert!(cz_schedule(&CzPulseParams { offset: 0.0, ..d }).is_err());
        assert!(cz_schedule(&CzPulseParams { offset: 100.0, ..d }).is_err());
        assert!(cz_schedule(&CzPulseParams { width: 0.0, ..d }).is_err());
    }

    #[test]
    fn counterintuitive_ratios() {
        let s = cz_schedule(&CzPulseParams::default()).unwrap();
        let ratio = |t: f64| {
            let d = s.drives_at(t);
            d.get(Drive::OmegaSigma2).norm() / d.get(Drive::Omega01).norm()
        };
        // Stage (i): Stokes dominates early, pump late.
        assert!(ratio(s.t_start()) > 1e3);
        assert!(ratio(-130.0) > ratio(-100.0) && ratio(-100.0) > ratio(-70.0) && ratio(-70.0) > ratio(-10.0));
        assert!(ratio(-10.0) < 0.05);
        assert!(ratio(0.0) < 1e-12);
        // Stage (ii): reversed.
        assert!(ratio(10.0) < 0.05);
        assert!(ratio(10.0) < ratio(70.0) && ratio(70.0) < ratio(130.0));
        assert!(ratio(s.t_end()) > 1e3);
    }

    #[test]
    fn drives_at_examples() {
        let s = cz_schedule(&CzPulseParams::default()).unwrap();
        let d = s.drives_at(-130.0);
        let overlap = 0.16 * libm::exp(-0.5 * (260.0f64 / 40.0).powi(2));
        assert!(approx(d.get(Drive::OmegaSigma2).re, 0.16 - overlap, 1e-15));
        let pump = 0.16 * libm::exp(-0.5 * 1.5f64.powi(2)) + 0.16 * libm::exp(-0.5 * (200.0f64 / 40.0).powi(2));
        assert!(approx(d.get(Drive::Omega01).re, pump, 1e-15));
        assert!(approx(d.get(Drive::Omega01).re, 0.16 * libm::exp(-1.125), 1e-6));
        assert_eq!(d.get(Drive::NotZero), C64::new(0.0, 0.0));

        let empty = PulseSchedule::new(Vec::new(), -1.0, 1.0).unwrap();
        assert_eq!(empty.drives_at(0.3), DriveValues::zero());

        let far = s.drives_at(5000.0);
        assert!(Drive::ALL.iter().all(|d| far.get(*d).norm() < 1e-6 * 0.16));
    }

    #[test]
    fn boundary_envelopes_are_negligible() {
        let s = cz_schedule(&CzPulseParams::default()).unwrap();
        for t in [s.t_start(), s.t_end()] {
            let d = s.drives_at(t);
            for drive in [Drive::Omega01, Drive::OmegaSigma2] {
                assert!(d.get(drive).norm() < 4e-4 * 0.16);
            }
        }
    }

    #[test]
    fn not_default_layout() {
        let s = not_schedule(&NotPulseParams::default()).unwrap();
        let p = s.pulses();
        assert_eq!(p.len(), 6);
        assert_eq!(s.t_start(), -430.0);
        assert_eq!(s.t_end(), 430.0);
        for (k, pair) in p.chunks(2).enumerate() {
            assert_eq!((pair[0].drive, pair[1].drive), NOT_STAGES[k]);
            assert!(pair[0].center < pair[1].center);
            let rel = (pair[1].phase - pair[0].phase).abs();
            assert!(approx(rel, PI, 1e-15), "stage {k} relative phase {rel}");
        }
        // Stage 1: Ω̃_σ before Ω̃_1.
        assert_eq!(p[0].drive, Drive::NotSigma);
        assert_eq!(p[1].drive, Drive::NotOne);
        // Drives shared between consecutive stages keep their phase.
        assert_eq!(p[1].phase, p[2].phase);
        assert_eq!(p[3].phase, p[4].phase);
        assert!(p.iter().all(|x| x.phase == 0.0 || x.phase == PI));
    }

    #[test]
    fn schedule_rejects_unpadded_pulse() {
        let p = Pulse { drive: Drive::Omega01, amplitude: 1.0, center: 0.0, width: 1.0, phase: 0.0 };
        assert!(PulseSchedule::new(alloc::vec![p], -10.0, 10.0).is_ok());
        assert!(matches!(PulseSchedule::new(alloc::vec![p], -3.0, 10.0), Err(Error::PulseOutsideWindow { .. })));
        assert!(PulseSchedule::new(alloc::vec![Pulse { width: -1.0, ..p }], -10.0, 10.0).is_err());
    }

    #[test]
    fn drive_names_round_trip() {
        for d in Drive::ALL {
            assert_eq!(d.name().parse::<Drive>().unwrap(), d);
        }
        assert!("omega".parse::<Drive>().is_err());
    }
}
