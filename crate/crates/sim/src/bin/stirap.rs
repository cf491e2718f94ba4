use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stirap_core::Error;
use stirap_core::*;
use stirap_sim::formats::{read_file, write_file};
use stirap_sim::Result;
use stirap_sim::*;

/// STIRAP two-qubit conditional phase gates with cavity and spontaneous
/// emission losses (no-jump evolution).
#[derive(Parser)]
#[command(name = "stirap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the |0⟩₁|1⟩₂ phase gate once and report P_suc and F.
    Simulate {
        /// uniform, 010, 000, or four comma-separated real amplitudes (00,01,10,11).
        #[arg(long, default_value = "uniform")]
        initial: String,
        #[command(flatten)]
        physics: Physics,
        /// Trajectory CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gate result JSON output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Scan P_suc and F over a (κ/g, Γ/g) grid.
    Sweep {
        /// Sweep config JSON; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run I_τ on each computational basis input and print the sign pattern.
    Gate {
        #[arg(long, default_value = "01")]
        target: String,
        #[arg(long, default_value = "simulated")]
        mode: String,
        #[command(flatten)]
        physics: Physics,
    },
    /// Two-qubit Grover search from |00⟩.
    Grover {
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "ideal")]
        mode: String,
        #[command(flatten)]
        physics: Physics,
    },
    /// Dark states of the lossless gate Hamiltonian for given Rabi frequencies (units of g).
    Darkstates {
        #[arg(long, allow_negative_numbers = true)]
        omega01: f64,
        #[arg(long, allow_negative_numbers = true)]
        omegasigma2: f64,
    },
    /// Run the built-in invariant suite.
    Verify,
}

#[derive(Args)]
struct Physics {
    /// Cavity decay rate κ/g.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    kappa: f64,
    /// Excited-state decay rate Γ/g.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long = "omega-max", default_value_t = 0.16)]
    omega_max: f64,
    /// Separation of the two STIRAP stages, units of 1/g.
    #[arg(long = "T", default_value_t = 200.0)]
    stage_separation: f64,
    /// Half the pulse delay within a stage, units of 1/g.
    #[arg(long, default_value_t = 30.0)]
    t0: f64,
    /// Gaussian width, units of 1/g.
    #[arg(long, default_value_t = 40.0)]
    tau: f64,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
}

impl Physics {
    fn context(&self) -> Result<GateContext> {
        Ok(GateContext {
            params: SystemParams::from_ratios(self.kappa, self.gamma)?,
            cz: CzPulseParams {
                omega_max: self.omega_max,
                stage_separation: self.stage_separation,
                offset: self.t0,
                width: self.tau,
            },
            not: NotPulseParams::default(),
            integrator: IntegratorConfig::with_step(self.step),
        })
    }
}

fn parse<T: std::str::FromStr>(what: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| SimError::Config(format!("invalid {what} {s:?}")))
}

fn simulate(initial: &str, physics: &Physics, out: Option<PathBuf>, json: Option<PathBuf>) -> Result<()> {
    let ctx = physics.context()?;
    let psi0 = initial.parse::<InitialState>()?.state()?;
    let schedule = cz_schedule(&ctx.cz)?;
    let traj = propagate(&schedule, &ctx.params, &psi0, &ctx.integrator)?;
    let result = run_cz_01(&psi0, &ctx)?;
    println!("p_suc={:.4} F={:.4}", result.success_probability, result.fidelity);
    for (t, a) in TargetLabel::ALL.iter().zip(result.final_state.register()) {
        println!("  |{t}⟩ {:+.4} {:+.4}i", a.re, a.im);
    }
    if let Some(path) = out {
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).map_err(|e| SimError::io(&path, e))?;
        write_file(&path, &buf)?;
    }
    if let Some(path) = json {
        write_file(&path, GateResultDoc::from_result(&result).to_json().as_bytes())?;
    }
    Ok(())
}

fn sweep(config: Option<PathBuf>, out: Option<PathBuf>, workers: Option<usize>) -> Result<()> {
    let mut cfg = match &config {
        Some(path) => SweepConfig::from_json(&read_file(path)?)?,
        None => SweepConfig::default(),
    };
    if workers.is_some() {
        cfg.workers = workers;
    }
    let rows = run_sweep(&cfg)?;
    for r in rows.iter().filter(|r| r.failure.is_some()) {
        eprintln!(
            "failed at kappa={} gamma={}: {}",
            r.kappa_over_g,
            r.gamma_over_g,
            r.failure.as_deref().unwrap_or("")
        );
    }
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).expect("writing to memory");
    match out {
        Some(path) => write_file(&path, &buf)?,
        None => std::io::stdout().write_all(&buf).map_err(|e| SimError::io("<stdout>", e))?,
    }
    if rows.iter().all(|r| r.failure.is_some()) {
        return Err(SimError::Core(Error::NumericalFailure { time: f64::NAN }));
    }
    Ok(())
}

fn gate(target: &str, mode: &str, physics: &Physics) -> Result<()> {
    let target: TargetLabel = parse("target", target)?;
    let mode: ExecutionMode = parse("mode", mode)?;
    let ctx = physics.context()?;
    let mut signs = Vec::new();
    for input in TargetLabel::ALL {
        let mut reg = vec![C64::new(0.0, 0.0); 4];
        reg[input.index()] = C64::new(1.0, 0.0);
        let psi0 = StateVector::from_register(canonical_gate_basis().shared(), &reg)?;
        let res = run_conditional_phase(target, &psi0, &ctx, mode)?;
        let a = res.final_state.register()[input.index()];
        let sign = if a.re >= 0.0 { "+" } else { "-" };
        println!("|{input}⟩ -> {:+.4}{:+.4}i  p_suc={:.4} F={:.4}", a.re, a.im, res.success_probability, res.fidelity);
        signs.push(sign);
    }
    println!("signs ({})", signs.join(","));
    Ok(())
}

fn grover(target: &str, mode: &str, physics: &Physics) -> Result<()> {
    let target: TargetLabel = parse("target", target)?;
    let mode: ExecutionMode = parse("mode", mode)?;
    let out = grover_search(target, &physics.context()?, mode)?;
    for (t, p) in TargetLabel::ALL.iter().zip(out.probabilities) {
        println!("|{t}⟩ {p:.6}");
    }
    println!("found {} cumulative_p_suc={:.4}", out.most_likely(), out.cumulative_success);
    Ok(())
}

fn darkstates(omega01: f64, omega_sigma2: f64) -> Result<()> {
    let basis = canonical_gate_basis().shared();
    let (o01, os2) = (C64::new(omega01, 0.0), C64::new(omega_sigma2, 0.0));
    let drives = DriveValues::zero().with(Drive::Omega01, o01).with(Drive::OmegaSigma2, os2);
    let h = build_hermitian(&drives, 1.0, &basis)?;
    for (name, d) in ["D00", "D01"].iter().zip(dark_states(o01, os2, 1.0, &basis)?) {
        let residual = h.apply(&d)?.norm_sqr().sqrt();
        println!("{name} (|H D| = {residual:.1e})");
        for (l, a) in basis.states().iter().zip(d.amplitudes()) {
            if a.norm() > 0.0 {
                println!("  |{l}⟩ {:+.6}", a.re);
            }
        }
    }
    Ok(())
}

fn verify() -> Result<()> {
    let outcomes = run_verification();
    for o in &outcomes {
        println!("{} {:<24} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    match outcomes.iter().filter(|o| !o.passed).count() {
        0 => Ok(()),
        n => Err(SimError::Verification(n)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Simulate { initial, physics, out, json } => simulate(&initial, &physics, out, json),
        Command::Sweep { config, out, workers } => sweep(config, out, workers),
        Command::Gate { target, mode, physics } => gate(&target, &mode, &physics),
        Command::Grover { target, mode, physics } => grover(&target, &mode, &physics),
        Command::Darkstates { omega01, omegasigma2 } => darkstates(omega01, omegasigma2),
        Command::Verify => verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
