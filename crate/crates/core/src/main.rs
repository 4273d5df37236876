use std::path::PathBuf;

use clap::{Parser, Subcommand};

use iondicke::ionsim::FidelityLevel;
use iondicke::mapping::{classify_regime, stretch_mode_error, tones_from_model};
use iondicke::presets;
use iondicke::scenario::{
    convergence_check, run_scenario, write_csv, write_outputs, ScenarioConfig,
};
use iondicke::{Error, Result};

#[derive(Parser)]
#[command(name = "iondicke", version, about = "Trapped-ion simulation of Dicke-family models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a preset or a JSON config file.
    Run {
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        fidelity_level: Option<CliLevel>,
        /// Fock cutoff override.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Fixed-step override in seconds.
        #[arg(long)]
        dt: Option<f64>,
        /// Horizon override as gt/π.
        #[arg(long)]
        gt_end: Option<f64>,
        /// Output stem; writes <out>.csv and <out>.meta.json. Without it the
        /// CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets with their full parameters.
    Presets,
    /// Convergence check: halve dt, raise the cutoff by 5, report the change.
    Converge {
        #[arg(long)]
        preset: String,
    },
    /// Run every scenario in a batch config concurrently.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CliLevel {
    Full,
    SidebandRwa,
}

impl From<CliLevel> for FidelityLevel {
    fn from(v: CliLevel) -> Self {
        match v {
            CliLevel::Full => FidelityLevel::Full,
            CliLevel::SidebandRwa => FidelityLevel::SidebandRwa,
        }
    }
}

#[derive(serde::Deserialize)]
struct SweepConfig {
    scenarios: Vec<ScenarioConfig>,
}

fn load_config(preset: Option<&str>, config: Option<&PathBuf>) -> Result<ScenarioConfig> {
    match (preset, config) {
        (Some(name), None) => {
            let p = presets::find(name).ok_or_else(|| {
                Error::Config(format!(
                    "unknown preset '{name}'; see the `presets` subcommand"
                ))
            })?;
            Ok(ScenarioConfig::from_preset(&p))
        }
        (None, Some(path)) => ScenarioConfig::from_file(path),
        _ => Err(Error::Config("exactly one of --preset or --config is required".into())),
    }
}

fn cmd_run(
    preset: Option<String>,
    config: Option<PathBuf>,
    fidelity_level: Option<CliLevel>,
    cutoff: Option<usize>,
    dt: Option<f64>,
    gt_end: Option<f64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let mut cfg = load_config(preset.as_deref(), config.as_ref())?;
    if let Some(level) = fidelity_level {
        cfg.fidelity_level = level.into();
    }
    if let Some(c) = cutoff {
        cfg.cutoff = c;
    }
    if let Some(dt) = dt {
        cfg.grid.dt = Some(dt);
    }
    if let Some(gt) = gt_end {
        cfg.grid.gt_end_pi = gt;
    }
    if cfg.ion_params().lamb_dicke_marginal() {
        eprintln!(
            "warning: eta = {} is marginal for the first-order Lamb-Dicke expansion",
            cfg.ion.eta
        );
    }
    let result = run_scenario(&cfg)?;
    match out.or_else(|| cfg.output.clone().map(PathBuf::from)) {
        Some(stem) => {
            write_outputs(&result, &stem)?;
            eprintln!(
                "wrote {} samples to {} (dt = {:.3e} s, {} steps)",
                result.ion.samples.len(),
                stem.with_extension("csv").display(),
                result.grid_dt,
                result.n_steps
            );
        }
        None => write_csv(&result, std::io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_presets() -> Result<()> {
    println!(
        "{:<18} {:<14} {:>2}  {:>12} {:>12} {:>9} {:>9} {:>4}  {:>6} {:>6}  {:>5} {:>6}  regime",
        "name", "model", "N", "omega/2pi", "omega_q/2pi", "g/2pi", "h/2pi", "s", "eta",
        "Gamma", "cut", "gt/pi"
    );
    const TWO_PI: f64 = std::f64::consts::TAU;
    for p in presets::all_presets() {
        let regime = classify_regime(&p.model)?;
        println!(
            "{:<18} {:<14} {:>2}  {:>12.2} {:>12.2} {:>9.1} {:>9.1} {:>4.1}  {:>6.3} {:>6.1}  {:>5} {:>6.1}  {} (r={:.3})",
            p.name,
            p.model.kind.to_string(),
            p.model.n_qubits,
            p.model.omega / TWO_PI,
            p.model.omega_q / TWO_PI,
            p.model.g / TWO_PI,
            p.model.h / TWO_PI,
            p.model.s,
            p.ion.eta,
            p.ion.gamma / TWO_PI,
            p.cutoff,
            p.gt_end_pi,
            regime.label,
            regime.ratio,
        );
        let tones = tones_from_model(&p.model, &p.ion)?;
        let rabi_max = tones.iter().map(|t| t.rabi).fold(0.0, f64::max);
        let stretch = stretch_mode_error(&p.ion, rabi_max, p.model.n_qubits)?;
        let tone_desc: Vec<String> = tones
            .iter()
            .map(|t| {
                format!(
                    "{:?}: Omega/2pi={:.0} Hz, delta/2pi={:.0} Hz, phase={:.3}",
                    t.kind,
                    t.rabi / TWO_PI,
                    t.detuning / TWO_PI,
                    t.phase
                )
            })
            .collect();
        println!("    tones [{}]  stretch-mode error {:.2e}", tone_desc.join("; "), stretch);
    }
    Ok(())
}

fn cmd_converge(preset: &str) -> Result<()> {
    let p = presets::find(preset)
        .ok_or_else(|| Error::Config(format!("unknown preset '{preset}'")))?;
    let cfg = ScenarioConfig::from_preset(&p);
    let report = convergence_check(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.pass {
        return Err(Error::Numerical(format!(
            "convergence check failed: max change {:.3e} >= 1e-3",
            report.max_delta
        )));
    }
    Ok(())
}

fn cmd_sweep(config: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(config)?;
    let sweep: SweepConfig = serde_json::from_str(&text)?;
    if sweep.scenarios.is_empty() {
        return Err(Error::Config("sweep config has no scenarios".into()));
    }
    for (i, sc) in sweep.scenarios.iter().enumerate() {
        if sc.output.is_none() {
            return Err(Error::Config(format!(
                "sweep scenario {} ('{}') needs an output stem",
                i, sc.name
            )));
        }
        sc.validate()?;
    }
    let handles: Vec<_> = sweep
        .scenarios
        .into_iter()
        .map(|sc| {
            std::thread::spawn(move || -> Result<String> {
                let result = run_scenario(&sc)?;
                let stem = PathBuf::from(sc.output.as_deref().unwrap());
                write_outputs(&result, &stem)?;
                Ok(sc.name)
            })
        })
        .collect();
    let mut first_err = None;
    for h in handles {
        match h.join() {
            Ok(Ok(name)) => eprintln!("scenario '{name}' done"),
            Ok(Err(e)) => {
                eprintln!("scenario failed: {e}");
                first_err.get_or_insert(e);
            }
            Err(_) => {
                first_err
                    .get_or_insert(Error::Numerical("scenario worker panicked".into()));
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { preset, config, fidelity_level, cutoff, dt, gt_end, out } => {
            cmd_run(preset, config, fidelity_level, cutoff, dt, gt_end, out)
        }
        Command::Presets => cmd_presets(),
        Command::Converge { preset } => cmd_converge(&preset),
        Command::Sweep { config } => cmd_sweep(&config),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
