//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed validation checks, 2 usage or input
//! errors, 3 numerical failures (the error name is printed on stderr).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::geometry::{Aoa, Vec3};
use crate::io;
use crate::lscn::{k_sweep, train, Architecture, TrainConfig};
use crate::reflector::{solve_closed_form, solve_parametric, FirstOrderObservation};
use crate::scenes::builtin_scenario;
use crate::slam::{run, scenario_dataset, OracleClassifier, Scenario};

#[derive(Parser, Debug)]
#[command(name = "cslam", version, about = "Communication-based SLAM laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ScenarioSource {
    /// Scenario file (TOML)
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Default scenario of a builtin scene
    #[arg(long)]
    builtin: Option<String>,
}

impl ScenarioSource {
    fn load(&self) -> Result<Scenario> {
        match (&self.scenario, &self.builtin) {
            (Some(path), _) => io::read_scenario(path),
            (None, Some(name)) => builtin_scenario(name),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Scenario whose [lscn] section provides architecture and training settings
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl TrainArgs {
    fn resolve(&self) -> Result<(TrainConfig, Architecture)> {
        let (mut cfg, arch) = match &self.config {
            Some(p) => {
                let s = io::read_scenario(p)?;
                (s.lscn.train, s.lscn.architecture)
            }
            None => (TrainConfig::default(), Architecture::default()),
        };
        cfg.epochs = self.epochs.unwrap_or(cfg.epochs);
        cfg.batch_size = self.batch_size.unwrap_or(cfg.batch_size);
        cfg.learning_rate = self.learning_rate.unwrap_or(cfg.learning_rate);
        cfg.rng_seed = self.seed.unwrap_or(cfg.rng_seed);
        Ok((cfg, arch))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a labelled dataset from the scenario's dataset section
    GenDataset {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long)]
        out: PathBuf,
        /// Override K
        #[arg(long)]
        k: Option<usize>,
        /// Override the master seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train a classifier; writes the model and a per-epoch history CSV
    Train {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        history: Option<PathBuf>,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Train one model per K and write the accuracy table
    SweepK {
        #[arg(long)]
        dataset: PathBuf,
        /// Comma-separated K values, each at most the dataset's K
        #[arg(long, value_delimiter = ',', default_value = "1,3,5,7,9")]
        ks: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Run the mapping loop; writes points.ply, metrics.csv and confusion.csv
    Run {
        #[command(flatten)]
        source: ScenarioSource,
        /// Trained classifier model file
        #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
        model: Option<PathBuf>,
        /// Use the true link state instead of a classifier
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Solve one first-order reflection point and print "x y z"
    Solve {
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        uav: Vec3,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gmt: Vec3,
        /// Delay in seconds
        #[arg(long)]
        tau: f64,
        /// Polar angle of arrival from +Z, radians
        #[arg(long)]
        theta: f64,
        /// Azimuth of arrival from +X, radians
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Use the closed-form solver instead of the parametric one
        #[arg(long)]
        closed_form: bool,
    },
    /// Check the channel, solver, tracking and mapping invariants of a scenario
    Validate {
        #[command(flatten)]
        source: ScenarioSource,
    },
    /// Print the canonical scenario file of a builtin scene
    Scenario {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_vec3(s: &str) -> std::result::Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [x, y, z] => Ok(Vec3::new(x, y, z)),
        _ => Err(format!("expected x,y,z, got {} values", v.len())),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::GenDataset { source, out, k, seed } => {
            let mut s = source.load()?;
            if let Some(k) = k {
                s.lscn.k = k;
            }
            if let Some(seed) = seed {
                s.run.master_seed = seed;
            }
            let data = scenario_dataset(&s)?;
            io::write_dataset(&out, &data)?;
            let c = data.class_counts();
            writeln!(stdout, "{} snapshots (los {}, first-order {}, higher-order {})", data.len(), c[0], c[1], c[2])?;
        }
        Command::Train {
            dataset,
            model,
            history,
            train: args,
        } => {
            let data = io::read_dataset(&dataset)?;
            let (cfg, arch) = args.resolve()?;
            let (m, h) = train(&data, &cfg, &arch, None)?;
            io::write_model(&model, &m)?;
            if let Some(p) = history {
                io::write_history(p, &h.epochs)?;
            }
            writeln!(
                stdout,
                "train accuracy {:.4}, validation accuracy {:.4}, majority baseline {:.4}",
                h.final_train.accuracy,
                h.final_val.accuracy,
                data.majority_baseline()
            )?;
        }
        Command::SweepK {
            dataset,
            ks,
            out,
            train: args,
        } => {
            let data = io::read_dataset(&dataset)?;
            let (cfg, arch) = args.resolve()?;
            let rows = k_sweep(&data, &ks, &cfg, &arch)?;
            io::write_k_sweep(&out, &rows)?;
            for r in rows {
                writeln!(stdout, "K={:<3} train {:.4} val {:.4}", r.k, r.train_accuracy, r.val_accuracy)?;
            }
        }
        Command::Run {
            source,
            model,
            oracle,
            out_dir,
        } => {
            let s = source.load()?;
            let report = if oracle {
                run(&s, &OracleClassifier)?
            } else {
                let m = io::read_model(model.expect("clap requires a model without --oracle"))?;
                run(&s, &m)?
            };
            std::fs::create_dir_all(&out_dir)?;
            io::export_ply(&report.map, out_dir.join("points.ply"))?;
            io::write_metrics(out_dir.join("metrics.csv"), &report)?;
            io::write_confusion(out_dir.join("confusion.csv"), &report.confusion)?;
            match report.metrics.and_then(|m| m.point_mse) {
                Some(mse) => writeln!(stdout, "{} points, point_mse {mse:.6} m", report.map.len())?,
                None => writeln!(stdout, "{} points", report.map.len())?,
            }
        }
        Command::Solve {
            uav,
            gmt,
            tau,
            theta,
            phi,
            closed_form,
        } => {
            let obs = FirstOrderObservation::new(uav, gmt, tau, Aoa::new(theta, phi));
            let p = if closed_form {
                solve_closed_form(&obs)?
            } else {
                solve_parametric(&obs)?
            };
            writeln!(stdout, "{:.2} {:.2} {:.2}", p.x, p.y, p.z)?;
        }
        Command::Validate { source } => {
            let s = source.load()?;
            let checks = crate::invariants::check_scenario(&s)?;
            for c in &checks {
                writeln!(stdout, "{} {:<28} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(1);
            }
        }
        Command::Scenario { name, out } => {
            let text = io::scenario_to_string(&builtin_scenario(&name)?)?;
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => write!(stdout, "{text}")?,
            }
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.name());
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

pub fn main() -> i32 {
    main_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
