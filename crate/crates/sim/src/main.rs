use std::path::{Path, PathBuf};

use adhop_core::{ProtocolKind, ScenarioConfig, SimTime};
use adhop_sim::calibrate::{calibrate, CalibrationSpec};
use adhop_sim::kv::KvFile;
use adhop_sim::scenario::load_scenario;
use adhop_sim::sweep::{run_sweep, write_outputs, write_runs, SweepSpec};
use adhop_sim::{report, write_trace};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "adhop-sim",
    version,
    about = "Ant-based routing simulator for mobile sensor networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (run, calibrate) or sweep file (sweep).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    protocol: Option<ProtocolKind>,
    /// Number of routing nodes added to the sources and sinks.
    #[arg(long)]
    nodes: Option<usize>,
    /// Simulated seconds.
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Write an event trace next to the results.
    #[arg(long)]
    trace: bool,
}

impl Common {
    fn override_scenario(&self, cfg: &mut ScenarioConfig) {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(p) = self.protocol {
            cfg.protocol = p;
        }
        if let Some(n) = self.nodes {
            cfg.routers = n;
        }
        if let Some(d) = self.duration {
            cfg.duration = SimTime::from_secs_f64(d);
        }
    }

    fn scenario(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(p) => load_scenario(p)?,
            None => ScenarioConfig::default(),
        };
        self.override_scenario(&mut cfg);
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write run.csv (and trace.txt with --trace).
    Run(Common),
    /// Run every (protocol, nodes, seed) of a sweep; writes runs.csv and summary.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Router counts 20..200 at 900 s.
        #[arg(long)]
        full_scale: bool,
        /// Size the battery first so that ADHOP loses about 10% of its nodes.
        #[arg(long)]
        calibrate: bool,
        /// Seeds per cell.
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Convert a summary.csv into one .dat file per figure.
    Report {
        /// Defaults to <out-dir>/summary.csv.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Find the battery capacity at which ADHOP loses about 10% of its nodes.
    Calibrate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 0.10)]
        target: f64,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(common) => cmd_run(&common),
        Command::Sweep {
            common,
            full_scale,
            calibrate,
            seeds,
        } => cmd_sweep(&common, full_scale, calibrate, seeds),
        Command::Report { input, out_dir } => {
            let input = input.unwrap_or_else(|| out_dir.join("summary.csv"));
            for p in report::write_dat_files(&input, &out_dir)? {
                println!("{}", p.display());
            }
            Ok(())
        }
        Command::Calibrate {
            common,
            seeds,
            target,
        } => {
            let cfg = common.scenario()?;
            let first = cfg.seed;
            let mut spec = CalibrationSpec::new(cfg, (first..first + seeds).collect());
            spec.target_dead_fraction = target;
            let c = calibrate(&spec)?;
            std::fs::create_dir_all(&common.out_dir)?;
            let text = format!(
                "battery_j = {:.6}\n# dead fraction {:.4} after {} runs per seed, p{:.0} of free consumption {:.6} J\n",
                c.battery_j,
                c.dead_fraction,
                c.iterations,
                100.0 * (1.0 - target),
                c.quantile_j
            );
            std::fs::write(common.out_dir.join("calibration.cfg"), &text)?;
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(common: &Common) -> Result<()> {
    let mut cfg = common.scenario()?;
    cfg.trace = cfg.trace || common.trace;
    let out = adhop_core::run(&cfg).context("invalid scenario")?;
    std::fs::create_dir_all(&common.out_dir)?;
    write_runs(
        std::fs::File::create(common.out_dir.join("run.csv"))?,
        std::slice::from_ref(&out.report),
    )?;
    if cfg.trace {
        write_trace(&common.out_dir.join("trace.txt"), &out.trace)?;
    }
    let r = &out.report;
    let (mean, sd) = r.energy_stats();
    println!(
        "{} nodes={} seed={} generated={} delivered={} delivery_ratio={:.4} overhead={:.4} energy_mean_j={:.6} energy_std_j={:.6} dead={}",
        r.protocol,
        r.routers,
        r.seed,
        r.generated,
        r.delivered,
        r.delivery_ratio(),
        r.routing_overhead(),
        mean,
        sd,
        r.dead_count()
    );
    Ok(())
}

fn load_spec(path: Option<&Path>) -> Result<SweepSpec> {
    Ok(match path {
        Some(p) => SweepSpec::from_file(&KvFile::load(p)?)?,
        None => SweepSpec::default(),
    })
}

fn cmd_sweep(
    common: &Common,
    full_scale: bool,
    calibrate_first: bool,
    seeds: Option<u64>,
) -> Result<()> {
    let mut spec = load_spec(common.config.as_deref())?;
    if full_scale {
        let f = SweepSpec::full_scale();
        spec.nodes = f.nodes;
        spec.base.duration = f.base.duration;
    }
    if let Some(s) = common.seed {
        spec.first_seed = s;
    }
    if let Some(p) = common.protocol {
        spec.protocols = vec![p];
    }
    if let Some(n) = common.nodes {
        spec.nodes = vec![n];
    }
    if let Some(d) = common.duration {
        spec.base.duration = SimTime::from_secs_f64(d);
    }
    if let Some(s) = seeds {
        spec.seeds = s;
    }
    std::fs::create_dir_all(&common.out_dir)?;
    if calibrate_first {
        let mut base = spec.base.clone();
        base.routers = spec.nodes.iter().copied().max().unwrap_or(base.routers);
        let seeds = (spec.first_seed..spec.first_seed + spec.seeds).collect();
        let c = calibrate(&CalibrationSpec::new(base, seeds))?;
        eprintln!(
            "calibrated battery {:.6} J (ADHOP dead fraction {:.4})",
            c.battery_j, c.dead_fraction
        );
        spec.base.energy.battery_j = c.battery_j;
    }
    let reports = run_sweep(&spec)?;
    let cells = write_outputs(&common.out_dir, &reports)?;
    for c in &cells {
        println!(
            "{:<11} nodes={:<4} delivery={:.4} overhead={:.4} energy_mean={:.6} energy_std={:.6} dead={:.2}",
            c.protocol.name(),
            c.routers,
            c.delivery_ratio.0,
            c.routing_overhead.0,
            c.energy_mean.0,
            c.energy_std.0,
            c.dead_nodes.0
        );
    }
    Ok(())
}
