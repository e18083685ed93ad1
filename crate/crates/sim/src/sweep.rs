//! Parameter sweeps over protocols, router counts and seeds, with per-run
//! and per-cell CSV output.

use std::io::Write;
use std::path::Path;

use adhop_core::{MetricsReport, ProtocolKind, ScenarioConfig};
use rayon::prelude::*;
use thiserror::Error;

use crate::kv::{parse_list, parse_u64, KvError, KvFile};
use crate::scenario::apply_file;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] KvError),
    #[error("run {protocol} nodes={routers} seed={seed} rejected: {source}")]
    Run {
        protocol: ProtocolKind,
        routers: usize,
        seed: u64,
        source: adhop_core::ConfigError,
    },
    #[error("sweep needs at least one protocol, node count and seed")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub protocols: Vec<ProtocolKind>,
    /// Router counts.
    pub nodes: Vec<usize>,
    pub seeds: u64,
    pub first_seed: u64,
    pub base: ScenarioConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            protocols: ProtocolKind::ALL.to_vec(),
            nodes: vec![20, 60, 100],
            seeds: 10,
            first_seed: 1,
            base: ScenarioConfig::default(),
        }
    }
}

impl SweepSpec {
    /// Router counts 20, 40, ..., 200 at 900 s.
    pub fn full_scale() -> Self {
        let mut s = Self {
            nodes: (1..=10).map(|k| k * 20).collect(),
            ..Self::default()
        };
        s.base.duration = adhop_core::SimTime::from_secs(900);
        s
    }

    /// Reads `protocols`, `node_counts`, `seeds`, `first_seed` and `full_scale`; every other key
    /// configures the base scenario.
    pub fn from_file(file: &KvFile) -> Result<Self, KvError> {
        let mut spec = SweepSpec::default();
        let mut base = spec.base.clone();
        let mut protocols = None;
        let mut nodes = None;
        let mut seeds = None;
        let mut first_seed = None;
        let mut full = false;
        apply_file(&mut base, file, |k, v| {
            match k {
                "protocols" => {
                    protocols = Some(
                        parse_list(v)
                            .iter()
                            .map(|p| {
                                p.parse::<ProtocolKind>()
                                    .map_err(|_| format!("unknown protocol `{p}`"))
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "node_counts" => {
                    nodes = Some(
                        parse_list(v)
                            .iter()
                            .map(|n| parse_u64(n).map(|n| n as usize))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "seeds" => seeds = Some(parse_u64(v)?),
                "first_seed" => first_seed = Some(parse_u64(v)?),
                "full_scale" => full = crate::kv::parse_bool(v)?,
                _ => return Ok(false),
            }
            Ok(true)
        })?;
        if full {
            let f = SweepSpec::full_scale();
            spec.nodes = f.nodes;
            if !file.entries.iter().any(|e| e.key == "duration_s") {
                base.duration = f.base.duration;
            }
        }
        spec.base = base;
        spec.protocols = protocols.unwrap_or(spec.protocols);
        spec.nodes = nodes.unwrap_or(spec.nodes);
        spec.seeds = seeds.unwrap_or(spec.seeds);
        spec.first_seed = first_seed.unwrap_or(spec.first_seed);
        Ok(spec)
    }

    /// Every run of the sweep, ordered by protocol, router count, seed.
    pub fn runs(&self) -> Vec<ScenarioConfig> {
        let mut out = Vec::new();
        for &p in &self.protocols {
            for &n in &self.nodes {
                for s in 0..self.seeds {
                    out.push(ScenarioConfig {
                        protocol: p,
                        routers: n,
                        seed: self.first_seed + s,
                        trace: false,
                        ..self.base.clone()
                    });
                }
            }
        }
        out
    }
}

/// Runs every configuration in parallel; results come back in input order.
pub fn run_all(cfgs: &[ScenarioConfig]) -> Result<Vec<MetricsReport>, SweepError> {
    cfgs.par_iter()
        .map(|c| {
            adhop_core::run(c)
                .map(|o| o.report)
                .map_err(|source| SweepError::Run {
                    protocol: c.protocol,
                    routers: c.routers,
                    seed: c.seed,
                    source,
                })
        })
        .collect()
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MetricsReport>, SweepError> {
    if spec.protocols.is_empty() || spec.nodes.is_empty() || spec.seeds == 0 {
        return Err(SweepError::Empty);
    }
    run_all(&spec.runs())
}

pub const RUN_COLUMNS: &[&str] = &[
    "protocol",
    "nodes",
    "total_nodes",
    "seed",
    "duration_s",
    "battery_j",
    "generated",
    "generation_failures",
    "delivered",
    "delivery_ratio",
    "routing_overhead",
    "energy_mean_j",
    "energy_std_j",
    "dead_nodes",
    "first_death_s",
    "control_bytes",
    "data_header_bytes",
    "useful_bytes",
    "undelivered_payload_bytes",
    "total_bytes",
    "fta_frames",
    "eta_frames",
    "backward_frames",
    "rreq_frames",
    "rrep_frames",
    "data_frames",
    "ack_frames",
    "mean_neighbors",
];

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

pub fn run_record(r: &MetricsReport) -> Vec<String> {
    let (mean, std) = r.energy_stats();
    let first_death = r.nodes.iter().filter_map(|n| n.death).min();
    let mut rec = vec![
        r.protocol.name().to_string(),
        r.routers.to_string(),
        r.node_count.to_string(),
        r.seed.to_string(),
        f6(r.duration.as_secs_f64()),
        f6(r.battery_j),
        r.generated.to_string(),
        r.generation_failures.to_string(),
        r.delivered.to_string(),
        f6(r.delivery_ratio()),
        f6(r.routing_overhead()),
        f6(mean),
        f6(std),
        r.dead_count().to_string(),
        first_death.map_or_else(String::new, |t| f6(t.as_secs_f64())),
        r.control_bytes.to_string(),
        r.data_header_bytes.to_string(),
        r.useful_bytes.to_string(),
        r.undelivered_payload_bytes.to_string(),
        r.total_bytes.to_string(),
    ];
    rec.extend(r.frames_by_kind.iter().map(|f| f.to_string()));
    rec.push(r.ack_frames.to_string());
    rec.push(f6(r.mean_neighbors));
    rec
}

pub fn write_runs<W: Write>(w: W, reports: &[MetricsReport]) -> Result<(), SweepError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RUN_COLUMNS)?;
    for r in reports {
        out.write_record(run_record(r))?;
    }
    out.flush()?;
    Ok(())
}

/// Mean and sample standard deviation.
pub fn mean_sd(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Aggregate over the seeds of one (protocol, router count) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub protocol: ProtocolKind,
    pub routers: usize,
    pub runs: usize,
    pub delivery_ratio: (f64, f64),
    pub routing_overhead: (f64, f64),
    pub energy_mean: (f64, f64),
    pub energy_std: (f64, f64),
    pub dead_nodes: (f64, f64),
    pub mean_neighbors: (f64, f64),
}

impl CellSummary {
    /// Standard error of the mean of the per-run energy stddev.
    pub fn energy_std_se(&self) -> f64 {
        self.energy_std.1 / (self.runs as f64).sqrt()
    }
}

pub fn summarize(reports: &[MetricsReport]) -> Vec<CellSummary> {
    let mut keys: Vec<(ProtocolKind, usize)> = Vec::new();
    for r in reports {
        if !keys.contains(&(r.protocol, r.routers)) {
            keys.push((r.protocol, r.routers));
        }
    }
    keys.into_iter()
        .map(|(p, n)| {
            let cell: Vec<&MetricsReport> = reports
                .iter()
                .filter(|r| r.protocol == p && r.routers == n)
                .collect();
            let col = |f: &dyn Fn(&MetricsReport) -> f64| {
                mean_sd(&cell.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            CellSummary {
                protocol: p,
                routers: n,
                runs: cell.len(),
                delivery_ratio: col(&|r| r.delivery_ratio()),
                routing_overhead: col(&|r| r.routing_overhead()),
                energy_mean: col(&|r| r.energy_stats().0),
                energy_std: col(&|r| r.energy_stats().1),
                dead_nodes: col(&|r| r.dead_count() as f64),
                mean_neighbors: col(&|r| r.mean_neighbors),
            }
        })
        .collect()
}

pub const SUMMARY_COLUMNS: &[&str] = &[
    "protocol",
    "nodes",
    "runs",
    "delivery_ratio_mean",
    "delivery_ratio_sd",
    "routing_overhead_mean",
    "routing_overhead_sd",
    "energy_mean_j_mean",
    "energy_mean_j_sd",
    "energy_std_j_mean",
    "energy_std_j_sd",
    "dead_nodes_mean",
    "dead_nodes_sd",
    "mean_neighbors_mean",
    "mean_neighbors_sd",
];

pub fn write_summary<W: Write>(w: W, cells: &[CellSummary]) -> Result<(), SweepError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_COLUMNS)?;
    for c in cells {
        let mut rec = vec![
            c.protocol.name().to_string(),
            c.routers.to_string(),
            c.runs.to_string(),
        ];
        for (m, s) in [
            c.delivery_ratio,
            c.routing_overhead,
            c.energy_mean,
            c.energy_std,
            c.dead_nodes,
            c.mean_neighbors,
        ] {
            rec.push(f6(m));
            rec.push(f6(s));
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `runs.csv` and `summary.csv` into `dir`.
pub fn write_outputs(
    dir: &Path,
    reports: &[MetricsReport],
) -> Result<Vec<CellSummary>, SweepError> {
    std::fs::create_dir_all(dir)?;
    write_runs(std::fs::File::create(dir.join("runs.csv"))?, reports)?;
    let cells = summarize(reports);
    write_summary(std::fs::File::create(dir.join("summary.csv"))?, &cells)?;
    Ok(cells)
}
