//! Battery sizing for desk-scale runs.
//!
//! The nominal 3 mAh battery outlives a short run by far, so no node would
//! ever die. Calibration picks a capacity at which plain ADHOP loses a
//! given share of its nodes: a first guess from the consumption quantile of
//! an unlimited-battery run, then bisection on the observed dead fraction.

use adhop_core::{MetricsReport, ProtocolKind, ScenarioConfig};

use crate::sweep::{run_all, SweepError};

#[derive(Debug, Clone)]
pub struct CalibrationSpec {
    pub base: ScenarioConfig,
    pub seeds: Vec<u64>,
    pub target_dead_fraction: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl CalibrationSpec {
    pub fn new(base: ScenarioConfig, seeds: Vec<u64>) -> Self {
        Self {
            base,
            seeds,
            target_dead_fraction: 0.10,
            tolerance: 0.05,
            max_iterations: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub battery_j: f64,
    /// Mean share of dead nodes across the calibration seeds.
    pub dead_fraction: f64,
    pub quantile_j: f64,
    pub iterations: usize,
}

fn dead_fraction(reports: &[MetricsReport]) -> f64 {
    let dead: usize = reports.iter().map(|r| r.dead_count()).sum();
    let all: usize = reports.iter().map(|r| r.nodes.len()).sum();
    if all == 0 {
        0.0
    } else {
        dead as f64 / all as f64
    }
}

fn runs_at(spec: &CalibrationSpec, battery_j: f64) -> Result<Vec<MetricsReport>, SweepError> {
    let cfgs: Vec<ScenarioConfig> = spec
        .seeds
        .iter()
        .map(|&seed| {
            let mut c = spec.base.clone();
            c.seed = seed;
            c.protocol = ProtocolKind::Adhop;
            c.trace = false;
            c.energy.battery_j = battery_j;
            c
        })
        .collect();
    run_all(&cfgs)
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

pub fn calibrate(spec: &CalibrationSpec) -> Result<Calibration, SweepError> {
    let free = runs_at(spec, f64::INFINITY)?;
    let mut consumed: Vec<f64> = free
        .iter()
        .flat_map(|r| r.nodes.iter().map(|n| n.consumed_j))
        .collect();
    consumed.sort_by(f64::total_cmp);
    let q = quantile(&consumed, 1.0 - spec.target_dead_fraction);
    let mut lo = quantile(&consumed, 0.0).max(1e-9);
    let mut hi = quantile(&consumed, 1.0).max(lo) * 1.01;

    let mut battery = q;
    let mut f = dead_fraction(&runs_at(spec, battery)?);
    let mut best = (battery, f);
    let mut iterations = 1;
    while (f - spec.target_dead_fraction).abs() > spec.tolerance && iterations < spec.max_iterations
    {
        if f > spec.target_dead_fraction {
            lo = battery;
        } else {
            hi = battery;
        }
        battery = 0.5 * (lo + hi);
        f = dead_fraction(&runs_at(spec, battery)?);
        iterations += 1;
        if (f - spec.target_dead_fraction).abs() < (best.1 - spec.target_dead_fraction).abs() {
            best = (battery, f);
        }
    }
    Ok(Calibration {
        battery_j: best.0,
        dead_fraction: best.1,
        quantile_j: q,
        iterations,
    })
}
