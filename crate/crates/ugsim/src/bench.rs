//! Percentile runtime over seeded square circuits, as CSV.

use std::fmt::Write as _;
use std::time::Instant;

use ugsim_core::{generate, GenParams};

use crate::pipeline::{run_amplitude, CircuitSource, RunConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub sides: Vec<usize>,
    pub depths: Vec<usize>,
    pub samples: usize,
    pub percentile: f64,
    /// Sample `s` of every cell uses generator seed `seed + s`.
    pub seed: u64,
    pub run: RunConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub side: usize,
    pub depth: usize,
    pub seed: u64,
    pub wall_ms: f64,
    pub max_rank: usize,
    pub t: usize,
    pub est_total_cost: u128,
    /// `"ok"` or `"error:<kind>"`.
    pub status: String,
}

impl Instance {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub side: usize,
    pub depth: usize,
    pub samples: usize,
    pub ok: usize,
    pub percentile_ms: Option<f64>,
    pub mean_max_rank: Option<f64>,
    pub mean_t: Option<f64>,
    pub mean_est_cost: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub cells: Vec<CellSummary>,
    pub instances: Vec<Instance>,
}

/// Nearest-rank percentile: the `ceil(p/100 * n)`-th smallest value.
pub fn percentile(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = ((p / 100.0) * v.len() as f64).ceil() as usize;
    Some(v[k.clamp(1, v.len()) - 1])
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

pub fn run_bench(cfg: &BenchConfig) -> BenchReport {
    let mut cells = Vec::new();
    let mut instances = Vec::new();
    for &side in &cfg.sides {
        for &depth in &cfg.depths {
            let mut cell = Vec::with_capacity(cfg.samples);
            for s in 0..cfg.samples {
                let seed = cfg.seed.wrapping_add(s as u64);
                let c = generate(&GenParams::new(side, side, depth, seed));
                let run = RunConfig {
                    circuit: CircuitSource::Generated { rows: side, cols: side, depth, seed, avoid_repeats: false },
                    x: String::new(),
                    ..cfg.run.clone()
                };
                let start = Instant::now();
                let inst = match run_amplitude(&c, &run) {
                    Ok(r) => Instance {
                        side,
                        depth,
                        seed,
                        wall_ms: r.wall_ms,
                        max_rank: r.max_rank,
                        t: r.t,
                        est_total_cost: r.est_total_cost,
                        status: "ok".into(),
                    },
                    Err(e) => Instance {
                        side,
                        depth,
                        seed,
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                        max_rank: 0,
                        t: 0,
                        est_total_cost: 0,
                        status: format!("error:{}", e.kind()),
                    },
                };
                cell.push(inst);
            }
            let ok: Vec<&Instance> = cell.iter().filter(|i| i.ok()).collect();
            let times: Vec<f64> = ok.iter().map(|i| i.wall_ms).collect();
            cells.push(CellSummary {
                side,
                depth,
                samples: cfg.samples,
                ok: ok.len(),
                percentile_ms: percentile(&times, cfg.percentile),
                mean_max_rank: mean(ok.iter().map(|i| i.max_rank as f64)),
                mean_t: mean(ok.iter().map(|i| i.t as f64)),
                mean_est_cost: mean(ok.iter().map(|i| i.est_total_cost as f64)),
            });
            instances.extend(cell);
        }
    }
    BenchReport { cells, instances }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl BenchReport {
    /// One summary row per cell, then one row per failed instance.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,d,seed,samples,ok,percentile_ms,mean_max_rank,mean_t,mean_est_cost,status\n");
        for c in &self.cells {
            let _ = writeln!(
                s,
                "{},{},,{},{},{},{},{},{},ok",
                c.side,
                c.depth,
                c.samples,
                c.ok,
                opt(c.percentile_ms),
                opt(c.mean_max_rank),
                opt(c.mean_t),
                opt(c.mean_est_cost)
            );
        }
        for i in self.instances.iter().filter(|i| !i.ok()) {
            let _ = writeln!(s, "{},{},{},1,0,,,,,{}", i.side, i.depth, i.seed, i.status);
        }
        s
    }

    /// Every instance with its timing and estimated cost.
    pub fn instances_csv(&self) -> String {
        let mut s = String::from("n,d,seed,wall_ms,max_rank,t,est_total_cost,status\n");
        for i in &self.instances {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                i.side, i.depth, i.seed, i.wall_ms, i.max_rank, i.t, i.est_total_cost, i.status
            );
        }
        s
    }
}
