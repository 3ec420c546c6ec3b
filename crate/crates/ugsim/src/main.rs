use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use ugsim::bench::{run_bench, BenchConfig};
use ugsim::io::{read_circuit, write_circuit};
use ugsim::pipeline::{plan_amplitude, run_amplitude, CircuitSource, OrderChoice, OutputFormat, PipelineError, RunConfig};
use ugsim_core::circuit::serialize_circuit;
use ugsim_core::dot::to_dot;
use ugsim_core::fidelity::{fidelity_contour, fidelity_report, is_perfect_square};
use ugsim_core::oracle::amplitude_of;
use ugsim_core::{build_model, generate, BuildOptions, Circuit, GenParams};

#[derive(Parser)]
#[command(name = "ugsim", version, about = "Amplitude simulator for grid quantum circuits by variable elimination")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random grid circuit in the text format.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Destination file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one amplitude <x|C|0...0>.
    Amplitude {
        #[command(flatten)]
        src: CircuitArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the fix set and cost estimate without contracting.
    Plan {
        #[command(flatten)]
        src: CircuitArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Amplitude from the dense state-vector simulator.
    Oracle {
        #[command(flatten)]
        src: CircuitArgs,
        #[arg(long, default_value = "")]
        x: String,
    },
    /// Gate counts and circuit fidelity estimates, or the fidelity contour.
    Fidelity {
        #[arg(long, default_value_t = 7)]
        rows: usize,
        #[arg(long, default_value_t = 7)]
        cols: usize,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 0.005)]
        eps: f64,
        /// Also count the gates of the circuit generated with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Emit CSV of the two-qubit fidelity needed for --target instead.
        #[arg(long)]
        contour: bool,
        #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9,10,11,12")]
        sides: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "10,15,20,25,30,35,40")]
        depths: Vec<usize>,
        #[arg(long, default_value_t = 0.05)]
        target: f64,
    },
    /// Percentile runtime over seeded square circuits, as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        sides: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,12")]
        depths: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 80.0)]
        percentile: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        run: RunArgs,
        /// Also write one CSV row per instance to this file.
        #[arg(long)]
        instances: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the model graph in DOT format.
    ExportDot {
        #[command(flatten)]
        src: CircuitArgs,
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Never repeat a qubit's previous random gate.
    #[arg(long)]
    avoid_repeats: bool,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        GenParams { avoid_repeats: self.avoid_repeats, ..GenParams::new(self.rows, self.cols, self.depth, self.seed) }
    }
}

#[derive(Args, Clone)]
struct CircuitArgs {
    /// Circuit file; otherwise one is generated from --rows/--cols/--depth/--seed.
    #[arg(long, conflicts_with_all = ["rows", "cols", "depth"])]
    circuit: Option<PathBuf>,
    #[arg(long, requires_all = ["cols", "depth"])]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    avoid_repeats: bool,
}

impl CircuitArgs {
    fn load(&self) -> Result<(Circuit, CircuitSource), PipelineError> {
        if let Some(path) = &self.circuit {
            return Ok((read_circuit(path)?, CircuitSource::File { path: path.clone() }));
        }
        match (self.rows, self.cols, self.depth) {
            (Some(rows), Some(cols), Some(depth)) => {
                let p = GenParams { avoid_repeats: self.avoid_repeats, ..GenParams::new(rows, cols, depth, self.seed) };
                let src = CircuitSource::Generated { rows, cols, depth, seed: self.seed, avoid_repeats: self.avoid_repeats };
                Ok((generate(&p), src))
            }
            _ => Err(PipelineError::Usage("give --circuit or all of --rows, --cols, --depth".into())),
        }
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Output bitstring, qubit 0 first; all zeros if omitted.
    #[arg(long, default_value = "")]
    x: String,
    #[arg(long, value_enum, default_value_t = OrderChoice::Search)]
    order: OrderChoice,
    /// Search budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    order_time: f64,
    #[arg(long, default_value_t = 0)]
    order_seed: u64,
    /// Cap on search restarts; 0 means only the time budget applies.
    #[arg(long, default_value_t = 200)]
    order_restarts: usize,
    /// Most variables to fix; 2^t subtasks.
    #[arg(long, default_value_t = 0)]
    fix_max: usize,
    /// Largest acceptable sigma' rank per subtask.
    #[arg(long, default_value_t = 27)]
    max_rank: usize,
    /// Ceiling on one subtask's estimated cost.
    #[arg(long)]
    max_total: Option<u128>,
    /// Consider only this many highest-degree vertices per fixing step.
    #[arg(long)]
    shortlist: Option<usize>,
    /// Run even if the budget cannot be met within --fix-max.
    #[arg(long)]
    allow_over_budget: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

impl RunArgs {
    fn config(&self, circuit: CircuitSource) -> RunConfig {
        RunConfig {
            circuit,
            x: self.x.clone(),
            order: self.order,
            order_time: self.order_time,
            order_seed: self.order_seed,
            order_restarts: (self.order_restarts > 0).then_some(self.order_restarts),
            fix_max: self.fix_max,
            max_rank: self.max_rank,
            max_total: self.max_total,
            shortlist: self.shortlist,
            allow_over_budget: self.allow_over_budget,
            workers: self.workers,
            format: self.format,
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), PipelineError> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|source| ugsim::io::IoError::Fs { path: p.display().to_string(), source }.into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.cmd {
        Cmd::Generate { gen, out } => {
            let c = generate(&gen.params());
            match &out {
                Some(p) => write_circuit(p, &c)?,
                None => print!("{}", serialize_circuit(&c).expect("generated gates have tokens")),
            }
        }
        Cmd::Amplitude { src, run } => {
            let (c, source) = src.load()?;
            let cfg = run.config(source);
            let r = run_amplitude(&c, &cfg)?;
            let text = match cfg.format {
                OutputFormat::Json => serde_json::to_string_pretty(&r).expect("serializable") + "\n",
                OutputFormat::Csv => format!(
                    "re,im,num_subtasks,max_rank,est_total_cost,wall_ms\n{},{},{},{},{},{}\n",
                    r.amplitude.re, r.amplitude.im, r.num_subtasks, r.max_rank, r.est_total_cost, r.wall_ms
                ),
                OutputFormat::Plain => format!("{} {}\n", r.amplitude.re, r.amplitude.im),
            };
            print!("{text}");
        }
        Cmd::Plan { src, run } => {
            let (c, source) = src.load()?;
            let cfg = run.config(source);
            let (g, plan) = plan_amplitude(&c, &cfg)?;
            let name = |v: &ugsim_core::VarId| g.info(*v).to_string();
            let v = json!({
                "fix_vars": plan.fix_vars.iter().map(|v| v.0).collect::<Vec<_>>(),
                "fix_names": plan.fix_vars.iter().map(name).collect::<Vec<_>>(),
                "num_subtasks": plan.num_subtasks(),
                "ordering": plan.post_fix_ordering.source.name(),
                "post_fix_ordering": plan.post_fix_ordering.vars.iter().map(|v| v.0).collect::<Vec<_>>(),
                "est_subtask_cost": {
                    "total": plan.est_subtask_cost.total,
                    "max_rank": plan.est_subtask_cost.max_rank,
                    "per_step": plan.est_subtask_cost.per_step.iter()
                        .map(|s| json!({"var": s.var.0, "degree": s.degree, "cost": s.cost}))
                        .collect::<Vec<_>>(),
                },
                "est_total_cost": plan.est_total_cost(),
                "greedy_costs": plan.greedy_costs,
                "free_vars": g.num_free(),
                "config": cfg,
            });
            print!("{}", pretty(&v));
        }
        Cmd::Oracle { src, x } => {
            let (c, source) = src.load()?;
            let cfg = RunConfig { circuit: source, x, ..RunConfig::default() };
            let bits = cfg.output_bits(c.num_qubits())?;
            let start = std::time::Instant::now();
            let a = amplitude_of(&c, &bits)?;
            let v = json!({
                "amplitude": {"re": a.re, "im": a.im},
                "wall_ms": start.elapsed().as_secs_f64() * 1e3,
                "config": {"circuit": cfg.circuit, "x": cfg.x},
            });
            print!("{}", pretty(&v));
        }
        Cmd::Fidelity { rows, cols, depth, eps, seed, contour, sides, depths, target } => {
            if contour {
                let mut s = String::from("side,depth,eps,gate_fidelity\n");
                for p in fidelity_contour(&sides, &depths, target) {
                    s += &format!("{},{},{},{}\n", p.side, p.depth, p.eps, p.gate_fidelity);
                }
                print!("{s}");
                return Ok(());
            }
            if rows == 0 || cols == 0 {
                return Err(PipelineError::Usage("--rows and --cols must be positive".into()));
            }
            let c = seed.map(|s| generate(&GenParams::new(rows, cols, depth, s)));
            let r = fidelity_report(rows, cols, depth, eps, c.as_ref());
            let n = rows * cols;
            let v = json!({
                "rows": r.rows, "cols": r.cols, "depth": r.depth, "eps": r.eps,
                "g1": r.g1, "g2": r.g2,
                "g1_exact": r.g1_exact, "g2_exact": r.g2_exact,
                "alpha_general": r.alpha_general,
                "alpha_square": r.alpha_square,
                "alpha_exact": r.alpha_exact,
                "square_grid": is_perfect_square(n) && rows == cols,
            });
            print!("{}", pretty(&v));
        }
        Cmd::Bench { sides, depths, samples, percentile, seed, run, instances, out } => {
            if !(0.0..=100.0).contains(&percentile) {
                return Err(PipelineError::Usage("--percentile must lie in [0, 100]".into()));
            }
            let cfg = BenchConfig { sides, depths, samples, percentile, seed, run: run.config(CircuitSource::Inline) };
            cfg.run.validate()?;
            let report = run_bench(&cfg);
            if let Some(p) = &instances {
                emit(&Some(p.clone()), &report.instances_csv())?;
            }
            emit(&out, &report.to_csv())?;
        }
        Cmd::ExportDot { src, x, out } => {
            let (c, source) = src.load()?;
            let cfg = RunConfig { circuit: source, x, ..RunConfig::default() };
            let bits = cfg.output_bits(c.num_qubits())?;
            let g = build_model(&c, &bits, BuildOptions::default())?;
            emit(&out, &to_dot(&g))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let v = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            println!("{}", serde_json::to_string(&v).expect("json value"));
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
