//! Command-line front end.
//!
//! Every subcommand reads one system file (see [`crate::model::parse_document`]).
//! Numeric settings are taken from the command line first, then from the
//! file's optional `run` block, then from library defaults; the resolved set
//! is written into every output as a reproducibility header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::beb::{classify_scenario_2d, feigin_classify, pseudo_equilibrium, regular_equilibrium, BebReport};
use crate::dynamics::{
    boundary_touches, fixed_points, integrate, origin_stability_probe, sweep, FixedPointOptions, PoincareMap,
    ProbeOptions, SimOptions, SweepOptions, SweepParameter,
};
use crate::error::{Error, Result};
use crate::model::{parse_document, to_traces, NormalFormParams, ParsedSystem, TraceParams};
use crate::normal_form::{to_normal_form, TransformRecord};
use crate::sliding::scaled_sliding_system;
use crate::smallmat::spectrum;

#[derive(Parser, Debug)]
#[command(
    name = "beb",
    version,
    about = "Boundary equilibrium bifurcations of piecewise-linear Filippov systems",
    long_about = "Classifies boundary equilibrium bifurcations, builds the companion-matrix normal \
                  form, simulates orbits with sliding, and computes return maps.\n\n\
                  Exit status: 0 on success, 2 when the input is degenerate for the requested \
                  analysis, 1 on I/O or schema errors."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Bound on |x1| at localised switching events [default: 1e-10]
    #[arg(long, global = true)]
    pub tol_event: Option<f64>,
    /// Time cap for each orbit [default: 1e5]
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Return-map iterates discarded before recording [default: 500]
    #[arg(long, global = true)]
    pub transient: Option<usize>,
    /// Return-map iterates recorded after the transient [default: 250]
    #[arg(long, global = true)]
    pub keep: Option<usize>,
    /// Orbits leaving this ball count as escaped [default: 1e3 max(1, |mu|)]
    #[arg(long, global = true)]
    pub escape_radius: Option<f64>,
    /// Seed for randomly placed samples [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the main output here instead of stdout
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Feigin classification of the BEB (table and JSON)
    Classify { input: PathBuf },
    /// Normal form and the coordinate change that produces it (JSON)
    Transform { input: PathBuf },
    /// Sliding Jacobians, pseudo-equilibrium and sliding-region summary (JSON)
    Slide { input: PathBuf },
    /// Simulate one orbit (CSV: t, x1..xn, mode)
    Simulate {
        input: PathBuf,
        /// Initial state, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        /// Also write the event list (CSV: t, kind, x1..xn)
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Tabulate the return map (CSV: z, P(z), outcome)
    Poincare {
        input: PathBuf,
        /// Lower end of the section range [default: -3.5 in 3D, -2 in 2D]
        #[arg(long, allow_hyphen_values = true)]
        z_min: Option<f64>,
        /// Upper end of the section range [default: -0.1 in 3D, 2 in 2D]
        #[arg(long, allow_hyphen_values = true)]
        z_max: Option<f64>,
        /// Uniform grid size [default: 400]
        #[arg(long)]
        points: Option<usize>,
        /// Sample this many seeded random points instead of a grid
        #[arg(long)]
        random_samples: Option<usize>,
        /// Also locate fixed points and write them here (CSV: z, multiplier, period, flight, stable)
        #[arg(long)]
        fixed_points: Option<PathBuf>,
    },
    /// Bifurcation diagram of the return map (CSV: param, sample)
    Bifurcate {
        input: PathBuf,
        /// tau_L, sigma_L, delta_L, tau_S, delta_S, mu, a_i or d_i [default: tau_S]
        #[arg(long)]
        param: Option<String>,
        /// First parameter value (required here or in the run block)
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        /// Last parameter value, inclusive
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        /// Grid spacing of the parameter
        #[arg(long)]
        step: Option<f64>,
        /// Initial point on the section [default: -1]
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<f64>,
        /// Refine jumps of the attractor and report where it reaches z = 0
        #[arg(long)]
        touches: bool,
    },
    /// Name of the planar boundary-equilibrium scenario
    Scenario2d { input: PathBuf },
    /// Stability of the origin at mu = 0 from return amplitudes (JSON)
    ProbeOrigin {
        input: PathBuf,
        /// Radius of the largest launch [default: 1]
        #[arg(long)]
        radius: Option<f64>,
        /// Launch at radius * 10^-k for k = 1..=decades [default: 6]
        #[arg(long)]
        decades: Option<u32>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Transform { .. } => "transform",
            Command::Slide { .. } => "slide",
            Command::Simulate { .. } => "simulate",
            Command::Poincare { .. } => "poincare",
            Command::Bifurcate { .. } => "bifurcate",
            Command::Scenario2d { .. } => "scenario2d",
            Command::ProbeOrigin { .. } => "probe-origin",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Command::Classify { input }
            | Command::Transform { input }
            | Command::Slide { input }
            | Command::Simulate { input, .. }
            | Command::Poincare { input, .. }
            | Command::Bifurcate { input, .. }
            | Command::Scenario2d { input }
            | Command::ProbeOrigin { input, .. } => input,
        }
    }
}

/// Settings that a system file may carry in its `run` block.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunBlock {
    tol_event: Option<f64>,
    t_max: Option<f64>,
    transient: Option<usize>,
    keep: Option<usize>,
    escape_radius: Option<f64>,
    seed: Option<u64>,
    x0: Option<Vec<f64>>,
    z_min: Option<f64>,
    z_max: Option<f64>,
    points: Option<usize>,
    random_samples: Option<usize>,
    param: Option<String>,
    from: Option<f64>,
    to: Option<f64>,
    step: Option<f64>,
    z0: Option<f64>,
    radius: Option<f64>,
    decades: Option<u32>,
}

/// Shared numeric settings after resolution.
#[derive(Debug, Clone, Serialize)]
struct Resolved {
    sim: SimOptions,
    transient: usize,
    keep: usize,
    seed: u64,
}

fn resolve(g: &GlobalOpts, run: &RunBlock) -> Resolved {
    let defaults = SimOptions::default();
    let sweep = SweepOptions::default();
    Resolved {
        sim: SimOptions {
            tol_event: g.tol_event.or(run.tol_event).unwrap_or(defaults.tol_event),
            t_max: g.t_max.or(run.t_max).unwrap_or(defaults.t_max),
            escape_radius: g.escape_radius.or(run.escape_radius),
            ..defaults
        },
        transient: g.transient.or(run.transient).unwrap_or(sweep.transient),
        keep: g.keep.or(run.keep).unwrap_or(sweep.keep),
        seed: g.seed.or(run.seed).unwrap_or(0),
    }
}

struct Context {
    command: &'static str,
    input: String,
    model: ParsedSystem,
    run: RunBlock,
    opts: Resolved,
}

impl Context {
    fn meta(&self, extra: Value) -> Value {
        json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "input": self.input,
            "model": self.model.to_json(),
            "options": self.opts,
            "settings": extra,
        })
    }

    fn csv_header(&self, out: &mut dyn Write, extra: Value) -> Result<()> {
        writeln!(out, "# {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# input: {}", self.input)?;
        writeln!(out, "# model: {}", self.model.to_json())?;
        writeln!(out, "# options: {}", serde_json::to_string(&self.opts)?)?;
        writeln!(out, "# settings: {extra}")?;
        Ok(())
    }

    /// Normal form of the model; general systems are transformed first.
    fn normal_form(&self) -> Result<(NormalFormParams, Option<TransformRecord>)> {
        match &self.model {
            ParsedSystem::NormalForm(nf) => Ok((nf.clone(), None)),
            ParsedSystem::System { system, mu } => {
                let (nf, rec) = to_normal_form(system, *mu)?;
                Ok((nf, Some(rec)))
            }
        }
    }
}

/// Parses `std::env::args` and runs; the return value is the process exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut buf = Vec::new();
    match run(&cli, &mut buf) {
        Ok(()) => match io::stdout().lock().write_all(&buf) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
            _ => ExitCode::SUCCESS,
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    if e.is_degenerate() {
        2
    } else {
        1
    }
}

/// Runs one subcommand, writing the main output to `--output` or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let input = cli.command.input();
    let text = std::fs::read_to_string(input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let doc = parse_document(&text)?;
    let run: RunBlock = match doc.run {
        Some(v) => serde_json::from_value(v).map_err(|e| Error::Schema(format!("run block: {e}")))?,
        None => RunBlock::default(),
    };
    let ctx = Context {
        command: cli.command.name(),
        input: input.display().to_string(),
        model: doc.model,
        opts: resolve(&cli.global, &run),
        run,
    };
    let mut file;
    let out: &mut dyn Write = match &cli.global.output {
        Some(path) => {
            file = BufWriter::new(
                File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
            );
            &mut file
        }
        None => stdout,
    };
    match &cli.command {
        Command::Classify { .. } => classify(&ctx, out, cli.global.output.is_some()),
        Command::Transform { .. } => transform(&ctx, out),
        Command::Slide { .. } => slide(&ctx, out),
        Command::Simulate { x0, events, .. } => simulate(&ctx, out, x0.clone(), events.as_deref()),
        Command::Poincare {
            z_min,
            z_max,
            points,
            random_samples,
            fixed_points,
            ..
        } => poincare(
            &ctx,
            out,
            PoincareArgs {
                z_min: z_min.or(ctx.run.z_min),
                z_max: z_max.or(ctx.run.z_max),
                points: points.or(ctx.run.points),
                random_samples: random_samples.or(ctx.run.random_samples),
                fixed_points: fixed_points.as_deref(),
            },
        ),
        Command::Bifurcate {
            param,
            from,
            to,
            step,
            z0,
            touches,
            ..
        } => bifurcate(
            &ctx,
            out,
            BifurcateArgs {
                param: param.clone().or(ctx.run.param.clone()),
                from: from.or(ctx.run.from),
                to: to.or(ctx.run.to),
                step: step.or(ctx.run.step),
                z0: z0.or(ctx.run.z0),
                touches: *touches,
            },
        ),
        Command::Scenario2d { .. } => scenario2d(&ctx, out),
        Command::ProbeOrigin { radius, decades, .. } => {
            probe_origin(&ctx, out, radius.or(ctx.run.radius), decades.or(ctx.run.decades))
        }
    }?;
    out.flush()?;
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// The table goes to stdout; with `--output` the JSON goes to the file alone.
fn classify(ctx: &Context, out: &mut dyn Write, to_file: bool) -> Result<()> {
    let sys = ctx.model.system();
    let report = feigin_classify(&sys)?;
    let mu = ctx.model.mu();
    let equilibria = if mu != 0.0 {
        json!({
            "mu": mu,
            "xL": regular_equilibrium(&sys, mu)?,
            "xS": pseudo_equilibrium(&sys, mu)?,
        })
    } else {
        Value::Null
    };
    let table = report_table(&report);
    if to_file {
        io::stdout().write_all(table.as_bytes())?;
    } else {
        out.write_all(table.as_bytes())?;
    }
    write_json(
        out,
        &json!({ "meta": ctx.meta(Value::Null), "report": report, "equilibria": equilibria }),
    )
}

fn report_table(r: &BebReport) -> String {
    let fmt_opt = |v: Option<usize>| v.map_or("undecided".to_string(), |d| d.to_string());
    let rows = [
        ("n", r.n.to_string()),
        ("verdict", r.verdict.to_string()),
        ("N_L (real positive eig. of A)", r.n_l.to_string()),
        ("N_S (real positive eig. of Mtilde)", r.n_s.to_string()),
        ("D_L", fmt_opt(r.d_l)),
        ("D_S", fmt_opt(r.d_s)),
        ("sgn c1", r.c1_sign.to_string()),
        ("alpha_L", format!("{:.6e}", r.alpha_l)),
        ("alpha_S", format!("{:.6e}", r.alpha_s)),
        ("det A", format!("{:.6e}", r.det_a)),
        ("det Mtilde", format!("{:.6e}", r.det_m_tilde)),
    ];
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn transform(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let sys = ctx.model.system();
    let (nf, record) = to_normal_form(&sys, ctx.model.mu())?;
    let before = feigin_classify(&sys).ok().map(|r| r.verdict);
    let after = feigin_classify(&crate::model::embed(&nf)).ok().map(|r| r.verdict);
    write_json(
        out,
        &json!({
            "meta": ctx.meta(Value::Null),
            "normal_form": nf.to_json()["normal_form"],
            "transform": record,
            "verdict": { "original": before, "normal_form": after },
        }),
    )
}

fn slide(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let sys = ctx.model.system();
    let mu = ctx.model.mu();
    let s = scaled_sliding_system(&sys)?;
    let eig: Vec<[f64; 2]> = spectrum(&s.m_tilde)?
        .eigenvalues
        .iter()
        .map(|l| [l.re, l.im])
        .collect();
    let xs = pseudo_equilibrium(&sys, mu).ok();
    let c1 = sys.c1();
    let region = json!({
        "boundary": "F^L_1 = sum_{j>=2} A_1j x_j + b_1 mu = 0 on x1 = 0",
        "coefficients": &sys.a.row(0)[1..],
        "offset": sys.b[0] * mu,
        "sliding_side": if c1 < 0.0 { "F^L_1 > 0" } else { "F^L_1 < 0" },
        "type": if c1 < 0.0 { "attracting" } else { "repelling" },
        "crossing_side": if c1 < 0.0 { "F^L_1 < 0" } else { "F^L_1 > 0" },
    });
    write_json(
        out,
        &json!({
            "meta": ctx.meta(Value::Null),
            "M": s.m,
            "Mtilde": s.m_tilde,
            "forcing": s.forcing,
            "first_row_residual": s.first_row_residual(),
            "eigenvalues_Mtilde": eig,
            "pseudo_equilibrium": xs,
            "region": region,
        }),
    )
}

fn simulate(ctx: &Context, out: &mut dyn Write, x0: Option<Vec<f64>>, events: Option<&Path>) -> Result<()> {
    let x0 = x0
        .or(ctx.run.x0.clone())
        .ok_or_else(|| Error::Schema("simulate needs an initial state (--x0 or run.x0)".into()))?;
    let sys = ctx.model.system();
    let sim = &ctx.opts.sim;
    let traj = integrate(&sys, ctx.model.mu(), &x0, sim.t_max, sim)?;
    let termination = traj.termination().map(|k| format!("{k:?}"));
    let settings = json!({ "x0": x0, "termination": termination });
    ctx.csv_header(out, settings.clone())?;
    let n = sys.dim();
    let mut w = csv::Writer::from_writer(&mut *out);
    let mut head = vec!["t".to_string()];
    head.extend((1..=n).map(|i| format!("x{i}")));
    head.push("mode".into());
    w.write_record(&head)?;
    for seg in &traj.segments {
        for s in &seg.samples {
            let mut rec = vec![s.t.to_string()];
            rec.extend(s.x.iter().map(f64::to_string));
            rec.push(seg.mode.label().into());
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    drop(w);
    if let Some(path) = events {
        let mut f =
            BufWriter::new(File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?);
        ctx.csv_header(&mut f, settings)?;
        let mut w = csv::Writer::from_writer(&mut f);
        let mut head = vec!["t".to_string(), "kind".to_string()];
        head.extend((1..=n).map(|i| format!("x{i}")));
        w.write_record(&head)?;
        for e in &traj.events {
            let mut rec = vec![e.t.to_string(), format!("{:?}", e.kind)];
            rec.extend(e.x.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    Ok(())
}

struct PoincareArgs<'a> {
    z_min: Option<f64>,
    z_max: Option<f64>,
    points: Option<usize>,
    random_samples: Option<usize>,
    fixed_points: Option<&'a Path>,
}

fn poincare(ctx: &Context, out: &mut dyn Write, args: PoincareArgs) -> Result<()> {
    let (nf, record) = ctx.normal_form()?;
    let map = PoincareMap::new(&nf, &ctx.opts.sim)?;
    let (lo_default, hi_default) = if nf.dim() == 3 { (-3.5, -0.1) } else { (-2.0, 2.0) };
    let lo = args.z_min.unwrap_or(lo_default);
    let hi = args.z_max.unwrap_or(hi_default);
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Schema(format!("empty range z_min = {lo}, z_max = {hi}")));
    }
    let points = args.points.unwrap_or(FixedPointOptions::default().grid);
    let zs: Vec<f64> = match args.random_samples {
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
            (0..k).map(|_| rng.gen_range(lo..hi)).collect()
        }
        None => (0..points.max(2))
            .map(|i| lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64)
            .collect(),
    };
    let settings = json!({
        "z_min": lo, "z_max": hi, "points": points, "random_samples": args.random_samples,
        "normal_form": nf.to_json()["normal_form"], "transformed": record.is_some(),
    });
    ctx.csv_header(out, settings.clone())?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["z", "P(z)", "outcome"])?;
    for z in zs {
        let s = map.sample(z)?;
        let image = s.image.map_or(String::new(), |p| p.to_string());
        w.write_record([z.to_string(), image, s.outcome.label().to_string()])?;
    }
    w.flush()?;
    drop(w);
    if let Some(path) = args.fixed_points {
        let opts = FixedPointOptions {
            grid: points,
            ..FixedPointOptions::default()
        };
        let found = match fixed_points(&nf, (lo, hi), &ctx.opts.sim, &opts) {
            Ok(r) => r.fixed_points,
            Err(Error::NoBracket) => Vec::new(),
            Err(e) => return Err(e),
        };
        let mut f =
            BufWriter::new(File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?);
        ctx.csv_header(&mut f, settings)?;
        let mut w = csv::Writer::from_writer(&mut f);
        // the flight is the event sequence of one period, e.g. EnterSliding;ExitSliding
        w.write_record(["z", "multiplier", "period", "flight", "stable"])?;
        let map = PoincareMap::new(&nf, &ctx.opts.sim)?;
        for p in found {
            let s = map.sample(p.z)?;
            let flight: Vec<String> = s.events.iter().map(|e| format!("{e:?}")).collect();
            w.write_record([
                p.z.to_string(),
                p.multiplier.to_string(),
                s.time.to_string(),
                flight.join(";"),
                p.stable.to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

struct BifurcateArgs {
    param: Option<String>,
    from: Option<f64>,
    to: Option<f64>,
    step: Option<f64>,
    z0: Option<f64>,
    touches: bool,
}

fn bifurcate(ctx: &Context, out: &mut dyn Write, args: BifurcateArgs) -> Result<()> {
    let (nf, _) = ctx.normal_form()?;
    let param: SweepParameter = args.param.as_deref().unwrap_or("tau_S").parse()?;
    let missing = |what: &str| Error::Schema(format!("bifurcate needs --{what} (or run.{what})"));
    let from = args.from.ok_or_else(|| missing("from"))?;
    let to = args.to.ok_or_else(|| missing("to"))?;
    let step = args.step.ok_or_else(|| missing("step"))?;
    if step.is_nan() || step <= 0.0 || to.is_nan() || from.is_nan() || to < from {
        return Err(Error::Schema(format!(
            "bad sweep range from = {from}, to = {to}, step = {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| from + step * i as f64).collect();
    let opts = SweepOptions {
        z0: args.z0.unwrap_or(SweepOptions::default().z0),
        transient: ctx.opts.transient,
        keep: ctx.opts.keep,
        ..SweepOptions::default()
    };
    let result = sweep(&nf, param, &grid, &ctx.opts.sim, &opts)?;
    let gaps: Vec<Value> = result
        .points
        .iter()
        .filter_map(|p| {
            p.gap
                .map(|g| json!({ "param": p.value, "outcome": g.label(), "kept": p.iterates.len() }))
        })
        .collect();
    let near: Vec<f64> = result
        .points
        .iter()
        .filter(|p| p.near_origin)
        .map(|p| p.value)
        .collect();
    let touches = if args.touches {
        Some(boundary_touches(&nf, &result, &ctx.opts.sim, &opts, 0.02, 1e-7)?)
    } else {
        None
    };
    ctx.csv_header(
        out,
        json!({
            "param": param.to_string(), "from": from, "to": to, "step": step, "z0": opts.z0,
            "touch_tol": opts.touch_tol, "gaps": gaps, "near_origin": near, "touches": touches,
        }),
    )?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["param", "sample"])?;
    for p in &result.points {
        for z in &p.iterates {
            w.write_record([p.value.to_string(), z.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn scenario2d(ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let (nf, _) = ctx.normal_form()?;
    let TraceParams::Planar(p) = to_traces(&nf)? else {
        return Err(Error::Unsupported(format!(
            "scenario2d needs n = 2, got n = {}",
            nf.dim()
        )));
    };
    if nf.d1.value() > 0.0 {
        return Err(Error::Unsupported(
            "scenarios are tabulated for d_1 = -1; reverse time first".into(),
        ));
    }
    let scenario = classify_scenario_2d(p)?;
    let verdict = feigin_classify(&crate::model::embed(&nf)).ok().map(|r| r.verdict);
    writeln!(out, "{scenario}")?;
    write_json(
        out,
        &json!({
            "meta": ctx.meta(Value::Null),
            "scenario": scenario,
            "name": scenario.to_string(),
            "traces": { "tau_L": p.tau_l, "delta_L": p.delta_l, "d2": p.d2 },
            "verdict": verdict,
        }),
    )
}

fn probe_origin(ctx: &Context, out: &mut dyn Write, radius: Option<f64>, decades: Option<u32>) -> Result<()> {
    let (nf, _) = ctx.normal_form()?;
    let radius = radius.unwrap_or(1.0);
    let opts = ProbeOptions {
        decades: decades.unwrap_or(ProbeOptions::default().decades),
        ..ProbeOptions::default()
    };
    let report = origin_stability_probe(&nf, radius, &ctx.opts.sim, &opts)?;
    write_json(
        out,
        &json!({
            "meta": ctx.meta(json!({ "radius": radius, "probe": opts })),
            "verdict": report.verdict,
            "launches": report.launches,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_run_block() {
        let g = GlobalOpts {
            t_max: Some(5.0),
            ..GlobalOpts::default()
        };
        let run = RunBlock {
            t_max: Some(9.0),
            keep: Some(7),
            ..RunBlock::default()
        };
        let r = resolve(&g, &run);
        assert_eq!(r.sim.t_max, 5.0);
        assert_eq!(r.keep, 7);
        assert_eq!(r.transient, 500);
        assert_eq!(r.sim.tol_event, 1e-10);
    }

    #[test]
    fn negative_values_parse() {
        let cli =
            Cli::try_parse_from(["beb", "simulate", "f.json", "--x0", "-1,0.5,-2", "--t-max", "3"]).unwrap();
        let Command::Simulate { x0, .. } = cli.command else {
            panic!()
        };
        assert_eq!(x0, Some(vec![-1.0, 0.5, -2.0]));
        assert_eq!(cli.global.t_max, Some(3.0));
    }
}
