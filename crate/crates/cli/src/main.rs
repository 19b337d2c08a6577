//! `ptasep`: command-line front end for the ring TASEP distributions.
//!
//! Every command writes one JSON record (or CSV with a `#` manifest header)
//! to stdout or `--out`. Exit codes: 0 success, 1 verification failure,
//! 2 invalid input, 3 numerical non-convergence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ptasep_core::bethe::{solve_bethe_roots, RingGeometry, RootSolverConfig};
use ptasep_core::finite::{
    default_finite_scheme, joint_cdf_general, joint_cdf_step, mixed_event_prob_finite, mixed_radii, FiniteOptions,
    FiniteQuery, InitialCondition, ProbePoint, Sign,
};
use ptasep_core::limit::{
    default_limit_scheme, eval_f, eval_f_mixed, limit_roots_branches, LimitDistribution, LimitOptions, ScaledPoint,
    ScaledQuery,
};
use ptasep_core::numerics::{ContourScheme, Execution};
use ptasep_core::sim::{exact_cdf_small, mc_joint_cdf, simulate_path, ExactOptions, SimConfig};
use ptasep_core::verify::{run_suite, Suite, VerifyConfig};
use ptasep_core::{Complex64, Error};

#[derive(Parser)]
#[command(name = "ptasep", version, about = "Multi-point distributions of TASEP on a ring")]
struct Cli {
    /// Cap the worker pool at this many threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Evaluate on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    /// Embed the wall-clock time in the manifest (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timestamp: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bethe roots of w^N (w+1)^(L-N) = z^L, or the limit root lattice.
    Roots(RootsArgs),
    /// Finite-time joint distribution of tagged particle positions.
    FiniteCdf(FiniteArgs),
    /// Large-time limit distribution F, optionally swept over an x grid.
    LimitF(LimitArgs),
    /// Monte Carlo estimate of a joint event, or one exported trajectory.
    Simulate(SimulateArgs),
    /// Run a verification suite: identities | oracles | limit-props | l-independence | all.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long = "L", short = 'L')]
    l: Option<usize>,
    #[arg(long = "N", short = 'N')]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    z_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z_im: f64,
    /// Roots of e^(-zeta^2/2) = z instead of the finite Bethe equation.
    #[arg(long)]
    limit: bool,
    /// Branches k = -K..K of the limit lattice.
    #[arg(long, default_value_t = 5)]
    branches: usize,
}

#[derive(Args)]
struct FiniteArgs {
    #[arg(long = "L", short = 'L')]
    l: usize,
    #[arg(long = "N", short = 'N')]
    n: usize,
    /// Probe `k,a,t` for the event x_k(t) >= a; repeat for joint events.
    #[arg(long = "probe", allow_hyphen_values = true)]
    probes: Vec<String>,
    /// JSON file `{"points": [{"k":..,"a":..,"t":..}, ...]}` instead of --probe.
    #[arg(long)]
    query: Option<PathBuf>,
    /// One sign per probe: `-` for x >= a, `+` for x < a; the last must be `-`.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
    /// Initial positions `y_1,...,y_N` (default: step).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    initial: Option<Vec<i64>>,
    #[command(flatten)]
    contour: ContourArgs,
    /// Also estimate the event by simulation with this many samples.
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also solve the master equation exactly (small rings only).
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Serialize)]
struct ContourArgs {
    /// Contour radii, one per probe (default: the library defaults).
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Adaptive quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Starting nodes per circle.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    /// Cap on node doublings (default depends on the number of probes).
    #[arg(long)]
    max_doublings: Option<usize>,
}

#[derive(Args)]
struct LimitArgs {
    /// Probe `gamma,tau,x`; repeat for joint events.
    #[arg(long = "point", allow_hyphen_values = true)]
    points: Vec<String>,
    /// JSON file `{"points": [{"gamma":..,"tau":..,"x":..}, ...]}`.
    #[arg(long)]
    query: Option<PathBuf>,
    /// One sign per probe, as for finite-cdf.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
    /// Sweep the x of the last probe over `start:stop:step`; output is CSV.
    #[arg(long, allow_hyphen_values = true)]
    x_grid: Option<String>,
    #[command(flatten)]
    contour: ContourArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "L", short = 'L')]
    l: usize,
    #[arg(long = "N", short = 'N')]
    n: usize,
    #[arg(long = "probe", allow_hyphen_values = true)]
    probes: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    initial: Option<Vec<i64>>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Export the jump events of this sample index as CSV instead.
    #[arg(long)]
    trajectory: Option<u64>,
    /// Simulation horizon for --trajectory (default: the latest probe time).
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    /// Fewer Monte Carlo samples.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
}

/// Provenance embedded in every output.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    config: Value,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

struct Ctx {
    exec: Execution,
    timestamp: bool,
    out: Option<PathBuf>,
}

impl Ctx {
    fn manifest(&self, command: &str, config: Value) -> RunManifest {
        let timestamp = self.timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        RunManifest { command: command.into(), config, version: ptasep_core::VERSION, timestamp }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json(&self, manifest: RunManifest, result: impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": result }))?;
        text.push('\n');
        self.emit(&text)
    }

    fn emit_csv(&self, manifest: RunManifest, header: &str, rows: &[String]) -> Result<()> {
        let mut text = format!("# manifest: {}\n{header}\n", serde_json::to_string(&manifest)?);
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        self.emit(&text)
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Outcome {
    VerificationFailed,
    NotConverged(String),
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::VerificationFailed => write!(f, "verification failed"),
            Outcome::NotConverged(what) => write!(f, "quadrature did not converge: {what}"),
        }
    }
}

impl std::error::Error for Outcome {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(o) = err.downcast_ref::<Outcome>() {
        return match o {
            Outcome::VerificationFailed => 1,
            Outcome::NotConverged(_) => 3,
        };
    }
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence(_)) | Some(Error::Overflow(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidInput("--threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let ctx = Ctx {
        exec: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
        timestamp: cli.timestamp,
        out: cli.out,
    };
    match cli.command {
        Command::Roots(a) => cmd_roots(&ctx, a),
        Command::FiniteCdf(a) => cmd_finite_cdf(&ctx, a),
        Command::LimitF(a) => cmd_limit_f(&ctx, a),
        Command::Simulate(a) => cmd_simulate(&ctx, a),
        Command::Verify(a) => cmd_verify(&ctx, a),
    }
}

fn geometry(l: usize, n: usize) -> Result<RingGeometry> {
    Ok(RingGeometry::new(l, n)?)
}

fn parse_triple(s: &str, what: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!("{what} '{s}' needs three comma-separated values")).into());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| Error::InvalidInput(format!("{what} '{s}': '{p}' is not a number")))?;
    }
    Ok(out)
}

fn parse_int(v: f64, s: &str) -> Result<i64> {
    if v.fract() != 0.0 {
        return Err(Error::InvalidInput(format!("probe '{s}': k and a must be integers")).into());
    }
    Ok(v as i64)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())).into())
}

fn finite_query(probes: &[String], file: Option<&Path>) -> Result<FiniteQuery> {
    if let Some(path) = file {
        let q: FiniteQuery = read_json(path)?;
        return Ok(FiniteQuery::new(q.points)?);
    }
    if probes.is_empty() {
        return Err(Error::InvalidInput("give at least one --probe k,a,t or --query FILE".into()).into());
    }
    let points = probes
        .iter()
        .map(|s| {
            let [k, a, t] = parse_triple(s, "probe")?;
            Ok(ProbePoint { k: parse_int(k, s)?, a: parse_int(a, s)?, t })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteQuery::new(points)?)
}

fn scaled_query(points: &[String], file: Option<&Path>) -> Result<ScaledQuery> {
    if let Some(path) = file {
        let q: ScaledQuery = read_json(path)?;
        return Ok(ScaledQuery::new(q.points)?);
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("give at least one --point gamma,tau,x or --query FILE".into()).into());
    }
    let pts = points
        .iter()
        .map(|s| parse_triple(s, "point").map(|[gamma, tau, x]| ScaledPoint { gamma, tau, x }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledQuery::new(pts)?)
}

fn signs_for(spec: Option<&str>, m: usize) -> Result<Option<Vec<Sign>>> {
    let Some(s) = spec else { return Ok(None) };
    let signs = Sign::parse(s)?;
    if signs.len() != m {
        return Err(Error::InvalidInput(format!("{} signs for {m} probes", signs.len())).into());
    }
    Ok(Some(signs))
}

fn initial_condition(geom: RingGeometry, y: Option<Vec<i64>>) -> Result<InitialCondition> {
    Ok(match y {
        Some(y) => InitialCondition::new(geom, y)?,
        None => InitialCondition::step(geom),
    })
}

fn scheme_from(c: &ContourArgs, default: ContourScheme) -> ContourScheme {
    let radii = c.radii.clone().unwrap_or(default.radii);
    let max_doublings = c.max_doublings.unwrap_or(default.max_doublings);
    ContourScheme { max_doublings, ..ContourScheme::new(radii).with_tol(c.tol).with_nodes(c.nodes) }
}

fn not_converged(result_desc: &str, converged: bool) -> Result<()> {
    if converged {
        Ok(())
    } else {
        Err(Outcome::NotConverged(result_desc.into()).into())
    }
}

fn cmd_roots(ctx: &Ctx, a: RootsArgs) -> Result<()> {
    let z = Complex64::new(a.z_re, a.z_im);
    if a.limit {
        let set = limit_roots_branches(z, a.branches)?;
        let m = ctx.manifest("roots", json!({ "limit": true, "z": [a.z_re, a.z_im], "branches": a.branches }));
        return ctx.emit_json(m, set);
    }
    let (Some(l), Some(n)) = (a.l, a.n) else {
        return Err(Error::InvalidInput("--L and --N are required unless --limit is given".into()).into());
    };
    let geom = geometry(l, n)?;
    let solver = RootSolverConfig::default();
    let set = solve_bethe_roots(geom, z, &solver)?;
    let m = ctx.manifest("roots", json!({ "L": l, "N": n, "z": [a.z_re, a.z_im], "solver": solver }));
    ctx.emit_json(m, set)
}

#[derive(Serialize)]
struct FiniteReport {
    formula: ptasep_core::finite::DistributionResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<ptasep_core::sim::McEstimate>,
}

fn cmd_finite_cdf(ctx: &Ctx, a: FiniteArgs) -> Result<()> {
    let geom = geometry(a.l, a.n)?;
    let q = finite_query(&a.probes, a.query.as_deref())?;
    let signs = signs_for(a.signs.as_deref(), q.m())?;
    // formulas need time-ordered probes; signs travel with their probes
    let (q, perm) = q.canonical();
    let signs: Option<Vec<Sign>> = signs.map(|s| perm.iter().map(|&i| s[i]).collect());
    let y = initial_condition(geom, a.initial.clone())?;
    let opts = FiniteOptions { exec: ctx.exec, ..Default::default() };
    let all_minus = signs.as_ref().is_none_or(|s| s.iter().all(|&x| x == Sign::Minus));
    let formula = match (&signs, &a.initial) {
        (_, Some(_)) if !all_minus => {
            return Err(Error::InvalidInput("mixed signs are supported for the step initial condition only".into()).into())
        }
        (_, Some(_)) => joint_cdf_general(geom, &y, &q, &scheme_from(&a.contour, default_finite_scheme(geom, q.m())), &opts)?,
        (Some(s), None) if !all_minus => {
            let scheme = scheme_from(&a.contour, ContourScheme::new(mixed_radii(0.9 * geom.r0(), 0.85, s)));
            mixed_event_prob_finite(geom, &q, s, &scheme, &opts)?
        }
        _ => joint_cdf_step(geom, &q, &scheme_from(&a.contour, default_finite_scheme(geom, q.m())), &opts)?,
    };
    let exact = if a.exact { Some(exact_cdf_small(geom, &y, &q, signs.as_deref(), &ExactOptions::default())?) } else { None };
    let monte_carlo = match a.mc {
        Some(samples) => {
            let horizon = q.points.iter().map(|p| p.t).fold(0.0, f64::max);
            let cfg = SimConfig { geom, initial: y.clone(), horizon, seed: a.seed, samples };
            Some(mc_joint_cdf(&cfg, &q, signs.as_deref(), ctx.exec)?)
        }
        None => None,
    };
    let converged = formula.converged;
    let m = ctx.manifest(
        "finite-cdf",
        json!({
            "L": a.l, "N": a.n, "query": q, "signs": signs, "initial": y,
            "contour": a.contour, "mc_samples": a.mc, "seed": a.seed, "exact": a.exact,
        }),
    );
    ctx.emit_json(m, FiniteReport { formula, exact, monte_carlo })?;
    not_converged("finite-cdf", converged)
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("x grid '{s}' is not start:stop:step"))))
        .collect::<std::result::Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(Error::InvalidInput(format!("x grid '{s}' is not start:stop:step")).into());
    };
    if !(step > 0.0 && stop >= start) {
        return Err(Error::InvalidInput("x grid needs step > 0 and stop >= start".into()).into());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

fn cmd_limit_f(ctx: &Ctx, a: LimitArgs) -> Result<()> {
    let q = scaled_query(&a.points, a.query.as_deref())?;
    let signs = signs_for(a.signs.as_deref(), q.m())?;
    let opts = LimitOptions { exec: ctx.exec, ..Default::default() };
    let mixed = signs.as_ref().is_some_and(|s| s.contains(&Sign::Plus));
    let default = match &signs {
        Some(s) if mixed => ContourScheme::new(mixed_radii(0.8, 0.6, s)),
        _ => default_limit_scheme(q.m()),
    };
    let scheme = scheme_from(&a.contour, default);
    let eval = |q: &ScaledQuery| -> Result<LimitDistribution> {
        Ok(match &signs {
            Some(s) if mixed => eval_f_mixed(q, s, &scheme, &opts)?,
            _ => eval_f(q, &scheme, &opts)?,
        })
    };
    let config = json!({ "query": q, "signs": signs, "contour": a.contour, "x_grid": a.x_grid, "truncation": opts.truncation });
    let Some(grid) = a.x_grid.as_deref() else {
        let r = eval(&q)?;
        let converged = r.dist.converged;
        ctx.emit_json(ctx.manifest("limit-f", config), r)?;
        return not_converged("limit-f", converged);
    };
    let xs = parse_grid(grid)?;
    let mut rows = Vec::with_capacity(xs.len());
    let mut all_converged = true;
    for &x in &xs {
        let mut pts = q.points.clone();
        if let Some(last) = pts.last_mut() {
            last.x = x;
        }
        let r = eval(&ScaledQuery::new(pts)?)?;
        all_converged &= r.dist.converged;
        rows.push(format!("{x:.16e},{:.16e},{:.16e},{},{},{}", r.value(), r.dist.im_residue, r.dist.nodes, r.k_max, r.dist.converged));
    }
    ctx.emit_csv(ctx.manifest("limit-f", config), "x,value,im_residue,nodes,k_max,converged", &rows)?;
    not_converged("limit-f sweep", all_converged)
}

fn cmd_simulate(ctx: &Ctx, a: SimulateArgs) -> Result<()> {
    let geom = geometry(a.l, a.n)?;
    let y = initial_condition(geom, a.initial.clone())?;
    if let Some(index) = a.trajectory {
        let horizon = match a.horizon {
            Some(h) => h,
            None => finite_query(&a.probes, None)?.points.iter().map(|p| p.t).fold(0.0, f64::max),
        };
        let cfg = SimConfig { geom, initial: y, horizon, seed: a.seed, samples: 1 };
        let traj = simulate_path(&cfg, index)?;
        let rows: Vec<String> = traj.events.iter().map(|e| format!("{:.16e},{}", e.time, e.particle)).collect();
        let m = ctx.manifest("simulate", json!({ "L": a.l, "N": a.n, "initial": cfg.initial, "horizon": horizon, "seed": a.seed, "trajectory": index }));
        return ctx.emit_csv(m, "time,particle", &rows);
    }
    let q = finite_query(&a.probes, None)?;
    let signs = signs_for(a.signs.as_deref(), q.m())?;
    let horizon = q.points.iter().map(|p| p.t).fold(0.0, f64::max);
    let cfg = SimConfig { geom, initial: y, horizon, seed: a.seed, samples: a.samples };
    let est = mc_joint_cdf(&cfg, &q, signs.as_deref(), ctx.exec)?;
    let m = ctx.manifest("simulate", json!({ "L": a.l, "N": a.n, "query": q, "signs": signs, "initial": cfg.initial, "samples": a.samples, "seed": a.seed }));
    ctx.emit_json(m, est)
}

fn cmd_verify(ctx: &Ctx, a: VerifyArgs) -> Result<()> {
    let suite: Suite = a.suite.parse()?;
    let cfg = VerifyConfig { quick: a.quick, seed: a.seed, exec: ctx.exec };
    let outcomes = run_suite(suite, &cfg);
    for o in &outcomes {
        eprintln!("{}", o.line());
        if !o.passed {
            for note in &o.notes {
                eprintln!("    {note}");
            }
        }
    }
    let m = ctx.manifest("verify", json!({ "suite": suite, "config": cfg }));
    ctx.emit_json(m, &outcomes)?;
    if outcomes.iter().all(|o| o.passed) {
        Ok(())
    } else {
        Err(anyhow!(Outcome::VerificationFailed))
    }
}
