//! fracal: batch CLI for the fractional-calculus toolkit.
//!
//! One command per process; every run echoes its fully resolved
//! configuration into the output (CSV `# key=value` comments or the JSON
//! `config` object), so outputs are reproducible from themselves.
//!
//! Exit codes: 0 success, 2 usage/domain error, 3 model restriction,
//! 4 numerical failure.

mod parse;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracal::prelude::*;
use fracal::stability::Verdict;
use num_complex::Complex64;

use parse::{FallTime, Rhs};
use table::{fmt_float, Table};

#[derive(Parser)]
#[command(name = "fracal", version, about = "fractional calculus toolkit")]
struct Cli {
    /// JSON file supplying defaults for any flag (explicit flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Mittag-Leffler function E_{alpha,beta} on a list of points
    Ml(MlArgs),
    /// Apply a fractional integral or derivative to sampled CSV data
    Differint(DifferintArgs),
    /// Solve a fractional initial value problem
    Solve(SolveArgs),
    /// Convergence study of a solver against the analytic linear solution
    Convergence(ConvergenceArgs),
    /// Matignon stability classification and region sampling
    Stability(StabilityArgs),
    /// Tautochrone / Abel inversion
    Tautochrone(TautochroneArgs),
    /// Monte Carlo simulation of GBM / Heston / rough Heston
    Heston(HestonArgs),
}

#[derive(Args)]
struct MlArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated complex points, e.g. `1,-2,0.5+0.25i`
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

#[derive(Args)]
struct DifferintArgs {
    /// Input CSV with a t,value header
    #[arg(long)]
    input: Option<PathBuf>,
    /// Operator: I (integral), dC (Caputo), dRL (Riemann-Liouville), dGL (Grünwald-Letnikov)
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Quadrature rule for I: const (left endpoint) or linear (trapezoid)
    #[arg(long)]
    rule: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    /// Derivative kind: caputo or rl
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Right-hand side: linear:lambda=-1 | logistic:r=..,K=.. | poly:c0,c1,... | linsys:a11,a12;a21,a22
    #[arg(long)]
    rhs: Option<String>,
    /// Initial datum (comma-separated for systems); I_{1-alpha}v(0+) for rl
    #[arg(long, allow_hyphen_values = true)]
    datum: Option<String>,
    /// Step size; accepts the `2^-10` power form
    #[arg(long)]
    tau: Option<String>,
    /// Horizon
    #[arg(long = "T")]
    horizon: Option<f64>,
    /// Numerical method: explicit | implicit | adams
    #[arg(long)]
    method: Option<String>,
    /// Route linear problems to the closed-form solution
    #[arg(long)]
    analytic: bool,
    /// Forcing for analytic solves: const:c | poly:c0,c1,...
    #[arg(long)]
    forcing: Option<String>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u0: Option<f64>,
    #[arg(long = "T")]
    horizon: Option<f64>,
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated step sizes, e.g. `2^-6,2^-8,2^-10`
    #[arg(long)]
    taus: Option<String>,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// Derivative kind; only caputo has an implemented criterion
    #[arg(long)]
    kind: Option<String>,
    /// Square matrix CSV (headerless, d <= 8)
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Eigenvalue list `re,im;re,im;...`
    #[arg(long, allow_hyphen_values = true)]
    eig: Option<String>,
    /// Sample the stability region: `re0:re1:n,im0:im1:m`
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Cross-validate each verdict with the Mittag-Leffler decay probe
    #[arg(long)]
    probe: bool,
}

#[derive(Args)]
struct TautochroneArgs {
    /// Fall-time profile: const:k | sqrt:c | table:<csv>
    #[arg(long = "T")]
    fall_time: Option<String>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    ymax: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct HestonArgs {
    /// Model: rough | classical | gbm
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Volatility of volatility (defaults to kappa, the single-coefficient form)
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    #[arg(long)]
    v0: Option<f64>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Step size; accepts the `2^-10` power form
    #[arg(long)]
    tau: Option<String>,
    #[arg(long = "T")]
    horizon: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dump simulated paths (long format: path,t,v,s) to this file
    #[arg(long)]
    dump_paths: Option<PathBuf>,
    /// How many paths to dump
    #[arg(long)]
    dump_limit: Option<usize>,
}

// ---------------------------------------------------------------------------

enum CliError {
    Usage(String),
    Core(fracal::Error),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                fracal::Error::Domain(_)
                | fracal::Error::NonPositiveIntegerPole(_)
                | fracal::Error::DegenerateGrid(_)
                | fracal::Error::InconsistentArcLength { .. } => 2,
                fracal::Error::ModelRestriction(_) => 3,
                _ => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<fracal::Error> for CliError {
    fn from(e: fracal::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Flag/config resolution: explicit flags win, then the JSON config file.
struct Ctx {
    cfg: serde_json::Map<String, serde_json::Value>,
    out: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn load(cli: &Cli) -> CliResult<Ctx> {
        let cfg = match &cli.config {
            None => serde_json::Map::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                match serde_json::from_str::<serde_json::Value>(&text) {
                    Ok(serde_json::Value::Object(map)) => map,
                    Ok(_) => return Err(usage("config file must hold a JSON object")),
                    Err(e) => return Err(usage(format!("bad config JSON: {e}"))),
                }
            }
        };
        Ok(Ctx {
            cfg,
            out: cli.out.clone(),
            format: cli.format,
        })
    }

    fn f64(&self, flag: Option<f64>, key: &str) -> Option<f64> {
        flag.or_else(|| self.cfg.get(key).and_then(|v| v.as_f64()))
    }

    fn usize(&self, flag: Option<usize>, key: &str) -> Option<usize> {
        flag.or_else(|| self.cfg.get(key).and_then(json_u64).map(|v| v as usize))
    }

    fn u64(&self, flag: Option<u64>, key: &str) -> Option<u64> {
        flag.or_else(|| self.cfg.get(key).and_then(json_u64))
    }

    fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| {
            self.cfg.get(key).and_then(|v| match v {
                serde_json::Value::String(s) => Some(s.clone()),
                serde_json::Value::Number(n) => Some(n.to_string()),
                _ => None,
            })
        })
    }

    fn emit(&self, t: &Table) -> CliResult<()> {
        let mut sink: Box<dyn Write> = match &self.out {
            Some(path) => Box::new(std::fs::File::create(path)?),
            None => Box::new(std::io::stdout().lock()),
        };
        match self.format {
            Format::Csv => t.write_csv(&mut sink)?,
            Format::Json => t.write_json(&mut sink)?,
        }
        Ok(())
    }
}

/// Counts may arrive as JSON integers or as integral floats (the config
/// echo stores every numeric as a float).
fn json_u64(v: &serde_json::Value) -> Option<u64> {
    v.as_u64().or_else(|| {
        v.as_f64()
            .filter(|x| x.fract() == 0.0 && *x >= 0.0 && *x < u64::MAX as f64)
            .map(|x| x as u64)
    })
}

fn req<T>(v: Option<T>, key: &str) -> CliResult<T> {
    v.ok_or_else(|| usage(format!("missing required parameter --{key} (flag or config)")))
}

fn order(alpha: f64) -> CliResult<FracOrder<f64>> {
    Ok(FracOrder::new(alpha)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // downstream consumers (head, less) closing the pipe is not an error
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Ctx::load(cli)?;
    match &cli.command {
        Command::Ml(a) => cmd_ml(&ctx, a),
        Command::Differint(a) => cmd_differint(&ctx, a),
        Command::Solve(a) => cmd_solve(&ctx, a),
        Command::Convergence(a) => cmd_convergence(&ctx, a),
        Command::Stability(a) => cmd_stability(&ctx, a),
        Command::Tautochrone(a) => cmd_tautochrone(&ctx, a),
        Command::Heston(a) => cmd_heston(&ctx, a),
    }
}

// ---------------------------------------------------------------------------

fn cmd_ml(ctx: &Ctx, a: &MlArgs) -> CliResult<()> {
    let alpha = req(ctx.f64(a.alpha, "alpha"), "alpha")?;
    let beta = req(ctx.f64(a.beta, "beta"), "beta")?;
    let zs = parse::complex_list(&req(ctx.string(a.z.clone(), "z"), "z")?).map_err(usage)?;
    let params = MLParams::new(alpha, beta)?;
    let all_real = zs.iter().all(|z| z.im == 0.0);

    let mut t = Table::new("ml");
    t.meta("alpha", alpha).meta("beta", beta);
    if all_real {
        t.columns(&["z", "re", "im"]);
    } else {
        t.columns(&["z_re", "z_im", "re", "im"]);
    }
    for z in zs {
        let v = mittag_leffler(params, z)?;
        if all_real {
            t.row(vec![z.re, v.re, v.im]);
        } else {
            t.row(vec![z.re, z.im, v.re, v.im]);
        }
    }
    ctx.emit(&t)
}

fn cmd_differint(ctx: &Ctx, a: &DifferintArgs) -> CliResult<()> {
    let input = req(
        a.input
            .clone()
            .or_else(|| ctx.cfg.get("input").and_then(|v| v.as_str()).map(Into::into)),
        "input",
    )?;
    let op = req(ctx.string(a.op.clone(), "op"), "op")?;
    let alpha = req(ctx.f64(a.alpha, "alpha"), "alpha")?;
    let rule = ctx.string(a.rule.clone(), "rule").unwrap_or_else(|| "const".into());
    let f = parse::read_samples_csv(input.to_str().unwrap_or_default()).map_err(usage)?;
    let grid = f.grid();
    let ord = order(alpha)?;

    let values: Vec<f64> = match op.to_ascii_lowercase().as_str() {
        "i" => {
            let quad = match rule.as_str() {
                "const" => fracal::operators::QuadRule::PiecewiseConstant,
                "linear" => fracal::operators::QuadRule::PiecewiseLinear,
                other => return Err(usage(format!("unknown rule {other:?}"))),
            };
            fracal::operators::frac_integral_num_rule(&f, ord, quad)?
                .values()
                .to_vec()
        }
        "dc" => caputo_derivative_num(&f, ord)?.values().to_vec(),
        "drl" => rl_derivative_num(&f, ord)?.values().to_vec(),
        "dgl" => {
            let vals = f.values().to_vec();
            let tau = grid.tau();
            let mut out = vec![f64::NAN; grid.node_count()];
            let sample = move |t: f64| vals[(t / tau).round() as usize];
            for n in 1..grid.node_count() {
                out[n] = gl_derivative(&sample, grid.t(n), ord, n)?;
            }
            out
        }
        other => return Err(usage(format!("unknown op {other:?}; expected I, dC, dRL or dGL"))),
    };

    let mut t = Table::new("differint");
    t.meta("op", &op)
        .meta("alpha", alpha)
        .meta("tau", fmt_float(grid.tau()))
        .meta("n", grid.n_steps());
    t.columns(&["t", "value"]);
    for (k, v) in values.iter().enumerate() {
        t.row(vec![grid.t(k), *v]);
    }
    ctx.emit(&t)
}

fn parse_kind(s: &str) -> CliResult<DerivKind> {
    match s.to_ascii_lowercase().as_str() {
        "caputo" => Ok(DerivKind::Caputo),
        "rl" | "riemann-liouville" => Ok(DerivKind::RiemannLiouville),
        other => Err(usage(format!("unknown kind {other:?}; expected caputo or rl"))),
    }
}

fn cmd_solve(ctx: &Ctx, a: &SolveArgs) -> CliResult<()> {
    let kind = parse_kind(&ctx.string(a.kind.clone(), "kind").unwrap_or_else(|| "caputo".into()))?;
    let alpha = req(ctx.f64(a.alpha, "alpha"), "alpha")?;
    let tau = parse::float(&req(ctx.string(a.tau.clone(), "tau"), "tau")?).map_err(usage)?;
    let horizon = req(ctx.f64(a.horizon, "T"), "T")?;
    let rhs_spec = req(ctx.string(a.rhs.clone(), "rhs"), "rhs")?;
    let datum_spec = req(ctx.string(a.datum.clone(), "datum"), "datum")?;
    let datum = parse::float_list(&datum_spec).map_err(usage)?;
    let grid = UniformGrid::from_horizon(tau, horizon)?;
    let analytic = a.analytic || ctx.cfg.get("analytic").and_then(|v| v.as_bool()).unwrap_or(false);
    let ord = order(alpha)?;

    let mut t = Table::new("solve");
    t.meta("kind", kind)
        .meta("alpha", alpha)
        .meta("tau", fmt_float(tau))
        .meta("T", fmt_float(horizon))
        .meta("rhs", &rhs_spec)
        .meta("datum", &datum_spec);

    let path: SolutionPath<f64> = if analytic {
        let lambda = match Rhs::parse(&rhs_spec).map_err(usage)? {
            Rhs::Linear { lambda } => lambda,
            _ => {
                return Err(usage(
                    "--analytic needs a linear:lambda=... right-hand side",
                ))
            }
        };
        if datum.len() != 1 {
            return Err(usage("--analytic solves scalar problems"));
        }
        t.meta("method", "analytic");
        let forcing_spec = ctx.string(a.forcing.clone(), "forcing");
        let problem = match &forcing_spec {
            None => LinearProblem::homogeneous(kind, ord, lambda, datum[0]),
            Some(spec) => {
                t.meta("forcing", spec);
                LinearProblem::forced(
                    kind,
                    ord,
                    lambda,
                    datum[0],
                    Forcing::Func(parse::forcing(spec).map_err(usage)?),
                )
            }
        };
        match kind {
            DerivKind::Caputo => solve_caputo_forced(&problem, &grid)?,
            DerivKind::RiemannLiouville => solve_rl_forced(&problem, &grid)?,
        }
    } else {
        let method = req(ctx.string(a.method.clone(), "method"), "method")?;
        t.meta("method", &method);
        let rhs = Rhs::parse(&rhs_spec).map_err(usage)?;
        if datum.len() != rhs.dim() {
            return Err(usage(format!(
                "datum dimension {} does not match rhs dimension {}",
                datum.len(),
                rhs.dim()
            )));
        }
        let eval = rhs.eval();
        let ivp = FracIVP::new(kind, ord, datum, horizon, eval);
        match method.as_str() {
            "explicit" => solve_explicit_euler(&ivp, &grid)?,
            "implicit" => solve_implicit_euler(&ivp, &grid)?,
            "adams" => solve_adams_pc(&ivp, &grid)?,
            other => {
                return Err(usage(format!(
                    "unknown method {other:?}; expected explicit, implicit or adams"
                )))
            }
        }
    };

    let d = path.dim();
    let mut cols: Vec<String> = vec!["t".into()];
    for i in 1..=d {
        cols.push(format!("u_{i}"));
    }
    t.columns(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    for n in 0..grid.node_count() {
        let mut row = vec![grid.t(n)];
        row.extend_from_slice(path.state(n));
        t.row(row);
    }
    ctx.emit(&t)
}

fn cmd_convergence(ctx: &Ctx, a: &ConvergenceArgs) -> CliResult<()> {
    let alpha = req(ctx.f64(a.alpha, "alpha"), "alpha")?;
    let lambda = req(ctx.f64(a.lambda, "lambda"), "lambda")?;
    let u0 = ctx.f64(a.u0, "u0").unwrap_or(1.0);
    let horizon = ctx.f64(a.horizon, "T").unwrap_or(1.0);
    let method = req(ctx.string(a.method.clone(), "method"), "method")?;
    let taus = parse::float_list(&req(ctx.string(a.taus.clone(), "taus"), "taus")?).map_err(usage)?;
    if taus.is_empty() {
        return Err(usage("--taus must list at least one step size"));
    }
    let ord = order(alpha)?;

    let mut t = Table::new("convergence");
    t.meta("alpha", alpha)
        .meta("lambda", lambda)
        .meta("u0", u0)
        .meta("T", horizon)
        .meta("method", &method);
    t.columns(&["tau", "sup_error", "observed_order"]);

    let mut prev: Option<(f64, f64)> = None;
    for &tau in &taus {
        let grid = UniformGrid::from_horizon(tau, horizon)?;
        let oracle = solve_caputo_homogeneous(
            &LinearProblem::homogeneous(DerivKind::Caputo, ord, lambda, u0),
            &grid,
        )?;
        let ivp = FracIVP::scalar(DerivKind::Caputo, ord, u0, horizon, move |_t, u| lambda * u);
        let path = match method.as_str() {
            "explicit" => solve_explicit_euler(&ivp, &grid)?,
            "implicit" => solve_implicit_euler(&ivp, &grid)?,
            "adams" => solve_adams_pc(&ivp, &grid)?,
            other => {
                return Err(usage(format!(
                    "unknown method {other:?}; expected explicit, implicit or adams"
                )))
            }
        };
        let sup = path
            .scalar_values()
            .iter()
            .zip(oracle.scalar_values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let observed = match prev {
            Some((ptau, perr)) if ptau > tau => (perr / sup).log2() / (ptau / tau).log2(),
            _ => f64::NAN,
        };
        t.row(vec![tau, sup, observed]);
        prev = Some((tau, sup));
    }
    ctx.emit(&t)
}

fn cmd_stability(ctx: &Ctx, a: &StabilityArgs) -> CliResult<()> {
    let alpha = req(ctx.f64(a.alpha, "alpha"), "alpha")?;
    let kind = parse_kind(&ctx.string(a.kind.clone(), "kind").unwrap_or_else(|| "caputo".into()))?;
    if kind == DerivKind::RiemannLiouville {
        return Err(CliError::Core(fracal::Error::ModelRestriction(
            "only the Caputo sector condition is implemented; the Riemann-Liouville \
             stability criterion is deliberately unsupported"
                .to_string(),
        )));
    }
    let ord = order(alpha)?;

    if let Some(region) = ctx.string(a.region.clone(), "region") {
        let (re_ax, im_ax) = parse::region(&region).map_err(usage)?;
        let mask = stability_region_sample(ord, re_ax, im_ax)?;
        let mut t = Table::new("stability-region");
        t.meta("alpha", alpha).meta("region", &region);
        t.columns(&["re", "im", "stable"]);
        for (i, &im) in mask.ims.iter().enumerate() {
            for (r, &re) in mask.res.iter().enumerate() {
                let stable = mask.mask[i * mask.res.len() + r];
                t.row(vec![re, im, if stable { 1.0 } else { 0.0 }]);
            }
        }
        return ctx.emit(&t);
    }

    let eigenvalues: Vec<Complex64> = if let Some(path) = a
        .matrix
        .clone()
        .or_else(|| ctx.cfg.get("matrix").and_then(|v| v.as_str()).map(Into::into))
    {
        let m = parse::read_matrix_csv(path.to_str().unwrap_or_default()).map_err(usage)?;
        let report = classify_system(ord, &m)?;
        report.eigenvalues
    } else if let Some(spec) = ctx.string(a.eig.clone(), "eig") {
        parse::eig_list(&spec).map_err(usage)?
    } else {
        return Err(usage("stability needs --matrix, --eig or --region"));
    };

    // per-eigenvalue verdicts + aggregated system verdict as a JSON report
    let mut rows = Vec::new();
    let mut system = Verdict::Stable;
    for lambda in &eigenvalues {
        let v = matignon_check(ord, *lambda)?;
        if v == Verdict::Unstable {
            system = Verdict::Unstable;
        } else if v == Verdict::Marginal && system == Verdict::Stable {
            system = Verdict::Marginal;
        }
        let probe = if a.probe {
            let p = ml_decay_probe(ord, *lambda, 30.0)?;
            Some(serde_json::json!({
                "decays": p.decays,
                "achieved_t": p.achieved_t,
            }))
        } else {
            None
        };
        let mut row = serde_json::json!({
            "re": lambda.re,
            "im": lambda.im,
            "verdict": v.to_string(),
        });
        if let Some(p) = probe {
            row["probe"] = p;
        }
        rows.push(row);
    }
    let doc = serde_json::json!({
        "config": {
            "tool": format!("fracal {}", env!("CARGO_PKG_VERSION")),
            "command": "stability",
            "alpha": alpha,
        },
        "eigenvalues": rows,
        "system": system.to_string(),
    });
    let mut sink: Box<dyn Write> = match &ctx.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(sink, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

fn cmd_tautochrone(ctx: &Ctx, a: &TautochroneArgs) -> CliResult<()> {
    let spec = req(ctx.string(a.fall_time.clone(), "T"), "T")?;
    let g = ctx.f64(a.g, "g").unwrap_or(9.81);
    let fall = parse::fall_time(&spec).map_err(usage)?;

    let (problem, meta_n, meta_ymax): (AbelProblem<f64>, usize, f64) = match fall {
        FallTime::Const(k) => {
            let ymax = req(ctx.f64(a.ymax, "ymax"), "ymax")?;
            let n = ctx.usize(a.n, "n").unwrap_or(1 << 12);
            (AbelProblem::new(move |_| k, g, ymax, n)?, n, ymax)
        }
        FallTime::Sqrt(c) => {
            let ymax = req(ctx.f64(a.ymax, "ymax"), "ymax")?;
            let n = ctx.usize(a.n, "n").unwrap_or(1 << 12);
            (
                AbelProblem::new(move |y: f64| c * y.sqrt(), g, ymax, n)?,
                n,
                ymax,
            )
        }
        FallTime::Table(samples) => {
            let grid = samples.grid();
            let vals = samples.values().to_vec();
            let tau = grid.tau();
            let n = grid.n_steps();
            let ymax = grid.horizon();
            let lookup = move |y: f64| vals[(y / tau).round() as usize];
            (AbelProblem::new(lookup, g, ymax, n)?, n, ymax)
        }
    };

    let s = solve_abel(&problem)?;
    let psi = curve_from_arclength(&s)?;
    let grid = s.grid();

    let mut t = Table::new("tautochrone");
    t.meta("fall_time", &spec)
        .meta("g", g)
        .meta("ymax", fmt_float(meta_ymax))
        .meta("n", meta_n);
    t.columns(&["y", "s", "psi"]);
    for k in 0..grid.node_count() {
        t.row(vec![grid.t(k), s.value(k), psi.value(k)]);
    }
    ctx.emit(&t)
}

fn cmd_heston(ctx: &Ctx, a: &HestonArgs) -> CliResult<()> {
    let model = ctx.string(a.model.clone(), "model").unwrap_or_else(|| "rough".into());
    let kappa = req(ctx.f64(a.kappa, "kappa"), "kappa")?;
    let theta = req(ctx.f64(a.theta, "theta"), "theta")?;
    let v0 = req(ctx.f64(a.v0, "v0"), "v0")?;
    let alpha = ctx.f64(a.alpha, "alpha").unwrap_or(1.0);
    let xi = ctx.f64(a.xi, "xi").unwrap_or(kappa);
    let rho = ctx.f64(a.rho, "rho").unwrap_or(0.0);
    let s0 = ctx.f64(a.s0, "s0").unwrap_or(100.0);
    let mu = ctx.f64(a.mu, "mu").unwrap_or(0.0);
    let tau = parse::float(&req(ctx.string(a.tau.clone(), "tau"), "tau")?).map_err(usage)?;
    let horizon = req(ctx.f64(a.horizon, "T"), "T")?;
    let paths = ctx.usize(a.paths, "paths").unwrap_or(1000);
    let seed = ctx.u64(a.seed, "seed").unwrap_or(0);
    let dump_limit = ctx.usize(a.dump_limit, "dump_limit").unwrap_or(16);

    let params = RoughHestonParams::new(v0, kappa, theta, xi, alpha, rho, s0, mu)?;
    let grid = UniformGrid::from_horizon(tau, horizon)?;
    let run = McRun::new(params, grid, paths, seed)?;

    let dump = a
        .dump_paths
        .clone()
        .or_else(|| ctx.cfg.get("dump_paths").and_then(|v| v.as_str()).map(Into::into));

    let (stats, kept) = match model.as_str() {
        "rough" => {
            let keep = if dump.is_some() { dump_limit.min(paths) } else { 0 };
            fracal::roughheston::simulate_rough_heston_with_paths(&run, keep)?
        }
        "classical" => (simulate_classical_heston(&run)?, Vec::new()),
        "gbm" => (simulate_gbm(&run)?, Vec::new()),
        other => {
            return Err(usage(format!(
                "unknown model {other:?}; expected rough, classical or gbm"
            )))
        }
    };

    if let Some(path) = dump {
        if kept.is_empty() && model != "rough" {
            return Err(usage("--dump-paths is only supported for the rough model"));
        }
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "# tool=fracal {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(f, "# command=heston-dump seed={seed} paths={}", kept.len())?;
        writeln!(f, "path,t,v,s")?;
        for (p, sample) in kept.iter().enumerate() {
            for k in 0..grid.node_count() {
                writeln!(
                    f,
                    "{p},{},{},{}",
                    fmt_float(grid.t(k)),
                    fmt_float(sample.v[k]),
                    fmt_float(sample.s[k])
                )?;
            }
        }
    }

    let mut t = Table::new("heston");
    t.meta("model", &model)
        .meta("alpha", alpha)
        .meta("kappa", kappa)
        .meta("theta", theta)
        .meta("xi", xi)
        .meta("rho", rho)
        .meta("v0", v0)
        .meta("s0", s0)
        .meta("mu", mu)
        .meta("tau", fmt_float(tau))
        .meta("T", fmt_float(horizon))
        .meta("paths", paths)
        .meta("seed", seed);
    t.columns(&["t", "mean_V", "sd_V", "mean_S", "sd_S"]);
    for k in 0..grid.node_count() {
        t.row(vec![
            grid.t(k),
            stats.v.mean[k],
            stats.v.sd[k],
            stats.s.mean[k],
            stats.s.sd[k],
        ]);
    }
    ctx.emit(&t)
}
