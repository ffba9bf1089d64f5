//! Command-line front end: load a map (built-in catalog or map-spec JSON),
//! run the classification / rate / Koenigs / norm pipelines, and emit
//! machine-readable reports (canonical JSON) or plot-ready series (CSV).

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hpdyn::catalog;
use hpdyn::criteria;
use hpdyn::disc::{self, Space};
use hpdyn::geometry::DiscBoundaryPoint;
use hpdyn::koenigs;
use hpdyn::mapspec::MapSpec;
use hpdyn::orbit::{self, ShiftClass, StepVerdict};
use hpdyn::{Config, Error, HerglotzTriplet, UpperHalfPoint};

#[derive(Parser)]
#[command(name = "hpdyn", version, about = "Dynamics of holomorphic self-maps of the upper half-plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a map: hyperbolic / parabolic step / shift, with evidence.
    Classify(RunArgs),
    /// Run every extremal-rate route and emit the consolidated report.
    Rate(RunArgs),
    /// Evaluate the Koenigs approximant on a grid with Abel residuals.
    Koenigs(KoenigsArgs),
    /// Composition-operator norm-growth sandwich on Hardy or Bergman spaces.
    Norms(RunArgs),
    /// Verify the quantitative lemma suites on their full parameter grids.
    Criteria(CriteriaArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Hardy,
    Bergman,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected RE,IM, got '{s}'"));
    }
    let re = parts[0].trim().parse().map_err(|e| format!("bad RE: {e}"))?;
    let im = parts[1].trim().parse().map_err(|e| format!("bad IM: {e}"))?;
    Ok((re, im))
}

#[derive(Args)]
struct RunArgs {
    /// Built-in catalog map name.
    #[arg(long, conflicts_with = "spec")]
    catalog: Option<String>,
    /// Path to a map-spec JSON document.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Iteration budget (defaults: 1e3 hyperbolic, 1e5 parabolic,
    /// or the catalog entry's own override).
    #[arg(long)]
    budget: Option<usize>,
    /// Quadrature relative tolerance for map evaluation.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Fail with exit code 3 when a verdict stays undetermined.
    #[arg(long)]
    strict: bool,
    /// Base point RE,IM (repeatable).
    #[arg(long = "base", value_parser = parse_pair)]
    base: Vec<(f64, f64)>,
    /// Disc-side Denjoy-Wolff anchor RE,IM (unimodular).
    #[arg(long, value_parser = parse_pair, default_value = "1,0")]
    tau: (f64, f64),
    /// Integrability exponent of the function space.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, value_enum, default_value_t = SpaceArg::Hardy)]
    space: SpaceArg,
}

#[derive(Args)]
struct KoenigsArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Use the Pommerenke construction (parabolic positive step).
    #[arg(long)]
    pommerenke: bool,
}

#[derive(Args)]
struct CriteriaArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Sample count for the randomized cone check.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// RNG seed for the randomized cone check.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

struct ResolvedMap {
    name: String,
    triplet: HerglotzTriplet,
    catalog_budget: Option<usize>,
}

fn resolve_map(args: &RunArgs) -> Result<ResolvedMap, Error> {
    match (&args.catalog, &args.spec) {
        (Some(name), None) => {
            let entry = catalog::find(name)?;
            Ok(ResolvedMap {
                name: entry.name.to_string(),
                triplet: entry.triplet,
                catalog_budget: entry.budget,
            })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Spec(format!("cannot read {}: {e}", path.display())))?;
            let spec = MapSpec::from_json(&text)?;
            Ok(ResolvedMap {
                name: path.display().to_string(),
                triplet: spec.to_triplet()?,
                catalog_budget: None,
            })
        }
        _ => Err(Error::Spec(
            "exactly one of --catalog NAME or --spec PATH is required".into(),
        )),
    }
}

fn resolve_config(args: &RunArgs, map: &ResolvedMap) -> Config {
    let mut cfg = Config::default();
    if let Some(tol) = args.tol {
        cfg.eval_quad.rel_tol = tol;
    }
    if let Some(b) = args.budget.or(map.catalog_budget) {
        cfg.hyperbolic_budget = b.min(100_000);
        cfg.parabolic_budget = b;
    }
    cfg
}

fn base_points(args: &RunArgs) -> Result<Vec<UpperHalfPoint>, Error> {
    if args.base.is_empty() {
        return Ok(vec![UpperHalfPoint::i()]);
    }
    args.base
        .iter()
        .map(|&(re, im)| UpperHalfPoint::new(re, im))
        .collect()
}

fn config_value(command: &str, args: &RunArgs, cfg: &Config) -> Value {
    json!({
        "command": command,
        "map": args.catalog.clone().unwrap_or_else(|| {
            args.spec.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
        }),
        "budget_hyperbolic": cfg.hyperbolic_budget,
        "budget_parabolic": cfg.parabolic_budget,
        "eval_rel_tol": cfg.eval_quad.rel_tol,
        "limit_atol": cfg.limit.atol,
        "limit_rtol": cfg.limit.rtol,
        "strict": args.strict,
        "base": args.base.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "tau": [args.tau.0, args.tau.1],
        "p": args.p,
        "space": match args.space { SpaceArg::Hardy => "hardy", SpaceArg::Bergman => "bergman" },
    })
}

fn with_header(command: &str, config: Value, result: Value) -> Value {
    json!({
        "header": {
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": report::config_hash(&config),
            "config": config,
        },
        "result": result,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Spec(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Undetermined / drift-zero failures are reported, not fatal, unless
/// `--strict` asked for exit code 3.
enum Soft<T> {
    Value(T),
    Undetermined(String),
}

fn soften<T>(r: Result<T, Error>) -> Result<Soft<T>, Error> {
    match r {
        Ok(v) => Ok(Soft::Value(v)),
        Err(Error::Undetermined(msg)) => Ok(Soft::Undetermined(msg)),
        Err(e) => Err(e),
    }
}

fn cmd_classify(args: &RunArgs) -> Result<(Value, bool), Error> {
    let map = resolve_map(args)?;
    let cfg = resolve_config(args, &map);
    let mut undetermined = false;

    let mut result = json!({
        "map": map.name,
        "alpha": map.triplet.alpha(),
    });
    let obj = result.as_object_mut().unwrap();
    match map.triplet.classify() {
        hpdyn::MapClass::NotDenjoyWolffInfinity => {
            obj.insert("class".into(), json!("not_denjoy_wolff_infinity"));
        }
        hpdyn::MapClass::Hyperbolic { .. } => {
            obj.insert("class".into(), json!("hyperbolic"));
            let orb = orbit::iterate(&map.triplet, &UpperHalfPoint::i(), cfg.hyperbolic_budget, &cfg)?;
            match orbit::orbit_angle(&orb, &cfg) {
                Ok(orbit::AngleVerdict::Interior(t)) => {
                    obj.insert("theta".into(), json!(t));
                }
                Ok(orbit::AngleVerdict::Tangential) => {
                    obj.insert("theta".into(), json!("tangential"));
                }
                Err(_) => {
                    obj.insert("theta".into(), json!("undetermined"));
                    undetermined = true;
                }
            }
        }
        hpdyn::MapClass::ParabolicCandidate => {
            obj.insert("class".into(), json!("parabolic"));
            let orb = orbit::iterate(&map.triplet, &UpperHalfPoint::i(), cfg.parabolic_budget, &cfg)?;
            match soften(orbit::hyperbolic_step(&orb))? {
                Soft::Value(StepVerdict::Positive(v)) => {
                    obj.insert("step".into(), json!("positive"));
                    obj.insert("step_limit".into(), json!(v));
                }
                Soft::Value(StepVerdict::Zero) => {
                    obj.insert("step".into(), json!("zero"));
                }
                Soft::Undetermined(msg) => {
                    obj.insert("step".into(), json!("undetermined"));
                    obj.insert("step_detail".into(), json!(msg));
                    undetermined = true;
                }
            }
            match soften(orbit::drift_coefficient(&orb, &cfg))? {
                Soft::Value(b) => {
                    obj.insert("b".into(), json!(b));
                }
                Soft::Undetermined(_) => {
                    obj.insert("b".into(), json!("undetermined"));
                    undetermined = true;
                }
            }
            match soften(orbit::shift_classification(&orb))? {
                Soft::Value(ShiftClass::Finite(i_val)) => {
                    obj.insert("shift".into(), json!("finite"));
                    obj.insert("shift_limit".into(), json!(i_val));
                }
                Soft::Value(ShiftClass::Infinite) => {
                    obj.insert("shift".into(), json!("infinite"));
                }
                Soft::Undetermined(_) => {
                    obj.insert("shift".into(), json!("undetermined"));
                    undetermined = true;
                }
            }
        }
    }
    let config = config_value("classify", args, &cfg);
    Ok((with_header("classify", config, result), undetermined))
}

fn cmd_rate(args: &RunArgs) -> Result<(Value, bool), Error> {
    let map = resolve_map(args)?;
    let cfg = resolve_config(args, &map);
    let report = criteria::consolidate(&map.triplet, &cfg)?;
    let undetermined = report.extremal.is_none();

    if args.format == Format::Csv {
        // Plot series along the orbit of i: log-ratio accumulator,
        // distance defect, and the disc product.
        let n = match report.classification {
            criteria::Classification::Hyperbolic { .. } => cfg.hyperbolic_budget,
            _ => cfg.parabolic_budget,
        };
        let orb = orbit::iterate(&map.triplet, &UpperHalfPoint::i(), n, &cfg)?;
        let hyperbolic = map.triplet.alpha() > 1.0;
        let log_alpha = map.triplet.alpha().ln();
        let mut y_ratio = Vec::with_capacity(n);
        let mut defect = Vec::with_capacity(n);
        let mut product = Vec::with_capacity(n);
        for k in 1..=n {
            y_ratio.push(report::csv_cell(orb.log_y_ratio()[k].exp()));
            let d = if hyperbolic {
                orb.sample(k).dist_to_i() - 0.5 * k as f64 * log_alpha
            } else {
                orb.sample(k).dist_to_i() - (k as f64).ln()
            };
            defect.push(report::csv_cell(d));
            let gap = disc::disc_gap(orb.sample(k));
            product.push(report::csv_cell((gap.log_dist_to_tau + orb.sample(k).log_abs).exp()));
        }
        let csv = report::series_csv(
            &[
                ("y_ratio", &y_ratio),
                ("distance_defect", &defect),
                ("disc_product", &product),
            ],
            1,
        );
        return Ok((Value::String(csv), undetermined));
    }

    let result = serde_json::to_value(&report).expect("reports serialize");
    let config = config_value("rate", args, &cfg);
    Ok((with_header("rate", config, result), undetermined))
}

fn cmd_koenigs(args: &KoenigsArgs) -> Result<(Value, bool), Error> {
    let map = resolve_map(&args.run)?;
    let cfg = resolve_config(&args.run, &map);
    let depth = args.run.budget.unwrap_or(if args.pommerenke { 10_000 } else { 200 });
    let h = if args.pommerenke {
        koenigs::pommerenke_koenigs(&map.triplet, &UpperHalfPoint::i(), depth, &cfg)?
    } else {
        koenigs::valiron_koenigs(&map.triplet, depth, &cfg)?
    };

    let grid: Vec<UpperHalfPoint> = if args.run.base.is_empty() {
        let mut g = Vec::new();
        for &x in &[-2.0, -1.0, 0.0, 1.0, 2.0] {
            for &y in &[0.5, 1.0, 2.0, 4.0] {
                g.push(UpperHalfPoint::new(x, y).unwrap());
            }
        }
        g
    } else {
        base_points(&args.run)?
    };

    let rows = hpdyn::par::map_collect(grid, |z| -> Result<Value, Error> {
        let orb = orbit::iterate(&map.triplet, &z, depth + 1, &cfg)?;
        let hz = h.evaluate_with_orbit(&orb, depth)?;
        let residual = h.abel_residual_at(std::slice::from_ref(&z), depth, &cfg)?;
        Ok(json!({
            "re": z.re(),
            "im": z.im(),
            "h_re": hz.re,
            "h_im": hz.im,
            "residual": residual,
        }))
    });
    let mut table = Vec::new();
    let mut max_residual = 0.0_f64;
    for r in rows {
        let row = r?;
        max_residual = max_residual.max(row["residual"].as_f64().unwrap_or(f64::NAN));
        table.push(row);
    }

    if args.run.format == Format::Csv {
        let mut csv = String::from("re,im,h_re,h_im,residual\n");
        for row in &table {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                report::csv_cell(row["re"].as_f64().unwrap()),
                report::csv_cell(row["im"].as_f64().unwrap()),
                report::csv_cell(row["h_re"].as_f64().unwrap()),
                report::csv_cell(row["h_im"].as_f64().unwrap()),
                report::csv_cell(row["residual"].as_f64().unwrap()),
            ));
        }
        return Ok((Value::String(csv), false));
    }

    let result = json!({
        "map": map.name,
        "construction": if args.pommerenke { "pommerenke" } else { "valiron" },
        "depth": depth,
        "max_residual": max_residual,
        "grid": table,
    });
    let config = config_value("koenigs", &args.run, &cfg);
    Ok((with_header("koenigs", config, result), false))
}

fn cmd_norms(args: &RunArgs) -> Result<(Value, bool), Error> {
    let map = resolve_map(args)?;
    let cfg = resolve_config(args, &map);
    let tau = DiscBoundaryPoint::new(args.tau.0, args.tau.1)?;
    let space = match args.space {
        SpaceArg::Hardy => Space::Hardy,
        SpaceArg::Bergman => Space::Bergman,
    };
    let n = match map.triplet.classify() {
        hpdyn::MapClass::Hyperbolic { .. } => cfg.hyperbolic_budget,
        _ => cfg.parabolic_budget,
    };
    let rep = disc::norm_growth_report(&map.triplet, tau, args.p, space, n, &cfg)?;
    let undetermined = matches!(rep.verdict, disc::GapVerdict::Undetermined);
    // Per-n table thinned to a log-spaced sample for the report.
    let mut samples = Vec::new();
    let mut k = 1usize;
    while k <= rep.bounds.len() {
        let (lo, up) = rep.bounds[k - 1];
        let (nlo, nup) = rep.normalized[k - 1];
        samples.push(json!({
            "n": k,
            "lower": lo,
            "upper": up,
            "normalized_lower": nlo,
            "normalized_upper": nup,
        }));
        k = (k * 2).max(k + 1);
    }
    let result = json!({
        "map": map.name,
        "space": match space { Space::Hardy => "hardy", Space::Bergman => "bergman" },
        "p": args.p,
        "verdict": serde_json::to_value(&rep.verdict).unwrap(),
        "bounds": samples,
    });
    let config = config_value("norms", args, &cfg);
    Ok((with_header("norms", config, result), undetermined))
}

fn cmd_criteria(args: &CriteriaArgs) -> Result<(Value, bool), Error> {
    let mut failures = Vec::new();
    let mut checks = 0usize;

    let mut sum_entries = Vec::new();
    for &a in &[0.2, 1.0, 3.0] {
        for &alpha in &[1.5, 2.0, 3.0] {
            for &t in &[-1e3, -10.0, -1.0, -0.01, 0.01, 1.0, 10.0, 1e3] {
                let c = criteria::estimate_sum_check(a, alpha, t, 1_000)?;
                checks += 1;
                if !c.pass {
                    failures.push(format!("estimate_sum A={a} alpha={alpha} t={t}"));
                }
                sum_entries.push(json!({
                    "A": a, "alpha": alpha, "t": t,
                    "gap": c.gap, "gap_bound": c.gap_bound, "pass": c.pass,
                }));
            }
        }
    }

    let mut cone_entries = Vec::new();
    for &a in &[0.5, 1.0, 10.0] {
        let c = criteria::nontangential_constant_check(a, args.samples, args.seed)?;
        checks += 1;
        if !c.pass {
            failures.push(format!("nontangential a={a}: {} violations", c.violations));
        }
        cone_entries.push(json!({
            "a": a, "constant": c.constant, "samples": c.samples,
            "violations": c.violations, "pass": c.pass,
        }));
    }

    let t_grid = [-1e3, -10.0, -1.0, -0.01, 0.01, 1.0, 10.0, 1e3];
    let mut norm_entries = Vec::new();
    for &alpha in &[1.5, 2.0, 3.0] {
        for &eps in &[0.5, 1.0] {
            for &n in &[1usize, 5, 20] {
                for &y in &[0.2, 1.0, 3.0] {
                    let c = criteria::normalization_bounds_check(alpha, eps, n, y, &t_grid)?;
                    checks += 1;
                    if !c.pass {
                        failures.push(format!("normalization alpha={alpha} eps={eps} n={n} y={y}"));
                    }
                    norm_entries.push(json!({
                        "alpha": alpha, "eps": eps, "n": n, "y": y, "pass": c.pass,
                    }));
                }
            }
        }
    }

    if !failures.is_empty() {
        return Err(Error::Contradiction(format!(
            "lemma checks failed: {}",
            failures.join("; ")
        )));
    }

    let result = json!({
        "checks": checks,
        "failures": failures,
        "estimate_sum": sum_entries,
        "nontangential": cone_entries,
        "normalization": norm_entries,
    });
    let config = json!({
        "command": "criteria",
        "samples": args.samples,
        "seed": args.seed,
    });
    Ok((with_header("criteria", config, result), false))
}

fn run() -> Result<(), (i32, String)> {
    let cli = Cli::parse();
    let run_command = |result: Result<(Value, bool), Error>,
                       out: Option<&PathBuf>,
                       strict: bool|
     -> Result<(), (i32, String)> {
        match result {
            Ok((value, undetermined)) => {
                let text = match &value {
                    Value::String(csv) => csv.clone(),
                    other => report::canonical_string(other),
                };
                emit(&text, out).map_err(|e| (2, e.to_string()))?;
                if undetermined && strict {
                    return Err((3, "verdict undetermined at budget (--strict)".into()));
                }
                Ok(())
            }
            Err(e) => Err((exit_code_for(&e), e.to_string())),
        }
    };

    match &cli.command {
        Command::Classify(args) => run_command(cmd_classify(args), args.out.as_ref(), args.strict),
        Command::Rate(args) => run_command(cmd_rate(args), args.out.as_ref(), args.strict),
        Command::Koenigs(args) => {
            run_command(cmd_koenigs(args), args.run.out.as_ref(), args.run.strict)
        }
        Command::Norms(args) => run_command(cmd_norms(args), args.out.as_ref(), args.strict),
        Command::Criteria(args) => run_command(cmd_criteria(args), args.out.as_ref(), false),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Spec(_)
        | Error::InvalidPoint(_)
        | Error::InvalidMeasure(_)
        | Error::InvalidTriplet(_)
        | Error::Domain(_)
        | Error::Classification(_) => 2,
        Error::Undetermined(_) | Error::DriftZero(_) => 3,
        Error::Contradiction(_) => 4,
        Error::QuadratureFailure { .. } => 1,
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
