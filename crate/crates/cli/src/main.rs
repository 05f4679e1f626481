mod params;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dirdist::check::{parse_suites, run_suite, CheckReport};
use dirdist::dist::{
    acg_pdf, ar1_spectral_pdf, mvt_pdf, param_convert, sample_acg, sample_mvt, sample_sc,
    sample_uniform, sample_wc, sc_pdf, stream_rng, wc_pdf, WcMethod, WcParameterization,
};
use dirdist::geom::{arg, surface_area, vec};
use dirdist::project::{gnomonic, gnomonic_inverse, stereographic, stereographic_inverse};
use dirdist::quad::{circle_nodes, SphereRule, DEFAULT_CIRCLE_NODES, DEFAULT_SPHERE_LAT, DEFAULT_SPHERE_LON};
use dirdist::{TangentPoint, UnitVector};
use nalgebra::DVector;

use output::{emit, fmt_float, Format, Table};
use params::{parse_list, Params};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(e: impl fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<dirdist::Error> for CliError {
    fn from(e: dirdist::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// Circle and sphere distributions: sampling, densities, parameter
/// conversion, projections and identity checks.
#[derive(Debug, Parser)]
#[command(name = "dirdist", version)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Wc,
    Acg,
    Sc,
    Mvt,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Doubling,
    Stereographic,
    Wrapping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamKind {
    Lambda,
    B,
    Mu,
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Map {
    Gnomonic,
    GnomonicInverse,
    Stereographic,
    StereographicInverse,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw samples.
    Sample {
        #[arg(value_enum)]
        dist: Dist,
        #[arg(short, long, default_value_t = 1000)]
        n: usize,
        /// Construction used for wc.
        #[arg(long, value_enum, default_value_t = Method::Doubling)]
        method: Method,
        /// key=value pairs, e.g. lambda=0.5 mu=0, q=3 omega=..., mu0=1,0,0.
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
    },
    /// Evaluate a density on a quadrature grid or at given points.
    Density {
        #[arg(value_enum)]
        dist: Dist,
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
        /// Points on the circle for q = 2.
        #[arg(long, default_value_t = DEFAULT_CIRCLE_NODES)]
        grid: usize,
        /// Gauss-Legendre latitude nodes for q = 3.
        #[arg(long, default_value_t = DEFAULT_SPHERE_LAT)]
        lat: usize,
        /// Longitude nodes for q = 3.
        #[arg(long, default_value_t = DEFAULT_SPHERE_LON)]
        lon: usize,
        /// Comma-separated point; repeatable. Replaces the grid.
        #[arg(long)]
        at: Vec<String>,
    },
    /// Convert a wrapped Cauchy parameter to all four forms and (A, B, C).
    Convert {
        #[arg(value_enum)]
        from: ParamKind,
        #[arg(allow_negative_numbers = true)]
        value: f64,
    },
    /// Apply a projection to comma-separated points.
    Project {
        #[arg(value_enum)]
        map: Map,
        #[arg(long, required = true)]
        point: Vec<String>,
    },
    /// Run identity suites; `all` runs every suite.
    Check {
        suite: String,
        /// Random cases (draws per method for `samplers`); suite default if omitted.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
    },
    /// AR(1) spectral density beside the wrapped Cauchy density.
    Spectral {
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_CIRCLE_NODES)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every requested check passed.
fn run(cli: &Cli) -> Result<bool, CliError> {
    let mut passed = true;
    let bytes = match &cli.command {
        Command::Sample { dist, n, method, params } => {
            sample(*dist, *n, *method, &Params::parse(params)?, cli.seed)?.render(cli.format)?
        }
        Command::Density { dist, params, grid, lat, lon, at } => {
            density(*dist, &Params::parse(params)?, *grid, (*lat, *lon), at)?.render(cli.format)?
        }
        Command::Convert { from, value } => convert(*from, *value)?.render(cli.format)?,
        Command::Project { map, point } => project(*map, point)?.render(cli.format)?,
        Command::Check { suite, trials, tol } => {
            let reports = check(suite, *trials, cli.seed, *tol)?;
            passed = reports.iter().all(|r| r.passed);
            render_reports(&reports, cli.format)?
        }
        Command::Spectral { params, grid } => spectral(&Params::parse(params)?, *grid)?.render(cli.format)?,
    };
    emit(&bytes, cli.out.as_deref())?;
    Ok(passed)
}

fn sample(dist: Dist, n: usize, method: Method, p: &Params, seed: u64) -> Result<Table, CliError> {
    let mut rng = stream_rng(seed, 0);
    let push_unit = |t: &mut Table, x: UnitVector| t.rows.push(x.to_vec());
    match dist {
        Dist::Wc => {
            let wc = p.wc()?;
            let method = match method {
                Method::Doubling => WcMethod::Doubling,
                Method::Stereographic => WcMethod::Stereographic,
                Method::Wrapping => WcMethod::Wrapping,
            };
            let mut t = Table::with_columns(&["theta"]);
            for _ in 0..n {
                t.rows.push(vec![sample_wc(&wc, method, &mut rng)?.radians()]);
            }
            Ok(t)
        }
        Dist::Acg => {
            let acg = p.acg()?;
            let mut t = Table::new(Table::coords("x", acg.dim()));
            for _ in 0..n {
                push_unit(&mut t, sample_acg(&acg, &mut rng));
            }
            Ok(t)
        }
        Dist::Sc => {
            let sc = p.sc()?;
            let mut t = Table::new(Table::coords("x", sc.dim()));
            for _ in 0..n {
                push_unit(&mut t, sample_sc(&sc, &mut rng));
            }
            Ok(t)
        }
        Dist::Uniform => {
            let q = p.dim()?.unwrap_or(2);
            let mut t = Table::new(Table::coords("x", q));
            for _ in 0..n {
                push_unit(&mut t, sample_uniform(q, &mut rng)?);
            }
            Ok(t)
        }
        Dist::Mvt => {
            let m = p.mvt()?;
            let mut t = Table::new(Table::coords("v", m.dim()));
            for _ in 0..n {
                t.rows.push(sample_mvt(&m, &mut rng).iter().copied().collect());
            }
            Ok(t)
        }
    }
}

type SpherePdf = Box<dyn Fn(&UnitVector) -> Result<f64, CliError>>;

fn sphere_density(dist: Dist, p: &Params) -> Result<(usize, SpherePdf), CliError> {
    match dist {
        Dist::Wc => {
            let wc = p.wc()?;
            Ok((2, Box::new(move |x| Ok(wc_pdf(arg(x)?, &wc)))))
        }
        Dist::Acg => {
            let acg = p.acg()?;
            Ok((acg.dim(), Box::new(move |x| Ok(acg_pdf(x, &acg)?))))
        }
        Dist::Sc => {
            let sc = p.sc()?;
            Ok((sc.dim(), Box::new(move |x| Ok(sc_pdf(x, &sc)?))))
        }
        Dist::Uniform => {
            let q = p.dim()?.unwrap_or(2);
            let f = 1.0 / surface_area(q)?;
            Ok((q, Box::new(move |x| {
                if x.dim() == q {
                    Ok(f)
                } else {
                    Err(CliError::usage(format!("point has dimension {}, expected {q}", x.dim())))
                }
            })))
        }
        Dist::Mvt => unreachable!("handled by the caller"),
    }
}

fn density(dist: Dist, p: &Params, grid: usize, (lat, lon): (usize, usize), at: &[String]) -> Result<Table, CliError> {
    if dist == Dist::Mvt {
        let m = p.mvt()?;
        if at.is_empty() {
            return Err(CliError::usage("mvt densities need --at points"));
        }
        let mut t = Table::new(Table::coords("v", m.dim()));
        t.columns.push("density".into());
        for s in at {
            let v = DVector::from_vec(parse_list(s)?);
            let mut row: Vec<f64> = v.iter().copied().collect();
            row.push(mvt_pdf(&v, &m)?);
            t.rows.push(row);
        }
        return Ok(t);
    }
    let (q, f) = sphere_density(dist, p)?;
    if !at.is_empty() {
        let mut t = Table::new(Table::coords("x", q));
        t.columns.push("density".into());
        for s in at {
            let x = UnitVector::normalize(parse_list(s)?)?;
            let mut row = x.to_vec();
            row.push(f(&x)?);
            t.rows.push(row);
        }
        return Ok(t);
    }
    match q {
        2 => {
            if grid == 0 {
                return Err(CliError::usage("--grid must be positive"));
            }
            let mut t = Table::with_columns(&["theta", "density", "weight"]);
            for (theta, w) in circle_nodes(grid) {
                t.rows.push(vec![theta.radians(), f(&vec(theta))?, w]);
            }
            Ok(t)
        }
        3 => {
            if lat == 0 || lon == 0 {
                return Err(CliError::usage("--lat and --lon must be positive"));
            }
            let mut t = Table::with_columns(&["x1", "x2", "x3", "density", "weight"]);
            for (x, w) in SphereRule::sphere2(lat, lon).nodes() {
                let mut row = x.to_vec();
                row.push(f(x)?);
                row.push(*w);
                t.rows.push(row);
            }
            Ok(t)
        }
        _ => Err(CliError::usage(format!("no density grid for q = {q}; use --at"))),
    }
}

fn convert(from: ParamKind, value: f64) -> Result<Table, CliError> {
    let set = param_convert(match from {
        ParamKind::Lambda => WcParameterization::Lambda(value),
        ParamKind::B => WcParameterization::B(value),
        ParamKind::Mu => WcParameterization::Mu(value),
        ParamKind::Alpha => WcParameterization::Alpha(value),
    })?;
    let mut t = Table::with_columns(&["A", "B", "C", "lambda", "b", "mu", "alpha"]);
    t.rows.push(vec![set.abc.a(), set.abc.b(), set.abc.c(), set.lambda, set.b, set.mu, set.alpha]);
    Ok(t)
}

fn project(map: Map, points: &[String]) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for s in points {
        let coords = parse_list(s)?;
        let out = match map {
            Map::Gnomonic => gnomonic(&UnitVector::new(coords)?)?.as_slice().to_vec(),
            Map::Stereographic => stereographic(&UnitVector::new(coords)?)?.as_slice().to_vec(),
            Map::GnomonicInverse => gnomonic_inverse(&TangentPoint::new(coords)?).to_vec(),
            Map::StereographicInverse => stereographic_inverse(&TangentPoint::new(coords)?).to_vec(),
        };
        rows.push(out);
    }
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::usage("all points must have the same dimension"));
    }
    let prefix = match map {
        Map::Gnomonic => "v",
        Map::Stereographic => "w",
        _ => "x",
    };
    let mut t = Table::new(Table::coords(prefix, width));
    t.rows = rows;
    Ok(t)
}

fn check(name: &str, trials: Option<usize>, seed: u64, tol: Option<f64>) -> Result<Vec<CheckReport>, CliError> {
    parse_suites(name)?
        .into_iter()
        .map(|s| Ok(run_suite(s, trials.unwrap_or(s.default_trials()), seed, tol)?))
        .collect()
}

fn render_reports(reports: &[CheckReport], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => match reports {
            [one] => serde_json::to_vec_pretty(one).map_err(CliError::io),
            _ => serde_json::to_vec_pretty(reports).map_err(CliError::io),
        },
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "trials", "max_abs_error", "tolerance", "passed", "seed", "wall_time"])
                .map_err(CliError::io)?;
            for r in reports {
                w.write_record([
                    r.suite.clone(),
                    r.trials.to_string(),
                    fmt_float(r.max_abs_error),
                    fmt_float(r.tolerance),
                    r.passed.to_string(),
                    r.seed.to_string(),
                    fmt_float(r.wall_time),
                ])
                .map_err(CliError::io)?;
            }
            w.into_inner().map_err(|e| CliError::io(e.into_error()))
        }
    }
}

fn spectral(p: &Params, grid: usize) -> Result<Table, CliError> {
    let wc = dirdist::dist::WcParams::centered(p.require("lambda")?)?;
    if grid == 0 {
        return Err(CliError::usage("--grid must be positive"));
    }
    let mut t = Table::with_columns(&["theta", "ar1", "wc"]);
    for (theta, _) in circle_nodes(grid) {
        t.rows.push(vec![theta.radians(), ar1_spectral_pdf(theta, wc.lambda())?, wc_pdf(theta, &wc)]);
    }
    Ok(t)
}
