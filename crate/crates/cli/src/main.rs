//! `fracmono` command-line tool.
//!
//! Every flag can also be set through an environment variable with the
//! `FRACMONO_` prefix, e.g. `FRACMONO_SYSTEM=qsp` or `FRACMONO_THREADS=4`.
//! Exit codes: 0 success, 2 invalid input, 3 regularity violation,
//! 4 numerical failure (including a failed `verify`).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracmono::circle_action::{euler_from_fixed_points, WeightedFixedPoint, Weights};
use fracmono::format::real17;
use fracmono::monodromy::{analyze, AnalyzeOptions, ErrorClass, LoopSpec, MonodromyCertificate};
use fracmono::numverify::{
    grad_check, periodicity_error, poisson_residual, rotation_holonomy, HolonomyError, HolonomyOptions, HolonomyTrace,
};
use fracmono::plot::{default_window, Diagram};
use fracmono::systems::{catalog_system, critical_scan, IntegrableSystem, ScanOptions, Window, CATALOG_IDS};
use fracmono::{Cycle, Rational, SeifertData, Transport};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fracmono", version, about = "Fractional monodromy from circle-action data")]
struct Cli {
    /// Worker threads for data-parallel scans (default: hardware count).
    #[arg(long, global = true, env = "FRACMONO_THREADS")]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, env = "FRACMONO_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in systems with parameters, fixed points and strata.
    ListSystems {
        #[arg(long, value_enum, default_value_t = Format::Text, env = "FRACMONO_FORMAT")]
        format: Format,
    },
    /// Euler number sum 1/(m n) of a list of weights `m:n,m:n,...`.
    Euler {
        #[arg(default_value = "", allow_hyphen_values = true)]
        weights: String,
    },
    /// Parallel transport of a cycle `p,q` (coefficients of a and b).
    Transport {
        #[arg(long, allow_hyphen_values = true)]
        euler: String,
        /// Comma-separated exceptional orders.
        #[arg(long, default_value = "")]
        orders: String,
        #[arg(long, allow_hyphen_values = true)]
        cycle: String,
    },
    /// Monodromy certificate of a loop in the image of the integral map.
    Analyze {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long = "loop", env = "FRACMONO_LOOP", allow_hyphen_values = true)]
        loop_: String,
        /// Minimum distance between the loop and fixed-point images.
        #[arg(long, default_value_t = 1e-6, env = "FRACMONO_TOL_POINT")]
        tol_point: f64,
        /// Minimum crossing angle with stratum images, in degrees.
        #[arg(long, default_value_t = 5.0, env = "FRACMONO_TOL_ANGLE")]
        tol_angle: f64,
        #[arg(long, value_enum, default_value_t = Format::Json, env = "FRACMONO_FORMAT")]
        format: Format,
    },
    /// Critical values of the integral map in a window.
    Scan {
        #[command(flatten)]
        system: SystemArgs,
        /// `j_min,j_max,h_min,h_max`; defaults depend on the system.
        #[arg(long, env = "FRACMONO_WINDOW", allow_hyphen_values = true)]
        window: Option<String>,
        /// Seeds per chart coordinate (grid^4 seeds in total).
        #[arg(long, default_value_t = 10, env = "FRACMONO_GRID")]
        grid: usize,
        #[arg(long, default_value_t = 1e-10, env = "FRACMONO_TOL_SCAN")]
        tol_scan: f64,
        #[arg(long, default_value_t = 1e-4, env = "FRACMONO_TOL_DEDUPE")]
        tol_dedupe: f64,
        /// Also write an SVG diagram here.
        #[arg(long, env = "FRACMONO_SVG")]
        svg: Option<PathBuf>,
        /// Loop drawn on the SVG diagram.
        #[arg(long = "loop", env = "FRACMONO_LOOP", allow_hyphen_values = true)]
        loop_: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv, env = "FRACMONO_FORMAT")]
        format: Format,
    },
    /// Numerical self-checks and optional rotation-number holonomy.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 1000, env = "FRACMONO_SAMPLES")]
        samples: usize,
        #[arg(long, default_value_t = 1, env = "FRACMONO_SEED")]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, env = "FRACMONO_TOL_POISSON")]
        tol_poisson: f64,
        #[arg(long, default_value_t = 1e-6, env = "FRACMONO_TOL_GRAD")]
        tol_grad: f64,
        #[arg(long, default_value_t = 1e-8, env = "FRACMONO_TOL_PERIOD")]
        tol_period: f64,
        /// Regular loop for the holonomy check.
        #[arg(long, env = "FRACMONO_HOLONOMY_LOOP", allow_hyphen_values = true)]
        holonomy_loop: Option<String>,
        /// Expected holonomy; without it the estimate only has to be an integer.
        #[arg(long, allow_hyphen_values = true, env = "FRACMONO_EXPECT_K")]
        expect_k: Option<i64>,
        #[arg(long, default_value_t = 64, env = "FRACMONO_STATIONS")]
        stations: usize,
        #[arg(long, default_value_t = 1e-3, env = "FRACMONO_TOL_HOLONOMY")]
        tol_holonomy: f64,
        /// Also write the holonomy stations (station, J, H, T, Theta) here.
        #[arg(long, env = "FRACMONO_CSV")]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json, env = "FRACMONO_FORMAT")]
        format: Format,
    },
}

#[derive(Args)]
struct SystemArgs {
    /// Catalog id: res:<m>:<-n>, s2xs2 or qsp.
    #[arg(long, env = "FRACMONO_SYSTEM")]
    system: String,
    /// System parameter `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param, allow_hyphen_values = true)]
    params: Vec<(String, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
    Svg,
}

struct Failure {
    code: u8,
    message: String,
    /// Complete output still to be written, e.g. a failing `verify` report.
    output: Option<String>,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
            output: None,
        }
    }
    fn regularity(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
            output: None,
        }
    }
    fn numeric(message: impl ToString) -> Self {
        Failure {
            code: 4,
            message: message.to_string(),
            output: None,
        }
    }
}

type Outcome = Result<String, Failure>;

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("parameter value {v:?} is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn load_system(args: &SystemArgs) -> Result<Box<dyn IntegrableSystem>, Failure> {
    catalog_system(&args.system, &args.params).map_err(Failure::input)
}

fn parse_loop(s: &str) -> Result<LoopSpec, Failure> {
    s.parse::<LoopSpec>().map_err(Failure::input)
}

fn to_json<T: Serialize>(value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).map_err(Failure::numeric)?;
    s.push('\n');
    Ok(s)
}

fn reject_format(format: Format, allowed: &[Format], cmd: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let name = format
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        Err(Failure::input(format!("{cmd} does not support --format {name}")))
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn parse_weights(s: &str) -> Result<Vec<Weights>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (m, n) = t
                .split_once(':')
                .ok_or_else(|| Failure::input(format!("weight {t:?} is not m:n")))?;
            let m: i64 = m
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("weight {t:?} is not m:n")))?;
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("weight {t:?} is not m:n")))?;
            Weights::new(m, n).map_err(Failure::input)
        })
        .collect()
}

fn parse_orders(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<u64>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Failure::input(format!("order {t:?} is not a positive integer"))),
        })
        .collect()
}

fn cmd_euler(weights: &str) -> Outcome {
    let pts: Vec<WeightedFixedPoint> = parse_weights(weights)?
        .into_iter()
        .map(|w| WeightedFixedPoint::new(Vec::new(), w, (0.0, 0.0)))
        .collect();
    Ok(format!("{}\n", euler_from_fixed_points(&pts)))
}

fn cmd_transport(euler: &str, orders: &str, cycle: &str) -> Outcome {
    let e: Rational = euler.parse().map_err(Failure::input)?;
    let orders = parse_orders(orders)?;
    let c: Cycle = cycle.parse().map_err(Failure::input)?;
    let data = SeifertData::new(e, orders, "cli").map_err(Failure::input)?;
    Ok(match data.transport(c) {
        Transport::Image(img) => format!("{img}\n"),
        Transport::NotTransportable => "NOT_TRANSPORTABLE\n".to_string(),
    })
}

#[derive(Serialize)]
struct SystemListing {
    id: String,
    description: String,
    parameters: Vec<(String, f64)>,
    fixed_points: Vec<WeightedFixedPoint>,
    strata: Vec<StratumListing>,
}

#[derive(Serialize)]
struct StratumListing {
    order: u64,
    description: String,
}

fn listing(id: &str) -> SystemListing {
    if id == "res:m:-n" {
        return SystemListing {
            id: id.to_string(),
            description: "m:(-n) resonant family; instantiate as res:<m>:<-n> with coprime m, n >= 1".into(),
            parameters: vec![("eps".into(), 1.0)],
            fixed_points: Vec::new(),
            strata: Vec::new(),
        };
    }
    let sys = catalog_system(id, &[]).expect("catalog ids build with default parameters");
    SystemListing {
        id: sys.id(),
        description: sys.description(),
        parameters: sys.parameters(),
        fixed_points: sys.fixed_point_catalog(),
        strata: sys
            .strata()
            .iter()
            .map(|s| StratumListing {
                order: s.order,
                description: s.description.clone(),
            })
            .collect(),
    }
}

fn cmd_list_systems(format: Format) -> Outcome {
    reject_format(format, &[Format::Json, Format::Text], "list-systems")?;
    let all: Vec<SystemListing> = CATALOG_IDS.iter().map(|id| listing(id)).collect();
    if format == Format::Json {
        return to_json(&all);
    }
    let mut s = String::new();
    for l in &all {
        let _ = writeln!(s, "{}", l.id);
        let _ = writeln!(s, "  {}", l.description);
        if !l.parameters.is_empty() {
            let ps: Vec<String> = l.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "  parameters: {}", ps.join(", "));
        }
        for p in &l.fixed_points {
            let _ = writeln!(
                s,
                "  fixed point at F = ({}, {}) weights ({},{}) contribution {}",
                p.f_value.0, p.f_value.1, p.weights.0, p.weights.1, p.contribution
            );
        }
        for st in &l.strata {
            let _ = writeln!(s, "  Z_{} stratum: {}", st.order, st.description);
        }
    }
    Ok(s)
}

fn certificate_text(c: &MonodromyCertificate) -> String {
    let m = c.matrix.to_strings();
    let mut s = String::new();
    let _ = writeln!(s, "system        {}", c.system);
    let _ = writeln!(s, "loop          {}", c.loop_);
    let _ = writeln!(s, "euler         {}", c.euler);
    let _ = writeln!(s, "orders        {:?}", c.orders_on_loop);
    let _ = writeln!(s, "N             {}", c.n);
    let _ = writeln!(s, "k             {}", c.k);
    let b = c.transport_group.basis();
    let _ = writeln!(s, "transport     span{{({}), ({})}}", b[0], b[1]);
    let _ = writeln!(
        s,
        "matrix        [[{}, {}], [{}, {}]]",
        m[0][0], m[0][1], m[1][0], m[1][1]
    );
    for d in &c.regularity.diagnostics {
        let _ = writeln!(s, "note          {d}");
    }
    s
}

fn cmd_analyze(system: &SystemArgs, loop_: &str, tol_point: f64, tol_angle: f64, format: Format) -> Outcome {
    reject_format(format, &[Format::Json, Format::Text], "analyze")?;
    if !(tol_point > 0.0 && tol_angle > 0.0) {
        return Err(Failure::input("tolerances must be positive"));
    }
    let sys = load_system(system)?;
    let lp = parse_loop(loop_)?;
    let opts = AnalyzeOptions {
        point_tol: tol_point,
        min_angle_deg: tol_angle,
        ..Default::default()
    };
    let cert = analyze(&*sys, &lp, &opts).map_err(|e| match e.class() {
        ErrorClass::InvalidInput => Failure::input(e),
        ErrorClass::Regularity => Failure::regularity(e),
        ErrorClass::Numeric => Failure::numeric(e),
    })?;
    match format {
        Format::Text => Ok(certificate_text(&cert)),
        _ => to_json(&cert),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    system: &SystemArgs,
    window: Option<&str>,
    grid: usize,
    tol_scan: f64,
    tol_dedupe: f64,
    svg: Option<&PathBuf>,
    loop_: Option<&str>,
    format: Format,
) -> Outcome {
    reject_format(format, &[Format::Csv, Format::Json, Format::Svg], "scan")?;
    if grid == 0 || !(tol_scan > 0.0 && tol_dedupe > 0.0) {
        return Err(Failure::input("grid and tolerances must be positive"));
    }
    let sys = load_system(system)?;
    let window = match window {
        Some(w) => w.parse::<Window>().map_err(Failure::input)?,
        None => default_window(&*sys),
    };
    let lp = loop_.map(parse_loop).transpose()?;
    let opts = ScanOptions {
        grid,
        tol: tol_scan,
        dedupe_radius: tol_dedupe,
        ..Default::default()
    };
    let report = critical_scan(&*sys, &window, &opts);
    let diagram = || Diagram::new(&*sys, window, Some(&report), lp.as_ref()).to_svg();
    if let Some(path) = svg {
        write_file(path, &diagram())?;
    }
    match format {
        Format::Json => to_json(&report),
        Format::Svg => Ok(diagram()),
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["J".to_string(), "H".to_string()];
            header.extend(sys.coordinate_names().iter().map(|c| c.to_string()));
            header.push("gram_det".into());
            w.write_record(&header).map_err(Failure::numeric)?;
            for p in &report.points {
                let mut row = vec![real17(p.j), real17(p.h)];
                row.extend(p.witness.iter().map(|x| real17(*x)));
                row.push(real17(p.gram_det));
                w.write_record(&row).map_err(Failure::numeric)?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::numeric(e.to_string()))?;
            String::from_utf8(bytes).map_err(Failure::numeric)
        }
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    #[serde(serialize_with = "fracmono::format::ser_real")]
    value: f64,
    #[serde(serialize_with = "fracmono::format::ser_real")]
    threshold: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    system: String,
    samples: usize,
    seed: u64,
    checks: Vec<Check>,
    holonomy: Option<HolonomyReport>,
    pass: bool,
}

#[derive(Serialize)]
struct HolonomyReport {
    #[serde(rename = "loop")]
    loop_: String,
    expected_k: Option<i64>,
    #[serde(flatten)]
    trace: HolonomyTrace,
}

fn check(name: &'static str, value: f64, threshold: f64) -> Check {
    Check {
        name,
        value,
        threshold,
        pass: value < threshold,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    system: &SystemArgs,
    samples: usize,
    seed: u64,
    tols: (f64, f64, f64, f64),
    holonomy_loop: Option<&str>,
    expect_k: Option<i64>,
    stations: usize,
    csv_path: Option<&PathBuf>,
    format: Format,
) -> Outcome {
    reject_format(format, &[Format::Json, Format::Text], "verify")?;
    let (tol_poisson, tol_grad, tol_period, tol_holonomy) = tols;
    if samples == 0
        || stations < 4
        || ![tol_poisson, tol_grad, tol_period, tol_holonomy]
            .iter()
            .all(|t| *t > 0.0)
    {
        return Err(Failure::input(
            "samples, stations and tolerances must be positive (stations >= 4)",
        ));
    }
    let sys = load_system(system)?;
    let lp = holonomy_loop.map(parse_loop).transpose()?;

    let mut checks = vec![check(
        "poisson_residual",
        poisson_residual(&*sys, samples, seed),
        tol_poisson,
    )];
    let g = grad_check(&*sys, samples, 1e-5, seed.wrapping_add(1));
    checks.push(check("grad_check", g.max_rel_error, tol_grad));
    if !sys
        .constraints(&fracmono::systems::PhasePoint::zeros(sys.ambient_dim()))
        .is_empty()
    {
        checks.push(check("grad_check_tangential", g.max_tangential_error, tol_grad * 10.0));
    }
    let period = periodicity_error(&*sys, samples, seed.wrapping_add(2)).map_err(Failure::numeric)?;
    checks.push(check("circle_period", period, tol_period));

    let holonomy = match lp {
        None => None,
        Some(lp) => {
            let opts = HolonomyOptions {
                n_stations: stations,
                ..Default::default()
            };
            let trace = rotation_holonomy(&*sys, &lp, &opts).map_err(|e| match e {
                HolonomyError::NotRegular(_) => Failure::regularity(e),
                _ => Failure::numeric(e),
            })?;
            let k = trace.k_estimate;
            let target = expect_k.map(|k| k as f64).unwrap_or(k.round());
            checks.push(check("holonomy", (k - target).abs(), tol_holonomy));
            if let Some(path) = csv_path {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["station", "J", "H", "T", "Theta"])
                    .map_err(Failure::numeric)?;
                for (i, s) in trace.stations.iter().enumerate() {
                    w.write_record([
                        i.to_string(),
                        real17(s.j),
                        real17(s.h),
                        real17(s.return_time),
                        real17(s.theta),
                    ])
                    .map_err(Failure::numeric)?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::numeric(e.to_string()))?;
                write_file(path, &String::from_utf8_lossy(&bytes))?;
            }
            Some(HolonomyReport {
                loop_: lp.to_string(),
                expected_k: expect_k,
                trace,
            })
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        system: sys.id(),
        samples,
        seed,
        checks,
        holonomy,
        pass,
    };
    let out = if format == Format::Text {
        let mut s = String::new();
        for c in &report.checks {
            let _ = writeln!(
                s,
                "{:<24} {:<6} {:.3e} (threshold {:.0e})",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.value,
                c.threshold
            );
        }
        if let Some(h) = &report.holonomy {
            let _ = writeln!(s, "k_estimate               {}", real17(h.trace.k_estimate));
        }
        s
    } else {
        to_json(&report)?
    };
    if pass {
        Ok(out)
    } else {
        Err(Failure {
            output: Some(out),
            ..Failure::numeric("verification failed")
        })
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(Failure::input)?;
    }
    let out = cli.out.as_ref();
    let text = match &cli.command {
        Command::ListSystems { format } => cmd_list_systems(*format),
        Command::Euler { weights } => cmd_euler(weights),
        Command::Transport { euler, orders, cycle } => cmd_transport(euler, orders, cycle),
        Command::Analyze {
            system,
            loop_,
            tol_point,
            tol_angle,
            format,
        } => cmd_analyze(system, loop_, *tol_point, *tol_angle, *format),
        Command::Scan {
            system,
            window,
            grid,
            tol_scan,
            tol_dedupe,
            svg,
            loop_,
            format,
        } => cmd_scan(
            system,
            window.as_deref(),
            *grid,
            *tol_scan,
            *tol_dedupe,
            svg.as_ref(),
            loop_.as_deref(),
            *format,
        ),
        Command::Verify {
            system,
            samples,
            seed,
            tol_poisson,
            tol_grad,
            tol_period,
            holonomy_loop,
            expect_k,
            stations,
            tol_holonomy,
            csv,
            format,
        } => {
            let tols = (*tol_poisson, *tol_grad, *tol_period, *tol_holonomy);
            cmd_verify(
                system,
                *samples,
                *seed,
                tols,
                holonomy_loop.as_deref(),
                *expect_k,
                *stations,
                csv.as_ref(),
                *format,
            )
        }
    };
    match text {
        Ok(text) => emit(&text, out),
        Err(mut f) => {
            if let Some(text) = f.output.take() {
                emit(&text, out)?;
            }
            Err(f)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
