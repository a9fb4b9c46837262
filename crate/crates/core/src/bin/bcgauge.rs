use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bcgauge::battery::{self, BatteryConfig, Suite};
use bcgauge::expr::eval_expr;
use bcgauge::gauge::{self, DEFAULT_BISECT_TOL};
use bcgauge::json::{parse_family, parse_set, parse_vector, read_file};
use bcgauge::scalar::Modulus;
use bcgauge::seminorm;
use bcgauge::sets::SetRep;
use bcgauge::{BcError, Bicomplex, Component, Hyperbolic, ModuleVector, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Bicomplex numerics, Minkowski gauges and seminorm metrics.
#[derive(Parser, Debug)]
#[command(name = "bcgauge", version)]
struct Cli {
    /// Run seed.
    #[arg(long, global = true, env = "BCGAUGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Samples per check.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    /// Module dimension used by the checks.
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Boundary and inequality slack.
    #[arg(long, global = true, default_value_t = 1e-9)]
    slack: f64,
    /// Bisection width for the gauge oracle.
    #[arg(long = "bisect-tol", global = true, default_value_t = DEFAULT_BISECT_TOL)]
    bisect_tol: f64,
    /// Output format (default: json for `check`, text otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a bicomplex expression.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Gauge of a set at a point, closed form against bisection.
    Gauge {
        /// Set JSON file.
        set: PathBuf,
        /// Comma-separated coordinate expressions, or a vector JSON file.
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Truncated D-metric between two points.
    Metric {
        /// Seminorm family JSON file.
        family: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        /// Number of series terms.
        #[arg(short = 'n', long = "terms", default_value_t = battery::METRIC_TERMS)]
        terms: usize,
    },
    /// Run a check suite.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Run a single check by id.
        #[arg(long)]
        only: Option<String>,
        /// List check ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Idempotent split of a vector or set.
    Decompose {
        /// Coordinates, a vector JSON file or a set JSON file.
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
}

/// Coordinates as `expr,expr,...` or a path to a vector JSON file.
fn parse_point(text: &str) -> Result<ModuleVector> {
    let path = Path::new(text);
    if path.is_file() {
        return parse_vector(&read_file(path)?);
    }
    let entries = text.split(',').map(eval_expr).collect::<Result<Vec<_>>>()?;
    ModuleVector::new(entries)
}

fn bc_json(z: Bicomplex) -> serde_json::Value {
    serde_json::to_value(z).expect("finite bicomplex serializes")
}

fn hyp_json(h: Hyperbolic) -> serde_json::Value {
    serde_json::to_value(h).expect("finite hyperbolic serializes")
}

/// Real values print as reals, other hyperbolic values as `a1*e1 + a2*e2`.
fn headline(z: Bicomplex) -> String {
    let [a, b, c, d] = z.parts();
    if b == 0.0 && c == 0.0 && d == 0.0 {
        let a = if a == 0.0 { 0.0 } else { a };
        return format!("{a}");
    }
    match z.as_hyperbolic() {
        Some(h) => h.render(),
        None => z.to_string(),
    }
}

fn cmd_eval(src: &str, format: Format) -> Result<String> {
    let z = eval_expr(src)?;
    let moduli = [("i_sq", Modulus::ISq), ("j_sq", Modulus::JSq), ("k_sq", Modulus::KSq)];
    Ok(match format {
        Format::Json => json!({
            "value": bc_json(z),
            "cartesian": z.to_string(),
            "idempotent": z.idempotent_string(),
            "hyperbolic": z.as_hyperbolic().map(|h| h.render()),
            "moduli": moduli.iter().map(|(k, m)| (k.to_string(), bc_json(z.modulus_sq(*m)))).collect::<serde_json::Map<_, _>>(),
        })
        .to_string(),
        Format::Text => {
            let mut out = format!("{}\n", headline(z));
            out.push_str(&format!("cartesian:  {z}\nidempotent: {}\n", z.idempotent_string()));
            for (k, m) in moduli {
                out.push_str(&format!("{k}: {}\n", z.modulus_sq(m)));
            }
            out.trim_end().to_string()
        }
    })
}

fn cmd_gauge(set: &Path, point: &str, bisect_tol: f64, format: Format) -> Result<String> {
    let s = parse_set(&read_file(set)?)?;
    let x = parse_point(point)?;
    let closed = gauge::gauge(&s, &x)?;
    let bisect = gauge::gauge_bisect(&s, &x, bisect_tol)?;
    let diff = (closed.value - bisect.value).abs_k();
    Ok(match format {
        Format::Json => json!({ "closed_form": closed, "bisection": bisect, "diff": hyp_json(diff) }).to_string(),
        Format::Text => format!(
            "{}\nbisection: {} (tol {bisect_tol:e})\ndiff:      {}",
            closed.render(),
            bisect.render(),
            diff.render()
        ),
    })
}

fn cmd_metric(family: &Path, x: &str, y: &str, terms: usize, format: Format) -> Result<String> {
    let fam = parse_family(&read_file(family)?)?;
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    let d = seminorm::dmetric(&fam, &x, &y, terms)?;
    let tail = seminorm::tail_bound(terms);
    Ok(match format {
        Format::Json => json!({ "value": hyp_json(d), "terms": terms, "tail_bound": tail }).to_string(),
        Format::Text => format!("{}\nterms: {terms}, tail bound: {tail:e}", d.render()),
    })
}

fn cmd_decompose(input: &str, format: Format) -> Result<String> {
    let path = Path::new(input);
    if path.is_file() {
        let text = read_file(path)?;
        if let Ok(s) = parse_set(&text) {
            return decompose_set(&s, format);
        }
        let x = parse_vector(&text)?;
        return Ok(decompose_vector(&x, format));
    }
    Ok(decompose_vector(&parse_point(input)?, format))
}

fn decompose_vector(x: &ModuleVector, format: Format) -> String {
    let (x1, x2) = x.split();
    match format {
        Format::Json => {
            let pairs = |v: &[bcgauge::Complex]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
            json!({ "e1": pairs(&x1), "e2": pairs(&x2) }).to_string()
        }
        Format::Text => x.entries().iter().map(|z| z.idempotent_string()).collect::<Vec<_>>().join("\n"),
    }
}

fn decompose_set(s: &SetRep, format: Format) -> Result<String> {
    let b1 = s.component_body(Component::E1)?;
    let b2 = s.component_body(Component::E2)?;
    Ok(match format {
        Format::Json => json!({ "openness": s.openness(), "e1": b1, "e2": b2 }).to_string(),
        Format::Text => format!(
            "e1: {}\ne2: {}\nopenness: {}",
            serde_json::to_string(&b1)?,
            serde_json::to_string(&b2)?,
            s.openness().map(|o| format!("{o:?}").to_lowercase()).unwrap_or_default()
        ),
    })
}

fn run(cli: Cli) -> Result<(String, u8)> {
    let text_default = cli.format.unwrap_or(Format::Text);
    match cli.cmd {
        Cmd::Eval { expr } => Ok((cmd_eval(&expr, text_default)?, 0)),
        Cmd::Gauge { set, point } => Ok((cmd_gauge(&set, &point, cli.bisect_tol, text_default)?, 0)),
        Cmd::Metric { family, x, y, terms } => Ok((cmd_metric(&family, &x, &y, terms, text_default)?, 0)),
        Cmd::Decompose { input } => Ok((cmd_decompose(&input, text_default)?, 0)),
        Cmd::Check { suite, only, list } => {
            if list {
                return Ok((battery::check_ids(suite).join("\n"), 0));
            }
            let config = BatteryConfig {
                seed: cli.seed,
                samples: cli.samples,
                tol_rel: cli.tol,
                tol_slack: cli.slack,
                bisect_tol: cli.bisect_tol,
                dimension: cli.dim,
            };
            let report = match only {
                Some(id) => {
                    let record = battery::run_check(&config, &id)?;
                    battery::Report { suite, config, records: vec![record] }
                }
                None => battery::run_suite(&config, suite)?,
            };
            let out = match cli.format.unwrap_or(Format::Json) {
                Format::Json => report.to_jsonl(),
                Format::Text => report.to_text(),
            };
            Ok((out.trim_end().to_string(), report.exit_code() as u8))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &BcError) -> u8 {
    e.exit_code() as u8
}
