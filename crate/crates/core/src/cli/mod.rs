//! Command-line drivers: argument parsing, provenance headers and CSV/JSON output.

pub mod experiments;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::approx::{densify, DensifyParams, EpsMode};
use crate::currents::suite::suite_from_json;
use crate::currents::{default_suite, DiscreteCurrent, SuiteBox};
use crate::error::{Error, Result};
use crate::fuchsian::{preset_gamma2, HorocycleParameter, SurfacePreset};
use crate::geom::BoundaryPoint;
use crate::limitset::hausdorff_table;

#[derive(Debug, Parser)]
#[command(name = "cuspcur", version, about = "Geodesic currents on cusped hyperbolic surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `gamma2` or a preset JSON file.
    #[arg(long, global = true, default_value = "gamma2")]
    pub preset: String,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Box suite JSON; the default suite when absent.
    #[arg(long, global = true)]
    pub boxes: Option<PathBuf>,
    /// Uniform horocycle parameter.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    /// Rational tolerance ε̂; `exact` accepts only exact readings.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// η_{aⁿbⁿ} against 2·η_{0,∞} on the box suite.
    ConvergeClosed {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
    },
    /// (1/2n)·η_{g⁻ⁿp, gⁿq} against η_g on the box suite.
    ConvergeCusp {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value = "ab")]
        g: String,
        #[arg(long, default_value = "inf")]
        p: String,
        #[arg(long, default_value = "0")]
        q: String,
    },
    /// i(η_{aⁿbⁿ}, η_{0,∞}) and the constant i(η_{0,∞}, η_{0,∞}).
    Blowup,
    /// Rational approximation of a current.
    Densify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Hausdorff distance from the ping-pong limit set approximation to {0, ∞}.
    Limitset {
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Evaluates a current on the box suite.
    Eval {
        #[arg(long)]
        input: PathBuf,
    },
    /// Cross-checks against exhaustive word enumeration.
    Oracle {
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 20)]
        windows: usize,
    },
}

fn load_preset(s: &str) -> Result<SurfacePreset> {
    if s == "gamma2" {
        Ok(preset_gamma2())
    } else {
        SurfacePreset::from_json(&std::fs::read_to_string(s)?)
    }
}

fn load_suite(p: &SurfacePreset, path: &Option<PathBuf>) -> Result<Vec<SuiteBox>> {
    match path {
        Some(f) => suite_from_json(&std::fs::read_to_string(f)?),
        None => Ok(default_suite(p)),
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// `#`-prefixed provenance lines followed by the CSV table.
pub fn render_csv<T: Serialize>(header: &[String], rows: &[T], columns: &[&str]) -> Result<String> {
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(columns).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv is utf-8"));
    Ok(out)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(f) => std::fs::write(f, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn provenance(p: &SurfacePreset, verb: &str, params: &[(&str, String)]) -> Vec<String> {
    let mut h = vec![
        format!("cuspcur {} {verb}", env!("CARGO_PKG_VERSION")),
        format!("preset {} sha256 {}", p.name, p.hash()),
    ];
    let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    h.push(format!("params {}", ps.join(" ")));
    h
}

fn parse_eps(s: &Option<String>) -> Result<EpsMode> {
    match s.as_deref() {
        None => Ok(EpsMode::Auto),
        Some("exact") => Ok(EpsMode::Exact),
        Some(v) => v
            .parse::<f64>()
            .ok()
            .filter(|e| *e > 0.0)
            .map(EpsMode::Value)
            .ok_or_else(|| Error::Parse(format!("--eps expects a positive number or 'exact', got '{v}'"))),
    }
}

/// Runs one CLI invocation.
pub fn run(cli: Cli) -> Result<()> {
    let c = &cli.common;
    let p = load_preset(&c.preset)?;
    match &cli.verb {
        Verb::ConvergeClosed { n_min } => {
            let n_max = c.n_max.unwrap_or(64);
            let suite = load_suite(&p, &c.boxes)?;
            let (rows, stab) = experiments::converge_closed(&p, &suite, *n_min, n_max, 1.0)?;
            let mut h = provenance(&p, "converge-closed", &[("n_min", n_min.to_string()), ("n_max", n_max.to_string())]);
            for s in &stab {
                h.push(format!(
                    "stabilized box={} N={}",
                    s.box_id,
                    s.index.map_or("none".to_string(), |n| n.to_string())
                ));
            }
            emit(&c.out, &render_csv(&h, &rows, &["n", "box_id", "count", "twice_target", "delta"])?)
        }
        Verb::ConvergeCusp { n_min, g, p: x, q: y } => {
            let n_max = c.n_max.unwrap_or(128);
            let suite = load_suite(&p, &c.boxes)?;
            let ns: Vec<usize> = (*n_min..=n_max).collect();
            let rows =
                experiments::converge_cusp(&p, &suite, g, &BoundaryPoint::parse(x)?, &BoundaryPoint::parse(y)?, &ns)?;
            let h = provenance(
                &p,
                "converge-cusp",
                &[("g", g.clone()), ("p", x.clone()), ("q", y.clone()), ("n_min", n_min.to_string()), ("n_max", n_max.to_string())],
            );
            emit(&c.out, &render_csv(&h, &rows, &["n", "box_id", "scaled_count", "target", "n_times_error"])?)
        }
        Verb::Blowup => {
            let n_max = c.n_max.unwrap_or(32);
            let (rows, self_i) = experiments::blowup(&p, n_max)?;
            let mut h = provenance(&p, "blowup", &[("n_max", n_max.to_string())]);
            h.push(format!("self_intersection {{0,inf}} = {self_i}"));
            emit(&c.out, &render_csv(&h, &rows, &["n", "count", "lower_bound_family"])?)
        }
        Verb::Densify { input, report } => {
            let mu = DiscreteCurrent::from_json(&p, &std::fs::read_to_string(input)?)?;
            let mut params = DensifyParams::defaults(&p);
            if let Some(r) = c.radius {
                params.r = r;
            }
            if let Some(l) = c.lambda {
                params.lambda = HorocycleParameter::uniform(p.n_classes(), l);
            }
            params.eps = parse_eps(&c.eps)?;
            let (nu, rep) = densify(&p, &mu, &params)?;
            if let Some(f) = report {
                std::fs::write(f, serde_json::to_string_pretty(&rep)?)?;
            }
            emit(&c.out, &(nu.to_json(&p) + "\n"))
        }
        Verb::Limitset { depth } => {
            let n_max = c.n_max.unwrap_or(16) as u64;
            let ns: Vec<u64> = std::iter::successors(Some(2u64), |n| Some(n * 2)).take_while(|&n| n <= n_max).collect();
            let rows = hausdorff_table(&ns, *depth)?;
            let h = provenance(&p, "limitset", &[("depth", depth.to_string()), ("n_max", n_max.to_string())]);
            emit(&c.out, &render_csv(&h, &rows, &["n", "depth", "hausdorff"])?)
        }
        Verb::Eval { input } => {
            let mu = DiscreteCurrent::from_json(&p, &std::fs::read_to_string(input)?)?;
            let suite = load_suite(&p, &c.boxes)?;
            let rows = experiments::eval(&p, &mu, &suite)?;
            let h = provenance(&p, "eval", &[("input", input.display().to_string())]);
            emit(&c.out, &render_csv(&h, &rows, &["box_id", "value"])?)
        }
        Verb::Oracle { max_len, windows } => {
            let ws = experiments::random_windows(c.seed, *windows)?;
            let wrows = experiments::oracle_windows(&p, &ws, *max_len)?;
            let prows = experiments::oracle_pairs(&p, *max_len)?;
            let bad = wrows.iter().filter(|r| !r.agree).count() + prows.iter().filter(|r| !r.agree).count();
            let params = [("max_len", max_len.to_string()), ("windows", windows.to_string()), ("seed", c.seed.to_string())];
            let mut h = provenance(&p, "oracle", &params);
            h.push(format!("disagreements {bad}"));
            let mut text = render_csv(&h, &wrows, &[])?;
            text.push_str(&render_csv(&[], &prows, &[])?);
            emit(&c.out, &text)?;
            if bad > 0 {
                return Err(Error::degenerate(format!("{bad} oracle disagreements")));
            }
            Ok(())
        }
    }
}
