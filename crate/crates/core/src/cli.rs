//! Command-line front end. Every command prints a short human summary, or
//! with `--json` a single [`OutputRecord`].
//!
//! Exit codes: 0 when every reported series converged, 2 when a series or
//! iteration did not converge, 1 for usage, input and I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::diagnostics::{
    rstudent_p_value, screen_subsets, subset_p_value, CsvOptions, RegressionData, ResponseColumn,
};
use crate::error::{invalid, Error, Result};
use crate::genf::{GeneralizedF, DEFAULT_CDF_TOL};
use crate::hotelling::{equicorrelated, load_square_matrix, misspecified_tail, table1, HotellingScenario};
use crate::linalg::SymMatrix;
use crate::mc::{empirical_cdf, sample, SamplerConfig};
use crate::series::SeriesEvaluation;

/// Environment variable overriding the default tolerance 1e-4.
pub const TOL_ENV: &str = "GENF_TOL";

#[derive(Debug, Parser)]
#[command(name = "genf", version, about = "Generalized F distribution, Cook's D_I p-values and misspecified Hotelling T^2")]
pub struct Cli {
    /// Emit one JSON record instead of the human summary.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the pdf, cdf, survival function or quantile.
    Dist(DistArgs),
    /// Cook's D_I for one subset, or a screen over all subsets of size r.
    Cookd(CookdArgs),
    /// Tail probability of a misspecified Hotelling T^2 test.
    Hotelling(HotellingArgs),
    /// Type I error and term counts for equicorrelated misspecification, p=3, N=12.
    Table1(Table1Args),
    /// Monte Carlo draws of W.
    Mc(McArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct LawArgs {
    /// Comma-separated positive weights.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub alphas: Vec<f64>,
    /// Comma-separated degrees of freedom, one per weight.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub ms: Vec<f64>,
    /// Denominator degrees of freedom.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Pdf,
    Cdf,
    Sf,
    Quantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PdfMethod {
    Series,
    ExactR2,
    /// Closed form for two distinct weights, series otherwise.
    Auto,
}

#[derive(Debug, clap::Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub law: LawArgs,
    /// Point of evaluation, or the probability for a quantile.
    #[arg(long, allow_negative_numbers = true)]
    pub at: f64,
    #[arg(long, value_enum)]
    pub what: What,
    /// Tolerance on the truncation error bound. Defaults to 1e-4 (1e-4/w for the pdf).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "series")]
    pub method: PdfMethod,
}

#[derive(Debug, clap::Args)]
pub struct CookdArgs {
    /// CSV file with one observation per row.
    #[arg(long)]
    pub data: PathBuf,
    /// Response column: header name or 1-based column number. Defaults to the last column.
    #[arg(long)]
    pub response: Option<String>,
    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,
    /// Do not prepend an intercept column.
    #[arg(long)]
    pub no_intercept: bool,
    /// Subset size.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Comma-separated 1-based observations; skips the screen.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<usize>>,
    /// Screening level applied to the lower p-value bound.
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct HotellingArgs {
    /// True dispersion: a CSV file or `identity`.
    #[arg(long, default_value = "identity")]
    pub sigma: String,
    /// Assumed dispersion: a CSV file, `identity` or `equicorr:p,rho`.
    #[arg(long)]
    pub omega: String,
    /// Sample size N.
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    /// Nominal level of the test whose critical value is used.
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    /// Evaluate the tail here instead of at the critical value.
    #[arg(long)]
    pub at: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct Table1Args {
    /// Target for the three truncation bounds.
    #[arg(long, default_value_t = 1e-4)]
    pub target: f64,
}

#[derive(Debug, clap::Args)]
pub struct McArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated points at which to report the empirical cdf.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
    /// Write the draws to this file, one per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The single structured record printed with `--json`.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub values: Value,
    pub tau_used: Option<usize>,
    pub error_bound: Option<f64>,
    pub converged: bool,
    pub wall_time_ms: f64,
}

struct Outcome {
    inputs: Value,
    values: Value,
    eval: Option<SeriesEvaluation>,
    converged: bool,
    human: String,
}

impl Outcome {
    fn from_eval(inputs: Value, values: Value, eval: Option<SeriesEvaluation>, human: String) -> Self {
        let converged = eval.is_none_or(|e| e.converged);
        Outcome {
            inputs,
            values,
            eval,
            converged,
            human,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let name = match &cli.command {
        Command::Dist(_) => "dist",
        Command::Cookd(_) => "cookd",
        Command::Hotelling(_) => "hotelling",
        Command::Table1(_) => "table1",
        Command::Mc(_) => "mc",
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Cookd(a) => cmd_cookd(a),
        Command::Hotelling(a) => cmd_hotelling(a),
        Command::Table1(a) => cmd_table1(a),
        Command::Mc(a) => cmd_mc(a),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "genf {name}: {e}");
            return match e {
                Error::NonConvergence { .. } | Error::EigenConvergence(_) => 2,
                _ => 1,
            };
        }
    };
    let written = if cli.json {
        let rec = OutputRecord {
            command: name.to_string(),
            inputs: outcome.inputs,
            values: outcome.values,
            tau_used: outcome.eval.map(|e| e.tau_used),
            error_bound: outcome.eval.map(|e| e.error_bound),
            converged: outcome.converged,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        serde_json::to_string(&rec)
            .map_err(|e| std::io::Error::other(e.to_string()))
            .and_then(|s| writeln!(out, "{s}"))
    } else {
        write!(out, "{}", outcome.human)
    };
    if let Err(e) = written {
        let _ = writeln!(err, "genf {name}: {e}");
        return 1;
    }
    if outcome.converged {
        0
    } else {
        let _ = writeln!(err, "genf {name}: series did not reach the requested tolerance");
        2
    }
}

/// Tolerance from the flag, else from the environment, else 1e-4.
fn base_tol(flag: Option<f64>) -> Result<f64> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0)
            .ok_or_else(|| invalid(format!("{TOL_ENV}={s:?} is not a positive number"))),
        Err(_) => Ok(DEFAULT_CDF_TOL),
    }
}

fn law_of(a: &LawArgs) -> Result<GeneralizedF> {
    GeneralizedF::new(&a.alphas, &a.ms, a.nu)
}

fn law_inputs(a: &LawArgs) -> Value {
    json!({ "alphas": a.alphas, "ms": a.ms, "nu": a.nu })
}

fn fmt_eval(e: &SeriesEvaluation) -> String {
    format!(
        "tau = {}, error bound = {:.3e}, converged = {}",
        e.tau_used, e.error_bound, e.converged
    )
}

fn cmd_dist(a: &DistArgs) -> Result<Outcome> {
    let law = law_of(&a.law)?;
    let mut inputs = law_inputs(&a.law);
    inputs["at"] = json!(a.at);
    inputs["what"] = json!(format!("{:?}", a.what).to_lowercase());
    let label = format!("{:?}", a.what).to_lowercase();
    let (value, eval, tol) = match a.what {
        What::Pdf => {
            let base = base_tol(a.tol)?;
            let tol = if a.tol.is_some() || a.at <= 0.0 { base } else { base / a.at };
            let exact = match a.method {
                PdfMethod::ExactR2 => true,
                PdfMethod::Auto => law.alphas().len() == 2,
                PdfMethod::Series => false,
            };
            if exact {
                (law.pdf_exact_r2(a.at)?, None, tol)
            } else {
                let e = law.pdf_series(a.at, tol)?;
                (e.value, Some(e), tol)
            }
        }
        What::Cdf => {
            let tol = base_tol(a.tol)?;
            let e = law.cdf_series(a.at, tol)?;
            (e.value, Some(e), tol)
        }
        What::Sf => {
            let tol = base_tol(a.tol)?;
            let e = law.survival(a.at, tol)?;
            (e.value, Some(e), tol)
        }
        What::Quantile => {
            let tol = base_tol(a.tol)?;
            (law.quantile(a.at, tol)?, None, tol)
        }
    };
    inputs["tol"] = json!(tol);
    let mut human = format!("{label}({}) = {value:.5}\n", a.at);
    match &eval {
        Some(e) => human.push_str(&format!("{}\n", fmt_eval(e))),
        None => human.push_str(&format!("tolerance = {tol:e}\n")),
    }
    Ok(Outcome::from_eval(inputs, json!({ label: value }), eval, human))
}

fn cmd_cookd(a: &CookdArgs) -> Result<Outcome> {
    let response = match &a.response {
        None => ResponseColumn::Last,
        Some(s) => match s.parse::<usize>() {
            Ok(0) => return Err(invalid("--response column numbers start at 1")),
            Ok(i) => ResponseColumn::Index(i - 1),
            Err(_) => ResponseColumn::Name(s.clone()),
        },
    };
    let opts = CsvOptions {
        has_header: !a.no_header,
        response,
        intercept: !a.no_intercept,
    };
    let data = RegressionData::from_csv(&a.data, &opts)?;
    let tol = base_tol(a.tol)?;
    let inputs = json!({
        "data": a.data.display().to_string(),
        "response": a.response,
        "intercept": !a.no_intercept,
        "r": a.r,
        "subset": a.subset,
        "level": a.level,
        "tol": tol,
        "n": data.n(),
        "k": data.k(),
    });
    let mut human = format!("N = {}, k = {}, tolerance = {tol:e}\n", data.n(), data.k());
    if let Some(subset) = &a.subset {
        let rep = subset_p_value(&data, subset, tol)?;
        let p = rep.p_exact.expect("exact p-value requested");
        let mut values = serde_json::to_value(&rep).map_err(|e| invalid(e.to_string()))?;
        human.push_str(&format!(
            "I = {:?}\nleverages = {}\nD_I = {:.5} on nu = {}\nbounds = ({:.5}, {:.5})\np = {:.5}\n{}\n",
            rep.subset,
            fmt_list(&rep.leverages, 6),
            rep.d_stat,
            rep.nu,
            rep.p_lower,
            rep.p_upper,
            p.value,
            fmt_eval(&p)
        ));
        if subset.len() == 1 {
            let t = rstudent_p_value(&data, subset[0])?;
            values["rstudent_p"] = json!(t);
            human.push_str(&format!("RStudent p = {t:.5}\n"));
        }
        return Ok(Outcome::from_eval(inputs, values, Some(p), human));
    }
    let kept = screen_subsets(&data, a.r, a.level, tol)?;
    let converged = kept.iter().all(|r| r.p_exact.is_some_and(|e| e.converged));
    let worst = kept
        .iter()
        .filter_map(|r| r.p_exact)
        .max_by(|x, y| x.error_bound.total_cmp(&y.error_bound));
    human.push_str(&format!(
        "{} subset(s) of size {} with lower bound <= {}\n",
        kept.len(),
        a.r,
        a.level
    ));
    human.push_str(&format!(
        "{:<14} {:>10} {:>4} {:>9} {:>9} {:>9}  leverages\n",
        "I", "D_I", "nu", "p_lower", "p_exact", "p_upper"
    ));
    for rep in &kept {
        human.push_str(&format!(
            "{:<14} {:>10.5} {:>4} {:>9.5} {:>9.5} {:>9.5}  {}\n",
            format!("{:?}", rep.subset),
            rep.d_stat,
            rep.nu,
            rep.p_lower,
            rep.p_exact.map_or(f64::NAN, |e| e.value),
            rep.p_upper,
            fmt_list(&rep.leverages, 6)
        ));
    }
    let values = json!({ "subsets": kept });
    Ok(Outcome {
        inputs,
        values,
        eval: worst,
        converged,
        human,
    })
}

fn fmt_list(v: &[f64], digits: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.digits$}")).collect();
    format!("({})", parts.join(", "))
}

fn parse_matrix(arg: &str, p_hint: Option<usize>) -> Result<SymMatrix> {
    if arg == "identity" {
        let p = p_hint.ok_or_else(|| invalid("`identity` needs the other matrix to fix the dimension"))?;
        return Ok(SymMatrix::identity(p));
    }
    if let Some(rest) = arg.strip_prefix("equicorr:") {
        let (p, rho) = rest
            .split_once(',')
            .ok_or_else(|| invalid(format!("expected equicorr:p,rho, got {arg:?}")))?;
        let p: usize = p.trim().parse().map_err(|_| invalid(format!("bad dimension in {arg:?}")))?;
        let rho: f64 = rho.trim().parse().map_err(|_| invalid(format!("bad rho in {arg:?}")))?;
        return equicorrelated(p, rho);
    }
    load_square_matrix(arg)
}

fn cmd_hotelling(a: &HotellingArgs) -> Result<Outcome> {
    let (sigma, omega) = match (a.sigma.as_str(), a.omega.as_str()) {
        ("identity", "identity") => {
            return Err(invalid("at least one of --sigma and --omega must fix the dimension"));
        }
        ("identity", o) => {
            let omega = parse_matrix(o, None)?;
            (SymMatrix::identity(omega.order()), omega)
        }
        (s, o) => {
            let sigma = parse_matrix(s, None)?;
            let omega = parse_matrix(o, Some(sigma.order()))?;
            (sigma, omega)
        }
    };
    let scen = HotellingScenario::new(sigma, omega, a.n)?;
    let tol = base_tol(a.tol)?;
    let y = match a.at {
        Some(y) => y,
        None => scen.critical_value(a.level)?,
    };
    let e = misspecified_tail(&scen, y, tol)?;
    let inputs = json!({
        "sigma": a.sigma, "omega": a.omega, "N": a.n, "level": a.level, "at": y, "tol": tol,
    });
    let values = json!({ "pis": scen.pis(), "nu": scen.nu(), "critical_value": y, "tail": e.value });
    let human = format!(
        "p = {}, N = {}, nu = {}\npi = {}\nP[statistic >= {y:.5}] = {:.5}\n{}\n",
        scen.dimension(),
        a.n,
        scen.nu(),
        fmt_list(scen.pis(), 6),
        e.value,
        fmt_eval(&e)
    );
    Ok(Outcome::from_eval(inputs, values, Some(e), human))
}

fn cmd_table1(a: &Table1Args) -> Result<Outcome> {
    let rows = table1(a.target)?;
    let mut human = format!("{:>4} {:>6} {:>6} {:>6} {:>9}\n", "rho", "tau1", "tau2", "tau3", "tail");
    for r in &rows {
        human.push_str(&format!(
            "{:>4.1} {:>6} {:>6} {:>6} {:>9.5}\n",
            r.rho, r.tau1, r.tau2, r.tau3, r.tail
        ));
    }
    let worst = rows.iter().map(|r| r.tail_error_bound).fold(0.0, f64::max);
    Ok(Outcome {
        inputs: json!({ "target": a.target }),
        values: json!({ "rows": rows }),
        eval: None,
        converged: worst <= 1e-10,
        human,
    })
}

fn cmd_mc(a: &McArgs) -> Result<Outcome> {
    let cfg = SamplerConfig::new(a.law.alphas.clone(), a.law.ms.clone(), a.law.nu, a.n, a.seed)?;
    let draws = sample(&cfg)?;
    if let Some(path) = &a.out {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for d in &draws {
            writeln!(f, "{d}")?;
        }
        f.flush()?;
    }
    let cdf = a
        .at
        .iter()
        .map(|&y| empirical_cdf(&draws, y))
        .collect::<Result<Vec<f64>>>()?;
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let mut inputs = law_inputs(&a.law);
    inputs["n"] = json!(a.n);
    inputs["seed"] = json!(a.seed);
    inputs["at"] = json!(a.at);
    inputs["out"] = json!(a.out.as_ref().map(|p| p.display().to_string()));
    let mut human = format!("{} draws, seed {}, mean {mean:.5}\n", a.n, a.seed);
    for (y, p) in a.at.iter().zip(&cdf) {
        human.push_str(&format!("P[W <= {y}] ~ {p:.5}\n"));
    }
    Ok(Outcome::from_eval(
        inputs,
        json!({ "mean": mean, "empirical_cdf": cdf }),
        None,
        human,
    ))
}
