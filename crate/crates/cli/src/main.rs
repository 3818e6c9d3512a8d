//! `tercyclo`: command-line access to the coefficient engines, the
//! large-coefficient construction and the inverse-pair landscape.
//!
//! Exit codes: 0 on success, 1 on usage or precondition errors, 2 when a
//! certificate or table check fails.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tercyclo::construction::{
    self, table_report, ConstructionCertificate, ConstructionError, TableReport, VerifyMode,
};
use tercyclo::kaplan::{self, KaplanContext, ScanOptions, DEFAULT_SCAN_BUDGET};
use tercyclo::landscape::{self, Bound};
use tercyclo::oracle;

#[derive(Parser)]
#[command(name = "tercyclo", version, about = "Ternary cyclotomic coefficients and large-coefficient certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Extremes,
    Full,
}

impl From<Verify> for VerifyMode {
    fn from(v: Verify) -> Self {
        match v {
            Verify::Extremes => VerifyMode::Extremes,
            Verify::Full => VerifyMode::Full,
        }
    }
}

#[derive(clap::Args, Clone, Copy)]
struct ScanArgs {
    /// Maximum number of coefficients a scan may visit
    #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
    budget: u128,
    /// Worker threads for scans (default: all cores)
    #[arg(long)]
    parallel: Option<usize>,
}

impl ScanArgs {
    fn options(&self) -> ScanOptions {
        let opts = ScanOptions::default().with_budget(self.budget);
        match self.parallel {
            Some(w) => opts.with_workers(w),
            None => opts,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dense coefficients of Φ_N
    Coeffs {
        n: u64,
        /// Last degree to print (default: the full polynomial)
        #[arg(long)]
        upto: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// One coefficient a_pqr(k) by Kaplan's lemma
    Kaplan { p: u64, q: u64, r: u64, k: u128 },
    /// The full coefficient set of Φ_pqr
    ScanSet {
        p: u64,
        q: u64,
        r: u64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Build and certify a polynomial with coefficient set [-(p-l-2)/2, (p+l+2)/2]
    Construct {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        q_index: u64,
        #[arg(long, default_value_t = 1)]
        r_index: u64,
        /// Default: full for p < 13, extremes otherwise
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Certify the partner polynomial with negated coefficient set
    Flip {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Row-by-row check of the parts and b-values at both target indices
    Tables {
        #[arg(long)]
        cert: PathBuf,
        /// Print every row, not only the summary and failures
        #[arg(long)]
        all: bool,
    },
    /// Inverse-pair sets and bounds for one prime
    Bsets {
        p: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Known statements about m_p(a)
    Claims { p: u64 },
    /// Primes up to X where M_R(p) > M_GM(p)
    ScanMr {
        #[arg(long)]
        max: u64,
        /// Also write one CSV profile row per prime to this file
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cardinality bounds for B_GM(p) and B_R(p)
    Cobeli { p: u64 },
}

/// A run that completed but whose verdict is negative.
struct Rejected;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Rejected)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn print_json(value: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn load_certificate(path: &Path) -> Result<ConstructionCertificate> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ConstructionCertificate::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Prints (and optionally saves) a certificate; rejected if not verified.
fn emit_certificate(
    result: Result<ConstructionCertificate, ConstructionError>,
    out: Option<&Path>,
) -> Result<Result<(), Rejected>> {
    let (cert, verdict) = match result {
        Ok(cert) => (cert, Ok(())),
        Err(ConstructionError::CertificationFailed { certificate, failures, boundary_w }) => {
            for f in &failures {
                eprintln!("certification failed: {f}");
            }
            if boundary_w {
                eprintln!("note: w lies on an interval endpoint");
            }
            (*certificate, Err(Rejected))
        }
        Err(e) => return Err(e.into()),
    };
    let text = cert.to_json_string();
    if let Some(path) = out {
        fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{text}");
    Ok(verdict)
}

fn tables_json(report: &TableReport, all: bool) -> Value {
    let rows: Vec<Value> = report
        .checks
        .iter()
        .filter(|c| all || !c.passed)
        .map(|c| {
            json!({
                "check": c.check,
                "row": c.row.to_string(),
                "passed": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    json!({
        "passed": report.passed(),
        "checks": report.checks.len().to_string(),
        "failed": report.failures().count().to_string(),
        "positive_b": report.positive_b.to_string(),
        "negative_b": report.negative_b.to_string(),
        "rows": rows,
    })
}

fn run(command: Command) -> Result<Result<(), Rejected>> {
    match command {
        Command::Coeffs { n, upto, format } => {
            let mut coeffs = oracle::phi_coeffs(n)?;
            if let Some(upto) = upto {
                if upto as usize >= coeffs.len() {
                    bail!("--upto {upto} exceeds the degree {}", coeffs.len() - 1);
                }
                coeffs.truncate(upto as usize + 1);
            }
            match format {
                Format::Csv => oracle::write_csv(io::stdout().lock(), &coeffs)?,
                Format::Json => print_json(&json!({
                    "n": n.to_string(),
                    "coefficients": strings(&coeffs),
                }))?,
            }
        }
        Command::Kaplan { p, q, r, k } => {
            let ctx = KaplanContext::new(p, q, r)?;
            println!("{}", ctx.a_pqr(k));
        }
        Command::ScanSet { p, q, r, scan } => {
            let ctx = KaplanContext::new(p, q, r)?;
            let set = kaplan::coefficient_set_with(&ctx, &scan.options())?;
            print_json(&json!({
                "p": p.to_string(),
                "q": q.to_string(),
                "r": r.to_string(),
                "values": strings(&set.values),
                "min": set.min.to_string(),
                "max": set.max.to_string(),
                "height": set.height.to_string(),
                "cardinality": set.cardinality().to_string(),
                "is_interval": set.is_interval(),
            }))?;
        }
        Command::Construct { l, p, q_index, r_index, verify, out, scan } => {
            let mode = verify.map(Into::into).unwrap_or_else(|| VerifyMode::default_for(p));
            let result = construction::construct(l, p, q_index, r_index, mode, &scan.options());
            return emit_certificate(result, out.as_deref());
        }
        Command::Flip { cert, verify, out, scan } => {
            let cert = load_certificate(&cert)?;
            let mode = verify.map(Into::into).unwrap_or_else(|| VerifyMode::default_for(cert.params.p));
            let result = construction::flip_certificate(&cert, mode, &scan.options());
            return emit_certificate(result, out.as_deref());
        }
        Command::Tables { cert, all } => {
            let cert = load_certificate(&cert)?;
            if cert.source != construction::Source::Construction {
                bail!("tables apply to constructed certificates, not flipped ones");
            }
            let report = table_report(&cert.params, cert.k_plus.k, cert.k_minus.k)?;
            print_json(&tables_json(&report, all))?;
            if !report.passed() {
                return Ok(Err(Rejected));
            }
        }
        Command::Bsets { p, format } => {
            let pr = landscape::beta_profile(p)?;
            match format {
                Format::Csv => landscape::write_profiles_csv(io::stdout().lock(), &[pr])?,
                Format::Json => print_json(&json!({
                    "p": p.to_string(),
                    "b1": strings(&pr.b1),
                    "b2": strings(&pr.b2),
                    "b3": strings(&pr.b3),
                    "b_gm": strings(&pr.b_gm),
                    "b_r": strings(&pr.b_r),
                    "m_gm": Bound(pr.m_gm).to_string(),
                    "m_r": Bound(pr.m_r).to_string(),
                    "x0": pr.x0.map_or_else(|| "none".to_string(), |x| x.to_string()),
                    "in_P1": pr.in_p1,
                }))?,
            }
        }
        Command::Claims { p } => {
            let claims: Vec<Value> = landscape::m_p_claims(p)?
                .iter()
                .map(|c| {
                    json!({
                        "residue": c.residue.to_string(),
                        "kind": c.kind.as_str(),
                        "value": c.value.to_string(),
                        "source": c.source.as_str(),
                        "beta": c.beta.to_string(),
                    })
                })
                .collect();
            print_json(&json!({ "p": p.to_string(), "claims": claims }))?;
        }
        Command::ScanMr { max, csv } => {
            if max < 5 {
                bail!("--max must be at least 5");
            }
            if let Some(path) = csv {
                let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                landscape::write_profiles_csv(io::BufWriter::new(file), &landscape::profiles_up_to(max))?;
            }
            let e = landscape::scan_exceeding(max);
            let gap = match e.max_gap {
                Some((p, g)) => json!({ "p": p.to_string(), "gap": g.to_string() }),
                None => Value::Null,
            };
            print_json(&json!({
                "max": max.to_string(),
                "primes": strings(&e.primes),
                "max_gap": gap,
            }))?;
        }
        Command::Cobeli { p } => {
            let r = landscape::cobeli_check(p)?;
            print_json(&json!({
                "p": p.to_string(),
                "card_gm": r.card_gm.to_string(),
                "card_r": r.card_r.to_string(),
                "bound": format!("{:.6}", r.bound),
                "holds_gm": r.holds_gm,
                "holds_r": r.holds_r,
                "slack_gm": format!("{:.6}", r.slack_gm),
                "slack_r": format!("{:.6}", r.slack_r),
            }))?;
        }
    }
    Ok(Ok(()))
}
