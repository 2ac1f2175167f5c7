//! `e2cert`: prove, verify, expand continued fractions and survey fields.
//!
//! Exit codes:
//! - `prove`: 0 proved, 2 inconclusive, 3 class number not 1, 4 bad `m` or schedule
//! - `verify`: 0 accepted, 1 rejected, 5 unreadable file
//! - `cfrac`: 0 ok, 4 bad element or zero denominator, 5 unreadable certificate,
//!   6 certificate rejected or chain failure
//! - `survey`: 0 every class-number-1 field proved, 2 otherwise
//! - `smoothness-bound`: 0 ok, 4 discriminant below 5

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use e2cert::survey::{survey_svg, SURVEY_CSV_HEADER};
use e2cert::{
    cfrac_chain_for, ennola_floor, eval_cf, prove, run_survey, smoothness_report, verify_certificate, verify_chain,
    Certificate, CoveringIndex, FieldElement, ProveError, QuadField, Schedule, SmoothnessReport, SurveyStatus,
};

#[derive(Parser)]
#[command(name = "e2cert", version, about = "2-stage euclidean certificates for real quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScheduleArgs {
    /// Initial bound on |b| for region centers.
    #[arg(long, default_value_t = 5)]
    t0: u32,
    /// Initial bound on the denominator norm.
    #[arg(long, default_value_t = 40)]
    n0: u64,
    /// Growth rate of the norm bound per level; 0 freezes it at n0.
    #[arg(long, default_value_t = 1.0)]
    cn: f64,
    #[arg(long, default_value_t = 64)]
    max_depth: u32,
    /// Boxes examined before giving up.
    #[arg(long, default_value_t = 20_000_000)]
    box_budget: u64,
    #[arg(long)]
    skip_class_check: bool,
}

impl ScheduleArgs {
    fn schedule(&self, parallel: bool) -> Schedule {
        Schedule {
            t0: self.t0,
            n0: self.n0,
            cn: self.cn,
            max_depth: self.max_depth,
            box_budget: self.box_budget,
            skip_class_check: self.skip_class_check,
            parallel,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a covering certificate for Q(sqrt m).
    Prove {
        #[arg(long)]
        m: u64,
        /// Certificate path; defaults to q<m>.e2cert.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Search on a single thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Check a certificate independently of the prover.
    Verify { path: PathBuf },
    /// Continued fraction of num/den from a 2-stage division chain.
    Cfrac {
        #[arg(long)]
        cert: PathBuf,
        /// Element `a,b` meaning a + b·ω, with rational a and b.
        #[arg(long, allow_hyphen_values = true)]
        num: String,
        #[arg(long, allow_hyphen_values = true)]
        den: String,
        /// Also print the re-evaluated value and the chain verdict.
        #[arg(long)]
        verify: bool,
    },
    /// Prove every squarefree field with disc < max-disc and write a CSV.
    Survey {
        #[arg(long)]
        max_disc: u64,
        /// CSV path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 1 runs fields one after another.
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write a scatter plot of the proved rows.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Lower bound on n for n-smooth euclideanity from the discriminant.
    SmoothnessBound {
        #[arg(long)]
        disc: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Prove { m, out, schedule, sequential } => cmd_prove(m, out, &schedule.schedule(!sequential)),
        Command::Verify { path } => cmd_verify(&path),
        Command::Cfrac { cert, num, den, verify } => cmd_cfrac(&cert, &num, &den, verify),
        Command::Survey { max_disc, out, jobs, svg, schedule } => cmd_survey(max_disc, out, jobs, svg, &schedule),
        Command::SmoothnessBound { disc } => cmd_smoothness_bound(disc),
    };
    ExitCode::from(code)
}

fn cmd_prove(m: u64, out: Option<PathBuf>, schedule: &Schedule) -> u8 {
    let field = match QuadField::new(m) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let cert = match prove(&field, schedule) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return match e {
                ProveError::ClassNumberNotOne(_) | ProveError::Ring(_) => 3,
                ProveError::BadSchedule(_) | ProveError::Field(_) => 4,
                _ => 2,
            };
        }
    };
    let report = verify_certificate(&cert);
    if !report.is_accepted() {
        eprintln!("internal error: prover output {report}");
        return 2;
    }
    let path = out.unwrap_or_else(|| PathBuf::from(format!("q{m}{}", e2cert::certificate::CERTIFICATE_EXTENSION)));
    if let Err(e) = cert.write(&path) {
        eprintln!("cannot write {}: {e}", path.display());
        return 2;
    }
    eprintln!("certificate written to {}", path.display());
    println!("{}", SmoothnessReport::CSV_HEADER);
    println!("{}", smoothness_report(&cert).csv_row());
    0
}

fn cmd_verify(path: &Path) -> u8 {
    let cert = match Certificate::read(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return 5;
        }
    };
    let report = verify_certificate(&cert);
    println!("{report}");
    if report.is_accepted() {
        0
    } else {
        1
    }
}

fn cmd_cfrac(cert_path: &Path, num: &str, den: &str, verify: bool) -> u8 {
    let (num, den) = match (num.parse::<FieldElement>(), den.parse::<FieldElement>()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("{e}");
            return 4;
        }
    };
    if den.is_zero() {
        eprintln!("denominator is zero");
        return 4;
    }
    let cert = match Certificate::read(cert_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", cert_path.display());
            return 5;
        }
    };
    let report = verify_certificate(&cert);
    if !report.is_accepted() {
        eprintln!("certificate {report}");
        return 6;
    }
    let index = match CoveringIndex::new(&cert) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{e}");
            return 6;
        }
    };
    let field = index.field();
    let value = field.div(&num, &den).expect("nonzero denominator");
    let (alpha, beta, chain) = match cfrac_chain_for(&value, &index) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return 6;
        }
    };
    let cf = chain.quotients();
    println!("{cf}");
    if verify {
        let ok = verify_chain(field, &alpha, &beta, &chain);
        match eval_cf(field, &cf) {
            Ok(v) => println!("value {v}"),
            Err(e) => println!("value error: {e}"),
        }
        println!("chain {}", if ok { "valid" } else { "invalid" });
        if !ok {
            return 6;
        }
    }
    0
}

fn cmd_survey(
    max_disc: u64,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    svg: Option<PathBuf>,
    args: &ScheduleArgs,
) -> u8 {
    let sequential = jobs == Some(1);
    let schedule = args.schedule(!sequential);
    if let Err(e) = schedule.validate() {
        eprintln!("{e}");
        return 2;
    }
    let (_, skipped) = e2cert::survey::survey_fields(max_disc);
    if !skipped.is_empty() {
        eprintln!("skipping {} non-squarefree values of m", skipped.len());
    }
    let rows = match jobs {
        Some(n) if n > 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_survey(max_disc, &schedule, true)),
            Err(e) => {
                eprintln!("{e}");
                return 2;
            }
        },
        _ => run_survey(max_disc, &schedule, !sequential),
    };
    let mut csv = String::from(SURVEY_CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    match &out {
        Some(path) => {
            if let Err(e) = fs::write(path, &csv) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = std::io::stdout().write_all(csv.as_bytes());
        }
    }
    if let Some(path) = svg {
        if let Err(e) = fs::write(&path, survey_svg(&rows)) {
            eprintln!("cannot write {}: {e}", path.display());
            return 2;
        }
    }
    let unproved: Vec<u64> =
        rows.iter().filter(|r| matches!(r.status, SurveyStatus::Inconclusive)).map(|r| r.m).collect();
    if unproved.is_empty() {
        0
    } else {
        eprintln!("inconclusive: m = {unproved:?}");
        2
    }
}

fn cmd_smoothness_bound(disc: u64) -> u8 {
    if disc < 5 {
        eprintln!("discriminant must be at least 5");
        return 4;
    }
    println!("{}", ennola_floor(disc));
    0
}
