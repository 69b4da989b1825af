use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use omegakit::arith::approx_f64;
use omegakit::ce_real::RationalSeq;
use omegakit::codespace::AllocError;
use omegakit::format;
use omegakit::machines::chaitin_table;
use omegakit::mltest::{complexity_test_prefix_set, compression_machine, MlTestError};
use omegakit::solovay::{build_test, check_domination, expected_rep_measure, extract_witness, omega_rep_compose, SolovayError};
use omegakit::verify::{self, Suite, DEFAULT_SEED};
use omegakit::{allocate_all, dyadic_decompose, CeRealError, Rational};

#[derive(Parser)]
#[command(name = "omegakit", version, about = "Exact prefix-free code and Ω approximation toolkit")]
struct Cli {
    /// Add a `~`-marked decimal approximation column to exact values.
    #[arg(long, global = true)]
    decimal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Allocate codewords for a request file (`n<TAB>y` lines).
    Allocate { file: PathBuf },
    /// Dyadic decomposition of a sequence file (`p/q` lines).
    Decompose {
        file: PathBuf,
        /// Number of terms; defaults to all of them.
        #[arg(short)]
        k: Option<usize>,
    },
    /// Partial sums ω_1..ω_k of a machine table.
    Omega {
        table: PathBuf,
        #[arg(short)]
        k: Option<usize>,
        /// Print the graph of Chaitin's transform instead.
        #[arg(long)]
        chaitin: bool,
    },
    /// Ω-representation: allocate the interleaved requests and compose with V.
    Compose {
        table: PathBuf,
        #[arg(short)]
        c: usize,
        /// γ-lengths, comma separated.
        #[arg(long, default_value = "")]
        gamma: String,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Interval test of one sequence against another, with its witness.
    Dominate {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        n: usize,
        /// Number of terms; defaults to the shorter prefix.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Martin-Löf test stages.
    Test {
        #[command(subcommand)]
        which: TestCommand,
    },
    /// Run seeded property suites.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum TestCommand {
    /// Stage k of the complexity test at level m, pruned to an antichain.
    Complexity {
        table: PathBuf,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Compress stage files at square levels into a machine table.
    Compress { stages: Vec<PathBuf> },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn domain(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

impl From<format::FormatError> for Failure {
    fn from(e: format::FormatError) -> Self {
        usage(e.to_string())
    }
}

fn alloc_failure(e: AllocError) -> Failure {
    match e {
        AllocError::InsufficientMass { index, length, free } => domain(format!(
            "Kraft violation at index {}: length {length} needs 2^-{length} but only {} is free",
            index + 1,
            free.to_rational()
        )),
        other => domain(other.to_string()),
    }
}

impl From<CeRealError> for Failure {
    fn from(e: CeRealError) -> Self {
        match e {
            CeRealError::Alloc(a) => alloc_failure(a),
            CeRealError::OutOfRange { index, .. } | CeRealError::NotIncreasing { index, .. } => {
                usage(format!("term {}: {e}", index + 1))
            }
            other => domain(other.to_string()),
        }
    }
}

impl From<SolovayError> for Failure {
    fn from(e: SolovayError) -> Self {
        match e {
            SolovayError::InsufficientMass(a) => alloc_failure(a),
            SolovayError::InvalidSequence(s) => s.into(),
            other => domain(other.to_string()),
        }
    }
}

impl From<MlTestError> for Failure {
    fn from(e: MlTestError) -> Self {
        match e {
            MlTestError::Alloc(a) => alloc_failure(a),
            other => domain(other.to_string()),
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_sequence(path: &PathBuf) -> Result<RationalSeq, Failure> {
    let terms = format::parse_sequence(&read_input(path)?)?;
    Ok(RationalSeq::new(terms)?)
}

fn stage_or_all(k: Option<usize>, len: usize, what: &str) -> Result<usize, Failure> {
    match k {
        Some(k) if k > len => Err(usage(format!("k = {k} exceeds the {len} available {what}"))),
        Some(k) => Ok(k),
        None => Ok(len),
    }
}

struct Out {
    text: String,
    decimal: bool,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// `label<TAB>p/q`, with a trailing `<TAB>~decimal` column when requested.
    fn value(&mut self, label: &str, q: &Rational) {
        let _ = write!(self.text, "{label}\t{q}");
        if self.decimal {
            let _ = write!(self.text, "\t~{}", approx_f64(q));
        }
        self.text.push('\n');
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<(), Failure> {
    match cli.command {
        Command::Allocate { file } => {
            let requests = format::parse_requests(&read_input(&file)?)?;
            let pairs = allocate_all(&requests).map_err(alloc_failure)?;
            out.text.push_str(&format::write_allocation(&pairs));
            let mu = omegakit::measure_of_lengths(&requests.iter().map(|r| r.length).collect::<Vec<_>>());
            out.value("mu", &mu.to_rational());
        }
        Command::Decompose { file, k } => {
            let seq = read_sequence(&file)?;
            let k = stage_or_all(k, seq.len(), "terms")?;
            let dec = dyadic_decompose(&seq, k)?;
            for (n, r) in dec.lengths.iter().zip(&dec.partials) {
                out.value(&n.to_string(), &r.to_rational());
            }
        }
        Command::Omega { table, k, chaitin } => {
            let t = format::parse_table(&read_input(&table)?)?;
            let k = stage_or_all(k, t.len(), "entries")?;
            if chaitin {
                let prefix = omegakit::MachineTable::new(t.entries()[..k].to_vec()).expect("sub-table of a prefix-free table");
                out.text.push_str(&format::write_table(&chaitin_table(&prefix)));
            } else {
                for (i, w) in t.omega_partials().iter().take(k).enumerate() {
                    out.value(&(i + 1).to_string(), &w.to_rational());
                }
            }
        }
        Command::Compose { table, c, gamma, k } => {
            let v = format::parse_table(&read_input(&table)?)?;
            let gamma = format::parse_lengths(&gamma)?;
            let k = stage_or_all(k, v.len(), "entries")?;
            let (u, mu) = omega_rep_compose(&v, c, &gamma, k)?;
            let want = expected_rep_measure(&v, c, &gamma, k)?;
            out.text.push_str(&format::write_table(&u));
            out.value("mu", &mu.to_rational());
            out.value("expected", &want.to_rational());
            if mu != want {
                return Err(domain(format!("measure {mu} differs from expected {want}")));
            }
        }
        Command::Dominate { a, b, n, depth } => {
            let (a, b) = (read_sequence(&a)?, read_sequence(&b)?);
            let depth = match depth {
                Some(d) => d,
                None => a.len().min(b.len()),
            };
            let stage = build_test(&a, &b, n, depth)?;
            out.text.push_str(&stage.to_string());
            out.value("measure", &stage.measure());
            let w = extract_witness(&a, &b, n, depth)?;
            out.line(format!("witness\t{w}"));
            let (a_sub, b_sub) = w.subsequences(&a, &b);
            let c = omegakit::solovay::domination_constant(n);
            if !stage.is_valid() || !check_domination(&a_sub, &b_sub, &c)? {
                return Err(domain("witness subsequences fail the domination check"));
            }
        }
        Command::Test { which: TestCommand::Complexity { table, m, k } } => {
            let u = format::parse_table(&read_input(&table)?)?;
            let k = stage_or_all(k, u.len(), "entries")?;
            let stage = complexity_test_prefix_set(&u, m, k)?;
            out.text.push_str(&stage.to_string());
            out.value("measure", &stage.measure().to_rational());
        }
        Command::Test { which: TestCommand::Compress { stages } } => {
            let stages = stages
                .iter()
                .map(|p| Ok(format::parse_stage(&read_input(p)?)?))
                .collect::<Result<Vec<_>, Failure>>()?;
            let m = compression_machine(&stages)?;
            out.text.push_str(&format::write_table(&m));
            out.value("mu", &m.domain_measure().to_rational());
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse().map_err(usage)?;
            let reports = verify::run_suite(suite, seed);
            for r in &reports {
                out.line(r.to_string());
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            out.line(format!("suites passed {}/{}", reports.len() - failed, reports.len()));
            if failed > 0 {
                return Err(domain(format!("{failed} suite(s) failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { text: String::new(), decimal: cli.decimal };
    let result = run(cli, &mut out);
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.text.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
