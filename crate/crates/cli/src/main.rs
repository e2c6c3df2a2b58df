use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use k3corr::criteria_x::{decide_iso_general_x, h1_check, h1_of, SeriesWitness};
use k3corr::divisorial::div_catalogue;
use k3corr::pell::{fundamental_unit, orbit, solve_bounded, solve_square};
use k3corr::selftest::{self, Scale};
use k3corr::y_side::{decide_moduli_self, h1_check_y, h1_of_y, YLattice};
use k3corr::{MukaiShape, Verdict, XLattice, DEFAULT_Q_BOUND};

mod report;

use report::{CatalogueDoc, CheckDoc, PellDoc, WitnessDoc};

/// Exit statuses shared by every command.
const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "k3corr", version, about = "Decide when the moduli space of a rank-2 polarized K3 is isomorphic to the surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Small,
    Medium,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Is the moduli space of sheaves with Mukai vector (r, H, s) isomorphic to X?
    #[command(name = "check-x", allow_negative_numbers = true)]
    CheckX {
        r: i64,
        s: i64,
        d: BigInt,
        mu: BigInt,
        #[arg(long, default_value_t = DEFAULT_Q_BOUND)]
        q_bound: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: CheckFormat,
    },
    /// The same question for the lattice invariants (a, b, c, d, nu) of Y.
    #[command(name = "check-y", allow_negative_numbers = true)]
    CheckY {
        a: i64,
        b: i64,
        c: i64,
        d: BigInt,
        nu: BigInt,
        #[arg(long, default_value_t = DEFAULT_Q_BOUND)]
        q_bound: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: CheckFormat,
    },
    /// Catalogue of d <= d-max for which some lattice with (r, s) qualifies.
    Div {
        r: i64,
        s: i64,
        #[arg(long, default_value_t = 6)]
        q_max: u64,
        #[arg(long, default_value = "1000")]
        d_max: BigInt,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Solutions of p^2 - d q^2 = n with |q| <= q-bound, plus orbit steps.
    #[command(allow_negative_numbers = true)]
    Pell {
        d: BigInt,
        n: BigInt,
        #[arg(long, default_value_t = DEFAULT_Q_BOUND)]
        q_bound: u64,
        /// Unit steps to apply to the smallest solution.
        #[arg(long, default_value_t = 0)]
        orbit: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: CheckFormat,
    },
    /// Run the oracle-equivalence sweeps and print a pass/fail matrix.
    Selftest {
        #[arg(long, value_enum, default_value = "small")]
        scale: ScaleArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INVALID);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::from(EXIT_YES),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()) == Some(io::ErrorKind::BrokenPipe)
    })
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("K3CORR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().with_context(|| format!("K3CORR_THREADS={raw:?} is not a count"))?;
    if n == 0 {
        bail!("K3CORR_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn verdict_code<W>(v: &Verdict<W>) -> u8 {
    if v.is_yes() {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    let mut out = io::stdout().lock();
    match command {
        Command::CheckX { r, s, d, mu, q_bound, format } => {
            let l = XLattice::new(r, s, d, mu)?;
            let verdict = decide_iso_general_x(&l, q_bound);
            let witnesses = verdict
                .witnesses()
                .iter()
                .map(|w| {
                    let h1 = h1_of(&l, w);
                    let rep = h1_check(&l, &h1, w.series)?;
                    Ok(WitnessDoc::new(w, &h1, &rep))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let params = vec![
                ("r", r.to_string()),
                ("s", s.to_string()),
                ("d", l.d().to_string()),
                ("mu", l.mu().to_string()),
                ("q_bound", q_bound.to_string()),
            ];
            let doc = CheckDoc::new("check-x", params, &verdict, q_bound, witnesses);
            emit_check(&mut out, format, &doc, &verdict)?;
            Ok(verdict_code(&verdict))
        }
        Command::CheckY { a, b, c, d, nu, q_bound, format } => {
            let l = YLattice::new(a, b, c, d, nu)?;
            let verdict = decide_moduli_self(&l, q_bound);
            let witnesses = verdict
                .witnesses()
                .iter()
                .map(|w| {
                    let h1 = h1_of_y(&l, w);
                    let rep = h1_check_y(&l, &h1, w.series)?;
                    Ok(WitnessDoc::new(w, &h1, &rep))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let params = vec![
                ("a", a.to_string()),
                ("b", b.to_string()),
                ("c", c.to_string()),
                ("d", l.d().to_string()),
                ("nu", l.nu().to_string()),
                ("q_bound", q_bound.to_string()),
            ];
            let doc = CheckDoc::new("check-y", params, &verdict, q_bound, witnesses);
            emit_check(&mut out, format, &doc, &verdict)?;
            Ok(verdict_code(&verdict))
        }
        Command::Div { r, s, q_max, d_max, format, output } => {
            if d_max < BigInt::from(1) {
                bail!("--d-max must be positive");
            }
            let shape = MukaiShape::split(r, s)?;
            let cat = div_catalogue(&shape, q_max, &d_max)?;
            let doc = CatalogueDoc::new(&cat);
            let mut sink: Box<dyn Write> = match &output {
                Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
                None => Box::new(io::stdout().lock()),
            };
            match format {
                TableFormat::Json => {
                    serde_json::to_writer_pretty(&mut sink, &doc)?;
                    writeln!(sink)?;
                }
                TableFormat::Csv => doc.write_csv(&mut sink)?,
            }
            sink.flush()?;
            Ok(EXIT_YES)
        }
        Command::Pell { d, n, q_bound, orbit: steps, format } => {
            if d < BigInt::from(1) {
                bail!("d must be positive");
            }
            let unit = fundamental_unit(&d).ok();
            let sols = match &unit {
                Some(_) => solve_bounded(&d, &n, q_bound),
                None => solve_square(&d.sqrt(), &n),
            };
            let walk = match (&unit, sols.first()) {
                (Some(u), Some(first)) if steps > 0 => orbit(first, u, steps)?,
                _ => Vec::new(),
            };
            let doc = PellDoc::new(&d, &n, q_bound, unit.as_ref(), &sols, &walk);
            match format {
                CheckFormat::Json => {
                    serde_json::to_writer_pretty(&mut out, &doc)?;
                    writeln!(out)?;
                }
                CheckFormat::Text => doc.write_text(&mut out)?,
            }
            Ok(if sols.is_empty() { EXIT_NO } else { EXIT_YES })
        }
        Command::Selftest { scale } => {
            let scale = match scale {
                ScaleArg::Small => Scale::Small,
                ScaleArg::Medium => Scale::Medium,
                ScaleArg::Full => Scale::Full,
            };
            let outcomes = selftest::run(scale);
            let mut failed = 0;
            for o in &outcomes {
                writeln!(
                    out,
                    "{:4} {:28} {:>8} checked {:>7.2}s  {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.checked,
                    o.seconds,
                    o.detail
                )?;
                failed += usize::from(!o.passed);
            }
            writeln!(out, "{} of {} properties passed", outcomes.len() - failed, outcomes.len())?;
            Ok(if failed == 0 { EXIT_YES } else { EXIT_NO })
        }
    }
}

fn emit_check(out: &mut impl Write, format: CheckFormat, doc: &CheckDoc, verdict: &Verdict<SeriesWitness>) -> anyhow::Result<()> {
    match format {
        CheckFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, doc)?;
            writeln!(out)?;
        }
        CheckFormat::Text => {
            match verdict {
                Verdict::Yes(_) => writeln!(out, "YES")?,
                Verdict::NoWithinBound { q_bound } => writeln!(out, "NO within |q| <= {q_bound}")?,
                Verdict::No { reason } => writeln!(out, "NO: {reason}")?,
            }
            for w in &doc.witnesses {
                writeln!(
                    out,
                    "  ({}, {}, {}, {}) -> ({}, {})  ii:{}  h1=({}, {}) h1^2={}",
                    w.series, w.alpha, w.p, w.q, w.x, w.y, w.ii_sign, w.h1.x, w.h1.y, w.h1_square
                )?;
            }
        }
    }
    Ok(())
}
