//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on invalid input (including usage errors),
//! 1 on internal failures. Data goes to stdout or the named file, diagnostics
//! to stderr.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use disentangle::partitions::{
    growth_report, term_count, write_growth_csv, GrowthRow, PartitionTerm, TermIter, MAX_COUNT_PARTIES,
};
use disentangle::qstate::states::{bell_phi_plus, ghz, maximally_mixed, werner};
use disentangle::qstate::DensityMatrix;
use disentangle::ree::{ree, ReeOptions};
use disentangle::sentences::{sentence_metrics, write_sentence, MetricsWriter};
use disentangle::separability::{
    classify_tripartite, concurrence, ppt, sample_term_state, two_qubit_entangled,
};
use disentangle::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "disentangle", version)]
#[command(about = "Count, enumerate and probe the terms of general n-party disentangled states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the terms (Bell(n) - 1) of the n-party disentangled form.
    Count {
        #[arg(long)]
        n: usize,
        /// Also report 2^n and whether the term count exceeds it.
        #[arg(long = "compare-2n")]
        compare_2n: bool,
    },
    /// Stream every term as a JSON array.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the canonical sentence, optionally followed by its metrics.
    Sentence {
        #[arg(long)]
        n: usize,
        /// Append metrics JSON (measured over the emitted sentence line).
        #[arg(long)]
        metrics: bool,
        /// Write the sentence here; metrics still go to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a sentence file and print its metrics.
    Metrics {
        #[arg(long)]
        input: PathBuf,
    },
    /// Growth table of term counts against 2^n, as CSV.
    Growth {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named state as a state file.
    State {
        #[arg(long, value_enum)]
        kind: StateKind,
        /// Werner mixing parameter.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Qubit count for ghz and mixed.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial-transpose test across a cut.
    Ppt {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated party indices.
        #[arg(long, value_delimiter = ',', required = true)]
        cut: Vec<usize>,
    },
    /// PPT verdicts across the single-party cuts of a three-qubit state.
    Classify {
        #[arg(long)]
        state: PathBuf,
    },
    /// Two-qubit concurrence and exact entanglement decision.
    Concurrence {
        #[arg(long)]
        state: PathBuf,
    },
    /// Relative entropy of entanglement of a two-qubit state.
    Ree {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = ReeOptions::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = ReeOptions::default().max_iters)]
        max_iters: usize,
        #[arg(long, default_value_t = ReeOptions::default().restarts)]
        restarts: usize,
        #[arg(long, env = "REE_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the minimizing separable state here.
        #[arg(long)]
        sigma_out: Option<PathBuf>,
    },
    /// Sample a state of one summation family.
    Sample {
        /// Restricted growth string, e.g. 001 or 0,0,1.
        #[arg(long)]
        term: String,
        /// Party count; must match the term length when given.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        components: usize,
        #[arg(long, env = "REE_SEED", default_value_t = 0)]
        seed: u64,
        /// State file to write.
        #[arg(long)]
        out: PathBuf,
        /// Ensemble JSON file; printed to stdout when omitted.
        #[arg(long)]
        ensemble_out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StateKind {
    Bell,
    Werner,
    Ghz,
    Mixed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = output(None)?;
    serde_json::to_writer(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<DensityMatrix> {
    let bytes = read_input(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Format(format!("{}: not UTF-8 at byte {}", path.display(), e.valid_up_to())))?;
    DensityMatrix::from_json(text).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    let mut out = output(Some(path))?;
    writeln!(out, "{}", rho.to_json())?;
    out.flush()?;
    Ok(())
}

fn parse_rgs(text: &str) -> Result<Vec<u8>> {
    let parts: Vec<&str> = if text.contains(',') {
        text.split(',').map(str::trim).collect()
    } else {
        text.split("").filter(|s| !s.is_empty()).collect()
    };
    parts
        .iter()
        .map(|p| {
            p.parse::<u8>()
                .map_err(|_| Error::Domain(format!("bad label {p:?} in term {text:?}")))
        })
        .collect()
}

fn check_count_range(n: usize) -> Result<()> {
    if !(2..=MAX_COUNT_PARTIES).contains(&n) {
        return Err(Error::Domain(format!(
            "n must be in 2..={MAX_COUNT_PARTIES}, got {n}"
        )));
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Count { n, compare_2n } => {
            check_count_range(n)?;
            let row = GrowthRow::new(n)?;
            let mut doc = json!({
                "n": n,
                "bell": row.bell.to_string(),
                "term_count": row.term_count.to_string(),
            });
            if compare_2n {
                doc["two_pow_n"] = json!(row.two_pow_n.to_string());
                doc["exceeds"] = json!(row.exceeds);
            }
            print_json(&doc)
        }
        Command::Enumerate { n, out } => {
            let terms = TermIter::new(n)?;
            let mut w = output(out.as_deref())?;
            w.write_all(b"[")?;
            for (i, term) in terms.enumerate() {
                w.write_all(if i == 0 { b"\n" } else { b",\n" })?;
                serde_json::to_writer(&mut w, &term).map_err(io::Error::from)?;
            }
            w.write_all(b"\n]\n")?;
            w.flush()?;
            Ok(())
        }
        Command::Sentence { n, metrics, out } => {
            let terms = TermIter::new(n)?;
            let mut w = MetricsWriter::new(output(out.as_deref())?);
            let count = write_sentence(&mut w, terms)?;
            w.write_all(b"\n")?;
            let (mut inner, m) = w.finish(count)?;
            if metrics && out.is_none() {
                serde_json::to_writer(&mut inner, &m).map_err(io::Error::from)?;
                writeln!(inner)?;
                inner.flush()?;
            } else {
                inner.flush()?;
                drop(inner);
                if metrics {
                    print_json(&m)?;
                }
            }
            Ok(())
        }
        Command::Metrics { input } => print_json(&sentence_metrics(&read_input(&input)?)?),
        Command::Growth { max, out } => {
            let rows = growth_report(max)?;
            write_growth_csv(&rows, output(out.as_deref())?)?;
            Ok(())
        }
        Command::State { kind, p, n, out } => {
            let rho = match kind {
                StateKind::Bell => bell_phi_plus(),
                StateKind::Werner => werner(p)?,
                StateKind::Ghz => ghz(n)?,
                StateKind::Mixed => {
                    if !(1..=8).contains(&n) {
                        return Err(Error::Capacity(format!("{n} qubits")));
                    }
                    maximally_mixed(&vec![2; n])
                }
            };
            match out {
                Some(path) => write_state(&path, &rho),
                None => {
                    println!("{}", rho.to_json());
                    Ok(())
                }
            }
        }
        Command::Ppt { state, cut } => print_json(&ppt(&load_state(&state)?, &cut)?),
        Command::Classify { state } => print_json(&classify_tripartite(&load_state(&state)?)?),
        Command::Concurrence { state } => {
            let rho = load_state(&state)?;
            print_json(&json!({
                "concurrence": concurrence(&rho)?,
                "entangled": two_qubit_entangled(&rho)?,
            }))
        }
        Command::Ree {
            state,
            tol,
            max_iters,
            restarts,
            seed,
            sigma_out,
        } => {
            let rho = load_state(&state)?;
            let opts = ReeOptions {
                tol,
                max_iters,
                restarts,
                seed,
            };
            let r = ree(&rho, &opts)?;
            if let Some(path) = &sigma_out {
                write_state(path, &r.sigma_star)?;
            }
            let mut doc = json!({
                "value_nats": r.value,
                "value_bits": r.value / std::f64::consts::LN_2,
                "gap": r.gap,
                "iterations": r.iterations,
                "converged": r.converged,
            });
            if let Some(path) = sigma_out {
                doc["sigma_star_file"] = json!(path.display().to_string());
            }
            print_json(&doc)
        }
        Command::Sample {
            term,
            n,
            components,
            seed,
            out,
            ensemble_out,
        } => {
            let rgs = parse_rgs(&term)?;
            if let Some(n) = n {
                if n != rgs.len() {
                    return Err(Error::Domain(format!(
                        "term {term:?} has {} parties but --n is {n}",
                        rgs.len()
                    )));
                }
                term_count(n)?;
            }
            let term = PartitionTerm::from_rgs(rgs)?;
            let (rho, ensemble) = sample_term_state(&term, components, seed)?;
            write_state(&out, &rho)?;
            match ensemble_out {
                Some(path) => {
                    let mut w = output(Some(&path))?;
                    serde_json::to_writer(&mut w, &ensemble).map_err(io::Error::from)?;
                    writeln!(w)?;
                    w.flush()?;
                    Ok(())
                }
                None => print_json(&ensemble),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgs_forms() {
        assert_eq!(parse_rgs("001").unwrap(), vec![0, 0, 1]);
        assert_eq!(parse_rgs("0,1,10").unwrap(), vec![0, 1, 10]);
        assert!(parse_rgs("0a1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
