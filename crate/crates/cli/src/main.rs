use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use fibred::corpus;
use fibred::format::{self, Document};
use fibred::report::{Check, Report};

/// Workbench for finite categories, fibrations and their properties.
#[derive(Parser)]
#[command(name = "fibred", version, disable_help_subcommand = true)]
struct Cli {
    /// search cap for functor enumerations
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: usize,
    /// zigzag length cap for localizations
    #[arg(long, global = true, default_value_t = 8)]
    zigzag_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// include wall-clock timings (reports are then no longer byte-stable)
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate documents; exit 0 when every block is lawful.
    Validate { files: Vec<PathBuf> },
    /// Run a construction and print the resulting document.
    Construct {
        kind: String,
        /// input document (defaults to the builtin corpus)
        #[arg(long)]
        file: Option<PathBuf>,
        /// block names consumed by the construction
        #[arg(long)]
        name: Vec<String>,
        /// object id argument (slice, coslice...)
        #[arg(long)]
        at: Option<usize>,
    },
    /// Decide a fibrational property.
    Check {
        property: String,
        #[arg(long)]
        file: Option<PathBuf>,
        /// fibration block name (defaults to the only fibration present)
        #[arg(long)]
        name: Option<String>,
        /// extra object argument (generating family...)
        #[arg(long)]
        at: Option<usize>,
    },
    /// Classify a geometric morphism through both routes per property.
    ClassifyGm {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Moens reconstruction (gl(Δ) comparison); `--general` runs the
    /// terminal-preserving variant.
    Moens {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        general: bool,
    },
    /// Run the whole corpus verification sweep; exit 2 on any divergence.
    SweepCorpus {
        /// additional documents to validate alongside the builtin corpus
        #[arg(long)]
        seed_corpus: Option<PathBuf>,
        /// write the builtin corpus document to this path
        #[arg(long)]
        emit_documents: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(file: &Option<PathBuf>) -> Result<Document, String> {
    match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            format::parse(&text).map_err(|e| e.to_string())
        }
        None => Ok(corpus::documents()),
    }
}

fn the_fibration(
    doc: &Document,
    name: &Option<String>,
) -> Result<(String, Arc<fibred::fib::FibrationData>), String> {
    match name {
        Some(n) => doc
            .fibration(n)
            .cloned()
            .map(|f| (n.clone(), f))
            .ok_or_else(|| format!("no fibration named `{n}`")),
        None => {
            let mut found = None;
            for n in &doc.order {
                if let Some(f) = doc.fibration(n) {
                    if found.is_some() {
                        return Err("several fibrations present; pass --name".into());
                    }
                    found = Some((n.clone(), f.clone()));
                }
            }
            found.ok_or_else(|| "no fibration block in the document".into())
        }
    }
}

fn emit(cli_format: Format, out: &Option<PathBuf>, report: &Report) -> Result<(), String> {
    let text = match cli_format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { files } => {
            let mut report = Report::new("validate");
            for f in files {
                let text = std::fs::read_to_string(f).map_err(|e| format!("{}: {e}", f.display()))?;
                match format::parse(&text) {
                    Ok(doc) => {
                        report.push(
                            Check::new(f.display().to_string(), true)
                                .witness(format!("{} blocks", doc.order.len())),
                        );
                    }
                    Err(e) => {
                        report.push(
                            Check::new(f.display().to_string(), false).counterexample(e.to_string()),
                        );
                        emit(cli.format, &cli.out, &report)?;
                        return Ok(ExitCode::from(1));
                    }
                }
            }
            emit(cli.format, &cli.out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Construct { kind, file, name, at } => {
            let doc = load(file)?;
            let report =
                fibred::driver::run_construction_with(&doc, kind, name, *at, cap, cli.zigzag_cap)?;
            emit(cli.format, &cli.out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { property, file, name, at } => {
            let doc = load(file)?;
            let (_fname, fib) = the_fibration(&doc, name)?;
            let report = fibred::driver::check_property(&fib, property, *at, cap)?;
            emit(cli.format, &cli.out, &report)?;
            Ok(if report.any_divergence() { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::ClassifyGm { file, name } => {
            let doc = load(file)?;
            let name = match name {
                Some(n) => n.clone(),
                None => doc
                    .order
                    .iter()
                    .find(|n| doc.adjunction(n).is_some())
                    .cloned()
                    .ok_or("no adjunction block in the document")?,
            };
            let (report, divergent) = fibred::driver::classify_gm(&doc, &name)?;
            emit(cli.format, &cli.out, &report)?;
            Ok(if divergent { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Moens { file, name, general } => {
            let doc = load(file)?;
            let (fname, _) = the_fibration(&doc, name)?;
            let report = fibred::driver::run_moens(&doc, &fname, *general)?;
            emit(cli.format, &cli.out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepCorpus { seed_corpus, emit_documents } => {
            if let Some(path) = emit_documents {
                std::fs::write(path, format::print(&corpus::documents()))
                    .map_err(|e| e.to_string())?;
            }
            let mut extra_ok = true;
            let mut extra_checks = Vec::new();
            if let Some(dir) = seed_corpus {
                for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
                    let path = entry.map_err(|e| e.to_string())?.path();
                    let is_doc = path
                        .extension()
                        .and_then(|e| e.to_str())
                        .map(|e| matches!(e, "fcat" | "ffib" | "fidx"))
                        .unwrap_or(false);
                    if !is_doc {
                        continue;
                    }
                    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
                    match format::parse(&text) {
                        Ok(_) => extra_checks.push(Check::new(format!("seed {}", path.display()), true)),
                        Err(e) => {
                            extra_ok = false;
                            extra_checks.push(
                                Check::new(format!("seed {}", path.display()), false)
                                    .counterexample(e.to_string()),
                            );
                        }
                    }
                }
            }
            let t0 = std::time::Instant::now();
            let (mut report, ok) = corpus::sweep(cap);
            if cli.timings {
                if let Some(first) = report.checks.first_mut() {
                    first.timing_ms = Some(t0.elapsed().as_millis());
                }
            }
            for c in extra_checks {
                report.push(c);
            }
            emit(cli.format, &cli.out, &report)?;
            Ok(if ok && extra_ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}
