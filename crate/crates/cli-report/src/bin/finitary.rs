//! Command-line driver for the workbench.
//!
//! Every subcommand writes a run manifest (JSON, final stdout line; also a
//! file under `--out`) recording the command, parameters, seed, RNG, and
//! result payload.  Exit codes: 0 success, 1 usage or parameter error,
//! 2 completed run whose certificate failed (for example, a witness scan
//! that found nothing).

use clap::{Parser, Subcommand, ValueEnum};
use cli_report::commands::{self, CommandOutcome};
use cli_report::manifest::RunManifest;
use cli_report::verify::{self, Scale};
use process_core::{decimal12, Error};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "finitary",
    version,
    about = "Simulation and verification workbench for a marker-block code on the uniform ten-symbol source"
)]
struct Cli {
    /// RNG seed; required by every randomized subcommand (no wall-clock
    /// seeding).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for the run manifest (and CSV tables with --csv).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Monte Carlo worker threads; results are independent of this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Also write the command's CSV table into --out.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw an i.i.d. uniform source sample and report a digest
    Sample {
        #[arg(long)]
        length: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        origin: i64,
    },
    /// Histogram the marker-delimited block lengths of a sample
    Blocks {
        #[arg(long)]
        length: u64,
        #[arg(long, default_value_t = 30)]
        max_length: u64,
    },
    /// Apply the block code to a sample and report coverage
    Encode {
        #[arg(long)]
        length: u64,
    },
    /// Plug-in entropy rate of the source (mu) or coded (nu) process
    Entropy {
        #[arg(long)]
        process: ProcessKind,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        length: u64,
    },
    /// Scan block lengths for a repetition-decay violation and certify it
    Witness {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        hprime: f64,
        #[arg(long)]
        l_min: u64,
        #[arg(long)]
        l_max: u64,
        #[arg(long)]
        samples: u64,
    },
    /// Evaluate the exact integer inequality chain over a range
    Chain {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        l_min: u64,
        #[arg(long)]
        l_max: u64,
    },
    /// Check the universal decay-rate bound for a forcing pattern
    Prop3 {
        #[arg(long, default_value_t = 1)]
        c: u8,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        samples: u64,
    },
    /// Run the seeded perturbation experiment on a pair of uniform samples
    Perturb {
        #[arg(long)]
        length: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, value_delimiter = ',')]
        word: Vec<u8>,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
    },
    /// Verify the i.i.d. repetition obstruction bound exhaustively
    Obstruct {
        #[arg(long)]
        pa: f64,
        #[arg(long)]
        m_max: u64,
    },
    /// Run the eight-criterion verification suite
    VerifyAll {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcessKind {
    Mu,
    Nu,
}

impl ProcessKind {
    fn name(self) -> &'static str {
        match self {
            ProcessKind::Mu => "mu",
            ProcessKind::Nu => "nu",
        }
    }
}

struct RunRecord {
    name: &'static str,
    params: BTreeMap<String, String>,
    seed: Option<u64>,
    outcome: CommandOutcome,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            return 1;
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: cannot configure {workers} workers: {err}");
            return 1;
        }
    }
    if cli.csv && cli.out.is_none() {
        eprintln!("error: --csv needs --out to know where to write");
        return 1;
    }

    let started = Instant::now();
    let record = match dispatch(&cli) {
        Ok(record) => record,
        Err(err) => {
            eprintln!("error: {err}");
            return exit_code_for(&err);
        }
    };

    let manifest = RunManifest::new(
        record.name,
        record.seed,
        record.params,
        started.elapsed().as_secs_f64(),
        record.outcome.payload.clone(),
    );
    if let Some(dir) = &cli.out {
        if let Err(err) = manifest.write(dir) {
            eprintln!("error: {err}");
            return 1;
        }
        if cli.csv {
            if let Some(table) = &record.outcome.csv {
                let path = dir.join(&table.file_name);
                if let Err(err) = std::fs::write(&path, &table.content) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return 1;
                }
            }
        }
    }
    match serde_json::to_string(&manifest) {
        Ok(text) => println!("{text}"),
        Err(err) => {
            eprintln!("error: cannot render manifest: {err}");
            return 1;
        }
    }
    if let Some(reason) = &record.outcome.certificate_failure {
        eprintln!("certificate failure: {reason}");
        return 2;
    }
    0
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Certificate(_) | Error::Sampling(_) => 2,
        _ => 1,
    }
}

fn require_seed(cli: &Cli) -> process_core::Result<u64> {
    cli.seed.ok_or_else(|| {
        Error::Config("missing required flag --seed (runs must be reproducible)".into())
    })
}

fn dispatch(cli: &Cli) -> process_core::Result<RunRecord> {
    let mut params = BTreeMap::new();
    let mut param = |key: &str, value: String| {
        params.insert(key.to_string(), value);
    };
    match &cli.command {
        Command::Sample { length, origin } => {
            let seed = require_seed(cli)?;
            param("length", length.to_string());
            param("origin", origin.to_string());
            let outcome = commands::sample_cmd(*length, *origin, seed)?;
            Ok(RunRecord {
                name: "sample",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Blocks { length, max_length } => {
            let seed = require_seed(cli)?;
            param("length", length.to_string());
            param("max_length", max_length.to_string());
            let outcome = commands::blocks_cmd(*length, *max_length, seed)?;
            Ok(RunRecord {
                name: "blocks",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Encode { length } => {
            let seed = require_seed(cli)?;
            param("length", length.to_string());
            let outcome = commands::encode_cmd(*length, seed)?;
            Ok(RunRecord {
                name: "encode",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Entropy { process, k, length } => {
            let seed = require_seed(cli)?;
            param("process", process.name().to_string());
            param("k", k.to_string());
            param("length", length.to_string());
            let outcome = commands::entropy_cmd(process.name(), *k, *length, seed)?;
            Ok(RunRecord {
                name: "entropy",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Witness {
            ell,
            epsilon,
            hprime,
            l_min,
            l_max,
            samples,
        } => {
            let seed = require_seed(cli)?;
            param("ell", ell.to_string());
            param("epsilon", epsilon.to_string());
            param("hprime", hprime.to_string());
            param("l_min", l_min.to_string());
            param("l_max", l_max.to_string());
            param("samples", samples.to_string());
            let outcome =
                commands::witness_cmd(*ell, *epsilon, *hprime, *l_min, *l_max, *samples, seed)?;
            Ok(RunRecord {
                name: "witness",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Chain { ell, l_min, l_max } => {
            param("ell", ell.to_string());
            param("l_min", l_min.to_string());
            param("l_max", l_max.to_string());
            let outcome = commands::chain_cmd(*ell, *l_min, *l_max)?;
            Ok(RunRecord {
                name: "chain",
                params,
                seed: cli.seed,
                outcome,
            })
        }
        Command::Prop3 { c, ell, r, samples } => {
            let seed = require_seed(cli)?;
            param("c", c.to_string());
            param("ell", ell.to_string());
            param("r", r.to_string());
            param("samples", samples.to_string());
            let outcome = commands::prop3_cmd(*c, *ell, *r, *samples, seed)?;
            Ok(RunRecord {
                name: "prop3",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Perturb {
            length,
            m,
            word,
            k,
            n_max,
        } => {
            let seed = require_seed(cli)?;
            param("length", length.to_string());
            param("m", m.to_string());
            param(
                "word",
                word.iter().map(u8::to_string).collect::<Vec<_>>().join(","),
            );
            param("k", k.to_string());
            param("n_max", n_max.to_string());
            let outcome = commands::perturb_cmd(*length, *m, word, *k, *n_max, seed)?;
            Ok(RunRecord {
                name: "perturb",
                params,
                seed: Some(seed),
                outcome,
            })
        }
        Command::Obstruct { pa, m_max } => {
            param("pa", pa.to_string());
            param("m_max", m_max.to_string());
            let outcome = commands::obstruct_cmd(*pa, *m_max)?;
            Ok(RunRecord {
                name: "obstruct",
                params,
                seed: cli.seed,
                outcome,
            })
        }
        Command::VerifyAll { quick } => {
            let seed = require_seed(cli)?;
            let scale = if *quick { Scale::Quick } else { Scale::Full };
            param("scale", scale.name().to_string());
            let outcomes = verify::run_all(scale, seed)?;
            for outcome in &outcomes {
                println!("{}", outcome.line());
            }
            let all_pass = outcomes.iter().all(|o| o.pass);
            let failed: Vec<u8> = outcomes
                .iter()
                .filter(|o| !o.pass)
                .map(|o| o.index)
                .collect();
            let mut csv = String::from("criterion,label,pass,seconds\n");
            for outcome in &outcomes {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    outcome.index,
                    outcome.label,
                    outcome.pass,
                    decimal12(outcome.seconds)
                ));
            }
            let payload = json!({
                "scale": scale.name(),
                "all_pass": all_pass,
                "outcomes": outcomes
                    .iter()
                    .map(|o| json!({
                        "index": o.index,
                        "label": o.label,
                        "pass": o.pass,
                        "seconds": decimal12(o.seconds),
                        "detail": o.detail,
                    }))
                    .collect::<Vec<_>>(),
            });
            let outcome = CommandOutcome {
                payload,
                csv: Some(commands::CsvTable {
                    file_name: "verify-all.csv".to_string(),
                    content: csv,
                }),
                certificate_failure: if all_pass {
                    None
                } else {
                    Some(format!(
                        "criteria {failed:?} failed; see the printed lines for details"
                    ))
                },
            };
            Ok(RunRecord {
                name: "verify-all",
                params,
                seed: Some(seed),
                outcome,
            })
        }
    }
}
