use std::process::ExitCode;

use clap::Parser;

use chowalg::cache::Cache;
use chowalg::cli::{error_json, execute, Cli, VERSION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("cannot size the worker pool: {e}");
        }
    }
    let cache = Cache::from_env(VERSION);
    match execute(&cli, &cache) {
        Ok(record) => {
            let text = serde_json::to_string_pretty(&record).expect("records serialize");
            match &cli.common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::from(record.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&error_json(&e)).expect("errors serialize"));
            ExitCode::from(1)
        }
    }
}
