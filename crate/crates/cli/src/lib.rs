//! Library side of the `redyn` scenario runner: configuration resolution,
//! the four scenario implementations, and report schemas. The binary in
//! `main.rs` is a thin clap wrapper over [`run`].

pub mod commands;
pub mod config;
pub mod report;

use config::Overrides;

/// Exit codes: 0 success/claims verified, 1 claim failed, 2 config error,
/// 3 I/O error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Reproduce,
    Trajectory,
    Theorem,
    CpReport,
}

/// Resolve the configuration, run the scenario, emit outputs, and return the
/// process exit code.
pub fn run(scenario: Scenario, overrides: &Overrides) -> i32 {
    let cfg = match config::resolve(overrides) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return EXIT_CONFIG;
        }
    };

    let output = match scenario {
        Scenario::Reproduce => commands::run_reproduce(&cfg),
        Scenario::Trajectory => commands::run_trajectory(&cfg),
        Scenario::Theorem => commands::run_theorem(&cfg),
        Scenario::CpReport => commands::run_cp_report(&cfg),
    };

    match &cfg.out {
        Some(path) => {
            print!("{}", output.human);
            if let Err(e) = std::fs::write(path, &output.artifact) {
                eprintln!("i/o error: cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
            println!("wrote {}", path.display());
        }
        None => {
            if output.artifact_only_without_out {
                print!("{}", output.artifact);
            } else {
                print!("{}", output.human);
                print!("{}", output.artifact);
            }
        }
    }
    output.exit_code
}
