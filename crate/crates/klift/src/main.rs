//! Command line front end: read a script, bind declarations, run the
//! commands, and emit a deterministic text or JSON report.
//!
//! Commands are independent given the declarations above them, so
//! `--parallel` may fan them out over worker threads; each command
//! captures a snapshot of the environment at its position in the
//! script, and outputs are reassembled in script order, so the report
//! is byte identical whatever the thread count.

mod eval;
mod fixtures;
mod render;
mod script;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use clap::Parser;

use eval::{eval_decl, run_command, Bounds, CmdOutput, Env};
use render::{document_json, document_string, document_text, CommandRecord};
use script::{parse, Group, Pos, Stmt};

#[derive(Parser)]
#[command(
    name = "klift",
    version,
    about = "Graded module computations, Koszul homology, derived functors, and lifting experiments over exact fields"
)]
struct Cli {
    /// Script file to execute.
    script: PathBuf,
    /// Emit the structured JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Fan independent commands out over worker threads.
    #[arg(long)]
    parallel: bool,
    /// Seed for isomorphism searches.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Retraction search breadth for lifting commands.
    #[arg(long = "retry-breadth", default_value_t = 1)]
    retry_breadth: usize,
}

struct Pending {
    index: usize,
    echo: String,
    name: String,
    groups: Vec<Group>,
    pos: Pos,
    env: Env,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let src = match std::fs::read_to_string(&cli.script) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("klift: cannot read {}: {e}", cli.script.display());
            return ExitCode::from(2);
        }
    };
    let stmts = match parse(&src) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("klift: {e}");
            return ExitCode::from(2);
        }
    };
    let bounds = Bounds {
        seed: cli.seed,
        retry_breadth: cli.retry_breadth.max(1),
        ..Bounds::default()
    };
    let mut env = Env::default();
    let mut pending = Vec::new();
    for stmt in stmts {
        match stmt {
            Stmt::Decl { kind, name, rhs } => {
                if let Err(e) = eval_decl(&mut env, kind, &name, &rhs) {
                    eprintln!("klift: {e}");
                    return ExitCode::from(2);
                }
            }
            Stmt::Command {
                name,
                groups,
                pos,
                echo,
            } => {
                pending.push(Pending {
                    index: pending.len(),
                    echo,
                    name,
                    groups,
                    pos,
                    env: env.clone(),
                });
            }
        }
    }
    let outputs = execute(&pending, &bounds, cli.parallel);
    let records: Vec<CommandRecord> = pending
        .iter()
        .zip(outputs)
        .map(|(p, out)| CommandRecord {
            index: p.index,
            echo: p.echo.clone(),
            out,
        })
        .collect();
    let all_ok = records.iter().all(|r| r.out.ok);
    if cli.json {
        print!("{}", document_string(&document_json(&bounds, &records)));
    } else {
        print!("{}", document_text(&bounds, &records));
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn worker_count(n_cmds: usize) -> usize {
    let cap = std::env::var("KLIFT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(4);
    cap.min(n_cmds).max(1)
}

/// Run all commands, sequentially or on a small worker pool. Workers
/// claim commands by index; results land in per-command slots so the
/// output order never depends on scheduling.
fn execute(pending: &[Pending], bounds: &Bounds, parallel: bool) -> Vec<CmdOutput> {
    if !parallel || pending.len() <= 1 {
        return pending
            .iter()
            .map(|p| run_command(&p.env, bounds, &p.name, &p.groups, p.pos))
            .collect();
    }
    let slots: Vec<OnceLock<CmdOutput>> = (0..pending.len()).map(|_| OnceLock::new()).collect();
    let next = AtomicUsize::new(0);
    let workers = worker_count(pending.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= pending.len() {
                    break;
                }
                let p = &pending[i];
                let out = run_command(&p.env, bounds, &p.name, &p.groups, p.pos);
                let _ = slots[i].set(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("every command slot filled"))
        .collect()
}
