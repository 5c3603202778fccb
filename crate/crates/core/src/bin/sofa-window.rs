//! Command-line front end: decide window-passage questions on JSON scenes.

use clap::Parser;

use sofa_window::scene::{parse_scene, round_numbers, run, CliError, Command};

use std::io::Read;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "sofa-window",
    about = "Decide whether a convex polytope passes through a planar window",
    long_about = None,
    after_help = "Commands: hull, width, gate, slide, fixed-slide, slide-trade, project-width,\n\
                  circle-thresholds, tetra-motion, must-rotate, plan-2dof, validate, render.\n\
                  Exit codes: 0 feasible/success, 2 infeasible verdict, 1 error."
)]
struct Cli {
    /// Command to run.
    command: String,
    /// Scene file (JSON). Use '-' for stdin. Defaults to an empty scene.
    #[arg(long)]
    scene: Option<String>,
    /// Write the result record here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Write the rendered SVG here (render command).
    #[arg(long)]
    svg: Option<String>,
    /// Override the per-stage sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Override grid sizes (planner steps, sampling resolutions).
    #[arg(long)]
    grid: Option<usize>,
    /// Override the containment tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn fail(err: &CliError) -> ExitCode {
    let payload = serde_json::json!({
        "error": { "code": err.code(), "message": err.to_string() }
    });
    eprintln!("{payload}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(command) = Command::parse(&cli.command) else {
        return fail(&CliError::Parse(format!(
            "unknown command {:?}",
            cli.command
        )));
    };

    let text = match cli.scene.as_deref() {
        None => "{}".to_string(),
        Some("-") => {
            let mut buf = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
                return fail(&CliError::Parse(e.to_string()));
            }
            buf
        }
        Some(path) => match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return fail(&CliError::Parse(format!("{path}: {e}"))),
        },
    };

    let mut scene = match parse_scene(&text) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    if let Some(samples) = cli.samples {
        scene.samples = samples.max(2);
    }
    if let Some(grid) = cli.grid {
        scene.grid = grid;
        scene.resolution = grid.max(100);
    }
    if let Some(tol) = cli.tol {
        if tol <= 0.0 {
            return fail(&CliError::Validation("tol must be > 0".into()));
        }
        scene.tol = tol;
    }

    let started = std::time::Instant::now();
    let output = match run(command, &scene) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let mut record = output.record;
    record.timing_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(svg) = &output.svg {
        match &cli.svg {
            Some(path) => {
                if let Err(e) = std::fs::write(path, svg) {
                    return fail(&CliError::Render(format!("{path}: {e}")));
                }
            }
            None => print!("{svg}"),
        }
    }

    let mut value = serde_json::to_value(&record).expect("record serializes");
    round_numbers(&mut value);
    let rendered = serde_json::to_string_pretty(&value).expect("record prints");
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered + "\n") {
                return fail(&CliError::Render(format!("{path}: {e}")));
            }
        }
        None => {
            if output.svg.is_none() || cli.svg.is_some() {
                println!("{rendered}");
            }
        }
    }

    ExitCode::from(record.verdict.exit_code() as u8)
}
