use anyhow::{Context, Result};
use cellnav_core::{intersections_csv, state_graph_dot, truth_table_csv, Tessellation};
use cellnav_cli::render::{render_ascii, render_svg};
use cellnav_cli::runner::{run, RunArtifacts, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Deterministic cellular-automaton robot navigation simulator.
#[derive(Parser)]
#[command(name = "cellnav", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one run of a map, optionally driven by a scenario script.
    ///
    /// Exits 0 when every robot reaches its target, 2 when any robot
    /// deadlocks or the tick budget runs out, and 1 on input errors.
    Run(RunArgs),
    /// Export motion-control-unit artifacts.
    #[command(subcommand)]
    Fsm(FsmCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Map file: `.` free, `#` obstacle, `S`/`F` single robot, digits with
    /// matching letters (`0`/`a`, `1`/`b`, ...) for fleets.
    #[arg(long)]
    map: PathBuf,
    /// Timed events: `TICK add X Y`, `TICK remove X Y`,
    /// `TICK retarget ROBOT X Y`.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TessArg::Square)]
    tessellation: TessArg,
    /// Receiver-cell update rule (136 or 172).
    #[arg(long, default_value_t = 136)]
    rule: u8,
    /// `known` plans on the full map; `fog` plans only on sensed cells.
    #[arg(long, value_enum, default_value_t = ModeArg::Known)]
    mode: ModeArg,
    /// Tick budget; defaults to 4 * width * height.
    #[arg(long)]
    max_ticks: Option<u32>,
    /// Recorded in the summary and used by replay tooling; runs themselves
    /// are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Minimum robot separation distance to monitor.
    #[arg(long, default_value_t = 1)]
    d_min: u32,
    /// Refuse moves that would violate the separation distance instead of
    /// only logging them.
    #[arg(long)]
    strict_separation: bool,
    /// Write the step trace as JSON lines (`-` for stdout).
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RenderArg::None)]
    render: RenderArg,
    /// Where to write the rendering (`-` or omitted for stdout).
    #[arg(long)]
    render_out: Option<PathBuf>,
    /// Print the run summary to stdout.
    #[arg(long)]
    summary: bool,
    /// Write trajectory-intersection records as CSV (`-` for stdout).
    #[arg(long)]
    intersections: Option<PathBuf>,
    /// Write each robot's trajectory memory (turn/revolution records) as
    /// CSV (`-` for stdout). Fleets emit one `robot N` block per robot.
    #[arg(long)]
    memory: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TessArg {
    Square,
    Hex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Known,
    Fog,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderArg {
    None,
    Ascii,
    Svg,
}

#[derive(Subcommand)]
enum FsmCommand {
    /// Write the control unit's full transition table as CSV.
    ExportTruthTable { out: PathBuf },
    /// Write the control unit's state graph as Graphviz DOT.
    ExportGraph { out: PathBuf },
}

fn write_output(path: &Path, content: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        print!("{content}");
        Ok(())
    } else {
        fs::write(path, content).with_context(|| format!("writing {}", path.display()))
    }
}

fn memory_csv(artifacts: &RunArtifacts) -> String {
    let robots = &artifacts.world.robots;
    if robots.len() == 1 {
        return robots[0].odometer.memory().to_csv();
    }
    let mut out = String::new();
    for robot in robots {
        out.push_str(&format!("robot {}\n", robot.id.0));
        out.push_str(&robot.odometer.memory().to_csv());
        out.push('\n');
    }
    out
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode> {
    let map_text = fs::read_to_string(&args.map)
        .with_context(|| format!("reading map {}", args.map.display()))?;
    let scenario_text = args
        .scenario
        .as_ref()
        .map(|path| {
            fs::read_to_string(path).with_context(|| format!("reading scenario {}", path.display()))
        })
        .transpose()?;
    let config = RunConfig {
        tessellation: match args.tessellation {
            TessArg::Square => Tessellation::Square,
            TessArg::Hex => Tessellation::Hex,
        },
        rule: args.rule,
        fog: matches!(args.mode, ModeArg::Fog),
        max_ticks: args.max_ticks,
        seed: args.seed,
        d_min: args.d_min,
        strict_separation: args.strict_separation,
    };
    let artifacts = run(&map_text, scenario_text.as_deref(), &config)?;

    if let Some(path) = &args.trace {
        write_output(path, &artifacts.trace_jsonl)?;
    }
    let rendering = match args.render {
        RenderArg::None => None,
        RenderArg::Ascii => Some(render_ascii(&artifacts.world.grid, &artifacts.world.robots)),
        RenderArg::Svg => Some(render_svg(&artifacts.world.grid, &artifacts.world.robots)),
    };
    if let Some(content) = rendering {
        match &args.render_out {
            Some(path) => write_output(path, &content)?,
            None => print!("{content}"),
        }
    }
    if args.summary {
        print!("{}", artifacts.summary);
    }
    if let Some(path) = &args.intersections {
        write_output(path, &intersections_csv(&artifacts.world.intersections))?;
    }
    if let Some(path) = &args.memory {
        write_output(path, &memory_csv(&artifacts))?;
    }
    Ok(ExitCode::from(artifacts.exit_code as u8))
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Fsm(FsmCommand::ExportTruthTable { out }) => {
            write_output(&out, &truth_table_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fsm(FsmCommand::ExportGraph { out }) => {
            write_output(&out, &state_graph_dot())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
