use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cgamapf::bench::{self, Algorithm, BenchConfig, BenchError, NamedMap};
use cgamapf::files::{self, SolutionFile};
use cgamapf::movingai::{parse_scen, serialize_map};
use cgamapf::{plot, render, replicas};
use cgamapf_core::instance::generate_instance;
use cgamapf_core::solution::validate_for_instance;
use cgamapf_core::svs::compute_svs;
use cgamapf_core::GridGraph;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "cgamapf",
    version,
    about = "Corridor-generating multi-agent pathfinding toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify separating vertices of a map and write the cache file.
    Svs {
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        maps: MapDir,
    },
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run a batch of seeded instances into a resumable CSV.
    Bench(BenchArgs),
    /// Draw success-rate, runtime and makespan charts from a bench CSV.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one SVG frame per time step of a solution.
    Render {
        #[arg(long)]
        map: String,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        maps: MapDir,
    },
    /// Write the built-in benchmark maps as MovingAI files.
    GenMaps {
        #[arg(long, default_value = "maps")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct MapDir {
    /// Directory searched for `<name>.map` when `--map` is not a file.
    #[arg(long, default_value = "maps")]
    map_dir: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    map: String,
    #[arg(long, conflicts_with = "seed", required_unless_present = "seed")]
    scen: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    agents: usize,
    #[arg(long)]
    algo: Algorithm,
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check the result and store the conflict report in the solution file.
    #[arg(long)]
    validate: bool,
    #[command(flatten)]
    maps: MapDir,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = replicas::BENCHMARK_MAPS.map(String::from))]
    maps: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    agents: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "cga,prp,pibt")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 15)]
    instances: usize,
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    map_dir: MapDir,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Usage = 1,
    Io = 2,
    Unsolved = 3,
}

struct Failure(Status, String);

type CmdResult = Result<Status, Failure>;

fn io_fail<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure(Status::Io, format!("{}: {e}", path.display()))
}

fn load(spec: &str, dir: &MapDir) -> Result<NamedMap, Failure> {
    bench::load_map(spec, &dir.map_dir).map_err(|e| {
        let status = match e {
            BenchError::Config(_) => Status::Usage,
            _ => Status::Io,
        };
        Failure(status, e.to_string())
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_fail(dir))?;
    }
    fs::write(path, text).map_err(io_fail(path))
}

fn cmd_svs(map: &str, out: Option<PathBuf>, dir: &MapDir) -> CmdResult {
    let m = load(map, dir)?;
    let graph = GridGraph::new(m.map);
    let svs = compute_svs(&graph);
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{}.svs.json", m.name)));
    write(&out, &files::write_svs(&m.name, &graph, &svs))?;
    println!(
        "{}: {} separating vertices of {}",
        m.name,
        svs.count(),
        graph.num_vertices()
    );
    Ok(Status::Ok)
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let m = load(&args.map, &args.maps)?;
    if args.agents == 0 || !args.time_limit.is_finite() || args.time_limit <= 0.0 {
        return Err(Failure(
            Status::Usage,
            "--agents and --time-limit must be positive".into(),
        ));
    }
    let (instance, seed) = match (&args.scen, args.seed) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(io_fail(path))?;
            let inst = parse_scen(&text, &m.map, args.agents).map_err(io_fail(path))?;
            (inst, args.seed.unwrap_or(0))
        }
        (None, Some(seed)) => {
            let inst =
                generate_instance(&m.map, args.agents, seed).map_err(|e| Failure(Status::Usage, e.to_string()))?;
            (inst, seed)
        }
        (None, None) => unreachable!("clap requires --scen or --seed"),
    };
    let svs = compute_svs(instance.graph());
    let run = bench::run_algorithm(args.algo, &instance, &svs, seed, args.time_limit);
    let solution = run.solution;
    let mut doc = SolutionFile::new(&m.name, &solution).with_goals(instance.goals());
    let mut status = if solution.solved { Status::Ok } else { Status::Unsolved };
    if args.validate {
        let report = validate_for_instance(&solution, &instance);
        // Partial paths of unsolved runs are expected to miss the goals.
        let bad = if solution.solved {
            !report.is_valid()
        } else {
            !report.conflicts.is_empty()
        };
        if bad {
            eprintln!(
                "validation failed: {} conflicts, {} structural errors",
                report.conflicts.len(),
                report.structural.len()
            );
            status = Status::Io;
        }
        doc.validation = Some(report);
    }
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}_{}_{}.json", m.name, args.algo, args.agents)));
    write(&out, &files::write_solution(&doc))?;

    let opt = |x: Option<usize>| x.map_or_else(|| "-".to_owned(), |v| v.to_string());
    let reason = run.error.map(|e| format!(" ({e})")).unwrap_or_default();
    println!(
        "{} {} n={} solved={} soc={} makespan={} runtime_s={:.3}{reason}",
        m.name,
        args.algo,
        args.agents,
        solution.solved,
        opt(doc.soc),
        opt(doc.makespan),
        solution.runtime_seconds
    );
    Ok(status)
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let maps = args
        .maps
        .iter()
        .map(|spec| load(spec, &args.map_dir))
        .collect::<Result<Vec<_>, _>>()?;
    let config = BenchConfig {
        maps,
        agents: args.agents,
        instances: args.instances,
        time_limit_s: args.time_limit,
        algorithms: args.algos,
        base_seed: args.seed,
        out: args.out,
        workers: args.workers,
    };
    if let Some(dir) = config.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_fail(dir))?;
    }
    let outcome = bench::run_bench(&config).map_err(|e| {
        let status = if matches!(e, BenchError::Config(_)) {
            Status::Usage
        } else {
            Status::Io
        };
        Failure(status, e.to_string())
    })?;
    println!(
        "{} runs executed, {} already present in {}",
        outcome.executed,
        outcome.skipped,
        config.out.display()
    );
    Ok(Status::Ok)
}

fn cmd_plot(input: &Path, out: &Path) -> CmdResult {
    let records = bench::read_records(input).map_err(|e| Failure(Status::Io, e.to_string()))?;
    if records.is_empty() {
        return Err(Failure(
            Status::Usage,
            format!("{}: no records to plot", input.display()),
        ));
    }
    fs::create_dir_all(out).map_err(io_fail(out))?;
    let written = plot::plot_records(&records, out).map_err(|e| Failure(Status::Io, e.to_string()))?;
    println!("wrote {} charts to {}", written.len(), out.display());
    Ok(Status::Ok)
}

fn cmd_render(map: &str, solution: &Path, out: &Path, dir: &MapDir) -> CmdResult {
    let m = load(map, dir)?;
    let text = fs::read_to_string(solution).map_err(io_fail(solution))?;
    let doc = files::read_solution(&text).map_err(io_fail(solution))?;
    let graph = GridGraph::new(m.map);
    let svs = compute_svs(&graph);
    let frames = render::render_frames(&graph, &svs, &doc.to_solution(), &doc.goals)
        .map_err(|e| Failure(Status::Io, format!("{}: {e}", solution.display())))?;
    fs::create_dir_all(out).map_err(io_fail(out))?;
    for (t, frame) in frames.iter().enumerate() {
        write(&out.join(format!("frame_{t:04}.svg")), frame)?;
    }
    println!("wrote {} frames to {}", frames.len(), out.display());
    Ok(Status::Ok)
}

fn cmd_gen_maps(out: &Path) -> CmdResult {
    for name in replicas::BENCHMARK_MAPS {
        let map = replicas::generate(name).expect("benchmark names are generatable");
        write(&out.join(format!("{name}.map")), &serialize_map(&map))?;
    }
    println!("wrote {} maps to {}", replicas::BENCHMARK_MAPS.len(), out.display());
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Svs { map, out, maps } => cmd_svs(&map, out, &maps),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Plot { input, out } => cmd_plot(&input, &out),
        Command::Render {
            map,
            solution,
            out,
            maps,
        } => cmd_render(&map, &solution, &out, &maps),
        Command::GenMaps { out } => cmd_gen_maps(&out),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(Failure(status, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(status as u8)
        }
    }
}
