//! `octacube`: spectra, eigenstates and checks for the 6:2:1:3 hard-core chain in a box.

mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use octacube_core::dynamics::write_trace_csv;
use octacube_core::format::sig15;
use octacube_core::spectrum::{enumerate_levels, staircase, write_levels_csv, write_staircase_csv};
use octacube_core::wavefunction::{
    density_section, mc_normalization, mc_overlap, write_density_csv,
};
use octacube_core::{
    Eigenstate, Error, Level, McEstimate, ParticleState, PhysicalUnits, QuantumNumbers, RootSystem,
    SliceSpec, Tiling,
};

use crate::verify::{run_suite, Budgets, Suite};

#[derive(Parser, Debug)]
#[command(
    name = "octacube",
    version,
    about = "Exact quantum and classical mechanics of four hard-core particles (6m, 2m, m, 3m) in a box"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every level up to a cutoff energy as CSV.
    Spectrum {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact level count against the Weyl law as CSV.
    Weyl {
        #[command(flatten)]
        energy: EnergyArgs,
        /// Number of equal energy steps.
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// |psi|^2 on a 2-sphere cut from configuration space by a plane and a sphere.
    Density(DensityArgs),
    /// Run a property suite and print a JSON report; exit status 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Monte Carlo samples per normalization or overlap estimate.
        #[arg(long, default_value_t = 200_000)]
        mc_samples: usize,
        /// Random points for the tiling checks.
        #[arg(long, default_value_t = 100_000)]
        tiling_samples: usize,
        /// Collision events for the dynamics checks.
        #[arg(long, default_value_t = 10_000)]
        events: usize,
    },
    /// Dump the 1152 group elements.
    Group {
        /// Emit JSON (the only format).
        #[arg(long, default_value_t = true)]
        json: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo estimate of the norm of one eigenstate, as JSON.
    Norm {
        /// Quantum numbers `n1,n2,n3,n4`.
        #[arg(long, default_value = "3,1,1,2")]
        qn: QuantumNumbers,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Monte Carlo estimate of the overlap of two eigenstates, as JSON.
    Overlap {
        #[arg(long)]
        qn_a: QuantumNumbers,
        #[arg(long)]
        qn_b: QuantumNumbers,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Classical collision trace from a random initial state, as CSV.
    Trace {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        events: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EnergyUnit {
    /// `hbar^2 / (m3 L^2)`
    #[value(name = "hbar2-m3L2")]
    Hbar2M3L2,
    /// Absolute, in the unit system set by `--m3`, `--length` and `--hbar`.
    Absolute,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "cutoff")]
struct Cutoff {
    /// Cutoff in exact integer units of `pi^2 hbar^2 / (6 m3 L^2)`.
    #[arg(long)]
    emax_int: Option<u64>,
    /// Cutoff as a physical energy; see `--units-energy`.
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
}

#[derive(Args, Debug)]
struct EnergyArgs {
    #[command(flatten)]
    cutoff: Cutoff,
    #[arg(long, value_enum, default_value = "hbar2-m3L2")]
    units_energy: EnergyUnit,
    #[arg(long, default_value_t = 1.0)]
    m3: f64,
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl EnergyArgs {
    fn e_int_max(&self) -> Result<u64, CliError> {
        if let Some(n) = self.cutoff.emax_int {
            return Ok(n);
        }
        let e = self.cutoff.emax.expect("clap enforces one cutoff");
        let units = match self.units_energy {
            EnergyUnit::Hbar2M3L2 => PhysicalUnits::NATURAL,
            EnergyUnit::Absolute => {
                PhysicalUnits::new(self.m3, self.length, self.hbar).map_err(CliError::usage)?
            }
        };
        units.int_floor_of_energy(e).map_err(CliError::usage)
    }
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output file; standard output if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl OutArgs {
    fn open(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Usage(format!("cannot create {}: {e}", p.display()))
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args, Debug)]
struct DensityArgs {
    /// Quantum numbers `n1,n2,n3,n4`.
    #[arg(long, default_value = "3,1,1,2")]
    qn: QuantumNumbers,
    /// Plane normal `a,b,c,d` in natural coordinates.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    normal: [f64; 4],
    /// Plane offset: points satisfy `normal . z = offset`.
    #[arg(long, allow_negative_numbers = true)]
    offset: f64,
    /// Sphere centre `a,b,c,d`.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    center: [f64; 4],
    #[arg(long)]
    radius: f64,
    /// Viewing direction; the hemisphere facing it is sampled.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    pole: Option<[f64; 4]>,
    /// Direction of zero longitude.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    reference: Option<[f64; 4]>,
    #[arg(long, default_value_t = 64)]
    resolution: usize,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let v: [f64; 4] = parts
        .try_into()
        .map_err(|p: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", p.len()))?;
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err("components must be finite".into())
    }
}

enum CliError {
    Usage(String),
    Failure(String),
    /// The reader went away, e.g. `octacube spectrum ... | head`.
    BrokenPipe,
}

impl CliError {
    fn usage(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }

    fn from_core(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::Domain(_)
            | Error::NoSolution(_)
            | Error::Unsupported(_) => CliError::Usage(e.to_string()),
            Error::Internal(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::BrokenPipe;
        }
        CliError::Failure(format!("write failed: {e}"))
    }
}

/// Rounds to 15 significant digits so JSON numbers match the CSV rendering.
fn r15(x: f64) -> f64 {
    sig15(x).parse().unwrap_or(x)
}

fn rounded(est: McEstimate) -> McEstimate {
    McEstimate {
        value_re: r15(est.value_re),
        value_im: r15(est.value_im),
        std_error: r15(est.std_error),
        ..est
    }
}

fn write_json<W: Write>(mut out: W, v: &impl serde::Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| match e.io_error_kind() {
        Some(kind) => CliError::from(io::Error::from(kind)),
        None => CliError::Failure(e.to_string()),
    })?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn state(qn: QuantumNumbers, tiling: &Tiling) -> Result<Eigenstate, CliError> {
    Eigenstate::new(Level::new(qn), &tiling.group).map_err(CliError::from_core)
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Spectrum { energy, out } => {
            let levels = enumerate_levels(energy.e_int_max()?);
            let mut w = out.open()?;
            write_levels_csv(&levels, &mut w)?;
            w.flush()?;
        }
        Command::Weyl {
            energy,
            points,
            out,
        } => {
            let rows = staircase(energy.e_int_max()?, points, &PhysicalUnits::NATURAL)
                .map_err(CliError::from_core)?;
            let mut w = out.open()?;
            write_staircase_csv(&rows, &mut w)?;
            w.flush()?;
        }
        Command::Density(args) => {
            let tiling = Tiling::new().map_err(CliError::from_core)?;
            let s = state(args.qn, &tiling)?;
            let spec = SliceSpec {
                normal: args.normal,
                offset: args.offset,
                center: args.center,
                radius: args.radius,
                pole: args.pole,
                reference: args.reference,
                resolution: args.resolution,
            };
            let grid = density_section(&s, &tiling, &spec).map_err(CliError::from_core)?;
            let mut w = args.out.open()?;
            write_density_csv(&grid, &mut w)?;
            w.flush()?;
        }
        Command::Verify {
            suite,
            seed,
            mc_samples,
            tiling_samples,
            events,
        } => {
            let budgets = Budgets {
                seed,
                mc_samples,
                tiling_samples,
                events,
            };
            if mc_samples < 1000 {
                return Err(CliError::Usage("--mc-samples must be at least 1000".into()));
            }
            let report = run_suite(suite, &budgets);
            write_json(io::stdout().lock(), &report)?;
            if !report.passed() {
                return Err(CliError::Failure(format!("suite {} failed", report.suite)));
            }
        }
        Command::Group { json: _, out } => {
            let group = RootSystem::f4().group().map_err(CliError::from_core)?;
            write_json(out.open()?, &group.dump())?;
        }
        Command::Norm { qn, samples, seed } => {
            let tiling = Tiling::new().map_err(CliError::from_core)?;
            let s = state(qn, &tiling)?;
            let est = mc_normalization(&s, samples, seed).map_err(CliError::from_core)?;
            write_json(io::stdout().lock(), &rounded(est))?;
        }
        Command::Overlap {
            qn_a,
            qn_b,
            samples,
            seed,
        } => {
            if qn_a == qn_b {
                return Err(CliError::Usage(
                    "overlap needs two distinct states; use `norm` for one".into(),
                ));
            }
            let tiling = Tiling::new().map_err(CliError::from_core)?;
            let (a, b) = (state(qn_a, &tiling)?, state(qn_b, &tiling)?);
            let est = mc_overlap(&a, &b, samples, seed).map_err(CliError::from_core)?;
            write_json(io::stdout().lock(), &rounded(est))?;
        }
        Command::Trace { seed, events, out } => {
            let mut w = out.open()?;
            write_trace_csv(&ParticleState::random(seed), events, &mut w)
                .map_err(CliError::from_core)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("OCTACUBE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "OCTACUBE_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(()) | Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
