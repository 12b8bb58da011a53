use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fingerpad::harness::calibrate::calibrate;
use fingerpad::harness::detection::run_detection_demo;
use fingerpad::harness::report::{emit_report, run_pipeline, summary_text, sweep_plot, trace_plot, ReportInputs};
use fingerpad::harness::sweep::run_pressure_sweep;
use fingerpad::harness::{run_pull_test, table_case, Config};
use fingerpad::model::{load_paper_dataset, ActuationCase, CaseKind, Target, Timing};
use fingerpad::{Error, Result};

#[derive(Parser)]
#[command(name = "fingerpad", version, about = "Pneumatic fingerpad friction simulator")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML config; missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for calibration restarts; defaults to the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// One shear pull test; writes trace.csv and trace.svg.
    PullTest {
        #[arg(long, default_value = "N")]
        case: CaseKind,
        #[arg(long, default_value = "plywood")]
        target: Target,
        /// Set pressure in kPa; defaults to ±40 for actuated cases.
        #[arg(long, allow_hyphen_values = true)]
        pressure: Option<f64>,
    },
    /// Live and prior pull tests over the configured pressures.
    Sweep {
        #[arg(long)]
        target: Option<Target>,
        /// Sweep a single pressure instead of the configured list.
        #[arg(long, allow_hyphen_values = true)]
        pressure: Option<f64>,
    },
    /// Pressure-based against current-based object detection on a tube.
    Detect {
        #[arg(long, allow_hyphen_values = true)]
        pressure: Option<f64>,
    },
    /// Fit friction and pad parameters to the embedded dataset.
    Calibrate,
    /// Table runs, sweep, comparison and plots.
    Report {
        /// Calibrate before running.
        #[arg(long)]
        calibrate: bool,
    },
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(cli.common.config.as_deref())?;
    let out = &cli.common.out;
    let seed = cli.common.seed.unwrap_or(cfg.calibration.seed);
    fs::create_dir_all(out).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", out.display()))))?;
    match cli.command {
        Command::PullTest { case, target, pressure } => {
            let case = match pressure {
                Some(p) => ActuationCase::new(case, p)?,
                None => table_case(case),
            };
            let run = run_pull_test(&cfg, target, &case)?;
            run.trace.write_csv(create(&out.join("trace.csv"))?)?;
            let title = format!("{target} {} at {:+.0} kPa", case.kind(), case.set_pressure());
            if let Some(svg) = trace_plot(&run.trace, &title) {
                write(&out.join("trace.svg"), &svg)?;
            }
            println!(
                "{target} {} {:+.1} kPa: Fa {:.3} N, Fp {:.3} N, normal {:.3} N, area {:.1} mm2",
                case.kind(),
                case.set_pressure(),
                run.summary.fa,
                run.summary.fp,
                run.partition.total_normal(),
                run.partition.total_area()
            );
        }
        Command::Sweep { target, pressure } => {
            let target = target.unwrap_or(cfg.sweep.target);
            let pressures = pressure.map_or_else(|| cfg.sweep.pressures.clone(), |p| vec![p]);
            let table = run_pressure_sweep(&cfg, &pressures, &[Timing::Live, Timing::Prior], target)?;
            table.write_csv(create(&out.join("sweep.csv"))?)?;
            if let Some(svg) = sweep_plot(&table) {
                write(&out.join("sweep.svg"), &svg)?;
            }
            for d in table.differences() {
                println!("{:>6.1} kPa  {}  {:+.3} N", d.pressure_kpa, d.label, d.value);
            }
        }
        Command::Detect { pressure } => {
            if let Some(p) = pressure {
                cfg.detection.pressure = p;
            }
            let demo = run_detection_demo(&cfg)?;
            demo.write_csv(create(&out.join("detect.csv"))?)?;
            let show = |t: Option<f64>| t.map_or("none".to_string(), |t| format!("{t:.2} s"));
            println!("pressure detect: {}", show(demo.pressure_detect_time));
            println!("current detect:  {}", show(demo.current_detect_time));
            if let Some(lead) = demo.lead() {
                println!("pressure leads by {lead:.2} s");
            }
        }
        Command::Calibrate => {
            let ds = load_paper_dataset()?;
            let result = calibrate(&cfg, &ds, seed)?;
            result.write_csv(create(&out.join("calib.csv"))?)?;
            write(&out.join("calibrated.toml"), &result.config.to_toml_string()?)?;
            let inputs = ReportInputs { calibration: Some(result), ..ReportInputs::default() };
            print!("{}", summary_text(&inputs, &ds));
        }
        Command::Report { calibrate } => {
            let ds = load_paper_dataset()?;
            let inputs = run_pipeline(&cfg, &ds, calibrate.then_some(seed))?;
            let files = emit_report(out, &inputs, &ds)?;
            print!("{}", summary_text(&inputs, &ds));
            println!("wrote {} files to {}", files.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
