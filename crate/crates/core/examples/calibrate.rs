//! Fit the friction and pad parameters to the measured Fa/Fp table. Takes a
//! minute or so in release mode.

use fingerpad::harness::calibrate::calibrate;
use fingerpad::harness::Config;
use fingerpad::model::load_paper_dataset;

fn main() -> fingerpad::Result<()> {
    let ds = load_paper_dataset()?;
    let cfg = Config::default();
    let result = calibrate(&cfg, &ds, cfg.calibration.seed)?;
    for p in &result.params {
        println!("{:<26} {:>10.6}  [{}, {}]", p.name, p.value, p.lo, p.hi);
    }
    println!(
        "objective {:.4} -> {:.4}, RMS {:.3} N, {} evaluations",
        result.initial_objective, result.objective, result.residual, result.iterations
    );
    Ok(())
}
