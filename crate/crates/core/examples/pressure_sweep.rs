//! Live and prior actuation on PTFE from -40 to +40 kPa, with the DL-DP and
//! IL-IP differences at each pressure.

use fingerpad::harness::sweep::run_pressure_sweep;
use fingerpad::harness::Config;
use fingerpad::model::{Target, Timing};

fn main() -> fingerpad::Result<()> {
    let cfg = Config::default();
    let table = run_pressure_sweep(&cfg, &cfg.sweep.pressures, &[Timing::Live, Timing::Prior], Target::Ptfe)?;
    for row in &table.rows {
        println!("{:>6.1} kPa  {:<3} Fa {:.3} N", row.pressure_kpa, row.case.label(), row.fa_n);
    }
    println!();
    for d in table.differences() {
        println!("{:>6.1} kPa  {}  {:+.3} N", d.pressure_kpa, d.label, d.value);
    }
    Ok(())
}
