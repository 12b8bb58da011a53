//! A ridged block held by deflated pads. The recessed regions catch the
//! ridges and add a side-wall reaction on top of friction.

use fingerpad::harness::interlock::run_interlock_demo;
use fingerpad::harness::Config;
use fingerpad::model::Target;

fn main() -> fingerpad::Result<()> {
    let cfg = Config::default();
    for target in Target::ALL {
        let d = run_interlock_demo(&cfg, target)?;
        println!(
            "{target}: recess {:.3} mm, flat {:.2} N, ridged {:.2} N ({:.2} friction + {:.2} wall)",
            d.recess_depth, d.flat.applied, d.ridged.applied, d.ridged.friction_component, d.ridged.normal_component
        );
    }
    Ok(())
}
