//! Centre deflection, displaced volume and flat-contact width of one active
//! region over the pressure range.

use fingerpad::harness::Config;
use fingerpad::membrane::{deflect, press_against_flat};

fn main() -> fingerpad::Result<()> {
    let cfg = Config::default();
    let law = cfg.law()?;
    let (a, c) = law.coefficients();
    println!("dp/1000 = {a:.4} w + {c:.4} w^3");
    for dp in [-40.0, -20.0, -10.0, 0.0, 10.0, 20.0, 40.0] {
        let d = deflect(&law, dp)?;
        let flat = press_against_flat(&d, 0.5 * d.w0.max(0.0), dp)?;
        println!(
            "{dp:>6.1} kPa  w0 {:+.4} mm  volume {:+9.2} mm3  contact at half height {:.3} mm, {:.3} N",
            d.w0, d.displaced_volume, flat.contact_width, flat.normal_force
        );
    }
    Ok(())
}
