//! Closing on a centrifuge tube with pre-inflated pads: when does the chamber
//! pressure notice the tube, and when does the motor current?

use fingerpad::harness::detection::run_detection_demo;
use fingerpad::harness::Config;

fn main() -> fingerpad::Result<()> {
    let demo = run_detection_demo(&Config::default())?;
    for (&(t, p), c) in demo.pressure_trace.samples().iter().zip(&demo.current_trace).step_by(10) {
        println!("t {t:5.2} s  p {p:7.3} kPa  current {:.3} A{}", c.current, if c.detected { "  *" } else { "" });
    }
    println!("pressure detect at {:?} s", demo.pressure_detect_time);
    println!("current detect at  {:?} s", demo.current_detect_time);
    if let Some(lead) = demo.lead() {
        println!("lead {lead:.2} s");
    }
    Ok(())
}
