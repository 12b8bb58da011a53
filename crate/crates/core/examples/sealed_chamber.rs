//! Regulate a chamber to 20 kPa, seal it, then squeeze and release it.

use fingerpad::pneumatics::{compress_sealed, regulate, seal, ChamberState};

fn main() -> fingerpad::Result<()> {
    let mut state = ChamberState::regulated(0.0, 1000.0)?;
    for _ in 0..30 {
        state = regulate(&state, 20.0, 0.01, 0.05)?;
    }
    println!("regulated: {:.3} kPa", state.p_gauge);
    let sealed = seal(&state);
    for v in [1000.0, 950.0, 900.0, 1000.0, 1100.0] {
        let s = compress_sealed(&sealed, v)?;
        println!("V {v:6.1} mm3  p {:7.3} kPa  PV {:.1}", s.p_gauge, s.p_abs() * s.volume);
    }
    Ok(())
}
