//! Differentiation and dedifferentiation rates as functions of the stimulus
//! and of the medium concentration, plus the smoothness of the Hermite ramps.
//!
//! cargo run --example rate_functions

use seedsim::model::{alpha1_chi, alpha1_s, alpha1_s_slope, alpha2_chi, alpha2_s, ParameterSet};

fn main() -> seedsim::Result<()> {
    let p = ParameterSet::table1();
    println!("S_d = {}", p.s_d());
    println!("{:>6} {:>10} {:>10}", "S", "alpha1_S", "alpha2_S");
    for k in 0..=16 {
        let s = 0.25 * k as f64;
        println!(
            "{s:>6.2} {:>10.6} {:>10.6}",
            alpha1_s(s, &p),
            alpha2_s(s, &p)
        );
    }

    println!(
        "\n{:>10} {:>10} {:>10}",
        "chi/chi_c", "alpha1_chi", "alpha2_chi"
    );
    for r in [0.0, 0.5, 1.0, 2.0, 3.0, 10.0] {
        let chi = r * p.chi_c;
        println!(
            "{r:>10} {:>10.6} {:>10.6}",
            alpha1_chi(chi, &p)?,
            alpha2_chi(chi, &p)
        );
    }

    // Slopes on both sides of every joint agree: the ramps are C^1.
    println!("\njoint     left slope   right slope");
    let sd = p.s_d();
    for joint in [p.s_min - sd, p.s_min + sd, p.s_max - sd, p.s_max + sd] {
        let eps = 1e-9;
        println!(
            "{joint:.2}  {:>12.3e} {:>12.3e}",
            alpha1_s_slope(joint - eps, &p),
            alpha1_s_slope(joint + eps, &p)
        );
    }
    Ok(())
}
