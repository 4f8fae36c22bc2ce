//! The nonsingular partner of the harmonic oscillator.
//!
//! Prints the damping ratio, the parametric frequency and the general
//! solution at a few times, then shows where singular λ break the family.

use darboux::families::{self, FamilyParams, SuperpositionConstants};
use darboux::funcs::make_grid;
use darboux::Result;

fn main() -> Result<()> {
    let p = FamilyParams::trig(3.5, 2.0)?;
    let k = SuperpositionConstants::real(2.0 / 7.0, 7.0 / 4.0);
    println!(
        "ω₀ = {}, λ = {}, nonsingular: {}",
        p.rate,
        p.lambda,
        families::nonsingular_domain(&p)
    );
    println!("{:>6} {:>12} {:>12} {:>26}", "t", "ζ", "G", "y");
    for t in [0.0, 0.2, 0.4, 0.8, 1.2, 1.6] {
        let s = families::trig_snapshot(&p, t)?;
        let y = families::trig_solution(&p, &k, t)?;
        println!(
            "{t:6.2} {:12.5} {:12.5} {:>26.6}",
            s.zeta.re, s.frequency.re, y
        );
    }
    println!("damping poles on [0, 2]: {:.4?}", p.damping_poles(0.0, 2.0));

    let grid = make_grid(0.0, 2.0, 2001)?;
    for lambda in [-0.5, 0.25, 0.5, 0.9, 1.5] {
        let q = FamilyParams::trig(1.0, lambda)?;
        println!(
            "λ = {lambda:5}: singular times {:.6?}",
            families::singularity_scan(&q, &grid)
        );
    }
    Ok(())
}
