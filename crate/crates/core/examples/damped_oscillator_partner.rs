//! Generic pipeline on a damped oscillator `y'' + 2γy' + ω²y = 0`.
//!
//! A constant root of `h² - 2γh + ω² = 0` seeds the Riccati equation. The
//! partner is built from sampled `α`, then rebuilt back into `(f, g)`.

use darboux::factorize::{
    alpha_numeric, partner_coefficients, reconstruct_fg, riccati_residual, CoefficientPair,
    RiccatiSeed,
};
use darboux::funcs::make_grid;
use darboux::{Result, C64};

fn main() -> Result<()> {
    let (gamma, omega) = (0.3, 2.0);
    let coeffs =
        CoefficientPair::constant(C64::new(2.0 * gamma, 0.0), C64::new(omega * omega, 0.0));
    let h = C64::new(gamma, (omega * omega - gamma * gamma).sqrt());
    let seed = RiccatiSeed::new(move |_| h, |_| C64::new(0.0, 0.0));
    println!(
        "seed h = {h:.6}, Riccati residual {:.2e}",
        riccati_residual(&seed, &coeffs, 0.0)?.norm()
    );

    let grid = make_grid(0.0, 3.0, 12001)?;
    let sol = alpha_numeric(&coeffs, &seed, C64::new(1.0, 0.0), &grid)?;
    let partner = partner_coefficients(&coeffs, &sol)?;
    for k in (0..grid.len()).step_by(2000) {
        println!(
            "t = {:4.2}  α = {:>24.6}  F = {:>24.6}  G = {:>24.6}",
            grid.time(k),
            sol.alpha[k],
            partner.damping[k],
            partner.frequency[k]
        );
    }

    let back = reconstruct_fg(&sol)?;
    let drift = back
        .f
        .max_abs_diff_fn(|t| coeffs.f(t))
        .max(back.g.max_abs_diff_fn(|t| coeffs.g(t)));
    println!("round trip back to (f, g): {drift:.2e}");
    Ok(())
}
