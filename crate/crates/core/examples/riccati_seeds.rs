//! The two Riccati seeds, checked pointwise, and the partner read off from
//! the analytic factor functions at one instant.

use darboux::factorize::{bernoulli_residual, partner_at, riccati_scan};
use darboux::families::FamilyParams;
use darboux::Result;

fn main() -> Result<()> {
    for (p, a, b) in [
        (FamilyParams::trig(3.5, 2.0)?, -0.4, 0.4),
        (FamilyParams::hyperbolic(1.0, 0.5)?, -5.0, 5.0),
    ] {
        let (seed, coeffs) = (p.seed(), p.coefficients());
        let times = (0..1000).map(|k| a + (b - a) * k as f64 / 999.0);
        let scan = riccati_scan(&seed, &coeffs, times);
        println!(
            "{}: max Riccati residual on [{a}, {b}] = {:.2e}",
            p.kind, scan.max_residual
        );

        let t = 0.3;
        let pt = p.factor_point(t)?;
        let bern = bernoulli_residual(&pt, seed.h(t), coeffs.f(t));
        let (f, g) = partner_at(&pt, coeffs.f(t), coeffs.g(t)).expect("α is regular");
        println!(
            "  t = {t}: α = {:.6}, Bernoulli residual {:.1e}, F = {:.6}, G = {:.6}",
            pt.alpha,
            bern.norm(),
            f,
            g
        );
    }
    Ok(())
}
