//! Compares the numeric factorization with the closed forms, and shows the
//! fourth-order convergence of the sampled α.

use darboux::families::FamilyParams;
use darboux::funcs::make_grid;
use darboux::verify::{alpha_convergence_ratios, crosscheck_family};
use darboux::Result;

fn main() -> Result<()> {
    for (p, t0, t1) in [
        (FamilyParams::trig(3.5, 2.0)?, -0.4, 0.3),
        (FamilyParams::hyperbolic(1.0, 0.5)?, 0.0, 2.0),
    ] {
        let r = crosscheck_family(&p, &make_grid(t0, t1, 4001)?)?;
        let ratios = alpha_convergence_ratios(&p, make_grid(t0, t1, 101)?, 3)?;
        println!(
            "{} λ = {}: numeric λ at t0 = {:.6}, max |ΔF|, |ΔG| = {:.2e}, round trip {:.2e}, α ratios {ratios:.2?}",
            p.kind,
            p.lambda,
            p.numeric_lambda(t0),
            r.max_deviation,
            r.max_residual
        );
    }
    Ok(())
}
