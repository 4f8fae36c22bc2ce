//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use darboux::cli::{abs_consistency, parse_csv};
use darboux::factorize::riccati_scan;
use darboux::families::{self, FamilyParams, SuperpositionConstants};
use darboux::funcs::make_grid;
use darboux::verify::{
    abel_for_family, alpha_convergence_ratios, crosscheck_family, ode_residual,
    rk_convergence_ratios, rk_crosscheck, run_suite, wronskian_drift, IvpState, Suite,
};
use darboux::{Error, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn trig() -> FamilyParams {
    FamilyParams::trig(3.5, 2.0).unwrap()
}

fn hyp() -> FamilyParams {
    FamilyParams::hyperbolic(1.0, 0.5).unwrap()
}

fn trig_constants() -> SuperpositionConstants {
    SuperpositionConstants::real(2.0 / 7.0, 7.0 / 4.0)
}

fn hyp_constants() -> SuperpositionConstants {
    SuperpositionConstants::real(2.0, -1.0)
}

fn bound(what: &str, value: f64, tol: f64) -> Outcome {
    if value.is_finite() && value < tol {
        Ok(format!("{what} {value:.2e} < {tol:.0e}"))
    } else {
        Err(format!("{what} {value:.3e}, needs < {tol:.0e}"))
    }
}

fn at_least(what: &str, values: &[f64], min: f64) -> Outcome {
    let worst = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.len() >= 3 && worst >= min {
        Ok(format!("{what} min ratio {worst:.2} >= {min}"))
    } else {
        Err(format!("{what} ratios {values:.2?}, need three >= {min}"))
    }
}

fn within(what: &str, elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed < limit {
        Ok(format!("{what} {:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "{what} took {:.2}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let (ok, bad): (Vec<_>, Vec<_>) = parts.into_iter().partition(Result::is_ok);
    if bad.is_empty() {
        Ok(ok
            .into_iter()
            .map(Result::unwrap)
            .collect::<Vec<_>>()
            .join("; "))
    } else {
        let failed = bad
            .into_iter()
            .map(Result::unwrap_err)
            .collect::<Vec<_>>()
            .join("; ");
        Err(format!("{failed} [{} other checks passed]", ok.len()))
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn riccati_seeds() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (name, p, a, b) in [("trig", trig(), -0.4, 0.4), ("hyp", hyp(), -5.0, 5.0)] {
        let times: Vec<f64> = (0..1000).map(|k| a + (b - a) * k as f64 / 999.0).collect();
        let scan = riccati_scan(&p.seed(), &p.coefficients(), times);
        if !scan.non_finite.is_empty() {
            parts.push(Err(format!("{name}: non-finite at {:?}", scan.non_finite)));
        }
        parts.push(bound(&format!("{name} residual"), scan.max_residual, 1e-12));
    }
    parts.push(within("runtime", start.elapsed(), Duration::from_secs(1)));
    all(parts)
}

fn pipeline_round_trip() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (name, p, t1) in [("trig", trig(), 0.4), ("hyp", hyp(), 2.0)] {
        let r = crosscheck_family(&p, &make_grid(0.0, t1, 4001).unwrap()).map_err(err)?;
        parts.push(bound(&format!("{name} round trip"), r.max_residual, 1e-4));
    }
    parts.push(within("runtime", start.elapsed(), Duration::from_secs(5)));
    all(parts)
}

fn closed_form_vs_pipeline() -> Outcome {
    let mut parts = Vec::new();
    for (name, p, t1) in [("trig", trig(), 0.4), ("hyp", hyp(), 2.0)] {
        let r = crosscheck_family(&p, &make_grid(0.0, t1, 4001).unwrap()).map_err(err)?;
        parts.push(bound(&format!("{name} deviation"), r.max_deviation, 1e-4));
        let ratios =
            alpha_convergence_ratios(&p, make_grid(0.0, t1, 101).unwrap(), 3).map_err(err)?;
        parts.push(at_least(&format!("{name} alpha"), &ratios, 8.0));
    }
    all(parts)
}

fn solution_residuals() -> Outcome {
    let (p, k) = (trig(), trig_constants());
    let r_trig = ode_residual(
        |t| families::trig_solution_jet(&p, &k, t),
        &p,
        &make_grid(0.0, 2.0, 2001).unwrap(),
    )
    .map_err(err)?;
    let (q, kh) = (hyp(), hyp_constants());
    let r_hyp = ode_residual(
        |t| families::hyp_solution_jet(&q, &kh, t),
        &q,
        &make_grid(0.0, 5.0, 2001).unwrap(),
    )
    .map_err(err)?;
    all(vec![
        bound("trig [0,2]", r_trig, 1e-9),
        bound("hyp [0,5]", r_hyp, 1e-9),
    ])
}

fn rk_oracle() -> Outcome {
    let mut parts = Vec::new();
    for (name, p, k, a, b) in [
        ("trig", trig(), trig_constants(), -0.4, 0.4),
        ("hyp", hyp(), hyp_constants(), 0.0, 5.0),
    ] {
        let (_, r) = rk_crosscheck(&p, &k, &make_grid(a, b, 8001).unwrap()).map_err(err)?;
        parts.push(bound(
            &format!("{name} [{a},{b}] n=8001"),
            r.max_deviation,
            1e-6,
        ));
        let ratios =
            rk_convergence_ratios(&p, &k, make_grid(a, b, 126).unwrap(), 3).map_err(err)?;
        parts.push(at_least(&format!("{name} RK4"), &ratios, 12.0));
    }
    all(parts)
}

fn singularity_logic() -> Outcome {
    let wide = make_grid(-10.0, 10.0, 4001).unwrap();
    let mut parts = Vec::new();
    for (name, p) in [("trig lambda=2", trig()), ("hyp lambda=0.5", hyp())] {
        let roots = families::singularity_scan(&p, &wide);
        parts.push(if roots.is_empty() {
            Ok(format!("{name} empty"))
        } else {
            Err(format!("{name} roots {roots:?}"))
        });
    }
    let p = FamilyParams::trig(1.0, 0.5).unwrap();
    let roots = families::singularity_scan(&p, &make_grid(0.0, 2.0, 2001).unwrap());
    parts.push(match roots.first() {
        Some(r) => bound("first root - pi/4", (r - FRAC_PI_4).abs(), 1e-9),
        None => Err("no root found for lambda=0.5".into()),
    });
    all(parts)
}

fn asymptotics() -> Outcome {
    let s = families::hyp_snapshot(&hyp(), 10.0).map_err(err)?;
    let printed = families::hyp_frequency_as_printed(1.0, 0.5, 10.0);
    all(vec![
        bound("|zeta_h(10)|", s.zeta.norm(), 1e-6),
        bound("|G(10) + k0^2|", (s.frequency + 1.0).norm(), 1e-6),
        bound("printed form |G(10)|", printed.abs(), 1e-6),
    ])
}

fn identities() -> Outcome {
    let p = trig();
    let w = p.rate;
    let mut parts = Vec::new();

    let literal = SuperpositionConstants::real(1.0 / w, w / 2.0);
    let mut gap: f64 = 0.0;
    for t in make_grid(-0.4, 0.4, 801).unwrap().times() {
        let lhs = families::trig_solution(&p, &literal, t).map_err(err)?;
        let rhs = families::trig_v_connection(&p, t).map_err(err)?;
        gap = gap.max((lhs - rhs).norm());
    }
    parts.push(bound("v-connection C1=1/w0 C2=w0/2", gap, 1e-10));

    let v = wronskian_drift(make_grid(-0.4, 0.4, 801).unwrap().times().map(|t| {
        let (a, b) = families::trig_v_mode_jets(w, t).unwrap();
        (IvpState::from_jet(t, a), IvpState::from_jet(t, b))
    }))
    .map_err(err)?;
    parts.push(bound("v Wronskian drift", v, 1e-9));
    let w0 = {
        let (a, b) = families::trig_v_mode_jets(w, 0.0).unwrap();
        a.value * b.d1 - a.d1 * b.value
    };
    parts.push(bound("W_v - omega0", (w0 - w).norm(), 1e-9));
    for (name, idx) in [("u", 0), ("w", 2)] {
        let k0 = 1.0;
        let pairs: Vec<_> = make_grid(0.0, 6.0, 801)
            .unwrap()
            .times()
            .map(|t| {
                let m = families::hyp_mode_jets(k0, t);
                (
                    IvpState::from_jet(t, m[idx]),
                    IvpState::from_jet(t, m[idx + 1]),
                )
            })
            .collect();
        let w_first = pairs[0].0.y * pairs[0].1.dy - pairs[0].0.dy * pairs[0].1.y;
        parts.push(bound(
            &format!("{name} Wronskian drift"),
            wronskian_drift(pairs).map_err(err)?,
            1e-9,
        ));
        parts.push(bound(
            &format!("W_{name} - k0"),
            (w_first - k0).norm(),
            1e-9,
        ));
    }

    let abel_trig = abel_for_family(&p, &make_grid(-0.4, 0.4, 4001).unwrap()).map_err(err)?;
    let abel_hyp = abel_for_family(&hyp(), &make_grid(0.0, 5.0, 4001).unwrap()).map_err(err)?;
    parts.push(bound("Abel trig", abel_trig, 1e-6));
    parts.push(bound("Abel hyp", abel_hyp, 1e-6));
    all(parts)
}

fn run_figure(dir: &Path, id: u8) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("fig{id}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_darboux"))
        .args(["figure", "--id", &id.to_string(), "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "figure {id}: {}",
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    std::fs::read(&out).map_err(|e| e.to_string())
}

fn figure_data(started: Instant) -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut parts = Vec::new();
    let mut figures = Vec::new();
    for id in 1..=9u8 {
        let first = run_figure(a.path(), id)?;
        let second = run_figure(b.path(), id)?;
        if first != second {
            parts.push(Err(format!("figure {id} differs between runs")));
        }
        let text = String::from_utf8(first).map_err(|e| e.to_string())?;
        let (header, rows) = parse_csv(&text).map_err(err)?;
        if rows.len() != 2001 {
            parts.push(Err(format!("figure {id} has {} rows", rows.len())));
        }
        if abs_consistency(&header, &rows) > 3e-11 {
            parts.push(Err(format!("figure {id} abs column inconsistent")));
        }
        figures.push((header, rows));
    }
    parts.push(Ok("9 figures byte-identical".into()));

    let first = |id: usize| C64::new(figures[id - 1].1[0][1], figures[id - 1].1[0][2]);
    parts.push(bound(
        "fig 1 y(0) + 0.875i",
        (first(1) - C64::new(0.0, -0.875)).norm(),
        1e-11,
    ));
    let y5 = C64::new(-2f64.sqrt() * PI / 4.0, -(2f64.sqrt()) / 2.0);
    parts.push(bound("fig 5 y(0)", (first(5) - y5).norm(), 1e-11));
    let g9 = figures[8].1.last().unwrap()[1];
    parts.push(bound("fig 9 G(6) + 1", (g9 + 1.0).abs(), 1e-4));

    let (p, k) = (trig(), trig_constants());
    let period = PI / p.rate;
    let mut gap: f64 = 0.0;
    for row in &figures[0].1 {
        let later = families::trig_solution(&p, &k, row[0] + period).map_err(err)?;
        gap = gap.max((row[2] - later.im).abs());
    }
    parts.push(bound("Im y(t) - Im y(t + pi/w0)", gap, 1e-9));

    let failed = run_suite(Suite::All).iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        parts.push(Err(format!("{failed} suite checks failed")));
    }
    parts.push(within(
        "full suite",
        started.elapsed(),
        Duration::from_secs(30),
    ));
    all(parts)
}

fn main() {
    let started = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("riccati seeds", Box::new(riccati_seeds)),
        ("pipeline round trip", Box::new(pipeline_round_trip)),
        ("closed form vs pipeline", Box::new(closed_form_vs_pipeline)),
        ("solution residuals", Box::new(solution_residuals)),
        ("RK oracle", Box::new(rk_oracle)),
        ("singularity logic", Box::new(singularity_logic)),
        ("asymptotics", Box::new(asymptotics)),
        ("identities", Box::new(identities)),
        ("figure data", Box::new(move || figure_data(started))),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
