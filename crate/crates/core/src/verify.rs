//! Independent numerical oracles for the closed forms.
//!
//! Fixed-step RK4 on the complex state `(y, y')`, substitution residuals,
//! Wronskians with Abel's relation, the large-time behaviour of the
//! hyperbolic family, and the comparison between closed-form and pipeline
//! partner coefficients.

use std::fmt;

use crate::factorize::{alpha_numeric, partner_coefficients, reconstruct_fg, ScalarFn};
use crate::families::{self, FamilyKind, FamilyParams, SuperpositionConstants};
use crate::funcs::{
    c, central_derivative, cumulative_integral, make_grid, Jet, SampledField, TimeGrid,
};
use crate::{Error, Result, C64};

/// Coefficients of `y'' + F(t) y' + G(t) y = 0`.
pub trait PartnerOde {
    fn damping(&self, t: f64) -> C64;

    fn frequency(&self, t: f64) -> C64;

    /// Times in `[t0, t1]` where `F` or `G` blows up.
    fn singular_times(&self, _t0: f64, _t1: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// Partner equation given by two closures.
#[derive(Clone)]
pub struct FnPartner {
    damping: ScalarFn,
    frequency: ScalarFn,
}

impl FnPartner {
    pub fn new(
        damping: impl Fn(f64) -> C64 + Send + Sync + 'static,
        frequency: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        FnPartner {
            damping: std::sync::Arc::new(damping),
            frequency: std::sync::Arc::new(frequency),
        }
    }

    pub fn constant(damping: C64, frequency: C64) -> Self {
        Self::new(move |_| damping, move |_| frequency)
    }
}

impl fmt::Debug for FnPartner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnPartner").finish_non_exhaustive()
    }
}

impl PartnerOde for FnPartner {
    fn damping(&self, t: f64) -> C64 {
        (self.damping)(t)
    }

    fn frequency(&self, t: f64) -> C64 {
        (self.frequency)(t)
    }
}

/// The closed-form partner `y'' + 2ζ(t)·rate·y' + G(t) y = 0` of a family.
impl PartnerOde for FamilyParams {
    fn damping(&self, t: f64) -> C64 {
        families::snapshot(self, t).map_or(C64::new(f64::NAN, f64::NAN), |s| s.damping)
    }

    fn frequency(&self, t: f64) -> C64 {
        families::snapshot(self, t).map_or(C64::new(f64::NAN, f64::NAN), |s| s.frequency)
    }

    fn singular_times(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut times = self.damping_poles(t0, t1);
        if let Ok(grid) = make_grid(t0, t1, 4001) {
            times.extend(families::singularity_scan(self, &grid));
        }
        times.sort_by(f64::total_cmp);
        times
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpState {
    pub t: f64,
    pub y: C64,
    pub dy: C64,
}

impl IvpState {
    pub fn new(t: f64, y: C64, dy: C64) -> Self {
        IvpState { t, y, dy }
    }

    pub fn from_jet(t: f64, jet: Jet) -> Self {
        IvpState {
            t,
            y: jet.value,
            dy: jet.d1,
        }
    }

    fn is_finite(&self) -> bool {
        self.y.is_finite() && self.dy.is_finite()
    }
}

/// Samples of `y` and `y'` produced by [`integrate_ivp`].
#[derive(Debug, Clone, PartialEq)]
pub struct IvpSolution {
    pub y: SampledField,
    pub dy: SampledField,
}

impl IvpSolution {
    pub fn state(&self, k: usize) -> IvpState {
        IvpState::new(self.y.grid().time(k), self.y[k], self.dy[k])
    }

    pub fn grid(&self) -> &TimeGrid {
        self.y.grid()
    }
}

/// Classical RK4 on `y' = dy`, `dy' = -F dy - G y` over `grid`.
///
/// Windows containing a reported singular time are rejected up front;
/// the integration stops at the first non-finite coefficient or state.
pub fn integrate_ivp(
    ode: &impl PartnerOde,
    init: IvpState,
    grid: &TimeGrid,
) -> Result<IvpSolution> {
    if (init.t - grid.t0()).abs() > 1e-12 * (1.0 + grid.t0().abs()) {
        return Err(Error::InvalidArgument(format!(
            "initial time {} does not match grid start {}",
            init.t,
            grid.t0()
        )));
    }
    if !init.is_finite() {
        return Err(Error::NonFiniteState { t: init.t });
    }
    let singular = ode.singular_times(grid.t0(), grid.t1());
    if !singular.is_empty() {
        return Err(Error::SingularCoefficient { times: singular });
    }

    let rhs = |t: f64, y: C64, dy: C64| -> Result<(C64, C64)> {
        let (f, g) = (ode.damping(t), ode.frequency(t));
        if !(f.is_finite() && g.is_finite()) {
            return Err(Error::SingularCoefficient { times: vec![t] });
        }
        Ok((dy, -f * dy - g * y))
    };

    let n = grid.len();
    let mut ys = Vec::with_capacity(n);
    let mut dys = Vec::with_capacity(n);
    let (mut y, mut dy) = (init.y, init.dy);
    ys.push(y);
    dys.push(dy);
    for k in 0..n - 1 {
        let t = grid.time(k);
        let h = grid.time(k + 1) - t;
        let half = 0.5 * h;
        let k1 = rhs(t, y, dy)?;
        let k2 = rhs(t + half, y + half * k1.0, dy + half * k1.1)?;
        let k3 = rhs(t + half, y + half * k2.0, dy + half * k2.1)?;
        let k4 = rhs(t + h, y + h * k3.0, dy + h * k3.1)?;
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dy += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !(y.is_finite() && dy.is_finite()) {
            return Err(Error::NonFiniteState {
                t: grid.time(k + 1),
            });
        }
        ys.push(y);
        dys.push(dy);
    }
    Ok(IvpSolution {
        y: SampledField::new(*grid, ys)?,
        dy: SampledField::new(*grid, dys)?,
    })
}

/// `max |y'' + F y' + G y| / (1 + |y|)` with analytic derivatives of `y`.
pub fn ode_residual(
    y: impl Fn(f64) -> Result<Jet>,
    ode: &impl PartnerOde,
    grid: &TimeGrid,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in grid.times() {
        let j = y(t)?;
        let r = j.d2 + ode.damping(t) * j.d1 + ode.frequency(t) * j.value;
        if !r.is_finite() {
            return Err(Error::NonFinite { t });
        }
        worst = worst.max(r.norm() / (1.0 + j.value.norm()));
    }
    Ok(worst)
}

/// [`ode_residual`] for sampled `y`: central differences for `y'` and the
/// three-point second difference for `y''`, with second-order one-sided
/// stencils at both ends. O(step²).
pub fn ode_residual_sampled(y: &SampledField, ode: &impl PartnerOde) -> f64 {
    let d1 = central_derivative(y);
    let v = y.values();
    let n = v.len();
    let h2 = y.grid().step().powi(2);
    let d2 = |k: usize| -> C64 {
        match k {
            _ if n == 3 => (v[0] - 2.0 * v[1] + v[2]) / h2,
            0 => (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2,
            k if k == n - 1 => (2.0 * v[k] - 5.0 * v[k - 1] + 4.0 * v[k - 2] - v[k - 3]) / h2,
            k => (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2,
        }
    };
    y.iter()
        .enumerate()
        .map(|(k, (t, v))| {
            (d2(k) + ode.damping(t) * d1[k] + ode.frequency(t) * v).norm() / (1.0 + v.norm())
        })
        .fold(0.0, f64::max)
}

/// `y₁ y₂' - y₁' y₂` of two states at the same time.
pub fn wronskian(a: &IvpState, b: &IvpState) -> Result<C64> {
    if (a.t - b.t).abs() > 1e-12 * (1.0 + a.t.abs()) {
        return Err(Error::InvalidArgument(format!(
            "states at different times {} and {}",
            a.t, b.t
        )));
    }
    Ok(a.y * b.dy - a.dy * b.y)
}

/// Largest relative change of the Wronskian along a sequence of mode pairs.
pub fn wronskian_drift(pairs: impl IntoIterator<Item = (IvpState, IvpState)>) -> Result<f64> {
    let mut first = None;
    let mut drift: f64 = 0.0;
    for (a, b) in pairs {
        let w = wronskian(&a, &b)?;
        let w0 = *first.get_or_insert(w);
        drift = drift.max((w - w0).norm() / w0.norm());
    }
    Ok(drift)
}

/// Max relative deviation of the Wronskian of two solutions from Abel's
/// relation `W(t) = W(t0)·exp(-∫F)`, the integral by cumulative Simpson.
pub fn abel_deviation(ode: &impl PartnerOde, a: &IvpSolution, b: &IvpSolution) -> Result<f64> {
    let grid = *a.grid();
    if *b.grid() != grid {
        return Err(Error::InvalidArgument(
            "solutions on different grids".into(),
        ));
    }
    let damping = SampledField::from_fn(grid, |t| ode.damping(t));
    let decay = cumulative_integral(&damping);
    let w0 = wronskian(&a.state(0), &b.state(0))?;
    let mut worst: f64 = 0.0;
    for k in 0..grid.len() {
        let w = wronskian(&a.state(k), &b.state(k))?;
        let predicted = w0 * (-decay[k]).exp();
        worst = worst.max((w - predicted).norm() / w0.norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub max_residual: f64,
    pub max_deviation: f64,
    pub wronskian_drift: f64,
    pub flagged_times: Vec<f64>,
    /// Bound every numeric entry must respect for [`passed`](Self::passed).
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.flagged_times.is_empty()
            && [self.max_residual, self.max_deviation, self.wronskian_drift]
                .iter()
                .all(|&v| v.is_finite() && v <= self.tolerance)
    }
}

/// `|ζ_h|` (as `max_residual`) and `|G + k₀²|` (as `max_deviation`) at a
/// late time, against the bound `10·s·e^{-2k₀t}`.
///
/// The leading terms are `ζ_h ≈ 4λe^{-2k₀t}` and
/// `G + k₀² ≈ 8k₀²(1 - λ)e^{-2k₀t}`, so the scale `s = max(1, k₀²|1 - λ|, |λ|)`
/// keeps the bound uniform in the parameters. At `k₀ ≤ 1`, `0 ≤ λ < 1` it is 1.
pub fn asymptotics_report(p: &FamilyParams, t_probe: f64) -> Result<VerificationReport> {
    if p.kind != FamilyKind::Hyp {
        return Err(Error::InvalidArgument(
            "asymptotics apply to the hyperbolic family".into(),
        ));
    }
    let k = p.rate;
    if t_probe < 5.0 / k {
        return Err(Error::InvalidArgument(format!(
            "probe time {t_probe} is below 5/k0 = {}",
            5.0 / k
        )));
    }
    let snap = families::hyp_snapshot(p, t_probe)?;
    let scale = 1f64.max(k * k * (1.0 - p.lambda).abs()).max(p.lambda.abs());
    Ok(VerificationReport {
        max_residual: snap.zeta.norm(),
        max_deviation: (snap.frequency + k * k).norm(),
        wronskian_drift: 0.0,
        flagged_times: Vec::new(),
        tolerance: 10.0 * scale * (-2.0 * k * t_probe).exp(),
    })
}

/// Tolerance of the finite-difference pipeline.
pub const PIPELINE_TOL: f64 = 1e-4;

/// Builds the partner twice, from the closed forms and from
/// [`alpha_numeric`], and compares `F` and `G`.
///
/// `max_deviation` is the larger of the two max-norm gaps; `max_residual`
/// is the round-trip error of [`reconstruct_fg`] against `(0, g)`.
pub fn crosscheck_family(p: &FamilyParams, grid: &TimeGrid) -> Result<VerificationReport> {
    let roots = families::singularity_scan(p, grid);
    if !roots.is_empty() {
        return Err(Error::SingularDenominator { times: roots });
    }
    let poles = p.damping_poles(grid.t0(), grid.t1());
    if !poles.is_empty() {
        return Err(Error::SingularCoefficient { times: poles });
    }

    let (coeffs, seed) = (p.coefficients(), p.seed());
    let sol = alpha_numeric(&coeffs, &seed, c(p.numeric_lambda(grid.t0())), grid)?;
    let partner = partner_coefficients(&coeffs, &sol)?;

    let mut deviation: f64 = 0.0;
    for (k, t) in grid.times().enumerate() {
        let snap = families::snapshot(p, t)?;
        deviation = deviation
            .max((partner.damping[k] - snap.damping).norm())
            .max((partner.frequency[k] - snap.frequency).norm());
    }

    let back = reconstruct_fg(&sol)?;
    let round_trip = back
        .f
        .iter()
        .map(|(t, f)| (f - coeffs.f(t)).norm())
        .chain(back.g.iter().map(|(t, g)| (g - coeffs.g(t)).norm()))
        .fold(0.0, f64::max);

    Ok(VerificationReport {
        max_residual: round_trip,
        max_deviation: deviation,
        wronskian_drift: 0.0,
        flagged_times: Vec::new(),
        tolerance: PIPELINE_TOL,
    })
}

/// Tolerance for RK4 against a closed-form solution.
pub const RK_TOL: f64 = 1e-6;

/// Integrates the family partner from the closed-form initial state and
/// compares with the closed-form solution on the whole grid.
///
/// `max_deviation` is `max |y_RK - y|`; `max_residual` is the analytic
/// substitution residual of the closed form on the same grid.
pub fn rk_crosscheck(
    p: &FamilyParams,
    k: &SuperpositionConstants,
    grid: &TimeGrid,
) -> Result<(IvpSolution, VerificationReport)> {
    let exact = |t: f64| families::solution_jet(p, k, t);
    let init = IvpState::from_jet(grid.t0(), exact(grid.t0())?);
    let sol = integrate_ivp(p, init, grid)?;
    let mut deviation: f64 = 0.0;
    for (t, y) in sol.y.iter() {
        deviation = deviation.max((y - exact(t)?.value).norm());
    }
    let residual = ode_residual(exact, p, grid)?;
    let report = VerificationReport {
        max_residual: residual,
        max_deviation: deviation,
        wronskian_drift: 0.0,
        flagged_times: Vec::new(),
        tolerance: RK_TOL,
    };
    Ok((sol, report))
}

/// Which group of checks [`run_suite`] executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Factorize,
    Families,
    Verify,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "factorize" => Ok(Suite::Factorize),
            "families" => Ok(Suite::Families),
            "verify" => Ok(Suite::Verify),
            other => Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
        }
    }
}

/// One named check: measured value against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            value,
            tolerance,
        }
    }

    fn from_result(name: &str, r: Result<f64>, tolerance: f64) -> Self {
        Self::new(name, r.unwrap_or(f64::NAN), tolerance)
    }

    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<44} {:.3e} (tol {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

/// Parameter sets used in the figures.
pub fn figure_params() -> (
    FamilyParams,
    SuperpositionConstants,
    FamilyParams,
    SuperpositionConstants,
) {
    (
        FamilyParams::trig(3.5, 2.0).expect("valid"),
        SuperpositionConstants::real(2.0 / 7.0, 7.0 / 4.0),
        FamilyParams::hyperbolic(1.0, 0.5).expect("valid"),
        SuperpositionConstants::real(2.0, -1.0),
    )
}

/// Runs the module invariants at the figure parameters.
pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Factorize) {
        out.extend(factorize_checks());
    }
    if matches!(suite, Suite::All | Suite::Families) {
        out.extend(family_checks());
    }
    if matches!(suite, Suite::All | Suite::Verify) {
        out.extend(verify_checks());
    }
    out
}

fn grid(t0: f64, t1: f64, n: usize) -> TimeGrid {
    make_grid(t0, t1, n).expect("fixed grid")
}

fn factorize_checks() -> Vec<CheckOutcome> {
    let (trig, _, hyp, _) = figure_params();
    let mut out = Vec::new();
    for (name, p, window) in [("trig", trig, (-0.4, 0.4)), ("hyp", hyp, (-5.0, 5.0))] {
        let scan = crate::factorize::riccati_scan(
            &p.seed(),
            &p.coefficients(),
            grid(window.0, window.1, 1000).times(),
        );
        let value = if scan.non_finite.is_empty() {
            scan.max_residual
        } else {
            f64::NAN
        };
        out.push(CheckOutcome::new(
            format!("riccati residual ({name})"),
            value,
            1e-12,
        ));
    }
    for (name, p, g) in [
        ("trig", trig, grid(0.0, 0.4, 4001)),
        ("hyp", hyp, grid(0.0, 2.0, 4001)),
    ] {
        let r = crosscheck_family(&p, &g).map(|r| r.max_residual);
        out.push(CheckOutcome::from_result(
            &format!("round trip reconstruct_fg ({name})"),
            r,
            PIPELINE_TOL,
        ));
    }
    let ratio = alpha_convergence_ratios(&trig, grid(0.0, 0.4, 101), 3)
        .map(|r| r.into_iter().fold(f64::INFINITY, f64::min));
    // reported as 8/ratio so that "≤ 1" means the order holds
    out.push(CheckOutcome::from_result(
        "alpha Simpson order (8/ratio)",
        ratio.map(|r| 8.0 / r),
        1.0,
    ));
    out
}

fn family_checks() -> Vec<CheckOutcome> {
    let (trig, _, hyp, _) = figure_params();
    let mut out = Vec::new();
    let gap = grid(0.0, 6.0, 2001)
        .times()
        .map(|t| {
            let a = families::trig_frequency(3.5, 2.0, t);
            (a - families::trig_frequency_reduced(3.5, 2.0, t)).abs() / (1.0 + a.abs())
        })
        .fold(0.0, f64::max);
    out.push(CheckOutcome::new("trig G forms agree", gap, 1e-12));

    for (name, p, window) in [("trig", trig, (-0.4, 0.4)), ("hyp", hyp, (0.0, 5.0))] {
        let r = grid(window.0, window.1, 801)
            .times()
            .map(|t| {
                let pt = p.factor_point(t)?;
                let (f, _) = crate::factorize::partner_at(&pt, c(0.0), p.coefficients().g(t))
                    .ok_or(Error::DivisionBySingularAlpha { times: vec![t] })?;
                Ok((f - families::snapshot(&p, t)?.damping).norm())
            })
            .try_fold(0.0, |m: f64, v: Result<f64>| v.map(|v| m.max(v)));
        out.push(CheckOutcome::from_result(
            &format!("F = 2·zeta·rate ({name})"),
            r,
            1e-8,
        ));
    }

    let period = std::f64::consts::PI / 3.5;
    let k = SuperpositionConstants::real(2.0 / 7.0, 7.0 / 4.0);
    let r = grid(0.0, 4.0, 2001)
        .times()
        .map(|t| {
            let a = families::trig_solution(&trig, &k, t)?.im;
            let b = families::trig_solution(&trig, &k, t + period)?.im;
            Ok((a - b).abs())
        })
        .try_fold(0.0, |m: f64, v: Result<f64>| v.map(|v| m.max(v)));
    out.push(CheckOutcome::from_result(
        "Im y periodic in pi/omega0",
        r,
        1e-9,
    ));

    let derived = SuperpositionConstants::real(-1.0 / 3.5, -7.0);
    let r = grid(-0.4, 0.4, 801)
        .times()
        .map(|t| {
            Ok((families::trig_solution(&trig, &derived, t)?
                - families::trig_v_connection(&trig, t)?)
            .norm())
        })
        .try_fold(0.0, |m: f64, v: Result<f64>| v.map(|v| m.max(v)));
    out.push(CheckOutcome::from_result(
        "v-connection (C1=-1/w0, C2=-2w0)",
        r,
        1e-10,
    ));

    let v = wronskian_drift(grid(-0.4, 0.4, 801).times().map(|t| {
        let (a, b) = families::trig_v_mode_jets(3.5, t).expect("regular");
        (IvpState::from_jet(t, a), IvpState::from_jet(t, b))
    }));
    out.push(CheckOutcome::from_result("v-mode Wronskian drift", v, 1e-9));
    for (name, idx) in [("u-mode", 0usize), ("w-mode", 2usize)] {
        let v = wronskian_drift(grid(0.0, 6.0, 801).times().map(|t| {
            let m = families::hyp_mode_jets(1.0, t);
            (
                IvpState::from_jet(t, m[idx]),
                IvpState::from_jet(t, m[idx + 1]),
            )
        }));
        out.push(CheckOutcome::from_result(
            &format!("{name} Wronskian drift"),
            v,
            1e-9,
        ));
    }

    let scans = [
        (trig, grid(-10.0, 10.0, 4001)),
        (hyp, grid(-10.0, 10.0, 4001)),
    ];
    let count: usize = scans
        .iter()
        .map(|(p, g)| families::singularity_scan(p, g).len())
        .sum();
    out.push(CheckOutcome::new(
        "scan empty in nonsingular domain",
        count as f64,
        0.0,
    ));
    let root = families::singularity_scan(
        &FamilyParams::trig(1.0, 0.5).expect("valid"),
        &grid(0.0, 2.0, 2001),
    );
    let err = root
        .first()
        .map_or(f64::NAN, |r| (r - std::f64::consts::FRAC_PI_4).abs());
    out.push(CheckOutcome::new("scan first root pi/4", err, 1e-9));
    out
}

fn verify_checks() -> Vec<CheckOutcome> {
    let (trig, kt, hyp, kh) = figure_params();
    let mut out = Vec::new();
    for (name, p, k, g) in [
        ("trig", trig, kt, grid(-0.4, 0.4, 8001)),
        ("hyp", hyp, kh, grid(0.0, 5.0, 8001)),
    ] {
        let r = rk_crosscheck(&p, &k, &g).map(|(_, r)| r);
        out.push(CheckOutcome::from_result(
            &format!("RK4 vs closed form ({name})"),
            r.as_ref().map(|r| r.max_deviation).map_err(Clone::clone),
            RK_TOL,
        ));
        out.push(CheckOutcome::from_result(
            &format!("closed-form ODE residual ({name})"),
            r.map(|r| r.max_residual),
            1e-9,
        ));
    }
    for (name, p, g) in [
        ("trig", trig, grid(-0.4, 0.4, 4001)),
        ("hyp", hyp, grid(0.0, 5.0, 4001)),
    ] {
        out.push(CheckOutcome::from_result(
            &format!("Abel relation ({name})"),
            abel_for_family(&p, &g),
            1e-6,
        ));
    }
    for (name, p, g) in [
        ("trig", trig, grid(0.0, 0.4, 4001)),
        ("hyp", hyp, grid(0.0, 2.0, 4001)),
    ] {
        let r = crosscheck_family(&p, &g).map(|r| r.max_deviation);
        out.push(CheckOutcome::from_result(
            &format!("closed form vs pipeline ({name})"),
            r,
            PIPELINE_TOL,
        ));
    }
    for (k0, lam, t) in [(1.0, 0.5, 10.0), (1.0, 0.5, 5.0), (2.0, 0.9, 5.0)] {
        let p = FamilyParams::hyperbolic(k0, lam).expect("valid");
        let r =
            asymptotics_report(&p, t).map(|r| r.max_residual.max(r.max_deviation) / r.tolerance);
        out.push(CheckOutcome::from_result(
            &format!("asymptotics k0={k0} lambda={lam} t={t} (/bound)"),
            r,
            1.0,
        ));
    }
    out
}

/// Abel check for two independent closed-form solutions of a family.
pub fn abel_for_family(p: &FamilyParams, g: &TimeGrid) -> Result<f64> {
    let (ka, kb) = match p.kind {
        FamilyKind::Trig => (
            SuperpositionConstants::real(1.0, 0.0),
            SuperpositionConstants::real(0.0, 1.0),
        ),
        FamilyKind::Hyp => (
            SuperpositionConstants::real(1.0, 0.0),
            SuperpositionConstants::real(0.0, 1.0),
        ),
    };
    let (a, _) = rk_crosscheck(p, &ka, g)?;
    let (b, _) = rk_crosscheck(p, &kb, g)?;
    abel_deviation(p, &a, &b)
}

/// Ratios of successive max-norm errors of the pipeline `α` against the
/// closed form, halving the step `refinements` times.
pub fn alpha_convergence_ratios(
    p: &FamilyParams,
    coarse: TimeGrid,
    refinements: usize,
) -> Result<Vec<f64>> {
    let (coeffs, seed) = (p.coefficients(), p.seed());
    let mut grid = coarse;
    let mut errors = Vec::with_capacity(refinements + 1);
    for _ in 0..=refinements {
        let sol = alpha_numeric(&coeffs, &seed, c(p.numeric_lambda(grid.t0())), &grid)?;
        let mut err: f64 = 0.0;
        for (t, a) in sol.alpha.iter() {
            err = err.max((a - families::snapshot(p, t)?.alpha).norm());
        }
        errors.push(err);
        grid = grid.refined();
    }
    Ok(errors.windows(2).map(|w| w[0] / w[1]).collect())
}

/// Ratios of successive max-norm RK4 errors against the closed form.
pub fn rk_convergence_ratios(
    p: &FamilyParams,
    k: &SuperpositionConstants,
    coarse: TimeGrid,
    refinements: usize,
) -> Result<Vec<f64>> {
    let mut grid = coarse;
    let mut errors = Vec::with_capacity(refinements + 1);
    for _ in 0..=refinements {
        errors.push(rk_crosscheck(p, k, &grid)?.1.max_deviation);
        grid = grid.refined();
    }
    Ok(errors.windows(2).map(|w| w[0] / w[1]).collect())
}
