//! Generic αβ-factorization pipeline.
//!
//! Starting from `y'' + f y' + g y = 0` and a Riccati seed `h`, the factor
//! coefficients are
//!
//! ```text
//! α(t) = e^{-∫(h-f)} / (λ + ∫ 2h e^{-2∫(h-f)})^{1/2},    β = h α,
//! ```
//!
//! with all integrals taken from the grid start, so `λ` is the value of the
//! radicand at `t0`. The partner `B⁺B⁻ y = 0` then has
//!
//! ```text
//! F = f - 2α'/α,    G = g + β'(α - α⁻¹).
//! ```
//!
//! The `f = 0` quantum variant (sign-flipped linear term in the Bernoulli
//! equation, `α' + hα³ - hα = 0`) is not implemented; only the plus branch
//! of `B⁻` is.

use std::fmt;
use std::sync::Arc;

use crate::funcs::{
    central_derivative, cumulative_integral, principal_sqrt, SampledField, TimeGrid,
};
use crate::{Error, Result, C64};

/// Scalar function of time.
pub type ScalarFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// |radicand| below this at a sample counts as a zero crossing.
pub const RADICAND_TOL: f64 = 1e-8;

/// |α| below this makes `α'/α` and `α⁻¹` undefined.
pub const ALPHA_TOL: f64 = 1e-12;

/// Coefficients `f` (damping) and `g` (frequency) of `y'' + f y' + g y = 0`.
#[derive(Clone)]
pub struct CoefficientPair {
    f: ScalarFn,
    g: ScalarFn,
}

impl CoefficientPair {
    pub fn new(
        f: impl Fn(f64) -> C64 + Send + Sync + 'static,
        g: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        CoefficientPair {
            f: Arc::new(f),
            g: Arc::new(g),
        }
    }

    pub fn constant(f: C64, g: C64) -> Self {
        Self::new(move |_| f, move |_| g)
    }

    pub fn f(&self, t: f64) -> C64 {
        (self.f)(t)
    }

    pub fn g(&self, t: f64) -> C64 {
        (self.g)(t)
    }
}

impl fmt::Debug for CoefficientPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientPair").finish_non_exhaustive()
    }
}

/// A solution `h` of `-z' - f z + z² + g = 0` with its analytic derivative.
#[derive(Clone)]
pub struct RiccatiSeed {
    h: ScalarFn,
    h_prime: ScalarFn,
}

impl RiccatiSeed {
    pub fn new(
        h: impl Fn(f64) -> C64 + Send + Sync + 'static,
        h_prime: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        RiccatiSeed {
            h: Arc::new(h),
            h_prime: Arc::new(h_prime),
        }
    }

    /// `h ≡ 0`, the seed of the free particle.
    pub fn zero() -> Self {
        Self::new(|_| C64::new(0.0, 0.0), |_| C64::new(0.0, 0.0))
    }

    pub fn h(&self, t: f64) -> C64 {
        (self.h)(t)
    }

    pub fn h_prime(&self, t: f64) -> C64 {
        (self.h_prime)(t)
    }
}

impl fmt::Debug for RiccatiSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RiccatiSeed").finish_non_exhaustive()
    }
}

/// `-h' - f h + h² + g` at `t`.
pub fn riccati_residual(seed: &RiccatiSeed, coeffs: &CoefficientPair, t: f64) -> Result<C64> {
    let h = seed.h(t);
    let r = -seed.h_prime(t) - coeffs.f(t) * h + h * h + coeffs.g(t);
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Outcome of checking a seed over many times.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiScan {
    pub max_residual: f64,
    /// Times where the residual could not be evaluated (poles of `h`).
    pub non_finite: Vec<f64>,
}

/// Evaluates [`riccati_residual`] at every time, collecting poles instead
/// of stopping at the first one.
pub fn riccati_scan(
    seed: &RiccatiSeed,
    coeffs: &CoefficientPair,
    times: impl IntoIterator<Item = f64>,
) -> RiccatiScan {
    let mut scan = RiccatiScan {
        max_residual: 0.0,
        non_finite: Vec::new(),
    };
    for t in times {
        match riccati_residual(seed, coeffs, t) {
            Ok(r) => scan.max_residual = scan.max_residual.max(r.norm()),
            Err(_) => scan.non_finite.push(t),
        }
    }
    scan
}

/// Factor coefficients and their derivatives at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPoint {
    pub alpha: C64,
    pub alpha_prime: C64,
    pub beta: C64,
    pub beta_prime: C64,
}

impl FactorPoint {
    /// Constant `α` with `β = h α`; `α'` vanishes.
    pub fn constant_alpha(alpha: C64, h: C64, h_prime: C64) -> Self {
        FactorPoint {
            alpha,
            alpha_prime: C64::new(0.0, 0.0),
            beta: h * alpha,
            beta_prime: h_prime * alpha,
        }
    }

    fn check_alpha(&self) -> bool {
        self.alpha.is_finite() && self.alpha.norm() >= ALPHA_TOL
    }
}

/// `α' + h α³ + (h - f) α`, zero for a valid factorization.
pub fn bernoulli_residual(point: &FactorPoint, h: C64, f: C64) -> C64 {
    let a = point.alpha;
    point.alpha_prime + h * a * a * a + (h - f) * a
}

/// Partner coefficients `(F, G)` at one time.
pub fn partner_at(point: &FactorPoint, f: C64, g: C64) -> Option<(C64, C64)> {
    if !point.check_alpha() {
        return None;
    }
    let inv = point.alpha.inv();
    let damping = f - 2.0 * point.alpha_prime * inv;
    let frequency = g + point.beta_prime * (point.alpha - inv);
    Some((damping, frequency))
}

/// `(f, g)` recovered by expanding `B⁻B⁺`:
/// `(α'/α + αβ + β/α, β² + β'/α)`.
pub fn reconstruct_at(point: &FactorPoint) -> Option<(C64, C64)> {
    if !point.check_alpha() {
        return None;
    }
    let FactorPoint {
        alpha,
        alpha_prime,
        beta,
        beta_prime,
    } = *point;
    let inv = alpha.inv();
    Some((
        alpha_prime * inv + alpha * beta + beta * inv,
        beta * beta + beta_prime * inv,
    ))
}

/// Whether the partner has no first-derivative term at this point,
/// i.e. `|f - 2α'/α| < tol`.
pub fn undamped_condition(point: &FactorPoint, f: C64, tol: f64) -> bool {
    point.check_alpha() && (f - 2.0 * point.alpha_prime / point.alpha).norm() < tol
}

/// Frequency of the undamped partner obtained when `f = 2α'/α`, normalized
/// to `α(t0) = 1`: `G = g + (f h / 2 + h')(e^{∫f} - 1)`.
pub fn undamped_frequency(f: C64, g: C64, h: C64, h_prime: C64, integral_of_f: C64) -> C64 {
    g + (0.5 * f * h + h_prime) * (integral_of_f.exp() - 1.0)
}

/// Frequency `g - 2h'` of the partner from the standard factorization of an
/// equation with `f = 0`. For the harmonic seed this is `-ω₀²(2tan²ω₀t + 1)`.
pub fn standard_partner_frequency(seed: &RiccatiSeed, coeffs: &CoefficientPair, t: f64) -> C64 {
    coeffs.g(t) - 2.0 * seed.h_prime(t)
}

/// Sampled factorization produced by [`alpha_numeric`].
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSolution {
    pub lambda: C64,
    pub alpha: SampledField,
    pub beta: SampledField,
    pub alpha_prime: SampledField,
    pub beta_prime: SampledField,
}

impl FactorSolution {
    pub fn grid(&self) -> &TimeGrid {
        self.alpha.grid()
    }

    pub fn point(&self, k: usize) -> FactorPoint {
        FactorPoint {
            alpha: self.alpha[k],
            alpha_prime: self.alpha_prime[k],
            beta: self.beta[k],
            beta_prime: self.beta_prime[k],
        }
    }

    /// [`bernoulli_residual`] at every sample.
    pub fn bernoulli_residuals(
        &self,
        seed: &RiccatiSeed,
        coeffs: &CoefficientPair,
    ) -> SampledField {
        SampledField::from_fn(*self.grid(), |t| {
            let k = self.grid().nearest_index(t).expect("own grid");
            bernoulli_residual(&self.point(k), seed.h(t), coeffs.f(t))
        })
    }
}

/// Builds `α`, `β = hα` and their derivatives on `grid` by quadrature.
///
/// `lambda` is the radicand at `grid.t0()`. Every zero crossing of the
/// radicand inside the window is reported as [`Error::SingularDenominator`].
/// The square root is principal at `t0` and continued along the grid, which
/// only differs from the principal branch when a complex radicand winds
/// across the negative real axis.
pub fn alpha_numeric(
    coeffs: &CoefficientPair,
    seed: &RiccatiSeed,
    lambda: C64,
    grid: &TimeGrid,
) -> Result<FactorSolution> {
    let h = SampledField::from_fn(*grid, |t| seed.h(t));
    if let Some(t) = h.first_non_finite() {
        return Err(Error::NonFinite { t });
    }
    let f = SampledField::from_fn(*grid, |t| coeffs.f(t));
    if let Some(t) = f.first_non_finite() {
        return Err(Error::NonFinite { t });
    }

    let drift = cumulative_integral(&h.zip_with(&f, |h, f| h - f)?);
    let envelope = drift.map(|_, i| (-i).exp());
    let inner = h.zip_with(&envelope, |h, e| 2.0 * h * e * e)?;
    let radicand = cumulative_integral(&inner).map(|_, i| lambda + i);

    let crossings = radicand_crossings(&radicand);
    if !crossings.is_empty() {
        return Err(Error::SingularDenominator { times: crossings });
    }

    let roots = SampledField::new(*grid, continued_sqrt(&radicand))?;
    let alpha = envelope.zip_with(&roots, |e, r| e / r)?;
    if let Some(t) = alpha.first_non_finite() {
        return Err(Error::NonFinite { t });
    }
    let beta = h.zip_with(&alpha, |h, a| h * a)?;
    let alpha_prime = central_derivative(&alpha);
    let beta_prime = central_derivative(&beta);
    Ok(FactorSolution {
        lambda,
        alpha,
        beta,
        alpha_prime,
        beta_prime,
    })
}

/// Times where the piecewise-linear path of the radicand passes within
/// [`RADICAND_TOL`] of zero, at the closest point of each segment. For a
/// real radicand that is the interpolated sign change.
fn radicand_crossings(radicand: &SampledField) -> Vec<f64> {
    let grid = radicand.grid();
    let v = radicand.values();
    let mut times: Vec<f64> = Vec::new();
    for k in 0..v.len() - 1 {
        let (a, d) = (v[k], v[k + 1] - v[k]);
        let s = if d.norm_sqr() > 0.0 {
            (-(a * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
        } else {
            0.0
        };
        if (a + s * d).norm() < RADICAND_TOL {
            let t = grid.time(k) + s * grid.step();
            if times
                .last()
                .is_none_or(|&last| (t - last).abs() > 0.5 * grid.step())
            {
                times.push(t);
            }
        }
    }
    times
}

/// Square roots along the samples, principal at the first one and then
/// continued so that no sample flips sign relative to its predecessor.
fn continued_sqrt(radicand: &SampledField) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(radicand.len());
    for &r in radicand.values() {
        let mut root = principal_sqrt(r);
        if let Some(&prev) = out.last() {
            if (root - prev).norm() > (root + prev).norm() {
                root = -root;
            }
        }
        out.push(root);
    }
    out
}

/// Sampled coefficients of `y'' + F y' + G y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerSamples {
    pub damping: SampledField,
    pub frequency: SampledField,
}

/// Sampled `(f, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCoefficients {
    pub f: SampledField,
    pub g: SampledField,
}

/// Partner `F = f - 2α'/α`, `G = g + β'(α - α⁻¹)` on the solution's grid.
pub fn partner_coefficients(
    coeffs: &CoefficientPair,
    sol: &FactorSolution,
) -> Result<PartnerSamples> {
    let grid = *sol.grid();
    let mut damping = Vec::with_capacity(grid.len());
    let mut frequency = Vec::with_capacity(grid.len());
    let mut flagged = Vec::new();
    for (k, t) in grid.times().enumerate() {
        match partner_at(&sol.point(k), coeffs.f(t), coeffs.g(t)) {
            Some((d, g)) => {
                damping.push(d);
                frequency.push(g);
            }
            None => flagged.push(t),
        }
    }
    if !flagged.is_empty() {
        return Err(Error::DivisionBySingularAlpha { times: flagged });
    }
    Ok(PartnerSamples {
        damping: SampledField::new(grid, damping)?,
        frequency: SampledField::new(grid, frequency)?,
    })
}

/// Inverse check: expands `B⁻B⁺` back into `(f, g)`.
pub fn reconstruct_fg(sol: &FactorSolution) -> Result<SampledCoefficients> {
    let grid = *sol.grid();
    let mut f = Vec::with_capacity(grid.len());
    let mut g = Vec::with_capacity(grid.len());
    let mut flagged = Vec::new();
    for (k, t) in grid.times().enumerate() {
        match reconstruct_at(&sol.point(k)) {
            Some((a, b)) => {
                f.push(a);
                g.push(b);
            }
            None => flagged.push(t),
        }
    }
    if !flagged.is_empty() {
        return Err(Error::DivisionBySingularAlpha { times: flagged });
    }
    Ok(SampledCoefficients {
        f: SampledField::new(grid, f)?,
        g: SampledField::new(grid, g)?,
    })
}
