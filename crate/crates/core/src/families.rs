//! Closed forms of the two worked families.
//!
//! Trigonometric (`g = ω₀²`, seed `h = ω₀ tan ω₀t`):
//!
//! ```text
//! α = cos ω₀t / √(λ - cos²ω₀t),      ζₒ = λ tan ω₀t / (λ - cos²ω₀t),
//! G = ω₀² [1/(λ - cos²) - sin²2ω₀t / (4(λ - cos²)²)].
//! ```
//!
//! Hyperbolic (`g = -k₀²`, seed `h = -k₀ tanh k₀t`):
//!
//! ```text
//! α = cosh k₀t / √(λ - cosh²k₀t),    ζ_h = λ tanh k₀t / (cosh²k₀t - λ),
//! G = -k₀² (sinh⁴k₀t + λ - 1) / (cosh²k₀t - λ)².
//! ```
//!
//! The hyperbolic `G` is the form obtained by reducing `g + β'(α - α⁻¹)`.
//! The frequently quoted variant with `sinh 2k₀t` in place of
//! `sinh² 2k₀t` ([`hyp_frequency_as_printed`]) decays to zero instead of
//! approaching `-k₀²`; it is kept only for comparison.
//!
//! Square roots use the principal branch, `√(-x) = +i√x`. Modes are
//! normalized with all proportionality constants equal to one, so the
//! Wronskians are `ω₀` (v-modes) and `k₀` (u- and w-modes).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::factorize::{CoefficientPair, FactorPoint, RiccatiSeed};
use crate::funcs::{c, principal_sqrt, Jet, TimeGrid};
use crate::{Error, Result, C64};

/// Family denominators closer than this to zero are singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    #[serde(alias = "trigonometric")]
    Trig,
    #[serde(alias = "hyperbolic")]
    Hyp,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trig" | "trigonometric" => Ok(FamilyKind::Trig),
            "hyp" | "hyperbolic" => Ok(FamilyKind::Hyp),
            other => Err(Error::InvalidArgument(format!(
                "unknown family kind `{other}`"
            ))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Trig => "trig",
            FamilyKind::Hyp => "hyp",
        })
    }
}

/// Family selector: kind, rate (`ω₀` or `k₀`) and deformation `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub kind: FamilyKind,
    pub rate: f64,
    pub lambda: f64,
}

impl FamilyParams {
    pub fn new(kind: FamilyKind, rate: f64, lambda: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rate must be positive, got {rate}"
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "λ must be finite, got {lambda}"
            )));
        }
        Ok(FamilyParams { kind, rate, lambda })
    }

    pub fn trig(omega0: f64, lambda: f64) -> Result<Self> {
        Self::new(FamilyKind::Trig, omega0, lambda)
    }

    pub fn hyperbolic(k0: f64, lambda: f64) -> Result<Self> {
        Self::new(FamilyKind::Hyp, k0, lambda)
    }

    /// `λ - cos²ω₀t` or `λ - cosh²k₀t`, the quantity under the square root.
    pub fn radicand(&self, t: f64) -> f64 {
        match self.kind {
            FamilyKind::Trig => self.lambda - (self.rate * t).cos().powi(2),
            FamilyKind::Hyp => self.lambda - (self.rate * t).cosh().powi(2),
        }
    }

    /// Denominator of the damping ratio: `λ - cos²ω₀t` or `cosh²k₀t - λ`.
    pub fn denominator(&self, t: f64) -> f64 {
        match self.kind {
            FamilyKind::Trig => self.radicand(t),
            FamilyKind::Hyp => -self.radicand(t),
        }
    }

    /// The integration constant `alpha_numeric` needs when its integrals
    /// start at `t0`: `λ/cos²(ω₀t0) - 1` or `λ/cosh²(k₀t0) - 1`.
    pub fn numeric_lambda(&self, t0: f64) -> f64 {
        let scale = match self.kind {
            FamilyKind::Trig => (self.rate * t0).cos().powi(2),
            FamilyKind::Hyp => (self.rate * t0).cosh().powi(2),
        };
        self.lambda / scale - 1.0
    }

    /// `g`: `ω₀²` or `-k₀²`, with `f = 0`.
    pub fn coefficients(&self) -> CoefficientPair {
        let g = match self.kind {
            FamilyKind::Trig => self.rate * self.rate,
            FamilyKind::Hyp => -self.rate * self.rate,
        };
        CoefficientPair::constant(c(0.0), c(g))
    }

    pub fn seed(&self) -> RiccatiSeed {
        let w = self.rate;
        match self.kind {
            FamilyKind::Trig => RiccatiSeed::new(
                move |t| c(w * (w * t).tan()),
                move |t| c(w * w / (w * t).cos().powi(2)),
            ),
            FamilyKind::Hyp => RiccatiSeed::new(
                move |t| c(-w * (w * t).tanh()),
                move |t| c(-w * w / (w * t).cosh().powi(2)),
            ),
        }
    }

    /// Poles of the damping ratio inside `[t0, t1]`. `ζₒ` inherits the poles
    /// of `tan ω₀t`; `ζ_h` has none.
    pub fn damping_poles(&self, t0: f64, t1: f64) -> Vec<f64> {
        match self.kind {
            FamilyKind::Hyp => Vec::new(),
            FamilyKind::Trig => {
                let period = PI / self.rate;
                let first = ((t0 - FRAC_PI_2 / self.rate) / period).ceil() as i64;
                (first..)
                    .map(|j| (FRAC_PI_2 + j as f64 * PI) / self.rate)
                    .take_while(|&t| t <= t1)
                    .collect()
            }
        }
    }

    /// Analytic `α`, `β` and their derivatives.
    pub fn factor_point(&self, t: f64) -> Result<FactorPoint> {
        self.check_regular(t)?;
        let w = self.rate;
        let (alpha, beta) = match self.kind {
            FamilyKind::Trig => {
                let (s, co) = (w * t).sin_cos();
                let q = self.radicand_jet(t).inv_sqrt();
                (
                    Jet::real(co, -w * s, -w * w * co) * q,
                    Jet::real(w * s, w * w * co, -w * w * w * s) * q,
                )
            }
            FamilyKind::Hyp => {
                let (s, ch) = ((w * t).sinh(), (w * t).cosh());
                let q = self.radicand_jet(t).inv_sqrt();
                (
                    Jet::real(ch, w * s, w * w * ch) * q,
                    Jet::real(-w * s, -w * w * ch, -w * w * w * s) * q,
                )
            }
        };
        Ok(FactorPoint {
            alpha: alpha.value,
            alpha_prime: alpha.d1,
            beta: beta.value,
            beta_prime: beta.d1,
        })
    }

    fn radicand_jet(&self, t: f64) -> Jet {
        let w = self.rate;
        match self.kind {
            FamilyKind::Trig => Jet::real(
                self.radicand(t),
                w * (2.0 * w * t).sin(),
                2.0 * w * w * (2.0 * w * t).cos(),
            ),
            FamilyKind::Hyp => Jet::real(
                self.radicand(t),
                -w * (2.0 * w * t).sinh(),
                -2.0 * w * w * (2.0 * w * t).cosh(),
            ),
        }
    }

    fn check_regular(&self, t: f64) -> Result<()> {
        if self.radicand(t).abs() < SINGULAR_TOL {
            Err(Error::SingularTime { t })
        } else {
            Ok(())
        }
    }

    fn expect_kind(&self, kind: FamilyKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "expected a {kind} family, got {}",
                self.kind
            )))
        }
    }
}

/// Everything the closed forms give at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySnapshot {
    pub t: f64,
    pub h: C64,
    pub alpha: C64,
    pub beta: C64,
    /// Damping ratio `ζ(t)`.
    pub zeta: C64,
    /// Parametric frequency coefficient `G(t)`.
    pub frequency: C64,
    /// First-derivative coefficient `F = 2ζ·rate`.
    pub damping: C64,
}

/// Free constants of the general solution: `(C₁, C₂)` for the trigonometric
/// family and `(C₃, C₄)` for the hyperbolic one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionConstants {
    pub c_a: C64,
    pub c_b: C64,
}

impl SuperpositionConstants {
    pub fn new(c_a: C64, c_b: C64) -> Self {
        SuperpositionConstants { c_a, c_b }
    }

    pub fn real(c_a: f64, c_b: f64) -> Self {
        Self::new(c(c_a), c(c_b))
    }
}

pub fn trig_snapshot(p: &FamilyParams, t: f64) -> Result<FamilySnapshot> {
    p.expect_kind(FamilyKind::Trig)?;
    p.check_regular(t)?;
    let (w, lam) = (p.rate, p.lambda);
    let (s, co) = (w * t).sin_cos();
    let d = lam - co * co;
    let root = principal_sqrt(c(d));
    let zeta = lam * (w * t).tan() / d;
    Ok(FamilySnapshot {
        t,
        h: c(w * (w * t).tan()),
        alpha: co / root,
        beta: w * s / root,
        zeta: c(zeta),
        frequency: c(trig_frequency(w, lam, t)),
        damping: c(2.0 * zeta * w),
    })
}

/// `ω₀²(t) = ω₀²[1/(λ - cos²ω₀t) - sin²2ω₀t / (4(λ - cos²ω₀t)²)]`.
pub fn trig_frequency(omega0: f64, lambda: f64, t: f64) -> f64 {
    let d = lambda - (omega0 * t).cos().powi(2);
    omega0 * omega0 * (1.0 / d - (2.0 * omega0 * t).sin().powi(2) / (4.0 * d * d))
}

/// Same coefficient reduced to `ω₀²(sin⁴ω₀t + λ - 1)/(λ - cos²ω₀t)²`.
pub fn trig_frequency_reduced(omega0: f64, lambda: f64, t: f64) -> f64 {
    let (s, co) = (omega0 * t).sin_cos();
    let d = lambda - co * co;
    omega0 * omega0 * (s.powi(4) + lambda - 1.0) / (d * d)
}

/// `y(t) = C₁(ω₀t + ½sin2ω₀t)/(2√(λ - cos²ω₀t)) - iC₂/(2√(λ - cos²ω₀t))`.
pub fn trig_solution(p: &FamilyParams, k: &SuperpositionConstants, t: f64) -> Result<C64> {
    trig_solution_jet(p, k, t).map(|j| j.value)
}

/// [`trig_solution`] with analytic first and second derivatives.
pub fn trig_solution_jet(p: &FamilyParams, k: &SuperpositionConstants, t: f64) -> Result<Jet> {
    p.expect_kind(FamilyKind::Trig)?;
    p.check_regular(t)?;
    let w = p.rate;
    let co = (w * t).cos();
    let phase = w * t + 0.5 * (2.0 * w * t).sin();
    let numerator = Jet::new(
        k.c_a * phase - C64::i() * k.c_b,
        k.c_a * (2.0 * w * co * co),
        k.c_a * (-2.0 * w * w * (2.0 * w * t).sin()),
    );
    Ok((numerator * p.radicand_jet(t).inv_sqrt()).scale(c(0.5)))
}

/// Singular modes of the standard partner, `v₁ = ω₀/cos ω₀t` and
/// `v₂ = (ω₀t/2 + ¼sin2ω₀t)/(ω₀ cos ω₀t)`.
pub fn trig_v_modes(omega0: f64, t: f64) -> Result<(C64, C64)> {
    trig_v_mode_jets(omega0, t).map(|(a, b)| (a.value, b.value))
}

pub fn trig_v_mode_jets(omega0: f64, t: f64) -> Result<(Jet, Jet)> {
    let w = omega0;
    let (s, co) = (w * t).sin_cos();
    if co.abs() < SINGULAR_TOL {
        return Err(Error::SingularTime { t });
    }
    let n = w * t + 0.5 * (2.0 * w * t).sin();
    let shape = co * co + 2.0 * s * s;
    let v1 = Jet::real(
        w / co,
        w * w * s / (co * co),
        w.powi(3) * shape / co.powi(3),
    );
    let v2 = Jet::real(
        n / (2.0 * w * co),
        co + n * s / (2.0 * co * co),
        w * n * shape / (2.0 * co.powi(3)),
    );
    Ok((v1, v2))
}

/// `-cos ω₀t/√(cos²ω₀t - λ)·(v₁ + i v₂)`, the v-mode form of the
/// trigonometric solution.
///
/// With unit-normalized modes and principal roots this equals
/// [`trig_solution`] for `C₁ = -1/ω₀`, `C₂ = -2ω₀` when `λ > 1`, and for
/// `C₁ = 1/ω₀`, `C₂ = 2ω₀` when `λ < 0`. The often quoted constants
/// `C₁ = 1/ω₀`, `C₂ = ω₀/2` do not reproduce it.
pub fn trig_v_connection(p: &FamilyParams, t: f64) -> Result<C64> {
    p.expect_kind(FamilyKind::Trig)?;
    p.check_regular(t)?;
    let (v1, v2) = trig_v_modes(p.rate, t)?;
    let co = (p.rate * t).cos();
    Ok(-co / principal_sqrt(c(co * co - p.lambda)) * (v1 + C64::i() * v2))
}

pub fn hyp_snapshot(p: &FamilyParams, t: f64) -> Result<FamilySnapshot> {
    p.expect_kind(FamilyKind::Hyp)?;
    p.check_regular(t)?;
    let (k, lam) = (p.rate, p.lambda);
    let (s, ch) = ((k * t).sinh(), (k * t).cosh());
    let root = principal_sqrt(c(lam - ch * ch));
    let zeta = lam * (k * t).tanh() / (ch * ch - lam);
    Ok(FamilySnapshot {
        t,
        h: c(-k * (k * t).tanh()),
        alpha: ch / root,
        beta: -k * s / root,
        zeta: c(zeta),
        frequency: c(hyp_frequency(k, lam, t)),
        damping: c(2.0 * zeta * k),
    })
}

/// `k₀²(t) = -k₀²(sinh⁴k₀t + λ - 1)/(cosh²k₀t - λ)²`.
pub fn hyp_frequency(k0: f64, lambda: f64, t: f64) -> f64 {
    let (s, ch) = ((k0 * t).sinh(), (k0 * t).cosh());
    let d = ch * ch - lambda;
    // sinh⁴ and d² both grow like e^{4k₀t}; divide first to stay finite
    let r = s * s / d;
    -k0 * k0 * (r * r + (lambda - 1.0) / (d * d))
}

/// `k₀²(1/(cosh²k₀t - λ) - sinh 2k₀t/(4(cosh²k₀t - λ)²))`, the variant
/// with an unsquared `sinh 2k₀t`. Tends to zero, not to `-k₀²`.
pub fn hyp_frequency_as_printed(k0: f64, lambda: f64, t: f64) -> f64 {
    let d = (k0 * t).cosh().powi(2) - lambda;
    k0 * k0 * (1.0 / d - (2.0 * k0 * t).sinh() / (4.0 * d * d))
}

/// `y(t) = [(C₃ + iC₄π) + C₄(2k₀t + sinh2k₀t)] / (4√(λ - cosh²k₀t))`.
pub fn hyp_solution(p: &FamilyParams, k: &SuperpositionConstants, t: f64) -> Result<C64> {
    hyp_solution_jet(p, k, t).map(|j| j.value)
}

pub fn hyp_solution_jet(p: &FamilyParams, k: &SuperpositionConstants, t: f64) -> Result<Jet> {
    p.expect_kind(FamilyKind::Hyp)?;
    p.check_regular(t)?;
    let w = p.rate;
    let (c3, c4) = (k.c_a, k.c_b);
    let numerator = Jet::new(
        c3 + C64::i() * c4 * PI + c4 * (2.0 * w * t + (2.0 * w * t).sinh()),
        c4 * (2.0 * w + 2.0 * w * (2.0 * w * t).cosh()),
        c4 * (4.0 * w * w * (2.0 * w * t).sinh()),
    );
    Ok((numerator * p.radicand_jet(t).inv_sqrt()).scale(c(0.25)))
}

/// `(u₁, u₂, w₁, w₂)`: modes of `u'' - k₀²(2tanh²k₀t - 1)u = 0` and of its
/// partner `w'' - k₀²w = 0`.
pub fn hyp_u_w_modes(k0: f64, t: f64) -> (C64, C64, C64, C64) {
    let [u1, u2, w1, w2] = hyp_mode_jets(k0, t);
    (u1.value, u2.value, w1.value, w2.value)
}

pub fn hyp_mode_jets(k0: f64, t: f64) -> [Jet; 4] {
    let k = k0;
    let (s, ch) = ((k * t).sinh(), (k * t).cosh());
    let m = k * t / 2.0 + 0.25 * (2.0 * k * t).sinh();
    let shape = 2.0 * s * s - ch * ch;
    [
        Jet::real(
            k / ch,
            -k * k * s / (ch * ch),
            k.powi(3) * shape / ch.powi(3),
        ),
        Jet::real(
            m / (k * ch),
            ch - m * s / (ch * ch),
            k * m * shape / ch.powi(3),
        ),
        Jet::real(ch, k * s, k * k * ch),
        Jet::real(s, k * ch, k * k * s),
    ]
}

/// Snapshot for either kind.
pub fn snapshot(p: &FamilyParams, t: f64) -> Result<FamilySnapshot> {
    match p.kind {
        FamilyKind::Trig => trig_snapshot(p, t),
        FamilyKind::Hyp => hyp_snapshot(p, t),
    }
}

/// General solution for either kind.
pub fn solution_jet(p: &FamilyParams, k: &SuperpositionConstants, t: f64) -> Result<Jet> {
    match p.kind {
        FamilyKind::Trig => trig_solution_jet(p, k, t),
        FamilyKind::Hyp => hyp_solution_jet(p, k, t),
    }
}

/// Zeros of the family denominator on the window, each refined by bisection.
pub fn singularity_scan(p: &FamilyParams, grid: &TimeGrid) -> Vec<f64> {
    let den = |t: f64| p.denominator(t);
    let mut roots: Vec<f64> = Vec::new();
    let mut prev = (grid.t0(), den(grid.t0()));
    if prev.1.abs() < SINGULAR_TOL {
        roots.push(prev.0);
    }
    for t in grid.times().skip(1) {
        let d = den(t);
        if d.abs() < SINGULAR_TOL {
            roots.push(t);
        } else if prev.1 * d < 0.0 && prev.1.abs() >= SINGULAR_TOL {
            roots.push(bisect(den, prev.0, t));
        }
        prev = (t, d);
    }
    roots
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Parameter ranges without singular times on the whole real line:
/// `λ ∉ [0, 1]` (trigonometric) and `λ < 1` (hyperbolic).
pub fn nonsingular_domain(p: &FamilyParams) -> bool {
    match p.kind {
        FamilyKind::Trig => !(0.0..=1.0).contains(&p.lambda),
        FamilyKind::Hyp => p.lambda < 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::{bernoulli_residual, partner_at, riccati_residual};
    use crate::funcs::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn trig(w: f64, lam: f64) -> FamilyParams {
        FamilyParams::trig(w, lam).unwrap()
    }

    fn hyp(k: f64, lam: f64) -> FamilyParams {
        FamilyParams::hyperbolic(k, lam).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    /// Central differences of a value function, for checking hand-derived jets.
    fn fd_jet(f: impl Fn(f64) -> C64, t: f64) -> (C64, C64) {
        let e = 1e-4;
        let d1 = (f(t + e) - f(t - e)) / (2.0 * e);
        let d2 = (f(t + e) - 2.0 * f(t) + f(t - e)) / (e * e);
        (d1, d2)
    }

    #[test]
    fn params_validation() {
        assert!(FamilyParams::trig(0.0, 2.0).is_err());
        assert!(FamilyParams::trig(-1.0, 2.0).is_err());
        assert!(FamilyParams::hyperbolic(1.0, f64::NAN).is_err());
        assert_eq!("hyp".parse::<FamilyKind>().unwrap(), FamilyKind::Hyp);
        assert!("sine".parse::<FamilyKind>().is_err());
        assert!(trig_snapshot(&hyp(1.0, 0.5), 0.0).is_err());
    }

    #[test]
    fn trig_snapshot_at_origin() {
        let s = trig_snapshot(&trig(3.5, 2.0), 0.0).unwrap();
        assert_eq!(s.h, c(0.0));
        assert!(close(s.alpha, c(1.0), 1e-15));
        assert_eq!(s.beta, c(0.0));
        assert_eq!(s.zeta, c(0.0));
        assert!(close(s.frequency, c(12.25), 1e-12));
    }

    #[test]
    fn trig_snapshot_at_quarter_period() {
        let s = trig_snapshot(&trig(1.0, 2.0), FRAC_PI_4).unwrap();
        assert!(close(s.zeta, c(4.0 / 3.0), 1e-12));
        assert!(close(s.frequency, c(1.0 / 1.5 - 1.0 / 9.0), 1e-12));
        assert!((s.frequency.re - 0.555556).abs() < 1e-6);
        assert!(close(s.damping, 2.0 * s.zeta, 1e-15));
        assert!(close(s.beta, s.h * s.alpha, 1e-14));
    }

    #[test]
    fn trig_snapshot_rejects_singular_time() {
        assert_eq!(
            trig_snapshot(&trig(1.0, 1.0), 0.0),
            Err(Error::SingularTime { t: 0.0 })
        );
    }

    #[test]
    fn trig_solution_values() {
        let k = SuperpositionConstants::new(C64::new(0.3, -1.0), C64::new(2.5, 0.5));
        let y = trig_solution(&trig(1.7, 2.0), &k, 0.0).unwrap();
        assert!(close(y, -C64::i() * k.c_b / 2.0, 1e-15));

        let y = trig_solution(
            &trig(3.5, 2.0),
            &SuperpositionConstants::real(2.0 / 7.0, 7.0 / 4.0),
            0.0,
        )
        .unwrap();
        assert!(close(y, C64::new(0.0, -0.875), 1e-15));
    }

    #[test]
    fn trig_solution_jet_matches_finite_differences() {
        let p = trig(3.5, 2.0);
        let k = SuperpositionConstants::real(2.0 / 7.0, 7.0 / 4.0);
        for t in [0.1, 0.45, 1.3] {
            let j = trig_solution_jet(&p, &k, t).unwrap();
            let (d1, d2) = fd_jet(|s| trig_solution(&p, &k, s).unwrap(), t);
            assert!(close(j.d1, d1, 1e-6), "{t}");
            assert!(close(j.d2, d2, 1e-5), "{t}");
        }
    }

    #[test]
    fn v_connection_with_derived_constants() {
        for (w, lam) in [(3.5, 2.0), (1.0, -0.5), (2.0, 3.0), (0.6, -2.0)] {
            let p = trig(w, lam);
            // the sign flips with the branch of √(cos² - λ)
            let sign = if lam > 1.0 { -1.0 } else { 1.0 };
            let k = SuperpositionConstants::real(sign / w, sign * 2.0 * w);
            for t in [0.05, 0.3, 0.7, 1.9] {
                if (w * t).cos().abs() < 1e-3 {
                    continue;
                }
                let y = trig_solution(&p, &k, t).unwrap();
                let v = trig_v_connection(&p, t).unwrap();
                assert!(close(y, v, 1e-10), "w={w} λ={lam} t={t}: {y} vs {v}");
            }
        }
    }

    #[test]
    fn v_connection_with_quoted_constants_disagrees() {
        let p = trig(3.5, 2.0);
        let k = SuperpositionConstants::real(1.0 / 3.5, 3.5 / 2.0);
        let y = trig_solution(&p, &k, 0.3).unwrap();
        let v = trig_v_connection(&p, 0.3).unwrap();
        assert!((y - v).norm() > 0.1);
    }

    #[test]
    fn v_modes_values_and_wronskian() {
        let (v1, v2) = trig_v_modes(2.3, 0.0).unwrap();
        assert_eq!((v1, v2), (c(2.3), c(0.0)));
        let (v1, _) = trig_v_modes(1.0, 1.0).unwrap();
        assert!((v1.re - 1.850816).abs() < 1e-6);
        for t in [0.0, 0.3, 0.7, 2.0] {
            let (a, b) = trig_v_mode_jets(2.0, t).unwrap();
            let w = a.value * b.d1 - a.d1 * b.value;
            assert!(close(
                w,
                c(2.0),
                1e-10 * (1.0 + a.value.norm() * b.value.norm())
            ));
        }
        assert!(matches!(
            trig_v_modes(1.0, FRAC_PI_2),
            Err(Error::SingularTime { .. })
        ));
    }

    #[test]
    fn mode_jets_solve_their_equations() {
        let w = 1.6;
        for t in [0.2, 0.6, 1.1] {
            let (a, b) = trig_v_mode_jets(w, t).unwrap();
            let coef = w * w * (2.0 * (w * t).tan().powi(2) + 1.0);
            for (m, idx) in [(a, 0), (b, 1)] {
                assert!(close(m.d2, coef * m.value, 1e-9 * m.d2.norm()));
                let (d1, d2) = fd_jet(
                    |s| {
                        let (x, y) = trig_v_modes(w, s).unwrap();
                        if idx == 0 {
                            x
                        } else {
                            y
                        }
                    },
                    t,
                );
                assert!(close(m.d1, d1, 1e-6 * (1.0 + d1.norm())));
                assert!(close(m.d2, d2, 1e-4 * (1.0 + d2.norm())));
            }
        }
        let k = 1.3;
        for t in [-1.0, 0.0, 0.8, 2.5] {
            let [u1, u2, w1, w2] = hyp_mode_jets(k, t);
            let coef = k * k * (2.0 * (k * t).tanh().powi(2) - 1.0);
            for u in [u1, u2] {
                assert!(close(u.d2, coef * u.value, 1e-9 * (1.0 + u.d2.norm())));
            }
            for m in [w1, w2] {
                assert!(close(m.d2, k * k * m.value, 1e-12 * (1.0 + m.d2.norm())));
            }
            let (d1, _) = fd_jet(|s| hyp_u_w_modes(k, s).1, t);
            assert!(close(u2.d1, d1, 1e-7));
        }
    }

    #[test]
    fn u_w_modes_at_origin_and_wronskians() {
        assert_eq!(hyp_u_w_modes(1.4, 0.0), (c(1.4), c(0.0), c(1.0), c(0.0)));
        for k in [0.5, 1.0, 2.0] {
            for t in [-2.0, 0.0, 1.7, 4.0] {
                let [u1, u2, w1, w2] = hyp_mode_jets(k, t);
                let wu = u1.value * u2.d1 - u1.d1 * u2.value;
                let ww = w1.value * w2.d1 - w1.d1 * w2.value;
                assert!(close(
                    wu,
                    c(k),
                    1e-10 * k.max(1.0) * (1.0 + u2.value.norm())
                ));
                assert!(close(ww, c(k), 1e-12 * w1.value.norm().powi(2)));
            }
        }
    }

    #[test]
    fn hyp_snapshot_values() {
        let p = hyp(1.0, 0.5);
        let s = hyp_snapshot(&p, 0.0).unwrap();
        assert_eq!(s.h, c(0.0));
        assert_eq!(s.beta, c(0.0));
        assert_eq!(s.zeta, c(0.0));
        assert!(close(s.alpha, C64::new(0.0, -2f64.sqrt()), 1e-15));
        assert!(close(s.frequency, c(2.0), 1e-15));

        let s = hyp_snapshot(&p, 1.0).unwrap();
        let expect = 0.5 * 1f64.tanh() / (1f64.cosh().powi(2) - 0.5);
        assert!(close(s.zeta, c(expect), 1e-15));
        assert!((s.zeta.re - 0.2024334).abs() < 1e-7);

        let s = hyp_snapshot(&p, 10.0).unwrap();
        assert!(s.zeta.norm() < 1e-6);
        assert!((s.frequency + 1.0).norm() < 1e-6);
    }

    #[test]
    fn hyp_frequency_limits() {
        for (k, lam) in [(1.0, 0.5), (2.0, 0.9), (0.7, -3.0)] {
            let t = 15.0 / k;
            assert!((hyp_frequency(k, lam, t) + k * k).abs() < 1e-9);
            assert!(hyp_frequency_as_printed(k, lam, t).abs() < 1e-9);
            let (a, b) = (
                hyp_frequency(k, lam, 0.0),
                hyp_frequency_as_printed(k, lam, 0.0),
            );
            assert!((a - b).abs() < 1e-12 * a.abs());
            assert!(hyp_frequency(k, lam, 300.0 / k).is_finite());
        }
    }

    #[test]
    fn hyp_solution_values() {
        let p = hyp(1.0, 0.5);
        let k = SuperpositionConstants::real(2.0, -1.0);
        let y = hyp_solution(&p, &k, 0.0).unwrap();
        let expect = C64::new(-2f64.sqrt() * PI / 4.0, -2f64.sqrt() / 2.0);
        assert!(close(y, expect, 1e-14));
        assert!(
            (y.re + 1.110721).abs() < 1e-6 && (y.im + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6
        );

        let k = SuperpositionConstants::real(1.5, 0.0);
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let m = hyp_solution(&p, &k, i as f64 * 0.1).unwrap().norm();
            assert!(m < last);
            last = m;
        }
    }

    #[test]
    fn hyp_solution_jet_matches_finite_differences() {
        let p = hyp(1.0, 0.5);
        let k = SuperpositionConstants::real(2.0, -1.0);
        for t in [0.0, 0.9, 2.0] {
            let j = hyp_solution_jet(&p, &k, t).unwrap();
            let (d1, d2) = fd_jet(|s| hyp_solution(&p, &k, s).unwrap(), t);
            assert!(close(j.d1, d1, 1e-6));
            assert!(close(j.d2, d2, 1e-5));
        }
    }

    #[test]
    fn scan_finds_quarter_period_root() {
        let roots = singularity_scan(&trig(1.0, 0.5), &make_grid(0.0, 2.0, 2001).unwrap());
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn scan_is_empty_in_nonsingular_domain() {
        assert!(singularity_scan(&trig(3.5, 2.0), &make_grid(0.0, 10.0, 2001).unwrap()).is_empty());
        assert!(
            singularity_scan(&hyp(1.0, 0.5), &make_grid(-10.0, 10.0, 2001).unwrap()).is_empty()
        );
    }

    #[test]
    fn scan_hyperbolic_above_one() {
        let roots = singularity_scan(&hyp(1.0, 2.0), &make_grid(-3.0, 3.0, 601).unwrap());
        let r = 2f64.sqrt().acosh();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + r).abs() < 1e-9 && (roots[1] - r).abs() < 1e-9);
    }

    #[test]
    fn scan_catches_touching_zero() {
        // λ = 1: λ - cos² = sin² touches zero at t = 0 without a sign change
        let roots = singularity_scan(&trig(1.0, 1.0), &make_grid(0.0, 1.0, 11).unwrap());
        assert_eq!(roots, vec![0.0]);
    }

    #[test]
    fn nonsingular_domain_cases() {
        assert!(nonsingular_domain(&trig(1.0, 2.0)));
        assert!(!nonsingular_domain(&trig(1.0, 0.5)));
        assert!(nonsingular_domain(&trig(1.0, -0.1)));
        assert!(!nonsingular_domain(&trig(1.0, 0.0)));
        assert!(nonsingular_domain(&hyp(1.0, 0.5)));
        assert!(!nonsingular_domain(&hyp(1.0, 1.0)));
    }

    #[test]
    fn damping_poles_of_trig_family() {
        let p = trig(3.5, 2.0);
        let poles = p.damping_poles(0.0, 2.0);
        assert_eq!(poles.len(), 2);
        assert!((poles[0] - PI / 7.0).abs() < 1e-15);
        assert!(p.damping_poles(-0.4, 0.4).is_empty());
        assert_eq!(p.damping_poles(-0.5, 0.0).len(), 1);
        assert!(hyp(1.0, 0.5).damping_poles(-5.0, 5.0).is_empty());
    }

    #[test]
    fn numeric_lambda_mapping() {
        assert_eq!(trig(3.5, 2.0).numeric_lambda(0.0), 1.0);
        assert_eq!(hyp(1.0, 0.5).numeric_lambda(0.0), -0.5);
        let p = trig(1.0, 3.0);
        assert!((p.numeric_lambda(PI / 3.0) - 11.0).abs() < 1e-12);
    }

    #[test]
    fn seeds_and_closed_factors_are_consistent() {
        for p in [
            trig(3.5, 2.0),
            hyp(1.0, 0.5),
            trig(0.8, -1.5),
            hyp(2.0, 0.9),
        ] {
            let (seed, cf) = (p.seed(), p.coefficients());
            for t in [0.0, 0.1, 0.33] {
                assert!(riccati_residual(&seed, &cf, t).unwrap().norm() < 1e-12);
                let pt = p.factor_point(t).unwrap();
                assert!(close(pt.beta, seed.h(t) * pt.alpha, 1e-13));
                assert!(bernoulli_residual(&pt, seed.h(t), c(0.0)).norm() < 1e-12);
                let snap = snapshot(&p, t).unwrap();
                assert!(close(pt.alpha, snap.alpha, 1e-14));
                let (ff, gg) = partner_at(&pt, c(0.0), cf.g(t)).unwrap();
                assert!(close(ff, snap.damping, 1e-8), "{p:?} t={t}");
                assert!(
                    close(gg, snap.frequency, 1e-8 * (1.0 + gg.norm())),
                    "{p:?} t={t}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn trig_frequency_forms_agree(w in 0.1..6.0f64, lam in prop_oneof![1.05..8.0f64, -8.0..-0.05f64], t in -5.0..5.0f64) {
            let a = trig_frequency(w, lam, t);
            let b = trig_frequency_reduced(w, lam, t);
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }

        #[test]
        fn trig_imaginary_part_is_periodic(w in 0.5..5.0f64, lam in 1.1..5.0f64, t in -3.0..3.0f64, c1 in -2.0..2.0f64, c2 in -2.0..2.0f64) {
            let p = trig(w, lam);
            let k = SuperpositionConstants::real(c1, c2);
            let a = trig_solution(&p, &k, t).unwrap().im;
            let b = trig_solution(&p, &k, t + PI / w).unwrap().im;
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn closed_partner_damping_is_twice_zeta_rate(w in 0.3..4.0f64, lam in 1.2..6.0f64, t in 0.0..3.0f64, hyperbolic in any::<bool>()) {
            let p = if hyperbolic { hyp(w, 1.0 - lam) } else { trig(w, lam) };
            prop_assume!((w * t).cos().abs() > 0.05);
            let pt = p.factor_point(t).unwrap();
            let (ff, _) = partner_at(&pt, c(0.0), p.coefficients().g(t)).unwrap();
            let snap = snapshot(&p, t).unwrap();
            prop_assert!((ff - 2.0 * snap.zeta * w).norm() < 1e-8 * (1.0 + ff.norm()));
        }
    }
}
