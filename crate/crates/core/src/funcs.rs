//! Uniform time grids and the two numerical oracles used everywhere else:
//! cumulative composite Simpson quadrature and second-order central
//! differences.

use crate::{Error, Result, C64};

/// Uniform sampling of the closed interval `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    n: usize,
    step: f64,
}

impl TimeGrid {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// The k-th sample, `t0 + k·step`; the last one is `t1` exactly.
    pub fn time(&self, k: usize) -> f64 {
        debug_assert!(k < self.n);
        if k + 1 == self.n {
            self.t1
        } else {
            self.t0 + k as f64 * self.step
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }

    /// Same window with `2(n-1)+1` samples, i.e. half the step.
    pub fn refined(&self) -> TimeGrid {
        make_grid(self.t0, self.t1, 2 * (self.n - 1) + 1).expect("refinement of a valid grid")
    }

    /// Index of the sample closest to `t`, if `t` lies within the window.
    pub fn nearest_index(&self, t: f64) -> Option<usize> {
        if t < self.t0 - 0.5 * self.step || t > self.t1 + 0.5 * self.step {
            return None;
        }
        let k = ((t - self.t0) / self.step).round() as usize;
        Some(k.min(self.n - 1))
    }
}

/// Builds the uniform grid with `n` samples on `[t0, t1]`.
pub fn make_grid(t0: f64, t1: f64, n: usize) -> Result<TimeGrid> {
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "non-finite bounds [{t0}, {t1}]"
        )));
    }
    if t1 <= t0 {
        return Err(Error::InvalidGrid(format!(
            "t1 = {t1} must exceed t0 = {t0}"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 samples, got {n}"
        )));
    }
    Ok(TimeGrid {
        t0,
        t1,
        n,
        step: (t1 - t0) / (n - 1) as f64,
    })
}

/// Complex samples of a scalar function of time on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: TimeGrid,
    values: Vec<C64>,
}

impl SampledField {
    pub fn new(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(SampledField { grid, values })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.times().map(f).collect();
        SampledField { grid, values }
    }

    pub fn from_real_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| C64::new(f(t), 0.0))
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.grid.times().zip(self.values.iter().copied())
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> SampledField {
        let values = self.iter().map(|(t, v)| f(t, v)).collect();
        SampledField {
            grid: self.grid,
            values,
        }
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(
        &self,
        other: &SampledField,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<SampledField> {
        if other.grid != self.grid {
            return Err(Error::InvalidArgument(
                "fields live on different grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(SampledField {
            grid: self.grid,
            values,
        })
    }

    /// First sample time whose value is not finite.
    pub fn first_non_finite(&self) -> Option<f64> {
        self.iter().find(|(_, v)| !v.is_finite()).map(|(t, _)| t)
    }

    /// Max-norm distance to another field on the same grid.
    pub fn max_abs_diff(&self, other: &SampledField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff_fn(&self, f: impl Fn(f64) -> C64) -> f64 {
        self.iter()
            .map(|(t, v)| (v - f(t)).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for SampledField {
    type Output = C64;

    fn index(&self, k: usize) -> &C64 {
        &self.values[k]
    }
}

/// Running integral `Φ(t_k) = ∫_{t0}^{t_k} f` with `Φ(t0) = 0`.
///
/// Even indices are composite Simpson sums. An odd index closes with the
/// single-panel rule from the quadratic through three neighbouring samples,
/// so every entry is O(step⁴).
pub fn cumulative_integral(f: &SampledField) -> SampledField {
    let h = f.grid.step();
    let y = &f.values;
    let n = y.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for k in 1..n {
        out[k] = if k % 2 == 0 {
            out[k - 2] + (y[k - 2] + 4.0 * y[k - 1] + y[k]) * (h / 3.0)
        } else if k + 1 < n {
            out[k - 1] + (5.0 * y[k - 1] + 8.0 * y[k] - y[k + 1]) * (h / 12.0)
        } else {
            out[k - 1] + (-y[k - 2] + 8.0 * y[k - 1] + 5.0 * y[k]) * (h / 12.0)
        };
    }
    SampledField {
        grid: f.grid,
        values: out,
    }
}

/// Second-order central differences, one-sided second-order stencils at the
/// two endpoints. Exact on quadratics.
pub fn central_derivative(f: &SampledField) -> SampledField {
    let h = f.grid.step();
    let y = &f.values;
    let n = y.len();
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h));
    for k in 1..n - 1 {
        out.push((y[k + 1] - y[k - 1]) / (2.0 * h));
    }
    out.push((3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h));
    SampledField {
        grid: f.grid,
        values: out,
    }
}

/// Value together with its first two derivatives at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

impl Jet {
    pub fn new(value: C64, d1: C64, d2: C64) -> Self {
        Jet { value, d1, d2 }
    }

    pub fn real(value: f64, d1: f64, d2: f64) -> Self {
        Jet::new(c(value), c(d1), c(d2))
    }

    pub fn scale(self, k: C64) -> Jet {
        Jet::new(k * self.value, k * self.d1, k * self.d2)
    }

    /// `u^{-1/2}` on the principal branch, from the jet of `u`.
    pub fn inv_sqrt(self) -> Jet {
        let q = principal_sqrt(self.value).inv();
        let u = self.value;
        let d1 = -0.5 * self.d1 * q / u;
        let d2 = 0.75 * self.d1 * self.d1 * q / (u * u) - 0.5 * self.d2 * q / u;
        Jet::new(q, d1, d2)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;

    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;

    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

/// Principal square root with `√(negative real) = +i√|x|`.
///
/// `num_complex` follows the sign of a zero imaginary part, so `-x - 0i`
/// would land on the lower half-plane; the zero is normalized first.
pub fn principal_sqrt(z: C64) -> C64 {
    C64::new(z.re, z.im + 0.0).sqrt()
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
