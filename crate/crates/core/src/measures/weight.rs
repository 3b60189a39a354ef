use std::fmt;
use std::sync::Arc;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::quadrature::quad;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    Neither,
}

impl Monotonicity {
    /// Constant counts as both.
    pub fn is_increasing(self) -> bool {
        matches!(self, Monotonicity::Increasing | Monotonicity::Constant)
    }

    pub fn is_decreasing(self) -> bool {
        matches!(self, Monotonicity::Decreasing | Monotonicity::Constant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightTag {
    One,
    X,
    XSquared,
    SqrtX,
    ExpNeg,
    Power,
    SelfDensity,
    PiecewiseLinear,
    Custom,
}

impl WeightTag {
    pub fn name(self) -> &'static str {
        match self {
            WeightTag::One => "one",
            WeightTag::X => "x",
            WeightTag::XSquared => "x2",
            WeightTag::SqrtX => "sqrtx",
            WeightTag::ExpNeg => "expneg",
            WeightTag::Power => "power",
            WeightTag::SelfDensity => "density",
            WeightTag::PiecewiseLinear => "piecewise",
            WeightTag::Custom => "custom",
        }
    }
}

/// A nonnegative weight ψ.
#[derive(Clone)]
pub enum Weight {
    One,
    X,
    XSquared,
    SqrtX,
    /// `e^{-x}`
    ExpNeg,
    /// `x^p`
    Power(f64),
    /// The density of the given population, `ψ = k`.
    SelfDensity(Box<Distribution>),
    PiecewiseLinear(PiecewiseLinear),
    Custom(CustomWeight),
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Power(p) => write!(f, "Power({p})"),
            Weight::Custom(c) => write!(f, "Custom({})", c.label),
            Weight::PiecewiseLinear(p) => write!(f, "PiecewiseLinear({} knots)", p.xs.len()),
            other => write!(f, "{:?}", other.tag()),
        }
    }
}

impl Weight {
    pub fn tag(&self) -> WeightTag {
        match self {
            Weight::One => WeightTag::One,
            Weight::X => WeightTag::X,
            Weight::XSquared => WeightTag::XSquared,
            Weight::SqrtX => WeightTag::SqrtX,
            Weight::ExpNeg => WeightTag::ExpNeg,
            Weight::Power(_) => WeightTag::Power,
            Weight::SelfDensity(_) => WeightTag::SelfDensity,
            Weight::PiecewiseLinear(_) => WeightTag::PiecewiseLinear,
            Weight::Custom(_) => WeightTag::Custom,
        }
    }

    pub fn self_density(population: &Distribution) -> Weight {
        Weight::SelfDensity(Box::new(population.clone()))
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Weight::One => 1.0,
            Weight::X => x,
            Weight::XSquared => x * x,
            Weight::SqrtX => x.sqrt(),
            Weight::ExpNeg => (-x).exp(),
            Weight::Power(p) => {
                if *p == 0.0 {
                    1.0
                } else {
                    x.powf(*p)
                }
            }
            Weight::SelfDensity(d) => d.pdf(x),
            Weight::PiecewiseLinear(p) => p.value(x),
            Weight::Custom(c) => (c.psi)(x),
        }
    }

    /// `ln ψ(x)`, exact for the builtin shapes.
    pub fn ln_value(&self, x: f64) -> f64 {
        match self {
            Weight::One => 0.0,
            Weight::X => x.ln(),
            Weight::XSquared => 2.0 * x.ln(),
            Weight::SqrtX => 0.5 * x.ln(),
            Weight::ExpNeg => -x,
            Weight::Power(p) if *p == 0.0 => 0.0,
            Weight::Power(p) => p * x.ln(),
            Weight::SelfDensity(d) => d.ln_pdf(x),
            _ => self.value(x).ln(),
        }
    }

    /// `Ψ(x) = ∫₀ˣ ψ`.
    ///
    /// Builtin shapes are exact. A custom weight without a supplied
    /// antiderivative is accumulated by quadrature.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Weight::One => x,
            Weight::X => 0.5 * x * x,
            Weight::XSquared => x * x * x / 3.0,
            Weight::SqrtX => 2.0 / 3.0 * x * x.sqrt(),
            Weight::ExpNeg => -(-x).exp_m1(),
            Weight::Power(p) => {
                if *p <= -1.0 {
                    return Err(Error::WeightAntiderivativeUnavailable(format!(
                        "x^{p} is not integrable at 0"
                    )));
                }
                x.powf(p + 1.0) / (p + 1.0)
            }
            Weight::SelfDensity(d) => d.cdf(x),
            Weight::PiecewiseLinear(p) => p.antiderivative(x),
            Weight::Custom(c) => match &c.antiderivative {
                Some(big) => big(x),
                None => {
                    if x <= 0.0 {
                        return Ok(0.0);
                    }
                    let psi = c.psi.clone();
                    quad(move |t| psi(t), 0.0, x, &[])
                        .map_err(|e| Error::WeightAntiderivativeUnavailable(e.to_string()))?
                        .value
                }
            },
        })
    }

    /// `ψ'(x)`, analytic when known, else a finite difference with step
    /// `max(1e-6, 1e-6·x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Weight::One => 0.0,
            Weight::X => 1.0,
            Weight::XSquared => 2.0 * x,
            Weight::SqrtX => 0.5 / x.sqrt(),
            Weight::ExpNeg => -(-x).exp(),
            Weight::Power(p) if *p == 0.0 => 0.0,
            Weight::Power(p) => p * x.powf(p - 1.0),
            Weight::PiecewiseLinear(p) => p.slope(x),
            Weight::Custom(CustomWeight {
                derivative: Some(d),
                ..
            }) => d(x),
            _ => finite_difference(|t| self.value(t), x),
        }
    }

    pub fn monotonicity(&self) -> Monotonicity {
        match self {
            Weight::One => Monotonicity::Constant,
            Weight::X | Weight::XSquared | Weight::SqrtX => Monotonicity::Increasing,
            Weight::ExpNeg => Monotonicity::Decreasing,
            Weight::Power(p) => {
                if *p > 0.0 {
                    Monotonicity::Increasing
                } else if *p < 0.0 {
                    Monotonicity::Decreasing
                } else {
                    Monotonicity::Constant
                }
            }
            Weight::SelfDensity(_) => Monotonicity::Neither,
            Weight::PiecewiseLinear(p) => p.monotonicity(),
            Weight::Custom(c) => c.monotonicity,
        }
    }

    /// Checks `(Ψ(x+h) - Ψ(x-h)) / 2h ≈ ψ(x)` on `probes` interior points of
    /// `(lo, hi)`, relative tolerance 1e-6.
    pub fn check_antiderivative(&self, lo: f64, hi: f64, probes: usize) -> Result<()> {
        for i in 1..=probes {
            let x = lo + (hi - lo) * i as f64 / (probes + 1) as f64;
            let h = (1e-5 * x).max(1e-5);
            let lo_pt = (x - h).max(0.0);
            let fd = (self.antiderivative(x + h)? - self.antiderivative(lo_pt)?) / (x + h - lo_pt);
            let want = self.value(x);
            if (fd - want).abs() > 1e-6 * want.abs().max(1.0) {
                return Err(Error::Validation(format!(
                    "antiderivative slope {fd} differs from weight {want} at x = {x}"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn finite_difference(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = (1e-6 * x.abs()).max(1e-6);
    if x - h < 0.0 {
        (f(x + h) - f(x)) / h
    } else {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }
}

/// User weight with optional analytic antiderivative and derivative.
#[derive(Clone)]
pub struct CustomWeight {
    pub label: String,
    psi: RealFn,
    antiderivative: Option<RealFn>,
    derivative: Option<RealFn>,
    monotonicity: Monotonicity,
}

impl CustomWeight {
    pub fn new(
        label: impl Into<String>,
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        monotonicity: Monotonicity,
    ) -> Self {
        CustomWeight {
            label: label.into(),
            psi: Arc::new(psi),
            antiderivative: None,
            derivative: None,
            monotonicity,
        }
    }

    pub fn with_antiderivative(mut self, big: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.antiderivative = Some(Arc::new(big));
        self
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }
}

/// Linear interpolation through knots, constant beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Ψ at each knot.
    cumulative: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(Error::Validation(
                "piecewise-linear weight needs matching, nonempty knot lists".into(),
            ));
        }
        if xs[0] < 0.0 || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation(
                "knots must be nonnegative and strictly increasing".into(),
            ));
        }
        if ys.iter().any(|y| !(y.is_finite() && *y >= 0.0)) || xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let mut cumulative = Vec::with_capacity(xs.len());
        // constant extension on [0, x₀]
        let mut acc = ys[0] * xs[0];
        cumulative.push(acc);
        for i in 1..xs.len() {
            acc += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
            cumulative.push(acc);
        }
        Ok(PiecewiseLinear { xs, ys, cumulative })
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    fn segment(&self, x: f64) -> Option<usize> {
        let n = self.xs.len();
        if n < 2 || x < self.xs[0] || x >= self.xs[n - 1] {
            return None;
        }
        Some(self.xs.partition_point(|&k| k <= x) - 1)
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.xs.len();
        match self.segment(x) {
            Some(i) => {
                let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
                self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
            }
            None if x < self.xs[0] => self.ys[0],
            None => self.ys[n - 1],
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        match self.segment(x) {
            Some(i) => (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]),
            None => 0.0,
        }
    }

    pub fn antiderivative(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] * x.max(0.0);
        }
        match self.segment(x) {
            Some(i) => {
                let v = self.value(x);
                self.cumulative[i] + 0.5 * (self.ys[i] + v) * (x - self.xs[i])
            }
            None => self.cumulative[n - 1] + self.ys[n - 1] * (x - self.xs[n - 1]),
        }
    }

    fn monotonicity(&self) -> Monotonicity {
        let up = self.ys.windows(2).all(|w| w[1] >= w[0]);
        let down = self.ys.windows(2).all(|w| w[1] <= w[0]);
        match (up, down) {
            (true, true) => Monotonicity::Constant,
            (true, false) => Monotonicity::Increasing,
            (false, true) => Monotonicity::Decreasing,
            _ => Monotonicity::Neither,
        }
    }
}
