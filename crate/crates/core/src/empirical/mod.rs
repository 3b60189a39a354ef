//! Plug-in estimation through the empirical CDF and exact sampling moments
//! for populations whose spacings have known laws.

mod dataset;

pub use dataset::{load_dataset, parse_sample, write_sample, Reading, BLOOD_CANCER_TAG};

use crate::error::{Error, Result};
use crate::measures::{FractionalOrder, Weight, WeightTag};
use crate::quadrature::ln_gamma_pos;

/// Observations with provenance.
///
/// Constructed samples are sorted ascending. [`EmpiricalSample::as_listed`]
/// keeps the given order instead, which is how a listing with a transcription
/// error can be reproduced verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    source: String,
    sorted: bool,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        validate(&values)?;
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalSample {
            values,
            source: source.into(),
            sorted: true,
        })
    }

    /// Keeps the listed order; spacings may then be negative.
    pub fn as_listed(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        validate(&values)?;
        let sorted = values.windows(2).all(|w| w[0] <= w[1]);
        Ok(EmpiricalSample {
            values,
            source: source.into(),
            sorted,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `c · T`, keeping order and provenance.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(format!("scale must be > 0, got {c}")));
        }
        Ok(EmpiricalSample {
            values: self.values.iter().map(|v| v * c).collect(),
            source: format!("{} scaled by {c}", self.source),
            sorted: self.sorted,
        })
    }
}

fn validate(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::Validation(format!(
            "sample needs at least 2 observations, got {}",
            values.len()
        )));
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(Error::Validation(format!(
            "observation {} is {v}; values must be finite and nonnegative",
            i + 1
        )));
    }
    Ok(())
}

/// Step CDF: the fraction of observations `≤ x`.
pub fn empirical_cdf(sample: &EmpiricalSample, x: f64) -> f64 {
    let count = if sample.sorted {
        sample.values.partition_point(|&v| v <= x)
    } else {
        sample.values.iter().filter(|&&v| v <= x).count()
    };
    count as f64 / sample.n() as f64
}

/// `Z_l = Ψ(T_{l+1}) - Ψ(T_l)` in sample order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSummary {
    pub z: Vec<f64>,
    pub weight_tag: WeightTag,
}

pub fn spacings(sample: &EmpiricalSample, weight: &Weight) -> Result<SpacingSummary> {
    let big: Vec<f64> = sample
        .values
        .iter()
        .map(|&t| weight.antiderivative(t))
        .collect::<Result<_>>()?;
    Ok(SpacingSummary {
        z: big.windows(2).map(|w| w[1] - w[0]).collect(),
        weight_tag: weight.tag(),
    })
}

/// `a_l = (l/n)(-ln(l/n))^γ / Γ(γ+1)` for `l = 1..n-1`.
pub fn spacing_coefficients(n: usize, gamma: f64) -> Vec<f64> {
    let lg = ln_gamma_pos(gamma + 1.0);
    (1..n)
        .map(|l| {
            let p = l as f64 / n as f64;
            (p.ln() + gamma * (-p.ln()).ln() - lg).exp()
        })
        .collect()
}

/// The plug-in estimator `1/Γ(γ+1) Σ Z_l (l/n)(-ln(l/n))^γ`.
pub fn empirical_wfgcpe(
    sample: &EmpiricalSample,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<f64> {
    let z = spacings(sample, weight)?.z;
    Ok(weighted_sum(
        &z,
        &spacing_coefficients(sample.n(), gamma.get()),
    ))
}

fn weighted_sum(z: &[f64], a: &[f64]) -> f64 {
    z.iter().zip(a).map(|(z, a)| z * a).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// How the joint law of the spacings enters the variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpacingCovariance {
    /// Spacings treated as independent; the published formulas.
    #[default]
    Independent,
    /// Uniform spacings are exchangeable with covariance
    /// `-1/((n+1)²(n+2))`, which this variant accounts for.
    Exact,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("sample size must be >= 2, got {n}")));
    }
    Ok(())
}

/// Moments of `Σ a_l D_l` for uniform spacings `D_l`.
fn uniform_spacing_moments(a: &[f64], n: usize, cov: SpacingCovariance) -> Moments {
    let nf = n as f64;
    let s1: f64 = a.iter().sum();
    let s2: f64 = a.iter().map(|x| x * x).sum();
    let denom = (nf + 1.0) * (nf + 1.0) * (nf + 2.0);
    let variance = match cov {
        SpacingCovariance::Independent => nf * s2 / denom,
        SpacingCovariance::Exact => ((nf + 1.0) * s2 - s1 * s1) / denom,
    };
    Moments {
        mean: s1 / (nf + 1.0),
        variance,
    }
}

/// Population `K(x) = x²` on `(0, 1)` with `ψ = x`, published formulas.
pub fn exact_moments_power_square(n: usize, gamma: FractionalOrder) -> Result<Moments> {
    exact_moments_power_square_with(n, gamma, SpacingCovariance::Independent)
}

pub fn exact_moments_power_square_with(
    n: usize,
    gamma: FractionalOrder,
    cov: SpacingCovariance,
) -> Result<Moments> {
    check_n(n)?;
    // Z_l = D_l / 2
    let m = uniform_spacing_moments(&spacing_coefficients(n, gamma.get()), n, cov);
    Ok(Moments {
        mean: m.mean / 2.0,
        variance: m.variance / 4.0,
    })
}

/// Population `K(x) = 1 - exp(-θx²)` with `ψ = x`; its spacings are
/// independent exponentials, so these moments are exact.
pub fn exact_moments_weibull(n: usize, gamma: FractionalOrder, theta: f64) -> Result<Moments> {
    check_n(n)?;
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::domain(format!("theta must be > 0, got {theta}")));
    }
    let a = spacing_coefficients(n, gamma.get());
    let mut mean = 0.0;
    let mut variance = 0.0;
    for (i, al) in a.iter().enumerate() {
        let scale = 1.0 / (2.0 * theta * (n - (i + 1)) as f64);
        mean += scale * al;
        variance += scale * scale * al * al;
    }
    Ok(Moments { mean, variance })
}

/// Any population with `ψ = k`, published formulas.
pub fn exact_moments_self_weight(n: usize, gamma: FractionalOrder) -> Result<Moments> {
    exact_moments_self_weight_with(n, gamma, SpacingCovariance::Independent)
}

pub fn exact_moments_self_weight_with(
    n: usize,
    gamma: FractionalOrder,
    cov: SpacingCovariance,
) -> Result<Moments> {
    check_n(n)?;
    Ok(uniform_spacing_moments(
        &spacing_coefficients(n, gamma.get()),
        n,
        cov,
    ))
}
