use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

use crate::distributions::Distribution;
use crate::empirical::{spacing_coefficients, Moments};
use crate::error::{Error, Result};
use crate::measures::{wfgcpe, FractionalOrder, Weight};
use crate::parallel::{map_indices, Execution};

/// Sample size from which the normality verdict is given.
const CLT_MIN_N: usize = 200;
const KS_CRITICAL: f64 = 1.36;
const KS_SAFETY: f64 = 1.5;

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub replicates: usize,
    pub n: usize,
    pub seed: u64,
    pub population: Distribution,
    pub weight: Weight,
    pub gamma: FractionalOrder,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::domain("replicates must be >= 1"));
        }
        if self.n < 2 {
            return Err(Error::domain(format!(
                "sample size must be >= 2, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    /// Estimator value per replicate, in replicate order.
    pub values: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance; `None` for a single replicate.
    pub variance: Option<f64>,
    /// Standard error of `mean`.
    pub standard_error: Option<f64>,
}

impl SimulationSummary {
    fn from_values(values: Vec<f64>) -> Self {
        let r = values.len() as f64;
        let mean = values.iter().sum::<f64>() / r;
        let variance = (values.len() > 1)
            .then(|| values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0));
        SimulationSummary {
            mean,
            variance,
            standard_error: variance.map(|v| (v / r).sqrt()),
            values,
        }
    }

    /// Standard error of `variance`, from the sample fourth central moment.
    pub fn variance_standard_error(&self) -> Option<f64> {
        let var = self.variance?;
        let r = self.values.len() as f64;
        let m4 = self
            .values
            .iter()
            .map(|v| (v - self.mean).powi(4))
            .sum::<f64>()
            / r;
        Some(
            ((m4 - var * var * (r - 3.0) / (r - 1.0)) / r)
                .max(0.0)
                .sqrt(),
        )
    }

    /// `(values - mean) / sd`.
    pub fn standardized(&self, mean: f64, sd: f64) -> Vec<f64> {
        self.values.iter().map(|v| (v - mean) / sd).collect()
    }
}

/// Independent stream per `(seed, stream)`, so output does not depend on
/// evaluation order or worker count.
fn replicate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One estimator draw by inverse-transform sampling.
fn one_replicate(
    population: &Distribution,
    weight: &Weight,
    coefficients: &[f64],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut xs: Vec<f64> = (0..n)
        .map(|_| population.quantile(rng.random::<f64>()))
        .collect();
    xs.sort_by(f64::total_cmp);
    let mut prev = weight.antiderivative(xs[0])?;
    let mut total = 0.0;
    for (x, a) in xs[1..].iter().zip(coefficients) {
        let next = weight.antiderivative(*x)?;
        total += (next - prev) * a;
        prev = next;
    }
    Ok(total)
}

fn replicate_values(
    config: &SimulationConfig,
    exec: Execution,
    stream_base: u64,
) -> Result<Vec<f64>> {
    config.validate()?;
    let coefficients = spacing_coefficients(config.n, config.gamma.get());
    map_indices(config.replicates, exec, |r| {
        let mut rng = replicate_rng(config.seed, stream_base + r as u64);
        one_replicate(
            &config.population,
            &config.weight,
            &coefficients,
            config.n,
            &mut rng,
        )
    })
    .into_iter()
    .collect()
}

/// Monte Carlo distribution of the plug-in estimator.
pub fn simulate_estimator(config: &SimulationConfig, exec: Execution) -> Result<SimulationSummary> {
    Ok(SimulationSummary::from_values(replicate_values(
        config, exec, 0,
    )?))
}

/// Kolmogorov–Smirnov distance between the sample and `N(0, 1)`.
pub fn ks_distance_to_normal(values: &[f64]) -> f64 {
    let mut z = values.to_vec();
    z.sort_by(f64::total_cmp);
    let r = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, &v)| {
            let phi = 0.5 * erfc(-v / std::f64::consts::SQRT_2);
            ((i + 1) as f64 / r - phi).max(phi - i as f64 / r)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CltReport {
    pub n: usize,
    pub replicates: usize,
    pub mean_used: f64,
    pub sd_used: f64,
    pub ks_distance: f64,
    pub threshold: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// `None` below the sample size where normality is asserted.
    pub passed: Option<bool>,
}

/// Standardizes replicates by `reference` moments (exact formulas when
/// given, Monte Carlo otherwise) and measures the distance to normality.
pub fn clt_diagnostic(
    config: &SimulationConfig,
    exec: Execution,
    reference: Option<Moments>,
) -> Result<CltReport> {
    let summary = simulate_estimator(config, exec)?;
    let (mean, var) = match reference {
        Some(m) => (m.mean, m.variance),
        None => (summary.mean, summary.variance.unwrap_or(0.0)),
    };
    if !(var.is_finite() && var > 0.0) {
        return Err(Error::PreconditionUnmet(format!(
            "degenerate variance {var}"
        )));
    }
    let sd = var.sqrt();
    let z = summary.standardized(mean, sd);
    let r = z.len() as f64;
    let zm = z.iter().sum::<f64>() / r;
    let m2 = z.iter().map(|v| (v - zm).powi(2)).sum::<f64>() / r;
    let m3 = z.iter().map(|v| (v - zm).powi(3)).sum::<f64>() / r;
    let m4 = z.iter().map(|v| (v - zm).powi(4)).sum::<f64>() / r;
    let ks_distance = ks_distance_to_normal(&z);
    let threshold = KS_SAFETY * KS_CRITICAL / r.sqrt();
    Ok(CltReport {
        n: config.n,
        replicates: config.replicates,
        mean_used: mean,
        sd_used: sd,
        ks_distance,
        threshold,
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
        passed: (config.n >= CLT_MIN_N).then_some(ks_distance < threshold),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub truth: f64,
    pub sizes: Vec<usize>,
    pub median_errors: Vec<f64>,
    pub monotone_decreasing: bool,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Median absolute error of the estimator at each size; each size draws
/// from its own block of streams.
pub fn consistency_check(
    population: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    sizes: &[usize],
    replicates: usize,
    seed: u64,
    exec: Execution,
) -> Result<ConsistencyReport> {
    let truth = wfgcpe(population, weight, gamma)?.value;
    let mut median_errors = Vec::with_capacity(sizes.len());
    for (k, &n) in sizes.iter().enumerate() {
        let config = SimulationConfig {
            replicates,
            n,
            seed,
            population: population.clone(),
            weight: weight.clone(),
            gamma,
        };
        let values = replicate_values(&config, exec, (k as u64 + 1) << 32)?;
        median_errors.push(median(values.iter().map(|v| (v - truth).abs()).collect()));
    }
    Ok(ConsistencyReport {
        truth,
        sizes: sizes.to_vec(),
        monotone_decreasing: median_errors.windows(2).all(|w| w[1] < w[0]),
        median_errors,
    })
}
