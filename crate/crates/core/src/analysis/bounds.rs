use super::orders::is_log_concave;
use crate::distributions::{prh_transform, Distribution, PrhParameter};
use crate::error::{Error, Result};
use crate::measures::{kernel, tau, weighted_cpe, wfgcpe, CustomWeight, FractionalOrder, Weight};
use crate::quadrature::{ln_gamma_pos, quad};

/// Euler–Mascheroni constant, `-∫₀¹ ln(-ln u) du`.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Grid points for the convolution behind the sum bound.
const SUM_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundId {
    /// `CPE ≥ 1/Γ(γ+1) ∫ ψ K (1-K)^γ`.
    A,
    /// `CPE ≥ D(γ) e^{H(X)} / Γ(γ+1)`.
    B,
    /// `CPE ≥ τ(μ)` for decreasing `ψ`.
    C,
    /// `CPE ≥ ψ(s) CPE_γ` for decreasing `ψ`, `≤` for increasing.
    D,
    /// With `ψ = ξ^γ`: `CPE ≥ s^{1-γ} [CPE^ξ]^γ / Γ(γ+1)` for `γ ≥ 1`, `≤` for `γ ≤ 1`.
    E,
    /// `CPE(X₁+X₂) ≥ max(CPE(X₁), CPE(X₂))` for log-concave densities and increasing `ψ`.
    F,
    /// PRH scaling: `CPE(X₂) ≤ η^γ CPE(X₁)` for `η ≥ 1`, `≥` for `η ≤ 1`.
    Prh,
}

impl BoundId {
    pub fn label(self) -> &'static str {
        match self {
            BoundId::A => "a",
            BoundId::B => "b",
            BoundId::C => "c",
            BoundId::D => "d",
            BoundId::E => "e",
            BoundId::F => "f",
            BoundId::Prh => "prh",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            BoundId::A => "CPE >= int psi K (1-K)^g / G(g+1)",
            BoundId::B => "CPE >= D(g) exp(H) / G(g+1)",
            BoundId::C => "CPE >= tau(mean), psi decreasing",
            BoundId::D => "CPE vs psi(s) CPE_g, direction by monotonicity",
            BoundId::E => "CPE^{xi^g} vs s^(1-g) (CPE^xi)^g / G(g+1)",
            BoundId::F => "CPE(X1+X2) >= max(CPE(X1), CPE(X2))",
            BoundId::Prh => "CPE(X2) vs eta^g CPE(X1)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundOutcome {
    /// `slack ≥ 0` means the inequality holds; it is the signed gap in the
    /// holding direction divided by `max(1, |bound|)`.
    Checked {
        measure: f64,
        bound: f64,
        slack: f64,
    },
    NotApplicable(String),
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub id: BoundId,
    pub outcome: BoundOutcome,
}

impl BoundEntry {
    fn checked(id: BoundId, measure: f64, bound: f64, measure_is_larger: bool) -> Self {
        let gap = if measure_is_larger {
            measure - bound
        } else {
            bound - measure
        };
        BoundEntry {
            id,
            outcome: BoundOutcome::Checked {
                measure,
                bound,
                slack: gap / bound.abs().max(1.0),
            },
        }
    }

    fn from_result(id: BoundId, r: Result<BoundEntry>) -> Self {
        r.unwrap_or_else(|e| BoundEntry {
            id,
            outcome: match e {
                Error::PreconditionUnmet(m) => BoundOutcome::NotApplicable(m),
                other => BoundOutcome::Failed(other),
            },
        })
    }

    pub fn slack(&self) -> Option<f64> {
        match self.outcome {
            BoundOutcome::Checked { slack, .. } => Some(slack),
            _ => None,
        }
    }

    /// Checked with slack at least `-tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack().is_some_and(|s| s >= -tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub measure: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    /// Entries that were checked and fail, or that could not be evaluated.
    pub fn violations(&self, tol: f64) -> Vec<&BoundEntry> {
        self.entries
            .iter()
            .filter(|e| match e.outcome {
                BoundOutcome::Checked { .. } => !e.holds(tol),
                BoundOutcome::NotApplicable(_) => false,
                BoundOutcome::Failed(_) => true,
            })
            .collect()
    }

    pub fn checked(&self) -> usize {
        self.entries.iter().filter(|e| e.slack().is_some()).count()
    }
}

fn unmet(msg: impl Into<String>) -> Error {
    Error::PreconditionUnmet(msg.into())
}

fn bounded_support(model: &Distribution) -> Result<(f64, f64)> {
    let (lo, hi) = model.support();
    if hi.is_infinite() {
        return Err(unmet("support is unbounded"));
    }
    Ok((lo, hi))
}

/// Evaluates every bound for `model`, `ψ` and `γ`.
///
/// Bound (e) uses `ψ = ξ^γ`; when `xi` is `None` it takes `ξ = ψ^{1/γ}`, so
/// its left side is the same measure as the others. Bound (f) pairs the
/// model with an independent copy of itself.
pub fn bound_suite(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    xi: Option<&Weight>,
) -> Result<BoundReport> {
    let cpe = wfgcpe(model, weight, gamma)?.value;
    let entries = vec![
        BoundEntry::from_result(BoundId::A, bound_a(model, weight, gamma, cpe)),
        BoundEntry::from_result(BoundId::B, bound_b(model, weight, gamma, cpe)),
        BoundEntry::from_result(BoundId::C, bound_c(model, weight, gamma, cpe)),
        BoundEntry::from_result(BoundId::D, bound_d(model, weight, gamma, cpe)),
        BoundEntry::from_result(BoundId::E, bound_e(model, weight, gamma, xi, cpe)),
        BoundEntry::from_result(BoundId::F, sum_bound(model, model, weight, gamma)),
    ];
    Ok(BoundReport {
        measure: cpe,
        entries,
    })
}

fn bound_a(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    cpe: f64,
) -> Result<BoundEntry> {
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0);
    let (lo, hi) = model.support();
    let rhs = quad(
        |x| {
            kernel(weight.ln_value(x), model.log_cdf(x), 0.0, 0.0)
                * (g * model.log_sf(x) - lg).exp()
        },
        lo,
        hi,
        &model.hints(),
    )?
    .value;
    Ok(BoundEntry::checked(BoundId::A, cpe, rhs, true))
}

/// `ln D(γ) = E ln ψ(X) + ∫₀¹ ln u du + γ ∫₀¹ ln(-ln u) du`.
fn bound_b(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    cpe: f64,
) -> Result<BoundEntry> {
    let g = gamma.get();
    let e_ln_psi = model.expect(|x| weight.ln_value(x))?;
    let entropy = -model.expect(|x| model.ln_pdf(x))?;
    let ln_d = e_ln_psi - 1.0 - g * EULER_GAMMA;
    let rhs = (ln_d + entropy - ln_gamma_pos(g + 1.0)).exp();
    Ok(BoundEntry::checked(BoundId::B, cpe, rhs, true))
}

fn bound_c(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    cpe: f64,
) -> Result<BoundEntry> {
    if !weight.monotonicity().is_decreasing() {
        return Err(unmet("weight is not decreasing"));
    }
    let mu = model.mean()?;
    Ok(BoundEntry::checked(
        BoundId::C,
        cpe,
        tau(model, weight, gamma, mu)?,
        true,
    ))
}

fn bound_d(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    cpe: f64,
) -> Result<BoundEntry> {
    let (_, s) = bounded_support(model)?;
    let mono = weight.monotonicity();
    if !(mono.is_decreasing() || mono.is_increasing()) {
        return Err(unmet("weight is not monotone"));
    }
    let rhs = weight.value(s) * wfgcpe(model, &Weight::One, gamma)?.value;
    Ok(BoundEntry::checked(
        BoundId::D,
        cpe,
        rhs,
        mono.is_decreasing(),
    ))
}

fn bound_e(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    xi: Option<&Weight>,
    cpe: f64,
) -> Result<BoundEntry> {
    let (lo, s) = bounded_support(model)?;
    if lo < 0.0 {
        return Err(unmet("support must be nonnegative"));
    }
    let g = gamma.get();
    let (xi, lhs) = match xi {
        Some(xi) => {
            let inner = xi.clone();
            let psi = Weight::Custom(CustomWeight::new(
                "xi^gamma",
                move |x| inner.value(x).powf(g),
                xi.monotonicity(),
            ));
            (xi.clone(), wfgcpe(model, &psi, gamma)?.value)
        }
        None => {
            let inner = weight.clone();
            let xi = Weight::Custom(CustomWeight::new(
                "psi^(1/gamma)",
                move |x| inner.value(x).powf(1.0 / g),
                weight.monotonicity(),
            ));
            (xi, cpe)
        }
    };
    let cpe_xi = weighted_cpe(model, &xi)?.value;
    let rhs = ((1.0 - g) * s.ln() + g * cpe_xi.ln() - ln_gamma_pos(g + 1.0)).exp();
    Ok(BoundEntry::checked(BoundId::E, lhs, rhs, g >= 1.0))
}

/// Sum bound for independent `X₁`, `X₂`.
pub fn sum_bound(
    m1: &Distribution,
    m2: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<BoundEntry> {
    if !weight.monotonicity().is_increasing() {
        return Err(unmet("weight is not increasing"));
    }
    bounded_support(m1)?;
    bounded_support(m2)?;
    if !(is_log_concave(m1) && is_log_concave(m2)) {
        return Err(unmet("density is not log-concave"));
    }
    let lhs = sum_wfgcpe(m1, m2, weight, gamma)?;
    let rhs = wfgcpe(m1, weight, gamma)?
        .value
        .max(wfgcpe(m2, weight, gamma)?.value);
    Ok(BoundEntry::checked(BoundId::F, lhs, rhs, true))
}

/// WFGCPE of `X₁ + X₂` on a shared grid: the CDF of the sum is the
/// Stieltjes trapezoid sum `Σ ½(K₁(z-xᵢ) + K₁(z-xᵢ₊₁)) (K₂(xᵢ₊₁) - K₂(xᵢ))`,
/// then the measure is a trapezoid sum over `z`.
pub fn sum_wfgcpe(
    m1: &Distribution,
    m2: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<f64> {
    let (lo1, hi1) = bounded_support(m1)?;
    let (lo2, hi2) = bounded_support(m2)?;
    let (w1, w2) = (hi1 - lo1, hi2 - lo2);
    let cells2 = ((SUM_GRID as f64 * w2 / (w1 + w2)).round() as usize).max(1);
    let h = w2 / cells2 as f64;
    let cells1 = (w1 / h).ceil() as usize;
    let k1: Vec<f64> = (0..=cells1).map(|m| m1.cdf(lo1 + m as f64 * h)).collect();
    let k2: Vec<f64> = (0..=cells2)
        .map(|i| {
            if i == cells2 {
                1.0
            } else {
                m2.cdf(lo2 + i as f64 * h)
            }
        })
        .collect();
    let mass: Vec<f64> = k2.windows(2).map(|w| w[1] - w[0]).collect();
    let k1_at = |m: isize| -> f64 {
        if m < 0 {
            0.0
        } else if m as usize > cells1 {
            1.0
        } else {
            k1[m as usize]
        }
    };
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0);
    let points = cells1 + cells2;
    let mut total = 0.0;
    for j in 0..=points {
        let ks: f64 = mass
            .iter()
            .enumerate()
            .map(|(i, dm)| {
                let m = j as isize - i as isize;
                0.5 * (k1_at(m) + k1_at(m - 1)) * dm
            })
            .sum();
        let z = lo1 + lo2 + j as f64 * h;
        let f = kernel(weight.ln_value(z), ks.min(1.0).ln(), g, lg);
        let end = j == 0 || j == points;
        total += if end { 0.5 * f } else { f };
    }
    Ok(total * h)
}

/// PRH scaling bound between `base` and its `K^η` transform.
pub fn prh_bound(
    base: &Distribution,
    eta: PrhParameter,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<BoundEntry> {
    let x1 = wfgcpe(base, weight, gamma)?.value;
    let x2 = wfgcpe(&prh_transform(base, eta), weight, gamma)?.value;
    let e = eta.get();
    Ok(BoundEntry::checked(
        BoundId::Prh,
        x2,
        e.powf(gamma.get()) * x1,
        e < 1.0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterexample {
    pub c1: f64,
    pub c2: f64,
    /// `CPE(X₁) - CPE(X₂)` at the lower and higher order.
    pub diff_low: f64,
    pub diff_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleScan {
    pub gamma_low: f64,
    pub gamma_high: f64,
    pub pairs_scanned: usize,
    pub sign_changes: Vec<Counterexample>,
}

/// Scans `K₁ = x^{c₁}`, `K₂ = x^{c₂}` with `c₁ < c₂` (so `X₁ ≤_st X₂`) and
/// `ψ = x` for pairs whose WFGCPE difference changes sign between the two
/// orders.
pub fn counterexample_scan(
    cs: &[f64],
    gamma_low: f64,
    gamma_high: f64,
) -> Result<CounterexampleScan> {
    let lo = FractionalOrder::new(gamma_low)?;
    let hi = FractionalOrder::new(gamma_high)?;
    let value = |c: f64, g: FractionalOrder| -> Result<f64> {
        Ok(wfgcpe(&Distribution::power(1.0, c)?, &Weight::X, g)?.value)
    };
    let mut pairs_scanned = 0;
    let mut sign_changes = Vec::new();
    for (i, &c1) in cs.iter().enumerate() {
        for &c2 in &cs[i + 1..] {
            if c2 <= c1 {
                continue;
            }
            pairs_scanned += 1;
            let diff_low = value(c1, lo)? - value(c2, lo)?;
            let diff_high = value(c1, hi)? - value(c2, hi)?;
            if diff_low * diff_high < 0.0 {
                sign_changes.push(Counterexample {
                    c1,
                    c2,
                    diff_low,
                    diff_high,
                });
            }
        }
    }
    Ok(CounterexampleScan {
        gamma_low,
        gamma_high,
        pairs_scanned,
        sign_changes,
    })
}
