//! The WFGCPE functional and its relatives.

mod weight;

pub use weight::{CustomWeight, Monotonicity, PiecewiseLinear, RealFn, Weight, WeightTag};

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::quadrature::{ln_gamma_pos, quad, EndpointHint, QuadratureResult, TailMap};

/// A validated order `γ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(FractionalOrder(gamma))
        } else {
            Err(Error::domain(format!(
                "order must be finite and > 0, got {gamma}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// The same order viewed as a discrete-entropy exponent `0 < α ≤ 1`.
    pub fn as_unit_exponent(self) -> Result<f64> {
        if self.0 <= 1.0 {
            Ok(self.0)
        } else {
            Err(Error::domain(format!(
                "exponent must lie in (0, 1], got {}",
                self.0
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Decomposition,
    Empirical,
    Simulation,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Decomposition => "decomposition",
            Method::Empirical => "empirical",
            Method::Simulation => "simulation",
        }
    }
}

/// A computed measure with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureReport {
    pub value: f64,
    /// Present when the value came from the integration engine.
    pub quadrature: Option<QuadratureResult>,
    pub method: Method,
}

impl MeasureReport {
    fn closed(value: f64) -> Self {
        MeasureReport {
            value,
            quadrature: None,
            method: Method::ClosedForm,
        }
    }

    fn from_quadrature(q: QuadratureResult) -> Self {
        MeasureReport {
            value: q.value,
            quadrature: Some(q),
            method: Method::Quadrature,
        }
    }
}

/// `w · K · (-ln K)^γ / Γ(γ+1)` assembled in log space from `ln w` and
/// `l = ln K`, with the `0·ln 0 = 0` convention.
#[inline]
pub(crate) fn kernel(ln_w: f64, l: f64, gamma: f64, ln_gamma_g1: f64) -> f64 {
    if ln_w == f64::NEG_INFINITY || l == f64::NEG_INFINITY || l >= 0.0 {
        return 0.0;
    }
    (ln_w + l + gamma * (-l).ln() - ln_gamma_g1).exp()
}

/// `1/Γ(γ+1) ∫ ψ(x) K(x) (-ln K(x))^γ dx`.
///
/// Uses the closed form when the family carries one for this weight, which
/// also enforces its divergence threshold as a `Constraint` error.
pub fn wfgcpe(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<MeasureReport> {
    match model.closed_form_wfgcpe(weight, gamma.get()) {
        Some(v) => v.map(MeasureReport::closed),
        None => wfgcpe_by_quadrature(model, weight, gamma),
    }
}

/// The defining integral, never a closed form.
pub fn wfgcpe_by_quadrature(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<MeasureReport> {
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0);
    let (lo, hi) = model.support();
    let q = quad(
        |x| kernel(weight.ln_value(x), model.log_cdf(x), g, lg),
        lo,
        hi,
        &model.hints(),
    )?;
    Ok(MeasureReport::from_quadrature(q))
}

/// The `γ → 0⁺` limit `Ψ(s) - E[Ψ(X)]`.
pub fn wfgcpe_gamma_zero_limit(model: &Distribution, weight: &Weight) -> Result<f64> {
    let (_, s) = model.support();
    if s.is_infinite() {
        return Err(Error::UnboundedSupport);
    }
    let mean = model.try_expect(|x| weight.antiderivative(x))?;
    Ok(weight.antiderivative(s)? - mean)
}

/// `-∫ ψ K ln K`, the `γ = 1` member.
pub fn weighted_cpe(model: &Distribution, weight: &Weight) -> Result<MeasureReport> {
    wfgcpe(model, weight, FractionalOrder(1.0))
}

/// `CPE_γ^ψ / (CPE^ψ)^γ`.
pub fn normalized_wfgcpe(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<MeasureReport> {
    if let Some(closed) = model.closed_form_normalized(weight, gamma.get()) {
        return Ok(MeasureReport {
            value: closed?,
            quadrature: None,
            method: Method::ClosedForm,
        });
    }
    let num = wfgcpe(model, weight, gamma)?;
    let den = weighted_cpe(model, weight)?;
    if !(den.value.is_finite() && den.value > 0.0) {
        return Err(Error::DegenerateNormalizer(den.value));
    }
    let method = if num.method == Method::ClosedForm && den.method == Method::ClosedForm {
        Method::ClosedForm
    } else {
        Method::Quadrature
    };
    Ok(MeasureReport {
        value: (num.value.ln() - gamma.get() * den.value.ln()).exp(),
        quadrature: num.quadrature,
        method,
    })
}

/// Dynamic (past lifetime) version: `K` replaced by `K(x)/K(t)` on `(lo, t)`.
pub fn dynamic_wfgcpe(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    t: f64,
) -> Result<MeasureReport> {
    let (lo, hi) = model.support();
    if !(t > lo && t <= hi && t.is_finite()) {
        return Err(Error::domain(format!(
            "inspection time {t} outside ({lo}, {hi}]"
        )));
    }
    let lt = model.log_cdf(t);
    if lt == f64::NEG_INFINITY {
        return Err(Error::domain(format!("K({t}) = 0")));
    }
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0);
    let q = quad(
        |x| kernel(weight.ln_value(x), model.log_cdf(x) - lt, g, lg),
        lo,
        t,
        &[EndpointHint::LogAtLo, EndpointHint::LogAtHi],
    )?;
    Ok(MeasureReport::from_quadrature(q))
}

/// `τ(u) = 1/Γ(γ+1) ∫ᵤ^s ψ(x) (-ln K(x))^γ dx`.
pub fn tau(model: &Distribution, weight: &Weight, gamma: FractionalOrder, u: f64) -> Result<f64> {
    let (lo, hi) = model.support();
    let start = u.max(lo);
    if start >= hi {
        return Ok(0.0);
    }
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0);
    let f = |x: f64| {
        let l = model.log_cdf(x);
        let lw = weight.ln_value(x);
        if l >= 0.0 || lw == f64::NEG_INFINITY {
            return 0.0;
        }
        (lw + g * (-l).ln() - lg).exp()
    };
    let hints = if hi.is_finite() {
        vec![EndpointHint::LogAtLo, EndpointHint::LogAtHi]
    } else {
        vec![
            EndpointHint::LogAtLo,
            EndpointHint::DecayAtInfinity(TailMap::Reciprocal),
        ]
    };
    Ok(quad(f, start, hi, &hints)?.value)
}

/// `τ'(u) = -ψ(u) (-ln K(u))^γ / Γ(γ+1)`.
pub fn tau_derivative(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    u: f64,
) -> f64 {
    let l = model.log_cdf(u);
    if l >= 0.0 {
        return 0.0;
    }
    let g = gamma.get();
    -weight.value(u) * (g * (-l).ln() - ln_gamma_pos(g + 1.0)).exp()
}

/// `E[τ(X)]`, by nested quadrature over the quantile scale.
pub fn expected_tau(model: &Distribution, weight: &Weight, gamma: FractionalOrder) -> Result<f64> {
    expected_tau_under(model, model, weight, gamma)
}

/// `E[τ_A(B)]`, the τ of `a` averaged over the law of `b`.
pub fn expected_tau_under(
    a: &Distribution,
    b: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<f64> {
    b.try_expect(|x| tau(a, weight, gamma, x))
}

/// Residual counterpart `1/Γ(γ+1) ∫ ψ K̄ (-ln K̄)^γ`.
pub fn wfgcre(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<MeasureReport> {
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0);
    let (lo, hi) = model.support();
    let q = quad(
        |x| kernel(weight.ln_value(x), model.log_sf(x), g, lg),
        lo,
        hi,
        &model.hints(),
    )?;
    Ok(MeasureReport::from_quadrature(q))
}

/// WFGCPE of `aX + b` written over the law of `X`:
/// `a/Γ(γ+1) ∫ ψ(ax+b) K(x) (-ln K(x))^γ dx`.
pub fn affine_wfgcpe(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
    a: f64,
    b: f64,
) -> Result<MeasureReport> {
    if !(a.is_finite() && a > 0.0 && b.is_finite() && b >= 0.0) {
        return Err(Error::domain(format!(
            "need a > 0 and b >= 0, got a={a}, b={b}"
        )));
    }
    let g = gamma.get();
    let lg = ln_gamma_pos(g + 1.0) - a.ln();
    let (lo, hi) = model.support();
    let q = quad(
        |x| kernel(weight.ln_value(a * x + b), model.log_cdf(x), g, lg),
        lo,
        hi,
        &model.hints(),
    )?;
    Ok(MeasureReport::from_quadrature(q))
}

/// Left Riemann–Liouville integral of `f` with respect to `h`:
/// `1/Γ(α) ∫ₐᵗ h'(τ) f(τ) (h(t) - h(τ))^{α-1} dτ`.
///
/// Integrated in `y = t - τ`, where the kernel singularity for `α < 1` is
/// absorbed by an algebraic endpoint map. `h` must increase strictly on a
/// 256-point probe grid.
pub fn rl_fractional_integral(
    f: impl Fn(f64) -> f64,
    h: impl Fn(f64) -> f64,
    h_prime: impl Fn(f64) -> f64,
    order: f64,
    a: f64,
    t: f64,
) -> Result<f64> {
    if !(order.is_finite() && order > 0.0) {
        return Err(Error::domain(format!("order must be > 0, got {order}")));
    }
    if !(a.is_finite() && t.is_finite() && a < t) {
        return Err(Error::domain(format!("need finite a < t, got ({a}, {t})")));
    }
    const PROBES: usize = 256;
    let mut prev = f64::NEG_INFINITY;
    for i in 1..PROBES {
        let x = a + (t - a) * i as f64 / PROBES as f64;
        let hx = h(x);
        if hx.is_nan() || hx <= prev {
            return Err(Error::Monotonicity(format!("h({x}) = {hx} after {prev}")));
        }
        prev = hx;
    }
    let ht = h(t);
    let hpt = h_prime(t);
    let integrand = |y: f64| {
        let tau = t - y;
        if tau <= a || tau >= t {
            return 0.0;
        }
        let core = h_prime(tau) * f(tau);
        if core == 0.0 {
            return 0.0;
        }
        if order == 1.0 {
            return core;
        }
        let mut d = ht - h(tau);
        if !(d > 0.0) {
            // cancellation right next to t
            d = hpt * y;
        }
        core * d.powf(order - 1.0)
    };
    let lo_hint = if order < 1.0 {
        EndpointHint::AlgebraicAtLo(order - 1.0)
    } else {
        EndpointHint::LogAtLo
    };
    let q = quad(integrand, 0.0, t - a, &[lo_hint, EndpointHint::LogAtHi])?;
    Ok(q.value * (-ln_gamma_pos(order)).exp())
}

/// The fractional-integral form of the WFGCPE: `h = ln K`, `f = ψK²/k`,
/// order `γ+1`, over the whole support.
pub fn wfgcpe_via_fractional_integral(
    model: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<f64> {
    let (lo, hi) = model.support();
    if hi.is_infinite() {
        return Err(Error::UnboundedSupport);
    }
    rl_fractional_integral(
        |x| {
            let lw = weight.ln_value(x);
            if lw == f64::NEG_INFINITY {
                return 0.0;
            }
            (lw + 2.0 * model.log_cdf(x) - model.ln_pdf(x)).exp()
        },
        |x| model.log_cdf(x),
        |x| model.reversed_hazard(x),
        gamma.get() + 1.0,
        lo,
        hi,
    )
}

/// Probabilities with per-outcome weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    p: Vec<f64>,
    w: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(p: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if p.len() != w.len() || p.is_empty() {
            return Err(Error::domain(
                "probabilities and weights must have equal, nonzero length",
            ));
        }
        if p.iter().chain(&w).any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain(
                "probabilities and weights must be finite and nonnegative",
            ));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("probabilities sum to {total}")));
        }
        Ok(DiscreteDistribution { p, w })
    }

    pub fn unweighted(p: Vec<f64>) -> Result<Self> {
        let w = vec![1.0; p.len()];
        Self::new(p, w)
    }
}

/// `Σ wᵢ pᵢ (-ln pᵢ)^α` for `0 < α ≤ 1`.
pub fn discrete_wfe(d: &DiscreteDistribution, alpha: FractionalOrder) -> Result<f64> {
    let a = alpha.as_unit_exponent()?;
    Ok(d.p
        .iter()
        .zip(&d.w)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, w)| w * p * (-p.ln()).powf(a))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(g: f64) -> FractionalOrder {
        FractionalOrder::new(g).unwrap()
    }

    #[test]
    fn order_validation() {
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(-1.0).is_err());
        assert!(FractionalOrder::new(f64::INFINITY).is_err());
        assert!(order(1.5).as_unit_exponent().is_err());
        assert_eq!(order(0.5).as_unit_exponent().unwrap(), 0.5);
    }

    #[test]
    fn closed_form_and_quadrature_agree_on_power() {
        let p = Distribution::power(2.0, 3.0).unwrap();
        let r = wfgcpe(&p, &Weight::X, order(1.0)).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!((r.value - 0.48).abs() < 1e-14);
        let q = wfgcpe_by_quadrature(&p, &Weight::X, order(1.0)).unwrap();
        assert!((q.value - 0.48).abs() < 1e-10);
        assert!(q.quadrature.unwrap().converged);

        let p = Distribution::power(1.0, 2.0).unwrap();
        let want = 1.0 / (2.0 * 2.5f64.powf(1.75));
        let q = wfgcpe_by_quadrature(&p, &Weight::XSquared, order(0.75)).unwrap();
        assert!((q.value - want).abs() < 1e-9 * want);
    }

    #[test]
    fn frechet_examples() {
        let f = Distribution::frechet(2.0, 5.0).unwrap();
        let want = 2f64.powf(0.4) * crate::quadrature::gamma(1.1).unwrap()
            / (5.0 * crate::quadrature::gamma(2.5).unwrap());
        let q = wfgcpe_by_quadrature(&f, &Weight::X, order(1.5)).unwrap();
        assert!(
            (q.value - want).abs() < 1e-8 * want,
            "{} vs {want}",
            q.value
        );
        let f = Distribution::frechet(1.0, 4.0).unwrap();
        assert!(matches!(
            wfgcpe(&f, &Weight::XSquared, order(0.5)),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn huge_order_is_harmless() {
        let p = Distribution::power(1.0, 2.0).unwrap();
        let q = wfgcpe_by_quadrature(&p, &Weight::X, order(1e9)).unwrap();
        assert!(q.value >= 0.0 && q.value < 1e-12);
        assert!(q.quadrature.unwrap().converged);
    }

    #[test]
    fn degenerate_limit_goes_to_zero() {
        let mut prev = f64::INFINITY;
        for c in [1e2, 1e4, 1e6] {
            let p = Distribution::power(1.0, c).unwrap();
            let v = wfgcpe_by_quadrature(&p, &Weight::X, order(0.5))
                .unwrap()
                .value;
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn gamma_zero_limit() {
        let u = Distribution::uniform_shifted(0.0).unwrap();
        assert!((wfgcpe_gamma_zero_limit(&u, &Weight::X).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!((wfgcpe_gamma_zero_limit(&u, &Weight::One).unwrap() - 0.5).abs() < 1e-10);
        let p = Distribution::power(1.0, 2.0).unwrap();
        let lim = wfgcpe_gamma_zero_limit(&p, &Weight::X).unwrap();
        let near = wfgcpe_by_quadrature(&p, &Weight::X, order(1e-4))
            .unwrap()
            .value;
        assert!((lim - near).abs() < 1e-3);
        let f = Distribution::frechet(1.0, 3.0).unwrap();
        assert_eq!(
            wfgcpe_gamma_zero_limit(&f, &Weight::X),
            Err(Error::UnboundedSupport)
        );
    }

    #[test]
    fn weighted_cpe_examples() {
        let (b, c) = (1.7, 2.3);
        let p = Distribution::power(b, c).unwrap();
        let want = b * b * c / ((c + 2.0) * (c + 2.0));
        assert!((weighted_cpe(&p, &Weight::X).unwrap().value - want).abs() < 1e-13);
        let u = Distribution::uniform_shifted(0.0).unwrap();
        assert!((weighted_cpe(&u, &Weight::One).unwrap().value - 0.25).abs() < 1e-14);
    }

    #[test]
    fn normalization_limits() {
        let p = Distribution::power(2.0, 3.0).unwrap();
        let n1 = normalized_wfgcpe(&p, &Weight::X, order(1.0)).unwrap().value;
        assert!((n1 - 1.0).abs() < 1e-12);
        let n0 = normalized_wfgcpe(&p, &Weight::X, order(1e-4))
            .unwrap()
            .value;
        // ∫ x (x/2)^3 dx over (0, 2)
        assert!((n0 - 0.8).abs() < 1e-3);
    }

    #[test]
    fn dynamic_examples() {
        let u = Distribution::uniform_shifted(0.0).unwrap();
        let v = dynamic_wfgcpe(&u, &Weight::One, order(1.0), 0.5)
            .unwrap()
            .value;
        assert!((v - 0.125).abs() < 1e-12);
        let p = Distribution::power(1.0, 2.0).unwrap();
        let full = wfgcpe(&p, &Weight::X, order(0.7)).unwrap().value;
        let at_s = dynamic_wfgcpe(&p, &Weight::X, order(0.7), 1.0)
            .unwrap()
            .value;
        assert!((full - at_s).abs() < 1e-10);
        assert!(
            dynamic_wfgcpe(&p, &Weight::X, order(0.7), 1e-9)
                .unwrap()
                .value
                < 1e-15
        );
        assert!(dynamic_wfgcpe(&p, &Weight::X, order(0.7), 1.5).is_err());
    }

    #[test]
    fn tau_examples() {
        let u = Distribution::uniform_shifted(0.0).unwrap();
        assert!((tau(&u, &Weight::One, order(1.0), 0.0).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(tau(&u, &Weight::One, order(1.0), 1.0).unwrap(), 0.0);
        let p = Distribution::power(1.0, 2.0).unwrap();
        let e = expected_tau(&p, &Weight::X, order(0.5)).unwrap();
        let w = wfgcpe(&p, &Weight::X, order(0.5)).unwrap().value;
        assert!((e - w).abs() < 1e-7, "{e} vs {w}");
    }

    #[test]
    fn residual_symmetry_relation() {
        let u = Distribution::uniform_shifted(0.0).unwrap();
        for g in [0.3, 1.0, 2.2] {
            let cpe_x = wfgcpe_by_quadrature(&u, &Weight::X, order(g))
                .unwrap()
                .value;
            let cre = wfgcre(&u, &Weight::One, order(g)).unwrap().value;
            let cre_x = wfgcre(&u, &Weight::X, order(g)).unwrap().value;
            assert!((cpe_x - (cre - cre_x)).abs() < 1e-10);
            assert!((cre - 2f64.powf(-(g + 1.0))).abs() < 1e-10);
        }
    }

    #[test]
    fn affine_law_for_linear_weight() {
        let p = Distribution::power(1.0, 2.0).unwrap();
        let g = order(0.5);
        let (a, b) = (2.0, 3.0);
        let direct = affine_wfgcpe(&p, &Weight::X, g, a, b).unwrap().value;
        let split = a * a * wfgcpe(&p, &Weight::X, g).unwrap().value
            + a * b * wfgcpe_by_quadrature(&p, &Weight::One, g).unwrap().value;
        assert!((direct - split).abs() < 1e-9);
        let moved = Distribution::affine(&p, a, b).unwrap();
        let via_law = wfgcpe_by_quadrature(&moved, &Weight::X, g).unwrap().value;
        assert!((direct - via_law).abs() < 1e-9);
        let u = Distribution::uniform_shifted(0.0).unwrap();
        let shifted = affine_wfgcpe(&u, &Weight::X, order(2.0), 1.0, 3.0)
            .unwrap()
            .value;
        assert!((shifted - (3f64.powi(-3) + 3.0 / 8.0)).abs() < 1e-10);
    }

    #[test]
    fn riemann_liouville_examples() {
        let one = rl_fractional_integral(|_| 1.0, |x| x, |_| 1.0, 1.0, 0.0, 1.0).unwrap();
        assert!((one - 1.0).abs() < 1e-13);
        for alpha in [0.3, 0.5, 1.5, 2.75] {
            let t: f64 = 1.7;
            let v = rl_fractional_integral(|_| 1.0, |x| x, |_| 1.0, alpha, 0.0, t).unwrap();
            let want = t.powf(alpha) / crate::quadrature::gamma(alpha + 1.0).unwrap();
            assert!(
                (v - want).abs() < 1e-9 * want,
                "alpha={alpha}: {v} vs {want}"
            );
        }
        let bad = rl_fractional_integral(|_| 1.0, |x| -x, |_| -1.0, 1.0, 0.0, 1.0);
        assert!(matches!(bad, Err(Error::Monotonicity(_))));
    }

    #[test]
    fn fractional_bridge() {
        let p = Distribution::power(1.0, 2.0).unwrap();
        for g in [0.5, 1.5] {
            let bridge = wfgcpe_via_fractional_integral(&p, &Weight::X, order(g)).unwrap();
            let want = wfgcpe(&p, &Weight::X, order(g)).unwrap().value;
            assert!((bridge - want).abs() < 1e-9, "{bridge} vs {want}");
        }
    }

    #[test]
    fn discrete_entropy_examples() {
        let coin = DiscreteDistribution::unweighted(vec![0.5, 0.5]).unwrap();
        assert!((discrete_wfe(&coin, order(1.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        let sure = DiscreteDistribution::new(vec![1.0, 0.0, 0.0], vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(discrete_wfe(&sure, order(0.4)).unwrap(), 0.0);
        let d = DiscreteDistribution::new(vec![0.25, 0.75], vec![2.0, 1.0]).unwrap();
        // 2·0.25·√ln4 + 0.75·√ln(4/3)
        assert!((discrete_wfe(&d, order(0.5)).unwrap() - 0.990_975_027_234_726).abs() < 1e-12);
        assert!(discrete_wfe(&d, order(1.5)).is_err());
        assert!(DiscreteDistribution::unweighted(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0], vec![1.0, 2.0]).is_err());
    }
}
