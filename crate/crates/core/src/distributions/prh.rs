//! Proportional reversed hazard model `K₂ = K₁^η`.
//!
//! The expectation terms are integrated in `v = -ln K₂(X₂)`, which is a unit
//! exponential variable, so
//!
//! ```text
//! 𝓔(γ) = 1/Γ(γ) E[X ψ(X) (-ln K₂(X))^{γ-1}] = ∫₀^∞ g(x(v)) v^{γ-1} e^{-v} / Γ(γ) dv
//! ```
//!
//! with `x(v) = K₁⁻¹(e^{-v/η})` and `g(x) = x ψ(x)`. The tilde term uses
//! `g(x) = x ψ'(x) / λ₁(x)`.

use super::Distribution;
use crate::error::{Error, Result};
use crate::measures::Weight;
use crate::quadrature::{ln_gamma_pos, quad, EndpointHint, TailMap};

/// The proportionality constant `η > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrhParameter(f64);

impl PrhParameter {
    pub fn new(eta: f64) -> Result<Self> {
        if eta.is_finite() && eta > 0.0 {
            Ok(PrhParameter(eta))
        } else {
            Err(Error::domain(format!(
                "eta must be finite and > 0, got {eta}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `K₂ = K₁^η`, with density `η K₁^{η-1} k₁` and reversed hazard `η λ₁`.
pub fn prh_transform(base: &Distribution, eta: PrhParameter) -> Distribution {
    Distribution::prh(base, eta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrhExpectationTerms {
    pub e_term: f64,
    pub e_tilde_term: f64,
    pub order: f64,
}

/// Both expectation terms at `order`.
///
/// Divergent expectations surface as `NonConvergence`.
pub fn prh_expectation_terms(
    base: &Distribution,
    eta: PrhParameter,
    weight: &Weight,
    order: f64,
) -> Result<PrhExpectationTerms> {
    if !(order.is_finite() && order > 0.0) {
        return Err(Error::domain(format!("order must be > 0, got {order}")));
    }
    let eta = eta.get();
    let x_of = |v: f64| base.quantile((-v / eta).exp());
    let e_term = gamma_mixture(
        |v| {
            let x = x_of(v);
            x * weight.value(x)
        },
        order,
    )?;
    let e_tilde_term =
        if matches!(weight, Weight::One) || matches!(weight, Weight::Power(p) if *p == 0.0) {
            0.0
        } else {
            gamma_mixture(
                |v| {
                    let x = x_of(v);
                    let d = weight.derivative(x);
                    if d == 0.0 || x == 0.0 {
                        return 0.0;
                    }
                    let lam = base.reversed_hazard(x);
                    if lam.is_infinite() {
                        return 0.0;
                    }
                    x * d / lam
                },
                order,
            )?
        };
    Ok(PrhExpectationTerms {
        e_term,
        e_tilde_term,
        order,
    })
}

/// `∫₀^∞ g(v) v^{a-1} e^{-v} / Γ(a) dv`.
fn gamma_mixture(g: impl Fn(f64) -> f64, a: f64) -> Result<f64> {
    let lg = ln_gamma_pos(a);
    let f = |v: f64| {
        let gv = g(v);
        if gv == 0.0 {
            return 0.0;
        }
        gv * ((a - 1.0) * v.ln() - v - lg).exp()
    };
    Ok(quad(
        f,
        0.0,
        f64::INFINITY,
        &[
            EndpointHint::AlgebraicAtLo(a - 1.0),
            EndpointHint::DecayAtInfinity(TailMap::Reciprocal),
        ],
    )?
    .value)
}

fn expect_order(t: &PrhExpectationTerms, want: f64) -> Result<()> {
    if (t.order - want).abs() > 1e-12 * want.max(1.0) {
        return Err(Error::domain(format!(
            "expectation terms at order {} supplied where order {want} is needed",
            t.order
        )));
    }
    Ok(())
}

/// `𝓔(γ) - 𝓔(γ+1) - η⁻¹ 𝓔̃(γ+1)`.
pub fn prh_wfgcpe(
    at_gamma: &PrhExpectationTerms,
    at_gamma1: &PrhExpectationTerms,
    eta: PrhParameter,
) -> Result<f64> {
    expect_order(at_gamma1, at_gamma.order + 1.0)?;
    Ok(at_gamma.e_term - at_gamma1.e_term - at_gamma1.e_tilde_term / eta.get())
}

/// Order `γ+1` from order `γ`:
/// `𝓔(γ) - 𝓔(γ+2) - η⁻¹[𝓔̃(γ+1) + 𝓔̃(γ+2)] - prior`.
pub fn prh_recurrence_step(
    at_gamma: &PrhExpectationTerms,
    at_gamma1: &PrhExpectationTerms,
    at_gamma2: &PrhExpectationTerms,
    eta: PrhParameter,
    prior: f64,
) -> Result<f64> {
    let g = at_gamma.order;
    expect_order(at_gamma1, g + 1.0)?;
    expect_order(at_gamma2, g + 2.0)?;
    Ok(at_gamma.e_term
        - at_gamma2.e_term
        - (at_gamma1.e_tilde_term + at_gamma2.e_tilde_term) / eta.get()
        - prior)
}

/// Order `γ+n` directly from order `γ`.
///
/// Needs the terms at `γ`, `γ+1`, `γ+n` and `γ+n+1`.
pub fn prh_n_step(
    n: u32,
    at_gamma: &PrhExpectationTerms,
    at_gamma1: &PrhExpectationTerms,
    at_gamma_n: &PrhExpectationTerms,
    at_gamma_n1: &PrhExpectationTerms,
    eta: PrhParameter,
    prior: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    let g = at_gamma.order;
    expect_order(at_gamma1, g + 1.0)?;
    expect_order(at_gamma_n, g + n as f64)?;
    expect_order(at_gamma_n1, g + n as f64 + 1.0)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(
        at_gamma_n.e_term - at_gamma_n1.e_term - sign * (at_gamma.e_term - at_gamma1.e_term)
            + (sign * at_gamma1.e_tilde_term - at_gamma_n1.e_tilde_term) / eta.get()
            + sign * prior,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{wfgcpe_by_quadrature, FractionalOrder};

    fn uniform() -> Distribution {
        Distribution::uniform_shifted(0.0).unwrap()
    }

    fn direct(d: &Distribution, w: &Weight, g: f64) -> f64 {
        wfgcpe_by_quadrature(d, w, FractionalOrder::new(g).unwrap())
            .unwrap()
            .value
    }

    #[test]
    fn identity_transform() {
        let base = Distribution::power(2.0, 1.5).unwrap();
        let same = prh_transform(&base, PrhParameter::new(1.0).unwrap());
        for i in 1..40 {
            let x = 2.0 * i as f64 / 40.0;
            assert!((same.cdf(x) - base.cdf(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_base_gives_power_model() {
        let c = 2.7;
        let t = prh_transform(&uniform(), PrhParameter::new(c).unwrap());
        let p = Distribution::power(1.0, c).unwrap();
        for i in 1..40 {
            let x = i as f64 / 40.0;
            assert!((t.cdf(x) - p.cdf(x)).abs() < 1e-15);
            assert!((t.pdf(x) - p.pdf(x)).abs() < 1e-12);
        }
        let eta2 = prh_transform(&uniform(), PrhParameter::new(2.0).unwrap());
        assert!((eta2.reversed_hazard(0.5) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn terms_for_uniform_base_and_linear_weight() {
        for (c, g) in [(2.0, 1.5), (0.7, 0.3), (3.0, 2.0)] {
            let t = prh_expectation_terms(&uniform(), PrhParameter::new(c).unwrap(), &Weight::X, g)
                .unwrap();
            let want = (c / (2.0 + c)).powf(g);
            assert!((t.e_term - want).abs() < 1e-10, "c={c} g={g}: {}", t.e_term);
            assert!((t.e_tilde_term - want).abs() < 1e-10);
        }
        let t = prh_expectation_terms(&uniform(), PrhParameter::new(2.0).unwrap(), &Weight::X, 1.5)
            .unwrap();
        assert!((t.e_term - 0.353_553_390_593_273_8).abs() < 1e-10);
    }

    #[test]
    fn constant_weight_has_no_tilde_term() {
        let t = prh_expectation_terms(
            &uniform(),
            PrhParameter::new(1.3).unwrap(),
            &Weight::One,
            0.8,
        )
        .unwrap();
        assert_eq!(t.e_tilde_term, 0.0);
    }

    #[test]
    fn decomposition_matches_direct_integral() {
        let eta = PrhParameter::new(1.0).unwrap();
        let t0 = prh_expectation_terms(&uniform(), eta, &Weight::X, 1.0).unwrap();
        let t1 = prh_expectation_terms(&uniform(), eta, &Weight::X, 2.0).unwrap();
        assert!((prh_wfgcpe(&t0, &t1, eta).unwrap() - 1.0 / 9.0).abs() < 1e-10);
        assert!(prh_wfgcpe(&t0, &t0, eta).is_err());

        let base = Distribution::power(1.5, 0.8).unwrap();
        let eta = PrhParameter::new(2.4).unwrap();
        for w in [Weight::One, Weight::X, Weight::XSquared, Weight::SqrtX] {
            let g = 0.6;
            let t0 = prh_expectation_terms(&base, eta, &w, g).unwrap();
            let t1 = prh_expectation_terms(&base, eta, &w, g + 1.0).unwrap();
            let via = prh_wfgcpe(&t0, &t1, eta).unwrap();
            let want = direct(&prh_transform(&base, eta), &w, g);
            assert!((via - want).abs() < 1e-8 * want, "{w:?}: {via} vs {want}");
        }
    }

    #[test]
    fn recurrence_examples() {
        let base = Distribution::power(1.0, 1.0).unwrap();
        let eta = PrhParameter::new(2.0).unwrap();
        let terms: Vec<_> = (0..3)
            .map(|k| prh_expectation_terms(&base, eta, &Weight::X, 0.5 + k as f64).unwrap())
            .collect();
        let prior = direct(&prh_transform(&base, eta), &Weight::X, 0.5);
        let step = prh_recurrence_step(&terms[0], &terms[1], &terms[2], eta, prior).unwrap();
        let want = 2f64.powf(1.5) / 4f64.powf(2.5);
        assert!((step - want).abs() < 1e-9);
        assert!((step - 0.088_388_347_648_318_44).abs() < 1e-9);

        let eta = PrhParameter::new(1.0).unwrap();
        let t: Vec<_> = (0..3)
            .map(|k| prh_expectation_terms(&uniform(), eta, &Weight::One, 1.0 + k as f64).unwrap())
            .collect();
        let step = prh_recurrence_step(&t[0], &t[1], &t[2], eta, 0.25).unwrap();
        assert!((step - 0.125).abs() < 1e-10);
    }

    #[test]
    fn n_step_matches_chained_steps_and_direct_value() {
        let eta = PrhParameter::new(2.0).unwrap();
        let g = 0.25;
        let t: Vec<_> = (0..5)
            .map(|k| prh_expectation_terms(&uniform(), eta, &Weight::X, g + k as f64).unwrap())
            .collect();
        let model = prh_transform(&uniform(), eta);
        let prior = direct(&model, &Weight::X, g);
        let one = prh_recurrence_step(&t[0], &t[1], &t[2], eta, prior).unwrap();
        let two = prh_recurrence_step(&t[1], &t[2], &t[3], eta, one).unwrap();
        let jump = prh_n_step(2, &t[0], &t[1], &t[2], &t[3], eta, prior).unwrap();
        assert!((jump - two).abs() < 1e-10);
        assert!((jump - direct(&model, &Weight::X, g + 2.0)).abs() < 1e-9);
        let n1 = prh_n_step(1, &t[0], &t[1], &t[1], &t[2], eta, prior).unwrap();
        assert!((n1 - one).abs() < 1e-14);
        assert!(prh_n_step(0, &t[0], &t[1], &t[1], &t[2], eta, prior).is_err());
    }
}
