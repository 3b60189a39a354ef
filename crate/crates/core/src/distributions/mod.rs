//! Parametric lifetime models and the proportional reversed hazard machinery.

mod prh;

use std::fmt;
use std::sync::Arc;

pub use prh::{
    prh_expectation_terms, prh_n_step, prh_recurrence_step, prh_transform, prh_wfgcpe,
    PrhExpectationTerms, PrhParameter,
};

use crate::error::{Error, Result};
use crate::measures::{Weight, WeightTag};
use crate::quadrature::{ln_gamma_pos, quad, EndpointHint, TailMap};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    Power,
    Frechet,
    UniformShifted,
    Weibull,
    Prh,
    Affine,
    Custom,
}

#[derive(Clone)]
enum Family {
    Power {
        b: f64,
        c: f64,
    },
    Frechet {
        b: f64,
        c: f64,
    },
    UniformShifted {
        a: f64,
    },
    Weibull {
        rate: f64,
        shape: f64,
    },
    Prh {
        base: Box<Distribution>,
        eta: f64,
    },
    Affine {
        base: Box<Distribution>,
        scale: f64,
        shift: f64,
    },
    Custom(CustomModel),
}

#[derive(Clone)]
struct CustomModel {
    label: String,
    cdf: RealFn,
    pdf: RealFn,
    quantile: RealFn,
    lo: f64,
    hi: f64,
}

/// An absolutely continuous law on a subinterval of `[0, ∞)`.
///
/// Immutable after construction and cheap to clone.
#[derive(Clone)]
pub struct Distribution {
    family: Family,
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// `K(x) = (x/b)^c` on `(0, b)`.
pub fn make_power(b: f64, c: f64) -> Result<Distribution> {
    Distribution::power(b, c)
}

/// `K(x) = exp(-b x^{-c})` on `(0, ∞)`.
pub fn make_frechet(b: f64, c: f64) -> Result<Distribution> {
    Distribution::frechet(b, c)
}

/// `K(x) = x - a` on `(a, a + 1)`.
pub fn make_uniform_shifted(a: f64) -> Result<Distribution> {
    Distribution::uniform_shifted(a)
}

/// `K(x) = 1 - exp(-θ x²)` on `(0, ∞)`.
pub fn make_weibull_square(theta: f64) -> Result<Distribution> {
    Distribution::weibull(theta, 2.0)
}

impl Distribution {
    pub fn power(b: f64, c: f64) -> Result<Self> {
        Ok(Distribution {
            family: Family::Power {
                b: positive("b", b)?,
                c: positive("c", c)?,
            },
        })
    }

    pub fn frechet(b: f64, c: f64) -> Result<Self> {
        Ok(Distribution {
            family: Family::Frechet {
                b: positive("b", b)?,
                c: positive("c", c)?,
            },
        })
    }

    pub fn uniform_shifted(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::domain(format!(
                "shift a must be finite and >= 0, got {a}"
            )));
        }
        Ok(Distribution {
            family: Family::UniformShifted { a },
        })
    }

    /// `K(x) = 1 - exp(-rate · x^shape)`.
    pub fn weibull(rate: f64, shape: f64) -> Result<Self> {
        Ok(Distribution {
            family: Family::Weibull {
                rate: positive("rate", rate)?,
                shape: positive("shape", shape)?,
            },
        })
    }

    /// Law of `scale·X + shift`.
    pub fn affine(base: &Distribution, scale: f64, shift: f64) -> Result<Self> {
        positive("scale", scale)?;
        if !(shift.is_finite() && shift >= 0.0) {
            return Err(Error::domain(format!(
                "shift must be finite and >= 0, got {shift}"
            )));
        }
        Ok(Distribution {
            family: Family::Affine {
                base: Box::new(base.clone()),
                scale,
                shift,
            },
        })
    }

    /// `K₁^η`.
    pub fn prh(base: &Distribution, eta: PrhParameter) -> Self {
        Distribution {
            family: Family::Prh {
                base: Box::new(base.clone()),
                eta: eta.get(),
            },
        }
    }

    /// A user model, validated on a 1024-point probe grid.
    ///
    /// Checks monotone `K` with the right boundary values, unit mass of
    /// `pdf` (1e-8), `K(Q(u)) = u` (1e-9) and finiteness of `pdf`.
    pub fn custom(
        label: impl Into<String>,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        pdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quantile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support: (f64, f64),
    ) -> Result<Self> {
        let (lo, hi) = support;
        if !(lo.is_finite() && lo >= 0.0 && hi > lo) {
            return Err(Error::Validation(format!("bad support ({lo}, {hi})")));
        }
        let model = CustomModel {
            label: label.into(),
            cdf: Arc::new(cdf),
            pdf: Arc::new(pdf),
            quantile: Arc::new(quantile),
            lo,
            hi,
        };
        validate_custom(&model)?;
        Ok(Distribution {
            family: Family::Custom(model),
        })
    }

    pub fn family_tag(&self) -> FamilyTag {
        match self.family {
            Family::Power { .. } => FamilyTag::Power,
            Family::Frechet { .. } => FamilyTag::Frechet,
            Family::UniformShifted { .. } => FamilyTag::UniformShifted,
            Family::Weibull { .. } => FamilyTag::Weibull,
            Family::Prh { .. } => FamilyTag::Prh,
            Family::Affine { .. } => FamilyTag::Affine,
            Family::Custom(_) => FamilyTag::Custom,
        }
    }

    pub fn describe(&self) -> String {
        match &self.family {
            Family::Power { b, c } => format!("power(b={b}, c={c})"),
            Family::Frechet { b, c } => format!("frechet(b={b}, c={c})"),
            Family::UniformShifted { a } => format!("uniform({a}, {})", a + 1.0),
            Family::Weibull { rate, shape } => format!("weibull(rate={rate}, shape={shape})"),
            Family::Prh { base, eta } => format!("prh({}, eta={eta})", base.describe()),
            Family::Affine { base, scale, shift } => {
                format!("{scale}*{}+{shift}", base.describe())
            }
            Family::Custom(m) => format!("custom({})", m.label),
        }
    }

    /// `(lo, s)`; `s` may be `+inf`.
    pub fn support(&self) -> (f64, f64) {
        match &self.family {
            Family::Power { b, .. } => (0.0, *b),
            Family::Frechet { .. } | Family::Weibull { .. } => (0.0, f64::INFINITY),
            Family::UniformShifted { a } => (*a, a + 1.0),
            Family::Prh { base, .. } => base.support(),
            Family::Affine { base, scale, shift } => {
                let (lo, hi) = base.support();
                (scale * lo + shift, scale * hi + shift)
            }
            Family::Custom(m) => (m.lo, m.hi),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.support().1.is_finite()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        match &self.family {
            Family::UniformShifted { a } => x - a,
            Family::Custom(m) => (m.cdf)(x).clamp(0.0, 1.0),
            _ => self.log_cdf(x).exp(),
        }
    }

    /// `ln K(x)`, accurate where `K` is tiny or close to one.
    pub fn log_cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return f64::NEG_INFINITY;
        }
        if x >= hi {
            return 0.0;
        }
        match &self.family {
            Family::Power { b, c } => c * (x / b).ln(),
            Family::Frechet { b, c } => -b * x.powf(-c),
            Family::UniformShifted { a } => (x - a).ln(),
            Family::Weibull { rate, shape } => {
                let t = rate * x.powf(*shape);
                if t < std::f64::consts::LN_2 {
                    (-(-t).exp_m1()).ln()
                } else {
                    (-(-t).exp()).ln_1p()
                }
            }
            Family::Prh { base, eta } => eta * base.log_cdf(x),
            Family::Affine { base, scale, shift } => base.log_cdf((x - shift) / scale),
            Family::Custom(m) => (m.cdf)(x).clamp(0.0, 1.0).ln(),
        }
    }

    /// `ln(1 - K(x))`.
    pub fn log_sf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            Family::Power { b, c } => (-(x / b).powf(*c)).ln_1p(),
            Family::UniformShifted { a } => (-(x - a)).ln_1p(),
            Family::Weibull { rate, shape } => -rate * x.powf(*shape),
            Family::Affine { base, scale, shift } => base.log_sf((x - shift) / scale),
            Family::Custom(m) => (-(m.cdf)(x).clamp(0.0, 1.0)).ln_1p(),
            _ => {
                let l = self.log_cdf(x);
                if l > -0.693 {
                    (-l.exp_m1()).ln()
                } else {
                    (-l.exp()).ln_1p()
                }
            }
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.log_sf(x).exp()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x >= hi {
            return 0.0;
        }
        match &self.family {
            Family::UniformShifted { .. } => 1.0,
            Family::Custom(m) => (m.pdf)(x),
            _ => self.ln_pdf(x).exp(),
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x >= hi {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            Family::Power { b, c } => c.ln() + (c - 1.0) * x.ln() - c * b.ln(),
            Family::Frechet { b, c } => (b * c).ln() - (c + 1.0) * x.ln() - b * x.powf(-c),
            Family::UniformShifted { .. } => 0.0,
            Family::Weibull { rate, shape } => {
                (rate * shape).ln() + (shape - 1.0) * x.ln() - rate * x.powf(*shape)
            }
            Family::Prh { base, eta } => eta.ln() + (eta - 1.0) * base.log_cdf(x) + base.ln_pdf(x),
            Family::Affine { base, scale, shift } => base.ln_pdf((x - shift) / scale) - scale.ln(),
            Family::Custom(m) => (m.pdf)(x).ln(),
        }
    }

    /// `K⁻¹(u)` for `u ∈ [0, 1]`, returning the support ends at 0 and 1.
    pub fn quantile(&self, u: f64) -> f64 {
        let (lo, hi) = self.support();
        if u <= 0.0 {
            return lo;
        }
        if u >= 1.0 {
            return hi;
        }
        match &self.family {
            Family::Power { b, c } => b * u.powf(1.0 / c),
            Family::Frechet { b, c } => (b / -u.ln()).powf(1.0 / c),
            Family::UniformShifted { a } => a + u,
            Family::Weibull { rate, shape } => (-(-u).ln_1p() / rate).powf(1.0 / shape),
            Family::Prh { base, eta } => base.quantile(u.powf(1.0 / eta)),
            Family::Affine { base, scale, shift } => scale * base.quantile(u) + shift,
            Family::Custom(m) => (m.quantile)(u),
        }
    }

    /// `λ(x) = k(x) / K(x)`.
    pub fn reversed_hazard(&self, x: f64) -> f64 {
        let l = self.log_cdf(x);
        if l == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        match &self.family {
            Family::Custom(m) => (m.pdf)(x) / (m.cdf)(x),
            _ => (self.ln_pdf(x) - l).exp(),
        }
    }

    /// `E[X]`, possibly `+inf`.
    pub fn mean(&self) -> Result<f64> {
        match &self.family {
            Family::Power { b, c } => Ok(b * c / (c + 1.0)),
            Family::Frechet { b, c } => Ok(if *c <= 1.0 {
                f64::INFINITY
            } else {
                b.powf(1.0 / c) * (ln_gamma_pos(1.0 - 1.0 / c)).exp()
            }),
            Family::UniformShifted { a } => Ok(a + 0.5),
            Family::Weibull { rate, shape } => {
                Ok(rate.powf(-1.0 / shape) * ln_gamma_pos(1.0 + 1.0 / shape).exp())
            }
            Family::Affine { base, scale, shift } => Ok(scale * base.mean()? + shift),
            _ => {
                let (lo, hi) = self.support();
                if hi.is_finite() {
                    Ok(hi - quad(|x| self.cdf(x), lo, hi, &self.hints())?.value)
                } else {
                    Ok(lo + quad(|x| self.sf(x), lo, hi, &self.hints())?.value)
                }
            }
        }
    }

    /// `E[g(X)] = ∫₀¹ g(K⁻¹(u)) du`.
    ///
    /// Nodes whose quantile rounds onto a support end carry negligible weight
    /// and are skipped, since `g` may be infinite there.
    pub fn expect(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        let (lo, hi) = self.support();
        Ok(quad(
            |u| {
                let x = self.quantile(u);
                if x <= lo || x >= hi {
                    0.0
                } else {
                    g(x)
                }
            },
            0.0,
            1.0,
            &[EndpointHint::LogAtLo, EndpointHint::LogAtHi],
        )?
        .value)
    }

    /// [`Distribution::expect`] for a fallible integrand; the first error
    /// raised by `g` wins.
    pub fn try_expect(&self, g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let first = std::cell::RefCell::new(None);
        let v = self.expect(|x| match g(x) {
            Ok(v) => v,
            Err(e) => {
                first.borrow_mut().get_or_insert(e);
                0.0
            }
        });
        match first.into_inner() {
            Some(e) => Err(e),
            None => v,
        }
    }

    /// Endpoint hints for integrals over the support in `x`.
    pub(crate) fn hints(&self) -> Vec<EndpointHint> {
        if self.is_bounded() {
            vec![EndpointHint::LogAtLo, EndpointHint::LogAtHi]
        } else {
            vec![
                EndpointHint::LogAtLo,
                EndpointHint::DecayAtInfinity(TailMap::Reciprocal),
            ]
        }
    }

    /// Closed-form WFGCPE when the family and weight match a known row.
    ///
    /// `None` means no closed form applies; `Some(Err(Constraint))` means the
    /// row applies but `γ` is at or below its divergence threshold.
    pub fn closed_form_wfgcpe(&self, weight: &Weight, gamma: f64) -> Option<Result<f64>> {
        let lg = ln_gamma_pos(gamma + 1.0);
        match (&self.family, weight.tag()) {
            (Family::Power { b, c }, WeightTag::X) => {
                Some(Ok(b * b / (c * (1.0 + 2.0 / c).powf(gamma + 1.0))))
            }
            (Family::Power { b, c }, WeightTag::XSquared) => {
                Some(Ok(b * b * b / (c * (1.0 + 3.0 / c).powf(gamma + 1.0))))
            }
            (Family::Frechet { b, c }, WeightTag::X) => Some(frechet_row(*b, *c, 2.0, gamma, lg)),
            (Family::Frechet { b, c }, WeightTag::XSquared) => {
                Some(frechet_row(*b, *c, 3.0, gamma, lg))
            }
            (Family::UniformShifted { .. }, WeightTag::One) => Some(Ok(2f64.powf(-(gamma + 1.0)))),
            (Family::UniformShifted { a }, WeightTag::X) => {
                Some(Ok(3f64.powf(-(gamma + 1.0)) + a * 2f64.powf(-(gamma + 1.0))))
            }
            (Family::UniformShifted { a }, WeightTag::XSquared) => Some(Ok(4f64
                .powf(-(gamma + 1.0))
                + 2.0 * a * 3f64.powf(-(gamma + 1.0))
                + a * a * 2f64.powf(-(gamma + 1.0)))),
            _ => None,
        }
    }
}

impl Distribution {
    /// Closed-form normalized measure `CPE_γ / (CPE_1)^γ` for the power and
    /// Fréchet rows, simplified from the definition.
    pub fn closed_form_normalized(&self, weight: &Weight, gamma: f64) -> Option<Result<f64>> {
        let m = match weight.tag() {
            WeightTag::X => 2.0,
            WeightTag::XSquared => 3.0,
            _ => return None,
        };
        match &self.family {
            Family::Power { b, c } => Some(Ok((m * (1.0 - gamma) * b.ln()
                + (gamma - 1.0) * (c + m).ln())
            .exp())),
            Family::Frechet { b, c } => Some(frechet_normalized(*b, *c, m, gamma)),
            _ => None,
        }
    }
}

/// `c^{γ-1} b^{(m/c)(1-γ)} Γ(γ-m/c) / (Γ(γ+1) Γ(1-m/c)^γ)`, needing `c > m`
/// for the normalizer and `γ > m/c` for the numerator.
fn frechet_normalized(b: f64, c: f64, m: f64, gamma: f64) -> Result<f64> {
    let r = m / c;
    if c <= m || gamma <= r {
        return Err(Error::Constraint(format!(
            "normalized Frechet closed form with psi = x^{} needs c > {m} and gamma > {m}/c, got c = {c}, gamma = {gamma}",
            m - 1.0
        )));
    }
    Ok(
        ((gamma - 1.0) * c.ln() + r * (1.0 - gamma) * b.ln() + ln_gamma_pos(gamma - r)
            - ln_gamma_pos(gamma + 1.0)
            - gamma * ln_gamma_pos(1.0 - r))
        .exp(),
    )
}

/// `b^{m/c} Γ(γ - m/c) / (c Γ(γ+1))`, finite for `γ > m/c`.
fn frechet_row(b: f64, c: f64, m: f64, gamma: f64, ln_gamma_g1: f64) -> Result<f64> {
    let threshold = m / c;
    if gamma <= threshold {
        return Err(Error::Constraint(format!(
            "Frechet closed form with psi = x^{} needs gamma > {m}/c = {threshold}, got {gamma}",
            m - 1.0
        )));
    }
    Ok((threshold * b.ln() + ln_gamma_pos(gamma - threshold) - ln_gamma_g1).exp() / c)
}

/// `μ(t) = ∫ K(x) dx / K(t)` over `(lo, t)`.
pub fn mean_inactivity_time(model: &Distribution, t: f64) -> Result<f64> {
    let (lo, hi) = model.support();
    if !(t > lo && t <= hi) || t.is_infinite() {
        return Err(Error::domain(format!(
            "t = {t} outside the support ({lo}, {hi}]"
        )));
    }
    let kt = model.cdf(t);
    if kt <= 0.0 {
        return Err(Error::domain(format!("K({t}) = 0")));
    }
    let lt = model.log_cdf(t);
    Ok(quad(
        |x| (model.log_cdf(x) - lt).exp(),
        lo,
        t,
        &[EndpointHint::LogAtLo, EndpointHint::LogAtHi],
    )?
    .value)
}

const PROBES: usize = 1024;

fn validate_custom(m: &CustomModel) -> Result<()> {
    let bad = |msg: String| Err(Error::Validation(format!("{}: {msg}", m.label)));
    let u_grid = |i: usize| (i as f64 + 0.5) / PROBES as f64;
    let mut prev = 0.0;
    for i in 0..PROBES {
        let u = u_grid(i);
        let x = (m.quantile)(u);
        if !(x >= m.lo && x <= m.hi) {
            return bad(format!("quantile({u}) = {x} leaves the support"));
        }
        let k = (m.cdf)(x);
        if (k - u).abs() > 1e-9 {
            return bad(format!("K(Q({u})) = {k}"));
        }
        if k < prev {
            return bad(format!("cdf decreases near x = {x}"));
        }
        prev = k;
        let d = (m.pdf)(x);
        if !(d.is_finite() && d >= 0.0) {
            return bad(format!("pdf({x}) = {d}"));
        }
    }
    if m.hi.is_finite() && ((m.cdf)(m.hi) - 1.0).abs() > 1e-9 {
        return bad("cdf does not reach 1 at the upper support end".into());
    }
    if (m.cdf)(m.lo).abs() > 1e-9 {
        return bad("cdf does not start at 0".into());
    }
    let hints = if m.hi.is_finite() {
        vec![]
    } else {
        vec![EndpointHint::DecayAtInfinity(TailMap::Reciprocal)]
    };
    let pdf = m.pdf.clone();
    let mass = quad(move |x| pdf(x), m.lo, m.hi, &hints)?.value;
    if (mass - 1.0).abs() > 1e-8 {
        return bad(format!("pdf integrates to {mass}"));
    }
    Ok(())
}
