use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::measures::{expected_tau_under, tau_derivative, wfgcpe, FractionalOrder, Weight};
use crate::quadrature::{quad, EndpointHint, TailMap};

/// Grid size used when an implication check verifies its own precondition.
const PRECONDITION_GRID: usize = 256;
const MIN_GRID: usize = 64;
const SHAPE_GRID: usize = 512;
const SHAPE_TOL: f64 = 1e-9;
/// Slack allowed on the concluded inequality between the two measures.
const IMPLICATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderRelation {
    /// Usual stochastic order, `K₁ ≥ K₂`.
    St,
    /// Hazard rate order, `K̄₂/K̄₁` nondecreasing.
    Hr,
    /// Dispersive order, `K₁⁻¹(v) - K₁⁻¹(u) ≤ K₂⁻¹(v) - K₂⁻¹(u)` for `u < v`.
    Disp,
    /// Decreasing convex order, over a fixed family of test functions.
    Dcx,
}

impl OrderRelation {
    pub fn name(self) -> &'static str {
        match self {
            OrderRelation::St => "st",
            OrderRelation::Hr => "hr",
            OrderRelation::Disp => "disp",
            OrderRelation::Dcx => "dcx",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Point(f64),
    Pair(f64, f64),
    TestFunction(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    HoldsOnGrid,
    Violated(Witness),
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderVerdict {
    pub relation: OrderRelation,
    pub holds: Verdict,
    pub grid_size: usize,
}

impl OrderVerdict {
    pub fn holds_on_grid(&self) -> bool {
        self.holds == Verdict::HoldsOnGrid
    }
}

fn probability_grid(grid: usize) -> impl Iterator<Item = f64> {
    (0..grid).map(move |i| (i as f64 + 0.5) / grid as f64)
}

/// Quantiles of both models at the same probability levels, merged.
fn merged_points(m1: &Distribution, m2: &Distribution, grid: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = probability_grid(grid)
        .flat_map(|u| [m1.quantile(u), m2.quantile(u)])
        .filter(|x| x.is_finite())
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Tests `m1 ≤ m2` in `relation` on a grid of `grid` probability levels.
pub fn check_order(
    m1: &Distribution,
    m2: &Distribution,
    relation: OrderRelation,
    grid: usize,
) -> OrderVerdict {
    let holds = if grid < MIN_GRID {
        Verdict::Inconclusive(format!("grid of {grid} is below the minimum {MIN_GRID}"))
    } else {
        match relation {
            OrderRelation::St => check_st(m1, m2, grid),
            OrderRelation::Hr => check_hr(m1, m2, grid),
            OrderRelation::Disp => check_disp(m1, m2, grid),
            OrderRelation::Dcx => check_dcx(m1, m2, grid),
        }
    };
    OrderVerdict {
        relation,
        holds,
        grid_size: grid,
    }
}

fn check_st(m1: &Distribution, m2: &Distribution, grid: usize) -> Verdict {
    merged_points(m1, m2, grid)
        .into_iter()
        .find(|&x| m1.cdf(x) < m2.cdf(x) - 1e-12)
        .map_or(Verdict::HoldsOnGrid, |x| {
            Verdict::Violated(Witness::Point(x))
        })
}

fn check_hr(m1: &Distribution, m2: &Distribution, grid: usize) -> Verdict {
    let mut prev: Option<f64> = None;
    for x in merged_points(m1, m2, grid) {
        let (l1, l2) = (m1.log_sf(x), m2.log_sf(x));
        let r = match (l1 == f64::NEG_INFINITY, l2 == f64::NEG_INFINITY) {
            (true, true) => continue,
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (false, false) => l2 - l1,
        };
        if let Some(p) = prev {
            if r < p - SHAPE_TOL * p.abs().max(1.0) {
                return Verdict::Violated(Witness::Point(x));
            }
        }
        prev = Some(r);
    }
    Verdict::HoldsOnGrid
}

fn check_disp(m1: &Distribution, m2: &Distribution, grid: usize) -> Verdict {
    let levels: Vec<f64> = probability_grid(grid).collect();
    let gap = |u: f64| {
        (
            m2.quantile(u) - m1.quantile(u),
            m1.quantile(u).abs().max(m2.quantile(u).abs()),
        )
    };
    for w in levels.windows(2) {
        let (d0, s0) = gap(w[0]);
        let (d1, s1) = gap(w[1]);
        if !(d0.is_finite() && d1.is_finite()) {
            return Verdict::Inconclusive(format!("quantile not finite near u = {}", w[1]));
        }
        if d1 < d0 - SHAPE_TOL * s0.max(s1).max(1.0) {
            return Verdict::Violated(Witness::Pair(w[0], w[1]));
        }
    }
    Verdict::HoldsOnGrid
}

/// `E φ(X₁) ≤ E φ(X₂)` for `φ ∈ {e^{-λx}: λ = 0.5, 1, 2}` and hinges
/// `(t - x)⁺` with `t` on the merged quantile grid.
fn check_dcx(m1: &Distribution, m2: &Distribution, grid: usize) -> Verdict {
    for lambda in [0.5, 1.0, 2.0] {
        let e1 = m1.expect(|x| (-lambda * x).exp());
        let e2 = m2.expect(|x| (-lambda * x).exp());
        match (e1, e2) {
            (Ok(a), Ok(b)) => {
                if a > b + SHAPE_TOL * a.abs().max(1.0) {
                    return Verdict::Violated(Witness::TestFunction(format!("exp(-{lambda} x)")));
                }
            }
            (Err(e), _) | (_, Err(e)) => return Verdict::Inconclusive(e.to_string()),
        }
    }
    for t in merged_points(m1, m2, grid) {
        match (hinge_expectation(m1, t), hinge_expectation(m2, t)) {
            (Ok(a), Ok(b)) => {
                if a > b + SHAPE_TOL * a.abs().max(1.0) {
                    return Verdict::Violated(Witness::TestFunction(format!(
                        "(t - x)+ at t = {t}"
                    )));
                }
            }
            (Err(e), _) | (_, Err(e)) => return Verdict::Inconclusive(e.to_string()),
        }
    }
    Verdict::HoldsOnGrid
}

/// `E (t - X)⁺ = ∫ K` up to `t`.
fn hinge_expectation(m: &Distribution, t: f64) -> Result<f64> {
    let (lo, _) = m.support();
    if t <= lo {
        return Ok(0.0);
    }
    Ok(quad(|x| m.cdf(x), lo, t, &[])?.value)
}

/// Equally spaced points across the central quantile range.
fn shape_grid(m: &Distribution) -> Vec<f64> {
    let a = m.quantile(1e-6);
    let b = m.quantile(1.0 - 1e-6);
    (0..SHAPE_GRID)
        .map(|i| a + (b - a) * (i as f64 + 0.5) / SHAPE_GRID as f64)
        .collect()
}

fn second_differences_sign(values: &[f64], convex: bool) -> bool {
    values.windows(3).all(|w| {
        let d2 = w[0] - 2.0 * w[1] + w[2];
        let tol = SHAPE_TOL * w[1].abs().max(1.0);
        if convex {
            d2 >= -tol
        } else {
            d2 <= tol
        }
    })
}

/// Decreasing failure rate: `ln K̄` convex on the grid.
pub fn is_dfr(m: &Distribution) -> bool {
    let v: Vec<f64> = shape_grid(m).iter().map(|&x| m.log_sf(x)).collect();
    v.iter().all(|x| x.is_finite()) && second_differences_sign(&v, true)
}

/// `ln k` concave on the grid.
pub fn is_log_concave(m: &Distribution) -> bool {
    let v: Vec<f64> = shape_grid(m).iter().map(|&x| m.ln_pdf(x)).collect();
    v.iter().all(|x| x.is_finite()) && second_differences_sign(&v, false)
}

/// Both measures and whether `lhs ≤ rhs` within `1e-9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn compare(
    m1: &Distribution,
    m2: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<ImplicationCheck> {
    let lhs = wfgcpe(m1, weight, gamma)?.value;
    let rhs = wfgcpe(m2, weight, gamma)?.value;
    Ok(ImplicationCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + IMPLICATION_TOL * rhs.abs().max(1.0),
    })
}

fn require_increasing(weight: &Weight) -> Result<()> {
    if !weight.monotonicity().is_increasing() {
        return Err(Error::PreconditionUnmet(format!(
            "weight {:?} is not increasing",
            weight.tag()
        )));
    }
    Ok(())
}

fn require_order(m1: &Distribution, m2: &Distribution, relation: OrderRelation) -> Result<()> {
    let v = check_order(m1, m2, relation, PRECONDITION_GRID);
    if !v.holds_on_grid() {
        return Err(Error::PreconditionUnmet(format!(
            "{} order does not hold: {:?}",
            relation.name(),
            v.holds
        )));
    }
    Ok(())
}

/// `X₁ ≤_disp X₂` with increasing `ψ` gives `CPE(X₁) ≤ CPE(X₂)`.
pub fn dispersive_implies_wfgcpe_order(
    m1: &Distribution,
    m2: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<ImplicationCheck> {
    require_increasing(weight)?;
    require_order(m1, m2, OrderRelation::Disp)?;
    compare(m1, m2, weight, gamma)
}

/// `X₁ ≤_hr X₂` with one of them DFR gives `CPE(X₁) ≤ CPE(X₂)`; the
/// argument passes through the dispersive case, so `ψ` must increase.
pub fn hr_dfr_implies_wfgcpe_order(
    m1: &Distribution,
    m2: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<ImplicationCheck> {
    require_increasing(weight)?;
    require_order(m1, m2, OrderRelation::Hr)?;
    if !(is_dfr(m1) || is_dfr(m2)) {
        return Err(Error::PreconditionUnmet(
            "neither model is DFR on the grid".into(),
        ));
    }
    compare(m1, m2, weight, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueReport {
    /// `CPE(X₁)`.
    pub lhs: f64,
    /// `E[τ₁(X₂)]`.
    pub expected_tau_x2: f64,
    /// `E[τ₁'(V)]`.
    pub expected_tau_prime_v: f64,
    /// `E(X₁) - E(X₂)`.
    pub mean_gap: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `CPE(X₁) ≥ E[τ₁(X₂)]`, reported when `X₁ ≤_st X₂`.
    pub lower_bound_holds: Option<bool>,
}

/// `CPE(X₁) = E[τ₁(X₂)] + E[τ₁'(V)] (E X₁ - E X₂)` with
/// `k_V = (K̄₂ - K̄₁)/(E X₂ - E X₁)`.
///
/// The identity needs the pair to be comparable in the usual stochastic
/// order in either direction; the lower bound needs `X₁ ≤_st X₂`.
pub fn mean_value_identity(
    m1: &Distribution,
    m2: &Distribution,
    weight: &Weight,
    gamma: FractionalOrder,
) -> Result<MeanValueReport> {
    let forward = check_order(m1, m2, OrderRelation::St, PRECONDITION_GRID).holds_on_grid();
    if !forward && !check_order(m2, m1, OrderRelation::St, PRECONDITION_GRID).holds_on_grid() {
        return Err(Error::PreconditionUnmet(
            "models are not ordered in st".into(),
        ));
    }
    let mu1 = m1.mean()?;
    let mu2 = m2.mean()?;
    let gap = mu1 - mu2;
    if gap.abs() <= 1e-12 * mu1.abs().max(mu2.abs()).max(1.0) {
        return Err(Error::PreconditionUnmet(format!("equal means {mu1}")));
    }
    let lhs = wfgcpe(m1, weight, gamma)?.value;
    let expected_tau_x2 = expected_tau_under(m1, m2, weight, gamma)?;
    let (lo1, hi1) = m1.support();
    let (lo2, hi2) = m2.support();
    let (lo, hi) = (lo1.min(lo2), hi1.max(hi2));
    let density_v = |x: f64| (m1.cdf(x) - m2.cdf(x)) / (mu2 - mu1);
    let tail = if hi.is_finite() {
        EndpointHint::LogAtHi
    } else {
        EndpointHint::DecayAtInfinity(TailMap::Reciprocal)
    };
    let expected_tau_prime_v = quad(
        |x| {
            let kv = density_v(x);
            if kv == 0.0 {
                0.0
            } else {
                tau_derivative(m1, weight, gamma, x) * kv
            }
        },
        lo,
        hi,
        &[EndpointHint::LogAtLo, tail],
    )?
    .value;
    let rhs = expected_tau_x2 + expected_tau_prime_v * gap;
    Ok(MeanValueReport {
        lhs,
        expected_tau_x2,
        expected_tau_prime_v,
        mean_gap: gap,
        rhs,
        residual: lhs - rhs,
        lower_bound_holds: forward.then_some(lhs >= expected_tau_x2 - IMPLICATION_TOL),
    })
}
