//! Adaptive Gauss–Kronrod integration with declared endpoint transforms.
//!
//! Every analytic evaluation in the crate goes through [`integrate`]. The
//! integrand declares its domain `(lo, hi)` (with `hi` possibly `+inf`) and a
//! list of [`EndpointHint`]s; each hint selects a change of variables that
//! removes or flattens the corresponding endpoint behaviour before the
//! globally adaptive bisection starts:
//!
//! | hint | substitution |
//! |---|---|
//! | `LogAtLo` | `x = lo + L·exp(1 - 1/r)`, `r ∈ (0, 1]` |
//! | `LogAtHi` | mirror image of `LogAtLo` |
//! | `AlgebraicAtLo(β)` | `x = lo + L·w^{1/(1+β)}`, absorbs `(x - lo)^β` |
//! | `DecayAtInfinity(Reciprocal)` | `x = A + 1/t - 1`, `t ∈ (0, 1]` |
//! | `DecayAtInfinity(Exponential)` | `x = A - ln t`, `t ∈ (0, 1]` |
//!
//! An infinite upper limit always gets a tail map (reciprocal unless declared
//! otherwise). When both ends carry a transform the domain is split and the
//! pieces share one error budget.

mod gamma;
mod kronrod;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub(crate) use gamma::ln_gamma_pos;
pub use gamma::{gamma, log_gamma};
use kronrod::gk21;

use crate::error::{Error, Result};

/// Subdivision budget before giving up.
pub const MAX_INTERVALS: usize = 1 << 16;

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailMap {
    #[default]
    Reciprocal,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointHint {
    LogAtLo,
    LogAtHi,
    /// The integrand behaves like `(x - lo)^β` with `β > -1`.
    AlgebraicAtLo(f64),
    DecayAtInfinity(TailMap),
}

/// A real function on an open interval plus hints about its endpoints.
pub struct Integrand<F> {
    f: F,
    lo: f64,
    hi: f64,
    hints: Vec<EndpointHint>,
}

impl<F: Fn(f64) -> f64> Integrand<F> {
    pub fn new(f: F, lo: f64, hi: f64) -> Self {
        Integrand {
            f,
            lo,
            hi,
            hints: Vec::new(),
        }
    }

    pub fn with_hint(mut self, hint: EndpointHint) -> Self {
        self.hints.push(hint);
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn hints(&self) -> &[EndpointHint] {
        &self.hints
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

/// Integrates `f` over its declared domain.
///
/// Convergence means the summed Kronrod-minus-Gauss error estimate is at most
/// `max(abs_tol, rel_tol·|value|)`. Exhausting [`MAX_INTERVALS`], or hitting
/// a non-finite integrand value, yields [`Error::NonConvergence`] carrying the
/// partial estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &Integrand<F>,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if !(abs_tol > 0.0 && rel_tol > 0.0) {
        return Err(Error::domain("tolerances must be positive"));
    }
    let (lo, hi) = (f.lo, f.hi);
    if !lo.is_finite() || lo < 0.0 {
        return Err(Error::domain(format!(
            "lower limit must be finite and >= 0, got {lo}"
        )));
    }
    if hi.is_nan() || lo >= hi {
        return Err(Error::domain(format!("empty domain ({lo}, {hi})")));
    }
    let segments = plan_segments(&f.f, lo, hi, &f.hints)?;
    adaptive(segments, abs_tol, rel_tol, MAX_INTERVALS)
}

/// Shorthand used throughout the crate: default tolerances.
pub(crate) fn quad<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    hints: &[EndpointHint],
) -> Result<QuadratureResult> {
    let mut integrand = Integrand::new(f, lo, hi);
    integrand.hints.extend_from_slice(hints);
    integrate(&integrand, DEFAULT_ABS_TOL, DEFAULT_REL_TOL)
}

type Mapped<'a> = Box<dyn Fn(f64) -> f64 + 'a>;

struct Segment<'a> {
    f: Mapped<'a>,
    a: f64,
    b: f64,
}

fn times(jac: f64, fx: f64) -> f64 {
    // zero integrand wins over an overflowing jacobian
    if fx == 0.0 {
        0.0
    } else {
        fx * jac
    }
}

fn plan_segments<'a>(
    f: &'a dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    hints: &[EndpointHint],
) -> Result<Vec<Segment<'a>>> {
    let mut lo_hint = None;
    let mut hi_log = false;
    let mut tail = TailMap::default();
    for h in hints {
        match *h {
            EndpointHint::LogAtLo => lo_hint = Some(EndpointHint::LogAtLo),
            EndpointHint::AlgebraicAtLo(beta) => {
                if !(beta > -1.0) {
                    return Err(Error::domain(format!(
                        "algebraic endpoint exponent must exceed -1, got {beta}"
                    )));
                }
                lo_hint = Some(EndpointHint::AlgebraicAtLo(beta));
            }
            EndpointHint::LogAtHi => hi_log = true,
            EndpointHint::DecayAtInfinity(map) => tail = map,
        }
    }

    let mut segments = Vec::new();
    if hi.is_infinite() {
        let split = if lo_hint.is_some() { lo + 1.0 } else { lo };
        if let Some(h) = lo_hint {
            segments.push(lower_segment(f, lo, split, h));
        }
        segments.push(tail_segment(f, split, tail));
    } else {
        let mid = 0.5 * (lo + hi);
        match (lo_hint, hi_log) {
            (Some(h), true) => {
                segments.push(lower_segment(f, lo, mid, h));
                segments.push(upper_log_segment(f, mid, hi));
            }
            (Some(h), false) => segments.push(lower_segment(f, lo, hi, h)),
            (None, true) => segments.push(upper_log_segment(f, lo, hi)),
            (None, false) => segments.push(Segment {
                f: Box::new(f),
                a: lo,
                b: hi,
            }),
        }
    }
    Ok(segments)
}

fn lower_segment<'a>(
    f: &'a dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    hint: EndpointHint,
) -> Segment<'a> {
    let len = hi - lo;
    match hint {
        EndpointHint::AlgebraicAtLo(beta) => {
            let p = 1.0 / (1.0 + beta);
            Segment {
                f: Box::new(move |w: f64| {
                    let x = lo + len * w.powf(p);
                    times(len * p * w.powf(p - 1.0), f(x))
                }),
                a: 0.0,
                b: 1.0,
            }
        }
        _ => Segment {
            f: Box::new(move |r: f64| {
                let e = (1.0 - 1.0 / r).exp();
                let x = lo + len * e;
                if x <= lo {
                    return 0.0;
                }
                times(len * e / (r * r), f(x))
            }),
            a: 0.0,
            b: 1.0,
        },
    }
}

fn upper_log_segment<'a>(f: &'a dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Segment<'a> {
    let len = hi - lo;
    Segment {
        f: Box::new(move |r: f64| {
            let e = (1.0 - 1.0 / r).exp();
            let x = hi - len * e;
            if x >= hi {
                return 0.0;
            }
            times(len * e / (r * r), f(x))
        }),
        a: 0.0,
        b: 1.0,
    }
}

fn tail_segment<'a>(f: &'a dyn Fn(f64) -> f64, start: f64, map: TailMap) -> Segment<'a> {
    match map {
        TailMap::Reciprocal => Segment {
            f: Box::new(move |t: f64| {
                let x = start + 1.0 / t - 1.0;
                if !x.is_finite() {
                    return 0.0;
                }
                times(1.0 / (t * t), f(x))
            }),
            a: 0.0,
            b: 1.0,
        },
        TailMap::Exponential => Segment {
            f: Box::new(move |t: f64| {
                let x = start - t.ln();
                if !x.is_finite() {
                    return 0.0;
                }
                times(1.0 / t, f(x))
            }),
            a: 0.0,
            b: 1.0,
        },
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    segment: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive(
    segments: Vec<Segment<'_>>,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadratureResult> {
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Piece> = Vec::new();
    let mut subdivisions = 0usize;

    let evaluate = |seg: usize, a: f64, b: f64| -> Result<Piece> {
        let est = gk21(&*segments[seg].f, a, b);
        if !est.finite || !est.value.is_finite() {
            return Err(Error::NonConvergence {
                value: f64::NAN,
                abs_error: f64::INFINITY,
                subdivisions: 0,
                reason: format!("integrand not finite on [{a:e}, {b:e}] of the mapped domain"),
            });
        }
        Ok(Piece {
            segment: seg,
            a,
            b,
            value: est.value,
            error: est.error,
        })
    };

    for (i, s) in segments.iter().enumerate() {
        heap.push(evaluate(i, s.a, s.b).map_err(|e| with_subdivisions(e, 0))?);
    }

    let totals = |heap: &BinaryHeap<Piece>, frozen: &[Piece]| {
        let mut v = 0.0;
        let mut e = 0.0;
        for p in heap.iter().chain(frozen.iter()) {
            v += p.value;
            e += p.error;
        }
        (v, e)
    };

    let (mut value, mut error) = totals(&heap, &frozen);
    loop {
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            // refresh running sums before declaring victory
            let (v, e) = totals(&heap, &frozen);
            value = v;
            error = e;
            if error <= abs_tol.max(rel_tol * value.abs()) {
                return Ok(QuadratureResult {
                    value,
                    abs_error_estimate: error,
                    subdivisions,
                    converged: true,
                });
            }
        }
        if heap.len() + frozen.len() >= max_intervals {
            return Err(Error::NonConvergence {
                value,
                abs_error: error,
                subdivisions,
                reason: "subdivision budget exhausted".into(),
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NonConvergence {
                value,
                abs_error: error,
                subdivisions,
                reason: "intervals reached machine resolution".into(),
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-300 {
            frozen.push(worst);
            continue;
        }
        let left = evaluate(worst.segment, worst.a, mid)
            .map_err(|e| with_subdivisions(e, subdivisions))?;
        let right = evaluate(worst.segment, mid, worst.b)
            .map_err(|e| with_subdivisions(e, subdivisions))?;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

fn with_subdivisions(e: Error, n: usize) -> Error {
    match e {
        Error::NonConvergence {
            value,
            abs_error,
            reason,
            ..
        } => Error::NonConvergence {
            value,
            abs_error,
            subdivisions: n,
            reason,
        },
        other => other,
    }
}
