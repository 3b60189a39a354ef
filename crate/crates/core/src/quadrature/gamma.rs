//! Log-gamma for positive reals.
//!
//! Three regimes:
//! - near the roots `x = 1` and `x = 2` a Taylor series of `ln Γ(1 + z)` in
//!   zeta values, so the result keeps full *relative* precision where
//!   `ln Γ` crosses zero;
//! - `x >= 10` the Stirling series with eight Bernoulli corrections;
//! - everything else is shifted into the Stirling range with the
//!   recurrence `Γ(x + 1) = x Γ(x)`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_8;
const STIRLING_MIN: f64 = 10.0;
const ROOT_RADIUS: f64 = 0.25;

/// ζ(k) for k = 2..=30.
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_436_472,
    1.202_056_903_159_594_285_4,
    1.082_323_233_711_138_191_516,
    1.036_927_755_143_369_926_331,
    1.017_343_061_984_449_139_715,
    1.008_349_277_381_922_826_84,
    1.004_077_356_197_944_339_379,
    1.002_008_392_826_082_214_418,
    1.000_994_575_127_818_085_337,
    1.000_494_188_604_119_464_559,
    1.000_246_086_553_308_048_299,
    1.000_122_713_347_578_489_147,
    1.000_061_248_135_058_704_829,
    1.000_030_588_236_307_020_494,
    1.000_015_282_259_408_651_872,
    1.000_007_637_197_637_899_762,
    1.000_003_817_293_264_999_84,
    1.000_001_908_212_716_553_939,
    1.000_000_953_962_033_872_796,
    1.000_000_476_932_986_787_806,
    1.000_000_238_450_502_727_733,
    1.000_000_119_219_925_965_311,
    1.000_000_059_608_189_051_259,
    1.000_000_029_803_503_514_652,
    1.000_000_014_901_554_828_365,
    1.000_000_007_450_711_789_835,
    1.000_000_003_725_334_024_788,
    1.000_000_001_862_659_723_513,
    1.000_000_000_931_327_432_42,
];

/// B_{2k} / (2k (2k - 1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural log of Γ(x) for `x > 0`.
///
/// Relative error stays below 1e-13 on `[0.1, 50]`, including the
/// neighbourhoods of 1 and 2 where the value itself vanishes.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

/// Γ(x) for `x > 0`; overflows to `+inf` above ~171.6.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// Unchecked variant for internal callers that already validated `x > 0`.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if (x - 1.0).abs() <= ROOT_RADIUS {
        return ln_gamma_1p(x - 1.0);
    }
    if (x - 2.0).abs() <= ROOT_RADIUS {
        let z = x - 2.0;
        return ln_gamma_1p(z) + z.ln_1p();
    }
    if x < ROOT_RADIUS {
        return ln_gamma_1p(x) - x.ln();
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series * inv
}

/// ln Γ(1 + z) = -γ z + Σ_{k≥2} (-1)^k ζ(k) z^k / k, valid for |z| < 1.
fn ln_gamma_1p(z: f64) -> f64 {
    let mut acc = 0.0;
    for (i, zeta) in ZETA.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if (i + 2) % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * z + sign * zeta / k;
    }
    // acc now holds Σ (-1)^k ζ(k) z^{k-2} / k
    z * (-EULER_GAMMA + z * acc)
}
