//! Published numerical tables reproduced by the CLI and the acceptance
//! harness, transcribed at their printed precision.

/// Orders shared by the blood cancer table.
pub const TABLE3_GAMMAS: [f64; 5] = [0.25, 0.5, 0.75, 1.5, 2.75];

/// Blood cancer WFGCPE, rows by [`TABLE3_GAMMAS`], columns `ψ = √x, x, x²`.
pub const TABLE3: [[f64; 3]; 5] = [
    [24004.3, 881460.0, 1.27542e9],
    [20065.8, 707724.0, 9.59358e8],
    [16858.4, 570814.0, 7.23578e8],
    [10279.3, 309581.0, 3.22149e8],
    [4489.63, 114320.0, 8.89639e7],
];

/// One cell of the moment table for `K(x) = x²`, `ψ = x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCell {
    pub gamma: f64,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
}

const fn cell(gamma: f64, n: usize, mean: f64, variance: f64) -> MomentCell {
    MomentCell {
        gamma,
        n,
        mean,
        variance,
    }
}

pub const TABLE4: [MomentCell; 20] = [
    cell(0.25, 5, 0.153878, 0.004609),
    cell(0.25, 10, 0.181591, 0.003434),
    cell(0.25, 15, 0.191238, 0.002627),
    cell(0.25, 30, 0.200941, 0.001507),
    cell(0.25, 50, 0.204774, 0.000956),
    cell(0.5, 5, 0.135721, 0.003395),
    cell(0.5, 10, 0.156472, 0.002416),
    cell(0.5, 15, 0.163420, 0.001822),
    cell(0.5, 30, 0.170268, 0.001034),
    cell(0.5, 50, 0.172941, 0.000653),
    cell(0.75, 5, 0.116302, 0.002472),
    cell(0.75, 10, 0.132732, 0.001734),
    cell(0.75, 15, 0.138160, 0.001304),
    cell(0.75, 30, 0.143500, 0.000738),
    cell(0.75, 50, 0.145593, 0.000466),
    cell(1.5, 5, 0.066611, 0.000968),
    cell(1.5, 10, 0.077849, 0.000712),
    cell(1.5, 15, 0.081549, 0.000538),
    cell(1.5, 30, 0.085119, 0.000306),
    cell(1.5, 50, 0.086481, 0.000194),
];
