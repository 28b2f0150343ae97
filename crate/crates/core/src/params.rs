use serde::{Deserialize, Serialize};

/// Tunable constants of the pipeline. Every asymptotic constant the
/// construction needs is pinned here and reported in run artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Per-cell weight bound factor for point partitions: a sign cell may
    /// hold at most `c_cell * total / r`.
    pub c_cell: u64,
    /// Degree bound factor: `deg(product) <= c_deg * r^(1/d)`.
    pub c_deg: u64,
    /// Sampling constant `c` in `p = c * D^2 / n`.
    pub c_sample: u64,
    /// Per-cell curve bound factor: every final cell meets at most
    /// `a_cut * n / D^2` curves.
    pub a_cut: u64,
    /// Reporting constant for unsplit visibility weight in unacceptable cells
    /// (`c_vis * n^2 / D^4`).
    pub c_vis: u64,
    /// Boundary-crossing constant (`c_bnd * n * D * log2(D+1)^3`).
    pub c_bnd: u64,
    /// Dissection retries before giving up.
    pub retry_budget: usize,
    /// Resamples per cell before the sampling probability is doubled.
    pub resample_budget: usize,
    /// Largest degree of a single dissecting polynomial.
    pub max_factor_degree: u32,
    /// Sample points are snapped to this many binary digits after the point
    /// before the interpolation fit.
    pub snap_bits: u32,
    /// Coefficients of fitted polynomials are rounded to this many bits.
    pub coeff_bits: u32,
    /// Place second-type cuts only where the critical point lies below the
    /// line (otherwise at every crossing with the discriminant curve).
    #[serde(default = "yes")]
    pub type2_below_only: bool,
}

fn yes() -> bool {
    true
}

impl Default for Params {
    fn default() -> Self {
        Self {
            c_cell: 4,
            c_deg: 4,
            c_sample: 1,
            a_cut: 4,
            c_vis: 8,
            c_bnd: 1,
            retry_budget: 64,
            resample_budget: 16,
            max_factor_degree: 8,
            snap_bits: 12,
            coeff_bits: 24,
            type2_below_only: true,
        }
    }
}

impl Params {
    /// `a_cut * n / D^2`, rounded down, at least 1.
    pub fn cell_curve_bound(&self, n: usize, d: u32) -> usize {
        let dd = (d.max(1) as u64).pow(2);
        ((self.a_cut * n as u64) / dd).max(1) as usize
    }
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Number of first-stage rounds for parameter `d`: `4 * ceil(log2 d)`.
pub fn first_stage_rounds(d: u32) -> u32 {
    4 * ceil_log2(d as u64)
}

/// `log2(d + 1)^3`.
pub fn log3_factor(d: u32) -> f64 {
    ((d as f64) + 1.0).log2().powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds() {
        assert_eq!(first_stage_rounds(1), 0);
        assert_eq!(first_stage_rounds(2), 4);
        assert_eq!(first_stage_rounds(3), 8);
        assert_eq!(first_stage_rounds(4), 8);
        assert_eq!(first_stage_rounds(5), 12);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn curve_bound() {
        let p = Params::default();
        assert_eq!(p.cell_curve_bound(500, 4), 125);
        assert_eq!(p.cell_curve_bound(1, 4), 1);
    }
}
