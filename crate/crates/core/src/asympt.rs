//! Expected final index: exact series and the square-root growth estimate.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::series::{int, to_f64, PowerSeries, Rational};
use crate::vsubst::{closed_forms, transfer_series};
use crate::walk::{expected_end_float, expected_end_series, WalkParams};

/// Expected index after `n` double steps, exact where available.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticEstimate {
    /// Number of double steps.
    pub n: usize,
    /// `4 sqrt(ab) sqrt(n / pi)`.
    pub estimate: f64,
    /// The exact coefficient, when it was computed in rational arithmetic.
    pub exact: Option<Rational>,
    /// The coefficient from the floating-point sweep.
    pub value: f64,
}

impl AsymptoticEstimate {
    pub fn ratio(&self) -> f64 {
        self.value / self.estimate
    }
}

/// Expected index series obtained by transferring the closed form in `v`.
pub fn expected_end_exact(order: usize, p: &WalkParams) -> PowerSeries {
    transfer_series(&closed_forms(p).expected_end, order, p)
}

/// Index of the first coefficient where the transferred closed form and
/// the Markov-chain evolution disagree, if any.
pub fn expected_end_mismatch(order: usize, p: &WalkParams) -> Option<usize> {
    expected_end_exact(order, p).first_difference(&expected_end_series(order, p))
}

/// `(z - 1 + (1 + z) sqrt(1 - z)) / (2 (1 - z)^2)`, the expected index at
/// `alpha = 1/2`.
pub fn expected_end_half_closed(order: usize) -> Result<PowerSeries> {
    let one_minus_z = PowerSeries::from_poly(&[int(1), int(-1)], order);
    let num = &PowerSeries::from_poly(&[int(-1), int(1)], order)
        + &(&PowerSeries::from_poly(&[int(1), int(1)], order) * &one_minus_z.sqrt()?);
    let den = (&one_minus_z * &one_minus_z).scale(&int(2));
    num.div(&den)
}

/// `[z^n] (1 - z)^(-3/2) = prod_{k < n} (2k + 3) / (2k + 2)`.
pub fn reference_coefficient(n: usize) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..n as u64 {
        num *= 2 * k + 3;
        den *= 2 * k + 2;
    }
    Rational::new(num, den)
}

/// `4 sqrt(ab) sqrt(n / pi)` for `n` double steps.
pub fn estimate(n: usize, p: &WalkParams) -> f64 {
    4.0 * to_f64(&p.ab()).sqrt() * (n as f64 / PI).sqrt()
}

/// The estimate at `n` paired with the floating-point expected index. The
/// exact coefficient is attached when `n <= exact_limit`.
pub fn asymptotic_estimate(n: usize, p: &WalkParams, exact_limit: usize) -> AsymptoticEstimate {
    asymptotic_estimates(&[n], p, exact_limit)
        .pop()
        .expect("one entry")
}

/// [`asymptotic_estimate`] for several `n` sharing one sweep.
pub fn asymptotic_estimates(
    ns: &[usize],
    p: &WalkParams,
    exact_limit: usize,
) -> Vec<AsymptoticEstimate> {
    let max = ns.iter().copied().max().unwrap_or(0);
    let floats = expected_end_float(max, to_f64(p.alpha()));
    let exact_max = ns.iter().copied().filter(|&n| n <= exact_limit).max();
    let exact = exact_max.map(|m| expected_end_series(m, p));
    ns.iter()
        .map(|&n| AsymptoticEstimate {
            n,
            estimate: estimate(n, p),
            exact: exact
                .as_ref()
                .filter(|_| n <= exact_limit)
                .map(|s| s.coeff(n).clone()),
            value: floats[n],
        })
        .collect()
}

/// `reference_coefficient(n) / (2 sqrt(n / pi))`.
pub fn reference_ratio(n: usize) -> f64 {
    to_f64(&reference_coefficient(n)) / (2.0 * (n as f64 / PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn params(n: i64, d: i64) -> WalkParams {
        WalkParams::new(rat(n, d)).unwrap()
    }

    #[test]
    fn exact_start_at_half() {
        let s = expected_end_exact(2, &params(1, 2));
        assert_eq!(s.coeffs(), &[int(0), rat(3, 4), rat(19, 16)]);
    }

    #[test]
    fn exact_first_coefficient_at_third() {
        let s = expected_end_exact(1, &params(1, 3));
        assert_eq!(s.coeff(1), &rat(2, 3));
    }

    #[test]
    fn closed_form_matches_dp() {
        for (n, d) in [(1, 2), (1, 3), (2, 5)] {
            assert_eq!(
                expected_end_mismatch(24, &params(n, d)),
                None,
                "alpha = {n}/{d}"
            );
        }
    }

    #[test]
    fn half_closed_form_matches() {
        let h = expected_end_half_closed(24).unwrap();
        assert_eq!(h.coeffs()[..3], [int(0), rat(3, 4), rat(19, 16)]);
        assert_eq!(h, expected_end_exact(24, &params(1, 2)));
    }

    #[test]
    fn reference_coefficients() {
        assert_eq!(reference_coefficient(0), int(1));
        assert_eq!(reference_coefficient(1), rat(3, 2));
        assert_eq!(reference_coefficient(2), rat(15, 8));
    }

    #[test]
    fn estimate_scales_as_square_root() {
        let p = params(1, 3);
        assert!((estimate(400, &p) / estimate(100, &p) - 2.0).abs() < 1e-12);
        let half = params(1, 2);
        assert!((estimate(100, &half) - 2.0 * (100.0 / PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn float_sweep_agrees_with_exact() {
        let e = asymptotic_estimate(40, &params(2, 5), 40);
        let exact = to_f64(e.exact.as_ref().unwrap());
        assert!((exact - e.value).abs() < 1e-9 * exact);
    }
}
