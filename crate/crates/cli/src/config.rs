//! Tolerances and other defaults. Core routines take these as arguments.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

pub const DEFAULT_TOL: &str = "1e-9";
pub const TOL_ENV: &str = "RELSHAPE_TOL";
/// Bisection width for the threshold maximiser in `verify`.
pub const THRESHOLD_TOL: f64 = 1e-12;
pub const DEFAULT_SAMPLES: usize = 501;
/// Significant digits in reports and in CSV output.
pub const REPORT_DIGITS: usize = 10;
pub const CSV_DIGITS: usize = 12;
pub const MONTE_CARLO_TRIALS: u64 = 100_000;

/// A positive root-isolation tolerance, written as a decimal (`1e-9`) or
/// a fraction (`1/1000000000`).
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerance(pub BigRational);

impl FromStr for Tolerance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in {s:?}"));
            }
            BigRational::new(n, d)
        } else {
            let x: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
            BigRational::from_float(x).ok_or_else(|| format!("not a finite number: {s:?}"))?
        };
        if !value.is_positive() {
            return Err(format!("tolerance must be positive, got {s:?}"));
        }
        Ok(Tolerance(value))
    }
}
