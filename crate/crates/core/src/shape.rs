//! Shape of a reliability curve on `(0, 1)`.
//!
//! Everything here is decided with exact arithmetic. Roots come from
//! [`isolate_roots`]; the sign of a polynomial between two isolated roots is
//! read at a rational point in the gap, and the sign next to an endpoint from
//! the lowest-order term of the expansion around that endpoint.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::polynomial::{sign, Poly};
use crate::reliability::{d_coefficients_rational, ReliabilityPoly};
use crate::roots::{isolate_roots, RootRecord};

/// Maximum of `(r - 1) / (2r + 1 + (r - 1) e^r)`; sparse graphs with
/// `m <= 0.0851 n^2` decrease somewhere on `(0, 1)`.
pub const SPARSE_DENSITY_NUM: u64 = 851;
pub const SPARSE_DENSITY_DEN: u64 = 10_000;
/// Rational stand-in for the maximiser, `1.729474372`.
pub const R_HAT_NUM: u64 = 1_729_474_372;
pub const R_HAT_DEN: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ShapeClass {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "S")]
    S,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "M")]
    M,
    #[serde(rename = "monotone-no-interior-fixed-point")]
    MonotoneNoInteriorFixedPoint,
    #[serde(rename = "other")]
    Other,
}

impl ShapeClass {
    pub const ALL: [ShapeClass; 6] = [
        ShapeClass::Identity,
        ShapeClass::S,
        ShapeClass::N,
        ShapeClass::M,
        ShapeClass::MonotoneNoInteriorFixedPoint,
        ShapeClass::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ShapeClass::Identity => "identity",
            ShapeClass::S => "S",
            ShapeClass::N => "N",
            ShapeClass::M => "M",
            ShapeClass::MonotoneNoInteriorFixedPoint => "monotone-no-interior-fixed-point",
            ShapeClass::Other => "other",
        }
    }
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// End of a decrease interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Boundary {
    Zero,
    One,
    Root(RootRecord),
}

impl Boundary {
    pub fn lo(&self) -> BigRational {
        match self {
            Boundary::Zero => BigRational::zero(),
            Boundary::One => BigRational::one(),
            Boundary::Root(r) => r.lo.clone(),
        }
    }

    pub fn hi(&self) -> BigRational {
        match self {
            Boundary::Zero => BigRational::zero(),
            Boundary::One => BigRational::one(),
            Boundary::Root(r) => r.hi.clone(),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Boundary::Zero => 0.0,
            Boundary::One => 1.0,
            Boundary::Root(r) => r.approx(),
        }
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, Boundary::Root(_))
    }
}

/// Maximal open interval on which the curve strictly decreases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecreaseInterval {
    pub start: Boundary,
    pub end: Boundary,
}

impl DecreaseInterval {
    pub fn approx_length(&self) -> f64 {
        self.end.approx() - self.start.approx()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub n: usize,
    /// `f(1) = 1`, which for graphs means connected.
    pub connected: bool,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub deriv_at_0: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub deriv_at_1: BigRational,
    pub decrease_intervals: Vec<DecreaseInterval>,
    /// Every root of `f'` in `(0, 1)`, with multiplicity.
    pub stationary_points: Vec<RootRecord>,
    /// Roots of `f''` where it changes sign.
    pub inflections: Vec<RootRecord>,
    /// Roots of `f(p) - p` where it changes sign.
    pub fixed_points: Vec<RootRecord>,
    /// Roots of `f(p) - p` of even multiplicity.
    pub tangential_fixed_points: Vec<RootRecord>,
    pub concave_down_near_0: bool,
    /// Sign of `f''` just below `p = 1`.
    pub concavity_near_1: i8,
    pub class: ShapeClass,
}

impl ShapeReport {
    pub fn has_decrease(&self) -> bool {
        !self.decrease_intervals.is_empty()
    }
}

/// Sign of `p` on `(0, ε)` for small `ε`; zero only for the zero polynomial.
pub fn sign_near_zero(p: &Poly) -> i8 {
    p.coeffs().iter().map(sign).find(|&s| s != 0).unwrap_or(0)
}

/// `p(1 - x)`.
fn reflect(p: &Poly) -> Poly {
    let q = Poly::one_minus_x();
    p.coeffs().iter().rev().fold(Poly::zero(), |acc, c| {
        &(&acc * &q) + &Poly::constant(c.clone())
    })
}

/// Sign of `p` on `(1 - ε, 1)` for small `ε`.
pub fn sign_near_one(p: &Poly) -> i8 {
    sign_near_zero(&reflect(p))
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

/// Signs of `p` on the gaps `(0, r_1), (r_1, r_2), …, (r_k, 1)` cut out by
/// all of its roots in `(0, 1)`.
fn gap_signs(p: &Poly, roots: &[RootRecord]) -> Vec<i8> {
    let mut out = Vec::with_capacity(roots.len() + 1);
    out.push(sign_near_zero(p));
    for w in roots.windows(2) {
        let x = (&w[0].hi + &w[1].lo) / two();
        out.push(p.sign_at(&x));
    }
    if !roots.is_empty() {
        out.push(sign_near_one(p));
    }
    out
}

fn decrease_intervals(f1: &Poly, roots: &[RootRecord]) -> Vec<DecreaseInterval> {
    let signs = gap_signs(f1, roots);
    let boundary = |i: usize| -> Boundary {
        // Gap i runs from root i - 1 to root i.
        if i == 0 {
            Boundary::Zero
        } else if i > roots.len() {
            Boundary::One
        } else {
            Boundary::Root(roots[i - 1].clone())
        }
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < signs.len() {
        if signs[i] < 0 {
            let start = i;
            while i + 1 < signs.len() && signs[i + 1] < 0 {
                i += 1;
            }
            out.push(DecreaseInterval {
                start: boundary(start),
                end: boundary(i + 1),
            });
        }
        i += 1;
    }
    out
}

fn roots_or_empty(p: &Poly, tol: &BigRational) -> Result<Vec<RootRecord>> {
    if p.is_zero() {
        Ok(Vec::new())
    } else {
        isolate_roots(p, tol)
    }
}

/// Shape report of a reliability polynomial; roots are refined below `tol`.
pub fn analyze(rel: &ReliabilityPoly, tol: &BigRational) -> Result<ShapeReport> {
    let f = rel.poly();
    let n = rel.order();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let f1 = rel.derivative();
    let f2 = rel.second_derivative();
    let g = f - &Poly::x();

    let stationary_points = roots_or_empty(&f1, tol)?;
    let decrease = decrease_intervals(&f1, &stationary_points);
    let inflections: Vec<RootRecord> = roots_or_empty(&f2, tol)?
        .into_iter()
        .filter(RootRecord::sign_change)
        .collect();
    let (fixed_points, tangential): (Vec<RootRecord>, Vec<RootRecord>) = roots_or_empty(&g, tol)?
        .into_iter()
        .partition(RootRecord::sign_change);

    // f'' = Σ d_k p^(k-1) (1-p)^(n-k-1): the first nonzero d_k fixes the
    // sign near 0 and the last nonzero one the sign near 1.
    let d = d_coefficients_rational(&rel.c_form());
    let first_d = d.iter().map(sign).find(|&s| s != 0).unwrap_or(0);
    let last_d = d.iter().rev().map(sign).find(|&s| s != 0).unwrap_or(0);

    let mut report = ShapeReport {
        n,
        connected: f.eval(&one) == one,
        deriv_at_0: f1.eval(&zero),
        deriv_at_1: f1.eval(&one),
        decrease_intervals: decrease,
        stationary_points,
        inflections,
        fixed_points,
        tangential_fixed_points: tangential,
        concave_down_near_0: first_d < 0,
        concavity_near_1: last_d,
        class: ShapeClass::Other,
    };
    report.class = classify(&report, g.is_zero(), sign_near_zero(&g));
    Ok(report)
}

pub fn analyze_graph(g: &Graph, tol: &BigRational) -> Result<ShapeReport> {
    analyze(&ReliabilityPoly::of_graph(g)?, tol)
}

/// `sign_above_zero` is the sign of `f(p) - p` just right of zero.
fn classify(r: &ShapeReport, is_identity: bool, sign_above_zero: i8) -> ShapeClass {
    let intervals = &r.decrease_intervals;
    if is_identity {
        ShapeClass::Identity
    } else if r.connected
        && intervals.is_empty()
        && r.fixed_points.len() == 1
        && r.tangential_fixed_points.is_empty()
        && sign_above_zero < 0
    {
        ShapeClass::S
    } else if intervals.len() == 2 {
        ShapeClass::M
    } else if r.connected
        && intervals.len() == 1
        && intervals[0].start.is_interior()
        && intervals[0].end.is_interior()
    {
        ShapeClass::N
    } else if intervals.is_empty()
        && r.fixed_points.is_empty()
        && r.tangential_fixed_points.is_empty()
    {
        ShapeClass::MonotoneNoInteriorFixedPoint
    } else {
        ShapeClass::Other
    }
}

/// `f'(r̂ / n)` for graphs sparse enough that it must be negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseDecreaseCheck {
    pub n: usize,
    pub m: usize,
    /// `m <= 0.0851 n^2` and `n >= 2`.
    pub applicable: bool,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub p: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub derivative: BigRational,
    pub negative: bool,
}

pub fn check_sparse_decrease(g: &Graph, rel: &ReliabilityPoly) -> SparseDecreaseCheck {
    let n = g.order();
    let m = g.size();
    let applicable =
        n >= 2 && (m as u64) * SPARSE_DENSITY_DEN <= SPARSE_DENSITY_NUM * (n * n) as u64;
    let p = BigRational::new(
        BigInt::from(R_HAT_NUM),
        BigInt::from(R_HAT_DEN) * BigInt::from(n.max(1)),
    );
    let derivative = rel.derivative().eval(&p);
    let negative = derivative.is_negative();
    SparseDecreaseCheck {
        n,
        m,
        applicable,
        p,
        derivative,
        negative,
    }
}

/// `(r - 1) / (2r + 1 + (r - 1) e^r)`.
pub fn threshold_function(r: f64) -> f64 {
    (r - 1.0) / (2.0 * r + 1.0 + (r - 1.0) * r.exp())
}

/// Maximiser of [`threshold_function`] on `(1, 3)` and the maximum.
///
/// The derivative has the sign of `3 - (r - 1)^2 e^r`, which is decreasing
/// on the interval, so its zero is found by bisection to width `tol`.
pub fn maximize_threshold_constant(tol: f64) -> Result<(f64, f64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let g = |r: f64| 3.0 - (r - 1.0).powi(2) * r.exp();
    let (mut lo, mut hi) = (1.0f64, 3.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok((r, threshold_function(r)))
}

/// Evaluation of `f` at `1 / Δ^2` for a 2-connected graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointWitness {
    pub two_connected: bool,
    pub max_degree: usize,
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub p: Option<BigRational>,
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub value: Option<BigRational>,
    /// `f(1/Δ^2) < 1/Δ^2`.
    pub below_identity: bool,
    /// With `f'(0) = n >= 2` and `f'(1) = 0` (no cut vertices), a value
    /// below the identity forces two crossings of `p`.
    pub certifies_two_fixed_points: bool,
}

pub fn check_fixed_point_witness(g: &Graph, rel: &ReliabilityPoly) -> FixedPointWitness {
    let two_connected = g.is_two_connected();
    let delta = g.max_degree();
    if !two_connected || delta < 2 {
        return FixedPointWitness {
            two_connected,
            max_degree: delta,
            p: None,
            value: None,
            below_identity: false,
            certifies_two_fixed_points: false,
        };
    }
    let p = BigRational::new(BigInt::one(), BigInt::from(delta * delta));
    let value = rel.eval_exact(&p);
    let below = value < p;
    let f1 = rel.derivative();
    let slopes = f1.eval(&BigRational::zero()) > BigRational::one()
        && f1.eval(&BigRational::one()).is_zero();
    FixedPointWitness {
        two_connected,
        max_degree: delta,
        p: Some(p),
        value: Some(value),
        below_identity: below,
        certifies_two_fixed_points: below && slopes,
    }
}
