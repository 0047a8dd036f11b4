//! Real root isolation on the open unit interval with Sturm sequences.
//!
//! The polynomial is split into square-free factors of known multiplicity
//! (Yun). Each factor is isolated separately, then overlapping intervals
//! from different factors are refined until they are disjoint, so every
//! reported interval holds exactly one distinct root of the polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{to_f64, Poly};

/// A root isolated in `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootRecord {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub hi: BigRational,
    /// The root itself when it was hit exactly during bisection.
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub exact: Option<BigRational>,
    pub multiplicity: u32,
}

impl RootRecord {
    /// Odd multiplicity: the polynomial changes sign here.
    pub fn sign_change(&self) -> bool {
        self.multiplicity % 2 == 1
    }

    pub fn midpoint(&self) -> BigRational {
        match &self.exact {
            Some(x) => x.clone(),
            None => (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)),
        }
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Sturm sequence of a square-free polynomial, each member scaled to a
/// primitive integer polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    seq: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.primitive()];
        let d = p.derivative().primitive();
        if !d.is_zero() {
            seq.push(d);
            loop {
                let k = seq.len();
                let r = seq[k - 2].rem(&seq[k - 1]);
                if r.is_zero() {
                    break;
                }
                seq.push((-&r).primitive());
            }
        }
        Self { seq }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in &self.seq {
            let v = s.sign_at(x);
            if v != 0 {
                if last != 0 && v != last {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn mid(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) * half()
}

/// Distinct roots of a square-free `q` strictly inside `(a, b)`, where `q`
/// does not vanish at `a` or `b`. Intervals are isolating but unrefined.
fn isolate_square_free(q: &Poly, a: BigRational, b: BigRational) -> Vec<RootRecord> {
    let sturm = SturmSequence::new(q);
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone(), sturm.count(&a, &b))];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(RootRecord {
                lo,
                hi,
                exact: None,
                multiplicity: 1,
            }),
            _ => {
                let m = mid(&lo, &hi);
                if q.sign_at(&m) == 0 {
                    let (rec, left, right) = exact_root_interval(&sturm, q, &lo, &hi, m);
                    let lc = sturm.count(&lo, &left);
                    let rc = sturm.count(&right, &hi);
                    out.push(rec);
                    stack.push((lo, left, lc));
                    stack.push((right, hi, rc));
                } else {
                    let lc = sturm.count(&lo, &m);
                    stack.push((m.clone(), hi, count - lc));
                    stack.push((lo, m, lc));
                }
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Small interval around an exact root `m` of `q` inside `(lo, hi)` that
/// isolates it and whose endpoints are not roots.
fn exact_root_interval(
    sturm: &SturmSequence,
    q: &Poly,
    lo: &BigRational,
    hi: &BigRational,
    m: BigRational,
) -> (RootRecord, BigRational, BigRational) {
    let mut delta = (hi - lo) * half() * half();
    loop {
        let l = &m - &delta;
        let r = &m + &delta;
        if q.sign_at(&l) != 0 && q.sign_at(&r) != 0 && sturm.count(&l, &r) == 1 {
            let rec = RootRecord {
                lo: l.clone(),
                hi: r.clone(),
                exact: Some(m),
                multiplicity: 1,
            };
            return (rec, l, r);
        }
        delta *= half();
    }
}

/// One bisection step on an isolating interval of a square-free factor.
fn bisect(q: &Poly, rec: &mut RootRecord) {
    if rec.exact.is_some() {
        let quarter = rec.width() * half() * half();
        let x = rec.exact.clone().unwrap();
        rec.lo = &x - &quarter;
        rec.hi = &x + &quarter;
        return;
    }
    let m = rec.midpoint();
    let sm = q.sign_at(&m);
    if sm == 0 {
        rec.exact = Some(m);
        bisect(q, rec);
    } else if sm == q.sign_at(&rec.lo) {
        rec.lo = m;
    } else {
        rec.hi = m;
    }
}

/// Isolate the distinct real roots of `poly` in the open interval `(0, 1)`
/// and refine each isolating interval to width below `tol`.
pub fn isolate_roots(poly: &Poly, tol: &BigRational) -> Result<Vec<RootRecord>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if *tol <= BigRational::zero() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let zero = BigRational::zero();
    let one = BigRational::one();
    let x = Poly::x();
    let x_minus_one = Poly::linear_root(&one);

    let mut found: Vec<(RootRecord, Poly)> = Vec::new();
    for (mut q, m) in poly.square_free_decomposition() {
        if q.sign_at(&zero) == 0 {
            q = q.exact_div(&x);
        }
        if q.sign_at(&one) == 0 {
            q = q.exact_div(&x_minus_one);
        }
        if q.degree().unwrap_or(0) == 0 {
            continue;
        }
        for mut rec in isolate_square_free(&q, zero.clone(), one.clone()) {
            rec.multiplicity = m;
            found.push((rec, q.clone()));
        }
    }

    found.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
    // Separate intervals coming from different factors.
    loop {
        let mut overlapped = false;
        for i in 1..found.len() {
            if found[i].0.lo <= found[i - 1].0.hi {
                overlapped = true;
                let (left, right) = found.split_at_mut(i);
                let (a, qa) = &mut left[i - 1];
                let (b, qb) = &mut right[0];
                if a.width() >= b.width() {
                    bisect(qa, a);
                } else {
                    bisect(qb, b);
                }
            }
        }
        if !overlapped {
            break;
        }
        found.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
    }

    let mut out = Vec::with_capacity(found.len());
    for (mut rec, q) in found {
        while rec.width() >= *tol {
            bisect(&q, &mut rec);
        }
        out.push(rec);
    }
    Ok(out)
}

/// Number of distinct roots in `(0, 1)` (no refinement).
pub fn count_roots_in_unit_interval(poly: &Poly) -> Result<usize> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut sf = poly.square_free_part();
    let zero = BigRational::zero();
    let one = BigRational::one();
    if sf.sign_at(&zero) == 0 {
        sf = sf.exact_div(&Poly::x());
    }
    if sf.sign_at(&one) == 0 {
        sf = sf.exact_div(&Poly::linear_root(&one));
    }
    Ok(SturmSequence::new(&sf).count(&zero, &one))
}
