//! Node reliability polynomials.
//!
//! With `c_k` the number of connected sets of order `k`,
//!
//! ```text
//! nRel(G; p)   = Σ_{k=1}^{n} c_k p^k (1-p)^(n-k)
//! nRel'(G; p)  = Σ_{k=1}^{n} [k c_k - (n-k+1) c_{k-1}] p^(k-1) (1-p)^(n-k)
//! nRel''(G; p) = Σ_{k=1}^{n-1} d_k p^(k-1) (1-p)^(n-k-1)
//! d_k = (k+1) k c_{k+1} - 2k (n-k) c_k + (n-k+1)(n-k) c_{k-1}
//! ```
//!
//! The power basis is the working representation; the connected-set counts
//! are kept alongside when known so the forms above can be cross-checked.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::connsets::{count_connected_sets, ConnSetProfile};
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::graph::Graph;
use crate::polynomial::{int, to_f64, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityPoly {
    n: usize,
    poly: Poly,
    c_source: Option<ConnSetProfile>,
}

/// Integers `d_1..=d_{n-1}`; `values[0]` is `d_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DCoeffs {
    #[serde(serialize_with = "crate::serde_util::bigint_vec")]
    pub values: Vec<BigInt>,
}

impl DCoeffs {
    /// `d_k` for `1 <= k <= n - 1`.
    pub fn get(&self, k: usize) -> Option<&BigInt> {
        k.checked_sub(1).and_then(|i| self.values.get(i))
    }
}

fn binom_int(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

fn to_rational(c: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(c.clone()))
}

/// `p^a (1-p)^b`.
fn bernstein_term(a: usize, b: usize) -> Poly {
    &Poly::x().pow(a as u32) * &Poly::one_minus_x().pow(b as u32)
}

/// Σ coeffs[k] p^(k + shift) (1-p)^(deg - k), over the given index range.
fn expand_bernstein(coeffs: &[(usize, BigRational)], deg: usize, shift_down: usize) -> Poly {
    coeffs.iter().fold(Poly::zero(), |acc, (k, c)| {
        if c.is_zero() {
            acc
        } else {
            &acc + &bernstein_term(k - shift_down, deg - k).scale(c)
        }
    })
}

impl ReliabilityPoly {
    /// Expand `Σ c_k p^k (1-p)^(n-k)` exactly.
    pub fn from_profile(profile: &ConnSetProfile) -> Self {
        let n = profile.order();
        let coeffs: Vec<BigRational> = (0..=n)
            .map(|j| {
                // Coefficient of p^j: Σ_{k<=j} c_k C(n-k, j-k) (-1)^(j-k).
                let mut acc = BigInt::zero();
                for k in 0..=j {
                    let term = BigInt::from(profile.get(k)) * binom_int(n - k, j - k);
                    if (j - k) % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                BigRational::from_integer(acc)
            })
            .collect();
        Self {
            n,
            poly: Poly::new(coeffs),
            c_source: Some(profile.clone()),
        }
    }

    pub fn of_graph(g: &Graph) -> Result<Self> {
        Ok(Self::from_profile(&count_connected_sets(g)?))
    }

    /// Wrap an arbitrary polynomial, e.g. for classifying a curve that does
    /// not come from a graph. `n` is the nominal order (`>= degree`).
    pub fn from_poly(n: usize, poly: Poly) -> Result<Self> {
        if poly.degree().is_some_and(|d| d > n) {
            return Err(Error::InvalidArgument(format!(
                "degree {} exceeds order {n}",
                poly.degree().unwrap()
            )));
        }
        Ok(Self {
            n,
            poly,
            c_source: None,
        })
    }

    /// Closed-form reliability of a named family.
    pub fn closed_form(spec: &FamilySpec) -> Result<Self> {
        spec.validate()?;
        let q = Poly::one_minus_x;
        let x = Poly::x;
        let poly = match spec {
            // 1 - (1-p)^n
            FamilySpec::Complete { n } => &Poly::one() - &q().pow(*n as u32),
            // n p (1-p)^(n-1)
            FamilySpec::Empty { n } => (&x() * &q().pow(*n as u32 - 1)).scale(&int(*n as i64)),
            // p + (n-1) p (1-p)^(n-1)
            FamilySpec::Star { n } => {
                &x() + &(&x() * &q().pow(*n as u32 - 1)).scale(&int(*n as i64 - 1))
            }
            // (1 - (1-p)^a)(1 - (1-p)^b) + (a+b) p (1-p)^(a+b-1); for a = b this
            // is 1 - 2(1-p)^n + 2n p (1-p)^(2n-1) + (1-p)^(2n).
            FamilySpec::CompleteBipartite { a, b } => {
                let sides =
                    &(&Poly::one() - &q().pow(*a as u32)) * &(&Poly::one() - &q().pow(*b as u32));
                let single = (&x() * &q().pow((a + b - 1) as u32)).scale(&int((a + b) as i64));
                &sides + &single
            }
            // 1 - p(1-p) + p(1-p)^(n-1) - (1-p)^n
            FamilySpec::BondedCompleteLeaf { n } => {
                let n = *n as u32;
                &(&(&Poly::one() - &(&x() * &q())) + &(&x() * &q().pow(n - 1))) - &q().pow(n)
            }
            FamilySpec::Path { .. } | FamilySpec::Cycle { .. } => {
                let profile = crate::connsets::profile_closed_form(spec)?;
                return Ok(Self::from_profile(&profile).without_source());
            }
            // Connected sets of a disjoint union live in one side, so
            // nRel(G ∪ H) = nRel(G) (1-p)^|H| + nRel(H) (1-p)^|G|.
            FamilySpec::DisjointUnion { left, right } => {
                let l = Self::closed_form(left)?;
                let r = Self::closed_form(right)?;
                &(&l.poly * &q().pow(right.order() as u32))
                    + &(&r.poly * &q().pow(left.order() as u32))
            }
        };
        Ok(Self {
            n: spec.order(),
            poly,
            c_source: None,
        })
    }

    fn without_source(mut self) -> Self {
        self.c_source = None;
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn c_source(&self) -> Option<&ConnSetProfile> {
        self.c_source.as_ref()
    }

    /// Coefficient of `p^i` in the power basis.
    pub fn power_coeffs(&self) -> Vec<BigRational> {
        (0..=self.n).map(|i| self.poly.coeff(i)).collect()
    }

    /// The c-form coefficients: the stored counts if present, otherwise
    /// recovered from the power basis via `p^j = Σ_{k>=j} C(n-j, k-j) p^k (1-p)^(n-k)`.
    pub fn c_form(&self) -> Vec<BigRational> {
        if let Some(c) = &self.c_source {
            return c.counts().iter().map(to_rational).collect();
        }
        c_form_of(&self.poly, self.n)
    }

    pub fn derivative(&self) -> Poly {
        self.poly.derivative()
    }

    pub fn second_derivative(&self) -> Poly {
        self.poly.derivative().derivative()
    }

    /// First derivative rebuilt from the c-form, expanded into the power basis.
    pub fn derivative_from_c_form(&self) -> Poly {
        derivative_from_c_form(&self.c_form())
    }

    /// Second derivative rebuilt from the d-coefficients.
    pub fn second_derivative_from_c_form(&self) -> Poly {
        second_derivative_from_d(&d_coefficients_rational(&self.c_form()), self.n)
    }

    /// The formal derivatives agree with the ones rebuilt from the c-form.
    pub fn derivative_forms_agree(&self) -> bool {
        self.derivative() == self.derivative_from_c_form()
            && self.second_derivative() == self.second_derivative_from_c_form()
    }

    pub fn eval_exact(&self, p: &BigRational) -> BigRational {
        self.poly.eval(p)
    }

    pub fn sample(&self, count: usize) -> Result<Vec<(BigRational, BigRational)>> {
        sample(&self.poly, count)
    }
}

pub(crate) fn c_form_of(poly: &Poly, n: usize) -> Vec<BigRational> {
    (0..=n)
        .map(|k| {
            (0..=k).fold(BigRational::zero(), |acc, j| {
                acc + poly.coeff(j) * BigRational::from_integer(binom_int(n - j, k - j))
            })
        })
        .collect()
}

fn derivative_from_c_form(c: &[BigRational]) -> Poly {
    let n = c.len() - 1;
    let zero = BigRational::zero();
    let get = |k: usize| c.get(k).unwrap_or(&zero).clone();
    let terms: Vec<(usize, BigRational)> = (1..=n)
        .map(|k| {
            let coeff = int(k as i64) * get(k) - int((n - k + 1) as i64) * get(k - 1);
            (k, coeff)
        })
        .collect();
    // p^(k-1) (1-p)^(n-k)
    expand_bernstein(&terms, n, 1)
}

fn second_derivative_from_d(d: &[BigRational], n: usize) -> Poly {
    if n < 2 {
        return Poly::zero();
    }
    let terms: Vec<(usize, BigRational)> = d
        .iter()
        .enumerate()
        .map(|(i, v)| (i + 1, v.clone()))
        .collect();
    // p^(k-1) (1-p)^(n-1-k)
    expand_bernstein(&terms, n - 1, 1)
}

/// `d_k` for `k = 1..=n-1` from rational c-form coefficients.
pub(crate) fn d_coefficients_rational(c: &[BigRational]) -> Vec<BigRational> {
    let n = c.len() - 1;
    let zero = BigRational::zero();
    let get = |k: usize| c.get(k).unwrap_or(&zero).clone();
    (1..n)
        .map(|k| {
            int(((k + 1) * k) as i64) * get(k + 1) - int((2 * k * (n - k)) as i64) * get(k)
                + int(((n - k + 1) * (n - k)) as i64) * get(k - 1)
        })
        .collect()
}

pub fn d_coefficients(profile: &ConnSetProfile) -> DCoeffs {
    let n = profile.order();
    let c = |k: usize| BigInt::from(profile.get(k));
    let values = (1..n)
        .map(|k| {
            BigInt::from((k + 1) * k) * c(k + 1) - BigInt::from(2 * k * (n - k)) * c(k)
                + BigInt::from((n - k + 1) * (n - k)) * c(k - 1)
        })
        .collect();
    DCoeffs { values }
}

pub fn eval_exact(poly: &Poly, p: &BigRational) -> BigRational {
    poly.eval(p)
}

/// Values at `count` evenly spaced points of `[0, 1]`, endpoints included.
pub fn sample(poly: &Poly, count: usize) -> Result<Vec<(BigRational, BigRational)>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "sample count must be at least 2, got {count}"
        )));
    }
    let denom = BigInt::from(count - 1);
    Ok((0..count)
        .map(|i| {
            let p = BigRational::new(BigInt::from(i), denom.clone());
            let v = poly.eval(&p);
            (p, v)
        })
        .collect())
}

/// Floating-point samples, for plotting.
pub fn sample_f64(poly: &Poly, count: usize) -> Result<Vec<(f64, f64)>> {
    Ok(sample(poly, count)?
        .iter()
        .map(|(p, v)| (to_f64(p), to_f64(v)))
        .collect())
}

/// Value at `p = 1` is `c_n`: one for connected graphs, zero otherwise.
pub fn value_at_one(poly: &Poly) -> BigRational {
    poly.eval(&BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connsets::count_connected_sets_exhaustive;
    use crate::family::make_family;
    use crate::polynomial::rat;

    fn fam(s: &str) -> Graph {
        make_family(&s.parse().unwrap()).unwrap()
    }

    fn rel(s: &str) -> ReliabilityPoly {
        ReliabilityPoly::of_graph(&fam(s)).unwrap()
    }

    #[test]
    fn triangle_is_one_minus_cube() {
        let r = ReliabilityPoly::from_profile(&ConnSetProfile::from_u64(&[0, 3, 3, 1]).unwrap());
        assert_eq!(*r.poly(), Poly::from_ints(&[0, 3, -3, 1]));
        assert_eq!(*r.poly(), &Poly::one() - &Poly::one_minus_x().pow(3));
        assert_eq!(r.eval_exact(&rat(1, 2)), rat(7, 8));
    }

    #[test]
    fn empty_graph_formula() {
        let r = rel("empty:5");
        let expected = (&Poly::x() * &Poly::one_minus_x().pow(4)).scale(&int(5));
        assert_eq!(*r.poly(), expected);
    }

    #[test]
    fn single_vertex_is_identity() {
        assert_eq!(*rel("complete:1").poly(), Poly::x());
    }

    #[test]
    fn star_four_closed_form() {
        let r = ReliabilityPoly::closed_form(&"star:4".parse().unwrap()).unwrap();
        let expected = &Poly::x() + &(&Poly::x() * &Poly::one_minus_x().pow(3)).scale(&int(3));
        assert_eq!(*r.poly(), expected);
        assert_eq!(r.poly(), rel("star:4").poly());
    }

    #[test]
    fn bipartite_closed_form_matches_enumeration() {
        for (a, b) in [(2, 2), (3, 3), (2, 5), (1, 4)] {
            let spec = FamilySpec::CompleteBipartite { a, b };
            let g = make_family(&spec).unwrap();
            let brute =
                ReliabilityPoly::from_profile(&count_connected_sets_exhaustive(&g).unwrap());
            assert_eq!(
                ReliabilityPoly::closed_form(&spec).unwrap().poly(),
                brute.poly()
            );
        }
    }

    #[test]
    fn bipartite_equal_sides_matches_stated_expansion() {
        let n = 4u32;
        let q = Poly::one_minus_x();
        let expected = &(&(&Poly::one() - &q.pow(n).scale(&int(2)))
            + &(&Poly::x() * &q.pow(2 * n - 1)).scale(&int(2 * n as i64)))
            + &q.pow(2 * n);
        let r =
            ReliabilityPoly::closed_form(&FamilySpec::CompleteBipartite { a: 4, b: 4 }).unwrap();
        assert_eq!(*r.poly(), expected);
    }

    #[test]
    fn bonded_complete_leaf_matches_enumeration() {
        for n in 2..=10 {
            let spec = FamilySpec::BondedCompleteLeaf { n };
            assert_eq!(
                ReliabilityPoly::closed_form(&spec).unwrap().poly(),
                ReliabilityPoly::of_graph(&make_family(&spec).unwrap())
                    .unwrap()
                    .poly(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn union_closed_form() {
        let spec: FamilySpec = "union(star:12,complete:1)".parse().unwrap();
        assert_eq!(
            ReliabilityPoly::closed_form(&spec).unwrap().poly(),
            ReliabilityPoly::of_graph(&make_family(&spec).unwrap())
                .unwrap()
                .poly()
        );
    }

    #[test]
    fn endpoint_derivatives() {
        for s in ["path:6", "cycle:5", "star:5", "bonded-complete-leaf:6"] {
            let g = fam(s);
            let r = ReliabilityPoly::of_graph(&g).unwrap();
            let d = r.derivative();
            let c = r.c_source().unwrap();
            assert_eq!(d.eval(&int(0)), int(g.order() as i64), "{s}");
            let n = g.order();
            let at_one = int(n as i64) * to_rational(&c.get(n)) - to_rational(&c.get(n - 1));
            assert_eq!(d.eval(&int(1)), at_one, "{s}");
            assert_eq!(d.eval(&int(1)), int(g.cut_vertices().len() as i64), "{s}");
        }
    }

    #[test]
    fn star_second_derivative() {
        // (n-1)^2 (np - 2) (1-p)^(n-3) for n = 5.
        let expected = &Poly::from_ints(&[-2, 5]).scale(&int(16)) * &Poly::one_minus_x().pow(2);
        assert_eq!(rel("star:5").second_derivative(), expected);
    }

    #[test]
    fn complete_second_derivative() {
        let expected = Poly::one_minus_x().pow(4).scale(&int(-30));
        assert_eq!(rel("complete:6").second_derivative(), expected);
    }

    #[test]
    fn d_coefficient_identities() {
        for s in [
            "path:6",
            "cycle:7",
            "star:6",
            "complete-bipartite:2,3",
            "union(path:3,cycle:4)",
        ] {
            let g = fam(s);
            let p = count_connected_sets(&g).unwrap();
            let d = d_coefficients(&p);
            let n = g.order() as i64;
            assert_eq!(
                d.get(1).unwrap(),
                &BigInt::from(2 * g.size() as i64 - 2 * n * (n - 1)),
                "{s}"
            );
            assert!(
                ReliabilityPoly::from_profile(&p).derivative_forms_agree(),
                "{s}"
            );
        }
    }

    #[test]
    fn d_top_coefficients_for_two_connected() {
        // C_7: smallest cut has two vertices, so d_k = 0 for k > n - 1 and d_{n-1} < 0.
        let p = count_connected_sets(&fam("cycle:7")).unwrap();
        let d = d_coefficients(&p);
        assert!(d.get(6).unwrap() < &BigInt::zero());
        // K_{3,3}: l = 3, n = 6, so d_5 = 0 and d_4 < 0.
        let p = count_connected_sets(&fam("complete-bipartite:3,3")).unwrap();
        let d = d_coefficients(&p);
        assert!(d.get(5).unwrap().is_zero());
        assert!(d.get(4).unwrap() < &BigInt::zero());
    }

    #[test]
    fn d_top_for_trees() {
        // P6: r = 2, s = 2, n = 6: 2s + n(n-1) - r(2n - r - 1) = 4 + 30 - 18 = 16.
        let d = d_coefficients(&count_connected_sets(&fam("path:6")).unwrap());
        assert_eq!(d.get(5).unwrap(), &BigInt::from(16));
    }

    #[test]
    fn c_form_recovery() {
        let r = rel("cycle:6");
        let recovered = ReliabilityPoly::from_poly(6, r.poly().clone()).unwrap();
        assert_eq!(recovered.c_form(), r.c_form());
        assert!(recovered.derivative_forms_agree());
    }

    #[test]
    fn sampling() {
        let r = rel("path:6");
        let s = r.sample(11).unwrap();
        assert_eq!(s.len(), 11);
        assert_eq!(s[0], (int(0), int(0)));
        assert_eq!(s[10], (int(1), int(1)));
        assert!(r.sample(1).is_err());
        let v = r.eval_exact(&rat(1, 4));
        assert!(v > int(0) && v < int(1));
        let disconnected = rel("empty:3");
        assert_eq!(disconnected.sample(2).unwrap()[1], (int(1), int(0)));
    }

    #[test]
    fn from_poly_rejects_high_degree() {
        assert!(ReliabilityPoly::from_poly(1, Poly::from_ints(&[0, 0, 1])).is_err());
    }
}
