//! Counting connected induced vertex subsets by cardinality.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::graph::{full_mask, Graph};

/// Largest order handled by [`count_connected_sets`].
pub const MAX_ENUMERATION_ORDER: usize = 30;
/// Largest order handled by [`count_connected_sets_exhaustive`].
pub const MAX_EXHAUSTIVE_ORDER: usize = 20;

/// Counts `c_0..=c_n` of connected vertex subsets of each cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnSetProfile {
    n: usize,
    #[serde(serialize_with = "crate::serde_util::biguint_vec")]
    c: Vec<BigUint>,
}

impl ConnSetProfile {
    /// Build from explicit counts; `c` must have length `n + 1`.
    pub fn new(c: Vec<BigUint>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidArgument("profile needs at least c_0".into()));
        }
        Ok(Self { n: c.len() - 1, c })
    }

    pub fn from_u64(c: &[u64]) -> Result<Self> {
        Self::new(c.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.c
    }

    /// `c_k`, zero outside `0..=n`.
    pub fn get(&self, k: usize) -> BigUint {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.c.iter().sum()
    }

    /// `F_k = c_{n-k}` for `k = 0..=n`.
    pub fn f_coefficients(&self) -> Vec<BigUint> {
        self.c.iter().rev().cloned().collect()
    }
}

/// Count connected sets by extending each connected set one neighbour at a
/// time; every connected set is visited exactly once.
pub fn count_connected_sets(g: &Graph) -> Result<ConnSetProfile> {
    let n = g.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::Unsupported(format!(
            "connected-set enumeration is limited to order {MAX_ENUMERATION_ORDER}, got {n}; \
             use a family closed form"
        )));
    }
    let mut counts = vec![0u64; n + 1];
    for v in 0..n {
        // Sets whose smallest vertex is v: vertices below v are forbidden.
        let forbidden = full_mask(v);
        extend(
            g,
            1 << v,
            g.neighbors(v) & !forbidden,
            forbidden,
            &mut counts,
        );
    }
    ConnSetProfile::new(counts.into_iter().map(BigUint::from).collect())
}

/// `set` is connected; `ext` is exactly its neighbourhood outside
/// `set ∪ forbidden`. Counts every connected superset of `set` avoiding
/// `forbidden`.
fn extend(g: &Graph, set: u64, mut ext: u64, mut forbidden: u64, counts: &mut [u64]) {
    counts[set.count_ones() as usize] += 1;
    while ext != 0 {
        let u = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        let grown = set | 1 << u;
        let new_ext = (ext | g.neighbors(u)) & !grown & !forbidden;
        extend(g, grown, new_ext, forbidden, counts);
        forbidden |= 1 << u;
    }
}

/// Count connected sets by testing all `2^n` subsets.
pub fn count_connected_sets_exhaustive(g: &Graph) -> Result<ConnSetProfile> {
    let n = g.order();
    if n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::Unsupported(format!(
            "exhaustive subset scan is limited to order {MAX_EXHAUSTIVE_ORDER}, got {n}"
        )));
    }
    let mut counts = vec![0u64; n + 1];
    for mask in 1..=full_mask(n) {
        if g.is_connected_set(mask) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    ConnSetProfile::new(counts.into_iter().map(BigUint::from).collect())
}

fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(BigUint::from(n), BigUint::from(k))
    }
}

/// Profile of a named family from its counting formula.
pub fn profile_closed_form(spec: &FamilySpec) -> Result<ConnSetProfile> {
    spec.validate()?;
    let n = spec.order();
    let c: Vec<BigUint> = match spec {
        FamilySpec::Complete { .. } => (0..=n)
            .map(|k| if k == 0 { BigUint::zero() } else { binom(n, k) })
            .collect(),
        FamilySpec::Empty { .. } => (0..=n)
            .map(|k| {
                if k == 1 {
                    BigUint::from(n)
                } else {
                    BigUint::zero()
                }
            })
            .collect(),
        FamilySpec::Path { .. } => (0..=n)
            .map(|k| {
                if k == 0 {
                    BigUint::zero()
                } else {
                    BigUint::from(n - k + 1)
                }
            })
            .collect(),
        FamilySpec::Cycle { .. } => (0..=n)
            .map(|k| match k {
                0 => BigUint::zero(),
                k if k == n => BigUint::one(),
                _ => BigUint::from(n),
            })
            .collect(),
        FamilySpec::Star { .. } => (0..=n)
            .map(|k| match k {
                0 => BigUint::zero(),
                1 => BigUint::from(n),
                k => binom(n - 1, k - 1),
            })
            .collect(),
        FamilySpec::CompleteBipartite { a, b } => (0..=n)
            .map(|k| match k {
                0 => BigUint::zero(),
                1 => BigUint::from(n),
                k => binom(n, k) - binom(*a, k) - binom(*b, k),
            })
            .collect(),
        // Subsets of the clique, plus the leaf with its neighbour and k - 2 others.
        FamilySpec::BondedCompleteLeaf { .. } => (0..=n)
            .map(|k| match k {
                0 => BigUint::zero(),
                1 => BigUint::from(n),
                k => binom(n - 1, k) + binom(n - 2, k - 2),
            })
            .collect(),
        FamilySpec::DisjointUnion { left, right } => {
            let l = profile_closed_form(left)?;
            let r = profile_closed_form(right)?;
            (0..=n).map(|k| l.get(k) + r.get(k)).collect()
        }
    };
    ConnSetProfile::new(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One item of the basic coefficient identities: `lhs` is the counted value,
/// `rhs` the value predicted from structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityItem {
    pub label: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub items: Vec<IdentityItem>,
}

impl IdentityReport {
    /// No item failed (not-applicable items are fine).
    pub fn holds(&self) -> bool {
        self.items.iter().all(|i| i.status != CheckStatus::Fail)
    }
}

/// Compare the low and high coefficients against `c_0 = 0`, `c_1 = n`,
/// `c_2 = m`, `c_3 = Σ C(deg v, 2) - 2τ`, and for connected graphs
/// `c_{n-1} = n - t`, `c_n = 1`.
pub fn check_boundary_identities(g: &Graph, profile: &ConnSetProfile) -> IdentityReport {
    let n = g.order();
    let connected = g.is_connected();
    let wedges: usize = (0..n)
        .map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2)
        .sum();
    let c3_predicted = wedges as i128 - 2 * g.triangle_count() as i128;
    let t = g.cut_vertices().len();

    let item = |label, k: usize, rhs: i128, applicable: bool| {
        let lhs = profile.get(k);
        let status = if !applicable {
            CheckStatus::NotApplicable
        } else if lhs.to_string() == rhs.to_string() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        IdentityItem {
            label,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            status,
        }
    };

    let mut items = vec![
        item("c_0 = 0", 0, 0, true),
        item("c_1 = n", 1, n as i128, true),
        item("c_2 = m", 2, g.size() as i128, true),
        item("c_3 = sum C(deg v, 2) - 2 tau", 3, c3_predicted, true),
    ];
    // For n = 1 the index n - 1 is c_0 and the identity reads 0 = 1 - 0;
    // it only makes sense from n = 2 on.
    items.push(item(
        "c_{n-1} = n - t",
        n.saturating_sub(1),
        n as i128 - t as i128,
        connected && n >= 2,
    ));
    items.push(item("c_n = 1", n, 1, connected));
    IdentityReport { items }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientBoundsReport {
    pub holds: bool,
    /// First `(k, t)` (by increasing `k`, then `t`) violating
    /// `(k - t + 1) c_k <= C(n - t, k - t) c_t`.
    pub first_violation: Option<(usize, usize)>,
}

/// Check `2 c_k <= (n - k + 1) c_{k-1}` and the general
/// `(k - t + 1) c_k <= C(n - t, k - t) c_t` for all `1 <= t < k <= n`.
pub fn check_coefficient_bounds(profile: &ConnSetProfile) -> CoefficientBoundsReport {
    let n = profile.order();
    for k in 2..=n {
        let adjacent =
            BigUint::from(2u32) * profile.get(k) <= BigUint::from(n - k + 1) * profile.get(k - 1);
        if !adjacent {
            return CoefficientBoundsReport {
                holds: false,
                first_violation: Some((k, k - 1)),
            };
        }
        for t in 1..k {
            let lhs = BigUint::from(k - t + 1) * profile.get(k);
            let rhs = binom(n - t, k - t) * profile.get(t);
            if lhs > rhs {
                return CoefficientBoundsReport {
                    holds: false,
                    first_violation: Some((k, t)),
                };
            }
        }
    }
    CoefficientBoundsReport {
        holds: true,
        first_violation: None,
    }
}

pub fn f_coefficients(profile: &ConnSetProfile) -> Vec<BigUint> {
    profile.f_coefficients()
}

/// Smallest `k` with `(k + 1) F_{k+1} > (n - k) F_k`, if any.
pub fn first_sperner_failure(profile: &ConnSetProfile) -> Option<usize> {
    let n = profile.order();
    let f = profile.f_coefficients();
    (0..n).find(|&k| BigUint::from(k + 1) * &f[k + 1] > BigUint::from(n - k) * &f[k])
}

pub fn sperner_failure(profile: &ConnSetProfile) -> bool {
    first_sperner_failure(profile).is_some()
}

/// Connected sets found per subset, for callers that want the sets
/// themselves rather than counts (small graphs only).
pub fn connected_sets(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let mut out = Vec::new();
    fn walk(g: &Graph, set: u64, mut ext: u64, mut forbidden: u64, out: &mut Vec<u64>) {
        out.push(set);
        while ext != 0 {
            let u = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let grown = set | 1 << u;
            walk(
                g,
                grown,
                (ext | g.neighbors(u)) & !grown & !forbidden,
                forbidden,
                out,
            );
            forbidden |= 1 << u;
        }
    }
    for v in 0..n {
        let forbidden = full_mask(v);
        walk(g, 1 << v, g.neighbors(v) & !forbidden, forbidden, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_family;
    use proptest::prelude::*;

    fn fam(s: &str) -> Graph {
        make_family(&s.parse().unwrap()).unwrap()
    }

    fn counts(p: &ConnSetProfile) -> Vec<u64> {
        p.counts().iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn known_profiles() {
        assert_eq!(
            counts(&count_connected_sets(&fam("complete:4")).unwrap()),
            [0, 4, 6, 4, 1]
        );
        assert_eq!(
            counts(&count_connected_sets(&fam("path:4")).unwrap()),
            [0, 4, 3, 2, 1]
        );
        assert_eq!(
            counts(&count_connected_sets(&fam("path:6")).unwrap()),
            [0, 6, 5, 4, 3, 2, 1]
        );
        assert_eq!(
            counts(&count_connected_sets(&fam("empty:5")).unwrap()),
            [0, 5, 0, 0, 0, 0]
        );
        assert_eq!(
            counts(&count_connected_sets(&fam("complete:1")).unwrap()),
            [0, 1]
        );
    }

    #[test]
    fn closed_forms_from_brute_force() {
        assert_eq!(
            counts(&profile_closed_form(&"cycle:5".parse().unwrap()).unwrap()),
            [0, 5, 5, 5, 5, 1]
        );
        assert_eq!(
            counts(&count_connected_sets_exhaustive(&fam("cycle:5")).unwrap()),
            [0, 5, 5, 5, 5, 1]
        );
        assert_eq!(
            counts(&profile_closed_form(&"star:6".parse().unwrap()).unwrap()),
            [0, 6, 5, 10, 10, 5, 1]
        );
        assert_eq!(
            counts(&count_connected_sets_exhaustive(&fam("star:6")).unwrap()),
            [0, 6, 5, 10, 10, 5, 1]
        );
        assert_eq!(
            counts(&profile_closed_form(&"complete:3".parse().unwrap()).unwrap()),
            [0, 3, 3, 1]
        );
    }

    #[test]
    fn closed_forms_match_enumeration_up_to_twelve() {
        for n in 1..=12 {
            let mut kinds = vec![
                format!("complete:{n}"),
                format!("empty:{n}"),
                format!("path:{n}"),
                format!("star:{n}"),
            ];
            if n >= 3 {
                kinds.push(format!("cycle:{n}"));
            }
            for k in kinds {
                let spec: FamilySpec = k.parse().unwrap();
                assert_eq!(
                    profile_closed_form(&spec).unwrap(),
                    count_connected_sets(&make_family(&spec).unwrap()).unwrap(),
                    "{k}"
                );
            }
        }
    }

    #[test]
    fn composite_closed_forms_match_enumeration() {
        for k in [
            "complete-bipartite:2,2",
            "complete-bipartite:3,5",
            "bonded-complete-leaf:2",
            "bonded-complete-leaf:7",
            "union(star:5,path:3)",
            "union(complete:1,union(cycle:4,empty:2))",
        ] {
            let spec: FamilySpec = k.parse().unwrap();
            assert_eq!(
                profile_closed_form(&spec).unwrap(),
                count_connected_sets_exhaustive(&make_family(&spec).unwrap()).unwrap(),
                "{k}"
            );
        }
    }

    #[test]
    fn closed_form_at_order_62_is_exact() {
        let p = profile_closed_form(&"complete:62".parse().unwrap()).unwrap();
        assert_eq!(p.total(), (BigUint::one() << 62u32) - BigUint::one());
    }

    #[test]
    fn order_cap() {
        assert!(count_connected_sets(&fam("path:31")).is_err());
        assert!(count_connected_sets(&fam("path:30")).is_ok());
        assert!(count_connected_sets_exhaustive(&fam("path:21")).is_err());
    }

    #[test]
    fn identities_on_k4_and_p6() {
        let k4 = fam("complete:4");
        let r = check_boundary_identities(&k4, &count_connected_sets(&k4).unwrap());
        assert!(r.holds());
        assert_eq!(r.items[3].rhs, "4");
        let p6 = fam("path:6");
        let r = check_boundary_identities(&p6, &count_connected_sets(&p6).unwrap());
        assert!(r.items.iter().all(|i| i.status == CheckStatus::Pass));
        assert_eq!(r.items[4].lhs, "2");
    }

    #[test]
    fn identities_disconnected_not_applicable() {
        let g = fam("union(path:3,complete:2)");
        let r = check_boundary_identities(&g, &count_connected_sets(&g).unwrap());
        assert!(r.holds());
        assert_eq!(r.items[4].status, CheckStatus::NotApplicable);
        assert_eq!(r.items[5].status, CheckStatus::NotApplicable);
    }

    #[test]
    fn identities_detects_wrong_profile() {
        let g = fam("path:4");
        let bad = ConnSetProfile::from_u64(&[0, 4, 3, 3, 1]).unwrap();
        let r = check_boundary_identities(&g, &bad);
        assert!(!r.holds());
        assert_eq!(r.items[3].status, CheckStatus::Fail);
    }

    #[test]
    fn coefficient_bounds_hold() {
        let k5 = count_connected_sets(&fam("complete:5")).unwrap();
        assert!(check_coefficient_bounds(&k5).holds);
        // For K_5, 2 c_k <= (6 - k) c_{k-1} is an equality only at k = 2.
        for k in 2..=5usize {
            let lhs = 2u32 * k5.get(k);
            let rhs = BigUint::from(6 - k) * k5.get(k - 1);
            assert_eq!(lhs == rhs, k == 2, "k = {k}");
        }
        let corrupted = ConnSetProfile::from_u64(&[0, 4, 3, 6, 1]).unwrap();
        let r = check_coefficient_bounds(&corrupted);
        assert!(!r.holds);
        assert_eq!(r.first_violation, Some((3, 2)));
    }

    #[test]
    fn sperner() {
        assert!(!sperner_failure(
            &count_connected_sets(&fam("complete:6")).unwrap()
        ));
        let p6 = count_connected_sets(&fam("path:6")).unwrap();
        assert_eq!(
            f_coefficients(&p6),
            [1u32, 2, 3, 4, 5, 6, 0].map(BigUint::from).to_vec()
        );
        // (k+1) F_{k+1} vs (n-k) F_k: k=3 gives 4*5 = 20 > 3*4 = 12.
        assert_eq!(first_sperner_failure(&p6), Some(3));
        assert!(sperner_failure(&p6));
    }

    #[test]
    fn connected_sets_are_connected_and_distinct() {
        let g = fam("cycle:7");
        let sets = connected_sets(&g);
        let unique: std::collections::HashSet<_> = sets.iter().collect();
        assert_eq!(unique.len(), sets.len());
        assert!(sets.iter().all(|&s| g.is_connected_set(s)));
        assert_eq!(
            BigUint::from(sets.len()),
            count_connected_sets(&g).unwrap().total()
        );
    }

    fn random_graph(n: usize) -> impl Strategy<Value = Graph> {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    }

    proptest! {
        #[test]
        fn enumeration_equals_exhaustive(g in (1usize..=10).prop_flat_map(random_graph)) {
            prop_assert_eq!(count_connected_sets(&g).unwrap(), count_connected_sets_exhaustive(&g).unwrap());
        }

        #[test]
        fn adding_an_edge_never_decreases_counts(
            (g, u, v) in (4usize..=9).prop_flat_map(|n| (random_graph(n), 0..n, 0..n))
        ) {
            prop_assume!(u != v);
            let before = count_connected_sets(&g).unwrap();
            let mut edges: Vec<_> = g.edges().collect();
            edges.push((u, v));
            let h = Graph::from_edges(g.order(), &edges).unwrap();
            let after = count_connected_sets(&h).unwrap();
            for k in 0..=g.order() {
                prop_assert!(after.get(k) >= before.get(k));
            }
        }

        #[test]
        fn profile_basics(g in (1usize..=9).prop_flat_map(random_graph)) {
            let p = count_connected_sets(&g).unwrap();
            prop_assert!(p.get(0).is_zero());
            prop_assert_eq!(p.get(1), BigUint::from(g.order()));
            prop_assert_eq!(p.get(g.order()) == BigUint::one(), g.is_connected());
            prop_assert!(check_coefficient_bounds(&p).holds);
            prop_assert!(check_boundary_identities(&g, &p).holds());
        }
    }
}
