//! Serializable documents for `--json` output and their text renderings.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use relshape_core::connsets::{
    check_boundary_identities, check_coefficient_bounds, first_sperner_failure, CheckStatus,
    CoefficientBoundsReport, IdentityReport,
};
use relshape_core::format::format_sig;
use relshape_core::serde_util::rational_string;
use relshape_core::shape::{
    check_fixed_point_witness, check_sparse_decrease, Boundary, FixedPointWitness,
    SparseDecreaseCheck,
};
use relshape_core::{
    canonical_key, d_coefficients, to_graph6, CensusSummary, RootRecord, ShapeClass, ShapeReport,
};

use crate::config::REPORT_DIGITS;
use crate::input::Loaded;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct GraphInfo {
    pub graph6: String,
    /// Canonical graph6 (orders up to 10), equal for isomorphic graphs.
    pub canonical_graph6: Option<String>,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub cut_vertices: usize,
    pub leaves: usize,
    pub family: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Counts {
    pub c: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    /// `d_1..d_{n-1}`.
    pub d: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PolynomialView {
    pub power_coeffs: Vec<String>,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct RootView {
    pub lo: String,
    pub hi: String,
    pub approx: String,
    pub multiplicity: u32,
}

impl From<&RootRecord> for RootView {
    fn from(r: &RootRecord) -> Self {
        RootView {
            lo: rational_string(&r.lo),
            hi: rational_string(&r.hi),
            approx: format_sig(r.approx(), REPORT_DIGITS),
            multiplicity: r.multiplicity,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryView {
    Zero,
    One,
    Root(RootView),
}

impl From<&Boundary> for BoundaryView {
    fn from(b: &Boundary) -> Self {
        match b {
            Boundary::Zero => BoundaryView::Zero,
            Boundary::One => BoundaryView::One,
            Boundary::Root(r) => BoundaryView::Root(r.into()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IntervalView {
    pub start: BoundaryView,
    pub end: BoundaryView,
}

#[derive(Debug, Serialize)]
pub struct ShapeView {
    pub class: ShapeClass,
    pub connected: bool,
    pub deriv_at_0: String,
    pub deriv_at_1: String,
    pub decrease_intervals: Vec<IntervalView>,
    pub stationary_points: Vec<RootView>,
    pub inflections: Vec<RootView>,
    pub fixed_points: Vec<RootView>,
    pub tangential_fixed_points: Vec<RootView>,
    pub concave_down_near_0: bool,
    pub concavity_near_1: i8,
}

fn roots(rs: &[RootRecord]) -> Vec<RootView> {
    rs.iter().map(RootView::from).collect()
}

impl From<&ShapeReport> for ShapeView {
    fn from(r: &ShapeReport) -> Self {
        ShapeView {
            class: r.class,
            connected: r.connected,
            deriv_at_0: rational_string(&r.deriv_at_0),
            deriv_at_1: rational_string(&r.deriv_at_1),
            decrease_intervals: r
                .decrease_intervals
                .iter()
                .map(|iv| IntervalView {
                    start: (&iv.start).into(),
                    end: (&iv.end).into(),
                })
                .collect(),
            stationary_points: roots(&r.stationary_points),
            inflections: roots(&r.inflections),
            fixed_points: roots(&r.fixed_points),
            tangential_fixed_points: roots(&r.tangential_fixed_points),
            concave_down_near_0: r.concave_down_near_0,
            concavity_near_1: r.concavity_near_1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Checks {
    pub identities: IdentityReport,
    pub coefficient_bounds: CoefficientBoundsReport,
    /// Smallest `k` where `(k + 1) F_{k+1} > (n - k) F_k`.
    pub sperner_failure_at: Option<usize>,
    pub derivative_forms_agree: bool,
    pub sparse_decrease: SparseDecreaseCheck,
    pub fixed_point_witness: FixedPointWitness,
}

#[derive(Debug, Serialize)]
pub struct AnalysisDocument {
    pub schema_version: u32,
    pub graph: GraphInfo,
    pub counts: Counts,
    pub polynomial: PolynomialView,
    pub shape: ShapeView,
    pub checks: Checks,
    pub violations: Vec<String>,
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

pub fn graph_info(loaded: &Loaded) -> GraphInfo {
    let g = &loaded.graph;
    let stats = g.structural_stats();
    GraphInfo {
        graph6: to_graph6(g),
        canonical_graph6: canonical_key(g).ok().map(|k| k.as_graph6().to_string()),
        n: stats.order,
        m: stats.size,
        max_degree: stats.max_degree,
        cut_vertices: stats.cut_vertices,
        leaves: stats.leaves,
        family: loaded.family.as_ref().map(ToString::to_string),
    }
}

pub fn counts(loaded: &Loaded) -> Counts {
    let f: Vec<BigUint> = loaded.profile.f_coefficients();
    Counts {
        c: strings(loaded.profile.counts()),
        f: strings(&f),
        d: strings(&d_coefficients(&loaded.profile).values),
    }
}

pub fn analysis(loaded: &Loaded, shape: &ShapeReport) -> AnalysisDocument {
    let g = &loaded.graph;
    let rel = &loaded.rel;
    let checks = Checks {
        identities: check_boundary_identities(g, &loaded.profile),
        coefficient_bounds: check_coefficient_bounds(&loaded.profile),
        sperner_failure_at: first_sperner_failure(&loaded.profile),
        derivative_forms_agree: rel.derivative_forms_agree(),
        sparse_decrease: check_sparse_decrease(g, rel),
        fixed_point_witness: check_fixed_point_witness(g, rel),
    };
    let violations = violations(loaded, shape, &checks);
    AnalysisDocument {
        schema_version: SCHEMA_VERSION,
        graph: graph_info(loaded),
        counts: counts(loaded),
        polynomial: PolynomialView {
            power_coeffs: rel.power_coeffs().iter().map(rational_string).collect(),
            text: rel.poly().to_string(),
        },
        shape: shape.into(),
        checks,
        violations,
    }
}

fn violations(loaded: &Loaded, shape: &ShapeReport, checks: &Checks) -> Vec<String> {
    let g = &loaded.graph;
    let mut v = Vec::new();
    for item in &checks.identities.items {
        if item.status == CheckStatus::Fail {
            v.push(format!(
                "{}: counted {}, expected {}",
                item.label, item.lhs, item.rhs
            ));
        }
    }
    if let Some((k, t)) = checks.coefficient_bounds.first_violation {
        v.push(format!("coefficient bound fails at k = {k}, t = {t}"));
    }
    if !checks.derivative_forms_agree {
        v.push("derivative forms disagree".into());
    }
    if shape.connected != g.is_connected() {
        v.push("value at 1 does not match connectivity".into());
    }
    if g.order() >= 2 && !shape.concave_down_near_0 {
        v.push("not concave near 0".into());
    }
    if g.is_two_connected() && shape.concavity_near_1 != -1 {
        v.push("2-connected graph not concave near 1".into());
    }
    let sparse = &checks.sparse_decrease;
    if sparse.applicable && !sparse.negative {
        v.push(format!(
            "sparse graph with f'({}) >= 0",
            rational_string(&sparse.p)
        ));
    }
    let w = &checks.fixed_point_witness;
    if w.certifies_two_fixed_points && shape.fixed_points.len() < 2 {
        v.push("witness certifies two fixed points but fewer were found".into());
    }
    v
}

fn fmt_roots(rs: &[RootView]) -> String {
    if rs.is_empty() {
        return "none".into();
    }
    rs.iter()
        .map(|r| {
            if r.multiplicity > 1 {
                format!("{} (x{})", r.approx, r.multiplicity)
            } else {
                r.approx.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn fmt_boundary(b: &BoundaryView) -> String {
    match b {
        BoundaryView::Zero => "0".into(),
        BoundaryView::One => "1".into(),
        BoundaryView::Root(r) => r.approx.clone(),
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn render_analysis(doc: &AnalysisDocument) -> String {
    let mut s = String::new();
    let g = &doc.graph;
    let sh = &doc.shape;
    let _ = writeln!(s, "graph6: {}", g.graph6);
    if let Some(c) = g.canonical_graph6.as_ref().filter(|c| **c != g.graph6) {
        let _ = writeln!(s, "canonical: {c}");
    }
    if let Some(f) = &g.family {
        let _ = writeln!(s, "family: {f}");
    }
    let _ = writeln!(
        s,
        "order {}, size {}, max degree {}, cut vertices {}, leaves {}",
        g.n, g.m, g.max_degree, g.cut_vertices, g.leaves
    );
    let _ = writeln!(s, "c: {}", doc.counts.c.join(" "));
    let _ = writeln!(s, "nRel(p) = {}", doc.polynomial.text);
    let _ = writeln!(s, "class: {}", sh.class);
    let _ = writeln!(s, "f'(0) = {}, f'(1) = {}", sh.deriv_at_0, sh.deriv_at_1);
    if sh.decrease_intervals.is_empty() {
        let _ = writeln!(s, "decrease intervals: none");
    } else {
        let ivs: Vec<String> = sh
            .decrease_intervals
            .iter()
            .map(|iv| format!("({}, {})", fmt_boundary(&iv.start), fmt_boundary(&iv.end)))
            .collect();
        let _ = writeln!(s, "decrease intervals: {}", ivs.join(" "));
    }
    let _ = writeln!(s, "stationary points: {}", fmt_roots(&sh.stationary_points));
    let _ = writeln!(s, "inflections: {}", fmt_roots(&sh.inflections));
    let _ = writeln!(s, "fixed points: {}", fmt_roots(&sh.fixed_points));
    if !sh.tangential_fixed_points.is_empty() {
        let _ = writeln!(
            s,
            "tangential fixed points: {}",
            fmt_roots(&sh.tangential_fixed_points)
        );
    }
    let near1 = match sh.concavity_near_1 {
        -1 => "down",
        1 => "up",
        _ => "flat",
    };
    let _ = writeln!(
        s,
        "concave down near 0: {}, concavity near 1: {near1}",
        if sh.concave_down_near_0 { "yes" } else { "no" }
    );
    let c = &doc.checks;
    let _ = writeln!(s, "checks:");
    let _ = writeln!(
        s,
        "  low/high coefficients: {}",
        status(c.identities.holds())
    );
    let _ = writeln!(
        s,
        "  coefficient bounds: {}",
        status(c.coefficient_bounds.holds)
    );
    let _ = writeln!(
        s,
        "  Sperner property: {}",
        match c.sperner_failure_at {
            Some(k) => format!("fails at k = {k}"),
            None => "holds".into(),
        }
    );
    let _ = writeln!(
        s,
        "  derivative forms agree: {}",
        status(c.derivative_forms_agree)
    );
    if c.sparse_decrease.applicable {
        let _ = writeln!(
            s,
            "  sparse decrease at {}: {}",
            rational_string(&c.sparse_decrease.p),
            status(c.sparse_decrease.negative)
        );
    }
    if let (Some(p), Some(v)) = (&c.fixed_point_witness.p, &c.fixed_point_witness.value) {
        let _ = writeln!(
            s,
            "  f({}) = {} {} identity",
            rational_string(p),
            format_sig(relshape_core::polynomial::to_f64(v), REPORT_DIGITS),
            if c.fixed_point_witness.below_identity {
                "below"
            } else {
                "not below"
            }
        );
    }
    for v in &doc.violations {
        let _ = writeln!(s, "violation: {v}");
    }
    s
}

#[derive(Debug, Serialize)]
pub struct CoeffRow {
    pub k: usize,
    pub c: String,
    #[serde(rename = "F")]
    pub f: String,
    pub d: Option<String>,
    /// Row covered by the low/high coefficient identities.
    pub identity: bool,
}

#[derive(Debug, Serialize)]
pub struct CoeffsDocument {
    pub schema_version: u32,
    pub graph: GraphInfo,
    pub rows: Vec<CoeffRow>,
}

pub fn coeffs(loaded: &Loaded) -> CoeffsDocument {
    let n = loaded.graph.order();
    let counts = counts(loaded);
    let connected = loaded.graph.is_connected();
    let rows = (0..=n)
        .map(|k| CoeffRow {
            k,
            c: counts.c[k].clone(),
            f: counts.f[k].clone(),
            d: k.checked_sub(1).and_then(|i| counts.d.get(i)).cloned(),
            identity: k <= 3 || (connected && k + 1 >= n),
        })
        .collect();
    CoeffsDocument {
        schema_version: SCHEMA_VERSION,
        graph: graph_info(loaded),
        rows,
    }
}

pub fn render_coeffs(doc: &CoeffsDocument) -> String {
    let header = ["k", "c_k", "F_k", "d_k", ""];
    let cells: Vec<[String; 5]> = doc
        .rows
        .iter()
        .map(|r| {
            [
                r.k.to_string(),
                r.c.clone(),
                r.f.clone(),
                r.d.clone().unwrap_or_else(|| "-".into()),
                if r.identity {
                    "*".into()
                } else {
                    String::new()
                },
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, row: &[&str]| {
        let parts: Vec<String> = row
            .iter()
            .zip(width)
            .take(4)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(s, "{} {}", parts.join("  "), row[4]).map(|_| ());
    };
    line(&mut s, &header);
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&mut s, &refs);
    }
    let _ = writeln!(s, "* rows fixed by the low/high coefficient identities");
    trim_lines(s)
}

#[derive(Debug, Serialize)]
pub struct CensusDocument<'a> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub summary: &'a CensusSummary,
}

fn histogram<K: std::fmt::Display>(h: impl IntoIterator<Item = (K, u64)>) -> String {
    let parts: Vec<String> = h.into_iter().map(|(k, v)| format!("{k}: {v}")).collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

pub fn render_census(s: &CensusSummary) -> String {
    let mut out = String::new();
    let order = s.order.map_or_else(|| "-".to_string(), |n| n.to_string());
    let _ = writeln!(out, "order: {order}");
    let _ = writeln!(out, "connected graphs: {}", s.total_connected);
    if s.skipped_disconnected > 0 {
        let _ = writeln!(out, "skipped disconnected: {}", s.skipped_disconnected);
    }
    let _ = writeln!(out, "decrease: {}/{}", s.with_decrease, s.total_connected);
    let _ = writeln!(
        out,
        "tangential stationary points: {}",
        s.with_tangential_stationary_point
    );
    let _ = writeln!(
        out,
        "inflections: {}",
        histogram(s.inflection_histogram.iter().map(|(k, v)| (k, *v)))
    );
    let _ = writeln!(
        out,
        "fixed points: {}",
        histogram(s.fixed_point_histogram.iter().map(|(k, v)| (k, *v)))
    );
    let _ = writeln!(
        out,
        "classes: {}",
        histogram(s.class_histogram.iter().map(|(k, v)| (k, *v)))
    );
    let _ = writeln!(
        out,
        "three inflections with one leaf and one cut vertex: {}",
        s.three_inflections_one_leaf_one_cut
    );
    if !s.exemplars.is_empty() {
        let _ = writeln!(out, "exemplars:");
        for (name, list) in &s.exemplars {
            let _ = writeln!(out, "  {name}: {}", list.join(" "));
        }
    }
    out
}

fn trim_lines(s: String) -> String {
    s.lines().map(|l| l.trim_end().to_string() + "\n").collect()
}
