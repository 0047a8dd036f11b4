//! End-to-end checks of census figures and structural properties.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::canon::canonical_key;
use crate::census::{
    analyze_record, generate_connected_with, generate_trees, run_census, GraphRecord,
};
use crate::connsets::{
    check_boundary_identities, check_coefficient_bounds, count_connected_sets, profile_closed_form,
    sperner_failure,
};
use crate::error::Result;
use crate::family::{make_family, FamilySpec};
use crate::graph::{parse_edge_list, Graph};
use crate::graph6::{parse_graph6, to_graph6};
use crate::montecarlo::monte_carlo_estimate;
use crate::parallel::{map_ordered, Execution};
use crate::polynomial::{rat, to_f64};
use crate::reliability::{d_coefficients, ReliabilityPoly};
use crate::shape::{
    analyze, check_fixed_point_witness, check_sparse_decrease, maximize_threshold_constant,
};

/// The order-7 graph with three inflection points, 0-based.
pub const THREE_INFLECTION_EDGES: &str = "7 0 4 0 5 0 6 1 4 1 6 2 5 2 6 3 6 4 5";

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub tol: BigRational,
    /// Root tolerance for the threshold maximiser.
    pub threshold_tol: f64,
    pub slow: bool,
    pub exec: Execution,
    pub monte_carlo_trials: u64,
    /// `(order, file contents)` of census fixtures to compare with the generator.
    pub fixtures: Vec<(usize, String)>,
}

impl VerifyConfig {
    pub fn new(tol: BigRational) -> Self {
        Self {
            tol,
            threshold_tol: 1e-12,
            slow: false,
            exec: Execution::Auto,
            monte_carlo_trials: 100_000,
            fixtures: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn result(id: &str, name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        id: id.to_string(),
        name: name.to_string(),
        passed,
        detail,
    }
}

fn fam(s: &str) -> Graph {
    make_family(&s.parse().expect("family literal")).expect("family literal")
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

struct Census {
    records: Vec<GraphRecord>,
    graphs: Vec<Graph>,
    elapsed: Duration,
}

fn census(n: usize, cfg: &VerifyConfig) -> Result<Census> {
    let start = Instant::now();
    let graphs = generate_connected_with(n, cfg.exec)?;
    let records = map_ordered(&graphs, cfg.exec, |g| analyze_record(g, &cfg.tol))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Census {
        records,
        graphs,
        elapsed: start.elapsed(),
    })
}

/// Run every check; the suite passes iff every result passes.
pub fn run_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let by_order: Vec<(usize, Census)> = (2..=7)
        .map(|n| census(n, cfg).map(|c| (n, c)))
        .collect::<Result<_>>()?;
    let c6 = &by_order[4].1;
    let c7 = &by_order[5].1;

    let dec6 = c6
        .records
        .iter()
        .filter(|r| r.report.has_decrease())
        .count();
    out.push(result(
        "1",
        "order-6 census",
        c6.records.len() == 112 && dec6 == 37 && within(c6.elapsed, 10),
        format!("decrease: {dec6}/{}", c6.records.len()),
    ));

    let dec7 = c7
        .records
        .iter()
        .filter(|r| r.report.has_decrease())
        .count();
    let three: Vec<&GraphRecord> = c7
        .records
        .iter()
        .filter(|r| r.inflection_count() == 3)
        .collect();
    let example = canonical_key(&parse_edge_list(THREE_INFLECTION_EDGES)?)?;
    let matches = three.len() == 1 && three[0].graph6 == example.as_graph6();
    out.push(result(
        "2",
        "order-7 census",
        c7.records.len() == 853 && dec7 == 383 && matches && within(c7.elapsed, 60),
        format!(
            "decrease: {dec7}/{}; three inflections: {} ({})",
            c7.records.len(),
            three.len(),
            three
                .iter()
                .map(|r| r.graph6.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ),
    ));

    if cfg.slow {
        let start = Instant::now();
        let graphs = generate_connected_with(8, cfg.exec)?;
        let s = run_census(&graphs, &cfg.tol, cfg.exec, 10)?;
        let elapsed = start.elapsed();
        out.push(result(
            "3",
            "order-8 census",
            s.total_connected == 11117 && s.inflection_count(3) == 84 && within(elapsed, 1800),
            format!(
                "connected: {}; three inflections: {}",
                s.total_connected,
                s.inflection_count(3)
            ),
        ));
    }

    out.push(check_path_six(cfg)?);
    out.push(check_threshold(cfg)?);
    out.push(check_closed_forms()?);
    out.push(check_sweep(&by_order));
    out.push(check_structural_instances(&by_order, cfg)?);
    out.push(check_stars(cfg)?);
    out.push(check_m_shape(cfg)?);
    out.push(check_long_cycle(cfg)?);
    out.push(check_monte_carlo(cfg)?);
    if !cfg.fixtures.is_empty() {
        out.push(check_fixtures(&by_order, &cfg.fixtures));
    }
    Ok(out)
}

fn check_path_six(cfg: &VerifyConfig) -> Result<CheckResult> {
    let r = analyze(&ReliabilityPoly::of_graph(&fam("path:6"))?, &cfg.tol)?;
    let ok = r.decrease_intervals.len() == 1 && {
        let iv = &r.decrease_intervals[0];
        (iv.start.approx() - 0.2137).abs() <= 5e-5 && (iv.end.approx() - 0.5851).abs() <= 5e-5
    };
    let detail = r
        .decrease_intervals
        .iter()
        .map(|iv| format!("({:.6}, {:.6})", iv.start.approx(), iv.end.approx()))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(result("4", "path P6 decrease interval", ok, detail))
}

fn check_threshold(cfg: &VerifyConfig) -> Result<CheckResult> {
    let (r, v) = maximize_threshold_constant(cfg.threshold_tol)?;
    let ok = (r - 1.729474372).abs() <= 1e-8 && (v - 0.08510464442).abs() <= 1e-9;
    Ok(result(
        "5",
        "threshold constant",
        ok,
        format!("r = {r:.10}, f(r) = {v:.12}"),
    ))
}

/// Family specs with closed forms, orders up to `max`.
pub fn closed_form_families(max: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push(FamilySpec::Complete { n });
        out.push(FamilySpec::Empty { n });
        out.push(FamilySpec::Path { n });
        out.push(FamilySpec::Star { n });
        if n >= 3 {
            out.push(FamilySpec::Cycle { n });
        }
        if n >= 2 {
            out.push(FamilySpec::BondedCompleteLeaf { n });
        }
        for a in 1..n {
            if a <= n - a {
                out.push(FamilySpec::CompleteBipartite { a, b: n - a });
            }
        }
    }
    out
}

fn check_closed_forms() -> Result<CheckResult> {
    let specs = closed_form_families(12);
    let mut failures = Vec::new();
    for spec in &specs {
        let counted = count_connected_sets(&make_family(spec)?)?;
        let poly_ok = ReliabilityPoly::closed_form(spec)?.poly()
            == ReliabilityPoly::from_profile(&counted).poly();
        let profile_ok = profile_closed_form(spec)? == counted;
        if !(poly_ok && profile_ok) {
            failures.push(spec.to_string());
        }
    }
    Ok(result(
        "6",
        "closed forms equal counted polynomials",
        failures.is_empty(),
        format!(
            "{} families, failures: [{}]",
            specs.len(),
            failures.join(", ")
        ),
    ))
}

fn check_sweep(by_order: &[(usize, Census)]) -> CheckResult {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (_, c) in by_order {
        for (g, r) in c.graphs.iter().zip(&c.records) {
            checked += 1;
            let n = g.order();
            let profile = count_connected_sets(g).expect("census order");
            let rel = ReliabilityPoly::from_profile(&profile);
            let d = d_coefficients(&profile);
            let d1_bound = d
                .get(1)
                .is_some_and(|d1| *d1 <= BigInt::from(-((n * (n - 1)) as i64)));
            let t = g.cut_vertices().len();
            let endpoint_slopes = r.report.deriv_at_0 == BigRational::from_integer(n.into())
                && r.report.deriv_at_1 == BigRational::from_integer(t.into());
            let sperner = g.is_complete() != sperner_failure(&profile);
            let ok = check_boundary_identities(g, &profile).holds()
                && check_coefficient_bounds(&profile).holds
                && d1_bound
                && endpoint_slopes
                && sperner
                && rel.derivative_forms_agree()
                && r.report.concave_down_near_0;
            if !ok {
                failures.push(to_graph6(g));
            }
        }
    }
    result(
        "7",
        "coefficient identities, bounds and Sperner sweep",
        failures.is_empty(),
        format!("{checked} graphs, failures: [{}]", failures.join(",")),
    )
}

fn sparse(g: &Graph) -> bool {
    let n = g.order();
    g.size() * 10_000 <= 851 * n * n
}

fn check_structural_instances(
    by_order: &[(usize, Census)],
    cfg: &VerifyConfig,
) -> Result<CheckResult> {
    let mut failures: Vec<String> = Vec::new();
    let mut counts = [0usize; 5];

    // Sparse graphs: the census orders hold none, so add cycles, paths
    // and their unions with an isolated vertex.
    let mut sparse_graphs: Vec<(String, Graph)> = Vec::new();
    for (_, c) in by_order {
        for g in &c.graphs {
            if sparse(g) {
                sparse_graphs.push((to_graph6(g), g.clone()));
            }
        }
    }
    for n in 12..=20 {
        for spec in [
            format!("cycle:{n}"),
            format!("path:{n}"),
            format!("empty:{n}"),
            format!("union(cycle:{},complete:1)", n - 1),
        ] {
            sparse_graphs.push((spec.clone(), fam(&spec)));
        }
    }
    for (name, g) in &sparse_graphs {
        counts[0] += 1;
        let rel = ReliabilityPoly::of_graph(g)?;
        let r = analyze(&rel, &cfg.tol)?;
        let witness = check_sparse_decrease(g, &rel);
        if !(witness.applicable && witness.negative && r.has_decrease()) {
            failures.push(format!("sparse {name}"));
        }
        if g.is_two_connected() {
            counts[1] += 1;
            if r.inflections.len() < 2 {
                failures.push(format!("two-connected sparse {name}"));
            }
        }
    }

    for n in 4..=8 {
        for t in generate_trees(n)? {
            counts[2] += 1;
            if analyze(&ReliabilityPoly::of_graph(&t)?, &cfg.tol)?
                .inflections
                .is_empty()
            {
                failures.push(format!("tree {}", to_graph6(&t)));
            }
        }
    }

    for (_, c) in by_order {
        for r in &c.records {
            if r.cut_vertices >= 2 {
                counts[3] += 1;
                if r.fixed_point_count() == 0 {
                    failures.push(format!("cut vertices {}", r.graph6));
                }
            }
            // Two-connected graphs are concave down near 1.
            let g = parse_graph6(&r.graph6)?;
            if g.is_two_connected() && r.report.concavity_near_1 >= 0 {
                failures.push(format!("concavity near 1 {}", r.graph6));
            }
        }
    }

    let two_fifths = rat(2, 5);
    for n in 7..=20 {
        counts[4] += 1;
        let rel = ReliabilityPoly::closed_form(&FamilySpec::BondedCompleteLeaf { n })?;
        if !rel.derivative().eval(&two_fifths).is_negative() {
            failures.push(format!("bonded-complete-leaf:{n}"));
        }
    }
    Ok(result(
        "8",
        "structural instances",
        failures.is_empty(),
        format!(
            "sparse: {}, sparse two-connected: {}, trees: {}, t>=2: {}, bonded: {}; failures: [{}]",
            counts[0],
            counts[1],
            counts[2],
            counts[3],
            counts[4],
            failures.join(", ")
        ),
    ))
}

fn check_stars(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for n in 4..=20usize {
        let r = analyze(
            &ReliabilityPoly::closed_form(&FamilySpec::Star { n })?,
            &cfg.tol,
        )?;
        let ok = r.inflections.len() == 1 && r.inflections[0].contains(&rat(2, n as i64));
        if !ok {
            failures.push(n.to_string());
        }
    }
    Ok(result(
        "9",
        "star inflection at 2/n",
        failures.is_empty(),
        format!("n = 4..20, failures: [{}]", failures.join(",")),
    ))
}

fn check_m_shape(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for n in 12..=20 {
        let spec: FamilySpec = format!("union(star:{n},complete:1)").parse()?;
        let r = analyze(&ReliabilityPoly::closed_form(&spec)?, &cfg.tol)?;
        if r.decrease_intervals.len() != 2 {
            failures.push(n.to_string());
        }
    }
    Ok(result(
        "10",
        "star plus isolated vertex has two decrease intervals",
        failures.is_empty(),
        format!("n = 12..20, failures: [{}]", failures.join(",")),
    ))
}

fn check_long_cycle(cfg: &VerifyConfig) -> Result<CheckResult> {
    let spec = FamilySpec::Cycle { n: 50 };
    let g = make_family(&spec)?;
    let rel = ReliabilityPoly::closed_form(&spec)?;
    let w = check_fixed_point_witness(&g, &rel);
    let r = analyze(&rel, &cfg.tol)?;
    let quarter = rat(1, 4);
    let below = rel.eval_exact(&quarter) < quarter;
    Ok(result(
        "11",
        "cycle C50 fixed points",
        below && w.below_identity && r.fixed_points.len() >= 2,
        format!(
            "f(1/4) = {:.10}, fixed points: {}",
            to_f64(&rel.eval_exact(&quarter)),
            r.fixed_points.len()
        ),
    ))
}

/// The twenty `(graph, p, seed)` triples of the Monte Carlo check.
pub fn monte_carlo_cases() -> Vec<(String, f64, u64)> {
    let graphs = [
        "complete:5",
        "path:6",
        "cycle:7",
        "star:6",
        "complete-bipartite:3,3",
        "bonded-complete-leaf:6",
        "union(path:3,complete:2)",
        "empty:4",
        "cycle:10",
        "path:9",
    ];
    let ps = [0.25, 0.6];
    let mut out = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        for (j, p) in ps.iter().enumerate() {
            out.push((g.to_string(), *p, (2 * i + j + 1) as u64));
        }
    }
    out
}

fn check_monte_carlo(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let cases = monte_carlo_cases();
    for (spec, p, seed) in &cases {
        let g = fam(spec);
        let exact = to_f64(
            &ReliabilityPoly::of_graph(&g)?
                .eval_exact(&BigRational::from_float(*p).unwrap_or_else(BigRational::zero)),
        );
        let e = monte_carlo_estimate(&g, *p, cfg.monte_carlo_trials, *seed, cfg.exec)?;
        if !e.within(exact, 4.0) {
            failures.push(format!("{spec}@{p}"));
        }
    }
    Ok(result(
        "12",
        "Monte Carlo within 4 standard errors",
        failures.is_empty(),
        format!("{} cases, failures: [{}]", cases.len(), failures.join(", ")),
    ))
}

fn check_fixtures(by_order: &[(usize, Census)], fixtures: &[(usize, String)]) -> CheckResult {
    let mut failures = Vec::new();
    for (n, text) in fixtures {
        let expected: Option<Vec<String>> = by_order
            .iter()
            .find(|(k, _)| k == n)
            .map(|(_, c)| c.records.iter().map(|r| r.graph6.clone()).collect());
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let round_trip = lines
            .iter()
            .all(|l| parse_graph6(l).is_ok_and(|g| to_graph6(&g) == *l));
        let same = expected.is_some_and(|e| e.iter().map(String::as_str).eq(lines.iter().copied()));
        if !(round_trip && same) {
            failures.push(n.to_string());
        }
    }
    result(
        "fixtures",
        "census fixtures match the generator",
        failures.is_empty(),
        format!(
            "{} files, failures: [{}]",
            fixtures.len(),
            failures.join(",")
        ),
    )
}
