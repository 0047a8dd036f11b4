//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines are always shown.
//! The order-8 census is opt-in: pass `--ignored` or `--include-ignored`
//! (as `cargo test -- --ignored` does) or set `RELSHAPE_SLOW=1`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use relshape_core::census::{analyze_record, generate_trees, GraphRecord};
use relshape_core::connsets::{
    count_connected_sets_exhaustive, profile_closed_form, ConnSetProfile,
};
use relshape_core::polynomial::{rat, to_f64, Poly};
use relshape_core::shape::maximize_threshold_constant;
use relshape_core::verify::{closed_form_families, monte_carlo_cases, THREE_INFLECTION_EDGES};
use relshape_core::{
    analyze, are_isomorphic, count_connected_sets, generate_connected, make_family,
    monte_carlo_estimate, parse_edge_list, parse_graph6, run_census, Execution, FamilySpec, Graph,
    ReliabilityPoly,
};

fn tol() -> BigRational {
    rat(1, 1_000_000_000)
}

fn fam(s: &str) -> Graph {
    make_family(&s.parse().unwrap()).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

struct Census {
    graphs: Vec<Graph>,
    records: Vec<GraphRecord>,
    elapsed: Duration,
}

fn census(n: usize) -> Census {
    let start = Instant::now();
    let graphs = generate_connected(n).unwrap();
    let records = graphs
        .iter()
        .map(|g| analyze_record(g, &tol()).unwrap())
        .collect();
    Census {
        graphs,
        records,
        elapsed: start.elapsed(),
    }
}

/// Independent decrease test: the derivative, evaluated in floating point
/// on a fine grid, goes clearly negative somewhere.
fn sampled_decrease(g: &Graph) -> bool {
    let c = count_connected_sets_exhaustive(g).unwrap();
    let n = g.order();
    let c: Vec<f64> = c.counts().iter().map(|x| x.to_f64().unwrap()).collect();
    (1..20_000).any(|i| {
        let p = i as f64 / 20_000.0;
        let d: f64 = (1..=n)
            .map(|k| {
                (k as f64 * c[k] - (n - k + 1) as f64 * c[k - 1])
                    * p.powi(k as i32 - 1)
                    * (1.0 - p).powi((n - k) as i32)
            })
            .sum();
        d < -1e-9
    })
}

fn criterion_1(c6: &Census) -> Outcome {
    let decrease = c6
        .records
        .iter()
        .filter(|r| r.report.has_decrease())
        .count();
    let sampled = c6.graphs.iter().filter(|g| sampled_decrease(g)).count();
    outcome(
        c6.graphs.len() == 112
            && decrease == 37
            && sampled == 37
            && c6.elapsed < Duration::from_secs(10),
        format!(
            "{decrease}/{} with decrease (grid oracle {sampled}), {:.2?}",
            c6.graphs.len(),
            c6.elapsed
        ),
    )
}

fn criterion_2(c7: &Census) -> Outcome {
    let decrease = c7
        .records
        .iter()
        .filter(|r| r.report.has_decrease())
        .count();
    let sampled = c7.graphs.iter().filter(|g| sampled_decrease(g)).count();
    let three: Vec<&Graph> = c7
        .graphs
        .iter()
        .zip(&c7.records)
        .filter(|(_, r)| r.report.inflections.len() == 3)
        .map(|(g, _)| g)
        .collect();
    let example = parse_edge_list(THREE_INFLECTION_EDGES).unwrap();
    let iso = three.len() == 1 && are_isomorphic(three[0], &example).unwrap();
    outcome(
        c7.graphs.len() == 853
            && decrease == 383
            && sampled == 383
            && iso
            && c7.elapsed < Duration::from_secs(60),
        format!(
            "{decrease}/{} with decrease (grid oracle {sampled}), {} with three inflections, matches example: {iso}, {:.2?}",
            c7.graphs.len(),
            three.len(),
            c7.elapsed
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let graphs = generate_connected(8).unwrap();
    let s = run_census(&graphs, &tol(), Execution::Auto, 10).unwrap();
    let elapsed = start.elapsed();
    outcome(
        s.total_connected == 11117
            && s.inflection_count(3) == 84
            && elapsed < Duration::from_secs(1800),
        format!(
            "{} connected, {} with three inflections, {elapsed:.2?}",
            s.total_connected,
            s.inflection_count(3)
        ),
    )
}

fn criterion_4() -> Outcome {
    let r = analyze(&ReliabilityPoly::of_graph(&fam("path:6")).unwrap(), &tol()).unwrap();
    let Some(iv) = r.decrease_intervals.first() else {
        return outcome(false, "no decrease interval");
    };
    let (a, b) = (iv.start.approx(), iv.end.approx());
    outcome(
        r.decrease_intervals.len() == 1 && (a - 0.2137).abs() <= 5e-5 && (b - 0.5851).abs() <= 5e-5,
        format!("({a:.6}, {b:.6})"),
    )
}

fn criterion_5() -> Outcome {
    let (r, v) = maximize_threshold_constant(1e-12).unwrap();
    // Golden-section search on the function itself as a second opinion.
    let f = |r: f64| (r - 1.0) / (2.0 * r + 1.0 + (r - 1.0) * r.exp());
    let (mut a, mut b) = (1.0f64, 3.0f64);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-10 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if f(x1) < f(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    let golden = 0.5 * (a + b);
    outcome(
        (r - 1.729474372).abs() <= 1e-8
            && (v - 0.08510464442).abs() <= 1e-9
            && (golden - r).abs() <= 1e-6
            && f(1.0) == 0.0,
        format!("r = {r:.10}, f(r) = {v:.12}, golden section r = {golden:.8}"),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let specs = closed_form_families(12);
    for spec in &specs {
        let g = make_family(spec).unwrap();
        let oracle = count_connected_sets_exhaustive(&g).unwrap();
        let closed = ReliabilityPoly::closed_form(spec).unwrap();
        let counted = ReliabilityPoly::from_profile(&count_connected_sets(&g).unwrap());
        if closed.poly() != counted.poly()
            || closed.poly() != ReliabilityPoly::from_profile(&oracle).poly()
            || profile_closed_form(spec).unwrap() != oracle
        {
            failures.push(spec.to_string());
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} families, failures {failures:?}", specs.len()),
    )
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(big(n), big(k))
    }
}

/// Boundary identities, coefficient bounds, the `d_1` bound, endpoint
/// slopes and the Sperner failure, all computed from exhaustive counts.
fn sweep_graph(g: &Graph) -> Result<(), String> {
    let n = g.order();
    let prof: ConnSetProfile = count_connected_sets_exhaustive(g).unwrap();
    let c = |k: usize| prof.get(k);
    let m = g.size();
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut tau = 0;
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                tau += (g.has_edge(a, b) && g.has_edge(b, d) && g.has_edge(a, d)) as usize;
            }
        }
    }
    // Cut vertices by deletion.
    let t = (0..n)
        .filter(|&v| {
            let rest = g.vertex_mask() & !(1 << v);
            rest != 0 && !g.is_connected_set(rest)
        })
        .count();
    let wedges: usize = deg.iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
    if c(0) != big(0) || c(1) != big(n) || c(2) != big(m) {
        return Err("low coefficients".into());
    }
    if n >= 3 && BigInt::from(c(3)) != BigInt::from(wedges) - BigInt::from(2 * tau) {
        return Err("c_3".into());
    }
    if c(n - 1) != big(n - t) || c(n) != big(1) {
        return Err("high coefficients".into());
    }
    for k in 2..=n {
        if big(2) * c(k) > big(n - k + 1) * c(k - 1) {
            return Err(format!("adjacent bound at k = {k}"));
        }
        for s in 1..k {
            if big(k - s + 1) * c(k) > binom(n - s, k - s) * c(s) {
                return Err(format!("general bound at k = {k}, t = {s}"));
            }
        }
    }
    if n >= 2 {
        let c1 = |k: usize| BigInt::from(c(k));
        let d1 = BigInt::from(2) * c1(2) - BigInt::from(2 * (n - 1)) * c1(1);
        if d1 > BigInt::from(-((n * (n - 1)) as i64))
            || d1 != BigInt::from(2 * m) - BigInt::from(2 * n * (n - 1))
        {
            return Err("d_1".into());
        }
    }
    let rel = ReliabilityPoly::from_profile(&prof);
    let d = rel.poly().derivative();
    let at0 = d.coeff(0);
    let at1 = d.coeffs().iter().fold(BigRational::zero(), |a, x| a + x);
    if at0 != BigRational::from_integer(n.into()) || at1 != BigRational::from_integer(t.into()) {
        return Err("endpoint derivatives".into());
    }
    let f: Vec<BigUint> = (0..=n).map(|k| c(n - k)).collect();
    let fails = (0..n).any(|k| big(k + 1) * &f[k + 1] > big(n - k) * &f[k]);
    if fails == g.is_complete() {
        return Err("Sperner".into());
    }
    Ok(())
}

fn criterion_7(by_order: &[Census]) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for c in by_order {
        for g in &c.graphs {
            count += 1;
            if let Err(e) = sweep_graph(g) {
                failures.push(format!("{}: {e}", relshape_core::to_graph6(g)));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{count} graphs of orders 2..7, failures {failures:?}"),
    )
}

fn sparse(g: &Graph) -> bool {
    let n = g.order();
    g.size() * 10_000 <= 851 * n * n
}

fn criterion_8(by_order: &[Census]) -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    // No connected graph of order <= 10 is this sparse, so the census is
    // extended with sparse families of orders 12..20.
    let mut sparse_graphs: Vec<(String, Graph)> = by_order
        .iter()
        .flat_map(|c| c.graphs.iter())
        .filter(|g| sparse(g))
        .map(|g| (relshape_core::to_graph6(g), g.clone()))
        .collect();
    let census_sparse = sparse_graphs.len();
    for n in 12..=20 {
        for s in [
            format!("cycle:{n}"),
            format!("path:{n}"),
            format!("empty:{n}"),
            format!("union(cycle:{},complete:1)", n - 1),
        ] {
            sparse_graphs.push((s.clone(), fam(&s)));
        }
    }
    let mut two_connected = 0;
    for (name, g) in &sparse_graphs {
        assert!(sparse(g));
        let r = analyze(&ReliabilityPoly::of_graph(g).unwrap(), &tol()).unwrap();
        if !r.has_decrease() {
            failures.push(format!("decrease {name}"));
        }
        if g.is_two_connected() {
            two_connected += 1;
            if r.inflections.len() < 2 {
                failures.push(format!("inflections {name}"));
            }
        }
    }

    // Trees from the generator agree with the census filter where both exist.
    let mut trees = 0;
    for n in 4..=8 {
        let ts = generate_trees(n).unwrap();
        if n <= 7 {
            let filtered = by_order[n - 2]
                .graphs
                .iter()
                .filter(|g| g.size() == n - 1)
                .count();
            if filtered != ts.len() {
                failures.push(format!("tree count {n}"));
            }
        }
        for t in ts {
            trees += 1;
            if analyze(&ReliabilityPoly::of_graph(&t).unwrap(), &tol())
                .unwrap()
                .inflections
                .is_empty()
            {
                failures.push(format!("tree {}", relshape_core::to_graph6(&t)));
            }
        }
    }

    let mut cut = 0;
    for c in by_order {
        for (g, r) in c.graphs.iter().zip(&c.records) {
            if g.cut_vertices().len() >= 2 {
                cut += 1;
                if r.report.fixed_points.is_empty() {
                    failures.push(format!("fixed point {}", r.graph6));
                }
            }
        }
    }

    for n in 7..=20 {
        let f =
            ReliabilityPoly::of_graph(&make_family(&FamilySpec::BondedCompleteLeaf { n }).unwrap())
                .unwrap();
        if !f.derivative().eval(&rat(2, 5)).is_negative() {
            failures.push(format!("bonded {n}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "sparse: {} ({census_sparse} from census), two-connected sparse: {two_connected}, trees: {trees}, t >= 2: {cut}, bonded 7..20; failures {failures:?}",
            sparse_graphs.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    for n in 4..=20i64 {
        let rel = ReliabilityPoly::closed_form(&FamilySpec::Star { n: n as usize }).unwrap();
        let r = analyze(&rel, &tol()).unwrap();
        // The second derivative is (n-1)^2 (np - 2)(1-p)^(n-3).
        let expected = &Poly::from_ints(&[-2, n])
            .scale(&BigRational::from_integer(((n - 1) * (n - 1)).into()))
            * &Poly::one_minus_x().pow(n as u32 - 3);
        if r.inflections.len() != 1
            || !r.inflections[0].contains(&rat(2, n))
            || rel.second_derivative() != expected
        {
            failures.push(n);
        }
    }
    outcome(
        failures.is_empty(),
        format!("n = 4..20, failures {failures:?}"),
    )
}

fn criterion_10() -> Outcome {
    let mut failures = Vec::new();
    for n in 12..=20 {
        let g = fam(&format!("union(star:{n},complete:1)"));
        let r = analyze(&ReliabilityPoly::of_graph(&g).unwrap(), &tol()).unwrap();
        if r.decrease_intervals.len() != 2 {
            failures.push(n);
        }
    }
    outcome(
        failures.is_empty(),
        format!("n = 12..20, failures {failures:?}"),
    )
}

fn criterion_11() -> Outcome {
    // Cycle profile: n sets of each size below n, plus the whole cycle.
    let n = 50usize;
    let mut c = vec![BigUint::from(n); n + 1];
    c[0] = BigUint::zero();
    c[n] = BigUint::from(1u32);
    let rel = ReliabilityPoly::from_profile(&ConnSetProfile::new(c).unwrap());
    let q = rat(1, 4);
    let value = rel.eval_exact(&q);
    let r = analyze(&rel, &tol()).unwrap();
    outcome(
        value < q && r.fixed_points.len() >= 2,
        format!(
            "f(1/4) = {:.6e}, {} fixed points",
            to_f64(&value),
            r.fixed_points.len()
        ),
    )
}

fn criterion_12() -> Outcome {
    let mut failures = Vec::new();
    let cases = monte_carlo_cases();
    for (spec, p, seed) in &cases {
        let g = fam(spec);
        let prof = count_connected_sets_exhaustive(&g).unwrap();
        let n = g.order();
        let exact: f64 = (1..=n)
            .map(|k| {
                prof.get(k).to_f64().unwrap() * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
            })
            .sum();
        let e = monte_carlo_estimate(&g, *p, 100_000, *seed, Execution::Auto).unwrap();
        if (e.mean - exact).abs() > 4.0 * e.stderr {
            failures.push(format!("{spec}@{p}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} triples, failures {failures:?}", cases.len()),
    )
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    // Listing pass used by some test runners.
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let slow = args
        .iter()
        .any(|a| a == "--ignored" || a == "--include-ignored")
        || std::env::var("RELSHAPE_SLOW").is_ok_and(|v| v == "1");

    let by_order: Vec<Census> = (2..=7).map(census).collect();
    let orders: BTreeSet<usize> = by_order.iter().map(|c| c.graphs[0].order()).collect();
    assert_eq!(orders.len(), 6);
    assert!(parse_graph6("@").is_ok());

    let mut results: Vec<(u32, Option<Outcome>)> = vec![
        (1, Some(criterion_1(&by_order[4]))),
        (2, Some(criterion_2(&by_order[5]))),
        (3, slow.then(criterion_3)),
        (4, Some(criterion_4())),
        (5, Some(criterion_5())),
        (6, Some(criterion_6())),
        (7, Some(criterion_7(&by_order))),
        (8, Some(criterion_8(&by_order))),
        (9, Some(criterion_9())),
        (10, Some(criterion_10())),
        (11, Some(criterion_11())),
        (12, Some(criterion_12())),
    ];
    let mut failed = 0;
    for (id, r) in results.drain(..) {
        match r {
            Some(o) => {
                failed += !o.passed as usize;
                println!(
                    "criterion {id:>2}: {} {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.detail
                );
            }
            None => {
                println!("criterion {id:>2}: SKIP opt-in, run with --ignored or RELSHAPE_SLOW=1")
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
