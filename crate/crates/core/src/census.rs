//! Exhaustive census of small connected graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use num_rational::BigRational;
use serde::Serialize;

use crate::canon::{canonical_key, CanonicalKey, MAX_CANON_ORDER};
use crate::error::{Error, Result};
use crate::graph::{full_mask, Graph};
use crate::graph6::{parse_graph6, to_graph6};
use crate::parallel::{map_ordered, Execution};
use crate::reliability::ReliabilityPoly;
use crate::shape::{analyze, ShapeClass, ShapeReport};

pub const MIN_CENSUS_ORDER: usize = 2;
pub const MAX_CENSUS_ORDER: usize = 8;
pub const DEFAULT_EXEMPLARS: usize = 10;

/// Canonical keys of all connected graphs of order `n`, sorted.
///
/// Every connected graph on `n >= 2` vertices has a vertex whose removal
/// leaves it connected (a leaf of a spanning tree), so extending connected
/// graphs of order `n - 1` by one vertex reaches every class.
pub fn generate_connected_keys(n: usize, exec: Execution) -> Result<Vec<CanonicalKey>> {
    if !(1..=MAX_CENSUS_ORDER).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "census order must be in {MIN_CENSUS_ORDER}..={MAX_CENSUS_ORDER}, got {n}"
        )));
    }
    let mut level: Vec<CanonicalKey> = vec![canonical_key(&Graph::empty(1)?)?];
    for k in 2..=n {
        let parents: Vec<Graph> = level.iter().map(CanonicalKey::to_graph).collect();
        let children = map_ordered(&parents, exec, |g| {
            let mut keys = BTreeSet::new();
            for nbrs in 1..=full_mask(k - 1) {
                let h = g.with_new_vertex(nbrs).expect("order within range");
                keys.insert(canonical_key(&h).expect("order within range"));
            }
            keys
        });
        let mut all = BTreeSet::new();
        for keys in children {
            all.extend(keys);
        }
        level = all.into_iter().collect();
    }
    Ok(level)
}

/// Connected graphs of order `2..=8`, one per isomorphism class, in
/// canonical form and sorted by canonical graph6.
pub fn generate_connected(n: usize) -> Result<Vec<Graph>> {
    generate_connected_with(n, Execution::Auto)
}

pub fn generate_connected_with(n: usize, exec: Execution) -> Result<Vec<Graph>> {
    if n < MIN_CENSUS_ORDER {
        return Err(Error::InvalidArgument(format!(
            "census order must be in {MIN_CENSUS_ORDER}..={MAX_CENSUS_ORDER}, got {n}"
        )));
    }
    Ok(generate_connected_keys(n, exec)?
        .iter()
        .map(CanonicalKey::to_graph)
        .collect())
}

/// Trees of order `n`, one per isomorphism class, sorted by canonical graph6.
/// Every tree on two or more vertices is a smaller tree plus a leaf.
pub fn generate_trees(n: usize) -> Result<Vec<Graph>> {
    if !(1..=MAX_CANON_ORDER).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "tree order must be in 1..={MAX_CANON_ORDER}, got {n}"
        )));
    }
    let mut level: BTreeSet<CanonicalKey> = BTreeSet::from([canonical_key(&Graph::empty(1)?)?]);
    for k in 2..=n {
        let mut next = BTreeSet::new();
        for key in &level {
            let g = key.to_graph();
            for v in 0..k - 1 {
                next.insert(canonical_key(&g.with_new_vertex(1 << v)?)?);
            }
        }
        level = next;
    }
    Ok(level.iter().map(CanonicalKey::to_graph).collect())
}

/// Graphs from graph6 lines, skipping blank lines. Errors carry the 1-based
/// line number.
pub fn stream_graph6<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Graph)>> {
    reader.lines().enumerate().filter_map(|(i, line)| {
        let line_no = i + 1;
        match line {
            Err(e) => Some(Err(Error::AtLine {
                line: line_no,
                source: Box::new(e.into()),
            })),
            Ok(s) if s.trim().is_empty() => None,
            Ok(s) => Some(
                parse_graph6(s.trim_end_matches(['\r', '\n']))
                    .map(|g| (line_no, g))
                    .map_err(|e| Error::AtLine {
                        line: line_no,
                        source: Box::new(e),
                    }),
            ),
        }
    })
}

/// Per-graph census data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    /// Canonical graph6 when the order allows, otherwise the input encoding.
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub leaves: usize,
    pub cut_vertices: usize,
    #[serde(skip)]
    pub report: ShapeReport,
}

impl GraphRecord {
    pub fn inflection_count(&self) -> usize {
        self.report.inflections.len()
    }

    pub fn fixed_point_count(&self) -> usize {
        self.report.fixed_points.len()
    }
}

pub fn analyze_record(g: &Graph, tol: &BigRational) -> Result<GraphRecord> {
    let graph6 = if g.order() <= MAX_CANON_ORDER {
        canonical_key(g)?.as_graph6().to_string()
    } else {
        to_graph6(g)
    };
    let rel = ReliabilityPoly::of_graph(g)?;
    let report = analyze(&rel, tol)?;
    let stats = g.structural_stats();
    Ok(GraphRecord {
        graph6,
        n: g.order(),
        m: g.size(),
        connected: g.is_connected(),
        leaves: stats.leaves,
        cut_vertices: stats.cut_vertices,
        report,
    })
}

/// Predicates for which exemplars are kept.
pub const PREDICATES: [&str; 5] = [
    "decrease",
    "three-inflections",
    "multiple-fixed-points",
    "tangential-fixed-point",
    "class-other",
];

fn predicates_of(r: &GraphRecord) -> impl Iterator<Item = &'static str> {
    let rep = &r.report;
    [
        rep.has_decrease(),
        rep.inflections.len() == 3,
        rep.fixed_points.len() >= 2,
        !rep.tangential_fixed_points.is_empty(),
        rep.class == ShapeClass::Other,
    ]
    .into_iter()
    .zip(PREDICATES)
    .filter_map(|(hit, name)| hit.then_some(name))
}

/// Aggregate over connected graphs of one order. Disconnected inputs are
/// counted separately and otherwise ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub order: Option<usize>,
    pub total_connected: u64,
    pub skipped_disconnected: u64,
    pub with_decrease: u64,
    /// Graphs whose derivative has an even-multiplicity root: stationary
    /// points that do not start or end a decrease.
    pub with_tangential_stationary_point: u64,
    pub inflection_histogram: BTreeMap<usize, u64>,
    pub fixed_point_histogram: BTreeMap<usize, u64>,
    pub class_histogram: BTreeMap<ShapeClass, u64>,
    /// Three-inflection graphs with exactly one leaf and one cut vertex.
    pub three_inflections_one_leaf_one_cut: u64,
    pub exemplar_cap: usize,
    /// Lexicographically smallest graph6 strings per predicate.
    pub exemplars: BTreeMap<String, Vec<String>>,
}

impl CensusSummary {
    pub fn new(exemplar_cap: usize) -> Self {
        Self {
            order: None,
            total_connected: 0,
            skipped_disconnected: 0,
            with_decrease: 0,
            with_tangential_stationary_point: 0,
            inflection_histogram: BTreeMap::new(),
            fixed_point_histogram: BTreeMap::new(),
            class_histogram: BTreeMap::new(),
            three_inflections_one_leaf_one_cut: 0,
            exemplar_cap,
            exemplars: BTreeMap::new(),
        }
    }

    fn set_order(&mut self, n: usize, line: usize) -> Result<()> {
        match self.order {
            None => {
                self.order = Some(n);
                Ok(())
            }
            Some(e) if e == n => Ok(()),
            Some(expected) => Err(Error::MixedOrders {
                expected,
                found: n,
                line,
            }),
        }
    }

    pub fn add(&mut self, r: &GraphRecord, line: usize) -> Result<()> {
        self.set_order(r.n, line)?;
        if !r.connected {
            self.skipped_disconnected += 1;
            return Ok(());
        }
        let rep = &r.report;
        self.total_connected += 1;
        self.with_decrease += rep.has_decrease() as u64;
        self.with_tangential_stationary_point +=
            rep.stationary_points.iter().any(|s| !s.sign_change()) as u64;
        *self
            .inflection_histogram
            .entry(rep.inflections.len())
            .or_default() += 1;
        *self
            .fixed_point_histogram
            .entry(rep.fixed_points.len())
            .or_default() += 1;
        *self.class_histogram.entry(rep.class).or_default() += 1;
        if rep.inflections.len() == 3 && r.leaves == 1 && r.cut_vertices == 1 {
            self.three_inflections_one_leaf_one_cut += 1;
        }
        for name in predicates_of(r) {
            let list = self.exemplars.entry(name.to_string()).or_default();
            insert_capped(list, &r.graph6, self.exemplar_cap);
        }
        Ok(())
    }

    /// Combine two partial summaries; the result does not depend on the
    /// order in which graphs were split or merged.
    pub fn merge(&mut self, other: &CensusSummary) -> Result<()> {
        if let Some(n) = other.order {
            self.set_order(n, 0)?;
        }
        self.total_connected += other.total_connected;
        self.skipped_disconnected += other.skipped_disconnected;
        self.with_decrease += other.with_decrease;
        self.with_tangential_stationary_point += other.with_tangential_stationary_point;
        for (k, v) in &other.inflection_histogram {
            *self.inflection_histogram.entry(*k).or_default() += v;
        }
        for (k, v) in &other.fixed_point_histogram {
            *self.fixed_point_histogram.entry(*k).or_default() += v;
        }
        for (k, v) in &other.class_histogram {
            *self.class_histogram.entry(*k).or_default() += v;
        }
        self.three_inflections_one_leaf_one_cut += other.three_inflections_one_leaf_one_cut;
        for (name, list) in &other.exemplars {
            let mine = self.exemplars.entry(name.clone()).or_default();
            for g6 in list {
                insert_capped(mine, g6, self.exemplar_cap);
            }
        }
        Ok(())
    }

    pub fn inflection_count(&self, k: usize) -> u64 {
        self.inflection_histogram.get(&k).copied().unwrap_or(0)
    }
}

fn insert_capped(list: &mut Vec<String>, g6: &str, cap: usize) {
    if let Err(pos) = list.binary_search_by(|x| x.as_str().cmp(g6)) {
        if pos < cap {
            list.insert(pos, g6.to_string());
            list.truncate(cap);
        }
    }
}

/// Analyze graphs of a common order and aggregate.
pub fn run_census(
    graphs: &[Graph],
    tol: &BigRational,
    exec: Execution,
    exemplar_cap: usize,
) -> Result<CensusSummary> {
    let numbered: Vec<(usize, &Graph)> =
        graphs.iter().enumerate().map(|(i, g)| (i + 1, g)).collect();
    run_batch(&numbered, tol, exec, exemplar_cap)
}

fn run_batch(
    graphs: &[(usize, &Graph)],
    tol: &BigRational,
    exec: Execution,
    exemplar_cap: usize,
) -> Result<CensusSummary> {
    let mut summary = CensusSummary::new(exemplar_cap);
    if let Some(&(_, first)) = graphs.first() {
        let n = first.order();
        if let Some(&(line, g)) = graphs.iter().find(|(_, g)| g.order() != n) {
            return Err(Error::MixedOrders {
                expected: n,
                found: g.order(),
                line,
            });
        }
    }
    let records = map_ordered(graphs, exec, |(_, g)| analyze_record(g, tol));
    for (rec, (line, _)) in records.into_iter().zip(graphs) {
        summary.add(&rec?, *line)?;
    }
    Ok(summary)
}

const STREAM_BATCH: usize = 2048;

/// Census over a graph6 stream, processed in batches so memory stays flat.
pub fn run_census_stream<I>(
    stream: I,
    tol: &BigRational,
    exec: Execution,
    exemplar_cap: usize,
) -> Result<CensusSummary>
where
    I: IntoIterator<Item = Result<(usize, Graph)>>,
{
    let mut summary = CensusSummary::new(exemplar_cap);
    let mut batch: Vec<(usize, Graph)> = Vec::with_capacity(STREAM_BATCH);
    let flush = |batch: &mut Vec<(usize, Graph)>, summary: &mut CensusSummary| -> Result<()> {
        if let (Some(n), Some((line, g))) = (summary.order, batch.first()) {
            if g.order() != n {
                return Err(Error::MixedOrders {
                    expected: n,
                    found: g.order(),
                    line: *line,
                });
            }
        }
        let refs: Vec<(usize, &Graph)> = batch.iter().map(|(l, g)| (*l, g)).collect();
        let part = run_batch(&refs, tol, exec, exemplar_cap)?;
        summary.merge(&part)?;
        batch.clear();
        Ok(())
    };
    for item in stream {
        batch.push(item?);
        if batch.len() == STREAM_BATCH {
            flush(&mut batch, &mut summary)?;
        }
    }
    if !batch.is_empty() {
        flush(&mut batch, &mut summary)?;
    }
    Ok(summary)
}

/// Generate and analyze every connected graph of order `n`.
pub fn census_of_order(
    n: usize,
    tol: &BigRational,
    exec: Execution,
    exemplar_cap: usize,
) -> Result<CensusSummary> {
    let graphs = generate_connected_with(n, exec)?;
    run_census(&graphs, tol, exec, exemplar_cap)
}
