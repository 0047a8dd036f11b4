//! Canonical labelling of small graphs.
//!
//! The canonical key of a graph is the lexicographically smallest upper
//! triangle bit string (column-major, as in graph6) over all `n!` vertex
//! orderings. Since graph6 packs exactly that bit string, the key is stored
//! as the graph6 text of the minimising relabelling.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::{parse_graph6, to_graph6};

/// Largest order accepted by [`canonical_key`].
pub const MAX_CANON_ORDER: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// The key is the graph6 encoding of the canonical relabelling.
    pub fn as_graph6(&self) -> &str {
        std::str::from_utf8(&self.0).expect("graph6 is ASCII")
    }

    pub fn to_graph(&self) -> Graph {
        parse_graph6(self.as_graph6()).expect("canonical key is valid graph6")
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.as_graph6())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_graph6())
    }
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    order: Vec<usize>,
    /// Column `j` of the current prefix: bit `j - 1 - i` is `x(order[i], order[j])`.
    cols: Vec<u64>,
    best: Option<Vec<u64>>,
    best_order: Vec<usize>,
    /// Bumped whenever `best` changes.
    generation: u64,
}

impl Search<'_> {
    fn column(&self, pos: usize, v: usize) -> u64 {
        let nbrs = self.g.neighbors(v);
        self.order[..pos]
            .iter()
            .fold(0u64, |acc, &u| acc << 1 | (nbrs >> u & 1))
    }

    /// `equal` says whether columns `0..pos` coincide with the current best.
    fn run(&mut self, pos: usize, used: u64, mut equal: bool) {
        if pos == self.n {
            self.best = Some(self.cols.clone());
            self.best_order = self.order.clone();
            self.generation += 1;
            return;
        }
        for v in 0..self.n {
            if used >> v & 1 == 1 {
                continue;
            }
            let col = self.column(pos, v);
            let child_equal = match (&self.best, equal) {
                (Some(best), true) => match col.cmp(&best[pos]) {
                    std::cmp::Ordering::Greater => continue,
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Less => false,
                },
                (None, _) => false,
                (Some(_), false) => false,
            };
            self.order.push(v);
            self.cols.push(col);
            let before = self.generation;
            self.run(pos + 1, used | 1 << v, child_equal);
            self.order.pop();
            self.cols.pop();
            if self.generation != before {
                // The new best extends our prefix.
                equal = true;
            }
        }
    }
}

/// Position-to-vertex ordering realising the canonical key.
pub fn canonical_order(g: &Graph) -> Result<Vec<usize>> {
    let n = g.order();
    if n > MAX_CANON_ORDER {
        return Err(Error::Unsupported(format!(
            "canonical labelling is limited to order {MAX_CANON_ORDER}, got {n}"
        )));
    }
    let mut search = Search {
        g,
        n,
        order: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        best: None,
        best_order: Vec::new(),
        generation: 0,
    };
    search.run(0, 0, false);
    Ok(search.best_order)
}

pub fn canonical_form(g: &Graph) -> Result<Graph> {
    let order = canonical_order(g)?;
    // order[pos] = v, so v is relabelled to pos.
    let mut perm = vec![0; g.order()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    g.relabel(&perm)
}

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey> {
    Ok(CanonicalKey(to_graph6(&canonical_form(g)?).into_bytes()))
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    Ok(a.order() == b.order() && a.size() == b.size() && canonical_key(a)? == canonical_key(b)?)
}
