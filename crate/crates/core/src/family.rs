//! Named graph families and the `kind:p1,p2` / `union(a,b)` selector grammar.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// `K_n`.
    Complete { n: usize },
    /// `n` isolated vertices.
    Empty { n: usize },
    /// `P_n`, a path on `n` vertices.
    Path { n: usize },
    /// `C_n`, `n >= 3`.
    Cycle { n: usize },
    /// `K_{1,n-1}`: a centre joined to `n - 1` leaves (order `n`).
    Star { n: usize },
    /// `K_{a,b}`.
    CompleteBipartite { a: usize, b: usize },
    /// `K_{n-1}` with a pendant vertex attached (order `n`).
    BondedCompleteLeaf { n: usize },
    DisjointUnion {
        left: Box<FamilySpec>,
        right: Box<FamilySpec>,
    },
}

impl FamilySpec {
    pub fn order(&self) -> usize {
        match self {
            FamilySpec::Complete { n }
            | FamilySpec::Empty { n }
            | FamilySpec::Path { n }
            | FamilySpec::Cycle { n }
            | FamilySpec::Star { n }
            | FamilySpec::BondedCompleteLeaf { n } => *n,
            FamilySpec::CompleteBipartite { a, b } => a + b,
            FamilySpec::DisjointUnion { left, right } => left.order() + right.order(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidFamily(format!("{self}: {msg}")));
        match self {
            FamilySpec::Complete { n }
            | FamilySpec::Empty { n }
            | FamilySpec::Path { n }
            | FamilySpec::Star { n }
                if *n == 0 =>
            {
                return bad("order must be positive")
            }
            FamilySpec::Cycle { n } if *n < 3 => return bad("cycles need at least 3 vertices"),
            FamilySpec::BondedCompleteLeaf { n } if *n < 2 => {
                return bad("needs at least 2 vertices")
            }
            FamilySpec::CompleteBipartite { a, b } if *a == 0 || *b == 0 => {
                return bad("both sides must be nonempty")
            }
            FamilySpec::DisjointUnion { left, right } => {
                left.validate()?;
                right.validate()?;
            }
            _ => {}
        }
        if self.order() > MAX_ORDER {
            return Err(Error::OrderOutOfRange(self.order()));
        }
        Ok(())
    }
}

pub fn make_family(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.order();
    let mut b = GraphBuilder::new(n)?;
    match spec {
        FamilySpec::Complete { n } => {
            for v in 0..*n {
                for u in 0..v {
                    b.add_edge(u, v)?;
                }
            }
        }
        FamilySpec::Empty { .. } => {}
        FamilySpec::Path { n } => {
            for v in 1..*n {
                b.add_edge(v - 1, v)?;
            }
        }
        FamilySpec::Cycle { n } => {
            for v in 0..*n {
                b.add_edge(v, (v + 1) % n)?;
            }
        }
        FamilySpec::Star { n } => {
            for v in 1..*n {
                b.add_edge(0, v)?;
            }
        }
        FamilySpec::CompleteBipartite { a, b: bb } => {
            for u in 0..*a {
                for v in *a..*a + *bb {
                    b.add_edge(u, v)?;
                }
            }
        }
        FamilySpec::BondedCompleteLeaf { n } => {
            for v in 0..n - 1 {
                for u in 0..v {
                    b.add_edge(u, v)?;
                }
            }
            // The pendant vertex hangs off vertex 0.
            b.add_edge(0, n - 1)?;
        }
        FamilySpec::DisjointUnion { left, right } => {
            return make_family(left)?.disjoint_union(&make_family(right)?);
        }
    }
    Ok(b.build())
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Complete { n } => write!(f, "complete:{n}"),
            FamilySpec::Empty { n } => write!(f, "empty:{n}"),
            FamilySpec::Path { n } => write!(f, "path:{n}"),
            FamilySpec::Cycle { n } => write!(f, "cycle:{n}"),
            FamilySpec::Star { n } => write!(f, "star:{n}"),
            FamilySpec::CompleteBipartite { a, b } => write!(f, "complete-bipartite:{a},{b}"),
            FamilySpec::BondedCompleteLeaf { n } => write!(f, "bonded-complete-leaf:{n}"),
            FamilySpec::DisjointUnion { left, right } => write!(f, "union({left},{right})"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("union(").and_then(|r| r.strip_suffix(')')) {
            let split = top_level_comma(inner)
                .ok_or_else(|| Error::InvalidFamily(format!("{s}: expected union(a,b)")))?;
            let spec = FamilySpec::DisjointUnion {
                left: Box::new(inner[..split].parse()?),
                right: Box::new(inner[split + 1..].parse()?),
            };
            spec.validate()?;
            return Ok(spec);
        }
        let (kind, params) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidFamily(format!("{s}: expected kind:params")))?;
        let params: Vec<usize> = params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::InvalidFamily(format!("{s}: bad parameter {p:?}")))
            })
            .collect::<Result<_>>()?;
        let one = || match params.as_slice() {
            [n] => Ok(*n),
            _ => Err(Error::InvalidFamily(format!("{s}: expected one parameter"))),
        };
        let spec = match kind.trim() {
            "complete" | "K" => FamilySpec::Complete { n: one()? },
            "empty" => FamilySpec::Empty { n: one()? },
            "path" | "P" => FamilySpec::Path { n: one()? },
            "cycle" | "C" => FamilySpec::Cycle { n: one()? },
            "star" => FamilySpec::Star { n: one()? },
            "bonded-complete-leaf" => FamilySpec::BondedCompleteLeaf { n: one()? },
            "complete-bipartite" => match params.as_slice() {
                [a, b] => FamilySpec::CompleteBipartite { a: *a, b: *b },
                [a] => FamilySpec::CompleteBipartite { a: *a, b: *a },
                _ => {
                    return Err(Error::InvalidFamily(format!(
                        "{s}: expected one or two parameters"
                    )))
                }
            },
            other => {
                return Err(Error::InvalidFamily(format!(
                    "unknown family kind {other:?}"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            // A comma directly after "kind:p" belongs to the parameter list
            // only when the next token is a digit.
            ',' if depth == 0 => {
                let rest = s[i + 1..].trim_start();
                if !rest.starts_with(|c: char| c.is_ascii_digit()) {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
