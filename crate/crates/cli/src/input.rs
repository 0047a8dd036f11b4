//! Graph selection from `--graph6`, `--edges` or `--family`.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use relshape_core::connsets::{count_connected_sets, profile_closed_form, MAX_ENUMERATION_ORDER};
use relshape_core::{
    make_family, parse_edge_list, parse_graph6, ConnSetProfile, FamilySpec, Graph, ReliabilityPoly,
};

use crate::error::CliError;

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphSelector {
    /// Graph in graph6 format.
    #[arg(long, value_name = "STRING")]
    pub graph6: Option<String>,
    /// Edge-list file: the order, then vertex pairs.
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
    /// Named family, e.g. `path:6`, `complete-bipartite:3,4`,
    /// `union(star:20,complete:1)`.
    #[arg(long, value_name = "SPEC")]
    pub family: Option<String>,
}

pub struct Loaded {
    pub graph: Graph,
    pub family: Option<FamilySpec>,
    pub profile: ConnSetProfile,
    pub rel: ReliabilityPoly,
}

impl GraphSelector {
    pub fn load(&self) -> Result<Loaded, CliError> {
        let (graph, family) = if let Some(s) = &self.graph6 {
            (parse_graph6(s.trim())?, None)
        } else if let Some(path) = &self.edges {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            (parse_edge_list(&text)?, None)
        } else if let Some(s) = &self.family {
            let spec: FamilySpec = s.parse()?;
            (make_family(&spec)?, Some(spec))
        } else {
            return Err(CliError::usage(
                "one of --graph6, --edges, --family is required",
            ));
        };
        let profile = match &family {
            Some(spec) => {
                let closed = profile_closed_form(spec)?;
                if graph.order() <= MAX_ENUMERATION_ORDER && closed != count_connected_sets(&graph)?
                {
                    return Err(CliError::invariant(format!(
                        "closed-form counts for {spec} disagree with enumeration"
                    )));
                }
                closed
            }
            None => count_connected_sets(&graph)?,
        };
        let rel = ReliabilityPoly::from_profile(&profile);
        if let Some(spec) = &family {
            if ReliabilityPoly::closed_form(spec)?.poly() != rel.poly() {
                return Err(CliError::invariant(format!(
                    "closed-form polynomial for {spec} disagrees with its counts"
                )));
            }
        }
        Ok(Loaded {
            graph,
            family,
            profile,
            rel,
        })
    }
}
