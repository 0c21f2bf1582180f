//! Cycle-count model for SCL and simplified SCL decoders.
//!
//! Every visited non-root node of the (possibly pruned) decoding tree costs
//! one LLR cycle. Generic information leaves cost one more cycle each;
//! special nodes cost `q` (Rate-0), `q + 1` (Rep) or `max(κ + 1, q)`
//! (Rate-1 and SPC), with `q = min(Nν, m)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::codec::CodeSpec;
use crate::special::{NodeClass, NodePolicy};

pub const DEFAULT_KAPPA: usize = 1;

/// A special node chosen by the greedy top-down walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialNode {
    pub class: NodeClass,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NodeStats {
    pub nodes: Vec<SpecialNode>,
    /// `(class, length) -> count`.
    pub counts: BTreeMap<(NodeClass, usize), usize>,
    pub generic_info_leaves: usize,
    pub generic_frozen_leaves: usize,
}

impl NodeStats {
    /// Leaves covered by special nodes plus generic leaves.
    pub fn leaf_coverage(&self) -> usize {
        self.counts.iter().map(|((_, len), c)| len * c).sum::<usize>()
            + self.generic_info_leaves
            + self.generic_frozen_leaves
    }

    pub fn count(&self, class: NodeClass, len: usize) -> usize {
        self.counts.get(&(class, len)).copied().unwrap_or(0)
    }

    /// Node counts as a table: one row per class, one column per length.
    pub fn table(&self) -> String {
        let mut lens: Vec<usize> = self.counts.keys().map(|&(_, l)| l).collect();
        lens.sort_unstable();
        lens.dedup();
        let mut out = String::from("class");
        for l in &lens {
            let _ = write!(out, "\t{l}");
        }
        out.push('\n');
        for class in NodeClass::SPECIAL {
            out.push_str(class.label());
            for &l in &lens {
                let _ = write!(out, "\t{}", self.count(class, l));
            }
            out.push('\n');
        }
        out
    }
}

/// Greedy top-down pruning: the first enabled special node on each branch
/// is recorded and its subtree skipped.
pub fn enumerate_special_nodes(spec: &CodeSpec, policy: &NodePolicy) -> NodeStats {
    let mut stats = NodeStats::default();
    walk(spec.info_mask(), 0, policy, &mut stats);
    stats
}

fn walk(info: &[bool], offset: usize, policy: &NodePolicy, stats: &mut NodeStats) {
    if let Some(class) = policy.special_class(info) {
        let len = info.len();
        stats.nodes.push(SpecialNode { class, offset, len });
        *stats.counts.entry((class, len)).or_default() += 1;
    } else if info.len() == 1 {
        if info[0] {
            stats.generic_info_leaves += 1;
        } else {
            stats.generic_frozen_leaves += 1;
        }
    } else {
        let h = info.len() / 2;
        walk(&info[..h], offset, policy, stats);
        walk(&info[h..], offset + h, policy, stats);
    }
}

/// `2N - 2 + K`.
pub fn scl_cycles(spec: &CodeSpec) -> usize {
    2 * spec.block_len() - 2 + spec.info_len()
}

pub fn node_cycles(class: NodeClass, len: usize, m: usize, kappa: usize) -> usize {
    let q = len.min(m);
    match class {
        NodeClass::Rate0 => q,
        NodeClass::Rep => q + 1,
        NodeClass::Rate1 | NodeClass::Spc => (kappa + 1).max(q),
        NodeClass::Generic => 0,
    }
}

pub fn sscl_cycles(spec: &CodeSpec, policy: &NodePolicy, kappa: usize) -> usize {
    fn cost(info: &[bool], root: bool, policy: &NodePolicy, m: usize, kappa: usize) -> usize {
        let visit = usize::from(!root);
        if let Some(class) = policy.special_class(info) {
            return visit + node_cycles(class, info.len(), m, kappa);
        }
        if info.len() == 1 {
            return visit + usize::from(info[0]);
        }
        let h = info.len() / 2;
        visit
            + cost(&info[..h], false, policy, m, kappa)
            + cost(&info[h..], false, policy, m, kappa)
    }
    cost(spec.info_mask(), true, policy, spec.memory(), kappa)
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeStatRow {
    pub class: NodeClass,
    pub len: usize,
    pub count: usize,
    pub q: usize,
    pub cycles_each: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatencyReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub kappa: usize,
    pub scl_cycles: usize,
    pub sscl_cycles: usize,
    pub reduction_pct: f64,
    pub node_stats: Vec<NodeStatRow>,
    pub generic_info_leaves: usize,
    pub generic_frozen_leaves: usize,
}

impl LatencyReport {
    pub fn new(spec: &CodeSpec, policy: &NodePolicy, kappa: usize) -> Self {
        let stats = enumerate_special_nodes(spec, policy);
        let m = spec.memory();
        let scl = scl_cycles(spec);
        let sscl = sscl_cycles(spec, policy, kappa);
        let node_stats = stats
            .counts
            .iter()
            .map(|(&(class, len), &count)| NodeStatRow {
                class,
                len,
                count,
                q: len.min(m),
                cycles_each: node_cycles(class, len, m, kappa),
            })
            .collect();
        Self {
            n: spec.block_len(),
            k: spec.info_len(),
            m,
            kappa,
            scl_cycles: scl,
            sscl_cycles: sscl,
            reduction_pct: 100.0 * (scl as f64 - sscl as f64) / scl as f64,
            node_stats,
            generic_info_leaves: stats.generic_info_leaves,
            generic_frozen_leaves: stats.generic_frozen_leaves,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,len,count,q,cycles_each\n");
        for r in &self.node_stats {
            let _ = writeln!(out, "{},{},{},{},{}", r.class.label(), r.len, r.count, r.q, r.cycles_each);
        }
        let _ = writeln!(out, "generic_info_leaf,1,{},0,1", self.generic_info_leaves);
        let _ = writeln!(out, "generic_frozen_leaf,1,{},0,0", self.generic_frozen_leaves);
        out
    }
}
