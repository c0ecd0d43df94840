//! Directed views of one image's orders.
//!
//! Occlusion edges run occluder -> occludee; depth edges run closer ->
//! farther. Symmetric relations (bidirectional occlusion, equal depth,
//! mutual overlap) appear as a pair of opposite edges.

use std::collections::{BTreeMap, HashSet};

use crate::model::{
    DepthOrder, ImageAnnotation, InstanceId, ModelError, OcclusionRelation, RangeKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepthEdgeKind {
    /// Distinct ranges, one instance strictly closer.
    StrictDistinct,
    /// Distinct ranges perceived at the same depth.
    Equal,
    /// Overlapping ranges with a nearer side.
    OverlapDirected,
    /// Overlapping ranges with no nearer side.
    OverlapMutual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DepthEdge {
    pub from: InstanceId,
    pub to: InstanceId,
    pub kind: DepthEdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderGraph {
    nodes: Vec<InstanceId>,
    occlusion_edges: Vec<(InstanceId, InstanceId)>,
    depth_edges: Vec<DepthEdge>,
}

impl OrderGraph {
    /// Assembles a graph from raw parts, checking that every edge endpoint
    /// is a node.
    pub fn from_parts(
        mut nodes: Vec<InstanceId>,
        mut occlusion_edges: Vec<(InstanceId, InstanceId)>,
        mut depth_edges: Vec<DepthEdge>,
    ) -> Result<Self, ModelError> {
        nodes.sort_unstable();
        nodes.dedup();
        let known = |id: InstanceId| nodes.binary_search(&id).is_ok();
        let dangling = |from: InstanceId, to: InstanceId| {
            let missing = if known(from) { to } else { from };
            ModelError::UnknownInstance {
                a: from,
                b: to,
                missing,
            }
        };
        for &(from, to) in &occlusion_edges {
            if !known(from) || !known(to) {
                return Err(dangling(from, to));
            }
        }
        for e in &depth_edges {
            if !known(e.from) || !known(e.to) {
                return Err(dangling(e.from, e.to));
            }
        }
        occlusion_edges.sort_unstable();
        depth_edges.sort_unstable();
        Ok(Self {
            nodes,
            occlusion_edges,
            depth_edges,
        })
    }

    pub fn nodes(&self) -> &[InstanceId] {
        &self.nodes
    }

    pub fn occlusion_edges(&self) -> &[(InstanceId, InstanceId)] {
        &self.occlusion_edges
    }

    pub fn depth_edges(&self) -> &[DepthEdge] {
        &self.depth_edges
    }

    /// Nodes touching no occlusion edge.
    pub fn isolated_in_occlusion(&self) -> Vec<InstanceId> {
        let touched: HashSet<InstanceId> = self
            .occlusion_edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        self.nodes
            .iter()
            .copied()
            .filter(|n| !touched.contains(n))
            .collect()
    }
}

pub fn build_order_graph(ann: &ImageAnnotation) -> Result<OrderGraph, ModelError> {
    let nodes: Vec<InstanceId> = ann.instances().iter().map(|i| i.instance_id).collect();
    let mut occ = Vec::new();
    let mut depth = Vec::new();
    for p in ann.pairs() {
        if let Some(rel) = p.occlusion {
            let (ab, ba) = rel.flags();
            if ab {
                occ.push((p.a, p.b));
            }
            if ba {
                occ.push((p.b, p.a));
            }
        }
        if let Some(rel) = p.depth {
            let (directed, mutual) = match rel.range {
                RangeKind::Distinct => (DepthEdgeKind::StrictDistinct, DepthEdgeKind::Equal),
                RangeKind::Overlap => {
                    (DepthEdgeKind::OverlapDirected, DepthEdgeKind::OverlapMutual)
                }
            };
            let edge = |from, to, kind| DepthEdge { from, to, kind };
            match rel.order {
                DepthOrder::Closer => depth.push(edge(p.a, p.b, directed)),
                DepthOrder::Farther => depth.push(edge(p.b, p.a, directed)),
                DepthOrder::Equal => {
                    depth.push(edge(p.a, p.b, mutual));
                    depth.push(edge(p.b, p.a, mutual));
                }
            }
        }
    }
    OrderGraph::from_parts(nodes, occ, depth)
}

/// Number of occlusion edges a relation contributes.
pub fn occlusion_edge_count(rel: OcclusionRelation) -> usize {
    let (ab, ba) = rel.flags();
    usize::from(ab) + usize::from(ba)
}

/// A directed cycle of strictly-closer edges, rotated so that the smallest
/// instance id comes first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DepthCycle(pub Vec<InstanceId>);

/// Enumerates every elementary cycle formed by strict distinct closer
/// edges. Equal and overlap edges never participate. The result is sorted;
/// an empty list means the strict relation is acyclic.
pub fn check_depth_consistency(graph: &OrderGraph) -> Vec<DepthCycle> {
    let index: BTreeMap<InstanceId, usize> = graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let n = graph.nodes().len();
    let mut adj = vec![Vec::new(); n];
    for e in graph.depth_edges() {
        if e.kind == DepthEdgeKind::StrictDistinct {
            adj[index[&e.from]].push(index[&e.to]);
        }
    }
    for succ in &mut adj {
        succ.sort_unstable();
        succ.dedup();
    }
    let mut cycles: Vec<DepthCycle> = elementary_cycles(&adj)
        .into_iter()
        .map(|c| DepthCycle(c.into_iter().map(|i| graph.nodes()[i]).collect()))
        .collect();
    cycles.sort();
    cycles
}

/// Johnson-style circuit enumeration. Each cycle is reported once, starting
/// at its smallest vertex index.
fn elementary_cycles(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    for start in 0..n {
        let component = strong_component_from(adj, start);
        let closes = (0..n).any(|v| component[v] && adj[v].contains(&start));
        if !closes {
            continue;
        }
        let mut search = CircuitSearch {
            adj,
            allowed: component,
            blocked: vec![false; n],
            blocked_by: vec![Vec::new(); n],
            stack: Vec::new(),
            start,
            out: &mut out,
        };
        search.circuit(start);
    }
    out
}

/// Vertices `>= start` lying on a cycle through `start` within the subgraph
/// induced by `{v : v >= start}`.
fn strong_component_from(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let n = adj.len();
    let mut forward = vec![false; n];
    let mut stack = vec![start];
    forward[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if w >= start && !forward[w] {
                forward[w] = true;
                stack.push(w);
            }
        }
    }
    let mut reverse = vec![Vec::new(); n];
    for (v, succ) in adj.iter().enumerate() {
        for &w in succ {
            reverse[w].push(v);
        }
    }
    let mut backward = vec![false; n];
    backward[start] = true;
    stack.push(start);
    while let Some(v) = stack.pop() {
        for &w in &reverse[v] {
            if w >= start && !backward[w] {
                backward[w] = true;
                stack.push(w);
            }
        }
    }
    forward
        .iter()
        .zip(&backward)
        .map(|(&f, &b)| f && b)
        .collect()
}

struct CircuitSearch<'a> {
    adj: &'a [Vec<usize>],
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    start: usize,
    out: &'a mut Vec<Vec<usize>>,
}

impl CircuitSearch<'_> {
    fn circuit(&mut self, v: usize) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &self.adj[v] {
            if !self.allowed[w] {
                continue;
            }
            if w == self.start {
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &self.adj[v] {
                if self.allowed[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, v: usize) {
        self.blocked[v] = false;
        let waiting = std::mem::take(&mut self.blocked_by[v]);
        for w in waiting {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}
