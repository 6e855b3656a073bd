//! Brute-force ground truth on explicit multigraphs.
//!
//! Everything here recomputes an invariant from the graph itself (BFS,
//! exhaustive enumeration, deletion-contraction, integer linear algebra) so
//! the closed forms have something independent to be checked against. Guards
//! keep the exponential oracles at desk scale.

use std::collections::{BTreeMap, VecDeque};

use num::traits::{One, Zero};
use num::BigInt;

use crate::error::OracleError;
use crate::formulas::{FactoredTutte, TuttePoly};
use crate::schreier::SchreierMultigraph;

/// BFS distances from `source`; loops are ignored and parallel edges count
/// as one.
pub fn bfs_distances(graph: &SchreierMultigraph, source: u32) -> Vec<u32> {
    bfs(&graph.adjacency(), source)
}

fn bfs(adj: &[Vec<u32>], source: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[source as usize] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for &w in &adj[u as usize] {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn is_connected(graph: &SchreierMultigraph) -> bool {
    bfs_distances(graph, 0).iter().all(|&d| d != u32::MAX)
}

/// Two-coloring of the loopless graph, or `None` when an odd cycle exists.
pub fn bipartition(graph: &SchreierMultigraph) -> Option<Vec<bool>> {
    let adj = graph.adjacency();
    let mut color: Vec<Option<bool>> = vec![None; adj.len()];
    for start in 0..adj.len() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start as u32]);
        while let Some(u) = queue.pop_front() {
            let c = color[u as usize].unwrap();
            for &w in &adj[u as usize] {
                if w == u {
                    return None; // a loop is an odd cycle once kept
                }
                match color[w as usize] {
                    None => {
                        color[w as usize] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap()).collect())
}

/// Two-coloring ignoring loops (the reading used for bipartiteness of these
/// graphs, where loops are decoration).
pub fn bipartition_loopless(graph: &SchreierMultigraph) -> Option<Vec<bool>> {
    let mut adj = graph.adjacency();
    for (v, nbrs) in adj.iter_mut().enumerate() {
        nbrs.retain(|&w| w != v as u32);
    }
    let mut color: Vec<Option<bool>> = vec![None; adj.len()];
    for start in 0..adj.len() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start as u32]);
        while let Some(u) = queue.pop_front() {
            let c = color[u as usize].unwrap();
            for &w in &adj[u as usize] {
                match color[w as usize] {
                    None => {
                        color[w as usize] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap()).collect())
}

/// Largest BFS eccentricity.
pub fn diameter_oracle(graph: &SchreierMultigraph) -> u32 {
    let adj = graph.adjacency();
    (0..graph.num_vertices())
        .map(|v| *bfs(&adj, v).iter().max().unwrap())
        .max()
        .unwrap()
}

/// Sum of distances over unordered vertex pairs.
pub fn wiener_oracle(graph: &SchreierMultigraph) -> BigInt {
    let adj = graph.adjacency();
    let mut total: u128 = 0;
    for v in 0..graph.num_vertices() {
        total += bfs(&adj, v).iter().map(|&d| d as u128).sum::<u128>();
    }
    BigInt::from(total / 2)
}

/// Closer-vertex counts `(n_uv, n_vu, multiplicity)` for every distinct
/// non-loop vertex pair carrying at least one edge, computed with one BFS
/// sweep over all sources. `n_uv` counts the side of the smaller-indexed
/// endpoint; the product is what the Szeged index sums.
pub fn all_edge_contributions(
    graph: &SchreierMultigraph,
) -> BTreeMap<(u32, u32), (u64, u64, u64)> {
    let mut pairs: BTreeMap<(u32, u32), (u64, u64, u64)> = BTreeMap::new();
    for &(u, v, _) in graph.edges() {
        if u == v {
            continue;
        }
        pairs.entry((u.min(v), u.max(v))).or_insert((0, 0, 0)).2 += 1;
    }
    let adj = graph.adjacency();
    for w in 0..graph.num_vertices() {
        let dist = bfs(&adj, w);
        for (&(u, v), counts) in pairs.iter_mut() {
            if dist[u as usize] < dist[v as usize] {
                counts.0 += 1;
            } else if dist[v as usize] < dist[u as usize] {
                counts.1 += 1;
            }
        }
    }
    pairs
}

/// Sum over edge instances (parallel edges counted separately, loops
/// skipped) of `n(u, v) * n(v, u)`, where `n(u, v)` counts the vertices
/// strictly closer to `u` (including `u` itself).
pub fn szeged_oracle(graph: &SchreierMultigraph) -> BigInt {
    let mut total = BigInt::zero();
    for (n_uv, n_vu, mult) in all_edge_contributions(graph).values() {
        total += BigInt::from(*n_uv) * BigInt::from(*n_vu) * BigInt::from(*mult);
    }
    total
}

/// Closer-vertex counts `(n(u,v), n(v,u))` for one edge instance.
pub fn edge_contribution_oracle(
    graph: &SchreierMultigraph,
    edge: usize,
) -> Result<(u64, u64), OracleError> {
    let &(u, v, _) = graph
        .edges()
        .get(edge)
        .unwrap_or_else(|| panic!("edge index {edge} out of range"));
    if u == v {
        return Err(OracleError::LoopEdge(edge));
    }
    let adj = graph.adjacency();
    let du = bfs(&adj, u);
    let dv = bfs(&adj, v);
    let mut n_uv = 0;
    let mut n_vu = 0;
    for w in 0..graph.num_vertices() as usize {
        if du[w] < dv[w] {
            n_uv += 1;
        } else if dv[w] < du[w] {
            n_vu += 1;
        }
    }
    Ok((n_uv, n_vu))
}

/// Result of exhaustive perfect-matching enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmReport {
    pub count: BigInt,
    /// Matched edge instances per generator label, identical for every
    /// perfect matching; `None` when there are none.
    pub per_label: Option<BTreeMap<u32, u64>>,
}

/// Enumerates all perfect matchings by branching on the smallest uncovered
/// vertex. Loops are excluded; parallel edges are distinct. Also checks that
/// the per-label histogram is the same for every matching found.
pub fn pm_oracle(graph: &SchreierMultigraph) -> Result<PmReport, OracleError> {
    let v_count = graph.num_vertices() as u64;
    if v_count > 64 {
        return Err(OracleError::GraphTooLarge {
            what: "vertices (perfect matching enumeration)",
            size: v_count,
            limit: 64,
        });
    }
    if v_count % 2 == 1 {
        return Ok(PmReport {
            count: BigInt::zero(),
            per_label: None,
        });
    }
    let mut incident: Vec<Vec<(u32, u32)>> = vec![Vec::new(); v_count as usize];
    let mut label_count = 0u32;
    for &(u, v, label) in graph.edges() {
        label_count = label_count.max(label + 1);
        if u == v {
            continue;
        }
        incident[u as usize].push((v, label));
        incident[v as usize].push((u, label));
    }

    struct Search<'a> {
        incident: &'a [Vec<(u32, u32)>],
        /// uncovered neighbor instances per vertex; a starved uncovered
        /// vertex (0 left) makes the branch hopeless
        avail: Vec<u32>,
        full: u64,
        count: u128,
        labels: Vec<u64>,
        reference: Option<Vec<u64>>,
        consistent: bool,
    }
    impl Search<'_> {
        /// Marks the pair covered; returns false when some still-uncovered
        /// vertex is left without any uncovered partner.
        fn cover_pair(&mut self, covered: &mut u64, u: u32, w: u32) -> bool {
            *covered |= (1 << u) | (1 << w);
            for x in [u, w] {
                for &(y, _) in &self.incident[x as usize] {
                    self.avail[y as usize] -= 1;
                }
            }
            for x in [u, w] {
                for &(y, _) in &self.incident[x as usize] {
                    if self.avail[y as usize] == 0 && *covered & (1 << y) == 0 {
                        return false;
                    }
                }
            }
            true
        }

        fn uncover_pair(&mut self, covered: &mut u64, u: u32, w: u32) {
            *covered &= !((1 << u) | (1 << w));
            for x in [u, w] {
                for &(y, _) in &self.incident[x as usize] {
                    self.avail[y as usize] += 1;
                }
            }
        }

        fn run(&mut self, mut covered: u64) {
            if covered == self.full {
                self.count += 1;
                match &self.reference {
                    None => self.reference = Some(self.labels.clone()),
                    Some(r) => {
                        if *r != self.labels {
                            self.consistent = false;
                        }
                    }
                }
                return;
            }
            let u = covered.trailing_ones();
            for idx in 0..self.incident[u as usize].len() {
                let (w, label) = self.incident[u as usize][idx];
                if covered & (1 << w) != 0 {
                    continue;
                }
                self.labels[label as usize] += 1;
                if self.cover_pair(&mut covered, u, w) {
                    self.run(covered);
                }
                self.uncover_pair(&mut covered, u, w);
                self.labels[label as usize] -= 1;
            }
        }
    }

    let full = if v_count == 64 {
        u64::MAX
    } else {
        (1u64 << v_count) - 1
    };
    let mut search = Search {
        avail: incident.iter().map(|list| list.len() as u32).collect(),
        incident: &incident,
        full,
        count: 0,
        labels: vec![0; label_count as usize],
        reference: None,
        consistent: true,
    };
    search.run(0);
    assert!(
        search.consistent,
        "matchings disagree on per-label edge counts"
    );
    Ok(PmReport {
        count: BigInt::from(search.count),
        per_label: search.reference.map(|r| {
            r.into_iter()
                .enumerate()
                .map(|(label, c)| (label as u32, c))
                .collect()
        }),
    })
}

// ---------------------------------------------------------------------------
// Tutte polynomial oracles
// ---------------------------------------------------------------------------

/// A small unlabeled multigraph for the deletion-contraction recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&SchreierMultigraph> for MultiGraph {
    fn from(g: &SchreierMultigraph) -> Self {
        MultiGraph {
            num_vertices: g.num_vertices() as usize,
            edges: g
                .edges()
                .iter()
                .map(|&(u, v, _)| (u as usize, v as usize))
                .collect(),
        }
    }
}

impl MultiGraph {
    fn components_avoiding(&self, skip: usize) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut adj = vec![Vec::new(); self.num_vertices];
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            if idx == skip {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut next = 0;
        for start in 0..self.num_vertices {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    fn delete(&self, idx: usize) -> MultiGraph {
        let mut edges = self.edges.clone();
        edges.swap_remove(idx);
        MultiGraph {
            num_vertices: self.num_vertices,
            edges,
        }
    }

    fn contract(&self, idx: usize) -> MultiGraph {
        let (a, b) = self.edges[idx];
        let (keep, gone) = (a.min(b), a.max(b));
        let map = |v: usize| if v == gone { keep } else { v };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, &(u, v))| (map(u), map(v)))
            .collect();
        MultiGraph {
            num_vertices: self.num_vertices,
            edges,
        }
    }
}

/// Tutte polynomial by the textbook deletion-contraction recursion:
/// a loop contributes `y`, a bridge `x`, anything else splits into the
/// deleted and contracted graphs. Guarded to at most 20 edges.
pub fn tutte_dc_oracle(graph: &MultiGraph) -> Result<TuttePoly, OracleError> {
    if graph.edges.len() > 20 {
        return Err(OracleError::GraphTooLarge {
            what: "edges (deletion-contraction)",
            size: graph.edges.len() as u64,
            limit: 20,
        });
    }
    Ok(tutte_dc(graph.clone()))
}

fn tutte_dc(graph: MultiGraph) -> TuttePoly {
    // strip loops first: each contributes a factor y
    let mut loops = 0u32;
    let mut g = graph;
    g.edges.retain(|&(u, v)| {
        if u == v {
            loops += 1;
            false
        } else {
            true
        }
    });
    if g.edges.is_empty() {
        return TuttePoly::constant(1).mul_monomial(0, loops);
    }
    // find a non-bridge edge if there is one
    let non_bridge = (0..g.edges.len()).find(|&idx| {
        let (u, v) = g.edges[idx];
        let comp = g.components_avoiding(idx);
        comp[u] == comp[v]
    });
    let inner = match non_bridge {
        Some(idx) => tutte_dc(g.delete(idx)).add(&tutte_dc(g.contract(idx))),
        // all remaining edges are bridges: factor x per edge
        None => TuttePoly::constant(1).mul_monomial(g.edges.len() as u32, 0),
    };
    inner.mul_monomial(0, loops)
}

/// Non-loop edge ids grouped into biconnected components (blocks).
pub fn block_decomposition(graph: &SchreierMultigraph) -> Vec<Vec<usize>> {
    let v_count = graph.num_vertices() as usize;
    // adjacency with edge ids, loops excluded
    let mut adj: Vec<Vec<(u32, usize)>> = vec![Vec::new(); v_count];
    for (idx, &(u, v, _)) in graph.edges().iter().enumerate() {
        if u == v {
            continue;
        }
        adj[u as usize].push((v, idx));
        adj[v as usize].push((u, idx));
    }

    let mut disc = vec![0u32; v_count]; // 0 = unvisited
    let mut low = vec![0u32; v_count];
    let mut timer = 1u32;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();

    // iterative DFS: frames of (vertex, incoming tree edge id, adjacency cursor)
    let mut stack: Vec<(u32, usize, usize)> = Vec::new();
    for root in 0..v_count as u32 {
        if disc[root as usize] != 0 {
            continue;
        }
        disc[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, parent_edge, cursor) = stack[top];
            if let Some(&(w, edge_id)) = adj[v as usize].get(cursor) {
                stack[top].2 += 1;
                if edge_id == parent_edge {
                    continue; // the tree edge we came in on; parallels are back edges
                }
                if disc[w as usize] == 0 {
                    edge_stack.push(edge_id);
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    stack.push((w, edge_id, 0));
                } else if disc[w as usize] < disc[v as usize] {
                    // back edge, pushed once from the deeper endpoint
                    edge_stack.push(edge_id);
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                    if low[v as usize] >= disc[parent as usize] {
                        // pop everything down to and including the tree edge into v
                        let mut block = Vec::new();
                        loop {
                            let e = edge_stack.pop().expect("tree edge on stack");
                            block.push(e);
                            if e == parent_edge {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Factored Tutte polynomial from the actual block structure: loops become
/// `y` factors and every block must be a cycle.
pub fn tutte_block_oracle(graph: &SchreierMultigraph) -> Result<FactoredTutte, OracleError> {
    let mut loop_exp = BigInt::zero();
    for &(u, v, _) in graph.edges() {
        if u == v {
            loop_exp += 1;
        }
    }
    let mut by_length: BTreeMap<u64, BigInt> = BTreeMap::new();
    for block in block_decomposition(graph) {
        let mut degree: BTreeMap<u32, u32> = BTreeMap::new();
        for &idx in &block {
            let (u, v, _) = graph.edges()[idx];
            *degree.entry(u).or_insert(0) += 1;
            *degree.entry(v).or_insert(0) += 1;
        }
        let vertices = degree.len();
        let is_cycle = block.len() == vertices && degree.values().all(|&d| d == 2);
        if !is_cycle {
            return Err(OracleError::NotACactusOfCycles(format!(
                "block with {} edges on {} vertices",
                block.len(),
                vertices
            )));
        }
        *by_length.entry(block.len() as u64).or_insert_with(BigInt::zero) += 1;
    }
    Ok(FactoredTutte::new(loop_exp, by_length.into_iter().collect()))
}

/// Number of spanning trees via the integer Laplacian: any cofactor of the
/// Laplacian (loops dropped, parallel edges as multiplicity), evaluated by
/// fraction-free Gaussian elimination.
pub fn spanning_trees_oracle(graph: &SchreierMultigraph) -> Result<BigInt, OracleError> {
    let v_count = graph.num_vertices() as usize;
    if v_count as u64 > 512 {
        return Err(OracleError::GraphTooLarge {
            what: "vertices (Laplacian determinant)",
            size: v_count as u64,
            limit: 512,
        });
    }
    if v_count == 1 {
        return Ok(BigInt::one());
    }
    let n = v_count - 1; // strike the last row and column
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for &(u, v, _) in graph.edges() {
        if u == v {
            continue;
        }
        let (u, v) = (u as usize, v as usize);
        if u < n {
            m[u][u] += 1;
        }
        if v < n {
            m[v][v] += 1;
        }
        if u < n && v < n {
            m[u][v] -= 1;
            m[v][u] -= 1;
        }
    }
    // Bareiss fraction-free elimination
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for p in 0..n {
        if m[p][p].is_zero() {
            match (p + 1..n).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let num = &m[i][j] * &m[p][p] - &m[i][p] * &m[p][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
            m[i][p] = BigInt::zero();
        }
        prev = m[p][p].clone();
        if p + 1 == n {
            break;
        }
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// Number of proper colorings of the loopless graph with `lambda` colors,
/// by exhaustive backtracking. Guarded to 16 vertices and 4 colors.
pub fn chromatic_oracle(graph: &SchreierMultigraph, lambda: u32) -> Result<BigInt, OracleError> {
    let v_count = graph.num_vertices() as usize;
    if v_count as u64 > 16 {
        return Err(OracleError::GraphTooLarge {
            what: "vertices (coloring enumeration)",
            size: v_count as u64,
            limit: 16,
        });
    }
    if lambda as u64 > 4 {
        return Err(OracleError::GraphTooLarge {
            what: "colors (coloring enumeration)",
            size: lambda as u64,
            limit: 4,
        });
    }
    if lambda == 0 {
        return Ok(BigInt::zero());
    }
    // BFS order so each vertex (after the first) sees a colored neighbor
    let adj = graph.adjacency();
    let mut order = Vec::with_capacity(v_count);
    let mut seen = vec![false; v_count];
    for start in 0..v_count {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start as u32]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &adj[u as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let position: BTreeMap<u32, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // earlier-position neighbors per vertex, loops dropped
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); v_count];
    for &(u, v, _) in graph.edges() {
        if u == v {
            continue;
        }
        let (pu, pv) = (position[&u], position[&v]);
        let (lo, hi) = (pu.min(pv), pu.max(pv));
        earlier[hi].push(lo);
    }

    fn count(pos: usize, colors: &mut Vec<u32>, earlier: &[Vec<usize>], lambda: u32) -> u64 {
        if pos == earlier.len() {
            return 1;
        }
        let mut total = 0;
        'next: for c in 0..lambda {
            for &e in &earlier[pos] {
                if colors[e] == c {
                    continue 'next;
                }
            }
            colors[pos] = c;
            total += count(pos + 1, colors, earlier, lambda);
        }
        total
    }

    let mut colors = vec![u32::MAX; v_count];
    Ok(BigInt::from(count(0, &mut colors, &earlier, lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mealy::{MealyAutomaton, Word};
    use crate::tree::OrientedTree;

    fn graph(tree: &OrientedTree, n: u32) -> SchreierMultigraph {
        SchreierMultigraph::build(&MealyAutomaton::from_tree(tree), n).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn bfs_and_diameter() {
        let g = graph(&OrientedTree::path(3), 1);
        let dist = bfs_distances(&g, g.index_of(&Word::new(vec![1])).unwrap());
        assert_eq!(dist[g.index_of(&Word::new(vec![2])).unwrap() as usize], 1);
        assert_eq!(dist[g.index_of(&Word::new(vec![3])).unwrap() as usize], 2);

        let g2 = graph(&OrientedTree::path(3), 2);
        let s = g2.index_of(&Word::new(vec![1, 3])).unwrap();
        let t = g2.index_of(&Word::new(vec![3, 1])).unwrap();
        assert_eq!(bfs_distances(&g2, s)[t as usize], 6);
        assert_eq!(diameter_oracle(&g2), 6);
        assert_eq!(diameter_oracle(&graph(&OrientedTree::path(2), 2)), 2);
        assert_eq!(diameter_oracle(&graph(&OrientedTree::path(4), 1)), 3);
    }

    #[test]
    fn wiener_and_szeged() {
        assert_eq!(wiener_oracle(&graph(&OrientedTree::path(3), 1)), big(4));
        assert_eq!(wiener_oracle(&graph(&OrientedTree::path(2), 2)), big(8));
        assert_eq!(szeged_oracle(&graph(&OrientedTree::path(3), 1)), big(8));
        assert_eq!(szeged_oracle(&graph(&OrientedTree::path(2), 2)), big(16));
    }

    #[test]
    fn edge_contributions() {
        let g = graph(&OrientedTree::path(3), 2);
        let find = |a: &str, b: &str| {
            let ia = g.index_of(&Word::parse(a, 3).unwrap()).unwrap();
            let ib = g.index_of(&Word::parse(b, 3).unwrap()).unwrap();
            g.edges()
                .iter()
                .position(|&(u, v, _)| (u, v) == (ia, ib) || (u, v) == (ib, ia))
                .unwrap()
        };
        assert_eq!(edge_contribution_oracle(&g, find("11", "22")).unwrap(), (3, 6));
        assert_eq!(edge_contribution_oracle(&g, find("13", "23")).unwrap(), (1, 8));
        // the stored instance is oriented 22 -> 12; the product 18 is what matters
        assert_eq!(edge_contribution_oracle(&g, find("22", "12")).unwrap(), (6, 3));
        let some_loop = g.edges().iter().position(|&(u, v, _)| u == v).unwrap();
        assert_eq!(
            edge_contribution_oracle(&g, some_loop),
            Err(OracleError::LoopEdge(some_loop))
        );
    }

    #[test]
    fn no_ties_across_edges() {
        let g = graph(&OrientedTree::star(4), 2);
        for (idx, &(u, v, _)) in g.edges().iter().enumerate() {
            if u == v {
                continue;
            }
            let (n_uv, n_vu) = edge_contribution_oracle(&g, idx).unwrap();
            assert_eq!(n_uv + n_vu, 16);
        }
    }

    #[test]
    fn pm_enumeration() {
        let report = pm_oracle(&graph(&OrientedTree::path(4), 1)).unwrap();
        assert_eq!(report.count, big(4));
        assert_eq!(
            report.per_label,
            Some(BTreeMap::from([(0, 1), (1, 0), (2, 1)]))
        );
        let report = pm_oracle(&graph(&OrientedTree::path(3), 1)).unwrap();
        assert_eq!(report.count, big(0));
        assert_eq!(report.per_label, None);
        let report = pm_oracle(&graph(&OrientedTree::path(2), 3)).unwrap();
        assert_eq!(report.count, big(2));
        assert_eq!(report.per_label, Some(BTreeMap::from([(0, 4)])));
        assert!(matches!(
            pm_oracle(&graph(&OrientedTree::path(3), 5)),
            Err(OracleError::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn tutte_dc_base_cases() {
        // one loop on a single vertex
        let loop_graph = MultiGraph {
            num_vertices: 1,
            edges: vec![(0, 0)],
        };
        let y = TuttePoly::constant(1).mul_monomial(0, 1);
        assert_eq!(tutte_dc_oracle(&loop_graph).unwrap(), y);
        // two parallel edges: x + y
        let doubled = MultiGraph {
            num_vertices: 2,
            edges: vec![(0, 1), (0, 1)],
        };
        assert_eq!(tutte_dc_oracle(&doubled).unwrap(), TuttePoly::cycle(2));
        // a path of two bridges: x^2
        let path = MultiGraph {
            num_vertices: 3,
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(
            tutte_dc_oracle(&path).unwrap(),
            TuttePoly::constant(1).mul_monomial(2, 0)
        );
        // a 4-cycle
        let c4 = MultiGraph {
            num_vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        };
        assert_eq!(tutte_dc_oracle(&c4).unwrap(), TuttePoly::cycle(4));
        let too_big = MultiGraph {
            num_vertices: 22,
            edges: (0..21).map(|i| (i, i + 1)).collect(),
        };
        assert!(matches!(
            tutte_dc_oracle(&too_big),
            Err(OracleError::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn tutte_dc_on_level_two() {
        let g = graph(&OrientedTree::path(3), 2);
        let dc = tutte_dc_oracle(&MultiGraph::from(&g)).unwrap();
        let factored = crate::formulas::tutte_factored(3, 2, crate::formulas::Variant::Corrected)
            .unwrap();
        assert_eq!(dc, factored.expand(64).unwrap());
    }

    #[test]
    fn blocks_are_cycles() {
        let g = graph(&OrientedTree::path(3), 2);
        let blocks = block_decomposition(&g);
        let mut sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 4, 4]);
        let factored = tutte_block_oracle(&g).unwrap();
        assert_eq!(factored.loop_exp, big(6));
        assert_eq!(factored.factors, vec![(2, big(2)), (4, big(2))]);

        let f = tutte_block_oracle(&graph(&OrientedTree::path(2), 3)).unwrap();
        assert!(f.loop_exp.is_zero());
        assert_eq!(f.factors, vec![(8, big(1))]);

        let f = tutte_block_oracle(&graph(&OrientedTree::star(4), 2)).unwrap();
        assert_eq!(f.loop_exp, big(24));
        assert_eq!(f.factors, vec![(2, big(6)), (4, big(3))]);
    }

    #[test]
    fn spanning_trees_values() {
        assert_eq!(
            spanning_trees_oracle(&graph(&OrientedTree::path(3), 2)).unwrap(),
            big(64)
        );
        assert_eq!(
            spanning_trees_oracle(&graph(&OrientedTree::path(2), 2)).unwrap(),
            big(4)
        );
        assert_eq!(
            spanning_trees_oracle(&graph(&OrientedTree::star(4), 1)).unwrap(),
            big(8)
        );
    }

    #[test]
    fn chromatic_values() {
        let g1 = graph(&OrientedTree::path(3), 1);
        assert_eq!(chromatic_oracle(&g1, 3).unwrap(), big(12));
        assert_eq!(chromatic_oracle(&g1, 1).unwrap(), big(0));
        let p2 = graph(&OrientedTree::path(2), 1);
        assert_eq!(chromatic_oracle(&p2, 2).unwrap(), big(2));
        assert!(matches!(
            chromatic_oracle(&graph(&OrientedTree::path(3), 3), 3),
            Err(OracleError::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn connectivity_and_bipartiteness() {
        for (tree, n) in [
            (OrientedTree::path(2), 4),
            (OrientedTree::path(3), 3),
            (OrientedTree::star(4), 2),
        ] {
            let g = graph(&tree, n);
            assert!(is_connected(&g));
            let coloring = bipartition_loopless(&g).expect("bipartite");
            for &(u, v, _) in g.edges() {
                if u != v {
                    assert_ne!(coloring[u as usize], coloring[v as usize]);
                }
            }
        }
        // with loops kept, the same graphs are not 2-colorable (except P2's levels)
        assert!(bipartition(&graph(&OrientedTree::path(3), 2)).is_none());
    }
}
