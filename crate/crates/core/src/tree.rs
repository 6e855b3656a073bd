//! Seed trees: parsing, validation, and the classical tree indices.

use std::collections::BTreeSet;

use crate::error::TreeError;

/// A finite tree on vertices `1..=k` with a chosen orientation per edge.
///
/// The orientation is simply the order in which the endpoints were listed.
/// It fixes which endpoint plays the role of the source in the derived
/// automaton; none of the computed indices depend on the choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedTree {
    k: u32,
    edges: Vec<(u32, u32)>,
}

/// Component sizes obtained by deleting one edge `(s, t)` of a tree:
/// `n_st` vertices end up on the source side, `n_ts` on the target side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSplit {
    pub n_st: u32,
    pub n_ts: u32,
}

impl OrientedTree {
    /// Builds a tree from an explicit edge list. The vertex count is the
    /// largest label that appears; labels must cover `1..=k` with `k >= 2`.
    pub fn from_edges(edges: Vec<(u32, u32)>) -> Result<Self, TreeError> {
        if edges.is_empty() {
            return Err(TreeError::NotATree("no edges (k < 2)".into()));
        }
        let mut k = 0;
        for &(u, v) in &edges {
            if u == 0 || v == 0 {
                return Err(TreeError::NotATree("vertex ids must be >= 1".into()));
            }
            if u == v {
                return Err(TreeError::NotATree(format!("self-loop at {u}")));
            }
            k = k.max(u).max(v);
        }
        if edges.len() != (k - 1) as usize {
            return Err(TreeError::NotATree(format!(
                "{} edges for {} vertices (want k-1)",
                edges.len(),
                k
            )));
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(TreeError::NotATree(format!("duplicate edge {{{u}, {v}}}")));
            }
        }
        let tree = OrientedTree { k, edges };
        // Connectivity; with exactly k-1 edges this also rules out cycles.
        let dist = tree.distances_from(1);
        if dist.iter().skip(1).any(|&d| d == u32::MAX) {
            return Err(TreeError::NotATree("graph is disconnected".into()));
        }
        Ok(tree)
    }

    /// Parses the edge-list text format: one `u v` pair per line, blank lines
    /// and lines starting with `#` ignored.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let mut it = content.split_whitespace();
            let (u, v) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(TreeError::MalformedInput {
                        line,
                        msg: format!("expected `u v`, got `{content}`"),
                    })
                }
            };
            let parse = |tok: &str| {
                tok.parse::<u32>().map_err(|_| TreeError::MalformedInput {
                    line,
                    msg: format!("`{tok}` is not a positive integer"),
                })
            };
            let (u, v) = (parse(u)?, parse(v)?);
            if u == 0 || v == 0 {
                return Err(TreeError::MalformedInput {
                    line,
                    msg: "vertex ids start at 1".into(),
                });
            }
            edges.push((u, v));
        }
        Self::from_edges(edges)
    }

    /// The path `1 - 2 - ... - k`.
    pub fn path(k: u32) -> Self {
        assert!(k >= 2);
        Self::from_edges((1..k).map(|i| (i, i + 1)).collect()).unwrap()
    }

    /// The star with center `1` and leaves `2..=k`.
    pub fn star(k: u32) -> Self {
        assert!(k >= 2);
        Self::from_edges((2..=k).map(|i| (1, i)).collect()).unwrap()
    }

    /// A spider: paths of the given leg lengths glued at a common center.
    pub fn spider(legs: &[u32]) -> Self {
        let mut edges = Vec::new();
        let mut next = 2;
        for &len in legs {
            assert!(len >= 1);
            let mut prev = 1;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Self::from_edges(edges).unwrap()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Neighbor lists indexed by vertex id (entry 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.k as usize + 1];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    /// BFS distances from `v`, indexed by vertex id; entry 0 is unused and
    /// unreachable entries are `u32::MAX`.
    pub fn distances_from(&self, v: u32) -> Vec<u32> {
        let adj = self.adjacency();
        let mut dist = vec![u32::MAX; self.k as usize + 1];
        dist[v as usize] = 0;
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest distance between any two vertices.
    pub fn diameter(&self) -> u32 {
        (1..=self.k)
            .map(|v| {
                *self.distances_from(v)[1..]
                    .iter()
                    .max()
                    .expect("k >= 2")
            })
            .max()
            .unwrap()
    }

    /// Sum of distances over unordered vertex pairs.
    pub fn wiener(&self) -> u64 {
        let total: u64 = (1..=self.k)
            .map(|v| self.distances_from(v)[1..].iter().map(|&d| d as u64).sum::<u64>())
            .sum();
        total / 2
    }

    /// Sum over edges of the product of the two component sizes left by
    /// deleting the edge. On a tree this equals the Wiener index.
    pub fn szeged(&self) -> u64 {
        (0..self.edges.len())
            .map(|e| {
                let split = self.split_counts(e).expect("edge index in range");
                split.n_st as u64 * split.n_ts as u64
            })
            .sum()
    }

    /// Component sizes after deleting edge `e`; `n_st` counts the side of the
    /// source endpoint.
    pub fn split_counts(&self, e: usize) -> Result<EdgeSplit, TreeError> {
        let &(s, t) = self.edges.get(e).ok_or(TreeError::InvalidEdge(e))?;
        let adj = self.adjacency();
        let mut seen = vec![false; self.k as usize + 1];
        seen[s as usize] = true;
        seen[t as usize] = true; // block the far endpoint
        let mut queue = std::collections::VecDeque::from([s]);
        let mut n_st = 1u32;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    n_st += 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(EdgeSplit {
            n_st,
            n_ts: self.k - n_st,
        })
    }

    /// The unique perfect matching of the tree, as edge indices, when one
    /// exists. Found by repeatedly matching a leaf to its neighbor.
    pub fn perfect_matching(&self) -> Option<Vec<usize>> {
        if self.k % 2 == 1 {
            return None;
        }
        let mut edge_index = std::collections::BTreeMap::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            edge_index.insert((u.min(v), u.max(v)), i);
        }
        let adj = self.adjacency();
        let mut degree: Vec<u32> = adj.iter().map(|n| n.len() as u32).collect();
        let mut alive = vec![true; self.k as usize + 1];
        alive[0] = false;
        let mut leaves: Vec<u32> = (1..=self.k).filter(|&v| degree[v as usize] == 1).collect();
        let mut matched = Vec::new();
        while let Some(leaf) = leaves.pop() {
            if !alive[leaf as usize] {
                continue;
            }
            let partner = adj[leaf as usize]
                .iter()
                .copied()
                .find(|&w| alive[w as usize])?;
            matched.push(edge_index[&(leaf.min(partner), leaf.max(partner))]);
            alive[leaf as usize] = false;
            alive[partner as usize] = false;
            for &w in &adj[partner as usize] {
                if alive[w as usize] {
                    degree[w as usize] -= 1;
                    if degree[w as usize] == 1 {
                        leaves.push(w);
                    } else if degree[w as usize] == 0 {
                        // isolated an unmatched vertex
                        return None;
                    }
                }
            }
        }
        if matched.len() == (self.k / 2) as usize {
            matched.sort_unstable();
            Some(matched)
        } else {
            None
        }
    }
}
