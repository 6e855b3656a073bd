//! Level-`n` Schreier multigraphs of a tree automaton and their cycle
//! structure.
//!
//! Vertices are the words of length `n` over `1..=k` in lexicographic order;
//! every (generator, word) pair contributes exactly one edge, so loops and
//! parallel edges are kept. Under this convention each generator orbit of
//! size `2^i` (i >= 1) appears as a cycle block: an orbit of size two gives a
//! pair of parallel edges, a fixed point gives a loop.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::SchreierError;
use crate::mealy::{MealyAutomaton, Word};

/// Default cap on the number of vertices a build may materialize.
pub const DEFAULT_VERTEX_CAP: u64 = 1_000_000;

/// A generator of the graph: an edge state acting as the transposition
/// `source <-> target` on first letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: u32,
    pub target: u32,
}

/// The labeled multigraph of a word action at a fixed level.
#[derive(Debug, Clone)]
pub struct SchreierMultigraph {
    k: u32,
    n: u32,
    num_vertices: u32,
    /// Present for graphs built from an automaton; empty after JSON import.
    generators: Vec<Generator>,
    /// `(u, v, label)` with one entry per (generator, vertex) pair, grouped
    /// by label and then by source vertex.
    edges: Vec<(u32, u32, u32)>,
}

/// One generator orbit: a cycle of length `2^i` (a loop when `i = 0`) whose
/// vertices share the suffix and run over all `{s, t}`-prefixes of length `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ECycle {
    pub label: u32,
    pub i: u32,
    /// Common last `n - i` letters of every vertex on the cycle.
    pub suffix: Vec<u32>,
    /// Vertex indices in orbit order, starting from the smallest.
    pub vertices: Vec<u32>,
    special: Option<((u32, u32), (u32, u32))>,
}

#[allow(clippy::len_without_is_empty)] // a cycle always has at least one vertex
impl ECycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// The two distinguished edges `{s^i w, t^i w}` and
    /// `{s^{i-1}t w, t^{i-1}s w}` of the cycle, as normalized vertex pairs.
    /// For `i = 1` both name the same vertex pair: the two parallel edges.
    pub fn special_edges(&self) -> Result<((u32, u32), (u32, u32)), SchreierError> {
        self.special.ok_or(SchreierError::LoopHasNoSpecialEdges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    k: u32,
    n: u32,
    vertices: Vec<String>,
    edges: Vec<(String, String, u32)>,
}

impl SchreierMultigraph {
    /// Builds the level-`n` graph with the default vertex cap.
    pub fn build(automaton: &MealyAutomaton, n: u32) -> Result<Self, SchreierError> {
        Self::build_with_cap(automaton, n, DEFAULT_VERTEX_CAP)
    }

    /// Builds the level-`n` graph, refusing to materialize more than `cap`
    /// vertices. Every non-sink state must act as a transposition on letters.
    pub fn build_with_cap(
        automaton: &MealyAutomaton,
        n: u32,
        cap: u64,
    ) -> Result<Self, SchreierError> {
        if n == 0 {
            return Err(SchreierError::InvalidLevel);
        }
        let k = automaton.alphabet();
        let cap = cap.min(u32::MAX as u64);
        let needed = (k as u128).checked_pow(n).unwrap_or(u128::MAX);
        if needed > cap as u128 {
            return Err(SchreierError::LevelTooLarge { n, needed, cap });
        }
        let num_vertices = needed as u32;

        let mut generators = Vec::new();
        let mut states = Vec::new();
        for q in automaton.edge_states() {
            let mut swapped = (1..=k).filter(|&x| automaton.output(q, x) != x);
            let (s, t) = match (swapped.next(), swapped.next(), swapped.next()) {
                (Some(a), Some(b), None) => {
                    // the live letter is the one whose restriction survives
                    if automaton.restriction(q, a) == q {
                        (a, b)
                    } else if automaton.restriction(q, b) == q {
                        (b, a)
                    } else {
                        return Err(SchreierError::NotAnEdgeState(q));
                    }
                }
                _ => return Err(SchreierError::NotAnEdgeState(q)),
            };
            if automaton.output(q, s) != t || automaton.output(q, t) != s {
                return Err(SchreierError::NotAnEdgeState(q));
            }
            generators.push(Generator {
                name: automaton.state_name(q).to_string(),
                source: s,
                target: t,
            });
            states.push(q);
        }

        let mut edges = Vec::with_capacity(generators.len() * num_vertices as usize);
        let mut letters = vec![0u32; n as usize];
        for (label, &q) in states.iter().enumerate() {
            for v in 0..num_vertices {
                decode(v, k, &mut letters);
                let mut state = q;
                let mut image = 0u64;
                for l in letters.iter() {
                    let out = automaton.output(state, *l);
                    state = automaton.restriction(state, *l);
                    image = image * k as u64 + (out - 1) as u64;
                }
                edges.push((v, image as u32, label as u32));
            }
        }

        Ok(SchreierMultigraph {
            k,
            n,
            num_vertices,
            generators,
            edges,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> u32 {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(u32, u32, u32)] {
        &self.edges
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The word spelled by vertex index `v`.
    pub fn word_of(&self, v: u32) -> Word {
        let mut letters = vec![0u32; self.n as usize];
        decode(v, self.k, &mut letters);
        Word::new(letters)
    }

    pub fn index_of(&self, word: &Word) -> Option<u32> {
        if word.len() != self.n as usize {
            return None;
        }
        let mut v = 0u64;
        for &l in word.letters() {
            if l == 0 || l > self.k {
                return None;
            }
            v = v * self.k as u64 + (l - 1) as u64;
        }
        Some(v as u32)
    }

    pub fn vertex_name(&self, v: u32) -> String {
        self.word_of(v).render(self.k)
    }

    /// Neighbor lists with parallel edges repeated; a loop contributes its
    /// endpoint twice, so `adj[v].len()` is the degree.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.num_vertices as usize];
        for &(u, v, _) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    /// Decomposes the edge set into generator orbits. Every edge lies on
    /// exactly one cycle; fixed points appear as cycles with `i = 0`.
    pub fn e_cycles(&self) -> Result<Vec<ECycle>, SchreierError> {
        if self.generators.is_empty() {
            return Err(SchreierError::MissingGenerators);
        }
        let v_count = self.num_vertices as usize;
        let mut cycles = Vec::new();
        let mut successor = vec![0u32; v_count];
        for (label, gen) in self.generators.iter().enumerate() {
            let base = label * v_count;
            for &(u, v, _) in &self.edges[base..base + v_count] {
                successor[u as usize] = v;
            }
            let mut seen = vec![false; v_count];
            for start in 0..self.num_vertices {
                if seen[start as usize] {
                    continue;
                }
                let mut vertices = vec![start];
                seen[start as usize] = true;
                let mut cur = successor[start as usize];
                while cur != start {
                    seen[cur as usize] = true;
                    vertices.push(cur);
                    cur = successor[cur as usize];
                }
                let len = vertices.len();
                debug_assert!(len.is_power_of_two(), "orbit length {len} not a power of 2");
                let i = len.trailing_zeros();
                let word = self.word_of(start);
                let suffix = word.letters()[i as usize..].to_vec();
                let special = (i > 0).then(|| {
                    let pair = |a_letter: u32, b_letter: u32, swap_at: Option<usize>| {
                        let mut letters = vec![a_letter; i as usize];
                        if let Some(p) = swap_at {
                            letters[p] = b_letter;
                        }
                        letters.extend_from_slice(&suffix);
                        self.index_of(&Word::new(letters)).expect("valid word")
                    };
                    let (s, t) = (gen.source, gen.target);
                    let a = pair(s, t, None);
                    let b = pair(t, s, None);
                    let a2 = pair(s, t, Some(i as usize - 1));
                    let b2 = pair(t, s, Some(i as usize - 1));
                    (
                        (a.min(b), a.max(b)),
                        (a2.min(b2), a2.max(b2)),
                    )
                });
                cycles.push(ECycle {
                    label: label as u32,
                    i,
                    suffix,
                    vertices,
                    special,
                });
            }
        }
        Ok(cycles)
    }

    /// Number of cycles per (generator, `i`) with `i = 0` counting loops.
    pub fn cycle_census(&self) -> Result<BTreeMap<(u32, u32), u64>, SchreierError> {
        let mut census = BTreeMap::new();
        for label in 0..self.generators.len() as u32 {
            for i in 0..=self.n {
                census.insert((label, i), 0);
            }
        }
        for cycle in self.e_cycles()? {
            *census.get_mut(&(cycle.label, cycle.i)).expect("i <= n") += 1;
        }
        Ok(census)
    }

    /// Undirected DOT rendering; vertices in lexicographic order, edges in
    /// build order (label-major), loops and parallel edges kept.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph schreier {\n");
        for v in 0..self.num_vertices {
            out.push_str(&format!("  \"{}\";\n", self.vertex_name(v)));
        }
        for &(u, v, label) in &self.edges {
            let name = self
                .generators
                .get(label as usize)
                .map(|g| g.name.clone())
                .unwrap_or_else(|| format!("e{}", label + 1));
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.vertex_name(u),
                self.vertex_name(v),
                name
            ));
        }
        out.push_str("}\n");
        out
    }

    /// JSON rendering: `{k, n, vertices, edges}` with vertices in
    /// lexicographic order and edges as `[u, v, label]` triples (labels are
    /// 1-based).
    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            k: self.k,
            n: self.n,
            vertices: (0..self.num_vertices).map(|v| self.vertex_name(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v, label)| (self.vertex_name(u), self.vertex_name(v), label + 1))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses a graph previously written by [`SchreierMultigraph::to_json`].
    /// Generator metadata is not part of the format, so orbit decomposition
    /// is unavailable on imported graphs.
    pub fn from_json(text: &str) -> Result<Self, SchreierError> {
        let doc: GraphJson =
            serde_json::from_str(text).map_err(|e| SchreierError::InvalidJson(e.to_string()))?;
        if doc.n == 0 {
            return Err(SchreierError::InvalidLevel);
        }
        let needed = (doc.k as u128).checked_pow(doc.n).unwrap_or(u128::MAX);
        if needed > DEFAULT_VERTEX_CAP as u128 {
            return Err(SchreierError::LevelTooLarge {
                n: doc.n,
                needed,
                cap: DEFAULT_VERTEX_CAP,
            });
        }
        let shell = SchreierMultigraph {
            k: doc.k,
            n: doc.n,
            num_vertices: needed as u32,
            generators: Vec::new(),
            edges: Vec::new(),
        };
        if doc.vertices.len() != needed as usize {
            return Err(SchreierError::InvalidJson(format!(
                "expected {} vertices, found {}",
                needed,
                doc.vertices.len()
            )));
        }
        for (idx, name) in doc.vertices.iter().enumerate() {
            if shell.vertex_name(idx as u32) != *name {
                return Err(SchreierError::InvalidJson(format!(
                    "vertex {idx} is `{name}`, not in lexicographic order"
                )));
            }
        }
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (u, v, label) in &doc.edges {
            let resolve = |name: &str| {
                Word::parse(name, doc.k)
                    .and_then(|w| shell.index_of(&w))
                    .ok_or_else(|| SchreierError::InvalidJson(format!("bad vertex `{name}`")))
            };
            if *label == 0 {
                return Err(SchreierError::InvalidJson("labels are 1-based".into()));
            }
            edges.push((resolve(u)?, resolve(v)?, label - 1));
        }
        Ok(SchreierMultigraph { edges, ..shell })
    }
}

fn decode(v: u32, k: u32, letters: &mut [u32]) {
    let mut rest = v as u64;
    for slot in letters.iter_mut().rev() {
        *slot = (rest % k as u64) as u32 + 1;
        rest /= k as u64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::OrientedTree;

    fn graph(tree: &OrientedTree, n: u32) -> SchreierMultigraph {
        SchreierMultigraph::build(&MealyAutomaton::from_tree(tree), n).unwrap()
    }

    fn names(g: &SchreierMultigraph, vertices: &[u32]) -> Vec<String> {
        vertices.iter().map(|&v| g.vertex_name(v)).collect()
    }

    #[test]
    fn level_one_p3() {
        let g = graph(&OrientedTree::path(3), 1);
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges().len(), 6);
        // label 0 = (1,2): the pair {1,2} doubled plus a loop at 3
        let by_label = |l: u32| -> Vec<(String, String)> {
            g.edges()
                .iter()
                .filter(|&&(_, _, lab)| lab == l)
                .map(|&(u, v, _)| (g.vertex_name(u), g.vertex_name(v)))
                .collect()
        };
        assert_eq!(
            by_label(0),
            vec![
                ("1".into(), "2".into()),
                ("2".into(), "1".into()),
                ("3".into(), "3".into())
            ]
        );
        assert_eq!(
            by_label(1),
            vec![
                ("1".into(), "1".into()),
                ("2".into(), "3".into()),
                ("3".into(), "2".into())
            ]
        );
        // 2(k-1)-regular counting loops twice
        assert!(g.adjacency().iter().all(|nbrs| nbrs.len() == 4));
    }

    #[test]
    fn level_three_p2_is_one_cycle() {
        let g = graph(&OrientedTree::path(2), 3);
        assert_eq!(g.num_vertices(), 8);
        assert_eq!(g.edges().len(), 8);
        let cycles = g.e_cycles().unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 8);
        assert_eq!(cycles[0].i, 3);
    }

    #[test]
    fn level_two_p3_orbits() {
        let g = graph(&OrientedTree::path(3), 2);
        assert_eq!(g.num_vertices(), 9);
        assert_eq!(g.edges().len(), 18);
        let cycles = g.e_cycles().unwrap();
        let for_label = |l: u32| -> Vec<&ECycle> {
            cycles.iter().filter(|c| c.label == l).collect()
        };
        let a = for_label(0);
        // one 4-cycle, one 2-cycle, three loops
        let four: Vec<_> = a.iter().filter(|c| c.i == 2).collect();
        assert_eq!(four.len(), 1);
        assert_eq!(names(&g, &four[0].vertices), ["11", "22", "12", "21"]);
        let two: Vec<_> = a.iter().filter(|c| c.i == 1).collect();
        assert_eq!(two.len(), 1);
        assert_eq!(names(&g, &two[0].vertices), ["13", "23"]);
        assert_eq!(a.iter().filter(|c| c.i == 0).count(), 3);
        let b_four: Vec<_> = for_label(1).into_iter().filter(|c| c.i == 2).collect();
        assert_eq!(names(&g, &b_four[0].vertices), ["22", "33", "23", "32"]);
    }

    #[test]
    fn census_matches_orbit_counts() {
        let g = graph(&OrientedTree::path(3), 2);
        let census = g.cycle_census().unwrap();
        for label in 0..2 {
            assert_eq!(census[&(label, 0)], 3);
            assert_eq!(census[&(label, 1)], 1);
            assert_eq!(census[&(label, 2)], 1);
        }
        let g = graph(&OrientedTree::star(4), 2);
        let census = g.cycle_census().unwrap();
        for label in 0..3 {
            assert_eq!(census[&(label, 0)], 8);
            assert_eq!(census[&(label, 1)], 2);
            assert_eq!(census[&(label, 2)], 1);
        }
        let g = graph(&OrientedTree::path(2), 3);
        let census = g.cycle_census().unwrap();
        assert_eq!(census[&(0, 3)], 1);
        for i in 0..3 {
            assert_eq!(census[&(0, i)], 0);
        }
    }

    #[test]
    fn special_edges_examples() {
        let g = graph(&OrientedTree::path(3), 2);
        let cycles = g.e_cycles().unwrap();
        let four = cycles
            .iter()
            .find(|c| c.label == 0 && c.i == 2)
            .unwrap();
        let (ec, ec2) = four.special_edges().unwrap();
        assert_eq!(names(&g, &[ec.0, ec.1]), ["11", "22"]);
        assert_eq!(names(&g, &[ec2.0, ec2.1]), ["12", "21"]);
        // for i = 1 the two parallel edges coincide as a vertex pair
        let two = cycles
            .iter()
            .find(|c| c.label == 0 && c.i == 1)
            .unwrap();
        let (ec, ec2) = two.special_edges().unwrap();
        assert_eq!(ec, ec2);
        assert_eq!(names(&g, &[ec.0, ec.1]), ["13", "23"]);
        // loops have none
        let loop_cycle = cycles.iter().find(|c| c.i == 0).unwrap();
        assert_eq!(
            loop_cycle.special_edges(),
            Err(SchreierError::LoopHasNoSpecialEdges)
        );
    }

    /// The unique 16-cycle of the fifth level over the path on three
    /// vertices, anchored at suffix `3`.
    #[test]
    fn sixteen_cycle_at_level_five() {
        let g = graph(&OrientedTree::path(3), 5);
        let cycles = g.e_cycles().unwrap();
        let sixteen: Vec<_> = cycles
            .iter()
            .filter(|c| c.label == 0 && c.i == 4)
            .collect();
        assert_eq!(sixteen.len(), 1);
        let c = sixteen[0];
        assert_eq!(c.suffix, vec![3]);
        assert_eq!(
            names(&g, &c.vertices),
            [
                "11113", "22223", "12223", "21223", "11223", "22123", "12123", "21123",
                "11123", "22213", "12213", "21213", "11213", "22113", "12113", "21113",
            ]
        );
        let (ec, ec2) = c.special_edges().unwrap();
        assert_eq!(names(&g, &[ec.0, ec.1]), ["11113", "22223"]);
        assert_eq!(names(&g, &[ec2.0, ec2.1]), ["11123", "22213"]);
    }

    /// On every cycle the vertex opposite `v` differs from `v` exactly in
    /// position `i`.
    #[test]
    fn opposite_vertex_differs_in_position_i() {
        for (tree, n) in [
            (OrientedTree::path(3), 3),
            (OrientedTree::star(4), 2),
            (OrientedTree::spider(&[2, 2, 1]), 2),
        ] {
            let g = graph(&tree, n);
            for c in g.e_cycles().unwrap() {
                if c.i == 0 {
                    continue;
                }
                let half = c.len() / 2;
                for (a, b) in (0..half).map(|j| (c.vertices[j], c.vertices[j + half])) {
                    let wa = g.word_of(a);
                    let wb = g.word_of(b);
                    let diff: Vec<usize> = (0..wa.len())
                        .filter(|&p| wa.letters()[p] != wb.letters()[p])
                        .collect();
                    assert_eq!(diff, vec![c.i as usize - 1]);
                }
            }
        }
    }

    #[test]
    fn build_guards() {
        let a = MealyAutomaton::from_tree(&OrientedTree::path(3));
        assert!(matches!(
            SchreierMultigraph::build(&a, 0),
            Err(SchreierError::InvalidLevel)
        ));
        assert!(matches!(
            SchreierMultigraph::build_with_cap(&a, 5, 100),
            Err(SchreierError::LevelTooLarge { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = graph(&OrientedTree::path(2), 1);
        let text = g.to_json();
        assert_eq!(g.edges().len(), 2); // the doubled pair
        let back = SchreierMultigraph::from_json(&text).unwrap();
        assert_eq!(back.k(), g.k());
        assert_eq!(back.n(), g.n());
        assert_eq!(back.edges(), g.edges());

        let g = graph(&OrientedTree::spider(&[2, 2, 1]), 2);
        let back = SchreierMultigraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert!(matches!(
            back.e_cycles(),
            Err(SchreierError::MissingGenerators)
        ));
    }

    #[test]
    fn dot_output_shape() {
        let g = graph(&OrientedTree::path(3), 1);
        let dot = g.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(dot.contains("\"3\" -- \"3\" [label=\"e1\"]"));
    }
}
