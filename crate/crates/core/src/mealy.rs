//! Invertible Mealy automata built from oriented trees, and their action on
//! words.
//!
//! Every oriented edge `e = (x, y)` of the seed tree becomes a state whose
//! output swaps the letters `x` and `y` and fixes everything else. Reading
//! the letter `x` keeps the state alive, any other letter drops to the sink.
//! Acting on a word processes letters left to right: the current state emits
//! the output letter and its restriction takes over for the rest.

use crate::error::MealyError;
use crate::tree::OrientedTree;

/// A word over the alphabet `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Renders the word: concatenated digits while the alphabet fits in one
    /// digit, dot-separated integers otherwise.
    pub fn render(&self, k: u32) -> String {
        if k <= 9 {
            self.0.iter().map(|l| l.to_string()).collect()
        } else {
            self.0
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Inverse of [`Word::render`] for the same alphabet size.
    pub fn parse(text: &str, k: u32) -> Option<Self> {
        let letters: Option<Vec<u32>> = if k <= 9 {
            text.chars().map(|c| c.to_digit(10)).collect()
        } else {
            text.split('.').map(|t| t.parse::<u32>().ok()).collect()
        };
        let letters = letters?;
        if letters.is_empty() || letters.iter().any(|&l| l == 0 || l > k) {
            return None;
        }
        Some(Word(letters))
    }
}

/// A finite Mealy automaton over the alphabet `1..=k`.
///
/// The tables are fully generic so that malformed machines can be built for
/// negative tests; [`MealyAutomaton::from_tree`] produces the tree
/// construction, which is always invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyAutomaton {
    k: u32,
    /// `restriction[q][x-1]`: state entered after state `q` reads letter `x`.
    restriction: Vec<Vec<u32>>,
    /// `output[q][x-1]`: letter emitted when state `q` reads letter `x`.
    output: Vec<Vec<u32>>,
    sink: u32,
    names: Vec<String>,
}

impl MealyAutomaton {
    /// Builds an automaton from raw transition tables.
    pub fn from_tables(
        k: u32,
        restriction: Vec<Vec<u32>>,
        output: Vec<Vec<u32>>,
        sink: u32,
        names: Option<Vec<String>>,
    ) -> Result<Self, MealyError> {
        if k < 1 {
            return Err(MealyError::BadTables("alphabet must be nonempty".into()));
        }
        let states = restriction.len();
        if states == 0 || output.len() != states {
            return Err(MealyError::BadTables(
                "restriction and output must cover the same nonempty state set".into(),
            ));
        }
        if sink as usize >= states {
            return Err(MealyError::UnknownState(sink));
        }
        for q in 0..states {
            if restriction[q].len() != k as usize || output[q].len() != k as usize {
                return Err(MealyError::BadTables(format!(
                    "state {q} has rows of the wrong width"
                )));
            }
            for x in 0..k as usize {
                if restriction[q][x] as usize >= states {
                    return Err(MealyError::UnknownState(restriction[q][x]));
                }
                if output[q][x] == 0 || output[q][x] > k {
                    return Err(MealyError::InvalidLetter(output[q][x], k));
                }
            }
        }
        let names = names.unwrap_or_else(|| (0..states).map(|q| format!("q{q}")).collect());
        if names.len() != states {
            return Err(MealyError::BadTables("one name per state".into()));
        }
        Ok(MealyAutomaton {
            k,
            restriction,
            output,
            sink,
            names,
        })
    }

    /// The automaton of an oriented tree: one state per oriented edge plus a
    /// sink. Edge state `i` corresponds to `tree.edges()[i]`.
    pub fn from_tree(tree: &OrientedTree) -> Self {
        let k = tree.k();
        let m = tree.edges().len();
        let sink = m as u32;
        let mut restriction = vec![vec![sink; k as usize]; m + 1];
        let mut output: Vec<Vec<u32>> = (0..=m)
            .map(|_| (1..=k).collect::<Vec<u32>>())
            .collect();
        let mut names: Vec<String> = (1..=m).map(|i| format!("e{i}")).collect();
        names.push("id".into());
        for (i, &(x, y)) in tree.edges().iter().enumerate() {
            restriction[i][(x - 1) as usize] = i as u32;
            output[i][(x - 1) as usize] = y;
            output[i][(y - 1) as usize] = x;
        }
        MealyAutomaton {
            k,
            restriction,
            output,
            sink,
            names,
        }
    }

    pub fn alphabet(&self) -> u32 {
        self.k
    }

    pub fn num_states(&self) -> u32 {
        self.restriction.len() as u32
    }

    pub fn sink(&self) -> u32 {
        self.sink
    }

    /// All states except the sink, in table order.
    pub fn edge_states(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.num_states()).filter(move |&q| q != self.sink)
    }

    pub fn state_name(&self, q: u32) -> &str {
        &self.names[q as usize]
    }

    pub fn restriction(&self, q: u32, letter: u32) -> u32 {
        self.restriction[q as usize][(letter - 1) as usize]
    }

    pub fn output(&self, q: u32, letter: u32) -> u32 {
        self.output[q as usize][(letter - 1) as usize]
    }

    /// Applies state `q` to a word: emit the output of the first letter, then
    /// let the restriction handle the remaining suffix. Length is preserved.
    pub fn apply(&self, q: u32, word: &Word) -> Result<Word, MealyError> {
        if q >= self.num_states() {
            return Err(MealyError::UnknownState(q));
        }
        let mut state = q;
        let mut out = Vec::with_capacity(word.len());
        for &letter in word.letters() {
            if letter == 0 || letter > self.k {
                return Err(MealyError::InvalidLetter(letter, self.k));
            }
            out.push(self.output(state, letter));
            state = self.restriction(state, letter);
        }
        Ok(Word(out))
    }

    /// True when every state's output row is a permutation of the alphabet.
    pub fn is_invertible(&self) -> bool {
        self.output.iter().all(|row| {
            let mut seen = vec![false; self.k as usize];
            row.iter().all(|&l| {
                let slot = &mut seen[(l - 1) as usize];
                !std::mem::replace(slot, true)
            })
        })
    }

    /// Moore diagram in DOT format, one arrow per (state, letter).
    pub fn moore_dot(&self) -> String {
        let mut out = String::from("digraph moore {\n  rankdir=LR;\n");
        for q in 0..self.num_states() {
            out.push_str(&format!("  \"{}\" [shape=circle];\n", self.names[q as usize]));
        }
        for q in 0..self.num_states() {
            for x in 1..=self.k {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}|{}\"];\n",
                    self.names[q as usize],
                    self.names[self.restriction(q, x) as usize],
                    x,
                    self.output(q, x)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[u32]) -> Word {
        Word::new(letters.to_vec())
    }

    /// The two-generator machine of the path on three vertices.
    fn tangled_odometer() -> MealyAutomaton {
        MealyAutomaton::from_tree(&OrientedTree::path(3))
    }

    #[test]
    fn tree_automaton_tables() {
        let a = tangled_odometer();
        assert_eq!(a.num_states(), 3);
        assert_eq!(a.sink(), 2);
        // state e1 = (1,2): output swaps 1 and 2, restriction stays on 1
        assert_eq!(a.output(0, 1), 2);
        assert_eq!(a.output(0, 2), 1);
        assert_eq!(a.output(0, 3), 3);
        assert_eq!(a.restriction(0, 1), 0);
        assert_eq!(a.restriction(0, 2), a.sink());
        assert_eq!(a.restriction(0, 3), a.sink());
        // state e2 = (2,3)
        assert_eq!(a.output(1, 2), 3);
        assert_eq!(a.output(1, 3), 2);
        assert_eq!(a.restriction(1, 2), 1);
        // sink is the identity everywhere
        for x in 1..=3 {
            assert_eq!(a.output(a.sink(), x), x);
            assert_eq!(a.restriction(a.sink(), x), a.sink());
        }
    }

    #[test]
    fn apply_examples() {
        let a = tangled_odometer();
        assert_eq!(a.apply(0, &w(&[1, 1, 2])).unwrap(), w(&[2, 2, 1]));
        assert_eq!(a.apply(0, &w(&[3, 1, 1])).unwrap(), w(&[3, 1, 1]));
        assert_eq!(a.apply(1, &w(&[2, 3])).unwrap(), w(&[3, 2]));
    }

    #[test]
    fn apply_preserves_length() {
        let a = MealyAutomaton::from_tree(&OrientedTree::star(4));
        for word in [w(&[1]), w(&[2, 4, 1]), w(&[3, 3, 3, 3, 2])] {
            for q in 0..a.num_states() {
                assert_eq!(a.apply(q, &word).unwrap().len(), word.len());
            }
        }
    }

    #[test]
    fn apply_rejects_bad_input() {
        let a = tangled_odometer();
        assert_eq!(a.apply(7, &w(&[1])), Err(MealyError::UnknownState(7)));
        assert_eq!(a.apply(0, &w(&[4])), Err(MealyError::InvalidLetter(4, 3)));
    }

    /// Single application is a transposition on letters; on longer words the
    /// square is *not* the identity (orbits grow as powers of two). The true
    /// inverse of an edge state is the state of the reversed edge.
    #[test]
    fn generators_are_not_involutions_beyond_letters() {
        let a = tangled_odometer();
        // on single letters the action is the swap 1 <-> 2
        for x in 1..=3 {
            let once = a.apply(0, &w(&[x])).unwrap();
            assert_eq!(a.apply(0, &once).unwrap(), w(&[x]));
        }
        // on words the orbit of 11 is the 4-cycle 11 -> 22 -> 12 -> 21
        let twice = a.apply(0, &a.apply(0, &w(&[1, 1])).unwrap()).unwrap();
        assert_eq!(twice, w(&[1, 2]));
    }

    #[test]
    fn reversed_edge_is_the_inverse() {
        let forward = MealyAutomaton::from_tree(
            &OrientedTree::from_edges(vec![(1, 2), (2, 3), (1, 4)]).unwrap(),
        );
        let backward = MealyAutomaton::from_tree(
            &OrientedTree::from_edges(vec![(2, 1), (3, 2), (4, 1)]).unwrap(),
        );
        for word in [w(&[1, 1, 1]), w(&[2, 1, 4, 3]), w(&[4, 4, 2, 1, 3])] {
            for q in 0..3 {
                let there = forward.apply(q, &word).unwrap();
                assert_eq!(backward.apply(q, &there).unwrap(), word);
                let back = backward.apply(q, &word).unwrap();
                assert_eq!(forward.apply(q, &back).unwrap(), word);
            }
        }
    }

    #[test]
    fn invertibility() {
        assert!(tangled_odometer().is_invertible());
        assert!(MealyAutomaton::from_tree(&OrientedTree::path(2)).is_invertible());
        // constant output row is not a permutation
        let broken = MealyAutomaton::from_tables(
            2,
            vec![vec![0, 0]],
            vec![vec![1, 1]],
            0,
            None,
        )
        .unwrap();
        assert!(!broken.is_invertible());
    }

    #[test]
    fn moore_dot_counts() {
        let p2 = MealyAutomaton::from_tree(&OrientedTree::path(2));
        let dot = p2.moore_dot();
        assert_eq!(dot.matches("->").count(), 4); // 2 states x 2 letters
        assert_eq!(dot.matches("[shape=circle]").count(), 2);

        let p3 = tangled_odometer();
        let dot = p3.moore_dot();
        assert_eq!(dot.matches("->").count(), 9);
        // the live transitions of the two edge states
        assert!(dot.contains("\"e1\" -> \"e1\" [label=\"1|2\"]"));
        assert!(dot.contains("\"e2\" -> \"e2\" [label=\"2|3\"]"));
        assert!(dot.contains("\"e1\" -> \"id\" [label=\"2|1\"]"));

        let sink_only =
            MealyAutomaton::from_tables(3, vec![vec![0, 0, 0]], vec![vec![1, 2, 3]], 0, None)
                .unwrap();
        assert_eq!(sink_only.moore_dot().matches("->").count(), 3);
    }

    #[test]
    fn word_render_parse() {
        assert_eq!(w(&[1, 1, 2]).render(3), "112");
        assert_eq!(w(&[1, 10, 2]).render(12), "1.10.2");
        assert_eq!(Word::parse("112", 3), Some(w(&[1, 1, 2])));
        assert_eq!(Word::parse("1.10.2", 12), Some(w(&[1, 10, 2])));
        assert_eq!(Word::parse("140", 3), None);
        assert_eq!(Word::parse("", 3), None);
    }
}
