//! Ranked alphabets indexed by a priority pair, regular trees as rooted
//! finite graphs, and the structural operations on them (shave,
//! well-formedness, kept/switched, priority padding).
//!
//! A [`RegularTree`] presents an infinite tree: its positions are the
//! direction sequences obtained by unravelling the graph from the root.

mod lazy;
mod parse;

pub use lazy::{lazy_of_tree, LazyTree, PrefixTree};
pub use parse::{parse_tree_spec, ParseOutcome};

use crate::games::Player;
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// The fixed priority window `i < k` all letters of a tree live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexPair {
    pub i: u32,
    pub k: u32,
}

impl IndexPair {
    pub fn new(i: u32, k: u32) -> Result<IndexPair> {
        if i < k {
            Ok(IndexPair { i, k })
        } else {
            Err(Error::BadIndexPair(i, k))
        }
    }

    pub fn contains(&self, j: u32) -> bool {
        self.i <= j && j <= self.k
    }

    /// The `p`-losing numbers in `[i, k]`, ascending: odd for player 1,
    /// even for player 2.
    pub fn losing(&self, p: Player) -> Vec<u32> {
        let rem = match p {
            Player::One => 1,
            Player::Two => 0,
        };
        (self.i..=self.k).filter(|j| j % 2 == rem).collect()
    }

    pub fn max_losing(&self, p: Player) -> u32 {
        *self.losing(p).last().expect("i < k guarantees a losing number")
    }

    pub fn min_losing(&self, p: Player) -> u32 {
        self.losing(p)[0]
    }
}

/// Which alphabet a tree is declared over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    /// Priorities and binary choice letters only.
    Alp,
    /// `Alp` plus the unary player-swapping letter `neg`.
    Ang,
    /// `Ang` with ternary choice letters instead of binary ones.
    AngPlus,
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Alp => write!(f, "alp"),
            Alphabet::Ang => write!(f, "ang"),
            Alphabet::AngPlus => write!(f, "angp"),
        }
    }
}

/// A letter of one of the three alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Unary priority letter `pri j`.
    Pri(u32),
    /// Binary choice letter owned by a player.
    Choice(Player),
    /// Unary player swap `~`.
    Neg,
    /// Ternary choice letter of the extended alphabet.
    ChoicePlus(Player),
}

impl Letter {
    pub fn arity(&self) -> usize {
        match self {
            Letter::Pri(_) | Letter::Neg => 1,
            Letter::Choice(_) => 2,
            Letter::ChoicePlus(_) => 3,
        }
    }

    pub fn is_pri(&self) -> bool {
        matches!(self, Letter::Pri(_))
    }

    /// True iff the letter may appear in a tree over `alphabet`.
    pub fn legal_over(&self, alphabet: Alphabet) -> bool {
        match self {
            Letter::Pri(_) => true,
            Letter::Neg => alphabet != Alphabet::Alp,
            Letter::Choice(_) => alphabet != Alphabet::AngPlus,
            Letter::ChoicePlus(_) => alphabet == Alphabet::AngPlus,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Pri(j) => write!(f, "pri{j}"),
            Letter::Choice(p) => write!(f, "p{p}"),
            Letter::Neg => write!(f, "neg"),
            Letter::ChoicePlus(p) => write!(f, "p{p}x"),
        }
    }
}

/// Index of a node in a [`RegularTree`].
pub type NodeId = usize;

/// A position of the presented infinite tree: a sequence of directions.
pub type TreePosition = Vec<u32>;

/// A rooted, finite, labeled graph presenting an infinite tree.
///
/// Invariants: children counts match letter arities, every node is reachable
/// from the root, and every letter is legal over the declared alphabet with
/// priorities inside the index window.
#[derive(Debug, Clone)]
pub struct RegularTree {
    alphabet: Alphabet,
    index: IndexPair,
    labels: Vec<Letter>,
    children: Vec<Vec<NodeId>>,
    names: Vec<String>,
    root: NodeId,
}

impl RegularTree {
    /// Builds a tree from raw parts, checking all invariants. Nodes
    /// unreachable from the root are rejected; use [`RegularTree::trimmed`]
    /// to drop them instead.
    pub fn build(
        alphabet: Alphabet,
        index: IndexPair,
        root: NodeId,
        nodes: Vec<(String, Letter, Vec<NodeId>)>,
    ) -> Result<RegularTree> {
        let t = Self::build_unchecked_reach(alphabet, index, root, nodes)?;
        let reach = t.reachable_nodes();
        if reach.len() != t.len() {
            let missing = (0..t.len()).find(|n| !reach.contains(n)).unwrap();
            return Err(Error::Domain(format!(
                "node `{}` is unreachable from the root",
                t.names[missing]
            )));
        }
        Ok(t)
    }

    /// Like [`RegularTree::build`] but silently drops unreachable nodes.
    pub fn trimmed(
        alphabet: Alphabet,
        index: IndexPair,
        root: NodeId,
        nodes: Vec<(String, Letter, Vec<NodeId>)>,
    ) -> Result<(RegularTree, Vec<String>)> {
        let t = Self::build_unchecked_reach(alphabet, index, root, nodes)?;
        let mut reach: Vec<NodeId> = t.reachable_nodes().into_iter().collect();
        reach.sort_unstable();
        let dropped: Vec<String> = (0..t.len())
            .filter(|n| !reach.contains(n))
            .map(|n| t.names[n].clone())
            .collect();
        if dropped.is_empty() {
            return Ok((t, dropped));
        }
        let mut new_id = vec![usize::MAX; t.len()];
        for (i, &n) in reach.iter().enumerate() {
            new_id[n] = i;
        }
        let nodes = reach
            .iter()
            .map(|&n| {
                (
                    t.names[n].clone(),
                    t.labels[n],
                    t.children[n].iter().map(|&c| new_id[c]).collect(),
                )
            })
            .collect();
        let t = Self::build_unchecked_reach(alphabet, index, new_id[t.root], nodes)?;
        Ok((t, dropped))
    }

    fn build_unchecked_reach(
        alphabet: Alphabet,
        index: IndexPair,
        root: NodeId,
        nodes: Vec<(String, Letter, Vec<NodeId>)>,
    ) -> Result<RegularTree> {
        let mut labels = Vec::with_capacity(nodes.len());
        let mut children = Vec::with_capacity(nodes.len());
        let mut names = Vec::with_capacity(nodes.len());
        let count = nodes.len();
        for (name, letter, kids) in nodes {
            if !letter.legal_over(alphabet) {
                return Err(Error::IllegalLetter(letter.to_string(), alphabet.to_string()));
            }
            if let Letter::Pri(j) = letter {
                if !index.contains(j) {
                    return Err(Error::PriorityOutOfRange { j, i: index.i, k: index.k });
                }
            }
            if kids.len() != letter.arity() {
                return Err(Error::ArityMismatch {
                    name,
                    letter: letter.to_string(),
                    expected: letter.arity(),
                    got: kids.len(),
                });
            }
            if let Some(&bad) = kids.iter().find(|&&c| c >= count) {
                return Err(Error::Domain(format!(
                    "node `{name}` references out-of-range child {bad}"
                )));
            }
            labels.push(letter);
            children.push(kids);
            names.push(name);
        }
        if root >= count {
            return Err(Error::Domain("root node out of range".into()));
        }
        Ok(RegularTree { alphabet, index, labels, children, names, root })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn index(&self) -> IndexPair {
        self.index
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn label(&self, n: NodeId) -> Letter {
        self.labels[n]
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        &self.children[n]
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.names[n]
    }

    pub fn node_by_name(&self, name: &str) -> Result<NodeId> {
        self.names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.len()
    }

    fn reachable_nodes(&self) -> std::collections::HashSet<NodeId> {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.root];
        seen.insert(self.root);
        while let Some(n) = stack.pop() {
            for &c in &self.children[n] {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// The node at a tree position, walking the graph from the root.
    pub fn node_at(&self, pos: &[u32]) -> Result<NodeId> {
        let mut n = self.root;
        for &d in pos {
            let kids = &self.children[n];
            if (d as usize) >= kids.len() {
                return Err(Error::BadPosition(pos.to_vec()));
            }
            n = kids[d as usize];
        }
        Ok(n)
    }

    /// The letter of the presented infinite tree at `pos`.
    pub fn letter_at(&self, pos: &[u32]) -> Result<Letter> {
        Ok(self.label(self.node_at(pos)?))
    }

    /// A same-graph tree re-rooted at `n`, trimmed to what `n` reaches.
    /// Node identities are not preserved.
    pub fn subtree(&self, n: NodeId) -> RegularTree {
        let nodes = self
            .nodes()
            .map(|m| (self.names[m].clone(), self.labels[m], self.children[m].clone()))
            .collect();
        let (t, _) = RegularTree::trimmed(self.alphabet, self.index, n, nodes)
            .expect("subtree of a valid tree is valid");
        t
    }

    /// Text-format source for the tree; re-parses to an isomorphic graph.
    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet {} i={} k={}\n", self.alphabet, self.index.i, self.index.k);
        // Emit the root's equation first so re-parsing keeps node 0 the root.
        let order: Vec<NodeId> =
            std::iter::once(self.root).chain(self.nodes().filter(|&n| n != self.root)).collect();
        for n in order {
            let kids: Vec<&str> = self.children[n].iter().map(|&c| self.names[c].as_str()).collect();
            let rhs = match self.labels[n] {
                Letter::Pri(j) => format!("pri{}({})", j, kids[0]),
                Letter::Choice(p) => format!("p{}({}, {})", p, kids[0], kids[1]),
                Letter::Neg => format!("neg({})", kids[0]),
                Letter::ChoicePlus(p) => {
                    format!("p{}x({}, {}, {})", p, kids[0], kids[1], kids[2])
                }
            };
            out.push_str(&format!("let {} = {};\n", self.names[n], rhs));
        }
        out.push_str(&format!("root {};\n", self.names[self.root]));
        out
    }

    /// GraphViz export: one node per graph node, edges labeled by direction.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n");
        for n in self.nodes() {
            let shape = if n == self.root { ", shape=doublecircle" } else { "" };
            out.push_str(&format!(
                "  n{} [label=\"{}: {}\"{}];\n",
                n, self.names[n], self.labels[n], shape
            ));
        }
        for n in self.nodes() {
            for (d, &c) in self.children[n].iter().enumerate() {
                out.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", n, c, d));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Equality of the presented infinite trees, decided by a synchronous
    /// walk over node pairs from the roots.
    pub fn same_unravelling(&self, other: &RegularTree) -> bool {
        if self.alphabet != other.alphabet || self.index != other.index {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(self.root, other.root)];
        while let Some((a, b)) = stack.pop() {
            if !seen.insert((a, b)) {
                continue;
            }
            if self.labels[a] != other.labels[b] {
                return false;
            }
            for (&ca, &cb) in self.children[a].iter().zip(&other.children[b]) {
                stack.push((ca, cb));
            }
        }
        true
    }
}

/// True iff `pos` is a switched position of `t`: an odd number of proper
/// prefixes carry `neg`.
pub fn switched(t: &RegularTree, pos: &[u32]) -> Result<bool> {
    t.node_at(pos)?; // validate the full position
    let mut n = t.root();
    let mut negs = 0u32;
    for &d in pos {
        if t.label(n) == Letter::Neg {
            negs += 1;
        }
        n = t.children(n)[d as usize];
    }
    Ok(negs % 2 == 1)
}

/// Projects a tree over the extended alphabet back to `Ang`: ternary choice
/// letters keep their first two children, third-child subgraphs that become
/// unreachable are dropped.
pub fn shave(r: &RegularTree) -> Result<RegularTree> {
    if r.alphabet() != Alphabet::AngPlus {
        return Err(Error::WrongAlphabet {
            expected: Alphabet::AngPlus.to_string(),
            got: r.alphabet().to_string(),
        });
    }
    let (t, _) = RegularTree::trimmed(
        Alphabet::Ang,
        r.index(),
        r.root(),
        r.nodes()
            .map(|n| {
                let (letter, kids) = shaved_node(r, n);
                (r.name(n).to_string(), letter, kids)
            })
            .collect(),
    )?;
    Ok(t)
}

/// Shave without dropping unreachable nodes: node ids are preserved, so the
/// result can answer questions about `shave(r |- n)` for every `n`.
pub(crate) fn shave_keep_all(r: &RegularTree) -> RegularTree {
    let nodes = r
        .nodes()
        .map(|n| {
            let (letter, kids) = shaved_node(r, n);
            (r.name(n).to_string(), letter, kids)
        })
        .collect();
    RegularTree::build_unchecked_reach(Alphabet::Ang, r.index(), r.root(), nodes)
        .expect("shaving preserves validity")
}

fn shaved_node(r: &RegularTree, n: NodeId) -> (Letter, Vec<NodeId>) {
    match r.label(n) {
        Letter::ChoicePlus(p) => (Letter::Choice(p), r.children(n)[..2].to_vec()),
        l => (l, r.children(n).to_vec()),
    }
}

/// Well-formedness: no reachable cycle through a `neg` node — for the
/// extended alphabet, no such cycle avoiding all third-child edges.
pub fn is_well_formed(t: &RegularTree) -> bool {
    match t.alphabet() {
        Alphabet::Alp => true,
        Alphabet::Ang => !neg_on_cycle(t, false),
        Alphabet::AngPlus => !neg_on_cycle(t, true),
    }
}

fn neg_on_cycle(t: &RegularTree, skip_third: bool) -> bool {
    let keep = vec![true; t.len()];
    let succ = |n: NodeId| {
        let kids = t.children(n);
        let limit = if skip_third && matches!(t.label(n), Letter::ChoicePlus(_)) {
            2
        } else {
            kids.len()
        };
        kids[..limit].iter().copied().collect::<Vec<_>>().into_iter()
    };
    for scc in crate::games::sccs_of(t.len(), &keep, succ) {
        let cyclic = scc.len() > 1 || {
            let n = scc[0];
            let kids = t.children(n);
            let limit = if skip_third && matches!(t.label(n), Letter::ChoicePlus(_)) {
                2
            } else {
                kids.len()
            };
            kids[..limit].contains(&n)
        };
        if cyclic && scc.iter().any(|&n| t.label(n) == Letter::Neg) {
            return true;
        }
    }
    false
}

/// True iff every reachable cycle contains a priority node, so every infinite
/// play sees priorities infinitely often.
pub fn is_priority_guarded(t: &RegularTree) -> bool {
    let keep: Vec<bool> = t.nodes().map(|n| !t.label(n).is_pri()).collect();
    let succ = |n: NodeId| t.children(n).to_vec().into_iter();
    for scc in crate::games::sccs_of(t.len(), &keep, succ) {
        if scc.len() > 1 || t.children(scc[0]).contains(&scc[0]) {
            return false;
        }
    }
    true
}

/// Inserts `pri k` nodes so that no edge connects two non-priority nodes:
/// every second node on each branch is then a priority node. Does not change
/// the winner of the induced game.
pub fn pad_priorities(t: &RegularTree) -> RegularTree {
    let k = t.index().k;
    let mut nodes: Vec<(String, Letter, Vec<NodeId>)> = t
        .nodes()
        .map(|n| (t.name(n).to_string(), t.label(n), t.children(n).to_vec()))
        .collect();
    let mut fresh = 0usize;
    for n in t.nodes() {
        if t.label(n).is_pri() {
            continue;
        }
        for d in 0..t.children(n).len() {
            let c = t.children(n)[d];
            if !t.label(c).is_pri() {
                let id = nodes.len();
                nodes.push((format!("pad.{fresh}"), Letter::Pri(k), vec![c]));
                fresh += 1;
                nodes[n].2[d] = id;
            }
        }
    }
    RegularTree::build(t.alphabet(), t.index(), t.root(), nodes)
        .expect("padding preserves validity")
}

/// Wraps a tree in a fresh `neg` root (used by the player-swap law tests).
pub fn wrap_neg(t: &RegularTree) -> RegularTree {
    let alphabet = match t.alphabet() {
        Alphabet::Alp => Alphabet::Ang,
        a => a,
    };
    let mut nodes: Vec<(String, Letter, Vec<NodeId>)> = t
        .nodes()
        .map(|n| (t.name(n).to_string(), t.label(n), t.children(n).to_vec()))
        .collect();
    let root = nodes.len();
    nodes.push(("neg.root".into(), Letter::Neg, vec![t.root()]));
    RegularTree::build(alphabet, t.index(), root, nodes).expect("wrapping preserves validity")
}

/// Wraps a tree in a fresh `pri j` root.
pub fn wrap_pri(t: &RegularTree, j: u32) -> RegularTree {
    let mut nodes: Vec<(String, Letter, Vec<NodeId>)> = t
        .nodes()
        .map(|n| (t.name(n).to_string(), t.label(n), t.children(n).to_vec()))
        .collect();
    let root = nodes.len();
    nodes.push((format!("pri{j}.root"), Letter::Pri(j), vec![t.root()]));
    RegularTree::build(t.alphabet(), t.index(), root, nodes).expect("wrapping preserves validity")
}

/// Disjoint union of two trees, rooted by a fresh binary choice node.
pub fn join_choice(p: Player, left: &RegularTree, right: &RegularTree) -> RegularTree {
    assert_eq!(left.index(), right.index());
    let alphabet = match (left.alphabet(), right.alphabet()) {
        (Alphabet::Alp, Alphabet::Alp) => Alphabet::Alp,
        _ => Alphabet::Ang,
    };
    let mut nodes: Vec<(String, Letter, Vec<NodeId>)> = Vec::new();
    for n in left.nodes() {
        nodes.push((format!("l.{}", left.name(n)), left.label(n), left.children(n).to_vec()));
    }
    let off = left.len();
    for n in right.nodes() {
        nodes.push((
            format!("r.{}", right.name(n)),
            right.label(n),
            right.children(n).iter().map(|&c| c + off).collect(),
        ));
    }
    let root = nodes.len();
    nodes.push(("choice.root".into(), Letter::Choice(p), vec![left.root(), right.root() + off]));
    RegularTree::build(alphabet, left.index(), root, nodes).expect("join preserves validity")
}

/// Renames nodes to `n0, n1, ...` (used when emitting generated trees whose
/// synthetic names could collide).
pub fn with_fresh_names(t: &RegularTree) -> RegularTree {
    let nodes = t
        .nodes()
        .map(|n| (format!("n{n}"), t.label(n), t.children(n).to_vec()))
        .collect();
    RegularTree::build(t.alphabet(), t.index(), t.root(), nodes).expect("renaming is safe")
}

/// Interns `(graph-identity, node)` pairs so caches keyed by subtrees work
/// across `Arc`-shared graphs.
pub fn graph_key(t: &std::sync::Arc<RegularTree>) -> usize {
    std::sync::Arc::as_ptr(t) as usize
}

/// Re-labels the tree so that `RegularTree::node_by_name` works with the
/// equation names produced by the parser. Helper for fixtures.
pub fn rename_map(t: &RegularTree) -> HashMap<String, NodeId> {
    t.nodes().map(|n| (t.name(n).to_string(), n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn switched_counts_negs() {
        // neg(neg(pri0-loop))
        let idx = IndexPair::new(0, 2).unwrap();
        let t = RegularTree::build(
            Alphabet::Ang,
            idx,
            0,
            vec![
                ("a".into(), Letter::Neg, vec![1]),
                ("b".into(), Letter::Neg, vec![2]),
                ("c".into(), Letter::Pri(0), vec![2]),
            ],
        )
        .unwrap();
        assert!(!switched(&t, &[]).unwrap());
        assert!(switched(&t, &[0]).unwrap());
        assert!(!switched(&t, &[0, 0]).unwrap());
        assert!(matches!(switched(&t, &[1]), Err(Error::BadPosition(_))));
    }

    #[test]
    fn well_formedness_cycle_through_neg() {
        let idx = IndexPair::new(0, 2).unwrap();
        // a = neg(b); b = pri2(a): cycle through neg.
        let bad = RegularTree::build(
            Alphabet::Ang,
            idx,
            0,
            vec![
                ("a".into(), Letter::Neg, vec![1]),
                ("b".into(), Letter::Pri(2), vec![0]),
            ],
        )
        .unwrap();
        assert!(!is_well_formed(&bad));
        // a = neg(b); b = pri2(b): neg off-cycle.
        let good = RegularTree::build(
            Alphabet::Ang,
            idx,
            0,
            vec![
                ("a".into(), Letter::Neg, vec![1]),
                ("b".into(), Letter::Pri(2), vec![1]),
            ],
        )
        .unwrap();
        assert!(is_well_formed(&good));
    }

    #[test]
    fn angplus_wellformedness_ignores_third_child_cycles() {
        let idx = IndexPair::new(0, 2).unwrap();
        // x = p1x(a, a, n); n = neg(x); a = pri0(a).
        // The only cycle through neg uses a third-child edge.
        let t = RegularTree::build(
            Alphabet::AngPlus,
            idx,
            0,
            vec![
                ("x".into(), Letter::ChoicePlus(Player::One), vec![1, 1, 2]),
                ("a".into(), Letter::Pri(0), vec![1]),
                ("n".into(), Letter::Neg, vec![0]),
            ],
        )
        .unwrap();
        assert!(is_well_formed(&t));
        // Re-routing child 0 through n makes the neg cycle avoid direction 2.
        let t2 = RegularTree::build(
            Alphabet::AngPlus,
            idx,
            0,
            vec![
                ("x".into(), Letter::ChoicePlus(Player::One), vec![2, 1, 1]),
                ("a".into(), Letter::Pri(0), vec![1]),
                ("n".into(), Letter::Neg, vec![0]),
            ],
        )
        .unwrap();
        assert!(!is_well_formed(&t2));
    }

    #[test]
    fn shave_drops_third_component() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t = RegularTree::build(
            Alphabet::AngPlus,
            idx,
            0,
            vec![
                ("x".into(), Letter::ChoicePlus(Player::One), vec![1, 1, 2]),
                ("a".into(), Letter::Pri(0), vec![1]),
                ("c".into(), Letter::Pri(1), vec![2]),
            ],
        )
        .unwrap();
        let s = shave(&t).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.label(s.root()), Letter::Choice(Player::One));
        assert!(is_well_formed(&s));
    }

    #[test]
    fn pad_leaves_alternating_trees_alone() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t = RegularTree::build(
            Alphabet::Alp,
            idx,
            0,
            vec![
                ("x".into(), Letter::Choice(Player::One), vec![1, 2]),
                ("a".into(), Letter::Pri(0), vec![1]),
                ("b".into(), Letter::Pri(1), vec![2]),
            ],
        )
        .unwrap();
        let padded = pad_priorities(&t);
        assert_eq!(padded.len(), t.len());
        assert!(padded.same_unravelling(&t));
    }

    #[test]
    fn pad_inserts_on_choice_chains() {
        let idx = IndexPair::new(0, 2).unwrap();
        // x = p1(x, a): choice -> choice edge gets a pri2 interposed.
        let t = RegularTree::build(
            Alphabet::Alp,
            idx,
            0,
            vec![
                ("x".into(), Letter::Choice(Player::One), vec![0, 1]),
                ("a".into(), Letter::Pri(0), vec![1]),
            ],
        )
        .unwrap();
        let padded = pad_priorities(&t);
        assert_eq!(padded.len(), 3);
        assert!(is_priority_guarded(&padded));
        assert!(!is_priority_guarded(&t));
        let pad_node = padded.children(padded.root())[0];
        assert_eq!(padded.label(pad_node), Letter::Pri(2));
    }

    #[test]
    fn unravelling_matches_graph_walk_on_fixtures() {
        let t = fixtures::fig4();
        // Exhaustive positions of length <= 12 (branching only at choices).
        let mut stack: Vec<TreePosition> = vec![vec![]];
        while let Some(pos) = stack.pop() {
            let n = t.node_at(&pos).unwrap();
            assert_eq!(t.letter_at(&pos).unwrap(), t.label(n));
            if pos.len() < 12 {
                for d in 0..t.label(n).arity() as u32 {
                    let mut next = pos.clone();
                    next.push(d);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn text_roundtrip_is_isomorphic() {
        let t = fixtures::fig4();
        let out = t.to_text();
        let parsed = parse_tree_spec(&out).unwrap();
        assert!(parsed.tree.same_unravelling(&t));
    }
}
