//! Coinductive tree interface: trees expanded on demand to finite depth.

use super::{Letter, NodeId, RegularTree, TreePosition};
use crate::Result;
use std::collections::HashMap;
use std::sync::Arc;

/// A tree expanded on demand. Expansion results are memoized per position,
/// so two queries at the same position always agree.
pub struct LazyTree<H> {
    root: H,
    expand: Box<dyn FnMut(&H) -> (Letter, Vec<H>)>,
    memo: HashMap<TreePosition, (Letter, Vec<H>)>,
}

/// Finite restriction of a lazy tree. `cut` marks depth-truncated nodes whose
/// expansion continues beyond the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTree {
    pub letter: Letter,
    pub children: Vec<PrefixTree>,
    pub cut: bool,
}

impl PrefixTree {
    /// Number of nodes in the prefix.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PrefixTree::size).sum::<usize>()
    }

    pub fn letter_at(&self, pos: &[u32]) -> Option<Letter> {
        let mut cur = self;
        for &d in pos {
            cur = cur.children.get(d as usize)?;
        }
        Some(cur.letter)
    }

    /// Drops third children of ternary choice letters, mapping them to the
    /// corresponding binary ones.
    pub fn shave(&self) -> PrefixTree {
        let (letter, take) = match self.letter {
            Letter::ChoicePlus(p) => (Letter::Choice(p), 2),
            l => (l, self.children.len()),
        };
        PrefixTree {
            letter,
            children: self.children.iter().take(take).map(PrefixTree::shave).collect(),
            cut: self.cut,
        }
    }
}

impl<H: Clone> LazyTree<H> {
    pub fn new(root: H, expand: impl FnMut(&H) -> (Letter, Vec<H>) + 'static) -> LazyTree<H> {
        LazyTree { root, expand: Box::new(expand), memo: HashMap::new() }
    }

    pub fn root_handle(&self) -> H {
        self.root.clone()
    }

    fn expand_memo(&mut self, pos: &[u32], h: &H) -> (Letter, Vec<H>) {
        if let Some(hit) = self.memo.get(pos) {
            return hit.clone();
        }
        let out = (self.expand)(h);
        self.memo.insert(pos.to_vec(), out.clone());
        out
    }

    /// The handle reached by walking `pos` from the root.
    pub fn handle_at(&mut self, pos: &[u32]) -> Result<H> {
        let mut h = self.root.clone();
        for (depth, &d) in pos.iter().enumerate() {
            let (_, kids) = self.expand_memo(&pos[..depth], &h);
            let Some(next) = kids.get(d as usize) else {
                return Err(crate::Error::BadPosition(pos.to_vec()));
            };
            h = next.clone();
        }
        Ok(h)
    }

    /// Letter and child count at a position.
    pub fn query(&mut self, pos: &[u32]) -> Result<(Letter, usize)> {
        let h = self.handle_at(pos)?;
        let (letter, kids) = self.expand_memo(pos, &h);
        Ok((letter, kids.len()))
    }

    /// The finite restriction to positions of length `<= depth`.
    pub fn expand_prefix(&mut self, depth: usize) -> PrefixTree {
        let root = self.root.clone();
        self.prefix_rec(&mut Vec::new(), &root, depth)
    }

    fn prefix_rec(&mut self, pos: &mut TreePosition, h: &H, depth: usize) -> PrefixTree {
        let (letter, kids) = self.expand_memo(pos, h);
        if depth == 0 {
            return PrefixTree { letter, children: Vec::new(), cut: !kids.is_empty() };
        }
        let children = kids
            .iter()
            .enumerate()
            .map(|(d, kid)| {
                pos.push(d as u32);
                let sub = self.prefix_rec(pos, kid, depth - 1);
                pos.pop();
                sub
            })
            .collect();
        PrefixTree { letter, children, cut: false }
    }
}

/// Adapter: views a regular tree as a lazy tree over its node ids.
pub fn lazy_of_tree(t: Arc<RegularTree>) -> LazyTree<NodeId> {
    let root = t.root();
    LazyTree::new(root, move |&n| (t.label(n), t.children(n).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn depth_zero_is_root_letter() {
        let t = Arc::new(fixtures::loop_tree(crate::IndexPair::new(0, 2).unwrap(), 0));
        let mut lazy = lazy_of_tree(t.clone());
        let p = lazy.expand_prefix(0);
        assert_eq!(p.letter, t.label(t.root()));
        assert!(p.children.is_empty() && p.cut);
    }

    #[test]
    fn adapter_matches_graph_unravelling() {
        let t = Arc::new(fixtures::fig4());
        let mut lazy = lazy_of_tree(t.clone());
        let prefix = lazy.expand_prefix(7);
        let mut stack: Vec<TreePosition> = vec![vec![]];
        while let Some(pos) = stack.pop() {
            assert_eq!(prefix.letter_at(&pos), Some(t.letter_at(&pos).unwrap()));
            if pos.len() < 7 {
                let arity = t.letter_at(&pos).unwrap().arity() as u32;
                for d in 0..arity {
                    let mut next = pos.clone();
                    next.push(d);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn queries_are_memoized_and_deterministic() {
        let t = Arc::new(fixtures::fig4());
        let mut lazy = lazy_of_tree(t);
        let first = lazy.query(&[0, 0, 0]).unwrap();
        let second = lazy.query(&[0, 0, 0]).unwrap();
        assert_eq!(first, second);
    }
}
