//! Reference trees used across the test suites and exposed by the CLI
//! `fixtures` command.

use crate::games::Player;
use crate::trees::{parse_tree_spec, Alphabet, IndexPair, Letter, NodeId, RegularTree};

/// Source text of the three-branch example tree over `ang` with i=0, k=5.
/// Node names follow the branch markers: `w` is the first binary choice,
/// `u1`/`u2`/`u3` head the upper, middle and lower branches.
pub const FIG4_SRC: &str = "\
alphabet ang i=0 k=5
let t  = pri5(m1);
let m1 = pri4(m2);
let m2 = pri5(m3);
let m3 = pri3(w);
let w  = p2(v, l5);
let v  = p2(u1, u2);
let l5 = pri4(u3);
let u1 = pri3(pri1(pri3(pri0(pri5(pri3(pri0(t1)))))));
let u2 = pri2(pri3(pri1(pri1(neg(pri1(pri0(t2)))))));
let u3 = pri3(pri3(pri1(pri4(pri2(pri3(pri0(t1)))))));
let t1 = pri0(t1);
let t2 = pri1(t2);
root t;
";

/// The three-branch example tree (i=0, k=5, won by player 1).
pub fn fig4() -> RegularTree {
    let out = parse_tree_spec(FIG4_SRC).expect("fixture parses");
    assert!(out.warnings.is_empty());
    out.tree
}

/// Source for the signature-versus-rank example (i=1, k=3).
pub const FIG7_SRC: &str = "\
alphabet alp i=1 k=3
let t    = p1(back, t0);
let back = pri3(t);
let t0   = pri2(pri3(pri3(t1)));
let t1   = pri2(t1);
root t;
";

/// The signature-versus-rank example set: `t1 = pri2(t1)`,
/// `t0 = pri2(pri3(pri3(t1)))`, `pri3(t0)`, and `t = p1(pri3(t), t0)`.
pub struct Fig7 {
    pub index: IndexPair,
    /// The full tree `t = p1(pri3(t), t0)`.
    pub t: RegularTree,
    /// `t0` as a tree in its own right.
    pub t0: RegularTree,
    /// `pri3(t0)`.
    pub pri3_t0: RegularTree,
    /// Node of `t0` inside `t`.
    pub t0_node: NodeId,
}

pub fn fig7() -> Fig7 {
    let out = parse_tree_spec(FIG7_SRC).expect("fixture parses");
    let t = out.tree;
    let index = t.index();
    let t0_node = t.node_by_name("t0").unwrap();
    let t0 = t.subtree(t0_node);
    let pri3_t0 = crate::trees::wrap_pri(&t0, 3);
    Fig7 { index, t, t0, pri3_t0, t0_node }
}

/// Self-loop on `pri j`.
pub fn loop_tree(index: IndexPair, j: u32) -> RegularTree {
    RegularTree::build(
        Alphabet::Ang,
        index,
        0,
        vec![(format!("loop{j}"), Letter::Pri(j), vec![0])],
    )
    .expect("loop tree is valid")
}

/// Like [`loop_tree`] but over the plain alphabet.
pub fn loop_tree_alp(index: IndexPair, j: u32) -> RegularTree {
    RegularTree::build(
        Alphabet::Alp,
        index,
        0,
        vec![(format!("loop{j}"), Letter::Pri(j), vec![0])],
    )
    .expect("loop tree is valid")
}

/// The pair of counterexample trees from the no-swap reduction argument:
/// `tL = pri1(pri0(t_1))` and `tR = p1(pri1(pri1(pri0(t_1))), pri0(t))`
/// where `t_1` is the even self-loop. Requires `t` over `alp` with `i = 0`.
pub fn counterexample_r(t: &RegularTree) -> crate::Result<(RegularTree, RegularTree)> {
    if t.alphabet() != Alphabet::Alp || t.index().i != 0 {
        return Err(crate::Error::WrongAlphabet {
            expected: "alp with i=0".into(),
            got: format!("{} with i={}", t.alphabet(), t.index().i),
        });
    }
    let index = t.index();
    let t_one = loop_tree_alp(index, 0);
    let left = crate::trees::wrap_pri(&crate::trees::wrap_pri(&t_one, 0), 1);

    // Right: p1( pri1(pri1(pri0(t_one))), pri0(t) ).
    let deep = crate::trees::wrap_pri(
        &crate::trees::wrap_pri(&crate::trees::wrap_pri(&t_one, 0), 1),
        1,
    );
    let wrapped_t = crate::trees::wrap_pri(t, 0);
    let right = crate::trees::join_choice(Player::One, &deep, &wrapped_t);
    Ok((left, right))
}

/// Canonical winners of the two membership classes: self-loops on the least
/// even and least odd priorities in the window.
pub fn canonical_twin_trees(index: IndexPair) -> (RegularTree, RegularTree) {
    let least_even = if index.i % 2 == 0 { index.i } else { index.i + 1 };
    let least_odd = if index.i % 2 == 1 { index.i } else { index.i + 1 };
    (loop_tree(index, least_even), loop_tree(index, least_odd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::member_w;

    #[test]
    fn fig4_has_expected_shape() {
        let t = fig4();
        assert_eq!(t.index(), IndexPair::new(0, 5).unwrap());
        let w = t.node_by_name("w").unwrap();
        assert_eq!(t.label(w), Letter::Choice(Player::Two));
        for name in ["u1", "u2", "u3", "t1", "t2"] {
            t.node_by_name(name).unwrap();
        }
        assert!(crate::trees::is_well_formed(&t));
        assert!(crate::trees::is_priority_guarded(&t));
    }

    #[test]
    fn twin_trees_verify_membership() {
        for (i, k) in [(0u32, 2u32), (1, 3), (0, 3), (0, 5), (2, 7)] {
            let index = IndexPair::new(i, k).unwrap();
            let (te, ta) = canonical_twin_trees(index);
            assert!(member_w(&te, Player::One).unwrap());
            assert!(member_w(&ta, Player::Two).unwrap());
        }
    }
}
