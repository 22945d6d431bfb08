//! Parity games over finitely-presented (regular) infinite trees.
//!
//! The crate implements, on top of a small parity-game toolbox:
//!
//! * canonical per-player *signatures* of game trees (least solutions of the
//!   per-node signature equations), together with a brute-force oracle that
//!   enumerates positional strategies and evaluates them directly;
//! * the signature-comparison game `C_P` over pairs of trees, and its
//!   unravelling `c_P` back into a game tree over the same alphabet;
//! * the unambiguous tree automaton `U` over the extended (ternary) alphabet,
//!   with run construction, acceptance checking and an ambiguity detector;
//! * the continuous reduction `f` that decorates a game tree with comparison
//!   gadgets, explored lazily to finite depth.
//!
//! Everything operates on [`trees::RegularTree`], a rooted finite graph
//! presenting an infinite tree. All operations are exact; randomized test
//! batteries live behind fixed seeds in [`generate`].

pub mod automaton;
pub mod compare;
pub mod fixtures;
pub mod games;
pub mod generate;
pub mod reduction;
pub mod signatures;
pub mod trees;

pub use games::{ParityGame, Player, PositionalStrategy, Solution};
pub use signatures::{Signature, SignatureTable};
pub use trees::{Alphabet, IndexPair, Letter, NodeId, RegularTree};

/// Errors shared across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undefined name `{0}`")]
    UndefinedName(String),
    #[error("arity mismatch at `{name}`: letter {letter} expects {expected} children, got {got}")]
    ArityMismatch { name: String, letter: String, expected: usize, got: usize },
    #[error("priority {j} out of range [{i},{k}]")]
    PriorityOutOfRange { j: u32, i: u32, k: u32 },
    #[error("letter {0} is not legal over alphabet {1}")]
    IllegalLetter(String, String),
    #[error("index pair requires i < k, got i={0} k={1}")]
    BadIndexPair(u32, u32),
    #[error("tree is not well-formed: a reachable cycle passes through `neg`")]
    NotWellFormed,
    #[error("tree is not priority-guarded: a reachable cycle contains no priority node")]
    NotPriorityGuarded,
    #[error("expected a tree over {expected}, got {got}")]
    WrongAlphabet { expected: String, got: String },
    #[error("position {0:?} is outside the tree domain")]
    BadPosition(Vec<u32>),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("strategy move target {target} is not a successor of position {from}")]
    DanglingMove { from: usize, target: usize },
    #[error("player {0} loses the game; no winning/optimal strategy exists")]
    PlayerLoses(Player),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
