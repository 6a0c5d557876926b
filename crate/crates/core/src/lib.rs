//! Partial finite automata with long shortest carefully synchronizing words.
//!
//! A word is *carefully synchronizing* for a partial automaton if it is
//! defined along the whole run from every state and brings all states to one.
//! This crate builds the automaton families whose shortest such words grow
//! exponentially, constructs the words explicitly, and checks every length and
//! minimality claim with exact breadth-first search over the power automaton.
//!
//! ```
//! use careful_sync::{families, search, words, automaton};
//!
//! let pfa = families::gen_family(3, 2).unwrap();
//! let built = words::family_word(3, 2).unwrap();
//! assert!(automaton::is_careful_sync_word(&pfa, &built));
//! let best = search::shortest_careful_word(&pfa, &Default::default()).unwrap();
//! assert_eq!(best.length, built.len());
//! ```

pub mod automaton;
pub mod errata;
pub mod error;
pub mod families;
pub mod io;
pub mod search;
pub mod sweep;
pub mod transform;
pub mod words;

pub use automaton::{
    apply_set, is_careful_sync_word, run_word, sync_state, total_merging_letter, validate, Diagnostic, Pfa, Run,
    StateSet, Word,
};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use search::{
    brute_force_shortest, forced_path_check, shortest_careful_word, subset_distance, SearchOptions, SearchResult,
};
