use thiserror::Error;

use crate::automaton::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid automaton: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("letter index {index} out of range (automaton has {letters} letters)")]
    LetterOutOfRange { index: usize, letters: usize },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("state set is empty")]
    EmptySet,

    #[error("state set over {set} states used with a {automaton}-state automaton")]
    UniverseMismatch { set: usize, automaton: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("letter `{0}` is not defined on every state")]
    LetterNotTotal(String),

    #[error("word is undefined at position {position}")]
    NotCareful { position: usize },

    #[error("base word does not carefully synchronize the base automaton")]
    BaseWordInvalid,

    #[error("automaton is not carefully synchronizing ({visited} subsets explored)")]
    NotSynchronizing { visited: usize },

    #[error("subset budget of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("exact search supports at most 64 states, got {0}")]
    TooManyStates(usize),

    #[error("word length {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
