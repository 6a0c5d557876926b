//! Partial automata, words over their alphabets, and subsets of states.
//!
//! A [`Pfa`] stores its transition table row-major as `Option<usize>`;
//! `None` is the in-band UNDEFINED value. A DFA is simply a `Pfa` whose
//! table has no `None` entry.
//!
//! The power-automaton step [`apply_set`] is defined only when the letter is
//! defined on every member of the set, which is what makes a word *careful*.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A partial finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pfa {
    states: usize,
    letters: Vec<String>,
    delta: Vec<Option<usize>>,
    state_names: Option<Vec<String>>,
}

/// One violated invariant of a [`Pfa`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    NoStates,
    EmptyLetterName { letter: usize },
    DuplicateLetter { name: String, first: usize, second: usize },
    TableSize { expected: usize, actual: usize },
    TargetOutOfRange { state: usize, letter: usize, target: usize },
    StateNamesLength { expected: usize, actual: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoStates => write!(f, "automaton has no states"),
            Diagnostic::EmptyLetterName { letter } => {
                write!(f, "letter {letter} has an empty name")
            }
            Diagnostic::DuplicateLetter { name, first, second } => {
                write!(f, "duplicate letter `{name}` at indices {first} and {second}")
            }
            Diagnostic::TableSize { expected, actual } => {
                write!(f, "transition table has {actual} entries, expected {expected}")
            }
            Diagnostic::TargetOutOfRange { state, letter, target } => write!(
                f,
                "target out of range: delta({state}, {letter}) = {target}"
            ),
            Diagnostic::StateNamesLength { expected, actual } => {
                write!(f, "{actual} state names given for {expected} states")
            }
        }
    }
}

/// Checks every structural invariant of `pfa`. An empty result means the
/// automaton is well formed.
pub fn validate(pfa: &Pfa) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if pfa.states == 0 {
        out.push(Diagnostic::NoStates);
    }
    let mut seen: Vec<(&str, usize)> = Vec::new();
    for (i, name) in pfa.letters.iter().enumerate() {
        if name.is_empty() {
            out.push(Diagnostic::EmptyLetterName { letter: i });
        } else if let Some(&(_, first)) = seen.iter().find(|(n, _)| *n == name) {
            out.push(Diagnostic::DuplicateLetter {
                name: name.clone(),
                first,
                second: i,
            });
        } else {
            seen.push((name, i));
        }
    }
    let expected = pfa.states * pfa.letters.len();
    if pfa.delta.len() != expected {
        out.push(Diagnostic::TableSize {
            expected,
            actual: pfa.delta.len(),
        });
    } else {
        for state in 0..pfa.states {
            for letter in 0..pfa.letters.len() {
                if let Some(target) = pfa.delta[state * pfa.letters.len() + letter] {
                    if target >= pfa.states {
                        out.push(Diagnostic::TargetOutOfRange {
                            state,
                            letter,
                            target,
                        });
                    }
                }
            }
        }
    }
    if let Some(names) = &pfa.state_names {
        if names.len() != pfa.states {
            out.push(Diagnostic::StateNamesLength {
                expected: pfa.states,
                actual: names.len(),
            });
        }
    }
    out
}

impl Pfa {
    /// Builds an automaton from a row-major table (`delta[state * letters + letter]`),
    /// rejecting it if any invariant is violated.
    pub fn new(states: usize, letters: Vec<String>, delta: Vec<Option<usize>>) -> Result<Self> {
        let pfa = Self::new_unchecked(states, letters, delta);
        let diags = validate(&pfa);
        if diags.is_empty() {
            Ok(pfa)
        } else {
            Err(Error::Invalid(diags))
        }
    }

    /// Builds an automaton without checking it. Use [`validate`] afterwards.
    pub fn new_unchecked(states: usize, letters: Vec<String>, delta: Vec<Option<usize>>) -> Self {
        Self {
            states,
            letters,
            delta,
            state_names: None,
        }
    }

    /// Builds an automaton from one row per state.
    pub fn from_rows(letters: Vec<String>, rows: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let states = rows.len();
        let width = letters.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::Parse {
                location: format!("delta[{i}]"),
                message: format!("row has {} entries, expected {width}", row.len()),
            });
        }
        Self::new(states, letters, rows.into_iter().flatten().collect())
    }

    /// An automaton with every transition UNDEFINED, to be filled with [`Pfa::set`].
    pub fn undefined<S: Into<String>>(states: usize, letters: impl IntoIterator<Item = S>) -> Self {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        let delta = vec![None; states * letters.len()];
        Self::new_unchecked(states, letters, delta)
    }

    pub fn set(&mut self, state: usize, letter: usize, target: Option<usize>) {
        let width = self.letters.len();
        self.delta[state * width + letter] = target;
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Self {
        self.state_names = Some(names);
        self
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter_name(&self, letter: usize) -> &str {
        &self.letters[letter]
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    /// Display name of a state: its given name, or its index.
    pub fn state_label(&self, state: usize) -> String {
        match &self.state_names {
            Some(names) => names[state].clone(),
            None => state.to_string(),
        }
    }

    /// The raw row-major table.
    pub fn table(&self) -> &[Option<usize>] {
        &self.delta
    }

    pub fn delta(&self, state: usize, letter: usize) -> Option<usize> {
        self.delta[state * self.letters.len() + letter]
    }

    pub fn is_total(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

    /// Whether `letter` is defined on every state.
    pub fn is_total_letter(&self, letter: usize) -> bool {
        (0..self.states).all(|q| self.delta(q, letter).is_some())
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.states)
    }

    pub(crate) fn check_letter(&self, letter: usize) -> Result<()> {
        if letter < self.letters.len() {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                index: letter,
                letters: self.letters.len(),
            })
        }
    }

    fn check_set(&self, s: &StateSet) -> Result<()> {
        if s.universe() != self.states {
            return Err(Error::UniverseMismatch {
                set: s.universe(),
                automaton: self.states,
            });
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(())
    }
}

/// A subset of the states `0..universe` stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    universe: usize,
    blocks: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for q in 0..universe {
            s.insert(q);
        }
        s
    }

    pub fn singleton(universe: usize, state: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(state);
        s
    }

    pub fn from_states(universe: usize, states: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for q in states {
            s.insert(q);
        }
        s
    }

    /// Interprets the low `universe` bits of `mask` as a set. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask form needs at most 64 states");
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.blocks[0] = mask;
        }
        s
    }

    /// The set as a bit mask, when it fits into 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        match self.blocks.len() {
            0 => Some(0),
            1 => Some(self.blocks[0]),
            _ => None,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, state: usize) {
        assert!(state < self.universe, "state {state} outside universe {}", self.universe);
        self.blocks[state / 64] |= 1 << (state % 64);
    }

    pub fn contains(&self, state: usize) -> bool {
        state < self.universe && self.blocks[state / 64] & (1 << (state % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    /// The single member, if the set is a singleton.
    pub fn singleton_state(&self) -> Option<usize> {
        let mut it = self.iter();
        match (it.next(), it.next()) {
            (Some(q), None) => Some(q),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(bi * 64 + t)
            })
        })
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// A word, stored as letter indices into some automaton's alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }

    pub fn append(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Parses whitespace-separated letter names; a token `x^N` stands for `N`
    /// copies of `x`.
    pub fn parse(pfa: &Pfa, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            let (name, count) = match token.rsplit_once('^') {
                Some((name, exp)) => {
                    let n: usize = exp.parse().map_err(|_| Error::Parse {
                        location: format!("token `{token}`"),
                        message: "exponent is not a non-negative integer".into(),
                    })?;
                    (name, n)
                }
                None => (token, 1),
            };
            let letter = pfa
                .letter_index(name)
                .ok_or_else(|| Error::UnknownLetter(name.to_string()))?;
            out.extend(std::iter::repeat_n(letter, count));
        }
        Ok(Word(out))
    }

    /// Space-separated letter names; the empty word renders as `ε`.
    pub fn render(&self, pfa: &Pfa) -> String {
        if self.0.is_empty() {
            return "ε".into();
        }
        self.0
            .iter()
            .map(|&l| pfa.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Like [`Word::render`] but with runs collapsed into `x^N` tokens.
    pub fn render_compact(&self, pfa: &Pfa) -> String {
        if self.0.is_empty() {
            return "ε".into();
        }
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let name = pfa.letter_name(l);
            if j - i == 1 {
                tokens.push(name.to_string());
            } else {
                tokens.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        tokens.join(" ")
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// Power-automaton step: the image of `s` under `letter`, or `None` when the
/// letter is undefined on some member of `s`.
pub fn apply_set(pfa: &Pfa, s: &StateSet, letter: usize) -> Result<Option<StateSet>> {
    pfa.check_letter(letter)?;
    pfa.check_set(s)?;
    let mut image = StateSet::empty(pfa.states);
    for q in s.iter() {
        match pfa.delta(q, letter) {
            Some(t) => image.insert(t),
            None => return Ok(None),
        }
    }
    Ok(Some(image))
}

/// Result of folding a word over a state set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Run {
    /// `trace[0]` is the start set and `trace[i + 1]` the image after letter `i`.
    Completed { trace: Vec<StateSet> },
    /// The letter at this 0-based position was undefined on the current set.
    UndefinedAt(usize),
}

impl Run {
    pub fn final_set(&self) -> Option<&StateSet> {
        match self {
            Run::Completed { trace } => trace.last(),
            Run::UndefinedAt(_) => None,
        }
    }
}

pub fn run_word(pfa: &Pfa, s: &StateSet, w: &Word) -> Result<Run> {
    pfa.check_set(s)?;
    let mut trace = Vec::with_capacity(w.len() + 1);
    trace.push(s.clone());
    for (pos, &letter) in w.letters().iter().enumerate() {
        let current = trace.last().expect("trace starts non-empty");
        match apply_set(pfa, current, letter)? {
            Some(next) => trace.push(next),
            None => return Ok(Run::UndefinedAt(pos)),
        }
    }
    Ok(Run::Completed { trace })
}

/// The state `w` carefully synchronizes `pfa` to, if it does.
pub fn sync_state(pfa: &Pfa, w: &Word) -> Result<Option<usize>> {
    Ok(run_word(pfa, &pfa.full_set(), w)?
        .final_set()
        .and_then(StateSet::singleton_state))
}

pub fn is_careful_sync_word(pfa: &Pfa, w: &Word) -> bool {
    matches!(sync_state(pfa, w), Ok(Some(_)))
}

/// Some letter defined on every state that merges two distinct states.
/// A carefully synchronizing automaton with more than one state always has one.
pub fn total_merging_letter(pfa: &Pfa) -> Option<usize> {
    (0..pfa.letter_count()).find(|&l| {
        let mut images = HashSet::new();
        for q in 0..pfa.states {
            match pfa.delta(q, l) {
                Some(t) => {
                    images.insert(t);
                }
                None => return false,
            }
        }
        images.len() < pfa.states
    })
}
