//! Exact shortest careful words by breadth-first search over the power automaton.
//!
//! Subsets are 64-bit masks, so the exact search handles automata with at most
//! 64 states (in practice the `2^n` state space is the limit long before that).
//! Letters are tried in ascending index order, which makes the returned word the
//! lexicographically least among the shortest ones.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{run_word, Pfa, Run, StateSet, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of distinct subsets the search may discover.
    pub max_subsets: usize,
    /// Automata with at most this many states use a flat `2^n` visited table.
    pub flat_threshold: usize,
}

pub const DEFAULT_MAX_SUBSETS: usize = 1 << 24;

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_subsets: DEFAULT_MAX_SUBSETS,
            flat_threshold: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub word: Word,
    pub length: usize,
    pub visited_subsets: usize,
    pub synchronized_state: usize,
}

/// Transition table specialised for mask arithmetic.
struct MaskTable {
    /// Per letter: mask of states where the letter is defined.
    defined: Vec<u64>,
    /// Per letter, per state: target state.
    targets: Vec<Vec<u8>>,
}

impl MaskTable {
    fn new(pfa: &Pfa) -> Result<Self> {
        let n = pfa.state_count();
        if n > 64 {
            return Err(Error::TooManyStates(n));
        }
        let mut defined = vec![0u64; pfa.letter_count()];
        let mut targets = vec![vec![0u8; n]; pfa.letter_count()];
        for (l, (mask, row)) in defined.iter_mut().zip(&mut targets).enumerate() {
            for (q, slot) in row.iter_mut().enumerate() {
                if let Some(t) = pfa.delta(q, l) {
                    *mask |= 1 << q;
                    *slot = t as u8;
                }
            }
        }
        Ok(Self { defined, targets })
    }

    #[inline]
    fn image(&self, mask: u64, letter: usize) -> Option<u64> {
        if mask & !self.defined[letter] != 0 {
            return None;
        }
        let targets = &self.targets[letter];
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let q = m.trailing_zeros() as usize;
            m &= m - 1;
            out |= 1 << targets[q];
        }
        Some(out)
    }
}

const UNSEEN: u16 = u16::MAX;
const ROOT: u16 = u16::MAX - 1;

/// Parent links: for each discovered subset, its predecessor and the letter used.
enum Visited {
    Flat { pred: Vec<u32>, via: Vec<u16> },
    Sparse(HashMap<u64, (u64, u16)>),
}

impl Visited {
    fn new(states: usize, opts: &SearchOptions) -> Self {
        if states <= opts.flat_threshold.min(32) {
            let size = 1usize << states;
            Visited::Flat {
                pred: vec![0; size],
                via: vec![UNSEEN; size],
            }
        } else {
            Visited::Sparse(HashMap::new())
        }
    }

    /// Records `mask` if unseen; returns whether it was new.
    fn insert(&mut self, mask: u64, pred: u64, via: u16) -> bool {
        match self {
            Visited::Flat { pred: p, via: v } => {
                let i = mask as usize;
                if v[i] != UNSEEN {
                    return false;
                }
                v[i] = via;
                p[i] = pred as u32;
                true
            }
            Visited::Sparse(map) => {
                if map.contains_key(&mask) {
                    return false;
                }
                map.insert(mask, (pred, via));
                true
            }
        }
    }

    fn parent(&self, mask: u64) -> (u64, u16) {
        match self {
            Visited::Flat { pred, via } => (pred[mask as usize] as u64, via[mask as usize]),
            Visited::Sparse(map) => map[&mask],
        }
    }

    fn path_to(&self, mut mask: u64) -> Word {
        let mut letters = Vec::new();
        loop {
            let (pred, via) = self.parent(mask);
            if via == ROOT {
                break;
            }
            letters.push(via as usize);
            mask = pred;
        }
        letters.reverse();
        Word::new(letters)
    }
}

struct Found {
    word: Word,
    target: u64,
    visited: usize,
}

/// Breadth-first search from `start` until a mask satisfying `goal` is dequeued.
fn bfs(pfa: &Pfa, start: u64, goal: impl Fn(u64) -> bool, opts: &SearchOptions) -> Result<(Option<Found>, usize)> {
    let table = MaskTable::new(pfa)?;
    if pfa.letter_count() >= ROOT as usize {
        return Err(Error::Parameter("too many letters for search".into()));
    }
    let mut visited = Visited::new(pfa.state_count(), opts);
    visited.insert(start, 0, ROOT);
    let mut count = 1usize;
    if count > opts.max_subsets {
        return Err(Error::CapExceeded { cap: opts.max_subsets });
    }
    let mut queue = VecDeque::from([start]);
    while let Some(mask) = queue.pop_front() {
        if goal(mask) {
            return Ok((
                Some(Found {
                    word: visited.path_to(mask),
                    target: mask,
                    visited: count,
                }),
                count,
            ));
        }
        for letter in 0..pfa.letter_count() {
            if let Some(next) = table.image(mask, letter) {
                if visited.insert(next, mask, letter as u16) {
                    count += 1;
                    if count > opts.max_subsets {
                        return Err(Error::CapExceeded { cap: opts.max_subsets });
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok((None, count))
}

fn start_mask(pfa: &Pfa, start: &StateSet) -> Result<u64> {
    if pfa.state_count() > 64 {
        return Err(Error::TooManyStates(pfa.state_count()));
    }
    if start.universe() != pfa.state_count() {
        return Err(Error::UniverseMismatch {
            set: start.universe(),
            automaton: pfa.state_count(),
        });
    }
    match start.to_mask() {
        Some(0) | None => Err(Error::EmptySet),
        Some(m) => Ok(m),
    }
}

/// Shortest carefully synchronizing word of `pfa`, from the full state set.
pub fn shortest_careful_word(pfa: &Pfa, opts: &SearchOptions) -> Result<SearchResult> {
    shortest_careful_word_from(pfa, &pfa.full_set(), opts)
}

/// Shortest word that carefully maps `start` onto a single state.
pub fn shortest_careful_word_from(pfa: &Pfa, start: &StateSet, opts: &SearchOptions) -> Result<SearchResult> {
    let mask = start_mask(pfa, start)?;
    match bfs(pfa, mask, |m| m & (m - 1) == 0, opts)? {
        (Some(found), _) => Ok(SearchResult {
            length: found.word.len(),
            word: found.word,
            visited_subsets: found.visited,
            synchronized_state: found.target.trailing_zeros() as usize,
        }),
        (None, visited) => Err(Error::NotSynchronizing { visited }),
    }
}

/// Length of the shortest path in the power automaton from `from` to exactly `to`.
pub fn subset_distance(pfa: &Pfa, from: &StateSet, to: &StateSet, opts: &SearchOptions) -> Result<Option<usize>> {
    let start = start_mask(pfa, from)?;
    let target = start_mask(pfa, to)?;
    let (found, _) = bfs(pfa, start, |m| m == target, opts)?;
    Ok(found.map(|f| f.word.len()))
}

/// Shortest careful synchronizing word found by enumerating every word in
/// order of length, then letter index, simulating each state separately.
///
/// Exponential in `max_len`; meant as an independent check on small automata.
pub fn brute_force_shortest(pfa: &Pfa, max_len: usize) -> Option<Word> {
    let start: Vec<usize> = (0..pfa.state_count()).collect();
    let mut word = Vec::new();
    (0..=max_len).find_map(|len| {
        word.clear();
        search_depth(pfa, &start, len, &mut word).then(|| Word::new(word.clone()))
    })
}

fn search_depth(pfa: &Pfa, images: &[usize], remaining: usize, word: &mut Vec<usize>) -> bool {
    if remaining == 0 {
        return images.iter().all(|&q| q == images[0]);
    }
    for letter in 0..pfa.letter_count() {
        let next: Option<Vec<usize>> = images.iter().map(|&q| pfa.delta(q, letter)).collect();
        if let Some(next) = next {
            word.push(letter);
            if search_depth(pfa, &next, remaining - 1, word) {
                return true;
            }
            word.pop();
        }
    }
    false
}

/// Classification of every letter at one step of a walk through the power automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedStep {
    pub subset: StateSet,
    /// Letter the walked word takes at this step.
    pub taken: usize,
    /// Letters leading to a subset not yet seen on the walk.
    pub new_letters: Vec<usize>,
    pub undefined: Vec<usize>,
    /// Letters leading back to a subset seen earlier on the walk.
    pub revisiting: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedPathReport {
    pub steps: Vec<ForcedStep>,
    /// Every step had exactly one letter leading somewhere new.
    pub pass: bool,
}

impl ForcedPathReport {
    /// Steps where the walk had a choice (or none) of new subsets.
    pub fn failing_steps(&self) -> impl Iterator<Item = (usize, &ForcedStep)> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.new_letters.len() != 1)
    }
}

/// Walks `w` from `start` and checks that at every step exactly one letter
/// leads to a subset that the walk has not visited before.
pub fn forced_path_check(pfa: &Pfa, w: &Word, start: &StateSet) -> Result<ForcedPathReport> {
    let trace = match run_word(pfa, start, w)? {
        Run::Completed { trace } => trace,
        Run::UndefinedAt(position) => return Err(Error::NotCareful { position }),
    };
    let mut steps = Vec::with_capacity(w.len());
    for (i, &taken) in w.letters().iter().enumerate() {
        let current = &trace[i];
        let seen = &trace[..=i];
        let mut step = ForcedStep {
            subset: current.clone(),
            taken,
            new_letters: Vec::new(),
            undefined: Vec::new(),
            revisiting: Vec::new(),
        };
        for letter in 0..pfa.letter_count() {
            match crate::automaton::apply_set(pfa, current, letter)? {
                None => step.undefined.push(letter),
                Some(img) if seen.contains(&img) => step.revisiting.push(letter),
                Some(_) => step.new_letters.push(letter),
            }
        }
        steps.push(step);
    }
    let pass = steps.iter().all(|s| s.new_letters.len() == 1);
    Ok(ForcedPathReport { steps, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{is_careful_sync_word, Pfa};
    use crate::families::{gen_cerny, gen_fig1};

    #[test]
    fn fig1_shortest_is_ten() {
        let pfa = gen_fig1();
        let res = shortest_careful_word(&pfa, &SearchOptions::default()).unwrap();
        assert_eq!(res.length, 10);
        assert_eq!(res.word.len(), 10);
        assert!(is_careful_sync_word(&pfa, &res.word));
        assert_eq!(brute_force_shortest(&pfa, 12).map(|w| w.len()), Some(10));
        assert_eq!(brute_force_shortest(&pfa, 9), None);
    }

    #[test]
    fn cerny_four() {
        let res = shortest_careful_word(&gen_cerny(4).unwrap(), &SearchOptions::default()).unwrap();
        assert_eq!(res.length, 9);
    }

    #[test]
    fn single_merging_letter() {
        let pfa = Pfa::new(2, vec!["x".into()], vec![Some(0), Some(0)]).unwrap();
        let res = shortest_careful_word(&pfa, &SearchOptions::default()).unwrap();
        assert_eq!(res.length, 1);
        assert_eq!(res.synchronized_state, 0);
    }

    #[test]
    fn single_state_needs_empty_word() {
        let pfa = Pfa::new(1, vec!["x".into()], vec![None]).unwrap();
        assert_eq!(brute_force_shortest(&pfa, 3), Some(Word::empty()));
        assert_eq!(shortest_careful_word(&pfa, &SearchOptions::default()).unwrap().length, 0);
    }

    #[test]
    fn not_synchronizing_and_cap() {
        let ident = Pfa::new(2, vec!["x".into()], vec![Some(0), Some(1)]).unwrap();
        assert!(matches!(
            shortest_careful_word(&ident, &SearchOptions::default()),
            Err(Error::NotSynchronizing { visited: 1 })
        ));
        let opts = SearchOptions { max_subsets: 3, ..Default::default() };
        assert_eq!(
            shortest_careful_word(&gen_fig1(), &opts),
            Err(Error::CapExceeded { cap: 3 })
        );
    }

    #[test]
    fn sparse_table_matches_flat() {
        let pfa = gen_fig1();
        let sparse = SearchOptions { flat_threshold: 0, ..Default::default() };
        assert_eq!(
            shortest_careful_word(&pfa, &sparse).unwrap(),
            shortest_careful_word(&pfa, &SearchOptions::default()).unwrap()
        );
    }

    #[test]
    fn distance_to_self_is_zero() {
        let pfa = gen_fig1();
        let s = StateSet::from_states(4, [1, 3]);
        assert_eq!(subset_distance(&pfa, &s, &s, &SearchOptions::default()).unwrap(), Some(0));
    }

    #[test]
    fn forced_path_rejects_non_careful_word() {
        let pfa = gen_fig1();
        let w = Word::parse(&pfa, "b").unwrap();
        assert_eq!(
            forced_path_check(&pfa, &w, &pfa.full_set()),
            Err(Error::NotCareful { position: 0 })
        );
    }
}
