//! Lifting an arbitrary automaton into a grid automaton.
//!
//! Each base state becomes a class of `d` digit states; the letter `a`
//! collapses every class to its zero digit, the `b` letters count through the
//! digit combinations of the live classes, and each base letter acts on the
//! classes only once all their digits are at `d - 1`. The lifted automaton is
//! carefully synchronizing exactly when the base is, and its shortest careful
//! word is at least `d^k` long for a base with `k >= 2` states.

use std::collections::HashMap;

use crate::automaton::{apply_set, run_word, sync_state, Pfa, Run, StateSet, Word};
use crate::error::{Error, Result};
use crate::families::{gen_cerny, fill_a_and_b, grid_state, grid_state_names};
use crate::words::{cerny_classic_word, cerny_alt_word, counting_word, min_alt_repetitions};

/// Equivalence classes of states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub classes: Vec<StateSet>,
    pub class_of: Vec<usize>,
}

impl Partition {
    /// Whether `set` has at most one member in each class.
    pub fn is_transversal(&self, set: &StateSet) -> bool {
        let mut hit = vec![false; self.classes.len()];
        set.iter().all(|q| !std::mem::replace(&mut hit[self.class_of[q]], true))
    }
}

/// Partition of the states by their image under `letter`, which must be total.
/// Classes are ordered by their smallest member.
pub fn sigma_classes(pfa: &Pfa, letter: usize) -> Result<Partition> {
    pfa.check_letter(letter)?;
    let n = pfa.state_count();
    let mut by_image: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<StateSet> = Vec::new();
    let mut class_of = Vec::with_capacity(n);
    for q in 0..n {
        let image = pfa
            .delta(q, letter)
            .ok_or_else(|| Error::LetterNotTotal(pfa.letter_name(letter).to_string()))?;
        let idx = *by_image.entry(image).or_insert_with(|| {
            classes.push(StateSet::empty(n));
            classes.len() - 1
        });
        classes[idx].insert(q);
        class_of.push(idx);
    }
    Ok(Partition { classes, class_of })
}

/// Whether every defined transition of `letter` stays inside its class.
pub fn is_class_preserving(pfa: &Pfa, letter: usize, p: &Partition) -> bool {
    (0..pfa.state_count()).all(|q| match pfa.delta(q, letter) {
        Some(t) => p.class_of[t] == p.class_of[q],
        None => true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformRecord {
    pub base: Pfa,
    pub d: usize,
    pub result: Pfa,
    /// `letter_map[c]` is the result letter for base letter `c`.
    pub letter_map: Vec<usize>,
}

impl TransformRecord {
    pub fn classes(&self) -> usize {
        self.base.state_count()
    }
}

/// Builds the `d`-digit grid automaton over `base`.
///
/// Letters are `a, b1..bk` followed by one letter per base letter, keeping the
/// base names unless one of them clashes, in which case they become `c1..cs`.
pub fn transform(d: usize, base: &Pfa) -> Result<TransformRecord> {
    if d < 2 {
        return Err(Error::Parameter(format!("transform needs d >= 2, got {d}")));
    }
    let k = base.state_count();
    let s = base.letter_count();
    if k == 0 || s == 0 {
        return Err(Error::Parameter("base needs at least one state and one letter".into()));
    }
    let mut letters = vec!["a".to_string()];
    letters.extend((1..=k).map(|i| format!("b{i}")));
    let clashes = base.letters().iter().any(|name| letters.contains(name));
    if clashes {
        letters.extend((1..=s).map(|c| format!("c{c}")));
    } else {
        letters.extend(base.letters().iter().cloned());
    }
    let mut result = Pfa::undefined(d * k, letters);
    fill_a_and_b(&mut result, d, k);
    let letter_map: Vec<usize> = (0..s).map(|c| k + 1 + c).collect();
    for i in 1..=k {
        for (c, &lifted) in letter_map.iter().enumerate() {
            if let Some(j) = base.delta(i - 1, c) {
                result.set(grid_state(d, i, d - 1), lifted, Some(grid_state(d, j + 1, 0)));
            }
        }
    }
    Ok(TransformRecord {
        base: base.clone(),
        d,
        result: result.with_state_names(grid_state_names(d, k)),
        letter_map,
    })
}

/// Lifts a careful synchronizing word of the base into one of the grid:
/// `a`, a full count over all classes, then for each base letter its lifted
/// letter followed by a count over the classes still alive (no count after
/// the last letter).
pub fn lift_word(rec: &TransformRecord, w_base: &Word) -> Result<Word> {
    let base = &rec.base;
    if sync_state(base, w_base)?.is_none() {
        return Err(Error::BaseWordInvalid);
    }
    let mut out = Word::new(vec![0]);
    if w_base.is_empty() {
        return Ok(out);
    }
    let mut alive = base.full_set();
    out.append(&counting_word(rec.d, &classes_of(&alive))?);
    let last = w_base.len() - 1;
    for (pos, &c) in w_base.letters().iter().enumerate() {
        out.push(rec.letter_map[c]);
        alive = apply_set(base, &alive, c)?.ok_or(Error::BaseWordInvalid)?;
        if pos != last {
            out.append(&counting_word(rec.d, &classes_of(&alive))?);
        }
    }
    Ok(out)
}

/// Length [`lift_word`] would produce, without building the word.
pub fn lifted_length(rec: &TransformRecord, w_base: &Word) -> Result<u128> {
    let trace = match run_word(&rec.base, &rec.base.full_set(), w_base)? {
        Run::Completed { trace } if trace.last().and_then(StateSet::singleton_state).is_some() => trace,
        _ => return Err(Error::BaseWordInvalid),
    };
    if w_base.is_empty() {
        return Ok(1);
    }
    let d = rec.d as u128;
    let count = |set: &StateSet| d.pow(set.len() as u32) - 1;
    // a, the initial count, then one lifted letter per base letter plus a count
    // over each intermediate image.
    let mut total = 1 + count(&trace[0]) + w_base.len() as u128;
    total += trace[1..w_base.len()].iter().map(count).sum::<u128>();
    Ok(total)
}

fn classes_of(set: &StateSet) -> Vec<usize> {
    set.iter().map(|q| q + 1).collect()
}

/// Measurement of a lifted Černý word.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CernyLiftMeasurement {
    pub d: usize,
    pub n: usize,
    /// Repetition count used for the alternative base word, if one synchronizes.
    pub repetitions: Option<usize>,
    pub base_word_length: usize,
    pub word_length: u128,
    pub synchronizes: bool,
    /// `word_length >= d^n`.
    pub lower_bound_ok: bool,
    /// `word_length <= (base_word_length + 1) * d^n`.
    pub upper_bound_ok: bool,
}

/// Lifts a synchronizing word of the `n`-state Černý automaton into its
/// `d`-digit grid and measures it. The base word is the alternative word
/// with the smallest working repetition count, falling back to the classic
/// word.
pub fn cerny_lift_measurement(d: usize, n: usize, max_word_len: u128) -> Result<CernyLiftMeasurement> {
    if n < 3 {
        return Err(Error::Parameter(format!("measurement needs n >= 3, got {n}")));
    }
    let base = gen_cerny(n)?;
    let repetitions = min_alt_repetitions(n, 2 * n)?;
    let base_word = match repetitions {
        Some(r) => cerny_alt_word(n, Some(r))?,
        None => cerny_classic_word(n)?,
    };
    let rec = transform(d, &base)?;
    let word_length = lifted_length(&rec, &base_word)?;
    if word_length > max_word_len {
        return Err(Error::BudgetExceeded {
            needed: word_length,
            budget: max_word_len,
        });
    }
    let lifted = lift_word(&rec, &base_word)?;
    debug_assert_eq!(lifted.len() as u128, word_length);
    let floor = (d as u128).pow(n as u32);
    Ok(CernyLiftMeasurement {
        d,
        n,
        repetitions,
        base_word_length: base_word.len(),
        word_length,
        synchronizes: sync_state(&rec.result, &lifted)?.is_some(),
        lower_bound_ok: word_length >= floor,
        upper_bound_ok: word_length <= (base_word.len() as u128 + 1) * floor,
    })
}
