//! Word builders for the grid and Černý families, and the published length
//! formulas they are compared against.
//!
//! Builders emit letter indices in the canonical grid layout (`a` = 0,
//! `b_i` = i), or in the Černý layout (`c1` = 0, `c2` = 1).

use crate::automaton::{is_careful_sync_word, Word};
use crate::families::{gen_cerny, grid_c_letter};
use crate::error::{Error, Result};

/// Odometer word over the given classes (ascending, 1-based):
/// `W(∅) = ε`, `W(S) = (W(S') b_m)^(d-1) W(S')` where `m = max S`.
///
/// Starting from all-zero digits on the classes in `S`, it counts through all
/// `d^|S|` digit combinations and has length `d^|S| - 1`.
pub fn counting_word(d: usize, classes: &[usize]) -> Result<Word> {
    if d < 2 {
        return Err(Error::Parameter(format!("counting word needs d >= 2, got {d}")));
    }
    if classes.first() == Some(&0) || classes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!(
            "class indices must be 1-based and strictly ascending, got {classes:?}"
        )));
    }
    let mut word = Vec::new();
    for &m in classes {
        let prev = std::mem::take(&mut word);
        for _ in 0..d - 1 {
            word.extend_from_slice(&prev);
            word.push(m);
        }
        word.extend_from_slice(&prev);
    }
    Ok(Word::new(word))
}

/// `a · w_k · c_k · w_{k-1} · c_{k-1} ⋯ w_2 · c_2` for `gen_family(d, k)`.
pub fn family_word(d: usize, k: usize) -> Result<Word> {
    if k < 2 {
        return Err(Error::Parameter(format!("family word needs k >= 2, got {k}")));
    }
    let mut word = Word::new(vec![0]);
    for i in (2..=k).rev() {
        let classes: Vec<usize> = (1..=i).collect();
        word.append(&counting_word(d, &classes)?);
        word.push(grid_c_letter(k, i));
    }
    Ok(word)
}

/// `1 + Σ_{i=2..k} d^i`, the length of [`family_word`].
pub fn family_word_length(d: usize, k: usize) -> u128 {
    1 + (2..=k as u32).map(|i| (d as u128).pow(i)).sum::<u128>()
}

/// The published closed form `(d^{k+1} + (d-1)k - d^2) / (d-1)` for the
/// length of the grid family's synchronizing word.
pub fn grid_closed_form(d: usize, k: usize) -> Result<u128> {
    if d < 2 || k < 2 {
        return Err(Error::Parameter(format!("closed form needs d >= 2 and k >= 2, got d={d}, k={k}")));
    }
    let (d, k) = (d as u128, k as u128);
    let numerator = d.pow(k as u32 + 1) + (d - 1) * k - d * d;
    assert_eq!(numerator % (d - 1), 0, "closed form is integral");
    Ok(numerator / (d - 1))
}

/// `(c1 c2^{n-1})^{n-2} c1`, of length `(n-1)^2`.
pub fn cerny_classic_word(n: usize) -> Result<Word> {
    if n < 2 {
        return Err(Error::Parameter(format!("cerny word needs n >= 2, got {n}")));
    }
    let mut block = Word::new(vec![0]);
    block.append(&Word::new(vec![1; n - 1]));
    let mut word = block.repeat(n - 2);
    word.push(0);
    Ok(word)
}

/// Repetition count of `c1 c2^{n-1}` in the published alternative word:
/// `n - 3` for even `n`, `n - 4` for odd `n` (clamped at zero).
pub fn cerny_alt_default_repetitions(n: usize) -> usize {
    if n.is_multiple_of(2) {
        n.saturating_sub(3)
    } else {
        n.saturating_sub(4)
    }
}

/// `(c1 c2^2)^h (c1 c2^{n-1})^r c1` with `h = n/2` for even `n` and
/// `(n+1)/2` for odd `n`; `r` defaults to [`cerny_alt_default_repetitions`].
pub fn cerny_alt_word(n: usize, repetitions: Option<usize>) -> Result<Word> {
    if n < 3 {
        return Err(Error::Parameter(format!("alternative cerny word needs n >= 3, got {n}")));
    }
    let r = repetitions.unwrap_or_else(|| cerny_alt_default_repetitions(n));
    let half = n.div_ceil(2);
    let mut word = Word::new(vec![0, 1, 1]).repeat(half);
    let mut long = Word::new(vec![0]);
    long.append(&Word::new(vec![1; n - 1]));
    word.append(&long.repeat(r));
    word.push(0);
    Ok(word)
}

/// Smallest `r <= r_max` for which `cerny_alt_word(n, Some(r))` synchronizes
/// the Černý automaton, found by simulation.
pub fn min_alt_repetitions(n: usize, r_max: usize) -> Result<Option<usize>> {
    let cerny = gen_cerny(n)?;
    for r in 0..=r_max {
        if is_careful_sync_word(&cerny, &cerny_alt_word(n, Some(r))?) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// A constructed word's length next to a published formula and an exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthReport {
    pub builder_length: u128,
    pub closed_form: Option<u128>,
    pub bfs_length: Option<u128>,
}

impl LengthReport {
    pub fn builder_vs_closed_form(&self) -> Option<bool> {
        self.closed_form.map(|c| c == self.builder_length)
    }

    pub fn builder_vs_bfs(&self) -> Option<bool> {
        self.bfs_length.map(|b| b == self.builder_length)
    }

    pub fn closed_form_vs_bfs(&self) -> Option<bool> {
        Some(self.closed_form? == self.bfs_length?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::sync_state;
    use crate::families::{gen_family, grid_state};

    #[test]
    fn counting_word_examples() {
        assert_eq!(counting_word(3, &[1, 2]).unwrap().letters(), [1, 1, 2, 1, 1, 2, 1, 1]);
        assert!(counting_word(4, &[]).unwrap().is_empty());
        assert_eq!(counting_word(2, &[1, 3]).unwrap().letters(), [1, 3, 1]);
        assert!(counting_word(2, &[2, 1]).is_err());
        assert!(counting_word(2, &[0]).is_err());
        assert!(counting_word(1, &[1]).is_err());
    }

    #[test]
    fn counting_word_lengths() {
        for d in 2..=5usize {
            for s in 0..=4usize {
                let classes: Vec<usize> = (1..=s).collect();
                assert_eq!(counting_word(d, &classes).unwrap().len(), d.pow(s as u32) - 1);
            }
        }
    }

    #[test]
    fn family_words() {
        let pfa = gen_family(2, 2).unwrap();
        assert_eq!(family_word(2, 2).unwrap().render(&pfa), "a b1 b2 b1 c2");
        assert_eq!(family_word(3, 2).unwrap().len(), 10);
        let pfa = gen_family(3, 3).unwrap();
        assert_eq!(
            sync_state(&pfa, &family_word(3, 3).unwrap()).unwrap(),
            Some(grid_state(3, 1, 0))
        );
        assert!(family_word(3, 1).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(grid_closed_form(3, 2).unwrap(), 11);
        assert_eq!(grid_closed_form(2, 2).unwrap(), 6);
        for d in 2..=5 {
            for k in 2..=6 {
                let gap = grid_closed_form(d, k).unwrap() - family_word_length(d, k);
                assert_eq!(gap, k as u128 - 1);
            }
        }
        let report = LengthReport {
            builder_length: family_word(3, 2).unwrap().len() as u128,
            closed_form: Some(grid_closed_form(3, 2).unwrap()),
            bfs_length: None,
        };
        assert_eq!(report.builder_vs_closed_form(), Some(false));
        assert_eq!(report.builder_vs_bfs(), None);
        assert_eq!(report.closed_form_vs_bfs(), None);
    }

    #[test]
    fn cerny_words() {
        let pfa = gen_cerny(4).unwrap();
        let w = cerny_classic_word(4).unwrap();
        assert_eq!(w.render(&pfa), "c1 c2 c2 c2 c1 c2 c2 c2 c1");
        assert!(is_careful_sync_word(&pfa, &w));
        assert_eq!(cerny_classic_word(2).unwrap().letters(), [0]);
    }

    #[test]
    fn alt_word_literal_and_repaired() {
        let pfa = gen_cerny(4).unwrap();
        let literal = cerny_alt_word(4, None).unwrap();
        assert_eq!(literal.len(), 11);
        assert_eq!(literal.render_compact(&pfa), "c1 c2^2 c1 c2^2 c1 c2^3 c1");
        let end = crate::automaton::run_word(&pfa, &pfa.full_set(), &literal).unwrap();
        assert_eq!(end.final_set().unwrap().iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(sync_state(&pfa, &cerny_alt_word(4, Some(2)).unwrap()).unwrap(), Some(1));
        assert_eq!(min_alt_repetitions(4, 10).unwrap(), Some(2));
        assert_eq!(min_alt_repetitions(6, 10).unwrap(), Some(4));
        assert_eq!(min_alt_repetitions(4, 0).unwrap(), None);
    }

    #[test]
    fn alt_word_lengths() {
        for n in (4..=12).step_by(2) {
            for r in 0..4 {
                assert_eq!(cerny_alt_word(n, Some(r)).unwrap().len(), 3 * n / 2 + r * n + 1);
            }
        }
        assert_eq!(cerny_alt_default_repetitions(3), 0);
        assert_eq!(cerny_alt_default_repetitions(7), 3);
    }
}
