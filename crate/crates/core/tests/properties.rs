use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;

use careful_sync::automaton::{apply_set, run_word, total_merging_letter, Pfa, StateSet, Word};
use careful_sync::families::{gen_random, grid_state};
use careful_sync::io::{parse_automaton, serialize_automaton};
use careful_sync::search::{brute_force_shortest, shortest_careful_word, shortest_careful_word_from, SearchOptions};
use careful_sync::transform::{is_class_preserving, lift_word, sigma_classes, transform};
use careful_sync::{is_careful_sync_word, Error};

fn small_pfa(max_states: usize, max_letters: usize) -> impl Strategy<Value = Pfa> {
    (1..=max_states, 1..=max_letters, prop::sample::select(vec![0.3, 0.6, 0.8, 1.0]), any::<u64>())
        .prop_map(|(n, l, p, seed)| gen_random(n, l, p, seed).unwrap())
}

fn nonempty_subset(n: usize) -> impl Strategy<Value = StateSet> {
    (1u64..(1 << n)).prop_map(move |m| StateSet::from_mask(n, m))
}

/// Whether any singleton is reachable from the full set, by depth-first
/// exploration over sorted state vectors.
fn singleton_reachable(pfa: &Pfa) -> bool {
    let start: Vec<usize> = (0..pfa.state_count()).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut stack = VecDeque::from([start]);
    while let Some(set) = stack.pop_back() {
        if set.len() == 1 {
            return true;
        }
        for l in 0..pfa.letter_count() {
            let image: Option<Vec<usize>> = set.iter().map(|&q| pfa.delta(q, l)).collect();
            if let Some(mut image) = image {
                image.sort_unstable();
                image.dedup();
                if seen.insert(image.clone()) {
                    stack.push_back(image);
                }
            }
        }
    }
    false
}

proptest! {
    #[test]
    fn image_never_grows(pfa in small_pfa(6, 3), mask in 1u64..64, letter in 0usize..3) {
        let n = pfa.state_count();
        let s = StateSet::from_mask(n, mask & ((1 << n) - 1));
        prop_assume!(!s.is_empty() && letter < pfa.letter_count());
        let first = apply_set(&pfa, &s, letter).unwrap();
        prop_assert_eq!(&first, &apply_set(&pfa, &s, letter).unwrap());
        if let Some(img) = first {
            prop_assert!(img.len() <= s.len());
            prop_assert!(!img.is_empty());
        }
    }

    #[test]
    fn search_word_is_careful_and_prefix_closed(pfa in small_pfa(6, 3)) {
        if let Ok(res) = shortest_careful_word(&pfa, &SearchOptions::default()) {
            prop_assert_eq!(res.length, res.word.len());
            prop_assert!(is_careful_sync_word(&pfa, &res.word));
            for cut in 0..=res.word.len() {
                let prefix = Word::new(res.word.letters()[..cut].to_vec());
                let run = run_word(&pfa, &pfa.full_set(), &prefix).unwrap();
                prop_assert!(run.final_set().is_some(), "prefix of length {} undefined", cut);
            }
            if pfa.state_count() > 1 {
                prop_assert!(total_merging_letter(&pfa).is_some());
            }
        }
    }

    #[test]
    fn not_synchronizing_iff_no_singleton_reachable(pfa in small_pfa(6, 3)) {
        let res = shortest_careful_word(&pfa, &SearchOptions::default());
        let not_sync = matches!(res, Err(Error::NotSynchronizing { .. }));
        prop_assert_eq!(not_sync, !singleton_reachable(&pfa));
    }

    #[test]
    fn smaller_start_sets_need_no_longer_words(pfa in small_pfa(5, 3), sub in nonempty_subset(5)) {
        let n = pfa.state_count();
        let sub = StateSet::from_states(n, sub.iter().filter(|&q| q < n));
        prop_assume!(!sub.is_empty());
        if let Ok(full) = shortest_careful_word(&pfa, &SearchOptions::default()) {
            let run = run_word(&pfa, &sub, &full.word).unwrap();
            prop_assert_eq!(run.final_set().map(StateSet::len), Some(1));
            let from_sub = shortest_careful_word_from(&pfa, &sub, &SearchOptions::default()).unwrap();
            prop_assert!(from_sub.length <= full.length);
        }
    }

    #[test]
    fn documents_round_trip(pfa in small_pfa(7, 4)) {
        prop_assert_eq!(parse_automaton(&serialize_automaton(&pfa)).unwrap(), pfa);
    }

    #[test]
    fn words_render_and_parse(pfa in small_pfa(3, 4), letters in prop::collection::vec(0usize..4, 0..20)) {
        let w = Word::new(letters.into_iter().filter(|&l| l < pfa.letter_count()).collect());
        if !w.is_empty() {
            prop_assert_eq!(&Word::parse(&pfa, &w.render(&pfa)).unwrap(), &w);
        }
        prop_assert_eq!(Word::parse(&pfa, &w.render_compact(&pfa)).unwrap_or_default(), w);
    }

    #[test]
    fn lifted_automata_keep_their_structure(base in small_pfa(4, 3), d in 2usize..=3) {
        let rec = transform(d, &base).unwrap();
        let k = base.state_count();
        let result = &rec.result;
        prop_assert_eq!(result.state_count(), d * k);
        let classes = sigma_classes(result, 0).unwrap();
        prop_assert_eq!(classes.classes.len(), k);
        for letter in 0..=k {
            prop_assert!(is_class_preserving(result, letter, &classes));
        }
        for &c in &rec.letter_map {
            for i in 1..=k {
                for j in 0..d - 1 {
                    prop_assert_eq!(result.delta(grid_state(d, i, j), c), None);
                }
            }
        }
    }

    #[test]
    fn lifting_preserves_synchronizability(base in small_pfa(4, 3), d in 2usize..=3) {
        let rec = transform(d, &base).unwrap();
        let base_res = shortest_careful_word(&base, &SearchOptions::default());
        let lifted = shortest_careful_word(&rec.result, &SearchOptions::default());
        prop_assert_eq!(base_res.is_ok(), lifted.is_ok());
        if let (Ok(b), Ok(l)) = (base_res, lifted) {
            let w = lift_word(&rec, &b.word).unwrap();
            prop_assert!(is_careful_sync_word(&rec.result, &w));
            prop_assert!(l.length <= w.len());
            let k = base.state_count() as u32;
            if k >= 2 {
                prop_assert!(l.length >= d.pow(k));
            }
        }
    }

    #[test]
    fn random_generation_is_deterministic(n in 1usize..6, l in 1usize..4, seed: u64) {
        prop_assert_eq!(gen_random(n, l, 0.5, seed).unwrap(), gen_random(n, l, 0.5, seed).unwrap());
        prop_assert!(gen_random(n, l, 1.0, seed).unwrap().is_total());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Enumeration agrees with the search whenever the answer is short enough
    /// to enumerate; otherwise enumeration must find nothing shorter.
    #[test]
    fn enumeration_agrees_with_search(pfa in small_pfa(5, 4)) {
        const ENUM_LIMIT: usize = 7;
        match shortest_careful_word(&pfa, &SearchOptions::default()) {
            Ok(res) if res.length <= ENUM_LIMIT => {
                let brute = brute_force_shortest(&pfa, res.length + 1).map(|w| w.len());
                prop_assert_eq!(brute, Some(res.length));
            }
            Ok(res) => prop_assert_eq!(brute_force_shortest(&pfa, ENUM_LIMIT.min(res.length - 1)), None),
            Err(_) => prop_assert_eq!(brute_force_shortest(&pfa, ENUM_LIMIT), None),
        }
    }
}

#[test]
fn zero_density_never_synchronizes() {
    for seed in 0..20 {
        let pfa = gen_random(2 + seed as usize % 3, 2, 0.0, seed).unwrap();
        assert!(matches!(
            shortest_careful_word(&pfa, &SearchOptions::default()),
            Err(Error::NotSynchronizing { .. })
        ));
    }
}
