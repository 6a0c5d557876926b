//! Browser bindings for the demo page. Every export returns a JSON string;
//! failures come back as `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use careful_sync::automaton::{run_word, Pfa, Run, Word};
use careful_sync::families::{gen_family, FamilySpec};
use careful_sync::search::{shortest_careful_word, SearchOptions};
use careful_sync::transform::cerny_lift_measurement;
use careful_sync::words::{family_word, grid_closed_form};
use careful_sync::Result;

/// Largest instance the page will search exactly.
pub const MAX_EXPLORE_STATES: usize = 20;
pub const MAX_LIFTED_WORD: u128 = 1 << 22;
const WEB_MAX_SUBSETS: usize = 1 << 20;

#[derive(Serialize)]
struct Graph {
    states: Vec<String>,
    letters: Vec<String>,
    delta: Vec<Vec<Option<usize>>>,
}

impl Graph {
    fn of(pfa: &Pfa) -> Self {
        Graph {
            states: (0..pfa.state_count()).map(|q| pfa.state_label(q)).collect(),
            letters: pfa.letters().to_vec(),
            delta: (0..pfa.state_count())
                .map(|q| (0..pfa.letter_count()).map(|l| pfa.delta(q, l)).collect())
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct GridReport {
    d: usize,
    k: usize,
    graph: Graph,
    built_word: String,
    built_length: usize,
    shortest_length: usize,
    shortest_word: String,
    visited_subsets: usize,
    published_length: Option<u128>,
}

#[derive(Serialize)]
struct VerifyReport {
    graph: Graph,
    letters: Vec<String>,
    /// Subset before each letter and after the last one that was applied.
    trace: Vec<Vec<usize>>,
    undefined_at: Option<usize>,
    synchronized_to: Option<usize>,
}

fn to_json<T: Serialize>(result: Result<T>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).expect("serializable report"),
        Err(e) => serde_json::json!({ "error": e.to_string() }).to_string(),
    }
}

fn check_size(states: usize) -> Result<()> {
    if states > MAX_EXPLORE_STATES {
        return Err(careful_sync::Error::Parameter(format!(
            "the demo handles at most {MAX_EXPLORE_STATES} states, got {states}"
        )));
    }
    Ok(())
}

fn explore(d: usize, k: usize) -> Result<GridReport> {
    check_size(d.saturating_mul(k))?;
    let pfa = gen_family(d, k)?;
    let built = if k >= 2 { family_word(d, k)? } else { Word::new(vec![0]) };
    let opts = SearchOptions {
        max_subsets: WEB_MAX_SUBSETS,
        ..Default::default()
    };
    let best = shortest_careful_word(&pfa, &opts)?;
    Ok(GridReport {
        d,
        k,
        built_word: built.render_compact(&pfa),
        built_length: built.len(),
        shortest_length: best.length,
        shortest_word: best.word.render_compact(&pfa),
        visited_subsets: best.visited_subsets,
        published_length: if k >= 2 { Some(grid_closed_form(d, k)?) } else { None },
        graph: Graph::of(&pfa),
    })
}

fn verify(spec: &str, word: &str) -> Result<VerifyReport> {
    let spec: FamilySpec = spec.parse()?;
    let pfa = spec.generate()?;
    check_size(pfa.state_count())?;
    let word = Word::parse(&pfa, word)?;
    let letters = word.letters().iter().map(|&l| pfa.letter_name(l).to_string()).collect();
    let mut trace = Vec::new();
    let mut set = pfa.full_set();
    let mut undefined_at = None;
    // Stepwise so the trace keeps the subsets up to an undefined transition.
    for (i, &l) in word.letters().iter().enumerate() {
        trace.push(set.iter().collect());
        match run_word(&pfa, &set, &Word::new(vec![l]))? {
            Run::Completed { trace: t } => set = t.last().expect("non-empty trace").clone(),
            Run::UndefinedAt(_) => {
                undefined_at = Some(i);
                break;
            }
        }
    }
    let synchronized_to = if undefined_at.is_none() {
        trace.push(set.iter().collect());
        set.singleton_state()
    } else {
        None
    };
    Ok(VerifyReport {
        graph: Graph::of(&pfa),
        letters,
        trace,
        undefined_at,
        synchronized_to,
    })
}

/// Builds `grid:d,k`, its constructed word and an exact shortest word.
#[wasm_bindgen]
pub fn explore_grid(d: usize, k: usize) -> String {
    to_json(explore(d, k))
}

/// Runs a word on the full state set of a family instance, keeping the subset trace.
#[wasm_bindgen]
pub fn verify_word(spec: &str, word: &str) -> String {
    to_json(verify(spec, word))
}

/// Lifts the best Černý base word into `d` digits and measures it.
#[wasm_bindgen]
pub fn lift_cerny(d: usize, n: usize) -> String {
    to_json(cerny_lift_measurement(d, n, MAX_LIFTED_WORD))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn grid_report() {
        let v = parse(&explore_grid(3, 2));
        assert_eq!(v["shortest_length"], 10);
        assert_eq!(v["built_length"], 10);
        assert_eq!(v["published_length"], 11);
        assert_eq!(v["graph"]["states"].as_array().unwrap().len(), 6);
        assert!(parse(&explore_grid(5, 5))["error"].is_string());
        assert!(parse(&explore_grid(1, 3))["error"].is_string());
    }

    #[test]
    fn verify_trace() {
        let v = parse(&verify_word("fig1", "a b c a^3 b^2 c a"));
        assert_eq!(v["undefined_at"], 7);
        assert_eq!(v["trace"].as_array().unwrap().len(), 8);
        assert!(v["synchronized_to"].is_null());
        let ok = parse(&verify_word("fig1", "a b c a b a b^2 c a"));
        assert_eq!(ok["trace"].as_array().unwrap().len(), 11);
        assert_eq!(ok["synchronized_to"], 1);
        assert!(parse(&verify_word("fig1", "z"))["error"].is_string());
    }

    #[test]
    fn cerny_lift() {
        let v = parse(&lift_cerny(2, 4));
        assert_eq!(v["synchronizes"], true);
        assert_eq!(v["lower_bound_ok"], true);
        assert!(parse(&lift_cerny(2, 2))["error"].is_string());
    }
}
