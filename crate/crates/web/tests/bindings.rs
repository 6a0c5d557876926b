use careful_sync_web::{explore_grid, lift_cerny, verify_word, MAX_EXPLORE_STATES};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn constructed_grid_words_are_shortest() {
    for (d, k) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
        let v = parse(&explore_grid(d, k));
        assert_eq!(v["built_length"], v["shortest_length"], "grid d={d} k={k}");
        let gap = v["published_length"].as_u64().unwrap() - v["shortest_length"].as_u64().unwrap();
        assert_eq!(gap, k as u64 - 1);
    }
}

#[test]
fn trace_subsets_never_grow() {
    let v = parse(&verify_word("grid:d=2,k=3", "a b1^2 b2 b1^2 c3 b1^2 c2"));
    let sizes: Vec<usize> = v["trace"].as_array().unwrap().iter().map(|s| s.as_array().unwrap().len()).collect();
    assert!(sizes.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(sizes[0], 6);
}

#[test]
fn instances_above_the_demo_limit_are_refused() {
    let big = format!("cerny:n={}", MAX_EXPLORE_STATES + 1);
    assert!(parse(&verify_word(&big, "c1"))["error"].is_string());
}

#[test]
fn lifted_cerny_words_stay_within_bounds() {
    for n in 3..=7 {
        let v = parse(&lift_cerny(2, n));
        assert_eq!(v["synchronizes"], true);
        assert_eq!(v["lower_bound_ok"], true);
        assert_eq!(v["upper_bound_ok"], true);
    }
}
