//! Generators for the automaton families studied here.
//!
//! Grid-shaped automata (the counting family, its padded variant and the
//! outputs of [`crate::transform::transform`]) share one canonical layout:
//! state `q_j^i` (class `i` in `1..=k`, digit `j` in `0..d`) has index
//! `(i - 1) * d + j`; letter `a` is index 0, `b_i` is index `i`, and the
//! c-letters follow.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::Pfa;
use crate::error::{Error, Result};

/// Index of `q_digit^class` in a grid automaton with `d` digits per class.
pub fn grid_state(d: usize, class: usize, digit: usize) -> usize {
    (class - 1) * d + digit
}

/// Index of `c_i` in `gen_family(d, k)`.
pub fn grid_c_letter(k: usize, i: usize) -> usize {
    k + i - 1
}

pub(crate) fn grid_state_names(d: usize, k: usize) -> Vec<String> {
    (1..=k)
        .flat_map(|i| (0..d).map(move |j| format!("q{j}^{i}")))
        .collect()
}

fn param(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(msg()))
    }
}

/// The four-state, three-letter example with a shortest careful word of length 10.
pub fn gen_fig1() -> Pfa {
    let mut pfa = Pfa::undefined(4, ["a", "b", "c"]);
    let (a, b, c) = (0, 1, 2);
    for (q, l, t) in [
        (0, a, 1),
        (0, c, 1),
        (1, a, 1),
        (1, b, 2),
        (2, a, 2),
        (2, b, 3),
        (2, c, 3),
        (3, a, 3),
        (3, b, 0),
        (3, c, 0),
    ] {
        pfa.set(q, l, Some(t));
    }
    pfa
}

/// The counting automaton on `d * k` states with letters `a, b1..bk, c2..ck`.
pub fn gen_family(d: usize, k: usize) -> Result<Pfa> {
    param(d >= 2, || format!("grid needs d >= 2, got {d}"))?;
    param(k >= 1, || format!("grid needs k >= 1, got {k}"))?;
    let mut letters = vec!["a".to_string()];
    letters.extend((1..=k).map(|i| format!("b{i}")));
    letters.extend((2..=k).map(|i| format!("c{i}")));
    let mut pfa = Pfa::undefined(d * k, letters);
    fill_a_and_b(&mut pfa, d, k);
    for l in 2..=k {
        let c = grid_c_letter(k, l);
        for i in 1..=l {
            let target = if i == l { grid_state(d, i - 1, 0) } else { grid_state(d, i, 0) };
            pfa.set(grid_state(d, i, d - 1), c, Some(target));
        }
    }
    Ok(pfa.with_state_names(grid_state_names(d, k)))
}

/// Rules for `a` and `b_1..b_k` shared by every grid automaton.
pub(crate) fn fill_a_and_b(pfa: &mut Pfa, d: usize, k: usize) {
    for i in 1..=k {
        for j in 0..d {
            let q = grid_state(d, i, j);
            pfa.set(q, 0, Some(grid_state(d, i, 0)));
            for l in 1..=k {
                let target = match i.cmp(&l) {
                    Ordering::Equal if j + 1 < d => Some(grid_state(d, i, j + 1)),
                    Ordering::Equal => None,
                    Ordering::Greater => Some(q),
                    Ordering::Less if j == d - 1 => Some(grid_state(d, i, 0)),
                    Ordering::Less => None,
                };
                pfa.set(q, l, target);
            }
        }
    }
}

/// The Černý automaton: `c1` sends `q0` to `q1` and fixes the rest, `c2` rotates.
pub fn gen_cerny(n: usize) -> Result<Pfa> {
    param(n >= 2, || format!("cerny needs n >= 2, got {n}"))?;
    let mut pfa = Pfa::undefined(n, ["c1", "c2"]);
    for m in 0..n {
        pfa.set(m, 0, Some(if m == 0 { 1 } else { m }));
        pfa.set(m, 1, Some((m + 1) % n));
    }
    Ok(pfa.with_state_names((0..n).map(|m| format!("q{m}")).collect()))
}

/// States `q1..qk`, letters `c2..ck`: `c_i` moves `q_i` down to `q_{i-1}`,
/// fixes every lower state and is undefined above.
pub fn gen_chain(k: usize) -> Result<Pfa> {
    param(k >= 2, || format!("chain needs k >= 2, got {k}"))?;
    let mut pfa = Pfa::undefined(k, (2..=k).map(|i| format!("c{i}")));
    for l in 2..=k {
        for i in 1..=l {
            let target = if i == l { i - 2 } else { i - 1 };
            pfa.set(i - 1, l - 2, Some(target));
        }
    }
    Ok(pfa.with_state_names((1..=k).map(|i| format!("q{i}")).collect()))
}

/// `gen_family(d, n / d)` plus `n % d` extra states that only the new letter
/// `p` is defined on; `p` sends them to `q_0^k` and fixes every core state.
pub fn gen_padded(d: usize, n: usize) -> Result<Pfa> {
    param(d >= 2, || format!("padded needs d >= 2, got {d}"))?;
    param(n > d && !n.is_multiple_of(d), || {
        format!("padded needs n > d and n not divisible by d, got d={d}, n={n}")
    })?;
    let k = n / d;
    let core = gen_family(d, k)?;
    let core_states = core.state_count();
    let mut letters = core.letters().to_vec();
    letters.push("p".into());
    let pad = letters.len() - 1;
    let mut pfa = Pfa::undefined(n, letters);
    for q in 0..core_states {
        for l in 0..core.letter_count() {
            pfa.set(q, l, core.delta(q, l));
        }
        pfa.set(q, pad, Some(q));
    }
    for extra in core_states..n {
        pfa.set(extra, pad, Some(grid_state(d, k, 0)));
    }
    let mut names = grid_state_names(d, k);
    names.extend((0..n - core_states).map(|e| format!("x{e}")));
    Ok(pfa.with_state_names(names))
}

/// Seeded random automaton: each entry is defined with probability `density`
/// and then points at a uniformly chosen state. Letters are `c1..cL`.
pub fn gen_random(n: usize, letter_count: usize, density: f64, seed: u64) -> Result<Pfa> {
    param(n >= 1, || "random needs n >= 1".into())?;
    param(letter_count >= 1, || "random needs at least one letter".into())?;
    param((0.0..=1.0).contains(&density), || {
        format!("density must lie in [0, 1], got {density}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pfa = Pfa::undefined(n, (1..=letter_count).map(|i| format!("c{i}")));
    for q in 0..n {
        for l in 0..letter_count {
            let defined = rng.gen_bool(density);
            let target = rng.gen_range(0..n);
            pfa.set(q, l, defined.then_some(target));
        }
    }
    Ok(pfa)
}

/// A named, parameterised family instance with a canonical text form such as
/// `grid:d=3,k=4` or `random:n=4,l=3,p=0.8,seed=42`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Fig1,
    Grid { d: usize, k: usize },
    Cerny { n: usize },
    Chain { k: usize },
    Padded { d: usize, n: usize },
    Random { n: usize, letters: usize, density: f64, seed: u64 },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Pfa> {
        match *self {
            FamilySpec::Fig1 => Ok(gen_fig1()),
            FamilySpec::Grid { d, k } => gen_family(d, k),
            FamilySpec::Cerny { n } => gen_cerny(n),
            FamilySpec::Chain { k } => gen_chain(k),
            FamilySpec::Padded { d, n } => gen_padded(d, n),
            FamilySpec::Random { n, letters, density, seed } => gen_random(n, letters, density, seed),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Fig1 => "fig1",
            FamilySpec::Grid { .. } => "grid",
            FamilySpec::Cerny { .. } => "cerny",
            FamilySpec::Chain { .. } => "chain",
            FamilySpec::Padded { .. } => "padded",
            FamilySpec::Random { .. } => "random",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            FamilySpec::Fig1 => 0,
            FamilySpec::Grid { .. } => 1,
            FamilySpec::Cerny { .. } => 2,
            FamilySpec::Chain { .. } => 3,
            FamilySpec::Padded { .. } => 4,
            FamilySpec::Random { .. } => 5,
        }
    }

    fn int_params(&self) -> Vec<u64> {
        match *self {
            FamilySpec::Fig1 => vec![],
            FamilySpec::Grid { d, k } => vec![d as u64, k as u64],
            FamilySpec::Cerny { n } => vec![n as u64],
            FamilySpec::Chain { k } => vec![k as u64],
            FamilySpec::Padded { d, n } => vec![d as u64, n as u64],
            FamilySpec::Random { n, letters, seed, .. } => vec![n as u64, letters as u64, seed],
        }
    }

    /// Total order used to sort sweep rows: by family, then numerically by parameters.
    pub fn sort_cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.int_params().cmp(&other.int_params()))
            .then_with(|| match (self, other) {
                (FamilySpec::Random { density: a, .. }, FamilySpec::Random { density: b, .. }) => {
                    a.total_cmp(b)
                }
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Fig1 => write!(f, "fig1"),
            FamilySpec::Grid { d, k } => write!(f, "grid:d={d},k={k}"),
            FamilySpec::Cerny { n } => write!(f, "cerny:n={n}"),
            FamilySpec::Chain { k } => write!(f, "chain:k={k}"),
            FamilySpec::Padded { d, n } => write!(f, "padded:d={d},n={n}"),
            FamilySpec::Random { n, letters, density, seed } => {
                write!(f, "random:n={n},l={letters},p={density},seed={seed}")
            }
        }
    }
}

struct Params<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in body.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad_spec(spec, format!("`{item}` is not key=value")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Self { spec, pairs })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self
            .pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| bad_spec(self.spec, format!("missing `{key}`")))?;
        raw.parse()
            .map_err(|_| bad_spec(self.spec, format!("`{key}={raw}` is not a valid value")))
    }

    fn only(&self, keys: &[&str]) -> Result<()> {
        match self.pairs.iter().find(|(k, _)| !keys.contains(k)) {
            Some((k, _)) => Err(bad_spec(self.spec, format!("unexpected key `{k}`"))),
            None => Ok(()),
        }
    }
}

fn bad_spec(spec: &str, message: String) -> Error {
    Error::Parse {
        location: format!("family spec `{spec}`"),
        message,
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let p = Params::parse(s, body)?;
        let spec = match kind {
            "fig1" => {
                p.only(&[])?;
                FamilySpec::Fig1
            }
            "grid" => {
                p.only(&["d", "k"])?;
                FamilySpec::Grid { d: p.get("d")?, k: p.get("k")? }
            }
            "cerny" => {
                p.only(&["n"])?;
                FamilySpec::Cerny { n: p.get("n")? }
            }
            "chain" => {
                p.only(&["k"])?;
                FamilySpec::Chain { k: p.get("k")? }
            }
            "padded" => {
                p.only(&["d", "n"])?;
                FamilySpec::Padded { d: p.get("d")?, n: p.get("n")? }
            }
            "random" => {
                p.only(&["n", "l", "p", "seed"])?;
                FamilySpec::Random {
                    n: p.get("n")?,
                    letters: p.get("l")?,
                    density: p.get("p")?,
                    seed: p.get("seed")?,
                }
            }
            other => return Err(bad_spec(s, format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{is_careful_sync_word, total_merging_letter, Word};

    #[test]
    fn fig1_edges() {
        let pfa = gen_fig1();
        assert_eq!(pfa.delta(0, 1), None);
        assert_eq!(pfa.delta(2, 2), Some(3));
        assert_eq!(total_merging_letter(&pfa), Some(0));
    }

    #[test]
    fn grid_3_2_entries() {
        let pfa = gen_family(3, 2).unwrap();
        assert_eq!(pfa.letters(), ["a", "b1", "b2", "c2"]);
        let c2 = pfa.letter_index("c2").unwrap();
        let b2 = pfa.letter_index("b2").unwrap();
        assert_eq!(pfa.delta(grid_state(3, 2, 2), c2), Some(grid_state(3, 1, 0)));
        assert_eq!(pfa.delta(grid_state(3, 1, 0), b2), None);
        assert_eq!(total_merging_letter(&pfa), Some(0));
    }

    #[test]
    fn grid_with_one_class() {
        let pfa = gen_family(2, 1).unwrap();
        assert_eq!(pfa.letters(), ["a", "b1"]);
        assert!(is_careful_sync_word(&pfa, &Word::new(vec![0])));
    }

    /// The three families of undefined entries, and nothing else, are missing.
    #[test]
    fn grid_undefined_pattern() {
        for d in 2..=4 {
            for k in 1..=4 {
                let pfa = gen_family(d, k).unwrap();
                for i in 1..=k {
                    for j in 0..d {
                        let q = grid_state(d, i, j);
                        assert!(pfa.delta(q, 0).is_some());
                        for l in 1..=k {
                            let undefined = (i < l && j < d - 1) || (i == l && j == d - 1);
                            assert_eq!(pfa.delta(q, l).is_none(), undefined, "d={d} k={k} q={q} b{l}");
                        }
                        for l in 2..=k {
                            let defined = j == d - 1 && i <= l;
                            assert_eq!(pfa.delta(q, grid_c_letter(k, l)).is_some(), defined);
                        }
                    }
                }
                for l in 1..pfa.letter_count() {
                    assert!(!pfa.is_total_letter(l), "only `a` may be total");
                }
            }
        }
    }

    #[test]
    fn cerny_entries() {
        let pfa = gen_cerny(4).unwrap();
        assert!(pfa.is_total());
        assert_eq!(pfa.delta(0, 0), Some(1));
        assert_eq!(pfa.delta(3, 1), Some(0));
        assert_eq!(pfa.delta(2, 0), Some(2));
        assert!(gen_cerny(1).is_err());
    }

    #[test]
    fn chain_entries() {
        let two = gen_chain(2).unwrap();
        assert!(is_careful_sync_word(&two, &Word::new(vec![0])));
        let three = gen_chain(3).unwrap();
        let c2 = three.letter_index("c2").unwrap();
        assert_eq!(three.delta(2, c2), None);
        let word = Word::parse(&three, "c3 c2").unwrap();
        assert!(is_careful_sync_word(&three, &word));
    }

    #[test]
    fn padded_entries() {
        let pfa = gen_padded(3, 7).unwrap();
        assert_eq!(pfa.state_count(), 7);
        let p = pfa.letter_index("p").unwrap();
        assert_eq!(pfa.delta(6, p), Some(grid_state(3, 2, 0)));
        assert_eq!(pfa.delta(6, 0), None);
        assert!(gen_padded(3, 6).is_err());
        assert!(gen_padded(3, 2).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = gen_random(5, 3, 0.7, 42).unwrap();
        assert_eq!(a, gen_random(5, 3, 0.7, 42).unwrap());
        assert!(gen_random(5, 3, 1.0, 1).unwrap().is_total());
        assert!(gen_random(5, 3, 0.0, 1).unwrap().table().iter().all(Option::is_none));
        assert!(gen_random(5, 3, 1.5, 1).is_err());
    }

    #[test]
    fn spec_strings() {
        for text in [
            "fig1",
            "grid:d=3,k=4",
            "cerny:n=5",
            "chain:k=3",
            "padded:d=3,n=7",
            "random:n=4,l=3,p=0.8,seed=42",
        ] {
            let spec: FamilySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            spec.generate().unwrap();
        }
        assert!("grid:d=3".parse::<FamilySpec>().is_err());
        assert!("grid:d=3,k=2,z=1".parse::<FamilySpec>().is_err());
        assert!("torus:n=3".parse::<FamilySpec>().is_err());
    }
}
