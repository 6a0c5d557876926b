//! A fixed battery that re-checks published claims about these families
//! against simulation and exact search, and reports where they disagree.

use std::fmt;

use crate::automaton::{run_word, Run, StateSet, Word};
use crate::error::Result;
use crate::families::{gen_cerny, gen_family, gen_fig1, grid_state};
use crate::search::{forced_path_check, shortest_careful_word, subset_distance, SearchOptions};
use crate::transform::transform;
use crate::words::{
    cerny_alt_default_repetitions, cerny_alt_word, family_word, grid_closed_form, min_alt_repetitions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrataEntry {
    pub id: String,
    pub claim: String,
    pub observed: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrataReport {
    pub entries: Vec<ErrataEntry>,
}

impl ErrataReport {
    pub fn find(&self, id: &str) -> Option<&ErrataEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

impl fmt::Display for ErrataReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "PASS",
                Status::Discrepancy => "DISCREPANCY",
            };
            writeln!(f, "[{tag}] {}", e.id)?;
            writeln!(f, "    claim:    {}", e.claim)?;
            writeln!(f, "    observed: {}", e.observed)?;
        }
        let bad = self.entries.iter().filter(|e| e.status == Status::Discrepancy).count();
        writeln!(f, "{} checks, {} discrepancies", self.entries.len(), bad)
    }
}

#[derive(Debug, Clone)]
pub struct ErrataOptions {
    pub grid_instances: Vec<(usize, usize)>,
    pub cerny_sizes: Vec<usize>,
    /// Largest repetition count tried when repairing the alternative Černý word.
    pub max_repetitions: usize,
    pub search: SearchOptions,
}

impl Default for ErrataOptions {
    fn default() -> Self {
        Self {
            grid_instances: vec![(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2)],
            cerny_sizes: (4..=10).collect(),
            max_repetitions: 20,
            search: SearchOptions::default(),
        }
    }
}

fn entry(id: String, claim: String, observed: String, ok: bool) -> ErrataEntry {
    ErrataEntry {
        id,
        claim,
        observed,
        status: if ok { Status::Pass } else { Status::Discrepancy },
    }
}

pub fn errata_report(opts: &ErrataOptions) -> Result<ErrataReport> {
    let mut entries = Vec::new();

    let fig1 = gen_fig1();
    let res = shortest_careful_word(&fig1, &opts.search)?;
    entries.push(entry(
        "fig1/shortest-length".into(),
        "shortest careful word has length 10 > (4-1)^2".into(),
        format!("exact search: length {} ({})", res.length, res.word.render(&fig1)),
        res.length == 10,
    ));
    let literal = Word::parse(&fig1, "a b c a^3 b^2 c a")?;
    let (observed, ok) = match run_word(&fig1, &fig1.full_set(), &literal)? {
        Run::UndefinedAt(p) => (format!("UNDEFINED at position {p}"), false),
        Run::Completed { trace } => {
            let end = trace.last().expect("non-empty");
            (format!("ends in {end}"), end.len() == 1)
        }
    };
    entries.push(entry(
        "fig1/literal-word".into(),
        "a b c a^3 b^2 c a carefully synchronizes".into(),
        observed,
        ok,
    ));

    for &(d, k) in &opts.grid_instances {
        let pfa = gen_family(d, k)?;
        let word = family_word(d, k)?;
        let bfs = shortest_careful_word(&pfa, &opts.search)?;
        let closed = grid_closed_form(d, k)?;
        let forced = forced_path_check(&pfa, &word, &pfa.full_set())?;
        entries.push(entry(
            format!("grid/length d={d} k={k}"),
            format!("(d^(k+1) + (d-1)k - d^2)/(d-1) = {closed} is the shortest length"),
            format!(
                "exact search {}, built word {}, closed form off by {}; forced path {}",
                bfs.length,
                word.len(),
                closed as i128 - bfs.length as i128,
                if forced.pass { "holds" } else { "fails" },
            ),
            closed == bfs.length as u128,
        ));
    }

    for &n in &opts.cerny_sizes {
        let cerny = gen_cerny(n)?;
        let literal_r = cerny_alt_default_repetitions(n);
        let literal = cerny_alt_word(n, None)?;
        let end = run_word(&cerny, &cerny.full_set(), &literal)?;
        let end = end.final_set().expect("total automaton");
        let works = end.len() == 1;
        let repaired = min_alt_repetitions(n, opts.max_repetitions)?;
        entries.push(entry(
            format!("cerny/alt-word n={n}"),
            format!("alternative word with r={literal_r} synchronizes"),
            format!(
                "literal r={literal_r} {} (ends in {end}); minimal r={}",
                if works { "synchronizes" } else { "fails" },
                repaired.map_or("none".to_string(), |r| r.to_string()),
            ),
            works,
        ));
    }

    let base = gen_cerny(3)?;
    for d in [2, 3] {
        let rec = transform(d, &base)?;
        for s in 1..=3usize {
            let n = rec.result.state_count();
            let from = StateSet::from_states(n, (1..=s).map(|i| grid_state(d, i, 0)));
            let to = StateSet::from_states(n, (1..=s).map(|i| grid_state(d, i, d - 1)));
            let dist = subset_distance(&rec.result, &from, &to, &opts.search)?;
            let expected = d.pow(s as u32) - 1;
            let observed = match dist {
                Some(x) if x == expected => format!("distance {x} = d^s - 1: PASS"),
                Some(x) => format!("distance {x} != d^s - 1 = {expected}"),
                None => "unreachable".into(),
            };
            entries.push(entry(
                format!("lifted/subset-distance d={d} s={s}"),
                "all-zero to all-top digits over s classes takes d^s - 1 letters".into(),
                observed,
                dist == Some(expected),
            ));
        }
    }

    Ok(ErrataReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_contents() {
        let report = errata_report(&ErrataOptions::default()).unwrap();
        let literal = report.find("fig1/literal-word").unwrap();
        assert_eq!(literal.observed, "UNDEFINED at position 7");
        assert_eq!(literal.status, Status::Discrepancy);
        let dist = report.find("lifted/subset-distance d=2 s=2").unwrap();
        assert_eq!(dist.observed, "distance 3 = d^s - 1: PASS");
        let alt = report.find("cerny/alt-word n=4").unwrap();
        assert!(alt.observed.starts_with("literal r=1 fails"), "{}", alt.observed);
        assert!(alt.observed.ends_with("minimal r=2"));
        assert_eq!(report.to_string(), errata_report(&ErrataOptions::default()).unwrap().to_string());
    }
}
