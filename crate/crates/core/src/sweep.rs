//! Batch measurement of family instances with CSV output.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::automaton::{is_careful_sync_word, Word};
use crate::error::{Error, Result};
use crate::families::{gen_padded, FamilySpec};
use crate::search::{shortest_careful_word, SearchOptions};
use crate::words::{cerny_classic_word, family_word, grid_closed_form, LengthReport};

/// First line of every sweep CSV; bump the version when columns change.
pub const CSV_VERSION_LINE: &str = "# careful-sync sweep csv v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsOutcome {
    Length(usize),
    NotSynchronizing,
    CapExceeded,
    /// Too many states for the exact search.
    Skipped,
}

impl fmt::Display for BfsOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BfsOutcome::Length(n) => write!(f, "{n}"),
            BfsOutcome::NotSynchronizing => write!(f, "NOT_SYNC"),
            BfsOutcome::CapExceeded => write!(f, "CAP"),
            BfsOutcome::Skipped => write!(f, "SKIP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub spec: FamilySpec,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub states: usize,
    pub bfs: BfsOutcome,
    pub visited_subsets: Option<usize>,
    pub builder_length: Option<u128>,
    /// Whether the built word carefully synchronizes the instance.
    pub builder_verified: Option<bool>,
    /// Length claimed for this instance in the literature, when there is one.
    pub published_length: Option<u128>,
    pub wall_time: Duration,
}

impl SweepRow {
    pub fn bfs_length(&self) -> Option<usize> {
        match self.bfs {
            BfsOutcome::Length(n) => Some(n),
            _ => None,
        }
    }

    pub fn lengths(&self) -> Option<LengthReport> {
        Some(LengthReport {
            builder_length: self.builder_length?,
            closed_form: self.published_length,
            bfs_length: self.bfs_length().map(|n| n as u128),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub search: SearchOptions,
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            search: SearchOptions::default(),
            workers: 1,
        }
    }
}

/// Builder word and published length for a family instance, where known.
fn reference_word(spec: &FamilySpec) -> Result<(Option<Word>, Option<u128>)> {
    Ok(match *spec {
        FamilySpec::Fig1 => (None, Some(10)),
        FamilySpec::Grid { d, k } if k >= 2 => (Some(family_word(d, k)?), Some(grid_closed_form(d, k)?)),
        FamilySpec::Grid { .. } => (Some(Word::new(vec![0])), None),
        FamilySpec::Cerny { n } => (Some(cerny_classic_word(n)?), Some(((n - 1) * (n - 1)) as u128)),
        FamilySpec::Chain { k } => (Some(Word::new((0..k - 1).rev().collect())), None),
        FamilySpec::Padded { d, n } if n / d >= 2 => {
            let pfa = gen_padded(d, n)?;
            let mut word = Word::new(vec![pfa.letter_count() - 1]);
            word.append(&family_word(d, n / d)?);
            (Some(word), None)
        }
        FamilySpec::Padded { .. } | FamilySpec::Random { .. } => (None, None),
    })
}

pub fn sweep_row(spec: &FamilySpec, search: &SearchOptions) -> Result<SweepRow> {
    let started = Instant::now();
    let pfa = spec.generate()?;
    let (d, k) = match *spec {
        FamilySpec::Grid { d, k } => (Some(d), Some(k)),
        FamilySpec::Padded { d, n } => (Some(d), Some(n / d)),
        FamilySpec::Chain { k } => (None, Some(k)),
        _ => (None, None),
    };
    let (bfs, visited_subsets) = match shortest_careful_word(&pfa, search) {
        Ok(res) => (BfsOutcome::Length(res.length), Some(res.visited_subsets)),
        Err(Error::NotSynchronizing { visited }) => (BfsOutcome::NotSynchronizing, Some(visited)),
        Err(Error::CapExceeded { .. }) => (BfsOutcome::CapExceeded, None),
        Err(Error::TooManyStates(_)) => (BfsOutcome::Skipped, None),
        Err(e) => return Err(e),
    };
    let (word, published_length) = reference_word(spec)?;
    Ok(SweepRow {
        spec: spec.clone(),
        d,
        k,
        states: pfa.state_count(),
        bfs,
        visited_subsets,
        builder_length: word.as_ref().map(|w| w.len() as u128),
        builder_verified: word.as_ref().map(|w| is_careful_sync_word(&pfa, w)),
        published_length,
        wall_time: started.elapsed(),
    })
}

/// Runs every spec, `workers` at a time, and returns rows sorted by spec.
pub fn run_sweep(specs: &[FamilySpec], opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<SweepRow>)>> = Mutex::new(Vec::with_capacity(specs.len()));
    let workers = opts.workers.clamp(1, specs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = specs.get(i) else { break };
                let row = sweep_row(spec, &opts.search);
                results.lock().expect("worker panicked").push((i, row));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(i, _)| *i);
    let mut rows = results.into_iter().map(|(_, r)| r).collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.spec.sort_cmp(&b.spec));
    Ok(rows)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with a version comment line, a header row and one row per instance.
/// Wall time is only included on request so that default output is reproducible.
pub fn rows_to_csv(rows: &[SweepRow], include_timing: bool) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec![
        "spec",
        "d",
        "k",
        "states",
        "bfs_length",
        "visited_subsets",
        "builder_length",
        "builder_verified",
        "published_length",
        "builder_eq_bfs",
        "published_eq_bfs",
        "builder_eq_published",
    ];
    if include_timing {
        header.push("wall_time_ms");
    }
    writer.write_record(&header).expect("in-memory write");
    for row in rows {
        let lengths = row.lengths();
        let mut record = vec![
            row.spec.to_string(),
            opt(row.d),
            opt(row.k),
            row.states.to_string(),
            row.bfs.to_string(),
            opt(row.visited_subsets),
            opt(row.builder_length),
            opt(row.builder_verified),
            opt(row.published_length),
            opt(lengths.and_then(|l| l.builder_vs_bfs())),
            opt(match (row.published_length, row.bfs_length()) {
                (Some(p), Some(b)) => Some(p == b as u128),
                _ => None,
            }),
            opt(lengths.and_then(|l| l.builder_vs_closed_form())),
        ];
        if include_timing {
            record.push(format!("{:.3}", row.wall_time.as_secs_f64() * 1e3));
        }
        writer.write_record(&record).expect("in-memory write");
    }
    let body = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 csv");
    format!("{CSV_VERSION_LINE}\n{body}")
}

/// Expands `..` ranges in spec strings: `grid:d=2,k=2..4` yields three specs.
pub fn expand_spec_ranges(text: &str) -> Result<Vec<FamilySpec>> {
    let (kind, body) = text.split_once(':').unwrap_or((text, ""));
    let mut variants: Vec<Vec<String>> = vec![Vec::new()];
    for item in body.split(',').filter(|s| !s.is_empty()) {
        let expanded: Vec<String> = match item.split_once('=') {
            Some((key, value)) if value.contains("..") => {
                let (lo, hi) = value.split_once("..").expect("checked");
                let bad = || Error::Parse {
                    location: format!("family spec `{text}`"),
                    message: format!("bad range `{value}`"),
                };
                let lo: u64 = lo.parse().map_err(|_| bad())?;
                let hi: u64 = hi.parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                (lo..=hi).map(|v| format!("{key}={v}")).collect()
            }
            _ => vec![item.to_string()],
        };
        variants = variants
            .into_iter()
            .flat_map(|prefix| {
                expanded.iter().map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e.clone());
                    p
                })
            })
            .collect();
    }
    variants
        .into_iter()
        .map(|items| {
            if items.is_empty() {
                kind.parse()
            } else {
                format!("{kind}:{}", items.join(",")).parse()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_expand() {
        let specs = expand_spec_ranges("grid:d=2..3,k=2..4").unwrap();
        assert_eq!(specs.len(), 6);
        assert_eq!(specs[0], FamilySpec::Grid { d: 2, k: 2 });
        assert_eq!(specs[5], FamilySpec::Grid { d: 3, k: 4 });
        assert_eq!(expand_spec_ranges("fig1").unwrap(), vec![FamilySpec::Fig1]);
        assert!(expand_spec_ranges("grid:d=2,k=5..2").is_err());
    }

    #[test]
    fn grid_row_reports_mismatch() {
        let row = sweep_row(&FamilySpec::Grid { d: 3, k: 2 }, &SearchOptions::default()).unwrap();
        assert_eq!(row.builder_length, Some(10));
        assert_eq!(row.published_length, Some(11));
        assert_eq!(row.builder_verified, Some(true));
        assert_eq!(row.lengths().unwrap().builder_vs_closed_form(), Some(false));
    }

    #[test]
    fn rows_are_sorted_and_csv_is_stable() {
        let specs = expand_spec_ranges("cerny:n=3..6").unwrap().into_iter().rev().collect::<Vec<_>>();
        let opts = SweepOptions { workers: 3, ..Default::default() };
        let rows = run_sweep(&specs, &opts).unwrap();
        let ns: Vec<_> = rows.iter().map(|r| r.states).collect();
        assert_eq!(ns, vec![3, 4, 5, 6]);
        let csv = rows_to_csv(&rows, false);
        assert_eq!(csv, rows_to_csv(&run_sweep(&specs, &SweepOptions::default()).unwrap(), false));
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_VERSION_LINE));
        assert!(lines.next().unwrap().starts_with("spec,d,k,states,bfs_length"));
        assert_eq!(lines.next(), Some("cerny:n=3,,,3,4,5,4,true,4,true,true,true"));
    }

    #[test]
    fn capped_rows_are_marked() {
        let search = SearchOptions { max_subsets: 4, ..Default::default() };
        let row = sweep_row(&FamilySpec::Fig1, &search).unwrap();
        assert_eq!(row.bfs, BfsOutcome::CapExceeded);
    }
}
