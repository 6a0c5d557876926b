//! JSON automaton documents and Graphviz export.
//!
//! ```json
//! { "format_version": 1, "letters": ["a", "b"], "states": 2,
//!   "delta": [[1, null], [1, 0]] }
//! ```
//!
//! `delta[state][letter]` is the target state, `null` when undefined.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automaton::{validate, Pfa};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDocument {
    pub format_version: u32,
    pub letters: Vec<String>,
    pub states: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_names: Option<Vec<String>>,
    pub delta: Vec<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
}

impl AutomatonDocument {
    pub fn from_pfa(pfa: &Pfa) -> Self {
        let width = pfa.letter_count();
        Self {
            format_version: FORMAT_VERSION,
            letters: pfa.letters().to_vec(),
            states: pfa.state_count(),
            state_names: pfa.state_names().map(<[String]>::to_vec),
            delta: pfa.table().chunks(width.max(1)).map(<[_]>::to_vec).collect(),
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: impl Into<String>) -> Self {
        self.metadata = Some(metadata.into());
        self
    }

    pub fn to_pfa(&self) -> Result<Pfa> {
        if self.format_version != FORMAT_VERSION {
            return Err(parse_error(
                "format_version",
                format!("unsupported version {}", self.format_version),
            ));
        }
        if self.delta.len() != self.states {
            return Err(parse_error(
                "delta",
                format!("{} rows for {} states", self.delta.len(), self.states),
            ));
        }
        for (i, row) in self.delta.iter().enumerate() {
            if row.len() != self.letters.len() {
                return Err(parse_error(
                    &format!("delta[{i}]"),
                    format!("row has {} entries, expected {}", row.len(), self.letters.len()),
                ));
            }
        }
        let mut pfa = Pfa::new_unchecked(
            self.states,
            self.letters.clone(),
            self.delta.iter().flatten().copied().collect(),
        );
        if let Some(names) = &self.state_names {
            pfa = pfa.with_state_names(names.clone());
        }
        let diags = validate(&pfa);
        if diags.is_empty() {
            Ok(pfa)
        } else {
            Err(Error::Invalid(diags))
        }
    }
}

fn parse_error(location: &str, message: String) -> Error {
    Error::Parse {
        location: location.to_string(),
        message,
    }
}

pub fn parse_automaton(text: &str) -> Result<Pfa> {
    parse_document(text)?.to_pfa()
}

pub fn parse_document(text: &str) -> Result<AutomatonDocument> {
    serde_json::from_str(text).map_err(|e| {
        parse_error(&format!("line {} column {}", e.line(), e.column()), e.to_string())
    })
}

pub fn serialize_automaton(pfa: &Pfa) -> String {
    serialize_document(&AutomatonDocument::from_pfa(pfa))
}

/// Pretty JSON with each transition row on one line.
pub fn serialize_document(doc: &AutomatonDocument) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"format_version\": {},", doc.format_version);
    let _ = writeln!(out, "  \"letters\": {},", json(&doc.letters));
    let _ = writeln!(out, "  \"states\": {},", doc.states);
    if let Some(names) = &doc.state_names {
        let _ = writeln!(out, "  \"state_names\": {},", json(names));
    }
    if let Some(meta) = &doc.metadata {
        let _ = writeln!(out, "  \"metadata\": {},", json(meta));
    }
    out.push_str("  \"delta\": [");
    for (i, row) in doc.delta.iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        out.push_str(&json(row));
    }
    out.push_str(if doc.delta.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Graphviz rendering with one edge per (source, target) pair, labelled with
/// the comma-joined letters that take it.
pub fn export_dot(pfa: &Pfa) -> String {
    let mut edges: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for q in 0..pfa.state_count() {
        for l in 0..pfa.letter_count() {
            if let Some(t) = pfa.delta(q, l) {
                edges.entry((q, t)).or_default().push(pfa.letter_name(l));
            }
        }
    }
    let mut out = String::from("digraph pfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..pfa.state_count() {
        let _ = writeln!(out, "  {q} [label={}];", json(&pfa.state_label(q)));
    }
    for ((from, to), letters) in &edges {
        let _ = writeln!(out, "  {from} -> {to} [label={}];", json(&letters.join(",")));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_family, gen_fig1};

    #[test]
    fn round_trip() {
        for pfa in [gen_fig1(), gen_family(3, 2).unwrap()] {
            assert_eq!(parse_automaton(&serialize_automaton(&pfa)).unwrap(), pfa);
        }
    }

    #[test]
    fn document_shape() {
        let text = serialize_automaton(&gen_fig1());
        assert!(text.contains("\"delta\": [\n    [1,null,1],"));
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.delta[0], vec![Some(1), None, Some(1)]);
    }

    #[test]
    fn wrong_arity_is_a_parse_error() {
        let text = r#"{"format_version":1,"letters":["a","b"],"states":2,"delta":[[0,1],[1]]}"#;
        match parse_automaton(text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "delta[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn out_of_range_is_a_validation_error() {
        let text = r#"{"format_version":1,"letters":["a"],"states":4,"delta":[[9],[0],[0],[0]]}"#;
        assert!(matches!(parse_automaton(text), Err(Error::Invalid(_))));
    }

    #[test]
    fn malformed_json_reports_position() {
        match parse_automaton("{\n  \"states\": ") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dot_output_for_fig1() {
        let dot = export_dot(&gen_fig1());
        assert!(dot.contains("  2 -> 3 [label=\"b,c\"];"));
        assert!(dot.contains("  1 -> 1 [label=\"a\"];"));
        assert!(dot.contains("  0 -> 1 [label=\"a,c\"];"));
    }

    #[test]
    fn dot_skips_undefined_letter() {
        let mut pfa = Pfa::undefined(2, ["x", "never"]);
        pfa.set(0, 0, Some(1));
        pfa.set(1, 0, Some(1));
        let dot = export_dot(&pfa);
        assert!(!dot.contains("never"));
        assert_eq!(dot, export_dot(&pfa));
    }
}
