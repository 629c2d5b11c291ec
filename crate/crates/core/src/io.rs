//! Tableau files: JSON and plain text, plus JSON renderings of results.
//!
//! JSON tableaux look like
//! `{"kind": "form", "candidates": ["a", "b"], "cells": [["a", "b"], ...]}`
//! with correspondence cells written as arrays of names. Two-candidate
//! n-voter tableaux use kinds `n-form` / `n-correspondence`, a `weights`
//! array and a flat row-major `cells` array (last axis fastest).
//!
//! Text tableaux have one row per line. Form cells are bare names and
//! correspondence cells are brace lists such as `{a,b}`.

use serde_json::{json, Map, Value};

use crate::error::{DavError, Result};
use crate::oracle::OracleReport;
use crate::recognizer::RecognitionResult;
use crate::special::{NCorrespondence, NForm, NTableau};
use crate::strategy::{Candidate, CandidateSet, Strategy};
use crate::tableau::{Cell, Correspondence, Form, Labeling, Tableau};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Correspondence(Correspondence),
    Form(Form),
    NCorrespondence(NCorrespondence),
    NForm(NForm),
}

/// A parsed tableau and the external names of its candidates, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub names: Vec<String>,
    pub body: Body,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Correspondence(_) => "correspondence",
            Body::Form(_) => "form",
            Body::NCorrespondence(_) => "n-correspondence",
            Body::NForm(_) => "n-form",
        }
    }
}

/// Default names: letters for up to 26 candidates, `c00`, `c01`, ... beyond.
pub fn default_names(p: usize) -> Vec<String> {
    if p <= 26 {
        (0..p).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..p).map(|i| format!("c{i:02}")).collect()
    }
}

#[derive(Default)]
struct Namer {
    names: Vec<String>,
}

impl Namer {
    fn index(&mut self, name: &str) -> Result<Candidate> {
        if name.is_empty() {
            return Err(DavError::Parse("empty candidate name".into()));
        }
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(Candidate(i));
        }
        if self.names.len() == crate::strategy::MAX_CANDIDATES {
            return Err(DavError::Parse(format!("more than {} candidates", crate::strategy::MAX_CANDIDATES)));
        }
        self.names.push(name.to_string());
        Ok(Candidate(self.names.len() - 1))
    }

    fn set<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> Result<CandidateSet> {
        let mut s = CandidateSet::EMPTY;
        for n in names {
            s.insert(self.index(n)?);
        }
        if s.is_empty() {
            return Err(DavError::Parse("empty correspondence cell".into()));
        }
        Ok(s)
    }
}

enum Raw {
    Name(String),
    Set(Vec<String>),
}

fn raw_cell(v: &Value) -> Result<Raw> {
    match v {
        Value::String(s) => Ok(Raw::Name(s.clone())),
        Value::Array(items) => items
            .iter()
            .map(|i| i.as_str().map(str::to_string).ok_or_else(|| DavError::Parse(format!("bad cell entry {i}"))))
            .collect::<Result<Vec<_>>>()
            .map(Raw::Set),
        other => Err(DavError::Parse(format!("bad cell {other}"))),
    }
}

fn build<T>(namer: &mut Namer, raws: &[Raw], cell: impl Fn(&mut Namer, &Raw) -> Result<T>) -> Result<Vec<T>> {
    raws.iter().map(|r| cell(namer, r)).collect()
}

fn as_set(namer: &mut Namer, r: &Raw) -> Result<CandidateSet> {
    match r {
        Raw::Name(n) => namer.set([n.as_str()]),
        Raw::Set(ns) => namer.set(ns.iter().map(String::as_str)),
    }
}

fn as_single(namer: &mut Namer, r: &Raw) -> Result<Candidate> {
    match r {
        Raw::Name(n) => namer.index(n),
        Raw::Set(ns) if ns.len() == 1 => namer.index(&ns[0]),
        Raw::Set(_) => Err(DavError::Parse("form cells must name one candidate".into())),
    }
}

fn finish_names(namer: &mut Namer, listed: Option<&Value>) -> Result<()> {
    if let Some(list) = listed {
        let list = list.as_array().ok_or_else(|| DavError::Parse("`candidates` must be an array".into()))?;
        for v in list {
            namer.index(v.as_str().ok_or_else(|| DavError::Parse("candidate names must be strings".into()))?)?;
        }
    }
    Ok(())
}

/// Parse a JSON tableau. A missing `kind` is inferred: `weights` means an
/// n-voter tableau, and any array cell means a correspondence.
pub fn parse_json(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| DavError::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| DavError::Parse("expected a JSON object".into()))?;
    let cells = obj.get("cells").ok_or_else(|| DavError::Parse("missing `cells`".into()))?;
    let weights = obj.get("weights");
    let kind = match obj.get("kind") {
        Some(k) => k.as_str().ok_or_else(|| DavError::Parse("`kind` must be a string".into()))?.to_string(),
        None => {
            let any_set = |vals: &[Value]| vals.iter().any(|c| c.is_array());
            let flat: Vec<Value> = match cells {
                Value::Array(rows) if weights.is_none() => {
                    rows.iter().flat_map(|r| r.as_array().cloned().unwrap_or_default()).collect()
                }
                Value::Array(items) => items.clone(),
                _ => Vec::new(),
            };
            let base = if any_set(&flat) { "correspondence" } else { "form" };
            if weights.is_some() {
                format!("n-{base}")
            } else {
                base.to_string()
            }
        }
    };
    let mut namer = Namer::default();

    match kind.as_str() {
        "correspondence" | "form" => {
            let rows = cells.as_array().ok_or_else(|| DavError::Parse("`cells` must be an array of rows".into()))?;
            let mut raw_rows = Vec::with_capacity(rows.len());
            for r in rows {
                let r = r.as_array().ok_or_else(|| DavError::Parse("each row must be an array".into()))?;
                raw_rows.push(r.iter().map(raw_cell).collect::<Result<Vec<_>>>()?);
            }
            let width = raw_rows.first().map_or(0, Vec::len);
            if raw_rows.is_empty() || width == 0 || raw_rows.iter().any(|r| r.len() != width) {
                return Err(DavError::Malformed("rows must be non-empty and of equal length".into()));
            }
            let flat: Vec<Raw> = raw_rows.into_iter().flatten().collect();
            let body = if kind == "correspondence" {
                let cells = build(&mut namer, &flat, as_set)?;
                finish_names(&mut namer, obj.get("candidates"))?;
                Body::Correspondence(Tableau::new(namer.names.len(), flat.len() / width, width, cells)?)
            } else {
                let cells = build(&mut namer, &flat, as_single)?;
                finish_names(&mut namer, obj.get("candidates"))?;
                Body::Form(Tableau::new(namer.names.len(), flat.len() / width, width, cells)?)
            };
            Ok(Document { names: namer.names, body })
        }
        "n-correspondence" | "n-form" => {
            let weights: Vec<u32> = weights
                .and_then(Value::as_array)
                .ok_or_else(|| DavError::Parse("missing `weights` array".into()))?
                .iter()
                .map(|w| w.as_u64().and_then(|w| u32::try_from(w).ok()))
                .collect::<Option<_>>()
                .ok_or_else(|| DavError::Parse("weights must be non-negative integers".into()))?;
            // n-voter tableaux always have the two candidates in the listed order
            let listed = obj.get("candidates").cloned().unwrap_or_else(|| json!(["a", "b"]));
            finish_names(&mut namer, Some(&listed))?;
            if namer.names.len() != 2 {
                return Err(DavError::Malformed("n-voter tableaux have exactly two candidates".into()));
            }
            let items = cells.as_array().ok_or_else(|| DavError::Parse("`cells` must be a flat array".into()))?;
            let flat = items.iter().map(raw_cell).collect::<Result<Vec<_>>>()?;
            let body = if kind == "n-correspondence" {
                Body::NCorrespondence(NTableau::new(weights, build(&mut namer, &flat, as_set)?)?)
            } else {
                Body::NForm(NTableau::new(weights, build(&mut namer, &flat, as_single)?)?)
            };
            if namer.names.len() != 2 {
                return Err(DavError::Malformed("n-voter cells name an unlisted candidate".into()));
            }
            Ok(Document { names: namer.names, body })
        }
        other => Err(DavError::Parse(format!("unknown kind `{other}`"))),
    }
}

/// Parse a text tableau. Any brace cell makes it a correspondence.
pub fn parse_text(text: &str) -> Result<Document> {
    let rows: Vec<Vec<&str>> =
        text.lines().map(str::split_whitespace).map(Iterator::collect).filter(|r: &Vec<&str>| !r.is_empty()).collect();
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != width) {
        return Err(DavError::Malformed("rows must be non-empty and of equal length".into()));
    }
    let is_corr = rows.iter().flatten().any(|c| c.starts_with('{'));
    let mut raws = Vec::with_capacity(rows.len() * width);
    for cell in rows.iter().flatten() {
        if is_corr {
            let inner = cell
                .strip_prefix('{')
                .and_then(|c| c.strip_suffix('}'))
                .ok_or_else(|| DavError::Parse(format!("expected a brace list, got `{cell}`")))?;
            raws.push(Raw::Set(inner.split(',').map(|s| s.trim().to_string()).collect()));
        } else {
            raws.push(Raw::Name(cell.to_string()));
        }
    }
    let mut namer = Namer::default();
    let body = if is_corr {
        let cells = build(&mut namer, &raws, as_set)?;
        Body::Correspondence(Tableau::new(namer.names.len(), rows.len(), width, cells)?)
    } else {
        let cells = build(&mut namer, &raws, as_single)?;
        Body::Form(Tableau::new(namer.names.len(), rows.len(), width, cells)?)
    };
    Ok(Document { names: namer.names, body })
}

/// JSON if the text starts with `{`, plain text otherwise.
pub fn parse_auto(text: &str) -> Result<Document> {
    if text.trim_start().starts_with('{') && serde_json::from_str::<Value>(text).is_ok() {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn cell_json<T: Cell>(cell: &T, names: &[String], exact: bool) -> Value {
    let members: Vec<&str> = cell.support().iter().map(|c| names[c.0].as_str()).collect();
    if exact {
        json!(members)
    } else {
        json!(members[0])
    }
}

pub fn tableau_json<T: Cell>(t: &Tableau<T>, names: &[String]) -> Value {
    let kind = if T::EXACT { "correspondence" } else { "form" };
    let cells: Vec<Value> = t
        .to_rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|c| cell_json(c, names, T::EXACT)).collect()))
        .collect();
    json!({ "kind": kind, "candidates": names, "cells": cells })
}

pub fn n_tableau_json<T: Cell>(f: &NTableau<T>, names: &[String]) -> Value {
    let kind = if T::EXACT { "n-correspondence" } else { "n-form" };
    let cells: Vec<Value> = f.cells().iter().map(|c| cell_json(c, names, T::EXACT)).collect();
    json!({ "kind": kind, "candidates": names, "weights": f.weights(), "dims": f.dims(), "cells": cells })
}

pub fn document_json(doc: &Document) -> Value {
    match &doc.body {
        Body::Correspondence(t) => tableau_json(t, &doc.names),
        Body::Form(t) => tableau_json(t, &doc.names),
        Body::NCorrespondence(f) => n_tableau_json(f, &doc.names),
        Body::NForm(f) => n_tableau_json(f, &doc.names),
    }
}

/// Text rendering; every name must be a single character other than braces
/// and commas.
pub fn tableau_text<T: Cell>(t: &Tableau<T>, names: &[String]) -> Result<String> {
    if names.iter().any(|n| n.chars().count() != 1 || n.contains(['{', '}', ',']) || n.trim().is_empty()) {
        return Err(DavError::InvalidParameters("text format needs single-letter candidate names (p <= 26)".into()));
    }
    let mut out = String::new();
    for i in 0..t.rows() {
        let row: Vec<String> = t
            .row(i)
            .iter()
            .map(|c| {
                let members: Vec<&str> = c.support().iter().map(|c| names[c.0].as_str()).collect();
                if T::EXACT {
                    format!("{{{}}}", members.join(","))
                } else {
                    members[0].to_string()
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

fn strategies_json(xs: &[Strategy]) -> Value {
    json!(xs.iter().map(|x| x.counts().to_vec()).collect::<Vec<_>>())
}

fn labeling_fields(out: &mut Map<String, Value>, labeling: Option<&Labeling>) {
    let (r, c) = match labeling {
        Some(l) => (strategies_json(&l.rows), strategies_json(&l.cols)),
        None => (Value::Null, Value::Null),
    };
    out.insert("row_labels".into(), r);
    out.insert("col_labels".into(), c);
}

pub fn result_json(r: &RecognitionResult, names: &[String]) -> Value {
    let mut out = Map::new();
    out.insert("verdict".into(), json!(r.verdict));
    out.insert("method".into(), json!(r.method));
    out.insert("candidates".into(), json!(names));
    labeling_fields(&mut out, r.labeling.as_ref());
    out.insert("plane_labels".into(), json!(r.plane_labels));
    out.insert("witness".into(), json!(r.witness));
    let forbidden = r.forbidden.as_ref().map(|f| {
        json!({
            "pattern": f.pattern.name(),
            "rows": f.rows,
            "cols": f.cols,
            "symbols": f.symbols.iter().map(|c| names[c.0].as_str()).collect::<Vec<_>>(),
        })
    });
    out.insert("forbidden".into(), json!(forbidden));
    Value::Object(out)
}

pub fn oracle_json(r: &OracleReport, names: &[String]) -> Value {
    let mut out = Map::new();
    out.insert("is_dav".into(), json!(r.is_dav));
    out.insert("labelings_found".into(), json!(r.labelings_found));
    out.insert("nodes_explored".into(), json!(r.nodes_explored));
    out.insert("candidates".into(), json!(names));
    labeling_fields(&mut out, r.one_labeling.as_ref());
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::generate_correspondence;

    #[test]
    fn json_round_trip() {
        let h = generate_correspondence(2, 3, 3).unwrap();
        let names = default_names(2);
        let v = tableau_json(&h, &names);
        assert_eq!(v["cells"][0][3], json!(["a", "b"]));
        let doc = parse_json(&v.to_string()).unwrap();
        assert_eq!(doc.names, names);
        assert_eq!(doc.body, Body::Correspondence(h));
    }

    #[test]
    fn names_by_first_appearance() {
        let doc = parse_json(r#"{"candidates": ["x", "y", "z"], "cells": [["y", "x"], ["x", "y"]]}"#).unwrap();
        assert_eq!(doc.names, vec!["y", "x", "z"]);
        assert_eq!(doc.kind(), "form");
        let Body::Form(g) = doc.body else { panic!() };
        assert_eq!(g.candidates(), 3);
        assert_eq!(g.get(0, 0), Candidate(0));
    }

    #[test]
    fn text_formats() {
        let doc = parse_auto("{a} {a,b}\n{a,b} {b}\n").unwrap();
        assert_eq!(doc.kind(), "correspondence");
        let Body::Correspondence(h) = &doc.body else { panic!() };
        assert_eq!(h, &generate_correspondence(2, 1, 1).unwrap());
        assert_eq!(tableau_text(h, &doc.names).unwrap(), "{a} {a,b}\n{a,b} {b}\n");
        let doc = parse_auto("a b b\nc a b\nc c a\n").unwrap();
        assert_eq!(doc.kind(), "form");
        assert!(parse_text("a b\nc\n").is_err());
    }

    #[test]
    fn n_voter_documents() {
        let f = crate::special::generate_n_correspondence(&[1, 1, 1]).unwrap();
        let v = n_tableau_json(&f, &default_names(2));
        let doc = parse_json(&v.to_string()).unwrap();
        assert_eq!(doc.body, Body::NCorrespondence(f));
        let v = json!({"weights": [1], "cells": ["b", "a"]});
        assert_eq!(parse_json(&v.to_string()).unwrap().kind(), "n-form");
    }

    #[test]
    fn wide_names() {
        assert_eq!(default_names(3), vec!["a", "b", "c"]);
        assert_eq!(default_names(30)[29], "c29");
    }
}
