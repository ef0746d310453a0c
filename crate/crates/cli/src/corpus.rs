//! The shipped corpus of golden examples.
//!
//! Each corpus file is `{"items": [...]}`; an item has a `name`, `tags`, a
//! `kind` (`check`, `flags`, `complement`, `certificate`, `g2_fixture`), its
//! input and an `expect` object. Expected reports are partial: every key
//! given must match, keys not given are ignored, arrays must match in length.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use relcr::exactlin::{AffineSolution, Subspace};
use relcr::g2model::{build_g2_data, delta, G2Data, FIXTURE};
use relcr::structcr::stable_complements;
use serde_json::{json, Value};

use crate::commands;
use crate::scenario::{parse_h, parse_k, parse_subspace, read_json, Certificate, Scenario};

const EMBEDDED: [(&str, &str); 4] = [
    ("torus.json", include_str!("../corpus/torus.json")),
    ("classical.json", include_str!("../corpus/classical.json")),
    ("glu.json", include_str!("../corpus/glu.json")),
    ("g2.json", include_str!("../corpus/g2.json")),
];

#[derive(Clone, Debug)]
pub struct Item {
    pub name: String,
    pub tags: Vec<String>,
    pub kind: String,
    pub body: Value,
    /// Directory relative paths resolve against; `None` for the embedded corpus.
    pub base: Option<PathBuf>,
}

impl Item {
    fn from_json(v: Value, base: Option<&Path>) -> Result<Self> {
        let text = |k: &str| v.get(k).and_then(Value::as_str).map(str::to_string);
        let name = text("name").ok_or_else(|| anyhow!("corpus item without a name"))?;
        let kind = text("kind").ok_or_else(|| anyhow!("item {name} has no kind"))?;
        let tags = v
            .get("tags")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_str).map(str::to_string).collect())
            .unwrap_or_default();
        Ok(Self {
            name,
            tags,
            kind,
            body: v,
            base: base.map(Path::to_path_buf),
        })
    }

    /// Substring of the name, or an exact tag.
    pub fn matches(&self, filter: &str) -> bool {
        self.name.contains(filter) || self.tags.iter().any(|t| t == filter)
    }
}

fn items_of(v: Value, base: Option<&Path>, file: &str) -> Result<Vec<Item>> {
    let Value::Object(mut top) = v else {
        bail!("{file}: corpus file must be an object");
    };
    let Some(Value::Array(items)) = top.remove("items") else {
        bail!("{file}: missing \"items\" array");
    };
    items
        .into_iter()
        .map(|i| Item::from_json(i, base).with_context(|| file.to_string()))
        .collect()
}

pub fn embedded() -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for (file, text) in EMBEDDED {
        out.extend(items_of(serde_json::from_str(text)?, None, file)?);
    }
    Ok(out)
}

/// Every `*.json` file in `dir`, in file-name order.
pub fn from_dir(dir: &Path) -> Result<Vec<Item>> {
    let mut files = std::fs::read_dir(dir)
        .with_context(|| format!("reading corpus directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "json"));
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(items_of(read_json(&f)?, Some(dir), &f.display().to_string())?);
    }
    Ok(out)
}

/// Compares `actual` against the partial `expected`; returns the first
/// mismatch as a path.
pub fn partial_match(expected: &Value, actual: &Value, path: &str) -> std::result::Result<(), String> {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                let p = format!("{path}.{k}");
                match a.get(k) {
                    Some(av) => partial_match(ev, av, &p)?,
                    None => return Err(format!("{p}: missing")),
                }
            }
            Ok(())
        }
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                return Err(format!("{path}: expected {} entries, found {}", e.len(), a.len()));
            }
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                partial_match(ev, av, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        _ if expected == actual => Ok(()),
        _ => Err(format!("{path}: expected {expected}, found {actual}")),
    }
}

fn complement_report(body: &Value) -> Result<Value> {
    let n = relcr::json::usize_from_json(body, "ambient_dim")?;
    let h = parse_h(body.get("h").unwrap_or(&json!([])), n)?;
    let u = parse_subspace(relcr::json::field(body, "u")?, n)?;
    let family = stable_complements(&u, h.generators(), None, None)?;
    Ok(json!({
        "empty": matches!(family.solution, AffineSolution::Empty),
        "parameters": family.dim(),
    }))
}

fn flags_report(body: &Value) -> Result<Value> {
    let n = relcr::json::usize_from_json(body, "ambient_dim")?;
    let (k, _) = parse_k(relcr::json::field(body, "k")?, n)?;
    let minimal = body.get("minimal").and_then(Value::as_bool).unwrap_or(false);
    commands::flags(&k, minimal)
}

fn fixture_report(item: &Item) -> Result<Value> {
    let text = match (&item.base, item.body.get("fixture").and_then(Value::as_str)) {
        (Some(dir), Some(rel)) => {
            let path = dir.join(rel);
            std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
        }
        _ => FIXTURE.to_string(),
    };
    let d = G2Data::from_json(&serde_json::from_str(&text).context("fixture is not JSON")?)
        .context("fixture rejected")?;
    let mut delta_dims = Vec::new();
    for i in [0, 1, 2, 4, 5, 6] {
        delta_dims.push(delta(&Subspace::coordinate(7, &[i])?, &d)?.dim());
    }
    Ok(json!({
        "matches_model": d == build_g2_data()?,
        "alternating": d.is_alternating(),
        "torus_invariant": d.forms_torus_invariant(),
        "delta_dims": delta_dims,
    }))
}

/// Runs one item: the report and, for check and verify items, the exit code.
pub fn run_item(item: &Item) -> Result<(Value, Option<i32>)> {
    let body = &item.body;
    Ok(match item.kind.as_str() {
        "check" => {
            let s = Scenario::from_json(relcr::json::field(body, "scenario")?)?;
            let (r, code) = commands::check(&s)?;
            (r, Some(code))
        }
        "certificate" => {
            let c = Certificate::from_json(relcr::json::field(body, "certificate")?)?;
            let (r, code) = commands::verify(&c)?;
            (r, Some(code))
        }
        "flags" => (flags_report(body)?, None),
        "complement" => (complement_report(body)?, None),
        "g2_fixture" => (fixture_report(item)?, None),
        other => bail!("unknown corpus item kind {other:?}"),
    })
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

pub fn evaluate(item: &Item) -> Outcome {
    let expect = item.body.get("expect").cloned().unwrap_or(json!({}));
    let detail = match run_item(item) {
        Err(e) => Some(format!("error: {e:#}")),
        Ok((report, code)) => {
            let want_code = expect.get("exit").and_then(Value::as_i64);
            match (want_code, code) {
                (Some(w), Some(c)) if w != c as i64 => Some(format!("exit code {c}, expected {w}")),
                (Some(_), None) => Some("item kind has no exit code".into()),
                _ => expect
                    .get("report")
                    .and_then(|e| partial_match(e, &report, "report").err()),
            }
        }
    };
    Outcome {
        name: item.name.clone(),
        passed: detail.is_none(),
        detail,
    }
}

/// Runs the selected items in parallel; outcomes keep corpus order.
pub fn run(items: &[Item], filter: Option<&str>) -> (Value, bool) {
    let selected: Vec<&Item> = items.iter().filter(|i| filter.is_none_or(|f| i.matches(f))).collect();
    let outcomes: Vec<Outcome> = selected.par_iter().map(|i| evaluate(i)).collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let all = passed == outcomes.len();
    let summary = json!({
        "filter": filter,
        "total": outcomes.len(),
        "passed": passed,
        "failed": outcomes.len() - passed,
        "items": outcomes.iter().map(|o| json!({
            "name": o.name,
            "result": if o.passed { "pass" } else { "fail" },
            "detail": o.detail,
        })).collect::<Vec<_>>(),
    });
    (summary, all)
}
