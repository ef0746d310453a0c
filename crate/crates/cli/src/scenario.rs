//! Scenario and certificate files.
//!
//! Coordinates are one-based in every file and report (`e1` is coordinate 1).
//! Matrices are arrays of rows of rationals (`"p/q"` strings or integers) or
//! a single string with rows separated by `;`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use relcr::certificate::KData;
use relcr::exactlin::{Matrix, Subspace};
use relcr::flags::{Flag, GroupH};
use relcr::g2model::load_g2_fixture;
use relcr::json::{field, flag_from_json, int_matrix_from_json, vector_from_json};
use relcr::scalar::parse_rational;
use relcr::structcr::{BilinForm, FormKind, GluSplit, DEFAULT_ELIM_CAP, DEFAULT_POOL_CAP};
use relcr::toruscr::TorusK;
use relcr::Rational;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Definition,
    Minimal,
    Levi,
    Crosscheck,
    Auto,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "definition" => Mode::Definition,
            "minimal" => Mode::Minimal,
            "levi" => Mode::Levi,
            "crosscheck" => Mode::Crosscheck,
            "auto" => Mode::Auto,
            _ => bail!("unknown mode {s:?} (definition, minimal, levi, crosscheck, auto)"),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Definition => "definition",
            Mode::Minimal => "minimal",
            Mode::Levi => "levi",
            Mode::Crosscheck => "crosscheck",
            Mode::Auto => "auto",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub pool_cap: usize,
    pub elim_cap: usize,
    pub seeds: Option<Vec<Vec<Rational>>>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            pool_cap: DEFAULT_POOL_CAP,
            elim_cap: DEFAULT_ELIM_CAP,
            seeds: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: Option<String>,
    pub ambient_dim: usize,
    pub h: GroupH,
    pub k: KData,
    /// Torus only: zero-based coordinate blocks for the product criterion.
    pub blocks: Option<Vec<Vec<usize>>>,
    pub mode: Mode,
    pub options: Options,
}

/// `"1 0; 0 1"`: rows split on `;`, entries on whitespace or commas.
pub fn parse_matrix_string(s: &str, n: usize) -> Result<Matrix> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| parse_rational(t).map_err(|e| anyhow!(e)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("malformed matrix string {s:?}"))?;
    Matrix::from_rows(n, rows).with_context(|| format!("malformed matrix string {s:?}"))
}

pub fn parse_matrix(v: &Value, n: usize) -> Result<Matrix> {
    let m = match v {
        Value::String(s) => parse_matrix_string(s, n)?,
        _ => relcr::json::matrix_from_json(v, n).context("malformed matrix")?,
    };
    if m.nrows() != n {
        bail!("matrix has {} rows, expected {n}", m.nrows());
    }
    Ok(m)
}

/// Array of generators, or `{"generators": [...]}`; empty means trivial.
pub fn parse_h(v: &Value, n: usize) -> Result<GroupH> {
    let gens = v.get("generators").unwrap_or(v);
    let list = gens.as_array().ok_or_else(|| anyhow!("H must be a list of generator matrices"))?;
    let mats = list
        .iter()
        .enumerate()
        .map(|(i, g)| parse_matrix(g, n).with_context(|| format!("generator {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupH::new(n, mats)?)
}

fn one_based(v: &Value, n: usize) -> Result<Vec<usize>> {
    let list = v.as_array().ok_or_else(|| anyhow!("expected a list of coordinates"))?;
    list.iter()
        .map(|x| match x.as_u64() {
            Some(i) if (1..=n as u64).contains(&i) => Ok(i as usize - 1),
            _ => bail!("coordinate {x} outside 1..={n}"),
        })
        .collect()
}

/// A subspace as basis rows, or `{"coordinates": [i, …]}` (one-based).
pub fn parse_subspace(v: &Value, n: usize) -> Result<Subspace> {
    if let Some(c) = v.get("coordinates") {
        return Ok(Subspace::coordinate(n, &one_based(c, n)?)?);
    }
    Ok(Subspace::span(n, &parse_matrix_rows(v, n)?)?)
}

fn parse_matrix_rows(v: &Value, n: usize) -> Result<Matrix> {
    match v {
        Value::String(s) => parse_matrix_string(s, n),
        _ => Ok(relcr::json::matrix_from_json(v, n)?),
    }
}

fn parse_form(v: &Value, n: usize) -> Result<BilinForm> {
    let kind = match v.get("kind").and_then(Value::as_str) {
        Some("symplectic") => FormKind::Symplectic,
        Some("orthogonal") => FormKind::Orthogonal,
        _ => bail!("form kind must be \"symplectic\" or \"orthogonal\""),
    };
    match v.get("gram") {
        Some(g) => Ok(BilinForm::new(parse_matrix(g, n)?, kind)?),
        None if v.get("standard").and_then(Value::as_bool) == Some(true) => Ok(match kind {
            FormKind::Symplectic => BilinForm::standard_symplectic(n)?,
            FormKind::Orthogonal => BilinForm::split_orthogonal(n)?,
        }),
        None => bail!("form needs \"gram\" or \"standard\": true"),
    }
}

/// `K` description: `{"kind": "torus" | "glu" | "classical" | "g2", …}`.
/// Returns the torus blocks alongside when given.
pub fn parse_k(v: &Value, n: usize) -> Result<(KData, Option<Vec<Vec<usize>>>)> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| anyhow!("K needs a \"kind\""))?;
    let k = match kind {
        "torus" => KData::Torus(TorusK::new(n, int_matrix_from_json(field(v, "lattice_basis")?)?)?),
        "glu" => KData::Glu(GluSplit::new(
            parse_subspace(field(v, "u")?, n).context("U")?,
            parse_subspace(field(v, "u_tilde")?, n).context("Ũ")?,
        )?),
        "classical" => KData::Classical(parse_form(field(v, "form")?, n)?),
        "g2" => {
            if n != 7 {
                bail!("G2 needs ambient dimension 7, got {n}");
            }
            KData::G2(Box::new(load_g2_fixture()?))
        }
        other => bail!("unknown K kind {other:?}"),
    };
    let blocks = match v.get("blocks") {
        None => None,
        Some(b) => {
            if !matches!(k, KData::Torus(_)) {
                bail!("\"blocks\" is only meaningful for a torus");
            }
            let list = b.as_array().ok_or_else(|| anyhow!("blocks must be a list"))?;
            Some(list.iter().map(|x| one_based(x, n)).collect::<Result<Vec<_>>>()?)
        }
    };
    Ok((k, blocks))
}

pub fn parse_seeds(v: &Value, n: usize) -> Result<Vec<Vec<Rational>>> {
    let list = v.as_array().ok_or_else(|| anyhow!("seeds must be a list of vectors"))?;
    list.iter()
        .map(|s| {
            let x = vector_from_json(s)?;
            if x.len() != n {
                bail!("seed of length {} in dimension {n}", x.len());
            }
            Ok(x)
        })
        .collect()
}

fn ambient_dim(v: &Value) -> Result<usize> {
    let n = relcr::json::usize_from_json(v, "ambient_dim")?;
    if n == 0 {
        bail!("ambient_dim must be positive");
    }
    Ok(n)
}

impl Scenario {
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = ambient_dim(v)?;
        let h = parse_h(v.get("h").unwrap_or(&Value::Array(Vec::new())), n).context("H")?;
        let (k, blocks) = parse_k(field(v, "k")?, n).context("K")?;
        let mode = match v.get("mode").and_then(Value::as_str) {
            Some(m) => Mode::parse(m)?,
            None => Mode::Auto,
        };
        let mut options = Options::default();
        if let Some(o) = v.get("options") {
            if let Some(c) = o.get("pool_cap") {
                options.pool_cap = c.as_u64().ok_or_else(|| anyhow!("pool_cap must be a count"))? as usize;
            }
            if let Some(c) = o.get("elim_cap") {
                options.elim_cap = c.as_u64().ok_or_else(|| anyhow!("elim_cap must be a count"))? as usize;
            }
            if let Some(s) = o.get("seeds") {
                options.seeds = Some(parse_seeds(s, n)?);
            }
        }
        Ok(Self {
            name: v.get("name").and_then(Value::as_str).map(str::to_string),
            ambient_dim: n,
            h,
            k,
            blocks,
            mode,
            options,
        })
    }
}

/// Scenario fields plus `"claim": [{"flag": …, "opposite": …}, …]`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub name: Option<String>,
    pub h: GroupH,
    pub k: KData,
    pub claim: Vec<(Flag, Flag)>,
}

fn parse_flag(v: &Value, n: usize) -> Result<Flag> {
    let chain = v.get("chain").unwrap_or(v);
    let list = chain.as_array().ok_or_else(|| anyhow!("a flag is a list of subspaces"))?;
    if list.iter().all(|s| s.get("coordinates").is_none()) {
        return Ok(flag_from_json(chain, n)?);
    }
    let members = list.iter().map(|s| parse_subspace(s, n)).collect::<Result<Vec<_>>>()?;
    Ok(Flag::new(n, members)?)
}

impl Certificate {
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = ambient_dim(v)?;
        let h = parse_h(v.get("h").unwrap_or(&Value::Array(Vec::new())), n).context("H")?;
        let (k, _) = parse_k(field(v, "k")?, n).context("K")?;
        let claim = field(v, "claim")?
            .as_array()
            .ok_or_else(|| anyhow!("claim must be a list of pairs"))?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let pair = || -> Result<(Flag, Flag)> {
                    Ok((parse_flag(field(p, "flag")?, n)?, parse_flag(field(p, "opposite")?, n)?))
                };
                pair().with_context(|| format!("claimed pair {}", i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: v.get("name").and_then(Value::as_str).map(str::to_string),
            h,
            k,
            claim,
        })
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
