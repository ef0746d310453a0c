use anyhow::{bail, Result};
use relcr::certificate::{verify_certificate, KData};
use relcr::g2model::{relcr_g2, verify_g2_refutation};
use relcr::structcr::{
    adjoint_extended, build_pool, relcr_classical, relcr_glu, verify_classical_refutation, TriValue,
};
use relcr::toruscr::{
    relcr_torus_crosscheck_with, relcr_torus_definition_with, relcr_torus_levi_with,
    relcr_torus_minimal_with, relcr_torus_product, FlagPoset,
};
use serde_json::{json, Value};

use crate::report::{certificate_json, crosscheck_json, flags_json, product_json, torus_verdict_json, tri_verdict_json};
use crate::scenario::{Certificate, Mode, Scenario};

/// Verdict exit codes; errors use [`EXIT_INPUT`] and above.
pub const EXIT_RELCR: i32 = 0;
pub const EXIT_NOT_RELCR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

fn relcr_exit(relcr: bool) -> i32 {
    if relcr {
        EXIT_RELCR
    } else {
        EXIT_NOT_RELCR
    }
}

/// Runs the scenario's checker; returns the report and the exit code.
pub fn check(s: &Scenario) -> Result<(Value, i32)> {
    let mut report = json!({
        "scenario": s.name,
        "ambient_dim": s.ambient_dim,
        "k_kind": s.k.kind(),
        "mode": s.mode.name(),
    });
    let code = match &s.k {
        KData::Torus(k) => {
            let poset = FlagPoset::new(k)?;
            let wc = poset.classes();
            let (body, relcr) = match s.mode {
                Mode::Definition => {
                    let v = relcr_torus_definition_with(&s.h, &poset)?;
                    (torus_verdict_json(&v, wc), v.relcr)
                }
                Mode::Minimal => {
                    let v = relcr_torus_minimal_with(&s.h, &poset)?;
                    (torus_verdict_json(&v, wc), v.relcr)
                }
                Mode::Levi => {
                    let v = relcr_torus_levi_with(&s.h, &poset)?;
                    (torus_verdict_json(&v, wc), v.relcr)
                }
                Mode::Crosscheck | Mode::Auto => {
                    let r = relcr_torus_crosscheck_with(&s.h, &poset)?;
                    (crosscheck_json(&r, wc), r.relcr)
                }
            };
            merge(&mut report, body);
            if let Some(blocks) = &s.blocks {
                report["product"] = product_json(&relcr_torus_product(&s.h, k, blocks)?);
            }
            relcr_exit(relcr)
        }
        other => {
            if s.mode != Mode::Auto {
                bail!("mode {:?} needs a torus K; use auto for {}", s.mode.name(), other.kind());
            }
            let extra = match other {
                KData::Classical(b) => adjoint_extended(&s.h, b)?,
                KData::G2(d) => adjoint_extended(&s.h, d.bilinear())?,
                _ => Vec::new(),
            };
            let pool = build_pool(&s.h, &extra, s.options.seeds.as_deref(), s.options.pool_cap)?;
            let v = match other {
                KData::Glu(split) => relcr_glu(&s.h, split, &pool)?,
                KData::Classical(b) => relcr_classical(&s.h, b, &pool, s.options.elim_cap)?,
                KData::G2(d) => relcr_g2(&s.h, d, &pool, s.options.elim_cap)?,
                KData::Torus(_) => unreachable!(),
            };
            let verified = match (&v.refutation, other) {
                (None, _) => None,
                (Some(r), KData::Classical(b)) => Some(verify_classical_refutation(&s.h, b, r)?),
                (Some(r), KData::G2(d)) => Some(verify_g2_refutation(&s.h, d, r)?),
                (Some(r), _) => r.reverify(),
            };
            merge(&mut report, tri_verdict_json(&v, s.options.pool_cap, verified));
            match v.value {
                TriValue::RelCrWitnessed => EXIT_RELCR,
                TriValue::NotRelCrWitnessed => EXIT_NOT_RELCR,
                TriValue::Inconclusive => EXIT_INCONCLUSIVE,
            }
        }
    };
    Ok((report, code))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

/// Enumerates `F_K` (or `MF_K`) for a torus, or for the torus of `G2`.
pub fn flags(k: &KData, minimal_only: bool) -> Result<Value> {
    let torus = match k {
        KData::Torus(t) => t.clone(),
        KData::G2(d) => d.torus().clone(),
        other => bail!("flag enumeration needs a torus or G2 K, got {}", other.kind()),
    };
    let poset = FlagPoset::new(&torus)?;
    let mut v = flags_json(&poset, minimal_only);
    v["k_kind"] = json!(k.kind());
    v["lattice_basis"] = json!(torus.lattice_basis());
    Ok(v)
}

/// Exit 0 when accepted, 1 when rejected.
pub fn verify(c: &Certificate) -> Result<(Value, i32)> {
    let r = verify_certificate(&c.h, &c.claim, &c.k)?;
    let mut v = certificate_json(&r);
    v["certificate"] = json!(c.name);
    v["k_kind"] = json!(c.k.kind());
    Ok((v, if r.accepted { 0 } else { 1 }))
}
