//! JSON reports. Key order is sorted by serde_json, arrays follow the
//! library's canonical orders, so reports are byte-stable.

use relcr::certificate::CertificateReport;
use relcr::exactlin::AffineSolution;
use relcr::json::{flag_to_json, matrix_to_json, rational_to_json, subspace_to_json, vector_to_json};
use relcr::structcr::poly::Poly;
use relcr::structcr::{ComplementFamily, Obstruction, OppositePair, Refutation, TriVerdict};
use relcr::toruscr::{CrosscheckReport, FlagPoset, FlagType, ProductReport, TorusVerdict, WeightClasses};
use serde_json::{json, Value};

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub fn flag_type_json(ft: &FlagType, wc: &WeightClasses) -> Value {
    json!({
        "class_blocks": ft.blocks(),
        "coordinate_blocks": ft.coordinate_blocks(wc).iter().map(|b| one_based(b)).collect::<Vec<_>>(),
    })
}

pub fn torus_verdict_json(v: &TorusVerdict, wc: &WeightClasses) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "flag_type": flag_type_json(&w.flag_type, wc),
            "dims": w.dims,
            "cocharacter": w.cocharacter.coefficients,
            "condition": w.condition,
        })
    });
    json!({
        "method": v.method.name(),
        "verdict": if v.relcr { "relcr" } else { "not_relcr" },
        "witness": witness,
        "stable_types": v.stable_types.len(),
    })
}

pub fn crosscheck_json(r: &CrosscheckReport, wc: &WeightClasses) -> Value {
    json!({
        "verdict": if r.relcr { "relcr" } else { "not_relcr" },
        "agreement": true,
        "methods": [
            torus_verdict_json(&r.definition, wc),
            torus_verdict_json(&r.minimal, wc),
            torus_verdict_json(&r.levi, wc),
        ],
    })
}

pub fn product_json(r: &ProductReport) -> Value {
    let verdict = |c: &CrosscheckReport| if c.relcr { "relcr" } else { "not_relcr" };
    json!({
        "blocks": r.blocks.iter().map(|b| one_based(b)).collect::<Vec<_>>(),
        "product": verdict(&r.product),
        "factors": r.factor_reports.iter().map(verdict).collect::<Vec<_>>(),
        "factor_lattices": r.factors.iter().map(|k| k.lattice_basis().to_vec()).collect::<Vec<_>>(),
        "h_preserves_blocks": r.h_preserves_blocks,
        "k_is_product": r.k_is_product,
        "equivalence": r.equivalence,
    })
}

pub fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({"exponents": e, "coefficient": rational_to_json(c)}))
            .collect(),
    )
}

pub fn family_json(f: &ComplementFamily) -> Value {
    let solution = match &f.solution {
        AffineSolution::Empty => Value::Null,
        AffineSolution::Affine {
            particular,
            homogeneous,
        } => json!({"particular": vector_to_json(particular), "homogeneous": matrix_to_json(homogeneous)}),
    };
    json!({
        "complemented": subspace_to_json(&f.u),
        "complement_coordinates": one_based(&f.complement_coords),
        "parameters": f.dim(),
        "system": matrix_to_json(&f.system),
        "rhs": vector_to_json(&f.rhs),
        "solution": solution,
    })
}

pub fn obstruction_json(side: &str, o: &Obstruction) -> Value {
    let mut v = json!({
        "side": side,
        "kind": o.kind(),
        "family": family_json(o.family()),
        "reverified": o.reverify(),
    });
    match o {
        Obstruction::EmptyLinear { .. } => {}
        Obstruction::NoRationalPoint { polynomials, .. } => {
            v["polynomials"] = polynomials.iter().map(poly_json).collect();
        }
        Obstruction::ExhaustedCandidates {
            polynomials,
            points,
            failures,
            ..
        } => {
            v["polynomials"] = polynomials.iter().map(poly_json).collect();
            v["points"] = points.iter().map(|p| vector_to_json(p)).collect();
            v["failures"] = json!(failures);
        }
    }
    v
}

pub fn pair_json(p: &OppositePair) -> Value {
    json!({"flag": flag_to_json(&p.flag), "opposite": flag_to_json(&p.opposite)})
}

pub fn refutation_json(r: &Refutation, verified: Option<bool>) -> Value {
    json!({
        "flag": flag_to_json(&r.flag),
        "obstructions": r.obstructions.iter().map(|(s, o)| obstruction_json(s, o)).collect::<Vec<_>>(),
        "verified": verified,
    })
}

pub fn tri_verdict_json(v: &TriVerdict, pool_cap: usize, verified: Option<bool>) -> Value {
    json!({
        "verdict": v.value.name(),
        "candidates": v.candidates,
        "pairs": v.pairs.iter().map(pair_json).collect::<Vec<_>>(),
        "refutation": v.refutation.as_ref().map(|r| refutation_json(r, verified)),
        "inconclusive_reason": v.inconclusive_reason,
        "pool": {"size": v.pool_size, "closed": v.pool_closed, "cap": pool_cap},
        "pool_relative": v.is_pool_relative(),
    })
}

/// Flag types with witnesses; `minimal_only` keeps `MF_K`.
pub fn flags_json(p: &FlagPoset, minimal_only: bool) -> Value {
    let wc = p.classes();
    let mut types = Vec::new();
    let mut patterns: Vec<Vec<usize>> = Vec::new();
    for (i, (ft, w)) in p.types().iter().enumerate() {
        if ft.is_trivial() || (minimal_only && !p.is_minimal(i)) {
            continue;
        }
        let flag = p.flag(i);
        let dims = flag.dims();
        if !patterns.contains(&dims) {
            patterns.push(dims.clone());
        }
        let mut t = flag_type_json(ft, wc);
        t["dims"] = json!(dims);
        t["cocharacter"] = json!(w.coefficients);
        t["minimal"] = json!(p.is_minimal(i));
        types.push(t);
    }
    patterns.sort();
    json!({
        "classes": wc.classes.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
        "class_weights": wc.weights,
        "minimal_only": minimal_only,
        "count": types.len(),
        "dimension_patterns": patterns,
        "types": types,
    })
}

pub fn certificate_json(r: &CertificateReport) -> Value {
    json!({
        "accepted": r.accepted,
        "pairs": r.pairs.iter().map(|p| json!({
            "flag_in_fk": p.flag_in_fk,
            "opposite_in_fk": p.opposite_in_fk,
            "flag_stable": p.flag_stable,
            "opposite_stable": p.opposite_stable,
            "opposite": p.opposite,
            "ok": p.ok(),
        })).collect::<Vec<_>>(),
        "covers_stable_minimal": r.covers_stable_minimal,
        "uncovered": r.uncovered.iter().map(flag_to_json).collect::<Vec<_>>(),
    })
}
