use rayon::prelude::*;

use super::complement::{stable_complements, ComplementFamily};
use super::form::{BilinForm, FormKind};
use super::poly::Poly;
use super::pool::SubspacePool;
use super::verdict::{
    aggregate, bilinear_poly, search_family, vector_polys, Obstruction, OppositePair, Outcome,
    Refutation, Search, TriVerdict,
};
use crate::error::{check_dim, Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::flags::{verify_opposite, Flag, GroupH};

/// Generators of `H` followed by their form adjoints; a subspace stable
/// under all of them has an `H`-stable perp.
pub fn adjoint_extended(h: &GroupH, b: &BilinForm) -> Result<Vec<Matrix>> {
    check_dim(b.ambient_dim(), h.ambient_dim())?;
    let mut gens = h.generators().to_vec();
    for g in h.generators() {
        gens.push(b.adjoint(g)?);
    }
    Ok(gens)
}

/// `U ⊆ U^⊥`, collapsing to `(U)` when `U` is maximal isotropic.
pub fn isotropic_flag(u: &Subspace, b: &BilinForm) -> Result<Flag> {
    let p = b.perp(u)?;
    let chain = if p == *u { vec![u.clone()] } else { vec![u.clone(), p] };
    Flag::new(u.ambient_dim(), chain)
}

/// Isotropy conditions `(w_j, w_k) = 0` on the family parameters.
pub fn isotropy_polynomials(family: &ComplementFamily, b: &BilinForm) -> Vec<Poly> {
    let w = vector_polys(family);
    let p = family.n_params();
    let mut out = Vec::new();
    for j in 0..w.len() {
        let start = if b.kind() == FormKind::Symplectic { j + 1 } else { j };
        for k in start..w.len() {
            let q = bilinear_poly(&w[j], b.gram(), &w[k], p);
            if !q.is_zero() {
                out.push(q);
            }
        }
    }
    out
}

/// The complement family searched for a candidate `U`: complements of `U^⊥`
/// stable under the generators and their adjoints.
pub fn classical_family(u: &Subspace, gens: &[Matrix], b: &BilinForm) -> Result<ComplementFamily> {
    stable_complements(&b.perp(u)?, gens, None, None)
}

fn is_candidate(u: &Subspace, gens: &[Matrix], b: &BilinForm) -> Result<bool> {
    if u.is_zero() || !b.is_totally_isotropic(u)? {
        return Ok(false);
    }
    for g in gens {
        if !u.is_invariant_under(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every totally isotropic `U` in the pool with `U`, `U^⊥` stable, looks
/// for a totally isotropic `W` with `W`, `W^⊥` stable and
/// `V = W ⊕ U^⊥ = U ⊕ W^⊥`.
pub fn relcr_classical(
    h: &GroupH,
    b: &BilinForm,
    pool: &SubspacePool,
    elim_cap: usize,
) -> Result<TriVerdict> {
    check_dim(b.ambient_dim(), pool.ambient_dim())?;
    let gens = adjoint_extended(h, b)?;
    let mut candidates = Vec::new();
    for u in pool.subspaces() {
        if is_candidate(u, &gens, b)? {
            candidates.push(u.clone());
        }
    }
    let outcomes = candidates
        .par_iter()
        .map(|u| classical_candidate(u, &gens, b, elim_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(outcomes, pool.len(), pool.is_closed()))
}

fn classical_candidate(u: &Subspace, gens: &[Matrix], b: &BilinForm, elim_cap: usize) -> Result<Outcome> {
    let family = classical_family(u, gens, b)?;
    let flag = isotropic_flag(u, b)?;
    match search_family(&family, |f| Ok(isotropy_polynomials(f, b)), |_| Ok(None), elim_cap)? {
        Search::Found(w) => {
            if !b.is_totally_isotropic(&w)? || !gens.iter().all(|g| w.is_invariant_under(g).unwrap_or(false)) {
                return Err(Error::InternalInconsistency("classical witness fails re-check".into()));
            }
            let opposite = isotropic_flag(&w, b)?;
            if !verify_opposite(&flag, &opposite)?.is_opposite() {
                return Err(Error::InternalInconsistency("classical witness is not opposite".into()));
            }
            Ok(Outcome::Witness(OppositePair { flag, opposite }))
        }
        Search::Refuted(o) => Ok(Outcome::Refuted(Refutation {
            flag,
            obstructions: vec![("isotropic complement of U^⊥".into(), o)],
        })),
        Search::Inconclusive(r) => Ok(Outcome::Inconclusive(r)),
    }
}

/// Rebuilds the candidate's complement family and isotropy equations from
/// `H` and the form, checks they match the refutation, then re-verifies the
/// emptiness proof independently.
pub fn verify_classical_refutation(h: &GroupH, b: &BilinForm, r: &Refutation) -> Result<bool> {
    let gens = adjoint_extended(h, b)?;
    let Some(u) = r.flag.chain().first() else {
        return Ok(false);
    };
    if !is_candidate(u, &gens, b)? || r.flag != isotropic_flag(u, b)? {
        return Ok(false);
    }
    let family = classical_family(u, &gens, b)?;
    let [(_, o)] = r.obstructions.as_slice() else {
        return Ok(false);
    };
    if *o.family() != family {
        return Ok(false);
    }
    let polys_match = match o {
        Obstruction::EmptyLinear { .. } => true,
        Obstruction::NoRationalPoint { polynomials, .. }
        | Obstruction::ExhaustedCandidates { polynomials, .. } => {
            *polynomials == isotropy_polynomials(&family, b)
        }
    };
    Ok(polys_match && o.reverify() == Some(true))
}
