use rayon::prelude::*;
use num_traits::Zero;

use super::model::G2Data;
use crate::error::{check_dim, Error, Result};
use crate::exactlin::{unit_vector, Matrix, Subspace};
use crate::flags::{verify_opposite, Flag, GroupH};
use crate::structcr::poly::Poly;
use crate::structcr::{
    adjoint_extended, stable_complements, ComplementFamily, Obstruction, OppositePair, Refutation,
    SubspacePool, TriVerdict,
};
use crate::structcr::{aggregate, bilinear_poly, search_family, vector_polys, Outcome, Search};

/// Both forms vanish on `u`: `(x, y) = 0` and `f(x, y, ·) = 0` for
/// `x, y ∈ u`. On a line the trilinear condition holds by alternation, so
/// only the bilinear one is tested.
pub fn is_doubly_singular(u: &Subspace, d: &G2Data) -> Result<bool> {
    check_dim(7, u.ambient_dim())?;
    if !(1..=2).contains(&u.dim()) {
        return Err(Error::InvalidInput(format!(
            "doubly singular test needs dimension 1 or 2, got {}",
            u.dim()
        )));
    }
    if !d.bilinear().is_totally_isotropic(u)? {
        return Ok(false);
    }
    if u.dim() == 2 {
        let (x, y) = (u.basis().row(0), u.basis().row(1));
        return Ok((0..7).all(|k| d.trilinear(x, y, &unit_vector(7, k)).is_zero()));
    }
    Ok(true)
}

/// Radical of `(u, v) ↦ f(x, u, v)` for a doubly singular line `⟨x⟩`.
pub fn delta(u: &Subspace, d: &G2Data) -> Result<Subspace> {
    if u.dim() != 1 || !is_doubly_singular(u, d)? {
        return Err(Error::InvalidInput("Δ needs a doubly singular line".into()));
    }
    let x = u.basis().row(0);
    // M_jk = f(x, e_j, e_k) = f(e_j, e_k, x)
    let m = d.contract(x);
    let r = Subspace::span(7, &m.kernel())?;
    if r.dim() != 3 || !r.contains(u)? {
        return Err(Error::InternalInconsistency(format!(
            "Δ has dimension {} or misses the line",
            r.dim()
        )));
    }
    Ok(r)
}

/// `(U ⊂ U^⊥)` for a plane, `(U ⊂ Δ(U) ⊂ Δ(U)^⊥ ⊂ U^⊥)` for a line.
pub fn g2_minimal_flag(u: &Subspace, d: &G2Data) -> Result<Flag> {
    if !is_doubly_singular(u, d)? {
        return Err(Error::InvalidInput("subspace is not doubly singular".into()));
    }
    let b = d.bilinear();
    let chain = if u.dim() == 2 {
        vec![u.clone(), b.perp(u)?]
    } else {
        let du = delta(u, d)?;
        let dp = b.perp(&du)?;
        vec![u.clone(), du, dp, b.perp(u)?]
    };
    Flag::new(7, chain)
}

/// `Σ x_a y_b f(e_a, e_b, z)`.
fn trilinear_poly(x: &[Poly], y: &[Poly], z: &[crate::Rational], d: &G2Data, nvars: usize) -> Poly {
    bilinear_poly(x, &d.contract(z), y, nvars)
}

/// Doubly singular conditions on the family members: the bilinear form on
/// all pairs of spanning vectors and, for planes, `f(w_1, w_2, e_k)`.
pub fn doubly_singular_polynomials(family: &ComplementFamily, d: &G2Data) -> Vec<Poly> {
    let w = vector_polys(family);
    let p = family.n_params();
    let gram = d.bilinear().gram();
    let mut out = Vec::new();
    for j in 0..w.len() {
        for k in j..w.len() {
            out.push(bilinear_poly(&w[j], gram, &w[k], p));
        }
    }
    if w.len() == 2 {
        for k in 0..7 {
            out.push(trilinear_poly(&w[0], &w[1], &unit_vector(7, k), d, p));
        }
    }
    out.retain(|q| !q.is_zero());
    out
}

fn stable_under(s: &Subspace, gens: &[Matrix]) -> Result<bool> {
    for g in gens {
        if !s.is_invariant_under(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A pool member qualifies when it is a doubly singular line or plane whose
/// minimal flag `H` stabilises (`U` and, for lines, `Δ(U)` stable under the
/// generators and their adjoints).
fn is_candidate(u: &Subspace, gens: &[Matrix], d: &G2Data) -> Result<bool> {
    if !(1..=2).contains(&u.dim()) || !is_doubly_singular(u, d)? || !stable_under(u, gens)? {
        return Ok(false);
    }
    if u.dim() == 1 {
        return stable_under(&delta(u, d)?, gens);
    }
    Ok(true)
}

fn family_for(u: &Subspace, gens: &[Matrix], d: &G2Data) -> Result<ComplementFamily> {
    stable_complements(&d.bilinear().perp(u)?, gens, None, None)
}

/// Reason a doubly singular line `W` from the family does not give an
/// opposite of the `{1,3,4,6}` flag through `U`; `None` when it does.
fn line_rejection(flag: &Flag, w: &Subspace, gens: &[Matrix], d: &G2Data) -> Result<Option<String>> {
    if !is_doubly_singular(w, d)? {
        return Ok(Some("W is not doubly singular".into()));
    }
    if !stable_under(&delta(w, d)?, gens)? {
        return Ok(Some("Δ(W) is not stable".into()));
    }
    if !verify_opposite(flag, &g2_minimal_flag(w, d)?)?.is_opposite() {
        return Ok(Some("flags through U and W are not opposite".into()));
    }
    Ok(None)
}

const LABEL_PLANE: &str = "doubly singular plane complementing U^⊥";
const LABEL_LINE: &str = "doubly singular line complementing U^⊥ with stable Δ";

/// Each `H`-stable minimal flag through a doubly singular line or plane from
/// the pool needs an `H`-stable opposite of the same shape.
pub fn relcr_g2(h: &GroupH, d: &G2Data, pool: &SubspacePool, elim_cap: usize) -> Result<TriVerdict> {
    check_dim(7, h.ambient_dim())?;
    check_dim(7, pool.ambient_dim())?;
    let gens = adjoint_extended(h, d.bilinear())?;
    let mut candidates = Vec::new();
    for u in pool.subspaces() {
        if is_candidate(u, &gens, d)? {
            candidates.push(u.clone());
        }
    }
    let outcomes = candidates
        .par_iter()
        .map(|u| g2_candidate(u, &gens, d, elim_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(outcomes, pool.len(), pool.is_closed()))
}

fn g2_candidate(u: &Subspace, gens: &[Matrix], d: &G2Data, elim_cap: usize) -> Result<Outcome> {
    let family = family_for(u, gens, d)?;
    let flag = g2_minimal_flag(u, d)?;
    let equations = |f: &ComplementFamily| Ok(doubly_singular_polynomials(f, d));
    let (search, label) = if u.dim() == 2 {
        (search_family(&family, equations, |_| Ok(None), elim_cap)?, LABEL_PLANE)
    } else {
        let accept = |w: &Subspace| line_rejection(&flag, w, gens, d);
        (search_family(&family, equations, accept, elim_cap)?, LABEL_LINE)
    };
    match search {
        Search::Found(w) => {
            if !is_doubly_singular(&w, d)? || !stable_under(&w, gens)? {
                return Err(Error::InternalInconsistency("G2 witness fails re-check".into()));
            }
            let opposite = g2_minimal_flag(&w, d)?;
            if !verify_opposite(&flag, &opposite)?.is_opposite() {
                return Err(Error::InternalInconsistency("G2 witness is not opposite".into()));
            }
            Ok(Outcome::Witness(OppositePair { flag, opposite }))
        }
        Search::Refuted(o) => Ok(Outcome::Refuted(Refutation {
            flag,
            obstructions: vec![(label.into(), o)],
        })),
        Search::Inconclusive(r) => Ok(Outcome::Inconclusive(r)),
    }
}

/// Rebuilds the candidate's family and equations from `H` and the model,
/// compares them with the refutation and re-checks its proof; for listed
/// rational points, each is re-tested against the opposite conditions.
pub fn verify_g2_refutation(h: &GroupH, d: &G2Data, r: &Refutation) -> Result<bool> {
    let gens = adjoint_extended(h, d.bilinear())?;
    let Some(u) = r.flag.chain().first() else {
        return Ok(false);
    };
    if !is_candidate(u, &gens, d)? || r.flag != g2_minimal_flag(u, d)? {
        return Ok(false);
    }
    let family = family_for(u, &gens, d)?;
    let [(_, o)] = r.obstructions.as_slice() else {
        return Ok(false);
    };
    if *o.family() != family {
        return Ok(false);
    }
    let ok = match o {
        Obstruction::EmptyLinear { .. } => true,
        Obstruction::NoRationalPoint { polynomials, .. } => {
            *polynomials == doubly_singular_polynomials(&family, d)
        }
        Obstruction::ExhaustedCandidates {
            polynomials, points, ..
        } => {
            if *polynomials != doubly_singular_polynomials(&family, d) || u.dim() != 1 {
                return Ok(false);
            }
            for t in points {
                let Some(w) = family.member(t)? else {
                    return Ok(false);
                };
                if line_rejection(&r.flag, &w, &gens, d)?.is_none() {
                    return Ok(false);
                }
            }
            true
        }
    };
    Ok(ok && o.reverify() == Some(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2model::model::build_g2_data;
    use crate::scalar::{int, rat, Rational};
    use crate::structcr::{build_pool, TriValue};

    fn coord(idx: &[usize]) -> Subspace {
        Subspace::coordinate(7, idx).unwrap()
    }

    fn run(h: &GroupH, d: &G2Data) -> TriVerdict {
        let pool = build_pool(h, &adjoint_extended(h, d.bilinear()).unwrap(), None, 256).unwrap();
        relcr_g2(h, d, &pool, 2).unwrap()
    }

    fn block_generators(blocks: &[&[usize]], unipotent_radical: bool) -> Vec<Matrix> {
        let mut gens = Vec::new();
        let level = |i: usize| blocks.iter().position(|b| b.contains(&i)).unwrap();
        for i in 0..7 {
            let mut g = Matrix::<Rational>::identity(7);
            g[(i, i)] = int(2);
            gens.push(g);
            for j in 0..7 {
                let same = level(i) == level(j);
                if i != j && (same || (unipotent_radical && level(i) < level(j))) {
                    let mut g = Matrix::identity(7);
                    g[(i, j)] = int(1);
                    gens.push(g);
                }
            }
        }
        gens
    }

    #[test]
    fn doubly_singular_examples() {
        let d = build_g2_data().unwrap();
        assert!(is_doubly_singular(&coord(&[0]), &d).unwrap());
        assert!(!is_doubly_singular(&coord(&[3]), &d).unwrap());
        assert!(is_doubly_singular(&coord(&[0, 1]), &d).unwrap());
        // isotropic but f(e1, e5, e6) ≠ 0
        assert!(!is_doubly_singular(&coord(&[0, 4]), &d).unwrap());
        assert!(is_doubly_singular(&coord(&[0, 1, 2]), &d).is_err());
    }

    #[test]
    fn delta_of_coordinate_lines() {
        let d = build_g2_data().unwrap();
        assert_eq!(delta(&coord(&[0]), &d).unwrap(), coord(&[0, 1, 2]));
        for i in [0, 1, 2, 4, 5, 6] {
            let f = g2_minimal_flag(&coord(&[i]), &d).unwrap();
            assert_eq!(f.dims(), vec![1, 3, 4, 6]);
        }
        assert!(delta(&coord(&[3]), &d).is_err());
    }

    #[test]
    fn delta_is_torus_equivariant() {
        let d = build_g2_data().unwrap();
        let g = Matrix::diagonal(&[int(2), int(3), rat(2, 3), int(1), rat(3, 2), rat(1, 3), rat(1, 2)]);
        let x = Subspace::from_vectors(7, vec![vec![int(1), int(0), int(0), int(0), int(0), int(0), int(0)]]).unwrap();
        let gx = x.image_under(&g).unwrap();
        assert_eq!(delta(&gx, &d).unwrap(), delta(&x, &d).unwrap().image_under(&g).unwrap());
    }

    #[test]
    fn plane_flags_and_coordinate_opposites() {
        let d = build_g2_data().unwrap();
        let f = g2_minimal_flag(&coord(&[0, 1]), &d).unwrap();
        assert_eq!(f.dims(), vec![2, 5]);
        let o = g2_minimal_flag(&coord(&[5, 6]), &d).unwrap();
        assert!(verify_opposite(&f, &o).unwrap().is_opposite());
    }

    #[test]
    fn levi_of_plane_stabiliser() {
        let d = build_g2_data().unwrap();
        let h = GroupH::new(7, block_generators(&[&[0, 1], &[2, 3, 4], &[5, 6]], false)).unwrap();
        let v = run(&h, &d);
        assert_eq!(v.value, TriValue::RelCrWitnessed);
        assert!(v.pairs.iter().all(|p| p.flag.dims() == vec![2, 5]));
        let target = g2_minimal_flag(&coord(&[5, 6]), &d).unwrap();
        assert!(v
            .pairs
            .iter()
            .any(|p| p.flag.chain()[0] == coord(&[0, 1]) && p.opposite == target));
    }

    #[test]
    fn parabolic_of_plane_is_refuted() {
        let d = build_g2_data().unwrap();
        let h = GroupH::new(7, block_generators(&[&[0, 1], &[2, 3, 4], &[5, 6]], true)).unwrap();
        let v = run(&h, &d);
        assert_eq!(v.value, TriValue::NotRelCrWitnessed);
        let r = v.refutation.unwrap();
        assert_eq!(r.flag.dims(), vec![2, 5]);
        assert!(verify_g2_refutation(&h, &d, &r).unwrap());
    }

    #[test]
    fn torus_itself() {
        let d = build_g2_data().unwrap();
        let g = Matrix::diagonal(&[int(2), int(3), rat(2, 3), int(1), rat(3, 2), rat(1, 3), rat(1, 2)]);
        let v = run(&GroupH::new(7, vec![g]).unwrap(), &d);
        assert_eq!(v.value, TriValue::RelCrWitnessed);
        // six coordinate lines and six coordinate planes
        assert_eq!(v.candidates, 12);
    }

    #[test]
    fn unipotent_through_zero_weight_line() {
        let d = build_g2_data().unwrap();
        let order = [3, 0, 1, 2, 4, 5, 6];
        let mut g = Matrix::<Rational>::identity(7);
        for w in order.windows(2) {
            g[(w[0], w[1])] = int(1);
        }
        let v = run(&GroupH::new(7, vec![g]).unwrap(), &d);
        assert_eq!(v.value, TriValue::RelCrWitnessed);
        assert_eq!(v.candidates, 0);
    }
}
