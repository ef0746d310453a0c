use rayon::prelude::*;

use super::complement::stable_complements;
use super::pool::SubspacePool;
use super::verdict::{aggregate, search_family, OppositePair, Outcome, Refutation, Search, TriVerdict};
use crate::error::{check_dim, Error, Result};
use crate::exactlin::Subspace;
use crate::flags::{verify_opposite, Flag, GroupH};

/// `V = U ⊕ Ũ` with `K = GL(U)` acting trivially on `Ũ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluSplit {
    u: Subspace,
    u_tilde: Subspace,
}

impl GluSplit {
    pub fn new(u: Subspace, u_tilde: Subspace) -> Result<Self> {
        check_dim(u.ambient_dim(), u_tilde.ambient_dim())?;
        if u.dim() + u_tilde.dim() != u.ambient_dim() || !u.intersect(&u_tilde)?.is_zero() {
            return Err(Error::InvalidInput("U and Ũ are not complementary".into()));
        }
        Ok(Self { u, u_tilde })
    }

    pub fn ambient_dim(&self) -> usize {
        self.u.ambient_dim()
    }

    pub fn u(&self) -> &Subspace {
        &self.u
    }

    pub fn u_tilde(&self) -> &Subspace {
        &self.u_tilde
    }

    /// Proper nonzero `W` with `W ⊆ U` or `Ũ ⊆ W`: the members of `S_K`.
    pub fn is_admissible(&self, w: &Subspace) -> Result<bool> {
        Ok(!w.is_zero() && !w.is_full() && (self.u.contains(w)? || w.contains(&self.u_tilde)?))
    }
}

/// Each pool member `W'` in `S_K` stabilised by `H` needs an `H`-stable
/// complement in `S_K`; both shapes (inside `U`, containing `Ũ`) are searched.
pub fn relcr_glu(h: &GroupH, split: &GluSplit, pool: &SubspacePool) -> Result<TriVerdict> {
    let n = split.ambient_dim();
    check_dim(n, h.ambient_dim())?;
    check_dim(n, pool.ambient_dim())?;
    let mut candidates = Vec::new();
    for w in pool.subspaces() {
        if split.is_admissible(w)? && h.stabilizes(w)? {
            candidates.push(w.clone());
        }
    }
    let outcomes = candidates
        .par_iter()
        .map(|w| glu_candidate(h, split, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(outcomes, pool.len(), pool.is_closed()))
}

fn glu_candidate(h: &GroupH, split: &GluSplit, w: &Subspace) -> Result<Outcome> {
    let n = split.ambient_dim();
    let sides = [
        ("inside U", Some(split.u()), None),
        ("containing Ũ", None, Some(split.u_tilde())),
    ];
    let mut obstructions = Vec::new();
    for (label, inside, containing) in sides {
        let family = stable_complements(w, h.generators(), inside, containing)?;
        match search_family(&family, |_| Ok(Vec::new()), |_| Ok(None), 0)? {
            Search::Found(c) => {
                if !split.is_admissible(&c)? || !h.stabilizes(&c)? {
                    return Err(Error::InternalInconsistency(
                        "complement found outside S_K or not stable".into(),
                    ));
                }
                let flag = Flag::new(n, vec![w.clone()])?;
                let opposite = Flag::new(n, vec![c])?;
                if !verify_opposite(&flag, &opposite)?.is_opposite() {
                    return Err(Error::InternalInconsistency("complement is not opposite".into()));
                }
                return Ok(Outcome::Witness(OppositePair { flag, opposite }));
            }
            Search::Refuted(o) => obstructions.push((label.to_string(), o)),
            Search::Inconclusive(r) => return Ok(Outcome::Inconclusive(r)),
        }
    }
    Ok(Outcome::Refuted(Refutation {
        flag: Flag::new(n, vec![w.clone()])?,
        obstructions,
    }))
}
