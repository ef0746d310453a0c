//! Flags of subspaces as stand-ins for parabolic subgroups of `GL(V)`.
//!
//! A flag's stabilizer is a parabolic subgroup; coarser flags have larger
//! stabilizers. Opposition and Levi decompositions are tested linearly.

use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::scalar::{Field, Rational};

/// Strictly increasing chain of proper nonzero subspaces; `V` is implicit at
/// the top and the empty chain is the trivial flag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Flag<T = Rational> {
    ambient_dim: usize,
    chain: Vec<Subspace<T>>,
}

impl<T: Field> Flag<T> {
    pub fn new(ambient_dim: usize, chain: Vec<Subspace<T>>) -> Result<Self> {
        for s in &chain {
            check_dim(ambient_dim, s.ambient_dim())?;
            if s.is_zero() || s.is_full() {
                return Err(Error::InvalidFlag(format!(
                    "member of dimension {} is not proper and nonzero",
                    s.dim()
                )));
            }
        }
        for w in chain.windows(2) {
            if w[0].dim() >= w[1].dim() || !w[1].contains(&w[0])? {
                return Err(Error::InvalidFlag("chain is not strictly increasing".into()));
            }
        }
        Ok(Self { ambient_dim, chain })
    }

    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            chain: Vec::new(),
        }
    }

    /// Flag of coordinate spans `⟨e_i : i ∈ B_1 ∪ … ∪ B_j⟩` for consecutive
    /// blocks; the last block closes the chain at `V`.
    pub fn from_coordinate_blocks(ambient_dim: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut acc = Vec::new();
        let mut chain = Vec::new();
        for block in blocks.iter().take(blocks.len().saturating_sub(1)) {
            acc.extend_from_slice(block);
            chain.push(Subspace::coordinate(ambient_dim, &acc)?);
        }
        Self::new(ambient_dim, chain)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn chain(&self) -> &[Subspace<T>] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }

    /// Sub-flag keeping the members whose positions are set in `mask`.
    pub fn subflag(&self, mask: u64) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            chain: self
                .chain
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, s)| s.clone())
                .collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Flag<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Flag")
            .field("ambient_dim", &self.ambient_dim)
            .field("chain", &self.chain)
            .finish()
    }
}

/// Finitely generated subgroup of `GL(V)`. A subspace is stable under the
/// Zariski closure iff it is stable under every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupH<T = Rational> {
    ambient_dim: usize,
    generators: Vec<Matrix<T>>,
}

impl<T: Field> GroupH<T> {
    pub fn new(ambient_dim: usize, generators: Vec<Matrix<T>>) -> Result<Self> {
        for g in &generators {
            check_dim(ambient_dim, g.nrows())?;
            check_dim(ambient_dim, g.ncols())?;
            if !g.is_invertible() {
                return Err(Error::Singular);
            }
        }
        Ok(Self {
            ambient_dim,
            generators,
        })
    }

    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            generators: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Matrix<T>] {
        &self.generators
    }

    /// Same group extended by further (invertible) generators.
    pub fn with_extra(&self, extra: &[Matrix<T>]) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Self::new(self.ambient_dim, gens)
    }

    pub fn stabilizes(&self, s: &Subspace<T>) -> Result<bool> {
        check_dim(self.ambient_dim, s.ambient_dim())?;
        for g in &self.generators {
            if !s.is_invariant_under(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Direct-sum decomposition `V = V_1 ⊕ … ⊕ V_k`; its stabilizer is a Levi
/// subgroup of `GL(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedDecomposition<T = Rational> {
    ambient_dim: usize,
    pieces: Vec<Subspace<T>>,
}

impl<T: Field> GradedDecomposition<T> {
    pub fn new(ambient_dim: usize, pieces: Vec<Subspace<T>>) -> Result<Self> {
        let mut total = Subspace::zero(ambient_dim);
        let mut dims = 0;
        for p in &pieces {
            check_dim(ambient_dim, p.ambient_dim())?;
            dims += p.dim();
            total = total.sum(p)?;
        }
        if dims != ambient_dim || !total.is_full() {
            return Err(Error::InvalidInput(
                "pieces do not form a direct-sum decomposition".into(),
            ));
        }
        Ok(Self { ambient_dim, pieces })
    }

    pub fn coordinate(ambient_dim: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let pieces = blocks
            .iter()
            .map(|b| Subspace::coordinate(ambient_dim, b))
            .collect::<Result<_>>()?;
        Self::new(ambient_dim, pieces)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[Subspace<T>] {
        &self.pieces
    }
}

/// `f1 ≼ f2`: the stabilizer of `f1` contains that of `f2`, i.e. every
/// member of `f1` occurs in `f2`.
pub fn flag_coarser_eq<T: Field>(f1: &Flag<T>, f2: &Flag<T>) -> Result<bool> {
    check_dim(f1.ambient_dim, f2.ambient_dim)?;
    Ok(f1.chain.iter().all(|s| f2.chain.contains(s)))
}

pub fn is_stable<T: Field>(f: &Flag<T>, h: &GroupH<T>) -> Result<bool> {
    check_dim(f.ambient_dim, h.ambient_dim)?;
    for s in &f.chain {
        if !h.stabilizes(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Opposition<T = Rational> {
    NotOpposite,
    Opposite(GradedDecomposition<T>),
}

impl<T> Opposition<T> {
    pub fn is_opposite(&self) -> bool {
        matches!(self, Opposition::Opposite(_))
    }
}

/// Decides whether two flags are opposite (their stabilizers meet in a common
/// Levi subgroup). With `A_1 ⊂ … ⊂ A_m` and `B_1 ⊂ … ⊂ B_m` this holds iff
/// `A_i ⊕ B_{m+1-i} = V` for every `i`; the graded pieces are
/// `A_i ∩ B_{m+2-i}` with `A_{m+1} = B_{m+1} = V`.
pub fn verify_opposite<T: Field>(f1: &Flag<T>, f2: &Flag<T>) -> Result<Opposition<T>> {
    check_dim(f1.ambient_dim, f2.ambient_dim)?;
    let n = f1.ambient_dim;
    let m = f1.len();
    if f2.len() != m {
        return Ok(Opposition::NotOpposite);
    }
    for i in 0..m {
        let a = &f1.chain[i];
        let b = &f2.chain[m - 1 - i];
        if a.dim() + b.dim() != n || !a.intersect(b)?.is_zero() {
            return Ok(Opposition::NotOpposite);
        }
    }
    let full = Subspace::full(n);
    let a_at = |i: usize| if i == m { &full } else { &f1.chain[i] };
    let b_at = |j: usize| if j == m { &full } else { &f2.chain[j] };
    let pieces = (0..=m)
        .map(|i| a_at(i).intersect(b_at(m - i)))
        .collect::<Result<Vec<_>>>()?;
    match GradedDecomposition::new(n, pieces) {
        Ok(d) => Ok(Opposition::Opposite(d)),
        Err(Error::InvalidInput(_)) => Err(Error::InternalInconsistency(
            "complementary flags produced pieces that are not a decomposition".into(),
        )),
        Err(e) => Err(e),
    }
}

pub fn stabilizes_decomposition<T: Field>(
    d: &GradedDecomposition<T>,
    h: &GroupH<T>,
) -> Result<bool> {
    check_dim(d.ambient_dim, h.ambient_dim)?;
    for p in &d.pieces {
        if !h.stabilizes(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
