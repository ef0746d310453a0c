use std::collections::HashSet;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::fm::{fm_solve, Inequality};
use super::torus::{weight_classes, TorusK, WeightClasses};
use crate::error::{Error, Result};
use crate::flags::{Flag, GradedDecomposition};
use crate::scalar::{primitive_integer_vector, Rational};

pub const DEFAULT_CLASS_BOUND: usize = 9;

/// Ordered partition of the weight classes: the combinatorial shadow of a
/// parabolic `P_λ` for `λ ∈ Y(K)`. Earlier blocks carry larger weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagType {
    blocks: Vec<Vec<usize>>,
}

/// Integer coefficients `c` of a cocharacter in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CocharacterWitness {
    pub coefficients: Vec<i64>,
}

impl FlagType {
    pub fn new(blocks: Vec<Vec<usize>>, n_classes: usize) -> Result<Self> {
        let mut seen = vec![false; n_classes];
        let mut normalized = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            b.sort_unstable();
            for &c in &b {
                if c >= n_classes || seen[c] {
                    return Err(Error::MalformedPartition(format!(
                        "class {c} out of range or repeated"
                    )));
                }
                seen[c] = true;
            }
            normalized.push(b);
        }
        if normalized.is_empty() || seen.iter().any(|s| !s) {
            return Err(Error::MalformedPartition(
                "blocks must cover every weight class".into(),
            ));
        }
        Ok(Self { blocks: normalized })
    }

    pub fn trivial(n_classes: usize) -> Self {
        Self {
            blocks: vec![(0..n_classes).collect()],
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn coordinate_blocks(&self, wc: &WeightClasses) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut coords: Vec<usize> =
                    b.iter().flat_map(|&c| wc.classes[c].iter().copied()).collect();
                coords.sort_unstable();
                coords
            })
            .collect()
    }

    /// Coordinate masks of the flag members (partial unions of blocks).
    pub fn chain_masks(&self, wc: &WeightClasses) -> Vec<u64> {
        let mut acc = 0u64;
        self.blocks[..self.blocks.len() - 1]
            .iter()
            .map(|b| {
                acc |= wc.coordinate_mask(b);
                acc
            })
            .collect()
    }

    pub fn block_masks(&self, wc: &WeightClasses) -> Vec<u64> {
        self.blocks.iter().map(|b| wc.coordinate_mask(b)).collect()
    }

    pub fn flag(&self, wc: &WeightClasses, ambient_dim: usize) -> Flag {
        Flag::from_coordinate_blocks(ambient_dim, &self.coordinate_blocks(wc))
            .expect("flag types give strictly increasing coordinate chains")
    }

    pub fn decomposition(&self, wc: &WeightClasses, ambient_dim: usize) -> GradedDecomposition {
        GradedDecomposition::coordinate(ambient_dim, &self.coordinate_blocks(wc))
            .expect("blocks partition the coordinates")
    }

    /// Block index of each class.
    pub fn class_block(&self, n_classes: usize) -> Vec<usize> {
        let mut pos = vec![0; n_classes];
        for (i, b) in self.blocks.iter().enumerate() {
            for &c in b {
                pos[c] = i;
            }
        }
        pos
    }

    /// Every block of `self` lies inside a single block of `coarser`.
    pub fn refines(&self, coarser: &FlagType, n_classes: usize) -> bool {
        let pos = coarser.class_block(n_classes);
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&c| pos[c] == pos[b[0]]))
    }
}

/// Reversed block order: the type of `-λ`.
pub fn opposite_type(ft: &FlagType) -> FlagType {
    let mut blocks = ft.blocks.clone();
    blocks.reverse();
    FlagType { blocks }
}

fn difference(a: &[i64], b: &[i64]) -> Vec<Rational> {
    a.iter()
        .zip(b)
        .map(|(x, y)| Rational::from_integer((x - y).into()))
        .collect()
}

/// Constraints on `c` for blocks `prefix` (equal within a block, strictly
/// decreasing between consecutive blocks) and, if given, every class of
/// `below` strictly under the last block.
fn type_constraints(wc: &WeightClasses, prefix: &[Vec<usize>], below: &[usize]) -> Vec<Inequality> {
    let w = &wc.weights;
    let mut sys = Vec::new();
    for block in prefix {
        for pair in block.windows(2) {
            let d = difference(&w[pair[0]], &w[pair[1]]);
            sys.push(Inequality::homogeneous(d.clone(), false));
            sys.push(Inequality::homogeneous(d.into_iter().map(|v| -v).collect(), false));
        }
    }
    for pair in prefix.windows(2) {
        sys.push(Inequality::homogeneous(
            difference(&w[pair[0][0]], &w[pair[1][0]]),
            true,
        ));
    }
    if let Some(last) = prefix.last() {
        for &c in below {
            sys.push(Inequality::homogeneous(difference(&w[last[0]], &w[c]), true));
        }
    }
    sys
}

fn solve_witness(rank: usize, sys: &[Inequality]) -> Result<Option<CocharacterWitness>> {
    let Some(point) = fm_solve(rank, sys) else {
        return Ok(None);
    };
    let coefficients = primitive_integer_vector(&point)
        .iter()
        .map(|v| {
            v.to_i64()
                .ok_or_else(|| Error::InternalInconsistency("witness overflow".into()))
        })
        .collect::<Result<_>>()?;
    Ok(Some(CocharacterWitness { coefficients }))
}

/// Decides whether some `λ ∈ Y(K)` realises `ft`, returning an integer witness.
pub fn feasible(ft: &FlagType, k: &TorusK) -> Result<Option<CocharacterWitness>> {
    let wc = weight_classes(k);
    let ft = FlagType::new(ft.blocks.clone(), wc.len())?;
    solve_witness(k.rank(), &type_constraints(&wc, &ft.blocks, &[]))
}

/// The finite poset `F_K` for a torus `K`, enumerated as flag types.
#[derive(Clone, Debug)]
pub struct FlagPoset {
    ambient_dim: usize,
    classes: WeightClasses,
    types: Vec<(FlagType, CocharacterWitness)>,
    chains: Vec<Vec<u64>>,
    minimal: Vec<bool>,
}

impl FlagPoset {
    pub fn new(k: &TorusK) -> Result<Self> {
        Self::with_bound(k, DEFAULT_CLASS_BOUND)
    }

    pub fn with_bound(k: &TorusK, class_bound: usize) -> Result<Self> {
        let classes = weight_classes(k);
        if classes.len() > class_bound {
            return Err(Error::ClassBoundExceeded {
                classes: classes.len(),
                bound: class_bound,
            });
        }
        let types = enumerate(&classes, k.rank())?;
        let chains: Vec<Vec<u64>> = types.iter().map(|(t, _)| t.chain_masks(&classes)).collect();
        let members: HashSet<&[u64]> = chains.iter().map(Vec::as_slice).collect();
        let minimal = chains
            .iter()
            .map(|chain| {
                let len = chain.len();
                len > 0
                    && (1u64..(1 << len) - 1).all(|mask| {
                        let sub: Vec<u64> = (0..len)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| chain[i])
                            .collect();
                        !members.contains(sub.as_slice())
                    })
            })
            .collect();
        Ok(Self {
            ambient_dim: k.ambient_dim(),
            classes,
            types,
            chains,
            minimal,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn classes(&self) -> &WeightClasses {
        &self.classes
    }

    /// All feasible types including the trivial one, in canonical order.
    pub fn types(&self) -> &[(FlagType, CocharacterWitness)] {
        &self.types
    }

    pub fn chain_masks(&self, index: usize) -> &[u64] {
        &self.chains[index]
    }

    pub fn is_minimal(&self, index: usize) -> bool {
        self.minimal[index]
    }

    pub fn minimal(&self) -> Vec<(FlagType, CocharacterWitness)> {
        self.types
            .iter()
            .zip(&self.minimal)
            .filter(|(_, m)| **m)
            .map(|(t, _)| t.clone())
            .collect()
    }

    pub fn index_of(&self, ft: &FlagType) -> Option<usize> {
        self.types.iter().position(|(t, _)| t == ft)
    }

    /// Index of the type whose flag has exactly these coordinate masks.
    pub fn index_of_chain(&self, masks: &[u64]) -> Option<usize> {
        self.chains.iter().position(|c| c == masks)
    }

    pub fn flag(&self, index: usize) -> Flag {
        self.types[index].0.flag(&self.classes, self.ambient_dim)
    }
}

fn canonical_key(t: &FlagType) -> (usize, &[Vec<usize>]) {
    (t.blocks.len(), &t.blocks)
}

fn enumerate(wc: &WeightClasses, rank: usize) -> Result<Vec<(FlagType, CocharacterWitness)>> {
    let n = wc.len();
    let all: Vec<usize> = (0..n).collect();
    let first_blocks = nonempty_subsets(&all);
    let mut out: Vec<(FlagType, CocharacterWitness)> = first_blocks
        .par_iter()
        .map(|first| {
            let mut found = Vec::new();
            extend(wc, rank, vec![first.clone()], &mut found)?;
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort_by(|a, b| canonical_key(&a.0).cmp(&canonical_key(&b.0)));
    Ok(out)
}

fn extend(
    wc: &WeightClasses,
    rank: usize,
    prefix: Vec<Vec<usize>>,
    found: &mut Vec<(FlagType, CocharacterWitness)>,
) -> Result<()> {
    let used: Vec<usize> = prefix.iter().flatten().copied().collect();
    let rest: Vec<usize> = (0..wc.len()).filter(|c| !used.contains(c)).collect();
    if rest.is_empty() {
        if let Some(w) = solve_witness(rank, &type_constraints(wc, &prefix, &[]))? {
            found.push((FlagType { blocks: prefix }, w));
        }
        return Ok(());
    }
    // every completion places `rest` strictly below the last block
    if solve_witness(rank, &type_constraints(wc, &prefix, &rest))?.is_none() {
        return Ok(());
    }
    for next in nonempty_subsets(&rest) {
        let mut p = prefix.clone();
        p.push(next);
        extend(wc, rank, p, found)?;
    }
    Ok(())
}

fn nonempty_subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (1u64..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect()
        })
        .collect()
}

pub fn enumerate_flag_types(k: &TorusK) -> Result<Vec<(FlagType, CocharacterWitness)>> {
    Ok(FlagPoset::new(k)?.types)
}

pub fn minimal_flags(k: &TorusK) -> Result<Vec<(FlagType, CocharacterWitness)>> {
    Ok(FlagPoset::new(k)?.minimal())
}


#[cfg(test)]
mod example_counts {
    use super::*;

    /// Independent count: brute force over sign patterns of integer `c` in a
    /// box, collecting the distinct flags realised.
    fn realised_flags(k: &TorusK, radius: i64) -> HashSet<Vec<usize>> {
        let mut out = HashSet::new();
        let r = k.rank();
        let mut c = vec![-radius; r];
        loop {
            let w = k.weight_vector(&c).unwrap();
            let blocks = crate::toruscr::torus::weight_blocks(&w);
            let mut masks = Vec::new();
            let mut acc = 0u64;
            for b in &blocks[..blocks.len() - 1] {
                acc |= b.iter().fold(0u64, |m, &i| m | 1 << i);
                masks.push(acc as usize);
            }
            out.insert(masks);
            let mut i = 0;
            while i < r && c[i] == radius {
                c[i] = -radius;
                i += 1;
            }
            if i == r {
                break;
            }
            c[i] += 1;
        }
        out
    }

    #[test]
    fn example_poset_counts() {
        let k = TorusK::new(4, vec![vec![1, 0, 0, -1], vec![0, 1, -1, 0]]).unwrap();
        let poset = FlagPoset::new(&k).unwrap();
        let mut dims: Vec<Vec<usize>> = (0..poset.types().len()).map(|i| poset.flag(i).dims()).collect();
        dims.sort();
        let count = |d: &[usize]| dims.iter().filter(|x| x.as_slice() == d).count();
        assert_eq!(count(&[]), 1);
        assert_eq!(count(&[2]), 4);
        assert_eq!(count(&[1, 3]), 4);
        assert_eq!(count(&[1, 2, 3]), 8);
        assert_eq!(dims.len(), 17);
        assert_eq!(realised_flags(&k, 3).len(), 17);
        let minimal = poset.minimal();
        assert_eq!(minimal.len(), 8);
    }

    #[test]
    fn bruteforce_agrees_with_enumeration_on_full_torus() {
        let k = TorusK::full_diagonal(3).unwrap();
        assert_eq!(FlagPoset::new(&k).unwrap().types().len(), 13);
        assert_eq!(realised_flags(&k, 2).len(), 13);
    }
}
