use num_traits::Zero;

use super::torus::TorusK;
use super::types::{opposite_type, CocharacterWitness, FlagPoset, FlagType};
use crate::error::{check_dim, Error, Result};
use crate::flags::{verify_opposite, GroupH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Definition,
    Minimal,
    Levi,
    /// Opposites searched over all of `F_K` rather than `MF_K`.
    BruteForce,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Definition => "definition",
            Method::Minimal => "minimal",
            Method::Levi => "levi",
            Method::BruteForce => "bruteforce",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusWitness {
    pub flag_type: FlagType,
    pub cocharacter: CocharacterWitness,
    pub dims: Vec<usize>,
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusVerdict {
    pub method: Method,
    pub relcr: bool,
    pub witness: Option<TorusWitness>,
    /// Nontrivial members of `F_K` stabilised by `H`, canonical order.
    pub stable_types: Vec<FlagType>,
}

/// `reach[c]`: coordinates `r` with `g[r][c] != 0` for some generator `g`.
/// A coordinate span `S` is `H`-stable iff `reach[c] ⊆ S` for all `c ∈ S`.
#[derive(Clone, Debug)]
pub struct StabilityOracle {
    reach: Vec<u64>,
}

impl StabilityOracle {
    pub fn new(h: &GroupH, n: usize) -> Result<Self> {
        check_dim(n, h.ambient_dim())?;
        let mut reach = vec![0u64; n];
        for g in h.generators() {
            for (c, mask) in reach.iter_mut().enumerate() {
                for r in 0..n {
                    if !g[(r, c)].is_zero() {
                        *mask |= 1 << r;
                    }
                }
            }
        }
        Ok(Self { reach })
    }

    pub fn span_stable(&self, mask: u64) -> bool {
        self.reach
            .iter()
            .enumerate()
            .all(|(c, &r)| mask >> c & 1 == 0 || r & !mask == 0)
    }

    pub fn all_stable(&self, masks: &[u64]) -> bool {
        masks.iter().all(|&m| self.span_stable(m))
    }
}

struct Context<'a> {
    poset: &'a FlagPoset,
    oracle: StabilityOracle,
    stable: Vec<usize>,
}

impl<'a> Context<'a> {
    fn new(h: &GroupH, poset: &'a FlagPoset) -> Result<Self> {
        let oracle = StabilityOracle::new(h, poset.ambient_dim())?;
        let stable = (0..poset.types().len())
            .filter(|&i| !poset.types()[i].0.is_trivial() && oracle.all_stable(poset.chain_masks(i)))
            .collect();
        Ok(Self {
            poset,
            oracle,
            stable,
        })
    }

    fn witness(&self, i: usize, condition: &str) -> TorusWitness {
        let (t, c) = &self.poset.types()[i];
        TorusWitness {
            flag_type: t.clone(),
            cocharacter: c.clone(),
            dims: self.poset.flag(i).dims(),
            condition: condition.to_string(),
        }
    }

    fn verdict(&self, method: Method, witness: Option<TorusWitness>, relcr: bool) -> TorusVerdict {
        TorusVerdict {
            method,
            relcr,
            witness,
            stable_types: self
                .stable
                .iter()
                .map(|&i| self.poset.types()[i].0.clone())
                .collect(),
        }
    }

    fn levi_stable(&self, i: usize) -> bool {
        let classes = self.poset.classes();
        self.poset.types()[i]
            .0
            .block_masks(classes)
            .iter()
            .all(|&m| self.oracle.span_stable(m))
    }
}

/// `H ⊆ P_λ ⇒ H ⊆ L_λ` for every `λ ∈ Y(K)`; a torus has no unipotent part
/// to conjugate by.
pub fn relcr_torus_definition_with(h: &GroupH, poset: &FlagPoset) -> Result<TorusVerdict> {
    let cx = Context::new(h, poset)?;
    let bad = cx.stable.iter().copied().find(|&i| !cx.levi_stable(i));
    Ok(match bad {
        Some(i) => cx.verdict(
            Method::Definition,
            Some(cx.witness(i, "H stabilises the flag of λ but not its graded pieces")),
            false,
        ),
        None => cx.verdict(Method::Definition, None, true),
    })
}

/// Every `H`-stable member of `MF_K` has an `H`-stable opposite in `MF_K`.
pub fn relcr_torus_minimal_with(h: &GroupH, poset: &FlagPoset) -> Result<TorusVerdict> {
    let cx = Context::new(h, poset)?;
    let classes = poset.classes();
    let bad = cx.stable.iter().copied().find(|&i| {
        poset.is_minimal(i)
            && !cx
                .oracle
                .all_stable(&opposite_type(&poset.types()[i].0).chain_masks(classes))
    });
    Ok(match bad {
        Some(i) => cx.verdict(
            Method::Minimal,
            Some(cx.witness(i, "H-stable minimal flag whose opposite is not H-stable")),
            false,
        ),
        None => cx.verdict(Method::Minimal, None, true),
    })
}

/// Search for `λ*` with `H ⊆ L_λ*` and every `H`-stable `μ` constant on the
/// blocks of `λ*` (relative irreducibility inside `L_λ*`).
pub fn relcr_torus_levi_with(h: &GroupH, poset: &FlagPoset) -> Result<TorusVerdict> {
    let cx = Context::new(h, poset)?;
    let n_classes = poset.classes().len();
    // canonical order starts with the trivial type
    let found = (0..poset.types().len()).find(|&i| {
        let lambda = &poset.types()[i].0;
        cx.levi_stable(i)
            && cx
                .stable
                .iter()
                .all(|&j| lambda.refines(&poset.types()[j].0, n_classes))
    });
    Ok(match found {
        Some(i) => cx.verdict(
            Method::Levi,
            Some(cx.witness(i, "H ≤ L_λ* and H is relatively L_λ*-irreducible")),
            true,
        ),
        None => {
            let w = cx.stable.first().map(|&i| {
                cx.witness(i, "no λ* with H ≤ L_λ* refining every H-stable flag type")
            });
            cx.verdict(Method::Levi, w, false)
        }
    })
}

/// Every `H`-stable member of `F_K` has an `H`-stable opposite in `F_K`,
/// opposition decided on the subspaces themselves.
pub fn relcr_torus_bruteforce_with(h: &GroupH, poset: &FlagPoset) -> Result<TorusVerdict> {
    let cx = Context::new(h, poset)?;
    let flags: Vec<_> = (0..poset.types().len()).map(|i| poset.flag(i)).collect();
    let mut bad = None;
    for &i in &cx.stable {
        let mut has_opposite = false;
        for &j in &cx.stable {
            if flags[j].len() == flags[i].len() && verify_opposite(&flags[i], &flags[j])?.is_opposite() {
                has_opposite = true;
                break;
            }
        }
        if !has_opposite {
            bad = Some(i);
            break;
        }
    }
    Ok(match bad {
        Some(i) => cx.verdict(
            Method::BruteForce,
            Some(cx.witness(i, "H-stable flag with no H-stable opposite in F_K")),
            false,
        ),
        None => cx.verdict(Method::BruteForce, None, true),
    })
}

pub fn relcr_torus_definition(h: &GroupH, k: &TorusK) -> Result<TorusVerdict> {
    relcr_torus_definition_with(h, &FlagPoset::new(k)?)
}

pub fn relcr_torus_minimal(h: &GroupH, k: &TorusK) -> Result<TorusVerdict> {
    relcr_torus_minimal_with(h, &FlagPoset::new(k)?)
}

pub fn relcr_torus_levi(h: &GroupH, k: &TorusK) -> Result<TorusVerdict> {
    relcr_torus_levi_with(h, &FlagPoset::new(k)?)
}

pub fn relcr_torus_bruteforce(h: &GroupH, k: &TorusK) -> Result<TorusVerdict> {
    relcr_torus_bruteforce_with(h, &FlagPoset::new(k)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub relcr: bool,
    pub definition: TorusVerdict,
    pub minimal: TorusVerdict,
    pub levi: TorusVerdict,
}

pub fn relcr_torus_crosscheck_with(h: &GroupH, poset: &FlagPoset) -> Result<CrosscheckReport> {
    let definition = relcr_torus_definition_with(h, poset)?;
    let minimal = relcr_torus_minimal_with(h, poset)?;
    let levi = relcr_torus_levi_with(h, poset)?;
    if definition.relcr != minimal.relcr || minimal.relcr != levi.relcr {
        return Err(Error::InternalInconsistency(format!(
            "checkers disagree: definition={}, minimal={}, levi={}",
            definition.relcr, minimal.relcr, levi.relcr
        )));
    }
    Ok(CrosscheckReport {
        relcr: definition.relcr,
        definition,
        minimal,
        levi,
    })
}

pub fn relcr_torus_crosscheck(h: &GroupH, k: &TorusK) -> Result<CrosscheckReport> {
    relcr_torus_crosscheck_with(h, &FlagPoset::new(k)?)
}

/// Indices of nontrivial members of `F_K` whose chain is not the union of the
/// chains of the minimal flags it refines. Empty when the poset is sound.
pub fn minimal_cover_failures(poset: &FlagPoset) -> Vec<usize> {
    let minimal: Vec<usize> = (0..poset.types().len()).filter(|&i| poset.is_minimal(i)).collect();
    (0..poset.types().len())
        .filter(|&i| !poset.types()[i].0.is_trivial())
        .filter(|&i| {
            let chain = poset.chain_masks(i);
            let mut covered: Vec<u64> = minimal
                .iter()
                .map(|&j| poset.chain_masks(j))
                .filter(|sub| sub.iter().all(|m| chain.contains(m)))
                .flat_map(|sub| sub.iter().copied())
                .collect();
            covered.sort_unstable();
            covered.dedup();
            let mut expected = chain.to_vec();
            expected.sort_unstable();
            covered != expected
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Matrix;
    use crate::scalar::{int, Rational};

    fn example() -> TorusK {
        TorusK::new(4, vec![vec![1, 0, 0, -1], vec![0, 1, -1, 0]]).unwrap()
    }

    /// Generators of the full stabiliser of the coordinate chain given by
    /// `level[i]`: `E_rc` allowed when `level[r] <= level[c]`.
    fn stabiliser(level: &[usize]) -> GroupH {
        let n = level.len();
        let mut gens = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if r != c && level[r] <= level[c] {
                    let mut g = Matrix::<Rational>::identity(n);
                    g[(r, c)] = int(1);
                    gens.push(g);
                }
            }
            let mut d = Matrix::<Rational>::identity(n);
            d[(r, r)] = int(2);
            gens.push(d);
        }
        GroupH::new(n, gens).unwrap()
    }

    fn all(h: &GroupH, k: &TorusK) -> Vec<bool> {
        let poset = FlagPoset::new(k).unwrap();
        vec![
            relcr_torus_definition_with(h, &poset).unwrap().relcr,
            relcr_torus_minimal_with(h, &poset).unwrap().relcr,
            relcr_torus_levi_with(h, &poset).unwrap().relcr,
            relcr_torus_bruteforce_with(h, &poset).unwrap().relcr,
        ]
    }

    #[test]
    fn example_stabiliser_of_hyperplane() {
        let h = stabiliser(&[0, 0, 0, 1]);
        assert_eq!(all(&h, &example()), vec![true; 4]);
        let levi = relcr_torus_levi(&h, &example()).unwrap();
        assert!(levi.witness.unwrap().flag_type.is_trivial());
    }

    #[test]
    fn stabiliser_of_e2_e4_is_not_relcr() {
        let h = stabiliser(&[1, 0, 1, 0]);
        assert_eq!(all(&h, &example()), vec![false; 4]);
        let v = relcr_torus_definition(&h, &example()).unwrap();
        assert_eq!(v.witness.unwrap().dims, vec![2]);
    }

    #[test]
    fn stabiliser_of_line_e1() {
        let h = stabiliser(&[0, 1, 1, 1]);
        assert_eq!(all(&h, &example()), vec![true; 4]);
        assert!(relcr_torus_definition(&h, &example()).unwrap().stable_types.is_empty());
    }

    #[test]
    fn trivial_group() {
        let h = GroupH::<Rational>::trivial(4);
        assert_eq!(all(&h, &example()), vec![true; 4]);
        let levi = relcr_torus_levi(&h, &example()).unwrap().witness.unwrap();
        assert_eq!(levi.dims, vec![1, 2, 3]);
    }

    #[test]
    fn diagonal_group_full_torus() {
        let h = GroupH::new(4, vec![Matrix::diagonal(&[int(1), int(1), int(1), int(2)])]).unwrap();
        assert_eq!(all(&h, &TorusK::full_diagonal(4).unwrap()), vec![true; 4]);
    }

    #[test]
    fn crosscheck_reports_agreement() {
        let r = relcr_torus_crosscheck(&stabiliser(&[1, 0, 1, 0]), &example()).unwrap();
        assert!(!r.relcr);
    }

    #[test]
    fn oracle_matches_subspace_stability() {
        use crate::exactlin::Subspace;
        let h = stabiliser(&[0, 1, 1, 2]);
        let o = StabilityOracle::new(&h, 4).unwrap();
        for mask in 0u64..16 {
            let idx: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            let s = Subspace::coordinate(4, &idx).unwrap();
            assert_eq!(o.span_stable(mask), h.stabilizes(&s).unwrap(), "mask {mask}");
        }
    }

    #[test]
    fn minimal_cover_holds_for_examples() {
        for k in [example(), TorusK::full_diagonal(4).unwrap()] {
            assert!(minimal_cover_failures(&FlagPoset::new(&k).unwrap()).is_empty());
        }
    }
}
