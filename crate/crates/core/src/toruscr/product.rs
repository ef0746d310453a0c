use num_traits::Zero;

use super::checkers::{relcr_torus_crosscheck, CrosscheckReport};
use super::torus::TorusK;
use crate::error::{check_dim, Error, Result};
use crate::flags::GroupH;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub blocks: Vec<Vec<usize>>,
    pub product: CrosscheckReport,
    pub factors: Vec<TorusK>,
    pub factor_reports: Vec<CrosscheckReport>,
    /// Every generator is block diagonal for `blocks`.
    pub h_preserves_blocks: bool,
    /// `K` equals the product of its projections to the blocks.
    pub k_is_product: bool,
    /// Set only when both hypotheses hold: product verdict equals the
    /// conjunction of the factor verdicts.
    pub equivalence: Option<bool>,
}

fn check_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in blocks.iter().flatten() {
        if i >= n || seen[i] {
            return Err(Error::InvalidInput(format!(
                "coordinate {i} repeated or out of range in block split"
            )));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) || blocks.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("blocks must partition the coordinates".into()));
    }
    Ok(())
}

pub fn preserves_blocks(h: &GroupH, blocks: &[Vec<usize>]) -> bool {
    let n = h.ambient_dim();
    let mut owner = vec![0; n];
    for (b, block) in blocks.iter().enumerate() {
        for &i in block {
            owner[i] = b;
        }
    }
    h.generators().iter().all(|g| {
        (0..n).all(|r| (0..n).all(|c| owner[r] == owner[c] || g[(r, c)].is_zero()))
    })
}

/// Verdicts for `K` and for its projections `K_i` to the coordinate blocks.
pub fn relcr_torus_product(h: &GroupH, k: &TorusK, blocks: &[Vec<usize>]) -> Result<ProductReport> {
    let n = k.ambient_dim();
    check_dim(n, h.ambient_dim())?;
    check_blocks(n, blocks)?;
    let factors = blocks
        .iter()
        .map(|b| k.projection(b))
        .collect::<Result<Vec<_>>>()?;
    let k_is_product = factors.iter().map(TorusK::rank).sum::<usize>() == k.rank();
    let h_preserves_blocks = preserves_blocks(h, blocks);
    let product = relcr_torus_crosscheck(h, k)?;
    let factor_reports = factors
        .iter()
        .map(|f| relcr_torus_crosscheck(h, f))
        .collect::<Result<Vec<_>>>()?;
    let equivalence = (h_preserves_blocks && k_is_product)
        .then(|| product.relcr == factor_reports.iter().all(|r| r.relcr));
    Ok(ProductReport {
        blocks: blocks.to_vec(),
        product,
        factors,
        factor_reports,
        h_preserves_blocks,
        k_is_product,
        equivalence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Matrix;
    use crate::scalar::{int, Rational};

    fn example() -> TorusK {
        TorusK::new(4, vec![vec![1, 0, 0, -1], vec![0, 1, -1, 0]]).unwrap()
    }

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
        }
        GroupH::new(n, gens).unwrap()
    }

    #[test]
    fn counterexample_both_directions() {
        let blocks = vec![vec![0, 1], vec![2, 3]];
        let r = relcr_torus_product(&stabiliser(&[1, 0, 1, 0]), &example(), &blocks).unwrap();
        assert!(!r.product.relcr);
        assert!(r.factor_reports.iter().all(|f| f.relcr));
        assert!(!r.k_is_product);
        assert_eq!(r.equivalence, None);

        let r = relcr_torus_product(&stabiliser(&[0, 1, 1, 1]), &example(), &blocks).unwrap();
        assert!(r.product.relcr);
        assert!(!r.factor_reports[0].relcr);
        assert!(r.factor_reports[1].relcr);
    }

    #[test]
    fn block_diagonal_product() {
        let k = TorusK::product(&[
            TorusK::new(4, vec![vec![1, -1, 0, 0]]).unwrap(),
            TorusK::new(4, vec![vec![0, 0, 2, 1]]).unwrap(),
        ])
        .unwrap();
        let mut g = Matrix::<Rational>::identity(4);
        g[(0, 1)] = int(1);
        let h = GroupH::new(4, vec![g]).unwrap();
        let r = relcr_torus_product(&h, &k, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(r.k_is_product && r.h_preserves_blocks);
        assert_eq!(r.equivalence, Some(true));
        assert!(!r.product.relcr);
    }
}
