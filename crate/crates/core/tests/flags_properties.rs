mod common;

use common::{int_rows, invertible, to_matrix};
use proptest::prelude::*;
use relcr::exactlin::{Matrix, Subspace};
use relcr::flags::{is_stable, verify_opposite, Flag, GroupH, Opposition};

/// Flag spanned by the leading rows of `p`, cut at `cuts`.
fn leading(p: &Matrix, cuts: &[usize]) -> Flag {
    let n = p.ncols();
    let chain = cuts
        .iter()
        .map(|&c| Subspace::from_vectors(n, p.to_rows()[..c].to_vec()).unwrap())
        .collect();
    Flag::new(n, chain).unwrap()
}

/// Flag spanned by the trailing rows of `p`, with complementary cuts.
fn trailing(p: &Matrix, cuts: &[usize]) -> Flag {
    let n = p.ncols();
    let chain = cuts
        .iter()
        .rev()
        .map(|&c| Subspace::from_vectors(n, p.to_rows()[c..].to_vec()).unwrap())
        .collect();
    Flag::new(n, chain).unwrap()
}

/// Strictly increasing cut points in `1..n`.
fn cuts(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::btree_set(1..n.max(2), 0..n)
        .prop_map(move |s| s.into_iter().filter(|&c| c < n).collect())
}

fn pieces(o: Opposition) -> Vec<Subspace> {
    match o {
        Opposition::Opposite(d) => d.pieces().to_vec(),
        Opposition::NotOpposite => panic!("expected opposite flags"),
    }
}

fn frame() -> impl Strategy<Value = (Matrix, Vec<usize>)> {
    (1usize..=5).prop_flat_map(|n| (invertible(n, 2), cuts(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opposition_is_symmetric_with_reversed_pieces((p, c) in frame(), (q, d) in frame()) {
        let f1 = leading(&p, &c);
        let f2 = trailing(&p, &c);
        let a = pieces(verify_opposite(&f1, &f2).unwrap());
        let mut b = pieces(verify_opposite(&f2, &f1).unwrap());
        b.reverse();
        prop_assert_eq!(a, b);
        // arbitrary pairs: the answer does not depend on the order
        if q.ncols() == p.ncols() {
            let g = leading(&q, &d);
            prop_assert_eq!(
                verify_opposite(&f1, &g).unwrap().is_opposite(),
                verify_opposite(&g, &f1).unwrap().is_opposite()
            );
        }
    }

    #[test]
    fn pieces_rebuild_both_chains((p, c) in frame()) {
        let n = p.ncols();
        let f1 = leading(&p, &c);
        let f2 = trailing(&p, &c);
        let ps = pieces(verify_opposite(&f1, &f2).unwrap());
        let m = f1.len();
        prop_assert_eq!(ps.len(), m + 1);
        let mut acc = Subspace::zero(n);
        for (p, u) in ps.iter().zip(f1.chain()) {
            acc = acc.sum(p).unwrap();
            prop_assert_eq!(&acc, u);
        }
        let mut acc = Subspace::zero(n);
        for j in 0..m {
            acc = acc.sum(&ps[m - j]).unwrap();
            prop_assert_eq!(&acc, &f2.chain()[j]);
        }
    }

    #[test]
    fn stability_depends_only_on_the_group(
        ((p, c), ts, stab) in (1usize..=4).prop_flat_map(|n| (
            (invertible(n, 2), cuts(n)),
            prop::collection::vec(int_rows(n, n, 2), 2..=3),
            prop::collection::vec(any::<bool>(), 3),
        ))
    ) {
        let n = p.ncols();
        let f = leading(&p, &c);
        let level = |i: usize| c.iter().filter(|&&x| x <= i).count();
        // columns of q are the frame vectors; t is block upper triangular
        // for `stab`, arbitrary otherwise
        let q = p.transpose();
        let qi = q.inverse().unwrap();
        let mut gens = Vec::new();
        for (k, t) in ts.iter().enumerate() {
            let mut t = to_matrix(t, n);
            for r in 0..n {
                for col in 0..n {
                    if stab[k] && level(r) > level(col) {
                        t[(r, col)] = relcr::scalar::int(0);
                    }
                }
                if t[(r, r)] == relcr::scalar::int(0) {
                    t[(r, r)] = relcr::scalar::int(1);
                }
            }
            if !t.is_invertible() {
                return Ok(());
            }
            gens.push(q.mul(&t).unwrap().mul(&qi).unwrap());
        }
        let h = GroupH::new(n, gens.clone()).unwrap();
        // same group: (g1, g2, …) -> (g1 g2, g2⁻¹, …)
        let mut words = gens.clone();
        words[0] = gens[0].mul(&gens[1]).unwrap();
        words[1] = gens[1].inverse().unwrap();
        let h2 = GroupH::new(n, words).unwrap();
        prop_assert_eq!(is_stable(&f, &h).unwrap(), is_stable(&f, &h2).unwrap());
        if stab.iter().take(gens.len()).all(|&s| s) {
            prop_assert!(is_stable(&f, &h).unwrap());
        }
    }
}
