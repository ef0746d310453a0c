mod common;

use common::{int_rows, invertible, rat_vec, subspace, to_matrix};
use proptest::prelude::*;
use relcr::certificate::{in_fk, KData};
use relcr::exactlin::{Matrix, Subspace};
use relcr::flags::Flag;
use relcr::scalar::{int, Rational};
use relcr::structcr::{form_adjoint, is_totally_isotropic, perp, stable_complements, BilinForm, FormKind};

/// Standard symplectic form, or a random nondegenerate symmetric one.
fn form(n: usize) -> impl Strategy<Value = BilinForm> {
    let sym = int_rows(n, n, 2).prop_filter_map("degenerate", move |m| {
        let a = to_matrix(&m, n);
        let g = a.add(&a.transpose()).unwrap();
        BilinForm::new(g, FormKind::Orthogonal).ok()
    });
    if n.is_multiple_of(2) {
        prop_oneof![Just(BilinForm::standard_symplectic(n).unwrap()), sym].boxed()
    } else {
        sym.boxed()
    }
}

fn sized<T: std::fmt::Debug>(f: impl Fn(usize) -> BoxedStrategy<T>) -> impl Strategy<Value = T> {
    (1usize..=5).prop_flat_map(f)
}

/// Symplectic transvection `x ↦ x + (v, x) v`.
fn transvection(v: &[Rational], b: &BilinForm) -> Matrix {
    let n = v.len();
    let mut g = Matrix::identity(n);
    for c in 0..n {
        let vx: Rational = (0..n).map(|i| &v[i] * &b.gram()[(i, c)]).sum();
        for r in 0..n {
            g[(r, c)] += &v[r] * &vx;
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perp_is_an_order_reversing_involution(
        (b, u, w) in sized(|n| (form(n), subspace(n, 3), subspace(n, 2)).boxed())
    ) {
        let n = b.ambient_dim();
        let pu = perp(&u, &b).unwrap();
        prop_assert_eq!(pu.dim() + u.dim(), n);
        prop_assert_eq!(perp(&pu, &b).unwrap(), u.clone());
        let bigger = u.sum(&w).unwrap();
        prop_assert!(pu.contains(&perp(&bigger, &b).unwrap()).unwrap());
    }

    #[test]
    fn adjoint_reverses_products(
        (b, g, h) in sized(|n| (form(n), invertible(n, 2), invertible(n, 2)).boxed())
    ) {
        let gh = form_adjoint(&g.mul(&h).unwrap(), &b).unwrap();
        let hg = form_adjoint(&h, &b).unwrap().mul(&form_adjoint(&g, &b).unwrap()).unwrap();
        prop_assert_eq!(gh, hg);
        // defining identity (g x, y) = (x, g* y) on basis vectors
        let gs = form_adjoint(&g, &b).unwrap();
        let lhs = g.transpose().mul(b.gram()).unwrap();
        let rhs = b.gram().mul(&gs).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn stable_complements_are_exactly_the_solutions(
        (p, cut, ts, params, phi) in (2usize..=4).prop_flat_map(|n| (
            invertible(n, 2),
            1..n,
            prop::collection::vec(int_rows(n, n, 2), 1..=2),
            prop::collection::vec(-3i64..=3, n * n),
            prop::collection::vec(-2i64..=2, n * n),
        ))
    ) {
        let n = p.ncols();
        let q = p.transpose();
        let qi = q.inverse().unwrap();
        let mut gens = Vec::new();
        for t in &ts {
            let mut t = to_matrix(t, n);
            for r in cut..n {
                for c in 0..cut {
                    t[(r, c)] = int(0);
                }
            }
            for i in 0..n {
                if t[(i, i)] == int(0) {
                    t[(i, i)] = int(1);
                }
            }
            if !t.is_invertible() {
                return Ok(());
            }
            gens.push(q.mul(&t).unwrap().mul(&qi).unwrap());
        }
        let u = Subspace::from_vectors(n, p.to_rows()[..cut].to_vec()).unwrap();
        let fam = stable_complements(&u, &gens, None, None).unwrap();
        let stable = |w: &Subspace| gens.iter().all(|g| w.is_invariant_under(g).unwrap());
        if let Some(k) = fam.dim() {
            let w = fam.member(&rat_vec(&params[..k])).unwrap().unwrap();
            prop_assert_eq!(w.dim() + u.dim(), n);
            prop_assert!(w.intersect(&u).unwrap().is_zero());
            prop_assert!(stable(&w));
        }
        // an arbitrary graph map is a stable complement iff it solves the system
        let c = fam.complement_coords.len();
        let phi = rat_vec(&phi[..u.dim() * c]);
        let rows: Vec<Vec<Rational>> = (0..c)
            .map(|j| {
                let mut w = vec![int(0); n];
                w[fam.complement_coords[j]] = int(1);
                for (i, b) in u.basis().rows_iter().enumerate() {
                    for (wk, bk) in w.iter_mut().zip(b) {
                        *wk += &phi[i * c + j] * bk;
                    }
                }
                w
            })
            .collect();
        let w = Subspace::from_vectors(n, rows).unwrap();
        let solves = fam.system.nrows() == 0 || fam.system.mul_vec(&phi).unwrap() == fam.rhs;
        prop_assert_eq!(solves, stable(&w));
    }

    #[test]
    fn isotropic_chains_extend_by_perps(
        (half, vs, r) in (1usize..=3).prop_flat_map(|h| (
            Just(h),
            prop::collection::vec(prop::collection::vec(-2i64..=2, 2 * h), 0..=4),
            1..=h,
        ))
    ) {
        let n = 2 * half;
        let b = BilinForm::standard_symplectic(n).unwrap();
        // a random symplectic change of frame applied to ⟨e1⟩ ⊂ … ⊂ ⟨e1..er⟩
        let mut g = Matrix::identity(n);
        for v in &vs {
            g = transvection(&rat_vec(v), &b).mul(&g).unwrap();
        }
        let chain: Vec<Subspace> = (1..=r)
            .map(|k| Subspace::coordinate(n, &(0..k).collect::<Vec<_>>()).unwrap().image_under(&g).unwrap())
            .collect();
        prop_assert!(chain.iter().all(|s| is_totally_isotropic(s, &b).unwrap()));
        let mut full = chain.clone();
        for s in chain.iter().rev() {
            let p = perp(s, &b).unwrap();
            if full.last() != Some(&p) {
                full.push(p);
            }
        }
        let f = Flag::new(n, full).unwrap();
        prop_assert!(in_fk(&f, &KData::Classical(b), None).unwrap());
    }
}
