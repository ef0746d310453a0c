use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlin::{dot, solve_affine, unit_vector, AffineSolution, Matrix, Subspace};
use crate::scalar::Rational;

/// `(const_j, lin_{l,j})` of [`ComplementFamily::affine_vectors`].
pub type AffineVectors = (Vec<Vec<Rational>>, Vec<Vec<Vec<Rational>>>);

/// Complements `W` of `u` stable under `gens`, as graphs of linear maps
/// `Φ: C_0 → u` from the coordinate complement `C_0 = ⟨e_c : c ∉ pivots(u)⟩`:
/// `W = span{ e_{c_j} + Σ_i Φ_ij b_i }` with `b_i` the canonical basis of `u`.
/// Stability and the side constraints are linear in `Φ`; `solution` is their
/// complete solution set (row-major `Φ`).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementFamily {
    pub u: Subspace,
    pub complement_coords: Vec<usize>,
    pub system: Matrix,
    pub rhs: Vec<Rational>,
    pub solution: AffineSolution,
}

impl ComplementFamily {
    pub fn is_empty(&self) -> bool {
        self.solution.is_empty()
    }

    /// Number of free parameters; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.solution.dim()
    }

    pub fn n_params(&self) -> usize {
        self.dim().unwrap_or(0)
    }

    fn n(&self) -> usize {
        self.u.ambient_dim()
    }

    /// Spanning vectors `w_j(t) = const_j + Σ_l t_l · lin_{l,j}` of the
    /// member at parameters `t`.
    pub fn affine_vectors(&self) -> Option<AffineVectors> {
        let AffineSolution::Affine {
            particular,
            homogeneous,
        } = &self.solution
        else {
            return None;
        };
        let c = self.complement_coords.len();
        let vectors = |phi: &[Rational], with_unit: bool| -> Vec<Vec<Rational>> {
            (0..c)
                .map(|j| {
                    let mut w = if with_unit {
                        unit_vector(self.n(), self.complement_coords[j])
                    } else {
                        vec![Rational::zero(); self.n()]
                    };
                    for (i, b) in self.u.basis().rows_iter().enumerate() {
                        let coef = &phi[i * c + j];
                        if !coef.is_zero() {
                            for (wk, bk) in w.iter_mut().zip(b) {
                                *wk += coef * bk;
                            }
                        }
                    }
                    w
                })
                .collect()
        };
        let constant = vectors(particular, true);
        let linear = homogeneous.rows_iter().map(|h| vectors(h, false)).collect();
        Some((constant, linear))
    }

    pub fn member(&self, params: &[Rational]) -> Result<Option<Subspace>> {
        let Some((constant, linear)) = self.affine_vectors() else {
            return Ok(None);
        };
        check_dim(linear.len(), params.len())?;
        let mut rows = constant;
        for (t, lin) in params.iter().zip(&linear) {
            for (r, l) in rows.iter_mut().zip(lin) {
                for (a, b) in r.iter_mut().zip(l) {
                    *a += t * b;
                }
            }
        }
        Subspace::from_vectors(self.n(), rows).map(Some)
    }

    /// The member at the particular solution (all parameters zero).
    pub fn sample(&self) -> Result<Option<Subspace>> {
        self.member(&vec![Rational::zero(); self.n_params()])
    }
}

/// All complements of `u` stable under `gens`, optionally constrained to lie
/// inside `inside` and to contain `containing`.
pub fn stable_complements(
    u: &Subspace,
    gens: &[Matrix],
    inside: Option<&Subspace>,
    containing: Option<&Subspace>,
) -> Result<ComplementFamily> {
    let n = u.ambient_dim();
    for g in gens {
        check_dim(n, g.nrows())?;
        if !u.is_invariant_under(g)? {
            return Err(Error::NotStable("subspace to complement".into()));
        }
    }
    for s in inside.iter().chain(containing.iter()) {
        check_dim(n, s.ambient_dim())?;
    }
    let coords = u.coordinate_complement();
    let (c, d) = (coords.len(), u.dim());
    // coordinates of v in the basis (e_{c_1}, …, e_{c_m}, b_1, …, b_d)
    let mut change_rows: Vec<Vec<Rational>> = coords.iter().map(|&j| unit_vector(n, j)).collect();
    change_rows.extend(u.basis().to_rows());
    let change_inv = Matrix::from_rows(n, change_rows)?.transpose().inverse()?;
    let split = |v: &[Rational]| -> Result<(Vec<Rational>, Vec<Rational>)> {
        let mut ab = change_inv.mul_vec(v)?;
        let beta = ab.split_off(c);
        Ok((ab, beta))
    };
    let var = |i: usize, j: usize| i * c + j;
    let nvars = d * c;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();

    let basis: Vec<&[Rational]> = u.basis().rows_iter().collect();
    for g in gens {
        let beta_gb: Vec<Vec<Rational>> = basis
            .iter()
            .map(|b| Ok(split(&g.mul_vec(b)?)?.1))
            .collect::<Result<_>>()?;
        for (j, &cj) in coords.iter().enumerate() {
            let (alpha, beta) = split(&g.mul_vec(&unit_vector(n, cj))?)?;
            // β_r(g e_cj) + Σ_i Φ_ij β_r(g b_i) − Σ_k Φ_rk α_k(g e_cj) = 0
            for r in 0..d {
                let mut row = vec![Rational::zero(); nvars];
                for i in 0..d {
                    row[var(i, j)] += &beta_gb[i][r];
                }
                for k in 0..c {
                    row[var(r, k)] -= &alpha[k];
                }
                rows.push(row);
                rhs.push(-beta[r].clone());
            }
        }
    }
    if let Some(s) = inside {
        let ann = s.annihilator();
        for f in ann.rows_iter() {
            for (j, &cj) in coords.iter().enumerate() {
                let mut row = vec![Rational::zero(); nvars];
                for (i, b) in basis.iter().enumerate() {
                    row[var(i, j)] = dot(f, b);
                }
                rows.push(row);
                rhs.push(-f[cj].clone());
            }
        }
    }
    if let Some(s) = containing {
        for x in s.basis().rows_iter() {
            let (alpha, beta) = split(x)?;
            for r in 0..d {
                let mut row = vec![Rational::zero(); nvars];
                for k in 0..c {
                    row[var(r, k)] = alpha[k].clone();
                }
                rows.push(row);
                rhs.push(beta[r].clone());
            }
        }
    }
    let system = Matrix::from_rows(nvars, rows)?;
    let solution = if system.nrows() == 0 {
        AffineSolution::Affine {
            particular: vec![Rational::zero(); nvars],
            homogeneous: Matrix::identity(nvars),
        }
    } else {
        solve_affine(&system, &rhs)?
    };
    Ok(ComplementFamily {
        u: u.clone(),
        complement_coords: coords,
        system,
        rhs,
        solution,
    })
}

/// Independent inconsistency check of `A x = b` by fraction-free (Bareiss)
/// elimination on the integer-scaled augmented matrix: inconsistent iff
/// `rank [A | b] > rank A`.
pub fn bareiss_inconsistent(a: &Matrix, b: &[Rational]) -> bool {
    use num_bigint::BigInt;
    use crate::scalar::common_denominator;
    let to_int_rows = |m: &Matrix, extra: Option<&[Rational]>| -> Vec<Vec<BigInt>> {
        (0..m.nrows())
            .map(|i| {
                let mut row: Vec<Rational> = m.row(i).to_vec();
                if let Some(e) = extra {
                    row.push(e[i].clone());
                }
                let den = Rational::from_integer(common_denominator(&row));
                row.iter().map(|v| (v * &den).to_integer()).collect()
            })
            .collect()
    };
    let rank = |mut m: Vec<Vec<BigInt>>| -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    m[i][j] = v / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    };
    rank(to_int_rows(a, Some(b))) > rank(to_int_rows(a, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn coord(n: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(n, idx).unwrap()
    }

    #[test]
    fn trivial_group_line_in_plane() {
        let fam = stable_complements(&coord(2, &[0]), &[], None, None).unwrap();
        assert_eq!(fam.dim(), Some(1));
        let w = fam.member(&[int(3)]).unwrap().unwrap();
        assert_eq!(w, Subspace::from_vectors(2, vec![vec![int(3), int(1)]]).unwrap());
    }

    #[test]
    fn eigenspace_complement() {
        let g = Matrix::diagonal(&[int(1), int(2)]);
        let fam = stable_complements(&coord(2, &[0]), &[g], None, None).unwrap();
        assert_eq!(fam.dim(), Some(0));
        assert_eq!(fam.sample().unwrap().unwrap(), coord(2, &[1]));
    }

    #[test]
    fn parabolic_hyperplane_has_no_stable_complement() {
        let mut g = Matrix::identity(4);
        g[(0, 3)] = int(1);
        let fam = stable_complements(&coord(4, &[0, 1, 2]), &[g], None, None).unwrap();
        assert!(fam.is_empty());
        assert!(bareiss_inconsistent(&fam.system, &fam.rhs));
    }

    #[test]
    fn unstable_input_rejected() {
        let mut g = Matrix::identity(2);
        g[(1, 0)] = int(1);
        assert!(matches!(
            stable_complements(&coord(2, &[0]), &[g], None, None),
            Err(Error::NotStable(_))
        ));
    }

    #[test]
    fn side_constraints() {
        let u = coord(3, &[0]);
        let fam = stable_complements(&u, &[], Some(&coord(3, &[1, 2])), None).unwrap();
        assert_eq!(fam.dim(), Some(0));
        assert_eq!(fam.sample().unwrap().unwrap(), coord(3, &[1, 2]));
        let fam = stable_complements(&u, &[], None, Some(&coord(3, &[2]))).unwrap();
        assert_eq!(fam.dim(), Some(1));
        let w = fam.member(&[int(5)]).unwrap().unwrap();
        assert!(w.contains(&coord(3, &[2])).unwrap());
        assert!(u.intersect(&w).unwrap().is_zero());
    }

    #[test]
    fn bareiss_agrees_on_consistent() {
        let a = Matrix::from_int_rows(2, &[[1, 2], [2, 4]]).unwrap();
        assert!(!bareiss_inconsistent(&a, &[int(1), int(2)]));
        assert!(bareiss_inconsistent(&a, &[int(1), int(3)]));
    }
}
