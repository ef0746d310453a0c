use crate::error::{check_dim, Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::flags::Flag;
use crate::scalar::{primitive_integer_vector, Rational};

use num_traits::ToPrimitive;

/// Subtorus of the diagonal torus of `GL_n`, given by an integer basis of its
/// cocharacter lattice. Row `i` is the weight vector of the `i`-th basis
/// cocharacter; column `j` is the weight of `e_j` under `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusK {
    ambient_dim: usize,
    lattice_basis: Vec<Vec<i64>>,
}

/// Coordinates grouped by equal weights (equal columns of the lattice basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightClasses {
    /// Coordinates of each class, sorted; classes ordered by first coordinate.
    pub classes: Vec<Vec<usize>>,
    /// Weight of each class, one entry per lattice basis row.
    pub weights: Vec<Vec<i64>>,
}

impl WeightClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Bit mask of the coordinates in the given classes.
    pub fn coordinate_mask(&self, class_ids: &[usize]) -> u64 {
        class_ids
            .iter()
            .flat_map(|&c| &self.classes[c])
            .fold(0, |m, &i| m | 1 << i)
    }
}

impl TorusK {
    pub fn new(ambient_dim: usize, lattice_basis: Vec<Vec<i64>>) -> Result<Self> {
        if ambient_dim == 0 || ambient_dim > 63 {
            return Err(Error::InvalidTorus(format!(
                "ambient dimension {ambient_dim} outside 1..=63"
            )));
        }
        for row in &lattice_basis {
            check_dim(ambient_dim, row.len())?;
        }
        let m = Matrix::<Rational>::from_int_rows(ambient_dim, &lattice_basis)?;
        if m.rank() != lattice_basis.len() {
            return Err(Error::InvalidTorus(
                "lattice basis rows are linearly dependent".into(),
            ));
        }
        Ok(Self {
            ambient_dim,
            lattice_basis,
        })
    }

    /// The full diagonal torus of `GL_n`.
    pub fn full_diagonal(n: usize) -> Result<Self> {
        Self::new(
            n,
            (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.lattice_basis.len()
    }

    pub fn lattice_basis(&self) -> &[Vec<i64>] {
        &self.lattice_basis
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.lattice_basis.iter().map(|row| row[j]).collect()
    }

    /// Weight vector `Σ c_i · row_i` of the cocharacter with coefficients `c`.
    pub fn weight_vector(&self, c: &[i64]) -> Result<Vec<i64>> {
        check_dim(self.rank(), c.len())?;
        (0..self.ambient_dim)
            .map(|j| {
                self.lattice_basis
                    .iter()
                    .zip(c)
                    .try_fold(0i64, |acc, (row, &ci)| {
                        row[j].checked_mul(ci).and_then(|v| acc.checked_add(v))
                    })
                    .ok_or_else(|| Error::InvalidInput("weight overflow".into()))
            })
            .collect()
    }

    /// Image of `K` under restriction to the coordinates in `block`, embedded
    /// back into `GL_n` acting trivially elsewhere.
    pub fn projection(&self, block: &[usize]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = self
            .lattice_basis
            .iter()
            .map(|row| {
                (0..self.ambient_dim)
                    .map(|j| {
                        if block.contains(&j) {
                            Rational::from_integer(row[j].into())
                        } else {
                            Rational::from_integer(0.into())
                        }
                    })
                    .collect()
            })
            .collect();
        let span = Subspace::from_vectors(self.ambient_dim, rows)?;
        let basis = span
            .basis()
            .rows_iter()
            .map(|r| {
                primitive_integer_vector(r)
                    .iter()
                    .map(|v| {
                        v.to_i64()
                            .ok_or_else(|| Error::InvalidTorus("lattice entry overflow".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient_dim, basis)
    }

    /// Internal direct product of tori on the same ambient space.
    pub fn product(factors: &[TorusK]) -> Result<Self> {
        let n = factors
            .first()
            .map(TorusK::ambient_dim)
            .ok_or_else(|| Error::InvalidTorus("empty product".into()))?;
        let mut rows = Vec::new();
        for f in factors {
            check_dim(n, f.ambient_dim)?;
            rows.extend(f.lattice_basis.iter().cloned());
        }
        Self::new(n, rows)
    }
}

pub fn weight_classes(k: &TorusK) -> WeightClasses {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut weights: Vec<Vec<i64>> = Vec::new();
    for j in 0..k.ambient_dim {
        let col = k.column(j);
        match weights.iter().position(|w| *w == col) {
            Some(c) => classes[c].push(j),
            None => {
                weights.push(col);
                classes.push(vec![j]);
            }
        }
    }
    WeightClasses { classes, weights }
}

/// Chain `U_j = ⟨e_i : w_i ≥ t_j⟩` over the distinct weight values
/// `t_1 > t_2 > …`, dropping the last member (which is `V`).
pub fn flag_from_weights<I: Ord>(w: &[I]) -> Flag {
    let n = w.len();
    let mut values: Vec<&I> = w.iter().collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    let chain = values
        .iter()
        .take(values.len().saturating_sub(1))
        .map(|t| {
            let idx: Vec<usize> = (0..n).filter(|&i| w[i] >= **t).collect();
            Subspace::coordinate(n, &idx).expect("indices in range")
        })
        .collect();
    Flag::new(n, chain).expect("threshold spans form a strictly increasing chain")
}

/// Coordinate blocks of a weight vector, ordered by decreasing weight.
pub fn weight_blocks<I: Ord>(w: &[I]) -> Vec<Vec<usize>> {
    let mut values: Vec<&I> = w.iter().collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    values
        .iter()
        .map(|t| (0..w.len()).filter(|&i| w[i] == **t).collect())
        .collect()
}
