use std::collections::HashSet;

use num_traits::Zero;

use crate::error::{check_dim, Result};
use crate::exactlin::{unit_vector, Matrix, Subspace};
use crate::flags::GroupH;
use crate::scalar::Rational;

use super::poly::characteristic_polynomial;

pub const DEFAULT_POOL_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Seed,
    Spin,
    /// Annihilator of a spin under the transposed generators.
    DualSpin,
    Sum,
    Intersect,
    AdjointStableSolve,
    User,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Seed => "seed",
            Provenance::Spin => "spin",
            Provenance::DualSpin => "dual-spin",
            Provenance::Sum => "sum",
            Provenance::Intersect => "intersect",
            Provenance::AdjointStableSolve => "adjoint-stable-solve",
            Provenance::User => "user",
        }
    }
}

/// Finite family of subspaces stable under the spin generators, closed under
/// pairwise sum and intersection unless the cap was hit.
#[derive(Clone, Debug)]
pub struct SubspacePool {
    ambient_dim: usize,
    members: Vec<(Subspace, Provenance)>,
    closed: bool,
    cap: usize,
}

impl SubspacePool {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[(Subspace, Provenance)] {
        &self.members
    }

    pub fn subspaces(&self) -> impl Iterator<Item = &Subspace> {
        self.members.iter().map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Closure under sum and intersection finished within the cap.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.iter().any(|(m, _)| m == s)
    }

    /// Inserts an externally found stable subspace and re-closes.
    pub fn insert(&mut self, s: Subspace, tag: Provenance) -> Result<()> {
        check_dim(self.ambient_dim, s.ambient_dim())?;
        if !self.contains(&s) {
            self.members.push((s, tag));
            self.close()?;
        }
        Ok(())
    }

    fn close(&mut self) -> Result<()> {
        let mut seen: HashSet<Subspace> = self.members.iter().map(|(s, _)| s.clone()).collect();
        let mut i = 0;
        self.closed = true;
        while i < self.members.len() {
            for j in 0..i {
                for (tag, s) in [
                    (Provenance::Sum, self.members[i].0.sum(&self.members[j].0)?),
                    (Provenance::Intersect, self.members[i].0.intersect(&self.members[j].0)?),
                ] {
                    if seen.contains(&s) {
                        continue;
                    }
                    if self.members.len() >= self.cap {
                        self.closed = false;
                        self.canonicalize();
                        return Ok(());
                    }
                    seen.insert(s.clone());
                    self.members.push((s, tag));
                }
            }
            i += 1;
        }
        self.canonicalize();
        Ok(())
    }

    fn canonicalize(&mut self) {
        self.members.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    }
}

/// Smallest subspace containing `seed` and stable under every generator.
/// Each new basis vector is pushed through the generators once and reduced
/// against the echelon rows collected so far.
pub fn spin(seed: &Subspace, gens: &[Matrix]) -> Result<Subspace> {
    let n = seed.ambient_dim();
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut queue: Vec<Vec<Rational>> = seed.basis().to_rows();
    let reduce = |rows: &[(usize, Vec<Rational>)], mut w: Vec<Rational>| -> Option<(usize, Vec<Rational>)> {
        for (p, r) in rows {
            if !w[*p].is_zero() {
                let c = w[*p].clone();
                for (a, b) in w.iter_mut().zip(r) {
                    if !b.is_zero() {
                        *a -= &c * b;
                    }
                }
            }
        }
        let p = w.iter().position(|x| !x.is_zero())?;
        let inv = w[p].recip();
        for a in w.iter_mut() {
            *a *= &inv;
        }
        Some((p, w))
    };
    while let Some(v) = queue.pop() {
        let Some((p, w)) = reduce(&rows, v) else {
            continue;
        };
        for g in gens {
            queue.push(g.mul_vec(&w)?);
        }
        rows.push((p, w));
        if rows.len() == n {
            break;
        }
    }
    Subspace::from_vectors(n, rows.into_iter().map(|(_, w)| w).collect())
}

/// Basis vectors of eigenspaces of `g` for its rational eigenvalues.
pub fn rational_eigenvectors(g: &Matrix) -> Vec<Vec<Rational>> {
    let n = g.nrows();
    let chi = characteristic_polynomial(g);
    let mut out = Vec::new();
    for lambda in chi.rational_roots() {
        let mut m = g.clone();
        for i in 0..n {
            m[(i, i)] -= lambda.clone();
        }
        out.extend(m.kernel().to_rows());
    }
    out
}

/// Default seeds: standard basis vectors and rational eigenvectors of each
/// generator.
pub fn default_seeds(gens: &[Matrix], n: usize) -> Vec<Vec<Rational>> {
    let mut seeds: Vec<Vec<Rational>> = (0..n).map(|i| unit_vector(n, i)).collect();
    for g in gens {
        seeds.extend(rational_eigenvectors(g));
    }
    seeds
}

/// Spins each seed line under `h`'s generators plus `extra_gens`, adds the
/// annihilators of the spins of the same seeds under the transposes (these
/// are stable too), then closes under sum and intersection up to `cap`.
/// `None` seeds means [`default_seeds`].
pub fn build_pool(
    h: &GroupH,
    extra_gens: &[Matrix],
    seeds: Option<&[Vec<Rational>]>,
    cap: usize,
) -> Result<SubspacePool> {
    let n = h.ambient_dim();
    let mut gens: Vec<Matrix> = h.generators().to_vec();
    for g in extra_gens {
        check_dim(n, g.nrows())?;
        check_dim(n, g.ncols())?;
        if !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    let transposes: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    let seeds: Vec<Vec<Rational>> = match seeds {
        Some(s) => s.to_vec(),
        None => {
            let mut s = default_seeds(&gens, n);
            s.extend(default_seeds(&transposes, n).into_iter().skip(n));
            s
        }
    };
    let mut members: Vec<(Subspace, Provenance)> = vec![
        (Subspace::zero(n), Provenance::Seed),
        (Subspace::full(n), Provenance::Seed),
    ];
    let mut seen: HashSet<Subspace> = members.iter().map(|(s, _)| s.clone()).collect();
    let mut push = |s: Subspace, tag: Provenance, members: &mut Vec<(Subspace, Provenance)>| {
        if seen.insert(s.clone()) {
            members.push((s, tag));
        }
    };
    let mut lines: HashSet<Subspace> = HashSet::new();
    for v in &seeds {
        check_dim(n, v.len())?;
        let line = Subspace::from_vectors(n, vec![v.clone()])?;
        if line.is_zero() || !lines.insert(line.clone()) {
            continue;
        }
        push(spin(&line, &gens)?, Provenance::Spin, &mut members);
        let dual = spin(&line, &transposes)?;
        push(
            Subspace::span(n, &dual.annihilator())?,
            Provenance::DualSpin,
            &mut members,
        );
    }
    let closed = members.len() <= cap;
    members.truncate(cap.max(2));
    let mut pool = SubspacePool {
        ambient_dim: n,
        members,
        closed,
        cap,
    };
    if closed {
        pool.close()?;
    } else {
        pool.canonicalize();
    }
    Ok(pool)
}
