use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{check_dim, Error, Result};
use crate::exactlin::Matrix;
use crate::json::{field, int_matrix_from_json, matrix_from_json, matrix_to_json, rational_from_json, rational_to_json};
use crate::scalar::{int, Rational};
use crate::structcr::{BilinForm, FormKind};
use crate::toruscr::TorusK;

/// Octonion coordinates of `e_1..e_7`: `u_i`, `v_i` are the off-diagonal
/// slots of a Zorn vector matrix, `d` is `diag(1, -1)`.
pub const BASIS_NAMES: [&str; 7] = ["u1", "v2", "v3", "d", "u3", "u2", "v1"];

/// Weights of `e_1..e_7` under `diag(s, t, st⁻¹, 1, s⁻¹t, t⁻¹, s⁻¹)`.
pub const TORUS_LATTICE: [[i64; 7]; 2] = [[1, 0, 1, 0, -1, 0, -1], [0, 1, -1, 0, 1, -1, 0]];

/// The shipped fixture text, as read by [`load_g2_fixture`].
pub const FIXTURE: &str = include_str!("../../fixtures/g2.json");

/// Zorn vector matrix `[[a, u], [v, b]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Octonion {
    pub a: Rational,
    pub u: [Rational; 3],
    pub v: [Rational; 3],
    pub b: Rational,
}

fn dot3(x: &[Rational; 3], y: &[Rational; 3]) -> Rational {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

fn cross(x: &[Rational; 3], y: &[Rational; 3]) -> [Rational; 3] {
    [
        &x[1] * &y[2] - &x[2] * &y[1],
        &x[2] * &y[0] - &x[0] * &y[2],
        &x[0] * &y[1] - &x[1] * &y[0],
    ]
}

impl Octonion {
    pub fn zero() -> Self {
        let z = || Rational::zero();
        Self { a: z(), u: [z(), z(), z()], v: [z(), z(), z()], b: z() }
    }

    /// Image of `x ∈ Q^7` in the trace-zero part.
    pub fn from_coords(x: &[Rational]) -> Result<Self> {
        check_dim(7, x.len())?;
        let mut o = Self::zero();
        o.u[0] = x[0].clone();
        o.v[1] = x[1].clone();
        o.v[2] = x[2].clone();
        o.a = x[3].clone();
        o.b = -x[3].clone();
        o.u[2] = x[4].clone();
        o.u[1] = x[5].clone();
        o.v[0] = x[6].clone();
        Ok(o)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let scale = |c: &Rational, x: &[Rational; 3]| [c * &x[0], c * &x[1], c * &x[2]];
        let add = |x: [Rational; 3], y: [Rational; 3]| [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2]];
        let neg = |x: [Rational; 3]| [-&x[0], -&x[1], -&x[2]];
        Self {
            a: &self.a * &o.a + dot3(&self.u, &o.v),
            u: add(add(scale(&self.a, &o.u), scale(&o.b, &self.u)), neg(cross(&self.v, &o.v))),
            v: add(add(scale(&o.a, &self.v), scale(&self.b, &o.v)), cross(&self.u, &o.u)),
            b: &self.b * &o.b + dot3(&self.v, &o.u),
        }
    }

    /// `N(x) = ab − u·v`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.b - dot3(&self.u, &self.v)
    }

    /// Polar of the norm: `N(x + y) − N(x) − N(y)`.
    pub fn polar(&self, o: &Self) -> Rational {
        &self.a * &o.b + &o.a * &self.b - dot3(&self.u, &o.v) - dot3(&o.u, &self.v)
    }
}

/// The 7-dimensional module: alternating trilinear form, its bilinear form
/// and the diagonal maximal torus.
#[derive(Clone, Debug, PartialEq)]
pub struct G2Data {
    /// `f(e_i, e_j, e_k)` at index `49 i + 7 j + k`.
    trilinear: Vec<Rational>,
    bilinear: BilinForm,
    torus: TorusK,
}

impl G2Data {
    pub fn new(trilinear: Vec<Rational>, bilinear: BilinForm, torus: TorusK) -> Result<Self> {
        check_dim(343, trilinear.len())?;
        check_dim(7, bilinear.ambient_dim())?;
        check_dim(7, torus.ambient_dim())?;
        if bilinear.kind() != FormKind::Orthogonal {
            return Err(Error::InvalidForm("G2 bilinear form must be symmetric".into()));
        }
        let d = Self { trilinear, bilinear, torus };
        if !d.is_alternating() {
            return Err(Error::InvalidForm("trilinear form is not alternating".into()));
        }
        if !d.forms_torus_invariant() {
            return Err(Error::InvalidForm("forms are not invariant under the torus".into()));
        }
        Ok(d)
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.trilinear[49 * i + 7 * j + k]
    }

    pub fn bilinear(&self) -> &BilinForm {
        &self.bilinear
    }

    pub fn torus(&self) -> &TorusK {
        &self.torus
    }

    pub fn trilinear(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Rational {
        let m = self.contract(z);
        (0..7)
            .map(|i| (0..7).map(|j| &x[i] * &m[(i, j)] * &y[j]).sum::<Rational>())
            .sum()
    }

    /// `M_ij = f(e_i, e_j, z)`.
    pub fn contract(&self, z: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(7, 7);
        for i in 0..7 {
            for j in 0..7 {
                let mut acc = Rational::zero();
                for (k, zk) in z.iter().enumerate() {
                    let c = self.f(i, j, k);
                    if !c.is_zero() && !zk.is_zero() {
                        acc += c * zk;
                    }
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    /// Nonzero `f(e_i, e_j, e_k)` with `i < j < k`, zero-based.
    pub fn triples(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..7 {
            for j in i + 1..7 {
                for k in j + 1..7 {
                    let c = self.f(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_alternating(&self) -> bool {
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    let c = self.f(i, j, k);
                    let ok = if i == j || j == k || i == k {
                        c.is_zero()
                    } else {
                        *self.f(j, i, k) == -c && *self.f(i, k, j) == -c && *self.f(k, i, j) == *c
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every nonzero structure constant of either form has total weight zero.
    pub fn forms_torus_invariant(&self) -> bool {
        let w = |i: usize| self.torus.column(i);
        let zero_sum = |idx: &[usize]| {
            (0..self.torus.rank()).all(|r| idx.iter().map(|&i| w(i)[r]).sum::<i64>() == 0)
        };
        let gram = self.bilinear.gram();
        for i in 0..7 {
            for j in 0..7 {
                if !gram[(i, j)].is_zero() && !zero_sum(&[i, j]) {
                    return false;
                }
                for k in 0..7 {
                    if !self.f(i, j, k).is_zero() && !zero_sum(&[i, j, k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        let triples: Vec<Value> = self
            .triples()
            .into_iter()
            .map(|(i, j, k, c)| json!([i + 1, j + 1, k + 1, rational_to_json(&c)]))
            .collect();
        json!({
            "basis": BASIS_NAMES,
            "gram": matrix_to_json(self.bilinear.gram()),
            "trilinear": triples,
            "torus": self.torus.lattice_basis(),
        })
    }

    /// Reads the fixture layout; triples are one-based with `i < j < k` and
    /// extended by alternation.
    pub fn from_json(v: &Value) -> Result<Self> {
        let gram = matrix_from_json(field(v, "gram")?, 7)?;
        let torus = TorusK::new(7, int_matrix_from_json(field(v, "torus")?)?)?;
        let mut t = vec![Rational::zero(); 343];
        let triples = field(v, "trilinear")?
            .as_array()
            .ok_or_else(|| Error::InvalidInput("\"trilinear\" must be an array".into()))?;
        for e in triples {
            let bad = || Error::InvalidInput(format!("bad structure constant {e}"));
            let a = e.as_array().filter(|a| a.len() == 4).ok_or_else(bad)?;
            let idx: Vec<usize> = a[..3]
                .iter()
                .map(|x| x.as_u64().filter(|&x| (1..=7).contains(&x)).map(|x| x as usize - 1))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            if !(i < j && j < k) {
                return Err(bad());
            }
            let c = rational_from_json(&a[3])?;
            for (p, q, r, s) in [(i, j, k, 1), (j, k, i, 1), (k, i, j, 1), (j, i, k, -1), (i, k, j, -1), (k, j, i, -1)] {
                t[49 * p + 7 * q + r] = &c * int(s);
            }
        }
        Self::new(t, BilinForm::new(gram, FormKind::Orthogonal)?, torus)
    }
}

/// Trace-zero split octonions in the basis [`BASIS_NAMES`], with
/// `f(x, y, z) = (xy, z)` and `(·,·)` the polar of the norm.
pub fn build_g2_data() -> Result<G2Data> {
    let basis: Vec<Octonion> = (0..7)
        .map(|i| Octonion::from_coords(&crate::exactlin::unit_vector(7, i)))
        .collect::<Result<_>>()?;
    let mut gram = Matrix::zeros(7, 7);
    for i in 0..7 {
        for j in 0..7 {
            gram[(i, j)] = basis[i].polar(&basis[j]);
        }
    }
    let mut t = vec![Rational::zero(); 343];
    for i in 0..7 {
        for j in 0..7 {
            let p = basis[i].mul(&basis[j]);
            for k in 0..7 {
                t[49 * i + 7 * j + k] = p.polar(&basis[k]);
            }
        }
    }
    let torus = TorusK::new(7, TORUS_LATTICE.iter().map(|r| r.to_vec()).collect())?;
    G2Data::new(t, BilinForm::new(gram, FormKind::Orthogonal)?, torus)
}

/// The shipped fixture.
pub fn load_g2_fixture() -> Result<G2Data> {
    G2Data::from_json(&serde_json::from_str(FIXTURE)?)
}


#[cfg(test)]
mod regen {
    /// `cargo test -p relcr regenerate_g2_fixture -- --ignored` rewrites the
    /// shipped fixture from the model.
    #[test]
    #[ignore]
    fn regenerate_g2_fixture() {
        let d = super::build_g2_data().unwrap();
        let text = crate::json::to_string_indent(&d.to_json(), 2) + "\n";
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/g2.json");
        std::fs::write(path, text).unwrap();
    }
}
