//! Small exact polynomial toolkit over Q: univariate gcd and rational roots,
//! bivariate resultants, rational points of low-dimensional systems.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactlin::Matrix;
use crate::scalar::{primitive_integer_vector, Rational};

/// Dense univariate polynomial, coefficients from degree 0 upward, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Self(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dd = d.0.len() - 1;
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] / d.lead();
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(rem))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    /// All rational roots, sorted, without multiplicity.
    pub fn rational_roots(&self) -> Vec<Rational> {
        assert!(!self.is_zero(), "every rational is a root of 0");
        let f = self.squarefree();
        let mut roots = Vec::new();
        let mut coeffs = f.0.clone();
        if coeffs.first().is_some_and(Zero::is_zero) {
            roots.push(Rational::zero());
            coeffs.remove(0);
        }
        let ints = primitive_integer_vector(&coeffs);
        let d = ints.len().saturating_sub(1);
        if d == 0 {
            roots.sort();
            return roots;
        }
        // y = a_d x turns f into a monic integer polynomial
        let lead = ints[d].clone();
        let monic: Vec<BigInt> = (0..=d)
            .map(|i| {
                if i == d {
                    BigInt::one()
                } else {
                    &ints[i] * num_traits::pow(lead.clone(), d - 1 - i)
                }
            })
            .collect();
        for y in integer_roots_monic(&monic) {
            roots.push(Rational::new(y, lead.clone()));
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

/// Integer roots of a squarefree monic integer polynomial, located by Sturm
/// sequence bisection inside the Cauchy bound.
fn integer_roots_monic(f: &[BigInt]) -> Vec<BigInt> {
    let p = UPoly::new(f.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let bound = f[..f.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default()
        + BigInt::one();
    let sturm = sturm_sequence(&p);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&sturm, &lo) - sign_changes(&sturm, &hi);
        if count == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if p.eval(&Rational::from_integer(hi.clone())).is_zero() {
                out.push(hi);
            }
            continue;
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort();
    out
}

fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        seq.push(UPoly::zero().sub(&r));
    }
    seq.pop();
    seq
}

/// Sign variations of the Sturm sequence at `x`; for squarefree `p` the
/// difference between `lo` and `hi` counts roots in `(lo, hi]`.
fn sign_changes(seq: &[UPoly], x: &BigInt) -> usize {
    let x = Rational::from_integer(x.clone());
    let signs: Vec<i8> = seq
        .iter()
        .map(|q| {
            let v = q.eval(&x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Values at `0, 1, …, deg` determine a polynomial of degree `≤ deg`.
pub fn interpolate(values: &[Rational]) -> UPoly {
    let mut acc = UPoly::zero();
    let xs: Vec<Rational> = (0..values.len())
        .map(|i| Rational::from_integer(i.into()))
        .collect();
    for (i, yi) in values.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let denom = &xs[i] - xj;
                basis = basis.mul(&UPoly::new(vec![-xj / &denom, Rational::one() / &denom]));
            }
        }
        acc = acc.add(&basis);
    }
    acc
}

/// `det(x·I - a)`.
pub fn characteristic_polynomial(a: &Matrix) -> UPoly {
    let n = a.nrows();
    let values: Vec<Rational> = (0..=n)
        .map(|t| {
            let mut m = a.scale(&Rational::from_integer((-1).into()));
            for i in 0..n {
                m[(i, i)] += Rational::from_integer(t.into());
            }
            m.determinant().expect("square matrix")
        })
        .collect();
    interpolate(&values)
}

/// Sparse multivariate polynomial: exponent vector to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `c_0 + Σ c_i x_i`.
    pub fn affine(constant: Rational, linear: &[Rational]) -> Self {
        let n = linear.len();
        let mut p = Self::constant(n, constant);
        for (i, c) in linear.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(x)
                .fold(c.clone(), |m, (&k, xi)| m * num_traits::pow(xi.clone(), k as usize));
            acc + mono
        })
    }

    /// Substitutes `x_var = value`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &Rational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::take(&mut e2[var]);
            p.add_term(e2, c * num_traits::pow(value.clone(), k as usize));
        }
        p
    }

    /// Univariate view in `var`, assuming no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> UPoly {
        let mut coeffs = vec![Rational::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            debug_assert!(e.iter().enumerate().all(|(i, &k)| i == var || k == 0));
            coeffs[e[var] as usize] += c;
        }
        UPoly::new(coeffs)
    }

    /// Swaps two variables.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                e.swap(a, b);
                (e, c.clone())
            }),
        )
    }
}

/// `Res_y(p, q)` for bivariate `p, q` in `(x, y)`, as a polynomial in `x`.
/// Both must have positive degree in `y`. Evaluated at `0..=D` points with
/// `D = tdeg(p)·tdeg(q)` and interpolated.
pub fn resultant_y(p: &Poly, q: &Poly) -> UPoly {
    assert!(p.nvars() == 2 && q.nvars() == 2);
    let (dp, dq) = (p.degree_in(1) as usize, q.degree_in(1) as usize);
    assert!(dp > 0 && dq > 0);
    let bound = (p.total_degree() * q.total_degree()) as usize;
    let values: Vec<Rational> = (0..=bound)
        .map(|x| {
            let x = Rational::from_integer(x.into());
            let pc = coeffs_in_y(p, &x, dp);
            let qc = coeffs_in_y(q, &x, dq);
            sylvester(&pc, &qc).determinant().expect("square")
        })
        .collect();
    interpolate(&values)
}

fn coeffs_in_y(p: &Poly, x: &Rational, deg: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); deg + 1];
    for (e, v) in p.terms() {
        c[e[1] as usize] += v * num_traits::pow(x.clone(), e[0] as usize);
    }
    c
}

/// Sylvester matrix of two coefficient lists (degree 0 first), formal degrees.
fn sylvester(p: &[Rational], q: &[Rational]) -> Matrix {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut s = Matrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s[(i, i + k)] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s[(n + i, i + k)] = c.clone();
        }
    }
    s
}

/// Rational points of a polynomial system, possibly incomplete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoints {
    pub points: Vec<Vec<Rational>>,
    /// `points` is the complete set of rational solutions.
    pub exhaustive: bool,
}

impl RationalPoints {
    pub fn is_empty_proof(&self) -> bool {
        self.exhaustive && self.points.is_empty()
    }

    fn empty() -> Self {
        Self {
            points: Vec::new(),
            exhaustive: true,
        }
    }
}

fn sample_line() -> Vec<Rational> {
    [0, 1, -1, 2, -2]
        .iter()
        .map(|&v| Rational::from_integer(v.into()))
        .collect()
}

/// Solves a system in at most two variables. Positive-dimensional solution
/// sets are reported as non-exhaustive samples; a shared curve component
/// that no sampling hits is reported as empty, non-exhaustive.
pub fn rational_points(polys: &[Poly], nvars: usize) -> RationalPoints {
    let nonzero: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    match nvars {
        0 => {
            if nonzero.is_empty() {
                RationalPoints {
                    points: vec![Vec::new()],
                    exhaustive: true,
                }
            } else {
                RationalPoints::empty()
            }
        }
        1 => {
            let g = nonzero
                .iter()
                .fold(UPoly::zero(), |g, p| g.gcd(&p.to_upoly(0)));
            if nonzero.is_empty() {
                return RationalPoints {
                    points: sample_line().into_iter().map(|t| vec![t]).collect(),
                    exhaustive: false,
                };
            }
            RationalPoints {
                points: g.rational_roots().into_iter().map(|t| vec![t]).collect(),
                exhaustive: true,
            }
        }
        2 => bivariate_points(&nonzero),
        _ => panic!("rational_points supports at most two variables"),
    }
}

/// Nonzero univariate constraints on `x` implied by the system.
fn x_constraints(polys: &[&Poly]) -> Vec<UPoly> {
    let mut out = Vec::new();
    for p in polys.iter().filter(|p| p.degree_in(1) == 0) {
        out.push(p.to_upoly(0));
    }
    let with_y: Vec<&&Poly> = polys.iter().filter(|p| p.degree_in(1) > 0).collect();
    for i in 0..with_y.len() {
        for j in i + 1..with_y.len() {
            let r = resultant_y(with_y[i], with_y[j]);
            if !r.is_zero() {
                out.push(r);
            }
        }
    }
    out
}

fn bivariate_points(polys: &[&Poly]) -> RationalPoints {
    if polys.is_empty() {
        let s = sample_line();
        return RationalPoints {
            points: s.iter().flat_map(|a| s.iter().map(move |b| vec![a.clone(), b.clone()])).collect(),
            exhaustive: false,
        };
    }
    for swapped in [false, true] {
        let system: Vec<Poly> = polys
            .iter()
            .map(|p| if swapped { p.swap_vars(0, 1) } else { (*p).clone() })
            .collect();
        let refs: Vec<&Poly> = system.iter().collect();
        let cons = x_constraints(&refs);
        if cons.is_empty() {
            continue;
        }
        let g = cons.iter().fold(UPoly::zero(), |g, c| g.gcd(c));
        let mut points = Vec::new();
        let mut exhaustive = true;
        for x0 in g.rational_roots() {
            let fibre: Vec<Poly> = system.iter().map(|p| p.substitute(0, &x0)).collect();
            let nz: Vec<&Poly> = fibre.iter().filter(|p| !p.is_zero()).collect();
            if nz.is_empty() {
                exhaustive = false;
                points.extend(sample_line().into_iter().map(|y| vec![x0.clone(), y]));
                continue;
            }
            let h = nz.iter().fold(UPoly::zero(), |h, p| h.gcd(&p.to_upoly(1)));
            for y in h.rational_roots() {
                points.push(vec![x0.clone(), y]);
            }
        }
        if swapped {
            for p in &mut points {
                p.swap(0, 1);
            }
        }
        points.sort();
        return RationalPoints { points, exhaustive };
    }
    // every pair shares a factor: a common curve; sample a small grid
    let grid: Vec<Rational> = (-4..=4).map(|v: i64| Rational::from_integer(v.into())).collect();
    let points = grid
        .iter()
        .flat_map(|a| grid.iter().map(move |b| vec![a.clone(), b.clone()]))
        .filter(|pt| polys.iter().all(|p| p.eval(pt).is_zero()))
        .collect();
    RationalPoints {
        points,
        exhaustive: false,
    }
}

/// Independent check that a system in at most one variable has no rational
/// solution, using only degree ≤ 2 root formulas (discriminants).
/// Returns `None` when the system is outside that scope.
pub fn discriminant_certifies_empty(polys: &[Poly], nvars: usize) -> Option<bool> {
    let nonzero: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    match nvars {
        0 => Some(!nonzero.is_empty()),
        1 => {
            let pivot = nonzero.iter().map(|p| p.to_upoly(0)).min_by_key(|u| u.degree())?;
            let candidates = match pivot.degree()? {
                0 => return Some(true),
                1 => vec![-&pivot.coeffs()[0] / &pivot.coeffs()[1]],
                2 => quadratic_rational_roots(&pivot.coeffs()[0], &pivot.coeffs()[1], &pivot.coeffs()[2]),
                _ => return None,
            };
            Some(
                candidates
                    .iter()
                    .all(|t| nonzero.iter().any(|p| !p.eval(std::slice::from_ref(t)).is_zero())),
            )
        }
        _ => None,
    }
}

/// Rational roots of `a + b t + c t²` (`c ≠ 0`) via the discriminant.
fn quadratic_rational_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<Rational> {
    let disc = b * b - Rational::from_integer(4.into()) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let Some(root) = rational_sqrt(&disc) else {
        return Vec::new();
    };
    let two_c = Rational::from_integer(2.into()) * c;
    let mut out = vec![(-b + &root) / &two_c, (-b - &root) / &two_c];
    out.dedup();
    out
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}
