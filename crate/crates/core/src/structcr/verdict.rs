use num_traits::Zero;

use super::complement::{bareiss_inconsistent, ComplementFamily};
use super::poly::{discriminant_certifies_empty, rational_points, Poly};
use crate::error::Result;
use crate::exactlin::Subspace;
use crate::flags::Flag;
use crate::scalar::Rational;

/// Largest parameter count the exact rational-point search handles.
pub const MAX_ELIM_DIM: usize = 2;
pub const DEFAULT_ELIM_CAP: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriValue {
    RelCrWitnessed,
    NotRelCrWitnessed,
    Inconclusive,
}

impl TriValue {
    pub fn name(self) -> &'static str {
        match self {
            TriValue::RelCrWitnessed => "relcr",
            TriValue::NotRelCrWitnessed => "not_relcr",
            TriValue::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OppositePair {
    pub flag: Flag,
    pub opposite: Flag,
}

/// Exact reason a candidate flag has no qualifying opposite.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// The linear conditions on the complement already have no solution.
    EmptyLinear { family: ComplementFamily },
    /// The polynomial conditions on the family parameters have no rational
    /// solution.
    NoRationalPoint {
        family: ComplementFamily,
        polynomials: Vec<Poly>,
    },
    /// The rational solutions are finitely many and each fails a further
    /// (non-polynomial) condition.
    ExhaustedCandidates {
        family: ComplementFamily,
        polynomials: Vec<Poly>,
        points: Vec<Vec<Rational>>,
        failures: Vec<String>,
    },
}

impl Obstruction {
    pub fn family(&self) -> &ComplementFamily {
        match self {
            Obstruction::EmptyLinear { family }
            | Obstruction::NoRationalPoint { family, .. }
            | Obstruction::ExhaustedCandidates { family, .. } => family,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Obstruction::EmptyLinear { .. } => "empty_linear",
            Obstruction::NoRationalPoint { .. } => "no_rational_point",
            Obstruction::ExhaustedCandidates { .. } => "exhausted_candidates",
        }
    }

    /// Re-checks the proof by a method independent of the one that found it:
    /// Bareiss rank for linear systems, discriminants for at most one
    /// parameter, the opposite elimination order for two. `None` when no
    /// independent method applies.
    pub fn reverify(&self) -> Option<bool> {
        match self {
            Obstruction::EmptyLinear { family } => {
                Some(family.is_empty() && bareiss_inconsistent(&family.system, &family.rhs))
            }
            Obstruction::NoRationalPoint {
                family,
                polynomials,
            } => {
                let p = family.n_params();
                match p {
                    0 | 1 => discriminant_certifies_empty(polynomials, p),
                    2 => {
                        let swapped: Vec<Poly> =
                            polynomials.iter().map(|q| q.swap_vars(0, 1)).collect();
                        Some(rational_points(&swapped, 2).is_empty_proof())
                    }
                    _ => None,
                }
            }
            Obstruction::ExhaustedCandidates {
                family,
                polynomials,
                points,
                ..
            } => {
                let p = family.n_params();
                if p > MAX_ELIM_DIM {
                    return None;
                }
                let again = rational_points(polynomials, p);
                Some(again.exhaustive && &again.points == points)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refutation {
    /// H-stable minimal flag without an H-stable opposite.
    pub flag: Flag,
    /// One obstruction per searched side.
    pub obstructions: Vec<(String, Obstruction)>,
}

impl Refutation {
    pub fn reverify(&self) -> Option<bool> {
        self.obstructions
            .iter()
            .map(|(_, o)| o.reverify())
            .try_fold(true, |acc, r| r.map(|v| acc && v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriVerdict {
    pub value: TriValue,
    /// Verified opposite pairs, one per H-stable candidate flag examined.
    pub pairs: Vec<OppositePair>,
    pub refutation: Option<Refutation>,
    pub inconclusive_reason: Option<String>,
    pub candidates: usize,
    pub pool_size: usize,
    pub pool_closed: bool,
}

impl TriVerdict {
    /// A positive answer only covers the pool's members unless its closure
    /// completed under the cap.
    pub fn is_pool_relative(&self) -> bool {
        self.value == TriValue::RelCrWitnessed && !self.pool_closed
    }
}

pub(crate) enum Outcome {
    Witness(OppositePair),
    Refuted(Refutation),
    Inconclusive(String),
}

/// Folds per-candidate outcomes (already in canonical order).
pub(crate) fn aggregate(
    outcomes: Vec<Outcome>,
    pool_size: usize,
    pool_closed: bool,
) -> TriVerdict {
    let candidates = outcomes.len();
    let mut pairs = Vec::new();
    let mut refutation = None;
    let mut reason = None;
    for o in outcomes {
        match o {
            Outcome::Witness(p) => pairs.push(p),
            Outcome::Refuted(r) => {
                if refutation.is_none() {
                    refutation = Some(r);
                }
            }
            Outcome::Inconclusive(s) => {
                if reason.is_none() {
                    reason = Some(s);
                }
            }
        }
    }
    let value = if refutation.is_some() {
        TriValue::NotRelCrWitnessed
    } else if reason.is_some() {
        TriValue::Inconclusive
    } else {
        TriValue::RelCrWitnessed
    };
    TriVerdict {
        value,
        pairs,
        refutation,
        inconclusive_reason: if value == TriValue::Inconclusive { reason } else { None },
        candidates,
        pool_size,
        pool_closed,
    }
}

#[allow(clippy::large_enum_variant)]
pub(crate) enum Search {
    Found(Subspace),
    Refuted(Obstruction),
    Inconclusive(String),
}

/// Looks for a member of `family` satisfying the polynomial `equations`
/// (in the family parameters) and the extra test `accept` (`None` = passes,
/// `Some(reason)` = fails).
pub(crate) fn search_family(
    family: &ComplementFamily,
    equations: impl Fn(&ComplementFamily) -> Result<Vec<Poly>>,
    accept: impl Fn(&Subspace) -> Result<Option<String>>,
    elim_cap: usize,
) -> Result<Search> {
    if family.is_empty() {
        return Ok(Search::Refuted(Obstruction::EmptyLinear {
            family: family.clone(),
        }));
    }
    let p = family.n_params();
    let polys = equations(family)?;
    let holds = |t: &[Rational]| polys.iter().all(|q| q.eval(t).is_zero());
    let mut trial: Vec<Vec<Rational>> = vec![vec![Rational::zero(); p]];
    for l in 0..p {
        for s in [1, -1] {
            let mut t = vec![Rational::zero(); p];
            t[l] = Rational::from_integer(s.into());
            trial.push(t);
        }
    }
    for t in &trial {
        if holds(t) {
            let w = family.member(t)?.expect("nonempty family");
            if accept(&w)?.is_none() {
                return Ok(Search::Found(w));
            }
        }
    }
    let cap = elim_cap.min(MAX_ELIM_DIM);
    if p > cap {
        return Ok(Search::Inconclusive(format!(
            "complement family has {p} parameters, above the elimination cap {cap}"
        )));
    }
    let pts = rational_points(&polys, p);
    let mut failures = Vec::new();
    for t in &pts.points {
        let w = family.member(t)?.expect("nonempty family");
        match accept(&w)? {
            None => return Ok(Search::Found(w)),
            Some(reason) => failures.push(reason),
        }
    }
    if !pts.exhaustive {
        return Ok(Search::Inconclusive(
            "solution set is positive-dimensional and no sampled point qualifies".into(),
        ));
    }
    Ok(Search::Refuted(if pts.points.is_empty() {
        Obstruction::NoRationalPoint {
            family: family.clone(),
            polynomials: polys,
        }
    } else {
        Obstruction::ExhaustedCandidates {
            family: family.clone(),
            polynomials: polys,
            points: pts.points,
            failures,
        }
    }))
}

/// Components of the family's spanning vectors as affine polynomials in the
/// parameters.
pub(crate) fn vector_polys(family: &ComplementFamily) -> Vec<Vec<Poly>> {
    let Some((constant, linear)) = family.affine_vectors() else {
        return Vec::new();
    };
    constant
        .iter()
        .enumerate()
        .map(|(j, c)| {
            (0..c.len())
                .map(|k| {
                    let lin: Vec<Rational> = linear.iter().map(|l| l[j][k].clone()).collect();
                    Poly::affine(c[k].clone(), &lin)
                })
                .collect()
        })
        .collect()
}

/// `Σ_{a,b} x_a M_{ab} y_b` for polynomial vectors.
pub(crate) fn bilinear_poly(x: &[Poly], m: &crate::exactlin::Matrix, y: &[Poly], nvars: usize) -> Poly {
    let mut acc = Poly::zero(nvars);
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        let mut inner = Poly::zero(nvars);
        for (b, yb) in y.iter().enumerate() {
            let c = &m[(a, b)];
            if !c.is_zero() && !yb.is_zero() {
                inner = inner.add(&yb.mul(&Poly::constant(nvars, c.clone())));
            }
        }
        acc = acc.add(&xa.mul(&inner));
    }
    acc
}
