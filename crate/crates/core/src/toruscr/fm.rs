//! Fourier–Motzkin elimination for mixed strict / non-strict systems.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// `coeffs · x + constant > 0` (strict) or `≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub strict: bool,
}

impl Inequality {
    pub fn homogeneous(coeffs: Vec<Rational>, strict: bool) -> Self {
        Self {
            coeffs,
            constant: Rational::zero(),
            strict,
        }
    }

    fn holds_at(&self, x: &[Rational]) -> bool {
        let v = self
            .coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + a * b);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }

    /// Scales so the leading nonzero coefficient (or the constant) has |·| = 1.
    fn normalized(mut self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(|| self.constant.clone());
        if !lead.is_zero() {
            let s = lead.abs();
            for c in &mut self.coeffs {
                *c = &*c / &s;
            }
            self.constant = &self.constant / &s;
        }
        self
    }
}

/// Returns a point satisfying every inequality, or `None` if the system is
/// infeasible. Exact; no perturbation of strict inequalities.
pub fn fm_solve(nvars: usize, system: &[Inequality]) -> Option<Vec<Rational>> {
    // stages[k] only involves x_0..=x_k (stage 0 may also hold constants)
    let mut stages: Vec<Vec<Inequality>> = vec![Vec::new(); nvars];
    let mut current: Vec<Inequality> = dedup(system.iter().cloned().map(Inequality::normalized));
    for k in (0..nvars).rev() {
        stages[k] = current.clone();
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in current {
            if c.coeffs[k].is_positive() {
                pos.push(c);
            } else if c.coeffs[k].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = p.coeffs[k].clone();
                let b = -q.coeffs[k].clone();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                rest.push(
                    Inequality {
                        coeffs,
                        constant: &p.constant * &b + &q.constant * &a,
                        strict: p.strict || q.strict,
                    }
                    .normalized(),
                );
            }
        }
        current = dedup(rest.into_iter());
        if current
            .iter()
            .any(|c| c.coeffs.iter().all(Zero::is_zero) && !c.holds_at(&[]))
        {
            return None;
        }
    }
    if current.iter().any(|c| !c.holds_at(&vec![Rational::zero(); nvars])) {
        return None;
    }
    let mut x = vec![Rational::zero(); nvars];
    for k in 0..nvars {
        x[k] = choose_value(k, &x, &stages[k])?;
    }
    debug_assert!(system.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

fn dedup(items: impl Iterator<Item = Inequality>) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = Vec::new();
    for c in items {
        if c.coeffs.iter().all(Zero::is_zero) && c.holds_at(&[]) {
            continue;
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Picks `x_k` inside the interval cut out by `stage` given `x_0..x_{k-1}`,
/// preferring the integer nearest zero.
fn choose_value(k: usize, x: &[Rational], stage: &[Inequality]) -> Option<Rational> {
    let mut lower: Option<(Rational, bool)> = None;
    let mut upper: Option<(Rational, bool)> = None;
    for c in stage {
        let a = &c.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest = c.coeffs[..k]
            .iter()
            .zip(x)
            .fold(c.constant.clone(), |acc, (p, q)| acc + p * q);
        let bound = -rest / a;
        if a.is_positive() {
            if lower.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && c.strict && !s)) {
                lower = Some((bound, c.strict));
            }
        } else if upper.as_ref().is_none_or(|(u, s)| bound < *u || (bound == *u && c.strict && !s)) {
            upper = Some((bound, c.strict));
        }
    }
    let ok = |v: &Rational| {
        lower.as_ref().is_none_or(|(l, s)| if *s { v > l } else { v >= l })
            && upper.as_ref().is_none_or(|(u, s)| if *s { v < u } else { v <= u })
    };
    let zero = Rational::zero();
    if ok(&zero) {
        return Some(zero);
    }
    let candidate = match (&lower, &upper) {
        (Some((l, _)), None) => l.floor() + Rational::one(),
        (None, Some((u, _))) => u.ceil() - Rational::one(),
        (Some((l, _)), Some((u, _))) => {
            let nearest = if l.is_positive() {
                l.floor() + Rational::one()
            } else {
                u.ceil() - Rational::one()
            };
            if ok(&nearest) {
                nearest
            } else {
                (l + u) / Rational::from_integer(2.into())
            }
        }
        (None, None) => zero,
    };
    ok(&candidate).then_some(candidate)
}
