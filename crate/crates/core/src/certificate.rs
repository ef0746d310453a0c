//! Checking claimed families of opposite pairs against `H` and `K`.

use num_traits::{One, Zero};

use crate::error::{check_dim, Result};
use crate::exactlin::Subspace;
use crate::flags::{is_stable, verify_opposite, Flag, GroupH};
use crate::g2model::{g2_minimal_flag, is_doubly_singular, G2Data};
use crate::structcr::{isotropic_flag, BilinForm, GluSplit};
use crate::toruscr::{FlagPoset, StabilityOracle, TorusK};

/// The subgroup `K` together with the data defining it.
#[derive(Clone, Debug)]
pub enum KData {
    Torus(TorusK),
    Glu(GluSplit),
    Classical(BilinForm),
    G2(Box<G2Data>),
}

impl KData {
    pub fn kind(&self) -> &'static str {
        match self {
            KData::Torus(_) => "torus",
            KData::Glu(_) => "glu",
            KData::Classical(_) => "classical",
            KData::G2(_) => "g2",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            KData::Torus(k) => k.ambient_dim(),
            KData::Glu(s) => s.ambient_dim(),
            KData::Classical(b) => b.ambient_dim(),
            KData::G2(_) => 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub flag_in_fk: bool,
    pub opposite_in_fk: bool,
    pub flag_stable: bool,
    pub opposite_stable: bool,
    pub opposite: bool,
}

impl PairCheck {
    pub fn ok(&self) -> bool {
        self.flag_in_fk && self.opposite_in_fk && self.flag_stable && self.opposite_stable && self.opposite
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub accepted: bool,
    pub pairs: Vec<PairCheck>,
    /// Torus only: whether every `H`-stable minimal flag of `F_K` is the
    /// first flag of some claimed pair.
    pub covers_stable_minimal: Option<bool>,
    /// `H`-stable minimal flags missing from the claim (torus only).
    pub uncovered: Vec<Flag>,
}

/// Bit mask of a coordinate subspace, `None` if it is not one.
pub fn coordinate_mask(s: &Subspace) -> Option<u64> {
    let mut mask = 0u64;
    for row in s.basis().rows_iter() {
        let nz: Vec<usize> = (0..row.len()).filter(|&i| !row[i].is_zero()).collect();
        match nz.as_slice() {
            [i] if row[*i].is_one() => mask |= 1 << i,
            _ => return None,
        }
    }
    Some(mask)
}

fn chain_masks(f: &Flag) -> Option<Vec<u64>> {
    f.chain().iter().map(coordinate_mask).collect()
}

/// The chain equals the union of the given minimal flags of its members.
fn union_of_minimal(f: &Flag, minimal_through: impl Fn(&Subspace) -> Result<Option<Flag>>) -> Result<bool> {
    let mut covered = vec![false; f.len()];
    for s in f.chain() {
        if let Some(m) = minimal_through(s)? {
            for t in m.chain() {
                match f.chain().iter().position(|x| x == t) {
                    Some(i) => covered[i] = true,
                    None => return Ok(false),
                }
            }
        }
    }
    Ok(covered.into_iter().all(|c| c))
}

/// Whether `f` is a flag of some cocharacter of `K` (up to `K`-conjugacy in
/// the non-toral cases, via the minimal-flag shapes).
pub fn in_fk(f: &Flag, k: &KData, poset: Option<&FlagPoset>) -> Result<bool> {
    check_dim(k.ambient_dim(), f.ambient_dim())?;
    match k {
        KData::Torus(_) => {
            let Some(masks) = chain_masks(f) else {
                return Ok(false);
            };
            Ok(poset.is_some_and(|p| p.index_of_chain(&masks).is_some()))
        }
        KData::Glu(split) => {
            for s in f.chain() {
                if !split.is_admissible(s)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        KData::Classical(b) => union_of_minimal(f, |s| {
            if !s.is_zero() && b.is_totally_isotropic(s)? {
                isotropic_flag(s, b).map(Some)
            } else {
                Ok(None)
            }
        }),
        KData::G2(d) => union_of_minimal(f, |s| {
            if (1..=2).contains(&s.dim()) && is_doubly_singular(s, d)? {
                g2_minimal_flag(s, d).map(Some)
            } else {
                Ok(None)
            }
        }),
    }
}

/// Sound verifier: each claimed flag and opposite lies in `F_K`, is
/// `H`-stable, and the two are opposite. It never claims completeness
/// except in torus mode, where the stable minimal flags can be listed.
pub fn verify_certificate(h: &GroupH, claim: &[(Flag, Flag)], k: &KData) -> Result<CertificateReport> {
    let n = k.ambient_dim();
    check_dim(n, h.ambient_dim())?;
    let poset = match k {
        KData::Torus(t) => Some(FlagPoset::new(t)?),
        _ => None,
    };
    let mut pairs = Vec::with_capacity(claim.len());
    for (f, o) in claim {
        check_dim(n, f.ambient_dim())?;
        check_dim(n, o.ambient_dim())?;
        pairs.push(PairCheck {
            flag_in_fk: in_fk(f, k, poset.as_ref())?,
            opposite_in_fk: in_fk(o, k, poset.as_ref())?,
            flag_stable: is_stable(f, h)?,
            opposite_stable: is_stable(o, h)?,
            opposite: verify_opposite(f, o)?.is_opposite(),
        });
    }
    let mut uncovered = Vec::new();
    let covers = match &poset {
        Some(p) => {
            let oracle = StabilityOracle::new(h, n)?;
            for i in 0..p.types().len() {
                if p.is_minimal(i) && oracle.all_stable(p.chain_masks(i)) {
                    let flag = p.flag(i);
                    if !claim.iter().any(|(f, _)| *f == flag) {
                        uncovered.push(flag);
                    }
                }
            }
            Some(uncovered.is_empty())
        }
        None => None,
    };
    let accepted = pairs.iter().all(PairCheck::ok) && covers != Some(false);
    Ok(CertificateReport {
        accepted,
        pairs,
        covers_stable_minimal: covers,
        uncovered,
    })
}
