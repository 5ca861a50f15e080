//! Ruzsa covering and approximate-group certificates.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::Ratio;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::setcalc::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// `A^3 ⊆ X A^2`.
    RuzsaCover,
    /// `A^2 ⊆ X A`.
    ApproxGroup,
    /// `A^m ⊆ X^(m-1) A`.
    PowerCover { m: u32 },
}

impl std::fmt::Display for CoverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverKind::RuzsaCover => write!(f, "ruzsa"),
            CoverKind::ApproxGroup => write!(f, "approx"),
            CoverKind::PowerCover { m } => write!(f, "power{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub witnesses: ElementSet,
    pub kind: CoverKind,
    /// The size bound `|X|` is measured against.
    pub bound: Ratio<u64>,
}

impl CoverCertificate {
    pub fn size(&self) -> usize {
        self.witnesses.len()
    }

    pub fn within_bound(&self) -> bool {
        Ratio::from_integer(self.size() as u64) <= self.bound
    }
}

/// Outcome of re-checking a certificate's containment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCheck {
    pub holds: bool,
    /// Smallest element of the covered set missing from the cover.
    pub violation: Option<GroupElement>,
}

fn check_approx_hypotheses(a: &ElementSet) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !a.contains_identity() {
        return Err(Error::MissingIdentity);
    }
    Ok(())
}

/// Maximal family `X ⊆ A^3` with pairwise disjoint translates `xA`, scanned
/// in canonical order. Certifies `A^3 ⊆ X A^2` with `|X| ≤ |A^4|/|A|`.
pub fn ruzsa_cover(a: &ElementSet) -> Result<CoverCertificate> {
    check_approx_hypotheses(a)?;
    let ctx = a.ctx();
    let powers = a.powers(4)?;
    let (a3, a4) = (&powers[2], &powers[3]);
    let mut occupied: FxHashSet<GroupElement> = FxHashSet::default();
    let mut chosen = Vec::new();
    let mut translate = Vec::with_capacity(a.len());
    for x in a3 {
        translate.clear();
        for y in a {
            translate.push(ctx.multiply(x, y)?);
        }
        if translate.iter().any(|t| occupied.contains(t)) {
            continue;
        }
        occupied.extend(translate.drain(..));
        chosen.push(x.clone());
    }
    Ok(CoverCertificate {
        witnesses: ElementSet::new(ctx.clone(), chosen)?,
        kind: CoverKind::RuzsaCover,
        bound: Ratio::new(a4.len() as u64, a.len() as u64),
    })
}

/// Greedy cover of `A^2` by translates `xA` with `x ∈ A^2`. Each step takes
/// the candidate covering the most uncovered points, smallest first on ties.
pub fn certify_approx_group(a: &ElementSet) -> Result<CoverCertificate> {
    check_approx_hypotheses(a)?;
    let ctx = a.ctx();
    let a2 = a.product(a)?;
    let target = a2.as_slice();
    let mut uncovered: FxHashSet<GroupElement> = target.iter().cloned().collect();

    let hits = |x: &GroupElement, uncovered: &FxHashSet<GroupElement>| -> Result<usize> {
        let mut n = 0;
        for y in a {
            if uncovered.contains(&ctx.multiply(x, y)?) {
                n += 1;
            }
        }
        Ok(n)
    };

    let mut heap = BinaryHeap::with_capacity(target.len());
    for (i, x) in target.iter().enumerate() {
        heap.push((hits(x, &uncovered)?, Reverse(i)));
    }
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let Some((stale, Reverse(i))) = heap.pop() else {
            break;
        };
        let gain = hits(&target[i], &uncovered)?;
        if gain == 0 {
            continue;
        }
        if gain < stale {
            heap.push((gain, Reverse(i)));
            continue;
        }
        for y in a {
            uncovered.remove(&ctx.multiply(&target[i], y)?);
        }
        chosen.push(target[i].clone());
    }
    debug_assert!(uncovered.is_empty(), "the identity lies in A so A^2 ⊆ A^2 A");
    let witnesses = ElementSet::new(ctx.clone(), chosen)?;
    let k = witnesses.len() as u64;
    Ok(CoverCertificate {
        witnesses,
        kind: CoverKind::ApproxGroup,
        bound: Ratio::from_integer(k),
    })
}

/// Approximate-group witnesses reused for `A^m ⊆ X^(m-1) A`, measured
/// against `|X|^(m-1)`.
pub fn power_cover(a: &ElementSet, m: u32) -> Result<CoverCertificate> {
    if m == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let base = certify_approx_group(a)?;
    let k = base.size() as u64;
    let bound = k
        .checked_pow(m - 1)
        .ok_or_else(|| Error::Overflow("power cover bound".into()))?;
    Ok(CoverCertificate {
        kind: CoverKind::PowerCover { m },
        bound: Ratio::from_integer(bound),
        ..base
    })
}

/// For symmetric `A` with tripling `K`: the Ruzsa witnesses `X` give
/// `A^4 ⊆ X^2 A^2`, so `A^2` is an approximate group with witnesses `X^2`.
/// The certificate is for the set `A^2` and is measured against `K^4`.
pub fn tripling_chain(a: &ElementSet) -> Result<(ElementSet, CoverCertificate)> {
    let ruzsa = ruzsa_cover(a)?;
    let a2 = a.product(a)?;
    let a3 = a2.product(a)?;
    let x2 = ruzsa.witnesses.product(&ruzsa.witnesses)?;
    let k: Ratio<u64> = Ratio::new(a3.len() as u64, a.len() as u64);
    let k4 = checked_ratio_pow(k, 4).ok_or_else(|| Error::Overflow("K^4".into()))?;
    Ok((
        a2,
        CoverCertificate {
            witnesses: x2,
            kind: CoverKind::ApproxGroup,
            bound: k4,
        },
    ))
}

fn checked_ratio_pow(r: Ratio<u64>, e: u32) -> Option<Ratio<u64>> {
    Some(Ratio::new(r.numer().checked_pow(e)?, r.denom().checked_pow(e)?))
}

/// Re-checks the containment a certificate claims for `a`.
pub fn verify_certificate(a: &ElementSet, cert: &CoverCertificate) -> Result<CoverCheck> {
    let (covered, cover) = match cert.kind {
        CoverKind::RuzsaCover => {
            let a2 = a.product(a)?;
            (a2.product(a)?, cert.witnesses.product(&a2)?)
        }
        CoverKind::ApproxGroup => (a.product(a)?, cert.witnesses.product(a)?),
        CoverKind::PowerCover { m } => {
            if m == 0 {
                return Err(Error::InvalidArgument("power must be at least 1".into()));
            }
            let am = a.power(m)?;
            let cover = if m == 1 {
                a.clone()
            } else {
                cert.witnesses.power(m - 1)?.product(a)?
            };
            (am, cover)
        }
    };
    let violation = covered.first_missing_from(&cover).cloned();
    Ok(CoverCheck {
        holds: violation.is_none(),
        violation,
    })
}
