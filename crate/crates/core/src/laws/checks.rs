use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive};
use rand::seq::index::sample;
use rand::Rng;
use rustc_hash::FxHashSet;

use super::{ceil_int, frac, int, one, rpow, summary, Direction, LawReport, Rational};
use crate::covering::{certify_approx_group, ruzsa_cover, verify_certificate, CoverKind};
use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupDescriptor, Homomorphism, Syllable};
use crate::setcalc::{growth_ball, ElementSet};
use crate::structures::{
    box_corner_cover, expand, freiman_coset_check, nilprog_sandwich_check, QBoundMode, StructuredSpec,
};

fn require_symmetric(a: &ElementSet) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// `|mA - nA| <= K^(m+n) |A|` with `K = |A+A|/|A|`.
pub fn pluennecke(a: &ElementSet, m: u32, n: u32) -> Result<LawReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let a2 = a.product(a)?;
    let k = frac(a2.len(), a.len());
    let c = a.combination(m, n)?;
    Ok(pluennecke_report(a, &k, m, n, c.len()))
}

fn pluennecke_report(a: &ElementSet, k: &Rational, m: u32, n: u32, measured: usize) -> LawReport {
    LawReport::new("pluennecke", summary(a))
        .constant("K", k.clone())
        .constant("m", int(m as usize))
        .constant("n", int(n as usize))
        .constant("|A|", int(a.len()))
        .compare("|mA-nA|", int(measured), rpow(k, m + n) * int(a.len()), Direction::AtMost)
}

/// All `(m, n)` with `m, n <= max` from one set of sumsets.
pub fn pluennecke_grid(a: &ElementSet, max: u32) -> Result<Vec<LawReport>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let pos = a.powers(max)?;
    let neg = pos.iter().map(|s| s.inverse_set()).collect::<Result<Vec<_>>>()?;
    let k = frac(a.product(a)?.len(), a.len());
    let mut out = Vec::new();
    for m in 1..=max {
        for n in 1..=max {
            let c = pos[m as usize - 1].product(&neg[n as usize - 1])?;
            out.push(pluennecke_report(a, &k, m, n, c.len()));
        }
    }
    Ok(out)
}

/// `|A^m| <= K^(m-2) |A|` with `K = |A^3|/|A|`, for symmetric `A`, `m >= 3`.
pub fn tripling_powers(a: &ElementSet, max_m: u32) -> Result<Vec<LawReport>> {
    require_symmetric(a)?;
    if max_m < 3 {
        return Err(Error::InvalidArgument("tripling powers need m >= 3".into()));
    }
    let powers = a.powers(max_m)?;
    let k = frac(powers[2].len(), a.len());
    Ok((3..=max_m)
        .map(|m| {
            LawReport::new("tripling", summary(a))
                .constant("K", k.clone())
                .constant("m", int(m as usize))
                .constant("|A|", int(a.len()))
                .compare(
                    "|A^m|",
                    int(powers[m as usize - 1].len()),
                    rpow(&k, m - 2) * int(a.len()),
                    Direction::AtMost,
                )
        })
        .collect())
}

/// `|π(A)^m| / |π(A)| <= |A^(m+2)| / |A|` for each `m` in `1..=max_m`.
pub fn helfgott_projection(
    a: &ElementSet,
    hom: &Homomorphism,
    target: &Arc<GroupContext>,
    max_m: u32,
) -> Result<Vec<LawReport>> {
    require_symmetric(a)?;
    if max_m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let image = a.image(hom, target.clone())?;
    let up = a.powers(max_m + 2)?;
    let down = image.powers(max_m)?;
    let label = format!("{} via {:?} to {}", summary(a), hom.kind(), hom.target());
    Ok((1..=max_m)
        .map(|m| {
            let lhs = frac(down[m as usize - 1].len(), image.len());
            let rhs = frac(up[m as usize + 1].len(), a.len());
            LawReport::new("helfgott", label.clone())
                .constant("m", int(m as usize))
                .measure("|pi(A)|", int(image.len()))
                .compare("|pi(A)^m|/|pi(A)|", lhs, rhs, Direction::AtMost)
        })
        .collect())
}

/// `|A^m ∩ B^n| / |A^2 ∩ B^2| <= (|A^(m+1)|/|A|)(|B^(n+1)|/|B|)` for the
/// given pairs, plus the companion `|(A^2∩B^2)^3| <= (KL)^5 |A^2∩B^2|`.
pub fn intersection(a: &ElementSet, b: &ElementSet, pairs: &[(u32, u32)]) -> Result<Vec<LawReport>> {
    require_symmetric(a)?;
    require_symmetric(b)?;
    if pairs.iter().any(|&(m, n)| m < 2 || n < 2) {
        return Err(Error::InvalidArgument("intersection law needs m, n >= 2".into()));
    }
    let max_m = pairs.iter().map(|p| p.0).max().unwrap_or(2).max(2);
    let max_n = pairs.iter().map(|p| p.1).max().unwrap_or(2).max(2);
    let pa = a.powers((max_m + 1).max(3))?;
    let pb = b.powers((max_n + 1).max(3))?;
    let i2 = pa[1].intersection(&pb[1])?;
    if i2.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let label = format!("A={} B={}", summary(a), summary(b));
    let mut out = Vec::new();
    for &(m, n) in pairs {
        let amn = pa[m as usize - 1].intersection(&pb[n as usize - 1])?;
        let lhs = frac(amn.len(), i2.len());
        let rhs = frac(pa[m as usize].len(), a.len()) * frac(pb[n as usize].len(), b.len());
        out.push(
            LawReport::new("intersection", label.clone())
                .constant("m", int(m as usize))
                .constant("n", int(n as usize))
                .measure("|A^2&B^2|", int(i2.len()))
                .compare("|A^m&B^n|/|A^2&B^2|", lhs, rhs, Direction::AtMost),
        );
    }
    let k = frac(pa[2].len(), a.len());
    let l = frac(pb[2].len(), b.len());
    let i3 = i2.power(3)?;
    out.push(
        LawReport::new("intersection-tripling", label)
            .constant("K", k.clone())
            .constant("L", l.clone())
            .measure("|A^2&B^2|", int(i2.len()))
            .compare(
                "|(A^2&B^2)^3|",
                int(i3.len()),
                rpow(&(k * l), 5) * int(i2.len()),
                Direction::AtMost,
            ),
    );
    Ok(out)
}

/// Exponent of a torsion family: every element has order dividing it.
fn torsion_exponent(desc: GroupDescriptor) -> Option<u64> {
    match desc {
        GroupDescriptor::Cyclic { order } => Some(order as u64),
        GroupDescriptor::ModLattice { modulus, .. } => Some(modulus as u64),
        _ => None,
    }
}

/// `|<A>| <= m^(K^4) K |A|` in an abelian group of exponent `m`.
///
/// The exponent `K^4` is replaced by its ceiling, then lowered to the least
/// `e` with `m^e >= |G|` when that is smaller. Both changes keep the verdict:
/// `m^e K |A| >= |G| >= |<A>|` already holds at the lowered exponent.
pub fn bounded_torsion(a: &ElementSet) -> Result<LawReport> {
    require_symmetric(a)?;
    let ctx = a.ctx();
    let m = torsion_exponent(ctx.descriptor()).ok_or_else(|| {
        Error::IncompatibleFamilies(format!("bounded torsion needs Z/n or (Z/m)^d, not {}", ctx.descriptor()))
    })?;
    let order = ctx.order().expect("torsion families are finite");
    let k = frac(a.product(a)?.len(), a.len());
    let k4_ceil = ceil_int(&rpow(&k, 4));
    let mut saturating = 0u32;
    let mut p = BigInt::one();
    while p < BigInt::from(order) {
        p *= m;
        saturating += 1;
    }
    let used = match k4_ceil.to_u32() {
        Some(e) if e <= saturating => e,
        _ => saturating,
    };
    let bound = Rational::from_integer(num_traits::pow(BigInt::from(m), used as usize)) * &k * int(a.len());
    let span = a.generated_subgroup()?;
    Ok(LawReport::new("torsion", summary(a))
        .constant("m", int(m as usize))
        .constant("K", k)
        .constant("ceil(K^4)", Rational::from_integer(k4_ceil))
        .constant("exponent_used", int(used as usize))
        .constant("|A|", int(a.len()))
        .compare("|<A>|", int(span.len()), bound, Direction::AtMost))
}

/// Mean of `|A+A| / k^2` over `samples` uniform `k`-subsets of `{1..n}`,
/// compared against `threshold`.
pub fn random_doubling<R: Rng>(k: usize, n: usize, samples: usize, threshold: Rational, rng: &mut R) -> Result<LawReport> {
    if k == 0 || k > n || samples == 0 {
        return Err(Error::InvalidArgument("need 1 <= k <= n and samples >= 1".into()));
    }
    let mut total = 0usize;
    let mut sums = FxHashSet::default();
    for _ in 0..samples {
        let a: Vec<usize> = sample(rng, n, k).into_iter().map(|i| i + 1).collect();
        sums.clear();
        for (i, &x) in a.iter().enumerate() {
            for &y in &a[i..] {
                sums.insert(x + y);
            }
        }
        total += sums.len();
    }
    let mean = frac(total, samples * k * k);
    let hypothesis = n >= 100 * k * k;
    let report = LawReport::new("random-doubling", format!("{samples} uniform {k}-subsets of 1..{n}"))
        .constant("k", int(k))
        .constant("n", int(n))
        .constant("samples", int(samples))
        .compare("mean|A+A|/k^2", mean, threshold, Direction::AtLeast);
    Ok(if hypothesis { report } else { report.hypothesis_failed() })
}

/// Scans `m` in `[ceil(sqrt n), n]` for the least `|S^2m| / |S^m|`, under the
/// hypothesis `|S^n| <= n^d |S|`. With `k` given the minimum is compared to
/// it; otherwise the report only records the minimum.
pub fn growth_scale(s: &ElementSet, n: u32, d: u32, k: Option<Rational>) -> Result<LawReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let balls = growth_ball(s, 2 * n)?;
    let ball = |j: u32| balls[j as usize - 1];
    let sn = ball(n);
    let hyp_bound = rpow(&int(n as usize), d) * int(s.len());
    let holds = int(sn) <= hyp_bound;
    let root = {
        let r = n.sqrt();
        if r * r == n {
            r
        } else {
            r + 1
        }
    };
    let (m_star, ratio) = (root..=n)
        .map(|m| (m, frac(ball(2 * m), ball(m))))
        .fold(None::<(u32, Rational)>, |best, (m, r)| match best {
            Some((bm, br)) if br <= r => Some((bm, br)),
            _ => Some((m, r)),
        })
        .expect("the scan range is nonempty");
    let bound = k.unwrap_or_else(|| ratio.clone());
    let report = LawReport::new("growth-scale", summary(s))
        .constant("n", int(n as usize))
        .constant("d", int(d as usize))
        .constant("m", int(m_star as usize))
        .measure("|S^n|", int(sn))
        .measure("n^d|S|", hyp_bound)
        .compare("min|S^2m|/|S^m|", ratio, bound, Direction::AtMost);
    Ok(if holds { report } else { report.hypothesis_failed() })
}

/// `|Q^3| <= 72 |Q|` and `Q^3` inside the box with three times the bounds
/// on `ℓ1`, `ℓ2` and `8 L1 L2` on `ℓ3`.
pub fn q3_bound(l1: u64, l2: u64, mode: QBoundMode, budget: usize) -> Result<Vec<LawReport>> {
    let ctx = Arc::new(GroupContext::new(GroupDescriptor::HeisenbergZ)?.with_budget(budget));
    let q = expand(&ctx, &StructuredSpec::HeisenbergQ { l1, l2, mode })?;
    let q3 = q.power(3)?;
    let (b1, b2) = mode.bounds(l1, l2);
    let (c1, c2, c3) = (3 * b1 as i64, 3 * b2 as i64, 8 * (l1 * l2) as i64);
    let outside = q3
        .iter()
        .filter(|e| {
            let c = e.coords().expect("Heisenberg elements are vectors");
            c[0].abs() > c1 || c[1].abs() > c2 || c[2].abs() > c3
        })
        .count();
    let label = format!("Q(L1={l1}, L2={l2}, {})", mode.name());
    Ok(vec![
        LawReport::new("q3", label.clone())
            .constant("L1", int(l1 as usize))
            .constant("L2", int(l2 as usize))
            .measure("|Q|", int(q.len()))
            .compare("|Q^3|", int(q3.len()), int(72) * int(q.len()), Direction::AtMost),
        LawReport::new("q3-container", label)
            .constant("L1", int(l1 as usize))
            .constant("L2", int(l2 as usize))
            .measure("|Q^3|", int(q3.len()))
            .compare("|Q^3 outside container|", int(outside), int(0), Direction::AtMost),
    ])
}

/// Ruzsa covering: `|X| <= |A^4|/|A|`, `A^3 ⊆ X A^2` and disjoint translates.
pub fn ruzsa(a: &ElementSet) -> Result<Vec<LawReport>> {
    let cert = ruzsa_cover(a)?;
    let check = verify_certificate(a, &cert)?;
    let xa = cert.witnesses.product(a)?;
    let label = summary(a);
    Ok(vec![
        LawReport::new("ruzsa", label.clone())
            .constant("|A|", int(a.len()))
            .compare("|X|", int(cert.size()), from_ratio(cert.bound), Direction::AtMost),
        LawReport::new("ruzsa-cover", label)
            .measure("|XA|", int(xa.len()))
            .measure("|X||A|", int(cert.size() * a.len()))
            .compare(
                "containment_failures",
                int(usize::from(!check.holds) + usize::from(xa.len() != cert.size() * a.len())),
                int(0),
                Direction::AtMost,
            ),
    ])
}

/// For the greedy approximate-group certificate `X`: `A^m ⊆ X^(m-1) A` and
/// `|A^m| <= |X|^(m-1) |A|` for `m` in `1..=max_m`.
pub fn approx_powers(a: &ElementSet, max_m: u32) -> Result<Vec<LawReport>> {
    let cert = certify_approx_group(a)?;
    let k = cert.size();
    let powers = a.powers(max_m)?;
    let label = summary(a);
    let mut out = Vec::new();
    for m in 1..=max_m {
        let pc = crate::covering::CoverCertificate {
            kind: CoverKind::PowerCover { m },
            ..cert.clone()
        };
        let holds = verify_certificate(a, &pc)?.holds;
        let report = LawReport::new("approx-powers", label.clone())
            .constant("K", int(k))
            .constant("m", int(m as usize))
            .measure("containment_failures", int(usize::from(!holds)))
            .compare(
                "|A^m|",
                int(powers[m as usize - 1].len()),
                rpow(&int(k), m - 1) * int(a.len()),
                Direction::AtMost,
            );
        out.push(if holds {
            report
        } else {
            LawReport {
                status: super::LawStatus::Violated,
                ..report
            }
        });
    }
    Ok(out)
}

/// `A = H ∪ {t}` in `C_k * Z`: `|A^2| <= 3|A|` and `|A^3| >= |A|^2 / 4`.
pub fn free_product(k: i64, budget: usize) -> Result<Vec<LawReport>> {
    let ctx = Arc::new(GroupContext::new(GroupDescriptor::FreeProduct { torsion: k })?.with_budget(budget));
    let mut elems = vec![ctx.identity()];
    for e in 1..k {
        elems.push(ctx.word(&[Syllable::Torsion(e)])?);
    }
    elems.push(ctx.word(&[Syllable::Free(1)])?);
    let a = ElementSet::new(ctx, elems)?;
    let a2 = a.product(&a)?;
    let a3 = a2.product(&a)?;
    let label = format!("C{k}*Z, A = H u {{t}}");
    let n = a.len();
    Ok(vec![
        LawReport::new("free-product-square", label.clone())
            .constant("|A|", int(n))
            .compare("|A^2|", int(a2.len()), int(3 * n), Direction::AtMost),
        LawReport::new("free-product-cube", label)
            .constant("|A|", int(n))
            .compare("|A^3|", int(a3.len()), frac(n * n, 4), Direction::AtLeast),
    ])
}

/// `|B+B| <= 2^d |B|` and the corner cover `B+B ⊆ B+X`.
pub fn box_doubling(bounds: &[u64], budget: usize) -> Result<Vec<LawReport>> {
    let d = bounds.len();
    let ctx = Arc::new(GroupContext::new(GroupDescriptor::IntLattice { dim: d })?.with_budget(budget));
    let b = expand(&ctx, &StructuredSpec::Box { bounds: bounds.to_vec() })?;
    let bb = b.product(&b)?;
    let cover = box_corner_cover(&ctx, bounds)?;
    let label = format!("box L={bounds:?}");
    Ok(vec![
        LawReport::new("box-doubling", label.clone())
            .constant("d", int(d))
            .measure("|B|", int(b.len()))
            .compare("|B+B|", int(bb.len()), int(1 << d) * int(b.len()), Direction::AtMost),
        LawReport::new("box-cover", label)
            .constant("|X|", int(cover.corners.len()))
            .compare(
                "containment_failures",
                int(usize::from(!cover.check.holds)),
                int(0),
                Direction::AtMost,
            ),
    ])
}

/// Doubling of `A ⊆ A0` is at most `K/α` with `K` the doubling of `A0` and
/// `α = |A|/|A0|`.
pub fn dense_subset(a0: &ElementSet, a: &ElementSet) -> Result<LawReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_subset(a0) {
        return Err(Error::InvalidArgument("A must be a subset of A0".into()));
    }
    let k = frac(a0.product(a0)?.len(), a0.len());
    let alpha = frac(a.len(), a0.len());
    let doubling = frac(a.product(a)?.len(), a.len());
    Ok(LawReport::new("dense-subset", format!("A0={} A={}", summary(a0), summary(a)))
        .constant("K", k.clone())
        .constant("alpha", alpha.clone())
        .compare("|A^2|/|A|", doubling, k / alpha, Direction::AtMost))
}

/// If `|A^2| < (3/2)|A|` then `A^2` is a coset of a finite subgroup.
pub fn freiman(a: &ElementSet) -> Result<LawReport> {
    let r = freiman_coset_check(a)?;
    let report = LawReport::new("freiman", summary(a))
        .constant("|A|", int(a.len()))
        .measure("|A^2|", int(r.square_size))
        .compare("is_coset", int(usize::from(r.is_coset)), one(), Direction::AtLeast);
    Ok(if r.below_three_halves { report } else { report.hypothesis_failed() })
}

/// `P(x;L) ⊆ Q ⊆ P(x;5L)` in `H(Z)`.
pub fn sandwich(l1: u64, l2: u64, mode: QBoundMode, budget: usize) -> Result<LawReport> {
    let ctx = Arc::new(GroupContext::new(GroupDescriptor::HeisenbergZ)?.with_budget(budget));
    let r = nilprog_sandwich_check(&ctx, l1, l2, mode)?;
    let failures = usize::from(r.lower_violation.is_some()) + usize::from(r.upper_violation.is_some());
    Ok(
        LawReport::new("sandwich", format!("L1={l1} L2={l2} {}", mode.name()))
            .measure("|P(x;L)|", int(r.p_size))
            .measure("|Q|", int(r.q_size))
            .measure("|P(x;5L)|", int(r.p5_size))
            .compare("containment_failures", int(failures), int(0), Direction::AtMost),
    )
}

fn from_ratio(r: num_rational::Ratio<u64>) -> Rational {
    Rational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub(crate) fn group(desc: &str, budget: usize) -> Result<Arc<GroupContext>> {
    Ok(Arc::new(GroupContext::new(desc.parse()?)?.with_budget(budget)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::LawStatus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(values: &[i64]) -> ElementSet {
        ElementSet::from_values(group("Z", 1 << 20).unwrap(), values).unwrap()
    }

    #[test]
    fn pluennecke_example() {
        let r = pluennecke(&z(&[0, 1, 5]), 2, 1).unwrap();
        assert_eq!(r.value(), Some(&int(12)));
        assert_eq!(r.bound, int(24));
        assert!(r.satisfied());
        let grid = pluennecke_grid(&z(&[0, 1, 5]), 3).unwrap();
        assert_eq!(grid.len(), 9);
        assert_eq!(grid[3].value(), Some(&int(12)), "(m, n) = (2, 1)");
    }

    #[test]
    fn tripling_example() {
        let r = tripling_powers(&z(&[-1, 0, 1]), 5).unwrap();
        let last = r.last().unwrap();
        assert_eq!(last.value(), Some(&int(11)));
        assert_eq!(last.bound, frac(343, 9));
        assert!(r.iter().all(LawReport::satisfied));
    }

    #[test]
    fn helfgott_grid() {
        let z2 = group("Z^2", 1 << 20).unwrap();
        let mut pts = Vec::new();
        for x in -1..=1 {
            for y in -1..=1 {
                pts.push(z2.element(&[x, y]).unwrap());
            }
        }
        let a = ElementSet::new(z2.clone(), pts).unwrap();
        let hom = Homomorphism::new(z2.descriptor(), crate::group::HomKind::CoordinateProjection(vec![0])).unwrap();
        let target = group("Z", 1 << 20).unwrap();
        let r = helfgott_projection(&a, &hom, &target, 3).unwrap();
        assert_eq!(r[2].value(), Some(&frac(7, 3)));
        assert_eq!(r[2].bound, frac(121, 9));
    }

    #[test]
    fn intersection_example() {
        let a = z(&[-1, 0, 1]);
        let r = intersection(&a, &a, &[(3, 2)]).unwrap();
        assert_eq!(r[0].value(), Some(&one()));
        assert_eq!(r[0].bound, int(7));
        assert!(r.iter().all(LawReport::satisfied));
    }

    #[test]
    fn torsion_cube() {
        let g = group("(Z/2)^3", 1 << 20).unwrap();
        let a = ElementSet::from_coords(g, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let r = bounded_torsion(&a).unwrap();
        assert_eq!(r.value(), Some(&int(8)));
        assert!(r.satisfied());
    }

    #[test]
    fn random_doubling_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let r = random_doubling(20, 1_000_000, 200, frac(2, 5), &mut rng).unwrap();
        let mean = r.value().unwrap().clone();
        assert!(mean >= frac(45, 100) && mean <= frac(53, 100), "{mean}");
        assert!(r.satisfied());
        let r = random_doubling(1, 1000, 5, frac(2, 5), &mut rng).unwrap();
        assert_eq!(r.value(), Some(&one()));
    }

    #[test]
    fn diamond_growth() {
        let z2 = group("Z^2", 1 << 20).unwrap();
        let s = ElementSet::from_coords(z2, &[&[0, 0], &[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap();
        let r = growth_scale(&s, 16, 2, Some(frac(21, 5))).unwrap();
        assert!(r.satisfied());
        assert_eq!(r.measured_value("|S^n|"), Some(&int(545)));
        assert_eq!(r.constant_value("m"), Some(&int(4)));
        assert_eq!(r.value(), Some(&frac(145, 41)));
    }

    #[test]
    fn q3_values() {
        let r = q3_bound(1, 1, QBoundMode::AsPrinted, 1 << 20).unwrap();
        assert_eq!(r[0].measured_value("|Q|"), Some(&int(27)));
        assert_eq!(r[0].value(), Some(&int(501)));
        assert!(r.iter().all(LawReport::satisfied));
        let r = q3_bound(0, 0, QBoundMode::AsPrinted, 1 << 20).unwrap();
        assert_eq!(r[0].value(), Some(&one()));
        // ℓ3 is pinned to 0 in Q(2, 0) but not in Q^3
        let r = q3_bound(2, 0, QBoundMode::AsPrinted, 1 << 20).unwrap();
        assert_eq!(r[0].value(), Some(&int(1957)));
        assert_eq!(r[0].status, LawStatus::Violated);
        let r = q3_bound(2, 0, QBoundMode::Symmetric, 1 << 20).unwrap();
        assert!(r.iter().all(LawReport::satisfied));
    }

    #[test]
    fn free_product_counts() {
        let r = free_product(4, 1 << 20).unwrap();
        assert_eq!(r[0].value(), Some(&int(12)));
        assert_eq!(r[1].value(), Some(&int(31)));
        assert!(r.iter().all(LawReport::satisfied));
    }

    #[test]
    fn subgroups_anchor_every_set_law() {
        let g = group("Z/12", 1 << 20).unwrap();
        let h = ElementSet::from_values(g, &[0, 3, 6, 9]).unwrap();
        let mut reports = pluennecke_grid(&h, 3).unwrap();
        reports.extend(tripling_powers(&h, 6).unwrap());
        reports.extend(intersection(&h, &h, &[(2, 2), (3, 2)]).unwrap());
        reports.push(bounded_torsion(&h).unwrap());
        reports.extend(ruzsa(&h).unwrap());
        reports.extend(approx_powers(&h, 6).unwrap());
        reports.push(freiman(&h).unwrap());
        for r in &reports {
            assert!(r.satisfied(), "{r:?}");
            if let Some(k) = r.constant_value("K") {
                assert_eq!(k, &one());
            }
        }
    }

    #[test]
    fn hypothesis_failures_are_not_violations() {
        let r = freiman(&z(&[0, 1, 5])).unwrap();
        assert_eq!(r.status, LawStatus::HypothesisFailed);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_doubling(20, 1000, 3, frac(2, 5), &mut rng).unwrap();
        assert_eq!(r.status, LawStatus::HypothesisFailed);
    }
}
