//! Structured sets: boxes, progressions, coset progressions,
//! nilprogressions and the Heisenberg set `Q`, plus the checks built on them.

mod text;

pub use text::parse_spec;

use std::sync::Arc;

use crate::covering::CoverCheck;
use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupDescriptor, GroupElement};
use crate::setcalc::ElementSet;

/// Which bounds the Heisenberg `Q` display puts on `ℓ1` and `ℓ2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum QBoundMode {
    /// `|ℓ1| ≤ L1`, `|ℓ2| ≤ L1`.
    #[default]
    AsPrinted,
    /// `|ℓ1| ≤ L1`, `|ℓ2| ≤ L2`.
    Symmetric,
    /// `|ℓ1| ≤ L2`, `|ℓ2| ≤ L1`: each entry bounded by the count of the
    /// generator that moves it (`x1` sits at (2,3), `x2` at (1,2)).
    Aligned,
}

impl QBoundMode {
    /// Bounds on `(ℓ1, ℓ2)`.
    pub fn bounds(self, l1: u64, l2: u64) -> (u64, u64) {
        match self {
            QBoundMode::AsPrinted => (l1, l1),
            QBoundMode::Symmetric => (l1, l2),
            QBoundMode::Aligned => (l2, l1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QBoundMode::AsPrinted => "printed",
            QBoundMode::Symmetric => "symmetric",
            QBoundMode::Aligned => "aligned",
        }
    }
}

impl std::str::FromStr for QBoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" | "as-printed" => Ok(QBoundMode::AsPrinted),
            "symmetric" => Ok(QBoundMode::Symmetric),
            "aligned" => Ok(QBoundMode::Aligned),
            _ => Err(Error::InvalidArgument(format!(
                "unknown l2 mode {s:?} (printed, symmetric, aligned)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuredSpec {
    /// `{(n_1, .., n_d) : |n_i| ≤ L_i}` in `Z^d`.
    Box { bounds: Vec<u64> },
    /// `P(x; L)` in an abelian group.
    Progression { gens: Vec<GroupElement>, bounds: Vec<u64> },
    /// `H + P(x; L)` with `H` the finite subgroup generated by `subgroup`.
    CosetProgression {
        subgroup: Vec<GroupElement>,
        gens: Vec<GroupElement>,
        bounds: Vec<u64>,
    },
    /// Products of `x_i^{±1}` using each `x_i` at most `L_i` times.
    Nilprogression { gens: Vec<GroupElement>, bounds: Vec<u64> },
    HeisenbergQ { l1: u64, l2: u64, mode: QBoundMode },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidStructure(msg.into())
}

fn check_counts(gens: &[GroupElement], bounds: &[u64]) -> Result<()> {
    if gens.len() != bounds.len() {
        return Err(invalid(format!(
            "{} generators but {} bounds",
            gens.len(),
            bounds.len()
        )));
    }
    if gens.is_empty() {
        return Err(invalid("at least one generator is required"));
    }
    Ok(())
}

fn check_members(ctx: &GroupContext, elems: &[GroupElement]) -> Result<()> {
    match elems.iter().find(|e| !ctx.contains(e)) {
        Some(e) => Err(Error::InvalidElement {
            group: ctx.descriptor().to_string(),
            reason: format!("{e:?} is not in canonical form"),
        }),
        None => Ok(()),
    }
}

fn to_i64(v: u64) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(format!("bound {v}")))
}

/// Expands `spec` into an explicit set in `ctx`.
pub fn expand(ctx: &Arc<GroupContext>, spec: &StructuredSpec) -> Result<ElementSet> {
    match spec {
        StructuredSpec::Box { bounds } => expand_box(ctx, bounds),
        StructuredSpec::Progression { gens, bounds } => progression(ctx, gens, bounds),
        StructuredSpec::CosetProgression {
            subgroup,
            gens,
            bounds,
        } => {
            check_members(ctx, subgroup)?;
            if !ctx.is_finite() && subgroup.iter().any(|h| !ctx.is_identity(h)) {
                return Err(invalid("the subgroup of a coset progression must be finite"));
            }
            let h = ElementSet::new(ctx.clone(), subgroup.iter().cloned())?.generated_subgroup()?;
            h.product(&progression(ctx, gens, bounds)?)
        }
        StructuredSpec::Nilprogression { gens, bounds } => nilprogression(ctx, gens, bounds, false),
        &StructuredSpec::HeisenbergQ { l1, l2, mode } => heisenberg_q(ctx, l1, l2, mode),
    }
}

fn expand_box(ctx: &Arc<GroupContext>, bounds: &[u64]) -> Result<ElementSet> {
    let GroupDescriptor::IntLattice { dim } = ctx.descriptor() else {
        return Err(invalid(format!("boxes live in Z^d, not {}", ctx.descriptor())));
    };
    if bounds.len() != dim {
        return Err(invalid(format!("{} bounds for dimension {dim}", bounds.len())));
    }
    let gens: Vec<GroupElement> = (0..dim)
        .map(|i| {
            let mut c = [0i64; 4];
            c[i] = 1;
            GroupElement::from_slice(&c[..dim])
        })
        .collect();
    progression(ctx, &gens, bounds)
}

/// `{ℓ x : |ℓ| ≤ L}`.
fn segment(ctx: &Arc<GroupContext>, x: &GroupElement, bound: u64) -> Result<ElementSet> {
    let b = to_i64(bound)?;
    if 2 * bound + 1 > ctx.budget() as u64 {
        return Err(Error::BudgetExceeded { limit: ctx.budget() });
    }
    let elems = (-b..=b).map(|l| ctx.pow(x, l)).collect::<Result<Vec<_>>>()?;
    ElementSet::new(ctx.clone(), elems)
}

fn progression(ctx: &Arc<GroupContext>, gens: &[GroupElement], bounds: &[u64]) -> Result<ElementSet> {
    check_counts(gens, bounds)?;
    check_members(ctx, gens)?;
    if !ctx.is_abelian() {
        return Err(Error::NotAbelian(ctx.descriptor().to_string()));
    }
    let mut acc = ElementSet::identity(ctx.clone());
    for (x, &l) in gens.iter().zip(bounds) {
        acc = acc.product(&segment(ctx, x, l)?)?;
    }
    Ok(acc)
}

/// Nilprogression `P(x; L)`.
///
/// States are pairs (element, usage vector), expanded in layers of total
/// usage. All states sharing a usage vector `u` are kept together as the set
/// `R(u)` of elements reachable with usage at most `u`, which satisfies
/// `R(u) = {1} ∪ ⋃_i R(u - e_i) {x_i, x_i^-1}`. Only the previous layer is
/// held in memory. `descending` reverses the generator order of the union,
/// which must not change the result.
pub fn nilprogression(
    ctx: &Arc<GroupContext>,
    gens: &[GroupElement],
    bounds: &[u64],
    descending: bool,
) -> Result<ElementSet> {
    check_counts(gens, bounds)?;
    check_members(ctx, gens)?;
    let r = gens.len();
    let steps: Vec<ElementSet> = gens
        .iter()
        .map(|x| ElementSet::new(ctx.clone(), [x.clone(), ctx.invert(x)?]))
        .collect::<Result<_>>()?;
    let order: Vec<usize> = if descending { (0..r).rev().collect() } else { (0..r).collect() };
    let total: u64 = bounds.iter().sum();
    let one = ElementSet::identity(ctx.clone());

    // layer t: usage vectors with sum t, sorted, each with its set
    let mut layer: Vec<(Vec<u64>, ElementSet)> = vec![(vec![0; r], one.clone())];
    for _ in 0..total {
        let mut next: Vec<(Vec<u64>, ElementSet)> = Vec::new();
        let mut seen = rustc_hash::FxHashSet::default();
        for (u, _) in &layer {
            for i in 0..r {
                if u[i] < bounds[i] {
                    let mut v = u.clone();
                    v[i] += 1;
                    if seen.insert(v.clone()) {
                        next.push((v, one.clone()));
                    }
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        for (v, set) in next.iter_mut() {
            let mut acc = one.clone();
            for &i in &order {
                if v[i] == 0 {
                    continue;
                }
                let mut w = v.clone();
                w[i] -= 1;
                let idx = layer
                    .binary_search_by(|p| p.0.cmp(&w))
                    .expect("predecessor usage vector is in the previous layer");
                acc = acc.union(&layer[idx].1.product(&steps[i])?)?;
            }
            *set = acc;
        }
        layer = next;
    }
    let (u, set) = layer.pop().expect("final layer holds exactly L");
    debug_assert_eq!(u, bounds);
    Ok(set)
}

fn heisenberg_q(ctx: &Arc<GroupContext>, l1: u64, l2: u64, mode: QBoundMode) -> Result<ElementSet> {
    if !matches!(
        ctx.descriptor(),
        GroupDescriptor::HeisenbergZ | GroupDescriptor::HeisenbergMod { .. }
    ) {
        return Err(invalid(format!("Q lives in a Heisenberg group, not {}", ctx.descriptor())));
    }
    let (b1, b2) = mode.bounds(l1, l2);
    let (b1, b2) = (to_i64(b1)?, to_i64(b2)?);
    let b3 = to_i64(l1.checked_mul(l2).ok_or_else(|| Error::Overflow("L1 L2".into()))?)?;
    let count = (2 * b1 as u128 + 1) * (2 * b2 as u128 + 1) * (2 * b3 as u128 + 1);
    if count > ctx.budget() as u128 {
        return Err(Error::BudgetExceeded { limit: ctx.budget() });
    }
    let mut elems = Vec::with_capacity(count as usize);
    for x in -b1..=b1 {
        for y in -b2..=b2 {
            for z in -b3..=b3 {
                elems.push(ctx.element(&[x, y, z])?);
            }
        }
    }
    ElementSet::new(ctx.clone(), elems)
}

/// The generators used with `Q`: `x1` at entry (2,3), `x2` at entry (1,2).
pub fn heisenberg_generators(ctx: &GroupContext) -> Result<[GroupElement; 2]> {
    Ok([ctx.element(&[0, 1, 0])?, ctx.element(&[1, 0, 0])?])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerCover {
    pub corners: ElementSet,
    /// Result of checking `B + B ⊆ B + X`.
    pub check: CoverCheck,
}

/// Corners `(±L_1, .., ±L_d)` of the box with side bounds `bounds`, with the
/// containment `B + B ⊆ B + X` checked on the expansion.
pub fn box_corner_cover(ctx: &Arc<GroupContext>, bounds: &[u64]) -> Result<CornerCover> {
    let b = expand_box(ctx, bounds)?;
    let d = bounds.len();
    let mut corners = Vec::with_capacity(1 << d);
    for mask in 0..(1u32 << d) {
        let c: Vec<i64> = bounds
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let l = to_i64(l)?;
                Ok(if mask >> i & 1 == 1 { l } else { -l })
            })
            .collect::<Result<_>>()?;
        corners.push(ctx.element(&c)?);
    }
    let corners = ElementSet::new(ctx.clone(), corners)?;
    let bb = b.product(&b)?;
    let bx = b.product(&corners)?;
    let violation = bb.first_missing_from(&bx).cloned();
    Ok(CornerCover {
        corners,
        check: CoverCheck {
            holds: violation.is_none(),
            violation,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCheckResult {
    pub is_coset: bool,
    pub subgroup: Option<ElementSet>,
    /// `g` with `A^2 = gH`.
    pub representative: Option<GroupElement>,
    pub square_size: usize,
    /// Whether `|A^2| < (3/2)|A|`.
    pub below_three_halves: bool,
}

/// Tests whether `A^2` is a left coset of a finite subgroup.
pub fn freiman_coset_check(a: &ElementSet) -> Result<CosetCheckResult> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let ctx = a.ctx();
    let a2 = a.product(a)?;
    let below = 2 * a2.len() < 3 * a.len();
    let g = a2.first().expect("nonempty").clone();
    let h = a2.left_translate(&ctx.invert(&g)?)?;
    let closed = h.product(&h)? == h && h.inverse_set()? == h;
    let is_coset = closed && h.left_translate(&g)? == a2;
    Ok(CosetCheckResult {
        is_coset,
        subgroup: is_coset.then_some(h),
        representative: is_coset.then_some(g),
        square_size: a2.len(),
        below_three_halves: below,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichResult {
    pub l1: u64,
    pub l2: u64,
    pub mode: QBoundMode,
    pub p_size: usize,
    pub q_size: usize,
    pub p5_size: usize,
    /// First element of `P(x;L)` outside `Q`.
    pub lower_violation: Option<GroupElement>,
    /// First element of `Q` outside `P(x;5L)`.
    pub upper_violation: Option<GroupElement>,
}

impl SandwichResult {
    pub fn holds(&self) -> bool {
        self.lower_violation.is_none() && self.upper_violation.is_none()
    }
}

/// Checks `P(x;L) ⊆ Q ⊆ P(x;5L)` in `H(Z)`.
pub fn nilprog_sandwich_check(
    ctx: &Arc<GroupContext>,
    l1: u64,
    l2: u64,
    mode: QBoundMode,
) -> Result<SandwichResult> {
    if ctx.descriptor() != GroupDescriptor::HeisenbergZ {
        return Err(invalid("the sandwich check runs in H(Z)"));
    }
    let x = heisenberg_generators(ctx)?.to_vec();
    let p = nilprogression(ctx, &x, &[l1, l2], false)?;
    let q = heisenberg_q(ctx, l1, l2, mode)?;
    let p5 = nilprogression(ctx, &x, &[5 * l1, 5 * l2], false)?;
    Ok(SandwichResult {
        l1,
        l2,
        mode,
        p_size: p.len(),
        q_size: q.len(),
        p5_size: p5.len(),
        lower_violation: p.first_missing_from(&q).cloned(),
        upper_violation: q.first_missing_from(&p5).cloned(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSeries {
    /// `G_1 = <S>, G_2, ...` up to the depth limit or stabilization.
    pub terms: Vec<ElementSet>,
    /// `s` with `G_{s+1} = {1}`, if reached.
    pub step: Option<usize>,
}

/// Lower central series of `<S>` in a finite group: `G_{n+1} = [G_1, G_n]`.
pub fn lower_central_series(s: &ElementSet, depth: usize) -> Result<CentralSeries> {
    let ctx = s.ctx();
    if !ctx.is_finite() {
        return Err(Error::InfiniteGroup(ctx.descriptor().to_string()));
    }
    let g1 = s.union(&ElementSet::identity(ctx.clone()))?.generated_subgroup()?;
    let mut terms = vec![g1];
    let mut step = None;
    loop {
        let last = terms.last().expect("nonempty");
        if last.len() == 1 {
            step = Some(terms.len() - 1);
            break;
        }
        if terms.len() >= depth.max(1) {
            break;
        }
        let mut comms = Vec::new();
        for g in &terms[0] {
            for h in last {
                comms.push(ctx.commutator(g, h)?);
            }
        }
        let next = ElementSet::new(ctx.clone(), comms)?.generated_subgroup()?;
        if &next == last {
            break;
        }
        terms.push(next);
    }
    Ok(CentralSeries { terms, step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use proptest::prelude::*;
    use rustc_hash::FxHashSet;

    fn ctx(s: &str) -> Arc<GroupContext> {
        make_group(s.parse().unwrap()).unwrap()
    }

    fn vals(s: &ElementSet) -> Vec<i64> {
        s.iter().map(|e| e.coords().unwrap()[0]).collect()
    }

    fn el(g: &GroupContext, c: &[i64]) -> GroupElement {
        g.element(c).unwrap()
    }

    /// Plain BFS over (element, usage) states, no merging beyond equality.
    fn naive_nilprogression(g: &GroupContext, gens: &[GroupElement], bounds: &[u64]) -> Vec<GroupElement> {
        let mut seen = FxHashSet::default();
        let start = (g.identity(), vec![0u64; gens.len()]);
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while let Some((e, u)) = frontier.pop() {
            for (i, x) in gens.iter().enumerate() {
                if u[i] == bounds[i] {
                    continue;
                }
                for y in [x.clone(), g.invert(x).unwrap()] {
                    let mut v = u.clone();
                    v[i] += 1;
                    let s = (g.multiply(&e, &y).unwrap(), v);
                    if seen.insert(s.clone()) {
                        frontier.push(s);
                    }
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().map(|(e, _)| e).collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn progression_figure() {
        let z = ctx("Z");
        let p = expand(
            &z,
            &StructuredSpec::Progression {
                gens: vec![el(&z, &[9]), el(&z, &[2])],
                bounds: vec![2, 1],
            },
        )
        .unwrap();
        assert_eq!(
            vals(&p),
            vec![-20, -18, -16, -11, -9, -7, -2, 0, 2, 7, 9, 11, 16, 18, 20]
        );
    }

    #[test]
    fn box_and_corners() {
        let z2 = ctx("Z^2");
        let b = expand(&z2, &StructuredSpec::Box { bounds: vec![2, 1] }).unwrap();
        assert_eq!(b.len(), 15);
        assert_eq!(b.product(&b).unwrap().len(), 45);
        let cover = box_corner_cover(&z2, &[2, 1]).unwrap();
        assert_eq!(cover.corners.len(), 4);
        assert!(cover.check.holds);

        let z = ctx("Z");
        let cover = box_corner_cover(&z, &[3]).unwrap();
        assert_eq!(vals(&cover.corners), vec![-3, 3]);
        assert!(cover.check.holds);
        let cover = box_corner_cover(&z, &[0]).unwrap();
        assert_eq!(vals(&cover.corners), vec![0]);
        assert!(cover.check.holds);

        assert!(expand(&z, &StructuredSpec::Box { bounds: vec![1, 1] }).is_err());
        assert!(expand(&ctx("Z/5"), &StructuredSpec::Box { bounds: vec![1] }).is_err());
    }

    #[test]
    fn q_sizes() {
        let h = ctx("H(Z)");
        let q = |l1, l2, mode| heisenberg_q(&h, l1, l2, mode).unwrap().len();
        assert_eq!(q(1, 1, QBoundMode::AsPrinted), 27);
        assert_eq!(q(0, 0, QBoundMode::AsPrinted), 1);
        assert_eq!(q(2, 3, QBoundMode::AsPrinted), 5 * 5 * 13);
        assert_eq!(q(2, 3, QBoundMode::Symmetric), 5 * 7 * 13);
        assert_eq!(q(2, 3, QBoundMode::Aligned), 7 * 5 * 13);
        assert!(heisenberg_q(&ctx("Z^3"), 1, 1, QBoundMode::AsPrinted).is_err());
    }

    #[test]
    fn nilprogression_matches_state_bfs() {
        let h = ctx("H(Z)");
        let x = heisenberg_generators(&h).unwrap().to_vec();
        for (l1, l2) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1)] {
            let fast = nilprogression(&h, &x, &[l1, l2], false).unwrap();
            assert_eq!(fast.as_slice(), naive_nilprogression(&h, &x, &[l1, l2]).as_slice());
        }
        let p11 = nilprogression(&h, &x, &[1, 1], false).unwrap();
        assert_eq!(p11.len(), 13);
        assert!(p11.contains_identity());
        for g in &x {
            assert!(p11.contains(g));
            assert!(p11.contains(&h.invert(g).unwrap()));
        }
    }

    #[test]
    fn sandwich_sizes_and_modes() {
        let h = ctx("H(Z)");
        let r = nilprog_sandwich_check(&h, 1, 1, QBoundMode::Aligned).unwrap();
        assert!(r.holds());
        assert_eq!((r.p_size, r.q_size, r.p5_size), (13, 27, 2421));
        let r = nilprog_sandwich_check(&h, 0, 0, QBoundMode::AsPrinted).unwrap();
        assert!(r.holds());
        assert_eq!((r.p_size, r.q_size, r.p5_size), (1, 1, 1));
        // printed bounds pin ℓ2 to zero when L1 = 0, but x1 moves ℓ2
        let r = nilprog_sandwich_check(&h, 0, 1, QBoundMode::AsPrinted).unwrap();
        assert!(r.lower_violation.is_some());
    }

    #[test]
    fn coset_progression() {
        let g = ctx("Z/12");
        let s = expand(
            &g,
            &StructuredSpec::CosetProgression {
                subgroup: vec![el(&g, &[6])],
                gens: vec![el(&g, &[1])],
                bounds: vec![1],
            },
        )
        .unwrap();
        assert_eq!(vals(&s), vec![0, 1, 5, 6, 7, 11]);
        let z = ctx("Z");
        assert!(expand(
            &z,
            &StructuredSpec::CosetProgression {
                subgroup: vec![el(&z, &[3])],
                gens: vec![el(&z, &[1])],
                bounds: vec![1],
            }
        )
        .is_err());
    }

    #[test]
    fn freiman_examples() {
        let z10 = ctx("Z/10");
        let odds = ElementSet::from_values(z10.clone(), &[1, 3, 5, 7, 9]).unwrap();
        let r = freiman_coset_check(&odds).unwrap();
        assert!(r.is_coset && r.below_three_halves);
        assert_eq!(vals(r.subgroup.as_ref().unwrap()), vec![0, 2, 4, 6, 8]);
        assert_eq!(r.representative.unwrap(), el(&z10, &[0]));

        let sub = ElementSet::from_values(z10, &[0, 5]).unwrap();
        let r = freiman_coset_check(&sub).unwrap();
        assert!(r.is_coset);
        assert_eq!(r.subgroup.unwrap(), sub);

        let a = ElementSet::from_values(ctx("Z"), &[0, 1, 5]).unwrap();
        let r = freiman_coset_check(&a).unwrap();
        assert!(!r.is_coset && !r.below_three_halves);
    }

    #[test]
    fn central_series() {
        let h5 = ctx("H(5)");
        let s = ElementSet::new(h5.clone(), heisenberg_generators(&h5).unwrap()).unwrap();
        let series = lower_central_series(&s, 10).unwrap();
        assert_eq!(series.step, Some(2));
        assert_eq!(series.terms[0].len(), 125);
        assert_eq!(series.terms[1].len(), 5);

        let m = ctx("(Z/3)^2");
        let s = ElementSet::from_coords(m, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(lower_central_series(&s, 10).unwrap().step, Some(1));

        let sl = ctx("SL2(5)");
        let s = ElementSet::new(sl.clone(), sl.standard_generators()).unwrap();
        let series = lower_central_series(&s, 10).unwrap();
        assert_eq!(series.step, None);
        assert_eq!(series.terms[0].len(), 120);
        assert_eq!(series.terms.len(), 1, "SL2(5) is perfect");

        assert!(matches!(
            lower_central_series(&ElementSet::identity(ctx("H(Z)")), 3),
            Err(Error::InfiniteGroup(_))
        ));
    }

    proptest! {
        #[test]
        fn box_sizes(bounds in prop::collection::vec(0u64..4, 1..4)) {
            let g = make_group(GroupDescriptor::IntLattice { dim: bounds.len() }).unwrap();
            let b = expand(&g, &StructuredSpec::Box { bounds: bounds.clone() }).unwrap();
            let expected: u64 = bounds.iter().map(|l| 2 * l + 1).product();
            prop_assert_eq!(b.len() as u64, expected);
        }

        #[test]
        fn progressions_are_symmetric(
            gens in prop::collection::vec(-30i64..30, 1..4),
            seedb in prop::collection::vec(0u64..4, 4),
        ) {
            let z = ctx("Z/101");
            let gens: Vec<_> = gens.iter().map(|&v| z.element(&[v]).unwrap()).collect();
            let bounds = seedb[..gens.len()].to_vec();
            let p = expand(&z, &StructuredSpec::Progression { gens: gens.clone(), bounds: bounds.clone() }).unwrap();
            prop_assert!(p.is_symmetric() && p.contains_identity());
            // abelian nilprogression coincides with the progression
            let n = nilprogression(&z, &gens, &bounds, false).unwrap();
            prop_assert_eq!(&n, &p);
        }

        #[test]
        fn nilprogression_order_independent(
            raw in prop::collection::vec((-2i64..=2, -2i64..=2, -2i64..=2), 1..4),
            b in prop::collection::vec(0u64..3, 3),
        ) {
            let h = ctx("H(Z)");
            let gens: Vec<_> = raw.iter().map(|&(x, y, z)| h.element(&[x, y, z]).unwrap()).collect();
            let bounds = b[..gens.len()].to_vec();
            let asc = nilprogression(&h, &gens, &bounds, false).unwrap();
            let desc = nilprogression(&h, &gens, &bounds, true).unwrap();
            prop_assert_eq!(&asc, &desc);
            prop_assert_eq!(asc.into_vec(), naive_nilprogression(&h, &gens, &bounds));
        }

        #[test]
        fn freiman_positive_results_verify(raw in prop::collection::vec(0i64..24, 1..6)) {
            let g = ctx("Z/24");
            let a = ElementSet::from_values(g, &raw).unwrap();
            let r = freiman_coset_check(&a).unwrap();
            if let (Some(h), Some(x)) = (&r.subgroup, &r.representative) {
                prop_assert_eq!(&h.product(h).unwrap(), h);
                prop_assert_eq!(h.left_translate(x).unwrap(), a.product(&a).unwrap());
            }
            if r.below_three_halves {
                prop_assert!(r.is_coset);
            }
        }
    }
}
