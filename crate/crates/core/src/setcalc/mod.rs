//! Finite element sets and their arithmetic: products, inverses, powers,
//! sum/difference combinations, doubling statistics and growth balls.

mod dense;
mod stats;

pub use stats::{doubling_stats, growth_ball, DoublingStats};

use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::group::{format_element, parse_element, GroupContext, GroupDescriptor, GroupElement, Homomorphism};
use dense::DenseLine;

/// Below this many pairs a product runs on the calling thread.
const PARALLEL_PAIRS: usize = 1 << 16;

/// A finite set of elements of one group. Members are kept sorted in
/// canonical order; a hashed index is built on first membership query.
#[derive(Clone)]
pub struct ElementSet {
    ctx: Arc<GroupContext>,
    members: Vec<GroupElement>,
    index: OnceLock<FxHashSet<GroupElement>>,
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.descriptor() == other.ctx.descriptor() && self.members == other.members
    }
}

impl Eq for ElementSet {}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .members
            .iter()
            .take(16)
            .map(|e| format_element(&self.ctx, e))
            .collect();
        write!(
            f,
            "ElementSet({}, |A| = {}, [{}{}])",
            self.ctx.descriptor(),
            self.members.len(),
            shown.join("; "),
            if self.members.len() > 16 { "; ..." } else { "" }
        )
    }
}

impl ElementSet {
    /// Validates and deduplicates `elements`.
    pub fn new(ctx: Arc<GroupContext>, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut members: Vec<GroupElement> = elements.into_iter().collect();
        if let Some(bad) = members.iter().find(|e| !ctx.contains(e)) {
            return Err(Error::InvalidElement {
                group: ctx.descriptor().to_string(),
                reason: format!("{bad:?} is not in canonical form"),
            });
        }
        members.sort_unstable();
        members.dedup();
        if members.len() > ctx.budget() {
            return Err(Error::BudgetExceeded { limit: ctx.budget() });
        }
        Ok(Self::from_sorted(ctx, members))
    }

    /// Builds a set from integer coordinate rows, reducing residues.
    pub fn from_coords(ctx: Arc<GroupContext>, rows: &[&[i64]]) -> Result<Self> {
        let elems = rows.iter().map(|r| ctx.element(r)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, elems)
    }

    /// One-dimensional convenience: `{v}` for each value.
    pub fn from_values(ctx: Arc<GroupContext>, values: &[i64]) -> Result<Self> {
        let elems = values.iter().map(|&v| ctx.element(&[v])).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, elems)
    }

    pub(crate) fn from_sorted(ctx: Arc<GroupContext>, members: Vec<GroupElement>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ElementSet {
            ctx,
            members,
            index: OnceLock::new(),
        }
    }

    pub fn empty(ctx: Arc<GroupContext>) -> Self {
        Self::from_sorted(ctx, Vec::new())
    }

    pub fn identity(ctx: Arc<GroupContext>) -> Self {
        let e = ctx.identity();
        Self::from_sorted(ctx, vec![e])
    }

    /// Every element of a finite group.
    pub fn whole_group(ctx: Arc<GroupContext>) -> Result<Self> {
        let mut all = ctx.enumerate()?;
        all.sort_unstable();
        Ok(Self::from_sorted(ctx, all))
    }

    /// Parses a set file: one element per line, blank lines and `#` comments
    /// ignored.
    pub fn parse(ctx: Arc<GroupContext>, text: &str) -> Result<Self> {
        let mut elems = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let e = parse_element(&ctx, line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            elems.push(e);
        }
        Self::new(ctx, elems)
    }

    /// One element per line, canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.members {
            out.push_str(&format_element(&self.ctx, e));
            out.push('\n');
        }
        out
    }

    pub fn ctx(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn into_vec(self) -> Vec<GroupElement> {
        self.members
    }

    pub fn first(&self) -> Option<&GroupElement> {
        self.members.first()
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        if self.members.len() <= 64 {
            return self.members.binary_search(a).is_ok();
        }
        self.index
            .get_or_init(|| self.members.iter().cloned().collect())
            .contains(a)
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&self.ctx.identity())
    }

    fn check_same(&self, other: &ElementSet) -> Result<()> {
        if self.ctx.descriptor() != other.ctx.descriptor() {
            return Err(Error::ContextMismatch {
                left: self.ctx.descriptor().to_string(),
                right: other.ctx.descriptor().to_string(),
            });
        }
        Ok(())
    }

    fn with_members(&self, members: Vec<GroupElement>) -> Self {
        Self::from_sorted(self.ctx.clone(), members)
    }

    fn collect_sorted(&self, mut members: Vec<GroupElement>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        self.check_budget(members.len())?;
        Ok(self.with_members(members))
    }

    fn check_budget(&self, n: usize) -> Result<()> {
        if n > self.ctx.budget() {
            Err(Error::BudgetExceeded {
                limit: self.ctx.budget(),
            })
        } else {
            Ok(())
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.len() <= other.len() && self.members.iter().all(|e| other.contains(e))
    }

    /// First member of `self` missing from `other`, in canonical order.
    pub fn first_missing_from(&self, other: &ElementSet) -> Option<&GroupElement> {
        self.members.iter().find(|e| !other.contains(e))
    }

    pub fn union(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same(other)?;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.members, &other.members);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        self.check_budget(out.len())?;
        Ok(self.with_members(out))
    }

    pub fn intersection(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same(other)?;
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let out = small.members.iter().filter(|e| big.contains(e)).cloned().collect();
        Ok(self.with_members(out))
    }

    pub fn difference(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same(other)?;
        let out = self.members.iter().filter(|e| !other.contains(e)).cloned().collect();
        Ok(self.with_members(out))
    }

    /// `A^-1 = {a^-1 : a in A}`.
    pub fn inverse_set(&self) -> Result<ElementSet> {
        let inv = self
            .members
            .iter()
            .map(|a| self.ctx.invert(a))
            .collect::<Result<Vec<_>>>()?;
        self.collect_sorted(inv)
    }

    /// `A ∪ A^-1 ∪ {1}`.
    pub fn symmetrize(&self) -> Result<ElementSet> {
        let inv = self.inverse_set()?;
        self.union(&inv)?.union(&ElementSet::identity(self.ctx.clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.members
            .iter()
            .all(|a| self.ctx.invert(a).is_ok_and(|i| self.contains(&i)))
    }

    /// `gA`.
    pub fn left_translate(&self, g: &GroupElement) -> Result<ElementSet> {
        let out = self
            .members
            .iter()
            .map(|a| self.ctx.multiply(g, a))
            .collect::<Result<Vec<_>>>()?;
        self.collect_sorted(out)
    }

    /// Image under `hom`, as a set in `target`.
    pub fn image(&self, hom: &Homomorphism, target: Arc<GroupContext>) -> Result<ElementSet> {
        if hom.source() != self.ctx.descriptor() || hom.target() != target.descriptor() {
            return Err(Error::IncompatibleFamilies(format!(
                "homomorphism {} -> {} applied to a set in {} with target {}",
                hom.source(),
                hom.target(),
                self.ctx.descriptor(),
                target.descriptor()
            )));
        }
        let out = self
            .members
            .iter()
            .map(|a| hom.apply(a))
            .collect::<Result<Vec<_>>>()?;
        let mut out = out;
        out.sort_unstable();
        out.dedup();
        Ok(ElementSet::from_sorted(target, out))
    }

    /// `AB = {ab : a in A, b in B}`.
    pub fn product(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(self.with_members(Vec::new()));
        }
        if let Some(out) = self.dense_product(other)? {
            return Ok(out);
        }
        self.hashed_product(other)
    }

    fn dense_product(&self, other: &ElementSet) -> Result<Option<ElementSet>> {
        let modulus = match self.ctx.descriptor() {
            GroupDescriptor::IntLattice { dim: 1 } => None,
            GroupDescriptor::Cyclic { order } => Some(order as usize),
            _ => return Ok(None),
        };
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let big_vals: Vec<i64> = big.members.iter().map(first_coord).collect();
        let small_vals: Vec<i64> = small.members.iter().map(first_coord).collect();
        let line = match modulus {
            Some(n) => Some(DenseLine::residues(&big_vals, n)),
            None => DenseLine::from_sorted(&big_vals),
        };
        let Some(line) = line else { return Ok(None) };
        let dense_cost = small.len() * (line.words.len() + 1) + 2 * line.words.len();
        let hashed_cost = 4 * self.len() * other.len();
        if dense_cost > hashed_cost {
            return Ok(None);
        }
        let sum = match modulus {
            Some(n) => Some(dense::cyclic_sumset(&line, &small_vals, n)),
            None => dense::sumset(&line, &small_vals),
        };
        let Some(sum) = sum else { return Ok(None) };
        self.check_budget(sum.count())?;
        let members = sum
            .values()
            .into_iter()
            .map(|v| GroupElement::from_slice(&[v]))
            .collect();
        Ok(Some(self.with_members(members)))
    }

    fn hashed_product(&self, other: &ElementSet) -> Result<ElementSet> {
        let ctx = &self.ctx;
        let budget = ctx.budget();
        let pairs = self.len().saturating_mul(other.len());
        let chunk_product = |chunk: &[GroupElement]| -> Result<Vec<GroupElement>> {
            let mut seen = FxHashSet::default();
            seen.reserve(chunk.len().saturating_mul(other.len()).min(budget).min(1 << 20));
            for a in chunk {
                for b in &other.members {
                    seen.insert(ctx.multiply(a, b)?);
                }
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded { limit: budget });
                }
            }
            Ok(seen.into_iter().collect())
        };
        if pairs < PARALLEL_PAIRS {
            let out = chunk_product(&self.members)?;
            return self.collect_sorted(out);
        }
        let chunk = (self.len() / (4 * rayon::current_num_threads())).max(1);
        let parts = self
            .members
            .par_chunks(chunk)
            .map(chunk_product)
            .collect::<Result<Vec<_>>>()?;
        let mut merged = FxHashSet::default();
        for part in parts {
            merged.extend(part);
            if merged.len() > budget {
                return Err(Error::BudgetExceeded { limit: budget });
            }
        }
        let mut out: Vec<GroupElement> = merged.into_iter().collect();
        out.par_sort_unstable();
        Ok(self.with_members(out))
    }

    /// `A^m` for `m >= 1`.
    pub fn power(&self, m: u32) -> Result<ElementSet> {
        Ok(self.powers(m)?.pop().expect("powers returns m >= 1 sets"))
    }

    /// `[A^1, A^2, ..., A^m]`, built by repeated right multiplication.
    pub fn powers(&self, m: u32) -> Result<Vec<ElementSet>> {
        if m == 0 {
            return Err(Error::InvalidArgument("power exponent must be at least 1".into()));
        }
        let mut out = Vec::with_capacity(m as usize);
        out.push(self.clone());
        for _ in 1..m {
            let next = out.last().expect("nonempty").product(self)?;
            out.push(next);
        }
        Ok(out)
    }

    /// `mA - nA` in an abelian group.
    pub fn combination(&self, m: u32, n: u32) -> Result<ElementSet> {
        if !self.ctx.is_abelian() {
            return Err(Error::NotAbelian(self.ctx.descriptor().to_string()));
        }
        if m + n == 0 {
            return Err(Error::InvalidArgument("m + n must be at least 1".into()));
        }
        let neg = self.inverse_set()?;
        let mut terms = std::iter::repeat_n(self, m as usize).chain(std::iter::repeat_n(&neg, n as usize));
        let mut acc = terms.next().expect("m + n >= 1").clone();
        for t in terms {
            acc = acc.product(t)?;
        }
        Ok(acc)
    }

    /// Subgroup generated by the members of this set.
    pub fn generated_subgroup(&self) -> Result<ElementSet> {
        let ctx = &self.ctx;
        let mut gens = self.members.clone();
        for a in &self.members {
            gens.push(ctx.invert(a)?);
        }
        gens.sort_unstable();
        gens.dedup();
        let id = ctx.identity();
        let mut seen = FxHashSet::default();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &gens {
                    let h = ctx.multiply(g, s)?;
                    if seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            self.check_budget(seen.len())?;
            frontier = next;
        }
        let mut out: Vec<GroupElement> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(self.with_members(out))
    }
}

fn first_coord(e: &GroupElement) -> i64 {
    e.coords().map_or(0, |c| c[0])
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use proptest::prelude::*;

    fn ctx(s: &str) -> Arc<GroupContext> {
        make_group(s.parse().unwrap()).unwrap()
    }

    fn ints(values: &[i64]) -> ElementSet {
        ElementSet::from_values(ctx("Z"), values).unwrap()
    }

    fn values(s: &ElementSet) -> Vec<i64> {
        s.iter().map(|e| e.coords().unwrap()[0]).collect()
    }

    /// Product by plain pair enumeration, independent of both product paths.
    fn naive_product(a: &ElementSet, b: &ElementSet) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| a.ctx().multiply(x, y).unwrap()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn interval_sumset() {
        let a = ints(&[-1, 0, 1]);
        assert_eq!(values(&a.product(&a).unwrap()), vec![-2, -1, 0, 1, 2]);
        assert_eq!(values(&a.power(4).unwrap()), (-4..=4).collect::<Vec<_>>());
    }

    #[test]
    fn small_sumset_and_combination() {
        let a = ints(&[0, 1, 5]);
        assert_eq!(values(&a.product(&a).unwrap()), vec![0, 1, 2, 5, 6, 10]);
        // 18 sums/differences, deduplicated by hand
        let c = a.combination(2, 1).unwrap();
        assert_eq!(values(&c), vec![-5, -4, -3, -1, 0, 1, 2, 4, 5, 6, 9, 10]);
    }

    #[test]
    fn free_product_counterexample_sizes() {
        let g = ctx("C4*Z");
        let a = ElementSet::parse(g, "e\nh\nh^2\nh^3\nt\n").unwrap();
        assert_eq!(a.len(), 5);
        let a2 = a.product(&a).unwrap();
        let a3 = a2.product(&a).unwrap();
        // |H ∪ tH ∪ Ht ∪ {t^2}| = 4 + (4 + 4 - 1) + 1; t lies in both tH and Ht
        assert_eq!(a2.len(), 12);
        assert!(a2.len() <= 3 * a.len());
        assert_eq!(a3.len(), 31);
        assert!(4 * a3.len() >= a.len() * a.len());
    }

    #[test]
    fn inverse_and_symmetrize() {
        let a = ints(&[1, 2]);
        assert_eq!(values(&a.inverse_set().unwrap()), vec![-2, -1]);
        let s = a.symmetrize().unwrap();
        assert_eq!(values(&s), vec![-2, -1, 0, 1, 2]);
        assert!(s.is_symmetric());
        assert_eq!(s.inverse_set().unwrap(), s);
        assert!(!a.is_symmetric());
    }

    #[test]
    fn context_mismatch() {
        let a = ints(&[1]);
        let b = ElementSet::from_values(ctx("Z/5"), &[1]).unwrap();
        assert!(matches!(a.product(&b), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let g = Arc::new(GroupContext::new("Z^2".parse().unwrap()).unwrap().with_budget(50));
        let a = ElementSet::from_coords(g, &[&[0, 0], &[1, 0], &[0, 1], &[5, 7], &[9, 2], &[-3, 11]]).unwrap();
        assert!(matches!(a.power(4), Err(Error::BudgetExceeded { limit: 50 })));
    }

    #[test]
    fn cyclic_subgroup_and_closure() {
        let g = ctx("Z/10");
        let evens = ElementSet::from_values(g.clone(), &[0, 2, 4, 6, 8]).unwrap();
        assert_eq!(evens.product(&evens).unwrap(), evens);
        let two = ElementSet::from_values(g, &[4]).unwrap();
        assert_eq!(two.generated_subgroup().unwrap(), evens);
    }

    #[test]
    fn sparse_integers_take_the_hashed_path() {
        let a = ints(&[0, 1 << 40, -(1 << 41)]);
        let p = a.product(&a).unwrap();
        assert_eq!(p.as_slice(), naive_product(&a, &a).as_slice());
    }

    #[test]
    fn parallel_product_is_deterministic() {
        let g = ctx("H(Z)");
        let mut elems = Vec::new();
        for x in -6..=6 {
            for y in -6..=6 {
                elems.push(g.element(&[x, y, (x * y) % 5]).unwrap());
            }
        }
        let a = ElementSet::new(g, elems).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| a.product(&a).unwrap());
        let wide = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| a.product(&a).unwrap());
        assert_eq!(serial, wide);
        assert_eq!(serial.as_slice(), naive_product(&a, &a).as_slice());
    }

    fn arb_heis() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
        prop::collection::vec((-3i64..=3, -3i64..=3, -4i64..=4), 1..8)
    }

    proptest! {
        #[test]
        fn product_bounds_and_associativity(a in arb_heis(), b in arb_heis(), c in arb_heis()) {
            let g = ctx("H(Z)");
            let mk = |v: &Vec<(i64, i64, i64)>| {
                ElementSet::new(g.clone(), v.iter().map(|&(x, y, z)| g.element(&[x, y, z]).unwrap())).unwrap()
            };
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            let ab = a.product(&b).unwrap();
            prop_assert!(ab.len() <= a.len() * b.len());
            prop_assert!(a.product(&a).unwrap().len() >= a.len());
            prop_assert_eq!(ab.product(&c).unwrap(), a.product(&b.product(&c).unwrap()).unwrap());
        }

        #[test]
        fn abelian_products_commute_and_match_naive(
            a in prop::collection::vec(-300i64..300, 1..40),
            b in prop::collection::vec(-300i64..300, 1..40),
            n in 2i64..200,
        ) {
            let (sa, sb) = (ints(&a), ints(&b));
            prop_assert_eq!(sa.product(&sb).unwrap(), sb.product(&sa).unwrap());
            prop_assert_eq!(sa.product(&sb).unwrap().into_vec(), naive_product(&sa, &sb));

            let zn = make_group(GroupDescriptor::Cyclic { order: n }).unwrap();
            let ca = ElementSet::from_values(zn.clone(), &a).unwrap();
            let cb = ElementSet::from_values(zn, &b).unwrap();
            prop_assert_eq!(ca.product(&cb).unwrap().into_vec(), naive_product(&ca, &cb));
        }

        #[test]
        fn encoding_is_injective_and_ordered(a in arb_heis()) {
            let g = ctx("H(Z)");
            let s = ElementSet::new(g.clone(), a.iter().map(|&(x, y, z)| g.element(&[x, y, z]).unwrap())).unwrap();
            let enc: Vec<Vec<u8>> = s.iter().map(|e| g.encode(e)).collect();
            prop_assert!(enc.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
