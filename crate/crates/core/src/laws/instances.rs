//! Seeded instance generators for the law sweeps.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupDescriptor, GroupElement, Syllable};
use crate::setcalc::ElementSet;

/// Families drawn from when a sweep does not fix the group.
pub const FAMILIES: &[&str] = &["Z", "Z^2", "Z/101", "(Z/3)^3", "H(Z)", "H(5)", "SL2(5)", "C3*Z"];

/// A random element of small height. Finite families are sampled uniformly
/// or by a random word; infinite ones from a small box or short word.
pub fn random_element<R: Rng>(rng: &mut R, ctx: &GroupContext) -> Result<GroupElement> {
    match ctx.descriptor() {
        GroupDescriptor::IntLattice { dim } => {
            let r = [20, 4, 2, 2][dim - 1];
            let c: Vec<i64> = (0..dim).map(|_| rng.random_range(-r..=r)).collect();
            ctx.element(&c)
        }
        GroupDescriptor::ModLattice { modulus, dim } => {
            let c: Vec<i64> = (0..dim).map(|_| rng.random_range(0..modulus)).collect();
            ctx.element(&c)
        }
        GroupDescriptor::Cyclic { order } => ctx.element(&[rng.random_range(0..order)]),
        GroupDescriptor::HeisenbergZ => ctx.element(&[
            rng.random_range(-1..=1),
            rng.random_range(-1..=1),
            rng.random_range(-2..=2),
        ]),
        GroupDescriptor::HeisenbergMod { p } => ctx.element(&[
            rng.random_range(0..p),
            rng.random_range(0..p),
            rng.random_range(0..p),
        ]),
        GroupDescriptor::Sl2 { .. } => {
            let gens = ctx.standard_generators();
            let mut g = ctx.identity();
            for _ in 0..8 {
                let s = &gens[rng.random_range(0..gens.len())];
                let s = if rng.random_bool(0.5) { ctx.invert(s)? } else { s.clone() };
                g = ctx.multiply(&g, &s)?;
            }
            Ok(g)
        }
        GroupDescriptor::FreeProduct { torsion } => {
            let len = rng.random_range(1..=2);
            let mut free = rng.random_bool(0.5);
            let mut syl = Vec::with_capacity(len);
            for _ in 0..len {
                syl.push(if free {
                    let e = rng.random_range(1..=2);
                    Syllable::Free(if rng.random_bool(0.5) { e } else { -e })
                } else {
                    Syllable::Torsion(rng.random_range(1..torsion))
                });
                free = !free;
            }
            ctx.word(&syl)
        }
    }
}

/// `{1} ∪ X ∪ X^-1` for `gens` random elements `X`.
pub fn random_symmetric<R: Rng>(rng: &mut R, ctx: &Arc<GroupContext>, gens: usize) -> Result<ElementSet> {
    let x = (0..gens)
        .map(|_| random_element(rng, ctx))
        .collect::<Result<Vec<_>>>()?;
    ElementSet::new(ctx.clone(), x)?.symmetrize()
}

/// Uniform `size`-subset of the integers `lo..=hi` in a one-dimensional
/// family.
pub fn random_subset<R: Rng>(rng: &mut R, ctx: &Arc<GroupContext>, lo: i64, hi: i64, size: usize) -> Result<ElementSet> {
    let span = (hi - lo + 1) as usize;
    if hi < lo || size > span {
        return Err(Error::InvalidArgument(format!("cannot draw {size} values from {lo}..={hi}")));
    }
    let values: Vec<i64> = sample(rng, span, size).into_iter().map(|i| lo + i as i64).collect();
    ElementSet::from_values(ctx.clone(), &values)
}
