use super::{GroupContext, GroupDescriptor, GroupElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomKind {
    /// Keeps the listed coordinates of a lattice, in order.
    CoordinateProjection(Vec<usize>),
    /// Reduces coordinates modulo `m`.
    ModReduction(i64),
    /// `H -> H/[H,H]`, `(x, y, z) -> (x, y)`.
    HeisenbergAbelianization,
    /// Integer matrix `Z^d -> Z^e`, one row per target coordinate.
    Linear(Vec<Vec<i64>>),
}

/// A homomorphism between two supported families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: GroupDescriptor,
    target: GroupDescriptor,
    kind: HomKind,
}

impl Homomorphism {
    /// Validates `kind` against `source` and derives the target family.
    pub fn new(source: GroupDescriptor, kind: HomKind) -> Result<Self> {
        source.validate()?;
        let incompatible =
            || Error::IncompatibleFamilies(format!("{kind:?} does not apply to {source}"));
        let target = match (&kind, source) {
            (HomKind::CoordinateProjection(idx), GroupDescriptor::IntLattice { dim }) => {
                check_indices(idx, dim).ok_or_else(incompatible)?;
                GroupDescriptor::IntLattice { dim: idx.len() }
            }
            (HomKind::CoordinateProjection(idx), GroupDescriptor::ModLattice { modulus, dim }) => {
                check_indices(idx, dim).ok_or_else(incompatible)?;
                GroupDescriptor::ModLattice {
                    modulus,
                    dim: idx.len(),
                }
            }
            (&HomKind::ModReduction(m), GroupDescriptor::IntLattice { dim: 1 }) => {
                GroupDescriptor::Cyclic { order: m }
            }
            (&HomKind::ModReduction(m), GroupDescriptor::IntLattice { dim }) => {
                GroupDescriptor::ModLattice { modulus: m, dim }
            }
            (&HomKind::ModReduction(m), GroupDescriptor::Cyclic { order }) if m > 0 && order % m == 0 => {
                GroupDescriptor::Cyclic { order: m }
            }
            (&HomKind::ModReduction(m), GroupDescriptor::ModLattice { modulus, dim })
                if m > 0 && modulus % m == 0 =>
            {
                GroupDescriptor::ModLattice { modulus: m, dim }
            }
            (&HomKind::ModReduction(p), GroupDescriptor::HeisenbergZ) => GroupDescriptor::HeisenbergMod { p },
            (HomKind::HeisenbergAbelianization, GroupDescriptor::HeisenbergZ) => {
                GroupDescriptor::IntLattice { dim: 2 }
            }
            (HomKind::HeisenbergAbelianization, GroupDescriptor::HeisenbergMod { p }) => {
                GroupDescriptor::ModLattice { modulus: p, dim: 2 }
            }
            (HomKind::Linear(rows), GroupDescriptor::IntLattice { dim }) => {
                if rows.is_empty() || rows.len() > 4 || rows.iter().any(|r| r.len() != dim) {
                    return Err(incompatible());
                }
                GroupDescriptor::IntLattice { dim: rows.len() }
            }
            _ => return Err(incompatible()),
        };
        target.validate()?;
        Ok(Homomorphism {
            source,
            target,
            kind,
        })
    }

    pub fn source(&self) -> GroupDescriptor {
        self.source
    }

    pub fn target(&self) -> GroupDescriptor {
        self.target
    }

    pub fn kind(&self) -> &HomKind {
        &self.kind
    }

    /// Image of `a`, which must lie in the source family.
    pub fn apply(&self, a: &GroupElement) -> Result<GroupElement> {
        let GroupElement::Vector(c) = a else {
            return Err(Error::IncompatibleFamilies(format!(
                "element is not in {}",
                self.source
            )));
        };
        let overflow = || Error::Overflow(self.target.to_string());
        let out = match &self.kind {
            HomKind::CoordinateProjection(idx) => {
                let v: Vec<i64> = idx.iter().map(|&i| c[i]).collect();
                GroupElement::from_slice(&v)
            }
            &HomKind::ModReduction(m) => {
                let arity = self.source.arity();
                let v: Vec<i64> = c[..arity].iter().map(|x| x.rem_euclid(m)).collect();
                GroupElement::from_slice(&v)
            }
            HomKind::HeisenbergAbelianization => GroupElement::from_slice(&c[..2]),
            HomKind::Linear(rows) => {
                let mut v = Vec::with_capacity(rows.len());
                for row in rows {
                    let mut acc = 0i64;
                    for (w, x) in row.iter().zip(c.iter()) {
                        acc = w
                            .checked_mul(*x)
                            .and_then(|t| t.checked_add(acc))
                            .ok_or_else(overflow)?;
                    }
                    v.push(acc);
                }
                GroupElement::from_slice(&v)
            }
        };
        Ok(out)
    }

    /// Checks that `a` lies in `ctx` and that `ctx` is the source family.
    pub fn apply_in(&self, ctx: &GroupContext, a: &GroupElement) -> Result<GroupElement> {
        if ctx.descriptor() != self.source || !ctx.contains(a) {
            return Err(Error::IncompatibleFamilies(format!(
                "element is not in {}",
                self.source
            )));
        }
        self.apply(a)
    }
}

fn check_indices(idx: &[usize], dim: usize) -> Option<()> {
    (!idx.is_empty() && idx.len() <= 4 && idx.iter().all(|&i| i < dim)).then_some(())
}
