//! Concrete group families, canonical element representation and the group
//! operations every other module builds on.

mod hom;
mod text;
mod word;

pub use hom::{HomKind, Homomorphism};
pub use text::{format_element, parse_element};
pub use word::{Syllable, Word};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the number of elements any single set computation may hold.
pub const DEFAULT_BUDGET: usize = 10_000_000;

const MAX_DIM: usize = 4;
const MAX_MODULUS: i64 = 1 << 31;

/// Fixed-width coordinate payload. Families with fewer than four coordinates
/// keep the unused slots at zero.
pub type Coords = [i64; MAX_DIM];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    /// `Z^dim`.
    IntLattice { dim: usize },
    /// `(Z/modulus)^dim`.
    ModLattice { modulus: i64, dim: usize },
    /// `Z/order`.
    Cyclic { order: i64 },
    /// Upper unitriangular 3x3 integer matrices.
    HeisenbergZ,
    /// Upper unitriangular 3x3 matrices over `F_p`.
    HeisenbergMod { p: i64 },
    /// `SL_2(F_p)`.
    Sl2 { p: i64 },
    /// `C_torsion * Z`, generated by `h` of order `torsion` and free `t`.
    FreeProduct { torsion: i64 },
}

impl GroupDescriptor {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDescriptor(msg));
        match *self {
            GroupDescriptor::IntLattice { dim } if !(1..=MAX_DIM).contains(&dim) => {
                bad(format!("lattice dimension {dim} outside 1..=4"))
            }
            GroupDescriptor::ModLattice { modulus, dim } => {
                if !(1..=MAX_DIM).contains(&dim) {
                    bad(format!("lattice dimension {dim} outside 1..=4"))
                } else if !(2..=MAX_MODULUS).contains(&modulus) {
                    bad(format!("modulus {modulus} outside 2..=2^31"))
                } else if (modulus as u64)
                    .checked_pow(dim as u32)
                    .is_none_or(|o| o > 1 << 62)
                {
                    bad(format!("group order {modulus}^{dim} too large"))
                } else {
                    Ok(())
                }
            }
            GroupDescriptor::Cyclic { order } if !(2..=MAX_MODULUS).contains(&order) => {
                bad(format!("cyclic order {order} outside 2..=2^31"))
            }
            GroupDescriptor::HeisenbergMod { p } | GroupDescriptor::Sl2 { p } => {
                if p > MAX_MODULUS || !is_prime(p) {
                    bad(format!("{p} is not a supported prime"))
                } else {
                    Ok(())
                }
            }
            GroupDescriptor::FreeProduct { torsion } if !(2..=MAX_MODULUS).contains(&torsion) => {
                bad(format!("torsion order {torsion} outside 2..=2^31"))
            }
            _ => Ok(()),
        }
    }

    /// Number of coordinates in the payload; zero for word families.
    pub fn arity(&self) -> usize {
        match *self {
            GroupDescriptor::IntLattice { dim } | GroupDescriptor::ModLattice { dim, .. } => dim,
            GroupDescriptor::Cyclic { .. } => 1,
            GroupDescriptor::HeisenbergZ | GroupDescriptor::HeisenbergMod { .. } => 3,
            GroupDescriptor::Sl2 { .. } => 4,
            GroupDescriptor::FreeProduct { .. } => 0,
        }
    }

    pub fn is_free_product(&self) -> bool {
        matches!(self, GroupDescriptor::FreeProduct { .. })
    }

    pub fn is_abelian(&self) -> bool {
        matches!(
            self,
            GroupDescriptor::IntLattice { .. }
                | GroupDescriptor::ModLattice { .. }
                | GroupDescriptor::Cyclic { .. }
        )
    }

    /// Order of the group, `None` for infinite families.
    pub fn order(&self) -> Option<u64> {
        match *self {
            GroupDescriptor::ModLattice { modulus, dim } => (modulus as u64).checked_pow(dim as u32),
            GroupDescriptor::Cyclic { order } => Some(order as u64),
            GroupDescriptor::HeisenbergMod { p } => (p as u64).checked_pow(3),
            GroupDescriptor::Sl2 { p } => {
                let p = p as u64;
                p.checked_mul(p * p - 1)
            }
            _ => None,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupDescriptor::IntLattice { dim: 1 } => write!(f, "Z"),
            GroupDescriptor::IntLattice { dim } => write!(f, "Z^{dim}"),
            GroupDescriptor::ModLattice { modulus, dim } => write!(f, "(Z/{modulus})^{dim}"),
            GroupDescriptor::Cyclic { order } => write!(f, "Z/{order}"),
            GroupDescriptor::HeisenbergZ => write!(f, "H(Z)"),
            GroupDescriptor::HeisenbergMod { p } => write!(f, "H({p})"),
            GroupDescriptor::Sl2 { p } => write!(f, "SL2({p})"),
            GroupDescriptor::FreeProduct { torsion } => write!(f, "C{torsion}*Z"),
        }
    }
}

impl std::str::FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        text::parse_descriptor(s)
    }
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A group element in canonical form.
///
/// Coordinate families use `Vector`. Heisenberg elements are `(x, y, z)` with
/// `x` at matrix entry (1,2), `y` at (2,3) and `z` at (1,3); `SL_2` elements are
/// `(a, b, c, d)` in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Vector(Coords),
    Word(Word),
}

impl GroupElement {
    pub fn from_slice(coords: &[i64]) -> Self {
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        GroupElement::Vector(c)
    }

    pub fn coords(&self) -> Option<&Coords> {
        match self {
            GroupElement::Vector(c) => Some(c),
            GroupElement::Word(_) => None,
        }
    }

    pub fn word(&self) -> Option<&Word> {
        match self {
            GroupElement::Word(w) => Some(w),
            GroupElement::Vector(_) => None,
        }
    }

    /// Injective byte encoding. Coordinates are packed big-endian with the
    /// sign bit flipped, so byte order coincides with numeric order; words are
    /// length-prefixed syllable lists.
    pub fn encode(&self, arity: usize) -> Vec<u8> {
        match self {
            GroupElement::Vector(c) => c[..arity]
                .iter()
                .flat_map(|&v| order_preserving(v))
                .collect(),
            GroupElement::Word(w) => {
                let mut out = Vec::with_capacity(4 + 9 * w.len());
                out.extend_from_slice(&(w.len() as u32).to_be_bytes());
                for s in w.syllables() {
                    let (tag, e) = match *s {
                        Syllable::Torsion(e) => (0u8, e),
                        Syllable::Free(e) => (1u8, e),
                    };
                    out.push(tag);
                    out.extend_from_slice(&order_preserving(e));
                }
                out
            }
        }
    }
}

fn order_preserving(v: i64) -> [u8; 8] {
    ((v as u64) ^ (1 << 63)).to_be_bytes()
}

/// An instantiated group family: identity, product, inverse and membership.
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupContext {
    desc: GroupDescriptor,
    budget: usize,
}

/// Builds a shareable context for `desc`.
pub fn make_group(desc: GroupDescriptor) -> Result<Arc<GroupContext>> {
    GroupContext::new(desc).map(Arc::new)
}

impl GroupContext {
    pub fn new(desc: GroupDescriptor) -> Result<Self> {
        desc.validate()?;
        Ok(GroupContext {
            desc,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        self.desc
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn arity(&self) -> usize {
        self.desc.arity()
    }

    pub fn is_abelian(&self) -> bool {
        self.desc.is_abelian()
    }

    pub fn order(&self) -> Option<u64> {
        self.desc.order()
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn identity(&self) -> GroupElement {
        match self.desc {
            GroupDescriptor::Sl2 { .. } => GroupElement::Vector([1, 0, 0, 1]),
            GroupDescriptor::FreeProduct { .. } => GroupElement::Word(Word::identity()),
            _ => GroupElement::Vector([0; MAX_DIM]),
        }
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        *a == self.identity()
    }

    /// Builds an element from raw coordinates, reducing residues into
    /// `[0, modulus)`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        let arity = self.arity();
        if arity == 0 {
            return Err(self.invalid("word family elements are built from syllables"));
        }
        if coords.len() != arity {
            return Err(self.invalid(&format!(
                "expected {arity} coordinates, got {}",
                coords.len()
            )));
        }
        let mut c = [0; MAX_DIM];
        c[..arity].copy_from_slice(coords);
        if let Some(m) = self.modulus() {
            for v in &mut c[..arity] {
                *v = v.rem_euclid(m);
            }
        }
        let e = GroupElement::Vector(c);
        if !self.contains(&e) {
            return Err(self.invalid("determinant is not 1"));
        }
        Ok(e)
    }

    /// Builds a free-product element from syllables, reducing the word.
    pub fn word(&self, syllables: &[Syllable]) -> Result<GroupElement> {
        let GroupDescriptor::FreeProduct { torsion } = self.desc else {
            return Err(self.invalid("not a free product"));
        };
        Word::reduce(syllables.iter().copied(), torsion)
            .map(GroupElement::Word)
            .ok_or_else(|| self.overflow())
    }

    /// Membership test: `a` is in canonical form for this family.
    pub fn contains(&self, a: &GroupElement) -> bool {
        match (&self.desc, a) {
            (GroupDescriptor::FreeProduct { torsion }, GroupElement::Word(w)) => w.is_reduced(*torsion),
            (GroupDescriptor::FreeProduct { .. }, _) | (_, GroupElement::Word(_)) => false,
            (desc, GroupElement::Vector(c)) => {
                let arity = desc.arity();
                if c[arity..].iter().any(|&v| v != 0) {
                    return false;
                }
                if let Some(m) = self.modulus() {
                    if c[..arity].iter().any(|&v| v < 0 || v >= m) {
                        return false;
                    }
                }
                match *desc {
                    GroupDescriptor::Sl2 { p } => (c[0] * c[3] - c[1] * c[2]).rem_euclid(p) == 1,
                    _ => true,
                }
            }
        }
    }

    fn modulus(&self) -> Option<i64> {
        match self.desc {
            GroupDescriptor::ModLattice { modulus, .. } => Some(modulus),
            GroupDescriptor::Cyclic { order } => Some(order),
            GroupDescriptor::HeisenbergMod { p } | GroupDescriptor::Sl2 { p } => Some(p),
            _ => None,
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let (x, y) = match (a, b) {
            (GroupElement::Vector(x), GroupElement::Vector(y)) => (x, y),
            (GroupElement::Word(x), GroupElement::Word(y)) => {
                let GroupDescriptor::FreeProduct { torsion } = self.desc else {
                    return Err(self.invalid("word element in a coordinate family"));
                };
                return x
                    .multiply(y, torsion)
                    .map(GroupElement::Word)
                    .ok_or_else(|| self.overflow());
            }
            _ => return Err(self.invalid("mixed element representations")),
        };
        let mut out = [0i64; MAX_DIM];
        match self.desc {
            GroupDescriptor::IntLattice { dim } => {
                for i in 0..dim {
                    out[i] = x[i].checked_add(y[i]).ok_or_else(|| self.overflow())?;
                }
            }
            GroupDescriptor::ModLattice { modulus, dim } => {
                for i in 0..dim {
                    out[i] = (x[i] + y[i]) % modulus;
                }
            }
            GroupDescriptor::Cyclic { order } => out[0] = (x[0] + y[0]) % order,
            GroupDescriptor::HeisenbergZ => {
                let of = || self.overflow();
                out[0] = x[0].checked_add(y[0]).ok_or_else(of)?;
                out[1] = x[1].checked_add(y[1]).ok_or_else(of)?;
                out[2] = x[0]
                    .checked_mul(y[1])
                    .and_then(|c| c.checked_add(x[2]))
                    .and_then(|c| c.checked_add(y[2]))
                    .ok_or_else(of)?;
            }
            GroupDescriptor::HeisenbergMod { p } => {
                out[0] = (x[0] + y[0]) % p;
                out[1] = (x[1] + y[1]) % p;
                out[2] = (x[2] + y[2] + x[0] * y[1]) % p;
            }
            GroupDescriptor::Sl2 { p } => {
                out[0] = (x[0] * y[0] + x[1] * y[2]) % p;
                out[1] = (x[0] * y[1] + x[1] * y[3]) % p;
                out[2] = (x[2] * y[0] + x[3] * y[2]) % p;
                out[3] = (x[2] * y[1] + x[3] * y[3]) % p;
            }
            GroupDescriptor::FreeProduct { .. } => {
                return Err(self.invalid("coordinate element in a word family"))
            }
        }
        Ok(GroupElement::Vector(out))
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        let x = match a {
            GroupElement::Vector(x) => x,
            GroupElement::Word(w) => {
                let GroupDescriptor::FreeProduct { torsion } = self.desc else {
                    return Err(self.invalid("word element in a coordinate family"));
                };
                return w
                    .inverse(torsion)
                    .map(GroupElement::Word)
                    .ok_or_else(|| self.overflow());
            }
        };
        let mut out = [0i64; MAX_DIM];
        let neg_mod = |v: i64, m: i64| (m - v) % m;
        match self.desc {
            GroupDescriptor::IntLattice { dim } => {
                for i in 0..dim {
                    out[i] = x[i].checked_neg().ok_or_else(|| self.overflow())?;
                }
            }
            GroupDescriptor::ModLattice { modulus, dim } => {
                for i in 0..dim {
                    out[i] = neg_mod(x[i], modulus);
                }
            }
            GroupDescriptor::Cyclic { order } => out[0] = neg_mod(x[0], order),
            GroupDescriptor::HeisenbergZ => {
                let of = || self.overflow();
                out[0] = x[0].checked_neg().ok_or_else(of)?;
                out[1] = x[1].checked_neg().ok_or_else(of)?;
                out[2] = x[0]
                    .checked_mul(x[1])
                    .and_then(|c| c.checked_sub(x[2]))
                    .ok_or_else(of)?;
            }
            GroupDescriptor::HeisenbergMod { p } => {
                out[0] = neg_mod(x[0], p);
                out[1] = neg_mod(x[1], p);
                out[2] = (x[0] * x[1] % p + neg_mod(x[2], p)) % p;
            }
            GroupDescriptor::Sl2 { p } => {
                out = [x[3], neg_mod(x[1], p), neg_mod(x[2], p), x[0]];
            }
            GroupDescriptor::FreeProduct { .. } => {
                return Err(self.invalid("coordinate element in a word family"))
            }
        }
        Ok(GroupElement::Vector(out))
    }

    /// `a^e` by binary exponentiation; negative exponents invert first.
    pub fn pow(&self, a: &GroupElement, e: i64) -> Result<GroupElement> {
        let mut base = if e < 0 { self.invert(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let ai = self.invert(a)?;
        let bi = self.invert(b)?;
        let left = self.multiply(&ai, &bi)?;
        let right = self.multiply(a, b)?;
        self.multiply(&left, &right)
    }

    pub fn encode(&self, a: &GroupElement) -> Vec<u8> {
        a.encode(self.arity())
    }

    /// Every element of a finite group, in canonical order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        let order = self
            .order()
            .ok_or_else(|| Error::InfiniteGroup(self.desc.to_string()))?;
        if order > self.budget as u64 {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        let mut out = Vec::with_capacity(order as usize);
        match self.desc {
            GroupDescriptor::Cyclic { order } => {
                out.extend((0..order).map(|v| GroupElement::from_slice(&[v])));
            }
            GroupDescriptor::ModLattice { modulus, dim } => {
                let mut c = [0i64; MAX_DIM];
                loop {
                    out.push(GroupElement::Vector(c));
                    // odometer, last coordinate fastest
                    let mut i = dim;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        c[i] += 1;
                        if c[i] < modulus {
                            break;
                        }
                        c[i] = 0;
                    }
                }
            }
            GroupDescriptor::HeisenbergMod { p } => {
                for x in 0..p {
                    for y in 0..p {
                        for z in 0..p {
                            out.push(GroupElement::from_slice(&[x, y, z]));
                        }
                    }
                }
            }
            GroupDescriptor::Sl2 { p } => {
                for a in 0..p {
                    for b in 0..p {
                        for c in 0..p {
                            for d in 0..p {
                                if (a * d - b * c).rem_euclid(p) == 1 {
                                    out.push(GroupElement::Vector([a, b, c, d]));
                                }
                            }
                        }
                    }
                }
            }
            _ => unreachable!("finite order reported for an infinite family"),
        }
        Ok(out)
    }

    /// Canonical generators: unit vectors for lattices and cyclic groups,
    /// the unipotents `x1` (entry (2,3)) and `x2` (entry (1,2)) for Heisenberg
    /// groups, the two elementary unipotents for `SL_2`, and `h`, `t` for the
    /// free product.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        match self.desc {
            GroupDescriptor::IntLattice { dim } | GroupDescriptor::ModLattice { dim, .. } => (0..dim)
                .map(|i| {
                    let mut c = [0; MAX_DIM];
                    c[i] = 1;
                    GroupElement::Vector(c)
                })
                .collect(),
            GroupDescriptor::Cyclic { .. } => vec![GroupElement::from_slice(&[1])],
            GroupDescriptor::HeisenbergZ | GroupDescriptor::HeisenbergMod { .. } => vec![
                GroupElement::from_slice(&[0, 1, 0]),
                GroupElement::from_slice(&[1, 0, 0]),
            ],
            GroupDescriptor::Sl2 { .. } => vec![
                GroupElement::Vector([1, 1, 0, 1]),
                GroupElement::Vector([1, 0, 1, 1]),
            ],
            GroupDescriptor::FreeProduct { .. } => vec![
                GroupElement::Word(Word::from_syllables_unchecked(vec![Syllable::Torsion(1)])),
                GroupElement::Word(Word::from_syllables_unchecked(vec![Syllable::Free(1)])),
            ],
        }
    }

    fn invalid(&self, reason: &str) -> Error {
        Error::InvalidElement {
            group: self.desc.to_string(),
            reason: reason.to_string(),
        }
    }

    fn overflow(&self) -> Error {
        Error::Overflow(self.desc.to_string())
    }
}
