//! Reduced words in the free product `C_k * Z`.
//!
//! A word alternates between syllables of the torsion factor (`h^e`, with
//! `1 <= e < k`) and the infinite cyclic factor (`t^e`, `e != 0`). The empty
//! word is the identity.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    /// Power of the order-`k` generator `h`.
    Torsion(i64),
    /// Power of the infinite-order generator `t`.
    Free(i64),
}

impl Syllable {
    fn same_factor(self, other: Syllable) -> bool {
        matches!(
            (self, other),
            (Syllable::Torsion(_), Syllable::Torsion(_)) | (Syllable::Free(_), Syllable::Free(_))
        )
    }

    pub fn exponent(self) -> i64 {
        match self {
            Syllable::Torsion(e) | Syllable::Free(e) => e,
        }
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syllable::Torsion(e) => write!(f, "h^{e}"),
            Syllable::Free(e) => write!(f, "t^{e}"),
        }
    }
}

/// Reduced word. Ordered by length first, then syllable by syllable, which
/// agrees with the byte order of its canonical encoding.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Syllable>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reduces an arbitrary syllable sequence. Returns `None` on exponent
    /// overflow in the free factor.
    pub fn reduce(syllables: impl IntoIterator<Item = Syllable>, torsion: i64) -> Option<Self> {
        let mut out = Word::identity();
        for s in syllables {
            out.push_reducing(s, torsion)?;
        }
        Some(out)
    }

    fn push_reducing(&mut self, s: Syllable, torsion: i64) -> Option<()> {
        let s = normalize(s, torsion)?;
        let Some(s) = s else { return Some(()) };
        match self.0.last().copied() {
            Some(last) if last.same_factor(s) => {
                self.0.pop();
                if let Some(merged) = merge(last, s, torsion)? {
                    self.0.push(merged);
                }
            }
            _ => self.0.push(s),
        }
        Some(())
    }

    /// Product of two reduced words. Cancellation can only happen at the
    /// junction, so the merge walks inward from there.
    pub fn multiply(&self, other: &Word, torsion: i64) -> Option<Word> {
        let mut out = self.0.clone();
        let mut i = 0;
        while i < other.0.len() {
            let next = other.0[i];
            match out.last().copied() {
                Some(last) if last.same_factor(next) => {
                    out.pop();
                    i += 1;
                    if let Some(merged) = merge(last, next, torsion)? {
                        out.push(merged);
                        break;
                    }
                }
                _ => break,
            }
        }
        out.extend_from_slice(&other.0[i..]);
        Some(Word(out))
    }

    pub fn inverse(&self, torsion: i64) -> Option<Word> {
        let mut out = Vec::with_capacity(self.0.len());
        for s in self.0.iter().rev() {
            out.push(match *s {
                Syllable::Torsion(e) => Syllable::Torsion(torsion - e),
                Syllable::Free(e) => Syllable::Free(e.checked_neg()?),
            });
        }
        Some(Word(out))
    }

    /// Checks the reduced-word invariants for `C_torsion * Z`.
    pub fn is_reduced(&self, torsion: i64) -> bool {
        let exps_ok = self.0.iter().all(|s| match *s {
            Syllable::Torsion(e) => e >= 1 && e < torsion,
            Syllable::Free(e) => e != 0,
        });
        exps_ok && self.0.windows(2).all(|w| !w[0].same_factor(w[1]))
    }

    pub fn from_syllables_unchecked(syllables: Vec<Syllable>) -> Self {
        Word(syllables)
    }
}

fn normalize(s: Syllable, torsion: i64) -> Option<Option<Syllable>> {
    Some(match s {
        Syllable::Torsion(e) => {
            let e = e.rem_euclid(torsion);
            (e != 0).then_some(Syllable::Torsion(e))
        }
        Syllable::Free(0) => None,
        Syllable::Free(e) => Some(Syllable::Free(e)),
    })
}

fn merge(a: Syllable, b: Syllable, torsion: i64) -> Option<Option<Syllable>> {
    match (a, b) {
        (Syllable::Torsion(x), Syllable::Torsion(y)) => {
            let e = (x + y) % torsion;
            Some((e != 0).then_some(Syllable::Torsion(e)))
        }
        (Syllable::Free(x), Syllable::Free(y)) => {
            let e = x.checked_add(y)?;
            Some((e != 0).then_some(Syllable::Free(e)))
        }
        _ => unreachable!("merge called on syllables from different factors"),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(e: i64) -> Syllable {
        Syllable::Torsion(e)
    }
    fn t(e: i64) -> Syllable {
        Syllable::Free(e)
    }

    #[test]
    fn cancellation_cascades_through_the_junction() {
        let a = Word::reduce([h(1), t(2), h(3)], 4).unwrap();
        let b = Word::reduce([h(1), t(-2), h(2)], 4).unwrap();
        // h t^2 h^3 . h t^-2 h^2 = h . h^2 = h^3
        assert_eq!(a.multiply(&b, 4).unwrap(), Word::reduce([h(3)], 4).unwrap());
    }

    #[test]
    fn inverse_cancels() {
        let a = Word::reduce([t(-3), h(2), t(1)], 5).unwrap();
        let inv = a.inverse(5).unwrap();
        assert!(inv.is_reduced(5));
        assert!(a.multiply(&inv, 5).unwrap().is_identity());
        assert!(inv.multiply(&a, 5).unwrap().is_identity());
    }

    #[test]
    fn reduce_normalizes_torsion_exponents() {
        let w = Word::reduce([h(5), h(-1), t(0), t(1)], 4).unwrap();
        // h^5 h^-1 = h^4 = 1
        assert_eq!(w.syllables(), &[t(1)]);
        assert_eq!(w.to_string(), "t^1");
    }

    #[test]
    fn ordering_is_length_first() {
        let short = Word::reduce([t(9)], 3).unwrap();
        let long = Word::reduce([h(1), t(1)], 3).unwrap();
        assert!(short < long);
        assert!(Word::identity() < short);
    }
}
