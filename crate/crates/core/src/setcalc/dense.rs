//! Bitset sumsets for one-dimensional integer and cyclic sets.
//!
//! A sumset `A + B` over a window of `W` integers costs `min(|A|,|B|) * W/64`
//! word operations instead of `|A||B|` hash insertions.

/// Bit `i` represents the integer `offset + i`.
#[derive(Clone, Debug)]
pub(crate) struct DenseLine {
    pub offset: i64,
    pub len: usize,
    pub words: Vec<u64>,
}

/// Windows longer than this fall back to the hashed product.
pub(crate) const MAX_WINDOW: u64 = 1 << 27;

impl DenseLine {
    pub fn from_sorted(values: &[i64]) -> Option<Self> {
        let (&lo, &hi) = (values.first()?, values.last()?);
        let len = window(lo, hi)?;
        let mut words = vec![0u64; len.div_ceil(64)];
        for &v in values {
            let i = (v - lo) as usize;
            words[i / 64] |= 1 << (i % 64);
        }
        Some(DenseLine {
            offset: lo,
            len,
            words,
        })
    }

    /// Residues in `0..n` as a full-window line.
    pub fn residues(values: &[i64], n: usize) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for &v in values {
            words[v as usize / 64] |= 1 << (v as usize % 64);
        }
        DenseLine {
            offset: 0,
            len: n,
            words,
        }
    }

    pub fn values(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(self.offset + (wi * 64 + b) as i64);
                w &= w - 1;
            }
        }
        out
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

pub(crate) fn window(lo: i64, hi: i64) -> Option<usize> {
    let span = (hi as i128) - (lo as i128) + 1;
    (span > 0 && span as u64 <= MAX_WINDOW).then_some(span as usize)
}

/// ORs `src` into `dst` shifted up by `shift` bits.
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (q, r) = (shift / 64, shift % 64);
    if r == 0 {
        for (d, s) in dst[q..].iter_mut().zip(src) {
            *d |= *s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            if s == 0 {
                continue;
            }
            dst[q + i] |= s << r;
            if q + i + 1 < dst.len() {
                dst[q + i + 1] |= s >> (64 - r);
            }
        }
    }
}

/// `A + B` over the integers. `small` provides the shifts, `big` is shifted.
pub(crate) fn sumset(big: &DenseLine, small: &[i64]) -> Option<DenseLine> {
    let (&s_lo, &s_hi) = (small.first()?, small.last()?);
    let lo = big.offset.checked_add(s_lo)?;
    let hi = (big.offset + big.len as i64 - 1).checked_add(s_hi)?;
    let len = window(lo, hi)?;
    let mut words = vec![0u64; len.div_ceil(64)];
    for &s in small {
        or_shifted(&mut words, &big.words, (s - s_lo) as usize);
    }
    Some(DenseLine {
        offset: lo,
        len,
        words,
    })
}

/// `A + B` in `Z/n`, where `big` covers residues `0..n` (offset 0, len n)
/// and `small` holds residues.
pub(crate) fn cyclic_sumset(big: &DenseLine, small: &[i64], n: usize) -> DenseLine {
    // Linear sum lands in [0, 2n - 1); fold the top half back down.
    let mut lin = vec![0u64; (2 * n).div_ceil(64)];
    for &s in small {
        or_shifted(&mut lin, &big.words, s as usize);
    }
    let words_n = n.div_ceil(64);
    let mut out = lin[..words_n].to_vec();
    let (q, r) = (n / 64, n % 64);
    for (i, word) in out.iter_mut().enumerate() {
        let lo_part = lin.get(q + i).copied().unwrap_or(0);
        let hi_part = lin.get(q + i + 1).copied().unwrap_or(0);
        *word |= if r == 0 {
            lo_part
        } else {
            (lo_part >> r) | (hi_part << (64 - r))
        };
    }
    if !n.is_multiple_of(64) {
        out[words_n - 1] &= (1u64 << (n % 64)) - 1;
    }
    DenseLine {
        offset: 0,
        len: n,
        words: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn naive(a: &[i64], b: &[i64], modulus: Option<i64>) -> Vec<i64> {
        let mut s = BTreeSet::new();
        for x in a {
            for y in b {
                s.insert(match modulus {
                    Some(m) => (x + y).rem_euclid(m),
                    None => x + y,
                });
            }
        }
        s.into_iter().collect()
    }

    #[test]
    fn integer_sumset_matches_naive() {
        let a = vec![-130, -7, 0, 1, 5, 64, 200];
        let b = vec![-3, 0, 63, 64, 65];
        let d = DenseLine::from_sorted(&a).unwrap();
        let s = sumset(&d, &b).unwrap();
        assert_eq!(s.values(), naive(&a, &b, None));
        assert_eq!(s.count(), naive(&a, &b, None).len());
    }

    #[test]
    fn cyclic_sumset_matches_naive() {
        for n in [2usize, 7, 63, 64, 65, 101, 130] {
            let a: Vec<i64> = (0..n as i64).filter(|v| v % 3 == 1 || *v == 0).collect();
            let b: Vec<i64> = (0..n as i64).filter(|v| v % 5 == 2).collect();
            if b.is_empty() {
                continue;
            }
            let d = DenseLine::residues(&a, n);
            let s = cyclic_sumset(&d, &b, n);
            assert_eq!(s.values(), naive(&a, &b, Some(n as i64)), "n = {n}");
        }
    }
}
