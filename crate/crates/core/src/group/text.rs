//! Text formats: the group descriptor mini-language (`Z^2`, `Z/10`,
//! `(Z/5)^3`, `H(Z)`, `H(7)`, `SL2(7)`, `C4*Z`) and the one-element-per-line
//! element syntax (`1,-2,3` or `h^2.t^-3.h^1`).

use super::{GroupContext, GroupDescriptor, GroupElement, Syllable};
use crate::error::{Error, Result};

pub(crate) fn parse_descriptor(s: &str) -> Result<GroupDescriptor> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidDescriptor(format!("cannot parse group {s:?}"));
    let int = |t: &str| t.parse::<i64>().map_err(|_| bad());
    let dim = |t: &str| t.parse::<usize>().map_err(|_| bad());

    let desc = if compact == "Z" {
        GroupDescriptor::IntLattice { dim: 1 }
    } else if let Some(d) = compact.strip_prefix("Z^") {
        GroupDescriptor::IntLattice { dim: dim(d)? }
    } else if let Some(n) = compact.strip_prefix("Z/") {
        GroupDescriptor::Cyclic { order: int(n)? }
    } else if let Some(rest) = compact.strip_prefix("(Z/") {
        let (m, d) = rest.split_once(")^").ok_or_else(bad)?;
        GroupDescriptor::ModLattice {
            modulus: int(m)?,
            dim: dim(d)?,
        }
    } else if compact == "H(Z)" {
        GroupDescriptor::HeisenbergZ
    } else if let Some(p) = compact.strip_prefix("H(").and_then(|r| r.strip_suffix(')')) {
        GroupDescriptor::HeisenbergMod { p: int(p)? }
    } else if let Some(p) = compact.strip_prefix("SL2(").and_then(|r| r.strip_suffix(')')) {
        GroupDescriptor::Sl2 { p: int(p)? }
    } else if let Some(k) = compact.strip_prefix('C').and_then(|r| r.strip_suffix("*Z")) {
        GroupDescriptor::FreeProduct { torsion: int(k)? }
    } else {
        return Err(bad());
    };
    desc.validate()?;
    Ok(desc)
}

/// Parses one element in the line format of `ctx`'s family.
pub fn parse_element(ctx: &GroupContext, s: &str) -> Result<GroupElement> {
    let s = s.trim();
    let invalid = |reason: String| Error::InvalidElement {
        group: ctx.descriptor().to_string(),
        reason,
    };
    if let GroupDescriptor::FreeProduct { .. } = ctx.descriptor() {
        if s == "e" || s == "1" {
            return Ok(ctx.identity());
        }
        let mut syllables = Vec::new();
        for tok in s.split('.') {
            let tok = tok.trim();
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| invalid(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            syllables.push(match base {
                "h" => Syllable::Torsion(exp),
                "t" => Syllable::Free(exp),
                _ => return Err(invalid(format!("unknown generator {base:?}"))),
            });
        }
        return ctx.word(&syllables);
    }
    let coords = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| invalid(format!("bad integer {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ctx.element(&coords)
}

pub fn format_element(ctx: &GroupContext, a: &GroupElement) -> String {
    match a {
        GroupElement::Word(w) => w.to_string(),
        GroupElement::Vector(c) => c[..ctx.arity()]
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
    }
}
