//! Spec strings for the generator command:
//! `prog x=9,2 L=2,1`, `box L=2,1`, `nilprog x=std L=2,2`,
//! `Q L1=2 L2=3 mode=symmetric`, `coset H=6 x=1 L=2`.
//!
//! Element lists are separated by `;`. In one-dimensional integer families
//! a comma also separates elements. `std` names the standard generators.

use super::{QBoundMode, StructuredSpec};
use crate::error::{Error, Result};
use crate::group::{parse_element, GroupContext, GroupDescriptor, GroupElement};

fn bad(msg: String) -> Error {
    Error::InvalidStructure(msg)
}

fn parse_elements(ctx: &GroupContext, s: &str) -> Result<Vec<GroupElement>> {
    if s == "std" {
        return Ok(ctx.standard_generators());
    }
    let one_dim = ctx.arity() == 1 && !matches!(ctx.descriptor(), GroupDescriptor::FreeProduct { .. });
    let parts: Vec<&str> = if s.contains(';') || !one_dim {
        s.split(';').collect()
    } else {
        s.split(',').collect()
    };
    parts
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_element(ctx, p))
        .collect()
}

fn parse_bounds(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| bad(format!("bad bound {t:?}")))
        })
        .collect()
}

fn parse_one(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| bad(format!("bad bound {s:?}")))
}

/// Parses a generator spec. `mode` is the `Q` bound mode used when the spec
/// does not name one.
pub fn parse_spec(ctx: &GroupContext, spec: &str, mode: QBoundMode) -> Result<StructuredSpec> {
    let mut tokens = spec.split_whitespace();
    let kind = tokens.next().ok_or_else(|| bad("empty spec".into()))?;
    let mut x = None;
    let mut l = None;
    let mut h = None;
    let (mut l1, mut l2, mut q_mode) = (None, None, mode);
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got {tok:?}")))?;
        match key {
            "x" => x = Some(parse_elements(ctx, value)?),
            "L" => l = Some(parse_bounds(value)?),
            "H" => h = Some(parse_elements(ctx, value)?),
            "L1" => l1 = Some(parse_one(value)?),
            "L2" => l2 = Some(parse_one(value)?),
            "mode" => q_mode = value.parse()?,
            _ => return Err(bad(format!("unknown key {key:?} in {kind} spec"))),
        }
    }
    let need_l = |l: Option<Vec<u64>>| l.ok_or_else(|| bad(format!("{kind} spec needs L=...")));
    let gens_or_std = |x: Option<Vec<GroupElement>>| x.unwrap_or_else(|| ctx.standard_generators());
    Ok(match kind {
        "box" => StructuredSpec::Box { bounds: need_l(l)? },
        "prog" => StructuredSpec::Progression {
            gens: gens_or_std(x),
            bounds: need_l(l)?,
        },
        "nilprog" => StructuredSpec::Nilprogression {
            gens: gens_or_std(x),
            bounds: need_l(l)?,
        },
        "coset" => StructuredSpec::CosetProgression {
            subgroup: h.ok_or_else(|| bad("coset spec needs H=...".into()))?,
            gens: gens_or_std(x),
            bounds: need_l(l)?,
        },
        "Q" => StructuredSpec::HeisenbergQ {
            l1: l1.ok_or_else(|| bad("Q spec needs L1=...".into()))?,
            l2: l2.ok_or_else(|| bad("Q spec needs L2=...".into()))?,
            mode: q_mode,
        },
        _ => return Err(bad(format!("unknown structure {kind:?}"))),
    })
}
