use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{self, group};
use super::instances::{random_subset, random_symmetric, FAMILIES};
use super::{frac, LawReport, Rational};
use crate::error::{Error, Result};
use crate::group::{GroupContext, HomKind, Homomorphism};
use crate::setcalc::ElementSet;
use crate::structures::QBoundMode;

/// Law name, what it checks, accepted parameters.
pub const LAWS: &[(&str, &str, &[&str])] = &[
    ("pluennecke", "|mA-nA| <= K^(m+n)|A| for random A in 1..range", &["size", "range", "m", "n", "max"]),
    ("tripling", "|A^m| <= K^(m-2)|A| with K the tripling of symmetric A", &["group", "gens", "m"]),
    ("helfgott", "|pi(A)^m|/|pi(A)| <= |A^(m+2)|/|A|", &["kind", "m"]),
    ("intersection", "|A^m&B^n|/|A^2&B^2| <= |A^(m+1)||B^(n+1)|/(|A||B|), and (KL)^5 tripling of A^2&B^2", &["group", "m", "n"]),
    ("torsion", "|<A>| <= m^(K^4) K |A| in (Z/m)^d", &["modulus", "dim", "gens"]),
    ("random-doubling", "mean |A+A|/k^2 >= threshold for random k-subsets of 1..n", &["k", "n", "samples", "threshold"]),
    ("growth-scale", "min over sqrt(n) <= m <= n of |S^2m|/|S^m|, given |S^n| <= n^d|S|", &["group", "n", "d", "K"]),
    ("q3", "|Q^3| <= 72|Q| and Q^3 inside the tripled box", &["L1", "L2", "mode"]),
    ("ruzsa", "|X| <= |A^4|/|A| and A^3 in XA^2 for the Ruzsa cover", &["group", "gens"]),
    ("approx-powers", "A^m in X^(m-1)A and |A^m| <= |X|^(m-1)|A| for the greedy certificate", &["group", "gens", "m"]),
    ("free-product", "|A^2| <= 3|A| and |A^3| >= |A|^2/4 for A = H u {t} in Ck*Z", &["k"]),
    ("box-doubling", "|B+B| <= 2^d|B| and B+B in B+X for the corners X", &["dim", "L"]),
    ("dense-subset", "doubling of A inside A0 is at most K/alpha", &["size", "range"]),
    ("freiman", "|A^2| < 3|A|/2 implies A^2 is a coset, A in Z/n", &["n"]),
    ("sandwich", "P(x;L) in Q in P(x;5L) in H(Z)", &["L1", "L2", "mode"]),
];

/// `key=value` parameters. Values may contain commas: `x=9,2,L=2,1` splits
/// into `x=9,2` and `L=2,1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawParams(BTreeMap<String, String>);

impl LawParams {
    pub fn parse(s: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut last: Option<String> = None;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.split_once('=') {
                Some((k, v)) => {
                    map.insert(k.trim().to_string(), v.trim().to_string());
                    last = Some(k.trim().to_string());
                }
                None => {
                    let key = last
                        .as_ref()
                        .ok_or_else(|| Error::InvalidArgument(format!("parameter {tok:?} has no key")))?;
                    let v = map.get_mut(key).expect("last key was inserted");
                    v.push(',');
                    v.push_str(tok);
                }
            }
        }
        Ok(LawParams(map))
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.set(key, value);
        self
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad value {v:?} for parameter {key}")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn check_keys(&self, law: &str, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!(
                "law {law} takes no parameter {k:?} (accepted: {})",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

/// Runs `trials` independent trials of `law`. Trial `t` draws from a ChaCha8
/// stream seeded with `seed ^ t`; rows come back in trial order whatever the
/// thread count. Budget overruns become `budget_exceeded` rows.
pub fn run_law(law: &str, params: &LawParams, trials: u64, seed: u64, budget: usize) -> Result<Vec<LawReport>> {
    let (_, _, keys) = LAWS
        .iter()
        .find(|(name, _, _)| *name == law)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown law {law:?}")))?;
    params.check_keys(law, keys)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = seed ^ t;
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let rows = match trial(law, params, t, &mut rng, budget) {
                Ok(rows) => rows,
                Err(Error::BudgetExceeded { limit }) => vec![LawReport::budget_exceeded(law, limit)],
                Err(e) => return Err(e),
            };
            Ok(rows
                .into_iter()
                .map(|r| LawReport {
                    trial: t,
                    seed: trial_seed,
                    ..r
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn family<R: Rng>(params: &LawParams, rng: &mut R, budget: usize) -> Result<Arc<GroupContext>> {
    match params.raw("group") {
        Some(g) => group(g, budget),
        None => group(FAMILIES[rng.random_range(0..FAMILIES.len())], budget),
    }
}

fn generator_count<R: Rng>(params: &LawParams, rng: &mut R, ctx: &GroupContext) -> Result<usize> {
    let max = if ctx.descriptor().is_free_product() { 2 } else { 3 };
    match params.get("gens")? {
        Some(n) => Ok(n),
        None => Ok(rng.random_range(1..=max)),
    }
}

fn bounds_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad bound {t:?}")))
        })
        .collect()
}

fn trial(law: &str, p: &LawParams, t: u64, rng: &mut ChaCha8Rng, budget: usize) -> Result<Vec<LawReport>> {
    match law {
        "pluennecke" => {
            let ctx = group("Z", budget)?;
            let range: i64 = p.get_or("range", 10_000)?;
            let a = random_subset(rng, &ctx, 1, range, p.get_or("size", 30)?)?;
            match (p.get::<u32>("m")?, p.get::<u32>("n")?) {
                (Some(m), Some(n)) => Ok(vec![checks::pluennecke(&a, m, n)?]),
                (None, None) => checks::pluennecke_grid(&a, p.get_or("max", 3)?),
                _ => Err(Error::InvalidArgument("give both m and n or neither".into())),
            }
        }
        "tripling" => {
            let ctx = family(p, rng, budget)?;
            let g = generator_count(p, rng, &ctx)?;
            let a = random_symmetric(rng, &ctx, g)?;
            checks::tripling_powers(&a, p.get_or("m", 6)?)
        }
        "helfgott" => {
            let kind = match p.raw("kind") {
                Some(k) => k.to_string(),
                None => ["projection", "reduction", "abelianization"][(t % 3) as usize].to_string(),
            };
            let (src, hom_kind) = match kind.as_str() {
                "projection" => {
                    if rng.random_bool(0.5) {
                        ("Z^2", HomKind::CoordinateProjection(vec![0]))
                    } else {
                        ("Z^3", HomKind::CoordinateProjection(vec![0, 2]))
                    }
                }
                "reduction" => {
                    if rng.random_bool(0.5) {
                        ("Z", HomKind::ModReduction(rng.random_range(2..=12)))
                    } else {
                        ("H(Z)", HomKind::ModReduction([2, 3, 5][rng.random_range(0..3)]))
                    }
                }
                "abelianization" => {
                    if rng.random_bool(0.5) {
                        ("H(Z)", HomKind::HeisenbergAbelianization)
                    } else {
                        ("H(5)", HomKind::HeisenbergAbelianization)
                    }
                }
                other => return Err(Error::InvalidArgument(format!("unknown homomorphism kind {other:?}"))),
            };
            let ctx = group(src, budget)?;
            let hom = Homomorphism::new(ctx.descriptor(), hom_kind)?;
            let target = Arc::new(GroupContext::new(hom.target())?.with_budget(budget));
            let g = generator_count(p, rng, &ctx)?;
            let a = random_symmetric(rng, &ctx, g)?;
            checks::helfgott_projection(&a, &hom, &target, p.get_or("m", 4)?)
        }
        "intersection" => {
            let ctx = group(p.raw("group").unwrap_or("Z/101"), budget)?;
            let (ga, gb) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let a = random_symmetric(rng, &ctx, ga)?;
            let b = random_symmetric(rng, &ctx, gb)?;
            let pairs = match (p.get::<u32>("m")?, p.get::<u32>("n")?) {
                (Some(m), Some(n)) => vec![(m, n)],
                (None, None) => vec![(2, 2), (2, 3), (3, 2), (3, 3)],
                _ => return Err(Error::InvalidArgument("give both m and n or neither".into())),
            };
            checks::intersection(&a, &b, &pairs)
        }
        "torsion" => {
            let m: i64 = match p.get("modulus")? {
                Some(m) => m,
                None => [2, 3][rng.random_range(0..2)],
            };
            let d: usize = match p.get("dim")? {
                Some(d) => d,
                None => rng.random_range(1..=4),
            };
            let ctx = group(&format!("(Z/{m})^{d}"), budget)?;
            let g = match p.get("gens")? {
                Some(g) => g,
                None => rng.random_range(1..=4),
            };
            let a = random_symmetric(rng, &ctx, g)?;
            Ok(vec![checks::bounded_torsion(&a)?])
        }
        "random-doubling" => {
            let threshold: Rational = p.get_or("threshold", frac(2, 5))?;
            Ok(vec![checks::random_doubling(
                p.get_or("k", 20)?,
                p.get_or("n", 1_000_000)?,
                p.get_or("samples", 200)?,
                threshold,
                rng,
            )?])
        }
        "growth-scale" => {
            let ctx = group(p.raw("group").unwrap_or("Z^2"), budget)?;
            let s = ElementSet::new(ctx.clone(), ctx.standard_generators())?.symmetrize()?;
            Ok(vec![checks::growth_scale(
                &s,
                p.get_or("n", 16)?,
                p.get_or("d", 2)?,
                p.get("K")?,
            )?])
        }
        "q3" => checks::q3_bound(
            p.get_or("L1", 1)?,
            p.get_or("L2", 1)?,
            p.get_or("mode", QBoundMode::AsPrinted)?,
            budget,
        ),
        "ruzsa" => {
            let ctx = family(p, rng, budget)?;
            let g = generator_count(p, rng, &ctx)?;
            checks::ruzsa(&random_symmetric(rng, &ctx, g)?)
        }
        "approx-powers" => {
            let ctx = family(p, rng, budget)?;
            let g = generator_count(p, rng, &ctx)?;
            checks::approx_powers(&random_symmetric(rng, &ctx, g)?, p.get_or("m", 6)?)
        }
        "free-product" => checks::free_product(p.get_or("k", 4)?, budget),
        "box-doubling" => {
            let bounds = match p.raw("L") {
                Some(l) => bounds_list(l)?,
                None => {
                    let d: usize = match p.get("dim")? {
                        Some(d) => d,
                        None => rng.random_range(1..=3),
                    };
                    (0..d).map(|_| rng.random_range(0..=4)).collect()
                }
            };
            checks::box_doubling(&bounds, budget)
        }
        "dense-subset" => {
            let ctx = group("Z", budget)?;
            let range: i64 = p.get_or("range", 200)?;
            let a0 = random_subset(rng, &ctx, 1, range, p.get_or("size", 40)?)?;
            let keep = rng.random_range(1..=a0.len());
            let picked: Vec<_> = rand::seq::index::sample(rng, a0.len(), keep)
                .into_iter()
                .map(|i| a0.as_slice()[i].clone())
                .collect();
            let a = ElementSet::new(ctx, picked)?;
            Ok(vec![checks::dense_subset(&a0, &a)?])
        }
        "freiman" => {
            let n: i64 = match p.get("n")? {
                Some(n) => n,
                None => rng.random_range(2..=12),
            };
            let ctx = group(&format!("Z/{n}"), budget)?;
            let size = rng.random_range(1..=n);
            let a = random_subset(rng, &ctx, 0, n - 1, size as usize)?;
            Ok(vec![checks::freiman(&a)?])
        }
        "sandwich" => Ok(vec![checks::sandwich(
            p.get_or("L1", 1)?,
            p.get_or("L2", 1)?,
            p.get_or("mode", QBoundMode::AsPrinted)?,
            budget,
        )?]),
        _ => unreachable!("law names are checked against LAWS"),
    }
}
