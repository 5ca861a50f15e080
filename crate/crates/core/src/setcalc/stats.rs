use num_rational::Ratio;
use rustc_hash::FxHashSet;

use super::ElementSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingStats {
    pub size: usize,
    pub square_size: usize,
    pub cube_size: Option<usize>,
    /// `|A^2| / |A|`.
    pub doubling: Ratio<u64>,
    /// `|A^3| / |A|`, when requested.
    pub tripling: Option<Ratio<u64>>,
    pub symmetric: bool,
    pub contains_identity: bool,
}

pub fn doubling_stats(a: &ElementSet, with_tripling: bool) -> Result<DoublingStats> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.len() as u64;
    let a2 = a.product(a)?;
    let cube_size = if with_tripling { Some(a2.product(a)?.len()) } else { None };
    Ok(DoublingStats {
        size: a.len(),
        square_size: a2.len(),
        cube_size,
        doubling: Ratio::new(a2.len() as u64, n),
        tripling: cube_size.map(|c| Ratio::new(c as u64, n)),
        symmetric: a.is_symmetric(),
        contains_identity: a.contains_identity(),
    })
}

/// `[|S^1|, ..., |S^n|]` by frontier expansion. `S` must be symmetric and
/// contain the identity so that the balls are nested.
pub fn growth_ball(s: &ElementSet, n: u32) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ball radius must be at least 1".into()));
    }
    if !s.contains_identity() {
        return Err(Error::MissingIdentity);
    }
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let ctx = s.ctx();
    let mut ball: FxHashSet<_> = s.iter().cloned().collect();
    let mut frontier: Vec<_> = s.iter().cloned().collect();
    let mut sizes = vec![ball.len()];
    for _ in 1..n {
        let mut next = Vec::new();
        for g in &frontier {
            for x in s {
                let h = ctx.multiply(g, x)?;
                if !ball.contains(&h) {
                    ball.insert(h.clone());
                    next.push(h);
                }
            }
            if ball.len() > ctx.budget() {
                return Err(Error::BudgetExceeded { limit: ctx.budget() });
            }
        }
        frontier = next;
        sizes.push(ball.len());
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn worked_stats() {
        let z10 = make_group("Z/10".parse().unwrap()).unwrap();
        let evens = ElementSet::from_values(z10.clone(), &[0, 2, 4, 6, 8]).unwrap();
        let st = doubling_stats(&evens, true).unwrap();
        assert_eq!(st.doubling, Ratio::from_integer(1));
        assert!(st.symmetric && st.contains_identity);

        let odds = ElementSet::from_values(z10, &[1, 3, 5, 7, 9]).unwrap();
        let st = doubling_stats(&odds, false).unwrap();
        assert_eq!(st.doubling, Ratio::from_integer(1));
        assert!(st.symmetric && !st.contains_identity);

        let z = make_group("Z".parse().unwrap()).unwrap();
        let a = ElementSet::from_values(z, &[0, 1, 5]).unwrap();
        assert_eq!(doubling_stats(&a, false).unwrap().doubling, Ratio::from_integer(2));
        assert!(doubling_stats(&ElementSet::empty(a.ctx().clone()), false).is_err());
    }

    #[test]
    fn diamond_ball() {
        let z2 = make_group("Z^2".parse().unwrap()).unwrap();
        let s = ElementSet::from_coords(z2, &[&[0, 0], &[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap();
        let balls = growth_ball(&s, 16).unwrap();
        for (i, &b) in balls.iter().enumerate() {
            let n = i + 1;
            assert_eq!(b, 2 * n * n + 2 * n + 1);
        }
        assert_eq!(balls[3], 41);
        assert_eq!(balls[15], 545);
    }

    #[test]
    fn cyclic_saturation() {
        let z10 = make_group("Z/10".parse().unwrap()).unwrap();
        let s = ElementSet::from_values(z10, &[1]).unwrap().symmetrize().unwrap();
        let balls = growth_ball(&s, 8).unwrap();
        assert_eq!(balls, vec![3, 5, 7, 9, 10, 10, 10, 10]);
    }

    #[test]
    fn heisenberg_ball_matches_power() {
        let h = make_group("H(Z)".parse().unwrap()).unwrap();
        let gens = ElementSet::new(h.clone(), h.standard_generators()).unwrap();
        let s = gens.symmetrize().unwrap();
        let balls = growth_ball(&s, 6).unwrap();
        let powers = s.powers(6).unwrap();
        for (b, p) in balls.iter().zip(&powers) {
            assert_eq!(*b, p.len());
        }
        assert!(balls.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn hypotheses_enforced() {
        let z = make_group("Z".parse().unwrap()).unwrap();
        let a = ElementSet::from_values(z.clone(), &[-1, 1]).unwrap();
        assert_eq!(growth_ball(&a, 3), Err(Error::MissingIdentity));
        let b = ElementSet::from_values(z, &[0, 1]).unwrap();
        assert_eq!(growth_ball(&b, 3), Err(Error::NotSymmetric));
    }
}
