//! Cayley graphs of finite groups, vertex boundaries, Cheeger constants and
//! the SL2 product-growth probe.

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{format_element, GroupContext, GroupDescriptor, GroupElement};
use crate::setcalc::ElementSet;

/// Largest graph the exact Cheeger scan accepts.
pub const EXACT_LIMIT: usize = 24;

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    ctx: Arc<GroupContext>,
    vertices: Vec<GroupElement>,
    adjacency: Vec<Vec<usize>>,
    gens: ElementSet,
}

/// `x ~ xs` for `s ∈ S \ {1}`, vertices in canonical order.
pub fn build_cayley(s: &ElementSet) -> Result<CayleyGraph> {
    let mut vertices = s.ctx().enumerate()?;
    vertices.sort_unstable();
    build_cayley_with_order(s, vertices)
}

/// As [`build_cayley`] with the vertex indexing given by `vertices`, which
/// must list every group element once.
pub fn build_cayley_with_order(s: &ElementSet, vertices: Vec<GroupElement>) -> Result<CayleyGraph> {
    let ctx = s.ctx().clone();
    let order = ctx
        .order()
        .ok_or_else(|| Error::InfiniteGroup(ctx.descriptor().to_string()))?;
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let index: FxHashMap<GroupElement, usize> = vertices.iter().cloned().zip(0..).collect();
    if index.len() != vertices.len() || vertices.len() as u64 != order {
        return Err(Error::InvalidArgument("vertex order must list every element once".into()));
    }
    let steps: Vec<&GroupElement> = s.iter().filter(|g| !ctx.is_identity(g)).collect();
    let mut adjacency = Vec::with_capacity(vertices.len());
    for x in &vertices {
        let mut nbrs = steps
            .iter()
            .map(|g| Ok(index[&ctx.multiply(x, g)?]))
            .collect::<Result<Vec<_>>>()?;
        nbrs.sort_unstable();
        adjacency.push(nbrs);
    }
    let graph = CayleyGraph {
        ctx,
        vertices,
        adjacency,
        gens: s.clone(),
    };
    let reached = graph.component_size(0);
    if reached != graph.len() {
        return Err(Error::NotGenerating { reached, order });
    }
    Ok(graph)
}

impl CayleyGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn generators(&self) -> &ElementSet {
        &self.gens
    }

    pub fn degree(&self) -> usize {
        self.adjacency.first().map_or(0, Vec::len)
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.vertices.iter().position(|v| v == g)
    }

    fn component_size(&self, start: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut n = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    n += 1;
                    stack.push(w);
                }
            }
        }
        n
    }

    /// Undirected edges `u < v`, one per line.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs.iter().filter(|&&v| u < v) {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        out
    }

    /// `index element`, one vertex per line.
    pub fn vertex_map(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "{i} {}", format_element(&self.ctx, g));
        }
        out
    }
}

/// Vertices outside `set` adjacent to some vertex of `set`, ascending.
pub fn vertex_boundary(g: &CayleyGraph, set: &[usize]) -> Result<Vec<usize>> {
    let mut inside = vec![false; g.len()];
    for &v in set {
        if v >= g.len() {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let mut hit = vec![false; g.len()];
    for &v in set {
        for &w in g.neighbors(v) {
            if !inside[w] {
                hit[w] = true;
            }
        }
    }
    Ok((0..g.len()).filter(|&v| hit[v]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheegerMode {
    Exact,
    Heuristic { iters: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerResult {
    /// `|∂W| / |W|` for the witness `W`; equal to `h` in exact mode.
    pub upper: Ratio<u64>,
    /// Exact mode: `h` itself. Heuristic mode: `1/⌊n/2⌋`, which holds for
    /// any connected graph since every nonempty `W` of size at most `n/2`
    /// has a boundary vertex.
    pub lower: Ratio<u64>,
    pub witness: Vec<usize>,
    pub exact: bool,
}

fn ratio_less(a: (u32, u32), b: (u32, u32)) -> bool {
    (a.0 as u64) * (b.1 as u64) < (b.0 as u64) * (a.1 as u64)
}

pub fn cheeger(g: &CayleyGraph, mode: CheegerMode) -> Result<CheegerResult> {
    if g.len() < 2 {
        return Err(Error::InvalidArgument("the Cheeger constant needs at least two vertices".into()));
    }
    match mode {
        CheegerMode::Exact => cheeger_exact(g),
        CheegerMode::Heuristic { iters, seed } => Ok(cheeger_heuristic(g, iters, seed)),
    }
}

/// Minimum of `|∂W|/|W|` over all `W` with `1 <= |W| <= n/2`. Ties go to the
/// numerically smallest vertex mask, so the witness does not depend on how
/// the scan is split across threads.
fn cheeger_exact(g: &CayleyGraph) -> Result<CheegerResult> {
    let n = g.len();
    if n > EXACT_LIMIT {
        return Err(Error::TooLargeForExact {
            vertices: n,
            limit: EXACT_LIMIT,
        });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let low_bits = n.min(16);
    let high_bits = n - low_bits;
    let union_table = |offset: usize, bits: usize| -> Vec<u32> {
        let mut t = vec![0u32; 1 << bits];
        for m in 1usize..(1 << bits) {
            let low = m.trailing_zeros() as usize;
            t[m] = t[m & (m - 1)] | nbr[offset + low];
        }
        t
    };
    let low_table = union_table(0, low_bits);
    let high_table = union_table(low_bits, high_bits);
    let half = (n / 2) as u32;

    // (|∂W|, |W|, mask)
    let best = (0u32..(1 << high_bits))
        .into_par_iter()
        .filter_map(|hi| {
            let hi_count = hi.count_ones();
            if hi_count > half {
                return None;
            }
            let hi_nbr = high_table[hi as usize];
            let mut best: Option<(u32, u32, u32)> = None;
            for lo in 0u32..(1 << low_bits) {
                let size = hi_count + lo.count_ones();
                if size == 0 || size > half {
                    continue;
                }
                let mask = hi << low_bits | lo;
                let boundary = ((low_table[lo as usize] | hi_nbr) & !mask).count_ones();
                let better = match best {
                    None => true,
                    Some((b, s, _)) => ratio_less((boundary, size), (b, s)),
                };
                if better {
                    best = Some((boundary, size, mask));
                }
            }
            best
        })
        .reduce_with(|a, b| {
            if ratio_less((b.0, b.1), (a.0, a.1)) || (!ratio_less((a.0, a.1), (b.0, b.1)) && b.2 < a.2) {
                b
            } else {
                a
            }
        })
        .expect("n >= 2 gives a nonempty scan");
    let value = Ratio::new(best.0 as u64, best.1 as u64);
    Ok(CheegerResult {
        upper: value,
        lower: value,
        witness: (0..n).filter(|&v| best.2 >> v & 1 == 1).collect(),
        exact: true,
    })
}

struct LocalState<'a> {
    g: &'a CayleyGraph,
    inside: Vec<bool>,
    /// For each vertex, how many of its neighbors are inside.
    touching: Vec<u32>,
    size: u32,
    boundary: u32,
}

impl<'a> LocalState<'a> {
    fn new(g: &'a CayleyGraph) -> Self {
        LocalState {
            g,
            inside: vec![false; g.len()],
            touching: vec![0; g.len()],
            size: 0,
            boundary: 0,
        }
    }

    fn add(&mut self, v: usize) {
        if self.touching[v] > 0 {
            self.boundary -= 1;
        }
        self.inside[v] = true;
        self.size += 1;
        for &w in self.g.neighbors(v) {
            if !self.inside[w] && self.touching[w] == 0 {
                self.boundary += 1;
            }
            self.touching[w] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.inside[v] = false;
        self.size -= 1;
        for &w in self.g.neighbors(v) {
            self.touching[w] -= 1;
            if !self.inside[w] && self.touching[w] == 0 {
                self.boundary -= 1;
            }
        }
        if self.touching[v] > 0 {
            self.boundary += 1;
        }
    }

    fn ratio(&self) -> (u32, u32) {
        (self.boundary, self.size)
    }
}

/// Seeded local search: restarts from random balls, then add/remove moves
/// that do not worsen `|∂W|/|W|`. Only an upper bound on `h`.
fn cheeger_heuristic(g: &CayleyGraph, iters: u64, seed: u64) -> CheegerResult {
    let n = g.len();
    let half = (n / 2) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<((u32, u32), Vec<usize>)> = None;
    let restart_every = (4 * n as u64).max(64);
    let mut done = 0u64;
    while done < iters.max(1) {
        let mut st = LocalState::new(g);
        let target = rng.random_range(1..=half);
        let start = rng.random_range(0..n);
        let mut queue = std::collections::VecDeque::from([start]);
        let mut queued = vec![false; n];
        queued[start] = true;
        while let Some(v) = queue.pop_front() {
            if st.size == target {
                break;
            }
            st.add(v);
            for &w in g.neighbors(v) {
                if !queued[w] {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let record = |st: &LocalState, best: &mut Option<((u32, u32), Vec<usize>)>| {
            let r = st.ratio();
            if best.as_ref().is_none_or(|(b, _)| ratio_less(r, *b)) {
                *best = Some((r, (0..n).filter(|&v| st.inside[v]).collect()));
            }
        };
        record(&st, &mut best);
        for _ in 0..restart_every {
            if done >= iters.max(1) {
                break;
            }
            done += 1;
            let v = rng.random_range(0..n);
            let before = st.ratio();
            if st.inside[v] {
                if st.size == 1 {
                    continue;
                }
                st.remove(v);
                if ratio_less(before, st.ratio()) {
                    st.add(v);
                }
            } else if st.touching[v] > 0 && st.size < half {
                st.add(v);
                if ratio_less(before, st.ratio()) {
                    st.remove(v);
                }
            }
            record(&st, &mut best);
        }
    }
    let ((b, s), witness) = best.expect("at least one restart ran");
    CheegerResult {
        upper: Ratio::new(b as u64, s as u64),
        lower: Ratio::new(1, (n / 2) as u64),
        witness,
        exact: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthBranch {
    /// `|A^3| >= |A|^(1+ε)`.
    Growth,
    /// `|A| >= |G|^(1 - cε)`.
    Large,
    Neither,
}

impl std::fmt::Display for GrowthBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GrowthBranch::Growth => "growth",
            GrowthBranch::Large => "large",
            GrowthBranch::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow {
    pub trial: u64,
    pub size: usize,
    pub cube_size: usize,
    /// `log|A^3| / log|A|`.
    pub exponent: f64,
    pub density: Ratio<u64>,
    pub branch: GrowthBranch,
}

/// Which alternative `A` lands in for the given `ε` and `c`.
pub fn growth_branch(size: usize, cube_size: usize, order: u64, epsilon: f64, c: f64) -> GrowthBranch {
    let (a, a3, g) = (size as f64, cube_size as f64, order as f64);
    if a3.ln() >= (1.0 + epsilon) * a.ln() {
        GrowthBranch::Growth
    } else if a.ln() >= (1.0 - c * epsilon) * g.ln() {
        GrowthBranch::Large
    } else {
        GrowthBranch::Neither
    }
}

pub fn probe_row(a: &ElementSet, trial: u64, epsilon: f64, c: f64) -> Result<ProbeRow> {
    let order = a
        .ctx()
        .order()
        .ok_or_else(|| Error::InfiniteGroup(a.ctx().descriptor().to_string()))?;
    let cube = a.power(3)?.len();
    let size = a.len();
    let exponent = if size > 1 {
        (cube as f64).ln() / (size as f64).ln()
    } else {
        1.0
    };
    Ok(ProbeRow {
        trial,
        size,
        cube_size: cube,
        exponent,
        density: Ratio::new(size as u64, order),
        branch: growth_branch(size, cube, order, epsilon, c),
    })
}

/// Random symmetric generating sets of `SL2(p)` with sizes spread on a log
/// scale, one row per trial.
pub fn sl2_growth_probe(p: i64, trials: u64, seed: u64, epsilon: f64, c: f64) -> Result<Vec<ProbeRow>> {
    if ![3, 5, 7].contains(&p) {
        return Err(Error::InvalidArgument(format!("the probe runs for p in {{3, 5, 7}}, got {p}")));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let ctx = Arc::new(GroupContext::new(GroupDescriptor::Sl2 { p })?);
    let mut elements = ctx.enumerate()?;
    elements.sort_unstable();
    let order = elements.len();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ t);
            let log_max = (order as f64 / 2.0).ln();
            let k = (rng.random_range(0.0..=log_max).exp().round() as usize).clamp(1, order);
            let mut picked: Vec<GroupElement> = sample(&mut rng, order, k)
                .into_iter()
                .map(|i| elements[i].clone())
                .collect();
            let mut a = ElementSet::new(ctx.clone(), picked.clone())?.symmetrize()?;
            while a.generated_subgroup()?.len() < order {
                picked.push(elements[rng.random_range(0..order)].clone());
                a = ElementSet::new(ctx.clone(), picked.clone())?.symmetrize()?;
            }
            probe_row(&a, t, epsilon, c)
        })
        .collect()
}

impl ProbeRow {
    pub const HEADER: &'static str = "trial,size,cube_size,exponent,density,branch";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{}",
            self.trial, self.size, self.cube_size, self.exponent, self.density, self.branch
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use proptest::prelude::*;

    fn cycle(n: i64) -> CayleyGraph {
        let g = make_group(GroupDescriptor::Cyclic { order: n }).unwrap();
        let s = ElementSet::from_values(g, &[1, n - 1]).unwrap();
        build_cayley(&s).unwrap()
    }

    #[test]
    fn six_cycle() {
        let g = cycle(6);
        assert_eq!(g.len(), 6);
        assert_eq!(g.degree(), 2);
        assert_eq!(vertex_boundary(&g, &[0, 1, 2]).unwrap(), vec![3, 5]);
        assert!(vertex_boundary(&g, &[0, 1, 2, 3, 4, 5]).unwrap().is_empty());
        assert!(vertex_boundary(&g, &[]).unwrap().is_empty());
        let h = cheeger(&g, CheegerMode::Exact).unwrap();
        assert_eq!(h.upper, Ratio::new(2, 3));
        assert_eq!(h.witness, vec![0, 1, 2]);
        assert_eq!(g.edge_list().lines().count(), 6);
    }

    #[test]
    fn complete_graph_on_five() {
        let z5 = make_group(GroupDescriptor::Cyclic { order: 5 }).unwrap();
        let s = ElementSet::from_values(z5, &[1, 2, 3, 4]).unwrap();
        let g = build_cayley(&s).unwrap();
        let h = cheeger(&g, CheegerMode::Exact).unwrap();
        assert_eq!(h.upper, Ratio::new(3, 2));
        assert!(h.upper >= Ratio::from_integer(1));
    }

    #[test]
    fn two_vertices() {
        let z2 = make_group(GroupDescriptor::Cyclic { order: 2 }).unwrap();
        let g = build_cayley(&ElementSet::from_values(z2, &[1]).unwrap()).unwrap();
        assert_eq!(cheeger(&g, CheegerMode::Exact).unwrap().upper, Ratio::from_integer(1));
    }

    #[test]
    fn refusals() {
        let z6 = make_group(GroupDescriptor::Cyclic { order: 6 }).unwrap();
        let s = ElementSet::from_values(z6.clone(), &[2, 4]).unwrap();
        assert_eq!(build_cayley(&s).unwrap_err(), Error::NotGenerating { reached: 3, order: 6 });
        let s = ElementSet::from_values(z6, &[1]).unwrap();
        assert_eq!(build_cayley(&s).unwrap_err(), Error::NotSymmetric);
        let big = cycle(26);
        assert!(matches!(
            cheeger(&big, CheegerMode::Exact),
            Err(Error::TooLargeForExact { vertices: 26, .. })
        ));
    }

    #[test]
    fn sl2_three() {
        let g = make_group(GroupDescriptor::Sl2 { p: 3 }).unwrap();
        let s = ElementSet::new(g.clone(), g.standard_generators()).unwrap().difference(&ElementSet::identity(g.clone())).unwrap();
        let s = s.union(&s.inverse_set().unwrap()).unwrap();
        let graph = build_cayley(&s).unwrap();
        assert_eq!(graph.len(), 24);
        assert_eq!(graph.degree(), 4);
        for v in 0..graph.len() {
            for &w in graph.neighbors(v) {
                assert!(graph.neighbors(w).contains(&v));
            }
        }
    }

    #[test]
    fn cycle_scaling_law() {
        for n in 3..=12 {
            let h = cheeger(&cycle(2 * n), CheegerMode::Exact).unwrap();
            assert_eq!(h.upper, Ratio::new(2, n as u64), "2n-cycle with n = {n}");
        }
    }

    #[test]
    fn relabeling_keeps_value() {
        let g = make_group(GroupDescriptor::Sl2 { p: 3 }).unwrap();
        let s = ElementSet::new(g.clone(), g.standard_generators()).unwrap();
        let s = s.union(&s.inverse_set().unwrap()).unwrap();
        let base = build_cayley(&s).unwrap();
        let shift = g.element(&[0, 1, 2, 1]).unwrap();
        let moved: Vec<_> = base.vertices().iter().map(|v| g.multiply(&shift, v).unwrap()).collect();
        let other = build_cayley_with_order(&s, moved).unwrap();
        let a = cheeger(&base, CheegerMode::Exact).unwrap();
        let b = cheeger(&other, CheegerMode::Exact).unwrap();
        assert_eq!(a.upper, b.upper);
    }

    #[test]
    fn probe_rows() {
        let rows = sl2_growth_probe(7, 20, 3, 0.1, 1.0).unwrap();
        assert_eq!(rows.len(), 20);
        assert_eq!(rows, sl2_growth_probe(7, 20, 3, 0.1, 1.0).unwrap());
        let g = make_group(GroupDescriptor::Sl2 { p: 3 }).unwrap();
        let all = ElementSet::whole_group(g).unwrap();
        let row = probe_row(&all, 0, 0.2, 1.0).unwrap();
        assert_eq!((row.size, row.cube_size), (24, 24));
        assert_eq!(row.branch, GrowthBranch::Large);
        let g5 = make_group(GroupDescriptor::Sl2 { p: 5 }).unwrap();
        let u = ElementSet::new(g5.clone(), g5.standard_generators()).unwrap().symmetrize().unwrap();
        assert!(probe_row(&u, 0, 0.1, 1.0).unwrap().exponent > 1.0);
        assert!(sl2_growth_probe(11, 1, 0, 0.1, 1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn heuristic_brackets_exact(n in 3i64..13, extra in 2i64..6, seed in 0u64..1000) {
            let g = make_group(GroupDescriptor::Cyclic { order: n }).unwrap();
            let k = extra % n;
            let mut vals = vec![1, n - 1];
            if k != 0 {
                vals.extend([k, n - k]);
            }
            let s = ElementSet::from_values(g, &vals).unwrap();
            let graph = build_cayley(&s).unwrap();
            let exact = cheeger(&graph, CheegerMode::Exact).unwrap();
            let heur = cheeger(&graph, CheegerMode::Heuristic { iters: 500, seed }).unwrap();
            prop_assert!(heur.upper >= exact.upper);
            prop_assert!(heur.lower <= exact.upper);
            let b = vertex_boundary(&graph, &heur.witness).unwrap();
            prop_assert_eq!(Ratio::new(b.len() as u64, heur.witness.len() as u64), heur.upper);
            prop_assert!(b.iter().all(|v| !heur.witness.contains(v)));
            prop_assert!(heur.witness.len() <= graph.len() / 2);
        }
    }
}
