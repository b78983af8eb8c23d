//! Maximum-weight independent set: a branch-and-bound oracle for small
//! instances, and the separator-driven recursion for everything else.
//!
//! The main solver splits the graph with a tame separator built under
//! uniform internal weights, tabulates optimal extensions inside each
//! residual component, and then sweeps the separator layers from the first
//! to the last, maximizing over each layer with exact submodular function
//! minimization. Input weights are nonnegative integers; all optima are
//! therefore exact machine integers.

use crate::graph::Graph;
use crate::recognition::{check_preconditions, PreconditionReport};
use crate::separator::{tame_separator, SeparatorBranch};
use crate::sfm::{
    check_submodularity, minimize_brute, minimize_mnp, SfmOracle, SubmodularityMode,
};
use crate::vset::VertexSet;
use crate::weights::{ratio_string, Weights};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use thiserror::Error;

/// Hard vertex cap for the branch-and-bound oracle.
pub const BRUTE_VERTEX_CAP: usize = 30;

/// Layer grounds at or below this size are minimized by enumeration
/// instead of the norm-point method.
const LAYER_BRUTE_CAP: usize = 12;

/// Failures of the solver.
#[derive(Debug, Error)]
pub enum SolveError {
    /// The brute-force oracle was asked for more vertices than it accepts.
    #[error("instance has {n} vertices, over the brute-force cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    /// A weight is negative or not an integer.
    #[error("vertex {vertex} does not carry a nonnegative integer weight")]
    InvalidWeights { vertex: usize },
    /// Weights are individually valid but their total cannot be tracked
    /// exactly in a machine word.
    #[error("total weight is too large for exact machine arithmetic")]
    WeightOverflow,
    /// The balance parameter must lie strictly between 1/2 and 1.
    #[error("balance parameter {c} is outside (1/2, 1)")]
    InvalidBalance { c: String },
    /// The class preconditions failed and checking was requested.
    #[error("graph fails the class preconditions")]
    Precondition(Box<PreconditionReport>),
    /// The structural machinery broke down, which on a connected input is
    /// evidence that the graph lies outside the solvable class.
    #[error("structural evidence that the graph is outside the class: {detail}")]
    NotPawFriendlyEvidence { detail: String },
}

/// Tuning knobs for `solve`.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Balance parameter for the internal separator, in (1/2, 1).
    pub c: BigRational,
    /// Instances at or below this size go straight to branch and bound.
    pub base_threshold: usize,
    /// Verify the class preconditions before solving.
    pub check_class: bool,
    /// Spot-check submodularity of each norm-point oracle by sampling.
    pub spot_check: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            c: BigRational::new(BigInt::from(3), BigInt::from(5)),
            base_threshold: 20,
            check_class: false,
            spot_check: false,
        }
    }
}

/// Counters describing how a solve ran.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverStats {
    /// Branch of the outermost separator, if one was built.
    pub branch: Option<SeparatorBranch>,
    /// Deepest table recursion reached.
    pub max_depth: usize,
    /// Submodular minimization runs.
    pub sfm_calls: u64,
    /// Oracle evaluations spent inside those runs.
    pub sfm_oracle_calls: u64,
    /// Branch-and-bound leaf solves.
    pub brute_calls: u64,
    /// The recursion-depth yardstick of the outermost separator: the least
    /// z with c^((z-1)/(d+1)) <= 1/2. Reported for transparency only.
    pub z: Option<u32>,
}

/// An exact optimum with its witness.
#[derive(Debug, Clone)]
pub struct SolverResult {
    pub weight: i64,
    pub solution: VertexSet,
    pub stats: SolverStats,
}

/// Per-component extension answers: for a residual component D with fringe
/// N(D), maps each queried A subset of N(D) to the best independent set of
/// D minus N(A) and its weight.
pub struct ComponentTable {
    pub component: VertexSet,
    pub neighborhood: VertexSet,
    entries: RefCell<HashMap<VertexSet, (i64, VertexSet)>>,
}

/// Least z >= 1 with c^(z-1) <= (1/2)^(d+1).
fn z_for(c: &BigRational, d: usize) -> u32 {
    if c.is_zero() {
        return 1;
    }
    let target = BigRational::new(BigInt::one(), BigInt::one() << (d + 1));
    let mut z = 1u32;
    let mut p = BigRational::one();
    while p > target && z <= 10_000 {
        p *= c;
        z += 1;
    }
    z
}

/// Validate weights into plain integers with a safely bounded total.
fn weight_ints(w: &Weights, n: usize) -> Result<Vec<i64>, SolveError> {
    let mut out = Vec::with_capacity(n);
    let mut total: i128 = 0;
    for v in 0..n {
        let val = w.value(v);
        if !val.is_integer() || val.is_negative() {
            return Err(SolveError::InvalidWeights { vertex: v });
        }
        let Some(i) = val.to_integer().to_i64() else {
            return Err(SolveError::WeightOverflow);
        };
        total += i128::from(i);
        out.push(i);
    }
    if total > i128::from(i64::MAX / 4) {
        return Err(SolveError::WeightOverflow);
    }
    Ok(out)
}

fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|u| g.row(u).intersection(s).is_empty())
}

/// Best achievable weight over independent subsets of `alive`, by branch
/// and bound on the highest-degree vertex with a weight-sum bound.
fn bnb(g: &Graph, wts: &[i64], mut alive: VertexSet, current: i64, best: &mut i64) {
    if current > *best {
        *best = current;
    }
    let rest: i64 = alive.iter().map(|v| wts[v]).sum();
    if current + rest <= *best {
        return;
    }
    let mut pivot = usize::MAX;
    let mut pivot_deg = 0;
    for v in alive.iter() {
        let deg = g.row(v).intersection(&alive).len();
        if pivot == usize::MAX || deg > pivot_deg {
            pivot = v;
            pivot_deg = deg;
        }
    }
    if pivot == usize::MAX {
        return;
    }
    let mut taken = alive.clone();
    taken.difference_with(g.row(pivot));
    taken.remove(pivot);
    bnb(g, wts, taken, current + wts[pivot], best);
    alive.remove(pivot);
    bnb(g, wts, alive, current, best);
}

fn bnb_value(g: &Graph, wts: &[i64], alive: VertexSet) -> i64 {
    let mut best = 0;
    bnb(g, wts, alive, 0, &mut best);
    best
}

/// Exact optimum plus the lexicographically smallest optimal set, found by
/// fixing vertices in ascending order and re-running the bound.
fn brute_core(g: &Graph, wts: &[i64]) -> Result<(i64, VertexSet), SolveError> {
    let n = g.n();
    if n > BRUTE_VERTEX_CAP {
        return Err(SolveError::InstanceTooLarge {
            n,
            cap: BRUTE_VERTEX_CAP,
        });
    }
    let full = VertexSet::from_vertices(n, 0..n);
    let opt = bnb_value(g, wts, full.clone());
    let mut fixed = VertexSet::new(n);
    let mut picked = 0i64;
    let mut alive = full;
    for v in 0..n {
        // A prefix that already attains the optimum is lexicographically
        // smaller than any of its extensions.
        if picked == opt {
            break;
        }
        if !alive.contains(v) {
            continue;
        }
        let mut beyond = alive.clone();
        beyond.difference_with(g.row(v));
        let beyond = VertexSet::from_vertices(n, beyond.iter().filter(|&u| u > v));
        if picked + wts[v] + bnb_value(g, wts, beyond.clone()) == opt {
            fixed.insert(v);
            picked += wts[v];
            alive = beyond;
        } else {
            alive.remove(v);
        }
    }
    debug_assert_eq!(picked, opt);
    Ok((opt, fixed))
}

/// Shared state of one separator-level recursion: layers, tables, and the
/// footprint-keyed memo of layer optima.
struct Ctx<'a> {
    g: &'a Graph,
    wts: &'a [i64],
    config: &'a SolveConfig,
    layers: Vec<VertexSet>,
    /// suffix[i] = union of layers i..k (0-based); suffix[k] is empty.
    suffix: Vec<VertexSet>,
    tables: Vec<ComponentTable>,
    /// Union of all component fringes.
    hood_union: VertexSet,
    /// (level, footprint) -> (value, chosen layer subset).
    memo: RefCell<HashMap<(usize, VertexSet), (i64, VertexSet)>>,
    stats: &'a RefCell<SolverStats>,
    depth: usize,
    /// First error raised inside an oracle closure, if any.
    failure: RefCell<Option<SolveError>>,
}

impl<'a> Ctx<'a> {
    /// Everything a level's value can depend on besides the level index:
    /// how the accumulated choices shadow the remaining layers and which
    /// fringe vertices they occupy.
    fn footprint(&self, j: usize, b: &VertexSet) -> VertexSet {
        let mut fp = self.g.neighborhood(b);
        fp.intersect_with(&self.suffix[j - 1]);
        fp.union_with(&b.intersection(&self.hood_union));
        fp
    }

    fn fail(&self, e: SolveError) {
        let mut slot = self.failure.borrow_mut();
        if slot.is_none() {
            *slot = Some(e);
        }
    }

    fn take_failure(&self) -> Option<SolveError> {
        self.failure.borrow_mut().take()
    }

    /// Table lookup with on-demand fill: best independent set of the
    /// component minus N(a), solved recursively on the induced subgraph.
    fn table_value(&self, ti: usize, a: &VertexSet) -> Result<(i64, VertexSet), SolveError> {
        if let Some(hit) = self.tables[ti].entries.borrow().get(a) {
            return Ok(hit.clone());
        }
        let keep = self.tables[ti]
            .component
            .difference(&self.g.neighborhood(a));
        let (sub, map) = self.g.induced(&keep);
        let sub_w: Vec<i64> = map.iter().map(|&v| self.wts[v]).collect();
        let (val, wit) = solve_core(&sub, &sub_w, self.config, self.depth + 1, self.stats)?;
        let mut wit_global = VertexSet::new(self.g.n());
        for i in wit.iter() {
            wit_global.insert(map[i]);
        }
        self.tables[ti]
            .entries
            .borrow_mut()
            .insert(a.clone(), (val, wit_global.clone()));
        Ok((val, wit_global))
    }

    /// Sum of table optima once all layer choices are in `b`.
    fn base_value(&self, b: &VertexSet) -> Result<i64, SolveError> {
        let mut total = 0i64;
        for ti in 0..self.tables.len() {
            let a = b.intersection(&self.tables[ti].neighborhood);
            total += self.table_value(ti, &a)?.0;
        }
        Ok(total)
    }

    /// Best total weight achievable from level j onward, given the choices
    /// accumulated in `b`: max over C in layer j avoiding N(b) of w(C)
    /// plus the value from level j+1 with b extended by C.
    fn level_value(&self, j: usize, b: &VertexSet) -> Result<i64, SolveError> {
        let k = self.layers.len();
        if j > k {
            return self.base_value(b);
        }
        let key = (j, self.footprint(j, b));
        if let Some(&(v, _)) = self.memo.borrow().get(&key) {
            return Ok(v);
        }
        let n = self.g.n();
        let ground_set = self.layers[j - 1].difference(&self.g.neighborhood(b));
        let ground: Vec<usize> = ground_set.iter().collect();
        let last_level_untouched =
            j == k && ground_set.intersection(&self.hood_union).is_empty();
        let (value, chosen) = if last_level_untouched {
            // The deeper value no longer depends on the choice, so the max
            // is modular: take every positive-weight vertex, plus the
            // zero-weight ones below the largest of them (the tie rule of
            // the enumeration path).
            let base = self.base_value(b)?;
            let max_pos = ground
                .iter()
                .rev()
                .copied()
                .find(|&v| self.wts[v] > 0);
            match max_pos {
                Some(top) => {
                    let c = VertexSet::from_vertices(
                        n,
                        ground.iter().copied().filter(|&v| v <= top),
                    );
                    let gain: i64 = c.iter().map(|v| self.wts[v]).sum();
                    (base + gain, c)
                }
                None => (base, VertexSet::new(n)),
            }
        } else {
            let oracle = SfmOracle::new(ground.clone(), |s| {
                let mut c = VertexSet::new(n);
                for i in s.iter() {
                    c.insert(ground[i]);
                }
                let wc: i64 = c.iter().map(|v| self.wts[v]).sum();
                c.union_with(b);
                let deeper = match self.level_value(j + 1, &c) {
                    Ok(v) => v,
                    Err(e) => {
                        self.fail(e);
                        0
                    }
                };
                -(wc + deeper)
            });
            let use_brute = ground.len() <= LAYER_BRUTE_CAP;
            if !use_brute && self.config.spot_check {
                let seed = (j as u64) << 32 | ground.len() as u64;
                let report = check_submodularity(
                    &oracle,
                    SubmodularityMode::Sampled { count: 48, seed },
                )
                .expect("sampling has no ground cap");
                if let Some(e) = self.take_failure() {
                    return Err(e);
                }
                if let Some((a, bb)) = report.violations.first() {
                    return Err(SolveError::NotPawFriendlyEvidence {
                        detail: format!(
                            "submodular inequality fails on {a:?} and {bb:?} at level {j}"
                        ),
                    });
                }
            }
            let res = if use_brute {
                minimize_brute(&oracle)
            } else {
                minimize_mnp(&oracle)
            }
            .map_err(|e| SolveError::NotPawFriendlyEvidence {
                detail: e.to_string(),
            })?;
            if let Some(e) = self.take_failure() {
                return Err(e);
            }
            {
                let mut s = self.stats.borrow_mut();
                s.sfm_calls += 1;
                s.sfm_oracle_calls += res.oracle_calls;
            }
            let mut c = VertexSet::new(n);
            for i in res.minimizer.iter() {
                c.insert(ground[i]);
            }
            (-res.value, c)
        };
        self.memo.borrow_mut().insert(key, (value, chosen));
        Ok(value)
    }

    /// The layer subset the memoized optimum chose at level j under `b`.
    fn chosen(&self, j: usize, b: &VertexSet) -> Result<VertexSet, SolveError> {
        self.level_value(j, b)?;
        let key = (j, self.footprint(j, b));
        Ok(self
            .memo
            .borrow()
            .get(&key)
            .expect("a computed level memoizes its choice")
            .1
            .clone())
    }
}

fn solve_core(
    g: &Graph,
    wts: &[i64],
    config: &SolveConfig,
    depth: usize,
    stats: &RefCell<SolverStats>,
) -> Result<(i64, VertexSet), SolveError> {
    {
        let mut s = stats.borrow_mut();
        if depth > s.max_depth {
            s.max_depth = depth;
        }
    }
    let n = g.n();
    let full = VertexSet::from_vertices(n, 0..n);
    let comps = g.components(&full);
    if comps.len() != 1 {
        let mut total = 0i64;
        let mut sol = VertexSet::new(n);
        for comp in &comps {
            let (sub, map) = g.induced(comp);
            let sub_w: Vec<i64> = map.iter().map(|&v| wts[v]).collect();
            let (v, wit) = solve_core(&sub, &sub_w, config, depth, stats)?;
            total += v;
            for i in wit.iter() {
                sol.insert(map[i]);
            }
        }
        return Ok((total, sol));
    }
    if n <= config.base_threshold {
        stats.borrow_mut().brute_calls += 1;
        return brute_core(g, wts);
    }

    let sep = tame_separator(g, &Weights::uniform(n), &config.c).map_err(|e| {
        SolveError::NotPawFriendlyEvidence {
            detail: e.to_string(),
        }
    })?;
    {
        let mut s = stats.borrow_mut();
        if s.branch.is_none() {
            s.branch = Some(sep.branch);
            s.z = Some(z_for(&sep.c, sep.d));
        }
    }
    let big_n = BigRational::from(BigInt::from(n));
    for comp in &sep.components {
        assert!(
            BigRational::from(BigInt::from(comp.vertices.len())) <= &sep.c * &big_n,
            "separator components stay below the balance fraction"
        );
        assert!(
            comp.neighborhood.len() <= sep.d,
            "separator components keep bounded fringes"
        );
    }

    let tables: Vec<ComponentTable> = sep
        .components
        .iter()
        .map(|sc| ComponentTable {
            component: sc.vertices.clone(),
            neighborhood: sc.neighborhood.clone(),
            entries: RefCell::new(HashMap::new()),
        })
        .collect();
    let mut hood_union = VertexSet::new(n);
    for t in &tables {
        hood_union.union_with(&t.neighborhood);
    }
    let layers = sep.iterated.layers.clone();
    let k = layers.len();
    let mut suffix = vec![VertexSet::new(n); k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1].union(&layers[i]);
    }
    let ctx = Ctx {
        g,
        wts,
        config,
        layers,
        suffix,
        tables,
        hood_union,
        memo: RefCell::new(HashMap::new()),
        stats,
        depth,
        failure: RefCell::new(None),
    };

    let empty = VertexSet::new(n);
    let answer = ctx.level_value(1, &empty)?;

    let mut b = VertexSet::new(n);
    let mut sol = VertexSet::new(n);
    for j in 1..=k {
        let cj = ctx.chosen(j, &b)?;
        sol.union_with(&cj);
        b.union_with(&cj);
    }
    for ti in 0..ctx.tables.len() {
        let a = b.intersection(&ctx.tables[ti].neighborhood);
        let (_, wit) = ctx.table_value(ti, &a)?;
        sol.union_with(&wit);
    }
    debug_assert!(is_independent(g, &sol));
    debug_assert_eq!(sol.iter().map(|v| wts[v]).sum::<i64>(), answer);
    Ok((answer, sol))
}

/// Exact maximum-weight independent set via branch and bound, for at most
/// 30 vertices; ties resolve to the lexicographically smallest optimal set.
pub fn brute_force_mwis(g: &Graph, w: &Weights) -> Result<SolverResult, SolveError> {
    let wts = weight_ints(w, g.n())?;
    let (weight, solution) = brute_core(g, &wts)?;
    Ok(SolverResult {
        weight,
        solution,
        stats: SolverStats {
            brute_calls: 1,
            ..SolverStats::default()
        },
    })
}

/// Exact maximum-weight independent set by the separator recursion.
pub fn solve(g: &Graph, w: &Weights, config: &SolveConfig) -> Result<SolverResult, SolveError> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if config.c <= half || config.c >= BigRational::one() {
        return Err(SolveError::InvalidBalance {
            c: ratio_string(&config.c),
        });
    }
    if config.check_class {
        let report = check_preconditions(g);
        if !report.admissible() {
            return Err(SolveError::Precondition(Box::new(report)));
        }
    }
    let wts = weight_ints(w, g.n())?;
    let stats = RefCell::new(SolverStats::default());
    let (weight, solution) = solve_core(g, &wts, config, 0, &stats)?;
    Ok(SolverResult {
        weight,
        solution,
        stats: stats.into_inner(),
    })
}

/// Best weight of an independent set whose intersection with `s` is
/// exactly `a`, with a witness: w(a) plus an optimum of the graph minus
/// s and N(a). Requires `s` independent and `a` inside it.
pub fn alpha_extend(
    g: &Graph,
    w: &Weights,
    s: &VertexSet,
    a: &VertexSet,
) -> Result<(i64, VertexSet), SolveError> {
    assert!(a.is_subset_of(s), "extension must pick from the anchor set");
    assert!(is_independent(g, s), "anchor set must be independent");
    let wts = weight_ints(w, g.n())?;
    let mut removed = s.clone();
    removed.union_with(&g.neighborhood(a));
    let keep = removed.complement();
    let (sub, map) = g.induced(&keep);
    let sub_w: Vec<i64> = map.iter().map(|&v| wts[v]).collect();
    let stats = RefCell::new(SolverStats::default());
    let config = SolveConfig::default();
    let (v, wit) = solve_core(&sub, &sub_w, &config, 0, &stats)?;
    let mut witness = a.clone();
    for i in wit.iter() {
        witness.insert(map[i]);
    }
    let anchored: i64 = a.iter().map(|x| wts[x]).sum();
    Ok((v + anchored, witness))
}

/// Re-check a result from scratch: the solution must be independent and
/// its weight must match the claimed value exactly.
pub fn verify_solution(g: &Graph, w: &Weights, result: &SolverResult) -> bool {
    if !is_independent(g, &result.solution) {
        return false;
    }
    let total: BigRational = result.solution.iter().map(|v| w.value(v)).sum();
    total == BigRational::from(BigInt::from(result.weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn vs(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, xs.iter().copied())
    }

    fn config(base_threshold: usize) -> SolveConfig {
        SolveConfig {
            base_threshold,
            ..SolveConfig::default()
        }
    }

    #[test]
    fn single_vertex_keeps_its_weight() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let w = Weights::from_integers(&[5]);
        let r = brute_force_mwis(&g, &w).unwrap();
        assert_eq!((r.weight, r.solution.clone()), (5, vs(1, &[0])));
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn path_tie_breaks_to_the_lexicographically_smallest_optimum() {
        let g = generate::path(4).unwrap();
        let w = Weights::from_integers(&[1, 3, 3, 1]);
        let r = brute_force_mwis(&g, &w).unwrap();
        assert_eq!(r.weight, 4);
        assert_eq!(r.solution, vs(4, &[0, 2]));
        let s = solve(&g, &w, &SolveConfig::default()).unwrap();
        assert_eq!(s.weight, 4);
        assert_eq!(s.solution, vs(4, &[0, 2]));
        assert_eq!(s.stats.branch, None);
        assert!(s.stats.brute_calls >= 1);
        assert_eq!(s.stats.sfm_calls, 0);
    }

    #[test]
    fn six_cycle_alternates() {
        let g = generate::cycle(6).unwrap();
        let w = Weights::uniform(6);
        assert!(matches!(
            brute_force_mwis(&g, &w),
            Err(SolveError::InvalidWeights { vertex: 0 })
        ));
        let unit = Weights::from_integers(&[1; 6]);
        let r = brute_force_mwis(&g, &unit).unwrap();
        assert_eq!(r.weight, 3);
        assert_eq!(r.solution, vs(6, &[0, 2, 4]));
    }

    #[test]
    fn zero_weights_choose_the_empty_set() {
        let g = generate::cycle(6).unwrap();
        let w = Weights::from_integers(&[0; 6]);
        let r = brute_force_mwis(&g, &w).unwrap();
        assert_eq!(r.weight, 0);
        assert!(r.solution.is_empty());
    }

    #[test]
    fn ball_branch_solves_the_twenty_cycle() {
        let g = generate::cycle(20).unwrap();
        let w = Weights::from_integers(&[1; 20]);
        let r = solve(&g, &w, &config(10)).unwrap();
        assert_eq!(r.weight, 10);
        assert_eq!(r.stats.branch, Some(SeparatorBranch::Ball));
        assert!(r.stats.sfm_calls >= 1);
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn core_branch_solves_the_twenty_eight_cycle() {
        let g = generate::cycle(28).unwrap();
        let w = Weights::from_integers(&[1; 28]);
        let r = solve(&g, &w, &SolveConfig::default()).unwrap();
        assert_eq!(r.weight, 14);
        assert_eq!(r.stats.branch, Some(SeparatorBranch::Core));
        assert_eq!(r.stats.z, Some(7));
        assert!(r.stats.sfm_calls >= 1);
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn hundred_cycle_runs_the_full_pipeline() {
        let g = generate::cycle(100).unwrap();
        let w = Weights::from_integers(&[1; 100]);
        let r = solve(&g, &w, &SolveConfig::default()).unwrap();
        assert_eq!(r.weight, 50);
        assert_eq!(r.stats.branch, Some(SeparatorBranch::Core));
        assert!(r.stats.sfm_calls >= 1);
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn subdivided_complete_graph_matches_the_oracle() {
        // K4 with every edge subdivided once: branch vertices 0..4, one
        // subdivision vertex per edge.
        let g = Graph::from_edges(
            10,
            &[
                (0, 4),
                (4, 1),
                (0, 5),
                (5, 2),
                (0, 6),
                (6, 3),
                (1, 7),
                (7, 2),
                (1, 8),
                (8, 3),
                (2, 9),
                (9, 3),
            ],
        )
        .unwrap();
        let w = Weights::from_integers(&[2, 3, 1, 4, 1, 1, 5, 2, 1, 3]);
        let oracle = brute_force_mwis(&g, &w).unwrap();
        let r = solve(&g, &w, &config(6)).unwrap();
        assert_eq!(r.weight, oracle.weight);
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn two_tail_instance_matches_the_oracle() {
        let g = Graph::from_edges(
            14,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (0, 5),
                (0, 7),
                (7, 8),
                (8, 9),
                (9, 10),
                (10, 11),
                (11, 12),
                (12, 13),
                (1, 10),
            ],
        )
        .unwrap();
        let w = Weights::from_integers(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7]);
        let oracle = brute_force_mwis(&g, &w).unwrap();
        let r = solve(&g, &w, &config(8)).unwrap();
        assert_eq!(r.weight, oracle.weight);
        assert!(r.stats.branch.is_some());
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn disconnected_pieces_sum_and_isolated_weight_adds_exactly() {
        // C6, an isolated vertex of weight 7, and the weighted P4.
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.extend([(7, 8), (8, 9), (9, 10)]);
        let g = Graph::from_edges(11, &edges).unwrap();
        let w = Weights::from_integers(&[1, 1, 1, 1, 1, 1, 7, 1, 3, 3, 1]);
        let r = solve(&g, &w, &SolveConfig::default()).unwrap();
        assert_eq!(r.weight, 3 + 7 + 4);
        assert!(r.solution.contains(6));
        assert!(verify_solution(&g, &w, &r));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let g = generate::path(31).unwrap();
        let w = Weights::from_integers(&[1; 31]);
        assert!(matches!(
            brute_force_mwis(&g, &w),
            Err(SolveError::InstanceTooLarge { n: 31, cap: 30 })
        ));
        let small = generate::path(6).unwrap();
        // The weight container rejects negatives at construction, so the
        // solver-level weight error fires on fractional values.
        assert!(matches!(
            solve(&small, &Weights::uniform(6), &SolveConfig::default()),
            Err(SolveError::InvalidWeights { vertex: 0 })
        ));
        let unit = Weights::from_integers(&[1; 6]);
        let mut at_half = SolveConfig::default();
        at_half.c = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(matches!(
            solve(&small, &unit, &at_half),
            Err(SolveError::InvalidBalance { .. })
        ));
        let mut at_one = SolveConfig::default();
        at_one.c = BigRational::one();
        assert!(matches!(
            solve(&small, &unit, &at_one),
            Err(SolveError::InvalidBalance { .. })
        ));
    }

    #[test]
    fn class_check_rejects_a_square() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let w = Weights::from_integers(&[1; 4]);
        let mut cfg = SolveConfig::default();
        cfg.check_class = true;
        assert!(matches!(
            solve(&g, &w, &cfg),
            Err(SolveError::Precondition(_))
        ));
        cfg.check_class = false;
        let r = solve(&g, &w, &cfg).unwrap();
        assert_eq!(r.weight, 2);
    }

    #[test]
    fn extension_values_on_the_six_cycle() {
        let g = generate::cycle(6).unwrap();
        let w = Weights::from_integers(&[1; 6]);
        let s = vs(6, &[0, 2, 4]);
        let (v, wit) = alpha_extend(&g, &w, &s, &vs(6, &[0])).unwrap();
        assert_eq!(v, 2);
        assert_eq!(wit, vs(6, &[0, 3]));
        let (v_empty, wit_empty) = alpha_extend(&g, &w, &s, &VertexSet::new(6)).unwrap();
        assert_eq!(v_empty, 3);
        assert_eq!(wit_empty, vs(6, &[1, 3, 5]));
        let (v_full, wit_full) = alpha_extend(&g, &w, &s, &s).unwrap();
        assert_eq!(v_full, 3);
        assert_eq!(wit_full, s);
    }

    #[test]
    fn verification_rejects_tampered_results() {
        let g = generate::cycle(6).unwrap();
        let w = Weights::from_integers(&[1; 6]);
        let good = brute_force_mwis(&g, &w).unwrap();
        assert!(verify_solution(&g, &w, &good));
        let mut adjacent = good.clone();
        adjacent.solution.insert(1);
        adjacent.weight += 1;
        assert!(!verify_solution(&g, &w, &adjacent));
        let mut wrong_weight = good.clone();
        wrong_weight.weight += 1;
        assert!(!verify_solution(&g, &w, &wrong_weight));
    }

    #[test]
    fn random_instances_match_the_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xa1fa);
        let mut cases: Vec<(Graph, usize)> = Vec::new();
        for n in [21, 23, 25] {
            cases.push((generate::path(n).unwrap(), 12));
        }
        for seed in 0..4 {
            cases.push((generate::subdivided_regular(8, 3, seed).unwrap(), 10));
        }
        for seed in 0..4 {
            let p = BigRational::new(BigInt::from(1), BigInt::from(4));
            cases.push((generate::filtered_random(14, &p, seed, 4000).unwrap(), 8));
        }
        for (g, bt) in cases {
            let n = g.n();
            let ints: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=100)).collect();
            let w = Weights::from_integers(&ints);
            let oracle = brute_force_mwis(&g, &w).unwrap();
            let r = solve(&g, &w, &config(bt)).unwrap();
            assert_eq!(r.weight, oracle.weight, "n={n} bt={bt}");
            assert!(verify_solution(&g, &w, &r));
        }
    }

    #[test]
    fn depth_yardstick_follows_the_balance_parameter() {
        let three_fifths = BigRational::new(BigInt::from(3), BigInt::from(5));
        assert_eq!(z_for(&three_fifths, 3), 7);
        assert_eq!(z_for(&BigRational::new(BigInt::one(), BigInt::from(2)), 1), 3);
    }
}
