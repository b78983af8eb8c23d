//! Exact submodular function minimization over an evaluation oracle, and a
//! submodularity tester.
//!
//! Two minimizers are provided: exhaustive enumeration for small ground
//! sets, and a minimum-norm-point method (Wolfe's algorithm with the greedy
//! linear oracle over the base polytope) run entirely in exact rational
//! arithmetic. Oracle values are integers, so once the certified duality
//! gap drops below one, the incumbent is optimal; no floating point is
//! involved anywhere. Ties between minimizers are broken toward the
//! lexicographically smallest subset, compared as ascending element lists.

use crate::vset::VertexSet;
use num::{BigInt, BigRational, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::Cell;
use std::cmp::Ordering;
use thiserror::Error;

/// Failures of the minimizers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SfmError {
    /// The ground set exceeds the cap of the requested method.
    #[error("ground set has {size} elements, over the cap of {cap}")]
    GroundTooLarge { size: usize, cap: usize },
    /// The norm-point iteration hit its cap; on an integer-valued
    /// submodular oracle this does not happen, so callers treat it as
    /// evidence that the oracle is not submodular.
    #[error("norm-point method did not converge within {majors} major cycles")]
    NonConvergence { majors: usize },
}

/// An evaluation oracle: an ordered ground set of element labels and a pure
/// integer-valued set function on subsets, given in index space. Every
/// evaluation is counted.
pub struct SfmOracle<'a> {
    ground: Vec<usize>,
    f: Box<dyn Fn(&VertexSet) -> i64 + 'a>,
    calls: Cell<u64>,
}

impl<'a> SfmOracle<'a> {
    pub fn new(ground: Vec<usize>, f: impl Fn(&VertexSet) -> i64 + 'a) -> Self {
        SfmOracle {
            ground,
            f: Box::new(f),
            calls: Cell::new(0),
        }
    }

    /// Element labels, in index order.
    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    /// Ground set size.
    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Evaluate the function on a subset (index space), counting the call.
    pub fn eval(&self, s: &VertexSet) -> i64 {
        self.calls.set(self.calls.get() + 1);
        (self.f)(s)
    }

    /// Number of evaluations so far.
    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Map an index-space subset to its element labels.
    pub fn labels(&self, s: &VertexSet) -> Vec<usize> {
        s.iter().map(|i| self.ground[i]).collect()
    }
}

/// Which minimizer produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfmMethod {
    Brute,
    Mnp,
}

/// A certified minimizer: the subset (index space), its value, and the cost
/// of finding it.
#[derive(Debug, Clone)]
pub struct SfmResult {
    pub minimizer: VertexSet,
    pub value: i64,
    pub method: SfmMethod,
    pub oracle_calls: u64,
}

/// Largest ground set enumerated exhaustively.
pub const BRUTE_CAP: usize = 22;

/// Largest ground set for which the norm-point method refines its answer to
/// the lexicographically smallest minimizer; above this it returns the
/// certified minimizer it found, which is still exact in value.
const LEX_REFINE_CAP: usize = 24;

const MAJOR_CAP: usize = 2048;

/// Exhaustive minimization, for ground sets of at most 22 elements.
pub fn minimize_brute(oracle: &SfmOracle) -> Result<SfmResult, SfmError> {
    let g = oracle.len();
    if g > BRUTE_CAP {
        return Err(SfmError::GroundTooLarge {
            size: g,
            cap: BRUTE_CAP,
        });
    }
    let start_calls = oracle.calls();
    let mut best_set = VertexSet::new(g);
    let mut best_val = oracle.eval(&best_set);
    for mask in 1u64..(1u64 << g) {
        let mut s = VertexSet::new(g);
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            s.insert(i);
        }
        let v = oracle.eval(&s);
        if v < best_val || (v == best_val && s.cmp_lex(&best_set) == Ordering::Less) {
            best_val = v;
            best_set = s;
        }
    }
    Ok(SfmResult {
        minimizer: best_set,
        value: best_val,
        method: SfmMethod::Brute,
        oracle_calls: oracle.calls() - start_calls,
    })
}

/// Solve min ||p_0 + sum nu_i (p_i - p_0)||^2 over the affine hull of the
/// given integer points, by exact Gaussian elimination on the normal
/// equations (always consistent; free variables are set to zero). Returns
/// the barycentric coefficients, one per point.
fn affine_minimizer(points: &[Vec<i64>]) -> Vec<BigRational> {
    let k = points.len();
    if k == 1 {
        return vec![BigRational::from(BigInt::from(1))];
    }
    let dim = points[0].len();
    let p0 = &points[0];
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| (0..dim).map(|e| p[e] - p0[e]).collect())
        .collect();
    let r = k - 1;
    // Augmented system M nu = b with M = D^T D, b = -D^T p0.
    let mut m = vec![vec![BigRational::zero(); r + 1]; r];
    for i in 0..r {
        for j in 0..r {
            let mut acc = BigInt::zero();
            for e in 0..dim {
                acc += BigInt::from(diffs[i][e]) * BigInt::from(diffs[j][e]);
            }
            m[i][j] = BigRational::from(acc);
        }
        let mut acc = BigInt::zero();
        for e in 0..dim {
            acc -= BigInt::from(p0[e]) * BigInt::from(diffs[i][e]);
        }
        m[i][r] = BigRational::from(acc);
    }
    // Forward elimination with row pivoting; a zero pivot column marks a
    // free variable, which stays zero.
    let mut pivot_of_col = vec![usize::MAX; r];
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for i in 0..r {
            if i != row && !m[i][col].is_zero() {
                let factor = &m[i][col] / &m[row][col];
                for j in col..=r {
                    let t = &m[row][j] * &factor;
                    m[i][j] -= t;
                }
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == r {
            break;
        }
    }
    let mut nu = vec![BigRational::zero(); r];
    for col in 0..r {
        let pr = pivot_of_col[col];
        if pr != usize::MAX {
            nu[col] = &m[pr][r] / &m[pr][col];
        }
    }
    let mut mu = Vec::with_capacity(k);
    let total: BigRational = nu.iter().sum();
    mu.push(BigRational::from(BigInt::from(1)) - total);
    mu.extend(nu);
    mu
}

/// One incumbent candidate: value plus attaining set, with lexicographic
/// tie-breaking.
struct Incumbent {
    value: i64,
    set: VertexSet,
}

impl Incumbent {
    fn offer(&mut self, value: i64, set: &VertexSet) {
        if value < self.value
            || (value == self.value && set.cmp_lex(&self.set) == Ordering::Less)
        {
            self.value = value;
            self.set = set.clone();
        }
    }
}

/// Wolfe's minimum-norm-point loop over the base polytope, in exact
/// rational arithmetic. Normalizes away the value at the empty set
/// internally and returns the exact minimum of `eval` with one attaining
/// subset.
fn wolfe_min(
    g: usize,
    eval: &dyn Fn(&VertexSet) -> i64,
) -> Result<(i64, VertexSet), SfmError> {
    let empty = VertexSet::new(g);
    let offset = eval(&empty);
    let eval_shifted = |s: &VertexSet| eval(s) - offset;
    let mut best = Incumbent {
        value: 0,
        set: empty.clone(),
    };
    if g == 0 {
        return Ok((offset, empty));
    }

    // Greedy linear oracle: order ascending by x (ties by index), take
    // marginals along the prefix chain. Every prefix is offered as an
    // incumbent for free.
    let greedy = |x: &[BigRational], best: &mut Incumbent| -> Vec<i64> {
        let mut order: Vec<usize> = (0..g).collect();
        order.sort_by(|&a, &b| x[a].cmp(&x[b]).then(a.cmp(&b)));
        let mut q = vec![0i64; g];
        let mut prefix = VertexSet::new(g);
        let mut prev = 0i64;
        for &e in &order {
            prefix.insert(e);
            let val = eval_shifted(&prefix);
            q[e] = val - prev;
            prev = val;
            best.offer(val, &prefix);
        }
        q
    };

    let zero_x = vec![BigRational::zero(); g];
    let q0 = greedy(&zero_x, &mut best);
    let mut points: Vec<Vec<i64>> = vec![q0];
    let mut lambda: Vec<BigRational> = vec![BigRational::from(BigInt::from(1))];
    let mut x: Vec<BigRational> = points[0]
        .iter()
        .map(|&v| BigRational::from(BigInt::from(v)))
        .collect();

    for _ in 0..MAJOR_CAP {
        // Lower bound from the current base-polytope point, and the usual
        // negative-coordinate incumbent.
        let mut lb = BigRational::zero();
        let mut s_x = VertexSet::new(g);
        for e in 0..g {
            if x[e].is_negative() {
                lb += &x[e];
                s_x.insert(e);
            }
        }
        best.offer(eval_shifted(&s_x), &s_x);
        let gap = BigRational::from(BigInt::from(best.value)) - &lb;
        if gap < BigRational::from(BigInt::from(1)) {
            return Ok((best.value + offset, best.set));
        }

        let q = greedy(&x, &mut best);
        let xx: BigRational = x.iter().map(|v| v * v).sum();
        let xq: BigRational = x
            .iter()
            .zip(&q)
            .map(|(v, &qe)| v * BigRational::from(BigInt::from(qe)))
            .sum();
        if xq >= xx {
            // x is the minimum-norm point; its negative support attains the
            // minimum exactly.
            let lb_int = lb.to_integer();
            debug_assert_eq!(BigRational::from(lb_int.clone()), lb);
            let v = eval_shifted(&s_x);
            best.offer(v, &s_x);
            debug_assert_eq!(BigInt::from(best.value), lb_int);
            return Ok((best.value + offset, best.set));
        }

        points.push(q);
        lambda.push(BigRational::zero());

        // Minor loop: pull x to the affine minimizer, stepping back to the
        // boundary and dropping points whenever a coefficient would go
        // negative. Each pass removes a point, so it terminates.
        loop {
            let mu = affine_minimizer(&points);
            if mu.iter().all(|c| !c.is_negative()) {
                lambda = mu;
                break;
            }
            let one = BigRational::from(BigInt::from(1));
            let mut theta = one.clone();
            for i in 0..points.len() {
                if mu[i].is_negative() {
                    let t = &lambda[i] / (&lambda[i] - &mu[i]);
                    if t < theta {
                        theta = t;
                    }
                }
            }
            let mut next_points = Vec::with_capacity(points.len());
            let mut next_lambda = Vec::with_capacity(points.len());
            for (i, p) in points.iter().enumerate() {
                let coeff = (&one - &theta) * &lambda[i] + &theta * &mu[i];
                if !coeff.is_zero() && !coeff.is_negative() {
                    next_points.push(p.clone());
                    next_lambda.push(coeff);
                }
            }
            points = next_points;
            lambda = next_lambda;
        }
        for e in 0..g {
            let mut acc = BigRational::zero();
            for (p, l) in points.iter().zip(&lambda) {
                acc += BigRational::from(BigInt::from(p[e])) * l;
            }
            x[e] = acc;
        }
    }
    Err(SfmError::NonConvergence { majors: MAJOR_CAP })
}

/// Refine a known minimum to the lexicographically smallest attaining
/// subset, deciding one element at a time with constrained norm-point runs.
fn lex_refine(
    g: usize,
    eval: &dyn Fn(&VertexSet) -> i64,
    minimum: i64,
) -> Result<VertexSet, SfmError> {
    let mut fixed = VertexSet::new(g);
    let mut next = 0;
    loop {
        if eval(&fixed) == minimum {
            return Ok(fixed);
        }
        let mut e = next;
        loop {
            assert!(e < g, "a minimizer extending the fixed prefix must exist");
            let free: Vec<usize> = (e + 1..g).collect();
            let mut base = fixed.clone();
            base.insert(e);
            let constrained = |t: &VertexSet| {
                let mut s = base.clone();
                for i in t.iter() {
                    s.insert(free[i]);
                }
                eval(&s)
            };
            let (mc, _) = wolfe_min(free.len(), &constrained)?;
            if mc == minimum {
                fixed.insert(e);
                next = e + 1;
                break;
            }
            e += 1;
        }
    }
}

/// Minimization via the minimum-norm point in the base polytope.
///
/// Requires an integer-valued submodular oracle; submodularity is not
/// checked. The duality-gap certificate makes the returned value exact. On
/// ground sets of at most 24 elements the minimizer is additionally refined
/// to the lexicographically smallest one, matching `minimize_brute`.
pub fn minimize_mnp(oracle: &SfmOracle) -> Result<SfmResult, SfmError> {
    let g = oracle.len();
    let start_calls = oracle.calls();
    let eval = |s: &VertexSet| oracle.eval(s);
    let (value, attained) = wolfe_min(g, &eval)?;
    let minimizer = if g <= LEX_REFINE_CAP {
        lex_refine(g, &eval, value)?
    } else {
        attained
    };
    Ok(SfmResult {
        minimizer,
        value,
        method: SfmMethod::Mnp,
        oracle_calls: oracle.calls() - start_calls,
    })
}

/// How to exercise the submodularity tester.
#[derive(Debug, Clone, Copy)]
pub enum SubmodularityMode {
    /// Check every triple (S, a, b), equivalent to checking all pairs;
    /// ground sets of at most 14 elements.
    Exhaustive,
    /// Check `count` random pairs drawn from the given seed.
    Sampled { count: u32, seed: u64 },
}

/// Violations of f(A) + f(B) >= f(A union B) + f(A intersect B), reported
/// as label lists. The list is capped; `truncated` says whether the cap was
/// hit.
#[derive(Debug, Clone)]
pub struct SubmodularityReport {
    pub violations: Vec<(Vec<usize>, Vec<usize>)>,
    pub truncated: bool,
    pub checks: u64,
}

impl SubmodularityReport {
    /// True when no violation was found.
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

const EXHAUSTIVE_CAP: usize = 14;
const VIOLATION_CAP: usize = 64;

/// Test the submodular inequality, exhaustively or by sampling.
pub fn check_submodularity(
    oracle: &SfmOracle,
    mode: SubmodularityMode,
) -> Result<SubmodularityReport, SfmError> {
    let g = oracle.len();
    let mut report = SubmodularityReport {
        violations: Vec::new(),
        truncated: false,
        checks: 0,
    };
    let offer =
        |report: &mut SubmodularityReport, a: &VertexSet, b: &VertexSet| -> bool {
            if report.violations.len() == VIOLATION_CAP {
                report.truncated = true;
                return false;
            }
            report
                .violations
                .push((oracle.labels(a), oracle.labels(b)));
            true
        };
    match mode {
        SubmodularityMode::Exhaustive => {
            if g > EXHAUSTIVE_CAP {
                return Err(SfmError::GroundTooLarge {
                    size: g,
                    cap: EXHAUSTIVE_CAP,
                });
            }
            let mut table = vec![0i64; 1usize << g];
            for (mask, slot) in table.iter_mut().enumerate() {
                let mut s = VertexSet::new(g);
                let mut bits = mask;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    s.insert(i);
                }
                *slot = oracle.eval(&s);
            }
            // The local characterization: for every S and a, b outside S,
            // f(S+a) + f(S+b) >= f(S+a+b) + f(S).
            'outer: for mask in 0usize..(1 << g) {
                for a in 0..g {
                    if mask & (1 << a) != 0 {
                        continue;
                    }
                    for b in (a + 1)..g {
                        if mask & (1 << b) != 0 {
                            continue;
                        }
                        report.checks += 1;
                        let sa = mask | (1 << a);
                        let sb = mask | (1 << b);
                        let sab = sa | (1 << b);
                        if table[sa] + table[sb] < table[sab] + table[mask] {
                            let mut va = VertexSet::new(g);
                            let mut vb = VertexSet::new(g);
                            let mut bits = sa;
                            while bits != 0 {
                                let i = bits.trailing_zeros() as usize;
                                bits &= bits - 1;
                                va.insert(i);
                            }
                            bits = sb;
                            while bits != 0 {
                                let i = bits.trailing_zeros() as usize;
                                bits &= bits - 1;
                                vb.insert(i);
                            }
                            if !offer(&mut report, &va, &vb) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        SubmodularityMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let mut a = VertexSet::new(g);
                let mut b = VertexSet::new(g);
                for e in 0..g {
                    if rng.gen_bool(0.5) {
                        a.insert(e);
                    }
                    if rng.gen_bool(0.5) {
                        b.insert(e);
                    }
                }
                report.checks += 1;
                let fa = oracle.eval(&a);
                let fb = oracle.eval(&b);
                let fu = oracle.eval(&a.union(&b));
                let fi = oracle.eval(&a.intersection(&b));
                if fa + fb < fu + fi && !offer(&mut report, &a, &b) {
                    break;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::Graph;

    fn modular(weights: &'static [i64]) -> SfmOracle<'static> {
        SfmOracle::new((0..weights.len()).collect(), move |s| {
            s.iter().map(|i| weights[i]).sum()
        })
    }

    /// Number of edges of `g` with exactly one endpoint in the subset.
    fn cut_oracle(g: Graph) -> SfmOracle<'static> {
        let n = g.n();
        SfmOracle::new((0..n).collect(), move |s| {
            let mut cut = 0i64;
            for (u, v) in g.edges() {
                if s.contains(u) != s.contains(v) {
                    cut += 1;
                }
            }
            cut
        })
    }

    fn vs(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, xs.iter().copied())
    }

    #[test]
    fn cardinality_minimum_is_empty() {
        let oracle = SfmOracle::new(vec![0, 1, 2, 3], |s| s.len() as i64);
        let r = minimize_brute(&oracle).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.minimizer.is_empty());
        assert_eq!(r.oracle_calls, 16);
    }

    #[test]
    fn modular_minimum_collects_negative_elements() {
        let oracle = modular(&[-1, 2, -3]);
        let rb = minimize_brute(&oracle).unwrap();
        assert_eq!(rb.value, -4);
        assert_eq!(rb.minimizer, vs(3, &[0, 2]));
        let rm = minimize_mnp(&oracle).unwrap();
        assert_eq!(rm.value, -4);
        assert_eq!(rm.minimizer, vs(3, &[0, 2]));
        assert_eq!(rm.method, SfmMethod::Mnp);
    }

    #[test]
    fn single_edge_cut_ties_to_empty() {
        let oracle = cut_oracle(Graph::from_edges(2, &[(0, 1)]).unwrap());
        let rb = minimize_brute(&oracle).unwrap();
        assert_eq!((rb.value, rb.minimizer.is_empty()), (0, true));
        let rm = minimize_mnp(&oracle).unwrap();
        assert_eq!((rm.value, rm.minimizer.is_empty()), (0, true));
    }

    #[test]
    fn cycle_cut_ties_to_empty() {
        let oracle = cut_oracle(generate::cycle(6).unwrap());
        let rb = minimize_brute(&oracle).unwrap();
        let rm = minimize_mnp(&oracle).unwrap();
        assert_eq!(rb.value, 0);
        assert_eq!(rm.value, 0);
        assert!(rb.minimizer.is_empty());
        assert!(rm.minimizer.is_empty());
    }

    #[test]
    fn negated_square_cardinality_is_submodular() {
        let oracle = SfmOracle::new(vec![0, 1, 2], |s| {
            let k = s.len() as i64;
            -k * k
        });
        let report = check_submodularity(&oracle, SubmodularityMode::Exhaustive).unwrap();
        assert!(report.ok(), "violations: {:?}", report.violations);
        let r = minimize_brute(&oracle).unwrap();
        assert_eq!(r.value, -9);
        assert_eq!(r.minimizer, vs(3, &[0, 1, 2]));
    }

    #[test]
    fn square_cardinality_violates_submodularity() {
        let oracle = SfmOracle::new(vec![0, 1, 2], |s| {
            let k = s.len() as i64;
            k * k
        });
        let report = check_submodularity(&oracle, SubmodularityMode::Exhaustive).unwrap();
        assert!(!report.ok());
        let sampled = check_submodularity(
            &oracle,
            SubmodularityMode::Sampled {
                count: 200,
                seed: 7,
            },
        )
        .unwrap();
        assert!(!sampled.ok());
    }

    #[test]
    fn cut_functions_are_submodular() {
        for n in [4usize, 6, 8] {
            let oracle = cut_oracle(generate::cycle(n.max(6)).unwrap());
            let report =
                check_submodularity(&oracle, SubmodularityMode::Exhaustive).unwrap();
            assert!(report.ok());
        }
    }

    #[test]
    fn exhaustive_mode_rejects_large_grounds() {
        let oracle = SfmOracle::new((0..15).collect(), |s| s.len() as i64);
        assert!(matches!(
            check_submodularity(&oracle, SubmodularityMode::Exhaustive),
            Err(SfmError::GroundTooLarge { size: 15, cap: 14 })
        ));
        let big = SfmOracle::new((0..23).collect(), |s| s.len() as i64);
        assert!(matches!(
            minimize_brute(&big),
            Err(SfmError::GroundTooLarge { size: 23, cap: 22 })
        ));
    }

    /// Random submodular functions: a graph cut plus a modular shift.
    fn random_submodular(seed: u64, n: usize) -> SfmOracle<'static> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        let shift: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let weight: Vec<i64> = edges.iter().map(|_| rng.gen_range(1..=4)).collect();
        SfmOracle::new((0..n).collect(), move |s| {
            let mut total = 0i64;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if s.contains(u) != s.contains(v) {
                    total += weight[i];
                }
            }
            total + s.iter().map(|i| shift[i]).sum::<i64>()
        })
    }

    #[test]
    fn norm_point_matches_brute_on_random_oracles() {
        for seed in 0..40u64 {
            let n = 5 + (seed % 8) as usize;
            let oracle = random_submodular(seed, n);
            let sanity =
                check_submodularity(&oracle, SubmodularityMode::Exhaustive).unwrap();
            assert!(sanity.ok());
            let rb = minimize_brute(&oracle).unwrap();
            let rm = minimize_mnp(&oracle).unwrap();
            assert_eq!(rb.value, rm.value, "seed {seed}");
            assert_eq!(rb.minimizer, rm.minimizer, "seed {seed}");
        }
    }

    #[test]
    fn empty_ground_minimizes_to_empty() {
        let oracle = SfmOracle::new(vec![], |_| 7);
        let rb = minimize_brute(&oracle).unwrap();
        assert_eq!((rb.value, rb.minimizer.len()), (7, 0));
        let rm = minimize_mnp(&oracle).unwrap();
        assert_eq!((rm.value, rm.minimizer.len()), (7, 0));
    }

    #[test]
    fn labels_map_back_to_ground_elements() {
        let relabeled = SfmOracle::new(vec![10, 20, 30], |s| {
            s.iter().map(|i| [5i64, -2, 0][i]).sum()
        });
        let r = minimize_brute(&relabeled).unwrap();
        assert_eq!(relabeled.labels(&r.minimizer), vec![20]);
    }
}
