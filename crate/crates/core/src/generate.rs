//! Seeded instance generators. Fixed seeds give byte-identical graphs.

use crate::graph::Graph;
use crate::recognition::{self, BergeStatus};
use num::rational::BigRational;
use num::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("rejection budget of {0} exhausted")]
    RejectionBudgetExceeded(usize),
}

/// Even cycle C_len with len >= 6; odd or short cycles are outside the target
/// class and are refused.
pub fn cycle(len: usize) -> Result<Graph, GenError> {
    if len < 6 || len % 2 != 0 {
        return Err(GenError::BadParams(format!(
            "cycle length must be even and at least 6, got {len}"
        )));
    }
    let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    Ok(Graph::from_edges(len, &edges).expect("cycle is simple"))
}

/// Path on n vertices 0-1-...-(n-1).
pub fn path(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParams("path needs at least one vertex".into()));
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Graph::from_edges(n, &edges).expect("path is simple"))
}

/// Random d-regular graph on `n` vertices via the pairing model, rejecting
/// pairings with loops or parallel edges.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if n * d % 2 != 0 || d >= n {
        return Err(GenError::BadParams(format!(
            "no {d}-regular graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 10_000;
    for _ in 0..budget {
        let mut points: Vec<usize> = (0..n * d).collect();
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
        let mut ok = true;
        for pair in points.chunks(2) {
            let (u, v) = (pair[0] / d, pair[1] / d);
            if u == v {
                ok = false;
                break;
            }
            edges.push((u.min(v), u.max(v)));
        }
        if !ok {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(Graph::from_edges(n, &edges).expect("pairing checked simple"));
    }
    Err(GenError::RejectionBudgetExceeded(budget))
}

/// Subdivide every edge of `base` once. Subdivision vertices are appended
/// after the base ids, in sorted base-edge order. The result is bipartite,
/// C4-free and prism-free whenever the base is simple.
pub fn subdivide(base: &Graph) -> Graph {
    let nb = base.n();
    let base_edges = base.edges();
    let mut edges = Vec::with_capacity(2 * base_edges.len());
    for (i, &(u, v)) in base_edges.iter().enumerate() {
        let mid = nb + i;
        edges.push((u, mid));
        edges.push((mid, v));
    }
    Graph::from_edges(nb + base_edges.len(), &edges).expect("subdivision is simple")
}

/// Subdivided random d-regular graph; the workhorse of the bounded-degree
/// test corpus.
pub fn subdivided_regular(base_n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    let base = random_regular(base_n, d, seed)?;
    Ok(subdivide(&base))
}

/// G(n, p) sampled with exact rational p, rejected until the sample is
/// C4-free, prism-free and Berge.
pub fn filtered_random(n: usize, p: &BigRational, seed: u64, budget: usize) -> Result<Graph, GenError> {
    if n == 0 || p < &BigRational::from_integer(0.into()) || p > &BigRational::from_integer(1.into())
    {
        return Err(GenError::BadParams(format!("bad G(n, p) parameters n={n} p={p}")));
    }
    let den = p
        .denom()
        .to_u64()
        .ok_or_else(|| GenError::BadParams("p denominator too large".into()))?;
    let num = p
        .numer()
        .to_u64()
        .ok_or_else(|| GenError::BadParams("p numerator too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_range(0..den) < num {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).expect("G(n,p) sample is simple");
        if recognition::find_c4(&g).is_some() {
            continue;
        }
        if recognition::find_prism(&g).is_some() {
            continue;
        }
        match recognition::is_berge(&g) {
            Ok(BergeStatus::Berge) => return Ok(g),
            _ => continue,
        }
    }
    Err(GenError::RejectionBudgetExceeded(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vset::VertexSet;

    #[test]
    fn cycle_rejects_odd_and_short() {
        assert!(cycle(5).is_err());
        assert!(cycle(4).is_err());
        assert!(cycle(7).is_err());
        let g = cycle(6).unwrap();
        assert_eq!((g.n(), g.m(), g.max_degree()), (6, 6, 2));
    }

    #[test]
    fn subdivided_k4_shape() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let g = subdivide(&k4);
        assert_eq!((g.n(), g.m(), g.max_degree()), (10, 12, 3));
        assert!(g.bipartition(&VertexSet::full(10)).is_ok());
        assert!(crate::recognition::find_c4(&g).is_none());
        assert!(crate::recognition::find_prism(&g).is_none());
    }

    #[test]
    fn random_regular_is_regular_and_deterministic() {
        let g1 = random_regular(10, 3, 7).unwrap();
        let g2 = random_regular(10, 3, 7).unwrap();
        assert_eq!(g1.edges(), g2.edges());
        assert!((0..10).all(|v| g1.degree(v) == 3));
        let g3 = random_regular(10, 3, 8).unwrap();
        // Different seeds almost surely give different pairings.
        assert!(g1.edges() != g3.edges() || g1.m() == 0);
    }

    #[test]
    fn filtered_random_is_in_class() {
        let p = BigRational::new(1.into(), 6.into());
        let g = filtered_random(12, &p, 42, 5000).unwrap();
        assert!(crate::recognition::find_c4(&g).is_none());
        assert!(crate::recognition::find_prism(&g).is_none());
        assert!(matches!(
            crate::recognition::is_berge(&g).unwrap(),
            BergeStatus::Berge
        ));
    }
}
