//! Undirected simple graphs on vertex ids `0..n`.
//!
//! Adjacency is stored twice: sorted neighbor lists for iteration and one
//! bitset row per vertex for O(n/64) set operations. Vertex ids double as the
//! canonical total order used for every deterministic tie-break in the crate.

use crate::vset::VertexSet;
use std::ops::ControlFlow;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for n = {1}")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
    rows: Vec<VertexSet>,
    m: usize,
    max_degree: usize,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut rows = vec![VertexSet::new(n); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if rows[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        let adj: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v as u32).collect())
            .collect();
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            n,
            adj,
            rows,
            m: edges.len(),
            max_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// Bitset row N(v).
    pub fn row(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Sorted edge list with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                let v = v as usize;
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Open neighborhood N(X): all vertices outside X with a neighbor in X.
    pub fn neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for v in x.iter() {
            out.union_with(&self.rows[v]);
        }
        out.difference_with(x);
        out
    }

    /// Closed neighborhood N[X] = X together with N(X).
    pub fn closed_neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mut out = x.clone();
        for v in x.iter() {
            out.union_with(&self.rows[v]);
        }
        out
    }

    /// Closed ball N^d[v]: vertices at distance at most d from v.
    pub fn ball(&self, v: usize, d: usize) -> VertexSet {
        let mut seen = VertexSet::new(self.n);
        seen.insert(v);
        let mut frontier = vec![v];
        for _ in 0..d {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if !seen.contains(w) {
                        seen.insert(w);
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen
    }

    /// Connected components of the subgraph induced on `alive`, ordered by
    /// smallest member.
    pub fn components(&self, alive: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new(self.n);
        let mut out = Vec::new();
        for seed in alive.iter() {
            if seen.contains(seed) {
                continue;
            }
            let mut comp = VertexSet::new(self.n);
            comp.insert(seed);
            seen.insert(seed);
            let mut queue = vec![seed];
            while let Some(u) = queue.pop() {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if alive.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        comp.insert(w);
                        queue.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.components(&VertexSet::full(self.n)).len() == 1
    }

    /// Induced subgraph on `keep`, with a map from new ids back to old ids.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let to_parent: Vec<usize> = keep.iter().collect();
        let mut local = vec![usize::MAX; self.n];
        for (new, &old) in to_parent.iter().enumerate() {
            local[old] = new;
        }
        let mut edges = Vec::new();
        for (new_u, &old_u) in to_parent.iter().enumerate() {
            for &old_v in &self.adj[old_u] {
                let old_v = old_v as usize;
                if keep.contains(old_v) && old_u < old_v {
                    edges.push((new_u, local[old_v]));
                }
            }
        }
        let g = Graph::from_edges(to_parent.len(), &edges).expect("induced subgraph is simple");
        (g, to_parent)
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, &edges).expect("complement is simple")
    }

    /// 2-color the subgraph induced on `within` by BFS from the smallest id of
    /// each component; that vertex's side is the first side. Returns the two
    /// sides, or an odd closed walk certificate on failure.
    pub fn bipartition(&self, within: &VertexSet) -> Result<(VertexSet, VertexSet), Vec<usize>> {
        let mut color = vec![u8::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut side0 = VertexSet::new(self.n);
        let mut side1 = VertexSet::new(self.n);
        for seed in within.iter() {
            if color[seed] != u8::MAX {
                continue;
            }
            color[seed] = 0;
            side0.insert(seed);
            let mut queue = std::collections::VecDeque::from([seed]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if !within.contains(w) {
                        continue;
                    }
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        parent[w] = u;
                        if color[w] == 0 {
                            side0.insert(w);
                        } else {
                            side1.insert(w);
                        }
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        // Odd cycle: walk both tree paths to the root and join.
                        let path_to_root = |mut x: usize| {
                            let mut p = vec![x];
                            while parent[x] != usize::MAX {
                                x = parent[x];
                                p.push(x);
                            }
                            p
                        };
                        let mut pu = path_to_root(u);
                        let mut pw = path_to_root(w);
                        while pu.len() > 1
                            && pw.len() > 1
                            && pu[pu.len() - 1] == pw[pw.len() - 1]
                            && pu[pu.len() - 2] == pw[pw.len() - 2]
                        {
                            pu.pop();
                            pw.pop();
                        }
                        pw.pop();
                        pw.reverse();
                        pu.extend(pw);
                        return Err(pu);
                    }
                }
            }
        }
        Ok((side0, side1))
    }

    /// Visit every induced path from `u` to `v` in ascending DFS order. The
    /// visitor may stop the walk; `cap` bounds the number of paths visited.
    pub fn walk_induced_paths<F>(&self, u: usize, v: usize, cap: usize, mut visit: F) -> WalkOutcome
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        assert!(u < self.n && v < self.n && u != v);
        let mut path = vec![u];
        let mut in_path = VertexSet::new(self.n);
        in_path.insert(u);
        // blocked = vertices adjacent to path[..len-1]; extending through them
        // would create a chord.
        let mut count = 0usize;
        let outcome = self.walk_rec(v, &mut path, &mut in_path, cap, &mut count, &mut visit);
        match outcome {
            Some(WalkOutcome::Stopped) => WalkOutcome::Stopped,
            Some(WalkOutcome::CapHit) => WalkOutcome::CapHit,
            _ => WalkOutcome::Exhausted,
        }
    }

    fn walk_rec<F>(
        &self,
        target: usize,
        path: &mut Vec<usize>,
        in_path: &mut VertexSet,
        cap: usize,
        count: &mut usize,
        visit: &mut F,
    ) -> Option<WalkOutcome>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let last = *path.last().unwrap();
        for &w in &self.adj[last] {
            let w = w as usize;
            if in_path.contains(w) {
                continue;
            }
            // Induced: w may touch the path only at `last` (and it does).
            let mut chord = false;
            for &p in path[..path.len() - 1].iter() {
                if self.has_edge(w, p) {
                    chord = true;
                    break;
                }
            }
            if chord {
                continue;
            }
            if w == target {
                path.push(w);
                *count += 1;
                let flow = visit(path);
                path.pop();
                if flow.is_break() {
                    return Some(WalkOutcome::Stopped);
                }
                if *count >= cap {
                    return Some(WalkOutcome::CapHit);
                }
                continue;
            }
            path.push(w);
            in_path.insert(w);
            let res = self.walk_rec(target, path, in_path, cap, count, visit);
            path.pop();
            in_path.remove(w);
            if res.is_some() {
                return res;
            }
        }
        None
    }

    /// All induced paths from `u` to `v`, up to `cap` many. The flag reports
    /// whether the cap cut the enumeration short.
    pub fn enumerate_induced_paths(&self, u: usize, v: usize, cap: usize) -> (Vec<Vec<usize>>, bool) {
        let mut out = Vec::new();
        let outcome = self.walk_induced_paths(u, v, cap, |p| {
            out.push(p.to_vec());
            ControlFlow::Continue(())
        });
        (out, outcome == WalkOutcome::CapHit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkOutcome {
    Exhausted,
    CapHit,
    Stopped,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn c8_ball_radius_two() {
        let g = generate::cycle(8).unwrap();
        let b = g.ball(0, 2);
        assert_eq!(b.to_vec(), vec![0, 1, 2, 6, 7]);
        assert_eq!(g.ball(3, 0).to_vec(), vec![3]);
        assert_eq!(g.ball(0, 100), VertexSet::full(8));
    }

    #[test]
    fn components_of_cycle_minus_closed_neighborhood() {
        let g = generate::cycle(8).unwrap();
        let mut alive = VertexSet::full(8);
        alive.difference_with(&g.closed_neighborhood(&VertexSet::from_vertices(8, [0])));
        let comps = g.components(&alive);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].to_vec(), vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn components_are_ordered_by_smallest_member() {
        // Two triangles and an isolated vertex.
        let g = Graph::from_edges(7, &[(4, 5), (5, 6), (4, 6), (0, 1), (1, 2), (0, 2)]).unwrap();
        let comps = g.components(&VertexSet::full(7));
        let mins: Vec<usize> = comps.iter().map(|c| c.first().unwrap()).collect();
        assert_eq!(mins, vec![0, 3, 4]);
        let mut union = VertexSet::new(7);
        for c in &comps {
            assert!(union.is_disjoint(c));
            union.union_with(c);
        }
        assert_eq!(union, VertexSet::full(7));
    }

    #[test]
    fn c6_induced_paths_between_antipodal_and_distance_two() {
        let g = generate::cycle(6).unwrap();
        // Non-adjacent pair at distance 2: the two arcs have lengths 2 and 4.
        let (paths, truncated) = g.enumerate_induced_paths(0, 2, 1_000_000);
        assert!(!truncated);
        let mut lengths: Vec<usize> = paths.iter().map(|p| p.len() - 1).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![2, 4]);
        // Antipodal pair: both arcs have length 3.
        let (paths, _) = g.enumerate_induced_paths(0, 3, 1_000_000);
        let mut lengths: Vec<usize> = paths.iter().map(|p| p.len() - 1).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![3, 3]);
    }

    #[test]
    fn adjacent_pair_has_exactly_the_edge_path() {
        let g = generate::cycle(6).unwrap();
        let (paths, _) = g.enumerate_induced_paths(0, 1, 1_000_000);
        assert_eq!(paths, vec![vec![0, 1]]);
    }

    #[test]
    fn path_cap_truncates() {
        let g = generate::cycle(6).unwrap();
        let (paths, truncated) = g.enumerate_induced_paths(0, 3, 1);
        assert_eq!(paths.len(), 1);
        assert!(truncated);
    }

    #[test]
    fn paths_are_induced() {
        // Theta-ish graph: many u-v paths, chords must be excluded.
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 6), (0, 3), (3, 6), (0, 4), (4, 5), (5, 6), (1, 3)],
        )
        .unwrap();
        let (paths, _) = g.enumerate_induced_paths(0, 6, 1_000_000);
        for p in &paths {
            for i in 0..p.len() {
                for j in (i + 2)..p.len() {
                    assert!(!g.has_edge(p[i], p[j]), "chord in {:?}", p);
                }
            }
        }
    }

    #[test]
    fn bipartition_sides_are_canonical() {
        let g = generate::cycle(8).unwrap();
        let (s0, s1) = g.bipartition(&VertexSet::full(8)).unwrap();
        assert_eq!(s0.to_vec(), vec![0, 2, 4, 6]);
        assert_eq!(s1.to_vec(), vec![1, 3, 5, 7]);
        let g5 = generate::path(5).unwrap();
        let (s0, _) = g5.bipartition(&VertexSet::full(5)).unwrap();
        assert_eq!(s0.to_vec(), vec![0, 2, 4]);
    }

    #[test]
    fn bipartition_rejects_odd_cycle_with_certificate() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let err = g.bipartition(&VertexSet::full(5)).unwrap_err();
        assert!(err.len() % 2 == 1, "odd closed walk expected, got {:?}", err);
        for i in 0..err.len() {
            assert!(g.has_edge(err[i], err[(i + 1) % err.len()]));
        }
    }

    #[test]
    fn induced_subgraph_remaps_ids() {
        let g = generate::cycle(6).unwrap();
        let keep = VertexSet::from_vertices(6, [1, 2, 4]);
        let (h, back) = g.induced(&keep);
        assert_eq!(h.n(), 3);
        assert_eq!(back, vec![1, 2, 4]);
        assert_eq!(h.m(), 1);
        assert!(h.has_edge(0, 1));
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]).unwrap_err(),
            GraphError::VertexOutOfRange(3, 3)
        );
    }
}
