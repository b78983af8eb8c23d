//! Structure detection: C4, prism, paw, odd holes and antiholes, even pairs.
//!
//! Witnesses carry explicit vertex lists and can be revalidated against the
//! graph they came from. Everything here is exhaustive search at desk scale;
//! the solver uses these checks as evidence, not as performance-critical
//! subroutines.

use crate::graph::{Graph, WalkOutcome};
use crate::vset::VertexSet;
use std::ops::ControlFlow;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("instance with {n} vertices exceeds the cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("induced path cap hit before a decision was reached")]
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureWitness {
    /// Cycle order (v0, v1, v2, v3): consecutive pairs adjacent, the two
    /// diagonals missing.
    C4([usize; 4]),
    /// Two triangles (a1,a2,a3), (b1,b2,b3) joined by three induced paths;
    /// `paths[i]` runs from a_i to b_i and includes both endpoints.
    Prism {
        tri_a: [usize; 3],
        tri_b: [usize; 3],
        paths: [Vec<usize>; 3],
    },
    /// (a, c, b1, b2): triangle {a, b1, b2} plus pendant c attached at a.
    Paw([usize; 4]),
    /// Chordless odd cycle of length at least 5, in cycle order.
    OddHole(Vec<usize>),
    /// Vertex list inducing an odd hole in the complement, in complement
    /// cycle order.
    OddAntihole(Vec<usize>),
}

impl StructureWitness {
    /// Check every claimed edge and non-edge against `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        match self {
            StructureWitness::C4(vs) => {
                distinct(vs)
                    && (0..4).all(|i| g.has_edge(vs[i], vs[(i + 1) % 4]))
                    && !g.has_edge(vs[0], vs[2])
                    && !g.has_edge(vs[1], vs[3])
            }
            StructureWitness::Prism { tri_a, tri_b, paths } => validate_prism(g, tri_a, tri_b, paths),
            StructureWitness::Paw(vs) => {
                let [a, c, b1, b2] = *vs;
                distinct(vs)
                    && g.has_edge(a, b1)
                    && g.has_edge(a, b2)
                    && g.has_edge(b1, b2)
                    && g.has_edge(a, c)
                    && !g.has_edge(c, b1)
                    && !g.has_edge(c, b2)
            }
            StructureWitness::OddHole(cycle) => is_hole(g, cycle) && cycle.len() % 2 == 1,
            StructureWitness::OddAntihole(cycle) => {
                is_hole(&g.complement(), cycle) && cycle.len() % 2 == 1
            }
        }
    }
}

fn distinct(vs: &[usize]) -> bool {
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

fn is_hole(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 5 || !distinct(cycle) {
        return false;
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let adjacent = g.has_edge(cycle[i], cycle[j]);
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if adjacent != consecutive {
                return false;
            }
        }
    }
    true
}

fn validate_prism(g: &Graph, tri_a: &[usize; 3], tri_b: &[usize; 3], paths: &[Vec<usize>; 3]) -> bool {
    let mut all: Vec<usize> = Vec::new();
    for p in paths {
        if p.len() < 2 {
            // A path may be a single edge a_i b_i but always lists both ends.
            return false;
        }
        all.extend_from_slice(p);
    }
    if !distinct(&all) {
        return false;
    }
    for i in 0..3 {
        if paths[i][0] != tri_a[i] || *paths[i].last().unwrap() != tri_b[i] {
            return false;
        }
    }
    // Triangle edges present.
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        if !g.has_edge(tri_a[x], tri_a[y]) || !g.has_edge(tri_b[x], tri_b[y]) {
            return false;
        }
    }
    // Exactly the path edges inside each path, and no edges between distinct
    // paths at all (the triangle edges live on the endpoint vertices).
    for i in 0..3 {
        let p = &paths[i];
        for x in 0..p.len() {
            for y in (x + 1)..p.len() {
                if g.has_edge(p[x], p[y]) != (y == x + 1) {
                    return false;
                }
            }
        }
        for j in (i + 1)..3 {
            for &x in p {
                for &y in &paths[j] {
                    let allowed = (x == tri_a[i] && y == tri_a[j]) || (x == tri_b[i] && y == tri_b[j]);
                    if g.has_edge(x, y) != allowed {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// First induced C4 in lexicographic vertex-set order, reported in canonical
/// cycle order (smallest vertex first, then its smaller neighbor).
pub fn find_c4(g: &Graph) -> Option<StructureWitness> {
    let n = g.n();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    if let Some(w) = c4_on(g, [a, b, c, d]) {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn c4_on(g: &Graph, vs: [usize; 4]) -> Option<StructureWitness> {
    let [a, b, c, d] = vs;
    let e = |x: usize, y: usize| g.has_edge(x, y);
    let count = [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)]
        .iter()
        .filter(|&&(x, y)| e(x, y))
        .count();
    if count != 4 {
        return None;
    }
    // A 4-cycle has all degrees 2 within the set; identify a's two neighbors.
    let nbrs: Vec<usize> = [b, c, d].iter().copied().filter(|&x| e(a, x)).collect();
    if nbrs.len() != 2 {
        return None;
    }
    let opposite = [b, c, d].iter().copied().find(|&x| !e(a, x)).unwrap();
    if !e(nbrs[0], opposite) || !e(nbrs[1], opposite) || e(nbrs[0], nbrs[1]) {
        return None;
    }
    Some(StructureWitness::C4([a, nbrs[0], opposite, nbrs[1]]))
}

/// All induced paws, each canonically labeled (a, c, b1, b2) with b1 < b2.
pub fn find_paws(g: &Graph) -> Vec<StructureWitness> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        let nbrs = g.neighbors(a);
        for (i, &b1) in nbrs.iter().enumerate() {
            for &b2 in nbrs.iter().skip(i + 1) {
                let (b1, b2) = (b1 as usize, b2 as usize);
                if !g.has_edge(b1, b2) {
                    continue;
                }
                for &c in nbrs {
                    let c = c as usize;
                    if c == b1 || c == b2 || g.has_edge(c, b1) || g.has_edge(c, b2) {
                        continue;
                    }
                    out.push(StructureWitness::Paw([a, c, b1, b2]));
                }
            }
        }
    }
    out
}

/// All triangles a < b < c.
fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..g.n() {
        for &b in g.neighbors(a) {
            let b = b as usize;
            if b <= a {
                continue;
            }
            for &c in g.neighbors(b) {
                let c = c as usize;
                if c <= b || !g.has_edge(a, c) {
                    continue;
                }
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Search for an induced prism: two disjoint triangles joined by three
/// induced paths with no other edges between them. Exponential in the worst
/// case; the search is budgeted and intended for desk-scale instances.
pub fn find_prism(g: &Graph) -> Option<StructureWitness> {
    let tris = triangles(g);
    let mut budget = 50_000_000usize;
    for (i, ta) in tris.iter().enumerate() {
        for tb in tris.iter().skip(i + 1) {
            if ta.iter().any(|v| tb.contains(v)) {
                continue;
            }
            // Try the 6 alignments of tb against ta.
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            for perm in perms {
                let b = [tb[perm[0]], tb[perm[1]], tb[perm[2]]];
                if let Some(w) = prism_with_alignment(g, ta, &b, &mut budget) {
                    return Some(w);
                }
                if budget == 0 {
                    return None;
                }
            }
        }
    }
    None
}

fn prism_with_alignment(
    g: &Graph,
    a: &[usize; 3],
    b: &[usize; 3],
    budget: &mut usize,
) -> Option<StructureWitness> {
    // Cross edges between the triangles other than inside each triangle are
    // never allowed: a_i may not see any b_j.
    for i in 0..3 {
        for j in 0..3 {
            if i != j && g.has_edge(a[i], b[j]) {
                return None;
            }
        }
    }
    let mut used = VertexSet::new(g.n());
    for &v in a.iter().chain(b.iter()) {
        used.insert(v);
    }
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut path = vec![a[0]];
    if prism_search(g, a, b, 0, &mut used, &mut paths, &mut path, budget) {
        let arr: [Vec<usize>; 3] = [paths[0].clone(), paths[1].clone(), paths[2].clone()];
        let w = StructureWitness::Prism {
            tri_a: *a,
            tri_b: *b,
            paths: arr,
        };
        debug_assert!(w.validate(g));
        return Some(w);
    }
    None
}

/// Extend the partial path for index `idx`, backtracking across all path
/// choices so a failure deeper in the triple does not lose a prism.
fn prism_search(
    g: &Graph,
    a: &[usize; 3],
    b: &[usize; 3],
    idx: usize,
    used: &mut VertexSet,
    paths: &mut Vec<Vec<usize>>,
    path: &mut Vec<usize>,
    budget: &mut usize,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        let w = w as usize;
        if w == b[idx] {
            // Close the current path; no chord back into it.
            if path[..path.len() - 1].iter().any(|&p| g.has_edge(w, p)) {
                continue;
            }
            path.push(w);
            paths.push(path.clone());
            if idx == 2 {
                return true;
            }
            let mut next = vec![a[idx + 1]];
            if prism_search(g, a, b, idx + 1, used, paths, &mut next, budget) {
                return true;
            }
            paths.pop();
            path.pop();
            continue;
        }
        if used.contains(w) {
            continue;
        }
        // Induced within the current path: w may touch only `last`.
        if path[..path.len() - 1].iter().any(|&p| g.has_edge(w, p)) {
            continue;
        }
        // Anticomplete to everything placed outside the current path except
        // the target: foreign triangle vertices and earlier path interiors.
        let mut bad = false;
        for f in used.iter() {
            if f != b[idx] && !path.contains(&f) && g.has_edge(w, f) {
                bad = true;
                break;
            }
        }
        if bad {
            continue;
        }
        path.push(w);
        used.insert(w);
        if prism_search(g, a, b, idx, used, paths, path, budget) {
            return true;
        }
        used.remove(w);
        path.pop();
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BergeStatus {
    Berge,
    NotBerge(StructureWitness),
    /// Instance exceeded the cap; no verdict.
    Unchecked,
}

pub const BERGE_CAP_DEFAULT: usize = 64;

/// Brute-force Berge test: search for an odd hole in g, then in its
/// complement. Exhaustive, so only sensible at desk scale.
pub fn is_berge(g: &Graph) -> Result<BergeStatus, RecognitionError> {
    is_berge_with_cap(g, BERGE_CAP_DEFAULT)
}

pub fn is_berge_with_cap(g: &Graph, cap: usize) -> Result<BergeStatus, RecognitionError> {
    if g.n() > cap {
        return Err(RecognitionError::InstanceTooLarge { n: g.n(), cap });
    }
    if let Some(hole) = find_odd_hole(g) {
        return Ok(BergeStatus::NotBerge(StructureWitness::OddHole(hole)));
    }
    if let Some(hole) = find_odd_hole(&g.complement()) {
        return Ok(BergeStatus::NotBerge(StructureWitness::OddAntihole(hole)));
    }
    Ok(BergeStatus::Berge)
}

/// First odd chordless cycle of length at least 5, in DFS order from the
/// smallest starting vertex.
pub fn find_odd_hole(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut path: Vec<usize> = Vec::new();
    let mut in_path = VertexSet::new(n);
    for s in 0..n {
        path.clear();
        path.push(s);
        in_path.clear();
        in_path.insert(s);
        if let Some(hole) = odd_hole_dfs(g, s, &mut path, &mut in_path) {
            return Some(hole);
        }
    }
    None
}

fn odd_hole_dfs(g: &Graph, s: usize, path: &mut Vec<usize>, in_path: &mut VertexSet) -> Option<Vec<usize>> {
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        let w = w as usize;
        // Only vertices above the start, so each cycle is rooted at its
        // minimum exactly once.
        if w <= s || in_path.contains(w) {
            continue;
        }
        // Chordless: w may only touch the path at `last`, except that an
        // edge back to s closes a cycle.
        let mut chord = false;
        let mut closes = false;
        for (i, &p) in path.iter().enumerate() {
            if p != last && g.has_edge(w, p) {
                if i == 0 {
                    closes = true;
                } else {
                    chord = true;
                    break;
                }
            }
        }
        if chord {
            continue;
        }
        if closes {
            let len = path.len() + 1;
            if len >= 5 && len % 2 == 1 {
                let mut hole = path.clone();
                hole.push(w);
                return Some(hole);
            }
            // Even or short cycle; extending past w would chord through s.
            continue;
        }
        path.push(w);
        in_path.insert(w);
        let found = odd_hole_dfs(g, s, path, in_path);
        path.pop();
        in_path.remove(w);
        if found.is_some() {
            return found;
        }
    }
    None
}

pub const PATH_CAP_DEFAULT: usize = 1_000_000;

/// Even pair test: u, v non-adjacent and every induced u-v path has even
/// length. Decides early on the first odd path.
pub fn is_even_pair(g: &Graph, u: usize, v: usize) -> Result<bool, RecognitionError> {
    is_even_pair_with_cap(g, u, v, PATH_CAP_DEFAULT)
}

pub fn is_even_pair_with_cap(g: &Graph, u: usize, v: usize, cap: usize) -> Result<bool, RecognitionError> {
    if g.has_edge(u, v) {
        return Ok(false);
    }
    let mut odd_found = false;
    let outcome = g.walk_induced_paths(u, v, cap, |p| {
        if (p.len() - 1) % 2 == 1 {
            odd_found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match outcome {
        WalkOutcome::Stopped => Ok(false),
        WalkOutcome::Exhausted => Ok(true),
        WalkOutcome::CapHit => Err(RecognitionError::Truncated),
    }
}

/// Does v break the paw potential of x? True when no component D of
/// G minus N[v] satisfies x inside N[D].
pub fn breaks(g: &Graph, v: usize, x: &VertexSet) -> bool {
    let mut alive = VertexSet::full(g.n());
    let mut nv = VertexSet::from_vertices(g.n(), [v]);
    nv = g.closed_neighborhood(&nv);
    alive.difference_with(&nv);
    for comp in g.components(&alive) {
        let mut reach = g.closed_neighborhood(&comp);
        reach.union_with(&comp);
        if x.is_subset_of(&reach) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct PreconditionReport {
    pub connected: bool,
    pub max_degree: usize,
    pub c4: Option<StructureWitness>,
    pub prism: Option<StructureWitness>,
    pub berge: BergeStatus,
}

impl PreconditionReport {
    /// True when no disqualifying structure was found. Berge status
    /// `Unchecked` does not disqualify; it is reported as unverified.
    pub fn admissible(&self) -> bool {
        self.c4.is_none() && self.prism.is_none() && !matches!(self.berge, BergeStatus::NotBerge(_))
    }
}

/// Class evidence report: C4, prism, Berge (capped), connectivity, degree.
pub fn check_preconditions(g: &Graph) -> PreconditionReport {
    let berge = match is_berge(g) {
        Ok(status) => status,
        Err(_) => BergeStatus::Unchecked,
    };
    PreconditionReport {
        connected: g.is_connected(),
        max_degree: g.max_degree(),
        c4: find_c4(g),
        prism: find_prism(g),
        berge,
    }
}
