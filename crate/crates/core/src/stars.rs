//! Canonical star separations, star twins, the A-part partial order, and the
//! star covering sequences that seed the central-bag construction.
//!
//! A separation splits the vertex set into (A, C, B) with no edges between A
//! and B. A star separation keeps its cut C inside the closed neighborhood of
//! a center vertex. The canonical one for center v puts the heaviest
//! component of G minus N[v] into B, the neighbors of v that touch B (plus v
//! itself) into C, and everything else into A. Comparing A-parts across
//! centers yields a relation that is a partial order exactly on the inputs
//! the decomposition pipeline is entitled to; all order axioms are audited at
//! build time and violations are reported as errors rather than silently
//! producing a broken decomposition.

use crate::graph::Graph;
use crate::vset::VertexSet;
use crate::weights::Weights;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Audit failures raised by the decomposition pipeline.
///
/// Each variant signals that a structural hypothesis the construction relies
/// on does not hold for the input, together with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    /// The A-part relation failed an order axiom. A two-vertex witness
    /// [x, y] is an antisymmetry failure (x <= y <= x with x != y); a
    /// three-vertex witness [x, y, z] is a transitivity failure
    /// (x <= y <= z but not x <= z).
    #[error("A-part relation is not a partial order (witness {witness:?})")]
    OrderViolation { witness: Vec<usize> },
    /// A vertex set that must induce a bipartite graph contains an odd
    /// closed walk.
    #[error("induced subgraph is not bipartite (odd closed walk {odd_cycle:?})")]
    NotBipartite { odd_cycle: Vec<usize> },
    /// Two separations in a sequence that must be pairwise loosely
    /// non-crossing overlap: `vertex` lies in the A-part of one and the
    /// cut of the other.
    #[error("separations centered at {center_a} and {center_b} cross at vertex {vertex}")]
    LaminarityViolation {
        center_a: usize,
        center_b: usize,
        vertex: usize,
    },
    /// A separation's anchor fell outside the central bag being built.
    #[error("anchor {anchor} is outside the central bag")]
    AnchorOutsideBag { anchor: usize },
    /// Two separations in one sequence share an anchor vertex.
    #[error("vertex {anchor} anchors more than one separation")]
    DuplicateAnchor { anchor: usize },
    /// The central bag of a connected graph came out disconnected.
    #[error("central bag is disconnected")]
    BagDisconnected,
    /// The star-free bag differs from the star covering.
    #[error("star-free bag {got:?} differs from the star covering {expected:?}")]
    BagMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    /// A component left by the core bag is not contained in a single A-part
    /// with its neighborhood inside that center's closed neighborhood.
    #[error("component {component:?} escapes every A-part of the core bag")]
    CoreAudit { component: Vec<usize> },
    /// An A-part meets the core bag in more vertices than the degree bound
    /// allows, so the layer construction cannot place them.
    #[error("A-part of {center} meets the core in {size} vertices, above the bound {bound}")]
    LayerOverflow {
        center: usize,
        size: usize,
        bound: usize,
    },
    /// The separator driver requires a connected input graph.
    #[error("input graph is not connected")]
    NotConnected,
    /// The separator driver requires the uniform weight function.
    #[error("weights are not uniform with total one")]
    NotUniform,
    /// The balance parameter must satisfy 1/2 <= c < 1.
    #[error("balance parameter {c} is outside [1/2, 1)")]
    BalanceOutOfRange { c: String },
}

/// A split (A, C, B) of the vertex set with no edges between A and B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub a: VertexSet,
    pub c: VertexSet,
    pub b: VertexSet,
}

impl Separation {
    /// True when the parts are disjoint, cover every vertex, and A is
    /// anticomplete to B.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = g.n();
        if self.a.capacity() != n || self.c.capacity() != n || self.b.capacity() != n {
            return false;
        }
        if !self.a.is_disjoint(&self.c)
            || !self.a.is_disjoint(&self.b)
            || !self.c.is_disjoint(&self.b)
        {
            return false;
        }
        if self.a.len() + self.c.len() + self.b.len() != n {
            return false;
        }
        !self.a.iter().any(|u| g.row(u).intersects(&self.b))
    }

    /// The separation (A ∩ H, C ∩ H, B ∩ H) induced on a vertex subset H.
    pub fn restricted_to(&self, keep: &VertexSet) -> Separation {
        Separation {
            a: self.a.intersection(keep),
            c: self.c.intersection(keep),
            b: self.b.intersection(keep),
        }
    }
}

/// A separation whose cut lies inside the closed neighborhood of a center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSeparation {
    pub sep: Separation,
    pub center: usize,
}

impl StarSeparation {
    /// The vertex that receives deleted weight when a central bag consumes
    /// this separation. For star separations this is the center.
    pub fn anchor(&self) -> usize {
        self.center
    }
}

/// The canonical star separation for center v.
///
/// B is the maximum-weight component of G minus N[v], ties broken toward the
/// component containing the smallest vertex id; C is v plus the neighbors of
/// v with a neighbor in B; A is the rest. When N[v] covers the whole graph
/// the result degenerates to A = B = empty, C = N[v].
pub fn canonical_star_separation(g: &Graph, w: &Weights, v: usize) -> StarSeparation {
    let n = g.n();
    let closed = g.ball(v, 1);
    let alive = closed.complement();
    let comps = g.components(&alive);
    let b = match comps.first() {
        None => VertexSet::new(n),
        Some(first) => {
            let mut best = first.clone();
            let mut best_weight = w.set_numer(first);
            for comp in &comps[1..] {
                let cw = w.set_numer(comp);
                if cw > best_weight {
                    best = comp.clone();
                    best_weight = cw;
                }
            }
            best
        }
    };
    let mut c = VertexSet::new(n);
    c.insert(v);
    if b.is_empty() {
        c.union_with(&closed);
    } else {
        for &u in g.neighbors(v) {
            if g.row(u as usize).intersects(&b) {
                c.insert(u as usize);
            }
        }
    }
    let mut a = VertexSet::full(n);
    a.difference_with(&b);
    a.difference_with(&c);
    StarSeparation {
        sep: Separation { a, c, b },
        center: v,
    }
}

/// True when the two separations have equal B-parts, equal C-parts after
/// removing the centers, and equal A-parts after removing each other's
/// center. Distinct centers required; a separation is never its own twin.
pub fn are_star_twins(su: &StarSeparation, sv: &StarSeparation) -> bool {
    if su.center == sv.center {
        return false;
    }
    if su.sep.b != sv.sep.b {
        return false;
    }
    let mut cu = su.sep.c.clone();
    cu.remove(su.center);
    let mut cv = sv.sep.c.clone();
    cv.remove(sv.center);
    if cu != cv {
        return false;
    }
    let mut au = su.sep.a.clone();
    au.remove(sv.center);
    let mut av = sv.sep.a.clone();
    av.remove(su.center);
    au == av
}

/// True when neither separation's A-part meets the other's cut.
pub fn is_loosely_noncrossing(s1: &Separation, s2: &Separation) -> bool {
    !s1.a.intersects(&s2.c) && !s2.a.intersects(&s1.c)
}

/// The canonical star separations of every vertex, computed once and shared
/// by the order, covering, and bag constructions.
#[derive(Debug, Clone)]
pub struct StarSystem {
    seps: Vec<StarSeparation>,
}

impl StarSystem {
    /// Compute the canonical star separation of every vertex.
    pub fn build(g: &Graph, w: &Weights) -> StarSystem {
        let seps = (0..g.n())
            .map(|v| canonical_star_separation(g, w, v))
            .collect();
        StarSystem { seps }
    }

    pub fn n(&self) -> usize {
        self.seps.len()
    }

    pub fn separation(&self, v: usize) -> &StarSeparation {
        &self.seps[v]
    }

    pub fn are_star_twins(&self, u: usize, v: usize) -> bool {
        are_star_twins(&self.seps[u], &self.seps[v])
    }

    /// The A-part relation: x <= y when x = y, or x and y are star twins
    /// and x has the smaller id, or they are not twins and y lies in the
    /// A-part of x.
    pub fn leq_a(&self, x: usize, y: usize) -> bool {
        if x == y {
            return true;
        }
        // Star twins always lie in each other's A-parts (the twin's spot in
        // the partition can only be A), so the membership test below gates
        // both remaining cases.
        if !self.seps[x].sep.a.contains(y) {
            return false;
        }
        if self.are_star_twins(x, y) {
            x < y
        } else {
            true
        }
    }

    /// Materialize the A-part relation and audit the partial-order axioms.
    pub fn build_order(&self) -> Result<OrderRelation, PipelineError> {
        let n = self.n();
        let mut succ: Vec<VertexSet> = Vec::with_capacity(n);
        let mut twins: Vec<VertexSet> = vec![VertexSet::new(n); n];
        for x in 0..n {
            let mut sx = VertexSet::new(n);
            sx.insert(x);
            // Twins and ordinary successors both live inside A_x.
            for y in self.seps[x].sep.a.iter() {
                if self.are_star_twins(x, y) {
                    twins[x].insert(y);
                    if x < y {
                        sx.insert(y);
                    }
                } else {
                    sx.insert(y);
                }
            }
            succ.push(sx);
        }
        for x in 0..n {
            for y in succ[x].iter() {
                if y != x && succ[y].contains(x) {
                    return Err(PipelineError::OrderViolation {
                        witness: vec![x, y],
                    });
                }
            }
        }
        for x in 0..n {
            for y in succ[x].iter() {
                if y == x {
                    continue;
                }
                if !succ[y].is_subset_of(&succ[x]) {
                    let z = succ[y]
                        .difference(&succ[x])
                        .first()
                        .expect("non-subset has an extra element");
                    return Err(PipelineError::OrderViolation {
                        witness: vec![x, y, z],
                    });
                }
            }
        }
        Ok(OrderRelation { succ, twins })
    }

    /// 2-color the induced subgraph on x and return the covering sequences
    /// of the two sides, each ordered by center id, after auditing that each
    /// side is pairwise loosely non-crossing.
    pub fn bipartition_sequences(
        &self,
        g: &Graph,
        x: &VertexSet,
    ) -> Result<(Vec<StarSeparation>, Vec<StarSeparation>), PipelineError> {
        let (side1, side2) = g
            .bipartition(x)
            .map_err(|odd_cycle| PipelineError::NotBipartite { odd_cycle })?;
        let collect = |side: &VertexSet| -> Vec<StarSeparation> {
            side.iter().map(|v| self.seps[v].clone()).collect()
        };
        let seq1 = collect(&side1);
        let seq2 = collect(&side2);
        audit_loose_laminarity(&seq1)?;
        audit_loose_laminarity(&seq2)?;
        Ok((seq1, seq2))
    }
}

/// Check that every pair in the sequence is loosely non-crossing.
pub fn audit_loose_laminarity(seq: &[StarSeparation]) -> Result<(), PipelineError> {
    let empty_a: Vec<bool> = seq.iter().map(|s| s.sep.a.is_empty()).collect();
    for (i, si) in seq.iter().enumerate() {
        for (j, sj) in seq.iter().enumerate().skip(i + 1) {
            if empty_a[i] && empty_a[j] {
                continue;
            }
            if !is_loosely_noncrossing(&si.sep, &sj.sep) {
                let vertex = si
                    .sep
                    .a
                    .intersection(&sj.sep.c)
                    .first()
                    .or_else(|| sj.sep.a.intersection(&si.sep.c).first())
                    .expect("crossing pair has a witness vertex");
                return Err(PipelineError::LaminarityViolation {
                    center_a: si.center,
                    center_b: sj.center,
                    vertex,
                });
            }
        }
    }
    Ok(())
}

/// The audited A-part partial order, stored as successor sets plus the
/// star-twin adjacency map.
#[derive(Debug, Clone)]
pub struct OrderRelation {
    succ: Vec<VertexSet>,
    twins: Vec<VertexSet>,
}

impl OrderRelation {
    pub fn n(&self) -> usize {
        self.succ.len()
    }

    /// True when x <= y in the audited order.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.succ[x].contains(y)
    }

    /// The star twins of v (excluding v itself).
    pub fn twins_of(&self, v: usize) -> &VertexSet {
        &self.twins[v]
    }

    /// Vertices with no strict predecessor.
    pub fn minimal_vertices(&self) -> VertexSet {
        let n = self.n();
        let mut has_pred = vec![false; n];
        for x in 0..n {
            for y in self.succ[x].iter() {
                if y != x {
                    has_pred[y] = true;
                }
            }
        }
        let mut out = VertexSet::new(n);
        for (v, &p) in has_pred.iter().enumerate() {
            if !p {
                out.insert(v);
            }
        }
        out
    }

    /// A deterministic linear extension: Kahn's algorithm over the successor
    /// sets, always emitting the smallest available vertex id first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for x in 0..n {
            for y in self.succ[x].iter() {
                if y != x {
                    indeg[y] += 1;
                }
            }
        }
        let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            out.push(v);
            for y in self.succ[v].iter() {
                if y != v {
                    indeg[y] -= 1;
                    if indeg[y] == 0 {
                        heap.push(Reverse(y));
                    }
                }
            }
        }
        debug_assert_eq!(out.len(), n, "audited order must be acyclic");
        out
    }
}

/// The set of minimal vertices of the audited order. The covering sequence
/// is this set in ascending id order.
pub fn star_covering(order: &OrderRelation) -> VertexSet {
    let x = order.minimal_vertices();
    debug_assert!(
        {
            let v: Vec<usize> = x.iter().collect();
            v.iter().all(|&a| v.iter().all(|&b| a == b || !order.le(a, b)))
        },
        "minimal vertices must form an antichain"
    );
    x
}
