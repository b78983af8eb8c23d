//! Iterated even sets, the layered representation of the core bag, and the
//! two-branch tame separator.
//!
//! The layered representation orders the part of the core bag outside the
//! star-free bag by ranking each vertex inside every A-part that contains
//! it, under a fixed linear extension of the A-order; a vertex lands in the
//! layer named by its largest rank. Prepending the two bipartition sides of
//! the star-free bag yields the full separator. The tame separator first
//! scans for a single ball whose removal is balanced; only when no vertex
//! qualifies does it run the full pipeline.

use crate::bags::{star_free_bag, BagTower};
use crate::graph::Graph;
use crate::recognition;
use crate::stars::{star_covering, OrderRelation, PipelineError, StarSeparation, StarSystem};
use crate::vset::VertexSet;
use crate::weights::{ratio_string, Weights};
use num::{BigInt, BigRational, One, Zero};

/// An ordered sequence of disjoint layers, each intended to be an even set
/// in the graph minus all earlier layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedEvenSet {
    pub layers: Vec<VertexSet>,
}

impl IteratedEvenSet {
    /// Number of layers.
    pub fn k(&self) -> usize {
        self.layers.len()
    }

    /// Union of all layers.
    pub fn union(&self, n: usize) -> VertexSet {
        let mut u = VertexSet::new(n);
        for l in &self.layers {
            u.union_with(l);
        }
        u
    }

    /// Union of the layers strictly before index `i`.
    pub fn pre(&self, n: usize, i: usize) -> VertexSet {
        let mut u = VertexSet::new(n);
        for l in &self.layers[..i] {
            u.union_with(l);
        }
        u
    }
}

/// Which branch of the tame-separator dichotomy produced a separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatorBranch {
    /// A single ball of radius max-degree-plus-three, returned as singleton
    /// layers.
    Ball,
    /// The full pipeline through the star covering, the bag tower, and the
    /// layered representation of the core bag.
    Core,
}

/// A component of the graph minus the separator, with its neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorComponent {
    pub vertices: VertexSet,
    pub neighborhood: VertexSet,
}

/// An iterated even set whose removal leaves only components that are both
/// light (weight at most `c`) and shallow (neighborhood of size at most
/// `d`).
#[derive(Debug, Clone)]
pub struct EvenSetSeparator {
    pub iterated: IteratedEvenSet,
    pub k: usize,
    pub c: BigRational,
    pub d: usize,
    pub branch: SeparatorBranch,
    pub components: Vec<SeparatorComponent>,
}

/// Everything the pipeline computed on the way to a core-branch separator.
#[derive(Debug, Clone)]
pub struct PipelineArtifacts {
    pub system: StarSystem,
    pub order: OrderRelation,
    pub covering: VertexSet,
    pub seq1: Vec<StarSeparation>,
    pub seq2: Vec<StarSeparation>,
    pub tower: BagTower,
}

/// Layer the part of the core bag outside the star-free bag.
///
/// Each vertex is ranked, one-based, inside every A-part of a first-side
/// center that contains it, by the fixed linear extension of the A-order;
/// the vertex joins the layer of its maximum rank. A-parts meeting the core
/// bag in more than max-degree-squared vertices break the size bound the
/// construction relies on and are reported as overflow.
pub fn even_set_representation(
    g: &Graph,
    sys: &StarSystem,
    order: &OrderRelation,
    tower: &BagTower,
) -> Result<IteratedEvenSet, PipelineError> {
    let n = g.n();
    let delta = g.max_degree();
    let bound = delta * delta;
    let ext = order.linear_extension();
    let mut pos = vec![0usize; n];
    for (i, &v) in ext.iter().enumerate() {
        pos[v] = i;
    }
    let mut rank = vec![0usize; n];
    for x1 in tower.x1.iter() {
        let d_set = sys.separation(x1).sep.a.intersection(&tower.core);
        if d_set.len() > bound {
            return Err(PipelineError::LayerOverflow {
                center: x1,
                size: d_set.len(),
                bound,
            });
        }
        let mut members = d_set.to_vec();
        members.sort_by_key(|&v| pos[v]);
        for (i, &v) in members.iter().enumerate() {
            rank[v] = rank[v].max(i + 1);
        }
    }
    let depth = rank.iter().copied().max().unwrap_or(0);
    let mut layers = vec![VertexSet::new(n); depth];
    for v in 0..n {
        if rank[v] > 0 {
            layers[rank[v] - 1].insert(v);
        }
    }
    let iterated = IteratedEvenSet { layers };
    debug_assert_eq!(
        iterated.union(n),
        tower.core.difference(&tower.beta),
        "layers cover exactly the core bag outside the star-free bag"
    );
    Ok(iterated)
}

fn separator_components(g: &Graph, removed: &VertexSet) -> Vec<SeparatorComponent> {
    let alive = removed.complement();
    g.components(&alive)
        .into_iter()
        .map(|vertices| {
            let neighborhood = g.neighborhood(&vertices);
            SeparatorComponent {
                vertices,
                neighborhood,
            }
        })
        .collect()
}

fn max_component_weight(w: &Weights, components: &[SeparatorComponent]) -> BigRational {
    components
        .iter()
        .map(|d| {
            BigRational::new(w.set_numer(&d.vertices), w.denom().clone())
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Run the full core-branch pipeline and keep the intermediate artifacts.
///
/// The caller asserts that no small-radius ball is a balanced separator;
/// under that hypothesis every leftover component is light. The returned
/// weight bound `c` is the largest component weight actually observed.
pub fn build_separator_with_artifacts(
    g: &Graph,
    w: &Weights,
) -> Result<(EvenSetSeparator, PipelineArtifacts), PipelineError> {
    let n = g.n();
    let sys = StarSystem::build(g, w);
    let order = sys.build_order()?;
    let covering = star_covering(&order);
    let (seq1, seq2) = sys.bipartition_sequences(g, &covering)?;
    let tower = star_free_bag(g, w, &seq1, &seq2)?;
    let rep = even_set_representation(g, &sys, &order, &tower)?;

    let mut layers = Vec::with_capacity(rep.k() + 2);
    layers.push(tower.x1.clone());
    layers.push(tower.x2.clone());
    layers.extend(rep.layers.iter().cloned());
    while layers.last().is_some_and(|l| l.is_empty()) {
        layers.pop();
    }
    let iterated = IteratedEvenSet { layers };
    let components = separator_components(g, &iterated.union(n));
    let sep = EvenSetSeparator {
        k: iterated.k(),
        c: max_component_weight(w, &components),
        d: g.max_degree() + 1,
        branch: SeparatorBranch::Core,
        components,
        iterated,
    };
    let artifacts = PipelineArtifacts {
        system: sys,
        order,
        covering,
        seq1,
        seq2,
        tower,
    };
    Ok((sep, artifacts))
}

/// As `build_separator_with_artifacts`, discarding the artifacts.
pub fn build_separator_no_balanced(
    g: &Graph,
    w: &Weights,
) -> Result<EvenSetSeparator, PipelineError> {
    build_separator_with_artifacts(g, w).map(|(sep, _)| sep)
}

/// The two-branch separator for connected graphs under the uniform weight
/// function: either some ball of radius max-degree-plus-three is itself a
/// balanced separator (returned as singleton layers, smallest qualifying
/// center wins), or the full pipeline runs. `c` must lie in [1/2, 1).
pub fn tame_separator(
    g: &Graph,
    w: &Weights,
    c: &BigRational,
) -> Result<EvenSetSeparator, PipelineError> {
    if !g.is_connected() {
        return Err(PipelineError::NotConnected);
    }
    if !w.is_uniform() || !w.total().is_one() {
        return Err(PipelineError::NotUniform);
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if *c < half || *c >= BigRational::one() {
        return Err(PipelineError::BalanceOutOfRange {
            c: ratio_string(c),
        });
    }
    let radius = g.max_degree() + 3;
    for v in 0..g.n() {
        let ball = g.ball(v, radius);
        let alive = ball.complement();
        if g.components(&alive).iter().all(|d| w.set_weight_le(d, c)) {
            let layers: Vec<VertexSet> = ball
                .iter()
                .map(|x| VertexSet::from_vertices(g.n(), [x]))
                .collect();
            let iterated = IteratedEvenSet { layers };
            let components = separator_components(g, &ball);
            return Ok(EvenSetSeparator {
                k: iterated.k(),
                c: c.clone(),
                d: ball.len(),
                branch: SeparatorBranch::Ball,
                components,
                iterated,
            });
        }
    }
    let mut sep = build_separator_no_balanced(g, w)?;
    if sep.c < *c {
        sep.c = c.clone();
    }
    Ok(sep)
}

/// Outcome of separator verification: human-readable violations, plus a
/// flag set when evenness checking had to stop early.
#[derive(Debug, Clone, Default)]
pub struct SeparatorReport {
    pub violations: Vec<String>,
    pub truncated: bool,
}

impl SeparatorReport {
    /// True when no violation was recorded.
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Residual graphs larger than this skip the exponential evenness check and
/// set the truncation flag instead of running it.
const EVENNESS_VERTEX_CAP: usize = 48;

/// Verify a separator against the uniform weight function.
pub fn verify_separator(g: &Graph, sep: &EvenSetSeparator, full_evenness: bool) -> SeparatorReport {
    verify_separator_with(g, &Weights::uniform(g.n()), sep, full_evenness)
}

/// Verify layer disjointness, per-layer independence, the recorded
/// components, and both component bounds, under an explicit weight
/// function. With `full_evenness` set, additionally check every pair inside
/// every layer with the even-pair oracle in the graph minus all earlier
/// layers; this is exponential and capped, and the cap sets `truncated`.
pub fn verify_separator_with(
    g: &Graph,
    w: &Weights,
    sep: &EvenSetSeparator,
    full_evenness: bool,
) -> SeparatorReport {
    let n = g.n();
    let mut report = SeparatorReport::default();
    let mut seen = VertexSet::new(n);
    for (i, layer) in sep.iterated.layers.iter().enumerate() {
        if seen.intersects(layer) {
            report.violations.push(format!(
                "layer {} intersects an earlier layer",
                i + 1
            ));
        }
        seen.union_with(layer);
        for u in layer.iter() {
            if let Some(v) = g.row(u).intersection(layer).iter().find(|&v| v > u) {
                report.violations.push(format!(
                    "layer {} contains the adjacent pair ({u}, {v})",
                    i + 1
                ));
            }
        }
    }
    if sep.k != sep.iterated.k() {
        report
            .violations
            .push(format!("declared k={} but found {} layers", sep.k, sep.iterated.k()));
    }

    let actual = separator_components(g, &seen);
    if actual.len() != sep.components.len() {
        report.violations.push(format!(
            "separator records {} components but the graph has {}",
            sep.components.len(),
            actual.len()
        ));
    } else {
        for (i, (got, stored)) in actual.iter().zip(&sep.components).enumerate() {
            if got.vertices != stored.vertices || got.neighborhood != stored.neighborhood {
                report
                    .violations
                    .push(format!("recorded component {} does not match the graph", i + 1));
            }
        }
    }
    for (i, d) in actual.iter().enumerate() {
        if d.neighborhood.len() > sep.d {
            report.violations.push(format!(
                "component {} has neighborhood size {} > d={}",
                i + 1,
                d.neighborhood.len(),
                sep.d
            ));
        }
        if !w.set_weight_le(&d.vertices, &sep.c) {
            report.violations.push(format!(
                "component {} has weight {} > c={}",
                i + 1,
                ratio_string(&BigRational::new(w.set_numer(&d.vertices), w.denom().clone())),
                ratio_string(&sep.c)
            ));
        }
    }

    if full_evenness {
        for (i, layer) in sep.iterated.layers.iter().enumerate() {
            if layer.len() < 2 {
                continue;
            }
            let alive = sep.iterated.pre(n, i).complement();
            if alive.len() > EVENNESS_VERTEX_CAP {
                report.truncated = true;
                continue;
            }
            let (h, _) = g.induced(&alive);
            let mut to_h = vec![usize::MAX; n];
            for (hi, v) in alive.iter().enumerate() {
                to_h[v] = hi;
            }
            let members = layer.to_vec();
            'pairs: for (ai, &a) in members.iter().enumerate() {
                for &b in &members[ai + 1..] {
                    match recognition::is_even_pair(&h, to_h[a], to_h[b]) {
                        Ok(true) => {}
                        Ok(false) => {
                            report.violations.push(format!(
                                "layer {} pair ({a}, {b}) joined by an odd induced path \
                                 in the residual graph",
                                i + 1
                            ));
                        }
                        Err(_) => {
                            report.truncated = true;
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }
    report
}
