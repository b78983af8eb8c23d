//! Central bags with anchor-transferred weights, and the star-free,
//! intermediate, and core bags they stack into.
//!
//! Consuming a sequence of separations deletes the union of their A-parts;
//! the weight of each deleted vertex is re-deposited on the anchor of the
//! first separation that deleted it, so the total weight is conserved
//! exactly. Applying this twice, once for each side of the bipartite star
//! covering, yields the intermediate bag and the star-free bag; the core bag
//! adds back the cuts of the second side. Every construction audits the
//! hypotheses it relies on and fails loudly with a witness instead of
//! producing a silently broken decomposition.

use crate::graph::Graph;
use crate::stars::{PipelineError, StarSeparation};
use crate::vset::VertexSet;
use crate::weights::Weights;
use num::BigRational;
use std::collections::BTreeMap;

/// The result of consuming a separation sequence: the surviving vertices,
/// the transferred weight function, and a log of what each anchor absorbed.
#[derive(Debug, Clone)]
pub struct CentralBag {
    pub vertices: VertexSet,
    pub weights: Weights,
    pub anchor_log: BTreeMap<usize, BigRational>,
    pub sources: Vec<StarSeparation>,
}

/// Delete the A-parts of the sequence from `ambient` and transfer deleted
/// weight onto the anchors, in sequence order.
///
/// The separations must partition `ambient`, be pairwise loosely
/// non-crossing, and carry distinct anchors; each anchor must survive into
/// the bag. When the induced graph on `ambient` is connected the bag must
/// come out connected as well. Violations are returned as errors.
pub fn central_bag(
    g: &Graph,
    w: &Weights,
    ambient: &VertexSet,
    seq: &[StarSeparation],
) -> Result<CentralBag, PipelineError> {
    let n = g.n();
    let mut seen_anchor = VertexSet::new(n);
    for s in seq {
        if seen_anchor.contains(s.anchor()) {
            return Err(PipelineError::DuplicateAnchor { anchor: s.anchor() });
        }
        seen_anchor.insert(s.anchor());
    }
    crate::stars::audit_loose_laminarity(seq)?;

    let mut bag = ambient.clone();
    for s in seq {
        bag.difference_with(&s.sep.a);
    }
    // Absorbed weight per anchor: each deleted vertex is charged to the
    // first separation whose A-part contains it.
    let mut deleted = VertexSet::new(n);
    let mut weights = w.restricted_to(&bag);
    let mut anchor_log = BTreeMap::new();
    for s in seq {
        let fresh = s.sep.a.difference(&deleted);
        deleted.union_with(&s.sep.a);
        if !bag.contains(s.anchor()) {
            return Err(PipelineError::AnchorOutsideBag { anchor: s.anchor() });
        }
        let absorbed = w.set_numer(&fresh);
        weights.add_numer(s.anchor(), &absorbed);
        anchor_log.insert(
            s.anchor(),
            BigRational::new(absorbed, w.denom().clone()),
        );
    }
    assert_eq!(
        weights.total(),
        w.total(),
        "weight transfer conserves the total exactly"
    );
    if g.components(ambient).len() <= 1 && g.components(&bag).len() > 1 {
        return Err(PipelineError::BagDisconnected);
    }
    Ok(CentralBag {
        vertices: bag,
        weights,
        anchor_log,
        sources: seq.to_vec(),
    })
}

/// The nested decomposition stages: the intermediate bag gamma, the
/// star-free bag beta with its bipartition, and the core bag.
#[derive(Debug, Clone)]
pub struct BagTower {
    pub beta: VertexSet,
    pub gamma: VertexSet,
    pub core: VertexSet,
    pub x1: VertexSet,
    pub x2: VertexSet,
    pub weights_beta: Weights,
    pub weights_gamma: Weights,
}

fn centers(seq: &[StarSeparation], n: usize) -> VertexSet {
    VertexSet::from_vertices(n, seq.iter().map(|s| s.center))
}

/// Build the two-stage tower: gamma is the central bag for the second
/// covering sequence, beta is the central bag inside gamma for the first
/// sequence restricted to gamma. Audits that beta equals the star covering
/// and that the given sides two-color it, then attaches the core bag.
pub fn star_free_bag(
    g: &Graph,
    w: &Weights,
    x1_seq: &[StarSeparation],
    x2_seq: &[StarSeparation],
) -> Result<BagTower, PipelineError> {
    let n = g.n();
    let x1 = centers(x1_seq, n);
    let x2 = centers(x2_seq, n);

    let gamma_bag = central_bag(g, w, &VertexSet::full(n), x2_seq)?;
    let gamma = gamma_bag.vertices.clone();

    let restricted: Vec<StarSeparation> = x1_seq
        .iter()
        .map(|s| StarSeparation {
            sep: s.sep.restricted_to(&gamma),
            center: s.center,
        })
        .collect();
    let beta_bag = central_bag(g, &gamma_bag.weights, &gamma, &restricted)?;
    let beta = beta_bag.vertices.clone();
    debug_assert!(beta.is_subset_of(&gamma));

    let covering = x1.union(&x2);
    if !(x1_seq.is_empty() && x2_seq.is_empty()) && beta != covering {
        return Err(PipelineError::BagMismatch {
            expected: covering.to_vec(),
            got: beta.to_vec(),
        });
    }
    for u in beta.iter() {
        for &v in g.neighbors(u) {
            let v = v as usize;
            if v <= u || !beta.contains(v) {
                continue;
            }
            let same_side =
                (x1.contains(u) && x1.contains(v)) || (x2.contains(u) && x2.contains(v));
            if same_side {
                match g.bipartition(&beta) {
                    Err(odd_cycle) => return Err(PipelineError::NotBipartite { odd_cycle }),
                    Ok(_) => panic!("covering sides do not two-color the star-free bag"),
                }
            }
        }
    }

    let core = core_bag(g, &beta, x1_seq, x2_seq)?;
    Ok(BagTower {
        beta,
        gamma,
        core,
        x1,
        x2,
        weights_beta: beta_bag.weights,
        weights_gamma: gamma_bag.weights,
    })
}

/// The core bag: beta plus the cuts of the second-side separations. Audits
/// that every component left over lies inside a single A-part whose center
/// is in beta, and that its neighborhood has at most max-degree-plus-one
/// vertices.
pub fn core_bag(
    g: &Graph,
    beta: &VertexSet,
    x1_seq: &[StarSeparation],
    x2_seq: &[StarSeparation],
) -> Result<VertexSet, PipelineError> {
    let mut core = beta.clone();
    for s in x2_seq {
        core.union_with(&s.sep.c);
    }
    let outside = core.complement();
    let by_center: BTreeMap<usize, &StarSeparation> = x1_seq
        .iter()
        .chain(x2_seq.iter())
        .map(|s| (s.center, s))
        .collect();
    for comp in g.components(&outside) {
        let hood = g.neighborhood(&comp);
        let contained = beta.iter().any(|x| {
            by_center
                .get(&x)
                .is_some_and(|s| comp.is_subset_of(&s.sep.a))
        });
        if !contained || hood.len() > g.max_degree() + 1 {
            return Err(PipelineError::CoreAudit {
                component: comp.to_vec(),
            });
        }
    }
    Ok(core)
}
