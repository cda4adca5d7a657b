//! Graph-theoretic concepts expressed as proposition checks.
//!
//! Each verifier states the concept as a list of categorical propositions,
//! evaluates them through [`crate::propositions`], and reports the verdict
//! together with every proposition checked. The pair form works on a
//! [`PairDataset`] (a triplet dataset whose C universe is a singleton and
//! whose A and B universes are one vertex set); the triplet form generalizes
//! the same statements to full selections.

use std::collections::BTreeMap;

use crate::dataset::{
    density_y, induced_count, DatasetError, DensityOptions, Dim, ElemSet, Selection,
    TripletDataset,
};
use crate::propositions::{
    evaluate_quantified, PredicateExpr, Proposition, PropositionError, Quantifier,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConceptError {
    #[error("invalid cut: the {dim} subset must be a proper non-empty subset of its universe")]
    InvalidCut { dim: Dim },
    #[error("the {dim} subset is empty")]
    EmptySubset { dim: Dim },
    #[error("invalid partitioning: {reason}")]
    InvalidPartition { reason: String },
    #[error("partitionings must have the same number of parts on every dimension")]
    PartitionCountMismatch,
    #[error("not a pair dataset: {reason}")]
    NotPairForm { reason: String },
    #[error(transparent)]
    Proposition(#[from] PropositionError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// A proposition together with its verdict.
#[derive(Debug, Clone)]
pub struct CheckedProposition {
    pub proposition: Proposition,
    pub holds: bool,
}

/// Verdict of a concept verifier plus the propositions it rests on.
#[derive(Debug, Clone)]
pub struct ConceptReport {
    pub holds: bool,
    pub checked: Vec<CheckedProposition>,
}

impl ConceptReport {
    fn from_props(d: &TripletDataset, props: Vec<Proposition>) -> Result<ConceptReport, ConceptError> {
        let mut checked = Vec::with_capacity(props.len());
        let mut holds = true;
        for proposition in props {
            let h = evaluate_quantified(d, &proposition)?;
            holds &= h;
            checked.push(CheckedProposition { proposition, holds: h });
        }
        Ok(ConceptReport { holds, checked })
    }
}

/// A graph stored as a triplet dataset: A and B are one vertex set, C is a
/// singleton dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDataset {
    data: TripletDataset,
    symmetric: bool,
    loopless: bool,
}

impl PairDataset {
    /// Builds a graph over `n` vertices from an edge list. With `symmetric`,
    /// each edge is stored in both orientations; with `loopless`, self-loops
    /// are dropped.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
        symmetric: bool,
        loopless: bool,
    ) -> Result<PairDataset, ConceptError> {
        let mut triplets = Vec::new();
        for (u, v) in edges {
            if loopless && u == v {
                continue;
            }
            triplets.push([u, v, 0]);
            if symmetric {
                triplets.push([v, u, 0]);
            }
        }
        let data = TripletDataset::from_triplets([n, n, 1], triplets)?;
        Ok(PairDataset { data, symmetric, loopless })
    }

    /// Wraps an existing dataset, validating the pair-form invariants.
    pub fn from_dataset(
        data: TripletDataset,
        symmetric: bool,
        loopless: bool,
    ) -> Result<PairDataset, ConceptError> {
        if data.universe_len(Dim::C) != 1 {
            return Err(ConceptError::NotPairForm {
                reason: format!("C universe has {} elements, expected 1", data.universe_len(Dim::C)),
            });
        }
        if !data.shared_ab_universe() {
            return Err(ConceptError::NotPairForm {
                reason: "A and B universes differ".to_string(),
            });
        }
        for t in data.triplets() {
            if loopless && t[0] == t[1] {
                return Err(ConceptError::NotPairForm {
                    reason: format!("loopless graph contains self-loop ({}, {})", t[0], t[1]),
                });
            }
            if symmetric && !data.triplets().binary_search(&[t[1], t[0], 0]).is_ok() {
                return Err(ConceptError::NotPairForm {
                    reason: format!("symmetric graph is missing the reverse of ({}, {})", t[0], t[1]),
                });
            }
        }
        Ok(PairDataset { data, symmetric, loopless })
    }

    pub fn data(&self) -> &TripletDataset {
        &self.data
    }

    pub fn vertex_count(&self) -> usize {
        self.data.universe_len(Dim::A)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_loopless(&self) -> bool {
        self.loopless
    }

    pub fn density_options(&self) -> DensityOptions {
        DensityOptions { loopless: self.loopless }
    }

    fn vertex_set(&self) -> ElemSet {
        self.data.full_set(Dim::A)
    }

    fn complement(&self, set: &ElemSet) -> ElemSet {
        (0..self.vertex_count() as u32).filter(|v| !set.contains(v)).collect()
    }

    /// Undirected adjacency built from the stored pairs.
    fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for t in self.data.triplets() {
            adj[t[0] as usize].push(t[1]);
            adj[t[1] as usize].push(t[0]);
        }
        adj
    }
}

fn require_proper(alpha: &ElemSet, size: usize, dim: Dim) -> Result<(), ConceptError> {
    if alpha.is_empty() || alpha.len() >= size {
        return Err(ConceptError::InvalidCut { dim });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Disconnection
// ---------------------------------------------------------------------------

/// `No alpha are alpha^c`: no stored pair leaves `alpha`.
pub fn graph_is_disconnected(g: &PairDataset, alpha: &ElemSet) -> Result<ConceptReport, ConceptError> {
    require_proper(alpha, g.vertex_count(), Dim::A)?;
    let props = vec![Proposition::quantified(
        Quantifier::No,
        Dim::A,
        alpha.clone(),
        PredicateExpr::atom_complement(Dim::B, alpha.clone()),
    )];
    ConceptReport::from_props(g.data(), props)
}

/// The six `No ...` statements asserting that the dataset splits into the
/// block of the selection and the block of its complements.
pub fn triplet_is_disconnected(
    d: &TripletDataset,
    s: &Selection,
) -> Result<ConceptReport, ConceptError> {
    for dim in Dim::ALL {
        require_proper(s.set(dim), d.universe_len(dim), dim)?;
    }
    let comp = s.complemented(d);
    let atom = |dim: Dim, set: &ElemSet| PredicateExpr::atom(dim, set.clone());
    let atom_c = |dim: Dim, set: &ElemSet| PredicateExpr::atom_complement(dim, set.clone());

    let props = vec![
        // Inside subjects stay inside on the other two dimensions...
        Proposition::quantified(
            Quantifier::No,
            Dim::A,
            s.alpha.clone(),
            atom_c(Dim::B, &s.beta).or(atom_c(Dim::C, &s.gamma)),
        ),
        Proposition::quantified(
            Quantifier::No,
            Dim::B,
            s.beta.clone(),
            atom_c(Dim::A, &s.alpha).or(atom_c(Dim::C, &s.gamma)),
        ),
        Proposition::quantified(
            Quantifier::No,
            Dim::C,
            s.gamma.clone(),
            atom_c(Dim::A, &s.alpha).or(atom_c(Dim::B, &s.beta)),
        ),
        // ...and outside subjects never touch the selection.
        Proposition::quantified(
            Quantifier::No,
            Dim::A,
            comp.alpha.clone(),
            atom(Dim::B, &s.beta).or(atom(Dim::C, &s.gamma)),
        ),
        Proposition::quantified(
            Quantifier::No,
            Dim::B,
            comp.beta.clone(),
            atom(Dim::A, &s.alpha).or(atom(Dim::C, &s.gamma)),
        ),
        Proposition::quantified(
            Quantifier::No,
            Dim::C,
            comp.gamma.clone(),
            atom(Dim::A, &s.alpha).or(atom(Dim::B, &s.beta)),
        ),
    ];
    ConceptReport::from_props(d, props)
}

/// Connected components of the undirected graph; returns one side of a split
/// when the graph is disconnected.
pub fn graph_find_disconnection(g: &PairDataset) -> Option<ElemSet> {
    let n = g.vertex_count();
    if n < 2 {
        return None;
    }
    let adj = g.adjacency();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0usize;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w as usize] == usize::MAX {
                    comp[w as usize] = count;
                    stack.push(w as usize);
                }
            }
        }
        count += 1;
    }
    if count < 2 {
        return None;
    }
    Some((0..n as u32).filter(|&v| comp[v as usize] == 0).collect())
}

/// Searches for a selection splitting the dataset into two element-disjoint
/// blocks. Connectivity is taken over the incidence structure linking every
/// triplet to its three elements; elements appearing in no triplet may land
/// on either side.
pub fn find_disconnection(d: &TripletDataset) -> Option<Selection> {
    let sizes = d.universe_sizes();
    if d.is_empty() {
        // Vacuous split: any proper non-empty selection works.
        if sizes.iter().all(|&n| n >= 2) {
            return Some(Selection::new(
                [0].into_iter().collect(),
                [0].into_iter().collect(),
                [0].into_iter().collect(),
            ));
        }
        return None;
    }

    // Union-find over elements of the three dimensions.
    let offset = [0, sizes[0], sizes[0] + sizes[1]];
    let total = sizes.iter().sum::<usize>();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    let mut used = vec![false; total];
    for t in d.triplets() {
        let nodes = [
            offset[0] + t[0] as usize,
            offset[1] + t[1] as usize,
            offset[2] + t[2] as usize,
        ];
        used[nodes[0]] = true;
        used[nodes[1]] = true;
        used[nodes[2]] = true;
        union(&mut parent, nodes[0], nodes[1]);
        union(&mut parent, nodes[0], nodes[2]);
    }

    let first_root = {
        let t = d.triplets()[0];
        find(&mut parent, offset[0] + t[0] as usize)
    };
    let mut multiple_components = false;
    for t in d.triplets() {
        if find(&mut parent, offset[0] + t[0] as usize) != first_root {
            multiple_components = true;
            break;
        }
    }

    if multiple_components {
        // One side = the component of the first triplet; unused elements fall
        // on the complement side.
        let mut sel = Selection::new(ElemSet::new(), ElemSet::new(), ElemSet::new());
        for dim in Dim::ALL {
            let set = sel.set_mut(dim);
            for e in 0..sizes[dim.index()] {
                let node = offset[dim.index()] + e;
                if used[node] && find(&mut parent, node) == first_root {
                    set.insert(e as u32);
                }
            }
        }
        return Some(sel);
    }

    // One component: a split exists iff every dimension has an unused
    // element to donate to the complement side.
    let mut sel = Selection::new(ElemSet::new(), ElemSet::new(), ElemSet::new());
    for dim in Dim::ALL {
        let set = sel.set_mut(dim);
        for e in 0..sizes[dim.index()] {
            if used[offset[dim.index()] + e] {
                set.insert(e as u32);
            }
        }
        if set.len() == sizes[dim.index()] {
            return None;
        }
        if set.is_empty() {
            return None;
        }
    }
    Some(sel)
}

// ---------------------------------------------------------------------------
// Vertex cover
// ---------------------------------------------------------------------------

/// `No alpha^c are alpha^c`: every stored pair has an endpoint in `alpha`.
pub fn graph_is_vertex_cover(g: &PairDataset, alpha: &ElemSet) -> Result<ConceptReport, ConceptError> {
    let comp = g.complement(alpha);
    let props = vec![Proposition::quantified(
        Quantifier::No,
        Dim::A,
        comp,
        PredicateExpr::atom_complement(Dim::B, alpha.clone()),
    )];
    ConceptReport::from_props(g.data(), props)
}

/// Which reading of the cover statements to use for triplet data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoverVariant {
    /// `No beta^c are alpha^c and gamma^c` on the B side, matching the other
    /// two statements.
    #[default]
    Symmetric,
    /// The literal published B-side statement `No beta^c are alpha^c and
    /// beta^c`; the subject-dimension atom is implied by the subject and the
    /// statement collapses to `No beta^c are alpha^c`.
    Literal,
}

/// Every triplet touches the selection on at least one dimension.
pub fn triplet_is_vertex_cover(
    d: &TripletDataset,
    s: &Selection,
) -> Result<ConceptReport, ConceptError> {
    triplet_is_vertex_cover_with(d, s, CoverVariant::Symmetric)
}

pub fn triplet_is_vertex_cover_with(
    d: &TripletDataset,
    s: &Selection,
    variant: CoverVariant,
) -> Result<ConceptReport, ConceptError> {
    let comp = s.complemented(d);
    let atom_c = |dim: Dim, set: &ElemSet| PredicateExpr::atom_complement(dim, set.clone());
    let b_side = match variant {
        CoverVariant::Symmetric => Proposition::quantified(
            Quantifier::No,
            Dim::B,
            comp.beta.clone(),
            atom_c(Dim::A, &s.alpha).and(atom_c(Dim::C, &s.gamma)),
        ),
        CoverVariant::Literal => Proposition::quantified(
            Quantifier::No,
            Dim::B,
            comp.beta.clone(),
            atom_c(Dim::A, &s.alpha),
        ),
    };
    let props = vec![
        Proposition::quantified(
            Quantifier::No,
            Dim::A,
            comp.alpha.clone(),
            atom_c(Dim::B, &s.beta).and(atom_c(Dim::C, &s.gamma)),
        ),
        b_side,
        Proposition::quantified(
            Quantifier::No,
            Dim::C,
            comp.gamma.clone(),
            atom_c(Dim::A, &s.alpha).and(atom_c(Dim::B, &s.beta)),
        ),
    ];
    ConceptReport::from_props(d, props)
}

// ---------------------------------------------------------------------------
// Dominating set
// ---------------------------------------------------------------------------

/// `Some a_i are alpha` for every vertex outside `alpha`.
pub fn graph_is_dominating_set(
    g: &PairDataset,
    alpha: &ElemSet,
) -> Result<ConceptReport, ConceptError> {
    let props = g
        .complement(alpha)
        .into_iter()
        .map(|v| {
            Proposition::quantified(
                Quantifier::Some,
                Dim::A,
                [v].into_iter().collect(),
                PredicateExpr::atom(Dim::B, alpha.clone()),
            )
        })
        .collect();
    ConceptReport::from_props(g.data(), props)
}

/// Every element outside the selection appears in a triplet meeting the
/// other two sides: `Some a_i are beta or gamma` plus the two symmetric
/// families.
pub fn triplet_is_dominating_set(
    d: &TripletDataset,
    s: &Selection,
) -> Result<ConceptReport, ConceptError> {
    let comp = s.complemented(d);
    let atom = |dim: Dim, set: &ElemSet| PredicateExpr::atom(dim, set.clone());
    let mut props = Vec::new();
    for a in &comp.alpha {
        props.push(Proposition::quantified(
            Quantifier::Some,
            Dim::A,
            [*a].into_iter().collect(),
            atom(Dim::B, &s.beta).or(atom(Dim::C, &s.gamma)),
        ));
    }
    for b in &comp.beta {
        props.push(Proposition::quantified(
            Quantifier::Some,
            Dim::B,
            [*b].into_iter().collect(),
            atom(Dim::A, &s.alpha).or(atom(Dim::C, &s.gamma)),
        ));
    }
    for c in &comp.gamma {
        props.push(Proposition::quantified(
            Quantifier::Some,
            Dim::C,
            [*c].into_iter().collect(),
            atom(Dim::A, &s.alpha).or(atom(Dim::B, &s.beta)),
        ));
    }
    ConceptReport::from_props(d, props)
}

// ---------------------------------------------------------------------------
// Separating set
// ---------------------------------------------------------------------------

/// Outcome of a separating-set check on a graph.
#[derive(Debug, Clone)]
pub struct GraphSeparationReport {
    pub holds: bool,
    /// The graph was already disconnected before removing anything.
    pub was_disconnected_before: bool,
    /// One side of the split of the remainder, in original vertex indices.
    pub cut: Option<ElemSet>,
}

/// Removes `alpha` and checks whether the remaining induced graph is
/// disconnected. An empty remainder does not count as separated.
pub fn graph_is_separating_set(
    g: &PairDataset,
    alpha: &ElemSet,
) -> Result<GraphSeparationReport, ConceptError> {
    require_subset(alpha, g.vertex_count(), Dim::A)?;
    let was_disconnected_before = graph_find_disconnection(g).is_some();
    let keep: Vec<u32> = (0..g.vertex_count() as u32).filter(|v| !alpha.contains(v)).collect();
    if keep.len() < 2 {
        return Ok(GraphSeparationReport { holds: false, was_disconnected_before, cut: None });
    }
    let pos: BTreeMap<u32, u32> = keep.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let edges: Vec<(u32, u32)> = g
        .data()
        .triplets()
        .iter()
        .filter(|t| pos.contains_key(&t[0]) && pos.contains_key(&t[1]))
        .map(|t| (pos[&t[0]], pos[&t[1]]))
        .collect();
    let remainder = PairDataset::from_edges(keep.len(), edges, false, false)?;
    let cut = graph_find_disconnection(&remainder)
        .map(|side| side.into_iter().map(|v| keep[v as usize]).collect());
    Ok(GraphSeparationReport { holds: cut.is_some(), was_disconnected_before, cut })
}

/// Outcome of a separating-set check on triplet data.
#[derive(Debug, Clone)]
pub struct TripletSeparationReport {
    pub holds: bool,
    pub was_disconnected_before: bool,
    /// A disconnecting selection of the remainder, in original indices.
    pub cut: Option<Selection>,
}

/// Removes the selection on all three dimensions and checks whether
/// `D_(alpha^c, beta^c, gamma^c)` is disconnected.
pub fn triplet_is_separating_set(
    d: &TripletDataset,
    s: &Selection,
) -> Result<TripletSeparationReport, ConceptError> {
    let was_disconnected_before = find_disconnection(d).is_some();
    let comp = s.complemented(d);
    let remainder = crate::dataset::induced_subdataset(d, &comp)?;
    let cut = find_disconnection(&remainder).map(|sel| {
        // Map remainder indices back to the original universes.
        let back = |dim: Dim, set: &ElemSet| -> ElemSet {
            let kept: Vec<u32> = comp.set(dim).iter().copied().collect();
            set.iter().map(|&e| kept[e as usize]).collect()
        };
        Selection::new(
            back(Dim::A, &sel.alpha),
            back(Dim::B, &sel.beta),
            back(Dim::C, &sel.gamma),
        )
    });
    Ok(TripletSeparationReport { holds: cut.is_some(), was_disconnected_before, cut })
}

fn require_subset(set: &ElemSet, size: usize, dim: Dim) -> Result<(), ConceptError> {
    if let Some(&max) = set.iter().next_back() {
        if max as usize >= size {
            return Err(ConceptError::Dataset(DatasetError::InvalidSelection {
                dim,
                element: max,
                size,
            }));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// k-coloring
// ---------------------------------------------------------------------------

/// A disjoint, exhaustive list of parts of one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    pub parts: Vec<ElemSet>,
}

impl Partitioning {
    pub fn new(parts: Vec<ElemSet>) -> Partitioning {
        Partitioning { parts }
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn validate(&self, universe_size: usize) -> Result<(), ConceptError> {
        if self.parts.is_empty() {
            return Err(ConceptError::InvalidPartition {
                reason: "a partitioning needs at least one part".to_string(),
            });
        }
        let mut seen = vec![false; universe_size];
        for part in &self.parts {
            for &e in part {
                if e as usize >= universe_size {
                    return Err(ConceptError::InvalidPartition {
                        reason: format!("element {e} is outside the universe of size {universe_size}"),
                    });
                }
                if seen[e as usize] {
                    return Err(ConceptError::InvalidPartition {
                        reason: format!("element {e} appears in two parts"),
                    });
                }
                seen[e as usize] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(ConceptError::InvalidPartition {
                reason: format!("element {missing} is not covered by any part"),
            });
        }
        Ok(())
    }
}

/// `No alpha_i are alpha_i` for every part: no stored pair inside a color
/// class.
pub fn graph_is_k_coloring(
    g: &PairDataset,
    parts: &Partitioning,
) -> Result<ConceptReport, ConceptError> {
    parts.validate(g.vertex_count())?;
    let props = parts
        .parts
        .iter()
        .map(|part| {
            Proposition::quantified(
                Quantifier::No,
                Dim::A,
                part.clone(),
                PredicateExpr::atom(Dim::B, part.clone()),
            )
        })
        .collect();
    ConceptReport::from_props(g.data(), props)
}

/// Aligned partitionings of the three universes; part `i` of each dimension
/// forms color class `i`.
pub fn triplet_is_k_coloring(
    d: &TripletDataset,
    parts: [&Partitioning; 3],
) -> Result<ConceptReport, ConceptError> {
    for dim in Dim::ALL {
        parts[dim.index()].validate(d.universe_len(dim))?;
    }
    let k = parts[0].k();
    if parts.iter().any(|p| p.k() != k) {
        return Err(ConceptError::PartitionCountMismatch);
    }
    let atom = |dim: Dim, set: &ElemSet| PredicateExpr::atom(dim, set.clone());
    let mut props = Vec::with_capacity(3 * k);
    for i in 0..k {
        let (a, b, c) = (&parts[0].parts[i], &parts[1].parts[i], &parts[2].parts[i]);
        props.push(Proposition::quantified(
            Quantifier::No,
            Dim::A,
            a.clone(),
            atom(Dim::B, b).and(atom(Dim::C, c)),
        ));
        props.push(Proposition::quantified(
            Quantifier::No,
            Dim::B,
            b.clone(),
            atom(Dim::A, a).and(atom(Dim::C, c)),
        ));
        props.push(Proposition::quantified(
            Quantifier::No,
            Dim::C,
            c.clone(),
            atom(Dim::A, a).and(atom(Dim::B, b)),
        ));
    }
    ConceptReport::from_props(d, props)
}

// ---------------------------------------------------------------------------
// Clique and cluster
// ---------------------------------------------------------------------------

/// Verdict plus the witnessing thresholded proposition of a density-based
/// concept.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub holds: bool,
    pub proposition: Proposition,
    pub density: Option<f64>,
}

/// `Some alpha are 100% alpha`: the block `alpha x alpha` is completely
/// filled. A block with no cells (a single vertex under loopless density)
/// counts as complete.
pub fn graph_is_clique(g: &PairDataset, alpha: &ElemSet) -> Result<DensityReport, ConceptError> {
    if alpha.is_empty() {
        return Err(ConceptError::EmptySubset { dim: Dim::A });
    }
    let sel = Selection::new(alpha.clone(), alpha.clone(), g.data().full_set(Dim::C));
    block_complete(g.data(), &sel, g.density_options())
}

/// `Some alpha are 100% beta and gamma`: the selected block is completely
/// filled.
pub fn triplet_is_clique(
    d: &TripletDataset,
    s: &Selection,
    opts: DensityOptions,
) -> Result<DensityReport, ConceptError> {
    for dim in Dim::ALL {
        if s.set(dim).is_empty() {
            return Err(ConceptError::EmptySubset { dim });
        }
    }
    block_complete(d, s, opts)
}

fn block_complete(
    d: &TripletDataset,
    sel: &Selection,
    opts: DensityOptions,
) -> Result<DensityReport, ConceptError> {
    let [d1, d2] = Dim::A.others();
    let proposition = Proposition::thresholded(
        Dim::A,
        sel.alpha.clone(),
        PredicateExpr::atom(d1, sel.set(d1).clone()).and(PredicateExpr::atom(d2, sel.set(d2).clone())),
        0.0,
        1.0,
    );
    match density_y(d, sel, opts) {
        Ok(y) => Ok(DensityReport { holds: y == 1.0, proposition, density: Some(y) }),
        Err(DatasetError::UndefinedDensity) => {
            // No cells to fill.
            Ok(DensityReport { holds: true, proposition, density: None })
        }
        Err(e) => Err(e.into()),
    }
}

/// Verdict plus the coverage statements of a cluster check.
#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub holds: bool,
    pub coverages: Vec<(Dim, f64)>,
    pub propositions: Vec<Proposition>,
}

/// `Large x% alpha are alpha`: at least `x_threshold` of the pairs touching
/// `alpha` stay inside it.
pub fn graph_is_cluster(
    g: &PairDataset,
    alpha: &ElemSet,
    x_threshold: f64,
) -> Result<ClusterReport, ConceptError> {
    if alpha.is_empty() {
        return Err(ConceptError::EmptySubset { dim: Dim::A });
    }
    let sel = Selection::new(alpha.clone(), alpha.clone(), g.data().full_set(Dim::C));
    cluster_check(g.data(), &sel, x_threshold, &[Dim::A])
}

/// The three `Large x%` statements of the triplet extension: the selection
/// must capture at least `x_threshold` of each side's activity.
pub fn triplet_is_cluster(
    d: &TripletDataset,
    s: &Selection,
    x_threshold: f64,
) -> Result<ClusterReport, ConceptError> {
    for dim in Dim::ALL {
        if s.set(dim).is_empty() {
            return Err(ConceptError::EmptySubset { dim });
        }
    }
    cluster_check(d, s, x_threshold, &Dim::ALL)
}

fn cluster_check(
    d: &TripletDataset,
    sel: &Selection,
    x_threshold: f64,
    subjects: &[Dim],
) -> Result<ClusterReport, ConceptError> {
    let mut coverages = Vec::new();
    let mut propositions = Vec::new();
    let mut holds = true;
    for &subject in subjects {
        let x = crate::dataset::coverage_x(d, sel, subject)?;
        holds &= x >= x_threshold;
        coverages.push((subject, x));
        let [d1, d2] = subject.others();
        propositions.push(Proposition::thresholded(
            subject,
            sel.set(subject).clone(),
            PredicateExpr::atom(d1, sel.set(d1).clone())
                .and(PredicateExpr::atom(d2, sel.set(d2).clone())),
            x_threshold,
            0.0,
        ));
    }
    Ok(ClusterReport { holds, coverages, propositions })
}

/// Number of stored pairs inside `alpha x alpha`, for tests and reporting.
pub fn internal_pair_count(g: &PairDataset, alpha: &ElemSet) -> usize {
    let sel = Selection::new(alpha.clone(), alpha.clone(), g.data().full_set(Dim::C));
    induced_count(g.data(), &sel).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> ElemSet {
        v.iter().copied().collect()
    }

    /// Two complete triangles on {0,1,2} and {3,4,5}.
    fn two_cliques() -> PairDataset {
        PairDataset::from_edges(
            6,
            [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)],
            true,
            true,
        )
        .unwrap()
    }

    fn k4() -> PairDataset {
        PairDataset::from_edges(
            4,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            true,
            true,
        )
        .unwrap()
    }

    #[test]
    fn two_clique_graph_is_disconnected() {
        let g = two_cliques();
        let report = graph_is_disconnected(&g, &set(&[0, 1, 2])).unwrap();
        assert!(report.holds);
        assert_eq!(report.checked.len(), 1);
    }

    #[test]
    fn complete_graph_is_connected() {
        let g = k4();
        for v in 0..4u32 {
            let alpha: ElemSet = (0..4).filter(|&u| u != v).collect();
            assert!(!graph_is_disconnected(&g, &alpha).unwrap().holds);
        }
        assert!(!graph_is_disconnected(&g, &set(&[0])).unwrap().holds);
    }

    #[test]
    fn disconnection_requires_proper_cut() {
        let g = k4();
        assert!(matches!(
            graph_is_disconnected(&g, &set(&[])),
            Err(ConceptError::InvalidCut { dim: Dim::A })
        ));
        assert!(matches!(
            graph_is_disconnected(&g, &set(&[0, 1, 2, 3])),
            Err(ConceptError::InvalidCut { dim: Dim::A })
        ));
    }

    /// Union of two full blocks on disjoint element sets.
    fn two_block_dataset() -> (TripletDataset, Selection) {
        let mut triplets = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    triplets.push([a, b, c]);
                }
            }
        }
        for a in 2..4 {
            for b in 2..4 {
                for c in 2..4 {
                    triplets.push([a, b, c]);
                }
            }
        }
        let d = TripletDataset::from_triplets([4, 4, 4], triplets).unwrap();
        let s = Selection::new(set(&[0, 1]), set(&[0, 1]), set(&[0, 1]));
        (d, s)
    }

    #[test]
    fn two_block_triplet_dataset_is_disconnected() {
        let (d, s) = two_block_dataset();
        let report = triplet_is_disconnected(&d, &s).unwrap();
        assert!(report.holds);
        assert_eq!(report.checked.len(), 6);
        assert!(report.checked.iter().all(|c| c.holds));
    }

    #[test]
    fn find_disconnection_recovers_block_split() {
        let (d, s) = two_block_dataset();
        let found = find_disconnection(&d).unwrap();
        assert!(triplet_is_disconnected(&d, &found).unwrap().holds);
        assert_eq!(found, s);
    }

    #[test]
    fn find_disconnection_single_triplet_is_none() {
        let d = TripletDataset::from_triplets([1, 1, 1], [[0, 0, 0]]).unwrap();
        assert!(find_disconnection(&d).is_none());
    }

    #[test]
    fn find_disconnection_on_two_clique_graph() {
        let g = two_cliques();
        let side = graph_find_disconnection(&g).unwrap();
        assert!(graph_is_disconnected(&g, &side).unwrap().holds);
        assert_eq!(side, set(&[0, 1, 2]));
    }

    #[test]
    fn find_disconnection_none_when_connected() {
        assert!(graph_find_disconnection(&k4()).is_none());
        let (d, _) = two_block_dataset();
        // Bridge the two blocks.
        let mut triplets: Vec<_> = d.triplets().to_vec();
        triplets.push([0, 2, 3]);
        let bridged = TripletDataset::from_triplets([4, 4, 4], triplets).unwrap();
        assert!(find_disconnection(&bridged).is_none());
    }

    #[test]
    fn full_vertex_set_is_a_cover() {
        let g = k4();
        assert!(graph_is_vertex_cover(&g, &set(&[0, 1, 2, 3])).unwrap().holds);
    }

    #[test]
    fn star_center_is_a_cover() {
        let g = PairDataset::from_edges(4, [(0, 1), (0, 2), (0, 3)], true, true).unwrap();
        assert!(graph_is_vertex_cover(&g, &set(&[0])).unwrap().holds);
    }

    #[test]
    fn single_vertex_does_not_cover_a_triangle() {
        let g = PairDataset::from_edges(3, [(0, 1), (0, 2), (1, 2)], true, true).unwrap();
        assert!(!graph_is_vertex_cover(&g, &set(&[0])).unwrap().holds);
    }

    #[test]
    fn triplet_cover_requires_touching_every_triplet() {
        let d = TripletDataset::from_triplets([2, 2, 2], [[0, 0, 0], [1, 1, 1]]).unwrap();
        let covering = Selection::new(set(&[0, 1]), set(&[]), set(&[]));
        assert!(triplet_is_vertex_cover(&d, &covering).unwrap().holds);
        let missing = Selection::new(set(&[0]), set(&[]), set(&[]));
        assert!(!triplet_is_vertex_cover(&d, &missing).unwrap().holds);
    }

    #[test]
    fn literal_cover_variant_is_stricter() {
        // Triplet (1, 1, 0): b=1 is outside beta, a=1 is outside alpha, but
        // c=0 is inside gamma. The symmetric reading accepts (the triplet is
        // covered through gamma); the literal B-side statement rejects.
        let d = TripletDataset::from_triplets([2, 2, 1], [[1, 1, 0]]).unwrap();
        let s = Selection::new(set(&[0]), set(&[0]), set(&[0]));
        assert!(triplet_is_vertex_cover_with(&d, &s, CoverVariant::Symmetric).unwrap().holds);
        assert!(!triplet_is_vertex_cover_with(&d, &s, CoverVariant::Literal).unwrap().holds);
    }

    #[test]
    fn full_set_dominates_vacuously() {
        let g = k4();
        assert!(graph_is_dominating_set(&g, &set(&[0, 1, 2, 3])).unwrap().holds);
    }

    #[test]
    fn star_center_dominates() {
        let g = PairDataset::from_edges(4, [(0, 1), (0, 2), (0, 3)], true, true).unwrap();
        let report = graph_is_dominating_set(&g, &set(&[0])).unwrap();
        assert!(report.holds);
        assert_eq!(report.checked.len(), 3);
    }

    #[test]
    fn isolated_vertex_breaks_domination() {
        let g = PairDataset::from_edges(3, [(0, 1)], true, true).unwrap();
        assert!(!graph_is_dominating_set(&g, &set(&[0])).unwrap().holds);
    }

    #[test]
    fn triplet_domination() {
        let d = TripletDataset::from_triplets([2, 2, 2], [[0, 0, 0], [1, 1, 0], [0, 1, 1]])
            .unwrap();
        // alpha={0}, beta={0}, gamma={0}: a=1 appears in (1,1,0) with c=0 in
        // gamma; b=1 appears in (1,1,0); c=1 appears in (0,1,1) with a=0.
        let s = Selection::new(set(&[0]), set(&[0]), set(&[0]));
        assert!(triplet_is_dominating_set(&d, &s).unwrap().holds);

        // Isolated element: universe B has an extra element never observed.
        let d2 = TripletDataset::from_triplets([2, 3, 2], [[0, 0, 0], [1, 1, 0], [0, 1, 1]])
            .unwrap();
        assert!(!triplet_is_dominating_set(&d2, &s).unwrap().holds);
    }

    #[test]
    fn path_middle_vertex_separates() {
        let g = PairDataset::from_edges(3, [(0, 1), (1, 2)], true, true).unwrap();
        let report = graph_is_separating_set(&g, &set(&[1])).unwrap();
        assert!(report.holds);
        assert!(!report.was_disconnected_before);
        assert!(report.cut.is_some());
    }

    #[test]
    fn complete_graph_has_no_separator() {
        let g = k4();
        for v in 0..4u32 {
            let report = graph_is_separating_set(&g, &set(&[v])).unwrap();
            assert!(!report.holds);
        }
    }

    #[test]
    fn empty_separator_accepts_already_disconnected_data() {
        let (d, _) = two_block_dataset();
        let empty = Selection::new(set(&[]), set(&[]), set(&[]));
        let report = triplet_is_separating_set(&d, &empty).unwrap();
        assert!(report.holds);
        assert!(report.was_disconnected_before);
        let cut = report.cut.unwrap();
        assert!(triplet_is_disconnected(&d, &cut).unwrap().holds);
    }

    #[test]
    fn triplet_separator_on_bridged_blocks() {
        let (d, _) = two_block_dataset();
        let mut triplets: Vec<_> = d.triplets().to_vec();
        triplets.push([0, 2, 3]);
        let bridged = TripletDataset::from_triplets([4, 4, 4], triplets).unwrap();
        // Removing element 0 of A kills the bridge.
        let s = Selection::new(set(&[0]), set(&[]), set(&[]));
        let report = triplet_is_separating_set(&bridged, &s).unwrap();
        assert!(report.holds);
        assert!(!report.was_disconnected_before);
    }

    #[test]
    fn even_cycle_is_two_colorable() {
        let g = PairDataset::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)], true, true)
            .unwrap();
        let parts = Partitioning::new(vec![set(&[0, 2, 4]), set(&[1, 3, 5])]);
        assert!(graph_is_k_coloring(&g, &parts).unwrap().holds);
        let bad = Partitioning::new(vec![set(&[0, 1, 2]), set(&[3, 4, 5])]);
        assert!(!graph_is_k_coloring(&g, &bad).unwrap().holds);
    }

    #[test]
    fn self_loop_breaks_every_coloring() {
        let g = PairDataset::from_edges(2, [(0, 0), (0, 1)], true, false).unwrap();
        let parts = Partitioning::new(vec![set(&[0]), set(&[1])]);
        assert!(!graph_is_k_coloring(&g, &parts).unwrap().holds);
    }

    #[test]
    fn singleton_parts_color_any_loopless_graph() {
        let g = k4();
        let parts = Partitioning::new((0..4).map(|v| set(&[v])).collect());
        assert!(graph_is_k_coloring(&g, &parts).unwrap().holds);
    }

    #[test]
    fn partition_validation() {
        let g = k4();
        let overlapping = Partitioning::new(vec![set(&[0, 1]), set(&[1, 2, 3])]);
        assert!(matches!(
            graph_is_k_coloring(&g, &overlapping),
            Err(ConceptError::InvalidPartition { .. })
        ));
        let incomplete = Partitioning::new(vec![set(&[0, 1])]);
        assert!(matches!(
            graph_is_k_coloring(&g, &incomplete),
            Err(ConceptError::InvalidPartition { .. })
        ));
    }

    #[test]
    fn triplet_coloring() {
        // Two blocks on aligned parts: part 0 holds block 1, part 1 holds
        // block 2; no triplet crosses classes, so the coloring fails exactly
        // when a block sits inside one class.
        let (d, _) = two_block_dataset();
        let pa = Partitioning::new(vec![set(&[0, 1]), set(&[2, 3])]);
        let report = triplet_is_k_coloring(&d, [&pa, &pa.clone(), &pa.clone()]).unwrap();
        assert!(!report.holds);

        // Misaligned classes: class 0 = block-1 As with block-2 Bs; no
        // triplet has all three coordinates in one class.
        let pb = Partitioning::new(vec![set(&[2, 3]), set(&[0, 1])]);
        let report = triplet_is_k_coloring(&d, [&pa, &pb, &pa.clone()]).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn triangle_is_a_clique() {
        let g = two_cliques();
        assert!(graph_is_clique(&g, &set(&[0, 1, 2])).unwrap().holds);
        assert!(graph_is_clique(&g, &set(&[3, 4, 5])).unwrap().holds);
        assert!(!graph_is_clique(&g, &set(&[0, 1, 2, 3])).unwrap().holds);
    }

    #[test]
    fn missing_edge_breaks_clique() {
        let g = PairDataset::from_edges(3, [(0, 1), (0, 2)], true, true).unwrap();
        assert!(!graph_is_clique(&g, &set(&[0, 1, 2])).unwrap().holds);
    }

    #[test]
    fn single_vertex_is_a_clique() {
        let g = two_cliques();
        let report = graph_is_clique(&g, &set(&[0])).unwrap();
        assert!(report.holds);
        assert!(report.density.is_none());
    }

    #[test]
    fn full_triplet_block_is_a_clique() {
        let (d, s) = two_block_dataset();
        assert!(triplet_is_clique(&d, &s, DensityOptions::default()).unwrap().holds);
        let wide = Selection::new(set(&[0, 1, 2]), set(&[0, 1]), set(&[0, 1]));
        assert!(!triplet_is_clique(&d, &wide, DensityOptions::default()).unwrap().holds);
    }

    #[test]
    fn disconnected_component_is_a_full_cluster() {
        let g = two_cliques();
        let report = graph_is_cluster(&g, &set(&[0, 1, 2]), 1.0).unwrap();
        assert!(report.holds);
        assert_eq!(report.coverages[0].1, 1.0);
    }

    #[test]
    fn threshold_above_one_never_holds() {
        let g = two_cliques();
        assert!(!graph_is_cluster(&g, &set(&[0, 1, 2]), 1.01).unwrap().holds);
    }

    #[test]
    fn noisy_block_is_a_cluster_at_080() {
        // 9 internal pairs in alpha x alpha, 2 leaving alpha: coverage 9/11.
        let edges = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)];
        let g = PairDataset::from_edges(6, edges, true, true).unwrap();
        let report = graph_is_cluster(&g, &set(&[0, 1, 2]), 0.8).unwrap();
        assert!(report.holds);
        let strict = graph_is_cluster(&g, &set(&[0, 1, 2]), 0.9).unwrap();
        assert!(!strict.holds);
    }

    #[test]
    fn verdicts_match_their_proposition_conjunction() {
        let (d, s) = two_block_dataset();
        for report in [
            triplet_is_disconnected(&d, &s).unwrap(),
            triplet_is_vertex_cover(&d, &s).unwrap(),
            triplet_is_dominating_set(&d, &s).unwrap(),
        ] {
            let conjunction = report
                .checked
                .iter()
                .all(|c| evaluate_quantified(&d, &c.proposition).unwrap());
            assert_eq!(report.holds, conjunction);
        }
    }

    #[test]
    fn clique_implies_full_cluster_on_components() {
        let g = two_cliques();
        for alpha in [set(&[0, 1, 2]), set(&[3, 4, 5])] {
            assert!(graph_is_clique(&g, &alpha).unwrap().holds);
            assert!(graph_is_cluster(&g, &alpha, 1.0).unwrap().holds);
        }
    }

    #[test]
    fn pair_form_validation() {
        let d = TripletDataset::from_triplets([2, 2, 2], [[0, 0, 0]]).unwrap();
        assert!(matches!(
            PairDataset::from_dataset(d, false, false),
            Err(ConceptError::NotPairForm { .. })
        ));
        let asym = TripletDataset::from_triplets([2, 2, 1], [[0, 1, 0]]).unwrap();
        assert!(matches!(
            PairDataset::from_dataset(asym, true, false),
            Err(ConceptError::NotPairForm { .. })
        ));
    }
}
