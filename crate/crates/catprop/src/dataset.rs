//! Triplet datasets and the counting primitives built on them.
//!
//! A dataset is a finite, duplicate-free set of `(a, b, c)` index triples
//! drawn from three element universes. Induced sub-dataset counts, bin
//! histograms, subject coverage and block density are all computed here;
//! every other module consumes these quantities.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A subset of one universe, as ascending element indices.
pub type ElemSet = BTreeSet<u32>;

/// One observation: indices into the A, B and C universes.
pub type Triplet = [u32; 3];

/// One of the three dataset dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dim {
    A,
    B,
    C,
}

impl Dim {
    pub const ALL: [Dim; 3] = [Dim::A, Dim::B, Dim::C];

    pub fn index(self) -> usize {
        match self {
            Dim::A => 0,
            Dim::B => 1,
            Dim::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Dim {
        Dim::ALL[i]
    }

    /// The two other dimensions, in A < B < C order.
    pub fn others(self) -> [Dim; 2] {
        match self {
            Dim::A => [Dim::B, Dim::C],
            Dim::B => [Dim::A, Dim::C],
            Dim::C => [Dim::A, Dim::B],
        }
    }

    pub fn parse(s: &str) -> Option<Dim> {
        match s {
            "a" | "A" => Some(Dim::A),
            "b" | "B" => Some(Dim::B),
            "c" | "C" => Some(Dim::C),
            _ => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dim::A => "a",
            Dim::B => "b",
            Dim::C => "c",
        })
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid selection: element {element} is outside the {dim} universe of size {size}")]
    InvalidSelection { dim: Dim, element: u32, size: usize },
    #[error("unknown element {element} in dimension {dim}")]
    UnknownElement { dim: Dim, element: u32 },
    #[error("unknown label {label:?} in dimension {dim}")]
    UnknownLabel { dim: Dim, label: String },
    #[error("triplet component {element} exceeds the {dim} universe of size {size}")]
    TripletOutOfRange { dim: Dim, element: u32, size: usize },
    #[error("coverage is undefined: no triplet has its {dim} coordinate in the subject set")]
    UndefinedCoverage { dim: Dim },
    #[error("density is undefined: the selected block has no cells")]
    UndefinedDensity,
}

/// One interned dimension: labels in index order plus the reverse lookup.
#[derive(Debug, Clone)]
struct Universe {
    labels: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl Universe {
    fn from_labels(labels: Vec<String>) -> Universe {
        let lookup = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        Universe { labels, lookup }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

/// An immutable triplet dataset: three universes, a sorted duplicate-free
/// triplet list, and optional per-element tags (e.g. roles).
#[derive(Debug, Clone, PartialEq)]
pub struct TripletDataset {
    universes: [Universe; 3],
    triplets: Vec<Triplet>,
    tags: [BTreeMap<u32, String>; 3],
}

impl TripletDataset {
    /// Builds a dataset over universes of the given sizes. Element labels are
    /// the decimal index strings. Triplets are deduplicated.
    pub fn from_triplets(
        sizes: [usize; 3],
        triplets: impl IntoIterator<Item = Triplet>,
    ) -> Result<TripletDataset, DatasetError> {
        let universes = sizes.map(|n| Universe::from_labels((0..n).map(|i| i.to_string()).collect()));
        let mut list: Vec<Triplet> = Vec::new();
        for t in triplets {
            for dim in Dim::ALL {
                let size = sizes[dim.index()];
                if t[dim.index()] as usize >= size {
                    return Err(DatasetError::TripletOutOfRange {
                        dim,
                        element: t[dim.index()],
                        size,
                    });
                }
            }
            list.push(t);
        }
        list.sort_unstable();
        list.dedup();
        Ok(TripletDataset {
            universes,
            triplets: list,
            tags: Default::default(),
        })
    }

    /// Builds a dataset from labelled rows, interning labels in the order the
    /// given universes list them.
    pub fn from_labeled(
        universe_labels: [Vec<String>; 3],
        rows: impl IntoIterator<Item = [String; 3]>,
    ) -> Result<TripletDataset, DatasetError> {
        let universes = universe_labels.map(Universe::from_labels);
        let mut list: Vec<Triplet> = Vec::new();
        for row in rows {
            let mut t = [0u32; 3];
            for dim in Dim::ALL {
                let label = &row[dim.index()];
                match universes[dim.index()].lookup.get(label) {
                    Some(&i) => t[dim.index()] = i,
                    None => {
                        return Err(DatasetError::UnknownLabel {
                            dim,
                            label: label.clone(),
                        })
                    }
                }
            }
            list.push(t);
        }
        list.sort_unstable();
        list.dedup();
        Ok(TripletDataset {
            universes,
            triplets: list,
            tags: Default::default(),
        })
    }

    pub fn universe_len(&self, dim: Dim) -> usize {
        self.universes[dim.index()].len()
    }

    pub fn universe_sizes(&self) -> [usize; 3] {
        [
            self.universe_len(Dim::A),
            self.universe_len(Dim::B),
            self.universe_len(Dim::C),
        ]
    }

    pub fn universe_labels(&self, dim: Dim) -> &[String] {
        &self.universes[dim.index()].labels
    }

    pub fn label(&self, dim: Dim, element: u32) -> &str {
        &self.universes[dim.index()].labels[element as usize]
    }

    pub fn lookup(&self, dim: Dim, label: &str) -> Option<u32> {
        self.universes[dim.index()].lookup.get(label).copied()
    }

    /// The full universe of one dimension as an element set.
    pub fn full_set(&self, dim: Dim) -> ElemSet {
        (0..self.universe_len(dim) as u32).collect()
    }

    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets
    }

    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }

    pub fn set_tag(&mut self, dim: Dim, element: u32, tag: String) {
        self.tags[dim.index()].insert(element, tag);
    }

    pub fn tag(&self, dim: Dim, element: u32) -> Option<&str> {
        self.tags[dim.index()].get(&element).map(|s| s.as_str())
    }

    /// True when the A and B universes list the same labels in the same
    /// order, i.e. the dataset is pair-like over one vertex set.
    pub fn shared_ab_universe(&self) -> bool {
        self.universes[0].labels == self.universes[1].labels
    }

    /// Triplets rendered back to labels, in canonical order.
    pub fn labeled_triplets(&self) -> Vec<[String; 3]> {
        self.triplets
            .iter()
            .map(|t| {
                [
                    self.label(Dim::A, t[0]).to_string(),
                    self.label(Dim::B, t[1]).to_string(),
                    self.label(Dim::C, t[2]).to_string(),
                ]
            })
            .collect()
    }
}

/// A region of the triplet space: one subset per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub alpha: ElemSet,
    pub beta: ElemSet,
    pub gamma: ElemSet,
}

impl Selection {
    pub fn new(alpha: ElemSet, beta: ElemSet, gamma: ElemSet) -> Selection {
        Selection { alpha, beta, gamma }
    }

    /// The selection covering the whole dataset.
    pub fn full(d: &TripletDataset) -> Selection {
        Selection {
            alpha: d.full_set(Dim::A),
            beta: d.full_set(Dim::B),
            gamma: d.full_set(Dim::C),
        }
    }

    pub fn set(&self, dim: Dim) -> &ElemSet {
        match dim {
            Dim::A => &self.alpha,
            Dim::B => &self.beta,
            Dim::C => &self.gamma,
        }
    }

    pub fn set_mut(&mut self, dim: Dim) -> &mut ElemSet {
        match dim {
            Dim::A => &mut self.alpha,
            Dim::B => &mut self.beta,
            Dim::C => &mut self.gamma,
        }
    }

    /// Complement of one side with respect to the dataset's universe.
    pub fn complement(&self, d: &TripletDataset, dim: Dim) -> ElemSet {
        let chosen = self.set(dim);
        (0..d.universe_len(dim) as u32)
            .filter(|e| !chosen.contains(e))
            .collect()
    }

    /// All three sides complemented.
    pub fn complemented(&self, d: &TripletDataset) -> Selection {
        Selection {
            alpha: self.complement(d, Dim::A),
            beta: self.complement(d, Dim::B),
            gamma: self.complement(d, Dim::C),
        }
    }

    fn validate(&self, d: &TripletDataset) -> Result<(), DatasetError> {
        for dim in Dim::ALL {
            let size = d.universe_len(dim);
            if let Some(&max) = self.set(dim).iter().next_back() {
                if max as usize >= size {
                    return Err(DatasetError::InvalidSelection {
                        dim,
                        element: max,
                        size,
                    });
                }
            }
        }
        Ok(())
    }

    /// Membership bits of a triplet: (in alpha, in beta, in gamma).
    pub fn membership(&self, t: Triplet) -> [bool; 3] {
        [
            self.alpha.contains(&t[0]),
            self.beta.contains(&t[1]),
            self.gamma.contains(&t[2]),
        ]
    }

    fn contains(&self, t: Triplet) -> bool {
        self.membership(t).into_iter().all(|b| b)
    }
}

/// Counts of triplets in the eight membership bins induced by a selection.
///
/// The bin signature packs the membership bits as `in_alpha << 2 | in_beta << 1
/// | in_gamma`, so signature 7 is the fully-inside bin.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BinHistogram {
    pub counts: [u64; 8],
}

impl BinHistogram {
    pub fn signature(membership: [bool; 3]) -> usize {
        ((membership[0] as usize) << 2) | ((membership[1] as usize) << 1) | membership[2] as usize
    }

    pub fn count(&self, in_alpha: bool, in_beta: bool, in_gamma: bool) -> u64 {
        self.counts[Self::signature([in_alpha, in_beta, in_gamma])]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `num/den >= min`, computed the same way everywhere a threshold is
/// checked, so the miner, the oracle and re-evaluation always agree.
pub fn frac_meets(num: u64, den: u64, min: f64) -> bool {
    num as f64 / den as f64 >= min
}

/// Options for block density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DensityOptions {
    /// When the A and B universes are the same vertex set, exclude the
    /// diagonal `a == b` cells (and any diagonal triplets) from the density.
    pub loopless: bool,
}

impl DensityOptions {
    pub fn loopless() -> DensityOptions {
        DensityOptions { loopless: true }
    }
}

/// The sub-dataset induced by a selection: triplets with all three
/// coordinates inside it, universes restricted to the selected elements.
pub fn induced_subdataset(
    d: &TripletDataset,
    s: &Selection,
) -> Result<TripletDataset, DatasetError> {
    s.validate(d)?;
    let mut remap: [HashMap<u32, u32>; 3] = Default::default();
    let mut universes: Vec<Universe> = Vec::with_capacity(3);
    for dim in Dim::ALL {
        let mut labels = Vec::with_capacity(s.set(dim).len());
        for (new_idx, &old) in s.set(dim).iter().enumerate() {
            remap[dim.index()].insert(old, new_idx as u32);
            labels.push(d.label(dim, old).to_string());
        }
        universes.push(Universe::from_labels(labels));
    }
    let universes: [Universe; 3] = universes.try_into().unwrap();

    let triplets: Vec<Triplet> = d
        .triplets
        .iter()
        .filter(|t| s.contains(**t))
        .map(|t| {
            [
                remap[0][&t[0]],
                remap[1][&t[1]],
                remap[2][&t[2]],
            ]
        })
        .collect();

    let mut tags: [BTreeMap<u32, String>; 3] = Default::default();
    for dim in Dim::ALL {
        for (&old, tag) in &d.tags[dim.index()] {
            if let Some(&new) = remap[dim.index()].get(&old) {
                tags[dim.index()].insert(new, tag.clone());
            }
        }
    }

    // Filtering preserves sort order, so the remapped list is already sorted.
    Ok(TripletDataset {
        universes,
        triplets,
        tags,
    })
}

/// Number of triplets inside the selection, without materializing the
/// sub-dataset.
pub fn induced_count(d: &TripletDataset, s: &Selection) -> Result<usize, DatasetError> {
    s.validate(d)?;
    Ok(d.triplets.iter().filter(|t| s.contains(**t)).count())
}

/// Partition of the dataset into the eight membership bins of a selection.
pub fn bin_histogram(d: &TripletDataset, s: &Selection) -> Result<BinHistogram, DatasetError> {
    s.validate(d)?;
    let mut h = BinHistogram::default();
    for t in &d.triplets {
        h.counts[BinHistogram::signature(s.membership(*t))] += 1;
    }
    Ok(h)
}

/// Fraction of the subject's triplets that fall inside the selection:
/// `|D_(alpha,beta,gamma)|` over the count of triplets whose subject
/// coordinate lies in the subject-side subset (other coordinates free).
pub fn coverage_x(
    d: &TripletDataset,
    s: &Selection,
    subject: Dim,
) -> Result<f64, DatasetError> {
    s.validate(d)?;
    let subject_set = s.set(subject);
    let mut numerator = 0u64;
    let mut denominator = 0u64;
    for t in &d.triplets {
        if subject_set.contains(&t[subject.index()]) {
            denominator += 1;
            if s.contains(*t) {
                numerator += 1;
            }
        }
    }
    if denominator == 0 {
        return Err(DatasetError::UndefinedCoverage { dim: subject });
    }
    Ok(numerator as f64 / denominator as f64)
}

/// Filled fraction of the block named by the selection: triplets inside it
/// over the number of cells `|alpha|*|beta|*|gamma|`. With
/// [`DensityOptions::loopless`] on a shared A/B universe, diagonal cells and
/// diagonal triplets are excluded.
pub fn density_y(
    d: &TripletDataset,
    s: &Selection,
    opts: DensityOptions,
) -> Result<f64, DatasetError> {
    s.validate(d)?;
    if s.alpha.is_empty() || s.beta.is_empty() || s.gamma.is_empty() {
        return Err(DatasetError::UndefinedDensity);
    }
    let loopless = opts.loopless && d.shared_ab_universe();
    let mut cells = (s.alpha.len() as u64) * (s.beta.len() as u64) * (s.gamma.len() as u64);
    if loopless {
        let shared = s.alpha.intersection(&s.beta).count() as u64;
        cells -= shared * s.gamma.len() as u64;
    }
    if cells == 0 {
        return Err(DatasetError::UndefinedDensity);
    }
    let count = d
        .triplets
        .iter()
        .filter(|t| s.contains(**t) && !(loopless && t[0] == t[1]))
        .count();
    Ok(count as f64 / cells as f64)
}

/// The slice of the dataset with one dimension fixed to a single element,
/// e.g. `D_(a_i, B, C)`. The fixed dimension's universe collapses to the
/// singleton; the other universes are kept intact so element indices stay
/// comparable across slices.
pub fn project(d: &TripletDataset, dim: Dim, fixed: u32) -> Result<TripletDataset, DatasetError> {
    let size = d.universe_len(dim);
    if fixed as usize >= size {
        return Err(DatasetError::UnknownElement { dim, element: fixed });
    }
    let mut universes = d.universes.clone();
    universes[dim.index()] = Universe::from_labels(vec![d.label(dim, fixed).to_string()]);

    let triplets: Vec<Triplet> = d
        .triplets
        .iter()
        .filter(|t| t[dim.index()] == fixed)
        .map(|t| {
            let mut t = *t;
            t[dim.index()] = 0;
            t
        })
        .collect();

    let mut tags = d.tags.clone();
    let fixed_tag = d.tags[dim.index()].get(&fixed).cloned();
    tags[dim.index()] = fixed_tag.map(|t| (0u32, t)).into_iter().collect();

    Ok(TripletDataset {
        universes,
        triplets,
        tags,
    })
}
