//! Mining of thresholded propositions by iterative region growing.
//!
//! For every element of the subject dimension, each triplet of its slice
//! seeds a candidate region. Regions repeatedly grow by the single element
//! whose addition maximizes block density; regions falling under `y_min` are
//! dropped, and regions covering at least `x_min` of the slice are recorded.
//! Subjects sharing a recorded region are then merged: coverage and density
//! of a union of subjects are weighted averages of the per-subject values,
//! so merged propositions still meet both thresholds.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{
    coverage_x, density_y, DatasetError, DensityOptions, Dim, ElemSet, Selection, TripletDataset,
};
use crate::propositions::{PredicateExpr, Proposition};

/// Which elements a region may grow toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthCandidates {
    /// Only elements that co-occur with the subject in its slice.
    #[default]
    CoOccurringOnly,
    /// Every element of the predicate universes.
    AllElements,
}

/// How to break ties between growth candidates of equal resulting density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Prefer the first dimension, then the lowest element index.
    #[default]
    LowestIndex,
    /// Prefer the larger triplet gain, then the lowest index.
    LargestGain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    pub x_min: f64,
    pub y_min: f64,
    pub subject: Dim,
    #[serde(default)]
    pub growth_candidates: GrowthCandidates,
    #[serde(default)]
    pub tie_break: TieBreak,
    #[serde(default = "default_true")]
    pub dedupe_regions: bool,
    #[serde(default)]
    pub max_region_size: Option<usize>,
    /// Density options used for every density the miner reports; must match
    /// the options used when re-evaluating its output.
    #[serde(default)]
    pub loopless: bool,
}

fn default_true() -> bool {
    true
}

impl MinerConfig {
    pub fn new(x_min: f64, y_min: f64, subject: Dim) -> MinerConfig {
        MinerConfig {
            x_min,
            y_min,
            subject,
            growth_candidates: GrowthCandidates::default(),
            tie_break: TieBreak::default(),
            dedupe_regions: true,
            max_region_size: None,
            loopless: false,
        }
    }

    pub fn density_options(&self) -> DensityOptions {
        DensityOptions { loopless: self.loopless }
    }

    fn validate(&self) -> Result<(), MinerError> {
        for (name, v) in [("x_min", self.x_min), ("y_min", self.y_min)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(MinerError::InvalidConfig {
                    reason: format!("{name} must be in (0, 1], got {v}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum MinerError {
    #[error("invalid miner config: {reason}")]
    InvalidConfig { reason: String },
    #[error("merged subject violates the thresholds it was built from: {details}")]
    MergeInvariant { details: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// A candidate predicate: one subset per non-subject dimension, with the
/// triplet count and density it reached in the slice it was grown from.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// The two predicate dimensions, in A < B < C order.
    pub dims: [Dim; 2],
    pub sets: [ElemSet; 2],
    pub triplet_count: usize,
    pub density: f64,
}

/// Per-singleton-subject statistics backing a merged proposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubjectStat {
    pub element: u32,
    pub x: f64,
    pub y: f64,
}

/// A mined proposition: a merged subject, the shared predicate region, and
/// the coverage/density it achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct MinedProposition {
    pub subject_dim: Dim,
    pub subject: ElemSet,
    pub region: Region,
    pub x_actual: f64,
    pub y_actual: f64,
    /// The singleton subjects that contributed the region, with their own
    /// coverage and density.
    pub provenance: Vec<SubjectStat>,
}

impl MinedProposition {
    /// The selection naming the mined block.
    pub fn selection(&self) -> Selection {
        let mut sel = Selection::new(ElemSet::new(), ElemSet::new(), ElemSet::new());
        *sel.set_mut(self.subject_dim) = self.subject.clone();
        let [d1, d2] = self.subject_dim.others();
        *sel.set_mut(d1) = self.region.sets[0].clone();
        *sel.set_mut(d2) = self.region.sets[1].clone();
        sel
    }

    /// The thresholded proposition this result claims to satisfy.
    pub fn to_proposition(&self, x_min: f64, y_min: f64) -> Proposition {
        let [d1, d2] = self.subject_dim.others();
        Proposition::thresholded(
            self.subject_dim,
            self.subject.clone(),
            PredicateExpr::atom(d1, self.region.sets[0].clone())
                .and(PredicateExpr::atom(d2, self.region.sets[1].clone())),
            x_min,
            y_min,
        )
    }
}

/// Everything `get_propositions` produces: the merged propositions plus the
/// pre-merge predicate count.
#[derive(Debug, Clone, PartialEq)]
pub struct MinerOutput {
    pub propositions: Vec<MinedProposition>,
    /// Recorded (subject, region) pairs before merging.
    pub premerge_predicates: usize,
}

// ---------------------------------------------------------------------------
// Slice grid: bitset view of one subject slice
// ---------------------------------------------------------------------------

const WORD: usize = 64;

fn words_for(width: usize) -> usize {
    width.div_ceil(WORD)
}

fn bit(mask: &[u64], e: u32) -> bool {
    mask[e as usize / WORD] >> (e as usize % WORD) & 1 == 1
}

fn set_bit(mask: &mut [u64], e: u32) {
    mask[e as usize / WORD] |= 1 << (e as usize % WORD);
}

fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// How the shared A/B universe folds into one slice's density denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
enum DiagonalRule {
    Off,
    /// The subject element itself may appear in predicate slot 0 (subject on
    /// A or B): the diagonal is the `subject == slot0` line.
    WithSubject { element: u32 },
    /// Subject on C: the diagonal runs between the two predicate slots.
    BetweenSlots,
}

/// Bitset view of the pairs `(u, v)` of one subject slice, over the full
/// predicate universes so element indices stay comparable across slices.
struct SliceGrid {
    widths: [usize; 2],
    rows: Vec<Vec<u64>>,
    cols: Vec<Vec<u64>>,
    /// Elements of each predicate dimension that occur in the slice.
    used: [Vec<u32>; 2],
    total: usize,
    diagonal: DiagonalRule,
}

impl SliceGrid {
    fn build(
        pairs: impl IntoIterator<Item = (u32, u32)>,
        widths: [usize; 2],
        diagonal: DiagonalRule,
    ) -> SliceGrid {
        let mut rows = vec![vec![0u64; words_for(widths[1])]; widths[0]];
        let mut cols = vec![vec![0u64; words_for(widths[0])]; widths[1]];
        let mut total = 0usize;
        for (u, v) in pairs {
            let excluded = match diagonal {
                DiagonalRule::Off => false,
                DiagonalRule::WithSubject { element } => u == element,
                DiagonalRule::BetweenSlots => u == v,
            };
            if excluded || bit(&rows[u as usize], v) {
                continue;
            }
            set_bit(&mut rows[u as usize], v);
            set_bit(&mut cols[v as usize], u);
            total += 1;
        }
        let used = [
            (0..widths[0] as u32).filter(|&u| rows[u as usize].iter().any(|w| *w != 0)).collect(),
            (0..widths[1] as u32).filter(|&v| cols[v as usize].iter().any(|w| *w != 0)).collect(),
        ];
        SliceGrid { widths, rows, cols, used, total, diagonal }
    }

    fn candidate_pool(&self, policy: GrowthCandidates) -> [Vec<u32>; 2] {
        match policy {
            GrowthCandidates::CoOccurringOnly => self.used.clone(),
            GrowthCandidates::AllElements => [
                (0..self.widths[0] as u32).collect(),
                (0..self.widths[1] as u32).collect(),
            ],
        }
    }

    fn seeds(&self) -> Vec<RegionState> {
        let mut out = Vec::with_capacity(self.total);
        for &u in &self.used[0] {
            for v in 0..self.widths[1] as u32 {
                if bit(&self.rows[u as usize], v) {
                    out.push(RegionState::seed(self, u, v));
                }
            }
        }
        out
    }
}

/// A growing region, tracked as membership masks plus cached counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct RegionState {
    masks: [Vec<u64>; 2],
    lens: [u32; 2],
    count: u32,
    /// Diagonal overlap feeding the cell-count correction.
    inter: u32,
}

impl RegionState {
    fn seed(grid: &SliceGrid, u: u32, v: u32) -> RegionState {
        let mut masks = [
            vec![0u64; words_for(grid.widths[0])],
            vec![0u64; words_for(grid.widths[1])],
        ];
        set_bit(&mut masks[0], u);
        set_bit(&mut masks[1], v);
        let inter = match grid.diagonal {
            DiagonalRule::Off => 0,
            DiagonalRule::WithSubject { element } => (u == element) as u32,
            DiagonalRule::BetweenSlots => (u == v) as u32,
        };
        RegionState { masks, lens: [1, 1], count: 1, inter }
    }

    fn cells(&self, diagonal: DiagonalRule) -> u64 {
        let base = self.lens[0] as u64 * self.lens[1] as u64;
        match diagonal {
            DiagonalRule::Off => base,
            DiagonalRule::WithSubject { .. } => base - self.inter as u64 * self.lens[1] as u64,
            DiagonalRule::BetweenSlots => base - self.inter as u64,
        }
    }

    fn size(&self) -> usize {
        (self.lens[0] + self.lens[1]) as usize
    }

    /// Count and cell totals after adding `e` to `slot`, without mutating.
    fn probe(&self, grid: &SliceGrid, slot: usize, e: u32) -> (u32, u64, u32) {
        let gain = if slot == 0 {
            and_popcount(&grid.rows[e as usize], &self.masks[1])
        } else {
            and_popcount(&grid.cols[e as usize], &self.masks[0])
        };
        let mut lens = self.lens;
        lens[slot] += 1;
        let inter = self.inter
            + match grid.diagonal {
                DiagonalRule::Off => 0,
                DiagonalRule::WithSubject { element } => (slot == 0 && e == element) as u32,
                DiagonalRule::BetweenSlots => bit(&self.masks[1 - slot], e) as u32,
            };
        let base = lens[0] as u64 * lens[1] as u64;
        let cells = match grid.diagonal {
            DiagonalRule::Off => base,
            DiagonalRule::WithSubject { .. } => base - inter as u64 * lens[1] as u64,
            DiagonalRule::BetweenSlots => base - inter as u64,
        };
        (self.count + gain, cells, gain)
    }

    fn add(&mut self, grid: &SliceGrid, slot: usize, e: u32) {
        let (count, _, _) = self.probe(grid, slot, e);
        self.inter += match grid.diagonal {
            DiagonalRule::Off => 0,
            DiagonalRule::WithSubject { element } => (slot == 0 && e == element) as u32,
            DiagonalRule::BetweenSlots => bit(&self.masks[1 - slot], e) as u32,
        };
        set_bit(&mut self.masks[slot], e);
        self.lens[slot] += 1;
        self.count = count;
    }

    fn to_region(&self, grid: &SliceGrid, dims: [Dim; 2]) -> Region {
        let sets = [0, 1].map(|slot| {
            (0..grid.widths[slot] as u32).filter(|&e| bit(&self.masks[slot], e)).collect()
        });
        Region {
            dims,
            sets,
            triplet_count: self.count as usize,
            density: self.count as f64 / self.cells(grid.diagonal) as f64,
        }
    }
}

/// `a/b >= c/d` on exact integers.
fn density_gt(num_a: u32, cells_a: u64, num_b: u32, cells_b: u64) -> bool {
    (num_a as u128) * (cells_b as u128) > (num_b as u128) * (cells_a as u128)
}

/// One growth step: the single element whose addition maximizes density.
/// Returns `None` when the candidate pool is exhausted or the size cap is
/// reached.
fn grow_step(
    grid: &SliceGrid,
    pool: &[Vec<u32>; 2],
    cfg: &MinerConfig,
    region: &RegionState,
) -> Option<(usize, u32)> {
    if let Some(cap) = cfg.max_region_size {
        if region.size() >= cap {
            return None;
        }
    }
    let mut best: Option<(usize, u32, u32, u64, u32)> = None;
    for slot in 0..2 {
        for &e in &pool[slot] {
            if bit(&region.masks[slot], e) {
                continue;
            }
            let (count, cells, gain) = region.probe(grid, slot, e);
            let replace = match &best {
                None => true,
                Some(&(_, _, bc, bcl, bg)) => {
                    density_gt(count, cells, bc, bcl)
                        || (!density_gt(bc, bcl, count, cells)
                            && cfg.tie_break == TieBreak::LargestGain
                            && gain > bg)
                }
            };
            if replace {
                best = Some((slot, e, count, cells, gain));
            }
        }
    }
    best.map(|(slot, e, ..)| (slot, e))
}

fn meets(num: u32, den: u64, min: f64) -> bool {
    num as f64 / den as f64 >= min
}

/// Runs the region-growing loop over one slice grid; returns the recorded
/// region states in recording order, deduplicated.
fn run_slice(grid: &SliceGrid, cfg: &MinerConfig) -> Vec<RegionState> {
    let pool = grid.candidate_pool(cfg.growth_candidates);
    let mut regions = grid.seeds();
    let mut recorded: Vec<RegionState> = Vec::new();
    let mut recorded_keys: HashSet<(Vec<u64>, Vec<u64>)> = HashSet::new();
    let slice_total = grid.total as u64;

    let mut record = |r: &RegionState, recorded: &mut Vec<RegionState>| {
        let key = (r.masks[0].clone(), r.masks[1].clone());
        if recorded_keys.insert(key) {
            recorded.push(r.clone());
        }
    };

    while !regions.is_empty() {
        let mut grown: Vec<RegionState> = Vec::with_capacity(regions.len());
        for mut region in regions {
            match grow_step(grid, &pool, cfg, &region) {
                Some((slot, e)) => {
                    region.add(grid, slot, e);
                    grown.push(region);
                }
                None => {
                    // Exhausted regions keep their last (filtered) density;
                    // record them if they cover enough of the slice.
                    if meets(region.count, slice_total, cfg.x_min) {
                        record(&region, &mut recorded);
                    }
                }
            }
        }
        if cfg.dedupe_regions {
            let mut seen: HashSet<(Vec<u64>, Vec<u64>)> = HashSet::with_capacity(grown.len());
            grown.retain(|r| seen.insert((r.masks[0].clone(), r.masks[1].clone())));
        }
        grown.retain(|r| meets(r.count, r.cells(grid.diagonal), cfg.y_min));
        for r in &grown {
            if meets(r.count, slice_total, cfg.x_min) {
                record(r, &mut recorded);
            }
        }
        regions = grown;
    }
    recorded
}

fn predicate_dims(subject: Dim) -> [Dim; 2] {
    subject.others()
}

fn diagonal_rule(d: &TripletDataset, cfg: &MinerConfig, subject_element: u32) -> DiagonalRule {
    if !(cfg.loopless && d.shared_ab_universe()) {
        return DiagonalRule::Off;
    }
    match cfg.subject {
        // Predicate slot 0 is the other half of the shared A/B universe.
        Dim::A | Dim::B => DiagonalRule::WithSubject { element: subject_element },
        Dim::C => DiagonalRule::BetweenSlots,
    }
}

fn grid_for_subject(
    d: &TripletDataset,
    cfg: &MinerConfig,
    subject_element: u32,
    pairs: &[(u32, u32)],
) -> SliceGrid {
    let [d1, d2] = predicate_dims(cfg.subject);
    let widths = [d.universe_len(d1), d.universe_len(d2)];
    SliceGrid::build(
        pairs.iter().copied(),
        widths,
        diagonal_rule(d, cfg, subject_element),
    )
}

fn slice_pairs(d: &TripletDataset, subject: Dim) -> Vec<Vec<(u32, u32)>> {
    let [d1, d2] = predicate_dims(subject);
    let mut by_subject = vec![Vec::new(); d.universe_len(subject)];
    for t in d.triplets() {
        by_subject[t[subject.index()] as usize].push((t[d1.index()], t[d2.index()]));
    }
    by_subject
}

/// The diagonal rule for a slice whose subject universe has been collapsed
/// to a singleton: the subject element survives only as a label, so it is
/// resolved against the first predicate universe.
fn slice_diagonal_rule(slice: &TripletDataset, cfg: &MinerConfig) -> DiagonalRule {
    if !cfg.loopless {
        return DiagonalRule::Off;
    }
    match cfg.subject {
        Dim::C => {
            if slice.shared_ab_universe() {
                DiagonalRule::BetweenSlots
            } else {
                DiagonalRule::Off
            }
        }
        Dim::A | Dim::B => {
            if slice.universe_len(cfg.subject) != 1 {
                return DiagonalRule::Off;
            }
            let label = &slice.universe_labels(cfg.subject)[0];
            match slice.lookup(predicate_dims(cfg.subject)[0], label) {
                Some(element) => DiagonalRule::WithSubject { element },
                None => DiagonalRule::Off,
            }
        }
    }
}

/// Discovers candidate predicate regions for one subject slice, given as the
/// projected dataset `D_(a_i, B, C)` (the subject universe must be a
/// singleton).
pub fn get_predicates(slice: &TripletDataset, cfg: &MinerConfig) -> Result<Vec<Region>, MinerError> {
    cfg.validate()?;
    let dims = predicate_dims(cfg.subject);
    let pairs: Vec<(u32, u32)> = slice
        .triplets()
        .iter()
        .map(|t| (t[dims[0].index()], t[dims[1].index()]))
        .collect();
    let widths = [slice.universe_len(dims[0]), slice.universe_len(dims[1])];
    let grid = SliceGrid::build(pairs, widths, slice_diagonal_rule(slice, cfg));
    Ok(run_slice(&grid, cfg).iter().map(|r| r.to_region(&grid, dims)).collect())
}

/// One growth step of a single region within a slice, exposed for
/// inspection: returns the grown region, or `None` when it cannot grow.
pub fn grow_region(
    slice: &TripletDataset,
    region: &Region,
    cfg: &MinerConfig,
) -> Result<Option<Region>, MinerError> {
    cfg.validate()?;
    let dims = predicate_dims(cfg.subject);
    let pairs: Vec<(u32, u32)> = slice
        .triplets()
        .iter()
        .map(|t| (t[dims[0].index()], t[dims[1].index()]))
        .collect();
    let widths = [slice.universe_len(dims[0]), slice.universe_len(dims[1])];
    let grid = SliceGrid::build(pairs, widths, slice_diagonal_rule(slice, cfg));
    let pool = grid.candidate_pool(cfg.growth_candidates);

    // Rebuild the region state over the grid.
    let mut state = RegionState {
        masks: [vec![0; words_for(widths[0])], vec![0; words_for(widths[1])]],
        lens: [region.sets[0].len() as u32, region.sets[1].len() as u32],
        count: 0,
        inter: 0,
    };
    for slot in 0..2 {
        for &e in &region.sets[slot] {
            set_bit(&mut state.masks[slot], e);
        }
    }
    state.count = region.sets[0]
        .iter()
        .map(|&u| and_popcount(&grid.rows[u as usize], &state.masks[1]))
        .sum();
    state.inter = match grid.diagonal {
        DiagonalRule::Off => 0,
        DiagonalRule::WithSubject { element } => bit(&state.masks[0], element) as u32,
        DiagonalRule::BetweenSlots => and_popcount(&state.masks[0], &state.masks[1]),
    };

    Ok(grow_step(&grid, &pool, cfg, &state).map(|(slot, e)| {
        let mut grown = state.clone();
        grown.add(&grid, slot, e);
        grown.to_region(&grid, dims)
    }))
}

/// Groups per-subject regions by exact predicate equality and merges the
/// subjects, recomputing coverage and density for every merged subject.
pub fn merge_subjects(
    d: &TripletDataset,
    cfg: &MinerConfig,
    per_subject: &[(u32, Vec<Region>)],
) -> Result<Vec<MinedProposition>, MinerError> {
    cfg.validate()?;
    let [d1, d2] = predicate_dims(cfg.subject);
    let mut groups: BTreeMap<(Vec<u32>, Vec<u32>), Vec<(u32, &Region)>> = BTreeMap::new();
    for (subject, regions) in per_subject {
        for region in regions {
            let key = (
                region.sets[0].iter().copied().collect(),
                region.sets[1].iter().copied().collect(),
            );
            groups.entry(key).or_default().push((*subject, region));
        }
    }

    // Slice sizes: coverage denominators for the singleton subjects.
    let mut slice_totals = vec![0u64; d.universe_len(cfg.subject)];
    for t in d.triplets() {
        slice_totals[t[cfg.subject.index()] as usize] += 1;
    }

    let mut out = Vec::with_capacity(groups.len());
    for ((set1, set2), members) in groups {
        let subject: ElemSet = members.iter().map(|(s, _)| *s).collect();
        let mut sel = Selection::new(ElemSet::new(), ElemSet::new(), ElemSet::new());
        *sel.set_mut(cfg.subject) = subject.clone();
        *sel.set_mut(d1) = set1.iter().copied().collect();
        *sel.set_mut(d2) = set2.iter().copied().collect();

        let x_actual = coverage_x(d, &sel, cfg.subject)?;
        let y_actual = density_y(d, &sel, cfg.density_options())?;
        if x_actual < cfg.x_min || y_actual < cfg.y_min {
            return Err(MinerError::MergeInvariant {
                details: format!(
                    "subject {:?} region ({:?}, {:?}) has x={x_actual}, y={y_actual}",
                    subject, set1, set2
                ),
            });
        }

        let provenance: Vec<SubjectStat> = members
            .iter()
            .map(|&(element, region)| SubjectStat {
                element,
                x: region.triplet_count as f64 / slice_totals[element as usize] as f64,
                y: region.density,
            })
            .collect();
        let count = crate::dataset::induced_count(d, &sel)?;
        out.push(MinedProposition {
            subject_dim: cfg.subject,
            subject,
            region: Region {
                dims: [d1, d2],
                sets: [sel.set(d1).clone(), sel.set(d2).clone()],
                triplet_count: count,
                density: y_actual,
            },
            x_actual,
            y_actual,
            provenance,
        });
    }
    Ok(out)
}

fn canonical_sort(props: &mut [MinedProposition]) {
    props.sort_by(|a, b| {
        b.subject
            .len()
            .cmp(&a.subject.len())
            .then_with(|| b.x_actual.total_cmp(&a.x_actual))
            .then_with(|| b.y_actual.total_cmp(&a.y_actual))
            .then_with(|| a.region.sets.cmp(&b.region.sets))
            .then_with(|| a.subject.cmp(&b.subject))
    });
}

/// Algorithm entry point: mines predicates for every subject element, merges
/// subjects sharing a predicate, and returns the propositions in canonical
/// order together with the pre-merge predicate count.
pub fn get_propositions(d: &TripletDataset, cfg: &MinerConfig) -> Result<MinerOutput, MinerError> {
    cfg.validate()?;
    let by_subject = slice_pairs(d, cfg.subject);
    let per_subject: Vec<(u32, Vec<Region>)> = by_subject
        .par_iter()
        .enumerate()
        .filter(|(_, pairs)| !pairs.is_empty())
        .map(|(element, pairs)| {
            let element = element as u32;
            let grid = grid_for_subject(d, cfg, element, pairs);
            let dims = predicate_dims(cfg.subject);
            let regions: Vec<Region> =
                run_slice(&grid, cfg).iter().map(|r| r.to_region(&grid, dims)).collect();
            (element, regions)
        })
        .collect();

    let premerge_predicates = per_subject.iter().map(|(_, r)| r.len()).sum();
    let mut propositions = merge_subjects(d, cfg, &per_subject)?;
    canonical_sort(&mut propositions);
    Ok(MinerOutput { propositions, premerge_predicates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::project;
    use crate::propositions::evaluate_thresholded;

    fn set(v: &[u32]) -> ElemSet {
        v.iter().copied().collect()
    }

    /// A full block {0,1} x {0,1,2} x {0,1} plus nothing else, inside
    /// universes 4 x 4 x 4.
    fn planted_block() -> TripletDataset {
        let mut triplets = Vec::new();
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..2 {
                    triplets.push([a, b, c]);
                }
            }
        }
        TripletDataset::from_triplets([4, 4, 4], triplets).unwrap()
    }

    #[test]
    fn single_triplet_slice_yields_its_seed() {
        let d = TripletDataset::from_triplets([2, 3, 3], [[0, 1, 2]]).unwrap();
        let slice = project(&d, Dim::A, 0).unwrap();
        let cfg = MinerConfig::new(1.0, 1.0, Dim::A);
        let regions = get_predicates(&slice, &cfg).unwrap();
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].sets, [set(&[1]), set(&[2])]);
        assert_eq!(regions[0].triplet_count, 1);
        assert_eq!(regions[0].density, 1.0);
    }

    #[test]
    fn full_block_slice_recovers_the_block() {
        let d = planted_block();
        let slice = project(&d, Dim::A, 0).unwrap();
        let cfg = MinerConfig::new(1.0, 1.0, Dim::A);
        let regions = get_predicates(&slice, &cfg).unwrap();
        assert!(regions
            .iter()
            .any(|r| r.sets == [set(&[0, 1, 2]), set(&[0, 1])] && r.density == 1.0));
    }

    #[test]
    fn two_disjoint_blocks_cap_coverage() {
        // Slice = two disjoint full 2x2 blocks, each 50% of the slice.
        let mut triplets = Vec::new();
        for b in 0..2 {
            for c in 0..2 {
                triplets.push([0, b, c]);
                triplets.push([0, b + 2, c + 2]);
            }
        }
        let d = TripletDataset::from_triplets([1, 4, 4], triplets).unwrap();
        let cfg = MinerConfig::new(0.7, 1.0, Dim::A);
        let regions = get_predicates(&d, &cfg).unwrap();
        assert!(regions.is_empty());
    }

    #[test]
    fn grow_prefers_the_denser_column() {
        // Region {0} x {0,1}; candidate b=1 completes a full column (density
        // 1), candidate b=2 only half (density 3/4 after growth).
        let d = TripletDataset::from_triplets(
            [1, 3, 2],
            [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 2, 0]],
        )
        .unwrap();
        let cfg = MinerConfig::new(0.5, 0.5, Dim::A);
        let region = Region {
            dims: [Dim::B, Dim::C],
            sets: [set(&[0]), set(&[0, 1])],
            triplet_count: 2,
            density: 1.0,
        };
        let grown = grow_region(&d, &region, &cfg).unwrap().unwrap();
        assert_eq!(grown.sets, [set(&[0, 1]), set(&[0, 1])]);
        assert_eq!(grown.density, 1.0);
    }

    #[test]
    fn exhausted_region_cannot_grow() {
        let d = TripletDataset::from_triplets([1, 2, 2], [[0, 0, 0], [0, 1, 1]]).unwrap();
        let cfg = MinerConfig::new(0.5, 0.5, Dim::A);
        let region = Region {
            dims: [Dim::B, Dim::C],
            sets: [set(&[0, 1]), set(&[0, 1])],
            triplet_count: 2,
            density: 0.5,
        };
        assert!(grow_region(&d, &region, &cfg).unwrap().is_none());
    }

    #[test]
    fn ties_break_to_the_lowest_index() {
        // Two candidate columns with identical gain; lowest element index
        // wins under the default policy.
        let d = TripletDataset::from_triplets(
            [1, 3, 1],
            [[0, 0, 0], [0, 1, 0], [0, 2, 0]],
        )
        .unwrap();
        let cfg = MinerConfig::new(0.1, 0.1, Dim::A);
        let region = Region {
            dims: [Dim::B, Dim::C],
            sets: [set(&[0]), set(&[0])],
            triplet_count: 1,
            density: 1.0,
        };
        let grown = grow_region(&d, &region, &cfg).unwrap().unwrap();
        assert_eq!(grown.sets[0], set(&[0, 1]));
    }

    #[test]
    fn merging_groups_identical_regions() {
        let d = planted_block();
        let cfg = MinerConfig::new(0.9, 0.9, Dim::A);
        let region = Region {
            dims: [Dim::B, Dim::C],
            sets: [set(&[0, 1, 2]), set(&[0, 1])],
            triplet_count: 6,
            density: 1.0,
        };
        let merged = merge_subjects(
            &d,
            &cfg,
            &[(0, vec![region.clone()]), (1, vec![region.clone()])],
        )
        .unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].subject, set(&[0, 1]));
        assert_eq!(merged[0].x_actual, 1.0);
        assert_eq!(merged[0].y_actual, 1.0);
        assert_eq!(merged[0].provenance.len(), 2);
    }

    #[test]
    fn distinct_regions_do_not_merge() {
        let d = planted_block();
        let cfg = MinerConfig::new(0.5, 0.5, Dim::A);
        let r1 = Region {
            dims: [Dim::B, Dim::C],
            sets: [set(&[0, 1, 2]), set(&[0, 1])],
            triplet_count: 6,
            density: 1.0,
        };
        let r2 = Region {
            dims: [Dim::B, Dim::C],
            sets: [set(&[0, 1]), set(&[0, 1])],
            triplet_count: 4,
            density: 1.0,
        };
        let merged = merge_subjects(&d, &cfg, &[(0, vec![r1]), (1, vec![r2])]).unwrap();
        assert_eq!(merged.len(), 2);
        assert!(merged.iter().all(|m| m.subject.len() == 1));
    }

    #[test]
    fn planted_block_is_recovered_end_to_end() {
        let d = planted_block();
        let cfg = MinerConfig::new(1.0, 1.0, Dim::A);
        let output = get_propositions(&d, &cfg).unwrap();
        let found = output.propositions.iter().any(|p| {
            p.subject == set(&[0, 1])
                && p.region.sets == [set(&[0, 1, 2]), set(&[0, 1])]
                && p.x_actual == 1.0
                && p.y_actual == 1.0
        });
        assert!(found, "block not recovered: {:?}", output.propositions);
    }

    #[test]
    fn empty_dataset_mines_nothing() {
        let d = TripletDataset::from_triplets([3, 3, 3], []).unwrap();
        let out = get_propositions(&d, &MinerConfig::new(0.7, 0.5, Dim::C)).unwrap();
        assert!(out.propositions.is_empty());
        assert_eq!(out.premerge_predicates, 0);
    }

    #[test]
    fn output_revalidates_through_evaluate_thresholded() {
        let d = planted_block();
        let cfg = MinerConfig::new(0.4, 0.5, Dim::A);
        let output = get_propositions(&d, &cfg).unwrap();
        assert!(!output.propositions.is_empty());
        for p in &output.propositions {
            let prop = p.to_proposition(cfg.x_min, cfg.y_min);
            let report = evaluate_thresholded(&d, &prop, cfg.density_options()).unwrap();
            assert!(report.holds);
            assert_eq!(report.x_actual, p.x_actual);
            assert_eq!(report.y_actual, p.y_actual);
        }
    }

    #[test]
    fn mining_is_deterministic() {
        let d = planted_block();
        let cfg = MinerConfig::new(0.3, 0.4, Dim::B);
        let out1 = get_propositions(&d, &cfg).unwrap();
        let out2 = get_propositions(&d, &cfg).unwrap();
        assert_eq!(out1, out2);
    }

    #[test]
    fn invalid_thresholds_are_rejected() {
        let d = planted_block();
        assert!(matches!(
            get_propositions(&d, &MinerConfig::new(0.0, 0.5, Dim::A)),
            Err(MinerError::InvalidConfig { .. })
        ));
        assert!(matches!(
            get_propositions(&d, &MinerConfig::new(0.5, 1.5, Dim::A)),
            Err(MinerError::InvalidConfig { .. })
        ));
    }

    #[test]
    fn loopless_mining_matches_loopless_revalidation() {
        // Shared A/B universe, subject on C, no diagonal triplets.
        let triplets = vec![
            [0, 1, 0],
            [1, 0, 0],
            [0, 2, 0],
            [2, 0, 0],
            [1, 2, 0],
            [2, 1, 0],
            [0, 1, 1],
            [1, 0, 1],
        ];
        let d = TripletDataset::from_triplets([3, 3, 2], triplets).unwrap();
        let mut cfg = MinerConfig::new(0.5, 0.5, Dim::C);
        cfg.loopless = true;
        let output = get_propositions(&d, &cfg).unwrap();
        assert!(!output.propositions.is_empty());
        for p in &output.propositions {
            let report =
                evaluate_thresholded(&d, &p.to_proposition(cfg.x_min, cfg.y_min), cfg.density_options())
                    .unwrap();
            assert!(report.holds);
            assert_eq!(report.y_actual, p.y_actual);
        }
    }

    #[test]
    fn max_region_size_caps_growth() {
        let d = planted_block();
        let slice = project(&d, Dim::A, 0).unwrap();
        let mut cfg = MinerConfig::new(0.1, 0.5, Dim::A);
        cfg.max_region_size = Some(3);
        let regions = get_predicates(&slice, &cfg).unwrap();
        assert!(!regions.is_empty());
        assert!(regions.iter().all(|r| r.sets[0].len() + r.sets[1].len() <= 3));
    }
}
