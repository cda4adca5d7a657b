//! Analysis of triplet datasets through categorical propositions.
//!
//! Datasets of triplets `(a, b, c)` — calls between users over time, contacts
//! between people per minute, purchases per store — are analyzed directly as
//! subsets of a triplet space `A x B x C`. The crate provides:
//!
//! - [`dataset`]: triplet datasets, induced sub-datasets, bin histograms,
//!   subject coverage and block density;
//! - [`propositions`]: evaluation of `All/Some/No S are P` and `x% S are y% P`
//!   statements, with a canonical text grammar;
//! - [`concepts`]: graph-theoretic concepts (disconnection, covers,
//!   dominating sets, separators, colorings, cliques, clusters) expressed as
//!   proposition checks, for both pair graphs and triplet data;
//! - [`miner`]: discovery of thresholded propositions by iterative region
//!   growing and subject merging;
//! - [`oracle`]: exhaustive enumeration, synthetic planted-block generation
//!   and recall scoring used to validate the miner;
//! - [`io`]: CSV / contact-list ingestion, time binning and result
//!   serialization backing the `catprop` CLI.

pub mod concepts;
pub mod dataset;
pub mod io;
pub mod miner;
pub mod oracle;
pub mod propositions;

pub use dataset::{
    bin_histogram, coverage_x, density_y, induced_count, induced_subdataset, project,
    BinHistogram, DatasetError, DensityOptions, Dim, ElemSet, Selection, Triplet, TripletDataset,
};
pub use propositions::{
    evaluate_quantified, evaluate_thresholded, satisfies_predicate,
    text::{format_proposition, parse_proposition},
    EvalReport, MembershipAtom, PredicateExpr, Proposition, PropositionError, PropositionForm,
    Quantifier,
};
