//! Categorical propositions over a triplet dataset.
//!
//! A proposition makes a statement about the triplets whose subject
//! coordinate lies in a subject set: either the classical quantified form
//! `All/Some/No S are P`, or the extended form `x% S are y% P` where `x` is
//! subject coverage and `y` is block density. Predicates are boolean
//! combinations of membership atoms on the two non-subject dimensions.

pub mod text;

use crate::dataset::{
    coverage_x, density_y, DatasetError, DensityOptions, Dim, ElemSet, Selection, Triplet,
    TripletDataset,
};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    All,
    Some,
    No,
}

impl Quantifier {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantifier::All => "All",
            Quantifier::Some => "Some",
            Quantifier::No => "No",
        }
    }
}

/// A membership test on one coordinate: `coordinate in set`, or in the
/// complement of the set when `complement` is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipAtom {
    pub dim: Dim,
    pub set: ElemSet,
    pub complement: bool,
}

impl MembershipAtom {
    pub fn member(dim: Dim, set: ElemSet) -> MembershipAtom {
        MembershipAtom { dim, set, complement: false }
    }

    pub fn non_member(dim: Dim, set: ElemSet) -> MembershipAtom {
        MembershipAtom { dim, set, complement: true }
    }

    fn eval(&self, t: Triplet) -> bool {
        self.set.contains(&t[self.dim.index()]) != self.complement
    }
}

/// Boolean combination of membership atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredicateExpr {
    Atom(MembershipAtom),
    Not(Box<PredicateExpr>),
    And(Box<PredicateExpr>, Box<PredicateExpr>),
    Or(Box<PredicateExpr>, Box<PredicateExpr>),
    Xor(Box<PredicateExpr>, Box<PredicateExpr>),
}

impl PredicateExpr {
    pub fn atom(dim: Dim, set: ElemSet) -> PredicateExpr {
        PredicateExpr::Atom(MembershipAtom::member(dim, set))
    }

    pub fn atom_complement(dim: Dim, set: ElemSet) -> PredicateExpr {
        PredicateExpr::Atom(MembershipAtom::non_member(dim, set))
    }

    pub fn and(self, other: PredicateExpr) -> PredicateExpr {
        PredicateExpr::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: PredicateExpr) -> PredicateExpr {
        PredicateExpr::Or(Box::new(self), Box::new(other))
    }

    pub fn xor(self, other: PredicateExpr) -> PredicateExpr {
        PredicateExpr::Xor(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> PredicateExpr {
        PredicateExpr::Not(Box::new(self))
    }

    /// Evaluates the expression on a triplet's coordinates.
    pub fn eval(&self, t: Triplet) -> bool {
        match self {
            PredicateExpr::Atom(a) => a.eval(t),
            PredicateExpr::Not(e) => !e.eval(t),
            PredicateExpr::And(l, r) => l.eval(t) && r.eval(t),
            PredicateExpr::Or(l, r) => l.eval(t) || r.eval(t),
            PredicateExpr::Xor(l, r) => l.eval(t) != r.eval(t),
        }
    }

    fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a MembershipAtom)) {
        match self {
            PredicateExpr::Atom(a) => f(a),
            PredicateExpr::Not(e) => e.for_each_atom(f),
            PredicateExpr::And(l, r) | PredicateExpr::Or(l, r) | PredicateExpr::Xor(l, r) => {
                l.for_each_atom(f);
                r.for_each_atom(f);
            }
        }
    }

    fn check_subject(&self, subject_dim: Dim) -> Result<(), PropositionError> {
        let mut bad = None;
        self.for_each_atom(&mut |a| {
            if a.dim == subject_dim && bad.is_none() {
                bad = Some(a.dim);
            }
        });
        match bad {
            Some(dim) => Err(PropositionError::AtomOnSubjectDim { dim }),
            None => Ok(()),
        }
    }

    fn check_sets(&self, d: &TripletDataset) -> Result<(), PropositionError> {
        let mut bad = None;
        self.for_each_atom(&mut |a| {
            if bad.is_some() {
                return;
            }
            if let Some(&max) = a.set.iter().next_back() {
                let size = d.universe_len(a.dim);
                if max as usize >= size {
                    bad = Some(DatasetError::InvalidSelection { dim: a.dim, element: max, size });
                }
            }
        });
        match bad {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    }

    /// The `(set on dim1, set on dim2)` pair of a positive conjunctive block
    /// predicate over the two non-subject dimensions, if this expression is
    /// one.
    pub fn as_block(&self, subject_dim: Dim) -> Option<[&ElemSet; 2]> {
        let [d1, d2] = subject_dim.others();
        if let PredicateExpr::And(l, r) = self {
            if let (PredicateExpr::Atom(x), PredicateExpr::Atom(y)) = (l.as_ref(), r.as_ref()) {
                if x.complement || y.complement {
                    return None;
                }
                if x.dim == d1 && y.dim == d2 {
                    return Some([&x.set, &y.set]);
                }
                if x.dim == d2 && y.dim == d1 {
                    return Some([&y.set, &x.set]);
                }
            }
        }
        None
    }
}

/// Either a classical quantifier or an `(x, y)` threshold pair.
#[derive(Debug, Clone, PartialEq)]
pub enum PropositionForm {
    Quantified(Quantifier),
    Thresholded { x: f64, y: f64 },
}

/// A categorical proposition `Q S are P` / `x% S are y% P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposition {
    pub subject_dim: Dim,
    pub subject: ElemSet,
    pub predicate: PredicateExpr,
    pub form: PropositionForm,
}

impl Proposition {
    pub fn quantified(
        q: Quantifier,
        subject_dim: Dim,
        subject: ElemSet,
        predicate: PredicateExpr,
    ) -> Proposition {
        Proposition { subject_dim, subject, predicate, form: PropositionForm::Quantified(q) }
    }

    pub fn thresholded(
        subject_dim: Dim,
        subject: ElemSet,
        predicate: PredicateExpr,
        x: f64,
        y: f64,
    ) -> Proposition {
        Proposition { subject_dim, subject, predicate, form: PropositionForm::Thresholded { x, y } }
    }
}

/// Result of evaluating a thresholded proposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub x_actual: f64,
    pub y_actual: f64,
    pub holds: bool,
}

#[derive(Debug, Error)]
pub enum PropositionError {
    #[error("malformed predicate: atom on the subject dimension {dim}")]
    AtomOnSubjectDim { dim: Dim },
    #[error("thresholded form requires a positive `and` block over the two non-subject dimensions")]
    UnsupportedThresholdForm,
    #[error("expected a {expected} proposition")]
    WrongForm { expected: &'static str },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// Evaluates a predicate on one triplet, rejecting predicates that mention
/// the subject dimension.
pub fn satisfies_predicate(
    t: Triplet,
    predicate: &PredicateExpr,
    subject_dim: Dim,
) -> Result<bool, PropositionError> {
    predicate.check_subject(subject_dim)?;
    Ok(predicate.eval(t))
}

/// Evaluates `All/Some/No S are P` by scanning the subject's triplets.
/// `All` and `No` are vacuously true on an empty subject slice; `Some` is
/// false.
pub fn evaluate_quantified(
    d: &TripletDataset,
    p: &Proposition,
) -> Result<bool, PropositionError> {
    let q = match p.form {
        PropositionForm::Quantified(q) => q,
        PropositionForm::Thresholded { .. } => {
            return Err(PropositionError::WrongForm { expected: "quantified" })
        }
    };
    p.predicate.check_subject(p.subject_dim)?;
    p.predicate.check_sets(d)?;
    if let Some(&max) = p.subject.iter().next_back() {
        let size = d.universe_len(p.subject_dim);
        if max as usize >= size {
            return Err(DatasetError::InvalidSelection {
                dim: p.subject_dim,
                element: max,
                size,
            }
            .into());
        }
    }

    let si = p.subject_dim.index();
    let mut matching = 0usize;
    let mut total = 0usize;
    for t in d.triplets() {
        if p.subject.contains(&t[si]) {
            total += 1;
            if p.predicate.eval(*t) {
                matching += 1;
            }
        }
    }
    Ok(match q {
        Quantifier::All => matching == total,
        Quantifier::Some => matching > 0,
        Quantifier::No => matching == 0,
    })
}

/// Evaluates `x% S are y% P` for a block predicate: coverage and density of
/// the block named by the subject and the predicate's two positive sets.
pub fn evaluate_thresholded(
    d: &TripletDataset,
    p: &Proposition,
    opts: DensityOptions,
) -> Result<EvalReport, PropositionError> {
    let (x_min, y_min) = match p.form {
        PropositionForm::Thresholded { x, y } => (x, y),
        PropositionForm::Quantified(_) => {
            return Err(PropositionError::WrongForm { expected: "thresholded" })
        }
    };
    p.predicate.check_subject(p.subject_dim)?;
    p.predicate.check_sets(d)?;
    let [set1, set2] = p
        .predicate
        .as_block(p.subject_dim)
        .ok_or(PropositionError::UnsupportedThresholdForm)?;

    let mut sel = Selection::new(ElemSet::new(), ElemSet::new(), ElemSet::new());
    *sel.set_mut(p.subject_dim) = p.subject.clone();
    let [d1, d2] = p.subject_dim.others();
    *sel.set_mut(d1) = set1.clone();
    *sel.set_mut(d2) = set2.clone();

    let x_actual = coverage_x(d, &sel, p.subject_dim)?;
    let y_actual = density_y(d, &sel, opts)?;
    Ok(EvalReport {
        x_actual,
        y_actual,
        holds: x_actual >= x_min && y_actual >= y_min,
    })
}
