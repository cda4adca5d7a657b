//! Canonical text form of propositions.
//!
//! Grammar (EBNF):
//!
//! ```text
//! proposition := quant subject "are" predicate
//!              | number subject "are" number predicate
//! quant       := "All" | "Some" | "No"
//! subject     := elemset
//! predicate   := orexpr
//! orexpr      := andexpr { "or" andexpr }
//! andexpr     := xorexpr { "and" xorexpr }
//! xorexpr     := unary { "xor" unary }
//! unary       := "not" unary | "(" orexpr ")" | elemset
//! elemset     := dim "{" [ elem { "," elem } ] "}" [ "^c" ]
//! dim         := "a" | "b" | "c"
//! elem        := bare-label | "'" quoted-label "'"
//! number      := decimal fraction in [0, 1]
//! ```
//!
//! `or` binds loosest, then `and`, then `xor`, then `not`. Bare labels may
//! contain ASCII alphanumerics and `_ . : + - @ #`; anything else must be
//! single-quoted, with embedded quotes doubled. Set literals are emitted in
//! universe order, numbers in shortest round-trip decimal form, so formatting
//! is deterministic and `parse(format(p)) == p`.

use std::fmt::Write as _;

use super::{MembershipAtom, PredicateExpr, Proposition, PropositionForm, Quantifier};
use crate::dataset::{Dim, ElemSet, TripletDataset};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn is_bare_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '+' | '-' | '@' | '#')
}

fn push_label(out: &mut String, label: &str) {
    if !label.is_empty() && label.chars().all(is_bare_char) {
        out.push_str(label);
    } else {
        out.push('\'');
        for c in label.chars() {
            if c == '\'' {
                out.push('\'');
            }
            out.push(c);
        }
        out.push('\'');
    }
}

fn push_elemset(out: &mut String, d: &TripletDataset, dim: Dim, set: &ElemSet, complement: bool) {
    let _ = write!(out, "{dim}{{");
    let size = d.universe_len(dim);
    for (i, &e) in set.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        if (e as usize) < size {
            push_label(out, d.label(dim, e));
        } else {
            let _ = write!(out, "#{e}");
        }
    }
    out.push('}');
    if complement {
        out.push_str("^c");
    }
}

fn prec(e: &PredicateExpr) -> u8 {
    match e {
        PredicateExpr::Or(..) => 1,
        PredicateExpr::And(..) => 2,
        PredicateExpr::Xor(..) => 3,
        PredicateExpr::Not(..) => 4,
        PredicateExpr::Atom(..) => 5,
    }
}

fn push_expr(out: &mut String, d: &TripletDataset, e: &PredicateExpr, min_prec: u8) {
    let p = prec(e);
    let parens = p < min_prec;
    if parens {
        out.push('(');
    }
    match e {
        PredicateExpr::Atom(a) => push_elemset(out, d, a.dim, &a.set, a.complement),
        PredicateExpr::Not(x) => {
            out.push_str("not ");
            push_expr(out, d, x, 4);
        }
        // Right operands of a binary node require strictly higher precedence
        // so re-parsing rebuilds the same (left-associated) tree.
        PredicateExpr::And(l, r) => {
            push_expr(out, d, l, 2);
            out.push_str(" and ");
            push_expr(out, d, r, 3);
        }
        PredicateExpr::Or(l, r) => {
            push_expr(out, d, l, 1);
            out.push_str(" or ");
            push_expr(out, d, r, 2);
        }
        PredicateExpr::Xor(l, r) => {
            push_expr(out, d, l, 3);
            out.push_str(" xor ");
            push_expr(out, d, r, 4);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Renders a proposition in the canonical grammar, resolving element indices
/// to labels through the dataset.
pub fn format_proposition(p: &Proposition, d: &TripletDataset) -> String {
    let mut out = String::new();
    match &p.form {
        PropositionForm::Quantified(q) => {
            out.push_str(q.as_str());
            out.push(' ');
            push_elemset(&mut out, d, p.subject_dim, &p.subject, false);
            out.push_str(" are ");
            push_expr(&mut out, d, &p.predicate, 0);
        }
        PropositionForm::Thresholded { x, y } => {
            let _ = write!(out, "{x} ");
            push_elemset(&mut out, d, p.subject_dim, &p.subject, false);
            let _ = write!(out, " are {y} ");
            push_expr(&mut out, d, &p.predicate, 0);
        }
    }
    out
}

struct Cursor<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    idx: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Cursor<'a> {
        Cursor { src, chars: src.char_indices().collect(), idx: 0 }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.src.len(), |&(p, _)| p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.idx += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    /// Consumes a keyword made of bare characters, if it is next.
    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let start = self.idx;
        for wc in word.chars() {
            if self.peek() == Some(wc) {
                self.idx += 1;
            } else {
                self.idx = start;
                return false;
            }
        }
        // Keyword must not run into a longer bare token.
        if self.peek().is_some_and(is_bare_char) {
            self.idx = start;
            return false;
        }
        true
    }

    fn expect_word(&mut self, word: &str) -> Result<(), ParseError> {
        if self.eat_word(word) {
            Ok(())
        } else {
            self.err(format!("expected `{word}`"))
        }
    }

    fn peek_number(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    fn parse_number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start_pos = self.pos();
        let mut text = String::new();
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E'))
        {
            text.push(self.bump().unwrap());
        }
        let value: f64 = text
            .parse()
            .map_err(|_| ParseError { pos: start_pos, msg: format!("invalid number `{text}`") })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(ParseError {
                pos: start_pos,
                msg: format!("fraction {value} outside [0, 1]"),
            });
        }
        Ok(value)
    }

    fn parse_label(&mut self) -> Result<String, ParseError> {
        if self.peek() == Some('\'') {
            self.bump();
            let mut label = String::new();
            loop {
                match self.bump() {
                    Some('\'') => {
                        if self.peek() == Some('\'') {
                            self.bump();
                            label.push('\'');
                        } else {
                            return Ok(label);
                        }
                    }
                    Some(c) => label.push(c),
                    None => return self.err("unterminated quoted label"),
                }
            }
        }
        let mut label = String::new();
        while self.peek().is_some_and(is_bare_char) {
            label.push(self.bump().unwrap());
        }
        if label.is_empty() {
            return self.err("expected an element label");
        }
        Ok(label)
    }

    fn parse_elemset(&mut self, d: &TripletDataset) -> Result<(Dim, ElemSet, bool), ParseError> {
        self.skip_ws();
        let dim = match self.peek() {
            Some(c @ ('a' | 'b' | 'c')) => {
                self.bump();
                Dim::parse(&c.to_string()).unwrap()
            }
            _ => return self.err("expected a dimension (`a`, `b` or `c`)"),
        };
        if self.peek() != Some('{') {
            return self.err("expected `{` after the dimension");
        }
        self.bump();
        let mut set = ElemSet::new();
        self.skip_ws();
        if self.peek() != Some('}') {
            loop {
                self.skip_ws();
                let label_pos = self.pos();
                let label = self.parse_label()?;
                match d.lookup(dim, &label) {
                    Some(e) => {
                        set.insert(e);
                    }
                    None => {
                        return Err(ParseError {
                            pos: label_pos,
                            msg: format!("unknown label {label:?} in dimension {dim}"),
                        })
                    }
                }
                self.skip_ws();
                match self.peek() {
                    Some(',') => {
                        self.bump();
                    }
                    Some('}') => break,
                    _ => return self.err("expected `,` or `}` in set literal"),
                }
            }
        }
        self.bump(); // consume '}'
        let mut complement = false;
        if self.peek() == Some('^') {
            self.bump();
            if self.peek() == Some('c') {
                self.bump();
                complement = true;
            } else {
                return self.err("expected `c` after `^`");
            }
        }
        Ok((dim, set, complement))
    }

    fn parse_unary(&mut self, d: &TripletDataset) -> Result<PredicateExpr, ParseError> {
        self.skip_ws();
        if self.eat_word("not") {
            return Ok(self.parse_unary(d)?.negate());
        }
        if self.peek() == Some('(') {
            self.bump();
            let e = self.parse_or(d)?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return self.err("expected `)`");
            }
            self.bump();
            return Ok(e);
        }
        let (dim, set, complement) = self.parse_elemset(d)?;
        Ok(PredicateExpr::Atom(MembershipAtom { dim, set, complement }))
    }

    fn parse_xor(&mut self, d: &TripletDataset) -> Result<PredicateExpr, ParseError> {
        let mut e = self.parse_unary(d)?;
        while self.eat_word("xor") {
            e = e.xor(self.parse_unary(d)?);
        }
        Ok(e)
    }

    fn parse_and(&mut self, d: &TripletDataset) -> Result<PredicateExpr, ParseError> {
        let mut e = self.parse_xor(d)?;
        while self.eat_word("and") {
            e = e.and(self.parse_xor(d)?);
        }
        Ok(e)
    }

    fn parse_or(&mut self, d: &TripletDataset) -> Result<PredicateExpr, ParseError> {
        let mut e = self.parse_and(d)?;
        while self.eat_word("or") {
            e = e.or(self.parse_and(d)?);
        }
        Ok(e)
    }
}

/// Parses the canonical grammar back into a proposition, resolving labels
/// against the dataset's universes.
pub fn parse_proposition(text: &str, d: &TripletDataset) -> Result<Proposition, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();

    let quant = if cur.eat_word("All") {
        Some(Quantifier::All)
    } else if cur.eat_word("Some") {
        Some(Quantifier::Some)
    } else if cur.eat_word("No") {
        Some(Quantifier::No)
    } else {
        None
    };

    let proposition = match quant {
        Some(q) => {
            let (subject_dim, subject, complement) = cur.parse_elemset(d)?;
            if complement {
                return cur.err("the subject set cannot be complemented");
            }
            cur.expect_word("are")?;
            let predicate = cur.parse_or(d)?;
            Proposition::quantified(q, subject_dim, subject, predicate)
        }
        None => {
            if !cur.peek_number() {
                return cur.err("expected `All`, `Some`, `No` or a fraction");
            }
            let x = cur.parse_number()?;
            let (subject_dim, subject, complement) = cur.parse_elemset(d)?;
            if complement {
                return cur.err("the subject set cannot be complemented");
            }
            cur.expect_word("are")?;
            let y = cur.parse_number()?;
            let predicate = cur.parse_or(d)?;
            Proposition::thresholded(subject_dim, subject, predicate, x, y)
        }
    };

    cur.skip_ws();
    if cur.peek().is_some() {
        return cur.err("unexpected trailing input");
    }
    Ok(proposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::TripletDataset;

    fn dataset() -> TripletDataset {
        TripletDataset::from_triplets([4, 4, 4], [[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]])
            .unwrap()
    }

    fn set(v: &[u32]) -> ElemSet {
        v.iter().copied().collect()
    }

    #[test]
    fn formats_quantified() {
        let d = dataset();
        let p = Proposition::quantified(
            Quantifier::All,
            Dim::A,
            set(&[1]),
            PredicateExpr::atom(Dim::B, set(&[1, 2])).and(PredicateExpr::atom(Dim::C, set(&[1]))),
        );
        assert_eq!(format_proposition(&p, &d), "All a{1} are b{1,2} and c{1}");
    }

    #[test]
    fn formats_thresholded() {
        let d = dataset();
        let p = Proposition::thresholded(
            Dim::C,
            set(&[0, 2]),
            PredicateExpr::atom(Dim::A, set(&[1])).and(PredicateExpr::atom(Dim::B, set(&[3]))),
            0.85,
            0.64,
        );
        assert_eq!(format_proposition(&p, &d), "0.85 c{0,2} are 0.64 a{1} and b{3}");
    }

    #[test]
    fn formats_complement_and_compound() {
        let d = dataset();
        let p = Proposition::quantified(
            Quantifier::No,
            Dim::A,
            set(&[0]),
            PredicateExpr::atom_complement(Dim::B, set(&[0]))
                .or(PredicateExpr::atom_complement(Dim::C, set(&[0]))),
        );
        assert_eq!(format_proposition(&p, &d), "No a{0} are b{0}^c or c{0}^c");
    }

    #[test]
    fn parses_what_it_formats() {
        let d = dataset();
        let cases = vec![
            Proposition::quantified(
                Quantifier::Some,
                Dim::B,
                set(&[0, 3]),
                PredicateExpr::atom(Dim::A, set(&[1]))
                    .xor(PredicateExpr::atom(Dim::C, set(&[2])).negate()),
            ),
            Proposition::quantified(
                Quantifier::No,
                Dim::C,
                set(&[]),
                PredicateExpr::atom(Dim::A, set(&[0]))
                    .or(PredicateExpr::atom(Dim::B, set(&[1])))
                    .and(PredicateExpr::atom(Dim::B, set(&[2])).negate()),
            ),
            Proposition::thresholded(
                Dim::A,
                set(&[0, 1, 2, 3]),
                PredicateExpr::atom(Dim::B, set(&[])).and(PredicateExpr::atom(Dim::C, set(&[1]))),
                1.0,
                0.0,
            ),
        ];
        for p in cases {
            let text = format_proposition(&p, &d);
            let back = parse_proposition(&text, &d).unwrap();
            assert_eq!(back, p, "round trip failed for {text:?}");
        }
    }

    #[test]
    fn parse_reports_position() {
        let d = dataset();
        let err = parse_proposition("All a{1} are b{9}", &d).unwrap_err();
        assert_eq!(err.pos, 15);
        assert!(err.msg.contains("unknown label"));

        let err = parse_proposition("Most a{1} are b{1}", &d).unwrap_err();
        assert_eq!(err.pos, 0);
    }

    #[test]
    fn parse_rejects_trailing_input() {
        let d = dataset();
        assert!(parse_proposition("All a{1} are b{1} extra", &d).is_err());
    }

    #[test]
    fn quoted_labels_round_trip() {
        let d = TripletDataset::from_labeled(
            [
                vec!["ward 1".into(), "it's".into()],
                vec!["n-1".into()],
                vec!["t0".into()],
            ],
            [["ward 1".into(), "n-1".into(), "t0".into()]],
        )
        .unwrap();
        let p = Proposition::quantified(
            Quantifier::All,
            Dim::A,
            set(&[0, 1]),
            PredicateExpr::atom(Dim::B, set(&[0])).and(PredicateExpr::atom(Dim::C, set(&[0]))),
        );
        let text = format_proposition(&p, &d);
        assert_eq!(text, "All a{'ward 1','it''s'} are b{n-1} and c{t0}");
        assert_eq!(parse_proposition(&text, &d).unwrap(), p);
    }
}
