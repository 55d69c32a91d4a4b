//! Finitely presented groups `<X | R>`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::finite_group::FiniteGroupTable;
use crate::words::{parse_word, Alphabet, GenId, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("torus knot parameters ({m},{n}) are not coprime (gcd = {gcd}); z -> (z^m, z^n) is not an embedding")]
    NotCoprime { m: i64, n: i64, gcd: i64 },
    #[error("parameters must be positive, got ({m},{n})")]
    NonPositive { m: i64, n: i64 },
    #[error("relator uses generator id {0}, which is not in the alphabet")]
    ForeignGenerator(u32),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no image assigned to generator `{0}`")]
    MissingAssignment(String),
    #[error("image {image} of generator `{name}` is not an element of a group of order {order}")]
    BadAssignment { name: String, image: usize, order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    /// Builds `<alphabet | relators>`, dropping empty relators.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for r in &relators {
            if let Some(g) = r.generators().find(|&g| !alphabet.contains(g)) {
                return Err(PresentationError::ForeignGenerator(g.0));
            }
        }
        let relators = relators.into_iter().filter(|r| !r.is_identity()).collect();
        Ok(Presentation { alphabet, relators })
    }

    /// Builds a presentation from relations `lhs = rhs`, each normalized to
    /// the relator `lhs · rhs^-1`.
    pub fn from_relations(
        alphabet: Alphabet,
        relations: Vec<(Word, Word)>,
    ) -> Result<Self, PresentationError> {
        let relators = relations
            .into_iter()
            .map(|(l, r)| l.multiply(&r.inverse()))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(alphabet, relators)
    }

    /// The torus knot group `<a, b | a^m b^-n>`.
    pub fn torus(m: i64, n: i64) -> Result<Self, PresentationError> {
        if m <= 0 || n <= 0 {
            return Err(PresentationError::NonPositive { m, n });
        }
        let gcd = m.gcd(&n);
        if gcd != 1 {
            return Err(PresentationError::NotCoprime { m, n, gcd });
        }
        let alphabet = Alphabet::new(["a", "b"])?;
        let (a, b) = (GenId(0), GenId(1));
        let rel = Word::reduce([(a, m), (b, -n)])?;
        Presentation::new(alphabet, vec![rel])
    }

    /// `<a, b | a^m, b^n>`, the free product of cyclic groups of orders m and n.
    pub fn free_product(m: i64, n: i64) -> Result<Self, PresentationError> {
        if m <= 0 || n <= 0 {
            return Err(PresentationError::NonPositive { m, n });
        }
        let alphabet = Alphabet::new(["a", "b"])?;
        let rels = vec![
            Word::reduce([(GenId(0), m)])?,
            Word::reduce([(GenId(1), n)])?,
        ];
        Presentation::new(alphabet, rels)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn into_parts(self) -> (Alphabet, Vec<Word>) {
        (self.alphabet, self.relators)
    }

    /// Parses a word over this presentation's alphabet.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        parse_word(text, &self.alphabet)
    }

    /// Parses the line-based text format:
    ///
    /// ```text
    /// gens: a b
    /// rel: a^2 = b^3
    /// rel: a b a^-1 b^-1
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut relators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| PresentationError::Syntax {
                line: line_no,
                message,
            };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| syntax(format!("expected `gens:` or `rel:`, found `{line}`")))?;
            match (key.trim(), alphabet.as_ref()) {
                ("gens", None) => {
                    let al = Alphabet::new(rest.split_whitespace())
                        .map_err(|e| syntax(e.to_string()))?;
                    alphabet = Some(al);
                }
                ("gens", Some(_)) => return Err(syntax("duplicate `gens:` line".into())),
                ("rel", Some(al)) => {
                    let mut sides = rest.split('=');
                    let lhs = sides.next().unwrap_or("");
                    let rhs = sides.next();
                    if sides.next().is_some() {
                        return Err(syntax("more than one `=` in relation".into()));
                    }
                    let parse = |s: &str| parse_word(s, al).map_err(|e| syntax(e.to_string()));
                    let mut word = parse(lhs)?;
                    if let Some(rhs) = rhs {
                        word = word
                            .multiply(&parse(rhs)?.inverse())
                            .map_err(|e| syntax(e.to_string()))?;
                    }
                    relators.push(word);
                }
                ("rel", None) => {
                    return Err(syntax("`rel:` before the `gens:` line".into()));
                }
                (other, _) => return Err(syntax(format!("unknown key `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or(PresentationError::Syntax {
            line: 1,
            message: "missing `gens:` line".into(),
        })?;
        Presentation::new(alphabet, relators)
    }

    /// Renders the text format. Generators in alphabet order, relators in
    /// stored order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Evaluates `w` in a finite group, given an image for every generator.
    pub fn evaluate_word(
        &self,
        w: &Word,
        table: &FiniteGroupTable,
        assignment: &BTreeMap<GenId, usize>,
    ) -> Result<usize, PresentationError> {
        for g in self.alphabet.iter() {
            match assignment.get(&g.id) {
                None => return Err(PresentationError::MissingAssignment(g.name.clone())),
                Some(&x) if x >= table.order() => {
                    return Err(PresentationError::BadAssignment {
                        name: g.name.clone(),
                        image: x,
                        order: table.order(),
                    })
                }
                Some(_) => {}
            }
        }
        let mut acc = table.identity();
        for s in w.syllables() {
            let x = *assignment
                .get(&s.gen)
                .ok_or(PresentationError::ForeignGenerator(s.gen.0))?;
            acc = table.mul(acc, table.pow(x, s.exp));
        }
        Ok(acc)
    }
}

/// Evaluates `w` under `assignment` in the finite group `table`.
pub fn evaluate_word_in_quotient(
    p: &Presentation,
    w: &Word,
    table: &FiniteGroupTable,
    assignment: &BTreeMap<GenId, usize>,
) -> Result<usize, PresentationError> {
    p.evaluate_word(w, table, assignment)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("gens:")?;
        for g in self.alphabet.iter() {
            write!(f, " {}", g.name)?;
        }
        writeln!(f)?;
        for r in &self.relators {
            writeln!(f, "rel: {}", r.display(&self.alphabet))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::builtin_table;

    #[test]
    fn torus_presentations() {
        let p = Presentation::torus(2, 3).unwrap();
        assert_eq!(p.to_text(), "gens: a b\nrel: a^2 b^-3\n");
        let p = Presentation::torus(1, 5).unwrap();
        assert_eq!(p.to_text(), "gens: a b\nrel: a b^-5\n");
        assert_eq!(
            Presentation::torus(2, 4),
            Err(PresentationError::NotCoprime { m: 2, n: 4, gcd: 2 })
        );
        assert!(matches!(
            Presentation::torus(0, 3),
            Err(PresentationError::NonPositive { .. })
        ));
        assert!(matches!(
            Presentation::torus(-2, 3),
            Err(PresentationError::NonPositive { .. })
        ));
    }

    #[test]
    fn free_product_presentations() {
        assert_eq!(
            Presentation::free_product(2, 3).unwrap().to_text(),
            "gens: a b\nrel: a^2\nrel: b^3\n"
        );
        assert_eq!(
            Presentation::free_product(1, 1).unwrap().to_text(),
            "gens: a b\nrel: a\nrel: b\n"
        );
        assert_eq!(
            Presentation::free_product(3, 4).unwrap().to_text(),
            "gens: a b\nrel: a^3\nrel: b^4\n"
        );
        // coprimality is not required here
        assert!(Presentation::free_product(4, 6).is_ok());
        assert!(Presentation::free_product(0, 6).is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "# trefoil\ngens: a1 a2 a3\nrel: a1 a2 = a3 a1\nrel: a2 a3 = a1 a2 # second\n\nrel: a3*a1 = a2*a3\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relator_count(), 3);
        assert_eq!(
            p.to_text(),
            "gens: a1 a2 a3\nrel: a1 a2 a1^-1 a3^-1\nrel: a2 a3 a2^-1 a1^-1\nrel: a3 a1 a3^-1 a2^-1\n"
        );
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn trivial_relators_dropped() {
        let p = Presentation::parse("gens: a\nrel: a a^-1\nrel: a = a\n").unwrap();
        assert_eq!(p.relator_count(), 0);
        assert_eq!(p.to_text(), "gens: a\n");
        let empty = Presentation::parse("gens:\n").unwrap();
        assert_eq!(empty.generator_count(), 0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Presentation::parse("gens: a\nrel: a b\n").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 2, .. }), "{err}");
        let err = Presentation::parse("rel: a\n").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 1, .. }));
        let err = Presentation::parse("gens: a\nfoo: a\n").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 2, .. }));
        let err = Presentation::parse("gens: a\nrel: a = a = a\n").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 2, .. }));
        assert!(Presentation::parse("").is_err());
        assert!(Presentation::parse("gens: a a\n").is_err());
    }

    #[test]
    fn foreign_relator_rejected() {
        let al = Alphabet::new(["a"]).unwrap();
        let w = Word::generator(GenId(7));
        assert_eq!(
            Presentation::new(al, vec![w]),
            Err(PresentationError::ForeignGenerator(7))
        );
    }

    #[test]
    fn evaluation_in_s3() {
        let s3 = builtin_table("S3").unwrap();
        let p = Presentation::torus(2, 3).unwrap();
        let transposition = s3.find_permutation(&[1, 0, 2]).unwrap();
        let three_cycle = s3.find_permutation(&[1, 2, 0]).unwrap();
        let assignment: BTreeMap<GenId, usize> =
            [(GenId(0), transposition), (GenId(1), three_cycle)].into();

        let id = Word::identity();
        assert_eq!(p.evaluate_word(&id, &s3, &assignment).unwrap(), s3.identity());
        let a = p.parse_word("a").unwrap();
        assert_eq!(p.evaluate_word(&a, &s3, &assignment).unwrap(), transposition);
        // (1 2)^2 = e and (1 2 3)^3 = e
        let rel = &p.relators()[0];
        assert_eq!(p.evaluate_word(rel, &s3, &assignment).unwrap(), s3.identity());
        let comm = p.parse_word("a b a^-1 b^-1").unwrap();
        assert_ne!(p.evaluate_word(&comm, &s3, &assignment).unwrap(), s3.identity());

        let partial: BTreeMap<GenId, usize> = [(GenId(0), 1)].into();
        assert!(matches!(
            p.evaluate_word(&a, &s3, &partial),
            Err(PresentationError::MissingAssignment(_))
        ));
    }
}
