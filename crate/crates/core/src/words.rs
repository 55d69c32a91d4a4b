//! Words over a finite alphabet of generators, stored in syllable form.
//!
//! A [`Word`] is always freely reduced: adjacent syllables carry distinct
//! generators and no exponent is zero. Exponents are `i64`; every merge is
//! checked and overflow surfaces as [`WordError::ExponentOverflow`]. The value
//! `i64::MIN` is never stored, so negation (and therefore inversion) is total.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in `{0}`")]
    MalformedExponent(String),
    #[error("empty token at byte {0}")]
    EmptyToken(usize),
    #[error("unexpected character `{ch}` at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("invalid generator name `{0}` (expected a letter followed by optional digits)")]
    InvalidName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator id {0} is not in the alphabet")]
    ForeignGenerator(u32),
    #[error("word would exceed {MAX_SYLLABLES} syllables")]
    TooLong,
}

/// Upper bound on the syllable length of a power computed by [`Word::pow`].
pub const MAX_SYLLABLES: usize = 1 << 24;

/// Interned generator index. Ids are unique within an [`Alphabet`] and are
/// never reused, even after a generator is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    pub name: String,
}

/// `true` iff `name` is an ASCII letter followed by ASCII digits.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

/// Ordered set of generators.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    gens: Vec<Generator>,
    next_id: u32,
}

// equality ignores the id allocation counter
impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut alphabet = Alphabet::default();
        for name in names {
            alphabet.push(name.as_ref())?;
        }
        Ok(alphabet)
    }

    /// Appends a generator and returns its fresh id.
    pub fn push(&mut self, name: &str) -> Result<GenId, WordError> {
        if !is_valid_name(name) {
            return Err(WordError::InvalidName(name.to_string()));
        }
        if self.id_of(name).is_some() {
            return Err(WordError::DuplicateName(name.to_string()));
        }
        let id = GenId(self.next_id);
        self.next_id += 1;
        self.gens.push(Generator {
            id,
            name: name.to_string(),
        });
        Ok(id)
    }

    pub fn remove(&mut self, id: GenId) -> Option<Generator> {
        let pos = self.gens.iter().position(|g| g.id == id)?;
        Some(self.gens.remove(pos))
    }

    pub fn id_of(&self, name: &str) -> Option<GenId> {
        self.gens.iter().find(|g| g.name == name).map(|g| g.id)
    }

    pub fn name_of(&self, id: GenId) -> Option<&str> {
        self.gens
            .iter()
            .find(|g| g.id == id)
            .map(|g| g.name.as_str())
    }

    pub fn contains(&self, id: GenId) -> bool {
        self.gens.iter().any(|g| g.id == id)
    }

    /// Position of `id` in alphabet order.
    pub fn position(&self, id: GenId) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> + '_ {
        self.gens.iter().map(|g| g.id)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub gen: GenId,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: GenId, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(gen: GenId) -> Self {
        Word {
            syllables: vec![Syllable::new(gen, 1)],
        }
    }

    /// Freely reduces an arbitrary sequence of `(generator, exponent)` pairs.
    /// Zero exponents and adjacent equal generators are allowed in the input.
    pub fn reduce<I>(raw: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = (GenId, i64)>,
    {
        let mut out: Vec<Syllable> = Vec::new();
        for (gen, exp) in raw {
            push_syllable(&mut out, gen, exp)?;
        }
        Ok(Word { syllables: out })
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    /// Length counted in letters, i.e. the sum of absolute exponents.
    pub fn letter_len(&self) -> u128 {
        self.syllables
            .iter()
            .map(|s| s.exp.unsigned_abs() as u128)
            .sum()
    }

    pub fn exponent_sum(&self, gen: GenId) -> i128 {
        self.syllables
            .iter()
            .filter(|s| s.gen == gen)
            .map(|s| s.exp as i128)
            .sum()
    }

    /// Number of letters of `gen` (counting `g` and `g^-1` alike).
    pub fn letter_count(&self, gen: GenId) -> u128 {
        self.syllables
            .iter()
            .filter(|s| s.gen == gen)
            .map(|s| s.exp.unsigned_abs() as u128)
            .sum()
    }

    pub fn contains(&self, gen: GenId) -> bool {
        self.syllables.iter().any(|s| s.gen == gen)
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> + '_ {
        self.syllables.iter().map(|s| s.gen)
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        let mut out = self.syllables.clone();
        for s in &other.syllables {
            push_syllable(&mut out, s.gen, s.exp)?;
        }
        Ok(Word { syllables: out })
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.gen, -s.exp))
                .collect(),
        }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: i64) -> Result<Word, WordError> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut k = k.unsigned_abs();
        if self.syllable_len() > 1
            && (self.syllable_len() as u128) * (k as u128) > MAX_SYLLABLES as u128
        {
            return Err(WordError::TooLong);
        }
        let mut acc = Word::identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.multiply(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `g · self · g^-1`
    pub fn conjugate_by(&self, g: &Word) -> Result<Word, WordError> {
        g.multiply(self)?.multiply(&g.inverse())
    }

    /// Splits `self = y · core · y^-1` with `core` cyclically reduced, i.e. the
    /// first and last syllables of `core` do not cancel against each other.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let mut core: std::collections::VecDeque<Syllable> =
            self.syllables.iter().copied().collect();
        let mut conj: Vec<Syllable> = Vec::new();
        while core.len() >= 2 {
            let first = core[0];
            let last = core[core.len() - 1];
            if first.gen != last.gen || first.exp.signum() == last.exp.signum() {
                break;
            }
            let k = first.exp.abs().min(last.exp.abs()) * first.exp.signum();
            conj.push(Syllable::new(first.gen, k));
            let f = first.exp - k;
            let l = last.exp + k;
            core.pop_front();
            core.pop_back();
            if l != 0 {
                core.push_back(Syllable::new(last.gen, l));
            }
            if f != 0 {
                core.push_front(Syllable::new(first.gen, f));
            }
        }
        let y = Word::reduce(conj.into_iter().map(|s| (s.gen, s.exp)))
            .expect("conjugator exponents are bounded by the input");
        (
            Word {
                syllables: core.into_iter().collect(),
            },
            y,
        )
    }

    /// Replaces every occurrence of `gen` by `replacement` (powers included).
    pub fn substitute(&self, gen: GenId, replacement: &Word) -> Result<Word, WordError> {
        let mut out = Word::identity();
        for s in &self.syllables {
            let piece = if s.gen == gen {
                replacement.pow(s.exp)?
            } else {
                Word {
                    syllables: vec![*s],
                }
            };
            out = out.multiply(&piece)?;
        }
        Ok(out)
    }

    /// Applies a generator renaming; the result is re-reduced since two
    /// generators may be mapped to the same one.
    pub fn map_generators<F: Fn(GenId) -> GenId>(&self, f: F) -> Result<Word, WordError> {
        Word::reduce(self.syllables.iter().map(|s| (f(s.gen), s.exp)))
    }

    /// Renders the word with generator names from `alphabet`. The identity
    /// prints as `1`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        self.display(alphabet).to_string()
    }
}

fn push_syllable(out: &mut Vec<Syllable>, gen: GenId, exp: i64) -> Result<(), WordError> {
    if exp == i64::MIN {
        return Err(WordError::ExponentOverflow);
    }
    if exp == 0 {
        return Ok(());
    }
    match out.last_mut() {
        Some(last) if last.gen == gen => {
            let merged = last
                .exp
                .checked_add(exp)
                .filter(|&e| e != i64::MIN)
                .ok_or(WordError::ExponentOverflow)?;
            if merged == 0 {
                out.pop();
            } else {
                last.exp = merged;
            }
        }
        _ => out.push(Syllable::new(gen, exp)),
    }
    Ok(())
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, s) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.alphabet.name_of(s.gen) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "?{}", s.gen.0)?,
            }
            if s.exp != 1 {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

/// Parses word notation: `gen`, `gen^k`, `gen^-k`, juxtaposed with optional
/// whitespace or `*` separators. `1` (or an empty string) denotes the identity.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, WordError> {
    let names: HashMap<&str, GenId> = alphabet.iter().map(|g| (g.name.as_str(), g.id)).collect();
    let bytes = text.as_bytes();
    let mut raw = Vec::new();
    let mut pos = 0;
    // a `*` must sit between two tokens
    let mut pending_star: Option<usize> = None;
    let mut seen_token = false;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if c == b'*' {
            if !seen_token || pending_star.is_some() {
                return Err(WordError::EmptyToken(pos));
            }
            pending_star = Some(pos);
            pos += 1;
            continue;
        }
        let start = pos;
        if c == b'1' {
            pos += 1;
            if pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
                return Err(WordError::UnexpectedChar {
                    ch: bytes[pos] as char,
                    pos,
                });
            }
        } else if c.is_ascii_alphabetic() {
            pos += 1;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let name = &text[start..pos];
            let gen = *names
                .get(name)
                .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
            let mut exp = 1i64;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let exp_start = pos;
                if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                    pos += 1;
                }
                let digits_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if digits_start == pos {
                    let end = (pos + 1).min(bytes.len());
                    return Err(WordError::MalformedExponent(
                        text[start..end].to_string(),
                    ));
                }
                exp = text[exp_start..pos]
                    .parse::<i64>()
                    .map_err(|_| WordError::ExponentOverflow)?;
            }
            raw.push((gen, exp));
        } else {
            let ch = text[pos..].chars().next().unwrap_or('?');
            return Err(WordError::UnexpectedChar { ch, pos });
        }
        seen_token = true;
        pending_star = None;
    }
    if let Some(p) = pending_star {
        return Err(WordError::EmptyToken(p + 1));
    }
    Word::reduce(raw)
}
