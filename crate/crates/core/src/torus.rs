//! Normal forms and the word problem for the torus knot groups
//! `G(m,n) = <a, b | a^m = b^n>` and for the free products `Z/m * Z/n`.
//!
//! Both groups are handled by the same rewriting. `c = a^m = b^n` is central
//! in `G(m,n)`, so every syllable `a^k` splits as `c^floor(k/m) a^(k mod m)`
//! (likewise for `b` with `n`). Collecting the powers of `c` in front leaves a
//! strictly alternating word with exponents in `1..m` resp. `1..n`. Dropping
//! the central part gives the reduced form in `Z/m * Z/n = G(m,n)/<c>`.
//!
//! Words are read over the alphabet of [`torus_alphabet`]: `a` is `GenId(0)`
//! and `b` is `GenId(1)`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::words::{Alphabet, GenId, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("parameters must be positive, got ({m},{n})")]
    NonPositive { m: i64, n: i64 },
    #[error("torus knot parameters ({m},{n}) are not coprime (gcd = {gcd})")]
    NotCoprime { m: i64, n: i64, gcd: i64 },
    #[error("generator id {0} is neither a nor b")]
    ForeignGenerator(u32),
    #[error("central exponent overflow")]
    Overflow,
}

pub const A: GenId = GenId(0);
pub const B: GenId = GenId(1);

/// The alphabet `{a, b}` shared by all words in this module.
pub fn torus_alphabet() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("static names")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    fn from_gen(g: GenId) -> Result<Letter, TorusError> {
        match g {
            A => Ok(Letter::A),
            B => Ok(Letter::B),
            other => Err(TorusError::ForeignGenerator(other.0)),
        }
    }

    pub fn gen(self) -> GenId {
        match self {
            Letter::A => A,
            Letter::B => B,
        }
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::B => "b",
        }
    }
}

/// Orders of the two cyclic factors. Coprimality is not required; use
/// [`TorusParams`] for knot groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorOrders {
    pub m: i64,
    pub n: i64,
}

impl FactorOrders {
    pub fn new(m: i64, n: i64) -> Result<Self, TorusError> {
        if m < 1 || n < 1 {
            return Err(TorusError::NonPositive { m, n });
        }
        Ok(FactorOrders { m, n })
    }

    fn modulus(&self, letter: Letter) -> i64 {
        match letter {
            Letter::A => self.m,
            Letter::B => self.n,
        }
    }
}

/// Parameters of a torus knot: `m, n >= 1` with `gcd(m, n) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusParams {
    orders: FactorOrders,
}

impl TorusParams {
    pub fn new(m: i64, n: i64) -> Result<Self, TorusError> {
        let orders = FactorOrders::new(m, n)?;
        let gcd = m.gcd(&n);
        if gcd != 1 {
            return Err(TorusError::NotCoprime { m, n, gcd });
        }
        Ok(TorusParams { orders })
    }

    pub fn m(&self) -> i64 {
        self.orders.m
    }

    pub fn n(&self) -> i64 {
        self.orders.n
    }

    pub fn orders(&self) -> FactorOrders {
        self.orders
    }
}

/// `c^central · syllables` with strictly alternating letters and exponents in
/// `1..m` (for `a`) or `1..n` (for `b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusNormalForm {
    pub central: i64,
    pub syllables: Vec<(Letter, i64)>,
}

/// Strictly alternating syllables with bounded exponents; empty is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeProductNormalForm {
    pub syllables: Vec<(Letter, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

fn write_syllables(f: &mut fmt::Formatter<'_>, syllables: &[(Letter, i64)]) -> fmt::Result {
    for (i, (letter, e)) in syllables.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(letter.name())?;
        if *e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for TorusNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.central, self.syllables.is_empty()) {
            (0, true) => f.write_str("e"),
            (0, false) => write_syllables(f, &self.syllables),
            (t, true) => write!(f, "c^{t}"),
            (t, false) => {
                write!(f, "c^{t} · ")?;
                write_syllables(f, &self.syllables)
            }
        }
    }
}

impl fmt::Display for FreeProductNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            f.write_str("e")
        } else {
            write_syllables(f, &self.syllables)
        }
    }
}

impl FreeProductNormalForm {
    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::reduce(self.syllables.iter().map(|&(l, e)| (l.gen(), e)))
            .expect("bounded exponents")
    }
}

impl TorusNormalForm {
    pub fn is_identity(&self) -> bool {
        self.central == 0 && self.syllables.is_empty()
    }

    /// The word `a^(m·central) · syllables` representing this element.
    pub fn to_word(&self, params: &TorusParams) -> Result<Word, TorusError> {
        let c = self
            .central
            .checked_mul(params.m())
            .ok_or(TorusError::Overflow)?;
        Word::reduce(
            std::iter::once((A, c)).chain(self.syllables.iter().map(|&(l, e)| (l.gen(), e))),
        )
        .map_err(|_| TorusError::Overflow)
    }
}

/// Stack-based rewriting shared by both normal forms. Returns the accumulated
/// central exponent and the alternating syllables.
fn rewrite(orders: FactorOrders, w: &Word) -> Result<(i64, Vec<(Letter, i64)>), TorusError> {
    let mut central: i64 = 0;
    let mut stack: Vec<(Letter, i64)> = Vec::new();
    for s in w.syllables() {
        let letter = Letter::from_gen(s.gen)?;
        let modulus = orders.modulus(letter);
        // merge with a same-letter top; residues are < modulus so this cannot overflow
        let (exp, carry) = match stack.last() {
            Some(&(top, e)) if top == letter => {
                stack.pop();
                let (q1, r1) = (s.exp.div_euclid(modulus), s.exp.rem_euclid(modulus));
                let merged = r1 + e;
                (merged.rem_euclid(modulus), q1 + merged.div_euclid(modulus))
            }
            _ => (s.exp.rem_euclid(modulus), s.exp.div_euclid(modulus)),
        };
        central = central.checked_add(carry).ok_or(TorusError::Overflow)?;
        if exp != 0 {
            stack.push((letter, exp));
        }
    }
    Ok((central, stack))
}

/// Normal form of `w` in `G(m,n)`. Two words are equal in the group iff their
/// normal forms are identical.
pub fn torus_normal_form(params: &TorusParams, w: &Word) -> Result<TorusNormalForm, TorusError> {
    let (central, syllables) = rewrite(params.orders, w)?;
    Ok(TorusNormalForm { central, syllables })
}

pub fn words_equal_in_torus_group(
    params: &TorusParams,
    u: &Word,
    v: &Word,
) -> Result<bool, TorusError> {
    Ok(torus_normal_form(params, u)? == torus_normal_form(params, v)?)
}

/// Center membership. For `m, n >= 2` the center of `G(m,n)` is `<c>`, so
/// this tests for an empty syllable list. When `m = 1` or `n = 1` the group is
/// infinite cyclic and every element is central.
pub fn is_central(params: &TorusParams, w: &Word) -> Result<bool, TorusError> {
    let nf = torus_normal_form(params, w)?;
    Ok(params.m() == 1 || params.n() == 1 || nf.syllables.is_empty())
}

/// Reduced form of `w` in `Z/m * Z/n`.
pub fn free_product_normal_form(
    orders: FactorOrders,
    w: &Word,
) -> Result<FreeProductNormalForm, TorusError> {
    let (_, syllables) = rewrite(orders, w)?;
    Ok(FreeProductNormalForm { syllables })
}

/// Conjugates a reduced free-product word to its cyclically reduced core:
/// while the first and last syllables share a letter, fold the first into the
/// last.
pub fn cyclic_core(orders: FactorOrders, nf: &FreeProductNormalForm) -> FreeProductNormalForm {
    let mut syl: std::collections::VecDeque<(Letter, i64)> = nf.syllables.iter().copied().collect();
    while syl.len() >= 2 && syl[0].0 == syl[syl.len() - 1].0 {
        let (letter, first) = syl.pop_front().unwrap();
        let (_, last) = syl.pop_back().unwrap();
        let e = (first + last).rem_euclid(orders.modulus(letter));
        if e != 0 {
            syl.push_back((letter, e));
        }
    }
    FreeProductNormalForm {
        syllables: syl.into_iter().collect(),
    }
}

fn order_of_reduced(orders: FactorOrders, nf: &FreeProductNormalForm) -> Order {
    let core = cyclic_core(orders, nf);
    match core.syllables.as_slice() {
        [] => Order::Finite(1),
        [(letter, e)] => {
            let modulus = orders.modulus(*letter);
            Order::Finite((modulus / modulus.gcd(e)) as u64)
        }
        _ => Order::Infinite,
    }
}

/// Order of the image of `w` in `Z/m * Z/n`. Every element of finite order is
/// conjugate into one of the factors, so a cyclic core of two or more
/// syllables means infinite order.
pub fn order_in_free_product(orders: FactorOrders, w: &Word) -> Result<Order, TorusError> {
    Ok(order_of_reduced(orders, &free_product_normal_form(orders, w)?))
}

/// All reduced words of `Z/m * Z/n` with exactly `len` syllables, in
/// lexicographic order (first letter `a` before `b`, then exponents).
pub fn reduced_words_of_length(orders: FactorOrders, len: usize) -> Vec<FreeProductNormalForm> {
    let mut out = Vec::new();
    if len == 0 {
        out.push(FreeProductNormalForm { syllables: vec![] });
        return out;
    }
    for start in [Letter::A, Letter::B] {
        let mut current = Vec::with_capacity(len);
        extend_words(orders, start, len, &mut current, &mut out);
    }
    out
}

fn extend_words(
    orders: FactorOrders,
    letter: Letter,
    remaining: usize,
    current: &mut Vec<(Letter, i64)>,
    out: &mut Vec<FreeProductNormalForm>,
) {
    if remaining == 0 {
        out.push(FreeProductNormalForm {
            syllables: current.clone(),
        });
        return;
    }
    for e in 1..orders.modulus(letter) {
        current.push((letter, e));
        extend_words(orders, letter.other(), remaining - 1, current, out);
        current.pop();
    }
}

/// Largest finite order among nonidentity reduced words of `Z/m * Z/n` with
/// at most `max_len` syllables.
pub fn max_torsion_order(m: i64, n: i64, max_len: usize) -> Result<u64, TorusError> {
    let orders = FactorOrders::new(m, n)?;
    let best = (1..=max_len)
        .into_par_iter()
        .flat_map_iter(|len| reduced_words_of_length(orders, len))
        .filter_map(|w| match order_of_reduced(orders, &w) {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        })
        .max()
        .unwrap_or(1);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(text: &str) -> Word {
        parse_word(text, &torus_alphabet()).unwrap()
    }

    fn p(m: i64, n: i64) -> TorusParams {
        TorusParams::new(m, n).unwrap()
    }

    fn fp(m: i64, n: i64) -> FactorOrders {
        FactorOrders::new(m, n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(TorusParams::new(2, 3).is_ok());
        assert_eq!(
            TorusParams::new(2, 4),
            Err(TorusError::NotCoprime { m: 2, n: 4, gcd: 2 })
        );
        assert!(matches!(TorusParams::new(0, 1), Err(TorusError::NonPositive { .. })));
        assert!(FactorOrders::new(4, 6).is_ok());
    }

    #[test]
    fn relator_is_identity() {
        let nf = torus_normal_form(&p(2, 3), &w("a^2 b^-3")).unwrap();
        assert!(nf.is_identity());
        assert_eq!(nf.to_string(), "e");
    }

    #[test]
    fn c_is_a_squared_and_b_cubed() {
        let c = TorusNormalForm {
            central: 1,
            syllables: vec![],
        };
        assert_eq!(torus_normal_form(&p(2, 3), &w("a^2")).unwrap(), c);
        assert_eq!(torus_normal_form(&p(2, 3), &w("b^3")).unwrap(), c);
        assert_eq!(c.to_string(), "c^1");
    }

    #[test]
    fn commutator_not_trivial() {
        let nf = torus_normal_form(&p(2, 3), &w("a b a^-1 b^-1")).unwrap();
        assert!(!nf.is_identity());
        // a^-1 = c^-1 a, b^-1 = c^-1 b^2
        assert_eq!(nf.central, -2);
        assert_eq!(
            nf.syllables,
            vec![(Letter::A, 1), (Letter::B, 1), (Letter::A, 1), (Letter::B, 2)]
        );
        assert_eq!(nf.to_string(), "c^-2 · a b a b^2");
    }

    #[test]
    fn degenerate_m_one() {
        let params = p(1, 5);
        for text in ["a b a^3 b^-7", "b^2 a^-1 b", "a^4", "b^13 a b^-2"] {
            let nf = torus_normal_form(&params, &w(text)).unwrap();
            assert!(nf.syllables.iter().all(|&(l, _)| l == Letter::B), "{text}");
            assert!(nf.syllables.len() <= 1);
            assert!(is_central(&params, &w(text)).unwrap());
        }
    }

    #[test]
    fn word_problem_examples() {
        let params = p(2, 3);
        assert!(words_equal_in_torus_group(&params, &w("a^2 b^3"), &w("b^6")).unwrap());
        assert!(words_equal_in_torus_group(&params, &w("a b"), &w("a b")).unwrap());
        assert!(!words_equal_in_torus_group(&params, &w("a b"), &w("b a")).unwrap());
        assert_eq!(
            torus_normal_form(&params, &w("b^6")).unwrap(),
            TorusNormalForm {
                central: 2,
                syllables: vec![]
            }
        );
    }

    #[test]
    fn center_membership() {
        let params = p(2, 3);
        assert!(is_central(&params, &w("a^2")).unwrap());
        assert!(!is_central(&params, &w("a")).unwrap());
        assert!(is_central(&params, &w("b^6")).unwrap());
        assert!(is_central(&params, &w("b a^2 b^-1")).unwrap());
    }

    #[test]
    fn foreign_generator() {
        let al = Alphabet::new(["a", "b", "x"]).unwrap();
        let word = parse_word("a x", &al).unwrap();
        assert_eq!(
            torus_normal_form(&p(2, 3), &word),
            Err(TorusError::ForeignGenerator(2))
        );
        assert!(order_in_free_product(fp(2, 3), &word).is_err());
    }

    #[test]
    fn free_product_forms() {
        let orders = fp(2, 3);
        let nf = |t: &str| free_product_normal_form(orders, &w(t)).unwrap();
        assert_eq!(nf("a^3 b^4").syllables, vec![(Letter::A, 1), (Letter::B, 1)]);
        assert!(nf("a a").is_identity());
        assert_eq!(
            nf("b a b^2 a b").syllables,
            vec![
                (Letter::B, 1),
                (Letter::A, 1),
                (Letter::B, 2),
                (Letter::A, 1),
                (Letter::B, 1)
            ]
        );
        assert_eq!(nf("b a b^-1").to_string(), "b a b^2");
    }

    #[test]
    fn orders() {
        let ord = |m, n, t: &str| order_in_free_product(fp(m, n), &w(t)).unwrap();
        assert_eq!(ord(2, 3, "a"), Order::Finite(2));
        assert_eq!(ord(2, 3, "b a b^-1"), Order::Finite(2));
        assert_eq!(ord(2, 3, "a b"), Order::Infinite);
        assert_eq!(ord(6, 4, "b^2"), Order::Finite(2));
        assert_eq!(ord(6, 4, "a^4"), Order::Finite(3));
        assert_eq!(ord(2, 3, ""), Order::Finite(1));
        assert_eq!(ord(2, 3, "a b a b"), Order::Infinite);
        // b (a b a b^-1 a) b^-1 folds down to a single a
        assert_eq!(ord(2, 3, "b a b a b^-1 a b^-1"), Order::Finite(2));
    }

    #[test]
    fn max_torsion() {
        assert_eq!(max_torsion_order(2, 3, 4).unwrap(), 3);
        assert_eq!(max_torsion_order(5, 2, 3).unwrap(), 5);
        assert_eq!(max_torsion_order(2, 2, 1).unwrap(), 2);
    }

    #[test]
    fn enumeration_counts() {
        // (m-1)(n-1)... alternating: for (2,3) length 2 gives a b, a b^2, b a, b^2 a
        let orders = fp(2, 3);
        assert_eq!(reduced_words_of_length(orders, 1).len(), 3);
        assert_eq!(reduced_words_of_length(orders, 2).len(), 4);
        assert_eq!(reduced_words_of_length(orders, 3).len(), 6);
        assert_eq!(reduced_words_of_length(orders, 0).len(), 1);
    }
}
