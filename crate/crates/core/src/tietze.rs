//! Tietze transformations and a deterministic simplifier built on them.
//!
//! Every move is verified when applied: relation additions and removals carry
//! an explicit derivation as a product of conjugates of the other relators,
//! which must agree with the target relator in the free group. Relators that
//! reduce to the identity after a move are dropped immediately.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::presentation::Presentation;
use crate::words::{is_valid_name, Alphabet, GenId, Syllable, Word, WordError};

/// One factor `conjugator · r^{±1} · conjugator^-1` of a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub relator: usize,
    pub conjugator: Word,
    pub inverted: bool,
}

impl DerivationStep {
    pub fn new(relator: usize, conjugator: Word, inverted: bool) -> Self {
        DerivationStep {
            relator,
            conjugator,
            inverted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TietzeMove {
    /// Appends `consequence`, which must equal the derivation product.
    AddRelation {
        consequence: Word,
        derivation: Vec<DerivationStep>,
    },
    /// Deletes relator `index`, which must equal the derivation product over
    /// the remaining relators.
    RemoveRelation {
        index: usize,
        derivation: Vec<DerivationStep>,
    },
    /// Replaces relator `index` by `conjugator · r^{±1} · conjugator^-1` in
    /// place; the composite of an addition and a removal.
    ConjugateRelator {
        index: usize,
        conjugator: Word,
        inverted: bool,
    },
    /// Appends a generator `name` together with the relator `name · definition^-1`.
    AddGenerator { name: String, definition: Word },
    /// Solves relator `relator` for `generator` (which must occur in it exactly
    /// once, with exponent ±1), substitutes the solution everywhere else and
    /// deletes both.
    RemoveGenerator { generator: GenId, relator: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {index}: {reason}")]
pub struct TietzeError {
    /// Zero-based position of the failing move in the script.
    pub index: usize,
    pub reason: MoveError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("relator index {0} out of range")]
    NoSuchRelator(usize),
    #[error("generator id {0} is not in the alphabet")]
    NoSuchGenerator(u32),
    #[error("derivation references the relator being removed ({0})")]
    SelfReference(usize),
    #[error("derivation product does not equal the relator")]
    DerivationMismatch,
    #[error("generator name `{0}` is invalid or already in use")]
    NameCollision(String),
    #[error("definition uses a generator outside the alphabet")]
    ForeignDefinition,
    #[error("generator `{0}` does not occur exactly once with exponent ±1 in the relator")]
    NotDefining(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Applies `script` move by move.
pub fn apply_tietze(p: &Presentation, script: &[TietzeMove]) -> Result<Presentation, TietzeError> {
    let mut current = p.clone();
    for (index, mv) in script.iter().enumerate() {
        current = apply_move(&current, mv).map_err(|reason| TietzeError { index, reason })?;
    }
    Ok(current)
}

fn derivation_product(relators: &[Word], steps: &[DerivationStep]) -> Result<Word, MoveError> {
    let mut acc = Word::identity();
    for step in steps {
        let r = relators
            .get(step.relator)
            .ok_or(MoveError::NoSuchRelator(step.relator))?;
        let r = if step.inverted { r.inverse() } else { r.clone() };
        acc = acc.multiply(&r.conjugate_by(&step.conjugator)?)?;
    }
    Ok(acc)
}

fn check_alphabet(w: &Word, alphabet: &Alphabet) -> Result<(), MoveError> {
    match w.generators().find(|&g| !alphabet.contains(g)) {
        Some(g) => Err(MoveError::NoSuchGenerator(g.0)),
        None => Ok(()),
    }
}

/// Solves a relator for a generator occurring in it exactly once: returns
/// `w` with `g = w`.
fn solve_for(relator: &Word, g: GenId) -> Option<Result<Word, WordError>> {
    if relator.letter_count(g) != 1 {
        return None;
    }
    let syl = relator.syllables();
    let j = syl.iter().position(|s| s.gen == g)?;
    let rest = syl[j + 1..].iter().chain(&syl[..j]).map(|s| (s.gen, s.exp));
    // relator ~ g^e · rest, so g^e = rest^-1
    Some(Word::reduce(rest).map(|rest| {
        if syl[j].exp == 1 {
            rest.inverse()
        } else {
            rest
        }
    }))
}

pub fn apply_move(p: &Presentation, mv: &TietzeMove) -> Result<Presentation, MoveError> {
    let (mut alphabet, mut relators) = p.clone().into_parts();
    match mv {
        TietzeMove::AddRelation {
            consequence,
            derivation,
        } => {
            check_alphabet(consequence, &alphabet)?;
            for step in derivation {
                check_alphabet(&step.conjugator, &alphabet)?;
            }
            if &derivation_product(&relators, derivation)? != consequence {
                return Err(MoveError::DerivationMismatch);
            }
            relators.push(consequence.clone());
        }
        TietzeMove::RemoveRelation { index, derivation } => {
            let target = relators.get(*index).ok_or(MoveError::NoSuchRelator(*index))?;
            for step in derivation {
                if step.relator == *index {
                    return Err(MoveError::SelfReference(*index));
                }
                check_alphabet(&step.conjugator, &alphabet)?;
            }
            if &derivation_product(&relators, derivation)? != target {
                return Err(MoveError::DerivationMismatch);
            }
            relators.remove(*index);
        }
        TietzeMove::ConjugateRelator {
            index,
            conjugator,
            inverted,
        } => {
            check_alphabet(conjugator, &alphabet)?;
            let r = relators.get(*index).ok_or(MoveError::NoSuchRelator(*index))?;
            let r = if *inverted { r.inverse() } else { r.clone() };
            relators[*index] = r.conjugate_by(conjugator)?;
        }
        TietzeMove::AddGenerator { name, definition } => {
            if !is_valid_name(name) || alphabet.id_of(name).is_some() {
                return Err(MoveError::NameCollision(name.clone()));
            }
            if definition.generators().any(|g| !alphabet.contains(g)) {
                return Err(MoveError::ForeignDefinition);
            }
            let id = alphabet.push(name)?;
            relators.push(Word::generator(id).multiply(&definition.inverse())?);
        }
        TietzeMove::RemoveGenerator { generator, relator } => {
            let name = alphabet
                .name_of(*generator)
                .ok_or(MoveError::NoSuchGenerator(generator.0))?
                .to_string();
            let r = relators.get(*relator).ok_or(MoveError::NoSuchRelator(*relator))?;
            let value = solve_for(r, *generator).ok_or(MoveError::NotDefining(name))??;
            relators.remove(*relator);
            relators = relators
                .iter()
                .map(|w| w.substitute(*generator, &value))
                .collect::<Result<_, _>>()?;
            alphabet.remove(*generator);
        }
    }
    Ok(Presentation::new(alphabet, relators).expect("moves keep relators inside the alphabet"))
}

/// Merges the end syllables of a cyclically reduced word when they share a
/// generator. Returns the merged word `m` and `c` with `m = c · w · c^-1`.
/// Ends whose exponent sum overflows are left unmerged.
fn merge_ends(w: &Word) -> (Vec<Syllable>, Word) {
    let syl = w.syllables();
    let merged_exp = match (syl.first(), syl.last()) {
        (Some(f), Some(l)) if syl.len() >= 2 && f.gen == l.gen => f.exp.checked_add(l.exp),
        _ => None,
    };
    if let Some(exp) = merged_exp.filter(|&e| e != i64::MIN) {
        let last = syl[syl.len() - 1];
        let mut merged = vec![Syllable::new(last.gen, exp)];
        merged.extend_from_slice(&syl[1..syl.len() - 1]);
        (merged, Word::reduce([(last.gen, last.exp)]).unwrap())
    } else {
        (syl.to_vec(), Word::identity())
    }
}

/// Canonical representative of the cyclic word of `w` up to rotation and
/// inversion. `w` must be cyclically reduced.
fn cyclic_key(w: &Word) -> Vec<Syllable> {
    let mut best: Option<Vec<Syllable>> = None;
    for candidate in [w.clone(), w.inverse()] {
        let (m, _) = merge_ends(&candidate);
        for s in 0..m.len().max(1) {
            let rot: Vec<Syllable> = m[s..].iter().chain(&m[..s]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// For cyclically reduced `u`, `v`: some `c` with `v = c · u · c^-1` when `v`
/// is a cyclic rotation of `u`.
fn rotation_conjugator(u: &Word, v: &Word) -> Option<Word> {
    let (mu, cu) = merge_ends(u);
    let (mv, cv) = merge_ends(v);
    if mu.len() != mv.len() {
        return None;
    }
    if mu.is_empty() {
        return Some(Word::identity());
    }
    for s in 0..mu.len() {
        let rot = mu[s..].iter().chain(&mu[..s]);
        if rot.copied().eq(mv.iter().copied()) {
            // mv = P^-1 · mu · P with P = mu[..s]
            let prefix = Word::reduce(mu[..s].iter().map(|x| (x.gen, x.exp))).ok()?;
            let c = cv
                .inverse()
                .multiply(&prefix.inverse())
                .ok()?
                .multiply(&cu)
                .ok()?;
            return Some(c);
        }
    }
    None
}

/// Deterministic simplification. Each round: conjugate every relator to its
/// cyclically reduced core, delete relators duplicating an earlier one up to
/// rotation and inversion, then eliminate one generator occurring exactly once
/// (with exponent ±1) in some relator. The shortest such relator wins, ties
/// broken by lowest generator id and then lowest relator index. Stops when no
/// generator qualifies.
///
/// Returns the simplified presentation and the script that produces it from
/// `p` via [`apply_tietze`].
pub fn auto_simplify(p: &Presentation) -> (Presentation, Vec<TietzeMove>) {
    let mut current = p.clone();
    let mut script = Vec::new();
    let mut push = |current: &mut Presentation, mv: TietzeMove| {
        *current = apply_move(current, &mv).expect("simplifier emits applicable moves");
        script.push(mv);
    };
    loop {
        for i in 0..current.relator_count() {
            let (_, y) = current.relators()[i].cyclically_reduce();
            if !y.is_identity() {
                push(
                    &mut current,
                    TietzeMove::ConjugateRelator {
                        index: i,
                        conjugator: y.inverse(),
                        inverted: false,
                    },
                );
            }
        }

        'dedup: loop {
            let mut seen: BTreeMap<Vec<Syllable>, usize> = BTreeMap::new();
            for (j, r) in current.relators().iter().enumerate() {
                let key = cyclic_key(r);
                if let Some(&i) = seen.get(&key) {
                    let earlier = &current.relators()[i];
                    let step = match rotation_conjugator(earlier, r) {
                        Some(c) => DerivationStep::new(i, c, false),
                        None => match rotation_conjugator(&earlier.inverse(), r) {
                            Some(c) => DerivationStep::new(i, c, true),
                            // only reachable when unmerged ends disagree
                            None => continue,
                        },
                    };
                    push(
                        &mut current,
                        TietzeMove::RemoveRelation {
                            index: j,
                            derivation: vec![step],
                        },
                    );
                    continue 'dedup;
                }
                seen.insert(key, j);
            }
            break;
        }

        let mut best: Option<(u128, GenId, usize)> = None;
        for (i, r) in current.relators().iter().enumerate() {
            for g in current.alphabet().ids() {
                if r.letter_count(g) == 1 {
                    let key = (r.letter_len(), g, i);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        match best {
            Some((_, generator, relator)) => push(
                &mut current,
                TietzeMove::RemoveGenerator { generator, relator },
            ),
            None => break,
        }
    }
    (current, script)
}

/// Human-readable rendering of a script, replayed from `initial` so that
/// generator names and solved definitions are shown as they were at each
/// step. Relator indices are printed 1-based.
pub fn describe_script(
    initial: &Presentation,
    script: &[TietzeMove],
) -> Result<Vec<String>, TietzeError> {
    let mut current = initial.clone();
    let mut lines = Vec::with_capacity(script.len());
    for (index, mv) in script.iter().enumerate() {
        let al = current.alphabet();
        let steps = |d: &[DerivationStep]| {
            d.iter()
                .map(|s| {
                    let r = format!("r{}{}", s.relator + 1, if s.inverted { "^-1" } else { "" });
                    if s.conjugator.is_identity() {
                        r
                    } else {
                        let c = s.conjugator.display(al);
                        format!("({c}) {r} ({c})^-1")
                    }
                })
                .collect::<Vec<_>>()
                .join(" · ")
        };
        let line = match mv {
            TietzeMove::AddRelation {
                consequence,
                derivation,
            } => format!(
                "add relator {} = {}",
                consequence.display(al),
                steps(derivation)
            ),
            TietzeMove::RemoveRelation { index: i, derivation } => {
                if derivation.is_empty() {
                    format!("remove r{} (trivial)", i + 1)
                } else {
                    format!("remove r{} = {}", i + 1, steps(derivation))
                }
            }
            TietzeMove::ConjugateRelator {
                index: i,
                conjugator,
                inverted,
            } => format!(
                "replace r{} by ({}) r{}{} ({})^-1",
                i + 1,
                conjugator.display(al),
                i + 1,
                if *inverted { "^-1" } else { "" },
                conjugator.display(al)
            ),
            TietzeMove::AddGenerator { name, definition } => {
                format!("add generator {} = {}", name, definition.display(al))
            }
            TietzeMove::RemoveGenerator { generator, relator } => {
                let name = al.name_of(*generator).unwrap_or("?");
                match current
                    .relators()
                    .get(*relator)
                    .and_then(|r| solve_for(r, *generator))
                {
                    Some(Ok(value)) => format!(
                        "eliminate {} = {} using r{}",
                        name,
                        value.display(al),
                        relator + 1
                    ),
                    _ => format!("eliminate {} using r{}", name, relator + 1),
                }
            }
        };
        lines.push(line);
        current = apply_move(&current, mv).map_err(|reason| TietzeError { index, reason })?;
    }
    Ok(lines)
}

/// `true` when `u` and `v` are equal up to cyclic rotation and inversion.
/// Both must be cyclically reduced.
pub fn cyclically_equivalent(u: &Word, v: &Word) -> bool {
    cyclic_key(u) == cyclic_key(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    const TREFOIL: &str =
        "gens: a1 a2 a3\nrel: a1 a2 = a3 a1\nrel: a2 a3 = a1 a2\nrel: a3 a1 = a2 a3\n";

    #[test]
    fn empty_script_is_identity() {
        let p = pres(TREFOIL);
        assert_eq!(apply_tietze(&p, &[]).unwrap(), p);
    }

    #[test]
    fn trefoil_manual_elimination() {
        let p = pres(TREFOIL);
        let a3 = p.alphabet().id_of("a3").unwrap();
        let q = apply_tietze(
            &p,
            &[TietzeMove::RemoveGenerator {
                generator: a3,
                relator: 0,
            }],
        )
        .unwrap();
        assert_eq!(q.generator_count(), 2);
        // the two substituted relators are inverse to each other
        assert_eq!(q.relators()[1], q.relators()[0].inverse());
        let q = apply_tietze(
            &q,
            &[TietzeMove::RemoveRelation {
                index: 1,
                derivation: vec![DerivationStep::new(0, Word::identity(), true)],
            }],
        )
        .unwrap();
        let expected = pres("gens: a1 a2\nrel: a2 a1 a2 = a1 a2 a1\n");
        assert_eq!(q, expected);
    }

    #[test]
    fn errors_name_the_failing_move() {
        let p = pres(TREFOIL);
        let a1 = p.alphabet().id_of("a1").unwrap();
        let script = vec![
            TietzeMove::AddGenerator {
                name: "b".into(),
                definition: p.parse_word("a1 a2").unwrap(),
            },
            // a1 occurs twice in r1
            TietzeMove::RemoveGenerator {
                generator: a1,
                relator: 0,
            },
        ];
        let err = apply_tietze(&p, &script).unwrap_err();
        assert_eq!(err.index, 1);
        assert!(matches!(err.reason, MoveError::NotDefining(_)));

        let err = apply_tietze(
            &p,
            &[TietzeMove::AddGenerator {
                name: "a2".into(),
                definition: Word::identity(),
            }],
        )
        .unwrap_err();
        assert_eq!(err.index, 0);
        assert_eq!(err.reason, MoveError::NameCollision("a2".into()));

        let err = apply_tietze(
            &p,
            &[TietzeMove::RemoveRelation {
                index: 0,
                derivation: vec![],
            }],
        )
        .unwrap_err();
        assert_eq!(err.reason, MoveError::DerivationMismatch);

        let err = apply_tietze(
            &p,
            &[TietzeMove::RemoveRelation {
                index: 0,
                derivation: vec![DerivationStep::new(0, Word::identity(), false)],
            }],
        )
        .unwrap_err();
        assert_eq!(err.reason, MoveError::SelfReference(0));

        let err = apply_tietze(
            &p,
            &[TietzeMove::RemoveGenerator {
                generator: GenId(99),
                relator: 0,
            }],
        )
        .unwrap_err();
        assert_eq!(err.reason, MoveError::NoSuchGenerator(99));
    }

    #[test]
    fn add_relation_checks_derivation() {
        let p = pres("gens: a b\nrel: a^2\nrel: b^3\n");
        let (a, b) = (GenId(0), GenId(1));
        let conj = Word::generator(b);
        // b a^2 b^-1 · a^2
        let consequence = Word::reduce([(b, 1), (a, 2), (b, -1), (a, 2)]).unwrap();
        let q = apply_tietze(
            &p,
            &[TietzeMove::AddRelation {
                consequence: consequence.clone(),
                derivation: vec![
                    DerivationStep::new(0, conj, false),
                    DerivationStep::new(0, Word::identity(), false),
                ],
            }],
        )
        .unwrap();
        assert_eq!(q.relators()[2], consequence);
        let bad = apply_tietze(
            &p,
            &[TietzeMove::AddRelation {
                consequence: Word::generator(a),
                derivation: vec![DerivationStep::new(0, Word::identity(), false)],
            }],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn fixed_point_of_simplifier() {
        let p = pres("gens: a\n");
        let (q, script) = auto_simplify(&p);
        assert_eq!(q, p);
        assert!(script.is_empty());
    }

    #[test]
    fn simplifier_trefoil() {
        let p = pres(TREFOIL);
        let (q, script) = auto_simplify(&p);
        assert_eq!(q.generator_count(), 2);
        assert_eq!(q.relator_count(), 1);
        assert_eq!(apply_tietze(&p, &script).unwrap(), q);
        assert_eq!(q.to_text(), "gens: a2 a3\nrel: a2 a3 a2 a3^-1 a2^-1 a3^-1\n");
    }

    #[test]
    fn simplifier_conjugates_relators() {
        let p = pres("gens: a b c\nrel: c a b^2 a^-1 c^-1\nrel: c b^2 c^-1\n");
        let (q, script) = auto_simplify(&p);
        assert_eq!(apply_tietze(&p, &script).unwrap(), q);
        assert_eq!(q.relator_count(), 1);
        assert_eq!(q.relators()[0].syllable_len(), 1);
    }

    #[test]
    fn rotation_conjugators_are_exact() {
        let al = Alphabet::new(["a", "b", "c"]).unwrap();
        let w = |s: &str| crate::words::parse_word(s, &al).unwrap();
        let cases = [
            ("a b c", "b c a"),
            ("a^2 b a", "b a^3"),
            ("a b a", "a^2 b"),
            ("a^3", "a^3"),
            ("a b^-1 c^2 b", "c^2 b a b^-1"),
        ];
        for (u, v) in cases {
            let (u, v) = (w(u), w(v));
            let c = rotation_conjugator(&u, &v).expect("rotation");
            assert_eq!(u.conjugate_by(&c).unwrap(), v);
            assert!(cyclically_equivalent(&u, &v));
        }
        assert!(rotation_conjugator(&w("a b"), &w("a c")).is_none());
        assert!(cyclically_equivalent(&w("a b c"), &w("b^-1 a^-1 c^-1")));
        assert!(!cyclically_equivalent(&w("a b c"), &w("a c b")));
    }

    #[test]
    fn describe_lists_every_move() {
        let p = pres(TREFOIL);
        let (_, script) = auto_simplify(&p);
        let lines = describe_script(&p, &script).unwrap();
        assert_eq!(lines.len(), script.len());
        assert_eq!(lines[0], "eliminate a1 = a2 a3 a2^-1 using r2");
    }
}
