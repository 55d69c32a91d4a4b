use knotgrp::tietze::{apply_move, cyclically_equivalent};
use knotgrp::wirtinger::{Crossing, CrossingSign};
use knotgrp::{
    abelianization, apply_tietze, auto_simplify, builtin_diagram, builtin_table, hom_count,
    relation_matrix, smith_normal_form, wirtinger_presentation, DerivationStep, IntMatrix,
    KnotDiagram, Presentation, TietzeMove, Word, DEFAULT_MAX_EVALS,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SMALL: &[&str] = &["Z2", "Z3", "Z4", "Z5", "Z6", "S3"];
const WITH_S4: &[&str] = &["Z2", "Z3", "Z4", "Z5", "Z6", "S3", "S4"];

fn homs(p: &Presentation, targets: &[&str]) -> Vec<u64> {
    targets
        .iter()
        .map(|t| hom_count(p, &builtin_table(t).unwrap(), DEFAULT_MAX_EVALS).unwrap())
        .collect()
}

fn targets_for(p: &Presentation) -> &'static [&'static str] {
    if p.generator_count() <= 3 {
        WITH_S4
    } else {
        SMALL
    }
}

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).unwrap()
}

/// Replays `script` from `p`, checking hom counts and abelianization after
/// every move.
fn assert_script_preserves(p: &Presentation, script: &[TietzeMove]) -> Presentation {
    let targets = targets_for(p);
    let expected = homs(p, targets);
    let ab = abelianization(p);
    let mut current = p.clone();
    for mv in script {
        current = apply_move(&current, mv).unwrap();
        assert_eq!(homs(&current, targets), expected, "after {mv:?}");
        assert_eq!(abelianization(&current), ab);
    }
    current
}

#[test]
fn trefoil_scripts_reach_the_torus_relator() {
    let p = wirtinger_presentation(&builtin_diagram("trefoil").unwrap());
    let a3 = p.alphabet().id_of("a3").unwrap();
    let script = vec![
        TietzeMove::RemoveGenerator { generator: a3, relator: 0 },
        TietzeMove::RemoveRelation {
            index: 1,
            derivation: vec![DerivationStep::new(0, Word::identity(), true)],
        },
    ];
    let q = assert_script_preserves(&p, &script);
    assert_eq!(q, apply_tietze(&p, &script).unwrap());
    assert_eq!(q.generator_count(), 2);
    assert_eq!(q.relator_count(), 1);
    let target = q.parse_word("a2 a1 a2 a1^-1 a2^-1 a1^-1").unwrap();
    assert!(cyclically_equivalent(&q.relators()[0], &target));

    let a1 = q.alphabet().id_of("a1").unwrap();
    let a2 = q.alphabet().id_of("a2").unwrap();
    let add_b = TietzeMove::AddGenerator {
        name: "b".into(),
        definition: q.parse_word("a2 a1").unwrap(),
    };
    // `a` is defined in terms of `b`, so parse it after `b` exists
    let a_def = apply_move(&q, &add_b).unwrap().parse_word("a1 b").unwrap();
    let script = vec![
        add_b,
        TietzeMove::AddGenerator { name: "a".into(), definition: a_def },
        TietzeMove::RemoveGenerator { generator: a1, relator: 2 },
        TietzeMove::RemoveGenerator { generator: a2, relator: 1 },
    ];
    let r = assert_script_preserves(&q, &script);
    assert_eq!(r.generator_count(), 2);
    assert_eq!(r.relator_count(), 1);
    let target = r.parse_word("b^3 a^-2").unwrap();
    assert!(cyclically_equivalent(&r.relators()[0], &target), "got {r}");
}

#[test]
fn auto_simplify_preserves_invariants() {
    for name in ["unknot", "trefoil", "paper-5crossing"] {
        let p = wirtinger_presentation(&builtin_diagram(name).unwrap());
        let (q, script) = auto_simplify(&p);
        assert_script_preserves(&p, &script);
        assert_eq!(apply_tietze(&p, &script).unwrap(), q);
        assert_eq!(auto_simplify(&p), (q.clone(), script));
        assert_eq!(homs(&p, SMALL), homs(&q, SMALL));
    }
    for text in [
        "gens: a b\nrel: a^2 b^-3\n",
        "gens: x y z\nrel: x y = z\nrel: z^2 = y^3\nrel: y x y^-1 x^-1\n",
        "gens: a b c\nrel: a b a^-1 b^-1\nrel: b a b^-1 a^-1\nrel: c a^-1\n",
    ] {
        let p = pres(text);
        let (q, script) = auto_simplify(&p);
        assert_script_preserves(&p, &script);
        assert!(q.generator_count() <= p.generator_count());
    }
}

#[test]
fn swapped_torus_parameters_agree() {
    for (m, n) in [(2, 3), (2, 5), (3, 4), (3, 5), (1, 4)] {
        let p = Presentation::torus(m, n).unwrap();
        let q = Presentation::torus(n, m).unwrap();
        assert_eq!(homs(&p, WITH_S4), homs(&q, WITH_S4), "({m},{n})");
        assert_eq!(abelianization(&p), abelianization(&q));
    }
}

#[test]
fn free_product_abelianization_order() {
    for m in 2..=8i64 {
        for n in 2..=8i64 {
            let ab = abelianization(&Presentation::free_product(m, n).unwrap());
            assert_eq!(ab.order(), Some(BigInt::from(m * n)), "({m},{n})");
        }
    }
}

#[test]
fn relator_order_and_generator_names_do_not_matter() {
    let p = pres("gens: a b\nrel: a^3 b^-2\nrel: a b a b^-1\n");
    let q = pres("gens: x y\nrel: x y x y^-1\nrel: x^3 y^-2\n");
    assert_eq!(homs(&p, WITH_S4), homs(&q, WITH_S4));
}

fn random_diagram(rng: &mut StdRng, n: usize) -> KnotDiagram {
    let crossings = (1..=n)
        .map(|i| {
            let sign = if rng.gen() { CrossingSign::Positive } else { CrossingSign::Negative };
            Crossing::new(rng.gen_range(1..=n), i, i % n + 1, sign)
        })
        .collect();
    let d = KnotDiagram::new(n, crossings).unwrap();
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    d.relabel(&perm).unwrap()
}

#[test]
fn every_diagram_abelianizes_to_z() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(1..=9);
        let d = random_diagram(&mut rng, n);
        let ab = abelianization(&wirtinger_presentation(&d));
        assert!(ab.is_infinite_cyclic(), "{d}");
    }
    assert!(abelianization(&wirtinger_presentation(&KnotDiagram::unknot())).is_infinite_cyclic());
}

// Holds for planar diagrams only; the random crossing lists above need not
// be realizable and can fail it.
#[test]
fn one_wirtinger_relator_is_redundant() {
    for name in ["trefoil", "paper-5crossing"] {
        let d = builtin_diagram(name).unwrap();
        let p = wirtinger_presentation(&d);
        let full = homs(&p, SMALL);
        for skip in 0..p.relator_count() {
            let mut rels = p.relators().to_vec();
            rels.remove(skip);
            let q = Presentation::new(p.alphabet().clone(), rels).unwrap();
            assert_eq!(homs(&q, SMALL), full, "dropping r{} of {d}", skip + 1);
        }
    }
}

#[test]
fn arc_relabeling_preserves_hom_counts() {
    let mut rng = StdRng::seed_from_u64(3);
    for name in ["trefoil", "paper-5crossing"] {
        let d = builtin_diagram(name).unwrap();
        let expected = homs(&wirtinger_presentation(&d), SMALL);
        for _ in 0..5 {
            let mut perm: Vec<usize> = (1..=d.arc_count()).collect();
            perm.shuffle(&mut rng);
            let e = d.relabel(&perm).unwrap();
            assert_eq!(homs(&wirtinger_presentation(&e), SMALL), expected);
        }
    }
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..=12, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_form_is_correct(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert!(s.d.is_diagonal());
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        if a.rows() == a.cols() {
            let product: BigInt = diag.iter().product();
            prop_assert_eq!(product, a.determinant().abs());
        }
    }

    #[test]
    fn abelianization_matches_relation_matrix_rank(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 0..4)) {
        let text: String = std::iter::once("gens: a b c\n".to_string())
            .chain(rows.iter().map(|r| format!("rel: a^{} b^{} c^{}\n", r[0], r[1], r[2])))
            .collect();
        let p = pres(&text);
        let ab = abelianization(&p);
        let s = smith_normal_form(&relation_matrix(&p));
        let nonzero = s.d.diagonal().iter().filter(|d| !d.is_zero()).count();
        prop_assert_eq!(ab.free_rank, 3 - nonzero);
    }
}
