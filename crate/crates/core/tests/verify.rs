use moyalex::builder::{Op, Word};
use moyalex::fixtures::{theta_51, theta_trivial};
use moyalex::normalize::normalized_delta;
use moyalex::verify::corpus::theta;
use moyalex::verify::random::random_planar_trivalent;
use moyalex::verify::{
    check_relation, chirality, cross_engine_check, cross_pipeline_check, first_difference, nonvanishing_report,
    planarity_obstruction, run_suite, Named, Relation, Suite, Verdict, VerifyError,
};
use moyalex::weights::WeightTable;
use moyalex::{qint, BigInt, Diagram, Laurent, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table() -> WeightTable {
    WeightTable::builtin()
}

fn delta(d: &Diagram) -> Rational {
    normalized_delta(d, &table()).unwrap().delta
}

#[test]
fn relation_examples() {
    for i in 1..=3 {
        let r = check_relation(Relation::Circle, &[i], &table()).unwrap();
        assert!(r.passed, "{}: {}", r.id, r.detail);
        assert_eq!(r.id, format!("relation/circle/i={i}"));
    }
    let r = check_relation(Relation::Bigon, &[2, 1], &table()).unwrap();
    assert!(r.passed, "{}", r.detail);
    assert!(matches!(check_relation(Relation::Bigon, &[1, 2], &table()), Err(VerifyError::IllegalColors { .. })));
    assert!(matches!(
        check_relation(Relation::Ladder, &[1, 1, 2, 1], &table()),
        Err(VerifyError::IllegalColors { .. })
    ));
    assert_eq!(Relation::from_name("zero-edge"), Some(Relation::ZeroEdge));
    assert_eq!(Relation::Bigon.color_grid(2), vec![vec![1, 1], vec![2, 1], vec![2, 2]]);
}

#[test]
fn bigon_by_hand() {
    // splitting a color-2 loop into two 1-strands multiplies by [2]^2
    let circle = Word::closed(&[2], vec![Op::Delta(0)]).build().unwrap();
    let ratio = &delta(&theta(1, 1)) * &delta(&circle).inv().unwrap();
    assert_eq!(ratio, Rational::from(qint(2).pow(2)));
}

#[test]
fn zero_edge_by_hand() {
    // a 0-colored rung between the 2 and 3 strands of a split 5 loop
    let d = Word::closed(
        &[5],
        vec![Op::Delta(0), Op::Split { k: 0, left: 2 }, Op::Split { k: 0, left: 2 }, Op::Merge(1), Op::Merge(0)],
    )
    .build()
    .unwrap();
    let want = &(&qint(2) * &qint(3)) * &qint(5);
    assert_eq!(delta(&d), Rational::from(want));
}

#[test]
fn failing_comparison_names_the_coefficient() {
    let a = Rational::from(qint(3));
    let b = Rational::from(&qint(3) + &Laurent::q_pow(4));
    let msg = first_difference(&a, &b);
    assert!(msg.contains("q^4: 1 vs 2"), "{msg}");
    assert_eq!(first_difference(&a, &a), "equal");
}

#[test]
fn planarity_verdicts() {
    let v = planarity_obstruction(&theta_51(1, 1), &table()).unwrap();
    assert_eq!(v, Verdict::NonPlanarCertificate { exponent: -6, coeff: BigInt::from(-1) });
    assert_eq!(planarity_obstruction(&theta_trivial(1, 2), &table()).unwrap(), Verdict::Inconclusive);
    let marked = Word::closed(&[2], vec![Op::Delta(0), Op::Mark(0), Op::Mark(0)]).build().unwrap();
    assert_eq!(planarity_obstruction(&marked, &table()).unwrap(), Verdict::Inconclusive);
    let bare = Word::closed(&[1], vec![Op::Delta(0)]).build().unwrap();
    assert!(matches!(planarity_obstruction(&bare, &table()), Err(VerifyError::NotApplicable(_))));
}

#[test]
fn verdict_does_not_depend_on_the_basepoint() {
    let d = theta_51(1, 1);
    let want = planarity_obstruction(&d, &table()).unwrap();
    for k in d.legal_basepoints() {
        assert_eq!(planarity_obstruction(&d.with_delta(k), &table()).unwrap(), want, "edge {k}");
    }
}

#[test]
fn five_one_engines_agree() {
    for (i, j) in [(1, 1), (1, 2), (2, 2)] {
        let r = cross_engine_check("5_1", &theta_51(i, j), &table());
        assert!(r.passed, "({i},{j}): {}", r.detail);
    }
    let r = cross_pipeline_check("5_1", &theta_51(1, 1), &table());
    assert!(r.passed, "{}", r.detail);
}

#[test]
fn random_planar_diagrams_do_not_vanish() {
    let members: Vec<Named> = (0..50)
        .map(|k| Named {
            name: format!("random {k}"),
            diagram: random_planar_trivalent(&mut ChaCha8Rng::seed_from_u64(k), 1 + k as usize % 7),
        })
        .collect();
    let r = nonvanishing_report(&members, &table());
    assert!(r.passed, "{}", r.detail);
    assert_eq!(r.detail, "50 planar diagrams");
}

#[test]
fn five_one_is_chiral() {
    let c = chirality(&theta_51(1, 1), &table()).unwrap();
    assert!(c.chiral);
    assert_eq!(c.mirror_delta, c.delta.invert_variable());
    assert!(!chirality(&theta_trivial(1, 1), &table()).unwrap().chiral);
}

#[test]
fn suites_pass() {
    for suite in [Suite::Relations, Suite::Moves, Suite::Properties] {
        let reports = run_suite(suite, &table());
        assert!(!reports.is_empty());
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.id, r.detail)).collect();
        assert!(failed.is_empty(), "{}: {failed:#?}", suite.name());
        assert!(reports.windows(2).all(|w| w[0].id <= w[1].id));
    }
}
