use moyalex::builder::{switch_crossing, Op, Word};
use moyalex::fixtures::{theta_51, theta_trivial};
use moyalex::normalize::{
    colored_curliness, colored_writhe, eval_at_one, framing_factor, is_symmetric_up_to_unit, link_alexander,
    link_potential, moy_delta, normalized_delta, WellDefined,
};
use moyalex::statesum::bracket;
use moyalex::verify::corpus::{corpus, theta};
use moyalex::verify::random::random_planar_trivalent;
use moyalex::verify::{move_pairs, Move};
use moyalex::weights::{kink_pair, WeightTable};
use moyalex::{qint, t_half, BigInt, Diagram, Laurent, Rational, Sign};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table() -> WeightTable {
    WeightTable::builtin()
}

fn p(s: &str) -> Laurent {
    s.parse().unwrap()
}

fn circle(color: u32, ccw: bool) -> Diagram {
    Word::plat(vec![Op::Cup { k: 0, color, left_up: !ccw }, Op::Delta(0), Op::Cap(0)]).build().unwrap()
}

fn braid(colors: &[u32], crossings: &[(usize, bool)]) -> Diagram {
    let mut ops = vec![Op::Delta(0)];
    ops.extend(crossings.iter().map(|&(k, over_left)| Op::Cross { k, over_left }));
    Word::closed(colors, ops).build().unwrap()
}

fn delta(d: &Diagram) -> Rational {
    normalized_delta(d, &table()).unwrap().delta
}

fn link(d: &Diagram) -> Rational {
    link_alexander(d, &table()).unwrap()
}

fn poly(r: &Rational) -> Laurent {
    r.as_poly().expect("a Laurent polynomial")
}

#[test]
fn framing_factor_examples() {
    let d = theta(1, 2);
    assert!(framing_factor(&d).is_one());
    for i in 1..=3 {
        let one = Word::closed(&[i], vec![Op::Delta(0), Op::Twist(0, Sign::Pos)]).build().unwrap();
        assert_eq!(framing_factor(&one), Laurent::q_pow(i as i64));
        let pair =
            Word::closed(&[i], vec![Op::Twist(0, Sign::Pos), Op::Delta(0), Op::Twist(0, Sign::Neg)]).build().unwrap();
        assert!(framing_factor(&pair).is_one());
    }
}

#[test]
fn curliness_of_circles() {
    for i in 1..=4u32 {
        assert_eq!(colored_curliness(&circle(i, false)), t_half(i as i64));
        assert_eq!(colored_curliness(&circle(i, true)), t_half(-(i as i64)));
    }
    let nested = Word::plat(vec![
        Op::Cup { k: 0, color: 2, left_up: false },
        Op::Cup { k: 1, color: 3, left_up: false },
        Op::Delta(0),
        Op::Cap(1),
        Op::Cap(0),
    ])
    .build()
    .unwrap();
    assert_eq!(colored_curliness(&nested), t_half(-5));
}

#[test]
fn curliness_local_relation() {
    // a vertical pair of opposite strands against the same pair reconnected
    // horizontally, closed off by the same cup and cap
    for i in 1..=3 {
        let vertical =
            Word::plat(vec![Op::Cup { k: 0, color: i, left_up: false }, Op::Delta(0), Op::Cap(0)]).build().unwrap();
        let horizontal = Word::plat(vec![
            Op::Cup { k: 0, color: i, left_up: false },
            Op::Delta(0),
            Op::Cap(0),
            Op::Cup { k: 0, color: i, left_up: false },
            Op::Cap(0),
        ])
        .build()
        .unwrap();
        assert_eq!(colored_curliness(&vertical), &t_half(i as i64) * &colored_curliness(&horizontal));
    }
}

#[test]
fn curliness_of_kinks() {
    // the loop side fixes the factor, whatever the crossing sign
    for i in 1..=3 {
        let c = |s, left| colored_curliness(&kink_pair(i, s, left).0);
        let left = c(Sign::Pos, true);
        assert_eq!(c(Sign::Neg, true), left);
        assert_eq!(c(Sign::Pos, false), c(Sign::Neg, false));
        assert_eq!(&t_half(i as i64) * &left, &t_half(-(i as i64)) * &c(Sign::Pos, false));
    }
}

#[test]
fn circle_values() {
    for i in 1..=4u32 {
        let want = Rational::new(Laurent::one(), qint(i as i64)).unwrap();
        assert_eq!(delta(&circle(i, true)), want);
        assert_eq!(delta(&circle(i, false)), want);
    }
}

#[test]
fn five_one_theta_value() {
    let r = normalized_delta(&theta_51(1, 1), &table()).unwrap();
    let want = &p("q^12 - 2*q^8 + q^4 + 2 - q^-4") * &qint(2);
    assert_eq!(r.poly(), Some(want.clone()));
    assert_eq!(r.well_defined, WellDefined::Ambient);
    assert_eq!(moy_delta(&theta_51(1, 1), &table()).unwrap().poly(), Some(want));
}

#[test]
fn trivial_theta_value() {
    for i in 1..=3u32 {
        for j in 1..=3u32 {
            let d = theta_trivial(i, j);
            for k in d.legal_basepoints() {
                assert_eq!(poly(&delta(&d.with_delta(k))), qint((i + j) as i64), "({i},{j}) edge {k}");
            }
        }
    }
}

#[test]
fn link_values() {
    assert_eq!(link(&braid(&[1], &[])), Rational::one());
    let unlink = Word::plat(vec![
        Op::Cup { k: 0, color: 1, left_up: true },
        Op::Cup { k: 2, color: 1, left_up: true },
        Op::Delta(0),
        Op::Cap(2),
        Op::Cap(0),
    ])
    .build()
    .unwrap();
    assert!(link(&unlink).is_zero());
    let trefoil = p("q^4 - 1 + q^-4");
    assert_eq!(poly(&link(&braid(&[1, 1], &[(0, true); 3]))), trefoil);
    assert_eq!(poly(&link(&braid(&[1, 1], &[(0, false); 3]))), trefoil);
    // a kinked unknot
    assert_eq!(link(&braid(&[1, 1], &[(0, true)])), Rational::one());
}

#[test]
fn values_at_one() {
    assert_eq!(eval_at_one(&braid(&[1], &[]), &table()).unwrap(), BigInt::from(1));
    let d = theta_51(1, 1);
    assert_eq!(eval_at_one(&d, &table()).unwrap(), BigInt::from(2));
    for n in d.crossings().collect::<Vec<_>>() {
        let mut s = d.clone();
        switch_crossing(&mut s, n);
        assert_eq!(eval_at_one(&s, &table()).unwrap(), BigInt::from(2));
    }
}

#[test]
fn potential_of_the_round_unknot() {
    for i in 1..=3u32 {
        for ccw in [true, false] {
            let d = circle(i, ccw);
            assert_eq!(colored_writhe(&d), 0);
            // the mirror of a crossingless circle is itself
            let rm = d.build_regions().unwrap();
            let b = bracket(&d, &table()).unwrap();
            let num = &colored_curliness(&d) * &b;
            let want = -Rational::new(num, d.delta_weight(&rm).unwrap()).unwrap();
            assert_eq!(link_potential(&d, &table()).unwrap(), want);
        }
    }
}

#[test]
fn potential_is_unchanged_by_move_three() {
    for pair in move_pairs().into_iter().filter(|c| c.mv == Move::RIII) {
        if pair.before.vertex_count() > 0 {
            continue;
        }
        let a = link_potential(&pair.before, &table()).unwrap();
        let b = link_potential(&pair.after, &table()).unwrap();
        assert_eq!(a, b, "{}", pair.name);
    }
}

#[test]
fn chirality_of_the_five_one_theta() {
    let d = theta_51(1, 1);
    let v = poly(&delta(&d));
    assert!(!is_symmetric_up_to_unit(&v));
    assert_eq!(poly(&delta(&d.mirror())), v.invert_variable());
}

fn framed(d: &Diagram) -> bool {
    d.is_framed_trivalent_positive()
}

#[test]
fn corpus_symmetries() {
    for m in corpus().into_iter().filter(|m| framed(&m.diagram)) {
        let d = &m.diagram;
        let v = delta(d);
        assert_eq!(delta(&d.mirror()), v.invert_variable(), "{} mirror", m.name);
        assert_eq!(delta(&d.reverse()), v, "{} reverse", m.name);
    }
}

#[test]
fn corpus_integrality_and_positivity() {
    for m in corpus() {
        let d = &m.diagram;
        if d.vertex_count() == 0 {
            continue;
        }
        let v = delta(d).as_poly();
        assert!(v.is_some(), "{} is not a polynomial", m.name);
        let v = v.unwrap();
        if d.crossing_count() == 0 {
            assert!(!v.is_zero() && v.is_nonnegative(), "{}: {v}", m.name);
        }
    }
}

/// `Δ(D₊) - Δ(D₋) = (t^{-1/2} - t^{1/2}) Δ(D₀)` at crossing `at` of a braid word.
fn assert_skein(colors: &[u32], word: &[(usize, bool)], at: usize) {
    let mut plus = word.to_vec();
    plus[at].1 = true;
    let mut minus = word.to_vec();
    minus[at].1 = false;
    let mut zero = word.to_vec();
    zero.remove(at);
    let z = Rational::from(&t_half(-1) - &t_half(1));
    let lhs = &link(&braid(colors, &plus)) - &link(&braid(colors, &minus));
    assert_eq!(lhs, &z * &link(&braid(colors, &zero)), "{word:?} at {at}");
}

#[test]
fn skein_on_fixed_triples() {
    assert_skein(&[1, 1], &[(0, true); 3], 0);
    assert_skein(&[1, 1], &[(0, true); 2], 1);
    assert_skein(&[1, 1, 1], &[(0, true), (1, false), (0, true), (1, false)], 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn skein_on_random_braids(word in prop::collection::vec((0usize..2, any::<bool>()), 1..7), pick in any::<prop::sample::Index>()) {
        let at = pick.index(word.len());
        assert_skein(&[1, 1, 1], &word, at);
    }

    #[test]
    fn random_planar_values(seed in any::<u64>(), n in 0usize..8) {
        let d = random_planar_trivalent(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let v = delta(&d).as_poly().unwrap();
        prop_assert!(!v.is_zero() && v.is_nonnegative());
        prop_assert!(is_symmetric_up_to_unit(&v));
        prop_assert_eq!(delta(&d.mirror()), Rational::from(v.invert_variable()));
    }
}
