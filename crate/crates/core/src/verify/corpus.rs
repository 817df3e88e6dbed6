//! Named diagrams and before/after pairs for the move checks.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::builder::{set_sign, switch_crossing, Op, Word};
use crate::diagram::{Diagram, Sign};
use crate::fixtures;
use crate::weights::kink_pair;
use crate::{t_half, Laurent};

use super::random::{insert_twist, insert_twist_pair, random_braid_graph, random_planar_trivalent, random_rii};

/// A corpus member.
#[derive(Debug, Clone)]
pub struct Named {
    pub name: String,
    pub diagram: Diagram,
}

fn word(colors: &[u32], ops: Vec<Op>) -> Diagram {
    Word::closed(colors, ops).build().expect("corpus word")
}

fn cr(k: usize, over_left: bool) -> Op {
    Op::Cross { k, over_left }
}

fn braid(colors: &[u32], crossings: &[(usize, bool)]) -> Diagram {
    let mut ops = vec![Op::Delta(0)];
    ops.extend(crossings.iter().map(|&(k, o)| cr(k, o)));
    word(colors, ops)
}

/// Trivial θ-curve with edges `i`, `j` and `i+j`.
pub fn theta(i: u32, j: u32) -> Diagram {
    word(&[i + j], vec![Op::Delta(0), Op::Split { k: 0, left: i }, Op::Merge(0)])
}

/// Every connected diagram of the corpus: links, θ-curves, the 5₁ θ-curve at
/// several colors and seeded random braid-closure graphs. At most 12 crossings.
pub fn corpus() -> Vec<Named> {
    let mut out = Vec::new();
    let mut add = |name: String, diagram: Diagram| out.push(Named { name, diagram });

    add("unknot".into(), word(&[1], vec![Op::Delta(0)]));
    add("unknot color 3".into(), word(&[3], vec![Op::Delta(0)]));
    add("hopf positive".into(), braid(&[1, 1], &[(0, true), (0, true)]));
    add("hopf negative".into(), braid(&[1, 1], &[(0, false), (0, false)]));
    add("hopf colors 1,2".into(), braid(&[1, 2], &[(0, true), (0, true)]));
    add("trefoil right".into(), braid(&[1, 1], &[(0, true); 3]));
    add("trefoil left".into(), braid(&[1, 1], &[(0, false); 3]));
    add("trefoil color 2".into(), braid(&[2, 2], &[(0, false); 3]));
    add("figure eight".into(), braid(&[1, 1, 1], &[(0, true), (1, false), (0, true), (1, false)]));
    add("torus (2,5)".into(), braid(&[1, 1], &[(0, true); 5]));
    let k10: Vec<(usize, bool)> = (0..10).map(|k| (k % 2, k % 3 != 0)).collect();
    add("3-braid knot, 10 crossings".into(), braid(&[1, 1, 1], &k10));
    let mut k12: Vec<(usize, bool)> = (0..10).map(|k| (k % 2, k % 4 != 1)).collect();
    k12.extend([(0, false), (0, false)]);
    add("3-braid knot, 12 crossings".into(), braid(&[1, 1, 1], &k12));
    let (kinked, _) = kink_pair(2, Sign::Pos, true);
    add("kinked unknot color 2".into(), kinked);

    for (i, j) in [(1, 1), (1, 2), (2, 3)] {
        add(format!("theta {i},{j}"), theta(i, j));
    }
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 3)] {
        add(format!("5_1 theta {i},{j}"), fixtures::theta_51(i, j));
    }
    add(
        "theta with a crossing at a vertex".into(),
        word(&[2], vec![Op::Delta(0), Op::Split { k: 0, left: 1 }, cr(0, true), Op::Merge(0)]),
    );
    add(
        "theta with a half twist".into(),
        word(&[3], vec![Op::Delta(0), Op::Split { k: 0, left: 1 }, cr(0, true), Op::Merge(0), Op::Twist(0, Sign::Neg)]),
    );
    add(
        "handcuff-like two-rung ladder".into(),
        word(
            &[1, 2],
            vec![
                Op::Delta(0),
                Op::Merge(0),
                Op::Split { k: 0, left: 2 },
                cr(0, true),
                Op::Merge(0),
                Op::Split { k: 0, left: 1 },
            ],
        ),
    );

    let starts: [&[u32]; 4] = [&[1, 1], &[1, 2], &[1, 1, 1], &[2, 1, 1]];
    for seed in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = starts[seed as usize % starts.len()];
        add(format!("random braid graph {start:?} seed {seed}"), random_braid_graph(&mut rng, start, 10, 6));
    }
    for seed in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        add(format!("random planar seed {seed}"), random_planar_trivalent(&mut rng, 3 + seed as usize));
    }
    out
}

/// The move relating the two diagrams of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    /// A cancelling pair of half twists.
    R0,
    RI,
    RII,
    RIII,
    /// A strand passes over or under a vertex.
    RIV,
    /// A crossing slides into a vertex.
    RV,
    /// A kink traded for two half twists.
    FramedKink,
    /// A crossing of two edges at a vertex traded for half twists.
    FramedVertex,
    CrossingChange,
}

impl Move {
    pub const ALL: [Move; 9] = [
        Move::R0,
        Move::RI,
        Move::RII,
        Move::RIII,
        Move::RIV,
        Move::RV,
        Move::FramedKink,
        Move::FramedVertex,
        Move::CrossingChange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Move::R0 => "R0",
            Move::RI => "RI",
            Move::RII => "RII",
            Move::RIII => "RIII",
            Move::RIV => "RIV",
            Move::RV => "RV",
            Move::FramedKink => "framed-kink",
            Move::FramedVertex => "framed-vertex",
            Move::CrossingChange => "crossing-change",
        }
    }

    /// Checked on the normalized invariant rather than on `|δ|^{-1}<D|δ>`.
    pub fn is_framed(self) -> bool {
        matches!(self, Move::R0 | Move::FramedKink | Move::FramedVertex)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Two diagrams related by one move. For regular moves
/// `|δ|^{-1}<before> = expected_factor · |δ|^{-1}<after>`.
#[derive(Debug, Clone)]
pub struct CorpusPair {
    pub name: String,
    pub before: Diagram,
    pub after: Diagram,
    pub mv: Move,
    pub expected_factor: Laurent,
}

impl CorpusPair {
    fn new(mv: Move, name: String, before: Diagram, after: Diagram) -> CorpusPair {
        CorpusPair { name, before, after, mv, expected_factor: Laurent::one() }
    }

    fn factor(mut self, f: Laurent) -> CorpusPair {
        self.expected_factor = f;
        self
    }
}

/// Kink on the right strand of a θ-curve, and the plain θ.
fn theta_kink(i: u32, j: u32, sign: Sign) -> (Diagram, Diagram) {
    let mut kinked = word(
        &[i + j],
        vec![
            Op::Delta(0),
            Op::Split { k: 0, left: i },
            Op::Cup { k: 2, color: j, left_up: true },
            cr(1, false),
            Op::Cap(2),
            Op::Merge(0),
        ],
    );
    let node = kinked.crossings().next().unwrap();
    set_sign(&mut kinked, node, sign);
    (kinked, theta(i, j))
}

fn edge_of_color(d: &Diagram, c: u32) -> usize {
    d.edges.iter().position(|e| e.color == c).expect("edge of that color")
}

/// Before/after pairs, at least two per move type.
pub fn move_pairs() -> Vec<CorpusPair> {
    let mut out = Vec::new();

    // R0: a cancelling twist pair on an edge
    for (name, d) in [("theta 1,2", theta(1, 2)), ("5_1 theta 1,1", fixtures::theta_51(1, 1))] {
        for (e, s) in [(0, Sign::Pos), (d.edges.len() - 1, Sign::Neg)] {
            let color = d.edges[e].color;
            out.push(CorpusPair::new(
                Move::R0,
                format!("{name}, twists {}{} on an edge of color {color}", s.symbol(), s.flip().symbol()),
                insert_twist_pair(&d, e, 0, s),
                d.clone(),
            ));
        }
    }

    // RI: the four kinks on an unknot, and kinks on a θ edge
    for i in 1..=3u32 {
        let ti = i as i64;
        for (sign, left, f) in [
            (Sign::Pos, true, t_half(2 * ti)),
            (Sign::Pos, false, Laurent::one()),
            (Sign::Neg, true, Laurent::one()),
            (Sign::Neg, false, t_half(-2 * ti)),
        ] {
            let (kinked, plain) = kink_pair(i, sign, left);
            let side = if left { "left" } else { "right" };
            out.push(
                CorpusPair::new(Move::RI, format!("unknot {i}, {sign:?} kink on the {side}"), kinked, plain).factor(f),
            );
        }
    }
    for (i, j) in [(1, 2), (2, 1)] {
        for (sign, f) in [(Sign::Pos, Laurent::one()), (Sign::Neg, t_half(-2 * j as i64))] {
            let (kinked, plain) = theta_kink(i, j, sign);
            out.push(
                CorpusPair::new(Move::RI, format!("theta {i},{j}, {sign:?} kink on edge {j}"), kinked, plain).factor(f),
            );
        }
    }

    // RII: two opposite crossings cancel, and finger moves on knotted diagrams
    for (i, j) in [(1, 1), (1, 2), (3, 1)] {
        for ol in [true, false] {
            let fuse = [Op::Merge(0), Op::Split { k: 0, left: i }];
            let mut ops = vec![Op::Delta(0), cr(0, ol), cr(0, !ol)];
            ops.extend(fuse);
            let mut plain = vec![Op::Delta(0)];
            plain.extend(fuse);
            out.push(CorpusPair::new(
                Move::RII,
                format!("strands {i},{j}, over_left={ol}"),
                word(&[i, j], ops),
                word(&[i, j], plain),
            ));
        }
    }
    for (seed, (name, d)) in [
        ("trefoil right", braid(&[1, 1], &[(0, true); 3])),
        ("5_1 theta 1,2", fixtures::theta_51(1, 2)),
        ("theta 2,3", theta(2, 3)),
    ]
    .into_iter()
    .enumerate()
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let after = random_rii(&d, &mut rng).expect("finger move applies");
        out.push(CorpusPair::new(Move::RII, format!("{name}, finger move seed {seed}"), after, d));
    }

    // RIII on three strands
    for cs in [[1u32, 1, 1], [1, 2, 1], [2, 3, 2]] {
        for ol in [true, false] {
            out.push(CorpusPair::new(
                Move::RIII,
                format!("strands {cs:?}, over_left={ol}"),
                braid(&cs, &[(0, ol), (1, ol), (0, ol)]),
                braid(&cs, &[(1, ol), (0, ol), (1, ol)]),
            ));
        }
    }

    // RIV: a strand passes a merge vertex or a split vertex
    for (a, b, c) in [(1, 1, 1), (2, 1, 2)] {
        for ol in [true, false] {
            let tail = [Op::Merge(0), Op::Merge(0), Op::Split { k: 0, left: a }, Op::Split { k: 1, left: b }];
            let mut before = vec![Op::Delta(0), Op::Merge(1), cr(0, ol)];
            let mut after = vec![Op::Delta(0), cr(0, ol), cr(1, ol), Op::Merge(0)];
            before.extend(tail[1..].iter().cloned());
            after.extend(tail[1..].iter().cloned());
            out.push(CorpusPair::new(
                Move::RIV,
                format!("strand {a} past a merge of {b},{c}, over_left={ol}"),
                word(&[a, b, c], before),
                word(&[a, b, c], after),
            ));
            let tail = [Op::Merge(0), Op::Merge(0), Op::Split { k: 0, left: a }];
            let mut before = vec![Op::Delta(0), cr(0, ol), Op::Split { k: 0, left: b }];
            let mut after = vec![Op::Delta(0), Op::Split { k: 1, left: b }, cr(0, ol), cr(1, ol)];
            before.extend(tail.iter().cloned());
            after.extend(tail.iter().cloned());
            out.push(CorpusPair::new(
                Move::RIV,
                format!("strand {a} past a split into {b},{c}, over_left={ol}"),
                word(&[a, b + c], before),
                word(&[a, b + c], after),
            ));
        }
    }

    // RV: a crossing of the two inputs or the two outputs of a vertex
    for (i, j) in [(1, 1), (1, 2), (2, 3)] {
        let plain = word(&[i, j], vec![Op::Delta(0), Op::Merge(0), Op::Split { k: 0, left: i }]);
        for ol in [true, false] {
            out.push(CorpusPair::new(
                Move::RV,
                format!("inputs {i},{j}, over_left={ol}"),
                word(&[i, j], vec![Op::Delta(0), cr(0, ol), Op::Merge(0), Op::Split { k: 0, left: i }]),
                plain.clone(),
            ));
            out.push(CorpusPair::new(
                Move::RV,
                format!("outputs {j},{i}, over_left={ol}"),
                word(&[i, j], vec![Op::Delta(0), Op::Merge(0), Op::Split { k: 0, left: j }, cr(0, ol)]),
                plain.clone(),
            ));
        }
    }

    // framed move (I): a kink is two half twists of its sign
    for i in 1..=2u32 {
        for sign in [Sign::Pos, Sign::Neg] {
            for left in [true, false] {
                let (kinked, plain) = kink_pair(i, sign, left);
                let twisted = insert_twist(&insert_twist(&plain, 0, sign), 0, sign);
                let side = if left { "left" } else { "right" };
                out.push(CorpusPair::new(
                    Move::FramedKink,
                    format!("unknot {i}, {sign:?} kink on the {side}"),
                    kinked,
                    twisted,
                ));
            }
        }
    }
    for sign in [Sign::Pos, Sign::Neg] {
        let (kinked, plain) = theta_kink(1, 2, sign);
        let e = edge_of_color(&plain, 2);
        let twisted = insert_twist(&insert_twist(&plain, e, sign), e, sign);
        out.push(CorpusPair::new(Move::FramedKink, format!("theta 1,2, {sign:?} kink on edge 2"), kinked, twisted));
    }

    // framed vertex move: crossing at a vertex against twists (s, s, -s)
    for (i, j) in [(1, 1), (1, 2), (2, 3)] {
        for ol in [true, false] {
            let s = if ol { Sign::Pos } else { Sign::Neg };
            let before = word(&[i + j], vec![Op::Delta(0), Op::Split { k: 0, left: i }, cr(0, ol), Op::Merge(0)]);
            let after = word(
                &[i + j],
                vec![
                    Op::Delta(0),
                    Op::Split { k: 0, left: i },
                    Op::Twist(0, s),
                    Op::Twist(1, s),
                    Op::Merge(0),
                    Op::Twist(0, s.flip()),
                ],
            );
            out.push(CorpusPair::new(
                Move::FramedVertex,
                format!("theta {i},{j}, crossing over_left={ol}"),
                before,
                after,
            ));
        }
    }

    // crossing changes on the 5_1 θ-curve leave Δ(1) alone
    for (i, j) in [(1, 1), (1, 2)] {
        let d = fixtures::theta_51(i, j);
        for (k, node) in d.crossings().enumerate() {
            let mut after = d.clone();
            switch_crossing(&mut after, node);
            out.push(CorpusPair::new(
                Move::CrossingChange,
                format!("5_1 theta {i},{j}, crossing {k}"),
                d.clone(),
                after,
            ));
        }
    }
    out
}
