//! Corner weights `m`, `M`, `A` and `P`, loaded from a versioned JSON table,
//! and the calibration suite that pins the table down.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builder::{Op, Word};
use crate::diagram::{CornerName, CrKind, Diagram, Sign};
use crate::{brace, qint, statesum, t_half, Laurent};

/// The table shipped with the library.
pub const BUILTIN_JSON: &str = include_str!("../resources/weights_v1.json");

pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("weight table: {0}")]
    Json(#[from] serde_json::Error),
    #[error("weight table: {0}")]
    Io(#[from] std::io::Error),
    #[error("weight table version {0} is not supported")]
    Version(u32),
    #[error("weight table: {0}")]
    Shape(String),
}

/// `c * t^{(o*over + u*under + k)/2}`, times `[over]` when `qint` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub c: i64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub o: i64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub u: i64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub k: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub qint: bool,
}

fn is_zero(x: &i64) -> bool {
    *x == 0
}

fn is_false(x: &bool) -> bool {
    !*x
}

pub type Pattern = Vec<Term>;

pub fn eval_pattern(p: &Pattern, over: u32, under: u32) -> Laurent {
    let mut acc = Laurent::zero();
    for t in p {
        let half = t.o * over as i64 + t.u * under as i64 + t.k;
        let mut x = Laurent::monomial(t.c.into(), 2 * half);
        if t.qint {
            x = &x * &qint(over as i64);
        }
        acc += &x;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub m: i64,
    #[serde(rename = "M")]
    pub big_m: Pattern,
    #[serde(rename = "A")]
    pub a: Pattern,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Pattern>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourCorners {
    #[serde(rename = "N")]
    pub n: Entry,
    #[serde(rename = "S")]
    pub s: Entry,
    #[serde(rename = "W")]
    pub w: Entry,
    #[serde(rename = "E")]
    pub e: Entry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeCorners {
    #[serde(rename = "N")]
    pub n: Entry,
    #[serde(rename = "W")]
    pub w: Entry,
    #[serde(rename = "E")]
    pub e: Entry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightTable {
    pub version: u32,
    #[serde(default)]
    pub convention: String,
    pub positive: FourCorners,
    pub negative: FourCorners,
    pub circle: ThreeCorners,
}

/// Evaluated weights of one corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerWeight {
    pub m: i64,
    pub big_m: Laurent,
    pub a: Laurent,
    pub p: Option<Laurent>,
}

impl CornerWeight {
    /// `M * A`, the factor a state picks up in the bracket.
    pub fn ma(&self) -> Laurent {
        &self.big_m * &self.a
    }

    /// `m * A`, the Alexander matrix contribution.
    pub fn signed_a(&self) -> Laurent {
        if self.m < 0 {
            -&self.a
        } else {
            self.a.clone()
        }
    }
}

impl Default for WeightTable {
    fn default() -> Self {
        WeightTable::builtin()
    }
}

impl WeightTable {
    pub fn builtin() -> WeightTable {
        WeightTable::from_json(BUILTIN_JSON).expect("builtin weight table parses")
    }

    pub fn from_json(s: &str) -> Result<WeightTable, WeightError> {
        let t: WeightTable = serde_json::from_str(s)?;
        if t.version != SUPPORTED_VERSION {
            return Err(WeightError::Version(t.version));
        }
        for (name, e) in t.entries() {
            if e.m != 1 && e.m != -1 {
                return Err(WeightError::Shape(format!("{name}: m must be 1 or -1")));
            }
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<WeightTable, WeightError> {
        WeightTable::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weight table serializes")
    }

    fn entries(&self) -> Vec<(String, &Entry)> {
        let mut v = Vec::new();
        for (kind, f) in [("positive", &self.positive), ("negative", &self.negative)] {
            for (c, e) in [("N", &f.n), ("S", &f.s), ("W", &f.w), ("E", &f.e)] {
                v.push((format!("{kind}.{c}"), e));
            }
        }
        for (c, e) in [("N", &self.circle.n), ("W", &self.circle.w), ("E", &self.circle.e)] {
            v.push((format!("circle.{c}"), e));
        }
        v
    }

    pub fn entry(&self, kind: &CrKind, corner: CornerName) -> &Entry {
        match kind {
            CrKind::Double { sign: Sign::Pos, .. } => pick4(&self.positive, corner),
            CrKind::Double { sign: Sign::Neg, .. } => pick4(&self.negative, corner),
            CrKind::Circle { .. } => match corner {
                CornerName::N => &self.circle.n,
                CornerName::W => &self.circle.w,
                CornerName::E => &self.circle.e,
                CornerName::S => panic!("circle crossings have no south corner"),
            },
        }
    }

    pub fn weight(&self, kind: &CrKind, corner: CornerName) -> CornerWeight {
        let e = self.entry(kind, corner);
        let (o, u) = kind.over_under();
        CornerWeight {
            m: e.m,
            big_m: eval_pattern(&e.big_m, o, u),
            a: eval_pattern(&e.a, o, u),
            p: e.p.as_ref().map(|p| eval_pattern(p, o, u)),
        }
    }
}

fn pick4(f: &FourCorners, c: CornerName) -> &Entry {
    match c {
        CornerName::N => &f.n,
        CornerName::S => &f.s,
        CornerName::W => &f.w,
        CornerName::E => &f.e,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CalibrationReport {
    pub checks: Vec<Check>,
}

impl CalibrationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failures.is_empty(),
            detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
        });
    }
}

const CAL_COLORS: std::ops::RangeInclusive<u32> = 1..=4;

fn double(sign: Sign, a: u32, b: u32) -> CrKind {
    CrKind::Double { node: 0, sign, a, b }
}

fn circle(i: u32) -> CrKind {
    CrKind::Circle { edge: 0, vertex: 0, color: i }
}

/// Check the table against every identity it has to satisfy, for colors 1..4.
pub fn calibrate_weights(table: &WeightTable) -> CalibrationReport {
    use CornerName::*;
    let mut rep = CalibrationReport::default();

    // rows of the Alexander matrix sum to zero, plain and weighted by t^ind
    let mut plain = Vec::new();
    let mut weighted = Vec::new();
    for sign in [Sign::Pos, Sign::Neg] {
        for a in CAL_COLORS {
            for b in CAL_COLORS {
                let k = double(sign, a, b);
                let ind = [(W, 0), (S, a as i64), (N, b as i64), (E, (a + b) as i64)];
                let mut s0 = Laurent::zero();
                let mut s1 = Laurent::zero();
                for (c, x) in ind {
                    let w = table.weight(&k, c).signed_a();
                    s0 += &w;
                    s1 += &(&w * &t_half(2 * x));
                }
                if !s0.is_zero() {
                    plain.push(format!("{sign:?} a={a} b={b}: {s0}"));
                }
                if !s1.is_zero() {
                    weighted.push(format!("{sign:?} a={a} b={b}: {s1}"));
                }
            }
        }
    }
    for i in CAL_COLORS {
        let k = circle(i);
        let s0: Laurent = [N, W, E].iter().map(|&c| table.weight(&k, c).signed_a()).sum();
        let s1 = &table.weight(&k, W).signed_a() + &(&table.weight(&k, E).signed_a() * &t_half(2 * i as i64));
        if !s0.is_zero() {
            plain.push(format!("circle i={i}: {s0}"));
        }
        if !s1.is_zero() {
            weighted.push(format!("circle i={i}: {s1}"));
        }
    }
    rep.record("row sums vanish", plain);
    rep.record("index-weighted row sums vanish", weighted);

    // circle north corner and the planar weights
    let mut north = Vec::new();
    let mut pw = Vec::new();
    for i in CAL_COLORS {
        let k = circle(i);
        let n = table.weight(&k, N);
        if n.a != brace(i as i64) {
            north.push(format!("i={i}: A={}", n.a));
        }
        if n.p.as_ref() != Some(&qint(i as i64)) {
            north.push(format!("i={i}: P north is not [i]"));
        }
        for c in [W, E] {
            let w = table.weight(&k, c);
            if w.p.as_ref() != Some(&w.ma()) {
                pw.push(format!("i={i} {c:?}: P != M*A"));
            }
        }
        if n.p.as_ref().map(|p| p * &brace(1)) != Some(n.ma()) {
            pw.push(format!("i={i} N: P*{{1}} != M*A"));
        }
    }
    rep.record("circle north weight is {i} and P(N) = [i]", north);
    rep.record("planar weights agree with M*A", pw);

    // move (I): kinked unknot against the round unknot
    let mut kinks = Vec::new();
    for i in CAL_COLORS {
        for (sign, loop_left, factor) in [
            (Sign::Pos, true, t_half(2 * i as i64)),
            (Sign::Pos, false, Laurent::one()),
            (Sign::Neg, true, Laurent::one()),
            (Sign::Neg, false, t_half(-2 * i as i64)),
        ] {
            let (kinked, plain) = kink_pair(i, sign, loop_left);
            match (normalized_bracket(&kinked, table), normalized_bracket(&plain, table)) {
                (Some(x), Some(y)) if x == crate::Rational::from(factor.clone()) * y.clone() => {}
                (x, y) => kinks.push(format!("i={i} {sign:?} loop_left={loop_left}: got {x:?} vs {factor} * {y:?}")),
            }
        }
    }
    rep.record("move (I) factors t^-i, 1, t^i, 1", kinks);

    // move (II), (III), (V) on small closures
    let mut regular = Vec::new();
    for (name, before, after) in regular_pairs() {
        let (x, y) = (normalized_bracket(&before, table), normalized_bracket(&after, table));
        if x.is_none() || x != y {
            regular.push(format!("{name}: {x:?} vs {y:?}"));
        }
    }
    rep.record("moves (II), (III), (V) leave |δ|^-1 <D|δ> unchanged", regular);
    rep
}

/// `|δ|^{-1} <D|δ>` as a rational function.
fn normalized_bracket(d: &Diagram, table: &WeightTable) -> Option<crate::Rational> {
    let rm = d.build_regions().ok()?;
    let b = statesum::bracket_with(d, &rm, table).ok()?;
    let w = d.delta_weight(&rm).ok()?;
    crate::Rational::new(b, w).ok()
}

/// An unknot of color `i` with one kink, and the round unknot. The kink loop
/// lies left or right of the strand.
pub fn kink_pair(i: u32, sign: Sign, loop_left: bool) -> (Diagram, Diagram) {
    let ops = if loop_left {
        vec![Op::Delta(0), Op::Cup { k: 0, color: i, left_up: false }, Op::Cross { k: 1, over_left: false }, Op::Cap(0)]
    } else {
        vec![Op::Delta(0), Op::Cup { k: 1, color: i, left_up: true }, Op::Cross { k: 0, over_left: false }, Op::Cap(1)]
    };
    let mut kinked = Word::closed(&[i], ops).build().expect("kink word");
    let node = kinked.crossings().next().unwrap();
    crate::builder::set_sign(&mut kinked, node, sign);
    let plain = Word::closed(&[i], vec![Op::Delta(0)]).build().expect("unknot word");
    (kinked, plain)
}

fn regular_pairs() -> Vec<(String, Diagram, Diagram)> {
    let mut out = Vec::new();
    for i in 1..=3u32 {
        for j in 1..=3u32 {
            let b = |ops: Vec<Op>| Word::closed(&[i, j], ops).build().expect("calibration word");
            // (II): two opposite crossings cancel
            for over_left in [true, false] {
                out.push((
                    format!("II i={i} j={j}"),
                    b(vec![
                        Op::Delta(0),
                        Op::Cross { k: 0, over_left },
                        Op::Cross { k: 0, over_left: !over_left },
                        Op::Merge(0),
                        Op::Split { k: 0, left: i },
                    ]),
                    b(vec![Op::Delta(0), Op::Merge(0), Op::Split { k: 0, left: i }]),
                ));
            }
            // (V): a crossing slides into a vertex, incoming and outgoing
            for over_left in [true, false] {
                out.push((
                    format!("V in i={i} j={j}"),
                    b(vec![Op::Delta(0), Op::Cross { k: 0, over_left }, Op::Merge(0), Op::Split { k: 0, left: i }]),
                    b(vec![Op::Delta(0), Op::Merge(0), Op::Split { k: 0, left: i }]),
                ));
                out.push((
                    format!("V out i={i} j={j}"),
                    b(vec![Op::Delta(0), Op::Merge(0), Op::Split { k: 0, left: j }, Op::Cross { k: 0, over_left }]),
                    b(vec![Op::Delta(0), Op::Merge(0), Op::Split { k: 0, left: i }]),
                ));
            }
        }
    }
    // (III) on three 1- and 2-colored strands
    for cs in [[1u32, 1, 1], [1, 2, 1], [2, 1, 2]] {
        for ol in [true, false] {
            let b = |ops: Vec<Op>| Word::closed(&cs, ops).build().expect("calibration word");
            let lhs = vec![
                Op::Delta(0),
                Op::Cross { k: 0, over_left: ol },
                Op::Cross { k: 1, over_left: ol },
                Op::Cross { k: 0, over_left: ol },
            ];
            let rhs = vec![
                Op::Delta(0),
                Op::Cross { k: 1, over_left: ol },
                Op::Cross { k: 0, over_left: ol },
                Op::Cross { k: 1, over_left: ol },
            ];
            out.push((format!("III {cs:?} over_left={ol}"), b(lhs), b(rhs)));
        }
    }
    out
}
