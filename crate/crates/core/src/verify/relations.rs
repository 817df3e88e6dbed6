//! Local relations checked in closure: both sides of a relation are drawn as
//! tangles, closed up in the same way, and evaluated with the state sum.

use std::fmt;

use crate::builder::{Op, Word};
use crate::normalize::normalized_delta;
use crate::weights::WeightTable;
use crate::{qint, Laurent, Rational};

use super::{first_difference, Report, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// A closed loop of color `i` is `1/[i]`, either orientation.
    Circle,
    /// A disconnected diagram is zero.
    Disconnected,
    /// A half twist on a strand of color `i` is `t^{±i/4}`.
    HalfTwist,
    /// A crossing is a combination of a ladder and a merge-split.
    Crossing,
    /// A strand of color `i` split off and fed back around the side.
    Curl,
    /// Split and merge again: `[i]^2`.
    Bigon,
    /// Two opposite strands joined by two `i+j` edges.
    Square,
    /// Two ways to split (or merge) three colors.
    Associativity,
    /// Exchange of a two-rung ladder for an H and a one-rung ladder.
    Ladder,
    /// A zero-colored rung between two strands.
    ZeroEdge,
}

impl Relation {
    pub const ALL: [Relation; 10] = [
        Relation::Circle,
        Relation::Disconnected,
        Relation::HalfTwist,
        Relation::Crossing,
        Relation::Curl,
        Relation::Bigon,
        Relation::Square,
        Relation::Associativity,
        Relation::Ladder,
        Relation::ZeroEdge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Circle => "circle",
            Relation::Disconnected => "disconnected",
            Relation::HalfTwist => "half-twist",
            Relation::Crossing => "crossing",
            Relation::Curl => "curl",
            Relation::Bigon => "bigon",
            Relation::Square => "square",
            Relation::Associativity => "associativity",
            Relation::Ladder => "ladder",
            Relation::ZeroEdge => "zero-edge",
        }
    }

    pub fn from_name(s: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Names of the color parameters.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Relation::Circle | Relation::HalfTwist => &["i"],
            Relation::Associativity => &["i", "j", "k"],
            Relation::Ladder => &["i", "j", "k", "l"],
            _ => &["i", "j"],
        }
    }

    /// Side conditions on positive colors.
    pub fn admissible(self, c: &[u32]) -> bool {
        if c.len() != self.parameters().len() || c.contains(&0) {
            return false;
        }
        match self {
            Relation::Bigon => c[0] >= c[1],
            Relation::Square => c[0] >= c[1],
            Relation::Ladder => c[1] >= c[2] && c[2] >= c[3],
            _ => true,
        }
    }

    /// Every admissible color tuple with entries in `1..=max`.
    pub fn color_grid(self, max: u32) -> Vec<Vec<u32>> {
        let n = self.parameters().len();
        let mut out = Vec::new();
        let mut cur = vec![1u32; n];
        loop {
            if self.admissible(&cur) {
                out.push(cur.clone());
            }
            let mut k = 0;
            while k < n && cur[k] == max {
                cur[k] = 1;
                k += 1;
            }
            if k == n {
                return out;
            }
            cur[k] += 1;
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the open ends of a tangle are closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Context {
    /// Top position `k` runs back to bottom position `k`.
    Plain,
    /// All top strands merge into one, which splits back into the bottom colors.
    Fused,
    /// A spectator strand of color 1 is added on the right, then fused.
    Spectator,
}

struct Tangle {
    start: Vec<(u32, bool)>,
    ops: Vec<Op>,
}

impl Tangle {
    fn up(colors: &[u32], ops: Vec<Op>) -> Tangle {
        Tangle { start: colors.iter().map(|&c| (c, true)).collect(), ops }
    }

    fn close(&self, ctx: Context) -> Option<Word> {
        let mut start = self.start.clone();
        if ctx == Context::Spectator {
            start.push((1, true));
        }
        let mut ops = self.ops.clone();
        if ctx != Context::Plain {
            if start.iter().any(|s| !s.1) {
                return None;
            }
            let top = top_count(&start, &ops)?;
            for _ in 1..top {
                ops.push(Op::Merge(0));
            }
            for (k, &(c, _)) in start.iter().enumerate().take(start.len() - 1) {
                ops.push(Op::Split { k, left: c });
            }
        }
        let w = Word::braid(start, ops);
        w.build().ok().map(|_| w)
    }
}

fn top_count(start: &[(u32, bool)], ops: &[Op]) -> Option<usize> {
    let mut n = start.len() as i64;
    for op in ops {
        n += match op {
            Op::Merge(_) => -1,
            Op::Cap(_) => -2,
            Op::Split { .. } => 1,
            Op::Cup { .. } => 2,
            _ => 0,
        };
    }
    usize::try_from(n).ok()
}

struct Instance {
    label: String,
    lhs: Tangle,
    /// `None` stands for the empty diagram, of value 1.
    rhs: Vec<(Rational, Option<Tangle>)>,
    contexts: Vec<Context>,
    /// Some context must give a nonzero value.
    nontrivial: bool,
}

fn q(k: i64) -> Rational {
    Rational::from(qint(k))
}

fn frac(num: Laurent, den: Laurent) -> Rational {
    Rational::new(num, den).expect("nonzero quantum integer")
}

fn instances(rel: Relation, c: &[u32]) -> Vec<Instance> {
    use Context::*;
    use Op::*;
    let inst = |label: &str, lhs: Tangle, rhs: Vec<(Rational, Option<Tangle>)>, contexts: Vec<Context>| Instance {
        label: label.to_string(),
        lhs,
        rhs,
        contexts,
        nontrivial: rel != Relation::Disconnected,
    };
    let (i, j) = (c[0], c.get(1).copied().unwrap_or(0));
    let (ii, jj) = (i as i64, j as i64);
    match rel {
        Relation::Circle => {
            let v = frac(Laurent::one(), qint(ii));
            vec![
                inst("up", Tangle { start: vec![(i, true)], ops: vec![] }, vec![(v.clone(), None)], vec![Plain]),
                inst("down", Tangle { start: vec![(i, false)], ops: vec![] }, vec![(v, None)], vec![Plain]),
            ]
        }
        Relation::Disconnected => vec![
            inst("two loops", Tangle::up(&[i, j], vec![]), vec![], vec![Plain]),
            inst(
                "theta and loop",
                Tangle::up(&[i, j, i], vec![Merge(0), Split { k: 0, left: i }]),
                vec![],
                vec![Plain],
            ),
        ],
        Relation::HalfTwist => [(crate::Sign::Pos, "positive"), (crate::Sign::Neg, "negative")]
            .into_iter()
            .map(|(s, name)| {
                inst(
                    name,
                    Tangle::up(&[i], vec![Twist(0, s)]),
                    vec![(Rational::from(Laurent::q_pow(ii * s.value())), Some(Tangle::up(&[i], vec![])))],
                    vec![Plain, Spectator],
                )
            })
            .collect(),
        Relation::Crossing => {
            let mut out = Vec::new();
            let ctx = if i == j { vec![Plain, Fused] } else { vec![Fused] };
            for s in [1i64, -1] {
                let cross = Tangle::up(&[i, j], vec![Cross { k: 0, over_left: s > 0 }]);
                let ladder_k = frac(-Laurent::t_half(s * (ii + jj)), &qint(ii) * &qint(jj));
                if i <= j {
                    out.push(inst(
                        &format!("{} crossing, i <= j", if s > 0 { "positive" } else { "negative" }),
                        cross,
                        vec![
                            (ladder_k.clone(), Some(Tangle::up(&[i, j], vec![Split { k: 1, left: j - i }, Merge(0)]))),
                            (
                                frac(Laurent::t_half(s * jj), &qint(ii) * &qint(ii + jj)),
                                Some(Tangle::up(&[i, j], vec![Merge(0), Split { k: 0, left: j }])),
                            ),
                        ],
                        ctx.clone(),
                    ));
                }
                if j <= i {
                    let cross = Tangle::up(&[i, j], vec![Cross { k: 0, over_left: s > 0 }]);
                    out.push(inst(
                        &format!("{} crossing, j <= i", if s > 0 { "positive" } else { "negative" }),
                        cross,
                        vec![
                            (ladder_k, Some(Tangle::up(&[i, j], vec![Split { k: 0, left: j }, Merge(1)]))),
                            (
                                frac(Laurent::t_half(s * ii), &qint(jj) * &qint(ii + jj)),
                                Some(Tangle::up(&[i, j], vec![Merge(0), Split { k: 0, left: j }])),
                            ),
                        ],
                        ctx.clone(),
                    ));
                }
            }
            out
        }
        Relation::Curl => {
            let k = &q(jj) * &q(ii + jj);
            vec![
                inst(
                    "loop on the right",
                    Tangle::up(
                        &[j],
                        vec![Cup { k: 1, color: i, left_up: true }, Merge(0), Split { k: 0, left: j }, Cap(1)],
                    ),
                    vec![(k.clone(), Some(Tangle::up(&[j], vec![])))],
                    vec![Plain, Spectator],
                ),
                inst(
                    "loop on the left",
                    Tangle::up(
                        &[j],
                        vec![Cup { k: 0, color: i, left_up: false }, Merge(1), Split { k: 1, left: i }, Cap(0)],
                    ),
                    vec![(k, Some(Tangle::up(&[j], vec![])))],
                    vec![Plain, Spectator],
                ),
            ]
        }
        Relation::Bigon => vec![inst(
            "split and merge",
            Tangle::up(&[i], vec![Split { k: 0, left: i - j }, Merge(0)]),
            vec![(&q(ii) * &q(ii), Some(Tangle::up(&[i], vec![])))],
            vec![Plain, Spectator],
        )],
        Relation::Square => {
            let start = vec![(j, true), (i, false)];
            let lhs = Tangle {
                start: start.clone(),
                ops: vec![
                    Cup { k: 0, color: i, left_up: false },
                    Merge(1),
                    Split { k: 1, left: j },
                    Cap(2),
                    Cup { k: 2, color: i, left_up: true },
                    Merge(1),
                    Split { k: 1, left: i },
                    Cap(0),
                ],
            };
            let rung = Tangle {
                start: start.clone(),
                ops: vec![
                    Cup { k: 0, color: i - j, left_up: false },
                    Merge(1),
                    Cap(1),
                    Cup { k: 1, color: i, left_up: true },
                    Split { k: 1, left: i - j },
                    Cap(0),
                ],
            };
            let qij = q(ii + jj);
            vec![inst(
                "square",
                lhs,
                vec![
                    (&(&(&qij * &qij) * &qij) * &frac(Laurent::one(), qint(ii)), Some(rung)),
                    (&(&(&q(jj) * &q(jj)) * &qij) * &qij, Some(Tangle { start, ops: vec![] })),
                ],
                vec![Plain],
            )]
        }
        Relation::Associativity => {
            let k = c[2];
            let kk = k as i64;
            let coef = frac(qint(ii + jj), qint(jj + kk));
            vec![
                inst(
                    "split",
                    Tangle::up(&[i + j + k], vec![Split { k: 0, left: i + j }, Split { k: 0, left: i }]),
                    vec![(
                        coef.clone(),
                        Some(Tangle::up(&[i + j + k], vec![Split { k: 0, left: i }, Split { k: 1, left: j }])),
                    )],
                    vec![Fused, Spectator],
                ),
                inst(
                    "merge",
                    Tangle::up(&[i, j, k], vec![Merge(0), Merge(0)]),
                    vec![(coef, Some(Tangle::up(&[i, j, k], vec![Merge(1), Merge(0)])))],
                    vec![Fused],
                ),
            ]
        }
        Relation::Ladder => {
            let (k, l) = (c[2], c[3]);
            let (kk, ll) = (k as i64, l as i64);
            let ctx = if k == l { vec![Plain, Fused] } else { vec![Fused] };
            vec![inst(
                "two rungs",
                Tangle::up(&[i, j], vec![Split { k: 1, left: k }, Merge(0), Split { k: 0, left: i + k - l }, Merge(1)]),
                vec![
                    (
                        frac(&(&qint(jj) * &qint(ll)) * &qint(ii + kk), qint(ii + jj)),
                        Some(Tangle::up(&[i, j], vec![Merge(0), Split { k: 0, left: i + k - l }])),
                    ),
                    (&q(ii + kk) * &q(jj - kk), Some(Tangle::up(&[i, j], vec![Split { k: 1, left: k - l }, Merge(0)]))),
                ],
                ctx,
            )]
        }
        Relation::ZeroEdge => vec![inst(
            "zero rung",
            Tangle::up(&[i, j], vec![Split { k: 1, left: 0 }, Merge(0)]),
            vec![(&q(ii) * &q(jj), Some(Tangle::up(&[i, j], vec![])))],
            vec![Plain, Fused],
        )],
    }
}

fn value(w: &Word, table: &WeightTable) -> Result<Rational, VerifyError> {
    let d = w.build()?;
    Ok(normalized_delta(&d, table)?.delta)
}

/// Check one relation at one color tuple, in every closure that applies.
pub fn check_relation(rel: Relation, colors: &[u32], table: &WeightTable) -> Result<Report, VerifyError> {
    if !rel.admissible(colors) {
        return Err(VerifyError::IllegalColors { relation: rel.name(), colors: colors.to_vec() });
    }
    let id = format!(
        "relation/{}/{}",
        rel.name(),
        rel.parameters().iter().zip(colors).map(|(p, c)| format!("{p}={c}")).collect::<Vec<_>>().join(",")
    );
    let mut failures = Vec::new();
    let mut checked = 0;
    for inst in instances(rel, colors) {
        let mut nonzero = false;
        for &ctx in &inst.contexts {
            let Some(lw) = inst.lhs.close(ctx) else {
                continue;
            };
            let lhs = value(&lw, table)?;
            let mut rhs = Rational::zero();
            let mut closed = true;
            for (k, t) in &inst.rhs {
                let v = match t {
                    None => Rational::one(),
                    Some(t) => match t.close(ctx) {
                        Some(w) => value(&w, table)?,
                        None => {
                            closed = false;
                            break;
                        }
                    },
                };
                rhs = rhs + k * &v;
            }
            if !closed {
                continue;
            }
            checked += 1;
            nonzero |= !lhs.is_zero();
            if lhs != rhs {
                failures.push(format!("{} ({ctx:?}): {}", inst.label, first_difference(&lhs, &rhs)));
            }
        }
        if inst.nontrivial && !nonzero {
            failures.push(format!("{}: no closure gives a nonzero value", inst.label));
        }
    }
    if checked == 0 {
        failures.push("no closure applies".into());
    }
    Ok(Report::new(id, failures))
}

/// Every relation over colors `1..=max_color`.
pub fn relation_suite(max_color: u32, table: &WeightTable) -> Result<Vec<Report>, VerifyError> {
    use rayon::prelude::*;
    let jobs: Vec<(Relation, Vec<u32>)> =
        Relation::ALL.iter().flat_map(|&r| r.color_grid(max_color).into_iter().map(move |c| (r, c))).collect();
    jobs.par_iter().map(|(r, c)| check_relation(*r, c, table)).collect()
}
