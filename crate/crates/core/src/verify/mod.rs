//! Executable checks of the theory: local relations, move invariance on a
//! corpus of diagram pairs, the planarity obstruction, the agreement of the
//! two bracket engines, and non-vanishing on planar graphs.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::builder::WordError;
use crate::diagram::{Diagram, DiagramError};
use crate::normalize::{eval_at_one, is_symmetric_up_to_unit, moy_delta, normalized_delta, NormalizeError};
use crate::rewrite::{evaluate_diagram, RewriteError};
use crate::statesum::{self, StateSumError};
use crate::weights::WeightTable;
use crate::{BigInt, Laurent, LaurentError, Rational};

pub mod corpus;
pub mod random;
pub mod relations;

pub use corpus::{corpus, move_pairs, CorpusPair, Move, Named};
pub use relations::{check_relation, relation_suite, Relation};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("colors {colors:?} violate the side conditions of relation {relation}")]
    IllegalColors { relation: &'static str, colors: Vec<u32> },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    StateSum(#[from] StateSumError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl Report {
    pub fn new(id: String, failures: Vec<String>) -> Report {
        Report { id, passed: failures.is_empty(), detail: failures.join("; ") }
    }

    pub fn pass(id: String, detail: String) -> Report {
        Report { id, passed: true, detail }
    }

    pub fn fail(id: String, detail: String) -> Report {
        Report { id, passed: false, detail }
    }
}

/// Where two values first differ, as `q^e: a vs b` on the lowest exponent of
/// `a - b` once both are over a common denominator.
pub fn first_difference(a: &Rational, b: &Rational) -> String {
    let d = a - b;
    if d.is_zero() {
        return "equal".into();
    }
    let (na, da) = (a.numerator(), a.denominator());
    let (nb, db) = (b.numerator(), b.denominator());
    let x = na * db;
    let y = nb * da;
    let e = (&x - &y).min_exp().unwrap_or(0);
    format!("{a} vs {b}, first difference at q^{e}: {} vs {}", x.coeff(e), y.coeff(e))
}

fn err_report(id: String, e: impl fmt::Display) -> Report {
    Report::fail(id, format!("error: {e}"))
}

fn with_basepoint(d: &Diagram) -> Result<Diagram, DiagramError> {
    match d.delta {
        Some(_) => Ok(d.clone()),
        None => Ok(d.with_delta(d.auto_basepoint()?)),
    }
}

/// `|δ|^{-1} <D|δ>`, the regular isotopy invariant.
pub fn regular_value(d: &Diagram, table: &WeightTable) -> Result<Rational, VerifyError> {
    let d = with_basepoint(d)?;
    let rm = d.build_regions()?;
    if !rm.connected {
        return Ok(Rational::zero());
    }
    let b = statesum::bracket_with(&d, &rm, table)?;
    Ok(Rational::new(b, d.delta_weight(&rm)?)?)
}

/// Check one corpus pair. Regular moves compare `|δ|^{-1}<D|δ>` up to the
/// expected factor and, except for move (I), also `Δ`; framed moves compare
/// `Δ`; a crossing change compares `Δ(1)`.
pub fn check_pair(p: &CorpusPair, table: &WeightTable) -> Report {
    let id = format!("move/{}/{}", p.mv, p.name);
    match pair_failures(p, table) {
        Ok(f) => Report::new(id, f),
        Err(e) => err_report(id, e),
    }
}

fn pair_failures(p: &CorpusPair, table: &WeightTable) -> Result<Vec<String>, VerifyError> {
    let mut f = Vec::new();
    for (side, d) in [("before", &p.before), ("after", &p.after)] {
        let v = d.validate();
        if !v.is_valid() {
            f.push(format!("{side} is invalid: {v}"));
        }
    }
    if !f.is_empty() {
        return Ok(f);
    }
    let delta = |d: &Diagram| normalized_delta(d, table).map(|r| r.delta);
    match p.mv {
        Move::CrossingChange => {
            let (a, b) = (eval_at_one(&p.before, table)?, eval_at_one(&p.after, table)?);
            if a != b {
                f.push(format!("Δ(1): {a} vs {b}"));
            }
        }
        m if m.is_framed() => {
            let (a, b) = (delta(&p.before)?, delta(&p.after)?);
            if a != b {
                f.push(format!("Δ: {}", first_difference(&a, &b)));
            }
        }
        m => {
            let a = regular_value(&p.before, table)?;
            let b = &Rational::from(p.expected_factor.clone()) * &regular_value(&p.after, table)?;
            if a != b {
                f.push(format!("|δ|^-1<D|δ> times {}: {}", p.expected_factor, first_difference(&a, &b)));
            }
            if m != Move::RI {
                let (a, b) = (delta(&p.before)?, delta(&p.after)?);
                if a != b {
                    f.push(format!("Δ: {}", first_difference(&a, &b)));
                }
            }
        }
    }
    Ok(f)
}

/// Outcome of the planarity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The lowest-degree negative term `coeff · q^exponent` of the unframed
    /// invariant: the diagram is not a planar graph.
    NonPlanarCertificate { exponent: i64, coeff: BigInt },
    /// Every coefficient is nonnegative; nothing follows.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NonPlanarCertificate { exponent, coeff } => {
                write!(f, "NonPlanarCertificate: term {coeff}*q^{exponent} is negative")
            }
            Verdict::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

/// A negative coefficient of the unframed invariant certifies non-planarity.
pub fn planarity_obstruction(d: &Diagram, table: &WeightTable) -> Result<Verdict, VerifyError> {
    if d.vertex_count() == 0 {
        return Err(VerifyError::NotApplicable("the diagram has no vertex".into()));
    }
    let r = moy_delta(d, table)?;
    let p =
        r.poly().ok_or_else(|| VerifyError::NotApplicable(format!("value {} is not a Laurent polynomial", r.delta)))?;
    let zero = BigInt::from(0);
    let negative = p.terms().find(|(_, c)| **c < zero).map(|(e, c)| (e, c.clone()));
    Ok(match negative {
        Some((exponent, coeff)) => Verdict::NonPlanarCertificate { exponent, coeff },
        None => Verdict::Inconclusive,
    })
}

/// The determinant engine equals the state sum up to one sign, and the sign
/// relating each state's determinant term to its state-sum term is the same
/// for every state.
pub fn cross_engine_check(name: &str, d: &Diagram, table: &WeightTable) -> Report {
    let id = format!("engines/det-vs-statesum/{name}");
    let run = || -> Result<Report, VerifyError> {
        let d = with_basepoint(d)?;
        let rm = d.build_regions()?;
        let (u, v) = rm.marked.ok_or(DiagramError::BasepointMissing)?;
        let b = statesum::bracket_with(&d, &rm, table)?;
        let det = statesum::det_bracket(&statesum::alexander_matrix(&rm, table), u, v);
        let sign = if det == b {
            1
        } else if det == -&b {
            -1
        } else {
            return Ok(Report::fail(id.clone(), format!("det {det} is not ±{b}")));
        };
        let one = BigInt::from(1);
        let mut eps = std::collections::BTreeSet::new();
        let states = statesum::enumerate_states(&rm);
        for s in &states {
            let w = statesum::state_weights(&rm, table, s);
            let m_sign = if w.big_m.leading_coeff().is_none_or(|c| *c >= one) { 1 } else { -1 };
            eps.insert(m_sign * w.sign * w.m);
        }
        if eps.len() > 1 {
            return Ok(Report::fail(id.clone(), format!("per-state signs vary over {} states", states.len())));
        }
        if let Some(&e) = eps.first() {
            if !b.is_zero() && e != sign {
                return Ok(Report::fail(id.clone(), format!("state sign {e} but global sign {sign}")));
            }
        }
        Ok(Report::pass(id.clone(), format!("sign {sign:+} over {} states", states.len())))
    };
    run().unwrap_or_else(|e| err_report(format!("engines/det-vs-statesum/{name}"), e))
}

/// The rewrite pipeline agrees with the state sum.
pub fn cross_pipeline_check(name: &str, d: &Diagram, table: &WeightTable) -> Report {
    let id = format!("engines/rewrite-vs-statesum/{name}");
    let run = || -> Result<Report, VerifyError> {
        let a = normalized_delta(d, table)?.delta;
        let b = evaluate_diagram(d, table)?;
        Ok(if a == b {
            Report::pass(id.clone(), a.to_string())
        } else {
            Report::fail(id.clone(), first_difference(&a, &b))
        })
    };
    run().unwrap_or_else(|e| err_report(format!("engines/rewrite-vs-statesum/{name}"), e))
}

/// `Δ ≠ 0` on every crossingless (planar) member with a vertex.
pub fn nonvanishing_report(members: &[Named], table: &WeightTable) -> Report {
    let mut f = Vec::new();
    let mut n = 0;
    for m in members {
        let d = &m.diagram;
        if d.crossing_count() > 0 || d.vertex_count() == 0 || !d.is_framed_trivalent_positive() {
            continue;
        }
        n += 1;
        match normalized_delta(d, table) {
            Ok(r) if r.delta.is_zero() => f.push(format!("{}: Δ = 0", m.name)),
            Ok(_) => {}
            Err(e) => f.push(format!("{}: {e}", m.name)),
        }
    }
    let id = "properties/nonvanishing".to_string();
    if f.is_empty() {
        Report::pass(id, format!("{n} planar diagrams"))
    } else {
        Report::fail(id, f.join("; "))
    }
}

/// Whether `Δ` tells the diagram from its mirror image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chirality {
    pub delta: Laurent,
    /// `Δ(mirror)`, computed separately; it must be `Δ(t^{-1})`.
    pub mirror_delta: Laurent,
    pub chiral: bool,
}

pub fn chirality(d: &Diagram, table: &WeightTable) -> Result<Chirality, VerifyError> {
    let as_poly = |r: crate::normalize::InvariantResult| {
        r.poly().ok_or_else(|| VerifyError::NotApplicable(format!("value {} is not a Laurent polynomial", r.delta)))
    };
    let delta = as_poly(normalized_delta(d, table)?)?;
    let mirror_delta = as_poly(normalized_delta(&d.mirror(), table)?)?;
    let chiral = !is_symmetric_up_to_unit(&delta);
    Ok(Chirality { delta, mirror_delta, chiral })
}

fn chirality_report(name: &str, d: &Diagram, expect_chiral: bool, table: &WeightTable) -> Report {
    let id = format!("properties/chirality/{name}");
    match chirality(d, table) {
        Err(e) => err_report(id, e),
        Ok(c) => {
            let mut f = Vec::new();
            if c.mirror_delta != c.delta.invert_variable() {
                f.push(format!("Δ(mirror) = {} but Δ(t^-1) = {}", c.mirror_delta, c.delta.invert_variable()));
            }
            if c.chiral != expect_chiral {
                f.push(format!("chiral = {}, expected {expect_chiral}", c.chiral));
            }
            let mut r = Report::new(id, f);
            if r.passed {
                r.detail = if c.chiral { "chiral".into() } else { "not detected".into() };
            }
            r
        }
    }
}

/// `|δ'| <D|δ> = |δ| <D|δ'>` on `count` random (diagram, basepoint,
/// basepoint) triples drawn from `members`.
pub fn delta_covariance(members: &[Named], count: usize, seed: u64, table: &WeightTable) -> Vec<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<&Named> = members.iter().filter(|m| m.diagram.legal_basepoints().len() >= 2).collect();
    let mut triples = Vec::new();
    for k in 0..count {
        let m = pool.choose(&mut rng).expect("diagrams with two basepoints");
        let legal = m.diagram.legal_basepoints();
        let pick: Vec<usize> = legal.choose_multiple(&mut rng, 2).copied().collect();
        triples.push((k, *m, pick[0], pick[1]));
    }
    triples
        .par_iter()
        .map(|&(k, m, a, b)| {
            let id = format!("properties/basepoint/{k:02} {} edges {a},{b}", m.name);
            let side = |e: usize| -> Result<(Laurent, Laurent), VerifyError> {
                let d = m.diagram.with_delta(e);
                let rm = d.build_regions()?;
                Ok((statesum::bracket_with(&d, &rm, table)?, d.delta_weight(&rm)?))
            };
            match (side(a), side(b)) {
                (Ok((ba, wa)), Ok((bb, wb))) => {
                    let (x, y) = (&wb * &ba, &wa * &bb);
                    if x == y {
                        Report::pass(id, String::new())
                    } else {
                        Report::fail(id, format!("{x} vs {y}"))
                    }
                }
                (Err(e), _) | (_, Err(e)) => err_report(id, e),
            }
        })
        .collect()
}

/// Checks run by `verify --suite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Relations,
    Moves,
    Properties,
    Engines,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Relations, Suite::Moves, Suite::Properties, Suite::Engines];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Moves => "moves",
            Suite::Properties => "properties",
            Suite::Engines => "engines",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Random planar trivalent diagrams checked by the property suite.
pub const PLANAR_FUZZ_COUNT: usize = 100;

/// Properties of `Δ` on one planar trivalent diagram: nonzero, nonnegative,
/// integral in `q`, symmetric up to a unit.
pub fn planar_properties(name: &str, d: &Diagram, table: &WeightTable) -> Report {
    let id = format!("properties/planar/{name}");
    let r = match normalized_delta(d, table) {
        Ok(r) => r,
        Err(e) => return err_report(id, e),
    };
    let mut f = Vec::new();
    match r.poly() {
        None => f.push(format!("not a Laurent polynomial: {}", r.delta)),
        Some(p) => {
            if p.is_zero() {
                f.push("Δ = 0".into());
            }
            if !p.is_nonnegative() {
                f.push(format!("negative coefficient in {p}"));
            }
            if !is_symmetric_up_to_unit(&p) {
                f.push(format!("not symmetric up to a unit: {p}"));
            }
        }
    }
    Report::new(id, f)
}

/// Run one suite; reports are sorted by id.
pub fn run_suite(suite: Suite, table: &WeightTable) -> Vec<Report> {
    let mut out = match suite {
        Suite::Relations => match relation_suite(3, table) {
            Ok(r) => r,
            Err(e) => vec![err_report("relations".into(), e)],
        },
        Suite::Moves => move_pairs().par_iter().map(|p| check_pair(p, table)).collect(),
        Suite::Engines => {
            let members = corpus();
            let mut r: Vec<Report> =
                members.par_iter().map(|m| cross_engine_check(&m.name, &m.diagram, table)).collect();
            r.par_extend(
                members
                    .par_iter()
                    .filter(|m| m.diagram.is_framed_trivalent_positive())
                    .map(|m| cross_pipeline_check(&m.name, &m.diagram, table)),
            );
            r
        }
        Suite::Properties => {
            let members = corpus();
            let mut r = vec![nonvanishing_report(&members, table)];
            r.push(chirality_report("5_1 theta 1,1", &crate::fixtures::theta_51(1, 1), true, table));
            r.push(chirality_report("trefoil right", &members_named(&members, "trefoil right"), false, table));
            r.extend(delta_covariance(&members, 20, 7, table));
            r.par_extend((0..PLANAR_FUZZ_COUNT).into_par_iter().map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + k as u64);
                let d = random::random_planar_trivalent(&mut rng, 1 + k % 8);
                planar_properties(&format!("random {k:03}"), &d, table)
            }));
            r
        }
    };
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn members_named(members: &[Named], name: &str) -> Diagram {
    members.iter().find(|m| m.name == name).expect("corpus member").diagram.clone()
}
