//! Framing factor, colored curliness, the normalized invariant and the link
//! specializations.

use std::fmt;

use thiserror::Error;

use crate::diagram::{Dart, Diagram, DiagramError, NodeKind, Sign};
use crate::statesum::{self, StateSumError};
use crate::weights::WeightTable;
use crate::{brace, t_half, Laurent, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error(transparent)]
    StateSum(#[from] StateSumError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("not a link diagram: it has vertices")]
    NotALink,
    #[error("every color is zero")]
    ZeroColoring,
}

impl From<crate::LaurentError> for NormalizeError {
    fn from(e: crate::LaurentError) -> Self {
        NormalizeError::Diagram(DiagramError::Invalid(e.to_string()))
    }
}

/// `F(D) = Π_e t^{c(e)/4 (#positive - #negative half twists)}`.
pub fn framing_factor(d: &Diagram) -> Laurent {
    let mut e = 0i64;
    for edge in &d.edges {
        let net: i64 = edge.twists.iter().map(|s| s.value()).sum();
        e += edge.color as i64 * net;
    }
    Laurent::q_pow(e)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// The closed curves obtained by cabling every edge of color `c` into `c`
/// parallel lanes and smoothing every node in the oriented way.
#[derive(Debug, Clone)]
pub struct Smoothing {
    /// Each curve as its list of lane segments `(edge, lane)`, lane 1 leftmost.
    pub curves: Vec<Vec<(usize, u32)>>,
    /// Per curve: true when it runs clockwise.
    pub clockwise: Vec<bool>,
}

impl Smoothing {
    pub fn cw(&self) -> usize {
        self.clockwise.iter().filter(|&&c| c).count()
    }

    pub fn ccw(&self) -> usize {
        self.clockwise.len() - self.cw()
    }
}

/// Zones: faces first, then the gap between lanes `g` and `g+1` of each edge.
struct Zones {
    gap_base: Vec<usize>,
    total: usize,
}

impl Zones {
    fn new(d: &Diagram, nf: usize) -> Zones {
        let mut gap_base = Vec::with_capacity(d.edges.len());
        let mut total = nf;
        for e in &d.edges {
            gap_base.push(total);
            total += (e.color as usize).saturating_sub(1);
        }
        Zones { gap_base, total }
    }

    fn gap(&self, e: usize, g: u32) -> usize {
        debug_assert!(g >= 1);
        self.gap_base[e] + g as usize - 1
    }
}

pub fn smoothing(d: &Diagram) -> Smoothing {
    let faces = d.faces();
    let zones = Zones::new(d, faces.faces.len());
    let left_zone = |e: usize, lane: u32| -> usize {
        if lane == 1 {
            faces.left_of(Dart::tail(e))
        } else {
            zones.gap(e, lane - 1)
        }
    };
    let right_zone = |e: usize, lane: u32| -> usize {
        if lane == d.edges[e].color {
            faces.left_of(Dart::head(e))
        } else {
            zones.gap(e, lane)
        }
    };

    // successor of each lane segment, and the unions inside node disks
    let mut next: Vec<Vec<(usize, u32)>> =
        d.edges.iter().enumerate().map(|(k, e)| (1..=e.color).map(|l| (k, l)).collect()).collect();
    let mut disk = Dsu::new(zones.total);
    for (k, e) in d.edges.iter().enumerate() {
        if e.color == 0 {
            disk.union(faces.left_of(Dart::tail(k)), faces.left_of(Dart::head(k)));
        }
    }
    for node in &d.nodes {
        // (dart, lane) slots in counterclockwise order
        let mut slots: Vec<(Dart, u32)> = Vec::new();
        for &x in &node.rotation {
            let c = d.color(x);
            if x.is_incoming() {
                slots.extend((1..=c).map(|l| (x, l)));
            } else {
                slots.extend((1..=c).rev().map(|l| (x, l)));
            }
        }
        let m = slots.len();
        if m == 0 {
            continue;
        }
        let gap_zone = |k: usize| -> usize {
            let (x, l) = slots[k];
            let (y, _) = slots[(k + 1) % m];
            if x == y {
                if x.is_incoming() {
                    zones.gap(x.edge, l)
                } else {
                    zones.gap(x.edge, l - 1)
                }
            } else {
                faces.left_of(x)
            }
        };
        let k0 = (0..m)
            .find(|&k| slots[k].0.is_incoming() && !slots[(k + m - 1) % m].0.is_incoming())
            .expect("balanced node has incoming lanes");
        let n = m / 2;
        let at = |k: usize| (k0 + k) % m;
        // in-slots at(0..n), out-slots at(n..2n); I_k pairs with O_{n+1-k}
        for k in 0..n {
            let (xi, li) = slots[at(k)];
            let (xo, lo) = slots[at(2 * n - 1 - k)];
            next[xi.edge][li as usize - 1] = (xo.edge, lo);
        }
        for k in 0..n.saturating_sub(1) {
            disk.union(gap_zone(at(k)), gap_zone(at(2 * n - 2 - k)));
        }
    }
    for (k, e) in d.edges.iter().enumerate() {
        if e.is_free_loop() {
            for l in 1..=e.color {
                next[k][l as usize - 1] = (k, l);
            }
        }
    }

    let mut seen: Vec<Vec<bool>> = d.edges.iter().map(|e| vec![false; e.color as usize]).collect();
    let mut curves = Vec::new();
    for (k, e) in d.edges.iter().enumerate() {
        for l in 1..=e.color {
            if seen[k][l as usize - 1] {
                continue;
            }
            let mut curve = Vec::new();
            let mut x = (k, l);
            while !seen[x.0][x.1 as usize - 1] {
                seen[x.0][x.1 as usize - 1] = true;
                curve.push(x);
                x = next[x.0][x.1 as usize - 1];
            }
            curves.push(curve);
        }
    }

    // a curve runs counterclockwise when the outer zone is on its right once
    // every other curve is ignored
    let mut owner: Vec<Vec<usize>> = d.edges.iter().map(|e| vec![0; e.color as usize]).collect();
    for (c, curve) in curves.iter().enumerate() {
        for &(e, l) in curve {
            owner[e][l as usize - 1] = c;
        }
    }
    let outer: Vec<usize> = d.outer.iter().map(|&x| faces.left_of(x)).collect();
    let mut clockwise = Vec::with_capacity(curves.len());
    for (c, curve) in curves.iter().enumerate() {
        let mut dsu = Dsu(disk.0.clone());
        for w in outer.windows(2) {
            dsu.union(w[0], w[1]);
        }
        for (e, edge) in d.edges.iter().enumerate() {
            for l in 1..=edge.color {
                if owner[e][l as usize - 1] != c {
                    dsu.union(left_zone(e, l), right_zone(e, l));
                }
            }
        }
        let (e, l) = curve[0];
        let ccw = dsu.find(right_zone(e, l)) == dsu.find(outer[0]);
        clockwise.push(!ccw);
    }
    Smoothing { curves, clockwise }
}

/// `C(D, c) = t^{(#cw - #ccw)/2}` over the smoothed cabling.
pub fn colored_curliness(d: &Diagram) -> Laurent {
    let s = smoothing(d);
    t_half(s.cw() as i64 - s.ccw() as i64)
}

/// How far the value is an invariant of the underlying graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WellDefined {
    /// Framed trivalent graph with positive colors: an ambient isotopy invariant.
    Ambient,
    /// General MOY graph: determined up to a factor `t^{k/2}`.
    RegularUpToUnit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factors {
    pub framing: Laurent,
    pub curliness: Laurent,
    pub delta_weight: Laurent,
    pub vertex_count: usize,
    pub bracket: Laurent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantResult {
    /// The value, reduced to lowest terms.
    pub delta: Rational,
    pub factors: Factors,
    pub well_defined: WellDefined,
    /// Basepoint edge index used.
    pub basepoint: Option<usize>,
}

impl InvariantResult {
    /// The value as a Laurent polynomial, when it is one.
    pub fn poly(&self) -> Option<Laurent> {
        self.delta.as_poly()
    }

    /// Representative with the lowest exponent shifted into `t^0` or `t^{1/4}`
    /// by a power of `t^{1/2}`.
    pub fn unit_canonical(&self) -> Option<Laurent> {
        self.poly().map(|p| unit_canonical(&p))
    }
}

impl fmt::Display for InvariantResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "{}", self.delta),
        }
    }
}

pub fn unit_canonical(p: &Laurent) -> Laurent {
    match p.min_exp() {
        None => p.clone(),
        Some(e) => p.shift(-2 * e.div_euclid(2)),
    }
}

/// Which state-sum engine produces `<D|δ>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    StateSum,
    /// The Alexander matrix determinant, with its global sign fixed by one state.
    Determinant,
}

/// `<D|δ>` from the determinant, sign-corrected: the sign between the two
/// engines is the same for every state, so one state fixes it.
pub fn bracket_by_det(d: &Diagram, table: &WeightTable) -> Result<Laurent, StateSumError> {
    let rm = match d.build_regions() {
        Ok(rm) => rm,
        Err(DiagramError::BasepointOnBridge(_)) => return Ok(Laurent::zero()),
        Err(e) => return Err(e.into()),
    };
    let (u, v) = rm.marked.ok_or(DiagramError::BasepointMissing)?;
    if !rm.connected {
        return Ok(Laurent::zero());
    }
    let det = statesum::det_bracket(&statesum::alexander_matrix(&rm, table), u, v);
    if det.is_zero() {
        return Ok(det);
    }
    let Some(s) = statesum::first_state(&rm) else {
        return Ok(Laurent::zero());
    };
    let w = statesum::state_weights(&rm, table, &s);
    // M(s) is a signed unit; eps = M(s) * sign(s) * m(s)
    let m_sign = if w.big_m.leading_coeff().is_none_or(|c| c > &0.into()) { 1 } else { -1 };
    Ok(if m_sign * w.sign * w.m > 0 { det } else { -det })
}

fn raw_delta(
    d: &Diagram,
    table: &WeightTable,
    engine: Engine,
    framed: bool,
) -> Result<InvariantResult, NormalizeError> {
    if d.edges.iter().all(|e| e.color == 0) {
        return Err(NormalizeError::ZeroColoring);
    }
    let mut d = d.clone();
    if d.delta.is_none() {
        let k = d.auto_basepoint()?;
        d = d.with_delta(k);
    }
    let framing = if framed { framing_factor(&d) } else { Laurent::one() };
    let curliness = colored_curliness(&d);
    let vertex_count = d.vertex_count();
    let well_defined =
        if d.is_framed_trivalent_positive() && framed { WellDefined::Ambient } else { WellDefined::RegularUpToUnit };
    let rm = d.build_regions()?;
    let delta_weight = if rm.connected { d.delta_weight(&rm)? } else { Laurent::zero() };
    let bracket = match engine {
        Engine::StateSum => statesum::bracket_with(&d, &rm, table)?,
        Engine::Determinant => bracket_by_det(&d, table)?,
    };
    let factors = Factors { framing, curliness, delta_weight, vertex_count, bracket };
    let delta = if !rm.connected || factors.bracket.is_zero() {
        Rational::zero()
    } else {
        let num = &(&factors.framing * &factors.curliness) * &factors.bracket;
        let b1 = brace(1);
        let (num, den) = if vertex_count == 0 {
            (&num * &b1, factors.delta_weight.clone())
        } else {
            (num, &factors.delta_weight * &b1.pow(vertex_count as u32 - 1))
        };
        match num.exact_div(&den) {
            Ok(q) => Rational::from(q),
            Err(_) => Rational::new(num, den)?,
        }
    };
    Ok(InvariantResult { delta, factors, well_defined, basepoint: d.delta.map(|b| b.edge) })
}

/// `Δ_{(D,c)} = F(D) C(D,c) <D|δ> / (|δ| (t^{1/2} - t^{-1/2})^{|V|-1})`.
/// The basepoint is placed automatically when the diagram has none.
pub fn normalized_delta(d: &Diagram, table: &WeightTable) -> Result<InvariantResult, NormalizeError> {
    raw_delta(d, table, Engine::StateSum, true)
}

pub fn normalized_delta_with(
    d: &Diagram,
    table: &WeightTable,
    engine: Engine,
) -> Result<InvariantResult, NormalizeError> {
    raw_delta(d, table, engine, true)
}

/// The unframed variant used for the planarity condition: no framing factor.
pub fn moy_delta(d: &Diagram, table: &WeightTable) -> Result<InvariantResult, NormalizeError> {
    raw_delta(d, table, Engine::StateSum, false)
}

/// `Δ(1)`, an invariant of the underlying abstract graph.
pub fn eval_at_one(d: &Diagram, table: &WeightTable) -> Result<crate::BigInt, NormalizeError> {
    let r = normalized_delta(d, table)?;
    match r.poly() {
        Some(p) => Ok(p.eval_at_one()),
        None => {
            let (n, dd) = r.delta.eval_at_one();
            if dd == 0.into() {
                Err(NormalizeError::Diagram(DiagramError::Invalid("value has a pole at t = 1".into())))
            } else {
                Ok(n / dd)
            }
        }
    }
}

/// `w_c(D) = Σ_C sign(C) c(over strand)`.
pub fn colored_writhe(d: &Diagram) -> i64 {
    d.crossings()
        .map(|n| match d.nodes[n].kind {
            NodeKind::Crossing { sign, over } => sign.value() * d.edges[over].color as i64,
            NodeKind::Vertex => 0,
        })
        .sum()
}

fn require_link(d: &Diagram) -> Result<(), NormalizeError> {
    if d.vertex_count() > 0 {
        return Err(NormalizeError::NotALink);
    }
    Ok(())
}

/// The link value `t^{-w/2} (D)`, where `(D)` is the regular-isotopy value
/// `C(D) <D|δ> (t^{1/2} - t^{-1/2}) / |δ|`.
pub fn link_alexander(d: &Diagram, table: &WeightTable) -> Result<Rational, NormalizeError> {
    require_link(d)?;
    let r = normalized_delta(d, table)?;
    let w = colored_writhe(d);
    Ok(Rational::from(t_half(-w)) * r.delta)
}

/// Right-hand side of the potential formula, evaluated on the mirror image:
/// `-t^{-w_c(D*)/2} C(D*, c) |δ|^{-1} <D*|δ>`.
pub fn link_potential(d: &Diagram, table: &WeightTable) -> Result<Rational, NormalizeError> {
    require_link(d)?;
    let mut m = d.mirror();
    if m.delta.is_none() {
        let k = m.auto_basepoint()?;
        m = m.with_delta(k);
    }
    let rm = m.build_regions()?;
    if !rm.connected {
        return Ok(Rational::zero());
    }
    let b = statesum::bracket_with(&m, &rm, table)?;
    let num = &(&t_half(-colored_writhe(&m)) * &colored_curliness(&m)) * &b;
    Ok(-Rational::new(num, m.delta_weight(&rm)?)?)
}

/// True when `Δ(t) = Δ(t^{-1}) t^{k/4}` for some `k`, i.e. the value does not
/// detect chirality.
pub fn is_symmetric_up_to_unit(p: &Laurent) -> bool {
    let q = p.invert_variable();
    match (p.min_exp(), q.min_exp()) {
        (Some(a), Some(b)) => q.shift(a - b) == *p,
        _ => true,
    }
}

/// Signs of half twists to a monomial: convenience for tests.
pub fn twist_factor(color: u32, s: Sign) -> Laurent {
    Laurent::q_pow(color as i64 * s.value())
}

/// Each Kauffman state's share of `Δ`: the state's `M(s) A(s)` scaled by the
/// same factor as the full bracket. The shares sum to `Δ`.
pub fn state_contributions(
    d: &Diagram,
    table: &WeightTable,
) -> Result<Vec<(statesum::State, Rational)>, NormalizeError> {
    let mut d = d.clone();
    if d.delta.is_none() {
        let k = d.auto_basepoint()?;
        d = d.with_delta(k);
    }
    let rm = d.build_regions()?;
    if !rm.connected {
        return Ok(Vec::new());
    }
    let v = d.vertex_count();
    let num = &framing_factor(&d) * &colored_curliness(&d);
    let b1 = brace(1);
    let (num, den) =
        if v == 0 { (&num * &b1, d.delta_weight(&rm)?) } else { (num, &d.delta_weight(&rm)? * &b1.pow(v as u32 - 1)) };
    statesum::enumerate_states(&rm)
        .into_iter()
        .map(|s| {
            let w = statesum::state_weights(&rm, table, &s).value();
            Ok((s, Rational::new(&num * &w, den.clone())?))
        })
        .collect()
}
