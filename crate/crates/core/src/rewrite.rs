//! Evaluation through the MOY relations: formal sums of diagrams, local
//! rewrites, and a planar base case handled by the state sum.
//!
//! The rewrite loop resolves half-twists and crossings, removes zero-colored
//! edges, and lowers the maximal color until every diagram is planar with
//! colors at most 2.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Dart, Diagram, End, NodeKind};
use crate::normalize::{normalized_delta_with, Engine, NormalizeError};
use crate::weights::WeightTable;
use crate::{qint, t_half, Laurent, LaurentError, Rational};

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("no crossing with id {0}")]
    UnknownCrossing(u32),
    #[error("edge {edge} has no half-twist at index {index}")]
    UnknownTwist { edge: u32, index: usize },
    #[error("no edge of color above 2 to reduce")]
    NoReducibleEdge,
    #[error("edge {0} has non-positive color")]
    NonPositiveColor(u32),
    #[error("local pattern not found: {0}")]
    Pattern(String),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// A linear combination of diagrams with rational coefficients.
#[derive(Debug, Clone, Default)]
pub struct FormalSum {
    pub terms: Vec<(Rational, Diagram)>,
}

impl FormalSum {
    pub fn new() -> FormalSum {
        FormalSum::default()
    }

    pub fn single(d: Diagram) -> FormalSum {
        let mut s = FormalSum::new();
        s.push(Rational::one(), d);
        s
    }

    /// Add a term, merging it into a syntactically equal diagram if present.
    pub fn push(&mut self, coeff: Rational, mut d: Diagram) {
        if coeff.is_zero() {
            return;
        }
        d.normalize_ids();
        if let Some(k) = self.terms.iter().position(|(_, e)| *e == d) {
            let c = &self.terms[k].0 + &coeff;
            if c.is_zero() {
                self.terms.remove(k);
            } else {
                self.terms[k].0 = c;
            }
        } else {
            self.terms.push((coeff, d));
        }
    }

    pub fn scale(&self, c: &Rational) -> FormalSum {
        let mut out = FormalSum::new();
        for (k, d) in &self.terms {
            out.push(k * c, d.clone());
        }
        out
    }

    pub fn extend(&mut self, other: FormalSum) {
        for (k, d) in other.terms {
            self.push(k, d);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The rewrite rules, named by the local picture they act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    HalfTwist,
    Crossing,
    ZeroEdge,
    Disconnected,
    /// Brings the ends of a maximal-color edge to colors `1, m-1`.
    ColorLadder,
    /// Removes a maximal-color edge with ends `1, m-1`.
    ColorSquare,
    StateSum,
    /// A diagram already evaluated under another name.
    Memo,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::HalfTwist => "half-twist",
            Rule::Crossing => "crossing",
            Rule::ZeroEdge => "zero-edge",
            Rule::Disconnected => "disconnected",
            Rule::ColorLadder => "color-ladder",
            Rule::ColorSquare => "color-square",
            Rule::StateSum => "state-sum",
            Rule::Memo => "memo",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub depth: usize,
    pub rule: Rule,
    pub detail: String,
}

fn ratio(num: Laurent, den: Laurent) -> Rational {
    Rational::new(num, den).expect("nonzero quantum integer denominator")
}

/// Local surgery on a diagram. Nodes and edges are killed in place and
/// compacted at the end; `alias` follows edges merged into others.
#[derive(Clone)]
struct Surgery {
    d: Diagram,
    outer_faces: Vec<Vec<Dart>>,
    dead_nodes: Vec<bool>,
    dead_edges: Vec<bool>,
    alias: Vec<usize>,
    next_edge_id: u32,
    next_node_id: u32,
}

impl Surgery {
    fn new(d: &Diagram) -> Surgery {
        let faces = d.faces();
        let outer_faces = d.outer.iter().map(|&o| faces.faces[faces.left_of(o)].clone()).collect();
        Surgery {
            d: d.clone(),
            outer_faces,
            dead_nodes: vec![false; d.nodes.len()],
            dead_edges: vec![false; d.edges.len()],
            alias: (0..d.edges.len()).collect(),
            next_edge_id: d.edges.iter().map(|e| e.id).max().unwrap_or(0) + 1,
            next_node_id: d.nodes.iter().map(|n| n.id).max().unwrap_or(0) + 1,
        }
    }

    fn find(&self, mut e: usize) -> usize {
        while self.alias[e] != e {
            e = self.alias[e];
        }
        e
    }

    fn edge(&mut self, color: u32) -> usize {
        self.d.edges.push(crate::diagram::Edge {
            id: self.next_edge_id,
            color,
            tail: None,
            head: None,
            twists: vec![],
        });
        self.next_edge_id += 1;
        self.dead_edges.push(false);
        self.alias.push(self.d.edges.len() - 1);
        self.d.edges.len() - 1
    }

    fn set_end(&mut self, x: Dart, node: Option<usize>) {
        match x.end {
            End::Tail => self.d.edges[x.edge].tail = node,
            End::Head => self.d.edges[x.edge].head = node,
        }
    }

    /// A new vertex; its darts are attached to it.
    fn vertex(&mut self, rotation: Vec<Dart>) -> usize {
        let n = self.d.nodes.len();
        for &x in &rotation {
            self.set_end(x, Some(n));
        }
        self.d.nodes.push(crate::diagram::Node { id: self.next_node_id, kind: NodeKind::Vertex, rotation });
        self.next_node_id += 1;
        self.dead_nodes.push(false);
        n
    }

    /// Put dart `new` where `old` sits at `node`.
    fn replace(&mut self, node: usize, old: Dart, new: Dart) {
        let r = &mut self.d.nodes[node].rotation;
        let k = r.iter().position(|&x| x == old).expect("dart at node");
        r[k] = new;
        self.set_end(new, Some(node));
    }

    fn kill_node(&mut self, n: usize) {
        self.dead_nodes[n] = true;
    }

    fn kill_edge(&mut self, e: usize) {
        self.dead_edges[e] = true;
    }

    /// Merge `q` into `p` where `p` enters and `q` leaves a killed node.
    fn join(&mut self, p: usize, q: usize) {
        let (p, q) = (self.find(p), self.find(q));
        if p == q {
            self.d.edges[p].tail = None;
            self.d.edges[p].head = None;
            return;
        }
        let h = self.d.edges[q].head;
        self.d.edges[p].head = h;
        if let Some(h) = h {
            let r = &mut self.d.nodes[h].rotation;
            if let Some(k) = r.iter().position(|&x| x == Dart::head(q)) {
                r[k] = Dart::head(p);
            }
        }
        let tw = std::mem::take(&mut self.d.edges[q].twists);
        self.d.edges[p].twists.extend(tw);
        for n in &mut self.d.nodes {
            if let NodeKind::Crossing { sign, over } = n.kind {
                if over == q {
                    n.kind = NodeKind::Crossing { sign, over: p };
                }
            }
        }
        self.alias[q] = p;
        self.dead_edges[q] = true;
    }

    fn finish(self) -> Diagram {
        let mut edge_map = vec![usize::MAX; self.d.edges.len()];
        let mut edges = Vec::new();
        for (k, e) in self.d.edges.iter().enumerate() {
            if !self.dead_edges[k] {
                edge_map[k] = edges.len();
                edges.push(e.clone());
            }
        }
        let mut node_map = vec![usize::MAX; self.d.nodes.len()];
        let mut nodes = Vec::new();
        for (k, n) in self.d.nodes.iter().enumerate() {
            if !self.dead_nodes[k] {
                node_map[k] = nodes.len();
                nodes.push(n.clone());
            }
        }
        let map_dart = |x: Dart| Dart { edge: edge_map[x.edge], end: x.end };
        for e in &mut edges {
            e.tail = e.tail.map(|n| node_map[n]);
            e.head = e.head.map(|n| node_map[n]);
            debug_assert!(e.tail != Some(usize::MAX) && e.head != Some(usize::MAX), "edge left at a killed node");
        }
        for n in &mut nodes {
            n.rotation = n.rotation.iter().map(|&x| map_dart(x)).collect();
            if let NodeKind::Crossing { sign, over } = n.kind {
                n.kind = NodeKind::Crossing { sign, over: edge_map[self.find(over)] };
            }
        }
        let mut d = Diagram { edges, nodes, outer: vec![], delta: None };
        let comps = d.components();
        let mut outer: Vec<Option<Dart>> = vec![None; comps.count];
        let survivors = self.outer_faces.iter().flatten().filter_map(|&x| {
            let e = self.find(x.edge);
            (!self.dead_edges[e]).then(|| Dart { edge: edge_map[e], end: x.end })
        });
        for x in survivors {
            let c = comps.edge_comp[x.edge];
            if outer[c].is_none() {
                outer[c] = Some(x);
            }
        }
        for (k, _) in d.edges.iter().enumerate() {
            let c = comps.edge_comp[k];
            if outer[c].is_none() {
                outer[c] = Some(Dart::tail(k));
            }
        }
        d.outer = outer.into_iter().flatten().collect();
        d
    }
}

fn color_check(d: &Diagram, darts: &[Dart]) -> Result<(), RewriteError> {
    for x in darts {
        if d.edges[x.edge].color == 0 {
            return Err(RewriteError::NonPositiveColor(d.edges[x.edge].id));
        }
    }
    Ok(())
}

/// Replace a crossing by its two planar resolutions: a ladder whose rung
/// carries the color difference and a merge-split through the color sum.
pub fn resolve_crossing(d: &Diagram, crossing: u32) -> Result<FormalSum, RewriteError> {
    let node =
        d.node_index(crossing).filter(|&n| !d.nodes[n].is_vertex()).ok_or(RewriteError::UnknownCrossing(crossing))?;
    let NodeKind::Crossing { sign, .. } = d.nodes[node].kind else { unreachable!() };
    let f = d.crossing_frame(node).ok_or(RewriteError::UnknownCrossing(crossing))?;
    color_check(d, &[f.in_a, f.in_b])?;
    let (i, j) = (d.edges[f.in_a.edge].color as i64, d.edges[f.in_b.edge].color as i64);
    let s = sign.value();
    let (ea, eb, ene, enw) = (f.in_a.edge, f.in_b.edge, f.out_a.edge, f.out_b.edge);

    let ladder_coeff = ratio(-t_half(s * (i + j)), &qint(i) * &qint(j));
    let (split_num, split_den) = if i <= j { (j, &qint(i) * &qint(i + j)) } else { (i, &qint(j) * &qint(i + j)) };
    let split_coeff = ratio(t_half(s * split_num), split_den);

    let mut lad = Surgery::new(d);
    lad.kill_node(node);
    let r = lad.edge((i - j).unsigned_abs() as u32);
    if i <= j {
        lad.vertex(vec![Dart::head(ea), Dart::head(r), Dart::tail(enw)]);
        lad.vertex(vec![Dart::head(eb), Dart::tail(ene), Dart::tail(r)]);
    } else {
        lad.vertex(vec![Dart::head(ea), Dart::tail(r), Dart::tail(enw)]);
        lad.vertex(vec![Dart::head(eb), Dart::tail(ene), Dart::head(r)]);
    }

    let mut ms = Surgery::new(d);
    ms.kill_node(node);
    let mid = ms.edge((i + j) as u32);
    ms.vertex(vec![Dart::head(eb), Dart::tail(mid), Dart::head(ea)]);
    ms.vertex(vec![Dart::tail(ene), Dart::tail(enw), Dart::head(mid)]);

    let mut out = FormalSum::new();
    out.push(ladder_coeff, lad.finish());
    out.push(split_coeff, ms.finish());
    Ok(out)
}

/// Delete one half-twist mark: `t^{±i/4}` times the unmarked diagram.
pub fn remove_half_twist(d: &Diagram, edge: u32, index: usize) -> Result<FormalSum, RewriteError> {
    let k = d.edge_index(edge).ok_or(RewriteError::UnknownTwist { edge, index })?;
    if index >= d.edges[k].twists.len() {
        return Err(RewriteError::UnknownTwist { edge, index });
    }
    let mut out = d.clone();
    let s = out.edges[k].twists.remove(index);
    let c = out.edges[k].color as i64;
    Ok(FormalSum { terms: vec![(Rational::from(Laurent::q_pow(s.value() * c)), out)] })
}

/// Remove a zero-colored edge between two trivalent vertices, smoothing both
/// ends: the coefficient is `[a][b]` for the two through-strand colors.
pub fn remove_zero_edge(d: &Diagram, edge: u32) -> Result<FormalSum, RewriteError> {
    let z = d.edge_index(edge).ok_or_else(|| RewriteError::Pattern(format!("no edge {edge}")))?;
    let ze = &d.edges[z];
    if ze.color != 0 {
        return Err(RewriteError::Pattern(format!("edge {edge} is not zero-colored")));
    }
    let mut coeff = Laurent::one();
    let mut s = Surgery::new(d);
    s.kill_edge(z);
    let (Some(t), Some(h)) = (ze.tail, ze.head) else {
        // a zero-colored free loop contributes nothing
        return Err(RewriteError::Pattern(format!("edge {edge} is a zero-colored loop")));
    };
    if t == h {
        return Err(RewriteError::Pattern(format!("edge {edge} is a zero-colored self-loop")));
    }
    for n in [t, h] {
        let node = &d.nodes[n];
        if !node.is_vertex() || node.rotation.len() != 3 {
            return Err(RewriteError::Pattern(format!("edge {edge} does not end at trivalent vertices")));
        }
        let rest: Vec<Dart> = node.rotation.iter().copied().filter(|x| x.edge != z).collect();
        let (p, q) = match (rest[0].is_incoming(), rest[1].is_incoming()) {
            (true, false) => (rest[0].edge, rest[1].edge),
            (false, true) => (rest[1].edge, rest[0].edge),
            _ => return Err(RewriteError::Pattern(format!("vertex {} is not a through-vertex", node.id))),
        };
        coeff = &coeff * &qint(d.edges[p].color as i64);
        s.kill_node(n);
        s.join(p, q);
    }
    Ok(FormalSum { terms: vec![(Rational::from(coeff), s.finish())] })
}

pub fn max_color(d: &Diagram) -> u32 {
    d.edges.iter().map(|e| e.color).max().unwrap_or(0)
}

/// Lower the maximal color once. The chosen edge of color `m > 2` runs from a
/// merge of `j, m-j` to a split into `l, m-l`; its ends are first rewritten to
/// `1, m-1` and the edge is then replaced by a square of colors at most `m-1`
/// plus a pair of straight strands.
pub fn reduce_color_step(d: &Diagram) -> Result<FormalSum, RewriteError> {
    let m = max_color(d);
    if m <= 2 {
        return Err(RewriteError::NoReducibleEdge);
    }
    let e = (0..d.edges.len())
        .find(|&k| d.edges[k].color == m && !d.edges[k].is_free_loop())
        .ok_or(RewriteError::NoReducibleEdge)?;
    if !d.edges[e].twists.is_empty() {
        return Err(RewriteError::Pattern("maximal-color edge carries half-twists".into()));
    }
    let (v1, v2) = (d.edges[e].tail.unwrap(), d.edges[e].head.unwrap());
    for v in [v1, v2] {
        if !d.nodes[v].is_vertex() || d.nodes[v].rotation.len() != 3 {
            return Err(RewriteError::Pattern("maximal-color edge does not join trivalent vertices".into()));
        }
    }
    let r1 = &d.nodes[v1].rotation;
    let p1 = r1.iter().position(|&x| x == Dart::tail(e)).unwrap();
    let (a, b) = (r1[(p1 + 1) % 3], r1[(p1 + 2) % 3]);
    let r2 = &d.nodes[v2].rotation;
    let p2 = r2.iter().position(|&x| x == Dart::head(e)).unwrap();
    let (dd, c) = (r2[(p2 + 1) % 3], r2[(p2 + 2) % 3]);
    if !(a.is_incoming() && b.is_incoming() && !c.is_incoming() && !dd.is_incoming()) {
        return Err(RewriteError::Pattern("maximal-color edge is not between a merge and a split".into()));
    }
    color_check(d, &[a, b, c, dd])?;
    let mi = m as i64;
    let (j, l) = (d.edges[a.edge].color as i64, d.edges[c.edge].color as i64);

    let mut s = Surgery::new(d);
    let mut scalar = Laurent::one();
    let (mut a1, mut b1, mut c1, mut d1) = (a.edge, b.edge, c.edge, dd.edge);
    if j >= 2 {
        let a2 = s.edge(1);
        let rung = s.edge(j as u32 - 1);
        let b2 = s.edge(m - 1);
        s.vertex(vec![Dart::head(a1), Dart::tail(rung), Dart::tail(a2)]);
        s.vertex(vec![Dart::head(b1), Dart::tail(b2), Dart::head(rung)]);
        s.replace(v1, Dart::head(a1), Dart::head(a2));
        s.replace(v1, Dart::head(b1), Dart::head(b2));
        (a1, b1) = (a2, b2);
        scalar = &scalar * &(&qint(j) * &qint(mi - 1));
    }
    if l >= 2 {
        let c2 = s.edge(1);
        let rung = s.edge(l as u32 - 1);
        let d2 = s.edge(m - 1);
        s.vertex(vec![Dart::head(c2), Dart::head(rung), Dart::tail(c1)]);
        s.vertex(vec![Dart::head(d2), Dart::tail(d1), Dart::tail(rung)]);
        s.replace(v2, Dart::tail(c1), Dart::tail(c2));
        s.replace(v2, Dart::tail(d1), Dart::tail(d2));
        (c1, d1) = (c2, d2);
        scalar = &scalar * &(&qint(l) * &qint(mi - 1));
    }

    let mut sq = s.clone();
    sq.kill_node(v1);
    sq.kill_node(v2);
    sq.kill_edge(e);
    let u = sq.edge(2);
    let v = sq.edge(m - 2);
    let rb = sq.edge(1);
    let rt = sq.edge(1);
    sq.vertex(vec![Dart::head(a1), Dart::head(rb), Dart::tail(u)]);
    sq.vertex(vec![Dart::head(b1), Dart::tail(v), Dart::tail(rb)]);
    sq.vertex(vec![Dart::head(u), Dart::tail(rt), Dart::tail(c1)]);
    sq.vertex(vec![Dart::head(v), Dart::tail(d1), Dart::head(rt)]);

    let mut id = s;
    id.kill_node(v1);
    id.kill_node(v2);
    id.kill_edge(e);
    id.join(a1, c1);
    id.join(b1, d1);

    let sq_coeff = ratio(qint(mi), &(&(&qint(1) * &qint(2)) * &qint(mi - 1)) * &scalar);
    let id_coeff = ratio(-(&qint(mi - 2) * &qint(mi)), scalar);
    let mut out = FormalSum::new();
    out.push(sq_coeff, sq.finish());
    out.push(id_coeff, id.finish());
    Ok(out)
}

/// Lexicographic termination measure of the rewrite loop.
pub fn measure(d: &Diagram) -> (usize, u32, usize, usize) {
    let m = max_color(d);
    let top = d.edges.iter().filter(|e| e.color == m && !e.is_free_loop()).count();
    let zero = d.edges.iter().filter(|e| e.color == 0).count();
    (d.crossing_count() + d.twist_count(), m, top, zero)
}

/// Knobs of the rewrite loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Lower colors above 2 only on planar diagrams with at most this many
    /// vertices; larger ones go to the base case as they are. `None` lowers
    /// every color, which can grow the planar diagrams exponentially.
    pub reduce_limit: Option<usize>,
    /// Bracket engine of the base case.
    pub base: Engine,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { reduce_limit: Some(DEFAULT_REDUCE_LIMIT), base: Engine::StateSum }
    }
}

pub const DEFAULT_REDUCE_LIMIT: usize = 12;

impl EvalOptions {
    /// Lower every color to at most 2 before the base case.
    pub fn full() -> Self {
        EvalOptions { reduce_limit: None, base: Engine::Determinant }
    }
}

struct Ctx<'a> {
    table: &'a WeightTable,
    opts: EvalOptions,
    trace: Option<Mutex<Vec<TraceStep>>>,
    memo: Mutex<HashMap<Vec<i64>, Rational>>,
}

impl Ctx<'_> {
    fn log(&self, depth: usize, rule: Rule, detail: impl FnOnce() -> String) {
        if let Some(t) = &self.trace {
            t.lock().unwrap().push(TraceStep { depth, rule, detail: detail() });
        }
    }

    fn step(&self, d: &Diagram, depth: usize, rule: Rule, fs: FormalSum) -> Result<Rational, RewriteError> {
        let before = measure(d);
        for (_, e) in &fs.terms {
            assert!(measure(e) < before, "{rule} did not decrease the termination measure");
        }
        self.log(depth, rule, || format!("{} term(s)", fs.len()));
        self.sum(&fs, depth + 1)
    }

    fn sum(&self, fs: &FormalSum, depth: usize) -> Result<Rational, RewriteError> {
        let eval = |(k, d): &(Rational, Diagram)| self.diagram(d, depth).map(|v| k * &v);
        let vals: Vec<Rational> = if self.trace.is_some() {
            fs.terms.iter().map(eval).collect::<Result<_, _>>()?
        } else {
            fs.terms.par_iter().map(eval).collect::<Result<_, _>>()?
        };
        Ok(vals.into_iter().sum())
    }

    fn diagram(&self, d: &Diagram, depth: usize) -> Result<Rational, RewriteError> {
        let key = d.canonical_code();
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            self.log(depth, Rule::Memo, || v.to_string());
            return Ok(v.clone());
        }
        let v = self.rewrite(d, depth)?;
        self.memo.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    fn rewrite(&self, d: &Diagram, depth: usize) -> Result<Rational, RewriteError> {
        if let Some(z) = d.edges.iter().find(|e| e.color == 0) {
            let fs = remove_zero_edge(d, z.id)?;
            return self.step(d, depth, Rule::ZeroEdge, fs);
        }
        if d.components().count > 1 {
            self.log(depth, Rule::Disconnected, || "0".into());
            return Ok(Rational::zero());
        }
        if let Some(e) = d.edges.iter().find(|e| !e.twists.is_empty()) {
            let fs = remove_half_twist(d, e.id, 0)?;
            return self.step(d, depth, Rule::HalfTwist, fs);
        }
        if let Some(c) = d.crossings().next() {
            let fs = resolve_crossing(d, d.nodes[c].id)?;
            return self.step(d, depth, Rule::Crossing, fs);
        }
        let small = self.opts.reduce_limit.is_none_or(|k| d.vertex_count() <= k);
        if small && max_color(d) > 2 && d.edges.iter().any(|e| !e.is_free_loop()) {
            let fs = reduce_color_step(d)?;
            return self.step(d, depth, Rule::ColorSquare, fs);
        }
        let v = normalized_delta_with(d, self.table, self.opts.base)?.delta;
        self.log(depth, Rule::StateSum, || v.to_string());
        Ok(v)
    }
}

fn check_positive(fs: &FormalSum) -> Result<(), RewriteError> {
    for (_, d) in &fs.terms {
        for v in d.vertices() {
            if d.nodes[v].rotation.len() != 3 {
                return Err(RewriteError::Pattern(format!("vertex {} is not trivalent", d.nodes[v].id)));
            }
        }
        if let Some(e) = d.edges.iter().find(|e| e.color == 0) {
            return Err(RewriteError::NonPositiveColor(e.id));
        }
    }
    Ok(())
}

/// Evaluate a formal sum of framed trivalent positively colored diagrams.
pub fn evaluate(fs: &FormalSum, table: &WeightTable) -> Result<Rational, RewriteError> {
    evaluate_with(fs, table, EvalOptions::default())
}

pub fn evaluate_with(fs: &FormalSum, table: &WeightTable, opts: EvalOptions) -> Result<Rational, RewriteError> {
    check_positive(fs)?;
    Ctx { table, opts, trace: None, memo: Default::default() }.sum(fs, 0)
}

/// As [`evaluate_with`], sequentially, recording every applied rule.
pub fn evaluate_traced(
    fs: &FormalSum,
    table: &WeightTable,
    opts: EvalOptions,
) -> Result<(Rational, Vec<TraceStep>), RewriteError> {
    check_positive(fs)?;
    let ctx = Ctx { table, opts, trace: Some(Mutex::new(Vec::new())), memo: Default::default() };
    let v = ctx.sum(fs, 0)?;
    Ok((v, ctx.trace.unwrap().into_inner().unwrap()))
}

/// Value of one diagram through the rewrite pipeline.
pub fn evaluate_diagram(d: &Diagram, table: &WeightTable) -> Result<Rational, RewriteError> {
    evaluate(&FormalSum::single(d.clone()), table)
}
