//! Building diagrams from a vertical word of local pieces.
//!
//! Strands sit at integer positions and are read bottom to top. Each op acts on
//! one or two neighbouring positions. The rotation at every node is read off
//! the picture: bottom darts left to right, then top darts right to left.

use crate::diagram::{Basepoint, Dart, Diagram, Edge, Node, NodeKind, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Positions `k` and `k+1` cross. `over_left`: the strand entering from
    /// the bottom-left is the over strand.
    Cross { k: usize, over_left: bool },
    /// Positions `k`, `k+1` meet in a vertex and continue as one strand.
    Merge(usize),
    /// Position `k` splits into two strands, the left one of color `left`.
    Split { k: usize, left: u32 },
    /// A vertex with one edge in and one edge out.
    Mark(usize),
    /// A half-twist marker on the strand at `k`.
    Twist(usize, Sign),
    /// New strands at positions `k`, `k+1` joined at the bottom. `left_up`:
    /// the left strand points up (so the right one points down).
    Cup { k: usize, color: u32, left_up: bool },
    /// Positions `k`, `k+1` joined at the top.
    Cap(usize),
    /// Put the basepoint on the strand at `k`.
    Delta(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// Top position `k` runs around the right side back to bottom position `k`.
    Braid,
    /// No closure arcs; the word must start and end with no strands.
    Plat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    /// Bottom strands: `(color, points_up)`.
    pub start: Vec<(u32, bool)>,
    pub ops: Vec<Op>,
    pub closure: Closure,
}

#[derive(Debug, Clone, Copy)]
struct Strand {
    edge: usize,
    up: bool,
}

struct Draft {
    edges: Vec<Edge>,
    nodes: Vec<Node>,
    delta: Option<usize>,
    /// Edges absorbed by `join` point at their survivor.
    alias: Vec<usize>,
}

impl Draft {
    fn new_edge(&mut self, color: u32) -> usize {
        self.edges.push(Edge { id: self.edges.len() as u32 + 1, color, tail: None, head: None, twists: Vec::new() });
        self.alias.push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    fn res(&self, mut e: usize) -> usize {
        while self.alias[e] != e {
            e = self.alias[e];
        }
        e
    }

    fn new_node(&mut self, kind: NodeKind) -> usize {
        self.nodes.push(Node { id: self.nodes.len() as u32 + 1, kind, rotation: Vec::new() });
        self.nodes.len() - 1
    }

    /// Attach the upper end of a strand coming from below to `node`.
    fn end_below(&mut self, s: Strand, node: usize) -> Dart {
        if s.up {
            self.edges[s.edge].head = Some(node);
            Dart::head(s.edge)
        } else {
            self.edges[s.edge].tail = Some(node);
            Dart::tail(s.edge)
        }
    }

    /// Start a new strand above `node`.
    fn start_above(&mut self, color: u32, up: bool, node: usize) -> (Strand, Dart) {
        let e = self.new_edge(color);
        if up {
            self.edges[e].tail = Some(node);
            (Strand { edge: e, up }, Dart::tail(e))
        } else {
            self.edges[e].head = Some(node);
            (Strand { edge: e, up }, Dart::head(e))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordError(pub String);

impl std::fmt::Display for WordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bad word: {}", self.0)
    }
}

impl std::error::Error for WordError {}

impl Word {
    pub fn braid(start: Vec<(u32, bool)>, ops: Vec<Op>) -> Word {
        Word { start, ops, closure: Closure::Braid }
    }

    pub fn plat(ops: Vec<Op>) -> Word {
        Word { start: Vec::new(), ops, closure: Closure::Plat }
    }

    /// Closed braid on upward strands of the given colors.
    pub fn closed(colors: &[u32], ops: Vec<Op>) -> Word {
        Word::braid(colors.iter().map(|&c| (c, true)).collect(), ops)
    }

    pub fn build(&self) -> Result<Diagram, WordError> {
        let err = |s: &str| Err(WordError(s.to_string()));
        let mut dr = Draft { edges: Vec::new(), nodes: Vec::new(), delta: None, alias: Vec::new() };
        let mut pos: Vec<Strand> = Vec::new();
        for &(c, up) in &self.start {
            let e = dr.new_edge(c);
            pos.push(Strand { edge: e, up });
        }
        let bottom: Vec<Strand> = pos.clone();
        // west darts of the strands at every height; west of the leftmost
        // strand of a component lies that component's unbounded face
        let mut slices: Vec<Vec<Dart>> = vec![pos.iter().map(|s| west_dart(*s)).collect()];
        for op in &self.ops {
            match *op {
                Op::Cross { k, over_left } => {
                    if k + 1 >= pos.len() {
                        return err("cross out of range");
                    }
                    let (l, r) = (pos[k], pos[k + 1]);
                    let n = dr.new_node(NodeKind::Crossing { sign: Sign::Pos, over: 0 });
                    let dl = dr.end_below(l, n);
                    let dr_ = dr.end_below(r, n);
                    // left strand continues at top-right, right strand at top-left
                    let (nr, tr) = dr.start_above(dr.edges[l.edge].color, l.up, n);
                    let (nl, tl) = dr.start_above(dr.edges[r.edge].color, r.up, n);
                    dr.nodes[n].rotation = vec![dl, dr_, tr, tl];
                    let over_strand = if over_left { (l, nr) } else { (r, nl) };
                    let over_in = if over_strand.0.up { over_strand.0.edge } else { over_strand.1.edge };
                    dr.nodes[n].kind = NodeKind::Crossing { sign: Sign::Pos, over: over_in };
                    pos[k] = nl;
                    pos[k + 1] = nr;
                }
                Op::Merge(k) => {
                    if k + 1 >= pos.len() {
                        return err("merge out of range");
                    }
                    let (l, r) = (pos[k], pos[k + 1]);
                    if l.up != r.up {
                        return err("merge of opposite strands");
                    }
                    let n = dr.new_node(NodeKind::Vertex);
                    let dl = dr.end_below(l, n);
                    let drr = dr.end_below(r, n);
                    let c = dr.edges[l.edge].color + dr.edges[r.edge].color;
                    let (s, t) = dr.start_above(c, l.up, n);
                    dr.nodes[n].rotation = vec![dl, drr, t];
                    pos.splice(k..k + 2, [s]);
                }
                Op::Split { k, left } => {
                    if k >= pos.len() {
                        return err("split out of range");
                    }
                    let s = pos[k];
                    let c = dr.edges[s.edge].color;
                    if left > c {
                        return err("split color too large");
                    }
                    let n = dr.new_node(NodeKind::Vertex);
                    let db = dr.end_below(s, n);
                    let (sr, tr) = dr.start_above(c - left, s.up, n);
                    let (sl, tl) = dr.start_above(left, s.up, n);
                    dr.nodes[n].rotation = vec![db, tr, tl];
                    pos.splice(k..k + 1, [sl, sr]);
                }
                Op::Mark(k) => {
                    if k >= pos.len() {
                        return err("mark out of range");
                    }
                    let s = pos[k];
                    let n = dr.new_node(NodeKind::Vertex);
                    let db = dr.end_below(s, n);
                    let (s2, t) = dr.start_above(dr.edges[s.edge].color, s.up, n);
                    dr.nodes[n].rotation = vec![db, t];
                    pos[k] = s2;
                }
                Op::Twist(k, sign) => {
                    if k >= pos.len() {
                        return err("twist out of range");
                    }
                    let s = pos[k];
                    if s.up {
                        dr.edges[s.edge].twists.push(sign);
                    } else {
                        dr.edges[s.edge].twists.insert(0, sign);
                    }
                }
                Op::Cup { k, color, left_up } => {
                    if k > pos.len() {
                        return err("cup out of range");
                    }
                    let e = dr.new_edge(color);
                    let a = Strand { edge: e, up: left_up };
                    let b = Strand { edge: e, up: !left_up };
                    pos.splice(k..k, [a, b]);
                }
                Op::Cap(k) => {
                    if k + 1 >= pos.len() {
                        return err("cap out of range");
                    }
                    let (l, r) = (pos[k], pos[k + 1]);
                    if l.up == r.up || dr.edges[l.edge].color != dr.edges[r.edge].color {
                        return err("cap needs opposite strands of equal color");
                    }
                    // the up strand flows into the down strand
                    let (from, to) = if l.up { (l.edge, r.edge) } else { (r.edge, l.edge) };
                    join(&mut dr, &mut pos, from, to);
                    pos.drain(k..k + 2);
                }
                Op::Delta(k) => {
                    if k >= pos.len() {
                        return err("delta out of range");
                    }
                    dr.delta = Some(pos[k].edge);
                }
            }
            slices.push(pos.iter().map(|s| west_dart(*s)).collect());
        }
        match self.closure {
            Closure::Braid => {
                if pos.len() != bottom.len() {
                    return err("braid closure needs as many strands at the top as at the bottom");
                }
                for k in 0..pos.len() {
                    let (top, bot) = (pos[k], bottom[k]);
                    let bot = Strand { edge: dr.res(bot.edge), up: bot.up };
                    if top.up != bot.up || dr.edges[top.edge].color != dr.edges[bot.edge].color {
                        return err("braid closure strand mismatch");
                    }
                }
                for k in 0..pos.len() {
                    let top = Strand { edge: dr.res(pos[k].edge), up: pos[k].up };
                    let bot = Strand { edge: dr.res(bottom[k].edge), up: bottom[k].up };
                    let (from, to) = if top.up { (top.edge, bot.edge) } else { (bot.edge, top.edge) };
                    if from != to {
                        join(&mut dr, &mut pos, from, to);
                    }
                }
            }
            Closure::Plat => {
                if !pos.is_empty() || !self.start.is_empty() {
                    return err("plat closure needs empty bottom and top");
                }
            }
        }
        if slices.iter().all(|s| s.is_empty()) {
            return err("empty diagram");
        }
        finish(dr, slices)
    }
}

fn west_dart(s: Strand) -> Dart {
    // west of an upward edge is its left side
    if s.up {
        Dart::tail(s.edge)
    } else {
        Dart::head(s.edge)
    }
}

/// Glue edge `from` (flowing into the junction) to edge `to` (flowing out):
/// `to` is absorbed into `from`.
fn join(dr: &mut Draft, pos: &mut [Strand], from: usize, to: usize) {
    if from == to {
        return;
    }
    let head = dr.edges[to].head;
    let mut tw = std::mem::take(&mut dr.edges[to].twists);
    dr.edges[from].head = head;
    dr.edges[from].twists.append(&mut tw);
    if let Some(h) = head {
        for d in dr.nodes[h].rotation.iter_mut() {
            if *d == Dart::head(to) {
                *d = Dart::head(from);
            }
        }
    }
    dr.edges[to].color = u32::MAX; // tombstone
    dr.alias[to] = from;
    for s in pos.iter_mut() {
        if s.edge == to {
            s.edge = from;
        }
    }
}

fn finish(dr: Draft, slices: Vec<Vec<Dart>>) -> Result<Diagram, WordError> {
    // drop tombstoned edges, remapping indices
    let mut map = vec![usize::MAX; dr.edges.len()];
    let mut edges = Vec::new();
    for (k, e) in dr.edges.into_iter().enumerate() {
        if e.color != u32::MAX {
            map[k] = edges.len();
            edges.push(e);
        }
    }
    let alias = dr.alias;
    let res = |mut e: usize| {
        while alias[e] != e {
            e = alias[e];
        }
        e
    };
    let remap = |d: Dart| Dart { edge: map[res(d.edge)], end: d.end };
    let mut nodes = dr.nodes;
    for n in nodes.iter_mut() {
        for d in n.rotation.iter_mut() {
            *d = remap(*d);
        }
        if let NodeKind::Crossing { sign, over } = n.kind {
            n.kind = NodeKind::Crossing { sign, over: map[res(over)] };
        }
    }
    let delta = dr.delta.map(|e| Basepoint { edge: map[res(e)], position: 0 });
    let mut d = Diagram { edges, nodes, outer: Vec::new(), delta };
    let comps = d.components();
    let mut seen = vec![false; comps.count];
    for x in slices.into_iter().flatten().map(remap) {
        let c = comps.edge_comp[x.edge];
        if !seen[c] {
            seen[c] = true;
            d.outer.push(x);
        }
    }
    d.normalize_ids();
    // crossing signs follow from rotation and over strand
    for n in 0..d.nodes.len() {
        if let NodeKind::Crossing { over, .. } = d.nodes[n].kind {
            let f = d.crossing_frame(n).ok_or_else(|| WordError("degenerate crossing".into()))?;
            let sign = if f.in_a.edge == over { Sign::Pos } else { Sign::Neg };
            d.nodes[n].kind = NodeKind::Crossing { sign, over };
        }
    }
    Ok(d)
}

/// Choose the over strand of crossing `node` so that it has sign `sign`.
pub fn set_sign(d: &mut Diagram, node: usize, sign: Sign) {
    let f = d.crossing_frame(node).expect("crossing");
    let over = match sign {
        Sign::Pos => f.in_a.edge,
        Sign::Neg => f.in_b.edge,
    };
    d.nodes[node].kind = NodeKind::Crossing { sign, over };
}

/// Switch a crossing.
pub fn switch_crossing(d: &mut Diagram, node: usize) {
    if let NodeKind::Crossing { sign, .. } = d.nodes[node].kind {
        set_sign(d, node, sign.flip());
    }
}

/// Replace every color `c` by `f(c)`.
pub fn recolor(d: &Diagram, f: impl Fn(usize, u32) -> u32) -> Diagram {
    let mut out = d.clone();
    for (k, e) in out.edges.iter_mut().enumerate() {
        e.color = f(k, e.color);
    }
    out
}
