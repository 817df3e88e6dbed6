//! Random diagrams and the two generic move appliers used for fuzzing:
//! Reidemeister II insertion and half-twist insertion.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::builder::{Op, Word};
use crate::diagram::{Basepoint, Dart, Diagram, Edge, End, Node, NodeKind, Sign};

/// Planar map with half-edges `2e`, `2e+1` of edge `e`.
struct Map {
    /// Outgoing half-edges per node, counterclockwise.
    rot: Vec<Vec<usize>>,
    node_of: Vec<usize>,
}

impl Map {
    fn theta() -> Map {
        // three edges from node 0 to node 1
        Map { rot: vec![vec![0, 2, 4], vec![1, 5, 3]], node_of: vec![0, 1, 0, 1, 0, 1] }
    }

    /// Next half-edge along the face on the right of `h`.
    fn face_next(&self, h: usize) -> usize {
        let t = h ^ 1;
        let r = &self.rot[self.node_of[t]];
        let p = r.iter().position(|&x| x == t).unwrap();
        r[(p + 1) % r.len()]
    }

    /// Faces as cycles of half-edges, the face on their right.
    fn faces(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut face_of = vec![usize::MAX; self.node_of.len()];
        let mut faces = Vec::new();
        for h in 0..self.node_of.len() {
            if face_of[h] != usize::MAX {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = h;
            while face_of[x] == usize::MAX {
                face_of[x] = faces.len();
                cyc.push(x);
                x = self.face_next(x);
            }
            faces.push(cyc);
        }
        (faces, face_of)
    }

    /// Subdivide the edge of `h` with a new node; returns the node and the
    /// slot where an edge into the face right of `h` goes.
    fn subdivide(&mut self, h: usize) -> usize {
        let u = self.rot.len();
        let f = self.node_of.len() / 2;
        let b = self.node_of[h ^ 1];
        // h now ends at u; the new edge f runs from u to the old far end
        self.node_of.push(u);
        self.node_of.push(b);
        for x in self.rot[b].iter_mut() {
            if *x == h ^ 1 {
                *x = 2 * f + 1;
            }
        }
        self.node_of[h ^ 1] = u;
        self.rot.push(vec![2 * f, h ^ 1]);
        u
    }

    /// Join two half-edges on a common face by a new edge through that face.
    fn insert_edge(&mut self, x: usize, y: usize) {
        let u = self.subdivide(x);
        let v = self.subdivide(y);
        let g = self.node_of.len() / 2;
        self.node_of.push(u);
        self.node_of.push(v);
        self.rot[u].push(2 * g);
        self.rot[v].push(2 * g + 1);
    }
}

/// A connected planar trivalent diagram with `2 + 2 * insertions` vertices and
/// a positive balanced coloring with colors in `1..=3`.
///
/// The coloring is the difference of face potentials taken from a proper
/// four-coloring of the faces, so each edge color is the jump in potential
/// across it and every vertex balances automatically.
pub fn random_planar_trivalent<R: Rng>(rng: &mut R, insertions: usize) -> Diagram {
    let mut m = Map::theta();
    for _ in 0..insertions {
        let (faces, _) = m.faces();
        loop {
            let f = faces.choose(rng).unwrap();
            let x = *f.choose(rng).unwrap();
            let y = *f.choose(rng).unwrap();
            if x / 2 != y / 2 {
                m.insert_edge(x, y);
                break;
            }
        }
    }
    let (faces, face_of) = m.faces();
    let mut adj = vec![Vec::new(); faces.len()];
    for h in (0..m.node_of.len()).step_by(2) {
        let (a, b) = (face_of[h], face_of[h + 1]);
        adj[a].push(b);
        adj[b].push(a);
    }
    let phi = loop {
        if let Some(p) = color_faces(&adj, rng) {
            break p;
        }
    };
    let ne = m.node_of.len() / 2;
    let mut edges = Vec::with_capacity(ne);
    let mut dart_of = vec![Dart::tail(0); 2 * ne];
    for e in 0..ne {
        let val = phi[face_of[2 * e]] - phi[face_of[2 * e + 1]];
        let (t, h) = if val > 0 { (2 * e, 2 * e + 1) } else { (2 * e + 1, 2 * e) };
        dart_of[t] = Dart::tail(e);
        dart_of[h] = Dart::head(e);
        edges.push(Edge {
            id: e as u32 + 1,
            color: val.unsigned_abs() as u32,
            tail: Some(m.node_of[t]),
            head: Some(m.node_of[h]),
            twists: Vec::new(),
        });
    }
    let nodes = m
        .rot
        .iter()
        .enumerate()
        .map(|(k, r)| Node {
            id: k as u32 + 1,
            kind: NodeKind::Vertex,
            rotation: r.iter().map(|&h| dart_of[h]).collect(),
        })
        .collect();
    let outer = dart_of[rng.gen_range(0..2 * ne)];
    Diagram { edges, nodes, outer: vec![outer], delta: None }
}

/// Potentials in `0..=3` differing across every edge, by randomized backtracking.
fn color_faces<R: Rng>(adj: &[Vec<usize>], rng: &mut R) -> Option<Vec<i64>> {
    let n = adj.len();
    let mut phi = vec![-1i64; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut budget = 10_000usize;
    fn go<R: Rng>(
        k: usize,
        order: &[usize],
        adj: &[Vec<usize>],
        phi: &mut [i64],
        rng: &mut R,
        budget: &mut usize,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let f = order[k];
        let mut vals = [0i64, 1, 2, 3];
        vals.shuffle(rng);
        for v in vals {
            if adj[f].iter().all(|&g| phi[g] != v) {
                phi[f] = v;
                if go(k + 1, order, adj, phi, rng, budget) {
                    return true;
                }
                phi[f] = -1;
            }
        }
        false
    }
    go(0, &order, adj, &mut phi, rng, &mut budget).then_some(phi)
}

/// Closure of a random braid on strands of colors `start`, with rungs (a
/// merge followed by a split) between neighbouring strands. Connected, with
/// at least one rung; colors never exceed the sum of two start colors.
pub fn random_braid_graph<R: Rng>(rng: &mut R, start: &[u32], steps: usize, max_crossings: usize) -> Diagram {
    assert!(start.len() >= 2, "need two strands");
    loop {
        let mut cols: Vec<u32> = start.to_vec();
        let mut ops = vec![Op::Delta(0)];
        let mut crossings = 0;
        let mut rungs = 0;
        let n = cols.len();
        let rung = |ops: &mut Vec<Op>, cols: &mut Vec<u32>, k: usize, left: u32| {
            ops.push(Op::Merge(k));
            ops.push(Op::Split { k, left });
            let sum = cols[k] + cols[k + 1];
            cols[k] = left;
            cols[k + 1] = sum - left;
        };
        for _ in 0..steps {
            let k = rng.gen_range(0..n - 1);
            if crossings < max_crossings && rng.gen_bool(0.6) {
                ops.push(Op::Cross { k, over_left: rng.gen() });
                cols.swap(k, k + 1);
                crossings += 1;
            } else {
                let sum = cols[k] + cols[k + 1];
                let left = rng.gen_range(1..sum);
                rung(&mut ops, &mut cols, k, left);
                rungs += 1;
            }
        }
        if rungs == 0 {
            let k = rng.gen_range(0..n - 1);
            let left = cols[k];
            rung(&mut ops, &mut cols, k, left);
        }
        // bring the top colors back to the bottom ones
        let mut k = 0;
        while k + 1 < n {
            if cols[k] != start[k] {
                if cols[k] + cols[k + 1] > start[k] {
                    rung(&mut ops, &mut cols, k, start[k]);
                } else {
                    for _ in k + 1..n {
                        ops.push(Op::Merge(k));
                    }
                    for m in k..n - 1 {
                        ops.push(Op::Split { k: m, left: start[m] });
                    }
                    cols[k..].copy_from_slice(&start[k..]);
                }
            }
            k += 1;
        }
        let d = Word::closed(start, ops).build().expect("random word closes");
        if d.components().count == 1 {
            return d;
        }
    }
}

/// Reidemeister II: push a finger of the edge of `x1` across the face on the
/// left of `x1` and over (or under) the edge of `x2`, which must border the
/// same face. Returns `None` when the two darts do not qualify.
pub fn insert_rii(d: &Diagram, x1: Dart, x2: Dart, over: bool) -> Option<Diagram> {
    let faces = d.faces();
    if x1.edge == x2.edge || faces.left_of(x1) != faces.left_of(x2) {
        return None;
    }
    if d.edges[x1.edge].is_free_loop() || d.edges[x2.edge].is_free_loop() {
        return None;
    }
    let mut out = d.clone();
    let next_node = out.nodes.iter().map(|n| n.id).max().unwrap_or(0) + 1;
    let next_edge = out.edges.iter().map(|e| e.id).max().unwrap_or(0) + 1;
    // Local picture: the face lies between edge 2 (along y = 0, below) and
    // edge 1 (along y = 2, above). The finger of edge 1 dips through y = 0 at
    // x = -1 and x = +1. Edge 1 runs rightward iff the face is on its right,
    // i.e. iff x1 is a head dart; edge 2 runs rightward iff x2 is a tail dart.
    let right1 = x1.end == End::Head;
    let right2 = x2.end == End::Tail;
    let (p1, p2) = (out.nodes.len(), out.nodes.len() + 1);
    for k in 0..2 {
        out.nodes.push(Node {
            id: next_node + k as u32,
            kind: NodeKind::Crossing { sign: Sign::Pos, over: 0 },
            rotation: Vec::new(),
        });
    }
    // crossing points in the order each edge meets them
    let order1 = if right1 { [p1, p2] } else { [p2, p1] };
    let order2 = if right2 { [p1, p2] } else { [p2, p1] };
    let segs1 = split_edge(&mut out, x1.edge, order1, next_edge);
    let segs2 = split_edge(&mut out, x2.edge, order2, next_edge + 2);
    // angles in quarter turns: edge 1 goes down at its first point and up at
    // its second; edge 2 goes east when running rightward
    for node in [p1, p2] {
        let k1 = order1.iter().position(|&p| p == node).unwrap();
        let k2 = order2.iter().position(|&p| p == node).unwrap();
        let (in1, out1) = (segs1[k1], segs1[k1 + 1]);
        let (in2, out2) = (segs2[k2], segs2[k2 + 1]);
        let down = k1 == 0;
        let (a_in1, a_out1) = if down { (1, 3) } else { (3, 1) };
        let (a_in2, a_out2) = if right2 { (2, 0) } else { (0, 2) };
        let mut darts = [
            (a_in1, Dart::head(in1)),
            (a_out1, Dart::tail(out1)),
            (a_in2, Dart::head(in2)),
            (a_out2, Dart::tail(out2)),
        ];
        darts.sort();
        out.nodes[node].rotation = darts.iter().map(|x| x.1).collect();
        let over_edge = if over { in1 } else { in2 };
        out.nodes[node].kind = NodeKind::Crossing { sign: Sign::Pos, over: over_edge };
    }
    for n in [p1, p2] {
        if let NodeKind::Crossing { over, .. } = out.nodes[n].kind {
            let f = out.crossing_frame(n)?;
            let sign = if f.in_a.edge == over { Sign::Pos } else { Sign::Neg };
            out.nodes[n].kind = NodeKind::Crossing { sign, over };
        }
    }
    out.validate().is_valid().then_some(out)
}

/// Cut edge `e` at the two new crossings `at`, in order along the edge.
/// Returns the three segments; the first keeps the original index.
fn split_edge(d: &mut Diagram, e: usize, at: [usize; 2], next_id: u32) -> [usize; 3] {
    let old_head = d.edges[e].head;
    let color = d.edges[e].color;
    let m = d.edges.len();
    d.edges.push(Edge { id: next_id, color, tail: Some(at[0]), head: Some(at[1]), twists: Vec::new() });
    d.edges.push(Edge { id: next_id + 1, color, tail: Some(at[1]), head: old_head, twists: Vec::new() });
    let n = m + 1;
    d.edges[e].head = Some(at[0]);
    if let Some(h) = old_head {
        for x in d.nodes[h].rotation.iter_mut() {
            if *x == Dart::head(e) {
                *x = Dart::head(n);
            }
        }
        if let NodeKind::Crossing { sign, over } = d.nodes[h].kind {
            if over == e {
                d.nodes[h].kind = NodeKind::Crossing { sign, over: n };
            }
        }
    }
    for x in d.outer.iter_mut() {
        if *x == Dart::head(e) {
            *x = Dart::head(n);
        }
    }
    [e, m, n]
}

/// Reidemeister II at a random pair of edges sharing a face.
pub fn random_rii<R: Rng>(d: &Diagram, rng: &mut R) -> Option<Diagram> {
    let faces = d.faces();
    let mut cands: Vec<(Dart, Dart)> = Vec::new();
    for f in &faces.faces {
        for &a in f {
            for &b in f {
                if a.edge != b.edge && !d.edges[a.edge].is_free_loop() && !d.edges[b.edge].is_free_loop() {
                    cands.push((a, b));
                }
            }
        }
    }
    let &(a, b) = cands.choose(rng)?;
    insert_rii(d, a, b, rng.gen())
}

/// Insert a cancelling pair of half twists on edge `e` at position `pos`.
pub fn insert_twist_pair(d: &Diagram, e: usize, pos: usize, first: Sign) -> Diagram {
    let mut out = d.clone();
    let tw = &mut out.edges[e].twists;
    let pos = pos.min(tw.len());
    tw.insert(pos, first.flip());
    tw.insert(pos, first);
    out
}

/// Insert one half twist on edge `e`; `Δ` picks up `t^{±c/4}`.
pub fn insert_twist(d: &Diagram, e: usize, s: Sign) -> Diagram {
    let mut out = d.clone();
    out.edges[e].twists.push(s);
    out
}

/// A random legal basepoint.
pub fn random_basepoint<R: Rng>(d: &Diagram, rng: &mut R) -> Option<Diagram> {
    let legal = d.legal_basepoints();
    let &e = legal.choose(rng)?;
    let mut out = d.clone();
    out.delta = Some(Basepoint { edge: e, position: 0 });
    Some(out)
}
