//! Combinatorial MOY diagrams on the sphere: a rotation system with a designated
//! outer face, plus the derived faces, regions, corners and region indices.
//!
//! A *dart* is one end of an edge seen from the node it is attached to, pointing
//! away from that node. The tail dart of `e` points along `e`, the head dart
//! points against it. In files the tail dart is written `e+`, the head dart `e-`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::Laurent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Tail,
    Head,
}

/// An edge end, pointing away from the node it is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub end: End,
}

impl Dart {
    pub fn tail(edge: usize) -> Dart {
        Dart { edge, end: End::Tail }
    }

    pub fn head(edge: usize) -> Dart {
        Dart { edge, end: End::Head }
    }

    pub fn rev(self) -> Dart {
        Dart {
            edge: self.edge,
            end: match self.end {
                End::Tail => End::Head,
                End::Head => End::Tail,
            },
        }
    }

    /// Index into per-dart arrays.
    pub fn slot(self) -> usize {
        2 * self.edge + (self.end == End::Head) as usize
    }

    pub fn is_incoming(self) -> bool {
        self.end == End::Head
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: u32,
    pub color: u32,
    pub tail: Option<usize>,
    pub head: Option<usize>,
    pub twists: Vec<Sign>,
}

impl Edge {
    pub fn is_free_loop(&self) -> bool {
        self.tail.is_none() && self.head.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Vertex,
    /// `over` is the edge entering the crossing on the over strand.
    Crossing {
        sign: Sign,
        over: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: u32,
    pub kind: NodeKind,
    /// Darts in counterclockwise order.
    pub rotation: Vec<Dart>,
}

impl Node {
    pub fn is_vertex(&self) -> bool {
        self.kind == NodeKind::Vertex
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basepoint {
    pub edge: usize,
    pub position: u32,
}

/// A colored MOY diagram. Edges and nodes are addressed by their index; the
/// `id` fields are the external names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub edges: Vec<Edge>,
    pub nodes: Vec<Node>,
    /// One dart per connected component whose left face is that component's
    /// unbounded face. The first entry designates the outer face of the diagram.
    pub outer: Vec<Dart>,
    pub delta: Option<Basepoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("basepoint is not set")]
    BasepointMissing,
    #[error("basepoint lies on an edge of color 0")]
    ZeroColorBasepoint,
    #[error("basepoint edge {0} is an embedded bridge")]
    BasepointOnBridge(u32),
    #[error("inconsistent region indices at edge {0}")]
    InconsistentIndices(u32),
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("no legal basepoint: every edge is zero-colored or a bridge")]
    NoLegalBasepoint,
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("no outer face designated for the component containing edge {0}")]
    MissingOuter(u32),
}

/// One violated invariant, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub element: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, element: String, message: impl Into<String>) {
        self.violations.push(Violation { element, message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The four ports of a crossing rotated so that both strands point upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingFrame {
    /// Incoming darts: `in_a` at south-west, `in_b` at south-east.
    pub in_a: Dart,
    pub in_b: Dart,
    /// Outgoing darts: `out_a` at north-east, `out_b` at north-west.
    pub out_a: Dart,
    pub out_b: Dart,
}

impl Diagram {
    pub fn edge_index(&self, id: u32) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn node_index(&self, id: u32) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].is_vertex())
    }

    pub fn crossings(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&n| !self.nodes[n].is_vertex())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().count()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings().count()
    }

    pub fn twist_count(&self) -> usize {
        self.edges.iter().map(|e| e.twists.len()).sum()
    }

    /// Node a dart is attached to.
    pub fn dart_node(&self, d: Dart) -> Option<usize> {
        let e = &self.edges[d.edge];
        match d.end {
            End::Tail => e.tail,
            End::Head => e.head,
        }
    }

    pub fn color(&self, d: Dart) -> u32 {
        self.edges[d.edge].color
    }

    /// Position of every attached dart in its node's rotation.
    pub fn dart_positions(&self) -> Vec<Option<(usize, usize)>> {
        let mut pos = vec![None; 2 * self.edges.len()];
        for (n, node) in self.nodes.iter().enumerate() {
            for (k, d) in node.rotation.iter().enumerate() {
                if d.edge < self.edges.len() {
                    pos[d.slot()] = Some((n, k));
                }
            }
        }
        pos
    }

    /// Code of the embedded diagram up to renaming of edges and nodes: two
    /// diagrams get equal codes exactly when an orientation-preserving
    /// relabeling maps one onto the other, keeping colors, crossing data,
    /// half-twists and the outer face.
    pub fn canonical_code(&self) -> Vec<i64> {
        let pos = self.dart_positions();
        let faces = self.faces();
        let outer = self.outer.first().map(|&o| faces.left_of(o));
        let twist_code = |e: &Edge, out: &mut Vec<i64>| {
            out.push(e.twists.len() as i64);
            out.extend(e.twists.iter().map(|s| s.value()));
        };
        let mut loops: Vec<Vec<i64>> = self
            .edges
            .iter()
            .filter(|e| e.is_free_loop())
            .map(|e| {
                let mut c = vec![e.color as i64];
                twist_code(e, &mut c);
                c
            })
            .collect();
        loops.sort();
        let mut head = vec![loops.len() as i64];
        head.extend(loops.into_iter().flatten());

        let mut best: Option<Vec<i64>> = None;
        let n = self.nodes.len();
        for (start, node) in self.nodes.iter().enumerate() {
            for off0 in 0..node.rotation.len() {
                let mut num = vec![usize::MAX; n];
                let mut off = vec![0usize; n];
                let mut order = vec![start];
                num[start] = 0;
                off[start] = off0;
                let mut q = 0;
                while q < order.len() {
                    let v = order[q];
                    q += 1;
                    let r = &self.nodes[v].rotation;
                    for k in 0..r.len() {
                        let x = r[(off[v] + k) % r.len()];
                        if let Some((m, p)) = pos[x.rev().slot()] {
                            if num[m] == usize::MAX {
                                num[m] = order.len();
                                off[m] = p;
                                order.push(m);
                            }
                        }
                    }
                }
                let mut code = head.clone();
                code.push((n - order.len()) as i64);
                for &v in &order {
                    let r = &self.nodes[v].rotation;
                    let deg = r.len();
                    match self.nodes[v].kind {
                        NodeKind::Vertex => code.extend([0, deg as i64]),
                        NodeKind::Crossing { sign, over } => {
                            let k = (0..deg).find(|&k| {
                                let x = r[(off[v] + k) % deg];
                                x.edge == over && x.is_incoming()
                            });
                            code.extend([1, sign.value(), k.map_or(-1, |k| k as i64)]);
                        }
                    }
                    for k in 0..deg {
                        let x = r[(off[v] + k) % deg];
                        let e = &self.edges[x.edge];
                        let (m, p) = pos[x.rev().slot()].expect("attached edge");
                        let dm = self.nodes[m].rotation.len();
                        code.extend([
                            e.color as i64,
                            x.is_incoming() as i64,
                            num[m] as i64,
                            ((p + dm - off[m]) % dm) as i64,
                            (Some(faces.left_of(x)) == outer) as i64,
                        ]);
                        if !x.is_incoming() {
                            twist_code(e, &mut code);
                        }
                    }
                }
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap_or(head)
    }

    /// Port layout of a crossing node.
    pub fn crossing_frame(&self, node: usize) -> Option<CrossingFrame> {
        let r = &self.nodes[node].rotation;
        if r.len() != 4 {
            return None;
        }
        let k = (0..4).find(|&k| r[k].is_incoming() && r[(k + 1) % 4].is_incoming())?;
        Some(CrossingFrame { in_a: r[k], in_b: r[(k + 1) % 4], out_a: r[(k + 2) % 4], out_b: r[(k + 3) % 4] })
    }

    /// Check every structural invariant; never fails, reports instead.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert(e.id) {
                rep.push(format!("edge {}", e.id), "duplicate edge id");
            }
        }
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.id) {
                rep.push(format!("node {}", n.id), "duplicate node id");
            }
        }
        // endpoint <-> rotation consistency
        let mut count = vec![0usize; 2 * self.edges.len()];
        for node in &self.nodes {
            for d in &node.rotation {
                if d.edge >= self.edges.len() {
                    rep.push(format!("node {}", node.id), "rotation refers to a missing edge");
                    continue;
                }
                count[d.slot()] += 1;
                if self.dart_node(*d).map(|n| self.nodes[n].id) != Some(node.id) {
                    rep.push(
                        format!("node {}", node.id),
                        format!("half-edge of edge {} is not attached here", self.edges[d.edge].id),
                    );
                }
            }
        }
        for (k, e) in self.edges.iter().enumerate() {
            if e.tail.is_some() != e.head.is_some() {
                rep.push(format!("edge {}", e.id), "edge has only one endpoint");
            }
            for d in [Dart::tail(k), Dart::head(k)] {
                if self.dart_node(d).is_some() && count[d.slot()] != 1 {
                    rep.push(format!("edge {}", e.id), "endpoint missing from (or repeated in) its node rotation");
                }
                if let Some(n) = self.dart_node(d) {
                    if n >= self.nodes.len() {
                        rep.push(format!("edge {}", e.id), "endpoint refers to a missing node");
                    }
                }
            }
        }
        if !rep.is_valid() {
            return rep;
        }
        for node in &self.nodes {
            match node.kind {
                NodeKind::Vertex => self.validate_vertex(node, &mut rep),
                NodeKind::Crossing { .. } => self.validate_crossing(node, &mut rep),
            }
        }
        if self.outer.is_empty() {
            rep.push("outer".into(), "no outer face designated");
        }
        let comp = self.components();
        let mut outer_comps = BTreeSet::new();
        for d in &self.outer {
            if d.edge >= self.edges.len() {
                rep.push("outer".into(), "outer half-edge refers to a missing edge");
            } else if !outer_comps.insert(comp.edge_comp[d.edge]) {
                rep.push("outer".into(), "two outer half-edges in one component");
            }
        }
        if !self.outer.is_empty() {
            for (k, e) in self.edges.iter().enumerate() {
                if !outer_comps.contains(&comp.edge_comp[k]) {
                    rep.push(format!("edge {}", e.id), "no outer face designated for its component");
                    outer_comps.insert(comp.edge_comp[k]);
                }
            }
        }
        if rep.is_valid() {
            self.validate_genus(&comp, &mut rep);
        }
        if let Some(bp) = self.delta {
            if bp.edge >= self.edges.len() {
                rep.push("delta".into(), "basepoint edge missing");
            } else if self.edges[bp.edge].color == 0 {
                rep.push(format!("edge {}", self.edges[bp.edge].id), "basepoint on a zero-colored edge");
            }
        }
        rep
    }

    fn validate_vertex(&self, node: &Node, rep: &mut ValidationReport) {
        let el = || format!("vertex {}", node.id);
        let inc: u64 = node.rotation.iter().filter(|d| d.is_incoming()).map(|d| self.color(*d) as u64).sum();
        let out: u64 = node.rotation.iter().filter(|d| !d.is_incoming()).map(|d| self.color(*d) as u64).sum();
        if inc != out {
            rep.push(el(), format!("unbalanced coloring: in {inc} != out {out}"));
        }
        if node.rotation.is_empty() {
            rep.push(el(), "isolated vertex");
        }
        // in-darts must form one cyclic arc
        let n = node.rotation.len();
        let changes =
            (0..n).filter(|&k| node.rotation[k].is_incoming() != node.rotation[(k + 1) % n].is_incoming()).count();
        if changes > 2 {
            rep.push(el(), "MOY condition violated: entering half-edges are not contiguous");
        }
    }

    fn validate_crossing(&self, node: &Node, rep: &mut ValidationReport) {
        let el = || format!("crossing {}", node.id);
        let NodeKind::Crossing { sign, over } = node.kind else {
            return;
        };
        if node.rotation.len() != 4 {
            rep.push(el(), "a crossing needs exactly four half-edges");
            return;
        }
        let r = &node.rotation;
        for k in 0..2 {
            let (x, y) = (r[k], r[k + 2]);
            if x.is_incoming() == y.is_incoming() {
                rep.push(el(), "orientation does not pass through the crossing");
                return;
            }
            if self.color(x) != self.color(y) {
                rep.push(el(), "opposite ports carry different colors");
            }
        }
        let frame = self.crossing_frame(self.node_index(node.id).unwrap()).unwrap();
        let expect = if over == frame.in_a.edge {
            Sign::Pos
        } else if over == frame.in_b.edge {
            Sign::Neg
        } else {
            rep.push(el(), "over-strand edge does not enter this crossing");
            return;
        };
        if expect != sign {
            rep.push(el(), "sign disagrees with over-strand and rotation");
        }
    }

    fn validate_genus(&self, comp: &Components, rep: &mut ValidationReport) {
        let faces = self.faces();
        let mut nodes = vec![0i64; comp.count];
        let mut arcs = vec![0i64; comp.count];
        let mut fcount = vec![0i64; comp.count];
        for n in 0..self.nodes.len() {
            nodes[comp.node_comp[n]] += 1;
        }
        for (k, e) in self.edges.iter().enumerate() {
            arcs[comp.edge_comp[k]] += 1;
            if e.is_free_loop() {
                nodes[comp.edge_comp[k]] += 1;
            }
        }
        for f in &faces.faces {
            fcount[comp.edge_comp[f[0].edge]] += 1;
        }
        for c in 0..comp.count {
            if nodes[c] - arcs[c] + fcount[c] != 2 {
                rep.push(
                    format!("component {c}"),
                    format!("rotation system has genus > 0 (V-E+F = {})", nodes[c] - arcs[c] + fcount[c]),
                );
            }
        }
    }

    /// Connected components (of nodes and edges).
    pub fn components(&self) -> Components {
        let mut parent: Vec<usize> = (0..self.nodes.len() + self.edges.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let nn = self.nodes.len();
        for (k, e) in self.edges.iter().enumerate() {
            for n in [e.tail, e.head].into_iter().flatten() {
                let (a, b) = (find(&mut parent, nn + k), find(&mut parent, n));
                parent[a] = b;
            }
        }
        let mut label = HashMap::new();
        let mut node_comp = vec![0; nn];
        let mut edge_comp = vec![0; self.edges.len()];
        for x in 0..nn + self.edges.len() {
            let r = find(&mut parent, x);
            let len = label.len();
            let c = *label.entry(r).or_insert(len);
            if x < nn {
                node_comp[x] = c;
            } else {
                edge_comp[x - nn] = c;
            }
        }
        Components { count: label.len(), node_comp, edge_comp }
    }

    /// Faces by left-face traversal: the successor of dart `d` is the clockwise
    /// neighbour of `rev(d)` at the far node.
    pub fn faces(&self) -> Faces {
        let pos = self.dart_positions();
        let mut face_of = vec![usize::MAX; 2 * self.edges.len()];
        let mut faces = Vec::new();
        for k in 0..self.edges.len() {
            for d in [Dart::tail(k), Dart::head(k)] {
                if face_of[d.slot()] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut cycle = Vec::new();
                let mut x = d;
                loop {
                    face_of[x.slot()] = id;
                    cycle.push(x);
                    x = match pos[x.rev().slot()] {
                        Some((n, i)) => {
                            let rot = &self.nodes[n].rotation;
                            rot[(i + rot.len() - 1) % rot.len()]
                        }
                        // free loop: each side is its own face
                        None => x,
                    };
                    if x == d {
                        break;
                    }
                }
                faces.push(cycle);
            }
        }
        Faces { faces, face_of }
    }

    /// Mirror image: every crossing and half twist changes sign.
    pub fn mirror(&self) -> Diagram {
        let mut d = self.clone();
        for n in d.nodes.iter_mut() {
            if let NodeKind::Crossing { sign, over } = n.kind {
                let frame_over_other = {
                    let f = self.crossing_frame(self.node_index(n.id).unwrap()).unwrap();
                    if f.in_a.edge == over {
                        f.in_b.edge
                    } else {
                        f.in_a.edge
                    }
                };
                n.kind = NodeKind::Crossing { sign: sign.flip(), over: frame_over_other };
            }
        }
        for e in d.edges.iter_mut() {
            for t in e.twists.iter_mut() {
                *t = t.flip();
            }
        }
        d
    }

    /// Every edge reversed. The over strand and the crossing sign are
    /// preserved, the basepoint stays on its edge, and the outer darts swap ends
    /// so the unbounded face stays on their left.
    pub fn reverse(&self) -> Diagram {
        let mut d = self.clone();
        for e in d.edges.iter_mut() {
            std::mem::swap(&mut e.tail, &mut e.head);
            e.twists.reverse();
        }
        for n in d.nodes.iter_mut() {
            for x in n.rotation.iter_mut() {
                *x = x.rev();
            }
        }
        for x in d.outer.iter_mut() {
            *x = x.rev();
        }
        // the over strand keeps its edges but now enters through the other end
        let out_edges: Vec<Option<usize>> = (0..d.nodes.len())
            .map(|n| match self.nodes[n].kind {
                NodeKind::Crossing { over, .. } => {
                    let f = self.crossing_frame(n).unwrap();
                    Some(if f.in_a.edge == over { f.out_a.edge } else { f.out_b.edge })
                }
                NodeKind::Vertex => None,
            })
            .collect();
        for (n, node) in d.nodes.iter_mut().enumerate() {
            if let NodeKind::Crossing { sign, .. } = node.kind {
                node.kind = NodeKind::Crossing { sign, over: out_edges[n].unwrap() };
            }
        }
        d
    }

    /// Trivalent with every edge color positive.
    pub fn is_framed_trivalent_positive(&self) -> bool {
        self.vertices().all(|v| self.nodes[v].rotation.len() == 3) && self.edges.iter().all(|e| e.color > 0)
    }

    /// Diagram with a different basepoint.
    pub fn with_delta(&self, edge: usize) -> Diagram {
        let mut d = self.clone();
        d.delta = Some(Basepoint { edge, position: 0 });
        d
    }

    /// Renumber ids densely in index order (edges and nodes from 1).
    pub fn normalize_ids(&mut self) {
        for (k, e) in self.edges.iter_mut().enumerate() {
            e.id = k as u32 + 1;
        }
        for (k, n) in self.nodes.iter_mut().enumerate() {
            n.id = k as u32 + 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct Components {
    pub count: usize,
    pub node_comp: Vec<usize>,
    pub edge_comp: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Faces {
    /// Each face as its cyclic list of darts (the face is on their left).
    pub faces: Vec<Vec<Dart>>,
    /// Face on the left of each dart, indexed by `Dart::slot`.
    pub face_of: Vec<usize>,
}

impl Faces {
    pub fn left_of(&self, d: Dart) -> usize {
        self.face_of[d.slot()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CornerName {
    N,
    S,
    W,
    E,
}

impl CornerName {
    pub fn as_str(self) -> &'static str {
        match self {
            CornerName::N => "N",
            CornerName::S => "S",
            CornerName::W => "W",
            CornerName::E => "E",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrKind {
    /// A double point. `a` is the color of the strand running south-west to
    /// north-east, `b` of the one running south-east to north-west.
    Double { node: usize, sign: Sign, a: u32, b: u32 },
    /// Where an entering edge meets the circle region of its head vertex.
    Circle { edge: usize, vertex: usize, color: u32 },
}

impl CrKind {
    /// Colors of the over and under strand (for circle crossings, the edge
    /// color twice).
    pub fn over_under(&self) -> (u32, u32) {
        match *self {
            CrKind::Double { sign: Sign::Pos, a, b, .. } => (a, b),
            CrKind::Double { sign: Sign::Neg, a, b, .. } => (b, a),
            CrKind::Circle { color, .. } => (color, color),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub name: CornerName,
    pub region: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub kind: CrKind,
    pub corners: Vec<Corner>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Face(usize),
    Circle(usize),
}

/// `Cr(D)`, `Re(D)`, corner incidences, the marked pair and the indices.
#[derive(Debug, Clone)]
pub struct RegionModel {
    pub crossings: Vec<Crossing>,
    pub regions: Vec<RegionKind>,
    pub faces: Faces,
    /// `(R_u, R_v)`: left and right region of the basepoint edge.
    pub marked: Option<(usize, usize)>,
    /// Index of every ordinary face region; `None` for circle regions.
    pub indices: Vec<Option<i64>>,
    pub outer_region: usize,
    pub connected: bool,
    /// `|Re|` as a count on the sphere, also for disconnected diagrams.
    pub region_count: usize,
}

impl RegionModel {
    pub fn delta_edge_color(&self, d: &Diagram) -> Option<u32> {
        d.delta.map(|b| d.edges[b.edge].color)
    }
}

impl Diagram {
    /// Faces, circle regions, `Cr(D)` with named corners, marked regions and
    /// indices. Requires a valid diagram.
    pub fn build_regions(&self) -> Result<RegionModel, DiagramError> {
        let comps = self.components();
        let faces = self.faces();
        let nf = faces.faces.len();
        let connected = comps.count <= 1;
        let verts: Vec<usize> = self.vertices().collect();
        let mut regions: Vec<RegionKind> = (0..nf).map(RegionKind::Face).collect();
        let mut circle_of = vec![usize::MAX; self.nodes.len()];
        for &v in &verts {
            circle_of[v] = regions.len();
            regions.push(RegionKind::Circle(v));
        }
        let mut crossings = Vec::new();
        for n in self.crossings() {
            let f = self.crossing_frame(n).ok_or_else(|| DiagramError::Invalid("bad crossing".into()))?;
            let NodeKind::Crossing { sign, .. } = self.nodes[n].kind else { unreachable!() };
            crossings.push(Crossing {
                kind: CrKind::Double { node: n, sign, a: self.color(f.in_a), b: self.color(f.in_b) },
                corners: vec![
                    Corner { name: CornerName::N, region: faces.left_of(f.out_a) },
                    Corner { name: CornerName::S, region: faces.left_of(f.in_a) },
                    Corner { name: CornerName::W, region: faces.left_of(f.out_b) },
                    Corner { name: CornerName::E, region: faces.left_of(f.in_b) },
                ],
            });
        }
        for (k, e) in self.edges.iter().enumerate() {
            let Some(h) = e.head else { continue };
            if !self.nodes[h].is_vertex() {
                continue;
            }
            crossings.push(Crossing {
                kind: CrKind::Circle { edge: k, vertex: h, color: e.color },
                corners: vec![
                    Corner { name: CornerName::N, region: circle_of[h] },
                    Corner { name: CornerName::W, region: faces.left_of(Dart::tail(k)) },
                    Corner { name: CornerName::E, region: faces.left_of(Dart::head(k)) },
                ],
            });
        }
        // sphere Euler count for |Re| when components are nested in unknown ways
        let mut v_count = self.nodes.len() as i64;
        v_count += self.edges.iter().filter(|e| e.is_free_loop()).count() as i64;
        let e_count = self.edges.len() as i64;
        let sphere_faces = (e_count - v_count + 1 + comps.count.max(1) as i64) as usize;
        let region_count = sphere_faces + verts.len();

        let outer_dart = *self.outer.first().ok_or_else(|| DiagramError::Invalid("no outer face".into()))?;
        let outer_region = faces.left_of(outer_dart);
        let mut model = RegionModel {
            crossings,
            regions,
            faces,
            marked: None,
            indices: vec![None; nf + verts.len()],
            outer_region,
            connected,
            region_count,
        };
        if let Some(bp) = self.delta {
            let u = model.faces.left_of(Dart::tail(bp.edge));
            let v = model.faces.left_of(Dart::head(bp.edge));
            if u == v {
                return Err(DiagramError::BasepointOnBridge(self.edges[bp.edge].id));
            }
            model.marked = Some((u, v));
        }
        if connected {
            self.region_indices(&mut model)?;
        }
        Ok(model)
    }

    /// Breadth-first propagation of `ind(right) - ind(left) = color` from the
    /// outer face.
    pub fn region_indices(&self, rm: &mut RegionModel) -> Result<(), DiagramError> {
        let nf = rm.faces.faces.len();
        let mut adj: Vec<Vec<(usize, i64, usize)>> = vec![Vec::new(); nf];
        for (k, e) in self.edges.iter().enumerate() {
            let l = rm.faces.left_of(Dart::tail(k));
            let r = rm.faces.left_of(Dart::head(k));
            adj[l].push((r, e.color as i64, k));
            adj[r].push((l, -(e.color as i64), k));
        }
        let mut ind: Vec<Option<i64>> = vec![None; nf];
        ind[rm.outer_region] = Some(0);
        let mut queue = VecDeque::from([rm.outer_region]);
        while let Some(f) = queue.pop_front() {
            let base = ind[f].unwrap();
            for &(g, dlt, k) in &adj[f] {
                match ind[g] {
                    None => {
                        ind[g] = Some(base + dlt);
                        queue.push_back(g);
                    }
                    Some(x) if x != base + dlt => {
                        return Err(DiagramError::InconsistentIndices(self.edges[k].id));
                    }
                    _ => {}
                }
            }
        }
        for (f, x) in ind.into_iter().enumerate() {
            rm.indices[f] = x;
        }
        Ok(())
    }

    /// `|δ| = t^{ind(R_v)} - t^{ind(R_u)}`.
    pub fn delta_weight(&self, rm: &RegionModel) -> Result<Laurent, DiagramError> {
        let bp = self.delta.ok_or(DiagramError::BasepointMissing)?;
        if self.edges[bp.edge].color == 0 {
            return Err(DiagramError::ZeroColorBasepoint);
        }
        let (u, v) = rm.marked.ok_or(DiagramError::BasepointMissing)?;
        let iu = rm.indices[u].ok_or(DiagramError::Disconnected)?;
        let iv = rm.indices[v].ok_or(DiagramError::Disconnected)?;
        Ok(Laurent::q_pow(4 * iv) - Laurent::q_pow(4 * iu))
    }

    /// Edges usable as a basepoint: nonzero color and not a bridge.
    pub fn legal_basepoints(&self) -> Vec<usize> {
        let faces = self.faces();
        (0..self.edges.len())
            .filter(|&k| self.edges[k].color > 0 && faces.left_of(Dart::tail(k)) != faces.left_of(Dart::head(k)))
            .collect()
    }

    /// The lowest-id legal basepoint.
    pub fn auto_basepoint(&self) -> Result<usize, DiagramError> {
        self.legal_basepoints().into_iter().min_by_key(|&k| self.edges[k].id).ok_or(DiagramError::NoLegalBasepoint)
    }

    /// Colors keyed by edge id, for reporting.
    pub fn coloring(&self) -> BTreeMap<u32, u32> {
        self.edges.iter().map(|e| (e.id, e.color)).collect()
    }
}
