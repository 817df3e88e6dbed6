//! Kauffman states, the state sum `<D|δ>`, the Alexander matrix and the
//! planar state sum with `P` weights.

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{CornerName, CrKind, Diagram, DiagramError, RegionModel};
use crate::matrix::Matrix;
use crate::weights::WeightTable;
use crate::{brace, Laurent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateSumError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("diagram has double points; the planar state sum needs a planar diagram")]
    NotPlanar,
    #[error("the planar state sum needs at least one vertex")]
    NoVertex,
    #[error("the planar state sum needs positive colors")]
    NonPositiveColor,
}

/// A Kauffman state: for each crossing of `Cr(D)`, the index of the chosen
/// corner in that crossing's corner list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub corners: Vec<usize>,
}

impl State {
    pub fn region_of(&self, rm: &RegionModel, p: usize) -> usize {
        rm.crossings[p].corners[self.corners[p]].region
    }

    pub fn corner_name(&self, rm: &RegionModel, p: usize) -> CornerName {
        rm.crossings[p].corners[self.corners[p]].name
    }
}

struct Search {
    /// Per crossing: `(corner index, region)` over unmarked regions.
    options: Vec<Vec<(usize, usize)>>,
    /// Per region: crossings with a corner there.
    touching: Vec<Vec<usize>>,
}

impl Search {
    fn new(rm: &RegionModel) -> Option<Search> {
        let (u, v) = rm.marked?;
        let nr = rm.regions.len();
        if !rm.connected || nr != rm.crossings.len() + 2 {
            return None;
        }
        let mut options = Vec::new();
        let mut touching = vec![Vec::new(); nr];
        for (p, c) in rm.crossings.iter().enumerate() {
            let opts: Vec<(usize, usize)> = c
                .corners
                .iter()
                .enumerate()
                .filter(|(_, k)| k.region != u && k.region != v)
                .map(|(i, k)| (i, k.region))
                .collect();
            for &(_, r) in &opts {
                if touching[r].last() != Some(&p) {
                    touching[r].push(p);
                }
            }
            options.push(opts);
        }
        Some(Search { options, touching })
    }

    fn initial_used(&self, rm: &RegionModel) -> Vec<bool> {
        let (u, v) = rm.marked.unwrap();
        let mut used = vec![false; rm.regions.len()];
        used[u] = true;
        used[v] = true;
        used
    }

    /// The unassigned crossing with the fewest live corners, or `Err` when
    /// some crossing or region can no longer be covered.
    fn pick(&self, used: &[bool], assign: &[usize]) -> Result<Option<usize>, ()> {
        let mut best: Option<(usize, usize)> = None;
        for (p, opts) in self.options.iter().enumerate() {
            if assign[p] != usize::MAX {
                continue;
            }
            let live = opts.iter().filter(|(_, r)| !used[*r]).count();
            if live == 0 {
                return Err(());
            }
            if best.is_none_or(|(_, b)| live < b) {
                best = Some((p, live));
            }
        }
        for (r, cs) in self.touching.iter().enumerate() {
            if !used[r] && !cs.iter().any(|&p| assign[p] == usize::MAX) {
                return Err(());
            }
        }
        Ok(best.map(|(p, _)| p))
    }

    /// Depth-first search over states; `visit` returns true to stop early.
    fn dfs<F: FnMut(&[usize]) -> bool>(&self, used: &mut Vec<bool>, assign: &mut Vec<usize>, visit: &mut F) -> bool {
        let p = match self.pick(used, assign) {
            Err(()) => return false,
            Ok(None) => return visit(assign),
            Ok(Some(p)) => p,
        };
        for &(c, r) in &self.options[p] {
            if used[r] {
                continue;
            }
            used[r] = true;
            assign[p] = c;
            let stop = self.dfs(used, assign, visit);
            assign[p] = usize::MAX;
            used[r] = false;
            if stop {
                return true;
            }
        }
        false
    }

    /// Sum over states of the product of per-corner weights, with the first
    /// branching level explored in parallel.
    fn weighted_sum(&self, rm: &RegionModel, w: &[Vec<Laurent>]) -> Laurent {
        let used = self.initial_used(rm);
        let assign = vec![usize::MAX; self.options.len()];
        let first = match self.pick(&used, &assign) {
            Err(()) => return Laurent::zero(),
            Ok(None) => return Laurent::one(),
            Ok(Some(p)) => p,
        };
        let branches: Vec<(usize, usize)> = self.options[first].iter().copied().filter(|(_, r)| !used[*r]).collect();
        branches
            .par_iter()
            .map(|&(c, r)| {
                let mut used = used.clone();
                let mut assign = assign.clone();
                used[r] = true;
                assign[first] = c;
                let mut acc = Laurent::zero();
                self.dfs(&mut used, &mut assign, &mut |s: &[usize]| {
                    let term: Laurent = s.iter().enumerate().map(|(p, &c)| w[p][c].clone()).product();
                    acc += &term;
                    false
                });
                acc
            })
            .reduce(Laurent::zero, |a, b| a + b)
    }
}

/// Every Kauffman state, in a deterministic order.
pub fn enumerate_states(rm: &RegionModel) -> Vec<State> {
    let Some(search) = Search::new(rm) else {
        return Vec::new();
    };
    let mut used = search.initial_used(rm);
    let mut assign = vec![usize::MAX; rm.crossings.len()];
    let mut out = Vec::new();
    search.dfs(&mut used, &mut assign, &mut |s: &[usize]| {
        out.push(State { corners: s.to_vec() });
        false
    });
    out.sort();
    out
}

/// Some state, if there is any.
pub fn first_state(rm: &RegionModel) -> Option<State> {
    let search = Search::new(rm)?;
    let mut used = search.initial_used(rm);
    let mut assign = vec![usize::MAX; rm.crossings.len()];
    let mut out = None;
    search.dfs(&mut used, &mut assign, &mut |s: &[usize]| {
        out = Some(State { corners: s.to_vec() });
        true
    });
    out
}

/// Per crossing, per corner, the bracket factor `M * A`.
pub fn corner_ma(rm: &RegionModel, table: &WeightTable) -> Vec<Vec<Laurent>> {
    rm.crossings.iter().map(|c| c.corners.iter().map(|k| table.weight(&c.kind, k.name).ma()).collect()).collect()
}

/// `<D|δ>` for a prepared region model. Zero for disconnected diagrams.
pub fn bracket_with(d: &Diagram, rm: &RegionModel, table: &WeightTable) -> Result<Laurent, StateSumError> {
    if d.delta.is_none() {
        return Err(DiagramError::BasepointMissing.into());
    }
    let Some(search) = Search::new(rm) else {
        return Ok(Laurent::zero());
    };
    Ok(search.weighted_sum(rm, &corner_ma(rm, table)))
}

/// `<D|δ> = Σ_s M(s) A(s)`. Zero when `D` is disconnected or `δ` sits on an
/// embedded bridge.
pub fn bracket(d: &Diagram, table: &WeightTable) -> Result<Laurent, StateSumError> {
    match d.build_regions() {
        Ok(rm) => bracket_with(d, &rm, table),
        Err(DiagramError::BasepointOnBridge(_)) => Ok(Laurent::zero()),
        Err(e) => Err(e.into()),
    }
}

/// `A(D)`: rows are `Cr(D)`, columns `Re(D)`.
pub fn alexander_matrix(rm: &RegionModel, table: &WeightTable) -> Matrix {
    let mut m = Matrix::zeros(rm.crossings.len(), rm.regions.len());
    for (p, c) in rm.crossings.iter().enumerate() {
        for k in &c.corners {
            let w = table.weight(&c.kind, k.name).signed_a();
            *m.get_mut(p, k.region) += &w;
        }
    }
    m
}

/// `det A(D)\(u, v)`, the raw determinant with columns `u`, `v` removed.
pub fn det_bracket(m: &Matrix, u: usize, v: usize) -> Laurent {
    m.without_columns(&[u, v]).det_bareiss()
}

/// Determinant engine from a diagram: zero when disconnected.
pub fn det_bracket_of(d: &Diagram, table: &WeightTable) -> Result<Laurent, StateSumError> {
    let rm = match d.build_regions() {
        Ok(rm) => rm,
        Err(DiagramError::BasepointOnBridge(_)) => return Ok(Laurent::zero()),
        Err(e) => return Err(e.into()),
    };
    let (u, v) = rm.marked.ok_or(DiagramError::BasepointMissing)?;
    if !rm.connected {
        return Ok(Laurent::zero());
    }
    Ok(det_bracket(&alexander_matrix(&rm, table), u, v))
}

/// Sign of the permutation that sends crossing `p` to its region's position
/// among the unmarked regions.
pub fn state_sign(rm: &RegionModel, s: &State) -> i64 {
    let (u, v) = rm.marked.expect("marked regions");
    let col = |r: usize| r - (r > u) as usize - (r > v) as usize;
    let perm: Vec<usize> = (0..s.corners.len()).map(|p| col(s.region_of(rm, p))).collect();
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for k in 0..perm.len() {
        if seen[k] {
            continue;
        }
        let mut len = 0;
        let mut x = k;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Weights of one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateWeights {
    pub big_m: Laurent,
    pub a: Laurent,
    pub m: i64,
    pub sign: i64,
}

impl StateWeights {
    pub fn value(&self) -> Laurent {
        &self.big_m * &self.a
    }
}

pub fn state_weights(rm: &RegionModel, table: &WeightTable, s: &State) -> StateWeights {
    let mut w = StateWeights { big_m: Laurent::one(), a: Laurent::one(), m: 1, sign: state_sign(rm, s) };
    for (p, c) in rm.crossings.iter().enumerate() {
        let cw = table.weight(&c.kind, s.corner_name(rm, p));
        w.big_m = &w.big_m * &cw.big_m;
        w.a = &w.a * &cw.a;
        w.m *= cw.m;
    }
    w
}

/// Per crossing, per corner, the planar weight `P`. The circle crossing of
/// the basepoint edge gets `{i}/|δ|` in its north corner.
pub fn corner_p(d: &Diagram, rm: &RegionModel, table: &WeightTable) -> Result<Vec<Vec<Laurent>>, StateSumError> {
    if d.crossing_count() > 0 {
        return Err(StateSumError::NotPlanar);
    }
    if d.vertex_count() == 0 {
        return Err(StateSumError::NoVertex);
    }
    if d.edges.iter().any(|e| e.color == 0) {
        return Err(StateSumError::NonPositiveColor);
    }
    let bp = d.delta.ok_or(DiagramError::BasepointMissing)?;
    let dw = d.delta_weight(rm)?;
    let mut out = Vec::new();
    for c in &rm.crossings {
        let mut row = Vec::new();
        for k in &c.corners {
            let w = table.weight(&c.kind, k.name);
            let p = match c.kind {
                CrKind::Circle { edge, color, .. } if edge == bp.edge && k.name == CornerName::N => {
                    brace(color as i64).exact_div(&dw).expect("|δ| divides {i}")
                }
                _ => w.p.expect("circle corners carry P weights"),
            };
            row.push(p);
        }
        out.push(row);
    }
    Ok(out)
}

/// `Σ_s P(s)` over the states of a planar diagram.
pub fn planar_p_bracket(d: &Diagram, table: &WeightTable) -> Result<Laurent, StateSumError> {
    let rm = d.build_regions()?;
    let w = corner_p(d, &rm, table)?;
    let Some(search) = Search::new(&rm) else {
        return Ok(Laurent::zero());
    };
    Ok(search.weighted_sum(&rm, &w))
}

/// The product of `P` over one state.
pub fn state_p(w: &[Vec<Laurent>], s: &State) -> Laurent {
    s.corners.iter().enumerate().map(|(p, &c)| w[p][c].clone()).product()
}

/// A label for a crossing of `Cr(D)`: the node id of a double point, or
/// `e<id>` for the circle crossing at the head of edge `id`.
pub fn crossing_label(d: &Diagram, c: &CrKind) -> String {
    match *c {
        CrKind::Double { node, .. } => format!("c{}", d.nodes[node].id),
        CrKind::Circle { edge, .. } => format!("e{}", d.edges[edge].id),
    }
}
