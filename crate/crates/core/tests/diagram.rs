use std::collections::BTreeMap;

use moyalex::builder::{Op, Word};
use moyalex::diagram::{Dart, NodeKind, RegionModel};
use moyalex::file::{self, DiagramFile, FileError};
use moyalex::fixtures::{self, theta_51, theta_trivial};
use moyalex::verify::corpus::{corpus, theta};
use moyalex::verify::random::{random_braid_graph, random_planar_trivalent};
use moyalex::{t_half, Diagram, DiagramError, Laurent};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn circle(color: u32, ccw: bool) -> Diagram {
    Word::plat(vec![Op::Cup { k: 0, color, left_up: !ccw }, Op::Delta(0), Op::Cap(0)]).build().unwrap()
}

fn regions(d: &Diagram) -> RegionModel {
    d.build_regions().unwrap()
}

fn violations(d: &Diagram) -> Vec<String> {
    d.validate().violations.iter().map(|v| v.message.clone()).collect()
}

#[test]
fn balanced_theta_is_valid() {
    assert!(theta_trivial(1, 1).validate().is_valid());
    assert!(theta(2, 3).validate().is_valid());
}

#[test]
fn unbalanced_theta_is_rejected() {
    let mut d = theta_trivial(1, 1);
    let k = d.edges.iter().position(|e| e.color == 2).unwrap();
    d.edges[k].color = 3;
    let v = violations(&d);
    assert!(v.iter().any(|m| m.contains("unbalanced")), "{v:?}");
}

#[test]
fn alternating_vertex_violates_moy_condition() {
    // a crossing node read as a vertex has rotation in, in, out, out; swapping
    // the middle darts alternates them
    let mut d = Word::closed(&[1, 1], vec![Op::Delta(0), Op::Cross { k: 0, over_left: true }]).build().unwrap();
    let n = d.crossings().next().unwrap();
    d.nodes[n].kind = NodeKind::Vertex;
    assert!(d.validate().is_valid());
    d.nodes[n].rotation.swap(1, 2);
    let v = violations(&d);
    assert!(v.iter().any(|m| m.contains("MOY condition")), "{v:?}");
}

#[test]
fn flipped_crossing_sign_is_rejected() {
    let mut d = theta_51(1, 1);
    let n = d.crossings().next().unwrap();
    if let NodeKind::Crossing { sign, over } = d.nodes[n].kind {
        d.nodes[n].kind = NodeKind::Crossing { sign: sign.flip(), over };
    }
    assert!(!d.validate().is_valid());
}

#[test]
fn region_counts_of_the_fixtures() {
    let rm = regions(&theta_trivial(1, 1));
    assert_eq!((rm.crossings.len(), rm.regions.len()), (3, 5));
    let rm = regions(&theta_51(1, 1));
    assert_eq!((rm.crossings.len(), rm.regions.len()), (8, 10));
}

#[test]
fn disjoint_circles_have_extra_regions() {
    let d = Word::plat(vec![
        Op::Cup { k: 0, color: 1, left_up: true },
        Op::Cup { k: 2, color: 1, left_up: true },
        Op::Delta(0),
        Op::Cap(2),
        Op::Cap(0),
    ])
    .build()
    .unwrap();
    let rm = regions(&d);
    assert!(!rm.connected);
    assert!(rm.region_count > rm.crossings.len() + 2);
}

#[test]
fn circle_basepoint_weights() {
    for i in 1..=4u32 {
        let ccw = circle(i, true);
        assert_eq!(ccw.delta_weight(&regions(&ccw)).unwrap(), &Laurent::one() - &t_half(-2 * i as i64));
        let cw = circle(i, false);
        assert_eq!(cw.delta_weight(&regions(&cw)).unwrap(), &t_half(2 * i as i64) - &Laurent::one());
    }
}

#[test]
fn basepoint_weight_with_shifted_left_index() {
    // in the braid closure of theta(1,2) the color-2 edge has index 1 on its left
    let d = theta(1, 2);
    let k = d.edges.iter().position(|e| e.color == 2).unwrap();
    let d = d.with_delta(k);
    let rm = regions(&d);
    let (u, _) = rm.marked.unwrap();
    assert_eq!(rm.indices[u], Some(1));
    assert_eq!(d.delta_weight(&rm).unwrap(), &t_half(6) - &t_half(2));
}

#[test]
fn zero_colored_basepoint_is_an_error() {
    let mut d = circle(1, true);
    d.edges[0].color = 0;
    assert_eq!(d.delta_weight(&regions(&d)), Err(DiagramError::ZeroColorBasepoint));
}

#[test]
fn shipped_fixtures() {
    let d = theta_trivial(1, 2);
    assert_eq!((d.vertex_count(), d.edges.len(), d.crossing_count()), (2, 3, 0));
    let d = theta_51(1, 1);
    assert!(d.validate().is_valid());
    assert_eq!((d.vertex_count(), d.crossing_count()), (2, 5));
    let f = DiagramFile::from_json(fixtures::THETA_51).unwrap();
    assert!(f.is_symbolic());
    assert_eq!(f.variables().unwrap().into_iter().collect::<Vec<_>>(), ["i", "j"]);
}

#[test]
fn duplicate_edge_id_is_a_parse_error() {
    let text = fixtures::THETA_TRIVIAL.replacen("\"id\": 2", "\"id\": 1", 1);
    let b = BTreeMap::from([("i".to_string(), 1), ("j".to_string(), 1)]);
    match file::parse(&text, &b) {
        Err(FileError::Field { message, .. }) => assert!(message.contains("duplicate edge id")),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn malformed_json_reports_a_position() {
    let b = BTreeMap::new();
    assert!(matches!(file::parse("{\"edges\": [", &b), Err(FileError::Syntax { .. })));
}

#[test]
fn file_round_trip() {
    for m in corpus() {
        let text = file::to_json(&m.diagram);
        let back = file::parse(&text, &BTreeMap::new()).unwrap();
        assert_eq!(back.canonical_code(), m.diagram.canonical_code(), "{}", m.name);
    }
}

fn assert_faces_partition(d: &Diagram) {
    let faces = d.faces();
    let mut seen = vec![0u32; 2 * d.edges.len()];
    for (f, cycle) in faces.faces.iter().enumerate() {
        for x in cycle {
            seen[x.slot()] += 1;
            assert_eq!(faces.left_of(*x), f);
        }
    }
    assert!(seen.iter().all(|&c| c == 1), "{seen:?}");
}

fn assert_region_count(d: &Diagram) {
    let rm = regions(d);
    assert!(rm.connected);
    assert_eq!(rm.regions.len(), rm.crossings.len() + 2);
    assert_eq!(rm.region_count, rm.regions.len());
}

/// Depth-first index propagation, written independently of the library's
/// breadth-first pass.
fn dfs_indices(d: &Diagram, rm: &RegionModel) -> Vec<Option<i64>> {
    let nf = rm.faces.faces.len();
    let mut ind = vec![None; rm.regions.len()];
    let mut stack = vec![(rm.outer_region, 0i64)];
    while let Some((f, x)) = stack.pop() {
        if ind[f].is_some() {
            continue;
        }
        ind[f] = Some(x);
        for (k, e) in d.edges.iter().enumerate() {
            let l = rm.faces.left_of(Dart::tail(k));
            let r = rm.faces.left_of(Dart::head(k));
            let c = e.color as i64;
            if l == f && ind[r].is_none() {
                stack.push((r, x + c));
            }
            if r == f && ind[l].is_none() {
                stack.push((l, x - c));
            }
        }
    }
    ind.truncate(nf);
    ind.resize(rm.regions.len(), None);
    ind
}

fn assert_index_rule(d: &Diagram, rm: &RegionModel) {
    for (k, e) in d.edges.iter().enumerate() {
        let l = rm.indices[rm.faces.left_of(Dart::tail(k))].unwrap();
        let r = rm.indices[rm.faces.left_of(Dart::head(k))].unwrap();
        assert_eq!(r - l, e.color as i64);
    }
    assert_eq!(rm.indices[rm.outer_region], Some(0));
}

#[test]
fn corpus_structure() {
    for m in corpus() {
        let d = &m.diagram;
        assert!(d.validate().is_valid(), "{}", m.name);
        assert_faces_partition(d);
        assert_region_count(d);
        let rm = regions(d);
        assert_index_rule(d, &rm);
        assert_eq!(dfs_indices(d, &rm), rm.indices, "{}", m.name);
    }
}

#[test]
fn mirror_and_reverse_are_involutions() {
    for m in corpus() {
        let d = &m.diagram;
        assert!(d.mirror().validate().is_valid(), "{}", m.name);
        assert!(d.reverse().validate().is_valid(), "{}", m.name);
        assert_eq!(d.mirror().mirror(), *d, "{}", m.name);
        assert_eq!(d.reverse().reverse().canonical_code(), d.canonical_code(), "{}", m.name);
    }
}

fn assert_delta_weights(d: &Diagram) {
    for k in d.legal_basepoints() {
        let dk = d.with_delta(k);
        let w = dk.delta_weight(&regions(&dk)).unwrap();
        let terms: Vec<_> = w.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(terms.len(), 2, "{w}");
        let mut cs: Vec<i64> = terms.iter().map(|(_, c)| i64::try_from(c).unwrap()).collect();
        cs.sort();
        assert_eq!(cs, [-1, 1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_planar_structure(seed in any::<u64>(), n in 0usize..10) {
        let d = random_planar_trivalent(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert!(d.validate().is_valid());
        assert_faces_partition(&d);
        assert_region_count(&d);
        let rm = regions(&d);
        assert_index_rule(&d, &rm);
        prop_assert_eq!(dfs_indices(&d, &rm), rm.indices);
        assert_delta_weights(&d);
    }

    #[test]
    fn random_braid_graph_structure(seed in any::<u64>(), wide in any::<bool>()) {
        let start: &[u32] = if wide { &[1, 2, 1] } else { &[2, 1] };
        let d = random_braid_graph(&mut ChaCha8Rng::seed_from_u64(seed), start, 8, 5);
        prop_assert!(d.validate().is_valid());
        assert_faces_partition(&d);
        assert_region_count(&d);
        let rm = regions(&d);
        prop_assert_eq!(dfs_indices(&d, &rm), rm.indices);
        assert_delta_weights(&d);
    }
}

#[test]
fn every_component_needs_an_outer_dart() {
    let mut d = Word::plat(vec![
        Op::Cup { k: 0, color: 2, left_up: false },
        Op::Cup { k: 1, color: 1, left_up: true },
        Op::Delta(0),
        Op::Cap(1),
        Op::Cap(0),
    ])
    .build()
    .unwrap();
    assert_eq!(d.outer.len(), 2);
    assert!(d.validate().is_valid());
    let back = file::parse(&file::to_json(&d), &BTreeMap::new()).unwrap();
    assert_eq!(back.outer.len(), 2);
    d.outer.pop();
    assert!(violations(&d).iter().any(|m| m.contains("no outer face")));
}
