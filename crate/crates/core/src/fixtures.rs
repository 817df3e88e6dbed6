//! Diagram files shipped with the crate.

use crate::color::Bindings;
use crate::file::parse;
use crate::Diagram;

/// The trivial θ-curve: edges `i`, `j` from one vertex to the other and `i+j` back.
pub const THETA_TRIVIAL: &str = include_str!("../resources/theta_trivial.json");

/// A five-crossing θ-curve diagram with edge colors `i`, `j`, `i+j`. Any two
/// of its three cycles form an unknot, yet the graph is not planar.
pub const THETA_51: &str = include_str!("../resources/theta_51.json");

fn bind(src: &str, i: u32, j: u32) -> Diagram {
    let b: Bindings = [("i".to_string(), i as i64), ("j".to_string(), j as i64)].into_iter().collect();
    parse(src, &b).expect("shipped fixture parses")
}

pub fn theta_trivial(i: u32, j: u32) -> Diagram {
    bind(THETA_TRIVIAL, i, j)
}

pub fn theta_51(i: u32, j: u32) -> Diagram {
    bind(THETA_51, i, j)
}
