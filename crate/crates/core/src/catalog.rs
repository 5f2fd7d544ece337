//! Small named defining graphs used throughout the tests and the CLI.

use crate::graph::DefiningGraph;
use crate::group::FiniteGroup;

fn build(names: &[&str], orders: &[u32], edges: &[(usize, usize)]) -> DefiningGraph {
    let groups = orders.iter().map(|&p| FiniteGroup::Cyclic(p)).collect();
    DefiningGraph::new(names.iter().map(|s| s.to_string()).collect(), edges, groups)
        .expect("catalog graphs are valid")
}

/// The path `i–j–k` plus an isolated vertex `l`, with orders 2, 2, 3, 3.
pub fn running_example() -> DefiningGraph {
    build(&["i", "j", "k", "l"], &[2, 2, 3, 3], &[(0, 1), (1, 2)])
}

/// The `n`-cycle with every vertex group cyclic of the given order.
pub fn cycle(n: usize, order: u32) -> DefiningGraph {
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(&names, &vec![order; n], &edges)
}

/// Incidence graph of the Fano plane: points `p0..p6`, then lines `L0..L6`.
pub fn heawood(order: u32) -> DefiningGraph {
    let mut names: Vec<String> = (0..7).map(|i| format!("p{i}")).collect();
    names.extend((0..7).map(|i| format!("L{i}")));
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<_> = (0..7)
        .flat_map(|l| [0, 1, 3].map(|d| ((l + d) % 7, 7 + l)))
        .collect();
    build(&names, &[order; 14], &edges)
}

/// `K_{a,b}` with every vertex group cyclic of the given order.
pub fn complete_bipartite(a: usize, b: usize, order: u32) -> DefiningGraph {
    let names: Vec<String> =
        (0..a).map(|i| format!("a{i}")).chain((0..b).map(|i| format!("b{i}"))).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<_> = (0..a).flat_map(|x| (0..b).map(move |y| (x, a + y))).collect();
    build(&names, &vec![order; a + b], &edges)
}

/// A single edge between two vertices of the given order.
pub fn single_edge(order: u32) -> DefiningGraph {
    build(&["a", "b"], &[order, order], &[(0, 1)])
}

/// The edge `x–y` with two pendant vertices `p`, `q` on `y`; orders `x_order`, 2, 2, 2.
///
/// Swapping `p` and `q` fixes the star of `x`, so this graph carries
/// residue-groupoids with nontrivial maps.
pub fn fork(x_order: u32) -> DefiningGraph {
    build(&["x", "y", "p", "q"], &[x_order, 2, 2, 2], &[(0, 1), (1, 2), (1, 3)])
}

/// Looks up a catalog graph by name.
pub fn by_name(name: &str) -> Option<DefiningGraph> {
    Some(match name {
        "running" => running_example(),
        "heawood" => heawood(2),
        "hexagon" => cycle(6, 3),
        "square" => cycle(4, 3),
        "k23" => complete_bipartite(2, 3, 2),
        "fork" => fork(2),
        "fork3" => fork(3),
        "edge" => single_edge(2),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &["running", "heawood", "hexagon", "square", "k23", "fork", "fork3", "edge"];
