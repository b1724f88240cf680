//! Small named graphs used throughout the docs, tests and CLI examples.

use crate::graph::Graph;

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges.iter().copied()).expect("fixture edge lists are valid")
}

pub fn k1() -> Graph {
    Graph::empty(1)
}

pub fn k2() -> Graph {
    build(2, &[(0, 1)])
}

pub fn p3() -> Graph {
    build(3, &[(0, 1), (1, 2)])
}

pub fn p4() -> Graph {
    build(4, &[(0, 1), (1, 2), (2, 3)])
}

pub fn k3() -> Graph {
    build(3, &[(0, 1), (1, 2), (0, 2)])
}

pub fn c4() -> Graph {
    build(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])
}

pub fn c5() -> Graph {
    build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
}

/// Star with center 0 and leaves 1, 2, 3.
pub fn k13() -> Graph {
    build(4, &[(0, 1), (0, 2), (0, 3)])
}

/// C5 on 0..4 with the stem path 0-5-6.
pub fn flower7() -> Graph {
    build(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (5, 6)])
}

/// Triangles {0,1,2} and {3,4,5} bridged by 0-3.
pub fn dumbbell6() -> Graph {
    build(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)])
}

/// FLOWER7 plus a K2 on {7,8} attached through the edge 5-7.
pub fn bab9() -> Graph {
    build(9, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (5, 6), (7, 8), (5, 7)])
}

/// Looks a fixture up by its conventional upper-case name.
pub fn by_name(name: &str) -> Option<Graph> {
    let g = match name.to_ascii_uppercase().as_str() {
        "K1" => k1(),
        "K2" => k2(),
        "P3" => p3(),
        "P4" => p4(),
        "K3" => k3(),
        "C4" => c4(),
        "C5" => c5(),
        "K13" => k13(),
        "FLOWER7" => flower7(),
        "DUMBBELL6" => dumbbell6(),
        "BAB9" => bab9(),
        _ => return None,
    };
    Some(g)
}

pub const NAMES: [&str; 11] = ["K1", "K2", "P3", "P4", "K3", "C4", "C5", "K13", "FLOWER7", "DUMBBELL6", "BAB9"];
