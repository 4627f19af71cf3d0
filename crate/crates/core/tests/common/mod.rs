//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use mdsfe_core::groupoid::{bicharacter_build, BicharSource, BicharState, CartanType};

/// The four generalized Dynkin diagrams of `g(2,3)` over `ζ_6`, with
/// `ζ = ζ_6^2` a primitive cube root of unity.
pub fn g23_diagrams() -> Vec<BicharState> {
    let d = |nodes: Vec<u32>, edges: Vec<(usize, usize, u32)>| {
        bicharacter_build(&BicharSource::Dynkin { order: 6, nodes, edges }).unwrap()
    };
    vec![
        d(vec![3, 2, 3], vec![(0, 1, 4), (1, 2, 2)]),
        d(vec![3, 3, 3], vec![(0, 1, 2), (1, 2, 2)]),
        d(vec![3, 1, 3], vec![(0, 1, 4), (1, 2, 4)]),
        d(vec![2, 2, 3], vec![(0, 1, 4), (0, 2, 4), (1, 2, 4)]),
    ]
}

/// The printed diagram of `g(4,3)`.
pub fn g43_diagram() -> BicharState {
    bicharacter_build(&BicharSource::Dynkin { order: 6, nodes: vec![3; 4], edges: vec![(0, 1, 4), (1, 2, 2), (2, 3, 2)] })
        .unwrap()
}

/// The printed diagram of `G(3)` with parameter `ζ_order`.
pub fn g3_super_diagram(order: u32) -> BicharState {
    let o = order as i64;
    let e = |k: i64| k.rem_euclid(o) as u32;
    bicharacter_build(&BicharSource::Dynkin {
        order,
        nodes: vec![half(order), half(order), e(3)],
        edges: vec![(0, 1, e(1)), (1, 2, e(-3))],
    })
    .unwrap()
}

fn half(order: u32) -> u32 {
    assert!(order % 2 == 0);
    order / 2
}

/// Diagrams of `A(j | θ − j)` for a subset `J ⊆ {1..θ}`, parameter `ζ_order`.
pub fn super_a_diagram(theta: usize, j_set: &[usize], order: u32) -> BicharState {
    let o = order as i64;
    let e = |k: i64| k.rem_euclid(o) as u32;
    let minus_one = order / 2;
    let mut nodes = vec![0u32; theta];
    let mut link = vec![0i64; theta + 1]; // link[i] = exponent of q̃_{i,i+1}, 1-based
    if j_set.contains(&theta) {
        nodes[theta - 1] = minus_one;
        link[theta - 1] = 1;
    } else {
        nodes[theta - 1] = 1;
        link[theta - 1] = -1;
    }
    for i in (1..theta).rev() {
        if j_set.contains(&i) {
            nodes[i - 1] = minus_one;
            link[i - 1] = -link[i];
        } else {
            nodes[i - 1] = e(-link[i]);
            link[i - 1] = link[i];
        }
    }
    let edges = (1..theta).map(|i| (i - 1, i, e(link[i]))).collect();
    bicharacter_build(&BicharSource::Dynkin { order, nodes, edges }).unwrap()
}

pub fn cartan(ty: CartanType, rank: usize, order: u32, v: u32) -> BicharState {
    bicharacter_build(&BicharSource::Cartan { ty, rank, order, v }).unwrap()
}

pub fn matrix(n: u32, m: Vec<Vec<i64>>) -> BicharState {
    bicharacter_build(&BicharSource::Matrix { n, m }).unwrap()
}
