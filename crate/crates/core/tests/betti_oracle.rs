
use mdsfe_core::groupoid::{bicharacter_build, BicharSource, CartanType};
use mdsfe_core::nichols::{betti_solve, betti_solve_with, nichols_small_oracle, relation_question_check, BettiOptions};

fn compare_with_bar_complex(source: BicharSource, bound: u32) {
    let st = bicharacter_build(&source).unwrap();
    let sol = betti_solve(&st, bound, bound).unwrap();
    for obj in &sol.graph.objects {
        let oracle = nichols_small_oracle(&obj.representative, bound).unwrap();
        for ((j, d), h) in &oracle.betti {
            let di: Vec<i64> = d.iter().map(|&x| x as i64).collect();
            assert_eq!(sol.tables[obj.id].get(*j as i64, &di), Some(*h), "object {} j={j} d={d:?}", obj.id);
        }
        println!("object {}: {} bar-complex entries agree", obj.id, oracle.betti.len());
    }
}

#[test]
fn a2_at_order_three_agrees_with_bar_complex() {
    compare_with_bar_complex(BicharSource::Cartan { ty: CartanType::A, rank: 2, order: 6, v: 1 }, 4);
}

#[test]
fn off_diagonal_agrees_with_bar_complex() {
    compare_with_bar_complex(BicharSource::Matrix { n: 4, m: vec![vec![0, 1], vec![1, 0]] }, 4);
}

#[test]
fn permuted_walk_order_gives_identical_tables() {
    let st = bicharacter_build(&BicharSource::Cartan { ty: CartanType::B, rank: 2, order: 8, v: 1 }).unwrap();
    let a = betti_solve(&st, 5, 5).unwrap();
    let b = betti_solve_with(&st, 5, 5, &BettiOptions { walk_order: Some(vec![1, 0]), ..Default::default() }).unwrap();
    assert_eq!(a.tables, b.tables);
}

#[test]
fn generalized_relation_on_an_unclassified_node() {
    let st = bicharacter_build(&BicharSource::Dynkin { order: 6, nodes: vec![2, 3], edges: vec![(0, 1, 3)] }).unwrap();
    let refl = st.reflect(0).unwrap();
    let here = nichols_small_oracle(&st, 4).unwrap();
    let there = nichols_small_oracle(&refl, 4).unwrap();
    let look = |side: usize, j: i64, d: &[i64]| -> Option<i64> {
        if j < 0 || d.iter().any(|&x| x < 0) {
            return Some(0);
        }
        if d.iter().all(|&x| x == 0) {
            return Some((j == 0) as i64);
        }
        let key = (j as u32, d.iter().map(|&x| x as u32).collect::<Vec<_>>());
        let tab = if side == 0 { &here.betti } else { &there.betti };
        if d.iter().sum::<i64>() > 4 {
            return None;
        }
        Some(tab.get(&key).map_or(0, |&h| h as i64))
    };
    let rep = relation_question_check(&st, 0, 4, 4, look).unwrap();
    println!("generalized relation: {rep:?}");
}
