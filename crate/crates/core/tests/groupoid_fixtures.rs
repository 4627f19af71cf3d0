mod common;

use common::*;
use mdsfe_core::groupoid::{cone_cover_check, groupoid_enumerate, CartanType, ReflectionKind};

#[test]
fn g23_has_five_objects() {
    for (k, d) in g23_diagrams().iter().enumerate() {
        let g = groupoid_enumerate(d, 1, 10_000).unwrap();
        assert!(!g.truncated);
        assert_eq!(g.objects.len(), 5, "diagram {k}");
        assert!(g.is_involutive() && g.all_classified());
        let dirichlet = g.edges.iter().filter(|e| e.kind == ReflectionKind::Dirichlet && e.from < e.to).count();
        assert_eq!(dirichlet, 5);
    }
}

#[test]
fn printed_diagrams_classify() {
    let mut states = g23_diagrams();
    states.push(g43_diagram());
    for order in [4, 6, 8, 10] {
        states.push(g3_super_diagram(order));
    }
    for theta in 2..=4usize {
        for mask in 0u32..(1 << theta) {
            let j: Vec<usize> = (1..=theta).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            states.push(super_a_diagram(theta, &j, 8));
        }
    }
    for st in &states {
        for i in 0..st.rank() {
            assert_ne!(st.classify(i).unwrap(), ReflectionKind::Neither, "{st:?} at {i}");
        }
    }
}

#[test]
fn groupoids_of_printed_diagrams_close_up() {
    for st in [g43_diagram(), g3_super_diagram(6), super_a_diagram(3, &[1, 2, 3], 8), cartan(CartanType::B, 2, 12, 1)] {
        let g = groupoid_enumerate(&st, 1, 50_000).unwrap();
        println!("{} objects {} bases", g.objects.len(), g.base_count);
        assert!(!g.truncated && g.all_classified() && g.is_involutive());
        for o in &g.objects {
            for i in 0..st.rank() {
                assert!(o.representative.translation_identity_holds(i, 1).unwrap());
            }
        }
        assert!(cone_cover_check(&g, 2000, 3).unwrap().holds());
    }
}
