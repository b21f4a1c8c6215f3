use num_bigint::BigInt;
use proptest::prelude::*;

use trackcoh::beckmod::AbGroup;
use trackcoh::cohomology::linalg::{kernel_basis, rank};
use trackcoh::cohomology::{Lattice, Mat};
use trackcoh::fincat::{free_category, EqRelGroupoid, FinGraph};
use trackcoh::multifold::{is_homotopically_discrete, is_weakly_globular, nerve_of};

fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * cofactor_det(&minor)
        })
        .sum()
}

fn matrix(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (rows, cols).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #[test]
    fn equivalence_relation_nerves_are_discrete(blocks in prop::collection::vec(0usize..4, 1..7)) {
        let objects: Vec<String> = (0..blocks.len()).map(|i| format!("o{i}")).collect();
        let rel = (0..blocks.len())
            .flat_map(|a| (0..blocks.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| blocks[a] == blocks[b])
            .collect();
        let g = EqRelGroupoid::new(objects, rel).unwrap().to_groupoid();
        let x = nerve_of(&g.cat);
        prop_assert!(is_weakly_globular(&x).ok);
        let cert = is_homotopically_discrete(&x).unwrap();
        let mut distinct = blocks.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(cert.discrete_set().size(&[]), distinct.len());
    }

    #[test]
    fn square_lattice_index_is_the_determinant(m in (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-5i64..=5, n), n))) {
        let n = m.len();
        let d = cofactor_det(&m);
        prop_assume!(d != 0);
        let gens: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let q = Lattice::full(n).quotient(&Lattice::span(n, &gens)).unwrap();
        prop_assert_eq!(q.order(), Some(BigInt::from(d.abs())));
    }

    #[test]
    fn kernel_basis_is_annihilated(a in matrix(1..=5, 1..=5)) {
        let (r, c) = (a.len(), a[0].len());
        let m = Mat::from_i64(r, c, &a);
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len(), c - rank(&m));
        for v in &ker {
            prop_assert!(m.apply(v).iter().all(|x| *x == BigInt::from(0)));
        }
    }

    #[test]
    fn group_canonical_form_ignores_order(mut orders in prop::collection::vec(1u64..=12, 0..5)) {
        let g = AbGroup::new(&orders);
        prop_assert_eq!(g.order(), Some(orders.iter().product::<u64>()));
        orders.reverse();
        prop_assert_eq!(AbGroup::new(&orders), g.clone());
        prop_assert_eq!(AbGroup::new(g.factors()), g);
    }

    #[test]
    fn free_category_counts_paths(edges in prop::collection::vec((0usize..5, 0usize..5), 0..8)) {
        // orient every edge upwards so the graph is acyclic
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
        let objects = ["a", "b", "c", "d", "e"];
        let names: Vec<String> = (0..edges.len()).map(|i| format!("e{i}")).collect();
        let labelled: Vec<(&str, &str, &str)> = edges.iter().zip(&names).map(|(&(s, t), n)| (n.as_str(), objects[s], objects[t])).collect();
        let g = FinGraph::from_labels(&objects, &labelled).unwrap();
        let free = free_category(&g, 4).unwrap();
        free.unique_decomposition_audit().unwrap();
        free.to_fincat().unwrap().audit().unwrap();
        // paths ending at each object, by length
        let mut count = vec![vec![0usize; 5]; 5];
        let mut total = 0;
        for start in 0..5 {
            for row in count.iter_mut() {
                row.iter_mut().for_each(|x| *x = 0);
            }
            count[0][start] = 1;
            for len in 0..4 {
                for &(s, t) in &edges {
                    count[len + 1][t] += count[len][s];
                }
            }
            total += count.iter().flatten().sum::<usize>();
        }
        prop_assert_eq!(free.len(), total);
    }
}
