use lipkr::assignment::{min_cost_assignment, min_cost_transportation};
use lipkr::rational::ratio;
use lipkr::Rational;
use proptest::prelude::*;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn cost_of(cost: &[Vec<Rational>], perm: &[usize]) -> Rational {
    perm.iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j].clone())
        .sum()
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1usize..=5).prop_flat_map(|k| {
        prop::collection::vec(prop::collection::vec((0i64..6, 1i64..=3), k), k).prop_map(|rows| {
            rows.into_iter()
                .map(|r| r.into_iter().map(|(p, q)| ratio(p, q)).collect())
                .collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matches_exhaustive_search(cost in matrix_strategy()) {
        let k = cost.len();
        let values: Vec<Rational> = permutations(k).iter().map(|p| cost_of(&cost, p)).collect();
        let best = values.iter().min().unwrap().clone();
        let optima = values.iter().filter(|v| **v == best).count();
        let r = min_cost_assignment(&cost).unwrap();
        prop_assert_eq!(&r.value, &best);
        prop_assert_eq!(cost_of(&cost, &r.optimal), best.clone());
        prop_assert_eq!(r.unique, optima == 1);
        if let Some(other) = &r.tie_witness {
            prop_assert_eq!(cost_of(&cost, other), best);
            prop_assert_ne!(other, &r.optimal);
        }
    }

    #[test]
    fn row_and_column_shifts(cost in matrix_strategy(), row in 0usize..5, col in 0usize..5, num in -4i64..=4) {
        let k = cost.len();
        let (row, col) = (row % k, col % k);
        let shift = ratio(num, 2);
        let base = min_cost_assignment(&cost).unwrap();
        let mut shifted = cost.clone();
        for v in shifted[row].iter_mut() {
            *v += &shift;
        }
        for r in shifted.iter_mut() {
            r[col] += &shift;
        }
        let moved = min_cost_assignment(&shifted).unwrap();
        prop_assert_eq!(moved.value, &base.value + &shift + &shift);
        prop_assert_eq!(moved.unique, base.unique);
        if base.unique {
            prop_assert_eq!(moved.optimal, base.optimal);
        }
    }

    #[test]
    fn transportation_matches_replicated_assignment(
        cost in prop::collection::vec(prop::collection::vec(0i64..8, 4), 2),
        first in 0usize..=4,
    ) {
        let cost: Vec<Vec<Rational>> = cost.into_iter().map(|r| r.into_iter().map(|v| ratio(v, 1)).collect()).collect();
        let supplies = [first, 4 - first];
        let r = min_cost_transportation(&cost, &supplies).unwrap();
        // Every assignment of the four sinks to sources with the right counts.
        let mut best: Option<Rational> = None;
        let mut count = 0;
        for mask in 0u32..16 {
            if mask.count_ones() as usize != supplies[1] {
                continue;
            }
            let v: Rational = (0..4).map(|s| cost[(mask >> s & 1) as usize][s].clone()).sum();
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => count += 1,
                _ => {
                    best = Some(v);
                    count = 1;
                }
            }
        }
        prop_assert_eq!(Some(r.value), best);
        prop_assert_eq!(r.unique, count == 1);
    }
}
