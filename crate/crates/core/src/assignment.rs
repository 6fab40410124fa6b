//! Exact min-cost assignment and transportation with uniqueness certificates.
//!
//! The solver is the potential-based Hungarian method run over exact
//! rationals. Uniqueness is certified by forbidding each cell of the optimum
//! in turn and re-solving: the optimum is unique iff every re-solve is
//! strictly more expensive (or infeasible).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentResult {
    pub value: Rational,
    /// `optimal[row] = column`.
    pub optimal: Vec<usize>,
    pub unique: bool,
    pub tie_witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportResult {
    pub value: Rational,
    /// `plan[sink] = source`.
    pub plan: Vec<usize>,
    pub unique: bool,
    pub tie_witness: Option<Vec<usize>>,
}

/// Hungarian method on a square matrix where `None` marks a forbidden cell.
/// Returns `None` when no perfect matching avoids the forbidden cells.
fn hungarian(cost: &[Vec<Option<Rational>>]) -> Option<Vec<usize>> {
    let n = cost.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // 1-based bookkeeping; row/column 0 is the virtual root.
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = &cost[i0 - 1][j - 1] {
                    let cur = c - &u[i0] - &v[j];
                    if minv[j].as_ref().is_none_or(|m| cur < *m) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if let Some(m) = &minv[j] {
                    if delta.as_ref().is_none_or(|d| m < d) {
                        delta = Some(m.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta?;
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    Some(assign)
}

fn total(cost: &[Vec<Rational>], assign: &[usize]) -> Rational {
    assign
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, &j)| acc + &cost[i][j])
}

fn check_square(cost: &[Vec<Rational>]) -> Result<()> {
    let k = cost.len();
    match cost.iter().find(|row| row.len() != k) {
        Some(row) => Err(Error::DimensionMismatch {
            expected: k,
            found: row.len(),
        }),
        None => Ok(()),
    }
}

/// Minimum of `sum cost[i][perm[i]]` over all permutations, with an exact
/// uniqueness verdict.
pub fn min_cost_assignment(cost: &[Vec<Rational>]) -> Result<AssignmentResult> {
    check_square(cost)?;
    let allowed: Vec<Vec<Option<Rational>>> = cost
        .iter()
        .map(|row| row.iter().cloned().map(Some).collect())
        .collect();
    let optimal = hungarian(&allowed).expect("complete matrix has a perfect matching");
    let value = total(cost, &optimal);
    let mut tie_witness = None;
    for (row, &col) in optimal.iter().enumerate() {
        let mut restricted = allowed.clone();
        restricted[row][col] = None;
        if let Some(other) = hungarian(&restricted) {
            if total(cost, &other) == value {
                tie_witness = Some(other);
                break;
            }
        }
    }
    Ok(AssignmentResult {
        value,
        optimal,
        unique: tie_witness.is_none(),
        tie_witness,
    })
}

/// Sources with integer supplies, sinks with unit demand.
///
/// Solved as an assignment with each source row replicated `supplies[i]`
/// times. Uniqueness is about the sink-to-source plan, so replicas of one
/// source are interchangeable.
pub fn min_cost_transportation(
    cost: &[Vec<Rational>],
    supplies: &[usize],
) -> Result<TransportResult> {
    if cost.len() != supplies.len() {
        return Err(Error::DimensionMismatch {
            expected: supplies.len(),
            found: cost.len(),
        });
    }
    let sinks = cost.first().map_or(0, Vec::len);
    if let Some(row) = cost.iter().find(|r| r.len() != sinks) {
        return Err(Error::DimensionMismatch {
            expected: sinks,
            found: row.len(),
        });
    }
    let supplied: usize = supplies.iter().sum();
    if supplied != sinks {
        return Err(Error::SupplyMismatch { supplied, sinks });
    }
    let owner: Vec<usize> = supplies
        .iter()
        .enumerate()
        .flat_map(|(src, &s)| std::iter::repeat_n(src, s))
        .collect();
    let build = |forbid: Option<(usize, usize)>| -> Vec<Vec<Option<Rational>>> {
        owner
            .iter()
            .map(|&src| {
                (0..sinks)
                    .map(|sink| (forbid != Some((src, sink))).then(|| cost[src][sink].clone()))
                    .collect()
            })
            .collect()
    };
    let to_plan = |assign: &[usize]| {
        let mut plan = vec![0; sinks];
        for (row, &sink) in assign.iter().enumerate() {
            plan[sink] = owner[row];
        }
        plan
    };
    let plan_cost = |plan: &[usize]| {
        plan.iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (sink, &src)| acc + &cost[src][sink])
    };
    let plan = to_plan(&hungarian(&build(None)).expect("complete matrix has a perfect matching"));
    let value = plan_cost(&plan);
    let mut tie_witness = None;
    for (sink, &src) in plan.iter().enumerate() {
        if let Some(other) = hungarian(&build(Some((src, sink)))) {
            let other = to_plan(&other);
            if plan_cost(&other) == value {
                tie_witness = Some(other);
                break;
            }
        }
    }
    Ok(TransportResult {
        value,
        plan,
        unique: tie_witness.is_none(),
        tie_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| integer(v)).collect())
            .collect()
    }

    #[test]
    fn distinct_diagonal_is_unique() {
        let r = min_cost_assignment(&m(&[&[1, 2], &[2, 1]])).unwrap();
        assert_eq!(r.value, integer(2));
        assert_eq!(r.optimal, vec![0, 1]);
        assert!(r.unique);
        assert_eq!(r.tie_witness, None);
    }

    #[test]
    fn all_equal_is_tied() {
        let r = min_cost_assignment(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(r.value, integer(2));
        assert!(!r.unique);
        let w = r.tie_witness.unwrap();
        assert_ne!(w, r.optimal);
        assert_eq!(total(&m(&[&[1, 1], &[1, 1]]), &w), integer(2));
    }

    #[test]
    fn rearrangement_block() {
        // rows {1,2}, cols {3,4} of the n = 3 rearrangement metric; swap costs 35/12.
        let cost = vec![
            vec![ratio(4, 3), ratio(5, 4)],
            vec![ratio(5, 3), ratio(3, 2)],
        ];
        assert_eq!(&cost[0][1] + &cost[1][0], ratio(35, 12));
        let r = min_cost_assignment(&cost).unwrap();
        assert_eq!(r.value, ratio(17, 6));
        assert_eq!(r.optimal, vec![0, 1]);
        assert!(r.unique);
    }

    #[test]
    fn empty_and_singleton() {
        let r = min_cost_assignment(&[]).unwrap();
        assert!(r.value.is_zero() && r.unique);
        let r = min_cost_assignment(&m(&[&[5]])).unwrap();
        assert_eq!((r.value, r.unique), (integer(5), true));
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            min_cost_assignment(&m(&[&[1, 2]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn forbidden_cells_can_make_it_infeasible() {
        let cost = vec![vec![None, None], vec![Some(integer(1)), Some(integer(1))]];
        assert_eq!(hungarian(&cost), None);
    }

    #[test]
    fn transport_forced_by_single_source() {
        let cost = vec![vec![ratio(4, 3), ratio(5, 4)]];
        let r = min_cost_transportation(&cost, &[2]).unwrap();
        assert_eq!(r.plan, vec![0, 0]);
        assert_eq!(r.value, ratio(31, 12));
        assert!(r.unique);
    }

    #[test]
    fn transport_unit_supplies_matches_assignment() {
        let cost = vec![
            vec![ratio(4, 3), ratio(5, 4)],
            vec![ratio(5, 3), ratio(3, 2)],
        ];
        let r = min_cost_transportation(&cost, &[1, 1]).unwrap();
        assert_eq!(r.plan, vec![0, 1]);
        assert_eq!(r.value, ratio(17, 6));
        assert!(r.unique);
    }

    #[test]
    fn transport_uniform_is_tied() {
        let r = min_cost_transportation(&m(&[&[1, 1], &[1, 1]]), &[1, 1]).unwrap();
        assert_eq!(r.value, integer(2));
        assert!(!r.unique);
    }

    #[test]
    fn replicas_do_not_count_as_ties() {
        // One source with supply 2 and a much worse one; the plan is forced.
        let r = min_cost_transportation(&m(&[&[1, 1, 1], &[9, 9, 9]]), &[2, 1]).unwrap();
        assert_eq!(r.value, integer(11));
        // Any sink can go to source 1, so the plan is not unique.
        assert!(!r.unique);
        let r = min_cost_transportation(&m(&[&[1, 1, 5], &[9, 9, 1]]), &[2, 1]).unwrap();
        assert_eq!(r.plan, vec![0, 0, 1]);
        assert!(r.unique);
    }

    #[test]
    fn supply_mismatch() {
        assert_eq!(
            min_cost_transportation(&m(&[&[1, 1]]), &[1]).unwrap_err(),
            Error::SupplyMismatch {
                supplied: 1,
                sinks: 2
            }
        );
    }
}
