//! Sparse minimum-cost perfect matching via successive shortest paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::CostMatrix;
use crate::error::DenoiseError;

const UNMATCHED: usize = usize::MAX;

/// Heap entry ordered by smallest distance first, then smallest task
/// index, so equal-cost instances resolve the same way every run.
struct Visit {
    dist: f64,
    task: usize,
}

impl PartialEq for Visit {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Visit {}

impl PartialOrd for Visit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Visit {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.task.cmp(&self.task))
    }
}

/// Solves the balanced sparse assignment problem to optimality.
///
/// Returns the minimizing bijection as a task index per agent. Agents
/// are seeded greedily on tight edges and the rest are matched through
/// Dijkstra-based augmenting paths over reduced costs, with dual
/// potentials keeping every edge nonnegative. Instances without a
/// perfect matching over the permitted pairs are reported as
/// infeasible.
pub fn solve_lap(costs: &CostMatrix) -> Result<Vec<usize>, DenoiseError> {
    let n = costs.n_agents();
    if costs.n_tasks() != n {
        return Err(DenoiseError::Infeasible);
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut agent_potential = vec![0.0f64; n];
    let mut task_potential = vec![0.0f64; n];
    let mut match_of_agent = vec![UNMATCHED; n];
    let mut match_of_task = vec![UNMATCHED; n];

    for (agent, potential) in agent_potential.iter_mut().enumerate() {
        let mut best = f64::INFINITY;
        for (_, cost) in costs.permitted(agent) {
            best = best.min(cost);
        }
        if best == f64::INFINITY {
            return Err(DenoiseError::Infeasible);
        }
        *potential = best;
    }
    for agent in 0..n {
        for (task, cost) in costs.permitted(agent) {
            if match_of_task[task] == UNMATCHED && cost - agent_potential[agent] == 0.0 {
                match_of_agent[agent] = task;
                match_of_task[task] = agent;
                break;
            }
        }
    }

    let mut dist = vec![f64::INFINITY; n];
    let mut from_agent = vec![UNMATCHED; n];
    let mut finalized = vec![false; n];
    let mut touched: Vec<usize> = Vec::with_capacity(n);
    let mut heap: BinaryHeap<Visit> = BinaryHeap::new();

    for start in 0..n {
        if match_of_agent[start] != UNMATCHED {
            continue;
        }
        for &task in &touched {
            dist[task] = f64::INFINITY;
            from_agent[task] = UNMATCHED;
            finalized[task] = false;
        }
        touched.clear();
        heap.clear();

        for (task, cost) in costs.permitted(start) {
            let reduced = cost - agent_potential[start] - task_potential[task];
            if reduced < dist[task] {
                if dist[task] == f64::INFINITY {
                    touched.push(task);
                }
                dist[task] = reduced;
                from_agent[task] = start;
                heap.push(Visit {
                    dist: reduced,
                    task,
                });
            }
        }

        let mut free_task = UNMATCHED;
        let mut free_dist = 0.0;
        while let Some(Visit { dist: d, task }) = heap.pop() {
            if finalized[task] {
                continue;
            }
            finalized[task] = true;
            if match_of_task[task] == UNMATCHED {
                free_task = task;
                free_dist = d;
                break;
            }
            let agent = match_of_task[task];
            for (next, cost) in costs.permitted(agent) {
                if finalized[next] {
                    continue;
                }
                let candidate = d + cost - agent_potential[agent] - task_potential[next];
                if candidate < dist[next] {
                    if dist[next] == f64::INFINITY {
                        touched.push(next);
                    }
                    dist[next] = candidate;
                    from_agent[next] = agent;
                    heap.push(Visit {
                        dist: candidate,
                        task: next,
                    });
                }
            }
        }
        if free_task == UNMATCHED {
            return Err(DenoiseError::Infeasible);
        }

        agent_potential[start] += free_dist;
        for &task in &touched {
            if finalized[task] && task != free_task {
                let slack = free_dist - dist[task];
                agent_potential[match_of_task[task]] += slack;
                task_potential[task] -= slack;
            }
        }

        let mut task = free_task;
        loop {
            let agent = from_agent[task];
            match_of_task[task] = agent;
            let previous = match_of_agent[agent];
            match_of_agent[agent] = task;
            if agent == start {
                break;
            }
            task = previous;
        }
    }

    Ok(match_of_agent)
}

#[cfg(test)]
mod tests {
    use super::super::tests::random_image;
    use super::super::{
        build_cost_matrix, enumerate_tilings, neighbor_cost, parity_pixels, Parity,
    };
    use super::*;

    fn dense(rows: &[&[f64]]) -> CostMatrix {
        let mut entries = Vec::new();
        for (agent, row) in rows.iter().enumerate() {
            for (task, &cost) in row.iter().enumerate() {
                entries.push((agent, task, cost));
            }
        }
        CostMatrix::from_entries(rows.len(), rows[0].len(), &entries).unwrap()
    }

    fn total_cost(costs: &CostMatrix, assignment: &[usize]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(agent, &task)| costs.cost(agent, task).unwrap())
            .sum()
    }

    #[test]
    fn zero_diagonal_picks_the_diagonal() {
        let costs = dense(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let assignment = solve_lap(&costs).unwrap();
        assert_eq!(assignment, vec![0, 1]);
        assert_eq!(total_cost(&costs, &assignment), 0.0);
    }

    #[test]
    fn off_diagonal_trap_still_resolves_to_the_optimum() {
        let costs = dense(&[&[1.0, 2.0], &[3.0, 1.0]]);
        let assignment = solve_lap(&costs).unwrap();
        assert_eq!(assignment, vec![0, 1]);
        assert_eq!(total_cost(&costs, &assignment), 2.0);
    }

    #[test]
    fn greedy_trap_requires_an_augmenting_path() {
        // Greedy seeding matches agent 0 to task 0; the optimum needs it
        // rerouted to task 1 so agent 1 can take task 0.
        let costs = dense(&[&[1.0, 1.0, 9.0], &[1.0, 9.0, 9.0], &[9.0, 9.0, 1.0]]);
        let assignment = solve_lap(&costs).unwrap();
        assert_eq!(assignment, vec![1, 0, 2]);
        assert_eq!(total_cost(&costs, &assignment), 3.0);
    }

    #[test]
    fn matches_brute_force_on_random_dense_instances() {
        use rand::Rng;
        for seed in 0..30 {
            let mut stream = crate::rng::substream(seed, "lap-dense", 0);
            let n = 2 + (seed % 4) as usize;
            let mut entries = Vec::new();
            for agent in 0..n {
                for task in 0..n {
                    entries.push((agent, task, stream.gen::<f64>()));
                }
            }
            let costs = CostMatrix::from_entries(n, n, &entries).unwrap();
            let assignment = solve_lap(&costs).unwrap();
            let solved = total_cost(&costs, &assignment);

            let mut best = f64::INFINITY;
            let mut tasks: Vec<usize> = (0..n).collect();
            permute(&mut tasks, 0, &mut |perm| {
                let cost: f64 = perm
                    .iter()
                    .enumerate()
                    .map(|(agent, &task)| costs.cost(agent, task).unwrap())
                    .sum();
                best = best.min(cost);
            });
            assert!(
                (solved - best).abs() < 1e-9,
                "seed {seed}: solver {solved} vs brute force {best}"
            );
        }
    }

    fn permute(items: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
        if at == items.len() {
            visit(items);
            return;
        }
        for swap in at..items.len() {
            items.swap(at, swap);
            permute(items, at + 1, visit);
            items.swap(at, swap);
        }
    }

    #[test]
    fn grid_instances_match_the_enumeration_oracle() {
        for (height, width, seed) in [(2, 2, 1), (2, 4, 2), (4, 2, 3), (2, 6, 4), (4, 4, 5)] {
            let img = random_image(height, width, 40 + seed);
            for parity in [Parity::Even, Parity::Odd] {
                let costs = build_cost_matrix(&img, parity).unwrap();
                let assignment = solve_lap(&costs).unwrap();
                let solved = total_cost(&costs, &assignment);

                let agents = parity_pixels(height, width, parity);
                let mut best = f64::INFINITY;
                for tiling in enumerate_tilings(height, width).unwrap() {
                    let mut cost = 0.0;
                    for &(a, b) in tiling.pairs() {
                        let (from, to) = if Parity::of(a.0, a.1) == parity {
                            (a, b)
                        } else {
                            (b, a)
                        };
                        debug_assert!(agents.contains(&from));
                        let direction =
                            (to.0 as i64 - from.0 as i64, to.1 as i64 - from.1 as i64);
                        cost += neighbor_cost(&img, from, direction).unwrap();
                    }
                    best = best.min(cost);
                }
                assert!(
                    (solved - best).abs() < 1e-9,
                    "{height}x{width} {parity:?}: solver {solved} vs oracle {best}"
                );
            }
        }
    }

    #[test]
    fn infeasible_instances_are_reported() {
        // Both agents can only take task 0.
        let costs = CostMatrix::from_entries(2, 2, &[(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(solve_lap(&costs), Err(DenoiseError::Infeasible)));

        let empty_agent = CostMatrix::from_entries(2, 2, &[(0, 0, 1.0)]).unwrap();
        assert!(matches!(
            solve_lap(&empty_agent),
            Err(DenoiseError::Infeasible)
        ));

        let unbalanced = CostMatrix::from_entries(2, 3, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(
            solve_lap(&unbalanced),
            Err(DenoiseError::Infeasible)
        ));
    }

    #[test]
    fn solver_is_deterministic_under_ties() {
        let costs = dense(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let first = solve_lap(&costs).unwrap();
        for _ in 0..5 {
            assert_eq!(solve_lap(&costs).unwrap(), first);
        }
    }
}
