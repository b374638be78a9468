//! Directional variance cost and the sparse assignment instance.

use super::{parity_pixels, Parity, DIRECTIONS};
use crate::error::DenoiseError;
use crate::imaging::Image;

/// Cost of pairing pixel `(i, j)` with its neighbor one step along
/// `direction = (c1, c2)`, where `c1` offsets the row and `c2` the
/// column.
///
/// The cost samples the intensity change along the same step in the two
/// lanes flanking the pair, so the paired pixels themselves never enter
/// their own cost:
///
/// ```text
/// C = (x(i+c2, j+c1) - x(i+c1+c2, j+c1+c2))^2
///   + (x(i-c2, j-c1) - x(i+c1-c2, j-c1+c2))^2
/// ```
///
/// Flanking samples that fall outside the image are mirrored back in
/// without repeating the edge pixel, which keeps the proxy property at
/// borders.
pub fn neighbor_cost(
    img: &Image,
    pixel: (usize, usize),
    direction: (i64, i64),
) -> Result<f64, DenoiseError> {
    let (c1, c2) = direction;
    if !DIRECTIONS.contains(&direction) {
        return Err(DenoiseError::InvalidDirection(c1, c2));
    }
    let (i, j) = (pixel.0 as i64, pixel.1 as i64);
    let sample = |di: i64, dj: i64| {
        img.get(
            reflect(i + di, img.height()),
            reflect(j + dj, img.width()),
        )
    };
    let ahead = sample(c2, c1) - sample(c1 + c2, c1 + c2);
    let behind = sample(-c2, -c1) - sample(c1 - c2, c2 - c1);
    Ok(ahead * ahead + behind * behind)
}

/// Mirrors an index into `[0, n)` without repeating the edge sample
/// (`-1` maps to `1`, `n` maps to `n - 2`).
fn reflect(index: i64, n: usize) -> usize {
    let n = n as i64;
    if n == 1 {
        return 0;
    }
    let mut index = index;
    loop {
        if index < 0 {
            index = -index;
        } else if index >= n {
            index = 2 * (n - 1) - index;
        } else {
            return index as usize;
        }
    }
}

/// A balanced sparse assignment instance: every agent carries a short
/// list of permitted tasks with finite costs; absent pairs are
/// forbidden. Stored in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    n_agents: usize,
    n_tasks: usize,
    offsets: Vec<usize>,
    tasks: Vec<usize>,
    costs: Vec<f64>,
}

impl CostMatrix {
    /// Builds an instance from explicit `(agent, task, cost)` entries.
    ///
    /// Entries are sorted by agent then task; duplicate pairs, indices
    /// out of range, and non-finite costs are rejected.
    pub fn from_entries(
        n_agents: usize,
        n_tasks: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self, DenoiseError> {
        let mut sorted = entries.to_vec();
        sorted.sort_unstable_by_key(|a| (a.0, a.1));
        let mut offsets = vec![0usize; n_agents + 1];
        let mut tasks = Vec::with_capacity(sorted.len());
        let mut costs = Vec::with_capacity(sorted.len());
        for window in sorted.windows(2) {
            if (window[0].0, window[0].1) == (window[1].0, window[1].1) {
                return Err(DenoiseError::InvalidArgument(format!(
                    "duplicate assignment entry ({}, {})",
                    window[0].0, window[0].1
                )));
            }
        }
        for &(agent, task, cost) in &sorted {
            if agent >= n_agents || task >= n_tasks {
                return Err(DenoiseError::InvalidArgument(format!(
                    "assignment entry ({agent}, {task}) out of range"
                )));
            }
            if !cost.is_finite() {
                return Err(DenoiseError::InvalidArgument(format!(
                    "assignment cost for ({agent}, {task}) is not finite"
                )));
            }
            offsets[agent + 1] += 1;
            tasks.push(task);
            costs.push(cost);
        }
        for agent in 0..n_agents {
            offsets[agent + 1] += offsets[agent];
        }
        Ok(Self {
            n_agents,
            n_tasks,
            offsets,
            tasks,
            costs,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_tasks(&self) -> usize {
        self.n_tasks
    }

    /// Permitted `(task, cost)` pairs of one agent, in insertion order.
    pub fn permitted(&self, agent: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[agent]..self.offsets[agent + 1];
        self.tasks[range.clone()]
            .iter()
            .copied()
            .zip(self.costs[range].iter().copied())
    }

    /// Cost of one `(agent, task)` pair, if permitted.
    pub fn cost(&self, agent: usize, task: usize) -> Option<f64> {
        self.permitted(agent)
            .find(|&(t, _)| t == task)
            .map(|(_, c)| c)
    }
}

/// Builds the assignment instance whose solution is the minimum-cost
/// domino tiling of `img`.
///
/// Pixels of `parity` become agents and pixels of the opposite parity
/// become tasks, both numbered in row-major order. Each agent may pair
/// with its in-bounds 4-neighbors; the edge cost is [`neighbor_cost`]
/// toward that neighbor. The image must have an even pixel count so the
/// two sides are balanced.
pub fn build_cost_matrix(img: &Image, parity: Parity) -> Result<CostMatrix, DenoiseError> {
    let (height, width) = (img.height(), img.width());
    if height * width % 2 != 0 {
        return Err(DenoiseError::OddArea(height, width));
    }
    let agents = parity_pixels(height, width, parity);
    let tasks = parity_pixels(height, width, parity.opposite());
    let mut task_index = vec![usize::MAX; height * width];
    for (index, &(i, j)) in tasks.iter().enumerate() {
        task_index[i * width + j] = index;
    }

    let n = agents.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut edge_tasks = Vec::with_capacity(4 * n);
    let mut edge_costs = Vec::with_capacity(4 * n);
    offsets.push(0);
    for &(i, j) in &agents {
        for &(c1, c2) in &DIRECTIONS {
            let (ni, nj) = (i as i64 + c1, j as i64 + c2);
            if ni < 0 || nj < 0 || ni >= height as i64 || nj >= width as i64 {
                continue;
            }
            edge_tasks.push(task_index[ni as usize * width + nj as usize]);
            edge_costs.push(neighbor_cost(img, (i, j), (c1, c2))?);
        }
        offsets.push(edge_tasks.len());
    }
    Ok(CostMatrix {
        n_agents: n,
        n_tasks: tasks.len(),
        offsets,
        tasks: edge_tasks,
        costs: edge_costs,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{image_from, random_image};
    use super::*;

    #[test]
    fn constant_image_costs_are_zero_in_all_directions() {
        let img = image_from(&[&[0.4; 4]; 4]);
        for direction in DIRECTIONS {
            assert_eq!(neighbor_cost(&img, (1, 2), direction).unwrap(), 0.0);
            assert_eq!(neighbor_cost(&img, (0, 0), direction).unwrap(), 0.0);
        }
    }

    #[test]
    fn horizontal_ramp_costs_match_direct_evaluation() {
        let width = 8usize;
        let mut rows = Vec::new();
        for _ in 0..6 {
            let row: Vec<f64> = (0..width).map(|j| j as f64 / width as f64).collect();
            rows.push(row);
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let img = image_from(&refs);
        let expected = 2.0 / (width as f64 * width as f64);
        for i in 1..5 {
            for j in 1..7 {
                let down = neighbor_cost(&img, (i, j), (1, 0)).unwrap();
                let right = neighbor_cost(&img, (i, j), (0, 1)).unwrap();
                assert!(down.abs() < 1e-15, "down cost {down} at ({i},{j})");
                assert!((right - expected).abs() < 1e-15, "right cost {right}");
            }
        }
    }

    #[test]
    fn cost_is_invariant_under_constant_shift() {
        let base_data: Vec<f64> = random_image(5, 6, 31)
            .data()
            .iter()
            .map(|v| v * 0.5)
            .collect();
        let shifted_data: Vec<f64> = base_data.iter().map(|v| v + 0.25).collect();
        let base = Image::from_data(5, 6, base_data, crate::imaging::BitDepth::Eight).unwrap();
        let shifted =
            Image::from_data(5, 6, shifted_data, crate::imaging::BitDepth::Eight).unwrap();
        for i in 0..5 {
            for j in 0..6 {
                for direction in DIRECTIONS {
                    let original = neighbor_cost(&base, (i, j), direction).unwrap();
                    let moved = neighbor_cost(&shifted, (i, j), direction).unwrap();
                    assert!((moved - original).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn costs_are_nonnegative_and_bad_directions_are_rejected() {
        let img = random_image(4, 4, 32);
        for i in 0..4 {
            for j in 0..4 {
                for direction in DIRECTIONS {
                    assert!(neighbor_cost(&img, (i, j), direction).unwrap() >= 0.0);
                }
            }
        }
        assert!(matches!(
            neighbor_cost(&img, (0, 0), (1, 1)),
            Err(DenoiseError::InvalidDirection(1, 1))
        ));
        assert!(matches!(
            neighbor_cost(&img, (0, 0), (0, 0)),
            Err(DenoiseError::InvalidDirection(0, 0))
        ));
    }

    #[test]
    fn reflection_skips_the_edge_sample() {
        assert_eq!(reflect(-1, 5), 1);
        assert_eq!(reflect(-2, 5), 2);
        assert_eq!(reflect(5, 5), 3);
        assert_eq!(reflect(6, 5), 2);
        assert_eq!(reflect(3, 5), 3);
        assert_eq!(reflect(-1, 1), 0);
        assert_eq!(reflect(2, 1), 0);
    }

    #[test]
    fn two_by_two_matrix_has_two_agents_with_two_tasks_each() {
        let img = random_image(2, 2, 33);
        let matrix = build_cost_matrix(&img, Parity::Even).unwrap();
        assert_eq!(matrix.n_agents(), 2);
        assert_eq!(matrix.n_tasks(), 2);
        for agent in 0..2 {
            assert_eq!(matrix.permitted(agent).count(), 2);
        }
    }

    #[test]
    fn four_by_four_matrix_has_border_dependent_degrees() {
        let img = random_image(4, 4, 34);
        for parity in [Parity::Even, Parity::Odd] {
            let matrix = build_cost_matrix(&img, parity).unwrap();
            assert_eq!(matrix.n_agents(), 8);
            assert_eq!(matrix.n_tasks(), 8);
            for agent in 0..8 {
                let degree = matrix.permitted(agent).count();
                assert!((2..=4).contains(&degree), "degree {degree}");
            }
        }
    }

    #[test]
    fn agent_and_task_counts_match_on_even_grids() {
        for (height, width) in [(2, 4), (3, 4), (4, 5), (6, 6)] {
            let img = random_image(height, width, 35);
            let matrix = build_cost_matrix(&img, Parity::Even).unwrap();
            assert_eq!(matrix.n_agents(), matrix.n_tasks());
            assert_eq!(matrix.n_agents(), height * width / 2);
        }
    }

    #[test]
    fn odd_area_is_rejected() {
        let img = random_image(3, 3, 36);
        assert!(matches!(
            build_cost_matrix(&img, Parity::Even),
            Err(DenoiseError::OddArea(3, 3))
        ));
    }

    #[test]
    fn matrix_costs_match_neighbor_cost() {
        let img = random_image(4, 6, 37);
        let matrix = build_cost_matrix(&img, Parity::Odd).unwrap();
        let agents = parity_pixels(4, 6, Parity::Odd);
        let tasks = parity_pixels(4, 6, Parity::Even);
        for (agent, &(i, j)) in agents.iter().enumerate() {
            for (task, cost) in matrix.permitted(agent) {
                let (k, l) = tasks[task];
                let direction = (k as i64 - i as i64, l as i64 - j as i64);
                let expected = neighbor_cost(&img, (i, j), direction).unwrap();
                assert_eq!(cost, expected);
            }
        }
    }

    #[test]
    fn from_entries_validates_its_input() {
        assert!(CostMatrix::from_entries(2, 2, &[(0, 0, 1.0), (0, 0, 2.0)]).is_err());
        assert!(CostMatrix::from_entries(2, 2, &[(0, 2, 1.0)]).is_err());
        assert!(CostMatrix::from_entries(2, 2, &[(0, 0, f64::NAN)]).is_err());
        let matrix =
            CostMatrix::from_entries(2, 2, &[(1, 0, 3.0), (0, 1, 2.0), (0, 0, 1.0)]).unwrap();
        assert_eq!(matrix.cost(0, 0), Some(1.0));
        assert_eq!(matrix.cost(0, 1), Some(2.0));
        assert_eq!(matrix.cost(1, 0), Some(3.0));
        assert_eq!(matrix.cost(1, 1), None);
    }
}
