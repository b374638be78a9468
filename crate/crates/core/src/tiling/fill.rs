//! Non-tiling gap fills used as ablation baselines.
//!
//! Each fill keeps one parity untouched and replaces every pixel of the
//! opposite parity from its 4-neighborhood. Unlike the domino fill,
//! none of these is a bijection: a kept pixel may feed several gaps or
//! none at all.

use rand::Rng;

use super::{neighbor_cost, Parity, DIRECTIONS};
use crate::imaging::Image;
use crate::rng;

/// Replaces every gap with the mean of its in-bounds 4-neighbors.
pub fn fill_avg_neighbor(img: &Image, keep: Parity) -> Image {
    fill_gaps(img, keep, |img, i, j| {
        let mut sum = 0.0;
        let mut count = 0.0;
        for (ni, nj) in in_bounds_neighbors(img, i, j) {
            sum += img.get(ni, nj);
            count += 1.0;
        }
        sum / count
    })
}

/// Replaces every gap with a uniformly drawn in-bounds 4-neighbor.
/// Gaps are visited in row-major order, so outputs are reproducible per
/// seed.
pub fn fill_random_neighbor(img: &Image, keep: Parity, seed: u64) -> Image {
    let mut stream = rng::substream(seed, "randfill", 0);
    fill_gaps(img, keep, |img, i, j| {
        let neighbors: Vec<(usize, usize)> = in_bounds_neighbors(img, i, j).collect();
        let (ni, nj) = neighbors[stream.gen_range(0..neighbors.len())];
        img.get(ni, nj)
    })
}

/// Replaces every gap with the in-bounds neighbor whose direction has
/// the lowest [`neighbor_cost`]; ties go to the earlier direction in
/// up, down, left, right order.
pub fn fill_best_neighbor(img: &Image, keep: Parity) -> Image {
    fill_gaps(img, keep, |img, i, j| {
        let mut best_cost = f64::INFINITY;
        let mut best_value = img.get(i, j);
        for &(c1, c2) in &DIRECTIONS {
            let (ni, nj) = (i as i64 + c1, j as i64 + c2);
            if ni < 0 || nj < 0 || ni >= img.height() as i64 || nj >= img.width() as i64 {
                continue;
            }
            let cost = neighbor_cost(img, (i, j), (c1, c2)).expect("direction is valid");
            if cost < best_cost {
                best_cost = cost;
                best_value = img.get(ni as usize, nj as usize);
            }
        }
        best_value
    })
}

fn fill_gaps(img: &Image, keep: Parity, mut fill: impl FnMut(&Image, usize, usize) -> f64) -> Image {
    let mut out = img.clone();
    for i in 0..img.height() {
        for j in 0..img.width() {
            if Parity::of(i, j) != keep {
                out.set(i, j, fill(img, i, j));
            }
        }
    }
    out
}

fn in_bounds_neighbors(
    img: &Image,
    i: usize,
    j: usize,
) -> impl Iterator<Item = (usize, usize)> + '_ {
    DIRECTIONS.iter().filter_map(move |&(c1, c2)| {
        let (ni, nj) = (i as i64 + c1, j as i64 + c2);
        if ni < 0 || nj < 0 || ni >= img.height() as i64 || nj >= img.width() as i64 {
            None
        } else {
            Some((ni as usize, nj as usize))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{image_from, random_image};
    use super::*;

    #[test]
    fn constant_images_survive_every_fill() {
        let img = image_from(&[&[0.6; 5]; 4]);
        for keep in [Parity::Even, Parity::Odd] {
            assert_eq!(fill_avg_neighbor(&img, keep), img);
            assert_eq!(fill_random_neighbor(&img, keep, 3), img);
            assert_eq!(fill_best_neighbor(&img, keep), img);
        }
    }

    #[test]
    fn average_fill_takes_the_interior_mean() {
        let img = image_from(&[
            &[0.5, 0.0, 0.5],
            &[1.0, 0.5, 1.0],
            &[0.5, 0.0, 0.5],
        ]);
        let filled = fill_avg_neighbor(&img, Parity::Even);
        // Gap (1, 1) sees neighbors {0, 0, 1, 1}.
        assert_eq!(filled.get(1, 1), 0.5);
        assert_eq!(filled.get(0, 0), 0.5);
    }

    #[test]
    fn average_fill_uses_only_in_bounds_neighbors_at_corners() {
        let img = image_from(&[&[0.9, 0.2], &[0.4, 0.9]]);
        let filled = fill_avg_neighbor(&img, Parity::Odd);
        // Corner gap (0, 0) averages its right and down neighbors only.
        assert!((filled.get(0, 0) - (0.2 + 0.4) / 2.0).abs() < 1e-15);
        assert!((filled.get(1, 1) - (0.2 + 0.4) / 2.0).abs() < 1e-15);
        assert_eq!(filled.get(0, 1), 0.2);
        assert_eq!(filled.get(1, 0), 0.4);
    }

    #[test]
    fn random_fill_draws_neighbors_and_is_seed_deterministic() {
        let img = random_image(6, 6, 61);
        for keep in [Parity::Even, Parity::Odd] {
            let first = fill_random_neighbor(&img, keep, 17);
            assert_eq!(first, fill_random_neighbor(&img, keep, 17));
            for i in 0..6 {
                for j in 0..6 {
                    if Parity::of(i, j) == keep {
                        assert_eq!(first.get(i, j), img.get(i, j));
                    } else {
                        let value = first.get(i, j);
                        assert!(
                            in_bounds_neighbors(&img, i, j)
                                .any(|(ni, nj)| img.get(ni, nj) == value),
                            "({i},{j}) must copy a neighbor"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn random_fill_varies_with_the_seed() {
        let img = random_image(8, 8, 62);
        let a = fill_random_neighbor(&img, Parity::Even, 1);
        let b = fill_random_neighbor(&img, Parity::Even, 2);
        assert_ne!(a, b);
    }

    #[test]
    fn best_fill_follows_vertical_stripes() {
        let mut rows = Vec::new();
        for _ in 0..6 {
            rows.push([0.9, 0.1, 0.8, 0.2, 0.7, 0.3]);
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let img = image_from(&refs);
        let filled = fill_best_neighbor(&img, Parity::Even);
        for i in 0..6 {
            for j in 0..6 {
                if Parity::of(i, j) == Parity::Odd {
                    // Vertical neighbors share the gap's column value.
                    assert_eq!(filled.get(i, j), img.get(i, j));
                }
            }
        }
    }

    #[test]
    fn best_fill_may_reuse_a_source_pixel() {
        // Both gaps of this 2x2 image sit in a zero-cost direction
        // toward the corner pixel, so they copy the same source; a
        // domino fill could never do that.
        let img = image_from(&[&[0.8, 0.2], &[0.2, 0.2]]);
        let filled = fill_best_neighbor(&img, Parity::Even);
        assert_eq!(filled.get(0, 1), 0.8);
        assert_eq!(filled.get(1, 0), 0.8);
    }
}
