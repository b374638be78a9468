//! Pixel domino tilings.
//!
//! A domino tiling pairs every pixel of a grid with one of its four
//! neighbors so that each pixel belongs to exactly one pair. Pairing
//! always joins the two checkerboard parities, so a tiling is a
//! bijection between them. This module picks the tiling that minimizes
//! a local variance cost (via a sparse assignment solver), renders the
//! two "filled" images the denoiser trains against, counts tilings both
//! in closed form and exactly, and provides the simpler gap-fill
//! strategies used for ablation comparisons.

mod cost;
mod count;
mod fill;
mod lap;

pub use cost::{build_cost_matrix, neighbor_cost, CostMatrix};
pub use count::{count_tilings_exact, count_tilings_formula, enumerate_tilings};
pub use fill::{fill_avg_neighbor, fill_best_neighbor, fill_random_neighbor};
pub use lap::solve_lap;

use crate::error::DenoiseError;
use crate::imaging::Image;

/// Grid scan order for neighbor candidates: up, down, left, right.
pub(crate) const DIRECTIONS: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

/// Pixel coordinate as `(row, column)`.
pub type Cell = (usize, usize);

/// Checkerboard class of a pixel: `(i + j) mod 2 = 0` is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of pixel `(i, j)`.
    pub fn of(i: usize, j: usize) -> Parity {
        if (i + j).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn opposite(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A perfect pairing of a `grid_h` x `grid_w` pixel grid into dominoes.
///
/// Pairs are stored with the lexicographically smaller coordinate first
/// and sorted, so structurally equal tilings compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    grid_h: usize,
    grid_w: usize,
    pairs: Vec<(Cell, Cell)>,
}

impl Tiling {
    /// Builds a tiling from raw pairs without validating the invariants;
    /// run [`verify_tiling`] to check them.
    pub fn from_pairs(grid_h: usize, grid_w: usize, pairs: Vec<(Cell, Cell)>) -> Tiling {
        let mut pairs: Vec<_> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        Tiling {
            grid_h,
            grid_w,
            pairs,
        }
    }

    pub fn grid_h(&self) -> usize {
        self.grid_h
    }

    pub fn grid_w(&self) -> usize {
        self.grid_w
    }

    pub fn pairs(&self) -> &[(Cell, Cell)] {
        &self.pairs
    }
}

/// Checks the three tiling invariants: pairs cover every grid cell
/// exactly once, every pair is edge-adjacent, and every pair joins the
/// two parities.
pub fn verify_tiling(t: &Tiling) -> bool {
    let cells = t.grid_h * t.grid_w;
    if t.pairs.len() * 2 != cells {
        return false;
    }
    let mut seen = vec![false; cells];
    for &((i, j), (k, l)) in &t.pairs {
        if i >= t.grid_h || j >= t.grid_w || k >= t.grid_h || l >= t.grid_w {
            return false;
        }
        let distance = i.abs_diff(k) + j.abs_diff(l);
        if distance != 1 {
            return false;
        }
        if Parity::of(i, j) == Parity::of(k, l) {
            return false;
        }
        for cell in [i * t.grid_w + j, k * t.grid_w + l] {
            if seen[cell] {
                return false;
            }
            seen[cell] = true;
        }
    }
    true
}

/// Original dimensions recorded by [`pad_to_even`], used to undo it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CropRecord {
    pub height: usize,
    pub width: usize,
}

impl CropRecord {
    /// Crops back to the recorded dimensions (top-left corner).
    pub fn apply(&self, img: &Image) -> Result<Image, DenoiseError> {
        if self.height > img.height() || self.width > img.width() {
            return Err(DenoiseError::ShapeMismatch(format!(
                "cannot crop {}x{} out of {}x{}",
                self.height,
                self.width,
                img.height(),
                img.width()
            )));
        }
        let mut data = Vec::with_capacity(self.height * self.width);
        for i in 0..self.height {
            for j in 0..self.width {
                data.push(img.get(i, j));
            }
        }
        Image::from_data(self.height, self.width, data, img.bit_depth())
    }
}

/// Mirror-pads each odd dimension by one duplicated edge row/column so
/// both dimensions are even. Returns the padded image and the record
/// that [`CropRecord::apply`] uses to undo the padding exactly.
pub fn pad_to_even(img: &Image) -> (Image, CropRecord) {
    let crop = CropRecord {
        height: img.height(),
        width: img.width(),
    };
    let out_h = img.height() + img.height() % 2;
    let out_w = img.width() + img.width() % 2;
    if out_h == img.height() && out_w == img.width() {
        return (img.clone(), crop);
    }
    let mut data = Vec::with_capacity(out_h * out_w);
    for i in 0..out_h {
        let src_i = i.min(img.height() - 1);
        for j in 0..out_w {
            let src_j = j.min(img.width() - 1);
            data.push(img.get(src_i, src_j));
        }
    }
    let padded = Image::from_data(out_h, out_w, data, img.bit_depth())
        .expect("padded samples come from a valid image");
    (padded, crop)
}

/// Splits an even-width image into its two checkerboard halves.
///
/// The even half collects even-parity pixels, the odd half the rest;
/// each output is `height x width/2` and row `i` of either half reads
/// the source row left to right.
pub fn checkerboard_downsample(img: &Image) -> Result<(Image, Image), DenoiseError> {
    if !img.width().is_multiple_of(2) {
        return Err(DenoiseError::OddWidth(img.width()));
    }
    let half = img.width() / 2;
    let mut even = Vec::with_capacity(img.height() * half);
    let mut odd = Vec::with_capacity(img.height() * half);
    for i in 0..img.height() {
        let offset = i % 2;
        for j in 0..half {
            even.push(img.get(i, 2 * j + offset));
            odd.push(img.get(i, 2 * j + (1 - offset)));
        }
    }
    Ok((
        Image::from_data(img.height(), half, even, img.bit_depth())?,
        Image::from_data(img.height(), half, odd, img.bit_depth())?,
    ))
}

/// Minimum-cost domino tiling of `img`, built from the `parity` side.
///
/// Pixels of `parity` act as assignment agents and their opposite-parity
/// neighbors as tasks; edge costs come from [`neighbor_cost`]. The image
/// must already have an even pixel count (see [`pad_to_even`]).
pub fn domino_tiling(img: &Image, parity: Parity) -> Result<Tiling, DenoiseError> {
    let costs = build_cost_matrix(img, parity)?;
    let assignment = solve_lap(&costs)?;
    let agents = parity_pixels(img.height(), img.width(), parity);
    let tasks = parity_pixels(img.height(), img.width(), parity.opposite());
    let pairs = assignment
        .iter()
        .enumerate()
        .map(|(agent, &task)| (agents[agent], tasks[task]))
        .collect();
    Ok(Tiling::from_pairs(img.height(), img.width(), pairs))
}

/// Pixels of one parity in row-major order.
pub(crate) fn parity_pixels(height: usize, width: usize, parity: Parity) -> Vec<(usize, usize)> {
    let mut pixels = Vec::with_capacity(height * width / 2 + 1);
    for i in 0..height {
        for j in 0..width {
            if Parity::of(i, j) == parity {
                pixels.push((i, j));
            }
        }
    }
    pixels
}

/// Keeps the `keep`-parity pixels of `img` and overwrites every
/// opposite-parity pixel with its `keep`-parity partner under `t`.
///
/// The image is padded to the tiling's grid before filling and cropped
/// back afterwards, so the output always matches `img`'s dimensions.
pub fn render_tiling(img: &Image, t: &Tiling, keep: Parity) -> Result<Image, DenoiseError> {
    if !verify_tiling(t) {
        return Err(DenoiseError::InvalidTiling(
            "tiling invariants do not hold".into(),
        ));
    }
    let (padded, crop) = pad_to_even(img);
    if padded.height() != t.grid_h || padded.width() != t.grid_w {
        return Err(DenoiseError::InvalidTiling(format!(
            "tiling grid {}x{} does not match padded image {}x{}",
            t.grid_h,
            t.grid_w,
            padded.height(),
            padded.width()
        )));
    }
    let mut out = padded.clone();
    for &(a, b) in &t.pairs {
        let (kept, gap) = if Parity::of(a.0, a.1) == keep {
            (a, b)
        } else {
            (b, a)
        };
        out.set(gap.0, gap.1, padded.get(kept.0, kept.1));
    }
    crop.apply(&out)
}

/// The two tiling-filled images the denoiser validates against: one
/// keeps even pixels and fills odd gaps, the other the reverse. Padding
/// of odd dimensions is handled internally.
pub fn pixel_domino_pair(img: &Image) -> Result<(Image, Image), DenoiseError> {
    let (padded, crop) = pad_to_even(img);
    let even_tiling = domino_tiling(&padded, Parity::Even)?;
    let odd_tiling = domino_tiling(&padded, Parity::Odd)?;
    let even_filled = crop.apply(&render_tiling(&padded, &even_tiling, Parity::Even)?)?;
    let odd_filled = crop.apply(&render_tiling(&padded, &odd_tiling, Parity::Odd)?)?;
    Ok((even_filled, odd_filled))
}
