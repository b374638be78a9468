//! How many domino tilings an `m x n` grid admits.
//!
//! Two independent counters are provided: a closed-form product over
//! cosines evaluated in double precision, and an exact transfer-matrix
//! count in big integers. A brute-force enumerator backs both on tiny
//! grids.

use std::f64::consts::PI;

use num_bigint::BigUint;

use super::{Cell, Tiling};
use crate::error::DenoiseError;

/// Closed-form tiling count of an `m x n` grid:
///
/// ```text
/// product over i = 1..ceil(m/2), j = 1..ceil(n/2) of
///     4 cos^2(pi i / (m + 1)) + 4 cos^2(pi j / (n + 1))
/// ```
///
/// The product is mathematically an integer but is computed in floating
/// point; round the result before comparing against the exact count.
/// Both sides must be at least 1.
pub fn count_tilings_formula(m: usize, n: usize) -> f64 {
    debug_assert!(m >= 1 && n >= 1);
    let mut product = 1.0f64;
    for i in 1..=m.div_ceil(2) {
        for j in 1..=n.div_ceil(2) {
            let a = (PI * i as f64 / (m as f64 + 1.0)).cos();
            let b = (PI * j as f64 / (n as f64 + 1.0)).cos();
            product *= 4.0 * a * a + 4.0 * b * b;
        }
    }
    product
}

/// Upper bound on `min(m, n)` for the exact counter; the state space is
/// `2^min(m, n)` so wider strips are refused.
const MAX_STRIP: usize = 16;
const MAX_EXACT_AREA: usize = 10_000;

/// Exact tiling count of an `m x n` grid by transfer-matrix dynamic
/// programming over column profiles.
///
/// A profile records which cells of the current column are already
/// covered by dominoes protruding from the previous column; each column
/// admits at most one vertical completion per (incoming, outgoing)
/// profile pair. Grids with `m * n > 10000` or `min(m, n) > 16` are
/// refused as too large.
pub fn count_tilings_exact(m: usize, n: usize) -> Result<BigUint, DenoiseError> {
    if m * n > MAX_EXACT_AREA {
        return Err(DenoiseError::SizeLimit(format!(
            "{m}x{n} exceeds the exact-count area limit of {MAX_EXACT_AREA}"
        )));
    }
    let (rows, cols) = if m <= n { (m, n) } else { (n, m) };
    if rows > MAX_STRIP {
        return Err(DenoiseError::SizeLimit(format!(
            "{m}x{n} exceeds the exact-count strip limit of {MAX_STRIP}"
        )));
    }

    let states = 1usize << rows;
    let mut current = vec![BigUint::from(0u8); states];
    current[0] = BigUint::from(1u8);
    let mut next = vec![BigUint::from(0u8); states];
    for _ in 0..cols {
        for slot in next.iter_mut() {
            *slot = BigUint::from(0u8);
        }
        for (incoming, count) in current.iter().enumerate() {
            if count.bits() == 0 {
                continue;
            }
            fill_column(rows, incoming as u32, 0, 0, &mut |outgoing| {
                next[outgoing as usize] += count;
            });
        }
        std::mem::swap(&mut current, &mut next);
    }
    Ok(std::mem::take(&mut current[0]))
}

/// Enumerates the ways to finish one column given the rows already
/// covered from the left, reporting each resulting protrusion profile.
/// Free rows are covered either by a vertical domino with the row below
/// or by a horizontal domino protruding right (a set `outgoing` bit).
fn fill_column(rows: usize, incoming: u32, row: usize, outgoing: u32, report: &mut impl FnMut(u32)) {
    if row == rows {
        report(outgoing);
        return;
    }
    let bit = 1u32 << row;
    if incoming & bit != 0 {
        fill_column(rows, incoming, row + 1, outgoing, report);
        return;
    }
    fill_column(rows, incoming, row + 1, outgoing | bit, report);
    if row + 1 < rows && incoming & (bit << 1) == 0 {
        fill_column(rows, incoming, row + 2, outgoing, report);
    }
}

const MAX_ENUMERATION_AREA: usize = 24;

/// All distinct domino tilings of an `m x n` grid, by backtracking.
///
/// Each returned tiling satisfies the tiling invariants; odd-area grids
/// yield an empty collection. Grids with `m * n > 24` are refused.
pub fn enumerate_tilings(m: usize, n: usize) -> Result<Vec<Tiling>, DenoiseError> {
    if m * n > MAX_ENUMERATION_AREA {
        return Err(DenoiseError::SizeLimit(format!(
            "{m}x{n} exceeds the enumeration area limit of {MAX_ENUMERATION_AREA}"
        )));
    }
    let mut tilings = Vec::new();
    if !(m * n).is_multiple_of(2) {
        return Ok(tilings);
    }
    let mut covered = vec![false; m * n];
    let mut pairs = Vec::with_capacity(m * n / 2);
    extend_tiling(m, n, &mut covered, &mut pairs, &mut tilings);
    Ok(tilings)
}

fn extend_tiling(
    m: usize,
    n: usize,
    covered: &mut [bool],
    pairs: &mut Vec<(Cell, Cell)>,
    tilings: &mut Vec<Tiling>,
) {
    let Some(cell) = covered.iter().position(|&c| !c) else {
        tilings.push(Tiling::from_pairs(m, n, pairs.clone()));
        return;
    };
    let (i, j) = (cell / n, cell % n);
    if j + 1 < n && !covered[cell + 1] {
        covered[cell] = true;
        covered[cell + 1] = true;
        pairs.push(((i, j), (i, j + 1)));
        extend_tiling(m, n, covered, pairs, tilings);
        pairs.pop();
        covered[cell] = false;
        covered[cell + 1] = false;
    }
    if i + 1 < m && !covered[cell + n] {
        covered[cell] = true;
        covered[cell + n] = true;
        pairs.push(((i, j), (i + 1, j)));
        extend_tiling(m, n, covered, pairs, tilings);
        pairs.pop();
        covered[cell] = false;
        covered[cell + n] = false;
    }
}
