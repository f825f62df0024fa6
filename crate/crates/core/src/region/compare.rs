//! Grid comparison of two membership predicates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rat;
use crate::point::ExponentPoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub i: usize,
    pub j: usize,
    pub point: ExponentPoint,
    pub a: bool,
    pub b: bool,
    /// `a` changes value among the eight grid neighbours.
    pub near_boundary_a: bool,
    pub near_boundary_b: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub resolution: usize,
    pub points: usize,
    pub disagreements: usize,
    /// Disagreements where neither predicate has a boundary cell nearby.
    pub interior_disagreements: usize,
    /// Disagreements away from the boundary of `a` alone.
    pub off_boundary_a: usize,
    pub all_within_boundary_cells: bool,
    pub locations: Vec<Disagreement>,
}

/// Grid point `(i, j)` of a `resolution × resolution` grid over `[0, 1/2]²`.
pub fn grid_point(i: usize, j: usize, resolution: usize) -> ExponentPoint {
    let n = 2 * (resolution as i64 - 1);
    ExponentPoint::exact(rat(i as i64, n), rat(j as i64, n))
}

/// Evaluate a predicate on the grid; `values[j][i]` is the point `(x_i, y_j)`.
pub fn evaluate_grid<M: Fn(&ExponentPoint) -> bool + ?Sized>(
    m: &M,
    resolution: usize,
) -> Vec<Vec<bool>> {
    (0..resolution)
        .map(|j| {
            (0..resolution)
                .map(|i| m(&grid_point(i, j, resolution)))
                .collect()
        })
        .collect()
}

/// Whether the value at `(i, j)` differs from any in-grid neighbour.
pub fn is_boundary_cell(values: &[Vec<bool>], i: usize, j: usize) -> bool {
    let n = values.len() as i64;
    let v = values[j][i];
    for dj in -1..=1i64 {
        for di in -1..=1i64 {
            let (ii, jj) = (i as i64 + di, j as i64 + dj);
            if (0..n).contains(&ii) && (0..n).contains(&jj) && values[jj as usize][ii as usize] != v
            {
                return true;
            }
        }
    }
    false
}

pub fn compare_grids(a: &[Vec<bool>], b: &[Vec<bool>]) -> DiscrepancyReport {
    let resolution = a.len();
    let mut locations = vec![];
    for j in 0..resolution {
        for i in 0..resolution {
            if a[j][i] != b[j][i] {
                locations.push(Disagreement {
                    i,
                    j,
                    point: grid_point(i, j, resolution),
                    a: a[j][i],
                    b: b[j][i],
                    near_boundary_a: is_boundary_cell(a, i, j),
                    near_boundary_b: is_boundary_cell(b, i, j),
                });
            }
        }
    }
    let interior = locations
        .iter()
        .filter(|d| !d.near_boundary_a && !d.near_boundary_b)
        .count();
    DiscrepancyReport {
        resolution,
        points: resolution * resolution,
        disagreements: locations.len(),
        interior_disagreements: interior,
        off_boundary_a: locations.iter().filter(|d| !d.near_boundary_a).count(),
        all_within_boundary_cells: interior == 0,
        locations,
    }
}

/// Compare two predicates on a `resolution × resolution` grid.
pub fn compare_regions<A, B>(a: &A, b: &B, resolution: usize) -> Result<DiscrepancyReport>
where
    A: Fn(&ExponentPoint) -> bool + ?Sized,
    B: Fn(&ExponentPoint) -> bool + ?Sized,
{
    if resolution < 11 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 11, got {resolution}"
        )));
    }
    Ok(compare_grids(
        &evaluate_grid(a, resolution),
        &evaluate_grid(b, resolution),
    ))
}
