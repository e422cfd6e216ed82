//! Reference model of the statistically self-similar Sierpinski triangle.
//!
//! Nothing here knows about tiles. The simulator is judged against these
//! functions, and these functions are judged against closed forms in tests.

use thiserror::Error;

use crate::prefix::CodingPrefix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("prefix too short: ({x},{y}) needs more than {len} trits")]
    PrefixTooShort { x: u64, y: u64, len: usize },
    #[error("coordinates are 1-indexed, got ({x},{y})")]
    ZeroCoordinate { x: u64, y: u64 },
}

/// Scale of a 1-indexed coordinate: 0 for the base column/row, otherwise
/// the j with 2^(j-1) < x <= 2^j.
pub fn scale(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Membership of (x, y) in the fractal coded by `s`.
pub fn member(x: u64, y: u64, s: &CodingPrefix) -> Result<bool, OracleError> {
    if x == 0 || y == 0 {
        return Err(OracleError::ZeroCoordinate { x, y });
    }
    let len = s.len();
    if scale(x.max(y)) as usize > len {
        return Err(OracleError::PrefixTooShort { x, y, len });
    }
    let (mut x, mut y) = (x, y);
    while (x, y) != (1, 1) {
        let (j, k) = (scale(x), scale(y));
        let m = j.max(k) as usize;
        let trit = s.get(m).expect("scale checked against prefix length");
        match j.cmp(&k) {
            std::cmp::Ordering::Less => {
                if trit == 1 {
                    return Ok(false);
                }
                y -= 1 << (k - 1);
            }
            std::cmp::Ordering::Equal => {
                if trit == 2 {
                    return Ok(false);
                }
                x -= 1 << (j - 1);
                y -= 1 << (k - 1);
            }
            std::cmp::Ordering::Greater => {
                if trit == 3 {
                    return Ok(false);
                }
                x -= 1 << (j - 1);
            }
        }
    }
    Ok(true)
}

/// A 2^n x 2^n ON/OFF grid, stored row-major from y = 1 upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleGrid {
    n: u32,
    cells: Vec<bool>,
}

impl OracleGrid {
    pub fn from_fn(n: u32, mut f: impl FnMut(u64, u64) -> bool) -> Self {
        let side = 1u64 << n;
        let mut cells = Vec::with_capacity((side * side) as usize);
        for y in 1..=side {
            for x in 1..=side {
                cells.push(f(x, y));
            }
        }
        OracleGrid { n, cells }
    }

    /// Build from row-major cells; panics if the length is not 4^n.
    pub fn from_cells(n: u32, cells: Vec<bool>) -> Self {
        assert_eq!(cells.len(), 1usize << (2 * n), "grid size mismatch");
        OracleGrid { n, cells }
    }

    pub fn stage(&self) -> u32 {
        self.n
    }

    pub fn side(&self) -> u64 {
        1 << self.n
    }

    pub fn get(&self, x: u64, y: u64) -> bool {
        let side = self.side();
        assert!((1..=side).contains(&x) && (1..=side).contains(&y));
        self.cells[((y - 1) * side + (x - 1)) as usize]
    }

    pub fn count_on(&self) -> u64 {
        self.cells.iter().filter(|&&c| c).count() as u64
    }

    /// First cell (scanning rows from y = 1) where the grids differ.
    pub fn first_difference(&self, other: &OracleGrid) -> Option<(u64, u64)> {
        if self.n != other.n {
            return Some((1, 1));
        }
        let side = self.side();
        self.cells
            .iter()
            .zip(&other.cells)
            .position(|(a, b)| a != b)
            .map(|i| (i as u64 % side + 1, i as u64 / side + 1))
    }
}

/// The stage-|s| grid by pointwise recursion.
pub fn stage_grid(s: &CodingPrefix) -> OracleGrid {
    OracleGrid::from_fn(s.len() as u32, |x, y| {
        member(x, y, s).expect("coordinates lie inside the stage square")
    })
}

/// The same grid grown the constructive way: copy the previous stage into
/// the three new areas, then blank the one named by the next trit.
pub fn stage_grid_copy_mask(s: &CodingPrefix) -> OracleGrid {
    let mut prev = vec![true];
    let mut side = 1usize;
    for &trit in s.trits() {
        let next_side = side * 2;
        let mut next = vec![false; next_side * next_side];
        for (area, (dx, dy)) in [(0u8, (0, 0)), (1, (0, side)), (2, (side, side)), (3, (side, 0))] {
            if area == trit {
                continue;
            }
            for y in 0..side {
                let src = &prev[y * side..(y + 1) * side];
                let row = (y + dy) * next_side + dx;
                next[row..row + side].copy_from_slice(src);
            }
        }
        prev = next;
        side = next_side;
    }
    OracleGrid::from_cells(s.len() as u32, prev)
}

pub fn count_on(s: &CodingPrefix) -> u64 {
    stage_grid(s).count_on()
}

/// Decision indices carried by the north (and east) boundary of a finished
/// stage-n square: position i carries trailing_zeros(i) + 1.
pub fn frontier_labels(n: u32) -> Vec<u32> {
    (1u64..(1 << n)).map(|i| i.trailing_zeros() + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> CodingPrefix {
        s.parse().unwrap()
    }

    #[test]
    fn origin_is_always_on() {
        for s in ["", "1", "2", "3", "3213"] {
            assert!(member(1, 1, &p(s)).unwrap());
        }
    }

    #[test]
    fn one_step_unrolls() {
        assert!(!member(2, 2, &p("2")).unwrap());
        assert!(!member(1, 2, &p("1")).unwrap());
        assert!(!member(2, 1, &p("3")).unwrap());
        assert!(member(2, 2, &p("1")).unwrap());
    }

    #[test]
    fn errors_outside_the_square() {
        assert_eq!(
            member(3, 1, &p("2")),
            Err(OracleError::PrefixTooShort { x: 3, y: 1, len: 1 })
        );
        assert!(matches!(member(0, 1, &p("2")), Err(OracleError::ZeroCoordinate { .. })));
    }

    #[test]
    fn scale_boundaries() {
        assert_eq!(scale(1), 0);
        assert_eq!(scale(2), 1);
        assert_eq!(scale(3), 2);
        assert_eq!(scale(4), 2);
        assert_eq!(scale(5), 3);
    }

    #[test]
    fn stage_one_grid() {
        let g = stage_grid(&p("2"));
        assert!(g.get(1, 1) && g.get(1, 2) && g.get(2, 1));
        assert!(!g.get(2, 2));
        assert_eq!(stage_grid(&p("")).count_on(), 1);
    }

    #[test]
    fn small_frontier_labels() {
        assert_eq!(frontier_labels(1), vec![1]);
        assert_eq!(frontier_labels(2), vec![1, 2, 1]);
        assert_eq!(frontier_labels(4), vec![1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1]);
    }

    #[test]
    fn first_difference_reports_coordinates() {
        let a = stage_grid(&p("12"));
        let b = OracleGrid::from_fn(2, |x, y| if (x, y) == (3, 4) { !a.get(x, y) } else { a.get(x, y) });
        assert_eq!(a.first_difference(&b), Some((3, 4)));
        assert_eq!(a.first_difference(&a), None);
    }
}
