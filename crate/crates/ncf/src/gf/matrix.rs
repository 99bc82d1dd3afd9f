//! Dense matrices over GF(2^k) and Gauss-Jordan elimination.
//!
//! The solver reduces the augmented system [A | B] to reduced row-echelon
//! form and classifies the outcome: a unique solution, a rank-deficient
//! system (with a per-column account of what is still recoverable), or an
//! inconsistent system that no X satisfies.

use std::ops::{Index, IndexMut};

use super::{Field, GfError};

/// Row-major dense matrix with entries in a GF(2^k) field.
///
/// The matrix does not carry its field; operations that need arithmetic
/// take a [`Field`] argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    /// Zero matrix of the given shape.
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Identity of size n.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds from row vectors; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(GfError::DimensionMismatch(format!(
                "ragged rows: expected {cols} columns, found {}",
                bad.len()
            )));
        }
        let height = rows.len();
        Ok(Self {
            rows: height,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row `r` as a slice.
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix product over the given field.
    pub fn mul(&self, field: &Field, rhs: &Matrix) -> Result<Matrix, GfError> {
        if self.cols != rhs.rows {
            return Err(GfError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::new(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a != 0 {
                    let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                    field.vec_add_scaled(dst, rhs.row(l), a);
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = u8;

    fn index(&self, (r, c): (usize, usize)) -> &u8 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u8 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Outcome of [`mat_solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    /// A has full column rank and the system is consistent; the payload is
    /// the unique X with A·X = B.
    Unique(Matrix),
    /// A is rank-deficient; the report says which columns are still pinned
    /// down despite the deficiency.
    Deficient(RankReport),
    /// No X satisfies A·X = B; the payload lists the contradictory rows of
    /// the reduced system.
    Inconsistent { rows: Vec<usize> },
}

/// Rank structure of a deficient system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    /// Number of pivots found.
    pub rank: usize,
    /// Total number of columns of A (variables).
    pub cols: usize,
    /// Columns that received a pivot, ascending.
    pub pivot_cols: Vec<usize>,
    /// Columns without a pivot, ascending.
    pub free_cols: Vec<usize>,
    /// Variables whose value is the same in every solution: a pivot column
    /// whose reduced row has zeros in all free columns, paired with its
    /// solved right-hand-side row. Ascending by column.
    pub resolved: Vec<(usize, Vec<u8>)>,
}

impl RankReport {
    /// Columns not uniquely determined: the free columns plus any pivot
    /// column whose value depends on a free variable.
    pub fn unrecoverable_cols(&self) -> Vec<usize> {
        let resolved: Vec<usize> = self.resolved.iter().map(|(c, _)| *c).collect();
        (0..self.cols).filter(|c| !resolved.contains(c)).collect()
    }
}

/// Solves A·X = B by Gauss-Jordan elimination on the augmented matrix.
///
/// Pivoting walks columns left to right and picks the first row (lowest
/// index) with a nonzero entry at or below the current elimination row.
/// Requires `a.rows() == b.rows()`.
pub fn mat_solve(field: &Field, a: &Matrix, b: &Matrix) -> Result<Solve, GfError> {
    if a.rows != b.rows {
        return Err(GfError::DimensionMismatch(format!(
            "A has {} rows but B has {}",
            a.rows, b.rows
        )));
    }

    let n = a.cols;
    let width = n + b.cols;
    // Augmented working copy [A | B].
    let mut aug = Matrix::new(a.rows, width);
    for r in 0..a.rows {
        aug.data[r * width..r * width + n].copy_from_slice(a.row(r));
        aug.data[r * width + n..(r + 1) * width].copy_from_slice(b.row(r));
    }

    let mut pivot_cols = Vec::new();
    let mut next = 0usize; // next elimination row
    for col in 0..n {
        let Some(pivot) = (next..aug.rows).find(|&r| aug[(r, col)] != 0) else {
            continue;
        };
        if pivot != next {
            let (lo, hi) = aug.data.split_at_mut(pivot * width);
            lo[next * width..(next + 1) * width].swap_with_slice(&mut hi[..width]);
        }
        // Normalize the pivot row, then clear the column everywhere else.
        // Earlier pivot columns are already zero in every involved row,
        // so the row operations start at `col`.
        let scale = field.inv(aug[(next, col)])?;
        for x in &mut aug.data[next * width + col..(next + 1) * width] {
            *x = field.mul(*x, scale);
        }
        for r in 0..aug.rows {
            let factor = aug[(r, col)];
            if r == next || factor == 0 {
                continue;
            }
            let (pr, tr) = two_rows(&mut aug.data, width, next, r);
            field.vec_add_scaled(&mut tr[col..], &pr[col..], factor);
        }
        pivot_cols.push(col);
        next += 1;
        if next == aug.rows {
            break;
        }
    }

    // A row with no surviving A-part but a nonzero B-part is a contradiction.
    let inconsistent: Vec<usize> = (0..aug.rows)
        .filter(|&r| {
            let row = &aug.data[r * width..(r + 1) * width];
            row[..n].iter().all(|&x| x == 0) && row[n..].iter().any(|&x| x != 0)
        })
        .collect();
    if !inconsistent.is_empty() {
        return Ok(Solve::Inconsistent { rows: inconsistent });
    }

    let rank = pivot_cols.len();
    if rank == n {
        // Pivot i sits at column i, so solution row c is reduced row c.
        let mut x = Matrix::new(n, b.cols);
        for c in 0..n {
            x.data[c * b.cols..(c + 1) * b.cols]
                .copy_from_slice(&aug.data[c * width + n..(c + 1) * width]);
        }
        return Ok(Solve::Unique(x));
    }

    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut resolved = Vec::new();
    for (row, &col) in pivot_cols.iter().enumerate() {
        let depends_on_free = free_cols.iter().any(|&fc| aug[(row, fc)] != 0);
        if !depends_on_free {
            resolved.push((col, aug.data[row * width + n..(row + 1) * width].to_vec()));
        }
    }

    Ok(Solve::Deficient(RankReport {
        rank,
        cols: n,
        pivot_cols,
        free_cols,
        resolved,
    }))
}

/// Disjoint views of rows `a` (shared) and `b` (mutable), a != b.
fn two_rows(data: &mut [u8], width: usize, a: usize, b: usize) -> (&[u8], &mut [u8]) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = data.split_at_mut(b * width);
        (&lo[a * width..(a + 1) * width], &mut hi[..width])
    } else {
        let (lo, hi) = data.split_at_mut(a * width);
        (&hi[..width], &mut lo[b * width..(b + 1) * width])
    }
}
