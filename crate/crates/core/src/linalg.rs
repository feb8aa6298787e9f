//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Triangular form of `[A | B]` after Bareiss elimination.
struct Eliminated {
    rows: IntMatrix,
    size: usize,
    det: BigInt,
}

fn eliminate(a: &[Vec<BigInt>], rhs: &[Vec<BigInt>]) -> Result<Eliminated> {
    let size = a.len();
    if a.iter().any(|row| row.len() != size) {
        return Err(Error::invalid("matrix is not square"));
    }
    if rhs.len() != size {
        return Err(Error::invalid("right-hand side has the wrong number of rows"));
    }
    let mut m: IntMatrix = a
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().chain(b).cloned().collect())
        .collect();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut negate = false;
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !m[r][col].is_zero()) else {
            return Ok(Eliminated {
                rows: m,
                size,
                det: BigInt::zero(),
            });
        };
        if pivot != col {
            m.swap(pivot, col);
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(col + 1);
        let prow = &top[col];
        for row in bottom.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..width {
                // exact by Sylvester's identity
                row[j] = (&row[j] * &prow[col] - &lead * &prow[j]) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }
    let det = if size == 0 {
        BigInt::one()
    } else if negate {
        -m[size - 1][size - 1].clone()
    } else {
        m[size - 1][size - 1].clone()
    };
    Ok(Eliminated { rows: m, size, det })
}

pub fn determinant(a: &[Vec<BigInt>]) -> Result<BigInt> {
    Ok(eliminate(a, &vec![Vec::new(); a.len()])?.det)
}

/// Solves `A X = B` for integer `X`. Returns `det(A)` together with the
/// columns of `X`. A singular `A` or a non-integral solution is an
/// invariant violation: every caller solves in a basis it expects to be
/// unimodular.
pub fn solve_integral(a: &[Vec<BigInt>], rhs: &[Vec<BigInt>]) -> Result<(BigInt, Vec<Vec<BigInt>>)> {
    let e = eliminate(a, rhs)?;
    if e.det.is_zero() {
        return Err(Error::invariant("singular transition matrix"));
    }
    let n = e.size;
    let ncols = e.rows.first().map_or(0, |r| r.len() - n);
    let mut solutions = Vec::with_capacity(ncols);
    for c in 0..ncols {
        let mut x = vec![BigInt::zero(); n];
        for i in (0..n).rev() {
            let row = &e.rows[i];
            let mut num = row[n + c].clone();
            for j in i + 1..n {
                num -= &row[j] * &x[j];
            }
            let (q, r) = num.div_rem(&row[i]);
            if !r.is_zero() {
                return Err(Error::invariant("solution is not integral"));
            }
            x[i] = q;
        }
        solutions.push(x);
    }
    Ok((e.det, solutions))
}

/// Inverse of a matrix with determinant `±1`.
pub fn unimodular_inverse(a: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let n = a.len();
    let identity: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    let (det, cols) = solve_integral(a, &identity)?;
    if !det.abs().is_one() {
        return Err(Error::invariant(format!("transition matrix has determinant {det}")));
    }
    // cols[j] is column j of the inverse
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
