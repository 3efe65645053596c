//! Exact linear solves by fraction-free (Bareiss) elimination.
//!
//! Each equation is scaled to integer coefficients, the augmented integer
//! matrix is reduced with Bareiss' exact-division update, and the triangular
//! system is back-substituted over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Solves `A · X = B` for square `A` (`n × n`) and `B` with `k` columns.
/// Returns `X` as `n` rows of `k` entries.
pub fn solve(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("matrix dimensions do not match".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = b[0].len();
    let mut m: Vec<Vec<BigInt>> = a.iter().zip(b).map(|(ra, rb)| integer_row(ra.iter().chain(rb.iter()))).collect();

    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, pivot);
        for r in col + 1..n {
            for c in col + 1..n + k {
                let v = (&m[col][col] * &m[r][c] - &m[r][col] * &m[col][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }

    let mut x = vec![vec![Rational::zero(); k]; n];
    for r in (0..n).rev() {
        for j in 0..k {
            let mut acc = Rational::from_integer(m[r][n + j].clone());
            for c in r + 1..n {
                if !m[r][c].is_zero() {
                    acc -= Rational::from_integer(m[r][c].clone()) * &x[c][j];
                }
            }
            x[r][j] = acc / Rational::from_integer(m[r][r].clone());
        }
    }
    Ok(x)
}

fn integer_row<'a>(entries: impl Iterator<Item = &'a Rational> + Clone) -> Vec<BigInt> {
    let lcm = entries.clone().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    entries.map(|q| q.numer() * (&lcm / q.denom())).collect()
}
