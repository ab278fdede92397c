//! Exact rational Gaussian elimination for the small dense systems that
//! appear when splitting a series over the `{t^n} U {p_j t^n}` basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub(crate) enum SolveOutcome {
    /// The system has exactly one solution.
    Unique(Vec<BigRational>),
    /// No solution satisfies every equation.
    Inconsistent,
    /// Consistent but rank-deficient; the window was too short to pin the
    /// coefficients down.
    Underdetermined,
}

/// Solves `A x = b` exactly, where `A` is given in row-major integer form.
/// The system may be overdetermined; every row is checked.
pub(crate) fn solve_exact(rows: Vec<Vec<BigInt>>, rhs: Vec<BigInt>) -> SolveOutcome {
    assert_eq!(rows.len(), rhs.len());
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<BigRational> =
                row.into_iter().map(BigRational::from_integer).collect();
            r.push(BigRational::from_integer(b));
            r
        })
        .collect();

    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..n_cols {
        let Some(p) = (row..n_rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..=n_cols {
            let v = &m[row][c] / &inv;
            m[row][c] = v;
        }
        for r in 0..n_rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n_cols {
                    let v = &m[r][c] - &factor * &m[row][c];
                    m[r][c] = v;
                }
            }
        }
        pivot_rows.push((row, col));
        row += 1;
        if row == n_rows {
            break;
        }
    }

    // Any leftover row with zero coefficients and nonzero rhs is a
    // contradiction.
    for r in row..n_rows {
        if !m[r][n_cols].is_zero() {
            return SolveOutcome::Inconsistent;
        }
    }
    if pivot_rows.len() < n_cols {
        return SolveOutcome::Underdetermined;
    }

    let mut x = vec![BigRational::zero(); n_cols];
    for &(r, c) in &pivot_rows {
        x[c] = m[r][n_cols].clone();
    }
    SolveOutcome::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1, 2x = 4 (consistent overdetermined)
        let rows = vec![vec![bi(1), bi(1)], vec![bi(1), bi(-1)], vec![bi(2), bi(0)]];
        match solve_exact(rows, vec![bi(3), bi(1), bi(4)]) {
            SolveOutcome::Unique(x) => {
                assert_eq!(x[0], BigRational::from_integer(bi(2)));
                assert_eq!(x[1], BigRational::from_integer(bi(1)));
            }
            _ => panic!("expected unique solution"),
        }
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![vec![bi(1), bi(1)], vec![bi(1), bi(1)]];
        assert!(matches!(
            solve_exact(rows, vec![bi(1), bi(2)]),
            SolveOutcome::Inconsistent
        ));
    }

    #[test]
    fn underdetermined_system() {
        let rows = vec![vec![bi(1), bi(1)]];
        assert!(matches!(
            solve_exact(rows, vec![bi(1)]),
            SolveOutcome::Underdetermined
        ));
    }
}
