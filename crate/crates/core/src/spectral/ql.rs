//! Implicit-shift QL iteration for symmetric tridiagonal matrices.
//!
//! This follows the classic `tql2` scheme (Bowdler, Martin, Reinsch and
//! Wilkinson): Wilkinson-type shifts, Givens rotations chased from the bottom
//! of each unreduced block, deflation on negligible off-diagonal entries.
//!
//! The rotations are accumulated into an arbitrary set of rows of the
//! eigenvector matrix. Passing the full identity yields all eigenvectors;
//! passing only rows `0` and `N−1` of the identity yields just the two
//! boundary components of every eigenvector in `O(N²)` total work, which is
//! all the transport formulas need.

use nalgebra::DMatrix;

/// Sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct NoConvergence {
    pub index: usize,
}

/// Diagonalize the tridiagonal matrix given by `diag` and `off` in place.
///
/// On return the eigenvalues are sorted ascending and column `k` of `rows`
/// holds the selected rows of the eigenvector paired with eigenvalue `k`.
/// `rows` must have `diag.len()` columns; its rows are typically rows of the
/// identity.
pub(crate) fn eigen_tridiagonal(
    diag: &[f64],
    off: &[f64],
    rows: &mut DMatrix<f64>,
) -> Result<Vec<f64>, NoConvergence> {
    let n = diag.len();
    debug_assert_eq!(off.len() + 1, n);
    debug_assert_eq!(rows.ncols(), n);

    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    let mut shift_total = 0.0;
    let mut scale: f64 = 0.0;
    for l in 0..n {
        scale = scale.max(d[l].abs() + e[l].abs());
        // e[n-1] == 0 guarantees the search stops inside the matrix
        let mut m = l;
        while e[m].abs() > f64::EPSILON * scale {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(NoConvergence { index: l });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let r = p.hypot(1.0).copysign(p);
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                shift_total += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    let r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..rows.nrows() {
                        let z1 = rows[(k, i + 1)];
                        let z0 = rows[(k, i)];
                        rows[(k, i + 1)] = s * z0 + c * z1;
                        rows[(k, i)] = c * z0 - s * z1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= f64::EPSILON * scale {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted = order.iter().map(|&k| d[k]).collect();
    let permuted = DMatrix::from_fn(rows.nrows(), n, |r, c| rows[(r, order[c])]);
    *rows = permuted;
    Ok(sorted)
}
