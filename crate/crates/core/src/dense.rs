//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit QL with Wilkinson shifts, accumulating the transform.
//!
//! Residuals come out at machine precision relative to the matrix norm,
//! which the certified eigenpair contracts in [`crate::spectrum`] rely on.
//! Complex Hermitian matrices are handled through the real symmetric
//! embedding `[[Re, -Im], [Im, Re]]`, whose doubled spectrum is collapsed
//! back to complex eigenvectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{DickeError, Result};

/// Householder reduction of a symmetric matrix to tridiagonal form.
///
/// On return `d` holds the diagonal, `e[1..]` the subdiagonal, and `a` the
/// accumulated orthogonal transform `Q` with `A = Q T Q^T`.
fn tred2(a: &mut DMatrix<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = a.nrows();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[(i, k)].abs();
            }
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[(j, i)] = a[(i, j)] / h;
                    let mut g2 = 0.0;
                    for k in 0..=j {
                        g2 += a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g2 += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g2 / h;
                    f_acc += e[j] * a[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let fj = a[(i, j)];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        a[(j, k)] -= fj * e[k] + gj * a[(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[(i, k)] * a[(k, j)];
                }
                for k in 0..i {
                    let delta = g * a[(k, i)];
                    a[(k, j)] -= delta;
                }
            }
        }
        d[i] = a[(i, i)];
        a[(i, i)] = 1.0;
        for j in 0..i {
            a[(j, i)] = 0.0;
            a[(i, j)] = 0.0;
        }
    }
}

/// Implicit QL with shifts on a tridiagonal matrix, rotating the columns of
/// `z` along. `e[0]` is ignored on input.
fn tqli(d: &mut [f64], e: &mut [f64], z: &mut DMatrix<f64>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // Absolute floor keeps the deflation test meaningful when neighboring
    // diagonal entries vanish.
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let rows = z.nrows();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * (dd + scale) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(DickeError::NonConvergence {
                    best_residual: e[l].abs(),
                    iterations: iter,
                    tol: f64::EPSILON * scale,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_rg = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_rg);
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let rr = (d[i] - g) * s + 2.0 * c * b;
                p = s * rr;
                d[i + 1] = g + p;
                g = c * rr - b;
                for k in 0..rows {
                    let fz = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * fz;
                    z[(k, i)] = c * z[(k, i)] - s * fz;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn sort_ascending(vals: &mut [f64], vecs: &mut DMatrix<f64>) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs = DMatrix::zeros(vecs.nrows(), n);
    for (c, &i) in order.iter().enumerate() {
        sorted_vecs.set_column(c, &vecs.column(i));
    }
    vals.copy_from_slice(&sorted_vals);
    *vecs = sorted_vecs;
}

/// Full eigendecomposition of a real symmetric matrix, eigenvalues
/// ascending, eigenvectors as columns.
pub fn sym_eigen(mut a: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), a));
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut a, &mut d, &mut e);
    tqli(&mut d, &mut e, &mut a)?;
    sort_ascending(&mut d, &mut a);
    Ok((d, a))
}

/// Eigendecomposition of a symmetric tridiagonal matrix given its diagonal
/// and subdiagonal (`sub.len() == diag.len() - 1`).
pub fn tridiag_eigen(diag: &[f64], sub: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    for (i, &b) in sub.iter().enumerate() {
        e[i + 1] = b;
    }
    let mut z = DMatrix::identity(n, n);
    tqli(&mut d, &mut e, &mut z)?;
    sort_ascending(&mut d, &mut z);
    Ok((d, z))
}

/// Full eigendecomposition of a complex Hermitian matrix via the real
/// symmetric embedding; eigenvalues ascending.
pub fn herm_eigen(h: &DMatrix<Complex64>) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let (vals, vecs) = sym_eigen(m)?;
    // The embedded spectrum holds every eigenvalue twice; collapse pairs and
    // rebuild complex vectors, orthogonalizing within degenerate groups.
    let mut energies: Vec<f64> = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut col = 0;
    while energies.len() < n && col < 2 * n {
        let lambda = vals[col];
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(vecs[(i, col)], vecs[(i + n, col)]))
            .collect();
        // Strip projections onto previously accepted vectors of the same
        // eigenvalue (embedding pairs give phase copies).
        for (en, prev) in energies.iter().zip(&vectors) {
            if (en - lambda).abs() < 1e-8 * (1.0 + lambda.abs()) {
                let ip: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= ip * p;
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        col += 1;
        if norm < 0.5 {
            continue;
        }
        for z in &mut v {
            *z /= norm;
        }
        energies.push(lambda);
        vectors.push(v);
    }
    if energies.len() < n {
        return Err(DickeError::NonConvergence {
            best_residual: f64::NAN,
            iterations: 0,
            tol: 0.0,
        });
    }
    Ok((energies, vectors))
}
