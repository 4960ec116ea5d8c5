//! Small dense eigen-solvers and orthonormalisation.

use alloc::vec;
use alloc::vec::Vec;

// Float supplies sqrt/powf when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::{c, CMatrix, C64};

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending, with eigenvectors as the columns of `v`
/// (stored row-major, `v[i * n + k]` is component `i` of vector `k`).
fn jacobi_symmetric(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i * n + new] = v[i * n + old];
        }
    }
    (values, vecs)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
/// Hermitian matrix. Only the Hermitian part of `h` is used.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(h.is_square(), "hermitian_eigen needs a square matrix");
    let n = h.rows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    // Real embedding [[Re, -Im], [Im, Re]] doubles every eigenvalue.
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * m + j] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
            a[(i + n) * m + (j + n)] = z.re;
        }
    }
    let (values, vecs) = jacobi_symmetric(&mut a, m);
    let mut chosen: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut chosen_values = Vec::with_capacity(n);
    for k in 0..m {
        if chosen.len() == n {
            break;
        }
        let mut w: Vec<C64> = (0..n).map(|i| c(vecs[i * m + k], vecs[(i + n) * m + k])).collect();
        for u in &chosen {
            let proj: C64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= proj * ui;
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            chosen.push(w);
            chosen_values.push(values[k]);
        }
    }
    let vectors = CMatrix::from_fn(n, chosen.len(), |i, k| chosen[k][i]);
    (chosen_values, vectors)
}

/// Smallest eigenvalue of the Hermitian part of `h`.
pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    hermitian_eigen(h).0.first().copied().unwrap_or(0.0)
}

/// QR-style Gram-Schmidt on the columns of `m`. Columns that are numerically
/// dependent on earlier ones come back as zero.
pub fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let (rows, cols) = m.shape();
    let mut out = m.clone();
    for k in 0..cols {
        for j in 0..k {
            let proj: C64 = (0..rows).map(|i| out[(i, j)].conj() * out[(i, k)]).sum();
            for i in 0..rows {
                let v = out[(i, j)];
                out[(i, k)] -= proj * v;
            }
        }
        let norm = (0..rows).map(|i| out[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let inv = if norm > 1e-12 { 1.0 / norm } else { 0.0 };
        for i in 0..rows {
            out[(i, k)] *= inv;
        }
    }
    out
}

/// Hilbert-Schmidt Gram-Schmidt over a list of square matrices, each result
/// scaled so that `tr(U_j† U_i) = scale * δ_ij`.
pub fn hilbert_schmidt_orthonormalize(mats: &[CMatrix], scale: f64) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::with_capacity(mats.len());
    for m in mats {
        let mut w = m.clone();
        for u in &out {
            let proj = u.inner(&w) / scale;
            w = &w - &u.scale(proj);
        }
        let norm = w.frobenius_norm();
        out.push(w.scale(c(scale.sqrt() / norm, 0.0)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_pauli_y() {
        let y = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&y);
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        for (k, &val) in vals.iter().enumerate() {
            let v = vecs.block(0, k, 2, 1);
            let yv = y.matmul(&v);
            assert!(yv.max_abs_diff(&v.scale(c(val, 0.0))) < 1e-12);
        }
        assert!(vecs.unitarity_residual() < 1e-12);
    }

    #[test]
    fn eigen_degenerate_spectrum() {
        let d = CMatrix::from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0]);
        let (vals, vecs) = hermitian_eigen(&d);
        assert_eq!(vals.len(), 3);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!(vecs.unitarity_residual() < 1e-12);
    }

    #[test]
    fn gram_schmidt_makes_unitary() {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            c(
                (i * 3 + j) as f64 + 1.0,
                (i as f64) - (j as f64) * 0.5 + if i == j { 3.0 } else { 0.0 },
            )
        });
        let q = orthonormalize_columns(&m);
        assert!(q.unitarity_residual() < 1e-10);
    }
}
