//! Small dense complex linear algebra: one-sided Jacobi SVD, two-sided
//! Jacobi Hermitian eigensolver, and Haar-random unitaries via
//! Gram-Schmidt QR.
//!
//! Matrices are row-major `&[Complex64]` slices with explicit dimensions.
//! Everything here targets the modest sizes of this crate (a few hundred
//! rows at most), where Jacobi methods converge to machine precision in a
//! handful of sweeps.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// f64 math through the trait so the no_std build finds it in libm.
#[allow(unused_imports)]
use num_traits::Float;
use rand_core::RngCore;

use crate::rng::standard_normal;

const JACOBI_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;
/// Relative floor under which singular values are treated as rank loss.
const RANK_EPS: f64 = 1e-13;

/// Singular value decomposition A = U diag(values) V^H, truncated to the
/// numerical rank. `left[k]` / `right[k]` are the k-th singular vectors
/// (length `rows` / `cols`), sorted by descending singular value.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

/// 2x2 unitary that diagonalizes the Hermitian matrix
/// [[app, h], [conj(h), aqq]]; returns (c, s, phase) for the update
/// p' = c·p − s·conj-phase·q, q' = s·p + c·conj-phase·q.
fn jacobi_rotation(app: f64, aqq: f64, h: Complex64) -> (f64, f64, Complex64) {
    let mag = h.norm();
    let phase = h / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t, phase)
}

/// One-sided Jacobi on the columns of a tall matrix (rows >= cols).
/// Returns (orthogonalized columns, accumulated right rotations V).
/// The kernel walks paired columns by index; iterator forms obscure the
/// couplings.
#[allow(clippy::needless_range_loop)]
fn one_sided_jacobi(mut cols: Vec<Vec<Complex64>>) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let n = cols.len();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::ZERO; n];
            e[j] = Complex64::ONE;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::ZERO;
                for k in 0..cols[p].len() {
                    app += cols[p][k].norm_sqr();
                    aqq += cols[q][k].norm_sqr();
                    apq += cols[p][k].conj() * cols[q][k];
                }
                if apq.norm() <= JACOBI_EPS * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(app, aqq, apq);
                let pc = phase.conj();
                for k in 0..cols[p].len() {
                    let (xp, xq) = (cols[p][k], cols[q][k]);
                    cols[p][k] = c * xp - s * pc * xq;
                    cols[q][k] = s * xp + c * pc * xq;
                }
                for k in 0..n {
                    let (vp, vq) = (v[p][k], v[q][k]);
                    v[p][k] = c * vp - s * pc * vq;
                    v[q][k] = s * vp + c * pc * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (cols, v)
}

/// SVD of a row-major `rows x cols` matrix.
pub fn svd(a: &[Complex64], rows: usize, cols: usize) -> Svd {
    assert_eq!(a.len(), rows * cols, "matrix shape mismatch");
    let wide = rows < cols;
    // Work on the tall orientation; transposing swaps U and V.
    let (m, n) = if wide { (cols, rows) } else { (rows, cols) };
    let mut work: Vec<Vec<Complex64>> = vec![vec![Complex64::ZERO; m]; n];
    for r in 0..rows {
        for c in 0..cols {
            let x = a[r * cols + c];
            if wide {
                work[r][c] = x.conj();
            } else {
                work[c][r] = x;
            }
        }
    }

    let (ortho, rot) = one_sided_jacobi(work);
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = ortho
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let top = norms[order[0]];
    let mut values = Vec::new();
    let mut tall_vecs = Vec::new();
    let mut small_vecs = Vec::new();
    for &j in &order {
        if norms[j] <= top * RANK_EPS {
            break;
        }
        values.push(norms[j]);
        tall_vecs.push(ortho[j].iter().map(|z| z / norms[j]).collect::<Vec<_>>());
        small_vecs.push(rot[j].clone());
    }

    if wide {
        // A^H = tall · diag · small^H, so A's left vectors are `small` and
        // its right vectors are `tall`.
        Svd {
            values,
            left: small_vecs,
            right: tall_vecs,
        }
    } else {
        Svd {
            values,
            left: tall_vecs,
            right: small_vecs,
        }
    }
}

/// Eigendecomposition of a Hermitian row-major `n x n` matrix.
/// Returns eigenvalues in descending order with matching eigenvectors.
pub fn hermitian_eigen(a: &[Complex64], n: usize) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    assert_eq!(a.len(), n * n, "matrix shape mismatch");
    // Wash any sub-tolerance asymmetry so the iteration sees an exactly
    // Hermitian matrix.
    let mut m = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i].conj());
        }
    }

    let scale = m
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut v: Vec<Complex64> = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::ONE;
    }

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[p * n + q].norm());
            }
        }
        if off <= JACOBI_EPS * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let h = m[p * n + q];
                if h.norm() <= JACOBI_EPS * scale {
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(m[p * n + p].re, m[q * n + q].re, h);
                let pc = phase.conj();
                // Columns: M <- M G, V <- V G.
                for k in 0..n {
                    let (xp, xq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * xp - s * pc * xq;
                    m[k * n + q] = s * xp + c * pc * xq;
                    let (vp, vq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vp - s * pc * vq;
                    v[k * n + q] = s * vp + c * pc * vq;
                }
                // Rows: M <- G^H M.
                for k in 0..n {
                    let (xp, xq) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * xp - s * phase * xq;
                    m[q * n + k] = s * xp + c * phase * xq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    order.sort_by(|&i, &j| evals[j].partial_cmp(&evals[i]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| evals[i]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|k| v[k * n + j]).collect::<Vec<_>>())
        .collect();
    (values, vectors)
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Vec<f64> {
    hermitian_eigen(a, n).0
}

/// Haar-distributed `n x n` unitary (row-major): QR of a complex Gaussian
/// matrix by modified Gram-Schmidt. MGS yields R with a positive real
/// diagonal, which is exactly the convention under which Q is Haar.
pub fn haar_unitary(n: usize, rng: &mut impl RngCore) -> Vec<Complex64> {
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut col: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
            .collect();
        // Two orthogonalization passes keep the loss of orthogonality at
        // rounding level.
        for _ in 0..2 {
            for prev in &q {
                let r: Complex64 = prev.iter().zip(&col).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= r * p;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // essentially impossible; redraw the column
        }
        for c in &mut col {
            *c /= norm;
        }
        q.push(col);
    }

    let mut out = vec![Complex64::ZERO; n * n];
    for (j, col) in q.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            out[i * n + j] = *z;
        }
    }
    out
}

/// max |U^H U − I| for a row-major `n x n` matrix.
pub fn unitarity_deviation(u: &[Complex64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += u[k * n + i].conj() * u[k * n + j];
            }
            let target = if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}
