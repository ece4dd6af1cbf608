//! Dense real-symmetric eigendecomposition and spectral time evolution.
//!
//! The solver is the classic pair of Householder reduction to tridiagonal
//! form followed by the implicitly shifted QL iteration, in the EISPACK/Jama
//! lineage, kept generic over the scalar type. A values-only path skips the
//! transformation accumulation, which dominates the cost when only spectra
//! are needed.

use ndarray::{Array1, Array2, ArrayView1, ShapeBuilder};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_QL_ITERATIONS: usize = 64;

/// Eigenvalues in ascending order paired with orthonormal eigenvectors;
/// column `k` of `vectors` belongs to `values[k]`.
///
/// The sign of each eigenvector is fixed so that its largest-magnitude
/// component (first such index on ties) is positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T> {
    values: Vec<T>,
    vectors: Array2<T>,
}

impl<T: Real> EigenDecomposition<T> {
    /// Assembles a decomposition from precomputed parts. The caller is
    /// responsible for ascending order and orthonormality; used for the
    /// block-assembled approximate eigenbases.
    pub(crate) fn from_parts(values: Vec<T>, vectors: Array2<T>) -> Self {
        debug_assert_eq!(values.len(), vectors.ncols());
        Self { values, vectors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn vectors(&self) -> &Array2<T> {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> ArrayView1<'_, T> {
        self.vectors.column(k)
    }
}

fn check_symmetric<T: Real>(m: &Array2<T>) -> Result<()> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix must be square, got {}x{}",
            n,
            m.ncols()
        )));
    }
    let mut max_dev = T::zero();
    let mut max_abs = T::zero();
    for i in 0..n {
        for j in i..n {
            max_abs = max_abs.max(m[(i, j)].abs());
            max_dev = max_dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    let tol = T::of(1e-12).max(T::epsilon() * T::of(8.0)) * T::one().max(max_abs);
    if max_dev > tol {
        return Err(Error::NotSymmetric {
            max_dev: max_dev.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Full eigendecomposition of a symmetric matrix (checked).
pub fn eigh<T: Real>(m: &Array2<T>) -> Result<EigenDecomposition<T>> {
    check_symmetric(m)?;
    let n = m.nrows();
    let mut v = to_column_major(m);
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    householder_tridiag(n, &mut v, &mut d, &mut e, true);
    ql_implicit(n, &mut d, &mut e, Some(&mut v))?;
    sort_and_fix_signs(n, &mut d, Some(&mut v));
    let vectors = Array2::from_shape_vec((n, n).f(), v).expect("column-major layout");
    Ok(EigenDecomposition { values: d, vectors })
}

/// Eigenvalues only, ascending. Skips eigenvector accumulation entirely.
pub fn eigh_values<T: Real>(m: &Array2<T>) -> Result<Vec<T>> {
    check_symmetric(m)?;
    let n = m.nrows();
    let mut v = to_column_major(m);
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    householder_tridiag(n, &mut v, &mut d, &mut e, false);
    ql_implicit(n, &mut d, &mut e, None)?;
    sort_and_fix_signs(n, &mut d, None);
    Ok(d)
}

fn to_column_major<T: Real>(m: &Array2<T>) -> Vec<T> {
    let n = m.nrows();
    let mut v = vec![T::zero(); n * n];
    for j in 0..n {
        for i in 0..n {
            v[j * n + i] = m[(i, j)];
        }
    }
    v
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
///
/// `v` is column-major n×n. On return `d` holds the tridiagonal diagonal and
/// `e[1..]` the subdiagonal. With `accumulate` the orthogonal transformation
/// is formed in `v`; otherwise `v` holds reduction scratch only.
fn householder_tridiag<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T], accumulate: bool) {
    if n == 1 {
        d[0] = v[0];
        if accumulate {
            v[0] = T::one();
        }
        e[0] = T::zero();
        return;
    }
    for j in 0..n {
        d[j] = v[j * n + (n - 1)];
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[j * n + (i - 1)];
                v[j * n + i] = T::zero();
                v[i * n + j] = T::zero();
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }

            for j in 0..i {
                f = d[j];
                v[i * n + j] = f;
                g = e[j] + v[j * n + j] * f;
                let col_j = j * n;
                for k in (j + 1)..i {
                    g += v[col_j + k] * d[k];
                    e[k] += v[col_j + k] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col_j = j * n;
                for k in j..i {
                    v[col_j + k] -= f * e[k] + g * d[k];
                }
                d[j] = v[col_j + (i - 1)];
                v[col_j + i] = T::zero();
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..(n - 1) {
            v[i * n + (n - 1)] = v[i * n + i];
            v[i * n + i] = T::one();
            let h = d[i + 1];
            if h != T::zero() {
                for k in 0..=i {
                    d[k] = v[(i + 1) * n + k] / h;
                }
                for j in 0..=i {
                    let mut g = T::zero();
                    for k in 0..=i {
                        g += v[(i + 1) * n + k] * v[j * n + k];
                    }
                    for k in 0..=i {
                        v[j * n + k] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[(i + 1) * n + k] = T::zero();
            }
        }
        for j in 0..n {
            d[j] = v[j * n + (n - 1)];
            v[j * n + (n - 1)] = T::zero();
        }
        v[(n - 1) * n + (n - 1)] = T::one();
    } else {
        // The Householder similarity leaves the final tridiagonal diagonal
        // on the matrix diagonal.
        for j in 0..n {
            d[j] = v[j * n + j];
        }
    }
    e[0] = T::zero();
}

/// Implicitly shifted QL iteration on a symmetric tridiagonal matrix.
fn ql_implicit<T: Real>(n: usize, d: &mut [T], e: &mut [T], mut v: Option<&mut [T]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: iter,
                    });
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (e[l] + e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(v) = v.as_deref_mut() {
                        let (col_i, col_ip1) = {
                            let (lo, hi) = v.split_at_mut((i + 1) * n);
                            (&mut lo[i * n..], &mut hi[..n])
                        };
                        for k in 0..n {
                            h = col_ip1[k];
                            col_ip1[k] = s * col_i[k] + c * h;
                            col_i[k] = c * col_i[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Ascending eigenvalue order (stable under ties) and the deterministic
/// sign convention for eigenvectors.
fn sort_and_fix_signs<T: Real>(n: usize, d: &mut [T], v: Option<&mut [T]>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let sorted: Vec<T> = order.iter().map(|&k| d[k]).collect();
    d.copy_from_slice(&sorted);
    if let Some(v) = v {
        let mut sorted_v = vec![T::zero(); n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            sorted_v[new_col * n..(new_col + 1) * n]
                .copy_from_slice(&v[old_col * n..(old_col + 1) * n]);
        }
        for col in sorted_v.chunks_exact_mut(n) {
            let mut best = 0;
            for (k, val) in col.iter().enumerate() {
                if val.abs() > col[best].abs() {
                    best = k;
                }
            }
            if col[best] < T::zero() {
                for val in col.iter_mut() {
                    *val = -*val;
                }
            }
        }
        v.copy_from_slice(&sorted_v);
    }
}

/// Spectral time evolution: ψ(t) = Σ_k e^{-i λ_k t} v_k (v_kᵀ ψ).
///
/// Energies and time are reciprocal units, so the phases are dimensionless.
pub fn evolve<T: Real>(
    decomp: &EigenDecomposition<T>,
    psi: &Array1<Complex<T>>,
    t: T,
) -> Result<Array1<Complex<T>>> {
    let dim = decomp.vectors.nrows();
    if psi.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state length {} does not match eigenbasis dimension {}",
            psi.len(),
            dim
        )));
    }
    let coeffs = project(decomp, psi);
    Ok(reconstruct(decomp, &coeffs, t))
}

/// Expansion coefficients c_k = v_kᵀ ψ of a state in the eigenbasis.
pub(crate) fn project<T: Real>(
    decomp: &EigenDecomposition<T>,
    psi: &Array1<Complex<T>>,
) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    (0..decomp.len())
        .map(|k| {
            decomp
                .vectors
                .column(k)
                .iter()
                .zip(psi.iter())
                .map(|(&v, &z)| z * v)
                .fold(zero, |acc, z| acc + z)
        })
        .collect()
}

/// ψ(t) from precomputed expansion coefficients.
pub(crate) fn reconstruct<T: Real>(
    decomp: &EigenDecomposition<T>,
    coeffs: &[Complex<T>],
    t: T,
) -> Array1<Complex<T>> {
    let dim = decomp.vectors.nrows();
    let mut out = Array1::from_elem(dim, Complex::new(T::zero(), T::zero()));
    for (k, &c) in coeffs.iter().enumerate() {
        let phase = Complex::from_polar(T::one(), -decomp.values[k] * t);
        let w = c * phase;
        for (o, &v) in out.iter_mut().zip(decomp.vectors.column(k).iter()) {
            *o += w * v;
        }
    }
    out
}
