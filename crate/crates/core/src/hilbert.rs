//! Operators and states on the spin-1 ⊗ truncated-Fock product space.
//!
//! The Fock space keeps levels |0⟩..|N⟩ (dimension N+1). The full-space
//! basis ordering is spin-major with spin sectors in the order
//! (j_z = +1, 0, -1) and the Fock index ascending within each sector:
//! `index = sector(j_z) * (N+1) + n`. Every module in this crate uses this
//! ordering.

use ndarray::{linalg::kron, s, Array1, Array2};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::SystemParams;

/// Row/column index of a spin sector in the (+1, 0, -1) ordering.
///
/// Panics if `jz` is not -1, 0, or +1.
#[inline]
pub fn spin_sector(jz: i8) -> usize {
    match jz {
        1 => 0,
        0 => 1,
        -1 => 2,
        _ => panic!("spin projection must be -1, 0, or +1"),
    }
}

/// Index of the product basis state |j_z, n⟩ for truncation N = `n_max`.
#[inline]
pub fn basis_index(jz: i8, n: usize, n_max: usize) -> usize {
    debug_assert!(n <= n_max);
    spin_sector(jz) * (n_max + 1) + n
}

/// Photon number operator a†a on |0⟩..|N⟩.
pub fn number_op<T: Real>(n_max: usize) -> Array2<T> {
    Array2::from_diag(&Array1::from_iter((0..=n_max).map(T::of_usize)))
}

/// Annihilation operator: ⟨n-1|a|n⟩ = √n.
pub fn annihilation<T: Real>(n_max: usize) -> Array2<T> {
    let dim = n_max + 1;
    let mut a = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[(n - 1, n)] = T::of_usize(n).sqrt();
    }
    a
}

/// Creation operator a† = (annihilation)ᵀ.
pub fn creation<T: Real>(n_max: usize) -> Array2<T> {
    annihilation::<T>(n_max).reversed_axes()
}

/// Spin-1 operators in the (|+1⟩, |0⟩, |-1⟩) basis.
///
/// J_z = diag(1, 0, -1); the ladder elements are √2; J_x = (J_+ + J_-)/2 and
/// J_y = (J_+ - J_-)/(2i), the latter purely imaginary.
pub struct Spin1<T> {
    pub jx: Array2<T>,
    pub jy: Array2<Complex<T>>,
    pub jz: Array2<T>,
    pub jplus: Array2<T>,
    pub jminus: Array2<T>,
}

impl<T: Real> Spin1<T> {
    pub fn new() -> Self {
        let rt2 = T::of(2.0).sqrt();
        let mut jplus = Array2::zeros((3, 3));
        jplus[(0, 1)] = rt2;
        jplus[(1, 2)] = rt2;
        let jminus = jplus.t().to_owned();
        let half = T::of(0.5);
        let jx = (&jplus + &jminus) * half;
        // J_y = (J_+ - J_-) / (2i) = -i/2 (J_+ - J_-)
        let jy = (&jplus - &jminus).mapv(|v| Complex::new(T::zero(), -half * v));
        let jz = Array2::from_diag(&ndarray::arr1(&[T::one(), T::zero(), -T::one()]));
        Self {
            jx,
            jy,
            jz,
            jplus,
            jminus,
        }
    }

    /// J_z², the diagonal projector weight diag(1, 0, 1).
    pub fn jz_squared(&self) -> Array2<T> {
        self.jz.dot(&self.jz)
    }
}

impl<T: Real> Default for Spin1<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Matrix exponential by scaling-and-squaring with a Taylor kernel.
///
/// Adequate for the well-scaled displacement generators used here; the
/// scaled norm is kept at 1/2 so the series converges in a few terms.
pub(crate) fn expm<T: Real>(a: &Array2<T>) -> Array2<T> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = a
        .rows()
        .into_iter()
        .map(|r| r.iter().fold(T::zero(), |acc, v| acc + v.abs()))
        .fold(T::zero(), T::max);
    let mut squarings = 0u32;
    let mut scale = T::one();
    if norm > T::of(0.5) {
        squarings = (norm / T::of(0.5)).log2().ceil().to_f64().unwrap() as u32;
        scale = T::of(2.0).powi(squarings as i32).recip();
    }
    let b = a * scale;
    let mut term = Array2::<T>::eye(n);
    let mut sum = Array2::<T>::eye(n);
    for k in 1..=40 {
        term = term.dot(&b) / T::of_usize(k);
        sum += &term;
        let tnorm = term.iter().fold(T::zero(), |acc, v| acc + v.abs());
        if tnorm < T::epsilon() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

/// Displacement operator exp[λ(a† − a)] on the truncated Fock space.
///
/// Unitary on the retained subspace up to truncation leakage at the top
/// levels; rows/columns well below N are accurate.
pub fn displacement<T: Real>(lambda: T, n_max: usize) -> Array2<T> {
    let gen = (creation::<T>(n_max) - annihilation::<T>(n_max)) * lambda;
    expm(&gen)
}

/// Polaron transform U = exp[(g/ω) J_z (a† − a)]: block-diagonal in spin,
/// sector j carrying the displacement exp[j(g/ω)(a† − a)].
pub fn polaron_transform<T: Real>(params: &SystemParams<T>, n_max: usize) -> Array2<T> {
    let dim = n_max + 1;
    let lambda = params.lambda();
    let mut u = Array2::zeros((3 * dim, 3 * dim));
    u.slice_mut(s![0..dim, 0..dim])
        .assign(&displacement(lambda, n_max));
    u.slice_mut(s![dim..2 * dim, dim..2 * dim])
        .assign(&Array2::eye(dim));
    u.slice_mut(s![2 * dim..3 * dim, 2 * dim..3 * dim])
        .assign(&displacement(-lambda, n_max));
    u
}

/// Coherent state |α⟩ with real amplitude on the truncated Fock space,
/// renormalized after truncation.
///
/// Errors if α² > N/4, where truncation error would dominate.
pub fn coherent_state<T: Real>(alpha: T, n_max: usize) -> Result<Array1<T>> {
    let alpha_sq = alpha * alpha;
    let limit = T::of_usize(n_max) / T::of(4.0);
    if alpha_sq > limit {
        return Err(Error::TruncationDominated {
            alpha_sq: alpha_sq.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut c = Array1::zeros(n_max + 1);
    let mut amp = (-alpha_sq / T::of(2.0)).exp();
    c[0] = amp;
    for n in 1..=n_max {
        amp *= alpha / T::of_usize(n).sqrt();
        c[n] = amp;
    }
    let norm = c.iter().map(|v| *v * *v).sum::<T>().sqrt();
    Ok(c / norm)
}

/// Tensor-product embedding onto the full space in the declared
/// spin-major ordering: `embed(A_spin, B_fock) = A ⊗ B`.
pub fn embed<T: Real>(spin_op: &Array2<T>, fock_op: &Array2<T>) -> Result<Array2<T>> {
    if spin_op.nrows() != 3 || spin_op.ncols() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "spin operator must be 3x3, got {}x{}",
            spin_op.nrows(),
            spin_op.ncols()
        )));
    }
    if fock_op.nrows() != fock_op.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Fock operator must be square, got {}x{}",
            fock_op.nrows(),
            fock_op.ncols()
        )));
    }
    Ok(kron(spin_op, fock_op))
}

/// Complex amplitude vector over the spin-1 ⊗ truncated-Fock product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    amps: Array1<Complex<T>>,
    n_max: usize,
}

impl<T: Real> QuantumState<T> {
    /// Wraps an amplitude vector; its length must be 3(N+1).
    pub fn from_amplitudes(amps: Array1<Complex<T>>, n_max: usize) -> Result<Self> {
        if amps.len() != 3 * (n_max + 1) {
            return Err(Error::DimensionMismatch(format!(
                "state length {} does not match 3(N+1) = {}",
                amps.len(),
                3 * (n_max + 1)
            )));
        }
        Ok(Self { amps, n_max })
    }

    pub fn from_real(amps: Array1<T>, n_max: usize) -> Result<Self> {
        Self::from_amplitudes(amps.mapv(|v| Complex::new(v, T::zero())), n_max)
    }

    /// Product state |j_z⟩ ⊗ (single-sector Fock vector).
    pub fn from_spin_fock(jz: i8, fock: &Array1<T>, n_max: usize) -> Result<Self> {
        if fock.len() != n_max + 1 {
            return Err(Error::DimensionMismatch(format!(
                "Fock vector length {} does not match N+1 = {}",
                fock.len(),
                n_max + 1
            )));
        }
        let dim = n_max + 1;
        let mut amps = Array1::zeros(3 * dim);
        let offset = spin_sector(jz) * dim;
        for (i, v) in fock.iter().enumerate() {
            amps[offset + i] = Complex::new(*v, T::zero());
        }
        Self::from_amplitudes(amps, n_max)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &Array1<Complex<T>> {
        &self.amps
    }

    pub fn amplitude(&self, jz: i8, n: usize) -> Complex<T> {
        self.amps[basis_index(jz, n, self.n_max)]
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Explicitly normalized copy; errors on a numerically zero state.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= T::epsilon() {
            return Err(Error::InvalidArgument(
                "cannot normalize a zero state".into(),
            ));
        }
        Ok(Self {
            amps: self.amps.mapv(|z| z / norm),
            n_max: self.n_max,
        })
    }

    /// ⟨self|other⟩ with the conjugate on `self`.
    pub fn overlap(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * *b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    /// Spin-sector populations (P_{+1}, P_0, P_{-1}): the diagonal of the
    /// photon-traced spin density matrix.
    pub fn spin_populations(&self) -> [T; 3] {
        let dim = self.n_max + 1;
        let mut pops = [T::zero(); 3];
        for (sector, p) in pops.iter_mut().enumerate() {
            *p = self
                .amps
                .slice(s![sector * dim..(sector + 1) * dim])
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
        }
        pops
    }

    /// Photon-number expectation ⟨a†a⟩.
    pub fn mean_photon_number(&self) -> T {
        let dim = self.n_max + 1;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, z)| T::of_usize(i % dim) * z.norm_sqr())
            .sum()
    }
}
