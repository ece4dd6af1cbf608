//! Generalized rotating-wave approximation.
//!
//! First-order treatment in the polaron frame: the photon-decoupled part
//! `ω a†a - (g²/ω) Jz² + Δβ Jx` is diagonalized exactly by a dressed spin
//! basis S, and the single-photon part is kept with its energy-conserving
//! terms only. The result has the RWA's block structure with renormalized,
//! photon-dependent couplings:
//!
//! * dressed spin energies ε± = (Δβ/2√2)(-χ₀ ± √(χ₀²+8)), ε₀ = -g²/ω, with
//!   χ₀ = √2g²/(ωΔβ) and β = e^{-(g/ω)²/2};
//! * diagonal shifts ξ_{±,m} = ε_± + 2√2 μ_± Δ [G0(m) - β] / λ_±²;
//! * couplings κ_n = Δ ⟨n|sinh[(g/ω)(a†-a)]|n-1⟩
//!   = Δ (g/ω) e^{-x/2} L_{n-1}¹(x) / √n.
//!
//! Blocks on the dressed basis (|-1, n+1⟩, |0, n⟩, |+1, n-1⟩) then follow
//! exactly the ordinary RWA pattern, plus the uncoupled dressed ground state
//! |-1, 0⟩ at energy ε₋ and a 2×2 zero-excitation sector.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::eigen::{self, EigenDecomposition};
use crate::error::{Error, Result};
use crate::hilbert::{self, QuantumState};
use crate::models::{self, BlockLabel, HamiltonianBlock, SpectrumResult, SpinLabel};
use crate::scalar::Real;
use crate::specfun;
use crate::{Method, SystemParams};

/// The dressed spin basis diagonalizing Δβ Jx - (g²/ω) Jz².
///
/// `s` has rows in the bare (|+1⟩, |0⟩, |-1⟩) order and columns in the
/// dressed (-, 0, +) order, so `sᵀ (Δβ Jx - (g²/ω) Jz²) s = diag(ε₋, ε₀, ε₊)`.
#[derive(Debug, Clone)]
pub struct DressedSpinBasis<T> {
    pub beta: T,
    pub chi0: T,
    pub mu_plus: T,
    pub mu_minus: T,
    pub lambda_plus: T,
    pub lambda_minus: T,
    pub eps_plus: T,
    pub eps_minus: T,
    pub eps_zero: T,
    pub s: Array2<T>,
}

/// Builds the dressed spin basis. Refuses Δ = 0, where χ₀ diverges; the
/// Δ = 0 model is an exactly solvable displaced oscillator and needs no
/// approximation.
pub fn dressed_spin<T: Real>(params: &SystemParams<T>) -> Result<DressedSpinBasis<T>> {
    if params.delta == T::zero() {
        return Err(Error::ZeroDetuning);
    }
    let two = T::of(2.0);
    let rt2 = two.sqrt();
    let beta = specfun::beta(params);
    let chi0 = rt2 * params.g * params.g / (params.omega * params.delta * beta);
    let root = (chi0 * chi0 + T::of(8.0)).sqrt();
    // μ₊ from the quadratic, μ₋ from the exact product identity μ₊μ₋ = -2;
    // this form has no cancellation for large χ₀.
    let mu_plus = (chi0 + root) / two;
    let mu_minus = -two / mu_plus;
    let lambda_plus = (two + mu_plus * mu_plus).sqrt();
    let lambda_minus = (two + mu_minus * mu_minus).sqrt();
    let pref = params.delta * beta / (two * rt2);
    let eps_plus = pref * T::of(8.0) / (root + chi0);
    let eps_minus = -pref * (chi0 + root);
    let eps_zero = -params.g * params.g / params.omega;
    let inv_rt2 = rt2.recip();
    let s = ndarray::arr2(&[
        [lambda_minus.recip(), inv_rt2, lambda_plus.recip()],
        [mu_minus / lambda_minus, T::zero(), mu_plus / lambda_plus],
        [lambda_minus.recip(), -inv_rt2, lambda_plus.recip()],
    ]);
    Ok(DressedSpinBasis {
        beta,
        chi0,
        mu_plus,
        mu_minus,
        lambda_plus,
        lambda_minus,
        eps_plus,
        eps_minus,
        eps_zero,
        s,
    })
}

impl<T: Real> DressedSpinBasis<T> {
    /// ξ_{+,m} = ε₊ + 2√2 μ₊ Δ [G0(m) - β] / λ₊².
    pub fn xi_plus(&self, m: usize, params: &SystemParams<T>) -> T {
        self.eps_plus
            + T::of(2.0) * T::of(2.0).sqrt() * self.mu_plus * params.delta
                * (specfun::g0(m, params) - self.beta)
                / (self.lambda_plus * self.lambda_plus)
    }

    /// ξ_{-,m} = ε₋ + 2√2 μ₋ Δ [G0(m) - β] / λ₋².
    pub fn xi_minus(&self, m: usize, params: &SystemParams<T>) -> T {
        self.eps_minus
            + T::of(2.0) * T::of(2.0).sqrt() * self.mu_minus * params.delta
                * (specfun::g0(m, params) - self.beta)
                / (self.lambda_minus * self.lambda_minus)
    }
}

/// The renormalized one-photon coupling
/// κ_n = Δ ⟨n|sinh[(g/ω)(a†-a)]|n-1⟩ = Δ (g/ω) e^{-x/2} L_{n-1}¹(x)/√n,
/// the whole matrix element taken once, with no extra √n factor.
pub fn grwa_coupling<T: Real>(n: usize, params: &SystemParams<T>) -> Result<T> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "the one-photon coupling needs a photon to exchange (n >= 1)".into(),
        ));
    }
    Ok(params.delta * specfun::f1_element(n - 1, params))
}

/// One GRWA block with the scalar pieces that built it.
#[derive(Debug, Clone)]
pub struct GrwaBlock<T> {
    /// Photon label of the dressed-0 row.
    pub n: usize,
    pub block: HamiltonianBlock<T>,
    /// ξ_{-,n+1}, the dressed-minus diagonal shift.
    pub xi_minus: T,
    /// ξ_{+,n-1}; absent in the two-state zero-excitation sector.
    pub xi_plus: Option<T>,
    /// κ_{n+1}, the |0,n⟩ ↔ |-1,n+1⟩ coupling magnitude.
    pub kappa_minus: T,
    /// κ_n, the |0,n⟩ ↔ |+1,n-1⟩ coupling magnitude; absent for n = 0.
    pub kappa_plus: Option<T>,
}

/// 3×3 GRWA block for n ≥ 1 on the dressed basis
/// (|-1, n+1⟩, |0, n⟩, |+1, n-1⟩):
///
/// ```text
/// | ω(n+1) + ξ_{-,n+1}   -(μ₋/λ₋) κ_{n+1}    0                 |
/// | -(μ₋/λ₋) κ_{n+1}      ωn + ε₀            (μ₊/λ₊) κ_n       |
/// | 0                     (μ₊/λ₊) κ_n        ω(n-1) + ξ_{+,n-1} |
/// ```
pub fn grwa_block<T: Real>(n: usize, params: &SystemParams<T>) -> Result<GrwaBlock<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "3x3 GRWA blocks start at n = 1; use grwa_block0 for the zero-excitation sector".into(),
        ));
    }
    let d = dressed_spin(params)?;
    let omega = params.omega;
    let xi_minus = d.xi_minus(n + 1, params);
    let xi_plus = d.xi_plus(n - 1, params);
    let kappa_minus = grwa_coupling(n + 1, params)?;
    let kappa_plus = grwa_coupling(n, params)?;
    let c_minus = -(d.mu_minus / d.lambda_minus) * kappa_minus;
    let c_plus = (d.mu_plus / d.lambda_plus) * kappa_plus;
    let mut m = Array2::zeros((3, 3));
    m[(0, 0)] = omega * T::of_usize(n + 1) + xi_minus;
    m[(1, 1)] = omega * T::of_usize(n) + d.eps_zero;
    m[(2, 2)] = omega * T::of_usize(n - 1) + xi_plus;
    m[(0, 1)] = c_minus;
    m[(1, 0)] = c_minus;
    m[(1, 2)] = c_plus;
    m[(2, 1)] = c_plus;
    Ok(GrwaBlock {
        n,
        block: HamiltonianBlock {
            labels: vec![
                BlockLabel { spin: SpinLabel::Dressed(-1), n: n + 1 },
                BlockLabel { spin: SpinLabel::Dressed(0), n },
                BlockLabel { spin: SpinLabel::Dressed(1), n: n - 1 },
            ],
            matrix: m,
        },
        xi_minus,
        xi_plus: Some(xi_plus),
        kappa_minus,
        kappa_plus: Some(kappa_plus),
    })
}

/// The 2×2 zero-excitation block on (|-1, 1⟩, |0, 0⟩), diagonal
/// (ω + ξ_{-,1}, ε₀), coupling -(μ₋/λ₋) κ₁.
pub fn grwa_block0<T: Real>(params: &SystemParams<T>) -> Result<GrwaBlock<T>> {
    let d = dressed_spin(params)?;
    let xi_minus = d.xi_minus(1, params);
    let kappa_minus = grwa_coupling(1, params)?;
    let c = -(d.mu_minus / d.lambda_minus) * kappa_minus;
    let mut m = Array2::zeros((2, 2));
    m[(0, 0)] = params.omega + xi_minus;
    m[(1, 1)] = d.eps_zero;
    m[(0, 1)] = c;
    m[(1, 0)] = c;
    Ok(GrwaBlock {
        n: 0,
        block: HamiltonianBlock {
            labels: vec![
                BlockLabel { spin: SpinLabel::Dressed(-1), n: 1 },
                BlockLabel { spin: SpinLabel::Dressed(0), n: 0 },
            ],
            matrix: m,
        },
        xi_minus,
        xi_plus: None,
        kappa_minus,
        kappa_plus: None,
    })
}

/// Closed form of the zero-excitation pair, ordered (lower, upper):
/// (ε₀ + ω + ξ_{-,1})/2 ∓ ½√((ε₀ - ω - ξ_{-,1})² + 4(μ₋κ₁/λ₋)²).
pub fn block0_closed_form<T: Real>(params: &SystemParams<T>) -> Result<(T, T)> {
    let d = dressed_spin(params)?;
    let xi = d.xi_minus(1, params);
    let kappa = grwa_coupling(1, params)?;
    let c = d.mu_minus * kappa / d.lambda_minus;
    let mean = (d.eps_zero + params.omega + xi) / T::of(2.0);
    let gap = d.eps_zero - params.omega - xi;
    let root = (gap * gap + T::of(4.0) * c * c).sqrt() / T::of(2.0);
    Ok((mean - root, mean + root))
}

/// GRWA ground-state energy: the uncoupled dressed |-1, 0⟩ sits at
/// ξ_{-,0} = ε₋ exactly, since G0(0) = β.
pub fn grwa_ground<T: Real>(params: &SystemParams<T>) -> Result<T> {
    Ok(dressed_spin(params)?.eps_minus)
}

/// Lowest `levels` GRWA energies: the ground singleton, the 2×2 sector, and
/// the 3×3 blocks for n = 1..N (1 + 2 + 3N = 3(N+1) values in total).
pub fn grwa_spectrum<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
    levels: usize,
) -> Result<SpectrumResult<T>> {
    models::check_levels(levels, n_max)?;
    let mut energies = Vec::with_capacity(3 * (n_max + 1));
    energies.push(grwa_ground(params)?);
    energies.extend(grwa_block0(params)?.block.eigenvalues()?);
    for n in 1..=n_max {
        energies.extend(grwa_block(n, params)?.block.eigenvalues()?);
    }
    energies.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
    energies.truncate(levels);
    Ok(SpectrumResult {
        method: Method::Grwa,
        params: *params,
        n_max,
        energies,
    })
}

/// A GRWA eigenvector as sparse (dressed sector, Fock level, amplitude)
/// entries; dressed sectors are indexed (0, 1, 2) = (-, 0, +) to match the
/// columns of S.
type DressedEntries<T> = Vec<(usize, usize, T)>;

fn block_eigenpairs<T: Real>(
    block: &HamiltonianBlock<T>,
) -> Result<Vec<(T, DressedEntries<T>)>> {
    let decomp = eigen::eigh(&block.matrix)?;
    let mut out = Vec::with_capacity(block.dim());
    for k in 0..block.dim() {
        let entries = block
            .labels
            .iter()
            .zip(decomp.vector(k).iter())
            .map(|(label, &v)| {
                let sector = match label.spin {
                    SpinLabel::Dressed(-1) => 0,
                    SpinLabel::Dressed(0) => 1,
                    SpinLabel::Dressed(1) => 2,
                    _ => unreachable!("GRWA blocks carry dressed labels"),
                };
                (sector, label.n, v)
            })
            .collect();
        out.push((decomp.values()[k], entries));
    }
    Ok(out)
}

/// All GRWA eigenpairs as dressed-frame sparse vectors, including the
/// truncation-edge remnants so that the set spans the whole truncated space
/// (1 + 2 + 3(N-1) + 2 + 1 = 3(N+1) states).
fn dressed_eigenpairs<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
    include_edge: bool,
) -> Result<Vec<(T, DressedEntries<T>)>> {
    let d = dressed_spin(params)?;
    let mut pairs: Vec<(T, DressedEntries<T>)> = Vec::with_capacity(3 * (n_max + 1));
    pairs.push((d.eps_minus, vec![(0, 0, T::one())]));
    pairs.extend(block_eigenpairs(&grwa_block0(params)?.block)?);
    for n in 1..n_max {
        pairs.extend(block_eigenpairs(&grwa_block(n, params)?.block)?);
    }
    if include_edge {
        // n = N block loses its |-1, N+1⟩ partner to the truncation ...
        let full = grwa_block(n_max, params)?.block;
        let m2 = full.matrix.slice(ndarray::s![1..3, 1..3]).to_owned();
        let edge = HamiltonianBlock {
            labels: full.labels[1..3].to_vec(),
            matrix: m2,
        };
        pairs.extend(block_eigenpairs(&edge)?);
        // ... and |+1, N⟩ is left uncoupled.
        pairs.push((
            params.omega * T::of_usize(n_max) + d.xi_plus(n_max, params),
            vec![(2, n_max, T::one())],
        ));
    }
    Ok(pairs)
}

fn map_to_original_frame<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
    pairs: &[(T, DressedEntries<T>)],
) -> Result<(Vec<T>, Array2<T>)> {
    let dim = n_max + 1;
    let full_dim = 3 * dim;
    let d = dressed_spin(params)?;
    let s_full = hilbert::embed(&d.s, &Array2::eye(dim))?;
    let u_dag = hilbert::polaron_transform(params, n_max).reversed_axes();

    let mut dressed = Array2::zeros((full_dim, pairs.len()));
    let mut values = Vec::with_capacity(pairs.len());
    for (col, (energy, entries)) in pairs.iter().enumerate() {
        for &(sector, fock, v) in entries {
            dressed[(sector * dim + fock, col)] = v;
        }
        values.push(*energy);
    }
    let mut original = u_dag.dot(&s_full.dot(&dressed));
    // re-normalize away the polaron truncation leakage column by column
    for mut col in original.columns_mut() {
        let norm = col.iter().map(|v| *v * *v).sum::<T>().sqrt();
        col.mapv_inplace(|v| v / norm);
    }
    Ok((values, original))
}

/// The lowest `levels` GRWA eigenstates mapped back to the original frame:
/// each block eigenvector is rotated by S in spin and by the inverse polaron
/// transform in the oscillator, then normalized.
pub fn grwa_eigenstates<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
    levels: usize,
) -> Result<Vec<(T, QuantumState<T>)>> {
    models::check_levels(levels, n_max)?;
    let mut pairs = dressed_eigenpairs(params, n_max, false)?;
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));
    pairs.truncate(levels);
    let (values, states) = map_to_original_frame(params, n_max, &pairs)?;
    values
        .into_iter()
        .zip(states.columns())
        .map(|(e, col)| {
            let amps = Array1::from_iter(col.iter().map(|&v| Complex::new(v, T::zero())));
            Ok((e, QuantumState::from_amplitudes(amps, n_max)?))
        })
        .collect()
}

/// The complete GRWA eigensystem on the truncated space (original frame,
/// sorted by energy), for spectral time evolution.
pub(crate) fn grwa_eigensystem<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
) -> Result<EigenDecomposition<T>> {
    let mut pairs = dressed_eigenpairs(params, n_max, true)?;
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));
    let (values, states) = map_to_original_frame(params, n_max, &pairs)?;
    Ok(EigenDecomposition::from_parts(values, states))
}
