//! Zeroth-order (adiabatic) approximation in the polaron frame.
//!
//! After the displacement transform, dropping every term that changes the
//! photon number leaves one 3×3 spin block per Fock level n:
//!
//! ```text
//! | ωn - g²/ω      (Δ/√2) G0(n)   0            |
//! | (Δ/√2) G0(n)    ωn            (Δ/√2) G0(n) |
//! | 0              (Δ/√2) G0(n)   ωn - g²/ω    |
//! ```
//!
//! with closed-form eigenvalues ε_{±,n} = (ω/2)(2n - g²/ω² ± √((g/ω)⁴ +
//! 4(ΔG0(n)/ω)²)) and ε_{0,n} = ωn - g²/ω. The eigenvectors carry spin
//! weights (1, μ, 1) and (1, 0, -1); μ is singular at Laguerre zeros of
//! G0(n), where the degenerate-limit vectors take over.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::eigen::EigenDecomposition;
use crate::error::{Error, Result};
use crate::hilbert::{self, QuantumState};
use crate::models::{self, SpectrumResult};
use crate::scalar::Real;
use crate::specfun;
use crate::{Method, SystemParams};

/// Below this |G0(n)| the weight parameter χ_n is treated as singular and
/// the ± spin weights fall back to their degenerate-limit values.
pub const G0_SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Zero,
    Minus,
}

/// The three zeroth-order energies at fixed photon number.
#[derive(Debug, Clone, Copy)]
pub struct ZerothEnergies<T> {
    pub plus: T,
    pub zero: T,
    pub minus: T,
}

/// One zeroth-order level: closed-form energy plus its (unnormalized) spin
/// weights on (|+1⟩, |0⟩, |-1⟩).
#[derive(Debug, Clone, Copy)]
pub struct ZerothLevel<T> {
    pub n: usize,
    pub branch: Branch,
    pub energy: T,
    pub spin_weights: [T; 3],
}

/// χ_n = √2 g² / (ω Δ G0(n)), or `None` where it is singular
/// (Δ = 0 or |G0(n)| below [`G0_SINGULAR_TOL`]).
pub fn chi<T: Real>(n: usize, params: &SystemParams<T>) -> Option<T> {
    let g0 = specfun::g0(n, params);
    if params.delta == T::zero() || g0.abs() < T::of(G0_SINGULAR_TOL) {
        return None;
    }
    Some(T::of(2.0).sqrt() * params.g * params.g / (params.omega * params.delta * g0))
}

/// The photon-diagonal 3×3 block at Fock level n, in the bare spin basis.
pub fn zeroth_matrix<T: Real>(n: usize, params: &SystemParams<T>) -> Array2<T> {
    let base = params.omega * T::of_usize(n);
    let c = params.g * params.g / params.omega;
    let b = params.delta * specfun::g0(n, params) / T::of(2.0).sqrt();
    ndarray::arr2(&[
        [base - c, b, T::zero()],
        [b, base, b],
        [T::zero(), b, base - c],
    ])
}

/// Closed-form zeroth-order energies (ε_{+,n}, ε_{0,n}, ε_{-,n}).
///
/// Evaluated in a form regular even where G0(n) = 0: the + branch uses
/// (√(c²+8b²) - c)/2 = 4b²/(√(c²+8b²) + c) to avoid cancellation.
pub fn zeroth_energies<T: Real>(n: usize, params: &SystemParams<T>) -> ZerothEnergies<T> {
    let base = params.omega * T::of_usize(n);
    let c = params.g * params.g / params.omega;
    let b = params.delta * specfun::g0(n, params) / T::of(2.0).sqrt();
    let r = (c * c + T::of(8.0) * b * b).sqrt();
    let plus = if r + c > T::zero() {
        base + T::of(4.0) * b * b / (r + c)
    } else {
        base
    };
    ZerothEnergies {
        plus,
        zero: base - c,
        minus: base - (c + r) / T::of(2.0),
    }
}

/// Energies and spin weights of the three levels at photon number n,
/// ordered (plus, zero, minus).
///
/// The ± branches are labelled by energy: `plus` is always the upper root.
/// Where χ_n is regular the weights are (1, μ, 1) with μ₊μ₋ = -2 exact;
/// at singular points they are the degenerate-limit unit vectors.
pub fn zeroth_levels<T: Real>(n: usize, params: &SystemParams<T>) -> [ZerothLevel<T>; 3] {
    let energies = zeroth_energies(n, params);
    let base = params.omega * T::of_usize(n);
    let c = params.g * params.g / params.omega;
    let b = params.delta * specfun::g0(n, params) / T::of(2.0).sqrt();

    let (w_plus, w_minus) = if chi(n, params).is_some() {
        // μ from the eigen-relation μ = (ε - (ωn - c))/b, upper branch first:
        // numerator (c + r)/2 is a sum of nonnegative terms, so this form is
        // stable for either sign of b; the lower branch follows from the
        // exact product identity μ₊ μ₋ = -2.
        let mu_plus = (energies.plus - (base - c)) / b;
        let mu_minus = -T::of(2.0) / mu_plus;
        ([T::one(), mu_plus, T::one()], [T::one(), mu_minus, T::one()])
    } else {
        // Degenerate limit: the + state is photon-band-centered, the -
        // state is the symmetric partner orthogonal to the 0 branch.
        let inv_rt2 = T::of(0.5).sqrt();
        (
            [T::zero(), T::one(), T::zero()],
            [inv_rt2, T::zero(), inv_rt2],
        )
    };

    [
        ZerothLevel {
            n,
            branch: Branch::Plus,
            energy: energies.plus,
            spin_weights: w_plus,
        },
        ZerothLevel {
            n,
            branch: Branch::Zero,
            energy: energies.zero,
            spin_weights: [T::one(), T::zero(), -T::one()],
        },
        ZerothLevel {
            n,
            branch: Branch::Minus,
            energy: energies.minus,
            spin_weights: w_minus,
        },
    ]
}

fn state_from_level<T: Real>(
    level: &ZerothLevel<T>,
    disp_minus: &Array2<T>,
    disp_plus: &Array2<T>,
    n_max: usize,
) -> Result<QuantumState<T>> {
    let dim = n_max + 1;
    let mut amps = Array1::from_elem(3 * dim, Complex::new(T::zero(), T::zero()));
    let w = level.spin_weights;
    // Original frame: sector j carries the displacement exp[-j(g/ω)(a†-a)]
    // applied to |n⟩ (the inverse polaron transform).
    for (i, &v) in disp_minus.column(level.n).iter().enumerate() {
        amps[i] = Complex::new(w[0] * v, T::zero());
    }
    amps[dim + level.n] = Complex::new(w[1], T::zero());
    for (i, &v) in disp_plus.column(level.n).iter().enumerate() {
        amps[2 * dim + i] = Complex::new(w[2] * v, T::zero());
    }
    QuantumState::from_amplitudes(amps, n_max)?.normalized()
}

/// Normalized zeroth-order eigenstates at photon number n, mapped to the
/// original (laboratory) frame, ordered (plus, zero, minus).
pub fn zeroth_states<T: Real>(
    n: usize,
    params: &SystemParams<T>,
    n_max: usize,
) -> Result<[QuantumState<T>; 3]> {
    if 2 * n > n_max {
        return Err(Error::InvalidArgument(format!(
            "photon index {n} too close to the truncation edge N = {n_max} (need n <= N/2)"
        )));
    }
    let lambda = params.lambda();
    let disp_minus = hilbert::displacement(-lambda, n_max);
    let disp_plus = hilbert::displacement(lambda, n_max);
    let levels = zeroth_levels(n, params);
    Ok([
        state_from_level(&levels[0], &disp_minus, &disp_plus, n_max)?,
        state_from_level(&levels[1], &disp_minus, &disp_plus, n_max)?,
        state_from_level(&levels[2], &disp_minus, &disp_plus, n_max)?,
    ])
}

/// Lowest `levels` zeroth-order energies over n = 0..N, sorted.
pub fn zeroth_spectrum<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
    levels: usize,
) -> Result<SpectrumResult<T>> {
    models::check_levels(levels, n_max)?;
    let mut energies = Vec::with_capacity(3 * (n_max + 1));
    for n in 0..=n_max {
        let e = zeroth_energies(n, params);
        energies.push(e.plus);
        energies.push(e.zero);
        energies.push(e.minus);
    }
    energies.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
    energies.truncate(levels);
    Ok(SpectrumResult {
        method: Method::Zeroth,
        params: *params,
        n_max,
        energies,
    })
}

/// The complete zeroth-order eigensystem on the truncated space, states in
/// the original frame, sorted by energy. Used for spectral time evolution.
pub(crate) fn zeroth_eigensystem<T: Real>(
    params: &SystemParams<T>,
    n_max: usize,
) -> Result<EigenDecomposition<T>> {
    let dim = 3 * (n_max + 1);
    let lambda = params.lambda();
    let disp_minus = hilbert::displacement(-lambda, n_max);
    let disp_plus = hilbert::displacement(lambda, n_max);

    let mut entries: Vec<(T, usize, usize)> = Vec::with_capacity(dim);
    let mut all_levels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let levels = zeroth_levels(n, params);
        for (b, level) in levels.iter().enumerate() {
            entries.push((level.energy, n, b));
        }
        all_levels.push(levels);
    }
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));

    let mut vectors = Array2::zeros((dim, dim));
    let mut values = Vec::with_capacity(dim);
    for (col, &(energy, n, b)) in entries.iter().enumerate() {
        let level = &all_levels[n][b];
        let state = state_from_level(level, &disp_minus, &disp_plus, n_max)?;
        for (row, z) in state.amplitudes().iter().enumerate() {
            vectors[(row, col)] = z.re;
        }
        values.push(energy);
    }
    Ok(EigenDecomposition::from_parts(values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen;
    use approx::assert_abs_diff_eq;

    fn unit(delta: f64, g: f64) -> SystemParams<f64> {
        SystemParams::with_unit_omega(delta, g).unwrap()
    }

    #[test]
    fn decoupled_limit() {
        let p = unit(0.7, 0.0);
        for n in [0, 3] {
            let e = zeroth_energies(n, &p);
            assert_abs_diff_eq!(e.plus, n as f64 + 0.7, epsilon = 1e-14);
            assert_abs_diff_eq!(e.zero, n as f64, epsilon = 1e-14);
            assert_abs_diff_eq!(e.minus, n as f64 - 0.7, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_branch_at_unit_coupling() {
        let e = zeroth_energies(0, &unit(0.3, 1.0));
        assert_abs_diff_eq!(e.zero, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_block_eigenvalues() {
        // 3×3 numerical oracle, including a G0 zero crossing (n = 1, g = ω).
        for &delta in &[0.25, 0.5, 1.0] {
            for &g in &[0.1, 0.5, 1.0, 1.5] {
                let p = unit(delta, g);
                for n in 0..=30 {
                    let e = zeroth_energies(n, &p);
                    let vals = eigen::eigh_values(&zeroth_matrix(n, &p)).unwrap();
                    let mut expect = [e.minus, e.zero, e.plus];
                    expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    for (v, x) in vals.iter().zip(expect.iter()) {
                        assert_abs_diff_eq!(v, x, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn weight_product_identity() {
        // μ₊ μ₋ = -2 wherever χ_n is regular.
        for &g in &[0.2, 0.7, 1.3] {
            let p = unit(0.6, g);
            for n in 0..20 {
                if chi(n, &p).is_none() {
                    continue;
                }
                let levels = zeroth_levels(n, &p);
                let mu_p = levels[0].spin_weights[1];
                let mu_m = levels[2].spin_weights[1];
                assert_abs_diff_eq!(mu_p * mu_m, -2.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn weights_solve_the_block() {
        // (1, μ, 1) must be an actual eigenvector of the 3×3 block.
        for &(delta, g) in &[(0.5, 0.4), (1.0, 0.9), (0.3, 1.4)] {
            let p = unit(delta, g);
            for n in 0..12 {
                let m = zeroth_matrix(n, &p);
                for level in zeroth_levels(n, &p) {
                    let w = ndarray::arr1(&level.spin_weights);
                    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let mw = m.dot(&w);
                    for i in 0..3 {
                        assert_abs_diff_eq!(
                            mw[i] / norm,
                            level.energy * w[i] / norm,
                            epsilon = 1e-10
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singular_chi_fallback() {
        // g = ω makes G0(1) = 0 exactly.
        let p = unit(0.8, 1.0);
        assert!(chi(1, &p).is_none());
        let m = zeroth_matrix(1, &p);
        for level in zeroth_levels(1, &p) {
            let w = ndarray::arr1(&level.spin_weights);
            let mw = m.dot(&w);
            for i in 0..3 {
                assert_abs_diff_eq!(mw[i], level.energy * w[i], epsilon = 1e-9);
            }
        }
        // the returned states stay orthonormal through the singularity
        let states = zeroth_states(1, &p, 30).unwrap();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(a.overlap(b).norm(), expect, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn states_reduce_to_spin_eigenvectors_at_zero_coupling() {
        let p = unit(0.9, 0.0);
        let n = 2;
        let states = zeroth_states(n, &p, 12).unwrap();
        // plus branch ↔ Jx = +1 eigenvector (1/2, √2/2, 1/2) ⊗ |n⟩
        let inv_rt2 = 0.5f64.sqrt();
        let expect_plus = [0.5, inv_rt2, 0.5];
        let expect_zero = [inv_rt2, 0.0, -inv_rt2];
        for (jz, idx) in [(1i8, 0usize), (0, 1), (-1, 2)] {
            let ap = states[0].amplitude(jz, n).re;
            assert_abs_diff_eq!(ap.abs(), expect_plus[idx], epsilon = 1e-12);
            let az = states[1].amplitude(jz, n).re;
            assert_abs_diff_eq!(az.abs(), expect_zero[idx].abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn plus_minus_states_orthogonal() {
        let p = unit(0.5, 0.6);
        let states = zeroth_states(3, &p, 30).unwrap();
        assert_abs_diff_eq!(states[0].overlap(&states[2]).norm(), 0.0, epsilon = 1e-10);
        // zero branch carries no spin-0 amplitude
        for n in 0..=30 {
            assert_eq!(states[1].amplitude(0, n).norm(), 0.0);
        }
    }

    #[test]
    fn state_energy_expectation_diagnostic() {
        // ⟨ψ|H|ψ⟩ vs the zeroth-order ε: the gap is the adiabatic error
        // budget, logged rather than asserted small.
        let p = unit(0.5, 0.5);
        let n_max = 40;
        let h = models::build_full_hamiltonian(&p, n_max);
        let states = zeroth_states(1, &p, n_max).unwrap();
        let levels = zeroth_levels(1, &p);
        for (state, level) in states.iter().zip(levels.iter()) {
            let v: Array1<f64> = state.amplitudes().mapv(|z| z.re);
            let exp = v.dot(&h.dot(&v));
            println!(
                "zeroth n=1 branch {:?}: <H> = {exp:.6}, eps = {:.6}",
                level.branch, level.energy
            );
            assert!((exp - level.energy).abs() < 0.5);
        }
    }

    #[test]
    fn edge_guard_on_photon_index() {
        let p = unit(0.5, 0.5);
        assert!(zeroth_states(20, &p, 30).is_err());
    }

    #[test]
    fn spectrum_matches_exact_at_zero_coupling() {
        let p = unit(1.0, 0.0);
        let z = zeroth_spectrum(&p, 20, 8).unwrap();
        let x = models::exact_spectrum(&p, 20, 8).unwrap();
        for (a, b) in z.energies.iter().zip(x.energies.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn ground_branch_is_minus_across_sweep() {
        let params_at = |g: f64| unit(0.5, g);
        for i in 0..=20 {
            let g = i as f64 * 0.05;
            let p = params_at(g);
            let spec = zeroth_spectrum(&p, 40, 1).unwrap();
            let e0 = zeroth_energies(0, &p);
            assert_abs_diff_eq!(spec.energies[0], e0.minus, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigensystem_is_orthonormal() {
        let p = unit(0.5, 0.8);
        let d = zeroth_eigensystem(&p, 24).unwrap();
        let v = d.vectors();
        let vtv = v.t().dot(v);
        // orthonormality degrades only at the truncation edge; probe the
        // low-energy half
        for i in 0..30 {
            for j in 0..30 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(vtv[(i, j)], expect, epsilon = 1e-8);
            }
        }
        for k in 1..d.len() {
            assert!(d.values()[k] >= d.values()[k - 1]);
        }
    }
}
