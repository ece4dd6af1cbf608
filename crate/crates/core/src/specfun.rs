//! Generalized Laguerre polynomials and the displaced-frame matrix elements
//! built from them.
//!
//! Everything here is dimensionless: the coupling enters only through the
//! ratio g/ω, and the polynomial argument is x = (g/ω)².

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::SystemParams;

/// Generalized Laguerre polynomial L_n^k(x).
///
/// Evaluated by the three-term recurrence in the degree,
/// `(m+1) L_{m+1}^k = (2m+k+1-x) L_m^k - (m+k) L_{m-1}^k`,
/// which stays accurate on x ≥ 0 where the explicit factorial series loses
/// everything to cancellation already for moderate n.
pub fn laguerre<T: Real>(n: usize, k: usize, x: T) -> Result<T> {
    if !x.is_finite() || x < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "laguerre argument must be finite and nonnegative, got {x}"
        )));
    }
    Ok(laguerre_unchecked(n, k, x))
}

pub(crate) fn laguerre_unchecked<T: Real>(n: usize, k: usize, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let kt = T::of_usize(k);
    let mut prev = T::one(); // L_0^k
    let mut cur = kt + T::one() - x; // L_1^k
    for m in 1..n {
        let mt = T::of_usize(m);
        let next = ((mt + mt + kt + T::one() - x) * cur - (mt + kt) * prev) / (mt + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Diagonal element of the even (cosh) part of the displacement operator:
/// G0(n) = ⟨n| cosh[(g/ω)(a† − a)] |n⟩ = e^{-x/2} L_n(x), x = (g/ω)².
///
/// G0(n) can vanish exactly at Laguerre zeros (e.g. n = 1 at g = ω); callers
/// must not divide by it unguarded.
pub fn g0<T: Real>(n: usize, params: &SystemParams<T>) -> T {
    let x = params.lag_x();
    (-x / T::of(2.0)).exp() * laguerre_unchecked(n, 0, x)
}

/// One-photon element of the odd (sinh) part of the displacement operator:
/// ⟨n+1| sinh[(g/ω)(a† − a)] |n⟩ = (g/ω) e^{-x/2} L_n^1(x) / √(n+1).
pub fn f1_element<T: Real>(n: usize, params: &SystemParams<T>) -> T {
    let x = params.lag_x();
    params.lambda() * (-x / T::of(2.0)).exp() * laguerre_unchecked(n, 1, x)
        / T::of_usize(n + 1).sqrt()
}

/// β = G0(0) = e^{-(g/ω)²/2}, the coupling renormalization of the dressed
/// spin Hamiltonian.
pub fn beta<T: Real>(params: &SystemParams<T>) -> T {
    (-params.lag_x() / T::of(2.0)).exp()
}
