//! Brute-force reference Dicke states, independent of any circuit.

use num_complex::Complex;

use crate::basis::{CompositionVector, DEFAULT_MAX_AMPLITUDES};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::QuditState;

/// Largest `n` accepted by [`multinomial`]; `20!` still fits in a `u64`.
pub const MAX_MULTINOMIAL_N: usize = 20;

/// `n! / (k_0! k_1! ... k_{d-1}!)`, the number of distinct permutations of
/// the multiset.
pub fn multinomial(k: &CompositionVector) -> Result<u64> {
    let n = k.n();
    if n > MAX_MULTINOMIAL_N {
        return Err(Error::Overflow(format!(
            "multinomial with n={n} exceeds n <= {MAX_MULTINOMIAL_N}"
        )));
    }
    let parts: Vec<u64> = k.parts().iter().map(|&x| x as u64).collect();
    Ok(num_integer::multinomial(&parts))
}

/// `|D^n(k)>` built by scanning every basis index and keeping those whose
/// digit multiset has multiplicities `k`.
pub fn reference_dicke_state<T: Real>(k: &CompositionVector) -> Result<QuditState<T>> {
    if k.n() == 0 {
        return Err(Error::InvalidComposition("parts sum to zero".into()));
    }
    let reg = k.register();
    reg.guarded_size(DEFAULT_MAX_AMPLITUDES)?;
    let count = multinomial(k)?;
    let amp = Complex::new(T::one() / T::of(count as f64).sqrt(), T::zero());

    let mut state = QuditState::zeros(reg.d, reg.n)?;
    let mut hist = vec![0usize; reg.d];
    for (idx, a) in state.amplitudes_mut().iter_mut().enumerate() {
        hist.iter_mut().for_each(|h| *h = 0);
        let mut x = idx;
        for _ in 0..reg.n {
            hist[x % reg.d] += 1;
            x /= reg.d;
        }
        if hist == k.parts() {
            *a = amp;
        }
    }
    Ok(state)
}

/// The right-hand side of the single-step recursion,
/// `sum_s sqrt(k_s / n) |D^{n-1}(k - ŝ)> ⊗ |s>`, with `k_s = 0` terms skipped.
pub fn recursion_rhs<T: Real>(k: &CompositionVector) -> Result<QuditState<T>> {
    let (d, n) = (k.d(), k.n());
    if n < 2 {
        return Err(Error::InvalidComposition(format!(
            "recursion needs n >= 2, got n={n}"
        )));
    }
    let mut out = QuditState::<T>::zeros(d, n)?;
    for s in 0..d {
        let Some(sub) = k.decrement(s) else { continue };
        let coef = T::of((k.parts()[s] as f64 / n as f64).sqrt());
        let sub_state = reference_dicke_state::<T>(&sub)?;
        let amps = out.amplitudes_mut();
        for (idx, a) in sub_state.amplitudes().iter().enumerate() {
            // |sub> ⊗ |s>: the new wire 0 holds s
            amps[idx * d + s] = amps[idx * d + s] + a * coef;
        }
    }
    Ok(out)
}

/// Checks `|D^n(k)> = sum_s sqrt(k_s/n) |D^{n-1}(k-ŝ)> ⊗ |s>` amplitude-wise
/// within `1e-12`.
pub fn recursion_check(k: &CompositionVector) -> Result<bool> {
    let lhs = reference_dicke_state::<f64>(k)?;
    let rhs = recursion_rhs::<f64>(k)?;
    Ok(lhs.max_abs_diff(&rhs)? <= 1e-12)
}
