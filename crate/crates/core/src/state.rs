//! Dense qudit statevectors.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basis::{CompositionVector, Register, DEFAULT_MAX_AMPLITUDES};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Amplitudes over the `d^n` computational basis, indexed little-endian
/// (wire 0 is the least-significant digit).
#[derive(Clone, Debug, PartialEq)]
pub struct QuditState<T: Real> {
    reg: Register,
    amps: Vec<Complex<T>>,
}

impl<T: Real> QuditState<T> {
    pub fn zeros(d: usize, n: usize) -> Result<Self> {
        let reg = Register::new(d, n)?;
        let size = reg.guarded_size(DEFAULT_MAX_AMPLITUDES)?;
        Ok(QuditState {
            reg,
            amps: vec![Complex::new(T::zero(), T::zero()); size],
        })
    }

    pub fn from_amplitudes(d: usize, n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        let reg = Register::new(d, n)?;
        match reg.checked_size() {
            Some(s) if s == amps.len() => Ok(QuditState { reg, amps }),
            _ => Err(Error::InvalidState(format!(
                "expected d^n = {}^{} amplitudes, got {}",
                d,
                n,
                amps.len()
            ))),
        }
    }

    /// The product state `|digits[n-1] ... digits[0]>`.
    pub fn basis(d: usize, digits: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(d, digits.len())?;
        if let Some(&x) = digits.iter().find(|&&x| x >= d) {
            return Err(Error::InvalidState(format!(
                "digit {x} out of range for d={d}"
            )));
        }
        let idx = s.reg.linear(digits);
        s.amps[idx] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    /// The sorted product state `|0>^k_0 |1>^k_1 ... |d-1>^k_{d-1}` with
    /// wire `n-1` leftmost: wires `0..k_{d-1}` hold `d-1`, the next
    /// `k_{d-2}` wires hold `d-2`, and so on up to the top `k_0` wires.
    pub fn identity_permutation(k: &CompositionVector) -> Result<Self> {
        if k.n() == 0 {
            return Err(Error::InvalidComposition("parts sum to zero".into()));
        }
        Self::basis(k.d(), &identity_permutation_digits(k))
    }

    pub fn d(&self) -> usize {
        self.reg.d
    }

    pub fn n(&self) -> usize {
        self.reg.n
    }

    pub fn register(&self) -> Register {
        self.reg
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> Complex<T> {
        self.amps[self.reg.linear(digits)]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.reg != other.reg {
            return Err(Error::shape((self.d(), self.n()), (other.d(), other.n())));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    /// Indices of amplitudes with modulus above `tol`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        (0..self.amps.len())
            .filter(|&i| self.amps[i].norm() > tol)
            .collect()
    }

    pub fn to_dump(&self) -> StateDump {
        StateDump {
            d: self.d(),
            n: self.n(),
            amps: self
                .amps
                .iter()
                .map(|a| [a.re.to_f64_lossy(), a.im.to_f64_lossy()])
                .collect(),
        }
    }

    pub fn from_dump(dump: &StateDump) -> Result<Self> {
        let amps = dump
            .amps
            .iter()
            .map(|[re, im]| Complex::new(T::of(*re), T::of(*im)))
            .collect();
        Self::from_amplitudes(dump.d, dump.n, amps)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_dump())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_dump(&serde_json::from_str(s)?)
    }
}

/// Fidelity `|<a|b>|^2` between two states of the same shape.
pub fn fidelity<T: Real>(a: &QuditState<T>, b: &QuditState<T>) -> Result<T> {
    a.fidelity(b)
}

/// Per-wire digits of `|e(k)>`.
pub fn identity_permutation_digits(k: &CompositionVector) -> Vec<usize> {
    // wire 0 is the rightmost factor, so walk the levels from d-1 down.
    k.parts()
        .iter()
        .enumerate()
        .rev()
        .flat_map(|(level, &count)| std::iter::repeat_n(level, count))
        .collect()
}

/// Serialized state: `{"d": .., "n": .., "amps": [[re, im], ...]}` in
/// linear-index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub d: usize,
    pub n: usize,
    pub amps: Vec<[f64; 2]>,
}
