//! Basis indexing and composition vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of amplitudes a dense register may hold.
pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 20;

/// Shape of an `n`-wire register of `d`-level qudits.
///
/// Linear basis indices are little-endian in base `d`: wire 0 is the least
/// significant digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    pub d: usize,
    pub n: usize,
}

impl Register {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidState(format!(
                "qudit dimension must be at least 2, got {d}"
            )));
        }
        Ok(Register { d, n })
    }

    /// `d^n`, or `None` if it does not fit in a `usize`.
    pub fn checked_size(&self) -> Option<usize> {
        self.d.checked_pow(u32::try_from(self.n).ok()?)
    }

    /// `d^n`; callers are expected to have checked the size guard.
    pub fn size(&self) -> usize {
        self.checked_size().expect("register size overflows usize")
    }

    /// Returns `d^n` if it is at most `limit`.
    pub fn guarded_size(&self, limit: usize) -> Result<usize> {
        match self.checked_size() {
            Some(s) if s <= limit => Ok(s),
            other => Err(Error::TooLarge {
                what: "amplitude count d^n",
                size: other.map_or(u128::MAX, |s| s as u128),
                limit: limit as u128,
            }),
        }
    }

    /// Index distance between consecutive values of `wire`.
    #[inline]
    pub fn stride(&self, wire: usize) -> usize {
        self.d.pow(wire as u32)
    }

    #[inline]
    pub fn digit(&self, linear: usize, wire: usize) -> usize {
        (linear / self.stride(wire)) % self.d
    }

    pub fn digits(&self, mut linear: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            out.push(linear % self.d);
            linear /= self.d;
        }
        out
    }

    pub fn linear(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &x| acc * self.d + x)
    }
}

/// A computational basis label, held both as per-wire digits and as the
/// linear amplitude index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    digits: Vec<usize>,
    linear: usize,
}

impl BasisIndex {
    pub fn from_linear(reg: Register, linear: usize) -> Result<Self> {
        let size = reg.checked_size().unwrap_or(usize::MAX);
        if linear >= size {
            return Err(Error::InvalidState(format!(
                "basis index {linear} out of range for d={} n={}",
                reg.d, reg.n
            )));
        }
        Ok(BasisIndex {
            digits: reg.digits(linear),
            linear,
        })
    }

    /// `digits[q]` is the value held by wire `q`.
    pub fn from_digits(reg: Register, digits: Vec<usize>) -> Result<Self> {
        if digits.len() != reg.n {
            return Err(Error::InvalidState(format!(
                "expected {} digits, got {}",
                reg.n,
                digits.len()
            )));
        }
        if let Some(&x) = digits.iter().find(|&&x| x >= reg.d) {
            return Err(Error::InvalidState(format!(
                "digit {x} out of range for d={}",
                reg.d
            )));
        }
        let linear = reg.linear(&digits);
        Ok(BasisIndex { digits, linear })
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn linear(&self) -> usize {
        self.linear
    }

    /// Ket string in the usual left-to-right order (wire `n-1` first).
    pub fn ket_string(&self) -> String {
        self.digits.iter().rev().map(|x| x.to_string()).collect()
    }
}

/// Level multiplicities `(k_0, ..., k_{d-1})` of a multiset of size `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompositionVector {
    parts: Vec<usize>,
}

impl CompositionVector {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidComposition(format!(
                "need at least two levels, got {} part(s)",
                parts.len()
            )));
        }
        Ok(CompositionVector { parts })
    }

    /// Like [`CompositionVector::new`] but also checks the dimension and
    /// requires `n >= 1`.
    pub fn with_dimension(d: usize, parts: Vec<usize>) -> Result<Self> {
        if parts.len() != d {
            return Err(Error::InvalidComposition(format!(
                "expected {d} parts, got {}",
                parts.len()
            )));
        }
        let k = Self::new(parts)?;
        if k.n() == 0 {
            return Err(Error::InvalidComposition("parts sum to zero".into()));
        }
        Ok(k)
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn register(&self) -> Register {
        Register {
            d: self.d(),
            n: self.n(),
        }
    }

    /// Number of nonzero parts.
    pub fn support(&self) -> usize {
        self.parts.iter().filter(|&&k| k > 0).count()
    }

    /// `k - ŝ`, or `None` when `k_s == 0`.
    pub fn decrement(&self, s: usize) -> Option<Self> {
        let mut parts = self.parts.clone();
        *parts.get_mut(s)? = parts[s].checked_sub(1)?;
        Some(CompositionVector { parts })
    }

    /// All weak `d`-compositions of `n`, in lexicographic order of the parts.
    pub fn all(d: usize, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut parts = vec![0; d];
        fn rec(i: usize, left: usize, parts: &mut Vec<usize>, out: &mut Vec<CompositionVector>) {
            let d = parts.len();
            if i == d - 1 {
                parts[i] = left;
                out.push(CompositionVector {
                    parts: parts.clone(),
                });
                return;
            }
            for x in 0..=left {
                parts[i] = x;
                rec(i + 1, left - x, parts, out);
            }
        }
        if d >= 1 {
            rec(0, n, &mut parts, &mut out);
        }
        out
    }
}

impl fmt::Display for CompositionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}
