//! Composition-specific ("pruned") Dicke circuits for qubits and qutrits.
//!
//! The qubit construction keeps, for each `m`, only the `I_{m,l'}` with
//! `max(l+m-n, 1) <= l' <= min(l, m-1)`. The qutrit construction applies the
//! analogous bounds to `I` and `II` operators; it was found experimentally
//! and has no proof, so every use should be paired with a simulation check
//! (see [`crate::simulator::Simulator::verify`]).
//!
//! A product whose lower bound exceeds its upper bound is empty.
//!
//! The conjectured qutrit rule misses `I` operators when `k_0 > 0` and the
//! bounds of `k_1` and `k_2` do not overlap (smallest case `k = (1, 3, 1)`);
//! [`QutritRule::Covering`] keeps both ranges.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::basis::CompositionVector;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::synthesis::{build_i_operator, build_ii_operator};

/// A composition vector with `d ∈ {2, 3}` together with its derived
/// wire boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedSpec {
    k: CompositionVector,
}

impl PrunedSpec {
    pub fn new(k: CompositionVector) -> Result<Self> {
        if !matches!(k.d(), 2 | 3) {
            return Err(Error::InvalidSpec(format!(
                "pruned circuits exist for d = 2 or 3, got d={}",
                k.d()
            )));
        }
        if k.n() == 0 {
            return Err(Error::InvalidComposition("parts sum to zero".into()));
        }
        Ok(PrunedSpec { k })
    }

    pub fn k(&self) -> &CompositionVector {
        &self.k
    }

    pub fn d(&self) -> usize {
        self.k.d()
    }

    pub fn n(&self) -> usize {
        self.k.n()
    }

    /// Qubits: the number of `|1>`s.
    pub fn l(&self) -> usize {
        self.k.parts()[1]
    }

    /// Qutrits: `l_1 = k_1 + k_2`.
    pub fn l1(&self) -> usize {
        let p = self.k.parts();
        p[1] + p.get(2).copied().unwrap_or(0)
    }

    /// Qutrits: `l_2 = k_2`.
    pub fn l2(&self) -> usize {
        self.k.parts().get(2).copied().unwrap_or(0)
    }

    /// Qutrits: `k_2` when `k_0 = 0`, otherwise `max(k_1, k_2)`.
    pub fn k_tilde(&self) -> usize {
        let p = self.k.parts();
        if p[0] == 0 {
            p[2]
        } else {
            p[1].max(p[2])
        }
    }
}

/// Inclusive integer range `lo..=hi`, empty when `lo > hi`.
fn span(lo: i64, hi: i64) -> impl Iterator<Item = usize> {
    (lo.max(0)..=hi).map(|x| x as usize)
}

/// `l'` bounds of the qubit-style product: `max(l+m-n, 1) ..= min(l, m-1)`.
fn i_bounds(l: usize, m: usize, n: usize) -> (i64, i64) {
    let (l, m, n) = (l as i64, m as i64, n as i64);
    ((l + m - n).max(1), l.min(m - 1))
}

/// `(l_2', l_1')` pairs of the doubly-bounded `II` product, execution order.
fn ii_pairs(l1: usize, l2: usize, m: usize, n: usize) -> Vec<(usize, usize)> {
    let (l1, l2, mi, ni) = (l1 as i64, l2 as i64, m as i64, n as i64);
    let mut out = Vec::new();
    for b in span((l2 + mi - ni).max(1), l2.min(mi - 2)) {
        for a in span((l1 + mi - ni).max(b as i64 + 1), l1.min(mi - 1)) {
            out.push((b, a));
        }
    }
    out
}

/// Pruned qubit circuit `𝒰_n(n-l, l)`.
pub fn build_pruned_u_qubit(spec: &PrunedSpec) -> Result<Circuit> {
    if spec.d() != 2 {
        return Err(Error::InvalidSpec(format!(
            "qubit pruning needs d=2, got d={}",
            spec.d()
        )));
    }
    let (n, l) = (spec.n(), spec.l());
    let mut c = Circuit::new(2, n);
    for m in (2..=n).rev() {
        let (lo, hi) = i_bounds(l, m, n);
        for lp in span(lo, hi) {
            c.append(&build_i_operator(m, lp, 2, n)?)?;
        }
    }
    Ok(c)
}

/// How the qutrit `I` range is chosen at each `m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum QutritRule {
    /// Unproven: `l` over the qubit-style bounds of `k̃`.
    #[default]
    Conjectured,
    /// `l` over the union of the bounds of `k_1` and `k_2` when `k_0 > 0`
    /// (the bounds of `k_2` when `k_0 = 0`). Covers every special-case branch
    /// that the conjectured rule can miss, e.g. `k = (1, 3, 1)`.
    Covering,
}

impl fmt::Display for QutritRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QutritRule::Conjectured => "conjectured",
            QutritRule::Covering => "covering",
        })
    }
}

impl FromStr for QutritRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conjectured" => Ok(QutritRule::Conjectured),
            "covering" => Ok(QutritRule::Covering),
            other => Err(Error::Parse(format!(
                "unknown rule {other:?} (expected conjectured or covering)"
            ))),
        }
    }
}

/// `I` wire labels kept at width `m`, ascending.
fn qutrit_i_levels(spec: &PrunedSpec, m: usize, rule: QutritRule) -> Vec<usize> {
    let n = spec.n();
    let p = spec.k().parts();
    let sources = match rule {
        QutritRule::Conjectured => vec![spec.k_tilde()],
        QutritRule::Covering if p[0] == 0 => vec![p[2]],
        QutritRule::Covering => vec![p[1], p[2]],
    };
    let set: BTreeSet<usize> = sources
        .into_iter()
        .flat_map(|t| {
            let (lo, hi) = i_bounds(t, m, n);
            span(lo, hi)
        })
        .collect();
    set.into_iter().collect()
}

/// Pruned qutrit circuit `𝒰_n(n-l_1, l_1-l_2, l_2)` under the conjectured
/// rule: for each `m` (largest first) the bounded `I` product, then the
/// bounded `II` product.
pub fn build_pruned_u_qutrit(spec: &PrunedSpec) -> Result<Circuit> {
    build_pruned_u_qutrit_with(spec, QutritRule::Conjectured)
}

pub fn build_pruned_u_qutrit_with(spec: &PrunedSpec, rule: QutritRule) -> Result<Circuit> {
    if spec.d() != 3 {
        return Err(Error::InvalidSpec(format!(
            "qutrit pruning needs d=3, got d={}",
            spec.d()
        )));
    }
    let n = spec.n();
    let mut c = Circuit::new(3, n);
    for m in (2..=n).rev() {
        for l in qutrit_i_levels(spec, m, rule) {
            c.append(&build_i_operator(m, l, 3, n)?)?;
        }
        for (l2, l1) in ii_pairs(spec.l1(), spec.l2(), m, n) {
            c.append(&build_ii_operator(m, l1, l2, n)?)?;
        }
    }
    Ok(c)
}

/// Dispatches on `d`, using the conjectured qutrit rule.
pub fn build_pruned_u(spec: &PrunedSpec) -> Result<Circuit> {
    build_pruned_u_with(spec, QutritRule::Conjectured)
}

/// Dispatches on `d`; `rule` only matters for qutrits.
pub fn build_pruned_u_with(spec: &PrunedSpec, rule: QutritRule) -> Result<Circuit> {
    match spec.d() {
        2 => build_pruned_u_qubit(spec),
        _ => build_pruned_u_qutrit_with(spec, rule),
    }
}

/// `N^I_n(l) = sum_{m=2}^{n} [1 + min(l, m-1) - max(l+m-n, 1)]`.
pub fn qubit_i_count(n: usize, l: usize) -> i64 {
    let (n, l) = (n as i64, l as i64);
    (2..=n).map(|m| 1 + l.min(m - 1) - (l + m - n).max(1)).sum()
}

/// `N^{II}_n(l_1, l_2) = sum_m sum_{l_2'} [1 + min(l_1, m-1) - max(l_1+m-n, l_2'+1)]`
/// with `l_2'` over `max(l_2+m-n, 1) ..= min(l_2, m-2)`.
pub fn qutrit_ii_count(n: usize, l1: usize, l2: usize) -> i64 {
    let (n, l1, l2) = (n as i64, l1 as i64, l2 as i64);
    let mut total = 0;
    for m in 2..=n {
        let mut lp2 = (l2 + m - n).max(1);
        while lp2 <= l2.min(m - 2) {
            total += 1 + l1.min(m - 1) - (l1 + m - n).max(lp2 + 1);
            lp2 += 1;
        }
    }
    total
}

/// `(N^I, N^{II})` for the pruned circuit of `spec` (`N^{II} = 0` for qubits).
pub fn predicted_pruned_counts(spec: &PrunedSpec) -> (i64, i64) {
    let n = spec.n();
    match spec.d() {
        2 => (qubit_i_count(n, spec.l()), 0),
        _ => (
            qubit_i_count(n, spec.k_tilde()),
            qutrit_ii_count(n, spec.l1(), spec.l2()),
        ),
    }
}
