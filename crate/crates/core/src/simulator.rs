//! Circuit execution and end-to-end verification against the reference.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{CompositionVector, DEFAULT_MAX_AMPLITUDES};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::apply_controlled_gate_in_place;
use crate::pruning::{build_pruned_u_with, PrunedSpec, QutritRule};
use crate::reference::reference_dicke_state;
use crate::scalar::Real;
use crate::state::QuditState;
use crate::synthesis::build_u;

/// Which circuit family to synthesize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The composition-independent `U_n^{(d)}`.
    Full,
    /// The composition-specific circuit (`d = 2` or `3` only).
    Pruned,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Pruned => "pruned",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "pruned" => Ok(Mode::Pruned),
            other => Err(Error::Parse(format!(
                "unknown mode {other:?} (expected full or pruned)"
            ))),
        }
    }
}

/// Pass thresholds for [`Simulator::verify`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Pass requires `fidelity >= 1 - fidelity_tol`.
    pub fidelity_tol: f64,
    /// Pass requires every amplitude within this distance of the reference.
    pub amplitude_tol: f64,
    /// Qutrit `I` range used in [`Mode::Pruned`].
    pub rule: QutritRule,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            fidelity_tol: 1e-10,
            amplitude_tol: 1e-8,
            rule: QutritRule::Conjectured,
        }
    }
}

/// Outcome of building, running and checking one Dicke circuit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub d: usize,
    pub n: usize,
    pub k: Vec<usize>,
    pub mode: Mode,
    pub fidelity: f64,
    pub max_amp_error: f64,
    pub size: usize,
    pub depth: usize,
    /// Macro-operator counts by family.
    pub counts: BTreeMap<String, usize>,
    pub v_operators: usize,
    pub pass: bool,
}

/// Dense statevector executor with an amplitude-count guard.
#[derive(Clone, Copy, Debug)]
pub struct Simulator {
    pub max_amplitudes: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator {
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        }
    }
}

impl Simulator {
    pub fn with_max_amplitudes(max_amplitudes: usize) -> Self {
        Simulator { max_amplitudes }
    }

    /// Applies the gates of `c` to `input` in order.
    pub fn run<T: Real>(&self, c: &Circuit, input: &QuditState<T>) -> Result<QuditState<T>> {
        if (c.d(), c.n()) != (input.d(), input.n()) {
            return Err(Error::shape((c.d(), c.n()), (input.d(), input.n())));
        }
        input.register().guarded_size(self.max_amplitudes)?;
        let mut state = input.clone();
        for g in c.gates() {
            apply_controlled_gate_in_place(&mut state, g)?;
        }
        Ok(state)
    }

    /// Builds the circuit for `k` in `mode`, runs it on `|e(k)>` and compares
    /// with the brute-force Dicke state.
    pub fn verify(
        &self,
        k: &CompositionVector,
        mode: Mode,
        opts: VerifyOptions,
    ) -> Result<VerifyReport> {
        let circuit = match mode {
            Mode::Full => build_u(k.n(), k.d())?,
            Mode::Pruned => build_pruned_u_with(&PrunedSpec::new(k.clone())?, opts.rule)?,
        };
        self.verify_circuit(&circuit, k, mode, opts)
    }

    pub fn verify_circuit(
        &self,
        circuit: &Circuit,
        k: &CompositionVector,
        mode: Mode,
        opts: VerifyOptions,
    ) -> Result<VerifyReport> {
        k.register().guarded_size(self.max_amplitudes)?;
        let input = QuditState::<f64>::identity_permutation(k)?;
        let out = self.run(circuit, &input)?;
        let reference = reference_dicke_state::<f64>(k)?;
        let fidelity = out.fidelity(&reference)?;
        let max_amp_error = out.max_abs_diff(&reference)?;
        let pass = fidelity >= 1.0 - opts.fidelity_tol && max_amp_error <= opts.amplitude_tol;
        Ok(VerifyReport {
            d: k.d(),
            n: k.n(),
            k: k.parts().to_vec(),
            mode,
            fidelity,
            max_amp_error,
            size: circuit.size(),
            depth: circuit.depth(),
            counts: circuit.count_by_tag(),
            v_operators: circuit.v_operator_count(),
            pass,
        })
    }

    /// Verifies every weak `d`-composition of every `n` in `1..=max_n`.
    /// Cases run in parallel; the result is ordered by `n`, then by `k`
    /// lexicographically.
    pub fn sweep(
        &self,
        d: usize,
        max_n: usize,
        mode: Mode,
        opts: VerifyOptions,
    ) -> Result<Vec<VerifyReport>> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!(
                "qudit dimension must be at least 2, got {d}"
            )));
        }
        let cases: Vec<CompositionVector> = (1..=max_n)
            .flat_map(|n| CompositionVector::all(d, n))
            .collect();
        cases
            .par_iter()
            .map(|k| self.verify(k, mode, opts))
            .collect()
    }
}

/// [`Simulator::run`] with the default guard.
pub fn run<T: Real>(c: &Circuit, input: &QuditState<T>) -> Result<QuditState<T>> {
    Simulator::default().run(c, input)
}

/// [`Simulator::verify`] with default guard and thresholds.
pub fn verify(k: &CompositionVector, mode: Mode) -> Result<VerifyReport> {
    Simulator::default().verify(k, mode, VerifyOptions::default())
}
