//! Subspace NOT / `R^y` gates, their multi-controlled forms, the in-place
//! statevector kernel and explicit matrix realizations.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::Register;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::state::QuditState;

/// Largest `d^n` for which [`controlled_gate_matrix`] will materialize a
/// dense matrix.
pub const MAX_MATRIX_DIM: usize = 1 << 14;

/// Fibers handled per gate before the kernel fans out across threads.
const PARALLEL_THRESHOLD: usize = 1 << 15;

/// A single-qudit gate acting on the two-level subspace spanned by `|i>`
/// and `|j>` (`i < j`), identity on every other level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GatePrimitive {
    /// `X^{(ij)}`: swaps `|i>` and `|j>`.
    Not { i: usize, j: usize },
    /// `R^{(ij)}(theta)`: `|i> -> cos(θ/2)|i> + sin(θ/2)|j>`,
    /// `|j> -> -sin(θ/2)|i> + cos(θ/2)|j>`.
    Rotation { i: usize, j: usize, theta: f64 },
}

impl GatePrimitive {
    pub fn levels(&self) -> (usize, usize) {
        match *self {
            GatePrimitive::Not { i, j } | GatePrimitive::Rotation { i, j, .. } => (i, j),
        }
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, GatePrimitive::Rotation { .. })
    }

    /// Same primitive with the rotation angle negated; NOT is its own inverse.
    pub fn inverse(&self) -> Self {
        match *self {
            GatePrimitive::Rotation { i, j, theta } => GatePrimitive::Rotation {
                i,
                j,
                theta: -theta,
            },
            not => not,
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        let (i, j) = self.levels();
        if i >= j {
            return Err(Error::InvalidGate(format!(
                "subspace levels need i < j, got ({i}, {j})"
            )));
        }
        if j >= d {
            return Err(Error::InvalidGate(format!(
                "level {j} out of range for d={d}"
            )));
        }
        if let GatePrimitive::Rotation { theta, .. } = self {
            if !theta.is_finite() {
                return Err(Error::InvalidGate(format!(
                    "non-finite rotation angle {theta}"
                )));
            }
        }
        Ok(())
    }

    /// The 2x2 block `[[a_ii, a_ij], [a_ji, a_jj]]` in the `(i, j)` subspace.
    fn block<T: Real>(&self) -> [[T; 2]; 2] {
        match *self {
            GatePrimitive::Not { .. } => [[T::zero(), T::one()], [T::one(), T::zero()]],
            GatePrimitive::Rotation { theta, .. } => {
                let (s, c) = (theta / 2.0).sin_cos();
                let (s, c) = (T::of(s), T::of(c));
                [[c, -s], [s, c]]
            }
        }
    }
}

/// The `d x d` unitary of a primitive: its 2x2 block on rows/columns `i, j`
/// and the identity elsewhere.
pub fn primitive_matrix<T: Real>(g: &GatePrimitive, d: usize) -> Result<Matrix<T>> {
    g.validate(d)?;
    let (i, j) = g.levels();
    let b = g.block::<T>();
    let mut m = Matrix::identity(d);
    let z = T::zero();
    m[(i, i)] = Complex::new(b[0][0], z);
    m[(i, j)] = Complex::new(b[0][1], z);
    m[(j, i)] = Complex::new(b[1][0], z);
    m[(j, j)] = Complex::new(b[1][1], z);
    Ok(m)
}

/// Requires `wire` to hold `value` for the gate to act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Control {
    pub wire: usize,
    pub value: usize,
}

impl Control {
    pub fn new(wire: usize, value: usize) -> Self {
        Control { wire, value }
    }
}

/// A primitive on `target`, applied only on basis states whose control
/// wires all hold their required values. Controls are kept sorted by wire.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRepr", try_from = "GateRepr")]
pub struct ControlledGate {
    target: usize,
    primitive: GatePrimitive,
    controls: Vec<Control>,
}

impl ControlledGate {
    pub fn new(
        target: usize,
        primitive: GatePrimitive,
        mut controls: Vec<Control>,
    ) -> Result<Self> {
        controls.sort();
        if controls.iter().any(|c| c.wire == target) {
            return Err(Error::InvalidGate(format!(
                "target wire {target} is also a control"
            )));
        }
        if controls.windows(2).any(|w| w[0].wire == w[1].wire) {
            return Err(Error::InvalidGate("a wire carries two controls".into()));
        }
        Ok(ControlledGate {
            target,
            primitive,
            controls,
        })
    }

    pub fn uncontrolled(target: usize, primitive: GatePrimitive) -> Self {
        ControlledGate {
            target,
            primitive,
            controls: Vec::new(),
        }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn primitive(&self) -> &GatePrimitive {
        &self.primitive
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Target and control wires, ascending.
    pub fn wires(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.controls.iter().map(|c| c.wire).collect();
        w.push(self.target);
        w.sort_unstable();
        w
    }

    /// Shifts every wire up by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        ControlledGate {
            target: self.target + offset,
            primitive: self.primitive,
            controls: self
                .controls
                .iter()
                .map(|c| Control::new(c.wire + offset, c.value))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        ControlledGate {
            primitive: self.primitive.inverse(),
            ..self.clone()
        }
    }

    pub fn validate(&self, d: usize, n: usize) -> Result<()> {
        self.primitive.validate(d)?;
        if self.target >= n {
            return Err(Error::InvalidGate(format!(
                "target wire {} out of range for n={n}",
                self.target
            )));
        }
        for c in &self.controls {
            if c.wire >= n {
                return Err(Error::InvalidGate(format!(
                    "control wire {} out of range for n={n}",
                    c.wire
                )));
            }
            if c.value >= d {
                return Err(Error::InvalidGate(format!(
                    "control value {} out of range for d={d}",
                    c.value
                )));
            }
        }
        Ok(())
    }

    pub fn matches(&self, reg: Register, linear: usize) -> bool {
        self.controls
            .iter()
            .all(|c| reg.digit(linear, c.wire) == c.value)
    }
}

impl fmt::Display for ControlledGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.primitive {
            GatePrimitive::Not { i, j } => write!(f, "X({i}{j})@{}", self.target)?,
            GatePrimitive::Rotation { i, j, theta } => {
                write!(f, "R({i}{j};{theta})@{}", self.target)?
            }
        }
        for c in &self.controls {
            write!(f, " [{}={}]", c.wire, c.value)?;
        }
        Ok(())
    }
}

/// Wire format of a gate.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct GateRepr {
    target: usize,
    kind: String,
    i: usize,
    j: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    controls: Vec<Control>,
}

impl From<ControlledGate> for GateRepr {
    fn from(g: ControlledGate) -> Self {
        let (i, j) = g.primitive.levels();
        let (kind, theta) = match g.primitive {
            GatePrimitive::Not { .. } => ("X", None),
            GatePrimitive::Rotation { theta, .. } => ("R", Some(theta)),
        };
        GateRepr {
            target: g.target,
            kind: kind.into(),
            i,
            j,
            theta,
            controls: g.controls,
        }
    }
}

impl TryFrom<GateRepr> for ControlledGate {
    type Error = Error;

    fn try_from(r: GateRepr) -> Result<Self> {
        let primitive = match (r.kind.as_str(), r.theta) {
            ("X", None) => GatePrimitive::Not { i: r.i, j: r.j },
            ("R", Some(theta)) => GatePrimitive::Rotation {
                i: r.i,
                j: r.j,
                theta,
            },
            ("X", Some(_)) => return Err(Error::Parse("X gate must not carry theta".into())),
            ("R", None) => return Err(Error::Parse("R gate requires theta".into())),
            (k, _) => return Err(Error::Parse(format!("unknown gate kind {k:?}"))),
        };
        if r.i >= r.j {
            return Err(Error::InvalidGate(format!(
                "subspace levels need i < j, got ({}, {})",
                r.i, r.j
            )));
        }
        ControlledGate::new(r.target, primitive, r.controls)
    }
}

/// Applies `g` in place.
///
/// The register is cut into contiguous blocks of `d^(w+1)` amplitudes, where
/// `w` is the highest wire the gate touches; every block has the same local
/// pattern of matching fibers, so blocks are independent and may be processed
/// in parallel without changing the result.
pub fn apply_controlled_gate_in_place<T: Real>(
    state: &mut QuditState<T>,
    g: &ControlledGate,
) -> Result<()> {
    let reg = state.register();
    g.validate(reg.d, reg.n)?;

    let top = g
        .controls
        .iter()
        .map(|c| c.wire)
        .chain([g.target])
        .max()
        .unwrap_or(0);
    let block = reg.stride(top + 1);
    let fixed: usize = g
        .controls
        .iter()
        .map(|c| c.value * reg.stride(c.wire))
        .sum();

    // offsets (within a block) of every fiber whose controls match, with the
    // target digit zero
    let mut bases = vec![fixed];
    for w in 0..=top {
        if w == g.target || g.controls.iter().any(|c| c.wire == w) {
            continue;
        }
        let st = reg.stride(w);
        bases = bases
            .iter()
            .flat_map(|&b| (0..reg.d).map(move |x| b + x * st))
            .collect();
    }

    let (i, j) = g.primitive.levels();
    let st = reg.stride(g.target);
    let (off_i, off_j) = (i * st, j * st);
    let m = g.primitive.block::<T>();
    let is_not = !g.primitive.is_rotation();

    let run_block = |chunk: &mut [Complex<T>]| {
        for &b in &bases {
            let (pi, pj) = (b + off_i, b + off_j);
            if is_not {
                chunk.swap(pi, pj);
            } else {
                let (ai, aj) = (chunk[pi], chunk[pj]);
                chunk[pi] = ai * m[0][0] + aj * m[0][1];
                chunk[pj] = ai * m[1][0] + aj * m[1][1];
            }
        }
    };

    let amps = state.amplitudes_mut();
    let blocks = amps.len() / block;
    if blocks > 1 && blocks * bases.len() >= PARALLEL_THRESHOLD {
        amps.par_chunks_mut(block).for_each(run_block);
    } else {
        amps.chunks_mut(block).for_each(run_block);
    }
    Ok(())
}

/// Returns `g` applied to `state`.
pub fn apply_controlled_gate<T: Real>(
    state: &QuditState<T>,
    g: &ControlledGate,
) -> Result<QuditState<T>> {
    let mut out = state.clone();
    apply_controlled_gate_in_place(&mut out, g)?;
    Ok(out)
}

/// Dense `d^n x d^n` matrix of a controlled gate, built entry by entry from
/// the definition (no use of the statevector kernel).
pub fn controlled_gate_matrix<T: Real>(
    g: &ControlledGate,
    d: usize,
    n: usize,
) -> Result<Matrix<T>> {
    g.validate(d, n)?;
    let reg = Register::new(d, n)?;
    let dim = reg
        .checked_size()
        .filter(|&s| s <= MAX_MATRIX_DIM)
        .ok_or(Error::TooLarge {
            what: "dense gate matrix dimension d^n",
            size: reg.checked_size().map_or(u128::MAX, |s| s as u128),
            limit: MAX_MATRIX_DIM as u128,
        })?;
    let local = primitive_matrix::<T>(&g.primitive, d)?;
    let mut m = Matrix::zeros(dim);
    for col in 0..dim {
        let cd = reg.digits(col);
        if !g.matches(reg, col) {
            m[(col, col)] = Complex::new(T::one(), T::zero());
            continue;
        }
        for x in 0..d {
            let mut rd = cd.clone();
            rd[g.target] = x;
            m[(reg.linear(&rd), col)] = local[(x, cd[g.target])];
        }
    }
    Ok(m)
}

/// `I^{⊗(n-1-q)} ⊗ A ⊗ I^{⊗q}` for a single-qudit matrix `A` on wire `q`.
pub fn embed_single<T: Real>(a: &Matrix<T>, wire: usize, n: usize) -> Result<Matrix<T>> {
    let d = a.dim();
    let reg = Register::new(d, n)?;
    if wire >= n {
        return Err(Error::InvalidGate(format!(
            "wire {wire} out of range for n={n}"
        )));
    }
    let dim = reg
        .checked_size()
        .filter(|&s| s <= MAX_MATRIX_DIM)
        .ok_or(Error::TooLarge {
            what: "dense matrix dimension d^n",
            size: reg.checked_size().map_or(u128::MAX, |s| s as u128),
            limit: MAX_MATRIX_DIM as u128,
        })?;
    let mut m = Matrix::zeros(dim);
    let st = reg.stride(wire);
    for col in 0..dim {
        let x = reg.digit(col, wire);
        let base = col - x * st;
        for y in 0..d {
            m[(base + y * st, col)] = a[(y, x)];
        }
    }
    Ok(m)
}
