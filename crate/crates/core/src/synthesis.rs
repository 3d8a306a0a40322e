//! Construction of the Dicke operator `U_n^{(d)}` from `V` operators.
//!
//! Operator products in the usual right-to-left notation are emitted here in
//! execution order (first-applied gate first). `W_m` acts on the top `m`
//! wires of an `n`-wire register (`W_m ⊗ I^{⊗(n-m)}`); its local wire `q`
//! is global wire `q + n - m`.

use std::collections::BTreeMap;

use num_integer::binomial;

use crate::basis::CompositionVector;
use crate::circuit::{Circuit, Family, MacroTag};
use crate::error::{Error, Result};
use crate::gate::{Control, ControlledGate, GatePrimitive};
use crate::state::identity_permutation_digits;

/// Largest `n + d` accepted by the closed-form count functions.
pub const MAX_COUNT_ARG: usize = 30;

/// Parameters of `V^{(i_0, ..., i_{j-1})}_{m, l_1, ..., l_{j-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VOperatorSpec {
    m: usize,
    levels: Vec<usize>,
    ls: Vec<usize>,
}

impl VOperatorSpec {
    /// `levels` strictly increasing (`j >= 2` of them); `ls` strictly
    /// decreasing with `m - 1 >= l_1` and `l_{j-1} >= 1`.
    pub fn new(m: usize, levels: Vec<usize>, ls: Vec<usize>) -> Result<Self> {
        let j = levels.len();
        if j < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least two levels, got {j}"
            )));
        }
        if ls.len() != j - 1 {
            return Err(Error::InvalidSpec(format!(
                "{j} levels need {} l-values, got {}",
                j - 1,
                ls.len()
            )));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(format!(
                "levels {levels:?} not strictly increasing"
            )));
        }
        if ls.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidSpec(format!(
                "l-values {ls:?} not strictly decreasing"
            )));
        }
        if ls[j - 2] < 1 || ls[0] + 1 > m {
            return Err(Error::InvalidSpec(format!(
                "l-values {ls:?} must lie in [1, m-1] for m={m}"
            )));
        }
        Ok(VOperatorSpec { m, levels, ls })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn ls(&self) -> &[usize] {
        &self.ls
    }

    pub fn j(&self) -> usize {
        self.levels.len()
    }

    pub fn tag(&self, d: usize) -> MacroTag {
        MacroTag {
            family: Family::for_levels(d, self.j()),
            m: self.m,
            ls: self.ls.clone(),
            levels: self.levels.clone(),
        }
    }

    /// Digit held by local wire `w` in `|e>`: `i_{j-1}` below `l_{j-1}`,
    /// `i_{k-1}` on `[l_k, l_{k-1})` with `l_0 = m`.
    fn initial_digit(&self, w: usize) -> usize {
        for (k, &lk) in self.ls.iter().enumerate() {
            if w >= lk {
                return self.levels[k];
            }
        }
        self.levels[self.j() - 1]
    }
}

/// Rotation angles `θ_1 ... θ_{j-1}` of a `V` operator.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSet {
    pub thetas: Vec<f64>,
}

fn half_angle(cos_half: f64) -> f64 {
    -2.0 * cos_half.clamp(0.0, 1.0).acos()
}

/// Solves the angle system sequentially for `ls = (l_1 > ... > l_{j-1})`:
/// `cos(θ_1/2) = sqrt(l_{j-1}/m)` and, for `s >= 2`,
/// `cos(θ_s/2) prod_{i<s} (-sin(θ_i/2)) = sqrt((l_{j-s} - l_{j-s+1})/m)`.
/// Every angle lies in `[-2π, 0]` so each `-sin(θ/2)` is non-negative.
pub fn solve_angles(m: usize, ls: &[usize]) -> Result<AngleSet> {
    if ls.is_empty() {
        return Err(Error::InvalidSpec("no l-values".into()));
    }
    if ls.windows(2).any(|w| w[0] <= w[1]) || ls[ls.len() - 1] < 1 || ls[0] + 1 > m {
        return Err(Error::InvalidSpec(format!(
            "l-values {ls:?} invalid for m={m}"
        )));
    }
    let j = ls.len() + 1;
    let mf = m as f64;
    let mut thetas = Vec::with_capacity(j - 1);
    thetas.push(half_angle((ls[j - 2] as f64 / mf).sqrt()));
    let mut sine_product = 1.0;
    for s in 2..j {
        sine_product *= -(thetas[s - 2] / 2.0).sin();
        assert!(
            sine_product > 0.0,
            "degenerate angle system for m={m}, ls={ls:?}"
        );
        let gap = (ls[j - s - 1] - ls[j - s]) as f64;
        thetas.push(half_angle((gap / mf).sqrt() / sine_product));
    }
    Ok(AngleSet { thetas })
}

/// Gates of one `V` operator on local wires `0..m`, in execution order.
///
/// Stages run `k = j-1` down to `1`; stage `k` is a NOT `X^{(i_{k-1}, i_k)}`
/// on wire `l_k` controlled by wire 0 holding `i_k`, a rotation
/// `R^{(i_{k-1}, i_k)}(θ_{j-k})` on wire 0, and the same NOT again.
///
/// Each rotation is controlled on every wire of
/// `{l_k, l_k - 1} ∪ {m - 1 if i_0 > 0} \ {0}` at the digit that wire holds
/// on the branch still eligible for later rotations: the `|e>` digit, updated
/// by each pre-NOT already emitted (the matching post-NOT never fires on that
/// branch, since wire 0 has rotated away from `i_k`). Coinciding wires at the
/// edges (`l_k - 1 = l_{k+1}`, `l_{j-1} = 1`, `l_1 = m - 1`) collapse to a
/// single control automatically.
pub fn v_operator_local_gates(spec: &VOperatorSpec) -> Result<Vec<ControlledGate>> {
    let j = spec.j();
    let angles = solve_angles(spec.m, &spec.ls)?;

    let mut tracked: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in &spec.ls {
        tracked.insert(l, spec.initial_digit(l));
        tracked.insert(l - 1, spec.initial_digit(l - 1));
    }
    if spec.levels[0] > 0 {
        tracked.insert(spec.m - 1, spec.initial_digit(spec.m - 1));
    }
    tracked.remove(&0);

    let mut gates = Vec::with_capacity(3 * (j - 1));
    for k in (1..j).rev() {
        let (lo, hi) = (spec.levels[k - 1], spec.levels[k]);
        let lk = spec.ls[k - 1];
        let flip = ControlledGate::new(
            lk,
            GatePrimitive::Not { i: lo, j: hi },
            vec![Control::new(0, hi)],
        )?;
        tracked.insert(lk, hi);
        let controls = tracked.iter().map(|(&w, &v)| Control::new(w, v)).collect();
        let rotation = ControlledGate::new(
            0,
            GatePrimitive::Rotation {
                i: lo,
                j: hi,
                theta: angles.thetas[j - k - 1],
            },
            controls,
        )?;
        gates.push(flip.clone());
        gates.push(rotation);
        gates.push(flip);
    }
    Ok(gates)
}

fn check_fits(d: usize, n: usize, m: usize, levels: &[usize]) -> Result<()> {
    if m > n {
        return Err(Error::InvalidSpec(format!(
            "sub-register width m={m} exceeds n={n}"
        )));
    }
    if let Some(&top) = levels.last() {
        if top >= d {
            return Err(Error::InvalidSpec(format!(
                "level {top} out of range for d={d}"
            )));
        }
    }
    Ok(())
}

fn push_v(c: &mut Circuit, spec: &VOperatorSpec) -> Result<()> {
    check_fits(c.d(), c.n(), spec.m, &spec.levels)?;
    let offset = c.n() - spec.m;
    let tag = spec.tag(c.d()).to_string();
    for g in v_operator_local_gates(spec)? {
        c.push(g.shifted(offset), tag.as_str())?;
    }
    Ok(())
}

/// One `V` operator on the top `m` wires of an `n`-wire, dimension-`d`
/// register.
pub fn build_v_operator(spec: &VOperatorSpec, d: usize, n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(d, n);
    push_v(&mut c, spec)?;
    Ok(c)
}

/// Strictly increasing `r`-subsets of `lo..=hi`, lexicographic.
fn combinations(lo: usize, hi: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, hi: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let need = r - cur.len();
        let mut x = start;
        while x + need <= hi + 1 {
            cur.push(x);
            rec(x + 1, hi, r, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        out.push(Vec::new());
    } else if hi >= lo {
        rec(lo, hi, r, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// Every `V` at fixed `(m, ls)` over all ascending level `j`-subsets of
/// `0..d`, lexicographic. For `j = 2` this is `I_{m,l}`; for `d = 3, j = 3`
/// it is `II_{m,l_1,l_2}`.
pub fn build_level_group(m: usize, ls: &[usize], d: usize, n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(d, n);
    push_level_group(&mut c, m, ls)?;
    Ok(c)
}

fn push_level_group(c: &mut Circuit, m: usize, ls: &[usize]) -> Result<()> {
    let j = ls.len() + 1;
    for levels in combinations(0, c.d() - 1, j) {
        push_v(c, &VOperatorSpec::new(m, levels, ls.to_vec())?)?;
    }
    Ok(())
}

/// `I_{m,l}` for `d = 2` or `3`.
pub fn build_i_operator(m: usize, l: usize, d: usize, n: usize) -> Result<Circuit> {
    build_level_group(m, &[l], d, n)
}

/// `II_{m,l_1,l_2}` (qutrits).
pub fn build_ii_operator(m: usize, l1: usize, l2: usize, n: usize) -> Result<Circuit> {
    build_level_group(m, &[l1, l2], 3, n)
}

/// Descending tuples `m-1 >= l_1 > ... > l_{j-1} >= 1` in execution order:
/// `l_{j-1}` varies slowest, `l_1` fastest, each ascending.
pub fn l_tuples(m: usize, j: usize) -> Vec<Vec<usize>> {
    if m < 2 || j < 2 {
        return Vec::new();
    }
    combinations(1, m - 1, j - 1)
        .into_iter()
        .map(|mut asc| {
            asc.reverse();
            asc
        })
        .collect()
}

/// `W_m^{(d,j)}`: the level groups for every l-tuple, in execution order.
pub fn build_w_dj(m: usize, d: usize, j: usize, n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(d, n);
    if j < 2 || j > d.min(m) {
        return Err(Error::InvalidSpec(format!(
            "need 2 <= j <= min(d, m), got j={j}, d={d}, m={m}"
        )));
    }
    for ls in l_tuples(m, j) {
        push_level_group(&mut c, m, &ls)?;
    }
    Ok(c)
}

/// `W_m^{(d)}`: `W_m^{(d,2)}` first, then `j = 3, ..., min(d, m)`.
pub fn build_w(m: usize, d: usize, n: usize) -> Result<Circuit> {
    if m < 2 {
        return Err(Error::InvalidSpec(format!("W_m needs m >= 2, got {m}")));
    }
    let mut c = Circuit::new(d, n);
    for j in 2..=d.min(m) {
        c.append(&build_w_dj(m, d, j, n)?)?;
    }
    Ok(c)
}

/// `U_n^{(d)}`: `W_n` first, then `W_{n-1}`, ..., `W_2`. Empty for `n = 1`.
pub fn build_u(n: usize, d: usize) -> Result<Circuit> {
    if n < 1 {
        return Err(Error::InvalidSpec("U_n needs n >= 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidSpec(format!(
            "qudit dimension must be at least 2, got {d}"
        )));
    }
    let mut c = Circuit::new(d, n);
    for m in (2..=n).rev() {
        c.append(&build_w(m, d, n)?)?;
    }
    Ok(c)
}

/// Uncontrolled `X^{(0,s)}` gates preparing `|e(k)>` from `|0...0>`.
pub fn preparation_circuit(k: &CompositionVector) -> Result<Circuit> {
    let mut c = Circuit::new(k.d(), k.n());
    for (wire, s) in identity_permutation_digits(k).into_iter().enumerate() {
        if s > 0 {
            c.push(
                ControlledGate::uncontrolled(wire, GatePrimitive::Not { i: 0, j: s }),
                "",
            )?;
        }
    }
    Ok(c)
}

fn count_guard(a: usize, b: usize) -> Result<()> {
    if a + b > MAX_COUNT_ARG {
        return Err(Error::Overflow(format!(
            "count arguments {a} + {b} exceed {MAX_COUNT_ARG}"
        )));
    }
    Ok(())
}

/// `C(m+d-1, d-1)`: weak `d`-compositions of `m`, equal to the number of `V`
/// operators in `W_m^{(d)}` plus the `d` identity operators of the `j = 1`
/// term (one per level).
pub fn predicted_w_count(m: usize, d: usize) -> Result<u64> {
    count_guard(m, d)?;
    if d == 0 {
        return Ok(0);
    }
    Ok(binomial((m + d - 1) as u64, (d - 1) as u64))
}

/// `(n+1)/d · C(n+d, d-1) - d - 1`: the sum of [`predicted_w_count`] over
/// `m = 2..=n`, so a synthesized `U_n^{(d)}` has `d (n-1)` fewer `V`
/// operators.
pub fn predicted_v_count(n: usize, d: usize) -> Result<u64> {
    count_guard(n, d)?;
    if d == 0 {
        return Err(Error::InvalidSpec("d must be positive".into()));
    }
    let (n, d) = (n as u128, d as u128);
    let total = (n + 1) * binomial(n + d, d - 1) / d;
    Ok((total - d - 1) as u64)
}

/// `C(d,j) · C(m-1,j-1)`: `V` operators in `W_m^{(d,j)}`.
pub fn predicted_w_dj_count(m: usize, d: usize, j: usize) -> u64 {
    if j == 0 || j > d || m == 0 {
        return 0;
    }
    binomial(d as u64, j as u64) * binomial((m - 1) as u64, (j - 1) as u64)
}
