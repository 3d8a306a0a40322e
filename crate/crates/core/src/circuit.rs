//! Ordered gate sequences, macro-operator tags, metrics and JSON interchange.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::ControlledGate;

/// Macro-operator family a synthesized gate belongs to.
///
/// For `d = 2, 3` the families follow the `I` / `II` blocks (an `I_{m,l}`
/// groups the `V` operators over every level pair at fixed `(m, l)`); for
/// `d >= 4` each `V` operator with `j` levels is its own macro, `V(j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I,
    II,
    V(usize),
}

impl Family {
    pub fn for_levels(d: usize, j: usize) -> Self {
        match (d, j) {
            (2, 2) | (3, 2) => Family::I,
            (3, 3) => Family::II,
            _ => Family::V(j),
        }
    }

    /// Number of `V` operators making up one macro of this family.
    fn group_size(&self, d: usize, j: usize) -> usize {
        match self {
            Family::I | Family::II => binomial(d, j),
            Family::V(_) => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::I => write!(f, "I"),
            Family::II => write!(f, "II"),
            Family::V(j) => write!(f, "V({j})"),
        }
    }
}

/// Identifies the `V^{(levels)}_{m, ls}` operator a gate was emitted for.
///
/// Rendered as `I_{4,1}^(0,2)`, `II_{4,2,1}^(0,1,2)` or `V(3)_{5,3,1}^(0,1,3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MacroTag {
    pub family: Family,
    pub m: usize,
    /// `l_1 > l_2 > ... > l_{j-1}`.
    pub ls: Vec<usize>,
    /// `i_0 < i_1 < ... < i_{j-1}`.
    pub levels: Vec<usize>,
}

impl MacroTag {
    pub fn j(&self) -> usize {
        self.levels.len()
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for MacroTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_{{{},{}}}^({})",
            self.family,
            self.m,
            join(&self.ls),
            join(&self.levels)
        )
    }
}

impl FromStr for MacroTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed macro tag {s:?}"));
        let (fam, rest) = s.split_once("_{").ok_or_else(bad)?;
        let (sub, rest) = rest.split_once("}^(").ok_or_else(bad)?;
        let sup = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums = |t: &str| -> Result<Vec<usize>> {
            t.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect()
        };
        let sub = nums(sub)?;
        let levels = nums(sup)?;
        let family = match fam {
            "I" => Family::I,
            "II" => Family::II,
            f => {
                let j = f
                    .strip_prefix("V(")
                    .and_then(|t| t.strip_suffix(')'))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(bad)?;
                Family::V(j)
            }
        };
        let (&m, ls) = sub.split_first().ok_or_else(bad)?;
        if levels.len() < 2 || ls.len() + 1 != levels.len() {
            return Err(bad());
        }
        Ok(MacroTag {
            family,
            m,
            ls: ls.to_vec(),
            levels,
        })
    }
}

/// An ordered gate list on `n` wires of dimension `d`. Gates execute in
/// sequence order; `tags[i]` names the macro operator gate `i` belongs to
/// (empty for untagged gates).
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    d: usize,
    n: usize,
    gates: Vec<ControlledGate>,
    tags: Vec<String>,
}

impl Circuit {
    pub fn new(d: usize, n: usize) -> Self {
        Circuit {
            d,
            n,
            gates: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[ControlledGate] {
        &self.gates
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ControlledGate, &str)> {
        self.gates.iter().zip(self.tags.iter().map(String::as_str))
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn push(&mut self, gate: ControlledGate, tag: impl Into<String>) -> Result<()> {
        gate.validate(self.d, self.n)?;
        self.gates.push(gate);
        self.tags.push(tag.into());
        Ok(())
    }

    /// Appends `other`'s gates after this circuit's.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if (self.d, self.n) != (other.d, other.n) {
            return Err(Error::shape((self.d, self.n), (other.d, other.n)));
        }
        self.gates.extend_from_slice(&other.gates);
        self.tags.extend_from_slice(&other.tags);
        Ok(())
    }

    /// `first` followed by `then`.
    pub fn compose(first: &Circuit, then: &Circuit) -> Result<Circuit> {
        let mut c = first.clone();
        c.append(then)?;
        Ok(c)
    }

    /// Same gates placed `offset` wires higher on a register of `n` wires.
    pub fn embedded(&self, n: usize, offset: usize) -> Result<Circuit> {
        let mut c = Circuit::new(self.d, n);
        for (g, t) in self.iter() {
            c.push(g.shifted(offset), t)?;
        }
        Ok(c)
    }

    /// Gates in reverse order with inverted primitives.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            d: self.d,
            n: self.n,
            gates: self
                .gates
                .iter()
                .rev()
                .map(ControlledGate::inverse)
                .collect(),
            tags: self.tags.iter().rev().cloned().collect(),
        }
    }

    /// Number of layers in a greedy as-soon-as-possible layering where two
    /// gates sharing any wire (target or control) never share a layer.
    pub fn depth(&self) -> usize {
        let mut frontier = vec![0usize; self.n];
        let mut depth = 0;
        for g in &self.gates {
            let wires = g.wires();
            let layer = 1 + wires.iter().map(|&w| frontier[w]).max().unwrap_or(0);
            for w in wires {
                frontier[w] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Number of `V` operators per tag, counted by rotations (each `V` with
    /// `j` levels carries exactly `j - 1` rotation gates).
    pub fn v_operators(&self) -> BTreeMap<MacroTag, usize> {
        let mut rotations: BTreeMap<MacroTag, usize> = BTreeMap::new();
        for (g, t) in self.iter() {
            if !g.primitive().is_rotation() {
                continue;
            }
            if let Ok(tag) = t.parse::<MacroTag>() {
                *rotations.entry(tag).or_default() += 1;
            }
        }
        rotations
            .into_iter()
            .map(|(t, r)| {
                let per = t.j() - 1;
                (t, r / per)
            })
            .collect()
    }

    /// Total number of `V` operators.
    pub fn v_operator_count(&self) -> usize {
        self.v_operators().values().sum()
    }

    /// `V` operators per sub-register width `m`.
    pub fn v_operator_count_by_m(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (t, c) in self.v_operators() {
            *out.entry(t.m).or_default() += c;
        }
        out
    }

    /// Macro-operator counts keyed by family name (`"I"`, `"II"`, `"V(j)"`).
    pub fn count_by_tag(&self) -> BTreeMap<String, usize> {
        let mut v_per_family: BTreeMap<(Family, usize), usize> = BTreeMap::new();
        for (t, c) in self.v_operators() {
            *v_per_family.entry((t.family, t.j())).or_default() += c;
        }
        let mut out = BTreeMap::new();
        for ((fam, j), v) in v_per_family {
            *out.entry(fam.to_string()).or_default() += v / fam.group_size(self.d, j);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CircuitRepr::from(self))?)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CircuitRepr::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        let r: CircuitRepr = serde_json::from_str(s)?;
        if r.d < 2 {
            return Err(Error::Parse(format!(
                "qudit dimension must be at least 2, got {}",
                r.d
            )));
        }
        if r.tags.len() != r.gates.len() {
            return Err(Error::Parse(format!(
                "{} gates but {} tags",
                r.gates.len(),
                r.tags.len()
            )));
        }
        let mut c = Circuit::new(r.d, r.n);
        for (g, t) in r.gates.into_iter().zip(r.tags) {
            c.push(g, t)?;
        }
        Ok(c)
    }
}

/// Wire format of a circuit.
#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    d: usize,
    n: usize,
    gates: Vec<ControlledGate>,
    tags: Vec<String>,
}

impl From<&Circuit> for CircuitRepr {
    fn from(c: &Circuit) -> Self {
        CircuitRepr {
            d: c.d,
            n: c.n,
            gates: c.gates.clone(),
            tags: c.tags.clone(),
        }
    }
}
