//! The Baumslag-Gersten group `G = <x, y, t | y^-1 x y = x^2, t^-1 x t = y>` as
//! an HNN extension of `BS(1,2)` with stable letter `t`, associated subgroups
//! `A = <x>`, `B = <y>` and `φ(x^i) = y^i`.
//!
//! Words are split at their `t`-letters into reduced sequences
//! `g_0 t^δ1 g_1 ... t^δm g_m` with base elements `g_i`. A pinch is an adjacent
//! `t^-1 g t` with `g ∈ A` or `t g t^-1` with `g ∈ B`; collapsing it costs one
//! `t`-cell per unit of the subgroup exponent.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bs::{BsElement, Budget};
use crate::error::{Error, Result};
use crate::word::{Gen, Word};

/// Data of the HNN extension: base-group arithmetic budget plus the witness
/// cost of a pinch with subgroup exponent `i`.
#[derive(Clone, Copy, Debug)]
pub struct HnnSpec {
    pub budget: Budget,
    pub pinch_cost: fn(&BigInt) -> BigInt,
}

fn band_length(i: &BigInt) -> BigInt {
    i.abs()
}

impl Default for HnnSpec {
    fn default() -> Self {
        HnnSpec::baumslag_gersten(Budget::default())
    }
}

impl HnnSpec {
    /// A pinch `t^-1 x^i t` is witnessed by a single `t`-band of exactly `|i|`
    /// cells.
    pub fn baumslag_gersten(budget: Budget) -> Self {
        HnnSpec {
            budget,
            pinch_cost: band_length,
        }
    }

    pub fn in_a(&self, g: &BsElement) -> Result<Option<BigInt>> {
        g.in_x_subgroup(&self.budget)
    }

    pub fn in_b(&self, g: &BsElement) -> Option<BigInt> {
        g.in_y_subgroup()
    }

    /// `φ(x^i) = y^i`.
    pub fn phi(&self, i: &BigInt) -> BsElement {
        BsElement::y_pow(i.clone())
    }

    pub fn phi_inv(&self, i: &BigInt) -> BsElement {
        BsElement::x_pow(i.clone())
    }

    /// Pinch formed by `t^δ g t^δ'`, if any.
    fn pinch(&self, delta: i8, g: &BsElement, next: i8) -> Result<Option<(PinchKind, BigInt)>> {
        match (delta, next) {
            (-1, 1) => Ok(self.in_a(g)?.map(|i| (PinchKind::ConjugateA, i))),
            (1, -1) => Ok(self.in_b(g).map(|i| (PinchKind::ConjugateB, i))),
            _ => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PinchKind {
    /// `t^-1 x^i t`.
    ConjugateA,
    /// `t y^i t^-1`.
    ConjugateB,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pinch {
    /// Index `i` into the tail: the pinch is `t^δi g_i t^δ(i+1)`.
    pub position: usize,
    pub kind: PinchKind,
    pub exponent: BigInt,
    pub cost: BigInt,
}

/// `g_0 t^δ1 g_1 ... t^δm g_m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReducedSequence {
    pub g0: BsElement,
    pub tail: Vec<(i8, BsElement)>,
}

/// Reduced sequence read cyclically: `elems[i]` sits between `t^deltas[i]`
/// and `t^deltas[i+1]`, the last one closing the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicSequence {
    pub deltas: Vec<i8>,
    pub elems: Vec<BsElement>,
}

impl ReducedSequence {
    pub fn identity() -> Self {
        ReducedSequence::default()
    }

    pub fn is_identity(&self) -> bool {
        self.tail.is_empty() && self.g0.is_identity()
    }

    pub fn t_length(&self) -> usize {
        self.tail.len()
    }

    fn last_mut(&mut self) -> &mut BsElement {
        match self.tail.last_mut() {
            Some((_, g)) => g,
            None => &mut self.g0,
        }
    }

    pub fn find_pinches(&self, spec: &HnnSpec) -> Result<Vec<Pinch>> {
        let mut out = Vec::new();
        for (i, pair) in self.tail.windows(2).enumerate() {
            let ((d, g), (d2, _)) = (&pair[0], &pair[1]);
            if let Some((kind, e)) = spec.pinch(*d, g, *d2)? {
                out.push(Pinch {
                    position: i,
                    kind,
                    cost: (spec.pinch_cost)(&e),
                    exponent: e,
                });
            }
        }
        Ok(out)
    }

    /// Every pinch costs at least `n` (more than `n - 1` t-cells).
    pub fn is_n_reduced(&self, n: &BigInt, spec: &HnnSpec) -> Result<bool> {
        Ok(self.find_pinches(spec)?.iter().all(|p| &p.cost >= n))
    }

    /// Closes the sequence into a cycle, merging `g_m g_0`.
    pub fn to_cyclic(&self, spec: &HnnSpec) -> Result<CyclicSequence> {
        if self.tail.is_empty() {
            return Ok(CyclicSequence {
                deltas: Vec::new(),
                elems: Vec::new(),
            });
        }
        let mut deltas = Vec::with_capacity(self.tail.len());
        let mut elems = Vec::with_capacity(self.tail.len());
        for (d, g) in &self.tail {
            deltas.push(*d);
            elems.push(g.clone());
        }
        let last = elems.last_mut().expect("nonempty");
        *last = last.mul(&self.g0, &spec.budget)?;
        Ok(CyclicSequence { deltas, elems })
    }
}

impl CyclicSequence {
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Pinches between cyclically consecutive `t`-letters; `position` is the
    /// index of the left letter.
    pub fn pinches(&self, spec: &HnnSpec) -> Result<Vec<Pinch>> {
        let m = self.len();
        let mut out = Vec::new();
        for i in 0..m {
            let j = (i + 1) % m;
            if let Some((kind, e)) = spec.pinch(self.deltas[i], &self.elems[i], self.deltas[j])? {
                out.push(Pinch {
                    position: i,
                    kind,
                    cost: (spec.pinch_cost)(&e),
                    exponent: e,
                });
            }
        }
        Ok(out)
    }

    /// Rotation starting at `t^deltas[start]`, as a sequence with `g_0 = 1`.
    pub fn rotation(&self, start: usize) -> ReducedSequence {
        let m = self.len();
        ReducedSequence {
            g0: BsElement::identity(),
            tail: (0..m)
                .map(|i| {
                    let k = (start + i) % m;
                    (self.deltas[k], self.elems[k].clone())
                })
                .collect(),
        }
    }

    /// Rotation of the cycle so that it starts at `start`.
    pub fn rotated(&self, start: usize) -> CyclicSequence {
        let m = self.len();
        CyclicSequence {
            deltas: (0..m).map(|i| self.deltas[(start + i) % m]).collect(),
            elems: (0..m).map(|i| self.elems[(start + i) % m].clone()).collect(),
        }
    }
}

impl fmt::Display for ReducedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.g0)?;
        for (d, g) in &self.tail {
            write!(f, " t^{} {}", if *d < 0 { "-1" } else { "1" }, g)?;
        }
        Ok(())
    }
}

fn t_letters(exp: &BigInt, spec: &HnnSpec) -> Result<(i8, usize)> {
    let n = exp
        .abs()
        .to_usize()
        .filter(|&n| (n as u64) <= spec.budget.max_bits)
        .ok_or_else(|| Error::budget("t-block length", exp.bits(), spec.budget.max_bits))?;
    Ok((if exp.is_negative() { -1 } else { 1 }, n))
}

fn base_step(gen: Gen, exp: &BigInt) -> Result<BsElement> {
    match gen {
        Gen::X => Ok(BsElement::x_pow(exp.clone())),
        Gen::Y => Ok(BsElement::y_pow(exp.clone())),
        _ => Err(Error::Shape(format!("generator {gen} is not in G"))),
    }
}

/// Splits a word at its `t`-letters and evaluates the base segments.
pub fn parse_sequence(w: &Word, spec: &HnnSpec) -> Result<ReducedSequence> {
    let mut s = ReducedSequence::identity();
    for b in w.blocks() {
        if b.gen.is_t() {
            let (d, n) = t_letters(&b.exp, spec)?;
            for _ in 0..n {
                s.tail.push((d, BsElement::identity()));
            }
        } else {
            let step = base_step(b.gen, &b.exp)?;
            let last = s.last_mut();
            *last = last.mul(&step, &spec.budget)?;
        }
    }
    Ok(s)
}

pub fn find_pinches(s: &ReducedSequence, spec: &HnnSpec) -> Result<Vec<Pinch>> {
    s.find_pinches(spec)
}

pub fn is_n_reduced(w: &Word, n: &BigInt, spec: &HnnSpec) -> Result<bool> {
    parse_sequence(w, spec)?.is_n_reduced(n, spec)
}

/// Every rotation of the reduced sequence is `n`-reduced.
pub fn is_cyclically_n_reduced(w: &Word, n: &BigInt, spec: &HnnSpec) -> Result<bool> {
    let c = parse_sequence(w, spec)?.to_cyclic(spec)?;
    Ok(c.pinches(spec)?.iter().all(|p| &p.cost >= n))
}

/// Britton reduction: collapses pinches until none is left.
///
/// Returns the pinch-free sequence and the summed pinch cost.
pub fn britton_reduce(w: &Word, spec: &HnnSpec) -> Result<(ReducedSequence, BigInt)> {
    let mut s = ReducedSequence::identity();
    let mut cost = BigInt::zero();
    for b in w.blocks() {
        if !b.gen.is_t() {
            let step = base_step(b.gen, &b.exp)?;
            let last = s.last_mut();
            *last = last.mul(&step, &spec.budget)?;
            continue;
        }
        let (d, n) = t_letters(&b.exp, spec)?;
        for _ in 0..n {
            let collapse = match s.tail.last() {
                Some((top, g)) if *top == -d => spec.pinch(*top, g, d)?,
                _ => None,
            };
            match collapse {
                Some((kind, e)) => {
                    s.tail.pop();
                    let image = match kind {
                        PinchKind::ConjugateA => spec.phi(&e),
                        PinchKind::ConjugateB => spec.phi_inv(&e),
                    };
                    cost += (spec.pinch_cost)(&e);
                    let last = s.last_mut();
                    *last = last.mul(&image, &spec.budget)?;
                }
                None => s.tail.push((d, BsElement::identity())),
            }
        }
    }
    Ok((s, cost))
}

pub fn is_trivial_in_g(w: &Word, spec: &HnnSpec) -> Result<bool> {
    Ok(britton_reduce(w, spec)?.0.is_identity())
}

/// `Some(i)` when `w = x^i` in `G`.
pub fn as_x_power(w: &Word, spec: &HnnSpec) -> Result<Option<BigInt>> {
    let (s, _) = britton_reduce(w, spec)?;
    if !s.tail.is_empty() {
        return Ok(None);
    }
    spec.in_a(&s.g0)
}

/// `Some(j)` when `w = y^j` in `G`.
pub fn as_y_power(w: &Word, spec: &HnnSpec) -> Result<Option<BigInt>> {
    let (s, _) = britton_reduce(w, spec)?;
    if !s.tail.is_empty() {
        return Ok(None);
    }
    Ok(spec.in_b(&s.g0))
}
