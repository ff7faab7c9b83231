//! Exact arithmetic in the Baumslag-Solitar group `BS(1,2) = <x, y | y^-1 x y = x^2>`.
//!
//! An element is the affine map `s -> 2^-k s + a` with `a` in `Z[1/2]`;
//! `x = (1, 0)` and `y = (0, 1)`. The representation is faithful, so two words
//! are equal in the group exactly when their affine maps agree.
//!
//! The translation part is stored as a sparse sum of odd multiples of powers
//! of two. Conjugating `x` by `y^E` for a tower value `E` produces `2^E`,
//! which has far too many bits to write out, while the exponent `E` itself is
//! a modest integer.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::{Gen, Word};

/// Hard ceiling for any configured budget.
pub const MAX_BUDGET_BITS: u64 = 1 << 24;

/// Bit budget for intermediate integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_bits: 1 << 20 }
    }
}

impl Budget {
    pub fn new(max_bits: u64) -> Self {
        Budget {
            max_bits: max_bits.min(MAX_BUDGET_BITS),
        }
    }

    pub fn check(&self, what: &str, n: &BigInt) -> Result<()> {
        let bits = n.bits();
        if bits > self.max_bits {
            Err(Error::budget(what, bits, self.max_bits))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    exp: BigInt,
    coeff: BigInt,
}

/// Element of `Z[1/2]` as `Σ coeff_i · 2^exp_i`.
///
/// Canonical form: coefficients odd, exponents strictly increasing and
/// consecutive exponents more than `budget + 2` apart. Coefficients never
/// exceed the budget, so the lowest term is determined by the value modulo a
/// power of two and the form is unique for a fixed budget. Zero has no terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Dyadic {
    terms: Vec<Term>,
}

fn strip(mut coeff: BigInt, mut exp: BigInt) -> Option<Term> {
    if coeff.is_zero() {
        return None;
    }
    let tz = coeff.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        coeff >>= tz;
        exp += tz;
    }
    Some(Term { exp, coeff })
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            terms: strip(n.into(), BigInt::zero()).into_iter().collect(),
        }
    }

    /// `numerator / 2^exponent2`.
    pub fn from_fraction(numerator: impl Into<BigInt>, exponent2: u64) -> Self {
        Dyadic {
            terms: strip(numerator.into(), -BigInt::from(exponent2))
                .into_iter()
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalize(mut terms: Vec<Term>, budget: &Budget) -> Result<Self> {
        loop {
            terms.sort();
            let gap = BigInt::from(budget.max_bits + 2);
            let pos = terms
                .windows(2)
                .position(|w| &w[1].exp - &w[0].exp <= gap);
            let Some(i) = pos else { break };
            let hi = terms.remove(i + 1);
            let lo = terms.remove(i);
            let shift = (&hi.exp - &lo.exp).to_u64().expect("gap bounded");
            let coeff = lo.coeff + (hi.coeff << shift);
            if let Some(t) = strip(coeff, lo.exp) {
                terms.push(t);
            }
        }
        for t in &terms {
            budget.check("dyadic coefficient", &t.coeff)?;
            budget.check("dyadic exponent", &t.exp)?;
        }
        Ok(Dyadic { terms })
    }

    pub fn add(&self, other: &Dyadic, budget: &Budget) -> Result<Dyadic> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Dyadic::normalize(terms, budget)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp.clone(),
                    coeff: -&t.coeff,
                })
                .collect(),
        }
    }

    /// Multiplication by `2^k`.
    pub fn shift(&self, k: &BigInt) -> Dyadic {
        Dyadic {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: &t.exp + k,
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.terms.first().is_none_or(|t| !t.exp.is_negative())
    }

    /// The integer value, `None` if not an integer, budget error if the integer
    /// is too wide to write out.
    pub fn to_integer(&self, budget: &Budget) -> Result<Option<BigInt>> {
        if !self.is_integer() {
            return Ok(None);
        }
        let mut v = BigInt::zero();
        for t in &self.terms {
            let width = &t.exp + BigInt::from(t.coeff.bits());
            if width > BigInt::from(budget.max_bits) {
                return Err(Error::budget(
                    "materialized integer",
                    width.to_u64().unwrap_or(u64::MAX),
                    budget.max_bits,
                ));
            }
            v += &t.coeff << t.exp.to_u64().expect("bounded by budget");
        }
        Ok(Some(v))
    }

    /// `(numerator, exponent2)` with `value = numerator / 2^exponent2`, when
    /// that form fits in `max_bits`.
    pub fn as_fraction(&self, max_bits: u64) -> Option<(BigInt, u64)> {
        if self.is_zero() {
            return Some((BigInt::zero(), 0));
        }
        let low = &self.terms[0].exp;
        let q = if low.is_negative() {
            (-low).to_u64()?
        } else {
            0
        };
        let mut num = BigInt::zero();
        for t in &self.terms {
            let s = (&t.exp + BigInt::from(q)).to_u64()?;
            if s + t.coeff.bits() > max_bits {
                return None;
            }
            num += &t.coeff << s;
        }
        Some((num, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_fraction(4096) {
            Some((p, 0)) => write!(f, "{p}"),
            Some((p, q)) => write!(f, "{p}/2^{q}"),
            None => {
                for (i, t) in self.terms.iter().rev().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}*2^{}", t.coeff, t.exp)?;
                }
                Ok(())
            }
        }
    }
}

/// `s -> 2^-k s + a`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BsElement {
    pub a: Dyadic,
    pub k: BigInt,
}

impl BsElement {
    pub fn identity() -> Self {
        BsElement::default()
    }

    pub fn x_pow(i: impl Into<BigInt>) -> Self {
        BsElement {
            a: Dyadic::from_int(i),
            k: BigInt::zero(),
        }
    }

    pub fn y_pow(j: impl Into<BigInt>) -> Self {
        BsElement {
            a: Dyadic::zero(),
            k: j.into(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.k.is_zero()
    }

    /// `(a,k)·(b,m) = (a + 2^-k b, k + m)`.
    pub fn mul(&self, other: &BsElement, budget: &Budget) -> Result<BsElement> {
        let k = &self.k + &other.k;
        budget.check("y exponent", &k)?;
        let a = self.a.add(&other.a.shift(&-&self.k), budget)?;
        Ok(BsElement { a, k })
    }

    pub fn inverse(&self) -> BsElement {
        BsElement {
            a: self.a.shift(&self.k).neg(),
            k: -&self.k,
        }
    }

    /// `i` with `self = x^i`.
    pub fn in_x_subgroup(&self, budget: &Budget) -> Result<Option<BigInt>> {
        if !self.k.is_zero() {
            return Ok(None);
        }
        self.a.to_integer(budget)
    }

    /// `j` with `self = y^j`.
    pub fn in_y_subgroup(&self) -> Option<BigInt> {
        if self.a.is_zero() {
            Some(self.k.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for BsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.a.as_fraction(4096) {
            Some((p, q)) => write!(f, "bs({p}, {q}, {})", self.k),
            None => write!(f, "bs({}, {})", self.a, self.k),
        }
    }
}

/// Evaluates a word over `{x, y}` as an affine map.
pub fn bs_eval(w: &Word, budget: &Budget) -> Result<BsElement> {
    let mut acc = BsElement::identity();
    for b in w.blocks() {
        let step = match b.gen {
            Gen::X => BsElement::x_pow(b.exp.clone()),
            Gen::Y => BsElement::y_pow(b.exp.clone()),
            Gen::T => return Err(Error::StableLetter),
            Gen::Aux(_) => {
                return Err(Error::Shape(format!(
                    "generator {} is not in the Baumslag-Solitar group",
                    b.gen
                )))
            }
        };
        acc = acc.mul(&step, budget)?;
    }
    Ok(acc)
}

pub fn in_x_subgroup(e: &BsElement, budget: &Budget) -> Result<Option<BigInt>> {
    e.in_x_subgroup(budget)
}

pub fn in_y_subgroup(e: &BsElement) -> Option<BigInt> {
    e.in_y_subgroup()
}

/// Integer `k` with `y^i x^m y^j = x^k`, if one exists.
///
/// Under `x^y = y^-1 x y` the identity is `k = m·2^-i = m·2^j` with `i = -j`.
pub fn solitar_solve(i: &BigInt, m: &BigInt, j: &BigInt, budget: &Budget) -> Result<Option<BigInt>> {
    if !(i + j).is_zero() {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    if i.is_positive() {
        let tz = m.trailing_zeros().unwrap_or(0);
        match i.to_u64() {
            Some(s) if s <= tz => Ok(Some(m >> s)),
            _ => Ok(None),
        }
    } else {
        let s = (-i).to_u64().unwrap_or(u64::MAX);
        if s.saturating_add(m.bits()) > budget.max_bits {
            return Err(Error::budget("solitar power", s.saturating_add(m.bits()), budget.max_bits));
        }
        Ok(Some(m << s))
    }
}

/// Odd part and 2-adic valuation of a nonzero integer.
pub fn odd_part(n: &BigInt) -> (BigInt, u64) {
    let tz = n.trailing_zeros().unwrap_or(0);
    (n >> tz, tz)
}

/// Is `n` a (positive) power of two?
pub fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && odd_part(n).0.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn eval(s: &str) -> BsElement {
        bs_eval(&w(s), &Budget::default()).unwrap()
    }

    #[test]
    fn relator_holds() {
        assert_eq!(eval("Y x y"), BsElement::x_pow(2));
        assert_eq!(eval("Y x y"), eval("x^2"));
        assert_eq!(eval("Y x y X^2"), BsElement::identity());
        assert_eq!(eval(""), BsElement::identity());
        assert_eq!(eval("Y^2 x y^2"), BsElement::x_pow(4));
    }

    #[test]
    fn eval_rejects_t() {
        assert_eq!(bs_eval(&w("x t"), &Budget::default()), Err(Error::StableLetter));
    }

    #[test]
    fn composition_values() {
        let xy = eval("x y");
        assert_eq!(xy.a, Dyadic::from_int(1));
        assert_eq!(xy.k, BigInt::from(1));
        let yxy = eval("y x Y");
        assert_eq!(yxy, BsElement { a: Dyadic::from_fraction(1, 1), k: BigInt::zero() });
        assert_eq!(yxy.to_string(), "bs(1, 1, 0)");
    }

    #[test]
    fn subgroup_membership() {
        let b = Budget::default();
        assert_eq!(BsElement::x_pow(3).in_x_subgroup(&b).unwrap(), Some(BigInt::from(3)));
        assert_eq!(eval("y x Y").in_x_subgroup(&b).unwrap(), None);
        assert_eq!(BsElement::y_pow(-5).in_x_subgroup(&b).unwrap(), None);
        assert_eq!(BsElement::y_pow(7).in_y_subgroup(), Some(BigInt::from(7)));
        assert_eq!(BsElement::x_pow(1).in_y_subgroup(), None);
        assert_eq!(BsElement::identity().in_y_subgroup(), Some(BigInt::zero()));
    }

    #[test]
    fn solitar_examples() {
        let b = Budget::default();
        let s = |i: i64, m: i64, j: i64| {
            solitar_solve(&i.into(), &m.into(), &j.into(), &b).unwrap()
        };
        assert_eq!(s(-1, 1, 1), Some(BigInt::from(2)));
        assert_eq!(s(1, 4, -1), Some(BigInt::from(2)));
        assert_eq!(s(1, 1, -1), None);
        assert_eq!(s(2, 3, 1), None);
        assert_eq!(s(3, 0, -3), Some(BigInt::zero()));
    }

    #[test]
    fn sparse_translation_parts() {
        let b = Budget::default();
        // y^-E x y^E with E = 2^21 has a translation part 2^E
        let e = BigInt::one() << 21u32;
        let big = BsElement::y_pow(-&e)
            .mul(&BsElement::x_pow(1), &b)
            .unwrap()
            .mul(&BsElement::y_pow(e.clone()), &b)
            .unwrap();
        assert_eq!(big.a.num_terms(), 1);
        assert!(big.in_x_subgroup(&b).is_err());
        // [y^-E x y^E, x^3] is trivial without ever writing 2^E out
        let c = big
            .inverse()
            .mul(&BsElement::x_pow(-3), &b)
            .unwrap()
            .mul(&big, &b)
            .unwrap()
            .mul(&BsElement::x_pow(3), &b)
            .unwrap();
        assert!(c.is_identity());
        // mixed magnitudes stay as two terms
        let mixed = big.mul(&BsElement::x_pow(5), &b).unwrap();
        assert_eq!(mixed.a.num_terms(), 2);
        assert!(mixed.a.is_integer());
    }

    #[test]
    fn dyadic_canonical() {
        let b = Budget::default();
        let half = Dyadic::from_fraction(1, 1);
        let one = half.add(&half, &b).unwrap();
        assert_eq!(one, Dyadic::from_int(1));
        assert_eq!(Dyadic::from_fraction(6, 2), Dyadic::from_fraction(3, 1));
        assert!(Dyadic::from_int(5).add(&Dyadic::from_int(-5), &b).unwrap().is_zero());
        assert_eq!(Dyadic::from_fraction(3, 1).as_fraction(64), Some((BigInt::from(3), 1)));
    }

    #[test]
    fn budget_errors() {
        let small = Budget::new(64);
        let r = solitar_solve(&BigInt::from(-100), &BigInt::from(1), &BigInt::from(100), &small);
        assert!(r.unwrap_err().is_budget());
        let e = BsElement::y_pow(-200)
            .mul(&BsElement::x_pow(1), &small)
            .unwrap()
            .mul(&BsElement::y_pow(200), &small)
            .unwrap();
        assert!(e.in_x_subgroup(&small).unwrap_err().is_budget());
    }
}
