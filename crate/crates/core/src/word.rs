//! Free-group words over the alphabet `{x, y, t}` in run-length form.
//!
//! Exponents are arbitrary-precision integers because the family words carry
//! tower-sized powers of `y`. A word is always stored freely reduced: no block
//! has exponent zero and adjacent blocks have distinct generators.
//!
//! Text format: whitespace separated tokens `g` or `g^k` with `g` one of
//! `x y t` (lowercase) or `X Y T` (uppercase, meaning the inverse letter). The
//! exponent `k` is a nonzero decimal integer, or `Em` for the tower value
//! `E_m`. Generators introduced by Tietze moves are written `x_4`, `X_4`. The
//! empty word is written `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::tower;

/// Largest tower level that may be materialized as a concrete exponent.
pub const MAX_CONCRETE_TOWER: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    X,
    Y,
    T,
    /// Fresh generator `x_k` added by Op5.
    Aux(u32),
}

impl Gen {
    pub fn is_t(self) -> bool {
        self == Gen::T
    }

    fn write(self, f: &mut fmt::Formatter<'_>, inverse: bool) -> fmt::Result {
        let c = match self {
            Gen::X | Gen::Aux(_) => 'x',
            Gen::Y => 'y',
            Gen::T => 't',
        };
        let c = if inverse { c.to_ascii_uppercase() } else { c };
        match self {
            Gen::Aux(k) => write!(f, "{c}_{k}"),
            _ => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}

impl FromStr for Gen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (g, inv) = parse_gen(s)?;
        if inv {
            return Err(Error::Parse(format!("generator name `{s}` must be lowercase")));
        }
        Ok(g)
    }
}

/// A single letter `g^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: Gen, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "letter sign must be ±1");
        Letter { gen, sign }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            sign: -self.sign,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.gen.write(f, self.sign < 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub gen: Gen,
    pub exp: BigInt,
}

/// A freely reduced word in run-length form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    blocks: Vec<Block>,
}

impl Word {
    pub fn empty() -> Self {
        Word { blocks: Vec::new() }
    }

    pub fn gen_pow(gen: Gen, exp: impl Into<BigInt>) -> Self {
        Word::from_blocks([(gen, exp.into())])
    }

    pub fn letter(l: Letter) -> Self {
        Word::gen_pow(l.gen, l.sign as i64)
    }

    /// Builds the reduced word of an arbitrary block sequence.
    pub fn from_blocks<I>(blocks: I) -> Self
    where
        I: IntoIterator<Item = (Gen, BigInt)>,
    {
        let mut w = Word::empty();
        for (gen, exp) in blocks {
            w.push(gen, exp);
        }
        w
    }

    fn push(&mut self, gen: Gen, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some(top) = self.blocks.last_mut() {
            if top.gen == gen {
                top.exp += exp;
                if top.exp.is_zero() {
                    self.blocks.pop();
                }
                return;
            }
        }
        self.blocks.push(Block { gen, exp });
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for b in &other.blocks {
            w.push(b.gen, b.exp.clone());
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            blocks: self
                .blocks
                .iter()
                .rev()
                .map(|b| Block {
                    gen: b.gen,
                    exp: -&b.exp,
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// `y^{-1} x y` in the convention `x^y = y^{-1} x y`.
    pub fn conjugate_by(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    /// Letter length `l(w)`.
    pub fn length(&self) -> BigInt {
        self.blocks.iter().map(|b| b.exp.abs()).sum()
    }

    /// Letter length as a machine integer, for words that are small enough to
    /// be handled letter by letter.
    pub fn len_letters(&self) -> Option<usize> {
        self.length().to_usize()
    }

    /// Number of `t^{±1}` letters, `l_t(w)`.
    pub fn count_t(&self) -> BigInt {
        self.blocks
            .iter()
            .filter(|b| b.gen.is_t())
            .map(|b| b.exp.abs())
            .sum()
    }

    pub fn contains_t(&self) -> bool {
        self.blocks.iter().any(|b| b.gen.is_t())
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        self.blocks.iter().map(|b| b.gen)
    }

    /// Expands into single letters. Fails when the word is longer than `limit`.
    pub fn to_letters(&self, limit: usize) -> Result<Vec<Letter>> {
        match self.len_letters() {
            Some(n) if n <= limit => {}
            _ => {
                return Err(Error::budget(
                    "letter expansion",
                    self.length().bits(),
                    limit as u64,
                ))
            }
        }
        let mut out = Vec::new();
        for b in &self.blocks {
            let sign = if b.exp.is_negative() { -1 } else { 1 };
            let n = b.exp.abs().to_usize().unwrap_or(0);
            out.extend(std::iter::repeat_n(Letter::new(b.gen, sign), n));
        }
        Ok(out)
    }

    /// Splits after the first `pos` letters.
    pub fn split_at(&self, pos: &BigInt) -> Option<(Word, Word)> {
        if pos.is_negative() || pos > &self.length() {
            return None;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut remaining = pos.clone();
        for b in &self.blocks {
            let n = b.exp.abs();
            if remaining.is_zero() {
                right.push((b.gen, b.exp.clone()));
            } else if remaining >= n {
                remaining -= &n;
                left.push((b.gen, b.exp.clone()));
            } else {
                let head = if b.exp.is_negative() {
                    -remaining.clone()
                } else {
                    remaining.clone()
                };
                let tail = &b.exp - &head;
                left.push((b.gen, head));
                right.push((b.gen, tail));
                remaining = BigInt::zero();
            }
        }
        Some((Word::from_blocks(left), Word::from_blocks(right)))
    }

    /// Cyclically reduced core: strips matching first/last blocks.
    pub fn cyclic_core(&self) -> Word {
        let mut blocks = self.blocks.clone();
        loop {
            if blocks.len() < 2 {
                return Word { blocks };
            }
            let first = blocks[0].gen;
            let last = blocks[blocks.len() - 1].gen;
            if first != last {
                return Word { blocks };
            }
            // merge the wrap: g^a ... g^b is conjugate to ... g^{a+b}
            let head = blocks.remove(0);
            let tail = blocks.pop().expect("len >= 2");
            let merged = head.exp + tail.exp;
            let mut w = Word::from_blocks(blocks.into_iter().map(|b| (b.gen, b.exp)));
            w.push(head.gen, merged);
            blocks = w.blocks;
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.blocks.len() < 2 || self.blocks[0].gen != self.blocks[self.blocks.len() - 1].gen
    }

    /// Moves the first `k` letters to the end and reduces.
    pub fn rotate_letters(&self, k: &BigInt) -> Option<Word> {
        let (a, b) = self.split_at(k)?;
        Some(b.mul(&a))
    }

    /// All letter-level rotations of the cyclically reduced core.
    pub fn cyclic_permutations(&self) -> Vec<Word> {
        let core = self.cyclic_core();
        if core.is_empty() {
            return vec![Word::empty()];
        }
        let n = core
            .len_letters()
            .expect("cyclic_permutations needs a word of machine-size length");
        (0..n)
            .map(|k| {
                core.rotate_letters(&BigInt::from(k))
                    .expect("rotation inside word")
            })
            .collect()
    }
}

/// Free reduction of a raw letter sequence.
pub fn free_reduce(letters: &[Letter]) -> Word {
    Word::from_blocks(letters.iter().map(|l| (l.gen, BigInt::from(l.sign))))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "1");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            b.gen.write(f, b.exp.is_negative())?;
            let a = b.exp.abs();
            if !a.is_one() {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<SymWord>()?.materialize()
    }
}

/// Cyclic word compared up to rotation of its cyclically reduced core.
#[derive(Clone, Debug)]
pub struct CyclicWord {
    representative: Word,
}

impl CyclicWord {
    pub fn new(w: &Word) -> Self {
        CyclicWord {
            representative: w.cyclic_core(),
        }
    }

    pub fn representative(&self) -> &Word {
        &self.representative
    }

    /// Block rotation that is lexicographically least; with the wrap merged
    /// the block sequence determines the cyclic word.
    fn canonical(&self) -> Vec<Block> {
        let b = &self.representative.blocks;
        if b.is_empty() {
            return Vec::new();
        }
        (0..b.len())
            .map(|i| {
                let mut r = b[i..].to_vec();
                r.extend_from_slice(&b[..i]);
                r
            })
            .min()
            .expect("nonempty")
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.representative.length() == other.representative.length()
            && self.canonical() == other.canonical()
    }
}

impl Eq for CyclicWord {}

// ---------------------------------------------------------------------------
// Symbolic exponents

/// Block exponent that is either concrete or a signed tower value `±E_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exponent {
    Int(BigInt),
    Tower { level: u32, negative: bool },
}

impl Exponent {
    pub fn tower(level: u32, negative: bool) -> Self {
        Exponent::Tower { level, negative }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Exponent::Int(n) => n.is_negative(),
            Exponent::Tower { negative, .. } => *negative,
        }
    }

    pub fn neg(&self) -> Exponent {
        match self {
            Exponent::Int(n) => Exponent::Int(-n),
            Exponent::Tower { level, negative } => Exponent::Tower {
                level: *level,
                negative: !negative,
            },
        }
    }

    /// Concrete value when the tower level is at most `max_level`.
    pub fn value(&self, max_level: u32) -> Result<BigInt> {
        match self {
            Exponent::Int(n) => Ok(n.clone()),
            Exponent::Tower { level, negative } => {
                if *level > max_level {
                    return Err(Error::budget(
                        format!("tower exponent E{level}"),
                        tower_bits(*level),
                        tower_bits(max_level),
                    ));
                }
                let v = tower(*level).expect("level checked");
                Ok(if *negative { -v } else { v })
            }
        }
    }
}

fn tower_bits(level: u32) -> u64 {
    // bits of E_level: E_0 = 1 has one bit, E_{k+1} = 2^{E_k} has E_k + 1 bits
    match level {
        0 => 1,
        1..=5 => tower(level - 1).and_then(|v| v.to_u64()).unwrap_or(u64::MAX) + 1,
        _ => u64::MAX,
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Int(n) => write!(f, "{n}"),
            Exponent::Tower { level, negative } => {
                write!(f, "{}E{level}", if *negative { "-" } else { "" })
            }
        }
    }
}

/// Word whose blocks may carry tower exponents that are never materialized.
///
/// Blocks are merged only when both exponents are concrete; symbolic blocks of
/// the same generator stay adjacent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymWord {
    blocks: Vec<(Gen, Exponent)>,
}

/// `constant + Σ coeff·E_level`, used for lengths of symbolic words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TowerPoly {
    pub constant: BigInt,
    pub towers: BTreeMap<u32, BigInt>,
}

impl TowerPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        TowerPoly {
            constant: c.into(),
            towers: BTreeMap::new(),
        }
    }

    pub fn add_tower(&mut self, level: u32, coeff: impl Into<BigInt>) {
        let e = self.towers.entry(level).or_insert_with(BigInt::zero);
        *e += coeff.into();
        if e.is_zero() {
            self.towers.remove(&level);
        }
    }

    pub fn value(&self, max_level: u32) -> Result<BigInt> {
        let mut v = self.constant.clone();
        for (&level, c) in &self.towers {
            v += c * Exponent::tower(level, false).value(max_level)?;
        }
        Ok(v)
    }
}

impl fmt::Display for TowerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (level, c) in self.towers.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "E{level}")?;
            } else {
                write!(f, "{c}*E{level}")?;
            }
        }
        if first || !self.constant.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

impl SymWord {
    pub fn new() -> Self {
        SymWord::default()
    }

    pub fn push(&mut self, gen: Gen, exp: Exponent) {
        if let Exponent::Int(n) = &exp {
            if n.is_zero() {
                return;
            }
            if let Some((g, Exponent::Int(top))) = self.blocks.last_mut() {
                if *g == gen {
                    *top += n;
                    if top.is_zero() {
                        self.blocks.pop();
                    }
                    return;
                }
            }
        }
        if let (Exponent::Tower { level, negative }, Some((g, Exponent::Tower { level: l2, negative: n2 }))) =
            (&exp, self.blocks.last())
        {
            if *g == gen && level == l2 && negative != n2 {
                self.blocks.pop();
                return;
            }
        }
        self.blocks.push((gen, exp));
    }

    pub fn push_int(&mut self, gen: Gen, exp: i64) {
        self.push(gen, Exponent::Int(BigInt::from(exp)));
    }

    pub fn append(&mut self, other: &SymWord) {
        for (g, e) in &other.blocks {
            self.push(*g, e.clone());
        }
    }

    pub fn mul(&self, other: &SymWord) -> SymWord {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> SymWord {
        let mut w = SymWord::new();
        for (g, e) in self.blocks.iter().rev() {
            w.push(*g, e.neg());
        }
        w
    }

    pub fn blocks(&self) -> &[(Gen, Exponent)] {
        &self.blocks
    }

    pub fn from_word(w: &Word) -> SymWord {
        let mut s = SymWord::new();
        for b in w.blocks() {
            s.push(b.gen, Exponent::Int(b.exp.clone()));
        }
        s
    }

    pub fn is_concrete(&self) -> bool {
        self.blocks
            .iter()
            .all(|(_, e)| matches!(e, Exponent::Int(_)))
    }

    /// Concrete word; tower exponents above level 4 are a budget error.
    pub fn materialize(&self) -> Result<Word> {
        self.materialize_up_to(MAX_CONCRETE_TOWER)
    }

    pub fn materialize_up_to(&self, max_level: u32) -> Result<Word> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (g, e) in &self.blocks {
            blocks.push((*g, e.value(max_level)?));
        }
        Ok(Word::from_blocks(blocks))
    }

    pub fn length(&self) -> TowerPoly {
        self.measure(|_| true)
    }

    pub fn count_t(&self) -> TowerPoly {
        self.measure(|g| g.is_t())
    }

    fn measure(&self, keep: impl Fn(Gen) -> bool) -> TowerPoly {
        let mut p = TowerPoly::default();
        for (g, e) in &self.blocks {
            if !keep(*g) {
                continue;
            }
            match e {
                Exponent::Int(n) => p.constant += n.abs(),
                Exponent::Tower { level, .. } => p.add_tower(*level, 1),
            }
        }
        p
    }
}

impl fmt::Display for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            g.write(f, e.is_negative())?;
            match e {
                Exponent::Int(n) => {
                    let a = n.abs();
                    if !a.is_one() {
                        write!(f, "^{a}")?;
                    }
                }
                Exponent::Tower { level, .. } => write!(f, "^E{level}")?,
            }
        }
        Ok(())
    }
}

fn parse_gen(s: &str) -> Result<(Gen, bool)> {
    let mut chars = s.chars();
    let c = chars
        .next()
        .ok_or_else(|| Error::Parse("empty generator".into()))?;
    let inverse = c.is_ascii_uppercase();
    let rest: &str = chars.as_str();
    let base = match c.to_ascii_lowercase() {
        'x' => Gen::X,
        'y' => Gen::Y,
        't' => Gen::T,
        _ => return Err(Error::Parse(format!("unknown generator `{s}`"))),
    };
    if rest.is_empty() {
        return Ok((base, inverse));
    }
    match (base, rest.strip_prefix('_')) {
        (Gen::X, Some(idx)) => idx
            .parse::<u32>()
            .map(|k| (Gen::Aux(k), inverse))
            .map_err(|_| Error::Parse(format!("bad generator index in `{s}`"))),
        _ => Err(Error::Parse(format!("unknown generator `{s}`"))),
    }
}

fn parse_token(tok: &str) -> Result<(Gen, Exponent)> {
    let (gs, es) = match tok.split_once('^') {
        Some((g, e)) => (g, Some(e)),
        None => (tok, None),
    };
    let (gen, inverse) = parse_gen(gs)?;
    let exp = match es {
        None => Exponent::Int(BigInt::one()),
        Some(e) => {
            let (neg, body) = match e.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, e),
            };
            if let Some(level) = body.strip_prefix('E') {
                let level = level
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad tower literal in `{tok}`")))?;
                Exponent::Tower {
                    level,
                    negative: neg,
                }
            } else {
                let n: BigInt = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                if n.is_zero() {
                    return Err(Error::Parse(format!("zero exponent in `{tok}`")));
                }
                Exponent::Int(n)
            }
        }
    };
    Ok((gen, if inverse { exp.neg() } else { exp }))
}

impl FromStr for SymWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = SymWord::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (g, e) = parse_token(tok)?;
            w.push(g, e);
        }
        Ok(w)
    }
}

/// Letter sequence kept exactly as written, without free reduction.
///
/// Tietze moves act on relators letter by letter (Op1 inserts a cancelling
/// pair), so presentations store their relators in this form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawWord(pub Vec<Letter>);

/// Largest raw word the text parser will expand.
pub const MAX_RAW_LETTERS: usize = 1 << 24;

impl RawWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        RawWord(letters)
    }

    pub fn from_word(w: &Word) -> Result<Self> {
        Ok(RawWord(w.to_letters(MAX_RAW_LETTERS)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reduce(&self) -> Word {
        free_reduce(&self.0)
    }

    pub fn inverse(&self) -> RawWord {
        RawWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Moves the first `k mod len` letters to the end.
    pub fn rotate_left(&self, k: usize) -> RawWord {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        RawWord(v)
    }

    pub fn concat(&self, other: &RawWord) -> RawWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        RawWord(v)
    }

    pub fn contains_gen(&self, g: Gen) -> bool {
        self.0.iter().any(|l| l.gen == g)
    }
}

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            l.gen.write(f, l.sign < 0)?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for RawWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (g, e) = parse_token(tok)?;
            let e = e.value(MAX_CONCRETE_TOWER)?;
            let n = e
                .abs()
                .to_usize()
                .filter(|&n| n + out.len() <= MAX_RAW_LETTERS)
                .ok_or_else(|| Error::budget("raw word", e.bits(), MAX_RAW_LETTERS as u64))?;
            let sign = if e.is_negative() { -1 } else { 1 };
            out.extend(std::iter::repeat_n(Letter::new(g, sign), n));
        }
        Ok(RawWord(out))
    }
}

/// Shortlex order on letter sequences, used for deterministic tie-breaking.
pub fn shortlex(a: &Word, b: &Word) -> Ordering {
    a.length().cmp(&b.length()).then_with(|| a.cmp(b))
}
