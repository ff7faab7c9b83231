//! Group presentations and the elementary Tietze transformations.
//!
//! Relators are stored letter by letter ([`RawWord`]) because the moves are
//! textual: Op1 inserts a cancelling pair and Op4 concatenates without
//! reducing.
//!
//! Script text format, one move per line (`#` starts a comment):
//!
//! ```text
//! op1 i=0 pos=4 gen=x sign=-1
//! op1inv i=0 pos=4
//! op2 i=1 rot=3
//! op3 i=1
//! op4 i=0 j=2
//! op5
//! op5inv gen=x_4
//! op5inv_subst gen=y i=1
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Gen, Letter, RawWord, Word};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<Gen>,
    pub relators: Vec<RawWord>,
}

impl Presentation {
    /// Builds a presentation, checking that every relator letter is a listed
    /// generator and that generators are distinct.
    pub fn new(generators: Vec<Gen>, relators: Vec<RawWord>) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            if generators[..k].contains(g) {
                return Err(Error::Parse(format!("generator {g} listed twice")));
            }
        }
        for (i, r) in relators.iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| !generators.contains(&l.gen)) {
                return Err(Error::Parse(format!(
                    "relator {i} uses {} which is not a generator",
                    l.gen
                )));
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    pub fn empty() -> Self {
        Presentation::default()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty() && self.relators.is_empty()
    }

    pub fn is_balanced(&self) -> bool {
        self.generators.len() == self.relators.len()
    }

    /// Relators after free reduction.
    pub fn reduced_relators(&self) -> Vec<Word> {
        self.relators.iter().map(RawWord::reduce).collect()
    }

    /// Sum of relator lengths.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(RawWord::len).sum()
    }

    fn relator(&self, i: usize) -> Result<&RawWord> {
        self.relators.get(i).ok_or_else(|| {
            Error::InvalidMove(format!(
                "relator index {i} out of range (presentation has {})",
                self.relators.len()
            ))
        })
    }

    fn fresh_aux(&self) -> Gen {
        let mut k = self.generators.len() as u32 + 1;
        while self.generators.contains(&Gen::Aux(k)) {
            k += 1;
        }
        Gen::Aux(k)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens:")?;
        for g in &self.generators {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        for r in &self.relators {
            writeln!(f, "rel: {r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut gens = None;
        let mut rels = Vec::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                if gens.is_some() {
                    return Err(Error::Parse("more than one `gens:` line".into()));
                }
                gens = Some(
                    rest.split_whitespace()
                        .map(Gen::from_str)
                        .collect::<Result<Vec<_>>>()?,
                );
            } else if let Some(rest) = line.strip_prefix("rel:") {
                rels.push(rest.parse::<RawWord>()?);
            } else {
                return Err(Error::Parse(format!("unexpected line `{line}`")));
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse("missing `gens:` line".into()))?;
        Presentation::new(gens, rels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TietzeMove {
    /// Insert `g^sign g^-sign` into relator `i` before letter `pos`.
    Op1 { i: usize, pos: usize, gen: Gen, sign: i8 },
    /// Delete the inverse pair at letters `pos, pos+1` of relator `i`.
    Op1Inv { i: usize, pos: usize },
    /// Cyclically permute relator `i`, moving its first `rot` letters to the end.
    Op2 { i: usize, rot: usize },
    /// Replace relator `i` by its inverse.
    Op3 { i: usize },
    /// Replace relator `i` by the concatenation `a_i a_j`.
    Op4 { i: usize, j: usize },
    /// Add a fresh generator `x_{r+1}` together with the relator `x_{r+1}`.
    Op5,
    /// Remove `gen` together with its single-letter relator.
    Op5Inv { gen: Gen },
    /// Remove `gen` together with relator `i`, which must read `gen · a` with
    /// `gen` absent from `a` and from every other relator.
    Op5InvSubst { gen: Gen, i: usize },
}

impl TietzeMove {
    pub fn is_op4(&self) -> bool {
        matches!(self, TietzeMove::Op4 { .. })
    }
}

impl fmt::Display for TietzeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TietzeMove::Op1 { i, pos, gen, sign } => {
                write!(f, "op1 i={i} pos={pos} gen={gen} sign={sign}")
            }
            TietzeMove::Op1Inv { i, pos } => write!(f, "op1inv i={i} pos={pos}"),
            TietzeMove::Op2 { i, rot } => write!(f, "op2 i={i} rot={rot}"),
            TietzeMove::Op3 { i } => write!(f, "op3 i={i}"),
            TietzeMove::Op4 { i, j } => write!(f, "op4 i={i} j={j}"),
            TietzeMove::Op5 => write!(f, "op5"),
            TietzeMove::Op5Inv { gen } => write!(f, "op5inv gen={gen}"),
            TietzeMove::Op5InvSubst { gen, i } => write!(f, "op5inv_subst gen={gen} i={i}"),
        }
    }
}

impl FromStr for TietzeMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts
            .next()
            .ok_or_else(|| Error::Parse("empty move".into()))?;
        let mut args = HashMap::new();
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{p}`")))?;
            if args.insert(k, v).is_some() {
                return Err(Error::Parse(format!("argument `{k}` given twice")));
            }
        }
        let num = |k: &str| -> Result<usize> {
            args.get(k)
                .ok_or_else(|| Error::Parse(format!("{kind}: missing `{k}=`")))?
                .parse()
                .map_err(|_| Error::Parse(format!("{kind}: `{k}` must be a non-negative integer")))
        };
        let gen = |k: &str| -> Result<Gen> {
            args.get(k)
                .ok_or_else(|| Error::Parse(format!("{kind}: missing `{k}=`")))?
                .parse()
        };
        let expected: &[&str] = match kind {
            "op1" => &["i", "pos", "gen", "sign"],
            "op1inv" => &["i", "pos"],
            "op2" => &["i", "rot"],
            "op3" => &["i"],
            "op4" => &["i", "j"],
            "op5" => &[],
            "op5inv" => &["gen"],
            "op5inv_subst" => &["gen", "i"],
            _ => return Err(Error::Parse(format!("unknown move `{kind}`"))),
        };
        if let Some(k) = args.keys().find(|k| !expected.contains(k)) {
            return Err(Error::Parse(format!("{kind}: unexpected argument `{k}`")));
        }
        Ok(match kind {
            "op1" => {
                let sign: i8 = args
                    .get("sign")
                    .ok_or_else(|| Error::Parse("op1: missing `sign=`".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("op1: bad sign".into()))?;
                if sign != 1 && sign != -1 {
                    return Err(Error::Parse("op1: sign must be 1 or -1".into()));
                }
                TietzeMove::Op1 {
                    i: num("i")?,
                    pos: num("pos")?,
                    gen: gen("gen")?,
                    sign,
                }
            }
            "op1inv" => TietzeMove::Op1Inv {
                i: num("i")?,
                pos: num("pos")?,
            },
            "op2" => TietzeMove::Op2 {
                i: num("i")?,
                rot: num("rot")?,
            },
            "op3" => TietzeMove::Op3 { i: num("i")? },
            "op4" => TietzeMove::Op4 {
                i: num("i")?,
                j: num("j")?,
            },
            "op5" => TietzeMove::Op5,
            "op5inv" => TietzeMove::Op5Inv { gen: gen("gen")? },
            _ => TietzeMove::Op5InvSubst {
                gen: gen("gen")?,
                i: num("i")?,
            },
        })
    }
}

/// Parses a script, one move per line. Blank lines and `#` comments are skipped.
pub fn parse_script(s: &str) -> Result<Vec<TietzeMove>> {
    let mut out = Vec::new();
    for (n, line) in s.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(
            line.parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?,
        );
    }
    Ok(out)
}

pub fn format_script(script: &[TietzeMove]) -> String {
    script.iter().map(|m| format!("{m}\n")).collect()
}

fn nonempty(r: RawWord, what: &str) -> Result<RawWord> {
    if r.is_empty() {
        Err(Error::InvalidMove(format!(
            "{what} would leave an empty relator"
        )))
    } else {
        Ok(r)
    }
}

pub fn apply_move(p: &Presentation, mv: &TietzeMove) -> Result<Presentation> {
    let mut out = p.clone();
    match *mv {
        TietzeMove::Op1 { i, pos, gen, sign } => {
            let r = p.relator(i)?;
            if pos > r.len() {
                return Err(Error::InvalidMove(format!(
                    "op1: position {pos} past the end of relator {i} (length {})",
                    r.len()
                )));
            }
            if !p.generators.contains(&gen) {
                return Err(Error::InvalidMove(format!("op1: {gen} is not a generator")));
            }
            let l = Letter::new(gen, sign);
            let mut v = r.letters().to_vec();
            v.splice(pos..pos, [l, l.inverse()]);
            out.relators[i] = RawWord::new(v);
        }
        TietzeMove::Op1Inv { i, pos } => {
            let r = p.relator(i)?;
            let v = r.letters();
            if pos + 1 >= v.len() || v[pos].inverse() != v[pos + 1] {
                return Err(Error::InvalidMove(format!(
                    "op1inv: no inverse pair at position {pos} of relator {i}"
                )));
            }
            let mut v = v.to_vec();
            v.drain(pos..pos + 2);
            out.relators[i] = nonempty(RawWord::new(v), "op1inv")?;
        }
        TietzeMove::Op2 { i, rot } => {
            out.relators[i] = p.relator(i)?.rotate_left(rot);
        }
        TietzeMove::Op3 { i } => {
            out.relators[i] = p.relator(i)?.inverse();
        }
        TietzeMove::Op4 { i, j } => {
            if i == j {
                return Err(Error::InvalidMove("op4: i and j must differ".into()));
            }
            let rj = p.relator(j)?;
            out.relators[i] = p.relator(i)?.concat(rj);
        }
        TietzeMove::Op5 => {
            let g = p.fresh_aux();
            out.generators.push(g);
            out.relators.push(RawWord::new(vec![Letter::new(g, 1)]));
        }
        TietzeMove::Op5Inv { gen } => {
            let single = RawWord::new(vec![Letter::new(gen, 1)]);
            let idx = p.relators.iter().position(|r| *r == single).ok_or_else(|| {
                Error::InvalidMove(format!("op5inv: no relator equal to {gen}"))
            })?;
            remove_generator(&mut out, gen, idx, "op5inv")?;
        }
        TietzeMove::Op5InvSubst { gen, i } => {
            let r = p.relator(i)?;
            let v = r.letters();
            if v.first() != Some(&Letter::new(gen, 1)) || v[1..].iter().any(|l| l.gen == gen) {
                return Err(Error::InvalidMove(format!(
                    "op5inv_subst: relator {i} does not read {gen} followed by a {gen}-free word"
                )));
            }
            remove_generator(&mut out, gen, i, "op5inv_subst")?;
        }
    }
    Ok(out)
}

fn remove_generator(p: &mut Presentation, gen: Gen, idx: usize, what: &str) -> Result<()> {
    let pos = p
        .generators
        .iter()
        .position(|&g| g == gen)
        .ok_or_else(|| Error::InvalidMove(format!("{what}: {gen} is not a generator")))?;
    if let Some(k) = p
        .relators
        .iter()
        .enumerate()
        .find(|&(k, r)| k != idx && r.contains_gen(gen))
        .map(|(k, _)| k)
    {
        return Err(Error::InvalidMove(format!(
            "{what}: {gen} still occurs in relator {k}"
        )));
    }
    p.generators.remove(pos);
    p.relators.remove(idx);
    Ok(())
}

/// Lower-bound bookkeeping for the area of a tracked word along a script:
/// Op4 can at most halve the area, every other move leaves it unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaLedger {
    pub tracked: Option<Word>,
    pub factor: BigRational,
    pub history: Vec<TietzeMove>,
}

impl AreaLedger {
    pub fn new(tracked: Option<Word>) -> Self {
        AreaLedger {
            tracked,
            factor: BigRational::one(),
            history: Vec::new(),
        }
    }

    pub fn record(&mut self, mv: &TietzeMove) {
        if mv.is_op4() {
            self.factor /= BigRational::from_integer(BigInt::from(2));
        }
        self.history.push(mv.clone());
    }

    pub fn op4_count(&self) -> usize {
        self.history.iter().filter(|m| m.is_op4()).count()
    }
}

pub fn replay(
    p: &Presentation,
    script: &[TietzeMove],
    ledger_word: Option<Word>,
) -> Result<(Presentation, AreaLedger)> {
    let mut cur = p.clone();
    let mut ledger = AreaLedger::new(ledger_word);
    for (step, mv) in script.iter().enumerate() {
        cur = apply_move(&cur, mv).map_err(|e| Error::Script {
            step,
            source: Box::new(e),
        })?;
        ledger.record(mv);
    }
    Ok((cur, ledger))
}

/// Moves per eliminated `y` letter are bounded by this constant; the script
/// length is at most `ELIMINATION_CONSTANT * total relator length`.
pub const ELIMINATION_CONSTANT: usize = 2;

/// Eliminates `y` from a presentation `({x, y, t}, {r_0, t^-1 x t y^-1, a})`
/// by substituting `y = t^-1 x t` letter by letter, then dropping `y` with the
/// now isolated relator.
pub fn eliminate_y(mu: &Presentation) -> Result<(Presentation, Vec<TietzeMove>)> {
    let gens = [Gen::X, Gen::Y, Gen::T];
    if mu.generators.len() != 3 || !gens.iter().all(|g| mu.generators.contains(g)) {
        return Err(Error::Shape("expected generators x, y, t".into()));
    }
    let t_rel: RawWord = "T x t Y".parse()?;
    let k = mu
        .relators
        .iter()
        .position(|r| *r == t_rel)
        .ok_or_else(|| Error::Shape("missing relator T x t Y".into()))?;
    if mu.relators.len() < 2 {
        return Err(Error::Shape("expected at least one relator besides T x t Y".into()));
    }

    let mut script = Vec::new();
    let mut cur = mu.clone();
    let mut push = |cur: &mut Presentation, mv: TietzeMove| -> Result<()> {
        *cur = apply_move(cur, &mv)?;
        script.push(mv);
        Ok(())
    };

    for i in (0..cur.relators.len()).filter(|&i| i != k) {
        let mut pos = 0;
        while pos < cur.relators[i].len() {
            let l = cur.relators[i].letters()[pos];
            if l.gen != Gen::Y {
                pos += 1;
                continue;
            }
            let len = cur.relators[i].len();
            // bring the y letter to the end
            if (pos + 1) % len != 0 {
                push(&mut cur, TietzeMove::Op2 { i, rot: pos + 1 })?;
            }
            // shape the t relator as y^-e t^-1 x^e t
            if l.sign > 0 {
                push(&mut cur, TietzeMove::Op2 { i: k, rot: 3 })?;
            } else {
                push(&mut cur, TietzeMove::Op3 { i: k })?;
            }
            push(&mut cur, TietzeMove::Op4 { i, j: k })?;
            push(&mut cur, TietzeMove::Op1Inv { i, pos: len - 1 })?;
            let new_len = cur.relators[i].len();
            let back = new_len - 3 - pos;
            if !back.is_multiple_of(new_len) {
                push(&mut cur, TietzeMove::Op2 { i, rot: back })?;
            }
            if l.sign > 0 {
                push(&mut cur, TietzeMove::Op2 { i: k, rot: 1 })?;
            } else {
                push(&mut cur, TietzeMove::Op3 { i: k })?;
            }
            pos += 3;
        }
    }
    // T x t Y  ->  y T X t, then drop y
    push(&mut cur, TietzeMove::Op3 { i: k })?;
    push(&mut cur, TietzeMove::Op5InvSubst { gen: Gen::Y, i: k })?;
    Ok((cur, script))
}
