//! Exact area of short trivial words by search, and identity certificates.
//!
//! The search state is a freely reduced word. One step inserts a cyclic
//! conjugate of a relator or its inverse at some position and freely reduces;
//! the area of `w` is the least number of steps leading from `w` to the empty
//! word. Only insertions that cancel against the letter to their left are
//! tried; removing a boundary cell of a diagram is always such a step. Search is best-first on `steps + lower bound`, so with the zero bound
//! it is plain breadth-first search.
//!
//! For the Baumslag-Gersten relators an exact lower bound is available:
//! every cell of a reduced diagram lies in a `t`-corridor or a `y`-corridor,
//! there are no annuli, so the area is the least total corridor length over
//! non-crossing pairings of the boundary letters ([`corridor_area`]).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bs::{bs_eval, Budget};
use crate::error::{Error, Result};
use crate::hnn::{as_x_power, as_y_power, HnnSpec};
use crate::tietze::Presentation;
use crate::word::{free_reduce, CyclicWord, Gen, Letter, Word};

/// One factor `conj · r_rel^sign · conj^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertTerm {
    pub conj: Word,
    pub rel: usize,
    pub sign: i8,
}

impl fmt::Display for CertTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conj={} rel={} sign={}", self.conj, self.rel, self.sign)
    }
}

impl FromStr for CertTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("conj=")
            .ok_or_else(|| Error::Parse(format!("certificate line must start with conj=: `{s}`")))?;
        let (conj, rest) = rest
            .split_once(" rel=")
            .ok_or_else(|| Error::Parse(format!("missing rel= in `{s}`")))?;
        let (rel, sign) = rest
            .split_once(" sign=")
            .ok_or_else(|| Error::Parse(format!("missing sign= in `{s}`")))?;
        let rel = rel
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad relator index `{rel}`")))?;
        let sign = match sign.trim() {
            "1" | "+1" => 1,
            "-1" => -1,
            other => return Err(Error::Parse(format!("sign must be ±1, got `{other}`"))),
        };
        Ok(CertTerm {
            conj: conj.trim().parse()?,
            rel,
            sign,
        })
    }
}

/// `word = Π conj_k · r_k^{sign_k} · conj_k^-1` in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AreaCertificate {
    pub word: Word,
    pub terms: Vec<CertTerm>,
}

impl AreaCertificate {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// One term per line; the target word is not part of the file.
    pub fn to_text(&self) -> String {
        self.terms.iter().map(|t| format!("{t}\n")).collect()
    }

    pub fn parse_terms(word: Word, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            terms.push(
                line.parse()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?,
            );
        }
        Ok(AreaCertificate { word, terms })
    }
}

/// True iff the product of the terms freely reduces to the certified word.
pub fn check_certificate(c: &AreaCertificate, p: &Presentation) -> bool {
    let mut acc = Word::empty();
    for t in &c.terms {
        let Some(r) = p.relators.get(t.rel) else {
            return false;
        };
        if t.sign != 1 && t.sign != -1 {
            return false;
        }
        let r = r.reduce();
        let r = if t.sign < 0 { r.inverse() } else { r };
        acc = acc.mul(&t.conj).mul(&r).mul(&t.conj.inverse());
    }
    acc == c.word
}

/// Rewrites a word by relator applications while recording the certificate
/// that justifies each step.
#[derive(Clone, Debug)]
pub struct Rewriter<'a> {
    presentation: &'a Presentation,
    letters: Vec<Letter>,
    certificate: AreaCertificate,
}

impl<'a> Rewriter<'a> {
    pub fn new(presentation: &'a Presentation, word: &Word, limit: usize) -> Result<Self> {
        Ok(Rewriter {
            presentation,
            letters: word.to_letters(limit)?,
            certificate: AreaCertificate {
                word: word.clone(),
                terms: Vec::new(),
            },
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Replaces the `len` letters at `pos` by `replacement`; the quotient of
    /// old by new subword must be a cyclic conjugate of a relator or inverse.
    pub fn replace(&mut self, pos: usize, len: usize, replacement: &[Letter]) -> Result<()> {
        if pos + len > self.letters.len() {
            return Err(Error::InvalidMove(format!(
                "subword {pos}..{} outside word of length {}",
                pos + len,
                self.letters.len()
            )));
        }
        let mut quotient: Vec<Letter> = self.letters[pos..pos + len].to_vec();
        quotient.extend(replacement.iter().rev().map(|l| l.inverse()));
        let quotient = free_reduce(&quotient);
        let (rel, sign, head) = self.match_relator(&quotient).ok_or_else(|| {
            Error::InvalidMove(format!("{quotient} is not a cyclic conjugate of a relator"))
        })?;
        let prefix = free_reduce(&self.letters[..pos]);
        self.certificate.terms.push(CertTerm {
            conj: prefix.mul(&head.inverse()),
            rel,
            sign,
        });
        self.letters.splice(pos..pos + len, replacement.iter().copied());
        self.letters = free_reduce(&self.letters).to_letters(usize::MAX)?;
        Ok(())
    }

    /// Finds `r^sign = P Q` with `quotient = Q P`; returns `P`.
    fn match_relator(&self, quotient: &Word) -> Option<(usize, i8, Word)> {
        let q = quotient.to_letters(usize::MAX).ok()?;
        for (i, r) in self.presentation.relators.iter().enumerate() {
            for sign in [1i8, -1] {
                let r = if sign > 0 { r.reduce() } else { r.reduce().inverse() };
                let Ok(rl) = r.to_letters(usize::MAX) else {
                    continue;
                };
                if rl.len() != q.len() {
                    continue;
                }
                for k in 0..rl.len().max(1) {
                    if rl[k..].iter().chain(&rl[..k]).eq(q.iter()) {
                        return Some((i, sign, free_reduce(&rl[..k])));
                    }
                }
            }
        }
        None
    }

    /// The certificate so far; complete once the word has been rewritten to
    /// the empty word.
    pub fn finish(self) -> Result<AreaCertificate> {
        if !self.letters.is_empty() {
            return Err(Error::Shape(format!(
                "rewriting stopped at a nonempty word of length {}",
                self.letters.len()
            )));
        }
        Ok(self.certificate)
    }
}

#[derive(Clone, Debug)]
pub struct AreaQuery {
    pub word: Word,
    pub presentation: Presentation,
    pub max_area: u64,
    pub max_len: usize,
    /// Cap on distinct words visited.
    pub max_states: usize,
}

pub const DEFAULT_MAX_STATES: usize = 2_000_000;

impl AreaQuery {
    pub fn new(word: Word, presentation: Presentation, max_area: u64, max_len: usize) -> Self {
        AreaQuery {
            word,
            presentation,
            max_area,
            max_len,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

/// Search result. A miss records which bounds cut the search short; it is
/// never a proof that the word is nontrivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AreaOutcome {
    Found {
        area: u64,
        certificate: AreaCertificate,
    },
    NotFound {
        area_bound: bool,
        length_bound: bool,
        state_limit: bool,
    },
}

impl AreaOutcome {
    pub fn area(&self) -> Option<u64> {
        match self {
            AreaOutcome::Found { area, .. } => Some(*area),
            AreaOutcome::NotFound { .. } => None,
        }
    }
}

impl fmt::Display for AreaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AreaOutcome::Found { area, .. } => write!(f, "found {area}"),
            AreaOutcome::NotFound {
                area_bound,
                length_bound,
                state_limit,
            } => {
                let mut reasons = Vec::new();
                if *state_limit {
                    reasons.push("exceeds state limit");
                }
                if *length_bound {
                    reasons.push("exceeds length bound");
                }
                if *area_bound || reasons.is_empty() {
                    reasons.push("exceeds area bound");
                }
                write!(f, "not found within bounds ({})", reasons.join(", "))
            }
        }
    }
}

/// Admissible estimate of the remaining area of a trivial word.
/// `None` means the word cannot be filled at all.
pub trait LowerBound: Sync {
    fn lower_bound(&self, w: &[Letter]) -> Option<u64>;
}

/// The zero estimate; turns the search into breadth-first search.
pub struct NoBound;

impl LowerBound for NoBound {
    fn lower_bound(&self, _: &[Letter]) -> Option<u64> {
        Some(0)
    }
}

/// Exact area over the Baumslag-Gersten relators, see [`corridor_area`].
pub struct CorridorBound {
    pub spec: HnnSpec,
}

impl LowerBound for CorridorBound {
    fn lower_bound(&self, w: &[Letter]) -> Option<u64> {
        match corridor_area(w, &self.spec) {
            Ok(v) => v,
            // too large to analyse: zero is always admissible
            Err(_) => Some(0),
        }
    }
}

/// The corridor bound when every relator is, up to rotation and inversion,
/// `y^-1 x y x^-2` or `t^-1 x t y^-1` (and the first is present), otherwise
/// the zero bound.
pub fn bound_for(p: &Presentation) -> Box<dyn LowerBound> {
    let bs = CyclicWord::new(&"Y x y X^2".parse().expect("valid word"));
    let hnn = CyclicWord::new(&"T x t Y".parse().expect("valid word"));
    let mut has_bs = false;
    let mut has_hnn = false;
    for r in p.reduced_relators() {
        let c = CyclicWord::new(&r);
        let ci = CyclicWord::new(&r.inverse());
        if c == bs || ci == bs {
            has_bs = true;
        } else if c == hnn || ci == hnn {
            has_hnn = true;
        } else {
            return Box::new(NoBound);
        }
    }
    let uses_t = p.generators.contains(&Gen::T);
    if has_bs && (has_hnn || !uses_t) {
        Box::new(CorridorBound {
            spec: HnnSpec::default(),
        })
    } else {
        Box::new(NoBound)
    }
}

struct Conjugate {
    letters: Vec<Letter>,
    rel: usize,
    sign: i8,
    /// `P` with `r^sign = P Q` and `letters = Q P`.
    head: Word,
}

fn conjugates(p: &Presentation) -> Result<Vec<Conjugate>> {
    let mut out: Vec<Conjugate> = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        for sign in [1i8, -1] {
            let r = if sign > 0 { r.reduce() } else { r.reduce().inverse() };
            let rl = r.to_letters(1 << 16)?;
            for k in 0..rl.len() {
                let letters: Vec<Letter> = rl[k..].iter().chain(&rl[..k]).copied().collect();
                if out.iter().any(|c| c.letters == letters) {
                    continue;
                }
                out.push(Conjugate {
                    letters,
                    rel: i,
                    sign,
                    head: free_reduce(&rl[..k]),
                });
            }
        }
    }
    Ok(out)
}

fn insert_reduced(u: &[Letter], pos: usize, rho: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(u.len() + rho.len());
    out.extend_from_slice(&u[..pos]);
    for &l in rho.iter().chain(&u[pos..]) {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

struct Node {
    word: Vec<Letter>,
    g: u64,
    parent: Option<(usize, usize, usize)>,
}

/// Insertion point, conjugate index, resulting word and its bound (`None` when too long).
type Child = (usize, usize, Vec<Letter>, Option<Option<u64>>);

/// Least number of relator applications reducing `q.word` to the empty word,
/// searched best-first with the given admissible estimate.
pub fn min_area(q: &AreaQuery, bound: &dyn LowerBound) -> Result<AreaOutcome> {
    let conj = conjugates(&q.presentation)?;
    let start = match q.word.to_letters(q.max_len) {
        Ok(l) => l,
        Err(_) => {
            return Ok(AreaOutcome::NotFound {
                area_bound: false,
                length_bound: true,
                state_limit: false,
            })
        }
    };
    let mut area_bound = false;
    let mut length_bound = false;
    let Some(h0) = bound.lower_bound(&start) else {
        return Ok(AreaOutcome::NotFound {
            area_bound: true,
            length_bound: false,
            state_limit: false,
        });
    };
    if h0 > q.max_area {
        return Ok(AreaOutcome::NotFound {
            area_bound: true,
            length_bound: false,
            state_limit: false,
        });
    }

    let mut nodes = vec![Node {
        word: start.clone(),
        g: 0,
        parent: None,
    }];
    let mut index: HashMap<Vec<Letter>, usize> = HashMap::new();
    index.insert(start, 0);
    // (f, deeper first, insertion order)
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((h0, Reverse(0u64), 0usize)));

    while let Some(Reverse((_, _, id))) = heap.pop() {
        let (word, g) = (nodes[id].word.clone(), nodes[id].g);
        if word.is_empty() {
            return Ok(AreaOutcome::Found {
                area: g,
                certificate: witness(&nodes, &conj, id, &q.word),
            });
        }
        if g >= q.max_area {
            area_bound = true;
            continue;
        }
        // Some cell of a diagram has an edge e on the boundary, and removing
        // it is the insertion of a conjugate starting with e^-1 right after e.
        // Restricting to such insertions keeps the minimum exact.
        let room = q.max_len + word.len();
        let moves: Vec<(usize, usize)> = (1..=word.len())
            .flat_map(|p| {
                let before = word[p - 1].inverse();
                conj.iter()
                    .enumerate()
                    // at most |word| letters cancel, so long relators cannot fit
                    .filter(move |(_, c)| c.letters[0] == before && c.letters.len() <= room)
                    .map(move |(c, _)| (p, c))
            })
            .collect();
        let children: Vec<Child> = moves
            .par_iter()
            .map(|&(p, c)| {
                let v = insert_reduced(&word, p, &conj[c].letters);
                if v.len() > q.max_len {
                    return (p, c, v, None);
                }
                let h = bound.lower_bound(&v);
                (p, c, v, Some(h))
            })
            .collect();
        for (p, c, v, h) in children {
            let Some(h) = h else {
                length_bound = true;
                continue;
            };
            let Some(h) = h else { continue };
            if g + 1 + h > q.max_area {
                area_bound = true;
                continue;
            }
            match index.get(&v) {
                Some(&k) if nodes[k].g <= g + 1 => continue,
                Some(&k) => {
                    nodes[k].g = g + 1;
                    nodes[k].parent = Some((id, p, c));
                    heap.push(Reverse((g + 1 + h, Reverse(g + 1), k)));
                }
                None => {
                    if nodes.len() >= q.max_states {
                        return Ok(AreaOutcome::NotFound {
                            area_bound,
                            length_bound,
                            state_limit: true,
                        });
                    }
                    let k = nodes.len();
                    nodes.push(Node {
                        word: v.clone(),
                        g: g + 1,
                        parent: Some((id, p, c)),
                    });
                    index.insert(v, k);
                    heap.push(Reverse((g + 1 + h, Reverse(g + 1), k)));
                }
            }
        }
    }
    Ok(AreaOutcome::NotFound {
        area_bound,
        length_bound,
        state_limit: false,
    })
}

/// Each step `v = u_1 ρ u_2` multiplies by `u_1 ρ u_1^-1`, so the word is the
/// product of the inverse steps in order.
fn witness(nodes: &[Node], conj: &[Conjugate], mut id: usize, word: &Word) -> AreaCertificate {
    let mut terms = Vec::new();
    while let Some((parent, pos, c)) = nodes[id].parent {
        let prefix = free_reduce(&nodes[parent].word[..pos]);
        terms.push(CertTerm {
            conj: prefix.mul(&conj[c].head.inverse()),
            rel: conj[c].rel,
            sign: -conj[c].sign,
        });
        id = parent;
    }
    terms.reverse();
    AreaCertificate {
        word: word.clone(),
        terms,
    }
}

/// Bounds for the area of `w_1`, raised in turn until the search succeeds.
pub const W1_BOUNDS: [(u64, usize); 3] = [(16, 48), (32, 64), (64, 96)];

/// Area of `w_1 = w_{1,1}` over the base presentation, with its certificate.
pub fn area_w1() -> Result<(u64, AreaCertificate)> {
    let w = crate::family::make_w(1, 1)?.concrete()?;
    let mu0 = crate::family::make_mu0();
    let bound = bound_for(&mu0);
    for (max_area, max_len) in W1_BOUNDS {
        let q = AreaQuery::new(w.clone(), mu0.clone(), max_area, max_len);
        if let AreaOutcome::Found { area, certificate } = min_area(&q, bound.as_ref())? {
            return Ok((area, certificate));
        }
    }
    Err(Error::Shape("area of w_1 not found within the largest bounds".into()))
}

// ---------------------------------------------------------------------------
// Corridor decomposition

const MAX_CORRIDOR_TOKENS: usize = 256;

#[derive(Clone, Debug)]
enum Tok {
    X(BigInt),
    Y(i8),
}

fn toks_word(toks: &[Tok]) -> Word {
    Word::from_blocks(toks.iter().map(|t| match t {
        Tok::X(e) => (Gen::X, e.clone()),
        Tok::Y(s) => (Gen::Y, BigInt::from(*s)),
    }))
}

fn small(n: &BigInt) -> Result<u64> {
    n.abs()
        .to_u64()
        .filter(|&v| v < u64::MAX / 4)
        .ok_or_else(|| Error::budget("corridor length", n.bits(), 62))
}

/// Least number of cells filling a `BS(1,2)` word: every cell lies in a
/// `y`-corridor, `y^-1 x^s y` costs `|s|` and `y x^2s y^-1` costs `|s|`.
fn bs_area(toks: &[Tok], budget: &Budget) -> Result<Option<u64>> {
    let ys: Vec<usize> = (0..toks.len())
        .filter(|&i| matches!(toks[i], Tok::Y(_)))
        .collect();
    if ys.len() % 2 == 1 || !bs_eval(&toks_word(toks), budget)?.is_identity() {
        return Ok(None);
    }
    if ys.len() > MAX_CORRIDOR_TOKENS {
        return Err(Error::budget("corridor analysis", ys.len() as u64, MAX_CORRIDOR_TOKENS as u64));
    }
    let m = ys.len();
    // pair[a][b]: cost of corridor between y-letters a < b, including interior
    let mut memo: HashMap<(usize, usize), Option<u64>> = HashMap::new();
    fn span(
        a: usize,
        b: usize,
        ys: &[usize],
        toks: &[Tok],
        budget: &Budget,
        memo: &mut HashMap<(usize, usize), Option<u64>>,
    ) -> Result<Option<u64>> {
        // cheapest matching of the y-letters with indices a..b (exclusive)
        if a >= b {
            return Ok(Some(0));
        }
        if let Some(v) = memo.get(&(a, b)) {
            return Ok(*v);
        }
        let mut best: Option<u64> = None;
        let Tok::Y(sa) = toks[ys[a]] else { unreachable!() };
        let mut c = a + 1;
        while c < b {
            let Tok::Y(sc) = toks[ys[c]] else { unreachable!() };
            if sc == -sa {
                let inner = bs_eval(&toks_word(&toks[ys[a] + 1..ys[c]]), budget)?;
                let cost = match inner.in_x_subgroup(budget)? {
                    Some(s) if sa < 0 => Some(small(&s)?),
                    Some(s) if s.is_even() => Some(small(&s)? / 2),
                    _ => None,
                };
                if let Some(cost) = cost {
                    if let (Some(i), Some(r)) = (
                        span(a + 1, c, ys, toks, budget, memo)?,
                        span(c + 1, b, ys, toks, budget, memo)?,
                    ) {
                        let total = cost + i + r;
                        best = Some(best.map_or(total, |v| v.min(total)));
                    }
                }
            }
            c += 2;
        }
        memo.insert((a, b), best);
        Ok(best)
    }
    span(0, m, &ys, toks, budget, &mut memo)
}

/// Exact area of a word over `{y^-1 x y x^-2, t^-1 x t y^-1}`; `None` when the
/// word is not trivial in the group.
///
/// `t`-letters are paired by non-crossing corridors: `t^-1 u t` with
/// `u = x^s` costs `|s|` and looks like `y^s` from outside, `t u t^-1` with
/// `u = y^s` costs `|s|` and looks like `x^s`. What remains between the
/// corridors is filled in `BS(1,2)`.
pub fn corridor_area(w: &[Letter], spec: &HnnSpec) -> Result<Option<u64>> {
    if w.iter().any(|l| matches!(l.gen, Gen::Aux(_))) {
        return Ok(None);
    }
    let mut memo = HashMap::new();
    region_area(w, 0, w.len(), &[], spec, &mut memo)
}

type CorridorMemo = HashMap<(usize, usize), Option<(BigInt, u64)>>;

/// Corridor from the `t`-letter at `p` to the one at `q`: the exponent `s` of
/// its inner label and the cost of the corridor plus its interior.
fn corridor(
    w: &[Letter],
    p: usize,
    q: usize,
    spec: &HnnSpec,
    memo: &mut CorridorMemo,
) -> Result<Option<(BigInt, u64)>> {
    if let Some(v) = memo.get(&(p, q)) {
        return Ok(v.clone());
    }
    let inner = free_reduce(&w[p + 1..q]);
    let (s, tail) = if w[p].sign < 0 {
        (as_x_power(&inner, spec)?, Gen::X)
    } else {
        (as_y_power(&inner, spec)?, Gen::Y)
    };
    let out = match s {
        None => None,
        Some(s) => {
            let tail_toks = label_toks(tail, &-&s)?;
            region_area(w, p + 1, q, &tail_toks, spec, memo)?
                .map(|a| -> Result<_> { Ok((s.clone(), a + small(&s)?)) })
                .transpose()?
        }
    };
    memo.insert((p, q), out.clone());
    Ok(out)
}

fn label_toks(g: Gen, s: &BigInt) -> Result<Vec<Tok>> {
    if s.is_zero() {
        return Ok(Vec::new());
    }
    match g {
        Gen::X => Ok(vec![Tok::X(s.clone())]),
        _ => {
            let n = small(s)? as usize;
            if n > MAX_CORRIDOR_TOKENS {
                return Err(Error::budget("corridor label", s.bits(), 8));
            }
            let sign = if s.is_negative() { -1 } else { 1 };
            Ok(vec![Tok::Y(sign); n])
        }
    }
}

/// Area of the disc bounded by `w[a..b]` followed by `tail`.
fn region_area(
    w: &[Letter],
    a: usize,
    b: usize,
    tail: &[Tok],
    spec: &HnnSpec,
    memo: &mut CorridorMemo,
) -> Result<Option<u64>> {
    let mut search = Region {
        w,
        range: (a, b),
        tail,
        spec,
        picked: Vec::new(),
        best: None,
    };
    search.top_level(a, memo)?;
    Ok(search.best)
}

struct Region<'a> {
    w: &'a [Letter],
    range: (usize, usize),
    tail: &'a [Tok],
    spec: &'a HnnSpec,
    /// Outermost corridors chosen so far: `(p, q, s, cost)`.
    picked: Vec<(usize, usize, BigInt, u64)>,
    best: Option<u64>,
}

impl Region<'_> {
    /// Chooses the outermost corridors from position `from` on.
    fn top_level(&mut self, from: usize, memo: &mut CorridorMemo) -> Result<()> {
        let (w, b) = (self.w, self.range.1);
        let Some(p) = (from..b).find(|&i| w[i].gen == Gen::T) else {
            return self.finish();
        };
        for q in (p + 1..b).filter(|&q| w[q].gen == Gen::T && w[q].sign == -w[p].sign) {
            if let Some((s, cost)) = corridor(w, p, q, self.spec, memo)? {
                self.picked.push((p, q, s, cost));
                self.top_level(q + 1, memo)?;
                self.picked.pop();
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        let w = self.w;
        let mut toks = Vec::new();
        let mut cost = 0u64;
        let (mut i, end) = self.range;
        let mut k = 0;
        while i < end {
            if let Some((p, q, s, c)) = self.picked.get(k).filter(|c| c.0 == i) {
                cost += c;
                // seen from outside: t^-1 x^s t = y^s and t y^s t^-1 = x^s
                let g = if w[*p].sign < 0 { Gen::Y } else { Gen::X };
                toks.extend(label_toks(g, s)?);
                i = q + 1;
                k += 1;
                continue;
            }
            let l = w[i];
            match l.gen {
                Gen::X => toks.push(Tok::X(BigInt::from(l.sign))),
                Gen::Y => toks.push(Tok::Y(l.sign)),
                _ => return Ok(()),
            }
            i += 1;
        }
        toks.extend_from_slice(self.tail);
        if let Some(a) = bs_area(&toks, &self.spec.budget)? {
            let total = cost + a;
            if self.best.is_none_or(|b| total < b) {
                self.best = Some(total);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_mu0;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn bs_pres() -> Presentation {
        "gens: x y\nrel: Y x y X^2\n".parse().unwrap()
    }

    fn bfs(word: &str, p: &Presentation, max_area: u64, max_len: usize) -> Option<u64> {
        let q = AreaQuery::new(w(word), p.clone(), max_area, max_len);
        let out = min_area(&q, &NoBound).unwrap();
        if let AreaOutcome::Found { area, certificate } = &out {
            assert_eq!(certificate.len() as u64, *area);
            assert!(check_certificate(certificate, p));
        }
        out.area()
    }

    #[test]
    fn relators_have_area_one() {
        let mu0 = make_mu0();
        assert_eq!(bfs("Y x y X^2", &mu0, 4, 32), Some(1));
        assert_eq!(bfs("T x t Y", &mu0, 4, 32), Some(1));
        assert_eq!(bfs("1", &mu0, 4, 32), Some(0));
    }

    #[test]
    fn bs_word_area() {
        assert_eq!(bfs("Y^2 x y^2 X^4", &bs_pres(), 8, 64), Some(3));
        let toks = w("Y^2 x y^2 X^4").to_letters(100).unwrap();
        assert_eq!(corridor_area(&toks, &HnnSpec::default()).unwrap(), Some(3));
    }

    #[test]
    fn corridor_area_matches_search() {
        let mu0 = make_mu0();
        for s in [
            "Y x y X^2",
            "T x t Y",
            "T x^2 t Y^2",
            "T x t Y x T X t y X",
            "y x Y y X Y",
            "T Y x y t Y^2",
            "Y^2 x y^2 X^4",
        ] {
            let letters = w(s).to_letters(100).unwrap();
            let exact = corridor_area(&letters, &HnnSpec::default()).unwrap();
            assert_eq!(exact, bfs(s, &mu0, 6, 24), "{s}");
        }
        let nontrivial = w("x").to_letters(10).unwrap();
        assert_eq!(corridor_area(&nontrivial, &HnnSpec::default()).unwrap(), None);
    }

    #[test]
    fn certificate_checks() {
        let mu0 = make_mu0();
        let c = AreaCertificate {
            word: w("Y x y X^2"),
            terms: vec![CertTerm {
                conj: Word::empty(),
                rel: 0,
                sign: 1,
            }],
        };
        assert!(check_certificate(&c, &mu0));
        let mut bad = c.clone();
        bad.terms[0].conj = w("x");
        assert!(!check_certificate(&bad, &mu0));
        let text = c.to_text();
        assert_eq!(text, "conj=1 rel=0 sign=1\n");
        assert_eq!(AreaCertificate::parse_terms(c.word.clone(), &text).unwrap(), c);
    }

    #[test]
    fn rewriter_records_steps() {
        let bs = bs_pres();
        let word = w("Y x y X^2");
        let mut r = Rewriter::new(&bs, &word, 100).unwrap();
        let x2y: Vec<Letter> = w("x^2 Y").to_letters(10).unwrap();
        r.replace(0, 2, &x2y).unwrap();
        assert!(r.letters().is_empty());
        let cert = r.finish().unwrap();
        assert!(check_certificate(&cert, &bs));
    }

    #[test]
    fn search_reports_bounds() {
        let mu0 = make_mu0();
        let q = AreaQuery::new(w("x"), mu0, 2, 12);
        match min_area(&q, &NoBound).unwrap() {
            AreaOutcome::NotFound { area_bound, .. } => assert!(area_bound),
            other => panic!("unexpected {other}"),
        }
    }
}
