//! Symmetrized sets of cyclic sequences and the metric small-cancellation
//! condition `C'(λ, N)` over the HNN extension.
//!
//! Pieces are modelled by `t`-cables: the `k`-th `t`-letter of `p` is joined
//! to the `k`-th `t`-letter of `p'` by a band of `|j_k| < N` cells. A band
//! with label `j` turns `t^-1` into `y^j t^-1 x^-j` and `t` into
//! `x^j t y^-j`, so writing `(L_k, R_k)` for these outer factors the base
//! elements must satisfy `R_k c_k L_{k+1} = c'_k`. Each label therefore
//! determines the next one, and `p = L_1 p' R_L`.
//!
//! Two backends evaluate the link equation: concrete `BS(1,2)` arithmetic
//! ([`ConcreteBands`]) and exponents `a + b·E_n` kept symbolic
//! ([`SymbolicBands`]) for relators whose base elements are powers of `x`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bs::BsElement;
use crate::error::{Error, Result};
use crate::hnn::{parse_sequence, HnnSpec};
use crate::word::{Exponent, Gen, SymWord, Word};

/// Initial band labels tried: `|j| <= LABEL_WINDOW`, plus every label that
/// the first link equation pins down.
pub const LABEL_WINDOW: i64 = 8;

/// Scan range for labels solving `c' = 2^j c`.
const RATIO_SCAN: i64 = 64;

/// Arithmetic needed to follow a cable.
pub trait BandAlgebra: Sync {
    type Elem: Clone + PartialEq + Send + Sync + fmt::Display;
    type Label: Clone + PartialEq + Send + Sync + fmt::Display;

    fn label(&self, k: i64) -> Self::Label;

    /// `|j| < N`.
    fn is_short(&self, j: &Self::Label) -> bool;

    /// Label of the next band: the exponent of `c^-1 R^-1 c'` where `R` comes
    /// from the band at `t^d_in` with label `j`, provided it lies in `<x>`
    /// (next letter `t`) or `<y>` (next letter `t^-1`).
    fn link(
        &self,
        c: &Self::Elem,
        c2: &Self::Elem,
        d_in: i8,
        j: &Self::Label,
        d_out: i8,
    ) -> Result<Option<Self::Label>>;

    /// Labels outside the window that make the first link solvable.
    fn pinned(&self, c: &Self::Elem, c2: &Self::Elem, d_in: i8, d_out: i8)
        -> Result<Vec<Self::Label>>;
}

/// `BS(1,2)` arithmetic with `N` a concrete integer.
pub struct ConcreteBands {
    pub spec: HnnSpec,
    pub n: BigInt,
}

impl BandAlgebra for ConcreteBands {
    type Elem = BsElement;
    type Label = BigInt;

    fn label(&self, k: i64) -> BigInt {
        BigInt::from(k)
    }

    fn is_short(&self, j: &BigInt) -> bool {
        j.abs() < self.n
    }

    fn link(
        &self,
        c: &BsElement,
        c2: &BsElement,
        d_in: i8,
        j: &BigInt,
        d_out: i8,
    ) -> Result<Option<BigInt>> {
        propagate_band(c, c2, d_in, j, d_out, &self.spec)
    }

    fn pinned(&self, c: &BsElement, c2: &BsElement, d_in: i8, d_out: i8) -> Result<Vec<BigInt>> {
        let b = &self.spec.budget;
        let mut out = Vec::new();
        match (d_in, d_out) {
            // c^-1 x^j c' in <y> forces j = a - a'
            (-1, -1) => {
                if let Some(j) = c.a.add(&c2.a.neg(), b)?.to_integer(b)? {
                    out.push(j);
                }
            }
            // c^-1 y^j c' in <x> forces j = k - k'
            (1, 1) => out.push(&c.k - &c2.k),
            // c^-1 y^j c' in <y> needs a' = 2^j a
            (1, -1) => {
                for k in -RATIO_SCAN..=RATIO_SCAN {
                    let j = BigInt::from(k);
                    if self.link(c, c2, d_in, &j, d_out)?.is_some() {
                        out.push(j);
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }
}

/// Carries a band of label `j` at `t^d_in` across the base elements `g`
/// (on `p`) and `g2` (on `p'`); returns the label of the band at the next
/// letter `t^d_out`, if the cable continues.
pub fn propagate_band(
    g: &BsElement,
    g2: &BsElement,
    d_in: i8,
    j: &BigInt,
    d_out: i8,
    spec: &HnnSpec,
) -> Result<Option<BigInt>> {
    let r_inv = if d_in < 0 {
        BsElement::x_pow(j.clone())
    } else {
        BsElement::y_pow(j.clone())
    };
    let m = g.inverse().mul(&r_inv, &spec.budget)?.mul(g2, &spec.budget)?;
    if d_out > 0 {
        m.in_x_subgroup(&spec.budget)
    } else {
        Ok(m.in_y_subgroup())
    }
}

/// `a + b·E` with small integer coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SymInt {
    pub a: i64,
    pub b: i64,
}

/// Coefficients stay below this so that `a + b·E_n` is a faithful encoding
/// for every `n >= 4`.
const SYM_COEFF_LIMIT: i64 = 1 << 14;

impl SymInt {
    pub fn int(a: i64) -> Self {
        SymInt { a, b: 0 }
    }

    pub fn tower(b: i64) -> Self {
        SymInt { a: 0, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn checked(a: i64, b: i64) -> Result<Self> {
        if a.unsigned_abs() >= SYM_COEFF_LIMIT.unsigned_abs() || b.unsigned_abs() >= SYM_COEFF_LIMIT.unsigned_abs() {
            return Err(Error::Symbolic(format!(
                "coefficient of {a} + {b}*E too large for the symbolic encoding"
            )));
        }
        Ok(SymInt { a, b })
    }

    pub fn checked_add(self, o: SymInt) -> Result<SymInt> {
        SymInt::checked(self.a + o.a, self.b + o.b)
    }

    pub fn checked_sub(self, o: SymInt) -> Result<SymInt> {
        SymInt::checked(self.a - o.a, self.b - o.b)
    }

    /// `2^k · self` when it has integer coefficients.
    fn scale_pow2(self, k: i64) -> Option<SymInt> {
        if k >= 0 {
            if k >= 62 {
                return (self.a == 0 && self.b == 0).then_some(self);
            }
            let f = 1i64 << k;
            let (a, b) = (self.a.checked_mul(f)?, self.b.checked_mul(f)?);
            SymInt::checked(a, b).ok()
        } else {
            if k <= -62 {
                return (self.a == 0 && self.b == 0).then_some(self);
            }
            let f = 1i64 << -k;
            (self.a % f == 0 && self.b % f == 0).then(|| SymInt {
                a: self.a / f,
                b: self.b / f,
            })
        }
    }

    pub fn value(&self, e: &BigInt) -> BigInt {
        BigInt::from(self.a) + BigInt::from(self.b) * e
    }
}

impl fmt::Display for SymInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "E"),
            (0, -1) => write!(f, "-E"),
            (0, b) => write!(f, "{b}*E"),
            (a, b) => write!(f, "{b}*E {} {}", if a < 0 { "-" } else { "+" }, a.abs()),
        }
    }
}

/// Base elements `x^c` and labels as [`SymInt`] over `E = E_level`.
pub struct SymbolicBands {
    pub level: u32,
}

impl BandAlgebra for SymbolicBands {
    type Elem = SymInt;
    type Label = SymInt;

    fn label(&self, k: i64) -> SymInt {
        SymInt::int(k)
    }

    fn is_short(&self, j: &SymInt) -> bool {
        // E >= 65536 exceeds every coefficient in play
        match j.b {
            0 => true,
            1 | -1 => j.a.signum() == -j.b,
            _ => false,
        }
    }

    fn link(&self, c: &SymInt, c2: &SymInt, d_in: i8, j: &SymInt, d_out: i8) -> Result<Option<SymInt>> {
        if d_in < 0 {
            // c^-1 x^j c' = x^(j - c + c')
            let e = j.checked_sub(*c)?.checked_add(*c2)?;
            return Ok(match d_out {
                1 => Some(e),
                _ => e.is_zero().then_some(SymInt::int(0)),
            });
        }
        // c^-1 y^j c' = (c'·2^-j - c, j) as an affine map
        if d_out > 0 {
            return Ok(if j.is_zero() { Some(c2.checked_sub(*c)?) } else { None });
        }
        let ok = if c.is_zero() && c2.is_zero() {
            true
        } else if j.b == 0 {
            c.scale_pow2(j.a) == Some(*c2)
        } else {
            // 2^(±E + a) times a small nonzero value leaves the encoding
            false
        };
        Ok(ok.then_some(*j))
    }

    fn pinned(&self, c: &SymInt, c2: &SymInt, d_in: i8, d_out: i8) -> Result<Vec<SymInt>> {
        let mut out = Vec::new();
        match (d_in, d_out) {
            (-1, -1) => out.push(c.checked_sub(*c2)?),
            (1, 1) => out.push(SymInt::int(0)),
            (1, -1) if !(c.is_zero() && c2.is_zero()) => {
                for k in -RATIO_SCAN..=RATIO_SCAN {
                    if c.scale_pow2(k) == Some(*c2) {
                        out.push(SymInt::int(k));
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }
}

/// A member of a symmetrized set: a cyclic sequence read from one of its
/// `t`-letters. `elems[i]` sits between `t^deltas[i]` and `t^deltas[i+1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Member<E> {
    pub deltas: Vec<i8>,
    pub elems: Vec<E>,
    /// Index of the generating word.
    pub source: usize,
    pub inverted: bool,
    pub rotation: usize,
}

impl<E> Member<E> {
    pub fn t_length(&self) -> usize {
        self.deltas.len()
    }
}

impl<E: fmt::Display> fmt::Display for Member<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r{}{} rot {}",
            self.source,
            if self.inverted { "^-1" } else { "" },
            self.rotation
        )
    }
}

#[derive(Clone, Debug)]
pub struct SymmetrizedSet<E> {
    pub members: Vec<Member<E>>,
    /// `N` in text form.
    pub n: String,
}

impl<E: Clone + PartialEq> SymmetrizedSet<E> {
    fn from_cycles(cycles: Vec<(usize, bool, Vec<i8>, Vec<E>)>, n: String) -> Self {
        let mut members: Vec<Member<E>> = Vec::new();
        for (source, inverted, deltas, elems) in cycles {
            let m = deltas.len();
            for rotation in 0..m {
                let d: Vec<i8> = (0..m).map(|i| deltas[(rotation + i) % m]).collect();
                let e: Vec<E> = (0..m).map(|i| elems[(rotation + i) % m].clone()).collect();
                if members.iter().any(|x| x.deltas == d && x.elems == e) {
                    continue;
                }
                members.push(Member {
                    deltas: d,
                    elems: e,
                    source,
                    inverted,
                    rotation,
                });
            }
        }
        SymmetrizedSet { members, n }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All rotations of the words and their inverses as cyclic sequences.
/// Fails if some rotation has a pinch cheaper than `n`.
pub fn symmetrize(words: &[Word], n: &BigInt, spec: &HnnSpec) -> Result<SymmetrizedSet<BsElement>> {
    let mut cycles = Vec::new();
    for (i, w) in words.iter().enumerate() {
        for (inverted, w) in [(false, w.clone()), (true, w.inverse())] {
            let c = parse_sequence(&w, spec)?.to_cyclic(spec)?;
            if c.is_empty() {
                continue;
            }
            if let Some(p) = c.pinches(spec)?.into_iter().find(|p| &p.cost < n) {
                return Err(Error::NotCyclicallyReduced {
                    n: n.to_string(),
                    rotation: p.position,
                    cost: p.cost.to_string(),
                });
            }
            cycles.push((i, inverted, c.deltas, c.elems));
        }
    }
    Ok(SymmetrizedSet::from_cycles(cycles, n.to_string()))
}

/// Cyclic sequence of a symbolic word whose base segments are `x`-powers,
/// with `y^-E_(level-1) x^s y^E_(level-1)` read as `x^(s·E_level)`.
fn symbolic_cycle(w: &SymWord, level: u32) -> Result<(Vec<i8>, Vec<SymInt>)> {
    let blocks = w.blocks();
    let mut deltas = Vec::new();
    let mut segs = vec![SymInt::default()];
    let mut i = 0;
    while i < blocks.len() {
        let (g, e) = &blocks[i];
        match (g, e) {
            (Gen::T, Exponent::Int(k)) => {
                let d = if k.is_negative() { -1 } else { 1 };
                let n = usize::try_from(k.abs()).map_err(|_| Error::Symbolic("t-power too large".into()))?;
                for _ in 0..n {
                    deltas.push(d);
                    segs.push(SymInt::default());
                }
            }
            (Gen::X, Exponent::Int(k)) => {
                let k = i64::try_from(k).map_err(|_| Error::Symbolic("x-power too large".into()))?;
                let last = segs.last_mut().expect("nonempty");
                *last = last.checked_add(SymInt::int(k))?;
            }
            (
                Gen::Y,
                Exponent::Tower {
                    level: l,
                    negative: true,
                },
            ) if *l + 1 == level => {
                let s = match (blocks.get(i + 1), blocks.get(i + 2)) {
                    (
                        Some((Gen::X, Exponent::Int(s))),
                        Some((Gen::Y, Exponent::Tower { level: l2, negative: false })),
                    ) if l2 == l => i64::try_from(s).ok(),
                    _ => None,
                }
                .ok_or_else(|| Error::Symbolic(format!("unsupported y-block at block {i}")))?;
                let last = segs.last_mut().expect("nonempty");
                *last = last.checked_add(SymInt::tower(s))?;
                i += 2;
            }
            _ => {
                return Err(Error::Symbolic(format!(
                    "block {g}^{e} is not supported symbolically at level {level}"
                )))
            }
        }
        i += 1;
    }
    if deltas.is_empty() {
        return Ok((deltas, Vec::new()));
    }
    let first = segs.remove(0);
    let last = segs.last_mut().expect("nonempty");
    *last = last.checked_add(first)?;
    Ok((deltas, segs))
}

/// Symbolic symmetrization with `N = E_level`, `level >= 4`.
pub fn symmetrize_symbolic(words: &[SymWord], level: u32) -> Result<SymmetrizedSet<SymInt>> {
    if level < 4 {
        return Err(Error::Symbolic(format!(
            "symbolic mode needs E_level >= 65536, got level {level}"
        )));
    }
    let bands = SymbolicBands { level };
    let mut cycles = Vec::new();
    for (i, w) in words.iter().enumerate() {
        for (inverted, w) in [(false, w.clone()), (true, w.inverse())] {
            let (deltas, elems) = symbolic_cycle(&w, level)?;
            let m = deltas.len();
            for k in 0..m {
                let (d, e, d2) = (deltas[k], elems[k], deltas[(k + 1) % m]);
                // pinches: t^-1 x^c t costs |c|; t x^c t^-1 needs c = 0
                let cheap = match (d, d2) {
                    (-1, 1) => bands.is_short(&e),
                    (1, -1) => e.is_zero(),
                    _ => false,
                };
                if cheap {
                    return Err(Error::NotCyclicallyReduced {
                        n: format!("E{level}"),
                        rotation: k,
                        cost: e.to_string(),
                    });
                }
            }
            if m > 0 {
                cycles.push((i, inverted, deltas, elems));
            }
        }
    }
    Ok(SymmetrizedSet::from_cycles(cycles, format!("E{level}")))
}

/// Longest piece found for an ordered pair of members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceMatch {
    pub r: usize,
    pub r_prime: usize,
    /// `l_t(p)`: number of `t`-letters matched.
    pub length_t: usize,
    /// Band labels `j_1, ..., j_L`.
    pub labels: Vec<String>,
    /// `v_1 = L_1` and `v_2 = R_L` in text form.
    pub v1: String,
    pub v2: String,
}

fn band_factors<B: BandAlgebra>(d: i8, j: &B::Label) -> (String, String) {
    if d < 0 {
        (format!("y^({j})"), format!("x^(-({j}))"))
    } else {
        (format!("x^({j})"), format!("y^(-({j}))"))
    }
}

/// Longest piece between members `ri` and `rj`: over all initial labels,
/// the longest cable whose remainder is not the trivial continuation.
pub fn max_piece<B: BandAlgebra>(
    set: &SymmetrizedSet<B::Elem>,
    ri: usize,
    rj: usize,
    bands: &B,
) -> Result<Option<PieceMatch>> {
    let (r, s) = (&set.members[ri], &set.members[rj]);
    let (m, m2) = (r.t_length(), s.t_length());
    if m == 0 || m2 == 0 || r.deltas[0] != s.deltas[0] {
        return Ok(None);
    }
    let same_shape = m == m2 && r.deltas == s.deltas;
    let zero = bands.label(0);
    let mut starts: Vec<B::Label> = (-LABEL_WINDOW..=LABEL_WINDOW).map(|k| bands.label(k)).collect();
    if m > 1 && m2 > 1 && r.deltas[1] == s.deltas[1] {
        for j in bands.pinned(&r.elems[0], &s.elems[0], r.deltas[0], r.deltas[1])? {
            if !starts.contains(&j) {
                starts.push(j);
            }
        }
    }

    let mut best: Option<PieceMatch> = None;
    for j1 in starts {
        if !bands.is_short(&j1) {
            continue;
        }
        let mut labels = vec![j1.clone()];
        let mut best_len = 0;
        loop {
            let l = labels.len();
            // condition (5): the remainder must not be the trivial continuation
            let trivial = same_shape && {
                let last = labels.last().expect("nonempty");
                if l == m {
                    bands.link(&r.elems[m - 1], &s.elems[m - 1], r.deltas[m - 1], last, r.deltas[0])?
                        == Some(j1.clone())
                } else {
                    // zero bands from letter l on, closing up onto j_1
                    bands.link(&r.elems[l - 1], &s.elems[l - 1], r.deltas[l - 1], last, r.deltas[l])?
                        == Some(zero.clone())
                        && (l..m - 1).all(|i| r.elems[i] == s.elems[i])
                        && bands.link(&r.elems[m - 1], &s.elems[m - 1], r.deltas[m - 1], &zero, r.deltas[0])?
                            == Some(j1.clone())
                }
            };
            if !trivial {
                best_len = l;
            }
            if l == m.min(m2) || r.deltas[l] != s.deltas[l] {
                break;
            }
            let next = bands.link(&r.elems[l - 1], &s.elems[l - 1], r.deltas[l - 1], labels.last().expect("nonempty"), r.deltas[l])?;
            match next {
                Some(j) if bands.is_short(&j) => labels.push(j),
                _ => break,
            }
        }
        if best_len > 0 && best.as_ref().is_none_or(|b| best_len > b.length_t) {
            let (v1, _) = band_factors::<B>(r.deltas[0], &labels[0]);
            let (_, v2) = band_factors::<B>(r.deltas[best_len - 1], &labels[best_len - 1]);
            best = Some(PieceMatch {
                r: ri,
                r_prime: rj,
                length_t: best_len,
                labels: labels[..best_len].iter().map(|j| j.to_string()).collect(),
                v1,
                v2,
            });
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CPrimeCertificate {
    /// `λ` as `p/q`.
    pub lambda: String,
    pub n: String,
    pub max_piece_t: usize,
    /// Shortest member `t`-length.
    pub relator_t: usize,
    pub verdict: bool,
    /// Initial label window searched.
    pub label_window: i64,
    pub witness: Option<PieceMatch>,
    /// Description of the witness members.
    pub witness_members: Option<(String, String)>,
}

impl fmt::Display for CPrimeCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda: {}", self.lambda)?;
        writeln!(f, "N: {}", self.n)?;
        writeln!(f, "relator_t: {}", self.relator_t)?;
        writeln!(f, "max_piece_t: {}", self.max_piece_t)?;
        writeln!(f, "label window: |j_1| <= {} plus pinned labels", self.label_window)?;
        writeln!(f, "verdict: {}", if self.verdict { "holds" } else { "fails" })?;
        if let (Some(w), Some((a, b))) = (&self.witness, &self.witness_members) {
            writeln!(f, "witness: {a} vs {b}, labels [{}], v1 = {}, v2 = {}", w.labels.join(", "), w.v1, w.v2)?;
        }
        Ok(())
    }
}

/// Checks `l_t(p) < λ·l_t(r)` for every piece over all ordered member pairs.
pub fn verify_c_prime<B: BandAlgebra>(
    set: &SymmetrizedSet<B::Elem>,
    lambda: &BigRational,
    bands: &B,
) -> Result<CPrimeCertificate> {
    let k = set.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect();
    let found: Vec<Option<PieceMatch>> = pairs
        .par_iter()
        .map(|&(a, b)| max_piece(set, a, b, bands))
        .collect::<Result<_>>()?;
    let mut verdict = true;
    let mut witness: Option<PieceMatch> = None;
    for p in found.into_iter().flatten() {
        let rel_t = BigInt::from(set.members[p.r].t_length());
        if BigRational::from_integer(BigInt::from(p.length_t)) >= lambda * BigRational::from_integer(rel_t) {
            verdict = false;
        }
        if witness.as_ref().is_none_or(|w| p.length_t > w.length_t) {
            witness = Some(p);
        }
    }
    let relator_t = set.members.iter().map(Member::t_length).min().unwrap_or(0);
    let witness_members = witness
        .as_ref()
        .map(|w| (set.members[w.r].to_string(), set.members[w.r_prime].to_string()));
    Ok(CPrimeCertificate {
        lambda: lambda.to_string(),
        n: set.n.clone(),
        max_piece_t: witness.as_ref().map_or(0, |w| w.length_t),
        relator_t,
        verdict,
        label_window: LABEL_WINDOW,
        witness,
        witness_members,
    })
}

/// Parses `p/q` (or an integer) as a positive rational.
pub fn parse_lambda(s: &str) -> Result<BigRational> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad lambda `{s}`")))?;
    let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad lambda `{s}`")))?;
    if q.is_zero() || p.is_negative() || q.is_negative() {
        return Err(Error::Parse(format!("lambda must be a positive fraction, got `{s}`")));
    }
    Ok(BigRational::new(p, q))
}

/// `t^-1 u_(n,1)` as a symbolic word, the generator of the symmetrized set
/// checked at `N = E_n`.
pub fn family_relator(n: u32) -> Result<SymWord> {
    let u = crate::family::make_u(n, 1)?;
    let mut w = SymWord::new();
    w.push_int(Gen::T, -1);
    w.append(&u.word);
    Ok(w)
}

/// Concrete certificate for the family relator (`n <= 5`).
pub fn family_certificate(n: u32, lambda: &BigRational, spec: &HnnSpec) -> Result<CPrimeCertificate> {
    let e = crate::family::tower(n).ok_or_else(|| Error::budget("E_n", u64::MAX, 0))?;
    let w = family_relator(n)?.materialize()?;
    let set = symmetrize(&[w], &e, spec)?;
    verify_c_prime(&set, lambda, &ConcreteBands { spec: *spec, n: e })
}

/// Symbolic certificate for the family relator (`n >= 4`).
pub fn family_certificate_symbolic(n: u32, lambda: &BigRational) -> Result<CPrimeCertificate> {
    let set = symmetrize_symbolic(&[family_relator(n)?], n)?;
    verify_c_prime(&set, lambda, &SymbolicBands { level: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn sixth() -> BigRational {
        parse_lambda("1/6").unwrap()
    }

    #[test]
    fn empty_set_holds() {
        let spec = HnnSpec::default();
        let set = symmetrize(&[], &BigInt::from(3), &spec).unwrap();
        assert!(set.is_empty());
        let c = verify_c_prime(&set, &sixth(), &ConcreteBands { spec, n: 3.into() }).unwrap();
        assert!(c.verdict);
        assert_eq!(c.max_piece_t, 0);
    }

    #[test]
    fn cheap_rotation_rejected() {
        let spec = HnnSpec::default();
        let err = symmetrize(&[w("T x t Y")], &BigInt::from(2), &spec).unwrap_err();
        assert!(matches!(err, Error::NotCyclicallyReduced { ref cost, .. } if cost == "1"));
    }

    #[test]
    fn two_letter_relator_fails() {
        let spec = HnnSpec::default();
        let set = symmetrize(&[w("T x^3 t Y^3")], &BigInt::from(3), &spec).unwrap();
        let c = verify_c_prime(&set, &sixth(), &ConcreteBands { spec, n: 3.into() }).unwrap();
        assert_eq!(c.relator_t, 2);
        assert!(c.max_piece_t >= 1);
        assert!(!c.verdict);
    }

    #[test]
    fn band_propagation() {
        let spec = HnnSpec::default();
        let x3 = BsElement::x_pow(3);
        let zero = BigInt::from(0);
        // t^-1 x^3 t^-1 against itself: zero label stays zero
        assert_eq!(propagate_band(&x3, &x3, 1, &zero, 1, &spec).unwrap(), Some(zero.clone()));
        let x5 = BsElement::x_pow(5);
        let xm5 = BsElement::x_pow(-5);
        assert_eq!(propagate_band(&x5, &xm5, 1, &zero, -1, &spec).unwrap(), None);
        // y^-16 x y^16 = x^65536 in both; a unit label cannot pass to <y>
        let g = BsElement::x_pow(65536);
        assert_eq!(propagate_band(&g, &g, -1, &zero, -1, &spec).unwrap(), Some(zero.clone()));
        assert_eq!(propagate_band(&g, &g, -1, &BigInt::from(1), -1, &spec).unwrap(), None);
    }

    #[test]
    fn self_match_is_discarded() {
        let spec = HnnSpec::default();
        let e = crate::family::tower(4).unwrap();
        let set = symmetrize(&[family_relator(4).unwrap().materialize().unwrap()], &e, &spec).unwrap();
        let bands = ConcreteBands { spec, n: e };
        for i in 0..set.len() {
            if let Some(p) = max_piece(&set, i, i, &bands).unwrap() {
                assert!(p.length_t < set.members[i].t_length());
            }
        }
    }

    #[test]
    fn family_concrete() {
        let spec = HnnSpec::default();
        for n in [4, 5] {
            let c = family_certificate(n, &sixth(), &spec).unwrap();
            assert_eq!((c.max_piece_t, c.relator_t, c.verdict), (4, 25, true), "n = {n}\n{c}");
        }
    }

    #[test]
    fn family_symbolic() {
        for n in 4..=12 {
            let c = family_certificate_symbolic(n, &sixth()).unwrap();
            assert_eq!((c.max_piece_t, c.relator_t, c.verdict), (4, 25, true), "n = {n}\n{c}");
        }
    }

    #[test]
    fn scaling_by_huge_powers_does_not_overflow() {
        let one = SymInt::int(1);
        assert_eq!(one.scale_pow2(63), None);
        assert_eq!(one.scale_pow2(-63), None);
        assert_eq!(SymInt::int(0).scale_pow2(200), Some(SymInt::int(0)));
        assert_eq!(SymInt::int(3).scale_pow2(2), Some(SymInt::int(12)));
        assert_eq!(SymInt::int(12).scale_pow2(-2), Some(SymInt::int(3)));
    }

    #[test]
    fn symbolic_matches_concrete() {
        let spec = HnnSpec::default();
        for n in [4, 5] {
            let e = crate::family::tower(n).unwrap();
            let cs = symmetrize(&[family_relator(n).unwrap().materialize().unwrap()], &e, &spec).unwrap();
            let ss = symmetrize_symbolic(&[family_relator(n).unwrap()], n).unwrap();
            assert_eq!(cs.len(), ss.len());
            let cb = ConcreteBands { spec, n: e };
            let sb = SymbolicBands { level: n };
            for a in 0..cs.len() {
                assert_eq!(cs.members[a].deltas, ss.members[a].deltas);
                for b in 0..cs.len() {
                    let pc = max_piece(&cs, a, b, &cb).unwrap().map(|p| p.length_t);
                    let ps = max_piece(&ss, a, b, &sb).unwrap().map(|p| p.length_t);
                    assert_eq!(pc, ps, "pair ({a}, {b}) at n = {n}");
                }
            }
        }
    }

    #[test]
    fn piece_symmetry() {
        let set = symmetrize_symbolic(&[family_relator(6).unwrap()], 6).unwrap();
        let sb = SymbolicBands { level: 6 };
        for a in 0..set.len() {
            for b in 0..set.len() {
                let p = max_piece(&set, a, b, &sb).unwrap().map(|p| p.length_t);
                let q = max_piece(&set, b, a, &sb).unwrap().map(|p| p.length_t);
                assert_eq!(p, q, "pair ({a}, {b})");
            }
        }
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("1/6").unwrap(), BigRational::new(1.into(), 6.into()));
        assert!(parse_lambda("1/0").is_err());
        assert!(parse_lambda("-1/2").is_err());
    }

    #[test]
    fn signature_blocks_force_zero_labels() {
        let set = symmetrize_symbolic(&[family_relator(5).unwrap()], 5).unwrap();
        let sb = SymbolicBands { level: 5 };
        let sig = |e: &SymInt| e.b == 0 && [3, 5, 7].contains(&e.a.abs());
        for a in 0..set.len() {
            for b in 0..set.len() {
                let Some(p) = max_piece(&set, a, b, &sb).unwrap() else { continue };
                let r = &set.members[a];
                for k in 0..p.length_t - 1 {
                    if sig(&r.elems[k]) {
                        assert_eq!(p.labels[k], "0");
                        assert_eq!(p.labels[k + 1], "0");
                    }
                }
            }
        }
    }
}
