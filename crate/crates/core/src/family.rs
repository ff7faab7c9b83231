//! The tower function, the relator family `u_{n,m}`, `w_{n,m}`, `a_n` and the
//! presentations built from them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::area::{AreaCertificate, Rewriter};
use crate::error::{Error, Result};
use crate::tietze::Presentation;
use crate::word::{Exponent, Gen, Letter, RawWord, SymWord, TowerPoly, Word};

/// `E_0 = 1`, `E_{n+1} = 2^{E_n}`; concrete for `n <= 5`.
pub fn tower(n: u32) -> Option<BigInt> {
    let mut v = BigInt::one();
    for _ in 0..n {
        let e = u64::try_from(&v).ok().filter(|&e| e <= 1 << 20)?;
        v = BigInt::one() << e;
    }
    Some(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    U,
    W,
    A,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::U => "u",
            FamilyKind::W => "w",
            FamilyKind::A => "a",
        })
    }
}

/// A family word with its construction parameters. The word is kept
/// symbolic: `y`-exponents `±E_k` stay tower literals until materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyWord {
    pub kind: FamilyKind,
    pub n: u32,
    pub m: u32,
    pub word: SymWord,
}

impl FamilyWord {
    /// Concrete word; fails with a budget error when some `E_k`, `k > 4`,
    /// would have to be written out.
    pub fn concrete(&self) -> Result<Word> {
        self.word.materialize()
    }

    pub fn length(&self) -> TowerPoly {
        self.word.length()
    }

    pub fn count_t(&self) -> TowerPoly {
        self.word.count_t()
    }
}

impl fmt::Display for FamilyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// `[y^-E_n x y^E_n, x^k]` multiplied over the given powers `k`.
fn base_word(n: u32, powers: &[i64]) -> SymWord {
    let mut a = SymWord::new();
    a.push(Gen::Y, Exponent::tower(n, true));
    a.push_int(Gen::X, 1);
    a.push(Gen::Y, Exponent::tower(n, false));
    let a_inv = a.inverse();
    let mut w = SymWord::new();
    for &k in powers {
        w.append(&a_inv);
        w.push_int(Gen::X, -k);
        w.append(&a);
        w.push_int(Gen::X, k);
    }
    w
}

/// Replaces every block `y^{±E_level}` by `t^-1 y^{-E_{level-1}} x^{±1} y^{E_{level-1}} t`.
fn substitute(w: &SymWord, level: u32) -> Result<SymWord> {
    let inner = |negative: bool| {
        if level == 1 {
            Exponent::Int(if negative { -BigInt::one() } else { BigInt::one() })
        } else {
            Exponent::tower(level - 1, negative)
        }
    };
    let mut out = SymWord::new();
    for (g, e) in w.blocks() {
        match (g, e) {
            (Gen::Y, Exponent::Tower { level: l, negative }) if *l == level => {
                out.push_int(Gen::T, -1);
                out.push(Gen::Y, inner(true));
                out.push_int(Gen::X, if *negative { -1 } else { 1 });
                out.push(Gen::Y, inner(false));
                out.push_int(Gen::T, 1);
            }
            (Gen::Y, _) => {
                return Err(Error::Shape(format!(
                    "unexpected y-block y^{e} while substituting at level {level}"
                )))
            }
            _ => out.push(*g, e.clone()),
        }
    }
    Ok(out)
}

fn build(kind: FamilyKind, n: u32, m: u32, powers: &[i64]) -> Result<FamilyWord> {
    if m > n {
        return Err(Error::Shape(format!(
            "substitution depth {m} exceeds index {n}"
        )));
    }
    let mut word = base_word(n, powers);
    for k in 0..m {
        word = substitute(&word, n - k)?;
    }
    Ok(FamilyWord { kind, n, m, word })
}

/// `u_{n,m}`: the three-commutator word with signature powers 3, 5, 7 after `m`
/// substitution steps.
pub fn make_u(n: u32, m: u32) -> Result<FamilyWord> {
    build(FamilyKind::U, n, m, &[3, 5, 7])
}

/// `w_{n,m}`: the single commutator `[y^-E_n x y^E_n, x]` after `m` steps.
pub fn make_w(n: u32, m: u32) -> Result<FamilyWord> {
    build(FamilyKind::W, n, m, &[1])
}

/// `a_n = t^-1 u_{n,n}`.
pub fn make_a(n: u32) -> Result<FamilyWord> {
    if n == 0 {
        return Err(Error::Shape("a_n needs n >= 1".into()));
    }
    let u = make_u(n, n)?;
    let mut word = SymWord::new();
    word.push_int(Gen::T, -1);
    word.append(&u.word);
    Ok(FamilyWord {
        kind: FamilyKind::A,
        n,
        m: n,
        word,
    })
}

fn base_relators() -> Vec<RawWord> {
    vec![
        "Y x y X^2".parse().expect("valid relator"),
        "T x t Y".parse().expect("valid relator"),
    ]
}

/// `({x, y, t}, {y^-1 x y x^-2, t^-1 x t y^-1})`, the base presentation of `G`.
pub fn make_mu0() -> Presentation {
    Presentation::new(vec![Gen::X, Gen::Y, Gen::T], base_relators()).expect("valid presentation")
}

/// `({x, y, t}, {y^-1 x y x^-2, t^-1 x t y^-1, a_i})`.
pub fn make_mu(i: u32) -> Result<Presentation> {
    let a = make_a(i)?.concrete()?;
    let mut rels = base_relators();
    rels.push(RawWord::from_word(&a)?);
    Presentation::new(vec![Gen::X, Gen::Y, Gen::T], rels)
}

/// Relator applications needed for one substitution depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCost {
    /// Depth `m`: this level turns `u_{n,m+1}` into `u_{n,m}`.
    pub depth: u32,
    /// Number of blocks `t^-1 y^-E x^±1 y^E t` rewritten.
    pub blocks: BigInt,
    /// Applications per block: `2^E - 1` doubling steps and `2^E` t-cells.
    pub per_block: BigInt,
    pub total: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConversionCost {
    pub n: u32,
    /// Innermost level first.
    pub per_level: Vec<LevelCost>,
    pub total: BigInt,
    /// `96 E_{n-1}`.
    pub bound: BigInt,
}

impl ConversionCost {
    pub fn within_bound(&self) -> bool {
        self.total <= self.bound
    }
}

/// Cost of rewriting `t^-1 u_n` into `t^-1 u_{n,1}` one substitution level at
/// a time, innermost level first.
pub fn conversion_cost(n: u32) -> Result<ConversionCost> {
    if n == 0 {
        return Err(Error::Shape("conversion cost needs n >= 1".into()));
    }
    let top = tower(n - 1).ok_or_else(|| {
        Error::budget(format!("tower value E{}", n - 1), u64::MAX, 1 << 20)
    })?;
    let mut per_level = Vec::new();
    let mut total = BigInt::from(0);
    for depth in (1..n).rev() {
        let e = tower(n - depth).expect("level below top");
        let blocks = BigInt::from(12) << depth;
        let per_block = 2 * e - 1;
        let t = &blocks * &per_block;
        total += &t;
        per_level.push(LevelCost {
            depth,
            blocks,
            per_block,
            total: t,
        });
    }
    Ok(ConversionCost {
        n,
        per_level,
        total,
        bound: 96 * top,
    })
}

/// Largest `n` whose conversion is replayed letter by letter.
pub const MAX_CERTIFIED_CONVERSION: u32 = 3;

/// Replays the conversion of [`conversion_cost`] on
/// `t^-1 u_n · (t^-1 u_{n,1})^-1` over the base presentation and returns the
/// resulting identity certificate; it has exactly `conversion_cost(n).total`
/// terms.
pub fn conversion_certificate(n: u32) -> Result<AreaCertificate> {
    if n == 0 || n > MAX_CERTIFIED_CONVERSION {
        return Err(Error::budget(
            format!("letter-level conversion for n = {n}"),
            u64::from(n),
            u64::from(MAX_CERTIFIED_CONVERSION),
        ));
    }
    let t_inv = Word::gen_pow(Gen::T, -1);
    let a = t_inv.mul(&make_u(n, n)?.concrete()?);
    let a1 = t_inv.mul(&make_u(n, 1)?.concrete()?);
    let word = a.mul(&a1.inverse());
    let mu0 = make_mu0();
    let mut rw = Rewriter::new(&mu0, &word, 1 << 20)?;
    let l = |g: Gen, sign: i8| Letter::new(g, sign);
    for depth in (1..n).rev() {
        let j = tower(n - depth - 1)
            .and_then(|e| usize::try_from(e).ok())
            .expect("small level");
        while let Some((s, eps)) = find_block(rw.letters(), j) {
            // y^-1 x^e -> x^2e y^-1, innermost y first
            let mut c = 1usize;
            for k in (1..=j).rev() {
                let p = s + k;
                for i in 0..c {
                    rw.replace(p + 2 * i, 2, &[l(Gen::X, eps), l(Gen::X, eps), l(Gen::Y, -1)])?;
                }
                c *= 2;
            }
            // t^-1 x^e -> y^e t^-1 along the band
            for i in 0..c {
                rw.replace(s + i, 2, &[l(Gen::Y, eps), l(Gen::T, -1)])?;
            }
        }
    }
    rw.finish()
}

/// First block `t^-1 y^-j x^e y^j t` with exactly `j` letters `y^-1`.
fn find_block(w: &[Letter], j: usize) -> Option<(usize, i8)> {
    let len = 2 * j + 3;
    (0..w.len().checked_sub(len - 1)?).find_map(|s| {
        let b = &w[s..s + len];
        let ok = b[0] == Letter::new(Gen::T, -1)
            && b[1..=j].iter().all(|&x| x == Letter::new(Gen::Y, -1))
            && b[j + 1].gen == Gen::X
            && b[j + 2..len - 1].iter().all(|&x| x == Letter::new(Gen::Y, 1))
            && b[len - 1] == Letter::new(Gen::T, 1);
        ok.then_some((s, b[j + 1].sign))
    })
}
