//! One check per acceptance criterion; each prints a PASS/FAIL line.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bgpres::area::{
    area_w1, bound_for, check_certificate, min_area, AreaOutcome, AreaQuery, NoBound,
};
use bgpres::cancel::{family_certificate, family_certificate_symbolic, parse_lambda, symmetrize, symmetrize_symbolic, max_piece, ConcreteBands, SymbolicBands, family_relator};
use bgpres::diagram::{euler_audit, fixtures, group_cables, trace_bands};
use bgpres::family::{conversion_certificate, conversion_cost, make_a, make_mu, make_mu0, make_u, make_w, tower};
use bgpres::hnn::{is_cyclically_n_reduced, is_n_reduced, is_trivial_in_g, HnnSpec};
use bgpres::tietze::{apply_move, Presentation, TietzeMove};
use bgpres::word::{free_reduce, Gen, Letter, RawWord, Word};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("{what} took {t:?}, limit {limit:?}"))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// l(a_n) for n = 5..12.
const A_LENGTHS: [u64; 8] = [1537, 3073, 6145, 12289, 24577, 49153, 98305, 196609];

fn family_lengths() -> Check {
    let start = Instant::now();
    for (n, &golden) in (5..=12u32).zip(A_LENGTHS.iter()) {
        let len = make_a(n).map_err(e)?.length().value(0).map_err(e)?;
        ensure(len == BigInt::from(golden), format!("l(a_{n}) = {len}, golden {golden}"))?;
        ensure(len < BigInt::from(100u64 << n), format!("l(a_{n}) = {len} is not below 100*2^{n}"))?;
    }
    within(start, Duration::from_secs(1), "construction")?;
    Ok(format!("l(a_5..a_12) = {A_LENGTHS:?}"))
}

fn triviality() -> Check {
    let start = Instant::now();
    let spec = HnnSpec::default();
    let mut count = 0;
    for n in 1..=5 {
        for m in 0..=n {
            let u = make_u(n, m).map_err(e)?.word.materialize_up_to(5).map_err(e)?;
            ensure(is_trivial_in_g(&u, &spec).map_err(e)?, format!("u_{n},{m} is not trivial"))?;
            count += 1;
        }
        let w = make_w(n, n).map_err(e)?.word.materialize_up_to(5).map_err(e)?;
        ensure(is_trivial_in_g(&w, &spec).map_err(e)?, format!("w_{n} is not trivial"))?;
        count += 1;
    }
    within(start, Duration::from_secs(120), "word problems")?;
    Ok(format!("{count} words trivial in G"))
}

fn reducedness() -> Check {
    let spec = HnnSpec::default();
    for n in 3..=5u32 {
        let en = tower(n).expect("n <= 5");
        let a = Word::gen_pow(Gen::T, -1).mul(&make_u(n, 1).map_err(e)?.concrete().map_err(e)?);
        ensure(is_cyclically_n_reduced(&a, &en, &spec).map_err(e)?, format!("t^-1 u_{n},1 not cyclically E_{n}-reduced"))?;
        ensure(
            is_cyclically_n_reduced(&a.inverse(), &en, &spec).map_err(e)?,
            format!("inverse of t^-1 u_{n},1 not cyclically E_{n}-reduced"),
        )?;
        for m in 0..n {
            let u = make_u(n, m + 1).map_err(e)?.concrete().map_err(e)?;
            let bound = tower(n - m).expect("n <= 5");
            ensure(is_n_reduced(&u, &bound, &spec).map_err(e)?, format!("u_{n},{} not E_{}-reduced", m + 1, n - m))?;
        }
    }
    Ok("n = 3, 4, 5".into())
}

fn small_cancellation() -> Check {
    let start = Instant::now();
    let spec = HnnSpec::default();
    let sixth = parse_lambda("1/6").map_err(e)?;
    let expect = |c: &bgpres::cancel::CPrimeCertificate, tag: &str| {
        ensure(
            c.verdict && c.max_piece_t == 4 && c.relator_t == 25,
            format!("{tag}: verdict {}, max piece {}, relator {}", c.verdict, c.max_piece_t, c.relator_t),
        )
    };
    for n in [4, 5] {
        expect(&family_certificate(n, &sixth, &spec).map_err(e)?, &format!("concrete n = {n}"))?;
    }
    for n in 5..=12 {
        expect(&family_certificate_symbolic(n, &sixth).map_err(e)?, &format!("symbolic n = {n}"))?;
    }
    for n in [4u32, 5] {
        let en = tower(n).expect("n <= 5");
        let cs = symmetrize(&[family_relator(n).map_err(e)?.materialize_up_to(5).map_err(e)?], &en, &spec).map_err(e)?;
        let ss = symmetrize_symbolic(&[family_relator(n).map_err(e)?], n).map_err(e)?;
        ensure(cs.len() == ss.len(), "symmetrized sets differ in size")?;
        let cb = ConcreteBands { spec, n: en };
        let sb = SymbolicBands { level: n };
        for a in 0..cs.len() {
            for b in 0..cs.len() {
                let pc = max_piece(&cs, a, b, &cb).map_err(e)?.map(|p| p.length_t);
                let ps = max_piece(&ss, a, b, &sb).map_err(e)?.map(|p| p.length_t);
                ensure(pc == ps, format!("n = {n}, pair ({a}, {b}): concrete {pc:?}, symbolic {ps:?}"))?;
            }
        }
    }
    within(start, Duration::from_secs(300), "certificates")?;
    Ok("max piece 4, relator 25, concrete n = 4, 5, symbolic n = 5..12, modes agree".into())
}

fn area_oracle() -> Check {
    let start = Instant::now();
    let mu0 = make_mu0();
    let bs: Presentation = "gens: x y\nrel: Y x y X^2\n".parse().map_err(e)?;
    for p in [&mu0, &bs] {
        for r in &p.relators {
            let q = AreaQuery::new(r.reduce(), p.clone(), 4, 16);
            let a = min_area(&q, &NoBound).map_err(e)?.area();
            ensure(a == Some(1), format!("relator {r} has area {a:?}"))?;
        }
    }
    let w: Word = "Y^2 x y^2 X^4".parse().map_err(e)?;
    let a = min_area(&AreaQuery::new(w, bs, 8, 24), &NoBound).map_err(e)?.area();
    ensure(a == Some(3), format!("area of y^-2 x y^2 x^-4 is {a:?}"))?;
    let (a1, cert) = area_w1().map_err(e)?;
    ensure(a1 > 2, format!("area of w_1 is {a1}"))?;
    ensure(check_certificate(&cert, &mu0), "w_1 certificate does not check")?;
    within(start, Duration::from_secs(600), "area searches")?;
    Ok(format!("relators 1, BS word 3, Area(w_1) = {a1}"))
}

fn conversion() -> Check {
    for n in [5, 6] {
        let c = conversion_cost(n).map_err(e)?;
        ensure(c.within_bound(), format!("n = {n}: {} > {}", c.total, c.bound))?;
    }
    let cert = conversion_certificate(2).map_err(e)?;
    ensure(check_certificate(&cert, &make_mu0()), "n = 2 certificate does not check")?;
    Ok(format!("n = 2 certificate with {} applications checks", cert.len()))
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| {
            let g = if rng.gen_bool(0.5) { Gen::X } else { Gen::Y };
            Letter::new(g, if rng.gen_bool(0.5) { 1 } else { -1 })
        })
        .collect()
}

fn tietze_ledger() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trials, mut attempts, mut worst) = (0, 0, 0.0f64);
    while trials < 100 {
        attempts += 1;
        ensure(attempts <= 5000, format!("only {trials} terminating trials in {attempts} attempts"))?;
        let rels: Vec<RawWord> = (0..2)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                RawWord(random_word(&mut rng, n))
            })
            .collect();
        let p = Presentation::new(vec![Gen::X, Gen::Y], rels).map_err(e)?;
        let mut letters = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let i = rng.gen_range(0..2);
            let k = rng.gen_range(0..=1);
            let c = random_word(&mut rng, k);
            let r = if rng.gen_bool(0.5) { p.relators[i].clone() } else { p.relators[i].inverse() };
            letters.extend(c.iter().copied());
            letters.extend(r.0);
            letters.extend(c.iter().rev().map(|l| l.inverse()));
        }
        let w = free_reduce(&letters);
        if w.is_empty() {
            continue;
        }
        let (i, j) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
        let q = apply_move(&p, &TietzeMove::Op4 { i, j }).map_err(e)?;
        let area = |p: &Presentation| -> std::result::Result<Option<u64>, String> {
            Ok(min_area(&AreaQuery::new(w.clone(), p.clone(), 4, 20), &NoBound).map_err(e)?.area())
        };
        let (Some(a), Some(b)) = (area(&p)?, area(&q)?) else {
            continue;
        };
        ensure(
            b <= 2 * a && a <= 2 * b,
            format!("{w} over {p}: area {a} before, {b} after op4 i={i} j={j}"),
        )?;
        worst = worst.max(a.max(b) as f64 / a.min(b).max(1) as f64);
        trials += 1;
    }
    Ok(format!("100 trials ({attempts} attempts), largest ratio {worst}"))
}

fn diagrams() -> Check {
    let (d, p) = fixtures::band();
    let bands = trace_bands(&d, &p).map_err(e)?;
    ensure(bands.len() == 1 && bands[0].len() == 3 && !bands[0].is_ring, "band fixture: expected one open band of 3 cells")?;

    let (d, p) = fixtures::cables();
    let bands = trace_bands(&d, &p).map_err(e)?;
    let cables = group_cables(&d, &p, &bands).map_err(e)?;
    ensure(bands.len() == 4 && cables.len() == 3, format!("cable fixture: {} bands, {} cables", bands.len(), cables.len()))?;

    let (d, p) = fixtures::loop_cable();
    let audit = euler_audit(&d, &p).map_err(e)?;
    ensure(audit.iter().any(|a| a.one_edge_faces == 1), "loop fixture: no 1-edge face reported")?;

    let (d, p) = fixtures::parallel_cables();
    let audit = euler_audit(&d, &p).map_err(e)?;
    ensure(audit.iter().any(|a| a.two_edge_faces == 1), "parallel fixture: no 2-edge face reported")?;
    ensure(audit.iter().all(|a| a.euler() == 1), "Euler count differs from 1")?;
    Ok("1 band of 3 cells; 4 bands in 3 cables; 1-edge and 2-edge faces reported".into())
}

fn negative_check() -> Check {
    let mu5 = make_mu(5).map_err(e)?;
    let x = Word::gen_pow(Gen::X, 1);
    let mut q = AreaQuery::new(x, mu5.clone(), 64, 96);
    q.max_states = 200_000;
    let out = min_area(&q, bound_for(&mu5).as_ref()).map_err(e)?;
    match out {
        AreaOutcome::NotFound { .. } => Ok(format!("x over mu_5: {out}")),
        AreaOutcome::Found { area, .. } => Err(format!("bounded search unexpectedly found area {area}")),
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("family construction", family_lengths),
        ("triviality in G", triviality),
        ("reducedness ladder", reducedness),
        ("small cancellation certificate", small_cancellation),
        ("area oracle", area_oracle),
        ("conversion cost", conversion),
        ("tietze ledger", tietze_ledger),
        ("diagram audit", diagrams),
        ("bounded negative check", negative_check),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let t = start.elapsed();
        let line = match result {
            Ok(detail) => format!("criterion {}: PASS {name} ({t:.2?}): {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {}: FAIL {name} ({t:.2?}): {why}", i + 1)
            }
        };
        // bypass the test harness capture so the summary always shows
        writeln!(io::stderr(), "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
