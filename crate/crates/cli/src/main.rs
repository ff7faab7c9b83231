use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use bgpres::area::{
    bound_for, check_certificate, min_area, AreaCertificate, AreaOutcome, AreaQuery, NoBound,
};
use bgpres::cancel::{
    family_relator, max_piece, parse_lambda, symmetrize, symmetrize_symbolic, verify_c_prime,
    BandAlgebra, CPrimeCertificate, ConcreteBands, SymbolicBands, SymmetrizedSet,
};
use bgpres::diagram::{
    self, dual_graph, euler_audit, fixtures, group_cables, trace_bands, validate, Diagram,
};
use bgpres::family::{
    conversion_certificate, conversion_cost, make_a, make_mu, make_mu0, make_u, make_w, tower,
    FamilyWord,
};
use bgpres::hnn::{britton_reduce, is_cyclically_n_reduced, is_n_reduced, HnnSpec};
use bgpres::tietze::{eliminate_y, format_script, parse_script, replay, Presentation};
use bgpres::word::{SymWord, Word, MAX_CONCRETE_TOWER};
use bgpres::Error;

#[derive(Parser)]
#[command(name = "bgpres", version, about = "Balanced presentations over the Baumslag-Gersten group")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    U,
    W,
    A,
    Mu,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramOp {
    Validate,
    Bands,
    Cables,
    Dual,
    Audit,
}

#[derive(Subcommand)]
enum Command {
    /// Print a family word u_{n,m}, w_{n,m}, a_n or the presentation mu_n.
    Gen {
        kind: Kind,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Keep tower exponents as E_k instead of expanding them.
        #[arg(long)]
        symbolic: bool,
    },
    /// Decide whether a word is trivial in G.
    Wp {
        /// Word file, `-` for standard input.
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Decide whether a word is N-reduced.
    Nreduced {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        n: BigInt,
        /// Check every rotation of the cyclic sequence.
        #[arg(long)]
        cyclic: bool,
    },
    /// List the longest pieces of a symmetrized set.
    Pieces {
        #[command(flatten)]
        set: SetArgs,
        /// Only report pieces at least this long.
        #[arg(long, default_value_t = 1)]
        min_length: usize,
    },
    /// Certify the condition C'(lambda, N).
    Cprime {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value = "1/6")]
        lambda: String,
    },
    /// Replay a Tietze script, or eliminate y from a presentation.
    Tietze {
        #[arg(long)]
        presentation: PathBuf,
        /// Script file to replay.
        #[arg(long, conflicts_with = "eliminate_y")]
        script: Option<PathBuf>,
        /// Word whose area the ledger tracks.
        #[arg(long)]
        track: Option<String>,
        #[arg(long)]
        eliminate_y: bool,
    },
    /// Bounded search for the area of a word.
    Area {
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Presentation file; defaults to the base presentation mu_0.
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        max_area: u64,
        #[arg(long, default_value_t = 48)]
        max_len: usize,
        #[arg(long, default_value_t = bgpres::area::DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Write the certificate terms here.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Plain breadth-first search without the corridor estimate.
        #[arg(long)]
        bfs: bool,
    },
    /// Check an area certificate, or emit the conversion certificate for n.
    Cert {
        /// Certificate file.
        #[arg(required_unless_present = "conversion")]
        certificate: Option<PathBuf>,
        #[arg(long, required_unless_present = "conversion")]
        word: Option<String>,
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["certificate", "word"])]
        conversion: Option<u32>,
    },
    /// Analyse a diagram file, or print a built-in fixture.
    Diagram {
        #[arg(required_unless_present = "fixture")]
        op: Option<DiagramOp>,
        #[arg(required_unless_present = "fixture")]
        input: Option<PathBuf>,
        #[arg(long, required_unless_present = "fixture")]
        presentation: Option<PathBuf>,
        /// Emit the dual graph in DOT format.
        #[arg(long)]
        dot: bool,
        /// Print a fixture: empty, single, two, band, ring, cables, loop, parallel.
        #[arg(long, conflicts_with_all = ["op", "input", "presentation"])]
        fixture: Option<String>,
        /// With --fixture, print its presentation instead of the diagram.
        #[arg(long, requires = "fixture")]
        fixture_presentation: bool,
    },
}

#[derive(clap::Args)]
struct SetArgs {
    /// Level n of the family relator t^-1 u_{n,1}, with N = E_n.
    #[arg(long, required_unless_present = "words")]
    n: Option<u32>,
    /// Use symbolic tower exponents (needed for n > 5).
    #[arg(long)]
    symbolic: bool,
    /// File of words, one per line, instead of the family relator.
    #[arg(long, requires = "bound")]
    words: Option<PathBuf>,
    /// N for --words.
    #[arg(long)]
    bound: Option<BigInt>,
}

/// Verdict of a command: success, negative answer, or failure.
enum Outcome {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Yes) => ExitCode::from(0),
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Words ignore `#` comments and may span lines.
fn read_word(path: &Path) -> Result<Word, Error> {
    let text = read_input(path)?;
    let body: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect();
    body.join(" ").parse()
}

fn read_presentation(path: &Path) -> Result<Presentation, Error> {
    read_input(path)?.parse()
}

fn emit(json: bool, value: Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn verdict(b: bool) -> Outcome {
    if b {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let json = cli.json;
    let spec = HnnSpec::default();
    match &cli.command {
        Command::Gen { kind, n, m, symbolic } => {
            if let Kind::Mu = kind {
                let p = if *n == 0 { make_mu0() } else { make_mu(*n)? };
                emit(json, json!({ "presentation": p.to_string() }), || p.to_string());
                return Ok(Outcome::Yes);
            }
            let w: FamilyWord = match kind {
                Kind::U => make_u(*n, *m)?,
                Kind::W => make_w(*n, *m)?,
                _ => make_a(*n)?,
            };
            let text = if *symbolic {
                w.to_string()
            } else {
                w.concrete()?.to_string()
            };
            emit(
                json,
                json!({
                    "kind": w.kind.to_string(),
                    "n": w.n,
                    "m": w.m,
                    "word": text,
                    "length": w.length().to_string(),
                    "t_length": w.count_t().to_string(),
                }),
                || format!("{text}\n"),
            );
            Ok(Outcome::Yes)
        }
        Command::Wp { input } => {
            let w = read_word(input)?;
            let (s, cost) = britton_reduce(&w, &spec)?;
            let trivial = s.is_identity();
            emit(
                json,
                json!({ "trivial": trivial, "cost": cost.to_string(), "normal_form": s.to_string() }),
                || {
                    if trivial {
                        format!("trivial\ncost: {cost}\n")
                    } else {
                        format!("nontrivial\nnormal form: {s}\ncost: {cost}\n")
                    }
                },
            );
            Ok(verdict(trivial))
        }
        Command::Nreduced { input, n, cyclic } => {
            let w = read_word(input)?;
            let ok = if *cyclic {
                is_cyclically_n_reduced(&w, n, &spec)?
            } else {
                is_n_reduced(&w, n, &spec)?
            };
            emit(json, json!({ "n_reduced": ok, "n": n.to_string(), "cyclic": cyclic }), || {
                format!("{}\n", if ok { "reduced" } else { "not reduced" })
            });
            Ok(verdict(ok))
        }
        Command::Pieces { set, min_length } => {
            let rows = match load_set(set, &spec)? {
                LoadedSet::Concrete(s, b) => piece_rows(&s, &b, *min_length)?,
                LoadedSet::Symbolic(s, b) => piece_rows(&s, &b, *min_length)?,
            };
            let text = rows
                .iter()
                .map(|r| {
                    format!(
                        "{} | {} | l_t {} | labels [{}]\n",
                        r["r"].as_str().unwrap_or(""),
                        r["r_prime"].as_str().unwrap_or(""),
                        r["length_t"],
                        r["labels"]
                            .as_array()
                            .map(|a| a.iter().filter_map(|v| v.as_str()).collect::<Vec<_>>().join(", "))
                            .unwrap_or_default()
                    )
                })
                .collect::<String>();
            emit(json, json!({ "pieces": rows }), || text);
            Ok(Outcome::Yes)
        }
        Command::Cprime { set, lambda } => {
            let lambda = parse_lambda(lambda)?;
            let mut cert: CPrimeCertificate = match load_set(set, &spec)? {
                LoadedSet::Concrete(s, b) => verify_c_prime(&s, &lambda, &b)?,
                LoadedSet::Symbolic(s, b) => verify_c_prime(&s, &lambda, &b)?,
            };
            if let (Some(n), None) = (set.n, &set.words) {
                cert.n = format!("E{n}");
            }
            emit(json, serde_json::to_value(&cert).expect("serializable"), || cert.to_string());
            Ok(verdict(cert.verdict))
        }
        Command::Tietze {
            presentation,
            script,
            track,
            eliminate_y: elim,
        } => {
            let p = read_presentation(presentation)?;
            if *elim {
                let (q, script) = eliminate_y(&p)?;
                emit(
                    json,
                    json!({ "presentation": q.to_string(), "moves": script.len(), "script": format_script(&script) }),
                    || format!("{}# {} moves\n{}", q, script.len(), format_script(&script)),
                );
                return Ok(Outcome::Yes);
            }
            let Some(script) = script else {
                return Err(Error::Parse("tietze needs --script or --eliminate-y".into()));
            };
            let moves = parse_script(&read_input(script)?)?;
            let tracked = track.as_deref().map(str::parse::<Word>).transpose()?;
            let (q, ledger) = replay(&p, &moves, tracked)?;
            emit(
                json,
                json!({
                    "presentation": q.to_string(),
                    "moves": moves.len(),
                    "op4": ledger.op4_count(),
                    "factor": ledger.factor.to_string(),
                    "tracked": ledger.tracked.as_ref().map(|w| w.to_string()),
                    "trivial": q.is_empty(),
                }),
                || {
                    let mut s = q.to_string();
                    s.push_str(&format!("# moves: {}, op4: {}\n", moves.len(), ledger.op4_count()));
                    if let Some(w) = &ledger.tracked {
                        s.push_str(&format!("# area of {w} scales by at least {}\n", ledger.factor));
                    }
                    s
                },
            );
            Ok(Outcome::Yes)
        }
        Command::Area {
            input,
            presentation,
            max_area,
            max_len,
            max_states,
            certificate,
            bfs,
        } => {
            let w = read_word(input)?;
            let p = match presentation {
                Some(path) => read_presentation(path)?,
                None => make_mu0(),
            };
            let mut q = AreaQuery::new(w, p.clone(), *max_area, *max_len);
            q.max_states = *max_states;
            let out = if *bfs {
                min_area(&q, &NoBound)?
            } else {
                min_area(&q, bound_for(&p).as_ref())?
            };
            if let (AreaOutcome::Found { certificate: c, .. }, Some(path)) = (&out, certificate) {
                fs::write(path, c.to_text())
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let value = match &out {
                AreaOutcome::Found { area, certificate } => json!({
                    "found": true,
                    "area": area,
                    "certificate": certificate.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                }),
                AreaOutcome::NotFound {
                    area_bound,
                    length_bound,
                    state_limit,
                } => json!({
                    "found": false,
                    "area_bound": area_bound,
                    "length_bound": length_bound,
                    "state_limit": state_limit,
                }),
            };
            emit(json, value, || format!("{out}\n"));
            Ok(verdict(out.area().is_some()))
        }
        Command::Cert {
            certificate,
            word,
            presentation,
            conversion,
        } => {
            let p = match presentation {
                Some(path) => read_presentation(path)?,
                None => make_mu0(),
            };
            if let Some(n) = conversion {
                let c = conversion_certificate(*n)?;
                let cost = conversion_cost(*n)?;
                let ok = check_certificate(&c, &p);
                emit(
                    json,
                    json!({
                        "word": c.word.to_string(),
                        "terms": c.len(),
                        "cost": cost.total.to_string(),
                        "bound": cost.bound.to_string(),
                        "checks": ok,
                        "certificate": c.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    }),
                    || format!("# word: {}\n# terms: {}\n{}", c.word, c.len(), c.to_text()),
                );
                return Ok(verdict(ok));
            }
            let (Some(path), Some(word)) = (certificate, word) else {
                return Err(Error::Parse("cert needs a certificate file and --word".into()));
            };
            let c = AreaCertificate::parse_terms(word.parse()?, &read_input(path)?)?;
            let ok = check_certificate(&c, &p);
            emit(json, json!({ "valid": ok, "terms": c.len() }), || {
                format!("{} ({} terms)\n", if ok { "valid" } else { "invalid" }, c.len())
            });
            Ok(verdict(ok))
        }
        Command::Diagram {
            op,
            input,
            presentation,
            dot,
            fixture,
            fixture_presentation,
        } => {
            if let Some(name) = fixture {
                let (d, p) = match name.as_str() {
                    "empty" => fixtures::empty(),
                    "single" => fixtures::single_cell(),
                    "two" => fixtures::two_cells(),
                    "band" => fixtures::band(),
                    "ring" => fixtures::ring(),
                    "cables" => fixtures::cables(),
                    "loop" => fixtures::loop_cable(),
                    "parallel" => fixtures::parallel_cables(),
                    other => return Err(Error::Parse(format!("unknown fixture `{other}`"))),
                };
                print!("{}", if *fixture_presentation { p.to_string() } else { d.to_string() });
                return Ok(Outcome::Yes);
            }
            let (Some(op), Some(input), Some(presentation)) = (op, input, presentation) else {
                return Err(Error::Parse("diagram needs an operation, a file and --presentation".into()));
            };
            let d: Diagram = read_input(input)?.parse()?;
            let p = read_presentation(presentation)?;
            run_diagram(json, *op, &d, &p, *dot)
        }
    }
}

fn run_diagram(json: bool, op: DiagramOp, d: &Diagram, p: &Presentation, dot: bool) -> Result<Outcome, Error> {
    match op {
        DiagramOp::Validate => {
            let r = validate(d, p);
            let boundary = if r.is_valid() {
                Some(diagram::boundary_word(d, p)?.to_string())
            } else {
                None
            };
            let mut value = serde_json::to_value(&r).expect("serializable");
            value["boundary"] = json!(boundary);
            emit(json, value, || {
                let mut s = r.to_string();
                if let Some(b) = &boundary {
                    s.push_str(&format!("boundary: {b}\n"));
                }
                s
            });
            Ok(verdict(r.is_valid()))
        }
        DiagramOp::Bands => {
            let bands = trace_bands(d, p)?;
            emit(json, json!({ "bands": bands }), || {
                bands
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        format!(
                            "band {i}: {} cells {:?}{}\n",
                            b.len(),
                            b.cells,
                            if b.is_ring { " ring" } else { "" }
                        )
                    })
                    .collect()
            });
            Ok(Outcome::Yes)
        }
        DiagramOp::Cables => {
            let bands = trace_bands(d, p)?;
            let cables = group_cables(d, p, &bands)?;
            emit(json, json!({ "bands": bands.len(), "cables": cables }), || {
                let mut s = format!("{} bands, {} cables\n", bands.len(), cables.len());
                for (i, c) in cables.iter().enumerate() {
                    s.push_str(&format!(
                        "cable {i}: bands {:?}, faces {} and {}\n",
                        c.bands, c.ends[0].face, c.ends[1].face
                    ));
                }
                s
            });
            Ok(Outcome::Yes)
        }
        DiagramOp::Dual => {
            let bands = trace_bands(d, p)?;
            let cables = group_cables(d, p, &bands)?;
            let g = dual_graph(d, p, &cables)?;
            if dot {
                print!("{}", g.to_dot());
            } else {
                emit(json, serde_json::to_value(&g).expect("serializable"), || {
                    format!("V = {}, E = {}\n", g.vertices.len(), g.edges.len())
                });
            }
            Ok(Outcome::Yes)
        }
        DiagramOp::Audit => {
            let audit = euler_audit(d, p)?;
            emit(json, json!({ "components": audit }), || {
                audit.iter().map(|a| format!("{a}\n")).collect()
            });
            Ok(Outcome::Yes)
        }
    }
}

enum LoadedSet {
    Concrete(SymmetrizedSet<bgpres::bs::BsElement>, ConcreteBands),
    Symbolic(SymmetrizedSet<bgpres::cancel::SymInt>, SymbolicBands),
}

fn load_set(args: &SetArgs, spec: &HnnSpec) -> Result<LoadedSet, Error> {
    if let (Some(path), Some(bound)) = (&args.words, &args.bound) {
        let words = read_input(path)?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Word>, _>>()?;
        let set = symmetrize(&words, bound, spec)?;
        return Ok(LoadedSet::Concrete(set, ConcreteBands { spec: *spec, n: bound.clone() }));
    }
    let n = args.n.ok_or_else(|| Error::Parse("need --n or --words".into()))?;
    let rel: SymWord = family_relator(n)?;
    if args.symbolic {
        let set = symmetrize_symbolic(&[rel], n)?;
        return Ok(LoadedSet::Symbolic(set, SymbolicBands { level: n }));
    }
    let bits = |k: u32| {
        k.checked_sub(1)
            .and_then(tower)
            .and_then(|e| u64::try_from(e).ok())
            .map_or(u64::MAX, |b| b + 1)
    };
    let e = tower(n).ok_or_else(|| Error::Budget {
        what: format!("E{n} in concrete mode (try --symbolic)"),
        bits: bits(n),
        limit: bits(MAX_CONCRETE_TOWER + 1),
    })?;
    let set = symmetrize(&[rel.materialize_up_to(MAX_CONCRETE_TOWER + 1)?], &e, spec)?;
    Ok(LoadedSet::Concrete(set, ConcreteBands { spec: *spec, n: e }))
}

fn piece_rows<B: BandAlgebra>(
    set: &SymmetrizedSet<B::Elem>,
    bands: &B,
    min_length: usize,
) -> Result<Vec<Value>, Error> {
    let mut rows = Vec::new();
    for a in 0..set.len() {
        for b in 0..set.len() {
            if let Some(p) = max_piece(set, a, b, bands)? {
                if p.length_t >= min_length {
                    rows.push(json!({
                        "r": set.members[a].to_string(),
                        "r_prime": set.members[b].to_string(),
                        "length_t": p.length_t,
                        "labels": p.labels,
                        "v1": p.v1,
                        "v2": p.v2,
                    }));
                }
            }
        }
    }
    Ok(rows)
}
