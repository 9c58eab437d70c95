//! Command-line front end: argument definitions, verb dispatch and the
//! `--json` output schema.
//!
//! Exit codes: 0 when a verdict or value was computed (including a false
//! verdict), 2 for parse, scope and precondition errors, 3 for `NotFound`
//! and `Unsatisfiable`, 4 when a resource budget was exceeded.

pub mod parse;

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::batheory::{
    ba_equiv, enumerate_theories, ershov_invariants, isolated_points_conflict, AtomCount, BaDescriptor,
};
use crate::boolalg::{
    clopen_algebra, dual_morphism, fo_eval, sentence_corpus, stone_space, BaElement,
    FiniteBoolAlg, FiniteSpace, SpaceMap,
};
use crate::clogic::{
    ceval, clopen_code, joint_spectrum, reconstruct, singularity_report, spectrum_indicator,
    translate_fo, CElement, CStarAlgebraFin,
};
use crate::efgames::{ef_finite_bas, ef_finite_orders, ef_ordinals, MAX_BA_ATOMS, MAX_BA_RANK, MAX_ORDINAL_RANK};
use crate::error::{Error, Result};
use crate::ordinal::{calkin_equiv, ord_arith, ord_equiv, ArithOp, Ordinal};
use crate::saturation::{
    interpolate_chain, max_orthogonal_family, realize_type, Interpolation, PresentedAtomlessBA,
    Realization,
};
use parse::*;

pub const DEFAULT_SEED: u64 = 20_160_901;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cstarlab", version, about = "Decision procedures and evaluators for ordinals, Boolean algebras and C(X)")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Also write the output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpArg {
    Add,
    Mul,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EfKind {
    /// Ordinals under their order.
    Ordinal,
    /// Finite linear orders given by their sizes.
    Order,
    /// Finite Boolean algebras given by their atom counts.
    Ba,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Ordinal sum, product or power.
    OrdArith { op: OpArg, a: String, b: String },
    /// Elementary equivalence of two ordinals as linear orders.
    OrdEq { a: String, b: String },
    /// Equivalence of the projection posets of generalized Calkin algebras.
    CalkinEq { a: String, b: String },
    /// Ehrenfeucht–Fraïssé game at a fixed number of rounds.
    Ef {
        a: String,
        b: String,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = EfKind::Ordinal)]
        kind: EfKind,
    },
    /// Invariant triple and derivative chain of a descriptor.
    BaInvariants { descriptor: String },
    /// Elementary equivalence of two Boolean algebras (equivalently of C(X), C(Y)).
    BaEq { a: String, b: String },
    /// The first K complete theories of Boolean algebras.
    BaEnumerate { k: usize },
    /// Stone duality for the algebra with the given number of atoms, or for a
    /// continuous map given by `--map`.
    Stone {
        atoms: usize,
        /// Comma-separated images of the points `0..atoms`.
        #[arg(long)]
        map: Option<String>,
        /// Size of the codomain of `--map`.
        #[arg(long)]
        codomain: Option<usize>,
    },
    /// Continuous translation of a Boolean-algebra sentence.
    Translate {
        sentence: String,
        /// Also evaluate both sides in P(n) and C(n).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Certified evaluation of a continuous formula in C(X).
    Ceval {
        formula: String,
        #[arg(long, default_value_t = 1)]
        points: usize,
        /// Parameter binding `name=ELEMENT`; may be repeated.
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Joint spectrum of a tuple of elements.
    Jspec {
        #[arg(required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Whether a complex tuple lies in the joint spectrum.
    Fmember {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Clopen code of an element at scale m, with its reconstruction.
    Code {
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        m: u64,
    },
    /// Element strictly between an ascending and a descending chain.
    Interpolate {
        /// `atomless` or `finite:N`.
        #[arg(long, default_value = "atomless")]
        algebra: String,
        /// `;`-separated ascending chain.
        #[arg(long, default_value = "")]
        lower: String,
        /// `;`-separated descending chain.
        #[arg(long, default_value = "")]
        upper: String,
    },
    /// Realize or refute a degree-1 type in C(X).
    Realize {
        conditions: String,
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
    /// Largest family of orthogonal positive norm-one elements of C(X).
    Orth { points: usize },
}

/// Rendered result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit: i32,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("JSON values serialize") + "\n"
        } else {
            self.text.clone()
        }
    }
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::OrdArith { .. } => "ord-arith",
            Verb::OrdEq { .. } => "ord-eq",
            Verb::CalkinEq { .. } => "calkin-eq",
            Verb::Ef { .. } => "ef",
            Verb::BaInvariants { .. } => "ba-invariants",
            Verb::BaEq { .. } => "ba-eq",
            Verb::BaEnumerate { .. } => "ba-enumerate",
            Verb::Stone { .. } => "stone",
            Verb::Translate { .. } => "translate",
            Verb::Ceval { .. } => "ceval",
            Verb::Jspec { .. } => "jspec",
            Verb::Fmember { .. } => "fmember",
            Verb::Code { .. } => "code",
            Verb::Interpolate { .. } => "interpolate",
            Verb::Realize { .. } => "realize",
            Verb::Orth { .. } => "orth",
        }
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    match (z.re, z.im) {
        (re, im) if im == 0.0 => format!("{re}"),
        (re, im) if re == 0.0 => format!("{im}i"),
        (re, im) if im < 0.0 => format!("{re}{im}i"),
        (re, im) => format!("{re}+{im}i"),
    }
}

fn fmt_tuple(t: &[Complex64]) -> String {
    let parts: Vec<String> = t.iter().map(|&z| fmt_complex(z)).collect();
    format!("({})", parts.join(", "))
}

fn fmt_element(e: &CElement) -> String {
    let parts: Vec<String> = e.0.iter().map(|&z| fmt_complex(z)).collect();
    parts.join(",")
}

/// Runs one command; errors become outcomes with the matching exit code.
pub fn run(cli: &Cli) -> Outcome {
    let verb = cli.verb.name();
    match dispatch(cli) {
        Ok(mut out) => {
            if let Value::Object(map) = &mut out.json {
                map.insert("verb".into(), json!(verb));
            }
            out
        }
        Err(e) => error_outcome(verb, &e),
    }
}

pub fn error_outcome(verb: &str, e: &Error) -> Outcome {
    let (exit, kind, best) = match e {
        Error::Parse { .. } => (EXIT_PARSE, "parse", None),
        Error::Scope(_) => (EXIT_PARSE, "scope", None),
        Error::Precondition(_) => (EXIT_PARSE, "precondition", None),
        Error::Budget { best, .. } => (EXIT_BUDGET, "budget", *best),
    };
    let mut err = json!({ "kind": kind, "message": e.to_string() });
    if let Error::Parse { pos, .. } = e {
        err["position"] = json!(pos);
    }
    if let Some((lo, hi)) = best {
        err["best"] = json!({ "lower": lo, "upper": hi });
    }
    Outcome {
        exit,
        json: json!({ "verb": verb, "error": err }),
        text: format!("error: {e}\n"),
    }
}

fn ok(json: Value, text: String) -> Result<Outcome> {
    Ok(Outcome { exit: EXIT_OK, json, text })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.verb {
        Verb::OrdArith { op, a, b } => ord_arith_cmd(*op, a, b),
        Verb::OrdEq { a, b } => ordinal_equivalence("ord-eq", a, b, ord_equiv),
        Verb::CalkinEq { a, b } => ordinal_equivalence("calkin-eq", a, b, calkin_equiv),
        Verb::Ef { a, b, rank, kind } => ef_cmd(a, b, *rank, *kind),
        Verb::BaInvariants { descriptor } => ba_invariants_cmd(descriptor),
        Verb::BaEq { a, b } => ba_eq_cmd(a, b, cli.seed),
        Verb::BaEnumerate { k } => ba_enumerate_cmd(*k),
        Verb::Stone { atoms, map, codomain } => stone_cmd(*atoms, map.as_deref(), *codomain),
        Verb::Translate { sentence, points } => translate_cmd(sentence, *points),
        Verb::Ceval { formula, points, params, tol } => ceval_cmd(formula, *points, params, *tol),
        Verb::Jspec { elements } => jspec_cmd(elements),
        Verb::Fmember { lambda, elements } => fmember_cmd(lambda, elements),
        Verb::Code { element, m } => code_cmd(element, *m),
        Verb::Interpolate { algebra, lower, upper } => interpolate_cmd(algebra, lower, upper),
        Verb::Realize { conditions, points, tol } => realize_cmd(conditions, *points, *tol),
        Verb::Orth { points } => orth_cmd(*points),
    }
}

fn ord_arith_cmd(op: OpArg, a: &str, b: &str) -> Result<Outcome> {
    let (x, y) = (parse_ordinal(a)?, parse_ordinal(b)?);
    let (arith, name) = match op {
        OpArg::Add => (ArithOp::Add, "add"),
        OpArg::Mul => (ArithOp::Mul, "mul"),
        OpArg::Pow => (ArithOp::Pow, "pow"),
    };
    let r = ord_arith(arith, &x, &y);
    ok(
        json!({ "inputs": { "op": name, "a": x.to_string(), "b": y.to_string() }, "value": r.to_string() }),
        format!("{r}\n"),
    )
}

/// EF oracle results at ranks `1..=MAX_ORDINAL_RANK`, stopping at the first
/// rank exceeding the budget.
fn ordinal_cross_checks(a: &Ordinal, b: &Ordinal, verdict: bool) -> Option<Value> {
    let mut rows = Vec::new();
    for rank in 1..=MAX_ORDINAL_RANK {
        match ef_ordinals(a, b, rank) {
            Ok(w) => rows.push((rank, w)),
            Err(_) => break,
        }
    }
    if rows.is_empty() {
        return None;
    }
    let consistent = !verdict || rows.iter().all(|&(_, w)| w);
    Some(json!({
        "ef": rows.iter().map(|&(r, w)| json!({ "rank": r, "duplicator_wins": w })).collect::<Vec<_>>(),
        "consistent": consistent,
    }))
}

fn ordinal_equivalence(verb: &str, a: &str, b: &str, decide: fn(&Ordinal, &Ordinal) -> bool) -> Result<Outcome> {
    let (x, y) = (parse_ordinal(a)?, parse_ordinal(b)?);
    let verdict = decide(&x, &y);
    let (sx, sy) = (x.split_mod_omega_omega(), y.split_mod_omega_omega());
    let split = |s: &crate::ordinal::OmegaOmegaSplit| {
        json!({ "quotient": s.quotient.to_string(), "residue": s.residue.to_string() })
    };
    let mut out = json!({
        "inputs": { "a": x.to_string(), "b": y.to_string() },
        "verdict": verdict,
        "certificate": { "a": split(&sx), "b": split(&sy) },
    });
    let mut text = format!(
        "{verb}: {verdict}\n  {x} = w^w*({}) + {}\n  {y} = w^w*({}) + {}\n",
        sx.quotient, sx.residue, sy.quotient, sy.residue
    );
    if let Some(cc) = ordinal_cross_checks(&x, &y, verdict) {
        for row in cc["ef"].as_array().unwrap() {
            text += &format!("  EF rank {}: duplicator {}\n", row["rank"], if row["duplicator_wins"] == true { "wins" } else { "loses" });
        }
        out["cross_checks"] = cc;
    }
    ok(out, text)
}

fn ef_cmd(a: &str, b: &str, rank: usize, kind: EfKind) -> Result<Outcome> {
    let nat = |s: &str| -> Result<u64> {
        parse_ordinal(s)?.as_nat().ok_or_else(|| Error::parse(0, format!("`{s}` is not a natural number")))
    };
    let (inputs, wins) = match kind {
        EfKind::Ordinal => {
            let (x, y) = (parse_ordinal(a)?, parse_ordinal(b)?);
            let w = ef_ordinals(&x, &y, rank)?;
            (json!({ "kind": "ordinal", "a": x.to_string(), "b": y.to_string(), "rank": rank }), w)
        }
        EfKind::Order => {
            let (m, n) = (nat(a)?, nat(b)?);
            (json!({ "kind": "order", "a": m, "b": n, "rank": rank }), ef_finite_orders(m, n, rank)?)
        }
        EfKind::Ba => {
            let (m, n) = (nat(a)?, nat(b)?);
            let w = ef_finite_bas(&FiniteBoolAlg::new(m as usize), &FiniteBoolAlg::new(n as usize), rank)?;
            (json!({ "kind": "ba", "a": m, "b": n, "rank": rank }), w)
        }
    };
    ok(
        json!({ "inputs": inputs, "verdict": wins }),
        format!("duplicator {} the {rank}-round game\n", if wins { "wins" } else { "loses" }),
    )
}

fn invariant_json(d: &BaDescriptor) -> Value {
    serde_json::to_value(ershov_invariants(d)).expect("invariants serialize")
}

fn ba_invariants_cmd(text: &str) -> Result<Outcome> {
    let d = parse_descriptor(text)?;
    let inv = ershov_invariants(&d);
    let chain: Vec<String> = d.derivative_chain().iter().map(|s| s.to_string()).collect();
    ok(
        json!({ "inputs": { "descriptor": d.to_string() }, "value": invariant_json(&d), "certificate": { "derivative_chain": chain } }),
        format!("{inv}\n  chain: {}\n", if chain.is_empty() { "trivial".into() } else { chain.join(" -> ") }),
    )
}

fn finite_atoms(d: &BaDescriptor) -> Option<usize> {
    match d.atom_count() {
        AtomCount::Finite(n) if n > 0 && !d.is_infinite() && !d.has_atomless_part() => Some(n as usize),
        _ => None,
    }
}

fn ba_eq_cmd(a: &str, b: &str, seed: u64) -> Result<Outcome> {
    let (x, y) = (parse_descriptor(a)?, parse_descriptor(b)?);
    let verdict = ba_equiv(&x, &y);
    let (ix, iy) = (ershov_invariants(&x), ershov_invariants(&y));
    let mut out = json!({
        "inputs": { "a": x.to_string(), "b": y.to_string() },
        "verdict": verdict,
        "certificate": { "a": invariant_json(&x), "b": invariant_json(&y) },
    });
    let mut text = format!("ba-eq: {verdict}\n  {x}: {ix}\n  {y}: {iy}\n");
    if let (Some(m), Some(n)) = (finite_atoms(&x), finite_atoms(&y)) {
        if m <= MAX_BA_ATOMS && n <= MAX_BA_ATOMS {
            let (bm, bn) = (FiniteBoolAlg::new(m), FiniteBoolAlg::new(n));
            let mut rows = Vec::new();
            for rank in 1..=MAX_BA_RANK {
                rows.push(json!({ "rank": rank, "duplicator_wins": ef_finite_bas(&bm, &bn, rank)? }));
            }
            let corpus = sentence_corpus(seed, 64, 2);
            let mut agree = true;
            for phi in &corpus {
                agree &= fo_eval(phi, &bm, &HashMap::new())? == fo_eval(phi, &bn, &HashMap::new())?;
            }
            let ef_all = rows.iter().all(|r| r["duplicator_wins"] == true);
            let consistent = !verdict || (ef_all && agree);
            text += &format!("  EF ranks 1..={MAX_BA_RANK}: {}; corpus agreement: {agree}\n", if ef_all { "duplicator wins" } else { "spoiler wins" });
            out["cross_checks"] = json!({
                "ef": rows,
                "corpus": { "seed": seed, "sentences": corpus.len(), "agree": agree },
                "consistent": consistent,
            });
        }
    }
    if let Some(note) = isolated_points_conflict(&x, &y) {
        text += &format!("  note [{}]: {}\n", note.claim, note.message);
        out["conflict"] = serde_json::to_value(&note).expect("note serializes");
    }
    ok(out, text)
}

fn ba_enumerate_cmd(k: usize) -> Result<Outcome> {
    let list = enumerate_theories(k)?;
    let text: String = list.iter().enumerate().map(|(i, t)| format!("{i}: {t}\n")).collect();
    ok(json!({ "inputs": { "k": k }, "value": list }), text)
}

fn stone_cmd(atoms: usize, map: Option<&str>, codomain: Option<usize>) -> Result<Outcome> {
    let b = FiniteBoolAlg::new(atoms);
    let s = stone_space(&b);
    let algebra_round_trip = clopen_algebra(&s).is_isomorphic(&b);
    let x = FiniteSpace::new(atoms);
    let space_round_trip = stone_space(&clopen_algebra(&x)).is_homeomorphic(&x);
    let mut out = json!({
        "inputs": { "atoms": atoms },
        "value": { "stone_points": s.points, "clopen_atoms": clopen_algebra(&s).atom_count() },
        "certificate": { "algebra_round_trip": algebra_round_trip, "space_round_trip": space_round_trip },
    });
    let mut text = format!(
        "S(P({atoms})) has {} points; CL(S(B)) = B: {algebra_round_trip}; S(CL(X)) = X: {space_round_trip}\n",
        s.points
    );
    if let Some(m) = map {
        let cod = codomain.ok_or_else(|| Error::precondition("--map needs --codomain"))?;
        let images = m
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::parse(0, format!("bad point `{p}`"))))
            .collect::<Result<Vec<_>>>()?;
        let f = SpaceMap::new(FiniteSpace::new(atoms), FiniteSpace::new(cod), images)?;
        let h = dual_morphism(&f);
        let atom_images: Vec<String> = (0..cod).map(|q| h.apply(h.source.atom(q)).to_string()).collect();
        out["inputs"]["map"] = json!(f.images);
        out["inputs"]["codomain"] = json!(cod);
        out["value"]["dual_atom_images"] = json!(atom_images);
        out["certificate"]["homomorphism"] = json!(h.preserves_operations());
        out["certificate"]["dual_point_map_recovers_map"] = json!(h.dual_point_map() == f);
        out["certificate"]["injective_iff_dual_surjective"] = json!(f.is_injective() == h.is_surjective());
        out["certificate"]["surjective_iff_dual_injective"] = json!(f.is_surjective() == h.is_injective());
        text += &format!("dual homomorphism sends atom q to f^-1(q): {}\n", atom_images.join(" "));
    }
    ok(out, text)
}

fn translate_cmd(sentence: &str, points: Option<usize>) -> Result<Outcome> {
    let phi = parse_fo_sentence(sentence)?;
    let t = translate_fo(&phi);
    let mut out = json!({ "inputs": { "sentence": phi.to_string() }, "value": t.to_string() });
    let mut text = format!("{t}\n");
    if let Some(n) = points {
        let truth = fo_eval(&phi, &FiniteBoolAlg::new(n), &HashMap::new())?;
        let cert = ceval(&t, &CStarAlgebraFin::new(n)?, &HashMap::new(), 1e-6)?;
        out["inputs"]["points"] = json!(n);
        out["verdict"] = json!(truth);
        out["certificate"] = serde_json::to_value(cert).expect("certificate serializes");
        text += &format!("P({n}) satisfies it: {truth}; value in C({n}): [{}, {}]\n", cert.lower, cert.upper);
    }
    ok(out, text)
}

fn ceval_cmd(formula: &str, points: usize, params: &[String], tol: f64) -> Result<Outcome> {
    let a = CStarAlgebraFin::new(points)?;
    let mut names = Vec::new();
    let mut bound = HashMap::new();
    for p in params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| Error::parse(0, format!("parameter `{p}` is not name=ELEMENT")))?;
        names.push(name.trim().to_string());
        bound.insert(name.trim().to_string(), parse_celement(value)?);
    }
    let phi = parse_cformula_with(formula, &names)?;
    let cert = ceval(&phi, &a, &bound, tol)?;
    let shown: serde_json::Map<String, Value> =
        bound.iter().map(|(k, v)| (k.clone(), json!(fmt_element(v)))).collect();
    ok(
        json!({
            "inputs": { "formula": phi.to_string(), "points": points, "params": shown, "tol": tol },
            "value": [cert.lower, cert.upper],
            "certificate": cert,
        }),
        format!("[{}, {}] (depth {})\n", cert.lower, cert.upper, cert.grid_depth),
    )
}

fn parse_elements(elements: &[String]) -> Result<Vec<CElement>> {
    elements.iter().map(|e| parse_celement(e)).collect()
}

fn jspec_cmd(elements: &[String]) -> Result<Outcome> {
    let a = parse_elements(elements)?;
    let spec = joint_spectrum(&a)?;
    let shown: Vec<String> = spec.iter().map(|t| fmt_tuple(t)).collect();
    ok(
        json!({ "inputs": { "elements": a.iter().map(fmt_element).collect::<Vec<_>>() }, "value": shown }),
        format!("{{{}}}\n", shown.join(", ")),
    )
}

fn fmember_cmd(lambda: &str, elements: &[String]) -> Result<Outcome> {
    let a = parse_elements(elements)?;
    let l = parse_complex_tuple(lambda)?;
    let report = singularity_report(&a, &l)?;
    let f = spectrum_indicator(&a, &l)?;
    ok(
        json!({
            "inputs": { "elements": a.iter().map(fmt_element).collect::<Vec<_>>(), "lambda": fmt_tuple(&l) },
            "verdict": report.pointwise,
            "certificate": { "indicator": f, "singularity": report },
            "cross_checks": { "consistent": report.consistent() && (f == 0.0) == report.pointwise },
        }),
        format!("{} in joint spectrum: {}; F = {f}\n", fmt_tuple(&l), report.pointwise),
    )
}

fn code_cmd(element: &str, m: u64) -> Result<Outcome> {
    let f = parse_celement(element)?;
    let sets = clopen_code(&f, m)?;
    let g = reconstruct(&sets, f.len())?;
    let err = f.sub(&g).norm();
    let text: String = sets
        .iter()
        .map(|s| format!("{}: {:?}\n", fmt_complex(s.center()), s.members))
        .chain(std::iter::once(format!("reconstruction {} (error {err})\n", fmt_element(&g))))
        .collect();
    ok(
        json!({
            "inputs": { "element": fmt_element(&f), "m": m },
            "value": sets.iter().map(|s| json!({ "y": fmt_complex(s.center()), "j1": s.j1, "j2": s.j2, "members": s.members })).collect::<Vec<_>>(),
            "certificate": { "reconstruction": fmt_element(&g), "error": err, "bound": 1.0 / m as f64 },
        }),
        text,
    )
}

fn interpolate_cmd(algebra: &str, lower: &str, upper: &str) -> Result<Outcome> {
    let inputs = json!({ "algebra": algebra, "lower": split_list(lower), "upper": split_list(upper) });
    let (found, shown) = if algebra == "atomless" {
        let ys = split_list(lower).into_iter().map(parse_cylinder).collect::<Result<Vec<_>>>()?;
        let zs = split_list(upper).into_iter().map(parse_cylinder).collect::<Result<Vec<_>>>()?;
        match interpolate_chain(&PresentedAtomlessBA, &ys, &zs)? {
            Interpolation::Found(c) => (true, c.to_string()),
            Interpolation::NotFound => (false, String::new()),
        }
    } else if let Some(n) = algebra.strip_prefix("finite:") {
        let n: usize = n.parse().map_err(|_| Error::parse(7, "expected finite:N"))?;
        let b = FiniteBoolAlg::new(n);
        let elems = |s: &str| -> Result<Vec<BaElement>> {
            split_list(s).into_iter().map(|t| b.element(parse_atom_set(t)?)).collect()
        };
        match interpolate_chain(&b, &elems(lower)?, &elems(upper)?)? {
            Interpolation::Found(c) => (true, c.to_string()),
            Interpolation::NotFound => (false, String::new()),
        }
    } else {
        return Err(Error::parse(0, format!("unknown algebra `{algebra}`; use atomless or finite:N")));
    };
    let mut out = json!({ "inputs": inputs, "verdict": found });
    if found {
        out["value"] = json!(shown);
        ok(out, format!("{shown}\n"))
    } else {
        Ok(Outcome { exit: EXIT_NEGATIVE, json: out, text: "NotFound\n".into() })
    }
}

fn realize_cmd(conditions: &str, points: usize, tol: f64) -> Result<Outcome> {
    let a = CStarAlgebraFin::new(points)?;
    let conds = parse_type(conditions)?;
    let inputs = json!({
        "conditions": conds.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "points": points,
        "tol": tol,
    });
    match realize_type(&conds, &a, tol)? {
        Realization::Realized(asg) => {
            let mut names: Vec<&String> = asg.keys().collect();
            names.sort();
            let shown: serde_json::Map<String, Value> =
                names.iter().map(|k| ((*k).clone(), json!(fmt_element(&asg[*k])))).collect();
            let text: String = names.iter().map(|k| format!("{k} = {}\n", fmt_element(&asg[*k]))).collect();
            ok(json!({ "inputs": inputs, "verdict": true, "value": shown }), text)
        }
        Realization::Unsatisfiable { eps, delta } => Ok(Outcome {
            exit: EXIT_NEGATIVE,
            json: json!({ "inputs": inputs, "verdict": false, "certificate": { "eps": eps, "delta": delta } }),
            text: format!("Unsatisfiable: conditions {delta:?} have no common solution within {eps}\n"),
        }),
        Realization::Inconclusive { boxes } => Err(Error::budget(format!(
            "realize_type inconclusive after {boxes} boxes"
        ))),
    }
}

fn orth_cmd(points: usize) -> Result<Outcome> {
    let fam = max_orthogonal_family(&CStarAlgebraFin::new(points)?)?;
    let witnesses: Vec<String> = fam.witnesses.iter().map(fmt_element).collect();
    ok(
        json!({ "inputs": { "points": points }, "value": fam.size, "certificate": { "witnesses": witnesses } }),
        format!("{}\n", fam.size),
    )
}
