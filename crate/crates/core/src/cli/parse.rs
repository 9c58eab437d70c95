//! Text grammars for ordinals, Boolean-algebra sentences, descriptors,
//! continuous formulas, type conditions and elements.

use num_complex::Complex64;

use crate::batheory::BaDescriptor;
use crate::boolalg::{BaTerm, FoFormula};
use crate::clogic::{CElement, CFormula, CTerm, Sort};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::saturation::{CylinderSet, Target, TypeCondition};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos, msg)
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("expected a natural number"));
        }
        let n = digits.parse().map_err(|_| self.error("natural number too large"))?;
        self.pos += digits.len();
        Ok(n)
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || c == '_' || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        let save = self.pos;
        let id = self.ident();
        self.pos = save;
        id
    }

    /// A decimal number with optional sign, fraction and exponent.
    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| {
                let sign_ok = (c == '-' || c == '+')
                    && (i == 0 || matches!(rest.as_bytes()[i - 1], b'e' | b'E'));
                !(c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_ok)
            })
            .map_or(rest.len(), |(i, _)| i);
        let text = &rest[..len];
        let x: f64 = text.parse().map_err(|_| self.error(format!("bad number `{text}`")))?;
        if !x.is_finite() {
            return Err(self.error("number must be finite"));
        }
        self.pos += len;
        Ok(x)
    }
}

/// Ordinal grammar: `0`, naturals, `w`, `w^<primary>`, `<atom>*<nat>`,
/// `+` between terms, parentheses. The result is normalized by ordinal
/// addition.
pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    let mut c = Cursor::new(text);
    let a = ord_sum(&mut c)?;
    c.finish()?;
    Ok(a)
}

fn ord_sum(c: &mut Cursor) -> Result<Ordinal> {
    let mut acc = ord_term(c)?;
    while c.eat("+") {
        acc = acc.add(&ord_term(c)?);
    }
    Ok(acc)
}

fn ord_term(c: &mut Cursor) -> Result<Ordinal> {
    let mut a = ord_primary(c)?;
    while c.eat("*") {
        a = a.mul(&Ordinal::nat(c.nat()?));
    }
    Ok(a)
}

fn ord_primary(c: &mut Cursor) -> Result<Ordinal> {
    match c.peek() {
        Some('(') => {
            c.expect("(")?;
            let a = ord_sum(c)?;
            c.expect(")")?;
            Ok(a)
        }
        Some(d) if d.is_ascii_digit() => Ok(Ordinal::nat(c.nat()?)),
        _ => match c.ident() {
            Some("w") | Some("omega") => {
                if c.eat("^") {
                    Ok(Ordinal::omega_pow(ord_primary(c)?))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            _ => Err(c.error("expected an ordinal")),
        },
    }
}

/// Infix Boolean-algebra sentence grammar, e.g. `forall x. x /\ x = x`.
pub fn parse_fo_formula(text: &str) -> Result<FoFormula> {
    let mut c = Cursor::new(text);
    let phi = fo_formula(&mut c)?;
    c.finish()?;
    Ok(phi)
}

/// As [`parse_fo_formula`], rejecting free variables.
pub fn parse_fo_sentence(text: &str) -> Result<FoFormula> {
    let phi = parse_fo_formula(text)?;
    match phi.free_vars().into_iter().next() {
        Some(v) => Err(Error::Scope(v)),
        None => Ok(phi),
    }
}

fn fo_formula(c: &mut Cursor) -> Result<FoFormula> {
    let lhs = fo_disj(c)?;
    if c.eat("->") {
        let rhs = fo_formula(c)?;
        return Ok(FoFormula::Implies(Box::new(lhs), Box::new(rhs)));
    }
    Ok(lhs)
}

fn fo_disj(c: &mut Cursor) -> Result<FoFormula> {
    let mut acc = fo_conj(c)?;
    while c.eat("|") {
        acc = FoFormula::Or(Box::new(acc), Box::new(fo_conj(c)?));
    }
    Ok(acc)
}

fn fo_conj(c: &mut Cursor) -> Result<FoFormula> {
    let mut acc = fo_unary(c)?;
    while c.eat("&") {
        acc = FoFormula::And(Box::new(acc), Box::new(fo_unary(c)?));
    }
    Ok(acc)
}

fn fo_unary(c: &mut Cursor) -> Result<FoFormula> {
    if c.peek() == Some('!') && !c.rest().starts_with("!=") {
        c.expect("!")?;
        return Ok(FoFormula::Not(Box::new(fo_unary(c)?)));
    }
    if let Some(q @ ("forall" | "exists")) = c.peek_ident() {
        c.ident();
        let v = c
            .ident()
            .filter(|v| !matches!(*v, "forall" | "exists"))
            .ok_or_else(|| c.error("expected a variable"))?
            .to_string();
        c.expect(".")?;
        let body = Box::new(fo_formula(c)?);
        return Ok(if q == "forall" { FoFormula::Forall(v, body) } else { FoFormula::Exists(v, body) });
    }
    if c.peek() == Some('(') {
        let save = c.pos;
        c.expect("(")?;
        if let Ok(phi) = fo_formula(c) {
            if c.eat(")") {
                return Ok(phi);
            }
        }
        c.pos = save;
    }
    fo_atomic(c)
}

fn fo_atomic(c: &mut Cursor) -> Result<FoFormula> {
    let s = ba_join(c)?;
    if c.eat("!=") {
        return Ok(FoFormula::Not(Box::new(FoFormula::Eq(s, ba_join(c)?))));
    }
    if c.eat("<=") {
        return Ok(FoFormula::Le(s, ba_join(c)?));
    }
    if c.eat("=") {
        return Ok(FoFormula::Eq(s, ba_join(c)?));
    }
    Err(c.error("expected `=`, `!=` or `<=`"))
}

fn ba_join(c: &mut Cursor) -> Result<BaTerm> {
    let mut acc = ba_meet(c)?;
    while c.eat("\\/") {
        acc = BaTerm::Join(Box::new(acc), Box::new(ba_meet(c)?));
    }
    Ok(acc)
}

fn ba_meet(c: &mut Cursor) -> Result<BaTerm> {
    let mut acc = ba_unary(c)?;
    while c.eat("/\\") {
        acc = BaTerm::Meet(Box::new(acc), Box::new(ba_unary(c)?));
    }
    Ok(acc)
}

fn ba_unary(c: &mut Cursor) -> Result<BaTerm> {
    if c.eat("-") {
        return Ok(BaTerm::Compl(Box::new(ba_unary(c)?)));
    }
    if c.eat("(") {
        let t = ba_join(c)?;
        c.expect(")")?;
        return Ok(t);
    }
    if c.eat("0") {
        return Ok(BaTerm::Zero);
    }
    if c.eat("1") {
        return Ok(BaTerm::One);
    }
    match c.ident() {
        Some("forall" | "exists") | None => Err(c.error("expected a term")),
        Some(v) => Ok(BaTerm::Var(v.to_string())),
    }
}

/// Descriptor grammar: `trivial`, `finite(n)`, `fincof`, `P(omega)`,
/// `P(omega)/fin`, `free`, `intalg(<ordinal>)`, `prod(d, …)`.
pub fn parse_descriptor(text: &str) -> Result<BaDescriptor> {
    let mut c = Cursor::new(text);
    let d = descriptor(&mut c)?;
    c.finish()?;
    Ok(d)
}

fn descriptor(c: &mut Cursor) -> Result<BaDescriptor> {
    let start = c.pos;
    let at = |e: Error| match e {
        Error::Precondition(msg) => Error::parse(start, msg),
        other => other,
    };
    match c.ident() {
        Some("trivial") => Ok(BaDescriptor::Trivial),
        Some("fincof") => Ok(BaDescriptor::FinCof),
        Some("free") => Ok(BaDescriptor::FreeAtomless),
        Some("P") => {
            c.expect("(")?;
            if !matches!(c.ident(), Some("omega" | "w")) {
                return Err(c.error("expected `omega`"));
            }
            c.expect(")")?;
            if c.eat("/") {
                if c.ident() != Some("fin") {
                    return Err(c.error("expected `fin`"));
                }
                Ok(BaDescriptor::PowersetModFin)
            } else {
                Ok(BaDescriptor::PowersetOmega)
            }
        }
        Some("finite") => {
            c.expect("(")?;
            let n = c.nat()?;
            c.expect(")")?;
            BaDescriptor::finite(n).map_err(at)
        }
        Some("intalg") => {
            c.expect("(")?;
            let a = ord_sum(c)?;
            c.expect(")")?;
            BaDescriptor::interval(a).map_err(at)
        }
        Some("prod") => {
            c.expect("(")?;
            let mut parts = vec![descriptor(c)?];
            while c.eat(",") {
                parts.push(descriptor(c)?);
            }
            c.expect(")")?;
            BaDescriptor::product(parts).map_err(at)
        }
        _ => Err(Error::parse(start, "expected a Boolean algebra descriptor")),
    }
}

/// Parsed s-expression with source positions.
#[derive(Debug, Clone)]
enum Sx {
    Atom(String, usize),
    List(Vec<Sx>, usize),
}

impl Sx {
    fn pos(&self) -> usize {
        match self {
            Sx::Atom(_, p) | Sx::List(_, p) => *p,
        }
    }
}

fn sexpr(c: &mut Cursor) -> Result<Sx> {
    match c.peek() {
        None => Err(c.error("unexpected end of input")),
        Some(')') => Err(c.error("unexpected `)`")),
        Some('(') => {
            let start = c.pos;
            c.expect("(")?;
            let mut items = Vec::new();
            while c.peek() != Some(')') {
                if c.peek().is_none() {
                    return Err(c.error("unclosed `(`"));
                }
                items.push(sexpr(c)?);
            }
            c.expect(")")?;
            Ok(Sx::List(items, start))
        }
        Some(_) => {
            let start = c.pos;
            let rest = c.rest();
            let len = rest
                .find(|ch: char| ch.is_whitespace() || ch == '(' || ch == ')')
                .unwrap_or(rest.len());
            c.pos += len;
            Ok(Sx::Atom(rest[..len].to_string(), start))
        }
    }
}

fn sx_number(sx: &Sx) -> Result<f64> {
    match sx {
        Sx::Atom(a, p) => {
            let x: f64 = a.parse().map_err(|_| Error::parse(*p, format!("expected a number, got `{a}`")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::parse(*p, "number must be finite"))
            }
        }
        Sx::List(_, p) => Err(Error::parse(*p, "expected a number")),
    }
}

fn is_number(a: &str) -> bool {
    a.starts_with(|ch: char| ch.is_ascii_digit() || ch == '-' || ch == '.' || ch == '+')
}

fn sx_scalar(sx: &Sx) -> Result<Complex64> {
    match sx {
        Sx::List(items, p) => match items.as_slice() {
            [Sx::Atom(head, _), re, im] if head == "complex" => {
                Ok(Complex64::new(sx_number(re)?, sx_number(im)?))
            }
            _ => Err(Error::parse(*p, "expected a scalar")),
        },
        atom => Ok(Complex64::new(sx_number(atom)?, 0.0)),
    }
}

fn arity(items: &[Sx], n: usize, p: usize, head: &str) -> Result<()> {
    if items.len() != n + 1 {
        return Err(Error::parse(p, format!("`{head}` takes {n} argument(s)")));
    }
    Ok(())
}

fn sx_term(sx: &Sx, scope: &[String]) -> Result<CTerm> {
    match sx {
        Sx::Atom(a, p) => {
            if is_number(a) {
                Ok(CTerm::Scalar(Complex64::new(sx_number(sx)?, 0.0)))
            } else if a.starts_with(':') {
                Err(Error::parse(*p, format!("unexpected keyword `{a}`")))
            } else if scope.iter().any(|v| v == a) {
                Ok(CTerm::Var(a.clone()))
            } else {
                Err(Error::Scope(a.clone()))
            }
        }
        Sx::List(items, p) => {
            let Some(Sx::Atom(head, _)) = items.first() else {
                return Err(Error::parse(*p, "expected an operator"));
            };
            let bin = |f: fn(Box<CTerm>, Box<CTerm>) -> CTerm| -> Result<CTerm> {
                arity(items, 2, *p, head)?;
                Ok(f(Box::new(sx_term(&items[1], scope)?), Box::new(sx_term(&items[2], scope)?)))
            };
            match head.as_str() {
                "+" => bin(CTerm::Add),
                "-" => bin(CTerm::Sub),
                "*" => bin(CTerm::Mul),
                "star" => {
                    arity(items, 1, *p, head)?;
                    Ok(CTerm::Star(Box::new(sx_term(&items[1], scope)?)))
                }
                "smul" => {
                    arity(items, 2, *p, head)?;
                    Ok(CTerm::Smul(sx_scalar(&items[1])?, Box::new(sx_term(&items[2], scope)?)))
                }
                "complex" => Ok(CTerm::Scalar(sx_scalar(sx)?)),
                "elem" => {
                    if items.len() < 2 {
                        return Err(Error::parse(*p, "`elem` needs at least one coordinate"));
                    }
                    let coords = items[1..].iter().map(sx_scalar).collect::<Result<Vec<_>>>()?;
                    Ok(CTerm::Elem(CElement(coords)))
                }
                other => Err(Error::parse(*p, format!("unknown term operator `{other}`"))),
            }
        }
    }
}

fn sx_formula(sx: &Sx, scope: &mut Vec<String>) -> Result<CFormula> {
    match sx {
        Sx::Atom(a, p) => {
            if !is_number(a) {
                return Err(Error::parse(*p, format!("expected a formula, got `{a}`")));
            }
            let x = sx_number(sx)?;
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::parse(*p, "formula constants must lie in [0, 1]"));
            }
            Ok(CFormula::Const(x))
        }
        Sx::List(items, p) => {
            let Some(Sx::Atom(head, _)) = items.first() else {
                return Err(Error::parse(*p, "expected a connective"));
            };
            let mut bin = |f: fn(Box<CFormula>, Box<CFormula>) -> CFormula| -> Result<CFormula> {
                arity(items, 2, *p, head)?;
                let a = sx_formula(&items[1], scope)?;
                let b = sx_formula(&items[2], scope)?;
                Ok(f(Box::new(a), Box::new(b)))
            };
            match head.as_str() {
                "+" => bin(CFormula::Add),
                "monus" => bin(CFormula::Monus),
                "max" => bin(CFormula::Max),
                "min" => bin(CFormula::Min),
                "absdiff" => bin(CFormula::AbsDiff),
                "norm" => {
                    arity(items, 1, *p, head)?;
                    Ok(CFormula::Norm(sx_term(&items[1], scope)?))
                }
                "scale" => {
                    arity(items, 2, *p, head)?;
                    let r = sx_number(&items[1])?;
                    if r < 0.0 {
                        return Err(Error::parse(items[1].pos(), "scale factor must be >= 0"));
                    }
                    Ok(CFormula::Scale(r, Box::new(sx_formula(&items[2], scope)?)))
                }
                "sup" | "inf" => {
                    arity(items, 3, *p, head)?;
                    let Sx::Atom(v, vp) = &items[1] else {
                        return Err(Error::parse(items[1].pos(), "expected a variable"));
                    };
                    if is_number(v) || v.starts_with(':') {
                        return Err(Error::parse(*vp, format!("`{v}` is not a variable name")));
                    }
                    let sort = match &items[2] {
                        Sx::Atom(k, kp) => Sort::from_keyword(k)
                            .ok_or_else(|| Error::parse(*kp, format!("unknown sort `{k}`")))?,
                        other => return Err(Error::parse(other.pos(), "expected a sort keyword")),
                    };
                    scope.push(v.clone());
                    let body = sx_formula(&items[3], scope);
                    scope.pop();
                    let body = Box::new(body?);
                    Ok(if head == "sup" {
                        CFormula::Sup(v.clone(), sort, body)
                    } else {
                        CFormula::Inf(v.clone(), sort, body)
                    })
                }
                other => Err(Error::parse(*p, format!("unknown connective `{other}`"))),
            }
        }
    }
}

/// S-expression formula grammar, e.g. `(sup p :proj (norm (- (* p p) p)))`.
/// Every variable must be bound by `sup`/`inf` or listed in `params`.
pub fn parse_cformula_with(text: &str, params: &[String]) -> Result<CFormula> {
    let mut c = Cursor::new(text);
    let sx = sexpr(&mut c)?;
    c.finish()?;
    sx_formula(&sx, &mut params.to_vec())
}

pub fn parse_cformula(text: &str) -> Result<CFormula> {
    parse_cformula_with(text, &[])
}

/// A *-polynomial term in which every variable listed in `vars` may occur.
pub fn parse_cterm(text: &str, vars: &[String]) -> Result<CTerm> {
    let mut c = Cursor::new(text);
    let sx = sexpr(&mut c)?;
    c.finish()?;
    sx_term(&sx, vars)
}

/// Elements: a comma-separated list of complex literals (`1`, `-0.5`,
/// `2i`, `1-3i`) or an `(elem …)` s-expression.
pub fn parse_celement(text: &str) -> Result<CElement> {
    let t = text.trim();
    if t.starts_with('(') {
        return match parse_cterm(t, &[])? {
            CTerm::Elem(e) => Ok(e),
            _ => Err(Error::parse(0, "expected `(elem …)`")),
        };
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_complex(part).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(offset + pos, msg),
            other => other,
        })?);
        offset += part.len() + 1;
    }
    Ok(CElement(out))
}

/// A complex literal `a`, `bi`, `a+bi` or `a-bi` (`i` alone means `1i`).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    let bad = || Error::parse(lead, format!("bad complex literal `{t}`"));
    let num = |s: &str| -> Result<f64> {
        let x: f64 = match s {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => s.parse().map_err(|_| bad())?,
        };
        if x.is_finite() { Ok(x) } else { Err(bad()) }
    };
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(t).map_err(|_| bad())?, 0.0));
    };
    let split = body
        .char_indices()
        .rev()
        .find(|&(i, ch)| (ch == '+' || ch == '-') && i > 0 && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i);
    match split {
        Some(i) => Ok(Complex64::new(num(&body[..i])?, num(&body[i..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

/// A comma-separated complex tuple.
pub fn parse_complex_tuple(text: &str) -> Result<Vec<Complex64>> {
    Ok(parse_celement(text)?.0)
}

/// Type-condition grammar: `TERM in TARGET; …` where a target is a union
/// (`u`) of closed intervals `[a,b]` and finite sets `{c, …}`.
pub fn parse_type(text: &str) -> Result<Vec<TypeCondition>> {
    let mut c = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        let sx = sexpr(&mut c)?;
        let mut vars = Vec::new();
        collect_symbols(&sx, &mut vars);
        let polynomial = sx_term(&sx, &vars)?;
        if c.ident() != Some("in") {
            return Err(c.error("expected `in`"));
        }
        let target = target(&mut c)?;
        out.push(TypeCondition { polynomial, target });
        if !c.eat(";") {
            break;
        }
        if c.peek().is_none() {
            break;
        }
    }
    c.finish()?;
    Ok(out)
}

fn collect_symbols(sx: &Sx, out: &mut Vec<String>) {
    match sx {
        Sx::Atom(a, _) => {
            if !is_number(a) && !a.starts_with(':') && !out.contains(a) {
                out.push(a.clone());
            }
        }
        Sx::List(items, _) => {
            let skip = matches!(items.first(), Some(Sx::Atom(h, _)) if h == "complex" || h == "elem");
            if !skip {
                for item in items.iter().skip(1) {
                    collect_symbols(item, out);
                }
            }
        }
    }
}

fn target(c: &mut Cursor) -> Result<Target> {
    let start = c.pos;
    let mut pieces = Vec::new();
    loop {
        if c.eat("[") {
            let a = c.number()?;
            c.expect(",")?;
            let b = c.number()?;
            c.expect("]")?;
            pieces.push((a, b));
        } else if c.eat("{") {
            loop {
                let x = c.number()?;
                pieces.push((x, x));
                if !c.eat(",") {
                    break;
                }
            }
            c.expect("}")?;
        } else {
            return Err(c.error("expected `[a,b]` or `{c}`"));
        }
        if c.peek_ident() != Some("u") {
            break;
        }
        c.ident();
    }
    Target::new(pieces).map_err(|e| Error::parse(start, e.to_string()))
}

/// Elements of the Cantor-space algebra: `empty`, `*`, or comma-separated
/// binary prefixes such as `0,10`.
pub fn parse_cylinder(text: &str) -> Result<CylinderSet> {
    let t = text.trim();
    match t {
        "empty" => return Ok(CylinderSet::zero()),
        "*" => return Ok(CylinderSet::one()),
        _ => {}
    }
    let mut prefixes = Vec::new();
    let mut offset = 0;
    for word in text.split(',') {
        let w = word.trim();
        if w.is_empty() || !w.chars().all(|ch| ch == '0' || ch == '1') {
            return Err(Error::parse(offset, format!("`{w}` is not a binary prefix")));
        }
        prefixes.push(w.chars().map(|ch| ch == '1').collect());
        offset += word.len() + 1;
    }
    CylinderSet::union_of(&prefixes)
}

/// Finite Boolean-algebra elements written as atom sets, e.g. `{0,2}`.
pub fn parse_atom_set(text: &str) -> Result<u32> {
    let mut c = Cursor::new(text);
    c.expect("{")?;
    let mut bits = 0u32;
    if !c.eat("}") {
        loop {
            let start = c.pos;
            let a = c.nat()?;
            if a >= 32 {
                return Err(Error::parse(start, "atom index too large"));
            }
            bits |= 1 << a;
            if !c.eat(",") {
                break;
            }
        }
        c.expect("}")?;
    }
    c.finish()?;
    Ok(bits)
}

/// `;`-separated list, empty text meaning the empty list.
pub fn split_list(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}
