//! Finite-dimensional abelian C*-algebras `C(X)` and continuous logic over
//! them.
//!
//! Formulas take values in `[0, ∞)`; a sentence holds when its value is 0.
//! [`ceval`] returns certified enclosures by branch-and-bound over the unit
//! polydisc of each quantified variable.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::boolalg::{BaTerm, FoFormula};
use crate::error::{Error, Result};

pub const MAX_EVAL_POINTS: usize = 6;
pub const MAX_PSI_POINTS: usize = 4;
pub const MAX_BOXES: u64 = 400_000;
const MAX_PASSES: usize = 60;

/// `C(X)` for a finite discrete `X` with `points` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CStarAlgebraFin {
    pub points: usize,
}

/// A function `X → ℂ`, one coordinate per point.
#[derive(Debug, Clone, PartialEq)]
pub struct CElement(pub Vec<Complex64>);

impl CStarAlgebraFin {
    pub fn new(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::precondition("C(X) needs at least one point"));
        }
        Ok(CStarAlgebraFin { points })
    }

    pub fn one(&self) -> CElement {
        CElement::constant(self.points, Complex64::new(1.0, 0.0))
    }

    pub fn zero(&self) -> CElement {
        CElement::constant(self.points, Complex64::new(0.0, 0.0))
    }

    /// Indicator of the set of points whose bits are set in `mask`.
    pub fn indicator(&self, mask: u32) -> CElement {
        CElement(
            (0..self.points)
                .map(|i| Complex64::new(((mask >> i) & 1) as f64, 0.0))
                .collect(),
        )
    }

    /// All `2^|X|` projections, indexed by their support mask.
    pub fn projections(&self) -> Vec<CElement> {
        (0..1u32 << self.points).map(|m| self.indicator(m)).collect()
    }

    pub fn check(&self, e: &CElement) -> Result<()> {
        if e.len() != self.points {
            return Err(Error::precondition(format!(
                "element has {} coordinates, algebra has {} points",
                e.len(),
                self.points
            )));
        }
        Ok(())
    }
}

impl CElement {
    pub fn constant(n: usize, c: Complex64) -> Self {
        CElement(vec![c; n])
    }

    pub fn real(values: &[f64]) -> Self {
        CElement(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn star(&self) -> Self {
        CElement(self.0.iter().map(|z| z.conj()).collect())
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        CElement(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CElement(self.0.iter().map(|&z| c * z).collect())
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.0.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.0
            .iter()
            .all(|z| (z - 0.0).norm() <= tol || (z - 1.0).norm() <= tol)
    }
}

fn fmt_scalar(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else {
        write!(f, "(complex {} {})", c.re, c.im)
    }
}

impl fmt::Display for CElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(elem")?;
        for &z in &self.0 {
            write!(f, " ")?;
            fmt_scalar(f, z)?;
        }
        write!(f, ")")
    }
}

/// *-polynomial terms.
#[derive(Debug, Clone, PartialEq)]
pub enum CTerm {
    Var(String),
    Scalar(Complex64),
    Elem(CElement),
    Add(Box<CTerm>, Box<CTerm>),
    Sub(Box<CTerm>, Box<CTerm>),
    Mul(Box<CTerm>, Box<CTerm>),
    Star(Box<CTerm>),
    Smul(Complex64, Box<CTerm>),
}

/// Quantifier sorts; all live in the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Ball,
    SelfAdjoint,
    Positive,
    Projection,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Ball => ":ball",
            Sort::SelfAdjoint => ":sa",
            Sort::Positive => ":pos",
            Sort::Projection => ":proj",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Sort> {
        match s {
            ":ball" => Some(Sort::Ball),
            ":sa" => Some(Sort::SelfAdjoint),
            ":pos" => Some(Sort::Positive),
            ":proj" => Some(Sort::Projection),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CFormula {
    Norm(CTerm),
    /// Constant in `[0, 1]`.
    Const(f64),
    Add(Box<CFormula>, Box<CFormula>),
    /// Truncated subtraction `max(a − b, 0)`.
    Monus(Box<CFormula>, Box<CFormula>),
    Max(Box<CFormula>, Box<CFormula>),
    Min(Box<CFormula>, Box<CFormula>),
    /// Multiplication by a scalar `r ≥ 0`.
    Scale(f64, Box<CFormula>),
    AbsDiff(Box<CFormula>, Box<CFormula>),
    Sup(String, Sort, Box<CFormula>),
    Inf(String, Sort, Box<CFormula>),
}

type Env<'a> = HashMap<&'a str, CElement>;

impl CTerm {
    pub fn var(name: &str) -> Self {
        CTerm::Var(name.to_string())
    }

    pub fn real(r: f64) -> Self {
        CTerm::Scalar(Complex64::new(r, 0.0))
    }

    pub fn add(a: CTerm, b: CTerm) -> Self {
        CTerm::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: CTerm, b: CTerm) -> Self {
        CTerm::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: CTerm, b: CTerm) -> Self {
        CTerm::Mul(Box::new(a), Box::new(b))
    }

    pub fn star(a: CTerm) -> Self {
        CTerm::Star(Box::new(a))
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            CTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            CTerm::Scalar(_) | CTerm::Elem(_) => {}
            CTerm::Add(a, b) | CTerm::Sub(a, b) | CTerm::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            CTerm::Star(a) | CTerm::Smul(_, a) => a.collect_vars(out),
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    /// Degree in `v` of the underlying polynomial, counting `v*` as `v`.
    pub fn degree_in(&self, v: &str) -> usize {
        match self {
            CTerm::Var(w) => usize::from(w == v),
            CTerm::Scalar(_) | CTerm::Elem(_) => 0,
            CTerm::Add(a, b) | CTerm::Sub(a, b) => a.degree_in(v).max(b.degree_in(v)),
            CTerm::Mul(a, b) => a.degree_in(v) + b.degree_in(v),
            CTerm::Star(a) | CTerm::Smul(_, a) => a.degree_in(v),
        }
    }

    fn substitute(&self, params: &HashMap<String, CElement>) -> CTerm {
        match self {
            CTerm::Var(v) => match params.get(v) {
                Some(e) => CTerm::Elem(e.clone()),
                None => self.clone(),
            },
            CTerm::Scalar(_) | CTerm::Elem(_) => self.clone(),
            CTerm::Add(a, b) => CTerm::add(a.substitute(params), b.substitute(params)),
            CTerm::Sub(a, b) => CTerm::sub(a.substitute(params), b.substitute(params)),
            CTerm::Mul(a, b) => CTerm::mul(a.substitute(params), b.substitute(params)),
            CTerm::Star(a) => CTerm::star(a.substitute(params)),
            CTerm::Smul(c, a) => CTerm::Smul(*c, Box::new(a.substitute(params))),
        }
    }

    fn elements(&self, out: &mut Vec<usize>) {
        match self {
            CTerm::Elem(e) => out.push(e.len()),
            CTerm::Var(_) | CTerm::Scalar(_) => {}
            CTerm::Add(a, b) | CTerm::Sub(a, b) | CTerm::Mul(a, b) => {
                a.elements(out);
                b.elements(out);
            }
            CTerm::Star(a) | CTerm::Smul(_, a) => a.elements(out),
        }
    }

    /// Upper bound on the norm when every variable ranges over the unit ball.
    pub fn norm_bound(&self) -> f64 {
        match self {
            CTerm::Var(_) => 1.0,
            CTerm::Scalar(c) => c.norm(),
            CTerm::Elem(e) => e.norm(),
            CTerm::Add(a, b) | CTerm::Sub(a, b) => a.norm_bound() + b.norm_bound(),
            CTerm::Mul(a, b) => a.norm_bound() * b.norm_bound(),
            CTerm::Star(a) => a.norm_bound(),
            CTerm::Smul(c, a) => c.norm() * a.norm_bound(),
        }
    }

    /// Lipschitz modulus in `v` on the unit ball.
    pub fn lipschitz(&self, v: &str) -> f64 {
        match self {
            CTerm::Var(w) => {
                if w == v {
                    1.0
                } else {
                    0.0
                }
            }
            CTerm::Scalar(_) | CTerm::Elem(_) => 0.0,
            CTerm::Add(a, b) | CTerm::Sub(a, b) => a.lipschitz(v) + b.lipschitz(v),
            CTerm::Mul(a, b) => a.lipschitz(v) * b.norm_bound() + a.norm_bound() * b.lipschitz(v),
            CTerm::Star(a) => a.lipschitz(v),
            CTerm::Smul(c, a) => c.norm() * a.lipschitz(v),
        }
    }

    pub fn eval(&self, n: usize, env: &Env<'_>) -> Result<CElement> {
        Ok(match self {
            CTerm::Var(v) => env.get(v.as_str()).cloned().ok_or_else(|| Error::Scope(v.clone()))?,
            CTerm::Scalar(c) => CElement::constant(n, *c),
            CTerm::Elem(e) => e.clone(),
            CTerm::Add(a, b) => a.eval(n, env)?.add(&b.eval(n, env)?),
            CTerm::Sub(a, b) => a.eval(n, env)?.sub(&b.eval(n, env)?),
            CTerm::Mul(a, b) => a.eval(n, env)?.mul(&b.eval(n, env)?),
            CTerm::Star(a) => a.eval(n, env)?.star(),
            CTerm::Smul(c, a) => a.eval(n, env)?.scale(*c),
        })
    }
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CTerm::Var(v) => write!(f, "{v}"),
            CTerm::Scalar(c) => fmt_scalar(f, *c),
            CTerm::Elem(e) => write!(f, "{e}"),
            CTerm::Add(a, b) => write!(f, "(+ {a} {b})"),
            CTerm::Sub(a, b) => write!(f, "(- {a} {b})"),
            CTerm::Mul(a, b) => write!(f, "(* {a} {b})"),
            CTerm::Star(a) => write!(f, "(star {a})"),
            CTerm::Smul(c, a) => {
                write!(f, "(smul ")?;
                fmt_scalar(f, *c)?;
                write!(f, " {a})")
            }
        }
    }
}

impl fmt::Display for CFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CFormula::Norm(t) => write!(f, "(norm {t})"),
            CFormula::Const(c) => write!(f, "{c}"),
            CFormula::Add(a, b) => write!(f, "(+ {a} {b})"),
            CFormula::Monus(a, b) => write!(f, "(monus {a} {b})"),
            CFormula::Max(a, b) => write!(f, "(max {a} {b})"),
            CFormula::Min(a, b) => write!(f, "(min {a} {b})"),
            CFormula::Scale(r, a) => write!(f, "(scale {r} {a})"),
            CFormula::AbsDiff(a, b) => write!(f, "(absdiff {a} {b})"),
            CFormula::Sup(v, s, b) => write!(f, "(sup {v} {} {b})", s.keyword()),
            CFormula::Inf(v, s, b) => write!(f, "(inf {v} {} {b})", s.keyword()),
        }
    }
}

impl CFormula {
    pub fn norm(t: CTerm) -> Self {
        CFormula::Norm(t)
    }

    pub fn max(a: CFormula, b: CFormula) -> Self {
        CFormula::Max(Box::new(a), Box::new(b))
    }

    pub fn min(a: CFormula, b: CFormula) -> Self {
        CFormula::Min(Box::new(a), Box::new(b))
    }

    pub fn monus(a: CFormula, b: CFormula) -> Self {
        CFormula::Monus(Box::new(a), Box::new(b))
    }

    pub fn sup(v: &str, sort: Sort, body: CFormula) -> Self {
        CFormula::Sup(v.to_string(), sort, Box::new(body))
    }

    pub fn inf(v: &str, sort: Sort, body: CFormula) -> Self {
        CFormula::Inf(v.to_string(), sort, Box::new(body))
    }

    /// Rejects constants outside `[0, 1]` and negative scale factors.
    pub fn validate(&self) -> Result<()> {
        match self {
            CFormula::Norm(_) => Ok(()),
            CFormula::Const(c) => {
                if (0.0..=1.0).contains(c) {
                    Ok(())
                } else {
                    Err(Error::precondition(format!("constant {c} outside [0, 1]")))
                }
            }
            CFormula::Scale(r, a) => {
                if !(*r >= 0.0 && r.is_finite()) {
                    return Err(Error::precondition(format!("scale factor {r} must be >= 0")));
                }
                a.validate()
            }
            CFormula::Add(a, b)
            | CFormula::Monus(a, b)
            | CFormula::Max(a, b)
            | CFormula::Min(a, b)
            | CFormula::AbsDiff(a, b) => {
                a.validate()?;
                b.validate()
            }
            CFormula::Sup(_, _, b) | CFormula::Inf(_, _, b) => b.validate(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            CFormula::Norm(t) => {
                for v in t.vars() {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            CFormula::Const(_) => {}
            CFormula::Scale(_, a) => a.collect_free(bound, out),
            CFormula::Add(a, b)
            | CFormula::Monus(a, b)
            | CFormula::Max(a, b)
            | CFormula::Min(a, b)
            | CFormula::AbsDiff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            CFormula::Sup(v, _, body) | CFormula::Inf(v, _, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            CFormula::Norm(_) | CFormula::Const(_) => true,
            CFormula::Scale(_, a) => a.is_quantifier_free(),
            CFormula::Add(a, b)
            | CFormula::Monus(a, b)
            | CFormula::Max(a, b)
            | CFormula::Min(a, b)
            | CFormula::AbsDiff(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            CFormula::Sup(..) | CFormula::Inf(..) => false,
        }
    }

    /// Lipschitz modulus in the free variable `v`, every variable ranging
    /// over the unit ball.
    pub fn lipschitz(&self, v: &str) -> f64 {
        match self {
            CFormula::Norm(t) => t.lipschitz(v),
            CFormula::Const(_) => 0.0,
            CFormula::Add(a, b) | CFormula::Monus(a, b) | CFormula::AbsDiff(a, b) => {
                a.lipschitz(v) + b.lipschitz(v)
            }
            CFormula::Max(a, b) | CFormula::Min(a, b) => a.lipschitz(v).max(b.lipschitz(v)),
            CFormula::Scale(r, a) => r * a.lipschitz(v),
            CFormula::Sup(w, _, body) | CFormula::Inf(w, _, body) => {
                if w == v {
                    0.0
                } else {
                    body.lipschitz(v)
                }
            }
        }
    }

    /// Replaces free occurrences of parameters by constants.
    pub fn substitute(&self, params: &HashMap<String, CElement>) -> CFormula {
        let rec = |a: &CFormula| Box::new(a.substitute(params));
        match self {
            CFormula::Norm(t) => CFormula::Norm(t.substitute(params)),
            CFormula::Const(c) => CFormula::Const(*c),
            CFormula::Add(a, b) => CFormula::Add(rec(a), rec(b)),
            CFormula::Monus(a, b) => CFormula::Monus(rec(a), rec(b)),
            CFormula::Max(a, b) => CFormula::Max(rec(a), rec(b)),
            CFormula::Min(a, b) => CFormula::Min(rec(a), rec(b)),
            CFormula::Scale(r, a) => CFormula::Scale(*r, rec(a)),
            CFormula::AbsDiff(a, b) => CFormula::AbsDiff(rec(a), rec(b)),
            CFormula::Sup(v, s, body) | CFormula::Inf(v, s, body) => {
                let mut inner = params.clone();
                inner.remove(v);
                let body = Box::new(body.substitute(&inner));
                if matches!(self, CFormula::Sup(..)) {
                    CFormula::Sup(v.clone(), *s, body)
                } else {
                    CFormula::Inf(v.clone(), *s, body)
                }
            }
        }
    }

    fn element_sizes(&self, out: &mut Vec<usize>) {
        match self {
            CFormula::Norm(t) => t.elements(out),
            CFormula::Const(_) => {}
            CFormula::Scale(_, a) | CFormula::Sup(_, _, a) | CFormula::Inf(_, _, a) => a.element_sizes(out),
            CFormula::Add(a, b)
            | CFormula::Monus(a, b)
            | CFormula::Max(a, b)
            | CFormula::Min(a, b)
            | CFormula::AbsDiff(a, b) => {
                a.element_sizes(out);
                b.element_sizes(out);
            }
        }
    }

    /// Exact value of a quantifier-free formula at a point, or of a formula
    /// quantified only over projections.
    pub fn eval_exact<'a>(&'a self, a: &CStarAlgebraFin, env: &Env<'a>) -> Result<f64> {
        let n = a.points;
        Ok(match self {
            CFormula::Norm(t) => t.eval(n, env)?.norm(),
            CFormula::Const(c) => *c,
            CFormula::Add(x, y) => x.eval_exact(a, env)? + y.eval_exact(a, env)?,
            CFormula::Monus(x, y) => (x.eval_exact(a, env)? - y.eval_exact(a, env)?).max(0.0),
            CFormula::Max(x, y) => x.eval_exact(a, env)?.max(y.eval_exact(a, env)?),
            CFormula::Min(x, y) => x.eval_exact(a, env)?.min(y.eval_exact(a, env)?),
            CFormula::Scale(r, x) => r * x.eval_exact(a, env)?,
            CFormula::AbsDiff(x, y) => (x.eval_exact(a, env)? - y.eval_exact(a, env)?).abs(),
            CFormula::Sup(v, Sort::Projection, body) | CFormula::Inf(v, Sort::Projection, body) => {
                let sup = matches!(self, CFormula::Sup(..));
                let mut acc = if sup { f64::NEG_INFINITY } else { f64::INFINITY };
                for p in a.projections() {
                    let mut inner = env.clone();
                    inner.insert(v.as_str(), p);
                    let val = body.eval_exact(a, &inner)?;
                    acc = if sup { acc.max(val) } else { acc.min(val) };
                }
                acc
            }
            CFormula::Sup(..) | CFormula::Inf(..) => {
                return Err(Error::precondition(
                    "exact evaluation only handles projection quantifiers",
                ))
            }
        })
    }
}

/// Closed real interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Iv {
    lo: f64,
    hi: f64,
}

impl Iv {
    fn point(x: f64) -> Self {
        Iv { lo: x, hi: x }
    }

    fn add(self, o: Iv) -> Iv {
        Iv { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    fn sub(self, o: Iv) -> Iv {
        Iv { lo: self.lo - o.hi, hi: self.hi - o.lo }
    }

    fn mul(self, o: Iv) -> Iv {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Iv {
            lo: c.iter().copied().fold(f64::INFINITY, f64::min),
            hi: c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn neg(self) -> Iv {
        Iv { lo: -self.hi, hi: -self.lo }
    }

    fn scale(self, r: f64) -> Iv {
        Iv { lo: r * self.lo, hi: r * self.hi }
    }

    fn monus(self, o: Iv) -> Iv {
        let d = self.sub(o);
        Iv { lo: d.lo.max(0.0), hi: d.hi.max(0.0) }
    }

    fn max(self, o: Iv) -> Iv {
        Iv { lo: self.lo.max(o.lo), hi: self.hi.max(o.hi) }
    }

    fn min(self, o: Iv) -> Iv {
        Iv { lo: self.lo.min(o.lo), hi: self.hi.min(o.hi) }
    }

    fn abs(self) -> Iv {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Iv { lo: 0.0, hi: (-self.lo).max(self.hi) }
        }
    }

    fn meet(self, o: Iv) -> Iv {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        Iv { lo: lo.min(hi), hi }
    }

    fn width(self) -> f64 {
        self.hi - self.lo
    }

    fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Rectangular complex interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cx {
    re: Iv,
    im: Iv,
}

impl Cx {
    fn point(z: Complex64) -> Self {
        Cx { re: Iv::point(z.re), im: Iv::point(z.im) }
    }

    fn add(self, o: Cx) -> Cx {
        Cx { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    fn sub(self, o: Cx) -> Cx {
        Cx { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    fn mul(self, o: Cx) -> Cx {
        Cx {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    fn conj(self) -> Cx {
        Cx { re: self.re, im: self.im.neg() }
    }

    fn center(self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    /// Largest distance from the center to a point of the rectangle.
    fn radius(self) -> f64 {
        0.5 * self.re.width().hypot(self.im.width())
    }

    fn modulus(self) -> Iv {
        let near = |iv: Iv| if iv.lo > 0.0 { iv.lo } else if iv.hi < 0.0 { -iv.hi } else { 0.0 };
        let far = |iv: Iv| iv.lo.abs().max(iv.hi.abs());
        Iv {
            lo: near(self.re).hypot(near(self.im)),
            hi: far(self.re).hypot(far(self.im)),
        }
    }
}

pub(crate) type CxBox = Vec<Cx>;

pub(crate) fn box_center(b: &CxBox) -> CElement {
    CElement(b.iter().map(|c| c.center()).collect())
}

pub(crate) fn box_radius(b: &CxBox) -> f64 {
    b.iter().map(|c| c.radius()).fold(0.0, f64::max)
}

pub(crate) fn point_box(e: &CElement) -> CxBox {
    e.0.iter().map(|&z| Cx::point(z)).collect()
}

pub(crate) fn initial_box(sort: Sort, n: usize) -> CxBox {
    let full = Iv { lo: -1.0, hi: 1.0 };
    let zero = Iv::point(0.0);
    let c = match sort {
        Sort::Ball => Cx { re: full, im: full },
        Sort::SelfAdjoint => Cx { re: full, im: zero },
        Sort::Positive => Cx { re: Iv { lo: 0.0, hi: 1.0 }, im: zero },
        Sort::Projection => unreachable!("projections are enumerated"),
    };
    vec![c; n]
}

/// Whether the box meets the sort's domain.
pub(crate) fn box_feasible(sort: Sort, b: &CxBox) -> bool {
    sort != Sort::Ball || b.iter().all(|c| c.modulus().lo <= 1.0)
}

/// The center with every coordinate pushed to modulus 1 where that stays in
/// the box; extremal values of norms sit on the boundary.
pub(crate) fn boundary_point(b: &CxBox) -> Option<CElement> {
    let mut e = box_center(b);
    let mut moved = false;
    for (z, c) in e.0.iter_mut().zip(b) {
        let r = z.norm();
        if r == 0.0 {
            continue;
        }
        let w = *z / r;
        let inside = |iv: Iv, x: f64| iv.lo <= x && x <= iv.hi;
        if inside(c.re, w.re) && inside(c.im, w.im) && w != *z {
            *z = w;
            moved = true;
        }
    }
    moved.then_some(e)
}

/// A point of the sort's domain inside (or nearest to) the box.
pub(crate) fn feasible_point(sort: Sort, b: &CxBox) -> CElement {
    let mut e = box_center(b);
    if sort == Sort::Ball {
        for z in &mut e.0 {
            let r = z.norm();
            if r > 1.0 {
                *z /= r;
            }
        }
    }
    e
}

pub(crate) fn split_box(sort: Sort, b: &CxBox) -> (CxBox, CxBox) {
    let mut best = (0usize, false, -1.0);
    for (i, c) in b.iter().enumerate() {
        if c.re.width() > best.2 {
            best = (i, false, c.re.width());
        }
        if sort == Sort::Ball && c.im.width() > best.2 {
            best = (i, true, c.im.width());
        }
    }
    let (i, imag, _) = best;
    let (mut l, mut r) = (b.clone(), b.clone());
    let iv = if imag { b[i].im } else { b[i].re };
    let m = iv.mid();
    let (lo, hi) = (Iv { lo: iv.lo, hi: m }, Iv { lo: m, hi: iv.hi });
    if imag {
        l[i].im = lo;
        r[i].im = hi;
    } else {
        l[i].re = lo;
        r[i].re = hi;
    }
    (l, r)
}

struct HeapEntry {
    ub: f64,
    seq: u64,
    b: CxBox,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .total_cmp(&other.ub)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Evaluator {
    n: usize,
    boxes: u64,
    exhausted: bool,
}

impl Evaluator {
    fn term(&self, t: &CTerm, env: &HashMap<&str, CxBox>) -> CxBox {
        match t {
            CTerm::Var(v) => env[v.as_str()].clone(),
            CTerm::Scalar(c) => vec![Cx::point(*c); self.n],
            CTerm::Elem(e) => point_box(e),
            CTerm::Add(a, b) => zip(self.term(a, env), self.term(b, env), Cx::add),
            CTerm::Sub(a, b) => zip(self.term(a, env), self.term(b, env), Cx::sub),
            CTerm::Mul(a, b) => zip(self.term(a, env), self.term(b, env), Cx::mul),
            CTerm::Star(a) => self.term(a, env).into_iter().map(Cx::conj).collect(),
            CTerm::Smul(c, a) => {
                let k = Cx::point(*c);
                self.term(a, env).into_iter().map(|x| k.mul(x)).collect()
            }
        }
    }

    /// Enclosure of `‖t‖` over the boxes: interval arithmetic, intersected
    /// with the Lipschitz bound around the center and the static norm bound.
    fn norm(&self, t: &CTerm, env: &HashMap<&str, CxBox>) -> Iv {
        let vals = self.term(t, env);
        let by_interval = vals.iter().fold(Iv::point(0.0), |acc, c| acc.max(c.modulus()));
        let centers: HashMap<&str, CElement> = env.iter().map(|(k, b)| (*k, box_center(b))).collect();
        let at_center = t.eval(self.n, &centers).map(|e| e.norm()).unwrap_or(0.0);
        let spread: f64 = env.iter().map(|(k, b)| t.lipschitz(k) * box_radius(b)).sum();
        let by_modulus = Iv { lo: (at_center - spread).max(0.0), hi: at_center + spread };
        by_interval
            .meet(by_modulus)
            .meet(Iv { lo: 0.0, hi: t.norm_bound() })
    }

    fn enclose(&mut self, f: &CFormula, env: &HashMap<&str, CxBox>, res: f64) -> Iv {
        match f {
            CFormula::Norm(t) => self.norm(t, env),
            CFormula::Const(c) => Iv::point(*c),
            CFormula::Add(a, b) => self.enclose(a, env, res).add(self.enclose(b, env, res)),
            CFormula::Monus(a, b) => self.enclose(a, env, res).monus(self.enclose(b, env, res)),
            CFormula::Max(a, b) => self.enclose(a, env, res).max(self.enclose(b, env, res)),
            CFormula::Min(a, b) => self.enclose(a, env, res).min(self.enclose(b, env, res)),
            CFormula::Scale(r, a) => self.enclose(a, env, res).scale(*r),
            CFormula::AbsDiff(a, b) => self.enclose(a, env, res).sub(self.enclose(b, env, res)).abs(),
            CFormula::Sup(v, s, body) => self.quantify(f, true, v, *s, body, env, res),
            CFormula::Inf(v, s, body) => self.quantify(f, false, v, *s, body, env, res),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn quantify<'a>(
        &mut self,
        whole: &CFormula,
        sup: bool,
        v: &'a str,
        sort: Sort,
        body: &CFormula,
        env: &HashMap<&'a str, CxBox>,
        res: f64,
    ) -> Iv {
        let orient = |iv: Iv| if sup { iv } else { iv.neg() };
        let mut inner = env.clone();
        if sort == Sort::Projection {
            let mut acc: Option<Iv> = None;
            for mask in 0..1u32 << self.n {
                let p = CStarAlgebraFin { points: self.n }.indicator(mask);
                inner.insert(v, point_box(&p));
                let iv = orient(self.enclose(body, &inner, res / 2.0));
                acc = Some(acc.map_or(iv, |a| a.max(iv)));
            }
            return orient(acc.expect("at least one projection"));
        }

        let spread: f64 = env.iter().map(|(k, b)| whole.lipschitz(k) * box_radius(b)).sum();
        let target = res + 2.0 * spread;
        let mut best_lo = f64::NEG_INFINITY;
        let mut heap = BinaryHeap::new();
        let mut seq = 0u64;

        let mut process = |ev: &mut Evaluator, b: CxBox, parent_ub: f64, best_lo: &mut f64, heap: &mut BinaryHeap<HeapEntry>| {
            ev.boxes += 1;
            if ev.boxes > MAX_BOXES {
                ev.exhausted = true;
            }
            inner.insert(v, b.clone());
            let ub = orient(ev.enclose(body, &inner, res / 2.0)).hi.min(parent_ub);
            inner.insert(v, point_box(&feasible_point(sort, &b)));
            let lo = orient(ev.enclose(body, &inner, res / 2.0)).lo;
            *best_lo = best_lo.max(lo);
            if let Some(q) = boundary_point(&b) {
                inner.insert(v, point_box(&q));
                let lo = orient(ev.enclose(body, &inner, res / 2.0)).lo;
                *best_lo = best_lo.max(lo);
            }
            if ub > *best_lo {
                seq += 1;
                heap.push(HeapEntry { ub, seq, b });
            }
        };

        process(self, initial_box(sort, self.n), f64::INFINITY, &mut best_lo, &mut heap);
        let upper = loop {
            let Some(top) = heap.peek() else { break best_lo };
            if top.ub - best_lo <= target || self.exhausted {
                break top.ub;
            }
            let top = heap.pop().unwrap();
            let (l, r) = split_box(sort, &top.b);
            for child in [l, r] {
                if box_feasible(sort, &child) {
                    process(self, child, top.ub, &mut best_lo, &mut heap);
                }
            }
        };
        orient(Iv { lo: best_lo, hi: upper.max(best_lo) })
    }
}

/// Enclosure `(lo, hi)` of `‖t‖` as the variables range over the boxes.
pub(crate) fn norm_enclosure(t: &CTerm, n: usize, env: &HashMap<&str, CxBox>) -> (f64, f64) {
    let iv = Evaluator { n, boxes: 0, exhausted: false }.norm(t, env);
    (iv.lo, iv.hi)
}

fn zip(a: CxBox, b: CxBox, f: impl Fn(Cx, Cx) -> Cx) -> CxBox {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Certified enclosure `[lower, upper]` of a formula value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalCertificate {
    pub lower: f64,
    pub upper: f64,
    /// Number of refinement passes beyond the first.
    pub grid_depth: usize,
}

impl EvalCertificate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Certified evaluation of `phi` in `a` with the free variables bound by
/// `params`.
///
/// Pass `k` runs branch-and-bound at resolution `2^-k`; the result is the
/// intersection of all passes so far, so a smaller `tol` yields a nested
/// enclosure.
pub fn ceval(
    phi: &CFormula,
    a: &CStarAlgebraFin,
    params: &HashMap<String, CElement>,
    tol: f64,
) -> Result<EvalCertificate> {
    if !(tol > 0.0) {
        return Err(Error::precondition("tol must be positive"));
    }
    if a.points > MAX_EVAL_POINTS {
        return Err(Error::precondition(format!(
            "ceval supports at most {MAX_EVAL_POINTS} points"
        )));
    }
    phi.validate()?;
    for e in params.values() {
        a.check(e)?;
    }
    let phi = phi.substitute(params);
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(Error::Scope(v));
    }
    let mut sizes = Vec::new();
    phi.element_sizes(&mut sizes);
    if sizes.iter().any(|&s| s != a.points) {
        return Err(Error::precondition("constant element size does not match the algebra"));
    }

    let mut ev = Evaluator { n: a.points, boxes: 0, exhausted: false };
    let mut running = Iv { lo: 0.0, hi: f64::INFINITY };
    for depth in 0..MAX_PASSES {
        let res = 0.5f64.powi(depth as i32);
        let iv = ev.enclose(&phi, &HashMap::new(), res);
        running = running.meet(iv);
        if ev.exhausted {
            return Err(Error::Budget {
                detail: format!("ceval visited more than {MAX_BOXES} boxes"),
                best: Some((running.lo, running.hi)),
            });
        }
        if running.width() <= tol {
            return Ok(EvalCertificate { lower: running.lo, upper: running.hi, grid_depth: depth });
        }
    }
    Err(Error::Budget {
        detail: format!("ceval did not reach tolerance in {MAX_PASSES} passes"),
        best: Some((running.lo, running.hi)),
    })
}

fn translate_term(t: &BaTerm) -> CTerm {
    match t {
        BaTerm::Var(v) => CTerm::Var(v.clone()),
        BaTerm::Zero => CTerm::real(0.0),
        BaTerm::One => CTerm::real(1.0),
        BaTerm::Meet(a, b) => CTerm::mul(translate_term(a), translate_term(b)),
        BaTerm::Join(a, b) => {
            let (a, b) = (translate_term(a), translate_term(b));
            CTerm::sub(CTerm::add(a.clone(), b.clone()), CTerm::mul(a, b))
        }
        BaTerm::Compl(a) => CTerm::sub(CTerm::real(1.0), translate_term(a)),
    }
}

/// Continuous counterpart of a Boolean-algebra sentence over the projection
/// sort: truth becomes value 0, falsity value 1.
pub fn translate_fo(phi: &FoFormula) -> CFormula {
    let one = || CFormula::Const(1.0);
    match phi {
        FoFormula::Eq(s, t) => CFormula::Norm(CTerm::sub(translate_term(s), translate_term(t))),
        FoFormula::Le(s, t) => {
            let s = translate_term(s);
            CFormula::Norm(CTerm::sub(CTerm::mul(s.clone(), translate_term(t)), s))
        }
        FoFormula::Not(a) => CFormula::monus(one(), translate_fo(a)),
        FoFormula::And(a, b) => CFormula::max(translate_fo(a), translate_fo(b)),
        FoFormula::Or(a, b) => CFormula::min(translate_fo(a), translate_fo(b)),
        FoFormula::Implies(a, b) => {
            CFormula::min(CFormula::monus(one(), translate_fo(a)), translate_fo(b))
        }
        FoFormula::Forall(v, body) => CFormula::sup(v, Sort::Projection, translate_fo(body)),
        FoFormula::Exists(v, body) => CFormula::inf(v, Sort::Projection, translate_fo(body)),
    }
}

fn check_tuple(a: &[CElement]) -> Result<usize> {
    let n = a
        .first()
        .ok_or_else(|| Error::precondition("tuple must be nonempty"))?
        .len();
    if a.iter().any(|e| e.len() != n) {
        return Err(Error::precondition("tuple elements live in different algebras"));
    }
    Ok(n)
}

fn check_lambda(a: &[CElement], lambda: &[Complex64]) -> Result<usize> {
    let n = check_tuple(a)?;
    if lambda.len() != a.len() {
        return Err(Error::precondition(format!(
            "lambda has {} entries, tuple has {}",
            lambda.len(),
            a.len()
        )));
    }
    Ok(n)
}

/// `{(a_1(x), …, a_n(x)) : x ∈ X}` in order of first occurrence.
pub fn joint_spectrum(a: &[CElement]) -> Result<Vec<Vec<Complex64>>> {
    let n = check_tuple(a)?;
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for x in 0..n {
        let t: Vec<Complex64> = a.iter().map(|e| e.0[x]).collect();
        if !out.contains(&t) {
            out.push(t);
        }
    }
    Ok(out)
}

/// `Σ_i |λ_i − a_i|` as a function on `X`.
fn distance_sum(a: &[CElement], lambda: &[Complex64], x: usize) -> f64 {
    a.iter().zip(lambda).map(|(e, l)| (l - e.0[x]).norm()).sum()
}

/// Whether `(λ_1 − a_1, …, λ_n − a_n)` is singular: some point has
/// `a_i(x) = λ_i` for all `i`.
pub fn is_singular(a: &[CElement], lambda: &[Complex64]) -> Result<bool> {
    let n = check_lambda(a, lambda)?;
    Ok((0..n).any(|x| a.iter().zip(lambda).all(|(e, l)| e.0[x] == *l)))
}

/// Three independent readings of singularity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub pointwise: bool,
    /// `Σ|λ_i − a_i|` vanishes somewhere, so is not invertible.
    pub sum_not_invertible: bool,
    /// `Σ(λ_i − a_i)x_i = 1` has no solution.
    pub unsolvable: bool,
    /// `‖Σ(λ_i − a_i)x_i − 1‖` for the constructed solution, if any.
    pub residual: Option<f64>,
}

impl SingularityReport {
    pub fn consistent(&self) -> bool {
        self.pointwise == self.sum_not_invertible && self.pointwise == self.unsolvable
    }
}

pub fn singularity_report(a: &[CElement], lambda: &[Complex64]) -> Result<SingularityReport> {
    let n = check_lambda(a, lambda)?;
    let pointwise = is_singular(a, lambda)?;
    let sum_not_invertible = (0..n).any(|x| distance_sum(a, lambda, x) == 0.0);
    let mut residual = 0.0f64;
    let mut unsolvable = false;
    for x in 0..n {
        let denom: f64 = a.iter().zip(lambda).map(|(e, l)| (l - e.0[x]).norm_sqr()).sum();
        if denom == 0.0 {
            // every summand vanishes at x, whatever the x_i
            unsolvable = true;
            break;
        }
        let value: Complex64 = a
            .iter()
            .zip(lambda)
            .map(|(e, l)| {
                let d = l - e.0[x];
                d * (d.conj() / denom)
            })
            .sum();
        residual = residual.max((value - 1.0).norm());
    }
    Ok(SingularityReport {
        pointwise,
        sum_not_invertible,
        unsolvable,
        residual: (!unsolvable).then_some(residual),
    })
}

/// `F_n(a, λ) = |1 − ‖(1 − Σ|λ_i − a_i|)₊‖|`, zero exactly on the joint
/// spectrum.
pub fn spectrum_indicator(a: &[CElement], lambda: &[Complex64]) -> Result<f64> {
    let n = check_lambda(a, lambda)?;
    let norm = (0..n)
        .map(|x| (1.0 - distance_sum(a, lambda, x)).max(0.0))
        .fold(0.0, f64::max);
    Ok((1.0 - norm).abs())
}

/// Preimage of the open `1/m`-ball around the grid point `(j1 + i·j2)/m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSet {
    pub j1: i64,
    pub j2: i64,
    pub m: u64,
    pub members: Vec<usize>,
}

impl CodeSet {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.j1 as f64, self.j2 as f64) / self.m as f64
    }
}

/// The nonempty sets `f⁻¹(B_{1/m}(y))` for grid points `y` of modulus at
/// most 1, in lexicographic `(j1, j2)` order.
pub fn clopen_code(f: &CElement, m: u64) -> Result<Vec<CodeSet>> {
    if m == 0 {
        return Err(Error::precondition("m must be >= 1"));
    }
    if f.norm() > 1.0 + 1e-12 {
        return Err(Error::precondition("clopen_code needs ||f|| <= 1"));
    }
    let mi = m as i64;
    let mut out = Vec::new();
    for j1 in -mi..=mi {
        for j2 in -mi..=mi {
            if j1 * j1 + j2 * j2 > mi * mi {
                continue;
            }
            let y = Complex64::new(j1 as f64, j2 as f64) / m as f64;
            let members: Vec<usize> = (0..f.len())
                .filter(|&x| (f.0[x] - y).norm() < 1.0 / m as f64)
                .collect();
            if !members.is_empty() {
                out.push(CodeSet { j1, j2, m, members });
            }
        }
    }
    Ok(out)
}

/// Recovers `f` from its code at the finest scale present: each point takes
/// the grid label of least modulus among the sets containing it, ties going
/// to the smaller real part, then imaginary part.
pub fn reconstruct(codes: &[CodeSet], points: usize) -> Result<CElement> {
    let m = codes
        .iter()
        .map(|c| c.m)
        .max()
        .ok_or_else(|| Error::precondition("empty code"))?;
    let mut out = Vec::with_capacity(points);
    for x in 0..points {
        let best = codes
            .iter()
            .filter(|c| c.m == m && c.members.contains(&x))
            .min_by(|a, b| {
                let key = |c: &CodeSet| (c.j1 * c.j1 + c.j2 * c.j2, c.j1, c.j2);
                key(a).cmp(&key(b))
            })
            .ok_or_else(|| Error::precondition(format!("point {x} is not covered by the code")))?;
        out.push(best.center());
    }
    Ok(CElement(out))
}

/// The infinite-projection formula
/// `ψ(p) = ‖p − p*‖ + ‖p − p²‖ + inf_y (‖yy* − p‖ + ‖y*y·p − y*y‖ + (1 ∸ ‖y*y − p‖))`
/// with `y` ranging over the partial isometries of `C(X)` whose nonzero
/// values are fourth roots of unity.
pub fn psi_infinite_projection(a: &CStarAlgebraFin, p: &CElement) -> Result<f64> {
    a.check(p)?;
    if a.points > MAX_PSI_POINTS {
        return Err(Error::precondition(format!("psi supports at most {MAX_PSI_POINTS} points")));
    }
    if !p.is_projection(1e-12) {
        return Err(Error::precondition(format!("{p} is not a projection")));
    }
    let phases = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let head = p.sub(&p.star()).norm() + p.sub(&p.mul(p)).norm();
    let n = a.points;
    let mut best = f64::INFINITY;
    for code in 0..phases.len().pow(n as u32) {
        let mut c = code;
        let y = CElement(
            (0..n)
                .map(|_| {
                    let z = phases[c % phases.len()];
                    c /= phases.len();
                    z
                })
                .collect(),
        );
        let yy = y.mul(&y.star());
        let ysy = y.star().mul(&y);
        let val = yy.sub(p).norm()
            + ysy.mul(p).sub(&ysy).norm()
            + (1.0 - ysy.sub(p).norm()).max(0.0);
        best = best.min(val);
    }
    Ok(head + best)
}
