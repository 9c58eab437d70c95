//! Saturation at finite scale: chain interpolation in Boolean algebras,
//! degree-1 type realization in `C(X)`, and orthogonal families.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::boolalg::BooleanAlgebra;
use crate::clogic::{
    box_feasible, boundary_point, feasible_point, initial_box, norm_enclosure, split_box, CElement,
    CStarAlgebraFin, CTerm, CxBox, Sort,
};
use crate::error::{Error, Result};

pub const MAX_CYLINDER_DEPTH: u32 = 20;
pub const MAX_TYPE_VARS: usize = 3;
pub const MAX_TYPE_POINTS: usize = 4;
pub const MAX_TYPE_CONDITIONS: usize = 16;
pub const MAX_ORTHO_POINTS: usize = 8;
pub const MAX_REALIZE_BOXES: u64 = 300_000;

/// The clopen algebra of the Cantor space `2^ω`: finite unions of cylinder
/// sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PresentedAtomlessBA;

/// A clopen set, stored as the set of length-`depth` binary words whose
/// cylinders it contains. Word `x_0 … x_{d-1}` has index `Σ x_i 2^{d-1-i}`,
/// so index order is lexicographic order. Always kept at minimal depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderSet {
    depth: u32,
    members: Vec<bool>,
}

impl CylinderSet {
    pub fn zero() -> Self {
        CylinderSet { depth: 0, members: vec![false] }
    }

    pub fn one() -> Self {
        CylinderSet { depth: 0, members: vec![true] }
    }

    /// The cylinder of all sequences extending `prefix`.
    pub fn cylinder(prefix: &[bool]) -> Result<Self> {
        Self::union_of(&[prefix.to_vec()])
    }

    pub fn union_of(prefixes: &[Vec<bool>]) -> Result<Self> {
        let depth = prefixes.iter().map(|p| p.len()).max().unwrap_or(0) as u32;
        if depth > MAX_CYLINDER_DEPTH {
            return Err(Error::budget(format!("cylinder depth exceeds {MAX_CYLINDER_DEPTH}")));
        }
        let mut members = vec![false; 1 << depth];
        for p in prefixes {
            let base = p.iter().fold(0usize, |acc, &b| 2 * acc + b as usize);
            let span = 1usize << (depth as usize - p.len());
            for i in base * span..(base + 1) * span {
                members[i] = true;
            }
        }
        Ok(CylinderSet { depth, members }.canonical())
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_zero(&self) -> bool {
        self.members.iter().all(|&m| !m)
    }

    fn canonical(mut self) -> Self {
        while self.depth > 0 && self.members.chunks(2).all(|c| c[0] == c[1]) {
            self.members = self.members.chunks(2).map(|c| c[0]).collect();
            self.depth -= 1;
        }
        self
    }

    fn at_depth(&self, depth: u32) -> Vec<bool> {
        let span = 1usize << (depth - self.depth);
        self.members
            .iter()
            .flat_map(|&m| std::iter::repeat(m).take(span))
            .collect()
    }

    fn combine(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let depth = self.depth.max(other.depth);
        let (a, b) = (self.at_depth(depth), other.at_depth(depth));
        let members = a.iter().zip(&b).map(|(&x, &y)| f(x, y)).collect();
        CylinderSet { depth, members }.canonical()
    }

    /// Minimal list of prefixes whose cylinders union to this set.
    pub fn prefixes(&self) -> Vec<Vec<bool>> {
        fn walk(s: &CylinderSet, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
            let span = 1usize << (s.depth as usize - prefix.len());
            let base = prefix.iter().fold(0usize, |acc, &b| 2 * acc + b as usize) * span;
            let block = &s.members[base..base + span];
            if block.iter().all(|&m| m) {
                out.push(prefix.clone());
            } else if block.iter().any(|&m| m) {
                for bit in [false, true] {
                    prefix.push(bit);
                    walk(s, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps = self.prefixes();
        if ps.is_empty() {
            return write!(f, "empty");
        }
        let words: Vec<String> = ps
            .iter()
            .map(|p| {
                if p.is_empty() {
                    "*".to_string()
                } else {
                    p.iter().map(|&b| if b { '1' } else { '0' }).collect()
                }
            })
            .collect();
        write!(f, "{}", words.join(","))
    }
}

impl Serialize for CylinderSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl BooleanAlgebra for PresentedAtomlessBA {
    type Elem = CylinderSet;

    fn zero(&self) -> CylinderSet {
        CylinderSet::zero()
    }

    fn one(&self) -> CylinderSet {
        CylinderSet::one()
    }

    fn meet(&self, a: &CylinderSet, b: &CylinderSet) -> CylinderSet {
        a.combine(b, |x, y| x && y)
    }

    fn join(&self, a: &CylinderSet, b: &CylinderSet) -> CylinderSet {
        a.combine(b, |x, y| x || y)
    }

    fn complement(&self, a: &CylinderSet) -> CylinderSet {
        CylinderSet { depth: a.depth, members: a.members.iter().map(|&m| !m).collect() }
    }

    /// Halves the lexicographically first cylinder of `d`.
    fn proper_part(&self, d: &CylinderSet) -> Option<CylinderSet> {
        let first = d.members.iter().position(|&m| m)?;
        if d.depth >= MAX_CYLINDER_DEPTH {
            return None;
        }
        let mut members = vec![false; 1 << (d.depth + 1)];
        members[2 * first] = true;
        Some(CylinderSet { depth: d.depth + 1, members })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Interpolation<E> {
    Found(E),
    NotFound,
}

/// Some `c` with `Y < c < Z`: strictly above every element of the
/// ascending chain `Y` and strictly below every element of the descending
/// chain `Z`.
pub fn interpolate_chain<B: BooleanAlgebra>(
    b: &B,
    ys: &[B::Elem],
    zs: &[B::Elem],
) -> Result<Interpolation<B::Elem>> {
    if ys.windows(2).any(|w| !b.le(&w[0], &w[1])) {
        return Err(Error::precondition("Y is not an ascending chain"));
    }
    if zs.windows(2).any(|w| !b.le(&w[1], &w[0])) {
        return Err(Error::precondition("Z is not a descending chain"));
    }
    for y in ys {
        for z in zs {
            if !b.lt(y, z) {
                return Err(Error::precondition(format!("{y:?} is not strictly below {z:?}")));
            }
        }
    }
    let lo = ys.last().cloned().unwrap_or_else(|| b.zero());
    let hi = zs.last().cloned().unwrap_or_else(|| b.one());
    let Some(part) = b.proper_part(&b.difference(&hi, &lo)) else {
        return Ok(Interpolation::NotFound);
    };
    let c = b.join(&lo, &part);
    let strict = ys.iter().all(|y| b.lt(y, &c)) && zs.iter().all(|z| b.lt(&c, z))
        && b.lt(&lo, &c)
        && b.lt(&c, &hi);
    assert!(strict, "interpolant failed its own check");
    Ok(Interpolation::Found(c))
}

/// A compact target set: finite union of closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Target(Vec<(f64, f64)>);

impl Target {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::precondition("target must contain an interval"));
        }
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                return Err(Error::precondition(format!("[{a}, {b}] is not an interval")));
            }
        }
        Ok(Target(intervals))
    }

    pub fn point(c: f64) -> Self {
        Target(vec![(c, c)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.0
    }

    pub fn distance(&self, x: f64) -> f64 {
        self.0
            .iter()
            .map(|&(a, b)| if x < a { a - x } else if x > b { x - b } else { 0.0 })
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `[lo, hi]` meets the `eps`-thickening.
    fn meets(&self, lo: f64, hi: f64, eps: f64) -> bool {
        self.0.iter().any(|&(a, b)| lo <= b + eps && hi >= a - eps)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(a, b)| if a == b { format!("{{{a}}}") } else { format!("[{a},{b}]") })
            .collect();
        write!(f, "{}", parts.join(" u "))
    }
}

/// `‖P(x̄)‖ ∈ K` for a degree-1 *-polynomial `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeCondition {
    pub polynomial: CTerm,
    pub target: Target,
}

impl fmt::Display for TypeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.polynomial, self.target)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    Realized(HashMap<String, CElement>),
    /// No assignment meets every condition indexed by `delta` within `eps`.
    Unsatisfiable { eps: f64, delta: Vec<usize> },
    Inconclusive { boxes: u64 },
}

fn type_variables(conditions: &[TypeCondition]) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    for c in conditions {
        for v in c.polynomial.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars.sort();
    vars
}

fn check_type(conditions: &[TypeCondition], a: &CStarAlgebraFin) -> Result<Vec<String>> {
    if a.points > MAX_TYPE_POINTS {
        return Err(Error::precondition(format!("realize_type supports at most {MAX_TYPE_POINTS} points")));
    }
    if conditions.len() > MAX_TYPE_CONDITIONS {
        return Err(Error::precondition(format!("at most {MAX_TYPE_CONDITIONS} conditions")));
    }
    let vars = type_variables(conditions);
    if vars.len() > MAX_TYPE_VARS {
        return Err(Error::precondition(format!("at most {MAX_TYPE_VARS} variables")));
    }
    for c in conditions {
        for v in &vars {
            if c.polynomial.degree_in(v) > 1 {
                return Err(Error::precondition(format!("{} has degree > 1 in {v}", c.polynomial)));
            }
        }
        c.polynomial.eval(a.points, &vars.iter().map(|v| (v.as_str(), a.zero())).collect())?;
    }
    Ok(vars)
}

fn split_env<'a>(vars: &'a [String], flat: &CxBox, n: usize) -> HashMap<&'a str, CxBox> {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), flat[i * n..(i + 1) * n].to_vec()))
        .collect()
}

fn split_point(vars: &[String], e: &CElement, n: usize) -> HashMap<String, CElement> {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), CElement(e.0[i * n..(i + 1) * n].to_vec())))
        .collect()
}

/// Largest distance of a condition value from its target.
pub fn type_defect(
    conditions: &[TypeCondition],
    a: &CStarAlgebraFin,
    assignment: &HashMap<String, CElement>,
) -> Result<f64> {
    let env = assignment.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let mut worst = 0.0f64;
    for c in conditions {
        let value = c.polynomial.eval(a.points, &env)?.norm();
        worst = worst.max(c.target.distance(value));
    }
    Ok(worst)
}

/// Looks for unit-ball elements satisfying every condition within `tol`, or
/// refutes the conditions at thickening `tol` by exhausting the polydisc.
pub fn realize_type(conditions: &[TypeCondition], a: &CStarAlgebraFin, tol: f64) -> Result<Realization> {
    if !(tol > 0.0) {
        return Err(Error::precondition("tol must be positive"));
    }
    let vars = check_type(conditions, a)?;
    let n = a.points;
    let mut delta = BTreeSet::new();
    let mut stack = vec![initial_box(Sort::Ball, n * vars.len())];
    let mut boxes = 0u64;
    while let Some(b) = stack.pop() {
        boxes += 1;
        if boxes > MAX_REALIZE_BOXES {
            return Ok(Realization::Inconclusive { boxes });
        }
        if !box_feasible(Sort::Ball, &b) {
            continue;
        }
        let env = split_env(&vars, &b, n);
        let refuted = conditions.iter().position(|c| {
            let (lo, hi) = norm_enclosure(&c.polynomial, n, &env);
            !c.target.meets(lo, hi, tol)
        });
        if let Some(i) = refuted {
            delta.insert(i);
            continue;
        }
        let candidates = std::iter::once(feasible_point(Sort::Ball, &b)).chain(boundary_point(&b));
        for p in candidates {
            let assignment = split_point(&vars, &p, n);
            if type_defect(conditions, a, &assignment)? <= tol {
                return Ok(Realization::Realized(assignment));
            }
        }
        let (l, r) = split_box(Sort::Ball, &b);
        stack.push(r);
        stack.push(l);
    }
    Ok(Realization::Unsatisfiable { eps: tol, delta: delta.into_iter().collect() })
}

/// Grid search over the unit polydisc with `steps` values per real
/// coordinate; returns a grid assignment meeting every condition within
/// `eps`, if one exists.
pub fn grid_search(
    conditions: &[TypeCondition],
    a: &CStarAlgebraFin,
    eps: f64,
    steps: usize,
) -> Result<Option<HashMap<String, CElement>>> {
    let vars = check_type(conditions, a)?;
    let n = a.points;
    let dims = n * vars.len();
    let axis: Vec<f64> = (0..steps)
        .map(|i| if steps == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (steps - 1) as f64 })
        .collect();
    let disc: Vec<Complex64> = axis
        .iter()
        .flat_map(|&re| axis.iter().map(move |&im| Complex64::new(re, im)))
        .filter(|z| z.norm() <= 1.0)
        .collect();
    let total = disc.len().checked_pow(dims as u32).ok_or_else(|| Error::budget("grid too large"))?;
    if total > 5_000_000 {
        return Err(Error::budget(format!("grid of {total} points")));
    }
    for code in 0..total {
        let mut c = code;
        let point = CElement(
            (0..dims)
                .map(|_| {
                    let z = disc[c % disc.len()];
                    c /= disc.len();
                    z
                })
                .collect(),
        );
        let assignment = split_point(&vars, &point, n);
        if type_defect(conditions, a, &assignment)? <= eps {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Largest family of pairwise orthogonal positive norm-one elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalFamily {
    pub size: usize,
    #[serde(skip)]
    pub witnesses: Vec<CElement>,
}

/// Such elements have nonempty supports that must be pairwise disjoint, so
/// the family has at most `|X|` members; the point indicators attain this.
pub fn max_orthogonal_family(a: &CStarAlgebraFin) -> Result<OrthogonalFamily> {
    if a.points > MAX_ORTHO_POINTS {
        return Err(Error::precondition(format!("at most {MAX_ORTHO_POINTS} points")));
    }
    let witnesses: Vec<CElement> = (0..a.points).map(|i| a.indicator(1 << i)).collect();
    assert!(is_orthogonal_family(&witnesses));
    Ok(OrthogonalFamily { size: witnesses.len(), witnesses })
}

pub fn is_orthogonal_family(family: &[CElement]) -> bool {
    let positive = |e: &CElement| e.0.iter().all(|z| z.im == 0.0 && z.re >= 0.0);
    family.iter().all(|e| positive(e) && e.norm() == 1.0)
        && family.iter().enumerate().all(|(i, e)| {
            family[i + 1..].iter().all(|f| e.mul(f).norm() == 0.0)
        })
}
