//! Finite Boolean algebras, Stone duality at finite scale, and an
//! exhaustive first-order model checker.
//!
//! A finite Boolean algebra is the powerset of its atoms; elements are
//! stored as bitmasks over atom indices.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest atom count for which elements fit in the bitmask representation.
pub const MAX_ATOMS: usize = 20;

/// Budget for exhaustive quantification: `atoms · quantifier_rank ≤ 24`.
pub const EVAL_BUDGET_LOG2: usize = 24;

/// Operations shared by the concrete Boolean algebras of the crate.
pub trait BooleanAlgebra {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn complement(&self, a: &Self::Elem) -> Self::Elem;

    /// Some `e` with `0 < e < d`, if one exists.
    fn proper_part(&self, d: &Self::Elem) -> Option<Self::Elem>;

    fn le(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *a
    }

    fn lt(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a != b && self.le(a, b)
    }

    fn difference(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.meet(a, &self.complement(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BaElement(u32);

impl BaElement {
    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn atoms(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 >> i & 1 == 1)
    }
}

impl fmt::Display for BaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.atoms().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// The powerset algebra on `atom_count` atoms. Zero atoms gives the trivial
/// algebra in which `0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteBoolAlg {
    atoms: usize,
}

impl FiniteBoolAlg {
    pub fn new(atoms: usize) -> Self {
        assert!(atoms <= MAX_ATOMS, "at most {MAX_ATOMS} atoms supported");
        FiniteBoolAlg { atoms }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn size(&self) -> u64 {
        1 << self.atoms
    }

    pub fn top(&self) -> BaElement {
        BaElement(((1u64 << self.atoms) - 1) as u32)
    }

    pub fn element(&self, bits: u32) -> Result<BaElement> {
        if bits & !self.top().0 != 0 {
            return Err(Error::precondition(format!("{bits:#b} is not an element of P({})", self.atoms)));
        }
        Ok(BaElement(bits))
    }

    pub fn from_atoms(&self, atoms: impl IntoIterator<Item = usize>) -> Result<BaElement> {
        let mut bits = 0u32;
        for a in atoms {
            if a >= self.atoms {
                return Err(Error::precondition(format!("atom {a} out of range")));
            }
            bits |= 1 << a;
        }
        Ok(BaElement(bits))
    }

    pub fn elements(&self) -> impl Iterator<Item = BaElement> {
        (0..(1u64 << self.atoms)).map(|b| BaElement(b as u32))
    }

    pub fn atom(&self, i: usize) -> BaElement {
        assert!(i < self.atoms);
        BaElement(1 << i)
    }

    pub fn is_atom(&self, e: BaElement) -> bool {
        e.size() == 1
    }

    /// Finite Boolean algebras are isomorphic iff they have equally many atoms.
    pub fn is_isomorphic(&self, other: &FiniteBoolAlg) -> bool {
        self.atoms == other.atoms
    }
}

impl BooleanAlgebra for FiniteBoolAlg {
    type Elem = BaElement;

    fn zero(&self) -> BaElement {
        BaElement(0)
    }
    fn one(&self) -> BaElement {
        self.top()
    }
    fn meet(&self, a: &BaElement, b: &BaElement) -> BaElement {
        BaElement(a.0 & b.0)
    }
    fn join(&self, a: &BaElement, b: &BaElement) -> BaElement {
        BaElement(a.0 | b.0)
    }
    fn complement(&self, a: &BaElement) -> BaElement {
        BaElement(!a.0 & self.top().0)
    }
    fn proper_part(&self, d: &BaElement) -> Option<BaElement> {
        if d.size() < 2 {
            return None;
        }
        let lowest = d.0 & d.0.wrapping_neg();
        Some(BaElement(lowest))
    }
}

/// A subalgebra together with the embedding of its atoms into the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subalgebra {
    pub algebra: FiniteBoolAlg,
    /// Parent element corresponding to each atom of `algebra`.
    pub atom_images: Vec<BaElement>,
}

impl Subalgebra {
    pub fn embed(&self, e: BaElement) -> BaElement {
        BaElement(e.atoms().fold(0, |acc, a| acc | self.atom_images[a].0))
    }
}

/// Smallest subalgebra of `parent` containing `gens`. Its atoms are the
/// nonempty cells `⋂ ±g` over all sign patterns of the generators.
pub fn generate_subalgebra(parent: &FiniteBoolAlg, gens: &[BaElement]) -> Result<Subalgebra> {
    for g in gens {
        parent.element(g.0)?;
    }
    let mut cells: Vec<u32> = if parent.atom_count() == 0 { vec![] } else { vec![parent.top().0] };
    for g in gens {
        cells = cells
            .into_iter()
            .flat_map(|c| [c & g.0, c & !g.0])
            .filter(|&c| c != 0)
            .collect();
    }
    cells.sort_unstable_by_key(|c| c.trailing_zeros());
    Ok(Subalgebra {
        algebra: FiniteBoolAlg::new(cells.len()),
        atom_images: cells.into_iter().map(BaElement).collect(),
    })
}

/// A finite discrete space on points `0..points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    pub points: usize,
}

impl FiniteSpace {
    pub fn new(points: usize) -> Self {
        FiniteSpace { points }
    }

    /// Finite discrete spaces are homeomorphic iff they have the same size.
    pub fn is_homeomorphic(&self, other: &FiniteSpace) -> bool {
        self.points == other.points
    }
}

/// Ultrafilters of a finite algebra are principal at atoms: one point each.
pub fn stone_space(b: &FiniteBoolAlg) -> FiniteSpace {
    FiniteSpace::new(b.atom_count())
}

pub fn clopen_algebra(x: &FiniteSpace) -> FiniteBoolAlg {
    FiniteBoolAlg::new(x.points)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceMap {
    pub domain: FiniteSpace,
    pub codomain: FiniteSpace,
    pub images: Vec<usize>,
}

impl SpaceMap {
    pub fn new(domain: FiniteSpace, codomain: FiniteSpace, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.points {
            return Err(Error::precondition("map must be total on the domain"));
        }
        if let Some(&y) = images.iter().find(|&&y| y >= codomain.points) {
            return Err(Error::precondition(format!("image {y} outside the codomain")));
        }
        Ok(SpaceMap { domain, codomain, images })
    }

    pub fn identity(x: FiniteSpace) -> Self {
        SpaceMap { domain: x, codomain: x, images: (0..x.points).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpaceMap) -> Result<SpaceMap> {
        if self.codomain != other.domain {
            return Err(Error::precondition("maps are not composable"));
        }
        let images = self.images.iter().map(|&y| other.images[y]).collect();
        SpaceMap::new(self.domain, other.codomain, images)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.points];
        self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.points];
        for &y in &self.images {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// A homomorphism `CL(Y) → CL(X)` presented by its dual point map `X → Y`:
/// `point_map[x]` is the atom of the source whose image contains atom `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaHomomorphism {
    pub source: FiniteBoolAlg,
    pub target: FiniteBoolAlg,
    pub point_map: Vec<usize>,
}

impl BaHomomorphism {
    /// Builds a homomorphism from the images of the source atoms; these must
    /// be pairwise disjoint and cover the target.
    pub fn from_atom_images(
        source: FiniteBoolAlg,
        target: FiniteBoolAlg,
        images: &[BaElement],
    ) -> Result<Self> {
        if images.len() != source.atom_count() {
            return Err(Error::precondition("one image per source atom required"));
        }
        let mut point_map = vec![usize::MAX; target.atom_count()];
        for (y, img) in images.iter().enumerate() {
            target.element(img.0)?;
            for x in img.atoms() {
                if point_map[x] != usize::MAX {
                    return Err(Error::precondition("atom images overlap"));
                }
                point_map[x] = y;
            }
        }
        if point_map.contains(&usize::MAX) {
            return Err(Error::precondition("atom images do not cover the target"));
        }
        Ok(BaHomomorphism { source, target, point_map })
    }

    pub fn apply(&self, c: BaElement) -> BaElement {
        let bits = self
            .point_map
            .iter()
            .enumerate()
            .filter(|(_, &y)| c.contains(y))
            .fold(0u32, |acc, (x, _)| acc | 1 << x);
        BaElement(bits)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BaHomomorphism) -> Result<BaHomomorphism> {
        if other.target != self.source {
            return Err(Error::precondition("homomorphisms are not composable"));
        }
        let point_map = self.point_map.iter().map(|&y| other.point_map[y]).collect();
        Ok(BaHomomorphism { source: other.source, target: self.target, point_map })
    }

    /// The continuous map `X → Y` dual to this homomorphism.
    pub fn dual_point_map(&self) -> SpaceMap {
        SpaceMap {
            domain: stone_space(&self.target),
            codomain: stone_space(&self.source),
            images: self.point_map.clone(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.source.elements().all(|c| seen.insert(self.apply(c)))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for c in self.source.elements() {
            seen.insert(self.apply(c));
        }
        seen.len() as u64 == self.target.size()
    }

    /// Exhaustive check of `0, 1, ∧, ∨, ¬` preservation.
    pub fn preserves_operations(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.apply(s.zero()) != t.zero() || self.apply(s.one()) != t.one() {
            return false;
        }
        s.elements().all(|a| {
            self.apply(s.complement(&a)) == t.complement(&self.apply(a))
                && s.elements().all(|b| {
                    self.apply(s.meet(&a, &b)) == t.meet(&self.apply(a), &self.apply(b))
                        && self.apply(s.join(&a, &b)) == t.join(&self.apply(a), &self.apply(b))
                })
        })
    }
}

/// Preimage homomorphism `C ↦ f^{-1}[C]` from `CL(codomain)` to `CL(domain)`.
pub fn dual_morphism(f: &SpaceMap) -> BaHomomorphism {
    BaHomomorphism {
        source: clopen_algebra(&f.codomain),
        target: clopen_algebra(&f.domain),
        point_map: f.images.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaTerm {
    Var(String),
    Zero,
    One,
    Meet(Box<BaTerm>, Box<BaTerm>),
    Join(Box<BaTerm>, Box<BaTerm>),
    Compl(Box<BaTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Eq(BaTerm, BaTerm),
    Le(BaTerm, BaTerm),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
}

impl BaTerm {
    pub fn var(name: &str) -> Self {
        BaTerm::Var(name.to_string())
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            BaTerm::Var(v) => out.push(v),
            BaTerm::Zero | BaTerm::One => {}
            BaTerm::Meet(a, b) | BaTerm::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            BaTerm::Compl(a) => a.collect_vars(out),
        }
    }

    fn eval(&self, b: &FiniteBoolAlg, env: &[(&str, BaElement)]) -> Result<BaElement> {
        Ok(match self {
            BaTerm::Var(v) => env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, e)| *e)
                .ok_or_else(|| Error::Scope(v.clone()))?,
            BaTerm::Zero => b.zero(),
            BaTerm::One => b.one(),
            BaTerm::Meet(x, y) => b.meet(&x.eval(b, env)?, &y.eval(b, env)?),
            BaTerm::Join(x, y) => b.join(&x.eval(b, env)?, &y.eval(b, env)?),
            BaTerm::Compl(x) => b.complement(&x.eval(b, env)?),
        })
    }
}

impl FoFormula {
    pub fn quantifier_rank(&self) -> usize {
        match self {
            FoFormula::Eq(..) | FoFormula::Le(..) => 0,
            FoFormula::Not(a) => a.quantifier_rank(),
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Implies(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            FoFormula::Forall(_, a) | FoFormula::Exists(_, a) => 1 + a.quantifier_rank(),
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        fn go<'a>(f: &'a FoFormula, bound: &mut Vec<&'a str>, out: &mut Vec<String>) {
            match f {
                FoFormula::Eq(s, t) | FoFormula::Le(s, t) => {
                    let mut vs = Vec::new();
                    s.collect_vars(&mut vs);
                    t.collect_vars(&mut vs);
                    for v in vs {
                        if !bound.contains(&v) && !out.iter().any(|o| o == v) {
                            out.push(v.to_string());
                        }
                    }
                }
                FoFormula::Not(a) => go(a, bound, out),
                FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                FoFormula::Forall(v, a) | FoFormula::Exists(v, a) => {
                    bound.push(v);
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

/// Tarskian truth of `phi` in `b` by exhaustive quantification.
pub fn fo_eval(phi: &FoFormula, b: &FiniteBoolAlg, assignment: &HashMap<String, BaElement>) -> Result<bool> {
    let cost = b.atom_count() * phi.quantifier_rank();
    if cost > EVAL_BUDGET_LOG2 {
        return Err(Error::budget(format!(
            "2^{cost} quantifier instances exceed 2^{EVAL_BUDGET_LOG2}"
        )));
    }
    for v in phi.free_vars() {
        match assignment.get(&v) {
            None => return Err(Error::Scope(v)),
            Some(e) => {
                b.element(e.bits())?;
            }
        }
    }
    let mut env: Vec<(&str, BaElement)> = assignment.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    eval_rec(phi, b, &mut env)
}

fn eval_rec<'a>(phi: &'a FoFormula, b: &FiniteBoolAlg, env: &mut Vec<(&'a str, BaElement)>) -> Result<bool> {
    Ok(match phi {
        FoFormula::Eq(s, t) => s.eval(b, env)? == t.eval(b, env)?,
        FoFormula::Le(s, t) => b.le(&s.eval(b, env)?, &t.eval(b, env)?),
        FoFormula::Not(a) => !eval_rec(a, b, env)?,
        FoFormula::And(x, y) => eval_rec(x, b, env)? && eval_rec(y, b, env)?,
        FoFormula::Or(x, y) => eval_rec(x, b, env)? || eval_rec(y, b, env)?,
        FoFormula::Implies(x, y) => !eval_rec(x, b, env)? || eval_rec(y, b, env)?,
        FoFormula::Forall(v, body) | FoFormula::Exists(v, body) => {
            let universal = matches!(phi, FoFormula::Forall(..));
            let mut result = universal;
            for e in b.elements() {
                env.push((v, e));
                let holds = eval_rec(body, b, env);
                env.pop();
                if holds? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
    })
}

/// Deterministic corpus of sentences with quantifier rank in `1..=max_rank`.
pub fn sentence_corpus(seed: u64, count: usize, max_rank: usize) -> Vec<FoFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rank = rng.gen_range(1..=max_rank.max(1));
            let mut bound = Vec::new();
            gen_quantified(&mut rng, &mut bound, rank)
        })
        .collect()
}

fn gen_quantified(rng: &mut ChaCha8Rng, bound: &mut Vec<String>, rank: usize) -> FoFormula {
    let v = format!("x{}", bound.len());
    bound.push(v.clone());
    let body = gen_formula(rng, bound, rank - 1, 3);
    bound.pop();
    if rng.gen_bool(0.5) {
        FoFormula::Forall(v, Box::new(body))
    } else {
        FoFormula::Exists(v, Box::new(body))
    }
}

fn gen_formula(rng: &mut ChaCha8Rng, bound: &mut Vec<String>, rank: usize, size: usize) -> FoFormula {
    let choice = rng.gen_range(0..10);
    if rank > 0 && (choice < 4 || size == 0) {
        return gen_quantified(rng, bound, rank);
    }
    if size == 0 || choice < 6 {
        let s = gen_term(rng, bound, 2);
        let t = gen_term(rng, bound, 1);
        return if rng.gen_bool(0.5) { FoFormula::Eq(s, t) } else { FoFormula::Le(s, t) };
    }
    let a = Box::new(gen_formula(rng, bound, rank, size - 1));
    match choice {
        6 => FoFormula::Not(a),
        7 => FoFormula::And(a, Box::new(gen_formula(rng, bound, rank, size - 1))),
        8 => FoFormula::Or(a, Box::new(gen_formula(rng, bound, rank, size - 1))),
        _ => FoFormula::Implies(a, Box::new(gen_formula(rng, bound, rank, size - 1))),
    }
}

fn gen_term(rng: &mut ChaCha8Rng, bound: &[String], depth: usize) -> BaTerm {
    let leaf = depth == 0 || rng.gen_bool(0.5);
    if leaf {
        let k = rng.gen_range(0..bound.len() + 2);
        return match k {
            0 => BaTerm::Zero,
            1 => BaTerm::One,
            _ => BaTerm::Var(bound[k - 2].clone()),
        };
    }
    let a = Box::new(gen_term(rng, bound, depth - 1));
    match rng.gen_range(0..3) {
        0 => BaTerm::Compl(a),
        1 => BaTerm::Meet(a, Box::new(gen_term(rng, bound, depth - 1))),
        _ => BaTerm::Join(a, Box::new(gen_term(rng, bound, depth - 1))),
    }
}

impl fmt::Display for BaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaTerm::Var(v) => write!(f, "{v}"),
            BaTerm::Zero => write!(f, "0"),
            BaTerm::One => write!(f, "1"),
            BaTerm::Meet(a, b) => write!(f, "({a} /\\ {b})"),
            BaTerm::Join(a, b) => write!(f, "({a} \\/ {b})"),
            BaTerm::Compl(a) => write!(f, "-{a}"),
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoFormula::Eq(a, b) => write!(f, "{a} = {b}"),
            FoFormula::Le(a, b) => write!(f, "{a} <= {b}"),
            FoFormula::Not(a) => write!(f, "!({a})"),
            FoFormula::And(a, b) => write!(f, "({a} & {b})"),
            FoFormula::Or(a, b) => write!(f, "({a} | {b})"),
            FoFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            FoFormula::Forall(v, a) => write!(f, "(forall {v}. {a})"),
            FoFormula::Exists(v, a) => write!(f, "(exists {v}. {a})"),
        }
    }
}
