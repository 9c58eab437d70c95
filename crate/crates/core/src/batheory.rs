//! Symbolic infinite Boolean algebras and their elementary invariants.
//!
//! Descriptors form a small closed class on which the derivative (quotient
//! by the ideal generated by atoms and atomless elements) is computed by
//! rule. Iterating the derivative to the trivial algebra yields the invariant
//! triple `(level, atoms, atomless)` describing the last nontrivial stage.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

pub const MAX_DERIVATIVE_CHAIN: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaDescriptor {
    Trivial,
    /// Finite algebra with `n ≥ 1` atoms.
    Finite(u64),
    /// Finite–cofinite subsets of a countable set (`CL(ω+1)`).
    FinCof,
    /// `P(ω)`, the clopen algebra of `βω`.
    PowersetOmega,
    /// `P(ω)/fin`, the clopen algebra of `βω∖ω`.
    PowersetModFin,
    /// The countable atomless algebra, clopens of the Cantor space.
    FreeAtomless,
    /// Interval algebra of the order `α`, with `1 ≤ α < ω^ω`. For infinite
    /// `α` this is the clopen algebra of `α+1`; for finite `n` it is `P(n)`.
    IntervalAlgebra(Ordinal),
    Product(Vec<BaDescriptor>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomCount {
    Finite(u64),
    Omega,
}

/// `(level, atoms, atomless)`: index of the last nontrivial derivative, its
/// number of atoms capped at `ω`, and whether it has a nonzero atomless
/// element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ErshovInvariant {
    pub level: u32,
    pub atoms: AtomCount,
    pub atomless: bool,
}

impl AtomCount {
    fn add(self, other: AtomCount) -> AtomCount {
        match (self, other) {
            (AtomCount::Finite(a), AtomCount::Finite(b)) => AtomCount::Finite(a + b),
            _ => AtomCount::Omega,
        }
    }

    pub fn is_zero(self) -> bool {
        self == AtomCount::Finite(0)
    }
}

impl Ord for AtomCount {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AtomCount::Finite(a), AtomCount::Finite(b)) => a.cmp(b),
            (AtomCount::Finite(_), AtomCount::Omega) => Ordering::Less,
            (AtomCount::Omega, AtomCount::Finite(_)) => Ordering::Greater,
            (AtomCount::Omega, AtomCount::Omega) => Ordering::Equal,
        }
    }
}

impl PartialOrd for AtomCount {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AtomCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomCount::Finite(n) => write!(f, "{n}"),
            AtomCount::Omega => write!(f, "omega"),
        }
    }
}

impl Serialize for AtomCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            AtomCount::Finite(n) => serializer.serialize_u64(*n),
            AtomCount::Omega => serializer.serialize_str("omega"),
        }
    }
}

impl fmt::Display for ErshovInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.level, self.atoms, self.atomless)
    }
}

impl ErshovInvariant {
    pub fn new(level: u32, atoms: AtomCount, atomless: bool) -> Self {
        ErshovInvariant { level, atoms, atomless }
    }

    /// Triples realized by some nontrivial algebra: the last stage is never
    /// empty, so it has an atom or an atomless element.
    pub fn is_realizable(&self) -> bool {
        self.atomless || !self.atoms.is_zero()
    }
}

impl BaDescriptor {
    pub fn finite(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("finite(n) needs n >= 1; use `trivial`"));
        }
        Ok(BaDescriptor::Finite(n))
    }

    pub fn interval(alpha: Ordinal) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::precondition("intalg(0) is not a descriptor; use `trivial`"));
        }
        if !alpha.has_finite_exponents() {
            return Err(Error::precondition(format!("intalg({alpha}) needs finite exponents")));
        }
        Ok(BaDescriptor::IntervalAlgebra(alpha))
    }

    pub fn product(parts: Vec<BaDescriptor>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::precondition("prod() needs at least one factor"));
        }
        Ok(BaDescriptor::Product(parts))
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            BaDescriptor::Trivial => true,
            BaDescriptor::Product(ps) => ps.iter().all(|p| p.is_trivial()),
            _ => false,
        }
    }

    /// Number of atoms, capped at `ω`.
    pub fn atom_count(&self) -> AtomCount {
        match self {
            BaDescriptor::Trivial | BaDescriptor::PowersetModFin | BaDescriptor::FreeAtomless => {
                AtomCount::Finite(0)
            }
            BaDescriptor::Finite(n) => AtomCount::Finite(*n),
            BaDescriptor::FinCof | BaDescriptor::PowersetOmega => AtomCount::Omega,
            BaDescriptor::IntervalAlgebra(a) => match a.as_nat() {
                Some(n) => AtomCount::Finite(n),
                None => AtomCount::Omega,
            },
            BaDescriptor::Product(ps) => {
                ps.iter().fold(AtomCount::Finite(0), |acc, p| acc.add(p.atom_count()))
            }
        }
    }

    /// Whether some nonzero element has no atom below it.
    pub fn has_atomless_part(&self) -> bool {
        match self {
            BaDescriptor::PowersetModFin | BaDescriptor::FreeAtomless => true,
            BaDescriptor::Product(ps) => ps.iter().any(|p| p.has_atomless_part()),
            _ => false,
        }
    }

    /// Every nonzero element lies above an atom, i.e. the isolated points of
    /// the Stone space are dense.
    pub fn is_atomic(&self) -> bool {
        !self.is_trivial() && !self.has_atomless_part()
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            BaDescriptor::Trivial | BaDescriptor::Finite(_) => false,
            BaDescriptor::IntervalAlgebra(a) => a.as_nat().is_none(),
            BaDescriptor::Product(ps) => ps.iter().any(|p| p.is_infinite()),
            _ => true,
        }
    }

    /// Quotient by the ideal generated by atoms and atomless elements.
    pub fn derivative(&self) -> BaDescriptor {
        match self {
            BaDescriptor::Trivial
            | BaDescriptor::Finite(_)
            | BaDescriptor::FreeAtomless
            | BaDescriptor::PowersetModFin => BaDescriptor::Trivial,
            BaDescriptor::FinCof => BaDescriptor::Finite(1),
            BaDescriptor::PowersetOmega => BaDescriptor::PowersetModFin,
            BaDescriptor::IntervalAlgebra(a) => {
                // Cantor–Bendixson derivative: ω^(k+1)·c contributes ω^k·c limit points
                let shifted = Ordinal::sum_of_terms(a.terms().iter().filter_map(|t| {
                    let k = t.exponent.as_nat().expect("finite exponent");
                    (k > 0).then(|| (Ordinal::nat(k - 1), t.coefficient))
                }));
                if shifted.is_zero() {
                    BaDescriptor::Trivial
                } else {
                    BaDescriptor::IntervalAlgebra(shifted)
                }
            }
            BaDescriptor::Product(ps) => {
                let mut parts: Vec<BaDescriptor> = ps
                    .iter()
                    .map(|p| p.derivative())
                    .filter(|p| !p.is_trivial())
                    .collect();
                match parts.len() {
                    0 => BaDescriptor::Trivial,
                    1 => parts.pop().unwrap(),
                    _ => BaDescriptor::Product(parts),
                }
            }
        }
    }

    /// The nontrivial stages `d, d′, d″, …`.
    pub fn derivative_chain(&self) -> Vec<BaDescriptor> {
        let mut chain = Vec::new();
        let mut stage = self.clone();
        while !stage.is_trivial() {
            assert!(
                (chain.len() as u32) < MAX_DERIVATIVE_CHAIN,
                "derivative chain exceeds {MAX_DERIVATIVE_CHAIN} stages"
            );
            let next = stage.derivative();
            chain.push(stage);
            stage = next;
        }
        chain
    }
}

pub fn ba_derivative(d: &BaDescriptor) -> BaDescriptor {
    d.derivative()
}

pub fn ershov_invariants(d: &BaDescriptor) -> ErshovInvariant {
    let chain = d.derivative_chain();
    match chain.last() {
        None => ErshovInvariant::new(0, AtomCount::Finite(0), false),
        Some(last) => ErshovInvariant::new(
            chain.len() as u32 - 1,
            last.atom_count(),
            last.has_atomless_part(),
        ),
    }
}

pub fn ba_equiv(d1: &BaDescriptor, d2: &BaDescriptor) -> bool {
    ershov_invariants(d1) == ershov_invariants(d2)
}

/// `C(X) ≡ C(Y)` for the Stone spaces of the two descriptors, which holds
/// exactly when the clopen algebras are elementarily equivalent.
pub fn cstar_equiv(d1: &BaDescriptor, d2: &BaDescriptor) -> bool {
    ba_equiv(d1, d2)
}

/// Enumeration weight: level plus atom count, with `0` and `ω` atoms
/// weighing like a single atom. Each weight class is finite.
fn weight(inv: &ErshovInvariant) -> u64 {
    let a = match inv.atoms {
        AtomCount::Finite(n) => n.max(1),
        AtomCount::Omega => 1,
    };
    inv.level as u64 + a
}

fn weight_class(w: u64) -> Vec<ErshovInvariant> {
    let mut class = Vec::new();
    for level in 0..w {
        let rest = w - level;
        let counts: Vec<AtomCount> = if rest == 1 {
            vec![AtomCount::Finite(0), AtomCount::Finite(1), AtomCount::Omega]
        } else {
            vec![AtomCount::Finite(rest)]
        };
        for atoms in counts {
            for atomless in [false, true] {
                let inv = ErshovInvariant::new(level as u32, atoms, atomless);
                if inv.is_realizable() {
                    class.push(inv);
                }
            }
        }
    }
    class.sort_by(|a, b| {
        (a.level, a.atomless, a.atoms).cmp(&(b.level, b.atomless, b.atoms))
    });
    class
}

/// Position of an invariant in the [`enumerate_theories`] order.
pub fn theory_index(inv: &ErshovInvariant) -> Option<usize> {
    if !inv.is_realizable() {
        return None;
    }
    let w = weight(inv);
    let before: usize = (1..w).map(|v| weight_class(v).len()).sum();
    weight_class(w).iter().position(|x| x == inv).map(|p| before + p)
}

/// The first `k` complete theories of nontrivial Boolean algebras, as
/// invariant triples. Triples are listed by increasing weight; within a
/// weight, by level, then atomless flag, then atom count.
pub fn enumerate_theories(k: usize) -> Result<Vec<ErshovInvariant>> {
    if k > 10_000 {
        return Err(Error::budget("enumerate_theories is limited to 10000 entries"));
    }
    let mut out = Vec::with_capacity(k);
    let mut w = 1;
    while out.len() < k {
        out.extend(weight_class(w).into_iter().take(k - out.len()));
        w += 1;
    }
    Ok(out)
}

/// What the isolated-points criterion says about a pair of descriptors:
/// two infinite algebras with the same finite number of atoms, or two
/// infinite atomic algebras, are claimed to have equivalent function
/// algebras. `None` when the criterion does not apply.
pub fn isolated_points_prediction(d1: &BaDescriptor, d2: &BaDescriptor) -> Option<bool> {
    if !d1.is_infinite() || !d2.is_infinite() {
        return None;
    }
    let same_finite = matches!(
        (d1.atom_count(), d2.atom_count()),
        (AtomCount::Finite(a), AtomCount::Finite(b)) if a == b
    );
    (same_finite || (d1.is_atomic() && d2.is_atomic())).then_some(true)
}

/// Disagreement between the invariant verdict and the isolated-points
/// criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictNote {
    pub claim: &'static str,
    pub predicted_equivalent: bool,
    pub computed_equivalent: bool,
    pub message: String,
}

pub const ISOLATED_POINTS_CLAIM: &str = "isolated-points-criterion";

pub fn isolated_points_conflict(d1: &BaDescriptor, d2: &BaDescriptor) -> Option<ConflictNote> {
    let predicted = isolated_points_prediction(d1, d2)?;
    let computed = ba_equiv(d1, d2);
    let atomic = d1.is_atomic() && d2.is_atomic();
    (predicted != computed).then(|| ConflictNote {
        claim: ISOLATED_POINTS_CLAIM,
        predicted_equivalent: predicted,
        computed_equivalent: computed,
        message: format!(
            "both spaces are infinite with {} isolated points, which the published criterion \
             treats as sufficient for C(X) = C(Y) elementarily; the invariants {} and {} differ{}",
            if atomic { "dense" } else { "equally many" },
            ershov_invariants(d1),
            ershov_invariants(d2),
            if atomic {
                ". The derivative invariants separate algebras that the classical \
                 classification identifies: it treats all infinite atomic algebras as \
                 elementarily equivalent"
            } else {
                ""
            },
        ),
    })
}

/// Deterministic descriptor corpus used by consistency checks.
pub fn descriptor_corpus() -> Vec<BaDescriptor> {
    use BaDescriptor::*;
    let w = Ordinal::omega;
    let wp = |k: u64| Ordinal::omega_pow(Ordinal::nat(k));
    let mut out: Vec<BaDescriptor> = (1..=8).map(Finite).collect();
    out.extend([FinCof, PowersetOmega, PowersetModFin, FreeAtomless]);
    for k in 0..=4u64 {
        for c in 1..=3u64 {
            out.push(IntervalAlgebra(wp(k).mul(&Ordinal::nat(c))));
        }
    }
    out.push(IntervalAlgebra(wp(2).mul(&Ordinal::nat(2)).add(&w().mul(&Ordinal::nat(3))).add(&Ordinal::nat(4))));
    out.push(IntervalAlgebra(wp(3).add(&w())));
    let bases = [Finite(1), Finite(3), FinCof, PowersetOmega, PowersetModFin, FreeAtomless];
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i..] {
            out.push(Product(vec![a.clone(), b.clone()]));
        }
    }
    out.push(Product(vec![IntervalAlgebra(wp(2)), FreeAtomless]));
    out.push(Product(vec![IntervalAlgebra(wp(2)), IntervalAlgebra(w()), Trivial]));
    out.push(Product(vec![PowersetOmega, IntervalAlgebra(wp(1).mul(&Ordinal::nat(2)))]));
    out
}

impl fmt::Display for BaDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaDescriptor::Trivial => write!(f, "trivial"),
            BaDescriptor::Finite(n) => write!(f, "finite({n})"),
            BaDescriptor::FinCof => write!(f, "fincof"),
            BaDescriptor::PowersetOmega => write!(f, "P(omega)"),
            BaDescriptor::PowersetModFin => write!(f, "P(omega)/fin"),
            BaDescriptor::FreeAtomless => write!(f, "free"),
            BaDescriptor::IntervalAlgebra(a) => write!(f, "intalg({a})"),
            BaDescriptor::Product(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "prod({})", parts.join(", "))
            }
        }
    }
}

impl Serialize for BaDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BaDescriptor::*;

    fn inv(level: u32, atoms: u64, atomless: bool) -> ErshovInvariant {
        ErshovInvariant::new(level, AtomCount::Finite(atoms), atomless)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ba_derivative(&FinCof), Finite(1));
        assert_eq!(ba_derivative(&FreeAtomless), Trivial);
        let a = Ordinal::sum_of_terms([(Ordinal::nat(2), 2), (Ordinal::nat(1), 3), (Ordinal::nat(0), 4)]);
        let b = Ordinal::sum_of_terms([(Ordinal::nat(1), 2), (Ordinal::nat(0), 3)]);
        assert_eq!(ba_derivative(&IntervalAlgebra(a)), IntervalAlgebra(b));
        assert_eq!(ba_derivative(&PowersetOmega), PowersetModFin);
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(ershov_invariants(&Finite(3)), inv(0, 3, false));
        assert_eq!(ershov_invariants(&FreeAtomless), inv(0, 0, true));
        assert_eq!(ershov_invariants(&PowersetOmega), inv(1, 0, true));
        assert_eq!(ershov_invariants(&FinCof), inv(1, 1, false));
        assert_eq!(ershov_invariants(&Trivial), inv(0, 0, false));
    }

    #[test]
    fn equivalence_examples() {
        assert!(ba_equiv(&PowersetModFin, &FreeAtomless));
        assert!(!ba_equiv(&Finite(2), &Finite(3)));
        let w = Ordinal::omega();
        assert!(!ba_equiv(&IntervalAlgebra(w.clone()), &IntervalAlgebra(w.mul(&Ordinal::nat(2)))));
        assert!(ba_equiv(&IntervalAlgebra(w), &FinCof));
        assert!(cstar_equiv(&FreeAtomless, &PowersetModFin));
        assert!(cstar_equiv(&Finite(4), &Finite(4)));
        assert!(!cstar_equiv(&PowersetOmega, &FreeAtomless));
    }

    #[test]
    fn product_drops_trivial_factors() {
        let with = Product(vec![FinCof, Trivial, FreeAtomless]);
        let without = Product(vec![FinCof, FreeAtomless]);
        assert_eq!(ershov_invariants(&with), ershov_invariants(&without));
        assert_eq!(ershov_invariants(&Product(vec![Finite(2), FreeAtomless])), inv(0, 2, true));
        assert_eq!(ershov_invariants(&Product(vec![Finite(2), Finite(5)])), inv(0, 7, false));
        assert_eq!(
            ershov_invariants(&Product(vec![FinCof, PowersetOmega])),
            inv(1, 1, true)
        );
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_theories(1).unwrap(), vec![inv(0, 1, false)]);
        let hundred = enumerate_theories(100).unwrap();
        let set: std::collections::HashSet<_> = hundred.iter().collect();
        assert_eq!(set.len(), 100);
        for (i, t) in hundred.iter().enumerate() {
            assert_eq!(theory_index(t), Some(i));
        }
        assert!(enumerate_theories(10_001).is_err());
    }

    #[test]
    fn corpus_invariants_are_enumerated() {
        let corpus = descriptor_corpus();
        assert!(corpus.len() >= 50);
        let all = enumerate_theories(10_000).unwrap();
        for d in &corpus {
            assert!(all.contains(&ershov_invariants(d)), "{d}");
        }
    }

    #[test]
    fn conflicts_are_reported() {
        let w = Ordinal::omega();
        let c = isolated_points_conflict(&IntervalAlgebra(w.clone()), &IntervalAlgebra(w.mul(&Ordinal::nat(2))));
        assert!(c.is_some());
        assert!(isolated_points_conflict(&FinCof, &PowersetOmega).is_some());
        assert!(isolated_points_conflict(&FreeAtomless, &PowersetModFin).is_none());
        assert!(isolated_points_conflict(&Finite(2), &Finite(3)).is_none());
    }

    #[test]
    fn constructors_validate() {
        assert!(BaDescriptor::finite(0).is_err());
        assert!(BaDescriptor::interval(Ordinal::zero()).is_err());
        assert!(BaDescriptor::interval(Ordinal::omega_pow(Ordinal::omega())).is_err());
        assert!(BaDescriptor::product(vec![]).is_err());
    }
}
