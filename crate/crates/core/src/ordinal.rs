//! Ordinals below ε₀ in Cantor normal form.
//!
//! An ordinal is stored as a list of `(exponent, coefficient)` terms with
//! strictly decreasing exponents and positive coefficients; exponents are
//! themselves ordinals in the same notation. The empty list is `0`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Pow,
}

/// `α = ω^ω·quotient + residue` with `residue < ω^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaOmegaSplit {
    pub quotient: Ordinal,
    pub residue: Ordinal,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exponent: Ordinal::zero(), coefficient: n }] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![Term { exponent: e, coefficient: 1 }] }
    }

    /// `ω^e · c`.
    pub fn monomial(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exponent: e, coefficient: c }] }
        }
    }

    /// Builds an ordinal from an arbitrary (possibly unsorted) list of terms
    /// by ordinal summation in the given order.
    pub fn sum_of_terms(terms: impl IntoIterator<Item = (Ordinal, u64)>) -> Self {
        terms
            .into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal::monomial(e, c)))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// True when every exponent is a natural number, i.e. `self < ω^ω`.
    pub fn has_finite_exponents(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_finite())
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Coefficient of the `ω^0` term.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exponent.is_zero() => t.coefficient,
            _ => 0,
        }
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.finite_part() == 0
    }

    /// Nesting depth of exponents (`0` for naturals).
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| !t.exponent.is_zero())
            .map(|t| 1 + t.exponent.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(head) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut carried = 0u64;
        for t in &self.terms {
            match t.exponent.cmp(&head.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => carried = t.coefficient,
                Ordering::Less => break,
            }
        }
        terms.push(Term {
            exponent: head.exponent.clone(),
            coefficient: head.coefficient.checked_add(carried).expect("coefficient overflow"),
        });
        terms.extend(rhs.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let lead = &self.terms[0];
        let mut acc = Ordinal::zero();
        for t in &rhs.terms {
            let piece = if t.exponent.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coefficient =
                    lead.coefficient.checked_mul(t.coefficient).expect("coefficient overflow");
                Ordinal { terms }
            } else {
                Ordinal::monomial(lead.exponent.add(&t.exponent), t.coefficient)
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// Ordinal exponentiation; `0^0` is `1`.
    pub fn pow(&self, rhs: &Ordinal) -> Ordinal {
        if rhs.is_zero() {
            return Ordinal::one();
        }
        if self.is_zero() {
            return Ordinal::zero();
        }
        if self.as_nat() == Some(1) {
            return Ordinal::one();
        }
        let k = rhs.finite_part();
        let limit = Ordinal {
            terms: rhs.terms.iter().filter(|t| !t.exponent.is_zero()).cloned().collect(),
        };
        let limit_power = if limit.is_zero() {
            Ordinal::one()
        } else if self.is_finite() {
            // n^(ω·γ) = ω^γ
            let gamma = Ordinal {
                terms: limit
                    .terms
                    .iter()
                    .map(|t| Term {
                        exponent: Ordinal::one().left_difference(&t.exponent),
                        coefficient: t.coefficient,
                    })
                    .collect(),
            };
            Ordinal::omega_pow(gamma)
        } else {
            let lead = self.leading_exponent().expect("nonzero");
            Ordinal::omega_pow(lead.mul(&limit))
        };
        limit_power.mul(&self.pow_nat(k))
    }

    fn pow_nat(&self, mut k: u64) -> Ordinal {
        // ordinal multiplication is associative, so squaring is valid
        let mut result = Ordinal::one();
        let mut base = self.clone();
        let mut pending = Vec::new();
        while k > 0 {
            if k & 1 == 1 {
                pending.push(base.clone());
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        // powers of the same base commute
        for p in pending {
            result = result.mul(&p);
        }
        result
    }

    /// The unique `d` with `self + d = target`, for `self <= target`.
    pub fn left_difference(&self, target: &Ordinal) -> Ordinal {
        assert!(self <= target, "left_difference: {self} > {target}");
        for (i, t) in target.terms.iter().enumerate() {
            match self.terms.get(i) {
                None => return Ordinal { terms: target.terms[i..].to_vec() },
                Some(s) if s == t => continue,
                Some(s) => {
                    if t.exponent > s.exponent {
                        return Ordinal { terms: target.terms[i..].to_vec() };
                    }
                    let mut terms = vec![Term {
                        exponent: t.exponent.clone(),
                        coefficient: t.coefficient - s.coefficient,
                    }];
                    terms.extend(target.terms[i + 1..].iter().cloned());
                    return Ordinal { terms };
                }
            }
        }
        Ordinal::zero()
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    pub fn split_mod_omega_omega(&self) -> OmegaOmegaSplit {
        let omega = Ordinal::omega();
        let mut quotient = Vec::new();
        let mut residue = Vec::new();
        for t in &self.terms {
            if t.exponent.is_finite() {
                residue.push(t.clone());
            } else {
                quotient.push(Term {
                    exponent: omega.left_difference(&t.exponent),
                    coefficient: t.coefficient,
                });
            }
        }
        OmegaOmegaSplit { quotient: Ordinal { terms: quotient }, residue: Ordinal { terms: residue } }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.exponent.cmp(&b.exponent).then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl OmegaOmegaSplit {
    pub fn recombine(&self) -> Ordinal {
        Ordinal::omega_pow(Ordinal::omega()).mul(&self.quotient).add(&self.residue)
    }
}

pub fn ord_arith(op: ArithOp, a: &Ordinal, b: &Ordinal) -> Ordinal {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Pow => a.pow(b),
    }
}

pub fn ord_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

pub fn split_mod_omega_omega(a: &Ordinal) -> OmegaOmegaSplit {
    a.split_mod_omega_omega()
}

/// Elementary equivalence of `α` and `β` as linear orders: equal residues
/// modulo `ω^ω`, and either both are below `ω^ω` or neither is.
pub fn ord_equiv(a: &Ordinal, b: &Ordinal) -> bool {
    let sa = a.split_mod_omega_omega();
    let sb = b.split_mod_omega_omega();
    sa.residue == sb.residue && sa.quotient.is_zero() == sb.quotient.is_zero()
}

/// Equivalence of the projection posets of the generalized Calkin algebras
/// indexed by `a` and `b`; the ordinal is interpretable in both, so this
/// reduces to [`ord_equiv`].
pub fn calkin_equiv(a: &Ordinal, b: &Ordinal) -> bool {
    ord_equiv(a, b)
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            write!(f, "w")?;
            if t.exponent.as_nat() != Some(1) {
                if t.exponent.as_nat().is_some() || t.exponent == Ordinal::omega() {
                    write!(f, "^{}", t.exponent)?;
                } else {
                    write!(f, "^({})", t.exponent)?;
                }
            }
            if t.coefficient != 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }
    fn wp(e: u64) -> Ordinal {
        Ordinal::omega_pow(n(e))
    }

    #[test]
    fn addition_absorbs_on_the_left() {
        assert_eq!(w().add(&n(1)).to_string(), "w + 1");
        assert_eq!(n(1).add(&w()), w());
        let a = wp(2).add(&w());
        assert_eq!(a.add(&wp(2)), Ordinal::monomial(n(2), 2));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(w().add(&n(1)).mul(&w()), wp(2));
        assert_eq!(w().mul(&n(2)).to_string(), "w*2");
        assert_eq!(n(2).mul(&w()), w());
        // (ω+1)·2 = ω·2 + 1
        assert_eq!(w().add(&n(1)).mul(&n(2)).to_string(), "w*2 + 1");
    }

    #[test]
    fn power_examples() {
        assert_eq!(n(0).pow(&n(0)), n(1));
        assert_eq!(n(2).pow(&w()), w());
        assert_eq!(n(2).pow(&w().add(&n(3))), w().mul(&n(8)));
        assert_eq!(w().pow(&w()), Ordinal::omega_pow(w()));
        // (ω+1)^2 = ω^2 + ω + 1
        assert_eq!(w().add(&n(1)).pow(&n(2)).to_string(), "w^2 + w + 1");
        assert_eq!(w().pow(&n(3)), wp(3));
    }

    #[test]
    fn comparison() {
        assert_eq!(ord_cmp(&n(0), &n(0)), Ordering::Equal);
        assert_eq!(ord_cmp(&w(), &n(5)), Ordering::Greater);
        let big = Ordinal::sum_of_terms([(n(2), 9), (n(1), 9), (n(0), 9)]);
        assert_eq!(ord_cmp(&Ordinal::omega_pow(w()), &big), Ordering::Greater);
    }

    #[test]
    fn split_examples() {
        let ww = Ordinal::omega_pow(w());
        let a = ww.mul(&n(2)).add(&Ordinal::monomial(n(2), 3)).add(&n(5));
        let s = a.split_mod_omega_omega();
        assert_eq!(s.quotient, n(2));
        assert_eq!(s.residue, Ordinal::monomial(n(2), 3).add(&n(5)));
        assert_eq!(s.recombine(), a);

        let s7 = n(7).split_mod_omega_omega();
        assert_eq!((s7.quotient, s7.residue), (n(0), n(7)));

        let s = Ordinal::omega_pow(w().add(&n(1))).split_mod_omega_omega();
        assert_eq!(s.quotient, w());
        assert!(s.residue.is_zero());
        assert_eq!(ww.mul(&w()), Ordinal::omega_pow(w().add(&n(1))));
    }

    #[test]
    fn equivalence_examples() {
        let ww = Ordinal::omega_pow(w());
        assert!(ord_equiv(&ww.add(&n(3)), &ww.mul(&n(5)).add(&n(3))));
        assert!(!ord_equiv(&n(3), &ww.add(&n(3))));
        assert!(calkin_equiv(&ww.mul(&n(7)).add(&w()), &ww.add(&w())));
        assert!(!calkin_equiv(&n(1), &n(2)));
        assert!(calkin_equiv(&ww, &Ordinal::omega_pow(w().add(&n(1)))));
    }

    #[test]
    fn left_difference_inverts_addition() {
        let a = wp(2).add(&w().mul(&n(3)));
        let b = wp(2).mul(&n(2)).add(&n(4));
        let d = a.left_difference(&b);
        assert_eq!(a.add(&d), b);
        assert_eq!(n(3).left_difference(&w()), w());
    }

    #[test]
    fn display_nested_exponents() {
        let e = Ordinal::omega_pow(w().add(&n(1))).add(&Ordinal::omega_pow(w()).mul(&n(2)));
        assert_eq!(e.to_string(), "w^(w + 1) + w^w*2");
        assert_eq!(e.depth(), 2);
    }
}
