//! Multivariate polynomials over Z2 in expanded form.
//!
//! A polynomial is a set of monomials: coefficients live in Z2, so a
//! monomial is either present or not, and addition is symmetric difference.
//! Exponents are arbitrary naturals; nothing here reduces `x^2` to `x`
//! unless asked to by [`Poly::reduce_multilinear`].

use alloc::collections::btree_set::{self, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// A product of variables with positive exponents. Variables are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    // Sorted by variable, no zero exponents.
    factors: Vec<(u32, BigUint)>,
}

impl Monomial {
    /// The empty product, i.e. the constant 1.
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(index: u32) -> Self {
        Monomial::power(index, 1u32)
    }

    pub fn power(index: u32, exponent: impl Into<BigUint>) -> Self {
        assert!(index >= 1, "variables are 1-based");
        let exponent = exponent.into();
        if exponent.is_zero() {
            return Monomial::one();
        }
        Monomial {
            factors: alloc::vec![(index, exponent)],
        }
    }

    /// Builds a monomial from `(variable, exponent)` pairs in any order.
    /// Repeated variables multiply; zero exponents are dropped.
    pub fn from_factors<E: Into<BigUint>>(factors: impl IntoIterator<Item = (u32, E)>) -> Self {
        factors
            .into_iter()
            .fold(Monomial::one(), |m, (v, e)| m.mul(&Monomial::power(v, e)))
    }

    pub fn factors(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.factors.iter().map(|(v, e)| (*v, e))
    }

    pub fn exponent(&self, var: u32) -> BigUint {
        self.factors
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, e)| e.clone())
            .unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> BigUint {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn max_var(&self) -> u32 {
        self.factors.last().map_or(0, |(v, _)| *v)
    }

    pub fn is_multilinear(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.is_one())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (va, ea) = &self.factors[i];
            let (vb, eb) = &other.factors[j];
            match va.cmp(vb) {
                Ordering::Less => {
                    out.push((*va, ea.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((*vb, eb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((*va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Every exponent multiplied by `2^k`.
    fn frobenius(&self, k: u64) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|(v, e)| (*v, e << k)).collect(),
        }
    }

    /// Every exponent set to 1.
    pub fn support(&self) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|(v, _)| (*v, BigUint::one())).collect(),
        }
    }

    fn shift_vars(&self, by: u32) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|(v, e)| (v + by, e.clone())).collect(),
        }
    }

    /// Value at a point of Z2^n (variable `i` reads bit `i - 1`).
    pub fn eval(&self, point: &BitVec) -> bool {
        self.factors.iter().all(|(v, _)| point.get(*v as usize - 1))
    }
}

/// Graded order: lower total degree first; within a degree, larger
/// exponents on lower-indexed variables first (`x1*x3` before `x2*x3`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.factors.get(i), other.factors.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        Ordering::Less => return Ordering::Less,
                        Ordering::Greater => return Ordering::Greater,
                        Ordering::Equal => match eb.cmp(ea) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{v}")?;
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial in Z2[x1, x2, ...].
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    monomials: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from(Monomial::one())
    }

    pub fn var(index: u32) -> Self {
        Poly::from(Monomial::var(index))
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Poly::zero();
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Monomial> {
        self.monomials.iter()
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly {
            monomials: self.monomials.symmetric_difference(&other.monomials).cloned().collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in &self.monomials {
            for b in &other.monomials {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// `self^(2^k)`. Squaring is additive in characteristic 2, so this only
    /// scales exponents.
    fn frobenius(&self, k: u64) -> Poly {
        // Scaling exponents is injective, so no cancellation happens.
        Poly {
            monomials: self.monomials.iter().map(|m| m.frobenius(k)).collect(),
        }
    }

    pub fn pow(&self, exponent: &BigUint) -> Poly {
        let mut acc = Poly::one();
        for k in 0..exponent.bits() {
            if exponent.bit(k) {
                acc = acc.mul(&self.frobenius(k));
            }
        }
        acc
    }

    /// Replaces every exponent by 1 (the law `x^2 = x`); monomials that
    /// collapse onto each other cancel in pairs.
    pub fn reduce_multilinear(&self) -> Poly {
        Poly::from_monomials(self.monomials.iter().map(Monomial::support))
    }

    pub fn is_multilinear(&self) -> bool {
        self.monomials.iter().all(Monomial::is_multilinear)
    }

    pub fn max_var(&self) -> u32 {
        self.monomials.iter().map(Monomial::max_var).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &BitVec) -> bool {
        self.monomials.iter().filter(|m| m.eval(point)).count() % 2 == 1
    }

    fn shift_vars(&self, by: u32) -> Poly {
        Poly {
            monomials: self.monomials.iter().map(|m| m.shift_vars(by)).collect(),
        }
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Self {
        let mut monomials = BTreeSet::new();
        monomials.insert(m);
        Poly { monomials }
    }
}

impl<'a> IntoIterator for &'a Poly {
    type Item = &'a Monomial;
    type IntoIter = btree_set::Iter<'a, Monomial>;
    fn into_iter(self) -> Self::IntoIter {
        self.monomials.iter()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, m) in self.monomials.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// A `b`-tuple of polynomials in `arity_in` variables: the denotation of an
/// `arity_in -> b` circuit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyTuple {
    arity_in: usize,
    components: Vec<Poly>,
}

impl PolyTuple {
    pub fn new(arity_in: usize, components: Vec<Poly>) -> Result<Self> {
        if let Some(p) = components.iter().find(|p| p.max_var() as usize > arity_in) {
            return Err(Error::InvalidArgument(alloc::format!(
                "component `{p}` uses a variable beyond x{arity_in}"
            )));
        }
        Ok(PolyTuple { arity_in, components })
    }

    /// `<x1, ..., xn>`.
    pub fn identity(n: usize) -> Self {
        PolyTuple {
            arity_in: n,
            components: (1..=n as u32).map(Poly::var).collect(),
        }
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Poly> {
        self.components
    }

    /// `q ∘ p`: each `x_j` in `self` replaced by `p`'s j-th component.
    pub fn substitute(&self, p: &PolyTuple) -> Result<PolyTuple> {
        if self.arity_in != p.arity_out() {
            return Err(Error::ArityMismatch {
                left: alloc::format!("{} variables", self.arity_in),
                right: alloc::format!("{} components", p.arity_out()),
            });
        }
        let components = self
            .components
            .iter()
            .map(|q| {
                let mut acc = Poly::zero();
                for m in q {
                    let term = m
                        .factors()
                        .fold(Poly::one(), |t, (v, e)| t.mul(&p.components[v as usize - 1].pow(e)));
                    acc = acc.add(&term);
                }
                acc
            })
            .collect();
        Ok(PolyTuple {
            arity_in: p.arity_in,
            components,
        })
    }

    /// Juxtaposition: `other`'s variables are renumbered after `self`'s.
    pub fn tensor(&self, other: &PolyTuple) -> PolyTuple {
        let shift = self.arity_in as u32;
        let mut components = self.components.clone();
        components.extend(other.components.iter().map(|p| p.shift_vars(shift)));
        PolyTuple {
            arity_in: self.arity_in + other.arity_in,
            components,
        }
    }

    pub fn reduce_multilinear(&self) -> PolyTuple {
        PolyTuple {
            arity_in: self.arity_in,
            components: self.components.iter().map(Poly::reduce_multilinear).collect(),
        }
    }

    pub fn is_multilinear(&self) -> bool {
        self.components.iter().all(Poly::is_multilinear)
    }

    pub fn eval(&self, point: &BitVec) -> Result<BitVec> {
        point.check_width(self.arity_in)?;
        Ok(self.components.iter().map(|p| p.eval(point)).collect())
    }

    /// Componentwise sum.
    pub fn add(&self, other: &PolyTuple) -> Result<PolyTuple> {
        self.zip_with(other, Poly::add)
    }

    /// Componentwise product.
    pub fn mul(&self, other: &PolyTuple) -> Result<PolyTuple> {
        self.zip_with(other, Poly::mul)
    }

    fn zip_with(&self, other: &PolyTuple, op: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyTuple> {
        if self.arity_in != other.arity_in || self.arity_out() != other.arity_out() {
            return Err(Error::ArityMismatch {
                left: alloc::format!("{} -> {}", self.arity_in, self.arity_out()),
                right: alloc::format!("{} -> {}", other.arity_in, other.arity_out()),
            });
        }
        Ok(PolyTuple {
            arity_in: self.arity_in,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }
}

impl fmt::Display for PolyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("()");
        }
        for (k, p) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}> : {}", self.arity_in)
    }
}
