//! Reverse derivatives of circuits.
//!
//! [`rtilde`] is the syntactic operator: defined on generators and pushed
//! through `;` and `|` by the chain rule. Its polynomial reading is always
//! the transposed Jacobian of the circuit's polynomial, so it respects every
//! polynomial-circuit axiom but not `copy ; and = id 1`. On *safe* circuits
//! (no input reaches both legs of an `and`) it agrees with the boolean
//! reverse derivative, which [`brute::rdiff_brute`] computes by finite
//! differences. [`safe_form`] produces a safe equivalent of any circuit, and
//! [`reverse_derivative_bool`] chains the two.

mod brute;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

pub use brute::{brute_reverse, partial_bool, rdiff_brute, BlackBoxFn};

use crate::circuit::{Arity, Gen, PortGraph, Term};
use crate::error::Result;
use crate::semantics::{to_poly, PolyTuple};

/// An `and` gate whose two legs are both reachable from one circuit input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Ordinal of the gate among the `and` gates of the port graph.
    pub and_node: usize,
    /// 1-based circuit input port reaching both legs.
    pub input: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "and@{} reachable-from input {}", self.and_node, self.input)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyReport {
    pub safe: bool,
    /// Every offending (gate, input) pair, in gate order then input order.
    pub violations: Vec<Violation>,
}

impl fmt::Display for SafetyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.safe {
            return f.write_str("safe");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("\n")?;
            }
            write!(f, "unsafe: {v}")?;
        }
        Ok(())
    }
}

pub fn is_safe(t: &Term) -> Result<SafetyReport> {
    let graph = PortGraph::from_term(t)?;
    let reach = graph.input_reachability();
    let violations: Vec<Violation> = graph
        .nodes
        .iter()
        .filter(|n| n.gen == Gen::And)
        .enumerate()
        .flat_map(|(and_node, n)| {
            let shared = &reach[n.inputs[0]] & &reach[n.inputs[1]];
            shared
                .iter_ones()
                .map(move |i| Violation { and_node, input: i + 1 })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(SafetyReport {
        safe: violations.is_empty(),
        violations,
    })
}

/// The syntactic reverse derivative `a + b -> a` of a circuit `a -> b`.
///
/// Inputs are the original `a` inputs followed by `b` output changes;
/// outputs are the input changes in original order.
pub fn rtilde(t: &Term) -> Result<Term> {
    t.arity()?;
    Ok(rtilde_checked(t).0)
}

fn rtilde_checked(t: &Term) -> (Term, Arity) {
    let g = Term::Gen;
    match t {
        Term::Id(n) => (Term::repeat(Gen::Discard, *n).beside(Term::Id(*n)), Arity::new(*n, *n)),
        Term::Swap => (Term::repeat(Gen::Discard, 2).beside(Term::Swap), Arity::new(2, 2)),
        Term::Gen(gen) => {
            let r = match gen {
                // x ↦ 0
                Gen::Discard => g(Gen::Discard).then(g(Gen::Zero)),
                // δ ↦ ()
                Gen::Zero | Gen::One => g(Gen::Discard),
                // (x, δ1, δ2) ↦ δ1 + δ2
                Gen::Copy => g(Gen::Discard).beside(g(Gen::Add)),
                // (x1, x2, δ) ↦ (δ, δ)
                Gen::Add => Term::repeat(Gen::Discard, 2).beside(g(Gen::Copy)),
                // (x1, x2, δ) ↦ (x2·δ, x1·δ)
                Gen::And => Term::wiring(3, &[1, 2, 0, 2]).then(Term::repeat(Gen::And, 2)),
            };
            (r, gen.arity())
        }
        Term::Seq(f, h) => {
            let (rf, af) = rtilde_checked(f);
            let (rh, ah) = rtilde_checked(h);
            let (a, c) = (af.inputs, ah.outputs);
            let r = Term::seq_all(
                [
                    Term::copy_block(a).beside(Term::Id(c)),
                    Term::tensor_all([Term::Id(a), (**f).clone(), Term::Id(c)]),
                    Term::Id(a).beside(rh),
                    rf,
                ],
                a + c,
            );
            (r, Arity::new(a, c))
        }
        Term::Tensor(f, h) => {
            let (rf, af) = rtilde_checked(f);
            let (rh, ah) = rtilde_checked(h);
            let shuffle = Term::tensor_all([
                Term::Id(af.inputs),
                Term::block_swap(ah.inputs, af.outputs),
                Term::Id(ah.outputs),
            ]);
            let r = shuffle.then(rf.beside(rh));
            (r, Arity::new(af.inputs + ah.inputs, af.outputs + ah.outputs))
        }
    }
}

/// `pow^k : 1 -> 1`, the k-th power of its input built from copies and
/// `and` gates by repeated squaring. `k` must be at least 1.
pub fn pow_circuit(k: &BigUint) -> Term {
    assert!(k.bits() > 0, "pow^0 is not a monomial factor");
    if k.is_one() {
        Term::Id(1)
    } else if !k.bit(0) {
        pow_circuit(&(k >> 1u32))
            .then(Term::Gen(Gen::Copy))
            .then(Term::Gen(Gen::And))
    } else {
        Term::Gen(Gen::Copy)
            .then(pow_circuit(&(k - 1u32)).beside(Term::Id(1)))
            .then(Term::Gen(Gen::And))
    }
}

// `m -> 1` fold of a binary gate; the unit constant when `m = 0`.
fn gate_chain(m: usize, gate: Gen, unit: Gen) -> Term {
    match m {
        0 => Term::Gen(unit),
        1 => Term::Id(1),
        _ => gate_chain(m - 1, gate, unit).beside(Term::Id(1)).then(Term::Gen(gate)),
    }
}

/// The sum-of-monomials circuit of a polynomial tuple: each input is fanned
/// out to the factors that use it, each factor `x_i^k` is `pow^k`, each
/// monomial is a chain of `and`s (`one` when empty), and each component is a
/// chain of `add`s (`zero` when empty).
pub fn canonical_circuit(p: &PolyTuple) -> Term {
    let mut sources = Vec::new();
    let mut blocks = Vec::with_capacity(p.arity_out());
    for comp in p.components() {
        let mut monomials = Vec::with_capacity(comp.len());
        for m in comp {
            let factors: Vec<Term> = m
                .factors()
                .map(|(v, k)| {
                    sources.push(v as usize - 1);
                    pow_circuit(k)
                })
                .collect();
            let n = factors.len();
            monomials.push(if n == 0 {
                Term::Gen(Gen::One)
            } else {
                Term::tensor_all(factors).then(gate_chain(n, Gen::And, Gen::One))
            });
        }
        let n = monomials.len();
        blocks.push(if n == 0 {
            Term::Gen(Gen::Zero)
        } else {
            Term::tensor_all(monomials).then(gate_chain(n, Gen::Add, Gen::Zero))
        });
    }
    Term::wiring(p.arity_in(), &sources).then(Term::tensor_all(blocks))
}

/// The canonical circuit of `t`'s polynomial. Equivalent to `t` modulo the
/// polynomial-circuit axioms.
pub fn canonical_form(t: &Term) -> Result<Term> {
    Ok(canonical_circuit(&to_poly(t)?))
}

/// A safe circuit computing the same boolean function as `t`: the canonical
/// circuit of the multilinear reduction of `t`'s polynomial.
///
/// Goes through full polynomial expansion, so the output can be
/// exponentially larger than the input.
pub fn safe_form(t: &Term) -> Result<Term> {
    Ok(canonical_circuit(&to_poly(t)?.reduce_multilinear()))
}

/// The reverse derivative of `t` read as a boolean circuit: [`rtilde`] of
/// its [`safe_form`].
pub fn reverse_derivative_bool(t: &Term) -> Result<Term> {
    rtilde(&safe_form(t)?)
}
