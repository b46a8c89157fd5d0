//! The equations of polynomial circuits, as pairs of terms.
//!
//! [`polynomial_axioms`] lists the equations that hold in polynomial
//! circuits: copy is a commutative comonoid, `add`/`zero` and `and`/`one`
//! are commutative monoids, every generator commutes with copy and discard,
//! `copy ; add` vanishes and `and` distributes over `add`. Boolean circuits
//! add exactly one more, [`idempotence`].
//!
//! [`rewrite_randomly`] applies random instances of these equations inside
//! a term without ever creating an unsafe `and`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::{parse, Gen, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct Axiom {
    pub name: &'static str,
    pub lhs: Term,
    pub rhs: Term,
}

fn axiom(name: &'static str, lhs: &str, rhs: &str) -> Axiom {
    Axiom {
        name,
        lhs: parse(lhs).expect("axiom lhs parses"),
        rhs: parse(rhs).expect("axiom rhs parses"),
    }
}

pub fn polynomial_axioms() -> Vec<Axiom> {
    vec![
        // copy comonoid
        axiom("copy-commutative", "copy ; swap", "copy"),
        axiom("copy-associative", "copy ; copy | id 1", "copy ; id 1 | copy"),
        axiom("copy-counit", "copy ; discard | id 1", "id 1"),
        // add monoid
        axiom("add-commutative", "swap ; add", "add"),
        axiom("add-associative", "add | id 1 ; add", "id 1 | add ; add"),
        axiom("add-unit", "zero | id 1 ; add", "id 1"),
        // and monoid
        axiom("and-commutative", "swap ; and", "and"),
        axiom("and-associative", "and | id 1 ; and", "id 1 | and ; and"),
        axiom("and-unit", "one | id 1 ; and", "id 1"),
        // generators are copyable
        axiom("zero-copy", "zero ; copy", "zero | zero"),
        axiom("one-copy", "one ; copy", "one | one"),
        axiom("add-copy", "add ; copy", "copy | copy ; id 1 | swap | id 1 ; add | add"),
        axiom("and-copy", "and ; copy", "copy | copy ; id 1 | swap | id 1 ; and | and"),
        // generators are discardable
        axiom("zero-discard", "zero ; discard", "id 0"),
        axiom("one-discard", "one ; discard", "id 0"),
        axiom("add-discard", "add ; discard", "discard | discard"),
        axiom("and-discard", "and ; discard", "discard | discard"),
        axiom("copy-discard", "copy ; discard | discard", "discard"),
        // characteristic two
        axiom("copy-add", "copy ; add", "discard ; zero"),
        axiom(
            "distributive",
            "add | id 1 ; and",
            "id 2 | copy ; id 1 | swap | id 1 ; and | and ; add",
        ),
    ]
}

/// `copy ; and = id 1`, which holds for boolean circuits only.
pub fn idempotence() -> Axiom {
    axiom("and-idempotent", "copy ; and", "id 1")
}

/// Rewrites `t` with `steps` random axiom instances, each applied at a
/// random subterm. The result is equal to `t` modulo the polynomial axioms,
/// and safe whenever `t` is.
pub fn rewrite_randomly<R: Rng + ?Sized>(rng: &mut R, t: &Term, steps: usize) -> Term {
    let mut t = t.clone();
    for _ in 0..steps {
        let target = rng.random_range(0..node_count(&t));
        t = rewrite_at(rng, t, &mut Some(target));
    }
    t
}

fn node_count(t: &Term) -> usize {
    match t {
        Term::Seq(f, g) | Term::Tensor(f, g) => 1 + node_count(f) + node_count(g),
        _ => 1,
    }
}

// Rewrites the subterm reached after skipping `skip` nodes in preorder.
fn rewrite_at<R: Rng + ?Sized>(rng: &mut R, t: Term, skip: &mut Option<usize>) -> Term {
    match skip {
        Some(0) => {
            *skip = None;
            return rewrite_here(rng, t);
        }
        Some(k) => *k -= 1,
        None => return t,
    }
    match t {
        Term::Seq(f, g) => {
            let f = rewrite_at(rng, *f, skip);
            Term::seq(f, rewrite_at(rng, *g, skip))
        }
        Term::Tensor(f, g) => {
            let f = rewrite_at(rng, *f, skip);
            Term::tensor(f, rewrite_at(rng, *g, skip))
        }
        leaf => leaf,
    }
}

// One equation applied at the root of `t`, oriented to introduce structure.
fn rewrite_here<R: Rng + ?Sized>(rng: &mut R, t: Term) -> Term {
    let arity = t.arity().expect("well typed");
    let pick = rng.random_range(0..6);
    match (&t, pick) {
        (Term::Gen(Gen::Add), 0) => parse("swap ; add").unwrap(),
        (Term::Gen(Gen::And), 0) => parse("swap ; and").unwrap(),
        (Term::Gen(Gen::Add), 1) => parse("zero | id 2 ; id 1 | add ; add").unwrap(),
        (Term::Gen(Gen::And), 1) => parse("one | id 2 ; id 1 | and ; and").unwrap(),
        (Term::Gen(Gen::Copy), _) => parse("copy ; swap").unwrap(),
        (_, 2) if arity.outputs > 0 => {
            // id 1 = copy ; discard | id 1 on the first output wire
            t.then(
                parse("copy ; discard | id 1")
                    .unwrap()
                    .beside(Term::Id(arity.outputs - 1)),
            )
        }
        (_, 3) if arity.inputs > 0 => {
            // id 1 = zero | id 1 ; add on the first input wire
            parse("zero | id 1 ; add")
                .unwrap()
                .beside(Term::Id(arity.inputs - 1))
                .then(t)
        }
        (_, 4) => Term::Id(arity.inputs).then(t),
        _ => t.then(Term::Id(arity.outputs)),
    }
}
