//! Random and exhaustive generation of well-typed terms, for property tests
//! and the acceptance checks.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::{Arity, Gen, Term};
use crate::rdiff::is_safe;

/// Leaves used by [`terms_with_leaves`]: the six generators, `swap` and
/// `id 1`.
pub const LEAVES: [Term; 8] = [
    Term::Gen(Gen::Discard),
    Term::Gen(Gen::Copy),
    Term::Gen(Gen::Zero),
    Term::Gen(Gen::Add),
    Term::Gen(Gen::One),
    Term::Gen(Gen::And),
    Term::Swap,
    Term::Id(1),
];

/// A random well-typed term with roughly `size` generators and between 0
/// and 4 inputs.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Term {
    let inputs = rng.random_range(0..=4);
    random_term_with_arity(rng, inputs, usize::MAX, size)
}

/// A random well-typed term with the given number of inputs and outputs.
/// Pass `usize::MAX` as `outputs` to leave the output count free.
pub fn random_term_with_arity<R: Rng + ?Sized>(rng: &mut R, inputs: usize, outputs: usize, size: usize) -> Term {
    let mut width = inputs;
    let mut budget = size;
    let mut layers = Vec::new();
    while budget > 0 {
        let (layer, used, out) = random_layer(rng, width, budget);
        budget = budget.saturating_sub(used.max(1));
        width = out;
        layers.push(layer);
    }
    if outputs != usize::MAX {
        while width != outputs {
            let (layer, out) = adjust_layer(rng, width, outputs);
            width = out;
            layers.push(layer);
        }
    }
    if layers.is_empty() {
        layers.push(Term::Id(inputs));
    }
    let t = bracket(rng, layers, Term::seq);
    debug_assert_eq!(t.arity().map(|a| a.inputs), Ok(inputs));
    t
}

// One parallel layer over `width` wires. Returns the layer, the number of
// generators in it and its output width.
fn random_layer<R: Rng + ?Sized>(rng: &mut R, width: usize, budget: usize) -> (Term, usize, usize) {
    let mut parts = Vec::new();
    let mut used = 0;
    let mut out = 0;
    let mut k = 0;
    // wide layers shrink, narrow ones grow
    let grow_bias = if width > 5 { 1 } else { 4 };
    while k < width || (parts.is_empty() && width == 0) {
        if k >= width {
            if used < budget {
                parts.push(Term::Gen(if rng.random() { Gen::Zero } else { Gen::One }));
                used += 1;
                out += 1;
            } else {
                parts.push(Term::Id(0));
            }
            continue;
        }
        if used < budget && rng.random_ratio(1, 8) {
            parts.push(Term::Gen(if rng.random() { Gen::Zero } else { Gen::One }));
            used += 1;
            out += 1;
            continue;
        }
        let remaining = width - k;
        let choice = rng.random_range(0..10);
        if used >= budget || choice < 2 {
            let run = rng.random_range(1..=remaining.min(3));
            parts.push(Term::Id(run));
            k += run;
            out += run;
        } else if remaining >= 2 && choice < 6 {
            let leaf = match rng.random_range(0..5) {
                0 | 1 => Term::Gen(Gen::And),
                2 | 3 => Term::Gen(Gen::Add),
                _ => Term::Swap,
            };
            out += if leaf == Term::Swap { 2 } else { 1 };
            used += usize::from(leaf != Term::Swap);
            parts.push(leaf);
            k += 2;
        } else if rng.random_range(0..5) < grow_bias {
            parts.push(Term::Gen(Gen::Copy));
            used += 1;
            k += 1;
            out += 2;
        } else {
            parts.push(Term::Gen(Gen::Discard));
            used += 1;
            k += 1;
        }
    }
    (bracket(rng, parts, Term::tensor), used, out)
}

// A layer that moves `width` one step towards `target`.
fn adjust_layer<R: Rng + ?Sized>(rng: &mut R, width: usize, target: usize) -> (Term, usize) {
    if width < target {
        if width == 0 || rng.random_ratio(1, 3) {
            let c = Term::Gen(if rng.random() { Gen::Zero } else { Gen::One });
            return (Term::Id(width).beside(c), width + 1);
        }
        let pos = rng.random_range(0..width);
        let layer = Term::tensor_all([Term::Id(pos), Term::Gen(Gen::Copy), Term::Id(width - pos - 1)]);
        return (layer, width + 1);
    }
    if width >= 2 && rng.random_ratio(3, 4) {
        let pos = rng.random_range(0..width - 1);
        let gate = Term::Gen(if rng.random() { Gen::Add } else { Gen::And });
        let layer = Term::tensor_all([Term::Id(pos), gate, Term::Id(width - pos - 2)]);
        return (layer, width - 1);
    }
    let pos = rng.random_range(0..width);
    let layer = Term::tensor_all([Term::Id(pos), Term::Gen(Gen::Discard), Term::Id(width - pos - 1)]);
    (layer, width - 1)
}

// Combines `parts` with an associative operator under a random bracketing.
fn bracket<R: Rng + ?Sized>(rng: &mut R, mut parts: Vec<Term>, op: fn(Term, Term) -> Term) -> Term {
    assert!(!parts.is_empty());
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let split = rng.random_range(1..parts.len());
    let right = parts.split_off(split);
    op(bracket(rng, parts, op), bracket(rng, right, op))
}

/// A random safe term whose inputs plus outputs do not exceed `max_io`,
/// found by rejection sampling.
pub fn random_safe_term<R: Rng + ?Sized>(rng: &mut R, size: usize, max_io: usize) -> Term {
    loop {
        let inputs = rng.random_range(0..=max_io.min(5));
        let t = random_term_with_arity(rng, inputs, usize::MAX, size);
        let Arity { inputs, outputs } = t.arity().expect("generated terms are well typed");
        if inputs + outputs <= max_io && is_safe(&t).expect("well typed").safe {
            return t;
        }
    }
}

/// Every well-typed term with exactly `leaves` leaves drawn from [`LEAVES`],
/// up to associativity of `;` and `|` (only right-nested chains are
/// produced).
pub fn terms_with_leaves(leaves: usize) -> Vec<Term> {
    let mut table: Vec<Vec<(Term, Arity)>> = vec![Vec::new()];
    for n in 1..=leaves {
        let mut level = Vec::new();
        if n == 1 {
            for leaf in LEAVES {
                let a = leaf.arity().expect("leaf");
                level.push((leaf, a));
            }
        }
        for k in 1..n {
            let (lefts, rights) = (&table[k], &table[n - k]);
            for (l, la) in lefts {
                for (r, ra) in rights {
                    if !matches!(l, Term::Seq(..)) && la.outputs == ra.inputs {
                        level.push((Term::seq(l.clone(), r.clone()), Arity::new(la.inputs, ra.outputs)));
                    }
                    if !matches!(l, Term::Tensor(..)) {
                        level.push((
                            Term::tensor(l.clone(), r.clone()),
                            Arity::new(la.inputs + ra.inputs, la.outputs + ra.outputs),
                        ));
                    }
                }
            }
        }
        table.push(level);
    }
    table.pop().unwrap_or_default().into_iter().map(|(t, _)| t).collect()
}
