//! The circuit term language.
//!
//! A [`Term`] is a string diagram written as a tree: generators and the
//! structural morphisms `id n` and `swap`, combined by sequential composition
//! and tensor. Equality of terms is structural; semantic equivalence lives in
//! [`crate::semantics`].

mod graph;
mod text;

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub use graph::{Netlist, Node, PortGraph, Sink, Source};
pub use text::parse;

/// The six circuit generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Discard,
    Copy,
    Zero,
    Add,
    One,
    And,
}

impl Gen {
    pub const ALL: [Gen; 6] = [Gen::Discard, Gen::Copy, Gen::Zero, Gen::Add, Gen::One, Gen::And];

    pub const fn arity(self) -> Arity {
        match self {
            Gen::Discard => Arity::new(1, 0),
            Gen::Copy => Arity::new(1, 2),
            Gen::Zero | Gen::One => Arity::new(0, 1),
            Gen::Add | Gen::And => Arity::new(2, 1),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Gen::Discard => "discard",
            Gen::Copy => "copy",
            Gen::Zero => "zero",
            Gen::Add => "add",
            Gen::One => "one",
            Gen::And => "and",
        }
    }
}

/// Input and output wire counts of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Arity {
    pub inputs: usize,
    pub outputs: usize,
}

impl Arity {
    pub const fn new(inputs: usize, outputs: usize) -> Self {
        Arity { inputs, outputs }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.inputs, self.outputs)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Gen(Gen),
    Id(usize),
    /// Crossing of two adjacent wires.
    Swap,
    /// Left then right.
    Seq(Box<Term>, Box<Term>),
    /// Top beside bottom; top wires come first.
    Tensor(Box<Term>, Box<Term>),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Gen> for Term {
    fn from(g: Gen) -> Self {
        Term::Gen(g)
    }
}

impl Term {
    pub fn gen(g: Gen) -> Term {
        Term::Gen(g)
    }

    pub fn id(n: usize) -> Term {
        Term::Id(n)
    }

    pub fn seq(left: Term, right: Term) -> Term {
        Term::Seq(Box::new(left), Box::new(right))
    }

    pub fn tensor(top: Term, bottom: Term) -> Term {
        Term::Tensor(Box::new(top), Box::new(bottom))
    }

    /// `self ; next`.
    pub fn then(self, next: Term) -> Term {
        Term::seq(self, next)
    }

    /// `self | below`.
    pub fn beside(self, below: Term) -> Term {
        Term::tensor(self, below)
    }

    /// Left-nested sequential composition of `parts`; `Id(width)` when empty.
    pub fn seq_all(parts: impl IntoIterator<Item = Term>, width: usize) -> Term {
        parts.into_iter().reduce(Term::seq).unwrap_or(Term::Id(width))
    }

    /// Left-nested tensor of `parts`; `Id(0)` when empty.
    pub fn tensor_all(parts: impl IntoIterator<Item = Term>) -> Term {
        parts.into_iter().reduce(Term::tensor).unwrap_or(Term::Id(0))
    }

    /// `n` parallel copies of a generator.
    pub fn repeat(g: Gen, n: usize) -> Term {
        Term::tensor_all((0..n).map(|_| Term::Gen(g)))
    }

    /// Type-checks the term and returns its arity.
    pub fn arity(&self) -> Result<Arity> {
        match self {
            Term::Gen(g) => Ok(g.arity()),
            Term::Id(n) => Ok(Arity::new(*n, *n)),
            Term::Swap => Ok(Arity::new(2, 2)),
            Term::Seq(f, g) => {
                let af = f.arity()?;
                let ag = g.arity()?;
                if af.outputs != ag.inputs {
                    return Err(Error::TypeMismatch {
                        subterm: self.to_string(),
                        left_outputs: af.outputs,
                        right_inputs: ag.inputs,
                    });
                }
                Ok(Arity::new(af.inputs, ag.outputs))
            }
            Term::Tensor(f, g) => {
                let af = f.arity()?;
                let ag = g.arity()?;
                Ok(Arity::new(af.inputs + ag.inputs, af.outputs + ag.outputs))
            }
        }
    }

    /// Number of generator leaves (`id` and `swap` do not count).
    pub fn gen_count(&self) -> usize {
        match self {
            Term::Gen(_) => 1,
            Term::Id(_) | Term::Swap => 0,
            Term::Seq(f, g) | Term::Tensor(f, g) => f.gen_count() + g.gen_count(),
        }
    }

    /// Number of leaves of any kind.
    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Gen(_) | Term::Id(_) | Term::Swap => 1,
            Term::Seq(f, g) | Term::Tensor(f, g) => f.leaf_count() + g.leaf_count(),
        }
    }

    pub fn to_port_graph(&self) -> Result<PortGraph> {
        PortGraph::from_term(self)
    }

    /// Wires realising the permutation that sends input wire `q` to output
    /// position `perm[q]`.
    ///
    /// Built as an odd-even transposition network of adjacent swaps.
    pub fn permutation(perm: &[usize]) -> Term {
        let n = perm.len();
        debug_assert!({
            let mut seen = vec![false; n];
            perm.iter().all(|&p| p < n && !core::mem::replace(&mut seen[p], true))
        });
        // `current[k]` is the destination of the wire now at position k.
        let mut current = perm.to_vec();
        let mut layers = Vec::new();
        for round in 0..n {
            let mut parts = Vec::new();
            let mut run = 0;
            let mut swapped = false;
            let mut k = 0;
            if round % 2 == 1 && n > 0 {
                run = 1;
                k = 1;
            }
            while k < n {
                if k + 1 < n && current[k] > current[k + 1] {
                    if run > 0 {
                        parts.push(Term::Id(run));
                        run = 0;
                    }
                    parts.push(Term::Swap);
                    current.swap(k, k + 1);
                    swapped = true;
                    k += 2;
                } else {
                    let step = if k + 1 < n { 2 } else { 1 };
                    run += step;
                    k += step;
                }
            }
            if swapped {
                if run > 0 {
                    parts.push(Term::Id(run));
                }
                layers.push(Term::tensor_all(parts));
            }
        }
        debug_assert!(current.iter().enumerate().all(|(i, &d)| i == d));
        Term::seq_all(layers, n)
    }

    /// A `1 -> n` fan-out: `discard` for 0, `id 1` for 1, a chain of copies
    /// otherwise.
    pub fn fanout(n: usize) -> Term {
        match n {
            0 => Term::Gen(Gen::Discard),
            1 => Term::Id(1),
            _ => Term::seq(Term::Gen(Gen::Copy), Term::tensor(Term::Id(1), Term::fanout(n - 1))),
        }
    }

    /// An `n -> sources.len()` circuit whose output `j` carries input
    /// `sources[j]`. Inputs may be duplicated or dropped.
    pub fn wiring(n: usize, sources: &[usize]) -> Term {
        assert!(sources.iter().all(|&s| s < n), "wiring source out of range");
        let mut uses = vec![0usize; n];
        for &s in sources {
            uses[s] += 1;
        }
        let fan = Term::tensor_all(uses.iter().map(|&u| Term::fanout(u)));
        // After fanning out, copies of input i occupy a contiguous block.
        let mut block_start = vec![0usize; n];
        let mut acc = 0;
        for i in 0..n {
            block_start[i] = acc;
            acc += uses[i];
        }
        let mut perm = vec![0usize; sources.len()];
        for (j, &s) in sources.iter().enumerate() {
            perm[block_start[s]] = j;
            block_start[s] += 1;
        }
        let is_identity = perm.iter().enumerate().all(|(i, &p)| i == p);
        if is_identity {
            fan
        } else {
            Term::seq(fan, Term::permutation(&perm))
        }
    }

    /// `n -> 2n`, the input block followed by a copy of it.
    pub fn copy_block(n: usize) -> Term {
        let sources: Vec<usize> = (0..n).chain(0..n).collect();
        Term::wiring(n, &sources)
    }

    /// `(x, y) -> (y, x)` for blocks of widths `a` and `b`.
    pub fn block_swap(a: usize, b: usize) -> Term {
        let sources: Vec<usize> = (a..a + b).chain(0..a).collect();
        Term::wiring(a + b, &sources)
    }
}
