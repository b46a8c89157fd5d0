//! Reverse derivatives of black-box boolean functions by finite differences.

use alloc::format;
use alloc::sync::Arc;
use core::fmt;
use core::ops::Range;

use crate::bits::BitVec;
use crate::circuit::{Netlist, Term};
use crate::error::{Error, Result};

type ApplyFn = dyn Fn(&BitVec) -> BitVec + Send + Sync;

/// A total function `Z2^in_arity -> Z2^out_arity` known only by evaluation.
#[derive(Clone)]
pub struct BlackBoxFn {
    in_arity: usize,
    out_arity: usize,
    apply: Arc<ApplyFn>,
}

impl BlackBoxFn {
    pub fn new(in_arity: usize, out_arity: usize, apply: impl Fn(&BitVec) -> BitVec + Send + Sync + 'static) -> Self {
        BlackBoxFn {
            in_arity,
            out_arity,
            apply: Arc::new(apply),
        }
    }

    /// The boolean function computed by a circuit.
    pub fn from_term(t: &Term) -> Result<Self> {
        let arity = t.arity()?;
        let net = Netlist::from_term(t)?;
        Ok(BlackBoxFn::new(arity.inputs, arity.outputs, move |x| net.eval(x)))
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    pub fn apply(&self, x: &BitVec) -> Result<BitVec> {
        x.check_width(self.in_arity)?;
        let y = (self.apply)(x);
        assert_eq!(y.width(), self.out_arity, "black box returned the wrong width");
        Ok(y)
    }
}

impl fmt::Debug for BlackBoxFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlackBoxFn({} -> {})", self.in_arity, self.out_arity)
    }
}

/// `f(x) + f(x + e_i)` for the 1-based input index `i`.
pub fn partial_bool(f: &BlackBoxFn, i: usize, x: &BitVec) -> Result<BitVec> {
    if i == 0 || i > f.in_arity {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: f.in_arity,
        });
    }
    let mut shifted = x.clone();
    x.check_width(f.in_arity)?;
    shifted.flip(i - 1);
    Ok(&f.apply(x)? ^ &f.apply(&shifted)?)
}

/// Components `range` (0-based) of the brute-force reverse derivative at
/// `(x, delta)`: component `i` is the parity of `partial_i f(x) & delta`.
///
/// Costs one evaluation of `f` plus one per requested component, and none
/// at all when `delta` is zero.
pub fn brute_reverse(f: &BlackBoxFn, x: &BitVec, delta: &BitVec, range: Range<usize>) -> Result<BitVec> {
    x.check_width(f.in_arity)?;
    delta.check_width(f.out_arity)?;
    if range.end > f.in_arity {
        return Err(Error::IndexOutOfRange {
            index: range.end,
            len: f.in_arity,
        });
    }
    let mut out = BitVec::zeros(range.len());
    if delta.is_zero() {
        return Ok(out);
    }
    let fx = f.apply(x)?;
    let mut probe = x.clone();
    for (k, i) in range.enumerate() {
        probe.flip(i);
        let diff = &fx ^ &f.apply(&probe)?;
        probe.flip(i);
        if diff.and_count(delta) % 2 == 1 {
            out.set(k, true);
        }
    }
    Ok(out)
}

/// The brute-force reverse derivative `a + b -> a` of `f : a -> b`.
pub fn rdiff_brute(f: &BlackBoxFn) -> BlackBoxFn {
    let inner = f.clone();
    let (a, b) = (f.in_arity, f.out_arity);
    BlackBoxFn::new(a + b, a, move |input| {
        let x = input.slice(0, a);
        let delta = input.slice(a, a + b);
        brute_reverse(&inner, &x, &delta, 0..a).unwrap_or_else(|e| panic!("{}", format!("{e}")))
    })
}
