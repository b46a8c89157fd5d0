use alloc::vec::Vec;

use crate::bits::BitVec;
use crate::circuit::{Gen, Term};
use crate::error::{Error, Result};
use crate::rdiff::{brute_reverse, is_safe, rdiff_brute, rtilde, BlackBoxFn};

/// Largest parameter count accepted by [`build_eval`]. The circuit and its
/// reverse derivative grow faster than linearly in the table size.
pub const EVAL_PARAM_LIMIT: usize = 1 << 12;

/// A boolean function `p + a -> b` whose first `p` inputs are trainable
/// parameters, bundled with its reverse derivative `p + a + b -> p + a`.
#[derive(Debug, Clone)]
pub struct ParamModel {
    p: usize,
    a: usize,
    b: usize,
    forward: BlackBoxFn,
    reverse: BlackBoxFn,
    source: Option<Term>,
}

impl ParamModel {
    /// A model given by a safe circuit, differentiated with
    /// [`rtilde`](crate::rdiff::rtilde).
    pub fn from_circuit(source: Term, p: usize) -> Result<Self> {
        let arity = source.arity()?;
        if arity.inputs < p {
            return Err(Error::InvalidArgument(alloc::format!(
                "{p} parameters but only {} inputs",
                arity.inputs
            )));
        }
        let report = is_safe(&source)?;
        if !report.safe {
            return Err(Error::InvalidArgument(alloc::format!(
                "model circuit is unsafe: {report}"
            )));
        }
        let reverse = BlackBoxFn::from_term(&rtilde(&source)?)?;
        Ok(ParamModel {
            p,
            a: arity.inputs - p,
            b: arity.outputs,
            forward: BlackBoxFn::from_term(&source)?,
            reverse,
            source: Some(source),
        })
    }

    /// A model known only by evaluation, differentiated by finite
    /// differences.
    pub fn black_box(p: usize, forward: BlackBoxFn) -> Result<Self> {
        if forward.in_arity() < p {
            return Err(Error::InvalidArgument(alloc::format!(
                "{p} parameters but only {} inputs",
                forward.in_arity()
            )));
        }
        Ok(ParamModel {
            p,
            a: forward.in_arity() - p,
            b: forward.out_arity(),
            reverse: rdiff_brute(&forward),
            forward,
            source: None,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn forward_fn(&self) -> &BlackBoxFn {
        &self.forward
    }

    pub fn reverse_fn(&self) -> &BlackBoxFn {
        &self.reverse
    }

    pub fn source(&self) -> Option<&Term> {
        self.source.as_ref()
    }

    /// The same forward function with the reverse derivative replaced by
    /// the brute-force one.
    pub fn with_brute_force_reverse(&self) -> ParamModel {
        ParamModel {
            reverse: rdiff_brute(&self.forward),
            source: None,
            ..self.clone()
        }
    }

    pub fn forward(&self, theta: &BitVec, x: &BitVec) -> Result<BitVec> {
        theta.check_width(self.p)?;
        x.check_width(self.a)?;
        self.forward.apply(&theta.concat(x))
    }

    /// The parameter part of the reverse derivative at `(theta, x)` applied
    /// to the output change `delta`.
    pub fn param_change(&self, theta: &BitVec, x: &BitVec, delta: &BitVec) -> Result<BitVec> {
        theta.check_width(self.p)?;
        x.check_width(self.a)?;
        delta.check_width(self.b)?;
        let input = theta.concat(x);
        match self.source {
            Some(_) => Ok(self.reverse.apply(&input.concat(delta))?.slice(0, self.p)),
            // only the parameter components are needed, so skip probing x
            None => brute_reverse(&self.forward, &input, delta, 0..self.p),
        }
    }
}

/// The table-lookup model: parameters form a table of `2^a` rows of `b`
/// bits and the input selects a row, read as a big-endian address.
/// Parameter `addr * b + k` is output `k` of row `addr`.
pub fn build_eval(a: usize, b: usize) -> Result<ParamModel> {
    build_eval_with_limit(a, b, EVAL_PARAM_LIMIT)
}

pub fn build_eval_with_limit(a: usize, b: usize, limit: usize) -> Result<ParamModel> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "eval needs a, b >= 1, got a={a}, b={b}"
        )));
    }
    let p = 1u128
        .checked_shl(a as u32)
        .filter(|_| a < 100)
        .map(|rows| rows * b as u128)
        .unwrap_or(u128::MAX);
    if p > limit as u128 {
        return Err(Error::LimitExceeded {
            what: "eval parameter table",
            requested: p,
            limit: limit as u128,
        });
    }
    ParamModel::from_circuit(eval_circuit(a, b), p as usize)
}

/// The circuit of [`build_eval`]: `2^a * b + a -> b`.
pub fn eval_circuit(a: usize, b: usize) -> Term {
    if b == 1 {
        return eval_single(a);
    }
    let rows = 1usize << a;
    let p = rows * b;
    // regroup the interleaved table into one column per output, each
    // followed by its own copy of x
    let sources: Vec<usize> = (0..b)
        .flat_map(|k| (0..rows).map(move |r| r * b + k).chain(p..p + a))
        .collect();
    Term::wiring(p + a, &sources).then(Term::tensor_all((0..b).map(|_| eval_single(a))))
}

// `2^a + a -> 1`, table then address bits.
fn eval_single(a: usize) -> Term {
    if a == 0 {
        return Term::Id(1);
    }
    let half = 1usize << (a - 1);
    let rows = 2 * half;
    let rest = rows + 1..rows + a;
    // (lo table, x2..xa, hi table, x2..xa, x1)
    let sources: Vec<usize> = (0..half)
        .chain(rest.clone())
        .chain(half..rows)
        .chain(rest)
        .chain([rows])
        .collect();
    let sub = eval_single(a - 1);
    Term::seq_all(
        [
            Term::wiring(rows + a, &sources),
            Term::tensor_all([sub.clone(), sub, Term::Id(1)]),
            mux(),
        ],
        rows + a,
    )
}

// (u, v, s) -> u + (u + v) s, i.e. v if s else u.
fn mux() -> Term {
    let g = Term::Gen;
    Term::seq_all(
        [
            g(Gen::Copy).beside(Term::Id(2)),
            Term::tensor_all([Term::Id(1), g(Gen::Add), Term::Id(1)]),
            Term::Id(1).beside(g(Gen::And)),
            g(Gen::Add),
        ],
        3,
    )
}

/// The masked-overlap threshold model `n + n -> 1`: output 1 iff fewer
/// than a quarter of the mask's set bits are also set in the input. An
/// all-zero mask outputs 0.
pub fn build_pseudo_linear(n: usize) -> Result<ParamModel> {
    if n == 0 {
        return Err(Error::InvalidArgument("pseudoLinear needs n >= 1".into()));
    }
    let forward = BlackBoxFn::new(2 * n, 1, move |input| {
        let mask = input.slice(0, n);
        let x = input.slice(n, 2 * n);
        core::iter::once(pseudo_linear(&mask, &x)).collect()
    });
    ParamModel::black_box(n, forward)
}

pub fn pseudo_linear(mask: &BitVec, x: &BitVec) -> bool {
    let total = mask.count_ones();
    total > 0 && 4 * mask.and_count(x) < total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse, Arity, Netlist};
    use crate::semantics::to_poly;
    use alloc::string::ToString;

    fn bits(b: &[u8]) -> BitVec {
        BitVec::from_bits(b)
    }

    #[test]
    fn eval_examples() {
        let m = build_eval(1, 1).unwrap();
        assert_eq!((m.p(), m.a(), m.b()), (2, 1, 1));
        assert_eq!(m.forward(&bits(&[0, 1]), &bits(&[1])).unwrap(), bits(&[1]));
        assert_eq!(m.forward(&bits(&[0, 1]), &bits(&[0])).unwrap(), bits(&[0]));
        assert_eq!(to_poly(m.source().unwrap()).unwrap().to_string(), "x1 + x1*x3 + x2*x3");
        assert!(is_safe(m.source().unwrap()).unwrap().safe);
        assert_eq!(
            mux().to_string(),
            parse("copy | id 2 ; id 1 | add | id 1 ; id 1 | and ; add")
                .unwrap()
                .to_string()
        );
    }

    #[test]
    fn eval_is_table_lookup() {
        for a in 1..=3 {
            for b in 1..=2 {
                let m = build_eval(a, b).unwrap();
                assert_eq!(m.source().unwrap().arity().unwrap(), Arity::new((1 << a) * b + a, b));
                let table = Netlist::from_term(m.source().unwrap()).unwrap();
                let p = m.p();
                // a one-hot table picks out exactly the addressed bit
                for i in 0..p {
                    let theta = BitVec::unit(p, i);
                    for addr in 0..1u64 << a {
                        let y = table.eval(&theta.concat(&BitVec::from_uint(addr, a)));
                        let expect = BitVec::from_iter((0..b).map(|k| addr as usize * b + k == i));
                        assert_eq!(y, expect, "a={a} b={b} i={i} addr={addr}");
                    }
                }
            }
        }
    }

    #[test]
    fn eval_limits() {
        assert!(matches!(build_eval(13, 1), Err(Error::LimitExceeded { .. })));
        assert!(matches!(build_eval(200, 1), Err(Error::LimitExceeded { .. })));
        assert!(build_eval(0, 1).is_err());
        assert!(build_eval_with_limit(2, 2, 8).is_ok());
        assert!(build_eval_with_limit(2, 3, 8).is_err());
    }

    #[test]
    fn pseudo_linear_examples() {
        let m = build_pseudo_linear(4).unwrap();
        assert_eq!((m.p(), m.a(), m.b()), (4, 4, 1));
        let ones = bits(&[1, 1, 1, 1]);
        assert_eq!(m.forward(&ones, &bits(&[0, 0, 0, 0])).unwrap(), bits(&[1]));
        assert_eq!(m.forward(&ones, &bits(&[1, 0, 0, 0])).unwrap(), bits(&[0]));
        for x in 0..16 {
            assert_eq!(
                m.forward(&bits(&[0, 0, 0, 0]), &BitVec::from_uint(x, 4)).unwrap(),
                bits(&[0])
            );
        }
        assert!(m.source().is_none());
    }

    #[test]
    fn reverse_agrees_with_brute_force() {
        for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
            let m = build_eval(a, b).unwrap();
            let brute = rdiff_brute(m.forward_fn());
            let n = m.p() + a + b;
            for k in 0..1u64 << n {
                let v = BitVec::from_uint(k, n);
                assert_eq!(m.reverse_fn().apply(&v).unwrap(), brute.apply(&v).unwrap());
            }
        }
    }

    #[test]
    fn unsafe_circuits_are_rejected() {
        assert!(ParamModel::from_circuit(parse("copy ; and").unwrap(), 1).is_err());
        assert!(ParamModel::from_circuit(parse("and").unwrap(), 3).is_err());
    }
}
