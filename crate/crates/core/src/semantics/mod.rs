//! Boolean and polynomial interpretations of circuits.
//!
//! Two circuits are equal as boolean functions exactly when their polynomial
//! denotations agree after reducing `x^2 = x`, and equal modulo the
//! polynomial-circuit axioms exactly when the unreduced denotations agree.
//! Both deciders below are therefore plain set comparisons.

mod poly;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use poly::{Monomial, Poly, PolyTuple};

use crate::bits::BitVec;
use crate::circuit::{Arity, Gen, Netlist, Term};
use crate::error::{Error, Result};

/// Runs the circuit on one input vector.
pub fn eval_bool(t: &Term, input: &BitVec) -> Result<BitVec> {
    let arity = t.arity()?;
    input.check_width(arity.inputs)?;
    Ok(Netlist::from_term(t)?.eval(input))
}

/// The full truth table, one row per input in big-endian counting order.
pub fn truth_table(t: &Term) -> Result<Vec<BitVec>> {
    Ok(Netlist::from_term(t)?.truth_table())
}

pub fn gen_poly(g: Gen) -> PolyTuple {
    let x = Poly::var;
    let comps = match g {
        Gen::Discard => vec![],
        Gen::Copy => vec![x(1), x(1)],
        Gen::Zero => vec![Poly::zero()],
        Gen::One => vec![Poly::one()],
        Gen::Add => vec![x(1).add(&x(2))],
        Gen::And => vec![x(1).mul(&x(2))],
    };
    PolyTuple::new(g.arity().inputs, comps).expect("generator table is well formed")
}

/// The polynomial denotation: composition is substitution, tensor is
/// juxtaposition with the bottom's variables renumbered.
pub fn to_poly(t: &Term) -> Result<PolyTuple> {
    t.arity()?;
    Ok(to_poly_checked(t))
}

fn to_poly_checked(t: &Term) -> PolyTuple {
    match t {
        Term::Gen(g) => gen_poly(*g),
        Term::Id(n) => PolyTuple::identity(*n),
        Term::Swap => PolyTuple::new(2, vec![Poly::var(2), Poly::var(1)]).expect("swap"),
        Term::Seq(f, g) => to_poly_checked(g)
            .substitute(&to_poly_checked(f))
            .expect("well-typed composition"),
        Term::Tensor(f, g) => to_poly_checked(f).tensor(&to_poly_checked(g)),
    }
}

fn same_arity(c: &Term, d: &Term) -> Result<Arity> {
    let (ac, ad) = (c.arity()?, d.arity()?);
    if ac != ad {
        return Err(Error::ArityMismatch {
            left: format!("{ac}"),
            right: format!("{ad}"),
        });
    }
    Ok(ac)
}

/// Equality modulo the polynomial-circuit axioms (everything except
/// `copy ; and = id 1`).
pub fn equiv_a(c: &Term, d: &Term) -> Result<bool> {
    same_arity(c, d)?;
    Ok(to_poly(c)? == to_poly(d)?)
}

/// Equality as boolean functions.
pub fn equiv_bool(c: &Term, d: &Term) -> Result<bool> {
    same_arity(c, d)?;
    Ok(to_poly(c)?.reduce_multilinear() == to_poly(d)?.reduce_multilinear())
}

/// The zero morphism `a -> b`: discard everything, emit zeros.
pub fn circuit_zero(a: usize, b: usize) -> Term {
    Term::repeat(Gen::Discard, a).beside(Term::repeat(Gen::Zero, b))
}

/// Pointwise sum `f + g`.
pub fn circuit_add(f: &Term, g: &Term) -> Result<Term> {
    combine(f, g, Gen::Add)
}

/// Pointwise product `f * g`.
pub fn circuit_mul(f: &Term, g: &Term) -> Result<Term> {
    combine(f, g, Gen::And)
}

// copy the inputs, run f and g side by side, pair up their outputs and
// merge each pair with `gate`.
fn combine(f: &Term, g: &Term, gate: Gen) -> Result<Term> {
    let Arity { inputs: a, outputs: b } = same_arity(f, g)?;
    let interleave: Vec<usize> = (0..b).flat_map(|k| [k, b + k]).collect();
    Ok(Term::seq_all(
        [
            Term::copy_block(a),
            f.clone().beside(g.clone()),
            Term::wiring(2 * b, &interleave),
            Term::repeat(gate, b),
        ],
        a,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse;
    use crate::sample::{random_term, random_term_with_arity};
    use alloc::string::ToString;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EVAL: &str = "copy | id 2 ; id 1 | add | id 1 ; id 1 | and ; add";

    fn p(text: &str) -> Term {
        parse(text).unwrap()
    }

    #[test]
    fn eval_examples() {
        let bits = BitVec::from_bits;
        assert_eq!(eval_bool(&p("and"), &bits(&[1, 1])).unwrap(), bits(&[1]));
        assert_eq!(eval_bool(&p("add"), &bits(&[1, 1])).unwrap(), bits(&[0]));
        assert_eq!(eval_bool(&p("id 2"), &bits(&[0, 1])).unwrap(), bits(&[0, 1]));
        assert_eq!(
            eval_bool(&p("and"), &bits(&[1])),
            Err(Error::WidthMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn poly_examples() {
        assert_eq!(to_poly(&p(EVAL)).unwrap().to_string(), "x1 + x1*x3 + x2*x3");
        assert_eq!(to_poly(&p("copy ; and")).unwrap().to_string(), "x1^2");
        assert_eq!(to_poly(&p("id 1")).unwrap().to_string(), "x1");
        assert_eq!(to_poly(&p("zero")).unwrap().to_string(), "0");
        assert_eq!(to_poly(&p("discard")).unwrap().to_string(), "()");
        assert_eq!(to_poly(&p("swap ; and | id 0")).unwrap().to_string(), "x1*x2");
    }

    #[test]
    fn equivalence_examples() {
        let sq = p("copy ; and");
        assert!(!equiv_a(&sq, &p("id 1")).unwrap());
        assert!(equiv_bool(&sq, &p("id 1")).unwrap());
        assert!(equiv_a(&p(EVAL), &p(EVAL)).unwrap());
        assert!(equiv_a(&p("add"), &p("swap ; add")).unwrap());
        assert!(!equiv_bool(&p("one"), &p("zero")).unwrap());
        assert!(matches!(
            equiv_a(&p("add"), &p("id 1")),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn module_structure_examples() {
        let id = p("id 1");
        assert!(equiv_a(&circuit_add(&id, &id).unwrap(), &circuit_zero(1, 1)).unwrap());
        assert_eq!(to_poly(&circuit_mul(&id, &id).unwrap()).unwrap().to_string(), "x1^2");
        assert!(circuit_add(&id, &p("add")).is_err());
        assert_eq!(circuit_zero(0, 0).arity().unwrap(), Arity::new(0, 0));
    }

    fn same_shape_pair(seed: u64) -> (Term, Term, Term) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_term(&mut rng, 6);
        let Arity { inputs, outputs } = f.arity().unwrap();
        let g = random_term_with_arity(&mut rng, inputs, outputs, 6);
        let h = random_term_with_arity(&mut rng, inputs, outputs, 6);
        (f, g, h)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn soundness_of_polynomial_reading(seed in any::<u64>(), size in 1usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_term(&mut rng, size);
            let a = t.arity().unwrap().inputs;
            prop_assume!(a <= 10);
            let reduced = to_poly(&t).unwrap().reduce_multilinear();
            for (k, row) in truth_table(&t).unwrap().into_iter().enumerate() {
                let x = BitVec::from_uint(k as u64, a);
                prop_assert_eq!(reduced.eval(&x).unwrap(), row);
            }
        }

        #[test]
        fn composition_is_substitution(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_term(&mut rng, 5);
            let g = random_term_with_arity(&mut rng, f.arity().unwrap().outputs, usize::MAX, 5);
            let pf = to_poly(&f).unwrap();
            let pg = to_poly(&g).unwrap();
            prop_assert_eq!(to_poly(&f.clone().then(g.clone())).unwrap(), pg.substitute(&pf).unwrap());
            prop_assert_eq!(to_poly(&f.beside(g)).unwrap(), pf.tensor(&pg));
        }

        #[test]
        fn bool_equivalence_matches_truth_tables(seed in any::<u64>()) {
            let (f, g, _) = same_shape_pair(seed);
            prop_assume!(f.arity().unwrap().inputs <= 10);
            let by_tables = truth_table(&f).unwrap() == truth_table(&g).unwrap();
            prop_assert_eq!(equiv_bool(&f, &g).unwrap(), by_tables);
            if equiv_a(&f, &g).unwrap() {
                prop_assert!(by_tables);
            }
        }

        #[test]
        fn module_laws(seed in any::<u64>()) {
            let (f, g, h) = same_shape_pair(seed);
            let Arity { inputs, outputs } = f.arity().unwrap();
            let add = |x: &Term, y: &Term| circuit_add(x, y).unwrap();
            let mul = |x: &Term, y: &Term| circuit_mul(x, y).unwrap();
            let zero = circuit_zero(inputs, outputs);
            prop_assert!(equiv_a(&add(&f, &g), &add(&g, &f)).unwrap());
            prop_assert!(equiv_a(&add(&add(&f, &g), &h), &add(&f, &add(&g, &h))).unwrap());
            prop_assert!(equiv_a(&add(&f, &zero), &f).unwrap());
            prop_assert!(equiv_a(&mul(&f, &add(&g, &h)), &add(&mul(&f, &g), &mul(&f, &h))).unwrap());
            let pf = to_poly(&f).unwrap();
            let pg = to_poly(&g).unwrap();
            prop_assert_eq!(to_poly(&add(&f, &g)).unwrap(), pf.add(&pg).unwrap());
            prop_assert_eq!(to_poly(&mul(&f, &g)).unwrap(), pf.mul(&pg).unwrap());
        }
    }
}
