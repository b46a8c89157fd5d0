//! Parametrised models and Reverse Derivative Ascent.
//!
//! One step presents an example `(x, y)`, computes the output error
//! `dy = f(theta, x) + y` and flips the parameters selected by the
//! reverse derivative: `theta' = theta + R[f](theta, x, dy)` restricted to
//! the parameter wires. There is no loss and no learning rate.

mod model;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use model::{
    build_eval, build_eval_with_limit, build_pseudo_linear, eval_circuit, pseudo_linear, ParamModel, EVAL_PARAM_LIMIT,
};

use crate::bits::BitVec;
use crate::data::Dataset;
use crate::error::{Error, Result};

pub fn rda_step(model: &ParamModel, theta: &BitVec, x: &BitVec, y: &BitVec) -> Result<BitVec> {
    y.check_width(model.b())?;
    let mut delta = model.forward(theta, x)?;
    delta ^= y;
    if delta.is_zero() {
        return Ok(theta.clone());
    }
    let mut next = theta.clone();
    next ^= &model.param_change(theta, x, &delta)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 1,
            seed: 0,
            shuffle: true,
        }
    }
}

/// `epochs` passes over the dataset. With shuffling, epoch `e` is a
/// permutation drawn from ChaCha8 seeded with `seed` on stream `e`.
pub fn make_schedule(dataset: &Dataset, cfg: &TrainConfig) -> Result<Vec<(BitVec, BitVec)>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if cfg.epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    let mut schedule = Vec::with_capacity(cfg.epochs * dataset.len());
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    for epoch in 0..cfg.epochs {
        if cfg.shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(epoch as u64);
            order.sort_unstable();
            order.shuffle(&mut rng);
        }
        schedule.extend(order.iter().map(|&i| dataset.examples[i].clone()));
    }
    Ok(schedule)
}

/// Starting parameters for a training run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Init {
    #[default]
    Zeros,
    /// Independent fair bits from ChaCha8 seeded with the given seed.
    Random(u64),
}

pub fn initial_params(p: usize, init: Init) -> BitVec {
    match init {
        Init::Zeros => BitVec::zeros(p),
        Init::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..p).map(|_| rng.random::<bool>()).collect()
        }
    }
}

/// Parameters before and after every step of a training run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    thetas: Vec<BitVec>,
}

impl Trajectory {
    pub fn thetas(&self) -> &[BitVec] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn final_theta(&self) -> &BitVec {
        self.thetas
            .last()
            .expect("a trajectory holds at least the initial parameters")
    }

    /// One hex line per entry.
    pub fn to_hex_dump(&self) -> String {
        let mut out = String::new();
        for t in &self.thetas {
            writeln!(out, "{}", t.to_hex()).expect("writing to a String");
        }
        out
    }
}

pub fn rda(model: &ParamModel, theta0: &BitVec, schedule: &[(BitVec, BitVec)]) -> Result<Trajectory> {
    theta0.check_width(model.p())?;
    let mut thetas = Vec::with_capacity(schedule.len() + 1);
    thetas.push(theta0.clone());
    for (x, y) in schedule {
        let next = rda_step(model, thetas.last().expect("nonempty"), x, y)?;
        thetas.push(next);
    }
    Ok(Trajectory { thetas })
}

/// Fraction of examples on which the model output equals the label in
/// every bit.
pub fn accuracy(model: &ParamModel, theta: &BitVec, dataset: &Dataset) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut hits = 0usize;
    for (x, y) in &dataset.examples {
        if &model.forward(theta, x)? == y {
            hits += 1;
        }
    }
    Ok(hits as f64 / dataset.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabelEncoding;
    use crate::rdiff::BlackBoxFn;
    use alloc::vec;
    use proptest::prelude::*;

    fn bits(b: &[u8]) -> BitVec {
        BitVec::from_bits(b)
    }

    fn dataset(examples: Vec<(BitVec, BitVec)>) -> Dataset {
        let (a, b) = (examples[0].0.width(), examples[0].1.width());
        Dataset::new(a, b, examples, LabelEncoding::Binary).unwrap()
    }

    // Direct table lookup, independent of the circuit.
    fn lookup(theta: &BitVec, x: &BitVec, b: usize) -> BitVec {
        let addr = x.to_uint().unwrap() as usize;
        theta.slice(addr * b, addr * b + b)
    }

    #[test]
    fn step_examples() {
        let m = build_eval(1, 1).unwrap();
        let step = rda_step(&m, &bits(&[0, 0]), &bits(&[1]), &bits(&[1])).unwrap();
        assert_eq!(step, bits(&[0, 1]));
        assert_eq!(m.forward(&step, &bits(&[1])).unwrap(), bits(&[1]));
        let step = rda_step(&m, &bits(&[1, 1]), &bits(&[0]), &bits(&[0])).unwrap();
        assert_eq!(step, bits(&[0, 1]));
        assert_eq!(
            rda_step(&m, &bits(&[1, 0]), &bits(&[0]), &bits(&[1])).unwrap(),
            bits(&[1, 0])
        );
        assert_eq!(
            rda_step(&m, &bits(&[1, 0]), &bits(&[0]), &bits(&[1, 1])),
            Err(Error::WidthMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn one_step_correction_is_exhaustive() {
        for a in 1..=3usize {
            for b in 1..=2usize {
                let m = build_eval(a, b).unwrap();
                let p = m.p();
                // all θ for small tables, a spread of them otherwise
                let thetas: Vec<u64> = if p <= 8 {
                    (0..1 << p).collect()
                } else {
                    (0..256).map(|k| k * 0x9e37_79b9 % (1 << p)).collect()
                };
                for &t in &thetas {
                    let theta = BitVec::from_uint(t, p);
                    for x in 0..1u64 << a {
                        let x = BitVec::from_uint(x, a);
                        for y in 0..1u64 << b {
                            let y = BitVec::from_uint(y, b);
                            let next = rda_step(&m, &theta, &x, &y).unwrap();
                            assert_eq!(lookup(&next, &x, b), y);
                            let addr = x.to_uint().unwrap() as usize;
                            for i in (0..p).filter(|i| i / b != addr) {
                                assert_eq!(next.get(i), theta.get(i));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn schedules() {
        let ds = dataset((0..3).map(|i| (BitVec::from_uint(i, 2), bits(&[1]))).collect());
        let cfg = TrainConfig {
            epochs: 2,
            seed: 4,
            shuffle: false,
        };
        let s = make_schedule(&ds, &cfg).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s[3..], ds.examples[..]);
        assert_eq!(s[..3], ds.examples[..]);

        let big = dataset((0..40).map(|i| (BitVec::from_uint(i, 6), bits(&[0]))).collect());
        let cfg = TrainConfig {
            epochs: 3,
            seed: 4,
            shuffle: true,
        };
        let s = make_schedule(&big, &cfg).unwrap();
        assert_eq!(s.len(), 120);
        assert_eq!(s, make_schedule(&big, &cfg).unwrap());
        assert_ne!(s[..40], s[40..80]);
        let mut first: Vec<_> = s[..40].to_vec();
        let mut all = big.examples.clone();
        first.sort();
        all.sort();
        assert_eq!(first, all);

        let empty = Dataset::new(1, 1, vec![], LabelEncoding::Binary).unwrap();
        assert_eq!(make_schedule(&empty, &cfg), Err(Error::EmptyDataset));
        let zero_epochs = TrainConfig { epochs: 0, ..cfg };
        assert!(make_schedule(&big, &zero_epochs).is_err());
    }

    #[test]
    fn rda_examples() {
        let m = build_eval(1, 1).unwrap();
        let theta0 = bits(&[0, 0]);
        let t = rda(&m, &theta0, &[]).unwrap();
        assert_eq!(t.thetas(), core::slice::from_ref(&theta0));

        let schedule = vec![(bits(&[0]), bits(&[1])), (bits(&[1]), bits(&[1]))];
        let t = rda(&m, &theta0, &schedule).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.final_theta(), &bits(&[1, 1]));
        assert_eq!(t.to_hex_dump(), "0\n8\nc\n");

        let once = rda(&m, &theta0, &schedule[..1]).unwrap();
        let many = rda(&m, &theta0, &vec![schedule[0].clone(); 5]).unwrap();
        assert_eq!(once.final_theta(), many.final_theta());
    }

    #[test]
    fn accuracy_examples() {
        let m = build_eval(2, 1).unwrap();
        let table: Vec<_> = (0..4u64)
            .map(|x| (BitVec::from_uint(x, 2), BitVec::from_uint(x & 1, 1)))
            .collect();
        let ds = dataset(table.clone());
        let trained = rda(&m, &BitVec::zeros(4), &table).unwrap();
        assert_eq!(accuracy(&m, trained.final_theta(), &ds).unwrap(), 1.0);
        assert_eq!(accuracy(&m, &BitVec::zeros(4), &ds).unwrap(), 0.5);
        let empty = Dataset::new(2, 1, vec![], LabelEncoding::Binary).unwrap();
        assert_eq!(accuracy(&m, &BitVec::zeros(4), &empty), Err(Error::EmptyDataset));
    }

    #[test]
    fn initial_parameters() {
        assert_eq!(initial_params(5, Init::Zeros), BitVec::zeros(5));
        let r = initial_params(1000, Init::Random(3));
        assert_eq!(r, initial_params(1000, Init::Random(3)));
        assert_ne!(r, initial_params(1000, Init::Random(4)));
        assert!((400..600).contains(&r.count_ones()));
    }

    #[test]
    fn zero_error_is_a_fixed_point() {
        let pl = build_pseudo_linear(6).unwrap();
        for t in 0..64 {
            let theta = BitVec::from_uint(t, 6);
            let x = BitVec::from_uint(t * 7 % 64, 6);
            let y = pl.forward(&theta, &x).unwrap();
            assert_eq!(rda_step(&pl, &theta, &x, &y).unwrap(), theta);
        }
    }

    #[test]
    fn black_box_step_projects_the_full_reverse() {
        let pl = build_pseudo_linear(4).unwrap();
        for k in 0..1u64 << 8 {
            let v = BitVec::from_uint(k, 8);
            let (theta, x) = (v.slice(0, 4), v.slice(4, 8));
            let y = bits(&[1]);
            let delta = &pl.forward(&theta, &x).unwrap() ^ &y;
            let full = pl.reverse_fn().apply(&v.concat(&delta)).unwrap();
            let mut expect = theta.clone();
            expect ^= &full.slice(0, 4);
            assert_eq!(rda_step(&pl, &theta, &x, &y).unwrap(), expect);
        }
    }

    #[test]
    fn black_box_models_need_enough_inputs() {
        let f = BlackBoxFn::new(1, 1, |x| x.clone());
        assert!(ParamModel::black_box(2, f).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn circuit_and_brute_force_trajectories_agree(seed in any::<u64>(), a in 1usize..=3, b in 1usize..=2, len in 0usize..40) {
            let m = build_eval(a, b).unwrap();
            let brute = m.with_brute_force_reverse();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            use rand::Rng;
            let schedule: Vec<_> = (0..len)
                .map(|_| (BitVec::from_uint(rng.random_range(0..1 << a), a), BitVec::from_uint(rng.random_range(0..1 << b), b)))
                .collect();
            let theta0 = BitVec::from_uint(rng.random_range(0..1u64 << m.p()), m.p());
            let t1 = rda(&m, &theta0, &schedule).unwrap();
            let t2 = rda(&brute, &theta0, &schedule).unwrap();
            prop_assert_eq!(t1.len(), len + 1);
            prop_assert_eq!(t1, t2);
        }
    }
}
