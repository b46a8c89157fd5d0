//! The port-graph view of a term, and a flat netlist compiled from it.
//!
//! Every wire of the diagram becomes one edge. Structural morphisms (`id`,
//! `swap`) disappear: they only decide which source meets which sink.
//! Nodes are created in dependency order, so node indices already form a
//! topological order; [`PortGraph::topological_order`] re-derives one
//! independently for checking.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{Gen, Term};
use crate::bits::BitVec;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// A boundary input port of the circuit (0-based).
    Input(usize),
    Out {
        node: usize,
        port: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sink {
    /// A boundary output port of the circuit (0-based).
    Output(usize),
    In {
        node: usize,
        port: usize,
    },
}

/// A generator occurrence. `inputs[k]` / `outputs[k]` are edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub gen: Gen,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: Source,
    pub to: Sink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Edge leaving each circuit input port.
    pub input_ports: Vec<usize>,
    /// Edge entering each circuit output port.
    pub output_ports: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl PortGraph {
    pub fn from_term(term: &Term) -> Result<PortGraph> {
        let arity = term.arity()?;
        let mut g = PortGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
            input_ports: vec![UNSET; arity.inputs],
            output_ports: vec![UNSET; arity.outputs],
        };
        let outs = g.build(term, (0..arity.inputs).map(Source::Input).collect());
        for (j, src) in outs.into_iter().enumerate() {
            g.connect(src, Sink::Output(j));
        }
        debug_assert!(g.input_ports.iter().all(|&e| e != UNSET));
        debug_assert!(g.nodes.iter().all(|n| n.outputs.iter().all(|&e| e != UNSET)));
        Ok(g)
    }

    fn connect(&mut self, from: Source, to: Sink) {
        let e = self.edges.len();
        self.edges.push(Edge { from, to });
        match from {
            Source::Input(i) => self.input_ports[i] = e,
            Source::Out { node, port } => self.nodes[node].outputs[port] = e,
        }
        match to {
            Sink::Output(j) => self.output_ports[j] = e,
            Sink::In { node, port } => self.nodes[node].inputs[port] = e,
        }
    }

    // `term` is already type-checked, so slicing by arity cannot fail.
    fn build(&mut self, term: &Term, mut srcs: Vec<Source>) -> Vec<Source> {
        match term {
            Term::Id(_) => srcs,
            Term::Swap => {
                srcs.swap(0, 1);
                srcs
            }
            Term::Gen(gen) => {
                let arity = gen.arity();
                let node = self.nodes.len();
                self.nodes.push(Node {
                    gen: *gen,
                    inputs: vec![UNSET; arity.inputs],
                    outputs: vec![UNSET; arity.outputs],
                });
                for (port, src) in srcs.into_iter().enumerate() {
                    self.connect(src, Sink::In { node, port });
                }
                (0..arity.outputs).map(|port| Source::Out { node, port }).collect()
            }
            Term::Seq(f, g) => {
                let mid = self.build(f, srcs);
                self.build(g, mid)
            }
            Term::Tensor(f, g) => {
                let split = f.arity().expect("checked").inputs;
                let rest = srcs.split_off(split);
                let mut top = self.build(f, srcs);
                top.extend(self.build(g, rest));
                top
            }
        }
    }

    /// Node indices in an order where every node comes after the nodes
    /// feeding it, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.nodes.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if let (Source::Out { node: a, .. }, Sink::In { node: b, .. }) = (e.from, e.to) {
                indegree[b] += 1;
                succ[a].push(b);
            }
        }
        let mut queue: VecDeque<usize> = (0..self.nodes.len()).filter(|&n| indegree[n] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for &m in &succ[n] {
                indegree[m] -= 1;
                if indegree[m] == 0 {
                    queue.push_back(m);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// For every edge, the set of circuit input ports with a directed path to
    /// it.
    pub fn input_reachability(&self) -> Vec<BitVec> {
        let n_in = self.input_ports.len();
        let mut reach = vec![BitVec::zeros(n_in); self.edges.len()];
        for (i, &e) in self.input_ports.iter().enumerate() {
            reach[e].set(i, true);
        }
        let order = self.topological_order().expect("circuit graphs are acyclic");
        for n in order {
            let node = &self.nodes[n];
            let mut acc = BitVec::zeros(n_in);
            for &e in &node.inputs {
                acc |= &reach[e];
            }
            for &e in &node.outputs {
                reach[e] = acc.clone();
            }
        }
        reach
    }

    pub fn count(&self, gen: Gen) -> usize {
        self.nodes.iter().filter(|n| n.gen == gen).count()
    }

    pub fn compile(&self) -> Netlist {
        let ops = self
            .nodes
            .iter()
            .filter_map(|n| match n.gen {
                Gen::Discard => None,
                Gen::Copy => Some(Op::Copy {
                    src: n.inputs[0],
                    dst: [n.outputs[0], n.outputs[1]],
                }),
                Gen::Zero => Some(Op::Const {
                    dst: n.outputs[0],
                    value: 0,
                }),
                Gen::One => Some(Op::Const {
                    dst: n.outputs[0],
                    value: !0,
                }),
                Gen::Add => Some(Op::Xor {
                    lhs: n.inputs[0],
                    rhs: n.inputs[1],
                    dst: n.outputs[0],
                }),
                Gen::And => Some(Op::And {
                    lhs: n.inputs[0],
                    rhs: n.inputs[1],
                    dst: n.outputs[0],
                }),
            })
            .collect();
        Netlist {
            slots: self.edges.len(),
            inputs: self.input_ports.clone(),
            outputs: self.output_ports.clone(),
            ops,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Copy { src: usize, dst: [usize; 2] },
    Const { dst: usize, value: u64 },
    Xor { lhs: usize, rhs: usize, dst: usize },
    And { lhs: usize, rhs: usize, dst: usize },
}

/// A straight-line program over 64-bit words, one word per wire.
///
/// Each bit lane of the words is an independent evaluation, so one pass
/// evaluates up to 64 input patterns at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    slots: usize,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    ops: Vec<Op>,
}

impl Netlist {
    pub fn from_term(term: &Term) -> Result<Netlist> {
        Ok(PortGraph::from_term(term)?.compile())
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Lane-parallel evaluation: `inputs[i]` holds wire `i` for 64 patterns.
    pub fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        let mut scratch = Vec::new();
        let mut out = Vec::new();
        self.eval_words_into(inputs, &mut scratch, &mut out);
        out
    }

    pub fn eval_words_into(&self, inputs: &[u64], scratch: &mut Vec<u64>, out: &mut Vec<u64>) {
        assert_eq!(inputs.len(), self.inputs.len(), "netlist input count");
        scratch.clear();
        scratch.resize(self.slots, 0);
        for (&slot, &w) in self.inputs.iter().zip(inputs) {
            scratch[slot] = w;
        }
        for op in &self.ops {
            match *op {
                Op::Copy { src, dst } => {
                    let v = scratch[src];
                    scratch[dst[0]] = v;
                    scratch[dst[1]] = v;
                }
                Op::Const { dst, value } => scratch[dst] = value,
                Op::Xor { lhs, rhs, dst } => scratch[dst] = scratch[lhs] ^ scratch[rhs],
                Op::And { lhs, rhs, dst } => scratch[dst] = scratch[lhs] & scratch[rhs],
            }
        }
        out.clear();
        out.extend(self.outputs.iter().map(|&s| scratch[s]));
    }

    /// Evaluates a single input vector. The width must match.
    pub fn eval(&self, input: &BitVec) -> BitVec {
        let words: Vec<u64> = input.iter().map(|b| if b { !0 } else { 0 }).collect();
        self.eval_words(&words).into_iter().map(|w| w & 1 == 1).collect()
    }

    /// Outputs for every input, in big-endian counting order of the inputs.
    pub fn truth_table(&self) -> Vec<BitVec> {
        let n = self.inputs.len();
        assert!(n < 32, "truth table over {n} inputs is too large");
        let total = 1usize << n;
        let mut rows = Vec::with_capacity(total);
        let mut words = vec![0u64; n];
        let mut scratch = Vec::new();
        let mut out = Vec::new();
        for base in (0..total).step_by(64) {
            let lanes = (total - base).min(64);
            for (i, w) in words.iter_mut().enumerate() {
                *w = lane_pattern(base, lanes, n - 1 - i);
            }
            self.eval_words_into(&words, &mut scratch, &mut out);
            for lane in 0..lanes {
                rows.push(out.iter().map(|w| (w >> lane) & 1 == 1).collect());
            }
        }
        rows
    }
}

/// Word whose lane `j` is bit `shift` of `base + j`.
pub(crate) fn lane_pattern(base: usize, lanes: usize, shift: usize) -> u64 {
    (0..lanes).fold(0u64, |acc, j| acc | ((((base + j) >> shift) & 1) as u64) << j)
}
