use std::collections::BTreeSet;

use serde::Serialize;

use super::ir::{Op, Ref};
use super::layer::LayeredCircuit;
use crate::dynamics::{run, synchronous_update, ConvergenceOutcome, Labelling, RunOptions};
use crate::error::{Error, Result};
use crate::gadgets::{pair_value, BasePairHandle, DualPair, NetworkBuilder, PairValue};
use crate::netcore::{induced_subnetwork, NodeId, SocialNetwork};

/// Where the sink-layer pairs of an emitted circuit live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sinks {
    Fresh,
    /// Output `i` is written into input pair `i`, closing the circuit into a loop.
    IntoInputs,
}

/// Which part of the layered circuit an emitted pair implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairRole {
    Input(usize),
    Gate(usize),
    /// Halt guard on output `i`.
    Guard(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Emission {
    pub input_pairs: Vec<DualPair>,
    pub gate_pairs: Vec<DualPair>,
    pub output_pairs: Vec<DualPair>,
    /// Every emitted pair with its role and layer, in allocation order.
    pub pairs: Vec<(PairRole, DualPair, usize)>,
    pub h: usize,
}

/// Emits one dual pair per input and per gate of `layered`.
///
/// With `guard` set, the last output of `layered` is a halt flag: each
/// remaining output passes through a halt guard one layer further down.
pub(crate) fn emit(
    b: &mut NetworkBuilder,
    base: BasePairHandle,
    layered: &LayeredCircuit,
    guard: bool,
    sinks: Sinks,
) -> Result<Emission> {
    let circuit = &layered.circuit;
    let mut outputs = circuit.outputs.clone();
    let flag = if guard {
        Some(outputs.pop().ok_or_else(|| {
            Error::Circuit("guarded compilation needs a halt-flag output".into())
        })?)
    } else {
        None
    };
    if sinks == Sinks::IntoInputs && outputs.len() != circuit.input_count {
        return Err(Error::Circuit(format!(
            "cannot identify {} outputs with {} inputs",
            outputs.len(),
            circuit.input_count
        )));
    }

    let mut pairs = Vec::new();
    let input_pairs: Vec<DualPair> = (0..circuit.input_count)
        .map(|j| {
            let p = b.new_pair();
            pairs.push((PairRole::Input(j), p, 0));
            p
        })
        .collect();

    // Gate -> input index it must be written into, when sinks close the loop.
    let mut sink_target = vec![None; circuit.gates.len()];
    if sinks == Sinks::IntoInputs && flag.is_none() {
        for (i, r) in outputs.iter().enumerate() {
            if let Ref::Gate(g) = *r {
                sink_target[g] = Some(i);
            }
        }
    }

    let mut gate_pairs = Vec::with_capacity(circuit.gates.len());
    let pair_of = |gate_pairs: &[DualPair], r: Ref| match r {
        Ref::Input(j) => input_pairs[j],
        Ref::Gate(i) => gate_pairs[i],
    };
    for (g, gate) in circuit.gates.iter().enumerate() {
        let out = match sink_target[g] {
            Some(i) => input_pairs[i],
            None => b.new_pair(),
        };
        let args: Vec<DualPair> = gate.args.iter().map(|&r| pair_of(&gate_pairs, r)).collect();
        match gate.op {
            // x AND x == x OR x == x; a plain copy keeps the edge set simple.
            Op::And | Op::Or if args[0] == args[1] => b.wire_nop(args[0], out)?,
            Op::And => b.wire_and(args[0], args[1], base, out)?,
            Op::Or => b.wire_or(args[0], args[1], base, out)?,
            Op::Not => b.wire_not(args[0], out)?,
            Op::Nop => b.wire_nop(args[0], out)?,
            Op::ConstTrue => b.wire_nop(base.pair(), out)?,
            Op::ConstFalse => b.wire_not(base.pair(), out)?,
        }
        if sink_target[g].is_none() {
            pairs.push((PairRole::Gate(g), out, layered.layers[g]));
        }
        gate_pairs.push(out);
    }

    let (output_pairs, h) = match flag {
        None => (
            outputs.iter().map(|&r| pair_of(&gate_pairs, r)).collect(),
            layered.h,
        ),
        Some(flag) => {
            let flag = pair_of(&gate_pairs, flag);
            let mut guarded = Vec::with_capacity(outputs.len());
            for (i, &r) in outputs.iter().enumerate() {
                let out = match sinks {
                    Sinks::Fresh => {
                        let p = b.new_pair();
                        pairs.push((PairRole::Guard(i), p, layered.h + 1));
                        p
                    }
                    Sinks::IntoInputs => input_pairs[i],
                };
                b.wire_halt_guard(pair_of(&gate_pairs, r), flag, base, out)?;
                guarded.push(out);
            }
            (guarded, layered.h + 1)
        }
    };

    Ok(Emission {
        input_pairs,
        gate_pairs,
        output_pairs,
        pairs,
        h,
    })
}

/// A layered circuit realized as an acyclic diffusion network.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    pub network: SocialNetwork,
    pub base: BasePairHandle,
    pub input_pairs: Vec<DualPair>,
    /// Sink-layer pairs, one per circuit output.
    pub output_pairs: Vec<DualPair>,
    /// Pair implementing each gate of the layered circuit.
    pub gate_pairs: Vec<DualPair>,
    /// Every dual pair with its role and layer, excluding the base pair.
    pub pairs: Vec<(PairRole, DualPair, usize)>,
    pub h: usize,
}

fn compile_with(layered: &LayeredCircuit, guard: bool) -> Result<CompiledCircuit> {
    let mut b = NetworkBuilder::new();
    let base = b.add_base_pair()?;
    let e = emit(&mut b, base, layered, guard, Sinks::Fresh)?;
    Ok(CompiledCircuit {
        network: b.build()?,
        base,
        input_pairs: e.input_pairs,
        output_pairs: e.output_pairs,
        gate_pairs: e.gate_pairs,
        pairs: e.pairs,
        h: e.h,
    })
}

/// Node numbering: base pair first, then input pairs, then one pair per
/// gate in layered order.
pub fn compile(layered: &LayeredCircuit) -> Result<CompiledCircuit> {
    compile_with(layered, false)
}

/// Like [`compile`], treating the last output as a halt flag that
/// invalidates every other output when raised. Adds one layer.
pub fn compile_guarded(layered: &LayeredCircuit) -> Result<CompiledCircuit> {
    compile_with(layered, true)
}

/// `{"base_pair": [a,b], "input_pairs": [..], "output_pairs": [..], "h": h}`
#[derive(Debug, Clone, Serialize)]
pub struct CompileMap {
    pub base_pair: [NodeId; 2],
    pub input_pairs: Vec<[NodeId; 2]>,
    pub output_pairs: Vec<[NodeId; 2]>,
    pub h: usize,
}

impl CompiledCircuit {
    pub fn map(&self) -> CompileMap {
        CompileMap {
            base_pair: self.base.pair().nodes(),
            input_pairs: self.input_pairs.iter().map(DualPair::nodes).collect(),
            output_pairs: self.output_pairs.iter().map(DualPair::nodes).collect(),
            h: self.h,
        }
    }

    /// Base pair `(1,0)`, inputs encoding `x`, every other node `fill`.
    pub fn source_labelling(&self, x: &[bool], fill: bool) -> Result<Labelling> {
        if x.len() != self.input_pairs.len() {
            return Err(Error::SizeMismatch {
                expected: self.input_pairs.len(),
                got: x.len(),
            });
        }
        let n = self.network.node_count();
        let mut f = if fill { Labelling::ones(n) } else { Labelling::zeros(n) };
        self.base.pair().encode(&mut f, true);
        for (p, &v) in self.input_pairs.iter().zip(x) {
            p.encode(&mut f, v);
        }
        Ok(f)
    }

    fn sink_nodes(&self) -> BTreeSet<NodeId> {
        self.output_pairs.iter().flat_map(DualPair::nodes).collect()
    }
}

/// Output pair values `h` steps after labelling the inputs with `x`.
pub fn simulate_compiled_raw(cc: &CompiledCircuit, x: &[bool]) -> Result<Vec<PairValue>> {
    let mut f = cc.source_labelling(x, false)?;
    for _ in 0..cc.h {
        f = synchronous_update(&cc.network, &f)?;
    }
    Ok(cc.output_pairs.iter().map(|&p| pair_value(&f, p)).collect())
}

/// Decoded outputs after `h` steps; fails if any output pair is invalid.
pub fn simulate_compiled(cc: &CompiledCircuit, x: &[bool]) -> Result<Vec<bool>> {
    simulate_compiled_raw(cc, x)?
        .into_iter()
        .enumerate()
        .map(|(index, v)| v.as_bool().ok_or(Error::InvalidOutput { index }))
        .collect()
}

/// Fixed point of the compiled network with its sink layer removed, when
/// the source pairs encode `s`.
#[derive(Debug, Clone)]
pub struct AuxiliaryLabelling {
    pub subnetwork: SocialNetwork,
    /// Original node id of each subnetwork node.
    pub node_map: Vec<NodeId>,
    pub labelling: Labelling,
    /// Updates needed to reach the fixed point.
    pub steps: u64,
}

impl AuxiliaryLabelling {
    /// Value of an original-network node, `None` for sink nodes.
    pub fn value_of(&self, node: NodeId) -> Option<bool> {
        self.node_map
            .binary_search(&node)
            .ok()
            .map(|k| self.labelling.get(k))
    }
}

pub fn auxiliary_labelling(cc: &CompiledCircuit, s: &[bool]) -> Result<AuxiliaryLabelling> {
    auxiliary_labelling_with_fill(cc, s, false)
}

/// [`auxiliary_labelling`] starting from non-source nodes set to `fill`.
pub fn auxiliary_labelling_with_fill(
    cc: &CompiledCircuit,
    s: &[bool],
    fill: bool,
) -> Result<AuxiliaryLabelling> {
    let start = cc.source_labelling(s, fill)?;
    let sinks = cc.sink_nodes();
    let keep: BTreeSet<NodeId> = (0..cc.network.node_count())
        .filter(|i| !sinks.contains(i))
        .collect();
    let (subnetwork, node_map) = induced_subnetwork(&cc.network, &keep)?;
    let initial = Labelling::from_fn(node_map.len(), |k| start.get(node_map[k]));
    let result = run(&subnetwork, &initial, &RunOptions::default())?;
    match result.outcome {
        ConvergenceOutcome::Converged { steps, limit } => Ok(AuxiliaryLabelling {
            subnetwork,
            node_map,
            labelling: limit,
            steps,
        }),
        _ => Err(Error::Cyclic),
    }
}
