use std::collections::{HashMap, HashSet};

use super::ir::{Circuit, Gate, Op, Ref};
use crate::error::Result;

/// A circuit in which every gate sits exactly one layer above each of its
/// arguments, so all input-to-output paths have length `h`.
///
/// Inputs are layer 0 and every output is a distinct gate at layer `h`.
/// Constant gates sit at layer 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredCircuit {
    /// Padded circuit; gates appear in topological order.
    pub circuit: Circuit,
    /// Layer of each gate of `circuit`.
    pub layers: Vec<usize>,
    pub h: usize,
    /// Original gate id each padded gate implements; `None` for padding.
    pub origin: Vec<Option<usize>>,
}

impl LayeredCircuit {
    pub fn layer_of(&self, r: Ref) -> usize {
        match r {
            Ref::Input(_) => 0,
            Ref::Gate(i) => self.layers[i],
        }
    }
}

struct Padder {
    gates: Vec<Gate>,
    layers: Vec<usize>,
    origin: Vec<Option<usize>>,
    delayed: HashMap<(Ref, usize), Ref>,
}

impl Padder {
    fn push(&mut self, op: Op, args: Vec<Ref>, layer: usize, origin: Option<usize>) -> Ref {
        let id = self.gates.len();
        self.gates.push(Gate { id, op, args });
        self.layers.push(layer);
        self.origin.push(origin);
        Ref::Gate(id)
    }

    fn layer(&self, r: Ref) -> usize {
        match r {
            Ref::Input(_) => 0,
            Ref::Gate(i) => self.layers[i],
        }
    }

    /// `r` delayed through a shared NOP chain until it reaches `layer`.
    fn delay(&mut self, r: Ref, layer: usize) -> Ref {
        let own = self.layer(r);
        debug_assert!(own <= layer);
        if own == layer {
            return r;
        }
        if let Some(&d) = self.delayed.get(&(r, layer)) {
            return d;
        }
        let prev = self.delay(r, layer - 1);
        let d = self.push(Op::Nop, vec![prev], layer, None);
        self.delayed.insert((r, layer), d);
        d
    }
}

/// Pads a circuit with NOP gates so that all paths from inputs to outputs
/// have the same length. Gates no output depends on are dropped.
pub fn layerize(circuit: &Circuit) -> Result<LayeredCircuit> {
    let order = circuit.validate()?;

    let mut live = vec![false; circuit.gates.len()];
    let mut stack: Vec<usize> = circuit
        .outputs
        .iter()
        .filter_map(|r| match r {
            Ref::Gate(i) => Some(*i),
            Ref::Input(_) => None,
        })
        .collect();
    while let Some(g) = stack.pop() {
        if std::mem::replace(&mut live[g], true) {
            continue;
        }
        for a in &circuit.gates[g].args {
            if let Ref::Gate(d) = a {
                stack.push(*d);
            }
        }
    }

    let mut depth = vec![0usize; circuit.gates.len()];
    for &g in &order {
        let deepest = circuit.gates[g]
            .args
            .iter()
            .map(|a| match a {
                Ref::Input(_) => 0,
                Ref::Gate(d) => depth[*d],
            })
            .max()
            .unwrap_or(0);
        depth[g] = deepest + 1;
    }
    let h = circuit
        .outputs
        .iter()
        .map(|r| match r {
            Ref::Input(_) => 1,
            Ref::Gate(i) => depth[*i],
        })
        .max()
        .unwrap_or(0);

    let mut pad = Padder {
        gates: Vec::new(),
        layers: Vec::new(),
        origin: Vec::new(),
        delayed: HashMap::new(),
    };
    let mut mapped: Vec<Option<Ref>> = vec![None; circuit.gates.len()];
    let map = |mapped: &[Option<Ref>], r: Ref| match r {
        Ref::Input(j) => Ref::Input(j),
        Ref::Gate(i) => mapped[i].expect("arguments precede their gate"),
    };
    for &g in order.iter().filter(|&&g| live[g]) {
        let gate = &circuit.gates[g];
        let layer = depth[g];
        let args: Vec<Ref> = gate
            .args
            .iter()
            .map(|&a| {
                let a = map(&mapped, a);
                pad.delay(a, layer - 1)
            })
            .collect();
        mapped[g] = Some(pad.push(gate.op, args, layer, Some(g)));
    }

    let mut used = HashSet::new();
    let mut outputs = Vec::with_capacity(circuit.outputs.len());
    for &r in &circuit.outputs {
        let mut out = pad.delay(map(&mapped, r), h);
        if !used.insert(out) {
            // Each output needs its own sink gate.
            let Ref::Gate(i) = out else { unreachable!("h >= 1 puts outputs on gates") };
            let twin = pad.gates[i].clone();
            out = pad.push(twin.op, twin.args, h, pad.origin[i]);
            used.insert(out);
        }
        outputs.push(out);
    }

    Ok(LayeredCircuit {
        circuit: Circuit {
            input_count: circuit.input_count,
            gates: pad.gates,
            outputs,
        },
        layers: pad.layers,
        h,
        origin: pad.origin,
    })
}
