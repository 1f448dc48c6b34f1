use serde::Serialize;

use super::fuse::{build_fuse_line, build_valve_alarm, wire_alarm, FuseStage, Valve};
use super::step_circuit::step_circuit;
use super::tm::{TMConfig, ToyTM};
use crate::circuit::{emit, layerize, LayeredCircuit, PairRole, Sinks};
use crate::dynamics::{run, ConvergenceOutcome, Labelling, RunOptions};
use crate::error::{Error, Result};
use crate::gadgets::{pair_value, BasePairHandle, DualPair, NetworkBuilder, PairValue};
use crate::netcore::{NodeId, SocialNetwork};

/// The compiled step network closed into a loop, monitored by a fuse line
/// that ends in the valve and alarm.
#[derive(Debug, Clone)]
pub struct MainNetwork {
    pub network: SocialNetwork,
    pub tm: ToyTM,
    /// Length of every cycle through the circuit part.
    pub h: usize,
    pub k: usize,
    pub base: BasePairHandle,
    /// Source pair of each configuration bit; the sinks write into these.
    pub source_pairs: Vec<DualPair>,
    /// Every circuit dual pair except the base pair, with its role and layer.
    pub circuit_pairs: Vec<(PairRole, DualPair, usize)>,
    pub fuse: Vec<FuseStage>,
    pub valve: Valve,
    layered: LayeredCircuit,
}

/// `{"h": h, "k": k, "n_config": n, "pair_map": [[t, f], ...]}`
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub h: usize,
    pub k: usize,
    pub n_config: usize,
    /// Source pair of each configuration bit.
    pub pair_map: Vec<[NodeId; 2]>,
}

pub fn assemble_main_network(tm: &ToyTM, k: usize) -> Result<MainNetwork> {
    if k < 2 {
        return Err(Error::AlarmTooSmall(k));
    }
    let layered = layerize(&step_circuit(tm).with_flag_output())?;
    let mut b = NetworkBuilder::new();
    let base = b.add_base_pair()?;
    let e = emit(&mut b, base, &layered, true, Sinks::IntoInputs)?;
    let monitored: Vec<DualPair> = e.pairs.iter().map(|&(_, p, _)| p).collect();
    let fuse = build_fuse_line(&mut b, &monitored)?;
    let last = fuse.last().expect("nonempty fuse line").pair;
    let valve = build_valve_alarm(&mut b, last, k)?;
    let mut driven = vec![base.pair()];
    driven.extend(&monitored);
    wire_alarm(&mut b, &valve.alarm, &driven)?;
    Ok(MainNetwork {
        network: b.build()?,
        tm: tm.clone(),
        h: e.h,
        k,
        base,
        source_pairs: e.input_pairs,
        circuit_pairs: e.pairs,
        fuse,
        valve,
        layered,
    })
}

impl MainNetwork {
    pub fn manifest(&self) -> Manifest {
        Manifest {
            h: self.h,
            k: self.k,
            n_config: self.source_pairs.len(),
            pair_map: self.source_pairs.iter().map(DualPair::nodes).collect(),
        }
    }

    /// Labelling satisfying the start conditions with the sources encoding `s`.
    pub fn initial_labelling(&self, s: &TMConfig) -> Result<Labelling> {
        self.initial_labelling_bits(&s.encode(&self.tm)?)
    }

    /// Like [`MainNetwork::initial_labelling`] for an arbitrary bit string,
    /// including malformed encodings.
    pub fn initial_labelling_bits(&self, s: &[bool]) -> Result<Labelling> {
        let values = self.layered.circuit.gate_values(s)?;
        let mut f = Labelling::zeros(self.network.node_count());
        self.base.pair().encode(&mut f, true);
        for &(role, pair, _) in &self.circuit_pairs {
            let v = match role {
                PairRole::Input(j) => s[j],
                PairRole::Gate(g) => values[g],
                PairRole::Guard(_) => unreachable!("guards write into the sources"),
            };
            pair.encode(&mut f, v);
        }
        for stage in &self.fuse {
            for (i, &x) in stage.intermediates.iter().enumerate() {
                let rail = if i < 2 {
                    stage.monitored.true_rail
                } else {
                    stage.monitored.false_rail
                };
                f.set(x, f.get(rail));
            }
            f.set(stage.pair[0], true);
        }
        f.set(self.valve.p[0], true);
        f.set(self.valve.q[0], true);
        for (i, &a) in self.valve.alarm.iter().enumerate() {
            f.set(a, i >= self.k);
        }
        Ok(f)
    }

    /// Checks the four start conditions: circuit part at its auxiliary
    /// labelling, fuse and valve pairs valid, alarm evenly split, and two of
    /// every four intermediates at 0.
    pub fn check_initial_labelling(&self, f: &Labelling) -> Result<()> {
        f.check_len(self.network.node_count())?;
        let fail = |what: &str| Err(Error::InitialCondition(what.to_string()));
        let sources = self
            .decode_sources(f)
            .ok_or_else(|| Error::InitialCondition("(i): a source pair is invalid".into()))?;
        let expected = self.initial_labelling_bits(&sources)?;
        let circuit_nodes = std::iter::once(self.base.pair())
            .chain(self.circuit_pairs.iter().map(|&(_, p, _)| p))
            .flat_map(|p| p.nodes());
        for x in circuit_nodes {
            if f.get(x) != expected.get(x) {
                return fail("(i): circuit part is not the auxiliary labelling of its sources");
            }
        }
        let valid = |pair: [NodeId; 2]| f.get(pair[0]) != f.get(pair[1]);
        if !self.fuse.iter().all(|s| valid(s.pair)) || !valid(self.valve.p) || !valid(self.valve.q)
        {
            return fail("(ii): a fuse or valve pair is not valid");
        }
        let zeros = self.valve.alarm.iter().filter(|&&a| !f.get(a)).count();
        if zeros != self.k {
            return fail("(iii): alarm is not evenly split");
        }
        for stage in &self.fuse {
            if stage.intermediates.iter().filter(|&&x| !f.get(x)).count() != 2 {
                return fail("(iv): intermediates are not split two and two");
            }
        }
        Ok(())
    }

    pub fn source_values(&self, f: &Labelling) -> Vec<PairValue> {
        self.source_pairs.iter().map(|&p| pair_value(f, p)).collect()
    }

    /// Bits held by the source pairs, or `None` if any is invalid.
    pub fn decode_sources(&self, f: &Labelling) -> Option<Vec<bool>> {
        self.source_values(f).into_iter().map(PairValue::as_bool).collect()
    }

    /// Largest in-degree among circuit dual-pair nodes.
    pub fn max_pair_in_degree(&self) -> usize {
        std::iter::once(self.base.pair())
            .chain(self.circuit_pairs.iter().map(|&(_, p, _)| p))
            .flat_map(|p| p.nodes())
            .map(|x| self.network.influencers_unchecked(x).len())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum DemoVerdict {
    NonConvergent { preperiod: u64, period: u64 },
    Convergent { steps: u64, limit: Labelling },
    Undetermined { budget: u64 },
}

/// Runs the main network from the start labelling of `s`.
pub fn run_reduction_demo(mn: &MainNetwork, s: &TMConfig, budget: Option<u64>) -> Result<DemoVerdict> {
    let f = mn.initial_labelling(s)?;
    let options = RunOptions {
        max_steps: budget,
        ..RunOptions::default()
    };
    let result = run(&mn.network, &f, &options)?;
    Ok(match result.outcome {
        ConvergenceOutcome::Converged { steps, limit } => DemoVerdict::Convergent { steps, limit },
        ConvergenceOutcome::Cycles {
            preperiod, period, ..
        } => DemoVerdict::NonConvergent { preperiod, period },
        ConvergenceOutcome::Undetermined { budget } => DemoVerdict::Undetermined { budget },
    })
}
