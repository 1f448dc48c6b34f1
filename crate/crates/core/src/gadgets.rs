//! Dual-rail signals and the one-step logic gadgets built from them.
//!
//! A signal is carried by a [`DualPair`] of nodes: `(1,0)` is true, `(0,1)` is
//! false, and agreement marks the pair invalid. Every gadget output node
//! copies one influencer or takes the majority of three, so outputs at time
//! `t+1` depend only on the gadget inputs at time `t`.

use std::collections::HashSet;

use serde::Serialize;

use crate::dynamics::Labelling;
use crate::error::{Error, Result};
use crate::netcore::{Annotations, NodeId, SocialNetwork, ValveAnnotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DualPair {
    pub true_rail: NodeId,
    pub false_rail: NodeId,
}

impl DualPair {
    pub fn nodes(&self) -> [NodeId; 2] {
        [self.true_rail, self.false_rail]
    }

    /// Writes the valid encoding of `value` into `f`.
    pub fn encode(&self, f: &mut Labelling, value: bool) {
        f.set(self.true_rail, value);
        f.set(self.false_rail, !value);
    }
}

/// The unique constant pair, held at `(1,0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasePairHandle(DualPair);

impl BasePairHandle {
    pub fn pair(&self) -> DualPair {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairValue {
    True,
    False,
    Invalid,
}

impl PairValue {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            PairValue::True => Some(true),
            PairValue::False => Some(false),
            PairValue::Invalid => None,
        }
    }
}

pub fn pair_value(f: &Labelling, p: DualPair) -> PairValue {
    match (f.get(p.true_rail), f.get(p.false_rail)) {
        (true, false) => PairValue::True,
        (false, true) => PairValue::False,
        _ => PairValue::Invalid,
    }
}

/// What a builder-allocated node is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Base,
    Rail,
    /// Copies one rail of a monitored dual pair into the fuse line.
    Intermediate,
    Fuse,
    ValveP,
    ValveQ,
    Alarm,
}

/// Incrementally assembles a network out of gadgets.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    roles: Vec<Role>,
    edges: Vec<(NodeId, NodeId)>,
    edge_set: HashSet<(NodeId, NodeId)>,
    base: Option<BasePairHandle>,
    dual_pairs: Vec<DualPair>,
    registered: HashSet<DualPair>,
    fuse_pairs: Vec<[NodeId; 2]>,
    valve: Option<ValveAnnotation>,
    alarm: Vec<NodeId>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.roles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn role(&self, i: NodeId) -> Option<Role> {
        self.roles.get(i).copied()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// Registered dual pairs in allocation order, excluding the base pair.
    pub fn dual_pairs(&self) -> &[DualPair] {
        &self.dual_pairs
    }

    pub fn base_pair(&self) -> Option<BasePairHandle> {
        self.base
    }

    pub fn add_node(&mut self, role: Role) -> NodeId {
        self.roles.push(role);
        self.roles.len() - 1
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        let n = self.node_count();
        for node in [u, v] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.edge_set.insert((u, v)) {
            return Err(Error::DuplicateEdge(u, v));
        }
        self.edges.push((u, v));
        Ok(())
    }

    /// Two fresh rail nodes registered as a dual pair, with no influencers yet.
    pub fn new_pair(&mut self) -> DualPair {
        let p = DualPair {
            true_rail: self.add_node(Role::Rail),
            false_rail: self.add_node(Role::Rail),
        };
        self.dual_pairs.push(p);
        self.registered.insert(p);
        p
    }

    pub fn add_base_pair(&mut self) -> Result<BasePairHandle> {
        if self.base.is_some() {
            return Err(Error::DuplicateBasePair);
        }
        let handle = BasePairHandle(DualPair {
            true_rail: self.add_node(Role::Base),
            false_rail: self.add_node(Role::Base),
        });
        self.base = Some(handle);
        Ok(handle)
    }

    fn check_pair(&self, p: DualPair) -> Result<()> {
        if self.registered.contains(&p) || self.base.map(|b| b.0) == Some(p) {
            Ok(())
        } else {
            Err(Error::DanglingPair(p.true_rail, p.false_rail))
        }
    }

    fn check_base(&self, base: BasePairHandle) -> Result<()> {
        if self.base == Some(base) {
            Ok(())
        } else {
            Err(Error::MissingBasePair)
        }
    }

    fn wire(&mut self, into: NodeId, from: &[NodeId]) -> Result<()> {
        for &u in from {
            self.add_edge(u, into)?;
        }
        Ok(())
    }

    pub fn add_not(&mut self, input: DualPair) -> Result<DualPair> {
        self.check_pair(input)?;
        let out = self.new_pair();
        self.wire_not(input, out)?;
        Ok(out)
    }

    pub(crate) fn wire_not(&mut self, input: DualPair, out: DualPair) -> Result<()> {
        self.wire(out.true_rail, &[input.false_rail])?;
        self.wire(out.false_rail, &[input.true_rail])
    }

    pub fn add_nop(&mut self, input: DualPair) -> Result<DualPair> {
        self.check_pair(input)?;
        let out = self.new_pair();
        self.wire_nop(input, out)?;
        Ok(out)
    }

    pub(crate) fn wire_nop(&mut self, input: DualPair, out: DualPair) -> Result<()> {
        self.wire(out.true_rail, &[input.true_rail])?;
        self.wire(out.false_rail, &[input.false_rail])
    }

    /// True rail: majority of both input true rails and the constant-0 base
    /// rail. False rail: majority of both input false rails and the constant-1
    /// base rail.
    pub fn add_and(&mut self, a: DualPair, b: DualPair, base: BasePairHandle) -> Result<DualPair> {
        self.check_base(base)?;
        self.check_pair(a)?;
        self.check_pair(b)?;
        let out = self.new_pair();
        self.wire_and(a, b, base, out)?;
        Ok(out)
    }

    pub(crate) fn wire_and(
        &mut self,
        a: DualPair,
        b: DualPair,
        base: BasePairHandle,
        out: DualPair,
    ) -> Result<()> {
        let base = base.0;
        self.wire(out.true_rail, &[a.true_rail, b.true_rail, base.false_rail])?;
        self.wire(out.false_rail, &[a.false_rail, b.false_rail, base.true_rail])
    }

    /// Dual of [`NetworkBuilder::add_and`]: the base rails swap roles.
    pub fn add_or(&mut self, a: DualPair, b: DualPair, base: BasePairHandle) -> Result<DualPair> {
        self.check_base(base)?;
        self.check_pair(a)?;
        self.check_pair(b)?;
        let out = self.new_pair();
        self.wire_or(a, b, base, out)?;
        Ok(out)
    }

    pub(crate) fn wire_or(
        &mut self,
        a: DualPair,
        b: DualPair,
        base: BasePairHandle,
        out: DualPair,
    ) -> Result<()> {
        let base = base.0;
        self.wire(out.true_rail, &[a.true_rail, b.true_rail, base.true_rail])?;
        self.wire(out.false_rail, &[a.false_rail, b.false_rail, base.false_rail])
    }

    /// Copies `input` while `flag` is false; drives both output rails to 1
    /// while `flag` is true, making the output pair invalid.
    pub fn add_halt_guard(
        &mut self,
        input: DualPair,
        flag: DualPair,
        base: BasePairHandle,
    ) -> Result<DualPair> {
        self.check_base(base)?;
        self.check_pair(input)?;
        self.check_pair(flag)?;
        let out = self.new_pair();
        self.wire_halt_guard(input, flag, base, out)?;
        Ok(out)
    }

    pub(crate) fn wire_halt_guard(
        &mut self,
        input: DualPair,
        flag: DualPair,
        base: BasePairHandle,
        out: DualPair,
    ) -> Result<()> {
        let base = base.0;
        self.wire(out.true_rail, &[input.true_rail, flag.true_rail, base.true_rail])?;
        self.wire(out.false_rail, &[input.false_rail, flag.true_rail, base.true_rail])
    }

    pub(crate) fn register_fuse_pair(&mut self, pair: [NodeId; 2]) {
        self.fuse_pairs.push(pair);
    }

    pub(crate) fn set_valve(&mut self, p: [NodeId; 2], q: [NodeId; 2]) {
        self.valve = Some(ValveAnnotation { p, q });
    }

    pub(crate) fn set_alarm(&mut self, alarm: Vec<NodeId>) {
        self.alarm = alarm;
    }

    pub fn annotations(&self) -> Annotations {
        Annotations {
            dual_pairs: self.dual_pairs.iter().map(DualPair::nodes).collect(),
            base_pair: self.base.map(|b| b.0.nodes()),
            fuse_pairs: self.fuse_pairs.clone(),
            valve: self.valve,
            alarm: self.alarm.clone(),
        }
    }

    pub fn build(&self) -> Result<SocialNetwork> {
        SocialNetwork::with_annotations(
            self.node_count(),
            self.edges.iter().copied(),
            self.annotations(),
        )
    }
}
