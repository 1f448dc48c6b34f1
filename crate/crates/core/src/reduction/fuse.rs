use crate::error::{Error, Result};
use crate::gadgets::{DualPair, NetworkBuilder, Role};
use crate::netcore::NodeId;

/// Two fuse-line nodes sharing the same influencers.
pub type FusePair = [NodeId; 2];

/// A fuse pair together with the four intermediates feeding it from its
/// monitored dual pair: two copies of the true rail, then two of the false rail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuseStage {
    pub monitored: DualPair,
    pub intermediates: [NodeId; 4],
    pub pair: FusePair,
}

/// Builds one fuse pair per monitored dual pair, chained in order.
pub fn build_fuse_line(b: &mut NetworkBuilder, monitored: &[DualPair]) -> Result<Vec<FuseStage>> {
    if monitored.is_empty() {
        return Err(Error::EmptyFuseLine);
    }
    let mut stages: Vec<FuseStage> = Vec::with_capacity(monitored.len());
    for &dual in monitored {
        let sources = [dual.true_rail, dual.true_rail, dual.false_rail, dual.false_rail];
        let mut intermediates = [0; 4];
        for (slot, rail) in intermediates.iter_mut().zip(sources) {
            *slot = b.add_node(Role::Intermediate);
            b.add_edge(rail, *slot)?;
        }
        let pair = [b.add_node(Role::Fuse), b.add_node(Role::Fuse)];
        for &x in &pair {
            for &i in &intermediates {
                b.add_edge(i, x)?;
            }
            if let Some(prev) = stages.last() {
                for &p in &prev.pair {
                    b.add_edge(p, x)?;
                }
            }
        }
        b.register_fuse_pair(pair);
        stages.push(FuseStage {
            monitored: dual,
            intermediates,
            pair,
        });
    }
    Ok(stages)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valve {
    pub p: [NodeId; 2],
    pub q: [NodeId; 2],
    /// `2k` nodes forming a clique.
    pub alarm: Vec<NodeId>,
}

/// Attaches the valve pairs `P`, `Q` and a `2k`-node alarm clique behind
/// the last fuse pair.
pub fn build_valve_alarm(b: &mut NetworkBuilder, last_fuse: FusePair, k: usize) -> Result<Valve> {
    if k < 2 {
        return Err(Error::AlarmTooSmall(k));
    }
    let p = [b.add_node(Role::ValveP), b.add_node(Role::ValveP)];
    let q = [b.add_node(Role::ValveQ), b.add_node(Role::ValveQ)];
    let alarm: Vec<NodeId> = (0..2 * k).map(|_| b.add_node(Role::Alarm)).collect();
    for i in 0..2 {
        b.add_edge(last_fuse[i], p[i])?;
        b.add_edge(p[i], q[i])?;
    }
    for &a in &alarm {
        for &x in &q {
            b.add_edge(x, a)?;
        }
        for &c in &alarm {
            if c != a {
                b.add_edge(c, a)?;
            }
        }
        for &x in &p {
            b.add_edge(a, x)?;
        }
    }
    b.set_valve(p, q);
    b.set_alarm(alarm.clone());
    Ok(Valve { p, q, alarm })
}

/// Edges from every alarm node to both rails of each pair.
pub(crate) fn wire_alarm(b: &mut NetworkBuilder, alarm: &[NodeId], pairs: &[DualPair]) -> Result<()> {
    for pair in pairs {
        for rail in pair.nodes() {
            for &a in alarm {
                b.add_edge(a, rail)?;
            }
        }
    }
    Ok(())
}

/// One dual pair monitored by one fuse pair, followed by the valve and an
/// alarm that also drives the dual pair.
#[derive(Debug, Clone)]
pub struct AlarmRig {
    pub network: crate::netcore::SocialNetwork,
    pub stage: FuseStage,
    pub valve: Valve,
}

pub fn alarm_rig(k: usize) -> Result<AlarmRig> {
    let mut b = NetworkBuilder::new();
    let dual = b.new_pair();
    let stages = build_fuse_line(&mut b, &[dual])?;
    let valve = build_valve_alarm(&mut b, stages[0].pair, k)?;
    wire_alarm(&mut b, &valve.alarm, &[dual])?;
    Ok(AlarmRig {
        network: b.build()?,
        stage: stages[0],
        valve,
    })
}
