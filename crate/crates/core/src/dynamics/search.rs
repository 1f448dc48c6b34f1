use rayon::prelude::*;

use super::Labelling;
use crate::error::{Error, Result};
use crate::netcore::SocialNetwork;

/// Default largest network searched exhaustively.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

/// Hard limit imposed by the 64-bit state encoding.
const MAX_MASK_NODES: usize = 63;

/// Packed form of a network with at most 63 agents: one influencer mask per node.
#[derive(Debug, Clone)]
pub struct MaskNetwork {
    n: usize,
    masks: Vec<u64>,
    degrees: Vec<u32>,
}

impl MaskNetwork {
    pub fn new(net: &SocialNetwork) -> Result<Self> {
        let n = net.node_count();
        if n > MAX_MASK_NODES {
            return Err(Error::ExhaustiveCap {
                n,
                cap: MAX_MASK_NODES,
            });
        }
        let masks: Vec<u64> = (0..n)
            .map(|i| {
                net.influencers_unchecked(i)
                    .iter()
                    .fold(0u64, |m, &j| m | 1 << j)
            })
            .collect();
        let degrees = masks.iter().map(|m| m.count_ones()).collect();
        Ok(MaskNetwork { n, masks, degrees })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn step(&self, state: u64) -> u64 {
        let mut out = 0u64;
        for i in 0..self.n {
            let ones = (self.masks[i] & state).count_ones();
            let own = state >> i & 1 == 1;
            let agree = if own { ones } else { self.degrees[i] - ones };
            let flip = self.degrees[i] - agree > agree;
            if own ^ flip {
                out |= 1 << i;
            }
        }
        out
    }

    /// Brent cycle detection; returns `(preperiod, period)`.
    pub fn orbit(&self, start: u64) -> (u64, u64) {
        let mut power = 1u64;
        let mut period = 1u64;
        let mut tortoise = start;
        let mut hare = self.step(start);
        while tortoise != hare {
            if power == period {
                tortoise = hare;
                power *= 2;
                period = 0;
            }
            hare = self.step(hare);
            period += 1;
        }
        let mut tortoise = start;
        let mut hare = start;
        for _ in 0..period {
            hare = self.step(hare);
        }
        let mut preperiod = 0;
        while tortoise != hare {
            tortoise = self.step(tortoise);
            hare = self.step(hare);
            preperiod += 1;
        }
        (preperiod, period)
    }

    pub fn converges(&self, start: u64) -> bool {
        self.orbit(start).1 == 1
    }

    /// Whether the state after `bound` updates is stable.
    pub fn converges_within(&self, start: u64, bound: u64) -> bool {
        let mut x = start;
        for _ in 0..bound {
            let y = self.step(x);
            if y == x {
                return true;
            }
            x = y;
        }
        self.step(x) == x
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Refuse networks with more agents than this.
    pub exhaustive_cap: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Return the numerically smallest canonical witness instead of the first found.
    pub deterministic: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            jobs: None,
            deterministic: false,
        }
    }
}

fn checked_mask_network(net: &SocialNetwork, cap: usize) -> Result<MaskNetwork> {
    let n = net.node_count();
    let cap = cap.min(MAX_MASK_NODES);
    if n > cap {
        return Err(Error::ExhaustiveCap { n, cap });
    }
    MaskNetwork::new(net)
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Labellings with agent 0 holding opinion 0, one per complementary pair.
/// The update commutes with complementation, so this covers all of them.
fn canonical_count(n: usize) -> u64 {
    if n == 0 {
        1
    } else {
        1u64 << (n - 1)
    }
}

#[inline]
fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Searches for a labelling from which the network never converges.
///
/// Enumerates canonical labellings in Gray-code order across parallel
/// chunks. With `deterministic` set, enumerates in numeric order and
/// returns the smallest canonical witness.
pub fn guarantee_search(net: &SocialNetwork, options: &SearchOptions) -> Result<Option<Labelling>> {
    let mask = checked_mask_network(net, options.exhaustive_cap)?;
    let n = mask.node_count();
    let count = canonical_count(n);
    let canonical = |i: u64| if n == 0 { 0 } else { i << 1 };

    let hit = with_pool(options.jobs, || {
        if options.deterministic {
            (0..count)
                .into_par_iter()
                .map(canonical)
                .find_first(|&x| !mask.converges(x))
        } else {
            (0..count)
                .into_par_iter()
                .map(|i| canonical(gray(i)))
                .find_any(|&x| !mask.converges(x))
        }
    });
    Ok(hit.map(|x| Labelling::from_u64(n, x)))
}

/// True iff every labelling is stable after at most `bound` updates.
pub fn verify_bound(net: &SocialNetwork, bound: u64, options: &SearchOptions) -> Result<bool> {
    let mask = checked_mask_network(net, options.exhaustive_cap)?;
    let n = mask.node_count();
    let count = canonical_count(n);
    Ok(with_pool(options.jobs, || {
        (0..count)
            .into_par_iter()
            .all(|i| mask.converges_within(if n == 0 { 0 } else { i << 1 }, bound))
    }))
}
