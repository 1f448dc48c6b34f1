use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{BuildHasher, BuildHasherDefault};

use serde::Serialize;

use super::update::step_into;
use super::Labelling;
use crate::error::{Error, Result};
use crate::netcore::SocialNetwork;

/// Default number of visited states kept in memory before switching to
/// constant-memory cycle detection.
pub const DEFAULT_MEMORY_CAP: usize = 1 << 26;

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Maximum number of synchronous updates; `None` runs until the outcome is known.
    pub max_steps: Option<u64>,
    /// Maximum number of states held in the visited index.
    pub memory_cap: usize,
    /// Past the cap, continue with Brent's algorithm instead of failing.
    pub fallback: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_steps: None,
            memory_cap: DEFAULT_MEMORY_CAP,
            fallback: true,
        }
    }
}

impl RunOptions {
    pub fn with_budget(max_steps: u64) -> Self {
        RunOptions {
            max_steps: Some(max_steps),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum ConvergenceOutcome {
    /// `limit` is stable and first reached after `steps` updates.
    Converged { steps: u64, limit: Labelling },
    /// The state at time `preperiod` recurs every `period >= 2` updates.
    #[serde(rename = "cycle")]
    Cycles {
        preperiod: u64,
        period: u64,
        witness: Labelling,
    },
    /// The update budget ran out first.
    Undetermined { budget: u64 },
}

impl ConvergenceOutcome {
    pub fn is_converged(&self) -> bool {
        matches!(self, ConvergenceOutcome::Converged { .. })
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self, ConvergenceOutcome::Cycles { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryEnd {
    /// The last state is stable.
    FixedPoint,
    /// The last state equals `states[repeat_of]`.
    CycleClosed { repeat_of: usize },
    BudgetExhausted,
    /// Only a prefix was kept; the outcome came from constant-memory detection.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// `states[t]` is the labelling at time `t`.
    pub states: Vec<Labelling>,
    pub end: TrajectoryEnd,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub trajectory: Trajectory,
    pub outcome: ConvergenceOutcome,
    /// Number of synchronous updates computed.
    pub updates: u64,
}

type Hasher = BuildHasherDefault<DefaultHasher>;

/// Iterates the synchronous update from `f` until a fixed point or an exact
/// repeat is found.
pub fn run(net: &SocialNetwork, f: &Labelling, options: &RunOptions) -> Result<RunResult> {
    f.check_len(net.node_count())?;
    let hasher = Hasher::default();
    let budget = options.max_steps.unwrap_or(u64::MAX);

    let mut states = vec![f.clone()];
    let mut index: HashMap<u64, Vec<usize>, Hasher> = HashMap::default();
    index.entry(hasher.hash_one(f)).or_default().push(0);
    let mut next = f.clone();
    let mut updates = 0u64;

    while updates < budget {
        let t = states.len() - 1;
        step_into(net, &states[t], &mut next);
        updates += 1;

        if next == states[t] {
            let limit = states[t].clone();
            return Ok(RunResult {
                trajectory: Trajectory {
                    states,
                    end: TrajectoryEnd::FixedPoint,
                },
                outcome: ConvergenceOutcome::Converged {
                    steps: t as u64,
                    limit,
                },
                updates,
            });
        }

        let h = hasher.hash_one(&next);
        if let Some(&i) = index
            .get(&h)
            .and_then(|hits| hits.iter().find(|&&i| states[i] == next))
        {
            let witness = states[i].clone();
            states.push(next);
            return Ok(RunResult {
                trajectory: Trajectory {
                    states,
                    end: TrajectoryEnd::CycleClosed { repeat_of: i },
                },
                outcome: ConvergenceOutcome::Cycles {
                    preperiod: i as u64,
                    period: (t + 1 - i) as u64,
                    witness,
                },
                updates,
            });
        }

        if states.len() >= options.memory_cap {
            if !options.fallback {
                return Err(Error::MemoryCap {
                    cap: options.memory_cap,
                });
            }
            return Ok(brent_tail(net, states, next, updates, budget));
        }
        index.entry(h).or_default().push(states.len());
        states.push(next.clone());
    }

    Ok(RunResult {
        trajectory: Trajectory {
            states,
            end: TrajectoryEnd::BudgetExhausted,
        },
        outcome: ConvergenceOutcome::Undetermined { budget },
        updates,
    })
}

/// Constant-memory continuation from `current` (the state after the stored prefix).
fn brent_tail(
    net: &SocialNetwork,
    states: Vec<Labelling>,
    current: Labelling,
    mut updates: u64,
    budget: u64,
) -> RunResult {
    let undetermined = |states: Vec<Labelling>, updates| RunResult {
        trajectory: Trajectory {
            states,
            end: TrajectoryEnd::Truncated,
        },
        outcome: ConvergenceOutcome::Undetermined { budget },
        updates,
    };
    let mut scratch = current.clone();
    let mut advance = |x: &mut Labelling, updates: &mut u64| {
        step_into(net, x, &mut scratch);
        std::mem::swap(x, &mut scratch);
        *updates += 1;
    };

    // Cycle length.
    let mut power = 1u64;
    let mut period = 1u64;
    let mut tortoise = current.clone();
    let mut hare = current;
    advance(&mut hare, &mut updates);
    while tortoise != hare {
        if updates >= budget {
            return undetermined(states, updates);
        }
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        advance(&mut hare, &mut updates);
        period += 1;
    }

    // First index of the cycle, restarting from the initial state.
    let mut tortoise = states[0].clone();
    let mut hare = states[0].clone();
    for _ in 0..period {
        advance(&mut hare, &mut updates);
    }
    let mut preperiod = 0u64;
    while tortoise != hare {
        if updates >= budget {
            return undetermined(states, updates);
        }
        advance(&mut tortoise, &mut updates);
        advance(&mut hare, &mut updates);
        preperiod += 1;
    }

    let outcome = if period == 1 {
        ConvergenceOutcome::Converged {
            steps: preperiod,
            limit: tortoise,
        }
    } else {
        ConvergenceOutcome::Cycles {
            preperiod,
            period,
            witness: tortoise,
        }
    };
    RunResult {
        trajectory: Trajectory {
            states,
            end: TrajectoryEnd::Truncated,
        },
        outcome,
        updates,
    }
}
