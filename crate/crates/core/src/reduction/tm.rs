use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub write: bool,
    pub shift: Move,
    pub next: usize,
}

/// A deterministic single-tape machine over {0,1} with a fixed tape of
/// `tape_len` cells. A move off either end of the tape leaves the head where
/// it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyTM {
    states: Vec<String>,
    initial: usize,
    halting: Vec<bool>,
    tape_len: usize,
    /// Indexed by `2 * state + read`; `None` exactly on halting states.
    delta: Vec<Option<Transition>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionJson {
    state: String,
    read: u8,
    write: u8,
    #[serde(rename = "move")]
    shift: Move,
    next: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToyTmJson {
    states: Vec<String>,
    initial: String,
    halting: Vec<String>,
    tape_len: usize,
    delta: Vec<TransitionJson>,
}

fn bit(v: u8, what: &str) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::Machine(format!("{what} symbol must be 0 or 1, got {v}"))),
    }
}

/// One transition: `(state, read, write, move, next)`.
pub type Rule<'a> = (&'a str, u8, u8, Move, &'a str);

impl ToyTM {
    pub fn new(
        states: &[&str],
        initial: &str,
        halting: &[&str],
        tape_len: usize,
        rules: &[Rule<'_>],
    ) -> Result<Self> {
        let json = ToyTmJson {
            states: states.iter().map(|s| s.to_string()).collect(),
            initial: initial.to_string(),
            halting: halting.iter().map(|s| s.to_string()).collect(),
            tape_len,
            delta: rules
                .iter()
                .map(|&(state, read, write, shift, next)| TransitionJson {
                    state: state.into(),
                    read,
                    write,
                    shift,
                    next: next.into(),
                })
                .collect(),
        };
        Self::from_parts(json)
    }

    fn from_parts(json: ToyTmJson) -> Result<Self> {
        if json.states.is_empty() {
            return Err(Error::Machine("no states".into()));
        }
        if json.tape_len == 0 {
            return Err(Error::Machine("tape_len must be positive".into()));
        }
        let mut index = HashMap::new();
        for (i, s) in json.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(Error::Machine(format!("duplicate state {s:?}")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::Machine(format!("unknown state {s:?}")))
        };
        let initial = lookup(&json.initial)?;
        let mut halting = vec![false; json.states.len()];
        for s in &json.halting {
            halting[lookup(s)?] = true;
        }
        let mut delta = vec![None; 2 * json.states.len()];
        for t in &json.delta {
            let q = lookup(&t.state)?;
            if halting[q] {
                return Err(Error::Machine(format!(
                    "halting state {:?} has a transition",
                    t.state
                )));
            }
            let read = bit(t.read, "read")?;
            let slot = &mut delta[2 * q + read as usize];
            if slot.is_some() {
                return Err(Error::Machine(format!(
                    "two transitions for ({:?}, {})",
                    t.state, t.read
                )));
            }
            *slot = Some(Transition {
                write: bit(t.write, "write")?,
                shift: t.shift,
                next: lookup(&t.next)?,
            });
        }
        for (q, name) in json.states.iter().enumerate() {
            for read in 0..2 {
                if !halting[q] && delta[2 * q + read].is_none() {
                    return Err(Error::Machine(format!(
                        "no transition for ({name:?}, {read})"
                    )));
                }
            }
        }
        Ok(ToyTM {
            states: json.states,
            initial,
            halting,
            tape_len: json.tape_len,
            delta,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_parts(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        let mut delta = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            for read in 0..2u8 {
                if let Some(t) = self.delta[2 * q + read as usize] {
                    delta.push(TransitionJson {
                        state: name.clone(),
                        read,
                        write: t.write as u8,
                        shift: t.shift,
                        next: self.states[t.next].clone(),
                    });
                }
            }
        }
        let json = ToyTmJson {
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            halting: (0..self.states.len())
                .filter(|&q| self.halting[q])
                .map(|q| self.states[q].clone())
                .collect(),
            tape_len: self.tape_len,
            delta,
        };
        serde_json::to_string(&json).expect("machine serializes")
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_halting(&self, q: usize) -> bool {
        self.halting[q]
    }

    pub fn tape_len(&self) -> usize {
        self.tape_len
    }

    pub fn transition(&self, q: usize, read: bool) -> Option<Transition> {
        self.delta[2 * q + read as usize]
    }

    /// Length of a configuration encoding: one-hot state, one-hot head, tape.
    pub fn config_bits(&self) -> usize {
        self.states.len() + 2 * self.tape_len
    }

    /// Initial state, head on cell 0, blank tape.
    pub fn initial_config(&self) -> TMConfig {
        TMConfig {
            state: self.initial,
            head: 0,
            tape: vec![false; self.tape_len],
        }
    }

    /// Every configuration of the machine.
    pub fn all_configs(&self) -> impl Iterator<Item = TMConfig> + '_ {
        let m = self.tape_len;
        (0..self.states.len()).flat_map(move |state| {
            (0..m).flat_map(move |head| {
                (0..1u64 << m).map(move |t| TMConfig {
                    state,
                    head,
                    tape: (0..m).map(|j| t >> j & 1 == 1).collect(),
                })
            })
        })
    }

    /// Parses `STATE@HEAD:TAPE`, e.g. `right@0:010`.
    pub fn parse_config(&self, s: &str) -> Result<TMConfig> {
        let bad = || Error::Config(format!("expected STATE@HEAD:TAPE, got {s:?}"));
        let (state, rest) = s.split_once('@').ok_or_else(bad)?;
        let (head, tape) = rest.split_once(':').ok_or_else(bad)?;
        let state = self
            .state_index(state)
            .ok_or_else(|| Error::Config(format!("unknown state {state:?}")))?;
        let head = head.parse().map_err(|_| bad())?;
        let tape = tape
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        let c = TMConfig { state, head, tape };
        self.check_config(&c)?;
        Ok(c)
    }

    pub fn format_config(&self, c: &TMConfig) -> String {
        let tape: String = c.tape.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("{}@{}:{}", self.states[c.state], c.head, tape)
    }

    pub(crate) fn check_config(&self, c: &TMConfig) -> Result<()> {
        if c.state >= self.states.len() {
            return Err(Error::Config(format!("state {} out of range", c.state)));
        }
        if c.head >= self.tape_len {
            return Err(Error::Config(format!("head {} off a tape of {}", c.head, self.tape_len)));
        }
        if c.tape.len() != self.tape_len {
            return Err(Error::Config(format!(
                "tape has {} cells, expected {}",
                c.tape.len(),
                self.tape_len
            )));
        }
        Ok(())
    }
}

/// State, head position and tape contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TMConfig {
    pub state: usize,
    pub head: usize,
    pub tape: Vec<bool>,
}

impl TMConfig {
    pub fn encode(&self, tm: &ToyTM) -> Result<Vec<bool>> {
        tm.check_config(self)?;
        let q = tm.state_count();
        let m = tm.tape_len();
        let mut bits = vec![false; q + 2 * m];
        bits[self.state] = true;
        bits[q + self.head] = true;
        bits[q + m..].copy_from_slice(&self.tape);
        Ok(bits)
    }

    pub fn decode(tm: &ToyTM, bits: &[bool]) -> Result<Self> {
        let q = tm.state_count();
        let m = tm.tape_len();
        if bits.len() != q + 2 * m {
            return Err(Error::SizeMismatch {
                expected: q + 2 * m,
                got: bits.len(),
            });
        }
        let one_hot = |block: &[bool], what: &str| {
            let set: Vec<usize> = (0..block.len()).filter(|&i| block[i]).collect();
            match set[..] {
                [i] => Ok(i),
                _ => Err(Error::Config(format!(
                    "{what} block has {} bits set",
                    set.len()
                ))),
            }
        };
        Ok(TMConfig {
            state: one_hot(&bits[..q], "state")?,
            head: one_hot(&bits[q..q + m], "head")?,
            tape: bits[q + m..].to_vec(),
        })
    }
}

impl fmt::Display for TMConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}@{}:", self.state, self.head)?;
        for &b in &self.tape {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Next(TMConfig),
    Halted,
}

pub fn tm_step(tm: &ToyTM, c: &TMConfig) -> Result<StepResult> {
    tm.check_config(c)?;
    let Some(t) = tm.transition(c.state, c.tape[c.head]) else {
        return Ok(StepResult::Halted);
    };
    let mut tape = c.tape.clone();
    tape[c.head] = t.write;
    let head = match t.shift {
        Move::L => c.head.saturating_sub(1),
        Move::R => (c.head + 1).min(tm.tape_len() - 1),
        Move::S => c.head,
    };
    Ok(StepResult::Next(TMConfig {
        state: t.next,
        head,
        tape,
    }))
}

/// Reference execution for at most `max_steps` transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmRun {
    /// Visited configurations, starting with the initial one.
    pub configs: Vec<TMConfig>,
    pub halted: bool,
    /// Index of the first repeated configuration, when the run loops.
    pub loop_start: Option<usize>,
}

pub fn tm_run(tm: &ToyTM, start: &TMConfig, max_steps: usize) -> Result<TmRun> {
    let mut seen = BTreeMap::new();
    let mut configs = vec![start.clone()];
    seen.insert(start.clone(), 0);
    for _ in 0..max_steps {
        let last = configs.last().expect("nonempty");
        match tm_step(tm, last)? {
            StepResult::Halted => {
                return Ok(TmRun {
                    configs,
                    halted: true,
                    loop_start: None,
                })
            }
            StepResult::Next(c) => {
                if let Some(&i) = seen.get(&c) {
                    configs.push(c);
                    return Ok(TmRun {
                        configs,
                        halted: false,
                        loop_start: Some(i),
                    });
                }
                seen.insert(c.clone(), configs.len());
                configs.push(c);
            }
        }
    }
    Ok(TmRun {
        configs,
        halted: false,
        loop_start: None,
    })
}

/// Whether the machine halts from `start`; always decidable since the
/// configuration space is finite.
pub fn halts_from(tm: &ToyTM, start: &TMConfig) -> Result<bool> {
    let bound = tm.state_count() * tm.tape_len() << tm.tape_len();
    Ok(tm_run(tm, start, bound + 1)?.halted)
}

pub mod catalog {
    //! Small machines used as fixtures.

    use super::{Move, ToyTM};

    /// A single halting state.
    pub fn immediate_halt(m: usize) -> ToyTM {
        ToyTM::new(&["halt"], "halt", &["halt"], m, &[]).expect("valid machine")
    }

    /// One state that rewrites the scanned cell and stays put forever.
    pub fn fixed_point_loop(m: usize) -> ToyTM {
        ToyTM::new(
            &["loop"],
            "loop",
            &[],
            m,
            &[("loop", 0, 0, Move::S, "loop"), ("loop", 1, 1, Move::S, "loop")],
        )
        .expect("valid machine")
    }

    /// Sweeps right writing 1s, bounces off the wall, sweeps left writing
    /// 0s, and repeats; never halts.
    pub fn ping_pong(m: usize) -> ToyTM {
        ToyTM::new(
            &["right", "left"],
            "right",
            &[],
            m,
            &[
                ("right", 0, 1, Move::R, "right"),
                ("right", 1, 0, Move::L, "left"),
                ("left", 1, 0, Move::L, "left"),
                ("left", 0, 1, Move::R, "right"),
            ],
        )
        .expect("valid machine")
    }

    /// Adds one at the head, carrying towards cell 0; halts from every
    /// configuration within `m + 1` steps.
    pub fn binary_counter(m: usize) -> ToyTM {
        ToyTM::new(
            &["carry", "done"],
            "carry",
            &["done"],
            m,
            &[
                ("carry", 1, 0, Move::L, "carry"),
                ("carry", 0, 1, Move::S, "done"),
            ],
        )
        .expect("valid machine")
    }
}
