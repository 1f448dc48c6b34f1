//! Toy space-bounded Turing machines and the network whose convergence
//! mirrors their halting: a looped step circuit, a fuse line, a valve and
//! an alarm.

mod fuse;
mod main_network;
mod step_circuit;
mod tm;

pub use fuse::{alarm_rig, build_fuse_line, build_valve_alarm, AlarmRig, FusePair, FuseStage, Valve};
pub use main_network::{assemble_main_network, run_reduction_demo, DemoVerdict, Manifest, MainNetwork};
pub use step_circuit::{step_circuit, StepCircuit};
pub use tm::{catalog, halts_from, tm_run, tm_step, Move, Rule, StepResult, TMConfig, TmRun, ToyTM, Transition};
