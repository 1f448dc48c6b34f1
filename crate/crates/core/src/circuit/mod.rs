//! Boolean circuits, layering, and compilation to acyclic diffusion networks.

mod compile;
mod ir;
mod layer;

pub use compile::{
    auxiliary_labelling, auxiliary_labelling_with_fill, compile, compile_guarded,
    simulate_compiled, simulate_compiled_raw, AuxiliaryLabelling, CompileMap, CompiledCircuit,
    PairRole,
};
pub use ir::{evaluate, Circuit, CircuitBuilder, Gate, Op, Ref};
pub use layer::{layerize, LayeredCircuit};

pub(crate) use compile::{emit, Sinks};
