use serde_json::json;

use super::{ConvergenceOutcome, Trajectory};

/// One-line JSON summary closing a trace file.
pub fn trace_report(outcome: &ConvergenceOutcome) -> serde_json::Value {
    match outcome {
        ConvergenceOutcome::Converged { steps, limit } => {
            json!({"outcome": "converged", "steps": steps, "limit": limit.to_string()})
        }
        ConvergenceOutcome::Cycles {
            preperiod, period, ..
        } => json!({"outcome": "cycle", "preperiod": preperiod, "period": period}),
        ConvergenceOutcome::Undetermined { budget } => {
            json!({"outcome": "undetermined", "budget": budget})
        }
    }
}

/// Trace file text: line `t` holds the labelling at time `t`, then the report line.
pub fn format_trace(trajectory: &Trajectory, outcome: &ConvergenceOutcome) -> String {
    let mut out = String::new();
    for state in &trajectory.states {
        out.push_str(&state.to_string());
        out.push('\n');
    }
    out.push_str(&trace_report(outcome).to_string());
    out.push('\n');
    out
}
