//! C ABI for the `majority-diffusion` crate.
//!
//! Networks are opaque `MdNetwork` handles. Labellings cross the boundary as
//! byte arrays holding one opinion (0 or 1) per agent. Every fallible
//! function returns an `MdStatus`; on failure `md_last_error` describes the
//! problem. Strings returned through `char **` are owned by the caller and
//! must be released with `md_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use majority_diffusion::circuit::{compile, layerize, Circuit};
use majority_diffusion::dynamics::{
    guarantee_search, run, synchronous_update, ConvergenceOutcome, Labelling, RunOptions,
    SearchOptions,
};
use majority_diffusion::netcore::{analyze, predict_convergence, SocialNetwork};
use majority_diffusion::reduction::{assemble_main_network, ToyTM};
use majority_diffusion::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed or inconsistent input: bad JSON, self-loops, size mismatches.
    Invalid = 2,
    /// The request exceeds a configured cap.
    Refused = 3,
    /// A string argument was not valid UTF-8.
    Utf8 = 5,
    /// The library panicked. This is a bug.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdOutcome {
    Converged = 0,
    Cycle = 1,
    Undetermined = 2,
}

/// Result of `md_run`. Fields that do not apply to `outcome` are zero.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MdRunResult {
    pub outcome: MdOutcome,
    /// Updates until the fixed point was first reached.
    pub steps: u64,
    pub preperiod: u64,
    pub period: u64,
    /// Updates actually computed.
    pub updates: u64,
}

/// Opaque network handle.
pub struct MdNetwork(SocialNetwork);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(MdStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ExhaustiveCap { .. } | Error::MemoryCap { .. } => MdStatus::Refused,
            _ => MdStatus::Invalid,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MdStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MdStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MdStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(MdStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn net_arg<'a>(p: *const MdNetwork) -> Result<&'a SocialNetwork, Fail> {
    p.as_ref().map(|n| &n.0).ok_or_else(|| null("network"))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn labelling_arg(p: *const u8, len: usize, net: &SocialNetwork) -> Result<Labelling, Fail> {
    if len != net.node_count() {
        return Err(Error::SizeMismatch { expected: net.node_count(), got: len }.into());
    }
    if len == 0 {
        return Ok(Labelling::zeros(0));
    }
    if p.is_null() {
        return Err(null("labelling"));
    }
    let bytes = std::slice::from_raw_parts(p, len);
    if let Some(i) = bytes.iter().position(|&b| b > 1) {
        return Err(Fail(MdStatus::Invalid, format!("opinion at index {i} is not 0 or 1")));
    }
    Ok(Labelling::from_fn(len, |i| bytes[i] == 1))
}

unsafe fn write_labelling(f: &Labelling, out: *mut u8) {
    if !out.is_null() {
        for (i, b) in f.iter().enumerate() {
            *out.add(i) = b as u8;
        }
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn boxed(net: SocialNetwork) -> *mut MdNetwork {
    Box::into_raw(Box::new(MdNetwork(net)))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn md_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call on the same thread. Empty if nothing has failed.
#[no_mangle]
pub extern "C" fn md_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn md_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a network of `n` agents from `edge_count` (influencer, influenced)
/// pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_network_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut MdNetwork,
) -> MdStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let net = SocialNetwork::new(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))?;
        *out = boxed(net);
        Ok(())
    })
}

/// Parses a network from its JSON form `{"n": .., "edges": [[u, v], ..]}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_network_from_json(json: *const c_char, out: *mut *mut MdNetwork) -> MdStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let net = SocialNetwork::from_json_str(str_arg(json, "json")?)?;
        *out = boxed(net);
        Ok(())
    })
}

/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_network_to_json(net: *const MdNetwork, out: *mut *mut c_char) -> MdStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = c_string(net_arg(net)?.to_json_string());
        Ok(())
    })
}

/// Releases a network. Null is ignored.
///
/// # Safety
/// `net` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn md_network_free(net: *mut MdNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of agents, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_network_node_count(net: *const MdNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.node_count())
}

/// Number of influence edges, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_network_edge_count(net: *const MdNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.edge_count())
}

/// One synchronous update of `labelling` into `out`. Both arrays hold `len`
/// opinions and may alias.
///
/// # Safety
/// `labelling` and `out` must each point to `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn md_update(
    net: *const MdNetwork,
    labelling: *const u8,
    len: usize,
    out: *mut u8,
) -> MdStatus {
    guard(|| {
        let net = net_arg(net)?;
        let f = labelling_arg(labelling, len, net)?;
        if out.is_null() && len > 0 {
            return Err(null("out"));
        }
        write_labelling(&synchronous_update(net, &f)?, out);
        Ok(())
    })
}

/// Runs the dynamics from `labelling` for at most `max_steps` updates
/// (0 means no limit). If `final_out` is not null it receives the limit on
/// convergence, or the first state of the cycle.
///
/// # Safety
/// `labelling` must point to `len` bytes, `final_out` to `len` writable bytes
/// or null, and `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_run(
    net: *const MdNetwork,
    labelling: *const u8,
    len: usize,
    max_steps: u64,
    result: *mut MdRunResult,
    final_out: *mut u8,
) -> MdStatus {
    guard(|| {
        let net = net_arg(net)?;
        let result = out_arg(result, "result")?;
        let f = labelling_arg(labelling, len, net)?;
        let options = if max_steps == 0 {
            RunOptions::default()
        } else {
            RunOptions::with_budget(max_steps)
        };
        let r = run(net, &f, &options)?;
        let mut res = MdRunResult {
            outcome: MdOutcome::Undetermined,
            steps: 0,
            preperiod: 0,
            period: 0,
            updates: r.updates,
        };
        match &r.outcome {
            ConvergenceOutcome::Converged { steps, limit } => {
                res.outcome = MdOutcome::Converged;
                res.steps = *steps;
                write_labelling(limit, final_out);
            }
            ConvergenceOutcome::Cycles { preperiod, period, witness } => {
                res.outcome = MdOutcome::Cycle;
                res.preperiod = *preperiod;
                res.period = *period;
                write_labelling(witness, final_out);
            }
            ConvergenceOutcome::Undetermined { .. } => {}
        }
        *result = res;
        Ok(())
    })
}

/// Exhaustively searches for a labelling that never converges. Sets `found`
/// to 1 and fills `witness_out` (if not null) when one exists. `jobs` of 0
/// uses the default thread pool; a network larger than `max_n` is refused.
///
/// # Safety
/// `found` must be writable; `witness_out` must be null or hold one byte per agent.
#[no_mangle]
pub unsafe extern "C" fn md_guarantee_search(
    net: *const MdNetwork,
    max_n: usize,
    jobs: usize,
    deterministic: bool,
    found: *mut u8,
    witness_out: *mut u8,
) -> MdStatus {
    guard(|| {
        let net = net_arg(net)?;
        let found = out_arg(found, "found")?;
        let options = SearchOptions {
            exhaustive_cap: max_n,
            jobs: (jobs > 0).then_some(jobs),
            deterministic,
        };
        let hit = guarantee_search(net, &options)?;
        *found = hit.is_some() as u8;
        if let Some(w) = hit {
            write_labelling(&w, witness_out);
        }
        Ok(())
    })
}

/// Structural report and convergence prediction as JSON
/// `{"structure": .., "prediction": ..}`.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_analyze_json(net: *const MdNetwork, out: *mut *mut c_char) -> MdStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let report = analyze(net_arg(net)?);
        let prediction = predict_convergence(&report);
        let value = serde_json::json!({"structure": report, "prediction": prediction});
        *out = c_string(value.to_string());
        Ok(())
    })
}

/// Compiles a circuit given as JSON into a network. If `map_out` is not null
/// it receives the JSON map of base, input and output pairs.
///
/// # Safety
/// `circuit_json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_compile_circuit(
    circuit_json: *const c_char,
    out: *mut *mut MdNetwork,
    map_out: *mut *mut c_char,
) -> MdStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let circuit = Circuit::from_json_str(str_arg(circuit_json, "circuit_json")?)?;
        let cc = compile(&layerize(&circuit)?)?;
        if let Some(m) = map_out.as_mut() {
            *m = c_string(serde_json::to_string(&cc.map()).map_err(Error::from)?);
        }
        *out = boxed(cc.network);
        Ok(())
    })
}

/// Builds the main network of a machine given as JSON, with an alarm of
/// `2k` agents. `start` is a configuration `STATE@HEAD:TAPE`, or null for the
/// initial one. `labelling_out` receives the initial labelling as a string of
/// 0s and 1s; `manifest_out`, if not null, the manifest as JSON.
///
/// # Safety
/// String arguments must be NUL-terminated or null where allowed; `out` and
/// `labelling_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_reduce_machine(
    machine_json: *const c_char,
    k: usize,
    start: *const c_char,
    out: *mut *mut MdNetwork,
    labelling_out: *mut *mut c_char,
    manifest_out: *mut *mut c_char,
) -> MdStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let labelling_out = out_arg(labelling_out, "labelling_out")?;
        let tm = ToyTM::from_json_str(str_arg(machine_json, "machine_json")?)?;
        let config = if start.is_null() {
            tm.initial_config()
        } else {
            tm.parse_config(str_arg(start, "start")?)?
        };
        let mn = assemble_main_network(&tm, k)?;
        let f = mn.initial_labelling(&config)?;
        if let Some(m) = manifest_out.as_mut() {
            *m = c_string(serde_json::to_string(&mn.manifest()).map_err(Error::from)?);
        }
        *labelling_out = c_string(f.to_string());
        *out = boxed(mn.network);
        Ok(())
    })
}
