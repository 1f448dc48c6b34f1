use std::ffi::{CStr, CString};
use std::ptr;

use majority_diffusion_ffi::*;

const THREE_CYCLE: &str = r#"{"n":3,"edges":[[0,1],[1,2],[2,0]]}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(md_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { md_string_free(s) };
    text
}

fn three_cycle() -> *mut MdNetwork {
    let json = CString::new(THREE_CYCLE).unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { md_network_from_json(json.as_ptr(), &mut net) }, MdStatus::Ok);
    net
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(md_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn network_round_trip_and_counts() {
    let edges = [0usize, 1, 1, 2, 2, 0];
    let mut net = ptr::null_mut();
    unsafe {
        assert_eq!(md_network_new(3, edges.as_ptr(), 3, &mut net), MdStatus::Ok);
        assert_eq!(md_network_node_count(net), 3);
        assert_eq!(md_network_edge_count(net), 3);
        let mut json = ptr::null_mut();
        assert_eq!(md_network_to_json(net, &mut json), MdStatus::Ok);
        assert_eq!(take(json), THREE_CYCLE);
        md_network_free(net);
        assert_eq!(md_network_node_count(ptr::null()), 0);
        md_network_free(ptr::null_mut());
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut net = ptr::null_mut();
    let looped = [1usize, 1];
    unsafe {
        assert_eq!(md_network_new(2, looped.as_ptr(), 1, &mut net), MdStatus::Invalid);
        assert!(last_error().contains("irreflexive"));
        assert!(net.is_null());

        let bad = CString::new("{\"n\":2,").unwrap();
        assert_eq!(md_network_from_json(bad.as_ptr(), &mut net), MdStatus::Invalid);
        assert!(last_error().contains("parse error"));

        assert_eq!(md_network_from_json(ptr::null(), &mut net), MdStatus::NullArgument);
        let invalid_utf8 = [0xffu8, 0];
        assert_eq!(
            md_network_from_json(invalid_utf8.as_ptr().cast(), &mut net),
            MdStatus::Utf8
        );

        let net = three_cycle();
        let short = [1u8, 1];
        let mut out = [0u8; 3];
        assert_eq!(md_update(net, short.as_ptr(), 2, out.as_mut_ptr()), MdStatus::Invalid);
        assert!(last_error().contains("length 2"));
        let two = [1u8, 2, 0];
        assert_eq!(md_update(net, two.as_ptr(), 3, out.as_mut_ptr()), MdStatus::Invalid);
        md_network_free(net);
    }
}

#[test]
fn update_and_run() {
    let net = three_cycle();
    let mut f = [1u8, 1, 0];
    let mut result = MdRunResult {
        outcome: MdOutcome::Undetermined,
        steps: 0,
        preperiod: 0,
        period: 0,
        updates: 0,
    };
    let mut last = [9u8; 3];
    unsafe {
        // Update in place.
        assert_eq!(md_update(net, f.as_ptr(), 3, f.as_mut_ptr()), MdStatus::Ok);
        assert_eq!(f, [0, 1, 1]);

        assert_eq!(md_run(net, f.as_ptr(), 3, 0, &mut result, last.as_mut_ptr()), MdStatus::Ok);
        assert_eq!(result.outcome, MdOutcome::Cycle);
        assert_eq!((result.preperiod, result.period), (0, 3));
        assert_eq!(last, [0, 1, 1]);

        let ones = [1u8; 3];
        assert_eq!(md_run(net, ones.as_ptr(), 3, 0, &mut result, last.as_mut_ptr()), MdStatus::Ok);
        assert_eq!(result.outcome, MdOutcome::Converged);
        assert_eq!(result.steps, 0);
        assert_eq!(last, [1, 1, 1]);

        assert_eq!(md_run(net, f.as_ptr(), 3, 1, &mut result, ptr::null_mut()), MdStatus::Ok);
        assert_eq!(result.outcome, MdOutcome::Undetermined);
        assert_eq!(result.updates, 1);
        md_network_free(net);
    }
}

#[test]
fn guarantee_and_analysis() {
    let net = three_cycle();
    let mut found = 0u8;
    let mut witness = [9u8; 3];
    unsafe {
        assert_eq!(
            md_guarantee_search(net, 24, 2, true, &mut found, witness.as_mut_ptr()),
            MdStatus::Ok
        );
        assert_eq!(found, 1);
        assert_eq!(witness, [0, 1, 0]);

        assert_eq!(md_guarantee_search(net, 2, 0, false, &mut found, ptr::null_mut()), MdStatus::Refused);

        let mut json = ptr::null_mut();
        assert_eq!(md_analyze_json(net, &mut json), MdStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["structure"]["scc_count"], 1);
        assert_eq!(v["prediction"]["prediction"], "unknown");
        md_network_free(net);
    }
}

#[test]
fn compile_and_reduce() {
    let and = CString::new(
        r#"{"inputs":2,"gates":[{"id":0,"op":"AND","args":[{"input":0},{"input":1}]}],"outputs":[{"gate":0}]}"#,
    )
    .unwrap();
    let mut net = ptr::null_mut();
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(md_compile_circuit(and.as_ptr(), &mut net, &mut map), MdStatus::Ok);
        assert_eq!(md_network_node_count(net), 8);
        assert_eq!(
            take(map),
            r#"{"base_pair":[0,1],"input_pairs":[[2,3],[4,5]],"output_pairs":[[6,7]],"h":1}"#
        );
        md_network_free(net);

        let tm = majority_diffusion::reduction::catalog::fixed_point_loop(2).to_json_string();
        let tm = CString::new(tm).unwrap();
        let mut lab = ptr::null_mut();
        let mut manifest = ptr::null_mut();
        assert_eq!(
            md_reduce_machine(tm.as_ptr(), 2, ptr::null(), &mut net, &mut lab, &mut manifest),
            MdStatus::Ok
        );
        let lab: Vec<u8> = take(lab).bytes().map(|b| b - b'0').collect();
        assert_eq!(lab.len(), md_network_node_count(net));
        let m: serde_json::Value = serde_json::from_str(&take(manifest)).unwrap();
        assert_eq!(m["k"], 2);
        let mut result = MdRunResult {
            outcome: MdOutcome::Undetermined,
            steps: 0,
            preperiod: 0,
            period: 0,
            updates: 0,
        };
        assert_eq!(md_run(net, lab.as_ptr(), lab.len(), 0, &mut result, ptr::null_mut()), MdStatus::Ok);
        assert_eq!(result.outcome, MdOutcome::Cycle);
        md_network_free(net);

        let mut unused = ptr::null_mut();
        assert_eq!(
            md_reduce_machine(tm.as_ptr(), 1, ptr::null(), &mut net, &mut unused, ptr::null_mut()),
            MdStatus::Invalid
        );
        assert!(last_error().contains("at least 2"));
    }
}
