//! Graphviz export. Opinion 1 is drawn black, 0 white, no opinion gray.

use std::fmt::Write;

use crate::dynamics::Labelling;
use crate::error::Result;
use crate::netcore::{NodeId, SocialNetwork};

fn shape_for(net: &SocialNetwork, i: NodeId) -> &'static str {
    let a = net.annotations();
    let in_pair = |pairs: &[[NodeId; 2]]| pairs.iter().any(|p| p.contains(&i));
    if a.base_pair.is_some_and(|p| p.contains(&i)) {
        "doubleoctagon"
    } else if in_pair(&a.dual_pairs) {
        "ellipse"
    } else if in_pair(&a.fuse_pairs) {
        "box"
    } else if a.valve.as_ref().is_some_and(|v| v.p.contains(&i) || v.q.contains(&i)) {
        "box3d"
    } else if a.alarm.contains(&i) {
        "doublecircle"
    } else {
        "circle"
    }
}

pub fn to_dot(net: &SocialNetwork, labelling: Option<&Labelling>) -> Result<String> {
    if let Some(f) = labelling {
        f.check_len(net.node_count())?;
    }
    let mut out = String::from("digraph SN {\n  node [style=filled];\n");
    for i in 0..net.node_count() {
        let (fill, font) = match labelling.map(|f| f.get(i)) {
            Some(true) => ("black", "white"),
            Some(false) => ("white", "black"),
            None => ("gray", "black"),
        };
        writeln!(
            out,
            "  {i} [shape={}, fillcolor={fill}, fontcolor={font}];",
            shape_for(net, i)
        )
        .expect("writing to a string");
    }
    for &(u, v) in net.edges() {
        writeln!(out, "  {u} -> {v};").expect("writing to a string");
    }
    out.push_str("}\n");
    Ok(out)
}
