use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense agent index in `0..n`.
pub type NodeId = usize;

/// Valve pairs at the end of the fuse line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValveAnnotation {
    #[serde(rename = "P")]
    pub p: [NodeId; 2],
    #[serde(rename = "Q")]
    pub q: [NodeId; 2],
}

/// Role metadata attached by the gadget and reduction builders.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dual_pairs: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_pair: Option<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fuse_pairs: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valve: Option<ValveAnnotation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alarm: Vec<NodeId>,
}

impl Annotations {
    pub fn is_empty(&self) -> bool {
        self == &Annotations::default()
    }

    /// Every annotated node together with a short role name.
    pub fn roles(&self) -> Vec<(NodeId, &'static str)> {
        let mut out = Vec::new();
        for p in &self.dual_pairs {
            out.push((p[0], "dual"));
            out.push((p[1], "dual"));
        }
        if let Some(b) = self.base_pair {
            out.push((b[0], "base"));
            out.push((b[1], "base"));
        }
        for p in &self.fuse_pairs {
            out.push((p[0], "fuse"));
            out.push((p[1], "fuse"));
        }
        if let Some(v) = self.valve {
            out.extend(v.p.iter().map(|&i| (i, "valve_p")));
            out.extend(v.q.iter().map(|&i| (i, "valve_q")));
        }
        out.extend(self.alarm.iter().map(|&i| (i, "alarm")));
        out
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = HashSet::new();
        for (node, role) in self.roles() {
            if node >= n {
                return Err(Error::Annotation(format!(
                    "{role} node {node} out of range for {n} agents"
                )));
            }
            if !seen.insert(node) {
                return Err(Error::Annotation(format!(
                    "node {node} carries more than one role"
                )));
            }
        }
        Ok(())
    }
}

/// A simple irreflexive directed graph; an edge `(u, v)` means `u` influences `v`.
///
/// Immutable after construction. Adjacency is stored in compressed form with
/// every neighbour list sorted, so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialNetwork {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    in_offsets: Vec<usize>,
    in_nodes: Vec<NodeId>,
    out_offsets: Vec<usize>,
    out_nodes: Vec<NodeId>,
    annotations: Annotations,
}

impl SocialNetwork {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        Self::with_annotations(n, edges, Annotations::default())
    }

    pub fn with_annotations(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        annotations: Annotations,
    ) -> Result<Self> {
        let mut edges: Vec<(NodeId, NodeId)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        annotations.validate(n)?;

        let (out_offsets, out_nodes) = compress(n, edges.iter().copied());
        let mut reversed: Vec<(NodeId, NodeId)> = edges.iter().map(|&(u, v)| (v, u)).collect();
        reversed.sort_unstable();
        let (in_offsets, in_nodes) = compress(n, reversed);

        Ok(SocialNetwork {
            n,
            edges,
            in_offsets,
            in_nodes,
            out_offsets,
            out_nodes,
            annotations,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn annotations(&self) -> &Annotations {
        &self.annotations
    }

    /// The influencers of `i`, sorted ascending.
    pub fn influencers(&self, i: NodeId) -> Result<&[NodeId]> {
        self.check_node(i)?;
        Ok(self.influencers_unchecked(i))
    }

    /// The nodes `i` influences, sorted ascending.
    pub fn influenced(&self, i: NodeId) -> Result<&[NodeId]> {
        self.check_node(i)?;
        Ok(&self.out_nodes[self.out_offsets[i]..self.out_offsets[i + 1]])
    }

    #[inline]
    pub(crate) fn influencers_unchecked(&self, i: NodeId) -> &[NodeId] {
        &self.in_nodes[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    #[inline]
    pub(crate) fn influenced_unchecked(&self, i: NodeId) -> &[NodeId] {
        &self.out_nodes[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    pub fn in_degree(&self, i: NodeId) -> usize {
        self.in_offsets[i + 1] - self.in_offsets[i]
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.n).map(|i| self.in_degree(i)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n && self.influenced_unchecked(u).binary_search(&v).is_ok()
    }

    pub(crate) fn check_node(&self, i: NodeId) -> Result<()> {
        if i >= self.n {
            Err(Error::NodeOutOfRange { node: i, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn to_json(&self) -> NetworkJson {
        NetworkJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            annotations: (!self.annotations.is_empty()).then(|| self.annotations.clone()),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: NetworkJson = serde_json::from_str(s)?;
        raw.into_network()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("network serializes")
    }
}

fn compress(n: usize, sorted: impl IntoIterator<Item = (NodeId, NodeId)>) -> (Vec<usize>, Vec<NodeId>) {
    let mut offsets = vec![0usize; n + 1];
    let mut targets = Vec::new();
    for (u, v) in sorted {
        offsets[u + 1] += 1;
        targets.push(v);
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    (offsets, targets)
}

/// On-disk network format: `{"n": .., "edges": [[u, v], ..], "annotations": {..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkJson {
    pub n: usize,
    pub edges: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<Annotations>,
}

impl NetworkJson {
    pub fn into_network(self) -> Result<SocialNetwork> {
        SocialNetwork::with_annotations(
            self.n,
            self.edges.into_iter().map(|[u, v]| (u, v)),
            self.annotations.unwrap_or_default(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_indices() {
        let net = SocialNetwork::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(net.influencers(0).unwrap(), &[2]);
        assert_eq!(net.influenced(0).unwrap(), &[1]);
        assert_eq!(net.edge_count(), 3);
    }

    #[test]
    fn isolated_agent() {
        let net = SocialNetwork::new(1, []).unwrap();
        assert!(net.influencers(0).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(SocialNetwork::new(2, [(0, 0)]), Err(Error::SelfLoop(0))));
        assert!(matches!(
            SocialNetwork::new(2, [(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            SocialNetwork::new(2, [(0, 2)]),
            Err(Error::NodeOutOfRange { node: 2, n: 2 })
        ));
        assert!(SocialNetwork::new(2, [(0, 0)])
            .unwrap_err()
            .to_string()
            .contains("irreflexive"));
    }

    #[test]
    fn edge_order_is_normalized() {
        let a = SocialNetwork::new(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        let b = SocialNetwork::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges(), &[(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn k4_influencers() {
        let edges = (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v)));
        let net = SocialNetwork::new(4, edges).unwrap();
        for i in 0..4 {
            let expected: Vec<_> = (0..4).filter(|&j| j != i).collect();
            assert_eq!(net.influencers(i).unwrap(), expected.as_slice());
        }
    }

    #[test]
    fn annotation_checks() {
        let ann = Annotations {
            dual_pairs: vec![[0, 1]],
            base_pair: Some([1, 2]),
            ..Default::default()
        };
        assert!(matches!(
            SocialNetwork::with_annotations(3, [], ann),
            Err(Error::Annotation(_))
        ));
        let ann = Annotations {
            alarm: vec![5],
            ..Default::default()
        };
        assert!(SocialNetwork::with_annotations(3, [], ann).is_err());
    }

    #[test]
    fn json_round_trip_with_annotations() {
        let text = r#"{"n":4,"edges":[[0,2],[1,3]],"annotations":{"dual_pairs":[[2,3]],"base_pair":[0,1],"valve":{"P":[0,0],"Q":[1,1]}}}"#;
        // P/Q reuse base nodes, so validation must fail.
        assert!(SocialNetwork::from_json_str(text).is_err());

        let text = r#"{"n":4,"edges":[[0,2],[1,3]],"annotations":{"dual_pairs":[[2,3]],"base_pair":[0,1]}}"#;
        let net = SocialNetwork::from_json_str(text).unwrap();
        assert_eq!(net.to_json_string(), text);
    }

    #[test]
    fn truncated_json_is_a_parse_error() {
        assert!(matches!(
            SocialNetwork::from_json_str(r#"{"n":3,"edges":[[0,1"#),
            Err(Error::Json(_))
        ));
    }
}
