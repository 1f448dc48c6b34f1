use std::collections::{BTreeSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::network::{NodeId, SocialNetwork};
use crate::dynamics::Labelling;
use crate::error::{Error, Result};

/// Kahn topological order, or `None` if the network has a cycle.
pub fn topological_order(net: &SocialNetwork) -> Option<Vec<NodeId>> {
    let n = net.node_count();
    let mut indeg: Vec<usize> = (0..n).map(|i| net.in_degree(i)).collect();
    let mut queue: VecDeque<NodeId> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in net.influenced_unchecked(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

pub fn is_dag(net: &SocialNetwork) -> bool {
    topological_order(net).is_some()
}

/// Length of the longest path from a source to each node.
pub fn levels(net: &SocialNetwork) -> Result<Vec<usize>> {
    let order = topological_order(net).ok_or(Error::Cyclic)?;
    let mut level = vec![0usize; net.node_count()];
    for u in order {
        for &v in net.influenced_unchecked(u) {
            level[v] = level[v].max(level[u] + 1);
        }
    }
    Ok(level)
}

/// Maximum edge count over all paths; the convergence bound for acyclic networks.
pub fn longest_path(net: &SocialNetwork) -> Result<usize> {
    Ok(levels(net)?.into_iter().max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component index of every node. Components are numbered in a
    /// topological order of the condensation.
    pub membership: Vec<usize>,
    /// Nodes of each component, sorted.
    pub components: Vec<Vec<NodeId>>,
    /// Edges of the condensation DAG, sorted and deduplicated.
    pub condensation: Vec<(usize, usize)>,
}

impl SccDecomposition {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

pub fn scc_decomposition(net: &SocialNetwork) -> SccDecomposition {
    let n = net.node_count();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, net.edge_count());
    for _ in 0..n {
        graph.add_node(());
    }
    for &(u, v) in net.edges() {
        graph.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    // tarjan_scc yields components in reverse topological order.
    let mut components: Vec<Vec<NodeId>> = tarjan_scc(&graph)
        .into_iter()
        .rev()
        .map(|c| {
            let mut nodes: Vec<NodeId> = c.into_iter().map(|ix| ix.index()).collect();
            nodes.sort_unstable();
            nodes
        })
        .collect();
    components.shrink_to_fit();

    let mut membership = vec![0usize; n];
    for (c, nodes) in components.iter().enumerate() {
        for &i in nodes {
            membership[i] = c;
        }
    }
    let condensation: BTreeSet<(usize, usize)> = net
        .edges()
        .iter()
        .map(|&(u, v)| (membership[u], membership[v]))
        .filter(|(a, b)| a != b)
        .collect();

    SccDecomposition {
        membership,
        components,
        condensation: condensation.into_iter().collect(),
    }
}

/// Subnetwork induced by `nodes`, relabelled densely in ascending original order.
/// Returns the new network and the new-to-original id map. Annotations are dropped.
pub fn induced_subnetwork(
    net: &SocialNetwork,
    nodes: &BTreeSet<NodeId>,
) -> Result<(SocialNetwork, Vec<NodeId>)> {
    let n = net.node_count();
    let mapping: Vec<NodeId> = nodes.iter().copied().collect();
    let mut new_id = vec![usize::MAX; n];
    for (k, &old) in mapping.iter().enumerate() {
        net.check_node(old)?;
        new_id[old] = k;
    }
    let edges = net
        .edges()
        .iter()
        .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
        .map(|&(u, v)| (new_id[u], new_id[v]));
    Ok((SocialNetwork::new(mapping.len(), edges)?, mapping))
}

/// A network is a clique iff it has all `n(n-1)` possible edges.
pub fn is_clique(net: &SocialNetwork) -> bool {
    let n = net.node_count();
    net.edge_count() == n * n.saturating_sub(1)
}

/// Whether every directed cycle has a length divisible by `h`.
///
/// Within a strongly connected component this holds iff nodes admit a
/// potential `phi` with `phi(v) = phi(u) + 1 (mod h)` on every internal edge.
pub fn cycle_lengths_divisible_by(net: &SocialNetwork, h: usize) -> bool {
    if h == 0 {
        return false;
    }
    let scc = scc_decomposition(net);
    let mut phi = vec![usize::MAX; net.node_count()];
    for comp in &scc.components {
        let c = scc.membership[comp[0]];
        phi[comp[0]] = 0;
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(u) = queue.pop_front() {
            for &v in net.influenced_unchecked(u) {
                if scc.membership[v] != c {
                    continue;
                }
                let want = (phi[u] + 1) % h;
                if phi[v] == usize::MAX {
                    phi[v] = want;
                    queue.push_back(v);
                } else if phi[v] != want {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub is_dag: bool,
    pub longest_path: Option<usize>,
    pub scc_count: usize,
    pub scc_membership: Vec<usize>,
    pub is_clique: bool,
    pub parity: Option<Parity>,
    pub max_in_degree: usize,
}

pub fn analyze(net: &SocialNetwork) -> StructureReport {
    let scc = scc_decomposition(net);
    let longest = longest_path(net).ok();
    let clique = is_clique(net);
    let n = net.node_count();
    StructureReport {
        n,
        is_dag: longest.is_some(),
        longest_path: longest,
        scc_count: scc.count(),
        scc_membership: scc.membership,
        is_clique: clique,
        parity: clique.then_some(if n % 2 == 1 { Parity::Odd } else { Parity::Even }),
        max_in_degree: net.max_in_degree(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "prediction", rename_all = "snake_case")]
pub enum Prediction {
    /// Every labelling reaches a fixed point within `within` updates.
    AlwaysConverges { within: usize },
    /// Some labelling never converges; `witness` is such a labelling.
    NotAlwaysConverges { witness: Labelling },
    Unknown,
}

pub fn predict_convergence(report: &StructureReport) -> Prediction {
    if let Some(k) = report.longest_path {
        return Prediction::AlwaysConverges { within: k };
    }
    match report.parity {
        Some(Parity::Odd) => Prediction::AlwaysConverges { within: 1 },
        Some(Parity::Even) => {
            // Evenly split: every agent sees a strict majority of disagreeing peers.
            let n = report.n;
            let witness = Labelling::from_fn(n, |i| i >= n / 2);
            Prediction::NotAlwaysConverges { witness }
        }
        None => Prediction::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn chain_is_dag_with_bound() {
        let chain = fixtures::chain(4);
        assert!(is_dag(&chain));
        assert_eq!(longest_path(&chain).unwrap(), 3);
        assert!(!is_dag(&fixtures::three_cycle()));
        assert!(matches!(longest_path(&fixtures::three_cycle()), Err(Error::Cyclic)));
    }

    #[test]
    fn two_scc_fixture() {
        let (net, _) = fixtures::two_scc();
        let scc = scc_decomposition(&net);
        assert_eq!(scc.count(), 2);
        assert!(scc.components.iter().all(|c| c.len() == 3));
        assert_eq!(scc.condensation.len(), 1);
        // Upper component influences the lower one.
        let (from, to) = scc.condensation[0];
        assert_eq!(scc.components[from], vec![3, 4, 5]);
        assert_eq!(scc.components[to], vec![0, 1, 2]);
    }

    #[test]
    fn scc_trivial_cases() {
        assert_eq!(scc_decomposition(&fixtures::chain(5)).count(), 5);
        assert_eq!(scc_decomposition(&fixtures::clique(4)).count(), 1);
    }

    #[test]
    fn induced_upper_scc() {
        let (net, _) = fixtures::two_scc();
        let (sub, map) = induced_subnetwork(&net, &BTreeSet::from([3, 4, 5])).unwrap();
        assert_eq!(sub.node_count(), 3);
        assert_eq!(sub.edge_count(), 5);
        assert_eq!(map, vec![3, 4, 5]);

        let all: BTreeSet<_> = (0..6).collect();
        let (copy, _) = induced_subnetwork(&net, &all).unwrap();
        assert_eq!(copy.edges(), net.edges());

        let (empty, map) = induced_subnetwork(&net, &BTreeSet::new()).unwrap();
        assert_eq!(empty.node_count(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn cliques() {
        assert!(is_clique(&fixtures::clique(5)));
        assert!(!is_clique(&fixtures::three_cycle()));
        let k4 = fixtures::clique(4);
        let minus_one = SocialNetwork::new(4, k4.edges().iter().copied().skip(1)).unwrap();
        assert!(!is_clique(&minus_one));
    }

    #[test]
    fn reports_and_predictions() {
        let (joined, _) = fixtures::two_scc();
        let r = analyze(&joined);
        assert_eq!(r.scc_count, 2);
        assert!(!r.is_dag && !r.is_clique);
        assert_eq!(predict_convergence(&r), Prediction::Unknown);

        let r = analyze(&fixtures::chain(4));
        assert_eq!((r.is_dag, r.longest_path, r.scc_count), (true, Some(3), 4));
        assert_eq!(predict_convergence(&r), Prediction::AlwaysConverges { within: 3 });

        let r = analyze(&fixtures::clique(4));
        assert_eq!((r.is_clique, r.parity), (true, Some(Parity::Even)));
        match predict_convergence(&r) {
            Prediction::NotAlwaysConverges { witness } => {
                assert_eq!(witness.to_string(), "0011")
            }
            other => panic!("unexpected {other:?}"),
        }

        let r = analyze(&fixtures::clique(5));
        assert_eq!(predict_convergence(&r), Prediction::AlwaysConverges { within: 1 });
        assert_eq!(predict_convergence(&analyze(&fixtures::three_cycle())), Prediction::Unknown);
    }

    #[test]
    fn cycle_divisibility() {
        let c3 = fixtures::three_cycle();
        assert!(cycle_lengths_divisible_by(&c3, 3));
        assert!(!cycle_lengths_divisible_by(&c3, 2));
        assert!(cycle_lengths_divisible_by(&fixtures::chain(4), 7));
        // 2-cycle and 3-cycle sharing node 0.
        let mixed = SocialNetwork::new(4, [(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)]).unwrap();
        assert!(!cycle_lengths_divisible_by(&mixed, 2));
        assert!(cycle_lengths_divisible_by(&mixed, 1));
    }
}
