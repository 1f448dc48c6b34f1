//! Small reference networks used throughout the tests, the CLI and the docs.

use crate::dynamics::Labelling;
use crate::netcore::SocialNetwork;

/// Directed 3-cycle `0 -> 1 -> 2 -> 0`.
pub fn three_cycle() -> SocialNetwork {
    SocialNetwork::new(3, [(0, 1), (1, 2), (2, 0)]).expect("valid")
}

/// Path `0 -> 1 -> ... -> n-1`.
pub fn chain(n: usize) -> SocialNetwork {
    SocialNetwork::new(n, (1..n).map(|i| (i - 1, i))).expect("valid")
}

/// Complete irreflexive digraph on `n` agents.
pub fn clique(n: usize) -> SocialNetwork {
    let edges = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
    SocialNetwork::new(n, edges).expect("valid")
}

/// Two 3-node components, each converging for every labelling in
/// isolation, joined by a single edge `4 -> 1`. Nodes `0..3` form the lower
/// component and `3..6` the upper one. The returned labelling does not
/// converge on the joined network.
pub fn two_scc() -> (SocialNetwork, Labelling) {
    let edges = [
        (0, 1),
        (0, 2),
        (1, 0),
        (1, 2),
        (2, 1),
        (3, 4),
        (3, 5),
        (4, 3),
        (4, 5),
        (5, 4),
        (4, 1),
    ];
    let net = SocialNetwork::new(6, edges).expect("valid");
    (net, "011100".parse().expect("valid labelling"))
}
