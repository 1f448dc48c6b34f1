use std::collections::HashSet;

use majority_diffusion::circuit::{
    compile, evaluate, layerize, simulate_compiled, Circuit, Gate, Op, Ref,
};
use majority_diffusion::dynamics::{
    guarantee_search, run, ConvergenceOutcome, synchronous_update, verify_bound, Labelling, RunOptions, SearchOptions,
};
use majority_diffusion::netcore::{
    analyze, is_dag, levels, longest_path, predict_convergence, scc_decomposition, Prediction,
    SocialNetwork,
};
use proptest::prelude::*;

fn network(max_n: usize) -> impl Strategy<Value = SocialNetwork> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * n).prop_map(move |mask| {
            let edges = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v && mask[u * n + v]);
            SocialNetwork::new(n, edges).unwrap()
        })
    })
}

fn dag(max_n: usize) -> impl Strategy<Value = SocialNetwork> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::bool::weighted(0.35), n * n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(mask, order)| {
                let edges = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| mask[a * n + b])
                    .map(|(a, b)| (order[a], order[b]));
                SocialNetwork::new(n, edges).unwrap()
            })
    })
}

fn with_labelling(net: SocialNetwork) -> impl Strategy<Value = (SocialNetwork, Labelling)> {
    let n = net.node_count();
    proptest::collection::vec(any::<bool>(), n)
        .prop_map(move |bits| (net.clone(), Labelling::from_bools(&bits)))
}

/// Longest path by exhaustive DFS from every node.
fn longest_path_dfs(net: &SocialNetwork) -> usize {
    fn from(net: &SocialNetwork, u: usize) -> usize {
        net.influenced(u)
            .unwrap()
            .iter()
            .map(|&v| 1 + from(net, v))
            .max()
            .unwrap_or(0)
    }
    (0..net.node_count()).map(|u| from(net, u)).max().unwrap_or(0)
}

/// Whether any labelling fails to converge, by following every orbit.
fn brute_force_nonconvergent(net: &SocialNetwork) -> bool {
    let n = net.node_count();
    (0..1u64 << n).any(|x| {
        let mut seen = HashSet::new();
        let mut f = Labelling::from_u64(n, x);
        loop {
            let g = synchronous_update(net, &f).unwrap();
            if g == f {
                return false;
            }
            if !seen.insert(f.clone()) {
                return true;
            }
            f = g;
        }
    })
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (1..=5usize, 1..=15usize).prop_flat_map(|(k, g)| {
        let gates = proptest::collection::vec((0..6u8, any::<prop::sample::Index>(), any::<prop::sample::Index>()), g);
        let outputs = proptest::collection::vec(any::<prop::sample::Index>(), 1..=4);
        (gates, outputs).prop_map(move |(gates, outputs)| {
            let mut refs: Vec<Ref> = (0..k).map(Ref::Input).collect();
            let mut out_gates = Vec::new();
            for (id, (op, a, b)) in gates.into_iter().enumerate() {
                let op = [Op::And, Op::Or, Op::Not, Op::Nop, Op::ConstTrue, Op::ConstFalse][op as usize];
                let args = [*a.get(&refs), *b.get(&refs)][..op.arity()].to_vec();
                out_gates.push(Gate { id, op, args });
                refs.push(Ref::Gate(id));
            }
            Circuit {
                input_count: k,
                gates: out_gates,
                outputs: outputs.iter().map(|i| *i.get(&refs)).collect(),
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn influence_indices_are_symmetric(net in network(12)) {
        for u in 0..net.node_count() {
            for &v in net.influenced(u).unwrap() {
                prop_assert!(net.influencers(v).unwrap().contains(&u));
            }
            for &w in net.influencers(u).unwrap() {
                prop_assert!(net.influenced(w).unwrap().contains(&u));
            }
        }
        let total: usize = (0..net.node_count()).map(|u| net.influencers(u).unwrap().len()).sum();
        prop_assert_eq!(total, net.edge_count());
    }

    #[test]
    fn condensation_is_topologically_ordered(net in network(12)) {
        let scc = scc_decomposition(&net);
        for &(a, b) in &scc.condensation {
            prop_assert!(a < b);
        }
        for &(u, v) in net.edges() {
            prop_assert!(scc.membership[u] <= scc.membership[v]);
        }
        let covered: usize = scc.components.iter().map(Vec::len).sum();
        prop_assert_eq!(covered, net.node_count());
    }

    #[test]
    fn longest_path_matches_dfs(net in dag(10)) {
        prop_assert!(is_dag(&net));
        prop_assert_eq!(longest_path(&net).unwrap(), longest_path_dfs(&net));
    }

    #[test]
    fn dag_levels_bound_convergence((net, f) in dag(10).prop_flat_map(with_labelling)) {
        let lp = longest_path(&net).unwrap();
        let r = run(&net, &f, &RunOptions::default()).unwrap();
        let steps = match r.outcome {
            ConvergenceOutcome::Converged { steps, .. } => steps,
            other => return Err(TestCaseError::fail(format!("{other:?}"))),
        };
        prop_assert!(steps <= lp as u64);
        // A node at level l never changes after time l.
        let level = levels(&net).unwrap();
        let states = &r.trajectory.states;
        let last = states.last().unwrap();
        for (t, s) in states.iter().enumerate() {
            for i in 0..net.node_count() {
                if level[i] <= t {
                    prop_assert_eq!(s.get(i), last.get(i));
                }
            }
        }
    }

    #[test]
    fn self_duality_and_monotonicity(
        (net, f) in network(16).prop_flat_map(with_labelling),
        seed in any::<u64>(),
    ) {
        let su = |g: &Labelling| synchronous_update(&net, g).unwrap();
        prop_assert_eq!(su(&f.complement()), su(&f).complement());
        let g = Labelling::from_fn(f.len(), |i| f.get(i) || (seed >> (i % 64)) & 1 == 1);
        prop_assert!(su(&f).le(&su(&g)));
    }

    #[test]
    fn predictions_hold(net in network(9)) {
        let report = analyze(&net);
        let nonconvergent = brute_force_nonconvergent(&net);
        match predict_convergence(&report) {
            Prediction::AlwaysConverges { within } => {
                prop_assert!(!nonconvergent);
                prop_assert!(verify_bound(&net, within as u64, &SearchOptions::default()).unwrap());
            }
            Prediction::NotAlwaysConverges { witness } => {
                let r = run(&net, &witness, &RunOptions::default()).unwrap();
                prop_assert!(r.outcome.is_cycle());
            }
            Prediction::Unknown => {}
        }
    }

    #[test]
    fn guarantee_search_matches_brute_force(net in network(10), deterministic in any::<bool>()) {
        let opts = SearchOptions { deterministic, ..Default::default() };
        let found = guarantee_search(&net, &opts).unwrap();
        prop_assert_eq!(found.is_some(), brute_force_nonconvergent(&net));
        if let Some(w) = found {
            prop_assert!(!w.get(0));
            prop_assert!(run(&net, &w, &RunOptions::default()).unwrap().outcome.is_cycle());
        }
    }

    #[test]
    fn layering_equalizes_paths(c in circuit()) {
        let l = layerize(&c).unwrap();
        for (g, gate) in l.circuit.gates.iter().enumerate() {
            for &a in &gate.args {
                prop_assert_eq!(l.layer_of(a) + 1, l.layers[g]);
            }
        }
        for &o in &l.circuit.outputs {
            prop_assert_eq!(l.layer_of(o), l.h);
        }
        for x in 0..1u32 << c.input_count {
            let x: Vec<bool> = (0..c.input_count).map(|i| x >> i & 1 == 1).collect();
            prop_assert_eq!(evaluate(&l.circuit, &x).unwrap(), evaluate(&c, &x).unwrap());
        }
    }

    #[test]
    fn compiled_circuits_evaluate(c in circuit()) {
        let cc = compile(&layerize(&c).unwrap()).unwrap();
        prop_assert!(is_dag(&cc.network));
        prop_assert!(cc.network.max_in_degree() <= 3);
        for x in 0..1u32 << c.input_count {
            let x: Vec<bool> = (0..c.input_count).map(|i| x >> i & 1 == 1).collect();
            prop_assert_eq!(simulate_compiled(&cc, &x).unwrap(), evaluate(&c, &x).unwrap());
        }
    }

    #[test]
    fn network_json_round_trips(net in network(10)) {
        let back = SocialNetwork::from_json_str(&net.to_json_string()).unwrap();
        prop_assert_eq!(back.edges(), net.edges());
        prop_assert_eq!(back.node_count(), net.node_count());
    }

    #[test]
    fn labelling_strings_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..100)) {
        let f = Labelling::from_bools(&bits);
        let back: Labelling = f.to_string().parse().unwrap();
        prop_assert_eq!(back.to_bools(), bits);
    }
}
