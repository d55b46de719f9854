//! Seeded random instance generation. Used by the test suites and by the
//! `gen` CLI command; a fixed seed always produces the same instance.

use crate::network::{Network, NetworkKind, NodeId};
use crate::{rat, rat_zero, Rational};
use rand::Rng;

/// A feasible min-cost instance: balances are the image of a random feasible
/// flow, so a feasible flow always exists. Costs are nonnegative integers.
pub fn random_min_cost<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    max_arcs: usize,
    max_capacity: i64,
    max_cost: i64,
) -> Network {
    let n = rng.gen_range(2..=max_nodes.max(2));
    let m = rng.gen_range(1..=max_arcs.max(1));
    let mut arcs = Vec::with_capacity(m);
    let mut supporting_flow = Vec::with_capacity(m);
    for _ in 0..m {
        let tail = rng.gen_range(1..=n) as u32;
        let mut head = rng.gen_range(1..=n) as u32;
        while head == tail {
            head = rng.gen_range(1..=n) as u32;
        }
        let capacity = rng.gen_range(1..=max_capacity.max(1));
        let cost = rng.gen_range(0..=max_cost.max(0));
        supporting_flow.push(rng.gen_range(0..=capacity));
        arcs.push((NodeId(tail), NodeId(head), rat(capacity), rat(cost)));
    }
    let mut balances = vec![rat_zero(); n];
    for ((tail, head, _, _), flow) in arcs.iter().zip(&supporting_flow) {
        balances[tail.0 as usize - 1] += rat(*flow);
        balances[head.0 as usize - 1] -= rat(*flow);
    }
    Network::new(n, arcs, balances, NetworkKind::MinCost)
        .expect("generated instance is valid by construction")
}

/// A max-flow instance on nodes 1..n with source 1 and sink n. Arcs avoid
/// self-loops and arcs into the source or out of the sink, so distance
/// labels behave; connectivity is not forced.
pub fn random_max_flow<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    max_arcs: usize,
    max_capacity: i64,
) -> Network {
    let n = rng.gen_range(3..=max_nodes.max(3));
    let m = rng.gen_range(1..=max_arcs.max(1));
    let source = NodeId(1);
    let sink = NodeId(n as u32);
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        loop {
            let tail = rng.gen_range(1..=n) as u32;
            let head = rng.gen_range(1..=n) as u32;
            if tail == head || head == source.0 || tail == sink.0 {
                continue;
            }
            let capacity = rng.gen_range(1..=max_capacity.max(1));
            arcs.push((NodeId(tail), NodeId(head), rat(capacity), rat_zero()));
            break;
        }
    }
    let balances = vec![rat_zero(); n];
    Network::new(n, arcs, balances, NetworkKind::MaxFlow { source, sink })
        .expect("generated instance is valid by construction")
}

/// A square nonnegative integer cost matrix.
pub fn random_assignment<R: Rng>(
    rng: &mut R,
    max_size: usize,
    max_cost: i64,
) -> Vec<Vec<Rational>> {
    let k = rng.gen_range(1..=max_size.max(1));
    (0..k)
        .map(|_| {
            (0..k)
                .map(|_| rat(rng.gen_range(0..=max_cost.max(0))))
                .collect()
        })
        .collect()
}

/// A tiny circulation-style instance whose coordinate count m + 2n stays at
/// or below `max_coords`; suitable for exhaustive circuit enumeration.
pub fn random_tiny_network<R: Rng>(rng: &mut R, max_coords: usize) -> Network {
    let n = rng.gen_range(2..=((max_coords.saturating_sub(1)) / 2).clamp(2, 5));
    let max_m = max_coords.saturating_sub(2 * n).max(1);
    let m = rng.gen_range(1..=max_m);
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let tail = rng.gen_range(1..=n) as u32;
        let mut head = rng.gen_range(1..=n) as u32;
        while head == tail {
            head = rng.gen_range(1..=n) as u32;
        }
        let capacity = rng.gen_range(1..=3i64);
        let cost = rng.gen_range(0..=4i64);
        arcs.push((NodeId(tail), NodeId(head), rat(capacity), rat(cost)));
    }
    let balances = vec![rat_zero(); n];
    Network::new(n, arcs, balances, NetworkKind::MinCost)
        .expect("generated instance is valid by construction")
}
