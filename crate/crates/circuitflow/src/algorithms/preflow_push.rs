//! Generic preflow-push max flow, instrumented as a circuit walk.
//!
//! The pre-processing saturates every source arc; afterwards each push moves
//! excess along an admissible residual arc and each relabel lifts a distance
//! label. Every push is one maximal circuit step that shifts excess between
//! the endpoint slacks; relabels change no coordinates and are recorded as
//! events.

use crate::circuits::{max_step, path_circuit, PathVariant, StepLength};
use crate::geometry::zero_pseudoflow_vertex;
use crate::network::{build_residual, Direction, Network, NetworkKind, NodeId, ResidualNetwork};
use crate::pivot::build_maxflow_objective;
use crate::trace::{TraceEvent, WalkTrace};
use crate::{rat_zero, Error, Rational, Result};
use std::collections::VecDeque;

/// How the active node of an iteration is selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActiveRule {
    /// Queue in activation order; the front node is discharged until its
    /// excess is gone, relabeling in between.
    Fifo,
    /// Smallest active node id, one operation per selection.
    LowestId,
    /// First active node in the given preference list, then smallest id;
    /// one operation per selection.
    Preference(Vec<NodeId>),
}

#[derive(Debug, Clone)]
pub struct PfpRun {
    pub trace: WalkTrace,
    pub flow: Vec<Rational>,
    pub flow_value: Rational,
    /// Final distance labels.
    pub labels: Vec<u64>,
}

pub fn run_preflow_push(net: &Network, rule: ActiveRule) -> Result<PfpRun> {
    let NetworkKind::MaxFlow { source, sink } = *net.kind() else {
        return Err(Error::KindMismatch {
            algorithm: "preflow-push".to_string(),
        });
    };
    let n = net.node_count();
    let objective = build_maxflow_objective(net)?;
    let mut trace = WalkTrace::new(zero_pseudoflow_vertex(net));

    // exact distance-to-sink labels over the initial (zero-flow) network;
    // nodes that cannot reach the sink start at n
    let mut labels: Vec<u64> = vec![n as u64; n];
    labels[sink.0 as usize - 1] = 0;
    let mut queue = VecDeque::from([sink]);
    while let Some(v) = queue.pop_front() {
        for arc in net.arcs() {
            if arc.head == v && arc.capacity > rat_zero() {
                let u = arc.tail.0 as usize - 1;
                if labels[u] == n as u64 && arc.tail != sink {
                    labels[u] = labels[v.0 as usize - 1] + 1;
                    queue.push_back(arc.tail);
                }
            }
        }
    }
    labels[source.0 as usize - 1] = n as u64;

    // pre-processing: saturate every arc out of the source
    let mut activation_order: Vec<NodeId> = Vec::new();
    for arc in net.arcs() {
        if arc.tail == source && arc.capacity > rat_zero() {
            let circuit = path_circuit(
                net,
                &[(arc.id, Direction::Forward)],
                PathVariant::PlusMinus,
                1,
            )?;
            let point = trace.terminal_point().clone();
            let StepLength::Finite(alpha) = max_step(net, &point, &circuit, None) else {
                unreachable!("saturation steps are bounded by the arc capacity");
            };
            trace.push_step(net, &objective, circuit, alpha);
            if arc.head != sink && !activation_order.contains(&arc.head) {
                activation_order.push(arc.head);
            }
        }
    }

    let is_active = |trace: &WalkTrace, node: NodeId| -> bool {
        node != source && node != sink && trace.terminal_point().s_minus(node) > rat_zero()
    };

    let mut fifo: VecDeque<NodeId> = activation_order.into_iter().collect();
    // generic push-relabel performs O(n²m) operations
    let operation_cap = 8 * n * n * net.arc_count().max(1) + 4 * n * n + 256;
    let mut operations = 0usize;
    loop {
        operations += 1;
        if operations > operation_cap {
            return Err(Error::Validation(
                "preflow-push exceeded its operation budget".to_string(),
            ));
        }
        let active: Vec<NodeId> = net.nodes().filter(|i| is_active(&trace, *i)).collect();
        if active.is_empty() {
            break;
        }
        let node = match &rule {
            ActiveRule::Fifo => loop {
                match fifo.front() {
                    Some(front) if is_active(&trace, *front) => break *front,
                    Some(_) => {
                        fifo.pop_front();
                    }
                    None => break active[0],
                }
            },
            ActiveRule::LowestId => active[0],
            ActiveRule::Preference(order) => order
                .iter()
                .copied()
                .find(|i| is_active(&trace, *i))
                .unwrap_or(active[0]),
        };

        let point = trace.terminal_point().clone();
        let residual = build_residual(net, &point)?;
        match admissible_arc(&residual, &labels, node) {
            Some((arc_id, direction, to)) => {
                let variant = if to == source {
                    PathVariant::MinusPlus
                } else {
                    PathVariant::MinusMinus
                };
                let circuit = path_circuit(net, &[(arc_id, direction)], variant, 1)?;
                let StepLength::Finite(alpha) = max_step(net, &point, &circuit, None) else {
                    unreachable!("push steps are bounded by residual capacity and excess");
                };
                trace.push_step(net, &objective, circuit, alpha);
                if let ActiveRule::Fifo = rule {
                    if to != source && to != sink && !fifo.contains(&to) {
                        fifo.push_back(to);
                    }
                }
            }
            None => {
                let old_label = labels[node.0 as usize - 1];
                let new_label = residual
                    .outgoing(node)
                    .map(|arc| labels[arc.to.0 as usize - 1] + 1)
                    .min()
                    .ok_or_else(|| {
                        Error::Validation(format!(
                            "active node {node} has no residual arc to relabel along"
                        ))
                    })?;
                labels[node.0 as usize - 1] = new_label;
                trace.events.push(TraceEvent::Relabel {
                    node,
                    old_label,
                    new_label,
                    after_step: trace.steps.len(),
                });
            }
        }
    }

    let point = trace.terminal_point();
    let flow: Vec<Rational> = net.arcs().iter().map(|a| point.x(a.id)).collect();
    let flow_value = point.s_minus(sink);
    Ok(PfpRun {
        trace,
        flow,
        flow_value,
        labels,
    })
}

fn admissible_arc(
    residual: &ResidualNetwork,
    labels: &[u64],
    node: NodeId,
) -> Option<(crate::network::ArcId, Direction, NodeId)> {
    residual
        .outgoing(node)
        .find(|arc| labels[node.0 as usize - 1] == labels[arc.to.0 as usize - 1] + 1)
        .map(|arc| (arc.arc, arc.direction, arc.to))
}
