//! Augmenting-path max flow, instrumented as a circuit walk.
//!
//! Each iteration finds a source-to-sink path in the residual network and
//! saturates its bottleneck. The corresponding circuit raises the source's
//! s⁺ and the sink's s⁻ by the bottleneck; all other slacks stay zero.

use crate::circuits::{max_step, PathVariant, StepLength};
use crate::geometry::zero_pseudoflow_vertex;
use crate::network::{build_residual, Network, NetworkKind};
use crate::pivot::{bfs_path_circuit, build_maxflow_objective, dfs_path};
use crate::trace::WalkTrace;
use crate::{Error, Rational, Result};
use std::collections::BTreeSet;

/// How the augmenting path of an iteration is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathRule {
    /// Fewest arcs; ties by (step length, circuit key). This is the
    /// shortest-augmenting-path variant.
    Bfs,
    /// First path found by depth-first search in arc-id order.
    Dfs,
}

#[derive(Debug, Clone)]
pub struct GapaRun {
    pub trace: WalkTrace,
    pub flow: Vec<Rational>,
    pub flow_value: Rational,
}

pub fn run_gapa(net: &Network, rule: PathRule) -> Result<GapaRun> {
    let NetworkKind::MaxFlow { source, sink } = *net.kind() else {
        return Err(Error::KindMismatch {
            algorithm: "gapa".to_string(),
        });
    };
    let objective = build_maxflow_objective(net)?;
    let mut trace = WalkTrace::new(zero_pseudoflow_vertex(net));
    loop {
        let point = trace.terminal_point().clone();
        let residual = build_residual(net, &point)?;
        let circuit = match rule {
            PathRule::Bfs => bfs_path_circuit(net, &point, None, &residual, source, sink),
            PathRule::Dfs => {
                let mut visited = BTreeSet::from([source]);
                let mut stack = Vec::new();
                if dfs_path(&residual, source, sink, &mut visited, &mut stack) {
                    Some(crate::circuits::path_circuit(
                        net,
                        &stack,
                        PathVariant::PlusMinus,
                        1,
                    )?)
                } else {
                    None
                }
            }
        };
        let Some(circuit) = circuit else {
            break; // no augmenting path left: the flow is maximum
        };
        let StepLength::Finite(delta) = max_step(net, &point, &circuit, None) else {
            unreachable!("augmenting-path circuits are bounded by arc capacities");
        };
        trace.push_step(net, &objective, circuit, delta);
    }
    let point = trace.terminal_point();
    let flow: Vec<Rational> = net.arcs().iter().map(|a| point.x(a.id)).collect();
    let flow_value = point.s_plus(source);
    Ok(GapaRun {
        trace,
        flow,
        flow_value,
    })
}
