//! Successive shortest paths for min-cost flow, instrumented as a circuit
//! walk.
//!
//! Starting from the zero pseudoflow, each iteration routes flow from an
//! excess node to a deficit node along a cheapest residual path and takes
//! the bottleneck step. In polyhedron terms every iteration adds a maximal
//! multiple of the path circuit that lowers both endpoint slacks.

use crate::circuits::{max_step, StepLength};
use crate::geometry::zero_pseudoflow_vertex;
use crate::network::{build_residual, Direction, Network, NetworkKind, NodeId, ResidualArc};
use crate::pivot::{best_path_circuit, build_sspa_objective};
use crate::trace::WalkTrace;
use crate::{rat_zero, Error, Rational, Result};

/// How the excess/deficit pair of an iteration is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingRule {
    /// The globally cheapest pair over all excess and deficit nodes; ties by
    /// (step length, circuit key). This is the default and the choice the
    /// largest-improvement pivot rule reproduces.
    GlobalShortest,
    /// The smallest excess node with any reachable deficit, routed along
    /// its cheapest path (ties by step length and circuit key).
    SmallestExcessFirst,
}

#[derive(Debug, Clone, Copy)]
pub struct SspaOptions {
    pub pairing: PairingRule,
    /// Maintain node potentials and reduced costs as in the classical
    /// statement. Off, the searches run on original costs; the produced
    /// walk is identical either way.
    pub use_potentials: bool,
}

impl Default for SspaOptions {
    fn default() -> Self {
        SspaOptions {
            pairing: PairingRule::GlobalShortest,
            use_potentials: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SspaRun {
    pub trace: WalkTrace,
    pub flow: Vec<Rational>,
    pub total_cost: Rational,
}

pub fn run_sspa(net: &Network, options: SspaOptions) -> Result<SspaRun> {
    match net.kind() {
        NetworkKind::MinCost | NetworkKind::Assignment { .. } => {}
        _ => {
            return Err(Error::KindMismatch {
                algorithm: "sspa".to_string(),
            })
        }
    }
    let objective = build_sspa_objective(net)?;
    let n = net.node_count();
    let mut potentials: Vec<Rational> = vec![rat_zero(); n];
    let mut trace = WalkTrace::new(zero_pseudoflow_vertex(net));

    loop {
        let point = trace.terminal_point().clone();
        // remaining excess and deficit live on the slack coordinates
        let excess: Vec<NodeId> = net
            .nodes()
            .filter(|i| point.s_minus(*i) > rat_zero())
            .collect();
        let deficit: Vec<NodeId> = net
            .nodes()
            .filter(|i| point.s_plus(*i) > rat_zero())
            .collect();
        if excess.is_empty() {
            break;
        }
        let residual = build_residual(net, &point)?;
        let reduced = |arc: &ResidualArc| -> Rational {
            let base = match arc.direction {
                Direction::Forward => net.arc(arc.arc).cost.clone(),
                Direction::Backward => -net.arc(arc.arc).cost.clone(),
            };
            base - potentials[arc.from.0 as usize - 1].clone()
                + potentials[arc.to.0 as usize - 1].clone()
        };

        // candidate = (original path cost, step rank, circuit, source, target)
        let mut candidates = Vec::new();
        for &k in &excess {
            for &l in &deficit {
                let Some((reduced_cost, circuit)) = best_path_circuit(
                    net,
                    &point,
                    None,
                    &residual,
                    &reduced,
                    k,
                    l,
                    crate::circuits::PathVariant::MinusPlus,
                ) else {
                    continue;
                };
                let original_cost = reduced_cost + potentials[k.0 as usize - 1].clone()
                    - potentials[l.0 as usize - 1].clone();
                let rank = crate::pivot::step_rank(&max_step(net, &point, &circuit, None));
                candidates.push((original_cost, rank, circuit, k, l));
            }
            // the smallest excess node with any reachable deficit wins
            if options.pairing == PairingRule::SmallestExcessFirst && !candidates.is_empty() {
                break;
            }
        }
        let chosen = candidates.into_iter().min_by(|a, b| {
            (a.0.clone(), a.1.clone(), a.2.key()).cmp(&(b.0.clone(), b.1.clone(), b.2.key()))
        });
        let Some((_, _, circuit, k, l)) = chosen else {
            return Err(Error::Infeasible(format!(
                "excess remains at {:?} but no residual path reaches a deficit node",
                excess
            )));
        };

        if options.use_potentials {
            // π ← π - min(d, d(l)) with d the reduced-cost distances from k
            let dist =
                crate::pivot::residual_distances(net, &residual, &reduced, k).ok_or_else(|| {
                    Error::Validation("negative reduced-cost cycle in residual network".into())
                })?;
            let to_target = dist[l.0 as usize - 1]
                .clone()
                .expect("chosen pair is connected");
            for node in net.nodes() {
                let i = node.0 as usize - 1;
                let capped = match &dist[i] {
                    Some(d) => d.clone().min(to_target.clone()),
                    None => to_target.clone(),
                };
                potentials[i] -= capped;
            }
        }

        let StepLength::Finite(delta) = max_step(net, &point, &circuit, None) else {
            unreachable!("path circuits have bounded steps");
        };
        trace.push_step(net, &objective, circuit, delta);

        if options.use_potentials {
            // reduced costs stay nonnegative on the updated residual network
            let residual = build_residual(net, trace.terminal_point())?;
            debug_assert!(
                residual
                    .arcs()
                    .iter()
                    .all(|arc| reduced_cost_of(net, &potentials, arc) >= rat_zero()),
                "reduced cost dropped below zero after a potential update"
            );
        }
    }

    let point = trace.terminal_point();
    let flow: Vec<Rational> = net.arcs().iter().map(|a| point.x(a.id)).collect();
    let total_cost = net
        .arcs()
        .iter()
        .map(|a| a.cost.clone() * point.x(a.id))
        .sum();
    Ok(SspaRun {
        trace,
        flow,
        total_cost,
    })
}

fn reduced_cost_of(net: &Network, potentials: &[Rational], arc: &ResidualArc) -> Rational {
    let base = match arc.direction {
        Direction::Forward => net.arc(arc.arc).cost.clone(),
        Direction::Backward => -net.arc(arc.arc).cost.clone(),
    };
    base - potentials[arc.from.0 as usize - 1].clone() + potentials[arc.to.0 as usize - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{parse_network, ArcId, InputFormat};
    use crate::rat;
    use crate::trace::validate_walk;

    fn layered() -> Network {
        parse_network(
            include_str!("../../../../fixtures/layered.min"),
            InputFormat::DimacsMin,
        )
        .unwrap()
    }

    #[test]
    fn layered_walk_matches_the_reference_run() {
        let net = layered();
        let run = run_sspa(&net, SspaOptions::default()).unwrap();
        assert_eq!(run.trace.steps.len(), 4);
        assert_eq!(run.total_cost, rat(24));
        // pairs (1,9), (2,11), (3,10), (4,12) in that order
        let pairs: Vec<(NodeId, NodeId)> = run
            .trace
            .steps
            .iter()
            .map(|s| match s.circuit.kind {
                crate::circuits::CircuitKind::Path { from, to, .. } => (from, to),
                ref other => panic!("expected path circuit, got {other:?}"),
            })
            .collect();
        assert_eq!(
            pairs,
            vec![
                (NodeId(1), NodeId(9)),
                (NodeId(2), NodeId(11)),
                (NodeId(3), NodeId(10)),
                (NodeId(4), NodeId(12)),
            ]
        );
        // paths 1-5-7-9, 2-5-8-11, 3-6-7-10, 4-6-8-12 with unit steps
        let arc_sets: Vec<Vec<ArcId>> = run
            .trace
            .steps
            .iter()
            .map(|s| s.circuit.x.keys().copied().collect())
            .collect();
        assert_eq!(
            arc_sets,
            vec![
                vec![ArcId(1), ArcId(5), ArcId(9)],
                vec![ArcId(2), ArcId(7), ArcId(11)],
                vec![ArcId(3), ArcId(6), ArcId(10)],
                vec![ArcId(4), ArcId(8), ArcId(12)],
            ]
        );
        assert!(run.trace.steps.iter().all(|s| s.alpha == rat(1)));
        validate_walk(&net, None, &run.trace).unwrap();
    }

    #[test]
    fn potentials_do_not_change_the_walk() {
        let net = layered();
        let with = run_sspa(&net, SspaOptions::default()).unwrap();
        let without = run_sspa(
            &net,
            SspaOptions {
                use_potentials: false,
                ..SspaOptions::default()
            },
        )
        .unwrap();
        assert_eq!(with.trace, without.trace);
    }

    #[test]
    fn single_arc_instance_takes_one_step() {
        let net = parse_network(
            "p min 2 1\nn 1 1\nn 2 -1\na 1 2 0 1 1\n",
            InputFormat::DimacsMin,
        )
        .unwrap();
        let run = run_sspa(&net, SspaOptions::default()).unwrap();
        assert_eq!(run.trace.steps.len(), 1);
        let step = &run.trace.steps[0];
        assert_eq!(step.alpha, rat(1));
        assert_eq!(step.circuit.x[&ArcId(1)], 1);
        assert_eq!(step.circuit.s_plus[&NodeId(2)], -1);
        assert_eq!(step.circuit.s_minus[&NodeId(1)], -1);
    }

    #[test]
    fn detects_infeasibility() {
        let net = parse_network(
            "p min 3 1\nn 1 1\nn 3 -1\na 3 2 0 1 1\n",
            InputFormat::DimacsMin,
        )
        .unwrap();
        let err = run_sspa(&net, SspaOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err}");
    }

    #[test]
    fn smallest_excess_pairing_still_reaches_the_optimum() {
        let net = layered();
        let run = run_sspa(
            &net,
            SspaOptions {
                pairing: PairingRule::SmallestExcessFirst,
                ..SspaOptions::default()
            },
        )
        .unwrap();
        assert_eq!(run.total_cost, rat(24));
        validate_walk(&net, None, &run.trace).unwrap();
    }
}
