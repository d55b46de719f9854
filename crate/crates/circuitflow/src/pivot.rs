//! Objectives, pivot rules, candidate generation, and the maximal-step
//! circuit-augmentation loop.
//!
//! The three objective builders implement the penalty constructions that turn
//! a pivot rule into a replay of a combinatorial algorithm: a uniform slack
//! penalty for the min-cost walk, a source/sink reward with penalties
//! elsewhere for max flow, and a per-node ordered penalty schedule for the
//! assignment walk.
//!
//! Ties between equally good circuits are broken everywhere by the pair
//! (maximal step length, [`Circuit::key`]), ascending. The combinatorial
//! runners in [`crate::algorithms`] use the same order, so replication
//! checks compare walks step for step instead of up to equivalence.

use crate::circuits::{
    cycle_circuit, max_step, path_circuit, trivial_circuit, Circuit, PathVariant, StepLength,
};
use crate::geometry::{check_feasible, is_vertex, FaceSpec, PseudoflowPoint};
use crate::network::{
    build_residual, ArcId, Direction, Network, NetworkKind, NodeId, ResidualNetwork,
};
use crate::trace::{TraceEvent, TraceStatus, WalkTrace};
use crate::{rat, rat_zero, Error, Rational, Result};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn name(&self) -> &'static str {
        match self {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        }
    }
}

/// A cost vector over all m + 2n coordinates plus an optimization sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub x: Vec<Rational>,
    pub s_plus: Vec<Rational>,
    pub s_minus: Vec<Rational>,
    pub sense: Sense,
}

impl Objective {
    pub fn new(net: &Network, sense: Sense) -> Self {
        Objective {
            x: vec![rat_zero(); net.arc_count()],
            s_plus: vec![rat_zero(); net.node_count()],
            s_minus: vec![rat_zero(); net.node_count()],
            sense,
        }
    }

    pub fn x_cost(&self, arc: ArcId) -> Rational {
        self.x[arc.0 as usize - 1].clone()
    }

    /// c^T y at a point.
    pub fn value(&self, net: &Network, point: &PseudoflowPoint) -> Rational {
        let mut total = rat_zero();
        for arc in net.arcs() {
            total += self.x_cost(arc.id) * point.x(arc.id);
        }
        for node in net.nodes() {
            let i = node.0 as usize - 1;
            total += self.s_plus[i].clone() * point.s_plus(node);
            total += self.s_minus[i].clone() * point.s_minus(node);
        }
        total
    }

    /// Objective gain of a unit step along `circuit`: c^T g for a
    /// maximization problem, -c^T g for a minimization problem. Positive
    /// means improving.
    pub fn improvement(&self, circuit: &Circuit) -> Rational {
        let mut total = rat_zero();
        for (arc, sign) in &circuit.x {
            total += self.x_cost(*arc) * rat(*sign as i64);
        }
        for (node, sign) in &circuit.s_plus {
            total += self.s_plus[node.0 as usize - 1].clone() * rat(*sign as i64);
        }
        for (node, sign) in &circuit.s_minus {
            total += self.s_minus[node.0 as usize - 1].clone() * rat(*sign as i64);
        }
        match self.sense {
            Sense::Maximize => total,
            Sense::Minimize => -total,
        }
    }
}

/// Slack penalty for the min-cost walk: arc costs stay, every slack costs
/// M = 1 + Σ costs, minimizing. Any circuit that reduces two slacks then
/// dominates every other circuit type.
pub fn build_sspa_objective(net: &Network) -> Result<Objective> {
    match net.kind() {
        NetworkKind::MinCost | NetworkKind::Assignment { .. } => {}
        _ => {
            return Err(Error::KindMismatch {
                algorithm: "min-cost objective".to_string(),
            })
        }
    }
    let penalty: Rational = rat(1) + net.arcs().iter().map(|a| a.cost.clone()).sum::<Rational>();
    let mut objective = Objective::new(net, Sense::Minimize);
    for arc in net.arcs() {
        objective.x[arc.id.0 as usize - 1] = arc.cost.clone();
    }
    objective.s_plus = vec![penalty.clone(); net.node_count()];
    objective.s_minus = vec![penalty; net.node_count()];
    Ok(objective)
}

/// Max-flow reward: zero arc costs, +1 on the source's s⁺ and the sink's
/// s⁻, -M on every other slack, maximizing. M = 4 (any M > 3 works); every
/// source-to-sink path circuit is then worth exactly +2.
pub fn build_maxflow_objective(net: &Network) -> Result<Objective> {
    let NetworkKind::MaxFlow { source, sink } = net.kind() else {
        return Err(Error::KindMismatch {
            algorithm: "max-flow objective".to_string(),
        });
    };
    let mut objective = Objective::new(net, Sense::Maximize);
    objective.s_plus = vec![rat(-4); net.node_count()];
    objective.s_minus = vec![rat(-4); net.node_count()];
    objective.s_plus[source.0 as usize - 1] = rat(1);
    objective.s_minus[sink.0 as usize - 1] = rat(1);
    Ok(objective)
}

/// Ordered slack penalties for replaying an observed assignment run: with
/// D = 1 + Σ costs and M = 2D(k+1), the i-th matched pair (ℓ_i, t_i) gets
/// penalty M - 2D·i on s⁻_{ℓ_i} and s⁺_{t_i}. The 2D gap dominates any
/// path-cost difference, so the largest-improvement circuit always connects
/// the next pair of the recorded order.
pub fn build_hm_order_objective(net: &Network, order: &[(NodeId, NodeId)]) -> Result<Objective> {
    let NetworkKind::Assignment { left, right } = net.kind() else {
        return Err(Error::KindMismatch {
            algorithm: "assignment order objective".to_string(),
        });
    };
    let k = left.len();
    if order.len() != k {
        return Err(Error::BadArgument(format!(
            "order must pair all {} rows, got {} pairs",
            k,
            order.len()
        )));
    }
    let lefts: BTreeSet<NodeId> = order.iter().map(|(l, _)| *l).collect();
    let rights: BTreeSet<NodeId> = order.iter().map(|(_, t)| *t).collect();
    if lefts.len() != k
        || rights.len() != k
        || !left.iter().all(|l| lefts.contains(l))
        || !right.iter().all(|t| rights.contains(t))
    {
        return Err(Error::BadArgument(
            "order is not a bijection between the two sides".to_string(),
        ));
    }
    let d: Rational = rat(1) + net.arcs().iter().map(|a| a.cost.clone()).sum::<Rational>();
    let m = rat(2) * d.clone() * rat(k as i64 + 1);
    let mut objective = Objective::new(net, Sense::Minimize);
    for arc in net.arcs() {
        objective.x[arc.id.0 as usize - 1] = arc.cost.clone();
    }
    objective.s_plus = vec![m.clone(); net.node_count()];
    objective.s_minus = vec![m.clone(); net.node_count()];
    for (i, (l, t)) in order.iter().enumerate() {
        let discount = rat(2) * d.clone() * rat(i as i64 + 1);
        objective.s_minus[l.0 as usize - 1] = m.clone() - discount.clone();
        objective.s_plus[t.0 as usize - 1] = m.clone() - discount;
    }
    Ok(objective)
}

/// How to pick among improving feasible circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Maximal improvement.
    Dantzig,
    /// Maximal improvement divided by the number of inequality rows the
    /// direction moves off (two per arc coordinate, one per slack).
    SteepestAscent,
    /// First improving circuit in candidate order.
    FirstImproving,
}

impl PivotRule {
    pub fn name(&self) -> &'static str {
        match self {
            PivotRule::Dantzig => "dantzig",
            PivotRule::SteepestAscent => "steepest",
            PivotRule::FirstImproving => "first",
        }
    }

    pub fn from_name(name: &str) -> Option<PivotRule> {
        match name {
            "dantzig" => Some(PivotRule::Dantzig),
            "steepest" | "steepest-ascent" => Some(PivotRule::SteepestAscent),
            "first" | "first-improving" => Some(PivotRule::FirstImproving),
            _ => None,
        }
    }
}

/// Path search used for max-flow candidates in structured mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathSearch {
    Bfs,
    Dfs,
}

/// Candidate generation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateMode {
    /// Circuits suggested by the network structure at the current point:
    /// one cheapest path circuit per unpinned excess/deficit slack pair (or
    /// the searched augmenting path for max-flow instances), negative-cost
    /// residual cycles, and feasible trivial circuits. Complete for the
    /// objectives built in this module; not for arbitrary ones.
    Structured { primary_path: PathSearch },
    /// Every feasible circuit, from full enumeration. Size-guarded.
    Exhaustive,
}

impl Default for CandidateMode {
    fn default() -> Self {
        CandidateMode::Structured {
            primary_path: PathSearch::Bfs,
        }
    }
}

/// Ascending order on maximal step lengths, unbounded last.
pub(crate) fn step_rank(step: &StepLength) -> (bool, Rational) {
    match step {
        StepLength::Finite(a) => (false, a.clone()),
        StepLength::Unbounded => (true, rat_zero()),
    }
}

/// Shortest-path distances in a residual network by label correcting
/// (costs may be negative after augmentation). Returns None when a negative
/// cycle is reachable, in which case no tight-path enumeration is sound.
pub(crate) fn residual_distances(
    net: &Network,
    residual: &ResidualNetwork,
    costs: &dyn Fn(&crate::network::ResidualArc) -> Rational,
    source: NodeId,
) -> Option<Vec<Option<Rational>>> {
    let n = net.node_count();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    dist[source.0 as usize - 1] = Some(rat_zero());
    for round in 0..n {
        let mut changed = false;
        for arc in residual.arcs() {
            let Some(du) = dist[arc.from.0 as usize - 1].clone() else {
                continue;
            };
            let candidate = du + costs(arc);
            let slot = &mut dist[arc.to.0 as usize - 1];
            if slot.is_none() || candidate < *slot.as_ref().unwrap() {
                *slot = Some(candidate);
                changed = true;
            }
        }
        if !changed {
            return Some(dist);
        }
        if round == n - 1 {
            return None;
        }
    }
    Some(dist)
}

/// All simple paths from `from` to `to` that use only distance-tight
/// residual arcs; every such path is a cheapest path.
pub(crate) fn tight_paths(
    residual: &ResidualNetwork,
    costs: &dyn Fn(&crate::network::ResidualArc) -> Rational,
    dist: &[Option<Rational>],
    from: NodeId,
    to: NodeId,
) -> Vec<Vec<(ArcId, Direction)>> {
    let mut paths = Vec::new();
    let mut stack: Vec<(ArcId, Direction)> = Vec::new();
    let mut visited: BTreeSet<NodeId> = BTreeSet::new();
    visited.insert(from);
    #[allow(clippy::too_many_arguments)]
    fn go(
        residual: &ResidualNetwork,
        costs: &dyn Fn(&crate::network::ResidualArc) -> Rational,
        dist: &[Option<Rational>],
        at: NodeId,
        to: NodeId,
        visited: &mut BTreeSet<NodeId>,
        stack: &mut Vec<(ArcId, Direction)>,
        paths: &mut Vec<Vec<(ArcId, Direction)>>,
    ) {
        if at == to {
            paths.push(stack.clone());
            return;
        }
        for arc in residual.outgoing(at) {
            if visited.contains(&arc.to) {
                continue;
            }
            let (Some(du), Some(dv)) = (
                dist[arc.from.0 as usize - 1].as_ref(),
                dist[arc.to.0 as usize - 1].as_ref(),
            ) else {
                continue;
            };
            if du.clone() + costs(arc) != *dv {
                continue;
            }
            visited.insert(arc.to);
            stack.push((arc.arc, arc.direction));
            go(residual, costs, dist, arc.to, to, visited, stack, paths);
            stack.pop();
            visited.remove(&arc.to);
        }
    }
    go(
        residual,
        costs,
        dist,
        from,
        to,
        &mut visited,
        &mut stack,
        &mut paths,
    );
    paths
}

/// Cheapest residual path from `from` to `to` under `costs`, as the circuit
/// of `variant`; ties resolved by (maximal step, circuit key). None when no
/// path exists or a reachable negative cycle spoils the search.
#[allow(clippy::too_many_arguments)]
pub(crate) fn best_path_circuit(
    net: &Network,
    point: &PseudoflowPoint,
    face: Option<&FaceSpec>,
    residual: &ResidualNetwork,
    costs: &dyn Fn(&crate::network::ResidualArc) -> Rational,
    from: NodeId,
    to: NodeId,
    variant: PathVariant,
) -> Option<(Rational, Circuit)> {
    let dist = residual_distances(net, residual, costs, from)?;
    dist[to.0 as usize - 1].as_ref()?;
    let paths = tight_paths(residual, costs, &dist, from, to);
    let mut best: Option<((bool, Rational), Circuit)> = None;
    for path in paths {
        let Ok(circuit) = path_circuit(net, &path, variant, 1) else {
            continue;
        };
        let alpha = max_step(net, point, &circuit, face);
        let rank = step_rank(&alpha);
        let better = match &best {
            None => true,
            Some((best_rank, best_circuit)) => {
                (rank.clone(), circuit.key()) < (best_rank.clone(), best_circuit.key())
            }
        };
        if better {
            best = Some((rank, circuit));
        }
    }
    let cost = dist[to.0 as usize - 1].clone().unwrap();
    best.map(|(_, c)| (cost, c))
}

/// Negative-cost residual cycles reachable by label correcting, as cycle
/// circuits. Finds a nonempty set whenever one exists.
pub(crate) fn negative_cycle_circuits(
    net: &Network,
    residual: &ResidualNetwork,
    costs: &dyn Fn(&crate::network::ResidualArc) -> Rational,
) -> Vec<Circuit> {
    let n = net.node_count();
    // virtual super-source: distance 0 everywhere
    let mut dist: Vec<Rational> = vec![rat_zero(); n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut marked: Vec<usize> = Vec::new();
    for round in 0..=n {
        let mut changed = false;
        for (i, arc) in residual.arcs().iter().enumerate() {
            let candidate = dist[arc.from.0 as usize - 1].clone() + costs(arc);
            if candidate < dist[arc.to.0 as usize - 1] {
                dist[arc.to.0 as usize - 1] = candidate;
                pred[arc.to.0 as usize - 1] = Some(i);
                changed = true;
                if round == n {
                    marked.push(arc.to.0 as usize - 1);
                }
            }
        }
        if !changed {
            return Vec::new();
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in marked {
        // walk predecessors n times to land on the cycle, then extract it
        let mut node = start;
        for _ in 0..n {
            let Some(p) = pred[node] else { break };
            node = residual.arcs()[p].from.0 as usize - 1;
        }
        let anchor = node;
        let mut arcs_rev: Vec<(ArcId, Direction)> = Vec::new();
        let mut cursor = anchor;
        while let Some(p) = pred[cursor] {
            let arc = &residual.arcs()[p];
            arcs_rev.push((arc.arc, arc.direction));
            cursor = arc.from.0 as usize - 1;
            if cursor == anchor {
                break;
            }
        }
        arcs_rev.reverse();
        if arcs_rev.len() < 2 {
            continue;
        }
        if let Ok(circuit) = cycle_circuit(net, &arcs_rev, 1) {
            if seen.insert(circuit.key()) {
                out.push(circuit);
            }
        }
    }
    out
}

pub(crate) fn bfs_hops(
    net: &Network,
    residual: &ResidualNetwork,
    source: NodeId,
) -> Vec<Option<usize>> {
    let mut hops = vec![None; net.node_count()];
    hops[source.0 as usize - 1] = Some(0);
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = hops[u.0 as usize - 1].unwrap();
        for arc in residual.outgoing(u) {
            let slot = &mut hops[arc.to.0 as usize - 1];
            if slot.is_none() {
                *slot = Some(du + 1);
                queue.push_back(arc.to);
            }
        }
    }
    hops
}

/// First source-to-sink residual path found by depth-first search in
/// (arc id, forward-before-backward) order.
pub(crate) fn dfs_path(
    residual: &ResidualNetwork,
    at: NodeId,
    to: NodeId,
    visited: &mut BTreeSet<NodeId>,
    stack: &mut Vec<(ArcId, Direction)>,
) -> bool {
    if at == to {
        return true;
    }
    for arc in residual.outgoing(at) {
        if visited.contains(&arc.to) {
            continue;
        }
        visited.insert(arc.to);
        stack.push((arc.arc, arc.direction));
        if dfs_path(residual, arc.to, to, visited, stack) {
            return true;
        }
        stack.pop();
    }
    false
}

/// Min-hop source-to-sink path circuit, ties by (maximal step, circuit key).
pub(crate) fn bfs_path_circuit(
    net: &Network,
    point: &PseudoflowPoint,
    face: Option<&FaceSpec>,
    residual: &ResidualNetwork,
    source: NodeId,
    sink: NodeId,
) -> Option<Circuit> {
    let hops = bfs_hops(net, residual, source);
    hops[sink.0 as usize - 1]?;
    let as_rational: Vec<Option<Rational>> =
        hops.iter().map(|h| h.map(|v| rat(v as i64))).collect();
    let unit = |_: &crate::network::ResidualArc| rat(1);
    let paths = tight_paths(residual, &unit, &as_rational, source, sink);
    let mut best: Option<((bool, Rational), Circuit)> = None;
    for path in paths {
        let Ok(circuit) = path_circuit(net, &path, PathVariant::PlusMinus, 1) else {
            continue;
        };
        let rank = step_rank(&max_step(net, point, &circuit, face));
        let better = match &best {
            None => true,
            Some((r, c)) => (rank.clone(), circuit.key()) < (r.clone(), c.key()),
        };
        if better {
            best = Some((rank, circuit));
        }
    }
    best.map(|(_, c)| c)
}

/// Candidate circuits at a point. Structured mode derives them from the
/// residual network; exhaustive mode filters the full enumeration down to
/// the feasible ones. Order is deterministic.
pub fn candidate_circuits(
    net: &Network,
    point: &PseudoflowPoint,
    face: &FaceSpec,
    mode: CandidateMode,
) -> Result<Vec<Circuit>> {
    match mode {
        CandidateMode::Exhaustive => {
            let all = crate::circuits::enumerate_circuits(net)?;
            Ok(all
                .into_iter()
                .filter(|c| max_step(net, point, c, Some(face)).is_positive())
                .collect())
        }
        CandidateMode::Structured { primary_path } => {
            structured_candidates(net, point, face, primary_path)
        }
    }
}

fn structured_candidates(
    net: &Network,
    point: &PseudoflowPoint,
    face: &FaceSpec,
    primary_path: PathSearch,
) -> Result<Vec<Circuit>> {
    let residual = build_residual(net, point)?;
    let mut out: Vec<Circuit> = Vec::new();
    let mut seen: BTreeSet<crate::circuits::CircuitKey> = BTreeSet::new();
    let mut push = |c: Circuit, seen: &mut BTreeSet<crate::circuits::CircuitKey>| {
        if seen.insert(c.key()) {
            out.push(c);
        }
    };

    let arc_costs = |arc: &crate::network::ResidualArc| -> Rational {
        match arc.direction {
            Direction::Forward => net.arc(arc.arc).cost.clone(),
            Direction::Backward => -net.arc(arc.arc).cost.clone(),
        }
    };

    match net.kind() {
        NetworkKind::MaxFlow { source, sink } => {
            let mut primary = Vec::new();
            let bfs = bfs_path_circuit(net, point, Some(face), &residual, *source, *sink);
            let mut dfs_stack = Vec::new();
            let mut visited = BTreeSet::from([*source]);
            let dfs = if dfs_path(&residual, *source, *sink, &mut visited, &mut dfs_stack) {
                path_circuit(net, &dfs_stack, PathVariant::PlusMinus, 1).ok()
            } else {
                None
            };
            match primary_path {
                PathSearch::Bfs => primary.extend([bfs, dfs]),
                PathSearch::Dfs => primary.extend([dfs, bfs]),
            }
            for circuit in primary.into_iter().flatten() {
                push(circuit, &mut seen);
            }
        }
        NetworkKind::MinCost | NetworkKind::Assignment { .. } => {
            // one cheapest path circuit per (excess, deficit) slack pair
            let excess: Vec<NodeId> = net
                .nodes()
                .filter(|i| point.s_minus(*i) > rat_zero())
                .collect();
            let deficit: Vec<NodeId> = net
                .nodes()
                .filter(|i| point.s_plus(*i) > rat_zero())
                .collect();
            for &k in &excess {
                for &l in &deficit {
                    if k == l {
                        continue;
                    }
                    if let Some((_, circuit)) = best_path_circuit(
                        net,
                        point,
                        Some(face),
                        &residual,
                        &arc_costs,
                        k,
                        l,
                        PathVariant::MinusPlus,
                    ) {
                        push(circuit, &mut seen);
                    }
                }
            }
        }
    }

    for circuit in negative_cycle_circuits(net, &residual, &arc_costs) {
        push(circuit, &mut seen);
    }

    for node in net.nodes() {
        for sign in [1, -1] {
            let circuit = trivial_circuit(net, node, sign)?;
            if max_step(net, point, &circuit, Some(face)).is_positive() {
                push(circuit, &mut seen);
            }
        }
    }

    Ok(out
        .into_iter()
        .filter(|c| max_step(net, point, c, Some(face)).is_positive())
        .collect())
}

/// Applies a pivot rule to a candidate list. Returns the chosen circuit, or
/// None when no candidate is both feasible (positive maximal step inside the
/// face) and improving. Ties are broken by (maximal step, circuit key).
pub fn select_circuit(
    net: &Network,
    face: &FaceSpec,
    candidates: &[Circuit],
    point: &PseudoflowPoint,
    objective: &Objective,
    rule: PivotRule,
) -> Option<Circuit> {
    let mut best: Option<(Rational, (bool, Rational), Circuit)> = None;
    for candidate in candidates {
        let alpha = max_step(net, point, candidate, Some(face));
        if !alpha.is_positive() {
            continue;
        }
        let improvement = objective.improvement(candidate);
        if improvement <= rat_zero() {
            continue;
        }
        let score = match rule {
            PivotRule::Dantzig => improvement,
            PivotRule::SteepestAscent => improvement / rat(candidate.bound_row_activity() as i64),
            PivotRule::FirstImproving => return Some(candidate.clone()),
        };
        let rank = step_rank(&alpha);
        let better = match &best {
            None => true,
            Some((best_score, best_rank, best_circuit)) => {
                score > *best_score
                    || (score == *best_score
                        && (rank.clone(), candidate.key())
                            < (best_rank.clone(), best_circuit.key()))
            }
        };
        if better {
            best = Some((score, rank, candidate.clone()));
        }
    }
    best.map(|(_, _, c)| c)
}

/// Default iteration cap for [`augment`].
pub const DEFAULT_STEP_LIMIT: usize = 10_000;

/// The generic scheme: from a vertex, repeatedly select an improving
/// feasible circuit and take the maximal step, recording every step.
pub fn augment(
    net: &Network,
    face: &FaceSpec,
    objective: &Objective,
    rule: PivotRule,
    start: PseudoflowPoint,
    step_limit: usize,
    mode: CandidateMode,
) -> Result<WalkTrace> {
    let report = check_feasible(net, &start, Some(face));
    if !report.is_feasible() {
        return Err(Error::InfeasiblePoint(format!("start: {report}")));
    }
    if !is_vertex(net, &start)? {
        return Err(Error::BadArgument(
            "augmentation must start at a vertex".to_string(),
        ));
    }
    let mut trace = WalkTrace::new(start);
    loop {
        let point = trace.terminal_point().clone();
        let candidates = candidate_circuits(net, &point, face, mode)?;
        let Some(circuit) = select_circuit(net, face, &candidates, &point, objective, rule) else {
            trace.status = TraceStatus::Optimal;
            break;
        };
        match max_step(net, &point, &circuit, Some(face)) {
            StepLength::Unbounded => {
                trace
                    .events
                    .push(TraceEvent::UnboundedDirection { circuit });
                trace.status = TraceStatus::Unbounded;
                break;
            }
            StepLength::Finite(alpha) => {
                debug_assert!(alpha > rat_zero());
                trace.push_step(net, objective, circuit, alpha);
            }
        }
        if trace.steps.len() >= step_limit {
            trace.status = TraceStatus::Stalled;
            break;
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{face_for, zero_pseudoflow_vertex, Algorithm};
    use crate::network::{parse_network, InputFormat};
    use num_traits::Zero;

    fn layered() -> Network {
        parse_network(
            include_str!("../../../fixtures/layered.min"),
            InputFormat::DimacsMin,
        )
        .unwrap()
    }

    fn sixnode() -> Network {
        parse_network(
            include_str!("../../../fixtures/sixnode.max"),
            InputFormat::DimacsMax,
        )
        .unwrap()
    }

    #[test]
    fn min_cost_penalty_is_one_plus_total_cost() {
        let net = layered();
        let objective = build_sspa_objective(&net).unwrap();
        assert_eq!(objective.s_plus[0], rat(25));
        assert_eq!(objective.s_minus[11], rat(25));
        assert_eq!(objective.x[4], rat(1));
        assert_eq!(objective.sense, Sense::Minimize);

        let zero_cost = parse_network("p min 2 1\na 1 2 0 1 0\n", InputFormat::DimacsMin).unwrap();
        assert_eq!(build_sspa_objective(&zero_cost).unwrap().s_plus[0], rat(1));

        let assign = parse_network("4,1,3\n2,0,5\n3,2,2\n", InputFormat::AssignmentCsv).unwrap();
        assert_eq!(build_sspa_objective(&assign).unwrap().s_plus[0], rat(23));
    }

    #[test]
    fn maxflow_objective_rewards_source_sink_pair() {
        let net = sixnode();
        let objective = build_maxflow_objective(&net).unwrap();
        assert_eq!(objective.s_plus[0], rat(1));
        assert_eq!(objective.s_minus[5], rat(1));
        assert_eq!(objective.s_plus[3], rat(-4));
        assert!(objective.x.iter().all(|c| c.is_zero()));
        // a source-to-sink path circuit is worth +2
        let g = path_circuit(
            &net,
            &[
                (ArcId(2), Direction::Forward),
                (ArcId(8), Direction::Forward),
                (ArcId(9), Direction::Forward),
            ],
            PathVariant::PlusMinus,
            1,
        )
        .unwrap();
        assert_eq!(objective.improvement(&g), rat(2));
        // cycle circuits are worth nothing
        let cycle = cycle_circuit(
            &net,
            &[
                (ArcId(3), Direction::Forward),
                (ArcId(7), Direction::Backward),
                (ArcId(4), Direction::Backward),
            ],
            1,
        )
        .unwrap();
        assert!(objective.improvement(&cycle).is_zero());
        // any circuit touching an interior slack is deep in the red
        let trivial = trivial_circuit(&net, NodeId(3), 1).unwrap();
        assert!(objective.improvement(&trivial) < rat(-3));
    }

    #[test]
    fn order_objective_discounts_by_match_order() {
        let net = parse_network("4,1,3\n2,0,5\n3,2,2\n", InputFormat::AssignmentCsv).unwrap();
        let order = [
            (NodeId(2), NodeId(5)),
            (NodeId(1), NodeId(4)),
            (NodeId(3), NodeId(6)),
        ];
        let objective = build_hm_order_objective(&net, &order).unwrap();
        let d = rat(23);
        let m = rat(2) * d.clone() * rat(4);
        assert_eq!(objective.s_minus[1], m.clone() - rat(2) * d.clone());
        assert_eq!(objective.s_plus[4], m.clone() - rat(2) * d.clone());
        assert_eq!(objective.s_minus[0], m.clone() - rat(4) * d.clone());
        assert_eq!(objective.s_plus[5], m.clone() - rat(6) * d.clone());
        // penalties stay positive
        assert!(objective.s_plus.iter().all(|c| *c > rat_zero()));

        let bad = [
            (NodeId(1), NodeId(4)),
            (NodeId(1), NodeId(5)),
            (NodeId(3), NodeId(6)),
        ];
        assert!(build_hm_order_objective(&net, &bad).is_err());
    }

    #[test]
    fn sixteen_pair_candidates_at_the_start_vertex() {
        let net = layered();
        let face = face_for(&net, Algorithm::Sspa).unwrap();
        let start = zero_pseudoflow_vertex(&net);
        let candidates = candidate_circuits(&net, &start, &face, CandidateMode::default()).unwrap();
        let paths = candidates
            .iter()
            .filter(|c| matches!(c.kind, crate::circuits::CircuitKind::Path { .. }))
            .count();
        assert_eq!(paths, 16);
        assert_eq!(candidates.len(), 16);
    }

    #[test]
    fn dantzig_picks_the_cheapest_pair_path() {
        let net = layered();
        let face = face_for(&net, Algorithm::Sspa).unwrap();
        let start = zero_pseudoflow_vertex(&net);
        let objective = build_sspa_objective(&net).unwrap();
        let candidates = candidate_circuits(&net, &start, &face, CandidateMode::default()).unwrap();
        let chosen = select_circuit(
            &net,
            &face,
            &candidates,
            &start,
            &objective,
            PivotRule::Dantzig,
        )
        .unwrap();
        // cheapest pair path: excess 1 to deficit 9 over arcs 1, 5, 9
        assert_eq!(
            chosen.x.keys().copied().collect::<Vec<_>>(),
            vec![ArcId(1), ArcId(5), ArcId(9)]
        );
        assert_eq!(objective.improvement(&chosen), rat(50) - rat(3));
    }

    #[test]
    fn steepest_ascent_prefers_the_short_augmenting_path() {
        let net = sixnode();
        let face = face_for(&net, Algorithm::Sapa).unwrap();
        let start = zero_pseudoflow_vertex(&net);
        let objective = build_maxflow_objective(&net).unwrap();
        let candidates = candidate_circuits(
            &net,
            &start,
            &face,
            CandidateMode::Structured {
                primary_path: PathSearch::Bfs,
            },
        )
        .unwrap();
        let chosen = select_circuit(
            &net,
            &face,
            &candidates,
            &start,
            &objective,
            PivotRule::SteepestAscent,
        )
        .unwrap();
        // ratio 2 / (2·3 + 2) for three-arc paths; smallest bottleneck wins
        // the tie: the path over arcs (1,4), (4,5), (5,6)
        assert_eq!(
            chosen.x.keys().copied().collect::<Vec<_>>(),
            vec![ArcId(2), ArcId(8), ArcId(9)]
        );
    }

    #[test]
    fn no_improving_candidate_returns_none() {
        let net = sixnode();
        let face = face_for(&net, Algorithm::Sapa).unwrap();
        let start = zero_pseudoflow_vertex(&net);
        // a deliberately hostile objective: everything is penalized
        let mut objective = Objective::new(&net, Sense::Maximize);
        objective.s_plus = vec![rat(-1); net.node_count()];
        objective.s_minus = vec![rat(-1); net.node_count()];
        let candidates = candidate_circuits(&net, &start, &face, CandidateMode::default()).unwrap();
        assert!(select_circuit(
            &net,
            &face,
            &candidates,
            &start,
            &objective,
            PivotRule::Dantzig
        )
        .is_none());
    }

    #[test]
    fn augment_replays_the_min_cost_walk_on_layered() {
        let net = layered();
        let face = face_for(&net, Algorithm::Sspa).unwrap();
        let objective = build_sspa_objective(&net).unwrap();
        let trace = augment(
            &net,
            &face,
            &objective,
            PivotRule::Dantzig,
            zero_pseudoflow_vertex(&net),
            DEFAULT_STEP_LIMIT,
            CandidateMode::default(),
        )
        .unwrap();
        assert_eq!(trace.status, TraceStatus::Optimal);
        assert_eq!(trace.steps.len(), 4);
        // with all slacks cleared the objective is the plain flow cost
        assert_eq!(trace.steps.last().unwrap().objective_after, rat(24));
        crate::trace::validate_walk(&net, Some(&face), &trace).unwrap();
    }

    #[test]
    fn augment_finds_the_max_flow_on_sixnode() {
        let net = sixnode();
        let face = face_for(&net, Algorithm::Sapa).unwrap();
        let objective = build_maxflow_objective(&net).unwrap();
        let trace = augment(
            &net,
            &face,
            &objective,
            PivotRule::SteepestAscent,
            zero_pseudoflow_vertex(&net),
            DEFAULT_STEP_LIMIT,
            CandidateMode::default(),
        )
        .unwrap();
        assert_eq!(trace.status, TraceStatus::Optimal);
        assert_eq!(trace.steps.len(), 4);
        let alphas: Vec<Rational> = trace.steps.iter().map(|s| s.alpha.clone()).collect();
        assert_eq!(alphas, vec![rat(2), rat(3), rat(4), rat(2)]);
        assert_eq!(trace.terminal_point().s_plus(NodeId(1)), rat(11));
    }

    #[test]
    fn augment_without_face_rides_a_trivial_circuit_to_unbounded() {
        let net = sixnode();
        let face = FaceSpec::all();
        // reward raising an interior slack pair
        let mut objective = Objective::new(&net, Sense::Maximize);
        objective.s_plus[2] = rat(1);
        let trace = augment(
            &net,
            &face,
            &objective,
            PivotRule::Dantzig,
            zero_pseudoflow_vertex(&net),
            DEFAULT_STEP_LIMIT,
            CandidateMode::default(),
        )
        .unwrap();
        assert_eq!(trace.status, TraceStatus::Unbounded);
        assert!(trace
            .events
            .iter()
            .any(|e| matches!(e, TraceEvent::UnboundedDirection { .. })));
    }

    #[test]
    fn augment_rejects_a_non_vertex_start() {
        let net = sixnode();
        let face = face_for(&net, Algorithm::Sapa).unwrap();
        let objective = build_maxflow_objective(&net).unwrap();
        let mut start = zero_pseudoflow_vertex(&net);
        // perturb into the strict interior of an edge of the polyhedron
        start.set_x(ArcId(1), Rational::new(1.into(), 2.into()));
        start.set_x(ArcId(3), Rational::new(1.into(), 2.into()));
        start.set_x(ArcId(6), Rational::new(1.into(), 2.into()));
        start.set_s_plus(NodeId(1), Rational::new(1.into(), 2.into()));
        start.set_s_minus(NodeId(6), Rational::new(1.into(), 2.into()));
        let err = augment(
            &net,
            &face,
            &objective,
            PivotRule::Dantzig,
            start,
            DEFAULT_STEP_LIMIT,
            CandidateMode::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn start_at_optimum_yields_empty_trace() {
        let net = parse_network("p min 1 0\n", InputFormat::DimacsMin).unwrap();
        let face = face_for(&net, Algorithm::Sspa).unwrap();
        let objective = build_sspa_objective(&net).unwrap();
        let trace = augment(
            &net,
            &face,
            &objective,
            PivotRule::Dantzig,
            zero_pseudoflow_vertex(&net),
            DEFAULT_STEP_LIMIT,
            CandidateMode::default(),
        )
        .unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.status, TraceStatus::Optimal);
    }

    #[test]
    fn max_flow_start_candidates_are_all_source_sink_paths() {
        let net = sixnode();
        let face = face_for(&net, Algorithm::Gapa).unwrap();
        let start = zero_pseudoflow_vertex(&net);
        let candidates = candidate_circuits(&net, &start, &face, CandidateMode::default()).unwrap();
        assert!(!candidates.is_empty());
        for circuit in &candidates {
            assert_eq!(
                circuit.s_plus.keys().copied().collect::<Vec<_>>(),
                vec![NodeId(1)]
            );
            assert_eq!(
                circuit.s_minus.keys().copied().collect::<Vec<_>>(),
                vec![NodeId(6)]
            );
            assert_eq!(circuit.s_plus[&NodeId(1)], 1);
            assert_eq!(circuit.s_minus[&NodeId(6)], 1);
        }
    }

    #[test]
    fn negative_residual_cycles_become_candidates() {
        // flow parked on the expensive arc leaves a cost -5 residual cycle
        let net = parse_network(
            "p min 3 3\na 1 2 0 1 0\na 2 3 0 1 0\na 1 3 0 1 5\n",
            InputFormat::DimacsMin,
        )
        .unwrap();
        let mut point = zero_pseudoflow_vertex(&net);
        point.set_x(ArcId(3), rat(1));
        point.set_s_plus(NodeId(1), rat(1));
        point.set_s_minus(NodeId(3), rat(1));
        let face = FaceSpec::all();
        let candidates = candidate_circuits(&net, &point, &face, CandidateMode::default()).unwrap();
        let cycle = candidates
            .iter()
            .find(|c| matches!(c.kind, crate::circuits::CircuitKind::Cycle { .. }))
            .expect("the improving cycle must be offered");
        let objective = build_sspa_objective(&net).unwrap();
        assert_eq!(objective.improvement(cycle), rat(5));
    }
}
