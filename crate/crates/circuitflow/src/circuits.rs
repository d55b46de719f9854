//! Circuits of the pseudoflow polyhedron: construction, classification,
//! enumeration, and maximal step lengths.
//!
//! A circuit is a support-minimal kernel direction of the relaxed
//! flow-balance system, normalized to coprime integer entries; for this
//! constraint matrix all entries are ±1. Concretely the circuits are the
//! simple undirected cycles of the pseudoflow network — the original network
//! plus a dummy node with a slack arc pair per node — oriented either way:
//!
//! * cycles avoiding the dummy node use original arcs only (cycle circuits),
//! * cycles through the dummy node touching two distinct nodes combine an
//!   original path with one slack arc at each endpoint (path circuits),
//! * two-arc cycles through the dummy node move both slacks of a single node
//!   (trivial circuits).
//!
//! [`enumerate_circuits`] walks those cycles. [`oracle_circuits`] instead
//! enumerates ±1 kernel vectors straight from the definition and filters for
//! support minimality; it exists so tests can check the two agree.

use crate::geometry::{Coord, FaceSpec, PseudoflowPoint};
use crate::network::{ArcId, Direction, Network, NodeId};
use crate::{rat_zero, Error, Rational, Result};

use std::collections::BTreeMap;
use std::fmt;

/// Slack-arc pattern of a path circuit at its (from, to) endpoints, named by
/// which slack each endpoint uses: `PlusMinus` enters through s⁺ at `from`
/// and leaves through s⁻ at `to`, and so on. With positive sign the four
/// variants move the endpoint slacks by (+s⁺_from, +s⁻_to),
/// (+s⁺_from, -s⁺_to), (-s⁻_from, +s⁻_to), and (-s⁻_from, -s⁺_to).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PathVariant {
    PlusMinus,
    PlusPlus,
    MinusMinus,
    MinusPlus,
}

impl PathVariant {
    pub const ALL: [PathVariant; 4] = [
        PathVariant::PlusMinus,
        PathVariant::PlusPlus,
        PathVariant::MinusMinus,
        PathVariant::MinusPlus,
    ];
}

/// Structural description of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitKind {
    Path {
        from: NodeId,
        to: NodeId,
        variant: PathVariant,
        sign: i8,
    },
    Cycle {
        sign: i8,
    },
    Trivial {
        node: NodeId,
        sign: i8,
    },
}

impl CircuitKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CircuitKind::Path { .. } => "path",
            CircuitKind::Cycle { .. } => "cycle",
            CircuitKind::Trivial { .. } => "trivial",
        }
    }

    /// The same structure in canonical form: path descriptions are unique
    /// only up to swapping the endpoints (which flips the sign), so the
    /// positive-sign description is the canonical one.
    pub fn canonical(&self) -> CircuitKind {
        match *self {
            CircuitKind::Path {
                from,
                to,
                variant,
                sign: -1,
            } => {
                let variant = match variant {
                    PathVariant::PlusMinus => PathVariant::MinusPlus,
                    PathVariant::MinusPlus => PathVariant::PlusMinus,
                    PathVariant::PlusPlus => PathVariant::PlusPlus,
                    PathVariant::MinusMinus => PathVariant::MinusMinus,
                };
                CircuitKind::Path {
                    from: to,
                    to: from,
                    variant,
                    sign: 1,
                }
            }
            other => other,
        }
    }
}

/// A sparse ±1 kernel direction, tagged with its structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub x: BTreeMap<ArcId, i8>,
    pub s_plus: BTreeMap<NodeId, i8>,
    pub s_minus: BTreeMap<NodeId, i8>,
    pub kind: CircuitKind,
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (arc, sign) in &self.x {
            parts.push(format!("{}x[{}]", if *sign > 0 { "+" } else { "-" }, arc));
        }
        for (node, sign) in &self.s_plus {
            parts.push(format!("{}s+[{}]", if *sign > 0 { "+" } else { "-" }, node));
        }
        for (node, sign) in &self.s_minus {
            parts.push(format!("{}s-[{}]", if *sign > 0 { "+" } else { "-" }, node));
        }
        write!(f, "{} {{{}}}", self.kind.tag(), parts.join(" "))
    }
}

/// Total order on circuits used for set storage and for deterministic
/// tie-breaking: support size first, then the sorted coordinate list, then
/// the sign pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CircuitKey {
    support_len: usize,
    coords: Vec<Coord>,
    signs: Vec<i8>,
}

impl Circuit {
    pub fn entry(&self, coord: Coord) -> i8 {
        match coord {
            Coord::X(a) => self.x.get(&a).copied().unwrap_or(0),
            Coord::SPlus(i) => self.s_plus.get(&i).copied().unwrap_or(0),
            Coord::SMinus(i) => self.s_minus.get(&i).copied().unwrap_or(0),
        }
    }

    /// Support in canonical coordinate order (x block, s⁺ block, s⁻ block).
    pub fn support(&self) -> Vec<(Coord, i8)> {
        let mut out = Vec::new();
        for (a, s) in &self.x {
            out.push((Coord::X(*a), *s));
        }
        for (i, s) in &self.s_plus {
            out.push((Coord::SPlus(*i), *s));
        }
        for (i, s) in &self.s_minus {
            out.push((Coord::SMinus(*i), *s));
        }
        out
    }

    pub fn support_len(&self) -> usize {
        self.x.len() + self.s_plus.len() + self.s_minus.len()
    }

    /// Ordering key with true signs; use for tie-breaking.
    pub fn key(&self) -> CircuitKey {
        let support = self.support();
        CircuitKey {
            support_len: support.len(),
            coords: support.iter().map(|(c, _)| *c).collect(),
            signs: support.iter().map(|(_, s)| *s).collect(),
        }
    }

    /// Ordering key with signs normalized so the first support entry is
    /// positive; a circuit and its negation share this key.
    pub fn unsigned_key(&self) -> CircuitKey {
        let mut key = self.key();
        if key.signs.first().copied() == Some(-1) {
            for s in &mut key.signs {
                *s = -*s;
            }
        }
        key
    }

    pub fn negated(&self, net: &Network) -> Circuit {
        let flip = |m: &BTreeMap<ArcId, i8>| m.iter().map(|(k, v)| (*k, -v)).collect();
        let flip_n = |m: &BTreeMap<NodeId, i8>| -> BTreeMap<NodeId, i8> {
            m.iter().map(|(k, v)| (*k, -v)).collect()
        };
        let x = flip(&self.x);
        let s_plus = flip_n(&self.s_plus);
        let s_minus = flip_n(&self.s_minus);
        let kind =
            classify(net, &x, &s_plus, &s_minus).expect("negation of a circuit is a circuit");
        Circuit {
            x,
            s_plus,
            s_minus,
            kind,
        }
    }

    /// Number of inequality rows the direction moves off: the domain system
    /// carries two bound rows per arc coordinate and one per slack.
    pub fn bound_row_activity(&self) -> usize {
        2 * self.x.len() + self.s_plus.len() + self.s_minus.len()
    }
}

/// Exact check that the direction lies in the kernel of the relaxed
/// flow-balance rows.
pub fn in_kernel(net: &Network, circuit: &Circuit) -> bool {
    kernel_residuals(net, &circuit.x, &circuit.s_plus, &circuit.s_minus)
        .iter()
        .all(|r| *r == 0)
}

fn kernel_residuals(
    net: &Network,
    x: &BTreeMap<ArcId, i8>,
    s_plus: &BTreeMap<NodeId, i8>,
    s_minus: &BTreeMap<NodeId, i8>,
) -> Vec<i64> {
    let mut residual = vec![0i64; net.node_count()];
    for (arc, sign) in x {
        let arc = net.arc(*arc);
        residual[arc.tail.0 as usize - 1] += *sign as i64;
        residual[arc.head.0 as usize - 1] -= *sign as i64;
    }
    for (node, sign) in s_plus {
        residual[node.0 as usize - 1] -= *sign as i64;
    }
    for (node, sign) in s_minus {
        residual[node.0 as usize - 1] += *sign as i64;
    }
    residual
}

/// Recovers the structural description of a ±1 kernel vector, or fails if
/// the vector is not a circuit shape (wrong slack pattern, disconnected or
/// non-simple arc support).
pub fn classify(
    net: &Network,
    x: &BTreeMap<ArcId, i8>,
    s_plus: &BTreeMap<NodeId, i8>,
    s_minus: &BTreeMap<NodeId, i8>,
) -> Result<CircuitKind> {
    let bad = |msg: &str| Error::BadArgument(format!("not a circuit: {msg}"));
    if x.values()
        .chain(s_plus.values())
        .chain(s_minus.values())
        .any(|v| *v != 1 && *v != -1)
    {
        return Err(bad("entries must be ±1"));
    }
    if kernel_residuals(net, x, s_plus, s_minus)
        .iter()
        .any(|r| *r != 0)
    {
        return Err(bad("vector is outside the kernel"));
    }
    let mut slack_nodes: Vec<NodeId> = s_plus.keys().chain(s_minus.keys()).copied().collect();
    slack_nodes.sort();
    slack_nodes.dedup();
    match slack_nodes.len() {
        0 => {
            if x.is_empty() {
                return Err(bad("zero vector"));
            }
            check_simple_cycle(net, x)?;
            let sign = *x.values().next().unwrap();
            Ok(CircuitKind::Cycle { sign })
        }
        1 => {
            let node = slack_nodes[0];
            if !x.is_empty() {
                return Err(bad("trivial circuit cannot move arc flow"));
            }
            let (Some(&p), Some(&m)) = (s_plus.get(&node), s_minus.get(&node)) else {
                return Err(bad("single-node slack support must use both slacks"));
            };
            if p != m {
                return Err(bad("trivial circuit slacks must share a sign"));
            }
            Ok(CircuitKind::Trivial { node, sign: p })
        }
        2 => {
            if s_plus.len() + s_minus.len() != 2 {
                return Err(bad("path circuit must use exactly two slack arcs"));
            }
            let (a, b) = (slack_nodes[0], slack_nodes[1]);
            check_simple_path(net, x, a, b)?;
            // positive-sign description: s at `from` is s⁺ = +1 or s⁻ = -1
            for (from, to) in [(a, b), (b, a)] {
                let sign = if let Some(&e) = s_plus.get(&from) {
                    e
                } else {
                    -s_minus[&from]
                };
                if sign != 1 {
                    continue;
                }
                let from_plus = s_plus.contains_key(&from);
                let to_entry_ok = match (s_plus.get(&to), s_minus.get(&to)) {
                    (Some(&e), None) => e == -1,
                    (None, Some(&e)) => e == 1,
                    _ => false,
                };
                if !to_entry_ok {
                    continue;
                }
                let to_plus = s_plus.contains_key(&to);
                let variant = match (from_plus, to_plus) {
                    (true, false) => PathVariant::PlusMinus,
                    (true, true) => PathVariant::PlusPlus,
                    (false, false) => PathVariant::MinusMinus,
                    (false, true) => PathVariant::MinusPlus,
                };
                return Ok(CircuitKind::Path {
                    from,
                    to,
                    variant,
                    sign: 1,
                });
            }
            Err(bad("slack pattern does not close the path"))
        }
        _ => Err(bad("more than two nodes carry slack entries")),
    }
}

/// The undirected arc support must form one simple cycle visiting each node
/// at most once.
fn check_simple_cycle(net: &Network, x: &BTreeMap<ArcId, i8>) -> Result<()> {
    let mut degree: BTreeMap<NodeId, usize> = BTreeMap::new();
    for arc in x.keys() {
        let arc = net.arc(*arc);
        *degree.entry(arc.tail).or_default() += 1;
        *degree.entry(arc.head).or_default() += 1;
    }
    if degree.values().any(|d| *d != 2) {
        return Err(Error::BadArgument(
            "not a circuit: cycle support must have degree 2 everywhere".to_string(),
        ));
    }
    if !arc_support_connected(net, x) {
        return Err(Error::BadArgument(
            "not a circuit: cycle support is disconnected".to_string(),
        ));
    }
    Ok(())
}

/// The undirected arc support must form one simple path between `a` and `b`.
fn check_simple_path(net: &Network, x: &BTreeMap<ArcId, i8>, a: NodeId, b: NodeId) -> Result<()> {
    let mut degree: BTreeMap<NodeId, usize> = BTreeMap::new();
    for arc in x.keys() {
        let arc = net.arc(*arc);
        *degree.entry(arc.tail).or_default() += 1;
        *degree.entry(arc.head).or_default() += 1;
    }
    for (node, want) in [(a, 1usize), (b, 1)] {
        if degree.get(&node) != Some(&want) {
            return Err(Error::BadArgument(format!(
                "not a circuit: path endpoint {} must have degree 1",
                node
            )));
        }
    }
    if degree.iter().any(|(n, d)| *n != a && *n != b && *d != 2) {
        return Err(Error::BadArgument(
            "not a circuit: interior path nodes must have degree 2".to_string(),
        ));
    }
    if !arc_support_connected(net, x) {
        return Err(Error::BadArgument(
            "not a circuit: path support is disconnected".to_string(),
        ));
    }
    Ok(())
}

fn arc_support_connected(net: &Network, x: &BTreeMap<ArcId, i8>) -> bool {
    if x.is_empty() {
        return true;
    }
    let arcs: Vec<&ArcId> = x.keys().collect();
    let mut reached: Vec<bool> = vec![false; arcs.len()];
    let mut frontier = vec![0usize];
    reached[0] = true;
    while let Some(i) = frontier.pop() {
        let (t1, h1) = {
            let arc = net.arc(*arcs[i]);
            (arc.tail, arc.head)
        };
        for (j, other) in arcs.iter().enumerate() {
            if reached[j] {
                continue;
            }
            let arc = net.arc(**other);
            if [arc.tail, arc.head].iter().any(|n| *n == t1 || *n == h1) {
                reached[j] = true;
                frontier.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

fn slack_entries_for(
    from: NodeId,
    to: NodeId,
    variant: PathVariant,
    sign: i8,
) -> (BTreeMap<NodeId, i8>, BTreeMap<NodeId, i8>) {
    let mut s_plus = BTreeMap::new();
    let mut s_minus = BTreeMap::new();
    match variant {
        PathVariant::PlusMinus => {
            s_plus.insert(from, sign);
            s_minus.insert(to, sign);
        }
        PathVariant::PlusPlus => {
            s_plus.insert(from, sign);
            s_plus.insert(to, -sign);
        }
        PathVariant::MinusMinus => {
            s_minus.insert(from, -sign);
            s_minus.insert(to, sign);
        }
        PathVariant::MinusPlus => {
            s_minus.insert(from, -sign);
            s_plus.insert(to, -sign);
        }
    }
    (s_plus, s_minus)
}

fn traversal_to_x(
    net: &Network,
    steps: &[(ArcId, Direction)],
    sign: i8,
) -> Result<(BTreeMap<ArcId, i8>, Vec<NodeId>)> {
    let mut x = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut at: Option<NodeId> = None;
    for &(arc_id, direction) in steps {
        if arc_id.0 == 0 || arc_id.0 as usize > net.arc_count() {
            return Err(Error::BadArgument(format!("unknown arc {}", arc_id)));
        }
        let arc = net.arc(arc_id);
        let (start, end, entry) = match direction {
            Direction::Forward => (arc.tail, arc.head, sign),
            Direction::Backward => (arc.head, arc.tail, -sign),
        };
        match at {
            None => nodes.push(start),
            Some(prev) if prev == start => {}
            Some(prev) => {
                return Err(Error::BadArgument(format!(
                    "traversal is disconnected: arc {} starts at {} but the walk is at {}",
                    arc_id, start, prev
                )))
            }
        }
        if x.insert(arc_id, entry).is_some() {
            return Err(Error::BadArgument(format!(
                "arc {} appears twice in the traversal",
                arc_id
            )));
        }
        nodes.push(end);
        at = Some(end);
    }
    Ok((x, nodes))
}

/// Builds a path circuit from an arc traversal between two distinct nodes,
/// for one of the four slack variants. With positive sign the flow follows
/// the traversal direction.
pub fn path_circuit(
    net: &Network,
    arc_path: &[(ArcId, Direction)],
    variant: PathVariant,
    sign: i8,
) -> Result<Circuit> {
    if arc_path.is_empty() {
        return Err(Error::BadArgument("empty arc path".to_string()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::BadArgument("sign must be ±1".to_string()));
    }
    let (x, nodes) = traversal_to_x(net, arc_path, sign)?;
    let mut seen = nodes.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != nodes.len() {
        return Err(Error::BadArgument("arc path revisits a node".to_string()));
    }
    let from = nodes[0];
    let to = *nodes.last().unwrap();
    let (s_plus, s_minus) = slack_entries_for(from, to, variant, sign);
    let circuit = Circuit {
        x,
        s_plus,
        s_minus,
        kind: CircuitKind::Path {
            from,
            to,
            variant,
            sign,
        },
    };
    debug_assert!(in_kernel(net, &circuit));
    Ok(circuit)
}

/// Builds a cycle circuit from a closed arc traversal. With positive sign
/// the flow follows the traversal.
pub fn cycle_circuit(net: &Network, arc_cycle: &[(ArcId, Direction)], sign: i8) -> Result<Circuit> {
    if sign != 1 && sign != -1 {
        return Err(Error::BadArgument("sign must be ±1".to_string()));
    }
    if arc_cycle.len() < 2 {
        return Err(Error::BadArgument(
            "a cycle needs at least two arcs".to_string(),
        ));
    }
    let (x, nodes) = traversal_to_x(net, arc_cycle, sign)?;
    if nodes.first() != nodes.last() {
        return Err(Error::BadArgument("traversal does not close".to_string()));
    }
    let interior = &nodes[..nodes.len() - 1];
    let mut seen: Vec<NodeId> = interior.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != interior.len() {
        return Err(Error::BadArgument("cycle revisits a node".to_string()));
    }
    let canonical_sign = *x.values().next().unwrap();
    let circuit = Circuit {
        x,
        s_plus: BTreeMap::new(),
        s_minus: BTreeMap::new(),
        kind: CircuitKind::Cycle {
            sign: canonical_sign,
        },
    };
    debug_assert!(in_kernel(net, &circuit));
    Ok(circuit)
}

/// Builds the trivial circuit ±(0, e_i, e_i) of a node.
pub fn trivial_circuit(net: &Network, node: NodeId, sign: i8) -> Result<Circuit> {
    if sign != 1 && sign != -1 {
        return Err(Error::BadArgument("sign must be ±1".to_string()));
    }
    if node.0 == 0 || node.0 as usize > net.node_count() {
        return Err(Error::BadArgument(format!("unknown node {}", node)));
    }
    let mut s_plus = BTreeMap::new();
    let mut s_minus = BTreeMap::new();
    s_plus.insert(node, sign);
    s_minus.insert(node, sign);
    let circuit = Circuit {
        x: BTreeMap::new(),
        s_plus,
        s_minus,
        kind: CircuitKind::Trivial { node, sign },
    };
    debug_assert!(in_kernel(net, &circuit));
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// Enumeration via simple cycles of the pseudoflow network.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PfEdge {
    Arc(ArcId),
    SlackPlus(NodeId),
    SlackMinus(NodeId),
}

/// Default coordinate-count guard for [`enumerate_circuits`].
pub const ENUMERATE_GUARD: usize = 40;
/// Default coordinate-count guard for [`oracle_circuits`].
pub const ORACLE_GUARD: usize = 18;

/// All circuits of the polyhedron, one per orientation of each simple
/// undirected cycle of the pseudoflow network, sorted by [`Circuit::key`].
///
/// Guarded by coordinate count (m + 2n); `CIRCUITFLOW_SIZE_GUARD` overrides.
pub fn enumerate_circuits(net: &Network) -> Result<Vec<Circuit>> {
    let limit = crate::size_guard(ENUMERATE_GUARD);
    if net.coord_count() > limit {
        return Err(Error::SizeGuard {
            coords: net.coord_count(),
            limit,
        });
    }
    // node 0 is the dummy; edge direction is the arc direction
    let mut edges: Vec<(usize, usize, PfEdge)> = Vec::new();
    for arc in net.arcs() {
        edges.push((
            arc.tail.0 as usize,
            arc.head.0 as usize,
            PfEdge::Arc(arc.id),
        ));
    }
    for node in net.nodes() {
        edges.push((0, node.0 as usize, PfEdge::SlackPlus(node)));
        edges.push((node.0 as usize, 0, PfEdge::SlackMinus(node)));
    }
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); net.node_count() + 1];
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        adjacency[u].push((i, v));
        adjacency[v].push((i, u));
    }

    let mut out: BTreeMap<CircuitKey, Circuit> = BTreeMap::new();
    // Backtracking rooted at the smallest node of each cycle; every cycle is
    // discovered once per traversal direction, which yields the ± pair.
    for root in 0..adjacency.len() {
        let mut used_edges = vec![false; edges.len()];
        let mut on_path = vec![false; adjacency.len()];
        on_path[root] = true;
        let mut traversal: Vec<(usize, bool)> = Vec::new(); // (edge, traversed along direction)
        dfs_cycles(
            net,
            &edges,
            &adjacency,
            root,
            root,
            &mut used_edges,
            &mut on_path,
            &mut traversal,
            &mut out,
        )?;
    }
    Ok(out.into_values().collect())
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    net: &Network,
    edges: &[(usize, usize, PfEdge)],
    adjacency: &[Vec<(usize, usize)>],
    root: usize,
    at: usize,
    used_edges: &mut [bool],
    on_path: &mut [bool],
    traversal: &mut Vec<(usize, bool)>,
    out: &mut BTreeMap<CircuitKey, Circuit>,
) -> Result<()> {
    for &(edge, nbr) in &adjacency[at] {
        if used_edges[edge] {
            continue;
        }
        let along = edges[edge].0 == at;
        if nbr == root && !traversal.is_empty() {
            traversal.push((edge, along));
            let circuit = traversal_circuit(net, edges, traversal)?;
            let key = circuit.key();
            out.insert(key, circuit);
            traversal.pop();
            continue;
        }
        if nbr != root && !on_path[nbr] && nbr >= root {
            used_edges[edge] = true;
            on_path[nbr] = true;
            traversal.push((edge, along));
            dfs_cycles(
                net, edges, adjacency, root, nbr, used_edges, on_path, traversal, out,
            )?;
            traversal.pop();
            on_path[nbr] = false;
            used_edges[edge] = false;
        }
    }
    Ok(())
}

fn traversal_circuit(
    net: &Network,
    edges: &[(usize, usize, PfEdge)],
    traversal: &[(usize, bool)],
) -> Result<Circuit> {
    let mut x = BTreeMap::new();
    let mut s_plus = BTreeMap::new();
    let mut s_minus = BTreeMap::new();
    for &(edge, along) in traversal {
        let entry: i8 = if along { 1 } else { -1 };
        match edges[edge].2 {
            PfEdge::Arc(a) => {
                x.insert(a, entry);
            }
            PfEdge::SlackPlus(i) => {
                s_plus.insert(i, entry);
            }
            PfEdge::SlackMinus(i) => {
                s_minus.insert(i, entry);
            }
        }
    }
    let kind = classify(net, &x, &s_plus, &s_minus)?;
    Ok(Circuit {
        x,
        s_plus,
        s_minus,
        kind,
    })
}

/// Definition-level oracle: enumerates nonzero {-1,0,+1} kernel vectors
/// directly and keeps the support-minimal ones. Entries of a circuit of this
/// system are ±1 because the constraint matrix is totally unimodular, so the
/// candidate grid covers every circuit. Intended for tiny instances and used
/// as an independent check of [`enumerate_circuits`].
pub fn oracle_circuits(net: &Network) -> Result<Vec<Circuit>> {
    let limit = crate::size_guard(ORACLE_GUARD);
    let coords = net.coord_count();
    if coords > limit {
        return Err(Error::SizeGuard { coords, limit });
    }
    if coords > 127 {
        return Err(Error::SizeGuard { coords, limit: 127 });
    }

    // coordinate order: arcs, then s⁺ and s⁻ grouped per node so that each
    // node's incidences close as early as possible
    let mut coords_order: Vec<Coord> = net.arcs().iter().map(|a| Coord::X(a.id)).collect();
    for node in net.nodes() {
        coords_order.push(Coord::SPlus(node));
        coords_order.push(Coord::SMinus(node));
    }
    let n = net.node_count();
    // per-node list of (order index, balance-row coefficient)
    let mut incident: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (idx, coord) in coords_order.iter().enumerate() {
        match coord {
            Coord::X(a) => {
                let arc = net.arc(*a);
                incident[arc.tail.0 as usize - 1].push((idx, 1));
                incident[arc.head.0 as usize - 1].push((idx, -1));
            }
            Coord::SPlus(i) => incident[i.0 as usize - 1].push((idx, -1)),
            Coord::SMinus(i) => incident[i.0 as usize - 1].push((idx, 1)),
        }
    }
    let mut remaining: Vec<i64> = incident.iter().map(|v| v.len() as i64).collect();
    let mut partial = vec![0i64; n];
    let mut assignment = vec![0i8; coords.max(1)];
    let mut found: Vec<(u128, Vec<i8>)> = Vec::new();

    // which nodes does coordinate idx touch, with coefficients
    let mut touches: Vec<Vec<(usize, i64)>> = vec![Vec::new(); coords];
    for (node, list) in incident.iter().enumerate() {
        for &(idx, coeff) in list {
            touches[idx].push((node, coeff));
        }
    }

    fn search(
        idx: usize,
        coords: usize,
        touches: &[Vec<(usize, i64)>],
        remaining: &mut [i64],
        partial: &mut [i64],
        assignment: &mut [i8],
        found: &mut Vec<(u128, Vec<i8>)>,
    ) {
        if idx == coords {
            if assignment[..coords].iter().any(|v| *v != 0) {
                let mut mask = 0u128;
                for (i, v) in assignment[..coords].iter().enumerate() {
                    if *v != 0 {
                        mask |= 1 << i;
                    }
                }
                found.push((mask, assignment[..coords].to_vec()));
            }
            return;
        }
        'values: for value in [0i8, 1, -1] {
            for &(node, coeff) in &touches[idx] {
                let new_partial = partial[node] + coeff * value as i64;
                let new_remaining = remaining[node] - 1;
                if new_partial.abs() > new_remaining {
                    continue 'values;
                }
            }
            for &(node, coeff) in &touches[idx] {
                partial[node] += coeff * value as i64;
                remaining[node] -= 1;
            }
            assignment[idx] = value;
            search(
                idx + 1,
                coords,
                touches,
                remaining,
                partial,
                assignment,
                found,
            );
            assignment[idx] = 0;
            for &(node, coeff) in &touches[idx] {
                partial[node] -= coeff * value as i64;
                remaining[node] += 1;
            }
        }
    }

    search(
        0,
        coords,
        &touches,
        &mut remaining,
        &mut partial,
        &mut assignment,
        &mut found,
    );

    // support minimality over all nonzero kernel vectors found
    let mut minimal: BTreeMap<CircuitKey, Circuit> = BTreeMap::new();
    'outer: for (mask, values) in &found {
        for (other_mask, _) in &found {
            if other_mask != mask && other_mask & mask == *other_mask {
                continue 'outer;
            }
        }
        let mut x = BTreeMap::new();
        let mut s_plus = BTreeMap::new();
        let mut s_minus = BTreeMap::new();
        for (idx, value) in values.iter().enumerate() {
            if *value == 0 {
                continue;
            }
            match coords_order[idx] {
                Coord::X(a) => {
                    x.insert(a, *value);
                }
                Coord::SPlus(i) => {
                    s_plus.insert(i, *value);
                }
                Coord::SMinus(i) => {
                    s_minus.insert(i, *value);
                }
            }
        }
        let kind = classify(net, &x, &s_plus, &s_minus)?;
        let circuit = Circuit {
            x,
            s_plus,
            s_minus,
            kind,
        };
        minimal.insert(circuit.key(), circuit);
    }
    Ok(minimal.into_values().collect())
}

/// Maximal feasible step length along a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepLength {
    Finite(Rational),
    Unbounded,
}

impl StepLength {
    pub fn is_positive(&self) -> bool {
        match self {
            StepLength::Finite(a) => *a > rat_zero(),
            StepLength::Unbounded => true,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            StepLength::Finite(a) => Some(a),
            StepLength::Unbounded => None,
        }
    }
}

/// Largest α with point + α·g feasible (and inside `face`, when given).
/// Zero means the circuit is infeasible at the point; a circuit touching a
/// pinned slack cannot move at all.
pub fn max_step(
    net: &Network,
    point: &PseudoflowPoint,
    circuit: &Circuit,
    face: Option<&FaceSpec>,
) -> StepLength {
    if let Some(face) = face {
        let touches_pinned = circuit
            .support()
            .iter()
            .any(|(coord, _)| face.is_pinned(*coord));
        if touches_pinned {
            return StepLength::Finite(rat_zero());
        }
    }
    let mut bound: Option<Rational> = None;
    let mut tighten = |candidate: Rational| {
        bound = Some(match bound.take() {
            None => candidate,
            Some(old) => old.min(candidate),
        });
    };
    for (arc, sign) in &circuit.x {
        let value = point.x(*arc);
        if *sign > 0 {
            tighten(net.arc(*arc).capacity.clone() - value);
        } else {
            tighten(value);
        }
    }
    for (coord, sign) in circuit
        .s_plus
        .iter()
        .map(|(n, s)| (Coord::SPlus(*n), *s))
        .chain(circuit.s_minus.iter().map(|(n, s)| (Coord::SMinus(*n), *s)))
    {
        if sign < 0 {
            tighten(point.get(coord));
        }
    }
    match bound {
        Some(a) => StepLength::Finite(a),
        None => StepLength::Unbounded,
    }
}

/// point + α·g.
pub fn apply_step(point: &PseudoflowPoint, circuit: &Circuit, alpha: &Rational) -> PseudoflowPoint {
    let mut next = point.clone();
    for (coord, sign) in circuit.support() {
        let delta = alpha.clone() * crate::rat(sign as i64);
        next.set(coord, next.get(coord) + delta);
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::zero_pseudoflow_vertex;
    use crate::network::{parse_network, InputFormat, NetworkKind};
    use crate::rat;
    use num_traits::Zero;

    fn diamond() -> Network {
        parse_network(
            include_str!("../../../fixtures/diamond.min"),
            InputFormat::DimacsMin,
        )
        .unwrap()
    }

    fn layered() -> Network {
        parse_network(
            include_str!("../../../fixtures/layered.min"),
            InputFormat::DimacsMin,
        )
        .unwrap()
    }

    fn single_arc() -> Network {
        parse_network(
            "p min 2 1\nn 1 1\nn 2 -1\na 1 2 0 1 1\n",
            InputFormat::DimacsMin,
        )
        .unwrap()
    }

    #[test]
    fn min_cost_walk_path_circuit_shape() {
        let net = layered();
        // excess 1 routes to deficit 9 over arcs 1, 5, 9
        let path: Vec<(ArcId, Direction)> = [1, 5, 9]
            .into_iter()
            .map(|id| (ArcId(id), Direction::Forward))
            .collect();
        let g = path_circuit(&net, &path, PathVariant::MinusPlus, 1).unwrap();
        assert_eq!(g.x[&ArcId(1)], 1);
        assert_eq!(g.x[&ArcId(5)], 1);
        assert_eq!(g.x[&ArcId(9)], 1);
        assert_eq!(g.s_plus[&NodeId(9)], -1);
        assert_eq!(g.s_minus[&NodeId(1)], -1);
        assert!(in_kernel(&net, &g));
    }

    #[test]
    fn source_saturation_circuit_shape() {
        // single arc (1,2): saturating it raises both endpoint slacks
        let net = single_arc();
        let g = path_circuit(
            &net,
            &[(ArcId(1), Direction::Forward)],
            PathVariant::PlusMinus,
            1,
        )
        .unwrap();
        assert_eq!(g.x[&ArcId(1)], 1);
        assert_eq!(g.s_plus[&NodeId(1)], 1);
        assert_eq!(g.s_minus[&NodeId(2)], 1);
        assert!(in_kernel(&net, &g));
    }

    #[test]
    fn negation_stays_in_kernel_and_swaps_description() {
        let net = single_arc();
        let g = path_circuit(
            &net,
            &[(ArcId(1), Direction::Forward)],
            PathVariant::PlusMinus,
            1,
        )
        .unwrap();
        let neg = g.negated(&net);
        assert!(in_kernel(&net, &neg));
        assert_eq!(
            neg.kind,
            CircuitKind::Path {
                from: NodeId(2),
                to: NodeId(1),
                variant: PathVariant::MinusPlus,
                sign: 1
            }
        );
        assert_eq!(g.unsigned_key(), neg.unsigned_key());
        assert_ne!(g.key(), neg.key());
    }

    #[test]
    fn cycle_circuit_on_fig2_triangle() {
        let net = diamond();
        // 1 -> 2 -> 3 -> 1 via arcs (1,2), (2,3), backward (1,3)
        let g = cycle_circuit(
            &net,
            &[
                (ArcId(1), Direction::Forward),
                (ArcId(3), Direction::Forward),
                (ArcId(2), Direction::Backward),
            ],
            1,
        )
        .unwrap();
        assert!(in_kernel(&net, &g));
        assert!(g.s_plus.is_empty() && g.s_minus.is_empty());
        assert_eq!(g.kind, CircuitKind::Cycle { sign: 1 });
    }

    #[test]
    fn zero_cost_opposite_cycles_on_final_residual() {
        // the two length-four middle cycles of the twelve-node example
        let net = layered();
        let dashed = cycle_circuit(
            &net,
            &[
                (ArcId(5), Direction::Forward),  // 5 -> 7
                (ArcId(6), Direction::Backward), // 7 -> 6
                (ArcId(8), Direction::Forward),  // 6 -> 8
                (ArcId(7), Direction::Backward), // 8 -> 5
            ],
            1,
        )
        .unwrap();
        let cost: Rational = dashed
            .x
            .iter()
            .map(|(a, s)| net.arc(*a).cost.clone() * rat(*s as i64))
            .sum();
        assert!(cost.is_zero());
        let dotted = dashed.negated(&net);
        assert_eq!(dotted.x[&ArcId(5)], -1);
        assert!(in_kernel(&net, &dotted));
    }

    #[test]
    fn trivial_circuit_moves_both_slacks() {
        let net = diamond();
        let g = trivial_circuit(&net, NodeId(3), 1).unwrap();
        assert_eq!(g.s_plus[&NodeId(3)], 1);
        assert_eq!(g.s_minus[&NodeId(3)], 1);
        assert!(g.x.is_empty());
        assert!(in_kernel(&net, &g));
        let n = trivial_circuit(&net, NodeId(3), -1).unwrap();
        assert_eq!(n.s_plus[&NodeId(3)], -1);
        assert!(in_kernel(&net, &n));
        assert!(trivial_circuit(&net, NodeId(9), 1).is_err());
    }

    #[test]
    fn rejects_open_or_revisiting_cycles() {
        let net = diamond();
        // 1 -> 2 -> 3 does not close
        let err = cycle_circuit(
            &net,
            &[
                (ArcId(1), Direction::Forward),
                (ArcId(3), Direction::Forward),
            ],
            1,
        );
        assert!(err.is_err());
        // closing through a repeated node is rejected
        let err = cycle_circuit(
            &net,
            &[
                (ArcId(1), Direction::Forward),
                (ArcId(3), Direction::Forward),
                (ArcId(2), Direction::Backward),
                (ArcId(1), Direction::Forward),
            ],
            1,
        );
        assert!(err.is_err());
        assert!(cycle_circuit(&net, &[(ArcId(1), Direction::Forward)], 1).is_err());
    }

    #[test]
    fn rejects_non_simple_paths() {
        let net = diamond();
        // 1 -> 2 -> 3 -> 1 is closed, not a path
        let err = path_circuit(
            &net,
            &[
                (ArcId(1), Direction::Forward),
                (ArcId(3), Direction::Forward),
                (ArcId(2), Direction::Backward),
            ],
            PathVariant::PlusMinus,
            1,
        );
        assert!(err.is_err());
        // disconnected traversal
        let err = path_circuit(
            &net,
            &[
                (ArcId(1), Direction::Forward),
                (ArcId(5), Direction::Forward),
            ],
            PathVariant::PlusMinus,
            1,
        );
        assert!(err.is_err());
    }

    #[test]
    fn enumerate_counts_on_diamond() {
        let net = diamond();
        let all = enumerate_circuits(&net).unwrap();
        let cycles = all
            .iter()
            .filter(|c| matches!(c.kind, CircuitKind::Cycle { .. }))
            .count();
        let trivials = all
            .iter()
            .filter(|c| matches!(c.kind, CircuitKind::Trivial { .. }))
            .count();
        assert_eq!(cycles, 6);
        assert_eq!(trivials, 8);
        for c in &all {
            assert!(in_kernel(&net, c), "{c}");
        }
        // every circuit's negation is present
        for c in &all {
            let neg = c.negated(&net);
            assert!(all.iter().any(|d| d == &neg), "missing negation of {c}");
        }
    }

    #[test]
    fn enumerate_counts_on_single_arc() {
        let net = single_arc();
        let all = enumerate_circuits(&net).unwrap();
        let count = |pred: fn(&CircuitKind) -> bool| all.iter().filter(|c| pred(&c.kind)).count();
        assert_eq!(count(|k| matches!(k, CircuitKind::Cycle { .. })), 0);
        assert_eq!(count(|k| matches!(k, CircuitKind::Trivial { .. })), 4);
        assert_eq!(count(|k| matches!(k, CircuitKind::Path { .. })), 8);
    }

    #[test]
    fn enumerate_on_lone_node() {
        let net = Network::new(1, vec![], vec![rat(0)], NetworkKind::MinCost).unwrap();
        let all = enumerate_circuits(&net).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all
            .iter()
            .all(|c| matches!(c.kind, CircuitKind::Trivial { .. })));
    }

    #[test]
    fn oracle_matches_enumeration_on_small_nets() {
        for net in [single_arc(), diamond()] {
            let enumerated = enumerate_circuits(&net).unwrap();
            let oracle = oracle_circuits(&net).unwrap();
            assert_eq!(enumerated, oracle);
        }
    }

    #[test]
    fn oracle_on_lone_node() {
        let net = Network::new(1, vec![], vec![rat(0)], NetworkKind::MinCost).unwrap();
        let oracle = oracle_circuits(&net).unwrap();
        assert_eq!(oracle.len(), 2);
        assert!(oracle.iter().all(|c| matches!(
            c.kind,
            CircuitKind::Trivial {
                node: NodeId(1),
                ..
            }
        )));
    }

    #[test]
    fn size_guards_fire() {
        let net = layered(); // 12 + 24 = 36 coordinates
        assert!(matches!(
            oracle_circuits(&net),
            Err(Error::SizeGuard { .. })
        ));
        let big = parse_network(
            include_str!("../../../fixtures/expansion.max"),
            InputFormat::DimacsMax,
        )
        .unwrap();
        assert!(matches!(
            enumerate_circuits(&big),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn max_step_on_min_cost_start() {
        let net = layered();
        let start = zero_pseudoflow_vertex(&net);
        let path: Vec<(ArcId, Direction)> = [1, 5, 9]
            .into_iter()
            .map(|id| (ArcId(id), Direction::Forward))
            .collect();
        let g = path_circuit(&net, &path, PathVariant::MinusPlus, 1).unwrap();
        assert_eq!(max_step(&net, &start, &g, None), StepLength::Finite(rat(1)));
    }

    #[test]
    fn positive_trivial_is_unbounded_without_face() {
        let net = layered();
        let start = zero_pseudoflow_vertex(&net);
        let g = trivial_circuit(&net, NodeId(5), 1).unwrap();
        assert_eq!(max_step(&net, &start, &g, None), StepLength::Unbounded);
        let face = crate::geometry::face_for(&net, crate::geometry::Algorithm::Sspa).unwrap();
        assert_eq!(
            max_step(&net, &start, &g, Some(&face)),
            StepLength::Finite(rat(0))
        );
    }

    #[test]
    fn max_step_is_maximal() {
        let net = layered();
        let start = zero_pseudoflow_vertex(&net);
        let path: Vec<(ArcId, Direction)> = [1, 5, 9]
            .into_iter()
            .map(|id| (ArcId(id), Direction::Forward))
            .collect();
        let g = path_circuit(&net, &path, PathVariant::MinusPlus, 1).unwrap();
        let StepLength::Finite(alpha) = max_step(&net, &start, &g, None) else {
            panic!("expected finite step");
        };
        let at_alpha = apply_step(&start, &g, &alpha);
        assert!(crate::geometry::check_feasible(&net, &at_alpha, None).is_feasible());
        let beyond = apply_step(&start, &g, &(alpha + rat(1)));
        assert!(!crate::geometry::check_feasible(&net, &beyond, None).is_feasible());
    }

    #[test]
    fn push_circuit_step_length_is_residual_bound() {
        // after moving 3 units onto arc (2,4) of the preflow example, the
        // circuit pushing along (2,4) has one unit of room left
        let net = parse_network(
            include_str!("../../../fixtures/preflow.max"),
            InputFormat::DimacsMax,
        )
        .unwrap();
        let mut point = PseudoflowPoint::zeros(&net);
        // saturate source arcs
        for id in [1, 2, 3] {
            point.set_x(ArcId(id), rat(3));
        }
        point.set_s_plus(NodeId(5), rat(9));
        for node in [1, 2, 3] {
            point.set_s_minus(NodeId(node), rat(3));
        }
        // pushes of 3, 3, and 2 units on arcs 6, 5, and 4
        point.set_x(ArcId(6), rat(3));
        point.set_x(ArcId(5), rat(3));
        point.set_x(ArcId(4), rat(2));
        point.set_s_minus(NodeId(1), rat(1));
        point.set_s_minus(NodeId(2), rat(2));
        point.set_s_minus(NodeId(3), rat(0));
        point.set_s_minus(NodeId(4), rat(6));
        assert!(crate::geometry::check_feasible(&net, &point, None).is_feasible());
        let g = path_circuit(
            &net,
            &[(ArcId(5), Direction::Forward)],
            PathVariant::MinusMinus,
            1,
        )
        .unwrap();
        assert_eq!(max_step(&net, &point, &g, None), StepLength::Finite(rat(1)));
    }

    #[test]
    fn classification_round_trips() {
        let net = diamond();
        for circuit in enumerate_circuits(&net).unwrap() {
            let kind = classify(&net, &circuit.x, &circuit.s_plus, &circuit.s_minus).unwrap();
            assert_eq!(kind, circuit.kind.canonical());
        }
        // constructed kinds survive canonically
        let g = path_circuit(
            &net,
            &[(ArcId(4), Direction::Forward)],
            PathVariant::PlusPlus,
            -1,
        )
        .unwrap();
        let kind = classify(&net, &g.x, &g.s_plus, &g.s_minus).unwrap();
        assert_eq!(kind, g.kind.canonical());
    }

    #[test]
    fn key_orders_by_support_size_first() {
        let net = layered();
        let short = path_circuit(
            &net,
            &[(ArcId(4), Direction::Forward)],
            PathVariant::MinusPlus,
            1,
        )
        .unwrap();
        let long = path_circuit(
            &net,
            &[
                (ArcId(4), Direction::Forward),
                (ArcId(6), Direction::Forward),
                (ArcId(5), Direction::Backward),
                (ArcId(7), Direction::Forward),
            ],
            PathVariant::MinusPlus,
            1,
        )
        .unwrap();
        assert!(short.key() < long.key());
    }
}
