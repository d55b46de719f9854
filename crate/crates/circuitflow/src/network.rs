//! Problem instances: directed networks with capacities, costs, and node
//! balances, plus parsing, serialization, and residual-network construction.

use crate::geometry::PseudoflowPoint;
use crate::{rat_zero, Error, Rational, Result};
use num_traits::Zero;
use std::fmt;

/// 1-based dense node identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// 1-based dense arc identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: Rational,
    pub cost: Rational,
}

/// What the instance asks for. Parsing fixes the kind; algorithms check it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkKind {
    MinCost,
    MaxFlow {
        source: NodeId,
        sink: NodeId,
    },
    Assignment {
        left: Vec<NodeId>,
        right: Vec<NodeId>,
    },
}

impl NetworkKind {
    pub fn name(&self) -> &'static str {
        match self {
            NetworkKind::MinCost => "min-cost",
            NetworkKind::MaxFlow { .. } => "max-flow",
            NetworkKind::Assignment { .. } => "assignment",
        }
    }
}

/// A validated problem instance. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_count: usize,
    arcs: Vec<Arc>,
    balances: Vec<Rational>,
    kind: NetworkKind,
}

impl Network {
    /// Builds and validates a network. Node ids must already be dense 1..n.
    pub fn new(
        node_count: usize,
        arcs: Vec<(NodeId, NodeId, Rational, Rational)>,
        balances: Vec<Rational>,
        kind: NetworkKind,
    ) -> Result<Self> {
        if balances.len() != node_count {
            return Err(Error::Validation(format!(
                "expected {} balances, got {}",
                node_count,
                balances.len()
            )));
        }
        let arcs: Vec<Arc> = arcs
            .into_iter()
            .enumerate()
            .map(|(i, (tail, head, capacity, cost))| Arc {
                id: ArcId(i as u32 + 1),
                tail,
                head,
                capacity,
                cost,
            })
            .collect();
        let net = Network {
            node_count,
            arcs,
            balances,
            kind,
        };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        let n = self.node_count;
        for arc in &self.arcs {
            for node in [arc.tail, arc.head] {
                if node.0 == 0 || node.0 as usize > n {
                    return Err(Error::Validation(format!(
                        "arc {} references unknown node {}",
                        arc.id, node
                    )));
                }
            }
            if arc.tail == arc.head {
                return Err(Error::Validation(format!("arc {} is a self-loop", arc.id)));
            }
            if arc.capacity < rat_zero() {
                return Err(Error::Validation(format!(
                    "arc {} has negative capacity",
                    arc.id
                )));
            }
        }
        match &self.kind {
            NetworkKind::MinCost | NetworkKind::Assignment { .. } => {
                let total: Rational = self.balances.iter().cloned().sum();
                if !total.is_zero() {
                    return Err(Error::Validation(format!(
                        "node balances must sum to zero, got {}",
                        total
                    )));
                }
                for arc in &self.arcs {
                    if arc.cost < rat_zero() {
                        return Err(Error::Validation(format!(
                            "arc {} has negative cost",
                            arc.id
                        )));
                    }
                }
            }
            NetworkKind::MaxFlow { source, sink } => {
                if source == sink {
                    return Err(Error::Validation("source and sink must differ".to_string()));
                }
                for (i, b) in self.balances.iter().enumerate() {
                    if !b.is_zero() {
                        return Err(Error::Validation(format!(
                            "max-flow instance requires zero balances, node {} has {}",
                            i + 1,
                            b
                        )));
                    }
                }
            }
        }
        if let NetworkKind::Assignment { left, right } = &self.kind {
            self.validate_assignment(left, right)?;
        }
        Ok(())
    }

    fn validate_assignment(&self, left: &[NodeId], right: &[NodeId]) -> Result<()> {
        use num_traits::One;
        if left.len() != right.len() || left.len() + right.len() != self.node_count {
            return Err(Error::Validation(
                "assignment sides must partition the nodes evenly".to_string(),
            ));
        }
        let k = left.len();
        if self.arcs.len() != k * k {
            return Err(Error::Validation(
                "assignment instance must have a complete left-to-right arc set".to_string(),
            ));
        }
        for arc in &self.arcs {
            if !left.contains(&arc.tail) || !right.contains(&arc.head) {
                return Err(Error::Validation(format!(
                    "assignment arc {} must run from the left side to the right side",
                    arc.id
                )));
            }
            if !arc.capacity.is_one() {
                return Err(Error::Validation(format!(
                    "assignment arc {} must have capacity 1",
                    arc.id
                )));
            }
        }
        for &node in left {
            if self.balance(node) != crate::rat(1) {
                return Err(Error::Validation(format!(
                    "left node {} must have balance 1",
                    node
                )));
            }
        }
        for &node in right {
            if self.balance(node) != crate::rat(-1) {
                return Err(Error::Validation(format!(
                    "right node {} must have balance -1",
                    node
                )));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (1..=self.node_count as u32).map(NodeId)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.0 as usize - 1]
    }

    pub fn balance(&self, node: NodeId) -> Rational {
        self.balances[node.0 as usize - 1].clone()
    }

    pub fn balances(&self) -> &[Rational] {
        &self.balances
    }

    pub fn kind(&self) -> &NetworkKind {
        &self.kind
    }

    /// Number of polyhedron coordinates: one per arc plus two slacks per node.
    pub fn coord_count(&self) -> usize {
        self.arc_count() + 2 * self.node_count
    }
}

/// Orientation of a residual arc relative to its originating arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualArc {
    pub arc: ArcId,
    pub direction: Direction,
    pub from: NodeId,
    pub to: NodeId,
    pub residual: Rational,
    pub cost: Rational,
}

/// Remaining capacity relative to a pseudoflow. Arcs at zero residual are
/// absent; a backward arc carries the negated cost of its original arc.
#[derive(Debug, Clone)]
pub struct ResidualNetwork {
    arcs: Vec<ResidualArc>,
    out_by_node: Vec<Vec<usize>>,
}

impl ResidualNetwork {
    pub fn arcs(&self) -> &[ResidualArc] {
        &self.arcs
    }

    /// Residual arcs leaving `node`, in (arc id, forward-before-backward) order.
    pub fn outgoing(&self, node: NodeId) -> impl Iterator<Item = &ResidualArc> {
        self.out_by_node[node.0 as usize - 1]
            .iter()
            .map(move |&i| &self.arcs[i])
    }
}

/// Builds the residual network of `net` at `point`.
///
/// Every original arc contributes a forward residual arc iff its flow is
/// below capacity and a backward residual arc iff its flow is positive.
pub fn build_residual(net: &Network, point: &PseudoflowPoint) -> Result<ResidualNetwork> {
    let mut arcs = Vec::new();
    for arc in net.arcs() {
        let flow = point.x(arc.id);
        if flow < rat_zero() || flow > arc.capacity {
            return Err(Error::InfeasiblePoint(format!(
                "flow {} on arc {} violates bounds [0, {}]",
                flow, arc.id, arc.capacity
            )));
        }
        if flow < arc.capacity {
            arcs.push(ResidualArc {
                arc: arc.id,
                direction: Direction::Forward,
                from: arc.tail,
                to: arc.head,
                residual: arc.capacity.clone() - flow.clone(),
                cost: arc.cost.clone(),
            });
        }
        if flow > rat_zero() {
            arcs.push(ResidualArc {
                arc: arc.id,
                direction: Direction::Backward,
                from: arc.head,
                to: arc.tail,
                residual: flow,
                cost: -arc.cost.clone(),
            });
        }
    }
    let mut out_by_node = vec![Vec::new(); net.node_count()];
    for (i, r) in arcs.iter().enumerate() {
        out_by_node[r.from.0 as usize - 1].push(i);
    }
    Ok(ResidualNetwork { arcs, out_by_node })
}

/// Input formats accepted by [`parse_network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    DimacsMin,
    DimacsMax,
    AssignmentCsv,
}

impl InputFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &str) -> Option<InputFormat> {
        if path.ends_with(".min") {
            Some(InputFormat::DimacsMin)
        } else if path.ends_with(".max") {
            Some(InputFormat::DimacsMax)
        } else if path.ends_with(".csv") {
            Some(InputFormat::AssignmentCsv)
        } else {
            None
        }
    }
}

/// Parses an instance file. Node ids are compacted to 1..n preserving the
/// order of first appearance in the header-declared range.
pub fn parse_network(text: &str, format: InputFormat) -> Result<Network> {
    match format {
        InputFormat::DimacsMin => parse_dimacs_min(text),
        InputFormat::DimacsMax => parse_dimacs_max(text),
        InputFormat::AssignmentCsv => parse_assignment_csv(text),
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_rat_at(line: usize, token: &str) -> Result<Rational> {
    crate::parse_rational(token).map_err(|e| syntax(line, format!("bad number {:?}: {}", token, e)))
}

fn parse_usize_at(line: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("bad integer {:?}", token)))
}

struct DimacsHeader {
    n: usize,
    m: usize,
}

fn parse_dimacs_header(text: &str, want: &str) -> Result<DimacsHeader> {
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                if fields.len() != 4 || fields[1] != want {
                    return Err(syntax(line, format!("expected `p {} <n> <m>`", want)));
                }
                return Ok(DimacsHeader {
                    n: parse_usize_at(line, fields[2])?,
                    m: parse_usize_at(line, fields[3])?,
                });
            }
            Some(other) => {
                return Err(syntax(
                    line,
                    format!("expected problem line, got {:?}", other),
                ))
            }
        }
    }
    Err(syntax(text.lines().count().max(1), "missing problem line"))
}

fn parse_dimacs_min(text: &str) -> Result<Network> {
    let header = parse_dimacs_header(text, "min")?;
    let mut balances = vec![rat_zero(); header.n];
    let mut arcs = Vec::with_capacity(header.m);
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                seen_header = true;
                continue;
            }
            Some(&"n") => {
                if !seen_header {
                    return Err(syntax(line, "node line before problem line"));
                }
                if fields.len() != 3 {
                    return Err(syntax(line, "expected `n <id> <balance>`"));
                }
                let id = parse_usize_at(line, fields[1])?;
                if id == 0 || id > header.n {
                    return Err(syntax(line, format!("node id {} out of range", id)));
                }
                balances[id - 1] = parse_rat_at(line, fields[2])?;
            }
            Some(&"a") => {
                if !seen_header {
                    return Err(syntax(line, "arc line before problem line"));
                }
                if fields.len() != 6 {
                    return Err(syntax(
                        line,
                        "expected `a <tail> <head> <low> <cap> <cost>`",
                    ));
                }
                let tail = parse_usize_at(line, fields[1])?;
                let head = parse_usize_at(line, fields[2])?;
                let low = parse_rat_at(line, fields[3])?;
                if !low.is_zero() {
                    return Err(syntax(line, "nonzero lower bounds are not supported"));
                }
                let cap = parse_rat_at(line, fields[4])?;
                let cost = parse_rat_at(line, fields[5])?;
                arcs.push((NodeId(tail as u32), NodeId(head as u32), cap, cost));
            }
            Some(other) => return Err(syntax(line, format!("unknown line kind {:?}", other))),
        }
    }
    if arcs.len() != header.m {
        return Err(Error::Validation(format!(
            "problem line declares {} arcs, file has {}",
            header.m,
            arcs.len()
        )));
    }
    Network::new(header.n, arcs, balances, NetworkKind::MinCost)
}

fn parse_dimacs_max(text: &str) -> Result<Network> {
    let header = parse_dimacs_header(text, "max")?;
    let mut source = None;
    let mut sink = None;
    let mut arcs = Vec::with_capacity(header.m);
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                seen_header = true;
                continue;
            }
            Some(&"n") => {
                if !seen_header {
                    return Err(syntax(line, "node line before problem line"));
                }
                if fields.len() != 3 {
                    return Err(syntax(line, "expected `n <id> s|t`"));
                }
                let id = parse_usize_at(line, fields[1])?;
                if id == 0 || id > header.n {
                    return Err(syntax(line, format!("node id {} out of range", id)));
                }
                match fields[2] {
                    "s" => source = Some(NodeId(id as u32)),
                    "t" => sink = Some(NodeId(id as u32)),
                    other => return Err(syntax(line, format!("expected s or t, got {:?}", other))),
                }
            }
            Some(&"a") => {
                if !seen_header {
                    return Err(syntax(line, "arc line before problem line"));
                }
                if fields.len() != 4 {
                    return Err(syntax(line, "expected `a <tail> <head> <cap>`"));
                }
                let tail = parse_usize_at(line, fields[1])?;
                let head = parse_usize_at(line, fields[2])?;
                let cap = parse_rat_at(line, fields[3])?;
                arcs.push((NodeId(tail as u32), NodeId(head as u32), cap, rat_zero()));
            }
            Some(other) => return Err(syntax(line, format!("unknown line kind {:?}", other))),
        }
    }
    if arcs.len() != header.m {
        return Err(Error::Validation(format!(
            "problem line declares {} arcs, file has {}",
            header.m,
            arcs.len()
        )));
    }
    let source = source.ok_or_else(|| Error::Validation("missing source node line".into()))?;
    let sink = sink.ok_or_else(|| Error::Validation("missing sink node line".into()))?;
    let balances = vec![rat_zero(); header.n];
    Network::new(
        header.n,
        arcs,
        balances,
        NetworkKind::MaxFlow { source, sink },
    )
}

fn parse_assignment_csv(text: &str) -> Result<Network> {
    let mut matrix = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let row: Vec<Rational> = raw
            .split(',')
            .map(|cell| parse_rat_at(line, cell.trim()))
            .collect::<Result<_>>()?;
        matrix.push(row);
    }
    assignment_to_network(&matrix)
}

/// Builds the assignment-kind network for a square cost matrix: left node i
/// is node i, right node j is node k+j, and arc (i, j) has unit capacity and
/// cost `matrix[i][j]`. Arc ids are row-major.
pub fn assignment_to_network(matrix: &[Vec<Rational>]) -> Result<Network> {
    let k = matrix.len();
    if k == 0 {
        return Err(Error::Validation("empty cost matrix".to_string()));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != k {
            return Err(Error::Validation(format!(
                "cost matrix is not square: row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                k
            )));
        }
        for (j, cell) in row.iter().enumerate() {
            if *cell < rat_zero() {
                return Err(Error::Validation(format!(
                    "cost matrix entry ({}, {}) is negative",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut arcs = Vec::with_capacity(k * k);
    for (i, row) in matrix.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            arcs.push((
                NodeId(i as u32 + 1),
                NodeId((k + j) as u32 + 1),
                crate::rat(1),
                cell.clone(),
            ));
        }
    }
    let mut balances = vec![crate::rat(1); k];
    balances.extend(std::iter::repeat_n(crate::rat(-1), k));
    let left = (1..=k as u32).map(NodeId).collect();
    let right = (k as u32 + 1..=2 * k as u32).map(NodeId).collect();
    Network::new(
        2 * k,
        arcs,
        balances,
        NetworkKind::Assignment { left, right },
    )
}

/// Extracts the cost matrix of an assignment-kind network (row-major arcs).
pub fn assignment_matrix(net: &Network) -> Result<Vec<Vec<Rational>>> {
    let NetworkKind::Assignment { left, .. } = net.kind() else {
        return Err(Error::KindMismatch {
            algorithm: "assignment matrix extraction".to_string(),
        });
    };
    let k = left.len();
    let mut matrix = vec![vec![rat_zero(); k]; k];
    for arc in net.arcs() {
        let row = arc.tail.0 as usize - 1;
        let col = arc.head.0 as usize - 1 - k;
        matrix[row][col] = arc.cost.clone();
    }
    Ok(matrix)
}

/// Serializes a network in the format it would be parsed from. Reparsing the
/// output yields an identical network.
pub fn serialize_network(net: &Network) -> String {
    let mut out = String::new();
    match net.kind() {
        NetworkKind::MinCost => {
            out.push_str(&format!("p min {} {}\n", net.node_count(), net.arc_count()));
            for node in net.nodes() {
                let b = net.balance(node);
                if !b.is_zero() {
                    out.push_str(&format!("n {} {}\n", node, b));
                }
            }
            for arc in net.arcs() {
                out.push_str(&format!(
                    "a {} {} 0 {} {}\n",
                    arc.tail, arc.head, arc.capacity, arc.cost
                ));
            }
        }
        NetworkKind::MaxFlow { source, sink } => {
            out.push_str(&format!("p max {} {}\n", net.node_count(), net.arc_count()));
            out.push_str(&format!("n {} s\n", source));
            out.push_str(&format!("n {} t\n", sink));
            for arc in net.arcs() {
                out.push_str(&format!("a {} {} {}\n", arc.tail, arc.head, arc.capacity));
            }
        }
        NetworkKind::Assignment { left, .. } => {
            let k = left.len();
            for i in 0..k {
                let row: Vec<String> = (0..k)
                    .map(|j| net.arc(ArcId((i * k + j) as u32 + 1)).cost.to_string())
                    .collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PseudoflowPoint;
    use crate::rat;

    const LAYERED: &str = include_str!("../../../fixtures/layered.min");

    #[test]
    fn parses_min_cost_instance() {
        let net = parse_network(LAYERED, InputFormat::DimacsMin).unwrap();
        assert_eq!(net.node_count(), 12);
        assert_eq!(net.arc_count(), 12);
        let total: Rational = net.balances().iter().cloned().sum();
        assert!(total.is_zero());
        assert_eq!(net.balance(NodeId(1)), rat(1));
        assert_eq!(net.balance(NodeId(12)), rat(-1));
        assert_eq!(net.arc(ArcId(5)).capacity, rat(2));
    }

    #[test]
    fn empty_arc_list_is_valid() {
        let net = parse_network("p min 3 0\n", InputFormat::DimacsMin).unwrap();
        assert_eq!(net.arc_count(), 0);
        assert_eq!(net.node_count(), 3);
    }

    #[test]
    fn rejects_nonzero_lower_bound() {
        let err = parse_network(
            "p min 2 1\nn 1 1\nn 2 -1\na 1 2 1 3 1\n",
            InputFormat::DimacsMin,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err}");
    }

    #[test]
    fn rejects_imbalanced_supply() {
        let err = parse_network(
            "p min 2 1\nn 1 2\nn 2 -1\na 1 2 0 3 1\n",
            InputFormat::DimacsMin,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn rejects_negative_cost_for_min_cost() {
        let err = parse_network(
            "p min 2 1\nn 1 1\nn 2 -1\na 1 2 0 3 -1\n",
            InputFormat::DimacsMin,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn rejects_self_loop() {
        let err = parse_network("p min 2 1\na 1 1 0 3 1\n", InputFormat::DimacsMin).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn rejects_negative_capacity() {
        let err = parse_network("p min 2 1\na 1 2 0 -3 1\n", InputFormat::DimacsMin).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn reports_syntax_error_line() {
        let err = parse_network("p min 2 1\na 1 2 0 x 1\n", InputFormat::DimacsMin).unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn parses_assignment_csv() {
        let net = parse_network("4,1,3\n2,0,5\n3,2,2\n", InputFormat::AssignmentCsv).unwrap();
        assert_eq!(net.node_count(), 6);
        assert_eq!(net.arc_count(), 9);
        assert_eq!(net.arc(ArcId(2)).cost, rat(1));
        assert_eq!(net.arc(ArcId(2)).tail, NodeId(1));
        assert_eq!(net.arc(ArcId(2)).head, NodeId(5));
        assert!(matches!(net.kind(), NetworkKind::Assignment { .. }));
    }

    #[test]
    fn one_by_one_assignment() {
        let net = assignment_to_network(&[vec![rat(5)]]).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.arc_count(), 1);
        assert_eq!(net.arc(ArcId(1)).cost, rat(5));
        assert_eq!(net.arc(ArcId(1)).capacity, rat(1));
    }

    #[test]
    fn rejects_non_square_matrix() {
        let err = assignment_to_network(&[vec![rat(1), rat(2)], vec![rat(3)]]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
        let err = assignment_to_network(&[vec![rat(1), rat(-2)], vec![rat(3), rat(0)]]);
        assert!(err.is_err());
    }

    #[test]
    fn residual_of_zero_flow_is_all_forward() {
        let net = parse_network(LAYERED, InputFormat::DimacsMin).unwrap();
        let zero = PseudoflowPoint::zeros(&net);
        let residual = build_residual(&net, &zero).unwrap();
        assert_eq!(residual.arcs().len(), net.arc_count());
        assert!(residual
            .arcs()
            .iter()
            .all(|r| r.direction == Direction::Forward && r.residual == net.arc(r.arc).capacity));
    }

    #[test]
    fn residual_after_unit_path_flow() {
        // one unit along 1->5->7->9 (arcs 1, 5, 9)
        let net = parse_network(LAYERED, InputFormat::DimacsMin).unwrap();
        let mut point = PseudoflowPoint::zeros(&net);
        for id in [1, 5, 9] {
            point.set_x(ArcId(id), rat(1));
        }
        let residual = build_residual(&net, &point).unwrap();
        let backward: Vec<_> = residual
            .arcs()
            .iter()
            .filter(|r| r.direction == Direction::Backward)
            .collect();
        assert_eq!(backward.len(), 3);
        for r in &backward {
            assert_eq!(r.residual, rat(1));
            assert_eq!(r.cost, -net.arc(r.arc).cost.clone());
        }
        // arc 5 = (5,7) with capacity 2 keeps a forward residual of 1
        let fwd5 = residual
            .arcs()
            .iter()
            .find(|r| r.arc == ArcId(5) && r.direction == Direction::Forward)
            .unwrap();
        assert_eq!(fwd5.residual, rat(1));
        // saturated arcs lost their forward copy
        assert!(!residual
            .arcs()
            .iter()
            .any(|r| r.arc == ArcId(1) && r.direction == Direction::Forward));
    }

    #[test]
    fn residual_rejects_capacity_violation() {
        let net = parse_network(LAYERED, InputFormat::DimacsMin).unwrap();
        let mut point = PseudoflowPoint::zeros(&net);
        point.set_x(ArcId(1), rat(2));
        assert!(build_residual(&net, &point).is_err());
    }

    #[test]
    fn serialize_round_trips_on_every_fixture() {
        let fixtures: [(&str, InputFormat); 6] = [
            (
                include_str!("../../../fixtures/diamond.min"),
                InputFormat::DimacsMin,
            ),
            (
                include_str!("../../../fixtures/layered.min"),
                InputFormat::DimacsMin,
            ),
            (
                include_str!("../../../fixtures/expansion.max"),
                InputFormat::DimacsMax,
            ),
            (
                include_str!("../../../fixtures/preflow.max"),
                InputFormat::DimacsMax,
            ),
            (
                include_str!("../../../fixtures/sixnode.max"),
                InputFormat::DimacsMax,
            ),
            (
                include_str!("../../../fixtures/assign3x3.csv"),
                InputFormat::AssignmentCsv,
            ),
        ];
        for (text, format) in fixtures {
            let net = parse_network(text, format).unwrap();
            let serialized = serialize_network(&net);
            assert_eq!(net, parse_network(&serialized, format).unwrap());
        }
    }

    #[test]
    fn parallel_arcs_are_allowed() {
        let net = parse_network(
            "p min 2 2\nn 1 1\nn 2 -1\na 1 2 0 1 1\na 1 2 0 1 2\n",
            InputFormat::DimacsMin,
        )
        .unwrap();
        assert_eq!(net.arc_count(), 2);
    }
}
