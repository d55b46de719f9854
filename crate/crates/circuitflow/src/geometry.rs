//! Points of the pseudoflow polyhedron, face restrictions, and exact
//! vertex/edge tests.
//!
//! The polyhedron for a network with m arcs and n nodes lives in m + 2n
//! coordinates: an arc flow x_a per arc, and slacks s⁺_i, s⁻_i per node that
//! absorb flow-balance violations via
//!
//! ```text
//! (out - in at node i) - s⁺_i + s⁻_i = b_i,   0 ≤ x ≤ u,   s⁺, s⁻ ≥ 0.
//! ```
//!
//! Every test here is a rank computation over exact rationals; there is no
//! tolerance anywhere.

use crate::network::{ArcId, Network, NetworkKind, NodeId};
use crate::{rat_zero, Error, Rational, Result};
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// One coordinate of the polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    X(ArcId),
    SPlus(NodeId),
    SMinus(NodeId),
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::X(a) => write!(f, "x[{}]", a),
            Coord::SPlus(i) => write!(f, "s+[{}]", i),
            Coord::SMinus(i) => write!(f, "s-[{}]", i),
        }
    }
}

impl Coord {
    /// Dense index in 0..m+2n, ordered x-block, s⁺-block, s⁻-block.
    pub fn index(&self, net: &Network) -> usize {
        let m = net.arc_count();
        let n = net.node_count();
        match self {
            Coord::X(a) => a.0 as usize - 1,
            Coord::SPlus(i) => m + i.0 as usize - 1,
            Coord::SMinus(i) => m + n + i.0 as usize - 1,
        }
    }
}

/// A point (x, s⁺, s⁻), stored densely. Immutable in spirit; the setters
/// exist for construction and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoflowPoint {
    x: Vec<Rational>,
    s_plus: Vec<Rational>,
    s_minus: Vec<Rational>,
}

impl PseudoflowPoint {
    pub fn zeros(net: &Network) -> Self {
        PseudoflowPoint {
            x: vec![rat_zero(); net.arc_count()],
            s_plus: vec![rat_zero(); net.node_count()],
            s_minus: vec![rat_zero(); net.node_count()],
        }
    }

    pub fn x(&self, arc: ArcId) -> Rational {
        self.x[arc.0 as usize - 1].clone()
    }

    pub fn s_plus(&self, node: NodeId) -> Rational {
        self.s_plus[node.0 as usize - 1].clone()
    }

    pub fn s_minus(&self, node: NodeId) -> Rational {
        self.s_minus[node.0 as usize - 1].clone()
    }

    pub fn get(&self, coord: Coord) -> Rational {
        match coord {
            Coord::X(a) => self.x(a),
            Coord::SPlus(i) => self.s_plus(i),
            Coord::SMinus(i) => self.s_minus(i),
        }
    }

    pub fn set_x(&mut self, arc: ArcId, value: Rational) {
        self.x[arc.0 as usize - 1] = value;
    }

    pub fn set_s_plus(&mut self, node: NodeId, value: Rational) {
        self.s_plus[node.0 as usize - 1] = value;
    }

    pub fn set_s_minus(&mut self, node: NodeId, value: Rational) {
        self.s_minus[node.0 as usize - 1] = value;
    }

    pub fn set(&mut self, coord: Coord, value: Rational) {
        match coord {
            Coord::X(a) => self.set_x(a, value),
            Coord::SPlus(i) => self.set_s_plus(i, value),
            Coord::SMinus(i) => self.set_s_minus(i, value),
        }
    }

    /// Arc flows in arc-id order.
    pub fn flows(&self) -> &[Rational] {
        &self.x
    }

    /// True if every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.x
            .iter()
            .chain(&self.s_plus)
            .chain(&self.s_minus)
            .all(|v| v.is_integer())
    }

    /// Coordinates with nonzero value, in canonical coordinate order.
    pub fn support(&self, net: &Network) -> Vec<(Coord, Rational)> {
        let mut out = Vec::new();
        for arc in net.arcs() {
            let v = self.x(arc.id);
            if !v.is_zero() {
                out.push((Coord::X(arc.id), v));
            }
        }
        for node in net.nodes() {
            let v = self.s_plus(node);
            if !v.is_zero() {
                out.push((Coord::SPlus(node), v));
            }
        }
        for node in net.nodes() {
            let v = self.s_minus(node);
            if !v.is_zero() {
                out.push((Coord::SMinus(node), v));
            }
        }
        out
    }

    /// Midpoint of two points; used by tests for convexity arguments.
    pub fn midpoint(&self, other: &PseudoflowPoint) -> PseudoflowPoint {
        let half = Rational::new(1.into(), 2.into());
        let avg = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            a.iter()
                .zip(b)
                .map(|(p, q)| (p.clone() + q.clone()) * half.clone())
                .collect()
        };
        PseudoflowPoint {
            x: avg(&self.x, &other.x),
            s_plus: avg(&self.s_plus, &other.s_plus),
            s_minus: avg(&self.s_minus, &other.s_minus),
        }
    }
}

/// A face of the polyhedron given by pinning slack coordinates to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSpec {
    pinned: BTreeSet<Coord>,
}

impl FaceSpec {
    /// The whole polyhedron: nothing pinned.
    pub fn all() -> Self {
        FaceSpec {
            pinned: BTreeSet::new(),
        }
    }

    pub fn new(net: &Network, pinned: impl IntoIterator<Item = Coord>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for coord in pinned {
            match coord {
                Coord::SPlus(i) | Coord::SMinus(i) => {
                    if i.0 == 0 || i.0 as usize > net.node_count() {
                        return Err(Error::BadArgument(format!(
                            "pinned slack {} names an unknown node",
                            coord
                        )));
                    }
                }
                Coord::X(_) => {
                    return Err(Error::BadArgument(format!(
                        "only slack coordinates can be pinned, got {}",
                        coord
                    )))
                }
            }
            set.insert(coord);
        }
        Ok(FaceSpec { pinned: set })
    }

    pub fn is_pinned(&self, coord: Coord) -> bool {
        self.pinned.contains(&coord)
    }

    pub fn pinned(&self) -> impl Iterator<Item = Coord> + '_ {
        self.pinned.iter().copied()
    }
}

/// Algorithms whose walks this crate traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Successive shortest paths for min-cost flow.
    Sspa,
    /// Generic augmenting paths for max flow.
    Gapa,
    /// Shortest augmenting paths for max flow.
    Sapa,
    /// Hungarian method for assignment.
    Hungarian,
    /// Preflow-push for max flow.
    PreflowPush,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Sspa => "sspa",
            Algorithm::Gapa => "gapa",
            Algorithm::Sapa => "sapa",
            Algorithm::Hungarian => "hungarian",
            Algorithm::PreflowPush => "preflow-push",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        match name {
            "sspa" => Some(Algorithm::Sspa),
            "gapa" => Some(Algorithm::Gapa),
            "sapa" => Some(Algorithm::Sapa),
            "hungarian" | "hm" => Some(Algorithm::Hungarian),
            "preflow-push" | "pfp" => Some(Algorithm::PreflowPush),
            _ => None,
        }
    }
}

/// The unique vertex with all arc flows zero: each node carries its entire
/// imbalance on one slack, s⁺_i = -b_i for b_i ≤ 0 and s⁻_i = b_i for
/// b_i > 0.
pub fn zero_pseudoflow_vertex(net: &Network) -> PseudoflowPoint {
    let mut point = PseudoflowPoint::zeros(net);
    for node in net.nodes() {
        let b = net.balance(node);
        if b > rat_zero() {
            point.set_s_minus(node, b);
        } else {
            point.set_s_plus(node, -b);
        }
    }
    point
}

/// The face each algorithm walks on, expressed as pinned slacks.
///
/// For the min-cost walk the deficit slack s⁺ stays free only on demand
/// nodes and the excess slack s⁻ only on supply nodes; nodes with zero
/// balance have both slacks pinned. Statements of this face sometimes
/// appear with the two slack superscripts swapped; the orientation fixed
/// here is the one under which the zero-pseudoflow vertex lies on the face,
/// and it agrees with the assignment and preflow faces below.
pub fn face_for(net: &Network, algorithm: Algorithm) -> Result<FaceSpec> {
    let mut pinned = Vec::new();
    match (algorithm, net.kind()) {
        (Algorithm::Sspa, NetworkKind::MinCost)
        | (Algorithm::Sspa, NetworkKind::Assignment { .. }) => {
            for node in net.nodes() {
                let b = net.balance(node);
                if b >= rat_zero() {
                    pinned.push(Coord::SPlus(node));
                }
                if b <= rat_zero() {
                    pinned.push(Coord::SMinus(node));
                }
            }
        }
        (Algorithm::Gapa | Algorithm::Sapa, NetworkKind::MaxFlow { source, sink }) => {
            for node in net.nodes() {
                if node != *source {
                    pinned.push(Coord::SPlus(node));
                }
                if node != *sink {
                    pinned.push(Coord::SMinus(node));
                }
            }
        }
        (Algorithm::Hungarian, NetworkKind::Assignment { left, right }) => {
            for &node in left {
                pinned.push(Coord::SPlus(node));
            }
            for &node in right {
                pinned.push(Coord::SMinus(node));
            }
        }
        (Algorithm::PreflowPush, NetworkKind::MaxFlow { source, .. }) => {
            pinned.push(Coord::SMinus(*source));
            for node in net.nodes() {
                if node != *source {
                    pinned.push(Coord::SPlus(node));
                }
            }
        }
        (algorithm, _) => {
            return Err(Error::KindMismatch {
                algorithm: algorithm.name().to_string(),
            })
        }
    }
    FaceSpec::new(net, pinned)
}

/// One constraint of the polyhedron description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintRow {
    Balance(NodeId),
    XAtLower(ArcId),
    XAtUpper(ArcId),
    SPlusAtZero(NodeId),
    SMinusAtZero(NodeId),
}

/// The constraints active at a point, with their exact rank.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    pub rows: Vec<ConstraintRow>,
    pub rank: usize,
}

fn constraint_coefficients(net: &Network, row: ConstraintRow) -> Vec<(usize, i64)> {
    match row {
        ConstraintRow::Balance(node) => {
            let mut entries = Vec::new();
            for arc in net.arcs() {
                if arc.tail == node {
                    entries.push((Coord::X(arc.id).index(net), 1));
                }
                if arc.head == node {
                    entries.push((Coord::X(arc.id).index(net), -1));
                }
            }
            entries.push((Coord::SPlus(node).index(net), -1));
            entries.push((Coord::SMinus(node).index(net), 1));
            entries
        }
        ConstraintRow::XAtLower(arc) | ConstraintRow::XAtUpper(arc) => {
            vec![(Coord::X(arc).index(net), 1)]
        }
        ConstraintRow::SPlusAtZero(node) => vec![(Coord::SPlus(node).index(net), 1)],
        ConstraintRow::SMinusAtZero(node) => vec![(Coord::SMinus(node).index(net), 1)],
    }
}

/// Rank of a set of constraint rows, by exact integer arithmetic.
fn rows_rank(net: &Network, rows: &[ConstraintRow]) -> usize {
    let width = net.coord_count();
    let matrix: Vec<Vec<i64>> = rows
        .iter()
        .map(|&row| {
            let mut dense = vec![0i64; width];
            for (idx, coeff) in constraint_coefficients(net, row) {
                dense[idx] += coeff;
            }
            dense
        })
        .collect();
    integer_rank(matrix)
}

/// Exact rank of an integer matrix via fraction-free (Bareiss) elimination.
/// Machine integers first; any overflow or inexact division falls back to
/// arbitrary precision. No rounding happens anywhere.
pub(crate) fn integer_rank(matrix: Vec<Vec<i64>>) -> usize {
    match bareiss_rank_i128(&matrix) {
        Some(rank) => rank,
        None => bareiss_rank_bigint(matrix),
    }
}

fn bareiss_rank_i128(matrix: &[Vec<i64>]) -> Option<usize> {
    let rows = matrix.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_value = m[rank][col];
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let left = pivot_value.checked_mul(m[r][c])?;
                let right = m[r][col].checked_mul(m[rank][c])?;
                let numerator = left.checked_sub(right)?;
                if numerator % prev != 0 {
                    return None;
                }
                m[r][c] = numerator / prev;
            }
            m[r][col] = 0;
        }
        prev = pivot_value;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_rank_bigint(matrix: Vec<Vec<i64>>) -> usize {
    use num_bigint::BigInt;
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_value = m[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let numerator = pivot_value.clone() * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = numerator / &prev;
            }
            m[r][col] = BigInt::from(0);
        }
        prev = pivot_value;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Constraints tight at `point`, with their rank. The point must satisfy the
/// polyhedron; call [`check_feasible`] first when in doubt.
pub fn active_set(net: &Network, point: &PseudoflowPoint) -> ActiveSet {
    let mut rows: Vec<ConstraintRow> = net.nodes().map(ConstraintRow::Balance).collect();
    for arc in net.arcs() {
        let v = point.x(arc.id);
        if v.is_zero() {
            rows.push(ConstraintRow::XAtLower(arc.id));
        }
        if v == arc.capacity {
            rows.push(ConstraintRow::XAtUpper(arc.id));
        }
    }
    for node in net.nodes() {
        if point.s_plus(node).is_zero() {
            rows.push(ConstraintRow::SPlusAtZero(node));
        }
        if point.s_minus(node).is_zero() {
            rows.push(ConstraintRow::SMinusAtZero(node));
        }
    }
    let rank = rows_rank(net, &rows);
    ActiveSet { rows, rank }
}

fn require_feasible(net: &Network, point: &PseudoflowPoint) -> Result<()> {
    let report = check_feasible(net, point, None);
    if report.is_feasible() {
        Ok(())
    } else {
        Err(Error::InfeasiblePoint(report.to_string()))
    }
}

/// True iff `point` is a vertex: the active constraints have full rank
/// m + 2n over the rationals.
pub fn is_vertex(net: &Network, point: &PseudoflowPoint) -> Result<bool> {
    require_feasible(net, point)?;
    Ok(active_set(net, point).rank == net.coord_count())
}

/// True iff `p` and `q` are distinct vertices whose common active
/// constraints have rank m + 2n - 1, i.e. the smallest face containing both
/// is one-dimensional.
pub fn is_edge_step(net: &Network, p: &PseudoflowPoint, q: &PseudoflowPoint) -> Result<bool> {
    require_feasible(net, p)?;
    require_feasible(net, q)?;
    if p == q {
        return Err(Error::BadArgument(
            "edge test requires two distinct points".to_string(),
        ));
    }
    if !is_vertex(net, p)? || !is_vertex(net, q)? {
        return Ok(false);
    }
    Ok(common_face_is_an_edge(net, p, q))
}

/// The edge condition alone, for callers that already know both points are
/// distinct vertices.
pub(crate) fn common_face_is_an_edge(
    net: &Network,
    p: &PseudoflowPoint,
    q: &PseudoflowPoint,
) -> bool {
    let at_p = active_set(net, p).rows;
    let at_q: BTreeSet<ConstraintRow> = active_set(net, q).rows.into_iter().collect();
    let common: Vec<ConstraintRow> = at_p.into_iter().filter(|r| at_q.contains(r)).collect();
    rows_rank(net, &common) == net.coord_count() - 1
}

/// A single constraint violation, with the offending value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Balance {
        node: NodeId,
        residual: Rational,
    },
    LowerBound {
        coord: Coord,
        value: Rational,
    },
    UpperBound {
        arc: ArcId,
        value: Rational,
        capacity: Rational,
    },
    FacePin {
        coord: Coord,
        value: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Balance { node, residual } => {
                write!(f, "balance row of node {} off by {}", node, residual)
            }
            Violation::LowerBound { coord, value } => {
                write!(f, "{} = {} below lower bound 0", coord, value)
            }
            Violation::UpperBound {
                arc,
                value,
                capacity,
            } => {
                write!(f, "x[{}] = {} above capacity {}", arc, value, capacity)
            }
            Violation::FacePin { coord, value } => {
                write!(f, "{} = {} but the face pins it to 0", coord, value)
            }
        }
    }
}

/// Diagnostic result of a feasibility check; empty iff feasible.
#[derive(Debug, Clone, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_feasible() {
            return write!(f, "feasible");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Lists every violated constraint of the polyhedron (and of `face`, when
/// given) with its residual. Never fails; an empty report means feasible.
pub fn check_feasible(
    net: &Network,
    point: &PseudoflowPoint,
    face: Option<&FaceSpec>,
) -> FeasibilityReport {
    let mut violations = Vec::new();
    for node in net.nodes() {
        let mut lhs = -point.s_plus(node) + point.s_minus(node);
        for arc in net.arcs() {
            if arc.tail == node {
                lhs += point.x(arc.id);
            }
            if arc.head == node {
                lhs -= point.x(arc.id);
            }
        }
        let residual = lhs - net.balance(node);
        if !residual.is_zero() {
            violations.push(Violation::Balance { node, residual });
        }
    }
    for arc in net.arcs() {
        let v = point.x(arc.id);
        if v < rat_zero() {
            violations.push(Violation::LowerBound {
                coord: Coord::X(arc.id),
                value: v.clone(),
            });
        }
        if v > arc.capacity {
            violations.push(Violation::UpperBound {
                arc: arc.id,
                value: v,
                capacity: arc.capacity.clone(),
            });
        }
    }
    for node in net.nodes() {
        for coord in [Coord::SPlus(node), Coord::SMinus(node)] {
            let v = point.get(coord);
            if v < rat_zero() {
                violations.push(Violation::LowerBound { coord, value: v });
            }
        }
    }
    if let Some(face) = face {
        for coord in face.pinned() {
            let v = point.get(coord);
            if !v.is_zero() {
                violations.push(Violation::FacePin { coord, value: v });
            }
        }
    }
    FeasibilityReport { violations }
}
