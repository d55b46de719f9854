//! Independent oracles for the acceptance suite. Everything here computes
//! reference answers from first principles (exhaustive enumeration or a
//! standalone textbook routine) without touching the library's solver or
//! polyhedron machinery, so agreement is meaningful.

use circuitflow::network::{ArcId, Direction, Network, NodeId};
use circuitflow::{rat, Rational};
use num_traits::Zero;

fn as_i64(value: &Rational) -> i64 {
    assert!(value.is_integer(), "oracle inputs must be integer data");
    let (sign, digits) = value.numer().to_u64_digits();
    let magnitude = match digits.len() {
        0 => 0i64,
        1 => i64::try_from(digits[0]).expect("oracle inputs must fit machine integers"),
        _ => panic!("oracle inputs must fit machine integers"),
    };
    match sign {
        num_bigint::Sign::Minus => -magnitude,
        _ => magnitude,
    }
}

/// Minimum cost of an integral feasible flow, by exhaustive enumeration of
/// all integral arc-flow vectors within capacity. `None` means infeasible.
pub fn min_cost_by_enumeration(net: &Network) -> Option<Rational> {
    let n = net.node_count();
    let m = net.arc_count();
    let caps: Vec<i64> = net.arcs().iter().map(|a| as_i64(&a.capacity)).collect();
    let costs: Vec<i64> = net.arcs().iter().map(|a| as_i64(&a.cost)).collect();
    let balances: Vec<i64> = net.balances().iter().map(as_i64).collect();
    let tails: Vec<usize> = net.arcs().iter().map(|a| a.tail.0 as usize - 1).collect();
    let heads: Vec<usize> = net.arcs().iter().map(|a| a.head.0 as usize - 1).collect();

    // per-node slack bounds from arcs not yet assigned
    let mut remaining_out = vec![0i64; n];
    let mut remaining_in = vec![0i64; n];
    for a in 0..m {
        remaining_out[tails[a]] += caps[a];
        remaining_in[heads[a]] += caps[a];
    }

    struct Search {
        caps: Vec<i64>,
        costs: Vec<i64>,
        balances: Vec<i64>,
        tails: Vec<usize>,
        heads: Vec<usize>,
        partial: Vec<i64>,
        remaining_out: Vec<i64>,
        remaining_in: Vec<i64>,
        best: Option<i64>,
    }

    impl Search {
        fn feasible_so_far(&self) -> bool {
            self.partial.iter().enumerate().all(|(v, &p)| {
                p - self.remaining_in[v] <= self.balances[v]
                    && self.balances[v] <= p + self.remaining_out[v]
            })
        }

        fn go(&mut self, arc: usize, cost_so_far: i64) {
            if let Some(best) = self.best {
                if cost_so_far >= best {
                    return; // costs are nonnegative
                }
            }
            if arc == self.caps.len() {
                if self.partial == self.balances {
                    self.best = Some(cost_so_far);
                }
                return;
            }
            let (tail, head) = (self.tails[arc], self.heads[arc]);
            self.remaining_out[tail] -= self.caps[arc];
            self.remaining_in[head] -= self.caps[arc];
            for flow in 0..=self.caps[arc] {
                self.partial[tail] += if flow == 0 { 0 } else { 1 };
                self.partial[head] -= if flow == 0 { 0 } else { 1 };
                // partial updated incrementally one unit at a time
                if self.feasible_so_far() {
                    self.go(arc + 1, cost_so_far + flow * self.costs[arc]);
                }
            }
            self.partial[tail] -= self.caps[arc];
            self.partial[head] += self.caps[arc];
            self.remaining_out[tail] += self.caps[arc];
            self.remaining_in[head] += self.caps[arc];
        }
    }

    let mut search = Search {
        caps,
        costs,
        balances,
        tails,
        heads,
        partial: vec![0; n],
        remaining_out,
        remaining_in,
        best: None,
    };
    search.go(0, 0);
    search.best.map(rat)
}

/// Max-flow value by a standalone augmenting-path routine over an adjacency
/// matrix; independent of the library's residual machinery.
pub fn max_flow_by_augmenting(net: &Network) -> Rational {
    let circuitflow::network::NetworkKind::MaxFlow { source, sink } = *net.kind() else {
        panic!("max-flow oracle needs a max-flow instance");
    };
    let n = net.node_count();
    let (s, t) = (source.0 as usize - 1, sink.0 as usize - 1);
    let mut capacity = vec![vec![0i64; n]; n];
    for arc in net.arcs() {
        capacity[arc.tail.0 as usize - 1][arc.head.0 as usize - 1] += as_i64(&arc.capacity);
    }
    let mut total = 0i64;
    loop {
        // breadth-first search for any augmenting path
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && capacity[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return rat(total);
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let u = parent[v];
            bottleneck = bottleneck.min(capacity[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            capacity[u][v] -= bottleneck;
            capacity[v][u] += bottleneck;
            v = u;
        }
        total += bottleneck;
    }
}

/// Minimum assignment cost over all permutations.
pub fn assignment_by_permutations(matrix: &[Vec<Rational>]) -> Rational {
    let k = matrix.len();
    fn go(
        matrix: &[Vec<Rational>],
        row: usize,
        used: &mut Vec<bool>,
        best: &mut Option<Rational>,
        acc: Rational,
    ) {
        if row == matrix.len() {
            let better = best.as_ref().map(|b| acc < *b).unwrap_or(true);
            if better {
                *best = Some(acc);
            }
            return;
        }
        for col in 0..matrix.len() {
            if !used[col] {
                used[col] = true;
                go(
                    matrix,
                    row + 1,
                    used,
                    best,
                    acc.clone() + matrix[row][col].clone(),
                );
                used[col] = false;
            }
        }
    }
    let mut best = None;
    go(matrix, 0, &mut vec![false; k], &mut best, Rational::zero());
    best.expect("nonempty matrix")
}

/// Directed simple cycles of zero total cost in the residual network at a
/// point, as (arc, direction) traversals anchored at their smallest node.
pub fn zero_cost_residual_cycles(
    net: &Network,
    point: &circuitflow::geometry::PseudoflowPoint,
) -> Vec<Vec<(ArcId, Direction)>> {
    let residual = circuitflow::network::build_residual(net, point).unwrap();
    let arcs: Vec<(usize, usize, ArcId, Direction, Rational)> = residual
        .arcs()
        .iter()
        .map(|r| {
            (
                r.from.0 as usize,
                r.to.0 as usize,
                r.arc,
                r.direction,
                r.cost.clone(),
            )
        })
        .collect();
    let n = net.node_count();
    let mut cycles = Vec::new();
    // depth-first walks from each anchor using only nodes >= anchor
    fn go(
        arcs: &[(usize, usize, ArcId, Direction, Rational)],
        anchor: usize,
        at: usize,
        cost: Rational,
        visited: &mut Vec<bool>,
        stack: &mut Vec<(ArcId, Direction)>,
        cycles: &mut Vec<Vec<(ArcId, Direction)>>,
    ) {
        for (from, to, id, direction, arc_cost) in arcs {
            if *from != at {
                continue;
            }
            if stack.iter().any(|(a, d)| a == id && d == direction) {
                continue;
            }
            let total = cost.clone() + arc_cost.clone();
            if *to == anchor {
                if !stack.is_empty() && total.is_zero() {
                    let mut cycle = stack.clone();
                    cycle.push((*id, *direction));
                    cycles.push(cycle);
                }
                continue;
            }
            if *to < anchor || visited[*to] {
                continue;
            }
            visited[*to] = true;
            stack.push((*id, *direction));
            go(arcs, anchor, *to, total, visited, stack, cycles);
            stack.pop();
            visited[*to] = false;
        }
    }
    for anchor in 1..=n {
        let mut visited = vec![false; n + 1];
        visited[anchor] = true;
        let mut stack = Vec::new();
        go(
            &arcs,
            anchor,
            anchor,
            Rational::zero(),
            &mut visited,
            &mut stack,
            &mut cycles,
        );
    }
    cycles
}

pub fn node(id: u32) -> NodeId {
    NodeId(id)
}

pub fn arc(id: u32) -> ArcId {
    ArcId(id)
}
