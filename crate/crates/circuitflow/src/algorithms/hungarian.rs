//! The Hungarian method in matrix form (star/prime/cover bookkeeping),
//! instrumented as a circuit walk on the assignment network.
//!
//! Every greedy star and every alternating-path augmentation is one unit
//! circuit step lowering the newly matched pair's slacks; the uniform
//! reduced-cost adjustments between augmentations are recorded as events,
//! not steps. Costs reported at the end are always with respect to the
//! original matrix.

use crate::circuits::{max_step, path_circuit, PathVariant, StepLength};
use crate::geometry::zero_pseudoflow_vertex;
use crate::network::{assignment_to_network, ArcId, Direction, Network, NodeId};
use crate::pivot::build_sspa_objective;
use crate::trace::{TraceEvent, WalkTrace};
use crate::{rat, Error, Rational, Result};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct HungarianRun {
    pub net: Network,
    pub trace: WalkTrace,
    /// `assignment[row] = column`, both zero-based.
    pub assignment: Vec<usize>,
    /// Total cost of the assignment under the original matrix.
    pub total_cost: Rational,
    /// Newly matched (person, task) node pair of every step, in step order.
    pub match_order: Vec<(NodeId, NodeId)>,
}

struct State {
    k: usize,
    reduced: Vec<Vec<Rational>>,
    star_in_row: Vec<Option<usize>>,
    star_in_col: Vec<Option<usize>>,
    prime_in_row: Vec<Option<usize>>,
    covered_row: Vec<bool>,
    covered_col: Vec<bool>,
}

impl State {
    fn first_uncovered_zero(&self) -> Option<(usize, usize)> {
        for r in 0..self.k {
            if self.covered_row[r] {
                continue;
            }
            for c in 0..self.k {
                if !self.covered_col[c] && self.reduced[r][c].is_zero() {
                    return Some((r, c));
                }
            }
        }
        None
    }

    fn cover_starred_columns(&mut self) -> usize {
        for c in 0..self.k {
            self.covered_col[c] = self.star_in_col[c].is_some();
        }
        self.covered_col.iter().filter(|b| **b).count()
    }
}

fn arc_of(k: usize, row: usize, col: usize) -> ArcId {
    ArcId((row * k + col) as u32 + 1)
}

fn left_node(row: usize) -> NodeId {
    NodeId(row as u32 + 1)
}

fn right_node(k: usize, col: usize) -> NodeId {
    NodeId((k + col) as u32 + 1)
}

pub fn run_hungarian(matrix: &[Vec<Rational>]) -> Result<HungarianRun> {
    let net = assignment_to_network(matrix)?;
    let k = matrix.len();
    let objective = build_sspa_objective(&net)?;
    let mut trace = WalkTrace::new(zero_pseudoflow_vertex(&net));
    let mut match_order: Vec<(NodeId, NodeId)> = Vec::new();

    let mut state = State {
        k,
        reduced: matrix.to_vec(),
        star_in_row: vec![None; k],
        star_in_col: vec![None; k],
        prime_in_row: vec![None; k],
        covered_row: vec![false; k],
        covered_col: vec![false; k],
    };

    for row in state.reduced.iter_mut() {
        let min = row.iter().cloned().min().unwrap();
        for cell in row.iter_mut() {
            *cell -= min.clone();
        }
    }
    for c in 0..k {
        let min = (0..k).map(|r| state.reduced[r][c].clone()).min().unwrap();
        for r in 0..k {
            state.reduced[r][c] -= min.clone();
        }
    }

    // greedy stars on zeros with no starred row or column, row-major
    for r in 0..k {
        for c in 0..k {
            if state.reduced[r][c].is_zero()
                && state.star_in_row[r].is_none()
                && state.star_in_col[c].is_none()
            {
                state.star_in_row[r] = Some(c);
                state.star_in_col[c] = Some(r);
                emit_step(
                    &net,
                    &objective,
                    &mut trace,
                    &[(arc_of(k, r, c), Direction::Forward)],
                )?;
                match_order.push((left_node(r), right_node(k, c)));
            }
        }
    }

    let mut covered = state.cover_starred_columns();
    let operation_cap = 16 * k * k * k + 64;
    let mut operations = 0usize;
    while covered < k {
        operations += 1;
        if operations > operation_cap {
            return Err(Error::Validation(
                "assignment solver exceeded its operation budget".to_string(),
            ));
        }
        match state.first_uncovered_zero() {
            Some((r, c)) => {
                state.prime_in_row[r] = Some(c);
                if let Some(starred_col) = state.star_in_row[r] {
                    state.covered_row[r] = true;
                    state.covered_col[starred_col] = false;
                    continue;
                }
                // alternating path of primes and stars, starting unmatched
                let mut traversal = vec![(arc_of(k, r, c), Direction::Forward)];
                let mut flips = vec![(r, c, true)];
                let mut col = c;
                while let Some(r2) = state.star_in_col[col] {
                    traversal.push((arc_of(k, r2, col), Direction::Backward));
                    flips.push((r2, col, false));
                    let c2 = state.prime_in_row[r2]
                        .expect("a starred row on the alternating path carries a prime");
                    traversal.push((arc_of(k, r2, c2), Direction::Forward));
                    flips.push((r2, c2, true));
                    col = c2;
                }
                for (fr, fc, make_star) in flips {
                    if make_star {
                        state.star_in_row[fr] = Some(fc);
                        state.star_in_col[fc] = Some(fr);
                    } else if state.star_in_row[fr] == Some(fc) {
                        state.star_in_row[fr] = None;
                    }
                }
                // star_in_col entries were overwritten by the new stars
                emit_step(&net, &objective, &mut trace, &traversal)?;
                match_order.push((left_node(r), right_node(k, col)));
                state.prime_in_row = vec![None; k];
                state.covered_row = vec![false; k];
                covered = state.cover_starred_columns();
            }
            None => {
                let mut h: Option<Rational> = None;
                for r in 0..k {
                    for c in 0..k {
                        if !state.covered_row[r] && !state.covered_col[c] {
                            let v = state.reduced[r][c].clone();
                            h = Some(match h.take() {
                                None => v,
                                Some(old) => old.min(v),
                            });
                        }
                    }
                }
                let Some(h) = h else {
                    return Err(Error::Validation(
                        "assignment solver ran out of uncovered cells".to_string(),
                    ));
                };
                for r in 0..k {
                    for c in 0..k {
                        if state.covered_row[r] {
                            state.reduced[r][c] += h.clone();
                        }
                        if !state.covered_col[c] {
                            state.reduced[r][c] -= h.clone();
                        }
                    }
                }
                trace.events.push(TraceEvent::CostAdjust {
                    amount: h,
                    after_step: trace.steps.len(),
                });
            }
        }
    }

    let assignment: Vec<usize> = state
        .star_in_row
        .iter()
        .map(|c| c.expect("termination requires a perfect matching"))
        .collect();
    let total_cost: Rational = assignment
        .iter()
        .enumerate()
        .map(|(r, &c)| matrix[r][c].clone())
        .sum();
    Ok(HungarianRun {
        net,
        trace,
        assignment,
        total_cost,
        match_order,
    })
}

fn emit_step(
    net: &Network,
    objective: &crate::pivot::Objective,
    trace: &mut WalkTrace,
    traversal: &[(ArcId, Direction)],
) -> Result<()> {
    let circuit = path_circuit(net, traversal, PathVariant::MinusPlus, 1)?;
    let point = trace.terminal_point().clone();
    let StepLength::Finite(alpha) = max_step(net, &point, &circuit, None) else {
        return Err(Error::Validation(
            "assignment step length must be finite".to_string(),
        ));
    };
    if alpha != rat(1) {
        return Err(Error::Validation(format!(
            "assignment step length must be 1, got {alpha}"
        )));
    }
    trace.push_step(net, objective, circuit, alpha);
    Ok(())
}
