//! Circuit-walk traces: the shared record format emitted by the
//! combinatorial algorithms and by the augmentation engine.

use crate::circuits::{apply_step, max_step, Circuit, StepLength};
use crate::geometry::{check_feasible, FaceSpec, PseudoflowPoint};
use crate::network::{Network, NodeId};
use crate::pivot::Objective;
use crate::{Error, Rational, Result};

/// One maximal circuit step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    pub circuit: Circuit,
    pub alpha: Rational,
    pub point_after: PseudoflowPoint,
    pub objective_after: Rational,
}

/// Non-step happenings worth keeping alongside a walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// A distance label increased (preflow-push).
    Relabel {
        node: NodeId,
        old_label: u64,
        new_label: u64,
        after_step: usize,
    },
    /// Reduced costs shifted by a uniform amount (Hungarian h-adjustment).
    CostAdjust { amount: Rational, after_step: usize },
    /// The selected improving circuit had no finite maximal step.
    UnboundedDirection { circuit: Circuit },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    /// No improving feasible circuit remains.
    Optimal,
    /// The step limit cut the walk short.
    Stalled,
    /// An improving circuit with unbounded step length was found.
    Unbounded,
}

impl TraceStatus {
    pub fn name(&self) -> &'static str {
        match self {
            TraceStatus::Optimal => "optimal",
            TraceStatus::Stalled => "stalled",
            TraceStatus::Unbounded => "unbounded",
        }
    }
}

/// An ordered circuit walk from a starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub start: PseudoflowPoint,
    pub steps: Vec<WalkStep>,
    pub events: Vec<TraceEvent>,
    pub status: TraceStatus,
}

impl WalkTrace {
    pub fn new(start: PseudoflowPoint) -> Self {
        WalkTrace {
            start,
            steps: Vec::new(),
            events: Vec::new(),
            status: TraceStatus::Optimal,
        }
    }

    pub fn terminal_point(&self) -> &PseudoflowPoint {
        self.steps
            .last()
            .map(|s| &s.point_after)
            .unwrap_or(&self.start)
    }

    /// All points visited, start first.
    pub fn points(&self) -> Vec<&PseudoflowPoint> {
        std::iter::once(&self.start)
            .chain(self.steps.iter().map(|s| &s.point_after))
            .collect()
    }

    pub fn push_step(
        &mut self,
        net: &Network,
        objective: &Objective,
        circuit: Circuit,
        alpha: Rational,
    ) {
        let before = self.terminal_point().clone();
        let point_after = apply_step(&before, &circuit, &alpha);
        let objective_after = objective.value(net, &point_after);
        self.steps.push(WalkStep {
            circuit,
            alpha,
            point_after,
            objective_after,
        });
    }
}

/// Re-validates a trace as a circuit walk: every point feasible (inside
/// `face` when given), every step's circuit feasible at its start point,
/// every α positive, maximal, and consistent with the recorded points.
pub fn validate_walk(net: &Network, face: Option<&FaceSpec>, trace: &WalkTrace) -> Result<()> {
    let mut at = trace.start.clone();
    let report = check_feasible(net, &at, face);
    if !report.is_feasible() {
        return Err(Error::InfeasiblePoint(format!("start: {report}")));
    }
    for (index, step) in trace.steps.iter().enumerate() {
        if !crate::circuits::in_kernel(net, &step.circuit) {
            return Err(Error::Validation(format!(
                "step {index}: direction leaves the kernel"
            )));
        }
        if step.alpha <= crate::rat_zero() {
            return Err(Error::Validation(format!(
                "step {index}: step length {} is not positive",
                step.alpha
            )));
        }
        match max_step(net, &at, &step.circuit, face) {
            StepLength::Finite(limit) => {
                if step.alpha != limit {
                    return Err(Error::Validation(format!(
                        "step {index}: step length {} differs from the maximal {}",
                        step.alpha, limit
                    )));
                }
            }
            StepLength::Unbounded => {
                return Err(Error::Validation(format!(
                    "step {index}: recorded finite step along an unbounded direction"
                )));
            }
        }
        let expected = apply_step(&at, &step.circuit, &step.alpha);
        if expected != step.point_after {
            return Err(Error::Validation(format!(
                "step {index}: recorded point differs from start + α·g"
            )));
        }
        let report = check_feasible(net, &step.point_after, face);
        if !report.is_feasible() {
            return Err(Error::InfeasiblePoint(format!(
                "after step {index}: {report}"
            )));
        }
        at = step.point_after.clone();
    }
    Ok(())
}
