//! JSON encodings of traces, circuits, reports, and objectives.
//!
//! Rationals are encoded as decimal strings `"p"` or `"p/q"` so values stay
//! exact; sparse maps key coordinates by their decimal id. Output is
//! deterministic: maps are ordered, and the same inputs always produce the
//! same bytes.

use crate::circuits::Circuit;
use crate::geometry::PseudoflowPoint;
use crate::network::{ArcId, Network, NodeId};
use crate::pivot::{Objective, Sense};
use crate::trace::{TraceEvent, TraceStatus, WalkStep, WalkTrace};
use crate::verify::{ReplicationReport, WalkClassification};
use crate::{parse_rational, Error, Rational, Result};
use num_traits::Zero;
use serde_json::{json, Map, Value};

fn rational_value(value: &Rational) -> Value {
    Value::String(crate::format_rational(value))
}

fn sparse_rationals<'a>(entries: impl Iterator<Item = (u32, Rational)> + 'a) -> Value {
    let mut map = Map::new();
    for (id, value) in entries {
        if !value.is_zero() {
            map.insert(id.to_string(), rational_value(&value));
        }
    }
    Value::Object(map)
}

fn sparse_signs<'a, K: Copy + Into<u32> + 'a>(
    entries: impl Iterator<Item = (&'a K, &'a i8)>,
) -> Value {
    let mut map = Map::new();
    for (id, sign) in entries {
        map.insert((*id).into().to_string(), json!(*sign));
    }
    Value::Object(map)
}

impl From<ArcId> for u32 {
    fn from(value: ArcId) -> u32 {
        value.0
    }
}

impl From<NodeId> for u32 {
    fn from(value: NodeId) -> u32 {
        value.0
    }
}

pub fn point_to_json(net: &Network, point: &PseudoflowPoint) -> Value {
    json!({
        "x": sparse_rationals(net.arcs().iter().map(|a| (a.id.0, point.x(a.id)))),
        "s_plus": sparse_rationals(net.nodes().map(|i| (i.0, point.s_plus(i)))),
        "s_minus": sparse_rationals(net.nodes().map(|i| (i.0, point.s_minus(i)))),
    })
}

pub fn circuit_to_json(circuit: &Circuit) -> Value {
    json!({
        "x": sparse_signs(circuit.x.iter()),
        "s_plus": sparse_signs(circuit.s_plus.iter()),
        "s_minus": sparse_signs(circuit.s_minus.iter()),
    })
}

fn step_to_json(net: &Network, step: &WalkStep) -> Value {
    json!({
        "kind": step.circuit.kind.tag(),
        "circuit": circuit_to_json(&step.circuit),
        "alpha": rational_value(&step.alpha),
        "point_after": point_to_json(net, &step.point_after),
        "objective_after": rational_value(&step.objective_after),
    })
}

fn event_to_json(event: &TraceEvent) -> Value {
    match event {
        TraceEvent::Relabel {
            node,
            old_label,
            new_label,
            after_step,
        } => json!({
            "type": "relabel",
            "node": node.0,
            "old_label": old_label,
            "new_label": new_label,
            "after_step": after_step,
        }),
        TraceEvent::CostAdjust { amount, after_step } => json!({
            "type": "cost-adjust",
            "amount": rational_value(amount),
            "after_step": after_step,
        }),
        TraceEvent::UnboundedDirection { circuit } => json!({
            "type": "unbounded-direction",
            "circuit": circuit_to_json(circuit),
        }),
    }
}

pub fn trace_to_json(net: &Network, trace: &WalkTrace) -> Value {
    json!({
        "start": point_to_json(net, &trace.start),
        "steps": trace.steps.iter().map(|s| step_to_json(net, s)).collect::<Vec<_>>(),
        "events": trace.events.iter().map(event_to_json).collect::<Vec<_>>(),
        "status": trace.status.name(),
    })
}

pub fn classification_to_json(c: &WalkClassification) -> Value {
    json!({
        "class": c.class.name(),
        "steps": c.step_labels.iter().map(|l| l.name()).collect::<Vec<_>>(),
    })
}

pub fn report_to_json(report: &ReplicationReport) -> Value {
    json!({
        "algorithm": report.algorithm.name(),
        "mode": report.mode.name(),
        "equal": report.equal,
        "divergence": match &report.divergence {
            None => Value::Null,
            Some(d) => json!({
                "step": d.step,
                "combinatorial": d.combinatorial.as_ref().map(circuit_to_json).unwrap_or(Value::Null),
                "engine": d.engine.as_ref().map(circuit_to_json).unwrap_or(Value::Null),
            }),
        },
        "walk_class_combinatorial": report.walk_class_combinatorial.name(),
        "walk_class_engine": report.walk_class_engine.name(),
        "steps": report.steps,
    })
}

pub fn circuits_to_json(circuits: &[Circuit]) -> Value {
    let mut counts = std::collections::BTreeMap::new();
    for c in circuits {
        *counts.entry(c.kind.tag()).or_insert(0u64) += 1;
    }
    json!({
        "counts": counts,
        "circuits": circuits
            .iter()
            .map(|c| {
                let mut v = circuit_to_json(c);
                v.as_object_mut()
                    .unwrap()
                    .insert("kind".to_string(), json!(c.kind.tag()));
                v
            })
            .collect::<Vec<_>>(),
    })
}

fn bad(message: impl Into<String>) -> Error {
    Error::BadArgument(message.into())
}

fn rational_from(value: &Value, what: &str) -> Result<Rational> {
    let text = value
        .as_str()
        .ok_or_else(|| bad(format!("{what}: expected a rational string")))?;
    parse_rational(text).map_err(|e| bad(format!("{what}: {e}")))
}

fn id_from(key: &str, what: &str) -> Result<u32> {
    key.parse()
        .map_err(|_| bad(format!("{what}: bad id {key:?}")))
}

/// Parses an objective file: sparse cost maps plus a sense. Missing
/// coordinates cost zero.
pub fn objective_from_json(net: &Network, value: &Value) -> Result<Objective> {
    let object = value
        .as_object()
        .ok_or_else(|| bad("objective: expected an object"))?;
    let sense = match object.get("sense").and_then(|s| s.as_str()) {
        Some("minimize") => Sense::Minimize,
        Some("maximize") => Sense::Maximize,
        other => return Err(bad(format!("objective: bad sense {other:?}"))),
    };
    let mut objective = Objective::new(net, sense);
    if let Some(map) = object.get("x").and_then(|v| v.as_object()) {
        for (key, value) in map {
            let id = id_from(key, "objective x")? as usize;
            if id == 0 || id > net.arc_count() {
                return Err(bad(format!("objective: unknown arc {id}")));
            }
            objective.x[id - 1] = rational_from(value, "objective x")?;
        }
    }
    for (field, slot) in [("s_plus", 0usize), ("s_minus", 1)] {
        if let Some(map) = object.get(field).and_then(|v| v.as_object()) {
            for (key, value) in map {
                let id = id_from(key, field)? as usize;
                if id == 0 || id > net.node_count() {
                    return Err(bad(format!("objective: unknown node {id}")));
                }
                let parsed = rational_from(value, field)?;
                if slot == 0 {
                    objective.s_plus[id - 1] = parsed;
                } else {
                    objective.s_minus[id - 1] = parsed;
                }
            }
        }
    }
    Ok(objective)
}

fn point_from_json(net: &Network, value: &Value, what: &str) -> Result<PseudoflowPoint> {
    let object = value
        .as_object()
        .ok_or_else(|| bad(format!("{what}: expected an object")))?;
    let mut point = PseudoflowPoint::zeros(net);
    for (field, max) in [
        ("x", net.arc_count()),
        ("s_plus", net.node_count()),
        ("s_minus", net.node_count()),
    ] {
        let Some(map) = object.get(field).and_then(|v| v.as_object()) else {
            continue;
        };
        for (key, cell) in map {
            let id = id_from(key, what)? as usize;
            if id == 0 || id > max {
                return Err(bad(format!("{what}: id {id} out of range for {field}")));
            }
            let parsed = rational_from(cell, what)?;
            match field {
                "x" => point.set_x(ArcId(id as u32), parsed),
                "s_plus" => point.set_s_plus(NodeId(id as u32), parsed),
                _ => point.set_s_minus(NodeId(id as u32), parsed),
            }
        }
    }
    Ok(point)
}

fn circuit_from_json(net: &Network, value: &Value, what: &str) -> Result<Circuit> {
    let object = value
        .as_object()
        .ok_or_else(|| bad(format!("{what}: expected an object")))?;
    let mut x = std::collections::BTreeMap::new();
    let mut s_plus = std::collections::BTreeMap::new();
    let mut s_minus = std::collections::BTreeMap::new();
    for field in ["x", "s_plus", "s_minus"] {
        let Some(map) = object.get(field).and_then(|v| v.as_object()) else {
            continue;
        };
        for (key, cell) in map {
            let id = id_from(key, what)?;
            let sign = cell
                .as_i64()
                .filter(|s| *s == 1 || *s == -1)
                .ok_or_else(|| bad(format!("{what}: circuit entries must be ±1")))?
                as i8;
            match field {
                "x" => {
                    x.insert(ArcId(id), sign);
                }
                "s_plus" => {
                    s_plus.insert(NodeId(id), sign);
                }
                _ => {
                    s_minus.insert(NodeId(id), sign);
                }
            }
        }
    }
    let kind = crate::circuits::classify(net, &x, &s_plus, &s_minus)?;
    Ok(Circuit {
        x,
        s_plus,
        s_minus,
        kind,
    })
}

/// Parses a trace produced by [`trace_to_json`] back against its network.
pub fn trace_from_json(net: &Network, value: &Value) -> Result<WalkTrace> {
    let object = value
        .as_object()
        .ok_or_else(|| bad("trace: expected an object"))?;
    let start = point_from_json(
        net,
        object
            .get("start")
            .ok_or_else(|| bad("trace: missing start"))?,
        "trace start",
    )?;
    let status = match object.get("status").and_then(|s| s.as_str()) {
        Some("optimal") => TraceStatus::Optimal,
        Some("stalled") => TraceStatus::Stalled,
        Some("unbounded") => TraceStatus::Unbounded,
        other => return Err(bad(format!("trace: bad status {other:?}"))),
    };
    let mut trace = WalkTrace::new(start);
    trace.status = status;
    let steps = object
        .get("steps")
        .and_then(|s| s.as_array())
        .ok_or_else(|| bad("trace: missing steps"))?;
    for (i, step) in steps.iter().enumerate() {
        let what = format!("trace step {i}");
        let object = step
            .as_object()
            .ok_or_else(|| bad(format!("{what}: expected an object")))?;
        let circuit = circuit_from_json(
            net,
            object
                .get("circuit")
                .ok_or_else(|| bad(format!("{what}: missing circuit")))?,
            &what,
        )?;
        let alpha = rational_from(
            object
                .get("alpha")
                .ok_or_else(|| bad(format!("{what}: missing alpha")))?,
            &what,
        )?;
        let point_after = point_from_json(
            net,
            object
                .get("point_after")
                .ok_or_else(|| bad(format!("{what}: missing point_after")))?,
            &what,
        )?;
        let objective_after = rational_from(
            object
                .get("objective_after")
                .ok_or_else(|| bad(format!("{what}: missing objective_after")))?,
            &what,
        )?;
        trace.steps.push(WalkStep {
            circuit,
            alpha,
            point_after,
            objective_after,
        });
    }
    Ok(trace)
}

/// Renders a JSON value with a trailing newline; fixed formatting keeps
/// outputs byte-identical across runs.
pub fn to_output_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}
