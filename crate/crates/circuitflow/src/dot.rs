//! Graphviz DOT export of the original network, the pseudoflow network with
//! its dummy node and dashed slack arcs, and residual networks.

use crate::geometry::PseudoflowPoint;
use crate::network::{build_residual, Direction, Network, NetworkKind};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotView {
    Original,
    Pseudoflow,
    Residual,
}

impl DotView {
    pub fn from_name(name: &str) -> Option<DotView> {
        match name {
            "original" => Some(DotView::Original),
            "pseudoflow" => Some(DotView::Pseudoflow),
            "residual" => Some(DotView::Residual),
            _ => None,
        }
    }
}

fn node_decls(net: &Network, out: &mut String) {
    let special: Vec<(u32, &str)> = match net.kind() {
        NetworkKind::MaxFlow { source, sink } => {
            vec![(source.0, "source"), (sink.0, "sink")]
        }
        _ => Vec::new(),
    };
    for node in net.nodes() {
        let annotation = special
            .iter()
            .find(|(id, _)| *id == node.0)
            .map(|(_, role)| format!(" [xlabel=\"{role}\"]"))
            .unwrap_or_default();
        out.push_str(&format!("  n{}{};\n", node.0, annotation));
    }
}

/// Renders one view of the network. The residual view is taken at `point`
/// (zero flow when absent).
pub fn export_dot(net: &Network, view: DotView, point: Option<&PseudoflowPoint>) -> Result<String> {
    let mut out = String::from("digraph network {\n");
    match view {
        DotView::Original => {
            node_decls(net, &mut out);
            for arc in net.arcs() {
                out.push_str(&format!(
                    "  n{} -> n{} [label=\"({}, {})\"];\n",
                    arc.tail.0, arc.head.0, arc.capacity, arc.cost
                ));
            }
        }
        DotView::Pseudoflow => {
            out.push_str("  dummy [shape=doublecircle];\n");
            node_decls(net, &mut out);
            for arc in net.arcs() {
                out.push_str(&format!(
                    "  n{} -> n{} [label=\"({}, {})\"];\n",
                    arc.tail.0, arc.head.0, arc.capacity, arc.cost
                ));
            }
            for node in net.nodes() {
                out.push_str(&format!(
                    "  dummy -> n{} [style=dashed, label=\"s+{}\"];\n",
                    node.0, node.0
                ));
                out.push_str(&format!(
                    "  n{} -> dummy [style=dashed, label=\"s-{}\"];\n",
                    node.0, node.0
                ));
            }
        }
        DotView::Residual => {
            let zero = PseudoflowPoint::zeros(net);
            let point = point.unwrap_or(&zero);
            let residual = build_residual(net, point)?;
            node_decls(net, &mut out);
            for arc in residual.arcs() {
                let style = match arc.direction {
                    Direction::Forward => "solid",
                    Direction::Backward => "dotted",
                };
                out.push_str(&format!(
                    "  n{} -> n{} [style={}, label=\"({}, {})\"];\n",
                    arc.from.0, arc.to.0, style, arc.residual, arc.cost
                ));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{parse_network, InputFormat};

    #[test]
    fn pseudoflow_view_has_dummy_and_dashed_slack_arcs() {
        let net = parse_network(
            include_str!("../../../fixtures/diamond.min"),
            InputFormat::DimacsMin,
        )
        .unwrap();
        let dot = export_dot(&net, DotView::Pseudoflow, None).unwrap();
        assert!(dot.contains("dummy"));
        assert_eq!(dot.matches("style=dashed").count(), 8);
        assert_eq!(dot.matches(" -> ").count(), 5 + 8);
    }

    #[test]
    fn residual_view_defaults_to_zero_flow() {
        let net = parse_network(
            include_str!("../../../fixtures/diamond.min"),
            InputFormat::DimacsMin,
        )
        .unwrap();
        let dot = export_dot(&net, DotView::Residual, None).unwrap();
        assert_eq!(dot.matches("style=solid").count(), 5);
        assert_eq!(dot.matches("style=dotted").count(), 0);
    }
}
