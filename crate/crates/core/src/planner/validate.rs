//! Structural validation of task graphs.

use super::{AogGraph, AogNodeKind, Violation, ViolationKind};

/// Check every structural invariant of the graph and return the breaches
/// found (empty means valid). Violations are data, not faults: a planner
/// front end can report all of them at once.
pub fn validate_graph(graph: &AogGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = graph.nodes.len();

    if graph.root >= n {
        out.push(Violation {
            node: None,
            kind: ViolationKind::RootOutOfRange,
            message: format!("root index {} out of range ({n} nodes)", graph.root),
        });
        return out;
    }
    if graph.nodes[graph.root].kind != AogNodeKind::And {
        out.push(Violation {
            node: Some(graph.root),
            kind: ViolationKind::RootNotAnd,
            message: "the root node must be an And node".to_string(),
        });
    }

    for (idx, node) in graph.nodes.iter().enumerate() {
        for &child in &node.children {
            if child >= n {
                out.push(Violation {
                    node: Some(idx),
                    kind: ViolationKind::ChildOutOfRange,
                    message: format!("child index {child} out of range"),
                });
            }
        }
        match node.kind {
            AogNodeKind::Terminal => {
                if !node.children.is_empty() || node.action.is_none() {
                    out.push(Violation {
                        node: Some(idx),
                        kind: ViolationKind::NodeShape,
                        message: "a terminal node carries an action and no children".to_string(),
                    });
                }
            }
            AogNodeKind::And | AogNodeKind::Or => {
                if node.children.is_empty() || node.action.is_some() {
                    out.push(Violation {
                        node: Some(idx),
                        kind: ViolationKind::NodeShape,
                        message: "a non-terminal node carries children and no action".to_string(),
                    });
                }
                if node.kind == AogNodeKind::Or && node.children.len() < 2 {
                    out.push(Violation {
                        node: Some(idx),
                        kind: ViolationKind::OrTooFewChildren,
                        message: format!(
                            "an Or node offers a choice: {} child(ren) is not one",
                            node.children.len()
                        ),
                    });
                }
            }
        }
        if node.kind == AogNodeKind::And {
            validate_ordering(idx, node.children.len(), &node.ordering, &mut out);
        } else if !node.ordering.is_empty() {
            out.push(Violation {
                node: Some(idx),
                kind: ViolationKind::OrderingOnNonAnd,
                message: "ordering constraints only apply to And nodes".to_string(),
            });
        }
    }

    check_reachability(graph, &mut out);
    out
}

fn validate_ordering(
    idx: usize,
    n_children: usize,
    ordering: &[(usize, usize)],
    out: &mut Vec<Violation>,
) {
    let mut bad = false;
    for &(a, b) in ordering {
        if a >= n_children || b >= n_children || a == b {
            out.push(Violation {
                node: Some(idx),
                kind: ViolationKind::OrderingOutOfRange,
                message: format!("ordering pair ({a}, {b}) invalid for {n_children} children"),
            });
            bad = true;
        }
    }
    if bad || n_children == 0 {
        return;
    }
    // The precedence relation must admit a linear extension.
    let mut indegree = vec![0usize; n_children];
    for &(_, b) in ordering {
        indegree[b] += 1;
    }
    let mut ready: Vec<usize> = (0..n_children).filter(|&i| indegree[i] == 0).collect();
    let mut emitted = 0;
    while let Some(i) = ready.pop() {
        emitted += 1;
        for &(a, b) in ordering {
            if a == i {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    if emitted < n_children {
        out.push(Violation {
            node: Some(idx),
            kind: ViolationKind::OrderingCyclic,
            message: "ordering constraints contain a cycle".to_string(),
        });
    }
}

fn check_reachability(graph: &AogGraph, out: &mut Vec<Violation>) {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let n = graph.nodes.len();
    let mut mark = vec![Mark::White; n];

    // Iterative DFS with an explicit enter/exit stack.
    enum Step {
        Enter(usize),
        Exit(usize),
    }
    let mut stack = vec![Step::Enter(graph.root)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(idx) => {
                match mark[idx] {
                    Mark::Grey => {
                        out.push(Violation {
                            node: Some(idx),
                            kind: ViolationKind::Cycle,
                            message: "node participates in a cycle".to_string(),
                        });
                        continue;
                    }
                    Mark::Black => {
                        out.push(Violation {
                            node: Some(idx),
                            kind: ViolationKind::SharedChild,
                            message: "node is reached through more than one parent".to_string(),
                        });
                        continue;
                    }
                    Mark::White => {}
                }
                mark[idx] = Mark::Grey;
                stack.push(Step::Exit(idx));
                for &child in graph.nodes[idx].children.iter().rev() {
                    if child < n {
                        stack.push(Step::Enter(child));
                    }
                }
            }
            Step::Exit(idx) => mark[idx] = Mark::Black,
        }
    }

    for (idx, m) in mark.iter().enumerate() {
        if *m == Mark::White {
            out.push(Violation {
                node: Some(idx),
                kind: ViolationKind::Unreachable,
                message: "node is not reachable from the root".to_string(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{AogNode, AtomicAction};
    use super::*;
    use std::collections::BTreeMap;

    fn terminal(id: &str) -> AogNode {
        AogNode {
            kind: AogNodeKind::Terminal,
            name: None,
            children: vec![],
            ordering: vec![],
            action: Some(AtomicAction {
                id: id.to_string(),
                preconditions: BTreeMap::new(),
                effects: BTreeMap::new(),
                spatial_refs: vec![],
            }),
        }
    }

    fn and(children: Vec<usize>, ordering: Vec<(usize, usize)>) -> AogNode {
        AogNode {
            kind: AogNodeKind::And,
            name: None,
            children,
            ordering,
            action: None,
        }
    }

    #[test]
    fn minimal_valid_graph() {
        let g = AogGraph {
            root: 0,
            nodes: vec![and(vec![1], vec![]), terminal("a")],
        };
        assert!(validate_graph(&g).is_empty());
    }

    #[test]
    fn or_root_is_a_violation() {
        let g = AogGraph {
            root: 0,
            nodes: vec![
                AogNode {
                    kind: AogNodeKind::Or,
                    name: None,
                    children: vec![1, 2],
                    ordering: vec![],
                    action: None,
                },
                terminal("a"),
                terminal("b"),
            ],
        };
        let violations = validate_graph(&g);
        assert!(violations.iter().any(|v| v.kind == ViolationKind::RootNotAnd));
    }

    #[test]
    fn shared_child_detected() {
        let g = AogGraph {
            root: 0,
            nodes: vec![and(vec![1, 2], vec![]), and(vec![3], vec![]), and(vec![3], vec![]), terminal("x")],
        };
        let violations = validate_graph(&g);
        assert!(violations.iter().any(|v| v.kind == ViolationKind::SharedChild));
    }

    #[test]
    fn cycle_detected() {
        let g = AogGraph {
            root: 0,
            nodes: vec![and(vec![1], vec![]), and(vec![0], vec![])],
        };
        let violations = validate_graph(&g);
        assert!(violations.iter().any(|v| v.kind == ViolationKind::Cycle));
    }

    #[test]
    fn ordering_cycle_detected() {
        let g = AogGraph {
            root: 0,
            nodes: vec![
                and(vec![1, 2], vec![(0, 1), (1, 0)]),
                terminal("a"),
                terminal("b"),
            ],
        };
        let violations = validate_graph(&g);
        assert!(violations
            .iter()
            .any(|v| v.kind == ViolationKind::OrderingCyclic));
    }

    #[test]
    fn terminal_with_children_is_malformed() {
        let mut t = terminal("a");
        t.children = vec![2];
        let g = AogGraph {
            root: 0,
            nodes: vec![and(vec![1], vec![]), t, terminal("b")],
        };
        let violations = validate_graph(&g);
        assert!(violations.iter().any(|v| v.kind == ViolationKind::NodeShape));
    }

    #[test]
    fn single_child_or_flagged() {
        let g = AogGraph {
            root: 0,
            nodes: vec![
                and(vec![1], vec![]),
                AogNode {
                    kind: AogNodeKind::Or,
                    name: None,
                    children: vec![2],
                    ordering: vec![],
                    action: None,
                },
                terminal("a"),
            ],
        };
        let violations = validate_graph(&g);
        assert!(violations
            .iter()
            .any(|v| v.kind == ViolationKind::OrTooFewChildren));
    }
}
