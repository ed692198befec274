//! Top-down expansion of a validated graph into an ordered action
//! sequence, and replay of a sequence against a world state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::validate::validate_graph;
use super::{AogGraph, AogNodeKind, AtomicAction, PlanError, WorldState};
use crate::twin::TwinScene;

/// Expand the graph depth first from the root.
///
/// And children are emitted in a deterministic linear extension of their
/// partial order (lowest-position-first topological order); Or children
/// are tried in declaration order and the first feasible subtree wins,
/// with full backtracking of the simulated fluent state. Each emitted
/// action's preconditions must hold in the simulated state at its
/// position; effects are applied as the expansion proceeds.
pub fn plan(graph: &AogGraph, initial: &WorldState) -> Result<Vec<AtomicAction>, PlanError> {
    let violations = validate_graph(graph);
    if !violations.is_empty() {
        return Err(PlanError::GraphInvalid { violations });
    }
    let mut fluents = initial.fluents.clone();
    let mut actions = Vec::new();
    expand(graph, graph.root, initial.scene.as_ref(), &mut fluents, &mut actions)?;
    Ok(actions)
}

fn expand(
    graph: &AogGraph,
    idx: usize,
    scene: Option<&TwinScene>,
    fluents: &mut BTreeMap<String, bool>,
    actions: &mut Vec<AtomicAction>,
) -> Result<(), PlanError> {
    let node = &graph.nodes[idx];
    match node.kind {
        AogNodeKind::Terminal => {
            let action = node.action.as_ref().expect("validated terminal");
            check_preconditions(action, fluents, scene, None)?;
            for (id, value) in &action.effects {
                fluents.insert(id.clone(), *value);
            }
            actions.push(action.clone());
            Ok(())
        }
        AogNodeKind::And => {
            for &pos in &linear_extension(node.children.len(), &node.ordering) {
                expand(graph, node.children[pos], scene, fluents, actions)?;
            }
            Ok(())
        }
        AogNodeKind::Or => {
            let mut causes = Vec::new();
            for &child in &node.children {
                let mut trial_fluents = fluents.clone();
                let mut trial_actions = Vec::new();
                match expand(graph, child, scene, &mut trial_fluents, &mut trial_actions) {
                    Ok(()) => {
                        *fluents = trial_fluents;
                        actions.extend(trial_actions);
                        return Ok(());
                    }
                    Err(e) => causes.push(e),
                }
            }
            Err(PlanError::NoFeasibleOrBranch { node: idx, causes })
        }
    }
}

/// Deterministic linear extension of the partial order: repeatedly emit
/// the lowest ready child position.
fn linear_extension(n_children: usize, ordering: &[(usize, usize)]) -> Vec<usize> {
    let mut indegree = vec![0usize; n_children];
    for &(_, b) in ordering {
        indegree[b] += 1;
    }
    let mut emitted = Vec::with_capacity(n_children);
    let mut done = vec![false; n_children];
    while emitted.len() < n_children {
        let next = (0..n_children)
            .find(|&i| !done[i] && indegree[i] == 0)
            .expect("ordering validated acyclic");
        done[next] = true;
        emitted.push(next);
        for &(a, b) in ordering {
            if a == next {
                indegree[b] -= 1;
            }
        }
    }
    emitted
}

fn check_preconditions(
    action: &AtomicAction,
    fluents: &BTreeMap<String, bool>,
    scene: Option<&TwinScene>,
    step: Option<usize>,
) -> Result<(), PlanError> {
    let missing_fluents: Vec<String> = action
        .preconditions
        .iter()
        .filter(|(id, required)| fluents.get(*id).copied().unwrap_or(false) != **required)
        .map(|(id, _)| id.clone())
        .collect();
    let missing_objects: Vec<String> = action
        .spatial_refs
        .iter()
        .filter(|label| scene.map_or(true, |s| s.object(label).is_none()))
        .cloned()
        .collect();
    if missing_fluents.is_empty() && missing_objects.is_empty() {
        Ok(())
    } else {
        Err(PlanError::PreconditionUnsatisfiable {
            action: action.id.clone(),
            missing_fluents,
            missing_objects,
            step,
        })
    }
}

/// The fluent state around one replayed action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub action: String,
    pub before: BTreeMap<String, bool>,
    pub after: BTreeMap<String, bool>,
}

/// Replay an action sequence against a world state, recording the fluent
/// vector around every step. Fails fast at the first precondition
/// violation, reporting the step index.
pub fn simulate_effects(
    plan: &[AtomicAction],
    initial: &WorldState,
) -> Result<(WorldState, Vec<TraceStep>), PlanError> {
    let mut fluents = initial.fluents.clone();
    let mut trace = Vec::with_capacity(plan.len());
    for (step, action) in plan.iter().enumerate() {
        check_preconditions(action, &fluents, initial.scene.as_ref(), Some(step))?;
        let before = fluents.clone();
        for (id, value) in &action.effects {
            fluents.insert(id.clone(), *value);
        }
        trace.push(TraceStep {
            step,
            action: action.id.clone(),
            before,
            after: fluents.clone(),
        });
    }
    Ok((
        WorldState {
            fluents,
            scene: initial.scene.clone(),
        },
        trace,
    ))
}
