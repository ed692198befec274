//! Task graphs: And-Or graphs over atomic actions with temporal ordering
//! constraints, causal pre/post-conditions on fluents, and spatial
//! references into a twin scene.
//!
//! Graphs are data: nodes live in a flat arena ([`AogGraph::nodes`]) and
//! children are indices, so an input file can express structural
//! mistakes (shared children, cycles, bad kinds). [`validate_graph`]
//! reports them as data rather than faults; [`plan`] refuses to expand a
//! graph that does not validate.

mod expand;
mod validate;

pub use expand::{plan, simulate_effects, TraceStep};
pub use validate::validate_graph;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::twin::TwinScene;

/// A named boolean world property at a point in time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fluent {
    pub id: String,
    pub value: bool,
}

/// An indivisible action: required fluent values, fluent assignments it
/// causes, and the labels of scene objects whose poses it needs.
///
/// Preconditions and effects are maps keyed by fluent id, so a fluent
/// cannot carry contradictory assignments by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicAction {
    pub id: String,
    #[serde(default)]
    pub preconditions: BTreeMap<String, bool>,
    #[serde(default)]
    pub effects: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spatial_refs: Vec<String>,
}

/// Node kind in the And-Or graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AogNodeKind {
    And,
    Or,
    Terminal,
}

/// One node of the graph. `children` are indices into the graph's node
/// arena; `ordering` is a partial order over child *positions* (pairs
/// `[i, j]` meaning child `i` completes before child `j` starts) and is
/// only meaningful on And nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AogNode {
    pub kind: AogNodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ordering: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<AtomicAction>,
}

/// A task graph: a node arena plus the root index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AogGraph {
    pub root: usize,
    pub nodes: Vec<AogNode>,
}

/// The simulated world the planner reasons over: fluent values plus an
/// optional twin scene for resolving spatial references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    #[serde(default)]
    pub fluents: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scene: Option<TwinScene>,
}

impl WorldState {
    pub fn from_fluents<I: IntoIterator<Item = (String, bool)>>(fluents: I) -> Self {
        Self {
            fluents: fluents.into_iter().collect(),
            scene: None,
        }
    }

    /// Value of a fluent; absent fluents read as false.
    pub fn fluent(&self, id: &str) -> bool {
        self.fluents.get(id).copied().unwrap_or(false)
    }
}

/// A structural rule breached by the graph, attached to the offending
/// node where one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub node: Option<usize>,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    RootOutOfRange,
    RootNotAnd,
    ChildOutOfRange,
    /// A node is reached through more than one parent edge.
    SharedChild,
    Cycle,
    Unreachable,
    OrTooFewChildren,
    /// Terminal nodes carry an action and no children; other kinds carry
    /// children and no action.
    NodeShape,
    OrderingOutOfRange,
    OrderingCyclic,
    OrderingOnNonAnd,
}

/// Planning failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("graph failed validation with {} violation(s)", violations.len())]
    GraphInvalid { violations: Vec<Violation> },
    #[error(
        "action '{action}' has unsatisfied preconditions (missing fluents: {missing_fluents:?}, missing objects: {missing_objects:?})"
    )]
    PreconditionUnsatisfiable {
        action: String,
        missing_fluents: Vec<String>,
        missing_objects: Vec<String>,
        /// Set when the failure occurred while replaying a plan.
        step: Option<usize>,
    },
    #[error("every branch of Or node {node} failed")]
    NoFeasibleOrBranch { node: usize, causes: Vec<PlanError> },
}
