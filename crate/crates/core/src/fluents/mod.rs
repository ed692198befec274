//! Checkpoint questionnaires and simulation-vs-reality fluent matching.
//!
//! At chosen checkpoints of an execution, the same true/false
//! questionnaire is answered for the real scene (through a [`QaAdapter`],
//! e.g. replayed recorded answers) and for the simulated scene (straight
//! from its fluent state). The agreement between the two answer streams
//! is scored as `exp(-hamming_distance)`, summed over every checkpoint
//! and question; the absolute-difference of booleans is their XOR.

mod adapter;
mod score;

pub use adapter::{answer_checkpoint, FixtureAdapter, QaAdapter, QaAnswer};
pub use score::{
    agreement_metrics, consistency_score, AgreementReport, CheckpointDistance, ConsistencyReport,
    MetricSet, QuestionAgreement,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One questionnaire prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub prompt: String,
}

/// An ordered, nonempty list of true/false prompts with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Question>", into = "Vec<Question>")]
pub struct Questionnaire {
    questions: Vec<Question>,
}

impl From<Questionnaire> for Vec<Question> {
    fn from(q: Questionnaire) -> Self {
        q.questions
    }
}

impl TryFrom<Vec<Question>> for Questionnaire {
    type Error = FluentError;

    fn try_from(questions: Vec<Question>) -> Result<Self, Self::Error> {
        Questionnaire::new(questions)
    }
}

impl Questionnaire {
    pub fn new(questions: Vec<Question>) -> Result<Self, FluentError> {
        if questions.is_empty() {
            return Err(FluentError::EmptyQuestionnaire);
        }
        let mut seen = std::collections::BTreeSet::new();
        for q in &questions {
            if !seen.insert(q.id.clone()) {
                return Err(FluentError::DuplicateQuestionId { id: q.id.clone() });
            }
        }
        Ok(Self { questions })
    }

    /// The default four-checkpoint questionnaire for the pour-water task.
    pub fn pour_water_default() -> Self {
        let qs = [
            ("ready_to_pick", "Is the robot ready to pick up the jar?"),
            ("jar_picked", "Has the robot already picked up the jar?"),
            ("jar_above_cup", "Is the jar above the cup?"),
            ("pouring", "Is the robot pouring water into the cup?"),
        ];
        Self {
            questions: qs
                .iter()
                .map(|(id, prompt)| Question {
                    id: (*id).to_string(),
                    prompt: (*prompt).to_string(),
                })
                .collect(),
        }
    }

    pub fn questions(&self) -> &[Question] {
        &self.questions
    }

    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }
}

/// Which world produced an answer vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Real,
    Sim,
}

/// The boolean answers to one questionnaire at one checkpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluentVector {
    pub checkpoint: usize,
    pub domain: Domain,
    pub answers: Vec<bool>,
}

impl FluentVector {
    /// Answer a questionnaire directly from a simulated fluent state:
    /// each question id is looked up as a fluent (absent reads false).
    /// This is how a planner trace feeds the matcher on the sim side.
    pub fn from_fluent_state(
        questionnaire: &Questionnaire,
        fluents: &std::collections::BTreeMap<String, bool>,
        checkpoint: usize,
        domain: Domain,
    ) -> Self {
        Self {
            checkpoint,
            domain,
            answers: questionnaire
                .questions()
                .iter()
                .map(|q| fluents.get(&q.id).copied().unwrap_or(false))
                .collect(),
        }
    }
}

/// Errors from questionnaire answering and scoring.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FluentError {
    #[error("questionnaire must contain at least one question")]
    EmptyQuestionnaire,
    #[error("duplicate question id '{id}'")]
    DuplicateQuestionId { id: String },
    #[error("answer backend unavailable: {detail}")]
    AdapterUnavailable { detail: String },
    #[error("no recorded fixture for image '{image_ref}'")]
    MissingFixture { image_ref: String },
    #[error("fixture for image '{image_ref}' lacks an answer to question '{question_id}'")]
    MissingAnswer {
        image_ref: String,
        question_id: String,
    },
    #[error("shape mismatch: {detail}")]
    ShapeMismatch { detail: String },
}
