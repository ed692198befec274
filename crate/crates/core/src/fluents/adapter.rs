//! Question-answering backends. The live visual model is behind a trait;
//! the shipped implementation replays recorded answers, which keeps runs
//! deterministic and testable offline.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{Domain, FluentError, FluentVector, Question, Questionnaire};

/// A boolean answer with the backend's confidence in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QaAnswer {
    pub value: bool,
    pub confidence: f64,
}

/// A backend that answers one question about one image.
pub trait QaAdapter {
    fn answer(&self, image_ref: &str, question: &Question) -> Result<QaAnswer, FluentError>;
}

/// Replays recorded answers from a map `image_ref -> {question_id ->
/// bool}`. Deterministic by construction.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FixtureAdapter {
    answers: BTreeMap<String, BTreeMap<String, bool>>,
}

impl FixtureAdapter {
    pub fn new(answers: BTreeMap<String, BTreeMap<String, bool>>) -> Self {
        Self { answers }
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, FluentError> {
        serde_json::from_reader(reader).map_err(|e| FluentError::AdapterUnavailable {
            detail: format!("cannot parse fixture file: {e}"),
        })
    }
}

impl QaAdapter for FixtureAdapter {
    fn answer(&self, image_ref: &str, question: &Question) -> Result<QaAnswer, FluentError> {
        let per_image = self
            .answers
            .get(image_ref)
            .ok_or_else(|| FluentError::MissingFixture {
                image_ref: image_ref.to_string(),
            })?;
        let value = per_image
            .get(&question.id)
            .copied()
            .ok_or_else(|| FluentError::MissingAnswer {
                image_ref: image_ref.to_string(),
                question_id: question.id.clone(),
            })?;
        Ok(QaAnswer {
            value,
            confidence: 1.0,
        })
    }
}

/// Run the whole questionnaire against one checkpoint image, preserving
/// question order.
pub fn answer_checkpoint(
    adapter: &dyn QaAdapter,
    image_ref: &str,
    questionnaire: &Questionnaire,
    checkpoint: usize,
    domain: Domain,
) -> Result<FluentVector, FluentError> {
    let answers = questionnaire
        .questions()
        .iter()
        .map(|q| adapter.answer(image_ref, q).map(|a| a.value))
        .collect::<Result<Vec<bool>, FluentError>>()?;
    Ok(FluentVector {
        checkpoint,
        domain,
        answers,
    })
}
