//! Fluent-matching scores: the exponential hamming-distance consistency
//! score between simulated and real answer streams, and standard binary
//! agreement metrics against ground truth.

use serde::{Deserialize, Serialize};

use super::{Domain, FluentError, FluentVector};

/// Hamming distance contributed by one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointDistance {
    pub checkpoint: usize,
    pub distance: usize,
}

/// Per-question agreement across checkpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionAgreement {
    pub question: usize,
    pub agreements: usize,
    pub checkpoints: usize,
}

/// The simulation-vs-reality match: per-checkpoint distances, the total,
/// and the score `exp(-total)` in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub per_checkpoint: Vec<CheckpointDistance>,
    pub total_distance: usize,
    pub score: f64,
    pub per_question: Vec<QuestionAgreement>,
}

/// Score agreement between real and simulated answer streams.
///
/// The streams must pair up: same length, matching checkpoint indices,
/// and equal answer counts per checkpoint. The distance sums boolean
/// mismatches (XOR) over every checkpoint and question.
pub fn consistency_score(
    real: &[FluentVector],
    sim: &[FluentVector],
) -> Result<ConsistencyReport, FluentError> {
    if real.len() != sim.len() {
        return Err(FluentError::ShapeMismatch {
            detail: format!("{} real checkpoints vs {} simulated", real.len(), sim.len()),
        });
    }
    let n_questions = real.first().map_or(0, |v| v.answers.len());
    let mut per_checkpoint = Vec::with_capacity(real.len());
    let mut per_question = vec![(0usize, 0usize); n_questions];
    let mut total = 0usize;
    for (r, s) in real.iter().zip(sim.iter()) {
        if r.checkpoint != s.checkpoint {
            return Err(FluentError::ShapeMismatch {
                detail: format!("checkpoint {} paired with {}", r.checkpoint, s.checkpoint),
            });
        }
        if r.answers.len() != s.answers.len() || r.answers.len() != n_questions {
            return Err(FluentError::ShapeMismatch {
                detail: format!(
                    "checkpoint {}: {} answers vs {} (expected {n_questions})",
                    r.checkpoint,
                    r.answers.len(),
                    s.answers.len()
                ),
            });
        }
        let mut distance = 0usize;
        for (q, (a, b)) in r.answers.iter().zip(s.answers.iter()).enumerate() {
            if a != b {
                distance += 1;
            } else {
                per_question[q].0 += 1;
            }
            per_question[q].1 += 1;
        }
        total += distance;
        per_checkpoint.push(CheckpointDistance {
            checkpoint: r.checkpoint,
            distance,
        });
    }
    Ok(ConsistencyReport {
        per_checkpoint,
        total_distance: total,
        score: (-(total as f64)).exp(),
        per_question: per_question
            .into_iter()
            .enumerate()
            .map(|(question, (agreements, checkpoints))| QuestionAgreement {
                question,
                agreements,
                checkpoints,
            })
            .collect(),
    })
}

/// Precision, recall and F1 treating `true` as the positive class.
/// A metric whose denominator is zero is reported as absent, not zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSet {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
}

impl MetricSet {
    fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                None
            } else {
                Some(num as f64 / den as f64)
            }
        };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => None,
            _ => None,
        };
        Self {
            precision,
            recall,
            f1,
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            true_negatives: tn,
        }
    }
}

/// Prediction quality per domain and overall, plus the sim/real
/// consistency fraction of the predictions themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub real: MetricSet,
    pub sim: MetricSet,
    pub overall: MetricSet,
    /// Fraction of (checkpoint, question) cells where the predicted sim
    /// answer equals the predicted real answer; absent when the
    /// predictions do not cover both domains.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<f64>,
}

/// Compare predicted answer vectors against ground truth, pairing the
/// two lists positionally (each prediction with the truth for the same
/// checkpoint and domain).
pub fn agreement_metrics(
    predictions: &[FluentVector],
    truths: &[FluentVector],
) -> Result<AgreementReport, FluentError> {
    if predictions.len() != truths.len() {
        return Err(FluentError::ShapeMismatch {
            detail: format!(
                "{} predictions vs {} ground-truth vectors",
                predictions.len(),
                truths.len()
            ),
        });
    }
    let mut real = [0usize; 4];
    let mut sim = [0usize; 4];

    for (p, t) in predictions.iter().zip(truths.iter()) {
        if p.checkpoint != t.checkpoint || p.domain != t.domain {
            return Err(FluentError::ShapeMismatch {
                detail: format!(
                    "prediction (checkpoint {}, {:?}) paired with truth (checkpoint {}, {:?})",
                    p.checkpoint, p.domain, t.checkpoint, t.domain
                ),
            });
        }
        if p.answers.len() != t.answers.len() {
            return Err(FluentError::ShapeMismatch {
                detail: format!(
                    "checkpoint {}: {} predicted answers vs {} truths",
                    p.checkpoint,
                    p.answers.len(),
                    t.answers.len()
                ),
            });
        }
        let slot = match p.domain {
            Domain::Real => &mut real,
            Domain::Sim => &mut sim,
        };
        for (&pred, &truth) in p.answers.iter().zip(t.answers.iter()) {
            let cell = match (pred, truth) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            slot[cell] += 1;
        }
    }

    let overall: [usize; 4] = std::array::from_fn(|i| real[i] + sim[i]);
    Ok(AgreementReport {
        real: MetricSet::from_counts(real[0], real[1], real[2], real[3]),
        sim: MetricSet::from_counts(sim[0], sim[1], sim[2], sim[3]),
        overall: MetricSet::from_counts(overall[0], overall[1], overall[2], overall[3]),
        consistency: prediction_consistency(predictions),
    })
}

fn prediction_consistency(predictions: &[FluentVector]) -> Option<f64> {
    let mut by_key = std::collections::BTreeMap::new();
    for p in predictions {
        by_key.insert((p.checkpoint, p.domain == Domain::Real), &p.answers);
    }
    let mut agree = 0usize;
    let mut cells = 0usize;
    for p in predictions {
        if p.domain != Domain::Real {
            continue;
        }
        if let Some(sim_answers) = by_key.get(&(p.checkpoint, false)) {
            for (a, b) in p.answers.iter().zip(sim_answers.iter()) {
                cells += 1;
                if a == b {
                    agree += 1;
                }
            }
        }
    }
    if cells == 0 {
        None
    } else {
        Some(agree as f64 / cells as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(checkpoint: usize, domain: Domain, answers: &[bool]) -> FluentVector {
        FluentVector {
            checkpoint,
            domain,
            answers: answers.to_vec(),
        }
    }

    #[test]
    fn identical_streams_score_one() {
        let real = vec![
            vector(0, Domain::Real, &[true, false, false, false]),
            vector(1, Domain::Real, &[false, true, false, false]),
        ];
        let sim = vec![
            vector(0, Domain::Sim, &[true, false, false, false]),
            vector(1, Domain::Sim, &[false, true, false, false]),
        ];
        let report = consistency_score(&real, &sim).unwrap();
        assert_eq!(report.total_distance, 0);
        assert_eq!(report.score, 1.0);
    }

    #[test]
    fn single_disagreement_scores_exp_minus_one() {
        let real = vec![vector(0, Domain::Real, &[true, false, false, false])];
        let sim = vec![vector(0, Domain::Sim, &[false, false, false, false])];
        let report = consistency_score(&real, &sim).unwrap();
        assert_eq!(report.total_distance, 1);
        assert!((report.score - (-1.0f64).exp()).abs() < 1e-15);
        assert!((report.score - 0.367_879_441_171_442_33).abs() < 1e-15);
    }

    #[test]
    fn score_matches_a_counting_oracle() {
        // Flip cells one by one and compare against an element-by-element
        // count.
        let base = vec![
            vector(0, Domain::Real, &[true, false, true, false]),
            vector(1, Domain::Real, &[false, false, true, true]),
        ];
        let mut sim: Vec<FluentVector> = base
            .iter()
            .map(|v| FluentVector {
                domain: Domain::Sim,
                ..v.clone()
            })
            .collect();
        for k in 1..=8usize {
            let cp = (k - 1) / 4;
            let q = (k - 1) % 4;
            sim[cp].answers[q] = !sim[cp].answers[q];
            let mut count = 0usize;
            for (r, s) in base.iter().zip(sim.iter()) {
                for (a, b) in r.answers.iter().zip(s.answers.iter()) {
                    if a != b {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, k);
            let report = consistency_score(&base, &sim).unwrap();
            assert_eq!(report.total_distance, k);
            let expected = (-(k as f64)).exp();
            assert!((report.score - expected).abs() / expected < 1e-12);
        }
    }

    #[test]
    fn symmetry_of_consistency_score() {
        let a = vec![vector(0, Domain::Real, &[true, true, false, false])];
        let b = vec![vector(0, Domain::Sim, &[true, false, false, true])];
        let ab = consistency_score(&a, &b).unwrap();
        let ba = consistency_score(&b, &a).unwrap();
        assert_eq!(ab.score, ba.score);
        assert_eq!(ab.total_distance, ba.total_distance);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = vec![vector(0, Domain::Real, &[true, true])];
        let b = vec![vector(0, Domain::Sim, &[true])];
        assert!(matches!(
            consistency_score(&a, &b).unwrap_err(),
            FluentError::ShapeMismatch { .. }
        ));
        let c = vec![vector(1, Domain::Sim, &[true, true])];
        assert!(consistency_score(&a, &c).is_err());
    }

    #[test]
    fn perfect_predictions_hit_all_metrics() {
        let truths = vec![
            vector(0, Domain::Real, &[true, false, true, false]),
            vector(0, Domain::Sim, &[true, false, true, false]),
        ];
        let report = agreement_metrics(&truths, &truths).unwrap();
        assert_eq!(report.real.precision, Some(1.0));
        assert_eq!(report.real.recall, Some(1.0));
        assert_eq!(report.overall.f1, Some(1.0));
        assert_eq!(report.consistency, Some(1.0));
    }

    #[test]
    fn hand_built_confusion_case() {
        // TP = 2, FP = 1, FN = 1 within one domain.
        let predictions = vec![vector(0, Domain::Real, &[true, true, true, false])];
        let truths = vec![vector(0, Domain::Real, &[true, true, false, true])];
        let report = agreement_metrics(&predictions, &truths).unwrap();
        let m = report.real;
        assert_eq!(m.true_positives, 2);
        assert_eq!(m.false_positives, 1);
        assert_eq!(m.false_negatives, 1);
        assert!((m.precision.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.recall.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.f1.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        // Only one domain present: no sim/real consistency to report.
        assert_eq!(report.consistency, None);
    }

    #[test]
    fn undefined_metrics_are_absent() {
        // No positive predictions and no positive truths.
        let predictions = vec![vector(0, Domain::Real, &[false, false])];
        let truths = vec![vector(0, Domain::Real, &[false, false])];
        let report = agreement_metrics(&predictions, &truths).unwrap();
        assert_eq!(report.real.precision, None);
        assert_eq!(report.real.recall, None);
        assert_eq!(report.real.f1, None);
        assert_eq!(report.real.true_negatives, 2);
    }

    #[test]
    fn consistency_fraction_counts_matching_cells() {
        let predictions = vec![
            vector(0, Domain::Real, &[true, false, true, false]),
            vector(0, Domain::Sim, &[true, true, true, false]),
        ];
        let truths = predictions.clone();
        let report = agreement_metrics(&predictions, &truths).unwrap();
        assert_eq!(report.consistency, Some(0.75));
    }
}
