//! JSON wire formats shared by the command line and the C interface.
//!
//! Key order is fixed by field order and scalars are always reduced, so
//! equal values serialize to equal bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, Scalar};
use crate::iet::Iet;
use crate::induced::NaturalDecomposition;
use crate::perm::Permutation;
use crate::rauzy::{drive, InductionTrace, Policy, Side, StepKind};
use crate::recovery::{Mode, RecoveryReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub side: String,
    #[serde(rename = "type")]
    pub kind: u8,
    #[serde(rename = "A")]
    pub matrix: IntMatrix,
    /// Permutation after the step.
    pub pi: Permutation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub pi0: Permutation,
    pub lambda0: Vec<Scalar>,
    pub steps: Vec<StepJson>,
}

impl TraceJson {
    pub fn from_trace(trace: &InductionTrace) -> TraceJson {
        TraceJson {
            pi0: trace.initial.permutation().clone(),
            lambda0: trace.initial.lengths().to_vec(),
            steps: trace
                .steps
                .iter()
                .map(|s| StepJson {
                    side: s.kind.side.to_string(),
                    kind: s.kind.kind,
                    matrix: s.matrix.clone(),
                    pi: s.post_perm.clone(),
                })
                .collect(),
        }
    }

    pub fn kinds(&self) -> Result<Vec<StepKind>> {
        self.steps
            .iter()
            .map(|s| format!("{}{}", s.side, s.kind).parse())
            .collect()
    }

    /// Re-run the recorded sides from `(pi0, lambda0)` and insist that every
    /// recorded matrix and permutation comes out again.
    pub fn replay(&self) -> Result<InductionTrace> {
        if self.steps.is_empty() {
            return Err(Error::Parse("trace has no steps".into()));
        }
        let sides: Vec<Side> = self.kinds()?.iter().map(|k| k.side).collect();
        let t = Iet::new(self.pi0.clone(), self.lambda0.clone())?;
        let trace = drive(&t, &Policy::Sides(sides), self.steps.len())?;
        if TraceJson::from_trace(&trace) != *self {
            return Err(Error::Parse("trace does not replay from its initial data".into()));
        }
        Ok(trace)
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        self.steps.iter().map(|s| s.matrix.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceJson {
    pub a: Scalar,
    pub b: Scalar,
    pub r: usize,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionJson {
    pub pieces: Vec<PieceJson>,
    pub admissible: bool,
    #[serde(rename = "A")]
    pub matrix: Option<IntMatrix>,
}

impl DecompositionJson {
    pub fn new(d: &NaturalDecomposition, matrix: Option<IntMatrix>) -> DecompositionJson {
        DecompositionJson {
            pieces: d
                .pieces
                .iter()
                .map(|p| PieceJson {
                    a: p.interval.a.clone(),
                    b: p.interval.b.clone(),
                    r: p.return_time,
                    word: p.word.clone(),
                })
                .collect(),
            admissible: matrix.is_some(),
            matrix,
        }
    }
}

/// Input to recovery: either explicit products or a full trace.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RecoveryInput {
    Trace(TraceJson),
    Products {
        n: Option<usize>,
        products: Vec<IntMatrix>,
        mode: Option<String>,
    },
}

impl RecoveryInput {
    pub fn parse(text: &str) -> Result<RecoveryInput> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Size, products and requested mode. A trace is replayed first and its
    /// step matrices are grouped by `cuts` (1-based ends of each group).
    pub fn resolve(&self, cuts: Option<&[usize]>) -> Result<(usize, Vec<IntMatrix>, Option<Mode>)> {
        match self {
            RecoveryInput::Trace(t) => {
                let trace = t.replay()?;
                let products = match cuts {
                    Some(c) => crate::rauzy::group_products(&trace, c)?.products,
                    None => t.matrices(),
                };
                Ok((t.pi0.n(), products, None))
            }
            RecoveryInput::Products { n, products, mode } => {
                if cuts.is_some() {
                    return Err(Error::Parse("cuts apply only to trace input".into()));
                }
                let n = match (n, products.first()) {
                    (Some(n), _) => *n,
                    (None, Some(b)) => b.rows(),
                    (None, None) => return Err(Error::Parse("no products and no n".into())),
                };
                let mode = mode.as_deref().map(str::parse).transpose()?;
                Ok((n, products.clone(), mode))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateJson {
    pub pi: Permutation,
    pub chain: Vec<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<StepKind>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportJson {
    pub candidates: Vec<CandidateJson>,
    pub n: usize,
    pub mode: Mode,
    pub prefix_counts: Vec<usize>,
}

impl ReportJson {
    pub fn new(r: &RecoveryReport) -> ReportJson {
        ReportJson {
            candidates: r
                .candidates
                .iter()
                .map(|c| CandidateJson {
                    pi: c.pi.clone(),
                    chain: c.chain.clone(),
                    paths: c.paths.clone(),
                })
                .collect(),
            n: r.n,
            mode: r.mode,
            prefix_counts: r.prefix_counts.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorJson {
    pub error: String,
    pub message: String,
}

impl From<&Error> for ErrorJson {
    fn from(e: &Error) -> ErrorJson {
        ErrorJson {
            error: e.code().into(),
            message: e.to_string(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("wire types always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rauzy::Policy;

    fn golden_trace() -> InductionTrace {
        let t = Iet::new(Permutation::new(vec![2, 1]).unwrap(), vec![Scalar::golden(), Scalar::one()]).unwrap();
        drive(&t, &Policy::AlwaysRight, 3).unwrap()
    }

    #[test]
    fn trace_round_trip_replays() {
        let json = TraceJson::from_trace(&golden_trace());
        assert_eq!(json.steps.iter().map(|s| s.kind).collect::<Vec<_>>(), vec![1, 0, 1]);
        let text = to_json(&json);
        let back: TraceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        back.replay().unwrap();
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let mut json = TraceJson::from_trace(&golden_trace());
        json.steps[1].matrix = IntMatrix::identity(2);
        assert!(matches!(json.replay(), Err(Error::Parse(_))));
    }

    #[test]
    fn products_input() {
        let input = RecoveryInput::parse(
            r#"{"n":2,"products":[{"rows":2,"cols":2,"entries":[[2,1],[1,1]]}],"mode":"weak"}"#,
        )
        .unwrap();
        let (n, bs, mode) = input.resolve(None).unwrap();
        assert_eq!((n, bs.len(), mode), (2, 1, Some(Mode::Weak)));
    }
}
