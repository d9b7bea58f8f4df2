//! Witness replay, shared by the command line and the C interface.
//!
//! Accepts any of the JSON shapes the tools emit: a full verification
//! report, a single row witness with its vector, a codeword witness file,
//! or the output of the distance command.

use serde::Deserialize;

use crate::bounds::{replay_verification, VerificationReport};
use crate::codes::{CodeFile, CodeSpec, DistanceWitnessFile};
use crate::distance::{validate_witness, DistanceWitness};
use crate::error::{Error, Result};
use crate::pseudorank::{replay_witness, SingletonWitness};
use crate::upattern::{circulant, UVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplayKind {
    VerificationReport,
    RowWitness,
    CodewordWitness,
}

impl ReplayKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReplayKind::VerificationReport => "verification-report",
            ReplayKind::RowWitness => "row-witness",
            ReplayKind::CodewordWitness => "codeword-witness",
        }
    }
}

#[derive(Debug)]
pub struct ReplaySummary {
    pub kind: ReplayKind,
    pub replayed: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ReplayFile {
    Verification(VerificationReport),
    Vector { u: String, claimed: Option<u32>, witness: SingletonWitness },
    Codeword(DistanceWitnessFile),
    DistanceOutput { code: CodeFile, witness: DistanceWitness },
}

/// Replay whatever witness the document carries. `InvalidParameter` means
/// the document is not one of the known shapes; `InvalidWitness` means it
/// parsed but the claim does not replay.
pub fn replay_json(text: &str) -> Result<ReplaySummary> {
    let parsed: ReplayFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidParameter(format!("unrecognized witness document: {e}")))?;
    match parsed {
        ReplayFile::Verification(report) => {
            replay_verification(&report)?;
            Ok(ReplaySummary {
                kind: ReplayKind::VerificationReport,
                replayed: report.results.len(),
            })
        }
        ReplayFile::Vector { u, claimed, witness } => {
            let v = UVec::parse(&u)?;
            if let Some(r) = claimed {
                if witness.rows.len() as u32 != r {
                    return Err(Error::InvalidWitness(format!(
                        "witness has {} rows, claimed {r}",
                        witness.rows.len()
                    )));
                }
            }
            replay_witness(&circulant(&v), &witness)?;
            Ok(ReplaySummary { kind: ReplayKind::RowWitness, replayed: 1 })
        }
        ReplayFile::Codeword(file) => {
            let code = CodeSpec::from_file(&file.code)?;
            let witness = DistanceWitness {
                codeword: file.codeword,
                weight: file.weight,
                seed: file.seed,
                iteration: file.iteration,
            };
            validate_witness(&code, &witness)?;
            Ok(ReplaySummary { kind: ReplayKind::CodewordWitness, replayed: 1 })
        }
        ReplayFile::DistanceOutput { code, witness } => {
            let code = CodeSpec::from_file(&code)?;
            validate_witness(&code, &witness)?;
            Ok(ReplaySummary { kind: ReplayKind::CodewordWitness, replayed: 1 })
        }
    }
}
