//! Verdicts and certificates. Everything is stored by name so a certificate
//! can be re-checked against a freshly parsed algebra.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Dualizable,
    NonDualizable,
    Unknown,
}

impl Outcome {
    pub fn short(self) -> &'static str {
        match self {
            Outcome::Dualizable => "D",
            Outcome::NonDualizable => "ND",
            Outcome::Unknown => "?",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    DropUndefinedLetter,
    DropRepeatedLetter,
    DropIsolatedState,
    DropRedundantState,
}

/// One normalization step with the embedding `M → N²` witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub removed: String,
    /// `(x, first, second)`: `x ↦ (first, second)`.
    pub embedding: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopComponent {
    pub state: String,
    pub letters: Vec<String>,
}

/// Group data for one component, written out in full.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCertificate {
    pub states: Vec<String>,
    pub identity: String,
    /// `table[i][j]` is `states[i] * states[j]`.
    pub table: Vec<Vec<String>>,
    /// Letter name and its image `e·a`.
    pub letter_images: Vec<(String, String)>,
    pub dropped_letters: Vec<String>,
    pub subgroup_h: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    ZeroSemigroup,
    WhiskeryFailure {
        letter: String,
        state: String,
        m: usize,
        /// `F_m` element name ↦ element name.
        embedding: Vec<(String, String)>,
    },
    RanKill {
        case: u8,
        letter: String,
        state: String,
        word: Vec<String>,
    },
    OrderSensitive {
        state: String,
        w1: Vec<String>,
        w2: Vec<String>,
    },
    SingleLetterWhiskery {
        letter: String,
    },
    TwoStateEquations {
        identities: Vec<String>,
    },
    TwoStateForbidden {
        forbidden: usize,
        embedding: Vec<(String, String)>,
        failed_identity: String,
        counterexample: Vec<(String, String)>,
    },
    ConstantLetters {
        values: Vec<(String, String)>,
    },
    AllLoops {
        components: Vec<LoopComponent>,
    },
    LetterAffine {
        components: Vec<GroupCertificate>,
    },
    CommutingPermutations {
        b: String,
        c: String,
        m: usize,
        components: Vec<Vec<String>>,
    },
    ReductionChain {
        steps: Vec<ReductionStep>,
        inner: Box<Certificate>,
    },
    Inconclusive,
}

impl Certificate {
    /// The certificate under any reduction wrapper.
    pub fn innermost(&self) -> &Certificate {
        match self {
            Certificate::ReductionChain { inner, .. } => inner.innermost(),
            c => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: String,
    pub fired: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: Outcome,
    pub rule: String,
    pub certificate: Certificate,
    pub trace: Vec<TraceEntry>,
}

pub const IDENTITY_XY: &str = "xy ≈ xyyy";
pub const IDENTITY_WXYZ: &str = "wxyz ≈ wyxz";
