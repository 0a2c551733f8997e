//! Tri-valued decisions with attached evidence.

use num_bigint::BigInt;
use serde::Serialize;

use crate::ktheory::matrix::BigIntOne;
use crate::ktheory::{ExtClass, SesWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

/// Evidence for a `Yes`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// Vertical isomorphisms between two short exact sequences of K0 groups.
    SequenceIsomorphism(SesWitness),
    /// A unit `z` modulo `modulus` with `b ≡ z·b'`.
    Unit {
        #[serde(serialize_with = "ser_int")]
        modulus: BigInt,
        #[serde(serialize_with = "ser_int")]
        z: BigInt,
    },
    /// Units `z1` mod `d − 1` and `z2` mod `a − 1` with `z1·b ≡ z2·b'` modulo their gcd.
    UnitPair {
        #[serde(serialize_with = "ser_int")]
        modulus: BigInt,
        #[serde(serialize_with = "ser_int")]
        z1: BigInt,
        #[serde(serialize_with = "ser_int")]
        z2: BigInt,
    },
    /// The invariants coincide and identity maps give the isomorphism.
    IdentityMaps { reason: String },
    /// Both graphs fall into the same classified family with matching data.
    Family { family: String, detail: String },
    /// Vertex bijection `permutation[v]` of the first graph onto the second, preserving multiplicities.
    GraphIsomorphism { permutation: Vec<usize> },
}

/// Evidence for a `No`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Obstruction {
    /// An invariant that differs between the two inputs.
    InvariantMismatch {
        invariant: String,
        left: String,
        right: String,
    },
    /// The full orbit of the first class under the automorphism action, which misses the second class.
    OrbitSeparation {
        orbit: Vec<ExtClass>,
        target: ExtClass,
    },
    /// No unit makes the congruence hold (every candidate was tested).
    NoUnit {
        #[serde(serialize_with = "ser_int")]
        modulus: BigInt,
        #[serde(serialize_with = "ser_int")]
        b: BigInt,
        #[serde(serialize_with = "ser_int")]
        b_prime: BigInt,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    /// Which decision procedure (and case) produced the answer, or why none applied.
    pub route: String,
    pub witness: Option<Witness>,
    pub obstruction: Option<Obstruction>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn yes(route: impl Into<String>, witness: Witness) -> Self {
        Verdict {
            answer: Answer::Yes,
            route: route.into(),
            witness: Some(witness),
            obstruction: None,
            notes: Vec::new(),
        }
    }

    pub fn no(route: impl Into<String>, obstruction: Obstruction) -> Self {
        Verdict {
            answer: Answer::No,
            route: route.into(),
            witness: None,
            obstruction: Some(obstruction),
            notes: Vec::new(),
        }
    }

    pub fn unknown(route: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::Unknown,
            route: route.into(),
            witness: None,
            obstruction: None,
            notes: Vec::new(),
        }
    }

    pub fn mismatch(route: impl Into<String>, invariant: &str, left: impl ToString, right: impl ToString) -> Self {
        Verdict::no(
            route,
            Obstruction::InvariantMismatch {
                invariant: invariant.into(),
                left: left.to_string(),
                right: right.to_string(),
            },
        )
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Prefixes the route with the enclosing decision.
    pub fn via(mut self, route: &str) -> Self {
        self.route = format!("{route}: {}", self.route);
        self
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }

    pub fn is_unknown(&self) -> bool {
        self.answer == Answer::Unknown
    }

    /// The structural contract: Yes carries a witness, No an obstruction.
    pub fn well_formed(&self) -> bool {
        match self.answer {
            Answer::Yes => self.witness.is_some(),
            Answer::No => self.obstruction.is_some(),
            Answer::Unknown => !self.route.is_empty(),
        }
    }
}

fn ser_int<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    BigIntOne(x).serialize(s)
}
