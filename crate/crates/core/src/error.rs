use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("defining polynomial is not étale at p = {p}")]
    NonEtaleAtP { p: u64 },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("result needs the prime {prime} in a denominator")]
    DenominatorNotAllowed { prime: BigInt },
    #[error("tuple is not in the image of the ghost map (first failure at e = {e})")]
    NotInImage { e: u64 },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u64, right: u64 },
    #[error("source precision too small at e = {e}: have {have}, need {need}")]
    PrecisionShortfall { e: u64, have: u32, need: u32 },
    #[error("component e = {e} is not congruent to 1")]
    NotCongruentToOne { e: u64 },
    #[error("component e = {e} is not divisible")]
    NotDivisible { e: u64 },
    #[error("congruence Π̃_d(y) ≡ Frob_d(y) fails at e = {e}")]
    WellDefinednessViolation { e: u64 },
    #[error("no e-th root of the root of unity available for e = {e}")]
    RootUnavailable { e: u64 },
    #[error("invalid ring presentation: {0}")]
    InvalidRing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
