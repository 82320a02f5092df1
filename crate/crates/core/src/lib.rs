pub mod error;
pub mod function;
pub mod harness;
pub mod integrate;
pub mod lattice;
pub mod oseq;
pub mod partition;
pub mod scalar;

pub use error::{Error, Result};
pub use lattice::{LatticeVector, NormKind, Space};
pub use oseq::{OSequence, OSequenceRule};
pub use partition::{Gage, Interval, PartitionKind, TagPolicy, TaggedItem, TaggedPartition};
pub use scalar::{Backend, Rational, Scalar};
pub use function::{EscapeScaling, Form, FunctionDoc, LatticeFunction, Polynomial, Term};
pub use integrate::{
    integrate_monotone, integrate_norm_adaptive, integrate_order, integrate_step, modulus_measure, Certificate,
    IndefiniteIntegral, IntegralResult,
};
pub use harness::{BoundKind, CheckParams, CheckReport, Isolation, Schedule, SweepReport, SweepRow};
