//! Flat SU(2) connections on Brieskorn spheres, their filtered instanton
//! cochain data, and a certified obstruction to embeddings into homology
//! S³×S¹ four-manifolds.

pub mod certificate;
pub mod complex;
pub mod cs_q;
pub mod error;
pub mod grading;
pub mod job;
pub mod level;
pub mod obstruction;
pub mod seifert;
pub mod snf;
pub mod sweep;

pub use complex::{CoChain, DifferentialEntry, FilteredComplex, Generator};
pub use cs_q::{q_l, q_tilde, FourManifoldModel, QValue};
pub use level::{Level, Rational};
pub use obstruction::{embedding_verdict, AssumptionSet, ObstructionReport, Verdict};
pub use seifert::{enumerate_flat_connections, validate_seifert, FlatConnection, SeifertData};
