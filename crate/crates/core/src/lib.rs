//! Regularity checkers for bipartite graphs, 3-partite 3-graphs and
//! 2-partitions, the refinement algebra behind them, the explicit
//! lower-bound constructions and the schedule arithmetic used to size them.

pub mod bitset;
pub mod error;
pub mod graphs;
pub mod partitions;
pub mod rational;
pub mod regcheck;
pub mod hyperreg;
pub mod constructions;
pub mod harness;

pub use error::{Error, Result};
pub use graphs::{BipartiteGraph, ProductSide, ThreeGraph, Triad, VertexClass};
pub use partitions::{EdgePartition, Frame, TaggedGraph, TwoPartition, VertexPartition, Violation};
pub use rational::Rational;
pub use regcheck::{CheckParams, EditOutcome, Level, Method, Mode, Status, Verdict, Witness};
pub use constructions::BigCount;
pub use harness::{run_suite, Outcome, Report, SuiteSpec, SUITE_IDS};
