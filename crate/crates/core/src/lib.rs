//! Explicit-state reachability checking for guarded-command models, with
//! partial-order reduction, symmetry reduction and a distributed runtime.
//!
//! ```
//! use gcm::{corpus, explore, parse_model, SearchOptions, Strategy, Verdict};
//!
//! let m = parse_model(&corpus::ind_terminating(10)).unwrap();
//! let r = explore(&m, &SearchOptions::new(Strategy::Dfs).por(true)).unwrap();
//! assert_eq!(r.verdict, Verdict::Clean);
//! assert_eq!(r.states_stored, 11);
//! ```

pub mod corpus;
pub mod dist;
pub mod model;
pub mod parse;
pub mod reduction;
pub mod report;
pub mod search;
pub mod semantics;
pub mod state;

pub use dist::{run_distributed, run_distributed_detailed, Backend, RunConfig};
pub use model::{Model, TransitionInstance};
pub use parse::{parse_model, ModelError};
pub use search::{
    explore, explore_detailed, oracle_reachable, oracle_verdict, replay_trace, SearchError,
    SearchOptions, SearchResult, Strategy, Verdict,
};
pub use state::{decode_state, encode_state, State};
