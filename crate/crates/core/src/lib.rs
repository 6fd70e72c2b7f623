//! Quality evaluation of bounded B abstract machines.
//!
//! A machine is parsed ([`bmachine`]), its labelled transition system is
//! derived by bounded exploration ([`explorer`]), and the derived behaviour
//! is compared against required behaviour to compute quality metrics.

pub mod alignment;
pub mod bmachine;
pub mod explorer;
pub mod lts;
pub mod metrics;
pub mod mutation;
pub mod ratio;
pub mod report;

pub use bmachine::{parse_machine, parse_predicate, Machine, ParseError};
pub use explorer::{check_goal, explore, ExplorationResult, ExploreError, Limits, Metering};
pub use lts::{
    flatten_pair, flatten_transition, FlatList, Label, LtsError, PairSet, State, StatePair,
    StateSet, Token, Transition, TransitionSet, Value, VarOrder,
};
pub use ratio::Ratio;
