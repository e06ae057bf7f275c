//! Optimal online pathfinding on 8-connected uniform-cost grids.
//!
//! The crate provides:
//!
//! - [`grid`]: the map model — exact octile [`grid::Cost`] arithmetic, a
//!   traversability map with synchronized row-major and column-major blocked
//!   bitmaps, MovingAI map I/O, and synthetic map generators;
//! - [`canonical`]: the diagonal-first successor rules, jump-point and
//!   corner-point predicates, and successor-set intersection;
//! - [`blockscan`]: branch-less cardinal scanning over whole bit blocks,
//!   with jump limits imposed through temporary artificial obstacles;
//! - [`search`]: A*, a Dijkstra truth-table oracle, jump point search, and
//!   constrained jump point search with dynamic jump limits, plus the
//!   diagonal-caching / backwards-scanning / intersection-pruning variants;
//! - [`bench`]: a harness that replays scenario suites, counts suboptimal
//!   expansions against the Dijkstra oracle, and reports improvement
//!   factors as CSV;
//! - [`oracle`]: slow reference implementations used for differential
//!   testing.

pub mod bench;
pub mod blockscan;
pub mod canonical;
pub mod grid;
pub mod oracle;
pub mod search;
