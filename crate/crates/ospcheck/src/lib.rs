//! Verifying and synthesizing obviously strategy-proof two-alternative
//! voting, graded by how much of the room each voter can see.
//!
//! A committee of winning coalitions defines a voting rule between two
//! alternatives: `x` is elected exactly when its supporters contain a
//! winning coalition. Whether such a rule can be run so that honesty is
//! *obviously* best depends on a partition of the agents: members of a
//! block can reason about each other's strategies, agents outside the
//! block remain unpredictable. With everyone in one block the standard
//! requirement of weak dominance comes back; with everyone alone the
//! classical obvious strategy-proofness of single-agent reasoning does.
//!
//! The crate has three layers:
//!
//! - **Model** ([`model`], [`committee`]): agents, two-alternative
//!   preferences, profiles, coalitions, partitions; committees, their
//!   duals and dummies, extended majority voting, strategy-proofness of
//!   outcome tables, and committee extraction.
//! - **Games** ([`game`]): extensive game forms with information sets,
//!   validated against five structural invariants; strategies and
//!   type-strategy profiles; quota games; pruning and relabeling into
//!   round-table form.
//! - **Verification and characterization** ([`verify`],
//!   [`characterize`]): earliest departure points, option sets, obvious
//!   dominance with respect to a partition (checked by exhaustive
//!   enumeration with replayable witnesses), and — for committees
//!   anonymous relative to the partition — a decision procedure that
//!   either produces a certified implementing game or correctly reports
//!   that none exists.
//!
//! [`sampling`] provides the seeded instance generators the test-suite
//! and the command-line reproduction tooling share.
//!
//! # Example
//!
//! Majority of three is obviously strategy-proof when two of the agents
//! can size each other up, and not when all three reason alone:
//!
//! ```
//! use ospcheck::characterize::certify;
//! use ospcheck::committee::Committee;
//! use ospcheck::error::Error;
//! use ospcheck::model::{Coalition, Partition};
//! use ospcheck::verify::DEFAULT_CAP;
//!
//! let majority = Committee::new(3, vec![
//!     Coalition::from_members(&[1, 2]),
//!     Coalition::from_members(&[1, 3]),
//!     Coalition::from_members(&[2, 3]),
//! ])?;
//!
//! let paired = Partition::from_lists(3, vec![vec![1, 2], vec![3]])?;
//! let cert = certify(&majority, &paired, DEFAULT_CAP)?;
//! assert_eq!(cert.quotas.quotas(), &[1, 0]);
//! assert!(cert.report.pass);
//!
//! let alone = Partition::finest(3)?;
//! assert_eq!(certify(&majority, &alone, DEFAULT_CAP).unwrap_err(), Error::NotOsp);
//! # Ok::<(), Error>(())
//! ```

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod characterize;
pub mod committee;
pub mod error;
pub mod game;
pub mod model;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
