//! Spectrum-usage analysis for elastic optical networks.
//!
//! The pipeline: a [`topology::Topology`] and a
//! [`traffic::TrafficDistribution`] fix the candidate paths and the
//! [`conflict::ConflictMatrix`]; a [`gof::RoutingScheme`] then determines the
//! probability that two random requests share a link, and [`gof::minimize_gof`]
//! finds the scheme that minimizes it. [`rsa`] and [`harness`] check the
//! prediction by simulating routing and spectrum assignment.

pub mod conflict;
pub mod error;
pub mod gof;
pub mod harness;
pub mod rsa;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};
