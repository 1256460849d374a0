//! Long exact sequences, the fixture tables and the audits built from them.

pub mod audit;
pub mod fixture;
pub mod les;
pub mod tables;

pub use audit::{bo1_les_consistency, bott_audit, bott_audit_with, AuditReport, Bo1Verdict};
pub use fixture::{FixtureSet, FixtureTable};
pub use les::{alternating_order_check, image_order_solve, sequence_feasible, Feasibility, LongExactSequence};
pub use tables::{bo1_rp_table, bo_rp_table, bo_smash_group, bo_smash_group_with, hz_rp_table, BoCoefficients, Tables, Theory};
