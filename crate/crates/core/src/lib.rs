pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod chevalley;
pub mod cascade;
pub mod report;
pub mod coadjoint;
pub mod par;
pub mod invariants;
pub mod suite;
pub mod cli;
