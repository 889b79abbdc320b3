pub mod error;
pub mod graph;
pub mod identities;
pub mod oracle;
pub mod bench;
pub mod circuit;
pub mod clifford;
pub mod engine;
pub mod scalar;
