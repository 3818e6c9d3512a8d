//! Ternary cyclotomic polynomials `Φ_pqr`: exact coefficient evaluation,
//! coefficient-set scans, an explicit family of polynomials with
//! prescribed coefficient range, and bounds on the maximal height.

pub mod binary;
pub mod construction;
pub mod kaplan;
pub mod landscape;
pub mod numtheory;
pub mod oracle;

pub use binary::BinaryContext;
pub use construction::{construct, ConstructionCertificate, VerifyMode};
pub use kaplan::{CoefficientSet, KaplanContext, ScanOptions};
pub use numtheory::Residue;
