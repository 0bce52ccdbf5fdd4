//! Maximal tori of real groups of types B and C, embeddings of étale
//! algebras with involution into matrix algebras with involution, and the
//! twins criterion over ℚ.

pub mod error;
pub mod linalg;
pub mod local;
pub mod qforms;
pub mod rational;

pub use error::{Error, Result};
pub mod fp_poly;
pub mod poly;
pub mod etale;
pub mod lattice;
pub mod real_tori;
pub mod groups;
pub mod embed;
