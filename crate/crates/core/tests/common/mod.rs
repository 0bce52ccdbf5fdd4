#![allow(dead_code)]

pub mod algebras;
pub mod padic;
