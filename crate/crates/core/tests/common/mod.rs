#![allow(dead_code)]

pub mod corpus;
pub mod gating_oracle;
pub mod id_gen;
pub mod metric_oracle;
pub mod verdict_oracle;
