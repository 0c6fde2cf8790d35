//! Fractional perfect matchings to near-perfect integral matchings.
mod fpm;
mod npm;
mod pipeline;
mod sample;

pub use fpm::{extract_fpm_family, FamilyStatus, FpmFamily, FpmOptions, FpmStrategy, PairLoads, RoundInfo};
pub use npm::{near_perfect_matching, NpmOptions, NpmStrategy};
pub use pipeline::{choose_r, default_t, pipeline, FamilySummary, PipelineOptions, PipelineReport, Stage, StageReport};
pub use sample::{mix_and_halve, sample_binomial_subgraph, SampleReport, Windows};
