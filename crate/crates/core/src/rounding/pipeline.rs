//! Augment, extract, mix, sample, match, and project back to the input.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fpm::{extract_fpm_family, FamilyStatus, FpmFamily, FpmOptions, RoundInfo};
use super::npm::{near_perfect_matching, NpmOptions, NpmStrategy};
use super::sample::{mix_and_halve, sample_binomial_subgraph, SampleReport, Windows};
use crate::constructions::augment_universal;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::optimize::Matching;

/// `max(2, round(n^0.2))`.
pub fn default_t(n: usize) -> usize {
    ((n as f64).powf(0.2).round() as usize).max(2)
}

/// Number of universal vertices to add. Prefers the smallest `r` with
/// `n + r ≡ 0 (mod 3)` and `n - 3s - 2ηn ≤ 2r ≤ n - 3s - ηn`; when no such
/// `r` exists, the smallest `r` with `n + r ≡ 0 (mod 3)`.
pub fn choose_r(n: usize, s: usize, eta: f64) -> usize {
    let base = n as f64 - 3.0 * s as f64;
    let (lo, hi) = (base - 2.0 * eta * n as f64, base - eta * n as f64);
    (0..=n)
        .filter(|r| (n + r) % 3 == 0)
        .find(|&r| (lo..=hi).contains(&(2.0 * r as f64)))
        .unwrap_or((3 - n % 3) % 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Augment,
    Extract,
    Mix,
    Sample,
    Match,
    Extend,
    Project,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: Stage,
    pub ok: bool,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    pub eta: f64,
    pub fpm: FpmOptions,
    pub windows: Windows,
    pub npm: NpmOptions,
    /// Grow the sampled matching greedily inside `H_r` before projecting.
    pub extend: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            eta: 0.1,
            fpm: FpmOptions::default(),
            windows: Windows::default(),
            npm: NpmOptions::default(),
            extend: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySummary {
    pub requested: usize,
    pub built: usize,
    pub status: FamilyStatus,
    pub attempts: usize,
    pub max_pair_load: f64,
    pub max_heavy_per_vertex: usize,
    pub rounds: Vec<RoundInfo>,
}

impl From<&FpmFamily> for FamilySummary {
    fn from(f: &FpmFamily) -> Self {
        FamilySummary {
            requested: f.requested,
            built: f.t(),
            status: f.status.clone(),
            attempts: f.attempts,
            max_pair_load: f.loads.max(),
            max_heavy_per_vertex: f.loads.max_heavy_per_vertex(f.heavy_threshold()),
            rounds: f.rounds.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub t: usize,
    pub seed: u64,
    pub strategy: NpmStrategy,
    pub stages: Vec<StageReport>,
    pub family: Option<FamilySummary>,
    pub sample: Option<SampleReport>,
    /// Matching size in the sample, then after extension, both in `H_r`.
    pub sampled_matching: usize,
    pub extended_matching: usize,
    /// The matching projected to the input graph.
    pub matching: Matching,
    /// `matching` has more than `s` edges.
    pub success: bool,
    pub stalled_at: Option<Stage>,
}

impl PipelineReport {
    fn push(&mut self, stage: Stage, ok: bool, note: String) {
        self.stages.push(StageReport { stage, ok, note });
        if !ok && self.stalled_at.is_none() {
            self.stalled_at = Some(stage);
        }
    }
}

/// Runs every stage on a 3-graph, with all randomness drawn from `seed`.
/// A stage that cannot proceed ends the run with `stalled_at` set; errors
/// are reserved for bad input and failed internal checks.
pub fn pipeline(h: &Hypergraph, s: usize, t: usize, seed: u64, opts: &PipelineOptions) -> Result<PipelineReport> {
    if h.k() != 3 {
        return Err(Error::InvalidParameter(format!("the pipeline needs a 3-graph, got k = {}", h.k())));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let n = h.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (fpm_seed, sample_seed, npm_seed): (u64, u64, u64) = (rng.gen(), rng.gen(), rng.gen());
    let r = choose_r(n, s, opts.eta);
    let mut report = PipelineReport {
        n,
        s,
        r,
        t,
        seed,
        strategy: opts.npm.strategy,
        stages: Vec::new(),
        family: None,
        sample: None,
        sampled_matching: 0,
        extended_matching: 0,
        matching: Matching::default(),
        success: false,
        stalled_at: None,
    };

    let hr = augment_universal(h, r);
    report.push(Stage::Augment, true, format!("H_r has {} vertices and {} edges", hr.n(), hr.edge_count()));

    let family = extract_fpm_family(&hr, t, &FpmOptions { seed: fpm_seed, ..opts.fpm })?;
    family.verify().map_err(|e| Error::InvalidCertificate(format!("extract: {e}")))?;
    report.family = Some(FamilySummary::from(&family));
    let note = format!("{} of {t} members", family.t());
    if let FamilyStatus::Infeasible { round } = family.status {
        report.push(Stage::Extract, false, format!("{note}; infeasible at round {round}"));
        return Ok(report);
    }
    report.push(Stage::Extract, true, note);

    let f = mix_and_halve(&family).map_err(|e| Error::InvalidCertificate(format!("mix: {e}")))?;
    report.push(Stage::Mix, true, format!("vertex sums {}", t as f64 / 2.0));

    let sample = sample_binomial_subgraph(&hr, &f, sample_seed, &opts.windows)?;
    report.push(
        Stage::Sample,
        true,
        format!(
            "{} edges; {} degree and {} pair violations",
            sample.sampled_edges, sample.degree_violations, sample.pair_violations
        ),
    );

    let m = near_perfect_matching(sample.graph(), &opts.npm, npm_seed);
    m.validate(&hr)?;
    report.sampled_matching = m.len();
    report.push(Stage::Match, true, format!("{} edges cover {} of {} vertices", m.len(), 3 * m.len(), hr.n()));
    report.sample = Some(sample);

    let m = if opts.extend {
        let used = m.covered();
        let rest = hr.filter_edges(|e| e.vertices().iter().all(|&v| !used.contains(v)));
        let more = near_perfect_matching(&rest, &NpmOptions::default(), 0);
        let mut edges = m.edges().to_vec();
        edges.extend(more.edges().iter().cloned());
        let grown = Matching::new(edges);
        grown.validate(&hr)?;
        report.push(Stage::Extend, true, format!("added {} edges of H_r", more.len()));
        grown
    } else {
        m
    };
    report.extended_matching = m.len();

    let projected = Matching::new(m.edges().iter().filter(|e| e.vertices().iter().all(|&v| v <= n)).cloned().collect());
    projected.validate(h)?;
    report.success = projected.len() > s;
    let note = format!("{} edges avoid the universal vertices; need more than {s}", projected.len());
    report.matching = projected;
    report.push(Stage::Project, report.success, note);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::gen_cover_family;
    use crate::hypergraph::VertexSet;

    #[test]
    fn r_rule() {
        assert_eq!(choose_r(12, 3, 0.1), 0);
        assert_eq!(choose_r(12, 2, 0.1), 0);
        // n - 3s = 15, window [9, 12] for 2r, and r = 6 is the multiple of 3 in it
        assert_eq!(choose_r(30, 5, 0.1), 6);
        // the window lies below zero, so fall back to n + r ≡ 0
        assert_eq!(choose_r(13, 4, 0.1), 2);
        for n in 3..40 {
            for s in 0..n / 3 {
                assert_eq!((n + choose_r(n, s, 0.1)) % 3, 0);
            }
        }
        assert_eq!(default_t(12), 2);
        assert_eq!(default_t(1000), 4);
    }

    #[test]
    fn complete_twelve() {
        let h = Hypergraph::complete(12, 3).unwrap();
        let rep = pipeline(&h, 3, default_t(12), 7, &PipelineOptions::default()).unwrap();
        assert!(rep.success);
        assert_eq!(rep.matching.len(), 4);
        assert_eq!(rep.stalled_at, None);
    }

    #[test]
    fn cover_family_stalls() {
        let h = gen_cover_family(12, 3, 2, &VertexSet::new([1, 2])).unwrap();
        let rep = pipeline(&h, 2, 2, 7, &PipelineOptions::default()).unwrap();
        assert!(!rep.success);
        assert!(rep.matching.len() <= 2);
        assert_eq!(rep.stalled_at, Some(Stage::Extract));
    }

    #[test]
    fn empty_stalls_at_extract() {
        let h = Hypergraph::empty(9, 3).unwrap();
        let rep = pipeline(&h, 1, 2, 0, &PipelineOptions::default()).unwrap();
        assert_eq!(rep.stalled_at, Some(Stage::Extract));
        assert!(rep.matching.is_empty());
        assert!(pipeline(&Hypergraph::complete(6, 2).unwrap(), 1, 2, 0, &PipelineOptions::default()).is_err());
    }

    #[test]
    fn replayable() {
        let h = Hypergraph::complete(15, 3).unwrap();
        let a = pipeline(&h, 4, 3, 5, &PipelineOptions::default()).unwrap();
        let b = pipeline(&h, 4, 3, 5, &PipelineOptions::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
