//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line prints; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use hypermatch::constructions::{
    a_count, bound_report, clique_count, cover_count, gen_a_family, gen_clique_family, gen_cover_family,
    gen_hm_family, hm_count,
};
use hypermatch::hypergraph::k_subsets;
use hypermatch::optimize::{
    check_duality, nu_exact, nu_frac, tau_exact, tau_frac, threshold_cover_graph, ExactOptions, LpMode,
};
use hypermatch::rounding::{
    default_t, extract_fpm_family, mix_and_halve, near_perfect_matching, pipeline, sample_binomial_subgraph,
    FpmOptions, NpmOptions, PipelineOptions, Windows,
};
use hypermatch::shifting::{downset_check, is_stable, potential, shift_graph, stabilize};
use hypermatch::stability::{bound_table, crossover_f, crossover_root, crossover_root_closed_form, full_s_range};
use hypermatch::verify::{verify_extremal, Constraint, Method, VerifyOptions};
use hypermatch::{Hypergraph, VertexSet};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn nu(h: &Hypergraph) -> usize {
    nu_exact(h, &ExactOptions::default()).unwrap().len()
}

fn tau(h: &Hypergraph) -> usize {
    tau_exact(h, &ExactOptions::default()).unwrap().len()
}

/// Largest intersecting 3-graph on [6] with no vertex in every edge, by
/// direct enumeration with its own checks.
fn hm_oracle_6_3_1() -> usize {
    let edges: Vec<u32> = k_subsets(6, 3).map(|e| e.iter().map(|&v| 1u32 << v).sum()).collect();
    (0u32..1 << edges.len())
        .into_par_iter()
        .filter_map(|pick| {
            let chosen: Vec<u32> = (0..edges.len()).filter(|i| pick >> i & 1 == 1).map(|i| edges[i]).collect();
            let intersecting = chosen.iter().all(|a| chosen.iter().all(|b| a & b != 0));
            let common = chosen.iter().fold(!0u32, |acc, e| acc & e);
            (intersecting && !chosen.is_empty() && common == 0).then_some(chosen.len())
        })
        .max()
        .unwrap_or(0)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let opts = VerifyOptions { method: Method::Exhaustive, ..Default::default() };
    let r = verify_extremal(6, 3, 1, Constraint::NuLeSAndTauGtS, &opts).unwrap();
    let elapsed = start.elapsed();
    let b = bound_report(6, 3, 1).unwrap();
    let expected = b.hm_bound.clone().max(b.clique_bound.clone());
    let oracle = hm_oracle_6_3_1();
    let pass = r.max_edges_found == 10
        && oracle == 10
        && BigUint::from(r.max_edges_found) == expected
        && r.matches_bound
        && elapsed <= Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "max_edges_found={} oracle={oracle} max{{hm,clique}}=max{{{},{}}} graphs={} in {:.2?}",
            r.max_edges_found, b.hm_bound, b.clique_bound, r.searched, elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for k in 2..=4 {
        for n in k..=14 {
            for s in 1..=n {
                let mut check = |name: String, got: usize, want: BigUint| {
                    checked += 1;
                    if BigUint::from(got) != want {
                        failures.push(format!("{name}: generated {got}, formula {want}"));
                    }
                };
                let w = VertexSet::range(1, s);
                check(format!("cover({n},{k},{s})"), gen_cover_family(n, k, s, &w).unwrap().edge_count(), cover_count(n, k, s));
                let u = k * (s + 1) - 1;
                if u <= n {
                    let h = gen_clique_family(n, k, s, &VertexSet::range(1, u)).unwrap();
                    check(format!("clique({n},{k},{s})"), h.edge_count(), clique_count(k, s));
                }
                if n >= s + k {
                    check(format!("hm({n},{k},{s})"), gen_hm_family(n, k, s).unwrap().edge_count(), hm_count(n, k, s));
                }
                for i in 2..=k {
                    if (s + 1) * i - 1 <= n {
                        let h = gen_a_family(n, k, s, i).unwrap();
                        check(format!("a_{i}({n},{k},{s})"), h.edge_count(), a_count(n, k, s, i));
                    }
                }
            }
        }
    }
    let detail = match failures.first() {
        None => format!("{checked} generator/formula pairs equal"),
        Some(f) => format!("{} of {checked} differ, first {f}", failures.len()),
    };
    outcome(failures.is_empty() && checked > 0, detail)
}

fn criterion_3() -> Outcome {
    let mut cases = Vec::new();
    for k in 2..=4 {
        for s in 1.. {
            if k * s + k - 1 > 12 {
                break;
            }
            for n in k * s + k - 1..=12 {
                cases.push((n, k, s));
            }
        }
    }
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map_iter(|&(n, k, s)| {
            let mut bad = Vec::new();
            let hm = gen_hm_family(n, k, s).unwrap();
            let (a, b) = (nu(&hm), tau(&hm));
            if a != s || b != s + 1 {
                bad.push(format!("HM({n},{k},{s}): nu={a} tau={b}"));
            }
            for i in 2..k {
                if (s + 1) * i - 1 <= n {
                    let g = gen_a_family(n, k, s, i).unwrap();
                    let (a, b) = (nu(&g), tau(&g));
                    if a != s || b < s + 1 {
                        bad.push(format!("A_{i}({n},{k},{s}): nu={a} tau={b}"));
                    }
                }
            }
            let d = gen_clique_family(n, k, s, &VertexSet::range(1, k * (s + 1) - 1)).unwrap();
            let a = nu(&d);
            if a != s {
                bad.push(format!("D({n},{k},{s}): nu={a}"));
            }
            bad
        })
        .collect();
    let detail = match failures.first() {
        None => format!("{} (n,k,s) instances, zero failures", cases.len()),
        Some(f) => format!("{} failures, first {f}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_4() -> Outcome {
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let n = 5 + (seed % 6) as usize;
            let p = 0.1 + 0.4 * ((seed / 6) % 5) as f64 / 4.0;
            let h = Hypergraph::random(n, 3, p, seed).unwrap();
            let base = nu(&h);
            let mut bad = Vec::new();
            for i in 1..n {
                for j in i + 1..=n {
                    let (g, _) = shift_graph(&h, i, j).unwrap();
                    if g.edge_count() != h.edge_count() {
                        bad.push(format!("seed {seed}: ({i},{j}) changed e"));
                    }
                    if nu(&g) > base {
                        bad.push(format!("seed {seed}: ({i},{j}) raised nu"));
                    }
                }
            }
            let (g, trace) = stabilize(&h);
            let mut pot = trace.potential_start;
            let mut cur = h.clone();
            for step in &trace.steps {
                let (next, moved) = shift_graph(&cur, step.i, step.j).unwrap();
                let p = potential(&next);
                if moved != step.moved || (moved > 0 && p >= pot) || (moved == 0 && p != pot) {
                    bad.push(format!("seed {seed}: potential did not drop at ({},{})", step.i, step.j));
                }
                pot = p;
                cur = next;
            }
            if cur != g || !is_stable(&g) || g.edge_count() != h.edge_count() {
                bad.push(format!("seed {seed}: stabilize did not reach a fixpoint"));
            }
            for x in [&h, &g] {
                if is_stable(x) != downset_check(x) {
                    bad.push(format!("seed {seed}: is_stable and downset_check disagree"));
                }
            }
            bad
        })
        .collect();
    let detail = match failures.first() {
        None => "1000 graphs, zero counterexamples".to_string(),
        Some(f) => format!("{} counterexamples, first {f}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_5() -> Outcome {
    let rational: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|seed| {
            let n = 3 + (seed % 6) as usize;
            let h = Hypergraph::random(n, 3, 0.2 + 0.6 * (seed % 7) as f64 / 6.0, seed).unwrap();
            let nu_star = nu_frac::<BigRational>(&h).unwrap().value;
            let tau_star = tau_frac::<BigRational>(&h).unwrap().value;
            let (a, b) = (BigRational::from_integer(nu(&h).into()), BigRational::from_integer(tau(&h).into()));
            let ok = nu_star == tau_star && a <= nu_star && nu_star <= b;
            (!ok).then(|| format!("rational seed {seed}: nu*={nu_star} tau*={tau_star}"))
        })
        .collect();
    let mut worst_gap = 0f64;
    let float: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|seed| {
            let n = 9 + (seed % 22) as usize;
            // about 2n edges keeps the exact cover search quick at n = 30
            let m = (2 * n) as f64;
            let total = (n * (n - 1) * (n - 2) / 6) as f64;
            let h = Hypergraph::random(n, 3, (m / total).min(1.0), seed).unwrap();
            let d = check_duality(&h, LpMode::Float);
            let d = match d {
                Ok(d) => d,
                Err(e) => return Some(format!("float seed {seed}: {e}")),
            };
            let (a, b) = (nu(&h) as f64, tau(&h) as f64);
            let ok = d.gap <= 1e-9 && a <= d.nu_star_approx + 1e-9 && d.nu_star_approx <= b + 1e-9;
            (!ok).then(|| format!("float seed {seed}: gap {} nu*={}", d.gap, d.nu_star_approx))
        })
        .collect();
    for seed in 0..5u64 {
        let h = Hypergraph::random(30, 3, 0.01, seed).unwrap();
        worst_gap = worst_gap.max(check_duality(&h, LpMode::Float).unwrap().gap);
    }
    let failures: Vec<_> = rational.into_iter().chain(float).collect();
    let detail = match failures.first() {
        None => format!("100 rational (n<=8) exact, 100 float (n<=30) within 1e-9, sandwich holds; worst n=30 gap {worst_gap:e}"),
        Some(f) => format!("{} failures, first {f}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_6() -> Outcome {
    let failures: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|seed| {
            let n = 5 + (seed % 5) as usize;
            let h = Hypergraph::random(n, 3, 0.15 + 0.5 * (seed % 4) as f64 / 3.0, seed).unwrap();
            let omega = tau_frac::<BigRational>(&h).unwrap();
            let t = threshold_cover_graph(&h, &omega).unwrap();
            let perm: Vec<usize> = (1..=n).map(|v| t.relabel.to_new(v).unwrap()).collect();
            let relabeled = h.permuted(&perm).unwrap();
            let w: Vec<BigRational> = (1..=n).map(|i| omega.weights[t.relabel.to_old(i) - 1].clone()).collect();
            let one = BigRational::from_integer(1.into());
            let covers = t.graph.edges().iter().all(|e| {
                e.vertices().iter().fold(BigRational::zero(), |acc, &v| acc + &w[v - 1]) >= one
            });
            let same_nu = nu_frac::<BigRational>(&t.graph).unwrap().value == nu_frac::<BigRational>(&h).unwrap().value;
            let ok = relabeled.is_subgraph_of(&t.graph) && covers && same_nu && is_stable(&t.graph);
            (!ok).then(|| format!("seed {seed}"))
        })
        .collect();
    let detail = match failures.first() {
        None => "100 instances: H in H', omega covers H', nu*(H') = nu*(H), H' stable".to_string(),
        Some(f) => format!("{} failures, first {f}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    let f = crossover_f(5.0 / 18.0).unwrap();
    let exact = 65.0 / 8748.0;
    let root = crossover_root();
    let closed = crossover_root_closed_form();
    let n = 2000;
    let table = bound_table(n, full_s_range(n)).unwrap();
    let mut compared = 0;
    let mut disagreements = Vec::new();
    for row in &table.rows {
        let x = row.s as f64 / n as f64;
        if (x - root).abs() < 0.002 {
            continue;
        }
        compared += 1;
        let diff = row.hm.to_f64().unwrap() - row.clique.to_f64().unwrap();
        if (diff > 0.0) != (row.f > 0.0) {
            disagreements.push(row.s);
        }
    }
    let pass = f > 0.007 && (f - exact).abs() < 1e-6 && (root - closed).abs() < 1e-10 && disagreements.is_empty();
    outcome(
        pass,
        format!(
            "f(5/18)={f:.9} root={root:.12} closed={closed:.12}; n=2000 signs agree on {compared} rows, {} disagree",
            disagreements.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let cells: Vec<(usize, usize)> = (9..=30).flat_map(|n| (2..=10).map(move |t| (n, t))).collect();
    let results: Vec<(usize, usize, Result<(), String>)> = cells
        .par_iter()
        .map(|&(n, t)| {
            let h = Hypergraph::complete(n, 3).unwrap();
            let fam = extract_fpm_family(&h, t, &FpmOptions::default()).unwrap();
            let check = || -> Result<(), String> {
                if !fam.is_complete() {
                    return Err(format!("stopped after {} members", fam.t()));
                }
                fam.verify().map_err(|e| e.to_string())?;
                if fam.loads.max() >= 2.0 {
                    return Err(format!("pair load {}", fam.loads.max()));
                }
                let heavy = fam.loads.max_heavy_per_vertex(1.0);
                if heavy > 2 * t {
                    return Err(format!("{heavy} heavy pairs at one vertex"));
                }
                let f = mix_and_halve(&fam).map_err(|e| e.to_string())?;
                if f.vertex_loads(&h).iter().any(|s| (s - t as f64 / 2.0).abs() > 1e-9) {
                    return Err("mixed vertex sums off".into());
                }
                Ok(())
            };
            (n, t, check())
        })
        .collect();
    let failed: Vec<String> =
        results.iter().filter_map(|(n, t, r)| r.as_ref().err().map(|e| format!("(n={n},t={t}: {e})"))).collect();

    // Monte-Carlo on the t = 20 family over [30]
    let h = Hypergraph::complete(30, 3).unwrap();
    let fam = extract_fpm_family(&h, 20, &FpmOptions::default()).unwrap();
    let mc = if fam.is_complete() {
        let f = mix_and_halve(&fam).unwrap();
        let runs: Vec<(usize, f64, usize, f64, usize)> = (0..100u64)
            .into_par_iter()
            .map(|seed| {
                let s = sample_binomial_subgraph(&h, &f, seed, &Windows::default()).unwrap();
                let m = near_perfect_matching(s.graph(), &NpmOptions::default(), seed);
                m.validate(&h).unwrap();
                (s.degree_violations, s.degree_bound, s.pair_violations, s.pair_bound, 3 * m.len())
            })
            .collect();
        let deg: usize = runs.iter().map(|r| r.0).sum();
        let deg_allowed: f64 = runs.iter().map(|r| r.1 * 30.0).sum();
        let pair: usize = runs.iter().map(|r| r.2).sum();
        let pair_allowed: f64 = runs.iter().map(|r| r.3 * 435.0).sum();
        let good = runs.iter().filter(|r| r.4 * 10 >= 8 * 30).count();
        let ok = deg as f64 <= deg_allowed && pair as f64 <= pair_allowed && good >= 90;
        (ok, format!("MC: degree violations {deg} <= {deg_allowed:.1}, pair {pair} <= {pair_allowed:.3}, >=80% coverage on {good}/100 seeds"))
    } else {
        (false, format!("MC: t=20 family on [30] stopped after {} members", fam.t()))
    };
    let detail = format!(
        "{}/{} (n,t) cells succeed{}; {}",
        cells.len() - failed.len(),
        cells.len(),
        if failed.is_empty() { String::new() } else { format!(", failing {}", failed.join(" ")) },
        mc.1
    );
    outcome(failed.is_empty() && mc.0, detail)
}

fn criterion_9() -> Outcome {
    let k12 = Hypergraph::complete(12, 3).unwrap();
    let a = pipeline(&k12, 3, default_t(12), 0, &PipelineOptions::default()).unwrap();
    let cover = gen_cover_family(12, 3, 2, &VertexSet::new([1, 2])).unwrap();
    let b = pipeline(&cover, 2, default_t(12), 0, &PipelineOptions::default()).unwrap();
    let nu_cover = nu(&cover);
    let pass = a.success && a.matching.len() == 4 && !b.success && b.matching.len() <= 2 && nu_cover == 2;
    outcome(
        pass,
        format!(
            "K12 s=3: matching {}; cover(12,3,2) s=2: matching {} (stalled at {:?}), exact nu = {nu_cover}",
            a.matching.len(),
            b.matching.len(),
            b.stalled_at
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("extremal value at (6,3,1)", criterion_1),
        ("construction counts", criterion_2),
        ("construction invariants", criterion_3),
        ("shifting suite", criterion_4),
        ("LP duality", criterion_5),
        ("threshold cover graph", criterion_6),
        ("crossover numerics", criterion_7),
        ("rounding properties", criterion_8),
        ("pipeline sanity", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {} ({name}): {} [{:.1?}]", i + 1, o.detail, start.elapsed());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
