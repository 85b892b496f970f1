//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported, not asserted, so the process exits 0 unless
//! the suite itself breaks. Run with `cargo test -p mco-harness --test acceptance`.

use std::time::Instant;

use mco_core::cov::{
    differential_move, elite_scores, estimate, gaussian_move, rank_weights, sample_gaussian, shift_center,
    ArchiveEntry, CovModel, EliteArchive,
};
use mco_core::eco::{
    high_school_move, high_student_move, middle_school_move, middle_student_move, omega, primary_school_move,
    primary_student_move, stage_of, Stage,
};
use mco_core::rng::{levy_sigma, logistic_chain, map_chaotic};
use mco_core::{Agent, AlgorithmParams, Draws, FnObjective, Bounds, Optimizer, RngStream, Variant};
use mco_harness::{run_batch, save, BatchSpec, ResultSet};
use mco_problems::engineering::reference_value;
use mco_problems::{desk_suite, make_benchmark, make_engineering, EngineeringId, Family, TransformSpec};
use mco_stats::{
    friedman, kruskal_wallis, rank_sum_p, versus, wilcoxon_rank_sum, RankSumMethod, ResultMatrix, Summarizer,
    Verdict,
};
use nalgebra::DMatrix;

struct Outcome {
    id: u32,
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(id: u32, pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self {
            id,
            pass,
            summary: summary.into(),
            details,
        }
    }
}

fn desk_batch(jobs: usize) -> BatchSpec {
    BatchSpec {
        fes_max: Some(30_000),
        jobs,
        ..BatchSpec::new(Variant::ALL.to_vec(), desk_suite(10, 1).expect("desk suite"), 10, 7)
    }
}

fn ablation(set: &ResultSet) -> (Outcome, Outcome) {
    let m = set.to_matrix().expect("rectangular");
    let f = friedman(&m, Summarizer::Mean).expect("friedman");
    let rank = |name: &str| f.mean_ranks[f.algorithms.iter().position(|a| a == name).expect("algorithm")];
    let eco = rank("ECO");
    let mut details = vec![format!(
        "mean ranks: {} (chi-square {:.3}, p {:.3e})",
        f.algorithms
            .iter()
            .zip(&f.mean_ranks)
            .map(|(a, r)| format!("{a} {r:.2}"))
            .collect::<Vec<_>>()
            .join(", "),
        f.statistic,
        f.p_value
    )];
    let mut behind = Vec::new();
    for v in ["IECO-MCO", "GECO", "SECO", "DECO"] {
        if rank(v) >= eco {
            behind.push(v);
        }
    }
    if !behind.is_empty() {
        details.push(format!("not ahead of ECO: {}", behind.join(", ")));
    }
    let c1 = Outcome::new(
        1,
        behind.is_empty(),
        format!("ablation ranks, IECO-MCO {:.2} vs ECO {eco:.2}", rank("IECO-MCO")),
        details,
    );

    let rows = versus(&m, "ECO", 0.05).expect("wilcoxon");
    let ieco = rows.iter().find(|r| r.algorithm == "IECO-MCO").expect("IECO-MCO row");
    let c2 = Outcome::new(
        2,
        ieco.better > ieco.worse,
        format!("IECO-MCO vs ECO +/=/- = {}", ieco.triple()),
        rows.iter().map(|r| format!("{} vs ECO {}", r.algorithm, r.triple())).collect(),
    );
    (c1, c2)
}

fn engineering() -> (Outcome, ResultSet) {
    let problems: Vec<_> = EngineeringId::ALL.iter().map(|id| make_engineering(*id)).collect();
    let spec = BatchSpec::new(vec![Variant::IecoMco], problems, 30, 11);
    let set = run_batch(&spec).expect("engineering batch");
    let mut pass = true;
    let mut details = Vec::new();
    for (p, id) in EngineeringId::ALL.iter().enumerate() {
        let runs = set.cell(0, p);
        let feasible: Vec<_> = runs.iter().filter(|r| r.feasible).collect();
        let best = feasible.iter().map(|r| r.best_fitness).fold(f64::INFINITY, f64::min);
        let mean = feasible.iter().map(|r| r.best_fitness).sum::<f64>() / feasible.len().max(1) as f64;
        let published = id.published_best();
        let (check, ok) = match id {
            EngineeringId::Rw01 => ("best <= 1.2794e-2".to_string(), best <= 1.2794e-2),
            EngineeringId::Rw03 => ("|best - 263.89| <= 0.01".into(), (best - 263.89).abs() <= 0.01),
            EngineeringId::Rw05 => ("within 0.1% of 2993.6".into(), (best - 2993.6).abs() <= 1e-3 * 2993.6),
            EngineeringId::Rw06 => ("best <= 1e-9".into(), best <= 1e-9),
            EngineeringId::Rw08 => ("within 0.1% of 1.3400".into(), (best - 1.34).abs() <= 1e-3 * 1.34),
            _ => ("returned best feasible".into(), runs.iter().any(|r| r.feasible)),
        };
        pass &= ok;
        details.push(format!(
            "{} {}: best {best:.6e} mean {mean:.6e} feasible {}/{} | published {published:.5e} (gap {:+.3e}) | \
             formulation reference {:.6e} | {check}: {}",
            id.name(),
            id.title(),
            feasible.len(),
            runs.len(),
            best - published,
            reference_value(*id),
            if ok { "ok" } else { "MISS" }
        ));
    }
    (
        Outcome::new(3, pass, "engineering targets over 30 runs at 3000*D", details),
        set,
    )
}

fn brute_estimate(entries: &[(Vec<f64>, f64)]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = entries.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| entries[a].1.total_cmp(&entries[b].1));
    let denom: f64 = (1..=m).map(|j| ((m as f64 + 1.0) / j as f64).ln()).sum();
    let d = entries[0].0.len();
    let mut mean = vec![0.0; d];
    for (rank, &i) in order.iter().enumerate() {
        let w = ((m as f64 + 1.0) / (rank + 1) as f64).ln() / denom;
        for k in 0..d {
            mean[k] += w * entries[i].0[k];
        }
    }
    let mut c = vec![vec![0.0; d]; d];
    for (x, _) in entries {
        for r in 0..d {
            for s in 0..d {
                c[r][s] += (x[r] - mean[r]) * (x[s] - mean[s]);
            }
        }
    }
    for row in &mut c {
        for v in row {
            *v /= m as f64;
        }
    }
    (mean, c)
}

fn covariance_oracle() -> Outcome {
    let mut rng = RngStream::new(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = 2 + rng.index(49);
        let d = 1 + rng.index(10);
        let entries: Vec<(Vec<f64>, f64)> = (0..m)
            .map(|_| {
                let x = (0..d).map(|_| 20.0 * rng.uniform() - 10.0).collect();
                (x, 100.0 * rng.uniform())
            })
            .collect();
        let mut archive = EliteArchive::new(m);
        archive
            .push(entries.iter().map(|(x, f)| ArchiveEntry {
                position: x.clone(),
                fitness: *f,
            }))
            .expect("push");
        let model = estimate(&archive).expect("estimate");
        let (mean, c) = brute_estimate(&entries);
        for k in 0..d {
            worst = worst.max((model.mean_better[k] - mean[k]).abs());
            for l in 0..d {
                worst = worst.max((model.cov[(k, l)] - c[k][l]).abs());
            }
        }
    }
    let mut sampling = Vec::new();
    let mut worst_rel = 0.0f64;
    for (d, seed) in [(2usize, 1u64), (5, 2), (10, 3)] {
        let mut g = RngStream::new(seed);
        let a = DMatrix::from_fn(d, d, |_, _| g.normal());
        let cov = &a * a.transpose() + DMatrix::identity(d, d) * 0.1;
        let mean: Vec<f64> = (0..d).map(|_| g.normal()).collect();
        let model = CovModel::from_parts(mean.clone(), vec![], cov.clone());
        let n = 100_000;
        let mut emp = DMatrix::<f64>::zeros(d, d);
        for _ in 0..n {
            let x = sample_gaussian(&model, &mut g).expect("sample");
            for r in 0..d {
                for s in 0..d {
                    emp[(r, s)] += (x[r] - mean[r]) * (x[s] - mean[s]);
                }
            }
        }
        emp /= n as f64;
        let rel = (&emp - &cov).norm() / cov.norm();
        worst_rel = worst_rel.max(rel);
        sampling.push(format!("D={d}: relative Frobenius error {rel:.4}"));
    }
    let pass = worst <= 1e-12 && worst_rel <= 0.05;
    let mut details = vec![format!("1000 archives (m <= 50, D <= 10): max abs deviation {worst:.3e}")];
    details.extend(sampling);
    Outcome::new(
        4,
        pass,
        format!("estimate vs brute force {worst:.1e}; sampling error {worst_rel:.4}"),
        details,
    )
}

fn stats_oracles() -> Outcome {
    let mut details = Vec::new();
    let values: Vec<Vec<Vec<f64>>> = (0..4)
        .map(|p| (0..3).map(|a| vec![(a + 1) as f64 * 10.0 + p as f64]).collect())
        .collect();
    let m = ResultMatrix::new(
        (0..4).map(|p| format!("p{p}")).collect(),
        vec!["A".into(), "B".into(), "C".into()],
        values,
    )
    .expect("matrix");
    let f = friedman(&m, Summarizer::Mean).expect("friedman");
    let friedman_ok = f.mean_ranks == vec![1.0, 2.0, 3.0]
        && (f.statistic - 8.0).abs() <= 1e-6
        && (f.p_value - 0.01832).abs() <= 1e-5
        && (f.p_value - (-4.0f64).exp()).abs() <= 1e-6;
    details.push(format!("Friedman k=3 n=4: chi-square {} p {:.8}", f.statistic, f.p_value));

    let w = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], 0.05).expect("wilcoxon");
    let wilcoxon_ok = w.exact && w.p_value == 0.1 && w.verdict == Verdict::Similar;
    details.push(format!("Wilcoxon {{1,2,3}} vs {{4,5,6}}: exact p {}", w.p_value));

    let g = [2.0, 5.0, 7.0];
    let k = kruskal_wallis(&[&g, &g, &g]).expect("kruskal");
    let kw_ok = k.statistic == 0.0 && k.p_value == 1.0;
    let k2 = kruskal_wallis(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]).expect("kruskal");
    let kw2_ok = (k2.statistic - 32.0 / 7.0).abs() <= 1e-12;
    details.push(format!(
        "Kruskal-Wallis identical groups: H {} p {}; {{1,2}},{{3,4}},{{5,6}}: H {:.6}",
        k.statistic, k.p_value, k2.statistic
    ));

    let mut rng = RngStream::new(99);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let a: Vec<f64> = (0..6).map(|_| rng.uniform()).collect();
        let b: Vec<f64> = (0..6).map(|_| rng.uniform() + 0.3 * rng.uniform()).collect();
        let exact = rank_sum_p(&a, &b, RankSumMethod::Exact).expect("exact");
        let normal = rank_sum_p(&a, &b, RankSumMethod::Normal).expect("normal");
        worst = worst.max((exact - normal).abs());
    }
    let cross_ok = worst <= 0.05;
    details.push(format!("exact vs normal at 6+6, 500 samples: max |dp| {worst:.4}"));
    Outcome::new(
        5,
        friedman_ok && wilcoxon_ok && kw_ok && kw2_ok && cross_ok,
        "Friedman, Wilcoxon, Kruskal-Wallis oracles and exact/normal cross-check",
        details,
    )
}

fn properties(desk: &ResultSet, eng: &ResultSet) -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut budget_ok = true;
    let mut trace_ok = true;
    let mut checked = 0;
    for set in [desk, eng] {
        for r in set.records() {
            checked += 1;
            budget_ok &= r.evaluations_used <= r.fes_max;
            trace_ok &= r.trace.windows(2).all(|w| w[1].1 <= w[0].1);
            trace_ok &= r.trace.last().map(|t| t.1) == Some(r.best_fitness);
        }
    }
    details.push(format!("{checked} recorded runs: budget respected {budget_ok}, traces non-increasing {trace_ok}"));

    let small = |jobs| BatchSpec {
        fes_max: Some(3000),
        jobs,
        ..BatchSpec::new(Variant::ALL.to_vec(), desk_suite(10, 1).expect("desk"), 3, 21)
    };
    let serial = run_batch(&small(1)).expect("serial");
    let parallel = run_batch(&small(0)).expect("parallel");
    let again = run_batch(&small(4)).expect("parallel again");
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().expect("tempdir")).collect();
    for (set, dir) in [&serial, &parallel, &again].into_iter().zip(&dirs) {
        save(set, dir.path()).expect("save");
    }
    let bytes = |dir: &std::path::Path| -> Vec<(String, Vec<u8>)> {
        let mut out = Vec::new();
        for name in ["manifest.json", "results.csv", "positions.csv", "summary.csv"] {
            out.push((name.to_string(), std::fs::read(dir.join(name)).expect("read")));
        }
        let mut traces: Vec<_> = std::fs::read_dir(dir.join("traces"))
            .expect("traces")
            .map(|e| e.expect("entry").path())
            .collect();
        traces.sort();
        for t in traces {
            out.push((t.display().to_string().rsplit('/').next().unwrap_or("").to_string(), std::fs::read(&t).expect("trace")));
        }
        out
    };
    let reference = bytes(dirs[0].path());
    let identical = dirs[1..].iter().all(|d| bytes(d.path()) == reference) && serial.same_outcome(&parallel);
    details.push(format!(
        "serial vs parallel ({} runs, persisted byte-for-byte): identical {identical}",
        serial.len()
    ));
    for set in [&serial, &parallel] {
        for r in set.records() {
            budget_ok &= r.evaluations_used <= r.fes_max;
            trace_ok &= r.trace.windows(2).all(|w| w[1].1 <= w[0].1);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    details.push(format!("property checks took {elapsed:.1} s"));
    Outcome::new(
        6,
        budget_ok && trace_ok && identical && elapsed < 120.0,
        "budget, determinism and trace properties",
        details,
    )
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn equation_examples() -> Outcome {
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let c = logistic_chain(4.0, 0.3, 1).expect("chain");
    checks.push(("logistic 4*0.3*0.7", close(c[0], 0.84, 1e-12)));
    let c = logistic_chain(4.0, 0.84, 1).expect("chain");
    checks.push(("logistic 4*0.84*0.16", close(c[0], 0.5376, 1e-12)));
    checks.push(("chaotic map to [-100,100]", close(map_chaotic(0.84, -100.0, 100.0), 68.0, 1e-12)));
    checks.push(("Levy sigma beta=1.5", close(levy_sigma(1.5).expect("sigma"), 0.696575, 1e-6)));
    checks.push(("omega at fes=0", close(omega(0, 100).expect("omega"), 0.1 * 2f64.ln(), 1e-15)));
    checks.push(("omega at half budget", close(omega(50, 100).expect("omega"), 0.0405465, 1e-7)));
    checks.push(("iteration 3 is high school", stage_of(3) == Stage::High));
    checks.push(("primary school move", close(primary_school_move(&[2.0], &[4.0], 0.05, &[1.2])[0], 2.12, 1e-12)));
    checks.push(("primary student move", close(primary_student_move(&[3.0], &[0.0], 0.06, -1.0)[0], 3.18, 1e-12)));
    checks.push((
        "middle school move",
        close(middle_school_move(&[1.0], &[5.0], &[3.0], 0.5, &[0.5])[0], 1.0 + (-0.5f64).exp(), 1e-12),
    ));
    checks.push(("middle student move", close(middle_student_move(&[2.0], &[1.0], 0.05, 1.0, 1.0)[0], 3.9, 1e-12)));
    checks.push((
        "high school move",
        close(high_school_move(&[0.0], &[2.0], &[1.0], &[5.0], 1.0, 0.5)[0], -1.0, 1e-12),
    ));
    checks.push(("high student move", close(high_student_move(&[1.0], &[3.0], 0.5, 1.0)[0], 0.0, 1e-12)));

    let sphere = FnObjective::new(Bounds::uniform(2, -5.0, 5.0).expect("bounds"), |x: &[f64]| {
        x.iter().map(|v| v * v).sum()
    });
    let mut opt = Optimizer::new(&sphere, AlgorithmParams::defaults(Variant::Eco, 2), 6, 10_000, RngStream::new(1))
        .expect("optimizer");
    for _ in 0..3 {
        opt.step().expect("step");
    }
    checks.push(("ECO D=2 N=6 three iterations use 24 FEs", opt.fes() == 24));

    let agents: Vec<Agent> = [(0.0, 0.0), (4.0, 1.0), (-2.0, 2.0)]
        .iter()
        .map(|(x, f)| Agent::new(vec![*x], *f))
        .collect();
    let scores: Vec<f64> = elite_scores(&agents, &[0.0], 0.5).iter().map(|s| s.combined).collect();
    checks.push(("elite scores (0.5, 0.75, 0.25)", scores == vec![0.5, 0.75, 0.25]));

    let mut archive = EliteArchive::new(3);
    let entry = |v: f64| ArchiveEntry {
        position: vec![v],
        fitness: v,
    };
    archive.push([entry(1.0), entry(2.0), entry(3.0)]).expect("push");
    archive.push([entry(4.0)]).expect("push");
    let kept: Vec<f64> = archive.entries().map(|e| e.position[0]).collect();
    checks.push(("FIFO archive evicts the oldest", kept == vec![2.0, 3.0, 4.0]));

    let mut two = EliteArchive::new(2);
    two.push([entry(3.0), entry(1.0)]).expect("push");
    let model = estimate(&two).expect("estimate");
    let w = rank_weights(2);
    checks.push((
        "two-entry model (digits of the stated example at 1e-4)",
        close(w[0], 0.73045, 1e-4)
            && close(model.mean_better[0], 1.53910, 1e-4)
            && close(model.cov[(0, 0)], 1.21232, 1e-4),
    ));
    checks.push(("Gaussian operator 2.5 + 0.5*2", gaussian_move(&[2.5], &[2.0], &[0.0], 0.5) == vec![3.5]));
    checks.push((
        "shift operator reaches 6",
        gaussian_move(&shift_center(&[3.0], &[6.0], &[0.0]), &[3.0], &[0.0], 1.0) == vec![6.0],
    ));
    checks.push((
        "differential operator gives 1.0",
        close(differential_move(&[1.0], &[4.0], &[2.0], &[0.0], &[5.0], 0.5, 0.2)[0], 1.0, 1e-15),
    ));
    let mut tape = RngStream::new(5);
    let zero = CovModel::from_parts(vec![0.0, 0.0], vec![], DMatrix::zeros(2, 2));
    let s = sample_gaussian(&zero, &mut tape).expect("sample");
    checks.push(("zero covariance samples the mean", s.iter().all(|v| v.abs() < 1e-5)));

    let rosen = make_benchmark(Family::Rosenbrock, 2, TransformSpec::identity(2, 0.0)).expect("rosenbrock");
    checks.push(("rosenbrock (1,1) -> 0", rosen.objective(&[1.0, 1.0]) == 0.0));
    checks.push(("rosenbrock (0,0) -> 1", rosen.objective(&[0.0, 0.0]) == 1.0));
    let sphere = make_benchmark(Family::Sphere, 2, TransformSpec::identity(2, 0.0)).expect("sphere");
    checks.push(("sphere optimum", sphere.objective(&[0.0, 0.0]) == 0.0));
    let t = mco_problems::generate_transform(2, 3).with_bias(600.0);
    let shift = t.shift.clone();
    let rastrigin = make_benchmark(Family::Rastrigin, 2, t).expect("rastrigin");
    checks.push(("rastrigin at the shift equals the bias", rastrigin.objective(&shift) == 600.0));
    let truss = make_engineering(EngineeringId::Rw03);
    let reference = truss.reference_point.clone().expect("reference point");
    checks.push(("RW03 reference point feasible", truss.is_feasible(&reference)));
    let targets = [
        (EngineeringId::Rw01, 1.2667e-2),
        (EngineeringId::Rw03, 2.6389e2),
        (EngineeringId::Rw06, 2.7009e-12),
    ];
    checks.push((
        "published targets RW01/RW03/RW06",
        targets
            .iter()
            .all(|(id, v)| make_engineering(*id).known_target.map(|t| t.value) == Some(*v)),
    ));

    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let mut details = vec![format!(
        "{} worked examples re-checked here; the full example set lives in each crate's unit and integration tests",
        checks.len()
    )];
    details.push(
        "corrected examples: Levy sigma at beta=2 is frozen at the formula value and the two-entry model at its closed form"
            .into(),
    );
    if !failed.is_empty() {
        details.push(format!("failed: {}", failed.join(", ")));
    }
    Outcome::new(7, failed.is_empty(), format!("{} equation examples", checks.len()), details)
}

fn main() {
    let start = Instant::now();
    let t = Instant::now();
    let desk = run_batch(&desk_batch(0)).expect("desk batch");
    let desk_secs = t.elapsed().as_secs_f64();
    let (mut c1, c2) = ablation(&desk);
    c1.details.push(format!("5 variants x 12 problems x 10 runs at 30000 FEs took {desk_secs:.1} s"));
    let t = Instant::now();
    let (mut c3, eng) = engineering();
    c3.details.push(format!("took {:.1} s", t.elapsed().as_secs_f64()));
    let outcomes = vec![c1, c2, c3, covariance_oracle(), stats_oracles(), properties(&desk, &eng), equation_examples()];

    println!();
    for o in &outcomes {
        for d in &o.details {
            println!("  [{}] {d}", o.id);
        }
    }
    println!();
    for o in &outcomes {
        println!("criterion {}: {} - {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.summary);
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.1} s",
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
}
