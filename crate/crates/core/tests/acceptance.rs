//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any criterion failed.

use std::process::Command;
use std::time::Instant;

use bcgauge::battery::{self, BatteryConfig, CheckRecord, Status};
use bcgauge::gauge;
use bcgauge::sampling::{self, derive_seed, stream_rng, ScalarStratum};
use bcgauge::sets::{BodyRep, SetRep};
use bcgauge::{Bicomplex, Hyperbolic};

const SEED: u64 = 20_240_601;

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn record_ok(r: &CheckRecord) -> bool {
    r.status == Status::Pass
}

fn config(samples: usize) -> BatteryConfig {
    BatteryConfig { seed: SEED, samples, ..Default::default() }
}

/// Component magnitudes of the product, from the idempotent parts directly.
fn knorm_of_product_oracle(z: Bicomplex, w: Bicomplex) -> (f64, f64) {
    let (z1, z2) = z.idempotent();
    let (w1, w2) = w.idempotent();
    ((z1 * w1).norm(), (z2 * w2).norm())
}

fn componentwise_rel(got: Hyperbolic, want: (f64, f64)) -> f64 {
    let scale = want.0.max(want.1);
    [(got.a1(), want.0), (got.a2(), want.1)]
        .iter()
        .map(|&(g, w)| {
            if w > 0.0 {
                (g - w).abs() / w
            } else if scale > 0.0 {
                // a null-cone component: measured against the other one
                g.abs() / scale
            } else {
                g.abs()
            }
        })
        .fold(0.0, f64::max)
}

fn criterion_1() -> Line {
    const PAIRS: usize = 100_000;
    let start = Instant::now();
    let mut worst = [0.0f64; 4];
    for i in 0..PAIRS {
        let mut rng = stream_rng(derive_seed(SEED, "acceptance.scalar"), i as u64);
        let z = sampling::stratified_scalar(&mut rng, ScalarStratum::for_index(i));
        let w = sampling::stratified_scalar(&mut rng, ScalarStratum::for_index(i / 3));
        // multiplicativity, componentwise
        worst[0] = worst[0].max(componentwise_rel((z * w).knorm(), knorm_of_product_oracle(z, w)));
        // √2 submultiplicativity
        let bound = std::f64::consts::SQRT_2 * z.euclid_norm() * w.euclid_norm();
        if bound > 0.0 {
            worst[1] = worst[1].max(((z * w).euclid_norm() - bound) / bound);
        }
        // magnitude identity: ||Z|_k| = |Z|, with |h| = sqrt((a1² + a2²)/2) for h in D
        let k = z.knorm();
        let mag = ((k.a1() * k.a1() + k.a2() * k.a2()) / 2.0).sqrt();
        let [a, b, c, d] = z.parts();
        let euclid = (a * a + b * b + c * c + d * d).sqrt();
        if euclid > 0.0 {
            worst[2] = worst[2].max((mag - euclid).abs() / euclid);
        }
        // round trip through the idempotent representation
        let (z1, z2) = z.idempotent();
        let back = Bicomplex::from_idempotent(z1, z2).expect("finite");
        let diff = back.parts().iter().zip(z.parts()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        if euclid > 0.0 {
            worst[3] = worst[3].max(diff / euclid);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst[0] <= 1e-12 && worst[1] <= 1e-12 && worst[2] <= 1e-12 && worst[3] <= 1e-15 && secs < 5.0;
    Line {
        id: 1,
        name: "scalar algebra battery (1e5 pairs)",
        pass,
        detail: format!(
            "knorm mul {:.2e}, submul slack {:.2e}, magnitude {:.2e}, round trip {:.2e}, {secs:.2}s",
            worst[0], worst[1], worst[2], worst[3]
        ),
    }
}

fn kind_name(b: &BodyRep) -> &'static str {
    match b {
        BodyRep::Ball { .. } => "ball",
        BodyRep::ModSlab { .. } => "slab",
        BodyRep::Intersection { .. } => "intersection",
    }
}

fn criterion_2() -> Line {
    let start = Instant::now();
    let seed = derive_seed(SEED, "acceptance.oracle");
    let sets = battery::random_structural_sets(seed, 2, battery::ORACLE_SETS);
    let mut kinds = std::collections::BTreeSet::new();
    let mut worst = 0.0f64;
    let mut violations = 0;
    let mut compared = 0;
    for (k, s) in sets.iter().enumerate() {
        match s {
            SetRep::IdempotentPair { b1, b2, .. } => {
                kinds.insert("pair");
                kinds.insert(kind_name(b1));
                kinds.insert(kind_name(b2));
            }
            SetRep::KnormBall { .. } => {
                kinds.insert("knorm_ball");
            }
            SetRep::Raw { .. } => unreachable!("structural sets only"),
        }
        for i in 0..battery::ORACLE_POINTS {
            let mut rng = stream_rng(derive_seed(seed, &k.to_string()), i as u64);
            let x = sampling::vector(&mut rng, 2);
            let closed = gauge::gauge(s, &x).expect("absorbing").value;
            let bisect = gauge::gauge_bisect(s, &x, 1e-8).expect("absorbing").value;
            let d = (closed.a1() - bisect.a1()).abs().max((closed.a2() - bisect.a2()).abs());
            worst = worst.max(d);
            compared += 1;
            if d > 1e-8 + 1e-12 {
                violations += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let covered = ["ball", "slab", "intersection", "pair"].iter().all(|k| kinds.contains(k));
    Line {
        id: 2,
        name: "gauge closed form vs bisection (200 x 10)",
        pass: violations == 0 && compared == 2000 && covered && secs < 30.0,
        detail: format!("{compared} comparisons, {violations} violations, max diff {worst:.2e}, kinds {kinds:?}, {secs:.2}s"),
    }
}

fn structural_sets() -> Vec<SetRep> {
    let mut sets = battery::sample_structural_sets(2);
    sets.extend(battery::random_structural_sets(derive_seed(SEED, "acceptance.sets"), 2, 5));
    sets
}

fn criterion_3() -> Line {
    let mut violations = 0;
    let mut samples = 0;
    let mut worst = 0.0f64;
    for (k, s) in structural_sets().iter().enumerate() {
        let c = gauge::gauge_seminorm_check(s, 10_000, derive_seed(SEED, &format!("c3/{k}")), 2, 1e-9, 1e-12)
            .expect("structural set");
        violations += c.violations;
        samples += c.samples_run;
        worst = worst.max(c.max_violation.unwrap_or(0.0));
    }
    Line {
        id: 3,
        name: "gauge is a D-seminorm (1e4 per set)",
        pass: violations == 0,
        detail: format!("{samples} samples, {violations} violations, max homogeneity residual {worst:.2e}"),
    }
}

fn criterion_4() -> Line {
    use bcgauge::sets::Openness;
    let mut violations = 0;
    let mut samples = 0;
    let mut witness = None;
    for (k, s) in structural_sets().iter().enumerate() {
        for o in [Openness::Open, Openness::Closed] {
            let v = s.with_openness(o).expect("structural set");
            let c = gauge::gauge_chain_check(&v, 10_000, derive_seed(SEED, &format!("c4/{k}/{o:?}")), 2, 1e-9)
                .expect("structural set");
            violations += c.violations;
            samples += c.samples_run;
            witness = witness.or(c.witness);
        }
    }
    Line {
        id: 4,
        name: "gauge inclusion chain, open and closed",
        pass: violations == 0,
        detail: format!("{samples} samples, {violations} violations{}", witness.map(|w| format!(", witness {w:?}")).unwrap_or_default()),
    }
}

fn checks(id: usize, name: &'static str, ids: &[&str], samples: usize) -> Line {
    let c = config(samples);
    let records: Vec<CheckRecord> = ids.iter().map(|i| battery::run_check(&c, i).expect("known check")).collect();
    let failed: Vec<String> = records.iter().filter(|r| !record_ok(r)).map(|r| format!("{} {:?}", r.check_id, r.witness)).collect();
    let samples_run: usize = records.iter().map(|r| r.samples_run).sum();
    Line {
        id,
        name,
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks, {samples_run} samples", records.len())
        } else {
            format!("failed: {}", failed.join("; "))
        },
    }
}

fn criterion_5() -> Line {
    let c = config(10_000);
    let convex = battery::run_check(&c, "sets.cross_sum_lt_2.not_bc_convex").unwrap();
    let absorbing = battery::run_check(&c, "sets.kball_half_union_one.absorbing").unwrap();
    let projection = battery::run_check(&c, "sets.kball_half_union_one.e1_projection_escapes").unwrap();
    // x = e1·3/2 and y = e2·3/2 in the first coordinate, λ = e1
    let half = 0.75;
    let expect_convex = serde_json::json!({
        "kind": "convex",
        "lambda": { "e1": 1.0, "e2": 0.0 },
        "x": { "dim": 2, "entries": [ { "w1": [half, 0.0], "w2": [0.0, half] }, { "w1": [0.0, 0.0], "w2": [0.0, 0.0] } ] },
        "y": { "dim": 2, "entries": [ { "w1": [half, 0.0], "w2": [0.0, -half] }, { "w1": [0.0, 0.0], "w2": [0.0, 0.0] } ] },
    });
    let convex_ok = record_ok(&convex) && convex.witness.as_ref() == Some(&expect_convex);
    let projection_ok = record_ok(&projection)
        && projection.witness.as_ref().and_then(|w| w.get("component")).and_then(|c| c.as_u64()) == Some(1);
    Line {
        id: 5,
        name: "counterexample witnesses",
        pass: convex_ok && record_ok(&absorbing) && projection_ok,
        detail: format!(
            "not convex: {convex_ok}, absorbing: {}, e1B not in B: {projection_ok}; witnesses {} / {}",
            record_ok(&absorbing),
            convex.witness.map(|w| w.to_string()).unwrap_or_default(),
            projection.witness.map(|w| w.to_string()).unwrap_or_default()
        ),
    }
}

fn criterion_7() -> Line {
    checks(
        7,
        "D-metric battery (N=64, knorm limit at N=30)",
        &["metric.axioms", "metric.translation_invariant", "metric.partial_sums", "metric.knorm_limit"],
        10_000,
    )
}

fn strip_elapsed(report: &str) -> String {
    report
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).expect("json line");
            if let Some(o) = v.as_object_mut() {
                o.remove("elapsed_ms");
            }
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn criterion_10() -> Line {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_bcgauge"))
            .args(["check", "--suite", "all", "--seed", "7", "--samples", "1000"])
            .output()
            .expect("binary runs");
        (out.status.code(), String::from_utf8(out.stdout).expect("utf-8"))
    };
    let (c1, a) = run();
    let (c2, b) = run();
    let same = strip_elapsed(&a) == strip_elapsed(&b);
    let lines = a.lines().count();
    Line {
        id: 10,
        name: "deterministic report bodies",
        pass: same && c1 == Some(0) && c2 == Some(0) && lines == battery::check_ids(battery::Suite::All).len() + 1,
        detail: format!("{lines} lines, identical bodies: {same}, exit codes {c1:?}/{c2:?}"),
    }
}

fn main() {
    let lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        checks(6, "unit sets of every seminorm variant", &["seminorm.unit_sets"], 10_000),
        criterion_7(),
        checks(8, "metric/seminorm topology compatibility", &["metric.topology_compat"], 10_000),
        checks(9, "kernel submodule", &["seminorm.kernel_submodule"], 10_000),
        criterion_10(),
    ];
    let mut failed = 0;
    for l in &lines {
        println!("criterion {:>2} {} {} ({})", l.id, if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
        failed += usize::from(!l.pass);
    }
    println!("{}/{} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
