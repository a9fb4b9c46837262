//! Seeded check suites and their JSON-lines reports.
//!
//! Each check in the registry runs a sampled property test with its own seed
//! derived from the run seed and the check id, so reports are reproducible
//! and records always come out in registry order. Checks flagged
//! `expect_witness` encode counterexamples: they pass when the property
//! fails with the expected witness.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{BcError, Result};
use crate::gauge::{self, rel_diff};
use crate::module::{dnorm, ComponentNorm, ModuleVector};
use crate::sampling::{self, derive_seed, stream_rng, ScalarStratum};
use crate::scalar::{d_sup, hyp_cmp, Bicomplex, Component, Conjugation, Hyperbolic, Modulus};
use crate::seminorm::{self, DSeminorm, SeminormFamily};
use crate::sets::{self, BodyKind, BodyRep, Openness, RawPredicate, SampledCheck, SetRep, SlabConstraint, Witness};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatteryConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol_rel: f64,
    pub tol_slack: f64,
    pub bisect_tol: f64,
    pub dimension: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig { seed: 0, samples: 10_000, tol_rel: 1e-12, tol_slack: 1e-9, bisect_tol: 1e-8, dimension: 2 }
    }
}

impl BatteryConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tol", self.tol_rel), ("slack", self.tol_slack), ("bisect-tol", self.bisect_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(BcError::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.samples == 0 {
            return Err(BcError::InvalidArgument("samples must be ≥ 1".into()));
        }
        if self.dimension == 0 {
            return Err(BcError::InvalidArgument("dimension must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Scalar,
    Sets,
    Gauge,
    Seminorm,
    Metric,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub status: Status,
    pub expect_witness: bool,
    pub witness: Option<Value>,
    pub samples_run: usize,
    pub violations: usize,
    pub max_violation: Option<f64>,
    pub elapsed_ms: f64,
}

impl CheckRecord {
    /// The record as JSON with the timing removed.
    pub fn body(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("record serializes");
        v.as_object_mut().expect("object").remove("elapsed_ms");
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub config: BatteryConfig,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// Timing-free record lines; identical for identical seeds and configs.
    pub fn body(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.body().to_string());
            out.push('\n');
        }
        out
    }

    pub fn body_sha256(&self) -> String {
        let digest = Sha256::digest(self.body().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn summary(&self) -> Value {
        let count = |s: Status| self.records.iter().filter(|r| r.status == s).count();
        serde_json::json!({
            "summary": {
                "suite": self.suite,
                "config": self.config,
                "checks": self.records.len(),
                "pass": count(Status::Pass),
                "fail": count(Status::Fail),
                "unsupported": count(Status::Unsupported),
                "body_sha256": self.body_sha256(),
            }
        })
    }

    /// One JSON object per check, then the summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out.push_str(&self.summary().to_string());
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Unsupported => "UNSUPPORTED",
            };
            out.push_str(&format!("{status:<11} {} ({} samples, {} violations", r.check_id, r.samples_run, r.violations));
            if let Some(m) = r.max_violation {
                out.push_str(&format!(", max {m:e}"));
            }
            out.push_str(")\n");
            if r.status != Status::Pass || r.expect_witness {
                if let Some(w) = &r.witness {
                    out.push_str(&format!("            witness: {w}\n"));
                }
            }
        }
        let pass = self.records.iter().filter(|r| r.status == Status::Pass).count();
        out.push_str(&format!("{pass}/{} checks passed; body sha256 {}\n", self.records.len(), self.body_sha256()));
        out
    }
}

/// What a check observed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Whether the tested property held on every sample.
    pub holds: bool,
    pub samples_run: usize,
    pub violations: usize,
    pub witness: Option<Value>,
    pub max_violation: Option<f64>,
    /// For counterexample checks: whether the witness is the expected one.
    pub witness_ok: bool,
}

impl Outcome {
    fn new(c: SampledCheck) -> Self {
        Outcome {
            holds: c.pass,
            samples_run: c.samples_run,
            violations: c.violations,
            witness_ok: c.witness.is_some(),
            witness: c.witness.map(|w| serde_json::to_value(w).expect("witness serializes")),
            max_violation: c.max_violation,
        }
    }

    fn all(checks: Vec<SampledCheck>) -> Self {
        let mut it = checks.into_iter();
        let first = it.next().expect("at least one check");
        Self::new(it.fold(first, SampledCheck::chain))
    }

    /// Marks the outcome as carrying the expected witness iff `expected`
    /// equals it.
    fn expecting(mut self, expected: &Witness) -> Self {
        self.witness_ok = self.witness.as_ref() == Some(&serde_json::to_value(expected).expect("witness serializes"));
        self
    }
}

type Runner = fn(&BatteryConfig, u64) -> Result<Outcome>;

pub struct CheckSpec {
    pub id: &'static str,
    pub suite: Suite,
    pub expect_witness: bool,
    run: Runner,
}

macro_rules! check {
    ($suite:ident, $id:expr, $run:expr) => {
        CheckSpec { id: $id, suite: Suite::$suite, expect_witness: false, run: $run }
    };
    ($suite:ident, $id:expr, $run:expr, expect_witness) => {
        CheckSpec { id: $id, suite: Suite::$suite, expect_witness: true, run: $run }
    };
}

/// Every check, in report order.
pub fn registry() -> Vec<CheckSpec> {
    vec![
        check!(Scalar, "scalar.knorm_multiplicative", |c, s| scalar_pairs(c, s, ScalarProp::KnormMul)),
        check!(Scalar, "scalar.euclid_submultiplicative", |c, s| scalar_pairs(c, s, ScalarProp::EuclidSubmul)),
        check!(Scalar, "scalar.knorm_magnitude", |c, s| scalar_pairs(c, s, ScalarProp::KnormMagnitude)),
        check!(Scalar, "scalar.idempotent_roundtrip", |c, s| scalar_pairs(c, s, ScalarProp::Roundtrip)),
        check!(Scalar, "scalar.ring_laws", |c, s| scalar_pairs(c, s, ScalarProp::Ring)),
        check!(Scalar, "scalar.moduli_match_conjugate_products", |c, s| scalar_pairs(c, s, ScalarProp::Moduli)),
        check!(Scalar, "scalar.inverse", |c, s| scalar_pairs(c, s, ScalarProp::Inverse)),
        check!(Scalar, "scalar.null_cone_not_invertible", |c, s| scalar_pairs(c, s, ScalarProp::NullCone)),
        check!(Scalar, "scalar.knorm_triangle", |c, s| scalar_pairs(c, s, ScalarProp::KnormTriangle)),
        check!(Scalar, "scalar.order_lattice", |c, s| scalar_pairs(c, s, ScalarProp::Order)),
        check!(Sets, "sets.cross_sum_lt_2.not_bc_convex", sets_cross_sum_convex, expect_witness),
        check!(Sets, "sets.cross_sum_lt_2.not_idempotent_sum", sets_cross_sum_sum, expect_witness),
        check!(Sets, "sets.kball_half_union_one.absorbing", sets_kball_absorbing),
        check!(Sets, "sets.kball_half_union_one.e1_projection_escapes", sets_kball_projection, expect_witness),
        check!(Sets, "sets.kball_half_union_one.not_balanced", sets_kball_balanced, expect_witness),
        check!(Sets, "sets.structural.bc_convex", |c, s| structural(c, s, sets::is_bc_convex_sampled)),
        check!(Sets, "sets.structural.bc_balanced", |c, s| structural(c, s, sets::is_bc_balanced_sampled)),
        check!(Sets, "sets.structural.bc_absorbing", |c, s| structural(c, s, |set, n, seed, d| {
            sets::is_bc_absorbing_sampled(set, (n / 10).max(1), seed, d)
        })),
        check!(Sets, "sets.structural.idempotent_sum", |c, s| structural(c, s, sets::idempotent_sum_check)),
        check!(Sets, "sets.structural.idempotent_projections", |c, s| structural(c, s, sets::projection_check)),
        check!(Sets, "sets.structural.interior_closure", sets_interior_closure),
        check!(Sets, "sets.structural.scale_equivalence", sets_scale_equivalence),
        check!(Sets, "sets.intersection.bc_convex", sets_intersection_convex),
        check!(Gauge, "gauge.oracle_agreement", gauge_oracle),
        check!(Gauge, "gauge.is_d_seminorm", gauge_seminorm),
        check!(Gauge, "gauge.chain", gauge_chain),
        check!(Gauge, "gauge.scaling", gauge_scaling),
        check!(Gauge, "gauge.monotone_in_set", gauge_monotone),
        check!(Gauge, "gauge.unit_sets", gauge_unit_sets),
        check!(Gauge, "gauge.bounded_set_norm", gauge_bounded_norm),
        check!(Seminorm, "seminorm.axioms", seminorm_axioms),
        check!(Seminorm, "seminorm.unit_sets", seminorm_unit_sets),
        check!(Seminorm, "seminorm.kernel_submodule", seminorm_kernel),
        check!(Seminorm, "seminorm.gauge_of_unit_ball", seminorm_gauge_unit_ball),
        check!(Seminorm, "seminorm.sup_family_monotone", seminorm_sup_monotone),
        check!(Seminorm, "seminorm.separated_families", seminorm_separated),
        check!(Seminorm, "seminorm.component_abs_not_separated", seminorm_not_separated, expect_witness),
        check!(Seminorm, "seminorm.neighborhood_consistency", seminorm_nbhd),
        check!(Metric, "metric.axioms", metric_axioms),
        check!(Metric, "metric.translation_invariant", metric_translation),
        check!(Metric, "metric.partial_sums", metric_series),
        check!(Metric, "metric.knorm_limit", metric_knorm_limit),
        check!(Metric, "metric.topology_compat", metric_topology),
        check!(Metric, "metric.non_separated_zero_distance", metric_zero_distance, expect_witness),
    ]
}

fn selected(spec: &CheckSpec, suite: Suite) -> bool {
    suite == Suite::All || spec.suite == suite
}

pub fn check_ids(suite: Suite) -> Vec<&'static str> {
    registry().into_iter().filter(|s| selected(s, suite)).map(|s| s.id).collect()
}

fn run_spec(spec: &CheckSpec, config: &BatteryConfig) -> CheckRecord {
    let start = Instant::now();
    let seed = derive_seed(config.seed, spec.id);
    let result = (spec.run)(config, seed);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(o) => {
            let pass = if spec.expect_witness { !o.holds && o.witness_ok } else { o.holds };
            CheckRecord {
                check_id: spec.id.to_string(),
                status: if pass { Status::Pass } else { Status::Fail },
                expect_witness: spec.expect_witness,
                witness: o.witness,
                samples_run: o.samples_run,
                violations: o.violations,
                max_violation: o.max_violation,
                elapsed_ms,
            }
        }
        Err(e) => CheckRecord {
            check_id: spec.id.to_string(),
            status: if matches!(e, BcError::Unsupported(_)) { Status::Unsupported } else { Status::Fail },
            expect_witness: spec.expect_witness,
            witness: Some(serde_json::json!({ "error": e.to_string() })),
            samples_run: 0,
            violations: 0,
            max_violation: None,
            elapsed_ms,
        },
    }
}

pub fn run_suite(config: &BatteryConfig, suite: Suite) -> Result<Report> {
    config.validate()?;
    let records = registry().iter().filter(|s| selected(s, suite)).map(|s| run_spec(s, config)).collect();
    Ok(Report { suite, config: config.clone(), records })
}

/// Runs one check by id.
pub fn run_check(config: &BatteryConfig, id: &str) -> Result<CheckRecord> {
    config.validate()?;
    let reg = registry();
    let spec = reg
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| BcError::InvalidArgument(format!("unknown check {id:?}")))?;
    Ok(run_spec(spec, config))
}

// ---------------------------------------------------------------------------
// scalar suite
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarProp {
    /// `|ZW|_k = |Z|_k·|W|_k`
    KnormMul,
    /// `|ZW| ≤ √2·|Z|·|W|`
    EuclidSubmul,
    /// `||Z|_k| = |Z|`
    KnormMagnitude,
    /// `Z ↦ (z1, z2) ↦ Z`
    Roundtrip,
    /// commutativity, associativity, distributivity
    Ring,
    /// closed-form moduli against `Z·Z^†`
    Moduli,
    /// `Z·Z⁻¹ = 1` for invertible draws
    Inverse,
    /// null-cone draws are flagged and refuse inversion
    NullCone,
    /// `|Z + W|_k ≤' |Z|_k + |W|_k`
    KnormTriangle,
    /// trichotomy of `≤'` and the D-sup bound
    Order,
}

fn bc_rel(a: Bicomplex, b: Bicomplex, scale: f64) -> f64 {
    if scale == 0.0 {
        return if a == b { 0.0 } else { f64::INFINITY };
    }
    (a - b).euclid_norm() / scale
}

/// The relative (or slack) residual of one scalar property at one pair.
pub fn scalar_residual(prop: ScalarProp, z: Bicomplex, w: Bicomplex, u: Bicomplex) -> Result<f64> {
    Ok(match prop {
        ScalarProp::KnormMul => {
            let (got, want) = ((z * w).knorm(), z.knorm() * w.knorm());
            let scale = want.a1().max(want.a2());
            // componentwise; a null-cone component is measured against the other
            [(got.a1(), want.a1()), (got.a2(), want.a2())]
                .iter()
                .map(|&(g, w)| if w > 0.0 { (g - w).abs() / w } else if scale > 0.0 { g.abs() / scale } else { g.abs() })
                .fold(0.0, f64::max)
        }
        ScalarProp::EuclidSubmul => {
            let bound = std::f64::consts::SQRT_2 * z.euclid_norm() * w.euclid_norm();
            if bound == 0.0 {
                (z * w).euclid_norm()
            } else {
                ((z * w).euclid_norm() - bound) / bound
            }
        }
        ScalarProp::KnormMagnitude => {
            let n = z.euclid_norm();
            let m = Bicomplex::from(z.knorm()).euclid_norm();
            if n == 0.0 { m } else { (m - n).abs() / n }
        }
        ScalarProp::Roundtrip => {
            let (z1, z2) = z.idempotent();
            bc_rel(Bicomplex::from_idempotent(z1, z2)?, z, z.euclid_norm())
        }
        ScalarProp::Ring => {
            let s = z.euclid_norm() * w.euclid_norm() * u.euclid_norm().max(1.0);
            let r1 = bc_rel(z * w, w * z, s);
            let r2 = bc_rel((z * w) * u, z * (w * u), s);
            let r3 = bc_rel(z * (w + u), z * w + z * u, z.euclid_norm() * (w.euclid_norm() + u.euclid_norm()));
            r1.max(r2).max(r3)
        }
        ScalarProp::Moduli => {
            let s = z.euclid_norm().powi(2);
            let pairs = [
                (Modulus::ISq, Conjugation::Dag2),
                (Modulus::JSq, Conjugation::Dag1),
                (Modulus::KSq, Conjugation::Dag3),
            ];
            pairs
                .iter()
                .map(|&(m, c)| bc_rel(z.modulus_sq(m), z * z.conj(c), s))
                .fold(0.0, f64::max)
        }
        ScalarProp::Inverse => {
            if !z.is_invertible() {
                return Ok(0.0);
            }
            let inv = z.inverse()?;
            bc_rel(z * inv, Bicomplex::ONE, z.euclid_norm() * inv.euclid_norm())
        }
        ScalarProp::NullCone => {
            let (z1, z2) = z.idempotent();
            let expect_null = (z1.norm() == 0.0) != (z2.norm() == 0.0);
            let ok = if expect_null {
                z.is_null_cone() && matches!(z.inverse(), Err(BcError::NullCone(_)))
            } else {
                z.is_invertible() && z.inverse().is_ok()
            };
            if ok { 0.0 } else { 1.0 }
        }
        ScalarProp::KnormTriangle => {
            let lhs = (z + w).knorm();
            let rhs = z.knorm() + w.knorm();
            let s = rhs.a1().max(rhs.a2());
            if s == 0.0 { 0.0 } else { (lhs.a1() - rhs.a1()).max(lhs.a2() - rhs.a2()) / s }
        }
        ScalarProp::Order => {
            let (a, b) = (z.knorm(), w.knorm() - u.knorm());
            let r = hyp_cmp(&a, &b);
            let rev = hyp_cmp(&b, &a);
            let consistent = r.leq == (a.a1() <= b.a1() && a.a2() <= b.a2())
                && r.lt_strict == (a.a1() < b.a1() && a.a2() < b.a2())
                && (r.leq && rev.leq) == (a == b);
            let sup = d_sup(&[a, b])?;
            let lub = a.leq(&sup) && b.leq(&sup) && (sup.a1() == a.a1() || sup.a1() == b.a1());
            if consistent && lub { 0.0 } else { 1.0 }
        }
    })
}

/// Tolerance each scalar property is held to.
fn scalar_tol(prop: ScalarProp, c: &BatteryConfig) -> f64 {
    match prop {
        ScalarProp::Roundtrip => 1e-15,
        ScalarProp::NullCone | ScalarProp::Order => 0.0,
        _ => c.tol_rel,
    }
}

fn scalar_pairs(c: &BatteryConfig, seed: u64, prop: ScalarProp) -> Result<Outcome> {
    Ok(Outcome::new(scalar_check(prop, c.samples, seed, scalar_tol(prop, c))?))
}

/// Runs one scalar property on `samples` draws; scalars cycle through the
/// invertible and both null-cone strata.
pub fn scalar_check(prop: ScalarProp, samples: usize, seed: u64, tol: f64) -> Result<SampledCheck> {
    use rayon::prelude::*;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let z = sampling::stratified_scalar(&mut rng, ScalarStratum::for_index(i));
            let w = sampling::stratified_scalar(&mut rng, ScalarStratum::for_index(i / 3));
            let u = sampling::bicomplex(&mut rng);
            let r = scalar_residual(prop, z, w, u)?;
            let witness = (r > tol).then(|| Witness::Point {
                x: ModuleVector::new(vec![z, w]).expect("finite"),
                detail: format!("{prop:?} residual {r:e}"),
            });
            Ok((witness, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}

// ---------------------------------------------------------------------------
// sets suite
// ---------------------------------------------------------------------------

fn real(x: f64) -> Bicomplex {
    Bicomplex::real(x).expect("finite")
}

fn first_basis(dim: usize, z: Bicomplex) -> ModuleVector {
    ModuleVector::basis(dim, 0, z).expect("dim ≥ 1")
}

fn ones(dim: usize) -> ModuleVector {
    ModuleVector::splat(dim, Bicomplex::ONE)
}

fn sets_cross_sum_convex(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let s = SetRep::raw(RawPredicate::CrossSumLt2);
    let d = c.dimension;
    let expected = Witness::Convex {
        x: first_basis(d, Bicomplex::E1 * real(1.5)),
        y: first_basis(d, Bicomplex::E2 * real(1.5)),
        lambda: Hyperbolic::E1,
    };
    Ok(Outcome::new(sets::is_bc_convex_sampled(&s, c.samples, seed, d)).expecting(&expected))
}

fn sets_cross_sum_sum(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let s = SetRep::raw(RawPredicate::CrossSumLt2);
    Ok(Outcome::new(sets::idempotent_sum_check(&s, c.samples, seed, c.dimension)))
}

fn sets_kball_absorbing(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let s = SetRep::raw(RawPredicate::KballHalfUnionOne);
    Ok(Outcome::new(sets::is_bc_absorbing_sampled(&s, c.samples, seed, c.dimension)))
}

fn sets_kball_projection(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let s = SetRep::raw(RawPredicate::KballHalfUnionOne);
    let expected = Witness::Projection { x: ones(c.dimension), component: Component::E1 };
    Ok(Outcome::new(sets::projection_check(&s, c.samples, seed, c.dimension)).expecting(&expected))
}

fn sets_kball_balanced(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let s = SetRep::raw(RawPredicate::KballHalfUnionOne);
    let expected = Witness::Balanced { x: ones(c.dimension), lambda: Bicomplex::E1 };
    Ok(Outcome::new(sets::is_bc_balanced_sampled(&s, c.samples, seed, c.dimension)).expecting(&expected))
}

fn unit_slab(dim: usize, coord: usize, c: f64) -> SlabConstraint {
    let f = (0..dim).map(|j| crate::Complex::new(if j == coord { 1.0 } else { 0.0 }, 0.0)).collect();
    SlabConstraint::new(f, c).expect("valid slab")
}

/// A fixed spread of structural sets: k-norm balls, ball pairs, slab
/// families (bounded and unbounded) and intersections, open and closed.
pub fn sample_structural_sets(dim: usize) -> Vec<SetRep> {
    let slab_all: Vec<SlabConstraint> = (0..dim).map(|k| unit_slab(dim, k, 1.0 + k as f64)).collect();
    let slab_one = BodyRep::ModSlab { constraints: vec![unit_slab(dim, 0, 0.5)] };
    vec![
        SetRep::knorm_ball(Hyperbolic::ONE, Openness::Closed).expect("valid"),
        SetRep::KnormBall {
            radius: Hyperbolic::new(0.5, 3.0).expect("finite"),
            norms: [ComponentNorm::L1, ComponentNorm::Linf],
            openness: Openness::Open,
        },
        SetRep::pair(
            BodyRep::ball(ComponentNorm::L2, 2.0).expect("valid"),
            BodyRep::ModSlab { constraints: slab_all },
            Openness::Closed,
        )
        .expect("valid"),
        SetRep::pair(
            BodyRep::Intersection { parts: vec![slab_one, BodyRep::ball(ComponentNorm::Linf, 1.5).expect("valid")] },
            BodyRep::ball(ComponentNorm::L1, 0.25).expect("valid"),
            Openness::Open,
        )
        .expect("valid"),
        SetRep::pair(
            BodyRep::ModSlab { constraints: vec![unit_slab(dim, dim - 1, 1.0)] },
            BodyRep::ball(ComponentNorm::L2, 1.0).expect("valid"),
            Openness::Closed,
        )
        .expect("valid"),
    ]
}

/// Ten random structural sets covering every body kind in each component,
/// plus k-norm balls.
pub fn random_structural_sets(seed: u64, dim: usize, count: usize) -> Vec<SetRep> {
    (0..count)
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let openness = if k % 2 == 0 { Openness::Closed } else { Openness::Open };
            if k % 5 == 4 {
                let radius = Hyperbolic::new(
                    sampling::log_uniform(&mut rng, -2.0, 2.0),
                    sampling::log_uniform(&mut rng, -2.0, 2.0),
                )
                .expect("finite");
                let n = [ComponentNorm::L1, ComponentNorm::L2, ComponentNorm::Linf];
                SetRep::KnormBall { radius, norms: [n[k % 3], n[(k + 1) % 3]], openness }
            } else {
                let b1 = sets::random_body(&mut rng, dim, BodyKind::ALL[k % 3]);
                let b2 = sets::random_body(&mut rng, dim, BodyKind::ALL[(k + 1) % 3]);
                SetRep::IdempotentPair { b1, b2, openness }
            }
        })
        .collect()
}

fn structural(c: &BatteryConfig, seed: u64, f: fn(&SetRep, usize, u64, usize) -> SampledCheck) -> Result<Outcome> {
    let checks = sample_structural_sets(c.dimension)
        .iter()
        .enumerate()
        .map(|(k, s)| f(s, c.samples, derive_seed(seed, &k.to_string()), c.dimension))
        .collect();
    Ok(Outcome::all(checks))
}

fn sets_interior_closure(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let checks = sample_structural_sets(c.dimension)
        .iter()
        .enumerate()
        .map(|(k, s)| sets::interior_closure_check(s, c.samples, derive_seed(seed, &k.to_string()), c.dimension))
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

fn sets_scale_equivalence(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let mut rng = stream_rng(seed, u64::MAX);
    let checks = sample_structural_sets(c.dimension)
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let lambda = sampling::stratified_scalar(&mut rng, ScalarStratum::Invertible);
            sets::scale_equivalence_check(s, lambda, c.samples, derive_seed(seed, &k.to_string()), c.dimension)
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

fn sets_intersection_convex(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let parts = sample_structural_sets(c.dimension);
    let body = |l: Component| -> Result<BodyRep> {
        Ok(BodyRep::Intersection { parts: parts.iter().map(|s| s.component_body(l)).collect::<Result<_>>()? })
    };
    let s = SetRep::pair(body(Component::E1)?, body(Component::E2)?, Openness::Closed)?;
    Ok(Outcome::new(sets::is_bc_convex_sampled(&s, c.samples, seed, c.dimension)))
}

// ---------------------------------------------------------------------------
// gauge suite
// ---------------------------------------------------------------------------

/// Points per set for the oracle comparison.
pub const ORACLE_POINTS: usize = 200;
/// Random sets for the oracle comparison.
pub const ORACLE_SETS: usize = 10;

fn gauge_oracle(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let checks = random_structural_sets(seed, c.dimension, ORACLE_SETS)
        .iter()
        .enumerate()
        .map(|(k, s)| gauge::gauge_oracle_check(s, ORACLE_POINTS, derive_seed(seed, &k.to_string()), c.dimension, c.bisect_tol))
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

fn gauge_sets(c: &BatteryConfig, seed: u64) -> Vec<SetRep> {
    let mut all = sample_structural_sets(c.dimension);
    all.extend(random_structural_sets(derive_seed(seed, "random"), c.dimension, 5));
    all
}

fn gauge_seminorm(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let checks = gauge_sets(c, seed)
        .iter()
        .enumerate()
        .map(|(k, s)| {
            gauge::gauge_seminorm_check(s, c.samples, derive_seed(seed, &k.to_string()), c.dimension, c.tol_slack, c.tol_rel)
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

fn gauge_chain(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let mut checks = Vec::new();
    for (k, s) in gauge_sets(c, seed).iter().enumerate() {
        for o in [Openness::Open, Openness::Closed] {
            let v = s.with_openness(o)?;
            let tag = format!("{k}{o:?}");
            checks.push(gauge::gauge_chain_check(&v, c.samples, derive_seed(seed, &tag), c.dimension, c.tol_slack)?);
        }
    }
    Ok(Outcome::all(checks))
}

fn gauge_scaling(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let checks = gauge_sets(c, seed)
        .iter()
        .enumerate()
        .map(|(k, s)| gauge::gauge_scaling_check(s, c.samples, derive_seed(seed, &k.to_string()), c.dimension, c.tol_rel))
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

/// Enlarging every component body by a factor `t ≥ 1` can only lower the
/// gauge.
fn gauge_monotone(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    use rayon::prelude::*;
    let sets = gauge_sets(c, seed);
    let dim = c.dimension;
    let outcomes = (0..c.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let s = &sets[i % sets.len()];
            let t = Hyperbolic::new(rng.random_range(1.0..4.0), rng.random_range(1.0..4.0))?;
            let bigger = s.scale(Bicomplex::from(t))?;
            let x = sampling::vector(&mut rng, dim);
            let (a, b) = (gauge::gauge(&bigger, &x)?.value, gauge::gauge(s, &x)?.value);
            Ok((!a.leq(&b)).then(|| Witness::Point { x, detail: format!("enlarged set gauge {a} > {b}") }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::new(SampledCheck::from_outcomes(outcomes)))
}

/// `{q <' 1}` and `{q ≤' 1}` are BC-convex, BC-balanced and BC-absorbing.
fn gauge_unit_sets(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let mut checks = Vec::new();
    for (k, s) in sample_structural_sets(c.dimension).iter().enumerate() {
        for kind in [gauge::UnitKind::Strict, gauge::UnitKind::Nonstrict] {
            let u = gauge::unit_set(s, kind)?;
            let sd = derive_seed(seed, &format!("{k}{kind:?}"));
            checks.push(sets::is_bc_convex_sampled(&u, c.samples, sd, c.dimension));
            checks.push(sets::is_bc_balanced_sampled(&u, c.samples, sd, c.dimension));
            checks.push(sets::is_bc_absorbing_sampled(&u, (c.samples / 10).max(1), sd, c.dimension));
        }
    }
    Ok(Outcome::all(checks))
}

/// For bounded sets: `‖λx‖ = |λ|_k·‖x‖` and `‖x‖ ≥' c·(‖x1‖₂, ‖x2‖₂)`;
/// unbounded sets must be refused.
fn gauge_bounded_norm(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    use rayon::prelude::*;
    let dim = c.dimension;
    let mut norms = Vec::new();
    let mut refused = Vec::new();
    for s in gauge_sets(c, seed) {
        match gauge::dnorm_from_bounded_set(&s) {
            Ok(n) => norms.push(n),
            Err(BcError::Unbounded(_)) => refused.push(s),
            Err(e) => return Err(e),
        }
    }
    let mut checks = Vec::new();
    for s in refused {
        // an unbounded set has a nonzero direction with zero gauge
        let b = [s.component_body(Component::E1)?, s.component_body(Component::E2)?];
        let kernel_nonzero = b.iter().any(|b| !b.kernel_basis(dim).is_empty());
        checks.push(SampledCheck::from_outcomes(vec![(!kernel_nonzero).then(|| Witness::Point {
            x: ModuleVector::zeros(dim),
            detail: format!("refused {} without a kernel direction", s.describe()),
        })]));
    }
    for (k, n) in norms.iter().enumerate() {
        let lb = n.lower_bound(dim)?;
        let sd = derive_seed(seed, &k.to_string());
        let outcomes = (0..c.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(sd, i as u64);
                let x = sampling::vector(&mut rng, dim);
                let lambda = sampling::stratified_scalar(&mut rng, ScalarStratum::for_index(i));
                let nx = n.eval(&x)?;
                let rel = rel_diff(n.eval(&x.scale(lambda))?, lambda.knorm() * nx);
                let floor = lb * dnorm(&x, ComponentNorm::L2, ComponentNorm::L2);
                let sep = nx.a1() >= floor.a1() * (1.0 - c.tol_rel) && nx.a2() >= floor.a2() * (1.0 - c.tol_rel);
                let bad = rel > c.tol_rel || !sep || !lb.is_strictly_positive();
                Ok((bad.then_some(Witness::Balanced { x, lambda }), rel))
            })
            .collect::<Result<Vec<_>>>()?;
        checks.push(SampledCheck::from_measured(outcomes));
    }
    Ok(Outcome::all(checks))
}

// ---------------------------------------------------------------------------
// seminorm suite
// ---------------------------------------------------------------------------

/// One instance of every seminorm variant on `BC^dim`.
pub fn seminorm_variants(dim: usize) -> Vec<DSeminorm> {
    let last = dim - 1;
    let set = sample_structural_sets(dim).swap_remove(2);
    vec![
        DSeminorm::knorm(),
        DSeminorm::KNorm { n1: ComponentNorm::L1, n2: ComponentNorm::Linf },
        DSeminorm::ComponentAbs { which: Component::E1, coord: 0 },
        DSeminorm::ComponentAbs { which: Component::E2, coord: last },
        DSeminorm::FromGauge { set },
        DSeminorm::Scaled { base: Box::new(DSeminorm::knorm()), factor: Hyperbolic::new_unchecked(2.0, 0.0) },
        DSeminorm::Scaled {
            base: Box::new(DSeminorm::ComponentAbs { which: Component::E2, coord: 0 }),
            factor: Hyperbolic::new_unchecked(0.5, 3.0),
        },
        DSeminorm::Sup {
            parts: vec![
                DSeminorm::ComponentAbs { which: Component::E1, coord: 0 },
                DSeminorm::KNorm { n1: ComponentNorm::Linf, n2: ComponentNorm::L1 },
            ],
        },
    ]
}

fn seminorm_axioms(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let checks = seminorm_variants(c.dimension)
        .iter()
        .enumerate()
        .map(|(k, p)| {
            seminorm::seminorm_axiom_check(p, c.samples, derive_seed(seed, &k.to_string()), c.dimension, c.tol_rel, c.tol_slack)
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

fn seminorm_unit_sets(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let mut checks = Vec::new();
    for (k, p) in seminorm_variants(c.dimension).iter().enumerate() {
        for o in [Openness::Open, Openness::Closed] {
            let u = p.unit_set(c.dimension, o)?;
            let sd = derive_seed(seed, &format!("{k}{o:?}"));
            checks.push(sets::is_bc_convex_sampled(&u, c.samples, sd, c.dimension));
            checks.push(sets::is_bc_balanced_sampled(&u, c.samples, sd, c.dimension));
            checks.push(sets::is_bc_absorbing_sampled(&u, c.samples, sd, c.dimension));
        }
    }
    Ok(Outcome::all(checks))
}

fn seminorm_kernel(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let mut checks = Vec::new();
    for which in Component::BOTH {
        for coord in 0..c.dimension {
            let p = DSeminorm::ComponentAbs { which, coord };
            let sd = derive_seed(seed, &format!("{which:?}{coord}"));
            checks.push(seminorm::kernel_check(&p, c.samples, sd, c.dimension, c.tol_rel)?);
        }
    }
    Ok(Outcome::all(checks))
}

fn seminorm_gauge_unit_ball(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    use rayon::prelude::*;
    let p = DSeminorm::FromGauge { set: SetRep::knorm_ball(Hyperbolic::ONE, Openness::Closed)? };
    let q = DSeminorm::knorm();
    let outcomes = (0..c.samples)
        .into_par_iter()
        .map(|i| {
            let x = sampling::vector(&mut stream_rng(seed, i as u64), c.dimension);
            let (a, b) = (p.eval(&x)?, q.eval(&x)?);
            Ok(((a != b).then(|| Witness::Point { x, detail: format!("{a} ≠ {b}") }), rel_diff(a, b)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::new(SampledCheck::from_measured(outcomes)))
}

fn seminorm_sup_monotone(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let fam = SeminormFamily::new(seminorm_variants(c.dimension))?;
    Ok(Outcome::new(seminorm::sup_monotone_check(&fam, c.samples, seed, c.dimension)?))
}

/// Families that separate points; each must pass the separation search.
pub fn separated_families(dim: usize) -> Vec<SeminormFamily> {
    let mut coords = Vec::new();
    for which in Component::BOTH {
        for coord in 0..dim {
            coords.push(DSeminorm::ComponentAbs { which, coord });
        }
    }
    vec![
        SeminormFamily::new(vec![DSeminorm::knorm()]).expect("valid"),
        SeminormFamily::new(coords).expect("valid"),
        SeminormFamily::new(vec![
            DSeminorm::ComponentAbs { which: Component::E1, coord: 0 },
            DSeminorm::FromGauge { set: sample_structural_sets(dim).swap_remove(2) },
        ])
        .expect("valid"),
    ]
}

fn seminorm_separated(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let mut samples_run = 0;
    let mut violations = 0;
    let mut witness = None;
    for (k, fam) in separated_families(c.dimension).iter().enumerate() {
        let r = seminorm::is_separated_sampled(fam, c.samples, derive_seed(seed, &k.to_string()), c.dimension, c.tol_rel)?;
        samples_run += r.samples_run;
        if !r.pass {
            violations += 1;
            witness = witness.or_else(|| Some(serde_json::json!({ "family": k, "x": r.witness, "structural": r.structural })));
        }
    }
    Ok(Outcome { holds: violations == 0, samples_run, violations, witness_ok: witness.is_some(), witness, max_violation: None })
}

fn seminorm_not_separated(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let fam = SeminormFamily::new(vec![DSeminorm::ComponentAbs { which: Component::E1, coord: 0 }])?;
    let r = seminorm::is_separated_sampled(&fam, c.samples, seed, c.dimension, c.tol_rel)?;
    let v = r.witness.clone();
    // any witness must be a nonzero vector the seminorm does not see
    let witness_ok = match &v {
        Some(x) => !x.is_zero() && fam.seminorms[0].eval(x)? == Hyperbolic::ZERO,
        None => false,
    };
    Ok(Outcome {
        holds: r.pass,
        samples_run: r.samples_run,
        violations: usize::from(v.is_some()),
        witness: v.map(|x| serde_json::to_value(x).expect("vector serializes")),
        max_violation: None,
        witness_ok,
    })
}

fn seminorm_nbhd(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let fam = SeminormFamily::new(seminorm_variants(c.dimension))?;
    Ok(Outcome::new(seminorm::nbhd_consistency_check(&fam, c.samples, seed, c.dimension)?))
}

// ---------------------------------------------------------------------------
// metric suite
// ---------------------------------------------------------------------------

/// Truncation used by the metric checks.
pub const METRIC_TERMS: usize = 64;

/// Families for the metric checks: the constant k-norm family, a mixed
/// family and its increasing version.
pub fn metric_families() -> Vec<SeminormFamily> {
    let mixed = SeminormFamily::new(vec![
        DSeminorm::ComponentAbs { which: Component::E1, coord: 0 },
        DSeminorm::Scaled { base: Box::new(DSeminorm::knorm()), factor: Hyperbolic::new_unchecked(2.0, 0.5) },
        DSeminorm::KNorm { n1: ComponentNorm::L1, n2: ComponentNorm::Linf },
    ])
    .expect("valid");
    let increasing = mixed.increasing().expect("nonempty");
    vec![SeminormFamily::new(vec![DSeminorm::knorm()]).expect("valid"), mixed, increasing]
}

fn each_family(seed: u64, f: impl Fn(&SeminormFamily, u64) -> Result<SampledCheck>) -> Result<Outcome> {
    let checks = metric_families()
        .iter()
        .enumerate()
        .map(|(k, fam)| f(fam, derive_seed(seed, &k.to_string())))
        .collect::<Result<_>>()?;
    Ok(Outcome::all(checks))
}

fn metric_axioms(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    each_family(seed, |fam, sd| seminorm::metric_axiom_check(fam, c.samples, sd, c.dimension, METRIC_TERMS, c.tol_slack))
}

fn metric_translation(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    each_family(seed, |fam, sd| seminorm::translation_check(fam, c.samples, sd, c.dimension, METRIC_TERMS))
}

fn metric_series(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    each_family(seed, |fam, sd| seminorm::series_check(fam, c.samples, sd, c.dimension, METRIC_TERMS))
}

/// For the constant `{k-norm}` family the series sums to
/// `|x − y|_k/(1 + |x − y|_k)`; at 30 terms the gap is below `2^{-30}`.
fn metric_knorm_limit(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    use rayon::prelude::*;
    let fam = SeminormFamily::new(vec![DSeminorm::knorm()])?;
    let bound = seminorm::tail_bound(30);
    let outcomes = (0..c.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, c.dimension);
            let y = sampling::vector(&mut rng, c.dimension);
            let d = seminorm::dmetric(&fam, &x, &y, 30)?;
            let p = DSeminorm::knorm().eval(&x.sub(&y)?)?;
            let limit = p.map(|v| v / (1.0 + v));
            let gap = (d.a1() - limit.a1()).abs().max((d.a2() - limit.a2()).abs());
            Ok(((gap > bound).then(|| Witness::Point { x, detail: format!("gap {gap:e}") }), gap))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::new(SampledCheck::from_measured(outcomes)))
}

/// `d <' δ ⟹ p_n <' ε` for two increasing families, several indices and
/// radii.
fn metric_topology(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let fams = [
        SeminormFamily::new(vec![
            DSeminorm::knorm(),
            DSeminorm::Scaled { base: Box::new(DSeminorm::knorm()), factor: Hyperbolic::splat(2.0)? },
        ])?,
        metric_families().swap_remove(1),
    ];
    let eps = [Hyperbolic::ONE, Hyperbolic::new(0.5, 3.0)?, Hyperbolic::new(1e-3, 0.1)?];
    let mut checks = Vec::new();
    for (k, fam) in fams.iter().enumerate() {
        for n in 1..=3 {
            for (e, epsilon) in eps.iter().enumerate() {
                let sd = derive_seed(seed, &format!("{k}/{n}/{e}"));
                checks.push(seminorm::metric_topology_check(fam, n, *epsilon, c.samples, sd, c.dimension, METRIC_TERMS)?);
            }
        }
    }
    Ok(Outcome::all(checks))
}

fn metric_zero_distance(c: &BatteryConfig, seed: u64) -> Result<Outcome> {
    let fam = SeminormFamily::new(vec![DSeminorm::ComponentAbs { which: Component::E1, coord: 0 }])?;
    let pair = seminorm::zero_distance_pair(&fam, c.samples, seed, c.dimension, METRIC_TERMS, c.tol_rel)?;
    Ok(Outcome {
        holds: pair.is_none(),
        samples_run: 1,
        violations: usize::from(pair.is_some()),
        witness_ok: pair.is_some(),
        witness: pair.map(|(x, y)| serde_json::json!({ "x": x, "y": y })),
        max_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let ids = check_ids(Suite::All);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(check_ids(Suite::Scalar).len() >= 8);
    }

    #[test]
    fn small_run_passes() {
        let config = BatteryConfig { seed: 42, samples: 200, ..Default::default() };
        let report = run_suite(&config, Suite::All).unwrap();
        for r in &report.records {
            assert_eq!(r.status, Status::Pass, "{}: {:?}", r.check_id, r.witness);
        }
    }

    #[test]
    fn config_validation() {
        assert!(BatteryConfig { samples: 0, ..Default::default() }.validate().is_err());
        assert!(BatteryConfig { tol_rel: 0.0, ..Default::default() }.validate().is_err());
        assert!(BatteryConfig { dimension: 0, ..Default::default() }.validate().is_err());
    }
}
