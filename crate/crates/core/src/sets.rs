//! Finite descriptions of subsets of `BC^n`.
//!
//! Structural sets are products `e1·B1 + e2·B2` of balanced convex bodies in
//! the component spaces `C(i)^n`. Membership, bicomplex scaling, interior and
//! closure are exact on these. [`SetRep::Raw`] names a fixed predicate from a
//! small registry and supports membership only.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BcError, Result};
use crate::module::{ComponentNorm, ModuleVector};
use crate::sampling;
use crate::scalar::{Bicomplex, Complex, Component, Hyperbolic};

/// Slack on defining inequalities when a sampled point sits on a boundary.
pub const BOUNDARY_SLACK: f64 = 1e-9;

/// Relative cutoff on singular values when deciding rank.
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Openness {
    Open,
    #[default]
    Closed,
}

/// `|⟨f, u⟩| ≤ c` with the bilinear pairing `⟨f, u⟩ = Σ f_j·u_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabConstraint {
    #[serde(with = "crate::json::complex_pair_vec")]
    pub f: Vec<Complex>,
    pub c: f64,
}

impl SlabConstraint {
    pub fn new(f: Vec<Complex>, c: f64) -> Result<Self> {
        let s = SlabConstraint { f, c };
        s.validate()?;
        Ok(s)
    }

    pub fn pairing(&self, u: &[Complex]) -> Complex {
        self.f.iter().zip(u).map(|(a, b)| a * b).sum()
    }

    fn validate(&self) -> Result<()> {
        if self.f.is_empty() || self.f.iter().all(|z| z.norm() == 0.0) {
            return Err(BcError::InvalidArgument("slab functional must be nonzero".into()));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(BcError::InvalidArgument(format!("slab bound must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// A balanced convex body in `C(i)^n` containing 0 in its interior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyRep {
    Ball {
        #[serde(default)]
        norm: ComponentNorm,
        radius: f64,
    },
    /// `{u : |⟨f_j, u⟩| ≤ c_j for all j}`; no constraints means the whole space.
    #[serde(rename = "modslab")]
    ModSlab { constraints: Vec<SlabConstraint> },
    Intersection { parts: Vec<BodyRep> },
}

/// A body flattened into its ball and slab constraints.
#[derive(Default)]
struct Flat {
    balls: Vec<(ComponentNorm, f64)>,
    rows: Vec<(Vec<Complex>, f64)>,
}

/// `v ∈ {t : t ≤ bound}` (or `<`), with `v = 0` always inside so that a body
/// scaled by zero is `{0}`.
fn within(v: f64, bound: f64, openness: Openness) -> bool {
    v == 0.0
        || match openness {
            Openness::Open => v < bound,
            Openness::Closed => v <= bound,
        }
}

fn ratio(v: f64, bound: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else if bound == 0.0 {
        f64::INFINITY
    } else {
        v / bound
    }
}

impl BodyRep {
    pub fn ball(norm: ComponentNorm, radius: f64) -> Result<Self> {
        let b = BodyRep::Ball { norm, radius };
        b.validate()?;
        Ok(b)
    }

    /// Checks the input invariants: positive finite radii and bounds,
    /// nonzero functionals of one common length.
    pub fn validate(&self) -> Result<()> {
        match self {
            BodyRep::Ball { radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(BcError::InvalidArgument(format!("ball radius must be positive, got {radius}")));
                }
            }
            BodyRep::ModSlab { constraints } => {
                for c in constraints {
                    c.validate()?;
                }
            }
            BodyRep::Intersection { parts } => {
                if parts.is_empty() {
                    return Err(BcError::EmptyCollection("intersection"));
                }
                for p in parts {
                    p.validate()?;
                }
            }
        }
        let mut dims = Vec::new();
        self.collect_dims(&mut dims);
        if let Some(&d) = dims.first() {
            if let Some(&bad) = dims.iter().find(|&&e| e != d) {
                return Err(BcError::DimensionMismatch { expected: d, got: bad });
            }
        }
        Ok(())
    }

    fn collect_dims(&self, out: &mut Vec<usize>) {
        match self {
            BodyRep::Ball { .. } => {}
            BodyRep::ModSlab { constraints } => out.extend(constraints.iter().map(|c| c.f.len())),
            BodyRep::Intersection { parts } => parts.iter().for_each(|p| p.collect_dims(out)),
        }
    }

    /// The dimension fixed by slab functionals, if any.
    pub fn dim(&self) -> Option<usize> {
        let mut dims = Vec::new();
        self.collect_dims(&mut dims);
        dims.first().copied()
    }

    fn flatten_into(&self, flat: &mut Flat) {
        match self {
            BodyRep::Ball { norm, radius } => flat.balls.push((*norm, *radius)),
            BodyRep::ModSlab { constraints } => {
                flat.rows.extend(constraints.iter().map(|c| (c.f.clone(), c.c)))
            }
            BodyRep::Intersection { parts } => parts.iter().for_each(|p| p.flatten_into(flat)),
        }
    }

    fn flatten(&self) -> Flat {
        let mut flat = Flat::default();
        self.flatten_into(&mut flat);
        flat
    }

    pub fn contains(&self, u: &[Complex], openness: Openness) -> bool {
        match self {
            BodyRep::Ball { norm, radius } => within(norm.eval(u), *radius, openness),
            BodyRep::ModSlab { constraints } => constraints
                .iter()
                .all(|c| within(c.pairing(u).norm(), c.c, openness)),
            BodyRep::Intersection { parts } => parts.iter().all(|p| p.contains(u, openness)),
        }
    }

    /// Classical Minkowski gauge `inf{t > 0 : u ∈ t·B}`, in closed form.
    pub fn gauge(&self, u: &[Complex]) -> f64 {
        match self {
            BodyRep::Ball { norm, radius } => ratio(norm.eval(u), *radius),
            BodyRep::ModSlab { constraints } => constraints
                .iter()
                .map(|c| ratio(c.pairing(u).norm(), c.c))
                .fold(0.0, f64::max),
            BodyRep::Intersection { parts } => parts.iter().map(|p| p.gauge(u)).fold(0.0, f64::max),
        }
    }

    /// `s·B` for `s ≥ 0`; `0·B` is represented as the zero-radius ball `{0}`.
    pub fn scale(&self, s: f64) -> BodyRep {
        if s == 0.0 {
            return BodyRep::Ball { norm: ComponentNorm::L2, radius: 0.0 };
        }
        match self {
            BodyRep::Ball { norm, radius } => BodyRep::Ball { norm: *norm, radius: radius * s },
            BodyRep::ModSlab { constraints } => BodyRep::ModSlab {
                constraints: constraints
                    .iter()
                    .map(|c| SlabConstraint { f: c.f.clone(), c: c.c * s })
                    .collect(),
            },
            BodyRep::Intersection { parts } => {
                BodyRep::Intersection { parts: parts.iter().map(|p| p.scale(s)).collect() }
            }
        }
    }

    /// Bounded iff some ball is present or the slab functionals span `C^n`.
    pub fn is_bounded(&self) -> bool {
        let flat = self.flatten();
        if !flat.balls.is_empty() {
            return true;
        }
        match slab_matrix(&flat.rows) {
            Some(m) => {
                let n = m.ncols();
                singular_values(&m).iter().filter(|&&s| s > RANK_TOL * max_sv(&m)).count() == n
            }
            None => false,
        }
    }

    /// A constant `c ≥ 0` with `gauge(u) ≥ c·‖u‖₂` for all `u ∈ C^dim`;
    /// zero when the body is unbounded.
    pub fn l2_lower_bound(&self, dim: usize) -> f64 {
        let flat = self.flatten();
        let from_balls = flat
            .balls
            .iter()
            .map(|(n, r)| if *r == 0.0 { f64::INFINITY } else { n.l2_lower_bound(dim) / r })
            .fold(0.0, f64::max);
        let from_rows = match slab_matrix(&flat.rows) {
            Some(m) if m.ncols() == dim => {
                let m_rows = flat.rows.len() as f64;
                let sv = singular_values(&m);
                let smin = if sv.len() < dim { 0.0 } else { sv.iter().copied().fold(f64::INFINITY, f64::min) };
                if smin > RANK_TOL * max_sv(&m) { smin / m_rows.sqrt() } else { 0.0 }
            }
            _ => 0.0,
        };
        from_balls.max(from_rows)
    }

    /// Orthonormal basis of `{u : gauge(u) = 0}` in `C^dim`.
    pub fn kernel_basis(&self, dim: usize) -> Vec<Vec<Complex>> {
        let flat = self.flatten();
        if !flat.balls.is_empty() {
            return Vec::new();
        }
        let identity = || {
            (0..dim)
                .map(|i| (0..dim).map(|j| Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect()
        };
        let Some(m) = slab_matrix(&flat.rows) else {
            return identity();
        };
        // pad to square so the SVD returns a full right basis
        let rows = m.nrows().max(dim);
        let mut sq = DMatrix::<Complex>::zeros(rows, dim);
        sq.view_mut((0, 0), (m.nrows(), dim)).copy_from(&m);
        let svd = sq.svd(false, true);
        let vt = svd.v_t.expect("requested V^H");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        (0..dim)
            .filter(|&k| svd.singular_values[k] <= RANK_TOL * smax.max(1.0))
            .map(|k| (0..dim).map(|j| vt[(k, j)].conj()).collect())
            .collect()
    }
}

/// Rows `f_j / c_j`; `None` when there are no rows.
fn slab_matrix(rows: &[(Vec<Complex>, f64)]) -> Option<DMatrix<Complex>> {
    let n = rows.first()?.0.len();
    Some(DMatrix::from_fn(rows.len(), n, |i, j| rows[i].0[j] / rows[i].1))
}

fn singular_values(m: &DMatrix<Complex>) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

fn max_sv(m: &DMatrix<Complex>) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Built-in membership predicates that are not structural. Both encode the
/// classical counterexamples and are defined on `BC^n` through the `ℓ²`
/// norms of the idempotent parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RawPredicate {
    /// `{x : ‖x1‖ + ‖x2‖ < 2}`: its idempotent parts are discs but the set
    /// is not BC-convex.
    #[serde(rename = "cross_sum_lt_2")]
    CrossSumLt2,
    /// `{x : ‖x‖_D <' 1/2} ∪ {(1, …, 1)}`: absorbing but `e1·B ⊄ B`.
    #[serde(rename = "kball_half_union_one")]
    KballHalfUnionOne,
}

impl RawPredicate {
    pub fn name(self) -> &'static str {
        match self {
            RawPredicate::CrossSumLt2 => "cross_sum_lt_2",
            RawPredicate::KballHalfUnionOne => "kball_half_union_one",
        }
    }

    pub fn contains(self, x: &ModuleVector) -> bool {
        let (x1, x2) = x.split();
        let (n1, n2) = (ComponentNorm::L2.eval(&x1), ComponentNorm::L2.eval(&x2));
        match self {
            RawPredicate::CrossSumLt2 => n1 + n2 < 2.0,
            RawPredicate::KballHalfUnionOne => {
                (n1 < 0.5 && n2 < 0.5) || x.entries().iter().all(|e| *e == Bicomplex::ONE)
            }
        }
    }
}

/// A subset of `BC^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetRep {
    /// `e1·B1 + e2·B2`.
    IdempotentPair {
        b1: BodyRep,
        b2: BodyRep,
        #[serde(default)]
        openness: Openness,
    },
    /// `{x : ‖x‖_D ≤' ρ}` (closed) or `<' ρ` (open), with the given
    /// component norms.
    KnormBall {
        radius: Hyperbolic,
        #[serde(default)]
        norms: [ComponentNorm; 2],
        #[serde(default)]
        openness: Openness,
    },
    Raw { name: RawPredicate },
}

impl SetRep {
    pub fn pair(b1: BodyRep, b2: BodyRep, openness: Openness) -> Result<Self> {
        let s = SetRep::IdempotentPair { b1, b2, openness };
        s.validate()?;
        Ok(s)
    }

    pub fn knorm_ball(radius: Hyperbolic, openness: Openness) -> Result<Self> {
        let s = SetRep::KnormBall { radius, norms: [ComponentNorm::L2; 2], openness };
        s.validate()?;
        Ok(s)
    }

    pub fn raw(name: RawPredicate) -> Self {
        SetRep::Raw { name }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetRep::IdempotentPair { b1, b2, .. } => {
                b1.validate()?;
                b2.validate()?;
                if let (Some(d1), Some(d2)) = (b1.dim(), b2.dim()) {
                    if d1 != d2 {
                        return Err(BcError::DimensionMismatch { expected: d1, got: d2 });
                    }
                }
                Ok(())
            }
            SetRep::KnormBall { radius, .. } => {
                if radius.is_strictly_positive() && radius.is_finite() {
                    Ok(())
                } else {
                    Err(BcError::InvalidArgument(format!("knorm ball radius must be >' 0, got {radius}")))
                }
            }
            SetRep::Raw { .. } => Ok(()),
        }
    }

    pub fn is_structural(&self) -> bool {
        !matches!(self, SetRep::Raw { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            SetRep::IdempotentPair { openness, .. } => format!("idempotent_pair({openness:?})"),
            SetRep::KnormBall { radius, openness, .. } => format!("knorm_ball({radius}, {openness:?})"),
            SetRep::Raw { name } => format!("raw({})", name.name()),
        }
    }

    /// The dimension fixed by the representation, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SetRep::IdempotentPair { b1, b2, .. } => b1.dim().or(b2.dim()),
            _ => None,
        }
    }

    fn check_dim(&self, x: &ModuleVector) -> Result<()> {
        match self.dim() {
            Some(d) if d != x.dim() => Err(BcError::DimensionMismatch { expected: d, got: x.dim() }),
            _ => Ok(()),
        }
    }

    fn unsupported(&self, op: &str) -> BcError {
        BcError::Unsupported(format!("{op} on {}", self.describe()))
    }

    pub fn openness(&self) -> Option<Openness> {
        match self {
            SetRep::IdempotentPair { openness, .. } | SetRep::KnormBall { openness, .. } => Some(*openness),
            SetRep::Raw { .. } => None,
        }
    }

    pub fn contains(&self, x: &ModuleVector) -> Result<bool> {
        self.check_dim(x)?;
        Ok(match self {
            SetRep::Raw { name } => name.contains(x),
            _ => {
                let o = self.openness().expect("structural");
                Component::BOTH.iter().all(|&c| {
                    self.component_body(c).expect("structural").contains(&x.component(c), o)
                })
            }
        })
    }

    /// The component body `B_l` with `e_l·S = e_l·B_l`.
    pub fn component_body(&self, c: Component) -> Result<BodyRep> {
        match self {
            SetRep::IdempotentPair { b1, b2, .. } => Ok(match c {
                Component::E1 => b1.clone(),
                Component::E2 => b2.clone(),
            }),
            SetRep::KnormBall { radius, norms, .. } => Ok(BodyRep::Ball {
                norm: norms[c.index()],
                radius: radius.component(c),
            }),
            SetRep::Raw { .. } => Err(self.unsupported("component_body")),
        }
    }

    pub fn with_openness(&self, o: Openness) -> Result<SetRep> {
        let mut s = self.clone();
        match &mut s {
            SetRep::IdempotentPair { openness, .. } | SetRep::KnormBall { openness, .. } => *openness = o,
            SetRep::Raw { .. } => return Err(self.unsupported("openness change")),
        }
        Ok(s)
    }

    pub fn interior(&self) -> Result<SetRep> {
        self.with_openness(Openness::Open)
    }

    pub fn closure(&self) -> Result<SetRep> {
        self.with_openness(Openness::Closed)
    }

    /// `λ·S` for balanced structural `S`: component bodies scaled by the
    /// idempotent components of `|λ|_k`.
    pub fn scale(&self, lambda: Bicomplex) -> Result<SetRep> {
        let m = lambda.knorm();
        match self {
            SetRep::IdempotentPair { b1, b2, openness } => Ok(SetRep::IdempotentPair {
                b1: b1.scale(m.a1()),
                b2: b2.scale(m.a2()),
                openness: *openness,
            }),
            SetRep::KnormBall { radius, norms, openness } => Ok(SetRep::KnormBall {
                radius: *radius * m,
                norms: *norms,
                openness: *openness,
            }),
            SetRep::Raw { .. } => Err(self.unsupported("scale_set")),
        }
    }

    pub fn is_bounded(&self) -> Result<bool> {
        if !self.is_structural() {
            return Err(self.unsupported("is_bounded"));
        }
        Ok(Component::BOTH
            .iter()
            .all(|&c| self.component_body(c).map(|b| b.is_bounded()).unwrap_or(false)))
    }

    /// Componentwise gauge values, or `None` for raw predicates.
    pub(crate) fn component_gauges(&self, x: &ModuleVector) -> Option<[f64; 2]> {
        let b1 = self.component_body(Component::E1).ok()?;
        let b2 = self.component_body(Component::E2).ok()?;
        Some([b1.gauge(&x.component(Component::E1)), b2.gauge(&x.component(Component::E2))])
    }

    /// Distance of the component gauges from the unit level; points closer
    /// than [`BOUNDARY_SLACK`] count as boundary points.
    pub(crate) fn near_boundary(&self, x: &ModuleVector) -> bool {
        self.component_gauges(x)
            .map(|g| g.iter().any(|q| (q - 1.0).abs() <= BOUNDARY_SLACK))
            .unwrap_or(false)
    }
}

pub fn contains(s: &SetRep, x: &ModuleVector) -> Result<bool> {
    s.contains(x)
}

pub fn scale_set(lambda: Bicomplex, s: &SetRep) -> Result<SetRep> {
    s.scale(lambda)
}

pub fn component_body(s: &SetRep, c: Component) -> Result<BodyRep> {
    s.component_body(c)
}

pub fn interior(s: &SetRep) -> Result<SetRep> {
    s.interior()
}

pub fn closure(s: &SetRep) -> Result<SetRep> {
    s.closure()
}

pub fn is_bounded(s: &SetRep) -> Result<bool> {
    s.is_bounded()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    Ball,
    Slab,
    Intersection,
}

impl BodyKind {
    pub const ALL: [BodyKind; 3] = [BodyKind::Ball, BodyKind::Slab, BodyKind::Intersection];
}

/// A random balanced convex body of the given kind. Slab families have
/// between one and `dim + 1` rows, so some are unbounded.
pub fn random_body<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize, kind: BodyKind) -> BodyRep {
    match kind {
        BodyKind::Ball => {
            let norm = [ComponentNorm::L1, ComponentNorm::L2, ComponentNorm::Linf][rng.random_range(0..3usize)];
            BodyRep::Ball { norm, radius: sampling::log_uniform(rng, -2.0, 2.0) }
        }
        BodyKind::Slab => {
            let rows = rng.random_range(1..=dim + 1);
            BodyRep::ModSlab {
                constraints: (0..rows)
                    .map(|_| SlabConstraint {
                        f: (0..dim).map(|_| sampling::complex_gaussian(rng, 1.0)).collect(),
                        c: sampling::log_uniform(rng, -2.0, 2.0),
                    })
                    .collect(),
            }
        }
        BodyKind::Intersection => {
            let a = if rng.random_bool(0.5) { BodyKind::Ball } else { BodyKind::Slab };
            BodyRep::Intersection { parts: vec![random_body(rng, dim, a), random_body(rng, dim, BodyKind::Slab)] }
        }
    }
}

/// A random structural set of dimension `dim`.
pub fn random_structural_set<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> SetRep {
    let openness = if rng.random_bool(0.5) { Openness::Open } else { Openness::Closed };
    if rng.random_range(0..4u8) == 0 {
        let radius = Hyperbolic::new_unchecked(sampling::log_uniform(rng, -2.0, 2.0), sampling::log_uniform(rng, -2.0, 2.0));
        let n = [ComponentNorm::L1, ComponentNorm::L2, ComponentNorm::Linf];
        SetRep::KnormBall { radius, norms: [n[rng.random_range(0..3usize)], n[rng.random_range(0..3usize)]], openness }
    } else {
        let mut kind = || BodyKind::ALL[rng.random_range(0..3usize)];
        let (k1, k2) = (kind(), kind());
        SetRep::IdempotentPair { b1: random_body(rng, dim, k1), b2: random_body(rng, dim, k2), openness }
    }
}

// ---------------------------------------------------------------------------
// sampled property checks
// ---------------------------------------------------------------------------

/// The first failure found by a sampled check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `λ·x + (1 − λ)·y ∉ S`.
    Convex { x: ModuleVector, y: ModuleVector, lambda: Hyperbolic },
    /// `λ·x ∉ S` with `|λ|_k ≤' 1`.
    Balanced { x: ModuleVector, lambda: Bicomplex },
    /// No `ε >' 0` found with `[0, ε]·x ⊂ S`.
    Absorbing { x: ModuleVector },
    /// `e1·x + e2·y ∉ S`.
    IdempotentSum { x: ModuleVector, y: ModuleVector },
    /// `e_l·x ∉ S`.
    Projection { x: ModuleVector, component: Component },
    /// Membership disagreement at a point.
    Point { x: ModuleVector, detail: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCheck {
    pub pass: bool,
    pub samples_run: usize,
    pub violations: usize,
    pub witness: Option<Witness>,
    /// Largest residual measured, for checks with a numeric tolerance.
    pub max_violation: Option<f64>,
}

impl SampledCheck {
    /// Folds per-sample outcomes in index order; the first failure becomes
    /// the witness.
    pub fn from_outcomes(outcomes: Vec<Option<Witness>>) -> Self {
        let samples_run = outcomes.len();
        let violations = outcomes.iter().filter(|o| o.is_some()).count();
        let witness = outcomes.into_iter().flatten().next();
        SampledCheck { pass: violations == 0, samples_run, violations, witness, max_violation: None }
    }

    /// Like [`from_outcomes`](Self::from_outcomes), also keeping the largest
    /// residual.
    pub fn from_measured(outcomes: Vec<(Option<Witness>, f64)>) -> Self {
        let max = outcomes.iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
        let mut check = Self::from_outcomes(outcomes.into_iter().map(|o| o.0).collect());
        check.max_violation = (check.samples_run > 0).then_some(max);
        check
    }

    pub fn chain(mut self, other: SampledCheck) -> Self {
        self.samples_run += other.samples_run;
        self.violations += other.violations;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self.max_violation = match (self.max_violation, other.max_violation) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.pass = self.violations == 0;
        self
    }
}

/// Deterministic probe points tried before random draws: multiples
/// `t ∈ {3/2, 1, 1/2}` of basis vectors and of the all-ones vector, each in
/// `e1`-supported, `e2`-supported and full form, then the origin.
pub fn probe_points(dim: usize) -> Vec<ModuleVector> {
    let mut out = Vec::new();
    let mut dirs: Vec<ModuleVector> = (0..dim)
        .map(|i| ModuleVector::basis(dim, i, Bicomplex::ONE).expect("index < dim"))
        .collect();
    if dim > 1 {
        dirs.push(ModuleVector::splat(dim, Bicomplex::ONE));
    }
    for t in [1.5, 1.0, 0.5] {
        let s = Bicomplex::real(t).expect("finite");
        for d in &dirs {
            let v = d.scale(s);
            out.push(v.project(Component::E1));
            out.push(v.project(Component::E2));
            out.push(v);
        }
    }
    out.push(ModuleVector::zeros(dim));
    out
}

/// Draws a member of `S`: a random vector is halved until it lands inside,
/// then pushed back out by a random hyperbolic factor in `[1, 2)²` when that
/// stays inside. Spreads samples through the interior and near the boundary.
pub fn sample_member<R: rand::Rng + ?Sized>(s: &SetRep, rng: &mut R, dim: usize) -> Option<ModuleVector> {
    let mut x = sampling::vector(rng, dim);
    let half = Bicomplex::real(0.5).expect("finite");
    for _ in 0..80 {
        if s.contains(&x).unwrap_or(false) {
            let f = Hyperbolic::new_unchecked(rng.random_range(1.0..2.0), rng.random_range(1.0..2.0));
            let y = x.scale(Bicomplex::from(f));
            return Some(if s.contains(&y).unwrap_or(false) { y } else { x });
        }
        x = x.scale(half);
    }
    None
}

fn members(s: &SetRep, pts: Vec<ModuleVector>) -> Vec<ModuleVector> {
    pts.into_iter().filter(|p| s.contains(p).unwrap_or(false)).collect()
}

fn convex_combo(x: &ModuleVector, y: &ModuleVector, lambda: Hyperbolic) -> ModuleVector {
    let l = Bicomplex::from(lambda);
    let m = Bicomplex::from(Hyperbolic::ONE - lambda);
    x.scale(l).add(&y.scale(m)).expect("same dim")
}

/// Membership test that forgives boundary points of structural sets.
fn inside_with_slack(s: &SetRep, x: &ModuleVector) -> bool {
    s.contains(x).unwrap_or(false) || s.near_boundary(x)
}

/// Samples `x, y ∈ S` and `0 ≤' λ ≤' 1` and checks `λx + (1−λ)y ∈ S`.
/// Probe pairs with the corner scalars go first.
pub fn is_bc_convex_sampled(s: &SetRep, samples: usize, seed: u64, dim: usize) -> SampledCheck {
    let probes = members(s, probe_points(dim));
    let mut probe_outcomes = Vec::new();
    for x in &probes {
        for y in &probes {
            for lambda in sampling::D_UNIT_CORNERS {
                let z = convex_combo(x, y, lambda);
                let bad = !inside_with_slack(s, &z);
                probe_outcomes.push(bad.then(|| Witness::Convex { x: x.clone(), y: y.clone(), lambda }));
            }
        }
    }
    let probe = SampledCheck::from_outcomes(probe_outcomes);
    let random: Vec<Option<Witness>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let (Some(x), Some(y)) = (sample_member(s, &mut rng, dim), sample_member(s, &mut rng, dim)) else {
                return None;
            };
            let lambda = sampling::unit_hyperbolic(&mut rng);
            let z = convex_combo(&x, &y, lambda);
            (!inside_with_slack(s, &z)).then_some(Witness::Convex { x, y, lambda })
        })
        .collect();
    probe.chain(SampledCheck::from_outcomes(random))
}

/// Samples `x ∈ S` and `|λ|_k ≤' 1` (null-cone scalars included) and checks
/// `λx ∈ S`.
pub fn is_bc_balanced_sampled(s: &SetRep, samples: usize, seed: u64, dim: usize) -> SampledCheck {
    let probes = members(s, probe_points(dim));
    let mut probe_outcomes = Vec::new();
    for x in &probes {
        for lambda in sampling::contraction_corners() {
            let bad = !inside_with_slack(s, &x.scale(lambda));
            probe_outcomes.push(bad.then(|| Witness::Balanced { x: x.clone(), lambda }));
        }
    }
    let probe = SampledCheck::from_outcomes(probe_outcomes);
    let random: Vec<Option<Witness>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sample_member(s, &mut rng, dim)?;
            let lambda = sampling::contraction(&mut rng);
            (!inside_with_slack(s, &x.scale(lambda))).then_some(Witness::Balanced { x, lambda })
        })
        .collect();
    probe.chain(SampledCheck::from_outcomes(random))
}

/// Grid fractions used to cover `0 ≤' λ ≤' ε` per idempotent component.
const ABSORB_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const ABSORB_MAX_HALVINGS: i32 = 40;

fn absorbed(s: &SetRep, x: &ModuleVector) -> bool {
    (0..=ABSORB_MAX_HALVINGS).any(|m| {
        let eps = (-m as f64).exp2();
        ABSORB_GRID.iter().all(|a| {
            ABSORB_GRID.iter().all(|b| {
                let l = Bicomplex::from(Hyperbolic::new_unchecked(a * eps, b * eps));
                s.contains(&x.scale(l)).unwrap_or(false)
            })
        })
    })
}

/// For each direction `x ∈ BC^n`, searches `ε = 2^{-m}·(1,1)`, `m ≤ 40`, with
/// `λx ∈ S` on a grid of `0 ≤' λ ≤' ε`.
pub fn is_bc_absorbing_sampled(s: &SetRep, directions: usize, seed: u64, dim: usize) -> SampledCheck {
    let probe = SampledCheck::from_outcomes(
        probe_points(dim)
            .into_iter()
            .map(|x| (!absorbed(s, &x)).then_some(Witness::Absorbing { x }))
            .collect(),
    );
    let random: Vec<Option<Witness>> = (0..directions)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            (!absorbed(s, &x)).then_some(Witness::Absorbing { x })
        })
        .collect();
    probe.chain(SampledCheck::from_outcomes(random))
}

/// Samples `x, y ∈ S` and checks `e1·x + e2·y ∈ S`, the nontrivial half of
/// `S = e1·S + e2·S`.
pub fn idempotent_sum_check(s: &SetRep, samples: usize, seed: u64, dim: usize) -> SampledCheck {
    let combine = |x: &ModuleVector, y: &ModuleVector| {
        x.project(Component::E1).add(&y.project(Component::E2)).expect("same dim")
    };
    let probes = members(s, probe_points(dim));
    let mut probe_outcomes = Vec::new();
    for x in &probes {
        for y in &probes {
            let bad = !inside_with_slack(s, &combine(x, y));
            probe_outcomes.push(bad.then(|| Witness::IdempotentSum { x: x.clone(), y: y.clone() }));
        }
    }
    let probe = SampledCheck::from_outcomes(probe_outcomes);
    let random: Vec<Option<Witness>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let (Some(x), Some(y)) = (sample_member(s, &mut rng, dim), sample_member(s, &mut rng, dim)) else {
                return None;
            };
            (!inside_with_slack(s, &combine(&x, &y))).then_some(Witness::IdempotentSum { x, y })
        })
        .collect();
    probe.chain(SampledCheck::from_outcomes(random))
}

/// Checks `e1·S ⊂ S` and `e2·S ⊂ S` on probes and sampled members.
pub fn projection_check(s: &SetRep, samples: usize, seed: u64, dim: usize) -> SampledCheck {
    let test = |x: &ModuleVector| {
        Component::BOTH
            .iter()
            .find(|&&c| !inside_with_slack(s, &x.project(c)))
            .map(|&component| Witness::Projection { x: x.clone(), component })
    };
    let probe = SampledCheck::from_outcomes(members(s, probe_points(dim)).iter().map(test).collect());
    let random: Vec<Option<Witness>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            test(&sample_member(s, &mut rng, dim)?)
        })
        .collect();
    probe.chain(SampledCheck::from_outcomes(random))
}

/// Points scattered around a structural set: members, non-members and
/// points placed exactly on the boundary of one or both components.
pub(crate) fn scatter_point<R: rand::Rng + ?Sized>(s: &SetRep, rng: &mut R, dim: usize) -> ModuleVector {
    let x = sampling::vector(rng, dim);
    let Some(g) = s.component_gauges(&x) else {
        return x;
    };
    let mode = rng.random_range(0..4u8);
    if mode == 0 || g.iter().any(|q| !q.is_finite()) {
        return x;
    }
    // rescale so each component gauge becomes a chosen level
    let mut level = || match rng.random_range(0..3u8) {
        0 => 1.0,
        1 => rng.random_range(0.0..1.0),
        _ => rng.random_range(1.0..3.0),
    };
    let (t1, t2) = (level(), level());
    let f = |q: f64, t: f64| if q == 0.0 { 1.0 } else { t / q };
    x.scale(Bicomplex::from(Hyperbolic::new_unchecked(f(g[0], t1), f(g[1], t2))))
}

/// Checks `contains(λ·S, x) ⟺ contains(S, λ⁻¹·x)` for invertible `λ` on
/// points scattered around `λ·S`.
pub fn scale_equivalence_check(s: &SetRep, lambda: Bicomplex, samples: usize, seed: u64, dim: usize) -> Result<SampledCheck> {
    let scaled = s.scale(lambda)?;
    let inv = lambda.inverse()?;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = scatter_point(&scaled, &mut rng, dim);
            let pre = x.scale(inv);
            let a = scaled.contains(&x).unwrap_or(false);
            let b = s.contains(&pre).unwrap_or(false);
            let boundary = scaled.near_boundary(&x) || s.near_boundary(&pre);
            (a != b && !boundary).then(|| Witness::Point {
                x,
                detail: format!("in λS: {a}, λ⁻¹x in S: {b}"),
            })
        })
        .collect();
    Ok(SampledCheck::from_outcomes(outcomes))
}

/// Checks `interior(S) ⊆ S ⊆ closure(S)` on scattered points, and that some
/// boundary point separates the three sets when `S` is structural.
pub fn interior_closure_check(s: &SetRep, samples: usize, seed: u64, dim: usize) -> Result<SampledCheck> {
    let int = s.interior()?;
    let clo = s.closure()?;
    let outcomes: Vec<Option<Witness>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = scatter_point(s, &mut rng, dim);
            let (a, b, c) = (int.contains(&x).unwrap_or(false), s.contains(&x).unwrap_or(false), clo.contains(&x).unwrap_or(false));
            ((a && !b) || (b && !c)).then(|| Witness::Point { x, detail: format!("interior {a}, set {b}, closure {c}") })
        })
        .collect();
    Ok(SampledCheck::from_outcomes(outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn bc1(z: Bicomplex) -> ModuleVector {
        ModuleVector::new(vec![z]).unwrap()
    }

    fn real(x: f64) -> Bicomplex {
        Bicomplex::real(x).unwrap()
    }

    fn ball_pair(r1: f64, r2: f64, o: Openness) -> SetRep {
        SetRep::pair(
            BodyRep::ball(ComponentNorm::L2, r1).unwrap(),
            BodyRep::ball(ComponentNorm::L2, r2).unwrap(),
            o,
        )
        .unwrap()
    }

    #[test]
    fn raw_membership_examples() {
        let s = SetRep::raw(RawPredicate::CrossSumLt2);
        assert!(!s.contains(&bc1(real(1.5))).unwrap());
        assert!(s.contains(&bc1(Bicomplex::E1 * real(1.5))).unwrap());
        assert!(s.contains(&bc1(Bicomplex::ZERO)).unwrap());
        let k = SetRep::raw(RawPredicate::KballHalfUnionOne);
        assert!(k.contains(&bc1(Bicomplex::ONE)).unwrap());
        assert!(!k.contains(&bc1(Bicomplex::E1)).unwrap());
        assert!(!k.contains(&bc1(Bicomplex::E2)).unwrap());
        assert!(k.contains(&bc1(Bicomplex::ZERO)).unwrap());
    }

    #[test]
    fn idempotent_pair_membership_is_componentwise() {
        let s = ball_pair(2.0, 0.5, Openness::Closed);
        let mut rng = sampling::stream_rng(11, 0);
        for _ in 0..2000 {
            let x = sampling::vector(&mut rng, 2);
            let (x1, x2) = x.split();
            let expect = ComponentNorm::L2.eval(&x1) <= 2.0 && ComponentNorm::L2.eval(&x2) <= 0.5;
            assert_eq!(s.contains(&x).unwrap(), expect);
        }
    }

    #[test]
    fn scale_set_examples() {
        let b = ball_pair(1.0, 1.0, Openness::Closed);
        let s = b.scale(real(2.0)).unwrap();
        assert_eq!(s.component_body(Component::E1).unwrap(), BodyRep::Ball { norm: ComponentNorm::L2, radius: 2.0 });
        let lam = Bicomplex::from(Hyperbolic::new(2.0, 3.0).unwrap());
        let pair = ball_pair(0.5, 4.0, Openness::Open).scale(lam).unwrap();
        assert_eq!(pair.component_body(Component::E1).unwrap(), BodyRep::Ball { norm: ComponentNorm::L2, radius: 1.0 });
        assert_eq!(pair.component_body(Component::E2).unwrap(), BodyRep::Ball { norm: ComponentNorm::L2, radius: 12.0 });
        assert!(matches!(SetRep::raw(RawPredicate::CrossSumLt2).scale(real(2.0)), Err(BcError::Unsupported(_))));
    }

    #[test]
    fn scale_by_unimodular_is_membership_equal() {
        let s = SetRep::knorm_ball(Hyperbolic::new(1.0, 2.0).unwrap(), Openness::Closed).unwrap();
        let ks = s.scale(Bicomplex::K).unwrap();
        let mut rng = sampling::stream_rng(3, 0);
        for _ in 0..10_000 {
            let x = sampling::vector(&mut rng, 2);
            assert_eq!(s.contains(&x).unwrap(), ks.contains(&x).unwrap());
        }
    }

    #[test]
    fn scale_by_null_cone_keeps_origin_in_other_component() {
        let s = ball_pair(1.0, 1.0, Openness::Open);
        let e1s = s.scale(Bicomplex::E1 * real(3.0)).unwrap();
        let x = bc1(Bicomplex::E1 * real(2.5));
        assert!(e1s.contains(&x).unwrap());
        assert!(!e1s.contains(&bc1(Bicomplex::E2 * real(1e-6))).unwrap());
    }

    #[test]
    fn component_body_examples() {
        let rho = Hyperbolic::new(1.5, 0.25).unwrap();
        let s = SetRep::KnormBall { radius: rho, norms: [ComponentNorm::L1, ComponentNorm::Linf], openness: Openness::Closed };
        assert_eq!(s.component_body(Component::E1).unwrap(), BodyRep::Ball { norm: ComponentNorm::L1, radius: 1.5 });
        assert_eq!(s.component_body(Component::E2).unwrap(), BodyRep::Ball { norm: ComponentNorm::Linf, radius: 0.25 });
        let p = ball_pair(2.0, 3.0, Openness::Closed);
        assert_eq!(p.component_body(Component::E2).unwrap(), BodyRep::Ball { norm: ComponentNorm::L2, radius: 3.0 });
        assert!(matches!(SetRep::raw(RawPredicate::CrossSumLt2).component_body(Component::E1), Err(BcError::Unsupported(_))));
    }

    #[test]
    fn interior_and_closure_flip_openness() {
        let closed = ball_pair(1.0, 2.0, Openness::Closed);
        let open = closed.interior().unwrap();
        assert_eq!(open, ball_pair(1.0, 2.0, Openness::Open));
        assert_eq!(open.closure().unwrap(), closed);
        let boundary = bc1(Bicomplex::from_idempotent(c(1.0, 0.0), c(0.0, 0.0)).unwrap());
        assert!(closed.contains(&boundary).unwrap());
        assert!(!open.contains(&boundary).unwrap());
        assert!(SetRep::raw(RawPredicate::KballHalfUnionOne).interior().is_err());
    }

    #[test]
    fn boundedness_examples() {
        assert!(ball_pair(1.0, 1.0, Openness::Closed).is_bounded().unwrap());
        let span = BodyRep::ModSlab {
            constraints: vec![
                SlabConstraint::new(vec![c(1.0, 0.0), c(0.0, 0.0)], 1.0).unwrap(),
                SlabConstraint::new(vec![c(1.0, 1.0), c(0.0, 2.0)], 2.0).unwrap(),
            ],
        };
        assert!(span.is_bounded());
        let single = BodyRep::ModSlab { constraints: vec![SlabConstraint::new(vec![c(1.0, 0.0), c(0.0, 0.0)], 1.0).unwrap()] };
        assert!(!single.is_bounded());
        let other = BodyRep::ModSlab { constraints: vec![SlabConstraint::new(vec![c(0.0, 0.0), c(0.0, 1.0)], 1.0).unwrap()] };
        assert!(BodyRep::Intersection { parts: vec![single.clone(), other] }.is_bounded());
        let unbounded = SetRep::pair(single, BodyRep::ball(ComponentNorm::L2, 1.0).unwrap(), Openness::Closed).unwrap();
        assert!(!unbounded.is_bounded().unwrap());
        assert!(SetRep::raw(RawPredicate::CrossSumLt2).is_bounded().is_err());
    }

    #[test]
    fn kernel_basis_of_single_slab() {
        let single = BodyRep::ModSlab { constraints: vec![SlabConstraint::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 1.0).unwrap()] };
        let k = single.kernel_basis(2);
        assert_eq!(k.len(), 1);
        assert!(single.gauge(&k[0]) < 1e-12);
        assert!(ComponentNorm::L2.eval(&k[0]) > 0.99);
        assert!(BodyRep::ball(ComponentNorm::L1, 1.0).unwrap().kernel_basis(2).is_empty());
        assert_eq!(BodyRep::ModSlab { constraints: vec![] }.kernel_basis(3).len(), 3);
    }

    #[test]
    fn lower_bound_holds_on_samples() {
        let body = BodyRep::Intersection {
            parts: vec![
                BodyRep::ModSlab { constraints: vec![SlabConstraint::new(vec![c(1.0, 0.0), c(0.5, 0.0)], 2.0).unwrap()] },
                BodyRep::ModSlab { constraints: vec![SlabConstraint::new(vec![c(0.0, 0.0), c(0.0, 1.0)], 1.0).unwrap()] },
            ],
        };
        let lb = body.l2_lower_bound(2);
        assert!(lb > 0.0);
        let mut rng = sampling::stream_rng(5, 0);
        for _ in 0..1000 {
            let u: Vec<Complex> = (0..2).map(|_| sampling::complex_gaussian(&mut rng, 1.0)).collect();
            assert!(body.gauge(&u) >= lb * ComponentNorm::L2.eval(&u) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn cross_sum_is_not_convex_with_known_witness() {
        let s = SetRep::raw(RawPredicate::CrossSumLt2);
        let r = is_bc_convex_sampled(&s, 100, 1, 1);
        assert!(!r.pass);
        assert_eq!(
            r.witness,
            Some(Witness::Convex {
                x: bc1(Bicomplex::E1 * real(1.5)),
                y: bc1(Bicomplex::E2 * real(1.5)),
                lambda: Hyperbolic::E1,
            })
        );
        let combo = convex_combo(&bc1(Bicomplex::E1 * real(1.5)), &bc1(Bicomplex::E2 * real(1.5)), Hyperbolic::E1);
        assert_eq!(combo, bc1(real(1.5)));
        let sum = idempotent_sum_check(&s, 100, 1, 1);
        assert!(matches!(sum.witness, Some(Witness::IdempotentSum { .. })));
    }

    #[test]
    fn kball_union_one_not_balanced_but_absorbing() {
        let s = SetRep::raw(RawPredicate::KballHalfUnionOne);
        let r = is_bc_balanced_sampled(&s, 100, 2, 1);
        assert_eq!(r.witness, Some(Witness::Balanced { x: bc1(Bicomplex::ONE), lambda: Bicomplex::E1 }));
        assert!(is_bc_absorbing_sampled(&s, 500, 2, 1).pass);
        let p = projection_check(&s, 100, 2, 1);
        assert_eq!(p.witness, Some(Witness::Projection { x: bc1(Bicomplex::ONE), component: Component::E1 }));
    }

    #[test]
    fn structural_sets_pass_sampled_properties() {
        let sets = [
            SetRep::knorm_ball(Hyperbolic::ONE, Openness::Closed).unwrap(),
            ball_pair(2.0, 0.5, Openness::Open),
        ];
        for s in &sets {
            assert!(is_bc_convex_sampled(s, 2000, 9, 2).pass, "{}", s.describe());
            assert!(is_bc_balanced_sampled(s, 2000, 9, 2).pass, "{}", s.describe());
            assert!(is_bc_absorbing_sampled(s, 500, 9, 2).pass, "{}", s.describe());
            assert!(idempotent_sum_check(s, 2000, 9, 2).pass, "{}", s.describe());
            assert!(interior_closure_check(s, 2000, 9, 2).unwrap().pass);
            let lam = Bicomplex::from_parts(0.3, 1.2, -0.7, 0.4).unwrap();
            assert!(scale_equivalence_check(s, lam, 2000, 9, 2).unwrap().pass);
        }
    }

    #[test]
    fn json_schema() {
        let text = r#"{"kind":"idempotent_pair","openness":"open",
            "b1":{"kind":"ball","norm":"l2","radius":2},
            "b2":{"kind":"modslab","constraints":[{"f":[[1,0]],"c":0.5}]}}"#;
        let s: SetRep = serde_json::from_str(text).unwrap();
        s.validate().unwrap();
        assert_eq!(s.openness(), Some(Openness::Open));
        let k: SetRep = serde_json::from_str(r#"{"kind":"knorm_ball","radius":{"e1":1,"e2":2}}"#).unwrap();
        assert_eq!(k.openness(), Some(Openness::Closed));
        let r: SetRep = serde_json::from_str(r#"{"kind":"raw","name":"cross_sum_lt_2"}"#).unwrap();
        assert_eq!(r, SetRep::raw(RawPredicate::CrossSumLt2));
        let bad: SetRep = serde_json::from_str(r#"{"kind":"knorm_ball","radius":{"e1":1,"e2":0}}"#).unwrap();
        assert!(bad.validate().is_err());
    }
}
