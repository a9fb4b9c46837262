//! Hyperbolic-valued seminorms, seminorm families, basic neighborhoods and
//! the D-metric `d(x, y) = Σ 2^{-n}·p_n(x−y)/(1 + p_n(x−y))`.
//!
//! Every seminorm here acts on each idempotent component separately, so its
//! unit ball is an [`SetRep::IdempotentPair`] and its kernel is
//! `e1·K1 + e2·K2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BcError, Result};
use crate::gauge::{gauge, rel_diff};
use crate::module::{dnorm, ComponentNorm, ModuleVector};
use crate::sampling;
use crate::scalar::{d_sup, Bicomplex, Complex, Component, Hyperbolic};
use crate::sets::{BodyRep, Openness, SampledCheck, SetRep, SlabConstraint, Witness};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DSeminorm {
    /// `e1·n1(x1) + e2·n2(x2)`.
    #[serde(rename = "knorm")]
    KNorm {
        #[serde(default)]
        n1: ComponentNorm,
        #[serde(default)]
        n2: ComponentNorm,
    },
    /// `|x_coord|` in one idempotent component, zero in the other.
    ComponentAbs { which: Component, coord: usize },
    FromGauge { set: SetRep },
    /// `factor·base` with `factor ≥' 0`.
    Scaled { base: Box<DSeminorm>, factor: Hyperbolic },
    /// Pointwise D-supremum.
    Sup { parts: Vec<DSeminorm> },
}

impl DSeminorm {
    pub fn knorm() -> Self {
        DSeminorm::KNorm { n1: ComponentNorm::L2, n2: ComponentNorm::L2 }
    }

    pub fn scaled(base: DSeminorm, factor: Hyperbolic) -> Result<Self> {
        let p = DSeminorm::Scaled { base: Box::new(base), factor };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DSeminorm::KNorm { .. } | DSeminorm::ComponentAbs { .. } => Ok(()),
            DSeminorm::FromGauge { set } => {
                if !set.is_structural() {
                    return Err(BcError::Unsupported(format!("seminorm from {}", set.describe())));
                }
                set.validate()
            }
            DSeminorm::Scaled { base, factor } => {
                if !(factor.is_finite() && factor.is_nonnegative()) {
                    return Err(BcError::InvalidArgument(format!("scale factor must be ≥' 0, got {factor}")));
                }
                base.validate()
            }
            DSeminorm::Sup { parts } => {
                if parts.is_empty() {
                    return Err(BcError::EmptyCollection("sup"));
                }
                parts.iter().try_for_each(DSeminorm::validate)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DSeminorm::KNorm { n1, n2 } => format!("knorm({n1:?},{n2:?})").to_lowercase(),
            DSeminorm::ComponentAbs { which, coord } => format!("component_abs({}, {coord})", which.index() + 1),
            DSeminorm::FromGauge { set } => format!("gauge[{}]", set.describe()),
            DSeminorm::Scaled { base, factor } => format!("({factor})·{}", base.describe()),
            DSeminorm::Sup { parts } => {
                let inner: Vec<String> = parts.iter().map(DSeminorm::describe).collect();
                format!("sup({})", inner.join(", "))
            }
        }
    }

    pub fn eval(&self, x: &ModuleVector) -> Result<Hyperbolic> {
        match self {
            DSeminorm::KNorm { n1, n2 } => Ok(dnorm(x, *n1, *n2)),
            DSeminorm::ComponentAbs { which, coord } => {
                let e = x.entries().get(*coord).ok_or(BcError::IndexOutOfRange { index: *coord, len: x.dim() })?;
                let v = e.component(*which).norm();
                Ok(match which {
                    Component::E1 => Hyperbolic::new_unchecked(v, 0.0),
                    Component::E2 => Hyperbolic::new_unchecked(0.0, v),
                })
            }
            DSeminorm::FromGauge { set } => Ok(gauge(set, x)?.value),
            DSeminorm::Scaled { base, factor } => Ok(*factor * base.eval(x)?),
            DSeminorm::Sup { parts } => {
                let vals = parts.iter().map(|p| p.eval(x)).collect::<Result<Vec<_>>>()?;
                d_sup(&vals)
            }
        }
    }

    /// The component body `{u : p_l(u) ≤ 1}` in `C(i)^dim`.
    pub fn component_body(&self, c: Component, dim: usize) -> Result<BodyRep> {
        let whole = || BodyRep::ModSlab { constraints: vec![] };
        match self {
            DSeminorm::KNorm { n1, n2 } => {
                let norm = if c == Component::E1 { *n1 } else { *n2 };
                Ok(BodyRep::Ball { norm, radius: 1.0 })
            }
            DSeminorm::ComponentAbs { which, coord } => {
                if *coord >= dim {
                    return Err(BcError::IndexOutOfRange { index: *coord, len: dim });
                }
                if *which != c {
                    return Ok(whole());
                }
                let f = (0..dim).map(|j| Complex::new(if j == *coord { 1.0 } else { 0.0 }, 0.0)).collect();
                Ok(BodyRep::ModSlab { constraints: vec![SlabConstraint { f, c: 1.0 }] })
            }
            DSeminorm::FromGauge { set } => set.component_body(c),
            DSeminorm::Scaled { base, factor } => {
                let f = factor.component(c);
                if f == 0.0 {
                    Ok(whole())
                } else {
                    Ok(base.component_body(c, dim)?.scale(1.0 / f))
                }
            }
            DSeminorm::Sup { parts } => Ok(BodyRep::Intersection {
                parts: parts.iter().map(|p| p.component_body(c, dim)).collect::<Result<_>>()?,
            }),
        }
    }

    /// `{x : p(x) <' 1}` (open) or `{x : p(x) ≤' 1}` (closed).
    pub fn unit_set(&self, dim: usize, openness: Openness) -> Result<SetRep> {
        Ok(SetRep::IdempotentPair {
            b1: self.component_body(Component::E1, dim)?,
            b2: self.component_body(Component::E2, dim)?,
            openness,
        })
    }

    /// Whether `p(x) = 0 ⟹ x = 0` on `BC^dim`, decided from the unit ball.
    pub fn is_separating(&self, dim: usize) -> Result<bool> {
        self.unit_set(dim, Openness::Closed)?.is_bounded()
    }

    /// Bases of the component kernels `K1, K2 ⊂ C^dim`.
    pub fn kernel_bases(&self, dim: usize) -> Result<[Vec<Vec<Complex>>; 2]> {
        Ok([
            self.component_body(Component::E1, dim)?.kernel_basis(dim),
            self.component_body(Component::E2, dim)?.kernel_basis(dim),
        ])
    }
}

pub fn eval(p: &DSeminorm, x: &ModuleVector) -> Result<Hyperbolic> {
    p.eval(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormFamily {
    pub seminorms: Vec<DSeminorm>,
    #[serde(default)]
    pub separated_hint: bool,
}

impl SeminormFamily {
    pub fn new(seminorms: Vec<DSeminorm>) -> Result<Self> {
        let f = SeminormFamily { seminorms, separated_hint: false };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seminorms.is_empty() {
            return Err(BcError::EmptyCollection("seminorm family"));
        }
        self.seminorms.iter().try_for_each(DSeminorm::validate)
    }

    pub fn len(&self) -> usize {
        self.seminorms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seminorms.is_empty()
    }

    /// `p_n` for `n ≥ 1`, with `p_n = p_L` past the end.
    pub fn get(&self, n: usize) -> &DSeminorm {
        &self.seminorms[n.clamp(1, self.len()) - 1]
    }

    /// `(q_1, …, q_L)` with `q_m = sup(p_1, …, p_m)`.
    pub fn increasing(&self) -> Result<SeminormFamily> {
        let seminorms = (1..=self.len()).map(|m| sup_family(self, m)).collect::<Result<Vec<_>>>()?;
        Ok(SeminormFamily { seminorms, separated_hint: self.separated_hint })
    }
}

/// `q_m = sup(p_1, …, p_m)`.
pub fn sup_family(family: &SeminormFamily, m: usize) -> Result<DSeminorm> {
    if m == 0 || m > family.len() {
        return Err(BcError::IndexOutOfRange { index: m, len: family.len() });
    }
    if m == 1 {
        return Ok(family.seminorms[0].clone());
    }
    Ok(DSeminorm::Sup { parts: family.seminorms[..m].to_vec() })
}

/// `U(center, ε, p_1, …, p_n) = {y : p_j(y − center) <' ε for all j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    center: ModuleVector,
    epsilon: Hyperbolic,
    seminorms: Vec<DSeminorm>,
}

impl Neighborhood {
    pub fn new(center: ModuleVector, epsilon: Hyperbolic, seminorms: Vec<DSeminorm>) -> Result<Self> {
        if !epsilon.is_strictly_positive() {
            return Err(BcError::InvalidArgument(format!("neighborhood radius must be >' 0, got {epsilon}")));
        }
        if seminorms.is_empty() {
            return Err(BcError::EmptyCollection("neighborhood seminorms"));
        }
        Ok(Neighborhood { center, epsilon, seminorms })
    }

    pub fn center(&self) -> &ModuleVector {
        &self.center
    }

    pub fn epsilon(&self) -> Hyperbolic {
        self.epsilon
    }

    pub fn seminorms(&self) -> &[DSeminorm] {
        &self.seminorms
    }

    pub fn contains(&self, y: &ModuleVector) -> Result<bool> {
        let v = y.sub(&self.center)?;
        for p in &self.seminorms {
            if !p.eval(&v)?.lt_strict(&self.epsilon) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn nbhd_contains(u: &Neighborhood, y: &ModuleVector) -> Result<bool> {
    u.contains(y)
}

/// `p/(1 + p)` per idempotent component.
fn bounded_ratio(p: Hyperbolic) -> Hyperbolic {
    p.map(|v| v / (1.0 + v))
}

/// Partial sums `d_1, …, d_n_max` of the metric series at `x − y`. Terms past
/// the end of the family repeat the last seminorm and are summed in closed
/// form.
pub fn dmetric_partials(family: &SeminormFamily, x: &ModuleVector, y: &ModuleVector, n_max: usize) -> Result<Vec<Hyperbolic>> {
    if n_max == 0 {
        return Err(BcError::InvalidArgument("metric truncation must be ≥ 1".into()));
    }
    let diff = x.sub(y)?;
    let l = family.len();
    let terms = (1..=l.min(n_max))
        .map(|n| family.get(n).eval(&diff).map(bounded_ratio))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(n_max);
    let mut acc = Hyperbolic::ZERO;
    for (k, t) in terms.iter().enumerate() {
        acc += *t * (-((k + 1) as f64)).exp2();
        out.push(acc);
    }
    if n_max > l {
        let last = *terms.last().expect("family is nonempty");
        let head = acc;
        let lf = (-(l as f64)).exp2();
        for n in l + 1..=n_max {
            out.push(head + last * (lf - (-(n as f64)).exp2()));
        }
    }
    Ok(out)
}

/// The metric series truncated after `n_terms` terms. The omitted tail is at
/// most `2^{-n_terms}` in each component.
pub fn dmetric(family: &SeminormFamily, x: &ModuleVector, y: &ModuleVector, n_terms: usize) -> Result<Hyperbolic> {
    if n_terms == 0 {
        return Err(BcError::InvalidArgument("metric truncation must be ≥ 1".into()));
    }
    let diff = x.sub(y)?;
    let l = family.len();
    let mut acc = Hyperbolic::ZERO;
    let mut last = Hyperbolic::ZERO;
    for n in 1..=l.min(n_terms) {
        last = bounded_ratio(family.get(n).eval(&diff)?);
        acc += last * (-(n as f64)).exp2();
    }
    if n_terms > l {
        acc += last * ((-(l as f64)).exp2() - (-(n_terms as f64)).exp2());
    }
    Ok(acc)
}

pub fn tail_bound(n_terms: usize) -> f64 {
    (-(n_terms as f64)).exp2()
}

/// `δ = 2^{-n}·ε/(1 + ε)` so that `d(x, y) <' δ ⟹ p_n(x − y) <' ε`.
pub fn metric_topology_compat(family: &SeminormFamily, n: usize, epsilon: Hyperbolic) -> Result<Hyperbolic> {
    if n == 0 {
        return Err(BcError::InvalidArgument("seminorm index starts at 1".into()));
    }
    if !epsilon.is_strictly_positive() {
        return Err(BcError::InvalidArgument(format!("ε must be >' 0, got {epsilon}")));
    }
    family.validate()?;
    Ok(bounded_ratio(epsilon) * (-(n as f64)).exp2())
}

// ---------------------------------------------------------------------------
// sampled checks
// ---------------------------------------------------------------------------

/// `p(0) = 0`, `p ≥' 0`, homogeneity to `tol_rel` (scalars cycle through
/// invertible and both null-cone strata), subadditivity and the reverse
/// triangle inequality with `slack`. The residual is the relative
/// homogeneity error.
pub fn seminorm_axiom_check(p: &DSeminorm, samples: usize, seed: u64, dim: usize, tol_rel: f64, slack: f64) -> Result<SampledCheck> {
    let zero = p.eval(&ModuleVector::zeros(dim))?;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let y = sampling::vector(&mut rng, dim);
            let lambda = sampling::stratified_scalar(&mut rng, sampling::ScalarStratum::for_index(i));
            let (px, py) = (p.eval(&x)?, p.eval(&y)?);
            let psum = p.eval(&x.add(&y)?)?;
            let pdiff = p.eval(&x.sub(&y)?)?;
            let rel = rel_diff(p.eval(&x.scale(lambda))?, lambda.knorm() * px);
            let over = |a: Hyperbolic, b: Hyperbolic| (a.a1() - b.a1()).max(a.a2() - b.a2());
            let point = |detail: String| Some(Witness::Point { x: x.clone(), detail });
            let witness = if !(px.is_nonnegative() && py.is_nonnegative()) {
                point(format!("negative value {px}"))
            } else if over(psum, px + py) > slack {
                point(format!("subadditivity fails with y = {}", serde_json::to_string(&y).unwrap_or_default()))
            } else if over((px - py).abs_k(), pdiff) > slack {
                point(format!("reverse triangle fails with y = {}", serde_json::to_string(&y).unwrap_or_default()))
            } else if rel > tol_rel {
                Some(Witness::Balanced { x: x.clone(), lambda })
            } else {
                None
            };
            Ok((witness, rel))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut check = SampledCheck::from_measured(outcomes);
    if zero != Hyperbolic::ZERO {
        check = SampledCheck::from_outcomes(vec![Some(Witness::Point {
            x: ModuleVector::zeros(dim),
            detail: format!("p(0) = {zero}"),
        })])
        .chain(check);
    }
    Ok(check)
}

fn kernel_element<R: rand::Rng + ?Sized>(rng: &mut R, bases: &[Vec<Vec<Complex>>; 2], dim: usize) -> ModuleVector {
    let combo = |rng: &mut R, basis: &[Vec<Complex>]| {
        let mut v = vec![Complex::new(0.0, 0.0); dim];
        for b in basis {
            let a = sampling::complex_gaussian(rng, 1.0);
            for (vj, bj) in v.iter_mut().zip(b) {
                *vj += a * bj;
            }
        }
        v
    };
    let x1 = combo(rng, &bases[0]);
    let x2 = combo(rng, &bases[1]);
    ModuleVector::join_unchecked(&x1, &x2)
}

/// Draws `x, y` from the kernel of `p` and `λ, γ ∈ BC`, and checks
/// `p(λx + γy) ≤' tol`. The residual is the largest component of that value.
pub fn kernel_check(p: &DSeminorm, samples: usize, seed: u64, dim: usize, tol: f64) -> Result<SampledCheck> {
    let bases = p.kernel_bases(dim)?;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = kernel_element(&mut rng, &bases, dim);
            let y = kernel_element(&mut rng, &bases, dim);
            let (lambda, gamma) = if i == 0 {
                (Bicomplex::ZERO, Bicomplex::ZERO)
            } else {
                (
                    sampling::stratified_scalar(&mut rng, sampling::ScalarStratum::for_index(i)),
                    sampling::stratified_scalar(&mut rng, sampling::ScalarStratum::for_index(i + 1)),
                )
            };
            let z = x.scale(lambda).add(&y.scale(gamma))?;
            let v = p.eval(&z)?;
            let m = v.a1().max(v.a2());
            Ok(((m > tol).then(|| Witness::Point { x: z, detail: format!("p = {v}") }), m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}

/// `q_m(x) ≤' q_{m+1}(x)` for consecutive sup-family members.
pub fn sup_monotone_check(family: &SeminormFamily, samples: usize, seed: u64, dim: usize) -> Result<SampledCheck> {
    let sups = (1..=family.len()).map(|m| sup_family(family, m)).collect::<Result<Vec<_>>>()?;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let vals = sups.iter().map(|q| q.eval(&x)).collect::<Result<Vec<_>>>()?;
            let bad = vals.windows(2).position(|w| !w[0].leq(&w[1]));
            Ok(bad.map(|m| Witness::Point { x, detail: format!("q_{} ≰' q_{}", m + 1, m + 2) }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_outcomes(outcomes))
}

/// Result of the separation search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationCheck {
    pub pass: bool,
    pub samples_run: usize,
    /// A nonzero `x` on which every seminorm of the family vanishes.
    pub witness: Option<ModuleVector>,
    /// Whether the joint unit ball is bounded.
    pub structural: bool,
}

/// Looks for a nonzero `x` with `p(x) ≤' tol` for every member: first the
/// `e1`- and `e2`-supported basis vectors, then random elements of the joint
/// kernel, then random vectors. Passing also needs the joint unit ball to be
/// bounded; a pass is evidence from the sample, not a proof.
pub fn is_separated_sampled(family: &SeminormFamily, samples: usize, seed: u64, dim: usize, tol: f64) -> Result<SeparationCheck> {
    let joint = DSeminorm::Sup { parts: family.seminorms.clone() };
    let vanishes = |x: &ModuleVector| -> Result<bool> {
        for p in &family.seminorms {
            let v = p.eval(x)?;
            if v.a1() > tol || v.a2() > tol {
                return Ok(false);
            }
        }
        Ok(!x.is_zero())
    };
    let mut probes = Vec::new();
    for c in Component::BOTH {
        for k in 0..dim {
            probes.push(ModuleVector::basis(dim, k, c.unit())?);
        }
    }
    for x in &probes {
        if vanishes(x)? {
            return Ok(SeparationCheck { pass: false, samples_run: probes.len(), witness: Some(x.clone()), structural: false });
        }
    }
    let bases = joint.kernel_bases(dim)?;
    let found = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = if i % 2 == 0 { kernel_element(&mut rng, &bases, dim) } else { sampling::vector(&mut rng, dim) };
            Ok(vanishes(&x)?.then_some(x))
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = found.into_iter().flatten().next();
    let structural = joint.is_separating(dim)?;
    Ok(SeparationCheck { pass: witness.is_none() && structural, samples_run: probes.len() + samples, witness, structural })
}

/// Symmetry (exact), `d(x, x) = 0`, identity of indiscernibles when the
/// family separates points, and the triangle inequality with
/// `slack + 2^{1−N}`. Every fourth triple reuses `x` as `y`.
pub fn metric_axiom_check(family: &SeminormFamily, samples: usize, seed: u64, dim: usize, n_terms: usize, slack: f64) -> Result<SampledCheck> {
    let separated = DSeminorm::Sup { parts: family.seminorms.clone() }.is_separating(dim)?;
    let zero_band = 2.0 * tail_bound(n_terms);
    let tri_slack = slack + 2.0 * tail_bound(n_terms);
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let y = if i % 4 == 0 { x.clone() } else { sampling::vector(&mut rng, dim) };
            let z = sampling::vector(&mut rng, dim);
            let d = |a: &ModuleVector, b: &ModuleVector| dmetric(family, a, b, n_terms);
            let (dxy, dyx, dyz, dxz) = (d(&x, &y)?, d(&y, &x)?, d(&y, &z)?, d(&x, &z)?);
            let excess = (dxz.a1() - dxy.a1() - dyz.a1()).max(dxz.a2() - dxy.a2() - dyz.a2());
            let point = |detail: String| Some(Witness::Point { x: x.clone(), detail });
            let witness = if dxy != dyx {
                point(format!("d(x,y) = {dxy} but d(y,x) = {dyx}"))
            } else if d(&x, &x)? != Hyperbolic::ZERO {
                point("d(x,x) ≠ 0".into())
            } else if excess > tri_slack {
                point(format!("triangle inequality fails by {excess:e}"))
            } else if separated && x != y && dxy.a1() <= zero_band && dxy.a2() <= zero_band {
                point("distinct points at distance 0".into())
            } else {
                None
            };
            Ok((witness, excess))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}

/// A pair `x ≠ y` with `d(x, y) ≤' tol`, built from a separation witness.
pub fn zero_distance_pair(family: &SeminormFamily, samples: usize, seed: u64, dim: usize, n_terms: usize, tol: f64) -> Result<Option<(ModuleVector, ModuleVector)>> {
    let sep = is_separated_sampled(family, samples, seed, dim, tol)?;
    let Some(v) = sep.witness else {
        return Ok(None);
    };
    let x = sampling::dyadic_vector(&mut sampling::stream_rng(seed, 0), dim);
    let y = x.add(&v)?;
    let d = dmetric(family, &x, &y, n_terms)?;
    Ok((d.a1() <= tol && d.a2() <= tol && x != y).then_some((x, y)))
}

/// Exact translation invariance `d(x+z, y+z) = d(x, y)` at every truncation
/// `1..=n_terms`, on dyadic vectors so the translated differences are exact.
pub fn translation_check(family: &SeminormFamily, samples: usize, seed: u64, dim: usize, n_terms: usize) -> Result<SampledCheck> {
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::dyadic_vector(&mut rng, dim);
            let y = sampling::dyadic_vector(&mut rng, dim);
            let z = sampling::dyadic_vector(&mut rng, dim);
            let a = dmetric_partials(family, &x, &y, n_terms)?;
            let b = dmetric_partials(family, &x.add(&z)?, &y.add(&z)?, n_terms)?;
            let bad = a.iter().zip(&b).position(|(p, q)| p != q);
            Ok(bad.map(|n| Witness::Point { x, detail: format!("translation changes d_{}", n + 1) }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_outcomes(outcomes))
}

/// Partial sums are nondecreasing in `N` and `d_M − d_N ≤' 2^{-N}` for
/// `N < M ≤ n_max`, up to four ulps of rounding in the sums.
pub fn series_check(family: &SeminormFamily, samples: usize, seed: u64, dim: usize, n_max: usize) -> Result<SampledCheck> {
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let y = sampling::vector(&mut rng, dim);
            let partials = dmetric_partials(family, &x, &y, n_max)?;
            let last = *partials.last().expect("n_max ≥ 1");
            let round = 4.0 * f64::EPSILON * last.a1().max(last.a2());
            let mut worst = f64::NEG_INFINITY;
            for (k, p) in partials.iter().enumerate() {
                let gap = (last.a1() - p.a1()).max(last.a2() - p.a2());
                worst = worst.max(gap - tail_bound(k + 1));
                if gap > tail_bound(k + 1) + round {
                    return Ok((Some(Witness::Point { x, detail: format!("tail after {} terms is {gap:e}", k + 1) }), worst));
                }
            }
            if let Some(k) = partials.windows(2).position(|w| !w[0].leq(&w[1])) {
                return Ok((Some(Witness::Point { x, detail: format!("d_{} > d_{}", k + 1, k + 2) }), worst));
            }
            Ok((None, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}

/// Samples pairs at distances spread over many scales and checks
/// `d(x, y) <' δ ⟹ p_n(x − y) <' ε` with `δ` from
/// [`metric_topology_compat`]. The family is made increasing first.
pub fn metric_topology_check(family: &SeminormFamily, n: usize, epsilon: Hyperbolic, samples: usize, seed: u64, dim: usize, n_terms: usize) -> Result<SampledCheck> {
    if n_terms < n {
        return Err(BcError::InvalidArgument(format!("truncation {n_terms} must reach seminorm index {n}")));
    }
    let inc = family.increasing()?;
    let delta = metric_topology_compat(&inc, n, epsilon)?;
    let pn = inc.get(n).clone();
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let step = sampling::vector(&mut rng, dim);
            let t = sampling::log_uniform(&mut rng, -40.0, 4.0);
            let y = x.add(&step.scale(Bicomplex::real(t)?))?;
            let d = dmetric(&inc, &x, &y, n_terms)?;
            let p = pn.eval(&x.sub(&y)?)?;
            let bad = d.lt_strict(&delta) && !p.lt_strict(&epsilon);
            Ok(bad.then(|| Witness::Point { x, detail: format!("d = {d} <' δ = {delta} but p_{n} = {p}") }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_outcomes(outcomes))
}

/// `y ∈ U(x, ε, p_1, …, p_k) ⟺ y ∈ U(x, ε, p_j)` for every `j`, with
/// centers, radii and offsets drawn at random.
pub fn nbhd_consistency_check(family: &SeminormFamily, samples: usize, seed: u64, dim: usize) -> Result<SampledCheck> {
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let center = sampling::vector(&mut rng, dim);
            let eps = Hyperbolic::new(sampling::log_uniform(&mut rng, -3.0, 3.0), sampling::log_uniform(&mut rng, -3.0, 3.0))?;
            let y = center.add(&sampling::vector(&mut rng, dim))?;
            let joint = Neighborhood::new(center.clone(), eps, family.seminorms.clone())?.contains(&y)?;
            let mut all = true;
            for p in &family.seminorms {
                all &= Neighborhood::new(center.clone(), eps, vec![p.clone()])?.contains(&y)?;
            }
            Ok((joint != all).then(|| Witness::Point { x: y, detail: format!("joint {joint}, single {all}") }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_outcomes(outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn abs1(coord: usize) -> DSeminorm {
        DSeminorm::ComponentAbs { which: Component::E1, coord }
    }

    fn abs2(coord: usize) -> DSeminorm {
        DSeminorm::ComponentAbs { which: Component::E2, coord }
    }

    #[test]
    fn component_abs_is_not_a_norm() {
        let e2 = ModuleVector::splat(1, Bicomplex::E2);
        assert_eq!(abs1(0).eval(&e2).unwrap(), Hyperbolic::ZERO);
        assert!(!e2.is_zero());
        assert!(!abs1(0).is_separating(1).unwrap());
        assert!(DSeminorm::knorm().is_separating(3).unwrap());
    }

    #[test]
    fn knorm_at_zero() {
        assert_eq!(DSeminorm::knorm().eval(&ModuleVector::zeros(2)).unwrap(), Hyperbolic::ZERO);
    }

    #[test]
    fn gauge_of_unit_ball_is_dnorm() {
        let p = DSeminorm::FromGauge { set: SetRep::knorm_ball(Hyperbolic::ONE, Openness::Closed).unwrap() };
        let mut rng = sampling::stream_rng(1, 0);
        for _ in 0..1000 {
            let x = sampling::vector(&mut rng, 2);
            assert_eq!(p.eval(&x).unwrap(), DSeminorm::knorm().eval(&x).unwrap());
        }
    }

    #[test]
    fn sup_family_examples() {
        let fam = SeminormFamily::new(vec![abs1(0), abs2(0)]).unwrap();
        let q = sup_family(&fam, 2).unwrap();
        let z = Bicomplex::from_parts(0.3, -1.1, 2.0, 0.7).unwrap();
        assert_eq!(q.eval(&ModuleVector::splat(1, z)).unwrap(), z.knorm());
        assert_eq!(sup_family(&fam, 1).unwrap(), abs1(0));
        assert!(matches!(sup_family(&fam, 3), Err(BcError::IndexOutOfRange { .. })));
        assert!(sup_monotone_check(&fam, 1000, 2, 1).unwrap().pass);
    }

    #[test]
    fn separation_examples() {
        let lone = SeminormFamily::new(vec![abs1(0)]).unwrap();
        let r = is_separated_sampled(&lone, 100, 3, 1, 1e-12).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness, Some(ModuleVector::basis(1, 0, Bicomplex::E2).unwrap()));
        let r = is_separated_sampled(&lone, 100, 3, 2, 1e-12).unwrap();
        assert_eq!(r.witness, Some(ModuleVector::basis(2, 1, Bicomplex::E1).unwrap()));
        assert!(is_separated_sampled(&SeminormFamily::new(vec![DSeminorm::knorm()]).unwrap(), 100, 3, 2, 1e-12).unwrap().pass);
        let all = SeminormFamily::new(vec![abs1(0), abs1(1), abs2(0), abs2(1)]).unwrap();
        assert!(is_separated_sampled(&all, 100, 3, 2, 1e-12).unwrap().pass);
        let partial = SeminormFamily::new(vec![abs1(0), abs2(0), abs2(1)]).unwrap();
        let r = is_separated_sampled(&partial, 100, 3, 2, 1e-12).unwrap();
        assert_eq!(r.witness, Some(ModuleVector::basis(2, 1, Bicomplex::E1).unwrap()));
    }

    #[test]
    fn neighborhood_examples() {
        let u = Neighborhood::new(ModuleVector::zeros(1), Hyperbolic::ONE, vec![DSeminorm::knorm()]).unwrap();
        let half = Bicomplex::real(0.5).unwrap();
        assert!(u.contains(&ModuleVector::splat(1, half)).unwrap());
        assert!(u.contains(&ModuleVector::splat(1, Bicomplex::E1 * half)).unwrap());
        assert!(!u.contains(&ModuleVector::splat(1, Bicomplex::ONE)).unwrap());
        assert!(Neighborhood::new(ModuleVector::zeros(1), Hyperbolic::E1, vec![DSeminorm::knorm()]).is_err());
    }

    #[test]
    fn dmetric_examples() {
        let fam = SeminormFamily::new(vec![DSeminorm::knorm()]).unwrap();
        let x = ModuleVector::splat(1, Bicomplex::ONE);
        let y = ModuleVector::zeros(1);
        let d = dmetric(&fam, &x, &y, 30).unwrap();
        assert!((d.a1() - 0.5).abs() <= tail_bound(30) && (d.a2() - 0.5).abs() <= tail_bound(30));
        assert_eq!(dmetric(&fam, &x, &x, 7).unwrap(), Hyperbolic::ZERO);
        let partials = dmetric_partials(&fam, &x, &y, 40).unwrap();
        assert_eq!(partials[29], d);
        assert_eq!(partials[39], dmetric(&fam, &x, &y, 40).unwrap());
    }

    #[test]
    fn compat_examples() {
        let fam = SeminormFamily::new(vec![DSeminorm::knorm()]).unwrap();
        assert_eq!(metric_topology_compat(&fam, 1, Hyperbolic::ONE).unwrap(), Hyperbolic::splat(0.25).unwrap());
        let d = metric_topology_compat(&fam, 3, Hyperbolic::new(1.0, 3.0).unwrap()).unwrap();
        assert_eq!(d, Hyperbolic::new(0.5 / 8.0, 0.75 / 8.0).unwrap());
        assert!(metric_topology_compat(&fam, 1, Hyperbolic::E2).is_err());
    }

    #[test]
    fn non_separated_family_has_zero_distance_pair() {
        let fam = SeminormFamily::new(vec![abs1(0)]).unwrap();
        let (x, y) = zero_distance_pair(&fam, 10, 5, 1, 64, 1e-12).unwrap().unwrap();
        assert_ne!(x, y);
        assert_eq!(dmetric(&fam, &x, &y, 64).unwrap(), Hyperbolic::ZERO);
    }

    #[test]
    fn scaled_with_zero_component_is_valid_but_not_separating() {
        let p = DSeminorm::scaled(DSeminorm::knorm(), Hyperbolic::E1).unwrap();
        assert!(seminorm_axiom_check(&p, 2000, 6, 2, 1e-12, 1e-9).unwrap().pass);
        assert!(!p.is_separating(2).unwrap());
        assert!(DSeminorm::scaled(DSeminorm::knorm(), Hyperbolic::new_unchecked(-1.0, 1.0)).is_err());
    }

    #[test]
    fn kernel_of_component_abs() {
        let p = abs1(1);
        let k = p.kernel_bases(2).unwrap();
        assert_eq!(k[0].len(), 1);
        assert_eq!(k[1].len(), 2);
        assert!(kernel_check(&p, 2000, 7, 2, 1e-12).unwrap().pass);
        assert!(kernel_check(&DSeminorm::knorm(), 100, 7, 2, 1e-12).unwrap().pass);
        let _ = c(0.0, 0.0);
    }

    #[test]
    fn family_json() {
        let text = r#"{"seminorms":[{"kind":"knorm"},{"kind":"component_abs","which":1,"coord":0},
            {"kind":"scaled","base":{"kind":"knorm","n1":"l1"},"factor":{"e1":2,"e2":0}},
            {"kind":"from_gauge","set":{"kind":"knorm_ball","radius":1}}]}"#;
        let fam: SeminormFamily = serde_json::from_str(text).unwrap();
        fam.validate().unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.seminorms[1], abs1(0));
    }
}
