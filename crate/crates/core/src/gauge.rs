//! Hyperbolic-valued Minkowski functionals
//! `q_B(x) = inf_D {α >' 0 : x ∈ α·B}`.
//!
//! [`gauge`] uses the closed form per component body. [`gauge_bisect`] only
//! asks the set for membership and serves as the oracle for it.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{BcError, Result};
use crate::module::ModuleVector;
use crate::sampling;
use crate::scalar::{Bicomplex, Complex, Component, Hyperbolic};
use crate::seminorm::DSeminorm;
use crate::sets::{BodyRep, Openness, SampledCheck, SetRep, Witness};

pub const DEFAULT_BISECT_TOL: f64 = 1e-8;

/// Upper bracket cap for the bisection search.
const BRACKET_CAP: f64 = 18446744073709551616.0; // 2^64

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeMethod {
    ClosedForm,
    Bisection,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeResult {
    pub value: Hyperbolic,
    pub method: GaugeMethod,
    /// Bisection width; `None` for the closed form.
    pub tol: Option<f64>,
}

impl GaugeResult {
    pub fn render(&self) -> String {
        self.value.render()
    }
}

impl Serialize for GaugeResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            e1: f64,
            e2: f64,
            method: GaugeMethod,
            tol: Option<f64>,
        }
        Out { e1: self.value.a1(), e2: self.value.a2(), method: self.method, tol: self.tol }.serialize(s)
    }
}

/// Classical gauge of a component body.
pub fn gauge_component(b: &BodyRep, u: &[Complex]) -> f64 {
    b.gauge(u)
}

pub fn gauge(s: &SetRep, x: &ModuleVector) -> Result<GaugeResult> {
    if !s.is_structural() {
        return Err(BcError::Unsupported(format!("gauge on {}", s.describe())));
    }
    if let Some(d) = s.dim() {
        if d != x.dim() {
            return Err(BcError::DimensionMismatch { expected: d, got: x.dim() });
        }
    }
    let mut g = [0.0; 2];
    for c in Component::BOTH {
        let v = gauge_component(&s.component_body(c)?, &x.component(c));
        if !v.is_finite() {
            return Err(BcError::NotAbsorbed(format!("component {} of x never enters the set", c.index() + 1)));
        }
        g[c.index()] = v;
    }
    Ok(GaugeResult { value: Hyperbolic::new_unchecked(g[0], g[1]), method: GaugeMethod::ClosedForm, tol: None })
}

/// Bisection on `α ↦ [e_l·x/α ∈ S]` for each idempotent component. The
/// upper bracket doubles from 1 up to `2^64`; the midpoint of the final
/// bracket of width `≤ tol` is returned.
pub fn gauge_bisect(s: &SetRep, x: &ModuleVector, tol: f64) -> Result<GaugeResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(BcError::InvalidArgument(format!("bisection tolerance must be positive, got {tol}")));
    }
    let mut g = [0.0; 2];
    for c in Component::BOTH {
        let xl = x.project(c);
        if x.component(c).iter().all(|z| *z == Complex::new(0.0, 0.0)) {
            continue;
        }
        let inside = |alpha: f64| -> Result<bool> { s.contains(&xl.scale(Bicomplex::real(1.0 / alpha)?)) };
        let mut hi = 1.0;
        while !inside(hi)? {
            hi *= 2.0;
            if hi > BRACKET_CAP {
                return Err(BcError::NotAbsorbed(format!(
                    "component {} not absorbed below 2^64",
                    c.index() + 1
                )));
            }
        }
        let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        g[c.index()] = 0.5 * (lo + hi);
    }
    Ok(GaugeResult { value: Hyperbolic::new_unchecked(g[0], g[1]), method: GaugeMethod::Bisection, tol: Some(tol) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitKind {
    /// `A_B = {q_B <' 1}`
    Strict,
    /// `C_B = {q_B ≤' 1}`
    Nonstrict,
}

pub fn unit_set(s: &SetRep, kind: UnitKind) -> Result<SetRep> {
    match kind {
        UnitKind::Strict => s.interior(),
        UnitKind::Nonstrict => s.closure(),
    }
}

/// Whether `q <' 1` (strict) or `q ≤' 1` with `slack` pushing the point
/// inward (`slack < 0`) or outward (`slack > 0`).
fn below_one(q: Hyperbolic, strict: bool, slack: f64) -> bool {
    let t = 1.0 + slack;
    if strict {
        q.a1() < t && q.a2() < t
    } else {
        q.a1() <= t && q.a2() <= t
    }
}

/// Samples points around `S` and checks
/// `B° ⊂ A_B ⊂ B ⊂ C_B ⊂ cl(B)`, plus `B = A_B` for open and `B = C_B` for
/// closed `S`. `A_B` and `C_B` are decided from gauge values, the other three
/// sets from membership. A failed inclusion `P ⊂ Q` at `x` only counts when
/// `x` stays outside `Q` after moving its gauge by `slack` toward `Q`.
pub fn gauge_chain_check(s: &SetRep, samples: usize, seed: u64, dim: usize, slack: f64) -> Result<SampledCheck> {
    let int = s.interior()?;
    let clo = s.closure()?;
    let open = s.openness() == Some(Openness::Open);
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = crate::sets::scatter_point(s, &mut rng, dim);
            let q = gauge(s, &x)?.value;
            let in_int = int.contains(&x)?;
            let in_b = s.contains(&x)?;
            let in_clo = clo.contains(&x)?;
            let in_a = below_one(q, true, 0.0);
            let in_c = below_one(q, false, 0.0);
            // loosened versions of each set for the right-hand side of an inclusion
            let a_loose = below_one(q, true, slack);
            let c_loose = below_one(q, false, slack);
            let near = s.near_boundary(&x);
            let mut failures = Vec::new();
            if in_int && !a_loose {
                failures.push("interior ⊄ A_B");
            }
            if in_a && !in_b && !near {
                failures.push("A_B ⊄ B");
            }
            if in_b && !c_loose {
                failures.push("B ⊄ C_B");
            }
            if in_c && !in_clo && !near {
                failures.push("C_B ⊄ closure");
            }
            if open && in_b != in_a && !near {
                failures.push("open B ≠ A_B");
            }
            if !open && in_b != in_c && !near {
                failures.push("closed B ≠ C_B");
            }
            Ok(failures.first().map(|f| Witness::Point { x, detail: format!("{f} (q = {q})") }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_outcomes(outcomes))
}

/// The gauge of a bounded set, as a separating D-seminorm.
#[derive(Clone, Debug, PartialEq)]
pub struct DNorm {
    set: SetRep,
}

impl DNorm {
    pub fn set(&self) -> &SetRep {
        &self.set
    }

    pub fn seminorm(&self) -> DSeminorm {
        DSeminorm::FromGauge { set: self.set.clone() }
    }

    pub fn eval(&self, x: &ModuleVector) -> Result<Hyperbolic> {
        Ok(gauge(&self.set, x)?.value)
    }

    /// Componentwise `c >' 0` with `q(x) ≥' c·(‖x1‖₂, ‖x2‖₂)` on `BC^dim`.
    pub fn lower_bound(&self, dim: usize) -> Result<Hyperbolic> {
        let c1 = self.set.component_body(Component::E1)?.l2_lower_bound(dim);
        let c2 = self.set.component_body(Component::E2)?.l2_lower_bound(dim);
        Hyperbolic::new(c1, c2)
    }
}

pub fn dnorm_from_bounded_set(s: &SetRep) -> Result<DNorm> {
    if !s.is_bounded()? {
        return Err(BcError::Unbounded(s.describe()));
    }
    Ok(DNorm { set: s.clone() })
}

/// Relative distance of two hyperbolic numbers, measured against the
/// largest component of either.
pub fn rel_diff(a: Hyperbolic, b: Hyperbolic) -> f64 {
    let scale = [a.a1(), a.a2(), b.a1(), b.a2()].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    ((a.a1() - b.a1()).abs()).max((a.a2() - b.a2()).abs()) / scale
}

/// Subadditivity with `slack` and `|λ|_k`-homogeneity to `tol_rel`, on
/// samples from `BC^dim` with scalars cycling through invertible,
/// `e1`-null-cone and `e2`-null-cone draws. The residual is the relative
/// homogeneity error.
pub fn gauge_seminorm_check(s: &SetRep, samples: usize, seed: u64, dim: usize, slack: f64, tol_rel: f64) -> Result<SampledCheck> {
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let y = sampling::vector(&mut rng, dim);
            let lambda = sampling::stratified_scalar(&mut rng, sampling::ScalarStratum::for_index(i));
            let q = |v: &ModuleVector| gauge(s, v).map(|g| g.value);
            let (qx, qy, qs) = (q(&x)?, q(&y)?, q(&x.add(&y)?)?);
            let excess = (qs.a1() - qx.a1() - qy.a1()).max(qs.a2() - qx.a2() - qy.a2());
            let lhs = q(&x.scale(lambda))?;
            let rhs = lambda.knorm() * qx;
            let rel = rel_diff(lhs, rhs);
            let witness = if excess > slack {
                Some(Witness::Point { x: x.clone(), detail: format!("subadditivity fails with y = {y:?}, excess {excess:e}") })
            } else if rel > tol_rel {
                Some(Witness::Balanced { x, lambda })
            } else {
                None
            };
            Ok((witness, rel))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}

/// Compares the closed form with the bisection oracle on `points` samples;
/// the residual is the componentwise absolute difference.
pub fn gauge_oracle_check(s: &SetRep, points: usize, seed: u64, dim: usize, bisect_tol: f64) -> Result<SampledCheck> {
    let outcomes = (0..points)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let x = sampling::vector(&mut rng, dim);
            let a = gauge(s, &x)?.value;
            let b = gauge_bisect(s, &x, bisect_tol)?.value;
            let d = (a.a1() - b.a1()).abs().max((a.a2() - b.a2()).abs());
            let bad = d > bisect_tol + 1e-12;
            Ok((bad.then(|| Witness::Point { x, detail: format!("closed form {a}, bisection {b}") }), d))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}

/// `gauge(λ·S, x) = gauge(S, x)/|λ|_k` for invertible `λ`, to `tol_rel`.
pub fn gauge_scaling_check(s: &SetRep, samples: usize, seed: u64, dim: usize, tol_rel: f64) -> Result<SampledCheck> {
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i as u64);
            let lambda = sampling::stratified_scalar(&mut rng, sampling::ScalarStratum::Invertible);
            let x = sampling::vector(&mut rng, dim);
            let lhs = gauge(&s.scale(lambda)?, &x)?.value;
            let rhs = gauge(s, &x)?.value.checked_div(&lambda.knorm())?;
            let rel = rel_diff(lhs, rhs);
            Ok(((rel > tol_rel).then_some(Witness::Balanced { x, lambda }), rel))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCheck::from_measured(outcomes))
}
