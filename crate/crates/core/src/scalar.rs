//! Bicomplex and hyperbolic scalars.
//!
//! A bicomplex number is stored in its cartesian form `Z = w1 + j·w2` with
//! `w1, w2 ∈ C(i)`. The idempotent form `Z = e1·z1 + e2·z2` is derived on
//! demand through `z1 = w1 − i·w2`, `z2 = w1 + i·w2`; in that basis addition
//! and multiplication act componentwise.
//!
//! Hyperbolic numbers are stored in the idempotent basis `α = a1·e1 + a2·e2`,
//! which is where the partial order `≤'` and the lattice operations live.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub use num_complex::Complex64 as Complex;

use crate::error::{BcError, Result};

/// Idempotent components with magnitude at or below this are treated as zero
/// when classifying zero divisors.
pub const NULL_CONE_TOL: f64 = 1e-12;

const I: Complex = Complex::new(0.0, 1.0);

/// One of the two idempotent components `e1`, `e2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Component {
    E1,
    E2,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::E1, Component::E2];

    pub fn index(self) -> usize {
        match self {
            Component::E1 => 0,
            Component::E2 => 1,
        }
    }

    pub fn other(self) -> Component {
        match self {
            Component::E1 => Component::E2,
            Component::E2 => Component::E1,
        }
    }

    /// The idempotent `e1` or `e2` as a bicomplex number.
    pub fn unit(self) -> Bicomplex {
        match self {
            Component::E1 => Bicomplex::E1,
            Component::E2 => Bicomplex::E2,
        }
    }
}

impl TryFrom<u8> for Component {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Component::E1),
            2 => Ok(Component::E2),
            _ => Err(format!("idempotent component must be 1 or 2, got {v}")),
        }
    }
}

impl From<Component> for u8 {
    fn from(c: Component) -> u8 {
        c.index() as u8 + 1
    }
}

fn finite_c(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

// ---------------------------------------------------------------------------
// Bicomplex
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Bicomplex {
    w1: Complex,
    w2: Complex,
}

/// The three bicomplex conjugations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugation {
    /// `w̄1 + j·w̄2`
    Dag1,
    /// `w1 − j·w2`
    Dag2,
    /// `w̄1 − j·w̄2`, the composition of the other two.
    Dag3,
}

/// The three squared moduli `Z·Z^†`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulus {
    /// `Z·Z^{†2} = w1² + w2²`, a complex number in `C(i)`.
    ISq,
    /// `Z·Z^{†1}`, with real `w1` and `w2` parts (an element of `C(j)`).
    JSq,
    /// `Z·Z^{†3}`, a hyperbolic number.
    KSq,
}

impl Bicomplex {
    pub const ZERO: Bicomplex = Bicomplex::raw(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    pub const ONE: Bicomplex = Bicomplex::raw(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    pub const I: Bicomplex = Bicomplex::raw(Complex::new(0.0, 1.0), Complex::new(0.0, 0.0));
    pub const J: Bicomplex = Bicomplex::raw(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
    /// `k = i·j`
    pub const K: Bicomplex = Bicomplex::raw(Complex::new(0.0, 0.0), Complex::new(0.0, 1.0));
    /// `e1 = (1 + k)/2`
    pub const E1: Bicomplex = Bicomplex::raw(Complex::new(0.5, 0.0), Complex::new(0.0, 0.5));
    /// `e2 = (1 − k)/2`
    pub const E2: Bicomplex = Bicomplex::raw(Complex::new(0.5, 0.0), Complex::new(0.0, -0.5));

    const fn raw(w1: Complex, w2: Complex) -> Self {
        Bicomplex { w1, w2 }
    }

    /// Cartesian constructor `w1 + j·w2`. Rejects NaN and infinities.
    pub fn new(w1: Complex, w2: Complex) -> Result<Self> {
        if finite_c(w1) && finite_c(w2) {
            Ok(Bicomplex { w1, w2 })
        } else {
            Err(BcError::NonFinite("bicomplex"))
        }
    }

    /// `a + b·i + c·j + d·k`
    pub fn from_parts(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(Complex::new(a, b), Complex::new(c, d))
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::from_parts(x, 0.0, 0.0, 0.0)
    }

    pub fn from_complex(z: Complex) -> Result<Self> {
        Self::new(z, Complex::new(0.0, 0.0))
    }

    /// Builds `e1·z1 + e2·z2`.
    pub fn from_idempotent(z1: Complex, z2: Complex) -> Result<Self> {
        if !(finite_c(z1) && finite_c(z2)) {
            return Err(BcError::NonFinite("bicomplex"));
        }
        Ok(Self::from_idempotent_unchecked(z1, z2))
    }

    pub(crate) fn from_idempotent_unchecked(z1: Complex, z2: Complex) -> Self {
        Bicomplex {
            w1: (z1 + z2) * 0.5,
            w2: I * (z1 - z2) * 0.5,
        }
    }

    pub fn w1(&self) -> Complex {
        self.w1
    }

    pub fn w2(&self) -> Complex {
        self.w2
    }

    /// `(a, b, c, d)` with `Z = a + b·i + c·j + d·k`.
    pub fn parts(&self) -> [f64; 4] {
        [self.w1.re, self.w1.im, self.w2.re, self.w2.im]
    }

    /// `(z1, z2)` with `Z = e1·z1 + e2·z2`.
    pub fn idempotent(&self) -> (Complex, Complex) {
        let iw2 = I * self.w2;
        (self.w1 - iw2, self.w1 + iw2)
    }

    pub fn component(&self, c: Component) -> Complex {
        let (z1, z2) = self.idempotent();
        match c {
            Component::E1 => z1,
            Component::E2 => z2,
        }
    }

    pub fn is_finite(&self) -> bool {
        finite_c(self.w1) && finite_c(self.w2)
    }

    pub fn is_zero(&self) -> bool {
        *self == Bicomplex::ZERO || (self.w1.norm() == 0.0 && self.w2.norm() == 0.0)
    }

    pub fn scale(&self, s: f64) -> Bicomplex {
        Bicomplex { w1: self.w1 * s, w2: self.w2 * s }
    }

    pub fn conj(&self, kind: Conjugation) -> Bicomplex {
        match kind {
            Conjugation::Dag1 => Bicomplex { w1: self.w1.conj(), w2: self.w2.conj() },
            Conjugation::Dag2 => Bicomplex { w1: self.w1, w2: -self.w2 },
            Conjugation::Dag3 => Bicomplex { w1: self.w1.conj(), w2: -self.w2.conj() },
        }
    }

    /// Squared modulus of the given kind, evaluated by its closed formula.
    pub fn modulus_sq(&self, kind: Modulus) -> Bicomplex {
        let (w1, w2) = (self.w1, self.w2);
        match kind {
            Modulus::ISq => Bicomplex { w1: w1 * w1 + w2 * w2, w2: Complex::new(0.0, 0.0) },
            Modulus::JSq => {
                let cross = 2.0 * (w1 * w2.conj()).re;
                Bicomplex {
                    w1: Complex::new(w1.norm_sqr() - w2.norm_sqr(), 0.0),
                    w2: Complex::new(cross, 0.0),
                }
            }
            Modulus::KSq => {
                let cross = -2.0 * (w1 * w2.conj()).im;
                Bicomplex {
                    w1: Complex::new(w1.norm_sqr() + w2.norm_sqr(), 0.0),
                    w2: Complex::new(0.0, cross),
                }
            }
        }
    }

    /// `|Z|²_k` as a hyperbolic number; equals `|Z|_k²`.
    pub fn modulus_k_sq(&self) -> Hyperbolic {
        self.modulus_sq(Modulus::KSq)
            .as_hyperbolic()
            .expect("k-modulus is hyperbolic by construction")
    }

    /// True iff `Z ≠ 0` is a zero divisor: exactly one idempotent component
    /// vanishes (up to [`NULL_CONE_TOL`]).
    pub fn is_null_cone(&self) -> bool {
        let (z1, z2) = self.idempotent();
        let small1 = z1.norm() <= NULL_CONE_TOL;
        let small2 = z2.norm() <= NULL_CONE_TOL;
        small1 != small2
    }

    pub fn is_invertible(&self) -> bool {
        let (z1, z2) = self.idempotent();
        z1.norm() > NULL_CONE_TOL && z2.norm() > NULL_CONE_TOL
    }

    /// `Z^{-1} = Z^{†2} / |Z|²_i`.
    pub fn inverse(&self) -> Result<Bicomplex> {
        if !self.is_invertible() {
            return Err(BcError::NullCone(self.to_string()));
        }
        let denom = self.w1 * self.w1 + self.w2 * self.w2;
        let inv = denom.inv();
        let conj = self.conj(Conjugation::Dag2);
        Ok(Bicomplex { w1: conj.w1 * inv, w2: conj.w2 * inv })
    }

    pub fn checked_div(&self, rhs: &Bicomplex) -> Result<Bicomplex> {
        Ok(*self * rhs.inverse()?)
    }

    /// Integer power by repeated squaring; negative exponents need an
    /// invertible base.
    pub fn powi(&self, n: i32) -> Result<Bicomplex> {
        let mut base = if n < 0 { self.inverse()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Bicomplex::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Euclidean norm `|Z| = sqrt((|z1|² + |z2|²)/2)`.
    pub fn euclid_norm(&self) -> f64 {
        let (z1, z2) = self.idempotent();
        std::f64::consts::FRAC_1_SQRT_2 * (z1.norm_sqr() + z2.norm_sqr()).sqrt()
    }

    /// Hyperbolic-valued modulus `|Z|_k = e1·|z1| + e2·|z2|`.
    pub fn knorm(&self) -> Hyperbolic {
        let (z1, z2) = self.idempotent();
        Hyperbolic { a1: z1.norm(), a2: z2.norm() }
    }

    /// Whether `Z` lies in `D`, i.e. both idempotent components are real.
    pub fn is_hyperbolic(&self) -> bool {
        self.w1.im == 0.0 && self.w2.re == 0.0
    }

    pub fn as_hyperbolic(&self) -> Option<Hyperbolic> {
        self.is_hyperbolic()
            .then(|| Hyperbolic::from_cartesian_unchecked(self.w1.re, self.w2.im))
    }

    /// Idempotent rendering `z1|z2`.
    pub fn idempotent_string(&self) -> String {
        let (z1, z2) = self.idempotent();
        format!("{}|{}", fmt_complex(z1), fmt_complex(z2))
    }
}

pub(crate) fn fmt_real(x: f64) -> String {
    // normalize -0 so renderings are stable
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

pub(crate) fn fmt_complex(z: Complex) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im < 0.0 {
        format!("{}-{}i", fmt_real(z.re), fmt_real(-im))
    } else {
        format!("{}+{}i", fmt_real(z.re), fmt_real(im))
    }
}

impl fmt::Display for Bicomplex {
    /// Cartesian rendering `a+bi+cj+dk`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.parts();
        write!(f, "{}", fmt_real(a))?;
        for (v, unit) in [(b, "i"), (c, "j"), (d, "k")] {
            let v = if v == 0.0 { 0.0 } else { v };
            if v < 0.0 {
                write!(f, "-{}{unit}", fmt_real(-v))?;
            } else {
                write!(f, "+{}{unit}", fmt_real(v))?;
            }
        }
        Ok(())
    }
}

impl Add for Bicomplex {
    type Output = Bicomplex;
    fn add(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex { w1: self.w1 + rhs.w1, w2: self.w2 + rhs.w2 }
    }
}

impl AddAssign for Bicomplex {
    fn add_assign(&mut self, rhs: Bicomplex) {
        *self = *self + rhs;
    }
}

impl Sub for Bicomplex {
    type Output = Bicomplex;
    fn sub(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex { w1: self.w1 - rhs.w1, w2: self.w2 - rhs.w2 }
    }
}

impl Neg for Bicomplex {
    type Output = Bicomplex;
    fn neg(self) -> Bicomplex {
        Bicomplex { w1: -self.w1, w2: -self.w2 }
    }
}

impl Mul for Bicomplex {
    type Output = Bicomplex;
    /// `(w1 + j·w2)(w3 + j·w4) = (w1·w3 − w2·w4) + j(w2·w3 + w1·w4)`
    fn mul(self, rhs: Bicomplex) -> Bicomplex {
        let (w1, w2, w3, w4) = (self.w1, self.w2, rhs.w1, rhs.w2);
        Bicomplex { w1: w1 * w3 - w2 * w4, w2: w2 * w3 + w1 * w4 }
    }
}

impl Mul<f64> for Bicomplex {
    type Output = Bicomplex;
    fn mul(self, rhs: f64) -> Bicomplex {
        self.scale(rhs)
    }
}

impl From<Hyperbolic> for Bicomplex {
    fn from(h: Hyperbolic) -> Bicomplex {
        Bicomplex::from_idempotent_unchecked(Complex::new(h.a1, 0.0), Complex::new(h.a2, 0.0))
    }
}

// ---------------------------------------------------------------------------
// Hyperbolic
// ---------------------------------------------------------------------------

/// A hyperbolic number `a1·e1 + a2·e2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Hyperbolic {
    a1: f64,
    a2: f64,
}

/// Outcome of comparing two hyperbolic numbers under `≤'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderResult {
    pub ordering: DOrdering,
    /// `α ≤' γ`, i.e. `γ − α ∈ D⁺`.
    pub leq: bool,
    /// `α <' γ`: both idempotent components of `γ − α` strictly positive.
    pub lt_strict: bool,
}

impl Hyperbolic {
    pub const ZERO: Hyperbolic = Hyperbolic { a1: 0.0, a2: 0.0 };
    pub const ONE: Hyperbolic = Hyperbolic { a1: 1.0, a2: 1.0 };
    pub const E1: Hyperbolic = Hyperbolic { a1: 1.0, a2: 0.0 };
    pub const E2: Hyperbolic = Hyperbolic { a1: 0.0, a2: 1.0 };
    pub const K: Hyperbolic = Hyperbolic { a1: 1.0, a2: -1.0 };

    /// Idempotent constructor `a1·e1 + a2·e2`.
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if a1.is_finite() && a2.is_finite() {
            Ok(Hyperbolic { a1, a2 })
        } else {
            Err(BcError::NonFinite("hyperbolic"))
        }
    }

    pub(crate) const fn new_unchecked(a1: f64, a2: f64) -> Self {
        Hyperbolic { a1, a2 }
    }

    pub fn splat(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    /// `β1 + k·β2`
    pub fn from_cartesian(beta1: f64, beta2: f64) -> Result<Self> {
        Self::new(beta1 + beta2, beta1 - beta2)
    }

    fn from_cartesian_unchecked(beta1: f64, beta2: f64) -> Self {
        Hyperbolic { a1: beta1 + beta2, a2: beta1 - beta2 }
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn component(&self, c: Component) -> f64 {
        match c {
            Component::E1 => self.a1,
            Component::E2 => self.a2,
        }
    }

    pub fn components(&self) -> [f64; 2] {
        [self.a1, self.a2]
    }

    /// `(β1, β2)` with `α = β1 + k·β2`.
    pub fn cartesian(&self) -> (f64, f64) {
        ((self.a1 + self.a2) * 0.5, (self.a1 - self.a2) * 0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.a1.is_finite() && self.a2.is_finite()
    }

    /// Membership of `D⁺`.
    pub fn is_nonnegative(&self) -> bool {
        self.a1 >= 0.0 && self.a2 >= 0.0
    }

    /// `α >' 0` in the strict-both sense.
    pub fn is_strictly_positive(&self) -> bool {
        self.a1 > 0.0 && self.a2 > 0.0
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Hyperbolic {
        Hyperbolic { a1: f(self.a1), a2: f(self.a2) }
    }

    pub fn zip_with(&self, other: &Hyperbolic, f: impl Fn(f64, f64) -> f64) -> Hyperbolic {
        Hyperbolic { a1: f(self.a1, other.a1), a2: f(self.a2, other.a2) }
    }

    /// `|α|_k = e1·|a1| + e2·|a2|`.
    pub fn abs_k(&self) -> Hyperbolic {
        self.map(f64::abs)
    }

    /// Componentwise reciprocal. Fails on a vanishing component.
    pub fn recip(&self) -> Result<Hyperbolic> {
        if self.a1 == 0.0 || self.a2 == 0.0 {
            return Err(BcError::NullCone(self.to_string()));
        }
        Ok(Hyperbolic { a1: 1.0 / self.a1, a2: 1.0 / self.a2 })
    }

    pub fn checked_div(&self, rhs: &Hyperbolic) -> Result<Hyperbolic> {
        Ok(*self * rhs.recip()?)
    }

    pub fn max(&self, other: &Hyperbolic) -> Hyperbolic {
        self.zip_with(other, f64::max)
    }

    pub fn min(&self, other: &Hyperbolic) -> Hyperbolic {
        self.zip_with(other, f64::min)
    }

    pub fn cmp_d(&self, other: &Hyperbolic) -> OrderResult {
        hyp_cmp(self, other)
    }

    pub fn leq(&self, other: &Hyperbolic) -> bool {
        hyp_cmp(self, other).leq
    }

    pub fn lt_strict(&self, other: &Hyperbolic) -> bool {
        hyp_cmp(self, other).lt_strict
    }

    /// Rendering `a1*e1 + a2*e2`.
    pub fn render(&self) -> String {
        let a2 = if self.a2 == 0.0 { 0.0 } else { self.a2 };
        if a2 < 0.0 {
            format!("{}*e1 - {}*e2", fmt_real(self.a1), fmt_real(-a2))
        } else {
            format!("{}*e1 + {}*e2", fmt_real(self.a1), fmt_real(a2))
        }
    }
}

impl fmt::Display for Hyperbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for Hyperbolic {
    type Output = Hyperbolic;
    fn add(self, rhs: Hyperbolic) -> Hyperbolic {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl AddAssign for Hyperbolic {
    fn add_assign(&mut self, rhs: Hyperbolic) {
        *self = *self + rhs;
    }
}

impl Sub for Hyperbolic {
    type Output = Hyperbolic;
    fn sub(self, rhs: Hyperbolic) -> Hyperbolic {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Neg for Hyperbolic {
    type Output = Hyperbolic;
    fn neg(self) -> Hyperbolic {
        self.map(|a| -a)
    }
}

impl Mul for Hyperbolic {
    type Output = Hyperbolic;
    fn mul(self, rhs: Hyperbolic) -> Hyperbolic {
        self.zip_with(&rhs, |a, b| a * b)
    }
}

impl Mul<f64> for Hyperbolic {
    type Output = Hyperbolic;
    fn mul(self, rhs: f64) -> Hyperbolic {
        self.map(|a| a * rhs)
    }
}

/// Compares under the partial order `α ≤' γ ⟺ γ − α ∈ D⁺`.
pub fn hyp_cmp(alpha: &Hyperbolic, gamma: &Hyperbolic) -> OrderResult {
    let d = *gamma - *alpha;
    let leq = d.is_nonnegative();
    let geq = (-d).is_nonnegative();
    let ordering = match (leq, geq) {
        (true, true) => DOrdering::Equal,
        (true, false) => DOrdering::Less,
        (false, true) => DOrdering::Greater,
        (false, false) => DOrdering::Incomparable,
    };
    OrderResult { ordering, leq, lt_strict: d.is_strictly_positive() }
}

impl PartialOrd for Hyperbolic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match hyp_cmp(self, other).ordering {
            DOrdering::Less => Some(Ordering::Less),
            DOrdering::Equal => Some(Ordering::Equal),
            DOrdering::Greater => Some(Ordering::Greater),
            DOrdering::Incomparable => None,
        }
    }
}

/// D-supremum: componentwise supremum over the idempotent components.
pub fn d_sup(values: &[Hyperbolic]) -> Result<Hyperbolic> {
    let (first, rest) = values.split_first().ok_or(BcError::EmptyCollection("d_sup"))?;
    Ok(rest.iter().fold(*first, |acc, v| acc.max(v)))
}

/// D-infimum: componentwise infimum over the idempotent components.
pub fn d_inf(values: &[Hyperbolic]) -> Result<Hyperbolic> {
    let (first, rest) = values.split_first().ok_or(BcError::EmptyCollection("d_inf"))?;
    Ok(rest.iter().fold(*first, |acc, v| acc.min(v)))
}
