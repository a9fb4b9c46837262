//! The free module `BC^n` and its norms.

use serde::{Deserialize, Serialize};

use crate::error::{BcError, Result};
use crate::scalar::{Bicomplex, Complex, Component, Hyperbolic};

/// A norm on the component spaces `C(i)^n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentNorm {
    L1,
    #[default]
    L2,
    Linf,
}

impl ComponentNorm {
    pub fn eval(self, u: &[Complex]) -> f64 {
        match self {
            ComponentNorm::L1 => u.iter().map(|z| z.norm()).sum(),
            ComponentNorm::L2 => u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            ComponentNorm::Linf => u.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    /// Largest `c` with `self(u) ≥ c·‖u‖₂` on `C^n`.
    pub fn l2_lower_bound(self, dim: usize) -> f64 {
        match self {
            ComponentNorm::L1 | ComponentNorm::L2 => 1.0,
            ComponentNorm::Linf => 1.0 / (dim.max(1) as f64).sqrt(),
        }
    }
}

/// An element of `BC^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorJson", into = "VectorJson")]
pub struct ModuleVector {
    entries: Vec<Bicomplex>,
}

impl ModuleVector {
    pub fn new(entries: Vec<Bicomplex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(BcError::InvalidArgument("module vector needs dimension ≥ 1".into()));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(BcError::NonFinite("module vector"));
        }
        Ok(ModuleVector { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        ModuleVector { entries: vec![Bicomplex::ZERO; dim.max(1)] }
    }

    pub fn splat(dim: usize, z: Bicomplex) -> Self {
        ModuleVector { entries: vec![z; dim.max(1)] }
    }

    /// The `idx`-th standard basis vector scaled by `z`.
    pub fn basis(dim: usize, idx: usize, z: Bicomplex) -> Result<Self> {
        if idx >= dim {
            return Err(BcError::IndexOutOfRange { index: idx, len: dim });
        }
        let mut v = Self::zeros(dim);
        v.entries[idx] = z;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Bicomplex] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(Bicomplex::is_finite)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Bicomplex::is_zero)
    }

    /// `(x1, x2)` with `x = e1·x1 + e2·x2`.
    pub fn split(&self) -> (Vec<Complex>, Vec<Complex>) {
        self.entries.iter().map(Bicomplex::idempotent).unzip()
    }

    pub fn component(&self, c: Component) -> Vec<Complex> {
        self.entries.iter().map(|e| e.component(c)).collect()
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(x1: &[Complex], x2: &[Complex]) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(BcError::DimensionMismatch { expected: x1.len(), got: x2.len() });
        }
        let entries = x1
            .iter()
            .zip(x2)
            .map(|(a, b)| Bicomplex::from_idempotent(*a, *b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub(crate) fn join_unchecked(x1: &[Complex], x2: &[Complex]) -> Self {
        ModuleVector {
            entries: x1
                .iter()
                .zip(x2)
                .map(|(a, b)| Bicomplex::from_idempotent_unchecked(*a, *b))
                .collect(),
        }
    }

    pub fn check_dim(&self, other: &ModuleVector) -> Result<()> {
        if self.dim() != other.dim() {
            Err(BcError::DimensionMismatch { expected: self.dim(), got: other.dim() })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn neg(&self) -> ModuleVector {
        ModuleVector { entries: self.entries.iter().map(|e| -*e).collect() }
    }

    pub fn scale(&self, lambda: Bicomplex) -> ModuleVector {
        ModuleVector { entries: self.entries.iter().map(|e| lambda * *e).collect() }
    }

    /// Keeps only the `e1` or `e2` part: `e_l·x`.
    pub fn project(&self, c: Component) -> ModuleVector {
        self.scale(c.unit())
    }

    fn zip(&self, other: &ModuleVector, f: impl Fn(Bicomplex, Bicomplex) -> Bicomplex) -> ModuleVector {
        ModuleVector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

/// `λ·x`, entrywise.
pub fn scalar_mul(lambda: Bicomplex, x: &ModuleVector) -> ModuleVector {
    x.scale(lambda)
}

/// The translation `T_y(x) = x + y`.
pub fn translate(y: &ModuleVector, x: &ModuleVector) -> Result<ModuleVector> {
    x.add(y)
}

/// Canonical hyperbolic-valued norm `‖x‖_D = e1·‖x1‖₁ + e2·‖x2‖₂`.
pub fn dnorm(x: &ModuleVector, n1: ComponentNorm, n2: ComponentNorm) -> Hyperbolic {
    let (x1, x2) = x.split();
    Hyperbolic::new_unchecked(n1.eval(&x1), n2.eval(&x2))
}

/// Euclidean-type real norm `sqrt((‖x1‖₁² + ‖x2‖₂²)/2)`.
pub fn euclid_type_norm(x: &ModuleVector, n1: ComponentNorm, n2: ComponentNorm) -> f64 {
    let (x1, x2) = x.split();
    ((n1.eval(&x1).powi(2) + n2.eval(&x2).powi(2)) / 2.0).sqrt()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorJson {
    dim: usize,
    entries: Vec<Bicomplex>,
}

impl TryFrom<VectorJson> for ModuleVector {
    type Error = BcError;
    fn try_from(v: VectorJson) -> Result<Self> {
        if v.dim != v.entries.len() {
            return Err(BcError::DimensionMismatch { expected: v.dim, got: v.entries.len() });
        }
        ModuleVector::new(v.entries)
    }
}

impl From<ModuleVector> for VectorJson {
    fn from(v: ModuleVector) -> Self {
        VectorJson { dim: v.dim(), entries: v.entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn vec_idem(x1: &[Complex], x2: &[Complex]) -> ModuleVector {
        ModuleVector::join(x1, x2).unwrap()
    }

    #[test]
    fn scalar_mul_examples() {
        let u = [c(1.0, 2.0), c(-0.5, 0.0)];
        let v = [c(3.0, -1.0), c(0.0, 4.0)];
        let x = vec_idem(&u, &v);
        let (y1, y2) = scalar_mul(Bicomplex::E1, &x).split();
        assert_eq!(y1, u.to_vec());
        assert!(y2.iter().all(|z| z.norm() == 0.0));
        assert_eq!(scalar_mul(Bicomplex::ONE, &x), x);
        assert!(scalar_mul(Bicomplex::ZERO, &x).is_zero());
    }

    #[test]
    fn translate_examples() {
        let x = vec_idem(&[c(1.0, 2.0)], &[c(3.0, -1.0)]);
        let y = vec_idem(&[c(0.25, 0.5)], &[c(-2.0, 1.0)]);
        assert_eq!(translate(&ModuleVector::zeros(1), &x).unwrap(), x);
        assert_eq!(translate(&y, &translate(&y.neg(), &x).unwrap()).unwrap(), x);
        let (s1, s2) = translate(&y, &x).unwrap().split();
        assert!((s1[0] - c(1.25, 2.5)).norm() < 1e-15);
        assert!((s2[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            translate(&ModuleVector::zeros(2), &x),
            Err(BcError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dnorm_examples() {
        let x = vec_idem(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(dnorm(&x, ComponentNorm::L2, ComponentNorm::L2), Hyperbolic::E1);
        assert_eq!(dnorm(&ModuleVector::zeros(3), ComponentNorm::L1, ComponentNorm::Linf), Hyperbolic::ZERO);
        let x = vec_idem(&[c(0.3, -1.0), c(2.0, 0.5)], &[c(-1.0, 0.0), c(0.0, 2.0)]);
        let lam = Bicomplex::from(Hyperbolic::new(2.0, 3.0).unwrap());
        let base = dnorm(&x, ComponentNorm::L2, ComponentNorm::L1);
        let scaled = dnorm(&scalar_mul(lam, &x), ComponentNorm::L2, ComponentNorm::L1);
        assert!((scaled.a1() - 2.0 * base.a1()).abs() < 1e-12);
        assert!((scaled.a2() - 3.0 * base.a2()).abs() < 1e-12);
    }

    #[test]
    fn euclid_type_norm_examples() {
        let x = vec_idem(&[c(3.0, 0.0)], &[c(0.0, 4.0)]);
        let n = euclid_type_norm(&x, ComponentNorm::L2, ComponentNorm::L2);
        assert!((n - 12.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(euclid_type_norm(&ModuleVector::zeros(2), ComponentNorm::L2, ComponentNorm::L2), 0.0);
        let z = Bicomplex::from_parts(0.7, -1.3, 2.2, 0.1).unwrap();
        let x = ModuleVector::new(vec![z]).unwrap();
        let n = euclid_type_norm(&x, ComponentNorm::L2, ComponentNorm::L2);
        assert!((n - z.euclid_norm()).abs() < 1e-15);
    }

    #[test]
    fn component_norms() {
        let u = [c(3.0, 4.0), c(0.0, -1.0)];
        assert_eq!(ComponentNorm::L1.eval(&u), 6.0);
        assert!((ComponentNorm::L2.eval(&u) - 26f64.sqrt()).abs() < 1e-15);
        assert_eq!(ComponentNorm::Linf.eval(&u), 5.0);
    }

    #[test]
    fn json_schema() {
        let x = ModuleVector::new(vec![Bicomplex::from_parts(1.0, 2.0, 3.0, 4.0).unwrap()]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"dim":1,"entries":[{"w1":[1.0,2.0],"w2":[3.0,4.0]}]}"#);
        let back: ModuleVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<ModuleVector>(r#"{"dim":2,"entries":[{"w1":[1,2],"w2":[3,4]}]}"#).is_err());
    }
}
