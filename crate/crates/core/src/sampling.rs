//! Deterministic random draws for the sampled property checks.
//!
//! Every sample index gets its own ChaCha stream derived from the run seed,
//! so checks can run in parallel and still be reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::module::ModuleVector;
use crate::scalar::{Bicomplex, Complex, Hyperbolic};

/// RNG for sample `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mixes a check-specific tag into a seed so different checks in one run
/// draw independent streams.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    // FNV-1a over the tag, folded with the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex {
    Complex::new(gaussian(rng) * scale, gaussian(rng) * scale)
}

/// Log-uniform magnitude in `[2^lo, 2^hi)`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi).exp2()
}

/// A bicomplex number with independently scaled idempotent components.
pub fn bicomplex<R: Rng + ?Sized>(rng: &mut R) -> Bicomplex {
    let s1 = log_uniform(rng, -3.0, 3.0);
    let s2 = log_uniform(rng, -3.0, 3.0);
    Bicomplex::from_idempotent_unchecked(complex_gaussian(rng, s1), complex_gaussian(rng, s2))
}

/// How a scalar draw is stratified across the invertible elements and the
/// two halves of the null cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarStratum {
    Invertible,
    NullE1,
    NullE2,
}

impl ScalarStratum {
    pub const ALL: [ScalarStratum; 3] =
        [ScalarStratum::Invertible, ScalarStratum::NullE1, ScalarStratum::NullE2];

    pub fn for_index(i: usize) -> Self {
        Self::ALL[i % 3]
    }
}

pub fn stratified_scalar<R: Rng + ?Sized>(rng: &mut R, stratum: ScalarStratum) -> Bicomplex {
    let (s1, s2) = (log_uniform(rng, -2.0, 2.0), log_uniform(rng, -2.0, 2.0));
    let z = complex_gaussian(rng, s1);
    let w = complex_gaussian(rng, s2);
    let zero = Complex::new(0.0, 0.0);
    match stratum {
        ScalarStratum::Invertible => Bicomplex::from_idempotent_unchecked(z, w),
        ScalarStratum::NullE1 => Bicomplex::from_idempotent_unchecked(z, zero),
        ScalarStratum::NullE2 => Bicomplex::from_idempotent_unchecked(zero, w),
    }
}

/// A vector of `BC^n` whose idempotent parts have independent log-uniform
/// scales. One in eight draws is `e1`-supported and one in eight is
/// `e2`-supported.
pub fn vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ModuleVector {
    let s1 = log_uniform(rng, -3.0, 3.0);
    let s2 = log_uniform(rng, -3.0, 3.0);
    let mode = rng.random_range(0..8u8);
    let x1: Vec<Complex> = (0..dim)
        .map(|_| if mode == 1 { Complex::new(0.0, 0.0) } else { complex_gaussian(rng, s1) })
        .collect();
    let x2: Vec<Complex> = (0..dim)
        .map(|_| if mode == 2 { Complex::new(0.0, 0.0) } else { complex_gaussian(rng, s2) })
        .collect();
    ModuleVector::join_unchecked(&x1, &x2)
}

/// A vector whose real coordinates are multiples of `2^-20` below `2^6` in
/// magnitude, in both the cartesian and idempotent views. Sums and
/// differences of such vectors are exact in binary64.
pub fn dyadic_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ModuleVector {
    let mut q = || {
        let k: i64 = rng.random_range(-(1i64 << 25)..(1i64 << 25));
        k as f64 / (1u64 << 20) as f64
    };
    let x1: Vec<Complex> = (0..dim).map(|_| Complex::new(q(), q())).collect();
    let x2: Vec<Complex> = (0..dim).map(|_| Complex::new(q(), q())).collect();
    ModuleVector::join_unchecked(&x1, &x2)
}

/// The corners of the hyperbolic unit square, `e1` first.
pub const D_UNIT_CORNERS: [Hyperbolic; 4] =
    [Hyperbolic::E1, Hyperbolic::E2, Hyperbolic::ZERO, Hyperbolic::ONE];

/// `λ ∈ D⁺` with `0 ≤' λ ≤' 1`; a quarter of the draws land on a corner.
pub fn unit_hyperbolic<R: Rng + ?Sized>(rng: &mut R) -> Hyperbolic {
    if rng.random_range(0..4u8) == 0 {
        D_UNIT_CORNERS[rng.random_range(0..4usize)]
    } else {
        Hyperbolic::new_unchecked(rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0))
    }
}

/// Scalars with `|λ|_k ≤' 1` that are always tried before random ones:
/// both null-cone idempotents first, then units and zero.
pub fn contraction_corners() -> Vec<Bicomplex> {
    vec![
        Bicomplex::E1,
        Bicomplex::E2,
        Bicomplex::ZERO,
        Bicomplex::K,
        -Bicomplex::ONE,
        Bicomplex::I,
        Bicomplex::J,
        Bicomplex::ONE,
    ]
}

/// `λ ∈ BC` with `|λ|_k ≤' 1`, stratified over invertible and null-cone
/// draws, with a share of unimodular components.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R) -> Bicomplex {
    let comp = |rng: &mut R| {
        let r = match rng.random_range(0..4u8) {
            0 => 1.0,
            _ => rng.random_range(0.0..=1.0),
        };
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        Complex::from_polar(r, theta)
    };
    let z1 = comp(rng);
    let z2 = comp(rng);
    let zero = Complex::new(0.0, 0.0);
    match rng.random_range(0..4u8) {
        0 => Bicomplex::from_idempotent_unchecked(z1, zero),
        1 => Bicomplex::from_idempotent_unchecked(zero, z2),
        _ => Bicomplex::from_idempotent_unchecked(z1, z2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = gaussian(&mut stream_rng(7, 3));
        let b: f64 = gaussian(&mut stream_rng(7, 3));
        let c: f64 = gaussian(&mut stream_rng(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(1, "x"), derive_seed(1, "y"));
    }

    #[test]
    fn dyadic_arithmetic_is_exact() {
        let mut rng = stream_rng(1, 0);
        for _ in 0..200 {
            let x = dyadic_vector(&mut rng, 2);
            let y = dyadic_vector(&mut rng, 2);
            let z = dyadic_vector(&mut rng, 2);
            let lhs = x.add(&z).unwrap().sub(&y.add(&z).unwrap()).unwrap();
            assert_eq!(lhs, x.sub(&y).unwrap());
        }
    }

    #[test]
    fn contractions_have_knorm_at_most_one() {
        let mut rng = stream_rng(2, 0);
        for _ in 0..1000 {
            let l = contraction(&mut rng);
            assert!(l.knorm().leq(&Hyperbolic::new(1.0 + 1e-15, 1.0 + 1e-15).unwrap()));
        }
        for l in contraction_corners() {
            assert!(l.knorm().leq(&Hyperbolic::ONE));
        }
    }
}
