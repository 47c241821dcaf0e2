//! Scalar fields the equation engine is generic over: complex doubles for
//! numeric sweeps and Gaussian rationals for exact consistency checks.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Complex numbers with exact rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

/// Field operations shared by `Complex64` and [`GaussRational`].
///
/// `mag` is a cheap size estimate used for pivot selection and for
/// rejection sampling near singular configurations; for exact fields any
/// nonzero element reports 1.
pub trait Field:
    Clone
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact fields compare with `==`; floating fields by magnitude.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn mag(&self) -> f64;

    /// Uniform-ish sample for vertex fields (disc of radius 2 for floats,
    /// small random rationals for exact fields).
    fn sample_field<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Sample for edge labels (annulus 0.25 <= |a| <= 4 for floats,
    /// nonzero small rationals for exact fields).
    fn sample_label<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn mag(&self) -> f64 {
        self.norm()
    }

    fn sample_field<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let re = rng.gen::<f64>() * 4.0 - 2.0;
            let im = rng.gen::<f64>() * 4.0 - 2.0;
            if re * re + im * im <= 4.0 {
                return Complex64::new(re, im);
            }
        }
    }

    fn sample_label<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let z = Self::sample_field(rng) * 2.0;
            let n = z.norm();
            if (0.25..=4.0).contains(&n) {
                return z;
            }
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn mag(&self) -> f64 {
        num_traits::Float::abs(*self)
    }
    fn sample_field<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>() * 4.0 - 2.0
    }
    fn sample_label<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = rng.gen::<f64>() * 8.0 - 4.0;
            if (0.25..=4.0).contains(&num_traits::Float::abs(x)) {
                return x;
            }
        }
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mag(&self) -> f64 {
        if Zero::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }
    fn sample_field<R: Rng + ?Sized>(rng: &mut R) -> Self {
        small_rational(rng)
    }
    fn sample_label<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = small_rational(rng);
            if !Zero::is_zero(&x) {
                return x;
            }
        }
    }
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=9);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Field for GaussRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(<BigRational as Zero>::zero(), <BigRational as Zero>::zero())
    }
    fn one() -> Self {
        Complex::new(<BigRational as One>::one(), <BigRational as Zero>::zero())
    }
    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), <BigRational as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn mag(&self) -> f64 {
        if Field::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }

    fn sample_field<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(small_rational(rng), small_rational(rng))
    }

    fn sample_label<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let z = Self::sample_field(rng);
            if !Field::is_zero(&z) {
                return z;
            }
        }
    }
}

/// Convert an exact scalar to `Complex64` (used in mixed-mode tests).
pub fn gauss_to_c64(z: &GaussRational) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Deterministic RNG used throughout the verification sweeps.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Sample a vector of distinct labels (pairwise differences bounded away
/// from zero for floats, exact inequality for rationals).
pub fn sample_distinct_labels<T: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    'outer: loop {
        let labels: Vec<T> = (0..n).map(|_| T::sample_label(rng)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = labels[i].clone() - labels[j].clone();
                if d.mag() < 1e-2 {
                    continue 'outer;
                }
            }
        }
        return labels;
    }
}
