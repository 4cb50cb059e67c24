//! Certified signs of real cyclotomic numbers by rational interval arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, CyclotomicScalar, Rational};

/// Working precision used by the first refinement round.
pub const DEFAULT_PRECISION_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    fn round_out(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Self { lo, hi }
    }

    fn scale(&self, c: &Rational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Self { lo: b, hi: a }
        } else {
            Self { lo: a, hi: b }
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }
}

// arctan(1/n) bracketed by consecutive partial sums of its alternating series.
fn arctan_inv(n: u64, bits: u32) -> Interval {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let tol = Rational::new(BigInt::one(), BigInt::one() << (bits + 10));
    let mut power = BigInt::from(n);
    let mut sum = Rational::zero();
    let mut k: u64 = 0;
    loop {
        let term = Rational::new(BigInt::one(), &power * BigInt::from(2 * k + 1));
        if term < tol {
            return if k.is_multiple_of(2) {
                Interval {
                    lo: sum.clone(),
                    hi: sum + term,
                }
            } else {
                Interval {
                    lo: &sum - term,
                    hi: sum,
                }
            };
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &n2;
        k += 1;
    }
}

fn pi_enclosure(bits: u32) -> Interval {
    // π = 16 arctan(1/5) − 4 arctan(1/239)
    let a = arctan_inv(5, bits);
    let b = arctan_inv(239, bits);
    let sixteen = Rational::from_integer(16.into());
    let four = Rational::from_integer(4.into());
    Interval {
        lo: &a.lo * &sixteen - &b.hi * &four,
        hi: &a.hi * &sixteen - &b.lo * &four,
    }
    .round_out(bits + 8)
}

// cos(t) for a rational 0 ≤ t ≤ 4 via the alternating Taylor tail bound.
fn cos_rational(t: &Rational, bits: u32) -> Interval {
    let tol = Rational::new(BigInt::one(), BigInt::one() << (bits + 10));
    let t2 = t * t;
    let mut term = Rational::one();
    let mut sum = Rational::zero();
    let mut j: u64 = 0;
    loop {
        sum += &term;
        let next = -(&term * &t2) / Rational::from_integer(BigInt::from((2 * j + 1) * (2 * j + 2)));
        // From j ≥ 2 on the magnitudes decrease since t² ≤ 16 < 5·6.
        if j >= 2 && next.abs() < tol {
            let (lo, hi) = if next.is_negative() {
                (&sum + &next, sum)
            } else {
                (sum.clone(), &sum + &next)
            };
            return Interval { lo, hi }.round_out(bits + 4);
        }
        term = next;
        j += 1;
    }
}

fn clamp_unit(iv: Interval) -> Interval {
    let one = Rational::one();
    let m1 = -Rational::one();
    Interval {
        lo: iv.lo.max(m1.clone()).min(one.clone()),
        hi: iv.hi.min(one).max(m1),
    }
}

fn cos_enclosure(k: u64, d: u64, bits: u32) -> Interval {
    let k = k.min(d - k);
    let half = Rational::new(1.into(), 2.into());
    if k == 0 {
        return Interval::point(Rational::one());
    }
    if 2 * k == d {
        return Interval::point(-Rational::one());
    }
    if 4 * k == d {
        return Interval::point(Rational::zero());
    }
    if 6 * k == d {
        return Interval::point(half);
    }
    if 3 * k == d {
        return Interval::point(-half);
    }
    // θ = 2πk/d ∈ (0, π); cos is decreasing there.
    let pi = pi_enclosure(bits);
    let f = Rational::new(BigInt::from(2 * k), BigInt::from(d));
    let theta = pi.scale(&f).round_out(bits + 6);
    let at_lo = cos_rational(&theta.lo, bits);
    let at_hi = cos_rational(&theta.hi, bits);
    clamp_unit(Interval {
        lo: at_hi.lo,
        hi: at_lo.hi,
    })
}

type CosCache = Mutex<HashMap<(u64, u32), Arc<Vec<Interval>>>>;

fn cos_table(d: u64, bits: u32) -> Arc<Vec<Interval>> {
    static CACHE: OnceLock<CosCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(d, bits)) {
        return t.clone();
    }
    let phi = super::euler_phi(d) as u64;
    let table: Arc<Vec<Interval>> = Arc::new((0..phi).map(|k| cos_enclosure(k, d, bits)).collect());
    cache.lock().unwrap().insert((d, bits), table.clone());
    table
}

/// Encloses the real part of `x` at ζ_d = e^{2πi/d}.
pub(crate) fn real_part_enclosure(x: &CyclotomicScalar, bits: u32) -> Interval {
    let table = cos_table(x.level(), bits);
    let mut acc = Interval::point(Rational::zero());
    for (c, iv) in x.coeffs().iter().zip(table.iter()) {
        if !c.is_zero() {
            acc = acc.add(&iv.scale(c));
        }
    }
    acc
}

/// Sign of a real cyclotomic number under ζ_d ↦ e^{2πi/d}.
pub fn certified_sign(x: &CyclotomicScalar) -> Result<i8, AlgebraError> {
    certified_sign_with(x, DEFAULT_PRECISION_BITS)
}

/// [`certified_sign`] with an explicit starting precision in bits.
pub fn certified_sign_with(x: &CyclotomicScalar, start_bits: u32) -> Result<i8, AlgebraError> {
    if !x.is_real() {
        return Err(AlgebraError::NotReal);
    }
    if x.is_zero() {
        return Ok(0);
    }
    if let Some(r) = x.as_rational() {
        return Ok(if r.is_positive() { 1 } else { -1 });
    }
    let mut bits = start_bits.max(8);
    loop {
        let iv = real_part_enclosure(x, bits);
        if iv.lo.is_positive() {
            return Ok(1);
        }
        if iv.hi.is_negative() {
            return Ok(-1);
        }
        bits = bits.saturating_mul(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn dyadic_width(iv: &Interval) -> Rational {
        &iv.hi - &iv.lo
    }

    #[test]
    fn pi_is_bracketed() {
        let iv = pi_enclosure(64);
        assert!(iv.lo.to_f64().unwrap() <= std::f64::consts::PI);
        assert!(iv.hi.to_f64().unwrap() >= std::f64::consts::PI);
        assert!(dyadic_width(&iv) < Rational::new(1.into(), BigInt::one() << 60));
    }

    #[test]
    fn cosines_contain_float_values() {
        for d in [5u64, 7, 9, 15, 16, 17] {
            for k in 0..d {
                let iv = cos_enclosure(k, d, 64);
                let c = (2.0 * std::f64::consts::PI * k as f64 / d as f64).cos();
                assert!(iv.lo.to_f64().unwrap() <= c + 1e-12, "{k}/{d}");
                assert!(iv.hi.to_f64().unwrap() >= c - 1e-12, "{k}/{d}");
                assert!(dyadic_width(&iv) < Rational::new(1.into(), BigInt::one() << 50));
            }
        }
    }

    #[test]
    fn spec_signs() {
        let z3 = CyclotomicScalar::zeta(3);
        assert_eq!(certified_sign(&CyclotomicScalar::zero(7)), Ok(0));
        assert_eq!(certified_sign(&(&z3 + &z3.conj())), Ok(-1));
        let one = CyclotomicScalar::one(5);
        let a = &one - &CyclotomicScalar::zeta(5);
        assert_eq!(certified_sign(&(&a * &a.conj())), Ok(1));
        assert_eq!(certified_sign(&z3), Err(AlgebraError::NotReal));
    }

    #[test]
    fn tiny_values_force_refinement() {
        // 2cos(2π/5) = (√5 − 1)/2 ≈ 0.618; subtract a rational within 2^-70.
        let z5 = CyclotomicScalar::zeta(5);
        let golden = &z5 + &z5.conj();
        let approx = Rational::new(
            BigInt::from(((5f64.sqrt() - 1.0) / 2.0 * 2f64.powi(40)) as i64),
            BigInt::one() << 40,
        );
        let below = &golden - &CyclotomicScalar::from_rational(5, approx);
        let s = certified_sign_with(&below, 16).unwrap();
        assert_eq!(s, 1);
        assert_eq!(certified_sign(&-&below).unwrap(), -1);
    }
}
