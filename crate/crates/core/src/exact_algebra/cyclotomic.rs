//! Exact arithmetic in the cyclotomic fields Q(ζ_d).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Rational};

/// Coefficients of the d-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(d: u64) -> Arc<Vec<i64>> {
    assert!(d >= 1, "cyclotomic level must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    // x^d - 1 divided by every Φ_k with k | d, k < d.
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for k in 1..d {
        if d.is_multiple_of(k) {
            num = divide_monic(&num, &cyclotomic_polynomial(k));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(d, p.clone());
    p
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Euler's totient, equal to the degree of Φ_d.
pub fn euler_phi(d: u64) -> usize {
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// An element of Q(ζ_d) stored as coefficients of 1, ζ_d, …, ζ_d^{φ(d)-1}.
#[derive(Clone, Debug)]
pub struct CyclotomicScalar {
    level: u64,
    coeffs: Vec<Rational>,
}

/// Field operations accepted by [`cyclotomic_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
}

/// Applies `op` to `a` and `b` after lifting both to a common level.
/// For [`ArithOp::Conj`] the second operand is ignored.
pub fn cyclotomic_arith(
    a: &CyclotomicScalar,
    b: &CyclotomicScalar,
    op: ArithOp,
) -> Result<CyclotomicScalar, AlgebraError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
        ArithOp::Conj => a.conj(),
    })
}

impl CyclotomicScalar {
    pub fn zero(level: u64) -> Self {
        Self::from_rational(level, Rational::zero())
    }

    pub fn one(level: u64) -> Self {
        Self::from_rational(level, Rational::one())
    }

    pub fn from_rational(level: u64, r: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); euler_phi(level)];
        coeffs[0] = r;
        Self { level, coeffs }
    }

    pub fn from_int(level: u64, n: i64) -> Self {
        Self::from_rational(level, Rational::from_integer(BigInt::from(n)))
    }

    /// ζ_d^k for any integer k.
    pub fn zeta_pow(level: u64, k: i64) -> Self {
        let e = k.rem_euclid(level as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::from_poly(level, poly)
    }

    pub fn zeta(level: u64) -> Self {
        Self::zeta_pow(level, 1)
    }

    /// Builds the scalar Σ poly[k] ζ_d^k, reducing modulo Φ_d.
    pub fn from_poly(level: u64, poly: Vec<Rational>) -> Self {
        Self {
            level,
            coeffs: reduce(level, poly),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Rational value when the scalar lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then_some(&self.coeffs[0])
    }

    /// Re-expresses the scalar at a level divisible by the current one.
    pub fn lift_to(&self, level: u64) -> Self {
        assert!(
            level.is_multiple_of(self.level),
            "level {level} is not a multiple of {}",
            self.level
        );
        if level == self.level {
            return self.clone();
        }
        let step = (level / self.level) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::from_poly(level, poly)
    }

    /// Image under ζ ↦ ζ^{-1}, i.e. complex conjugation.
    pub fn conj(&self) -> Self {
        let d = self.level as usize;
        let mut poly = vec![Rational::zero(); d];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(d - k) % d] += c;
            }
        }
        Self::from_poly(self.level, poly)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.level)
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        let s = poly_inverse_mod(&self.coeffs, &modulus);
        Ok(Self::from_poly(self.level, s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Floating approximation of the embedding ζ_d ↦ e^{2πi/d}; for display only.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.level as f64;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    fn reconcile(&self, other: &Self) -> (Self, Self) {
        let l = self.level.lcm(&other.level);
        (self.lift_to(l), other.lift_to(l))
    }
}

fn reduce(level: u64, mut poly: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(level);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &b) in phi[..deg].iter().enumerate() {
                if b != 0 {
                    poly[i - deg + j] -= &c * BigInt::from(b);
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

// Extended Euclid: returns s with s·a ≡ 1 (mod m), m irreducible and a ≢ 0.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<Rational> = vec![];
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c = r1[0].clone();
    s1.iter().map(|x| x / &c).collect()
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.reconcile(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicScalar {}

impl Add for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: Self) -> CyclotomicScalar {
        if self.level != rhs.level {
            let (a, b) = self.reconcile(rhs);
            return &a + &b;
        }
        CyclotomicScalar {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: Self) -> CyclotomicScalar {
        if self.level != rhs.level {
            let (a, b) = self.reconcile(rhs);
            return &a - &b;
        }
        CyclotomicScalar {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: Self) -> CyclotomicScalar {
        if self.level != rhs.level {
            let (a, b) = self.reconcile(rhs);
            return &a * &b;
        }
        CyclotomicScalar::from_poly(self.level, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $m(self, rhs: Self) -> CyclotomicScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        -&self
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "z{}", self.level)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(d: u64) -> CyclotomicScalar {
        CyclotomicScalar::zeta(d)
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        for d in 1..60 {
            assert_eq!(cyclotomic_polynomial(d).len() - 1, euler_phi(d));
        }
    }

    #[test]
    fn minus_one_squared() {
        let m = z(2);
        assert!((&m * &m).is_one());
    }

    #[test]
    fn conj_of_zeta3() {
        let c = z(3).conj();
        let expected = &CyclotomicScalar::from_int(3, -1) - &z(3);
        assert_eq!(c, expected);
        assert_eq!(c, CyclotomicScalar::zeta_pow(3, 2));
    }

    #[test]
    fn norm_of_one_minus_zeta3() {
        let one = CyclotomicScalar::one(3);
        let a = &one - &z(3);
        let prod = &a * &a.conj();
        assert_eq!(prod, CyclotomicScalar::from_int(1, 3));
    }

    #[test]
    fn levels_reconcile() {
        let s = &z(3) + &z(5);
        assert_eq!(s.level(), 15);
        assert_eq!(&s - &z(5), z(3));
        assert_eq!(z(3).lift_to(15), CyclotomicScalar::zeta_pow(15, 5));
        assert_eq!(CyclotomicScalar::from_int(1, 2), CyclotomicScalar::from_int(7, 2));
    }

    #[test]
    fn inverse_round_trip() {
        for d in [1u64, 2, 3, 4, 5, 12, 15] {
            let a = &CyclotomicScalar::from_int(d, 2) - &z(d);
            let inv = a.inv().unwrap();
            assert!((&a * &inv).is_one(), "level {d}");
        }
        assert_eq!(CyclotomicScalar::zero(5).inv(), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn arith_dispatch() {
        let a = z(4);
        let b = CyclotomicScalar::from_int(4, 2);
        assert_eq!(
            cyclotomic_arith(&a, &b, ArithOp::Div).unwrap(),
            a.scale(&Rational::new(1.into(), 2.into()))
        );
        assert_eq!(cyclotomic_arith(&a, &b, ArithOp::Conj).unwrap(), -&a);
        assert!(cyclotomic_arith(&a, &CyclotomicScalar::zero(4), ArithOp::Div).is_err());
    }

    #[test]
    fn display() {
        let s = &CyclotomicScalar::from_int(3, 1) - &z(3).scale(&Rational::from_integer(2.into()));
        assert_eq!(s.to_string(), "1 - 2*z3");
        assert_eq!(CyclotomicScalar::zero(5).to_string(), "0");
    }
}
