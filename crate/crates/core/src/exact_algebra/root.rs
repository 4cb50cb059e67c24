use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::CyclotomicScalar;

/// The root of unity e^{2πi·k/d}, equivalently the element k/d of Q/Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let n = num.rem_euclid(den as i64) as u64;
        let g = n.gcd(&den);
        Self {
            num: n / g,
            den: den / g,
        }
    }

    pub fn one() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn minus_one() -> Self {
        Self { num: 1, den: 2 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Multiplicative order, which is the reduced denominator.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn conj(&self) -> Self {
        Self::new(-(self.num as i64), self.den)
    }

    /// Product of roots, i.e. sum in Q/Z.
    pub fn add(&self, other: &Self) -> Self {
        let l = self.den.lcm(&other.den);
        let a = self.num * (l / self.den) + other.num * (l / other.den);
        Self::new((a % l) as i64, l)
    }

    pub fn neg(&self) -> Self {
        self.conj()
    }

    pub fn pow(&self, k: i64) -> Self {
        let k = k.rem_euclid(self.den as i64) as u64;
        Self::new(((self.num * k) % self.den) as i64, self.den)
    }

    pub fn to_scalar(&self) -> CyclotomicScalar {
        CyclotomicScalar::zeta_pow(self.den, self.num as i64)
    }

    /// The prime p when the order is a positive power of p.
    pub fn prime_of_order(&self) -> Option<u64> {
        prime_power_base(self.den)
    }
}

/// Returns p when n = p^k with k ≥ 1.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid root of unity `{0}`, expected k/d")]
pub struct ParseRootError(pub String);

impl FromStr for RootOfUnity {
    type Err = ParseRootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRootError(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => {
                let k: i64 = t.parse().map_err(|_| err())?;
                Ok(Self::new(k, 1))
            }
            Some((a, b)) => {
                let k: i64 = a.trim().parse().map_err(|_| err())?;
                let d: u64 = b.trim().parse().map_err(|_| err())?;
                if d == 0 {
                    return Err(err());
                }
                Ok(Self::new(k, d))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_parsing() {
        assert_eq!(RootOfUnity::new(2, 4), RootOfUnity::minus_one());
        assert_eq!(RootOfUnity::new(-1, 3), RootOfUnity::new(2, 3));
        assert_eq!("5/15".parse::<RootOfUnity>().unwrap(), RootOfUnity::new(1, 3));
        assert_eq!("0".parse::<RootOfUnity>().unwrap(), RootOfUnity::one());
        assert_eq!("3/3".parse::<RootOfUnity>().unwrap().to_string(), "0");
        assert!("1/0".parse::<RootOfUnity>().is_err());
        assert!("x".parse::<RootOfUnity>().is_err());
    }

    #[test]
    fn group_law() {
        let a = RootOfUnity::new(1, 3);
        let b = RootOfUnity::new(2, 5);
        assert_eq!(a.add(&b), RootOfUnity::new(11, 15));
        assert!(a.add(&a.neg()).is_one());
        assert_eq!(a.pow(2), a.conj());
        assert_eq!(a.to_scalar().conj(), a.conj().to_scalar());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_base(1), None);
        assert_eq!(prime_power_base(8), Some(2));
        assert_eq!(prime_power_base(9), Some(3));
        assert_eq!(prime_power_base(15), None);
        assert_eq!(prime_power_base(13), Some(13));
    }
}
