//! Arithmetic in the prime field `F_p`.
//!
//! [`Prime`] carries the modulus and does raw residue arithmetic on `u32`
//! values; the polynomial code stores bare residues and goes through it.
//! [`Scalar`] pairs a residue with its modulus for standalone use.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::Error;

/// A prime modulus `2 <= p <= 2^31 - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub const MAX: u32 = (1 << 31) - 1;

    pub fn new(p: u64) -> Result<Self, Error> {
        if p < 2 || p > Self::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Least nonnegative residue of an arbitrary integer.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let m = self.0 as u64;
        let mut base = a as u64 % m;
        let mut acc = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32, Error> {
        if a.is_multiple_of(self.0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    /// `(-1)^k` as a residue.
    #[inline]
    pub fn sign(self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.0 - 1
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the base set {2, 3, 5, 7} is exact below
/// 3 215 031 751, which covers every supported modulus.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of `F_p`, stored as its least nonnegative residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    p: Prime,
}

impl Scalar {
    pub fn new(value: i64, p: Prime) -> Self {
        Scalar {
            value: p.reduce(value),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        Scalar { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        Scalar { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Self, Error> {
        Ok(Scalar {
            value: self.p.inv(self.value)?,
            p: self.p,
        })
    }

    pub fn pow(self, e: u64) -> Self {
        Scalar {
            value: self.p.pow(self.value, e),
            p: self.p,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.p, rhs.p, "scalars from different fields");
        Scalar {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.p, rhs.p, "scalars from different fields");
        Scalar {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.p, rhs.p, "scalars from different fields");
        Scalar {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

/// `k! mod p` for `0 <= k < p`.
pub fn factorial_mod(k: u32, p: Prime) -> Scalar {
    let value = (1..=k).fold(1u32, |acc, i| p.mul(acc, i % p.get()));
    Scalar { value, p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Scalar::new(2, prime(3)).inv().unwrap().value(), 2);
        assert_eq!(Scalar::new(1, prime(5)).inv().unwrap().value(), 1);
        // brute-force scan for 3x = 1 mod 7
        let scanned = (0..7).find(|x| 3 * x % 7 == 1).unwrap();
        assert_eq!(scanned, 5);
        assert_eq!(Scalar::new(3, prime(7)).inv().unwrap().value(), scanned);
        assert_eq!(Scalar::zero(prime(7)).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial_mod(2, prime(3)).value(), 2);
        assert_eq!(factorial_mod(0, prime(5)).value(), 1);
        assert_eq!(720 % 7, 6);
        assert_eq!(factorial_mod(6, prime(7)).value(), 6);
    }

    #[test]
    fn wilson() {
        for p in [2u64, 3, 5, 7, 11, 13, 101, 65_521] {
            let p = prime(p);
            assert_eq!(factorial_mod(p.get() - 1, p).value(), p.get() - 1);
        }
    }

    #[test]
    fn fermat_exhaustive() {
        for p in [2u64, 3, 5, 7] {
            let p = prime(p);
            for a in 0..p.get() {
                let a = Scalar::new(a as i64, p);
                assert_eq!(a.pow(p.get() as u64), a);
            }
        }
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5, 7] {
            let p = prime(p);
            for _ in 0..1000 {
                let mut draw = || Scalar::new(rng.gen_range(0..p.get()) as i64, p);
                let (a, b, c) = (draw(), draw(), draw());
                assert_eq!((a + b) + c, a + (b + c));
                assert_eq!((a * b) * c, a * (b * c));
                assert_eq!(a * (b + c), a * b + a * c);
                assert_eq!(a + b, b + a);
                assert_eq!(a - a, Scalar::zero(p));
                assert_eq!(a + (-a), Scalar::zero(p));
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), Scalar::one(p));
                }
            }
        }
    }

    #[test]
    fn primality() {
        assert!(Prime::new(2_147_483_647).is_ok());
        assert!(Prime::new(2_147_483_648).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(561).is_err());
        assert!(Prime::new(25_326_001).is_err());
        let sieve: alloc::vec::Vec<u64> = (0..200).filter(|&n| is_prime(n)).collect();
        let naive: alloc::vec::Vec<u64> = (2..200u64)
            .filter(|&n| (2..n).all(|d| n % d != 0))
            .collect();
        assert_eq!(sieve, naive);
    }

    #[test]
    fn negative_one_prints_as_p_minus_one() {
        let p = prime(5);
        assert_eq!(alloc::format!("{}", Scalar::new(-1, p)), "4");
    }
}
