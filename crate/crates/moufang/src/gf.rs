//! Exact arithmetic in the prime field F_p and in F_p^3.
//!
//! Residues are stored in one byte, which bounds the supported primes to
//! 2 <= p <= 251 and gives every Zorn matrix an 8-byte packed encoding.
//! Mixed-modulus operations are rejected, never silently coerced: the
//! checked entry points return [`Error::ModulusMismatch`], the operator
//! impls panic.

use std::fmt;

use crate::error::{Error, Result};

/// Largest prime that fits the one-byte residue encoding.
pub const MAX_PRIME: u8 = 251;

/// A validated prime modulus in the supported range 2..=251.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u8);

impl Prime {
    /// Validates 2 <= p <= 251 and primality (trial division).
    pub fn new(p: u16) -> Result<Prime> {
        if p < 2 || p > MAX_PRIME as u16 {
            return Err(Error::UnsupportedPrime {
                p,
                reason: format!("outside supported range 2..={MAX_PRIME}"),
            });
        }
        let p8 = p as u8;
        if !is_prime(p8) {
            return Err(Error::UnsupportedPrime {
                p,
                reason: format!("{p} is not prime"),
            });
        }
        Ok(Prime(p8))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u8) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u8;
    while (d as u16) * (d as u16) <= n as u16 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue in F_p. Carries its modulus; operations across moduli are
/// rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElement {
    value: u8,
    p: u8,
}

impl FpElement {
    /// Reduces an arbitrary integer into [0, p).
    pub fn new(value: i64, p: Prime) -> FpElement {
        let m = p.0 as i64;
        FpElement {
            value: value.rem_euclid(m) as u8,
            p: p.0,
        }
    }

    pub fn zero(p: Prime) -> FpElement {
        FpElement { value: 0, p: p.0 }
    }

    pub fn one(p: Prime) -> FpElement {
        FpElement {
            value: 1 % p.0,
            p: p.0,
        }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn prime(self) -> Prime {
        Prime(self.p)
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// x^e by square-and-multiply.
    pub fn pow(self, mut e: u64) -> FpElement {
        let mut base = self;
        let mut acc = FpElement {
            value: 1 % self.p,
            p: self.p,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Multiplicative inverse via x^(p-2); branch-free and correct for
    /// every supported p.
    pub fn inv(self) -> Result<FpElement> {
        if self.value == 0 {
            return Err(Error::InversionOfZero { p: self.p });
        }
        Ok(self.pow(self.p as u64 - 2))
    }

    fn require_same(self, other: FpElement) {
        assert_eq!(
            self.p, other.p,
            "modulus mismatch: F_{} vs F_{}",
            self.p, other.p
        );
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl std::ops::Add for FpElement {
    type Output = FpElement;
    fn add(self, rhs: FpElement) -> FpElement {
        self.require_same(rhs);
        FpElement {
            value: ((self.value as u16 + rhs.value as u16) % self.p as u16) as u8,
            p: self.p,
        }
    }
}

impl std::ops::Sub for FpElement {
    type Output = FpElement;
    fn sub(self, rhs: FpElement) -> FpElement {
        self.require_same(rhs);
        FpElement {
            value: ((self.value as u16 + (self.p - rhs.value) as u16) % self.p as u16) as u8,
            p: self.p,
        }
    }
}

impl std::ops::Mul for FpElement {
    type Output = FpElement;
    fn mul(self, rhs: FpElement) -> FpElement {
        self.require_same(rhs);
        FpElement {
            value: ((self.value as u16 * rhs.value as u16) % self.p as u16) as u8,
            p: self.p,
        }
    }
}

impl std::ops::Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        FpElement {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }
}

/// A 3-vector over F_p with all coordinates sharing one modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpVec3 {
    coords: [u8; 3],
    p: u8,
}

impl FpVec3 {
    pub fn new(coords: [FpElement; 3]) -> Result<FpVec3> {
        let p = coords[0].p;
        for c in &coords[1..] {
            if c.p != p {
                return Err(Error::ModulusMismatch { left: p, right: c.p });
            }
        }
        Ok(FpVec3 {
            coords: [coords[0].value, coords[1].value, coords[2].value],
            p,
        })
    }

    /// Builds a vector from arbitrary integers, reducing mod p.
    pub fn from_ints(coords: [i64; 3], p: Prime) -> FpVec3 {
        let m = p.0 as i64;
        FpVec3 {
            coords: [
                coords[0].rem_euclid(m) as u8,
                coords[1].rem_euclid(m) as u8,
                coords[2].rem_euclid(m) as u8,
            ],
            p: p.0,
        }
    }

    pub fn zero(p: Prime) -> FpVec3 {
        FpVec3 {
            coords: [0; 3],
            p: p.0,
        }
    }

    /// Standard basis vector e_i, i in 1..=3.
    pub fn unit(i: usize, p: Prime) -> FpVec3 {
        assert!((1..=3).contains(&i), "unit vector index must be 1..=3");
        let mut coords = [0; 3];
        coords[i - 1] = 1 % p.0;
        FpVec3 { coords, p: p.0 }
    }

    pub fn coord(self, i: usize) -> FpElement {
        FpElement {
            value: self.coords[i],
            p: self.p,
        }
    }

    pub fn coords(self) -> [u8; 3] {
        self.coords
    }

    pub fn prime(self) -> Prime {
        Prime(self.p)
    }

    pub fn is_zero(self) -> bool {
        self.coords == [0; 3]
    }

    fn check_same(self, other: FpVec3) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    /// Dot product u1*v1 + u2*v2 + u3*v3 mod p.
    pub fn dot(self, other: FpVec3) -> Result<FpElement> {
        self.check_same(other)?;
        let p = self.p as u32;
        let mut acc = 0u32;
        for i in 0..3 {
            acc += self.coords[i] as u32 * other.coords[i] as u32;
        }
        Ok(FpElement {
            value: (acc % p) as u8,
            p: self.p,
        })
    }

    /// Cross product by the usual determinant expansion, reduced mod p.
    pub fn cross(self, other: FpVec3) -> Result<FpVec3> {
        self.check_same(other)?;
        let p = self.p as i32;
        let a = |i: usize| self.coords[i] as i32;
        let b = |i: usize| other.coords[i] as i32;
        let raw = [
            a(1) * b(2) - a(2) * b(1),
            a(2) * b(0) - a(0) * b(2),
            a(0) * b(1) - a(1) * b(0),
        ];
        Ok(FpVec3 {
            coords: [
                raw[0].rem_euclid(p) as u8,
                raw[1].rem_euclid(p) as u8,
                raw[2].rem_euclid(p) as u8,
            ],
            p: self.p,
        })
    }

    /// Scalar multiple c*v.
    pub fn scale(self, c: FpElement) -> FpVec3 {
        assert_eq!(self.p, c.p, "modulus mismatch: F_{} vs F_{}", self.p, c.p);
        let p = self.p as u16;
        let mut coords = [0u8; 3];
        for i in 0..3 {
            coords[i] = ((self.coords[i] as u16 * c.value as u16) % p) as u8;
        }
        FpVec3 { coords, p: self.p }
    }
}

impl std::ops::Add for FpVec3 {
    type Output = FpVec3;
    fn add(self, rhs: FpVec3) -> FpVec3 {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let p = self.p as u16;
        let mut coords = [0u8; 3];
        for i in 0..3 {
            coords[i] = ((self.coords[i] as u16 + rhs.coords[i] as u16) % p) as u8;
        }
        FpVec3 { coords, p: self.p }
    }
}

impl std::ops::Sub for FpVec3 {
    type Output = FpVec3;
    fn sub(self, rhs: FpVec3) -> FpVec3 {
        self + (-rhs)
    }
}

impl std::ops::Neg for FpVec3 {
    type Output = FpVec3;
    fn neg(self) -> FpVec3 {
        let mut coords = [0u8; 3];
        for i in 0..3 {
            coords[i] = if self.coords[i] == 0 {
                0
            } else {
                self.p - self.coords[i]
            };
        }
        FpVec3 { coords, p: self.p }
    }
}

impl fmt::Display for FpVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.coords[0], self.coords[1], self.coords[2])
    }
}
