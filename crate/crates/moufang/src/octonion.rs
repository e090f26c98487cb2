//! Exact octonion arithmetic over dyadic rationals, the 240 unit
//! integral octonions, and their generation by {i, j, h}.
//!
//! Octonions are pairs of quaternions multiplied by the doubling rule
//!
//! ```text
//! (q, Q)(r, R) = (qr - conj(R) Q, R q + Q conj(r))
//! ```
//!
//! written against the basis 1, i, j, k, e, ie, je, ke. Every
//! coordinate is an exact dyadic rational (integer numerator over a
//! power of two); there is no floating point anywhere, so equality and
//! norm checks are exact. The quaternion convention is ij = k, jk = i,
//! ki = j, pinned by the identity hi = -1 - ih for h = (i+j+k+e)/2,
//! which is asserted in the tests.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::loop_core::{closure, ElementSet, LoopElement};

/// An exact dyadic rational num / 2^exp, normalized so exp = 0 or num
/// is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    exp: u8,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    pub fn integer(n: i64) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    /// num / 2^exp, normalized.
    pub fn new(num: i64, exp: u8) -> Dyadic {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    /// The denominator 2^exp.
    pub fn denominator(self) -> i64 {
        1i64 << self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.exp == 0
    }

    /// Integer multiple of 1/2.
    pub fn is_half_integer(self) -> bool {
        self.exp <= 1
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }

    fn checked(v: i128) -> i64 {
        i64::try_from(v).expect("dyadic arithmetic overflowed i64")
    }
}

impl std::ops::Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let a = (self.num as i128) << (exp - self.exp);
        let b = (rhs.num as i128) << (exp - rhs.exp);
        Dyadic::new(Dyadic::checked(a + b), exp)
    }
}

impl std::ops::Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl std::ops::Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(
            Dyadic::checked(self.num as i128 * rhs.num as i128),
            self.exp + rhs.exp,
        )
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = (self.num as i128) << (exp - self.exp);
        let b = (other.num as i128) << (exp - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Dyadic> {
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num: i64 = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator {num_str:?}")))?;
        let exp = match den_str {
            None => 0,
            Some(d) => {
                let den: i64 = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
                if den <= 0 || den.count_ones() != 1 {
                    return Err(Error::Parse(format!(
                        "denominator {den} is not a power of two"
                    )));
                }
                den.trailing_zeros() as u8
            }
        };
        Ok(Dyadic::new(num, exp))
    }
}

/// A quaternion a0 + a1 i + a2 j + a3 k with dyadic coordinates and the
/// convention ij = k, jk = i, ki = j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quaternion(pub [Dyadic; 4]);

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion([Dyadic::ZERO; 4]);
    pub const ONE: Quaternion =
        Quaternion([Dyadic::ONE, Dyadic::ZERO, Dyadic::ZERO, Dyadic::ZERO]);

    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        let a = &self.0;
        let b = &o.0;
        Quaternion([
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ])
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion([self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }

    fn add(&self, o: &Quaternion) -> Quaternion {
        Quaternion([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }

    fn sub(&self, o: &Quaternion) -> Quaternion {
        Quaternion([
            self.0[0] - o.0[0],
            self.0[1] - o.0[1],
            self.0[2] - o.0[2],
            self.0[3] - o.0[3],
        ])
    }

    fn neg(&self) -> Quaternion {
        Quaternion([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

/// `a + b e` for quaternions a, b; coordinates are read in the order
/// 1, i, j, k, e, ie, je, ke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Octonion {
    a: Quaternion,
    b: Quaternion,
}

pub const BASIS_NAMES: [&str; 8] = ["1", "i", "j", "k", "e", "ie", "je", "ke"];

impl Octonion {
    pub fn new(a: Quaternion, b: Quaternion) -> Octonion {
        Octonion { a, b }
    }

    pub fn from_coeffs(c: [Dyadic; 8]) -> Octonion {
        Octonion {
            a: Quaternion([c[0], c[1], c[2], c[3]]),
            b: Quaternion([c[4], c[5], c[6], c[7]]),
        }
    }

    pub fn coeffs(&self) -> [Dyadic; 8] {
        let (a, b) = (&self.a.0, &self.b.0);
        [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
    }

    pub fn zero() -> Octonion {
        Octonion {
            a: Quaternion::ZERO,
            b: Quaternion::ZERO,
        }
    }

    pub fn one() -> Octonion {
        Octonion {
            a: Quaternion::ONE,
            b: Quaternion::ZERO,
        }
    }

    /// Basis element by Dickson index: 0 -> 1, 1 -> i, ..., 7 -> ke.
    pub fn unit(idx: usize) -> Octonion {
        assert!(idx < 8);
        let mut c = [Dyadic::ZERO; 8];
        c[idx] = Dyadic::ONE;
        Octonion::from_coeffs(c)
    }

    pub fn i() -> Octonion {
        Octonion::unit(1)
    }

    pub fn j() -> Octonion {
        Octonion::unit(2)
    }

    pub fn k() -> Octonion {
        Octonion::unit(3)
    }

    pub fn e() -> Octonion {
        Octonion::unit(4)
    }

    /// h = (i + j + k + e) / 2, a unit integral octonion.
    pub fn h() -> Octonion {
        let z = Dyadic::ZERO;
        let hf = Dyadic::HALF;
        Octonion::from_coeffs([z, hf, hf, hf, hf, z, z, z])
    }

    /// Cayley-Dickson product (q, Q)(r, R) = (qr - conj(R) Q, Rq + Q conj(r)).
    pub fn mul(&self, o: &Octonion) -> Octonion {
        let (q, qq) = (&self.a, &self.b);
        let (r, rr) = (&o.a, &o.b);
        Octonion {
            a: q.mul(r).sub(&rr.conj().mul(qq)),
            b: rr.mul(q).add(&qq.mul(&r.conj())),
        }
    }

    /// Negates the seven imaginary coordinates.
    pub fn conj(&self) -> Octonion {
        Octonion {
            a: self.a.conj(),
            b: self.b.neg(),
        }
    }

    pub fn add(&self, o: &Octonion) -> Octonion {
        Octonion {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
        }
    }

    pub fn sub(&self, o: &Octonion) -> Octonion {
        Octonion {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
        }
    }

    pub fn scale(&self, c: Dyadic) -> Octonion {
        Octonion::from_coeffs(self.coeffs().map(|x| x * c))
    }

    /// a conj(a); the product has zero imaginary part (asserted) and
    /// equals the sum of the squared coordinates.
    pub fn norm(&self) -> Dyadic {
        let prod = self.mul(&self.conj());
        let c = prod.coeffs();
        assert!(
            c[1..].iter().all(|x| x.is_zero()),
            "norm has a nonzero imaginary part"
        );
        c[0]
    }

    /// a + conj(a), a scalar.
    pub fn trace(&self) -> Dyadic {
        let s = self.add(&self.conj());
        let c = s.coeffs();
        debug_assert!(c[1..].iter().all(|x| x.is_zero()));
        c[0]
    }

    /// Integral-element conditions: half-integer coordinates with
    /// integer norm and integer trace.
    pub fn is_integral(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_half_integer())
            && self.norm().is_integer()
            && self.trace().is_integer()
    }

    fn cmp_coeffs(&self, other: &Octonion) -> Ordering {
        for (x, y) in self.coeffs().iter().zip(other.coeffs().iter()) {
            match x.cmp(y) {
                Ordering::Equal => {}
                non_eq => return non_eq,
            }
        }
        Ordering::Equal
    }
}

impl Ord for Octonion {
    fn cmp(&self, other: &Octonion) -> Ordering {
        self.cmp_coeffs(other)
    }
}

impl PartialOrd for Octonion {
    fn partial_cmp(&self, other: &Octonion) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs();
        write!(f, "{}", c[0])?;
        for (coeff, name) in c[1..].iter().zip(&BASIS_NAMES[1..]) {
            write!(f, " + {coeff} {name}")?;
        }
        Ok(())
    }
}

impl LoopElement for Octonion {
    type Key = Octonion;

    fn mul(&self, other: &Self) -> Self {
        Octonion::mul(self, other)
    }

    fn key(&self) -> Octonion {
        *self
    }

    fn is_identity(&self) -> bool {
        *self == Octonion::one()
    }
}

impl FromStr for Octonion {
    type Err = Error;

    /// Parses sums of signed dyadic terms against the basis names, e.g.
    /// `0 + 1/2 i + 1/2 j + 1/2 k + 1/2 e + 0 ie + 0 je + 0 ke`,
    /// `i`, `-1/2 k + e`, or the shorthand `h`.
    fn from_str(s: &str) -> Result<Octonion> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Parse("empty octonion expression".into()));
        }
        let mut acc = Octonion::zero();
        let mut sign = Dyadic::ONE;
        let mut expect_term = true;
        let mut idx = 0;
        while idx < tokens.len() {
            let tok = tokens[idx];
            match tok {
                "+" | "-" if !expect_term => {
                    sign = if tok == "-" {
                        Dyadic::integer(-1)
                    } else {
                        Dyadic::ONE
                    };
                    expect_term = true;
                    idx += 1;
                    continue;
                }
                _ => {}
            }
            if !expect_term {
                return Err(Error::Parse(format!("expected + or - before {tok:?}")));
            }

            let (term_sign, body) = match tok.strip_prefix('-') {
                Some(rest) if !rest.is_empty() => (Dyadic::integer(-1), rest),
                _ => (Dyadic::ONE, tok),
            };
            let term = if body == "h" {
                Octonion::h()
            } else if let Some(unit) = basis_index(body) {
                Octonion::unit(unit)
            } else {
                let coeff: Dyadic = body.parse()?;
                // a bare coefficient, optionally followed by a unit name
                if let Some(unit) = tokens.get(idx + 1).and_then(|t| basis_index(t)) {
                    idx += 1;
                    Octonion::unit(unit).scale(coeff)
                } else {
                    Octonion::one().scale(coeff)
                }
            };
            acc = acc.add(&term.scale(sign * term_sign));
            sign = Dyadic::ONE;
            expect_term = false;
            idx += 1;
        }
        if expect_term {
            return Err(Error::Parse("dangling sign in octonion expression".into()));
        }
        Ok(acc)
    }
}

fn basis_index(name: &str) -> Option<usize> {
    BASIS_NAMES.iter().position(|&n| n == name && n != "1")
}

/// The unit integral octonions: multiplicative closure of {i, j, h}.
/// Exactly 240 elements, every one of norm 1 with half-integer
/// coordinates and integer trace.
pub fn jprime_enumerate() -> Result<ElementSet<Octonion>> {
    closure(&[Octonion::i(), Octonion::j(), Octonion::h()], 10_000)
}

/// The 120 sign classes of the unit integral octonions.
pub fn jprime_classes(jprime: &ElementSet<Octonion>) -> Vec<UnitClass> {
    let mut classes: Vec<UnitClass> = jprime
        .iter()
        .map(|a| UnitClass::new(*a).expect("unit norm"))
        .collect();
    classes.sort_by(|x, y| x.rep().cmp(y.rep()));
    classes.dedup();
    classes
}

/// Checks that no 3-subset of the basis elements multiplicatively
/// generates all 240 unit integral octonions; returns the first
/// generating triple if one exists. `signed` widens the candidate set
/// from the 8 basis elements to the 16 signed ones.
pub fn check_basis_triples(signed: bool) -> Result<Option<[Octonion; 3]>> {
    let mut candidates: Vec<Octonion> = (0..8).map(Octonion::unit).collect();
    if signed {
        for idx in 0..8 {
            candidates.push(-Octonion::unit(idx));
        }
    }
    let n = candidates.len();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let triple = [candidates[x], candidates[y], candidates[z]];
                let closed = closure(&triple, 10_000)?;
                if closed.len() >= 240 {
                    return Ok(Some(triple));
                }
            }
        }
    }
    Ok(None)
}

/// An octonion of norm 1 canonicalized modulo {1, -1}: the
/// representative has a positive first nonzero coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitClass {
    rep: Octonion,
}

impl UnitClass {
    pub fn new(a: Octonion) -> Result<UnitClass> {
        let norm = a.norm();
        if norm != Dyadic::ONE {
            return Err(Error::NotUnit {
                norm: norm.to_string(),
            });
        }
        let first_nonzero = a
            .coeffs()
            .into_iter()
            .find(|c| !c.is_zero())
            .expect("norm-1 octonion is nonzero");
        Ok(UnitClass {
            rep: if first_nonzero.is_positive() { a } else { -a },
        })
    }

    pub fn rep(&self) -> &Octonion {
        &self.rep
    }
}

impl fmt::Display for UnitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl LoopElement for UnitClass {
    type Key = Octonion;

    fn mul(&self, other: &Self) -> Self {
        UnitClass::new(self.rep.mul(&other.rep))
            .expect("norm is multiplicative, so unit classes are closed under products")
    }

    fn key(&self) -> Octonion {
        self.rep
    }

    fn is_identity(&self) -> bool {
        self.rep == Octonion::one()
    }
}
