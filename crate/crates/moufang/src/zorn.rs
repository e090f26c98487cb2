//! Zorn vector-matrix algebra over F_p.
//!
//! A Zorn matrix is the 2x2 array
//!
//! ```text
//!     [[ a, alpha ],
//!      [ beta, b  ]]
//! ```
//!
//! with scalar diagonal a, b in F_p and vector antidiagonal alpha, beta
//! in F_p^3. Multiplication is ordinary matrix multiplication corrected
//! by cross-product terms:
//!
//! ```text
//! (a, alpha; beta, b)(c, gamma; delta, d) =
//!     (ac + alpha.delta,        a gamma + d alpha - beta x delta;
//!      c beta + b delta + alpha x gamma,        beta.gamma + bd)
//! ```
//!
//! and det = ab - alpha.beta. The unit-determinant matrices form a
//! Moufang loop; modulo its center {I, -I} it is the simple Paige loop.
//! [`CanonicalElement`] fixes the representative of {M, -M} with the
//! lexicographically least byte encoding, so equality of canonical
//! elements is exactly equality in the quotient.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{FpElement, FpVec3, Prime};
use crate::packed::{self, Digits};

/// 2x2 vector matrix (a, alpha; beta, b) over one prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZornMatrix {
    digits: Digits, // (a, a1, a2, a3, b1, b2, b3, b)
    p: u8,
}

impl ZornMatrix {
    pub fn new(a: FpElement, alpha: FpVec3, beta: FpVec3, b: FpElement) -> Result<ZornMatrix> {
        let p = a.prime();
        for other in [alpha.prime(), beta.prime(), b.prime()] {
            if other != p {
                return Err(Error::ModulusMismatch {
                    left: p.get(),
                    right: other.get(),
                });
            }
        }
        let al = alpha.coords();
        let be = beta.coords();
        Ok(ZornMatrix {
            digits: [
                a.value(),
                al[0],
                al[1],
                al[2],
                be[0],
                be[1],
                be[2],
                b.value(),
            ],
            p: p.get(),
        })
    }

    /// Builds from raw integers, reducing mod p.
    pub fn from_ints(a: i64, alpha: [i64; 3], beta: [i64; 3], b: i64, p: Prime) -> ZornMatrix {
        ZornMatrix::new(
            FpElement::new(a, p),
            FpVec3::from_ints(alpha, p),
            FpVec3::from_ints(beta, p),
            FpElement::new(b, p),
        )
        .expect("one modulus by construction")
    }

    pub fn identity(p: Prime) -> ZornMatrix {
        ZornMatrix {
            digits: packed::identity(p.get()),
            p: p.get(),
        }
    }

    pub fn a(&self) -> FpElement {
        FpElement::new(self.digits[0] as i64, self.prime())
    }

    pub fn b(&self) -> FpElement {
        FpElement::new(self.digits[7] as i64, self.prime())
    }

    pub fn alpha(&self) -> FpVec3 {
        let d = &self.digits;
        FpVec3::from_ints([d[1] as i64, d[2] as i64, d[3] as i64], self.prime())
    }

    pub fn beta(&self) -> FpVec3 {
        let d = &self.digits;
        FpVec3::from_ints([d[4] as i64, d[5] as i64, d[6] as i64], self.prime())
    }

    pub fn prime(&self) -> Prime {
        Prime::new(self.p as u16).expect("modulus validated at construction")
    }

    pub(crate) fn digits(&self) -> &Digits {
        &self.digits
    }

    pub(crate) fn from_digits(digits: Digits, p: u8) -> ZornMatrix {
        debug_assert!(digits.iter().all(|&d| d < p));
        ZornMatrix { digits, p }
    }

    /// The 8-byte packed encoding (a, a1, a2, a3, b1, b2, b3, b),
    /// big-endian, so numeric order equals lexicographic entry order.
    pub fn encode(&self) -> u64 {
        packed::encode(&self.digits)
    }

    pub fn from_encoding(key: u64, p: Prime) -> Result<ZornMatrix> {
        let digits = packed::decode(key);
        if digits.iter().any(|&d| d >= p.get()) {
            return Err(Error::Parse(format!(
                "encoding {key:#018x} has a byte outside [0, {p})"
            )));
        }
        Ok(ZornMatrix { digits, p: p.get() })
    }

    /// det = ab - alpha.beta.
    pub fn det(&self) -> FpElement {
        FpElement::new(packed::det(self.p, &self.digits) as i64, self.prime())
    }

    fn check_same(&self, other: &ZornMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    /// Zorn's product.
    pub fn mul(&self, other: &ZornMatrix) -> Result<ZornMatrix> {
        self.check_same(other)?;
        let (a, alpha, beta, b) = (self.a(), self.alpha(), self.beta(), self.b());
        let (c, gamma, delta, d) = (other.a(), other.alpha(), other.beta(), other.b());
        let out = ZornMatrix::new(
            a * c + alpha.dot(delta)?,
            gamma.scale(a) + alpha.scale(d) - beta.cross(delta)?,
            beta.scale(c) + delta.scale(b) + alpha.cross(gamma)?,
            beta.dot(gamma)? + b * d,
        )?;
        debug_assert_eq!(
            out.digits,
            packed::mul_runtime(self.p, &self.digits, &other.digits),
            "packed kernel and reference product disagree"
        );
        Ok(out)
    }

    /// Inverse of a det-1 matrix: (b, -alpha; -beta, a).
    pub fn inv(&self) -> Result<ZornMatrix> {
        let det = self.det();
        if det.value() != 1 {
            return Err(Error::NotUnitDeterminant { det: det.value() });
        }
        Ok(ZornMatrix::new(self.b(), -self.alpha(), -self.beta(), self.a())
            .expect("same modulus"))
    }

    /// Swaps alpha and beta.
    pub fn transpose(&self) -> ZornMatrix {
        let d = &self.digits;
        ZornMatrix {
            digits: [d[0], d[4], d[5], d[6], d[1], d[2], d[3], d[7]],
            p: self.p,
        }
    }

    /// Left-to-right power M^e; unambiguous by diassociativity.
    pub fn pow(&self, e: u32) -> ZornMatrix {
        let mut acc = ZornMatrix {
            digits: packed::identity(self.p),
            p: self.p,
        };
        for _ in 0..e {
            acc = acc.mul(self).expect("same modulus");
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.digits == packed::identity(self.p)
    }
}

impl std::ops::Neg for ZornMatrix {
    type Output = ZornMatrix;
    fn neg(self) -> ZornMatrix {
        ZornMatrix {
            digits: packed::neg(self.p, &self.digits),
            p: self.p,
        }
    }
}

impl fmt::Display for ZornMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.digits;
        write!(
            f,
            "[[{},({},{},{})],[({},{},{}),{}]]",
            d[0], d[1], d[2], d[3], d[4], d[5], d[6], d[7]
        )
    }
}

impl FromStr for ZornMatrix {
    type Err = Error;

    /// Parses the rendering `[[a,(a1,a2,a3)],[(b1,b2,b3),b]]` with
    /// arbitrary whitespace. The modulus is inferred as the smallest
    /// supported prime exceeding every entry, so parsing is only exposed
    /// through [`ZornMatrix::parse_with_prime`] and the CLI, which fix p
    /// explicitly.
    fn from_str(_s: &str) -> Result<ZornMatrix> {
        Err(Error::Parse(
            "use ZornMatrix::parse_with_prime(text, p)".into(),
        ))
    }
}

impl ZornMatrix {
    /// Parses `[[a,(a1,a2,a3)],[(b1,b2,b3),b]]`, arbitrary whitespace
    /// allowed, entries reduced mod p.
    pub fn parse_with_prime(text: &str, p: Prime) -> Result<ZornMatrix> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("expected [[..],[..]], got {text:?}")))?;
        let halves: Vec<&str> = inner.split("],[").collect();
        if halves.len() != 2 {
            return Err(Error::Parse(format!("expected two rows in {text:?}")));
        }
        // row 1: a,(a1,a2,a3)    row 2: (b1,b2,b3),b
        let (a_str, alpha_str) = halves[0]
            .split_once(",(")
            .ok_or_else(|| Error::Parse(format!("bad first row in {text:?}")))?;
        let alpha_str = alpha_str
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unclosed vector in {text:?}")))?;
        let (beta_str, b_str) = halves[1]
            .strip_prefix('(')
            .and_then(|s| s.split_once("),"))
            .ok_or_else(|| Error::Parse(format!("bad second row in {text:?}")))?;

        let num = |s: &str| -> Result<i64> {
            s.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        };
        let vec3 = |s: &str| -> Result<[i64; 3]> {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("expected 3 coordinates in {s:?}")));
            }
            Ok([num(parts[0])?, num(parts[1])?, num(parts[2])?])
        };
        Ok(ZornMatrix::from_ints(
            num(a_str)?,
            vec3(alpha_str)?,
            vec3(beta_str)?,
            num(b_str)?,
            p,
        ))
    }
}

/// u(alpha) = [[1, alpha], [0, 1]].
pub fn make_u(alpha: FpVec3) -> ZornMatrix {
    let p = alpha.prime();
    ZornMatrix::new(FpElement::one(p), alpha, FpVec3::zero(p), FpElement::one(p))
        .expect("same modulus")
}

/// l(alpha) = [[1, 0], [alpha, 1]].
pub fn make_l(alpha: FpVec3) -> ZornMatrix {
    let p = alpha.prime();
    ZornMatrix::new(FpElement::one(p), FpVec3::zero(p), alpha, FpElement::one(p))
        .expect("same modulus")
}

/// The first-nonzero-coordinate companion of alpha:
/// (-a1^-1, 0, 0) if a1 != 0, else (0, -a2^-1, 0) if a2 != 0, else
/// (0, 0, -a3^-1). Satisfies alpha . t(alpha) = -1.
pub fn map_t(alpha: FpVec3) -> Result<FpVec3> {
    if alpha.is_zero() {
        return Err(Error::ZeroVector);
    }
    let p = alpha.prime();
    let mut out = [0i64; 3];
    for i in 0..3 {
        let c = alpha.coord(i);
        if !c.is_zero() {
            out[i] = -(c.inv()?.value() as i64);
            break;
        }
    }
    let t = FpVec3::from_ints(out, p);
    debug_assert_eq!((-alpha.dot(t).unwrap()).value(), 1 % p.get());
    Ok(t)
}

/// s(alpha) = [[0, alpha], [t(alpha), 0]]; requires alpha != 0.
pub fn make_s(alpha: FpVec3) -> Result<ZornMatrix> {
    let p = alpha.prime();
    let t = map_t(alpha)?;
    ZornMatrix::new(FpElement::zero(p), alpha, t, FpElement::zero(p))
}

/// A det-1 Zorn matrix canonicalized modulo the center {I, -I}: the
/// representative is the lexicographically least of the encodings of M
/// and -M. For p = 2 the rule is vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalElement {
    rep: ZornMatrix,
}

impl CanonicalElement {
    /// Canonicalizes a det-1 matrix.
    pub fn canonicalize(m: ZornMatrix) -> Result<CanonicalElement> {
        let det = m.det();
        if det.value() != 1 {
            return Err(Error::NotUnitDeterminant { det: det.value() });
        }
        Ok(CanonicalElement {
            rep: ZornMatrix {
                digits: packed::canonical(m.p, &m.digits),
                p: m.p,
            },
        })
    }

    pub fn rep(&self) -> &ZornMatrix {
        &self.rep
    }

    pub fn prime(&self) -> Prime {
        self.rep.prime()
    }

    pub fn identity(p: Prime) -> CanonicalElement {
        CanonicalElement {
            rep: ZornMatrix::identity(p),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rep.is_identity()
    }

    /// Packed encoding of the representative; total order on elements.
    pub fn key(&self) -> u64 {
        self.rep.encode()
    }

    /// Canonical product. Panics on modulus mismatch; elements of one
    /// loop always share a modulus.
    pub fn mul(&self, other: &CanonicalElement) -> CanonicalElement {
        assert_eq!(self.rep.p, other.rep.p, "modulus mismatch");
        let d = packed::mul_runtime(self.rep.p, &self.rep.digits, &other.rep.digits);
        CanonicalElement {
            rep: ZornMatrix {
                digits: packed::canonical(self.rep.p, &d),
                p: self.rep.p,
            },
        }
    }

    pub fn inv(&self) -> CanonicalElement {
        let m = self.rep.inv().expect("canonical elements have det 1");
        CanonicalElement::canonicalize(m).expect("inverse of det-1 has det 1")
    }

    pub fn pow(&self, e: u32) -> CanonicalElement {
        let mut acc = CanonicalElement::identity(self.prime());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub(crate) fn from_canonical_digits(digits: Digits, p: u8) -> CanonicalElement {
        debug_assert_eq!(digits, packed::canonical(p, &digits));
        debug_assert_eq!(packed::det(p, &digits), 1);
        CanonicalElement {
            rep: ZornMatrix::from_digits(digits, p),
        }
    }
}

impl fmt::Display for CanonicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// The three generators of the unit loop mod center: u(e1), u(e2), and
/// x = [[0, e3], [-e3, 1]].
pub fn theorem_generators(p: Prime) -> [CanonicalElement; 3] {
    let u1 = make_u(FpVec3::unit(1, p));
    let u2 = make_u(FpVec3::unit(2, p));
    let x = ZornMatrix::from_ints(0, [0, 0, 1], [0, 0, -1], 1, p);
    [u1, u2, x].map(|m| CanonicalElement::canonicalize(m).expect("generators have det 1"))
}

/// The x of the three-generator set, as a plain matrix.
pub fn theorem_x(p: Prime) -> ZornMatrix {
    ZornMatrix::from_ints(0, [0, 0, 1], [0, 0, -1], 1, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u16) -> Prime {
        Prime::new(n).unwrap()
    }

    fn e(i: usize, pr: Prime) -> FpVec3 {
        FpVec3::unit(i, pr)
    }

    #[test]
    fn identity_is_neutral() {
        let pr = p(5);
        let m = ZornMatrix::from_ints(2, [1, 0, 3], [4, 4, 0], 1, pr);
        let i = ZornMatrix::identity(pr);
        assert_eq!(i.mul(&m).unwrap(), m);
        assert_eq!(m.mul(&i).unwrap(), m);
    }

    #[test]
    fn u_map_is_additive_on_a_line() {
        // u(a alpha) u(b alpha) = u((a+b) alpha)
        let pr = p(5);
        let alpha = e(1, pr);
        let lhs = make_u(alpha).mul(&make_u(alpha.scale(FpElement::new(2, pr)))).unwrap();
        let rhs = make_u(alpha.scale(FpElement::new(3, pr)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn s_product_with_equal_t() {
        // t(alpha) = t(beta) forces s(alpha)s(beta) = [[-1,0],[alpha x beta,-1]]
        let pr = p(3);
        let alpha = FpVec3::from_ints([1, 0, 0], pr);
        let beta = FpVec3::from_ints([1, 1, 0], pr);
        assert_eq!(map_t(alpha).unwrap(), map_t(beta).unwrap());
        let prod = make_s(alpha).unwrap().mul(&make_s(beta).unwrap()).unwrap();
        let cross = alpha.cross(beta).unwrap();
        let expected = ZornMatrix::new(
            FpElement::new(-1, pr),
            FpVec3::zero(pr),
            cross,
            FpElement::new(-1, pr),
        )
        .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn det_examples() {
        let pr = p(7);
        assert_eq!(ZornMatrix::identity(pr).det().value(), 1);
        for alpha in [
            FpVec3::from_ints([1, 2, 3], pr),
            FpVec3::from_ints([0, 5, 1], pr),
        ] {
            assert_eq!(make_u(alpha).det().value(), 1);
            assert_eq!(make_s(alpha).unwrap().det().value(), 1);
        }
    }

    #[test]
    fn inverse_examples() {
        let pr = p(5);
        let i = ZornMatrix::identity(pr);
        assert_eq!(i.inv().unwrap(), i);

        let alpha = FpVec3::from_ints([3, 1, 0], pr);
        assert_eq!(make_u(alpha).inv().unwrap(), make_u(-alpha));

        let x = ZornMatrix::from_ints(0, [0, 0, 1], [0, 0, -1], 1, pr);
        assert!(x.inv().unwrap().mul(&x).unwrap().is_identity());
        assert!(x.mul(&x.inv().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn non_unit_det_has_no_inverse() {
        let pr = p(5);
        let m = ZornMatrix::from_ints(2, [0, 0, 0], [0, 0, 0], 1, pr); // det 2
        assert_eq!(m.inv(), Err(Error::NotUnitDeterminant { det: 2 }));
        assert!(CanonicalElement::canonicalize(m).is_err());
    }

    #[test]
    fn transpose_examples() {
        let pr = p(5);
        let alpha = FpVec3::from_ints([2, 0, 4], pr);
        assert_eq!(make_u(alpha).transpose(), make_l(alpha));
        let m = ZornMatrix::from_ints(1, [2, 3, 4], [0, 1, 2], 3, pr);
        assert_eq!(m.transpose().transpose(), m);
        // s(e_i)' = -s(e_i)
        let s1 = make_s(e(1, pr)).unwrap();
        assert_eq!(s1.transpose(), -s1);
    }

    #[test]
    fn t_map_examples() {
        let pr = p(5);
        assert_eq!(
            map_t(FpVec3::from_ints([1, 2, 3], pr)).unwrap(),
            FpVec3::from_ints([4, 0, 0], pr)
        );
        assert_eq!(
            map_t(FpVec3::from_ints([0, 1, 4], pr)).unwrap(),
            FpVec3::from_ints([0, 4, 0], pr)
        );
        for q in [2u16, 3, 7, 11] {
            let pr = p(q);
            assert_eq!(
                map_t(e(3, pr)).unwrap(),
                FpVec3::from_ints([0, 0, -1], pr)
            );
        }
        assert_eq!(map_t(FpVec3::zero(pr)), Err(Error::ZeroVector));
    }

    #[test]
    fn t_pairing_is_minus_one() {
        let pr = p(7);
        let n = 7i64;
        for k in 1..n.pow(3) {
            let v = FpVec3::from_ints([k % n, (k / n) % n, k / (n * n)], pr);
            let t = map_t(v).unwrap();
            assert_eq!(v.dot(t).unwrap(), FpElement::new(-1, pr));
        }
    }

    #[test]
    fn map_constructors() {
        let pr = p(3);
        assert!(make_u(FpVec3::zero(pr)).is_identity());
        let s2 = make_s(e(2, pr)).unwrap();
        assert_eq!(s2, ZornMatrix::from_ints(0, [0, 1, 0], [0, 2, 0], 0, pr));
        assert_eq!(make_l(e(1, pr)), make_u(e(1, pr)).transpose());
        assert_eq!(make_s(FpVec3::zero(pr)), Err(Error::ZeroVector));
    }

    #[test]
    fn canonicalize_examples() {
        let i2 = ZornMatrix::identity(p(2));
        assert_eq!(
            CanonicalElement::canonicalize(i2).unwrap().rep(),
            &i2
        );
        let pr = p(5);
        let i5 = ZornMatrix::identity(pr);
        assert_eq!(
            CanonicalElement::canonicalize(-i5).unwrap().rep(),
            &i5
        );
    }

    #[test]
    fn canonicalize_constant_on_sign_classes() {
        use rand::{Rng, SeedableRng};
        let pr = p(7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        while found < 100 {
            let m = ZornMatrix::from_ints(
                rng.gen_range(0..7),
                [
                    rng.gen_range(0..7),
                    rng.gen_range(0..7),
                    rng.gen_range(0..7),
                ],
                [
                    rng.gen_range(0..7),
                    rng.gen_range(0..7),
                    rng.gen_range(0..7),
                ],
                rng.gen_range(0..7),
                pr,
            );
            if m.det().value() != 1 {
                continue;
            }
            found += 1;
            let c1 = CanonicalElement::canonicalize(m).unwrap();
            let c2 = CanonicalElement::canonicalize(-m).unwrap();
            assert_eq!(c1, c2);
            // idempotent
            assert_eq!(CanonicalElement::canonicalize(*c1.rep()).unwrap(), c1);
        }
    }

    #[test]
    fn theorem_generator_shapes() {
        let pr = p(2);
        let [g1, g2, g3] = theorem_generators(pr);
        assert_eq!(g1.rep(), &make_u(e(1, pr)));
        assert_eq!(g2.rep(), &make_u(e(2, pr)));
        assert_eq!(
            g3.rep(),
            &ZornMatrix::from_ints(0, [0, 0, 1], [0, 0, 1], 1, pr)
        );

        let pr = p(5);
        let [_, _, g3] = theorem_generators(pr);
        assert_eq!(
            g3.rep(),
            &ZornMatrix::from_ints(0, [0, 0, 1], [0, 0, 4], 1, pr)
        );
        for q in [2u16, 3, 5, 7, 11, 13] {
            for g in theorem_generators(p(q)) {
                assert_eq!(g.rep().det().value(), 1);
            }
        }
    }

    #[test]
    fn det_is_multiplicative_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for q in [3u16, 5, 7] {
            let pr = p(q);
            let n = q as i64;
            for _ in 0..10_000 {
                let mut sample = || {
                    ZornMatrix::from_ints(
                        rng.gen_range(0..n),
                        [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)],
                        [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)],
                        rng.gen_range(0..n),
                        pr,
                    )
                };
                let m = sample();
                let nmat = sample();
                assert_eq!(
                    m.mul(&nmat).unwrap().det(),
                    m.det() * nmat.det()
                );
            }
        }
    }

    #[test]
    fn transpose_is_antiautomorphism_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let pr = p(7);
        for _ in 0..5_000 {
            let mut sample = || {
                ZornMatrix::from_ints(
                    rng.gen_range(0..7),
                    [rng.gen_range(0..7), rng.gen_range(0..7), rng.gen_range(0..7)],
                    [rng.gen_range(0..7), rng.gen_range(0..7), rng.gen_range(0..7)],
                    rng.gen_range(0..7),
                    pr,
                )
            };
            let m = sample();
            let n = sample();
            assert_eq!(
                m.mul(&n).unwrap().transpose(),
                n.transpose().mul(&m.transpose()).unwrap()
            );
        }
    }

    #[test]
    fn mul_inv_round_trips_on_unit_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let pr = p(7);
        let mut found = 0;
        while found < 500 {
            let m = ZornMatrix::from_ints(
                rng.gen_range(0..7),
                [rng.gen_range(0..7), rng.gen_range(0..7), rng.gen_range(0..7)],
                [rng.gen_range(0..7), rng.gen_range(0..7), rng.gen_range(0..7)],
                rng.gen_range(0..7),
                pr,
            );
            if m.det().value() != 1 {
                continue;
            }
            found += 1;
            assert!(m.mul(&m.inv().unwrap()).unwrap().is_identity());
            assert!(m.inv().unwrap().mul(&m).unwrap().is_identity());
        }
    }

    #[test]
    fn conjugation_identities_exhaustive_small_p() {
        // l(alpha) = s(alpha)' u(t(alpha)) (-s(alpha)') and
        // u(alpha) = s(alpha) l(t(alpha)) (-s(alpha)), left to right,
        // for every nonzero alpha.
        for q in [2u16, 3, 5, 7] {
            let pr = p(q);
            let n = q as i64;
            for k in 1..n.pow(3) {
                let alpha = FpVec3::from_ints([k % n, (k / n) % n, k / (n * n)], pr);
                let t = map_t(alpha).unwrap();
                let s = make_s(alpha).unwrap();
                let st = s.transpose();
                let lhs = st.mul(&make_u(t)).unwrap().mul(&-st).unwrap();
                assert_eq!(lhs, make_l(alpha), "l identity failed at p={q} alpha={alpha}");
                let rhs = s.mul(&make_l(t)).unwrap().mul(&-s).unwrap();
                assert_eq!(rhs, make_u(alpha), "u identity failed at p={q} alpha={alpha}");
            }
        }
    }

    #[test]
    fn s_shift_identities_exhaustive_small_p() {
        // t(alpha) = t(beta) implies s(beta) = s(alpha) l(-alpha x beta)
        // and s(beta)' = s(alpha)' u(alpha x beta).
        for q in [2u16, 3, 5] {
            let pr = p(q);
            let n = q as i64;
            let vecs: Vec<FpVec3> = (1..n.pow(3))
                .map(|k| FpVec3::from_ints([k % n, (k / n) % n, k / (n * n)], pr))
                .collect();
            for &alpha in &vecs {
                for &beta in &vecs {
                    if map_t(alpha).unwrap() != map_t(beta).unwrap() {
                        continue;
                    }
                    let cross = alpha.cross(beta).unwrap();
                    let sa = make_s(alpha).unwrap();
                    let sb = make_s(beta).unwrap();
                    assert_eq!(sb, sa.mul(&make_l(-cross)).unwrap());
                    assert_eq!(
                        sb.transpose(),
                        sa.transpose().mul(&make_u(cross)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let pr = p(11);
        let m = ZornMatrix::from_ints(10, [0, 3, 7], [1, 0, 9], 4, pr);
        let text = m.to_string();
        assert_eq!(text, "[[10,(0,3,7)],[(1,0,9),4]]");
        assert_eq!(ZornMatrix::parse_with_prime(&text, pr).unwrap(), m);
        let spaced = "[[ 10 , ( 0 , 3 , 7 ) ] , [ ( 1 , 0 , 9 ) , 4 ]]";
        assert_eq!(ZornMatrix::parse_with_prime(spaced, pr).unwrap(), m);
        assert!(ZornMatrix::parse_with_prime("[[1,2],[3,4]]", pr).is_err());
    }
}
