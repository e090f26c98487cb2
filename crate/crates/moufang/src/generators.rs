//! The generator-reduction chain for the unit Zorn loop mod center:
//! named generating sets, closure-versus-oracle verification, and the
//! exact identities that drive each reduction step.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{FpVec3, Prime};
use crate::loop_core::{canonical_closure, enumerate_unit_loop, ElementSet, DEFAULT_CLOSURE_CAP};
use crate::zorn::{
    make_l, make_s, make_u, map_t, theorem_generators, theorem_x, CanonicalElement, ZornMatrix,
};

/// The named generating sets, from the full translation-style set down
/// to three elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorSet {
    /// {u(a), l(a) : a != 0} over all of F^3.
    Prop1,
    /// {u(a), l(a) : a projective}, first nonzero coordinate 1.
    Prop2,
    /// {u(e1), u(e2), u(e3)} with {s(a), s(a)' : a projective}.
    Prop3,
    /// {u(e_i), s(e_i) : 1 <= i <= 3}.
    Prop5,
    /// u(e1), u(e2), and x = [[0, e3], [-e3, 1]].
    Theorem,
}

impl GeneratorSet {
    pub const ALL: [GeneratorSet; 5] = [
        GeneratorSet::Prop1,
        GeneratorSet::Prop2,
        GeneratorSet::Prop3,
        GeneratorSet::Prop5,
        GeneratorSet::Theorem,
    ];
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            GeneratorSet::Prop1 => "prop1",
            GeneratorSet::Prop2 => "prop2",
            GeneratorSet::Prop3 => "prop3",
            GeneratorSet::Prop5 => "prop5",
            GeneratorSet::Theorem => "theorem",
        };
        f.write_str(tag)
    }
}

impl FromStr for GeneratorSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<GeneratorSet> {
        match s {
            "prop1" => Ok(GeneratorSet::Prop1),
            "prop2" => Ok(GeneratorSet::Prop2),
            "prop3" => Ok(GeneratorSet::Prop3),
            "prop5" => Ok(GeneratorSet::Prop5),
            "theorem" => Ok(GeneratorSet::Theorem),
            other => Err(Error::Parse(format!(
                "unknown generator set {other:?}; expected theorem|prop5|prop3|prop2|prop1"
            ))),
        }
    }
}

/// All nonzero vectors of F_p^3.
pub fn nonzero_vectors(p: Prime) -> Vec<FpVec3> {
    let n = p.get() as i64;
    (1..n.pow(3))
        .map(|k| FpVec3::from_ints([k / (n * n), (k / n) % n, k % n], p))
        .collect()
}

/// Projective representatives: vectors whose first nonzero coordinate
/// is 1. There are p^2 + p + 1 of them.
pub fn projective_vectors(p: Prime) -> Vec<FpVec3> {
    let n = p.get() as i64;
    let mut out = Vec::with_capacity((n * n + n + 1) as usize);
    for b in 0..n {
        for c in 0..n {
            out.push(FpVec3::from_ints([1, b, c], p));
        }
    }
    for c in 0..n {
        out.push(FpVec3::from_ints([0, 1, c], p));
    }
    out.push(FpVec3::from_ints([0, 0, 1], p));
    out
}

/// The canonical elements of the named set. Note that s(e_i)' = -s(e_i),
/// so the three transposed diagonal s-elements of `Prop3` coincide with
/// their untransposed mates modulo the center and the materialized set
/// has 2(p^2 + p + 1) elements.
pub fn materialize(set: GeneratorSet, p: Prime) -> Result<ElementSet<CanonicalElement>> {
    let canon = |m: ZornMatrix| CanonicalElement::canonicalize(m).expect("generators have det 1");
    let mut out: Vec<CanonicalElement> = Vec::new();
    match set {
        GeneratorSet::Prop1 => {
            if p.get() > 5 {
                return Err(Error::UnsupportedPrime {
                    p: p.get() as u16,
                    reason: "the full nonzero-vector set grows as p^3; use p <= 5".into(),
                });
            }
            for a in nonzero_vectors(p) {
                out.push(canon(make_u(a)));
                out.push(canon(make_l(a)));
            }
        }
        GeneratorSet::Prop2 => {
            for a in projective_vectors(p) {
                out.push(canon(make_u(a)));
                out.push(canon(make_l(a)));
            }
        }
        GeneratorSet::Prop3 => {
            for i in 1..=3 {
                out.push(canon(make_u(FpVec3::unit(i, p))));
            }
            for a in projective_vectors(p) {
                let s = make_s(a)?;
                out.push(canon(s));
                out.push(canon(s.transpose()));
            }
        }
        GeneratorSet::Prop5 => {
            for i in 1..=3 {
                out.push(canon(make_u(FpVec3::unit(i, p))));
                out.push(canon(make_s(FpVec3::unit(i, p))?));
            }
        }
        GeneratorSet::Theorem => out.extend(theorem_generators(p)),
    }
    Ok(ElementSet::from_vec(out))
}

/// Outcome of checking one generating set against the oracle.
#[derive(Debug, Clone)]
pub struct GenerationReport {
    pub set: GeneratorSet,
    pub p: u8,
    pub generator_count: usize,
    pub closure_size: usize,
    pub oracle_size: usize,
    /// closure is contained in the oracle set, element by element
    pub subset_ok: bool,
}

impl GenerationReport {
    pub fn pass(&self) -> bool {
        self.closure_size == self.oracle_size && self.subset_ok
    }
}

/// Closes the named set and compares against the exhaustive oracle,
/// both by size and by set inclusion. Full verification needs the
/// oracle, so p is limited to {2, 3, 5}.
pub fn verify_generating_set(set: GeneratorSet, p: Prime) -> Result<GenerationReport> {
    if p.get() > 5 {
        return Err(Error::UnsupportedPrime {
            p: p.get() as u16,
            reason: "closure-versus-oracle verification is supported for p in {2, 3, 5}".into(),
        });
    }
    let gens = materialize(set, p)?;
    let closed = canonical_closure(gens.elems(), DEFAULT_CLOSURE_CAP)?;
    let oracle = enumerate_unit_loop(p)?;
    Ok(GenerationReport {
        set,
        p: p.get(),
        generator_count: gens.len(),
        closure_size: closed.len(),
        oracle_size: oracle.len(),
        subset_ok: closed.is_subset_of(&oracle),
    })
}

/// One verified identity line.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Report of [`verify_reduction_identities`].
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub p: u8,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn canonical_eq(lhs: &ZornMatrix, rhs: &ZornMatrix) -> bool {
    match (
        CanonicalElement::canonicalize(*lhs),
        CanonicalElement::canonicalize(*rhs),
    ) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Verifies, up to sign (equality of canonical elements):
///
/// - the four element identities that eliminate generators one by one,
///   with the printed bracketing (products otherwise associate left to
///   right):
///   * s(e1) = s(e3) s(e2)
///   * s(e2) = [u(e1)u(e3) . u(e2)u(e1)] [u(e3)^-1 . u(e2)s(e3)]
///   * u(e3) = x^-1 s(e3)
///   * s(e3) = [u(e2)u(e1) . x] [x u(e1)] . [x^2 u(e2) . u(e1)x^2 u(e1)]
/// - the two conjugation identities
///   l(a) = s(a)' u(t(a)) (-s(a)') and u(a) = s(a) l(t(a)) (-s(a)),
/// - the two shift identities for t(a) = t(b):
///   s(b) = s(a) l(-a x b) and s(b)' = s(a)' u(a x b),
///
/// the last two families exhaustively over all nonzero vectors when
/// p <= 7 and over projective representatives otherwise.
pub fn verify_reduction_identities(p: Prime) -> IdentityReport {
    let mut checks = Vec::new();
    let e = |i: usize| FpVec3::unit(i, p);
    let u = |i: usize| make_u(e(i));
    let s = |i: usize| make_s(e(i)).expect("unit vectors are nonzero");
    let x = theorem_x(p);
    let mul = |a: &ZornMatrix, b: &ZornMatrix| a.mul(b).expect("same prime");

    // s(e1) = s(e3) s(e2)
    {
        let rhs = mul(&s(3), &s(2));
        checks.push(IdentityCheck {
            name: "s_e1_from_s_e3_s_e2",
            pass: canonical_eq(&s(1), &rhs),
            detail: format!("{} vs {rhs}", s(1)),
        });
    }

    // s(e2) = [u(e1)u(e3) . u(e2)u(e1)] [u(e3)^-1 . u(e2)s(e3)]
    {
        let left = mul(&mul(&u(1), &u(3)), &mul(&u(2), &u(1)));
        let right = mul(&u(3).inv().expect("det 1"), &mul(&u(2), &s(3)));
        let rhs = mul(&left, &right);
        checks.push(IdentityCheck {
            name: "s_e2_word",
            pass: canonical_eq(&s(2), &rhs),
            detail: format!("{} vs {rhs}", s(2)),
        });
    }

    // u(e3) = x^-1 s(e3)
    {
        let rhs = mul(&x.inv().expect("det 1"), &s(3));
        checks.push(IdentityCheck {
            name: "u_e3_from_x",
            pass: canonical_eq(&u(3), &rhs),
            detail: format!("{} vs {rhs}", u(3)),
        });
    }

    // s(e3) = [u(e2)u(e1) . x] [x u(e1)] . [x^2 u(e2) . u(e1)x^2 u(e1)]
    {
        let x2 = x.pow(2);
        let p1 = mul(&mul(&u(2), &u(1)), &x);
        let p2 = mul(&x, &u(1));
        let p3 = mul(&mul(&x2, &u(2)), &mul(&mul(&u(1), &x2), &u(1)));
        let rhs = mul(&mul(&p1, &p2), &p3);
        checks.push(IdentityCheck {
            name: "s_e3_word",
            pass: canonical_eq(&s(3), &rhs),
            detail: format!("{} vs {rhs}", s(3)),
        });
    }

    // conjugation identities over vectors
    let vectors = if p.get() <= 7 {
        nonzero_vectors(p)
    } else {
        projective_vectors(p)
    };
    {
        let mut bad = None;
        for &a in &vectors {
            let t = map_t(a).expect("nonzero");
            let sa = make_s(a).expect("nonzero");
            let st = sa.transpose();
            let l_rhs = mul(&mul(&st, &make_u(t)), &-st);
            if !canonical_eq(&make_l(a), &l_rhs) {
                bad = Some((a, "l"));
                break;
            }
            let u_rhs = mul(&mul(&sa, &make_l(t)), &-sa);
            if !canonical_eq(&make_u(a), &u_rhs) {
                bad = Some((a, "u"));
                break;
            }
        }
        checks.push(IdentityCheck {
            name: "conjugation_l_u",
            pass: bad.is_none(),
            detail: match bad {
                None => format!("{} vectors", vectors.len()),
                Some((a, side)) => format!("failed on {side} at alpha={a}"),
            },
        });
    }

    // shift identities for pairs with equal t
    {
        let mut bad = None;
        let mut pairs = 0usize;
        'outer: for &a in &vectors {
            let ta = map_t(a).expect("nonzero");
            for &b in &vectors {
                if map_t(b).expect("nonzero") != ta {
                    continue;
                }
                pairs += 1;
                let cross = a.cross(b).expect("same prime");
                let sa = make_s(a).expect("nonzero");
                let sb = make_s(b).expect("nonzero");
                if !canonical_eq(&sb, &mul(&sa, &make_l(-cross))) {
                    bad = Some((a, b, "s"));
                    break 'outer;
                }
                if !canonical_eq(&sb.transpose(), &mul(&sa.transpose(), &make_u(cross))) {
                    bad = Some((a, b, "s'"));
                    break 'outer;
                }
            }
        }
        checks.push(IdentityCheck {
            name: "shift_s_pairs",
            pass: bad.is_none(),
            detail: match bad {
                None => format!("{pairs} pairs"),
                Some((a, b, side)) => format!("failed on {side} at alpha={a} beta={b}"),
            },
        });
    }

    IdentityReport {
        p: p.get(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_core::closure;

    fn pr(q: u16) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn projective_vector_count() {
        for q in [2u16, 3, 5, 7, 13] {
            let v = projective_vectors(pr(q));
            assert_eq!(v.len() as i64, (q * q + q + 1) as i64);
            // first nonzero coordinate is 1, and no duplicates
            for a in &v {
                let first = (0..3).map(|i| a.coord(i).value()).find(|&c| c != 0);
                assert_eq!(first, Some(1));
            }
            let mut keys: Vec<[u8; 3]> = v.iter().map(|a| a.coords()).collect();
            keys.sort_unstable();
            keys.dedup();
            assert_eq!(keys.len(), v.len());
        }
    }

    #[test]
    fn materialized_set_sizes() {
        assert_eq!(materialize(GeneratorSet::Theorem, pr(2)).unwrap().len(), 3);
        assert_eq!(materialize(GeneratorSet::Theorem, pr(11)).unwrap().len(), 3);
        let p5 = materialize(GeneratorSet::Prop5, pr(3)).unwrap();
        assert_eq!(p5.len(), 6);
        for g in &p5 {
            assert_eq!(g.rep().det().value(), 1);
        }
        // 7 projective vectors x 2 maps
        assert_eq!(materialize(GeneratorSet::Prop2, pr(2)).unwrap().len(), 14);
        // s(e_i)' collapses onto s(e_i) mod center, so 3 + 2(p^2+p+1) - 3
        for q in [2u16, 3, 5] {
            let expected = 2 * (q * q + q + 1) as usize;
            assert_eq!(
                materialize(GeneratorSet::Prop3, pr(q)).unwrap().len(),
                expected
            );
        }
        assert_eq!(
            materialize(GeneratorSet::Prop1, pr(3)).unwrap().len(),
            2 * 26
        );
        assert!(matches!(
            materialize(GeneratorSet::Prop1, pr(7)),
            Err(Error::UnsupportedPrime { p: 7, .. })
        ));
    }

    #[test]
    fn generating_sets_reproduce_the_loop_at_p2() {
        for set in GeneratorSet::ALL {
            let report = verify_generating_set(set, pr(2)).unwrap();
            assert!(report.pass(), "{set} failed: {report:?}");
            assert_eq!(report.closure_size, 120);
        }
    }

    #[test]
    fn oracle_range_for_verification() {
        assert!(matches!(
            verify_generating_set(GeneratorSet::Theorem, pr(7)),
            Err(Error::UnsupportedPrime { p: 7, .. })
        ));
    }

    #[test]
    fn reduction_identities_small_and_odd_characteristic() {
        for q in [2u16, 3, 5, 7, 11, 13] {
            let report = verify_reduction_identities(pr(q));
            assert!(
                report.pass(),
                "p={q}: {:?}",
                report.first_failure().map(|c| (c.name, c.detail.clone()))
            );
        }
    }

    #[test]
    fn identities_are_sign_insensitive() {
        // replacing a factor F by -F never changes the canonical value
        let p = pr(5);
        let a = FpVec3::from_ints([1, 2, 0], p);
        let t = map_t(a).unwrap();
        let sa = make_s(a).unwrap();
        let st = sa.transpose();
        let base = st.mul(&make_u(t)).unwrap().mul(&-st).unwrap();
        let flipped = (-st).mul(&make_u(t)).unwrap().mul(&-st).unwrap();
        let also = st.mul(&-make_u(t)).unwrap().mul(&st).unwrap();
        assert!(canonical_eq(&base, &flipped));
        assert!(canonical_eq(&base, &also));
        assert!(canonical_eq(&base, &make_l(a)));
    }

    #[test]
    fn theorem_elements_generate_prop5_members_small_p() {
        // each of the six elements of the final pre-theorem set lies in
        // the closure of the three theorem generators
        for q in [2u16, 3] {
            let p = pr(q);
            let closed = closure(&theorem_generators(p), DEFAULT_CLOSURE_CAP).unwrap();
            let prop5 = materialize(GeneratorSet::Prop5, p).unwrap();
            for g in &prop5 {
                assert!(closed.contains(g), "p={q}: {g} not reached");
            }
        }
    }
}
