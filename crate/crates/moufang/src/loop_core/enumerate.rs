//! Exhaustive enumeration oracles for the unit Zorn loops.
//!
//! These scan all p^8 entry tuples and are deliberately independent of
//! the closure machinery, so closure results can be checked against
//! them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::loop_core::closure::ElementSet;
use crate::packed;
use crate::zorn::{CanonicalElement, ZornMatrix};

/// Largest prime for which the p^8 scan is offered (5.76M tuples at 7).
const ORACLE_MAX_PRIME: u8 = 7;

fn check_oracle_range(p: Prime) -> Result<()> {
    if p.get() > ORACLE_MAX_PRIME {
        return Err(Error::UnsupportedPrime {
            p: p.get() as u16,
            reason: format!(
                "the exhaustive oracle scans p^8 tuples and is limited to p <= {ORACLE_MAX_PRIME}"
            ),
        });
    }
    Ok(())
}

/// Every canonical det-1 element, by scanning all p^8 tuples, keeping
/// those with det 1 that are their own canonical representative. The
/// scan order is the dense index order, so the result is already sorted
/// by packed encoding.
pub fn enumerate_unit_loop(p: Prime) -> Result<ElementSet<CanonicalElement>> {
    check_oracle_range(p)?;
    let pb = p.get();
    let space = (pb as u64).pow(8);
    let elems: Vec<CanonicalElement> = (0..space)
        .into_par_iter()
        .filter_map(|idx| {
            let d = packed::from_dense_index(pb, idx);
            if packed::det(pb, &d) != 1 {
                return None;
            }
            if packed::canonical(pb, &d) != d {
                return None;
            }
            Some(CanonicalElement::from_canonical_digits(d, pb))
        })
        .collect();
    Ok(ElementSet::from_vec(elems))
}

/// Every det-1 matrix, without identifying M and -M.
pub fn enumerate_unit_matrices(p: Prime) -> Result<ElementSet<ZornMatrix>> {
    check_oracle_range(p)?;
    let pb = p.get();
    let space = (pb as u64).pow(8);
    let elems: Vec<ZornMatrix> = (0..space)
        .into_par_iter()
        .filter_map(|idx| {
            let d = packed::from_dense_index(pb, idx);
            if packed::det(pb, &d) != 1 {
                return None;
            }
            Some(ZornMatrix::from_digits(d, pb))
        })
        .collect();
    Ok(ElementSet::from_vec(elems))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_loop_sizes_match_the_closed_form() {
        // |M*(p)| = p^3 (p^4 - 1) / gcd(2, p - 1)
        let expect = |q: u64, quotient: bool| {
            let raw = q.pow(3) * (q.pow(4) - 1);
            if quotient && q > 2 {
                raw / 2
            } else {
                raw
            }
        };
        for q in [2u16, 3, 5] {
            let p = Prime::new(q).unwrap();
            assert_eq!(
                enumerate_unit_loop(p).unwrap().len() as u64,
                expect(q as u64, true)
            );
            assert_eq!(
                enumerate_unit_matrices(p).unwrap().len() as u64,
                expect(q as u64, false)
            );
        }
    }

    #[test]
    fn binary_unit_loop_has_120_elements() {
        let p = Prime::new(2).unwrap();
        let set = enumerate_unit_loop(p).unwrap();
        assert_eq!(set.len(), 120);
        for e in &set {
            assert_eq!(e.rep().det().value(), 1);
        }
    }

    #[test]
    fn oracle_range_is_enforced() {
        let p = Prime::new(11).unwrap();
        assert!(matches!(
            enumerate_unit_loop(p),
            Err(Error::UnsupportedPrime { p: 11, .. })
        ));
    }

    #[test]
    fn oracle_set_is_closed_under_canonical_product() {
        use rand::{Rng, SeedableRng};
        let p = Prime::new(5).unwrap();
        let set = enumerate_unit_loop(p).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
        for _ in 0..100_000 {
            let a = &set.elems()[rng.gen_range(0..set.len())];
            let b = &set.elems()[rng.gen_range(0..set.len())];
            assert!(set.contains(&a.mul(b)));
        }
    }
}
