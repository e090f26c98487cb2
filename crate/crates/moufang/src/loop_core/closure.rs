//! Multiplicative closure of a generator set.

use std::collections::HashSet;
use std::hash::Hash;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::packed::{self, Digits};
use crate::zorn::{CanonicalElement, ZornMatrix};

/// Default guard against runaway enumeration. The largest loop anyone
/// enumerates in practice (p = 7, 411600 canonical elements) fits with
/// wide margin; an arithmetic bug does not.
pub const DEFAULT_CLOSURE_CAP: usize = 20_000_000;

/// An element kind a finite loop can be built from: it multiplies, and
/// it has a totally ordered encoding that doubles as the set key.
pub trait LoopElement: Clone + Eq + Hash + Send + Sync {
    type Key: Copy + Ord + Eq + Hash + Send + Sync;

    /// Loop product. Implementations may panic when operands come from
    /// different contexts (e.g. different primes); sets never mix them.
    fn mul(&self, other: &Self) -> Self;

    /// Injective encoding; ascending key order is the canonical element
    /// order everywhere (tables, exports).
    fn key(&self) -> Self::Key;

    fn is_identity(&self) -> bool;
}

impl LoopElement for CanonicalElement {
    type Key = u64;

    fn mul(&self, other: &Self) -> Self {
        CanonicalElement::mul(self, other)
    }

    fn key(&self) -> u64 {
        CanonicalElement::key(self)
    }

    fn is_identity(&self) -> bool {
        CanonicalElement::is_identity(self)
    }
}

/// Raw det-1 matrices, i.e. the unit loop before identifying M and -M.
impl LoopElement for ZornMatrix {
    type Key = u64;

    fn mul(&self, other: &Self) -> Self {
        ZornMatrix::mul(self, other).expect("modulus mismatch in loop product")
    }

    fn key(&self) -> u64 {
        self.encode()
    }

    fn is_identity(&self) -> bool {
        ZornMatrix::is_identity(self)
    }
}

/// A finite set of loop elements, sorted ascending by key, no duplicates.
#[derive(Debug, Clone)]
pub struct ElementSet<E: LoopElement> {
    elems: Vec<E>,
}

impl<E: LoopElement> ElementSet<E> {
    pub fn from_vec(mut elems: Vec<E>) -> ElementSet<E> {
        elems.sort_by_key(|e| e.key());
        elems.dedup_by_key(|e| e.key());
        ElementSet { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[E] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, E> {
        self.elems.iter()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.contains_key(e.key())
    }

    pub fn contains_key(&self, key: E::Key) -> bool {
        self.elems.binary_search_by_key(&key, |e| e.key()).is_ok()
    }

    pub fn position_of_key(&self, key: E::Key) -> Option<usize> {
        self.elems.binary_search_by_key(&key, |e| e.key()).ok()
    }

    pub fn is_subset_of(&self, other: &ElementSet<E>) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }

    /// Set equality; both sides are sorted by key, so this is a scan.
    pub fn same_set(&self, other: &ElementSet<E>) -> bool {
        self.len() == other.len()
            && self
                .elems
                .iter()
                .zip(other.elems.iter())
                .all(|(a, b)| a.key() == b.key())
    }
}

impl<'a, E: LoopElement> IntoIterator for &'a ElementSet<E> {
    type Item = &'a E;
    type IntoIter = std::slice::Iter<'a, E>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// Smallest set containing the generators and closed under the loop
/// product. Frontier iteration: each round multiplies the newest
/// elements against everything seen so far, in both orders, so every
/// ordered pair is formed exactly in the round after its later factor
/// appeared.
///
/// Exceeding `cap` aborts with [`Error::CapExceeded`].
pub fn closure<E: LoopElement>(generators: &[E], cap: usize) -> Result<ElementSet<E>> {
    assert!(!generators.is_empty(), "closure of an empty generator set");
    let mut seen: HashSet<E::Key> = HashSet::new();
    let mut all: Vec<E> = Vec::new();
    for g in generators {
        if seen.insert(g.key()) {
            all.push(g.clone());
        }
    }
    if all.len() > cap {
        return Err(Error::CapExceeded { cap });
    }

    let mut frontier_start = 0;
    while frontier_start < all.len() {
        let frontier_end = all.len();
        for i in frontier_start..frontier_end {
            for j in 0..frontier_end {
                let f = &all[i];
                let s = &all[j];
                for prod in [f.mul(s), s.mul(f)] {
                    if seen.insert(prod.key()) {
                        if all.len() == cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        all.push(prod);
                    }
                }
            }
        }
        frontier_start = frontier_end;
    }
    Ok(ElementSet::from_vec(all))
}

/// Lock-free membership bitmap over the dense index space [0, p^8).
struct AtomicBitmap {
    words: Vec<std::sync::atomic::AtomicU64>,
}

impl AtomicBitmap {
    fn new(bits: u64) -> AtomicBitmap {
        let words = (bits as usize).div_ceil(64);
        let mut v = Vec::with_capacity(words);
        v.resize_with(words, || std::sync::atomic::AtomicU64::new(0));
        AtomicBitmap { words: v }
    }

    #[inline]
    fn contains(&self, idx: u64) -> bool {
        let mask = 1u64 << (idx & 63);
        self.words[(idx >> 6) as usize].load(std::sync::atomic::Ordering::Relaxed) & mask != 0
    }

    /// Sets the bit; returns true when this call was the first to set it.
    /// Probes with a plain load first: nearly all products are already
    /// known, and read-only probes keep the cache line shared instead of
    /// bouncing it between cores.
    #[inline]
    fn insert(&self, idx: u64) -> bool {
        let mask = 1u64 << (idx & 63);
        let word = &self.words[(idx >> 6) as usize];
        if word.load(std::sync::atomic::Ordering::Relaxed) & mask != 0 {
            return false;
        }
        word.fetch_or(mask, std::sync::atomic::Ordering::Relaxed) & mask == 0
    }

    /// Idempotent set without the first-setter report.
    #[inline]
    fn mark(&self, idx: u64) {
        let mask = 1u64 << (idx & 63);
        let word = &self.words[(idx >> 6) as usize];
        if word.load(std::sync::atomic::Ordering::Relaxed) & mask == 0 {
            word.fetch_or(mask, std::sync::atomic::Ordering::Relaxed);
        }
    }
}

/// Parallel closure specialized to canonical Zorn elements. Same result
/// set as [`closure`]; frontier products are expanded in data-parallel
/// batches, deduplicated through an atomic bitmap over the dense base-p
/// index space, and merged after each round. Falls back to the generic
/// path for p > 13, where the bitmap would outgrow memory.
pub fn canonical_closure(
    generators: &[CanonicalElement],
    cap: usize,
) -> Result<ElementSet<CanonicalElement>> {
    assert!(!generators.is_empty(), "closure of an empty generator set");
    let p = generators[0].prime().get();
    assert!(
        generators.iter().all(|g| g.prime().get() == p),
        "generators must share one prime"
    );
    if p > 13 {
        return closure(generators, cap);
    }

    let space = (p as u64).pow(8);
    let seen = AtomicBitmap::new(space);
    let mut all: Vec<Digits> = Vec::new();
    for g in generators {
        let d = *g.rep().digits();
        if seen.insert(packed::dense_index(p, &d)) {
            all.push(d);
        }
    }
    if all.len() > cap {
        return Err(Error::CapExceeded { cap });
    }

    packed::with_fast_mul!(p, mul => closure_rounds(p, &mul, &seen, &mut all, cap))?;

    all.sort_unstable_by_key(|d| packed::encode(d));
    Ok(ElementSet {
        elems: all
            .into_iter()
            .map(|d| CanonicalElement::from_canonical_digits(d, p))
            .collect(),
    })
}

fn closure_rounds<F>(
    p: u8,
    mul: &F,
    seen: &AtomicBitmap,
    all: &mut Vec<Digits>,
    cap: usize,
) -> Result<()>
where
    F: Fn(&Digits, &Digits) -> Digits + Sync,
{
    // Both members of each class {M, -M} are marked, so raw products can
    // be probed without canonicalizing first; only the class bit of the
    // canonical representative decides who records a new element.
    let radix = packed::Radix::new(p);
    let record = |d: &Digits, acc: &mut Vec<Digits>| {
        let c = packed::canonical(p, d);
        if seen.insert(radix.index(&c) as u64) {
            acc.push(c);
        }
        seen.mark(radix.index(&packed::neg(p, &c)) as u64);
    };
    for d in all.iter() {
        seen.mark(radix.index(&packed::neg(p, d)) as u64);
    }

    let mut frontier_start = 0;
    while frontier_start < all.len() {
        let frontier_end = all.len();
        let snapshot: &[Digits] = all;
        let new: Vec<Digits> = (frontier_start..frontier_end)
            .into_par_iter()
            .with_min_len(8)
            .fold(Vec::new, |mut acc, i| {
                let f = &snapshot[i];
                for s in &snapshot[..frontier_end] {
                    for prod in [mul(f, s), mul(s, f)] {
                        if !seen.contains(radix.index(&prod) as u64) {
                            record(&prod, &mut acc);
                        }
                    }
                }
                acc
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        if all.len() + new.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        all.extend(new);
        frontier_start = frontier_end;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Prime;
    use crate::zorn::theorem_generators;

    #[test]
    fn closure_of_identity_is_identity() {
        let p = Prime::new(5).unwrap();
        let set = closure(&[CanonicalElement::identity(p)], 10).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.elems()[0].is_identity());
    }

    #[test]
    fn closure_cap_is_enforced() {
        let p = Prime::new(2).unwrap();
        let gens = theorem_generators(p);
        assert!(matches!(
            closure(&gens, 10),
            Err(Error::CapExceeded { cap: 10 })
        ));
        assert!(matches!(
            canonical_closure(&gens, 10),
            Err(Error::CapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn generic_and_parallel_closures_agree() {
        for q in [2u16, 3] {
            let p = Prime::new(q).unwrap();
            let gens = theorem_generators(p);
            let a = closure(&gens, DEFAULT_CLOSURE_CAP).unwrap();
            let b = canonical_closure(&gens, DEFAULT_CLOSURE_CAP).unwrap();
            assert!(a.same_set(&b));
        }
    }

    #[test]
    fn closure_is_order_independent_and_idempotent() {
        let p = Prime::new(2).unwrap();
        let gens = theorem_generators(p);
        let forward = closure(&gens, DEFAULT_CLOSURE_CAP).unwrap();
        let mut rev = gens.to_vec();
        rev.reverse();
        let backward = closure(&rev, DEFAULT_CLOSURE_CAP).unwrap();
        assert!(forward.same_set(&backward));

        let again = closure(forward.elems(), DEFAULT_CLOSURE_CAP).unwrap();
        assert!(again.same_set(&forward));
    }

    #[test]
    fn closure_is_monotone() {
        let p = Prime::new(2).unwrap();
        let gens = theorem_generators(p);
        let small = closure(&gens[..2], DEFAULT_CLOSURE_CAP).unwrap();
        let big = closure(&gens, DEFAULT_CLOSURE_CAP).unwrap();
        assert!(small.is_subset_of(&big));
    }
}
