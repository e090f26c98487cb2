//! The explicit isomorphism between the unit integral octonions modulo
//! {1, -1} and the 120-element binary Paige loop.
//!
//! The map is seeded on the three generators
//!
//! ```text
//! i |-> [[0,(0,0,1)],[(0,0,1),0]]
//! j |-> [[0,(0,1,0)],[(0,1,0),0]]
//! h |-> [[1,(0,1,0)],[(1,0,1),1]]
//! ```
//!
//! over F_2 and extended by closing the set of pairs under
//! componentwise multiplication. A collision during the closure would
//! falsify the correspondence; a collision-free closure covering both
//! loops is the graph of a bijection, which is then verified to be a
//! homomorphism on all 120 x 120 pairs in both directions.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::loop_core::{enumerate_unit_loop, LoopElement};
use crate::octonion::{jprime_classes, jprime_enumerate, Octonion, UnitClass};
use crate::zorn::{CanonicalElement, ZornMatrix};

/// A bijective correspondence between unit octonion classes and
/// canonical Zorn elements, stored as pairs sorted by the octonion
/// representative.
#[derive(Debug, Clone)]
pub struct PairMap {
    pairs: Vec<(UnitClass, CanonicalElement)>,
    by_class: HashMap<Octonion, usize>,
    by_matrix: HashMap<u64, usize>,
}

impl PairMap {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(UnitClass, CanonicalElement)] {
        &self.pairs
    }

    pub fn image(&self, class: &UnitClass) -> Option<&CanonicalElement> {
        self.by_class.get(class.rep()).map(|&i| &self.pairs[i].1)
    }

    pub fn preimage(&self, m: &CanonicalElement) -> Option<&UnitClass> {
        self.by_matrix.get(&m.key()).map(|&i| &self.pairs[i].0)
    }
}

/// The three seed pairs.
pub fn seed_pairs() -> [(UnitClass, CanonicalElement); 3] {
    let p = Prime::new(2).expect("2 is prime");
    let canon = |m: ZornMatrix| CanonicalElement::canonicalize(m).expect("det 1");
    [
        (
            UnitClass::new(Octonion::i()).expect("unit"),
            canon(ZornMatrix::from_ints(0, [0, 0, 1], [0, 0, 1], 0, p)),
        ),
        (
            UnitClass::new(Octonion::j()).expect("unit"),
            canon(ZornMatrix::from_ints(0, [0, 1, 0], [0, 1, 0], 0, p)),
        ),
        (
            UnitClass::new(Octonion::h()).expect("unit"),
            canon(ZornMatrix::from_ints(1, [0, 1, 0], [1, 0, 1], 1, p)),
        ),
    ]
}

/// Closes the seed pairs under componentwise multiplication. Any
/// left-or-right collision aborts with [`Error::IsomorphismFailure`];
/// incomplete coverage of either loop yields [`Error::NotSurjective`].
pub fn build_isomorphism() -> Result<PairMap> {
    let mut pairs: Vec<(UnitClass, CanonicalElement)> = Vec::new();
    let mut by_class: HashMap<Octonion, usize> = HashMap::new();
    let mut by_matrix: HashMap<u64, usize> = HashMap::new();

    let push = |pairs: &mut Vec<(UnitClass, CanonicalElement)>,
                    by_class: &mut HashMap<Octonion, usize>,
                    by_matrix: &mut HashMap<u64, usize>,
                    c: UnitClass,
                    m: CanonicalElement|
     -> Result<bool> {
        match (by_class.get(c.rep()), by_matrix.get(&m.key())) {
            (Some(&i), _) => {
                if pairs[i].1 != m {
                    return Err(Error::IsomorphismFailure {
                        detail: format!(
                            "class {c} would map to both {} and {m}",
                            pairs[i].1
                        ),
                    });
                }
                Ok(false)
            }
            (None, Some(&i)) => Err(Error::IsomorphismFailure {
                detail: format!("matrix {m} would correspond to both {} and {c}", pairs[i].0),
            }),
            (None, None) => {
                by_class.insert(*c.rep(), pairs.len());
                by_matrix.insert(m.key(), pairs.len());
                pairs.push((c, m));
                Ok(true)
            }
        }
    };

    for (c, m) in seed_pairs() {
        push(&mut pairs, &mut by_class, &mut by_matrix, c, m)?;
    }

    let mut frontier_start = 0;
    while frontier_start < pairs.len() {
        let frontier_end = pairs.len();
        for i in frontier_start..frontier_end {
            for j in 0..frontier_end {
                for (a, b) in [(i, j), (j, i)] {
                    let c = pairs[a].0.mul(&pairs[b].0);
                    let m = pairs[a].1.mul(&pairs[b].1);
                    push(&mut pairs, &mut by_class, &mut by_matrix, c, m)?;
                }
            }
        }
        frontier_start = frontier_end;
    }

    // coverage of both sides
    let classes = jprime_classes(&jprime_enumerate()?);
    for c in &classes {
        if !by_class.contains_key(c.rep()) {
            return Err(Error::NotSurjective {
                detail: format!("octonion class {c} is not reached"),
            });
        }
    }
    let loop120 = enumerate_unit_loop(Prime::new(2).expect("prime"))?;
    for m in &loop120 {
        if !by_matrix.contains_key(&m.key()) {
            return Err(Error::NotSurjective {
                detail: format!("loop element {m} is not reached"),
            });
        }
    }
    if pairs.len() != classes.len() || pairs.len() != loop120.len() {
        return Err(Error::NotSurjective {
            detail: format!(
                "{} pairs against {} classes and {} loop elements",
                pairs.len(),
                classes.len(),
                loop120.len()
            ),
        });
    }

    pairs.sort_by(|x, y| x.0.rep().cmp(y.0.rep()));
    let by_class = pairs
        .iter()
        .enumerate()
        .map(|(i, (c, _))| (*c.rep(), i))
        .collect();
    let by_matrix = pairs
        .iter()
        .enumerate()
        .map(|(i, (_, m))| (m.key(), i))
        .collect();
    Ok(PairMap {
        pairs,
        by_class,
        by_matrix,
    })
}

/// Checks phi(x y) = phi(x) phi(y) over all pairs of classes, and the
/// reverse direction over all pairs of loop elements. Returns the first
/// violating pair of octonion classes, if any.
pub fn verify_hom(map: &PairMap) -> Option<(UnitClass, UnitClass)> {
    for (x, mx) in map.pairs() {
        for (y, my) in map.pairs() {
            let lhs = map.image(&x.mul(y)).expect("closed");
            if lhs != &mx.mul(my) {
                return Some((*x, *y));
            }
        }
    }
    // reverse direction: the preimage map is a homomorphism as well
    for (_, mx) in map.pairs() {
        for (_, my) in map.pairs() {
            let px = map.preimage(mx).expect("total");
            let py = map.preimage(my).expect("total");
            let back = map.preimage(&mx.mul(my)).expect("closed");
            if back.rep() != px.mul(py).rep() {
                return Some((*px, *py));
            }
        }
    }
    None
}

/// One line of the word-identity report.
#[derive(Debug, Clone)]
pub struct Lemma7Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Report of [`verify_lemma7`].
#[derive(Debug, Clone)]
pub struct Lemma7Report {
    pub checks: Vec<Lemma7Check>,
}

impl Lemma7Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verifies the bracketed octonion word for e, the full chain of
/// intermediate identities behind it, and the image of e under the
/// correspondence.
pub fn verify_lemma7(map: &PairMap) -> Lemma7Report {
    let h = Octonion::h();
    let (i, j, k, e) = (
        Octonion::i(),
        Octonion::j(),
        Octonion::k(),
        Octonion::e(),
    );
    let one = Octonion::one();
    let (ih, jh, kh, hi) = (i.mul(&h), j.mul(&h), k.mul(&h), h.mul(&i));
    let mut checks = Vec::new();
    let mut check = |name: &'static str, lhs: Octonion, rhs: Octonion| {
        checks.push(Lemma7Check {
            name,
            pass: lhs == rhs,
            detail: format!("{lhs} vs {rhs}"),
        });
    };

    // e = -(jh . hi) . kh, with this exact bracketing
    check("e_word", -(jh.mul(&hi)).mul(&kh), e);
    // proof chain
    check("hi_anticommutes", hi, (-one).sub(&ih));
    check("jh_kh", jh.mul(&kh), (-i).add(&h).sub(&kh));
    check("k_kh", k.mul(&kh), -h);
    check("h_kh", h.mul(&kh), k.sub(&h));
    check("ih_kh", ih.mul(&kh), j.sub(&h).sub(&kh));
    check("h_definition", (-i).sub(&j).sub(&k).add(&h.scale(crate::octonion::Dyadic::integer(2))), e);

    // image of e
    let p = Prime::new(2).expect("prime");
    let expected = CanonicalElement::canonicalize(ZornMatrix::from_ints(
        0,
        [1, 1, 1],
        [1, 1, 1],
        0,
        p,
    ))
    .expect("det 1");
    let class_e = UnitClass::new(e).expect("unit");
    let image = map.image(&class_e);
    checks.push(Lemma7Check {
        name: "e_image",
        pass: image == Some(&expected),
        detail: format!("{:?} vs {expected}", image.map(|m| m.to_string())),
    });

    Lemma7Report { checks }
}

/// Writes the correspondence as CSV lines `octonion_class,zorn_matrix`
/// in the text renderings of both sides, sorted by the octonion
/// rendering.
pub fn export_csv(map: &PairMap, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "octonion_class,zorn_matrix")?;
    let mut rows: Vec<(String, String)> = map
        .pairs()
        .iter()
        .map(|(c, m)| (c.to_string(), m.to_string()))
        .collect();
    rows.sort();
    for (c, m) in rows {
        writeln!(out, "{c},{m}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_have_det_one_images() {
        for (_, m) in seed_pairs() {
            assert_eq!(m.rep().det().value(), 1);
        }
    }

    #[test]
    fn correspondence_is_a_bijection_on_120_classes() {
        let map = build_isomorphism().unwrap();
        assert_eq!(map.len(), 120);

        // identity goes to identity
        let one = UnitClass::new(Octonion::one()).unwrap();
        assert!(map.image(&one).unwrap().is_identity());

        // the seeded generator images are intact
        for (c, m) in seed_pairs() {
            assert_eq!(map.image(&c), Some(&m));
        }
    }

    #[test]
    fn image_of_e_matches_the_displayed_matrix() {
        let map = build_isomorphism().unwrap();
        let p = Prime::new(2).unwrap();
        let class_e = UnitClass::new(Octonion::e()).unwrap();
        let expected =
            CanonicalElement::canonicalize(ZornMatrix::from_ints(0, [1, 1, 1], [1, 1, 1], 0, p))
                .unwrap();
        assert_eq!(map.image(&class_e), Some(&expected));
    }

    #[test]
    fn full_homomorphism_check_passes() {
        let map = build_isomorphism().unwrap();
        assert_eq!(verify_hom(&map), None);
    }

    #[test]
    fn named_pairs() {
        let map = build_isomorphism().unwrap();
        let ci = UnitClass::new(Octonion::i()).unwrap();
        let cj = UnitClass::new(Octonion::j()).unwrap();
        let ch = UnitClass::new(Octonion::h()).unwrap();

        // i^2 = -1 maps to the identity on both routes
        let isq = ci.mul(&ci);
        assert!(isq.is_identity());
        let img = map.image(&ci).unwrap();
        assert!(img.mul(img).is_identity());

        // (j, h) as a spot check of the defining equation
        let lhs = map.image(&cj.mul(&ch)).unwrap();
        let rhs = map.image(&cj).unwrap().mul(map.image(&ch).unwrap());
        assert_eq!(lhs, &rhs);
    }

    #[test]
    fn lemma_word_identities_pass() {
        let map = build_isomorphism().unwrap();
        let report = verify_lemma7(&map);
        for c in &report.checks {
            assert!(c.pass, "{} failed: {}", c.name, c.detail);
        }
    }

    #[test]
    fn conjugation_maps_to_inversion() {
        let map = build_isomorphism().unwrap();
        for (c, m) in map.pairs() {
            let conj_class = UnitClass::new(c.rep().conj()).unwrap();
            assert_eq!(map.image(&conj_class), Some(&m.inv()));
        }
    }

    #[test]
    fn csv_export_is_sorted_with_120_rows() {
        let map = build_isomorphism().unwrap();
        let mut buf = Vec::new();
        export_csv(&map, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 121);
        assert_eq!(lines[0], "octonion_class,zorn_matrix");
        let mut rows = lines[1..].to_vec();
        let sorted = {
            let mut s = rows.clone();
            s.sort();
            s
        };
        assert_eq!(rows, sorted);
        rows.dedup();
        assert_eq!(rows.len(), 120);
    }
}
