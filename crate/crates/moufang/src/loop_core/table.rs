//! Cayley tables with Latin-square validation.

use std::io::Write;

use crate::error::{Error, Result};
use crate::loop_core::closure::{ElementSet, LoopElement};
use crate::zorn::CanonicalElement;

/// A finite loop as an indexed element list plus an n x n index table.
/// Index 0 is the identity; the remaining elements are sorted ascending
/// by their encoding. Row 0, column 0, and the Latin-square property
/// are verified at build time.
#[derive(Debug, Clone)]
pub struct LoopTable<E: LoopElement> {
    elements: Vec<E>,
    table: Vec<u32>,
}

impl<E: LoopElement> LoopTable<E> {
    /// Builds the table of a closed set containing the identity.
    pub fn build(set: &ElementSet<E>) -> Result<LoopTable<E>> {
        let n = set.len();
        let identity_pos = set
            .iter()
            .position(|e| e.is_identity())
            .ok_or_else(|| Error::NotALoop {
                detail: "identity element is not in the set".into(),
            })?;

        // identity first, the rest stay in ascending key order
        let mut elements: Vec<E> = Vec::with_capacity(n);
        elements.push(set.elems()[identity_pos].clone());
        elements.extend(
            set.iter()
                .enumerate()
                .filter(|(i, _)| *i != identity_pos)
                .map(|(_, e)| e.clone()),
        );

        let index_of: std::collections::HashMap<E::Key, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key(), i as u32))
            .collect();

        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = elements[i].mul(&elements[j]);
                let k = index_of.get(&prod.key()).ok_or_else(|| Error::NotClosed {
                    detail: format!("product of elements {i} and {j} is outside the set"),
                })?;
                table[i * n + j] = *k;
            }
        }

        let t = LoopTable { elements, table };
        t.validate()?;
        Ok(t)
    }

    /// Re-checks the loop axioms on the stored table: row 0 and column 0
    /// are the identity permutation and every row and column is a
    /// permutation of 0..n-1.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for j in 0..n {
            if self.mul_idx(0, j) != j as u32 {
                return Err(Error::NotALoop {
                    detail: format!("row 0 is not the identity at column {j}"),
                });
            }
            if self.mul_idx(j, 0) != j as u32 {
                return Err(Error::NotALoop {
                    detail: format!("column 0 is not the identity at row {j}"),
                });
            }
        }
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.fill(false);
            for j in 0..n {
                let k = self.mul_idx(i, j) as usize;
                if seen[k] {
                    return Err(Error::NotALoop {
                        detail: format!("row {i} repeats element {k}"),
                    });
                }
                seen[k] = true;
            }
        }
        for j in 0..n {
            seen.fill(false);
            for i in 0..n {
                let k = self.mul_idx(i, j) as usize;
                if seen[k] {
                    return Err(Error::NotALoop {
                        detail: format!("column {j} repeats element {k}"),
                    });
                }
                seen[k] = true;
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    #[inline]
    pub fn mul_idx(&self, i: usize, j: usize) -> u32 {
        self.table[i * self.elements.len() + j]
    }

    /// inv[i] = the j with table[i][j] = 0.
    pub fn inverse_indices(&self) -> Vec<u32> {
        let n = self.n();
        let mut inv = vec![0u32; n];
        for i in 0..n {
            for j in 0..n {
                if self.mul_idx(i, j) == 0 {
                    inv[i] = j as u32;
                    break;
                }
            }
        }
        inv
    }

    /// Swaps the two cells of an intercalate (a 2x2 Latin subsquare),
    /// which preserves the Latin property while changing the table.
    /// Used as a negative control in tests. Rows and columns 0 are left
    /// alone so the identity stays intact.
    pub fn flip_intercalate(&self) -> Option<LoopTable<E>> {
        let n = self.n();
        for r1 in 1..n {
            for r2 in r1 + 1..n {
                for c1 in 1..n {
                    for c2 in c1 + 1..n {
                        let a = self.mul_idx(r1, c1);
                        let b = self.mul_idx(r1, c2);
                        if a == self.mul_idx(r2, c2) && b == self.mul_idx(r2, c1) && a != b {
                            let mut table = self.table.clone();
                            table[r1 * n + c1] = b;
                            table[r1 * n + c2] = a;
                            table[r2 * n + c1] = a;
                            table[r2 * n + c2] = b;
                            return Some(LoopTable {
                                elements: self.elements.clone(),
                                table,
                            });
                        }
                    }
                }
            }
        }
        None
    }
}

/// Writes the Cayley table as CSV: a header `n=<count>,p=<prime>`
/// followed by lines `i,j,k` meaning element_i * element_j = element_k,
/// indices referring to the element order of the table (identity first,
/// then ascending packed encoding).
pub fn export_cayley_csv(
    table: &LoopTable<CanonicalElement>,
    out: &mut impl Write,
) -> std::io::Result<()> {
    let n = table.n();
    writeln!(out, "n={},p={}", n, table.elements()[0].prime())?;
    for i in 0..n {
        for j in 0..n {
            writeln!(out, "{},{},{}", i, j, table.mul_idx(i, j))?;
        }
    }
    Ok(())
}
