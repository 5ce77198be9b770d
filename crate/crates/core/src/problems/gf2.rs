//! GF(2) linear algebra on bit strings: rank and nullspace of the system
//! { h : s · h = 0 (mod 2) for every collected string s }.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Row-reduces the strings (as GF(2) row vectors) and returns the pivots.
fn row_reduce(strings: &[BitString], n: u32) -> Vec<u64> {
    let mut rows: Vec<u64> = strings.iter().map(|s| s.value()).collect();
    let mut pivots = Vec::new();
    for col in (0..n).rev() {
        let bit = 1u64 << col;
        let Some(pos) = rows.iter().position(|r| r & bit != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in &mut rows {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        pivots.push(pivot);
    }
    pivots
}

/// GF(2) rank of the collected strings.
pub fn rank(strings: &[BitString], n: u32) -> u32 {
    row_reduce(strings, n).len() as u32
}

/// Basis of the nullspace { h : s · h = 0 for all s }, in ascending value
/// order. For n−1 independent strings the basis is a single nonzero h.
pub fn nullspace(strings: &[BitString], n: u32) -> Result<Vec<BitString>> {
    if strings.is_empty() {
        return Err(Error::Gf2("no strings collected".into()));
    }
    if strings.iter().any(|s| s.len() != n) {
        return Err(Error::Gf2("strings have mixed lengths".into()));
    }
    // Reduced echelon form with identified pivot columns.
    let mut rows = row_reduce(strings, n);
    let mut pivot_cols = Vec::new();
    for row in &mut rows.iter() {
        pivot_cols.push(63 - row.leading_zeros() as u64);
    }
    // Back-substitute to clear pivot columns above.
    for i in (0..rows.len()).rev() {
        let bit = 1u64 << pivot_cols[i];
        for j in 0..i {
            if rows[j] & bit != 0 {
                rows[j] ^= rows[i];
            }
        }
    }
    let free_cols: Vec<u64> = (0..n as u64).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &free in &free_cols {
        let mut h = 1u64 << free;
        for (row, &pc) in rows.iter().zip(&pivot_cols) {
            if row & (1 << free) != 0 {
                h |= 1 << pc;
            }
        }
        basis.push(BitString::new(h, n));
    }
    basis.sort();
    Ok(basis)
}
