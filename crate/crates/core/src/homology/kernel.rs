//! Integer kernel bases by unimodular column reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::snf::IntMatrix;

/// A ℤ-basis of `{x ∈ ℤ^cols : M x = 0}`, one vector per entry.
///
/// Reduces `M` to column echelon form with extended-gcd column operations
/// while applying the same operations to the identity; the transformed
/// identity columns that end up over zero columns of `M` span the kernel
/// lattice.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = vec![vec![BigInt::zero(); cols]; rows];
    for &(r, c, v) in &m.entries {
        a[r][c] += v;
    }
    let mut v: Vec<Vec<BigInt>> =
        (0..cols).map(|c| (0..cols).map(|k| if k == c { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    // v[c] is column c of the transform

    let mut lead = 0;
    for r in 0..rows {
        if lead == cols {
            break;
        }
        // fold every column in lead.. into a single nonzero entry at column `lead`
        for c in lead + 1..cols {
            if a[r][c].is_zero() {
                continue;
            }
            if a[r][lead].is_zero() {
                swap_cols(&mut a, &mut v, lead, c);
                continue;
            }
            let e = a[r][lead].extended_gcd(&a[r][c]);
            let (x, y) = (e.x, e.y);
            let s = &a[r][lead] / &e.gcd;
            let t = &a[r][c] / &e.gcd;
            // [lead, c] ← [x·lead + y·c, -t·lead + s·c]; determinant x·s + y·t = 1
            combine_cols(&mut a, &mut v, lead, c, (&x, &y), (&(-&t), &s));
        }
        if !a[r][lead].is_zero() {
            lead += 1;
        }
    }
    v.drain(lead..).collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    v.swap(i, j);
}

fn combine_cols(
    a: &mut [Vec<BigInt>],
    v: &mut [Vec<BigInt>],
    i: usize,
    j: usize,
    (p, q): (&BigInt, &BigInt),
    (r, s): (&BigInt, &BigInt),
) {
    for row in a.iter_mut() {
        let (ci, cj) = (row[i].clone(), row[j].clone());
        row[i] = p * &ci + q * &cj;
        row[j] = r * &ci + s * &cj;
    }
    let (vi, vj) = (v[i].clone(), v[j].clone());
    v[i] = vi.iter().zip(&vj).map(|(x, y)| p * x + q * y).collect();
    v[j] = vi.iter().zip(&vj).map(|(x, y)| r * x + s * y).collect();
}

/// Makes the first nonzero coordinate of each vector positive.
pub(crate) fn normalize_signs(basis: &mut [Vec<BigInt>]) {
    for vec in basis {
        if vec.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in vec.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}
