//! Dense linear algebra over a [`FieldDesc`]: reduced echelon form,
//! kernels, determinants and linear solves.

use crate::fields::{FieldDesc, FieldElement};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduced row-echelon form, with zero rows dropped, and the pivot columns.
pub fn rref(m: &Matrix, ncols: usize, desc: &FieldDesc) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        let li = a[row][col].inv().unwrap();
        for v in a[row].iter_mut() {
            *v = &*v * &li;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..ncols {
                    let t = &f * &a[row][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    a.truncate(row);
    debug_assert!(a.iter().all(|r| r.iter().all(|x| x.field() == desc)));
    (a, pivots)
}

pub fn rank(m: &Matrix, ncols: usize, desc: &FieldDesc) -> usize {
    rref(m, ncols, desc).1.len()
}

/// Basis of `{ v : m v = 0 }`, in reduced echelon form.
pub fn kernel(m: &Matrix, ncols: usize, desc: &FieldDesc) -> Matrix {
    let (r, pivots) = rref(m, ncols, desc);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Matrix = free
        .iter()
        .map(|&f| {
            let mut v = vec![desc.zero(); ncols];
            v[f] = desc.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[i][f];
            }
            v
        })
        .collect();
    rref(&basis, ncols, desc).0
}

/// Determinant of a square matrix.
pub fn det(m: &Matrix, desc: &FieldDesc) -> FieldElement {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = desc.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return desc.zero();
        };
        if piv != col {
            a.swap(piv, col);
            acc = -&acc;
        }
        acc = &acc * &a[col][col];
        let li = a[col][col].inv().unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &li;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    acc
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(m: &Matrix, b: &[FieldElement], ncols: usize, desc: &FieldDesc) -> Option<Vec<FieldElement>> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1, desc);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![desc.zero(); ncols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = r[i][ncols].clone();
    }
    Some(x)
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &Matrix, v: &[FieldElement], desc: &FieldDesc) -> Vec<FieldElement> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(desc.zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, bcols: usize, desc: &FieldDesc) -> Matrix {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(desc.zero(), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(m: &Matrix, desc: &FieldDesc) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { desc.one() } else { desc.zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n, desc);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_extension;

    fn mat(desc: &FieldDesc, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| desc.from_i64(x)).collect()).collect()
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = make_extension(101, 1).unwrap();
        let m = mat(&f, &[&[1, 2, 3, 4], &[2, 4, 6, 9]]);
        let k = kernel(&m, 4, &f);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v, &f).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn determinant_of_vandermonde() {
        let f = make_extension(101, 1).unwrap();
        let m = mat(&f, &[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]);
        // (2-1)(3-1)(3-2) = 2
        assert_eq!(det(&m, &f), f.from_i64(2));
    }

    #[test]
    fn inverse_and_solve() {
        let f = make_extension(7, 2).unwrap();
        let g = f.generator();
        let m: Matrix = vec![vec![g.clone(), f.one()], vec![f.one(), f.zero()]];
        let inv = inverse(&m, &f).unwrap();
        let id = mat_mul(&m, &inv, 2, &f);
        assert!(id[0][0].is_one() && id[1][1].is_one() && id[0][1].is_zero() && id[1][0].is_zero());
        let x = solve(&m, &[f.one(), g.clone()], 2, &f).unwrap();
        assert_eq!(mat_vec(&m, &x, &f), vec![f.one(), g]);
    }
}
