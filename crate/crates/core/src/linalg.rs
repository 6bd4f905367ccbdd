//! Dense exact linear algebra over a [`Field`].

use crate::field::Field;

/// Reduces `rows` to reduced row echelon form in place and returns the pivot columns.
/// Zero rows are dropped.
pub fn rref<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut().skip(c) {
            *x *= inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= f.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone() * inv.clone();
            for (x, y) in row.iter_mut().zip(pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= f.clone() * y.clone();
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{x : A x = 0}`, one vector per free column, each with a 1 in its free slot.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// A particular solution of `A x = b`, free variables set to zero.
pub fn solve<F: Field>(rows: &[Vec<F>], rhs: &[F], ncols: usize) -> Option<Vec<F>> {
    let mut aug: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Reduces `v` modulo the row space of an RREF basis with the given pivots.
pub fn reduce<F: Field>(v: &mut [F], basis: &[Vec<F>], pivots: &[usize]) {
    for (row, &p) in basis.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, y) in v.iter_mut().zip(row).skip(p) {
            if !y.is_zero() {
                *x -= f.clone() * y.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<101>;

    fn m(rows: &[&[i64]]) -> Vec<Vec<F>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(F::from_i64(0), |acc, (x, y)| acc + *x * *y);
            assert_eq!(dot, F::from_i64(0));
        }
    }

    #[test]
    fn solving() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[F::from_i64(3), F::from_i64(1)], 2).unwrap();
        assert_eq!(x, vec![F::from_i64(2), F::from_i64(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&b, &[F::from_i64(1), F::from_i64(3)], 2).is_none());
    }
}
