//! Integer lattice routines, generic over the signed scalar.

use crate::scalar::Whole;

/// Result of unimodular column reduction of a row matrix `A`.
///
/// `A = H · W⁻¹` with `H` lower-echelon (only its first `rank` columns are
/// nonzero) and `W⁻¹` unimodular. The first `rank` rows of `W⁻¹` are a
/// ℤ-basis of the saturation `span_ℚ(A) ∩ ℤ^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnReduction<T> {
    pub rank: usize,
    pub h: Vec<Vec<T>>,
    pub w_inv: Vec<Vec<T>>,
}

pub fn column_reduce<T: Whole>(rows: &[Vec<T>]) -> ColumnReduction<T> {
    let width = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut w_inv: Vec<Vec<T>> = (0..width)
        .map(|i| (0..width).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut rank = 0;
    for i in 0..a.len() {
        if rank == width {
            break;
        }
        loop {
            let pivot = (rank..width)
                .filter(|&c| !a[i][c].is_zero())
                .min_by(|&x, &y| a[i][x].abs().cmp(&a[i][y].abs()));
            let Some(pivot) = pivot else { break };
            if pivot != rank {
                a.iter_mut().for_each(|row| row.swap(pivot, rank));
                w_inv.swap(pivot, rank);
            }
            let mut clean = true;
            for c in rank + 1..width {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[i][rank]);
                // col_c -= q·col_rank ; row_rank(W⁻¹) += q·row_c(W⁻¹)
                for row in a.iter_mut() {
                    let v = row[rank].clone() * q.clone();
                    row[c] = row[c].clone() - v;
                }
                let add: Vec<T> = w_inv[c].iter().map(|v| v.clone() * q.clone()).collect();
                for (dst, v) in w_inv[rank].iter_mut().zip(add) {
                    *dst = dst.clone() + v;
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rank < width && !a[i][rank].is_zero() {
            if a[i][rank].is_negative() {
                a.iter_mut().for_each(|row| row[rank] = -row[rank].clone());
                w_inv[rank].iter_mut().for_each(|v| *v = -v.clone());
            }
            rank += 1;
        }
    }
    ColumnReduction { rank, h: a, w_inv }
}

pub fn rank<T: Whole>(rows: &[Vec<T>]) -> usize {
    column_reduce(rows).rank
}

/// gcd of all 2×2 minors of the 2×r matrix `[s; t]`.
pub fn minor_gcd<T: Whole>(s: &[T], t: &[T]) -> T {
    let mut g = T::zero();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let m = s[i].clone() * t[j].clone() - s[j].clone() * t[i].clone();
            g = g.gcd(&m);
        }
    }
    g
}

pub fn det2<T: Whole>(a: &(T, T), b: &(T, T)) -> T {
    a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone()
}

pub fn primitive2<T: Whole>(v: (T, T)) -> (T, T) {
    let g = v.0.gcd(&v.1);
    if g.is_zero() {
        return v;
    }
    (v.0 / g.clone(), v.1 / g)
}

type Mat2<T> = [[T; 2]; 2];

fn mat_mul<T: Whole>(x: &Mat2<T>, y: &Mat2<T>) -> Mat2<T> {
    let e = |i: usize, j: usize| x[i][0].clone() * y[0][j].clone() + x[i][1].clone() * y[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn apply<T: Whole>(m: &Mat2<T>, v: &(T, T)) -> (T, T) {
    (
        m[0][0].clone() * v.0.clone() + m[0][1].clone() * v.1.clone(),
        m[1][0].clone() * v.0.clone() + m[1][1].clone() * v.1.clone(),
    )
}

/// Inverse of an integer matrix with determinant ±1.
fn unimodular_inverse<T: Whole>(m: &Mat2<T>) -> Mat2<T> {
    let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    debug_assert!(det.abs().is_one());
    [
        [m[1][1].clone() * det.clone(), -m[0][1].clone() * det.clone()],
        [-m[1][0].clone() * det.clone(), m[0][0].clone() * det],
    ]
}

/// Hilbert basis of the cone spanned by primitive, independent `r1`, `r2` in
/// ℤ², ordered from `r1` to `r2`.
///
/// A unimodular change of coordinates sends the cone to `cone((1,0), (a,d))`
/// with `0 ≤ a < d`. Apart from `(1,0)`, the irreducible lattice points are
/// `(⌈a·y/d⌉, y)` for the `y ∈ [1, d]` at which `(−a·y) mod d` reaches a
/// strict new minimum.
pub fn hilbert_basis_2d<T: Whole>(r1: &(T, T), r2: &(T, T)) -> Vec<(T, T)> {
    let (p, q) = r1.clone();
    let egcd = p.extended_gcd(&q);
    assert!(egcd.gcd.is_one(), "first ray must be primitive");
    let (u, v) = (egcd.x, egcd.y);
    let to_axis: Mat2<T> = [[u, v], [-q.clone(), p.clone()]];
    let (a0, d0) = apply(&to_axis, r2);
    assert!(!d0.is_zero(), "rays must be independent");
    let flip: Mat2<T> = if d0.is_negative() {
        [[T::one(), T::zero()], [T::zero(), -T::one()]]
    } else {
        [[T::one(), T::zero()], [T::zero(), T::one()]]
    };
    let d = d0.abs();
    let m = a0.div_floor(&d);
    let a = a0 - m.clone() * d.clone();
    let shear: Mat2<T> = [[T::one(), -m], [T::zero(), T::one()]];
    let forward = mat_mul(&shear, &mat_mul(&flip, &to_axis));
    let back = unimodular_inverse(&forward);

    let mut local = vec![(T::one(), T::zero())];
    if d.is_one() {
        local.push((a, d));
    } else {
        let step = d.clone() - a.clone();
        let mut residue = step.clone();
        let mut best: Option<T> = None;
        let mut y = T::one();
        while y <= d {
            if best.as_ref().is_none_or(|b| residue < *b) {
                let x = (a.clone() * y.clone() + residue.clone()) / d.clone();
                local.push((x, y.clone()));
                if residue.is_zero() {
                    break;
                }
                best = Some(residue.clone());
            }
            residue = (residue + step.clone()) % d.clone();
            y = y + T::one();
        }
    }
    local.iter().map(|pt| apply(&back, pt)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn in_cone(r1: (i64, i64), r2: (i64, i64), p: (i64, i64)) -> bool {
        // p = λ r1 + μ r2 with λ, μ ≥ 0
        let d = det2(&r1, &r2);
        let l = det2(&p, &r2) * d.signum();
        let m = det2(&r1, &p) * d.signum();
        l >= 0 && m >= 0
    }

    /// Brute-force Hilbert basis: nonzero cone points in a box that are not a
    /// sum of two nonzero cone points.
    fn brute_hilbert(r1: (i64, i64), r2: (i64, i64)) -> Vec<(i64, i64)> {
        let bound = r1.0.abs().max(r1.1.abs()).max(r2.0.abs()).max(r2.1.abs()) * 2 + 1;
        let pts: Vec<(i64, i64)> = (-bound..=bound)
            .flat_map(|x| (-bound..=bound).map(move |y| (x, y)))
            .filter(|&p| p != (0, 0) && in_cone(r1, r2, p))
            .collect();
        pts.iter()
            .copied()
            .filter(|&p| !pts.iter().any(|&q| q != p && in_cone(r1, r2, (p.0 - q.0, p.1 - q.1)) && (p.0 - q.0, p.1 - q.1) != (0, 0)))
            .collect()
    }

    #[test]
    fn hilbert_matches_brute_force() {
        let rays = [((1, 0), (0, 1)), ((1, 0), (1, 2)), ((2, 1), (1, 3)), ((1, -1), (1, 4)), ((-3, 2), (1, 1)), ((1, 0), (5, 7)), ((3, -2), (-1, 5))];
        for (r1, r2) in rays {
            let mut got = hilbert_basis_2d(&r1, &r2);
            assert_eq!(got.first(), Some(&r1));
            assert_eq!(got.last(), Some(&r2));
            let mut want = brute_hilbert(r1, r2);
            got.sort();
            want.sort();
            assert_eq!(got, want, "rays {r1:?} {r2:?}");
        }
    }

    #[test]
    fn hilbert_generic_big() {
        let r1 = (BigInt::from(2), BigInt::from(1));
        let r2 = (BigInt::from(1), BigInt::from(3));
        let big: Vec<(i64, i64)> = hilbert_basis_2d(&r1, &r2)
            .into_iter()
            .map(|(a, b)| (a.try_into().unwrap(), b.try_into().unwrap()))
            .collect();
        assert_eq!(big, hilbert_basis_2d(&(2i64, 1), &(1, 3)));
    }

    #[test]
    fn saturation_of_45_20() {
        let rows = vec![vec![0i64, 2, 1], vec![2, 0, 1]];
        let red = column_reduce(&rows);
        assert_eq!(red.rank, 2);
        let (s, t) = (&red.w_inv[0], &red.w_inv[1]);
        assert_eq!(minor_gcd(s, t), 1);
        // (1,1,1) lies in the saturated lattice but not in ℤ(0,2,1) + ℤ(2,0,1)
        assert_eq!(minor_gcd(&rows[0], &rows[1]), 2);
        // A = H·W⁻¹
        for (i, row) in rows.iter().enumerate() {
            for (c, &want) in row.iter().enumerate() {
                let v: i64 = (0..3).map(|k| red.h[i][k] * red.w_inv[k][c]).sum();
                assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn rank_detection() {
        assert_eq!(rank(&[vec![1i64, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1i64, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]), 2);
        assert_eq!(rank(&[vec![1i64, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
    }
}
