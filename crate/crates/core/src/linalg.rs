//! Small dense linear algebra over a [`Field`]: determinants and 3x3 helpers.

use crate::exactfield::Field;

pub type Mat3<F> = [[F; 3]; 3];

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss<F: Field>(mut m: Vec<Vec<F>>, tag: F::Tag) -> F {
    let n = m.len();
    if n == 0 {
        return F::one(tag);
    }
    let mut negate = false;
    let mut prev = F::one(tag);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return F::zero(tag),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * &m[k][k] - m[i][k].clone() * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

pub fn det3<F: Field>(m: &Mat3<F>) -> F {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].clone() * &m[r2][c2] - m[r1][c2].clone() * &m[r2][c1]
    };
    m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
        + m[0][2].clone() * minor(1, 2, 0, 1)
}

pub fn inverse3<F: Field>(m: &Mat3<F>) -> Option<Mat3<F>> {
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let v = m[rows[0]][cols[0]].clone() * &m[rows[1]][cols[1]]
            - m[rows[0]][cols[1]].clone() * &m[rows[1]][cols[0]];
        if (r + c) % 2 == 0 {
            v
        } else {
            -v
        }
    };
    // Inverse is the transposed cofactor matrix over the determinant.
    Some(std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / &det)))
}

pub fn mat_vec<F: Field>(m: &Mat3<F>, v: &[F; 3]) -> [F; 3] {
    std::array::from_fn(|i| {
        m[i][0].clone() * &v[0] + m[i][1].clone() * &v[1] + m[i][2].clone() * &v[2]
    })
}

pub fn cross<F: Field>(u: &[F; 3], v: &[F; 3]) -> [F; 3] {
    [
        u[1].clone() * &v[2] - u[2].clone() * &v[1],
        u[2].clone() * &v[0] - u[0].clone() * &v[2],
        u[0].clone() * &v[1] - u[1].clone() * &v[0],
    ]
}

pub fn dot<F: Field>(u: &[F; 3], v: &[F; 3]) -> F {
    u[0].clone() * &v[0] + u[1].clone() * &v[1] + u[2].clone() * &v[2]
}

/// Rank of a 3x3 matrix.
pub fn rank3<F: Field>(m: &Mat3<F>) -> usize {
    if !det3(m).is_zero() {
        return 3;
    }
    for r1 in 0..3 {
        for r2 in r1 + 1..3 {
            for c1 in 0..3 {
                for c2 in c1 + 1..3 {
                    let minor = m[r1][c1].clone() * &m[r2][c2] - m[r1][c2].clone() * &m[r2][c1];
                    if !minor.is_zero() {
                        return 2;
                    }
                }
            }
        }
    }
    if m.iter().flatten().any(|x| !x.is_zero()) {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[&[0, 2, 1], &[3, -1, 4], &[5, 6, 0]]);
        let arr: Mat3<Rat> = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone()));
        assert_eq!(det_bareiss(a, ()), det3(&arr));
        assert_eq!(det3(&arr), Rat::from(63));
    }

    #[test]
    fn inverse_round_trip() {
        let a: Mat3<Rat> = [
            [Rat::from(2), Rat::from(1), Rat::from(0)],
            [Rat::from(0), Rat::from(1), Rat::from(3)],
            [Rat::from(1), Rat::from(0), Rat::from(1)],
        ];
        let inv = inverse3(&a).unwrap();
        let e = [Rat::from(1), Rat::from(-2), Rat::from(5)];
        assert_eq!(mat_vec(&a, &mat_vec(&inv, &e)), e);
        assert_eq!(rank3(&a), 3);
    }

    #[test]
    fn singular_determinant_with_zero_pivot() {
        let a = m(&[&[0, 0, 1], &[0, 1, 0], &[0, 2, 3]]);
        assert_eq!(det_bareiss(a, ()), Rat::from(0));
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(b, ()), Rat::from(-1));
    }
}
