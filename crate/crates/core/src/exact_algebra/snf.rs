use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// Smith normal form `U·M·V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries d_1 | d_2 | …, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

struct Work {
    a: IntegerMatrix,
    u: IntegerMatrix,
    v: IntegerMatrix,
}

impl Work {
    // row_i += k·row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.a.cols() {
            let t = k * &self.a[(j, c)];
            self.a[(i, c)] += t;
        }
        for c in 0..self.u.cols() {
            let t = k * &self.u[(j, c)];
            self.u[(i, c)] += t;
        }
    }

    // col_i += k·col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.a.rows() {
            let t = k * &self.a[(r, j)];
            self.a[(r, i)] += t;
        }
        for r in 0..self.v.rows() {
            let t = k * &self.v[(r, j)];
            self.v[(r, i)] += t;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            self.a[(i, c)] = -&self.a[(i, c)];
        }
        for c in 0..self.u.cols() {
            self.u[(i, c)] = -&self.u[(i, c)];
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithNormalForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = w.min_pivot(t) else {
                return finish(w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.a[(i, t)].div_floor(&p);
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = w.a[(t, j)].div_floor(&p);
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[(i, j)].is_multiple_of(&p)));
            match bad_row {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w)
}

fn finish(w: Work) -> SmithNormalForm {
    SmithNormalForm { d: w.a, u: w.u, v: w.v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntegerMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .diagonal()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    fn check(m: &IntegerMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.determinant().abs(), BigInt::from(1));
        assert_eq!(s.v.determinant().abs(), BigInt::from(1));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let dg = s.diagonal();
        for w in dg.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(diag(&IntegerMatrix::from_rows(&[[0, 3], [3, 0]])), vec![3, 3]);
        assert_eq!(diag(&IntegerMatrix::identity(3)), vec![1, 1, 1]);
        assert_eq!(diag(&IntegerMatrix::from_rows(&[[2, 0], [0, 0]])), vec![2, 0]);
    }

    #[test]
    fn regroups_coprime_parts() {
        let m = IntegerMatrix::from_rows(&[[0, 3, 0, 0], [3, 0, 0, 0], [0, 0, 0, 5], [0, 0, 5, 0]]);
        assert_eq!(diag(&m), vec![1, 1, 15, 15]);
        check(&m);
    }

    #[test]
    fn rectangular_and_awkward() {
        for m in [
            IntegerMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]),
            IntegerMatrix::from_rows(&[[6, 10], [15, 4], [0, 0]]),
            IntegerMatrix::from_rows(&[[0, 0, 0], [0, 0, 7]]),
            IntegerMatrix::zeros(0, 3),
        ] {
            check(&m);
        }
        assert_eq!(
            diag(&IntegerMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]])),
            vec![2, 6, 12]
        );
    }
}
