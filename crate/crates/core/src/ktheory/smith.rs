use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | ...`, `dᵢ >= 0`.
///
/// The inverses of `U` and `V` are tracked alongside so that coordinates can be
/// moved in both directions without a separate inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d₁, ..., d_min(m,n)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Checks every defining property against the source matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let product = &(&self.u * a) * &self.v;
        if product != self.d {
            return false;
        }
        let (m, n) = (a.rows(), a.cols());
        let diag_only = (0..m).all(|i| (0..n).all(|j| i == j || self.d.get(i, j).is_zero()));
        let diag = self.diagonal();
        let nonneg = diag.iter().all(|x| !x.is_negative());
        let chain = diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        let rank_ok = diag.iter().filter(|x| !x.is_zero()).count() == self.rank;
        let inverses = (&self.u * &self.u_inv).is_identity() && (&self.v * &self.v_inv).is_identity();
        let unimodular = self.u.determinant().abs().is_one() && self.v.determinant().abs().is_one();
        diag_only && nonneg && chain && rank_ok && inverses && unimodular
    }

    /// An integer solution of `A·x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.u.mul_vec(b);
        let n = self.v.rows();
        let mut z = vec![BigInt::zero(); n];
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let di = self.d.get(i, i);
                let (q, r) = yi.div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&z))
    }

    /// A basis of the integer kernel of `A`, as columns.
    pub fn kernel_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.v.cols()).collect();
        self.v.select_cols(&idx)
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += q·row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    /// `col[dst] += q·col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form with deterministic pivoting: the smallest nonzero absolute
/// value in the remaining block, ties broken by row-major position.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = w.d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < w.d.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.d.get(t, t).clone();
            let mut residue = false;
            for i in t + 1..m {
                let q = w.d.get(i, t) / &p;
                w.add_row(i, t, &-q);
                residue |= !w.d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = w.d.get(t, j) / &p;
                w.add_col(j, t, &-q);
                residue |= !w.d.get(t, j).is_zero();
            }
            if residue {
                continue;
            }
            let bad_row = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !w.d.get(i, j).is_multiple_of(&p))
            });
            match bad_row {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.d.get(t, t).is_zero() {
            break;
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
        rank = t + 1;
    }
    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        d: w.d,
        v: w.v,
        v_inv: w.v_inv,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(s: &SmithDecomposition) -> Vec<i64> {
        s.diagonal()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn identity_stays_identity() {
        let a = IntMatrix::identity(3);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(diag(&s), vec![1, 1, 1]);
        assert!(s.u.is_identity() && s.v.is_identity());
    }

    #[test]
    fn single_column() {
        let a = IntMatrix::from_i64(&[&[1], &[3]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(s.d, IntMatrix::from_i64(&[&[1], &[0]]));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(diag(&s), vec![1, 6]);
    }

    #[test]
    fn degenerate_shapes() {
        for a in [
            IntMatrix::zeros(1, 0),
            IntMatrix::zeros(0, 2),
            IntMatrix::zeros(2, 2),
            IntMatrix::from_i64(&[&[0, 0, 4], &[0, 6, 0]]),
        ] {
            let s = smith_normal_form(&a);
            assert!(s.verify(&a), "{a:?}");
        }
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let s = smith_normal_form(&a);
        let x = s.solve(&[BigInt::from(6), BigInt::from(3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![BigInt::from(6), BigInt::from(3)]);
        assert!(s.solve(&[BigInt::from(1), BigInt::from(0)]).is_none());
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!((&a * &k).is_zero());
    }
}
