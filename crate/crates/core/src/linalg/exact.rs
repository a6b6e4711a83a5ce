use num_traits::{One, Zero};

use super::{Kernel, RankFactorization};
use crate::matrix::Matrix;
use crate::scalar::{Rational, TolerancePolicy};

/// Reduced row echelon form and its pivot columns.
pub(crate) fn rref(a: &Matrix<Rational>) -> (Matrix<Rational>, Vec<usize>) {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                let tmp = m[(row, j)].clone();
                m[(row, j)] = m[(p, j)].clone();
                m[(p, j)] = tmp;
            }
        }
        let pv = m[(row, col)].clone();
        if !pv.is_one() {
            for j in col..cols {
                m[(row, j)] = &m[(row, j)] / &pv;
            }
        }
        for i in 0..rows {
            if i == row || m[(i, col)].is_zero() {
                continue;
            }
            let factor = m[(i, col)].clone();
            for j in col..cols {
                let delta = &factor * &m[(row, j)];
                m[(i, j)] = &m[(i, j)] - delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Incrementally maintained echelon basis used for membership tests.
struct Echelon {
    n: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn new(n: usize) -> Self {
        Self { n, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, w) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(w) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns false when it was already spanned.
    fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let pv = r[p].clone();
        for x in r.iter_mut() {
            *x = &*x / &pv;
        }
        self.rows.push((p, r));
        true
    }

    fn contains(&self, v: Vec<Rational>) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.n];
        e[i] = Rational::one();
        e
    }
}

fn column_vec(m: &Matrix<Rational>, j: usize) -> Vec<Rational> {
    (0..m.rows()).map(|i| m[(i, j)].clone()).collect()
}

impl Kernel for Rational {
    fn rank_factorize(a: &Matrix<Rational>, _policy: &TolerancePolicy) -> RankFactorization<Rational> {
        let (r, pivots) = rref(a);
        let rank = pivots.len();
        RankFactorization {
            f: a.select_columns(&pivots),
            g: r.row_range(0, rank),
            rank,
        }
    }

    fn canonical_span(x: &Matrix<Rational>, _policy: &TolerancePolicy) -> Matrix<Rational> {
        let (r, pivots) = rref(&x.transpose());
        r.row_range(0, pivots.len()).transpose()
    }

    fn null_space(a: &Matrix<Rational>, policy: &TolerancePolicy) -> Matrix<Rational> {
        let n = a.cols();
        let (r, pivots) = rref(a);
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Matrix::zeros(n, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -r[(i, f)].clone();
            }
        }
        Self::canonical_span(&basis, policy)
    }

    fn complement(basis: &Matrix<Rational>, policy: &TolerancePolicy) -> Matrix<Rational> {
        let n = basis.rows();
        let mut ech = Echelon::new(n);
        for j in 0..basis.cols() {
            ech.insert(column_vec(basis, j));
        }
        let chosen: Vec<usize> = (0..n).filter(|&i| ech.insert(ech.unit(i))).collect();
        let e = Matrix::<Rational>::identity(n).select_columns(&chosen);
        Self::canonical_span(&e, policy)
    }

    fn contained(u: &Matrix<Rational>, v: &Matrix<Rational>, _policy: &TolerancePolicy) -> bool {
        let mut ech = Echelon::new(v.rows());
        for j in 0..v.cols() {
            ech.insert(column_vec(v, j));
        }
        (0..u.cols()).all(|j| ech.contains(column_vec(u, j)))
    }

    fn pseudo_inverse(a: &Matrix<Rational>, policy: &TolerancePolicy) -> Matrix<Rational> {
        let rf = Self::rank_factorize(a, policy);
        if rf.rank == 0 {
            return Matrix::zeros(a.cols(), a.rows());
        }
        let (f, g) = (&rf.f, &rf.g);
        let ggt = g.mul(&g.adjoint());
        let ftf = f.adjoint().mul(f);
        let ggt_inv = super::inverse(&ggt, policy).expect("G has full row rank");
        let ftf_inv = super::inverse(&ftf, policy).expect("F has full column rank");
        g.adjoint().mul(&ggt_inv).mul(&ftf_inv).mul(&f.adjoint())
    }
}
