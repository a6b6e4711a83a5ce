//! Complex Schur form `A = Q·T·Qᴴ`, diagonal reordering, and Sylvester
//! equations with triangular or general coefficients.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{GinvError, Result};
use crate::matrix::Matrix;
use crate::scalar::TolerancePolicy;

type C = Complex64;

#[derive(Debug, Clone)]
pub struct Schur {
    /// Unitary factor.
    pub q: Matrix<C>,
    /// Upper triangular factor.
    pub t: Matrix<C>,
}

/// Rotation `[[c, s], [-s̄, c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C, b: C) -> (f64, C) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, C::zero());
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn rotate_rows(m: &mut Matrix<C>, k: usize, c: f64, s: C, cols: std::ops::Range<usize>) {
    for j in cols {
        let x = m[(k, j)];
        let y = m[(k + 1, j)];
        m[(k, j)] = x * c + s * y;
        m[(k + 1, j)] = -s.conj() * x + y * c;
    }
}

/// Right-multiplies columns `k, k+1` by the adjoint of the rotation.
fn rotate_cols(m: &mut Matrix<C>, k: usize, c: f64, s: C, rows: std::ops::Range<usize>) {
    for i in rows {
        let x = m[(i, k)];
        let y = m[(i, k + 1)];
        m[(i, k)] = x * c + y * s.conj();
        m[(i, k + 1)] = -x * s + y * c;
    }
}

fn hessenberg(a: &Matrix<C>) -> (Matrix<C>, Matrix<C>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::<C>::identity(n);
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v: Vec<C> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * alpha;
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vn;
        // H ← P·H
        for j in 0..n {
            let s: C = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum::<C>() * beta;
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * s;
            }
        }
        // H ← H·P, Q ← Q·P
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: C = v.iter().enumerate().map(|(t, vi)| m[(i, k + 1 + t)] * vi).sum::<C>() * beta;
                for (t, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + t)] -= s * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C::zero();
        }
    }
    (h, q)
}

fn wilkinson_shift(a: C, b: C, c: C, d: C) -> C {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

impl Schur {
    /// Hessenberg reduction followed by shifted QR iteration.
    pub fn new(a: &Matrix<C>) -> Result<Self> {
        if !a.is_square() {
            return Err(GinvError::NotSquare {
                op: "schur",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let (mut h, mut q) = hessenberg(a);
        let norm = h.frobenius_norm();
        let small = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        let mut hi = n.saturating_sub(1);
        let mut iter = 0usize;
        let mut total = 0usize;
        while hi > 0 {
            let mut l = hi;
            while l > 0 {
                let sub = h[(l, l - 1)].norm();
                let local = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
                if sub <= f64::EPSILON * local || sub <= small {
                    h[(l, l - 1)] = C::zero();
                    break;
                }
                l -= 1;
            }
            if l == hi {
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if total > 100 * n.max(10) {
                return Err(GinvError::NoConvergence);
            }
            let mu = if iter.is_multiple_of(11) {
                // exceptional shift to break cycles
                h[(hi, hi)] + C::new(h[(hi, hi - 1)].norm() * 0.75, 0.0)
            } else {
                wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
            };
            for i in l..=hi {
                h[(i, i)] -= mu;
            }
            let mut rots = Vec::with_capacity(hi - l);
            for k in l..hi {
                let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
                rotate_rows(&mut h, k, c, s, k..n);
                h[(k + 1, k)] = C::zero();
                rots.push((k, c, s));
            }
            for &(k, c, s) in &rots {
                rotate_cols(&mut h, k, c, s, 0..(k + 2).min(hi + 1));
                rotate_cols(&mut q, k, c, s, 0..n);
            }
            for i in l..=hi {
                h[(i, i)] += mu;
            }
        }
        for i in 0..n {
            for j in 0..i {
                h[(i, j)] = C::zero();
            }
        }
        Ok(Self { q, t: h })
    }

    pub fn eigenvalues(&self) -> Vec<C> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Swaps diagonal entries `k` and `k+1` by a unitary similarity.
    fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.rows();
        let a = self.t[(k, k)];
        let b = self.t[(k + 1, k + 1)];
        let x = self.t[(k, k + 1)];
        let d = b - a;
        let r = x.norm().hypot(d.norm());
        if r == 0.0 {
            return;
        }
        // first column spans the eigenvector of b
        let z = [[x / r, -d.conj() / r], [d / r, x.conj() / r]];
        for m in [&mut self.t, &mut self.q] {
            for i in 0..n {
                let u = m[(i, k)];
                let v = m[(i, k + 1)];
                m[(i, k)] = u * z[0][0] + v * z[1][0];
                m[(i, k + 1)] = u * z[0][1] + v * z[1][1];
            }
        }
        for j in 0..n {
            let u = self.t[(k, j)];
            let v = self.t[(k + 1, j)];
            self.t[(k, j)] = z[0][0].conj() * u + z[1][0].conj() * v;
            self.t[(k + 1, j)] = z[0][1].conj() * u + z[1][1].conj() * v;
        }
        self.t[(k + 1, k)] = C::zero();
        self.t[(k, k)] = b;
        self.t[(k + 1, k + 1)] = a;
    }

    /// Moves the diagonal entries flagged in `select` to the leading block,
    /// preserving relative order. Returns the size of that block.
    pub fn reorder(&mut self, select: &[bool]) -> usize {
        assert_eq!(select.len(), self.t.rows());
        let mut sel = select.to_vec();
        let mut pos = 0;
        for i in 0..sel.len() {
            if !sel[i] {
                continue;
            }
            for k in (pos..i).rev() {
                self.swap_adjacent(k);
                sel.swap(k, k + 1);
            }
            pos += 1;
        }
        pos
    }
}

/// Solves `T11·Y − Y·T22 = C` for upper triangular `T11`, `T22`.
pub fn solve_triangular_sylvester(
    t11: &Matrix<C>,
    t22: &Matrix<C>,
    c: &Matrix<C>,
    policy: &TolerancePolicy,
) -> Result<Matrix<C>> {
    let (k, m) = (t11.rows(), t22.rows());
    if c.shape() != (k, m) {
        return Err(GinvError::ShapeMismatch {
            op: "sylvester",
            expected: format!("{k}x{m}"),
            found: format!("{}x{}", c.rows(), c.cols()),
        });
    }
    let scale = t11.max_abs().max(t22.max_abs());
    let mut y = Matrix::<C>::zeros(k, m);
    for j in 0..m {
        let mut rhs: Vec<C> = (0..k)
            .map(|i| c[(i, j)] + (0..j).map(|s| y[(i, s)] * t22[(s, j)]).sum::<C>())
            .collect();
        for r in (0..k).rev() {
            let acc: C = (r + 1..k).map(|s| t11[(r, s)] * rhs[s]).sum();
            let denom = t11[(r, r)] - t22[(j, j)];
            if denom.norm() <= policy.rank_threshold(scale) {
                return Err(GinvError::SpectraOverlap);
            }
            rhs[r] = (rhs[r] - acc) / denom;
        }
        for i in 0..k {
            y[(i, j)] = rhs[i];
        }
    }
    Ok(y)
}

/// Solves `A11·X − X·A22 = C` by reducing both coefficients to Schur form.
pub fn solve_sylvester(a11: &Matrix<C>, a22: &Matrix<C>, c: &Matrix<C>, policy: &TolerancePolicy) -> Result<Matrix<C>> {
    let s1 = Schur::new(a11)?;
    let s2 = Schur::new(a22)?;
    let rhs = s1.q.adjoint().try_mul(c)?.mul(&s2.q);
    let y = solve_triangular_sylvester(&s1.t, &s2.t, &rhs, policy)?;
    Ok(s1.q.mul(&y).mul(&s2.q.adjoint()))
}
