use num_complex::Complex64;
use num_traits::Zero;

use super::{Kernel, RankFactorization};
use crate::matrix::Matrix;
use crate::scalar::TolerancePolicy;

type C = Complex64;

/// Column-pivoted Householder QR: `A·Π = Q·R`, `perm[j]` the original
/// index of column `j` of `R`.
pub(crate) struct Cpqr {
    pub q: Matrix<C>,
    pub r: Matrix<C>,
    pub perm: Vec<usize>,
    pub rank: usize,
}

pub(crate) fn cpqr(a: &Matrix<C>, policy: &TolerancePolicy) -> Cpqr {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = Matrix::<C>::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);
    for k in 0..steps {
        // pivot on the largest remaining column norm
        let norms: Vec<f64> = (k..n)
            .map(|j| (k..m).map(|i| r[(i, j)].norm_sqr()).sum::<f64>())
            .collect();
        let (offset, best) = norms
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let jp = k + offset;
        if jp != k {
            for i in 0..m {
                let tmp = r[(i, k)];
                r[(i, k)] = r[(i, jp)];
                r[(i, jp)] = tmp;
            }
            perm.swap(k, jp);
        }
        let alpha = best.sqrt();
        if alpha == 0.0 {
            break;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v: Vec<C> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        for j in k..n {
            let s: C = v.iter().enumerate().map(|(t, vi)| vi.conj() * r[(k + t, j)]).sum();
            let s = s * beta;
            for (t, vi) in v.iter().enumerate() {
                r[(k + t, j)] -= vi * s;
            }
        }
        for i in 0..m {
            let s: C = v.iter().enumerate().map(|(t, vi)| q[(i, k + t)] * vi).sum();
            let s = s * beta;
            for (t, vi) in v.iter().enumerate() {
                q[(i, k + t)] -= s * vi.conj();
            }
        }
        r[(k, k)] = -phase * alpha;
        for i in k + 1..m {
            r[(i, k)] = C::zero();
        }
    }
    let scale = if steps > 0 { r[(0, 0)].norm() } else { 0.0 };
    let threshold = policy.rank_threshold(scale);
    let rank = (0..steps).take_while(|&k| r[(k, k)].norm() > threshold).count();
    Cpqr { q, r, perm, rank }
}

/// Thin SVD `A = U·diag(σ)·Vᴴ` with `σ` sorted in decreasing order.
pub(crate) struct Svd {
    pub u: Matrix<C>,
    pub sigma: Vec<f64>,
    pub v: Matrix<C>,
}

/// One-sided Jacobi SVD. Orthogonalizes the columns of `A·V` by plane
/// rotations; accurate to working precision for every singular value
/// regardless of clustering.
pub(crate) fn svd(a: &Matrix<C>) -> Svd {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    // column-major working copies
    let mut w: Vec<Vec<C>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<C>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C::new(1.0, 0.0) } else { C::zero() }).collect())
        .collect();
    let norm2 = |x: &[C]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(&w[p]);
                let beta = norm2(&w[q]);
                let gamma: C = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut w, &mut v] {
                    let (lo, hi) = cols.split_at_mut(q);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let yq = *y * phase;
                        let xp = *x;
                        *x = xp * c - yq * s;
                        *y = xp * s + yq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = w.iter().enumerate().map(|(j, col)| (norm2(col).sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut u = Matrix::zeros(m, n);
    let mut vm = Matrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        for i in 0..m {
            u[(i, k)] = if s > 0.0 { w[j][i] / s } else { C::zero() };
        }
        for i in 0..n {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd { u, sigma, v: vm }
}

/// Whether a singular value of `a` sits within a factor of 100 of the rank
/// threshold, so that the numerical rank is not a reliable decision.
pub fn rank_is_ambiguous(a: &Matrix<C>, policy: &TolerancePolicy) -> bool {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return false;
    }
    let sv = svd(a).sigma;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let threshold = policy.rank_threshold(smax);
    sv.iter().any(|&s| s > threshold / 100.0 && s < threshold * 100.0)
}

impl Kernel for C {
    fn rank_factorize(a: &Matrix<C>, policy: &TolerancePolicy) -> RankFactorization<C> {
        let qr = cpqr(a, policy);
        let k = qr.rank;
        let f = qr.q.columns(0, k);
        let mut g = Matrix::zeros(k, a.cols());
        for (j, &orig) in qr.perm.iter().enumerate() {
            for i in 0..k {
                g[(i, orig)] = qr.r[(i, j)];
            }
        }
        RankFactorization { f, g, rank: k }
    }

    fn canonical_span(x: &Matrix<C>, policy: &TolerancePolicy) -> Matrix<C> {
        let qr = cpqr(x, policy);
        qr.q.columns(0, qr.rank)
    }

    fn null_space(a: &Matrix<C>, policy: &TolerancePolicy) -> Matrix<C> {
        let qr = cpqr(&a.adjoint(), policy);
        qr.q.columns(qr.rank, a.cols())
    }

    fn complement(basis: &Matrix<C>, policy: &TolerancePolicy) -> Matrix<C> {
        let qr = cpqr(basis, policy);
        qr.q.columns(qr.rank, basis.rows())
    }

    fn contained(u: &Matrix<C>, v: &Matrix<C>, policy: &TolerancePolicy) -> bool {
        if u.cols() == 0 {
            return true;
        }
        let proj = v.mul(&v.adjoint().mul(u));
        u.sub(&proj).frobenius_norm() <= policy.angle
    }

    fn pseudo_inverse(a: &Matrix<C>, policy: &TolerancePolicy) -> Matrix<C> {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Matrix::zeros(n, m);
        }
        let svd = svd(a);
        let smax = svd.sigma.first().copied().unwrap_or(0.0);
        let threshold = policy.rank_threshold(smax);
        let mut out = Matrix::zeros(n, m);
        for (s, &sigma) in svd.sigma.iter().enumerate() {
            if sigma <= threshold {
                continue;
            }
            let inv = 1.0 / sigma;
            for i in 0..n {
                let vi = svd.v[(i, s)] * inv;
                if vi.is_zero() {
                    continue;
                }
                for j in 0..m {
                    out[(i, j)] += vi * svd.u[(j, s)].conj();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn jacobi_svd_reconstructs_clustered_projector() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(6, 6), (4, 7), (7, 3)] {
            let x = Matrix::from_fn(m, n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let s = svd(&x);
            let sig = Matrix::diag(&s.sigma.iter().map(|&v| C::new(v, 0.0)).collect::<Vec<_>>());
            let back = s.u.mul(&sig).mul(&s.v.adjoint());
            assert!(back.relative_residual(&x) < 1e-13);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
        // oblique projector of rank 5 with four unit singular values
        let n = 6;
        let e = Matrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1.0 } else { 0.0 };
            C::new(d + rng.gen_range(-0.07..0.07), rng.gen_range(-0.07..0.07))
        });
        let mut diag = vec![C::new(1.0, 0.0); n];
        diag[n - 1] = C::zero();
        let p = e.mul(&Matrix::diag(&diag)).mul(&super::super::inverse(&e, &pol()).unwrap());
        let pinv = C::pseudo_inverse(&p, &pol());
        assert!(p.mul(&pinv).mul(&p).relative_residual(&p) < 1e-13);
        let h = p.mul(&pinv);
        assert!(h.sub(&h.adjoint()).max_abs() < 1e-13);
    }

    #[test]
    fn cpqr_is_unitary_and_reconstructs() {
        let a = Matrix::from_rows(vec![
            vec![C::new(1.0, 1.0), C::new(2.0, 0.0), C::new(0.0, -1.0)],
            vec![C::new(0.0, 0.0), C::new(1.0, 2.0), C::new(3.0, 0.0)],
            vec![C::new(2.0, 0.0), C::new(-1.0, 0.0), C::new(1.0, 1.0)],
            vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.5, 0.0)],
        ])
        .unwrap();
        let qr = cpqr(&a, &pol());
        assert_eq!(qr.rank, 3);
        assert!(qr.q.adjoint().mul(&qr.q).relative_difference(&Matrix::identity(4)) < 1e-14);
        let ap = a.select_columns(&qr.perm);
        assert!(qr.q.mul(&qr.r).relative_difference(&ap) < 1e-14);
    }

    #[test]
    fn complex_pinv_satisfies_penrose() {
        let a = Matrix::from_rows(vec![
            vec![C::new(1.0, 1.0), C::new(2.0, 2.0)],
            vec![C::new(0.0, 1.0), C::new(0.0, 2.0)],
            vec![C::new(1.0, 0.0), C::new(2.0, 0.0)],
        ])
        .unwrap();
        let b = C::pseudo_inverse(&a, &pol());
        assert!(a.mul(&b).mul(&a).relative_difference(&a) < 1e-14);
        assert!(b.mul(&a).mul(&b).relative_difference(&b) < 1e-14);
        let ab = a.mul(&b);
        assert!(ab.adjoint().relative_difference(&ab) < 1e-14);
    }

    #[test]
    fn ambiguous_rank_is_flagged() {
        let clear = Matrix::from_rows(vec![vec![C::new(1.0, 0.0), C::new(0.0, 0.0)], vec![C::new(0.0, 0.0), C::new(0.0, 0.0)]]).unwrap();
        assert!(!rank_is_ambiguous(&clear, &pol()));
        let mut close = clear.clone();
        close[(1, 1)] = C::new(1e-11, 0.0);
        assert!(rank_is_ambiguous(&close, &pol()));
    }

    #[test]
    fn empty_matrix_pinv() {
        let a = Matrix::<C>::zeros(3, 0);
        assert_eq!(C::pseudo_inverse(&a, &pol()).shape(), (0, 3));
    }
}
