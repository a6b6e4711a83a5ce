//! Rank-revealing factorization, subspace algebra and projectors.
//!
//! Every rank decision goes through a [`Kernel`] implementation: exact
//! Gauss-Jordan elimination for rationals, column-pivoted Householder QR
//! for complex doubles.

mod exact;
mod float;
pub mod schur;

pub use float::rank_is_ambiguous;
pub use schur::{solve_sylvester, solve_triangular_sylvester, Schur};

use crate::error::{GinvError, Result};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Field, TolerancePolicy};

/// Backend-specific numerical kernels.
///
/// Basis-valued methods return *canonical* bases: reduced column echelon
/// form under the exact backend, orthonormal columns under the float one.
pub trait Kernel: Field {
    fn rank_factorize(a: &Matrix<Self>, policy: &TolerancePolicy) -> RankFactorization<Self>;

    /// Canonical basis of the column space of `x`.
    fn canonical_span(x: &Matrix<Self>, policy: &TolerancePolicy) -> Matrix<Self>;

    /// Canonical basis of the kernel of `a`.
    fn null_space(a: &Matrix<Self>, policy: &TolerancePolicy) -> Matrix<Self>;

    /// Canonical basis of the deterministic complement of `span(basis)`.
    fn complement(basis: &Matrix<Self>, policy: &TolerancePolicy) -> Matrix<Self>;

    /// `span(u) ⊆ span(v)` for canonical bases in the same ambient space.
    fn contained(u: &Matrix<Self>, v: &Matrix<Self>, policy: &TolerancePolicy) -> bool;

    /// Numerical rank of an arbitrary matrix.
    fn rank(a: &Matrix<Self>, policy: &TolerancePolicy) -> usize {
        Self::rank_factorize(a, policy).rank
    }

    fn pseudo_inverse(a: &Matrix<Self>, policy: &TolerancePolicy) -> Matrix<Self>;
}

/// `A = F·G` with `F` of full column rank and `G` of full row rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankFactorization<F: Field> {
    pub f: Matrix<F>,
    pub g: Matrix<F>,
    pub rank: usize,
}

impl<F: Field> RankFactorization<F> {
    pub fn reconstruct(&self) -> Matrix<F> {
        self.f.mul(&self.g)
    }
}

pub fn rank_factorize<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> RankFactorization<F> {
    F::rank_factorize(a, policy)
}

pub fn rank<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> usize {
    F::rank(a, policy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalForm {
    ReducedColumnEchelon,
    Orthonormal,
}

/// A subspace of `F^n` held as a canonical full-column-rank basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F: Kernel> {
    basis: Matrix<F>,
}

impl<F: Kernel> Subspace<F> {
    /// The span of the columns of `x`.
    pub fn span(x: &Matrix<F>, policy: &TolerancePolicy) -> Self {
        Self {
            basis: F::canonical_span(x, policy),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            basis: Matrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: Matrix::identity(n),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        match F::BACKEND {
            Backend::Exact => CanonicalForm::ReducedColumnEchelon,
            Backend::Float => CanonicalForm::Orthonormal,
        }
    }

    /// `A(self)`, the image of this subspace under `a`.
    pub fn image(&self, a: &Matrix<F>, policy: &TolerancePolicy) -> Result<Self> {
        Ok(Self::span(&a.try_mul(&self.basis)?, policy))
    }
}

pub fn range_basis<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Subspace<F> {
    Subspace::span(a, policy)
}

pub fn nullspace_basis<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Subspace<F> {
    Subspace {
        basis: F::null_space(a, policy),
    }
}

fn check_ambient<F: Kernel>(u: &Subspace<F>, v: &Subspace<F>) -> Result<()> {
    if u.ambient() != v.ambient() {
        return Err(GinvError::AmbientMismatch {
            left: u.ambient(),
            right: v.ambient(),
        });
    }
    Ok(())
}

pub fn subspace_contained<F: Kernel>(u: &Subspace<F>, v: &Subspace<F>, policy: &TolerancePolicy) -> Result<bool> {
    check_ambient(u, v)?;
    if u.dim() > v.dim() {
        return Ok(false);
    }
    Ok(F::contained(&u.basis, &v.basis, policy))
}

pub fn subspace_equal<F: Kernel>(u: &Subspace<F>, v: &Subspace<F>, policy: &TolerancePolicy) -> Result<bool> {
    check_ambient(u, v)?;
    if u.dim() != v.dim() {
        return Ok(false);
    }
    Ok(F::contained(&u.basis, &v.basis, policy) && F::contained(&v.basis, &u.basis, policy))
}

/// `U ⊕ V` is the whole ambient space.
pub fn direct_sum_check<F: Kernel>(u: &Subspace<F>, v: &Subspace<F>, policy: &TolerancePolicy) -> Result<bool> {
    check_ambient(u, v)?;
    let n = u.ambient();
    if u.dim() + v.dim() != n {
        return Ok(false);
    }
    let stacked = u.basis.hstack(&v.basis)?;
    Ok(F::rank(&stacked, policy) == n)
}

pub fn complement_of<F: Kernel>(m: &Subspace<F>, policy: &TolerancePolicy) -> Subspace<F> {
    Subspace {
        basis: F::complement(&m.basis, policy),
    }
}

/// Inverse of a square matrix by Gauss-Jordan elimination with partial
/// pivoting. Under the float backend a pivot below `tau * max(max|a_ij|, 1)`
/// counts as singular.
pub fn inverse<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<Matrix<F>> {
    if !a.is_square() {
        return Err(GinvError::NotSquare {
            op: "inverse",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let scale = a.max_abs();
    let mut m = a.clone();
    let mut inv: Matrix<F> = Matrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].magnitude().total_cmp(&m[(j, col)].magnitude()))
            .expect("non-empty pivot range");
        if m[(pivot, col)].is_zero() || m[(pivot, col)].is_negligible(scale, policy) {
            return Err(GinvError::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m[(col, j)].clone();
                m[(col, j)] = m[(pivot, j)].clone();
                m[(pivot, j)] = tmp;
                let tmp = inv[(col, j)].clone();
                inv[(col, j)] = inv[(pivot, j)].clone();
                inv[(pivot, j)] = tmp;
            }
        }
        let p = m[(col, col)].clone();
        for j in 0..n {
            m[(col, j)] = m[(col, j)].clone() / p.clone();
            inv[(col, j)] = inv[(col, j)].clone() / p.clone();
        }
        for i in 0..n {
            if i == col || m[(i, col)].is_zero() {
                continue;
            }
            let factor = m[(i, col)].clone();
            for j in 0..n {
                let mv = m[(col, j)].clone() * factor.clone();
                m[(i, j)] = m[(i, j)].clone() - mv;
                let iv = inv[(col, j)].clone() * factor.clone();
                inv[(i, j)] = inv[(i, j)].clone() - iv;
            }
        }
    }
    Ok(inv)
}

/// Whether `lhs = rhs` holds: exactly under the exact backend, within
/// relative residual `eps` under the float backend.
pub fn matrices_match<F: Kernel>(lhs: &Matrix<F>, rhs: &Matrix<F>, policy: &TolerancePolicy) -> bool {
    if lhs.shape() != rhs.shape() {
        return false;
    }
    match F::BACKEND {
        Backend::Exact => lhs == rhs,
        Backend::Float => lhs.relative_residual(rhs) <= policy.eps,
    }
}

pub fn is_idempotent<F: Kernel>(p: &Matrix<F>, policy: &TolerancePolicy) -> bool {
    p.is_square() && matrices_match(&p.mul(p), p, policy)
}

/// An idempotent together with its range and nullspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<F: Kernel> {
    pub matrix: Matrix<F>,
    pub range: Subspace<F>,
    pub nullspace: Subspace<F>,
}

impl<F: Kernel> Projector<F> {
    /// Reads range and nullspace off an idempotent matrix.
    pub fn from_matrix(p: Matrix<F>, policy: &TolerancePolicy) -> Self {
        let range = range_basis(&p, policy);
        let nullspace = nullspace_basis(&p, policy);
        Self {
            matrix: p,
            range,
            nullspace,
        }
    }

    /// `||P² − P||_F / max(1, ||P||_F²)`.
    pub fn idempotency_residual(&self) -> f64 {
        let p = &self.matrix;
        let diff = p.mul(p).sub(p).frobenius_norm();
        diff / p.frobenius_norm().powi(2).max(1.0)
    }

    /// `I − P`, projecting onto the nullspace along the range.
    pub fn complementary(&self) -> Self {
        let n = self.matrix.rows();
        Self {
            matrix: Matrix::identity(n).sub(&self.matrix),
            range: self.nullspace.clone(),
            nullspace: self.range.clone(),
        }
    }
}

/// The projector onto `m` along `n`.
pub fn projector_onto_along<F: Kernel>(
    m: &Subspace<F>,
    n: &Subspace<F>,
    policy: &TolerancePolicy,
) -> Result<Projector<F>> {
    if !direct_sum_check(m, n, policy)? {
        return Err(GinvError::NotComplementary);
    }
    let k = m.dim();
    let s = m.basis.hstack(&n.basis)?;
    let s_inv = inverse(&s, policy)?;
    let p = m.basis.mul(&s_inv.row_range(0, k));
    Ok(Projector {
        matrix: p,
        range: m.clone(),
        nullspace: n.clone(),
    })
}
