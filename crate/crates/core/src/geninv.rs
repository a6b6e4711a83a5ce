//! Constructions of inner, outer, reflexive, Moore-Penrose, group, Drazin,
//! (p,q) and Mary inverses, plus the existence diagnostics for inverses
//! along an element.
//!
//! Functions return `Result<Existence<_>>`: the outer `Result` reports
//! faults such as shape mismatches, the inner [`Existence`] reports whether
//! the requested inverse exists.

use std::fmt;
use std::str::FromStr;

use crate::error::{GinvError, Result};
use crate::linalg::{
    self, complement_of, direct_sum_check, inverse, is_idempotent, matrices_match, nullspace_basis, range_basis,
    subspace_contained, Kernel, Subspace,
};
use crate::matrix::Matrix;
use crate::scalar::TolerancePolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InverseKind {
    Inner,
    Outer,
    Reflexive,
    MoorePenrose,
    Group,
    Drazin,
    Pq,
    Mary,
}

impl InverseKind {
    pub const ALL: [InverseKind; 8] = [
        InverseKind::Inner,
        InverseKind::Outer,
        InverseKind::Reflexive,
        InverseKind::MoorePenrose,
        InverseKind::Group,
        InverseKind::Drazin,
        InverseKind::Pq,
        InverseKind::Mary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InverseKind::Inner => "inner",
            InverseKind::Outer => "outer",
            InverseKind::Reflexive => "reflexive",
            InverseKind::MoorePenrose => "mp",
            InverseKind::Group => "group",
            InverseKind::Drazin => "drazin",
            InverseKind::Pq => "pq",
            InverseKind::Mary => "mary",
        }
    }

    /// Matrix identities that define this kind.
    pub fn identities(self) -> &'static [&'static str] {
        match self {
            InverseKind::Inner => &["ABA=A"],
            InverseKind::Outer => &["BAB=B"],
            InverseKind::Reflexive => &["ABA=A", "BAB=B"],
            InverseKind::MoorePenrose => &["ABA=A", "BAB=B", "(AB)*=AB", "(BA)*=BA"],
            InverseKind::Group => &["ABA=A", "BAB=B", "AB=BA"],
            InverseKind::Drazin => &["A^kBA=A^k", "BAB=B", "AB=BA"],
            InverseKind::Pq => &["BAB=B", "BA=p", "I-AB=q"],
            InverseKind::Mary => &["BAB=B"],
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InverseKind {
    type Err = GinvError;

    fn from_str(s: &str) -> Result<Self> {
        let k = match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "inner" => InverseKind::Inner,
            "outer" => InverseKind::Outer,
            "reflexive" => InverseKind::Reflexive,
            "mp" | "moorepenrose" | "pinv" => InverseKind::MoorePenrose,
            "group" => InverseKind::Group,
            "drazin" => InverseKind::Drazin,
            "pq" => InverseKind::Pq,
            "mary" => InverseKind::Mary,
            _ => return Err(GinvError::Parse(format!("unknown inverse kind {s:?}"))),
        };
        Ok(k)
    }
}

/// The first condition that rules out existence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `rank(A) ≠ rank(A²)`.
    RankDrop,
    /// `N(AD) ⊄ N(D)`.
    NullspaceNotContained,
    /// `(AD)♯` does not exist.
    GroupInverseMissing,
    /// `dim A(M) < dim M`.
    ImageDimensionDrop { expected: usize, found: usize },
    /// `A(M) ⊕ N ≠ X`.
    NotComplementary,
    /// `rank p + rank q` differs from the dimension of the space.
    IncompatibleIdempotents,
    /// A defining identity fails for the only possible candidate.
    IdentityFails(&'static str),
    /// Inverse along the zero operator.
    ZeroDirection,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::RankDrop => f.write_str("rank(A) ≠ rank(A²)"),
            Obstruction::NullspaceNotContained => f.write_str("N(AD) is not contained in N(D)"),
            Obstruction::GroupInverseMissing => f.write_str("(AD)♯ does not exist: rank(AD) ≠ rank((AD)²)"),
            Obstruction::ImageDimensionDrop { expected, found } => {
                write!(f, "dim A(M) = {found} < dim M = {expected}")
            }
            Obstruction::NotComplementary => f.write_str("A(M) ⊕ N is not the whole space"),
            Obstruction::IncompatibleIdempotents => f.write_str("rank(p) + rank(q) ≠ n"),
            Obstruction::IdentityFails(id) => write!(f, "identity {id} fails for the unique candidate"),
            Obstruction::ZeroDirection => f.write_str("direction is the zero operator"),
        }
    }
}

/// Value-level answer to "does this inverse exist?".
#[derive(Debug, Clone, PartialEq)]
#[must_use]
pub enum Existence<T> {
    Exists(T),
    NotExists(Obstruction),
}

impl<T> Existence<T> {
    pub fn exists(&self) -> bool {
        matches!(self, Existence::Exists(_))
    }

    pub fn as_ref(&self) -> Existence<&T> {
        match self {
            Existence::Exists(v) => Existence::Exists(v),
            Existence::NotExists(o) => Existence::NotExists(o.clone()),
        }
    }

    pub fn into_option(self) -> Option<T> {
        match self {
            Existence::Exists(v) => Some(v),
            Existence::NotExists(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            Existence::Exists(_) => None,
            Existence::NotExists(o) => Some(o),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Existence<U> {
        match self {
            Existence::Exists(v) => Existence::Exists(f(v)),
            Existence::NotExists(o) => Existence::NotExists(o),
        }
    }

    #[track_caller]
    pub fn unwrap(self) -> T {
        match self {
            Existence::Exists(v) => v,
            Existence::NotExists(o) => panic!("inverse does not exist: {o}"),
        }
    }
}

fn require_square<F: Kernel>(op: &'static str, a: &Matrix<F>) -> Result<()> {
    if !a.is_square() {
        return Err(GinvError::NotSquare {
            op,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(())
}

fn require_same_shape<F: Kernel>(op: &'static str, a: &Matrix<F>, b: &Matrix<F>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(GinvError::ShapeMismatch {
            op,
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(())
}

/// An inner inverse `B` (`ABA = A`) in block form `diag(A₁⁻¹, W)` with
/// respect to the default complements of `N(A)` and `R(A)`. `w` maps the
/// complement of `R(A)` into `N(A)` in canonical coordinates and defaults
/// to zero.
pub fn inner_inverse<F: Kernel>(a: &Matrix<F>, w: Option<&Matrix<F>>, policy: &TolerancePolicy) -> Result<Matrix<F>> {
    let (n, m) = a.shape();
    let range = range_basis(a, policy);
    let kernel = nullspace_basis(a, policy);
    let r = range.dim();
    let w = match w {
        Some(w) => {
            if w.shape() != (m - r, n - r) {
                return Err(GinvError::ShapeMismatch {
                    op: "inner_inverse",
                    expected: format!("W of shape {}x{}", m - r, n - r),
                    found: format!("{}x{}", w.rows(), w.cols()),
                });
            }
            w.clone()
        }
        None => Matrix::zeros(m - r, n - r),
    };
    let domain_part = complement_of(&kernel, policy);
    let codomain_part = complement_of(&range, policy);
    let s = range.basis().hstack(codomain_part.basis())?;
    let s_inv = inverse(&s, policy)?;
    let coords = s_inv.mul(a).mul(domain_part.basis());
    let a1 = coords.row_range(0, r);
    let a1_inv = inverse(&a1, policy)?;
    let left = domain_part.basis().mul(&a1_inv);
    let right = kernel.basis().mul(&w);
    Ok(left.hstack(&right)?.mul(&s_inv))
}

/// The reflexive inverse with `R(B) = range` and `N(B) = nullspace`.
/// Requires `X = range ⊕ N(A)` on the domain side and
/// `X = R(A) ⊕ nullspace` on the codomain side.
pub fn reflexive_prescribed<F: Kernel>(
    a: &Matrix<F>,
    range: &Subspace<F>,
    nullspace: &Subspace<F>,
    policy: &TolerancePolicy,
) -> Result<Matrix<F>> {
    let kernel = nullspace_basis(a, policy);
    if !direct_sum_check(range, &kernel, policy)? {
        return Err(GinvError::Precondition("prescribed range is not a complement of N(A)".into()));
    }
    let image = range_basis(a, policy);
    if !direct_sum_check(&image, nullspace, policy)? {
        return Err(GinvError::Precondition("prescribed nullspace is not a complement of R(A)".into()));
    }
    match outer_prescribed(a, range, nullspace, policy)? {
        Existence::Exists(b) => Ok(b),
        Existence::NotExists(o) => Err(GinvError::Internal(format!("reflexive inverse missing: {o}"))),
    }
}

pub fn moore_penrose<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Matrix<F> {
    F::pseudo_inverse(a, policy)
}

/// `A♯ = F·(GF)⁻²·G` for a rank factorization `A = FG`.
pub fn group_inverse<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<Existence<Matrix<F>>> {
    require_square("group_inverse", a)?;
    let rf = linalg::rank_factorize(a, policy);
    if rf.rank == 0 {
        return Ok(Existence::Exists(Matrix::zeros(a.rows(), a.cols())));
    }
    let core = rf.g.mul(&rf.f);
    match inverse(&core, policy) {
        Ok(ci) => {
            let ci2 = ci.mul(&ci);
            Ok(Existence::Exists(rf.f.mul(&ci2).mul(&rf.g)))
        }
        Err(GinvError::Singular) => Ok(Existence::NotExists(Obstruction::RankDrop)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drazin<F: Kernel> {
    pub inverse: Matrix<F>,
    /// Least `k` with `rank(A^k) = rank(A^(k+1))`.
    pub index: usize,
}

/// Drazin inverse by repeated rank factorization of the core:
/// `A = F₁G₁`, `G₁F₁ = F₂G₂`, … until `GₖFₖ` is invertible, then
/// `A^D = F₁⋯Fₖ (GₖFₖ)^-(k+1) Gₖ⋯G₁`.
pub fn drazin<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<Drazin<F>> {
    require_square("drazin", a)?;
    let n = a.rows();
    let mut fs: Vec<Matrix<F>> = Vec::new();
    let mut gs: Vec<Matrix<F>> = Vec::new();
    let mut core = a.clone();
    let mut prev_rank = n;
    loop {
        let rf = linalg::rank_factorize(&core, policy);
        if rf.rank == prev_rank {
            break;
        }
        if rf.rank == 0 {
            return Ok(Drazin {
                inverse: Matrix::zeros(n, n),
                index: fs.len() + 1,
            });
        }
        prev_rank = rf.rank;
        core = rf.g.mul(&rf.f);
        fs.push(rf.f);
        gs.push(rf.g);
    }
    let index = fs.len();
    let core_inv = inverse(&core, policy)?;
    let mut middle = core_inv.clone();
    for _ in 0..index {
        middle = middle.mul(&core_inv);
    }
    let left = fs.iter().fold(Matrix::identity(n), |acc, f| acc.mul(f));
    let right = gs.iter().rev().fold(middle, |acc, g| acc.mul(g));
    Ok(Drazin {
        inverse: left.mul(&right),
        index,
    })
}

/// Drazin index alone.
pub fn drazin_index<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<usize> {
    Ok(drazin(a, policy)?.index)
}

/// The outer inverse with `R(B) = range` and `N(B) = nullspace`, computed as
/// `B = U(CAU)⁻¹C` where `U` spans `range` and `N(C) = nullspace`.
pub fn outer_prescribed<F: Kernel>(
    a: &Matrix<F>,
    range: &Subspace<F>,
    nullspace: &Subspace<F>,
    policy: &TolerancePolicy,
) -> Result<Existence<Matrix<F>>> {
    let (n, m) = a.shape();
    if range.ambient() != m {
        return Err(GinvError::DimensionMismatch(format!(
            "range subspace lives in dimension {}, A has {m} columns",
            range.ambient()
        )));
    }
    if nullspace.ambient() != n {
        return Err(GinvError::DimensionMismatch(format!(
            "nullspace subspace lives in dimension {}, A has {n} rows",
            nullspace.ambient()
        )));
    }
    let r = range.dim();
    if r + nullspace.dim() != n {
        return Err(GinvError::DimensionMismatch(format!(
            "dim range + dim nullspace = {} + {} ≠ {n}",
            r,
            nullspace.dim()
        )));
    }
    if r == 0 {
        return Ok(Existence::Exists(Matrix::zeros(m, n)));
    }
    let u = range.basis();
    let image = range.image(a, policy)?;
    if image.dim() < r {
        return Ok(Existence::NotExists(Obstruction::ImageDimensionDrop {
            expected: r,
            found: image.dim(),
        }));
    }
    if !direct_sum_check(&image, nullspace, policy)? {
        return Ok(Existence::NotExists(Obstruction::NotComplementary));
    }
    let c = nullspace_basis(&nullspace.basis().adjoint(), policy).basis().adjoint();
    let cau = c.mul(a).mul(u);
    match inverse(&cau, policy) {
        Ok(ci) => Ok(Existence::Exists(u.mul(&ci).mul(&c))),
        Err(GinvError::Singular) => Ok(Existence::NotExists(Obstruction::NotComplementary)),
        Err(e) => Err(e),
    }
}

fn mary_obstruction<F: Kernel>(
    a: &Matrix<F>,
    d: &Matrix<F>,
    policy: &TolerancePolicy,
) -> Result<std::result::Result<Matrix<F>, Obstruction>> {
    require_square("mary_inverse", a)?;
    require_same_shape("mary_inverse", a, d)?;
    if linalg::rank(d, policy) == 0 {
        return Ok(Err(Obstruction::ZeroDirection));
    }
    let ad = a.mul(d);
    if !subspace_contained(&nullspace_basis(&ad, policy), &nullspace_basis(d, policy), policy)? {
        return Ok(Err(Obstruction::NullspaceNotContained));
    }
    match group_inverse(&ad, policy)? {
        Existence::Exists(g) => Ok(Ok(g)),
        Existence::NotExists(_) => Ok(Err(Obstruction::GroupInverseMissing)),
    }
}

/// The inverse of `A` along `D`: `B = D(AD)♯`, which exists iff
/// `N(AD) ⊆ N(D)` and `(AD)♯` exists.
pub fn mary_inverse<F: Kernel>(a: &Matrix<F>, d: &Matrix<F>, policy: &TolerancePolicy) -> Result<Existence<Matrix<F>>> {
    Ok(match mary_obstruction(a, d, policy)? {
        Ok(ad_sharp) => Existence::Exists(d.mul(&ad_sharp)),
        Err(o) => Existence::NotExists(o),
    })
}

/// Range/nullspace conditions for invertibility along `T`, each evaluated
/// on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct MaryDiagnosis<F: Kernel> {
    /// `R(T)` and `N(T)` closed and complemented; always true for matrices.
    pub rn_closed_complemented: bool,
    /// `T ≠ 0`.
    pub direction_nonzero: bool,
    pub range_at: Subspace<F>,
    /// `R(AT) ⊕ N(T) = X`.
    pub direct_sum_holds: bool,
    /// `A|R(T) : R(T) → R(AT)` is invertible.
    pub reduction_invertible: bool,
    pub exists: bool,
}

pub fn mary_diagnose<F: Kernel>(a: &Matrix<F>, t: &Matrix<F>, policy: &TolerancePolicy) -> Result<MaryDiagnosis<F>> {
    require_square("mary_diagnose", a)?;
    require_same_shape("mary_diagnose", a, t)?;
    let range_t = range_basis(t, policy);
    let at = a.mul(t);
    let range_at = range_basis(&at, policy);
    let null_t = nullspace_basis(t, policy);
    let direct_sum_holds = direct_sum_check(&range_at, &null_t, policy)?;
    // onto by construction; injective iff the dimensions agree
    let reduction_invertible = range_at.dim() == range_t.dim();
    let direction_nonzero = range_t.dim() > 0;
    let rn_closed_complemented = true;
    Ok(MaryDiagnosis {
        rn_closed_complemented,
        direction_nonzero,
        range_at,
        direct_sum_holds,
        reduction_invertible,
        exists: rn_closed_complemented && direction_nonzero && direct_sum_holds && reduction_invertible,
    })
}

/// The Djordjevic-Wei `(p,q)`-inverse: `BAB = B`, `BA = p`, `I − AB = q`.
pub fn pq_inverse<F: Kernel>(
    a: &Matrix<F>,
    p: &Matrix<F>,
    q: &Matrix<F>,
    policy: &TolerancePolicy,
) -> Result<Existence<Matrix<F>>> {
    let (n, m) = a.shape();
    if p.shape() != (m, m) || q.shape() != (n, n) {
        return Err(GinvError::ShapeMismatch {
            op: "pq_inverse",
            expected: format!("p {m}x{m}, q {n}x{n}"),
            found: format!("p {}x{}, q {}x{}", p.rows(), p.cols(), q.rows(), q.cols()),
        });
    }
    if !is_idempotent(p, policy) {
        return Err(GinvError::NonIdempotent { which: "p" });
    }
    if !is_idempotent(q, policy) {
        return Err(GinvError::NonIdempotent { which: "q" });
    }
    let range_p = range_basis(p, policy);
    let range_q = range_basis(q, policy);
    if range_p.dim() + range_q.dim() != n {
        return Ok(Existence::NotExists(Obstruction::IncompatibleIdempotents));
    }
    let b = match outer_prescribed(a, &range_p, &range_q, policy)? {
        Existence::Exists(b) => b,
        Existence::NotExists(o) => return Ok(Existence::NotExists(o)),
    };
    if !matches_eq(&b.mul(a), p, policy) {
        return Ok(Existence::NotExists(Obstruction::IdentityFails("BA=p")));
    }
    let i_minus_ab = Matrix::identity(n).sub(&a.mul(&b));
    if !matches_eq(&i_minus_ab, q, policy) {
        return Ok(Existence::NotExists(Obstruction::IdentityFails("I-AB=q")));
    }
    Ok(Existence::Exists(b))
}

fn matches_eq<F: Kernel>(lhs: &Matrix<F>, rhs: &Matrix<F>, policy: &TolerancePolicy) -> bool {
    matrices_match(lhs, rhs, policy)
}

/// The idempotents attached to an inverse along `D`: `t = (AD)♯A`,
/// `p = Dt`, `q = I − tD`.
#[derive(Debug, Clone, PartialEq)]
pub struct DwIdempotents<F: Kernel> {
    pub p: Matrix<F>,
    pub q: Matrix<F>,
    pub t: Matrix<F>,
}

pub fn dw_idempotents<F: Kernel>(
    a: &Matrix<F>,
    d: &Matrix<F>,
    policy: &TolerancePolicy,
) -> Result<Existence<DwIdempotents<F>>> {
    let ad_sharp = match mary_obstruction(a, d, policy)? {
        Ok(g) => g,
        Err(o) => return Ok(Existence::NotExists(o)),
    };
    let n = a.rows();
    let t = ad_sharp.mul(a);
    let p = d.mul(&t);
    let q = Matrix::identity(n).sub(&t.mul(d));
    Ok(Existence::Exists(DwIdempotents { p, q, t }))
}

/// Result of the product formula `a^{(2)}_{p,q} = c(ac)♯`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFormula<F: Kernel> {
    /// `C·(AC)♯`.
    pub product: Matrix<F>,
    /// `a^{(2)}_{p,q}` computed directly.
    pub pq_inverse: Matrix<F>,
    /// The reflexive inverse of `C` with `Ct = p`, `tC = I − q`.
    pub t: Matrix<F>,
}

/// Computes `C·(AC)♯` under the hypotheses that `a^{(2)}_{p,q}` and
/// `c^{(1,2)}_{1−q,1−p}` exist, and checks it against the direct
/// `(p,q)`-inverse.
pub fn product_formula<F: Kernel>(
    a: &Matrix<F>,
    c: &Matrix<F>,
    p: &Matrix<F>,
    q: &Matrix<F>,
    policy: &TolerancePolicy,
) -> Result<ProductFormula<F>> {
    require_square("product_formula", a)?;
    require_same_shape("product_formula", a, c)?;
    let n = a.rows();
    let b = match pq_inverse(a, p, q, policy)? {
        Existence::Exists(b) => b,
        Existence::NotExists(o) => {
            return Err(GinvError::Precondition(format!("a^(2)_(p,q) does not exist: {o}")))
        }
    };
    let id = Matrix::identity(n);
    let t = match pq_inverse(c, &id.sub(q), &id.sub(p), policy)? {
        Existence::Exists(t) => t,
        Existence::NotExists(o) => {
            return Err(GinvError::Precondition(format!(
                "c^(1,2)_(1-q,1-p) does not exist: no outer inverse t with tC = I-q, Ct = p ({o})"
            )))
        }
    };
    if !matches_eq(&c.mul(&t).mul(c), c, policy) {
        return Err(GinvError::Precondition(format!(
            "witness t = {t} is not an inner inverse of C (CtC ≠ C)"
        )));
    }
    let ac = a.mul(c);
    let ac_sharp = match group_inverse(&ac, policy)? {
        Existence::Exists(g) => g,
        Existence::NotExists(_) => return Err(GinvError::Internal("AC is not group invertible".into())),
    };
    let product = c.mul(&ac_sharp);
    if !matches_eq(&product, &b, policy) {
        return Err(GinvError::Internal(format!("C(AC)♯ = {product} differs from a^(2)_(p,q) = {b}")));
    }
    Ok(ProductFormula {
        product,
        pq_inverse: b,
        t,
    })
}
