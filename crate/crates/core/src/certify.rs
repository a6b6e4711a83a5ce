//! Identity-by-identity certificates for claimed inverses, the reflexive
//! witness behind inverses along an element, and seeded generators of
//! instances with known answers.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{GinvError, Result};
use crate::geninv::{self, Existence, InverseKind};
use crate::io::matrix_to_json;
use crate::linalg::{self, inverse, nullspace_basis, range_basis, subspace_equal, Kernel, Subspace};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Field, Rational, TolerancePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

/// Extra operands some kinds need.
#[derive(Debug, Clone)]
pub struct CertContext<F: Kernel> {
    /// Direction `D` for [`InverseKind::Mary`].
    pub along: Option<Matrix<F>>,
    pub p: Option<Matrix<F>>,
    pub q: Option<Matrix<F>>,
    /// Prescribed range for outer/reflexive checks.
    pub range: Option<Subspace<F>>,
    /// Prescribed nullspace for outer/reflexive checks.
    pub nullspace: Option<Subspace<F>>,
    /// Power in `A^kBA = A^k`; defaults to the Drazin index of `A`.
    pub index: Option<usize>,
}

impl<F: Kernel> CertContext<F> {
    pub fn along(d: Matrix<F>) -> Self {
        Self {
            along: Some(d),
            p: None,
            q: None,
            range: None,
            nullspace: None,
            index: None,
        }
    }

    pub fn pq(p: Matrix<F>, q: Matrix<F>) -> Self {
        Self {
            p: Some(p),
            q: Some(q),
            ..Self::empty()
        }
    }

    pub fn prescribed(range: Subspace<F>, nullspace: Subspace<F>) -> Self {
        Self {
            range: Some(range),
            nullspace: Some(nullspace),
            ..Self::empty()
        }
    }

    pub fn empty() -> Self {
        Self {
            along: None,
            p: None,
            q: None,
            range: None,
            nullspace: None,
            index: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<F: Kernel> {
    pub kind: InverseKind,
    /// Relative residual bound; zero under the exact backend, where
    /// identities must hold exactly.
    pub tolerance: f64,
    pub identities: BTreeMap<String, f64>,
    pub subspace_checks: BTreeMap<String, bool>,
    pub witnesses: BTreeMap<String, Matrix<F>>,
    pub verdict: Verdict,
}

impl<F: Kernel> Certificate<F> {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn max_residual(&self) -> f64 {
        self.identities.values().copied().fold(0.0, f64::max)
    }

    /// Canonical JSON with sorted keys.
    pub fn to_json(&self) -> Value {
        let identities: serde_json::Map<String, Value> =
            self.identities.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let checks: serde_json::Map<String, Value> =
            self.subspace_checks.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let witnesses: serde_json::Map<String, Value> =
            self.witnesses.iter().map(|(k, m)| (k.clone(), matrix_to_json(m))).collect();
        json!({
            "kind": self.kind.name(),
            "tolerance": self.tolerance,
            "identities": identities,
            "subspace_checks": checks,
            "witnesses": witnesses,
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Accumulates residuals and decides the verdict.
struct Builder<'p, F: Kernel> {
    policy: &'p TolerancePolicy,
    identities: BTreeMap<String, f64>,
    exact_ok: bool,
    subspace_checks: BTreeMap<String, bool>,
    witnesses: BTreeMap<String, Matrix<F>>,
}

impl<'p, F: Kernel> Builder<'p, F> {
    fn new(policy: &'p TolerancePolicy) -> Self {
        Self {
            policy,
            identities: BTreeMap::new(),
            exact_ok: true,
            subspace_checks: BTreeMap::new(),
            witnesses: BTreeMap::new(),
        }
    }

    /// Records `‖lhs − rhs‖_F / max(1, ‖lhs‖_F)`.
    fn identity(&mut self, name: &str, lhs: &Matrix<F>, rhs: &Matrix<F>) {
        let residual = if lhs.shape() != rhs.shape() {
            self.exact_ok = false;
            f64::INFINITY
        } else {
            if lhs != rhs {
                self.exact_ok = false;
            }
            lhs.relative_residual(rhs)
        };
        self.identities.insert(name.to_string(), residual);
    }

    fn subspaces(&mut self, name: &str, u: &Subspace<F>, v: &Subspace<F>) -> Result<()> {
        let ok = subspace_equal(u, v, self.policy)?;
        self.subspace_checks.insert(name.to_string(), ok);
        Ok(())
    }

    fn witness(&mut self, name: &str, m: Matrix<F>) {
        self.witnesses.insert(name.to_string(), m);
    }

    fn finish(self, kind: InverseKind) -> Certificate<F> {
        let tolerance = match F::BACKEND {
            Backend::Exact => 0.0,
            Backend::Float => self.policy.eps,
        };
        let identities_ok = match F::BACKEND {
            Backend::Exact => self.exact_ok,
            Backend::Float => self.identities.values().all(|&r| r <= tolerance),
        };
        let verdict = if identities_ok && self.subspace_checks.values().all(|&b| b) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Certificate {
            kind,
            tolerance,
            identities: self.identities,
            subspace_checks: self.subspace_checks,
            witnesses: self.witnesses,
            verdict,
        }
    }
}

fn check_shapes<F: Kernel>(a: &Matrix<F>, b: &Matrix<F>) -> Result<()> {
    if b.shape() != (a.cols(), a.rows()) {
        return Err(GinvError::ShapeMismatch {
            op: "certify",
            expected: format!("B of shape {}x{}", a.cols(), a.rows()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(())
}

fn require_square<F: Kernel>(a: &Matrix<F>) -> Result<()> {
    if !a.is_square() {
        return Err(GinvError::NotSquare {
            op: "certify",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(())
}

/// Evaluates the defining identities of `kind` for the pair `(A, B)`.
pub fn certify<F: Kernel>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    kind: InverseKind,
    ctx: &CertContext<F>,
    policy: &TolerancePolicy,
) -> Result<Certificate<F>> {
    check_shapes(a, b)?;
    let mut c = Builder::new(policy);
    let ab = a.mul(b);
    let ba = b.mul(a);
    let aba = ab.mul(a);
    let bab = ba.mul(b);
    match kind {
        InverseKind::Inner => c.identity("ABA=A", &aba, a),
        InverseKind::Outer | InverseKind::Reflexive => {
            if kind == InverseKind::Reflexive {
                c.identity("ABA=A", &aba, a);
            }
            c.identity("BAB=B", &bab, b);
            if let Some(m) = &ctx.range {
                c.subspaces("R(B)=M", &range_basis(b, policy), m)?;
            }
            if let Some(n) = &ctx.nullspace {
                c.subspaces("N(B)=N", &nullspace_basis(b, policy), n)?;
            }
        }
        InverseKind::MoorePenrose => {
            c.identity("ABA=A", &aba, a);
            c.identity("BAB=B", &bab, b);
            c.identity("(AB)*=AB", &ab.adjoint(), &ab);
            c.identity("(BA)*=BA", &ba.adjoint(), &ba);
        }
        InverseKind::Group => {
            require_square(a)?;
            c.identity("ABA=A", &aba, a);
            c.identity("BAB=B", &bab, b);
            c.identity("AB=BA", &ab, &ba);
        }
        InverseKind::Drazin => {
            require_square(a)?;
            let k = match ctx.index {
                Some(k) => k,
                None => geninv::drazin_index(a, policy)?,
            };
            let ak = a.pow(k);
            c.identity("A^kBA=A^k", &ak.mul(&ba), &ak);
            c.identity("BAB=B", &bab, b);
            c.identity("AB=BA", &ab, &ba);
        }
        InverseKind::Pq => {
            let p = ctx.p.as_ref().ok_or(GinvError::MissingContext("idempotent p"))?;
            let q = ctx.q.as_ref().ok_or(GinvError::MissingContext("idempotent q"))?;
            c.identity("BAB=B", &bab, b);
            c.identity("BA=p", &ba, p);
            c.identity("I-AB=q", &Matrix::identity(a.rows()).sub(&ab), q);
        }
        InverseKind::Mary => {
            require_square(a)?;
            let d = ctx.along.as_ref().ok_or(GinvError::MissingContext("direction D (--along)"))?;
            if d.shape() != a.shape() {
                return Err(GinvError::ShapeMismatch {
                    op: "certify",
                    expected: format!("D of shape {}x{}", a.rows(), a.cols()),
                    found: format!("{}x{}", d.rows(), d.cols()),
                });
            }
            c.identity("BAB=B", &bab, b);
            c.subspaces("R(B)=R(D)", &range_basis(b, policy), &range_basis(d, policy))?;
            c.subspaces("N(B)=N(D)", &nullspace_basis(b, policy), &nullspace_basis(d, policy))?;
            mary_witnesses(&mut c, a, b, d)?;
        }
    }
    Ok(c.finish(kind))
}

/// Factors exhibiting `R(B) = R(D)` and `N(B) = N(D)`: `S = B` with
/// `D = SAD`, and `L, U, V, W` with `B = LD = DU`, `D = VB = BW`.
fn mary_witnesses<F: Kernel>(c: &mut Builder<'_, F>, a: &Matrix<F>, b: &Matrix<F>, d: &Matrix<F>) -> Result<()> {
    let policy = c.policy;
    let d_pinv = F::pseudo_inverse(d, policy);
    let b_pinv = F::pseudo_inverse(b, policy);
    let s = b.clone();
    let l = b.mul(&d_pinv);
    let u = d_pinv.mul(b);
    let v = d.mul(&b_pinv);
    let w = b_pinv.mul(d);
    c.identity("D=SAD", &s.mul(a).mul(d), d);
    c.identity("B=LD", &l.mul(d), b);
    c.identity("B=DU", &d.mul(&u), b);
    c.identity("D=VB", &v.mul(b), d);
    c.identity("D=BW", &b.mul(&w), d);
    c.witness("S", s);
    c.witness("L", l);
    c.witness("U", u);
    c.witness("V", v);
    c.witness("W", w);
    if let Existence::Exists(ad_sharp) = geninv::group_inverse(&a.mul(d), policy)? {
        let t = ad_sharp.mul(a);
        c.identity("tDt=t", &t.mul(d).mul(&t), &t);
        c.identity("DtD=D", &d.mul(&t).mul(d), d);
        c.witness("t", t);
    }
    Ok(())
}

/// Builds `B = D(AD)♯` and the reflexive inverse `t = (AD)♯A` of `D`, and
/// certifies `tDt = t`, `DtD = D`, `BA = Dt`, `AB = tD`, `BAB = B`. When
/// `N(AD) ⊄ N(D)` the certificate fails.
pub fn reflexive_witness<F: Kernel>(a: &Matrix<F>, d: &Matrix<F>, policy: &TolerancePolicy) -> Result<Certificate<F>> {
    require_square(a)?;
    if d.shape() != a.shape() {
        return Err(GinvError::ShapeMismatch {
            op: "reflexive_witness",
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", d.rows(), d.cols()),
        });
    }
    let ad_sharp = match geninv::group_inverse(&a.mul(d), policy)? {
        Existence::Exists(g) => g,
        Existence::NotExists(_) => {
            return Err(GinvError::Precondition(
                "inverse along D does not exist: (AD)♯ is missing".into(),
            ))
        }
    };
    let b = d.mul(&ad_sharp);
    let t = ad_sharp.mul(a);
    let mut c = Builder::new(policy);
    c.identity("tDt=t", &t.mul(d).mul(&t), &t);
    c.identity("DtD=D", &d.mul(&t).mul(d), d);
    c.identity("BA=Dt", &b.mul(a), &d.mul(&t));
    c.identity("AB=tD", &a.mul(&b), &t.mul(d));
    c.identity("BAB=B", &b.mul(a).mul(&b), &b);
    c.subspaces("R(B)=R(D)", &range_basis(&b, policy), &range_basis(d, policy))?;
    c.subspaces("N(B)=N(D)", &nullspace_basis(&b, policy), &nullspace_basis(d, policy))?;
    c.witness("B", b);
    c.witness("t", t);
    Ok(c.finish(InverseKind::Mary))
}

fn rat(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// Unit lower times unit upper triangular with off-diagonal entries in
/// `{-1, 0, 1}`, sparse enough that the condition number stays moderate.
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    let off = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            rat(if rng.gen_bool(0.5) { 1 } else { -1 })
        } else {
            rat(0)
        }
    };
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Greater => off(rng),
        std::cmp::Ordering::Less => rat(0),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Less => off(rng),
        std::cmp::Ordering::Greater => rat(0),
    });
    l.mul(&u)
}

/// `L·diag(d)·U` with unimodular triangular factors and `|dᵢ| ∈ {1, 2, 3}`.
pub fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    let d: Vec<Rational> = (0..n)
        .map(|_| {
            let m = rng.gen_range(1..=3);
            rat(if rng.gen_bool(0.5) { m } else { -m })
        })
        .collect();
    let l = random_unimodular(n, rng);
    let u = random_unimodular(n, rng);
    l.mul(&Matrix::diag(&d)).mul(&u)
}

fn random_integer(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-2..=2)))
}

fn block2(a11: &Matrix<Rational>, a12: &Matrix<Rational>, a21: &Matrix<Rational>, a22: &Matrix<Rational>) -> Matrix<Rational> {
    let r = a11.rows();
    let c = a11.cols();
    let n = r + a21.rows();
    let m = c + a12.cols();
    Matrix::from_fn(n, m, |i, j| match (i < r, j < c) {
        (true, true) => a11[(i, j)].clone(),
        (true, false) => a12[(i, j - c)].clone(),
        (false, true) => a21[(i - r, j)].clone(),
        (false, false) => a22[(i - r, j - c)].clone(),
    })
}

/// A pair `(A, D)` of integer `n×n` matrices, `rank D = r`, for which the
/// inverse of `A` along `D` exists. With unimodular `S`, `R`:
/// `A = R·diag(A₁, A₂)·S⁻¹`, `D = S[:, :r]·K·(R⁻¹)[:r, :]` where `A₁`, `K`
/// are invertible. Then `A` maps `R(D)` onto `R[:, :r]`, which complements
/// `N(D) = span R[:, r:]`.
pub fn plant_mary_pair(n: usize, r: usize, seed: u64) -> Result<(Matrix<Rational>, Matrix<Rational>)> {
    if r == 0 || r > n {
        return Err(GinvError::Precondition(format!("need 1 ≤ r ≤ n, got n={n}, r={r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a1 = random_invertible(r, &mut rng);
    let a2 = random_integer(n - r, n - r, &mut rng);
    let core = block2(&a1, &Matrix::zeros(r, n - r), &Matrix::zeros(n - r, r), &a2);
    Ok(assemble(n, r, &core, &mut rng))
}

fn assemble(n: usize, r: usize, core: &Matrix<Rational>, rng: &mut ChaCha8Rng) -> (Matrix<Rational>, Matrix<Rational>) {
    let policy = TolerancePolicy::default();
    let s = random_unimodular(n, rng);
    let rr = random_unimodular(n, rng);
    let k = random_invertible(r, rng);
    let s_inv = inverse(&s, &policy).expect("unimodular");
    let r_inv = inverse(&rr, &policy).expect("unimodular");
    let a = rr.mul(core).mul(&s_inv);
    let d = s.columns(0, r).mul(&k).mul(&r_inv.row_range(0, r));
    (a, d)
}

/// A pair for which the inverse along `D` does not exist. Even seeds make
/// `A` shrink `R(D)` (`dim A·R(D) < r`); odd seeds keep the dimension but
/// push part of `A·R(D)` into `N(D)`.
pub fn plant_mary_negative(n: usize, r: usize, seed: u64) -> Result<(Matrix<Rational>, Matrix<Rational>)> {
    if r == 0 || r >= n {
        return Err(GinvError::Precondition(format!("need 1 ≤ r < n, got n={n}, r={r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // rank r−1 leading block with kernel spanned by the last unit vector of
    // its right factor
    let l = random_unimodular(r, &mut rng);
    let u = random_unimodular(r, &mut rng);
    let mut d = vec![rat(0); r];
    for (i, v) in d.iter_mut().enumerate().take(r - 1) {
        *v = rat(1 + (i as i64 % 2));
    }
    let a1 = l.mul(&Matrix::diag(&d)).mul(&u);
    let a2 = random_integer(n - r, n - r, &mut rng);
    let a21 = if seed % 2 == 1 {
        // C·x ≠ 0 on the kernel x = U⁻¹e_r of A₁
        let u_inv = inverse(&u, &TolerancePolicy::default()).expect("unimodular");
        let kernel = u_inv.columns(r - 1, r);
        let mut c = random_integer(n - r, r, &mut rng);
        if c.mul(&kernel).is_zero() {
            let row: Vec<Rational> = (0..r).map(|j| kernel[(j, 0)].clone()).collect();
            for (j, v) in row.into_iter().enumerate() {
                c[(0, j)] = v;
            }
        }
        c
    } else {
        Matrix::zeros(n - r, r)
    };
    let core = block2(&a1, &Matrix::zeros(r, n - r), &a21, &a2);
    Ok(assemble(n, r, &core, &mut rng))
}

/// `X·(T ⊕ N)·X⁻¹` with `X` unimodular, `T` upper triangular of size
/// `n − nil` with diagonal entries in `{±1, ±2, ±3}`, and `N` nilpotent of
/// size `nil` whose largest Jordan block has size `index`. The Drazin index
/// of the result is `index` (0 when `nil = 0`) and every nonzero eigenvalue
/// has modulus at least 1.
pub fn plant_core_nilpotent(n: usize, nil: usize, index: usize, seed: u64) -> Result<Matrix<Rational>> {
    if nil > n || (nil == 0) != (index == 0) || index > nil {
        return Err(GinvError::Precondition(format!(
            "need index ≤ nil ≤ n and index = 0 iff nil = 0, got n={n}, nil={nil}, index={index}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = n - nil;
    let t = Matrix::from_fn(m, m, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => {
            let v = rng.gen_range(1..=3);
            rat(if rng.gen_bool(0.5) { v } else { -v })
        }
        std::cmp::Ordering::Less => rat(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Greater => rat(0),
    });
    let mut nilp = Matrix::<Rational>::zeros(nil, nil);
    // first block of size `index`, then blocks of random size ≤ index
    let mut start = 0;
    let mut size = index;
    while start < nil {
        let len = size.min(nil - start);
        for i in start..start + len - 1 {
            nilp[(i, i + 1)] = rat(1);
        }
        start += len;
        size = rng.gen_range(1..=index.max(1));
    }
    let core = Matrix::block_diag(&t, &nilp);
    let x = random_unimodular(n, &mut rng);
    let x_inv = inverse(&x, &TolerancePolicy::default()).expect("unimodular");
    Ok(x.mul(&core).mul(&x_inv))
}

/// Whether `rank(A) = n` holds exactly.
pub fn is_invertible_exact(a: &Matrix<Rational>) -> bool {
    a.is_square() && linalg::rank(a, &TolerancePolicy::default()) == a.rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    type Q = Matrix<Rational>;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn j2() -> Q {
        Q::from_i64(&[&[0, 1], &[0, 0]])
    }

    fn d1() -> Q {
        Q::from_i64(&[&[2, 0], &[1, 0]])
    }

    #[test]
    fn mary_certificate_for_worked_example() {
        let cert = certify(&j2(), &d1(), InverseKind::Mary, &CertContext::along(d1()), &pol()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.max_residual(), 0.0);
        assert_eq!(cert.tolerance, 0.0);
        assert_eq!(cert.witnesses["t"], j2());
        assert_eq!(cert.witnesses["S"], d1());
        let json = cert.to_json();
        assert_eq!(json["verdict"], "PASS");
        assert_eq!(json["kind"], "mary");
    }

    #[test]
    fn group_certificate_for_identity() {
        let cert = certify(&Q::identity(2), &Q::identity(2), InverseKind::Group, &CertContext::empty(), &pol()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.identities.len(), 3);
    }

    #[test]
    fn perturbation_is_detected_at_its_own_scale() {
        let a = j2().to_complex();
        let mut b = d1().to_complex();
        b[(0, 1)] += Complex64::new(1e-6, 0.0);
        let ctx = CertContext::along(d1().to_complex());
        let cert = certify(&a, &b, InverseKind::Mary, &ctx, &pol()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        let r = cert.max_residual();
        assert!((1e-7..=1e-5).contains(&r), "max residual {r}");

        let mut bq = d1();
        bq[(0, 1)] = Rational::from_ratio(1, 1_000_000);
        let cert = certify(&j2(), &bq, InverseKind::Mary, &CertContext::along(d1()), &pol()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    #[test]
    fn missing_context_is_an_error() {
        let res = certify(&j2(), &d1(), InverseKind::Mary, &CertContext::empty(), &pol());
        assert!(matches!(res, Err(GinvError::MissingContext(_))));
        let res = certify(&j2(), &d1(), InverseKind::Pq, &CertContext::empty(), &pol());
        assert!(matches!(res, Err(GinvError::MissingContext(_))));
        let res = certify(&j2(), &Q::zeros(3, 2), InverseKind::Inner, &CertContext::empty(), &pol());
        assert!(matches!(res, Err(GinvError::ShapeMismatch { .. })));
    }

    #[test]
    fn reflexive_witness_examples() {
        let cert = reflexive_witness(&j2(), &d1(), &pol()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.witnesses["t"], j2());
        let cert = reflexive_witness(&Q::identity(2), &Q::identity(2), &pol()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.witnesses["t"], Q::identity(2));
        for seed in 0..5 {
            let (a, d) = plant_mary_pair(4, 2, seed).unwrap();
            assert!(reflexive_witness(&a, &d, &pol()).unwrap().passed());
        }
    }

    #[test]
    fn plant_examples() {
        for seed in 0..10 {
            let (a, d) = plant_mary_pair(2, 1, seed).unwrap();
            assert!(geninv::mary_diagnose(&a, &d, &pol()).unwrap().exists);
        }
        let (a, d) = plant_mary_pair(3, 3, 4).unwrap();
        assert!(is_invertible_exact(&a) && is_invertible_exact(&d));
        assert_eq!(plant_mary_pair(5, 2, 99).unwrap(), plant_mary_pair(5, 2, 99).unwrap());
        let (_, d) = plant_mary_pair(5, 2, 99).unwrap();
        assert_eq!(linalg::rank(&d, &pol()), 2);
        assert!(plant_mary_pair(2, 0, 1).is_err());
    }

    #[test]
    fn planted_negatives_fail_both_ways() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 5);
            let r = 1 + (seed as usize % (n - 1));
            let (a, d) = plant_mary_negative(n, r, seed).unwrap();
            assert!(!geninv::mary_inverse(&a, &d, &pol()).unwrap().exists(), "seed {seed}");
            if let Ok(cert) = reflexive_witness(&a, &d, &pol()) {
                assert!(!cert.passed());
            }
        }
    }

    #[test]
    fn core_nilpotent_plant_has_requested_index() {
        for (n, nil, index) in [(4, 0, 0), (4, 2, 1), (5, 3, 2), (6, 3, 3), (6, 4, 2)] {
            let a = plant_core_nilpotent(n, nil, index, 3).unwrap();
            assert_eq!(geninv::drazin(&a, &pol()).unwrap().index, index);
        }
    }

    #[test]
    fn product_formula_on_planted_pairs() {
        for seed in 0..6 {
            let (a, d) = plant_mary_pair(4, 2, seed).unwrap();
            let dw = geninv::dw_idempotents(&a, &d, &pol()).unwrap().unwrap();
            let r = geninv::product_formula(&a, &d, &dw.p, &dw.q, &pol()).unwrap();
            let b = geninv::mary_inverse(&a, &d, &pol()).unwrap().unwrap();
            assert_eq!(r.product, b);
            let rf = geninv::product_formula(&a.to_complex(), &d.to_complex(), &dw.p.to_complex(), &dw.q.to_complex(), &pol())
                .unwrap();
            assert!(rf.product.relative_difference(&b.to_complex()) < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn geninv_outputs_certify(seed in 0u64..10_000, n in 2usize..6) {
            let r = 1 + (seed as usize) % n;
            let (a, d) = plant_mary_pair(n, r, seed).unwrap();
            let p = pol();
            let b = geninv::mary_inverse(&a, &d, &p).unwrap().unwrap();
            prop_assert!(certify(&a, &b, InverseKind::Mary, &CertContext::along(d.clone()), &p).unwrap().passed());
            let bf = geninv::mary_inverse(&a.to_complex(), &d.to_complex(), &p).unwrap().unwrap();
            let cf = certify(&a.to_complex(), &bf, InverseKind::Mary, &CertContext::along(d.to_complex()), &p).unwrap();
            prop_assert!(cf.passed(), "{:?}", cf.identities);

            let mp = geninv::moore_penrose(&a, &p);
            prop_assert!(certify(&a, &mp, InverseKind::MoorePenrose, &CertContext::empty(), &p).unwrap().passed());
            let dz = geninv::drazin(&a, &p).unwrap();
            prop_assert!(certify(&a, &dz.inverse, InverseKind::Drazin, &CertContext::empty(), &p).unwrap().passed());
            let inner = geninv::inner_inverse(&a, None, &p).unwrap();
            prop_assert!(certify(&a, &inner, InverseKind::Inner, &CertContext::empty(), &p).unwrap().passed());
            let m = range_basis(&d, &p);
            let nn = nullspace_basis(&d, &p);
            let outer = geninv::outer_prescribed(&a, &m, &nn, &p).unwrap().unwrap();
            prop_assert!(certify(&a, &outer, InverseKind::Outer, &CertContext::prescribed(m, nn), &p).unwrap().passed());
            if let Existence::Exists(g) = geninv::group_inverse(&a, &p).unwrap() {
                prop_assert!(certify(&a, &g, InverseKind::Group, &CertContext::empty(), &p).unwrap().passed());
            }
            let dw = geninv::dw_idempotents(&a, &d, &p).unwrap().unwrap();
            let pq = geninv::pq_inverse(&a, &dw.p, &dw.q, &p).unwrap().unwrap();
            prop_assert!(certify(&a, &pq, InverseKind::Pq, &CertContext::pq(dw.p, dw.q), &p).unwrap().passed());
        }

        #[test]
        fn planted_violations_never_pass(seed in 0u64..10_000, i in 0usize..4, j in 0usize..4) {
            let (a, d) = plant_mary_pair(4, 2, seed).unwrap();
            let p = pol();
            let af = a.to_complex();
            let mut b = geninv::mary_inverse(&af, &d.to_complex(), &p).unwrap().unwrap();
            let bump = 1e-3 * b.frobenius_norm().max(1.0);
            b[(i, j)] += Complex64::new(bump, 0.0);
            let cert = certify(&af, &b, InverseKind::Mary, &CertContext::along(d.to_complex()), &p).unwrap();
            prop_assert!(!cert.passed());
        }
    }
}
