//! Eigenvalues, resolvents and spectral projections, the quasinilpotent
//! part / analytical core splitting, and Mary inverses along spectral
//! projections.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{GinvError, Result};
use crate::geninv::{self, Existence};
use crate::linalg::{
    self, inverse, nullspace_basis, projector_onto_along, range_basis, solve_triangular_sylvester, Kernel, Projector, Schur,
    Subspace,
};
use crate::matrix::Matrix;
use crate::scalar::{format_complex, TolerancePolicy};

type C = Complex64;

/// Minimum distance between an eigenvalue and a contour, and between the
/// two halves of a spectral set.
pub const CONTOUR_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_QUAD_POINTS: usize = 64;
pub const MAX_QUAD_POINTS: usize = 1024;
/// Successive quadrature refinements closer than this are accepted.
pub const QUAD_CONVERGENCE: f64 = 1e-10;
/// Relative radius inside which a computed eigenvalue is attributed to an
/// explicitly requested target. Defective eigenvalues split by roughly
/// `eps^(1/k)` under rounding, so this is far looser than the separation
/// tolerance.
pub const DEFAULT_CAPTURE: f64 = 1e-5;

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

fn by_re_im(x: &C, y: &C) -> std::cmp::Ordering {
    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
}

/// Eigenvalues with algebraic multiplicity, sorted by real then imaginary
/// part.
pub fn spectrum(a: &Matrix<C>) -> Result<Vec<C>> {
    let mut eig = Schur::new(a)?.eigenvalues();
    eig.sort_by(by_re_im);
    Ok(eig)
}

/// `(A − λI)⁻¹`.
pub fn resolvent(a: &Matrix<C>, lambda: C, policy: &TolerancePolicy) -> Result<Matrix<C>> {
    require_square("resolvent", a)?;
    let shifted = a.sub(&Matrix::identity(a.rows()).scale(&lambda));
    inverse(&shifted, policy).map_err(|e| match e {
        GinvError::Singular => GinvError::InSpectrum(format_complex(&lambda)),
        other => other,
    })
}

/// How the members of a spectral set are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Selector {
    /// Eigenvalues strictly inside the disk.
    Disk { center: C, radius: f64 },
    /// Eigenvalues within `capture` of one of the targets.
    Targets { targets: Vec<C>, capture: f64 },
}

impl Selector {
    pub fn contains(&self, lambda: C) -> bool {
        match self {
            Selector::Disk { center, radius } => (lambda - center).norm() < *radius,
            Selector::Targets { targets, capture } => targets.iter().any(|t| (lambda - t).norm() <= *capture),
        }
    }
}

/// A separated group of eigenvalues of a fixed matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSet {
    pub selector: Selector,
    pub lambda_members: Vec<C>,
    pub complement_members: Vec<C>,
    /// `+∞` when either group is empty.
    pub separation_gap: f64,
}

impl SpectralSet {
    /// Eigenvalues of `a` inside the open disk. Rejects eigenvalues within
    /// [`CONTOUR_TOLERANCE`] of the boundary.
    pub fn disk(a: &Matrix<C>, center: C, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GinvError::Precondition(format!("disk radius must be positive, got {radius}")));
        }
        let eig = spectrum(a)?;
        for &l in &eig {
            if ((l - center).norm() - radius).abs() <= CONTOUR_TOLERANCE {
                return Err(GinvError::EigenvalueOnContour {
                    eigenvalue: format_complex(&l),
                    threshold: CONTOUR_TOLERANCE,
                });
            }
        }
        Self::build(Selector::Disk { center, radius }, eig)
    }

    /// Eigenvalues of `a` near the given targets, with the default capture
    /// radius `DEFAULT_CAPTURE · max(1, ‖A‖_F)`.
    pub fn targets(a: &Matrix<C>, targets: &[C]) -> Result<Self> {
        let capture = DEFAULT_CAPTURE * a.frobenius_norm().max(1.0);
        Self::targets_with_capture(a, targets, capture)
    }

    pub fn targets_with_capture(a: &Matrix<C>, targets: &[C], capture: f64) -> Result<Self> {
        let eig = spectrum(a)?;
        Self::build(
            Selector::Targets {
                targets: targets.to_vec(),
                capture,
            },
            eig,
        )
    }

    /// The whole spectrum.
    pub fn all(a: &Matrix<C>) -> Result<Self> {
        let eig = spectrum(a)?;
        let targets = eig.clone();
        Self::build(Selector::Targets { targets, capture: 0.0 }, eig)
    }

    fn build(selector: Selector, eig: Vec<C>) -> Result<Self> {
        let (lambda_members, complement_members): (Vec<C>, Vec<C>) =
            eig.into_iter().partition(|&l| selector.contains(l));
        let mut gap = f64::INFINITY;
        for l in &lambda_members {
            for m in &complement_members {
                gap = gap.min((l - m).norm());
            }
        }
        if gap <= CONTOUR_TOLERANCE {
            return Err(GinvError::NotSeparated {
                gap,
                threshold: CONTOUR_TOLERANCE,
            });
        }
        Ok(Self {
            selector,
            lambda_members,
            complement_members,
            separation_gap: gap,
        })
    }

    pub fn contains(&self, lambda: C) -> bool {
        self.selector.contains(lambda)
    }

    /// A circle enclosing exactly the members, when the selector is a disk.
    pub fn contour(&self, points: usize) -> Option<Contour> {
        match self.selector {
            Selector::Disk { center, radius } => Some(Contour { center, radius, points }),
            Selector::Targets { .. } => None,
        }
    }
}

/// Circle `|λ − center| = radius` with an initial quadrature size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub center: C,
    pub radius: f64,
    pub points: usize,
}

impl Contour {
    pub fn new(center: C, radius: f64) -> Self {
        Self {
            center,
            radius,
            points: DEFAULT_QUAD_POINTS,
        }
    }
}

/// Spectral projection by reordering a Schur form so the selected
/// eigenvalues lead, then decoupling the blocks with one Sylvester solve:
/// `P = Q·[[I, Y], [0, 0]]·Qᴴ` with `T₁₁Y − YT₂₂ = T₁₂`.
pub fn spectral_projection_schur(a: &Matrix<C>, set: &SpectralSet, policy: &TolerancePolicy) -> Result<Projector<C>> {
    require_square("spectral_projection_schur", a)?;
    let n = a.rows();
    let mut schur = Schur::new(a)?;
    let select: Vec<bool> = schur.eigenvalues().into_iter().map(|l| set.contains(l)).collect();
    let k = schur.reorder(&select);
    let t = &schur.t;
    let y = if k == 0 || k == n {
        Matrix::zeros(k, n - k)
    } else {
        let t11 = t.block(0, k, 0, k);
        let t22 = t.block(k, n, k, n);
        let t12 = t.block(0, k, k, n);
        solve_triangular_sylvester(&t11, &t22, &t12, policy)?
    };
    let mut core = Matrix::<C>::zeros(n, n);
    for i in 0..k {
        core[(i, i)] = C::new(1.0, 0.0);
        for j in k..n {
            core[(i, j)] = y[(i, j - k)];
        }
    }
    let q = &schur.q;
    let p = q.mul(&core).mul(&q.adjoint());
    let range = Subspace::span(&q.columns(0, k), policy);
    let nullspace = nullspace_basis(&p, policy);
    Ok(Projector {
        matrix: p,
        range,
        nullspace,
    })
}

/// Result of the quadrature construction.
#[derive(Debug, Clone)]
pub struct ContourProjection {
    pub projector: Projector<C>,
    /// Number of nodes in the accepted rule.
    pub points: usize,
}

/// `P ≈ −(1/N)·Σⱼ R(λⱼ)·ρe^{iθⱼ}` on `N` equispaced nodes, doubling `N`
/// until successive rules agree to [`QUAD_CONVERGENCE`].
pub fn spectral_projection_contour(
    a: &Matrix<C>,
    contour: &Contour,
    policy: &TolerancePolicy,
) -> Result<ContourProjection> {
    require_square("spectral_projection_contour", a)?;
    if !(contour.radius > 0.0 && contour.radius.is_finite()) {
        return Err(GinvError::Precondition(format!(
            "contour radius must be positive, got {}",
            contour.radius
        )));
    }
    if contour.points < 2 {
        return Err(GinvError::Precondition("contour needs at least 2 quadrature points".into()));
    }
    for l in spectrum(a)? {
        if ((l - contour.center).norm() - contour.radius).abs() <= CONTOUR_TOLERANCE {
            return Err(GinvError::EigenvalueOnContour {
                eigenvalue: format_complex(&l),
                threshold: CONTOUR_TOLERANCE,
            });
        }
    }
    let n = a.rows();
    // sum over nodes 2πj/m for j ≡ offset (mod stride)
    let partial = |m: usize, offset: usize, stride: usize| -> Result<Matrix<C>> {
        let mut acc = Matrix::<C>::zeros(n, n);
        let mut j = offset;
        while j < m {
            let w = C::from_polar(contour.radius, 2.0 * PI * j as f64 / m as f64);
            let r = resolvent(a, contour.center + w, policy)?;
            acc = acc.add(&r.scale(&w));
            j += stride;
        }
        Ok(acc)
    };
    let mut m = contour.points;
    let mut sum = partial(m, 0, 1)?;
    let mut current = sum.scale(&C::new(-1.0 / m as f64, 0.0));
    loop {
        if m * 2 > MAX_QUAD_POINTS.max(contour.points) {
            return Err(GinvError::NoConvergence);
        }
        let odd = partial(2 * m, 1, 2)?;
        sum = sum.add(&odd);
        m *= 2;
        let next = sum.scale(&C::new(-1.0 / m as f64, 0.0));
        let diff = next.sub(&current).max_abs();
        current = next;
        if diff < QUAD_CONVERGENCE {
            break;
        }
    }
    Ok(ContourProjection {
        projector: Projector::from_matrix(current, policy),
        points: m,
    })
}

/// The splitting `X = K(A) ⊕ H₀(A)` with `H₀ = N(A^k)`, `K = R(A^k)`, `k`
/// the Drazin index.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<F: Kernel> {
    pub h0: Subspace<F>,
    pub core: Subspace<F>,
    pub index: usize,
}

pub fn decompose_h0_core<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<SpectralDecomposition<F>> {
    require_square("decompose_h0_core", a)?;
    let index = geninv::drazin_index(a, policy)?;
    let ak = a.pow(index);
    Ok(SpectralDecomposition {
        h0: nullspace_basis(&ak, policy),
        core: range_basis(&ak, policy),
        index,
    })
}

/// For matrices quasinilpotent means nilpotent, so this is the Drazin
/// inverse.
pub fn koliha_drazin<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<Matrix<F>> {
    Ok(geninv::drazin(a, policy)?.inverse)
}

/// Which projection the inverse was taken along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralBranch {
    /// `0 ∉ Λ`: along `P_Λ`.
    Projection,
    /// `0 ∈ Λ`: along `I − P_Λ`.
    Complement,
}

#[derive(Debug, Clone)]
pub struct SpectralMary {
    pub direction: Matrix<C>,
    pub inverse: Matrix<C>,
    pub branch: SpectralBranch,
}

/// Whether `0 ∈ Λ`: `A` is singular and its eigenvalue of least modulus
/// was selected.
pub fn zero_in_set(a: &Matrix<C>, set: &SpectralSet, policy: &TolerancePolicy) -> Result<bool> {
    if linalg::rank(a, policy) == a.rows() {
        return Ok(false);
    }
    let eig = spectrum(a)?;
    let smallest = eig
        .into_iter()
        .min_by(|x, y| x.norm().total_cmp(&y.norm()))
        .ok_or_else(|| GinvError::Internal("empty spectrum of a singular matrix".into()))?;
    Ok(set.contains(smallest))
}

/// The Mary inverse along `P_Λ(A)` when `0 ∉ Λ`, along `I − P_Λ(A)`
/// otherwise. Existence is guaranteed in both cases; a missing inverse is
/// reported as an internal error.
pub fn mary_along_spectral(a: &Matrix<C>, set: &SpectralSet, policy: &TolerancePolicy) -> Result<SpectralMary> {
    let proj = spectral_projection_schur(a, set, policy)?;
    let (direction, branch) = if zero_in_set(a, set, policy)? {
        (proj.complementary().matrix, SpectralBranch::Complement)
    } else {
        (proj.matrix, SpectralBranch::Projection)
    };
    if linalg::rank(&direction, policy) == 0 {
        return Err(GinvError::DegenerateDirection);
    }
    match geninv::mary_inverse(a, &direction, policy)? {
        Existence::Exists(inverse) => Ok(SpectralMary {
            direction,
            inverse,
            branch,
        }),
        Existence::NotExists(o) => Err(GinvError::Internal(format!(
            "inverse along a spectral projection must exist, got: {o}"
        ))),
    }
}

/// Outcome of comparing the inverse along `T` (onto `K(A)` along `H₀(A)`)
/// with the Koliha-Drazin inverse.
#[derive(Debug, Clone)]
pub struct KdReport<F: Kernel> {
    pub index: usize,
    pub direction: Matrix<F>,
    pub koliha_drazin: Matrix<F>,
    /// `None` when the direction is zero (nilpotent `A`).
    pub mary: Option<Matrix<F>>,
    pub degenerate: bool,
    /// `‖B − A^D‖_F / max(1, ‖B‖_F)`.
    pub residual: f64,
    pub equal: bool,
}

pub fn verify_drazin_along_core<F: Kernel>(a: &Matrix<F>, policy: &TolerancePolicy) -> Result<KdReport<F>> {
    let dec = decompose_h0_core(a, policy)?;
    let t = projector_onto_along(&dec.core, &dec.h0, policy)?.matrix;
    let kd = koliha_drazin(a, policy)?;
    if dec.core.is_zero() {
        return Ok(KdReport {
            index: dec.index,
            direction: t,
            koliha_drazin: kd,
            mary: None,
            degenerate: true,
            residual: 0.0,
            equal: false,
        });
    }
    let mary = match geninv::mary_inverse(a, &t, policy)? {
        Existence::Exists(b) => b,
        Existence::NotExists(o) => {
            return Err(GinvError::Internal(format!(
                "inverse along the core projector must exist, got: {o}"
            )))
        }
    };
    let residual = mary.relative_residual(&kd);
    let equal = linalg::matrices_match(&mary, &kd, policy);
    Ok(KdReport {
        index: dec.index,
        direction: t,
        koliha_drazin: kd,
        mary: Some(mary),
        degenerate: false,
        residual,
        equal,
    })
}

#[derive(Debug, Clone)]
pub struct KolihaPoonReport {
    pub radius: f64,
    /// `N(P_Λ)` for `Λ = σ(A) ∩ {|λ| < r}`.
    pub projection_nullspace: Subspace<C>,
    pub core: Subspace<C>,
    pub contained: bool,
}

pub fn verify_koliha_poon_inclusion(a: &Matrix<C>, r: f64, policy: &TolerancePolicy) -> Result<KolihaPoonReport> {
    let set = SpectralSet::disk(a, C::zero(), r)?;
    let proj = spectral_projection_schur(a, &set, policy)?;
    let dec = decompose_h0_core(a, policy)?;
    let contained = linalg::subspace_contained(&proj.nullspace, &dec.core, policy)?;
    Ok(KolihaPoonReport {
        radius: r,
        projection_nullspace: proj.nullspace,
        core: dec.core,
        contained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::subspace_equal;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = Matrix<C>;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn diag(v: &[f64]) -> M {
        M::diag(&v.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    fn jordan_plus(tail: &[f64]) -> M {
        let mut a = M::zeros(2 + tail.len(), 2 + tail.len());
        a[(0, 1)] = c(1.0);
        for (i, &v) in tail.iter().enumerate() {
            a[(i + 2, i + 2)] = c(v);
        }
        a
    }

    fn unit_basis(n: usize, idx: &[usize]) -> Subspace<C> {
        let b = M::from_fn(n, idx.len(), |i, j| if i == idx[j] { c(1.0) } else { C::zero() });
        Subspace::span(&b, &pol())
    }

    fn close(x: &M, y: &M, tol: f64) -> bool {
        x.sub(y).max_abs() <= tol
    }

    /// `X·diag(eigs)·X⁻¹` plus strictly upper coupling, with a
    /// well-conditioned random `X`.
    fn random_with_spectrum(eigs: &[C], rng: &mut ChaCha8Rng) -> M {
        let n = eigs.len();
        let mut t = M::diag(eigs);
        for i in 0..n {
            for j in i + 1..n {
                t[(i, j)] = C::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            }
        }
        let x = M::from_fn(n, n, |i, j| {
            let base = if i == j { c(2.0) } else { C::zero() };
            base + C::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
        });
        let xi = inverse(&x, &pol()).unwrap();
        x.mul(&t).mul(&xi)
    }

    #[test]
    fn spectrum_and_resolvent_examples() {
        let eig = spectrum(&diag(&[2.0, 1.0])).unwrap();
        assert!((eig[0] - c(1.0)).norm() < 1e-14 && (eig[1] - c(2.0)).norm() < 1e-14);
        let r = resolvent(&diag(&[1.0, 2.0]), C::zero(), &pol()).unwrap();
        assert!(close(&r, &diag(&[1.0, 0.5]), 1e-15));

        let eig = spectrum(&jordan_plus(&[])).unwrap();
        assert!(eig.iter().all(|l| l.norm() < 1e-12));

        let eig = spectrum(&M::from_f64(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((eig[0] - c(-1.0)).norm() < 1e-14 && (eig[1] - c(1.0)).norm() < 1e-14);

        assert!(matches!(
            resolvent(&diag(&[1.0, 2.0]), c(2.0), &pol()),
            Err(GinvError::InSpectrum(_))
        ));
    }

    #[test]
    fn schur_projection_examples() {
        let a = diag(&[0.0, 2.0]);
        let set = SpectralSet::targets(&a, &[C::zero()]).unwrap();
        let p = spectral_projection_schur(&a, &set, &pol()).unwrap();
        assert!(close(&p.matrix, &diag(&[1.0, 0.0]), 1e-14));

        let a = jordan_plus(&[2.0]);
        let set = SpectralSet::targets(&a, &[C::zero()]).unwrap();
        assert_eq!(set.lambda_members.len(), 2);
        let p = spectral_projection_schur(&a, &set, &pol()).unwrap();
        assert!(close(&p.matrix, &diag(&[1.0, 1.0, 0.0]), 1e-12));

        let set = SpectralSet::all(&a).unwrap();
        let p = spectral_projection_schur(&a, &set, &pol()).unwrap();
        assert!(close(&p.matrix, &M::identity(3), 1e-14));
    }

    #[test]
    fn contour_projection_examples() {
        let a = diag(&[0.0, 2.0]);
        let cp = spectral_projection_contour(&a, &Contour::new(C::zero(), 1.0), &pol()).unwrap();
        assert!(close(&cp.projector.matrix, &diag(&[1.0, 0.0]), 1e-10));

        let cp = spectral_projection_contour(&a, &Contour::new(c(1.0), 5.0), &pol()).unwrap();
        assert!(close(&cp.projector.matrix, &M::identity(2), 1e-10));

        let cp = spectral_projection_contour(&a, &Contour::new(c(10.0), 1.0), &pol()).unwrap();
        assert!(close(&cp.projector.matrix, &M::zeros(2, 2), 1e-10));

        assert!(matches!(
            spectral_projection_contour(&a, &Contour::new(C::zero(), 2.0), &pol()),
            Err(GinvError::EigenvalueOnContour { .. })
        ));
        assert!(matches!(
            SpectralSet::disk(&a, C::zero(), 2.0),
            Err(GinvError::EigenvalueOnContour { .. })
        ));
    }

    #[test]
    fn nearby_eigenvalues_are_not_a_spectral_set() {
        let a = diag(&[1.0, 1.0 + 1e-9]);
        let res = SpectralSet::targets_with_capture(&a, &[c(1.0)], 1e-10);
        assert!(matches!(res, Err(GinvError::NotSeparated { .. })));
    }

    #[test]
    fn routes_agree_on_random_separated_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=8 {
            let inner: Vec<C> = (0..n / 2)
                .map(|_| C::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect();
            let outer: Vec<C> = (0..n - n / 2)
                .map(|_| C::from_polar(rng.gen_range(1.5..3.0), rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect();
            let eigs: Vec<C> = inner.iter().chain(outer.iter()).copied().collect();
            let a = random_with_spectrum(&eigs, &mut rng);
            let set = SpectralSet::disk(&a, C::zero(), 1.1).unwrap();
            assert_eq!(set.lambda_members.len(), n / 2);
            let ps = spectral_projection_schur(&a, &set, &pol()).unwrap().matrix;
            let pc = spectral_projection_contour(&a, &set.contour(64).unwrap(), &pol())
                .unwrap()
                .projector
                .matrix;
            assert!(close(&ps, &pc, 1e-8), "n={n}");
            assert!(ps.mul(&ps).relative_residual(&ps) < 1e-9);
            assert!(a.mul(&ps).relative_residual(&ps.mul(&a)) < 1e-9);

            // compressed spectrum equals Λ
            let u = range_basis(&ps, &pol());
            let compressed = u.basis().adjoint().mul(&a).mul(u.basis());
            let mut got = spectrum(&compressed).unwrap();
            let mut want = set.lambda_members.clone();
            got.sort_by(by_re_im);
            want.sort_by(by_re_im);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-9);
            }

            let comp = SpectralSet::targets_with_capture(&a, &set.complement_members, 1e-9).unwrap();
            let pq = spectral_projection_schur(&a, &comp, &pol()).unwrap().matrix;
            assert!(ps.add(&pq).relative_residual(&M::identity(n)) < 1e-9);
        }
    }

    #[test]
    fn h0_core_examples() {
        let inv = M::from_f64(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let d = decompose_h0_core(&inv, &pol()).unwrap();
        assert!(d.h0.is_zero() && d.core.dim() == 2 && d.index == 0);

        let d = decompose_h0_core(&jordan_plus(&[]), &pol()).unwrap();
        assert!(d.core.is_zero() && d.h0.dim() == 2 && d.index == 2);

        let a = jordan_plus(&[2.0]);
        let d = decompose_h0_core(&a, &pol()).unwrap();
        assert_eq!(d.index, 2);
        assert!(subspace_equal(&d.h0, &unit_basis(3, &[0, 1]), &pol()).unwrap());
        assert!(subspace_equal(&d.core, &unit_basis(3, &[2]), &pol()).unwrap());

        // exact backend
        let q = Matrix::<Rational>::from_i64(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        let d = decompose_h0_core(&q, &pol()).unwrap();
        assert_eq!((d.h0.dim(), d.core.dim(), d.index), (2, 1, 2));
    }

    #[test]
    fn koliha_drazin_examples() {
        assert!(koliha_drazin(&jordan_plus(&[]), &pol()).unwrap().is_zero());
        let inv = M::from_f64(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let kd = koliha_drazin(&inv, &pol()).unwrap();
        assert!(close(&kd, &M::from_f64(&[&[1.0, -1.0], &[-1.0, 2.0]]), 1e-14));
        let kd = koliha_drazin(&jordan_plus(&[2.0]), &pol()).unwrap();
        assert!(close(&kd, &diag(&[0.0, 0.0, 0.5]), 1e-14));
    }

    #[test]
    fn mary_along_spectral_examples() {
        let a = diag(&[1.0, 2.0]);
        let set = SpectralSet::targets(&a, &[c(1.0)]).unwrap();
        let m = mary_along_spectral(&a, &set, &pol()).unwrap();
        assert_eq!(m.branch, SpectralBranch::Projection);
        assert!(close(&m.inverse, &diag(&[1.0, 0.0]), 1e-14));

        let a = diag(&[0.0, 2.0]);
        let set = SpectralSet::targets(&a, &[C::zero()]).unwrap();
        let m = mary_along_spectral(&a, &set, &pol()).unwrap();
        assert_eq!(m.branch, SpectralBranch::Complement);
        assert!(close(&m.direction, &diag(&[0.0, 1.0]), 1e-14));
        assert!(close(&m.inverse, &diag(&[0.0, 0.5]), 1e-14));

        let inv = M::from_f64(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let set = SpectralSet::all(&inv).unwrap();
        let m = mary_along_spectral(&inv, &set, &pol()).unwrap();
        assert!(close(&m.inverse, &M::from_f64(&[&[1.0, -1.0], &[-1.0, 2.0]]), 1e-12));

        let set = SpectralSet::all(&a).unwrap();
        assert_eq!(mary_along_spectral(&a, &set, &pol()).unwrap_err(), GinvError::DegenerateDirection);
    }

    #[test]
    fn nonzero_part_recovers_drazin() {
        let a = jordan_plus(&[2.0, -1.0]);
        let set = SpectralSet::targets(&a, &[c(2.0), c(-1.0)]).unwrap();
        let m = mary_along_spectral(&a, &set, &pol()).unwrap();
        let d = geninv::drazin(&a, &pol()).unwrap().inverse;
        assert!(m.inverse.relative_difference(&d) < 1e-9);
    }

    #[test]
    fn drazin_along_core_examples() {
        let r = verify_drazin_along_core(&jordan_plus(&[2.0]), &pol()).unwrap();
        assert!(r.equal && !r.degenerate && r.residual < 1e-12);

        let r = verify_drazin_along_core(&jordan_plus(&[]), &pol()).unwrap();
        assert!(r.degenerate && r.mary.is_none());

        // index one: inverse along the core projector is the group inverse
        let mut t = diag(&[0.0, 0.0, 1.0, -2.0, 3.0]);
        t[(0, 3)] = c(0.25);
        t[(2, 4)] = c(-0.5);
        let x = M::from_fn(5, 5, |i, j| {
            let base = if i == j { c(2.0) } else { C::zero() };
            base + C::new(((i * 7 + j * 3) % 5) as f64 * 0.1 - 0.2, ((i + 2 * j) % 3) as f64 * 0.1)
        });
        let a = x.mul(&t).mul(&inverse(&x, &pol()).unwrap());
        let r = verify_drazin_along_core(&a, &pol()).unwrap();
        assert_eq!(r.index, 1);
        assert!(r.equal);
        let g = geninv::group_inverse(&a, &pol()).unwrap().unwrap();
        assert!(r.mary.unwrap().relative_difference(&g) < 1e-9);
    }

    #[test]
    fn koliha_poon_examples() {
        let r = verify_koliha_poon_inclusion(&diag(&[0.0, 2.0]), 1.0, &pol()).unwrap();
        assert!(r.contained);
        assert!(subspace_equal(&r.projection_nullspace, &unit_basis(2, &[1]), &pol()).unwrap());

        let inv = diag(&[3.0, -4.0]);
        let r = verify_koliha_poon_inclusion(&inv, 1.0, &pol()).unwrap();
        assert!(r.contained && r.projection_nullspace.dim() == 2);

        let a = jordan_plus(&[2.0, 3.0]);
        let r = verify_koliha_poon_inclusion(&a, 2.5, &pol()).unwrap();
        assert!(r.contained);
        assert!(subspace_equal(&r.projection_nullspace, &unit_basis(4, &[3]), &pol()).unwrap());
        assert!(subspace_equal(&r.core, &unit_basis(4, &[2, 3]), &pol()).unwrap());

        assert!(verify_koliha_poon_inclusion(&a, 2.0, &pol()).is_err());
    }

    #[test]
    fn commuting_projectors_with_inverse_land_in_core() {
        let a = diag(&[2.0, 0.0, -1.0, 5.0]);
        for mask in [[1.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0], [1.0, 0.0, 1.0, 1.0]] {
            let p = diag(&mask);
            assert!(a.mul(&p).relative_difference(&p.mul(&a)) == 0.0);
            assert!(geninv::mary_inverse(&a, &p, &pol()).unwrap().exists());
            let core = decompose_h0_core(&a, &pol()).unwrap().core;
            assert!(linalg::subspace_contained(&range_basis(&p, &pol()), &core, &pol()).unwrap());
        }
        // a commuting projector meeting H₀ is not a valid direction
        let p = diag(&[0.0, 1.0, 0.0, 0.0]);
        assert!(!geninv::mary_inverse(&a, &p, &pol()).unwrap().exists());
    }
}
