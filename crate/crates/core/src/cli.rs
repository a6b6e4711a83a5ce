//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and reports through the exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | the requested inverse does not exist |
//! | 3 | parse or usage error |
//! | 4 | numerical failure |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::certify::{self, CertContext, Certificate};
use crate::error::GinvError;
use crate::geninv::{self, Existence, InverseKind, Obstruction};
use crate::io::{self, AnyMatrix, MatrixFormat};
use crate::linalg::{self, Kernel, Subspace};
use crate::matrix::Matrix;
use crate::scalar::{format_complex, format_f64, Backend, Rational, TolerancePolicy};
use crate::spectral::{self, SpectralSet, DEFAULT_QUAD_POINTS};

type C = Complex64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EXISTS: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "ginv", version, about = "Generalized inverses with certificates")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Scalar backend; JSON rational input implies exact.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    /// Rank tolerance τ.
    #[arg(long, global = true, env = "GINV_TOL")]
    pub tol: Option<f64>,
    /// Print the certificate as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Initial number of contour quadrature points.
    #[arg(long, global = true, default_value_t = DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
    /// Also write the result matrix to this file (`.json` or Matrix Market).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moore-Penrose inverse.
    Mp { a: PathBuf },
    /// Group inverse.
    Group { a: PathBuf },
    /// Drazin inverse and index.
    Drazin { a: PathBuf },
    /// Inverse of A along D.
    Mary { a: PathBuf, d: PathBuf },
    /// Outer inverse with prescribed range and nullspace (basis files).
    Outer {
        a: PathBuf,
        #[arg(long)]
        range: PathBuf,
        #[arg(long)]
        nullspace: PathBuf,
    },
    /// (p,q)-inverse.
    Pq { a: PathBuf, p: PathBuf, q: PathBuf },
    /// Spectral projection for a disk or an explicit eigenvalue list.
    Specproj {
        a: PathBuf,
        #[arg(long, num_args = 3, value_names = ["CX", "CY", "R"], allow_negative_numbers = true, conflicts_with = "eigs", required_unless_present = "eigs")]
        disk: Option<Vec<f64>>,
        #[arg(long)]
        eigs: Option<PathBuf>,
    },
    /// Koliha-Drazin inverse and the inverse along the core projector.
    Kd { a: PathBuf },
    /// Existence conditions for the inverse of A along T.
    Diagnose { a: PathBuf, t: PathBuf },
    /// Certify a claimed inverse B of A.
    Certify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        kind: InverseKind,
        #[arg(long)]
        along: Option<PathBuf>,
        #[arg(long)]
        p: Option<PathBuf>,
        #[arg(long)]
        q: Option<PathBuf>,
        #[arg(long)]
        range: Option<PathBuf>,
        #[arg(long)]
        nullspace: Option<PathBuf>,
    },
    /// Write a random pair (A, D) for which the inverse along D exists.
    Plant {
        n: usize,
        r: usize,
        seed: u64,
        #[arg(long)]
        out_a: Option<PathBuf>,
        #[arg(long)]
        out_d: Option<PathBuf>,
    },
}

/// A terminating condition with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn not_exists(what: &str, o: &Obstruction) -> Self {
        Self {
            code: EXIT_NOT_EXISTS,
            message: format!("{what} does not exist: {o}"),
        }
    }
}

/// Exit code for a library fault.
pub fn exit_code(e: &GinvError) -> i32 {
    match e {
        GinvError::Singular
        | GinvError::SpectraOverlap
        | GinvError::NotSeparated { .. }
        | GinvError::EigenvalueOnContour { .. }
        | GinvError::InSpectrum(_)
        | GinvError::NoConvergence
        | GinvError::DegenerateDirection
        | GinvError::Internal(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

impl From<GinvError> for Failure {
    fn from(e: GinvError) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx<'w> {
    config: RunConfig,
    policy: TolerancePolicy,
    stdout: &'w mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> Outcome {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "ginv: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Outcome {
    let tau = cli.config.tol.unwrap_or(TolerancePolicy::DEFAULT_TAU);
    if !(tau > 0.0 && tau < 1.0 && tau.is_finite()) {
        return Err(Failure::usage(format!("--tol must lie in (0, 1), got {tau}")));
    }
    if cli.config.quad_points < 2 || cli.config.quad_points > spectral::MAX_QUAD_POINTS {
        return Err(Failure::usage(format!(
            "--quad-points must lie in [2, {}], got {}",
            spectral::MAX_QUAD_POINTS,
            cli.config.quad_points
        )));
    }
    let policy = TolerancePolicy::new(tau, TolerancePolicy::DEFAULT_EPS)?;
    let mut ctx = Ctx {
        config: cli.config,
        policy,
        stdout,
    };
    match cli.command {
        Command::Plant {
            n,
            r,
            seed,
            out_a,
            out_d,
        } => plant(&mut ctx, n, r, seed, out_a, out_d),
        Command::Specproj { a, disk, eigs } => specproj(&mut ctx, &a, disk, eigs),
        other => {
            let paths = input_paths(&other);
            let texts = paths
                .iter()
                .map(|p| {
                    std::fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let backend = choose_backend(&ctx.config, &texts)?;
            let mats = paths
                .iter()
                .zip(&texts)
                .map(|(p, t)| {
                    io::parse_matrix_str(t, backend).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            match backend {
                Backend::Exact => {
                    let ms = mats.iter().map(Rational::from_any).collect::<std::result::Result<Vec<_>, _>>()?;
                    dispatch(&mut ctx, other, ms)
                }
                Backend::Float => {
                    let ms = mats.iter().map(C::from_any).collect::<std::result::Result<Vec<_>, _>>()?;
                    for (p, m) in paths.iter().zip(&ms) {
                        if linalg::rank_is_ambiguous(m, &ctx.policy) {
                            return Err(Failure {
                                code: EXIT_NUMERICAL,
                                message: format!(
                                    "{}: numerical rank is ambiguous at tolerance {}",
                                    p.display(),
                                    format_f64(ctx.policy.tau)
                                ),
                            });
                        }
                    }
                    dispatch(&mut ctx, other, ms)
                }
            }
        }
    }
}

fn input_paths(cmd: &Command) -> Vec<PathBuf> {
    match cmd {
        Command::Mp { a } | Command::Group { a } | Command::Drazin { a } | Command::Kd { a } => vec![a.clone()],
        Command::Mary { a, d } => vec![a.clone(), d.clone()],
        Command::Diagnose { a, t } => vec![a.clone(), t.clone()],
        Command::Outer { a, range, nullspace } => vec![a.clone(), range.clone(), nullspace.clone()],
        Command::Pq { a, p, q } => vec![a.clone(), p.clone(), q.clone()],
        Command::Certify {
            a,
            b,
            along,
            p,
            q,
            range,
            nullspace,
            ..
        } => {
            let mut v = vec![a.clone(), b.clone()];
            for x in [along, p, q, range, nullspace].into_iter().flatten() {
                v.push(x.clone());
            }
            v
        }
        Command::Specproj { .. } | Command::Plant { .. } => Vec::new(),
    }
}

fn choose_backend(config: &RunConfig, texts: &[String]) -> std::result::Result<Backend, Failure> {
    let has_rational_json = texts.iter().any(|t| {
        t.trim_start().starts_with('{')
            && serde_json::from_str::<Value>(t)
                .ok()
                .and_then(|v| v.get("field").and_then(Value::as_str).map(|f| f == "rational"))
                .unwrap_or(false)
    });
    match (config.backend, has_rational_json) {
        (Some(BackendArg::Float), true) => Err(Failure::usage(
            "JSON rational input requires the exact backend; drop --backend float",
        )),
        (_, true) | (Some(BackendArg::Exact), false) => Ok(Backend::Exact),
        (_, false) => Ok(Backend::Float),
    }
}

/// Conversion from a parsed file into one backend.
trait FromAny: Kernel {
    fn from_any(m: &AnyMatrix) -> std::result::Result<Matrix<Self>, Failure>;
}

impl FromAny for Rational {
    fn from_any(m: &AnyMatrix) -> std::result::Result<Matrix<Self>, Failure> {
        m.to_exact().map_err(Failure::from)
    }
}

impl FromAny for C {
    fn from_any(m: &AnyMatrix) -> std::result::Result<Matrix<Self>, Failure> {
        Ok(m.to_float())
    }
}

fn write_out<F: Kernel>(ctx: &Ctx<'_>, m: &Matrix<F>) -> Outcome {
    if let Some(path) = &ctx.config.out {
        io::write_matrix(m, path, MatrixFormat::from_path(path))?;
    }
    Ok(())
}

fn residual_text(r: f64, backend: Backend) -> String {
    match backend {
        Backend::Exact => "exact".to_string(),
        Backend::Float => format!("residual {}", fmt_residual(r)),
    }
}

fn fmt_residual(r: f64) -> String {
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r:.1e}")
    }
}

fn verified_lines<F: Kernel>(cert: &Certificate<F>) -> String {
    let mut s = String::new();
    for (name, r) in &cert.identities {
        let _ = writeln!(s, "verified: {name} ({})", residual_text(*r, F::BACKEND));
    }
    for (name, ok) in &cert.subspace_checks {
        if *ok {
            let _ = writeln!(s, "verified: {name}");
        }
    }
    s
}

fn failing_checks<F: Kernel>(cert: &Certificate<F>) -> String {
    let mut bad: Vec<String> = cert
        .identities
        .iter()
        .filter(|(_, &r)| r.is_nan() || r > cert.tolerance || (F::BACKEND == Backend::Exact && r != 0.0))
        .map(|(k, r)| format!("{k} (residual {})", fmt_residual(*r)))
        .collect();
    bad.extend(cert.subspace_checks.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k.clone()));
    bad.join(", ")
}

/// Prints a computed inverse with its certificate; a failed certificate is
/// a numerical failure.
fn report<F: Kernel>(ctx: &mut Ctx<'_>, b: &Matrix<F>, mut cert: Certificate<F>, extra: &[String]) -> Outcome {
    write_out(ctx, b)?;
    let passed = cert.passed();
    let failing = failing_checks(&cert);
    if ctx.config.json {
        cert.witnesses.insert("B".into(), b.clone());
        let text = serde_json::to_string_pretty(&cert.to_json()).expect("JSON values serialize");
        ctx.emit(&format!("{text}\n"))?;
    } else {
        let mut s = format!("{b}\n");
        for line in extra {
            s.push_str(line);
            s.push('\n');
        }
        s.push_str(&verified_lines(&cert));
        ctx.emit(&s)?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_NUMERICAL,
            message: format!("computed result failed certification: {failing}"),
        })
    }
}

fn dispatch<F: Kernel>(ctx: &mut Ctx<'_>, cmd: Command, mut ms: Vec<Matrix<F>>) -> Outcome {
    let policy = ctx.policy;
    let a = ms.remove(0);
    match cmd {
        Command::Mp { .. } => {
            let b = geninv::moore_penrose(&a, &policy);
            let cert = certify::certify(&a, &b, InverseKind::MoorePenrose, &CertContext::empty(), &policy)?;
            report(ctx, &b, cert, &[])
        }
        Command::Group { .. } => match geninv::group_inverse(&a, &policy)? {
            Existence::Exists(b) => {
                let cert = certify::certify(&a, &b, InverseKind::Group, &CertContext::empty(), &policy)?;
                report(ctx, &b, cert, &[])
            }
            Existence::NotExists(o) => Err(Failure::not_exists("group inverse", &o)),
        },
        Command::Drazin { .. } => {
            let d = geninv::drazin(&a, &policy)?;
            let mut cc = CertContext::empty();
            cc.index = Some(d.index);
            let cert = certify::certify(&a, &d.inverse, InverseKind::Drazin, &cc, &policy)?;
            report(ctx, &d.inverse, cert, &[format!("index: {}", d.index)])
        }
        Command::Mary { .. } => {
            let d = ms.remove(0);
            match geninv::mary_inverse(&a, &d, &policy)? {
                Existence::Exists(b) => {
                    let cert = certify::certify(&a, &b, InverseKind::Mary, &CertContext::along(d), &policy)?;
                    report(ctx, &b, cert, &[])
                }
                Existence::NotExists(o) => Err(Failure::not_exists("inverse along D", &o)),
            }
        }
        Command::Outer { .. } => {
            let m = Subspace::span(&ms[0], &policy);
            let n = Subspace::span(&ms[1], &policy);
            match geninv::outer_prescribed(&a, &m, &n, &policy)? {
                Existence::Exists(b) => {
                    let cert = certify::certify(&a, &b, InverseKind::Outer, &CertContext::prescribed(m, n), &policy)?;
                    report(ctx, &b, cert, &[])
                }
                Existence::NotExists(o) => Err(Failure::not_exists("outer inverse with this range and nullspace", &o)),
            }
        }
        Command::Pq { .. } => {
            let (p, q) = (ms.remove(0), ms.remove(0));
            match geninv::pq_inverse(&a, &p, &q, &policy)? {
                Existence::Exists(b) => {
                    let cert = certify::certify(&a, &b, InverseKind::Pq, &CertContext::pq(p, q), &policy)?;
                    report(ctx, &b, cert, &[])
                }
                Existence::NotExists(o) => Err(Failure::not_exists("(p,q)-inverse", &o)),
            }
        }
        Command::Kd { .. } => kd(ctx, &a),
        Command::Diagnose { .. } => diagnose(ctx, &a, &ms[0]),
        Command::Certify {
            kind,
            along,
            p,
            q,
            range,
            nullspace,
            ..
        } => {
            let b = ms.remove(0);
            let mut rest = ms.into_iter();
            let mut cc = CertContext::empty();
            if along.is_some() {
                cc.along = rest.next();
            }
            if p.is_some() {
                cc.p = rest.next();
            }
            if q.is_some() {
                cc.q = rest.next();
            }
            if range.is_some() {
                cc.range = rest.next().map(|m| Subspace::span(&m, &policy));
            }
            if nullspace.is_some() {
                cc.nullspace = rest.next().map(|m| Subspace::span(&m, &policy));
            }
            certify_cmd(ctx, &a, &b, kind, &cc)
        }
        Command::Specproj { .. } | Command::Plant { .. } => unreachable!("handled before dispatch"),
    }
}

fn certify_cmd<F: Kernel>(ctx: &mut Ctx<'_>, a: &Matrix<F>, b: &Matrix<F>, kind: InverseKind, cc: &CertContext<F>) -> Outcome {
    let cert = certify::certify(a, b, kind, cc, &ctx.policy)?;
    if ctx.config.json {
        let text = serde_json::to_string_pretty(&cert.to_json()).expect("JSON values serialize");
        ctx.emit(&format!("{text}\n"))?;
    } else {
        let mut s = format!("kind: {}\n", cert.kind);
        for (name, r) in &cert.identities {
            let _ = writeln!(s, "identity {name}: {}", residual_text(*r, F::BACKEND));
        }
        for (name, ok) in &cert.subspace_checks {
            let _ = writeln!(s, "subspace {name}: {ok}");
        }
        let _ = writeln!(s, "verdict: {}", cert.verdict.as_str());
        ctx.emit(&s)?;
    }
    if cert.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_NUMERICAL,
            message: format!("certificate verdict FAIL: {}", failing_checks(&cert)),
        })
    }
}

fn kd<F: Kernel>(ctx: &mut Ctx<'_>, a: &Matrix<F>) -> Outcome {
    let policy = ctx.policy;
    let rep = spectral::verify_drazin_along_core(a, &policy)?;
    let mut cc = CertContext::empty();
    cc.index = Some(rep.index);
    let cert = certify::certify(a, &rep.koliha_drazin, InverseKind::Drazin, &cc, &policy)?;
    let mut extra = vec![format!("index: {}", rep.index)];
    if rep.degenerate {
        extra.push("note: A is nilpotent, the core projector is 0 and the inverse along it is excluded".into());
    } else if rep.equal {
        extra.push(format!(
            "verified: inverse along the projector onto K(A) along H0(A) equals A^D ({})",
            residual_text(rep.residual, F::BACKEND)
        ));
    } else {
        return Err(Failure {
            code: EXIT_NUMERICAL,
            message: format!(
                "inverse along the core projector differs from A^D (residual {})",
                fmt_residual(rep.residual)
            ),
        });
    }
    report(ctx, &rep.koliha_drazin, cert, &extra)
}

fn diagnose<F: Kernel>(ctx: &mut Ctx<'_>, a: &Matrix<F>, t: &Matrix<F>) -> Outcome {
    let d = geninv::mary_diagnose(a, t, &ctx.policy)?;
    if ctx.config.json {
        let v = json!({
            "rn_closed_complemented": d.rn_closed_complemented,
            "direction_nonzero": d.direction_nonzero,
            "range_at": io::matrix_to_json(d.range_at.basis()),
            "direct_sum_holds": d.direct_sum_holds,
            "reduction_invertible": d.reduction_invertible,
            "exists": d.exists,
        });
        let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        ctx.emit(&format!("{text}\n"))
    } else {
        let s = format!(
            "R(T) and N(T) closed and complemented: {}\nT nonzero: {}\ndim R(AT): {}\nR(AT) ⊕ N(T) = X: {}\nA restricted to R(T) -> R(AT) invertible: {}\nexists: {}\n",
            d.rn_closed_complemented,
            d.direction_nonzero,
            d.range_at.dim(),
            d.direct_sum_holds,
            d.reduction_invertible,
            d.exists
        );
        ctx.emit(&s)
    }
}

fn read_float(path: &Path) -> std::result::Result<Matrix<C>, Failure> {
    let m = io::parse_matrix(path, Backend::Float)?;
    Ok(m.to_float())
}

fn complex_list(v: &[C]) -> String {
    let items: Vec<String> = v.iter().map(format_complex).collect();
    format!("[{}]", items.join(", "))
}

fn specproj(ctx: &mut Ctx<'_>, a_path: &Path, disk: Option<Vec<f64>>, eigs: Option<PathBuf>) -> Outcome {
    let policy = ctx.policy;
    if ctx.config.backend == Some(BackendArg::Exact) {
        return Err(Failure::usage("specproj runs on the float backend only"));
    }
    let a = read_float(a_path)?;
    if !a.is_square() {
        return Err(GinvError::NotSquare {
            op: "specproj",
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let set = match (disk, eigs) {
        (Some(d), None) => SpectralSet::disk(&a, C::new(d[0], d[1]), d[2])?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let targets = io::parse_eigenvalue_list(&text)?;
            SpectralSet::targets(&a, &targets)?
        }
        _ => return Err(Failure::usage("give exactly one of --disk or --eigs")),
    };
    let proj = spectral::spectral_projection_schur(&a, &set, &policy)?;
    let p = &proj.matrix;
    let idem = p.mul(p).relative_residual(p);
    let comm = a.mul(p).relative_residual(&p.mul(&a));
    let mut identities = vec![("P^2=P".to_string(), idem), ("AP=PA".to_string(), comm)];
    let mut points = None;
    if let Some(contour) = set.contour(ctx.config.quad_points) {
        let cp = spectral::spectral_projection_contour(&a, &contour, &policy)?;
        let diff = cp.projector.matrix.sub(p).max_abs();
        identities.push(("P_schur=P_contour".to_string(), diff));
        points = Some(cp.points);
    }
    write_out(ctx, p)?;
    let failing: Vec<String> = identities
        .iter()
        .filter(|(name, r)| {
            let bound = if name == "P_schur=P_contour" { 1e-8 } else { policy.eps };
            r.is_nan() || *r > bound
        })
        .map(|(name, r)| format!("{name} (residual {})", fmt_residual(*r)))
        .collect();
    if ctx.config.json {
        let ids: serde_json::Map<String, Value> = identities.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let gap = if set.separation_gap.is_finite() {
            json!(set.separation_gap)
        } else {
            Value::Null
        };
        let v = json!({
            "projector": io::matrix_to_json(p),
            "lambda_members": set.lambda_members.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
            "complement_members": set.complement_members.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
            "separation_gap": gap,
            "quad_points": points,
            "identities": ids,
            "verdict": if failing.is_empty() { "PASS" } else { "FAIL" },
        });
        let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        ctx.emit(&format!("{text}\n"))?;
    } else {
        let mut s = format!("{p}\n");
        let _ = writeln!(s, "lambda: {}", complex_list(&set.lambda_members));
        let _ = writeln!(s, "complement: {}", complex_list(&set.complement_members));
        for (name, r) in &identities {
            let _ = writeln!(s, "verified: {name} (residual {})", fmt_residual(*r));
        }
        if let Some(n) = points {
            let _ = writeln!(s, "quadrature points: {n}");
        }
        ctx.emit(&s)?;
    }
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_NUMERICAL,
            message: format!("spectral projection failed its checks: {}", failing.join(", ")),
        })
    }
}

fn plant(ctx: &mut Ctx<'_>, n: usize, r: usize, seed: u64, out_a: Option<PathBuf>, out_d: Option<PathBuf>) -> Outcome {
    let (a, d) = certify::plant_mary_pair(n, r, seed).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(path) = &out_a {
        io::write_matrix(&a, path, MatrixFormat::from_path(path))?;
    }
    if let Some(path) = &out_d {
        io::write_matrix(&d, path, MatrixFormat::from_path(path))?;
    }
    if ctx.config.json {
        let v = json!({"A": io::matrix_to_json(&a), "D": io::matrix_to_json(&d)});
        let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        ctx.emit(&format!("{text}\n"))
    } else if out_a.is_none() && out_d.is_none() {
        ctx.emit(&format!("A = {a}\nD = {d}\n"))
    } else {
        Ok(())
    }
}
