//! Matrix Market array files and the JSON rational format.
//!
//! Matrix Market files carry column-major entries after the size line;
//! only the `array` layout with `real` or `complex` values is supported.
//! JSON files look like
//! `{"cols":2,"data":[["1/3","0"],["2","-1/2"]],"field":"rational","rows":2}`;
//! `"field":"real"` stores plain numbers and `"field":"complex"` stores
//! `[re, im]` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{GinvError, Result};
use crate::matrix::Matrix;
use crate::scalar::{format_f64, parse_decimal_exact, parse_rational, Backend, Field, Rational, Scalar};

type C = Complex64;

const MM_REAL: &str = "%%MatrixMarket matrix array real general";
const MM_COMPLEX: &str = "%%MatrixMarket matrix array complex general";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    JsonRational,
}

impl MatrixFormat {
    /// `.json` selects JSON; anything else Matrix Market.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => MatrixFormat::JsonRational,
            _ => MatrixFormat::MatrixMarket,
        }
    }

    /// Detects the format from file contents.
    pub fn sniff(text: &str) -> Result<Self> {
        let t = text.trim_start();
        if t.starts_with("%%MatrixMarket") {
            Ok(MatrixFormat::MatrixMarket)
        } else if t.starts_with('{') {
            Ok(MatrixFormat::JsonRational)
        } else {
            Err(GinvError::Parse("unrecognized matrix file: expected a Matrix Market header or a JSON object".into()))
        }
    }
}

/// A matrix whose backend was decided while reading.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(Matrix<Rational>),
    Float(Matrix<C>),
}

impl AnyMatrix {
    pub fn backend(&self) -> Backend {
        match self {
            AnyMatrix::Exact(_) => Backend::Exact,
            AnyMatrix::Float(_) => Backend::Float,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Exact(m) => m.shape(),
            AnyMatrix::Float(m) => m.shape(),
        }
    }

    pub fn to_float(&self) -> Matrix<C> {
        match self {
            AnyMatrix::Exact(m) => m.to_complex(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }

    /// The exact value of a real float matrix (every double is a dyadic
    /// rational).
    pub fn to_exact(&self) -> Result<Matrix<Rational>> {
        match self {
            AnyMatrix::Exact(m) => Ok(m.clone()),
            AnyMatrix::Float(m) => {
                let mut data = Vec::with_capacity(m.rows() * m.cols());
                for z in m.as_slice() {
                    if z.im != 0.0 {
                        return Err(GinvError::WrongBackend("float (complex entries)"));
                    }
                    data.push(
                        Rational::from_float(z.re)
                            .ok_or_else(|| GinvError::Parse(format!("non-finite entry {}", z.re)))?,
                    );
                }
                Matrix::from_vec(m.rows(), m.cols(), data)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMatrix::Exact(m) => matrix_to_json(m),
            AnyMatrix::Float(m) => matrix_to_json(m),
        }
    }
}

impl std::fmt::Display for AnyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyMatrix::Exact(m) => write!(f, "{m}"),
            AnyMatrix::Float(m) => write!(f, "{m}"),
        }
    }
}

/// JSON document for a matrix: rational strings under the exact backend;
/// plain numbers (`"field":"real"`) or `[re, im]` pairs under the float
/// backend.
pub fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    let real = m.as_slice().iter().all(|x| x.to_c64().im == 0.0);
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                m.row(i)
                    .iter()
                    .map(|x| match x.clone().into_scalar() {
                        Scalar::Exact(q) => Value::String(q.to_string()),
                        Scalar::Float(z) if real => json!(z.re),
                        Scalar::Float(z) => json!([z.re, z.im]),
                    })
                    .collect(),
            )
        })
        .collect();
    let field = match F::BACKEND {
        Backend::Exact => "rational",
        Backend::Float if real => "real",
        Backend::Float => "complex",
    };
    json!({"rows": m.rows(), "cols": m.cols(), "data": rows, "field": field})
}

fn json_usize(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| GinvError::Parse(format!("missing or invalid {key:?}")))
}

pub fn matrix_from_json(v: &Value) -> Result<AnyMatrix> {
    let rows = json_usize(v, "rows")?;
    let cols = json_usize(v, "cols")?;
    let field = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| GinvError::Parse("missing \"field\"".into()))?;
    let data = v
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| GinvError::Parse("missing \"data\" array".into()))?;
    if data.len() != rows {
        return Err(GinvError::Parse(format!("expected {rows} rows, found {}", data.len())));
    }
    let mut rats = Vec::new();
    let mut floats = Vec::new();
    for (i, row) in data.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| GinvError::Parse(format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(GinvError::Parse(format!("ragged row {i}: expected {cols} entries, found {}", row.len())));
        }
        for x in row {
            match field {
                "rational" => {
                    let s = x
                        .as_str()
                        .ok_or_else(|| GinvError::Parse(format!("rational entries must be strings, found {x}")))?;
                    rats.push(parse_rational(s)?);
                }
                "real" => {
                    let re = x.as_f64().ok_or_else(|| GinvError::Parse(format!("bad number {x}")))?;
                    floats.push(C::new(re, 0.0));
                }
                "complex" => {
                    let pair = x.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        GinvError::Parse(format!("complex entries must be [re, im] pairs, found {x}"))
                    })?;
                    let re = pair[0].as_f64().ok_or_else(|| GinvError::Parse(format!("bad number {}", pair[0])))?;
                    let im = pair[1].as_f64().ok_or_else(|| GinvError::Parse(format!("bad number {}", pair[1])))?;
                    floats.push(C::new(re, im));
                }
                other => return Err(GinvError::Parse(format!("unsupported field {other:?}"))),
            }
        }
    }
    if field == "rational" {
        Ok(AnyMatrix::Exact(Matrix::from_vec(rows, cols, rats)?))
    } else {
        Ok(AnyMatrix::Float(Matrix::from_vec(rows, cols, floats)?))
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let x: f64 = s.parse().map_err(|_| GinvError::Parse(format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(GinvError::Parse(format!("non-finite entry {s:?}")));
    }
    Ok(x)
}

/// Parses a Matrix Market array file. Under the exact backend decimal
/// entries are read as exact rationals.
pub fn parse_matrix_market(text: &str, backend: Backend) -> Result<AnyMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| GinvError::Parse("empty file".into()))?.trim();
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(GinvError::Parse(format!("malformed Matrix Market header {header:?}")));
    }
    if tokens[2] != "array" {
        return Err(GinvError::Parse(format!(
            "unsupported Matrix Market layout {:?}: only \"array\" is supported",
            tokens[2]
        )));
    }
    let complex = match tokens[3].as_str() {
        "real" | "integer" => false,
        "complex" => true,
        other => return Err(GinvError::Parse(format!("unsupported Matrix Market field {other:?}"))),
    };
    if tokens[4] != "general" {
        return Err(GinvError::Parse(format!("unsupported Matrix Market symmetry {:?}", tokens[4])));
    }
    if complex && backend == Backend::Exact {
        return Err(GinvError::WrongBackend("float"));
    }
    let mut body = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size = body.next().ok_or_else(|| GinvError::Parse("missing size line".into()))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(GinvError::Parse(format!("malformed size line {size:?}")));
    }
    let rows: usize = dims[0].parse().map_err(|_| GinvError::Parse(format!("bad row count {:?}", dims[0])))?;
    let cols: usize = dims[1].parse().map_err(|_| GinvError::Parse(format!("bad column count {:?}", dims[1])))?;
    let width = if complex { 2 } else { 1 };
    let entries: Vec<&str> = body.collect();
    if entries.len() != rows * cols {
        return Err(GinvError::Parse(format!("expected {} entries, found {}", rows * cols, entries.len())));
    }
    let mut exact = vec![Rational::zero(); rows * cols];
    let mut float = vec![C::zero(); rows * cols];
    for (k, line) in entries.iter().enumerate() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != width {
            return Err(GinvError::Parse(format!("entry {}: expected {width} value(s), found {line:?}", k + 1)));
        }
        // column-major
        let (i, j) = (k % rows.max(1), k / rows.max(1));
        let idx = i * cols + j;
        match backend {
            Backend::Exact => exact[idx] = parse_decimal_exact(parts[0])?,
            Backend::Float => {
                let re = parse_f64(parts[0])?;
                let im = if complex { parse_f64(parts[1])? } else { 0.0 };
                float[idx] = C::new(re, im);
            }
        }
    }
    Ok(match backend {
        Backend::Exact => AnyMatrix::Exact(Matrix::from_vec(rows, cols, exact)?),
        Backend::Float => AnyMatrix::Float(Matrix::from_vec(rows, cols, float)?),
    })
}

/// Parses either supported format. JSON rational input is always exact.
pub fn parse_matrix_str(text: &str, backend: Backend) -> Result<AnyMatrix> {
    match MatrixFormat::sniff(text)? {
        MatrixFormat::MatrixMarket => parse_matrix_market(text, backend),
        MatrixFormat::JsonRational => {
            let v: Value = serde_json::from_str(text).map_err(|e| GinvError::Parse(format!("invalid JSON: {e}")))?;
            matrix_from_json(&v)
        }
    }
}

pub fn parse_matrix(path: &Path, backend: Backend) -> Result<AnyMatrix> {
    let text = fs::read_to_string(path).map_err(|e| GinvError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_str(&text, backend).map_err(|e| match e {
        GinvError::Parse(msg) => GinvError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Exact decimal expansion of `q` when its denominator has only the
/// prime factors 2 and 5.
fn terminating_decimal(q: &Rational) -> Option<String> {
    use num_bigint::BigInt;
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10), digits as usize));
    let n = scaled.to_integer();
    if digits == 0 {
        return Some(n.to_string());
    }
    let negative = n < BigInt::zero();
    let s = (if negative { -n } else { n }).to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int_part, frac_part) = s.split_at(s.len() - digits as usize);
    let frac = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    Some(if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    })
}

/// Matrix Market text. Exact entries must have terminating decimal
/// expansions; use JSON for other rationals.
pub fn format_matrix_market<F: Field>(m: &Matrix<F>) -> Result<String> {
    let complex = F::BACKEND == Backend::Float && m.as_slice().iter().any(|x| x.to_c64().im != 0.0);
    let mut out = String::new();
    out.push_str(if complex { MM_COMPLEX } else { MM_REAL });
    out.push('\n');
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            match m[(i, j)].clone().into_scalar() {
                Scalar::Exact(q) => {
                    let s = terminating_decimal(&q).ok_or_else(|| {
                        GinvError::Parse(format!("{q} has no finite decimal expansion; write JSON instead"))
                    })?;
                    out.push_str(&s);
                }
                Scalar::Float(z) => {
                    out.push_str(&format_f64(z.re));
                    if complex {
                        out.push(' ');
                        out.push_str(&format_f64(z.im));
                    }
                }
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn format_json<F: Field>(m: &Matrix<F>) -> String {
    let mut s = serde_json::to_string(&matrix_to_json(m)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn format_matrix<F: Field>(m: &Matrix<F>, format: MatrixFormat) -> Result<String> {
    match format {
        MatrixFormat::MatrixMarket => format_matrix_market(m),
        MatrixFormat::JsonRational => Ok(format_json(m)),
    }
}

pub fn write_matrix<F: Field>(m: &Matrix<F>, path: &Path, format: MatrixFormat) -> Result<()> {
    let text = format_matrix(m, format)?;
    fs::write(path, text).map_err(|e| GinvError::Io(format!("{}: {e}", path.display())))
}

/// Parses `2`, `-1.5`, `3i`, `1-2i`, `1.5+0.5i`, or a whitespace/comma
/// separated pair `re im`.
pub fn parse_complex(s: &str) -> Result<C> {
    let t = s.trim();
    let bad = || GinvError::Parse(format!("not a complex number: {s:?}"));
    let parts: Vec<&str> = t.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()).collect();
    if parts.len() == 2 {
        return Ok(C::new(parse_f64(parts[0])?, parse_f64(parts[1])?));
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(C::new(parse_f64(t)?, 0.0));
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_f64(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_f64(x).map_err(|_| bad())?,
    };
    Ok(C::new(re, im))
}

/// One complex number per non-empty, non-`#` line.
pub fn parse_eigenvalue_list(text: &str) -> Result<Vec<C>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_complex)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Matrix<Rational>;

    #[test]
    fn matrix_market_round_trip_of_direction() {
        let d = Q::from_i64(&[&[2, 0], &[1, 0]]);
        let text = format_matrix_market(&d).unwrap();
        assert_eq!(text, "%%MatrixMarket matrix array real general\n2 2\n2\n1\n0\n0\n");
        assert_eq!(parse_matrix_str(&text, Backend::Exact).unwrap(), AnyMatrix::Exact(d.clone()));
        assert_eq!(parse_matrix_str(&text, Backend::Float).unwrap(), AnyMatrix::Float(d.to_complex()));
    }

    #[test]
    fn json_rational_is_exact() {
        let text = r#"{"cols":2,"data":[["1/3","0"],["2","-1/2"]],"field":"rational","rows":2}"#;
        let m = parse_matrix_str(text, Backend::Float).unwrap();
        let expected = Q::from_ratios(&[&[(1, 3), (0, 1)], &[(2, 1), (-1, 2)]]);
        assert_eq!(m, AnyMatrix::Exact(expected.clone()));
        assert_eq!(format_json(&expected).trim_end(), text);
    }

    #[test]
    fn coordinate_format_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n";
        let err = parse_matrix_str(text, Backend::Float).unwrap_err();
        assert!(err.to_string().contains("coordinate"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_matrix_str("hello", Backend::Float).is_err());
        assert!(parse_matrix_str("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n", Backend::Float).is_err());
        assert!(parse_matrix_str("%%MatrixMarket matrix array real general\n1 1\nx\n", Backend::Float).is_err());
        let ragged = r#"{"cols":2,"data":[["1","2"],["3"]],"field":"rational","rows":2}"#;
        assert!(parse_matrix_str(ragged, Backend::Exact).is_err());
        let zero_den = r#"{"cols":1,"data":[["1/0"]],"field":"rational","rows":1}"#;
        assert!(parse_matrix_str(zero_den, Backend::Exact).is_err());
    }

    #[test]
    fn exact_decimals_from_matrix_market() {
        let text = "%%MatrixMarket matrix array real general\n% comment\n1 2\n0.1\n-2.5e-1\n";
        let m = parse_matrix_str(text, Backend::Exact).unwrap();
        assert_eq!(m, AnyMatrix::Exact(Q::from_ratios(&[&[(1, 10), (-1, 4)]])));
        let AnyMatrix::Exact(q) = m else { unreachable!() };
        assert_eq!(format_matrix_market(&q).unwrap(), "%%MatrixMarket matrix array real general\n1 2\n0.1\n-0.25\n");
        assert!(format_matrix_market(&Q::from_ratios(&[&[(1, 3)]])).is_err());
    }

    #[test]
    fn complex_matrix_market_round_trip() {
        let m = Matrix::from_rows(vec![vec![C::new(1.0, -2.0), C::new(0.1, 0.0)]]).unwrap();
        let text = format_matrix_market(&m).unwrap();
        assert!(text.starts_with(MM_COMPLEX));
        assert_eq!(parse_matrix_str(&text, Backend::Float).unwrap(), AnyMatrix::Float(m));
        assert!(parse_matrix_str(&text, Backend::Exact).is_err());
    }

    #[test]
    fn float_json_round_trip_is_bit_exact() {
        let m = Matrix::from_rows(vec![vec![C::new(0.1 + 0.2, 1e-300)], vec![C::new(-3.5, 0.0)]]).unwrap();
        let text = format_json(&m);
        assert_eq!(parse_matrix_str(&text, Backend::Float).unwrap(), AnyMatrix::Float(m));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), C::new(2.0, 0.0));
        assert_eq!(parse_complex("1.5-2i").unwrap(), C::new(1.5, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), C::new(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), C::new(0.0, 3.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C::new(1e-3, 20.0));
        assert_eq!(parse_complex("1 -1").unwrap(), C::new(1.0, -1.0));
        assert!(parse_complex("abc").is_err());
        assert_eq!(parse_eigenvalue_list("# eigs\n0\n\n2+1i\n").unwrap().len(), 2);
    }

    #[test]
    fn float_to_exact_is_the_binary_value() {
        let m = AnyMatrix::Float(Matrix::from_f64(&[&[0.5, -3.0]]));
        assert_eq!(m.to_exact().unwrap(), Q::from_ratios(&[&[(1, 2), (-3, 1)]]));
    }
}
