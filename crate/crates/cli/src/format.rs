//! JSON encoding of dual matrices.
//!
//! ```json
//! {"field": "complex", "rows": 2, "cols": 2,
//!  "standard": [[[1, 0], [0, 1]], [[0, 1], [2, 0]]],
//!  "infinitesimal": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}
//! ```
//!
//! Real entries are numbers, complex entries `[re, im]` and quaternion
//! entries `[w, x, y, z]`. Floats are printed in shortest round-trip form,
//! so parsing and re-serializing preserves every bit.

use std::path::{Path, PathBuf};

use dualmat::{Complex64, DualMatrix, Eta, Field, Matrix, Quaternion, Scalar};
use serde_json::{Map, Value};

use crate::error::CliError;

/// A dual matrix over whichever field the file declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyDual {
    Real(DualMatrix<f64>),
    Complex(DualMatrix<Complex64>),
    Quaternion(DualMatrix<Quaternion>),
}

impl AnyDual {
    pub fn field(&self) -> Field {
        match self {
            AnyDual::Real(_) => Field::Real,
            AnyDual::Complex(_) => Field::Complex,
            AnyDual::Quaternion(_) => Field::Quaternion,
        }
    }

    pub fn encode(&self) -> Value {
        match self {
            AnyDual::Real(m) => encode_dual(m),
            AnyDual::Complex(m) => encode_dual(m),
            AnyDual::Quaternion(m) => encode_dual(m),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            AnyDual::Real(m) => m.frobenius_norm(),
            AnyDual::Complex(m) => m.frobenius_norm(),
            AnyDual::Quaternion(m) => m.frobenius_norm(),
        }
    }

    /// The same matrix over `T`, when `T` contains this field.
    pub fn lift<T: Entry>(&self) -> Option<DualMatrix<T>> {
        fn go<S: Scalar, T: Scalar>(m: &DualMatrix<S>) -> DualMatrix<T> {
            let f = |x: S| T::from_quaternion(x.to_quaternion());
            DualMatrix { standard: m.standard.map(f), infinitesimal: m.infinitesimal.map(f) }
        }
        if rank(self.field()) > rank(T::FIELD) {
            return None;
        }
        Some(match self {
            AnyDual::Real(m) => go(m),
            AnyDual::Complex(m) => go(m),
            AnyDual::Quaternion(m) => go(m),
        })
    }
}

fn rank(f: Field) -> u8 {
    match f {
        Field::Real => 0,
        Field::Complex => 1,
        Field::Quaternion => 2,
    }
}

/// Scalars with a JSON encoding.
pub trait Entry: Scalar {
    const SHAPE: &'static str;
    fn encode(self) -> Value;
    fn decode(v: &Value) -> Option<Self>;
}

pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn components(v: &Value, n: usize) -> Option<Vec<f64>> {
    let a = v.as_array()?;
    if a.len() != n {
        return None;
    }
    a.iter().map(Value::as_f64).collect()
}

impl Entry for f64 {
    const SHAPE: &'static str = "a number";
    fn encode(self) -> Value {
        number(self)
    }
    fn decode(v: &Value) -> Option<Self> {
        v.as_f64()
    }
}

impl Entry for Complex64 {
    const SHAPE: &'static str = "an [re, im] pair";
    fn encode(self) -> Value {
        Value::Array(vec![number(self.re), number(self.im)])
    }
    fn decode(v: &Value) -> Option<Self> {
        components(v, 2).map(|c| Complex64::new(c[0], c[1]))
    }
}

impl Entry for Quaternion {
    const SHAPE: &'static str = "a [w, x, y, z] quadruple";
    fn encode(self) -> Value {
        Value::Array(self.to_array().iter().map(|&x| number(x)).collect())
    }
    fn decode(v: &Value) -> Option<Self> {
        components(v, 4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
    }
}

pub fn encode_matrix<T: Entry>(m: &Matrix<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|&x| x.encode()).collect())).collect())
}

pub fn encode_dual<T: Entry>(m: &DualMatrix<T>) -> Value {
    let mut o = Map::new();
    o.insert("field".into(), T::FIELD.name().into());
    o.insert("rows".into(), m.rows().into());
    o.insert("cols".into(), m.cols().into());
    o.insert("standard".into(), encode_matrix(&m.standard));
    o.insert("infinitesimal".into(), encode_matrix(&m.infinitesimal));
    Value::Object(o)
}

/// Decoding context: the file being read, for error messages.
pub struct Ctx<'a> {
    pub path: &'a Path,
}

impl Ctx<'_> {
    pub fn err(&self, field: impl Into<String>, msg: impl Into<String>) -> CliError {
        CliError::Field { path: self.path.to_path_buf(), field: field.into(), msg: msg.into() }
    }

    pub fn get<'v>(&self, o: &'v Value, parent: &str, key: &str) -> Result<&'v Value, CliError> {
        o.get(key).ok_or_else(|| self.err(join(parent, key), "missing"))
    }

    pub fn usize(&self, o: &Value, parent: &str, key: &str) -> Result<usize, CliError> {
        let v = self.get(o, parent, key)?;
        v.as_u64().map(|x| x as usize).ok_or_else(|| self.err(join(parent, key), "expected a nonnegative integer"))
    }

    pub fn f64(&self, o: &Value, parent: &str, key: &str) -> Result<f64, CliError> {
        let v = self.get(o, parent, key)?;
        v.as_f64().ok_or_else(|| self.err(join(parent, key), "expected a number"))
    }

    pub fn matrix<T: Entry>(&self, v: &Value, name: &str, rows: usize, cols: usize) -> Result<Matrix<T>, CliError> {
        let a = v.as_array().ok_or_else(|| self.err(name, "expected an array of rows"))?;
        if a.len() != rows {
            return Err(self.err(name, format!("has {} rows, expected {rows}", a.len())));
        }
        let mut out = Matrix::zeros(rows, cols);
        for (i, row) in a.iter().enumerate() {
            let r = row.as_array().ok_or_else(|| self.err(format!("{name}[{i}]"), "expected an array"))?;
            if r.len() != cols {
                return Err(self.err(format!("{name}[{i}]"), format!("has {} entries, expected {cols}", r.len())));
            }
            for (j, x) in r.iter().enumerate() {
                out[(i, j)] = T::decode(x)
                    .ok_or_else(|| self.err(format!("{name}[{i}][{j}]"), format!("expected {}", T::SHAPE)))?;
            }
        }
        Ok(out)
    }

    pub fn dual(&self, v: &Value, name: &str) -> Result<AnyDual, CliError> {
        if !v.is_object() {
            return Err(self.err(name, "expected an object"));
        }
        let fname = join(name, "field");
        let field = self.get(v, name, "field")?.as_str().ok_or_else(|| self.err(&fname, "expected a string"))?;
        let rows = self.usize(v, name, "rows")?;
        let cols = self.usize(v, name, "cols")?;
        if rows == 0 || cols == 0 {
            return Err(self.err(join(name, "rows"), "dimensions must be positive"));
        }
        let s = self.get(v, name, "standard")?;
        let i = self.get(v, name, "infinitesimal")?;
        let (sn, in_) = (join(name, "standard"), join(name, "infinitesimal"));
        Ok(match field {
            "real" => AnyDual::Real(self.pair(s, i, &sn, &in_, rows, cols)?),
            "complex" => AnyDual::Complex(self.pair(s, i, &sn, &in_, rows, cols)?),
            "quaternion" => AnyDual::Quaternion(self.pair(s, i, &sn, &in_, rows, cols)?),
            other => {
                return Err(self.err(fname, format!("unknown field {other:?}, expected real, complex or quaternion")))
            }
        })
    }

    fn pair<T: Entry>(
        &self,
        s: &Value,
        i: &Value,
        sn: &str,
        in_: &str,
        rows: usize,
        cols: usize,
    ) -> Result<DualMatrix<T>, CliError> {
        let s = self.matrix(s, sn, rows, cols)?;
        let i = self.matrix(i, in_, rows, cols)?;
        Ok(DualMatrix::new(s, i).expect("shapes checked"))
    }

    pub fn eta(&self, v: &Value, name: &str) -> Result<Eta, CliError> {
        let c = components(v, 4).ok_or_else(|| self.err(name, "expected a [w, x, y, z] quadruple"))?;
        Eta::new(Quaternion::new(c[0], c[1], c[2], c[3])).map_err(|e| self.err(name, e.to_string()))
    }
}

fn join(parent: &str, key: &str) -> String {
    if parent.is_empty() {
        key.to_string()
    } else {
        format!("{parent}.{key}")
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Syntax {
        path: PathBuf::from(path),
        line: e.line(),
        column: e.column(),
        msg: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })
}

/// A parsed input file.
pub struct MatrixFile {
    pub matrix: AnyDual,
    pub eta: Option<Eta>,
    pub expected: Option<Value>,
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile, CliError> {
    let v = read_json(path)?;
    let ctx = Ctx { path };
    if let Some(o) = v.as_object() {
        const KEYS: [&str; 7] = ["field", "rows", "cols", "standard", "infinitesimal", "eta", "expected"];
        if let Some(k) = o.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ctx.err(k.as_str(), "unknown key"));
        }
    }
    let matrix = ctx.dual(&v, "")?;
    let eta = v.get("eta").map(|e| ctx.eta(e, "eta")).transpose()?;
    Ok(MatrixFile { matrix, eta, expected: v.get("expected").cloned() })
}

/// Compact encoding of `η`.
pub fn encode_eta(eta: Eta) -> Value {
    eta.quaternion().encode()
}
