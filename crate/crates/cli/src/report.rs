//! Running a command and producing its report, and checking a report
//! after the fact.
//!
//! Residuals are always computed from the factors as serialized, by the
//! same code that `verify` runs, so a report verifies exactly when its
//! numbers are reproducible from its own contents.

use std::fmt::Write as _;

use dualmat::kernels::pinv;
use dualmat::{
    atdsvd, atdsvd_strict, dcholesky, dlu, dlu_condition_residual, dmpgi, dtakagi, dual_penrose_residuals,
    equivalence_report, eta_dtakagi, CholeskyOptions, Complex64, DluOptions, DualMatrix, DualTakagiResult, Eta,
    Fallback, Field, Matrix, Pivoting, Quaternion, RankSpec, Scalar, TakagiOptions,
};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::format::{encode_dual, encode_eta, number, AnyDual, Ctx, Entry, MatrixFile};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Takagi,
    EtaTakagi,
    Atdsvd,
    Dlu,
    Dcholesky,
    Dmpgi,
    Equivalence,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Takagi => "takagi",
            Command::EtaTakagi => "eta-takagi",
            Command::Atdsvd => "atdsvd",
            Command::Dlu => "dlu",
            Command::Dcholesky => "dcholesky",
            Command::Dmpgi => "dmpgi",
            Command::Equivalence => "equivalence",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Command::Takagi,
            Command::EtaTakagi,
            Command::Atdsvd,
            Command::Dlu,
            Command::Dcholesky,
            Command::Dmpgi,
            Command::Equivalence,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Signed,
    Strict,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// `None` is automatic rank detection.
    pub k: Option<usize>,
    pub pivoting: Pivoting,
    pub fallback: Fallback,
    pub mode: Mode,
    pub eta: Option<Eta>,
    pub tol: Option<f64>,
    pub cluster_tol: Option<f64>,
    pub semidefinite: bool,
}

fn pivoting_name(p: Pivoting) -> &'static str {
    match p {
        Pivoting::None => "none",
        Pivoting::Rows => "rows",
    }
}

fn fallback_name(f: Fallback) -> &'static str {
    match f {
        Fallback::Project => "project",
        Fallback::Fail => "fail",
    }
}

/// `sha256:` digest of the compact serialization of `v`.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("serializable");
    let mut out = String::from("sha256:");
    for b in Sha256::digest(&bytes) {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

/// Everything a command produced.
struct Outcome {
    factors: Map<String, Value>,
    flags: Map<String, Value>,
    values: Map<String, Value>,
}

impl Outcome {
    fn new() -> Self {
        Self { factors: Map::new(), flags: Map::new(), values: Map::new() }
    }
}

fn vec_value(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| number(x)).collect())
}

fn real_matrix_value(m: &Matrix<f64>) -> Value {
    crate::format::encode_matrix(m)
}

fn matrix_as_dual<T: Entry>(m: &Matrix<T>) -> Value {
    encode_dual(&DualMatrix::from_standard(m.clone()))
}

fn precondition(cmd: Command, field: Field, accepts: &str) -> CliError {
    CliError::Precondition(format!("{} expects {accepts} input, got a {} matrix", cmd.name(), field.name()))
}

fn takagi_outcome<T: Entry>(r: &DualTakagiResult<T>, mode: Option<Mode>) -> Outcome {
    let mut o = Outcome::new();
    o.factors.insert("V".into(), encode_dual(&r.v));
    o.factors.insert("Sigma".into(), encode_dual(&r.sigma));
    if let Some(m) = mode {
        o.flags.insert("mode".into(), if m == Mode::Signed { "signed" } else { "strict" }.into());
    }
    o.flags.insert("eta".into(), encode_eta(r.eta));
    o.flags
        .insert("clusters".into(), Value::Array(r.clusters.iter().map(|c| json!([number(c.value), c.len])).collect()));
    o.values.insert("sigma_standard".into(), vec_value(&r.sigma_standard()));
    o.values.insert("sigma_infinitesimal".into(), vec_value(&r.sigma_infinitesimal()));
    if T::FIELD == Field::Real {
        o.values.insert("V_standard".into(), real_matrix_value(&r.v.standard.map(|x| x.re())));
        o.values.insert("V_infinitesimal".into(), real_matrix_value(&r.v.infinitesimal.map(|x| x.re())));
    }
    o
}

fn resolve_eta(cmd: Command, input: &MatrixFile, opts: &Options) -> Eta {
    match cmd {
        Command::EtaTakagi => opts.eta.or(input.eta).unwrap_or(Eta::J),
        _ => Eta::J,
    }
}

fn compute(cmd: Command, input: &MatrixFile, opts: &Options) -> Result<Outcome, CliError> {
    let a = &input.matrix;
    let topts = TakagiOptions { tol: opts.tol, cluster_tol: opts.cluster_tol };
    match cmd {
        Command::Takagi => {
            let m = match a {
                AnyDual::Quaternion(_) => return Err(precondition(cmd, a.field(), "real or complex")),
                _ => a.lift::<Complex64>().unwrap(),
            };
            Ok(takagi_outcome(&dtakagi(&m, topts)?, None))
        }
        Command::EtaTakagi => {
            let m = a.lift::<Quaternion>().unwrap();
            Ok(takagi_outcome(&eta_dtakagi(&m, resolve_eta(cmd, input, opts), topts)?, None))
        }
        Command::Atdsvd => {
            let AnyDual::Real(m) = a else { return Err(precondition(cmd, a.field(), "real")) };
            match opts.mode {
                Mode::Signed => Ok(takagi_outcome(&atdsvd(m, topts)?, Some(Mode::Signed))),
                Mode::Strict => Ok(takagi_outcome(&atdsvd_strict(m, topts)?, Some(Mode::Strict))),
            }
        }
        Command::Dlu => match a {
            AnyDual::Real(m) => dlu_outcome(m, opts),
            AnyDual::Complex(m) => dlu_outcome(m, opts),
            AnyDual::Quaternion(_) => Err(precondition(cmd, a.field(), "real or complex")),
        },
        Command::Dcholesky => {
            let AnyDual::Real(m) = a else { return Err(precondition(cmd, a.field(), "real")) };
            let r = dcholesky(m, CholeskyOptions { semidefinite: opts.semidefinite, tol: opts.tol })?;
            let mut o = Outcome::new();
            o.factors.insert("L".into(), encode_dual(&r.l));
            o.factors.insert("P".into(), matrix_as_dual(&r.p));
            o.flags.insert("rank".into(), r.rank.into());
            o.flags.insert("semidefinite".into(), opts.semidefinite.into());
            o.values.insert("L_standard".into(), real_matrix_value(&r.l.standard));
            o.values.insert("L_infinitesimal".into(), real_matrix_value(&r.l.infinitesimal));
            Ok(o)
        }
        Command::Dmpgi => match a {
            AnyDual::Real(m) => dmpgi_outcome(m, opts),
            AnyDual::Complex(m) => dmpgi_outcome(m, opts),
            AnyDual::Quaternion(_) => Err(precondition(cmd, a.field(), "real or complex")),
        },
        Command::Equivalence => {
            let AnyDual::Real(m) = a else { return Err(precondition(cmd, a.field(), "real")) };
            let r = equivalence_report(m, opts.tol)?;
            let mut o = Outcome::new();
            o.flags.insert("k".into(), r.k.into());
            o.flags.insert("condition_residual".into(), number(r.condition_residual));
            o.flags.insert("condition_holds".into(), r.condition_holds.into());
            o.flags.insert("dmpgi_exists".into(), r.dmpgi_exists.into());
            o.flags.insert("rank_k_exists".into(), r.rank_k_exists.into());
            o.flags.insert("dlu_exists".into(), r.dlu_exists.map_or(Value::Null, Value::Bool));
            o.flags.insert("all_agree".into(), r.all_agree().into());
            Ok(o)
        }
    }
}

fn dlu_outcome<T: Entry>(m: &DualMatrix<T>, opts: &Options) -> Result<Outcome, CliError> {
    let rank = opts.k.map_or(RankSpec::Auto, RankSpec::Fixed);
    let r = dlu(m, DluOptions { rank, pivoting: opts.pivoting, fallback: opts.fallback, tol: opts.tol })?;
    let mut o = Outcome::new();
    o.factors.insert("L".into(), encode_dual(&r.l));
    o.factors.insert("U".into(), encode_dual(&r.u));
    o.factors.insert("P".into(), matrix_as_dual(&r.p));
    o.flags.insert("k".into(), r.k.into());
    o.flags.insert("pivoting".into(), pivoting_name(opts.pivoting).into());
    o.flags.insert("fallback".into(), fallback_name(opts.fallback).into());
    o.flags.insert("perm".into(), r.perm.as_ref().map_or(Value::Null, |p| json!(p)));
    o.flags.insert("condition_residual".into(), number(r.condition_residual));
    o.flags.insert("projection_applied".into(), r.projection_applied.into());
    o.flags.insert("projection_magnitude".into(), number(r.projection_magnitude));
    Ok(o)
}

fn dmpgi_outcome<T: Entry>(m: &DualMatrix<T>, opts: &Options) -> Result<Outcome, CliError> {
    let r = dmpgi(m, opts.tol)?;
    let mut o = Outcome::new();
    o.factors.insert("X".into(), encode_dual(&r.x));
    o.flags.insert("condition_residual".into(), number(r.condition_residual));
    Ok(o)
}

/// Named residuals and their tolerances, recomputed from serialized data.
pub struct Residuals {
    pub values: Vec<(&'static str, f64)>,
    pub tols: Vec<(&'static str, f64)>,
}

fn base_tol(a: &AnyDual, tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(|| 1e-10 * a.frobenius_norm().max(1.0))
}

fn fro2<T: Scalar>(s: &Matrix<T>, i: &Matrix<T>) -> (f64, f64) {
    (s.frobenius_norm(), i.frobenius_norm())
}

macro_rules! with_dual {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            AnyDual::Real($m) => $body,
            AnyDual::Complex($m) => $body,
            AnyDual::Quaternion($m) => $body,
        }
    };
}

/// Recomputes the residuals of a successful run from `input`, the
/// serialized `factors` and `flags`.
pub fn residuals(
    ctx: &Ctx,
    cmd: Command,
    input: &AnyDual,
    factors: &Value,
    flags: &Value,
    tol: Option<f64>,
) -> Result<Residuals, CliError> {
    let t = base_tol(input, tol);
    let factor = |name: &str| -> Result<AnyDual, CliError> {
        ctx.dual(ctx.get(factors, "factors", name)?, &format!("factors.{name}"))
    };
    let mismatch = |name: &str| ctx.err(format!("factors.{name}"), "field does not match the input");
    match cmd {
        Command::Takagi | Command::EtaTakagi | Command::Atdsvd => {
            let eta = match flags.get("eta") {
                Some(e) => ctx.eta(e, "flags.eta")?,
                None => Eta::J,
            };
            let AnyDual::Real(sigma) = factor("Sigma")? else {
                return Err(ctx.err("factors.Sigma", "expected a real matrix"));
            };
            let v = factor("V")?;
            let values = with_dual!(&v, v => {
                let a = input.lift().ok_or_else(|| mismatch("V"))?;
                takagi_residuals(&a, v, &sigma, eta)
            });
            let values = values.map_err(|e| ctx.err("factors", e.to_string()))?;
            let tols = values.iter().map(|(n, _)| (*n, t)).collect();
            Ok(Residuals { values, tols })
        }
        Command::Dlu => {
            let perm = match flags.get("perm") {
                None | Some(Value::Null) => None,
                Some(p) => Some(
                    p.as_array()
                        .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
                        .filter(|p| valid_perm(p, input_rows(input)))
                        .ok_or_else(|| ctx.err("flags.perm", "expected a permutation of the row indices"))?,
                ),
            };
            let projected = flags.get("projection_applied").and_then(Value::as_bool).unwrap_or(false);
            let (l, u) = (factor("L")?, factor("U")?);
            let values = match (&l, &u) {
                (AnyDual::Real(l), AnyDual::Real(u)) => {
                    dlu_residuals(&input.lift().ok_or_else(|| mismatch("L"))?, l, u, perm.as_deref(), projected)
                }
                (AnyDual::Complex(l), AnyDual::Complex(u)) => {
                    dlu_residuals(&input.lift().ok_or_else(|| mismatch("L"))?, l, u, perm.as_deref(), projected)
                }
                _ => return Err(ctx.err("factors", "L and U must be real or complex and share a field")),
            };
            let values = values.map_err(|e| ctx.err("factors", e.to_string()))?;
            let tols = values.iter().map(|(n, _)| (*n, t)).collect();
            Ok(Residuals { values, tols })
        }
        Command::Dcholesky => {
            let AnyDual::Real(l) = factor("L")? else { return Err(ctx.err("factors.L", "expected a real matrix")) };
            let AnyDual::Real(p) = factor("P")? else { return Err(ctx.err("factors.P", "expected a real matrix")) };
            let AnyDual::Real(a) = input else { return Err(ctx.err("input", "expected a real matrix")) };
            let rec = l.mul(&l.transpose()).map_err(|e| ctx.err("factors.L", e.to_string()))?;
            let d = rec.sub(a).map_err(|e| ctx.err("factors.L", e.to_string()))?;
            let (rs, ri) = fro2(&d.standard, &d.infinitesimal);
            let n = l.rows();
            let upper: f64 = [&l.standard, &l.infinitesimal]
                .iter()
                .map(|m| (0..n).flat_map(|i| (i + 1..n).map(move |j| m[(i, j)].abs())).sum::<f64>())
                .sum();
            let skew = p.standard.add(&p.standard.transpose()).frobenius_norm();
            let values = vec![
                ("reconstruction_standard", rs),
                ("reconstruction_infinitesimal", ri),
                ("triangle_defect", upper),
                ("p_skew_defect", skew),
            ];
            let tols = vec![
                ("reconstruction_standard", t),
                ("reconstruction_infinitesimal", t),
                ("triangle_defect", 0.0),
                ("p_skew_defect", 0.0),
            ];
            Ok(Residuals { values, tols })
        }
        Command::Dmpgi => {
            let x = factor("X")?;
            let (pr, xn) = match &x {
                AnyDual::Real(x) => (penrose(input, x)?, x.frobenius_norm()),
                AnyDual::Complex(x) => (penrose(input, x)?, x.frobenius_norm()),
                AnyDual::Quaternion(_) => return Err(ctx.err("factors.X", "expected a real or complex matrix")),
            };
            let pt = t * 10.0 * xn.max(1.0);
            let names = ["penrose_axa", "penrose_xax", "penrose_ax_hermitian", "penrose_xa_hermitian"];
            Ok(Residuals {
                values: names.iter().copied().zip(pr).collect(),
                tols: names.iter().map(|&n| (n, pt)).collect(),
            })
        }
        Command::Equivalence => {
            let AnyDual::Real(a) = input else { return Err(ctx.err("input", "expected a real matrix")) };
            let r = equivalence_report(a, tol)?;
            let agree = r.all_agree() && r.dlu_exists.is_some();
            Ok(Residuals {
                values: vec![("legs_disagree", if agree { 0.0 } else { 1.0 })],
                tols: vec![("legs_disagree", 0.0)],
            })
        }
    }
}

fn input_rows(a: &AnyDual) -> usize {
    with_dual!(a, m => m.rows())
}

fn valid_perm(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

fn penrose<T: Entry>(input: &AnyDual, x: &DualMatrix<T>) -> Result<[f64; 4], CliError> {
    let a = input.lift::<T>().ok_or_else(|| CliError::Precondition("factor field does not match input".into()))?;
    Ok(dual_penrose_residuals(&a, x)?)
}

fn takagi_residuals<T: Scalar>(
    a: &DualMatrix<T>,
    v: &DualMatrix<T>,
    sigma: &DualMatrix<f64>,
    eta: Eta,
) -> Result<Vec<(&'static str, f64)>, dualmat::Error> {
    let s =
        DualMatrix { standard: sigma.standard.map(T::from_real), infinitesimal: sigma.infinitesimal.map(T::from_real) };
    let rec = v.mul(&s)?.mul(&v.eta_adjoint(eta))?;
    let d = rec.sub(a)?;
    let (rs, ri) = fro2(&d.standard, &d.infinitesimal);
    let n = sigma.rows();
    let off: f64 = [&sigma.standard, &sigma.infinitesimal]
        .iter()
        .map(|m| (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| m[(i, j)].abs())).sum::<f64>())
        .sum();
    Ok(vec![
        ("reconstruction_standard", rs),
        ("reconstruction_infinitesimal", ri),
        ("unitarity", v.is_dual_unitary(Some(0.0))?.residual),
        ("sigma_offdiagonal", off),
    ])
}

fn dlu_residuals<T: Scalar>(
    a: &DualMatrix<T>,
    l: &DualMatrix<T>,
    u: &DualMatrix<T>,
    perm: Option<&[usize]>,
    projected: bool,
) -> Result<Vec<(&'static str, f64)>, dualmat::Error> {
    let (mut s, mut i) = (a.standard.clone(), a.infinitesimal.clone());
    if let Some(p) = perm {
        s = s.permute_rows(p);
        i = i.permute_rows(p);
    }
    if projected {
        let lp = pinv(&l.standard)?;
        let up = pinv(&u.standard)?;
        let left = Matrix::identity(l.rows()).sub(&l.standard.mul(&lp));
        let right = Matrix::identity(u.cols()).sub(&up.mul(&u.standard));
        i = i.sub(&left.mul(&i).mul(&right));
    }
    let rec = l.mul(u)?;
    let (rs, _) = fro2(&rec.standard.sub(&s), &Matrix::<T>::zeros(1, 1));
    let ri = rec.infinitesimal.sub(&i).frobenius_norm();
    let k = l.cols();
    let mut outside = 0.0;
    for m in [&l.standard, &l.infinitesimal] {
        for r in 0..m.rows() {
            for c in r + 1..k {
                outside += m[(r, c)].abs();
            }
        }
    }
    for m in [&u.standard, &u.infinitesimal] {
        for r in 0..k {
            for c in 0..r.min(m.cols()) {
                outside += m[(r, c)].abs();
            }
        }
    }
    Ok(vec![
        ("reconstruction_standard", rs),
        ("reconstruction_infinitesimal", ri),
        ("condition_after", dlu_condition_residual(&i, &l.standard, &u.standard)?),
        ("trapezoid_defect", outside),
    ])
}

fn options_value(cmd: Command, opts: &Options, eta: Eta) -> Value {
    let mut o = Map::new();
    match cmd {
        Command::Takagi | Command::EtaTakagi | Command::Atdsvd => {
            if cmd == Command::EtaTakagi {
                o.insert("eta".into(), encode_eta(eta));
            }
            if cmd == Command::Atdsvd {
                o.insert("mode".into(), if opts.mode == Mode::Signed { "signed" } else { "strict" }.into());
            }
            o.insert("cluster_tol".into(), opts.cluster_tol.map_or(Value::Null, number));
        }
        Command::Dlu => {
            o.insert("k".into(), opts.k.map_or(Value::from("auto"), Value::from));
            o.insert("pivoting".into(), pivoting_name(opts.pivoting).into());
            o.insert("fallback".into(), fallback_name(opts.fallback).into());
        }
        Command::Dcholesky => {
            o.insert("semidefinite".into(), opts.semidefinite.into());
        }
        Command::Dmpgi | Command::Equivalence => {}
    }
    o.insert("tol".into(), opts.tol.map_or(Value::Null, number));
    Value::Object(o)
}

fn max_abs_dev(got: &Value, want: &Value) -> Option<f64> {
    match (got, want) {
        (Value::Array(g), Value::Array(w)) if g.len() == w.len() => {
            g.iter().zip(w).try_fold(0.0_f64, |m, (g, w)| Some(m.max(max_abs_dev(g, w)?)))
        }
        (Value::Number(g), Value::Number(w)) => Some((g.as_f64()? - w.as_f64()?).abs()),
        _ => None,
    }
}

/// Runs `cmd` and returns the report with the exit code it implies.
pub fn run(cmd: Command, input: &MatrixFile, opts: &Options) -> (Value, i32) {
    let eta = resolve_eta(cmd, input, opts);
    let input_value = input.matrix.encode();
    let mut r = Map::new();
    r.insert("schema".into(), SCHEMA.into());
    r.insert("command".into(), cmd.name().into());
    r.insert("status".into(), "ok".into());
    r.insert("input_digest".into(), digest(&input_value).into());
    r.insert("options".into(), options_value(cmd, opts, eta));
    r.insert("input".into(), input_value);

    let ctx = Ctx { path: std::path::Path::new("<report>") };
    let result = compute(cmd, input, opts).and_then(|o| {
        let factors = Value::Object(o.factors.clone());
        let flags = Value::Object(o.flags.clone());
        let res = residuals(&ctx, cmd, &input.matrix, &factors, &flags, opts.tol)?;
        Ok((o, res))
    });
    let code = match result {
        Ok((o, res)) => {
            r.insert("factors".into(), Value::Object(o.factors));
            r.insert("residuals".into(), pairs(&res.values));
            r.insert("tolerances".into(), pairs(&res.tols));
            r.insert("flags".into(), Value::Object(o.flags));
            if !o.values.is_empty() {
                r.insert("values".into(), Value::Object(o.values));
            }
            let failed: Vec<_> = res
                .values
                .iter()
                .zip(&res.tols)
                .filter(|((_, v), (_, t))| v.is_nan() || v > t)
                .map(|((n, _), _)| *n)
                .collect();
            if failed.is_empty() {
                0
            } else {
                r.insert("status".into(), format!("residuals above tolerance: {}", failed.join(", ")).into());
                2
            }
        }
        Err(e) => {
            r.insert("status".into(), e.to_string().into());
            e.exit_code()
        }
    };
    if let Some(exp) = input.expected.as_ref().and_then(|e| e.get(cmd.name())) {
        r.insert("expected".into(), expected_check(&r, exp));
    }
    (Value::Object(r), code)
}

/// Compares computed values against an `expected` sidecar: numeric
/// arrays by largest absolute deviation, `status` by equality.
fn expected_check(report: &Map<String, Value>, exp: &Value) -> Value {
    let mut out = Map::new();
    let Some(exp) = exp.as_object() else { return Value::Object(out) };
    let values = report.get("values").map(|v| align_columns(v, exp));
    let values = values.as_ref();
    for (k, want) in exp {
        if k == "status" {
            let got = report.get("status").and_then(Value::as_str).unwrap_or("");
            let ok = want.as_str().is_some_and(|w| got.starts_with(w));
            out.insert("status_matches".into(), ok.into());
        } else if let Some(got) = values.and_then(|v| v.get(k)) {
            out.insert(format!("{k}_max_deviation"), max_abs_dev(got, want).map_or(Value::Null, number));
        }
    }
    Value::Object(out)
}

/// Singular vectors are defined up to column sign; flips each column of
/// `V_standard` and `V_infinitesimal` to agree with the expected `V_standard`.
fn align_columns(values: &Value, exp: &Map<String, Value>) -> Value {
    let mut out = values.clone();
    let rows = |v: &Value| -> Option<Vec<Vec<f64>>> {
        v.as_array()?.iter().map(|r| r.as_array()?.iter().map(Value::as_f64).collect()).collect()
    };
    let (Some(got), Some(want)) = (values.get("V_standard").and_then(rows), exp.get("V_standard").and_then(rows))
    else {
        return out;
    };
    if got.len() != want.len() || got.iter().zip(&want).any(|(g, w)| g.len() != w.len()) {
        return out;
    }
    let n = got.first().map_or(0, Vec::len);
    let signs: Vec<f64> = (0..n)
        .map(|j| if got.iter().zip(&want).map(|(g, w)| g[j] * w[j]).sum::<f64>() < 0.0 { -1.0 } else { 1.0 })
        .collect();
    for key in ["V_standard", "V_infinitesimal"] {
        if let Some(m) = out.get(key).and_then(rows) {
            let flipped =
                m.iter().map(|r| r.iter().zip(&signs).map(|(x, s)| x * s).collect::<Vec<_>>()).collect::<Vec<_>>();
            out[key] = json!(flipped);
        }
    }
    out
}

fn pairs(v: &[(&'static str, f64)]) -> Value {
    Value::Object(v.iter().map(|(n, x)| (n.to_string(), number(*x))).collect())
}

/// Re-derives every residual of a report and checks it against the
/// recorded value and tolerance.
pub fn verify(ctx: &Ctx, report: &Value) -> Result<String, CliError> {
    let schema = ctx.get(report, "", "schema")?.as_u64();
    if schema != Some(SCHEMA) {
        return Err(ctx.err("schema", format!("unsupported schema, expected {SCHEMA}")));
    }
    let cname = ctx.get(report, "", "command")?.as_str().unwrap_or_default();
    let cmd = Command::from_name(cname).ok_or_else(|| ctx.err("command", format!("unknown command {cname:?}")))?;
    let status = ctx.get(report, "", "status")?.as_str().unwrap_or_default();
    if status != "ok" {
        return Err(CliError::Verify(format!("report records a failed run: {status}")));
    }
    let input_value = ctx.get(report, "", "input")?;
    let digest_recorded = ctx.get(report, "", "input_digest")?.as_str().unwrap_or_default();
    if digest(input_value) != digest_recorded {
        return Err(CliError::Verify("input digest does not match the embedded input".into()));
    }
    let input = ctx.dual(input_value, "input")?;
    let tol = match ctx.get(report, "", "options")?.get("tol") {
        None | Some(Value::Null) => None,
        Some(t) => Some(t.as_f64().ok_or_else(|| ctx.err("options.tol", "expected a number"))?),
    };
    let factors = ctx.get(report, "", "factors")?;
    let flags = ctx.get(report, "", "flags")?;
    let res = residuals(ctx, cmd, &input, factors, flags, tol)?;
    let recorded = ctx.get(report, "", "residuals")?;
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for ((name, v), (_, t)) in res.values.iter().zip(&res.tols) {
        let rec = recorded.get(*name).and_then(Value::as_f64);
        let same = rec.is_some_and(|r| r.to_bits() == v.to_bits());
        if !same {
            bad.push(format!("{name}: recorded {rec:?}, recomputed {v:e}"));
        }
        if v.is_nan() || v > t {
            bad.push(format!("{name}: {v:e} above tolerance {t:e}"));
        }
        lines.push(format!("{name} {v:.3e} <= {t:.3e}"));
    }
    if cmd == Command::Equivalence {
        let r =
            equivalence_report(input.lift::<f64>().as_ref().ok_or_else(|| ctx.err("input", "expected real"))?, tol)?;
        for (k, v) in [
            ("condition_residual", number(r.condition_residual)),
            ("condition_holds", Value::Bool(r.condition_holds)),
            ("dmpgi_exists", Value::Bool(r.dmpgi_exists)),
            ("rank_k_exists", Value::Bool(r.rank_k_exists)),
            ("dlu_exists", r.dlu_exists.map_or(Value::Null, Value::Bool)),
        ] {
            if flags.get(k) != Some(&v) {
                bad.push(format!("flag {k} does not reproduce"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{} report verified: {}", cmd.name(), lines.join(", ")))
    } else {
        Err(CliError::Verify(bad.join("; ")))
    }
}

/// Pretty JSON with every array of scalars kept on one line, so each
/// matrix row (or complex/quaternion entry) reads as a unit.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_json(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(out, x, depth + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        Value::Array(a) if !a.iter().all(is_inline) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(out, depth + 1);
                write_json(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("serializable")),
    }
}

fn is_scalar(v: &Value) -> bool {
    !v.is_array() && !v.is_object()
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Array(t) => t.len() <= 4 && t.iter().all(is_scalar),
        Value::Object(_) => false,
        _ => true,
    }
}

// ---- text rendering -----------------------------------------------------

fn fmt_entry(v: &Value) -> String {
    match v {
        Value::Number(n) => format!("{:>10.4}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(c) => {
            let c: Vec<f64> = c.iter().filter_map(Value::as_f64).collect();
            match c.len() {
                2 => format!("{:>9.4}{:+.4}i", c[0], c[1]),
                _ => format!("[{}]", c.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ")),
            }
        }
        other => other.to_string(),
    }
}

fn render_matrix(out: &mut String, label: &str, m: &Value) {
    let _ = writeln!(out, "  {label}:");
    for row in m.as_array().into_iter().flatten() {
        let cells: Vec<String> = row.as_array().into_iter().flatten().map(fmt_entry).collect();
        let _ = writeln!(out, "    {}", cells.join(" "));
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// Human-readable rendering of a report.
pub fn to_text(report: &Value) -> String {
    let mut out = String::new();
    let s = |k: &str| report.get(k).and_then(Value::as_str).unwrap_or("").to_string();
    let _ = writeln!(out, "command: {}", s("command"));
    let _ = writeln!(out, "status: {}", s("status"));
    if let Some(i) = report.get("input") {
        let _ = writeln!(
            out,
            "input: {} {}x{} ({})",
            i.get("field").and_then(Value::as_str).unwrap_or("?"),
            i.get("rows").and_then(Value::as_u64).unwrap_or(0),
            i.get("cols").and_then(Value::as_u64).unwrap_or(0),
            s("input_digest")
        );
    }
    for section in ["flags", "residuals", "expected"] {
        if let Some(Value::Object(m)) = report.get(section) {
            if m.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{section}:");
            for (k, v) in m {
                let _ = writeln!(out, "  {k}: {}", scalar_text(v));
            }
        }
    }
    if let Some(Value::Object(f)) = report.get("factors") {
        for (name, m) in f {
            let _ = writeln!(out, "factor {name}:");
            if let Some(st) = m.get("standard") {
                render_matrix(&mut out, "standard", st);
            }
            if let Some(inf) = m.get("infinitesimal") {
                render_matrix(&mut out, "infinitesimal", inf);
            }
        }
    }
    out
}
