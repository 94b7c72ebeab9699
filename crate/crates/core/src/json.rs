//! JSON forms of tensors and reports.
//!
//! ```text
//! rank 2   {"matrix": [[a11, a12, a13], ...]}
//! rank 4   {"tensor4": [[[[...]]]]}          slot order (1, 2, 3, 4)
//! reports  {"reports": [...], "all_pass": true}
//! ```
//!
//! Floats are written with 17 significant digits so every `f64` survives a
//! roundtrip; non-finite values become `null`.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::report::{CheckReport, RunSummary};
use crate::tensor::{AnyTensor, Tensor2, Tensor4, DIM};

#[derive(Deserialize)]
struct MatrixDoc {
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct Tensor4Doc {
    tensor4: Vec<Vec<Vec<Vec<f64>>>>,
}

/// Pretty printer that writes floats in `{:.16e}` form.
struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes any value with the lossless float format and a trailing
/// newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Serialize)]
struct DerivativeDoc<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    scalar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tensor4: Option<Vec<Vec<Vec<Vec<f64>>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fd_check: Option<&'a CheckReport>,
}

/// A tensor of any rank in its own schema, optionally followed by an
/// `fd_check` report. The result still parses with [`parse_matrix`] or
/// [`parse_tensor4`].
pub fn tensor_to_json(t: &AnyTensor<f64>, fd_check: Option<&CheckReport>) -> String {
    let mut doc = DerivativeDoc {
        scalar: None,
        matrix: None,
        tensor4: None,
        fd_check,
    };
    match t {
        AnyTensor::Scalar(x) => doc.scalar = Some(*x),
        AnyTensor::Two(a) => doc.matrix = Some(a.rows().iter().map(|r| r.to_vec()).collect()),
        AnyTensor::Four(h) => {
            doc.tensor4 = Some(
                h.to_array()
                    .iter()
                    .map(|a| a.iter().map(|b| b.iter().map(|r| r.to_vec()).collect()).collect())
                    .collect(),
            )
        }
    }
    to_json(&doc)
}

pub fn matrix_to_json(a: &Tensor2<f64>) -> String {
    tensor_to_json(&AnyTensor::Two(*a), None)
}

pub fn tensor4_to_json(h: &Tensor4<f64>) -> String {
    tensor_to_json(&AnyTensor::Four(*h), None)
}

pub fn summary_to_json(s: &RunSummary) -> String {
    to_json(s)
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn fixed<T, U>(v: Vec<T>, what: &str, mut f: impl FnMut(T) -> Result<U>) -> Result<[U; DIM]> {
    if v.len() != DIM {
        return Err(Error::Parse(format!("{what} has length {}, expected {DIM}", v.len())));
    }
    let items = v.into_iter().map(&mut f).collect::<Result<Vec<U>>>()?;
    Ok(items.try_into().unwrap_or_else(|_| unreachable!()))
}

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Parse("non-finite entry".into()))
    }
}

/// Parses `{"matrix": [[...], [...], [...]]}`.
pub fn parse_matrix(text: &str) -> Result<Tensor2<f64>> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(parse_err)?;
    let rows = fixed(doc.matrix, "matrix", |r| fixed(r, "matrix row", finite))?;
    Ok(Tensor2::from_rows(rows))
}

/// Parses `{"tensor4": [...]}` nested 3×3×3×3.
pub fn parse_tensor4(text: &str) -> Result<Tensor4<f64>> {
    let doc: Tensor4Doc = serde_json::from_str(text).map_err(parse_err)?;
    let c = fixed(doc.tensor4, "tensor4", |a| {
        fixed(a, "tensor4 slot 2", |b| {
            fixed(b, "tensor4 slot 3", |r| fixed(r, "tensor4 slot 4", finite))
        })
    })?;
    Ok(Tensor4::from_array(c))
}

pub fn parse_summary(text: &str) -> Result<RunSummary> {
    serde_json::from_str(text).map_err(parse_err)
}
