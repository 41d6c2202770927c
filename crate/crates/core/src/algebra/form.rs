use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::field::{dot, Field, Scalar};
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Symplectic,
    Symmetric,
}

/// Ready-made Gram matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardForm {
    /// `[[0, I], [-I, 0]]`.
    Symplectic,
    /// The identity.
    Symmetric,
    /// `[[0, I], [I, 0]]`; symmetric with isotropic basis vectors.
    Hyperbolic,
}

impl StandardForm {
    pub fn kind(self) -> FormKind {
        match self {
            StandardForm::Symplectic => FormKind::Symplectic,
            StandardForm::Symmetric | StandardForm::Hyperbolic => FormKind::Symmetric,
        }
    }
}

impl FromStr for StandardForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symplectic" => Ok(StandardForm::Symplectic),
            "symmetric" => Ok(StandardForm::Symmetric),
            "hyperbolic" | "symmetric-hyperbolic" => Ok(StandardForm::Hyperbolic),
            _ => Err(Error::Parse(format!(
                "bad form {s:?}; expected symplectic, symmetric or hyperbolic"
            ))),
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Symplectic => "symplectic",
            FormKind::Symmetric => "symmetric",
        })
    }
}

/// A vector space `F^n` with a non-degenerate bilinear form
/// `⟨x, y⟩ = xᵀ · gram · y` that is either alternating or symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSpace {
    gram: Matrix,
    kind: FormKind,
}

impl BilinearSpace {
    pub fn new(gram: Matrix, kind: FormKind) -> Result<Self> {
        let n = gram.rows();
        if gram.cols() != n {
            return Err(Error::InvalidGram(format!(
                "gram is {}x{}, not square",
                n,
                gram.cols()
            )));
        }
        let field = gram.field();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (gram.get(i, j), gram.get(j, i));
                let ok = match kind {
                    FormKind::Symmetric => a == b,
                    FormKind::Symplectic => *a == -b,
                };
                if !ok {
                    return Err(Error::InvalidGram(format!(
                        "entries ({i},{j}) and ({j},{i}) violate {kind} symmetry"
                    )));
                }
            }
        }
        if kind == FormKind::Symplectic {
            if field == Field::Prime(2) {
                return Err(Error::UnsupportedCombination(
                    "symplectic forms need characteristic != 2".into(),
                ));
            }
            if n % 2 == 1 {
                return Err(Error::OddDimension(n));
            }
        }
        if gram.rank() != n {
            return Err(Error::InvalidGram("form is degenerate".into()));
        }
        Ok(BilinearSpace { gram, kind })
    }

    pub fn standard(form: StandardForm, n: usize, field: Field) -> Result<Self> {
        let mut gram = Matrix::zeros(field, n, n);
        match form {
            StandardForm::Symmetric => gram = Matrix::identity(field, n),
            StandardForm::Symplectic | StandardForm::Hyperbolic => {
                if n % 2 == 1 {
                    return Err(Error::OddDimension(n));
                }
                let h = n / 2;
                let lower = if form == StandardForm::Symplectic {
                    field.from_i64(-1)
                } else {
                    field.one()
                };
                for i in 0..h {
                    gram.set(i, i + h, field.one());
                    gram.set(i + h, i, lower.clone());
                }
            }
        }
        BilinearSpace::new(gram, form.kind())
    }

    /// Reads a Gram matrix given as a JSON array of rows whose entries are
    /// integers or decimal/rational strings.
    pub fn from_gram_json(json: &str, field: Field, kind: FormKind) -> Result<Self> {
        let value: Value = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("gram must be an array of rows".into()))?;
        let rows = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("gram row must be an array".into()))?
                    .iter()
                    .map(|x| parse_json_scalar(field, x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BilinearSpace::new(Matrix::from_rows(field, rows)?, kind)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `xᵀ · gram · y`.
    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(dot(self.field(), x, &self.gram.mul_vec(y)))
    }

    pub(crate) fn check_vector(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if let Some(bad) = x.iter().find(|s| s.field() != self.field()) {
            return Err(Error::FieldMismatch {
                expected: self.field().to_string(),
                found: bad.field().to_string(),
            });
        }
        Ok(())
    }
}

pub(crate) fn parse_json_scalar(field: Field, x: &Value) -> Result<Scalar> {
    match x {
        Value::String(s) => field.parse_scalar(s),
        Value::Number(n) => field.parse_scalar(&n.to_string()),
        other => Err(Error::Parse(format!("expected a scalar, got {other}"))),
    }
}
