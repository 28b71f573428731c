//! File interchange: Matrix Market "array" files (real and complex, column-
//! major), plain CSV for real matrices, and the JSON solve report.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::{svd, sym_eig, sym_part, ComplexDense, DenseMatrix};
use crate::reduce::Solution;
use crate::ComplexSolution;

/// A matrix read from disk: real or complex, decided by the file header.
#[derive(Clone, Debug)]
pub enum MatrixData {
    Real(DenseMatrix),
    Complex(ComplexDense),
}

impl MatrixData {
    pub fn rows(&self) -> usize {
        match self {
            MatrixData::Real(m) => m.rows(),
            MatrixData::Complex(c) => c.re.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixData::Real(m) => m.cols(),
            MatrixData::Complex(c) => c.re.cols(),
        }
    }

    pub fn into_real(self) -> Result<DenseMatrix> {
        match self {
            MatrixData::Real(m) => Ok(m),
            MatrixData::Complex(_) => Err(Error::Argument(
                "expected a real matrix, found a complex one".into(),
            )),
        }
    }

    /// Real data promotes to complex with a zero imaginary part.
    pub fn into_complex(self) -> ComplexDense {
        match self {
            MatrixData::Real(m) => ComplexDense::from_real(m),
            MatrixData::Complex(c) => c,
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_error(line: usize, detail: impl Into<String>) -> Error {
    Error::Parse {
        line,
        detail: detail.into(),
    }
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid number {token:?}")))?;
    if !value.is_finite() {
        return Err(parse_error(line, format!("non-finite entry {token:?}")));
    }
    Ok(value)
}

/// Read a matrix file. `.csv` parses as comma-separated rows of a real
/// matrix; anything else parses as a Matrix Market "array" file (`real` or
/// `complex` field, `general` symmetry, entries in column-major order).
pub fn read_matrix(path: impl AsRef<Path>) -> Result<MatrixData> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        read_csv(&text).map(MatrixData::Real)
    } else {
        read_matrix_market(&text)
    }
}

fn read_csv(text: &str) -> Result<DenseMatrix> {
    let mut entries: Vec<f64> = Vec::new();
    let mut cols: Option<usize> = None;
    let mut rows = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match cols {
            None => cols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(parse_error(
                    line_no,
                    format!("expected {c} comma-separated values, found {}", fields.len()),
                ));
            }
            _ => {}
        }
        for f in fields {
            entries.push(parse_f64(f, line_no)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_error(1, "empty matrix file"))?;
    DenseMatrix::from_rows(rows, cols, &entries)
}

fn read_matrix_market(text: &str) -> Result<MatrixData> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty matrix file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_error(
            1,
            "expected header \"%%MatrixMarket matrix array <field> general\"",
        ));
    }
    if tokens[1] != "matrix" || tokens[2] != "array" || tokens[4] != "general" {
        return Err(parse_error(
            1,
            format!(
                "unsupported layout \"{} {} {}\"; only \"matrix array ... general\" is supported",
                tokens[1], tokens[2], tokens[4]
            ),
        ));
    }
    let complex = match tokens[3].as_str() {
        "real" => false,
        "complex" => true,
        other => {
            return Err(parse_error(
                1,
                format!("unsupported field {other:?}; expected \"real\" or \"complex\""),
            ));
        }
    };

    // skip comment lines, read the size line
    let (size_line_no, size_line) = loop {
        match lines.next() {
            Some((idx, l)) if l.trim_start().starts_with('%') => {
                let _ = idx;
            }
            Some((idx, l)) if !l.trim().is_empty() => break (idx + 1, l),
            Some(_) => continue,
            None => return Err(parse_error(2, "missing size line")),
        }
    };
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_error(
            size_line_no,
            format!("expected \"rows cols\", got {size_line:?}"),
        ));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|_| parse_error(size_line_no, format!("invalid row count {:?}", dims[0])))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|_| parse_error(size_line_no, format!("invalid column count {:?}", dims[1])))?;
    if rows == 0 || cols == 0 {
        return Err(parse_error(size_line_no, "matrix dimensions must be positive"));
    }

    let expected = rows * cols;
    let mut re = DenseMatrix::zeros(rows, cols);
    let mut im = DenseMatrix::zeros(rows, cols);
    let mut count = 0usize;
    let mut last_line = size_line_no;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let wanted = if complex { 2 } else { 1 };
        if fields.len() != wanted {
            return Err(parse_error(
                line_no,
                format!("expected {wanted} value(s) per entry line, found {}", fields.len()),
            ));
        }
        if count >= expected {
            return Err(parse_error(
                line_no,
                format!("more than the declared {expected} entries"),
            ));
        }
        // column-major order
        let col = count / rows;
        let row = count % rows;
        re.set(row, col, parse_f64(fields[0], line_no)?);
        if complex {
            im.set(row, col, parse_f64(fields[1], line_no)?);
        }
        count += 1;
    }
    if count != expected {
        return Err(parse_error(
            last_line,
            format!("expected {expected} entries for a {rows}x{cols} array, found {count}"),
        ));
    }
    if complex {
        Ok(MatrixData::Complex(ComplexDense::new(re, im)?))
    } else {
        Ok(MatrixData::Real(re))
    }
}

/// Write a matrix. `.csv` paths emit comma-separated rows (real only);
/// anything else emits a Matrix Market "array" file. Entries carry 17
/// significant digits, enough to round-trip f64 exactly.
pub fn write_matrix(data: &MatrixData, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        match data {
            MatrixData::Real(m) => csv_string(m),
            MatrixData::Complex(_) => {
                return Err(Error::Unsupported(
                    "CSV output supports real matrices only; use a .mtx path".into(),
                ));
            }
        }
    } else {
        matrix_market_string(data)
    };
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn csv_string(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.16e}", m[(i, j)]);
        }
        out.push('\n');
    }
    out
}

fn matrix_market_string(data: &MatrixData) -> String {
    let (rows, cols) = (data.rows(), data.cols());
    let field = match data {
        MatrixData::Real(_) => "real",
        MatrixData::Complex(_) => "complex",
    };
    let mut out = format!("%%MatrixMarket matrix array {field} general\n{rows} {cols}\n");
    for col in 0..cols {
        for row in 0..rows {
            match data {
                MatrixData::Real(m) => {
                    let _ = writeln!(out, "{:.16e}", m[(row, col)]);
                }
                MatrixData::Complex(c) => {
                    let _ = writeln!(out, "{:.16e} {:.16e}", c.re[(row, col)], c.im[(row, col)]);
                }
            }
        }
    }
    out
}

/// Machine-readable outcome of one solve, serialized as JSON with a fixed
/// field order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    /// ‖AX−B‖_F.
    pub objective: f64,
    /// 100·‖AX−B‖_F/‖B‖_F (0 when B = 0).
    pub relative_error_percent: f64,
    /// "exact" when the infimum is attained by the returned matrix,
    /// "epsilon" when it is ε-suboptimal, "unknown" when unclassified.
    pub attained: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_used: Option<f64>,
    pub rank_of_x: usize,
    pub iterations: usize,
    pub runtime_seconds: f64,
    /// Eigenvalues of A+Aᵀ (real) or A+A* (complex), nonincreasing.
    pub eigenvalues_of_symmetric_part: Vec<f64>,
}

fn relative_error_percent(objective: f64, b_norm: f64) -> f64 {
    if b_norm > 0.0 {
        100.0 * objective / b_norm
    } else {
        0.0
    }
}

impl SolveReport {
    pub fn from_real(sol: &Solution, x: &DenseMatrix, b: &DenseMatrix) -> Result<Self> {
        let rank = match sol.diagnostics.get("rank") {
            Some(&r) => r as usize,
            None => svd(x, None)?.numeric_rank,
        };
        let eig = sym_eig(&sym_part(&sol.a)?.scale(2.0))?;
        Ok(SolveReport {
            objective: sol.objective,
            relative_error_percent: relative_error_percent(sol.objective, b.frobenius_norm()),
            attained: if sol.attained.is_attained() {
                "exact".into()
            } else {
                "epsilon".into()
            },
            epsilon_used: sol.attained.epsilon(),
            rank_of_x: rank,
            iterations: sol.iterations,
            runtime_seconds: sol
                .diagnostics
                .get("runtime_seconds")
                .copied()
                .unwrap_or(0.0),
            eigenvalues_of_symmetric_part: eig.eigenvalues,
        })
    }

    pub fn from_complex(
        sol: &ComplexSolution,
        x: &ComplexDense,
        b: &ComplexDense,
    ) -> Result<Self> {
        let embedded_rank = svd(&crate::complex::embed(x).matrix, None)?.numeric_rank;
        let herm_doubled = sol.a.add(&sol.a.adjoint());
        let eigenvalues = hermitian_eigenvalues(&herm_doubled)?;
        let (attained, epsilon_used) = match &sol.attained {
            Some(att) => (
                if att.is_attained() { "exact" } else { "epsilon" }.to_string(),
                att.epsilon(),
            ),
            None => ("unknown".to_string(), None),
        };
        Ok(SolveReport {
            objective: sol.objective,
            relative_error_percent: relative_error_percent(sol.objective, b.frobenius_norm()),
            attained,
            epsilon_used,
            rank_of_x: embedded_rank / 2,
            iterations: sol.iterations,
            runtime_seconds: sol
                .diagnostics
                .get("runtime_seconds")
                .copied()
                .unwrap_or(0.0),
            eigenvalues_of_symmetric_part: eigenvalues,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Argument(format!("report serialization failed: {e}")))
    }
}
