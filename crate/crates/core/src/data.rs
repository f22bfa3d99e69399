//! Grouped-sample data model, per-group summaries, and the scatter matrices.
//!
//! Observations are stored one per row. Every test statistic in this crate
//! consumes a [`GroupedData`]: `k >= 2` groups sharing a common dimension `p`.

use std::io::{Read, Write};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Relative tolerance for symmetry checks on computed covariances.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Smallest group for which both split halves have at least two rows
/// (`n = 5` splits as `(3, 2)`; `n = 4` would leave a single row).
pub const MIN_SPLIT_SIZE: usize = 5;

/// `n x p` block of observations from one population.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SampleMatrix(Matrix);

impl SampleMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::invalid(format!(
                "sample matrix must be non-empty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        for (i, row) in m.iter_rows().enumerate() {
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
        Ok(SampleMatrix(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        SampleMatrix::new(Matrix::from_rows(rows)?)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.rows()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.0.cols()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn mean(&self) -> Vec<f64> {
        mean_of_rows(&self.0, 0..self.n())
    }

    /// Sample covariance with divisor `n - 1`.
    pub fn covariance(&self) -> Result<Matrix> {
        covariance_of_rows(&self.0, 0..self.n())
    }

    /// Sizes `(n1, n2)` of the two halves, `n1 = floor(n/2) + 1`.
    pub fn split_sizes(&self) -> (usize, usize) {
        split_sizes(self.n())
    }

    /// Covariances of the first `n1` and the remaining `n2` rows, in the
    /// given row order. Needs `n >= MIN_SPLIT_SIZE` so both halves have two
    /// rows.
    pub fn split_covariances(&self) -> Result<(Matrix, Matrix)> {
        let n = self.n();
        if n < MIN_SPLIT_SIZE {
            return Err(Error::GroupTooSmall {
                group: 0,
                size: n,
                required: MIN_SPLIT_SIZE,
            });
        }
        let (n1, _) = split_sizes(n);
        Ok((
            covariance_of_rows(&self.0, 0..n1)?,
            covariance_of_rows(&self.0, n1..n)?,
        ))
    }
}

impl TryFrom<Matrix> for SampleMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        SampleMatrix::new(m)
    }
}

impl From<SampleMatrix> for Matrix {
    fn from(s: SampleMatrix) -> Matrix {
        s.0
    }
}

/// `n1 = floor(n/2) + 1`, `n2 = n - n1`.
pub fn split_sizes(n: usize) -> (usize, usize) {
    let n1 = n / 2 + 1;
    (n1, n.saturating_sub(n1))
}

fn mean_of_rows(m: &Matrix, rows: Range<usize>) -> Vec<f64> {
    let mut mean = vec![0.0; m.cols()];
    let count = rows.len() as f64;
    for i in rows {
        for (acc, x) in mean.iter_mut().zip(m.row(i)) {
            *acc += x;
        }
    }
    mean.iter_mut().for_each(|x| *x /= count);
    mean
}

fn covariance_of_rows(m: &Matrix, rows: Range<usize>) -> Result<Matrix> {
    let count = rows.len();
    if count < 2 {
        return Err(Error::GroupTooSmall {
            group: 0,
            size: count,
            required: 2,
        });
    }
    let p = m.cols();
    let mean = mean_of_rows(m, rows.clone());
    let mut centered = Vec::with_capacity(count * p);
    for i in rows {
        centered.extend(m.row(i).iter().zip(&mean).map(|(x, mu)| x - mu));
    }
    let mut cov = Matrix::zeros(p, p);
    let scale = 1.0 / (count as f64 - 1.0);
    // SAFETY: `centered` is count x p row-major, read transposed via strides
    // (1, p); `cov` is p x p.
    unsafe {
        let out = cov.row_mut(0).as_mut_ptr();
        matrixmultiply::dgemm(
            p,
            count,
            p,
            scale,
            centered.as_ptr(),
            1,
            p as isize,
            centered.as_ptr(),
            p as isize,
            1,
            0.0,
            out,
            p as isize,
            1,
        );
    }
    let asym = cov.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    cov.symmetrize();
    Ok(cov)
}

/// `k >= 2` groups of observations sharing the dimension `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupedData {
    groups: Vec<SampleMatrix>,
    labels: Vec<String>,
}

impl GroupedData {
    /// Groups are labelled `1..=k`.
    pub fn new(groups: Vec<SampleMatrix>) -> Result<Self> {
        let labels = (1..=groups.len()).map(|l| l.to_string()).collect();
        GroupedData::with_labels(groups, labels)
    }

    pub fn with_labels(groups: Vec<SampleMatrix>, labels: Vec<String>) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::TooFewGroups {
                required: 2,
                found: groups.len(),
            });
        }
        if labels.len() != groups.len() {
            return Err(Error::DimensionMismatch {
                expected: groups.len(),
                found: labels.len(),
            });
        }
        let p = groups[0].p();
        for (l, g) in groups.iter().enumerate() {
            if g.p() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: g.p(),
                });
            }
            if g.n() < 2 {
                return Err(Error::GroupTooSmall {
                    group: l,
                    size: g.n(),
                    required: 2,
                });
            }
        }
        Ok(GroupedData { groups, labels })
    }

    /// Convenience constructor from nested row lists.
    pub fn from_rows(groups: &[Vec<Vec<f64>>]) -> Result<Self> {
        let groups = groups
            .iter()
            .map(|g| SampleMatrix::from_rows(g))
            .collect::<Result<Vec<_>>>()?;
        GroupedData::new(groups)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.groups.len()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.groups[0].p()
    }

    pub fn groups(&self) -> &[SampleMatrix] {
        &self.groups
    }

    pub fn group(&self, l: usize) -> &SampleMatrix {
        &self.groups[l]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(SampleMatrix::n).collect()
    }

    /// Total sample size `n = sum n_l`.
    pub fn total(&self) -> usize {
        self.groups.iter().map(SampleMatrix::n).sum()
    }

    /// Sample fractions `n_l / n`.
    pub fn lambdas(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.groups.iter().map(|g| g.n() as f64 / n).collect()
    }

    /// Errors with [`Error::GroupTooSmall`] unless every group has at least
    /// `required` samples.
    pub fn require_group_size(&self, required: usize) -> Result<()> {
        match self.groups.iter().position(|g| g.n() < required) {
            Some(l) => Err(Error::GroupTooSmall {
                group: l,
                size: self.groups[l].n(),
                required,
            }),
            None => Ok(()),
        }
    }

    /// Applies `f` to every observation, producing a new dataset with the
    /// same group structure. `f` receives the input row and the output row.
    pub fn map_rows(&self, out_dim: usize, mut f: impl FnMut(&[f64], &mut [f64])) -> Result<Self> {
        let groups = self
            .groups
            .iter()
            .map(|g| {
                let mut m = Matrix::zeros(g.n(), out_dim);
                for i in 0..g.n() {
                    f(g.row(i), m.row_mut(i));
                }
                SampleMatrix::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        GroupedData::with_labels(groups, self.labels.clone())
    }
}

/// Per-group moments.
#[derive(Clone, Debug)]
pub struct GroupStats {
    pub n: usize,
    pub mean: Vec<f64>,
    pub covariance: Matrix,
    pub split_sizes: (usize, usize),
    pub split_covariances: (Matrix, Matrix),
}

#[derive(Clone, Debug)]
pub struct GroupSummary {
    pub groups: Vec<GroupStats>,
    /// `sum n_l xbar_l / n`.
    pub pooled_mean: Vec<f64>,
}

/// Means, full-sample covariances and split-half covariances of every group.
/// Requires `n_l >= MIN_SPLIT_SIZE`.
pub fn summarize(data: &GroupedData) -> Result<GroupSummary> {
    data.require_group_size(MIN_SPLIT_SIZE)?;
    let n = data.total() as f64;
    let mut pooled_mean = vec![0.0; data.p()];
    let mut groups = Vec::with_capacity(data.k());
    for g in data.groups() {
        let mean = g.mean();
        for (acc, m) in pooled_mean.iter_mut().zip(&mean) {
            *acc += g.n() as f64 * m / n;
        }
        groups.push(GroupStats {
            n: g.n(),
            mean,
            covariance: g.covariance()?,
            split_sizes: g.split_sizes(),
            split_covariances: g.split_covariances()?,
        });
    }
    Ok(GroupSummary {
        groups,
        pooled_mean,
    })
}

/// Within-group scatter `E1` (divisor `n - k`) and between-group scatter
/// `E2` (divisor `k - 1`, weights `n_l`, deviations from the pooled mean).
pub fn scatter_matrices(data: &GroupedData) -> Result<(Matrix, Matrix)> {
    let k = data.k();
    let n = data.total();
    if n <= k {
        return Err(Error::GroupTooSmall {
            group: 0,
            size: n,
            required: k + 1,
        });
    }
    let p = data.p();
    let means: Vec<Vec<f64>> = data.groups().iter().map(SampleMatrix::mean).collect();
    let mut pooled = vec![0.0; p];
    for (g, m) in data.groups().iter().zip(&means) {
        for (acc, x) in pooled.iter_mut().zip(m) {
            *acc += g.n() as f64 * x / n as f64;
        }
    }

    let mut e1 = Matrix::zeros(p, p);
    for g in data.groups() {
        let cov = g.covariance()?;
        let w = (g.n() as f64 - 1.0) / (n - k) as f64;
        for i in 0..p {
            for j in 0..p {
                e1[(i, j)] += w * cov[(i, j)];
            }
        }
    }

    let mut e2 = Matrix::zeros(p, p);
    for (g, m) in data.groups().iter().zip(&means) {
        let d: Vec<f64> = m.iter().zip(&pooled).map(|(a, b)| a - b).collect();
        let w = g.n() as f64 / (k - 1) as f64;
        for i in 0..p {
            for j in 0..p {
                e2[(i, j)] += w * d[i] * d[j];
            }
        }
    }
    Ok((e1, e2))
}

/// Reads the long-format CSV contract: header `group,x1,...,xp`, one
/// observation per row. Labels map to groups in first-appearance order.
pub fn read_csv<R: Read>(reader: R) -> Result<GroupedData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let malformed = |line: u64, reason: String| Error::MalformedCsv { line, reason };

    let headers = rdr
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    if headers.len() < 2 {
        return Err(malformed(
            1,
            "need a group column and at least one variable".into(),
        ));
    }
    if !headers[0].eq_ignore_ascii_case("group") {
        return Err(malformed(
            1,
            format!("first column must be `group`, found `{}`", &headers[0]),
        ));
    }
    let p = headers.len() - 1;

    let mut labels: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |pos| pos.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |pos| pos.line());
        let label = &record[0];
        if label.is_empty() {
            return Err(malformed(line, "empty group label".into()));
        }
        let l = match labels.iter().position(|x| x == label) {
            Some(l) => l,
            None => {
                labels.push(label.to_string());
                rows.push(Vec::new());
                labels.len() - 1
            }
        };
        for (j, cell) in record.iter().skip(1).enumerate() {
            if cell.is_empty() {
                return Err(malformed(
                    line,
                    format!("missing value in column {}", j + 2),
                ));
            }
            let x: f64 = cell
                .parse()
                .map_err(|_| malformed(line, format!("cannot parse `{cell}` as a number")))?;
            if !x.is_finite() {
                return Err(malformed(line, format!("non-finite value `{cell}`")));
            }
            rows[l].push(x);
        }
    }

    let groups = rows
        .into_iter()
        .map(|flat| {
            let n = flat.len() / p;
            SampleMatrix::new(Matrix::from_vec(n, p, flat)?)
        })
        .collect::<Result<Vec<_>>>()?;
    GroupedData::with_labels(groups, labels)
}

pub fn read_csv_path(path: impl AsRef<Path>) -> Result<GroupedData> {
    let f = std::fs::File::open(path.as_ref())?;
    read_csv(std::io::BufReader::new(f))
}

/// Writes `data` in the format accepted by [`read_csv`]. Values are printed
/// in shortest round-trip form, so re-reading is exact.
pub fn write_csv<W: Write>(data: &GroupedData, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    let mut header = vec!["group".to_string()];
    header.extend((1..=data.p()).map(|j| format!("x{j}")));
    w.write_record(&header).map_err(csv_err)?;
    for (g, label) in data.groups().iter().zip(data.labels()) {
        for i in 0..g.n() {
            let mut rec = Vec::with_capacity(data.p() + 1);
            rec.push(label.clone());
            rec.extend(g.row(i).iter().map(|x| x.to_string()));
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
