//! Market data: returns matrices, sample moment estimation, and the
//! comma-separated file formats used by the command-line tools.

use crate::error::{Error, Result};
use crate::linalg::min_eigenvalue;
use nalgebra::{DMatrix, DVector};

/// Per-period simple returns for a basket of assets, rows in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsMatrix {
    assets: Vec<String>,
    /// T x n, row t = returns of all assets in period t.
    data: DMatrix<f64>,
}

impl ReturnsMatrix {
    pub fn new(assets: Vec<String>, data: DMatrix<f64>) -> Result<Self> {
        let n = assets.len();
        if n == 0 {
            return Err(Error::Data("no assets".into()));
        }
        if data.nrows() < 2 {
            return Err(Error::Data(format!(
                "need at least 2 periods, got {}",
                data.nrows()
            )));
        }
        if data.ncols() != n {
            return Err(Error::Data(format!(
                "{} asset names but {} return columns",
                n,
                data.ncols()
            )));
        }
        for (i, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Data(format!(
                    "non-finite return at row {}, column {}",
                    i % data.nrows(),
                    i / data.nrows()
                )));
            }
        }
        let mut seen = assets.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::Data("duplicate asset identifiers".into()));
        }
        Ok(Self { assets, data })
    }

    pub fn assets(&self) -> &[String] {
        &self.assets
    }

    pub fn n_assets(&self) -> usize {
        self.assets.len()
    }

    pub fn n_periods(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Row `t` as a vector (one period across all assets).
    pub fn period(&self, t: usize) -> DVector<f64> {
        self.data.row(t).transpose()
    }

    /// Contiguous block of rows `[start, end)` as a new matrix.
    pub fn window(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.n_periods() {
            return Err(Error::Config(format!(
                "window [{start}, {end}) out of range for {} periods",
                self.n_periods()
            )));
        }
        Self::new(
            self.assets.clone(),
            self.data.rows(start, end - start).into_owned(),
        )
    }
}

/// Sample mean vector and covariance matrix standing in for the random
/// return vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketEstimate {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl MarketEstimate {
    /// Validates symmetry (1e-12 relative) and positive semidefiniteness
    /// (smallest eigenvalue >= -1e-10 * scale).
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::Data(format!(
                "mean has {} entries but covariance is {}x{}",
                n,
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) || cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite market estimate".into()));
        }
        let scale = cov.norm().max(1.0);
        if (cov.transpose() - &cov).norm() > 1e-12 * scale {
            return Err(Error::Data("covariance not symmetric".into()));
        }
        if min_eigenvalue(&cov) < -1e-10 * scale {
            return Err(Error::Data("covariance not positive semidefinite".into()));
        }
        Ok(Self { mean, cov })
    }

    pub fn n_assets(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Restriction of (mean, cov) to the given index set.
    pub fn restrict(&self, idx: &[usize]) -> MarketEstimate {
        let k = idx.len();
        let mean = DVector::from_fn(k, |i, _| self.mean[idx[i]]);
        let cov = DMatrix::from_fn(k, k, |i, j| self.cov[(idx[i], idx[j])]);
        MarketEstimate { mean, cov }
    }
}

/// Sample mean and unbiased (T-1) sample covariance, with the covariance
/// symmetrized by averaging with its transpose.
pub fn estimate_market(returns: &ReturnsMatrix) -> Result<MarketEstimate> {
    let t = returns.n_periods();
    let n = returns.n_assets();
    let data = returns.data();
    let mean = DVector::from_fn(n, |j, _| data.column(j).sum() / t as f64);
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for r in 0..t {
        let dev = data.row(r).transpose() - &mean;
        cov += &dev * dev.transpose();
    }
    cov /= (t - 1) as f64;
    let cov = (&cov + cov.transpose()) * 0.5;
    MarketEstimate::new(mean, cov)
}

/// Non-fatal issue noticed while reading a data file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseWarning {
    pub row: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "row {}, column {}: {}",
            self.row + 1,
            self.column + 1,
            self.message
        )
    }
}

fn split_csv_line(line: &str) -> Vec<String> {
    line.split(',').map(|s| s.trim().to_string()).collect()
}

/// Parses a returns file: first row asset identifiers, subsequent rows
/// per-period simple returns. Empty cells become 0.0 with a warning
/// (untraded day convention).
pub fn parse_returns_csv(text: &str) -> Result<(ReturnsMatrix, Vec<ParseWarning>)> {
    let (header, (rows, warnings)) = parse_numeric_table(text, |warnings, row, col| {
        warnings.push(ParseWarning {
            row,
            column: col,
            message: "empty cell treated as 0.0 return".into(),
        });
        Ok(0.0)
    })?;
    let n = header.len();
    let t = rows.len();
    if t < 2 {
        return Err(Error::Data(format!("need at least 2 return rows, got {t}")));
    }
    let data = DMatrix::from_fn(t, n, |r, c| rows[r][c]);
    Ok((ReturnsMatrix::new(header, data)?, warnings))
}

/// Parses a price file with the same layout and converts consecutive rows
/// to simple returns (P_t - P_{t-1}) / P_{t-1}. An empty cell repeats the
/// previous price (untraded day, zero return) with a warning; an empty
/// cell in the first price row is an error.
pub fn parse_prices_csv(text: &str) -> Result<(ReturnsMatrix, Vec<ParseWarning>)> {
    let (header, (mut prices, warnings)) = parse_numeric_table(text, |warnings, row, col| {
        if row == 0 {
            return Err(Error::Data(format!(
                "empty price in first row, column {}",
                col + 1
            )));
        }
        warnings.push(ParseWarning {
            row,
            column: col,
            message: "empty cell treated as previous price".into(),
        });
        Ok(f64::NAN) // placeholder resolved below
    })?;
    let n = header.len();
    if prices.len() < 3 {
        return Err(Error::Data(format!(
            "need at least 3 price rows for 2 returns, got {}",
            prices.len()
        )));
    }
    for r in 1..prices.len() {
        for c in 0..n {
            if prices[r][c].is_nan() {
                prices[r][c] = prices[r - 1][c];
            }
        }
    }
    let t = prices.len() - 1;
    let mut data = DMatrix::<f64>::zeros(t, n);
    for r in 0..t {
        for c in 0..n {
            let prev = prices[r][c];
            if prev == 0.0 {
                return Err(Error::Data(format!(
                    "zero price at row {}, column {} cannot seed a return",
                    r + 2,
                    c + 1
                )));
            }
            data[(r, c)] = (prices[r + 1][c] - prev) / prev;
        }
    }
    Ok((ReturnsMatrix::new(header, data)?, warnings))
}

type Table = (Vec<Vec<f64>>, Vec<ParseWarning>);

fn parse_numeric_table(
    text: &str,
    mut on_empty: impl FnMut(&mut Vec<ParseWarning>, usize, usize) -> Result<f64>,
) -> Result<(Vec<String>, Table)> {
    let mut lines = text
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty());
    let header = match lines.next() {
        Some(h) => split_csv_line(h),
        None => return Err(Error::Data("empty file".into())),
    };
    let n = header.len();
    if header.iter().any(|h| h.is_empty()) {
        return Err(Error::Data("empty asset identifier in header".into()));
    }
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (r, line) in lines.enumerate() {
        let cells = split_csv_line(line);
        if cells.len() != n {
            return Err(Error::Data(format!(
                "row {} has {} cells, expected {}",
                r + 2,
                cells.len(),
                n
            )));
        }
        let mut row = Vec::with_capacity(n);
        for (c, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                row.push(on_empty(&mut warnings, r, c)?);
            } else {
                let v: f64 = cell.parse().map_err(|_| {
                    Error::Data(format!("cannot parse '{}' at row {}, column {}", cell, r + 2, c + 1))
                })?;
                row.push(v);
            }
        }
        rows.push(row);
    }
    Ok((header, (rows, warnings)))
}

/// Writes a portfolio as `asset,weight` rows at full double precision.
pub fn format_weights(assets: &[String], weights: &DVector<f64>) -> String {
    let mut out = String::from("asset,weight\n");
    for (name, w) in assets.iter().zip(weights.iter()) {
        out.push_str(&format!("{},{:.17e}\n", name, w));
    }
    out
}

/// Reads a portfolio file written by [`format_weights`].
pub fn parse_weights(text: &str) -> Result<(Vec<String>, DVector<f64>)> {
    let mut assets = Vec::new();
    let mut weights = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == "asset,weight") {
            continue;
        }
        let parts = split_csv_line(line);
        if parts.len() != 2 {
            return Err(Error::Data(format!("weights row {} malformed", i + 1)));
        }
        let w: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Data(format!("bad weight '{}' at row {}", parts[1], i + 1)))?;
        assets.push(parts[0].clone());
        weights.push(w);
    }
    if assets.is_empty() {
        return Err(Error::Data("no weights in file".into()));
    }
    Ok((assets, DVector::from_vec(weights)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: &[&[f64]]) -> ReturnsMatrix {
        let n = rows[0].len();
        let assets = (0..n).map(|i| format!("A{i}")).collect();
        let data = DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c]);
        ReturnsMatrix::new(assets, data).unwrap()
    }

    #[test]
    fn constant_series_has_zero_moments() {
        let m = estimate_market(&rm(&[&[0.0], &[0.0]])).unwrap();
        assert_eq!(m.mean()[0], 0.0);
        assert_eq!(m.cov()[(0, 0)], 0.0);
    }

    #[test]
    fn sample_variance_uses_t_minus_one() {
        let m = estimate_market(&rm(&[&[0.01], &[0.02], &[0.03]])).unwrap();
        assert!((m.mean()[0] - 0.02).abs() < 1e-15);
        assert!((m.cov()[(0, 0)] - 0.0001).abs() < 1e-15);
    }

    #[test]
    fn nan_input_is_a_data_error() {
        let data = DMatrix::from_row_slice(2, 1, &[0.1, f64::NAN]);
        let err = ReturnsMatrix::new(vec!["A".into()], data).unwrap_err();
        assert!(matches!(err, Error::Data(_)));
    }

    #[test]
    fn fewer_than_two_periods_rejected() {
        let data = DMatrix::from_row_slice(1, 1, &[0.1]);
        assert!(matches!(
            ReturnsMatrix::new(vec!["A".into()], data),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn duplicate_assets_rejected() {
        let data = DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.3, 0.4]);
        assert!(ReturnsMatrix::new(vec!["A".into(), "A".into()], data).is_err());
    }

    #[test]
    fn covariance_is_symmetric_psd_on_random_data() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let data = DMatrix::from_fn(30, 6, |_, _| rng.gen_range(-0.05..0.05));
        let assets = (0..6).map(|i| format!("S{i}")).collect();
        let r = ReturnsMatrix::new(assets, data).unwrap();
        let m = estimate_market(&r).unwrap();
        assert_eq!(m.cov(), &m.cov().transpose());
        assert!(min_eigenvalue(m.cov()) > -1e-12);
    }

    #[test]
    fn returns_csv_round_trip_with_empty_cell() {
        let text = "AAA,BBB\n0.01,0.02\n,0.03\n";
        let (r, warnings) = parse_returns_csv(text).unwrap();
        assert_eq!(r.assets(), &["AAA".to_string(), "BBB".to_string()]);
        assert_eq!(r.data()[(1, 0)], 0.0);
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].row, 1);
        assert_eq!(warnings[0].column, 0);
    }

    #[test]
    fn prices_mode_converts_and_carries_forward() {
        let text = "A,B\n100,50\n110,\n99,55\n";
        let (r, warnings) = parse_prices_csv(text).unwrap();
        assert_eq!(r.n_periods(), 2);
        assert!((r.data()[(0, 0)] - 0.10).abs() < 1e-12);
        assert_eq!(r.data()[(0, 1)], 0.0); // carried-forward price
        assert!((r.data()[(1, 1)] - 0.10).abs() < 1e-12);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(parse_returns_csv("A,B\n0.1\n0.2,0.3\n").is_err());
    }

    #[test]
    fn weights_file_round_trips() {
        let assets = vec!["X".to_string(), "Y".to_string()];
        let w = DVector::from_vec(vec![0.25, 0.75]);
        let text = format_weights(&assets, &w);
        let (a2, w2) = parse_weights(&text).unwrap();
        assert_eq!(a2, assets);
        assert!((w2 - w).norm() < 1e-16);
    }
}
