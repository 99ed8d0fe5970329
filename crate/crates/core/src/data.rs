//! Columnar numeric datasets, CSV I/O, and seeded resampling.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(String),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("non-numeric value `{value}` at row {row}, column `{column}`")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("column `{0}` already exists")]
    NameClash(String),
    #[error("invalid column name `{0}`")]
    InvalidName(String),
    #[error("column `{name}` has {found} values, dataset has {expected} rows")]
    LengthMismatch {
        name: String,
        found: usize,
        expected: usize,
    },
    #[error("dataset is empty")]
    Empty,
    #[error("subset fraction must lie in (0, 1], got {0}")]
    FractionOutOfRange(f64),
}

/// Seed for every pseudo-random draw in the crate.
///
/// Draws come from ChaCha20 (`rand_chacha` 0.9.0, pinned) keyed by
/// `seed_from_u64(seed)`, with the 64-bit ChaCha stream id selecting an
/// independent stream. Nested work (replication `i` of a refuter, dataset `i`
/// of a simulation) uses [`RandomSeed::derive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    /// Generator for stream `stream` of this seed.
    pub fn stream(self, stream: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }

    pub fn rng(self) -> ChaCha20Rng {
        self.stream(0)
    }

    /// Child seed for sub-task `index` (SplitMix64 finalizer over the pair).
    pub fn derive(self, index: u64) -> RandomSeed {
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RandomSeed(z ^ (z >> 31))
    }
}

impl fmt::Display for RandomSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Named-column table of finite `f64` values.
///
/// Columns are reference counted, so deriving a modified dataset only copies
/// the columns that change.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Arc<[f64]>>,
    rows: usize,
}

fn valid_column_name(name: &str) -> bool {
    crate::graph::is_valid_name(name)
}

impl Dataset {
    /// Builds a dataset from `(name, values)` pairs.
    pub fn new<S: Into<String>>(
        columns: impl IntoIterator<Item = (S, Vec<f64>)>,
    ) -> Result<Self, DataError> {
        let mut names = Vec::new();
        let mut cols: Vec<Arc<[f64]>> = Vec::new();
        let mut rows = None;
        for (name, values) in columns {
            let name = name.into();
            if !valid_column_name(&name) {
                return Err(DataError::InvalidName(name));
            }
            if names.contains(&name) {
                return Err(DataError::NameClash(name));
            }
            let expected = *rows.get_or_insert(values.len());
            if values.len() != expected {
                return Err(DataError::LengthMismatch {
                    name,
                    found: values.len(),
                    expected,
                });
            }
            if let Some((row, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(DataError::NonNumeric {
                    row: row + 1,
                    column: name,
                    value: v.to_string(),
                });
            }
            names.push(name);
            cols.push(values.into());
        }
        Ok(Dataset {
            names,
            columns: cols,
            rows: rows.unwrap_or(0),
        })
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn column_count(&self) -> usize {
        self.names.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Result<&[f64], DataError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &*self.columns[i])
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))
    }

    /// Copy with an additional column appended.
    pub fn with_column(&self, name: &str, values: Vec<f64>) -> Result<Dataset, DataError> {
        if self.has_column(name) {
            return Err(DataError::NameClash(name.to_string()));
        }
        if !valid_column_name(name) {
            return Err(DataError::InvalidName(name.to_string()));
        }
        self.check_values(name, &values)?;
        let mut out = self.clone();
        if out.names.is_empty() {
            out.rows = values.len();
        }
        out.names.push(name.to_string());
        out.columns.push(values.into());
        Ok(out)
    }

    /// Copy with an existing column's values replaced.
    pub fn replace_column(&self, name: &str, values: Vec<f64>) -> Result<Dataset, DataError> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))?;
        self.check_values(name, &values)?;
        let mut out = self.clone();
        out.columns[i] = values.into();
        Ok(out)
    }

    fn check_values(&self, name: &str, values: &[f64]) -> Result<(), DataError> {
        if !self.names.is_empty() && values.len() != self.rows {
            return Err(DataError::LengthMismatch {
                name: name.to_string(),
                found: values.len(),
                expected: self.rows,
            });
        }
        if let Some((row, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(DataError::NonNumeric {
                row: row + 1,
                column: name.to_string(),
                value: v.to_string(),
            });
        }
        Ok(())
    }

    /// Dataset made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect::<Vec<_>>().into())
            .collect();
        Dataset {
            names: self.names.clone(),
            columns,
            rows: rows.len(),
        }
    }

    /// Resample `row_count` rows with replacement.
    pub fn bootstrap_sample(&self, seed: RandomSeed) -> Result<Dataset, DataError> {
        if self.rows == 0 {
            return Err(DataError::Empty);
        }
        let mut rng = seed.rng();
        let rows: Vec<usize> = (0..self.rows)
            .map(|_| rng.random_range(0..self.rows))
            .collect();
        Ok(self.select_rows(&rows))
    }

    /// Uniform random subset of `ceil(fraction * row_count)` rows without
    /// replacement. Selected rows keep their original relative order, so a
    /// fraction of 1.0 returns the dataset unchanged.
    pub fn subset_sample(&self, fraction: f64, seed: RandomSeed) -> Result<Dataset, DataError> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(DataError::FractionOutOfRange(fraction));
        }
        let k = (fraction * self.rows as f64).ceil() as usize;
        if k == 0 {
            return Err(DataError::Empty);
        }
        let mut rng = seed.rng();
        let mut rows = index::sample(&mut rng, self.rows, k.min(self.rows)).into_vec();
        rows.sort_unstable();
        Ok(self.select_rows(&rows))
    }

    /// Reads CSV with a header row. When `required` is non-empty only those
    /// columns are loaded (in file order); otherwise every column is.
    pub fn read_csv<R: Read>(reader: R, required: &BTreeSet<String>) -> Result<Dataset, DataError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| DataError::Csv(e.to_string()))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        for name in required {
            if !header.contains(name) {
                return Err(DataError::MissingColumn(name.clone()));
            }
        }
        let keep: Vec<usize> = (0..header.len())
            .filter(|&i| required.is_empty() || required.contains(&header[i]))
            .collect();
        let mut values: Vec<Vec<f64>> = vec![Vec::new(); keep.len()];
        for (r, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
            let row = r + 1;
            if record.len() != header.len() {
                return Err(DataError::Ragged {
                    row,
                    found: record.len(),
                    expected: header.len(),
                });
            }
            for (slot, &i) in keep.iter().enumerate() {
                let cell = record[i].trim();
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => values[slot].push(v),
                    _ => {
                        return Err(DataError::NonNumeric {
                            row,
                            column: header[i].clone(),
                            value: cell.to_string(),
                        })
                    }
                }
            }
        }
        Dataset::new(keep.iter().map(|&i| header[i].clone()).zip(values))
    }

    pub fn load_csv(
        path: impl AsRef<Path>,
        required: &BTreeSet<String>,
    ) -> Result<Dataset, DataError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Dataset::read_csv(std::io::BufReader::new(file), required)
    }

    /// Writes CSV with shortest round-trip float formatting.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        let map = |e: csv::Error| DataError::Csv(e.to_string());
        w.write_record(&self.names).map_err(map)?;
        let mut row = Vec::with_capacity(self.names.len());
        for r in 0..self.rows {
            row.clear();
            row.extend(self.columns.iter().map(|c| c[r].to_string()));
            w.write_record(&row).map_err(map)?;
        }
        w.flush().map_err(|e| DataError::Csv(e.to_string()))
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<(), DataError> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}
