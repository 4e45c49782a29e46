//! On-disk datasets: a TOML schema plus a CSV data table, stored together in a directory.
//!
//! ```text
//! <dir>/schema.toml   factor names and value lists, code block dims, provenance
//! <dir>/data.csv      header f1..fN,z1..zM; factor value indices, then codes
//! ```
//!
//! Codes are written with 17 significant digits so that a save/load round trip is bit-exact.
//! Rows are written in row-major grid order; on load every grid point must appear exactly
//! once.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CodePartition, CodeTable, Factor, FactorGrid};
use crate::error::{Error, Result};

pub const SCHEMA_FILE: &str = "schema.toml";
pub const DATA_FILE: &str = "data.csv";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoder: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "seed_repr")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub id: String,
    pub provenance: Provenance,
    pub table: CodeTable,
}

impl Dataset {
    pub fn new(id: impl Into<String>, provenance: Provenance, table: CodeTable) -> Self {
        Dataset {
            id: id.into(),
            provenance,
            table,
        }
    }

    pub fn grid(&self) -> &FactorGrid {
        self.table.grid()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SchemaFile {
    id: String,
    #[serde(default)]
    provenance: Provenance,
    codes: CodesSection,
    factors: Vec<FactorSection>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CodesSection {
    block_dims: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FactorSection {
    name: String,
    values: FactorValues,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum FactorValues {
    Scalars(Vec<f64>),
    Vectors(Vec<Vec<f64>>),
}

impl From<&Factor> for FactorSection {
    fn from(f: &Factor) -> Self {
        let values = if f.width() == 1 {
            FactorValues::Scalars(f.values.iter().map(|v| v[0]).collect())
        } else {
            FactorValues::Vectors(f.values.clone())
        };
        FactorSection {
            name: f.name.clone(),
            values,
        }
    }
}

impl From<FactorSection> for Factor {
    fn from(s: FactorSection) -> Self {
        match s.values {
            FactorValues::Scalars(v) => Factor::scalar(s.name, v),
            FactorValues::Vectors(values) => Factor {
                name: s.name,
                values,
            },
        }
    }
}

/// Formats a float with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn save_dataset(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let table = &dataset.table;
    let grid = table.grid();

    let schema = SchemaFile {
        id: dataset.id.clone(),
        provenance: dataset.provenance.clone(),
        codes: CodesSection {
            block_dims: table.partition().block_dims().to_vec(),
        },
        factors: grid.factors().iter().map(FactorSection::from).collect(),
    };
    let schema_path = dir.join(SCHEMA_FILE);
    let text = toml::to_string_pretty(&schema)
        .map_err(|e| Error::schema(&schema_path, e.to_string()))?;
    fs::write(&schema_path, text).map_err(|e| Error::io(&schema_path, e))?;

    let data_path = dir.join(DATA_FILE);
    let mut out = String::new();
    let n = grid.num_factors();
    let m = table.partition().total_dim();
    let header: Vec<String> = (1..=n)
        .map(|i| format!("f{i}"))
        .chain((1..=m).map(|j| format!("z{j}")))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for k in 0..grid.len() {
        let fields: Vec<String> = grid
            .tuple_of(k)
            .into_iter()
            .map(|t| t.to_string())
            .chain(table.code(k).iter().map(|&v| format_f64(v)))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    fs::write(&data_path, out).map_err(|e| Error::io(&data_path, e))
}

pub fn load_dataset(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    let schema_path = dir.join(SCHEMA_FILE);
    let text = fs::read_to_string(&schema_path).map_err(|e| Error::io(&schema_path, e))?;
    let schema: SchemaFile =
        toml::from_str(&text).map_err(|e| Error::schema(&schema_path, e.message().to_string()))?;

    let grid = FactorGrid::new(schema.factors.into_iter().map(Factor::from).collect())
        .map_err(|e| Error::schema(&schema_path, e.to_string()))?;
    let partition = CodePartition::new(schema.codes.block_dims)
        .map_err(|e| Error::schema(&schema_path, e.to_string()))?;
    if partition.num_blocks() != grid.num_factors() {
        return Err(Error::schema(
            &schema_path,
            format!(
                "{} code blocks for {} factors",
                partition.num_blocks(),
                grid.num_factors()
            ),
        ));
    }

    let data_path = dir.join(DATA_FILE);
    let codes = read_codes(&data_path, &grid, partition.total_dim())?;
    let table = CodeTable::new(grid, partition, codes)?;
    Ok(Dataset {
        id: schema.id,
        provenance: schema.provenance,
        table,
    })
}

fn read_codes(path: &PathBuf, grid: &FactorGrid, code_dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();

    let n = grid.num_factors();
    for i in 0..n {
        let expected = format!("f{}", i + 1);
        if header.get(i) != Some(&expected) {
            return Err(Error::schema(path, format!("missing factor column `{expected}`")));
        }
    }
    let code_columns = &header[n..];
    for (j, name) in code_columns.iter().enumerate() {
        if *name != format!("z{}", j + 1) {
            return Err(Error::schema(path, format!("unexpected column `{name}`")));
        }
    }
    if code_columns.len() < code_dim {
        return Err(Error::schema(
            path,
            format!("missing code column `z{}`", code_columns.len() + 1),
        ));
    }
    if code_columns.len() > code_dim {
        return Err(Error::DimensionMismatch {
            context: "code columns versus schema block_dims",
            expected: code_dim,
            found: code_columns.len(),
        });
    }

    let mut codes: Vec<Option<Vec<f64>>> = vec![None; grid.len()];
    let mut rows = 0;
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        rows += 1;
        if rows > grid.len() {
            continue;
        }
        let mut tuple = Vec::with_capacity(n);
        for i in 0..n {
            let field = &record[i];
            let t: usize = field.trim().parse().map_err(|_| {
                Error::schema(path, format!("row {}: bad factor index `{field}`", r + 1))
            })?;
            tuple.push(t);
        }
        let index = grid.index_of(&tuple).map_err(|e| Error::PartialGrid {
            path: path.clone(),
            message: format!("row {}: {e}", r + 1),
        })?;
        let mut code = Vec::with_capacity(code_dim);
        for (j, field) in record.iter().skip(n).enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::schema(path, format!("row {}: bad code value `{field}`", r + 1))
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    path: path.clone(),
                    row: r + 1,
                    column: header[n + j].clone(),
                });
            }
            code.push(v);
        }
        if codes[index].replace(code).is_some() {
            return Err(Error::PartialGrid {
                path: path.clone(),
                message: format!("grid point {tuple:?} appears twice"),
            });
        }
    }
    if rows != grid.len() {
        return Err(Error::RowCount {
            path: path.clone(),
            expected: grid.len(),
            found: rows,
        });
    }
    codes
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c.ok_or_else(|| Error::PartialGrid {
                path: path.clone(),
                message: format!("grid point {:?} is missing", grid.tuple_of(k)),
            })
        })
        .collect()
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::schema(path, format!("{other:?}")),
    }
}

/// Seeds are written as TOML integers when they fit, and as strings otherwise.
mod seed_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match seed {
            Some(v) if *v <= i64::MAX as u64 => s.serialize_i64(*v as i64),
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Int(v)) => Ok(Some(v)),
            Some(Repr::Text(t)) => t.parse().map(Some).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let grid = FactorGrid::uniform(2, &[0.0, 0.5, 1.0]).unwrap();
        let table = CodeTable::from_fn(grid, CodePartition::new(vec![2, 1]).unwrap(), |y| {
            vec![y[0] / 3.0, -y[0] * std::f64::consts::PI, y[1].exp()]
        })
        .unwrap();
        let provenance = Provenance {
            generator: Some("test".into()),
            encoder: Some("custom".into()),
            seed: Some(u64::MAX),
            scale: Some(1.0),
        };
        Dataset::new("sample", provenance, table)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let ds = sample();
        save_dataset(&ds, dir.path()).unwrap();
        let back = load_dataset(dir.path()).unwrap();
        assert_eq!(back, ds);
        for (a, b) in back.table.codes().iter().flatten().zip(ds.table.codes().iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn vector_factors_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = FactorGrid::new(vec![
            Factor {
                name: "pos".into(),
                values: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            },
            Factor::scalar("s", [0.1, 0.2]),
        ])
        .unwrap();
        let table = CodeTable::from_fn(grid, CodePartition::new(vec![2, 1]).unwrap(), |y| y.to_vec()).unwrap();
        let ds = Dataset::new("vec", Provenance::default(), table);
        save_dataset(&ds, dir.path()).unwrap();
        assert_eq!(load_dataset(dir.path()).unwrap(), ds);
    }

    fn rewrite_data(dir: &Path, f: impl Fn(String) -> String) {
        let path = dir.join(DATA_FILE);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, f(text)).unwrap();
    }

    #[test]
    fn missing_code_column_is_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        save_dataset(&sample(), dir.path()).unwrap();
        rewrite_data(dir.path(), |text| {
            text.lines()
                .map(|l| l.rsplit_once(',').unwrap().0.to_owned() + "\n")
                .collect()
        });
        assert!(matches!(load_dataset(dir.path()), Err(Error::Schema { .. })));
    }

    #[test]
    fn extra_code_column_is_dimension_error() {
        let dir = tempfile::tempdir().unwrap();
        save_dataset(&sample(), dir.path()).unwrap();
        rewrite_data(dir.path(), |text| {
            text.lines()
                .enumerate()
                .map(|(i, l)| if i == 0 { format!("{l},z4\n") } else { format!("{l},0\n") })
                .collect()
        });
        assert!(matches!(
            load_dataset(dir.path()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn row_count_and_partial_grid_errors() {
        let dir = tempfile::tempdir().unwrap();
        save_dataset(&sample(), dir.path()).unwrap();
        rewrite_data(dir.path(), |text| {
            let mut lines: Vec<&str> = text.lines().collect();
            lines.pop();
            lines.join("\n") + "\n"
        });
        assert!(matches!(load_dataset(dir.path()), Err(Error::RowCount { .. })));

        save_dataset(&sample(), dir.path()).unwrap();
        rewrite_data(dir.path(), |text| text.replacen("\n0,1,", "\n0,0,", 1));
        assert!(matches!(load_dataset(dir.path()), Err(Error::PartialGrid { .. })));
    }

    #[test]
    fn non_finite_values_rejected() {
        let dir = tempfile::tempdir().unwrap();
        save_dataset(&sample(), dir.path()).unwrap();
        rewrite_data(dir.path(), |text| {
            let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
            let (head, _) = lines[3].rsplit_once(',').unwrap();
            lines[3] = format!("{head},NaN");
            lines.join("\n") + "\n"
        });
        assert!(matches!(load_dataset(dir.path()), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn malformed_schema() {
        let dir = tempfile::tempdir().unwrap();
        save_dataset(&sample(), dir.path()).unwrap();
        fs::write(dir.path().join(SCHEMA_FILE), "id = 3\n").unwrap();
        assert!(matches!(load_dataset(dir.path()), Err(Error::Schema { .. })));
        assert!(matches!(
            load_dataset(dir.path().join("nope")),
            Err(Error::Io { .. })
        ));
    }
}
