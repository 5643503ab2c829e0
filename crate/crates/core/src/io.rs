//! On-disk formats: CSV tables, pretty JSON documents and SHA-256 digests.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! yields the exact values that were written. Invalid values are the literal
//! `NA`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{CorrMatrix, CorrelationGraph, Embedding2D};
use crate::error::{Error, Result};
use crate::problem::{ProblemId, SetLabel};
use crate::sampling::SampleSet;
use crate::subspace::FeatureMatrix;

pub const NA: &str = "NA";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&read_bytes(path)?))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| Error::Json {
        path: "<memory>".into(),
        source: e,
    })?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_bytes(path, &to_json_bytes(value)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_slice(&read_bytes(path)?).map_err(|e| Error::Json {
        path: path.into(),
        source: e,
    })
}

fn fmt_f64(v: f64) -> String {
    // Display is the shortest representation that parses back to `v`
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), fmt_f64)
}

fn table_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Csv {
        path: "<memory>".into(),
        source: e,
    };
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::InvalidInput(format!("csv buffer: {e}")))
}

/// Header and string records of a CSV file.
fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let bytes = read_bytes(path)?;
    let mut r = csv::Reader::from_reader(bytes.as_slice());
    let csv_err = |e: csv::Error| Error::Csv {
        path: path.into(),
        source: e,
    };
    let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

fn parse_f64(path: &Path, s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::InvalidInput(format!("{}: cannot parse {s:?} as a number", path.display())))
}

fn parse_opt(path: &Path, s: &str) -> Result<Option<f64>> {
    if s == NA {
        Ok(None)
    } else {
        parse_f64(path, s).map(Some)
    }
}

fn parse_id(path: &Path, label: &str, index: &str) -> Result<ProblemId> {
    let set_label: SetLabel = label.parse()?;
    let index = index
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{}: bad problem index {index:?}", path.display())))?;
    Ok(ProblemId { set_label, index })
}

fn expect_header(path: &Path, header: &[String], expected: &[String]) -> Result<()> {
    if header != expected {
        return Err(Error::InvalidInput(format!(
            "{}: unexpected header [{}], expected [{}]",
            path.display(),
            header.join(","),
            expected.join(",")
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- samples

pub fn sample_csv(s: &SampleSet) -> Result<Vec<u8>> {
    let d = s.dimension();
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.push("y".into());
    let rows: Vec<Vec<String>> = s
        .x
        .iter()
        .zip(&s.y)
        .map(|(row, y)| row.iter().chain([y]).map(|v| fmt_f64(*v)).collect())
        .collect();
    table_bytes(&header, &rows)
}

pub fn read_sample_csv(path: &Path, id: ProblemId) -> Result<SampleSet> {
    let (header, rows) = read_table(path)?;
    let d = header.len().saturating_sub(1);
    let mut expected: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    expected.push("y".into());
    expect_header(path, &header, &expected)?;
    let mut x = Vec::with_capacity(rows.len());
    let mut y = Vec::with_capacity(rows.len());
    for r in &rows {
        let vals = r.iter().map(|s| parse_f64(path, s)).collect::<Result<Vec<_>>>()?;
        y.push(vals[d]);
        x.push(vals[..d].to_vec());
    }
    SampleSet::new(id, x, y)
}

// ---------------------------------------------------------------- features

pub fn features_csv(m: &FeatureMatrix) -> Result<Vec<u8>> {
    let mut header = vec!["set_label".to_string(), "index".to_string()];
    header.extend(m.columns().iter().cloned());
    let rows: Vec<Vec<String>> = m
        .row_ids()
        .iter()
        .zip(m.data())
        .map(|(id, row)| {
            let mut r = vec![id.set_label.to_string(), id.index.to_string()];
            r.extend(row.iter().map(|v| fmt_opt(*v)));
            r
        })
        .collect();
    table_bytes(&header, &rows)
}

pub fn read_features_csv(path: &Path) -> Result<FeatureMatrix> {
    let (header, rows) = read_table(path)?;
    if header.len() < 2 || header[0] != "set_label" || header[1] != "index" {
        return Err(Error::InvalidInput(format!(
            "{}: feature table must start with set_label,index",
            path.display()
        )));
    }
    let mut ids = Vec::with_capacity(rows.len());
    let mut data = Vec::with_capacity(rows.len());
    for r in &rows {
        ids.push(parse_id(path, &r[0], &r[1])?);
        data.push(r[2..].iter().map(|s| parse_opt(path, s)).collect::<Result<Vec<_>>>()?);
    }
    FeatureMatrix::new(ids, header[2..].to_vec(), data)
}

// ---------------------------------------------------------------- coordinates

pub fn coordinates_csv(ids: &[ProblemId], coords: &[Vec<f64>]) -> Result<Vec<u8>> {
    let k = coords.first().map_or(0, Vec::len);
    let mut header = vec!["set_label".to_string(), "index".to_string()];
    header.extend((1..=k).map(|t| format!("c{t}")));
    let rows: Vec<Vec<String>> = ids
        .iter()
        .zip(coords)
        .map(|(id, c)| {
            let mut r = vec![id.set_label.to_string(), id.index.to_string()];
            r.extend(c.iter().map(|v| fmt_f64(*v)));
            r
        })
        .collect();
    table_bytes(&header, &rows)
}

pub fn read_coordinates_csv(path: &Path) -> Result<(Vec<ProblemId>, Vec<Vec<f64>>)> {
    let (header, rows) = read_table(path)?;
    let k = header.len().saturating_sub(2);
    let mut expected = vec!["set_label".to_string(), "index".to_string()];
    expected.extend((1..=k).map(|t| format!("c{t}")));
    expect_header(path, &header, &expected)?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut coords = Vec::with_capacity(rows.len());
    for r in &rows {
        ids.push(parse_id(path, &r[0], &r[1])?);
        coords.push(r[2..].iter().map(|s| parse_f64(path, s)).collect::<Result<Vec<_>>>()?);
    }
    Ok((ids, coords))
}

// ---------------------------------------------------------------- analysis

pub fn embedding_csv(e: &Embedding2D) -> Result<Vec<u8>> {
    let header = ["set_label", "index", "ex", "ey"].map(String::from);
    let rows: Vec<Vec<String>> = e
        .rows
        .iter()
        .map(|r| vec![r.id.set_label.to_string(), r.id.index.to_string(), fmt_f64(r.x), fmt_f64(r.y)])
        .collect();
    table_bytes(&header, &rows)
}

pub fn corr_matrix_csv(ids: &[ProblemId], m: &CorrMatrix) -> Result<Vec<u8>> {
    let mut header = vec!["problem".to_string()];
    header.extend(ids.iter().map(ToString::to_string));
    let rows: Vec<Vec<String>> = ids
        .iter()
        .zip(&m.values)
        .map(|(id, row)| {
            let mut r = vec![id.to_string()];
            r.extend(row.iter().map(|v| fmt_opt(*v)));
            r
        })
        .collect();
    table_bytes(&header, &rows)
}

/// Edges by row index into the matching correlation matrix.
pub fn edges_csv(g: &CorrelationGraph) -> Result<Vec<u8>> {
    let header = ["i", "j", "r"].map(String::from);
    let rows: Vec<Vec<String>> = g
        .edges
        .iter()
        .map(|e| vec![e.i.to_string(), e.j.to_string(), fmt_f64(e.r)])
        .collect();
    table_bytes(&header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_round_trip_is_exact() {
        let s = SampleSet::new(
            ProblemId::coco(3),
            vec![vec![0.1, -4.999999999999999], vec![1e-300, 2.0 / 3.0]],
            vec![f64::MAX, -0.0],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("coco_3.csv");
        write_bytes(&path, &sample_csv(&s).unwrap()).unwrap();
        let back = read_sample_csv(&path, s.problem_id).unwrap();
        assert_eq!(back.x, s.x);
        assert_eq!(back.y.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), s.y.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn features_keep_invalid_marks() {
        let m = FeatureMatrix::new(
            vec![ProblemId::coco(1), ProblemId::generated(0)],
            vec!["a".into(), "b".into()],
            vec![vec![Some(1.5), None], vec![None, Some(-2.0)]],
        )
        .unwrap();
        let bytes = features_csv(&m).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert_eq!(text, "set_label,index,a,b\nCOCO,1,1.5,NA\nGENERATED,0,NA,-2\n");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        write_bytes(&path, &bytes).unwrap();
        assert_eq!(read_features_csv(&path).unwrap(), m);
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
