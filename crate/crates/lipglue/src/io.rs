//! File formats: JSON documents for spaces, pairs, functions, covers, and
//! point clouds, plus the CSV layout for refinement sweeps.
//!
//! Documents are plain serde structs so the formats stay visible in one
//! place. Loading goes through the same constructors as programmatic use,
//! which is what turns a malformed file (non-square matrix, negative entry,
//! out-of-range index) into an input error rather than a panic; JSON itself
//! cannot carry NaN, so non-finite entries are rejected at parse time.
//!
//! A function document may either embed its two spaces or reference them by
//! file path; relative paths are resolved against the directory of the
//! referencing document, so fixture trees can be moved around freely.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{EmbeddedSample, SweepRecord};
use crate::lipschitz::MappedFunction;
use crate::locality::Cover;
use crate::space::{default_labels, FiniteMetricSpace, SubsetPair};

/// A metric space on disk: `{"labels": [...], "dist": [[...]]}` with the
/// full (not triangular) row-major matrix. Labels may be omitted, in which
/// case points are named p0, p1, ...
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub dist: Vec<Vec<f64>>,
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        SpaceDoc {
            labels: Some(space.labels().to_vec()),
            dist: space.rows(),
        }
    }

    pub fn into_space(self) -> Result<FiniteMetricSpace> {
        let labels = match self.labels {
            Some(l) => l,
            None => default_labels(self.dist.len()),
        };
        FiniteMetricSpace::new(labels, self.dist)
    }
}

/// A subset pair on disk: `{"A": [...], "B": [...]}` with point indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDoc {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

impl PairDoc {
    pub fn from_pair(pair: &SubsetPair) -> Self {
        PairDoc {
            a: pair.a().to_vec(),
            b: pair.b().to_vec(),
        }
    }

    pub fn into_pair(self, n: usize) -> Result<SubsetPair> {
        SubsetPair::new(self.a, self.b, n)
    }
}

/// A space embedded in a function document: either inline or a path to a
/// space file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceDoc),
}

impl SpaceRef {
    fn resolve(self, base_dir: &Path) -> Result<FiniteMetricSpace> {
        match self {
            SpaceRef::Inline(doc) => doc.into_space(),
            SpaceRef::Path(p) => load_space(&base_dir.join(p)),
        }
    }
}

/// A function on disk: `{"domain": <space or path>, "codomain": <space or
/// path>, "assignment": [...]}` where `assignment[i]` is the codomain index
/// of domain point i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub domain: SpaceRef,
    pub codomain: SpaceRef,
    pub assignment: Vec<usize>,
}

/// A cover on disk: `{"regions": [[...], ...]}` with index lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverDoc {
    pub regions: Vec<Vec<usize>>,
}

/// A sampled point cloud on disk: `{"dim": n, "points": [[...]], "A": [...],
/// "B": [...]}`, coordinates plus the subset tags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CloudDoc {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

impl CloudDoc {
    pub fn from_sample(sample: &EmbeddedSample) -> Self {
        CloudDoc {
            dim: sample.dim(),
            points: sample.coordinates().to_vec(),
            a: sample.a_indices().to_vec(),
            b: sample.b_indices().to_vec(),
        }
    }
}

pub fn load_space(path: &Path) -> Result<FiniteMetricSpace> {
    let text = std::fs::read_to_string(path)?;
    let doc: SpaceDoc = serde_json::from_str(&text)?;
    doc.into_space()
}

pub fn load_pair(path: &Path, n: usize) -> Result<SubsetPair> {
    let text = std::fs::read_to_string(path)?;
    let doc: PairDoc = serde_json::from_str(&text)?;
    doc.into_pair(n)
}

pub fn load_cover(path: &Path, n: usize) -> Result<Cover> {
    let text = std::fs::read_to_string(path)?;
    let doc: CoverDoc = serde_json::from_str(&text)?;
    Cover::new(doc.regions, n)
}

/// Load a function document, resolving referenced space files relative to
/// the document's own directory.
pub fn load_function(path: &Path) -> Result<MappedFunction> {
    let text = std::fs::read_to_string(path)?;
    let doc: FunctionDoc = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let domain = doc.domain.resolve(base)?;
    let codomain = doc.codomain.resolve(base)?;
    MappedFunction::new(Arc::new(domain), Arc::new(codomain), doc.assignment)
}

/// Pretty-printed JSON with a trailing newline: the one serialization used
/// for every document and report the toolkit emits, so outputs are stable
/// byte-for-byte across runs.
pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Render sweep records as CSV: header `h,n_points,k,k_times_h`, one row per
/// record, reals at full precision (17 significant digits) so files
/// round-trip and reruns compare byte-identical.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("h,n_points,k,k_times_h\n");
    for r in records {
        out.push_str(&format!(
            "{:.16e},{},{:.16e},{:.16e}\n",
            r.h, r.n_points, r.k, r.k_times_h
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::random_metric;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        p
    }

    #[test]
    fn space_documents_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let s = random_metric(7, 3).unwrap();
        let json = to_pretty_json(&SpaceDoc::from_space(&s)).unwrap();
        let path = write_file(dir.path(), "space.json", &json);
        let back = load_space(&path).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn labels_are_optional_on_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            dir.path(),
            "s.json",
            r#"{"dist": [[0.0, 1.0], [1.0, 0.0]]}"#,
        );
        let s = load_space(&path).unwrap();
        assert_eq!(s.labels(), &["p0".to_string(), "p1".to_string()]);
    }

    #[test]
    fn malformed_documents_fail_as_the_right_error_kind() {
        use crate::error::Error;
        let dir = tempfile::tempdir().unwrap();
        let truncated = write_file(dir.path(), "t.json", r#"{"dist": [[0.0, 1.0"#);
        assert!(matches!(load_space(&truncated), Err(Error::Json(_))));

        let negative = write_file(
            dir.path(),
            "n.json",
            r#"{"dist": [[0.0, -1.0], [-1.0, 0.0]]}"#,
        );
        assert!(matches!(load_space(&negative), Err(Error::InvalidInput(_))));

        let missing = dir.path().join("nope.json");
        assert!(matches!(load_space(&missing), Err(Error::Io(_))));
    }

    #[test]
    fn pair_documents_use_capital_a_and_b() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(dir.path(), "p.json", r#"{"A": [0, 2], "B": [1, 2]}"#);
        let pair = load_pair(&path, 3).unwrap();
        assert_eq!(pair.a(), &[0, 2]);
        assert_eq!(pair.intersection(), &[2]);
    }

    #[test]
    fn function_documents_resolve_path_references_relative_to_themselves() {
        let dir = tempfile::tempdir().unwrap();
        let sub = dir.path().join("fixtures");
        std::fs::create_dir(&sub).unwrap();
        let s = random_metric(4, 9).unwrap();
        let space_json = to_pretty_json(&SpaceDoc::from_space(&s)).unwrap();
        write_file(&sub, "space.json", &space_json);
        let f_path = write_file(
            &sub,
            "f.json",
            r#"{"domain": "space.json", "codomain": "space.json", "assignment": [3, 2, 1, 0]}"#,
        );
        let f = load_function(&f_path).unwrap();
        assert_eq!(f.domain().n(), 4);
        assert_eq!(f.assignment(), &[3, 2, 1, 0]);
    }

    #[test]
    fn function_documents_accept_inline_spaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            dir.path(),
            "f.json",
            r#"{
              "domain": {"dist": [[0.0, 1.0], [1.0, 0.0]]},
              "codomain": {"dist": [[0.0, 2.0], [2.0, 0.0]]},
              "assignment": [0, 1]
            }"#,
        );
        let f = load_function(&path).unwrap();
        assert_eq!(f.codomain().d(0, 1), 2.0);
    }

    #[test]
    fn cover_documents_load_into_validated_covers() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(dir.path(), "c.json", r#"{"regions": [[0, 1], [1, 2]]}"#);
        let cover = load_cover(&path, 3).unwrap();
        assert_eq!(cover.regions().len(), 2);
        assert!(load_cover(&path, 2).is_err(), "index 2 out of range");
    }

    #[test]
    fn sweep_csv_is_stable_and_fully_precise() {
        let records = vec![
            SweepRecord {
                h: 0.125,
                n_points: 17,
                k: 1.375,
                k_times_h: 0.171875,
            },
            SweepRecord {
                h: 0.0625,
                n_points: 33,
                k: std::f64::consts::SQRT_2,
                k_times_h: std::f64::consts::SQRT_2 * 0.0625,
            },
        ];
        let csv = sweep_csv(&records);
        let expected = "h,n_points,k,k_times_h\n\
             1.2500000000000000e-1,17,1.3750000000000000e0,1.7187500000000000e-1\n\
             6.2500000000000000e-2,33,1.4142135623730951e0,8.8388347648318447e-2\n";
        assert_eq!(csv, expected);
        // Values round-trip through the printed representation.
        for line in csv.lines().skip(1) {
            let k: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
            assert!(records.iter().any(|r| r.k == k));
        }
    }
}
