//! JSON and CSV file formats.
//!
//! * measure space: `{"points": [...], "weights": [...]}` or CSV rows `id,weight`
//! * scalar field: `{"values": [...]}` or CSV rows `id,value`
//! * φ-function: `{"kind": "exponential"}`, `{"kind": "kappa_const", "kappa": 0.5}`,
//!   `{"kind": "kappa_variable", "kappa_field": <field>}`
//! * chart: `{"phi": {...}, "space": <space>, "c": <field>, "u0": <field>}`
//!
//! Wherever a field or space is expected, a chart or φ spec may give either the
//! object inline or a string. Strings are `zero`, `const:<x>`, or a path
//! resolved relative to the file that mentions it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Chart;
use crate::measure::{MeasureSpace, ScalarField};
use crate::phi::{PhiFn, PhiFunction};

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads `id,number` rows, skipping a header row if its second column is not numeric.
fn read_pairs(path: &Path) -> Result<(Vec<String>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut ids = Vec::new();
    let mut nums = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::Parse(format!(
                "{}: row {} has {} columns, expected 2",
                path.display(),
                i + 1,
                rec.len()
            )));
        }
        match rec[1].parse::<f64>() {
            Ok(v) => {
                ids.push(rec[0].to_string());
                nums.push(v);
            }
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::Parse(format!(
                    "{}: row {}: {e}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok((ids, nums))
}

fn write_pairs(header: &str, ids: &[String], nums: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let (a, b) = header.split_once(',').unwrap_or((header, ""));
    w.write_record([a, b])?;
    for (id, v) in ids.iter().zip(nums) {
        w.write_record([id.as_str(), &v.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_space(path: &Path) -> Result<MeasureSpace> {
    if is_csv(path) {
        let (ids, weights) = read_pairs(path)?;
        MeasureSpace::new(ids, weights)
    } else {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn space_to_csv(space: &MeasureSpace) -> Result<String> {
    write_pairs("id,weight", space.point_ids(), space.weights())
}

/// Reads a field from JSON or CSV; CSV point ids are not checked.
pub fn read_field(path: &Path) -> Result<ScalarField> {
    if is_csv(path) {
        let (_, values) = read_pairs(path)?;
        ScalarField::new(values)
    } else {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn field_to_csv(space: &MeasureSpace, field: &ScalarField) -> Result<String> {
    space.check(field, "field")?;
    write_pairs("id,value", space.point_ids(), field.values())
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// A field given inline, as a constant, or by file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldRef {
    Inline(ScalarField),
    Values(Vec<f64>),
    Text(String),
}

/// Parsed form of a textual field reference.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    Zero,
    Const(f64),
    File(PathBuf),
}

impl FieldSource {
    /// `zero`, `const:<x>`, or a path.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" {
            Ok(FieldSource::Zero)
        } else if let Some(x) = s.strip_prefix("const:") {
            x.trim()
                .parse()
                .map(FieldSource::Const)
                .map_err(|e| Error::Parse(format!("bad constant {x:?}: {e}")))
        } else {
            Ok(FieldSource::File(PathBuf::from(s)))
        }
    }

    /// Materializes the field; `n` sizes constants and is checked against files.
    pub fn resolve(&self, n: Option<usize>, base: &Path) -> Result<ScalarField> {
        let need_n = || {
            n.ok_or_else(|| {
                Error::Parse(
                    "a constant field needs a space or another field to fix its length".into(),
                )
            })
        };
        match self {
            FieldSource::Zero => Ok(ScalarField::zeros(need_n()?)),
            FieldSource::Const(x) => ScalarField::constant(need_n()?, *x),
            FieldSource::File(p) => {
                let f = read_field(&base.join(p))?;
                if let Some(n) = n {
                    if f.len() != n {
                        return Err(Error::DimensionMismatch {
                            what: "field file",
                            expected: n,
                            found: f.len(),
                        });
                    }
                }
                Ok(f)
            }
        }
    }

    /// True if resolving does not depend on a known length.
    pub fn is_sized(&self) -> bool {
        matches!(self, FieldSource::File(_))
    }
}

impl FieldRef {
    pub fn resolve(&self, n: Option<usize>, base: &Path) -> Result<ScalarField> {
        let f = match self {
            FieldRef::Inline(f) => f.clone(),
            FieldRef::Values(v) => ScalarField::new(v.clone())?,
            FieldRef::Text(s) => return FieldSource::parse(s)?.resolve(n, base),
        };
        match n {
            Some(n) if f.len() != n => Err(Error::DimensionMismatch {
                what: "inline field",
                expected: n,
                found: f.len(),
            }),
            _ => Ok(f),
        }
    }
}

/// A space given inline or by file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Inline(MeasureSpace),
    Path(String),
}

impl SpaceRef {
    pub fn resolve(&self, base: &Path) -> Result<MeasureSpace> {
        match self {
            SpaceRef::Inline(s) => Ok(s.clone()),
            SpaceRef::Path(p) => read_space(&base.join(p)),
        }
    }
}

/// JSON description of a φ-function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiSpec {
    Exponential,
    KappaConst { kappa: f64 },
    KappaVariable { kappa_field: FieldRef },
}

impl PhiSpec {
    /// Builds the φ-function; `n` sizes constant κ fields.
    pub fn build(&self, n: Option<usize>, base: &Path) -> Result<PhiFunction> {
        match self {
            PhiSpec::Exponential => Ok(PhiFunction::exponential()),
            PhiSpec::KappaConst { kappa } => PhiFunction::kappa_const(*kappa),
            PhiSpec::KappaVariable { kappa_field } => {
                PhiFunction::kappa_variable(&kappa_field.resolve(n, base)?)
            }
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// JSON description of a chart. A missing `u0` means `u0 ≡ 1`; a missing `c`
/// puts the origin at the uniform density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub phi: PhiSpec,
    pub space: SpaceRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<FieldRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<FieldRef>,
}

impl ChartSpec {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// Resolves references relative to `base` and builds the chart.
    pub fn build(&self, base: &Path) -> Result<Chart> {
        let space = self.space.resolve(base)?;
        let n = Some(space.len());
        let phi = self.phi.build(n, base)?;
        let u0 = match &self.u0 {
            Some(r) => r.resolve(n, base)?,
            None => ScalarField::constant(space.len(), 1.0)?,
        };
        let c = match &self.c {
            Some(r) => r.resolve(n, base)?,
            None => uniform_origin(&space, &phi)?,
        };
        Chart::new(space, phi, c, u0)
    }
}

/// `c = φ⁻¹(1/μ(T))`, the origin whose density is uniform.
pub fn uniform_origin(space: &MeasureSpace, phi: &PhiFunction) -> Result<ScalarField> {
    let level = 1.0 / space.total_mass();
    let vals = (0..space.len())
        .map(|t| phi.inverse(t, level))
        .collect::<Result<Vec<_>>>()?;
    ScalarField::new(vals)
}

/// Loads a chart spec file, resolving references next to it.
pub fn load_chart(path: &Path) -> Result<Chart> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    ChartSpec::load(path)?.build(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::File::create(&p)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        p
    }

    #[test]
    fn space_json_and_csv_agree() {
        let dir = tempfile::tempdir().unwrap();
        let j = write(
            dir.path(),
            "s.json",
            r#"{"points": ["a", 2], "weights": [1.5, 2]}"#,
        );
        let s = read_space(&j).unwrap();
        assert_eq!(s.point_ids(), ["a", "2"]);
        let c = write(dir.path(), "s.csv", &space_to_csv(&s).unwrap());
        assert_eq!(read_space(&c).unwrap(), s);
        let back: MeasureSpace = serde_json::from_str(&to_json(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn invalid_space_json_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let j = write(
            dir.path(),
            "s.json",
            r#"{"points": ["a"], "weights": [-1]}"#,
        );
        assert!(read_space(&j).is_err());
    }

    #[test]
    fn field_csv_with_and_without_header() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", "id,value\nx,0.25\ny,0.75\n");
        let b = write(dir.path(), "b.csv", "x,0.25\ny,0.75\n");
        assert_eq!(read_field(&a).unwrap().values(), [0.25, 0.75]);
        assert_eq!(read_field(&b).unwrap().values(), [0.25, 0.75]);
        let bad = write(dir.path(), "c.csv", "x,0.25\ny,zz\n");
        assert!(read_field(&bad).is_err());
    }

    #[test]
    fn field_sources() {
        let base = Path::new(".");
        assert_eq!(
            FieldSource::parse("zero")
                .unwrap()
                .resolve(Some(3), base)
                .unwrap()
                .values(),
            [0.0; 3]
        );
        assert_eq!(
            FieldSource::parse("const:1.5")
                .unwrap()
                .resolve(Some(2), base)
                .unwrap()
                .values(),
            [1.5, 1.5]
        );
        assert!(FieldSource::parse("const:abc").is_err());
        assert!(FieldSource::parse("zero")
            .unwrap()
            .resolve(None, base)
            .is_err());
    }

    #[test]
    fn chart_spec_inline_and_by_reference() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "space.json",
            r#"{"points": ["a", "b"], "weights": [1, 1]}"#,
        );
        write(dir.path(), "c.json", r#"{"values": [-0.75, -0.75]}"#);
        let spec = write(
            dir.path(),
            "chart.json",
            r#"{"phi": {"kind": "kappa_const", "kappa": 1}, "space": "space.json", "c": "c.json", "u0": "const:1"}"#,
        );
        let chart = load_chart(&spec).unwrap();
        assert_eq!(chart.origin().values(), [-0.75, -0.75]);

        let inline = write(
            dir.path(),
            "inline.json",
            r#"{"phi": {"kind": "exponential"}, "space": {"points": ["a", "b"], "weights": [1, 1]}, "c": [-0.6931471805599453, -0.6931471805599453]}"#,
        );
        let chart = load_chart(&inline).unwrap();
        assert!(chart.phi().is_exponential());

        let defaulted = write(
            dir.path(),
            "default.json",
            r#"{"phi": {"kind": "kappa_variable", "kappa_field": [0.5, -0.25]}, "space": "space.json"}"#,
        );
        let chart = load_chart(&defaulted).unwrap();
        let p = chart.origin_density().unwrap();
        assert!((p.get(0) - 0.5).abs() < 1e-15 && (p.get(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn phi_spec_json() {
        let s: PhiSpec = serde_json::from_str(r#"{"kind":"kappa_const","kappa":0.5}"#).unwrap();
        assert_eq!(
            s.build(None, Path::new(".")).unwrap(),
            PhiFunction::KappaConst(0.5)
        );
        let s: PhiSpec =
            serde_json::from_str(r#"{"kind":"kappa_variable","kappa_field":{"values":[0.5,0.0]}}"#)
                .unwrap();
        assert!(s.build(None, Path::new(".")).unwrap_err().is_domain());
    }

    #[test]
    fn json_floats_round_trip_bitwise() {
        let vals = vec![
            1.3768865076397563,
            0.1 + 0.2,
            5e-324,
            -1.7976931348623157e308,
            2.0f64.sqrt(),
        ];
        let f = ScalarField::new(vals.clone()).unwrap();
        let back: ScalarField = serde_json::from_str(&to_json(&f).unwrap()).unwrap();
        for (a, b) in vals.iter().zip(back.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
