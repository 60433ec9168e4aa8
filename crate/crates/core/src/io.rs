//! File formats: design JSON/CSV/xyz, quadrature rule JSON, radius samples
//! CSV and coefficient JSON.
//!
//! JSON floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` and makes output byte-stable.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::design::{DesignPoint, SphereDesign};
use crate::harmonics::SphericalAngle;
use crate::quadrature::QuadratureRule;
use crate::regression::{CoefficientEntry, CoefficientVector, RadiusSample};
use crate::{Error, Result};

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

/// Serialize with full-precision floats, followed by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Serialize)]
struct DesignFileOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    points: &'a [DesignPoint],
}

#[derive(Deserialize)]
struct DesignFileIn {
    d: Option<usize>,
    points: Vec<DesignPoint>,
}

/// `{"d": …, "points": [{"theta", "phi", "weight"}, …]}`; `d` is optional.
pub fn design_to_json(xi: &SphereDesign, d: Option<usize>) -> Result<String> {
    to_json(&DesignFileOut {
        d,
        points: xi.points(),
    })
}

pub fn design_from_json(text: &str) -> Result<(SphereDesign, Option<usize>)> {
    let file: DesignFileIn = serde_json::from_str(text)?;
    Ok((SphereDesign::new(file.points)?, file.d))
}

pub fn read_design(path: &Path) -> Result<(SphereDesign, Option<usize>)> {
    design_from_json(&fs::read_to_string(path)?)
}

pub fn write_design(path: &Path, xi: &SphereDesign, d: Option<usize>) -> Result<()> {
    fs::write(path, design_to_json(xi, d)?)?;
    Ok(())
}

/// Columns `theta,phi,weight,x,y,z`.
pub fn design_to_csv(xi: &SphereDesign) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta", "phi", "weight", "x", "y", "z"])?;
    for p in xi.points() {
        let [x, y, z] = p.to_cartesian();
        w.write_record([p.theta, p.phi, p.weight, x, y, z].map(|v| format!("{v:.16e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

/// One `x y z` line per support point.
pub fn design_to_xyz(xi: &SphereDesign) -> String {
    xi.points()
        .iter()
        .map(|p| {
            let [x, y, z] = p.to_cartesian();
            format!("{x:.16e} {y:.16e} {z:.16e}\n")
        })
        .collect()
}

pub fn rule_to_json(rule: &QuadratureRule) -> Result<String> {
    to_json(rule)
}

pub fn rule_from_json(text: &str) -> Result<QuadratureRule> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Deserialize)]
struct SampleRow {
    theta: f64,
    phi: f64,
    radius: f64,
}

/// Samples from CSV with header `theta,phi,radius`.
pub fn samples_from_csv<R: Read>(reader: R) -> Result<Vec<RadiusSample>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    rdr.deserialize::<SampleRow>()
        .map(|row| {
            let row = row?;
            RadiusSample::new(SphericalAngle::new(row.theta, row.phi)?, row.radius)
        })
        .collect()
}

pub fn read_samples(path: &Path) -> Result<Vec<RadiusSample>> {
    samples_from_csv(fs::File::open(path)?)
}

/// A JSON list of `{"ell", "m", "value"}` in regression-vector order.
pub fn coefficients_to_json(c: &CoefficientVector) -> Result<String> {
    to_json(&c.entries())
}

pub fn coefficients_from_json(text: &str) -> Result<CoefficientVector> {
    let entries: Vec<CoefficientEntry> = serde_json::from_str(text)?;
    CoefficientVector::from_entries(&entries)
}
