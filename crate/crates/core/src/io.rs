//! JSON encodings of matrices, ensembles, costs and reports.
//!
//! Complex matrices are row-major `[[[re, im], ...], ...]`. Every float is
//! written with 17 significant digits so files round-trip bit-for-bit.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::costs::{identity_cost, CostFunction};
use crate::ensembles::{validate, Ensemble, EnsembleFamilySpec};
use crate::error::{Error, Result};
use crate::guesswork::GuessworkReport;
use crate::numbering::Numbering;
use crate::operators::{BlochVector, HermitianOperator};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(op: &HermitianOperator) -> MatrixJson {
    op.to_rows().into_iter().map(|row| row.into_iter().map(|(re, im)| [re, im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<HermitianOperator> {
    let rows: Vec<Vec<(f64, f64)>> = rows.iter().map(|r| r.iter().map(|&[re, im]| (re, im)).collect()).collect();
    HermitianOperator::from_rows(&rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlochEntry {
    pub trace: f64,
    pub v: [f64; 3],
}

/// Any of the accepted ensemble file forms.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnsembleJson {
    States { dim: usize, states: Vec<MatrixJson> },
    Bloch { dim: usize, bloch: Vec<BlochEntry> },
    Family(EnsembleFamilySpec),
}

impl EnsembleJson {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        EnsembleJson::States { dim: e.dim(), states: e.states().iter().map(matrix_to_json).collect() }
    }

    pub fn into_ensemble(self) -> Result<Ensemble> {
        match self {
            EnsembleJson::States { dim, states } => {
                let ops = states.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                if let Some(op) = ops.iter().find(|op| op.dim() != dim) {
                    return Err(Error::Dimension { expected: dim, got: op.dim() });
                }
                validate(ops)
            }
            EnsembleJson::Bloch { dim, bloch } => {
                if dim != 2 {
                    return Err(Error::Dimension { expected: 2, got: dim });
                }
                validate(bloch.iter().map(|b| HermitianOperator::from_bloch(b.trace, BlochVector(b.v))).collect())
            }
            EnsembleJson::Family(spec) => spec.generate(),
        }
    }
}

pub fn parse_ensemble(text: &str) -> Result<Ensemble> {
    serde_json::from_str::<EnsembleJson>(text)?.into_ensemble()
}

pub fn read_ensemble(path: &Path) -> Result<Ensemble> {
    parse_ensemble(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostJson {
    Values { values: Vec<f64> },
    Identity { identity: usize },
}

impl CostJson {
    pub fn into_cost(self) -> Result<CostFunction> {
        match self {
            CostJson::Values { values } => CostFunction::new(values),
            CostJson::Identity { identity } => identity_cost(identity),
        }
    }
}

pub fn parse_cost(text: &str) -> Result<CostFunction> {
    serde_json::from_str::<CostJson>(text)?.into_cost()
}

/// `identity` gives `t -> t` on `m` labels; anything else is a cost file.
pub fn read_cost_arg(arg: &str, m: usize) -> Result<CostFunction> {
    if arg == "identity" {
        return identity_cost(m);
    }
    parse_cost(&std::fs::read_to_string(arg)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementElementJson {
    pub numbering: Numbering,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementJson {
    pub elements: Vec<MeasurementElementJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub value: f64,
    pub mean_cost: f64,
    pub trace_norm_term: f64,
    pub numbering: Numbering,
    pub method: &'static str,
    pub condition_verified: bool,
    pub measurement: MeasurementJson,
}

impl From<&GuessworkReport> for ReportJson {
    fn from(r: &GuessworkReport) -> Self {
        let elements = r
            .measurement
            .elements()
            .map(|(n, op)| MeasurementElementJson { numbering: n.clone(), matrix: matrix_to_json(op) })
            .collect();
        ReportJson {
            value: r.value,
            mean_cost: r.mean_cost,
            trace_norm_term: r.trace_norm_term,
            numbering: r.optimal_numbering.clone(),
            method: r.method.as_str(),
            condition_verified: r.condition_verified,
            measurement: MeasurementJson { elements },
        }
    }
}

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
struct SignificantDigits<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> std::io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for SignificantDigits<'_> {
    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}
