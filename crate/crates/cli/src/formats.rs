//! File formats: operator files, value tables, and Markov-chain specs.
//! Complex numbers are `[re, im]` pairs; matrices are row-major nested
//! arrays. Parsing rejects non-finite numbers.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use toposq::integrals::{ic_vectors, ProjectorValue};
use toposq::linalg::{ComplexOperator, UnitVector};
use toposq::monad::{FiniteDist, FiniteSet, Kernel, MarkovChainSpec};

pub type ParseResult<T> = Result<T, String>;

/// Dense operator with factor dimensions; `entries[r][c] = [re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dims: Vec<usize>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl OperatorFile {
    pub fn from_operator(op: &ComplexOperator<f64>) -> Self {
        let side = op.side();
        let entries = (0..side)
            .map(|r| (0..side).map(|c| [op.get(r, c).re, op.get(r, c).im]).collect())
            .collect();
        Self { dims: op.dims().to_vec(), entries }
    }

    pub fn to_operator(&self) -> ParseResult<ComplexOperator<f64>> {
        let side: usize = self.dims.iter().product();
        if self.dims.is_empty() || side == 0 {
            return Err("dims must be a nonempty list of positive integers".into());
        }
        if self.entries.len() != side {
            return Err(format!("expected {side} rows, found {}", self.entries.len()));
        }
        let mut data = Vec::with_capacity(side * side);
        for (r, row) in self.entries.iter().enumerate() {
            if row.len() != side {
                return Err(format!("row {r} has {} entries, expected {side}", row.len()));
            }
            for &[re, im] in row {
                if !re.is_finite() || !im.is_finite() {
                    return Err(format!("non-finite entry in row {r}"));
                }
                data.push(Complex::new(re, im));
            }
        }
        ComplexOperator::from_matrix(self.dims.clone(), data).map_err(|e| e.to_string())
    }
}

/// Element of a value-table record: canonical IC projector indices per
/// factor, explicit per-factor vectors, or a full operator (accepted by the
/// format; reconstruction requires one of the product forms).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementSpec {
    Indices(Vec<usize>),
    Factors(Vec<Vec<[f64; 2]>>),
    Operator(OperatorFile),
}

/// One record of a value table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueRecord {
    /// Optional per-factor projector lists identifying the context.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<Vec<Vec<OperatorFile>>>,
    pub element: ElementSpec,
    pub value: f64,
}

/// Value table for reconstruction and integral checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueTableFile {
    pub dims: Vec<usize>,
    pub records: Vec<ValueRecord>,
}

impl ValueTableFile {
    /// Interprets the records as product-projector values for
    /// reconstruction.
    pub fn to_projector_values(&self) -> ParseResult<Vec<ProjectorValue<f64>>> {
        let per_factor: Vec<Vec<UnitVector<f64>>> =
            self.dims.iter().map(|&d| ic_vectors::<f64>(d)).collect();
        let mut out = Vec::with_capacity(self.records.len());
        for (k, record) in self.records.iter().enumerate() {
            if !record.value.is_finite() {
                return Err(format!("record {k} has a non-finite value"));
            }
            let factors = match &record.element {
                ElementSpec::Indices(idx) => {
                    if idx.len() != self.dims.len() {
                        return Err(format!(
                            "record {k} has {} indices, expected {}",
                            idx.len(),
                            self.dims.len()
                        ));
                    }
                    idx.iter()
                        .enumerate()
                        .map(|(f, &i)| {
                            per_factor[f].get(i).cloned().ok_or(format!(
                                "record {k}: index {i} out of range for factor {f}"
                            ))
                        })
                        .collect::<ParseResult<Vec<_>>>()?
                }
                ElementSpec::Factors(vecs) => {
                    if vecs.len() != self.dims.len() {
                        return Err(format!(
                            "record {k} has {} factors, expected {}",
                            vecs.len(),
                            self.dims.len()
                        ));
                    }
                    vecs.iter()
                        .map(|entries| {
                            let v: Vec<Complex<f64>> = entries
                                .iter()
                                .map(|&[re, im]| Complex::new(re, im))
                                .collect();
                            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                                return Err(format!("record {k} has a non-finite factor"));
                            }
                            UnitVector::new(v).map_err(|e| format!("record {k}: {e}"))
                        })
                        .collect::<ParseResult<Vec<_>>>()?
                }
                ElementSpec::Operator(_) => {
                    return Err(format!(
                        "record {k} supplies a full operator; reconstruction needs \
                         product projectors (indices or factors)"
                    ));
                }
            };
            out.push(ProjectorValue { factors, value: record.value });
        }
        Ok(out)
    }
}

/// One variable of a Markov spec: target label and the transition rows
/// feeding it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelFile {
    pub label: String,
    pub rows: Vec<Vec<f64>>,
}

/// Markov-chain specification: initial distribution plus chained kernels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovSpecFile {
    pub initial_label: String,
    pub initial_weights: Vec<f64>,
    #[serde(default)]
    pub kernels: Vec<KernelFile>,
}

impl MarkovSpecFile {
    pub fn to_spec(&self) -> ParseResult<MarkovChainSpec<f64>> {
        if self.initial_weights.iter().any(|w| !w.is_finite()) {
            return Err("non-finite initial weight".into());
        }
        let first = FiniteSet::new(self.initial_label.clone(), self.initial_weights.len());
        let initial = FiniteDist::new(first.clone(), self.initial_weights.clone())
            .map_err(|e| e.to_string())?;
        let mut kernels = Vec::with_capacity(self.kernels.len());
        let mut prev = first;
        for (i, kf) in self.kernels.iter().enumerate() {
            if kf.rows.len() != prev.size {
                return Err(format!(
                    "kernel {i} has {} rows, expected {} (size of {})",
                    kf.rows.len(),
                    prev.size,
                    prev.label
                ));
            }
            let width = kf.rows.first().map(|r| r.len()).unwrap_or(0);
            if width == 0 {
                return Err(format!("kernel {i} has empty rows"));
            }
            let to = FiniteSet::new(kf.label.clone(), width);
            let mut rows = Vec::with_capacity(kf.rows.len());
            for (ri, row) in kf.rows.iter().enumerate() {
                if row.len() != width {
                    return Err(format!("kernel {i} row {ri} has inconsistent width"));
                }
                if row.iter().any(|w| !w.is_finite()) {
                    return Err(format!("kernel {i} row {ri} has a non-finite weight"));
                }
                rows.push(
                    FiniteDist::new(to.clone(), row.clone())
                        .map_err(|e| format!("kernel {i} row {ri}: {e}"))?,
                );
            }
            kernels.push(Kernel::new(prev, to.clone(), rows).map_err(|e| e.to_string())?);
            prev = to;
        }
        MarkovChainSpec::new(initial, kernels).map_err(|e| e.to_string())
    }
}

/// Serializes a list of per-factor unit vectors for report payloads.
pub fn vectors_to_json(vs: &[UnitVector<f64>]) -> Vec<Vec<[f64; 2]>> {
    vs.iter()
        .map(|v| v.entries().iter().map(|z| [z.re, z.im]).collect())
        .collect()
}
