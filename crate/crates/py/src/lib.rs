//! Python bindings. Results that are records in Rust come back as plain
//! dicts; states come back as `Statevector` objects.

use std::str::FromStr;

use genoq_core::encoders::{baseline, compress, entropy, spectral};
use genoq_core::infomath::{self, DivergenceKind};
use genoq_core::qoltz::{self, TrainConfig};
use genoq_core::qsim::{self, StateDump, C64};
use genoq_core::seqio::DnaSequence;
use genoq_core::{verify, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(genoq, CapacityError, PyException, "Qubit or spin limit exceeded.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::QubitCapExceeded { .. } | Error::TooManySpins { .. } => CapacityError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn dna(text: &str) -> PyResult<DnaSequence> {
    DnaSequence::parse(text).map_err(to_py)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (value.to_string(),))?.unbind())
}

fn ser<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    json_to_py(py, &serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?)
}

/// Pure n-qubit state, qubit 0 most significant.
#[pyclass(module = "genoq", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Statevector {
    inner: qsim::Statevector,
}

impl From<qsim::Statevector> for Statevector {
    fn from(inner: qsim::Statevector) -> Self {
        Statevector { inner }
    }
}

#[pymethods]
impl Statevector {
    #[new]
    fn new(amplitudes: Vec<C64>) -> PyResult<Self> {
        Ok(qsim::Statevector::from_amplitudes(amplitudes).map_err(to_py)?.into())
    }

    #[staticmethod]
    fn zero(n_qubits: usize) -> PyResult<Self> {
        Ok(qsim::Statevector::zero(n_qubits).map_err(to_py)?.into())
    }

    #[staticmethod]
    fn basis(n_qubits: usize, index: usize) -> PyResult<Self> {
        Ok(qsim::Statevector::basis(n_qubits, index).map_err(to_py)?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let dump = StateDump::parse(text).map_err(to_py)?;
        Ok(dump.to_state().map_err(to_py)?.into())
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn amplitudes(&self) -> Vec<C64> {
        self.inner.amplitudes().to_vec()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn qft(&self) -> Self {
        self.inner.clone().qft().into()
    }

    fn tensor(&self, other: &Statevector) -> PyResult<Self> {
        Ok(self.inner.tensor(&other.inner).map_err(to_py)?.into())
    }

    #[pyo3(signature = (shots=1024, seed=0))]
    fn sample(&self, shots: u64, seed: u64) -> PyResult<std::collections::BTreeMap<String, u64>> {
        self.inner.sample_counts(shots, seed).map_err(to_py)
    }

    fn to_json(&self) -> String {
        StateDump::from_state(&self.inner, None).to_json()
    }

    fn __eq__(&self, other: &Statevector) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Statevector(n_qubits={})", self.inner.n_qubits())
    }
}

#[pyfunction]
fn set_qubit_cap(cap: usize) -> PyResult<()> {
    qsim::set_qubit_cap(cap).map_err(to_py)
}

#[pyfunction]
fn qubit_cap() -> usize {
    qsim::qubit_cap()
}

#[pyfunction]
fn amplitude_encode(values: Vec<f64>) -> PyResult<Statevector> {
    let v = baseline::FeatureVector::raw(values).map_err(to_py)?;
    Ok(baseline::amplitude_encode(&v).map_err(to_py)?.into())
}

#[pyfunction]
fn amplitude_encode_sequence(seq: &str) -> PyResult<Statevector> {
    Ok(baseline::amplitude_encode_sequence(&dna(seq)?).map_err(to_py)?.into())
}

/// Pass either a sequence or explicit angles `x`.
#[pyfunction]
#[pyo3(signature = (seq=None, x=None, reps=2))]
fn pauli_feature_map(seq: Option<&str>, x: Option<Vec<f64>>, reps: usize) -> PyResult<Statevector> {
    let mut cfg = match (seq, x) {
        (Some(s), None) => baseline::FeatureMapConfig::from_sequence(&dna(s)?),
        (None, Some(x)) => baseline::FeatureMapConfig::new(x),
        _ => return Err(PyValueError::new_err("give exactly one of seq or x")),
    };
    cfg.reps = reps;
    Ok(baseline::pauli_feature_map(&cfg).map_err(to_py)?.into())
}

#[pyfunction]
#[pyo3(signature = (seq, entangle=false))]
fn angle_embed(seq: &str, entangle: bool) -> PyResult<Statevector> {
    Ok(baseline::angle_embed(&dna(seq)?, entangle).map_err(to_py)?.into())
}

/// Codebook dict; `state` is `None` when the encoding is wider than the cap.
#[pyfunction]
#[pyo3(signature = (seq, classic=false))]
fn huffman(py: Python<'_>, seq: &str, classic: bool) -> PyResult<Py<PyDict>> {
    let s = dna(seq)?;
    let (book, bits, state) = if classic {
        let book = compress::classic_huffman(&s);
        let bits = book.encode(&s).map_err(to_py)?;
        (book, bits, None)
    } else {
        let q = compress::quanthuff(&s).map_err(to_py)?;
        (q.codebook, q.bits, q.state)
    };
    let d = PyDict::new(py);
    d.set_item("codes", book.codes.iter().map(|(b, c)| (b.to_string(), c.clone())).collect::<Vec<_>>())?;
    d.set_item("total_bits", book.total_bits)?;
    d.set_item("bits", bits)?;
    d.set_item("state", state.map(Statevector::from))?;
    Ok(d.unbind())
}

#[pyfunction]
fn bwt(seq: &str) -> PyResult<(String, usize)> {
    let r = compress::bwt(&dna(seq)?);
    Ok((r.transformed, r.primary_index))
}

#[pyfunction]
fn ibwt(transformed: String, primary_index: usize) -> PyResult<String> {
    let r = compress::BwtResult { transformed, primary_index };
    Ok(compress::ibwt(&r).map_err(to_py)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (seq, shots=1024, seed=0))]
fn qbwt(py: Python<'_>, seq: &str, shots: u64, seed: u64) -> PyResult<Py<PyDict>> {
    let q = compress::qbwt_encode(&dna(seq)?, shots, seed).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("transformed", q.bwt.transformed)?;
    d.set_item("primary_index", q.bwt.primary_index)?;
    d.set_item("angles", q.angles)?;
    d.set_item("global_phase", q.global_phase)?;
    d.set_item("counts", q.counts)?;
    d.set_item("state", Statevector::from(q.state))?;
    Ok(d.unbind())
}

/// Coefficients as a `width × height` nested list indexed `[alpha][beta]`.
#[pyfunction]
fn dct2d(width: usize, height: usize, pixels: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let img = spectral::GrayImage::new(width, height, pixels).map_err(to_py)?;
    let c = spectral::dct2d(&img);
    Ok((0..width).map(|a| (0..height).map(|b| c.get(a, b)).collect()).collect())
}

#[pyfunction]
fn cosine_encode_image(width: usize, height: usize, pixels: Vec<f64>) -> PyResult<Statevector> {
    let img = spectral::GrayImage::new(width, height, pixels).map_err(to_py)?;
    Ok(spectral::cosine_encode_image(&img).map_err(to_py)?.1.into())
}

#[pyfunction]
fn cosine_encode_dna(seq: &str) -> PyResult<Statevector> {
    Ok(spectral::cosine_encode_dna(&dna(seq)?).map_err(to_py)?.into())
}

#[pyfunction]
fn sencode(py: Python<'_>, seq: &str) -> PyResult<(Py<PyAny>, Statevector)> {
    let (report, state) = entropy::sencode(&dna(seq)?).map_err(to_py)?;
    Ok((ser(py, &report)?, state.into()))
}

#[pyfunction]
#[pyo3(signature = (seq, reference, alpha=1.0, smoothing=None))]
fn nz22(py: Python<'_>, seq: &str, reference: &str, alpha: f64, smoothing: Option<f64>) -> PyResult<(Py<PyAny>, Statevector)> {
    let out = entropy::nz22(&dna(seq)?, &dna(reference)?, alpha, smoothing).map_err(to_py)?;
    Ok((ser(py, &out.budget)?, out.state.into()))
}

#[pyfunction]
#[pyo3(signature = (seq, reference, alpha=1.0))]
fn nz23(py: Python<'_>, seq: &str, reference: &str, alpha: f64) -> PyResult<(Py<PyAny>, Statevector)> {
    let out = entropy::nz23(&dna(seq)?, &dna(reference)?, alpha).map_err(to_py)?;
    Ok((ser(py, &out.budget)?, out.state.into()))
}

/// Returns the metric diagonal in `A, C, G, T` order and the state.
#[pyfunction]
#[pyo3(signature = (seq, reference, metric="fisher-rao", smoothing=None))]
fn quantig(seq: &str, reference: &str, metric: &str, smoothing: Option<f64>) -> PyResult<([f64; 4], Statevector)> {
    let metric = entropy::IgMetric::from_str(metric).map_err(to_py)?;
    let out = entropy::quantig(&dna(seq)?, &dna(reference)?, metric, smoothing).map_err(to_py)?;
    Ok((out.diagonal, out.state.into()))
}

#[pyfunction]
fn shannon_entropy(seq: &str) -> PyResult<f64> {
    Ok(infomath::shannon_entropy(&infomath::base_distribution(&dna(seq)?)))
}

#[pyfunction]
#[pyo3(signature = (kind, seq, reference, smoothing=None))]
fn divergence(kind: &str, seq: &str, reference: &str, smoothing: Option<f64>) -> PyResult<f64> {
    let kind = DivergenceKind::from_str(kind).map_err(to_py)?;
    let p = infomath::base_distribution(&dna(seq)?);
    let q = infomath::base_distribution(&dna(reference)?);
    infomath::divergence(kind, &p, &q, smoothing).map_err(to_py)
}

/// Keyword arguments override the training defaults. Returns
/// `{"model", "trace", "train_size", "val_size", "stopped_early"}`.
#[pyfunction]
#[pyo3(signature = (sequences, **options))]
fn qoltz_train(py: Python<'_>, sequences: Vec<String>, options: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let seqs = sequences.iter().map(|s| dna(s)).collect::<PyResult<Vec<_>>>()?;
    let mut cfg = serde_json::to_value(TrainConfig::default()).expect("config serializes");
    if let Some(opts) = options {
        let json = py.import("json")?;
        let text: String = json.call_method1("dumps", (opts,))?.extract()?;
        let extra: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        for (k, v) in extra {
            if cfg.get(&k).is_none() {
                return Err(PyValueError::new_err(format!("unknown option '{k}'")));
            }
            cfg[k] = v;
        }
    }
    let cfg: TrainConfig = serde_json::from_value(cfg).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = qoltz::train(&seqs, &cfg).map_err(to_py)?;
    let value = serde_json::json!({
        "model": out.model,
        "trace": out.trace,
        "train_size": out.train_size,
        "val_size": out.val_size,
        "stopped_early": out.stopped_early,
    });
    json_to_py(py, &value)
}

/// Runs the built-in oracle checks; one dict per check.
#[pyfunction]
#[pyo3(signature = (only=None, seed=0))]
fn run_verify(py: Python<'_>, only: Option<String>, seed: u64) -> PyResult<Py<PyAny>> {
    let opts = verify::VerifyOptions { only, seed, ..Default::default() };
    ser(py, &verify::run(&opts).map_err(to_py)?)
}

#[pymodule]
fn genoq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Statevector>()?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_function(wrap_pyfunction!(set_qubit_cap, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_cap, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude_encode, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude_encode_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(pauli_feature_map, m)?)?;
    m.add_function(wrap_pyfunction!(angle_embed, m)?)?;
    m.add_function(wrap_pyfunction!(huffman, m)?)?;
    m.add_function(wrap_pyfunction!(bwt, m)?)?;
    m.add_function(wrap_pyfunction!(ibwt, m)?)?;
    m.add_function(wrap_pyfunction!(qbwt, m)?)?;
    m.add_function(wrap_pyfunction!(dct2d, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_encode_image, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_encode_dna, m)?)?;
    m.add_function(wrap_pyfunction!(sencode, m)?)?;
    m.add_function(wrap_pyfunction!(nz22, m)?)?;
    m.add_function(wrap_pyfunction!(nz23, m)?)?;
    m.add_function(wrap_pyfunction!(quantig, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(divergence, m)?)?;
    m.add_function(wrap_pyfunction!(qoltz_train, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
