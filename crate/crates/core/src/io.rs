//! JSON file schemas and a float-exact serializer.
//!
//! Floats are written in scientific notation with 17 significant digits, so
//! every `f64` survives an emit/parse round trip bit for bit.

use std::io;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::hamiltonian::{hubbard_2d, FermionHamiltonian, HubbardInstance};
use crate::C64;

struct PreciseFormatter(PrettyFormatter<'static>);

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Pretty-printed JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

/// Hex SHA-256 of the canonical JSON encoding of `value`.
pub fn content_hash<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let digest = Sha256::digest(to_json_string(value)?.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub n_modes: usize,
    #[serde(rename = "T")]
    pub t: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
    #[serde(rename = "V")]
    pub v: Vec<f64>,
}

impl HamiltonianFile {
    pub fn to_hamiltonian(&self) -> Result<FermionHamiltonian> {
        let n = self.n_modes;
        if self.t.len() != n * n || self.v.len() != n * n || self.u.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "n_modes = {n} needs {} T/V entries and {n} U entries, got {}/{}/{}",
                n * n,
                self.t.len(),
                self.v.len(),
                self.u.len()
            )));
        }
        FermionHamiltonian::new(
            DMatrix::from_row_slice(n, n, &self.t),
            DVector::from_column_slice(&self.u),
            DMatrix::from_row_slice(n, n, &self.v),
        )
    }
}

impl From<&FermionHamiltonian> for HamiltonianFile {
    fn from(h: &FermionHamiltonian) -> Self {
        Self {
            n_modes: h.n_modes(),
            t: row_major(h.one_body()),
            u: h.potential().as_slice().to_vec(),
            v: row_major(h.interaction()),
        }
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardFile {
    pub rows: usize,
    pub cols: usize,
    pub t: f64,
    #[serde(rename = "U")]
    pub u: f64,
}

impl HubbardFile {
    pub fn to_instance(&self) -> Result<HubbardInstance> {
        hubbard_2d(self.rows, self.cols, self.t, self.u)
    }
}

impl From<&HubbardInstance> for HubbardFile {
    fn from(h: &HubbardInstance) -> Self {
        Self {
            rows: h.rows(),
            cols: h.cols(),
            t: h.t_hop(),
            u: h.u_int(),
        }
    }
}

/// Complex matrix in split real/imaginary row-major form.
///
/// Without `eta` the payload is an `n×n` unitary. With `eta` it is either the
/// `eta×n` orbital matrix or an `n×n` matrix whose first `eta` rows are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DMatrix<C64>, eta: Option<usize>) -> Self {
        let rows: Vec<C64> = m.transpose().as_slice().to_vec();
        Self {
            n: m.ncols(),
            eta,
            re: rows.iter().map(|z| z.re).collect(),
            im: rows.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        let n = self.n;
        if self.re.len() != self.im.len() {
            return Err(Error::DimensionMismatch(format!(
                "re has {} entries, im has {}",
                self.re.len(),
                self.im.len()
            )));
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix file".into()));
        }
        let rows = match self.eta {
            Some(eta) if self.re.len() == eta * n => eta,
            _ if self.re.len() == n * n => n,
            _ => {
                return Err(Error::DimensionMismatch(format!(
                    "{} entries do not form rows of length {n}",
                    self.re.len()
                )))
            }
        };
        let full = DMatrix::from_fn(rows, n, |r, c| {
            C64::new(self.re[r * n + c], self.im[r * n + c])
        });
        match self.eta {
            Some(eta) if eta > rows => Err(Error::InvalidParticleCount { eta, n }),
            Some(eta) => Ok(full.rows(0, eta).into_owned()),
            None => Ok(full),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    params: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    n_qubits: usize,
    layers: Vec<Vec<GateRecord>>,
    #[serde(default)]
    metadata: Map<String, Value>,
}

pub fn circuit_to_json(c: &Circuit) -> Result<String> {
    let file = CircuitFile {
        n_qubits: c.n_qubits(),
        layers: c
            .layers()
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|g| GateRecord {
                        kind: g.kind.name().to_string(),
                        qubits: g.qubits(),
                        params: g.kind.params(),
                    })
                    .collect()
            })
            .collect(),
        metadata: c.metadata.clone(),
    };
    to_json_string(&file)
}

pub fn circuit_from_json(s: &str) -> Result<Circuit> {
    let file: CircuitFile = from_json_str(s)?;
    let mut c = Circuit::new(file.n_qubits);
    for layer in file.layers {
        let mut gates = Vec::with_capacity(layer.len());
        for rec in layer {
            let kind = GateKind::from_parts(&rec.kind, &rec.params)?;
            let adjacent = rec.qubits.windows(2).all(|w| w[1] == w[0] + 1);
            if rec.qubits.len() != kind.arity() || !adjacent {
                return Err(Error::InvalidCircuit(format!(
                    "{} gate needs {} adjacent qubits, got {:?}",
                    rec.kind,
                    kind.arity(),
                    rec.qubits
                )));
            }
            gates.push(Gate {
                kind,
                qubit: rec.qubits[0],
            });
        }
        c.push_layer(gates)?;
    }
    c.metadata = file.metadata;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_every_bit() {
        let values = vec![
            0.1,
            -1.0 / 3.0,
            1e-300,
            5e-324,
            f64::MAX,
            0.0,
            -0.0,
            std::f64::consts::PI,
        ];
        let text = to_json_string(&values).unwrap();
        let back: Vec<f64> = from_json_str(&text).unwrap();
        for (a, b) in values.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(text.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = from_json_str::<HubbardFile>(r#"{"rows":1,"cols":1,"t":1.0,"U":2.0,"extra":0}"#);
        assert!(err.is_err());
        let ok = from_json_str::<HubbardFile>(r#"{"rows":1,"cols":2,"t":1.0,"U":2.0}"#).unwrap();
        assert_eq!(ok.to_instance().unwrap().n_modes(), 4);
    }

    #[test]
    fn hamiltonian_file_round_trip() {
        let h = crate::hamiltonian::random_hamiltonian(3, 5).unwrap();
        let file = HamiltonianFile::from(&h);
        let back: HamiltonianFile = from_json_str(&to_json_string(&file).unwrap()).unwrap();
        assert_eq!(back.to_hamiltonian().unwrap(), h);
        let bad = HamiltonianFile { n_modes: 2, ..file };
        assert!(matches!(
            bad.to_hamiltonian(),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn matrix_file_shapes() {
        let m = DMatrix::from_fn(2, 3, |r, c| C64::new(r as f64, c as f64));
        let file = MatrixFile::from_matrix(&m, Some(2));
        assert_eq!(file.to_matrix().unwrap(), m);
        let square = DMatrix::from_fn(3, 3, |r, c| C64::new((r * 3 + c) as f64, 0.0));
        let first = MatrixFile {
            eta: Some(1),
            ..MatrixFile::from_matrix(&square, None)
        };
        assert_eq!(first.to_matrix().unwrap(), square.rows(0, 1).into_owned());
        let broken = MatrixFile {
            n: 3,
            eta: None,
            re: vec![0.0; 4],
            im: vec![0.0; 4],
        };
        assert!(broken.to_matrix().is_err());
    }

    #[test]
    fn circuit_json_round_trip() {
        let mut c = Circuit::from_layers(
            3,
            vec![
                vec![Gate::phase(0, 0.1), Gate::fsim(1, 1.0 / 3.0, -2.0)],
                vec![Gate::givens(0, 0.7, 1e-17), Gate::phase(2, -0.0)],
                vec![Gate::fswap(1)],
            ],
        )
        .unwrap();
        c.metadata.insert("t".into(), 0.01.into());
        let text = circuit_to_json(&c).unwrap();
        let back = circuit_from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(circuit_to_json(&back).unwrap(), text);
    }

    #[test]
    fn malformed_circuits_are_rejected() {
        let overlap = r#"{"n_qubits":2,"layers":[[{"kind":"fswap","qubits":[0,1],"params":[]},{"kind":"phase","qubits":[1],"params":[0.0]}]]}"#;
        assert!(circuit_from_json(overlap).is_err());
        let gap = r#"{"n_qubits":3,"layers":[[{"kind":"fswap","qubits":[0,2],"params":[]}]]}"#;
        assert!(circuit_from_json(gap).is_err());
        let range = r#"{"n_qubits":2,"layers":[[{"kind":"fswap","qubits":[1,2],"params":[]}]]}"#;
        assert!(circuit_from_json(range).is_err());
    }
}
