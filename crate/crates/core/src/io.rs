//! JSON file schemas for operators and states.
//!
//! Operators and density matrices share one schema:
//!
//! ```json
//! {"dim_a": 2, "dim_b": 2, "matrix": [[[re, im], ...], ...]}
//! ```
//!
//! with the matrix row-major over the composite index p·d_b + q. Pure states
//! replace `matrix` with a `vector` of [re, im] pairs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::linalg::{BipartiteOperator, DensityOperator, Dims, PureBipartiteState};
use crate::Result;

#[derive(Debug, Serialize, Deserialize)]
struct FileSchema {
    dim_a: usize,
    dim_b: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
}

/// Either kind of document a state/operator file can hold.
#[derive(Debug)]
pub enum Loaded {
    Operator(BipartiteOperator),
    Pure(PureBipartiteState),
}

pub fn operator_to_json(op: &BipartiteOperator) -> String {
    let n = op.dims().total();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = op.entries()[(i, j)];
                    [c.re, c.im]
                })
                .collect()
        })
        .collect();
    serde_json::to_string(&FileSchema {
        dim_a: op.dims().d_a(),
        dim_b: op.dims().d_b(),
        matrix: Some(matrix),
        vector: None,
    })
    .expect("schema serializes")
}

pub fn state_to_json(psi: &PureBipartiteState) -> String {
    let vector = psi.amplitudes().iter().map(|c| [c.re, c.im]).collect();
    serde_json::to_string(&FileSchema {
        dim_a: psi.dims().d_a(),
        dim_b: psi.dims().d_b(),
        matrix: None,
        vector: Some(vector),
    })
    .expect("schema serializes")
}

pub fn parse(json: &str) -> Result<Loaded> {
    let schema: FileSchema = serde_json::from_str(json)?;
    let dims = Dims::new(schema.dim_a, schema.dim_b)?;
    match (schema.matrix, schema.vector) {
        (Some(matrix), None) => {
            let n = dims.total();
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(Error::dims(format!(
                    "matrix must be {n}x{n} for dims {dims}"
                )));
            }
            let m = DMatrix::from_fn(n, n, |i, j| {
                Complex64::new(matrix[i][j][0], matrix[i][j][1])
            });
            Ok(Loaded::Operator(BipartiteOperator::new(dims, m)?))
        }
        (None, Some(vector)) => {
            let amps = DVector::from_iterator(
                vector.len(),
                vector.iter().map(|p| Complex64::new(p[0], p[1])),
            );
            Ok(Loaded::Pure(PureBipartiteState::new(dims, amps)?))
        }
        _ => Err(Error::InvalidParam(
            "file must contain exactly one of `matrix` or `vector`".into(),
        )),
    }
}

pub fn load(path: &Path) -> Result<Loaded> {
    let mut buf = String::new();
    std::fs::File::open(path)?.read_to_string(&mut buf)?;
    parse(&buf)
}

pub fn load_operator(path: &Path) -> Result<BipartiteOperator> {
    match load(path)? {
        Loaded::Operator(op) => Ok(op),
        Loaded::Pure(psi) => Ok(psi.projector()),
    }
}

/// Load a density operator; a pure-state file becomes its projector.
pub fn load_density(path: &Path) -> Result<DensityOperator> {
    match load(path)? {
        Loaded::Operator(op) => DensityOperator::new(op),
        Loaded::Pure(psi) => Ok(DensityOperator::from_pure(&psi)),
    }
}

pub fn save_operator(path: &Path, op: &BipartiteOperator) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "{}", operator_to_json(op))?;
    Ok(())
}

pub fn save_state(path: &Path, psi: &PureBipartiteState) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "{}", state_to_json(psi))?;
    Ok(())
}
