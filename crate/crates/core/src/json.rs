//! Matrix interchange: the JSON schema `{"n", "legs", "ring", "entries"}`
//! with entries sorted by flattened `(row, col)`, and LaTeX `pmatrix` export.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_ratfunc, Ctx};
use crate::tensor::TensorMat;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    legs: usize,
    ring: Vec<String>,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    row: Vec<usize>,
    col: Vec<usize>,
    coeff: String,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse { pos: e.column(), msg: e.to_string() }
}

impl TensorMat {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let doc = MatrixJson {
            n: self.n(),
            legs: self.legs(),
            ring: self.ring().vars().to_vec(),
            entries: self
                .entries()
                .map(|e| EntryJson { row: e.row, col: e.col, coeff: e.value.to_string() })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<TensorMat> {
        let doc: MatrixJson = serde_json::from_str(text).map_err(json_err)?;
        if doc.n == 0 || doc.legs == 0 {
            return Err(Error::InvalidArgument("n and legs must be positive".into()));
        }
        let ring = Ctx::new(&doc.ring);
        let mut m = TensorMat::zero(doc.n, doc.legs, &ring);
        for e in doc.entries {
            if e.row.len() != doc.legs || e.col.len() != doc.legs {
                return Err(Error::DimensionMismatch(format!("entry {:?},{:?} has the wrong number of legs", e.row, e.col)));
            }
            let v = parse_ratfunc(&e.coeff, &ring)?;
            m.add_at(&e.row, &e.col, &v)?;
        }
        Ok(m)
    }

    /// A `pmatrix` over the flattened basis, entries in the text grammar.
    pub fn to_latex(&self) -> String {
        let dim = self.dim();
        let mut out = String::from("\\begin{pmatrix}\n");
        for r in 0..dim {
            let row: Vec<String> = (0..dim).map(|c| self.get_flat(r, c).to_string()).collect();
            out.push_str(&row.join(" & "));
            if r + 1 < dim {
                out.push_str(" \\\\");
            }
            out.push('\n');
        }
        out.push_str("\\end{pmatrix}\n");
        out
    }
}
