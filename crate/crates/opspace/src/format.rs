//! JSON shapes for matrices, bases and classification input.

use serde::{Deserialize, Serialize};

use opspace_core::matrix::ComplexMatrix;
use opspace_core::spaces::OperatorBasis;
use opspace_core::triple::TripleElement;
use opspace_core::C64;

use crate::error::{CliError, Result};
use crate::report::SCHEMA;

/// Row-major matrix with entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let data = self.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Ok(ComplexMatrix::new(self.rows, self.cols, data)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisJson {
    pub schema: &'static str,
    pub space: String,
    pub n: usize,
    pub dim: usize,
    /// Block shapes `[rows, cols]` of each element.
    pub components: Vec<[usize; 2]>,
    pub elements: Vec<Vec<MatrixJson>>,
}

impl BasisJson {
    pub fn new(space: &OperatorBasis, n: usize) -> Self {
        Self {
            schema: SCHEMA,
            space: space.name().to_string(),
            n,
            dim: space.dim(),
            components: space.components().iter().map(|c| [c.rows, c.cols]).collect(),
            elements: space
                .elements()
                .iter()
                .map(|blocks| blocks.iter().map(MatrixJson::from).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FamilyItem {
    Matrix(MatrixJson),
    Tuple(Vec<MatrixJson>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FamilyInput {
    List(Vec<FamilyItem>),
    Object {
        #[serde(alias = "basis")]
        elements: Vec<FamilyItem>,
    },
}

/// Parses a family of partial isometries: either a bare list or an object
/// with an `elements` (or `basis`) list, whose items are single matrices or
/// block tuples. A `build` output is accepted as is.
pub fn parse_family(text: &str) -> Result<Vec<TripleElement>> {
    let items = match serde_json::from_str::<FamilyInput>(text)? {
        FamilyInput::List(items) | FamilyInput::Object { elements: items } => items,
    };
    if items.is_empty() {
        return Err(CliError::Usage("family is empty".into()));
    }
    items
        .into_iter()
        .map(|item| {
            let blocks = match item {
                FamilyItem::Matrix(m) => vec![m.to_matrix()?],
                FamilyItem::Tuple(ms) => ms.iter().map(MatrixJson::to_matrix).collect::<Result<_>>()?,
            };
            Ok(TripleElement::new(blocks)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = ComplexMatrix::from_fn(2, 3, |i, j| C64::new(i as f64, -(j as f64)));
        let back = MatrixJson::from(&m).to_matrix().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn family_shapes() {
        let one = r#"{"rows":1,"cols":2,"data":[[1,0],[0,0]]}"#;
        let two = r#"{"rows":1,"cols":2,"data":[[0,0],[1,0]]}"#;
        let list = format!("[{one},{two}]");
        assert_eq!(parse_family(&list).unwrap().len(), 2);
        let obj = format!(r#"{{"name":"x","elements":[[{one}],[{two}]]}}"#);
        assert_eq!(parse_family(&obj).unwrap()[1].blocks().len(), 1);
        let basis = format!(r#"{{"basis":[{one}]}}"#);
        assert_eq!(parse_family(&basis).unwrap().len(), 1);
        assert!(parse_family("[]").is_err());
        assert!(parse_family(r#"[{"rows":1,"cols":2,"data":[[1,0]]}]"#).is_err());
    }
}
