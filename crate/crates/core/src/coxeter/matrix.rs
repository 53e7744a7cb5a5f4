//! Coxeter matrices and the JSON system descriptions that produce them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::CoxeterError;

/// Largest rank accepted by [`CoxeterMatrix::new`].
pub const MAX_RANK: usize = 16;

/// A single entry `m_ij` of a Coxeter matrix. `None` is `∞`.
pub type Order = Option<u32>;

/// Symmetric table of the orders `m_ij` of the products `s_i s_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    entries: Vec<Order>,
}

impl CoxeterMatrix {
    pub fn new(rows: Vec<Vec<Order>>) -> Result<Self, CoxeterError> {
        let rank = rows.len();
        if rank == 0 {
            return Err(CoxeterError::InvalidMatrix("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(CoxeterError::InvalidMatrix(format!(
                "rank {rank} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(CoxeterError::InvalidMatrix(format!(
                    "row {} has {} entries, expected {rank}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = CoxeterMatrix { rank, entries };
        for i in 0..rank {
            if m.get(i, i) != Some(1) {
                return Err(CoxeterError::InvalidMatrix(format!(
                    "diagonal entry m_{0}{0} must be 1",
                    i + 1
                )));
            }
            for j in 0..rank {
                if m.get(i, j) != m.get(j, i) {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if i != j && matches!(m.get(i, j), Some(k) if k < 2) {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "off-diagonal entry m_{}{} must be at least 2",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(m)
    }

    /// `A_n`: the path graph with all edges labelled 3.
    pub fn type_a(rank: usize) -> Result<Self, CoxeterError> {
        Self::from_edges(rank, (1..rank).map(|i| (i - 1, i, Some(3))))
    }

    /// `B_n` with the label 4 on the edge between the first two generators.
    pub fn type_b(rank: usize) -> Result<Self, CoxeterError> {
        if rank < 2 {
            return Err(CoxeterError::InvalidMatrix("type B needs rank at least 2".into()));
        }
        Self::from_edges(
            rank,
            (1..rank).map(|i| (i - 1, i, if i == 1 { Some(4) } else { Some(3) })),
        )
    }

    /// `D_n`: a path on the first `n - 1` generators with the last generator
    /// attached to generator `n - 2`.
    pub fn type_d(rank: usize) -> Result<Self, CoxeterError> {
        if rank < 2 {
            return Err(CoxeterError::InvalidMatrix("type D needs rank at least 2".into()));
        }
        let mut edges: Vec<_> = (1..rank - 1).map(|i| (i - 1, i, Some(3))).collect();
        if rank >= 3 {
            edges.push((rank - 3, rank - 1, Some(3)));
        }
        Self::from_edges(rank, edges)
    }

    /// The dihedral system `I_2(m)`; `None` gives the infinite dihedral group.
    pub fn dihedral(m: Order) -> Result<Self, CoxeterError> {
        Self::new(vec![vec![Some(1), m], vec![m, Some(1)]])
    }

    fn from_edges(
        rank: usize,
        edges: impl IntoIterator<Item = (usize, usize, Order)>,
    ) -> Result<Self, CoxeterError> {
        let mut rows = vec![vec![Some(2); rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Some(1);
        }
        for (i, j, m) in edges {
            rows[i][j] = m;
            rows[j][i] = m;
        }
        Self::new(rows)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> Order {
        self.entries[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<Order>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// True for the labelled path `A_n` in matrix order.
    pub fn is_type_a(&self) -> bool {
        (0..self.rank).all(|i| {
            (0..self.rank).all(|j| {
                let expected = if i == j {
                    Some(1)
                } else if i.abs_diff(j) == 1 {
                    Some(3)
                } else {
                    Some(2)
                };
                self.get(i, j) == expected
            })
        })
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|m| m.map_or_else(|| "inf".to_string(), |k| k.to_string()))
                    .collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// JSON description of a Coxeter system.
///
/// Accepts either `{"type":"A"|"B"|"D"|"I2","rank":n,"m":k}` or
/// `{"matrix":[[1,3],[3,1]]}`. Infinite entries are written `null` or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<MatrixEntry>,
    },
    Matrix {
        matrix: Vec<Vec<MatrixEntry>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Finite(u32),
    Symbol(Option<InfinitySymbol>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinitySymbol {
    #[serde(rename = "inf", alias = "infinity", alias = "∞")]
    Inf,
}

impl MatrixEntry {
    fn order(self) -> Order {
        match self {
            MatrixEntry::Finite(k) => Some(k),
            MatrixEntry::Symbol(_) => None,
        }
    }
}

impl SystemSpec {
    pub fn parse_json(text: &str) -> Result<Self, CoxeterError> {
        serde_json::from_str(text).map_err(|e| CoxeterError::Parse(format!("system JSON: {e}")))
    }

    pub fn to_matrix(&self) -> Result<CoxeterMatrix, CoxeterError> {
        match self {
            SystemSpec::Matrix { matrix } => CoxeterMatrix::new(
                matrix
                    .iter()
                    .map(|row| row.iter().map(|e| e.order()).collect())
                    .collect(),
            ),
            SystemSpec::Named { kind, rank, m } => {
                let need_rank = || {
                    rank.ok_or_else(|| CoxeterError::Parse(format!("type {kind} needs a rank")))
                };
                match kind.to_ascii_uppercase().as_str() {
                    "A" => CoxeterMatrix::type_a(need_rank()?),
                    "B" | "C" => CoxeterMatrix::type_b(need_rank()?),
                    "D" => CoxeterMatrix::type_d(need_rank()?),
                    "I2" | "I" => {
                        if rank.is_some_and(|r| r != 2) {
                            return Err(CoxeterError::Parse("type I2 has rank 2".into()));
                        }
                        let m = m.ok_or_else(|| CoxeterError::Parse("type I2 needs m".into()))?;
                        CoxeterMatrix::dihedral(m.order())
                    }
                    other => Err(CoxeterError::Parse(format!("unknown Coxeter type {other:?}"))),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_matrices() {
        assert!(CoxeterMatrix::new(vec![]).is_err());
        assert!(CoxeterMatrix::new(vec![vec![Some(1), Some(3)], vec![Some(4), Some(1)]]).is_err());
        assert!(CoxeterMatrix::new(vec![vec![Some(2)]]).is_err());
        assert!(CoxeterMatrix::new(vec![vec![Some(1), Some(1)], vec![Some(1), Some(1)]]).is_err());
        assert!(CoxeterMatrix::new(vec![vec![Some(1), Some(3)]]).is_err());
    }

    #[test]
    fn named_types() {
        let a3 = CoxeterMatrix::type_a(3).unwrap();
        assert!(a3.is_type_a());
        assert_eq!(a3.get(0, 2), Some(2));
        let b3 = CoxeterMatrix::type_b(3).unwrap();
        assert_eq!(b3.get(0, 1), Some(4));
        assert_eq!(b3.get(1, 2), Some(3));
        assert_eq!(b3.get(0, 2), Some(2));
        assert!(!b3.is_type_a());
        let d4 = CoxeterMatrix::type_d(4).unwrap();
        assert_eq!(d4.get(1, 3), Some(3));
        assert_eq!(d4.get(2, 3), Some(2));
    }

    #[test]
    fn parses_json_forms() {
        let spec = SystemSpec::parse_json(r#"{"type":"A","rank":2}"#).unwrap();
        assert_eq!(spec.to_matrix().unwrap(), CoxeterMatrix::type_a(2).unwrap());
        let spec = SystemSpec::parse_json(r#"{"matrix":[[1,3],[3,1]]}"#).unwrap();
        assert_eq!(spec.to_matrix().unwrap(), CoxeterMatrix::type_a(2).unwrap());
        let spec = SystemSpec::parse_json(r#"{"type":"I2","rank":2,"m":7}"#).unwrap();
        assert_eq!(spec.to_matrix().unwrap().get(0, 1), Some(7));
        let spec = SystemSpec::parse_json(r#"{"matrix":[[1,"inf"],["inf",1]]}"#).unwrap();
        assert_eq!(spec.to_matrix().unwrap().get(0, 1), None);
        let spec = SystemSpec::parse_json(r#"{"matrix":[[1,null],[null,1]]}"#).unwrap();
        assert_eq!(spec.to_matrix().unwrap().get(1, 0), None);
        assert!(SystemSpec::parse_json(r#"{"type":"Q","rank":2}"#)
            .unwrap()
            .to_matrix()
            .is_err());
    }
}
