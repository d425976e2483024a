// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{RamError, RamResult};
use crate::Word;
use serde::{Deserialize, Serialize};

/// An input word list (N, I[0], ..., I[N-1]).
///
/// N doubles as the size register readable via `getN`; every cell must stay
/// within the machine's value bound c·N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamInput {
    pub n: Word,
    pub cells: Vec<Word>,
}

impl RamInput {
    /// Builds an input of size `cells.len()`, checking every cell against c·N.
    pub fn new(cells: Vec<Word>, c: Word) -> RamResult<Self> {
        if cells.is_empty() {
            return Err(RamError::InvalidInput("input must have N >= 1 cells".into()));
        }
        let n = cells.len() as Word;
        let bound = c * n;
        for (j, &v) in cells.iter().enumerate() {
            if v > bound {
                return Err(RamError::InvalidInput(format!(
                    "I[{j}] = {v} exceeds the bound c*N = {bound}"
                )));
            }
        }
        Ok(Self { n, cells })
    }

    /// Reads I[index], failing when the index is outside 0..N-1.
    pub fn read(&self, index: Word, pc: usize) -> RamResult<Word> {
        self.cells
            .get(index as usize)
            .copied()
            .ok_or(RamError::InputIndexOutOfRange {
                index,
                n: self.n,
                pc,
            })
    }

    /// Parses the two-line input file format: first line N, second line the
    /// space-separated cells I[0..N-1].
    pub fn parse(text: &str, c: Word) -> RamResult<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n_line = lines
            .next()
            .ok_or_else(|| RamError::InvalidInput("missing N line".into()))?;
        let n: u64 = n_line
            .trim()
            .parse()
            .map_err(|_| RamError::InvalidInput(format!("bad N: {n_line:?}")))?;
        let cells_line = lines.next().unwrap_or("");
        let cells: Vec<Word> = cells_line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| RamError::InvalidInput(format!("bad cell: {t:?}")))
            })
            .collect::<RamResult<_>>()?;
        if cells.len() as u64 != n {
            return Err(RamError::InvalidInput(format!(
                "declared N = {n} but found {} cells",
                cells.len()
            )));
        }
        Self::new(cells, c)
    }
}

/// Encodes an undirected graph as the standard input word list:
/// N = 2m+2 cells holding (m, n, a_1, b_1, ..., a_m, b_m).
///
/// Vertices are numbered 1..=n and every vertex must be incident to at least
/// one edge, so that every cell value is below N.
pub fn encode_graph_input(edges: &[(Word, Word)], n: Word) -> RamResult<RamInput> {
    if edges.is_empty() {
        return Err(RamError::InvalidInput(
            "graph encoding requires at least one edge".into(),
        ));
    }
    let m = edges.len() as Word;
    let mut seen = vec![false; n as usize + 1];
    let mut cells = Vec::with_capacity(2 * edges.len() + 2);
    cells.push(m);
    cells.push(n);
    for &(a, b) in edges {
        for v in [a, b] {
            if v == 0 || v > n {
                return Err(RamError::VertexOutOfRange { vertex: v, n });
            }
            seen[v as usize] = true;
        }
        cells.push(a);
        cells.push(b);
    }
    if let Some(v) = (1..=n as usize).find(|&v| !seen[v]) {
        return Err(RamError::InvalidInput(format!("vertex {v} is isolated")));
    }
    RamInput::new(cells, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_single_edge() {
        let input = encode_graph_input(&[(1, 2)], 2).expect("encode");
        assert_eq!(input.n, 4);
        assert_eq!(input.cells, vec![1, 2, 1, 2]);
    }

    #[test]
    fn encode_triangle() {
        let input = encode_graph_input(&[(1, 2), (2, 3), (1, 3)], 3).expect("encode");
        assert_eq!(input.n, 8);
        assert_eq!(input.cells, vec![3, 3, 1, 2, 2, 3, 1, 3]);
    }

    #[test]
    fn encode_rejects_empty_edge_list() {
        assert!(matches!(
            encode_graph_input(&[], 2),
            Err(RamError::InvalidInput(_))
        ));
    }

    #[test]
    fn encode_rejects_out_of_range_vertex() {
        assert!(matches!(
            encode_graph_input(&[(1, 5)], 3),
            Err(RamError::VertexOutOfRange { vertex: 5, n: 3 })
        ));
    }

    #[test]
    fn parse_round_trip() {
        let input = RamInput::parse("3\n2 1 0\n", 8).expect("parse");
        assert_eq!(input.n, 3);
        assert_eq!(input.cells, vec![2, 1, 0]);
    }

    #[test]
    fn parse_rejects_length_mismatch() {
        assert!(RamInput::parse("3\n2 1\n", 8).is_err());
    }
}
