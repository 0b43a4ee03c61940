//! Square-lattice torus geometry.
//!
//! Direct vertex `(t, i)` sits at column `t` (horizontal, `0..N`) and row `i`
//! (vertical, `0..L`), with index `t*L + i`. Dual vertex `(t, i)` sits at
//! `(t + 1/2, i + 1/2)` and shares the index.
//!
//! Edge indexing is fixed so colouring masks are portable:
//! vertical edges `(t,i)-(t,i+1)` come first as `t*L + i`, then horizontal
//! edges `(t,i)-(t+1,i)` as `L*N + t*L + i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// An edge from `tail` to `head = tail + unit step` in `direction`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusLattice {
    width: usize,
    length: usize,
    edges: Vec<Edge>,
    dual_edges: Vec<Edge>,
}

/// Position of the horizontal seam used by twisted boundary conditions.
///
/// `Horizontal { row: r }` crosses every vertical bond between rows `r-1` and
/// `r` (mod `L`); row 0 is the bond closing the vertical ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeamSpec {
    None,
    #[default]
    Default,
    Horizontal {
        row: usize,
    },
}

impl SeamSpec {
    pub fn row(&self) -> Option<usize> {
        match self {
            SeamSpec::None => None,
            SeamSpec::Default => Some(0),
            SeamSpec::Horizontal { row } => Some(*row),
        }
    }
}

impl TorusLattice {
    pub fn new(width: usize, length: usize) -> Result<Self> {
        if width < 2 || length < 2 {
            return Err(Error::DimensionTooSmall { width, length });
        }
        let (l, n) = (width, length);
        let v = l * n;
        let idx = |t: usize, i: usize| (t % n) * l + (i % l);
        let mut edges = Vec::with_capacity(2 * v);
        let mut dual_edges = Vec::with_capacity(2 * v);
        for t in 0..n {
            for i in 0..l {
                edges.push(Edge {
                    tail: idx(t, i),
                    head: idx(t, i + 1),
                    direction: Direction::Vertical,
                });
                // crosses (t,i)-(t,i+1): dual (t-1,i) -> dual (t,i)
                dual_edges.push(Edge {
                    tail: idx(t + n - 1, i),
                    head: idx(t, i),
                    direction: Direction::Horizontal,
                });
            }
        }
        for t in 0..n {
            for i in 0..l {
                edges.push(Edge {
                    tail: idx(t, i),
                    head: idx(t + 1, i),
                    direction: Direction::Horizontal,
                });
                // crosses (t,i)-(t+1,i): dual (t,i-1) -> dual (t,i)
                dual_edges.push(Edge {
                    tail: idx(t, i + l - 1),
                    head: idx(t, i),
                    direction: Direction::Vertical,
                });
            }
        }
        Ok(TorusLattice {
            width,
            length,
            edges,
            dual_edges,
        })
    }

    /// Vertical extent `L` (sites per transfer-matrix column).
    pub fn width(&self) -> usize {
        self.width
    }

    /// Horizontal extent `N` (number of columns).
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn num_vertices(&self) -> usize {
        self.width * self.length
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, column: usize, row: usize) -> usize {
        (column % self.length) * self.width + (row % self.width)
    }

    /// `(column, row)` of a vertex index.
    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.width, v % self.width)
    }

    pub fn vertical_edge(&self, column: usize, row: usize) -> usize {
        self.vertex(column, row)
    }

    pub fn horizontal_edge(&self, column: usize, row: usize) -> usize {
        self.num_vertices() + self.vertex(column, row)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// The dual edge crossing direct edge `e`, between dual vertices.
    pub fn dual_edge(&self, e: usize) -> Edge {
        self.dual_edges[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.tail == v).count()
            + self.edges.iter().filter(|e| e.head == v).count()
    }

    /// Half-step shift `(-1/2, -1/2)` sending dual vertex `(t,i)` onto direct
    /// vertex `(t,i)`: direct edge `e` maps to the direct edge that occupies
    /// the position of its crossing dual edge after the shift.
    pub fn shift_map(&self) -> Vec<usize> {
        (0..self.num_edges())
            .map(|e| {
                let d = self.dual_edge(e);
                let (t, i) = self.coords(d.tail);
                match d.direction {
                    Direction::Horizontal => self.horizontal_edge(t, i),
                    Direction::Vertical => self.vertical_edge(t, i),
                }
            })
            .collect()
    }
}

/// `build_torus(L, N)`.
pub fn build_torus(width: usize, length: usize) -> Result<TorusLattice> {
    TorusLattice::new(width, length)
}
