use crate::error::{Error, Result};
use crate::metric::UltraVector;

/// Simple graph on leaves `1..=n` with an edge `ij` whenever `u_ij >= v_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonGraph {
    n: usize,
    adjacent: Vec<bool>,
}

pub fn comparison_graph(u: &UltraVector, v: &UltraVector) -> Result<ComparisonGraph> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    let n = u.n();
    let mut g = ComparisonGraph {
        n,
        adjacent: vec![false; n * n],
    };
    for i in 1..=n {
        for j in i + 1..=n {
            if u.get(i, j) >= v.get(i, j) {
                g.set(i, j);
            }
        }
    }
    Ok(g)
}

impl ComparisonGraph {
    fn set(&mut self, i: usize, j: usize) {
        self.adjacent[(i - 1) * self.n + (j - 1)] = true;
        self.adjacent[(j - 1) * self.n + (i - 1)] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adjacent[(i - 1) * self.n + (j - 1)]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            adjacent: self.adjacent.iter().zip(&other.adjacent).map(|(a, b)| *a || *b).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.edges().len() == self.n * (self.n - 1) / 2
    }

    /// Induced subgraph on `vertices`, relabelled `1..=k` in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let mut g = Self {
            n: k,
            adjacent: vec![false; k * k],
        };
        for (a, &x) in vertices.iter().enumerate() {
            for (b, &y) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(x, y) {
                    g.set(a + 1, b + 1);
                }
            }
        }
        g
    }

    /// True iff the graph is not bipartite.
    pub fn has_odd_cycle(&self) -> bool {
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let cx = colour[x].unwrap();
                for y in 0..self.n {
                    if !self.adjacent[x * self.n + y] {
                        continue;
                    }
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            stack.push(y);
                        }
                        Some(cy) if cy == cx => return true,
                        Some(_) => {}
                    }
                }
            }
        }
        false
    }
}
