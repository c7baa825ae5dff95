//! Smith normal form over the integers.
//!
//! `smith_normal_form(M)` returns `(D, U, V)` with `U·M·V = D`, `D` diagonal,
//! `d_i | d_{i+1}`, nonnegative diagonal, and `U`, `V` unimodular.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor · row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: i64) {
        for j in 0..self.cols {
            let v = self[(source, j)];
            self[(target, j)] += factor * v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, factor: i64) {
        for i in 0..self.rows {
            let v = self[(i, source)];
            self[(i, target)] += factor * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)])
            .collect()
    }
}

/// Row operations on the matrix are mirrored on `u`, column operations on `v`.
struct Reducer {
    m: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_row(&mut self, target: usize, source: usize, factor: i64) {
        self.m.add_row(target, source, factor);
        self.u.add_row(target, source, factor);
    }

    fn add_col(&mut self, target: usize, source: usize, factor: i64) {
        self.m.add_col(target, source, factor);
        self.v.add_col(target, source, factor);
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
    }

    /// Smallest nonzero entry (by absolute value) in the block `t..`.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let v = self.m[(i, j)].abs();
                if v != 0 && best.is_none_or(|(bi, bj)| v < self.m[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        let steps = self.m.rows().min(self.m.cols());
        for t in 0..steps {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.m[(t, t)];
                let mut clean = true;
                for i in t + 1..self.m.rows() {
                    let q = self.m[(i, t)].div_euclid(p);
                    if q != 0 {
                        self.add_row(i, t, -q);
                    }
                    clean &= self.m[(i, t)] == 0;
                }
                for j in t + 1..self.m.cols() {
                    let q = self.m[(t, j)].div_euclid(p);
                    if q != 0 {
                        self.add_col(j, t, -q);
                    }
                    clean &= self.m[(t, j)] == 0;
                }
                if !clean {
                    continue;
                }
                // pivot must divide the rest of the block
                let offender = (t + 1..self.m.rows())
                    .find(|&i| (t + 1..self.m.cols()).any(|j| self.m[(i, j)] % p != 0));
                match offender {
                    Some(i) => self.add_row(t, i, 1),
                    None => break,
                }
            }
            if self.m[(t, t)] < 0 {
                self.negate_row(t);
            }
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut r = Reducer {
        u: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
        m: m.clone(),
    };
    r.reduce();
    SmithForm {
        d: r.m,
        u: r.u,
        v: r.v,
    }
}
