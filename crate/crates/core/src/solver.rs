//! Grounded Laplacian solves: fix `u(o) = 0` and solve the reduced SPD system.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::network::Network;

/// Networks up to this many vertices use a dense Cholesky factorization.
pub(crate) const DIRECT_SOLVE_LIMIT: usize = 2000;
/// Relative residual target of the iterative path.
pub(crate) const CG_RELATIVE_RESIDUAL: f64 = 1e-12;

enum Backend {
    Dense(Cholesky<f64, Dyn>),
    Iterative(SparseReduced),
}

/// Reduced Laplacian over `V' = V \ {o}` in CSR form.
struct SparseReduced {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl SparseReduced {
    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.row_start[i]..self.row_start[i + 1])
                .map(|k| self.vals[k] * x[self.cols[k]])
                .sum();
        }
    }

    /// Jacobi-preconditioned conjugate gradients.
    fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = b.len();
        let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut x = vec![0.0; n];
        if bnorm == 0.0 {
            return Ok(x);
        }
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&self.diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        for _ in 0..(20 * n).max(100) {
            self.mul(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                return Err(Error::Singular);
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if rnorm <= CG_RELATIVE_RESIDUAL * bnorm {
                return Ok(x);
            }
            for i in 0..n {
                z[i] = r[i] / self.diag[i];
            }
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(Error::Verification(format!(
            "conjugate gradients did not reach relative residual {CG_RELATIVE_RESIDUAL:e}"
        )))
    }
}

/// One factorization of the grounded Laplacian, reused for every right-hand side.
pub(crate) struct GroundedSolver {
    base: usize,
    /// Position in the reduced system for every vertex; `None` for the base.
    reduced: Vec<Option<usize>>,
    backend: Backend,
}

impl GroundedSolver {
    pub fn new(net: &Network) -> Result<Self> {
        Self::with_limit(net, DIRECT_SOLVE_LIMIT)
    }

    pub fn with_limit(net: &Network, direct_limit: usize) -> Result<Self> {
        let n = net.vertex_count();
        let base = net.base();
        // Eliminate far vertices first: on trees every pivot is then a plain
        // conductance, and large conductances far from the base never cancel
        // against each other in the last pivots.
        let dist = net.hop_distances();
        let mut order: Vec<usize> = net.non_base().collect();
        order.sort_by_key(|&x| std::cmp::Reverse(dist[x]));
        let mut reduced = vec![None; n];
        for (r, &x) in order.iter().enumerate() {
            reduced[x] = Some(r);
        }
        let m = n - 1;
        let backend = if n <= direct_limit {
            let mut a = DMatrix::zeros(m, m);
            for e in net.edges() {
                if let Some(i) = reduced[e.a] {
                    a[(i, i)] += e.c;
                }
                if let Some(j) = reduced[e.b] {
                    a[(j, j)] += e.c;
                }
                if let (Some(i), Some(j)) = (reduced[e.a], reduced[e.b]) {
                    a[(i, j)] -= e.c;
                    a[(j, i)] -= e.c;
                }
            }
            Backend::Dense(Cholesky::new(a).ok_or(Error::Singular)?)
        } else {
            let mut row_start = vec![0];
            let mut cols = Vec::new();
            let mut vals = Vec::new();
            let mut diag = vec![0.0; m];
            for &x in &order {
                let i = reduced[x].expect("non-base");
                let mut row: Vec<(usize, f64)> = Vec::new();
                let mut d = 0.0;
                for &(y, k) in net.neighbors(x) {
                    let c = net.edges()[k].c;
                    d += c;
                    if let Some(j) = reduced[y] {
                        row.push((j, -c));
                    }
                }
                row.push((i, d));
                row.sort_unstable_by_key(|&(j, _)| j);
                diag[i] = d;
                for (j, v) in row {
                    cols.push(j);
                    vals.push(v);
                }
                row_start.push(cols.len());
            }
            Backend::Iterative(SparseReduced {
                row_start,
                cols,
                vals,
                diag,
            })
        };
        Ok(GroundedSolver {
            base,
            reduced,
            backend,
        })
    }

    /// Grounded solution of `Δu = rhs` with `u(o) = 0`; the base row of
    /// `rhs` is dropped, so `rhs` should sum to zero for a true solution.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.reduced.len() - 1;
        let mut b = vec![0.0; m];
        for (x, r) in self.reduced.iter().enumerate() {
            if let Some(i) = r {
                b[*i] = rhs[x];
            }
        }
        let sol = match &self.backend {
            Backend::Dense(chol) => chol.solve(&DVector::from_vec(b)).data.into(),
            Backend::Iterative(sp) => sp.solve(&b)?,
        };
        let mut u = vec![0.0; self.reduced.len()];
        for (x, r) in self.reduced.iter().enumerate() {
            if let Some(i) = r {
                u[x] = sol[*i];
            }
        }
        debug_assert_eq!(u[self.base], 0.0);
        Ok(u)
    }
}
