use crate::error::{Error, Result};
use crate::network::Network;

/// Two rails `a0..aN`, `b0..bN` with `c(a_{n-1}, a_n) = Qⁿ`,
/// `c(b_{n-1}, b_n) = Q̄ⁿ` and a rung `a_n - b_n` at every `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeStripModel {
    pub q: f64,
    pub qbar: f64,
    pub n: usize,
    pub rung: f64,
}

impl LatticeStripModel {
    pub const DEFAULT_RUNG: f64 = 1.0;

    pub fn new(q: f64, qbar: f64, n: usize) -> Result<Self> {
        LatticeStripModel::with_rung(q, qbar, n, Self::DEFAULT_RUNG)
    }

    pub fn with_rung(q: f64, qbar: f64, n: usize, rung: f64) -> Result<Self> {
        if !(q > 1.0 && qbar > 1.0 && q.is_finite() && qbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Q and Qbar must exceed 1, got {q} and {qbar}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "truncation must be at least 2, got {n}"
            )));
        }
        if !(rung > 0.0 && rung.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rung conductance must be positive, got {rung}"
            )));
        }
        Ok(LatticeStripModel { q, qbar, n, rung })
    }

    pub fn top(k: usize) -> String {
        format!("a{k}")
    }

    pub fn bottom(k: usize) -> String {
        format!("b{k}")
    }

    /// The vertex on the other rail at the same position.
    pub fn mirror(name: &str) -> String {
        match name.strip_prefix('a') {
            Some(k) => format!("b{k}"),
            None => format!("a{}", name.trim_start_matches('b')),
        }
    }

    /// Base vertex `a0`.
    pub fn network(&self) -> Network {
        let mut vertices = Vec::with_capacity(2 * (self.n + 1));
        let mut edges = Vec::with_capacity(3 * self.n + 1);
        for k in 0..=self.n {
            vertices.push(Self::top(k));
            vertices.push(Self::bottom(k));
            edges.push((Self::top(k), Self::bottom(k), self.rung));
            if k > 0 {
                edges.push((Self::top(k - 1), Self::top(k), self.q.powi(k as i32)));
                edges.push((
                    Self::bottom(k - 1),
                    Self::bottom(k),
                    self.qbar.powi(k as i32),
                ));
            }
        }
        Network::new(vertices, Self::top(0), edges).expect("valid strip")
    }
}
