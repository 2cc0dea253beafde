//! The Parseval frame `w_xy = √c_xy · v_xy` indexed by an orientation of the
//! edges, its analysis/synthesis operators and currents `I(u)_xy = c_xy(u(x) - u(y))`.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::energy::{energy_inner, energy_norm_sq, DipoleSystem, PotentialFunction};
use crate::error::{Error, Result};
use crate::network::{canonical_laplacian, Network};

/// Relative tolerance of the construction-time Parseval probe.
pub const PARSEVAL_TOL: f64 = 1e-9;
/// `‖w_e‖² = 1` within this for the frame to count as an ONB.
pub const ONB_TOL: f64 = 1e-9;
/// Edge currents at or below this magnitude count as zero when orienting by current.
pub const ZERO_CURRENT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientationScheme {
    /// `(x, y)` with `x < y` in canonical order.
    Lexicographic,
    /// Away from the base vertex by hop distance; ties are lexicographic.
    Geometric,
    /// Along the current of a unit dipole from `source` to `sink`.
    CurrentInduced { source: usize, sink: usize },
}

/// One orientation `(x, y)` for every edge of a network.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedEdgeSet {
    /// Oriented pairs, in the network's edge order.
    pub edges: Vec<(usize, usize)>,
    pub scheme: OrientationScheme,
}

pub fn orient(net: &Network, scheme: OrientationScheme) -> Result<OrientedEdgeSet> {
    let lex = |k: usize| {
        let e = net.edges()[k];
        (e.a, e.b)
    };
    let edges = match &scheme {
        OrientationScheme::Lexicographic => (0..net.edge_count()).map(lex).collect(),
        OrientationScheme::Geometric => {
            let dist = net.hop_distances();
            net.edges()
                .iter()
                .map(|e| {
                    if dist[e.b] < dist[e.a] {
                        (e.b, e.a)
                    } else {
                        (e.a, e.b)
                    }
                })
                .collect()
        }
        &OrientationScheme::CurrentInduced { source, sink } => {
            if source == sink {
                return Err(Error::SameEndpoints(net.name(source).to_owned()));
            }
            let u = crate::energy::dipole(net, source, sink)?;
            net.edges()
                .iter()
                .map(|e| {
                    let i = e.c * (u[e.a] - u[e.b]);
                    if i < -ZERO_CURRENT {
                        (e.b, e.a)
                    } else {
                        (e.a, e.b)
                    }
                })
                .collect()
        }
    };
    Ok(OrientedEdgeSet { edges, scheme })
}

/// `I(u)_(x,y) = c_xy (u(x) - u(y))`.
pub fn current(net: &Network, u: &[f64], x: usize, y: usize) -> Result<f64> {
    let k = net
        .edge_between(x, y)
        .ok_or_else(|| Error::NotAnEdge(net.name(x).to_owned(), net.name(y).to_owned()))?;
    Ok(net.edges()[k].c * (u[x] - u[y]))
}

/// `Σ_i Res_{e_i} |I(v_xy)_{e_i}|²` along a vertex path starting at `x` and ending at `y`.
pub fn dissipation_along_path(net: &Network, v_xy: &[f64], path: &[usize]) -> Result<f64> {
    let mut total = 0.0;
    for w in path.windows(2) {
        let i = current(net, v_xy, w[0], w[1])?;
        total += i * i / net.conductance(w[0], w[1]);
    }
    Ok(total)
}

/// The frame `{w_e}` with its Gramian `⟨w_e, w_f⟩_E`.
#[derive(Clone, Debug)]
pub struct ParsevalFrame {
    oriented: OrientedEdgeSet,
    /// `√c_e` per oriented edge.
    scale: Vec<f64>,
    /// `v_e` per oriented edge, grounded.
    dipoles: Vec<PotentialFunction>,
    vectors: Vec<PotentialFunction>,
    gramian: DMatrix<f64>,
    energy_form: DMatrix<f64>,
}

impl ParsevalFrame {
    /// Builds `w_xy = √c_xy · v_xy` from the grounded dipole solver and checks
    /// the Parseval identity on the probes `δ_x - δ_o`, `x ∈ V'`.
    pub fn build(net: &Network, oriented: OrientedEdgeSet) -> Result<Self> {
        let sys = DipoleSystem::new(net)?;
        Self::build_with(net, &sys, oriented)
    }

    pub fn build_with(
        net: &Network,
        sys: &DipoleSystem,
        oriented: OrientedEdgeSet,
    ) -> Result<Self> {
        if oriented.edges.len() != net.edge_count()
            || oriented
                .edges
                .iter()
                .enumerate()
                .any(|(k, &(x, y))| net.edge_between(x, y) != Some(k))
        {
            return Err(Error::InvalidParameter(
                "orientation does not cover the network's edges".into(),
            ));
        }
        let mut scale = Vec::with_capacity(net.edge_count());
        let mut dipoles = Vec::with_capacity(net.edge_count());
        let mut vectors = Vec::with_capacity(net.edge_count());
        for (k, &(x, y)) in oriented.edges.iter().enumerate() {
            let s = net.edges()[k].c.sqrt();
            let v = sys.dipole_between(x, y);
            vectors.push(v.scaled(s));
            dipoles.push(v);
            scale.push(s);
        }
        // ⟨u, v⟩_E = uᵀ M v with M the Laplacian matrix.
        let energy_form = canonical_laplacian(net);
        let n = net.vertex_count();
        let w = DMatrix::from_fn(n, vectors.len(), |i, e| vectors[e][i]);
        let gramian = w.transpose() * &energy_form * &w;

        let frame = ParsevalFrame {
            oriented,
            scale,
            dipoles,
            vectors,
            gramian,
            energy_form,
        };
        for x in net.non_base() {
            let mut probe = net.delta(x);
            probe[net.base()] = -1.0;
            let direct = energy_norm_sq(net, &probe);
            let framed: f64 = frame.analysis(net, &probe).iter().map(|c| c * c).sum();
            if (framed - direct).abs() > PARSEVAL_TOL * direct {
                return Err(Error::Verification(format!(
                    "Parseval identity fails on probe delta_{} - delta_o: {framed} vs {direct}",
                    net.name(x)
                )));
            }
        }
        Ok(frame)
    }

    pub fn oriented(&self) -> &OrientedEdgeSet {
        &self.oriented
    }

    pub fn vectors(&self) -> &[PotentialFunction] {
        &self.vectors
    }

    pub fn gramian(&self) -> &DMatrix<f64> {
        &self.gramian
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `Au = (⟨w_e, u⟩_E)_e`, evaluated through the energy form.
    pub fn analysis(&self, net: &Network, u: &[f64]) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|w| energy_inner(net, w, u))
            .collect()
    }

    /// `A*γ = Σ_e γ_e w_e` (grounded).
    pub fn synthesis(&self, coeffs: &[f64]) -> PotentialFunction {
        let n = self.energy_form.nrows();
        let mut out = vec![0.0; n];
        for (g, w) in coeffs.iter().zip(&self.vectors) {
            for (o, v) in out.iter_mut().zip(w.values()) {
                *o += g * v;
            }
        }
        PotentialFunction::new(out)
    }

    /// `Σ_e I(u)_e v_e`, the current decomposition of `u`.
    pub fn current_decomposition(&self, net: &Network, u: &[f64]) -> PotentialFunction {
        let n = net.vertex_count();
        let mut out = vec![0.0; n];
        for (k, &(x, y)) in self.oriented.edges.iter().enumerate() {
            let i = net.edges()[k].c * (u[x] - u[y]);
            for (o, v) in out.iter_mut().zip(self.dipoles[k].values()) {
                *o += i * v;
            }
        }
        PotentialFunction::new(out)
    }

    /// `√c_e` of the `k`-th frame vector.
    pub fn scale(&self, k: usize) -> f64 {
        self.scale[k]
    }

    pub fn diagnostics(&self, net: &Network) -> FrameDiagnostics {
        let norms_sq: Vec<f64> = (0..self.len()).map(|k| self.gramian[(k, k)]).collect();
        let g2 = &self.gramian * &self.gramian;
        let idempotence_defect = (g2 - &self.gramian).norm();
        let eig = SymmetricEigen::new(self.gramian.clone());
        // projection eigenvalues are 0 or 1
        let rank = eig.eigenvalues.iter().filter(|&&l| l > 0.5).count();
        let is_onb = norms_sq.iter().all(|n| (n - 1.0).abs() <= ONB_TOL);
        FrameDiagnostics {
            edges: self
                .oriented
                .edges
                .iter()
                .map(|&(x, y)| (net.name(x).to_owned(), net.name(y).to_owned()))
                .collect(),
            norms_sq,
            idempotence_defect,
            rank,
            vertex_count: net.vertex_count(),
            redundancy: net.edge_count() as i64 - (net.vertex_count() as i64 - 1),
            is_onb,
        }
    }
}

/// Per-edge norms and global structure of a built frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameDiagnostics {
    pub edges: Vec<(String, String)>,
    /// `‖w_e‖²_E` per oriented edge.
    pub norms_sq: Vec<f64>,
    /// Frobenius norm of `G² - G`.
    pub idempotence_defect: f64,
    pub rank: usize,
    pub vertex_count: usize,
    /// `|E| - (|V| - 1)`, the cycle rank.
    pub redundancy: i64,
    pub is_onb: bool,
}

impl FrameDiagnostics {
    pub fn max_norm_sq(&self) -> f64 {
        self.norms_sq.iter().cloned().fold(0.0, f64::max)
    }
}

impl fmt::Display for FrameDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::fmt::g12;
        writeln!(f, "{:<20} {}", "frame_size", self.norms_sq.len())?;
        writeln!(f, "{:<20} {}", "rank", self.rank)?;
        writeln!(f, "{:<20} {}", "redundancy", self.redundancy)?;
        writeln!(
            f,
            "{:<20} {}",
            "idempotence_defect",
            g12(self.idempotence_defect)
        )?;
        writeln!(f, "{:<20} {}", "is_onb", self.is_onb)?;
        for ((x, y), n) in self.edges.iter().zip(&self.norms_sq) {
            writeln!(f, "{:<20} {}", format!("norm_sq({x},{y})"), g12(*n))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::dipole;

    fn triangle(c01: f64, c02: f64, c12: f64) -> Network {
        Network::from_indexed(3, 0, &[(0, 1, c01), (0, 2, c02), (1, 2, c12)]).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let path = Network::from_indexed(3, 0, &[(0, 1, 1.0), (1, 2, 3.0)]).unwrap();
        let o = orient(
            &path,
            OrientationScheme::CurrentInduced { source: 0, sink: 2 },
        )
        .unwrap();
        assert_eq!(o.edges, vec![(0, 1), (1, 2)]);
        let o = orient(
            &path,
            OrientationScheme::CurrentInduced { source: 2, sink: 0 },
        )
        .unwrap();
        assert_eq!(o.edges, vec![(1, 0), (2, 1)]);

        let tri = triangle(1.0, 1.0, 1.0);
        let o = orient(
            &tri,
            OrientationScheme::CurrentInduced { source: 0, sink: 1 },
        )
        .unwrap();
        assert_eq!(o.edges, vec![(0, 1), (0, 2), (2, 1)]);
        let u = dipole(&tri, 0, 1).unwrap();
        assert!((current(&tri, &u, 2, 1).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(orient(
            &tri,
            OrientationScheme::CurrentInduced { source: 1, sink: 1 }
        )
        .is_err());

        // Wheatstone bridge, balanced: no current through {1,2}.
        let bridge = Network::from_indexed(
            4,
            0,
            &[
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 2, 5.0),
                (1, 3, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap();
        let o = orient(
            &bridge,
            OrientationScheme::CurrentInduced { source: 3, sink: 0 },
        )
        .unwrap();
        assert_eq!(o.edges[2], (1, 2));
        assert_eq!(o.edges[0], (1, 0));

        let o = orient(&bridge, OrientationScheme::Geometric).unwrap();
        assert_eq!(o.edges, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn currents() {
        let tri = triangle(1.0, 1.0, 1.0);
        assert_eq!(current(&tri, &[2.0; 3], 0, 1).unwrap(), 0.0);
        let v = dipole(&tri, 0, 1).unwrap();
        assert!((current(&tri, &v, 0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(
            current(&tri, &v, 1, 0).unwrap(),
            -current(&tri, &v, 0, 1).unwrap()
        );

        let path = Network::from_indexed(3, 0, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let v = dipole(&path, 0, 2).unwrap();
        assert!((current(&path, &v, 0, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((current(&path, &v, 1, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(
            current(&path, &v, 0, 2),
            Err(Error::NotAnEdge(..))
        ));
    }

    #[test]
    fn triangle_frame_vectors() {
        let (c01, c02, c12) = (1.3, 0.7, 2.9);
        let tri = triangle(c01, c02, c12);
        let d = c01 * c02 + c01 * c12 + c02 * c12;
        let frame = ParsevalFrame::build(
            &tri,
            orient(&tri, OrientationScheme::Lexicographic).unwrap(),
        )
        .unwrap();
        let w01 = &frame.vectors()[0];
        let expected = [c01.sqrt() * c12 / d, -c01.sqrt() * c02 / d, 0.0];
        // modulo constants: compare differences
        for i in 0..3 {
            for j in 0..3 {
                let got = w01[i] - w01[j];
                let want = expected[i] - expected[j];
                assert!((got - want).abs() < 1e-12);
            }
        }
        let unit = triangle(1.0, 1.0, 1.0);
        let frame = ParsevalFrame::build(
            &unit,
            orient(&unit, OrientationScheme::Lexicographic).unwrap(),
        )
        .unwrap();
        let diag = frame.diagnostics(&unit);
        assert!((diag.norms_sq[0] - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(diag.redundancy, 1);
        assert!(!diag.is_onb);
        assert_eq!(diag.rank, 2);
    }

    #[test]
    fn tree_frame_is_onb() {
        let a = [0.5, 2.0, 7.0, 1.1];
        let edges: Vec<_> = a.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
        let net = Network::from_indexed(5, 0, &edges).unwrap();
        let frame = ParsevalFrame::build(
            &net,
            orient(&net, OrientationScheme::Lexicographic).unwrap(),
        )
        .unwrap();
        let diag = frame.diagnostics(&net);
        assert!(diag.is_onb);
        assert_eq!(diag.redundancy, 0);
        assert!(diag.idempotence_defect < 1e-9);

        let u = [0.3, -1.0, 2.5, 0.0, 4.0];
        let coeffs = frame.analysis(&net, &u);
        for (k, e) in net.edges().iter().enumerate() {
            let want = e.c.sqrt() * (u[e.a] - u[e.b]);
            assert!((coeffs[k] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn synthesis_kills_cycle_space() {
        let tri = triangle(1.0, 1.0, 1.0);
        let frame = ParsevalFrame::build(
            &tri,
            orient(&tri, OrientationScheme::Lexicographic).unwrap(),
        )
        .unwrap();
        // edges (0,1), (0,2), (1,2): the cycle 0 -> 1 -> 2 -> 0 uses +(0,1) +(1,2) -(0,2)
        let out = frame.synthesis(&[1.0, -1.0, 1.0]);
        for v in out.values() {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn dissipation_bound_on_triangle() {
        let tri = triangle(1.0, 2.0, 3.0);
        let v = dipole(&tri, 0, 1).unwrap();
        let dist = energy_norm_sq(&tri, &v);
        for path in [vec![0, 1], vec![0, 2, 1]] {
            assert!(dissipation_along_path(&tri, &v, &path).unwrap() <= dist + 1e-12);
        }
    }

    #[test]
    fn rejects_foreign_orientation() {
        let tri = triangle(1.0, 1.0, 1.0);
        let bad = OrientedEdgeSet {
            edges: vec![(0, 1), (0, 2)],
            scheme: OrientationScheme::Lexicographic,
        };
        assert!(ParsevalFrame::build(&tri, bad).is_err());
    }
}
