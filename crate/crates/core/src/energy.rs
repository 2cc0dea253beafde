//! The energy Hilbert space `H_E`: functions on `V` modulo constants with
//! `‖u‖² = Σ_{edges} c_xy |u(x) - u(y)|²`.
//!
//! Dipoles are computed by grounding: `u(o) = 0` fixes the representative
//! and the reduced Laplacian is SPD on a connected network. One
//! factorization serves every dipole through `v_xy = v_x - v_y`.

use std::ops::Deref;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::network::{laplacian_apply, Network};
use crate::solver::GroundedSolver;

/// Relative tolerance of the `⟨δ_x, f⟩_E = (Δf)(x)` self-check.
pub const DELTA_PAIRING_TOL: f64 = 1e-10;

/// A function on `V`, optionally normalised to vanish at the base vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialFunction {
    values: Vec<f64>,
    grounded: bool,
}

impl PotentialFunction {
    pub fn new(values: Vec<f64>) -> Self {
        PotentialFunction {
            values,
            grounded: false,
        }
    }

    /// The representative of `values` modulo constants with value 0 at `o`.
    pub fn grounded(net: &Network, mut values: Vec<f64>) -> Self {
        let shift = values[net.base()];
        for v in &mut values {
            *v -= shift;
        }
        PotentialFunction {
            values,
            grounded: true,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_grounded(&self) -> bool {
        self.grounded
    }

    /// `self - other`; grounded if both are.
    pub fn sub(&self, other: &PotentialFunction) -> PotentialFunction {
        PotentialFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            grounded: self.grounded && other.grounded,
        }
    }

    pub fn scaled(&self, s: f64) -> PotentialFunction {
        PotentialFunction {
            values: self.values.iter().map(|v| s * v).collect(),
            grounded: self.grounded,
        }
    }
}

impl Deref for PotentialFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

/// `⟨u, v⟩_E = ½ ΣΣ_{(x,y)∈E} c_xy (u(x)-u(y))(v(x)-v(y))`, i.e. one term
/// per undirected edge.
pub fn energy_inner(net: &Network, u: &[f64], v: &[f64]) -> f64 {
    net.edges()
        .iter()
        .map(|e| e.c * (u[e.a] - u[e.b]) * (v[e.a] - v[e.b]))
        .sum()
}

pub fn energy_norm_sq(net: &Network, u: &[f64]) -> f64 {
    energy_inner(net, u, u)
}

/// Energy distance between two functions, i.e. equality modulo constants.
pub fn energy_distance(net: &Network, u: &[f64], v: &[f64]) -> f64 {
    let d: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    energy_norm_sq(net, &d).max(0.0).sqrt()
}

/// Grounded solution of `Δv = δ_x - δ_y`, the dipole with
/// `⟨v_xy, u⟩_E = u(x) - u(y)`.
pub fn dipole(net: &Network, x: usize, y: usize) -> Result<PotentialFunction> {
    if x == y {
        return Err(Error::SameEndpoints(net.name(x).to_owned()));
    }
    let solver = GroundedSolver::new(net)?;
    let mut rhs = vec![0.0; net.vertex_count()];
    rhs[x] = 1.0;
    rhs[y] = -1.0;
    Ok(PotentialFunction {
        values: solver.solve(&rhs)?,
        grounded: true,
    })
}

/// Effective resistance `d_c(x, y) = ‖v_xy‖²_E`.
pub fn resistance_distance(net: &Network, x: usize, y: usize) -> Result<f64> {
    if x == y {
        return Ok(0.0);
    }
    // ‖v_xy‖²_E = ⟨v_xy, v_xy⟩_E = v_xy(x) - v_xy(y); the pointwise form
    // avoids weighting rounding noise by large conductances
    let v = dipole(net, x, y)?;
    Ok(v[x] - v[y])
}

/// `⟨δ_x, δ_y⟩_E`: `c(x)` on the diagonal, `-c_xy` on edges, 0 otherwise.
pub fn delta_inner(net: &Network, x: usize, y: usize) -> f64 {
    if x == y {
        net.total_conductance(x)
    } else {
        -net.conductance(x, y)
    }
}

/// `⟨δ_x, f⟩_E`, checked against `(Δf)(x)`.
pub fn delta_pairing(net: &Network, f: &[f64], x: usize) -> Result<f64> {
    let pairing = energy_inner(net, &net.delta(x), f);
    let laplacian: f64 = net
        .neighbors(x)
        .iter()
        .map(|&(y, k)| net.edges()[k].c * (f[x] - f[y]))
        .sum();
    let scale: f64 = net
        .neighbors(x)
        .iter()
        .map(|&(y, k)| (net.edges()[k].c * (f[x] - f[y])).abs())
        .sum();
    if (pairing - laplacian).abs() > DELTA_PAIRING_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Verification(format!(
            "<delta_{}, f>_E = {pairing} but (Delta f)({}) = {laplacian}",
            net.name(x),
            net.name(x)
        )));
    }
    Ok(pairing)
}

/// The dipoles `v_x = v_{x,o}` for `x ∈ V'` and their Gramian.
#[derive(Clone, Debug)]
pub struct DipoleSystem {
    base: usize,
    /// Canonical indices of `V'`.
    vprime: Vec<usize>,
    /// Position in `vprime` for every vertex.
    position: Vec<Option<usize>>,
    dipoles: Vec<PotentialFunction>,
    gramian: DMatrix<f64>,
}

impl DipoleSystem {
    pub fn new(net: &Network) -> Result<Self> {
        let solver = GroundedSolver::new(net)?;
        let n = net.vertex_count();
        let vprime: Vec<usize> = net.non_base().collect();
        let mut position = vec![None; n];
        for (i, &x) in vprime.iter().enumerate() {
            position[x] = Some(i);
        }
        let mut dipoles = Vec::with_capacity(vprime.len());
        for &x in &vprime {
            let mut rhs = vec![0.0; n];
            rhs[x] = 1.0;
            rhs[net.base()] = -1.0;
            dipoles.push(PotentialFunction {
                values: solver.solve(&rhs)?,
                grounded: true,
            });
        }
        let m = vprime.len();
        // ⟨v_x, v_y⟩_E = v_x(y) for grounded dipoles; symmetrise the rounding.
        let gramian = DMatrix::from_fn(m, m, |i, j| {
            0.5 * (dipoles[i].values[vprime[j]] + dipoles[j].values[vprime[i]])
        });
        Ok(DipoleSystem {
            base: net.base(),
            vprime,
            position,
            dipoles,
            gramian,
        })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Canonical vertex indices of `V'`, the row order of the Gramian.
    pub fn vprime(&self) -> &[usize] {
        &self.vprime
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.position[x]
    }

    pub fn gramian(&self) -> &DMatrix<f64> {
        &self.gramian
    }

    pub fn dipoles(&self) -> &[PotentialFunction] {
        &self.dipoles
    }

    /// `v_x`; the zero function for the base vertex.
    pub fn dipole(&self, x: usize) -> PotentialFunction {
        match self.position[x] {
            Some(i) => self.dipoles[i].clone(),
            None => PotentialFunction {
                values: vec![0.0; self.position.len()],
                grounded: true,
            },
        }
    }

    /// `v_xy = v_x - v_y` by superposition.
    pub fn dipole_between(&self, x: usize, y: usize) -> PotentialFunction {
        self.dipole(x).sub(&self.dipole(y))
    }

    /// Gramian extended by `v_o = 0`.
    pub fn kernel(&self, x: usize, y: usize) -> f64 {
        match (self.position[x], self.position[y]) {
            (Some(i), Some(j)) => self.gramian[(i, j)],
            _ => 0.0,
        }
    }

    /// `N_c(x, y) = ‖v_x - v_y‖²_E = G_xx + G_yy - 2 G_xy`, which is also the
    /// resistance distance between `x` and `y`.
    pub fn n_c(&self, x: usize, y: usize) -> f64 {
        if x == y {
            return 0.0;
        }
        (self.kernel(x, x) + self.kernel(y, y) - 2.0 * self.kernel(x, y)).max(0.0)
    }

    pub fn resistance(&self, x: usize, y: usize) -> f64 {
        self.n_c(x, y)
    }

    /// `Σ_x ξ_x v_x` over `V'` coefficients (in `vprime` order).
    pub fn combine(&self, xi: &[f64]) -> PotentialFunction {
        let n = self.position.len();
        let mut values = vec![0.0; n];
        for (coef, v) in xi.iter().zip(&self.dipoles) {
            if *coef != 0.0 {
                for (out, val) in values.iter_mut().zip(&v.values) {
                    *out += coef * val;
                }
            }
        }
        PotentialFunction {
            values,
            grounded: true,
        }
    }
}

/// `δ_x = c(x) v_x - Σ_{y~x} c_xy v_y` (with `v_o = 0`), for `x ∈ V'`.
pub fn delta_expansion(net: &Network, sys: &DipoleSystem, x: usize) -> Result<PotentialFunction> {
    if x == net.base() {
        return Err(Error::InvalidParameter(format!(
            "expansion through v_x needs x != base, got `{}`",
            net.name(x)
        )));
    }
    let mut out = sys.dipole(x).scaled(net.total_conductance(x)).into_values();
    for &(y, k) in net.neighbors(x) {
        let c = net.edges()[k].c;
        for (o, v) in out.iter_mut().zip(sys.dipole(y).values()) {
            *o -= c * v;
        }
    }
    Ok(PotentialFunction::grounded(net, out))
}

/// `Σ_{y~x} c_xy v_xy = δ_x` modulo constants, valid for every `x` including the base.
pub fn delta_from_pair_dipoles(net: &Network, sys: &DipoleSystem, x: usize) -> PotentialFunction {
    let mut out = vec![0.0; net.vertex_count()];
    for &(y, k) in net.neighbors(x) {
        let c = net.edges()[k].c;
        for (o, v) in out.iter_mut().zip(sys.dipole_between(x, y).values()) {
            *o += c * v;
        }
    }
    PotentialFunction::grounded(net, out)
}

/// Outcome of probing conditional negative definiteness of `N_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativeDefiniteReport {
    pub trials: usize,
    /// Largest positive value of `ΣΣ ξ_x ξ_y N_c(x,y)` seen (0 if none).
    pub max_violation: f64,
    /// Largest relative gap between `ΣΣ ξ_x ξ_y N_c(x,y)` and `-2‖Σ ξ_x v_x‖²_E`.
    pub max_identity_defect: f64,
}

/// `ΣΣ ξ_x ξ_y N_c(x,y)` over all of `V` (with `v_o = 0`).
pub fn n_c_quadratic_form(sys: &DipoleSystem, xi: &[f64]) -> f64 {
    let n = xi.len();
    let mut total = 0.0;
    for x in 0..n {
        if xi[x] == 0.0 {
            continue;
        }
        for y in 0..n {
            total += xi[x] * xi[y] * sys.n_c(x, y);
        }
    }
    total
}

/// Random mean-zero `ξ` on `V`: checks `ΣΣ ξ_x ξ_y N_c(x,y) = -2‖Σ ξ_x v_x‖²_E ≤ 0`.
pub fn negative_definite_check<R: Rng + ?Sized>(
    net: &Network,
    sys: &DipoleSystem,
    trials: usize,
    rng: &mut R,
) -> Result<NegativeDefiniteReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = net.vertex_count();
    let mut report = NegativeDefiniteReport {
        trials,
        max_violation: 0.0,
        max_identity_defect: 0.0,
    };
    for _ in 0..trials {
        let mut xi: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean = xi.iter().sum::<f64>() / n as f64;
        xi.iter_mut().for_each(|v| *v -= mean);

        let lhs = n_c_quadratic_form(sys, &xi);
        let combo: Vec<f64> = sys.vprime().iter().map(|&x| xi[x]).collect();
        let rhs = -2.0 * energy_norm_sq(net, &sys.combine(&combo));
        report.max_violation = report.max_violation.max(lhs);
        let defect = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        report.max_identity_defect = report.max_identity_defect.max(defect);
    }
    Ok(report)
}

/// Grounded representative `u` orthogonal to every `δ_x`: solves
/// `⟨δ_x, u⟩_E = 0 ∀x` through the grounded Laplacian, so on a connected
/// network the only solution is `u = 0`.
pub fn harmonic_orthocomplement(net: &Network) -> Result<Vec<f64>> {
    let solver = GroundedSolver::new(net)?;
    solver.solve(&vec![0.0; net.vertex_count()])
}

/// Grounded `Δu` for a grounded `u`; convenience for the reproducing checks.
pub fn grounded_laplacian(net: &Network, u: &[f64]) -> PotentialFunction {
    PotentialFunction::grounded(net, laplacian_apply(net, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_triangle(base: usize) -> Network {
        Network::from_indexed(3, base, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn path(a: &[f64]) -> Network {
        let edges: Vec<_> = a.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
        Network::from_indexed(a.len() + 1, 0, &edges).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn energy_examples() {
        let net = path(&[1.0, 2.0, 4.0]);
        assert_eq!(energy_norm_sq(&net, &[5.0; 4]), 0.0);
        assert_eq!(energy_norm_sq(&net, &[0.0, 0.0, 1.0, 1.0]), 2.0);
        let tri = unit_triangle(2);
        assert_eq!(energy_norm_sq(&tri, &tri.delta(0)), 2.0);
    }

    #[test]
    fn triangle_dipole_closed_form() {
        let tri = unit_triangle(2);
        let v = dipole(&tri, 0, 1).unwrap();
        let expected = [1.0 / 3.0, -1.0 / 3.0, 0.0];
        // grounded at 2, so the representative already matches
        for (a, b) in v.iter().zip(expected) {
            assert!(close(*a, b, 1e-12));
        }
        assert!(matches!(dipole(&tri, 1, 1), Err(Error::SameEndpoints(_))));
    }

    #[test]
    fn dipole_system_examples() {
        let tri = unit_triangle(2);
        let sys = DipoleSystem::new(&tri).unwrap();
        let g = sys.gramian();
        assert!(close(g[(0, 0)], 2.0 / 3.0, 1e-14));
        assert!(close(g[(0, 1)], 1.0 / 3.0, 1e-14));
        assert!(close(g[(1, 1)], 2.0 / 3.0, 1e-14));
        assert!(close(sys.resistance(0, 1), 2.0 / 3.0, 1e-14));

        let net = path(&[1.0, 1.0]);
        let sys = DipoleSystem::new(&net).unwrap();
        let g = sys.gramian();
        assert!(close(g[(0, 0)], 1.0, 1e-14));
        assert!(close(g[(0, 1)], 1.0, 1e-14));
        assert!(close(g[(1, 1)], 2.0, 1e-14));
    }

    #[test]
    fn resistance_examples() {
        let net = path(&[1.0, 2.0, 4.0]);
        assert!(close(resistance_distance(&net, 0, 3).unwrap(), 1.75, 1e-12));
        assert_eq!(resistance_distance(&net, 2, 2).unwrap(), 0.0);
        let tri = unit_triangle(0);
        assert!(close(
            resistance_distance(&tri, 0, 1).unwrap(),
            2.0 / 3.0,
            1e-12
        ));
    }

    #[test]
    fn delta_identities() {
        let tri = unit_triangle(2);
        assert_eq!(delta_inner(&tri, 0, 0), 2.0);
        assert_eq!(delta_inner(&tri, 0, 1), -1.0);
        let p = path(&[1.0, 1.0]);
        assert_eq!(delta_inner(&p, 0, 2), 0.0);
        for x in 0..3 {
            for y in 0..3 {
                let direct = energy_inner(&tri, &tri.delta(x), &tri.delta(y));
                assert!(close(delta_inner(&tri, x, y), direct, 1e-12));
            }
        }

        let sys = DipoleSystem::new(&tri).unwrap();
        for x in 0..3 {
            for &y in sys.vprime() {
                let want = (x == y) as i32 as f64 - (x == 2) as i32 as f64;
                let got = delta_pairing(&tri, &sys.dipole(y), x).unwrap();
                assert!(close(got, want, 1e-12), "x={x} y={y}: {got}");
            }
        }
        // harmonic (constant) f
        assert_eq!(delta_pairing(&tri, &[3.0; 3], 1).unwrap(), 0.0);
        let f = [0.3, -1.7, 2.2];
        let lap = laplacian_apply(&tri, &f);
        for (x, &l) in lap.iter().enumerate() {
            assert!(close(delta_pairing(&tri, &f, x).unwrap(), l, 1e-12));
        }
    }

    #[test]
    fn delta_expansions() {
        let tri = unit_triangle(2);
        let sys = DipoleSystem::new(&tri).unwrap();
        let e = delta_expansion(&tri, &sys, 0).unwrap();
        assert!(energy_distance(&tri, &e, &tri.delta(0)) <= 1e-9);
        assert!(delta_expansion(&tri, &sys, 2).is_err());
        for x in 0..3 {
            let e = delta_from_pair_dipoles(&tri, &sys, x);
            assert!(energy_distance(&tri, &e, &tri.delta(x)) <= 1e-9);
        }

        let net = path(&[1.0; 6]);
        let sys = DipoleSystem::new(&net).unwrap();
        for x in 0..7 {
            let e = delta_from_pair_dipoles(&net, &sys, x);
            assert!(energy_distance(&net, &e, &net.delta(x)) <= 1e-9);
        }
    }

    #[test]
    fn negative_definite_two_point() {
        let tri = unit_triangle(2);
        let sys = DipoleSystem::new(&tri).unwrap();
        let mut xi = vec![0.0; 3];
        xi[0] = 1.0;
        xi[1] = -1.0;
        let lhs = n_c_quadratic_form(&sys, &xi);
        let rhs = -2.0 * energy_norm_sq(&tri, &sys.dipole_between(0, 1));
        assert!(close(lhs, rhs, 1e-14));
        assert_eq!(n_c_quadratic_form(&sys, &[0.0; 3]), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let report = negative_definite_check(&tri, &sys, 100, &mut rng).unwrap();
        assert!(report.max_violation <= 1e-9);
        assert!(report.max_identity_defect <= 1e-9);
        assert!(negative_definite_check(&tri, &sys, 0, &mut rng).is_err());
    }

    #[test]
    fn only_zero_is_orthogonal_to_deltas() {
        let tri = unit_triangle(1);
        assert_eq!(harmonic_orthocomplement(&tri).unwrap(), vec![0.0; 3]);
    }
}
