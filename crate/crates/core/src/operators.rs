//! Finite-matrix forms of the operators `K`, `K*`, `L`, `L*` and `P`.
//!
//! Coordinates: an `H_E` vector `u = Σ_{x∈V'} α_x v_x` is stored by its
//! dipole coordinates `α`, so `⟨u, w⟩_E = αᵀ G β` with `G` the dipole
//! Gramian. Sequences `ξ` live on `V'` with the plain `ℓ²` inner product.
//! The operators' dense domain is the mean-zero span, with
//! basis `{e_x - e_x̄}` for a fixed reference `x̄ ∈ V'`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::energy::{energy_distance, energy_inner, energy_norm_sq, DipoleSystem};
use crate::error::{Error, Result};
use crate::models::{classify, Classification};
use crate::network::{canonical_laplacian, laplacian_apply, walk_data, Network};

/// Defect bound of the `LL* = Δ` verification.
pub const FACTORIZATION_TOL: f64 = 1e-10;

/// An operator with its adjoint, both as matrices in the coordinates above.
#[derive(Clone, Debug)]
pub struct OperatorPair {
    /// `ℓ²(V')` coefficients to dipole coordinates.
    pub forward: DMatrix<f64>,
    /// Dipole coordinates to `ℓ²(V')` coefficients.
    pub adjoint: DMatrix<f64>,
    pub domain_note: &'static str,
}

impl OperatorPair {
    /// Largest relative gap in `⟨T*u, η⟩_ℓ² = ⟨u, Tη⟩_E` over random mean-zero
    /// `η` and random mean-zero `u = Σ ξ_x v_x`.
    pub fn adjointness_defect<R: Rng + ?Sized>(
        &self,
        gram: &DMatrix<f64>,
        trials: usize,
        rng: &mut R,
    ) -> f64 {
        let m = gram.nrows();
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let eta = random_mean_zero(m, rng);
            let u = random_mean_zero(m, rng);
            let au = &self.adjoint * &u;
            let gfe = gram * (&self.forward * &eta);
            let lhs = au.dot(&eta);
            let rhs = u.dot(&gfe);
            // Cauchy-Schwarz scale, immune to cancellation in the pairing itself.
            let scale = (au.norm() * eta.norm())
                .max(u.norm() * gfe.norm())
                .max(f64::MIN_POSITIVE);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        worst
    }
}

/// Random vector on `m` coordinates with entries summing to zero.
pub fn random_mean_zero<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DVector<f64> {
    let mut v = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    if m > 0 {
        let mean = v.sum() / m as f64;
        v.add_scalar_mut(-mean);
    }
    v
}

/// Columns `e_x - e_x̄` for `x ≠ x̄`, with `x̄` the first element of `V'`.
pub fn mean_zero_basis(m: usize) -> DMatrix<f64> {
    let cols = m.saturating_sub(1);
    DMatrix::from_fn(m, cols, |i, j| {
        if i == 0 {
            -1.0
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Grounded Laplacian on `V'`; equals `G⁻¹`.
pub fn grounded_laplacian_matrix(net: &Network, sys: &DipoleSystem) -> DMatrix<f64> {
    let full = canonical_laplacian(net);
    let vp = sys.vprime();
    DMatrix::from_fn(vp.len(), vp.len(), |i, j| full[(vp[i], vp[j])])
}

/// `K(ξ) = Σ ξ_x v_x`: the identity in dipole coordinates; `K*` is the Gramian,
/// `(K*u)_x = Σ_y ⟨v_x, v_y⟩ ξ_y`.
pub fn build_k(sys: &DipoleSystem) -> OperatorPair {
    let m = sys.vprime().len();
    OperatorPair {
        forward: DMatrix::identity(m, m),
        adjoint: sys.gramian().clone(),
        domain_note: "mean-zero finitely supported sequences on V'",
    }
}

/// `L(ξ) = Σ ξ_x δ_x` with each `δ_x = c(x)v_x - Σ_{y~x} c_xy v_y` expanded in
/// dipoles (columns of the grounded Laplacian); `L*(Σ ξ_x v_x) = ξ`.
pub fn build_l(net: &Network, sys: &DipoleSystem) -> OperatorPair {
    let m = sys.vprime().len();
    OperatorPair {
        forward: grounded_laplacian_matrix(net, sys),
        adjoint: DMatrix::identity(m, m),
        domain_note: "mean-zero finitely supported sequences on V'",
    }
}

/// `LL*` checked against `Δ` on the mean-zero dipole span.
#[derive(Clone, Debug)]
pub struct FriedrichsFactorization {
    /// `L L*` in dipole coordinates.
    pub ll_star: DMatrix<f64>,
    /// `⟨b_i, Δ b_j⟩_E` over the dipole-difference basis `b_i = v_{x_i} - v_x̄`.
    pub form: DMatrix<f64>,
    /// `⟨b_i, b_j⟩_E`.
    pub basis_gram: DMatrix<f64>,
    /// Largest relative energy-norm gap between `LL*u` and `Δu` over the basis.
    pub max_defect: f64,
    /// Vertex `x_i` of the basis element with the largest defect.
    pub worst_vertex: Option<usize>,
    /// Spectrum of `Δ` on `H_E` computed in the dipole geometry, ascending.
    pub spectrum: Vec<f64>,
}

pub fn friedrichs_matrix(net: &Network, sys: &DipoleSystem) -> Result<FriedrichsFactorization> {
    let m = sys.vprime().len();
    let l = build_l(net, sys);
    let ll_star = &l.forward * &l.adjoint;
    let lg = grounded_laplacian_matrix(net, sys);
    let basis = mean_zero_basis(m);

    let mut max_defect: f64 = 0.0;
    let mut worst_vertex = None;
    for j in 0..basis.ncols() {
        let alpha = basis.column(j).into_owned();
        // route 1: the matrix LL* in dipole coordinates, mapped back to values
        let via_factor = sys.combine((&ll_star * &alpha).as_slice());
        // route 2: pointwise Laplacian of the function itself
        let via_laplacian = laplacian_apply(net, &sys.combine(alpha.as_slice()));
        let gap = energy_distance(net, &via_factor, &via_laplacian);
        let size = energy_norm_sq(net, &via_laplacian)
            .sqrt()
            .max(f64::MIN_POSITIVE);
        let rel = gap / size;
        if rel > max_defect || worst_vertex.is_none() {
            max_defect = max_defect.max(rel);
            worst_vertex = Some(sys.vprime()[j + 1]);
        }
    }
    if max_defect > FACTORIZATION_TOL {
        let at = worst_vertex.map_or("-", |x| net.name(x));
        return Err(Error::Verification(format!(
            "LL* differs from the Laplacian by {max_defect:e} (relative) at basis element v_{at} - v_ref"
        )));
    }

    let gram = sys.gramian();
    let form = basis.transpose() * gram * &ll_star * &basis;
    let basis_gram = basis.transpose() * gram * &basis;
    let spectrum = laplacian_spectrum_dipole(&lg)?;
    Ok(FriedrichsFactorization {
        ll_star,
        form,
        basis_gram,
        max_defect,
        worst_vertex,
        spectrum,
    })
}

/// Spectrum of `Δ` on `H_E`. In dipole coordinates `Δ` acts as
/// `L_g (I + 11ᵀ)`, which is similar to `Rᵀ(I + 11ᵀ)R` for `L_g = RRᵀ`.
pub fn laplacian_spectrum_dipole(lg: &DMatrix<f64>) -> Result<Vec<f64>> {
    let m = lg.nrows();
    if m == 0 {
        return Ok(Vec::new());
    }
    let chol = Cholesky::new(lg.clone()).ok_or(Error::Singular)?;
    let r = chol.l();
    let ones = DMatrix::from_element(m, m, 1.0);
    let form = DMatrix::identity(m, m) + ones;
    let sym = r.transpose() * form * &r;
    let sym = (&sym + sym.transpose()) * 0.5;
    let mut eig: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// `⟨φ, Δφ⟩_E` against `Σ ξ_x²` for `φ = Σ ξ_x v_x`; returns the relative error.
pub fn quadratic_form_defect(net: &Network, sys: &DipoleSystem, xi: &[f64]) -> f64 {
    let phi = sys.combine(xi);
    let lphi = laplacian_apply(net, &phi);
    let lhs = energy_inner(net, &phi, &lphi);
    let rhs: f64 = xi.iter().map(|v| v * v).sum();
    (lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE)
}

/// `max_{x,z∈V'} |(Δ_y ⟨v_x, v_y⟩)(z) - δ_xz|`, with `y ↦ ⟨v_x, v_y⟩` extended by 0 at `o`.
pub fn greens_gauss_check(net: &Network, sys: &DipoleSystem) -> f64 {
    let n = net.vertex_count();
    let mut worst: f64 = 0.0;
    for &x in sys.vprime() {
        let column: Vec<f64> = (0..n).map(|y| sys.kernel(x, y)).collect();
        let lap = laplacian_apply(net, &column);
        for &z in sys.vprime() {
            let want = if x == z { 1.0 } else { 0.0 };
            worst = worst.max((lap[z] - want).abs());
        }
    }
    worst
}

/// Eigenvalues of a symmetric operator with the geometry they were taken in.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub geometry: &'static str,
}

impl SpectralReport {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, l| a.max(l.abs()))
    }

    /// Difference of the two smallest eigenvalues.
    pub fn gap(&self) -> Option<f64> {
        (self.eigenvalues.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }
}

/// The transition operator and its checks against the Laplacian.
#[derive(Clone, Debug)]
pub struct TransitionReport {
    pub p: DMatrix<f64>,
    /// Spectrum in `ℓ²(c̃)`, from the symmetrization `D^{1/2} P D^{-1/2}`.
    pub spectrum: SpectralReport,
    /// `max |Δ - diag(c̃)(I - P)|` entrywise.
    pub factorization_defect: f64,
    /// `max |S - Sᵀ|` for `S = D^{1/2} P D^{-1/2}`.
    pub asymmetry: f64,
    /// `max_x |(P1)(x) - 1|`.
    pub stochastic_defect: f64,
    /// Operator norm of `P` acting on `H_E`; reported, never asserted.
    pub energy_norm: f64,
}

pub fn transition_operator(net: &Network) -> Result<TransitionReport> {
    let n = net.vertex_count();
    let walk = walk_data(net);
    let p = walk.matrix();
    let ct = &walk.total_conductance;
    let lap = canonical_laplacian(net);

    let mut factorization_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            let rebuilt = ct[i] * (id - p[(i, j)]);
            factorization_defect = factorization_defect.max((lap[(i, j)] - rebuilt).abs());
        }
    }
    let stochastic_defect = (0..n)
        .map(|i| (p.row(i).sum() - 1.0).abs())
        .fold(0.0, f64::max);

    let s = DMatrix::from_fn(n, n, |i, j| ct[i].sqrt() * p[(i, j)] / ct[j].sqrt());
    let asymmetry = (&s - s.transpose()).amax();
    let sym = (&s + s.transpose()) * 0.5;
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);

    let energy_norm = energy_operator_norm(net, &p)?;
    Ok(TransitionReport {
        p,
        spectrum: SpectralReport {
            eigenvalues,
            geometry: "l2(c~)",
        },
        factorization_defect,
        asymmetry,
        stochastic_defect,
        energy_norm,
    })
}

/// `sup ‖Pu‖_E / ‖u‖_E` over grounded `u`.
fn energy_operator_norm(net: &Network, p: &DMatrix<f64>) -> Result<f64> {
    let base = net.base();
    let vp: Vec<usize> = net.non_base().collect();
    let m = vp.len();
    let lap = canonical_laplacian(net);
    let lg = DMatrix::from_fn(m, m, |i, j| lap[(vp[i], vp[j])]);
    // grounded P: u on V' (u(o) = 0) -> (Pu)(x) - (Pu)(o) on V'
    let a = DMatrix::from_fn(m, m, |i, j| p[(vp[i], vp[j])] - p[(base, vp[j])]);
    let chol = Cholesky::new(lg.clone()).ok_or(Error::Singular)?;
    let r = chol.l();
    let r_inv_t = r.transpose().try_inverse().ok_or(Error::Singular)?;
    let b = &a * &r_inv_t;
    let mat = b.transpose() * &lg * &b;
    let mat = (&mat + mat.transpose()) * 0.5;
    let top = SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l));
    Ok(top.sqrt())
}

/// `Δu = 0 ⇔ Pu = u` decided numerically for a function `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicVerdict {
    pub harmonic: bool,
    pub fixed_point: bool,
}

pub fn harmonic_verdict(net: &Network, u: &[f64], tol: f64) -> HarmonicVerdict {
    let scale = u.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let lap = laplacian_apply(net, u);
    let pu = walk_data(net).apply(u);
    let max_c = (0..net.vertex_count())
        .map(|x| net.total_conductance(x))
        .fold(0.0, f64::max);
    HarmonicVerdict {
        harmonic: lap.iter().all(|v| v.abs() <= tol * scale * max_c),
        fixed_point: pu.iter().zip(u).all(|(a, b)| (a - b).abs() <= tol * scale),
    }
}

/// Kernel dimensions of `Δ` and of `I - P` (symmetrized), counted with
/// eigenvalue threshold `tol` relative to the largest.
pub fn harmonic_kernel_dimensions(net: &Network, tol: f64) -> (usize, usize) {
    let n = net.vertex_count();
    let lap = canonical_laplacian(net);
    let lap_eig = SymmetricEigen::new(lap).eigenvalues;
    let lap_scale = lap_eig.amax();
    let walk = walk_data(net);
    let ct = &walk.total_conductance;
    let p = walk.matrix();
    let i_minus_s = DMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 0.5
            * (ct[i].sqrt() * p[(i, j)] / ct[j].sqrt() + ct[j].sqrt() * p[(j, i)] / ct[i].sqrt())
    });
    let walk_eig = SymmetricEigen::new(i_minus_s).eigenvalues;
    let walk_scale = walk_eig.amax();
    (
        lap_eig
            .iter()
            .filter(|l| l.abs() <= tol * lap_scale)
            .count(),
        walk_eig
            .iter()
            .filter(|l| l.abs() <= tol * walk_scale)
            .count(),
    )
}

/// Comparison of `P v_x` with `Σ_{y~x} p_xy v_y`.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleTransitionReport {
    /// `max_x ‖P v_x - Σ_y p_xy v_y‖_E` (energy norm, i.e. modulo constants).
    pub max_defect: f64,
    /// The same residual after removing `δ_o / c̃(o)`, which is exactly the
    /// pointwise difference on a finite network.
    pub max_defect_after_base_term: f64,
    /// `max |Σ_y Σ_x ξ_x p_xy|` over the random mean-zero `ξ`.
    pub mean_zero_defect: f64,
}

pub fn p_on_dipoles_check<R: Rng + ?Sized>(
    net: &Network,
    sys: &DipoleSystem,
    trials: usize,
    rng: &mut R,
) -> DipoleTransitionReport {
    let walk = walk_data(net);
    let base = net.base();
    let c_base = walk.total_conductance[base];
    let mut max_defect: f64 = 0.0;
    let mut max_after: f64 = 0.0;
    for &x in sys.vprime() {
        let lhs = walk.apply(&sys.dipole(x));
        let mut rhs = vec![0.0; net.vertex_count()];
        for &(y, p) in &walk.transition[x] {
            for (r, v) in rhs.iter_mut().zip(sys.dipole(y).values()) {
                *r += p * v;
            }
        }
        max_defect = max_defect.max(energy_distance(net, &lhs, &rhs));
        rhs[base] += 1.0 / c_base;
        max_after = max_after.max(energy_distance(net, &lhs, &rhs));
    }

    let p = walk.matrix();
    let n = net.vertex_count();
    let mut mean_zero_defect: f64 = 0.0;
    for _ in 0..trials {
        let xi = random_mean_zero(n, rng);
        let pushed = p.transpose() * &xi;
        mean_zero_defect = mean_zero_defect.max(pushed.sum().abs());
    }
    DipoleTransitionReport {
        max_defect,
        max_defect_after_base_term: max_after,
        mean_zero_defect,
    }
}

/// Fewest interior vertices accepted by [`deficiency_probe`].
pub const MIN_INTERIOR: usize = 8;

/// Solution of `(Δ + I)u = 0` on an interior vertex set of a truncation.
#[derive(Clone, Debug)]
pub struct DeficiencyProbe {
    /// Normalized to `u(root) = 1`.
    pub u: Vec<f64>,
    /// `max |(1 + 1/c(x))u(x) - (Pu)(x)|` over the interior, relative to `max |u|`.
    pub interior_residual: f64,
    /// `E_k`: energy of the edges reaching hop level `k` from level `k - 1`
    /// (and within level `k`), for `k ≥ 1`.
    pub level_energy: Vec<f64>,
    /// Running sums of `level_energy`.
    pub partial_sums: Vec<f64>,
    pub classification: Classification,
}

impl DeficiencyProbe {
    pub fn energy(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Solves `(Δ + I)u = 0` at every vertex flagged `interior`, with `u = 1` on
/// the remaining vertices, then rescales so that `u(root) = 1`. The root is the
/// base vertex and must be interior. Energy is accumulated by hop level from
/// the root and classified on the doubling schedule `L/8, L/4, L/2, L`.
pub fn deficiency_probe(net: &Network, interior: &[bool]) -> Result<DeficiencyProbe> {
    let n = net.vertex_count();
    if interior.len() != n {
        return Err(Error::InvalidParameter(format!(
            "interior mask has {} entries for {n} vertices",
            interior.len()
        )));
    }
    let idx: Vec<usize> = (0..n).filter(|&x| interior[x]).collect();
    if idx.len() < MIN_INTERIOR {
        return Err(Error::InvalidParameter(format!(
            "truncation too small: {} interior vertices, need at least {MIN_INTERIOR}",
            idx.len()
        )));
    }
    let root = net.base();
    if !interior[root] {
        return Err(Error::InvalidParameter(
            "the base vertex must be interior".into(),
        ));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in idx.iter().enumerate() {
        pos[x] = i;
    }
    let m = idx.len();
    let mut a = DMatrix::zeros(m, m);
    let mut b = DVector::zeros(m);
    for (i, &x) in idx.iter().enumerate() {
        a[(i, i)] = net.total_conductance(x) + 1.0;
        for &(y, k) in net.neighbors(x) {
            let c = net.edges()[k].c;
            if interior[y] {
                a[(i, pos[y])] -= c;
            } else {
                b[i] += c;
            }
        }
    }
    let sol = Cholesky::new(a).ok_or(Error::Singular)?.solve(&b);
    let mut u = vec![1.0; n];
    for (i, &x) in idx.iter().enumerate() {
        u[x] = sol[i];
    }
    let scale = u[root];
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Singular);
    }
    u.iter_mut().for_each(|v| *v /= scale);

    let walk = walk_data(net);
    let pu = walk.apply(&u);
    let umax = u.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let interior_residual = idx
        .iter()
        .map(|&x| ((1.0 + 1.0 / walk.total_conductance[x]) * u[x] - pu[x]).abs())
        .fold(0.0, f64::max)
        / umax;

    let level = net.hop_distances();
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut level_energy = vec![0.0; depth];
    for e in net.edges() {
        let k = level[e.a].max(level[e.b]);
        let d = u[e.a] - u[e.b];
        level_energy[k - 1] += e.c * d * d;
    }
    let partial_sums: Vec<f64> = level_energy
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    let checkpoints: Vec<f64> = [depth / 8, depth / 4, depth / 2, depth]
        .iter()
        .filter(|&&k| k >= 1)
        .map(|&k| partial_sums[k - 1])
        .collect();
    Ok(DeficiencyProbe {
        u,
        interior_residual,
        level_energy,
        partial_sums,
        classification: classify(&checkpoints),
    })
}

/// Greedy argmax path of the growth lemma and its product bound.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthPath {
    /// `x_0 = p, x_1, …`; ends at the first vertex outside the interior or
    /// when the bound would need an unvisited neighbour that does not exist.
    pub path: Vec<usize>,
    /// `Π_{i≤k}(1 + 1/c(x_i)) u(p)` for each step `k`.
    pub bounds: Vec<f64>,
    /// `min_k u(x_{k+1}) - bound_k`; nonnegative when the lemma holds.
    pub min_slack: f64,
}

/// Starting at `p` with `u(p) > 0`, repeatedly moves to the neighbour with the
/// largest value while the current vertex is interior, checking
/// `u(x_{k+1}) ≥ Π_{i≤k}(1 + 1/c(x_i)) u(p)`.
pub fn growth_path(net: &Network, u: &[f64], interior: &[bool], p: usize) -> Result<GrowthPath> {
    if u[p] <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "growth path needs u(p) > 0 at `{}`",
            net.name(p)
        )));
    }
    let mut path = vec![p];
    let mut bounds = Vec::new();
    let mut product = u[p];
    let mut min_slack = f64::INFINITY;
    let mut x = p;
    let mut visited = vec![false; net.vertex_count()];
    visited[p] = true;
    while interior[x] {
        product *= 1.0 + 1.0 / net.total_conductance(x);
        let next = net
            .neighbors(x)
            .iter()
            .map(|&(y, _)| y)
            .max_by(|&a, &b| u[a].total_cmp(&u[b]).then(b.cmp(&a)))
            .expect("connected network");
        min_slack = min_slack.min(u[next] - product);
        bounds.push(product);
        path.push(next);
        if visited[next] {
            break;
        }
        visited[next] = true;
        x = next;
    }
    Ok(GrowthPath {
        path,
        bounds,
        min_slack,
    })
}
