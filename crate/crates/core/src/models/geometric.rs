use crate::error::{Error, Result};
use crate::models::{
    classify, doubling_schedule, sample_partial_sums, Classification, PathModel, CLASSIFIER_N0,
};
use crate::network::{walk_data, Network};

/// Terms iterated when classifying recurrence energies, independent of the
/// displayed truncation.
pub const RECURRENCE_HORIZON: usize = 640;

/// Fewest rows a recurrence report accepts.
const MIN_TRUNCATION: usize = 20;

/// Path with `a_n = Qⁿ`, truncated at vertex `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricModel {
    q: f64,
    n: usize,
}

impl GeometricModel {
    pub fn new(q: f64, truncation: usize) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Q must be positive, got {q}"
            )));
        }
        if truncation == 0 {
            return Err(Error::InvalidParameter(
                "truncation must be at least 1".into(),
            ));
        }
        Ok(GeometricModel { q, n: truncation })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// `a_n = Qⁿ`.
    pub fn conductance(&self, n: usize) -> f64 {
        self.q.powi(n as i32)
    }

    /// `c(n) = Qⁿ + Qⁿ⁺¹` for `n ≥ 1`; the end vertex 0 only has `Q`.
    pub fn total_conductance(&self, n: usize) -> f64 {
        if n == 0 {
            self.q
        } else {
            self.conductance(n) + self.conductance(n + 1)
        }
    }

    /// Probability of stepping outward, `Q/(1+Q)`.
    pub fn p_plus(&self) -> f64 {
        self.q / (1.0 + self.q)
    }

    pub fn p_minus(&self) -> f64 {
        1.0 / (1.0 + self.q)
    }

    pub fn path_model(&self) -> PathModel {
        PathModel::from_fn(self.n, |k| self.conductance(k)).expect("positive conductances")
    }

    pub fn network(&self) -> Network {
        self.path_model().network()
    }
}

/// Forward solution of `Δf = λf` on the half line from `f(0) = 1` and the
/// vertex-0 equation, carried as `(f(n), e_n)` with `e_n = a_n(f(n) - f(n-1))`.
/// The recursion `e_{n+1} = e_n - λ f(n)` avoids differencing nearly equal values.
fn iterate(a: impl Fn(usize) -> f64, lambda: f64, terms: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(terms + 1);
    let (mut f, mut e) = (1.0, 0.0);
    out.push((f, e));
    for n in 1..=terms {
        e -= lambda * f;
        f += e / a(n);
        out.push((f, e));
    }
    out
}

/// One row of a recurrence report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecurrenceRow {
    pub n: usize,
    pub value: f64,
    /// `(f(n+1) - f(n)) / (f(n) - f(n-1))`; undefined at `n = 0`.
    pub diff_ratio: Option<f64>,
    /// `Σ_{k≤n} a_k (f(k) - f(k-1))²`.
    pub energy_partial: f64,
}

fn rows(a: &impl Fn(usize) -> f64, seq: &[(f64, f64)], upto: usize) -> Vec<RecurrenceRow> {
    let mut energy = 0.0;
    (0..=upto)
        .map(|n| {
            let (f, e) = seq[n];
            if n > 0 {
                energy += e * e / a(n);
            }
            let diff_ratio = (n > 0).then(|| {
                let (_, e_next) = seq[n + 1];
                (e_next / a(n + 1)) / (e / a(n))
            });
            RecurrenceRow {
                n,
                value: f,
                diff_ratio,
                energy_partial: energy,
            }
        })
        .collect()
}

fn horizon_classification(
    a: &impl Fn(usize) -> f64,
    seq: &[(f64, f64)],
) -> (Vec<(usize, f64)>, Classification) {
    let terms: Vec<f64> = seq[1..]
        .iter()
        .enumerate()
        .map(|(i, &(_, e))| e * e / a(i + 1))
        .collect();
    let schedule = doubling_schedule(CLASSIFIER_N0, terms.len());
    let checkpoints = sample_partial_sums(&terms, &schedule);
    let sums: Vec<f64> = checkpoints.iter().map(|c| c.1).collect();
    let class = classify(&sums);
    (checkpoints, class)
}

/// Roots of `t² - αt + β` for the two-step recurrence at step `n`:
/// `f(n+1) = α f(n) - β f(n-1)` with `α = (a_n + a_{n+1} - λ)/a_{n+1}`, `β = a_n/a_{n+1}`.
fn transfer_eigenvalues(a: &impl Fn(usize) -> f64, lambda: f64, n: usize) -> (f64, f64) {
    let (an, an1) = (a(n), a(n + 1));
    let alpha = (an + an1 - lambda) / an1;
    let beta = an / an1;
    let disc = (alpha * alpha - 4.0 * beta).max(0.0).sqrt();
    let big = 0.5 * (alpha + alpha.signum() * disc);
    (big, beta / big)
}

/// Defect vector `(Δ + I)u = 0` of the geometric path.
#[derive(Clone, Debug, PartialEq)]
pub struct DeficiencyReport {
    pub q: f64,
    /// Rows `n = 0..=N`.
    pub rows: Vec<RecurrenceRow>,
    /// Transfer-matrix eigenvalues at `n = N`, larger first.
    pub transfer_eigenvalues: (f64, f64),
    /// Energy partial sums on the classifier schedule up to [`RECURRENCE_HORIZON`].
    pub checkpoints: Vec<(usize, f64)>,
    pub classification: Classification,
}

impl DeficiencyReport {
    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// `|diff_ratio(n) - 1/Q|`.
    pub fn ratio_error(&self, n: usize) -> Option<f64> {
        self.rows
            .get(n)?
            .diff_ratio
            .map(|r| (r - 1.0 / self.q).abs())
    }
}

/// Solves `(Δu)(n) = -u(n)` forward from `u₀ = 1`, `u₁ = (1 + 1/a₁)u₀`.
pub fn deficiency_recurrence(model: &GeometricModel) -> Result<DeficiencyReport> {
    let n = model.truncation();
    if n < MIN_TRUNCATION {
        return Err(Error::InvalidParameter(format!(
            "truncation too small: N = {n}, need at least {MIN_TRUNCATION}"
        )));
    }
    let a = |k: usize| model.conductance(k);
    let seq = iterate(a, -1.0, RECURRENCE_HORIZON.max(n + 1));
    let (checkpoints, classification) =
        horizon_classification(&a, &seq[..=RECURRENCE_HORIZON.max(n)]);
    Ok(DeficiencyReport {
        q: model.q(),
        rows: rows(&a, &seq, n),
        transfer_eigenvalues: transfer_eigenvalues(&a, -1.0, n),
        checkpoints,
        classification,
    })
}

/// `u_n = Q⁻ⁿ` on the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicGeometric {
    pub u: Vec<f64>,
    /// `max |(Pu)(n) - u(n)|` over `0 < n < N`.
    pub interior_residual: f64,
    /// `Σ_{n≤N} Qⁿ(Q^{-(n-1)} - Q^{-n})²`.
    pub truncated_energy: f64,
    /// `Q - 1`.
    pub limit: f64,
}

pub fn harmonic_geometric(model: &GeometricModel) -> Result<HarmonicGeometric> {
    let q = model.q();
    if q <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Q^-n has infinite energy for Q <= 1, got Q = {q}"
        )));
    }
    let n = model.truncation();
    let u: Vec<f64> = (0..=n).map(|k| q.powi(-(k as i32))).collect();
    let walk = walk_data(&model.network());
    let pu = walk.apply(&u);
    let interior_residual = (1..n).map(|k| (pu[k] - u[k]).abs()).fold(0.0, f64::max);
    let truncated_energy = (1..=n)
        .map(|k| {
            let d = u[k - 1] - u[k];
            model.conductance(k) * d * d
        })
        .sum();
    Ok(HarmonicGeometric {
        u,
        interior_residual,
        truncated_energy,
        limit: q - 1.0,
    })
}

/// Partial sums of `Σ_x |f(x) - f(x+1)|² Q^{2x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainTest {
    pub checkpoints: Vec<(usize, f64)>,
    pub classification: Classification,
}

impl DomainTest {
    pub fn member(&self) -> bool {
        self.classification == Classification::Convergent
    }
}

/// Membership test with `diff(x) = f(x) - f(x+1)`, summed over `x < N` on the
/// classifier schedule up to the model truncation.
pub fn friedrichs_domain_test(
    model: &GeometricModel,
    diff: impl Fn(usize) -> f64,
) -> Result<DomainTest> {
    let n = model.truncation();
    if n < CLASSIFIER_N0 {
        return Err(Error::InvalidParameter(format!(
            "truncation must be at least {CLASSIFIER_N0}, got {n}"
        )));
    }
    let terms: Vec<f64> = (0..n)
        .map(|x| {
            let t = diff(x) * model.conductance(x);
            t * t
        })
        .collect();
    let schedule = doubling_schedule(CLASSIFIER_N0, n);
    let checkpoints = sample_partial_sums(&terms, &schedule);
    let sums: Vec<f64> = checkpoints.iter().map(|c| c.1).collect();
    Ok(DomainTest {
        classification: classify(&sums),
        checkpoints,
    })
}

/// [`friedrichs_domain_test`] for a function given by its values.
pub fn friedrichs_domain_test_values(
    model: &GeometricModel,
    f: impl Fn(usize) -> f64,
) -> Result<DomainTest> {
    friedrichs_domain_test(model, |x| f(x) - f(x + 1))
}

/// Forward solution of `Δf = λf` from the vertex-0 condition.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenfunctionReport {
    pub q: f64,
    pub lambda: f64,
    pub rows: Vec<RecurrenceRow>,
    /// `f(N) / f(N-1)`.
    pub tail_ratio: f64,
    /// `(f(N) - f(N-1)) / (f(N-1) - f(N-2))`; `None` when the differences vanish (`λ = 0`).
    pub tail_diff_ratio: Option<f64>,
    pub checkpoints: Vec<(usize, f64)>,
    pub classification: Classification,
}

pub fn eigenfunction_recurrence(
    model: &GeometricModel,
    lambda: f64,
) -> Result<EigenfunctionReport> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    let n = model.truncation();
    if n < MIN_TRUNCATION {
        return Err(Error::InvalidParameter(format!(
            "truncation too small: N = {n}, need at least {MIN_TRUNCATION}"
        )));
    }
    let a = |k: usize| model.conductance(k);
    let seq = iterate(a, lambda, RECURRENCE_HORIZON.max(n + 1));
    let (checkpoints, classification) =
        horizon_classification(&a, &seq[..=RECURRENCE_HORIZON.max(n)]);
    let rows = rows(&a, &seq, n);
    let tail_ratio = rows[n].value / rows[n - 1].value;
    let tail_diff_ratio = rows[n - 1].diff_ratio.filter(|r| r.is_finite());
    Ok(EigenfunctionReport {
        q: model.q(),
        lambda,
        rows,
        tail_ratio,
        tail_diff_ratio,
        checkpoints,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::resistance_distance;
    use crate::network::laplacian_apply;

    #[test]
    fn deficiency_satisfies_the_equation() {
        let m = GeometricModel::new(2.0, 40).unwrap();
        let r = deficiency_recurrence(&m).unwrap();
        assert_eq!(r.rows[0].value, 1.0);
        assert!((r.rows[1].value - 1.5).abs() < 1e-15);
        let u = r.values();
        let net = m.network();
        let lap = laplacian_apply(&net, &u);
        for k in 0..40 {
            // evaluating Δu differences values of size u against conductances of size c(k)
            let scale = net.total_conductance(k) * u[k] * f64::EPSILON;
            assert!((lap[k] + u[k]).abs() < 16.0 * scale + 1e-12, "vertex {k}");
        }
        assert_eq!(r.classification, Classification::Convergent);
        let (big, small) = r.transfer_eigenvalues;
        assert!((big - 1.0).abs() < 1e-6 && (small - 0.5).abs() < 1e-6);
    }

    #[test]
    fn difference_ratio_lags_one_over_q() {
        // (u_{n+1}-u_n)/(u_n-u_{n-1}) = (1/Q)(1 + O(1/n)) for this seed
        let r = deficiency_recurrence(&GeometricModel::new(2.0, 400).unwrap()).unwrap();
        let e40 = r.ratio_error(40).unwrap();
        let e400 = r.ratio_error(399).unwrap();
        assert!(e40 > 1e-3 && e40 < 0.05);
        assert!(e400 < e40 / 5.0);
    }

    #[test]
    fn unit_path_diverges() {
        let r = deficiency_recurrence(&GeometricModel::new(1.0, 40).unwrap()).unwrap();
        // u_{n+1} = 3u_n - u_{n-1}
        for k in 1..30 {
            let u = &r.rows;
            let want = 3.0 * u[k].value - u[k - 1].value;
            assert!((u[k + 1].value - want).abs() <= 1e-9 * want);
        }
        assert_eq!(r.classification, Classification::Divergent);
        assert!(deficiency_recurrence(&GeometricModel::new(2.0, 19).unwrap()).is_err());
    }

    #[test]
    fn harmonic_examples() {
        let h = harmonic_geometric(&GeometricModel::new(2.0, 30).unwrap()).unwrap();
        assert!((h.truncated_energy - 1.0).abs() < 1e-8);
        assert!((h.truncated_energy - (1.0 - 2f64.powi(-30))).abs() < 1e-14);
        assert!(h.interior_residual <= 1e-12);
        let h = harmonic_geometric(&GeometricModel::new(3.0, 30).unwrap()).unwrap();
        assert_eq!(h.limit, 2.0);
        assert!(harmonic_geometric(&GeometricModel::new(1.0, 30).unwrap()).is_err());
    }

    #[test]
    fn domain_examples() {
        let m = GeometricModel::new(2.0, 160).unwrap();
        let t = friedrichs_domain_test_values(&m, |x| 2f64.powi(-(x as i32))).unwrap();
        assert_eq!(t.classification, Classification::Divergent);
        assert!((t.checkpoints[0].1 - 2.5).abs() < 1e-12);
        let t = friedrichs_domain_test(&m, |x| 2f64.powf(-1.5 * x as f64)).unwrap();
        assert!(t.member());
        let t = friedrichs_domain_test_values(&m, |x| if x < 5 { x as f64 } else { 5.0 }).unwrap();
        assert!(t.member());
    }

    #[test]
    fn eigenfunction_behaviour() {
        let m = GeometricModel::new(2.0, 60).unwrap();
        let r = eigenfunction_recurrence(&m, 0.0).unwrap();
        assert!(r.rows.iter().all(|row| row.value == 1.0));
        for lambda in [0.5, 1.0, 2.0] {
            let r = eigenfunction_recurrence(&m, lambda).unwrap();
            assert_eq!(r.classification, Classification::Convergent);
            // f settles at a nonzero constant, so f(n+1)/f(n) -> 1
            assert!((r.tail_ratio - 1.0).abs() < 1e-12);
            let d = r.tail_diff_ratio.unwrap();
            assert!((d - 0.5).abs() < 0.02);
        }
        assert!(eigenfunction_recurrence(&m, -1.0).is_err());
    }

    #[test]
    fn truncation_monotonicity() {
        let mut last = f64::INFINITY;
        for n in [10, 20, 40] {
            let m = GeometricModel::new(1.5, n).unwrap();
            let d = resistance_distance(&m.network(), 2, 7).unwrap();
            // the assembled diagonal a_k + a_{k+1} is only exact to eps * max c
            let slack = 16.0 * f64::EPSILON * m.conductance(n) / m.conductance(1);
            assert!(d <= last * (1.0 + slack), "N = {n}: {d} > {last}");
            last = d;
        }
    }
}
