use crate::energy::dipole;
use crate::error::{Error, Result};
use crate::models::{
    classify, doubling_schedule, sample_partial_sums, Classification, CLASSIFIER_N0,
};
use crate::network::Network;

/// Nearest-neighbour path `0 - 1 - … - N` with `c_{n-1,n} = a_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathModel {
    /// `a_1, …, a_N`.
    a: Vec<f64>,
}

impl PathModel {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter(
                "a path needs at least one edge".into(),
            ));
        }
        if let Some((k, v)) = a
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidParameter(format!(
                "conductance a_{} must be positive, got {v}",
                k + 1
            )));
        }
        Ok(PathModel { a })
    }

    /// `a_n = f(n)` for `n = 1..=truncation`.
    pub fn from_fn(truncation: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        PathModel::new((1..=truncation).map(f).collect())
    }

    pub fn unit(truncation: usize) -> Result<Self> {
        PathModel::from_fn(truncation, |_| 1.0)
    }

    pub fn truncation(&self) -> usize {
        self.a.len()
    }

    /// `a_n`, `1 ≤ n ≤ N`.
    pub fn conductance(&self, n: usize) -> f64 {
        self.a[n - 1]
    }

    pub fn conductances(&self) -> &[f64] {
        &self.a
    }

    /// Vertices `"0".."N"`, base `"0"`.
    pub fn network(&self) -> Network {
        let edges: Vec<_> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, &c)| (i, i + 1, c))
            .collect();
        Network::from_indexed(self.a.len() + 1, 0, &edges).expect("valid path")
    }

    fn check(&self, x: usize, y: usize) -> Result<()> {
        let n = self.truncation();
        if x > n || y > n {
            return Err(Error::InvalidParameter(format!(
                "vertex index out of range 0..={n}: ({x}, {y})"
            )));
        }
        if x == y {
            return Err(Error::SameEndpoints(x.to_string()));
        }
        Ok(())
    }

    /// `Σ_{min<k≤max} 1/a_k`.
    pub fn distance(&self, x: usize, y: usize) -> Result<f64> {
        if x == y && x <= self.truncation() {
            return Ok(0.0);
        }
        self.check(x, y)?;
        let (lo, hi) = (x.min(y), x.max(y));
        Ok(self.a[lo..hi].iter().map(|a| 1.0 / a).sum())
    }

    /// Closed-form `v_xy`: `0` up to `x`, then `-Σ_{x<k≤z} 1/a_k`, constant
    /// past `y` (the order of the two endpoints flips the sign).
    pub fn dipole(&self, x: usize, y: usize) -> Result<Vec<f64>> {
        self.check(x, y)?;
        let (lo, hi, sign) = if x < y { (x, y, 1.0) } else { (y, x, -1.0) };
        let mut v = vec![0.0; self.truncation() + 1];
        let mut acc = 0.0;
        for (z, slot) in v.iter_mut().enumerate().skip(lo + 1) {
            if z <= hi {
                acc -= 1.0 / self.a[z - 1];
            }
            *slot = sign * acc;
        }
        Ok(v)
    }
}

/// Closed forms compared with the generic solver.
#[derive(Clone, Debug, PartialEq)]
pub struct PathClosedForm {
    pub dipole: Vec<f64>,
    pub distance: f64,
    /// Sup-norm gap to the solver dipole after matching the constant at vertex 0.
    pub dipole_defect: f64,
    /// `|distance - resistance_distance|`.
    pub distance_defect: f64,
}

pub fn path_closed_forms(model: &PathModel, x: usize, y: usize) -> Result<PathClosedForm> {
    let closed = model.dipole(x, y)?;
    let distance = model.distance(x, y)?;
    let net = model.network();
    let solved = dipole(&net, x, y)?;
    let shift = solved[0] - closed[0];
    let dipole_defect = closed
        .iter()
        .zip(solved.values())
        .map(|(c, s)| (s - shift - c).abs())
        .fold(0.0, f64::max);
    // ‖v_xy‖²_E = v_xy(x) - v_xy(y)
    let resistance = solved[x] - solved[y];
    Ok(PathClosedForm {
        dipole: closed,
        distance,
        dipole_defect,
        distance_defect: (distance - resistance).abs(),
    })
}

/// Partial sums of `Σ 1/a_n` on the doubling schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricProbe {
    /// `(N, Σ_{n≤N} 1/a_n)`.
    pub checkpoints: Vec<(usize, f64)>,
    pub classification: Classification,
}

impl MetricProbe {
    /// The last partial sum, i.e. the diameter estimate when bounded.
    pub fn limit(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |c| c.1)
    }

    /// Partial sum at `n`, if `n` is a checkpoint.
    pub fn at(&self, n: usize) -> Option<f64> {
        self.checkpoints.iter().find(|c| c.0 == n).map(|c| c.1)
    }
}

/// Samples `Σ_{n≤N} 1/a_n` at `N = 10, 20, 40, …, ≤ n_max` and classifies it.
pub fn bounded_metric_probe(a: impl Fn(usize) -> f64, n_max: usize) -> Result<MetricProbe> {
    if n_max < CLASSIFIER_N0 {
        return Err(Error::InvalidParameter(format!(
            "n_max must be at least {CLASSIFIER_N0}, got {n_max}"
        )));
    }
    let schedule = doubling_schedule(CLASSIFIER_N0, n_max);
    let last = *schedule.last().expect("non-empty schedule");
    let terms: Vec<f64> = (1..=last).map(|n| 1.0 / a(n)).collect();
    let checkpoints = sample_partial_sums(&terms, &schedule);
    let sums: Vec<f64> = checkpoints.iter().map(|c| c.1).collect();
    Ok(MetricProbe {
        classification: classify(&sums),
        checkpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let m = PathModel::new(vec![1.0, 2.0, 4.0]).unwrap();
        assert!((m.distance(0, 3).unwrap() - 1.75).abs() < 1e-15);
        assert_eq!(m.distance(3, 0).unwrap(), m.distance(0, 3).unwrap());
        let unit = PathModel::unit(9).unwrap();
        assert_eq!(unit.distance(2, 7).unwrap(), 5.0);
        assert!(m.distance(0, 4).is_err());
        assert!(PathModel::new(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn closed_form_dipole_matches_solver() {
        let m = PathModel::from_fn(25, |n| 0.3 + (n as f64 * 1.7).sin().powi(2) * 4.0).unwrap();
        for (x, y) in [(0, 25), (3, 11), (11, 3), (24, 25)] {
            let r = path_closed_forms(&m, x, y).unwrap();
            assert!(r.dipole_defect <= 1e-10, "{x},{y}: {}", r.dipole_defect);
            assert!(r.distance_defect <= 1e-10);
        }
        let m = PathModel::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(m.dipole(0, 2).unwrap(), vec![0.0, -1.0, -1.5]);
    }

    #[test]
    fn bounded_metric_examples() {
        let p = bounded_metric_probe(|n| 2f64.powi(n as i32), 160).unwrap();
        assert_eq!(p.classification, Classification::Convergent);
        assert!((p.at(40).unwrap() - 1.0).abs() < 1e-6);
        let p = bounded_metric_probe(|_| 1.0, 160).unwrap();
        assert_eq!(p.classification, Classification::Divergent);
        assert!(bounded_metric_probe(|_| 1.0, 9).is_err());
    }
}
