use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::network::Network;

/// Complete graph on `"0"`, `"1"`, `"2"` with base `"0"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleModel {
    pub c01: f64,
    pub c02: f64,
    pub c12: f64,
}

impl TriangleModel {
    pub fn new(c01: f64, c02: f64, c12: f64) -> Result<Self> {
        if [c01, c02, c12].iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "triangle conductances must be positive, got ({c01}, {c02}, {c12})"
            )));
        }
        Ok(TriangleModel { c01, c02, c12 })
    }

    pub fn network(&self) -> Network {
        Network::from_indexed(
            3,
            0,
            &[(0, 1, self.c01), (0, 2, self.c02), (1, 2, self.c12)],
        )
        .expect("valid triangle")
    }

    pub fn conductance(&self, x: usize, y: usize) -> f64 {
        match (x.min(y), x.max(y)) {
            (0, 1) => self.c01,
            (0, 2) => self.c02,
            (1, 2) => self.c12,
            _ => 0.0,
        }
    }

    /// `c01c02 + c01c12 + c02c12`.
    pub fn determinant(&self) -> f64 {
        self.c01 * self.c02 + self.c01 * self.c12 + self.c02 * self.c12
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        let (a, b, c) = (self.c01, self.c02, self.c12);
        DMatrix::from_row_slice(3, 3, &[a + b, -a, -b, -a, a + c, -c, -b, -c, b + c])
    }

    /// Closed-form `v_xy` with `v_xy(z) = 0` at the third vertex:
    /// `v_xy(x) = c_yz/D`, `v_xy(y) = -c_xz/D`.
    pub fn dipole(&self, x: usize, y: usize) -> Result<[f64; 3]> {
        if x > 2 || y > 2 || x == y {
            return Err(Error::InvalidParameter(format!(
                "triangle dipole needs two distinct vertices in 0..=2, got ({x}, {y})"
            )));
        }
        let z = 3 - x - y;
        let d = self.determinant();
        let mut v = [0.0; 3];
        v[x] = self.conductance(y, z) / d;
        v[y] = -self.conductance(x, z) / d;
        Ok(v)
    }

    /// `w_xy = √c_xy · v_xy`.
    pub fn frame_vector(&self, x: usize, y: usize) -> Result<[f64; 3]> {
        let s = self.conductance(x, y).sqrt();
        Ok(self.dipole(x, y)?.map(|v| s * v))
    }

    /// `(c̃₀, c̃₁, c̃₂)`.
    pub fn triples(&self) -> [[f64; 3]; 3] {
        let (a, b, c) = (self.c01, self.c02, self.c12);
        [[a, b, c], [a, a, b], [b, c, c]]
    }
}

/// Nonzero eigenvalues by the closed form, against a direct eigensolve.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleSpectrum {
    /// `[0, λ₂, λ₃]`.
    pub formula: [f64; 3],
    /// Ascending eigenvalues of the Laplacian matrix.
    pub direct: [f64; 3],
    /// `λ₃ - λ₂ = 2√(‖c̃₀‖² - ⟨c̃₁, c̃₂⟩)`.
    pub gap: f64,
    pub max_defect: f64,
}

pub fn triangle_spectrum(model: &TriangleModel) -> TriangleSpectrum {
    let [t0, t1, t2] = model.triples();
    let trace: f64 = t0.iter().sum();
    let norm_sq: f64 = t0.iter().map(|v| v * v).sum();
    let cross: f64 = t1.iter().zip(&t2).map(|(a, b)| a * b).sum();
    let root = (norm_sq - cross).max(0.0).sqrt();
    let formula = [0.0, trace - root, trace + root];

    let mut eig: Vec<f64> = SymmetricEigen::new(model.laplacian())
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    eig.sort_by(f64::total_cmp);
    let direct = [eig[0], eig[1], eig[2]];
    let max_defect = formula
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    TriangleSpectrum {
        formula,
        direct,
        gap: 2.0 * root,
        max_defect,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::canonical_laplacian;

    #[test]
    fn unit_and_general() {
        let s = triangle_spectrum(&TriangleModel::new(1.0, 1.0, 1.0).unwrap());
        assert_eq!(s.formula, [0.0, 3.0, 3.0]);
        assert_eq!(s.gap, 0.0);
        assert!(s.max_defect < 1e-12);

        let m = TriangleModel::new(1.0, 2.0, 3.0).unwrap();
        let s = triangle_spectrum(&m);
        assert!(s.max_defect <= 1e-10);
        let [t0, t1, t2] = m.triples();
        let n2: f64 = t0.iter().map(|v| v * v).sum();
        let cross: f64 = t1.iter().zip(&t2).map(|(a, b)| a * b).sum();
        assert!((s.gap * s.gap / 4.0 + cross - n2).abs() < 1e-12);
        assert_eq!(m.laplacian(), canonical_laplacian(&m.network()));
    }

    #[test]
    fn closed_dipoles() {
        let m = TriangleModel::new(1.0, 1.0, 1.0).unwrap();
        let v = m.dipole(0, 1).unwrap();
        assert!((v[0] - 1.0 / 3.0).abs() < 1e-15 && (v[1] + 1.0 / 3.0).abs() < 1e-15);
        assert!(m.dipole(1, 1).is_err());
    }
}
