use crate::error::{Error, Result};
use crate::models::{classify, Classification};
use crate::network::Network;
use crate::operators::{deficiency_probe, DeficiencyProbe};

const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Binary words of length `≤ D`; the root is named `"o"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryTreeModel {
    pub p0: f64,
    pub p1: f64,
    pub p_minus: f64,
    pub depth: usize,
}

impl BinaryTreeModel {
    pub const ROOT: &'static str = "o";

    pub fn new(p0: f64, p1: f64, p_minus: f64, depth: usize) -> Result<Self> {
        for (name, p) in [("p0", p0), ("p1", p1), ("p_minus", p_minus)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0,1), got {p}"
                )));
            }
        }
        if (p0 + p1 + p_minus - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "p0 + p1 + p_minus must be 1, got {}",
                p0 + p1 + p_minus
            )));
        }
        if depth < 2 {
            return Err(Error::InvalidParameter(format!(
                "depth must be at least 2, got {depth}"
            )));
        }
        Ok(BinaryTreeModel {
            p0,
            p1,
            p_minus,
            depth,
        })
    }

    /// Words in breadth-first order, root first.
    pub fn words(&self) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut start = 0;
        for _ in 0..self.depth {
            let end = out.len();
            for i in start..end {
                for bit in ['0', '1'] {
                    let mut w = out[i].clone();
                    w.push(bit);
                    out.push(w);
                }
            }
            start = end;
        }
        out
    }

    /// Vertex identifier of a word.
    pub fn name(word: &str) -> &str {
        if word.is_empty() {
            Self::ROOT
        } else {
            word
        }
    }

    /// `c(x) = p0^{F0(x)} p1^{F1(x)} / p_-^{|x|}`.
    pub fn weight(&self, word: &str) -> f64 {
        let f0 = word.bytes().filter(|&b| b == b'0').count() as i32;
        let f1 = word.len() as i32 - f0;
        self.p0.powi(f0) * self.p1.powi(f1) / self.p_minus.powi(word.len() as i32)
    }

    /// `Prob(x → xi) = p_i`.
    fn step_down(&self, bit: u8) -> f64 {
        if bit == b'0' {
            self.p0
        } else {
            self.p1
        }
    }

    /// Edges `(parent, child, c(parent)·Prob(parent → child))`.
    fn edges(&self) -> Vec<(String, String, f64)> {
        self.words()
            .into_iter()
            .skip(1)
            .map(|w| {
                let parent = &w[..w.len() - 1];
                let c = self.weight(parent) * self.step_down(*w.as_bytes().last().unwrap());
                (Self::name(parent).to_owned(), w.clone(), c)
            })
            .collect()
    }

    pub fn network(&self) -> Network {
        let names: Vec<String> = self
            .words()
            .iter()
            .map(|w| Self::name(w).to_owned())
            .collect();
        Network::new(names, Self::ROOT, self.edges()).expect("valid tree")
    }

    /// `max |c(x)Prob(x→y) - c(y)Prob(y→x)| / c(x)Prob(x→y)` over parent-child pairs.
    pub fn reversibility_defect(&self) -> f64 {
        self.words()
            .iter()
            .skip(1)
            .map(|w| {
                let parent = &w[..w.len() - 1];
                let down = self.weight(parent) * self.step_down(*w.as_bytes().last().unwrap());
                let up = self.weight(w) * self.p_minus;
                (down - up).abs() / down
            })
            .fold(0.0, f64::max)
    }

    /// `(Δ + I)u = 0` on words shorter than the depth, `u = 1` on the leaves.
    pub fn deficiency(&self) -> Result<DeficiencyProbe> {
        let net = self.network();
        let interior: Vec<bool> = net
            .names()
            .iter()
            .map(|s| s == Self::ROOT || s.len() < self.depth)
            .collect();
        deficiency_probe(&net, &interior)
    }
}

/// Network plus its checks.
#[derive(Clone, Debug)]
pub struct TreeChecks {
    pub network: Network,
    pub reversibility_defect: f64,
    pub probe: DeficiencyProbe,
}

pub fn binary_tree_network(model: &BinaryTreeModel) -> Result<TreeChecks> {
    Ok(TreeChecks {
        network: model.network(),
        reversibility_defect: model.reversibility_defect(),
        probe: model.deficiency()?,
    })
}

/// Deficiency energies across depths and their classification.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthSweep {
    /// `(D, energy)`.
    pub energies: Vec<(usize, f64)>,
    pub classification: Classification,
}

/// Runs the deficiency probe at each depth; every extra level doubles the
/// leaves, so the energies form a doubling-schedule sequence for the classifier.
pub fn depth_sweep(
    p0: f64,
    p1: f64,
    p_minus: f64,
    depths: impl IntoIterator<Item = usize>,
) -> Result<DepthSweep> {
    let mut energies = Vec::new();
    for d in depths {
        let probe = BinaryTreeModel::new(p0, p1, p_minus, d)?.deficiency()?;
        energies.push((d, probe.energy()));
    }
    let sums: Vec<f64> = energies.iter().map(|e| e.1).collect();
    Ok(DepthSweep {
        classification: classify(&sums),
        energies,
    })
}
