//! Model families as finite truncations, their closed forms and recurrences,
//! plus the partial-sum classifier shared by every convergence question.

mod corpus;
mod geometric;
mod path;
mod strip;
mod tree;
mod triangle;

use std::fmt;

pub use corpus::{random_connected, random_corpus, random_tree, CONDUCTANCE_RANGE};
pub use geometric::{
    deficiency_recurrence, eigenfunction_recurrence, friedrichs_domain_test,
    friedrichs_domain_test_values, harmonic_geometric, DeficiencyReport, DomainTest,
    EigenfunctionReport, GeometricModel, HarmonicGeometric, RecurrenceRow, RECURRENCE_HORIZON,
};
pub use path::{bounded_metric_probe, path_closed_forms, MetricProbe, PathClosedForm, PathModel};
pub use strip::LatticeStripModel;
pub use tree::{binary_tree_network, depth_sweep, BinaryTreeModel, DepthSweep, TreeChecks};
pub use triangle::{triangle_spectrum, TriangleModel, TriangleSpectrum};

/// A doubling step adding less than this (relative) counts as settled.
pub const CONVERGENCE_REL: f64 = 1e-6;
/// A final doubling step adding more than this (relative) counts as growth.
pub const DIVERGENCE_REL: f64 = 0.1;
/// First checkpoint of the doubling schedule.
pub const CLASSIFIER_N0: usize = 10;

/// Verdict on a sequence of partial sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Convergent => "convergent",
            Classification::Divergent => "divergent",
            Classification::Inconclusive => "inconclusive",
        }
    }

    /// Wording for energy series.
    pub fn energy_label(self) -> &'static str {
        match self {
            Classification::Convergent => "finite energy",
            Classification::Divergent => "infinite energy",
            Classification::Inconclusive => "inconclusive",
        }
    }

    /// Wording for the resistance diameter of a path.
    pub fn metric_label(self) -> &'static str {
        match self {
            Classification::Convergent => "bounded",
            Classification::Divergent => "unbounded",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies partial sums sampled on a doubling schedule.
///
/// Convergent when each of the last three steps adds less than
/// [`CONVERGENCE_REL`] relative to the current sum; divergent when the sum
/// stops being finite or the last step adds more than [`DIVERGENCE_REL`];
/// inconclusive otherwise, including when fewer than two samples exist.
pub fn classify(checkpoints: &[f64]) -> Classification {
    if checkpoints.iter().any(|s| !s.is_finite()) {
        return Classification::Divergent;
    }
    let rel: Vec<f64> = checkpoints
        .windows(2)
        .map(|w| {
            let step = (w[1] - w[0]).abs();
            if step == 0.0 {
                0.0
            } else {
                step / w[1].abs()
            }
        })
        .collect();
    if rel.len() >= 3 && rel[rel.len() - 3..].iter().all(|&r| r < CONVERGENCE_REL) {
        Classification::Convergent
    } else if rel.last().is_some_and(|&r| r > DIVERGENCE_REL) {
        Classification::Divergent
    } else {
        Classification::Inconclusive
    }
}

/// `n0, 2n0, 4n0, …` up to and including `n_max`.
pub fn doubling_schedule(n0: usize, n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = n0.max(1);
    while n <= n_max {
        out.push(n);
        n *= 2;
    }
    out
}

/// Partial sums of `terms` (indexed from 1) sampled at each checkpoint.
pub(crate) fn sample_partial_sums(terms: &[f64], schedule: &[usize]) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(schedule.len());
    let mut sum = 0.0;
    let mut next = schedule.iter().peekable();
    for (i, t) in terms.iter().enumerate() {
        sum += t;
        while next.peek().is_some_and(|&&n| n == i + 1) {
            out.push((i + 1, sum));
            next.next();
        }
    }
    out
}
