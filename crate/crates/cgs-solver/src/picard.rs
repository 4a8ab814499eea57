//! Generic Picard iteration with contraction bookkeeping.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct PicardOutcome<X> {
    pub fixed_point: X,
    /// `‖x_{k+1} - x_k‖`, one entry per application of the operator.
    pub deltas: Vec<f64>,
    /// `deltas[k+1] / deltas[k]` wherever the denominator is non-zero.
    pub ratios: Vec<f64>,
    pub iterations: usize,
}

impl<X> PicardOutcome<X> {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PicardError<E> {
    #[error("Picard iteration diverged after {iterations} steps (last ratio {last_ratio:?})")]
    Diverged { iterations: usize, deltas: Vec<f64>, ratios: Vec<f64>, last_ratio: Option<f64> },
    #[error("operator failed: {0}")]
    Operator(E),
}

/// Iterates `x ↦ op(x)` until `dist(x_{k+1}, x_k) < tol`.
///
/// Growth of the step by more than `1e8` over the first step, a non-finite
/// step, or `max_iter` applications without convergence count as divergence.
pub fn picard_iterate<X, E, F, D>(
    mut op: F,
    initial: X,
    dist: D,
    tol: f64,
    max_iter: usize,
) -> Result<PicardOutcome<X>, PicardError<E>>
where
    F: FnMut(&X) -> Result<X, E>,
    D: Fn(&X, &X) -> f64,
{
    let mut x = initial;
    let mut deltas: Vec<f64> = Vec::new();
    let mut ratios = Vec::new();
    let diverged = |deltas: Vec<f64>, ratios: Vec<f64>| {
        let last_ratio = ratios.last().copied();
        PicardError::Diverged { iterations: deltas.len(), deltas, ratios, last_ratio }
    };
    for _ in 0..max_iter {
        let next = op(&x).map_err(PicardError::Operator)?;
        let d = dist(&next, &x);
        if let Some(&prev) = deltas.last() {
            if prev > 0.0 {
                ratios.push(d / prev);
            }
        }
        deltas.push(d);
        x = next;
        if !d.is_finite() || d > 1e8 * deltas[0].max(tol) {
            return Err(diverged(deltas, ratios));
        }
        if d < tol {
            let iterations = deltas.len();
            return Ok(PicardOutcome { fixed_point: x, deltas, ratios, iterations });
        }
    }
    Err(diverged(deltas, ratios))
}
