//! Four compiled-in miniature markets used by the golden tests and the
//! `toy` command. Each carries a reference portfolio for the unregularized
//! no-shorting model at phi = 0.01 together with reference diagnostic
//! columns. Instance 3 has a redundant third asset (a zero-cost mix of the
//! first two), so its optimum is a segment and the reference portfolio is
//! one representative point on it.

use crate::error::{Error, Result};
use crate::market::MarketEstimate;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct ToyInstance {
    pub id: usize,
    pub market: MarketEstimate,
    pub phi: f64,
    /// Reference optimum of the unregularized model (a representative point
    /// when the optimum is not unique).
    pub reference_weights: DVector<f64>,
    /// Whether the reference optimum is the unique minimizer.
    pub unique_optimum: bool,
    pub reference_l: DVector<f64>,
    pub reference_rsc: DVector<f64>,
}

impl ToyInstance {
    pub fn asset_names(&self) -> Vec<String> {
        (1..=self.market.n_assets())
            .map(|i| format!("S{i}"))
            .collect()
    }
}

/// Builds toy instance 1..=4.
pub fn toy_instance(id: usize) -> Result<ToyInstance> {
    let (m, q, reference, unique, l, rsc): (
        Vec<f64>,
        Vec<f64>,
        Vec<f64>,
        bool,
        Vec<f64>,
        Vec<f64>,
    ) = match id {
        // Equal variances, staggered means: near-uniform optimum.
        1 => (
            vec![1.0, 2.0, 3.0],
            vec![2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0],
            vec![0.3233333333333333, 1.0 / 3.0, 0.3433333333333333],
            true,
            vec![2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
            vec![0.2640005612, 0.2721655270, 0.2803304928],
        ),
        // One independent asset versus a correlated pair, all means zero.
        2 => (
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 1.0, 2.0],
            vec![3.0 / 7.0, 2.0 / 7.0, 2.0 / 7.0],
            true,
            vec![14.0 / 9.0, 8.0 / 9.0, 8.0 / 9.0],
            vec![0.5345224838, 0.2693740119, 0.2693740119],
        ),
        // Third asset is a redundant equal mix of the first two (L_3 = 0);
        // the optimal set is a segment and this is one point on it.
        3 => (
            vec![1.0, 3.0, 2.0],
            vec![3.0, 1.0, 2.0, 1.0, 7.0, 4.0, 2.0, 4.0, 3.0],
            vec![0.6875, 0.1925, 0.1200],
            false,
            vec![2.0, 2.0, 0.0],
            vec![0.9722718241, 0.2722361920, 0.0],
        ),
        // Two high-variance, mutually hedging assets dominate the best
        // small supports.
        4 => (
            vec![0.0, 0.0, 0.0, 0.0],
            vec![
                8.0, 7.0, 6.0, 6.0, 7.0, 26.0, 6.0, 0.0, 6.0, 6.0, 96.0, -68.0, 6.0, 0.0, -68.0,
                73.0,
            ],
            vec![
                0.2913411307639264,
                0.1165919282511211,
                0.2714160232766118,
                0.3206509177083407,
            ],
            true,
            vec![1.8125, 13.8125, 83.3125, 74.8125],
            vec![0.3922300011, 0.4333159052, 2.4773682447, 2.7734450843],
        ),
        _ => return Err(Error::Spec(format!("toy instance must be 1..=4, got {id}"))),
    };
    let n = m.len();
    let market = MarketEstimate::new(
        DVector::from_vec(m),
        DMatrix::from_row_slice(n, n, &q),
    )?;
    Ok(ToyInstance {
        id,
        market,
        phi: 0.01,
        reference_weights: DVector::from_vec(reference),
        unique_optimum: unique,
        reference_l: DVector::from_vec(l),
        reference_rsc: DVector::from_vec(rsc),
    })
}
