//! Gate-count tables and growth fits.

use nalgebra::{DMatrix, DVector};
use qba_core::{build_plan, gate_counts, qba_circuit, qft_circuit, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "M")]
    pub big_m: usize,
    /// Both chirp diagonals together.
    pub diagonal_gates: usize,
    /// Both QFTs together, swaps included.
    pub qft_gates: usize,
    pub swap_gates: usize,
    /// Elementary gates (everything except the macro-operation).
    pub total: usize,
    pub macro_ops: usize,
    pub two_level_rotations: usize,
}

pub fn stats_row(n: usize) -> Result<StatsRow> {
    let plan = build_plan(n)?;
    let g = gate_counts(&qba_circuit(&plan)?);
    let chirp = gate_counts(&plan.chirp_circuit()?);
    let qft = gate_counts(&qft_circuit(plan.m, false)?);
    let iqft = gate_counts(&qft_circuit(plan.m, true)?);
    Ok(StatsRow {
        n,
        m: plan.m,
        big_m: plan.big_m,
        diagonal_gates: 2 * chirp.total,
        qft_gates: qft.total + iqft.total,
        swap_gates: qft.swap + iqft.swap,
        total: g.elementary,
        macro_ops: g.multiplexed,
        two_level_rotations: g.two_level_rotations,
    })
}

/// Smallest transform length whose register has exactly `m` main qubits.
pub fn smallest_n_for_m(m: usize) -> usize {
    if m <= 1 {
        1
    } else {
        (1 << (m - 2)) + 1
    }
}

/// Least-squares description of how the elementary gate total grows with `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub m_min: usize,
    pub m_max: usize,
    /// Leading exponent `p` of `total ≈ a·m^p + b·m + c`, chosen to minimize
    /// the residual sum of squares.
    pub exponent: f64,
    /// Plain slope of `ln total` against `ln m`; biased low by the linear term.
    pub loglog_slope: f64,
    /// Coefficients `[a, b, c]` of `total ≈ a·m² + b·m + c`.
    pub quadratic: [f64; 3],
    pub quadratic_max_residual: f64,
}

fn lstsq(design: &DMatrix<f64>, y: &DVector<f64>) -> (DVector<f64>, f64) {
    let coef = design
        .clone()
        .svd(true, true)
        .solve(y, 1e-12)
        .expect("SVD was computed with both factors");
    let resid = y - design * &coef;
    (coef, resid.norm_squared())
}

fn design_for(ms: &[f64], p: f64) -> DMatrix<f64> {
    DMatrix::from_fn(ms.len(), 3, |i, j| match j {
        0 => ms[i].powf(p),
        1 => ms[i],
        _ => 1.0,
    })
}

/// Fits the gate totals of the smallest plan at each `m` in `m_min..=m_max`.
pub fn growth_fit(m_min: usize, m_max: usize) -> Result<GrowthFit> {
    let mut ms = Vec::new();
    let mut totals = Vec::new();
    for m in m_min..=m_max {
        let row = stats_row(smallest_n_for_m(m))?;
        debug_assert_eq!(row.m, m);
        ms.push(m as f64);
        totals.push(row.total as f64);
    }
    Ok(fit_growth(&ms, &totals, m_min, m_max))
}

pub fn fit_growth(ms: &[f64], totals: &[f64], m_min: usize, m_max: usize) -> GrowthFit {
    let y = DVector::from_column_slice(totals);

    // Golden-section search over the leading exponent.
    let rss = |p: f64| lstsq(&design_for(ms, p), &y).1;
    let (mut lo, mut hi) = (1.2_f64, 3.5_f64);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (rss(x1), rss(x2));
    for _ in 0..100 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = rss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = rss(x2);
        }
    }
    let exponent = (lo + hi) / 2.0;

    let lx: Vec<f64> = ms.iter().map(|m| m.ln()).collect();
    let ly: Vec<f64> = totals.iter().map(|t| t.ln()).collect();
    let (mx, my) = (mean(&lx), mean(&ly));
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();

    let design = design_for(ms, 2.0);
    let (coef, _) = lstsq(&design, &y);
    let quadratic_max_residual = (&y - &design * &coef).amax();

    GrowthFit {
        m_min,
        m_max,
        exponent,
        loglog_slope: sxy / sxx,
        quadratic: [coef[0], coef[1], coef[2]],
        quadratic_max_residual,
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
