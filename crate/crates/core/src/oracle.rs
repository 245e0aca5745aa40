//! Brute-force verifiers for the engine in [`crate::bifurcation`].
//!
//! Nothing here uses the engine's zero formulas; both checks go through
//! [`ProductFamily::sigma_eval`] and exhaustive iteration only. They are slow
//! by design and meant for tests and acceptance runs.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bifurcation::{check_window, enumerate_instants};
use crate::error::{Error, Result};
use crate::family::{check_lambda, ProductFamily};
use crate::rational::{format_rational, serde_q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    #[serde(with = "serde_q")]
    pub lo: BigRational,
    #[serde(with = "serde_q")]
    pub hi: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedBracket {
    pub bracket: Bracket,
    pub instants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridScanReport {
    #[serde(with = "serde_q")]
    pub resolution: BigRational,
    /// Grid cells where some branch changes sign (or hits zero at the right end).
    pub detected: Vec<Bracket>,
    /// Engine instants found in each detected cell.
    pub matched: Vec<MatchedBracket>,
    /// Engine instants lying in no detected cell.
    pub unmatched_instants: Vec<String>,
}

impl GridScanReport {
    /// Every instant sits in exactly one detected cell and every detected
    /// cell holds exactly one instant.
    pub fn is_consistent(&self) -> bool {
        self.unmatched_instants.is_empty() && self.matched.iter().all(|m| m.instants.len() == 1)
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Samples every listed branch on the grid `lo, lo+δ, …, hi` and records the
/// cells where a sign change happens, then matches the cells against
/// [`enumerate_instants`].
///
/// Cells are `[lo, lo]` followed by half-open `(x_{k−1}, x_k]`, so a zero that
/// lands exactly on a grid point is attributed to a single cell.
pub fn grid_scan_instants(
    fam: &ProductFamily,
    lo: &BigRational,
    hi: &BigRational,
    delta: &BigRational,
) -> Result<GridScanReport> {
    check_window(lo, hi)?;
    if !delta.is_positive() || delta * BigRational::from_integer(4.into()) >= hi - lo {
        return Err(Error::Usage(format!(
            "grid resolution {} must be positive and below (hi - lo)/4",
            format_rational(delta)
        )));
    }
    if fam.degenerate_pair() {
        return Err(Error::DegeneratePair);
    }
    fam.check_window_truncation(lo, hi)?;

    let mut grid = Vec::new();
    let mut x = lo.clone();
    while &x < hi {
        grid.push(x.clone());
        x += delta;
    }
    grid.push(hi.clone());

    let mut cells = BTreeSet::new();
    for (i, j) in fam.branches() {
        let signs: Vec<i8> = grid
            .iter()
            .map(|x| fam.sigma_eval(i, j, x).map(|s| sign(&s)))
            .collect::<Result<_>>()?;
        if signs[0] == 0 {
            cells.insert(0);
        }
        for k in 1..signs.len() {
            let (prev, cur) = (signs[k - 1], signs[k]);
            if prev != 0 && (cur == 0 || cur != prev) {
                cells.insert(k);
            }
        }
    }

    let cell_bracket = |k: usize| Bracket {
        lo: grid[k.saturating_sub(1)].clone(),
        hi: grid[k].clone(),
    };
    let locate = |lambda: &BigRational| -> usize {
        if lambda == lo {
            0
        } else {
            grid.partition_point(|x| x < lambda)
        }
    };

    let instants = enumerate_instants(fam, lo, hi)?;
    let mut matched: Vec<MatchedBracket> = cells
        .iter()
        .map(|&k| MatchedBracket {
            bracket: cell_bracket(k),
            instants: Vec::new(),
        })
        .collect();
    let mut unmatched_instants = Vec::new();
    for inst in &instants {
        let k = locate(&inst.lambda);
        match cells.iter().position(|&c| c == k) {
            Some(pos) => matched[pos].instants.push(format_rational(&inst.lambda)),
            None => unmatched_instants.push(format_rational(&inst.lambda)),
        }
    }

    Ok(GridScanReport {
        resolution: delta.clone(),
        detected: cells.iter().map(|&k| cell_bracket(k)).collect(),
        matched,
        unmatched_instants,
    })
}

/// Morse index by evaluating every listed branch `(i, j) ≠ (0, 0)`.
pub fn brute_morse_index(fam: &ProductFamily, lambda: &BigRational) -> Result<u64> {
    check_lambda(lambda)?;
    if fam.degenerate_pair() {
        return Err(Error::DegeneratePair);
    }
    fam.check_point_truncation(lambda)?;
    let mut total = 0;
    for (i, j) in fam.branches() {
        let s = fam.sigma_eval(i, j, lambda)?;
        if s.is_zero() {
            return Err(Error::DegeneracyInstant(lambda.clone()));
        }
        if s.is_negative() {
            total += fam.multiplicity(i, j)?;
        }
    }
    Ok(total)
}
