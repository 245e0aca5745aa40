//! Degeneracy instants, Morse index, jump classification and rigidity intervals.
//!
//! Zeros are located per branch family by exact search over the sorted
//! coefficient lists: an increasing branch `(i, j)` (with `B_j < 0 < A_i`)
//! vanishes at `−B_j/A_i`, a decreasing one (with `A_i < 0 < B_j`) at
//! `B_j/(−A_i)`. Coincident zeros are grouped by exact rational equality,
//! which is the only way a neutral instant (where increasing and decreasing
//! contributions cancel) can be told apart from two nearby instants.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{check_lambda, BranchKind, ProductFamily};
use crate::rational::{format_rational, from_int, serde_q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    /// The Morse index jumps, so bifurcation is guaranteed.
    Bifurcation,
    /// No jump, but a harmonically free symmetry forces bifurcation.
    EquivariantBifurcation,
    /// No jump and no symmetry argument; bifurcation is neither proved nor excluded.
    NeutralUndetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contributor {
    pub i: usize,
    pub j: usize,
    pub multiplicity: u64,
    pub kind: BranchKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyInstant {
    #[serde(with = "serde_q")]
    pub lambda: BigRational,
    pub contributors: Vec<Contributor>,
    /// `n_{λ+} − n_{λ−}`.
    pub delta_n: i64,
    pub classification: Classification,
}

impl DegeneracyInstant {
    /// Index jump from the contributor kinds alone.
    pub fn contributor_delta(&self) -> i64 {
        self.contributors
            .iter()
            .map(|c| match c.kind {
                BranchKind::DecreasingWithZero => c.multiplicity as i64,
                BranchKind::IncreasingWithZero => -(c.multiplicity as i64),
                _ => 0,
            })
            .sum()
    }
}

/// Open interval `(lo, hi)` free of degeneracy instants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityInterval {
    #[serde(with = "serde_q")]
    pub lo: BigRational,
    #[serde(with = "serde_q")]
    pub hi: BigRational,
}

impl RigidityInterval {
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / from_int(2)
    }
}

pub(crate) fn check_window(lo: &BigRational, hi: &BigRational) -> Result<()> {
    if lo.is_positive() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidWindow {
            lo: format_rational(lo),
            hi: format_rational(hi),
        })
    }
}

/// Raw zeros `(λ, contributor)` of every listed branch with `lo ≤ λ ≤ hi`.
/// The constant mode `(0, 0)` vanishes where `κ_λ = 0` but is skipped.
fn branch_zeros(
    fam: &ProductFamily,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(BigRational, Contributor)> {
    let a = fam.coefficients_a();
    let b = fam.coefficients_b();
    let mut out = Vec::new();
    let contributor = |i: usize, j: usize, kind| Contributor {
        i,
        j,
        multiplicity: fam.multiplicity(i, j).expect("indices come from the lists"),
        kind,
    };

    // Increasing: B_j < 0 < A_i, zero −B_j/A_i ∈ [lo, hi] ⇔ A_i ∈ [−B_j/hi, −B_j/lo].
    for (j, bj) in b.iter().enumerate().take_while(|(_, x)| x.is_negative()) {
        let (min_a, max_a) = (-bj / hi, -bj / lo);
        let start = a.partition_point(|x| x < &min_a);
        let end = a.partition_point(|x| x <= &max_a);
        for i in (start..end).filter(|&i| i + j > 0) {
            out.push((
                -(bj / &a[i]),
                contributor(i, j, BranchKind::IncreasingWithZero),
            ));
        }
    }
    // Decreasing: A_i < 0 < B_j, zero B_j/(−A_i) ∈ [lo, hi] ⇔ B_j ∈ [−A_i·lo, −A_i·hi].
    for (i, ai) in a.iter().enumerate().take_while(|(_, x)| x.is_negative()) {
        let (min_b, max_b) = (-ai * lo, -ai * hi);
        let start = b.partition_point(|x| x < &min_b);
        let end = b.partition_point(|x| x <= &max_b);
        for j in (start..end).filter(|&j| i + j > 0) {
            out.push((
                -(&b[j] / ai),
                contributor(i, j, BranchKind::DecreasingWithZero),
            ));
        }
    }
    out
}

fn require_nondegenerate(fam: &ProductFamily) -> Result<()> {
    if fam.degenerate_pair() {
        Err(Error::DegeneratePair)
    } else {
        Ok(())
    }
}

/// Every degeneracy instant in the closed window `[lo, hi]`, ascending, each
/// with its contributors, index jump and classification.
pub fn enumerate_instants(
    fam: &ProductFamily,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<Vec<DegeneracyInstant>> {
    check_window(lo, hi)?;
    require_nondegenerate(fam)?;
    fam.check_window_truncation(lo, hi)?;

    let mut grouped: BTreeMap<BigRational, Vec<Contributor>> = BTreeMap::new();
    for (lambda, c) in branch_zeros(fam, lo, hi) {
        grouped.entry(lambda).or_default().push(c);
    }
    grouped
        .into_iter()
        .map(|(lambda, mut contributors)| {
            contributors.sort_by_key(|c| (c.i, c.j));
            classify_instant(
                fam,
                DegeneracyInstant {
                    lambda,
                    contributors,
                    delta_n: 0,
                    classification: Classification::NeutralUndetermined,
                },
            )
        })
        .collect()
}

/// Jacobi-operator Morse index at a non-degenerate `λ`: the number of
/// negative `σ_{i,j}(λ)` with `(i, j) ≠ (0, 0)`, counted with multiplicity.
///
/// This excludes the constant mode, so when `κ_λ > 0` it is one less than the
/// count of Laplacian eigenvalues below `κ_λ/(m−1)`. Jumps are unaffected.
pub fn morse_index(fam: &ProductFamily, lambda: &BigRational) -> Result<u64> {
    check_lambda(lambda)?;
    require_nondegenerate(fam)?;
    fam.check_point_truncation(lambda)?;

    let a = fam.coefficients_a();
    let b = fam.coefficients_b();
    let mu0: Vec<u64> = fam
        .factor(0)
        .entries()
        .iter()
        .map(|e| e.multiplicity)
        .collect();
    let mut prefix1 = vec![0u64];
    for e in fam.factor(1).entries() {
        prefix1.push(prefix1.last().unwrap() + e.multiplicity);
    }

    // σ_{i,j} < 0 ⇔ B_j < −λ·A_i; B is sorted so the count is a prefix.
    let mut total = 0u64;
    for (i, ai) in a.iter().enumerate() {
        let cut = -(ai * lambda);
        let negatives = b.partition_point(|x| x < &cut);
        if negatives < b.len() && b[negatives] == cut && i + negatives > 0 {
            return Err(Error::DegeneracyInstant(lambda.clone()));
        }
        total += mu0[i] * prefix1[negatives];
    }
    // drop σ_{0,0} = −κ_λ/(m−1) if it was counted
    if (&a[0] * lambda + &b[0]).is_negative() {
        total -= 1;
    }
    Ok(total)
}

/// Distance from `lambda` to the nearest other zero among the listed branches.
fn nearest_other_zero(fam: &ProductFamily, lambda: &BigRational) -> Option<BigRational> {
    fam.branches()
        .filter_map(|(i, j)| fam.classify_branch(i, j).ok()?.zero)
        .filter(|z| z != lambda)
        .map(|z| (z - lambda).abs())
        .min()
}

/// Half-width `h` of the cross-check bracket around an instant: half the gap
/// to the nearest other zero of a listed branch, capped at `λ/2` and at half
/// the distance to the edge of the range the listed spectra cover. `None`
/// when the instant sits on that edge, so one side is not determined.
fn bracket_half_width(fam: &ProductFamily, lambda: &BigRational) -> Option<BigRational> {
    let half = from_int(2);
    let mut h = lambda / &half;
    if let Some(gap) = nearest_other_zero(fam, lambda) {
        h = h.min(gap / &half);
    }
    let (lower, upper) = fam.point_truncation_range()?;
    if lambda <= &lower {
        return None;
    }
    h = h.min((lambda - &lower) / &half);
    if let Some(upper) = upper {
        if &upper <= lambda {
            return None;
        }
        h = h.min((upper - lambda) / &half);
    }
    Some(h)
}

/// Fills in `delta_n` and the classification.
///
/// The jump is computed from the contributor kinds and, unless the instant
/// sits on the edge of what the listed spectra cover, cross-checked against
/// the two-sided Morse index difference.
pub fn classify_instant(
    fam: &ProductFamily,
    mut inst: DegeneracyInstant,
) -> Result<DegeneracyInstant> {
    require_nondegenerate(fam)?;
    let delta = inst.contributor_delta();

    if let Some(h) = bracket_half_width(fam, &inst.lambda) {
        let below = morse_index(fam, &(&inst.lambda - &h))?;
        let above = morse_index(fam, &(&inst.lambda + &h))?;
        let two_sided = above as i64 - below as i64;
        if two_sided != delta {
            return Err(Error::Inconsistent(format!(
                "index jump at lambda = {}: contributors give {delta}, Morse index difference gives {two_sided}",
                format_rational(&inst.lambda)
            )));
        }
    }

    let symmetric = fam.factor(0).harmonically_free() || fam.factor(1).harmonically_free();
    inst.delta_n = delta;
    inst.classification = if delta != 0 {
        Classification::Bifurcation
    } else if symmetric {
        Classification::EquivariantBifurcation
    } else {
        Classification::NeutralUndetermined
    };
    Ok(inst)
}

/// Complement of the instant set in `(lo, hi)` as maximal open intervals.
pub fn rigidity_intervals(
    fam: &ProductFamily,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<Vec<RigidityInterval>> {
    let instants = enumerate_instants(fam, lo, hi)?;
    Ok(complement(lo, hi, instants.iter().map(|i| &i.lambda)))
}

pub(crate) fn complement<'a>(
    lo: &BigRational,
    hi: &BigRational,
    points: impl Iterator<Item = &'a BigRational>,
) -> Vec<RigidityInterval> {
    let mut cuts = vec![lo.clone()];
    cuts.extend(points.filter(|p| lo < *p && *p < hi).cloned());
    cuts.push(hi.clone());
    cuts.windows(2)
        .map(|w| RigidityInterval {
            lo: w[0].clone(),
            hi: w[1].clone(),
        })
        .collect()
}
