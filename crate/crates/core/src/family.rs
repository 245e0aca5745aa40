//! The product family `g_λ = g⁽⁰⁾ ⊕ λ·g⁽¹⁾` and its Jacobi eigenvalue branches.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{from_int, serde_q_opt};
use crate::spectra::FactorSpectrum;

/// Shape of `λ ↦ σ_{i,j}(λ) = A + B/λ` on `(0, ∞)`.
///
/// The monotonicity is decided by the sign of `B` alone; a zero exists iff
/// `A` and `B` are nonzero with opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchKind {
    IncreasingWithZero,
    DecreasingWithZero,
    IncreasingNoZero,
    DecreasingNoZero,
    ConstantZero,
    ConstantNonzero,
}

impl BranchKind {
    pub fn has_zero(self) -> bool {
        matches!(
            self,
            BranchKind::IncreasingWithZero | BranchKind::DecreasingWithZero
        )
    }

    pub fn is_increasing(self) -> bool {
        matches!(
            self,
            BranchKind::IncreasingWithZero | BranchKind::IncreasingNoZero
        )
    }

    pub fn is_decreasing(self) -> bool {
        matches!(
            self,
            BranchKind::DecreasingWithZero | BranchKind::DecreasingNoZero
        )
    }

    /// The kind of the same branch after exchanging the two factors.
    pub fn swapped(self) -> Self {
        use BranchKind::*;
        match self {
            IncreasingWithZero => DecreasingWithZero,
            DecreasingWithZero => IncreasingWithZero,
            IncreasingNoZero => DecreasingNoZero,
            DecreasingNoZero => IncreasingNoZero,
            k => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchClass {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub a: BigRational,
    #[serde(with = "crate::rational::serde_q")]
    pub b: BigRational,
    pub multiplicity: u64,
    pub kind: BranchKind,
    #[serde(with = "serde_q_opt")]
    pub zero: Option<BigRational>,
}

/// Classifies `A + B/λ` without reference to any particular family.
pub fn classify_coefficients(
    a: &BigRational,
    b: &BigRational,
) -> (BranchKind, Option<BigRational>) {
    use BranchKind::*;
    if b.is_zero() {
        return if a.is_zero() {
            (ConstantZero, None)
        } else {
            (ConstantNonzero, None)
        };
    }
    let opposite = !a.is_zero() && a.is_positive() != b.is_positive();
    let zero = opposite.then(|| -(b / a));
    let kind = match (b.is_negative(), opposite) {
        (true, true) => IncreasingWithZero,
        (true, false) => IncreasingNoZero,
        (false, true) => DecreasingWithZero,
        (false, false) => DecreasingNoZero,
    };
    (kind, zero)
}

/// Two constant-scalar-curvature factors together with the derived constants
/// of the family: total dimension, branch coefficients `A_i`, `B_j`, the
/// critical indices `i*`, `j*` and the degenerate-pair flag.
#[derive(Debug, Clone)]
pub struct ProductFamily {
    factors: [FactorSpectrum; 2],
    m: u32,
    thresholds: [BigRational; 2],
    a: Vec<BigRational>,
    b: Vec<BigRational>,
    i_star: Option<usize>,
    j_star: Option<usize>,
    degenerate_pair: bool,
}

impl ProductFamily {
    pub fn new(factor0: FactorSpectrum, factor1: FactorSpectrum) -> Result<Self> {
        let m = factor0.dim() + factor1.dim();
        if m < 3 {
            return Err(Error::Dimension {
                dim: m,
                reason: "the product must have dimension at least 3",
            });
        }
        let m_minus_1 = from_int(m as i64 - 1);
        let thresholds = [
            factor0.scalar_curvature() / &m_minus_1,
            factor1.scalar_curvature() / &m_minus_1,
        ];
        let shifted = |f: &FactorSpectrum, t: &BigRational| -> Vec<BigRational> {
            f.entries().iter().map(|e| &e.eigenvalue - t).collect()
        };
        let a = shifted(&factor0, &thresholds[0]);
        let b = shifted(&factor1, &thresholds[1]);
        let i_star = a.iter().position(|x| !x.is_negative());
        let j_star = b.iter().position(|x| !x.is_negative());

        // With (i*, j*) = (0, 0) both equalities hold only when κ⁽⁰⁾ = κ⁽¹⁾ = 0,
        // and σ_{0,0} is not in the Jacobi spectrum, so the pair is not degenerate.
        let degenerate_pair = match (i_star, j_star) {
            (Some(i), Some(j)) => a[i].is_zero() && b[j].is_zero() && i + j > 0,
            _ => false,
        };

        Ok(ProductFamily {
            factors: [factor0, factor1],
            m,
            thresholds,
            a,
            b,
            i_star,
            j_star,
            degenerate_pair,
        })
    }

    pub fn factor(&self, k: usize) -> &FactorSpectrum {
        &self.factors[k]
    }

    pub fn factors(&self) -> &[FactorSpectrum; 2] {
        &self.factors
    }

    /// The same family with the factors exchanged, i.e. `h_λ = g⁽¹⁾ ⊕ λ·g⁽⁰⁾`.
    pub fn swapped(&self) -> Result<Self> {
        Self::new(self.factors[1].clone(), self.factors[0].clone())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `κ⁽ᵏ⁾/(m−1)`.
    pub fn threshold(&self, k: usize) -> &BigRational {
        &self.thresholds[k]
    }

    pub fn i_star(&self) -> Option<usize> {
        self.i_star
    }

    pub fn j_star(&self) -> Option<usize> {
        self.j_star
    }

    pub fn degenerate_pair(&self) -> bool {
        self.degenerate_pair
    }

    pub fn coefficients_a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn coefficients_b(&self) -> &[BigRational] {
        &self.b
    }

    pub fn a(&self, i: usize) -> Result<&BigRational> {
        self.a.get(i).ok_or(Error::IndexOutOfRange {
            factor: 0,
            index: i,
            count: self.a.len(),
        })
    }

    pub fn b(&self, j: usize) -> Result<&BigRational> {
        self.b.get(j).ok_or(Error::IndexOutOfRange {
            factor: 1,
            index: j,
            count: self.b.len(),
        })
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> Result<u64> {
        self.a(i)?;
        self.b(j)?;
        let m0 = self.factors[0].multiplicity(i).unwrap_or_default();
        let m1 = self.factors[1].multiplicity(j).unwrap_or_default();
        Ok(m0 * m1)
    }

    pub fn kappa_lambda(&self, lambda: &BigRational) -> Result<BigRational> {
        check_lambda(lambda)?;
        Ok(self.factors[0].scalar_curvature() + self.factors[1].scalar_curvature() / lambda)
    }

    /// `σ_{i,j}(λ) = ρ⁽⁰⁾_i + ρ⁽¹⁾_j/λ − κ_λ/(m−1)`.
    ///
    /// `(0, 0)` is evaluated like any other pair (it gives `−κ_λ/(m−1)`), but
    /// it is the constant mode and never counted in the Jacobi spectrum.
    pub fn sigma_eval(&self, i: usize, j: usize, lambda: &BigRational) -> Result<BigRational> {
        check_lambda(lambda)?;
        let rho0 = self.factors[0]
            .eigenvalue(i)
            .ok_or(Error::IndexOutOfRange {
                factor: 0,
                index: i,
                count: self.factors[0].truncation_count(),
            })?;
        let rho1 = self.factors[1]
            .eigenvalue(j)
            .ok_or(Error::IndexOutOfRange {
                factor: 1,
                index: j,
                count: self.factors[1].truncation_count(),
            })?;
        let kappa = self.kappa_lambda(lambda)?;
        Ok(rho0 + rho1 / lambda - kappa / from_int(self.m as i64 - 1))
    }

    pub fn classify_branch(&self, i: usize, j: usize) -> Result<BranchClass> {
        if i == 0 && j == 0 {
            return Err(Error::ConstantBranch);
        }
        let a = self.a(i)?.clone();
        let b = self.b(j)?.clone();
        let (kind, zero) = classify_coefficients(&a, &b);
        Ok(BranchClass {
            i,
            j,
            multiplicity: self.multiplicity(i, j)?,
            a,
            b,
            kind,
            zero,
        })
    }

    /// All listed branches except `(0, 0)`.
    pub fn branches(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nb = self.b.len();
        (0..self.a.len())
            .flat_map(move |i| (0..nb).map(move |j| (i, j)))
            .filter(|&(i, j)| i + j > 0)
    }

    /// Ensures the listed spectra see every branch that can vanish in `[lo, hi]`.
    ///
    /// Increasing zeros `−B_j/A_i ≥ lo` need `A_i ≤ −B_0/lo`; decreasing zeros
    /// `B_j/(−A_i) ≤ hi` need `B_j ≤ −A_0·hi`. Since unlisted coefficients
    /// exceed the last listed one, it suffices that the last listed `A` (resp.
    /// `B`) reaches that bound, and is nonnegative so that `i*` (resp. `j*`) is
    /// listed.
    pub fn check_window_truncation(&self, lo: &BigRational, hi: &BigRational) -> Result<()> {
        self.check_coverage(&(-&self.b[0] / lo), &(-&self.a[0] * hi))
    }

    /// Ensures every branch negative at `λ` is listed: unlisted branches then
    /// satisfy `σ > A_last + B_0/λ ≥ 0` (and symmetrically).
    pub fn check_point_truncation(&self, lambda: &BigRational) -> Result<()> {
        self.check_coverage(&(-&self.b[0] / lambda), &(-&self.a[0] * lambda))
    }

    /// The `λ` range on which [`Self::check_point_truncation`] passes, as
    /// `(lower bound, upper bound or unbounded)`, both inclusive. `None` if no
    /// `λ` is covered.
    pub fn point_truncation_range(&self) -> Option<(BigRational, Option<BigRational>)> {
        let a_last = self.a.last()?;
        let b_last = self.b.last()?;
        if a_last.is_negative() || b_last.is_negative() {
            return None;
        }
        // A_last ≥ −B_0/λ
        let lower = if self.b[0].is_negative() {
            if !a_last.is_positive() {
                return None;
            }
            -&self.b[0] / a_last
        } else {
            BigRational::zero()
        };
        // B_last ≥ −A_0·λ
        let upper = if self.a[0].is_negative() {
            Some(b_last / -&self.a[0])
        } else {
            None
        };
        match &upper {
            Some(u) if u < &lower || u.is_zero() => None,
            _ => Some((lower, upper)),
        }
    }

    fn check_coverage(&self, need_a: &BigRational, need_b: &BigRational) -> Result<()> {
        let zero = BigRational::zero();
        for (factor, coeffs, need) in [(0, &self.a, need_a), (1, &self.b, need_b)] {
            let need = need.max(&zero);
            let last = coeffs.last().expect("validated spectra are nonempty");
            if last < need {
                return Err(Error::InsufficientTruncation {
                    factor,
                    provided: coeffs.len(),
                    needed_eigenvalue: need + &self.thresholds[factor],
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn check_lambda(lambda: &BigRational) -> Result<()> {
    if lambda.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda.clone()))
    }
}
