//! Exact linear algebra over the rationals.
//!
//! Every homology rank reported by this crate is computed here, by exact
//! Gaussian elimination over [`BigRational`]. There is no floating point
//! anywhere on this path.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Builds `num/den` as a canonical rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Dense matrix with exact rational entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigRational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn block_diagonal(&self, other: &RationalMatrix) -> RationalMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank over ℚ by exact row reduction.
pub fn matrix_rank(m: &RationalMatrix) -> usize {
    let mut work = m.clone();
    let (rows, cols) = (work.rows, work.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !work.get(r, col).is_zero()) else {
            continue;
        };
        if pivot != rank {
            for j in col..cols {
                work.entries.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = work.get(rank, col).recip();
        for r in (rank + 1)..rows {
            let factor = work.get(r, col) * &inv;
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                let delta = &factor * work.get(rank, j);
                work.entries[r * cols + j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// A bounded chain complex of finite-dimensional ℚ-vector spaces.
///
/// Degrees form the contiguous interval `[lowest_degree, highest_degree]`.
/// The boundary at degree `d` maps chains of degree `d` to degree `d - 1`
/// and is stored as a `rank(d-1) x rank(d)` matrix; absent boundaries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    lowest_degree: i64,
    chain_ranks: Vec<usize>,
    boundaries: BTreeMap<i64, RationalMatrix>,
}

impl GradedComplex {
    /// Complex with the given chain ranks starting at `lowest_degree` and zero differential.
    pub fn new(lowest_degree: i64, chain_ranks: Vec<usize>) -> Self {
        GradedComplex {
            lowest_degree,
            chain_ranks,
            boundaries: BTreeMap::new(),
        }
    }

    pub fn empty() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest_degree
    }

    pub fn highest_degree(&self) -> i64 {
        self.lowest_degree + self.chain_ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lowest_degree..=self.highest_degree()
    }

    pub fn chain_rank(&self, degree: i64) -> usize {
        if degree < self.lowest_degree {
            return 0;
        }
        self.chain_ranks
            .get((degree - self.lowest_degree) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero chain ranks keyed by degree.
    pub fn chain_ranks(&self) -> BTreeMap<i64, usize> {
        self.degrees()
            .map(|d| (d, self.chain_rank(d)))
            .filter(|&(_, r)| r > 0)
            .collect()
    }

    /// Sets the boundary `C_degree -> C_{degree-1}`.
    pub fn set_boundary(&mut self, degree: i64, matrix: RationalMatrix) -> Result<()> {
        let expected = (self.chain_rank(degree - 1), self.chain_rank(degree));
        if (matrix.rows(), matrix.cols()) != expected {
            return Err(Error::ShapeMismatch(format!(
                "boundary at degree {degree} must be {}x{}, got {}x{}",
                expected.0,
                expected.1,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.is_zero() {
            self.boundaries.remove(&degree);
        } else {
            self.boundaries.insert(degree, matrix);
        }
        Ok(())
    }

    pub fn with_boundary(mut self, degree: i64, matrix: RationalMatrix) -> Result<Self> {
        self.set_boundary(degree, matrix)?;
        Ok(self)
    }

    pub fn boundary(&self, degree: i64) -> RationalMatrix {
        self.boundaries.get(&degree).cloned().unwrap_or_else(|| {
            RationalMatrix::zeros(self.chain_rank(degree - 1), self.chain_rank(degree))
        })
    }

    /// Σ (−1)^d dim C_d.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|d| sign(d) * self.chain_rank(d) as i64)
            .sum()
    }

    /// Direct sum of two complexes; the cross blocks of every boundary are zero.
    pub fn direct_sum(&self, other: &GradedComplex) -> GradedComplex {
        if self.chain_ranks.is_empty() {
            return other.clone();
        }
        if other.chain_ranks.is_empty() {
            return self.clone();
        }
        let lo = self.lowest_degree.min(other.lowest_degree);
        let hi = self.highest_degree().max(other.highest_degree());
        let ranks = (lo..=hi)
            .map(|d| self.chain_rank(d) + other.chain_rank(d))
            .collect();
        let mut sum = GradedComplex::new(lo, ranks);
        for d in (lo + 1)..=hi {
            let block = self.boundary(d).block_diagonal(&other.boundary(d));
            sum.set_boundary(d, block)
                .expect("block-diagonal boundary has the summed shape");
        }
        sum
    }

    /// Applies a change of basis `P_d` in every degree, replacing `∂_d` by `P_{d-1} ∂_d P_d^{-1}`.
    ///
    /// `bases` maps each degree to the pair `(P_d, P_d^{-1})`; missing degrees keep the identity.
    pub fn conjugate(
        &self,
        bases: &BTreeMap<i64, (RationalMatrix, RationalMatrix)>,
    ) -> Result<GradedComplex> {
        let mut out = GradedComplex::new(self.lowest_degree, self.chain_ranks.clone());
        for (&d, m) in &self.boundaries {
            let left = match bases.get(&(d - 1)) {
                Some((p, _)) => p.mul(m)?,
                None => m.clone(),
            };
            let full = match bases.get(&d) {
                Some((_, p_inv)) => left.mul(p_inv)?,
                None => left,
            };
            out.set_boundary(d, full)?;
        }
        Ok(out)
    }
}

fn sign(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// True iff every composite `∂_{d-1} ∘ ∂_d` is the zero matrix.
pub fn verify_complex(c: &GradedComplex) -> bool {
    first_nonzero_composite(c).is_none()
}

fn first_nonzero_composite(c: &GradedComplex) -> Option<i64> {
    c.boundaries.keys().copied().find(|&d| {
        let Some(lower) = c.boundaries.get(&(d - 1)) else {
            return false;
        };
        let composite = lower
            .mul(&c.boundaries[&d])
            .expect("adjacent boundaries have compatible shapes");
        !composite.is_zero()
    })
}

/// Betti numbers over ℚ: `dim ker ∂_d − rank ∂_{d+1}` for each degree, nonzero entries only.
pub fn homology_ranks(c: &GradedComplex) -> Result<BTreeMap<i64, usize>> {
    if let Some(degree) = first_nonzero_composite(c) {
        return Err(Error::ComplexInvalid { degree });
    }
    let boundary_rank = |d: i64| c.boundaries.get(&d).map_or(0, matrix_rank);
    let mut ranks = BTreeMap::new();
    for d in c.degrees() {
        let kernel = c.chain_rank(d) - boundary_rank(d);
        let betti = kernel - boundary_rank(d + 1);
        if betti > 0 {
            ranks.insert(d, betti);
        }
    }
    Ok(ranks)
}

/// Serde adapter writing a rational as `{"num": "...", "den": "..."}` in canonical form.
pub mod serde_rational {
    use super::*;
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
    }

    pub(crate) fn to_repr(q: &BigRational) -> impl Serialize {
        Repr {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_repr(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let repr = Repr::deserialize(d)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            qs: &[BigRational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let reprs: Vec<_> = qs.iter().map(to_repr).collect();
            reprs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<BigRational>, D::Error> {
            #[derive(Deserialize)]
            struct Wrapped(#[serde(with = "super")] BigRational);
            let items = Vec::<Wrapped>::deserialize(d)?;
            Ok(items.into_iter().map(|w| w.0).collect())
        }
    }
}
