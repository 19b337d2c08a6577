//! Block kernels `K₁: S₂ → S₁`, `K₂: S₁ → S₂` shared by the finite and limit
//! Fredholm determinants.
//!
//! Both formulas use the same layout. For each level `ℓ`, `S₁` holds the
//! left points of odd levels and the right points of even levels; `S₂`
//! holds the rest. A point `p` of level `i` has a row neighbour
//! `rn = i+1` (left points) or `i−1` (right points) and a column neighbour
//! on the other side. Both kernels then read
//!
//! `K(p, p′) = 1[level(p′) ∈ {i, rn(p)}] · ρ(p) κ(p′) / (p − p′)`
//!
//! with a row weight `ρ` and a column weight `κ` supplied by the caller.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{det_complex, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Provenance of a kernel index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointTag {
    /// 1-based level `ℓ`.
    pub level: usize,
    pub side: Side,
}

impl PointTag {
    /// Whether this point belongs to `S₁`.
    pub fn in_s1(&self) -> bool {
        (self.side == Side::Left) == (self.level % 2 == 1)
    }

    /// Level whose `H` divides the row weight (0 or m+1 stand for `z = 0`).
    pub fn row_neighbour(&self) -> usize {
        match self.side {
            Side::Left => self.level + 1,
            Side::Right => self.level - 1,
        }
    }

    /// Level whose `H` divides the column weight.
    pub fn col_neighbour(&self) -> usize {
        match self.side {
            Side::Left => self.level - 1,
            Side::Right => self.level + 1,
        }
    }
}

/// A kernel point with log-weights. Only `exp` of the weights matters.
#[derive(Clone, Copy, Debug)]
pub struct WeightedPoint {
    pub w: Complex64,
    pub tag: PointTag,
    pub log_row: Complex64,
    pub log_col: Complex64,
}

/// The two rectangular kernels with their index provenance.
#[derive(Clone, Debug)]
pub struct KernelPair {
    pub k1: ComplexMatrix,
    pub k2: ComplexMatrix,
    pub s1: Vec<PointTag>,
    pub s2: Vec<PointTag>,
    pub s1_points: Vec<Complex64>,
    pub s2_points: Vec<Complex64>,
}

/// Entries below this modulus are stored as exact zeros.
pub const ENTRY_FLOOR: f64 = 1e-300;

impl KernelPair {
    /// Assemble both kernels. Rows and columns are rescaled by a diagonal
    /// similarity, `K₁ → D₁⁻¹K₁D₂`, `K₂ → D₂⁻¹K₂D₁`, that balances
    /// `|ρ|` against `|κ|` at every point; `det(I − K₁K₂)` is unchanged but
    /// the entries stay in range when the weights themselves do not.
    pub fn assemble(points: &[WeightedPoint]) -> Self {
        Self::assemble_with_floor(points, ENTRY_FLOOR)
    }

    /// As [`KernelPair::assemble`], storing balanced entries of modulus
    /// below `floor` as exact zeros.
    pub fn assemble_with_floor(points: &[WeightedPoint], floor: f64) -> Self {
        let gauge: Vec<f64> = points.iter().map(|p| 0.5 * (p.log_row.re - p.log_col.re)).collect();
        let (mut i1, mut i2) = (Vec::new(), Vec::new());
        for (idx, p) in points.iter().enumerate() {
            if p.tag.in_s1() {
                i1.push(idx);
            } else {
                i2.push(idx);
            }
        }
        let block = |rows: &[usize], cols: &[usize]| {
            ComplexMatrix::from_fn(rows.len(), cols.len(), |a, b| {
                let (p, q) = (&points[rows[a]], &points[cols[b]]);
                if q.tag.level != p.tag.level && q.tag.level != p.tag.row_neighbour() {
                    return Complex64::new(0.0, 0.0);
                }
                let log = p.log_row - gauge[rows[a]] + q.log_col + gauge[cols[b]];
                let v = log.exp() / (p.w - q.w);
                if v.norm() < floor {
                    Complex64::new(0.0, 0.0)
                } else {
                    v
                }
            })
        };
        Self {
            k1: block(&i1, &i2),
            k2: block(&i2, &i1),
            s1: i1.iter().map(|&i| points[i].tag).collect(),
            s2: i2.iter().map(|&i| points[i].tag).collect(),
            s1_points: i1.iter().map(|&i| points[i].w).collect(),
            s2_points: i2.iter().map(|&i| points[i].w).collect(),
        }
    }

    /// `det(I − K₁K₂)` computed on the smaller of `S₁`, `S₂`.
    pub fn fredholm_det(&self) -> Result<Complex64> {
        if self.s1.len() <= self.s2.len() {
            self.det_k1k2()
        } else {
            self.det_k2k1()
        }
    }

    pub fn det_k1k2(&self) -> Result<Complex64> {
        det_complex(&self.k1.mul(&self.k2).identity_minus())
    }

    pub fn det_k2k1(&self) -> Result<Complex64> {
        det_complex(&self.k2.mul(&self.k1).identity_minus())
    }

    pub fn is_finite(&self) -> bool {
        self.k1.as_slice().iter().chain(self.k2.as_slice()).all(|v| v.re.is_finite() && v.im.is_finite())
    }
}
