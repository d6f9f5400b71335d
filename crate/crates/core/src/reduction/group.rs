use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ReductionError;

const DET_TOL: f64 = 1e-9;

/// A real element of `SL(n_1) × … × SL(n_r)`, stored as one block-diagonal
/// matrix together with its block sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    matrix: DMatrix<f64>,
    blocks: Vec<usize>,
}

impl GroupElement {
    /// A single `SL(n)` block.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self, ReductionError> {
        let n = matrix.nrows();
        Self::with_blocks(matrix, vec![n])
    }

    pub fn with_blocks(matrix: DMatrix<f64>, blocks: Vec<usize>) -> Result<Self, ReductionError> {
        if !matrix.is_square() {
            return Err(ReductionError::NotSquare);
        }
        if blocks.iter().sum::<usize>() != matrix.nrows() || blocks.contains(&0) {
            return Err(ReductionError::BlockMismatch);
        }
        let g = Self { matrix, blocks };
        for b in 0..g.blocks.len() {
            let (start, size) = g.block_range(b);
            let det = g.matrix.view((start, start), (size, size)).determinant();
            if (det - 1.0).abs() > DET_TOL {
                return Err(ReductionError::NotDetOne(det));
            }
        }
        Ok(g)
    }

    /// Block-diagonal product of single-block elements.
    pub fn product(factors: &[GroupElement]) -> Self {
        let n: usize = factors.iter().map(|f| f.dim()).sum();
        let mut m = DMatrix::zeros(n, n);
        let mut blocks = Vec::new();
        let mut off = 0;
        for f in factors {
            m.view_mut((off, off), (f.dim(), f.dim())).copy_from(&f.matrix);
            blocks.extend(&f.blocks);
            off += f.dim();
        }
        Self { matrix: m, blocks }
    }

    /// Scales a positive-determinant matrix to determinant 1.
    pub fn normalized(matrix: DMatrix<f64>) -> Result<Self, ReductionError> {
        if !matrix.is_square() {
            return Err(ReductionError::NotSquare);
        }
        let n = matrix.nrows();
        let det = matrix.determinant();
        if det <= 0.0 || det.abs() < 1e-12 {
            return Err(if det <= -1e-12 { ReductionError::NonPositiveDeterminant } else { ReductionError::NearSingular });
        }
        let s = det.powf(-1.0 / n as f64);
        Self::new(matrix * s)
    }

    /// `n(x) a(y)` with `g·i = x + iy`.
    pub fn from_upper_half(z: Complex64) -> Result<Self, ReductionError> {
        if !(z.im > 0.0) {
            return Err(ReductionError::NotInUpperHalfPlane);
        }
        let r = z.im.sqrt();
        Self::new(DMatrix::from_row_slice(2, 2, &[r, z.re / r, 0.0, 1.0 / r]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn block_range(&self, b: usize) -> (usize, usize) {
        let start = self.blocks[..b].iter().sum();
        (start, self.blocks[b])
    }

    pub fn block(&self, b: usize) -> DMatrix<f64> {
        let (s, n) = self.block_range(b);
        self.matrix.view((s, s), (n, n)).into_owned()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.blocks, other.blocks, "block structures differ");
        Self {
            matrix: &self.matrix * &other.matrix,
            blocks: self.blocks.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.matrix.clone().try_inverse().expect("determinant 1");
        Self {
            matrix: inv,
            blocks: self.blocks.clone(),
        }
    }

    /// Möbius action of a `2×2` block on the upper half plane.
    pub fn act(&self, block: usize, z: Complex64) -> Complex64 {
        let m = self.block(block);
        assert_eq!(m.nrows(), 2, "Möbius action needs an SL(2) block");
        (z * m[(0, 0)] + m[(0, 1)]) / (z * m[(1, 0)] + m[(1, 1)])
    }
}

/// An element of `SL(2, Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sl2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Display for Sl2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Sl2Z {
    pub const IDENTITY: Sl2Z = Sl2Z { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Sl2Z = Sl2Z { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Sl2Z = Sl2Z { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        (a * d - b * c == 1).then_some(Self { a, b, c, d })
    }

    pub fn translation(k: i64) -> Self {
        Self { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// Representative of `±γ` with `c > 0`, or `c = 0` and `d > 0`.
    pub fn normalized(&self) -> Self {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            self.neg()
        } else {
            *self
        }
    }

    pub fn height(&self) -> i64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        (z * self.a as f64 + self.b as f64) / (z * self.c as f64 + self.d as f64)
    }

    pub fn to_group(&self) -> GroupElement {
        GroupElement::new(DMatrix::from_row_slice(
            2,
            2,
            &[self.a as f64, self.b as f64, self.c as f64, self.d as f64],
        ))
        .expect("integral determinant 1")
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }
}
