//! Block-structured matrices graded by a block type.
//!
//! A block type is the tuple of fiber dimensions `(d_0, ..., d_m)`. The two
//! structured shapes that occur everywhere are strictly block-subdiagonal
//! matrices (the chain maps `Y_j: C^{d_{j-1}} -> C^{d_j}`) and block-diagonal
//! matrices. Blocks are stored as blocks; assembling the dense `n x n`
//! matrix is an explicit conversion.

use num_complex::Complex64;

use super::matrix::{cond_2, hermitian_sqrt, max_abs, CMat};
use crate::error::{Error, Result};
use crate::COND_LIMIT;

/// Fiber dimensions `(d_0, ..., d_m)` of a graded space of total dimension
/// `n = d_0 + ... + d_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockType {
    sizes: Vec<usize>,
}

impl BlockType {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Shape("block type must have at least one block".into()));
        }
        if sizes.iter().any(|&d| d == 0) {
            return Err(Error::Shape("every block size d_j must be at least 1".into()));
        }
        Ok(BlockType { sizes })
    }

    /// Block sizes `d_0, ..., d_m`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Index of the last block, `m`.
    pub fn top(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Number of blocks, `m + 1`.
    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// Total dimension `n`.
    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Row/column offset of block `j` in the assembled matrix.
    pub fn offset(&self, j: usize) -> usize {
        self.sizes[..j].iter().sum()
    }

    pub fn size(&self, j: usize) -> usize {
        self.sizes[j]
    }
}

/// Strictly block-subdiagonal matrix: blocks `Y_1, ..., Y_m` with
/// `Y_j` of shape `d_j x d_{j-1}`.
#[derive(Debug, Clone)]
pub struct SubdiagonalY {
    block_type: BlockType,
    blocks: Vec<CMat>,
}

impl SubdiagonalY {
    pub fn new(block_type: BlockType, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != block_type.top() {
            return Err(Error::Shape(format!(
                "expected {} subdiagonal blocks, got {}",
                block_type.top(),
                blocks.len()
            )));
        }
        for (j, b) in blocks.iter().enumerate() {
            let (rows, cols) = (block_type.size(j + 1), block_type.size(j));
            if b.shape() != (rows, cols) {
                return Err(Error::Shape(format!(
                    "block Y_{} must be {}x{}, got {}x{}",
                    j + 1,
                    rows,
                    cols,
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(SubdiagonalY { block_type, blocks })
    }

    /// The zero chain (a direct sum of weighted shifts once a kernel is built).
    pub fn zero(block_type: BlockType) -> Self {
        let blocks = (1..block_type.num_blocks())
            .map(|j| CMat::zeros(block_type.size(j), block_type.size(j - 1)))
            .collect();
        SubdiagonalY { block_type, blocks }
    }

    /// Chain on a scalar block type `(1, ..., 1)` with the given entries.
    pub fn scalar_chain(entries: &[Complex64]) -> Self {
        let block_type = BlockType::new(vec![1; entries.len() + 1]).expect("nonempty");
        let blocks = entries
            .iter()
            .map(|&y| CMat::from_element(1, 1, y))
            .collect();
        SubdiagonalY { block_type, blocks }
    }

    pub fn block_type(&self) -> &BlockType {
        &self.block_type
    }

    /// Block `Y_j`, `1 <= j <= m`.
    pub fn block(&self, j: usize) -> &CMat {
        &self.blocks[j - 1]
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    /// Product `Y_l Y_{l-1} ... Y_{j+1}` mapping block `j` to block `l`
    /// (`d_l x d_j`); the identity when `l == j`.
    pub fn chain(&self, l: usize, j: usize) -> CMat {
        assert!(l >= j && l <= self.block_type.top());
        let mut acc = CMat::identity(self.block_type.size(j), self.block_type.size(j));
        for k in (j + 1)..=l {
            acc = self.block(k) * acc;
        }
        acc
    }

    /// Dense `n x n` matrix with the blocks on the first subdiagonal band.
    pub fn assemble(&self) -> CMat {
        let n = self.block_type.dim();
        let mut out = CMat::zeros(n, n);
        for j in 1..self.block_type.num_blocks() {
            let (r0, c0) = (self.block_type.offset(j), self.block_type.offset(j - 1));
            let b = self.block(j);
            out.view_mut((r0, c0), b.shape()).copy_from(b);
        }
        out
    }

    /// Conjugation `A Y A^{-1}` by a block-diagonal `A` of the same type:
    /// blockwise `Y_j' = A_j Y_j A_{j-1}^{-1}`.
    pub fn conjugated(&self, a: &BlockDiagonal) -> Result<SubdiagonalY> {
        if a.block_type() != &self.block_type {
            return Err(Error::Shape("conjugating matrix has a different block type".into()));
        }
        let inverses = a.inverse()?;
        let blocks = (1..self.block_type.num_blocks())
            .map(|j| a.block(j) * self.block(j) * inverses.block(j - 1))
            .collect();
        Ok(SubdiagonalY { block_type: self.block_type.clone(), blocks })
    }

    /// Orthogonal direct sum with another chain of the same length: block
    /// sizes add and the blocks become `diag(Y_j, Z_j)`.
    pub fn direct_sum(&self, other: &SubdiagonalY) -> Result<SubdiagonalY> {
        if self.block_type.num_blocks() != other.block_type.num_blocks() {
            return Err(Error::Shape("direct sum requires chains of equal length".into()));
        }
        let sizes: Vec<usize> = self
            .block_type
            .sizes()
            .iter()
            .zip(other.block_type.sizes())
            .map(|(&a, &b)| a + b)
            .collect();
        let block_type = BlockType::new(sizes)?;
        let mut blocks = Vec::new();
        for j in 1..block_type.num_blocks() {
            let (a, b) = (self.block(j), other.block(j));
            let mut blk = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
            blk.view_mut((0, 0), a.shape()).copy_from(a);
            blk.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
            blocks.push(blk);
        }
        Ok(SubdiagonalY { block_type, blocks })
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |acc, b| acc.max(max_abs(b)))
    }
}

/// Block-diagonal matrix with square blocks matching a block type.
#[derive(Debug, Clone)]
pub struct BlockDiagonal {
    block_type: BlockType,
    blocks: Vec<CMat>,
}

impl BlockDiagonal {
    pub fn new(block_type: BlockType, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != block_type.num_blocks() {
            return Err(Error::Shape(format!(
                "expected {} diagonal blocks, got {}",
                block_type.num_blocks(),
                blocks.len()
            )));
        }
        for (j, b) in blocks.iter().enumerate() {
            let d = block_type.size(j);
            if b.shape() != (d, d) {
                return Err(Error::Shape(format!(
                    "diagonal block {} must be {}x{}, got {}x{}",
                    j,
                    d,
                    d,
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(BlockDiagonal { block_type, blocks })
    }

    pub fn identity(block_type: BlockType) -> Self {
        let blocks = block_type
            .sizes()
            .iter()
            .map(|&d| CMat::identity(d, d))
            .collect();
        BlockDiagonal { block_type, blocks }
    }

    pub fn block_type(&self) -> &BlockType {
        &self.block_type
    }

    pub fn block(&self, j: usize) -> &CMat {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn assemble(&self) -> CMat {
        let n = self.block_type.dim();
        let mut out = CMat::zeros(n, n);
        for j in 0..self.block_type.num_blocks() {
            let o = self.block_type.offset(j);
            out.view_mut((o, o), self.blocks[j].shape()).copy_from(&self.blocks[j]);
        }
        out
    }

    /// Extracts the block-diagonal part of a dense matrix.
    pub fn from_dense(block_type: BlockType, dense: &CMat) -> Result<Self> {
        let n = block_type.dim();
        if dense.shape() != (n, n) {
            return Err(Error::Shape("dense matrix does not match block type".into()));
        }
        let blocks = (0..block_type.num_blocks())
            .map(|j| {
                let o = block_type.offset(j);
                let d = block_type.size(j);
                dense.view((o, o), (d, d)).into_owned()
            })
            .collect();
        Ok(BlockDiagonal { block_type, blocks })
    }

    /// Blockwise inverse; fails when any block is numerically singular
    /// (condition number above the crate-wide bound).
    pub fn inverse(&self) -> Result<BlockDiagonal> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let cond = cond_2(b);
            if !cond.is_finite() || cond > COND_LIMIT {
                return Err(Error::Singular { cond });
            }
            let inv = b.clone().try_inverse().ok_or(Error::Singular { cond })?;
            blocks.push(inv);
        }
        Ok(BlockDiagonal { block_type: self.block_type.clone(), blocks })
    }

    /// Condition number of the assembled matrix (max over blocks of the
    /// largest singular value over the smallest across all blocks).
    pub fn cond(&self) -> f64 {
        let mut hi = 0.0f64;
        let mut lo = f64::INFINITY;
        for b in &self.blocks {
            let sv = super::matrix::singular_values(b);
            if let Some(&s) = sv.first() {
                hi = hi.max(s);
            }
            if let Some(&s) = sv.last() {
                lo = lo.min(s);
            }
        }
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    }

    /// Blockwise Hermitian square root of a positive semidefinite matrix.
    pub fn hermitian_sqrt(&self, tol: f64) -> Result<BlockDiagonal> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| hermitian_sqrt(b, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockDiagonal { block_type: self.block_type.clone(), blocks })
    }

    pub fn adjoint(&self) -> BlockDiagonal {
        BlockDiagonal {
            block_type: self.block_type.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// Blockwise product `self * other`.
    pub fn compose(&self, other: &BlockDiagonal) -> Result<BlockDiagonal> {
        if other.block_type != self.block_type {
            return Err(Error::Shape("block types differ in product".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a * b)
            .collect();
        Ok(BlockDiagonal { block_type: self.block_type.clone(), blocks })
    }

    pub fn scale(&self, factor: Complex64) -> BlockDiagonal {
        BlockDiagonal {
            block_type: self.block_type.clone(),
            blocks: self.blocks.iter().map(|b| b.scale_complex(factor)).collect(),
        }
    }

    /// Largest entrywise deviation of `U* U` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        self.blocks.iter().fold(0.0, |acc, b| {
            let d = b.ncols();
            acc.max(max_abs(&(b.adjoint() * b - CMat::identity(d, d))))
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |acc, b| acc.max(max_abs(b)))
    }
}

trait ScaleComplex {
    fn scale_complex(&self, factor: Complex64) -> CMat;
}

impl ScaleComplex for CMat {
    fn scale_complex(&self, factor: Complex64) -> CMat {
        self.map(|v| v * factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::cx;

    #[test]
    fn block_type_validation() {
        assert!(BlockType::new(vec![]).is_err());
        assert!(BlockType::new(vec![1, 0]).is_err());
        let bt = BlockType::new(vec![2, 1, 3]).unwrap();
        assert_eq!(bt.dim(), 6);
        assert_eq!(bt.top(), 2);
        assert_eq!(bt.offset(2), 3);
    }

    #[test]
    fn subdiagonal_shape_check() {
        let bt = BlockType::new(vec![1, 1]).unwrap();
        // A 2x1 block where 1x1 is required.
        let bad = SubdiagonalY::new(bt.clone(), vec![CMat::zeros(2, 1)]);
        assert!(matches!(bad, Err(Error::Shape(_))));
        let ok = SubdiagonalY::new(bt, vec![CMat::from_element(1, 1, cx(1.0, 0.0))]);
        assert!(ok.is_ok());
    }

    #[test]
    fn assemble_is_strictly_subdiagonal() {
        let y = SubdiagonalY::scalar_chain(&[cx(2.0, 0.0), cx(0.0, 1.0)]);
        let dense = y.assemble();
        assert_eq!(dense[(1, 0)], cx(2.0, 0.0));
        assert_eq!(dense[(2, 1)], cx(0.0, 1.0));
        for i in 0..3 {
            for j in 0..3 {
                if !(i >= 1 && j == i - 1) {
                    assert_eq!(dense[(i, j)], cx(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn chain_products() {
        let y = SubdiagonalY::scalar_chain(&[cx(2.0, 0.0), cx(3.0, 0.0)]);
        assert_eq!(y.chain(2, 0)[(0, 0)], cx(6.0, 0.0));
        assert_eq!(y.chain(1, 1)[(0, 0)], cx(1.0, 0.0));
    }

    #[test]
    fn conjugation_scalar_case() {
        // d = (1, 1), H-normalization example: A = diag(1, 2) sends y = 1 to 2.
        let y = SubdiagonalY::scalar_chain(&[cx(1.0, 0.0)]);
        let bt = y.block_type().clone();
        let a = BlockDiagonal::new(
            bt,
            vec![CMat::from_element(1, 1, cx(1.0, 0.0)), CMat::from_element(1, 1, cx(2.0, 0.0))],
        )
        .unwrap();
        let conj = y.conjugated(&a).unwrap();
        assert!((conj.block(1)[(0, 0)] - cx(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn direct_sum_shapes() {
        let y = SubdiagonalY::scalar_chain(&[cx(1.0, 0.0)]);
        let z = SubdiagonalY::scalar_chain(&[cx(2.0, 0.0)]);
        let s = y.direct_sum(&z).unwrap();
        assert_eq!(s.block_type().sizes(), &[2, 2]);
        let b = s.block(1);
        assert_eq!(b[(0, 0)], cx(1.0, 0.0));
        assert_eq!(b[(1, 1)], cx(2.0, 0.0));
        assert_eq!(b[(0, 1)], cx(0.0, 0.0));
    }

    #[test]
    fn block_diagonal_inverse_detects_singular() {
        let bt = BlockType::new(vec![1, 1]).unwrap();
        let singular = BlockDiagonal::new(
            bt,
            vec![CMat::zeros(1, 1), CMat::identity(1, 1)],
        )
        .unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Singular { .. })));
    }
}
