//! Finite direct sums `M_{n₁} ⊕ … ⊕ M_{n_k}` stored as block-diagonal matrices.
//!
//! This is the finite-dimensional form of an atomic von Neumann algebra: the
//! minimal projections are the rank-one projections inside a single block.

use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::Projection;
use crate::linalg::{CMatrix, HermitianMatrix, PositiveContraction};
use crate::oracle::random::{complement_basis, random_positive_contraction_with, random_projection, random_unit_vector};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    sizes: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Precondition(format!("block sizes must be positive, got {sizes:?}")));
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Index ranges of the blocks inside `0..dim`.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect()
    }

    fn block_id(&self, i: usize) -> usize {
        self.blocks().iter().position(|r| r.contains(&i)).expect("index inside dim")
    }

    /// Whether every entry outside the diagonal blocks is below `PROJ`.
    pub fn contains(&self, h: &HermitianMatrix) -> bool {
        if h.dim() != self.dim() {
            return false;
        }
        let ids: Vec<usize> = (0..self.dim()).map(|i| self.block_id(i)).collect();
        let m = h.as_matrix();
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| ids[i] == ids[j] || m[(i, j)].norm() <= tol::PROJ))
    }

    fn assemble(&self, parts: &[&CMatrix]) -> HermitianMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (r, p) in self.blocks().iter().zip(parts) {
            m.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(p);
        }
        HermitianMatrix::new(m).expect("blocks are Hermitian")
    }

    /// A random positive contraction of the algebra. With `force_norm_one`, the
    /// first block carries an eigenvalue 1.
    pub fn random_element<R: Rng + ?Sized>(&self, force_norm_one: bool, rng: &mut R) -> PositiveContraction {
        let parts: Vec<CMatrix> = self
            .sizes
            .iter()
            .enumerate()
            .map(|(k, &n)| random_positive_contraction_with(n, force_norm_one && k == 0, rng).as_matrix().clone())
            .collect();
        let refs: Vec<&CMatrix> = parts.iter().collect();
        PositiveContraction::new(self.assemble(&refs)).expect("block contraction")
    }

    /// A random projection of the algebra, with a random rank in each block.
    pub fn random_projection<R: Rng + ?Sized>(&self, rng: &mut R) -> Projection {
        let parts: Vec<CMatrix> = self
            .sizes
            .iter()
            .map(|&n| {
                let rank = rng.random_range(0..=n);
                random_projection(n, rank, rng).as_matrix().clone()
            })
            .collect();
        let refs: Vec<&CMatrix> = parts.iter().collect();
        Projection::new(self.assemble(&refs)).expect("block projection")
    }

    /// A random minimal projection inside block `block`, with an orthonormal set
    /// of minimal projections completing it to the identity of the algebra.
    pub fn minimal_projection<R: Rng + ?Sized>(&self, block: usize, rng: &mut R) -> Result<(Projection, Vec<Projection>)> {
        let blocks = self.blocks();
        let r = blocks
            .get(block)
            .ok_or_else(|| Error::Precondition(format!("no block {block} (have {})", blocks.len())))?
            .clone();
        let n = self.dim();
        let xi = random_unit_vector(r.len(), rng);
        let embed = |v: &CMatrix| {
            let mut full = CMatrix::zeros(n, 1);
            full.view_mut((r.start, 0), (r.len(), 1)).copy_from(v);
            Projection::from_orthonormal(n, &full)
        };
        let xi_col = CMatrix::from_column_slice(r.len(), 1, xi.as_slice());
        let e = embed(&xi_col);
        let rest = complement_basis(&xi_col, rng);
        let mut tail: Vec<Projection> = (0..rest.ncols()).map(|j| embed(&rest.columns(j, 1).into_owned())).collect();
        for i in (0..n).filter(|i| !r.contains(i)) {
            tail.push(Projection::coordinate(n, &[i]));
        }
        Ok((e, tail))
    }
}
