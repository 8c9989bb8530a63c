use crate::lattice::{IntMatrix, IntVector, LatticeError};

use super::{Fan, FanError};

/// A lattice homomorphism `Z^src -> Z^dst`, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeHom {
    matrix: IntMatrix,
}

impl LatticeHom {
    pub fn new(matrix: IntMatrix) -> Self {
        LatticeHom { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        LatticeHom { matrix: IntMatrix::identity(dim) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &IntVector) -> Result<IntVector, LatticeError> {
        self.matrix.apply(v)
    }

    pub(crate) fn check_shape(&self, src: &Fan, dst: &Fan) -> Result<(), FanError> {
        if self.source_dim() != src.dim() || self.target_dim() != dst.dim() {
            return Err(FanError::HomShape {
                rows: self.target_dim(),
                cols: self.source_dim(),
                src: src.dim(),
                dst: dst.dim(),
            });
        }
        Ok(())
    }
}

/// True iff `h` maps every cone of `src` into some cone of `dst`.
///
/// It suffices to check maximal cones of `src` against maximal cones of `dst`:
/// a cone of `src` maps into a cone of `dst` iff the images of its generators
/// all lie in one cone.
pub fn is_toric_morphism(h: &LatticeHom, src: &Fan, dst: &Fan) -> Result<bool, FanError> {
    h.check_shape(src, dst)?;
    let images: Vec<IntVector> = src.rays().iter().map(|r| h.apply(r)).collect::<Result<_, _>>()?;
    Ok(src.cones().iter().all(|cone| {
        dst.cones().iter().any(|target| cone.rays().iter().all(|&i| dst.cone_contains(target, &images[i])))
    }))
}
