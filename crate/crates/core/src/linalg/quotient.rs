//! Subquotients `sub / quot` and maps induced on them.

use super::{axpy, is_zero_vec, subspace::rref_rows, Gq, Matrix, Subspace, Vector};
use crate::error::{Error, Result};

/// A chosen basis of `sub / quot`.
///
/// Representatives are the rows of `sub` reduced modulo `quot` and brought
/// to echelon form, so their pivots avoid the pivots of `quot`.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    sub: Subspace,
    quot: Subspace,
    reps: Vec<Vector>,
    rep_pivots: Vec<usize>,
}

impl QuotientBasis {
    pub fn new(sub: &Subspace, quot: &Subspace) -> Result<Self> {
        if !quot.is_subspace_of(sub)? {
            return Err(Error::WellDefinedness(
                "quotient subspace is not contained in the subspace".into(),
            ));
        }
        let reduced = sub
            .basis()
            .iter()
            .map(|b| quot.reduce(b))
            .collect::<Result<Vec<_>>>()?;
        let nonzero: Vec<Vector> = reduced.into_iter().filter(|r| !is_zero_vec(r)).collect();
        let (reps, rep_pivots) = rref_rows(nonzero);
        Ok(Self {
            sub: sub.clone(),
            quot: quot.clone(),
            reps,
            rep_pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.reps
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn quot(&self) -> &Subspace {
        &self.quot
    }

    /// Coordinates of the class of `v` (which must lie in `sub`).
    pub fn coordinates(&self, v: &[Gq]) -> Result<Vector> {
        let w = self.quot.reduce(v)?;
        let coords: Vector = self.rep_pivots.iter().map(|&p| w[p].clone()).collect();
        let mut resid = w;
        for (c, r) in coords.iter().zip(&self.reps) {
            axpy(&mut resid, &-c, r);
        }
        if !is_zero_vec(&resid) {
            return Err(Error::WellDefinedness(
                "vector does not lie in the subspace of the quotient".into(),
            ));
        }
        Ok(coords)
    }
}

/// Matrix of the map induced by `f` from `dom_sub/dom_quot` to
/// `cod_sub/cod_quot`, in the representative bases of both quotients.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub matrix: Matrix,
    pub domain: QuotientBasis,
    pub codomain: QuotientBasis,
}

impl InducedMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel_dim(&self) -> usize {
        self.domain.dim() - self.rank()
    }
}

pub fn induced_map_on_quotient(
    f: &Matrix,
    dom_sub: &Subspace,
    dom_quot_by: &Subspace,
    cod_sub: &Subspace,
    cod_quot_by: &Subspace,
) -> Result<InducedMap> {
    if f.cols() != dom_sub.ambient_dim() || f.rows() != cod_sub.ambient_dim() {
        return Err(Error::Shape(format!(
            "map is {}x{} but domain/codomain ambients are {}/{}",
            f.rows(),
            f.cols(),
            dom_sub.ambient_dim(),
            cod_sub.ambient_dim()
        )));
    }
    if !dom_quot_by.is_subspace_of(dom_sub)? {
        return Err(Error::WellDefinedness("dom_quot_by ⊄ dom_sub".into()));
    }
    if !cod_quot_by.is_subspace_of(cod_sub)? {
        return Err(Error::WellDefinedness("cod_quot_by ⊄ cod_sub".into()));
    }
    if !dom_sub.image_under(f)?.is_subspace_of(cod_sub)? {
        return Err(Error::WellDefinedness("f(dom_sub) ⊄ cod_sub".into()));
    }
    if !dom_quot_by.image_under(f)?.is_subspace_of(cod_quot_by)? {
        return Err(Error::WellDefinedness("f(dom_quot_by) ⊄ cod_quot_by".into()));
    }
    let domain = QuotientBasis::new(dom_sub, dom_quot_by)?;
    let codomain = QuotientBasis::new(cod_sub, cod_quot_by)?;
    let mut matrix = Matrix::zeros(codomain.dim(), domain.dim());
    for (j, rep) in domain.representatives().iter().enumerate() {
        let img = f.apply(rep)?;
        for (i, c) in codomain.coordinates(&img)?.into_iter().enumerate() {
            matrix.set(i, j, c);
        }
    }
    Ok(InducedMap {
        matrix,
        domain,
        codomain,
    })
}
