//! Invariant almost complex structures on a Lie algebra.
//!
//! `J` acts on column vectors: column `c` of the matrix is `J e_c`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{
    check_len, is_zero_vec, vec_add, vec_conj, vec_scale, vec_sub, Gq, Matrix, Subspace, Vector,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostComplexStructure {
    matrix: Matrix,
    mod_h: Option<Subspace>,
}

/// Outcome of checking `J² = −Id` (or its mod-`h` variant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcsReport {
    /// Columns `c` with `J²e_c ≠ −e_c` (strict) or `(J² + Id)e_c ∉ h`.
    pub offending_columns: Vec<usize>,
    /// Basis vectors of `h` whose image leaves `h` (mod-`h` mode only).
    pub h_not_preserved: Vec<usize>,
    pub parity_ok: bool,
}

impl AcsReport {
    pub fn is_valid(&self) -> bool {
        self.offending_columns.is_empty() && self.h_not_preserved.is_empty() && self.parity_ok
    }
}

impl AlmostComplexStructure {
    /// Strict structure from a real square matrix (not yet validated).
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.is_real() {
            return Err(Error::InvalidAcs("J must be a real square matrix".into()));
        }
        Ok(Self {
            matrix,
            mod_h: None,
        })
    }

    /// Structure defined only modulo a subspace `h`.
    pub fn with_mod_h(matrix: Matrix, h: Subspace) -> Result<Self> {
        let mut s = Self::new(matrix)?;
        if h.ambient_dim() != s.dim() {
            return Err(Error::Shape("h and J live in different dimensions".into()));
        }
        s.mod_h = Some(h);
        Ok(s)
    }

    /// Builds `J` from its action on basis vectors, 1-based:
    /// `(c, &[(k, v)])` means `J e_c = Σ v·e_k`.
    pub fn from_images(n: usize, images: &[(usize, &[(usize, i64)])]) -> Result<Self> {
        let mut m = Matrix::zeros(n, n);
        for &(c, img) in images {
            for &(k, v) in img {
                m.set(k - 1, c - 1, Gq::from_int(v));
            }
        }
        Self::new(m)
    }

    /// `J₀`: `e_{2k-1} ↦ e_{2k}`, `e_{2k} ↦ −e_{2k-1}`.
    pub fn standard(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n / 2 {
            m.set(2 * k + 1, 2 * k, Gq::one());
            m.set(2 * k, 2 * k + 1, -Gq::one());
        }
        Self {
            matrix: m,
            mod_h: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn mod_h(&self) -> Option<&Subspace> {
        self.mod_h.as_ref()
    }

    pub fn is_strict(&self) -> bool {
        self.mod_h.is_none()
    }

    pub fn apply(&self, v: &[Gq]) -> Result<Vector> {
        self.matrix.apply(v)
    }

    /// `A⁺x = ½(x − iJx)`, landing in `T^{1,0}`.
    pub fn project_10(&self, x: &[Gq]) -> Result<Vector> {
        let jx = self.apply(x)?;
        let half = Gq::from_ratio(1, 2);
        Ok(vec_scale(&vec_sub(x, &vec_scale(&jx, &Gq::i())), &half))
    }

    /// `A⁻x = ½(x + iJx)`, landing in `T^{0,1}`.
    pub fn project_01(&self, x: &[Gq]) -> Result<Vector> {
        let jx = self.apply(x)?;
        let half = Gq::from_ratio(1, 2);
        Ok(vec_scale(&vec_add(x, &vec_scale(&jx, &Gq::i())), &half))
    }

    /// `J(V) ⊆ V`.
    pub fn preserves(&self, v: &Subspace) -> Result<bool> {
        Ok(v.image_under(&self.matrix)?.is_subspace_of(v)?)
    }

    pub fn ensure_strict(&self, l: &LieAlgebra) -> Result<()> {
        let r = validate_acs(l, &self.matrix)?;
        if !r.is_valid() {
            return Err(Error::InvalidAcs(format!(
                "J² ≠ −Id on columns {:?}",
                r.offending_columns.iter().map(|c| c + 1).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

/// Strict check `J² = −Id`.
pub fn validate_acs(l: &LieAlgebra, j: &Matrix) -> Result<AcsReport> {
    let n = l.dim();
    if j.rows() != n || j.cols() != n {
        return Err(Error::Shape(format!(
            "J is {}x{} but the algebra has dimension {n}",
            j.rows(),
            j.cols()
        )));
    }
    if n % 2 != 0 {
        return Err(Error::InvalidAcs(format!(
            "odd dimension {n} admits no almost complex structure"
        )));
    }
    let sq = j.mul(j)?;
    let offending_columns = (0..n)
        .filter(|&c| {
            (0..n).any(|r| {
                let want = if r == c { -Gq::one() } else { Gq::zero() };
                sq.get(r, c) != &want
            })
        })
        .collect();
    Ok(AcsReport {
        offending_columns,
        h_not_preserved: Vec::new(),
        parity_ok: true,
    })
}

/// Mod-`h` check: `J(h) ⊆ h`, `(J² + Id)(𝔤) ⊆ h`, `n − dim h` even.
pub fn validate_acs_mod_h(l: &LieAlgebra, j: &Matrix, h: &Subspace) -> Result<AcsReport> {
    let n = l.dim();
    if j.rows() != n || j.cols() != n || h.ambient_dim() != n {
        return Err(Error::Shape("J, h and the algebra disagree on dimension".into()));
    }
    let sq = j.mul(j)?.add(&Matrix::identity(n))?;
    let mut offending_columns = Vec::new();
    for c in 0..n {
        if !h.contains(&sq.column(c))? {
            offending_columns.push(c);
        }
    }
    let mut h_not_preserved = Vec::new();
    for (k, b) in h.basis().iter().enumerate() {
        if !h.contains(&j.apply(b)?)? {
            h_not_preserved.push(k);
        }
    }
    Ok(AcsReport {
        offending_columns,
        h_not_preserved,
        parity_ok: (n - h.dim()) % 2 == 0,
    })
}

/// Adapted complex frame of `𝔤^ℂ`: `m = n/2` vectors spanning `T^{1,0}`
/// followed by their conjugates, and the dual coframe.
#[derive(Clone, Debug)]
pub struct ComplexFrame {
    m: usize,
    vectors: Vec<Vector>,
    dual: Vec<Vector>,
}

impl ComplexFrame {
    pub fn half_dim(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    /// All frame vectors: `T^{1,0}` first.
    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// All dual covectors, `θ^a(f_b) = δ_ab`.
    pub fn dual(&self) -> &[Vector] {
        &self.dual
    }

    pub fn basis_10(&self) -> &[Vector] {
        &self.vectors[..self.m]
    }

    pub fn basis_01(&self) -> &[Vector] {
        &self.vectors[self.m..]
    }

    pub fn dual_10(&self) -> &[Vector] {
        &self.dual[..self.m]
    }

    pub fn dual_01(&self) -> &[Vector] {
        &self.dual[self.m..]
    }

    /// Frame coordinates `θ^a(x)` of a vector given in the `e` basis.
    pub fn coords(&self, x: &[Gq]) -> Result<Vector> {
        check_len(x, self.dim(), "frame coordinates")?;
        Ok(self.dual.iter().map(|t| crate::linalg::dot(t, x)).collect())
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn from_coords(&self, c: &[Gq]) -> Vector {
        let mut v = crate::linalg::zero_vec(self.dim());
        for (ci, f) in c.iter().zip(&self.vectors) {
            crate::linalg::axpy(&mut v, ci, f);
        }
        v
    }
}

/// `T^{1,0}` basis `{A⁺e_a}` for the first `a` (in order) that are independent,
/// the conjugate `T^{0,1}` basis, and the dual coframe.
pub fn split_10_01(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<ComplexFrame> {
    j.ensure_strict(l)?;
    let n = l.dim();
    let candidates = (0..n)
        .map(|a| j.project_10(&crate::linalg::unit_vec(n, a)))
        .collect::<Result<Vec<_>>>()?;
    let picked = Subspace::greedy_independent(n, &candidates)?;
    if picked.len() * 2 != n {
        return Err(Error::internal(
            "acs",
            format!("+i eigenspace has dimension {} in dimension {n}", picked.len()),
        ));
    }
    let mut vectors: Vec<Vector> = picked.iter().map(|&a| candidates[a].clone()).collect();
    let conj: Vec<Vector> = vectors.iter().map(|v| vec_conj(v)).collect();
    vectors.extend(conj);
    let f = Matrix::from_columns(n, &vectors)?;
    let inv = f
        .inverse()
        .ok_or_else(|| Error::internal("acs", "adapted frame is singular"))?;
    Ok(ComplexFrame {
        m: n / 2,
        vectors,
        dual: inv.row_vecs(),
    })
}

/// `N(x, y) = [Jx,Jy] − J[Jx,y] − J[x,Jy] + J²[x,y]`.
pub fn nijenhuis(l: &LieAlgebra, j: &AlmostComplexStructure, x: &[Gq], y: &[Gq]) -> Result<Vector> {
    let jx = j.apply(x)?;
    let jy = j.apply(y)?;
    let a = l.bracket(&jx, &jy)?;
    let b = j.apply(&l.bracket(&jx, y)?)?;
    let c = j.apply(&l.bracket(x, &jy)?)?;
    let d = j.apply(&j.apply(&l.bracket(x, y)?)?)?;
    Ok(vec_add(&vec_sub(&vec_sub(&a, &b), &c), &d))
}

/// Span of `N(e_i, e_j)` over basis pairs.
pub fn nijenhuis_image(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<Subspace> {
    let n = l.dim();
    let e = |i| crate::linalg::unit_vec(n, i);
    let mut vals = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let v = nijenhuis(l, j, &e(a), &e(b))?;
            if !is_zero_vec(&v) {
                vals.push(v);
            }
        }
    }
    Subspace::span(n, &vals)
}

/// Matrix of `X ↦ [u, JX] − J[u, X]`, i.e. `(𝓛_u J)`.
pub fn lie_derivative_endo(l: &LieAlgebra, j: &AlmostComplexStructure, u: &[Gq]) -> Result<Matrix> {
    let n = l.dim();
    check_len(u, n, "lie_derivative_endo")?;
    let cols = (0..n)
        .map(|b| {
            let eb = crate::linalg::unit_vec(n, b);
            let first = l.bracket(u, &j.apply(&eb)?)?;
            let second = j.apply(&l.bracket(u, &eb)?)?;
            Ok(vec_sub(&first, &second))
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(n, &cols)
}

/// Image of `𝓛_u J`.
pub fn lie_derivative_image(l: &LieAlgebra, j: &AlmostComplexStructure, u: &[Gq]) -> Result<Subspace> {
    Ok(crate::linalg::image(&lie_derivative_endo(l, j, u)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, unit_vec, vec_neg};

    fn kt() -> LieAlgebra {
        LieAlgebra::from_int_table(4, &[(1, 2, &[(3, 1)])]).unwrap()
    }

    pub(crate) fn j_kt() -> AlmostComplexStructure {
        AlmostComplexStructure::from_images(
            4,
            &[(1, &[(3, 1)]), (3, &[(1, -1)]), (2, &[(4, 1)]), (4, &[(2, -1)])],
        )
        .unwrap()
    }

    fn gi(re: (i64, i64), im: (i64, i64)) -> Gq {
        Gq::new(crate::linalg::ratio(re.0, re.1), crate::linalg::ratio(im.0, im.1))
    }

    #[test]
    fn validation() {
        let l = LieAlgebra::abelian(4);
        assert!(validate_acs(&l, AlmostComplexStructure::standard(4).matrix())
            .unwrap()
            .is_valid());
        let r = validate_acs(&l, &Matrix::identity(4)).unwrap();
        assert_eq!(r.offending_columns, vec![0, 1, 2, 3]);
        assert!(validate_acs(&kt(), j_kt().matrix()).unwrap().is_valid());
        let odd = LieAlgebra::abelian(3);
        assert!(matches!(
            validate_acs(&odd, &Matrix::identity(3)),
            Err(Error::InvalidAcs(_))
        ));
    }

    #[test]
    fn split_standard_r2() {
        let l = LieAlgebra::abelian(2);
        let f = split_10_01(&l, &AlmostComplexStructure::standard(2)).unwrap();
        assert_eq!(f.basis_10(), &[vec![gi((1, 2), (0, 1)), gi((0, 1), (-1, 2))]]);
        assert_eq!(f.dual_10(), &[vec![gi((1, 1), (0, 1)), gi((0, 1), (1, 1))]]);
    }

    #[test]
    fn split_kt() {
        let f = split_10_01(&kt(), &j_kt()).unwrap();
        let h = gi((1, 2), (0, 1));
        let mh = gi((0, 1), (-1, 2));
        let z = Gq::zero();
        assert_eq!(
            f.basis_10(),
            &[
                vec![h.clone(), z.clone(), mh.clone(), z.clone()],
                vec![z.clone(), h.clone(), z.clone(), mh.clone()]
            ]
        );
        let one = Gq::one();
        assert_eq!(
            f.dual_10(),
            &[
                vec![one.clone(), z.clone(), Gq::i(), z.clone()],
                vec![z.clone(), one.clone(), z.clone(), Gq::i()]
            ]
        );
        for (v, w) in f.basis_10().iter().zip(f.basis_01()) {
            assert_eq!(&vec_conj(v), w);
            assert_eq!(j_kt().apply(v).unwrap(), vec_scale(v, &Gq::i()));
        }
        for t in f.dual_10() {
            for w in f.basis_01() {
                assert!(crate::linalg::dot(t, w).is_zero());
            }
        }
    }

    #[test]
    fn nijenhuis_examples() {
        let l = kt();
        let j = j_kt();
        let n12 = nijenhuis(&l, &j, &unit_vec(4, 0), &unit_vec(4, 1)).unwrap();
        assert_eq!(n12, int_vec(&[0, 0, -1, 0]));
        let n32 = nijenhuis(&l, &j, &unit_vec(4, 2), &unit_vec(4, 1)).unwrap();
        assert_eq!(n32, int_vec(&[-1, 0, 0, 0]));
        assert_eq!(n32, vec_neg(&j.apply(&n12).unwrap()));
        let ab = LieAlgebra::abelian(4);
        let x = int_vec(&[1, 2, 3, 4]);
        assert!(is_zero_vec(&nijenhuis(&ab, &j, &x, &unit_vec(4, 1)).unwrap()));
    }

    #[test]
    fn nijenhuis_images() {
        let l = kt();
        assert!(nijenhuis_image(&LieAlgebra::abelian(4), &j_kt()).unwrap().is_zero());
        let im = nijenhuis_image(&l, &j_kt()).unwrap();
        assert_eq!(im, Subspace::span(4, &[unit_vec(4, 0), unit_vec(4, 2)]).unwrap());
        // e1↦e2, e3↦e4 is integrable on KT
        let j0 = AlmostComplexStructure::standard(4);
        assert!(nijenhuis_image(&l, &j0).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let l = kt();
        let j = j_kt();
        assert!(lie_derivative_endo(&LieAlgebra::abelian(4), &j, &unit_vec(4, 0))
            .unwrap()
            .is_zero());
        assert!(lie_derivative_endo(&l, &j, &unit_vec(4, 2)).unwrap().is_zero());
        let m = lie_derivative_endo(&l, &j, &unit_vec(4, 0)).unwrap();
        assert_eq!(m.apply(&unit_vec(4, 1)).unwrap(), unit_vec(4, 0));
        let anti = m.mul(j.matrix()).unwrap().add(&j.matrix().mul(&m).unwrap()).unwrap();
        assert!(anti.is_zero());
    }
}
