//! Homogeneous spaces `G/H` at the level of `(𝔤, 𝔥, J)`, with `J` an
//! endomorphism of `𝔤` defined modulo `𝔥`.

use crate::acs::{validate_acs_mod_h, AlmostComplexStructure};
use crate::error::{Error, Result};
use crate::lie::{subalgebra_report, LieAlgebra};
use crate::linalg::{is_zero_vec, unit_vec, vec_add, vec_sub, Gq, Matrix, Subspace, Vector};

#[derive(Clone, Debug)]
pub struct HomogeneousPair {
    pub g: LieAlgebra,
    pub h: Subspace,
    pub j: AlmostComplexStructure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub jacobi_ok: bool,
    pub h_subalgebra: bool,
    /// Basis vectors of `h` (0-based) with `J h_k ∉ h`.
    pub h_not_preserved: Vec<usize>,
    /// Columns `c` with `(J² + Id)e_c ∉ h`.
    pub square_offending: Vec<usize>,
    pub parity_ok: bool,
}

impl PairReport {
    pub fn is_valid(&self) -> bool {
        self.jacobi_ok
            && self.h_subalgebra
            && self.h_not_preserved.is_empty()
            && self.square_offending.is_empty()
            && self.parity_ok
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.jacobi_ok {
            v.push("g fails the Jacobi identity".to_string());
        }
        if !self.h_subalgebra {
            v.push("h is not a subalgebra".to_string());
        }
        if !self.h_not_preserved.is_empty() {
            v.push(format!("J(h) ⊄ h at basis vectors {:?}", self.h_not_preserved));
        }
        if !self.square_offending.is_empty() {
            let cols: Vec<usize> = self.square_offending.iter().map(|c| c + 1).collect();
            v.push(format!("(J² + Id)e_c ∉ h for c in {cols:?}"));
        }
        if !self.parity_ok {
            v.push("dim g − dim h is odd".to_string());
        }
        v
    }
}

impl HomogeneousPair {
    pub fn new(g: LieAlgebra, h: Subspace, j: Matrix) -> Result<Self> {
        let j = AlmostComplexStructure::with_mod_h(j, h.clone())?;
        if h.ambient_dim() != g.dim() {
            return Err(Error::Shape("h and g live in different dimensions".into()));
        }
        Ok(Self { g, h, j })
    }

    /// The Lie-group case `h = 0`.
    pub fn lie_group(g: LieAlgebra, j: &AlmostComplexStructure) -> Result<Self> {
        let n = g.dim();
        Self::new(g, Subspace::zero(n), j.matrix().clone())
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    fn japply(&self, v: &[Gq]) -> Result<Vector> {
        self.j.apply(v)
    }

    /// Representative of `v + h` with no component along the pivots of `h`.
    pub fn reduce(&self, v: &[Gq]) -> Result<Vector> {
        self.h.reduce(v)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let r = validate_pair(self)?;
        if !r.is_valid() {
            return Err(Error::Homogeneous(format!(
                "invalid pair: {}",
                r.violations().join("; ")
            )));
        }
        Ok(())
    }

    /// `[JA,JB] − J[JA,B] − J[A,JB] − [A,B]`.
    pub fn nijenhuis(&self, a: &[Gq], b: &[Gq]) -> Result<Vector> {
        let g = &self.g;
        let ja = self.japply(a)?;
        let jb = self.japply(b)?;
        let t1 = g.bracket(&ja, &jb)?;
        let t2 = self.japply(&g.bracket(&ja, b)?)?;
        let t3 = self.japply(&g.bracket(a, &jb)?)?;
        let t4 = g.bracket(a, b)?;
        Ok(vec_sub(&vec_sub(&vec_sub(&t1, &t2), &t3), &t4))
    }

    /// Span of `N(e_i, e_j)` over basis pairs.
    pub fn nijenhuis_image(&self) -> Result<Subspace> {
        let n = self.dim();
        let mut vs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = self.nijenhuis(&unit_vec(n, a), &unit_vec(n, b))?;
                if !is_zero_vec(&v) {
                    vs.push(v);
                }
            }
        }
        Subspace::span(n, &vs)
    }
}

pub fn validate_pair(p: &HomogeneousPair) -> Result<PairReport> {
    let acs = validate_acs_mod_h(&p.g, p.j.matrix(), &p.h)?;
    Ok(PairReport {
        jacobi_ok: p.g.validate().is_valid(),
        h_subalgebra: subalgebra_report(&p.g, &p.h)?.is_subalgebra,
        h_not_preserved: acs.h_not_preserved,
        square_offending: acs.offending_columns,
        parity_ok: acs.parity_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// `(k, a, defect)`: basis vector `k` of `h`, basis index `a` of `g`.
    pub witness: Option<(usize, usize, Vector)>,
}

/// `[H, JA] − J[H, A] ∈ h` for all basis `H ∈ h`, `A ∈ g`.
pub fn invariance_check(p: &HomogeneousPair) -> Result<InvarianceReport> {
    p.ensure_valid()?;
    let n = p.dim();
    for (k, hv) in p.h.basis().iter().enumerate() {
        for a in 0..n {
            let e = unit_vec(n, a);
            let defect = vec_sub(
                &p.g.bracket(hv, &p.japply(&e)?)?,
                &p.japply(&p.g.bracket(hv, &e)?)?,
            );
            if !p.h.contains(&defect)? {
                return Ok(InvarianceReport {
                    invariant: false,
                    witness: Some((k, a, defect)),
                });
            }
        }
    }
    Ok(InvarianceReport {
        invariant: true,
        witness: None,
    })
}

/// Canonical representative of the class of `−N(a, b)` in `g/h`.
pub fn base_nijenhuis(p: &HomogeneousPair, a: &[Gq], b: &[Gq]) -> Result<Vector> {
    let n = p.nijenhuis(a, b)?;
    p.reduce(&n.iter().map(|x| -x).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub holds: bool,
    /// Basis indices `(a, k)` and the offending vector `[JA,N_k] − J[A,N_k]`.
    pub witness: Option<(usize, usize, Vector)>,
    pub ideal_shortcut: bool,
}

/// `[JA, N] − J[A, N] ∈ Im N + h` for all `A` and all `N` in `Im N`.
pub fn minimal_homogeneous_check(p: &HomogeneousPair) -> Result<MinimalityReport> {
    minimal_check(p, true)
}

/// [`minimal_homogeneous_check`] without the ideal shortcut.
pub fn minimal_homogeneous_check_full(p: &HomogeneousPair) -> Result<MinimalityReport> {
    minimal_check(p, false)
}

fn minimal_check(p: &HomogeneousPair, shortcut: bool) -> Result<MinimalityReport> {
    p.ensure_valid()?;
    let im = p.nijenhuis_image()?;
    if shortcut && subalgebra_report(&p.g, &im)?.is_ideal {
        return Ok(MinimalityReport {
            holds: true,
            witness: None,
            ideal_shortcut: true,
        });
    }
    let target = im.sum(&p.h)?;
    let n = p.dim();
    for a in 0..n {
        let e = unit_vec(n, a);
        let je = p.japply(&e)?;
        for (k, nv) in im.basis().iter().enumerate() {
            let v = vec_sub(&p.g.bracket(&je, nv)?, &p.japply(&p.g.bracket(&e, nv)?)?);
            if !target.contains(&v)? {
                return Ok(MinimalityReport {
                    holds: false,
                    witness: Some((a, k, v)),
                    ideal_shortcut: false,
                });
            }
        }
    }
    Ok(MinimalityReport {
        holds: true,
        witness: None,
        ideal_shortcut: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationReport {
    pub applicable: bool,
    /// `dim (Im N + h)/h`.
    pub dim_im_n: usize,
    pub subalgebra: bool,
    pub ideal: bool,
    pub fibers_complex: bool,
    pub transverse_complex: bool,
}

/// Foliation data of `Im N` when the minimality criterion holds.
pub fn fibration_report(p: &HomogeneousPair) -> Result<FibrationReport> {
    let min = minimal_homogeneous_check(p)?;
    let im = p.nijenhuis_image()?;
    let dist = im.sum(&p.h)?;
    let dim_im_n = dist.dim() - p.h.dim();
    if !min.holds {
        return Ok(FibrationReport {
            applicable: false,
            dim_im_n,
            subalgebra: false,
            ideal: false,
            fibers_complex: false,
            transverse_complex: false,
        });
    }
    let sub = subalgebra_report(&p.g, &dist)?;
    let fibers_complex = if dim_im_n == 2 {
        true
    } else {
        nijenhuis_confined(p, &im)?
    };
    let mut transverse_complex = p.j.preserves(&dist)? && sub.is_subalgebra;
    for u in dist.basis() {
        for x in 0..p.dim() {
            let e = unit_vec(p.dim(), x);
            let v = vec_sub(
                &p.g.bracket(u, &p.japply(&e)?)?,
                &p.japply(&p.g.bracket(u, &e)?)?,
            );
            if !dist.contains(&v)? {
                transverse_complex = false;
            }
        }
    }
    Ok(FibrationReport {
        applicable: true,
        dim_im_n,
        subalgebra: sub.is_subalgebra,
        ideal: sub.is_ideal,
        fibers_complex,
        transverse_complex,
    })
}

/// `N(x, y) ∈ h` for all `x, y` in `im`.
pub fn nijenhuis_confined(p: &HomogeneousPair, im: &Subspace) -> Result<bool> {
    let b = im.basis();
    for (i, x) in b.iter().enumerate() {
        for y in &b[i + 1..] {
            if !p.h.contains(&p.nijenhuis(x, y)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `J + K` for a matrix `K` with image in `h` and `K(h) ⊆ h`.
pub fn shifted_lift(p: &HomogeneousPair, k: &Matrix) -> Result<HomogeneousPair> {
    let jm = p.j.matrix().add(k)?;
    HomogeneousPair::new(p.g.clone(), p.h.clone(), jm)
}

/// `N(Ja, b) + J·N(a, b) ∈ h`.
pub fn j_antilinearity_defect(p: &HomogeneousPair, a: &[Gq], b: &[Gq]) -> Result<Vector> {
    let lhs = p.nijenhuis(&p.japply(a)?, b)?;
    let rhs = p.japply(&p.nijenhuis(a, b)?)?;
    p.reduce(&vec_add(&lhs, &rhs))
}
