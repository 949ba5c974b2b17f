//! Transverse forms, transverse Dolbeault cohomology, `μ̄`-cohomology and
//! the generalized Dolbeault cohomology built on it.
//!
//! All dimensions are for the complex of invariant forms.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::acs::{lie_derivative_endo, nijenhuis_image};
use crate::error::{Error, Result};
use crate::flag::DerivedFlag;
use crate::forms::{ce_d, lie_derivative, ComponentOperators, FormSpace};
use crate::lie::subalgebra_report;
use crate::linalg::{
    fmt_vector, induced_map_on_quotient, kernel, InducedMap, Matrix, Subspace, Vector,
};

/// Forms of each bidegree annihilated by `ι(F)` and `𝓛_F` for all `F` in a
/// distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransverseModule {
    pub distribution: Subspace,
    /// Subspaces of the `(p, q)` coefficient spaces.
    pub spaces: BTreeMap<(usize, usize), Subspace>,
}

impl TransverseModule {
    pub fn space(&self, p: usize, q: usize) -> &Subspace {
        &self.spaces[&(p, q)]
    }

    pub fn dims(&self) -> BTreeMap<(usize, usize), usize> {
        self.spaces.iter().map(|(&k, s)| (k, s.dim())).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Trans,
    MuBar,
    Cw,
}

/// Dimensions of one cohomology theory, keyed by bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub theory: Theory,
    pub dims: BTreeMap<(usize, usize), usize>,
}

impl CohomologyTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Nonzero entries only.
    pub fn support(&self) -> BTreeMap<(usize, usize), usize> {
        self.dims
            .iter()
            .filter(|(_, &d)| d != 0)
            .map(|(&k, &d)| (k, d))
            .collect()
    }
}

impl Serialize for CohomologyTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.dims.len()))?;
        for ((p, q), d) in &self.dims {
            map.serialize_entry(&format!("{p},{q}"), d)?;
        }
        map.end()
    }
}

/// Parses a `"p,q"` key.
pub fn parse_bidegree(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn columns_matrix(n: usize, sub: &Subspace) -> Result<Matrix> {
    Matrix::from_columns(n, sub.basis())
}

/// `f(sub)` for a block matrix `f`.
pub fn restricted_image(f: &Matrix, sub: &Subspace) -> Result<Subspace> {
    sub.image_under(f)
}

/// `ker f ∩ sub`.
pub fn restricted_kernel(f: &Matrix, sub: &Subspace) -> Result<Subspace> {
    let n = sub.ambient_dim();
    if sub.dim() == 0 {
        return Ok(Subspace::zero(n));
    }
    let b = columns_matrix(n, sub)?;
    let k = kernel(&f.mul(&b)?);
    let vs = k
        .basis()
        .iter()
        .map(|c| b.apply(c))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(n, &vs)
}

/// Joint kernel of `ι(F)` and `𝓛_F` on `Ω^{p,q}`, cut down one operator at a
/// time.
fn joint_kernel(space: &FormSpace, p: usize, q: usize, gens: &[Vector]) -> Result<Subspace> {
    let k = p + q;
    let mut kept = Subspace::full(space.basis(p, q).len());
    let coords = gens
        .iter()
        .map(|g| space.frame().coords(g))
        .collect::<Result<Vec<_>>>()?;
    if k > 0 {
        for c in &coords {
            if kept.is_zero() {
                return Ok(kept);
            }
            let ct = space.bidegree_map(p, q, k - 1, |f| f.contract(c))?;
            kept = restricted_kernel(&ct, &kept)?;
        }
    }
    for c in &coords {
        if kept.is_zero() {
            break;
        }
        let lt = space.bidegree_map(p, q, k, |f| lie_derivative(space.frame_constants(), c, f))?;
        kept = restricted_kernel(&lt, &kept)?;
    }
    Ok(kept)
}

/// Same system on the whole of `Λ^k`.
fn annihilator_system_degree(space: &FormSpace, k: usize, gens: &[Vector], with_lie: bool) -> Result<Matrix> {
    let cols = space.degree_dim(k);
    let mut rows: Vec<Vector> = Vec::new();
    for g in gens {
        let c = space.frame().coords(g)?;
        if k > 0 {
            rows.extend(space.degree_map(k, k - 1, |f| f.contract(&c))?.row_vecs());
        }
        if with_lie {
            let lt = space.degree_map(k, k, |f| lie_derivative(space.frame_constants(), &c, f))?;
            rows.extend(lt.row_vecs());
        }
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, cols));
    }
    Matrix::from_rows(&rows)
}

/// Checks that `d` is `J`-stable and a subalgebra.
fn check_distribution(space: &FormSpace, d: &Subspace) -> Result<()> {
    let j = space.acs();
    let l = space.algebra();
    for b in d.basis() {
        let jb = j.apply(b)?;
        if !d.contains(&jb)? {
            return Err(Error::Precondition(format!(
                "distribution is not J-stable: J({}) = {} leaves it",
                fmt_vector(b),
                fmt_vector(&jb)
            )));
        }
    }
    let r = subalgebra_report(l, d)?;
    if let Some((u, v, w)) = r.subalgebra_witness {
        return Err(Error::Precondition(format!(
            "distribution is not involutive: [{}, {}] = {}",
            fmt_vector(&u),
            fmt_vector(&v),
            fmt_vector(&w)
        )));
    }
    Ok(())
}

pub fn transverse_module(space: &FormSpace, d: &Subspace) -> Result<TransverseModule> {
    check_distribution(space, d)?;
    transverse_module_unchecked(space, d)
}

/// The joint kernel without the `J`-stability and involutivity checks.
pub fn transverse_module_unchecked(space: &FormSpace, d: &Subspace) -> Result<TransverseModule> {
    let mut spaces = BTreeMap::new();
    for (p, q) in space.bidegrees() {
        spaces.insert((p, q), joint_kernel(space, p, q, d.basis())?);
    }
    Ok(TransverseModule {
        distribution: d.clone(),
        spaces,
    })
}

/// Joint kernel of `ι(F)`, `𝓛_F` on all of `Λ^k`, with no grading imposed.
pub fn ungraded_transverse_forms(space: &FormSpace, d: &Subspace, k: usize) -> Result<Subspace> {
    Ok(kernel(&annihilator_system_degree(space, k, d.basis(), true)?))
}

/// Closure properties of the flag limit that make it carry a transverse
/// complex structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransverseClosure {
    pub j_stable: bool,
    pub subalgebra: bool,
    pub lie_derivative_closed: bool,
    pub contains_nijenhuis_image: bool,
}

impl TransverseClosure {
    pub fn holds(&self) -> bool {
        self.j_stable && self.subalgebra && self.lie_derivative_closed && self.contains_nijenhuis_image
    }
}

pub fn transverse_closure(space: &FormSpace, d: &Subspace) -> Result<TransverseClosure> {
    let l = space.algebra();
    let j = space.acs();
    let mut lie_derivative_closed = true;
    for u in d.basis() {
        let img = crate::linalg::image(&lie_derivative_endo(l, j, u)?);
        if !img.is_subspace_of(d)? {
            lie_derivative_closed = false;
            break;
        }
    }
    Ok(TransverseClosure {
        j_stable: j.preserves(d)?,
        subalgebra: subalgebra_report(l, d)?.is_subalgebra,
        lie_derivative_closed,
        contains_nijenhuis_image: nijenhuis_image(l, j)?.is_subspace_of(d)?,
    })
}

#[derive(Clone, Debug)]
pub struct TransverseCohomology {
    pub module: TransverseModule,
    pub table: CohomologyTable,
    pub closure: TransverseClosure,
}

/// `H^{p,q} = ker ∂̄ / im ∂̄` on the transverse module of `distribution`.
pub fn transverse_dolbeault_for(
    space: &FormSpace,
    ops: &ComponentOperators,
    distribution: &Subspace,
) -> Result<TransverseCohomology> {
    let closure = transverse_closure(space, distribution)?;
    if !closure.holds() {
        return Err(Error::internal(
            "cohomology",
            format!("flag limit lacks transverse closure: {closure:?}"),
        ));
    }
    let module = transverse_module(space, distribution)?;
    let m = space.half_dim();
    let mut ranks = BTreeMap::new();
    for (p, q) in space.bidegrees() {
        let sub = module.space(p, q);
        for (name, op) in [("μ", &ops.mu), ("μ̄", &ops.mu_bar)] {
            if op.block(p, q).rows() > 0 && !restricted_image(op.block(p, q), sub)?.is_zero() {
                return Err(Error::internal(
                    "cohomology",
                    format!("{name} does not vanish on transverse ({p},{q})-forms"),
                ));
            }
        }
        for (name, op, tp, tq) in [("∂", &ops.del, p + 1, q), ("∂̄", &ops.del_bar, p, q + 1)] {
            if tp > m || tq > m {
                continue;
            }
            let img = restricted_image(op.block(p, q), sub)?;
            if !img.is_subspace_of(module.space(tp, tq))? {
                return Err(Error::internal(
                    "cohomology",
                    format!("{name} maps transverse ({p},{q})-forms outside the transverse module"),
                ));
            }
        }
        let r = if q < m {
            restricted_image(ops.del_bar.block(p, q), sub)?.dim()
        } else {
            0
        };
        ranks.insert((p, q), r);
    }
    let mut dims = BTreeMap::new();
    for (p, q) in space.bidegrees() {
        let incoming = if q > 0 { ranks[&(p, q - 1)] } else { 0 };
        dims.insert((p, q), module.space(p, q).dim() - ranks[&(p, q)] - incoming);
    }
    Ok(TransverseCohomology {
        module,
        table: CohomologyTable {
            theory: Theory::Trans,
            dims,
        },
        closure,
    })
}

/// Transverse Dolbeault cohomology for the involutive limit of the flag.
pub fn transverse_dolbeault(
    space: &FormSpace,
    ops: &ComponentOperators,
    flag: &DerivedFlag,
) -> Result<TransverseCohomology> {
    transverse_dolbeault_for(space, ops, &flag.limit)
}

/// `ker μ̄ |Ω^{p,q}` and `im μ̄ |Ω^{p+1,q-2}` for one bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuBarPiece {
    pub kernel: Subspace,
    pub image: Subspace,
}

impl MuBarPiece {
    pub fn dim(&self) -> usize {
        self.kernel.dim() - self.image.dim()
    }
}

#[derive(Clone, Debug)]
pub struct MuBarCohomology {
    pub pieces: BTreeMap<(usize, usize), MuBarPiece>,
    pub table: CohomologyTable,
}

pub fn mu_bar_cohomology(space: &FormSpace, ops: &ComponentOperators) -> Result<MuBarCohomology> {
    let m = space.half_dim();
    let mut pieces = BTreeMap::new();
    for (p, q) in space.bidegrees() {
        let n = space.basis(p, q).len();
        let block = ops.mu_bar.block(p, q);
        let ker = if block.rows() == 0 {
            Subspace::full(n)
        } else {
            kernel(block)
        };
        let image = if p < m && q >= 2 {
            crate::linalg::image(ops.mu_bar.block(p + 1, q - 2))
        } else {
            Subspace::zero(n)
        };
        if !image.is_subspace_of(&ker)? {
            return Err(Error::internal(
                "cohomology",
                format!("im μ̄ ⊄ ker μ̄ at ({p},{q})"),
            ));
        }
        pieces.insert((p, q), MuBarPiece { kernel: ker, image });
    }
    let dims = pieces.iter().map(|(&k, v)| (k, v.dim())).collect();
    Ok(MuBarCohomology {
        pieces,
        table: CohomologyTable {
            theory: Theory::MuBar,
            dims,
        },
    })
}

#[derive(Clone, Debug)]
pub struct GeneralizedDolbeault {
    /// `∂̃ : H_μ̄^{p,q} → H_μ̄^{p,q+1}` for `q < m`.
    pub induced: BTreeMap<(usize, usize), InducedMap>,
    pub table: CohomologyTable,
}

pub fn generalized_dolbeault(
    space: &FormSpace,
    ops: &ComponentOperators,
    mubar: &MuBarCohomology,
) -> Result<GeneralizedDolbeault> {
    let m = space.half_dim();
    let mut induced = BTreeMap::new();
    for (p, q) in space.bidegrees() {
        if q == m {
            continue;
        }
        let dom = &mubar.pieces[&(p, q)];
        let cod = &mubar.pieces[&(p, q + 1)];
        let map = induced_map_on_quotient(
            ops.del_bar.block(p, q),
            &dom.kernel,
            &dom.image,
            &cod.kernel,
            &cod.image,
        )
        .map_err(|e| Error::internal("cohomology", format!("∂̃ at ({p},{q}): {e}")))?;
        induced.insert((p, q), map);
    }
    for (p, q) in space.bidegrees() {
        if q + 2 > m {
            continue;
        }
        let sq = induced[&(p, q + 1)].matrix.mul(&induced[&(p, q)].matrix)?;
        if !sq.is_zero() {
            return Err(Error::internal("cohomology", format!("∂̃² ≠ 0 at ({p},{q})")));
        }
    }
    let rank = |p: usize, q: usize| induced.get(&(p, q)).map_or(0, InducedMap::rank);
    let mut dims = BTreeMap::new();
    for (p, q) in space.bidegrees() {
        let incoming = if q > 0 { rank(p, q - 1) } else { 0 };
        dims.insert((p, q), mubar.pieces[&(p, q)].dim() - rank(p, q) - incoming);
    }
    Ok(GeneralizedDolbeault {
        induced,
        table: CohomologyTable {
            theory: Theory::Cw,
            dims,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P0Row {
    pub p: usize,
    pub trans: usize,
    pub dol: usize,
    pub equal: bool,
}

/// The `(p, 0)` coincidence of transverse and generalized Dolbeault cohomology.
pub fn compare_p0(trans: &CohomologyTable, cw: &CohomologyTable, half_dim: usize) -> Result<Vec<P0Row>> {
    let rows: Vec<P0Row> = (0..=half_dim)
        .map(|p| {
            let (a, b) = (trans.get(p, 0), cw.get(p, 0));
            P0Row {
                p,
                trans: a,
                dol: b,
                equal: a == b,
            }
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| !r.equal) {
        return Err(Error::TheoremViolation(format!(
            "p = {}: transverse {} vs generalized {}",
            bad.p, bad.trans, bad.dol
        )));
    }
    Ok(rows)
}

/// Rank of `H_trans^{p,q} → H_Dol^{p,q}`, sending a `∂̄`-closed transverse
/// form to its class.
pub fn comparison_map_rank(
    space: &FormSpace,
    ops: &ComponentOperators,
    module: &TransverseModule,
    mubar: &MuBarCohomology,
    p: usize,
    q: usize,
) -> Result<usize> {
    let m = space.half_dim();
    let piece = &mubar.pieces[&(p, q)];
    let closed = if q < m {
        restricted_kernel(ops.del_bar.block(p, q), module.space(p, q))?
    } else {
        module.space(p, q).clone()
    };
    let mut w = piece.image.clone();
    if q > 0 {
        let below = &mubar.pieces[&(p, q - 1)];
        w = w.sum(&restricted_image(ops.del_bar.block(p, q - 1), &below.kernel)?)?;
    }
    Ok(closed.sum(&w)?.dim() - w.dim())
}

/// `dim {ω ∈ Λ^p : ι(Z)ω = 0, 𝓛_Z ω = 0 for Z ∈ T^{0,1} + D^ℂ}`.
pub fn hp0_transverse_dimension(space: &FormSpace, d: &Subspace, p: usize) -> Result<usize> {
    let mut gens: Vec<Vector> = space.frame().basis_01().to_vec();
    gens.extend(d.basis().iter().cloned());
    let span = Subspace::span(space.dim(), &gens)?;
    Ok(kernel(&annihilator_system_degree(space, p, span.basis(), true)?).dim())
}

/// A graded family of subspaces `V_k ⊆ Λ^k`, `k = 0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormFamily {
    pub by_degree: Vec<Subspace>,
}

impl FormFamily {
    pub fn from_module(space: &FormSpace, module: &TransverseModule) -> Result<Self> {
        let mut by_degree = Vec::new();
        for k in 0..=space.dim() {
            let mut vs = Vec::new();
            for (p, q) in space.bidegrees_of_degree(k) {
                for b in module.space(p, q).basis() {
                    vs.push(space.embed(p, q, b));
                }
            }
            by_degree.push(Subspace::span(space.degree_dim(k), &vs)?);
        }
        Ok(Self { by_degree })
    }

    pub fn ungraded(space: &FormSpace, d: &Subspace) -> Result<Self> {
        let by_degree = (0..=space.dim())
            .map(|k| ungraded_transverse_forms(space, d, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { by_degree })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(Subspace::dim).collect()
    }

    pub fn is_subfamily_of(&self, o: &FormFamily) -> Result<bool> {
        for (a, b) in self.by_degree.iter().zip(&o.by_degree) {
            if !a.is_subspace_of(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The three defining properties of the transverse module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleProperties {
    /// `ι(X)ω = 0` for `X ∈ Im N`.
    pub annihilated_by_nijenhuis_image: bool,
    /// `dV_k ⊆ V_{k+1}`.
    pub d_stable: bool,
    /// `V_k = ⊕_{p+q=k} (V_k ∩ Ω^{p,q})`.
    pub splits: bool,
}

impl SubmoduleProperties {
    pub fn all(&self) -> bool {
        self.annihilated_by_nijenhuis_image && self.d_stable && self.splits
    }
}

pub fn submodule_properties(space: &FormSpace, family: &FormFamily) -> Result<SubmoduleProperties> {
    let n = space.dim();
    let im_n = nijenhuis_image(space.algebra(), space.acs())?;
    let mut annihilated = true;
    'outer: for k in 1..=n {
        for x in im_n.basis() {
            let c = space.frame().coords(x)?;
            let m = space.degree_map(k, k - 1, |f| f.contract(&c))?;
            if !restricted_image(&m, &family.by_degree[k])?.is_zero() {
                annihilated = false;
                break 'outer;
            }
        }
    }
    let mut d_stable = true;
    for k in 0..n {
        let dm = space.degree_map(k, k + 1, |f| ce_d(space.frame_constants(), f))?;
        if !restricted_image(&dm, &family.by_degree[k])?.is_subspace_of(&family.by_degree[k + 1])? {
            d_stable = false;
            break;
        }
    }
    let mut splits = true;
    'split: for k in 0..=n {
        let v = &family.by_degree[k];
        for b in v.basis() {
            for (p, q) in space.bidegrees_of_degree(k) {
                let part = space.embed(p, q, &space.project(p, q, b));
                if !v.contains(&part)? {
                    splits = false;
                    break 'split;
                }
            }
        }
    }
    Ok(SubmoduleProperties {
        annihilated_by_nijenhuis_image: annihilated,
        d_stable,
        splits,
    })
}

/// `conj(M^{p,q}) = M^{q,p}` for every bidegree.
pub fn conjugation_symmetric(space: &FormSpace, module: &TransverseModule) -> Result<bool> {
    for (p, q) in space.bidegrees() {
        let conj: Vec<Vector> = module
            .space(p, q)
            .basis()
            .iter()
            .map(|b| {
                let f = crate::forms::BigradedForm::pure(p, q, b.clone());
                let c = space.conjugate(&f)?;
                Ok(c.component(q, p).cloned().unwrap_or_else(|| crate::linalg::zero_vec(b.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        if Subspace::span(space.basis(q, p).len(), &conj)? != *module.space(q, p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of `Ω^{p,q}`: `C(m,p)·C(m,q)`.
pub fn form_dimension(m: usize, p: usize, q: usize) -> usize {
    binomial(m, p) * binomial(m, q)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
