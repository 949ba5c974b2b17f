//! Derived flag of `T^{1,0}` traced on real distributions, its involutive
//! limit, and the integrability classifier.
//!
//! Each stage is generated from a basis of the previous one. For `f` a
//! function, `(𝓛_{fU}J)X = f(𝓛_U J)X − (JX·f)U + (X·f)JU`, and the two
//! correction terms lie in the stage whenever it is `J`-stable, so basis
//! generators suffice.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::acs::{lie_derivative_endo, nijenhuis_image, split_10_01, AlmostComplexStructure};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{image, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedFlag {
    /// `D^(1) ⊊ D^(2) ⊊ … ⊊ D^(stable_index)`.
    pub stages: Vec<Subspace>,
    pub stable_index: usize,
    pub limit: Subspace,
}

impl DerivedFlag {
    pub fn dims(&self) -> Vec<usize> {
        self.stages.iter().map(Subspace::dim).collect()
    }

    pub fn stage(&self, k: usize) -> Result<&Subspace> {
        if k == 0 || k > self.stages.len() {
            return Err(Error::Flag(format!(
                "stage {k} out of range 1..={}",
                self.stages.len()
            )));
        }
        Ok(&self.stages[k - 1])
    }
}

/// `D + Σ_{U ∈ basis(D)} Im 𝓛_U J + [D, D]`.
pub fn next_stage(l: &LieAlgebra, j: &AlmostComplexStructure, d: &Subspace) -> Result<Subspace> {
    next_stage_from(l, j, d, d.basis())
}

/// [`next_stage`] using an arbitrary spanning list of `d`.
pub fn next_stage_from(
    l: &LieAlgebra,
    j: &AlmostComplexStructure,
    d: &Subspace,
    generators: &[Vector],
) -> Result<Subspace> {
    let mut acc = d.clone();
    for u in generators {
        acc = acc.sum(&image(&lie_derivative_endo(l, j, u)?))?;
    }
    let mut brackets = Vec::new();
    for (a, u) in generators.iter().enumerate() {
        for v in &generators[a + 1..] {
            brackets.push(l.bracket(u, v)?);
        }
    }
    acc.add_vectors(&brackets)
}

pub fn derived_flag(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<DerivedFlag> {
    l.ensure_valid()?;
    j.ensure_strict(l)?;
    let mut stages = vec![nijenhuis_image(l, j)?];
    loop {
        let last = stages.last().expect("nonempty");
        let next = next_stage(l, j, last)?;
        if &next == last {
            break;
        }
        if stages.len() > l.dim() {
            return Err(Error::internal("flag", "derived flag failed to stabilize"));
        }
        stages.push(next);
    }
    let limit = stages.last().expect("nonempty").clone();
    Ok(DerivedFlag {
        stable_index: stages.len(),
        stages,
        limit,
    })
}

/// Why a stage fails to be involutive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutivityWitness {
    /// `[b_a, b_b] ∉ D` for basis vectors `a`, `b` of the stage.
    Bracket { a: usize, b: usize, value: Vector },
    /// `(𝓛_{b_u} J) e_x ∉ D`.
    LieDerivative { u: usize, x: usize, value: Vector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutivityReport {
    pub involutive: bool,
    pub witness: Option<InvolutivityWitness>,
}

/// Closure test for a real distribution: bracket-closed and
/// `Im 𝓛_U J ⊆ D` for all basis `U`.
pub fn distribution_involutive(
    l: &LieAlgebra,
    j: &AlmostComplexStructure,
    d: &Subspace,
) -> Result<InvolutivityReport> {
    let basis = d.basis();
    for (a, u) in basis.iter().enumerate() {
        for (b, v) in basis.iter().enumerate().skip(a + 1) {
            let w = l.bracket(u, v)?;
            if !d.contains(&w)? {
                return Ok(InvolutivityReport {
                    involutive: false,
                    witness: Some(InvolutivityWitness::Bracket { a, b, value: w }),
                });
            }
        }
    }
    for (ui, u) in basis.iter().enumerate() {
        let m = lie_derivative_endo(l, j, u)?;
        for x in 0..m.cols() {
            let col = m.column(x);
            if !d.contains(&col)? {
                return Ok(InvolutivityReport {
                    involutive: false,
                    witness: Some(InvolutivityWitness::LieDerivative { u: ui, x, value: col }),
                });
            }
        }
    }
    Ok(InvolutivityReport {
        involutive: true,
        witness: None,
    })
}

/// Involutivity of the `k`-th derived distribution of `T^{1,0}`, read on
/// `D^(k)`.
pub fn t10_derived_involutive(
    l: &LieAlgebra,
    j: &AlmostComplexStructure,
    flag: &DerivedFlag,
    k: usize,
) -> Result<InvolutivityReport> {
    if k > flag.stable_index {
        return Err(Error::Flag(format!(
            "k = {k} exceeds the stable index {}",
            flag.stable_index
        )));
    }
    distribution_involutive(l, j, flag.stage(k)?)
}

/// Whether `T^{1,0} + D^ℂ` is closed under the complexified bracket.
pub fn complexified_sum_involutive(
    l: &LieAlgebra,
    j: &AlmostComplexStructure,
    d: &Subspace,
) -> Result<bool> {
    let frame = split_10_01(l, j)?;
    let n = l.dim();
    let mut gens: Vec<Vector> = frame.basis_10().to_vec();
    gens.extend(d.basis().iter().cloned());
    let span = Subspace::span(n, &gens)?;
    let basis = span.basis();
    for (a, u) in basis.iter().enumerate() {
        for v in &basis[a + 1..] {
            if !span.contains(&l.bracket(u, v)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegrabilityClass {
    Integrable,
    MinimallyNonIntegrable,
    MaximallyNonIntegrable,
    Intermediate(Vec<usize>),
}

impl IntegrabilityClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Integrable => "Integrable",
            Self::MinimallyNonIntegrable => "MinimallyNonIntegrable",
            Self::MaximallyNonIntegrable => "MaximallyNonIntegrable",
            Self::Intermediate(_) => "Intermediate",
        }
    }
}

impl fmt::Display for IntegrabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Intermediate(d) => write!(f, "Intermediate{d:?}"),
            other => f.write_str(other.name()),
        }
    }
}

/// Classifier output; fields are kept in serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: String,
    pub dim2_refinement: bool,
    #[serde(rename = "dim_im_N")]
    pub dim_im_n: usize,
    pub flag_dims: Vec<usize>,
}

impl Classification {
    pub fn kind(&self) -> IntegrabilityClass {
        match self.class.as_str() {
            "Integrable" => IntegrabilityClass::Integrable,
            "MinimallyNonIntegrable" => IntegrabilityClass::MinimallyNonIntegrable,
            "MaximallyNonIntegrable" => IntegrabilityClass::MaximallyNonIntegrable,
            _ => IntegrabilityClass::Intermediate(self.flag_dims.clone()),
        }
    }
}

pub fn classify_with(
    l: &LieAlgebra,
    j: &AlmostComplexStructure,
    flag: &DerivedFlag,
) -> Result<Classification> {
    let im = &flag.stages[0];
    let class = if im.is_zero() {
        IntegrabilityClass::Integrable
    } else if im.is_full() {
        IntegrabilityClass::MaximallyNonIntegrable
    } else if t10_derived_involutive(l, j, flag, 1)?.involutive {
        IntegrabilityClass::MinimallyNonIntegrable
    } else {
        IntegrabilityClass::Intermediate(flag.dims())
    };
    Ok(Classification {
        class: class.name().to_string(),
        dim2_refinement: im.dim() == 2,
        dim_im_n: im.dim(),
        flag_dims: flag.dims(),
    })
}

pub fn classify(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<Classification> {
    let flag = derived_flag(l, j)?;
    classify_with(l, j, &flag)
}
