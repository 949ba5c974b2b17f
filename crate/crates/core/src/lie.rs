//! Finite-dimensional real Lie algebras given by rational structure constants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{axpy, check_len, is_zero_vec, zero_vec, Gq, Matrix, Rational, Subspace, Vector};

/// Structure constants `[e_i, e_j] = Σ_k c^k_ij e_k`, stored for `i < j` only
/// (0-based indices). Antisymmetry is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
}

/// One basis triple whose cyclic Jacobi sum is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDefect {
    pub triple: (usize, usize, usize),
    pub defect: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JacobiReport {
    pub defects: Vec<JacobiDefect>,
}

impl JacobiReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

impl fmt::Display for JacobiDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k) = self.triple;
        write!(
            f,
            "(e{}, e{}, e{}) with cyclic sum {}",
            i + 1,
            j + 1,
            k + 1,
            crate::linalg::fmt_vector(&self.defect)
        )
    }
}

/// Result of testing a subspace for closure under brackets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraReport {
    pub is_subalgebra: bool,
    pub is_ideal: bool,
    /// First pair `(u, v)` of basis vectors of `V` with `[u, v] ∉ V`.
    pub subalgebra_witness: Option<(Vector, Vector, Vector)>,
    /// First pair `(e_i, v)` with `[e_i, v] ∉ V`.
    pub ideal_witness: Option<(usize, Vector, Vector)>,
}

impl LieAlgebra {
    /// Builds an algebra from `(i, j, [(k, c)])` entries, 0-based. Entries with
    /// `i > j` are stored as `−[e_j, e_i]`; repeated pairs accumulate.
    pub fn new<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vec<(usize, Rational)>)>,
    {
        if dim == 0 {
            return Err(Error::Shape("Lie algebra dimension must be positive".into()));
        }
        let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for (i, j, coeffs) in entries {
            if i >= dim || j >= dim {
                return Err(Error::Shape(format!(
                    "bracket index ({}, {}) out of range for dimension {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                if coeffs.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(Error::Shape(format!(
                        "nonzero self-bracket [e{0}, e{0}]",
                        i + 1
                    )));
                }
                continue;
            }
            let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
            let slot = brackets.entry((a, b)).or_default();
            for (k, c) in coeffs {
                if k >= dim {
                    return Err(Error::Shape(format!(
                        "coefficient index {} out of range for dimension {dim}",
                        k + 1
                    )));
                }
                let c = if sign < 0 { -c } else { c };
                *slot.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
        for slot in brackets.values_mut() {
            slot.retain(|_, c| !c.is_zero());
        }
        brackets.retain(|_, s| !s.is_empty());
        Ok(Self { dim, brackets })
    }

    /// Convenience constructor from integer structure constants, 1-based
    /// as written in the literature: `(i, j, &[(k, c)])` means `[e_i,e_j] ∋ c e_k`.
    pub fn from_int_table(dim: usize, table: &[(usize, usize, &[(usize, i64)])]) -> Result<Self> {
        let entries = table.iter().map(|&(i, j, cs)| {
            (
                i - 1,
                j - 1,
                cs.iter()
                    .map(|&(k, c)| (k - 1, crate::linalg::rat(c)))
                    .collect(),
            )
        });
        Self::new(dim, entries)
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Nonzero structure constants for `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BTreeMap<usize, Rational>)> {
        self.brackets.iter()
    }

    /// `[e_i, e_j]` as a dense vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vec(self.dim);
        let (a, b, neg) = match i.cmp(&j) {
            std::cmp::Ordering::Less => (i, j, false),
            std::cmp::Ordering::Greater => (j, i, true),
            std::cmp::Ordering::Equal => return v,
        };
        if let Some(s) = self.brackets.get(&(a, b)) {
            for (&k, c) in s {
                v[k] = Gq::real(if neg { -c.clone() } else { c.clone() });
            }
        }
        v
    }

    /// Bilinear extension of the bracket to ℚ(i)-coefficient vectors.
    pub fn bracket(&self, x: &[Gq], y: &[Gq]) -> Result<Vector> {
        check_len(x, self.dim, "bracket lhs")?;
        check_len(y, self.dim, "bracket rhs")?;
        let mut out = zero_vec(self.dim);
        for (&(i, j), s) in &self.brackets {
            let w = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if w.is_zero() {
                continue;
            }
            for (&k, c) in s {
                out[k] += w.scale(c);
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_x = [x, ·]`.
    pub fn ad(&self, x: &[Gq]) -> Result<Matrix> {
        let cols = (0..self.dim)
            .map(|b| self.bracket(x, &crate::linalg::unit_vec(self.dim, b)))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn validate(&self) -> JacobiReport {
        let n = self.dim;
        let mut defects = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let e = |t| crate::linalg::unit_vec(n, t);
                    let cyc = |a: usize, b: usize, c: usize| {
                        self.bracket(&self.basis_bracket(a, b), &e(c)).expect("dims")
                    };
                    let mut s = cyc(i, j, k);
                    axpy(&mut s, &Gq::from_int(1), &cyc(j, k, i));
                    axpy(&mut s, &Gq::from_int(1), &cyc(k, i, j));
                    if !is_zero_vec(&s) {
                        defects.push(JacobiDefect {
                            triple: (i, j, k),
                            defect: s,
                        });
                    }
                }
            }
        }
        JacobiReport { defects }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        match r.defects.first() {
            None => Ok(()),
            Some(d) => Err(Error::Jacobi {
                count: r.defects.len(),
                witness: d.to_string(),
            }),
        }
    }

    /// Algebra in the basis `f_a = Σ_i P_{ia} e_i` (columns of `p`).
    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n || !p.is_real() {
            return Err(Error::Shape("change of basis must be a real n×n matrix".into()));
        }
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Shape("change of basis matrix is singular".into()))?;
        let mut entries = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let br = self.bracket(&p.column(a), &p.column(b))?;
                let coords = pinv.apply(&br)?;
                let cs: Vec<(usize, Rational)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.re))
                    .collect();
                entries.push((a, b, cs));
            }
        }
        Self::new(n, entries)
    }

    /// `self ⊕ other`, with `other`'s basis placed after `self`'s.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Self {
        let off = self.dim;
        let mut brackets = self.brackets.clone();
        for (&(i, j), s) in &other.brackets {
            brackets.insert(
                (i + off, j + off),
                s.iter().map(|(&k, c)| (k + off, c.clone())).collect(),
            );
        }
        Self {
            dim: self.dim + other.dim,
            brackets,
        }
    }
}

pub fn validate_lie_algebra(l: &LieAlgebra) -> JacobiReport {
    l.validate()
}

pub fn bracket(l: &LieAlgebra, x: &[Gq], y: &[Gq]) -> Result<Vector> {
    l.bracket(x, y)
}

pub fn subalgebra_report(l: &LieAlgebra, v: &Subspace) -> Result<SubalgebraReport> {
    if v.ambient_dim() != l.dim() {
        return Err(Error::Shape(format!(
            "subspace lives in dimension {}, algebra has dimension {}",
            v.ambient_dim(),
            l.dim()
        )));
    }
    let basis = v.basis();
    let mut subalgebra_witness = None;
    'outer: for (a, u) in basis.iter().enumerate() {
        for w in &basis[a + 1..] {
            let b = l.bracket(u, w)?;
            if !v.contains(&b)? {
                subalgebra_witness = Some((u.clone(), w.clone(), b));
                break 'outer;
            }
        }
    }
    let mut ideal_witness = None;
    'ideal: for i in 0..l.dim() {
        let e = crate::linalg::unit_vec(l.dim(), i);
        for w in basis {
            let b = l.bracket(&e, w)?;
            if !v.contains(&b)? {
                ideal_witness = Some((i, w.clone(), b));
                break 'ideal;
            }
        }
    }
    Ok(SubalgebraReport {
        is_subalgebra: subalgebra_witness.is_none(),
        is_ideal: ideal_witness.is_none(),
        subalgebra_witness,
        ideal_witness,
    })
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}", self.dim)?;
        for (&(i, j), s) in &self.brackets {
            let terms: Vec<String> = s
                .iter()
                .map(|(k, c)| format!("{}·e{}", crate::linalg::format_rational(c), k + 1))
                .collect();
            write!(f, ", [e{},e{}]={}", i + 1, j + 1, terms.join("+"))?;
        }
        write!(f, ")")
    }
}
