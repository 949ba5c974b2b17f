//! Invariant exterior algebra, the Chevalley–Eilenberg differential and its
//! four bidegree components.
//!
//! Monomials are bitmasks over a basis of covectors: bit `a` set means the
//! factor `θ^a` is present, and factors are always wedged in increasing
//! order. Components follow the determinant convention, so
//! `(θ^a∧θ^b)(v_a, v_b) = 1`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::acs::{split_10_01, AlmostComplexStructure, ComplexFrame};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{check_len, dot, is_zero_vec, zero_vec, Gq, Matrix, Vector};

pub type Mask = u32;

fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |&b| mask >> b & 1 == 1)
}

/// Sign of `θ^S ∧ θ^T` relative to `θ^{S∪T}`; `None` when they overlap.
fn wedge_sign(s: Mask, t: Mask) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for b in bits(t) {
        inversions += (s >> (b + 1)).count_ones();
    }
    Some(inversions % 2 == 1)
}

/// Rewrites `θ^{i_1}∧…∧θ^{i_k}` (any order) as `±θ^S`.
pub fn monomial_from_indices(indices: &[usize]) -> Option<(Mask, bool)> {
    let mut mask = 0;
    let mut neg = false;
    for &i in indices {
        let m = 1 << i;
        neg ^= wedge_sign(mask, m)?;
        mask |= m;
    }
    Some((mask, neg))
}

/// Structure constants of a basis `v_0..v_{n-1}`:
/// `[v_a, v_b] = Σ_c table[a][b][c] v_c`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    n: usize,
    table: Vec<Vec<Vector>>,
}

impl StructureConstants {
    pub fn of_algebra(l: &LieAlgebra) -> Self {
        let n = l.dim();
        let table = (0..n)
            .map(|a| (0..n).map(|b| l.basis_bracket(a, b)).collect())
            .collect();
        Self { n, table }
    }

    /// Constants of the basis `vectors` (given in the `e` basis), read off
    /// with the dual covectors `dual`.
    pub fn in_basis(l: &LieAlgebra, vectors: &[Vector], dual: &[Vector]) -> Result<Self> {
        let n = l.dim();
        if vectors.len() != n || dual.len() != n {
            return Err(Error::Shape("basis and dual basis must have n elements".into()));
        }
        let mut table = vec![vec![zero_vec(n); n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let br = l.bracket(&vectors[a], &vectors[b])?;
                let c: Vector = dual.iter().map(|t| dot(t, &br)).collect();
                table[b][a] = c.iter().map(|x| -x).collect();
                table[a][b] = c;
            }
        }
        Ok(Self { n, table })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self, a: usize, b: usize) -> &[Gq] {
        &self.table[a][b]
    }

    /// Coordinates of `[x, v_b]` for `x` given in this basis.
    pub fn ad_column(&self, x: &[Gq], b: usize) -> Vector {
        let mut out = zero_vec(self.n);
        for (a, xa) in x.iter().enumerate() {
            crate::linalg::axpy(&mut out, xa, &self.table[a][b]);
        }
        out
    }

    /// `dθ^c = −Σ_{a<b} C^c_{ab} θ^a∧θ^b`.
    fn d_generator(&self, c: usize) -> ExteriorForm {
        let mut f = ExteriorForm::zero(self.n);
        for a in 0..self.n {
            for b in a + 1..self.n {
                let k = &self.table[a][b][c];
                if !k.is_zero() {
                    f.add_term((1 << a) | (1 << b), -k);
                }
            }
        }
        f
    }
}

/// A (possibly inhomogeneous) form with sparse monomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ExteriorForm {
    n: usize,
    terms: BTreeMap<Mask, Gq>,
}

impl ExteriorForm {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Gq) -> Self {
        let mut f = Self::zero(n);
        f.add_term(0, c);
        f
    }

    pub fn monomial(n: usize, mask: Mask, c: Gq) -> Self {
        let mut f = Self::zero(n);
        f.add_term(mask, c);
        f
    }

    /// `c · θ^{i_1}∧…∧θ^{i_k}` with 0-based indices in any order.
    pub fn from_indices(n: usize, indices: &[usize], c: Gq) -> Self {
        match monomial_from_indices(indices) {
            Some((m, neg)) => Self::monomial(n, m, if neg { -c } else { c }),
            None => Self::zero(n),
        }
    }

    /// The 1-form `Σ c_a θ^a`.
    pub fn covector(coeffs: &[Gq]) -> Self {
        let mut f = Self::zero(coeffs.len());
        for (a, c) in coeffs.iter().enumerate() {
            f.add_term(1 << a, c.clone());
        }
        f
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Mask, Gq> {
        &self.terms
    }

    pub fn coefficient(&self, mask: Mask) -> Gq {
        self.terms.get(&mask).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: Mask, c: Gq) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Gq::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&m, c) in &o.terms {
            r.add_term(m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Gq::one()))
    }

    pub fn scale(&self, s: &Gq) -> Self {
        let mut r = Self::zero(self.n);
        for (&m, c) in &self.terms {
            r.add_term(m, c * s);
        }
        r
    }

    /// Degree if every term has the same degree (zero form counts as any).
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.n);
        for (&s, a) in &self.terms {
            for (&t, b) in &o.terms {
                if let Some(neg) = wedge_sign(s, t) {
                    let c = a * b;
                    r.add_term(s | t, if neg { -c } else { c });
                }
            }
        }
        r
    }

    /// Interior product `ι(x)` in the first argument, `x` in this basis.
    pub fn contract(&self, x: &[Gq]) -> Self {
        let mut r = Self::zero(self.n);
        for (&s, c) in &self.terms {
            for (pos, a) in bits(s).enumerate() {
                if x[a].is_zero() {
                    continue;
                }
                let v = c * &x[a];
                r.add_term(s & !(1 << a), if pos % 2 == 1 { -v } else { v });
            }
        }
        r
    }

    /// `ω(x_1, …, x_k)` for vectors written in this basis.
    pub fn evaluate(&self, args: &[Vector]) -> Gq {
        let k = args.len();
        let mut acc = Gq::zero();
        for (&s, c) in &self.terms {
            if s.count_ones() as usize != k {
                continue;
            }
            let idx: Vec<usize> = bits(s).collect();
            let rows: Vec<Vector> = idx
                .iter()
                .map(|&i| args.iter().map(|v| v[i].clone()).collect())
                .collect();
            let det = if k == 0 {
                Gq::one()
            } else {
                Matrix::from_rows(&rows)
                    .expect("square minor")
                    .determinant()
                    .expect("square minor")
            };
            acc += c * &det;
        }
        acc
    }

    /// Applies the derivation determined by the images of the generators
    /// `θ^c`; `odd` selects the graded sign `(−1)^i` at factor `i`.
    fn derivation(&self, images: &[ExteriorForm], odd: bool) -> Self {
        let mut r = Self::zero(self.n);
        for (&s, c) in &self.terms {
            let idx: Vec<usize> = bits(s).collect();
            for (pos, &a) in idx.iter().enumerate() {
                let img = &images[a];
                if img.is_zero() {
                    continue;
                }
                let before: Mask = idx[..pos].iter().map(|&b| 1 << b).sum();
                let after: Mask = idx[pos + 1..].iter().map(|&b| 1 << b).sum();
                let sign = if odd && pos % 2 == 1 { -c.clone() } else { c.clone() };
                let term = Self::monomial(self.n, before, sign)
                    .wedge(img)
                    .wedge(&Self::monomial(self.n, after, Gq::one()));
                r = r.add(&term);
            }
        }
        r
    }

    /// Substitutes each generator `θ^i` by the 1-form `images[i]`.
    pub fn pullback(&self, images: &[ExteriorForm]) -> Result<Self> {
        if images.len() != self.n {
            return Err(Error::Shape("pullback needs one image per generator".into()));
        }
        let target = images.first().map_or(0, |f| f.n);
        let mut r = Self::zero(target);
        for (&s, c) in &self.terms {
            let mut acc = Self::constant(target, c.clone());
            for a in bits(s) {
                acc = acc.wedge(&images[a]);
            }
            r = r.add(&acc);
        }
        Ok(r)
    }
}

impl std::fmt::Debug for ExteriorForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let idx: Vec<String> = bits(m).map(|b| (b + 1).to_string()).collect();
                format!("({c})θ[{}]", idx.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Chevalley–Eilenberg differential in the basis described by `sc`:
/// `(dω)(X₀,…,X_k) = Σ_{r<s} (−1)^{r+s} ω([X_r,X_s], X₀,…,X̂_r,…,X̂_s,…,X_k)`.
pub fn ce_d(sc: &StructureConstants, omega: &ExteriorForm) -> ExteriorForm {
    let images: Vec<ExteriorForm> = (0..sc.dim()).map(|c| sc.d_generator(c)).collect();
    omega.derivation(&images, true)
}

/// `(𝓛_x ω)(X₁,…,X_k) = −Σ_i ω(X₁,…,[x,X_i],…,X_k)`.
pub fn lie_derivative(sc: &StructureConstants, x: &[Gq], omega: &ExteriorForm) -> ExteriorForm {
    let n = sc.dim();
    let cols: Vec<Vector> = (0..n).map(|b| sc.ad_column(x, b)).collect();
    let images: Vec<ExteriorForm> = (0..n)
        .map(|c| {
            let coeffs: Vector = cols.iter().map(|col| -&col[c]).collect();
            ExteriorForm::covector(&coeffs)
        })
        .collect();
    omega.derivation(&images, false)
}

pub fn wedge(a: &ExteriorForm, b: &ExteriorForm) -> ExteriorForm {
    a.wedge(b)
}

/// A form split into bidegree components, each a coefficient vector in the
/// monomial basis of its bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BigradedForm {
    components: BTreeMap<(usize, usize), Vector>,
}

impl BigradedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pure(p: usize, q: usize, coeffs: Vector) -> Self {
        let mut f = Self::zero();
        f.set(p, q, coeffs);
        f
    }

    pub fn set(&mut self, p: usize, q: usize, coeffs: Vector) {
        if is_zero_vec(&coeffs) {
            self.components.remove(&(p, q));
        } else {
            self.components.insert((p, q), coeffs);
        }
    }

    pub fn component(&self, p: usize, q: usize) -> Option<&Vector> {
        self.components.get(&(p, q))
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.components
    }

    /// Bidegrees with a nonzero component.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        self.components.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
}

impl Serialize for BigradedForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.components.len()))?;
        for ((p, q), v) in &self.components {
            let inner: BTreeMap<String, &Gq> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i.to_string(), c))
                .collect();
            map.serialize_entry(&format!("({p},{q})"), &inner)?;
        }
        map.end()
    }
}

/// Bigraded invariant forms of an almost complex Lie algebra, written in the
/// adapted complex coframe `θ^0..θ^{m-1}` (type (1,0)) and
/// `θ^m..θ^{2m-1}` (their conjugates).
#[derive(Clone, Debug)]
pub struct FormSpace {
    algebra: LieAlgebra,
    acs: AlmostComplexStructure,
    n: usize,
    m: usize,
    frame: ComplexFrame,
    real_sc: StructureConstants,
    frame_sc: StructureConstants,
    bases: BTreeMap<(usize, usize), Vec<Mask>>,
    position: HashMap<Mask, usize>,
    offsets: BTreeMap<(usize, usize), usize>,
}

fn subsets(m: usize, k: usize) -> Vec<Mask> {
    let mut out: Vec<Mask> = (0..1u32 << m)
        .filter(|s| s.count_ones() as usize == k)
        .collect();
    out.sort_by_key(|&s| bits(s).collect::<Vec<_>>());
    out
}

impl FormSpace {
    pub fn new(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<Self> {
        l.ensure_valid()?;
        let frame = split_10_01(l, j)?;
        let n = l.dim();
        let m = n / 2;
        let frame_sc = StructureConstants::in_basis(l, frame.vectors(), frame.dual())?;
        let mut bases = BTreeMap::new();
        let mut position = HashMap::new();
        for p in 0..=m {
            for q in 0..=m {
                let list: Vec<Mask> = subsets(m, p)
                    .into_iter()
                    .flat_map(|i| subsets(m, q).into_iter().map(move |k| i | (k << m)))
                    .collect();
                for (idx, &s) in list.iter().enumerate() {
                    position.insert(s, idx);
                }
                bases.insert((p, q), list);
            }
        }
        let mut offsets = BTreeMap::new();
        for k in 0..=n {
            let mut off = 0;
            for p in 0..=k.min(m) {
                let q = k - p;
                if q > m {
                    continue;
                }
                offsets.insert((p, q), off);
                off += bases[&(p, q)].len();
            }
        }
        Ok(Self {
            algebra: l.clone(),
            acs: j.clone(),
            n,
            m,
            frame,
            real_sc: StructureConstants::of_algebra(l),
            frame_sc,
            bases,
            position,
            offsets,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn acs(&self) -> &AlmostComplexStructure {
        &self.acs
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_dim(&self) -> usize {
        self.m
    }

    pub fn frame(&self) -> &ComplexFrame {
        &self.frame
    }

    pub fn frame_constants(&self) -> &StructureConstants {
        &self.frame_sc
    }

    pub fn real_constants(&self) -> &StructureConstants {
        &self.real_sc
    }

    /// All bidegrees `(p, q)` with `0 ≤ p, q ≤ m`.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        self.bases.keys().copied().collect()
    }

    /// Bidegrees of total degree `k`, in increasing `p`.
    pub fn bidegrees_of_degree(&self, k: usize) -> Vec<(usize, usize)> {
        (0..=k.min(self.m))
            .filter(|&p| k - p <= self.m)
            .map(|p| (p, k - p))
            .collect()
    }

    /// Monomials `θ^I∧θ̄^K` of bidegree `(p, q)`, ordered by `I` then `K`.
    pub fn basis(&self, p: usize, q: usize) -> &[Mask] {
        self.bases.get(&(p, q)).map_or(&[], Vec::as_slice)
    }

    /// Dimension of `Ω^{p,q}`; zero outside the valid range.
    pub fn space_dim(&self, p: isize, q: isize) -> usize {
        if p < 0 || q < 0 {
            return 0;
        }
        self.basis(p as usize, q as usize).len()
    }

    pub fn bidegree_of(&self, mask: Mask) -> (usize, usize) {
        let low = (1 << self.m) - 1;
        ((mask & low).count_ones() as usize, (mask >> self.m).count_ones() as usize)
    }

    /// Dimension of `Λ^k` of the complexified dual.
    pub fn degree_dim(&self, k: usize) -> usize {
        self.bidegrees_of_degree(k)
            .iter()
            .map(|&(p, q)| self.basis(p, q).len())
            .sum()
    }

    /// Position of a degree-`k` monomial in the concatenated `Λ^k` layout
    /// (bidegree blocks in increasing `p`).
    pub fn degree_position(&self, mask: Mask) -> usize {
        let bd = self.bidegree_of(mask);
        self.offsets[&bd] + self.position[&mask]
    }

    pub fn degree_offset(&self, p: usize, q: usize) -> usize {
        self.offsets[&(p, q)]
    }

    /// Coordinates of a homogeneous degree-`k` frame form in `Λ^k`.
    pub fn degree_coords(&self, k: usize, f: &ExteriorForm) -> Result<Vector> {
        let mut v = zero_vec(self.degree_dim(k));
        for (&s, c) in f.terms() {
            if s.count_ones() as usize != k {
                return Err(Error::internal("forms", format!("term of degree {} in a degree-{k} form", s.count_ones())));
            }
            v[self.degree_position(s)] = c.clone();
        }
        Ok(v)
    }

    pub fn from_degree_coords(&self, k: usize, v: &[Gq]) -> Result<ExteriorForm> {
        check_len(v, self.degree_dim(k), "degree coordinates")?;
        let mut f = ExteriorForm::zero(self.n);
        for (p, q) in self.bidegrees_of_degree(k) {
            let off = self.offsets[&(p, q)];
            for (i, &s) in self.basis(p, q).iter().enumerate() {
                f.add_term(s, v[off + i].clone());
            }
        }
        Ok(f)
    }

    /// Coordinates of the `(p, q)` part of a frame form.
    pub fn bidegree_coords(&self, p: usize, q: usize, f: &ExteriorForm) -> Vector {
        self.basis(p, q).iter().map(|&s| f.coefficient(s)).collect()
    }

    pub fn to_bigraded(&self, f: &ExteriorForm) -> BigradedForm {
        let mut out = BigradedForm::zero();
        let mut touched: Vec<(usize, usize)> = f.terms().keys().map(|&s| self.bidegree_of(s)).collect();
        touched.dedup();
        for (p, q) in touched {
            out.set(p, q, self.bidegree_coords(p, q, f));
        }
        out
    }

    pub fn to_exterior(&self, f: &BigradedForm) -> Result<ExteriorForm> {
        let mut r = ExteriorForm::zero(self.n);
        for (&(p, q), v) in f.components() {
            let basis = self.basis(p, q);
            check_len(v, basis.len(), "bigraded component")?;
            for (&s, c) in basis.iter().zip(v) {
                r.add_term(s, c.clone());
            }
        }
        Ok(r)
    }

    /// Frame form of the monomial at index `i` of bidegree `(p, q)`.
    pub fn basis_form(&self, p: usize, q: usize, i: usize) -> ExteriorForm {
        ExteriorForm::monomial(self.n, self.basis(p, q)[i], Gq::one())
    }

    /// Rewrites a form given in the real coframe `e^1..e^n` in bigraded form.
    pub fn bigrade(&self, real: &ExteriorForm) -> Result<BigradedForm> {
        Ok(self.to_bigraded(&self.real_to_frame(real)?))
    }

    /// `e^i = Σ_a e^i(f_a) θ^a`.
    pub fn real_to_frame(&self, real: &ExteriorForm) -> Result<ExteriorForm> {
        let images: Vec<ExteriorForm> = (0..self.n)
            .map(|i| {
                let c: Vector = self.frame.vectors().iter().map(|f| f[i].clone()).collect();
                ExteriorForm::covector(&c)
            })
            .collect();
        real.pullback(&images)
    }

    /// `θ^a = Σ_i θ^a(e_i) e^i`.
    pub fn frame_to_real(&self, f: &ExteriorForm) -> Result<ExteriorForm> {
        let images: Vec<ExteriorForm> = self
            .frame
            .dual()
            .iter()
            .map(|t| ExteriorForm::covector(t))
            .collect();
        f.pullback(&images)
    }

    pub fn d(&self, f: &BigradedForm) -> Result<BigradedForm> {
        Ok(self.to_bigraded(&ce_d(&self.frame_sc, &self.to_exterior(f)?)))
    }

    /// `ι(x)ω` for `x` in the `e` basis.
    pub fn contract(&self, x: &[Gq], f: &BigradedForm) -> Result<BigradedForm> {
        let c = self.frame.coords(x)?;
        Ok(self.to_bigraded(&self.to_exterior(f)?.contract(&c)))
    }

    /// `𝓛_x ω` for `x` in the `e` basis.
    pub fn lie(&self, x: &[Gq], f: &BigradedForm) -> Result<BigradedForm> {
        let c = self.frame.coords(x)?;
        Ok(self.to_bigraded(&lie_derivative(&self.frame_sc, &c, &self.to_exterior(f)?)))
    }

    /// Complex conjugate: swaps `θ^a ↔ θ^{a+m}` and conjugates coefficients.
    pub fn conjugate_exterior(&self, f: &ExteriorForm) -> ExteriorForm {
        let mut r = ExteriorForm::zero(self.n);
        for (&s, c) in f.terms() {
            let idx: Vec<usize> = bits(s)
                .map(|a| if a < self.m { a + self.m } else { a - self.m })
                .collect();
            let (mask, neg) = monomial_from_indices(&idx).expect("distinct indices");
            r.add_term(mask, if neg { -c.conj() } else { c.conj() });
        }
        r
    }

    pub fn conjugate(&self, f: &BigradedForm) -> Result<BigradedForm> {
        Ok(self.to_bigraded(&self.conjugate_exterior(&self.to_exterior(f)?)))
    }

    /// Matrix from `Ω^{p,q}` to the full `Λ^{target}` of a linear map given
    /// on monomials.
    pub fn bidegree_map<F>(&self, p: usize, q: usize, target: usize, f: F) -> Result<Matrix>
    where
        F: Fn(&ExteriorForm) -> ExteriorForm,
    {
        let src = self.basis(p, q);
        let mut m = Matrix::zeros(self.degree_dim(target), src.len());
        for (c, &s) in src.iter().enumerate() {
            let img = f(&ExteriorForm::monomial(self.n, s, Gq::one()));
            for (r, v) in self.degree_coords(target, &img)?.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    /// Matrix from the full `Λ^k` to `Λ^{target}`.
    pub fn degree_map<F>(&self, k: usize, target: usize, f: F) -> Result<Matrix>
    where
        F: Fn(&ExteriorForm) -> ExteriorForm,
    {
        let mut m = Matrix::zeros(self.degree_dim(target), self.degree_dim(k));
        let mut col = 0;
        for (p, q) in self.bidegrees_of_degree(k) {
            for &s in self.basis(p, q) {
                let img = f(&ExteriorForm::monomial(self.n, s, Gq::one()));
                for (r, v) in self.degree_coords(target, &img)?.into_iter().enumerate() {
                    m.set(r, col, v);
                }
                col += 1;
            }
        }
        Ok(m)
    }

    /// Rows of a `Λ^k` matrix belonging to bidegree `(p, q)`.
    pub fn restrict_rows(&self, m: &Matrix, p: usize, q: usize) -> Matrix {
        let off = self.offsets[&(p, q)];
        let len = self.basis(p, q).len();
        let mut out = Matrix::zeros(len, m.cols());
        for r in 0..len {
            for c in 0..m.cols() {
                out.set(r, c, m.get(off + r, c).clone());
            }
        }
        out
    }

    /// Embeds a `(p, q)` coefficient vector into `Λ^{p+q}`.
    pub fn embed(&self, p: usize, q: usize, v: &[Gq]) -> Vector {
        let mut out = zero_vec(self.degree_dim(p + q));
        let off = self.offsets[&(p, q)];
        for (i, c) in v.iter().enumerate() {
            out[off + i] = c.clone();
        }
        out
    }

    /// Projects a `Λ^k` vector onto its `(p, q)` block.
    pub fn project(&self, p: usize, q: usize, v: &[Gq]) -> Vector {
        let off = self.offsets[&(p, q)];
        v[off..off + self.basis(p, q).len()].to_vec()
    }

    pub fn component_operators(&self) -> Result<ComponentOperators> {
        component_operators_of(self)
    }
}

/// A bidegree-homogeneous operator: one block per source bidegree, mapping
/// into source + shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedOperator {
    shift: (isize, isize),
    blocks: BTreeMap<(usize, usize), Matrix>,
}

impl BigradedOperator {
    pub fn shift(&self) -> (isize, isize) {
        self.shift
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.blocks
    }

    /// Block on `Ω^{p,q}`; a matrix with zero rows when the target is out of range.
    pub fn block(&self, p: usize, q: usize) -> &Matrix {
        &self.blocks[&(p, q)]
    }

    /// Target bidegree, if it exists.
    pub fn target(&self, p: usize, q: usize) -> Option<(usize, usize)> {
        let tp = p as isize + self.shift.0;
        let tq = q as isize + self.shift.1;
        (tp >= 0 && tq >= 0).then_some((tp as usize, tq as usize))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    pub fn apply(&self, f: &BigradedForm) -> Result<BigradedForm> {
        let mut out = BigradedForm::zero();
        let mut acc: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (&(p, q), v) in f.components() {
            let Some(t) = self.target(p, q) else { continue };
            let b = self.block(p, q);
            if b.rows() == 0 {
                continue;
            }
            let img = b.apply(v)?;
            let e = acc.entry(t).or_insert_with(|| zero_vec(img.len()));
            *e = crate::linalg::vec_add(e, &img);
        }
        for ((p, q), v) in acc {
            out.set(p, q, v);
        }
        Ok(out)
    }
}

/// `d = μ̄ + ∂̄ + ∂ + μ`.
#[derive(Clone, Debug)]
pub struct ComponentOperators {
    pub mu_bar: BigradedOperator,
    pub del_bar: BigradedOperator,
    pub del: BigradedOperator,
    pub mu: BigradedOperator,
}

pub const MU_BAR_SHIFT: (isize, isize) = (-1, 2);
pub const DEL_BAR_SHIFT: (isize, isize) = (0, 1);
pub const DEL_SHIFT: (isize, isize) = (1, 0);
pub const MU_SHIFT: (isize, isize) = (2, -1);

impl ComponentOperators {
    pub fn all(&self) -> [(&'static str, &BigradedOperator); 4] {
        [
            ("mu_bar", &self.mu_bar),
            ("del_bar", &self.del_bar),
            ("del", &self.del),
            ("mu", &self.mu),
        ]
    }

    /// `d` on `Ω^{p,q}` as a matrix into `Λ^{p+q+1}`, reassembled from the
    /// four blocks.
    pub fn reassembled_d(&self, space: &FormSpace, p: usize, q: usize) -> Matrix {
        let k = p + q + 1;
        let mut m = Matrix::zeros(space.degree_dim(k), space.basis(p, q).len());
        for (_, op) in self.all() {
            let Some((tp, tq)) = op.target(p, q) else { continue };
            if tp > space.half_dim() || tq > space.half_dim() {
                continue;
            }
            let b = op.block(p, q);
            let off = space.degree_offset(tp, tq);
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(off + r, c, b.get(r, c).clone());
                }
            }
        }
        m
    }
}

fn component_operators_of(space: &FormSpace) -> Result<ComponentOperators> {
    let shifts = [MU_BAR_SHIFT, DEL_BAR_SHIFT, DEL_SHIFT, MU_SHIFT];
    let mut blocks: Vec<BTreeMap<(usize, usize), Matrix>> = vec![BTreeMap::new(); 4];
    let m = space.half_dim();
    for (p, q) in space.bidegrees() {
        let k = p + q;
        let dm = if k < space.dim() {
            space.bidegree_map(p, q, k + 1, |f| ce_d(space.frame_constants(), f))?
        } else {
            Matrix::zeros(0, space.basis(p, q).len())
        };
        let mut covered = vec![false; dm.rows()];
        for (slot, &(dp, dq)) in shifts.iter().enumerate() {
            let tp = p as isize + dp;
            let tq = q as isize + dq;
            let block = if tp < 0 || tq < 0 || tp as usize > m || tq as usize > m {
                Matrix::zeros(0, dm.cols())
            } else {
                let (tp, tq) = (tp as usize, tq as usize);
                let off = space.degree_offset(tp, tq);
                for c in covered.iter_mut().skip(off).take(space.basis(tp, tq).len()) {
                    *c = true;
                }
                space.restrict_rows(&dm, tp, tq)
            };
            blocks[slot].insert((p, q), block);
        }
        for (r, seen) in covered.iter().enumerate() {
            if !seen && (0..dm.cols()).any(|c| !dm.get(r, c).is_zero()) {
                return Err(Error::internal(
                    "forms",
                    format!("d of a ({p},{q})-form has a component outside the four admissible bidegrees"),
                ));
            }
        }
    }
    let mut it = blocks.into_iter();
    let mut next = |shift| BigradedOperator {
        shift,
        blocks: it.next().expect("four operators"),
    };
    Ok(ComponentOperators {
        mu_bar: next(MU_BAR_SHIFT),
        del_bar: next(DEL_BAR_SHIFT),
        del: next(DEL_SHIFT),
        mu: next(MU_SHIFT),
    })
}

/// Splitting of `d` for `(L, J)`.
pub fn component_operators(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<ComponentOperators> {
    FormSpace::new(l, j)?.component_operators()
}

/// One failing block of a `d² = 0` component relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: &'static str,
    pub bidegree: (usize, usize),
}

#[derive(Clone, Debug, Default)]
pub struct D2Report {
    pub checked_blocks: usize,
    pub failures: Vec<RelationFailure>,
}

impl D2Report {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The seven component identities of `d² = 0`, named by total shift.
pub const D2_RELATIONS: [(&str, (isize, isize)); 7] = [
    ("μ̄² = 0", (-2, 4)),
    ("μ̄∂̄ + ∂̄μ̄ = 0", (-1, 3)),
    ("μ̄∂ + ∂μ̄ + ∂̄² = 0", (0, 2)),
    ("μμ̄ + μ̄μ + ∂∂̄ + ∂̄∂ = 0", (1, 1)),
    ("μ∂̄ + ∂̄μ + ∂² = 0", (2, 0)),
    ("μ∂ + ∂μ = 0", (3, -1)),
    ("μ² = 0", (4, -2)),
];

/// Sum over ordered pairs `(X, Y)` with total shift `total` of `Y∘X` on `Ω^{p,q}`.
fn relation_block(
    space: &FormSpace,
    ops: &ComponentOperators,
    p: usize,
    q: usize,
    total: (isize, isize),
) -> Result<Option<Matrix>> {
    let m = space.half_dim() as isize;
    let tp = p as isize + total.0;
    let tq = q as isize + total.1;
    if tp < 0 || tq < 0 || tp > m || tq > m {
        return Ok(None);
    }
    let mut acc = Matrix::zeros(space.space_dim(tp, tq), space.basis(p, q).len());
    for (_, x) in ops.all() {
        for (_, y) in ops.all() {
            if (x.shift.0 + y.shift.0, x.shift.1 + y.shift.1) != total {
                continue;
            }
            let ip = p as isize + x.shift.0;
            let iq = q as isize + x.shift.1;
            if ip < 0 || iq < 0 || ip > m || iq > m {
                continue;
            }
            let first = x.block(p, q);
            let second = y.block(ip as usize, iq as usize);
            acc = acc.add(&second.mul(first)?)?;
        }
    }
    Ok(Some(acc))
}

pub fn verify_d2_relations_in(space: &FormSpace, ops: &ComponentOperators) -> Result<D2Report> {
    let mut report = D2Report::default();
    for (name, total) in D2_RELATIONS {
        for (p, q) in space.bidegrees() {
            if let Some(block) = relation_block(space, ops, p, q, total)? {
                report.checked_blocks += 1;
                if !block.is_zero() {
                    report.failures.push(RelationFailure {
                        relation: name,
                        bidegree: (p, q),
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn verify_d2_relations(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<D2Report> {
    let space = FormSpace::new(l, j)?;
    let ops = space.component_operators()?;
    verify_d2_relations_in(&space, &ops)
}

/// `ι(x)ω` for `x` in the `e` basis.
pub fn contract(space: &FormSpace, x: &[Gq], omega: &BigradedForm) -> Result<BigradedForm> {
    space.contract(x, omega)
}

/// `𝓛_x ω` for `x` in the `e` basis.
pub fn lie_form(space: &FormSpace, x: &[Gq], omega: &BigradedForm) -> Result<BigradedForm> {
    space.lie(x, omega)
}

/// Rewrites a real-coframe form in bigraded components.
pub fn bigrade(space: &FormSpace, omega: &ExteriorForm) -> Result<BigradedForm> {
    space.bigrade(omega)
}

/// Complex conjugate of a bigraded form.
pub fn conjugate(space: &FormSpace, omega: &BigradedForm) -> Result<BigradedForm> {
    space.conjugate(omega)
}
