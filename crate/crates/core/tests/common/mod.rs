//! Brute-force reference computations, written against the raw bracket table
//! and `J` only: forms are arrays of values on increasing index tuples, `d` is
//! the Koszul formula, and bidegrees come from eigenvectors of `Jᵀ`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use transverse_dolbeault::acs::AlmostComplexStructure;
use transverse_dolbeault::catalog::{all_entries, random_instance};
use transverse_dolbeault::lie::LieAlgebra;
use transverse_dolbeault::linalg::{kernel, unit_vec, Gq, Matrix, Subspace, Vector};

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    if k == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            // inserting at `pos` passes over k - 1 - pos larger-indexed slots
            out.push((q, odd ^ ((k - 1 - pos) % 2 == 1)));
        }
    }
    out
}

pub struct Oracle {
    pub n: usize,
    pub m: usize,
    /// `br[a][b] = [e_a, e_b]`.
    pub br: Vec<Vec<Vector>>,
    pub j: Matrix,
    /// (1,0)-covectors as rows: `α(Jx) = i α(x)`.
    pub alpha: Vec<Vector>,
    pub subsets: Vec<Vec<Vec<usize>>>,
    pub index: Vec<BTreeMap<Vec<usize>, usize>>,
    /// Per degree: bidegree blocks `(p, q, forms)` with forms in subset coordinates.
    pub blocks: Vec<Vec<(usize, usize, Vec<Vector>)>>,
    /// Per degree: inverse of the matrix whose columns are all bidegree forms.
    pub to_bigraded: Vec<Matrix>,
}

impl Oracle {
    pub fn new(l: &LieAlgebra, j: &AlmostComplexStructure) -> Self {
        let n = l.dim();
        let m = n / 2;
        let br = (0..n)
            .map(|a| (0..n).map(|b| l.basis_bracket(a, b)).collect())
            .collect();
        let jm = j.matrix().clone();
        let shifted = jm.transpose().sub(&Matrix::identity(n).scale(&Gq::i())).unwrap();
        let alpha = kernel(&shifted).basis().to_vec();
        assert_eq!(alpha.len(), m, "J has no (1,0) eigenspace of half dimension");
        let subsets: Vec<_> = (0..=n).map(|k| combinations(n, k)).collect();
        let index = subsets
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        let mut o = Oracle {
            n,
            m,
            br,
            j: jm,
            alpha,
            subsets,
            index,
            blocks: vec![],
            to_bigraded: vec![],
        };
        let beta: Vec<Vector> = o.alpha.iter().map(|a| a.iter().map(Gq::conj).collect()).collect();
        for k in 0..=n {
            let mut blocks = Vec::new();
            let mut cols = Vec::new();
            for p in 0..=k.min(m) {
                let q = k - p;
                if q > m {
                    continue;
                }
                let mut forms = Vec::new();
                for pp in combinations(m, p) {
                    for qq in combinations(m, q) {
                        let mut covs: Vec<&Vector> = pp.iter().map(|&i| &o.alpha[i]).collect();
                        covs.extend(qq.iter().map(|&i| &beta[i]));
                        forms.push(o.wedge_covectors(&covs));
                    }
                }
                cols.extend(forms.iter().cloned());
                blocks.push((p, q, forms));
            }
            let basis = Matrix::from_columns(o.subsets[k].len(), &cols).unwrap();
            o.to_bigraded.push(basis.inverse().expect("bidegree forms span Λ^k"));
            o.blocks.push(blocks);
        }
        o
    }

    pub fn wedge_covectors(&self, covs: &[&Vector]) -> Vector {
        let k = covs.len();
        let perms = permutations(k);
        self.subsets[k]
            .iter()
            .map(|t| {
                let mut s = Gq::zero();
                for (perm, odd) in &perms {
                    let mut prod = Gq::one();
                    for (r, &c) in perm.iter().enumerate() {
                        prod = &prod * &covs[r][t[c]];
                    }
                    if *odd {
                        s = &s - &prod;
                    } else {
                        s = &s + &prod;
                    }
                }
                s
            })
            .collect()
    }

    /// `ω(e_{args})` for arbitrary basis indices.
    pub fn eval(&self, w: &[Gq], args: &[usize]) -> Gq {
        let mut sorted = args.to_vec();
        let mut odd = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    odd = !odd;
                } else if sorted[j] == sorted[j + 1] {
                    return Gq::zero();
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Gq::zero();
        }
        let v = w[self.index[args.len()][&sorted]].clone();
        if odd {
            -v
        } else {
            v
        }
    }

    /// `ω` with its first slot filled by the vector `x`.
    fn eval_first(&self, w: &[Gq], x: &[Gq], rest: &[usize]) -> Gq {
        let mut s = Gq::zero();
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut args = vec![a];
            args.extend_from_slice(rest);
            s = &s + &(c * &self.eval(w, &args));
        }
        s
    }

    pub fn d(&self, k: usize, w: &[Gq]) -> Vector {
        self.subsets[k + 1]
            .iter()
            .map(|t| {
                let mut s = Gq::zero();
                for i in 0..t.len() {
                    for jj in i + 1..t.len() {
                        let rest: Vec<usize> = t
                            .iter()
                            .enumerate()
                            .filter(|(r, _)| *r != i && *r != jj)
                            .map(|(_, &x)| x)
                            .collect();
                        let v = self.eval_first(w, &self.br[t[i]][t[jj]], &rest);
                        if (i + jj) % 2 == 0 {
                            s = &s + &v;
                        } else {
                            s = &s - &v;
                        }
                    }
                }
                s
            })
            .collect()
    }

    pub fn contract(&self, k: usize, x: &[Gq], w: &[Gq]) -> Vector {
        self.subsets[k - 1].iter().map(|t| self.eval_first(w, x, t)).collect()
    }

    /// `(𝓛_X ω)(y₁, …) = −Σ ω(…, [X, yᵢ], …)`.
    pub fn lie(&self, k: usize, x: &[Gq], w: &[Gq]) -> Vector {
        self.subsets[k]
            .iter()
            .map(|t| {
                let mut s = Gq::zero();
                for i in 0..t.len() {
                    let mut xy = vec![Gq::zero(); self.n];
                    for (a, c) in x.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (r, v) in self.br[a][t[i]].iter().enumerate() {
                            xy[r] = &xy[r] + &(c * v);
                        }
                    }
                    let mut rest: Vec<usize> = t.clone();
                    rest.remove(i);
                    let v = self.eval_first(w, &xy, &rest);
                    // moving slot i to the front costs (−1)^i
                    if i % 2 == 0 {
                        s = &s - &v;
                    } else {
                        s = &s + &v;
                    }
                }
                s
            })
            .collect()
    }

    pub fn block(&self, p: usize, q: usize) -> &Vec<Vector> {
        let k = p + q;
        &self.blocks[k].iter().find(|(a, b, _)| *a == p && *b == q).unwrap().2
    }

    fn block_offset(&self, p: usize, q: usize) -> usize {
        let k = p + q;
        let mut off = 0;
        for (a, b, f) in &self.blocks[k] {
            if *a == p && *b == q {
                return off;
            }
            off += f.len();
        }
        unreachable!()
    }

    /// Component in `(p, q)` of a degree-`p+q` form, as bidegree coordinates.
    pub fn component(&self, p: usize, q: usize, w: &[Gq]) -> Vector {
        let all = self.to_bigraded[p + q].apply(w).unwrap();
        let off = self.block_offset(p, q);
        all[off..off + self.block(p, q).len()].to_vec()
    }

    pub fn dim(&self, p: isize, q: isize) -> usize {
        if p < 0 || q < 0 || p as usize > self.m || q as usize > self.m {
            0
        } else {
            self.block(p as usize, q as usize).len()
        }
    }

    /// Matrix of the `(p, q) → (p + dp, q + dq)` part of `d`.
    pub fn d_component(&self, p: usize, q: usize, dp: isize, dq: isize) -> Matrix {
        let (tp, tq) = (p as isize + dp, q as isize + dq);
        let rows = self.dim(tp, tq);
        let src = self.block(p, q);
        let mut m = Matrix::zeros(rows, src.len());
        if rows == 0 {
            return m;
        }
        for (c, w) in src.iter().enumerate() {
            let dw = self.d(p + q, w);
            let comp = self.component(tp as usize, tq as usize, &dw);
            for (r, v) in comp.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Forms in `(p, q)` annihilated by `ι(X)` and `𝓛_X` for `X` in `dist`,
    /// as a subspace of bidegree coordinates.
    pub fn transverse(&self, p: usize, q: usize, dist: &[Vector]) -> Subspace {
        let src = self.block(p, q);
        let k = p + q;
        let mut rows: Vec<Vector> = Vec::new();
        for x in dist {
            let mut cols_i = Vec::new();
            let mut cols_l = Vec::new();
            for w in src {
                if k > 0 {
                    cols_i.push(self.contract(k, x, w));
                }
                cols_l.push(self.lie(k, x, w));
            }
            for cols in [cols_i, cols_l] {
                if cols.is_empty() {
                    continue;
                }
                let m = Matrix::from_columns(cols[0].len(), &cols).unwrap();
                rows.extend(m.row_vecs());
            }
        }
        if rows.is_empty() {
            return Subspace::full(src.len());
        }
        kernel(&Matrix::from_rows(&rows).unwrap())
    }

    /// Span of `N(e_a, e_b)` from the four-term formula.
    pub fn nijenhuis_image(&self) -> Subspace {
        let jv = |v: &[Gq]| self.j.apply(v).unwrap();
        let brv = |x: &[Gq], y: &[Gq]| -> Vector {
            let mut out = vec![Gq::zero(); self.n];
            for (a, ca) in x.iter().enumerate() {
                for (b, cb) in y.iter().enumerate() {
                    if ca.is_zero() || cb.is_zero() {
                        continue;
                    }
                    let s = ca * cb;
                    for (r, v) in self.br[a][b].iter().enumerate() {
                        out[r] = &out[r] + &(&s * v);
                    }
                }
            }
            out
        };
        let mut vs = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let (x, y) = (unit_vec(self.n, a), unit_vec(self.n, b));
                let t1 = brv(&jv(&x), &jv(&y));
                let t2 = jv(&brv(&jv(&x), &y));
                let t3 = jv(&brv(&x, &jv(&y)));
                let t4 = brv(&x, &y);
                vs.push(
                    (0..self.n)
                        .map(|r| &(&(&t1[r] - &t2[r]) - &t3[r]) - &t4[r])
                        .collect(),
                );
            }
        }
        Subspace::span(self.n, &vs).unwrap()
    }

    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for p in 0..=self.m {
            for q in 0..=self.m {
                v.push((p, q));
            }
        }
        v
    }

    /// Transverse Dolbeault dimensions for the distribution spanned by `dist`.
    pub fn trans_table(&self, dist: &[Vector]) -> BTreeMap<(usize, usize), usize> {
        let t: BTreeMap<_, _> = self
            .bidegrees()
            .into_iter()
            .map(|(p, q)| ((p, q), self.transverse(p, q, dist)))
            .collect();
        let rank = |p: usize, q: usize| -> usize {
            if q >= self.m {
                return 0;
            }
            image_dim(&self.d_component(p, q, 0, 1), &t[&(p, q)])
        };
        self.bidegrees()
            .into_iter()
            .map(|(p, q)| {
                let inc = if q > 0 { rank(p, q - 1) } else { 0 };
                ((p, q), t[&(p, q)].dim() - rank(p, q) - inc)
            })
            .collect()
    }

    /// `ker μ̄ / im μ̄` dims and the cohomology of `∂̄` on it, via
    /// `{x ∈ Z : ∂̄x ∈ B'} / (B + ∂̄Z_prev)`.
    pub fn mubar_and_cw(&self) -> (BTreeMap<(usize, usize), usize>, BTreeMap<(usize, usize), usize>) {
        let mut z = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (p, q) in self.bidegrees() {
            let n = self.dim(p as isize, q as isize);
            let mu = self.d_component(p, q, -1, 2);
            z.insert(
                (p, q),
                if mu.rows() == 0 { Subspace::full(n) } else { kernel(&mu) },
            );
            let img = if p < self.m && q >= 2 {
                let prev = self.d_component(p + 1, q - 2, -1, 2);
                Subspace::span(n, &prev_columns(&prev)).unwrap()
            } else {
                Subspace::zero(n)
            };
            b.insert((p, q), img);
        }
        let mubar = self
            .bidegrees()
            .into_iter()
            .map(|k| (k, z[&k].dim() - b[&k].dim()))
            .collect();
        let mut cw = BTreeMap::new();
        for (p, q) in self.bidegrees() {
            let n = self.dim(p as isize, q as isize);
            let zk = &z[&(p, q)];
            let cyc = if q < self.m {
                let db = self.d_component(p, q, 0, 1);
                let target = &b[&(p, q + 1)];
                // x ∈ Z with ∂̄x ∈ B': kernel of Z → Λ^{p,q+1}/B'
                let mut rows = Vec::new();
                for v in zk.basis() {
                    rows.push(target.reduce(&db.apply(v).unwrap()).unwrap());
                }
                let coeffs = transpose_kernel(&rows, zk.dim());
                let vs: Vec<Vector> = coeffs
                    .iter()
                    .map(|c| combine(zk.basis(), c, n))
                    .collect();
                Subspace::span(n, &vs).unwrap()
            } else {
                zk.clone()
            };
            let bnd = if q > 0 {
                let db = self.d_component(p, q - 1, 0, 1);
                let imgs: Vec<Vector> =
                    z[&(p, q - 1)].basis().iter().map(|v| db.apply(v).unwrap()).collect();
                b[&(p, q)].add_vectors(&imgs).unwrap()
            } else {
                b[&(p, q)].clone()
            };
            cw.insert((p, q), cyc.dim() - bnd.dim());
        }
        (mubar, cw)
    }
}

fn prev_columns(m: &Matrix) -> Vec<Vector> {
    (0..m.cols()).map(|c| m.column(c)).collect()
}

fn combine(basis: &[Vector], c: &[Gq], n: usize) -> Vector {
    let mut out = vec![Gq::zero(); n];
    for (b, s) in basis.iter().zip(c) {
        for (r, v) in b.iter().enumerate() {
            out[r] = &out[r] + &(s * v);
        }
    }
    out
}

/// Coefficient vectors `c` with `Σ c_i rows_i = 0`.
fn transpose_kernel(rows: &[Vector], count: usize) -> Vec<Vector> {
    if count == 0 {
        return vec![];
    }
    if rows[0].is_empty() {
        return (0..count).map(|i| unit_vec(count, i)).collect();
    }
    let m = Matrix::from_columns(rows[0].len(), rows).unwrap();
    kernel(&m).basis().to_vec()
}

pub fn image_dim(m: &Matrix, sub: &Subspace) -> usize {
    if m.rows() == 0 {
        return 0;
    }
    let imgs: Vec<Vector> = sub.basis().iter().map(|v| m.apply(v).unwrap()).collect();
    Subspace::span(m.rows(), &imgs).unwrap().dim()
}

/// Catalog entries usable by the `(L, J)` pipelines.
pub fn strict_catalog() -> Vec<(String, LieAlgebra, AlmostComplexStructure)> {
    all_entries()
        .unwrap()
        .into_iter()
        .filter(|e| e.h.as_ref().is_none_or(|h| h.is_zero()))
        .map(|e| (e.name, e.algebra, e.j))
        .collect()
}

pub const RANDOM_BASE: u64 = 1000;

pub fn random_pool(count: usize) -> Vec<(String, LieAlgebra, AlmostComplexStructure)> {
    (0..count as u64)
        .map(|i| {
            let r = random_instance(RANDOM_BASE + i).unwrap();
            (format!("seed {} ({})", r.seed, r.label), r.algebra, r.j)
        })
        .collect()
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
