//! Exact linear algebra over ℚ(i).
//!
//! Every subspace is stored in reduced row-echelon form, so two spans are
//! equal exactly when their stored bases are identical. Nothing here uses
//! floating point.

mod matrix;
mod quotient;
mod scalar;
mod subspace;

pub use matrix::Matrix;
pub use quotient::{induced_map_on_quotient, InducedMap, QuotientBasis};
pub use scalar::{
    format_rational, parse_rational, rat, ratio, GaussianRational, Gq, Rational,
};
pub use subspace::{image, kernel, rref, Subspace};

use num_traits::Zero;

pub type Vector = Vec<Gq>;

pub fn zero_vec(n: usize) -> Vector {
    vec![Gq::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Gq::from_int(1);
    v
}

/// Builds a real vector from small integers.
pub fn int_vec(entries: &[i64]) -> Vector {
    entries.iter().map(|&x| Gq::from_int(x)).collect()
}

pub fn is_zero_vec(v: &[Gq]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_add(a: &[Gq], b: &[Gq]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Gq], b: &[Gq]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Gq], s: &Gq) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_neg(a: &[Gq]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn vec_conj(a: &[Gq]) -> Vector {
    a.iter().map(Gq::conj).collect()
}

/// `a += s·b`, skipping the work when `s` is zero.
pub fn axpy(a: &mut [Gq], s: &Gq, b: &[Gq]) {
    if s.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += s * y;
        }
    }
}

/// Bilinear pairing `Σ aᵢ bᵢ` (no conjugation).
pub fn dot(a: &[Gq], b: &[Gq]) -> Gq {
    let mut acc = Gq::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub(crate) fn check_len(v: &[Gq], n: usize, what: &str) -> crate::Result<()> {
    if v.len() != n {
        return Err(crate::Error::Shape(format!(
            "{what}: expected length {n}, got {}",
            v.len()
        )));
    }
    Ok(())
}

/// Renders `v` as a combination of `e1, e2, …`, e.g. `-e3 + (1/2)e1`.
pub fn fmt_vector(v: &[Gq]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let s = c.to_string();
            match s.as_str() {
                "1" => format!("e{}", k + 1),
                "-1" => format!("-e{}", k + 1),
                _ => format!("({s})e{}", k + 1),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
