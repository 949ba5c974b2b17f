//! Built-in instances and seeded random instance generation.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acs::{nijenhuis_image, AlmostComplexStructure};
use crate::error::{Error, Result};
use crate::homogeneous::{validate_pair, HomogeneousPair};
use crate::lie::LieAlgebra;
use crate::linalg::{rat, Gq, Matrix, Rational, Subspace};
use crate::schema::{Instance, InstanceFile};

pub const CATALOG_NAMES: [&str; 7] = [
    "abelian2n",
    "kodaira_thurston",
    "kt_integrable",
    "iwasawa",
    "su2_mod_u1",
    "heisenberg5_plus_r",
    "max_nonintegrable_candidate",
];

const FILES: [(&str, &str); 6] = [
    ("kodaira_thurston", include_str!("../catalog/kodaira_thurston.json")),
    ("kt_integrable", include_str!("../catalog/kt_integrable.json")),
    ("iwasawa", include_str!("../catalog/iwasawa.json")),
    ("su2_mod_u1", include_str!("../catalog/su2_mod_u1.json")),
    ("heisenberg5_plus_r", include_str!("../catalog/heisenberg5_plus_r.json")),
    (
        "max_nonintegrable_candidate",
        include_str!("../catalog/max_nonintegrable_candidate.json"),
    ),
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: LieAlgebra,
    pub j: AlmostComplexStructure,
    pub h: Option<Subspace>,
    pub seed: Option<u64>,
    pub expected: Option<serde_json::Value>,
}

impl CatalogEntry {
    /// Validates and wraps a parsed instance.
    pub fn from_instance(inst: Instance) -> Result<Self> {
        inst.algebra.ensure_valid()?;
        let j = match &inst.h {
            Some(h) => {
                let pair = HomogeneousPair::new(inst.algebra.clone(), h.clone(), inst.j.clone())?;
                let r = validate_pair(&pair)?;
                if !r.is_valid() {
                    return Err(Error::Homogeneous(format!(
                        "{}: {}",
                        inst.name,
                        r.violations().join("; ")
                    )));
                }
                pair.j
            }
            None => {
                let j = AlmostComplexStructure::new(inst.j.clone())?;
                j.ensure_strict(&inst.algebra)?;
                j
            }
        };
        Ok(Self {
            name: inst.name,
            algebra: inst.algebra,
            j,
            h: inst.h,
            seed: inst.seed,
            expected: inst.expected,
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.h.is_some()
    }

    pub fn pair(&self) -> Result<HomogeneousPair> {
        let h = self.h.clone().unwrap_or_else(|| Subspace::zero(self.algebra.dim()));
        HomogeneousPair::new(self.algebra.clone(), h, self.j.matrix().clone())
    }

    pub fn to_instance(&self) -> Instance {
        Instance {
            name: self.name.clone(),
            algebra: self.algebra.clone(),
            j: self.j.matrix().clone(),
            h: self.h.clone(),
            seed: self.seed,
            expected: self.expected.clone(),
        }
    }
}

/// `ℝ^{2n}` with `J₀`.
pub fn abelian2n(n: usize) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(Error::Schema("abelian2n needs n ≥ 1".into()));
    }
    Ok(CatalogEntry {
        name: format!("abelian2n(n={n})"),
        algebra: LieAlgebra::abelian(2 * n),
        j: AlmostComplexStructure::standard(2 * n),
        h: None,
        seed: None,
        expected: None,
    })
}

/// Looks up a built-in entry; `n` parametrizes `abelian2n` (default 1).
pub fn catalog_get_with(name: &str, n: Option<usize>) -> Result<CatalogEntry> {
    if name == "abelian2n" {
        return abelian2n(n.unwrap_or(1));
    }
    let Some((_, text)) = FILES.iter().find(|(k, _)| *k == name) else {
        return Err(Error::UnknownCatalogEntry {
            name: name.to_string(),
            available: CATALOG_NAMES.join(", "),
        });
    };
    let entry = CatalogEntry::from_instance(InstanceFile::from_json(text)?.parse()?)?;
    if name == "iwasawa" && !nijenhuis_image(&entry.algebra, &entry.j)?.is_zero() {
        return Err(Error::internal("catalog", "iwasawa structure is not integrable"));
    }
    Ok(entry)
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    catalog_get_with(name, None)
}

/// Every entry, with `abelian2n` for `n = 1, 2, 3`.
pub fn all_entries() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(abelian2n(n)?);
    }
    for name in &CATALOG_NAMES[1..] {
        out.push(catalog_get(name)?);
    }
    Ok(out)
}

const MAX_RETRIES: usize = 64;

/// Random invertible matrix with entries in `{−2, …, 2}`.
pub fn random_invertible(n: usize, rng: &mut impl Rng) -> Matrix {
    for _ in 0..MAX_RETRIES {
        let mut p = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                p.set(r, c, Gq::from_int(rng.gen_range(-2..=2)));
            }
        }
        if p.inverse().is_some() {
            return p;
        }
    }
    Matrix::identity(n)
}

/// `J = P·J₀·P⁻¹` for a seeded random invertible `P`.
pub fn random_acs(l: &LieAlgebra, seed: u64) -> Result<AlmostComplexStructure> {
    let n = l.dim();
    if n % 2 != 0 {
        return Err(Error::InvalidAcs(format!(
            "odd dimension {n} admits no almost complex structure"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_invertible(n, &mut rng);
    let pinv = p.inverse().expect("invertible by construction");
    let j0 = AlmostComplexStructure::standard(n);
    AlmostComplexStructure::new(p.mul(j0.matrix())?.mul(&pinv)?)
}

/// 2-step nilpotent algebra `V ⊕ Z` with `[V, V] ⊆ Z` and coefficients in
/// `{−1, 0, 1}`.
pub fn random_two_step_nilpotent(generators: usize, center: usize, rng: &mut impl Rng) -> Result<LieAlgebra> {
    let n = generators + center;
    let mut entries = Vec::new();
    for a in 0..generators {
        for b in a + 1..generators {
            let cs: Vec<(usize, Rational)> = (0..center)
                .map(|k| (generators + k, rat(rng.gen_range(-1..=1))))
                .collect();
            entries.push((a, b, cs));
        }
    }
    LieAlgebra::new(n, entries)
}

pub fn su2() -> LieAlgebra {
    LieAlgebra::from_int_table(3, &[(1, 2, &[(3, 1)]), (2, 3, &[(1, 1)]), (3, 1, &[(2, 1)])])
        .expect("su(2) table")
}

/// `so(3) ⊕ so(3)`.
pub fn so3_plus_so3() -> LieAlgebra {
    su2().direct_sum(&su2())
}

/// `u(2) = su(2) ⊕ ℝ`.
pub fn u2() -> LieAlgebra {
    su2().direct_sum(&LieAlgebra::abelian(1))
}

/// A seeded random `(L, J)` of even dimension at most 6.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub label: String,
    pub seed: u64,
    pub algebra: LieAlgebra,
    pub j: AlmostComplexStructure,
}

fn base_algebra(kind: u32, rng: &mut ChaCha8Rng) -> Result<(String, LieAlgebra)> {
    Ok(match kind {
        0 => {
            let n = 2 * rng.gen_range(1..=3);
            (format!("abelian{n}"), LieAlgebra::abelian(n))
        }
        1 => ("kt".into(), catalog_get("kodaira_thurston")?.algebra),
        2 => ("iwasawa".into(), catalog_get("iwasawa")?.algebra),
        3 => ("h5+r".into(), catalog_get("heisenberg5_plus_r")?.algebra),
        4 => ("so3+so3".into(), so3_plus_so3()),
        5 => ("u2".into(), u2()),
        _ => {
            let (g, z) = [(2, 2), (3, 1), (3, 3), (4, 2), (5, 1)][rng.gen_range(0..5)];
            (format!("nil{g}+{z}"), random_two_step_nilpotent(g, z, rng)?)
        }
    })
}

pub fn random_instance(seed: u64) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = rng.gen_range(0..8);
    let (mut label, mut algebra) = base_algebra(kind, &mut rng)?;
    if rng.gen_bool(0.3) {
        let p = random_invertible(algebra.dim(), &mut rng);
        algebra = algebra.change_basis(&p)?;
        label.push_str("/basis");
    }
    let j = random_acs(&algebra, rng.next_u64())?;
    Ok(RandomInstance {
        label,
        seed,
        algebra,
        j,
    })
}

/// `count` instances with seeds `base, base + 1, …`.
pub fn random_suite(base: u64, count: usize) -> Result<Vec<RandomInstance>> {
    (0..count as u64).map(|i| random_instance(base + i)).collect()
}
