//! Full analysis of an `(L, J)` pair and its JSON / text renderings.

use serde::{Deserialize, Serialize};

use crate::acs::AlmostComplexStructure;
use crate::cohomology::{
    compare_p0, generalized_dolbeault, mu_bar_cohomology, transverse_dolbeault, CohomologyTable,
    GeneralizedDolbeault, MuBarCohomology, P0Row, TransverseCohomology,
};
use crate::error::{Error, Result};
use crate::flag::{classify_with, derived_flag, Classification, DerivedFlag};
use crate::forms::{verify_d2_relations_in, ComponentOperators, D2Report, FormSpace};
use crate::lie::LieAlgebra;

/// Which cohomology tables to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheorySelection {
    Trans,
    Cw,
    #[default]
    Both,
}

impl TheorySelection {
    pub fn shows_trans(self) -> bool {
        self != TheorySelection::Cw
    }

    pub fn shows_cw(self) -> bool {
        self != TheorySelection::Trans
    }
}

pub struct Analysis {
    pub space: FormSpace,
    pub ops: ComponentOperators,
    pub flag: DerivedFlag,
    pub classification: Classification,
    pub d2: D2Report,
    pub trans: TransverseCohomology,
    pub mu_bar: MuBarCohomology,
    pub cw: GeneralizedDolbeault,
    pub p0: Vec<P0Row>,
}

/// Runs every pipeline. A failed `d²` relation or `(p, 0)` mismatch is an
/// error.
pub fn analyze(l: &LieAlgebra, j: &AlmostComplexStructure) -> Result<Analysis> {
    l.ensure_valid()?;
    j.ensure_strict(l)?;
    let space = FormSpace::new(l, j)?;
    let ops = space.component_operators()?;
    let d2 = verify_d2_relations_in(&space, &ops)?;
    if let Some(f) = d2.failures.first() {
        return Err(Error::internal(
            "forms",
            format!("{} fails at ({},{})", f.relation, f.bidegree.0, f.bidegree.1),
        ));
    }
    let flag = derived_flag(l, j)?;
    let classification = classify_with(l, j, &flag)?;
    let trans = transverse_dolbeault(&space, &ops, &flag)?;
    let mu_bar = mu_bar_cohomology(&space, &ops)?;
    let cw = generalized_dolbeault(&space, &ops, &mu_bar)?;
    let p0 = compare_p0(&trans.table, &cw.table, space.half_dim())?;
    Ok(Analysis {
        space,
        ops,
        flag,
        classification,
        d2,
        trans,
        mu_bar,
        cw,
        p0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tables {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cw: Option<CohomologyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_bar: Option<CohomologyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trans: Option<CohomologyTable>,
}

/// Machine-readable report; keys serialize in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub classification: Classification,
    pub flag_dims: Vec<usize>,
    pub p0_check: String,
    pub tables: Tables,
}

fn truncate(t: &CohomologyTable, max_degree: Option<usize>) -> CohomologyTable {
    CohomologyTable {
        theory: t.theory,
        dims: t
            .dims
            .iter()
            .filter(|((p, q), _)| max_degree.is_none_or(|k| p + q <= k))
            .map(|(&k, &v)| (k, v))
            .collect(),
    }
}

impl Analysis {
    pub fn report(&self, theory: TheorySelection, max_degree: Option<usize>) -> Report {
        Report {
            classification: self.classification.clone(),
            flag_dims: self.flag.dims(),
            p0_check: "pass".into(),
            tables: Tables {
                cw: theory.shows_cw().then(|| truncate(&self.cw.table, max_degree)),
                mu_bar: theory.shows_cw().then(|| truncate(&self.mu_bar.table, max_degree)),
                trans: theory.shows_trans().then(|| truncate(&self.trans.table, max_degree)),
            },
        }
    }

    pub fn half_dim(&self) -> usize {
        self.space.half_dim()
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Dimensions in a grid, `p` down and `q` across; `.` marks omitted entries.
pub fn render_grid(t: &CohomologyTable, half_dim: usize) -> String {
    let cell = |p: usize, q: usize| match t.dims.get(&(p, q)) {
        Some(d) => d.to_string(),
        None => ".".to_string(),
    };
    let width = (0..=half_dim)
        .flat_map(|p| (0..=half_dim).map(move |q| (p, q)))
        .map(|(p, q)| cell(p, q).len())
        .max()
        .unwrap_or(1)
        .max(half_dim.to_string().len());
    let mut out = format!("{:>3} |", "p\\q");
    for q in 0..=half_dim {
        out.push_str(&format!(" {q:>width$}"));
    }
    out.push('\n');
    out.push_str(&format!("{}\n", "-".repeat(5 + (width + 1) * (half_dim + 1))));
    for p in 0..=half_dim {
        out.push_str(&format!("{p:>3} |"));
        for q in 0..=half_dim {
            out.push_str(&format!(" {:>width$}", cell(p, q)));
        }
        out.push('\n');
    }
    out
}

pub fn table_title(name: &str) -> &'static str {
    match name {
        "trans" => "transverse Dolbeault",
        "mu_bar" => "mu-bar cohomology",
        _ => "generalized Dolbeault",
    }
}

pub fn classification_line(c: &Classification) -> String {
    format!("{}, dim Im N = {}", c.class, c.dim_im_n)
}

impl Report {
    pub fn to_text(&self, half_dim: usize) -> String {
        let mut out = format!("{}\n", classification_line(&self.classification));
        out.push_str(&format!("flag dims: {:?}\n", self.flag_dims));
        for (name, t) in [
            ("trans", &self.tables.trans),
            ("mu_bar", &self.tables.mu_bar),
            ("cw", &self.tables.cw),
        ] {
            if let Some(t) = t {
                out.push_str(&format!("\n{}:\n", table_title(name)));
                out.push_str(&render_grid(t, half_dim));
            }
        }
        out.push_str(&format!("\np0 check: {}\n", self.p0_check));
        out
    }
}
