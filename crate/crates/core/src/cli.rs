//! Command-line driver behind the `tdol` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::acs::{validate_acs, validate_acs_mod_h, AcsReport};
use crate::catalog::{catalog_get_with, random_instance, CatalogEntry};
use crate::error::{Error, Result};
use crate::flag::{derived_flag, t10_derived_involutive};
use crate::homogeneous::{
    base_nijenhuis, fibration_report, invariance_check, j_antilinearity_defect,
    minimal_homogeneous_check, validate_pair,
};
use crate::lie::JacobiDefect;
use crate::linalg::{fmt_vector, is_zero_vec, Gq, Subspace, Vector};
use crate::report::{analyze, classification_line, render_grid, table_title, TheorySelection};
use crate::schema::{load_instance_file, Instance};

#[derive(Parser, Debug, Clone)]
#[command(name = "tdol", version, about = "Transverse and generalized Dolbeault cohomology of left-invariant almost complex structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Check the Jacobi identity and J² = −Id (or its mod-h version).
    Validate,
    /// Integrability class and dim Im N.
    Classify,
    /// Stages of the derived flag.
    Flag,
    /// Cohomology tables.
    Cohomology,
    /// Checks on a homogeneous pair (g, h, J).
    Homogeneous,
    /// Everything, including the (p,0) comparison.
    Report,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Catalog name or path to an instance file.
    #[arg(global = true)]
    pub target: Option<String>,
    /// Instance file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Built-in entry; `abelian2n:k` sets n = k.
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Parameter for `abelian2n`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = TheoryArg::Both, global = true)]
    pub theory: TheoryArg,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Without an input: analyze the random instance for this seed. With
    /// `homogeneous`: seeds the sampled vector pairs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Drop table entries with p + q above this.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TheoryArg {
    Trans,
    Cw,
    #[default]
    Both,
}

impl From<TheoryArg> for TheorySelection {
    fn from(t: TheoryArg) -> Self {
        match t {
            TheoryArg::Trans => TheorySelection::Trans,
            TheoryArg::Cw => TheorySelection::Cw,
            TheoryArg::Both => TheorySelection::Both,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Result of one command: what goes to stdout and the exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, status: 0 }
    }
}

fn split_catalog_name(name: &str, n: Option<usize>) -> Result<(String, Option<usize>)> {
    match name.split_once(':') {
        Some((base, k)) => {
            let k = k
                .parse()
                .map_err(|_| Error::Schema(format!("bad catalog parameter in `{name}`")))?;
            Ok((base.to_string(), Some(k)))
        }
        None => Ok((name.to_string(), n)),
    }
}

/// Raw instance named by the options; not yet validated.
pub fn resolve_instance(o: &Opts) -> Result<Instance> {
    let given = [o.target.is_some(), o.input.is_some(), o.catalog.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given > 1 {
        return Err(Error::Schema("give exactly one of TARGET, --input, --catalog".into()));
    }
    if let Some(p) = &o.input {
        return load_instance_file(p);
    }
    if let Some(c) = &o.catalog {
        let (name, n) = split_catalog_name(c, o.n)?;
        return Ok(catalog_get_with(&name, n)?.to_instance());
    }
    if let Some(t) = &o.target {
        let path = PathBuf::from(t);
        if path.exists() || t.ends_with(".json") {
            return load_instance_file(&path);
        }
        let (name, n) = split_catalog_name(t, o.n)?;
        return Ok(catalog_get_with(&name, n)?.to_instance());
    }
    if let Some(seed) = o.seed {
        let r = random_instance(seed)?;
        return Ok(Instance {
            name: format!("random({seed}, {})", r.label),
            algebra: r.algebra,
            j: r.j.matrix().clone(),
            h: None,
            seed: Some(seed),
            expected: None,
        });
    }
    Err(Error::Schema("no input: give a catalog name, a file, or --seed".into()))
}

pub fn resolve_entry(o: &Opts) -> Result<CatalogEntry> {
    CatalogEntry::from_instance(resolve_instance(o)?)
}

/// Rejects homogeneous pairs with nonzero `h` for the `(L, J)` pipelines.
fn strict_entry(o: &Opts) -> Result<CatalogEntry> {
    let e = resolve_entry(o)?;
    if e.h.as_ref().is_some_and(|h| !h.is_zero()) {
        return Err(Error::Precondition(format!(
            "{} is a homogeneous pair with nonzero h; use the homogeneous command",
            e.name
        )));
    }
    Ok(e)
}

fn vec_json(v: &[Gq]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn basis_json(s: &Subspace) -> Value {
    Value::Array(s.basis().iter().map(|b| vec_json(b)).collect())
}

fn defect_json(d: &JacobiDefect) -> Value {
    let (i, j, k) = d.triple;
    json!({"triple": [i + 1, j + 1, k + 1], "defect": vec_json(&d.defect)})
}

fn acs_json(r: &AcsReport) -> Value {
    json!({
        "offending_columns": r.offending_columns.iter().map(|c| c + 1).collect::<Vec<_>>(),
        "h_not_preserved": r.h_not_preserved.iter().map(|c| c + 1).collect::<Vec<_>>(),
        "parity_ok": r.parity_ok,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn cmd_validate(o: &Opts) -> Result<Outcome> {
    let inst = resolve_instance(o)?;
    let jac = inst.algebra.validate();
    let acs = match &inst.h {
        Some(h) => validate_acs_mod_h(&inst.algebra, &inst.j, h)?,
        None => validate_acs(&inst.algebra, &inst.j)?,
    };
    let pair = match &inst.h {
        Some(_) if jac.is_valid() => Some(CatalogEntry::from_instance(inst.clone()).and_then(|e| {
            let p = e.pair()?;
            validate_pair(&p)
        })),
        _ => None,
    };
    let pair_violations = match &pair {
        Some(Ok(r)) => r.violations(),
        Some(Err(e)) => vec![e.to_string()],
        None => vec![],
    };
    let valid = jac.is_valid() && acs.is_valid() && pair_violations.is_empty();
    let stdout = match o.format {
        Format::Json => pretty(&json!({
            "name": inst.name,
            "valid": valid,
            "jacobi_defects": jac.defects.iter().map(defect_json).collect::<Vec<_>>(),
            "acs": acs_json(&acs),
            "pair_violations": pair_violations,
        })),
        Format::Text => {
            let mut s = String::new();
            if jac.is_valid() {
                s.push_str("lie_core: Jacobi identity holds\n");
            } else {
                s.push_str(&format!(
                    "lie_core: Jacobi identity fails on {} triple(s)\n",
                    jac.defects.len()
                ));
                for d in &jac.defects {
                    s.push_str(&format!("  {d}\n"));
                }
            }
            if acs.is_valid() {
                s.push_str(if inst.h.is_some() {
                    "acs: J² = −Id mod h\n"
                } else {
                    "acs: J² = −Id\n"
                });
            } else {
                if !acs.parity_ok {
                    s.push_str("acs: dimension parity fails\n");
                }
                for c in &acs.offending_columns {
                    s.push_str(&format!("acs: J² ≠ −Id on e{}\n", c + 1));
                }
                for c in &acs.h_not_preserved {
                    s.push_str(&format!("acs: J does not preserve h basis vector {}\n", c + 1));
                }
            }
            for v in &pair_violations {
                s.push_str(&format!("homogeneous: {v}\n"));
            }
            s.push_str(if valid { "valid\n" } else { "invalid\n" });
            s
        }
    };
    Ok(Outcome {
        stdout,
        status: if valid { 0 } else { 1 },
    })
}

fn cmd_classify(o: &Opts) -> Result<Outcome> {
    let e = strict_entry(o)?;
    let c = crate::flag::classify(&e.algebra, &e.j)?;
    Ok(Outcome::ok(match o.format {
        Format::Json => pretty(&serde_json::to_value(&c).expect("json")),
        Format::Text => format!("{}\n", classification_line(&c)),
    }))
}

fn cmd_flag(o: &Opts) -> Result<Outcome> {
    let e = strict_entry(o)?;
    let f = derived_flag(&e.algebra, &e.j)?;
    let involutive: Vec<bool> = (1..=f.stable_index)
        .map(|k| t10_derived_involutive(&e.algebra, &e.j, &f, k).map(|r| r.involutive))
        .collect::<Result<_>>()?;
    Ok(Outcome::ok(match o.format {
        Format::Json => pretty(&json!({
            "dims": f.dims(),
            "stable_index": f.stable_index,
            "stages": f.stages.iter().map(basis_json).collect::<Vec<_>>(),
            "t10_involutive": involutive,
        })),
        Format::Text => {
            let mut s = format!("stable index {}, dims {:?}\n", f.stable_index, f.dims());
            for (k, st) in f.stages.iter().enumerate() {
                let b: Vec<String> = st.basis().iter().map(|v| fmt_vector(v)).collect();
                s.push_str(&format!(
                    "D({}) dim {}: span{{{}}}; T10 + D involutive: {}\n",
                    k + 1,
                    st.dim(),
                    b.join(", "),
                    involutive[k]
                ));
            }
            s
        }
    }))
}

fn cmd_cohomology(o: &Opts, full: bool) -> Result<Outcome> {
    let e = strict_entry(o)?;
    let a = analyze(&e.algebra, &e.j)?;
    let r = a.report(o.theory.into(), o.max_degree);
    let m = a.half_dim();
    Ok(Outcome::ok(match (o.format, full) {
        (Format::Json, true) => format!("{}\n", r.to_json()),
        (Format::Json, false) => pretty(&json!({ "tables": r.tables })),
        (Format::Text, true) => r.to_text(m),
        (Format::Text, false) => {
            let mut s = String::new();
            for (name, t) in [("trans", &r.tables.trans), ("mu_bar", &r.tables.mu_bar), ("cw", &r.tables.cw)] {
                if let Some(t) = t {
                    s.push_str(&format!("{}:\n{}", table_title(name), render_grid(t, m)));
                }
            }
            s
        }
    }))
}

const SAMPLED_PAIRS: usize = 16;

fn random_vector(n: usize, rng: &mut impl Rng) -> Vector {
    (0..n).map(|_| Gq::from_int(rng.gen_range(-3..=3))).collect()
}

fn cmd_homogeneous(o: &Opts) -> Result<Outcome> {
    let e = resolve_entry(o)?;
    let p = e.pair()?;
    let valid = validate_pair(&p)?;
    let inv = invariance_check(&p)?;
    let min = minimal_homogeneous_check(&p)?;
    let fib = fibration_report(&p)?;
    let n = p.dim();
    let mut base_zero = true;
    for a in 0..n {
        for b in a + 1..n {
            let v = base_nijenhuis(&p, &crate::linalg::unit_vec(n, a), &crate::linalg::unit_vec(n, b))?;
            base_zero &= is_zero_vec(&v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed.unwrap_or(0));
    let mut antilinear = true;
    for _ in 0..SAMPLED_PAIRS {
        let (x, y) = (random_vector(n, &mut rng), random_vector(n, &mut rng));
        antilinear &= is_zero_vec(&j_antilinearity_defect(&p, &x, &y)?);
    }
    Ok(Outcome::ok(match o.format {
        Format::Json => pretty(&json!({
            "antilinearity_sampled": antilinear,
            "base_nijenhuis_zero": base_zero,
            "fibration": {
                "applicable": fib.applicable,
                "dim_im_N": fib.dim_im_n,
                "fibers_complex": fib.fibers_complex,
                "ideal": fib.ideal,
                "subalgebra": fib.subalgebra,
                "transverse_complex": fib.transverse_complex,
            },
            "h_dim": p.h.dim(),
            "invariant": inv.invariant,
            "minimal": min.holds,
            "minimal_via_ideal": min.ideal_shortcut,
            "valid": valid.is_valid(),
        })),
        Format::Text => {
            let mut s = format!("pair valid: {}\n", valid.is_valid());
            s.push_str(&format!("dim h = {}, dim (Im N + h)/h = {}\n", p.h.dim(), fib.dim_im_n));
            s.push_str(&format!("invariant: {}\n", inv.invariant));
            s.push_str(&format!("base Nijenhuis vanishes mod h: {base_zero}\n"));
            s.push_str(&format!("N(Ja,b) = -J N(a,b) mod h on {SAMPLED_PAIRS} samples: {antilinear}\n"));
            s.push_str(&format!(
                "minimality criterion: {}{}\n",
                min.holds,
                if min.ideal_shortcut { " (Im N is an ideal)" } else { "" }
            ));
            if fib.applicable {
                s.push_str(&format!(
                    "fibration: subalgebra {}, ideal {}, fibers complex {}, transverse complex {}\n",
                    fib.subalgebra, fib.ideal, fib.fibers_complex, fib.transverse_complex
                ));
            }
            s
        }
    }))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let o = &cli.opts;
    match cli.command {
        Command::Validate => cmd_validate(o),
        Command::Classify => cmd_classify(o),
        Command::Flag => cmd_flag(o),
        Command::Cohomology => cmd_cohomology(o, false),
        Command::Homogeneous => cmd_homogeneous(o),
        Command::Report => cmd_cohomology(o, true),
    }
}

/// Parses `args`, runs, and returns `(stdout, stderr, status)`.
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                (text, String::new(), 0)
            } else {
                (String::new(), text, status)
            };
        }
    };
    match execute(&cli) {
        Ok(out) => (out.stdout, String::new(), out.status),
        Err(e) => (String::new(), format!("error: {e}\n"), e.exit_code()),
    }
}
