mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use transverse_dolbeault::acs::{
    lie_derivative_endo, nijenhuis, nijenhuis_image, split_10_01, AlmostComplexStructure,
};
use transverse_dolbeault::catalog::{all_entries, random_instance, CatalogEntry};
use transverse_dolbeault::cohomology::{
    compare_p0, conjugation_symmetric, generalized_dolbeault, hp0_transverse_dimension,
    mu_bar_cohomology, submodule_properties, transverse_dolbeault, FormFamily,
};
use transverse_dolbeault::flag::{
    complexified_sum_involutive, derived_flag, t10_derived_involutive,
};
use transverse_dolbeault::forms::{ce_d, verify_d2_relations_in, BigradedForm, FormSpace};
use transverse_dolbeault::homogeneous::{
    base_nijenhuis, invariance_check, j_antilinearity_defect, minimal_homogeneous_check,
    minimal_homogeneous_check_full, shifted_lift, validate_pair, HomogeneousPair,
};
use transverse_dolbeault::lie::{subalgebra_report, LieAlgebra};
use transverse_dolbeault::linalg::{
    image, induced_map_on_quotient, is_zero_vec, kernel, vec_add, vec_neg, vec_scale, vec_sub,
    Gq, Matrix, QuotientBasis, Subspace, Vector,
};

fn gq_small() -> impl Strategy<Value = Gq> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| &Gq::from_int(a) + &Gq::from_int(b).mul_i())
}

fn vectors(n: usize, count: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(prop::collection::vec(gq_small(), n), count)
}

fn rng_vec(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    (0..n)
        .map(|_| &Gq::from_int(rng.gen_range(-2..=2)) + &Gq::from_int(rng.gen_range(-2..=2)).mul_i())
        .collect()
}

fn real_rng_vec(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    (0..n).map(|_| Gq::from_int(rng.gen_range(-3..=3))).collect()
}

fn instance(seed: u64) -> (LieAlgebra, AlmostComplexStructure) {
    let r = random_instance(seed).unwrap();
    (r.algebra, r.j)
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

// exact linear algebra

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn rref_is_canonical(rows in vectors(5, 4), mix in prop::collection::vec(gq_small(), 16)) {
        let a = Subspace::span(5, &rows).unwrap();
        prop_assert_eq!(&Subspace::span(5, a.basis()).unwrap(), &a);
        // invertible-ish recombination: add multiples of later rows to earlier ones
        let mut mixed = rows.clone();
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                mixed[i] = vec_add(&mixed[i], &vec_scale(&rows[j], &mix[i * 4 + j]));
            }
        }
        mixed.reverse();
        prop_assert_eq!(Subspace::span(5, &mixed).unwrap(), a);
    }

    #[test]
    fn dimension_formula(a in vectors(6, 3), b in vectors(6, 4)) {
        let a = Subspace::span(6, &a).unwrap();
        let b = Subspace::span(6, &b).unwrap();
        let s = a.sum(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a).unwrap() && i.is_subspace_of(&b).unwrap());
    }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn induced_map_commutes_with_projection(
        n in 2usize..=8,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=8);
        let mut f = Matrix::zeros(m, n);
        for r in 0..m {
            for c in 0..n {
                f.set(r, c, Gq::from_int(rng.gen_range(-2..=2)));
            }
        }
        let zs: Vec<Vector> = (0..rng.gen_range(1..=n)).map(|_| rng_vec(&mut rng, n)).collect();
        let z = Subspace::span(n, &zs).unwrap();
        let bs: Vec<Vector> = z.basis().iter().take(rng.gen_range(0..=z.dim())).cloned().collect();
        let b = Subspace::span(n, &bs).unwrap();
        let extra: Vec<Vector> = (0..rng.gen_range(0..=2)).map(|_| rng_vec(&mut rng, m)).collect();
        let fb = b.image_under(&f).unwrap();
        let bp = fb.add_vectors(&extra[..extra.len().min(1)]).unwrap();
        let zp = z.image_under(&f).unwrap().sum(&bp).unwrap().add_vectors(&extra).unwrap();
        let map = induced_map_on_quotient(&f, &z, &b, &zp, &bp).unwrap();
        let dom = QuotientBasis::new(&z, &b).unwrap();
        let cod = QuotientBasis::new(&zp, &bp).unwrap();
        for _ in 0..3 {
            let coeffs = rng_vec(&mut rng, z.dim());
            let mut x = vec![Gq::from_int(0); n];
            for (c, v) in coeffs.iter().zip(z.basis()) {
                x = vec_add(&x, &vec_scale(v, c));
            }
            let lhs = map.matrix.apply(&dom.coordinates(&x).unwrap()).unwrap();
            let rhs = cod.coordinates(&f.apply(&x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

// Lie algebras and almost complex structures

fn catalog_algebras() -> Vec<CatalogEntry> {
    all_entries().unwrap()
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn bracket_is_bilinear(seed in any::<u64>(), s in gq_small(), t in gq_small()) {
        let (l, _) = instance(seed);
        let n = l.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let (x, y, z) = (rng_vec(&mut rng, n), rng_vec(&mut rng, n), rng_vec(&mut rng, n));
        let comb = vec_add(&vec_scale(&x, &s), &vec_scale(&y, &t));
        let lhs = l.bracket(&comb, &z).unwrap();
        let rhs = vec_add(
            &vec_scale(&l.bracket(&x, &z).unwrap(), &s),
            &vec_scale(&l.bracket(&y, &z).unwrap(), &t),
        );
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(l.bracket(&z, &comb).unwrap(), vec_neg(&l.bracket(&comb, &z).unwrap()));
    }

    #[test]
    fn ideal_implies_subalgebra(seed in any::<u64>(), k in 1usize..4) {
        let (l, _) = instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let vs: Vec<Vector> = (0..k).map(|_| real_rng_vec(&mut rng, l.dim())).collect();
        let v = Subspace::span(l.dim(), &vs).unwrap();
        let r = subalgebra_report(&l, &v).unwrap();
        prop_assert!(!r.is_ideal || r.is_subalgebra);
        // the derived algebra is an ideal
        let ds: Vec<Vector> = (0..l.dim())
            .flat_map(|a| (0..l.dim()).map(move |b| (a, b)))
            .map(|(a, b)| l.basis_bracket(a, b))
            .collect();
        let der = Subspace::span(l.dim(), &ds).unwrap();
        prop_assert!(subalgebra_report(&l, &der).unwrap().is_ideal);
    }

    #[test]
    fn nijenhuis_symmetries(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let n = l.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let (x, y) = (rng_vec(&mut rng, n), rng_vec(&mut rng, n));
        let nxy = nijenhuis(&l, &j, &x, &y).unwrap();
        prop_assert_eq!(nijenhuis(&l, &j, &y, &x).unwrap(), vec_neg(&nxy));
        let jx = j.apply(&x).unwrap();
        prop_assert_eq!(nijenhuis(&l, &j, &jx, &y).unwrap(), vec_neg(&j.apply(&nxy).unwrap()));
        let im = nijenhuis_image(&l, &j).unwrap();
        prop_assert!(j.preserves(&im).unwrap());
        prop_assert!(im.contains(&nxy).unwrap());
    }

    #[test]
    fn bracket_decomposition(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let n = l.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let (x, y) = (real_rng_vec(&mut rng, n), real_rng_vec(&mut rng, n));
        let two = Gq::from_int(2);
        let ax = vec_scale(&j.project_10(&x).unwrap(), &two);
        let ay = vec_scale(&j.project_10(&y).unwrap(), &two);
        let lhs = j.project_01(&l.bracket(&ax, &ay).unwrap()).unwrap();
        let rhs = j.project_01(&vec_neg(&nijenhuis(&l, &j, &x, &y).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_of_j_anticommutes(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let u = real_rng_vec(&mut rng, l.dim());
        let e = lie_derivative_endo(&l, &j, &u).unwrap();
        let s = e.mul(j.matrix()).unwrap().add(&j.matrix().mul(&e).unwrap()).unwrap();
        prop_assert!(s.is_zero());
    }
}

#[test]
fn catalog_algebras_satisfy_jacobi_and_nijenhuis_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for e in catalog_algebras() {
        assert!(e.algebra.validate().is_valid(), "{}", e.name);
        if e.is_homogeneous() {
            continue;
        }
        for _ in 0..5 {
            let n = e.algebra.dim();
            let (x, y) = (rng_vec(&mut rng, n), rng_vec(&mut rng, n));
            let nxy = nijenhuis(&e.algebra, &e.j, &x, &y).unwrap();
            assert_eq!(nijenhuis(&e.algebra, &e.j, &y, &x).unwrap(), vec_neg(&nxy));
            let jx = e.j.apply(&x).unwrap();
            assert_eq!(
                nijenhuis(&e.algebra, &e.j, &jx, &y).unwrap(),
                vec_neg(&e.j.apply(&nxy).unwrap())
            );
        }
    }
}

// derived flag

proptest! {
    #![proptest_config(cfg(40))]

    #[test]
    fn flag_invariants(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let f = derived_flag(&l, &j).unwrap();
        let dims = f.dims();
        prop_assert!(dims.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(f.stable_index <= l.dim().max(1));
        for st in &f.stages {
            prop_assert!(j.preserves(st).unwrap());
        }
        for w in f.stages.windows(2) {
            prop_assert!(w[0].is_subspace_of(&w[1]).unwrap());
        }
        let lim = &f.limit;
        prop_assert!(subalgebra_report(&l, lim).unwrap().is_subalgebra);
        prop_assert!(nijenhuis_image(&l, &j).unwrap().is_subspace_of(lim).unwrap());
        for u in lim.basis() {
            prop_assert!(image(&lie_derivative_endo(&l, &j, u).unwrap()).is_subspace_of(lim).unwrap());
        }
        prop_assert!(t10_derived_involutive(&l, &j, &f, f.stable_index).unwrap().involutive);
        let integrable = nijenhuis_image(&l, &j).unwrap().is_zero();
        prop_assert_eq!(integrable, lim.is_zero());
        let r1 = t10_derived_involutive(&l, &j, &f, 1).unwrap().involutive;
        prop_assert_eq!(r1, complexified_sum_involutive(&l, &j, &f.stages[0]).unwrap());
    }
}

// forms

fn random_bigraded(space: &FormSpace, rng: &mut ChaCha8Rng, k: usize) -> BigradedForm {
    let mut f = BigradedForm::zero();
    for (p, q) in space.bidegrees_of_degree(k) {
        let v = rng_vec(rng, space.basis(p, q).len());
        f.set(p, q, v);
    }
    f
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn d_squares_to_zero_and_reassembles(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let space = FormSpace::new(&l, &j).unwrap();
        for k in 0..l.dim().saturating_sub(1) {
            let d1 = space.degree_map(k, k + 1, |f| ce_d(space.frame_constants(), f)).unwrap();
            let d2 = space.degree_map(k + 1, k + 2, |f| ce_d(space.frame_constants(), f)).unwrap();
            prop_assert!(d2.mul(&d1).unwrap().is_zero());
        }
        let ops = space.component_operators().unwrap();
        prop_assert!(verify_d2_relations_in(&space, &ops).unwrap().holds());
        for (p, q) in space.bidegrees() {
            let direct = space
                .bidegree_map(p, q, p + q + 1, |f| ce_d(space.frame_constants(), f))
                .unwrap();
            if p + q < l.dim() {
                prop_assert_eq!(ops.reassembled_d(&space, p, q), direct);
            }
        }
    }

    #[test]
    fn cartan_identity(seed in any::<u64>(), k in 0usize..4) {
        let (l, j) = instance(seed);
        let space = FormSpace::new(&l, &j).unwrap();
        let k = k.min(l.dim() - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
        let w = random_bigraded(&space, &mut rng, k);
        let x = rng_vec(&mut rng, l.dim());
        let lie = space.lie(&x, &w).unwrap();
        let a = space.contract(&x, &space.d(&w).unwrap()).unwrap();
        let b = space.d(&space.contract(&x, &w).unwrap()).unwrap();
        let sum = space.to_exterior(&a).unwrap().add(&space.to_exterior(&b).unwrap());
        prop_assert_eq!(space.to_exterior(&lie).unwrap(), sum);
    }

    #[test]
    fn mu_is_conjugate_of_mu_bar(seed in any::<u64>(), k in 1usize..4) {
        let (l, j) = instance(seed);
        let space = FormSpace::new(&l, &j).unwrap();
        let ops = space.component_operators().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        let w = random_bigraded(&space, &mut rng, k.min(l.dim()));
        let lhs = space.conjugate(&ops.mu.apply(&w).unwrap()).unwrap();
        let rhs = ops.mu_bar.apply(&space.conjugate(&w).unwrap()).unwrap();
        prop_assert_eq!(space.to_exterior(&lhs).unwrap(), space.to_exterior(&rhs).unwrap());
    }
}

// cohomology

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn cohomology_properties(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let space = FormSpace::new(&l, &j).unwrap();
        let ops = space.component_operators().unwrap();
        let f = derived_flag(&l, &j).unwrap();
        let tr = transverse_dolbeault(&space, &ops, &f).unwrap();
        let mb = mu_bar_cohomology(&space, &ops).unwrap();
        let cw = generalized_dolbeault(&space, &ops, &mb).unwrap();
        let rows = compare_p0(&tr.table, &cw.table, space.half_dim()).unwrap();
        prop_assert!(rows.iter().all(|r| r.equal));
        for p in 0..=space.half_dim() {
            prop_assert_eq!(hp0_transverse_dimension(&space, &f.limit, p).unwrap(), tr.table.get(p, 0));
        }
        prop_assert!(conjugation_symmetric(&space, &tr.module).unwrap());
        let fam = FormFamily::from_module(&space, &tr.module).unwrap();
        prop_assert!(submodule_properties(&space, &fam).unwrap().all());
    }
}

// homogeneous pairs: L ⊕ ℝ with h the extra central line and J + K, K valued in h

fn central_extension_pair(seed: u64) -> (HomogeneousPair, LieAlgebra, AlmostComplexStructure) {
    let (l, j) = instance(seed);
    let n = l.dim();
    let g = l.direct_sum(&LieAlgebra::abelian(1));
    let mut jm = Matrix::zeros(n + 1, n + 1);
    for r in 0..n {
        for c in 0..n {
            jm.set(r, c, j.matrix().get(r, c).clone());
        }
    }
    let h = Subspace::span(n + 1, &[transverse_dolbeault::linalg::unit_vec(n + 1, n)]).unwrap();
    let p = HomogeneousPair::new(g, h, jm).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
    let mut k = Matrix::zeros(n + 1, n + 1);
    for c in 0..=n {
        k.set(n, c, Gq::from_int(rng.gen_range(-2..=2)));
    }
    (shifted_lift(&p, &k).unwrap(), l, j)
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn homogeneous_quotient_properties(seed in any::<u64>()) {
        let (p, l, j) = central_extension_pair(seed);
        prop_assert!(validate_pair(&p).unwrap().is_valid());
        prop_assert!(invariance_check(&p).unwrap().invariant);
        let n = l.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 9);
        let lift = |v: &Vector| { let mut w = v.clone(); w.push(Gq::from_int(0)); w };
        let (a, b) = (real_rng_vec(&mut rng, n), real_rng_vec(&mut rng, n));
        let (la, lb) = (lift(&a), lift(&b));
        let base = base_nijenhuis(&p, &la, &lb).unwrap();
        let hv = |s: i64| { let mut w = vec![Gq::from_int(0); n + 1]; w[n] = Gq::from_int(s); w };
        prop_assert_eq!(&base_nijenhuis(&p, &vec_add(&la, &hv(3)), &vec_sub(&lb, &hv(2))).unwrap(), &base);
        let expected = p.reduce(&lift(&vec_neg(&nijenhuis(&l, &j, &a, &b).unwrap()))).unwrap();
        prop_assert_eq!(base, expected);
        prop_assert!(is_zero_vec(&j_antilinearity_defect(&p, &la, &lb).unwrap()));
        prop_assert_eq!(minimal_homogeneous_check(&p).unwrap().holds, minimal_homogeneous_check_full(&p).unwrap().holds);
    }

    #[test]
    fn trivial_isotropy_agrees_with_group_case(seed in any::<u64>()) {
        let (l, j) = instance(seed);
        let p = HomogeneousPair::lie_group(l.clone(), &j).unwrap();
        prop_assert_eq!(p.nijenhuis_image().unwrap(), nijenhuis_image(&l, &j).unwrap());
        let f = derived_flag(&l, &j).unwrap();
        prop_assert_eq!(
            minimal_homogeneous_check(&p).unwrap().holds,
            t10_derived_involutive(&l, &j, &f, 1).unwrap().involutive
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
        let (x, y) = (rng_vec(&mut rng, l.dim()), rng_vec(&mut rng, l.dim()));
        prop_assert_eq!(p.nijenhuis(&x, &y).unwrap(), nijenhuis(&l, &j, &x, &y).unwrap());
        prop_assert_eq!(base_nijenhuis(&p, &x, &y).unwrap(), vec_neg(&nijenhuis(&l, &j, &x, &y).unwrap()));
    }
}

#[test]
fn non_complex_fibers_occur_in_dimension_six() {
    let mut found = false;
    for seed in 0..400u64 {
        let (l, j) = instance(seed);
        if l.dim() != 6 {
            continue;
        }
        let p = HomogeneousPair::lie_group(l, &j).unwrap();
        let r = transverse_dolbeault::homogeneous::fibration_report(&p).unwrap();
        if r.applicable && r.dim_im_n == 4 && !r.fibers_complex {
            found = true;
            break;
        }
    }
    assert!(found);
}

#[test]
fn split_frame_is_dual() {
    for e in catalog_algebras().into_iter().filter(|e| !e.is_homogeneous()) {
        let fr = split_10_01(&e.algebra, &e.j).unwrap();
        let m = Matrix::from_rows(fr.dual()).unwrap();
        let v = Matrix::from_columns(e.algebra.dim(), fr.vectors()).unwrap();
        assert_eq!(m.mul(&v).unwrap(), Matrix::identity(e.algebra.dim()), "{}", e.name);
        assert!(kernel(&m).is_zero());
    }
}
