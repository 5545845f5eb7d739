use std::sync::Arc;

use super::*;
use crate::cubical::{l_functor, standard_model, ModelKind};
use crate::field::FieldTag;
use crate::linalg::SparseVec;
use crate::nerves::{group_cubical_nerve, rack_nerve, TupleCodec, DEFAULT_CELL_BUDGET};
use crate::racks::{conj_rack, cyclic_group, symmetric_group};

const Q: FieldTag = FieldTag::Rationals;
const B: u128 = DEFAULT_CELL_BUDGET;

fn rack_cx(g: &crate::racks::FiniteGroup, top: usize, flavor: Flavor) -> ChainComplex {
    build_cubical_complex(Arc::new(rack_nerve(&conj_rack(g), top, B).unwrap()), Q, flavor).unwrap()
}

#[test]
fn z2_rack_complex_is_one_dimensional_with_zero_boundary() {
    let c = rack_cx(&cyclic_group(2).unwrap(), 5, Flavor::Normalized);
    assert_eq!(c.dims(), vec![1, 1, 1, 1, 1, 1]);
    assert!(c.boundary.iter().all(|m| m.is_zero()));
}

#[test]
fn s3_normalized_dims_are_powers_of_five() {
    let c = rack_cx(&symmetric_group(3).unwrap(), 4, Flavor::Normalized);
    assert_eq!(c.dims(), (0..=4u32).map(|n| 5usize.pow(n)).collect::<Vec<_>>());
}

#[test]
fn cube_is_acyclic() {
    let x = Arc::new(standard_model(ModelKind::Cube, 2, Some(4)).unwrap());
    let h = homology_default(&build_cubical_complex(x, Q, Flavor::Normalized).unwrap()).unwrap();
    assert_eq!(h.dims, vec![1, 0, 0, 0]);
}

#[test]
fn degenerate_cubical_chains_are_not_acyclic() {
    // the point: one cell per degree, all faces equal, so d = 0 unnormalized
    let x = Arc::new(standard_model(ModelKind::Cube, 0, Some(3)).unwrap());
    let hu = homology(&build_cubical_complex(x.clone(), Q, Flavor::Unnormalized).unwrap(), 2).unwrap();
    assert_eq!(hu.dims, vec![1, 1, 1]);
    let hn = homology(&build_cubical_complex(x, Q, Flavor::Normalized).unwrap(), 2).unwrap();
    assert_eq!(hn.dims, vec![1, 0, 0]);
}

#[test]
fn l_models_have_h1_of_rank_n() {
    for n in 1..=3 {
        let l = Arc::new(standard_model(ModelKind::LCube, n, Some(n + 2)).unwrap());
        let h = homology_default(&build_cubical_complex(l, Q, Flavor::Normalized).unwrap()).unwrap();
        assert_eq!(h.dim(0), 1);
        assert_eq!(h.dim(1), n);
        assert!(h.dims[2..].iter().all(|&d| d == 0), "{:?}", h.dims);
    }
}

#[test]
fn hr1_counts_nontrivial_orbits() {
    let g = symmetric_group(3).unwrap();
    let h = homology(&rack_cx(&g, 2, Flavor::Normalized), 1).unwrap();
    assert_eq!(h.dim(1), conj_rack(&g).nontrivial_orbits().len());
    assert_eq!(h.dim(1), 2);
}

#[test]
fn bar_homology_of_z2() {
    let g = cyclic_group(2).unwrap();
    let hq = homology(&bar_complex(&g, Q, 4, B).unwrap(), 3).unwrap();
    assert_eq!(hq.dims, vec![1, 0, 0, 0]);
    let f2 = FieldTag::prime(2).unwrap();
    let h2 = homology(&bar_complex(&g, f2, 4, B).unwrap(), 3).unwrap();
    assert_eq!(h2.dims, vec![1, 1, 1, 1]);
}

#[test]
fn abelian_rack_complexes_have_zero_boundary() {
    // for abelian G both faces agree, so homology is the chain group
    let g = cyclic_group(3).unwrap();
    let hn = homology_default(&rack_cx(&g, 4, Flavor::Normalized)).unwrap();
    let hu = homology_default(&rack_cx(&g, 4, Flavor::Unnormalized)).unwrap();
    assert_eq!(hn.dims, vec![1, 2, 4, 8]);
    assert_eq!(hu.dims, vec![1, 3, 9, 27]);
}

#[test]
fn projection_kills_boundaries_and_inverts_inclusion() {
    let g = symmetric_group(3).unwrap();
    let c = rack_cx(&g, 3, Flavor::Normalized);
    let h = homology_default(&c).unwrap();
    for n in 0..=h.top() {
        let p = h.projection_matrix(n);
        let i = h.inclusion_matrix(n);
        assert!(p.mul(&i).unwrap() == crate::linalg::Matrix::identity(Q, h.dim(n)));
        if n + 1 <= c.max_degree() {
            assert!(p.mul(&c.boundary[n + 1]).unwrap().is_zero());
        }
        for z in &h.reps[n] {
            assert!(c.d(n, z).is_zero());
        }
    }
}

#[test]
fn eta_examples() {
    let g = symmetric_group(3).unwrap();
    let r = conj_rack(&g);
    let x = rack_nerve(&r, 3, B).unwrap();
    let e = r.basepoint;
    let a = (e + 1) % 6;
    assert!(eta_on_cell(&x, 1, e).is_empty());
    let ea = eta_on_cell(&x, 1, a);
    assert_eq!(ea.into_iter().collect::<Vec<_>>(), {
        let mut v = vec![(a, 1), (e, -1)];
        v.sort();
        v
    });
    let x = Arc::new(x);
    let norm = build_cubical_complex(x.clone(), Q, Flavor::Normalized).unwrap();
    let unnorm = build_cubical_complex(x.clone(), Q, Flavor::Unnormalized).unwrap();
    let eta = eta_section(&norm, &unnorm).unwrap();
    let xi = xi_projection(&unnorm, &norm).unwrap();
    assert!(xi.compose(&eta).unwrap().first_difference(&GradedMap::identity(&norm)).is_none());
    assert!(verify_chain_map(&eta, &norm, &unnorm).ok);
    assert!(verify_chain_map(&xi, &unnorm, &norm).ok);
    // η vanishes on degenerate cells
    for n in 1..=3 {
        for c in 0..x.count(n) {
            if norm.basis_index(n, c).is_none() {
                assert!(eta_on_cell(&x, n, c).is_empty());
            }
        }
    }
}

#[test]
fn identity_and_inclusion_are_chain_maps() {
    let g = cyclic_group(2).unwrap();
    let x = group_cubical_nerve(&g, 3, B).unwrap();
    let l = l_functor(&x).unwrap();
    let c = build_cubical_complex(Arc::new(x), Q, Flavor::Normalized).unwrap();
    let lc = build_cubical_complex(Arc::new(l.set), Q, Flavor::Normalized).unwrap();
    assert!(verify_chain_map(&GradedMap::identity(&c), &c, &c).ok);
    let inc = inclusion_map(&lc, &c, &l.inclusion).unwrap();
    assert!(verify_chain_map(&inc, &lc, &c).ok);
}

#[test]
fn broken_map_is_reported() {
    let g = symmetric_group(3).unwrap();
    let c = rack_cx(&g, 2, Flavor::Normalized);
    let mut f = GradedMap::identity(&c);
    f.mats[1] = f.mats[1].scale(&Q.from_i64(2));
    let r = verify_chain_map(&f, &c, &c);
    assert!(!r.ok);
}

#[test]
fn s2_formula() {
    let g = symmetric_group(3).unwrap();
    let (a, b) = (g.index_of("[2,1,3]").unwrap(), g.index_of("[1,3,2]").unwrap());
    let terms = s_terms_rack(&g, &[a, b]);
    let mut expect = vec![(vec![a, b], 1), (vec![b, g.conj(a, b)], -1)];
    let mut got = terms.clone();
    got.sort();
    expect.sort();
    assert_eq!(got, expect);
    assert_eq!(s_terms_rack(&g, &[a]), vec![(vec![a], 1)]);
}

#[test]
fn s_is_a_chain_map() {
    for (g, top) in [(cyclic_group(2).unwrap(), 4), (cyclic_group(3).unwrap(), 4), (symmetric_group(3).unwrap(), 4)] {
        let s = s_map(SMode::RackFormula, &g, Q, top, B).unwrap();
        let r = verify_chain_map(&s.map, &s.source, &s.target);
        assert!(r.ok, "{}: {:?}", g.name, r.failures);
    }
}

#[test]
fn cubical_s_is_a_chain_map_and_matches_rack_formula() {
    let g = cyclic_group(2).unwrap();
    let cub = s_map(SMode::CubicalToSimplicial, &g, Q, 3, B).unwrap();
    assert!(verify_chain_map(&cub.map, &cub.source, &cub.target).ok);
    let rack = s_map(SMode::RackFormula, &g, Q, 3, B).unwrap();
    let x = cub.source.cubical().unwrap().clone();
    let l = l_functor(&x).unwrap();
    let lc = build_cubical_complex(Arc::new(l.set.clone()), Q, Flavor::Normalized).unwrap();
    let inc = inclusion_map(&lc, &cub.source, &l.inclusion).unwrap();
    let phi = l_to_rack_map(&g, &lc, &l.inclusion, &rack.source).unwrap();
    let lhs = cub.map.compose(&inc).unwrap();
    let rhs = rack.map.compose(&phi).unwrap();
    assert!(lhs.first_difference(&rhs).is_none());
}

#[test]
fn s3_cubical_and_rack_s_agree_in_degree_two() {
    let g = symmetric_group(3).unwrap();
    let cub = s_map(SMode::CubicalToSimplicial, &g, Q, 2, B).unwrap();
    let rack = s_map(SMode::RackFormula, &g, Q, 2, B).unwrap();
    let x = cub.source.cubical().unwrap().clone();
    let l = l_functor(&x).unwrap();
    let lc = build_cubical_complex(Arc::new(l.set.clone()), Q, Flavor::Normalized).unwrap();
    let inc = inclusion_map(&lc, &cub.source, &l.inclusion).unwrap();
    let phi = l_to_rack_map(&g, &lc, &l.inclusion, &rack.source).unwrap();
    assert!(cub.map.compose(&inc).unwrap().first_difference(&rack.map.compose(&phi).unwrap()).is_none());
}

#[test]
fn abelian_s_is_antisymmetrization() {
    let r = antisymmetrization_compare(&cyclic_group(3).unwrap(), Q, 3).unwrap();
    assert!(r.ok, "{:?}", r.failures);
    assert!(antisymmetrization_compare(&symmetric_group(3).unwrap(), Q, 2).is_err());
    assert_eq!(antisymmetrization_terms(&[0, 1, 2]).len(), 6);
}

#[test]
fn l_relative_les_for_z2() {
    let g = cyclic_group(2).unwrap();
    let x = Arc::new(group_cubical_nerve(&g, 4, B).unwrap());
    let (ses, _) = les_l_relative(x, Q).unwrap();
    let r = long_exact_sequence(&ses, 3).unwrap();
    assert!(r.ok, "{:?}", r.nodes);
    assert_eq!(r.sub_dims, vec![1, 1, 1, 1]);
    assert_eq!(r.total_dims, vec![1, 0, 0, 0]);
    // H^rel_{n+1} ≅ HR_n for n ≥ 1
    assert_eq!(&r.quotient_dims[2..], &[1, 1]);
}

#[test]
fn trivial_group_relative_groups_vanish() {
    let g = cyclic_group(1).unwrap();
    let x = Arc::new(group_cubical_nerve(&g, 4, B).unwrap());
    let (ses, _) = les_l_relative(x, Q).unwrap();
    let r = long_exact_sequence(&ses, 3).unwrap();
    assert!(r.ok);
    assert!(r.quotient_dims.iter().all(|&d| d == 0));
}

#[test]
fn cone_les_matches_literal_for_z2() {
    let g = cyclic_group(2).unwrap();
    let s = s_map(SMode::RackFormula, &g, Q, 5, B).unwrap();
    let ses = mapping_cone(&s.map, &s.source, &s.target).unwrap();
    let r = long_exact_sequence(&ses, 4).unwrap();
    assert!(r.ok);
    // Cone homology plays the role of H^rel
    let cone_h = homology(&ses.total, 3).unwrap();
    let x = Arc::new(group_cubical_nerve(&g, 4, B).unwrap());
    let (lit, _) = les_l_relative(x, Q).unwrap();
    let lit_h = homology(&lit.quotient, 3).unwrap();
    assert_eq!(cone_h.dims, lit_h.dims);
}

#[test]
fn cone_connecting_map_is_s_star() {
    let g = symmetric_group(3).unwrap();
    let f3 = FieldTag::prime(3).unwrap();
    let s = s_map(SMode::RackFormula, &g, f3, 3, B).unwrap();
    let ses = mapping_cone(&s.map, &s.source, &s.target).unwrap();
    let r = long_exact_sequence(&ses, 2).unwrap();
    assert!(r.ok);
    let ha = homology(&s.source, 2).unwrap();
    let hb = homology(&s.target, 2).unwrap();
    for n in 1..=2 {
        // connecting map H_n(A[-1]) = H_{n-1}(A) → H_{n-1}(B)
        let sstar = induced_matrix(&s.map, n - 1, &ha, &hb);
        assert_eq!(r.connecting[n].rank(), sstar.rank());
    }
}

#[test]
fn gamma_les_for_z2() {
    let g = cyclic_group(2).unwrap();
    let x = Arc::new(group_cubical_nerve(&g, 4, B).unwrap());
    let ses = les_gamma(x, Q).unwrap();
    let r = long_exact_sequence(&ses, 2).unwrap();
    assert!(r.ok, "{:?}", r.nodes);
}

#[test]
fn tensor_complex_satisfies_kunneth() {
    let g = symmetric_group(3).unwrap();
    let f2 = FieldTag::prime(2).unwrap();
    let a = bar_complex(&g, f2, 4, B).unwrap();
    let b = build_cubical_complex(
        Arc::new(rack_nerve(&conj_rack(&cyclic_group(2).unwrap()), 4, B).unwrap()),
        f2,
        Flavor::Normalized,
    )
    .unwrap();
    let (t, layout) = tensor_complex(&a, &b, 3).unwrap();
    let ha = homology(&a, 3).unwrap();
    let hb = homology(&b, 3).unwrap();
    let ht = homology(&t, 2).unwrap();
    for n in 0..=2 {
        let expect: usize = (0..=n).map(|p| ha.dim(p) * hb.dim(n - p)).sum();
        assert_eq!(ht.dim(n), expect);
    }
    for n in 0..=3 {
        for k in 0..layout.dims[n] {
            let (p, i, j) = layout.split(n, k);
            assert_eq!(layout.index(p, i, n - p, j), k);
        }
    }
}

#[test]
fn twist_is_an_involution_and_chain_map() {
    let g = symmetric_group(3).unwrap();
    let c = rack_cx(&g, 3, Flavor::Normalized);
    let (t, l) = tensor_complex(&c, &c, 3).unwrap();
    let tau = twist_map(Q, &l, &l).unwrap();
    assert!(verify_chain_map(&tau, &t, &t).ok);
    assert!(tau.compose(&tau).unwrap().first_difference(&GradedMap::identity(&t)).is_none());
}

#[test]
fn truncation_is_enforced() {
    let c = rack_cx(&cyclic_group(2).unwrap(), 2, Flavor::Normalized);
    assert!(homology(&c, 2).is_err());
    let codec = TupleCodec { base: 2 };
    assert_eq!(codec.decode(codec.encode(&[1, 0, 1]), 3), vec![1, 0, 1]);
    assert!(SparseVec::new().is_zero());
}
