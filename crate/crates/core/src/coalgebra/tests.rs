use std::sync::Arc;

use super::*;
use crate::chains::{build_cubical_complex, homology, Flavor};
use crate::cubical::{standard_model, ModelKind};
use crate::nerves::{rack_nerve, DEFAULT_CELL_BUDGET};
use crate::racks::{conj_rack, cyclic_group, symmetric_group, trivial_rack, PointedRack};

const Q: FieldTag = FieldTag::Rationals;

fn rack_cx(r: &PointedRack, top: usize, field: FieldTag) -> ChainComplex {
    build_cubical_complex(Arc::new(rack_nerve(r, top, DEFAULT_CELL_BUDGET).unwrap()), field, Flavor::Normalized)
        .unwrap()
}

fn tuple_index(c: &ChainComplex, base: usize, t: &[usize]) -> usize {
    c.basis_index(t.len(), TupleCodec { base }.encode(t)).unwrap()
}

#[test]
fn degree_zero_is_diagonal() {
    let c = rack_cx(&conj_rack(&symmetric_group(3).unwrap()), 2, Q);
    let d = cubical_coproduct(&c, 2).unwrap();
    let v = d.map.apply(0, &SparseVec::unit(0, Q));
    assert_eq!(v, SparseVec::unit(d.layout.index(0, 0, 0, 0), Q));
}

#[test]
fn trivial_rack_degree_two_half() {
    let r = trivial_rack(3).unwrap();
    let c = rack_cx(&r, 3, Q);
    let h = delta_halves(&c, 3).unwrap();
    let (a, b) = (1, 2);
    let k = tuple_index(&c, 3, &[a, b]);
    let got = h.lt.apply(2, &SparseVec::unit(k, Q));
    let want = SparseVec::unit(h.layout.index(1, tuple_index(&c, 3, &[a]), 1, tuple_index(&c, 3, &[b])), Q);
    assert_eq!(got, want);
}

#[test]
fn rack_formula_for_lt_in_degree_three() {
    // Δ̄≺(x1,x2,x3) on conj(S_3): terms [x1]⊗[x2◁?,x3] style from the shuffle formula
    let g = symmetric_group(3).unwrap();
    let r = conj_rack(&g);
    let c = rack_cx(&r, 3, Q);
    let h = delta_halves(&c, 3).unwrap();
    let t = [1, 2, 3];
    let k = tuple_index(&c, 6, &t);
    let got = h.lt.apply(3, &SparseVec::unit(k, Q));
    // oracle: Sh^1_{p,q}, left = (x_1, x_σ(2..p)), right entries conjugated by larger left indices in increasing order
    let mut pairs = Vec::new();
    for p in 1..3 {
        for (s, e) in enumerate_shuffles(ShuffleKind::FirstFixed(p, 3 - p)).unwrap() {
            let left: Vec<usize> = (1..=p).map(|i| t[s.at(i) - 1]).collect();
            let lefts: Vec<usize> = (1..=p).map(|i| s.at(i)).collect();
            let right: Vec<usize> = (p + 1..=3)
                .map(|i| {
                    let j = s.at(i);
                    let mut x = t[j - 1];
                    for &l in lefts.iter().filter(|&&l| l > j) {
                        x = g.conj(x, t[l - 1]);
                    }
                    x
                })
                .collect();
            if left.contains(&0) || right.contains(&0) {
                continue;
            }
            pairs.push((h.layout.index(p, tuple_index(&c, 6, &left), 3 - p, tuple_index(&c, 6, &right)), e));
        }
    }
    assert_eq!(got, SparseVec::from_int_pairs(Q, pairs));
}

#[test]
fn cubical_coproduct_is_a_chain_map_on_cubes() {
    for kind in [ModelKind::Cube, ModelKind::LCube] {
        let x = Arc::new(standard_model(kind, 2, Some(3)).unwrap());
        let c = build_cubical_complex(x, Q, Flavor::Normalized).unwrap();
        let d = cubical_coproduct(&c, 3).unwrap();
        assert!(verify_chain_map(&d.map, &c, &d.tensor).ok);
    }
    let x = Arc::new(standard_model(ModelKind::Cube, 2, Some(3)).unwrap());
    let c = build_cubical_complex(x, Q, Flavor::Normalized).unwrap();
    assert!(matches!(delta_halves(&c, 3), Err(Error::NotLSet)));
}

#[test]
fn coproduct_reports_pass_on_rack_nerves() {
    for (g, top) in [(cyclic_group(2).unwrap(), 4), (cyclic_group(3).unwrap(), 4), (symmetric_group(3).unwrap(), 3)] {
        let c = rack_cx(&conj_rack(&g), top, Q);
        let r = coproduct_report(&c, top).unwrap();
        assert!(r.ok, "{}: {:?}", g.name, r);
        assert!(r.homotopy.is_some());
    }
}

#[test]
fn homotopy_direction_is_forced() {
    let c = rack_cx(&conj_rack(&symmetric_group(3).unwrap()), 3, Q);
    let halves = delta_halves(&c, 3).unwrap();
    let tau = twist_map(Q, &halves.layout, &halves.layout).unwrap();
    let g = tau.compose(&halves.lt).unwrap().truncate(2);
    let f = halves.gt.truncate(2);
    let h = degree_two_homotopy(&c, &halves.layout).unwrap().truncate(2);
    assert!(verify_homotopy(&f, &g, &h, &c, &halves.tensor).ok);
    assert!(!verify_homotopy(&g, &f, &h, &c, &halves.tensor).ok);
}

#[test]
fn homology_laws_for_s3() {
    let c = rack_cx(&conj_rack(&symmetric_group(3).unwrap()), 4, Q);
    let h = homology(&c, 3).unwrap();
    let halves = delta_halves(&c, 3).unwrap();
    let g = homology_coalgebra(&c, &h, &halves, None).unwrap();
    let laws = [Law::CoZinbiel, Law::Codendriform, Law::CocommutativeOfSum, Law::GtIsTwistedLt, Law::Counit];
    let r = check_laws(&g, &laws, 3).unwrap();
    assert!(r.ok, "{r:?}");
    let p = primitive_analysis(&g, 3).unwrap();
    assert!(p.connected);
    assert_eq!(p.prim_dims[1], 2);
    assert!(matches!(check_laws(&g, &[Law::SemiHopf], 3), Err(Error::MissingStructure(_))));
}

#[test]
fn abelian_rack_chains_strict_laws() {
    for n in [2, 3] {
        let c = rack_cx(&conj_rack(&cyclic_group(n).unwrap()), 4, Q);
        let halves = delta_halves(&c, 4).unwrap();
        let g = chain_coalgebra(&c, &halves, None, 4).unwrap();
        let r = check_laws(&g, &[Law::CoZinbiel, Law::Codendriform, Law::GtIsTwistedLt, Law::CocommutativeOfSum], 4)
            .unwrap();
        assert!(r.ok, "{r:?}");
        let p = primitive_analysis(&g, 4).unwrap();
        assert_eq!(p.prim_dims[1], n - 1);
        assert!(p.prim_dims[2..].iter().all(|&d| d == 0));
        assert!(p.cofree_dims_match && p.connected);
    }
}

#[test]
fn half_shuffle_examples() {
    let m = half_shuffle_model(&[1, 1, 1], 3).unwrap();
    let reduced = |w: &[usize]| m.half_shuffle(w).into_iter().filter(|(_, r, _)| !r.is_empty()).collect::<Vec<_>>();
    assert_eq!(reduced(&[0, 1]), vec![(vec![0], vec![1], 1)]);
    assert!(reduced(&[2]).is_empty());
    assert_eq!(reduced(&[0, 1, 2]).len(), 3);
}

#[test]
fn tensor_model_laws() {
    for degs in [vec![1], vec![1, 1], vec![1, 2], vec![2]] {
        let m = half_shuffle_model(&degs, 5).unwrap();
        let g = m.coalgebra(Q);
        let good = [
            Law::CoZinbiel,
            Law::Codendriform,
            Law::CocommutativeOfSum,
            Law::GtIsTwistedLt,
            Law::Counit,
            Law::SemiHopf,
            Law::Hopf,
            Law::AssociativeProduct,
        ];
        let r = check_laws(&g, &good, 5).unwrap();
        assert!(r.ok, "{degs:?}: {r:?}");
        let p = primitive_analysis(&g, 5).unwrap();
        assert!(p.cofree_dims_match && p.connected);
        let gens: Vec<usize> = (0..=5).map(|n| degs.iter().filter(|&&d| d == n).count()).collect();
        assert_eq!(&p.prim_dims[1..], &gens[1..]);
    }
    let g = half_shuffle_model(&[1, 1], 4).unwrap().coalgebra(Q);
    let r = check_laws(&g, &[Law::SemiHopfLeft, Law::CommutativeProduct], 4).unwrap();
    assert!(r.laws.iter().all(|l| !l.ok));
}

#[test]
fn s_is_a_coalgebra_map_on_homology() {
    let f2 = FieldTag::prime(2).unwrap();
    let f3 = FieldTag::prime(3).unwrap();
    assert!(s_coalgebra_check(&cyclic_group(2).unwrap(), f2, 3).unwrap().ok);
    assert!(s_coalgebra_check(&cyclic_group(3).unwrap(), f3, 3).unwrap().ok);
    assert!(s_coalgebra_check(&symmetric_group(3).unwrap(), f3, 2).unwrap().ok);
}

#[test]
fn induced_maps() {
    let c = rack_cx(&conj_rack(&symmetric_group(3).unwrap()), 3, Q);
    let h = homology(&c, 2).unwrap();
    let id = GradedMap::identity(&c);
    let ind = induced_on_homology(&id, &c, &c, &h, &h).unwrap();
    for n in 0..=2 {
        assert!(ind.mats[n] == Matrix::identity(Q, h.dim(n)));
    }
    assert!(induced_is_rep_independent(&id, &c, &h, &h, &ind));
    let d = GradedMap { name: "d".into(), field: Q, shift: -1, mats: c.boundary.clone() };
    let ind = induced_on_homology(&d, &c, &c, &h, &h).unwrap();
    assert!(ind.mats.iter().all(|m| m.is_zero()));
    let mut bad = id.clone();
    bad.mats[1] = bad.mats[1].scale(&Q.from_i64(0));
    assert!(matches!(induced_on_homology(&bad, &c, &c, &h, &h), Err(Error::NotChainMap(_))));
}

#[test]
fn kronecker_and_law_names() {
    let a = Matrix::from_int_rows(Q, &[vec![1, 2], vec![0, 1]]);
    let b = Matrix::from_int_rows(Q, &[vec![0, 1]]);
    let k = kronecker(&a, &b);
    assert_eq!((k.rows, k.cols), (2, 4));
    assert_eq!(k.get(0, 3).to_i64(), Some(2));
    assert_eq!(Law::parse("coZinbiel").unwrap(), Law::CoZinbiel);
    assert_eq!(Law::parse("semi-hopf").unwrap(), Law::SemiHopf);
    assert!(Law::parse("nope").is_err());
}
