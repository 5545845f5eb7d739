use proptest::prelude::*;

use super::*;
use crate::chains::{homology, tensor_complex};
use crate::coalgebra::{chain_coalgebra, check_laws, delta_halves, homology_coalgebra, primitive_analysis, Law};
use crate::nerves::DEFAULT_CELL_BUDGET;
use crate::racks::{cyclic_group, symmetric_group};

const Q: FieldTag = FieldTag::Rationals;
const Z4: RingTag = RingTag::ZMod(4);
const F2: RingTag = RingTag::PrimeField(2);

fn m(ring: RingTag, rows: &[&[u64]]) -> SquareMatrix {
    SquareMatrix::from_rows(ring, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn rack_cx(x: &PointedRack, top: usize) -> ChainComplex {
    build_cubical_complex(Arc::new(rack_nerve(x, top, DEFAULT_CELL_BUDGET).unwrap()), Q, Flavor::Normalized).unwrap()
}

#[test]
fn ring_parsing_and_units() {
    assert_eq!(RingTag::parse("zmod:4").unwrap(), Z4);
    assert_eq!(RingTag::parse("f2").unwrap(), F2);
    assert!(RingTag::parse("f4").is_err());
    assert!(RingTag::parse("zmod:1").is_err());
    assert!(Z4.is_unit(3) && !Z4.is_unit(2));
    assert_eq!(Z4.to_string(), "zmod:4");
}

#[test]
fn direct_sum_examples() {
    let i1 = SquareMatrix::identity(Z4, 1);
    assert_eq!(direct_sum(&i1, &i1).unwrap(), SquareMatrix::identity(Z4, 2));
    assert_eq!(direct_sum(&m(Z4, &[&[3]]), &m(Z4, &[&[2]])).unwrap(), m(Z4, &[&[3, 0], &[0, 2]]));
    assert!(matches!(direct_sum(&i1, &SquareMatrix::identity(F2, 1)), Err(Error::RingMismatch)));
}

#[test]
fn interleave_examples() {
    assert_eq!(interleave_mu(&m(Z4, &[&[3]]), &m(Z4, &[&[1]])).unwrap(), m(Z4, &[&[3, 0], &[0, 1]]));
    for n in 1..4 {
        let i = SquareMatrix::identity(Z4, n);
        assert_eq!(interleave_mu(&i, &i).unwrap(), SquareMatrix::identity(Z4, 2 * n));
    }
    let a = m(Z4, &[&[1, 2], &[3, 1]]);
    let b = m(Z4, &[&[1, 1], &[0, 3]]);
    let mu = interleave_mu(&a, &b).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(mu.get(2 * i, 2 * j), a.get(i, j));
            assert_eq!(mu.get(2 * i + 1, 2 * j + 1), b.get(i, j));
            assert_eq!(mu.get(2 * i, 2 * j + 1), 0);
        }
    }
    assert!(matches!(interleave_mu(&a, &SquareMatrix::identity(Z4, 1)), Err(Error::SizeMismatch(_))));
}

#[test]
fn conjugator_examples() {
    assert_eq!(d_matrix(F2, 1, 1), m(F2, &[&[0, 1], &[1, 0]]));
    assert_eq!(p_matrix(F2, 1), SquareMatrix::identity(F2, 2));
    assert_eq!(p_matrix(F2, 2), SquareMatrix::permutation(F2, &[0, 2, 1, 3]));
    // D_{1,2} = [[0, I_2], [I_1, 0]]
    assert_eq!(d_matrix(F2, 1, 2), m(F2, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
}

#[test]
fn determinant_and_inverse() {
    let a = m(Z4, &[&[1, 2], &[0, 1]]);
    assert_eq!(a.determinant(), 1);
    assert_eq!(a.inverse().unwrap(), a);
    let b = m(Z4, &[&[2, 1], &[1, 1]]);
    assert_eq!(b.determinant(), 1);
    assert_eq!(b.mul(&b.inverse().unwrap()).unwrap(), SquareMatrix::identity(Z4, 2));
    let s = m(Z4, &[&[2, 0], &[0, 1]]);
    assert!(!s.is_invertible() && s.inverse().is_none());
    assert_eq!(m(Z4, &[&[0, 1], &[1, 0]]).determinant(), 3);
}

#[test]
fn general_linear_group_orders() {
    assert_eq!(all_invertible(F2, 2).unwrap().len(), 6);
    assert_eq!(all_invertible(F2, 3).unwrap().len(), 168);
    assert_eq!(all_invertible(Z4, 1).unwrap().len(), 2);
    assert_eq!(all_invertible(Z4, 2).unwrap().len(), 96);
    assert_eq!(all_invertible(RingTag::PrimeField(3), 2).unwrap().len(), 48);
    assert!(all_invertible(Z4, 3).is_none());
    assert_eq!(gl_group(F2, 2).unwrap().0.order(), 6);
}

#[test]
fn stable_equality_pads_with_identity() {
    let a = m(Z4, &[&[3]]);
    assert!(stable_eq(&a, &direct_sum(&a, &SquareMatrix::identity(Z4, 2)).unwrap()));
    assert!(!stable_eq(&a, &SquareMatrix::identity(Z4, 3)));
}

#[test]
fn lemmas_over_z4() {
    let r = verify_matrix_lemmas(Z4, 3, 50, 7).unwrap();
    assert!(r.ok, "{:?}", r.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
    assert!(r.checks.iter().any(|c| c.name == "associativity_XY n=3"));
    assert!(r.checks.iter().filter(|c| c.name.starts_with("D_conjugation")).count() == 9);
    // the transposition product already fails at n = 1: diag(a,b) ↦ diag(b,a)
    assert!(!r.literal[0].holds);
}

#[test]
fn lemmas_over_f2_exhaustive_in_small_sizes() {
    let r = verify_matrix_lemmas(F2, 3, 50, 7).unwrap();
    assert!(r.ok);
    for c in &r.checks {
        if c.name.ends_with("n=1") || c.name.ends_with("n=2") && !c.name.starts_with("D_conjugation m=3") {
            assert!(c.exhaustive, "{}", c.name);
        }
    }
    let mu2 = r.checks.iter().find(|c| c.name == "mu_morphism n=2").unwrap();
    assert_eq!(mu2.cases, 6usize.pow(4));
    // GL_1(F_2) is trivial, so only n ≥ 2 exposes the transposition product
    assert!(r.literal[0].holds && !r.literal[1].holds);
}

#[test]
fn lemmas_are_seed_deterministic() {
    let a = serde_json::to_string(&verify_matrix_lemmas(Z4, 2, 10, 3).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_matrix_lemmas(Z4, 2, 10, 3).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn identity_satisfies_every_witness_identity() {
    for n in 1..=3 {
        let i = SquareMatrix::identity(Z4, n);
        let (l, r) = triple_products(&[i.clone()], &[i.clone()], &[i]).unwrap();
        let (x, y) = associativity_conjugators(Z4, n);
        for (u, v) in l.iter().zip(&r) {
            assert_eq!(u.conjugate_by(&x).unwrap(), v.conjugate_by(&y).unwrap());
        }
    }
}

#[test]
fn rack_product_is_concatenation_for_abelian_groups() {
    let g = cyclic_group(3).unwrap();
    let c = rack_cx(&conj_rack(&g), 2);
    let (t, layout) = tensor_complex(&c, &c, 2).unwrap();
    let p = group_pontryagin(&g, &c, &layout).unwrap();
    assert!(verify_chain_map(&p, &t, &c).ok);
    let codec = TupleCodec { base: 3 };
    let idx = |t: &[usize]| c.basis_index(t.len(), codec.encode(t)).unwrap();
    let v = p.apply(2, &SparseVec::unit(layout.index(1, idx(&[1]), 1, idx(&[2])), Q));
    assert_eq!(v, SparseVec::unit(idx(&[1, 2]), Q));
    // the empty tuple is a two-sided unit
    for k in 0..c.dim(1) {
        assert_eq!(p.apply(1, &SparseVec::unit(layout.index(0, 0, 1, k), Q)), SparseVec::unit(k, Q));
        assert_eq!(p.apply(1, &SparseVec::unit(layout.index(1, k, 0, 0), Q)), SparseVec::unit(k, Q));
    }
}

#[test]
fn nonabelian_multiplication_is_not_a_rack_morphism() {
    let g = symmetric_group(3).unwrap();
    let c = rack_cx(&conj_rack(&g), 2);
    let (_, layout) = tensor_complex(&c, &c, 2).unwrap();
    assert!(matches!(group_pontryagin(&g, &c, &layout), Err(Error::NotRackMorphism(_))));
}

#[test]
fn interleave_product_is_a_chain_map() {
    let r = interleave_product_check(F2, 2, Q, 3, DEFAULT_CELL_BUDGET).unwrap();
    assert_eq!((r.source_order, r.target_order), (6, 36));
    assert!(r.ok, "{:?}", r.chain_map);
    let r = interleave_product_check(Z4, 1, Q, 3, DEFAULT_CELL_BUDGET).unwrap();
    assert_eq!(r.target_order, 4);
    assert!(r.ok);
}

#[test]
fn conjugation_homotopy_on_s3() {
    let g = symmetric_group(3).unwrap();
    let x = conj_rack(&g);
    let a = (0..g.order()).find(|&a| a != g.unit && g.m(a, a) == g.unit).unwrap();
    let r = conjugation_invariance(&x, a, Q, 3, DEFAULT_CELL_BUDGET).unwrap();
    assert!(r.ok, "{:?}", r.signed_append);
    assert_eq!(r.signed_append.checked_degrees, vec![0, 1, 2, 3]);
    assert!(!r.prepend_to_id.ok && !r.prepend_from_id.ok);
}

#[test]
fn conjugation_by_basepoint_is_trivial() {
    let x = conj_rack(&symmetric_group(3).unwrap());
    let c = rack_cx(&x, 2);
    let ca = conjugation_action(&c, &x, x.basepoint).unwrap();
    assert!(ca.first_difference(&GradedMap::identity(&c)).is_none());
    assert!(conjugation_homotopy(&c, &x, x.basepoint, HomotopyForm::SignedAppend)
        .unwrap()
        .mats
        .iter()
        .all(|m| m.is_zero()));
}

#[test]
fn abelian_bialgebra_laws_on_chains() {
    for n in [2, 3] {
        let g = cyclic_group(n).unwrap();
        let c = rack_cx(&conj_rack(&g), 4);
        let halves = delta_halves(&c, 4).unwrap();
        let prod = group_pontryagin(&g, &c, &halves.layout).unwrap();
        let b = chain_coalgebra(&c, &halves, Some(&prod), 4).unwrap();
        let r = check_laws(&b, &[Law::CoZinbiel, Law::SemiHopf, Law::AssociativeProduct], 4).unwrap();
        assert!(r.ok, "{r:?}");
        let p = primitive_analysis(&b, 4).unwrap();
        assert!(p.connected && p.cofree_dims_match);
    }
}

#[test]
fn z2_homology_bialgebra() {
    let g = cyclic_group(2).unwrap();
    let c = rack_cx(&conj_rack(&g), 5);
    let h = homology(&c, 4).unwrap();
    let halves = delta_halves(&c, 4).unwrap();
    let prod = group_pontryagin(&g, &c, &halves.layout).unwrap();
    let b = homology_coalgebra(&c, &h, &halves, Some(&prod)).unwrap();
    let r = check_laws(&b, &[Law::CoZinbiel, Law::SemiHopf], 4).unwrap();
    assert!(r.ok, "{r:?}");
}

fn invertible(ring: RingTag, n: usize) -> impl Strategy<Value = SquareMatrix> {
    any::<u64>().prop_map(move |s| random_invertible(ring, n, &mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mu_is_multiplicative(n in 1usize..4, s in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let v: Vec<_> = (0..4).map(|_| random_invertible(Z4, n, &mut rng)).collect();
        let lhs = interleave_mu(&v[0].mul(&v[1]).unwrap(), &v[2].mul(&v[3]).unwrap()).unwrap();
        let rhs = interleave_mu(&v[0], &v[2]).unwrap().mul(&interleave_mu(&v[1], &v[3]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(a in invertible(RingTag::ZMod(6), 3)) {
        let i = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&i).unwrap(), SquareMatrix::identity(a.ring, 3));
        prop_assert_eq!(i.mul(&a).unwrap(), SquareMatrix::identity(a.ring, 3));
    }

    #[test]
    fn block_swap(a in invertible(Z4, 2), b in invertible(Z4, 3)) {
        let d = d_matrix(Z4, 3, 2);
        prop_assert_eq!(direct_sum(&a, &b).unwrap().conjugate_by(&d).unwrap(), direct_sum(&b, &a).unwrap());
    }
}
