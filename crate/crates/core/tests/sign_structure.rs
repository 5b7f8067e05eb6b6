use chebrank::altmin::AltMin;
use chebrank::matcore::{profile, ChebyshevVector, DenseMatrix, SignVector};
use chebrank::random::{standard_normal_pc_matrix, stream};
use chebrank::signgraph::{
    build_dependency_graph, dependency_dot, enumerate_from_profile, enumerate_transition_graph,
    transition_dot, u_sign, v_transition, validate_structure, DEFAULT_ENUMERATION_LIMIT,
};
use rand::Rng;

fn random_signs(n: usize, rng: &mut impl Rng) -> SignVector {
    SignVector::new((0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect()).unwrap()
}

#[test]
fn u_sign_matches_phi() {
    let mut rng = stream(31, &[]);
    for _ in 0..200 {
        let (m, n) = (rng.random_range(2..8), rng.random_range(2..8));
        let a = standard_normal_pc_matrix(m, n, &mut rng);
        let p = profile(&a).unwrap();
        let t = random_signs(n, &mut rng);
        let (u, _) = AltMin::new(&a).unwrap().phi(&ChebyshevVector::from(&t)).unwrap();
        assert_eq!(u_sign(&p, &t).unwrap(), u.signs());
    }
}

#[test]
fn transition_is_odd_and_pins_loops() {
    let mut rng = stream(32, &[]);
    for _ in 0..100 {
        let n = rng.random_range(2..10);
        let a = standard_normal_pc_matrix(rng.random_range(2..10), n, &mut rng);
        let p = profile(&a).unwrap();
        let g = build_dependency_graph(&p);
        assert!(!g.loops.is_empty());
        assert!((0..n).all(|j| g.is_loop(g.reach[j])));
        let t = random_signs(n, &mut rng);
        let next = v_transition(&p, &t).unwrap();
        assert_eq!(v_transition(&p, &-&t).unwrap(), -&next);
        for &j in &g.loops {
            assert_eq!(next.get(j), t.get(j));
        }
    }
}

#[test]
fn limit_map_properties() {
    let mut rng = stream(33, &[]);
    for _ in 0..20 {
        let n = rng.random_range(2..9);
        let a = standard_normal_pc_matrix(n, n, &mut rng);
        let g = enumerate_transition_graph(&a, DEFAULT_ENUMERATION_LIMIT).unwrap();
        for t in 0..g.vertex_count() as u32 {
            let next = g.next[t as usize];
            assert_eq!(g.limit[next as usize], g.limit[t as usize]);
            assert_eq!(g.d(t) == 0, next == t);
        }
    }
}

#[test]
fn rank_one_profile_has_two_loop_vertices() {
    // Every row peaks in column 0 and every column peaks in row 0.
    let a = DenseMatrix::from_rows(&[[9.0, 5.0, -4.0], [3.0, 1.0, 0.5], [-2.0, 0.25, 1.0]]).unwrap();
    let g = enumerate_transition_graph(&a, 20).unwrap();
    assert_eq!(g.depth(), 2);
    let loops = (0..g.vertex_count() as u32).filter(|&t| g.next[t as usize] == t).count();
    assert_eq!(loops, 2);
    assert!(validate_structure(&g).passed());
}

#[test]
fn enumeration_limit_and_identity() {
    let id = DenseMatrix::identity(3).unwrap();
    let g = enumerate_transition_graph(&id, 20).unwrap();
    let s = g.summary();
    assert_eq!(s.components.len(), 8);
    assert!(s.components.iter().all(|c| c.size == 1));
    assert!(validate_structure(&g).passed());
    assert!(enumerate_transition_graph(&DenseMatrix::identity(4).unwrap(), 3).is_err());
}

#[test]
fn dot_output_is_deterministic_and_balanced() {
    let a = DenseMatrix::from_rows(&[[3.0, 2.0], [1.0, 0.5]]).unwrap();
    let p = profile(&a).unwrap();
    let g = enumerate_from_profile(&p);
    let d1 = transition_dot(&g);
    assert_eq!(d1, transition_dot(&enumerate_from_profile(&p)));
    let dep = dependency_dot(&build_dependency_graph(&p));
    for text in [&d1, &dep] {
        assert!(text.starts_with("digraph"));
        assert_eq!(text.matches('{').count(), text.matches('}').count());
        assert!(text.ends_with("}\n"));
        assert!(!text.contains('\r'));
    }
}
