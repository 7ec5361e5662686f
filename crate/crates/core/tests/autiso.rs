use dsrg_core::autiso::{
    are_isomorphic, automorphism_group, automorphism_group_with_budget, canonical_form, canonical_labelling, classify,
    format_perm, is_automorphism, parse_perm, refine, Coloring, StabChain,
};
use dsrg_core::blockmat::worked_example;
use dsrg_core::family::build_family_digraph;
use dsrg_core::{Digraph, Error};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// All permutations of 0..v in lexicographic order (Heap's algorithm would do too).
fn permutations(v: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; v], &mut out);
    out
}

fn preserves(g: &Digraph, h: &Digraph, p: &[usize]) -> bool {
    let v = g.order();
    (0..v).all(|a| (0..v).all(|b| g.has_arc(a, b) == h.has_arc(p[a], p[b])))
}

fn brute_aut_order(g: &Digraph, perms: &[Vec<usize>]) -> usize {
    perms.iter().filter(|p| preserves(g, g, p)).count()
}

fn random_digraph(rng: &mut StdRng, v: usize, density: f64) -> Digraph {
    let arcs: Vec<_> = (0..v)
        .flat_map(|a| (0..v).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b)
        .filter(|_| rng.gen_bool(density))
        .collect();
    Digraph::from_arcs(v, arcs).unwrap()
}

fn small_corpus() -> Vec<(String, Digraph)> {
    let mut rng = StdRng::seed_from_u64(99);
    let s = Digraph::from_matrix(&worked_example()).unwrap();
    let mut out = vec![("S".to_string(), s.clone()), ("S converse".to_string(), s.converse())];
    for v in 1..=8 {
        out.push((format!("empty {v}"), Digraph::empty(v)));
        if v >= 2 {
            let cycle = Digraph::from_arcs(v, (0..v).map(|i| (i, (i + 1) % v))).unwrap();
            out.push((format!("cycle {v}"), cycle));
            let complete = Digraph::from_arcs(v, (0..v).flat_map(|a| (0..v).filter(move |&b| b != a).map(move |b| (a, b)))).unwrap();
            out.push((format!("complete {v}"), complete));
        }
    }
    // transitive tournament and a star
    out.push(("transitive 6".into(), Digraph::from_arcs(6, (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b)))).unwrap()));
    out.push(("out-star 7".into(), Digraph::from_arcs(7, (1..7).map(|b| (0, b))).unwrap()));
    for i in 0..24 {
        let v = rng.gen_range(3..=8);
        let d = [0.15, 0.3, 0.5, 0.7][i % 4];
        out.push((format!("random {i}"), random_digraph(&mut rng, v, d)));
    }
    out
}

#[test]
fn orders_match_brute_force_up_to_8_vertices() {
    let perms: Vec<Vec<Vec<usize>>> = (0..=8).map(permutations).collect();
    for (name, g) in small_corpus() {
        let want = brute_aut_order(&g, &perms[g.order()]);
        let got = automorphism_group(&g);
        assert_eq!(got.order, BigUint::from(want), "{name}");
        for gen in &got.generators {
            assert!(is_automorphism(&g, gen), "{name}: {}", format_perm(gen));
        }
    }
}

#[test]
fn worked_example_against_its_converse() {
    let s = Digraph::from_matrix(&worked_example()).unwrap();
    let t = s.converse();
    let brute = permutations(8).into_iter().find(|p| preserves(&s, &t, p));
    let fast = are_isomorphic(&s, &t);
    assert_eq!(brute.is_some(), fast.is_some());
    if let Some(p) = fast {
        assert!(preserves(&s, &t, &p));
        assert_eq!(s.relabel(&p), t);
    }
    assert_eq!(canonical_form(&s) == canonical_form(&t), brute.is_some());
}

#[test]
fn canonical_form_is_invariant_under_relabelling() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut graphs: Vec<Digraph> = small_corpus().into_iter().map(|(_, g)| g).collect();
    graphs.push(build_family_digraph(2).unwrap());
    graphs.push(build_family_digraph(3).unwrap());
    for g in &graphs {
        let c = canonical_form(g);
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..g.order()).collect();
            perm.shuffle(&mut rng);
            let h = g.relabel(&perm);
            assert_eq!(canonical_form(&h), c);
            let iso = are_isomorphic(g, &h).expect("relabelled copy");
            assert_eq!(g.relabel(&iso), h);
        }
    }
}

#[test]
fn canonical_labelling_produces_the_canonical_matrix() {
    let g = build_family_digraph(2).unwrap();
    let lab = canonical_labelling(&g, None).unwrap();
    assert_eq!(g.relabel(&lab.to_canonical()).to_matrix(), lab.canonical);
    assert!(matches!(canonical_labelling(&g, Some(1)), Err(Error::Budget(_))));
    assert!(automorphism_group_with_budget(&g, Some(1)).is_err());
}

#[test]
fn non_isomorphic_pairs_are_separated() {
    let mut rng = StdRng::seed_from_u64(11);
    let perms = permutations(6);
    for _ in 0..40 {
        let g = random_digraph(&mut rng, 6, 0.4);
        let h = random_digraph(&mut rng, 6, 0.4);
        let brute = perms.iter().any(|p| preserves(&g, &h, p));
        assert_eq!(are_isomorphic(&g, &h).is_some(), brute);
        assert_eq!(canonical_form(&g) == canonical_form(&h), brute);
    }
}

#[test]
fn family_generators_are_automorphisms() {
    for n in 2..=4 {
        let g = build_family_digraph(n).unwrap();
        let res = automorphism_group(&g);
        assert!(!res.generators.is_empty());
        for gen in &res.generators {
            assert!(is_automorphism(&g, gen));
        }
        let chain = StabChain::new(g.order(), &res.generators);
        assert_eq!(chain.order(), res.order);
        for gen in &res.generators {
            assert!(chain.contains(gen));
        }
    }
}

/// Group closure by breadth-first multiplication; feasible for small groups.
fn closure_size(degree: usize, gens: &[Vec<usize>]) -> usize {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = std::collections::HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.len()
}

#[test]
fn stabiliser_chain_order_matches_closure() {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..30 {
        let degree = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut p: Vec<usize> = (0..degree).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let chain = StabChain::new(degree, &gens);
        assert_eq!(chain.order(), BigUint::from(closure_size(degree, &gens)));
        let sizes: usize = chain.orbit_sizes().iter().product();
        assert_eq!(BigUint::from(sizes), chain.order());
    }
}

#[test]
fn refinement_is_equitable_and_coarsest_for_vertex_transitive() {
    let g = Digraph::from_arcs(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
    assert_eq!(refine(&g, &Coloring::unit(7)).len(), 1);
    let star = Digraph::from_arcs(5, (1..5).map(|b| (0, b))).unwrap();
    assert_eq!(refine(&star, &Coloring::unit(5)).len(), 2);
}

#[test]
fn classification_groups_relabelled_copies() {
    let mut rng = StdRng::seed_from_u64(4);
    let g = build_family_digraph(2).unwrap();
    let mut graphs = vec![g.clone()];
    for _ in 0..3 {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(&mut rng);
        graphs.push(g.relabel(&perm));
    }
    graphs.push(g.converse());
    let classes = classify(&graphs);
    let total: usize = classes.iter().map(|c| c.size()).sum();
    assert_eq!(total, 5);
    let biggest = classes.iter().map(|c| c.size()).max().unwrap();
    assert!(biggest >= 4);
    for c in &classes {
        assert_eq!(c.aut_order, BigUint::from(896u32));
    }
}

#[test]
fn permutation_text_round_trip() {
    let p = vec![2, 0, 1, 3];
    assert_eq!(parse_perm(&format_perm(&p)).unwrap(), p);
    assert!(parse_perm("1 1 2").is_err());
}
