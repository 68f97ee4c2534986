mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swap_planarity::equiv::{
    definition_oracle, mirrored_order_type, replay_matched_walk, same_order_type,
    separating_walk, swap_equivalent, Reason, Verdict,
};
use swap_planarity::geom::{orient, GridPoint, Orientation, DEFAULT_GRID_SIZE};
use swap_planarity::puzzle::{canonical_edges, is_star, PuzzleInstance};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_force(p1: &[GridPoint], p2: &[GridPoint], flip: bool) -> Vec<Vec<usize>> {
    let n = p1.len();
    let want = |o: Orientation| if flip { o.reversed() } else { o };
    let mut out: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|mu| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    (0..n).all(|k| {
                        i == j || j == k || i == k
                            || want(orient(p1[i], p1[j], p1[k])) == orient(p2[mu[i]], p2[mu[j]], p2[mu[k]])
                    })
                })
            })
        })
        .collect();
    out.sort();
    out
}

fn general_position(p: &[GridPoint]) -> bool {
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            if p[i] == p[j] {
                return false;
            }
            for k in j + 1..n {
                if orient(p[i], p[j], p[k]) == Orientation::Collinear {
                    return false;
                }
            }
        }
    }
    true
}

fn point_set() -> impl Strategy<Value = Vec<GridPoint>> {
    (1usize..=6)
        .prop_flat_map(|n| prop::collection::vec((0i64..40, 0i64..40), n))
        .prop_map(|v| v.into_iter().map(|(x, y)| GridPoint::new(x, y)).collect::<Vec<_>>())
        .prop_filter("general position", |p| general_position(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn order_type_matches_brute_force(p1 in point_set(), seed in any::<u64>(), related in any::<bool>()) {
        let n = p1.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // either a relabelled rigid copy of p1 or an unrelated set
        let p2: Vec<GridPoint> = if related {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let turn = rng.random_range(0..4);
            let mirror = rng.random_bool(0.5);
            idx.iter().map(|&i| {
                let GridPoint { mut x, mut y } = p1[i];
                for _ in 0..turn { (x, y) = (-y, x); }
                if mirror { x = -x; }
                GridPoint::new(x + 100, y + 100)
            }).collect()
        } else {
            let mut q = Vec::new();
            while q.len() < n {
                let c = GridPoint::new(rng.random_range(0..40), rng.random_range(0..40));
                let mut t = q.clone();
                t.push(c);
                if general_position(&t) { q = t; }
            }
            q
        };
        let mut fast = same_order_type(&p1, &p2);
        fast.sort();
        prop_assert_eq!(fast, brute_force(&p1, &p2, false));
        let mut fast = mirrored_order_type(&p1, &p2);
        fast.sort();
        prop_assert_eq!(fast, brute_force(&p1, &p2, true));
    }
}

/// Connected non-star instance on `n` sparse points.
fn random_instance(n: usize, seed: u64) -> PuzzleInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts = common::points(n, 800, rng.random());
        let extra = rng.random_range(1..n);
        let edges = common::connected_edges(n, extra, &mut rng);
        if is_star(&edges) {
            continue;
        }
        return common::instance(pts, edges, 800, &mut rng);
    }
}

/// Same drawing with vertices relabelled by `pi` and points by `rho`,
/// optionally rotated by 90 degrees about the grid centre.
fn relabel(a: &PuzzleInstance, pi: &[usize], rho: &[usize], rotate: bool) -> PuzzleInstance {
    let g = DEFAULT_GRID_SIZE as i64;
    let mut b = a.clone();
    for (i, &r) in rho.iter().enumerate() {
        let p = a.points[i];
        b.points[r] = if rotate { GridPoint::new(g - 1 - p.y, p.x) } else { p };
    }
    b.edges = canonical_edges(a.edges.iter().map(|&(u, v)| (pi[u], pi[v])));
    for v in 0..a.vertex_count() {
        b.assignment[pi[v]] = rho[a.assignment[v]];
    }
    b
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#[test]
fn reflexive_and_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..30 {
        let n = rng.random_range(5..=12);
        let a = random_instance(n, seed);
        assert_eq!(swap_equivalent(&a, &a).verdict, Verdict::Equivalent);
        let b = if seed % 2 == 0 {
            relabel(&a, &random_perm(n, &mut rng), &random_perm(n, &mut rng), seed % 4 == 0)
        } else {
            random_instance(n, seed + 1000)
        };
        let ab = swap_equivalent(&a, &b);
        let ba = swap_equivalent(&b, &a);
        assert_eq!(ab.verdict, ba.verdict, "seed {seed}");
        if seed % 2 == 0 {
            assert_eq!(ab.verdict, Verdict::Equivalent);
        }
    }
}

#[test]
fn transitive_on_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for seed in 0..15 {
        let n = rng.random_range(5..=10);
        let a = random_instance(n, seed);
        let b = relabel(&a, &random_perm(n, &mut rng), &random_perm(n, &mut rng), true);
        let c = relabel(&b, &random_perm(n, &mut rng), &random_perm(n, &mut rng), false);
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            let cert = swap_equivalent(x, y);
            assert_eq!(cert.verdict, Verdict::Equivalent);
            assert!(definition_oracle(x, y, cert.matching.as_ref().unwrap(), 8, 50, seed));
        }
        // an unrelated instance stays unrelated to every member of the chain
        let d = random_instance(n, seed + 500);
        let verdicts: Vec<Verdict> =
            [&a, &b, &c].iter().map(|x| swap_equivalent(x, &d).verdict).collect();
        assert!(verdicts.iter().all(|v| *v == verdicts[0]));
    }
}

#[test]
fn mirrored_copy_is_equivalent_by_definition() {
    let a = random_instance(9, 4);
    let g = DEFAULT_GRID_SIZE as i64;
    let mut b = a.clone();
    for p in &mut b.points {
        *p = GridPoint::new(g - 1 - p.x, p.y);
    }
    let cert = swap_equivalent(&a, &b);
    assert_eq!(cert.verdict, Verdict::Equivalent);
    assert!(cert.mirrored);
    assert!(same_order_type(&a.points, &b.points).is_empty());
    assert!(definition_oracle(&a, &b, cert.matching.as_ref().unwrap(), 8, 300, 9));
}

#[test]
fn different_order_type_is_refuted_by_a_walk() {
    let mut refuted = 0;
    for seed in 0..10 {
        let a = random_instance(8, seed);
        let mut b = a.clone();
        b.points = common::points(8, 800, seed + 77);
        let cert = swap_equivalent(&a, &b);
        if cert.verdict == Verdict::Equivalent {
            continue;
        }
        assert_eq!(cert.verdict, Verdict::NotEquivalent);
        let Some(Reason::CrossingMismatch { vertex_matching, points, crosses_in_first }) = cert.reason
        else {
            panic!("expected a crossing witness, got {:?}", cert.reason);
        };
        let walk = separating_walk(&a, points).expect("connected and not a star");
        let after = a.apply_moves(&walk).unwrap();
        let e = after.assignment.iter().position(|&p| p == points[0]).unwrap();
        let f = after.assignment.iter().position(|&p| p == points[1]).unwrap();
        assert!(after.edge_index(e, f).is_some());
        assert_eq!(
            swap_planarity::geom::segments_cross(
                a.points[points[0]],
                a.points[points[1]],
                a.points[points[2]],
                a.points[points[3]]
            ),
            crosses_in_first
        );
        assert!(replay_matched_walk(&a, &b, &vertex_matching, &walk).is_some());
        refuted += 1;
    }
    assert!(refuted >= 8);
}

#[test]
fn disconnected_is_inapplicable() {
    let mut a = random_instance(8, 3);
    a.edges = vec![(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)];
    let cert = swap_equivalent(&a, &a);
    assert_eq!(cert.verdict, Verdict::Inapplicable);
    match cert.reason {
        Some(Reason::Inapplicable(app)) => {
            assert_eq!(app.connected, [false, false]);
            assert!(app.same_order_type);
        }
        other => panic!("{other:?}"),
    }
}
