//! Shared fixtures: the bundled corpus and seeded random curves with their
//! genus and η computed by hand from the gluing data.
#![allow(dead_code)]

use canmod::algebra::{q, Poly, Q};
use canmod::curve::{make_cluster, Cluster, ClusterKind, CurveModel};
use canmod::dsl::{parse_curve, parse_curve_file};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus() -> Vec<(String, CurveModel)> {
    canmod::corpus::BUNDLED.iter().map(|(n, t)| (n.to_string(), parse_curve(t).unwrap())).collect()
}

pub fn corpus_curve(name: &str) -> CurveModel {
    parse_curve(canmod::corpus::bundled(name).unwrap()).unwrap()
}

/// A random curve with independently computed invariants.
#[derive(Clone, Debug)]
pub struct RandomCurve {
    pub name: String,
    pub curve: CurveModel,
    pub genus: usize,
    /// Per cluster, in order.
    pub etas: Vec<usize>,
}

/// Membership table of the semigroup generated by `gens`, up to `limit`.
fn members(gens: &[u64], limit: usize) -> Vec<bool> {
    let mut m = vec![false; limit + 1];
    m[0] = true;
    for n in 1..=limit {
        m[n] = gens.iter().any(|&s| n >= s as usize && m[n - s as usize]);
    }
    m
}

/// Random semigroup with Frobenius number at most 12: `(gens, delta, eta)`.
fn random_semigroup(rng: &mut ChaCha8Rng) -> (Vec<u64>, usize, usize) {
    loop {
        let k = rng.gen_range(2..=4);
        let mut gens: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=13)).collect();
        gens.sort();
        gens.dedup();
        let m = members(&gens, 200);
        let Some(frob) = (0..=200).rev().find(|&n| !m[n]) else { continue };
        if frob > 12 || frob < 1 {
            continue;
        }
        let c = frob + 1;
        let gaps = (0..c).filter(|&n| !m[n]).count();
        // eta = delta - #(elements below the conductor)
        let eta = gaps - (c - gaps);
        return (gens, gaps, eta);
    }
}

/// A seeded curve with `2 ≤ g ≤ 8` built from semigroup clusters, nodes,
/// cusps and Serre gluings at distinct integer points.
pub fn random_curve(seed: u64) -> RandomCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut free: Vec<i64> = (-8..=8).collect();
        free.shuffle(&mut rng);
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut etas = Vec::new();
        let mut genus = 0usize;
        let target = rng.gen_range(2..=8);
        while genus < target {
            let name = format!("P{}", clusters.len());
            let (cl, delta, eta) = match rng.gen_range(0..4) {
                0 => {
                    let (gens, delta, eta) = random_semigroup(&mut rng);
                    let a = free.pop().unwrap();
                    (make_cluster(name, vec![q(a)], &ClusterKind::Semigroup(gens)).unwrap(), delta, eta)
                }
                1 => {
                    let pts = vec![q(free.pop().unwrap()), q(free.pop().unwrap())];
                    (make_cluster(name, pts, &ClusterKind::Node).unwrap(), 1, 0)
                }
                2 => (make_cluster(name, vec![q(free.pop().unwrap())], &ClusterKind::Cusp).unwrap(), 1, 0),
                _ => {
                    let k = rng.gen_range(1..=3);
                    let pts: Vec<_> = (0..k).map(|_| q(free.pop().unwrap())).collect();
                    let mut mult: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
                    if mult.iter().sum::<i64>() < 3 {
                        mult[0] += 3 - mult.iter().sum::<i64>();
                    }
                    let deg = mult.iter().sum::<i64>() as usize;
                    let rows = vec![vec![Poly::one(); k]];
                    let kind = ClusterKind::Explicit { conductor: mult, rows };
                    // O = k + C: delta = deg D - 1, dim O/C = 1
                    (make_cluster(name, pts, &kind).unwrap(), deg - 1, deg - 2)
                }
            };
            genus += delta;
            clusters.push(cl);
            etas.push(eta);
        }
        if genus > 8 {
            continue;
        }
        let curve = CurveModel::validated(clusters).unwrap();
        return RandomCurve { name: format!("random-{seed}"), curve, genus, etas };
    }
}

pub fn random_curves(n: u64) -> Vec<RandomCurve> {
    (0..n).map(|k| random_curve(0x5eed_0000 + k)).collect()
}

/// Genus and per-point η of a curve file, from the declared gluing data.
pub fn hand_invariants(text: &str) -> (usize, Vec<usize>) {
    let file = parse_curve_file(text).unwrap();
    let mut genus = 0;
    let mut etas = Vec::new();
    for p in &file.points {
        let (delta, eta) = match &p.kind {
            ClusterKind::Node | ClusterKind::Cusp => (1, 0),
            ClusterKind::Semigroup(gens) => {
                let m = members(gens, 400);
                let c = (0..=400).rev().find(|&n| !m[n]).unwrap() + 1;
                let gaps = (0..c).filter(|&n| !m[n]).count();
                (gaps, gaps - (c - gaps))
            }
            ClusterKind::Explicit { .. } => panic!("no hand invariants for explicit gluings"),
        };
        genus += delta;
        etas.push(eta);
    }
    (genus, etas)
}

/// Corpus curves paired with their hand invariants, as `RandomCurve`s.
pub fn corpus_cases() -> Vec<RandomCurve> {
    canmod::corpus::BUNDLED
        .iter()
        .map(|(n, t)| {
            let (genus, etas) = hand_invariants(t);
            RandomCurve { name: n.to_string(), curve: parse_curve(t).unwrap(), genus, etas }
        })
        .collect()
}

/// Number of parameters sharing the image of a generic point under the
/// map `t ↦ (p_0(t) : … : p_n(t))`: the least degree over several probes
/// of `gcd_j (p_j(s) p_k(t0) - p_k(s) p_j(t0))`, `p_k(t0) ≠ 0`.
pub fn fibre_degree(components: &[Poly]) -> usize {
    (1..=6i64)
        .map(|k| {
            let t0 = Q::new(k.into(), 7.into()) + q(k * k);
            let vals: Vec<Q> = components.iter().map(|p| p.eval(&t0)).collect();
            let r = vals.iter().position(|v| !v.is_zero()).unwrap();
            let mut g = Poly::zero();
            for (j, p) in components.iter().enumerate() {
                let f = &p.scale(&vals[r]) - &components[r].scale(&vals[j]);
                g = Poly::gcd(&g, &f);
            }
            g.degree().unwrap()
        })
        .min()
        .unwrap()
}
