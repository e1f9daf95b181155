//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use abundance_core::abundance::{bijective_seed, hm_sequence};
use abundance_core::constructions::{behrend_set, fig5_graph, find_distinct_solution, rs_graph, ternary_baseline};
use abundance_core::cycle_equations::{
    build_cycle_equation, check_all_colourings, classify_cycle, exists_convex_combination, proper_colourings,
    CheckOptions, CombinationBounds, ColouringCheck, CycleClass, Verdict,
};
use abundance_core::equations::{brute_avoidance, genus_of, AvoidMode, Equation, SolutionClass};
use abundance_core::graphs::{enumerate_cycles, hom_exists, ColourOrdering, ColouredGraph, Graph, HomSearch, LineHom};
use abundance_core::removal::{count_c5, count_p4_aligned, uniformize, verify_uniform_far, FCopyPacking, DEFAULT_RETRIES};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn k3() -> Graph {
    Graph::complete(3)
}

fn identity() -> ColourOrdering {
    ColourOrdering::identity(3)
}

/// Largest number of zero-sum blocks, by trying every set partition.
fn naive_genus(coeffs: &[i64]) -> usize {
    fn rec(coeffs: &[i64], i: usize, sums: &mut Vec<i64>) -> Option<usize> {
        if i == coeffs.len() {
            return sums.iter().all(|&s| s == 0).then_some(sums.len());
        }
        let mut best = None;
        for b in 0..sums.len() {
            sums[b] += coeffs[i];
            best = best.max(rec(coeffs, i + 1, sums));
            sums[b] -= coeffs[i];
        }
        sums.push(coeffs[i]);
        best = best.max(rec(coeffs, i + 1, sums));
        sums.pop();
        best
    }
    rec(coeffs, 0, &mut Vec::new()).unwrap_or(0)
}

/// Nondecreasing sequences of length `k` over `values`.
fn multisets(values: &[i64], k: usize, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, from: usize) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..values.len() {
        cur.push(values[i]);
        multisets(values, k, out, cur, i);
        cur.pop();
    }
}

fn criterion_1() -> Outcome {
    use rand::seq::SliceRandom;
    let start = Instant::now();
    let values: Vec<i64> = (-5..=5).filter(|&a| a != 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut multisets_checked, mut orders_checked) = (0, 0);
    for k in 2..=8 {
        let mut all = Vec::new();
        multisets(&values, k, &mut all, &mut Vec::new(), 0);
        for coeffs in all.into_iter().filter(|c| c.iter().sum::<i64>() == 0) {
            let naive = naive_genus(&coeffs);
            multisets_checked += 1;
            // The DP scans coefficients in order, so reorderings are checked too.
            let mut orders = vec![coeffs.clone()];
            if k <= 5 {
                let mut perm = coeffs.clone();
                while next_permutation(&mut perm) {
                    orders.push(perm.clone());
                }
            } else {
                for _ in 0..64 {
                    let mut p = coeffs.clone();
                    p.shuffle(&mut rng);
                    orders.push(p);
                }
            }
            for order in orders {
                let (dp, _) = genus_of(&order).map_err(|e| e.to_string())?;
                ensure(dp == naive, || format!("{order:?}: dp {dp}, naive {naive}"))?;
                orders_checked += 1;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!(
        "{multisets_checked} coefficient multisets, {orders_checked} ordered equations, 0 mismatches, {took:.2?}"
    ))
}

/// Lexicographically next arrangement; false after the last one.
fn next_permutation(v: &mut [i64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn criterion_2() -> Outcome {
    let e = Equation::new(vec![2, 2, 2, -3, -3]).map_err(|e| e.to_string())?;
    let (g, _) = e.genus().map_err(|e| e.to_string())?;
    ensure(g == 1 && !e.is_convex(), || format!("(2,2,2,-3,-3): genus {g}, convex {}", e.is_convex()))?;
    let s = Equation::new(vec![1, 1, -1, -1]).map_err(|e| e.to_string())?;
    let (h, _) = s.genus().map_err(|e| e.to_string())?;
    ensure(h == 2 && s.is_symmetric(), || format!("(1,1,-1,-1): genus {h}, symmetric {}", s.is_symmetric()))?;
    Ok("(2,2,2,-3,-3) genus 1 not convex; (1,1,-1,-1) genus 2 symmetric".into())
}

fn random_coloured_cycle(rng: &mut impl Rng, len: usize) -> Vec<usize> {
    loop {
        let mut sigma = vec![rng.gen_range(0..3)];
        for _ in 1..len {
            let prev = *sigma.last().unwrap();
            sigma.push((prev + rng.gen_range(1..3)) % 3);
        }
        if sigma[0] != sigma[len - 1] {
            return sigma;
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut zero = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(3..=12);
        let g = ColouredGraph::new(Graph::cycle(len), k3(), random_coloured_cycle(&mut rng, len)).map_err(|e| e.to_string())?;
        let cycle: Vec<usize> = (0..len).collect();
        let wrap = g.cycle_wrap(&cycle).map_err(|e| e.to_string())?;
        let symmetric = build_cycle_equation(&cycle, &g, &identity()).map_err(|e| e.to_string())?.equation.is_symmetric();
        ensure((wrap == 0) == symmetric, || format!("{:?}: wrap {wrap}, symmetric {symmetric}", g.sigma()))?;
        zero += usize::from(wrap == 0);
    }
    Ok(format!("1000/1000 agree ({zero} with wrap 0)"))
}

fn random_coloured_graph(rng: &mut impl Rng, max_n: usize) -> ColouredGraph {
    let n = rng.gen_range(1..=max_n);
    let sigma: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let density = rng.gen_range(0.2..0.9);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| sigma[u] != sigma[v])
        .filter(|_| rng.gen_bool(density))
        .collect();
    ColouredGraph::new(Graph::new(n, edges).unwrap(), k3(), sigma).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut homomorphic = 0;
    for _ in 0..500 {
        let g = random_coloured_graph(&mut rng, 10);
        let hom = matches!(g.hom_to_coloured_line().map_err(|e| e.to_string())?, LineHom::Levels(_));
        let list = enumerate_cycles(g.host(), usize::MAX, g.host().n());
        ensure(!list.truncated, || "cycle enumeration truncated".into())?;
        let mut wrapped = false;
        for c in &list.cycles {
            wrapped |= g.cycle_wrap(c).map_err(|e| e.to_string())? != 0;
        }
        ensure(hom != wrapped, || format!("{:?}: hom {hom}, wrapped cycle {wrapped}", g))?;
        homomorphic += usize::from(hom);
    }
    Ok(format!("500/500 agree ({homomorphic} map to the coloured line)"))
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    for len in 3..=8 {
        let host = Graph::cycle(len);
        for sigma in proper_colourings(&host, 3, false) {
            let g = ColouredGraph::new(host.clone(), k3(), sigma.clone()).map_err(|e| e.to_string())?;
            let class = classify_cycle(&g).map_err(|e| e.to_string())?;
            let repeats = len > 3 || sigma.iter().collect::<std::collections::HashSet<_>>().len() < len;
            ensure(class.is_abundant() == repeats, || format!("{sigma:?}: {class:?}"))?;
            if len == 5 {
                ensure(class.is_abundant(), || format!("C5 {sigma:?} not abundant"))?;
            }
            let mut convex_somewhere = false;
            for c in ColourOrdering::all(3) {
                convex_somewhere |= exists_convex_combination(&g, &c, 1000, 20).map_err(|e| e.to_string())?.is_some();
            }
            ensure(convex_somewhere == !class.is_abundant(), || format!("{sigma:?}: convex {convex_somewhere}"))?;
            if let CycleClass::NotAbundant { equation, .. } = &class {
                ensure(equation.is_convex(), || format!("{sigma:?}: witness {equation:?} not convex"))?;
            }
            total += 1;
        }
    }
    let rainbow = ColouredGraph::new(Graph::cycle(3), k3(), vec![0, 1, 2]).map_err(|e| e.to_string())?;
    ensure(!classify_cycle(&rainbow).map_err(|e| e.to_string())?.is_abundant(), || "rainbow C3 abundant".into())?;
    Ok(format!("{total} colourings of C3..C8 classified, all cross-checks agree"))
}

fn criterion_6() -> Outcome {
    let eq = Equation::new(vec![1, 1, -2]).map_err(|e| e.to_string())?;
    let mut triangles = 0;
    for n in 1..=30 {
        let set = brute_avoidance(&eq, n, AvoidMode::NontrivialFree).map_err(|e| e.to_string())?.witness;
        let rs = rs_graph(&k3(), &identity(), n as usize, &set).map_err(|e| e.to_string())?;
        for t in rs.graph.triangles() {
            let d: Vec<Option<i64>> = [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]
                .iter()
                .map(|&(p, q)| rs.difference_parameter(p.min(q), p.max(q)))
                .collect();
            ensure(d[0].is_some() && d[0] == d[1] && d[1] == d[2], || format!("N={n} A={set:?}: triangle {t:?} has parameters {d:?}"))?;
            triangles += 1;
        }
        let packing = FCopyPacking { copies: rs.packing.clone() };
        packing.validate(&rs.graph, &k3()).map_err(|e| format!("N={n}: {e}"))?;
        ensure(packing.len() == n as usize * set.len(), || format!("N={n}: {} copies for |A|={}", packing.len(), set.len()))?;
    }
    Ok(format!("N=1..30, {triangles} triangles all canonical, packings edge-disjoint with N|A| copies"))
}

fn criterion_7() -> Outcome {
    let eq = Equation::new(vec![1, -1, 1, 1, -2]).map_err(|e| e.to_string())?;
    // (s + t - 1)(sum |a| + sum |b|) with s + t = 5.
    let constant = 4.0 * 6.0;
    let literal = |n: f64| (8.0 * constant * 5.0 * n).sqrt().ceil() as usize;
    let mut slowest = Duration::ZERO;
    let mut run = |n: usize, size: usize, rng: &mut ChaCha8Rng, require_guarantee: bool| -> Result<(), String> {
        let set: Vec<i64> = sample(rng, n, size).into_iter().map(|x| x as i64 + 1).collect();
        let start = Instant::now();
        let sol = find_distinct_solution(&eq, &set, n as i64).map_err(|e| format!("N={n} |A|={size}: {e}"))?;
        slowest = slowest.max(start.elapsed());
        ensure(sol.assignment.iter().all(|x| set.contains(x)), || "value outside A".into())?;
        let class = eq.classify_solution(&sol.assignment).map_err(|e| e.to_string())?;
        ensure(class == SolutionClass::AllDistinct, || format!("{:?} is {class:?}", sol.assignment))?;
        ensure(!require_guarantee || sol.report.guarantee_holds, || format!("guarantee failed: {:?}", sol.report))?;
        Ok(())
    };
    let at_400 = literal(400.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let size = rng.gen_range(300..=400);
        run(400, size, &mut rng, true)?;
    }
    let at_1000 = literal(1000.0);
    for _ in 0..100 {
        let size = rng.gen_range(at_1000..=1000);
        run(1000, size, &mut rng, true)?;
    }
    ensure(slowest < Duration::from_secs(5), || format!("slowest run {slowest:?}"))?;
    Ok(format!(
        "literal size threshold {at_400} exceeds N=400; 100/100 at N=400 with the realized guarantee, \
         100/100 at N=1000 with |A| >= {at_1000}; all verified, slowest {slowest:.2?}"
    ))
}

fn criterion_8() -> Outcome {
    let g = fig5_graph();
    let host = g.host();
    ensure(host.n() == 15 && host.edge_count() == 30, || format!("{} vertices, {} edges", host.n(), host.edge_count()))?;
    ensure(host.triangles().is_empty(), || "graph has a triangle".into())?;
    let check = ColouringCheck::GenusOne {
        bounds: CombinationBounds::default(),
        orderings: vec![identity()],
    };
    let start = Instant::now();
    let report = check_all_colourings(host, &check, CheckOptions::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let again = check_all_colourings(host, &check, CheckOptions::default()).map_err(|e| e.to_string())?;
    ensure(
        serde_json::to_string(&report).unwrap() == serde_json::to_string(&again).unwrap(),
        || "two runs differ".into(),
    )?;
    ensure(took < Duration::from_secs(15 * 60), || format!("took {took:?}"))?;
    ensure(report.records.len() == report.summary.classes && report.summary.classes > 0, || "missing class verdicts".into())?;
    let verdicts: Vec<String> = report.records.iter().map(|r| format!("{}:{:?}", r.class, r.verdict)).collect();
    let open: Vec<usize> = report.records.iter().filter(|r| r.verdict != Verdict::Holds).map(|r| r.class).collect();
    let mut line = format!(
        "15 vertices, 30 edges, triangle-free; {} classes ({} colourings, {} cycles) in {took:.1?}, deterministic; verdicts [{}]",
        report.summary.classes,
        report.summary.colourings,
        report.summary.cycles,
        verdicts.join(", ")
    );
    if open.is_empty() {
        line.push_str("; a genus-one witness for every class");
        return Ok(line);
    }
    line.push_str(&format!("; classes without a witness at default bounds: {open:?}"));
    // Documented escalations.
    let escalations = [
        ("t=2 L=4", CombinationBounds { max_cycles: 2, max_multiplier: 4 }, 20),
        ("t=3 L=2 cycles<=6", CombinationBounds { max_cycles: 3, max_multiplier: 2 }, 6),
    ];
    for (name, bounds, max_len) in escalations {
        let opts = CheckOptions {
            max_cycle_len: max_len,
            ..CheckOptions::default()
        };
        let check = ColouringCheck::GenusOne {
            bounds,
            orderings: vec![identity()],
        };
        let r = check_all_colourings(host, &check, opts).map_err(|e| e.to_string())?;
        let still: Vec<usize> = r.records.iter().filter(|r| r.verdict != Verdict::Holds).map(|r| r.class).collect();
        line.push_str(&format!("; escalation {name}: without witness {still:?}"));
    }
    Ok(line)
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for name in ["fig1_c5.json", "fig2_petersen.json"] {
        let base = common::load_fixture(name);
        base.verify().map_err(|e| format!("{name}: {e}"))?;
        let ids: Vec<String> = base.nodes.iter().map(|n| n.id.clone()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let mut cert = base.clone();
            let what = common::mutate(&mut cert, &mut rng);
            match cert.verify() {
                Ok(_) => return Err(format!("{name}: mutation accepted: {what}")),
                Err(e) => ensure(ids.contains(&e.node), || format!("{name}: {what}: diagnostic names {}", e.node))?,
            }
        }
        parts.push(format!("{name} verifies, 100/100 mutations rejected"));
    }
    Ok(parts.join("; "))
}

fn criterion_10() -> Outcome {
    let seq = hm_sequence(&bijective_seed(&k3()), 8).map_err(|e| e.to_string())?;
    let k2 = Graph::complete(2);
    let mut first = None;
    for (m, h) in seq.iter().enumerate() {
        let hom = match hom_exists(h.host(), &k2, 100_000_000) {
            HomSearch::Found(_) => true,
            HomSearch::NotFound => false,
            HomSearch::BudgetExhausted => return Err(format!("m={m}: budget exhausted")),
        };
        let bipartite = h.host().two_colouring().is_some();
        ensure(hom == bipartite, || format!("m={m}: hom {hom}, bipartite {bipartite}"))?;
        if !hom && first.is_none() {
            first = Some(m);
        }
    }
    let m = first.ok_or("every H^m up to 8 maps to K2")?;
    Ok(format!("smallest m with H^m not homomorphic to K2 is {m}; oracle agrees for m=0..8"))
}

/// Random graph with `count` edge-disjoint triangles planted on `n`
/// vertices plus sparse noise edges.
fn planted(rng: &mut impl Rng, n: usize, count: usize) -> (Graph, FCopyPacking) {
    let mut used = std::collections::HashSet::new();
    let mut copies = Vec::new();
    while copies.len() < count {
        let t: Vec<usize> = sample(rng, n, 3).into_vec();
        let es = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])].map(|(u, v)| (u.min(v), u.max(v)));
        if es.iter().all(|e| !used.contains(e)) {
            used.extend(es);
            copies.push(t);
        }
    }
    let mut edges = used.clone();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.02) {
                edges.insert((u, v));
            }
        }
    }
    (Graph::new(n, edges).unwrap(), FCopyPacking { copies })
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut smallest_ratio = f64::INFINITY;
    for seed in 0..50u64 {
        let n = rng.gen_range(30..=80);
        let eps = rng.gen_range(0.02..0.08);
        let count = (eps * (n * n) as f64).ceil() as usize;
        let (g, packing) = planted(&mut rng, n, count);
        let out = uniformize(&g, &k3(), &packing, eps, seed, DEFAULT_RETRIES).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure((out.witness.eps - eps / 54.0).abs() < 1e-15, || "witness parameter differs".into())?;
        verify_uniform_far(&out.graph, &k3(), &out.witness).map_err(|e| format!("seed {seed}: {e}"))?;
        let order = out.graph.n() as f64;
        let bound = (eps / 27.0).sqrt() * n as f64;
        ensure(order >= bound, || format!("seed {seed}: order {order} < {bound:.2}"))?;
        smallest_ratio = smallest_ratio.min(order / bound);
    }
    Ok(format!("50/50 witnesses verify at eps/54; order / bound >= {smallest_ratio:.2}"))
}

fn brute_p4(g: &Graph, parts: &[usize]) -> u128 {
    let mut count = 0;
    for &(u, v) in g.edges() {
        for (b, c) in [(u, v), (v, u)] {
            if parts[b] != 1 || parts[c] != 2 {
                continue;
            }
            for &a in g.neighbours(b) {
                for &d in g.neighbours(c) {
                    if parts[a] == 0 && parts[d] == 0 && a != d {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn brute_c5(g: &Graph) -> u128 {
    let mut walks = 0u128;
    for a in 0..g.n() {
        for &b in g.neighbours(a) {
            for &c in g.neighbours(b).iter().filter(|&&c| c != a) {
                for &d in g.neighbours(c).iter().filter(|&&d| d != a && d != b) {
                    for &e in g.neighbours(d).iter().filter(|&&e| e != a && e != b && e != c) {
                        walks += u128::from(g.has_edge(e, a));
                    }
                }
            }
        }
    }
    walks / 10
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..500 {
        let n = rng.gen_range(1..=25);
        let p = rng.gen_range(0.05..0.6);
        let parts: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges: Vec<(usize, usize)> = all.into_iter().filter(|_| rng.gen_bool(p)).collect();
        let g = Graph::new(n, edges).unwrap();
        let p4 = count_p4_aligned(&g, &parts).map_err(|e| e.to_string())?;
        ensure(p4 == brute_p4(&g, &parts), || format!("instance {i}: p4 {p4} vs {}", brute_p4(&g, &parts)))?;
        let c5 = count_c5(&g).map_err(|e| e.to_string())?;
        ensure(c5 == brute_c5(&g), || format!("instance {i}: c5 {c5} vs {}", brute_c5(&g)))?;
    }
    let petersen = Graph::petersen();
    let (fast, slow) = (count_c5(&petersen).map_err(|e| e.to_string())?, brute_c5(&petersen));
    ensure(fast == slow, || format!("Petersen {fast} vs {slow}"))?;
    Ok(format!("500/500 random graphs match both oracles; Petersen has {fast} 5-cycles"))
}

fn criterion_13() -> Outcome {
    let n = 10_000;
    let b = behrend_set(n).map_err(|e| e.to_string())?;
    let set: std::collections::HashSet<u64> = b.members.iter().copied().collect();
    ensure(b.members.iter().all(|&x| (1..=n).contains(&x)), || "member outside [N]".into())?;
    for (i, &x) in b.members.iter().enumerate() {
        for &y in &b.members[i + 1..] {
            ensure((x + y) % 2 != 0 || !set.contains(&((x + y) / 2)), || format!("{x}, {}, {y}", (x + y) / 2))?;
        }
    }
    let baseline = ternary_baseline(n);
    ensure(b.members.len() >= baseline, || format!("{} < baseline {baseline}", b.members.len()))?;
    Ok(format!(
        "|A| = {} (dimension {}, digits {}) >= baseline {baseline}; no nontrivial 3-term progression",
        b.members.len(),
        b.dimension,
        b.digits
    ))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("genus oracle equivalence", criterion_1),
        ("reference equations", criterion_2),
        ("wrap and symmetry", criterion_3),
        ("coloured-line duality", criterion_4),
        ("cycle classification", criterion_5),
        ("difference-graph soundness", criterion_6),
        ("distinct-solution finder", criterion_7),
        ("subset-graph colourings", criterion_8),
        ("certificate suite", criterion_9),
        ("doubling sequence", criterion_10),
        ("uniformization", criterion_11),
        ("counting oracles", criterion_12),
        ("progression-free set", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{took:.1?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{took:.1?}]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
