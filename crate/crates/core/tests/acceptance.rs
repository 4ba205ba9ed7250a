//! Acceptance suite. Runs as a plain binary and prints one line per
//! criterion; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use hyperturan::construction::{gen_b3, gen_f5_density_counterexample, gen_p3, gen_t3, gen_t3r, validate, Ratio};
use hyperturan::counter::{count_copies, count_embeddings};
use hyperturan::formula::{self, lemma1_check, lemma2_check};
use hyperturan::hypergraph::Mutation;
use hyperturan::search::{c_exact, exact_turan, CExactMode, SearchOptions};
use hyperturan::{ConstructionSpec, CopyCounter, Pattern, TripleSystem, Workers};
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

fn workers() -> Workers {
    Workers::new(std::thread::available_parallelism().map_or(1, |n| n.get()).min(8))
}

fn fano_in_k7() -> Outcome {
    let fano = Pattern::fano();
    let k7 = common::complete(7);
    let copies = count_copies(&k7, &fano).map_err(|e| e.to_string())?;
    let oracle_emb = common::naive_embeddings(fano.system(), &k7);
    let oracle_aut = common::naive_automorphisms(fano.system());
    ensure(copies == 30, || format!("engine copies {copies}"))?;
    ensure(fano.aut_count() == 168, || format!("aut {}", fano.aut_count()))?;
    ensure(oracle_aut == 168, || format!("oracle aut {oracle_aut}"))?;
    ensure(oracle_emb / u128::from(oracle_aut) == 30, || format!("oracle copies {}", oracle_emb / 168))?;
    Ok("copies 30, |Aut| 168 (engine and 7! oracle)".into())
}

fn bases_are_free() -> Outcome {
    let mut checked = 0;
    let mut check = |host: &TripleSystem, p: &Pattern, label: String| -> Result<(), String> {
        let c = CopyCounter::new(p).with_workers(workers()).copies(host).map_err(|e| e.to_string())?;
        checked += 1;
        ensure(c == 0, || format!("{label} has {c} copies of {}", p.name()))
    };
    let fano = Pattern::fano();
    for n in 7..=14 {
        check(&gen_p3(n).unwrap().system, &fano, format!("P3({n})"))?;
    }
    for n in 3..=12 {
        let t = gen_t3(n).unwrap().system;
        check(&t, &Pattern::f5(), format!("T3({n})"))?;
        check(&t, &Pattern::k4minus(), format!("T3({n})"))?;
        check(&gen_b3(n).unwrap().system, &Pattern::b5(), format!("B3({n})"))?;
        check(&gen_t3r(n, 3).unwrap().system, &Pattern::expanded_clique(4).unwrap(), format!("T3_3({n})"))?;
    }
    Ok(format!("{checked} base/pattern pairs with zero copies"))
}

fn c_exact_matches_closed_form() -> Outcome {
    let fano = Pattern::fano();
    let mut seen = Vec::new();
    for n in [8usize, 9, 10, 12] {
        let bound = c_exact(&fano, n, None, CExactMode::Orbits, workers()).map_err(|e| e.to_string())?;
        let closed = formula::c_fano(n as u64);
        ensure(bound.value == closed, || format!("n = {n}: engine {} vs closed form {closed}", bound.value))?;
        if n % 2 == 1 {
            let p = gen_p3(n).unwrap().partition;
            let w = bound.witness.ok_or("no witness")?;
            let ceil_part = if p.part_size(0) > p.part_size(1) { 0 } else { 1 };
            ensure(p.signature(&w)[ceil_part] == 3, || format!("n = {n}: minimizer {w} not in the larger part"))?;
        }
        seen.push(format!("{n}:{closed}"));
    }
    Ok(format!("c_fano matched at {}", seen.join(" ")))
}

fn zero_two_is_sharp() -> Outcome {
    let fano = Pattern::fano();
    let counter = CopyCounter::new(&fano).with_workers(workers());
    let mut cases = 0;
    for n in [8usize, 10] {
        let c = formula::c_fano(n as u64);
        for q in 0..=formula::q_fano(n as u64) as usize {
            let spec: ConstructionSpec = format!("p3:n={n}+zero2:q={q}").parse().unwrap();
            let built = spec.build().map_err(|e| format!("{spec}: {e}"))?;
            ensure(validate::is_zero_or_two_sharing(&built.added), || format!("{spec}: intersections"))?;
            let total = counter.copies(&built.system).map_err(|e| e.to_string())?;
            let once = counter
                .copies_exactly_one_marked(&built.system, &built.added)
                .map_err(|e| e.to_string())?;
            ensure(total == q as u128 * c, || format!("{spec}: total {total} != {q}*{c}"))?;
            ensure(once == total, || format!("{spec}: exactly-one {once} != total {total}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, q) cases with total = q*c and exactly-one = total"))
}

fn cancellative_turan_numbers() -> Outcome {
    let pats = [Pattern::f5(), Pattern::k4minus()];
    let opts = SearchOptions {
        workers: workers(),
        ..Default::default()
    };
    for n in [5usize, 6] {
        let r = exact_turan(n, &pats, &opts).map_err(|e| e.to_string())?;
        let t3 = formula::t3_size(n as u64) as usize;
        ensure(r.best_size == t3, || format!("n = {n}: found {} vs t3 {t3}", r.best_size))?;
        ensure(r.proved_optimal, || format!("n = {n}: not proved optimal"))?;
        for w in &r.witnesses {
            ensure(pats.iter().all(|p| count_copies(w, p) == Ok(0)), || format!("n = {n}: bad witness"))?;
        }
    }
    Ok("ex(5) = 4, ex(6) = 8, proved".into())
}

fn added_edges_never_share_a_copy() -> Outcome {
    let mut cases = Vec::new();
    let mut run = |spec: String, pattern: &Pattern| -> Result<(), String> {
        let spec: ConstructionSpec = spec.parse().map_err(|e| format!("{e}"))?;
        let built = spec.build().map_err(|e| format!("{spec}: {e}"))?;
        let counter = CopyCounter::new(pattern).with_workers(workers());
        let total = counter.copies(&built.system).map_err(|e| e.to_string())?;
        let once = counter
            .copies_exactly_one_marked(&built.system, &built.added)
            .map_err(|e| e.to_string())?;
        ensure(once == total, || format!("{spec} / {}: exactly-one {once} != total {total}", pattern.name()))?;
        cases.push(spec.to_string());
        Ok(())
    };
    let (f5, b5, l4) = (Pattern::f5(), Pattern::b5(), Pattern::expanded_clique(4).unwrap());
    for n in 9..=12usize {
        let largest = *gen_t3(n).unwrap().partition.part_sizes().iter().max().unwrap();
        let sizes = formula::t3r_part_sizes(largest as u64, 3);
        let partite_cap = sizes.iter().product::<u64>() as usize;
        for q in 1..=3.min(partite_cap) {
            run(format!("t3:n={n}+partite:q={q}"), &f5)?;
        }
        if formula::b3_part(n as u64) >= 7 {
            for q in 1..=3 {
                run(format!("b3:n={n}+linear:q={q}"), &b5)?;
            }
        }
        for q in 1..=3 {
            run(format!("t3r:n={n},r=3+apex:q={q}"), &l4)?;
        }
    }
    Ok(format!("{} constructions with exactly-one = total", cases.len()))
}

fn f5_density_counterexample() -> Outcome {
    let n = 12;
    let c = gen_f5_density_counterexample(n, Ratio::new(1, 2).unwrap()).map_err(|e| e.to_string())?;
    let expected = formula::t3_size(n as u64) as usize + 6;
    ensure(c.system.edge_count() == expected, || format!("{} edges, expected {expected}", c.system.edge_count()))?;
    let f5 = Pattern::f5();
    let total = count_copies(&c.system, &f5).map_err(|e| e.to_string())?;
    let without = c
        .system
        .remove_edges(c.added.iter().copied(), Mutation::Strict)
        .map_err(|e| e.to_string())?;
    let avoiding = count_copies(&without, &f5).map_err(|e| e.to_string())?;
    ensure(avoiding == 0, || format!("{avoiding} copies avoid every added edge"))?;
    ensure(total < 864, || format!("total {total} is not below 864"))?;
    Ok(format!("{expected} edges, {total} copies of F5, all through added edges"))
}

fn lemma_suites() -> Outcome {
    let (mut checks, mut active) = (0u64, 0u64);
    for n in 20..=60u64 {
        for x in 1..n {
            for t in 1..n * n {
                let o = lemma1_check(n, x, t).map_err(|e| e.to_string())?;
                ensure(o.is_consistent(), || format!("balance lemma fails at n={n}, x={x}, t={t}"))?;
                checks += 1;
                active += u64::from(o == formula::LemmaOutcome::Holds);
            }
            for s in (1..).take_while(|s| 10 * s < n) {
                let o = lemma2_check(n, x, s).map_err(|e| e.to_string())?;
                ensure(o.is_consistent(), || format!("count lemma fails at n={n}, x={x}, s={s}"))?;
                checks += 1;
                active += u64::from(o == formula::LemmaOutcome::Holds);
            }
        }
    }
    Ok(format!("{checks} parameter points, {active} with a true hypothesis, no violations"))
}

fn engine_properties() -> Outcome {
    let catalog = Pattern::catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cases = 500;
    for case in 0..cases {
        let n = rng.gen_range(4..=9);
        let p = rng.gen_range(0.15..0.9);
        let host = common::random_host(&mut rng, n, p);
        let pattern = &catalog[case % catalog.len()];
        let fail = |what: &str| format!("case {case} ({}, n = {n}, m = {}): {what}", pattern.name(), host.edge_count());
        let counter = CopyCounter::new(pattern);

        let emb = count_embeddings(&host, pattern).map_err(|e| e.to_string())?;
        ensure(emb == common::naive_embeddings(pattern.system(), &host), || fail("oracle mismatch"))?;
        ensure(emb % u128::from(pattern.aut_count()) == 0, || fail("not divisible by |Aut|"))?;
        let total = emb / u128::from(pattern.aut_count());

        let by_edge: u128 = host.edges().map(|e| counter.copies_through_edge(&host, e).unwrap()).sum();
        ensure(by_edge == pattern.edge_count() as u128 * total, || fail("edge double counting"))?;
        let by_vertex: u128 = (0..n).map(|v| counter.copies_through_vertex(&host, v).unwrap()).sum();
        ensure(by_vertex == pattern.vertex_count() as u128 * total, || fail("vertex double counting"))?;

        let non_edges: Vec<_> = common::complete(n).edges().filter(|t| !host.contains(t)).copied().collect();
        if !non_edges.is_empty() {
            let e = non_edges[rng.gen_range(0..non_edges.len())];
            let bigger = host.add_edges([e], Mutation::Strict).unwrap();
            ensure(counter.copies(&bigger).unwrap() >= total, || fail("count dropped after adding an edge"))?;
        }

        let perm = common::random_permutation(&mut rng, n);
        let moved = common::relabel(&host, &perm);
        ensure(counter.copies(&moved).unwrap() == total, || fail("relabeling changed the count"))?;
    }
    Ok(format!("{cases} random cases, all five properties"))
}

fn anti_pasch_generator() -> Outcome {
    let spec: ConstructionSpec = "p3:n=50+antipasch:q=25".parse().unwrap();
    let c = spec.build().map_err(|e| e.to_string())?;
    let part = c.partition.largest_part();
    ensure(c.partition.part_size(part) == 25, || "part size is not 25".into())?;
    ensure(c.added.len() == 25, || format!("{} triples", c.added.len()))?;
    ensure(validate::inside_part(&c.added, &c.partition, part), || "triple outside the part".into())?;
    ensure(validate::is_linear(&c.added), || "two triples share a pair".into())?;
    ensure(!validate::has_pasch(&c.added), || "Pasch configuration present".into())?;
    let alone = TripleSystem::from_triples(50, c.added.iter().copied()).unwrap();
    let pasch = count_copies(&alone, &Pattern::pasch()).map_err(|e| e.to_string())?;
    ensure(pasch == 0, || format!("engine finds {pasch} Pasch copies"))?;
    Ok("25 linear, Pasch-free triples in a part of size 25".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Fano copies in K7 and automorphism count", fano_in_k7),
        ("extremal bases contain no forbidden pattern", bases_are_free),
        ("engine c(n, Fano) equals the closed form", c_exact_matches_closed_form),
        ("zero-or-two-sharing additions are sharp", zero_two_is_sharp),
        ("cancellative Turán numbers for n = 5, 6", cancellative_turan_numbers),
        ("added edges never share a copy (F5, B5, L4)", added_edges_never_share_a_copy),
        ("F5 density counterexample at n = 12", f5_density_counterexample),
        ("balance and Fano-count lemma suites", lemma_suites),
        ("engine property suite", engine_properties),
        ("anti-Pasch generator at part size 25", anti_pasch_generator),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
