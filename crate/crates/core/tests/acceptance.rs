//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use nchull::check;
use nchull::configuration::HullConfig;
use nchull::lattice::build_lattice;
use nchull::scd::{scd, verify_scd};
use nchull::trees;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn from_check(o: check::CheckOutcome) -> Verdict {
    let detail = match o.counterexample {
        Some(c) => format!("{}; counterexample: {c}", o.detail),
        None => o.detail,
    };
    verdict(o.passed, detail)
}

fn triangle_with_midpoints() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_nchull"))
        .args(["stats", "--shape", "[1;1;1]", "--json"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let v: serde_json::Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => return verdict(false, format!("unparseable output: {e}")),
    };
    let r = &v["results"];
    let ranks: Vec<u64> = r["ranks"]
        .as_array()
        .map(|a| a.iter().filter_map(|x| x.as_u64()).collect())
        .unwrap_or_default();
    let ok = out.status.success()
        && ranks == [1, 12, 34, 35, 12, 1]
        && r["elements"] == 95
        && r["graded"] == true
        && r["rank_symmetric"] == false
        && elapsed < Duration::from_secs(5);
    verdict(
        ok,
        format!("ranks {ranks:?}, {} elements, {elapsed:.2?}", r["elements"]),
    )
}

fn boolean_extreme() -> Verdict {
    for n in 2..=10 {
        let l = build_lattice(&HullConfig::segment(n).unwrap()).unwrap();
        if l.len() != 1 << (n - 1) {
            return verdict(false, format!("segment:{n} has {} elements", l.len()));
        }
        // the set of merged gaps {i, i+1} determines a segment partition
        let gaps: Vec<u64> = l
            .elements()
            .iter()
            .map(|p| {
                (0..n - 1)
                    .filter(|&i| p.same_block(i, i + 1))
                    .fold(0, |m, i| m | 1 << i)
            })
            .collect();
        let mut distinct = gaps.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != l.len() {
            return verdict(false, format!("segment:{n}: gap sets are not injective"));
        }
        for a in 0..l.len() {
            for b in 0..l.len() {
                if l.leq(a, b) != (gaps[a] & !gaps[b] == 0) {
                    return verdict(
                        false,
                        format!(
                            "segment:{n}: order differs at {} and {}",
                            l.elements()[a],
                            l.elements()[b]
                        ),
                    );
                }
            }
        }
    }
    verdict(true, "segment:2..=10 isomorphic to Bool(n-1)")
}

fn classical_extreme() -> Verdict {
    let start = Instant::now();
    let want = [5, 14, 42, 132, 429, 1430, 4862];
    let mut got = Vec::new();
    for n in 3..=9 {
        let config = HullConfig::polygon(vec![0; n]).unwrap();
        let l = build_lattice(&config).unwrap();
        let oracle = nchull::oracle::nc_lattice_oracle(&config.realize()).unwrap();
        if oracle.len() != l.len() {
            return verdict(
                false,
                format!("n = {n}: {} vs oracle {}", l.len(), oracle.len()),
            );
        }
        got.push(l.len());
    }
    let elapsed = start.elapsed();
    verdict(
        got == want && elapsed < Duration::from_secs(60),
        format!("{got:?}, {elapsed:.2?}"),
    )
}

fn symmetric_chains() -> Verdict {
    let start = Instant::now();
    let shapes = check::scd_all(8);
    if !shapes.passed {
        return from_check(shapes);
    }
    for n in 9..=10 {
        let l = build_lattice(&HullConfig::segment(n).unwrap()).unwrap();
        let r = scd(&l).map(|d| verify_scd(&l, &d));
        if !r.as_ref().is_ok_and(|r| r.passed()) {
            return verdict(false, format!("segment:{n}: {r:?}"));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        elapsed < Duration::from_secs(600),
        format!("{}, segments to 10, {elapsed:.2?}", shapes.detail),
    )
}

fn fuss_catalan() -> Verdict {
    let got: Vec<usize> = (3..=6)
        .map(|n| {
            trees::enumerate_cg_trees(&HullConfig::polygon(vec![0; n]).unwrap())
                .unwrap()
                .len()
        })
        .collect();
    let formula = check::fuss_catalan(6);
    verdict(
        got == [3, 12, 55, 273] && formula.passed,
        format!("{got:?}"),
    )
}

fn oracle_equivalence() -> Verdict {
    let parts = check::oracle_partitions(7);
    if !parts.passed {
        return from_check(parts);
    }
    let tree = check::oracle_trees(7);
    let passed = tree.passed;
    let detail = format!("{}; {}", parts.detail, tree.detail);
    if passed {
        verdict(true, detail)
    } else {
        from_check(tree)
    }
}

fn symmetry_scan() -> Verdict {
    let o = check::symmetry_scan(8);
    for line in o.detail.split("; ") {
        println!("    {line}");
    }
    verdict(
        o.passed,
        "[1;1;1] asymmetric; remaining shapes reported above",
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("triangle with midpoints", triangle_with_midpoints),
        ("segments are Boolean", boolean_extreme),
        ("convex position is Catalan", classical_extreme),
        ("symmetric chain decompositions", symmetric_chains),
        ("atom sets, trees and union", || {
            from_check(check::boolean_bijection_union(7))
        }),
        ("fuss-catalan tree counts", fuss_catalan),
        ("hull poset counts and intervals", || {
            from_check(check::hull_poset(7, 6))
        }),
        ("oracle equivalence", oracle_equivalence),
        ("rank symmetry scan", symmetry_scan),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let v = f();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} ({}) [{:.2?}]",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
