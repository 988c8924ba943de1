//! The verification suite behind `nchull check`: every structural and
//! enumerative claim, instantiated exhaustively up to a point count and
//! compared with the exact-geometry oracle where one applies.

use std::collections::HashSet;

use serde::Serialize;

use crate::configuration::{enumerate_shapes, BlankFilter, HullConfig, ShapeOptions};
use crate::error::Result;
use crate::hullposet::{self, HullPoset};
use crate::lattice::{
    build_lattice, embedding_check_elements, is_noncrossing, set_partitions, NCLattice,
};
use crate::oracle::Geometry;
use crate::scd::{scd, verify_scd};
use crate::trees::{self, boolean_union_check, maximal_boolean_atom_sets, TreeContext};

/// One named check: whether it held and what it saw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn pass(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            detail,
            counterexample: None,
        }
    }

    fn fail(name: &str, detail: String, counterexample: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: false,
            detail,
            counterexample: Some(counterexample),
        }
    }
}

fn shapes(n: usize, blank: BlankFilter, segment: bool) -> Vec<HullConfig> {
    enumerate_shapes(
        n,
        ShapeOptions {
            blank,
            segment,
            ..ShapeOptions::default()
        },
    )
    .unwrap_or_default()
}

fn all_shapes(n: usize) -> Vec<HullConfig> {
    shapes(n, BlankFilter::Any, true)
}

/// All spanning trees on `0..n`, decoded from Pruefer sequences.
pub fn spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n < 2 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut() {
            *s = c % n;
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Combinatorial noncrossing test against exact hulls, every set partition.
pub fn oracle_partitions(max_n: usize) -> CheckOutcome {
    let name = "oracle agreement: partitions";
    let mut count = 0usize;
    for n in 2..=max_n {
        for config in all_shapes(n) {
            let g = Geometry::new(config.realize());
            for p in set_partitions(n) {
                let fast = is_noncrossing(&config, &p).unwrap_or(false);
                let exact = g.is_noncrossing(&p.blocks());
                count += 1;
                if fast != exact {
                    return CheckOutcome::fail(
                        name,
                        format!("{count} compared"),
                        format!("{config} {p}: {fast} vs {exact}"),
                    );
                }
            }
        }
    }
    CheckOutcome::pass(name, format!("{count} partitions agree"))
}

/// Tree predicates against the exact oracle, every spanning tree.
pub fn oracle_trees(max_n: usize) -> CheckOutcome {
    let name = "oracle agreement: trees";
    let mut count = 0usize;
    for n in 2..=max_n {
        let all = spanning_trees(n);
        for config in all_shapes(n) {
            let g = Geometry::new(config.realize());
            let ctx = TreeContext::new(&config);
            for edges in &all {
                let f = trees::Forest::new(n, edges).expect("valid spanning tree");
                let v = match g.tree_verdict(edges) {
                    Ok(v) => v,
                    Err(e) => return CheckOutcome::fail(name, String::new(), e.to_string()),
                };
                count += 1;
                let nc = ctx.is_noncrossing_tree(&f);
                let cg = nc.then(|| ctx.has_convex_geodesics(&f).unwrap_or(false));
                let consistent = nc == v.noncrossing
                    && cg == v.convex_geodesics
                    && v.convex_geodesics == v.convex_geodesics_pairwise;
                if !consistent {
                    return CheckOutcome::fail(
                        name,
                        format!("{count} compared"),
                        format!("{config} {f}: ({nc}, {cg:?}) vs {v:?}"),
                    );
                }
            }
        }
    }
    CheckOutcome::pass(name, format!("{count} trees agree"))
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// Bounds, gradedness, Catalan counts for convex position and Boolean
/// lattices for segments.
pub fn lattice_structure(max_n: usize) -> CheckOutcome {
    let name = "lattice structure";
    let mut count = 0;
    for n in 2..=max_n {
        for config in all_shapes(n) {
            let l = match build_lattice(&config) {
                Ok(l) => l,
                Err(e) => return CheckOutcome::fail(name, String::new(), format!("{config}: {e}")),
            };
            count += 1;
            if !l.is_graded() {
                return CheckOutcome::fail(name, String::new(), format!("{config} is not graded"));
            }
            let all_blank = config.shape().is_some_and(|s| s.iter().all(|&c| c == 0));
            if all_blank && l.len() != catalan(n) {
                return CheckOutcome::fail(
                    name,
                    String::new(),
                    format!("{config}: {} elements", l.len()),
                );
            }
            if config.is_segment() && l.len() != 1 << (n - 1) {
                return CheckOutcome::fail(
                    name,
                    String::new(),
                    format!("{config}: {} elements", l.len()),
                );
            }
        }
    }
    CheckOutcome::pass(name, format!("{count} lattices bounded and graded"))
}

/// SCD for every shape with a blank side and every segment.
pub fn scd_all(max_n: usize) -> CheckOutcome {
    let name = "symmetric chain decompositions";
    let mut count = 0;
    for n in 2..=max_n {
        let mut configs = shapes(n, BlankFilter::WithBlankSide, false);
        configs.push(HullConfig::segment(n).expect("n >= 2"));
        for config in configs {
            let res = build_lattice(&config)
                .and_then(|l| scd(&l).map(|d| (verify_scd(&l, &d), d.len(), l)));
            match res {
                Ok((report, chains, l)) => {
                    count += 1;
                    let widest = l.rank_polynomial().into_iter().max().unwrap_or(0);
                    if !report.passed() || chains != widest {
                        return CheckOutcome::fail(
                            name,
                            String::new(),
                            format!("{config}: {report:?}, {chains} chains"),
                        );
                    }
                }
                Err(e) => return CheckOutcome::fail(name, String::new(), format!("{config}: {e}")),
            }
        }
    }
    CheckOutcome::pass(name, format!("{count} decompositions verified"))
}

/// Atom sets and cg trees in bijection; every element in some `Bool(tau)`.
pub fn boolean_bijection_union(max_n: usize) -> CheckOutcome {
    let name = "boolean bijection and union";
    let mut count = 0;
    for n in 2..=max_n {
        for config in all_shapes(n) {
            let res: Result<(NCLattice, Vec<trees::Forest>, Vec<Vec<usize>>)> = (|| {
                let l = build_lattice(&config)?;
                let t = trees::enumerate_cg_trees(&config)?;
                let a = maximal_boolean_atom_sets(&l, 10_000_000)?;
                Ok((l, t, a))
            })();
            let (l, ts, atoms) = match res {
                Ok(x) => x,
                Err(e) => return CheckOutcome::fail(name, String::new(), format!("{config}: {e}")),
            };
            let from_atoms: HashSet<trees::Forest> = atoms
                .iter()
                .filter_map(|s| trees::atoms_to_forest(&l, s).ok())
                .collect();
            let tree_set: HashSet<trees::Forest> = ts.iter().cloned().collect();
            if from_atoms.len() != atoms.len() || from_atoms != tree_set {
                return CheckOutcome::fail(
                    name,
                    String::new(),
                    format!("{config}: {} atom sets, {} trees", atoms.len(), ts.len()),
                );
            }
            let union = boolean_union_check(&l, &ts);
            if !union.covered {
                let e = union.missing.expect("missing element");
                return CheckOutcome::fail(
                    name,
                    String::new(),
                    format!("{config}: {} has no witness", l.elements()[e]),
                );
            }
            count += 1;
        }
    }
    CheckOutcome::pass(name, format!("{count} shapes"))
}

/// Fuss-Catalan counts of cg trees in convex position.
pub fn fuss_catalan(max_n: usize) -> CheckOutcome {
    let name = "fuss-catalan tree counts";
    for n in 3..=max_n {
        let config = HullConfig::polygon(vec![0; n]).expect("n >= 3");
        let got = trees::enumerate_cg_trees(&config)
            .map(|t| t.len())
            .unwrap_or(0);
        let want = binom(3 * n - 3, n - 1) / (2 * n - 1);
        if got != want {
            return CheckOutcome::fail(
                name,
                String::new(),
                format!("n = {n}: {got} trees, expected {want}"),
            );
        }
    }
    CheckOutcome::pass(name, format!("n = 3..={max_n}"))
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Rank counts, extreme counts and Boolean intervals of rank gap at most
/// three in H(n).
pub fn hull_poset(max_n: usize, interval_max_n: usize) -> CheckOutcome {
    let name = "hull poset counts and intervals";
    for n in 3..=max_n {
        let h = match HullPoset::build(n) {
            Ok(h) => h,
            Err(e) => return CheckOutcome::fail(name, String::new(), e.to_string()),
        };
        let counts = h.rank_counts();
        for (k, &c) in counts.iter().enumerate().skip(2) {
            let want = if k == 2 {
                factorial(n) / 2
            } else {
                factorial(n - 1) * binom(n, k)
            };
            if c != want {
                return CheckOutcome::fail(
                    name,
                    String::new(),
                    format!("n = {n}, rank {k}: {c} vs {want}"),
                );
            }
        }
        for (i, e) in h.elements().iter().enumerate() {
            let want = if e.is_minimal() {
                1 << (n - 2)
            } else if e.rank() == n {
                n << (n - 3)
            } else {
                continue;
            };
            if h.count_extremes(i) != Some(want) {
                return CheckOutcome::fail(
                    name,
                    String::new(),
                    format!("{e}: {:?} vs {want}", h.count_extremes(i)),
                );
            }
        }
        if n <= interval_max_n {
            for b in 0..h.elements().len() {
                let floor = h.elements()[b].rank().saturating_sub(3).max(2);
                for a in h.closure(b, true, floor) {
                    if !h.interval_is_boolean(a, b) {
                        return CheckOutcome::fail(
                            name,
                            String::new(),
                            format!("[{}, {}] is not Boolean", h.elements()[a], h.elements()[b]),
                        );
                    }
                }
            }
        }
    }
    CheckOutcome::pass(
        name,
        format!("n = 3..={max_n}, intervals up to n = {interval_max_n}"),
    )
}

/// NC(a) inside NC(b), strictly smaller, for every cover `a < b` in H(n).
pub fn embeddings(max_n: usize) -> CheckOutcome {
    let name = "hull poset embeddings";
    let mut count = 0;
    for n in 3..=max_n {
        let h = match HullPoset::build(n) {
            Ok(h) => h,
            Err(e) => return CheckOutcome::fail(name, String::new(), e.to_string()),
        };
        for (b, eb) in h.elements().iter().enumerate() {
            for &a in h.lower_covers(b) {
                let ea = &h.elements()[a];
                count += 1;
                if embedding_check_elements(ea, eb) != Ok(true) {
                    return CheckOutcome::fail(name, String::new(), format!("{ea} below {eb}"));
                }
            }
        }
    }
    CheckOutcome::pass(name, format!("{count} covers"))
}

/// The slide procedure repairs every cg tree across every collapse.
pub fn collapse_repairs(max_n: usize) -> CheckOutcome {
    let name = "collapse repair";
    let mut count = 0;
    for n in 3..=max_n {
        for config in shapes(n, BlankFilter::Any, false) {
            let q = hullposet::HullElement::from_config(&config);
            let collapses = hullposet::elementary_collapses(&q).unwrap_or_default();
            let ctx = TreeContext::new(&config);
            let tq = ctx
                .enumerate_cg_trees(trees::DEFAULT_MAX_TREES)
                .unwrap_or_default();
            for p in &collapses {
                let nc_p: HashSet<_> = crate::lattice::labelled_partitions(p)
                    .unwrap_or_default()
                    .into_iter()
                    .collect();
                for tree in &tq {
                    for mask in 0..1u64 << tree.len() {
                        let rho = crate::lattice::Partition::from_masks(
                            n,
                            tree.subforest(mask).components(),
                        )
                        .expect("components");
                        if !nc_p.contains(&rho) {
                            continue;
                        }
                        count += 1;
                        if let Err(e) = trees::collapse_repair(
                            &q,
                            p,
                            tree,
                            &rho,
                            trees::RepairOptions::default(),
                        ) {
                            return CheckOutcome::fail(
                                name,
                                String::new(),
                                format!("{q} -> {p}, {tree}, {rho}: {e}"),
                            );
                        }
                    }
                }
            }
        }
    }
    CheckOutcome::pass(name, format!("{count} repairs"))
}

/// Rank vectors of shapes without a blank side; reported, never failed
/// except for the triangle with midpoints, which must be asymmetric.
pub fn symmetry_scan(max_n: usize) -> CheckOutcome {
    let name = "rank symmetry scan";
    let mut lines = Vec::new();
    for n in 3..=max_n {
        for config in shapes(n, BlankFilter::WithoutBlankSide, false) {
            if config.canonical() != config {
                continue;
            }
            match build_lattice(&config) {
                Ok(l) => {
                    let sym = l.is_rank_symmetric();
                    if config.to_string() == "[1;1;1]" && sym {
                        return CheckOutcome::fail(
                            name,
                            String::new(),
                            "[1;1;1] is rank-symmetric".into(),
                        );
                    }
                    lines.push(format!(
                        "{config} {:?} {}",
                        l.rank_polynomial(),
                        if sym { "symmetric" } else { "asymmetric" }
                    ));
                }
                Err(e) => lines.push(format!("{config} skipped: {e}")),
            }
        }
    }
    CheckOutcome::pass(name, lines.join("; "))
}

/// The full suite up to `max_n` points; heavier checks use smaller caps.
pub fn run_suite(max_n: usize) -> Vec<CheckOutcome> {
    vec![
        oracle_partitions(max_n.min(7)),
        oracle_trees(max_n.min(6)),
        lattice_structure(max_n.min(9)),
        scd_all(max_n.min(8)),
        boolean_bijection_union(max_n.min(7)),
        fuss_catalan(max_n.min(6)),
        hull_poset(max_n.min(7), max_n.min(6)),
        embeddings(max_n.min(6)),
        collapse_repairs(max_n.min(5)),
        symmetry_scan(max_n.min(8)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruefer_counts() {
        assert_eq!(spanning_trees(2).len(), 1);
        assert_eq!(spanning_trees(4).len(), 16);
        let five: HashSet<_> = spanning_trees(5)
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        assert_eq!(five.len(), 125);
    }

    #[test]
    fn small_suite_passes() {
        for outcome in run_suite(5) {
            assert!(outcome.passed, "{outcome:?}");
        }
    }
}
