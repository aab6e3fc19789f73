//! Worked cases re-derived from scratch and compared with golden files.
//!
//! Each golden value records where it comes from: `published` for values
//! stated with the worked case, `trivial` for values that follow from the
//! definitions alone, `computed` for values this tool derived and pinned.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use fcpc_core::bounds::{join_bounds, partition_gains, plotkin_lower, plotkin_value, support_bounds, trivial_lower};
use fcpc_core::codec::{optimal_redundancy, verify_encoding, Encoding, OptimizeOptions, RedundancyRule, Strategy};
use fcpc_core::contraction::{coset_contraction, verify_contraction, Contraction};
use fcpc_core::dcode::{min_dcode, verify_dcode, DCode, SearchOptions, SearchReport, SearchStatus};
use fcpc_core::metrics::{pdrm, pdrm_grouped};
use fcpc_core::partitions::{
    coordinate_partition, hwdf_partition, join_grouped, kernel_intersection, support_partition, weight_partition,
    ExplicitPartition, Partition, Subspace,
};
use fcpc_core::pgraph::{coset_clique, find_full_clique, support_clique, CliqueOutcome, PartitionGraph};
use fcpc_core::{Error, Field, Space, Word};

use crate::Failure;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

type Case = (&'static str, &'static str, fn(&mut Ctx) -> Outcome);

const CASES: &[Case] = &[
    ("ex2", include_str!("../goldens/ex2.json"), ex2),
    ("ex4", include_str!("../goldens/ex4.json"), ex4),
    ("ex10-weight", include_str!("../goldens/ex10-weight.json"), ex10_weight),
    ("ex10-support", include_str!("../goldens/ex10-support.json"), ex10_support),
    ("ex12", include_str!("../goldens/ex12.json"), ex12),
    ("ex3-join35", include_str!("../goldens/ex3-join35.json"), ex3_join35),
    ("ex8-coord", include_str!("../goldens/ex8-coord.json"), ex8_coord),
    ("ex-f4-support", include_str!("../goldens/ex-f4-support.json"), ex_f4_support),
    ("ex17-coset-f2-5", include_str!("../goldens/ex17-coset-f2-5.json"), ex17_coset),
];

pub fn ids() -> Vec<&'static str> {
    CASES.iter().map(|c| c.0).collect()
}

enum Stop {
    Budget,
    Error(String),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::SearchBudgetExceeded { .. } => Stop::Budget,
            e => Stop::Error(e.to_string()),
        }
    }
}

type Values = BTreeMap<String, Value>;
type Outcome = Result<Values, Stop>;

/// Budget shared by every case in a run.
struct Ctx {
    remaining: u64,
    used: u64,
    values: Values,
}

impl Ctx {
    fn search(&self) -> SearchOptions {
        SearchOptions { budget: self.remaining, ..Default::default() }
    }

    fn optimize(&self) -> OptimizeOptions {
        OptimizeOptions { search: self.search(), ..Default::default() }
    }

    fn spend(&mut self, nodes: u64) {
        self.used += nodes;
        self.remaining = self.remaining.saturating_sub(nodes);
    }

    /// Runs the length search, charging its nodes.
    fn min_dcode(&mut self, d: &fcpc_core::metrics::DistanceMatrix, field: &Field) -> Result<SearchReport, Stop> {
        let rep = min_dcode(d, field, &self.search())?;
        self.spend(rep.nodes_expanded);
        if rep.status == SearchStatus::BudgetExceeded {
            return Err(Stop::Budget);
        }
        Ok(rep)
    }

    fn optimal(&mut self, p: &Partition, t: u32, s: Strategy, user: Option<&Contraction>) -> Result<(usize, Encoding), Stop> {
        match optimal_redundancy(p, t, s, user, &self.optimize()) {
            Ok((cert, enc)) => {
                self.spend(cert.nodes_expanded);
                if !verify_encoding(p, &enc)?.valid {
                    return Err(Stop::Error("synthesized encoding failed verification".into()));
                }
                Ok((cert.r, enc))
            }
            Err(e) => {
                // the search gave up; nothing is left for later cases
                if matches!(e, Error::BudgetExceeded { .. }) {
                    self.spend(self.remaining);
                }
                Err(e.into())
            }
        }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.into(), v.into());
    }

    fn done(&mut self) -> Outcome {
        Ok(std::mem::take(&mut self.values))
    }
}

fn field(q: u32) -> Field {
    Field::new(q).unwrap()
}

fn space(q: u32, k: usize) -> Space {
    Space::new(field(q), k).unwrap()
}

fn word(q: u32, s: &str) -> Word {
    Word::parse(q, s).unwrap()
}

fn strings(ws: &[Word]) -> Value {
    json!(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

/// Blocks as sorted word lists, themselves sorted, so the value does not
/// depend on block numbering.
fn block_sets(p: &ExplicitPartition) -> Value {
    let sp = p.space();
    let mut blocks: Vec<Vec<String>> = p
        .blocks()
        .iter()
        .map(|b| {
            let mut ws: Vec<String> = b.iter().map(|&r| sp.word(r).to_string()).collect();
            ws.sort();
            ws
        })
        .collect();
    blocks.sort();
    json!(blocks)
}

fn sorted_sizes(p: &ExplicitPartition) -> Value {
    let mut s = p.block_sizes();
    s.sort_unstable();
    json!(s)
}

fn from_blocks(sp: Space, blocks: &[&[&str]]) -> ExplicitPartition {
    let mut labels = vec![u32::MAX; sp.size()];
    for (i, b) in blocks.iter().enumerate() {
        for s in b.iter() {
            labels[sp.rank(&word(sp.q(), s)).unwrap()] = i as u32;
        }
    }
    ExplicitPartition::from_block_ids(sp, &labels).unwrap()
}

fn ex2(cx: &mut Ctx) -> Outcome {
    let f2 = field(2);
    let mats: [Vec<Vec<u8>>; 3] = [
        vec![vec![1, 1, 1, 0], vec![0, 1, 1, 0]],
        vec![vec![1, 1, 1, 0], vec![1, 0, 0, 0]],
        vec![vec![1, 0, 0, 0], vec![0, 1, 1, 0]],
    ];
    let kernels = mats.iter().map(|m| Subspace::kernel_of_linear(f2.clone(), 4, m)).collect::<Result<Vec<_>, _>>()?;
    cx.set("kernels_coincide", kernels.windows(2).all(|w| w[0] == w[1]));
    let p = kernels[0].coset_partition()?;
    cx.set("blocks", block_sets(&p));
    let part = Partition::Explicit(p.clone());
    let listed = [("0000", "000000"), ("0010", "111100"), ("1000", "001111"), ("1100", "110011")];
    let mut per_block = vec![Word::zero(2, 6); 4];
    for (m, z) in listed {
        per_block[p.block_of_word(&word(2, m))?] = word(2, z);
    }
    let enc = Encoding::new(part.clone(), 2, 6, RedundancyRule::PerBlock(per_block.clone()))?;
    cx.set("listed_encoding_valid", verify_encoding(&part, &enc)?.valid);
    let mut failing = 0;
    for b in 0..4 {
        for pos in 0..6 {
            let mut z = per_block.clone();
            let mut d = z[b].digits().to_vec();
            d[pos] ^= 1;
            z[b] = Word::new(2, d)?;
            let bad = Encoding::new(part.clone(), 2, 6, RedundancyRule::PerBlock(z))?;
            failing += usize::from(!verify_encoding(&part, &bad)?.valid);
        }
    }
    cx.set("single_symbol_corruptions_failing", failing);
    let clique = coset_clique(&kernels[0]).ok_or_else(|| Stop::Error("no coset clique".into()))?;
    cx.set("coset_clique_is_full", PartitionGraph::new(&p).is_full_clique(&clique)?);
    let (r, _) = cx.optimal(&part, 2, Strategy::Auto, None)?;
    cx.set("optimal_redundancy_t2", r);
    cx.done()
}

fn ex4(cx: &mut Ctx) -> Outcome {
    let f2 = field(2);
    let k1 = Subspace::kernel_of_linear(f2.clone(), 3, &[vec![1, 0, 0]])?;
    let k2 = Subspace::kernel_of_linear(f2.clone(), 3, &[vec![0, 1, 0]])?;
    let u = kernel_intersection(&[k1.clone(), k2.clone()])?;
    let mut elems: Vec<String> = u.elements().into_iter().map(|d| Word::new(2, d).unwrap().to_string()).collect();
    elems.sort();
    cx.set("intersection", json!(elems));
    let pu = u.coset_partition()?;
    cx.set("blocks", block_sets(&pu));
    let sp = space(2, 3);
    let rows = [
        ("000", "000"),
        ("001", "000"),
        ("100", "110"),
        ("101", "110"),
        ("010", "101"),
        ("011", "101"),
        ("110", "011"),
        ("111", "011"),
    ];
    let mut dense = vec![Word::zero(2, 3); 8];
    for (m, z) in rows {
        dense[sp.rank(&word(2, m))?] = word(2, z);
    }
    let part = Partition::Explicit(pu);
    let enc = Encoding::new(part.clone(), 1, 3, RedundancyRule::Dense(dense))?;
    cx.set("listed_encoding_valid", verify_encoding(&part, &enc)?.valid);
    let (r1, _) = cx.optimal(&Partition::Explicit(k1.coset_partition()?), 1, Strategy::Auto, None)?;
    let (r2, _) = cx.optimal(&Partition::Explicit(k2.coset_partition()?), 1, Strategy::Auto, None)?;
    let (ru, _) = cx.optimal(&part, 1, Strategy::Auto, None)?;
    cx.set("optimal_redundancy_f1", r1);
    cx.set("optimal_redundancy_f2", r2);
    cx.set("optimal_redundancy_joint", ru);
    let g = partition_gains(&[2, 2], 3, 3)?;
    cx.set("gains", json!([g.redundancy_gain.to_string(), g.rate_gain.to_string()]));
    cx.done()
}

fn ex10_weight(cx: &mut Ctx) -> Outcome {
    let f3 = field(3);
    let d = pdrm_grouped(&weight_partition(3), 2);
    cx.set("pdrm", json!(d.rows()));
    let listed = DCode::parse(3, &["0000", "1111", "0222", "2001"])?;
    cx.set("listed_dcode_valid", verify_dcode(&d, &listed)?.is_none());
    cx.set("plotkin_lower", plotkin_lower(&d, &f3));
    let rep = cx.min_dcode(&d, &f3)?;
    let wit = rep.witness.unwrap();
    cx.set("r_min", rep.r_min.unwrap());
    cx.set("witness", strings(wit.words()));
    cx.set("witness_valid", verify_dcode(&d, &wit)?.is_none());
    cx.done()
}

fn ex10_support(cx: &mut Ctx) -> Outcome {
    let f3 = field(3);
    let p = support_partition(space(3, 3))?;
    cx.set("block_sizes", sorted_sizes(&p));
    let b = support_bounds(3, 2, &f3, &SearchOptions { budget: 0, ..Default::default() })?;
    cx.set("plotkin_exact", b.lower_exact.map(|x| x.to_string()).unwrap_or_default());
    cx.set("lower_bound", b.lower);
    let reps: Vec<Word> = ["000", "100", "010", "001", "110", "101", "011", "111"].iter().map(|s| word(3, s)).collect();
    let d = pdrm(&p, 2, &reps)?;
    cx.set("closed_form_matches_matrix", Some(plotkin_value(&d, &f3)) == b.lower_exact);
    let listed = DCode::parse(3, &["000000", "001111", "001222", "010112", "010021", "002022", "002101", "000210"])?;
    cx.set("listed_dcode_valid", verify_dcode(&d, &listed)?.is_none());
    let rep = cx.min_dcode(&d, &f3)?;
    let wit = rep.witness.unwrap();
    cx.set("r_min", rep.r_min.unwrap());
    cx.set("witness", strings(wit.words()));
    cx.set("witness_valid", verify_dcode(&d, &wit)?.is_none());
    cx.done()
}

fn ex12_contraction(sp: &Space, image: [&str; 4]) -> Result<Contraction, Error> {
    let group_a = ["0011", "0101", "0110", "1001", "1010", "1100", "1000"];
    let group_b = ["0111", "1011", "1101", "1110"];
    Contraction::from_fn(sp, |x| {
        let s = x.to_string();
        let i = match s.as_str() {
            "1111" => 3,
            s if group_a.contains(&s) => 1,
            s if group_b.contains(&s) => 2,
            _ => 0,
        };
        word(2, image[i])
    })
}

fn ex12(cx: &mut Ctx) -> Outcome {
    let sp = space(2, 4);
    let p = from_blocks(
        sp.clone(),
        &[
            &["0000", "0001", "0010", "0100"],
            &["0011", "0101", "0110", "1001", "1010", "1100", "0111", "1011", "1101", "1000", "1110"],
            &["1111"],
        ],
    );
    cx.set("block_sizes", sorted_sizes(&p));
    let vopts = Default::default();
    let listed_phi = ex12_contraction(&sp, ["0001", "0101", "1101", "1111"])?;
    let listed_u = ex12_contraction(&sp, ["0001", "0011", "0111", "1111"])?;
    cx.set("listed_map_valid", verify_contraction(&p, &listed_phi, &vopts)?.valid);
    cx.set("listed_image_valid", verify_contraction(&p, &listed_u, &vopts)?.valid);
    cx.set("full_clique_exists", matches!(find_full_clique(&p, &Default::default())?, CliqueOutcome::Found(_)));
    let part = Partition::Explicit(p);
    let (rc, _) = cx.optimal(&part, 1, Strategy::ContractionOnly, Some(&listed_phi))?;
    let (rf, _) = cx.optimal(&part, 1, Strategy::FullPdrm, None)?;
    cx.set("contraction_redundancy_t1", rc);
    cx.set("full_redundancy_t1", rf);
    cx.done()
}

fn ex3_join35(cx: &mut Ctx) -> Outcome {
    let d6 = hwdf_partition(35, 6)?;
    let d9 = hwdf_partition(35, 9)?;
    let d3 = hwdf_partition(35, 3)?;
    cx.set("groups_d6", d6.num_groups());
    cx.set("groups_d9", d9.num_groups());
    cx.set("groups_d3", d3.num_groups());
    let j = join_grouped(&d6, &d9)?;
    let intervals: Vec<String> = j.groups().iter().map(|g| format!("{}-{}", g[0], g.last().unwrap())).collect();
    cx.set("join_intervals", json!(intervals));
    cx.set("join_equals_d3", j == d3);
    cx.set("d3_refines_join", (0..=35).all(|a| (0..=35).all(|b| d3.group_of(a) != d3.group_of(b) || j.group_of(a) == j.group_of(b))));
    let f2 = field(2);
    let rep = cx.min_dcode(&pdrm_grouped(&d3, 2), &f2)?;
    cx.set("r_min_d3_t2", rep.r_min.unwrap());
    cx.set("trivial_lower_t2", trivial_lower(d3.num_groups(), 2));
    let part = Partition::Grouped { groups: d3, field: f2.clone() };
    let (_, enc) = cx.optimal(&part, 2, Strategy::Auto, None)?;
    let mut protects = true;
    for g in [&d6, &d9, &j] {
        let other = Partition::Grouped { groups: g.clone(), field: f2.clone() };
        let moved = Encoding::new(other.clone(), 2, enc.r(), enc.rule().clone())?;
        protects &= verify_encoding(&other, &moved)?.valid;
    }
    cx.set("d3_encoding_protects_d6_d9_join", protects);
    let g = partition_gains(&[4, 4], 4, 35)?;
    cx.set("gains", json!([g.redundancy_gain.to_string(), g.rate_gain.to_string()]));
    let b = join_bounds(&[4, 4], 35, 2, Some(46))?;
    cx.set("join_bounds_with_n46", json!([b.lower, b.upper]));
    cx.done()
}

fn ex8_coord(cx: &mut Ctx) -> Outcome {
    let p = coordinate_partition(space(3, 3), &[1, 2])?;
    cx.set("block_sizes", sorted_sizes(&p));
    let clique = match find_full_clique(&p, &Default::default())? {
        CliqueOutcome::Found(c) => c,
        CliqueOutcome::NotFound => return Err(Stop::Error("no full-size clique".into())),
    };
    cx.set("clique_size", clique.size());
    let mut vs: Vec<String> = clique.vertices.iter().map(|w| w.to_string()).collect();
    vs.sort();
    cx.set("clique", json!(vs));
    let (r, _) = cx.optimal(&Partition::Explicit(p), 1, Strategy::Auto, None)?;
    cx.set("optimal_redundancy_t1", r);
    cx.done()
}

fn ex_f4_support(cx: &mut Ctx) -> Outcome {
    let f4 = field(4);
    // with 2 standing for ω and 3 for ω² = ω + 1
    cx.set("omega_squared_is_omega_plus_one", f4.mul(2, 2) == 3 && f4.add(2, 1) == 3);
    let p = support_partition(Space::new(f4.clone(), 2)?)?;
    cx.set("block_sizes", sorted_sizes(&p));
    let c = support_clique(&f4, 2, 1)?;
    let mut vs: Vec<String> = c.vertices.iter().map(|w| w.to_string()).collect();
    vs.sort();
    cx.set("support_clique", json!(vs));
    cx.set("support_clique_is_full", PartitionGraph::new(&p).is_full_clique(&c)?);
    let (r, _) = cx.optimal(&Partition::Explicit(p), 1, Strategy::Auto, None)?;
    cx.set("optimal_redundancy_t1", r);
    cx.done()
}

fn ex17_coset(cx: &mut Ctx) -> Outcome {
    let f2 = field(2);
    let v = Subspace::from_generators(f2.clone(), 5, &[vec![1, 1, 1, 0, 0], vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]])?;
    let p = v.coset_partition()?;
    cx.set("cosets", p.num_blocks());
    cx.set("full_clique_exists", matches!(find_full_clique(&p, &Default::default())?, CliqueOutcome::Found(_)));
    let c = coset_contraction(&v, &[0, 1, 2])?.ok_or_else(|| Stop::Error("coordinates 1..3 give no contraction".into()))?;
    cx.set("image", strings(&{
        let mut img = c.image().to_vec();
        img.sort();
        img
    }));
    cx.set("contraction_valid", verify_contraction(&p, &c, &Default::default())?.valid);
    let part = Partition::Explicit(p);
    let (rc, _) = cx.optimal(&part, 1, Strategy::ContractionOnly, Some(&c))?;
    cx.set("contraction_redundancy_t1", rc);
    cx.done()
}

/// Key-by-key differences between computed values and a golden file.
fn diff(golden: &Value, values: &Values) -> Result<Vec<Value>, String> {
    let expected = golden.get("expected").and_then(Value::as_object).ok_or("golden has no \"expected\" object")?;
    let mut out = Vec::new();
    for (key, entry) in expected {
        let want = entry.get("value").ok_or_else(|| format!("golden entry {key} has no value"))?;
        match entry.get("source").and_then(Value::as_str) {
            Some("published" | "trivial" | "computed") => {}
            _ => return Err(format!("golden entry {key} has no valid source")),
        }
        match values.get(key) {
            Some(got) if got == want => {}
            got => out.push(json!({"key": key, "expected": want, "computed": got})),
        }
    }
    for key in values.keys().filter(|k| !expected.contains_key(*k)) {
        out.push(json!({"key": key, "expected": null, "computed": values[key]}));
    }
    Ok(out)
}

fn golden_text(id: &str, builtin: &str, dir: Option<&Path>) -> Result<String, Failure> {
    match dir {
        None => Ok(builtin.to_string()),
        Some(d) => {
            let path = d.join(format!("{id}.json"));
            std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
        }
    }
}

/// Runs the named cases under one shared node budget. The exit code is 1 if
/// any case failed, else 2 if any ran out of budget, else 0.
pub fn run(ids: &[String], budget: u64, goldens: Option<&Path>) -> Result<(Value, u8), Failure> {
    let mut cx = Ctx { remaining: budget, used: 0, values: Values::new() };
    let mut reports = Vec::new();
    let (mut failed, mut exceeded) = (0, 0);
    for id in ids {
        let &(_, builtin, case) = CASES
            .iter()
            .find(|c| c.0 == id)
            .ok_or_else(|| Failure::Usage(format!("unknown case {id}; known: {}", ids_list())))?;
        let golden: Value = serde_json::from_str(&golden_text(id, builtin, goldens)?)
            .map_err(|e| Failure::Domain(format!("golden for {id}: {e}")))?;
        let start = Instant::now();
        let before = cx.used;
        cx.values.clear();
        let outcome = case(&mut cx);
        let mut report = json!({"id": id});
        match outcome {
            Ok(values) => match diff(&golden, &values) {
                Ok(mismatches) => {
                    let pass = mismatches.is_empty();
                    report["status"] = json!(if pass { "PASS" } else { "FAIL" });
                    if !pass {
                        failed += 1;
                        report["mismatches"] = json!(mismatches);
                    }
                    report["values"] = json!(values);
                }
                Err(m) => {
                    failed += 1;
                    report["status"] = json!("FAIL");
                    report["error"] = json!(m);
                }
            },
            Err(Stop::Budget) => {
                exceeded += 1;
                report["status"] = json!("BUDGET-EXCEEDED");
            }
            Err(Stop::Error(m)) => {
                failed += 1;
                report["status"] = json!("FAIL");
                report["error"] = json!(m);
            }
        }
        report["nodes"] = json!(cx.used - before);
        report["millis"] = json!(start.elapsed().as_millis() as u64);
        reports.push(report);
    }
    let passed = reports.len() - failed - exceeded;
    let summary = json!({
        "cases": reports,
        "passed": passed,
        "failed": failed,
        "budget_exceeded": exceeded,
        "budget": budget,
        "nodes": cx.used,
    });
    let code = if failed > 0 { 1 } else if exceeded > 0 { 2 } else { 0 };
    Ok((summary, code))
}

fn ids_list() -> String {
    ids().join(", ")
}
