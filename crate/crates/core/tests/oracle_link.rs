//! Every certified search node is unsatisfiable in concrete groups: no
//! assignment of distinct nonzero elements meets its recorded relations, the
//! forbidden blocks and the mode hypotheses.

use std::collections::HashMap;

use serde_json::Value;

use seqprove::driver::{prove_to_bytes, ProveOptions};
use seqprove::oracle::{Elem, FiniteAbelianGroup};
use seqprove::search::{Mode, ModeConfig};

struct Section {
    mode: String,
    seeded: Vec<Vec<u8>>,
    forbidden: Vec<Vec<u8>>,
    /// Per node: parent and recorded row.
    nodes: HashMap<u64, (Option<u64>, Option<Vec<u8>>)>,
    certified: Vec<u64>,
}

fn bits(v: &Value) -> Vec<u8> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u8).collect()
}

fn sections(bytes: &[u8]) -> Vec<Section> {
    let mut out: Vec<Section> = Vec::new();
    for line in std::str::from_utf8(bytes).unwrap().lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        match v["type"].as_str().unwrap() {
            "header" => out.push(Section {
                mode: v["mode"].as_str().unwrap().to_string(),
                seeded: v["seeded_rows"].as_array().unwrap().iter().map(bits).collect(),
                forbidden: v["initial_cons"].as_array().unwrap().iter().map(bits).collect(),
                nodes: HashMap::new(),
                certified: vec![],
            }),
            "node" => {
                let s = out.last_mut().unwrap();
                let id = v["id"].as_u64().unwrap();
                let row = (!v["row"].is_null() && v["duplicate"] != Value::Bool(true)).then(|| bits(&v["row"]));
                s.nodes.insert(id, (v["parent"].as_u64(), row));
                if v["status"]["kind"] == "certified" {
                    s.certified.push(id);
                }
            }
            _ => {}
        }
    }
    out
}

fn relations(s: &Section, mut id: u64) -> Vec<Vec<u8>> {
    let mut rows = s.seeded.clone();
    loop {
        let (parent, row) = &s.nodes[&id];
        rows.extend(row.clone());
        match parent {
            Some(p) => id = *p,
            None => return rows,
        }
    }
}

fn block_sum(g: &FiniteAbelianGroup, row: &[u8], xs: &[Elem]) -> Elem {
    g.sum(row.iter().zip(xs).filter(|(b, _)| **b == 1).map(|(_, &x)| x))
}

fn satisfiable(g: &FiniteAbelianGroup, k: usize, zero: &[Vec<u8>], nonzero: &[Vec<u8>], no_inverse: bool) -> bool {
    fn go(
        g: &FiniteAbelianGroup,
        k: usize,
        xs: &mut Vec<Elem>,
        zero: &[Vec<u8>],
        nonzero: &[Vec<u8>],
        no_inverse: bool,
    ) -> bool {
        if xs.len() == k {
            return zero.iter().all(|r| block_sum(g, r, xs) == 0) && nonzero.iter().all(|r| block_sum(g, r, xs) != 0);
        }
        for x in g.nonzero_elements() {
            if xs.contains(&x) || (no_inverse && (g.add(x, x) == 0 || xs.contains(&g.neg(x)))) {
                continue;
            }
            xs.push(x);
            if go(g, k, xs, zero, nonzero, no_inverse) {
                return true;
            }
            xs.pop();
        }
        false
    }
    go(g, k, &mut Vec::new(), zero, nonzero, no_inverse)
}

#[test]
fn certified_nodes_have_no_group_model() {
    let groups: Vec<FiniteAbelianGroup> =
        ["Z7", "Z8", "Z9", "Z2xZ4", "Z3xZ3", "Z2xZ2xZ2", "Z11"].iter().map(|s| s.parse().unwrap()).collect();
    let mut checked = 0;
    for mode in [Mode::General, Mode::ZeroSum, Mode::ZeroSumNoInverse] {
        for k in 3..=5 {
            let (report, bytes) = prove_to_bytes(&ProveOptions::new(ModeConfig::new(k, mode))).unwrap();
            assert!(report.verdict.is_proved());
            for s in sections(&bytes) {
                let no_inverse = s.mode == "zero_sum_no_inverse";
                for &id in &s.certified {
                    let rows = relations(&s, id);
                    for g in &groups {
                        if (g.order() as usize) <= k {
                            continue;
                        }
                        assert!(
                            !satisfiable(g, k, &rows, &s.forbidden, no_inverse),
                            "{mode:?} k = {k} node {id} has a model in {g}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "only {checked} checks ran");
}

#[test]
fn the_oracle_finds_models_when_they_exist() {
    let g: FiniteAbelianGroup = "Z7".parse().unwrap();
    // x1 + x2 = 0 with x1, x2 distinct nonzero: 1 + 6.
    assert!(satisfiable(&g, 2, &[vec![1, 1]], &[], false));
    assert!(!satisfiable(&g, 2, &[vec![1, 1]], &[], true));
    assert!(!satisfiable(&g, 3, &[vec![1, 1, 0], vec![0, 1, 1]], &[], false));
}
