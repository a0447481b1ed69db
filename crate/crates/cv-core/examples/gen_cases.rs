//! Data-preparation tool: reconstructs the infinite-type case tables from
//! finite-field orbit enumeration and writes the case files.
use cv_core::centralizers::profile;
use cv_core::chevalley::ChevalleyBasis;
use cv_core::exactla::{rank, rat, ExactMatrix};
use cv_core::fforacle::*;
use cv_core::rootdata::{case, Coeff};
use cv_core::strategy::{centralizer_dimension_escape, eliminate, support_escape};
use std::collections::{BTreeMap, BTreeSet};

fn find(p: &mut Vec<usize>, i: usize) -> usize {
    if p[i] != i { let r = find(p, p[i]); p[i] = r; }
    p[i]
}

fn reconstruct(id: &str, primes: &[u64], budget: u64, drop: &[&str], merge_keep: &[(&str, &str)]) {
    let c = case(id, None).unwrap();
    let b = ChevalleyBasis::new(&c.root_system);
    let mut tables = Vec::new();
    let mut family_marks: Vec<BTreeSet<usize>> = Vec::new();
    for &q in primes {
        let t = enumerate_orbits(&b, &c, q, budget).unwrap();
        let mut fam = BTreeSet::new();
        for rep in &c.reps {
            if !rep.has_param() { continue; }
            for tv in 1..q {
                let digits: Vec<u64> = rep.coeffs.iter().map(|cc| match cc {
                    Coeff::Digit(d) => *d as u64 % q,
                    Coeff::Param => tv,
                }).collect();
                fam.insert(t.orbit_of_vector(&digits, q));
            }
        }
        eprintln!("  {} q={}: orbits={} coverage={}", id, q, t.orbit_count(), t.coverage);
        tables.push(t);
        family_marks.push(fam);
    }
    let mut cand_set: BTreeSet<Vec<u8>> = BTreeSet::new();
    for (t, fam) in tables.iter().zip(&family_marks) {
        for (i, o) in t.orbits.iter().enumerate() {
            if fam.contains(&i) { continue; }
            if let Some(v) = &o.min01 { cand_set.insert(v.clone()); }
        }
    }
    let pinned: BTreeSet<Vec<u8>> = c.expected.components.iter()
        .filter(|comp| !c.is_family(&comp.id))
        .filter_map(|comp| c.rep(&comp.id))
        .map(|r| r.raw.bytes().map(|ch| ch - b'0').collect())
        .collect();
    for v in &pinned { cand_set.insert(v.clone()); }
    let cands: Vec<Vec<u8>> = cand_set.into_iter().filter(|v| {
        pinned.contains(v) || tables.iter().zip(&family_marks).zip(primes).all(|((t, fam), &q)| {
            let digits: Vec<u64> = v.iter().map(|&d| d as u64 % q).collect();
            !fam.contains(&t.orbit_of_vector(&digits, q))
        })
    }).collect();
    // invariants guard
    let fingerprints: Vec<Vec<usize>> = cands.iter().map(|v| {
        let mut el = b.zero_element(&rat(1));
        for (k, &d) in v.iter().enumerate() { el.nil[k] = rat(d as i64); }
        let p = profile(&b, &el).unwrap();
        let mut inv = vec![p.dim_cb, p.dim_cu];
        let mut imgs: Vec<_> = (0..b.num_positive()).map(|i| b.root_vector(i, &rat(1))).collect();
        for _ in 0..4 {
            imgs = imgs.iter().map(|x| b.bracket(x, &el).unwrap()).collect();
            inv.push(rank(&ExactMatrix::from_rows(imgs.iter().map(|x| x.nil.clone()).collect())));
        }
        inv
    }).collect();
    let mut parent: Vec<usize> = (0..cands.len()).collect();
    for ((t, fam), &q) in tables.iter().zip(&family_marks).zip(primes) {
        let mut by_orbit: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (ci, v) in cands.iter().enumerate() {
            let digits: Vec<u64> = v.iter().map(|&d| d as u64 % q).collect();
            let oi = t.orbit_of_vector(&digits, q);
            if fam.contains(&oi) { continue; }
            by_orbit.entry(oi).or_default().push(ci);
        }
        for (_, group) in by_orbit {
            for i in 0..group.len() {
                for j in (i + 1)..group.len() {
                    if fingerprints[group[i]] != fingerprints[group[j]] { continue; }
                    let (ra, rb) = (find(&mut parent, group[i]), find(&mut parent, group[j]));
                    if ra != rb { parent[ra] = rb; }
                }
            }
        }
    }
    // manual merges (split pairs invisible at the available primes)
    for (a, keep) in merge_keep {
        let ai = cands.iter().position(|v| v.iter().map(|d| (d + b'0') as char).collect::<String>() == *a);
        let ki = cands.iter().position(|v| v.iter().map(|d| (d + b'0') as char).collect::<String>() == *keep);
        if let (Some(ai), Some(ki)) = (ai, ki) {
            let (ra, rb) = (find(&mut parent, ai), find(&mut parent, ki));
            if ra != rb { parent[ra] = rb; }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for ci in 0..cands.len() {
        let r = find(&mut parent, ci);
        classes.entry(r).or_default().push(ci);
    }
    let drop_set: BTreeSet<String> = drop.iter().map(|s| s.to_string()).collect();
    let mut reps: Vec<String> = classes.values()
        .map(|members| members.iter().map(|&ci| cands[ci].clone()).min().unwrap())
        .map(|v| v.iter().map(|d| (d + b'0') as char).collect::<String>())
        .filter(|s| !drop_set.contains(s))
        .collect();
    // rows: fixed reps + family strings; sort desc-lex with t as 1
    let mut rows: Vec<(String, String)> = reps.drain(..).map(|s| (s.clone(), s)).collect();
    for famid in &c.families {
        let rep = c.rep(famid).unwrap();
        let key: String = rep.raw.chars().map(|ch| if ch == 't' { '1' } else { ch }).collect();
        rows.push((key, rep.raw.clone()));
    }
    rows.sort_by(|a, b| b.0.cmp(&a.0));

    // assemble JSON
    let mut old_id_of: BTreeMap<&str, &str> = BTreeMap::new();
    for r in &c.reps { old_id_of.insert(r.raw.as_str(), r.id.as_str()); }
    let mut families = Vec::new();
    let mut id_map: BTreeMap<String, String> = BTreeMap::new(); // old id -> new id
    let mut reps_json = Vec::new();
    for (i, (_, s)) in rows.iter().enumerate() {
        let new_id = format!("e{}", i + 1);
        if let Some(old) = old_id_of.get(s.as_str()) {
            id_map.insert(old.to_string(), new_id.clone());
        }
        if s.contains('t') { families.push(new_id.clone()); }
        reps_json.push(serde_json::json!({"id": new_id, "coeffs": s}));
    }
    // expected block: map old component ids to new ids (must be identical)
    let comps: Vec<serde_json::Value> = c.expected.components.iter().map(|comp| {
        let new_id = id_map.get(&comp.id).unwrap_or_else(|| panic!("{}: component {} not in table", id, comp.id));
        assert_eq!(new_id, &comp.id, "{}: anchor moved: {} -> {}", id, comp.id, new_id);
        serde_json::json!({"id": new_id, "dim": comp.dim})
    }).collect();
    // exceptions: components + unresolved (certificate-needed) rows
    let mut exceptions: Vec<String> = comps.iter().map(|v| v["id"].as_str().unwrap().to_string()).collect();
    for (i, (_, s)) in rows.iter().enumerate() {
        if s.contains('t') { continue; }
        let mut el = b.zero_element(&rat(1));
        for (k, ch) in s.chars().enumerate() { el.nil[k] = rat(ch.to_digit(10).unwrap() as i64); }
        let resolved = eliminate(&b, &el, 4).unwrap().is_some()
            || support_escape(&b, &el).unwrap().is_some()
            || centralizer_dimension_escape(&b, &el).unwrap().is_some();
        let p = profile(&b, &el).unwrap();
        let new_id = format!("e{}", i + 1);
        if !resolved && !p.distinguished {
            eprintln!("  {} CERT-NEEDED: {} = {}", id, new_id, s);
            exceptions.push(new_id);
        } else if !resolved && p.distinguished && !exceptions.contains(&new_id) {
            eprintln!("  {} DIST-UNRESOLVED (needs certificate): {} = {}", id, new_id, s);
            exceptions.push(new_id);
        }
    }
    exceptions.sort_by_key(|e| e[1..].parse::<usize>().unwrap());
    let json = serde_json::json!({
        "case": c.id,
        "type": c.root_system.type_label.as_char().to_string(),
        "rank": c.root_system.rank,
        "roots": c.root_system.positive_roots.iter().map(cv_core::rootdata::RootSystem::digit_string).collect::<Vec<_>>(),
        "reps": reps_json,
        "families": families,
        "expected": {"components": comps, "exceptions": exceptions}
    });
    let path = format!("data/cases/{}.json", id.to_lowercase());
    std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    eprintln!("  {} -> {} rows written to {}", id, rows.len(), path);
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "G2" => reconstruct("G2", &[5, 7, 11, 13], 200_000_000, &[], &[]),
        "B3" => reconstruct("B3", &[3, 5, 7], 200_000_000, &[], &[]),
        "C3" => reconstruct("C3", &[3, 5, 7], 200_000_000, &[], &[]),
        "A5" => reconstruct("A5", &[2, 3], 200_000_000, &[], &[]),
        "D4" => reconstruct(
            "D4",
            &[3, 5],
            300_000_000,
            &["010001111100"],
            &[("101100000101", "101100000001")],
        ),
        _ => eprintln!("usage: gen_cases <CASE>"),
    }
}
