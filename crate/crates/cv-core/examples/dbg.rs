use cv_core::centralizers::profile;
use cv_core::chevalley::ChevalleyBasis;
use cv_core::exactla::rat;
use cv_core::fforacle::*;
use cv_core::rootdata::{case, Coeff};
use cv_core::strategy::eliminate;
use std::collections::{BTreeMap, BTreeSet};

fn find(p: &mut Vec<usize>, i: usize) -> usize {
    if p[i] != i { let r = find(p, p[i]); p[i] = r; }
    p[i]
}

fn reconstruct(id: &str, primes: &[u64], budget: u64) {
    let c = case(id, None).unwrap();
    let b = ChevalleyBasis::new(&c.root_system);
    let n = b.num_positive();
    println!("==== {} (dim u = {})", id, n);

    // per prime: orbit table + family-marked orbit ids
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
        println!("  q={}: orbits={} coverage={} family_orbits={}", q, t.orbit_count(), t.coverage, fam.len());
        tables.push(t);
        family_marks.push(fam);
    }

    // candidate lifts from fixed orbits at each prime
    let mut cand_set: BTreeSet<Vec<u8>> = BTreeSet::new();
    for (t, fam) in tables.iter().zip(&family_marks) {
        for (i, o) in t.orbits.iter().enumerate() {
            if fam.contains(&i) { continue; }
            if let Some(v) = &o.min01 { cand_set.insert(v.clone()); }
        }
    }
    // paper component vectors are pinned: never family-filtered
    let pinned: BTreeSet<Vec<u8>> = c
        .expected
        .components
        .iter()
        .filter(|comp| !c.is_family(&comp.id))
        .filter_map(|comp| c.rep(&comp.id))
        .map(|r| r.raw.bytes().map(|ch| ch - b'0').collect())
        .collect();
    for v in &pinned {
        cand_set.insert(v.clone());
    }
    // drop anything that looks family-owned at any prime
    let cands: Vec<Vec<u8>> = cand_set
        .into_iter()
        .filter(|v| {
            pinned.contains(v)
                || tables.iter().zip(&family_marks).zip(primes).all(|((t, fam), &q)| {
                    let digits: Vec<u64> = v.iter().map(|&d| d as u64 % q).collect();
                    !fam.contains(&t.orbit_of_vector(&digits, q))
                })
        })
        .collect();
    println!("  raw candidates: {}", cands.len());

    // char-0 invariants guard the merge: distinct invariants never merge
    let profiles: Vec<Vec<usize>> = cands
        .iter()
        .map(|v| {
            let mut el = b.zero_element(&rat(1));
            for (k, &d) in v.iter().enumerate() { el.nil[k] = rat(d as i64); }
            let p = profile(&b, &el).unwrap();
            let mut inv = vec![p.dim_cb, p.dim_cu];
            // ranks of iterated ad(e)^k on u
            let u = cv_core::centralizers::u_basis(&b);
            let mut images: Vec<_> = u
                .iter()
                .map(|bv| match bv {
                    cv_core::centralizers::BasisVector::Root(i) => b.root_vector(*i, &rat(1)),
                    _ => unreachable!(),
                })
                .collect();
            for _ in 0..4 {
                images = images
                    .iter()
                    .map(|x| b.bracket(x, &el).unwrap())
                    .collect();
                let m = cv_core::exactla::ExactMatrix::from_rows(
                    images.iter().map(|x| x.nil.clone()).collect(),
                );
                inv.push(cv_core::exactla::rank(&m));
            }
            inv
        })
        .collect();
    // union-find merge: same F_q-orbit (non-family) at any prime
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
                    if profiles[group[i]] != profiles[group[j]] {
                        continue; // modular accident, not the same orbit
                    }
                    let (ra, rb) = (find(&mut parent, group[i]), find(&mut parent, group[j]));
                    if ra != rb { parent[ra] = rb; }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for ci in 0..cands.len() {
        let r = find(&mut parent, ci);
        classes.entry(r).or_default().push(ci);
    }
    // class rep = lex-least lift
    let mut reps: Vec<Vec<u8>> = classes
        .values()
        .map(|members| members.iter().map(|&ci| cands[ci].clone()).min().unwrap())
        .collect();
    reps.sort_by(|a, b| b.cmp(a));
    println!("  merged classes: {}", reps.len());

    let mut dist = Vec::new();
    let mut cert = Vec::new();
    for v in &reps {
        let mut el = b.zero_element(&rat(1));
        for (k, &d) in v.iter().enumerate() { el.nil[k] = rat(d as i64); }
        let p = profile(&b, &el).unwrap();
        let s: String = v.iter().map(|d| char::from(b'0' + d)).collect();
        let elim = eliminate(&b, &el, 4).unwrap().is_some()
            || cv_core::strategy::support_escape(&b, &el).unwrap().is_some();
        if elim {
            // eliminated
        } else if p.distinguished {
            dist.push((s, p.dim_component));
        } else {
            cert.push(s);
        }
    }
    println!("  distinguished: {:?}", dist);
    println!("  cert-needed: {:?}", cert);

    // full table with ids (families inserted with t -> 1 for sorting)
    let mut rows: Vec<(Vec<u8>, String)> = reps
        .iter()
        .map(|v| (v.clone(), v.iter().map(|d| char::from(b'0' + d)).collect()))
        .collect();
    for famid in &c.families {
        let rep = c.rep(famid).unwrap();
        let sortkey: Vec<u8> = rep.coeffs.iter().map(|cc| match cc {
            Coeff::Digit(d) => *d,
            Coeff::Param => 1,
        }).collect();
        rows.push((sortkey, rep.raw.clone()));
    }
    rows.sort_by(|a, b| b.0.cmp(&a.0));
    println!("  table ({} rows):", rows.len());
    for (i, (_, s)) in rows.iter().enumerate() {
        let marker = c
            .reps
            .iter()
            .find(|r| r.raw == *s)
            .map(|r| format!("  <-- paper {}", r.id))
            .unwrap_or_default();
        println!("    e{:<4} {}{}", i + 1, s, marker);
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(|s| s.as_str()) {
        Some("G2") => reconstruct("G2", &[5, 7, 11, 13], 200_000_000),
        Some("B3") => reconstruct("B3", &[3, 5, 7], 200_000_000),
        Some("C3") => reconstruct("C3", &[3, 5, 7], 200_000_000),
        Some("A5") => reconstruct("A5", &[2, 3], 200_000_000),
        Some("D4") => reconstruct("D4", &[3, 5], 300_000_000),
        _ => println!("usage: dbg <CASE>"),
    }
}
