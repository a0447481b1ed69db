//! Data preparation: search degeneration certificates for the unresolved
//! representatives and write them to data/certs/.
use cv_core::certificates::*;
use cv_core::chevalley::ChevalleyBasis;
use cv_core::fforacle::*;
use cv_core::rootdata::case;
use cv_core::strategy::{classify, VerdictStatus};

fn run(case_id: &str, primes: &[u64], budget: u64) {
    let c = case(case_id, None).unwrap();
    let b = ChevalleyBasis::new(&c.root_system);
    let report = classify(&b, &c, 4).unwrap();
    let mut stragglers: Vec<String> = report
        .certificate_needed()
        .iter()
        .map(|v| v.id.clone())
        .collect();
    // distinguished non-components also need certificates
    for v in &report.verdicts {
        if let VerdictStatus::Component { family: false, .. } = v.status {
            let expected = c.expected.components.iter().any(|comp| comp.id == v.id);
            if !expected {
                stragglers.push(v.id.clone());
            }
        }
    }
    if stragglers.is_empty() {
        eprintln!("{}: nothing to do", case_id);
        return;
    }
    eprintln!("{}: stragglers {:?}", case_id, stragglers);
    let tables: Vec<(u64, FFOrbitTable)> = primes
        .iter()
        .map(|&q| (q, enumerate_orbits(&b, &c, q, budget).unwrap()))
        .collect();
    // candidate targets: expected components, fixed ones first
    let mut targets: Vec<String> = c
        .expected
        .components
        .iter()
        .filter(|comp| !c.is_family(&comp.id))
        .map(|comp| comp.id.clone())
        .collect();
    targets.extend(
        c.expected
            .components
            .iter()
            .filter(|comp| c.is_family(&comp.id))
            .map(|comp| comp.id.clone()),
    );
    for s in &stragglers {
        let found = match search_certificate(&b, &c, &tables, s, &targets, 2) {
            Ok(Some(cert)) => Ok(Some(cert)),
            Ok(None) => {
                eprintln!("  {} : plain search failed, trying alpha curves", s);
                search_certificate_alpha(&b, &c, &tables, s, &targets)
            }
            Err(e) => Err(e),
        };
        match found {
            Ok(Some(cert)) => {
                let path = format!(
                    "data/certs/{}_{}_to_{}.json",
                    case_id.to_lowercase(),
                    s,
                    cert.target
                );
                std::fs::write(&path, serde_json::to_string_pretty(&cert).unwrap()).unwrap();
                eprintln!("  {} -> {}: written {}", s, cert.target, path);
            }
            Ok(None) => eprintln!("  {} : NO certificate found", s),
            Err(e) => eprintln!("  {} : search error {}", s, e),
        }
    }
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "C3" => run("C3", &[3, 5], 100_000_000),
        "D4" => run("D4", &[3, 5], 300_000_000),
        "A5" => run("A5", &[2, 3], 100_000_000),
        _ => eprintln!("usage: gen_certs <CASE>"),
    }
}
