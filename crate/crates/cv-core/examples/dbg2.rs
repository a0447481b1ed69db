use cv_core::chevalley::ChevalleyBasis;
use cv_core::fforacle::*;
use cv_core::rootdata::case;
use num::BigInt;

fn main() {
    for id in ["C3", "B3"] {
        let c = case(id, None).unwrap();
        let b = ChevalleyBasis::new(&c.root_system);
        println!("== {}", id);
        for q in [5u64, 7, 11] {
            let n = count_commuting_pairs(&b, q, 3_000_000_000).unwrap();
            // subtract q^13 and divide by q^12 to estimate the
            // number of 12-dimensional components
            let qb = BigInt::from(q);
            let nn: BigInt = n.to_string().parse().unwrap();
            let top = qb.pow(13);
            let rest = &nn - &top;
            let k_num = &rest * 1000 / qb.pow(12);
            println!(
                "  q={}: |C(u)| = {}  (count - q^13)/q^12 = {}.{:03}",
                q,
                nn,
                &k_num / 1000,
                (&k_num % 1000)
            );
        }
    }
}
