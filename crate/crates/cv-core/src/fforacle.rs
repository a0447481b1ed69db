//! Independent brute-force verification over finite fields: B(F_q)-orbit
//! enumeration on u(F_q) by breadth-first search, commuting-pair point
//! counts, and the flag-parabolic descriptor.
//!
//! Orbits are computed under a generating set for B(F_q): one torus
//! scaling per simple root (a primitive root of F_q acting through the
//! root-lattice character) and the root-subgroup maps exp(ad e_beta) at
//! s = 1. Conjugating the unipotent generators by the torus recovers
//! every x_beta(s), so the reachable sets are exactly the B(F_q)-orbits.
//! Everything here is evidence about characteristic zero, never proof.

use crate::chevalley::{ChevalleyBasis, ChevalleyError};
use crate::exactla::{Fp, Scalar};
use crate::rootdata::{CaseData, Coeff, RootTypeLabel};
use num::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error("state space q^{dim} = {states} exceeds the budget {budget}")]
    BudgetExceeded { dim: usize, states: u128, budget: u64 },
    #[error("characteristic {q} too small for type {label}")]
    CharacteristicTooSmall { q: u64, label: char },
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

pub const DEFAULT_BUDGET: u64 = 100_000_000;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn min_char(label: RootTypeLabel) -> u64 {
    match label {
        RootTypeLabel::A => 2,
        RootTypeLabel::B | RootTypeLabel::C | RootTypeLabel::D => 3,
        RootTypeLabel::G => 5,
    }
}

fn check_field(basis: &ChevalleyBasis, q: u64) -> Result<(), OracleError> {
    if !is_prime(q) {
        return Err(OracleError::NotPrime(q));
    }
    if q < min_char(basis.root_system.type_label) {
        return Err(OracleError::CharacteristicTooSmall {
            q,
            label: basis.root_system.type_label.as_char(),
        });
    }
    Ok(())
}

fn check_budget(dim: usize, q: u64, budget: u64) -> Result<u64, OracleError> {
    let states = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    let cap = budget.min(u32::MAX as u64) as u128;
    if states > cap {
        return Err(OracleError::BudgetExceeded { dim, states, budget });
    }
    Ok(states as u64)
}

/// Sparse matrix of a linear map on u over F_q.
struct GenMap {
    entries: Vec<(u32, u32, u64)>,
    dim: usize,
}

impl GenMap {
    fn apply(&self, input: &[u64], out: &mut [u64], q: u64) {
        out[..self.dim].fill(0);
        for &(r, c, v) in &self.entries {
            out[r as usize] = (out[r as usize] + v * input[c as usize]) % q;
        }
    }
}

/// The generating maps for B(F_q) acting on u(F_q).
fn generator_maps(basis: &ChevalleyBasis, q: u64) -> Result<Vec<GenMap>, OracleError> {
    let n_pos = basis.num_positive();
    let rank = basis.rank();
    let g = Fp::primitive_root(q);
    let mut gens = Vec::new();
    // torus: one scaling per simple root, acting on e_beta by the
    // coefficient of that simple root in beta (adjoint-torus character)
    for k in 0..rank {
        let mut entries = Vec::with_capacity(n_pos);
        for (i, root) in basis.root_system.positive_roots.iter().enumerate() {
            let scale = crate::exactla::pow_mod(g, root[k] as u64, q);
            entries.push((i as u32, i as u32, scale));
        }
        gens.push(GenMap { entries, dim: n_pos });
    }
    // root subgroups at s = 1
    let one = Fp::new(1, q);
    for beta in 0..n_pos {
        let mut entries = Vec::new();
        for j in 0..n_pos {
            let image = basis.exp_ad_rootvector(beta, &one, &basis.root_vector(j, &one))?;
            for (i, c) in image.nil.iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i as u32, j as u32, c.v));
                }
            }
        }
        gens.push(GenMap { entries, dim: n_pos });
    }
    Ok(gens)
}

fn encode(digits: &[u64], q: u64) -> u64 {
    let mut idx = 0u64;
    for &d in digits {
        idx = idx * q + d;
    }
    idx
}

fn decode(mut idx: u64, q: u64, n: usize, out: &mut [u64]) {
    for i in (0..n).rev() {
        out[i] = idx % q;
        idx /= q;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FFOrbit {
    /// Lexicographically least element of the orbit.
    pub rep: Vec<u8>,
    pub size: u64,
    /// Lexicographically least member with all coordinates in {0,1},
    /// when one exists; the candidate characteristic-zero representative.
    pub min01: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepMatch {
    pub rep: String,
    /// Parameter specialization for family representatives.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    pub orbit_index: usize,
    pub size: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FFOrbitTable {
    pub case: String,
    pub q: u64,
    pub orbits: Vec<FFOrbit>,
    /// Orbit sizes sum to q^(dim u).
    pub coverage: bool,
    pub matched: Vec<RepMatch>,
    #[serde(skip)]
    orbit_of: Vec<u32>,
}

impl FFOrbitTable {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_of_vector(&self, digits: &[u64], q: u64) -> usize {
        self.orbit_of[encode(digits, q) as usize] as usize
    }

    pub fn sizes_histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for o in &self.orbits {
            *h.entry(o.size).or_insert(0) += 1;
        }
        h
    }

    /// |B(F_q)| = (q-1)^rank * q^(dim u)
    pub fn borel_order(rank: usize, dim_u: usize, q: u64) -> BigUint {
        BigUint::from(q - 1).pow(rank as u32) * BigUint::from(q).pow(dim_u as u32)
    }
}

/// Partition u(F_q) into B(F_q)-orbits by flood fill in lexicographic
/// order, so each orbit's representative is its least element.
pub fn enumerate_orbits(
    basis: &ChevalleyBasis,
    case: &CaseData,
    q: u64,
    budget: u64,
) -> Result<FFOrbitTable, OracleError> {
    check_field(basis, q)?;
    let n = basis.num_positive();
    let states = check_budget(n, q, budget)?;
    let gens = generator_maps(basis, q)?;

    let mut orbit_of = vec![u32::MAX; states as usize];
    let mut orbits: Vec<FFOrbit> = Vec::new();
    let mut queue: Vec<u32> = Vec::new();
    let mut digits = vec![0u64; n];
    let mut image = vec![0u64; n];

    for start in 0..states {
        if orbit_of[start as usize] != u32::MAX {
            continue;
        }
        let orbit_idx = orbits.len() as u32;
        let mut size = 0u64;
        let mut min01: Option<u64> = None;
        orbit_of[start as usize] = orbit_idx;
        queue.push(start as u32);
        while let Some(state) = queue.pop() {
            let state = state as u64;
            size += 1;
            decode(state, q, n, &mut digits);
            if digits.iter().all(|&d| d <= 1) && min01.map(|m| state < m).unwrap_or(true) {
                min01 = Some(state);
            }
            for gen in &gens {
                gen.apply(&digits, &mut image, q);
                let next = encode(&image, q);
                if orbit_of[next as usize] == u32::MAX {
                    orbit_of[next as usize] = orbit_idx;
                    queue.push(next as u32);
                }
            }
        }
        decode(start, q, n, &mut digits);
        let rep: Vec<u8> = digits.iter().map(|&d| d as u8).collect();
        let min01 = min01.map(|m| {
            decode(m, q, n, &mut digits);
            digits.iter().map(|&d| d as u8).collect()
        });
        orbits.push(FFOrbit { rep, size, min01 });
    }

    let total: u128 = orbits.iter().map(|o| o.size as u128).sum();
    let coverage = total == states as u128;

    let mut matched = Vec::new();
    for rep in &case.reps {
        if rep.has_param() {
            for t in 1..q {
                let digits: Vec<u64> = rep
                    .coeffs
                    .iter()
                    .map(|c| match c {
                        Coeff::Digit(d) => *d as u64 % q,
                        Coeff::Param => t,
                    })
                    .collect();
                let idx = orbit_of[encode(&digits, q) as usize] as usize;
                matched.push(RepMatch {
                    rep: rep.id.clone(),
                    t: Some(t),
                    orbit_index: idx,
                    size: orbits[idx].size,
                });
            }
        } else {
            let digits: Vec<u64> = rep
                .coeffs
                .iter()
                .map(|c| match c {
                    Coeff::Digit(d) => *d as u64 % q,
                    Coeff::Param => unreachable!(),
                })
                .collect();
            let idx = orbit_of[encode(&digits, q) as usize] as usize;
            matched.push(RepMatch {
                rep: rep.id.clone(),
                t: None,
                orbit_index: idx,
                size: orbits[idx].size,
            });
        }
    }

    Ok(FFOrbitTable {
        case: case.id.clone(),
        q,
        orbits,
        coverage,
        matched,
        orbit_of,
    })
}

/// BFS from `start`, early exit on reaching `probe`.
pub fn orbit_membership(
    basis: &ChevalleyBasis,
    q: u64,
    start: &[u64],
    probe: &[u64],
    budget: u64,
) -> Result<bool, OracleError> {
    check_field(basis, q)?;
    let n = basis.num_positive();
    let states = check_budget(n, q, budget)?;
    let gens = generator_maps(basis, q)?;
    let start_idx = encode(start, q);
    let probe_idx = encode(probe, q);
    if start_idx == probe_idx {
        return Ok(true);
    }
    let mut visited = vec![false; states as usize];
    visited[start_idx as usize] = true;
    let mut queue = vec![start_idx];
    let mut digits = vec![0u64; n];
    let mut image = vec![0u64; n];
    while let Some(state) = queue.pop() {
        decode(state, q, n, &mut digits);
        for gen in &gens {
            gen.apply(&digits, &mut image, q);
            let next = encode(&image, q);
            if next == probe_idx {
                return Ok(true);
            }
            if !visited[next as usize] {
                visited[next as usize] = true;
                queue.push(next);
            }
        }
    }
    Ok(false)
}

/// |C(u)(F_q)| = sum over x in u(F_q) of q^(dim c_u(x)), with the
/// centralizer dimension computed as the F_q-nullity of ad(x) on u.
pub fn count_commuting_pairs(
    basis: &ChevalleyBasis,
    q: u64,
    budget: u64,
) -> Result<BigUint, OracleError> {
    check_field(basis, q)?;
    let n = basis.num_positive();
    let states = check_budget(n, q, budget)?;
    let rs = &basis.root_system;
    let mut bracket: Vec<Vec<Option<(usize, u64)>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some(k) = rs.sum_index(i, j) {
                let c = basis.n_constant(i, j).rem_euclid(q as i64) as u64;
                if c != 0 {
                    bracket[i][j] = Some((k, c));
                }
            }
        }
    }
    let mut digits = vec![0u64; n];
    let mut total = BigUint::from(0u32);
    let mut mat = vec![0u64; n * n];
    for state in 0..states {
        decode(state, q, n, &mut digits);
        // column j of ad(x): [e_j, x]
        mat.fill(0);
        for j in 0..n {
            for (i, &xi) in digits.iter().enumerate() {
                if xi != 0 {
                    if let Some((k, c)) = bracket[j][i] {
                        mat[k * n + j] = (mat[k * n + j] + c * xi) % q;
                    }
                }
            }
        }
        let r = rank_mod_p(&mut mat, n, n, q);
        total += BigUint::from(q).pow((n - r) as u32);
    }
    Ok(total)
}

fn rank_mod_p(m: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r * cols + col] % p != 0) else {
            continue;
        };
        for c in 0..cols {
            m.swap(rank * cols + c, pivot * cols + c);
        }
        let inv = Fp::new(m[rank * cols + col] as i64, p).inv().v;
        for c in col..cols {
            m[rank * cols + c] = m[rank * cols + c] % p * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r * cols + col] % p != 0 {
                let f = m[r * cols + col] % p;
                for c in col..cols {
                    let sub = f * m[rank * cols + c] % p;
                    m[r * cols + c] = (m[r * cols + c] + p * p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Flag parabolic
// ---------------------------------------------------------------------------

/// The parabolic of gl_{m+2} stabilizing a flag with block sizes
/// (1, m, 1). Its nilradical has dim 2m+1, with coordinates: the first
/// row into the middle block (b, m entries), the corner entry a, and the
/// middle block into the last column (c, m entries). The only nonzero
/// bracket lands on the corner: [x, y] = (b.c' - b'.c) E_corner.
#[derive(Debug, Clone)]
pub struct FlagParabolic {
    pub m: usize,
    pub dim_u: usize,
    pub dim_p: usize,
    pub block_sizes: (usize, usize, usize),
    /// Weights of the u coordinates under the three central characters of
    /// the Levi gl1 x gl_m x gl1, in coordinate order (b..., a, c...).
    pub center_weights: Vec<[i64; 3]>,
}

pub fn parabolic_flag_case(m: usize) -> FlagParabolic {
    assert!(m >= 2, "flag case needs m >= 2");
    let dim_u = 2 * m + 1;
    let dim_l = 1 + m * m + 1;
    let mut center_weights = Vec::with_capacity(dim_u);
    for _ in 0..m {
        center_weights.push([1, -1, 0]); // row 1 -> middle block
    }
    center_weights.push([1, 0, -1]); // corner
    for _ in 0..m {
        center_weights.push([0, 1, -1]); // middle block -> last column
    }
    FlagParabolic {
        m,
        dim_u,
        dim_p: dim_l + dim_u,
        block_sizes: (1, m, 1),
        center_weights,
    }
}

impl FlagParabolic {
    /// Sum over x in u(F_q) of q^(dim c_u(x)).
    pub fn count_commuting_pairs(&self, q: u64, budget: u64) -> Result<BigUint, OracleError> {
        if !is_prime(q) {
            return Err(OracleError::NotPrime(q));
        }
        let n = self.dim_u;
        let states = check_budget(n, q, budget)?;
        let m = self.m;
        let mut digits = vec![0u64; n];
        let mut total = BigUint::from(0u32);
        for state in 0..states {
            decode(state, q, n, &mut digits);
            let b = &digits[0..m];
            let c = &digits[m + 1..];
            // ad(x) has a single output coordinate, y -> b.c' - b'.c,
            // which is nonzero iff (b, c) != 0
            let rank = usize::from(b.iter().chain(c).any(|&v| v != 0));
            total += BigUint::from(q).pow((n - rank) as u32);
        }
        Ok(total)
    }
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    pub case: String,
    pub q: u64,
    pub orbit_count: usize,
    pub sizes_histogram: BTreeMap<u64, usize>,
    pub coverage: bool,
    pub matches: Vec<RepMatch>,
}

impl OracleReport {
    pub fn from_table(t: &FFOrbitTable) -> Self {
        OracleReport {
            case: t.case.clone(),
            q: t.q,
            orbit_count: t.orbit_count(),
            sizes_histogram: t.sizes_histogram(),
            coverage: t.coverage,
            matches: t.matched.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::case;

    fn setup(id: &str) -> (CaseData, ChevalleyBasis) {
        let c = case(id, None).unwrap();
        let b = ChevalleyBasis::new(&c.root_system);
        (c, b)
    }

    #[test]
    fn a2_orbits_q3_match_independent_brute_force() {
        // Independent oracle: act by explicit upper triangular 3x3
        // matrices over F_3 (all 108 of them) on strictly upper matrices
        // by conjugation, and partition the 27 states by union-find.
        let q = 3i64;
        let mul = |a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]| {
            let mut c = [[0i64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(q);
                }
            }
            c
        };
        let identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let uppers = || {
            let mut v = Vec::new();
            for d1 in 1..q {
                for d2 in 1..q {
                    for d3 in 1..q {
                        for u1 in 0..q {
                            for u2 in 0..q {
                                for u3 in 0..q {
                                    v.push([[d1, u1, u2], [0, d2, u3], [0, 0, d3]]);
                                }
                            }
                        }
                    }
                }
            }
            v
        };
        let group = uppers();
        let inv = |a: &[[i64; 3]; 3]| {
            group
                .iter()
                .find(|g| mul(a, g) == identity)
                .copied()
                .unwrap()
        };
        let enc = |m: &[[i64; 3]; 3]| (m[0][1] * 9 + m[1][2] * 3 + m[0][2]) as usize;
        let mut parent: Vec<usize> = (0..27).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for g in &group {
            let gi = inv(g);
            for x01 in 0..q {
                for x12 in 0..q {
                    for x02 in 0..q {
                        let x = [[0, x01, x02], [0, 0, x12], [0, 0, 0]];
                        let y = mul(&mul(g, &x), &gi);
                        let (ra, rb) = (find(&mut parent, enc(&x)), find(&mut parent, enc(&y)));
                        if ra != rb {
                            parent[ra] = rb;
                        }
                    }
                }
            }
        }
        let mut by_root: BTreeMap<usize, u64> = BTreeMap::new();
        for i in 0..27 {
            let r = find(&mut parent, i);
            *by_root.entry(r).or_insert(0) += 1;
        }
        let mut brute_sizes: Vec<u64> = by_root.values().copied().collect();
        brute_sizes.sort();

        let (c, b) = setup("A2");
        let table = enumerate_orbits(&b, &c, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(table.orbit_count(), 5);
        assert!(table.coverage);
        let mut sizes: Vec<u64> = table.orbits.iter().map(|o| o.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 6, 6, 12]);
        assert_eq!(sizes, brute_sizes);
    }

    #[test]
    fn a3_orbits_q3_and_q5() {
        let (c, b) = setup("A3");
        for q in [3u64, 5] {
            let table = enumerate_orbits(&b, &c, q, DEFAULT_BUDGET).unwrap();
            assert_eq!(table.orbit_count(), 16, "q = {}", q);
            assert!(table.coverage);
            // every paper rep in a distinct orbit
            let mut seen = std::collections::BTreeSet::new();
            for m in &table.matched {
                assert!(seen.insert(m.orbit_index), "collision at {}", m.rep);
            }
            // orbit sizes divide |B|
            let order = FFOrbitTable::borel_order(3, 6, q);
            for o in &table.orbits {
                assert!((order.clone() % BigUint::from(o.size)) == BigUint::from(0u32));
            }
        }
    }

    #[test]
    fn orbit_size_q_valuation_matches_centralizers() {
        // v_q(|orbit|) = dim u - dim c_u(e): the unipotent part of the
        // stabilizer has exactly q^(dim c_u) points.
        use crate::centralizers::profile;
        for (id, q) in [("A2", 3u64), ("A3", 3), ("B2", 5)] {
            let (c, b) = setup(id);
            let table = enumerate_orbits(&b, &c, q, DEFAULT_BUDGET).unwrap();
            let n = b.num_positive();
            for m in &table.matched {
                let rep = c.rep(&m.rep).unwrap();
                if rep.has_param() {
                    continue;
                }
                let e = b.rep_element_rat(rep).unwrap();
                let p = profile(&b, &e).unwrap();
                let mut v = 0;
                let mut s = m.size;
                while s % q == 0 {
                    v += 1;
                    s /= q;
                }
                assert_eq!(v, n - p.dim_cu, "case {} rep {} q {}", id, m.rep, q);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let (_, b) = setup("A2");
        // start == probe
        let v = vec![1u64, 0, 0];
        assert!(orbit_membership(&b, 3, &v, &v, DEFAULT_BUDGET).unwrap());
        // e_b3 and e_b1 lie in different orbits (sizes 2 vs 6)
        let e3 = vec![0u64, 0, 1];
        let e1 = vec![1u64, 0, 0];
        assert!(!orbit_membership(&b, 3, &e3, &e1, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn count_commuting_pairs_a2() {
        // Independent oracle: double loop over all pairs of strictly upper
        // 3x3 matrices over F_q, counting commuting pairs directly.
        for q in [2u64, 3] {
            let qi = q as i64;
            let mut brute = 0u64;
            for a in 0..qi.pow(3) {
                for b in 0..qi.pow(3) {
                    let d = |x: i64, k: u32| x / qi.pow(k) % qi;
                    let (a01, a12) = (d(a, 0), d(a, 2));
                    let (b01, b12) = (d(b, 0), d(b, 2));
                    // [x,y]_{02} = x01 y12 - y01 x12
                    if (a01 * b12 - b01 * a12).rem_euclid(qi) == 0 {
                        brute += 1;
                    }
                }
            }
            let (_, basis) = setup("A2");
            let counted = count_commuting_pairs(&basis, q, DEFAULT_BUDGET).unwrap();
            assert_eq!(counted, BigUint::from(brute), "q = {}", q);
            let closed = q.pow(5) + q.pow(4) - q.pow(3);
            assert_eq!(counted, BigUint::from(closed));
        }
        // frozen values used by the degree-fit tests
        let (_, basis) = setup("A2");
        assert_eq!(
            count_commuting_pairs(&basis, 2, DEFAULT_BUDGET).unwrap(),
            BigUint::from(40u32)
        );
        assert_eq!(
            count_commuting_pairs(&basis, 3, DEFAULT_BUDGET).unwrap(),
            BigUint::from(297u32)
        );
        assert_eq!(
            count_commuting_pairs(&basis, 5, DEFAULT_BUDGET).unwrap(),
            BigUint::from(3625u32)
        );
    }

    #[test]
    fn count_closed_form_regression() {
        let (_, basis) = setup("A2");
        for q in [2u64, 3, 5, 7] {
            let counted = count_commuting_pairs(&basis, q, DEFAULT_BUDGET).unwrap();
            assert_eq!(counted, BigUint::from(q.pow(5) + q.pow(4) - q.pow(3)));
        }
    }

    #[test]
    fn flag_parabolic_shape() {
        let f2 = parabolic_flag_case(2);
        assert_eq!(f2.dim_u, 5);
        assert_eq!(f2.dim_p, 11);
        assert_eq!(f2.block_sizes, (1, 2, 1));
        assert_eq!(f2.center_weights.len(), 5);
        let f3 = parabolic_flag_case(3);
        assert_eq!(f3.dim_u, 7);
    }

    #[test]
    fn flag_parabolic_count_matches_double_loop() {
        // Independent oracle at q = 2, 3: brute double loop over pairs.
        let f = parabolic_flag_case(2);
        for q in [2u64, 3] {
            let qi = q as i64;
            let n = 5u32;
            let mut brute = 0u64;
            for x in 0..qi.pow(n) {
                for y in 0..qi.pow(n) {
                    let d = |v: i64, k: u32| v / qi.pow(k) % qi;
                    // coords (b1, b2, a, c1, c2), most significant first
                    let (xb1, xb2, xc1, xc2) = (d(x, 4), d(x, 3), d(x, 1), d(x, 0));
                    let (yb1, yb2, yc1, yc2) = (d(y, 4), d(y, 3), d(y, 1), d(y, 0));
                    let commutator = xb1 * yc1 + xb2 * yc2 - (yb1 * xc1 + yb2 * xc2);
                    if commutator.rem_euclid(qi) == 0 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(
                f.count_commuting_pairs(q, DEFAULT_BUDGET).unwrap(),
                BigUint::from(brute),
                "q = {}",
                q
            );
        }
    }

    #[test]
    fn flag_parabolic_degree_fit_is_nine() {
        let f = parabolic_flag_case(2);
        let samples: Vec<(u64, BigUint)> = [2u64, 3, 5, 7]
            .iter()
            .map(|&q| (q, f.count_commuting_pairs(q, DEFAULT_BUDGET).unwrap()))
            .collect();
        let fit = crate::exactla::degree_fit(&samples).unwrap();
        assert_eq!(fit.degree, 9);
        assert!(fit.consistent);
    }

    #[test]
    fn budget_and_characteristic_errors() {
        let (c, b) = setup("A3");
        assert!(matches!(
            enumerate_orbits(&b, &c, 3, 10),
            Err(OracleError::BudgetExceeded { .. })
        ));
        let (c2, b2) = setup("B2");
        assert!(matches!(
            enumerate_orbits(&b2, &c2, 2, DEFAULT_BUDGET),
            Err(OracleError::CharacteristicTooSmall { .. })
        ));
        let (cg, bg) = setup("G2");
        assert!(matches!(
            enumerate_orbits(&bg, &cg, 3, DEFAULT_BUDGET),
            Err(OracleError::CharacteristicTooSmall { .. })
        ));
        assert!(matches!(
            enumerate_orbits(&b, &c, 4, DEFAULT_BUDGET),
            Err(OracleError::NotPrime(4))
        ));
    }

    #[test]
    fn b2_orbits_q5() {
        // Over F_q the orbit of e2 = 1001 splits into two square classes
        // (its stabilizer has component group of order 2), so the seven
        // characteristic-zero orbits become eight. Coverage and rep
        // distinctness still hold.
        let (c, b) = setup("B2");
        let table = enumerate_orbits(&b, &c, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(table.orbit_count(), 8);
        assert!(table.coverage);
        let mut seen = std::collections::BTreeSet::new();
        for m in &table.matched {
            assert!(seen.insert(m.orbit_index));
        }
        // the split pair: both contain a vector supported on {b1, b4}
        let split: Vec<&FFOrbit> = table
            .orbits
            .iter()
            .filter(|o| o.size == 40)
            .collect();
        assert_eq!(split.len(), 2);
    }

    #[test]
    fn oracle_report_round_trips() {
        let (c, b) = setup("A2");
        let table = enumerate_orbits(&b, &c, 3, DEFAULT_BUDGET).unwrap();
        let report = OracleReport::from_table(&table);
        let json = serde_json::to_string(&report).unwrap();
        let back: OracleReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report.orbit_count, back.orbit_count);
        assert_eq!(report.sizes_histogram, back.sizes_histogram);
    }
}
