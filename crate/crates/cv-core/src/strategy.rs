//! The case classification: admissible grading elements h, the linkedness
//! (dense-orbit tangent space) test, elimination of non-components, and
//! the per-case report.
//!
//! Step 1 marks distinguished representatives as components. Step 2
//! searches nonnegative integer weight vectors h with every support root
//! of e in degree one; a non-linked admissible h rules C(e) out. Whatever
//! survives both steps is left for an explicit degeneration certificate.
//! One-parameter families run through the same steps over Q[t]; a
//! generically distinguished family contributes a component of dimension
//! dim b + 1.

use crate::centralizers::{ad_matrix, profile, BasisVector, CentralizerError};
use crate::chevalley::{ChevalleyBasis, ChevalleyError, LieElement};
use crate::exactla::{invariant_factors, rank, ExactMatrix, QPoly, Scalar};
use crate::rootdata::{CaseData, RootSystem};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Centralizer(#[from] CentralizerError),
    #[error("element is not in degree one of the grading: [h,e] != e")]
    NotInDegreeOne,
    #[error("grading weights must be nonnegative")]
    NegativeWeights,
    #[error("classification has unresolved certificate-needed entries: {0:?}")]
    Unresolved(Vec<String>),
    #[error("representative {0} not found in report")]
    UnknownRep(String),
}

/// Integer weights on the simple roots; h is the torus element with
/// alpha_i(h) = weights[i].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingElement {
    pub weights: Vec<i64>,
}

impl GradingElement {
    pub fn new(weights: Vec<i64>) -> Self {
        GradingElement { weights }
    }

    pub fn root_weight(&self, root: &[i64]) -> i64 {
        root.iter().zip(&self.weights).map(|(m, c)| m * c).sum()
    }
}

/// Basis of b(j; h): for j = 0 all of t plus the weight-zero root vectors,
/// for j >= 1 the root vectors of weight j.
pub fn grading_subspace(basis: &ChevalleyBasis, h: &GradingElement, j: i64) -> Vec<BasisVector> {
    let rs = &basis.root_system;
    let mut out = Vec::new();
    if j == 0 {
        for k in 0..rs.rank {
            out.push(BasisVector::Coroot(k));
        }
    }
    if j < 0 {
        return out;
    }
    for (i, root) in rs.positive_roots.iter().enumerate() {
        if h.root_weight(root) == j {
            out.push(BasisVector::Root(i));
        }
    }
    out
}

/// h is admissible when all root weights are nonnegative (automatic for
/// nonnegative weights) and some positive root has weight exactly one.
pub fn is_admissible(rs: &RootSystem, h: &GradingElement) -> bool {
    h.weights.iter().all(|&c| c >= 0)
        && rs.positive_roots.iter().any(|r| h.root_weight(r) == 1)
}

/// Tangent-space test for e lying in the dense C_B(h)-orbit of b(1;h):
/// linked iff [c_b(h), e] fills b(1;h). Requires [h,e] = e, i.e. every
/// support root of e has weight one.
pub fn is_linked<S: Scalar>(
    basis: &ChevalleyBasis,
    e: &LieElement<S>,
    h: &GradingElement,
) -> Result<bool, StrategyError> {
    is_linked_in_degree(basis, e, h, 1)
}

/// Same tangent-space test inside the degree-j piece b(j;h). The cone
/// argument behind the elimination works verbatim for any j >= 1: the
/// associated cone of {(x,y) : [x,y] = jy} is {(x,y) : [x,y] = 0}, so an
/// e in b(j;h) outside the dense C_B(h)-orbit of b(j;h) gives no
/// irreducible component.
pub fn is_linked_in_degree<S: Scalar>(
    basis: &ChevalleyBasis,
    e: &LieElement<S>,
    h: &GradingElement,
    degree: i64,
) -> Result<bool, StrategyError> {
    if h.weights.iter().any(|&c| c < 0) {
        return Err(StrategyError::NegativeWeights);
    }
    let rs = &basis.root_system;
    for i in e.support() {
        if h.root_weight(&rs.positive_roots[i]) != degree {
            return Err(StrategyError::NotInDegreeOne);
        }
    }
    let domain = grading_subspace(basis, h, 0);
    let codomain = grading_subspace(basis, h, degree);
    if codomain.is_empty() {
        return Ok(true);
    }
    let m = ad_matrix(basis, e, &domain, &codomain)?;
    Ok(rank(&m) == codomain.len())
}

/// The evidence behind an eliminated verdict: either a grading element
/// whose degree piece contains e outside the dense orbit, or a
/// centralizer direction escaping the orbit-closure support envelope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EliminationWitness {
    Grading { h: GradingElement, degree: i64 },
    /// c_u(e) contains a vector supported on this root, but the closure
    /// of B.e lies in the coordinate subspace spanned by supp(e) and the
    /// iterated brackets [u,[u,...[u,e]]]; by the projection lemma C(e)
    /// then cannot be an irreducible component.
    SupportEscape { root_index: usize },
    /// A member of c_u(e) has a B-orbit of strictly larger dimension
    /// than B.e, so c_u(e) cannot lie in the closure of B.e and the
    /// projection lemma again rules C(e) out. The witness records the
    /// kernel-basis coefficients of the member and both dimensions.
    CentralizerDimensionEscape {
        coefficients: Vec<i64>,
        dim_orbit_e: usize,
        dim_orbit_y: usize,
    },
}

/// Search the weight box {0..bound}^rank, by degree and then
/// lexicographically, for a nonnegative h whose grading puts every
/// support root of e in degree j with e outside the dense
/// C_B(h)-orbit of b(j;h). The zero element is eliminated by the first
/// admissible h.
pub fn eliminate<S: Scalar>(
    basis: &ChevalleyBasis,
    e: &LieElement<S>,
    bound: i64,
) -> Result<Option<EliminationWitness>, StrategyError> {
    let rs = &basis.root_system;
    let n = rs.rank;
    let support = e.support();
    let max_degree = if support.is_empty() {
        1
    } else {
        crate::rootdata::highest_root_height(rs)
    };
    for degree in 1..=max_degree {
        let mut weights = vec![0i64; n];
        loop {
            let h = GradingElement::new(weights.clone());
            let in_degree = support
                .iter()
                .all(|&i| h.root_weight(&rs.positive_roots[i]) == degree);
            let usable = if support.is_empty() {
                is_admissible(rs, &h)
            } else {
                in_degree && !grading_subspace(basis, &h, degree).is_empty()
            };
            if usable && !is_linked_in_degree(basis, e, &h, degree)? {
                return Ok(Some(EliminationWitness::Grading { h, degree }));
            }
            // odometer increment
            let mut k = n;
            let exhausted = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                if weights[k] < bound {
                    weights[k] += 1;
                    break false;
                }
                weights[k] = 0;
            };
            if exhausted {
                break;
            }
        }
    }
    Ok(None)
}

/// Necessary-condition test from the projection lemma: if C(e) is a
/// component then c_u(e) lies in the closure of B.e, which in turn lies
/// in the coordinate subspace spanned by supp(e) and everything reachable
/// from it by adding positive roots. Returns a root index carried by
/// c_u(e) outside that envelope, when one exists.
pub fn support_escape(
    basis: &ChevalleyBasis,
    e: &LieElement<crate::exactla::Rat>,
) -> Result<Option<usize>, StrategyError> {
    let rs = &basis.root_system;
    let n = rs.num_positive();
    let support = e.support();
    if support.is_empty() {
        return Ok(None);
    }
    // reachability: supp(e) plus everything obtained by adding positive roots
    let mut env = vec![false; n];
    let mut queue: Vec<usize> = support.clone();
    for &i in &queue {
        env[i] = true;
    }
    while let Some(i) = queue.pop() {
        for j in 0..n {
            if let Some(k) = rs.sum_index(j, i) {
                if !env[k] {
                    env[k] = true;
                    queue.push(k);
                }
            }
        }
    }
    // weight monotonicity: for every nonnegative weight vector, each
    // support root of a point of closure(B.e) weighs at least the minimum
    // over supp(e); prune the envelope on a small grid of weight vectors
    let rank_n = rs.rank;
    let mut chi = vec![0i64; rank_n];
    loop {
        // advance odometer over {0..3}^rank, skipping the zero vector
        let mut k = rank_n;
        let exhausted = loop {
            if k == 0 {
                break true;
            }
            k -= 1;
            if chi[k] < 3 {
                chi[k] += 1;
                break false;
            }
            chi[k] = 0;
        };
        if exhausted {
            break;
        }
        let h = GradingElement::new(chi.clone());
        let min_e = support
            .iter()
            .map(|&i| h.root_weight(&rs.positive_roots[i]))
            .min()
            .unwrap();
        for (idx, flag) in env.iter_mut().enumerate() {
            if *flag && h.root_weight(&rs.positive_roots[idx]) < min_e {
                *flag = false;
            }
        }
    }
    let u = crate::centralizers::u_basis(basis);
    let m = ad_matrix(basis, e, &u, &u)?;
    let kernel = crate::exactla::nullspace_basis(&m, &crate::exactla::rat(0));
    for v in kernel {
        for (idx, c) in v.iter().enumerate() {
            if !Scalar::is_zero(c) && !env[idx] {
                return Ok(Some(idx));
            }
        }
    }
    Ok(None)
}

/// Companion necessary-condition test: components satisfy
/// c_u(e) in closure(B.e), so every member of the centralizer must have a
/// B-orbit of dimension at most dim B.e. Probes a few deterministic
/// combinations of the kernel basis; a sample can only under-estimate the
/// generic orbit dimension, so a firing witness is always sound.
pub fn centralizer_dimension_escape(
    basis: &ChevalleyBasis,
    e: &LieElement<crate::exactla::Rat>,
) -> Result<Option<EliminationWitness>, StrategyError> {
    use crate::exactla::rat;
    let u = crate::centralizers::u_basis(basis);
    let m = ad_matrix(basis, e, &u, &u)?;
    let kernel = crate::exactla::nullspace_basis(&m, &rat(0));
    if kernel.is_empty() {
        return Ok(None);
    }
    let dim_orbit_e = profile(basis, e)?.dim_orbit;
    let schemes: [&dyn Fn(usize) -> i64; 3] = [
        &|i| i as i64 + 1,
        &|i| (i as i64 + 2) * (i as i64 + 2),
        &|i| [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47][i % 15],
    ];
    for scheme in schemes {
        let coeffs: Vec<i64> = (0..kernel.len()).map(scheme).collect();
        let mut y = basis.zero_element(&rat(1));
        for (i, kv) in kernel.iter().enumerate() {
            for (j, kc) in kv.iter().enumerate() {
                y.nil[j] = y.nil[j].add(&kc.mul(&rat(coeffs[i])));
            }
        }
        let dim_orbit_y = profile(basis, &y)?.dim_orbit;
        if dim_orbit_y > dim_orbit_e {
            return Ok(Some(EliminationWitness::CentralizerDimensionEscape {
                coefficients: coeffs,
                dim_orbit_e,
                dim_orbit_y,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum VerdictStatus {
    Component {
        dim: usize,
        family: bool,
        /// Rational parameter values (other than 0) where the generic
        /// centralizer ranks drop; listed, not classified.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        family_drops: Vec<String>,
    },
    Eliminated {
        witness: EliminationWitness,
    },
    CertificateNeeded,
    /// Filled in by certificate application: C(e) lies inside C(target).
    Absorbed {
        target: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub vector: String,
    #[serde(flatten)]
    pub status: VerdictStatus,
    pub dim_cb: usize,
    pub dim_cu: usize,
    pub dim_component: usize,
    pub distinguished: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duplicate_of: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub case: String,
    pub dim_b: usize,
    pub bound: i64,
    pub verdicts: Vec<Verdict>,
    /// Minimal defect dim c_b(e) - dim c_u(e) over the table.
    pub d: usize,
    /// dim C(u) = the largest component dimension.
    pub dim_commuting_variety: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    pub fn components(&self) -> Vec<&Verdict> {
        self.verdicts
            .iter()
            .filter(|v| matches!(v.status, VerdictStatus::Component { .. }))
            .collect()
    }

    pub fn certificate_needed(&self) -> Vec<&Verdict> {
        self.verdicts
            .iter()
            .filter(|v| matches!(v.status, VerdictStatus::CertificateNeeded))
            .collect()
    }

    pub fn eliminated(&self) -> Vec<&Verdict> {
        self.verdicts
            .iter()
            .filter(|v| matches!(v.status, VerdictStatus::Eliminated { .. }))
            .collect()
    }

    pub fn absorbed(&self) -> Vec<&Verdict> {
        self.verdicts
            .iter()
            .filter(|v| matches!(v.status, VerdictStatus::Absorbed { .. }))
            .collect()
    }

    pub fn verdict_mut(&mut self, id: &str) -> Option<&mut Verdict> {
        self.verdicts.iter_mut().find(|v| v.id == id)
    }

    /// The paper-style exception set: everything not eliminated in step 2.
    pub fn exceptions(&self) -> BTreeSet<String> {
        self.verdicts
            .iter()
            .filter(|v| !matches!(v.status, VerdictStatus::Eliminated { .. }))
            .map(|v| v.id.clone())
            .collect()
    }
}

/// Run steps 1 and 2 of the classification for every representative of the
/// case. Families are handled generically over Q[t]. Duplicate coefficient
/// vectors are classified once and share their verdict.
pub fn classify(
    basis: &ChevalleyBasis,
    case: &CaseData,
    bound: i64,
) -> Result<ClassificationReport, StrategyError> {
    let dim_b = basis.root_system.dim_borel();
    let mut verdicts: Vec<Verdict> = Vec::with_capacity(case.reps.len());
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut min_defect = usize::MAX;
    for rep in &case.reps {
        if let Some(&first) = seen.get(&rep.raw) {
            let mut v: Verdict = verdicts[first].clone();
            v.id = rep.id.clone();
            v.duplicate_of = Some(verdicts[first].id.clone());
            verdicts.push(v);
            continue;
        }
        let (prof, status) = if case.is_family(&rep.id) {
            let e = basis.rep_element_poly(rep);
            let prof = profile(basis, &e)?;
            let status = if prof.distinguished {
                VerdictStatus::Component {
                    dim: dim_b + 1,
                    family: true,
                    family_drops: family_rank_drops(basis, &e)?,
                }
            } else if let Some(w) = eliminate(basis, &e, bound)? {
                VerdictStatus::Eliminated { witness: w }
            } else {
                VerdictStatus::CertificateNeeded
            };
            (prof, status)
        } else {
            let e = basis
                .rep_element_rat(rep)
                .expect("non-family representative has digits only");
            let prof = profile(basis, &e)?;
            // The elimination tests run before the distinguished test: a
            // distinguished single orbit can still degenerate into a
            // family component (this never fires in the finite cases,
            // where all components have the maximal dimension).
            let status = if let Some(w) = eliminate(basis, &e, bound)? {
                VerdictStatus::Eliminated { witness: w }
            } else if let Some(idx) = support_escape(basis, &e)? {
                VerdictStatus::Eliminated {
                    witness: EliminationWitness::SupportEscape { root_index: idx },
                }
            } else if let Some(w) = centralizer_dimension_escape(basis, &e)? {
                VerdictStatus::Eliminated { witness: w }
            } else if prof.distinguished {
                VerdictStatus::Component {
                    dim: dim_b,
                    family: false,
                    family_drops: vec![],
                }
            } else {
                VerdictStatus::CertificateNeeded
            };
            (prof, status)
        };
        min_defect = min_defect.min(prof.dim_cb - prof.dim_cu);
        seen.insert(rep.raw.clone(), verdicts.len());
        verdicts.push(Verdict {
            id: rep.id.clone(),
            vector: rep.raw.clone(),
            status,
            dim_cb: prof.dim_cb,
            dim_cu: prof.dim_cu,
            dim_component: prof.dim_component,
            distinguished: prof.distinguished,
            duplicate_of: None,
        });
    }
    let dim_cv = verdicts
        .iter()
        .filter_map(|v| match v.status {
            VerdictStatus::Component { dim, .. } => Some(dim),
            _ => None,
        })
        .max()
        .unwrap_or(dim_b);
    Ok(ClassificationReport {
        case: case.id.clone(),
        dim_b,
        bound,
        verdicts,
        d: if min_defect == usize::MAX { 0 } else { min_defect },
        dim_commuting_variety: dim_cv,
        warnings: case.warnings.clone(),
    })
}

/// Parameter values (other than 0, which is outside the family domain)
/// where the centralizer ranks of a family member drop below the generic
/// value, read off the invariant factors of the ad matrices over Q[t].
fn family_rank_drops(
    basis: &ChevalleyBasis,
    e: &LieElement<QPoly>,
) -> Result<Vec<String>, StrategyError> {
    let u = crate::centralizers::u_basis(basis);
    let b = crate::centralizers::full_b_basis(basis);
    let mut drops: BTreeSet<String> = BTreeSet::new();
    for domain in [&b, &u] {
        let m: ExactMatrix<QPoly> = ad_matrix(basis, e, domain, &u)?;
        for factor in invariant_factors(&m) {
            for root in factor.rational_roots() {
                if !Zero::is_zero(&root) {
                    drops.insert(root.to_string());
                }
            }
        }
    }
    Ok(drops.into_iter().collect())
}

/// True iff all component dimensions agree. Errors while any
/// certificate-needed entry is unresolved.
pub fn equidimensionality_check(report: &ClassificationReport) -> Result<bool, StrategyError> {
    let unresolved: Vec<String> = report
        .certificate_needed()
        .iter()
        .map(|v| v.id.clone())
        .collect();
    if !unresolved.is_empty() {
        return Err(StrategyError::Unresolved(unresolved));
    }
    let dims: BTreeSet<usize> = report
        .verdicts
        .iter()
        .filter_map(|v| match v.status {
            VerdictStatus::Component { dim, .. } => Some(dim),
            _ => None,
        })
        .collect();
    Ok(dims.len() <= 1)
}

/// Differences between a finished report and the case file's expected
/// block; empty means the reproduction succeeded.
pub fn diff_with_expected(report: &ClassificationReport, case: &CaseData) -> Vec<String> {
    let mut diffs = Vec::new();
    let got: BTreeMap<String, usize> = report
        .verdicts
        .iter()
        .filter_map(|v| match v.status {
            VerdictStatus::Component { dim, .. } => Some((v.id.clone(), dim)),
            _ => None,
        })
        .collect();
    let want: BTreeMap<String, usize> = case
        .expected
        .components
        .iter()
        .map(|c| (c.id.clone(), c.dim))
        .collect();
    if got != want {
        diffs.push(format!("components differ: got {:?}, expected {:?}", got, want));
    }
    let got_exc = report.exceptions();
    let want_exc: BTreeSet<String> = case.expected.exceptions.iter().cloned().collect();
    if got_exc != want_exc {
        diffs.push(format!(
            "exception set differs: got {:?}, expected {:?}",
            got_exc, want_exc
        ));
    }
    let unresolved = report.certificate_needed();
    if !unresolved.is_empty() {
        diffs.push(format!(
            "unresolved certificate-needed entries: {:?}",
            unresolved.iter().map(|v| &v.id).collect::<Vec<_>>()
        ));
    } else if let Ok(eq) = equidimensionality_check(report) {
        let want_eq = {
            let dims: BTreeSet<usize> = want.values().copied().collect();
            dims.len() <= 1
        };
        if eq != want_eq {
            diffs.push(format!("equidimensionality: got {}, expected {}", eq, want_eq));
        }
    }
    diffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;
    use crate::rootdata::case;

    fn setup(id: &str) -> (CaseData, ChevalleyBasis) {
        let c = case(id, None).unwrap();
        let b = ChevalleyBasis::new(&c.root_system);
        (c, b)
    }

    #[test]
    fn grading_subspaces_a2() {
        let (_, b) = setup("A2");
        let h = GradingElement::new(vec![1, 1]);
        let b1 = grading_subspace(&b, &h, 1);
        assert_eq!(b1, vec![BasisVector::Root(0), BasisVector::Root(1)]);
        let b2 = grading_subspace(&b, &h, 2);
        assert_eq!(b2, vec![BasisVector::Root(2)]);
        let h0 = GradingElement::new(vec![0, 0]);
        assert_eq!(grading_subspace(&b, &h0, 0).len(), 5);
        assert!(grading_subspace(&b, &h0, 1).is_empty());
    }

    #[test]
    fn grading_weights_g2() {
        let (_, b) = setup("G2");
        let h = GradingElement::new(vec![1, 1]);
        let weights: Vec<i64> = b
            .root_system
            .positive_roots
            .iter()
            .map(|r| h.root_weight(r))
            .collect();
        assert_eq!(weights, vec![1, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn admissibility_a2() {
        let (_, b) = setup("A2");
        let rs = &b.root_system;
        assert!(is_admissible(rs, &GradingElement::new(vec![1, 1])));
        assert!(!is_admissible(rs, &GradingElement::new(vec![2, 2])));
        assert!(!is_admissible(rs, &GradingElement::new(vec![0, 0])));
    }

    #[test]
    fn linkedness_a2_examples() {
        let (_, b) = setup("A2");
        let one = rat(1);
        let e_b1 = b.root_vector(0, &one);
        // h = (1,0): [c_b(h), e] spans b(1;h) -> linked
        assert!(is_linked(&b, &e_b1, &GradingElement::new(vec![1, 0])).unwrap());
        // h = (1,1): only the torus acts, image is a line in a plane
        assert!(!is_linked(&b, &e_b1, &GradingElement::new(vec![1, 1])).unwrap());
        // e_b3 with h = (1,0): b2+b3 is not a root, image too small
        let e_b3 = b.root_vector(2, &one);
        assert!(!is_linked(&b, &e_b3, &GradingElement::new(vec![1, 0])).unwrap());
        // precondition violated
        assert!(matches!(
            is_linked(&b, &e_b3, &GradingElement::new(vec![1, 1])),
            Err(StrategyError::NotInDegreeOne)
        ));
    }

    #[test]
    fn eliminate_a2_e2() {
        let (c, b) = setup("A2");
        let e2 = b.rep_element_rat(c.rep("e2").unwrap()).unwrap();
        match eliminate(&b, &e2, 4).unwrap().unwrap() {
            EliminationWitness::Grading { h, degree } => {
                assert_eq!(h.weights, vec![1, 1]);
                assert_eq!(degree, 1);
            }
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn eliminate_a3_e8_finds_nothing() {
        let (c, b) = setup("A3");
        let e8 = b.rep_element_rat(c.rep("e8").unwrap()).unwrap();
        assert!(eliminate(&b, &e8, 4).unwrap().is_none());
        assert!(eliminate(&b, &e8, 6).unwrap().is_none());
    }

    #[test]
    fn eliminate_zero_uses_first_admissible() {
        let (c, b) = setup("A2");
        let z = b.rep_element_rat(c.rep("e5").unwrap()).unwrap();
        match eliminate(&b, &z, 4).unwrap().unwrap() {
            EliminationWitness::Grading { h, .. } => assert_eq!(h.weights, vec![0, 1]),
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn distinguished_reps_never_eliminated() {
        for id in ["A1", "A2", "A3", "A4", "B2"] {
            let (c, b) = setup(id);
            for rep in &c.reps {
                let e = b.rep_element_rat(rep).unwrap();
                let prof = profile(&b, &e).unwrap();
                if prof.distinguished {
                    assert!(
                        eliminate(&b, &e, 4).unwrap().is_none(),
                        "distinguished {} in {} must not be eliminated",
                        rep.id,
                        id
                    );
                }
            }
        }
    }

    #[test]
    fn classify_a1() {
        let (c, b) = setup("A1");
        let report = classify(&b, &c, 4).unwrap();
        let comps = report.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].id, "e1");
        assert!(matches!(
            comps[0].status,
            VerdictStatus::Component { dim: 2, .. }
        ));
        assert_eq!(report.eliminated().len(), 1);
        assert!(equidimensionality_check(&report).unwrap());
        assert_eq!(report.d, 0);
        assert_eq!(report.dim_commuting_variety, 2);
    }

    #[test]
    fn classify_a4_matches_paper() {
        let (c, b) = setup("A4");
        let report = classify(&b, &c, 4).unwrap();
        let comp_ids: Vec<&str> = report.components().iter().map(|v| v.id.as_str()).collect();
        assert_eq!(comp_ids, vec!["e1", "e3", "e7", "e9", "e25"]);
        for v in report.components() {
            assert!(matches!(v.status, VerdictStatus::Component { dim: 14, .. }));
        }
        let cert_ids: Vec<&str> = report
            .certificate_needed()
            .iter()
            .map(|v| v.id.as_str())
            .collect();
        assert_eq!(cert_ids, vec!["e14", "e23"]);
        // everything else eliminated, including the duplicate pair
        assert_eq!(report.eliminated().len(), 61 - 5 - 2);
        let e5 = report.verdicts.iter().find(|v| v.id == "e5").unwrap();
        assert_eq!(e5.duplicate_of.as_deref(), Some("e4"));
        assert!(matches!(e5.status, VerdictStatus::Eliminated { .. }));
        // unresolved entries block the equidimensionality check
        assert!(matches!(
            equidimensionality_check(&report),
            Err(StrategyError::Unresolved(_))
        ));
    }

    #[test]
    fn exception_sets_for_finite_cases() {
        let expect: &[(&str, &[&str])] = &[
            ("A2", &["e1"]),
            ("A3", &["e1", "e3", "e8"]),
            ("A4", &["e1", "e3", "e7", "e9", "e14", "e23", "e25"]),
            ("B2", &["e1", "e2"]),
        ];
        for (id, want) in expect {
            let (c, b) = setup(id);
            let report = classify(&b, &c, 4).unwrap();
            let got = report.exceptions();
            let want: BTreeSet<String> = want.iter().map(|s| s.to_string()).collect();
            assert_eq!(got, want, "case {}", id);
        }
    }

    #[test]
    fn classify_g2_family_component() {
        let (c, b) = setup("G2");
        let report = classify(&b, &c, 4).unwrap();
        let e4 = report.verdicts.iter().find(|v| v.id == "e4").unwrap();
        assert!(matches!(
            e4.status,
            VerdictStatus::Component { dim: 9, family: true, .. }
        ));
        for id in ["e1", "e2"] {
            let v = report.verdicts.iter().find(|v| v.id == id).unwrap();
            assert!(matches!(
                v.status,
                VerdictStatus::Component { dim: 8, family: false, .. }
            ));
        }
        assert_eq!(report.dim_commuting_variety, 9);
    }

    #[test]
    fn bound_monotonicity() {
        for id in crate::rootdata::SHIPPED_CASE_IDS {
            let (c, b) = setup(id);
            let r2 = classify(&b, &c, 2).unwrap();
            let r4 = classify(&b, &c, 4).unwrap();
            for (v2, v4) in r2.verdicts.iter().zip(&r4.verdicts) {
                let elim2 = matches!(v2.status, VerdictStatus::Eliminated { .. });
                let elim4 = matches!(v4.status, VerdictStatus::Eliminated { .. });
                if elim2 {
                    assert!(elim4, "case {} rep {}: eliminated at 2 but not 4", id, v2.id);
                }
                assert_eq!(
                    matches!(v2.status, VerdictStatus::Component { .. }),
                    matches!(v4.status, VerdictStatus::Component { .. })
                );
            }
        }
    }

    #[test]
    fn families_generically_distinguished() {
        for id in ["A5", "B3", "C3", "D4", "G2"] {
            let (c, b) = setup(id);
            for fam in &c.families {
                let e = b.rep_element_poly(c.rep(fam).unwrap());
                let prof = profile(&b, &e).unwrap();
                assert!(prof.distinguished, "family {} in {}", fam, id);
            }
        }
    }

    #[test]
    fn report_json_round_trips() {
        let (c, b) = setup("A3");
        let report = classify(&b, &c, 4).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: ClassificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn torus_invariance_of_profiles() {
        // rescaling a single coefficient leaves the profile unchanged when
        // the support roots are linearly independent
        for id in ["A2", "A3", "A4", "B2"] {
            let (c, b) = setup(id);
            for rep in &c.reps {
                let e = b.rep_element_rat(rep).unwrap();
                let support = e.support();
                if support.is_empty() {
                    continue;
                }
                let m = ExactMatrix::from_rows(
                    support
                        .iter()
                        .map(|&i| {
                            b.root_system.positive_roots[i]
                                .iter()
                                .map(|&x| rat(x))
                                .collect()
                        })
                        .collect(),
                );
                if rank(&m) < support.len() {
                    continue;
                }
                let base = profile(&b, &e).unwrap();
                for &i in &support {
                    let mut scaled = e.clone();
                    scaled.nil[i] = scaled.nil[i].mul(&rat(7));
                    let p = profile(&b, &scaled).unwrap();
                    assert_eq!(p, base, "case {} rep {} coeff {}", id, rep.id, i);
                }
            }
        }
    }
}
