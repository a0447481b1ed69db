//! ad-maps and centralizer dimensions: the distinguished test, orbit and
//! component-candidate dimensions, the GL2 closure property and the
//! descending central series.

use crate::chevalley::{ChevalleyBasis, ChevalleyError, LieElement};
use crate::exactla::{rank, rat, ExactMatrix, Rat, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CentralizerError {
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error("image of ad-map escapes the requested codomain (root index {0})")]
    ImageEscapesCodomain(usize),
    #[error("element must lie in u")]
    NotInU,
    #[error("inputs do not commute")]
    NotCommuting,
    #[error("the 2x2 matrix is singular")]
    SingularGl2,
}

/// A member of the Chevalley basis of b: a simple coroot or a positive
/// root vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisVector {
    Coroot(usize),
    Root(usize),
}

pub fn full_b_basis(basis: &ChevalleyBasis) -> Vec<BasisVector> {
    (0..basis.rank())
        .map(BasisVector::Coroot)
        .chain((0..basis.num_positive()).map(BasisVector::Root))
        .collect()
}

pub fn u_basis(basis: &ChevalleyBasis) -> Vec<BasisVector> {
    (0..basis.num_positive()).map(BasisVector::Root).collect()
}

fn basis_element<S: Scalar>(basis: &ChevalleyBasis, v: BasisVector, one: &S) -> LieElement<S> {
    match v {
        BasisVector::Coroot(k) => basis.coroot_vector(k, one),
        BasisVector::Root(i) => basis.root_vector(i, one),
    }
}

/// Matrix of x -> [x, e] with the given domain and codomain bases; column j
/// holds the coordinates of [domain_j, e]. The image must lie in the span
/// of the codomain.
pub fn ad_matrix<S: Scalar>(
    basis: &ChevalleyBasis,
    e: &LieElement<S>,
    domain: &[BasisVector],
    codomain: &[BasisVector],
) -> Result<ExactMatrix<S>, CentralizerError> {
    let one = e
        .scalars()
        .next()
        .expect("element over an empty basis")
        .one();
    let mut codomain_slot = vec![usize::MAX; basis.num_positive()];
    for (row, v) in codomain.iter().enumerate() {
        if let BasisVector::Root(i) = v {
            codomain_slot[*i] = row;
        }
    }
    let mut rows = vec![vec![one.zero(); domain.len()]; codomain.len()];
    for (col, v) in domain.iter().enumerate() {
        let x = basis_element(basis, *v, &one);
        let image = basis.bracket(&x, e)?;
        debug_assert!(image.in_u());
        for (i, c) in image.nil.iter().enumerate() {
            if !c.is_zero() {
                let row = codomain_slot[i];
                if row == usize::MAX {
                    return Err(CentralizerError::ImageEscapesCodomain(i));
                }
                rows[row][col] = c.clone();
            }
        }
    }
    Ok(ExactMatrix::from_rows(rows))
}

/// Per-representative dimension data. Over Q[t] the values are generic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerProfile {
    pub rep: Option<String>,
    pub dim_b: usize,
    pub dim_cb: usize,
    pub dim_cu: usize,
    pub dim_orbit: usize,
    pub dim_component: usize,
    pub distinguished: bool,
}

pub fn profile<S: Scalar>(
    basis: &ChevalleyBasis,
    e: &LieElement<S>,
) -> Result<CentralizerProfile, CentralizerError> {
    if !e.in_u() {
        return Err(CentralizerError::NotInU);
    }
    let dim_b = basis.rank() + basis.num_positive();
    let dim_u = basis.num_positive();
    let b_basis = full_b_basis(basis);
    let u_bas = u_basis(basis);
    let m_b = ad_matrix(basis, e, &b_basis, &u_bas)?;
    let m_u = ad_matrix(basis, e, &u_bas, &u_bas)?;
    let dim_cb = dim_b - rank(&m_b);
    let dim_cu = dim_u - rank(&m_u);
    let dim_orbit = dim_b - dim_cb;
    Ok(CentralizerProfile {
        rep: None,
        dim_b,
        dim_cb,
        dim_cu,
        dim_orbit,
        dim_component: dim_orbit + dim_cu,
        distinguished: dim_cb == dim_cu,
    })
}

/// Whether (a x + b y, c x + d y) still commutes for commuting (x, y) and
/// an invertible 2x2 matrix. Always true; exposed as a property check.
pub fn gl2_closure_check<S: Scalar>(
    basis: &ChevalleyBasis,
    x: &LieElement<S>,
    y: &LieElement<S>,
    m: &[[S; 2]; 2],
) -> Result<bool, CentralizerError> {
    if !basis.bracket(x, y)?.is_zero() {
        return Err(CentralizerError::NotCommuting);
    }
    let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    if det.is_zero() {
        return Err(CentralizerError::SingularGl2);
    }
    let u = x.scale(&m[0][0]).add(&y.scale(&m[0][1]));
    let v = x.scale(&m[1][0]).add(&y.scale(&m[1][1]));
    Ok(basis.bracket(&u, &v)?.is_zero())
}

/// Length of the descending central series u, [u,u], [u,[u,u]], ...,
/// computed from brackets; equals the height of the highest root.
pub fn lower_central_length(basis: &ChevalleyBasis) -> usize {
    let one = rat(1);
    let n = basis.num_positive();
    let mut current: Vec<LieElement<Rat>> = (0..n).map(|i| basis.root_vector(i, &one)).collect();
    let mut length = 0;
    while !current.is_empty() {
        length += 1;
        let mut images: Vec<LieElement<Rat>> = Vec::new();
        for i in 0..n {
            let g = basis.root_vector(i, &one);
            for v in &current {
                let im = basis.bracket(&g, v).expect("rational domain");
                if !im.is_zero() {
                    images.push(im);
                }
            }
        }
        current = span_basis(images, n);
    }
    length
}

/// Reduce a spanning set to an independent one (coordinates in u).
fn span_basis(vectors: Vec<LieElement<Rat>>, n: usize) -> Vec<LieElement<Rat>> {
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut out = Vec::new();
    for v in vectors {
        rows.push(v.nil.clone());
        let m = ExactMatrix::from_rows(rows.clone());
        if rank(&m) == rows.len() {
            out.push(v);
        } else {
            rows.pop();
        }
        if rows.len() == n {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::nullity;
    use crate::rootdata::{build_root_system, case, RootTypeLabel};

    fn basis(label: RootTypeLabel, rank: usize) -> ChevalleyBasis {
        ChevalleyBasis::new(&build_root_system(label, rank).unwrap())
    }

    fn case_basis(id: &str) -> (crate::rootdata::CaseData, ChevalleyBasis) {
        let c = case(id, None).unwrap();
        let b = ChevalleyBasis::new(&c.root_system);
        (c, b)
    }

    #[test]
    fn ad_matrix_of_zero_is_zero() {
        let b = basis(RootTypeLabel::A, 2);
        let z = b.zero_element(&rat(1));
        let m = ad_matrix(&b, &z, &u_basis(&b), &u_basis(&b)).unwrap();
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn a2_ad_of_simple_root_vector() {
        let b = basis(RootTypeLabel::A, 2);
        let e = b.root_vector(0, &rat(1));
        let m = ad_matrix(&b, &e, &u_basis(&b), &u_basis(&b)).unwrap();
        // single surviving bracket: e_b2 -> +/- e_b3
        assert_eq!(rank(&m), 1);
        let mut nonzero_cols = 0;
        for j in 0..m.cols {
            if (0..m.rows).any(|i| !m.at(i, j).is_zero()) {
                nonzero_cols += 1;
            }
        }
        assert_eq!(nonzero_cols, 1);
    }

    #[test]
    fn a3_e8_profile_matches_matrix_oracle() {
        // Independent oracle: brute-force the commutator equations
        // [E23 + E14, Y] = 0 over the rationals, with Y strictly upper
        // (dim c_u) and upper triangular traceless (dim c_b), without going
        // through the Chevalley bracket path.
        let (c, b) = case_basis("A3");
        let e8 = b.rep_element_rat(c.rep("e8").unwrap()).unwrap();

        let x_entries = |i: usize, j: usize| -> i64 {
            i64::from((i, j) == (1, 2) || (i, j) == (0, 3))
        };
        // unknown slots: strictly upper y_{ij}, plus optionally the first
        // three diagonal entries (y_33 = -(y_00 + y_11 + y_22))
        let strict: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let build = |with_diag: bool| -> ExactMatrix<Rat> {
            let mut unknowns: Vec<Vec<(usize, usize, i64)>> = strict
                .iter()
                .map(|&(i, j)| vec![(i, j, 1)])
                .collect();
            if with_diag {
                for d in 0..3 {
                    // y_dd appears as itself and negated at slot (3,3)
                    unknowns.push(vec![(d, d, 1), (3, 3, -1)]);
                }
            }
            let mut rows = Vec::new();
            for ri in 0..4 {
                for rj in 0..4 {
                    let mut row = Vec::new();
                    for parts in &unknowns {
                        let mut coeff = 0i64;
                        for &(yi, yj, sgn) in parts {
                            // (x y)_{ri,rj} picks up x_{ri,yi} y_{yi,yj} when yj == rj
                            if yj == rj {
                                coeff += sgn * x_entries(ri, yi);
                            }
                            // (y x)_{ri,rj} picks up y_{yi,yj} x_{yj,rj} when yi == ri
                            if yi == ri {
                                coeff -= sgn * x_entries(yj, rj);
                            }
                        }
                        row.push(rat(coeff));
                    }
                    rows.push(row);
                }
            }
            ExactMatrix::from_rows(rows)
        };
        assert_eq!(nullity(&build(false)), 4, "oracle dim c_u(e8)");
        assert_eq!(nullity(&build(true)), 5, "oracle dim c_b(e8)");

        let p = profile(&b, &e8).unwrap();
        assert_eq!(p.dim_cb, 5);
        assert_eq!(p.dim_cu, 4);
        assert_eq!(p.dim_component, 8);
        assert!(!p.distinguished);

        // ad-matrix of e8 restricted to u has rank 2 (nullity 4)
        let m = ad_matrix(&b, &e8, &u_basis(&b), &u_basis(&b)).unwrap();
        assert_eq!(rank(&m), 2);
        // ad on all of b has rank 4, so dim c_b = 9 - 4 = 5
        let mb = ad_matrix(&b, &e8, &full_b_basis(&b), &u_basis(&b)).unwrap();
        assert_eq!(rank(&mb), 4);
    }

    #[test]
    fn a3_e1_is_distinguished() {
        let (c, b) = case_basis("A3");
        let e1 = b.rep_element_rat(c.rep("e1").unwrap()).unwrap();
        let p = profile(&b, &e1).unwrap();
        assert_eq!((p.dim_cb, p.dim_cu, p.dim_component), (3, 3, 9));
        assert!(p.distinguished);
    }

    #[test]
    fn zero_profile_per_case() {
        for id in crate::rootdata::SHIPPED_CASE_IDS {
            let (_, b) = case_basis(id);
            let z = b.zero_element(&rat(1));
            let p = profile(&b, &z).unwrap();
            assert_eq!(p.dim_cb, p.dim_b);
            assert_eq!(p.dim_cu, b.num_positive());
            assert_eq!(p.dim_component, b.num_positive());
            assert!(!p.distinguished, "rank >= 1 so t acts");
        }
    }

    #[test]
    fn a4_paper_nullities() {
        let (c, b) = case_basis("A4");
        for (id, want) in [("e14", 6), ("e23", 5)] {
            let e = b.rep_element_rat(c.rep(id).unwrap()).unwrap();
            let m = ad_matrix(&b, &e, &u_basis(&b), &u_basis(&b)).unwrap();
            assert_eq!(nullity(&m), want, "c_u({})", id);
        }
    }

    #[test]
    fn gl2_closure_examples() {
        let (c, b) = case_basis("A4");
        let e25 = b.rep_element_rat(c.rep("e25").unwrap()).unwrap();
        let m = ad_matrix(&b, &e25, &u_basis(&b), &u_basis(&b)).unwrap();
        let ns = crate::exactla::nullspace_basis(&m, &rat(0));
        // y: a combination of centralizer basis vectors
        let mut y = b.zero_element(&rat(1));
        for (k, v) in ns.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                y.nil[i] = y.nil[i].clone() + c * rat(k as i64 + 1);
            }
        }
        let swap = [[rat(0), rat(1)], [rat(1), rat(0)]];
        assert!(gl2_closure_check(&b, &e25, &y, &swap).unwrap());
        let shear = [[rat(1), rat(1)], [rat(0), rat(1)]];
        assert!(gl2_closure_check(&b, &e25, &y, &shear).unwrap());
        let m2 = [[rat(3), rat(5)], [rat(2), rat(7)]];
        assert!(gl2_closure_check(&b, &e25, &y, &m2).unwrap());
        let sing = [[rat(1), rat(2)], [rat(2), rat(4)]];
        assert!(matches!(
            gl2_closure_check(&b, &e25, &y, &sing),
            Err(CentralizerError::SingularGl2)
        ));
        let e1 = b.rep_element_rat(c.rep("e1").unwrap()).unwrap();
        let e2 = b.rep_element_rat(c.rep("e2").unwrap()).unwrap();
        if !b.bracket(&e1, &e2).unwrap().is_zero() {
            assert!(matches!(
                gl2_closure_check(&b, &e1, &e2, &shear),
                Err(CentralizerError::NotCommuting)
            ));
        }
    }

    #[test]
    fn lower_central_series_lengths() {
        let b2 = basis(RootTypeLabel::B, 2);
        assert_eq!(lower_central_length(&b2), 3);
        let a5 = basis(RootTypeLabel::A, 5);
        assert_eq!(lower_central_length(&a5), 5);
        let a1 = basis(RootTypeLabel::A, 1);
        assert_eq!(lower_central_length(&a1), 1);
    }

    #[test]
    fn central_roots_bound_dim_cu() {
        for id in crate::rootdata::SHIPPED_CASE_IDS {
            let (c, b) = case_basis(id);
            let central = c.root_system.central_roots().len();
            for rep in &c.reps {
                if rep.has_param() {
                    continue;
                }
                let e = b.rep_element_rat(rep).unwrap();
                let p = profile(&b, &e).unwrap();
                assert!(p.dim_cu >= central, "case {} rep {}", id, rep.id);
                assert!(p.dim_cu <= p.dim_cb && p.dim_cb <= p.dim_b);
                assert_eq!(p.dim_orbit + p.dim_cu, p.dim_component);
                assert_eq!(p.dim_component == p.dim_b, p.distinguished);
            }
        }
    }
}
