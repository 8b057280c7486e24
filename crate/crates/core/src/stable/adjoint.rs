use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{hom_space, kernel_cokernel, HomSpace, Module, ModuleHom};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::rep::TriangularRef;
use crate::subcat::{ExactInventory, Side as TripleSide, TripleAnalysis, TripleCategory, Verdict};

use super::category::StableCategory;
use super::functors::{split, Domain, FunctorName, FunctorTable, Prepared};

/// An ordered pair `(F, G)` with `F` left adjoint to `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointPair {
    pub left: FunctorName,
    pub right: FunctorName,
}

impl AdjointPair {
    /// `(Q, q)`, `(q, ℚ)`, `(P, p)`.
    pub const E_SIDE: [AdjointPair; 3] = [
        AdjointPair::new(FunctorName::BigQ, FunctorName::Q),
        AdjointPair::new(FunctorName::Q, FunctorName::Kernel),
        AdjointPair::new(FunctorName::BigP, FunctorName::P),
    ];

    /// `(ℙ_M, p_M)`, `(p_M, P_M)`, `(q_M, Q_M)`.
    pub const M_SIDE: [AdjointPair; 3] = [
        AdjointPair::new(FunctorName::Cokernel, FunctorName::PM),
        AdjointPair::new(FunctorName::PM, FunctorName::BigPM),
        AdjointPair::new(FunctorName::QM, FunctorName::BigQM),
    ];

    pub const fn new(left: FunctorName, right: FunctorName) -> Self {
        AdjointPair { left, right }
    }

    pub fn label(&self) -> String {
        format!("({}, {})", self.left, self.right)
    }
}

/// The unit and counit of one of the six pairs, written down from the
/// definitions of the functors.
struct Adjunction<'a> {
    pair: AdjointPair,
    left: &'a FunctorTable,
    right: &'a FunctorTable,
}

impl Adjunction<'_> {
    /// `eps_d: F G d -> d`, given `F G d`.
    fn counit(&self, d: &Module, fgd: &Module) -> Result<ModuleHom> {
        let tri = self.left.triangular();
        let p = tri.modulus();
        let matrix = match (self.pair.left, self.pair.right) {
            (FunctorName::BigQ, FunctorName::Q) | (FunctorName::BigP, FunctorName::P) => Matrix::identity(p, d.dim()),
            (FunctorName::Q, FunctorName::Kernel) => {
                let t = split(tri, d)?;
                let incl = kernel_cokernel(&tri.to_h(&t)?.phi)?.inclusion;
                Matrix::vstack(&[&Matrix::zeros(p, t.x.dim(), incl.source.dim()), &incl.matrix])
            }
            (FunctorName::Cokernel, FunctorName::PM) => {
                let t = split(tri, &self.right.object(d)?)?;
                let proj = kernel_cokernel(&t.phi)?.projection;
                proj.inverse()
                    .ok_or_else(|| Error::Invalid("cokernel of a zero map is not the object".into()))?
                    .matrix
            }
            (FunctorName::PM, FunctorName::BigPM) => {
                let t = split(tri, d)?;
                Matrix::vstack(&[&Matrix::identity(p, t.x.dim()), &Matrix::zeros(p, t.y.dim(), t.x.dim())])
            }
            (FunctorName::QM, FunctorName::BigQM) => {
                let t = split(tri, d)?;
                Matrix::block_diag(&[&t.phi.matrix, &Matrix::identity(p, t.y.dim())])
            }
            _ => return Err(Error::Invalid(format!("{} is not a known adjoint pair", self.pair.label()))),
        };
        ModuleHom::new(fgd, d, matrix)
    }

    /// `eta_c: c -> G F c`, given `G F c`.
    fn unit(&self, c: &Module, gfc: &Module) -> Result<ModuleHom> {
        let tri = self.left.triangular();
        let p = tri.modulus();
        let matrix = match (self.pair.left, self.pair.right) {
            (FunctorName::BigQ, FunctorName::Q) => {
                let t = split(tri, c)?;
                Matrix::hstack(&[&Matrix::zeros(p, t.y.dim(), t.x.dim()), &Matrix::identity(p, t.y.dim())])
            }
            (FunctorName::Q, FunctorName::Kernel) => {
                let t = split(tri, &self.left.object(c)?)?;
                let incl = kernel_cokernel(&tri.to_h(&t)?.phi)?.inclusion;
                incl.inverse()
                    .ok_or_else(|| Error::Invalid("kernel of a zero map is not the object".into()))?
                    .matrix
            }
            (FunctorName::BigP, FunctorName::P) => {
                let t = split(tri, c)?;
                Matrix::block_diag(&[&Matrix::identity(p, t.x.dim()), &tri.to_h(&t)?.phi.matrix])
            }
            (FunctorName::Cokernel, FunctorName::PM) => {
                let t = split(tri, c)?;
                let proj = kernel_cokernel(&t.phi)?.projection;
                Matrix::hstack(&[&proj.matrix, &Matrix::zeros(p, proj.target.dim(), t.y.dim())])
            }
            (FunctorName::PM, FunctorName::BigPM) | (FunctorName::QM, FunctorName::BigQM) => {
                Matrix::identity(p, c.dim())
            }
            _ => return Err(Error::Invalid(format!("{} is not a known adjoint pair", self.pair.label()))),
        };
        ModuleHom::new(c, gfc, matrix)
    }
}

/// The counit `F G d -> d` of one of the six pairs.
pub fn counit(pair: AdjointPair, tri: &TriangularRef, d: &Module) -> Result<ModuleHom> {
    let (left, right) = (FunctorTable::new(tri, pair.left), FunctorTable::new(tri, pair.right));
    let fgd = left.object(&right.object(d)?)?;
    Adjunction { pair, left: &left, right: &right }.counit(d, &fgd)
}

/// The unit `c -> G F c` of one of the six pairs.
pub fn unit(pair: AdjointPair, tri: &TriangularRef, c: &Module) -> Result<ModuleHom> {
    let (left, right) = (FunctorTable::new(tri, pair.left), FunctorTable::new(tri, pair.right));
    let gfc = right.object(&left.object(c)?)?;
    Adjunction { pair, left: &left, right: &right }.unit(c, &gfc)
}

/// Dimensions for one pair of objects `(c, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDims {
    pub c: usize,
    pub d: usize,
    /// `dim Hom(c, G d)`.
    pub right_hom: usize,
    /// `dim Hom(F c, d)`.
    pub left_hom: usize,
    pub right_stable: Option<usize>,
    pub left_stable: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointReport {
    pub pair: AdjointPair,
    pub dims: Vec<PairDims>,
    /// `h -> eps F(h)` is invertible for every pair of objects.
    pub bijective: bool,
    pub natural: bool,
    /// Both triangle identities on every object.
    pub triangles: bool,
    /// The bijections carry maps through projectives onto maps through
    /// projectives; `None` when no stable categories were supplied.
    pub stable: Option<bool>,
    pub unit_iso: bool,
    pub counit_iso: bool,
    /// The first failure of each kind found.
    pub witnesses: Vec<String>,
    pub verdict: Verdict,
}

/// Coordinates of `m` in `hs` as a column.
fn column(hs: &HomSpace, m: &Matrix) -> Result<Matrix> {
    let c = hs
        .coords(m)
        .ok_or_else(|| Error::Invalid("composite is not a module map".into()))?;
    Ok(Matrix::column_vector(m.modulus(), &c))
}

fn span(p: u32, ambient: usize, cols: &[Matrix]) -> Subspace {
    if cols.is_empty() {
        return Subspace::zero(p, ambient);
    }
    let refs: Vec<&Matrix> = cols.iter().collect();
    Subspace::from_columns(&Matrix::hstack(&refs))
}

struct Side {
    object: Module,
    /// The functor applied on this side, prepared.
    image: Prepared,
    /// The other functor applied back to the image, prepared by the
    /// functor that maps the image's ambient category back.
    back: Prepared,
    /// Unit (on the `c` side) or counit (on the `d` side).
    map: ModuleHom,
}

/// Checks the adjunction `F -| G` with `F` defined on `c_objs` and `G` on
/// `d_objs`: the bijection `Hom(c, G d) -> Hom(F c, d)`, `h -> eps_d F(h)`,
/// its naturality in both variables on every basis morphism between
/// listed objects, and the triangle identities. With stable categories
/// (on the sources of `F` and `G`), also that the bijection matches the
/// subspaces of maps factoring through projectives.
pub fn verify_adjoint_pair<C, D>(
    pair: AdjointPair,
    left: &FunctorTable,
    right: &FunctorTable,
    c_objs: &[Module],
    d_objs: &[Module],
    stable: Option<(&StableCategory<C>, &StableCategory<D>)>,
) -> Result<AdjointReport>
where
    C: ExactInventory + ?Sized,
    D: ExactInventory + ?Sized,
{
    if (left.name, right.name) != (pair.left, pair.right) {
        return Err(Error::Invalid(format!(
            "functor tables ({}, {}) do not match {}",
            left.name,
            right.name,
            pair.label()
        )));
    }
    let adj = Adjunction { pair, left, right };
    let cs: Vec<Side> = c_objs
        .par_iter()
        .map(|c| {
            let image = left.prepare(c)?;
            let back = right.prepare(&image.image)?;
            let map = adj.unit(c, &back.image)?;
            Ok(Side {
                object: c.clone(),
                image,
                back,
                map,
            })
        })
        .collect::<Result<_>>()?;
    // On the d side `image` is G d prepared by G, `back` is G d prepared by F.
    let ds: Vec<Side> = d_objs
        .par_iter()
        .map(|d| {
            let image = right.prepare(d)?;
            let back = left.prepare(&image.image)?;
            let map = adj.counit(d, &back.image)?;
            Ok(Side {
                object: d.clone(),
                image,
                back,
                map,
            })
        })
        .collect::<Result<_>>()?;
    let c_prep: Vec<&Prepared> = cs.iter().map(|c| &c.image).collect();
    let d_prep: Vec<&Prepared> = ds.iter().map(|d| &d.image).collect();

    let mut witnesses: Vec<String> = Vec::new();
    let mut note = |w: String| {
        let kind = w.split(" fails").next().unwrap_or_default().to_string();
        if !witnesses.iter().any(|x| x.starts_with(&kind)) {
            witnesses.push(w);
        }
    };

    // Triangle identities: eps_{Fc} F(eta_c) = 1 and G(eps_d) eta_{Gd} = 1.
    let mut triangles = true;
    for (i, c) in cs.iter().enumerate() {
        let fc = &c.image;
        let gfc_f = left.prepare(&c.back.image)?;
        let f_eta = left.morphism_prepared(&c.map, c_prep[i], &gfc_f)?;
        let eps = adj.counit(&fc.image, &gfc_f.image)?;
        if !eps.matrix.mul(&f_eta.matrix).is_identity() {
            triangles = false;
            note(format!("triangle identity fails at F of c#{i}"));
        }
    }
    for (j, d) in ds.iter().enumerate() {
        let gd = &d.image.image;
        let fgd_g = right.prepare(&d.back.image)?;
        let g_eps = right.morphism_prepared(&d.map, &fgd_g, d_prep[j])?;
        let eta = adj.unit(gd, &fgd_g.image)?;
        if !g_eps.matrix.mul(&eta.matrix).is_identity() {
            triangles = false;
            note(format!("triangle identity fails at G of d#{j}"));
        }
    }
    let unit_iso = cs.iter().all(|c| c.map.is_iso());
    let counit_iso = ds.iter().all(|d| d.map.is_iso());

    let (nc, nd) = (cs.len(), ds.len());
    let phi = |i: usize, j: usize, h: &ModuleHom| -> Result<Matrix> {
        let fh = left.morphism_prepared(h, c_prep[i], &ds[j].back)?;
        Ok(ds[j].map.matrix.mul(&fh.matrix))
    };
    let homs_cc: Vec<Vec<Vec<ModuleHom>>> = c_objs
        .par_iter()
        .map(|a| c_objs.iter().map(|b| Ok(hom_space(a, b)?.homs())).collect())
        .collect::<Result<_>>()?;
    let homs_dd: Vec<Vec<Vec<ModuleHom>>> = d_objs
        .par_iter()
        .map(|a| d_objs.iter().map(|b| Ok(hom_space(a, b)?.homs())).collect())
        .collect::<Result<_>>()?;
    // G on basis maps d -> d'.
    let g_dd: Vec<Vec<Vec<ModuleHom>>> = (0..nd)
        .into_par_iter()
        .map(|j| {
            (0..nd)
                .map(|k| {
                    homs_dd[j][k]
                        .iter()
                        .map(|b| right.morphism_prepared(b, d_prep[j], d_prep[k]))
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    struct Cell {
        dims: PairDims,
        bijective: bool,
        natural: Option<String>,
        stable: Option<bool>,
    }
    let pairs: Vec<(usize, usize)> = (0..nc).flat_map(|i| (0..nd).map(move |j| (i, j))).collect();
    let cells: Vec<Cell> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = &cs[i].object;
            let gd = &ds[j].image.image;
            let fc = &cs[i].image.image;
            let d = &ds[j].object;
            let h1 = hom_space(c, gd)?;
            let h2 = hom_space(fc, d)?;
            let p = c.modulus();
            let images: Vec<Matrix> = h1.homs().iter().map(|h| phi(i, j, h)).collect::<Result<_>>()?;
            let cols: Vec<Matrix> = images.iter().map(|m| column(&h2, m)).collect::<Result<_>>()?;
            let bijective = h1.dim() == h2.dim() && (h1.dim() == 0 || Matrix::hstack(&cols.iter().collect::<Vec<_>>()).is_invertible());

            // Naturality in c: phi(h a) = phi(h) F(a).
            let mut natural = None;
            'c: for k in 0..nc {
                for a in &homs_cc[k][i] {
                    let fa = left.morphism_prepared(a, c_prep[k], c_prep[i])?;
                    for (h, ph) in h1.homs().iter().zip(&images) {
                        if phi(k, j, &h.compose(a)?)? != ph.mul(&fa.matrix) {
                            natural = Some(format!("naturality square in c fails for c#{k} -> c#{i}, d#{j}"));
                            break 'c;
                        }
                    }
                }
            }
            // Naturality in d: phi(G(b) h) = b phi(h).
            if natural.is_none() {
                'd: for k in 0..nd {
                    for (b, gb) in homs_dd[j][k].iter().zip(&g_dd[j][k]) {
                        for (h, ph) in h1.homs().iter().zip(&images) {
                            if phi(i, k, &gb.compose(h)?)? != b.matrix.mul(ph) {
                                natural = Some(format!("naturality square in d fails for c#{i}, d#{j} -> d#{k}"));
                                break 'd;
                            }
                        }
                    }
                }
            }

            let (mut right_stable, mut left_stable, mut stable_ok) = (None, None, None);
            if let Some((sc, sd)) = stable {
                let s1 = sc.stable_hom(c, gd)?;
                let s2 = sd.stable_hom(fc, d)?;
                right_stable = Some(s1.dim());
                left_stable = Some(s2.dim());
                let basis = s1.projective.basis_columns();
                let mapped: Vec<Matrix> = (0..basis.cols())
                    .map(|k| {
                        let h = ModuleHom::new(c, gd, h1.combine(basis.column(k).entries()))?;
                        column(&h2, &phi(i, j, &h)?)
                    })
                    .collect::<Result<_>>()?;
                stable_ok = Some(span(p, h2.dim(), &mapped) == s2.projective);
            }
            Ok(Cell {
                dims: PairDims {
                    c: i,
                    d: j,
                    right_hom: h1.dim(),
                    left_hom: h2.dim(),
                    right_stable,
                    left_stable,
                },
                bijective,
                natural,
                stable: stable_ok,
            })
        })
        .collect::<Result<_>>()?;

    let mut bijective = true;
    let mut natural = true;
    let mut stable_all = stable.map(|_| true);
    for cell in &cells {
        if !cell.bijective {
            bijective = false;
            note(format!(
                "bijection fails: Hom(c#{0}, G d#{1}) -> Hom(F c#{0}, d#{1}) is not invertible",
                cell.dims.c, cell.dims.d
            ));
        }
        if let Some(w) = &cell.natural {
            natural = false;
            note(w.clone());
        }
        if cell.stable == Some(false) {
            stable_all = Some(false);
            note(format!(
                "stable correspondence fails: maps through projectives differ at c#{}, d#{}",
                cell.dims.c, cell.dims.d
            ));
        }
    }
    let ok = bijective && natural && triangles && stable_all != Some(false);
    Ok(AdjointReport {
        pair,
        dims: cells.into_iter().map(|c| c.dims).collect(),
        bijective,
        natural,
        triangles,
        stable: stable_all,
        unit_iso,
        counit_iso,
        witnesses,
        verdict: Verdict::from_bool(ok),
    })
}

/// The three adjoint pairs of the analysis's side, with objects drawn from
/// the triple, `X` and `Y` inventories; at the stable level too when all
/// three are Frobenius.
pub fn adjoint_pairs(an: &TripleAnalysis, corrupt_right: bool) -> Result<Vec<AdjointReport>> {
    let tri = an.cat.triangular();
    let t_objs: Vec<Module> = an.cat.entries().iter().map(|e| e.module.clone()).collect();
    let st = StableCategory::new(&an.cat, &an.es).ok();
    let sx = StableCategory::new(an.cat.x(), &an.x_es).ok();
    let sy = StableCategory::new(an.cat.y(), &an.y_es).ok();
    let pairs = match an.cat.side() {
        TripleSide::E => AdjointPair::E_SIDE,
        TripleSide::M => AdjointPair::M_SIDE,
    };
    pairs
        .iter()
        .map(|&pair| {
            let left = FunctorTable::new(tri, pair.left);
            let mut right = FunctorTable::new(tri, pair.right);
            if corrupt_right {
                right = right.corrupted();
            }
            let objs = |d: Domain| match d {
                Domain::A => an.cat.x().members(),
                Domain::B => an.cat.y().members(),
                Domain::Lambda => &t_objs[..],
            };
            let (c_objs, d_objs) = (objs(pair.left.source()), objs(pair.right.source()));
            macro_rules! run {
                ($sc:expr, $sd:expr) => {
                    match ($sc, $sd) {
                        (Some(a), Some(b)) => verify_adjoint_pair(pair, &left, &right, c_objs, d_objs, Some((a, b))),
                        _ => verify_adjoint_pair::<TripleCategory, TripleCategory>(pair, &left, &right, c_objs, d_objs, None),
                    }
                };
            }
            match (pair.left.source(), pair.right.source()) {
                (Domain::Lambda, Domain::A) => run!(st.as_ref(), sx.as_ref()),
                (Domain::Lambda, Domain::B) => run!(st.as_ref(), sy.as_ref()),
                (Domain::A, Domain::Lambda) => run!(sx.as_ref(), st.as_ref()),
                (Domain::B, Domain::Lambda) => run!(sy.as_ref(), st.as_ref()),
                _ => Err(Error::Invalid(format!("{} does not pass through triples", pair.label()))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix_dual, fix_frob, fix_ut2};

    #[test]
    fn frob_pairs_both_sides() {
        let fx = fix_frob();
        for side in [TripleSide::E, TripleSide::M] {
            let an = fx.analysis(side).unwrap();
            for r in adjoint_pairs(&an, false).unwrap() {
                assert_eq!(r.verdict, Verdict::Pass, "{}: {:?}", r.pair.label(), r.witnesses);
                assert_eq!(r.stable, Some(true));
            }
        }
    }

    #[test]
    fn small_fixtures_abelian_level() {
        for fx in [fix_ut2(), fix_dual()] {
            for side in [TripleSide::E, TripleSide::M] {
                let an = fx.analysis(side).unwrap();
                for r in adjoint_pairs(&an, false).unwrap() {
                    assert!(r.bijective && r.natural && r.triangles, "{} {}: {:?}", fx.name, r.pair.label(), r.witnesses);
                }
            }
        }
    }

    #[test]
    fn retractions() {
        let an = fix_frob().analysis(TripleSide::E).unwrap();
        let reports = adjoint_pairs(&an, false).unwrap();
        // q -| ℚ has invertible unit (ℚ q = 1); P -| p has invertible counit (P p = 1).
        assert!(reports[1].unit_iso);
        assert!(reports[2].counit_iso);
    }

    #[test]
    fn corrupted_right_adjoint_breaks_naturality() {
        let an = fix_dual().analysis(TripleSide::E).unwrap();
        let reports = adjoint_pairs(&an, true).unwrap();
        let bad: Vec<_> = reports.iter().filter(|r| !r.natural).collect();
        assert!(!bad.is_empty());
        for r in bad {
            assert!(r.witnesses.iter().any(|w| w.starts_with("naturality square")), "{:?}", r.witnesses);
        }
    }
}
