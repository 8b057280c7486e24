use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{hom_space, ModuleHom, ShortExactSeq};
use crate::diagram::complete_standard_triangle;
use crate::error::{Error, Result};
use crate::subcat::{ExactInventory, ExactStructure, Membership, Verdict};

use super::category::StableCategory;
use super::functors::FunctorTable;

#[derive(Clone, Debug, Serialize)]
pub struct TriangulatedReport {
    pub functor: String,
    pub sequences: usize,
    /// `F` takes every catalogued sequence to a short exact sequence.
    pub exact: Verdict,
    /// `F` of every injective object is an injective object of the target.
    pub injectives: Verdict,
    pub triangles_checked: usize,
    /// Sequences whose first term has no injective hull within the caps.
    pub triangles_untestable: usize,
    pub triangles: Verdict,
    pub witnesses: Vec<String>,
    pub verdict: Verdict,
}

/// Outcome of comparing `F` of one standard triangle with the standard
/// triangle of `F` of the sequence.
enum TriangleCheck {
    Agrees,
    Differs(String),
    Untestable,
}

/// Checks that `F` induces a triangulated functor between stable
/// categories: exactness on the source's sequences, injectives sent to
/// injectives, and then, for each sequence `xi` with an injective hull
/// `X -> I` of its first term, that `F(h)` agrees up to maps through
/// projectives with the third map of the standard triangle of `F(xi)`
/// along `F(X) -> F(I)`, identified through `F(I) -> F(TX)`.
pub fn verify_triangulated_functor<C, D>(
    ft: &FunctorTable,
    source: (&C, &ExactStructure),
    target: (&D, &ExactStructure),
) -> Result<TriangulatedReport>
where
    C: ExactInventory + ?Sized,
    D: ExactInventory + ?Sized,
{
    let (inv, es) = source;
    let (tinv, tes) = target;
    let mut witnesses = Vec::new();

    // `None` where the image is not short exact.
    let images: Vec<Option<ShortExactSeq>> = es
        .sequences
        .par_iter()
        .map(|s| Ok(ShortExactSeq::new(ft.morphism(&s.seq.f)?, ft.morphism(&s.seq.g)?).ok()))
        .collect::<Result<_>>()?;
    let first_inexact = images.iter().position(Option::is_none);
    let exact = Verdict::from_bool(first_inexact.is_none());
    if let Some(k) = first_inexact {
        let s = &es.sequences[k];
        witnesses.push(format!(
            "F is not exact on 0 -> {} -> {} -> {} -> 0",
            inv.label(s.left),
            inv.label(s.middle),
            inv.label(s.right)
        ));
    }

    let mut injectives = Verdict::Pass;
    for i in es.injectives() {
        let image = ft.object(&inv.objects()[i])?;
        let v = match tinv.membership(&image)? {
            Membership::Member { index } => Verdict::from_bool(tes.injective[index]),
            Membership::NonMember { .. } => Verdict::Fail,
            _ => Verdict::Partial,
        };
        if v != Verdict::Pass && !witnesses.iter().any(|w: &String| w.starts_with("F of injective")) {
            witnesses.push(format!("F of injective {} is not an injective object of the target", inv.label(i)));
        }
        injectives = injectives.and(v);
    }

    let stable = StableCategory::new(tinv, tes);
    let (mut checked, mut untestable) = (0, 0);
    let triangles = if exact != Verdict::Pass || injectives == Verdict::Fail {
        Verdict::Refused
    } else if let Err(e) = &stable {
        witnesses.push(format!("target is not Frobenius: {e}"));
        Verdict::Refused
    } else {
        let st = stable.as_ref().expect("checked above");
        let results: Vec<TriangleCheck> = es
            .sequences
            .par_iter()
            .zip(&images)
            .map(|(s, image)| {
                let fxi = image.as_ref().expect("exact");
                check_triangle(ft, inv, es, st, &s.seq, s.left, fxi)
            })
            .collect::<Result<_>>()?;
        let mut verdict = Verdict::Pass;
        for r in results {
            match r {
                TriangleCheck::Agrees => checked += 1,
                TriangleCheck::Untestable => {
                    untestable += 1;
                    verdict = verdict.and(Verdict::Partial);
                }
                TriangleCheck::Differs(w) => {
                    checked += 1;
                    if verdict != Verdict::Fail {
                        witnesses.push(w);
                    }
                    verdict = Verdict::Fail;
                }
            }
        }
        verdict
    };
    let verdict = exact.and(injectives).and(if triangles == Verdict::Refused { Verdict::Pass } else { triangles });
    Ok(TriangulatedReport {
        functor: ft.name.to_string(),
        sequences: es.sequences.len(),
        exact,
        injectives,
        triangles_checked: checked,
        triangles_untestable: untestable,
        triangles,
        witnesses,
        verdict,
    })
}

fn check_triangle<C, D>(
    ft: &FunctorTable,
    inv: &C,
    es: &ExactStructure,
    st: &StableCategory<D>,
    xi: &ShortExactSeq,
    left: usize,
    fxi: &ShortExactSeq,
) -> Result<TriangleCheck>
where
    C: ExactInventory + ?Sized,
    D: ExactInventory + ?Sized,
{
    let Some(hull) = es.injective_hull(inv, left)? else {
        return Ok(TriangleCheck::Untestable);
    };
    // The inventory object is isomorphic to the sequence's first term;
    // the catalogued sequence starts at the object itself.
    if hull.map.source != *xi.left() {
        return Err(Error::Invalid("catalogued sequence does not start at its inventory object".into()));
    }
    let tri = complete_standard_triangle(xi, &hull.map)?;
    let f_emb = ft.morphism(&hull.map)?;
    let f_pi = ft.morphism(&tri.cokernel)?;
    let f_h = ft.morphism(&tri.h)?;
    let Ok(image_tri) = complete_standard_triangle(fxi, &f_emb) else {
        return Ok(TriangleCheck::Differs(format!(
            "F of the injective hull of {} does not extend along F(xi)",
            inv.label(left)
        )));
    };
    // theta: Coker F(emb) -> F(TX) with theta pi' = F(pi).
    let pi2 = &image_tri.cokernel;
    let theta = hom_space(&pi2.target, &f_pi.target)?
        .solve_linear(|t| t.mul(&pi2.matrix), &f_pi.matrix)
        .ok_or_else(|| Error::Invalid("F(pi) does not factor through the cokernel".into()))?;
    let theta = ModuleHom::new(&pi2.target, &f_pi.target, theta)?;
    if !theta.is_iso() {
        return Ok(TriangleCheck::Differs(format!(
            "F(T {}) is not the cokernel of F of its injective hull",
            inv.label(left)
        )));
    }
    let diff = f_h.matrix.sub(&theta.matrix.mul(&image_tri.h.matrix));
    let sh = st.stable_hom(&f_h.source, &f_h.target)?;
    Ok(if sh.is_stably_zero(&diff)? {
        TriangleCheck::Agrees
    } else {
        TriangleCheck::Differs(format!(
            "F(h) and the standard triangle of F(xi) differ stably for the sequence starting at {}",
            inv.label(left)
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ext_obstruction, fix_dual, fix_frob};
    use crate::stable::FunctorName;
    use crate::subcat::Side;

    #[test]
    fn q_on_frob_and_p_on_dual() {
        let an = fix_frob().analysis(Side::E).unwrap();
        let q = FunctorTable::new(an.cat.triangular(), FunctorName::Q);
        let r = verify_triangulated_functor(&q, (an.cat.y(), &an.y_es), (&an.cat, &an.es)).unwrap();
        // Sequences starting at S + S + S have hulls beyond the caps.
        assert_eq!((r.exact, r.injectives), (Verdict::Pass, Verdict::Pass));
        assert_eq!(r.triangles, Verdict::Partial, "{r:?}");
        assert!(r.triangles_checked > 0 && r.witnesses.is_empty());

        let an = fix_dual().analysis(Side::E).unwrap();
        let big_p = FunctorTable::new(an.cat.triangular(), FunctorName::BigP);
        let r = verify_triangulated_functor(&big_p, (&an.cat, &an.es), (an.cat.x(), &an.x_es)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn p_is_not_exact_under_an_ext_obstruction() {
        let an = ext_obstruction().analysis(Side::E).unwrap();
        let p = FunctorTable::new(an.cat.triangular(), FunctorName::P);
        let r = verify_triangulated_functor(&p, (an.cat.x(), &an.x_es), (&an.cat, &an.es)).unwrap();
        assert_eq!(r.exact, Verdict::Fail);
        assert!(r.witnesses[0].starts_with("F is not exact"));
    }
}
