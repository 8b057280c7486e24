//! The ten acceptance criteria, each checked against an oracle computed in
//! this file and reported on one line.
//!
//! Run with `cargo test -p tricat --test acceptance`; pass criterion
//! numbers (`-- 2 5`) to run a subset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tricat::algebra::{extensions, generator_cover, hom_space, kernel_cokernel, Algebra, AlgebraRef, Module};
use tricat::bimodule::{Bimodule, PerpKind};
use tricat::diagram::{pullback, pushout, random, snake, square_conclusions, verify_pushout_pullback, CommSquare, SquareVerdict};
use tricat::fixtures::{
    ext_obstruction, fix_dual, fix_frob, fix_ut2, missing_injective, simple_local, tor_obstruction, ut2_negative,
};
use tricat::io::{emit_report, load_manifest, run_suite, Format};
use tricat::linalg::all_vectors;
use tricat::rep::Triangular;
use tricat::stable::{adjoint_pairs, verify_recollement};
use tricat::subcat::{
    enough_projectives_cover, frobenius_check, is_coresolving, is_resolving, perp_inclusion, triple_resolving, Side,
    SubcategorySpec, TripleAnalysis, Verdict, EXT_CLAUSE, TOR_CLAUSE,
};
use tricat::Matrix;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: tricat::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn frob(side: Side) -> &'static TripleAnalysis {
    static E: OnceLock<TripleAnalysis> = OnceLock::new();
    static M: OnceLock<TripleAnalysis> = OnceLock::new();
    let cell = if side == Side::E { &E } else { &M };
    cell.get_or_init(|| fix_frob().analysis(side).expect("frob analysis"))
}

// ---------------------------------------------------------------------------
// Homological oracles, from dimensions of Hom spaces only.

fn hom_dim(x: &Module, y: &Module) -> usize {
    hom_space(x, y).expect("hom space").dim()
}

/// `0 -> K -> F -> x -> 0` with `F` free.
fn cover(x: &Module) -> (Module, Module) {
    let seq = generator_cover(x).into_sequence().expect("cover");
    (seq.left().clone(), seq.middle().clone())
}

/// `dim Ext^1(x, y) = dim Hom(K, y) - dim Hom(F, y) + dim Hom(x, y)`.
fn ext1(x: &Module, y: &Module) -> usize {
    if x.is_zero() || y.is_zero() {
        return 0;
    }
    let (k, f) = cover(x);
    hom_dim(&k, y) + hom_dim(x, y) - hom_dim(&f, y)
}

/// `dim Ext^i(x, y)` for `i = 1..=imax`, by dimension shifting.
fn ext_dims(x: &Module, y: &Module, imax: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(imax);
    let mut omega = x.clone();
    for i in 1..=imax {
        out.push(ext1(&omega, y));
        if i < imax {
            omega = cover(&omega).0;
        }
    }
    out
}

/// `D M` as a left `B`-module.
fn dual_of_right(m: &Bimodule) -> Module {
    let action = m.right_action().iter().map(Matrix::transpose).collect();
    Module::new(m.right_algebra(), m.dim(), action).expect("dual of M")
}

/// The simple `Lambda`-modules when `A` and `B` are local.
fn lambda_simples(tri: &Triangular) -> Vec<Module> {
    let m = tri.bimodule();
    let (sa, sb) = (simple_local(tri.a()), simple_local(tri.b()));
    let (za, zb) = (Module::zero(tri.a()), Module::zero(tri.b()));
    let p = tri.modulus();
    let t_a = tri.triple(&sa, &zb, Matrix::zeros(p, 1, 0)).expect("[S;0]");
    let tensor = m.tensor(&sb).expect("tensor").module;
    let t_b = tri.triple(&za, &sb, Matrix::zeros(p, 0, tensor.dim())).expect("[0;S]");
    vec![tri.to_module(&t_a), tri.to_module(&t_b)]
}

/// Membership of a `Lambda`-module in `E(X, M, Y)`: `phi: Y -> Hom(M, X)`
/// surjective, `X` in the `X` inventory and `Ker phi` in the `Y` one.
/// `None` when a lookup is undecided.
fn in_e(tri: &Triangular, w: &Module, x: &SubcategorySpec, y: &SubcategorySpec) -> Option<bool> {
    let (t, _) = tri.from_module(w).expect("block triple");
    let th = tri.to_h(&t).expect("hom form");
    if !th.phi.is_surjective() {
        return Some(false);
    }
    let kernel = kernel_cokernel(&th.phi).expect("kernel").kernel().clone();
    let xm = x.lookup(&th.x).expect("lookup");
    let ym = y.lookup(&kernel).expect("lookup");
    use tricat::subcat::Membership::*;
    match (xm, ym) {
        (NonMember { .. }, _) | (_, NonMember { .. }) => Some(false),
        (Member { .. }, Member { .. }) => Some(true),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// 1. Projective triples and injective hom-form triples.

fn criterion_1() -> Outcome {
    let mut lines = Vec::new();
    for fix in [fix_ut2(), fix_dual()] {
        let tri = &fix.tri;
        let m = tri.bimodule();
        let p = tri.modulus();
        let simples = lambda_simples(tri);
        let xs: Vec<&Module> = fix.x.members().iter().filter(|x| x.dim() <= fix.caps.0).collect();
        let ys: Vec<&Module> = fix.y.members().iter().filter(|y| y.dim() <= fix.caps.1).collect();
        let (mut reps, mut rephs, mut projectives, mut injectives) = (0, 0, 0, 0);
        for x in &xs {
            for y in &ys {
                let tensor = lib(m.tensor(y))?.module;
                let hs = lib(hom_space(&tensor, x))?;
                for c in all_vectors(p, hs.dim()) {
                    let t = lib(tri.triple(x, y, hs.combine(&c)))?;
                    let criterion = lib(tri.classify_projective_rep(&t))?.holds();
                    let module = tri.to_module(&t);
                    let oracle = simples.iter().all(|s| ext1(&module, s) == 0);
                    ensure(criterion == oracle, || {
                        format!("{}: projective criterion {criterion} against oracle {oracle} on {t:?}", fix.name)
                    })?;
                    reps += 1;
                    projectives += oracle as usize;
                }
                let hom = lib(m.hom_mx(x))?.module;
                let hs = lib(hom_space(y, &hom))?;
                for c in all_vectors(p, hs.dim()) {
                    let t = lib(tri.triple_h(x, y, hs.combine(&c)))?;
                    let criterion = lib(tri.classify_injective_reph(&t))?.holds();
                    let module = lib(tri.h_to_module(&t))?;
                    let oracle = simples.iter().all(|s| ext1(s, &module) == 0);
                    ensure(criterion == oracle, || {
                        format!("{}: injective criterion {criterion} against oracle {oracle} on {t:?}", fix.name)
                    })?;
                    rephs += 1;
                    injectives += oracle as usize;
                }
            }
        }
        lines.push(format!(
            "{}: {reps} triples ({projectives} projective), {rephs} hom-form triples ({injectives} injective)",
            fix.name
        ));
    }
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------------------
// 2. Pushouts, pullbacks and the snake lemma.

fn rank(m: &Matrix) -> usize {
    m.rank()
}

/// `[b g]` onto `D` with kernel the image of `(f, -a)`.
fn oracle_pushout(sq: &CommSquare) -> bool {
    let bg = Matrix::hstack(&[&sq.b.matrix, &sq.g.matrix]);
    let fa = Matrix::vstack(&[&sq.f.matrix, &sq.a.matrix.neg()]);
    rank(&bg) == bg.rows() && rank(&bg) + rank(&fa) == bg.cols()
}

/// `(f, a)` injective with image the kernel of `[b -g]`.
fn oracle_pullback(sq: &CommSquare) -> bool {
    let fa = Matrix::vstack(&[&sq.f.matrix, &sq.a.matrix]);
    let bg = Matrix::hstack(&[&sq.b.matrix, &sq.g.matrix.neg()]);
    rank(&fa) == fa.cols() && rank(&fa) + rank(&bg) == bg.cols()
}

/// `(injective, surjective)` of the four comparison maps, in the order
/// `Ker a -> Ker b`, `Ker f -> Ker g`, `Coker a -> Coker b`,
/// `Coker f -> Coker g`, from ranks alone.
fn oracle_comparisons(sq: &CommSquare) -> [(bool, bool); 4] {
    let on_kernels = |u: &Matrix, v: &Matrix, w: &Matrix| {
        // Ker u -> Ker v induced by w.
        let k = u.kernel();
        let r = if k.dim() == 0 { 0 } else { rank(&w.mul(&k.basis_columns())) };
        (r == k.dim(), r == v.kernel().dim())
    };
    let on_cokernels = |u: &Matrix, v: &Matrix, w: &Matrix| {
        // Coker u -> Coker v induced by w: image has dim rank[w v] - rank v.
        let r = rank(&Matrix::hstack(&[w, v])) - rank(v);
        (r == u.rows() - rank(u), r == v.rows() - rank(v))
    };
    let (a, f, b, g) = (&sq.a.matrix, &sq.f.matrix, &sq.b.matrix, &sq.g.matrix);
    [on_kernels(a, b, f), on_kernels(f, g, a), on_cokernels(a, b, g), on_cokernels(f, g, b)]
}

/// The comparisons forced on pullbacks and pushouts.
fn oracle_conclusions(sq: &CommSquare) -> bool {
    let [ka, kf, ca, cf] = oracle_comparisons(sq);
    let iso = |(i, s): (bool, bool)| i && s;
    let (pb, po) = (oracle_pullback(sq), oracle_pushout(sq));
    let pb_ok = !pb || (iso(ka) && iso(kf) && ca.0 && cf.0 && po == (iso(ca) || iso(cf)));
    let po_ok = !po || (iso(ca) && iso(cf) && ka.1 && kf.1 && pb == (iso(ka) || iso(kf)));
    pb_ok && po_ok
}

fn check_square(sq: &CommSquare, expect_pb: bool, expect_po: bool, what: &str) -> Result<(), String> {
    let (pb, po) = (oracle_pullback(sq), oracle_pushout(sq));
    ensure(sq.commutes(), || format!("{what}: square does not commute"))?;
    ensure(pb >= expect_pb && po >= expect_po, || format!("{what}: oracle pullback {pb}, pushout {po}"))?;
    ensure(sq.is_pullback() == pb && sq.is_pushout() == po, || format!("{what}: library disagrees with rank oracle"))?;
    ensure(oracle_conclusions(sq), || format!("{what}: a comparison conclusion fails"))?;
    let lib_ok = lib(square_conclusions(sq))?.iter().all(|c| c.holds);
    ensure(lib_ok, || format!("{what}: library conclusions fail"))
}

fn diagram_trial(algebra: &AlgebraRef, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 3;
    // Pushout of a span and pullback of a cospan.
    let a0 = random::module(algebra, dim, &mut rng);
    let (b0, c0) = (random::module(algebra, dim, &mut rng), random::module(algebra, dim, &mut rng));
    let (a, f) = (random::hom(&a0, &c0, &mut rng), random::hom(&a0, &b0, &mut rng));
    check_square(&lib(pushout(&a, &f))?, false, true, "pushout")?;
    let d0 = random::module(algebra, dim, &mut rng);
    let (b, g) = (random::hom(&b0, &d0, &mut rng), random::hom(&c0, &d0, &mut rng));
    check_square(&lib(pullback(&b, &g))?, true, false, "pullback")?;

    // Equal kernels: pull an epimorphism back along a random map.
    let epi = random::short_exact(algebra, dim, &mut rng).g;
    let b = random::hom(&b0, &epi.target, &mut rng);
    let sq = lib(pullback(&b, &epi))?;
    check_square(&sq, true, true, "pullback of an epimorphism")?;
    ensure(lib(verify_pushout_pullback(&sq))?.verdict == SquareVerdict::Pass, || "equal kernels square not passed".into())?;

    // Equal cokernels: push a monomorphism out along a random map.
    let mono = random::short_exact(algebra, dim, &mut rng).f;
    let a = random::hom(&mono.source, &c0, &mut rng);
    let sq = lib(pushout(&a, &mono))?;
    check_square(&sq, true, true, "pushout of a monomorphism")?;
    ensure(lib(verify_pushout_pullback(&sq))?.verdict == SquareVerdict::Pass, || "equal cokernels square not passed".into())?;

    // Arbitrary commuting square: library and oracle agree.
    let sq = random::square(algebra, dim, &mut rng);
    check_square(&sq, false, false, "random square")?;

    // Snake: exact, and the six dimensions have zero alternating sum.
    let input = random::snake_input(algebra, dim, &mut rng);
    let r = lib(snake(&input))?;
    ensure(r.exact(), || format!("snake not exact: {:?}", r.exact_at))?;
    let kers = [&input.alpha, &input.beta, &input.gamma].map(|h| h.matrix.kernel().dim());
    let cokers = [&input.alpha, &input.beta, &input.gamma].map(|h| h.matrix.rows() - h.matrix.rank());
    let euler = kers[0] as i64 - kers[1] as i64 + kers[2] as i64 - cokers[0] as i64 + cokers[1] as i64 - cokers[2] as i64;
    ensure(euler == 0, || format!("snake dimensions {kers:?} {cokers:?}"))?;
    ensure(
        r.delta.source.dim() == kers[2] && r.delta.target.dim() == cokers[0],
        || "connecting map has the wrong ends".into(),
    )
}

fn criterion_2() -> Outcome {
    let algebras = [
        ("D2/F2", Algebra::truncated_polynomial(2, 2)),
        ("UT2/F2", Algebra::upper_triangular(2, 2)),
        ("D2/F3", Algebra::truncated_polynomial(3, 2)),
        ("UT2/F3", Algebra::upper_triangular(3, 2)),
        ("D3/F3", Algebra::truncated_polynomial(3, 3)),
    ];
    let algebras: Vec<(&str, AlgebraRef)> = algebras.into_iter().map(|(n, a)| (n, a.expect("algebra"))).collect();
    let trials = 500u64;
    (0..trials).into_par_iter().try_for_each(|t| {
        let (name, a) = &algebras[t as usize % algebras.len()];
        diagram_trial(a, 0xD1A6_0000 + t).map_err(|e| format!("trial {t} over {name}: {e}"))
    })?;
    Ok(format!("{trials} trials over {} algebras", algebras.len()))
}

// ---------------------------------------------------------------------------
// 3. Closure of E(X, M, Y) under extensions.

fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    for fix in [fix_ut2(), fix_dual(), fix_frob()] {
        let cat = lib(fix.category(Side::E))?;
        let tri = &fix.tri;
        let entries = cat.entries();
        let pairs: Vec<(usize, usize)> = (0..entries.len())
            .flat_map(|i| (0..entries.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let (a, b) = (&entries[i].triple, &entries[j].triple);
                a.x.dim() + b.x.dim() <= fix.caps.0 && a.y.dim() + b.y.dim() <= fix.caps.1
            })
            .collect();
        let budget = fix.budgets.ses;
        let counts = pairs
            .par_iter()
            .map(|&(i, j)| -> Result<(usize, usize), String> {
                // 0 -> U_i -> W -> U_j -> 0.
                let ext = lib(extensions(&entries[j].module, &entries[i].module))?;
                let seqs = lib(ext.all(budget))?;
                let mut undecided = 0;
                for s in &seqs {
                    match in_e(tri, s.middle(), &fix.x, &fix.y) {
                        Some(true) => {}
                        Some(false) => return Err(format!("{}: an extension of {j} by {i} leaves E", fix.name)),
                        None => undecided += 1,
                    }
                }
                Ok((seqs.len(), undecided))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        ensure(counts.1 == 0, || format!("{}: {} middles undecided", fix.name, counts.1))?;
        lines.push(format!("{}: {} pairs, {} extensions", fix.name, pairs.len(), counts.0));
    }
    Ok(format!("0 counterexamples; {}", lines.join(", ")))
}

// ---------------------------------------------------------------------------
// 4. Enough projectives on the dual fixture.

fn criterion_4() -> Outcome {
    let fix = fix_dual();
    let an = lib(fix.analysis(Side::E))?;
    let tri = &fix.tri;
    let entries = an.cat.entries();
    let mut middles = Vec::new();
    for i in 0..entries.len() {
        let c = lib(enough_projectives_cover(&an, i))?;
        let (f, g) = (&c.seq.f, &c.seq.g);
        let exact = f.is_injective()
            && g.is_surjective()
            && g.matrix.mul(&f.matrix).is_zero()
            && f.source.dim() + g.target.dim() == g.source.dim();
        ensure(exact, || format!("object {i}: sequence not exact"))?;
        ensure(g.target.dim() == entries[i].module.dim(), || format!("object {i}: wrong end term"))?;
        ensure(in_e(tri, c.seq.left(), &fix.x, &fix.y) == Some(true), || format!("object {i}: kernel not in E"))?;
        let w = c.seq.middle();
        ensure(in_e(tri, w, &fix.x, &fix.y) == Some(true), || format!("object {i}: middle not in E"))?;
        let projective = entries.iter().all(|z| ext1(w, &z.module) == 0);
        ensure(projective, || format!("object {i}: middle has an extension by an inventory object"))?;
        middles.push(w.dim());
    }
    Ok(format!("{} objects covered, middle dimensions {:?}", entries.len(), middles))
}

// ---------------------------------------------------------------------------
// 5. Co-resolving triple categories and the obstructions.

fn criterion_5() -> Outcome {
    for fix in [fix_dual(), fix_frob()] {
        for side in [Side::E, Side::M] {
            let owned;
            let an = if fix.name == "frob" {
                frob(side)
            } else {
                owned = lib(fix.analysis(side))?;
                &owned
            };
            let r = lib(triple_resolving(an))?;
            ensure(r.criterion == Verdict::Pass && r.direct.verdict == Verdict::Pass, || {
                format!("{} {side:?}: criterion {:?}, direct {:?}", fix.name, r.criterion, r.direct.verdict)
            })?;
        }
    }
    let ext = ext_obstruction();
    let clause = lib(is_coresolving(&ext.x, Some(ext.bimodule())))?.failing_clause();
    ensure(clause.as_deref() == Some(EXT_CLAUSE), || format!("ext-obstruction names {clause:?}"))?;
    let tor = tor_obstruction();
    let clause = lib(is_resolving(&tor.y, Some(tor.bimodule())))?.failing_clause();
    ensure(clause.as_deref() == Some(TOR_CLAUSE), || format!("tor-obstruction names {clause:?}"))?;
    let mi = missing_injective();
    let clause = lib(is_coresolving(&mi.y, None))?.failing_clause();
    ensure(clause.as_deref() == Some("ContainsInjectives"), || format!("missing-injective names {clause:?}"))?;
    Ok("dual and frob pass on both sides; obstructions name the Ext, Tor and injectives clauses".into())
}

// ---------------------------------------------------------------------------
// 6. Frobenius equivalences.

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for fix in [fix_ut2(), fix_dual(), fix_frob(), ut2_negative()] {
        for side in [Side::E, Side::M] {
            let owned;
            let an = if fix.name == "frob" {
                frob(side)
            } else {
                owned = lib(fix.analysis(side))?;
                &owned
            };
            let r = lib(frobenius_check(an))?;
            if r.hypotheses == Verdict::Pass {
                ensure(r.consistent == Some(true), || {
                    format!("{} {side:?}: statements {:?} disagree", fix.name, r.statements)
                })?;
            }
            lines.push(format!("{} {side:?} {:?}", fix.name, r.statements[0]));
        }
    }
    let frob_e = lib(frobenius_check(frob(Side::E)))?.verdict;
    let frob_m = lib(frobenius_check(frob(Side::M)))?.verdict;
    ensure(frob_e == Verdict::Pass && frob_m == Verdict::Pass, || format!("frob: {frob_e:?}, {frob_m:?}"))?;
    let neg = lib(ut2_negative().analysis(Side::E))?;
    let neg_v = lib(frobenius_check(&neg))?.statements[0];
    ensure(neg_v == Verdict::Fail, || format!("ut2-negative E is {neg_v:?}"))?;
    Ok(lines.join(", "))
}

// ---------------------------------------------------------------------------
// 7. Adjoint pairs on the stable categories.

fn criterion_7() -> Outcome {
    let mut names = Vec::new();
    for side in [Side::E, Side::M] {
        for r in lib(adjoint_pairs(frob(side), false))? {
            ensure(
                r.verdict == Verdict::Pass && r.bijective && r.natural && r.triangles && r.stable == Some(true),
                || format!("{side:?} {:?}: {:?} {:?}", r.pair, r.verdict, r.witnesses),
            )?;
            names.push(format!("({:?}, {:?})", r.pair.left, r.pair.right));
        }
    }
    Ok(format!("{} pairs: {}", names.len(), names.join(" ")))
}

// ---------------------------------------------------------------------------
// 8. Recollements.

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for side in [Side::E, Side::M] {
        let r = lib(verify_recollement(frob(side)))?;
        let ff = r.fully_faithful.iter().fold(Verdict::Pass, |v, c| v.and(c.verdict));
        let tor = r.torsion.iter().fold(Verdict::Pass, |v, c| v.and(c.verdict));
        let image = r.image.as_ref().map(|c| c.verdict);
        let audit = r.audit.as_ref().map(|a| (a.verdict, a.mismatches, a.rows.len()));
        let line = format!("{side:?}: (a) {ff:?} (b) {image:?} (c) {tor:?} (d) {audit:?}");
        if r.verdict != Verdict::Pass {
            failures.push(line.clone());
        }
        lines.push(line);
    }
    if failures.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

// ---------------------------------------------------------------------------
// 9. Inclusion in the Ext and Tor orthogonals.

fn criterion_9() -> Outcome {
    let fixtures =
        [fix_ut2(), fix_dual(), fix_frob(), ut2_negative(), ext_obstruction(), tor_obstruction(), missing_injective()];
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for fix in &fixtures {
        let m = fix.bimodule();
        if lib(is_coresolving(&fix.x, Some(m)))?.verdict == Verdict::Pass {
            let imax = Bimodule::default_imax(fix.x.algebra());
            let left = m.left_module();
            let oracle = fix.x.members().iter().all(|x| ext_dims(&left, x, imax).iter().all(|&d| d == 0));
            let v = lib(perp_inclusion(m, &fix.x, PerpKind::X))?.verdict;
            ensure(oracle && v == Verdict::Pass, || format!("{}: X oracle {oracle}, library {v:?}", fix.name))?;
            xs.push(fix.name.clone());
        }
        if lib(is_resolving(&fix.y, Some(m)))?.verdict == Verdict::Pass {
            let imax = Bimodule::default_imax(fix.y.algebra());
            // Tor_i^B(M, Y) is dual to Ext^i_B(Y, DM).
            let dm = dual_of_right(m);
            let oracle = fix.y.members().iter().all(|y| ext_dims(y, &dm, imax).iter().all(|&d| d == 0));
            let v = lib(perp_inclusion(m, &fix.y, PerpKind::Y))?.verdict;
            ensure(oracle && v == Verdict::Pass, || format!("{}: Y oracle {oracle}, library {v:?}", fix.name))?;
            ys.push(fix.name.clone());
        }
    }
    ensure(!xs.is_empty() && !ys.is_empty(), || "no fixture exercised".into())?;
    Ok(format!("X side: {}; Y side: {}", xs.join(", "), ys.join(", ")))
}

// ---------------------------------------------------------------------------
// 10. Reproducible reports.

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn criterion_10() -> Outcome {
    let suites = [
        ("ut2.json", "ut2-classify"),
        ("dual.json", "dual-checks"),
        ("dual.json", "obstructions"),
        ("negative.json", "ut2-negative"),
        ("diagrams.json", "diagrams"),
        ("frob.json", "frob-recollement"),
    ];
    for (file, suite) in suites {
        let m = lib(load_manifest(shipped(file)))?;
        let first = emit_report(&lib(run_suite(&m, suite, 0))?, Format::Json);
        let second = emit_report(&lib(run_suite(&m, suite, 0))?, Format::Json);
        ensure(first == second, || format!("{suite}: two runs differ"))?;
        let golden = std::fs::read(shipped(&format!("golden/{suite}.json"))).map_err(|e| format!("{suite}: {e}"))?;
        ensure(first == golden, || format!("{suite}: report differs from its golden file"))?;
    }
    Ok(format!("{} suites byte-identical across runs and with their golden files", suites.len()))
}

// ---------------------------------------------------------------------------

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { number: 1, name: "projective and injective triples", limit: Some(Duration::from_secs(10)), run: criterion_1 },
    Criterion { number: 2, name: "pushouts, pullbacks and the snake", limit: Some(Duration::from_secs(60)), run: criterion_2 },
    Criterion { number: 3, name: "E closed under extensions", limit: None, run: criterion_3 },
    Criterion { number: 4, name: "enough projectives", limit: None, run: criterion_4 },
    Criterion { number: 5, name: "co-resolving triples", limit: None, run: criterion_5 },
    Criterion { number: 6, name: "Frobenius equivalences", limit: None, run: criterion_6 },
    Criterion { number: 7, name: "stable adjoint pairs", limit: None, run: criterion_7 },
    Criterion { number: 8, name: "recollements", limit: Some(Duration::from_secs(300)), run: criterion_8 },
    Criterion { number: 9, name: "Ext and Tor orthogonals", limit: None, run: criterion_9 },
    Criterion { number: 10, name: "reproducible reports", limit: None, run: criterion_10 },
];

fn main() -> ExitCode {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for c in CRITERIA.iter().filter(|c| selected.is_empty() || selected.contains(&c.number)) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {tag} {} ({:.1}s): {detail}", c.number, c.name, elapsed.as_secs_f64());
        ran += 1;
        failed += result.is_err() as usize;
    }
    println!("{} of {ran} criteria pass", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
