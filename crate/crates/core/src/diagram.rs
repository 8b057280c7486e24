//! Pushouts, pullbacks, the snake lemma, split sequences and standard
//! triangles for module maps.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{
    hom_space, is_injective, kernel_cokernel, AlgebraRef, KerCoker, Module, ModuleHom,
    ShortExactSeq,
};
use crate::error::{Error, Result};
use crate::linalg::{solve, ColumnBasis, Matrix};

/// A commutative square
///
/// ```text
///   A --f--> B
///   |a       |b
///   v        v
///   C --g--> D
/// ```
#[derive(Clone, Debug)]
pub struct CommSquare {
    pub a: ModuleHom,
    pub f: ModuleHom,
    pub b: ModuleHom,
    pub g: ModuleHom,
}

impl CommSquare {
    pub fn new(a: ModuleHom, f: ModuleHom, b: ModuleHom, g: ModuleHom) -> Result<Self> {
        let sq = CommSquare { a, f, b, g };
        if sq.a.source != sq.f.source
            || sq.a.target != sq.g.source
            || sq.f.target != sq.b.source
            || sq.b.target != sq.g.target
        {
            return Err(Error::DimensionMismatch("square corners do not match".into()));
        }
        if !sq.commutes() {
            return Err(Error::Invalid("square does not commute".into()));
        }
        Ok(sq)
    }

    pub fn commutes(&self) -> bool {
        self.b.matrix.mul(&self.f.matrix) == self.g.matrix.mul(&self.a.matrix)
    }

    /// `C + B -> D`, `(c, b') -> g c + b b'`.
    fn sum_map(&self) -> Matrix {
        Matrix::hstack(&[&self.g.matrix, &self.b.matrix])
    }

    /// `A -> C + B`, `v -> (a v, -f v)`.
    fn diff_map(&self) -> Matrix {
        Matrix::vstack(&[&self.a.matrix, &self.f.matrix.neg()])
    }

    /// `A -> C + B -> D -> 0` is exact.
    pub fn is_pushout(&self) -> bool {
        let s = self.sum_map();
        let d = self.diff_map();
        s.is_surjective() && s.mul(&d).is_zero() && d.rank() + s.rank() == s.cols()
    }

    /// `0 -> A -> C + B -> D` is exact.
    pub fn is_pullback(&self) -> bool {
        let s = self.sum_map();
        let d = self.diff_map();
        d.is_injective() && s.mul(&d).is_zero() && d.rank() + s.rank() == s.cols()
    }

    /// The unique map out of the pushout corner `D` compatible with a
    /// competing pair `(u: C -> E, v: B -> E)` with `u a = v f`.
    pub fn pushout_factor(&self, u: &ModuleHom, v: &ModuleHom) -> Option<ModuleHom> {
        let hs = hom_space(&self.g.target, &u.target).ok()?;
        let target = Matrix::hstack(&[&u.matrix, &v.matrix]);
        let sum = self.sum_map();
        let m = hs.solve_linear(|h| h.mul(&sum), &target)?;
        ModuleHom::new(&self.g.target, &u.target, m).ok()
    }

    /// The unique map into the pullback corner `A` from a competing pair
    /// `(u: E -> C, v: E -> B)` with `g u = b v`.
    pub fn pullback_factor(&self, u: &ModuleHom, v: &ModuleHom) -> Option<ModuleHom> {
        let hs = hom_space(&u.source, &self.a.source).ok()?;
        let target = Matrix::vstack(&[&u.matrix, &v.matrix]);
        let pair = Matrix::vstack(&[&self.a.matrix, &self.f.matrix]);
        let m = hs.solve_linear(|h| pair.mul(h), &target)?;
        ModuleHom::new(&u.source, &self.a.source, m).ok()
    }
}

/// `D = (C + B) / {(a v, -f v)}` with the two canonical maps into it.
pub fn pushout(a: &ModuleHom, f: &ModuleHom) -> Result<CommSquare> {
    if a.source != f.source {
        return Err(Error::DimensionMismatch("pushout of maps with different sources".into()));
    }
    let c = &a.target;
    let b = &f.target;
    let sum = c.direct_sum(b);
    let rel = ModuleHom::new(&f.source, &sum, Matrix::vstack(&[&a.matrix, &f.matrix.neg()]))?;
    let proj = kernel_cokernel(&rel)?.projection;
    let d = proj.target.clone();
    let (nc, nb) = (c.dim(), b.dim());
    let g = ModuleHom::new(c, &d, proj.matrix.submatrix(0, 0, d.dim(), nc))?;
    let bb = ModuleHom::new(b, &d, proj.matrix.submatrix(0, nc, d.dim(), nb))?;
    CommSquare::new(a.clone(), f.clone(), bb, g)
}

/// `A = {(c, b') : g c = b b'}` with the two projections.
pub fn pullback(b: &ModuleHom, g: &ModuleHom) -> Result<CommSquare> {
    if b.target != g.target {
        return Err(Error::DimensionMismatch("pullback of maps with different targets".into()));
    }
    let c = &g.source;
    let bm = &b.source;
    let sum = c.direct_sum(bm);
    let map = ModuleHom::new(&sum, &g.target, Matrix::hstack(&[&g.matrix, &b.matrix.neg()]))?;
    let incl = kernel_cokernel(&map)?.inclusion;
    let a_mod = incl.source.clone();
    let (nc, nb) = (c.dim(), bm.dim());
    let a = ModuleHom::new(&a_mod, c, incl.matrix.submatrix(0, 0, nc, a_mod.dim()))?;
    let f = ModuleHom::new(&a_mod, bm, incl.matrix.submatrix(nc, 0, nb, a_mod.dim()))?;
    CommSquare::new(a, f, b.clone(), g.clone())
}

/// Injectivity and surjectivity of an induced map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Induced {
    pub injective: bool,
    pub surjective: bool,
}

impl Induced {
    fn of(m: &Matrix) -> Self {
        Induced {
            injective: m.is_injective(),
            surjective: m.is_surjective(),
        }
    }

    pub fn iso(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Restriction of `map: X -> Y` to kernels, in kernel coordinates.
pub fn induced_on_kernels(source: &KerCoker, target: &KerCoker, map: &ModuleHom) -> Result<ModuleHom> {
    let image = map.matrix.mul(&source.inclusion.matrix);
    let k = target.kernel();
    let m = if k.dim() == 0 {
        Matrix::zeros(map.matrix.modulus(), 0, source.kernel().dim())
    } else {
        ColumnBasis::new(target.inclusion.matrix.clone())?
            .coords(&image)
            .ok_or_else(|| Error::Invalid("map does not send kernel into kernel".into()))?
    };
    ModuleHom::new(source.kernel(), k, m)
}

/// Map induced by `map: X -> Y` on cokernels.
pub fn induced_on_cokernels(source: &KerCoker, target: &KerCoker, map: &ModuleHom) -> Result<ModuleHom> {
    let rhs = target.projection.matrix.mul(&map.matrix);
    // X pi_s = rhs, solved as pi_s^T X^T = rhs^T
    let sol = solve(&source.projection.matrix.transpose(), &rhs.transpose())?
        .ok_or_else(|| Error::Invalid("map does not descend to cokernels".into()))?;
    ModuleHom::new(source.cokernel(), target.cokernel(), sol.particular.transpose())
}

/// The four induced maps of a square:
/// `f~: Ker a -> Ker b`, `a~: Ker f -> Ker g`, `g~: Coker a -> Coker b`,
/// `b~: Coker f -> Coker g`.
#[derive(Clone, Debug)]
pub struct InducedMaps {
    pub f_tilde: ModuleHom,
    pub a_tilde: ModuleHom,
    pub g_tilde: ModuleHom,
    pub b_tilde: ModuleHom,
}

pub fn induced_maps(sq: &CommSquare) -> Result<InducedMaps> {
    let ka = kernel_cokernel(&sq.a)?;
    let kb = kernel_cokernel(&sq.b)?;
    let kf = kernel_cokernel(&sq.f)?;
    let kg = kernel_cokernel(&sq.g)?;
    Ok(InducedMaps {
        f_tilde: induced_on_kernels(&ka, &kb, &sq.f)?,
        a_tilde: induced_on_kernels(&kf, &kg, &sq.a)?,
        g_tilde: induced_on_cokernels(&ka, &kb, &sq.g)?,
        b_tilde: induced_on_cokernels(&kf, &kg, &sq.b)?,
    })
}

/// One named conclusion and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub name: String,
    pub holds: bool,
}

fn conclusion(name: &str, holds: bool) -> Conclusion {
    Conclusion {
        name: name.to_string(),
        holds,
    }
}

/// Checks the kernel/cokernel comparisons that pullback and pushout
/// squares must satisfy; empty when the square is neither.
pub fn square_conclusions(sq: &CommSquare) -> Result<Vec<Conclusion>> {
    let ind = induced_maps(sq)?;
    let f = Induced::of(&ind.f_tilde.matrix);
    let a = Induced::of(&ind.a_tilde.matrix);
    let g = Induced::of(&ind.g_tilde.matrix);
    let b = Induced::of(&ind.b_tilde.matrix);
    let (pb, po) = (sq.is_pullback(), sq.is_pushout());
    let mut out = Vec::new();
    if pb {
        out.push(conclusion("pullback: Ker a -> Ker b is an isomorphism", f.iso()));
        out.push(conclusion("pullback: Ker f -> Ker g is an isomorphism", a.iso()));
        out.push(conclusion("pullback: Coker a -> Coker b is injective", g.injective));
        out.push(conclusion("pullback: Coker f -> Coker g is injective", b.injective));
        out.push(conclusion(
            "pullback: pushout iff a cokernel comparison is an isomorphism",
            po == (g.iso() || b.iso()),
        ));
    }
    if po {
        out.push(conclusion("pushout: Coker a -> Coker b is an isomorphism", g.iso()));
        out.push(conclusion("pushout: Coker f -> Coker g is an isomorphism", b.iso()));
        out.push(conclusion("pushout: Ker a -> Ker b is surjective", f.surjective));
        out.push(conclusion("pushout: Ker f -> Ker g is surjective", a.surjective));
        out.push(conclusion(
            "pushout: pullback iff a kernel comparison is an isomorphism",
            pb == (f.iso() || a.iso()),
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquareVerdict {
    Pass,
    Fail,
    NoConclusion,
}

/// Report of [`verify_pushout_pullback`].
#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    /// `f`, `g` epi and `Ker f -> Ker g` an isomorphism.
    pub equal_kernels_shape: bool,
    /// `f`, `g` mono and `Coker f -> Coker g` an isomorphism.
    pub equal_cokernels_shape: bool,
    pub is_pullback: bool,
    pub is_pushout: bool,
    pub conclusions: Vec<Conclusion>,
    pub verdict: SquareVerdict,
}

/// When the rows extend to exact sequences with a common end term, the
/// square must be both a pullback and a pushout; all applicable
/// kernel/cokernel conclusions are checked as well.
pub fn verify_pushout_pullback(sq: &CommSquare) -> Result<SquareReport> {
    if !sq.commutes() {
        return Err(Error::Invalid("square does not commute".into()));
    }
    let ind = induced_maps(sq)?;
    let equal_kernels_shape =
        sq.f.is_surjective() && sq.g.is_surjective() && ind.a_tilde.matrix.is_invertible();
    let equal_cokernels_shape =
        sq.f.is_injective() && sq.g.is_injective() && ind.b_tilde.matrix.is_invertible();
    let (is_pullback, is_pushout) = (sq.is_pullback(), sq.is_pushout());
    let conclusions = square_conclusions(sq)?;
    let shaped = equal_kernels_shape || equal_cokernels_shape;
    let all_hold = conclusions.iter().all(|c| c.holds);
    let verdict = if shaped && !(is_pullback && is_pushout) || !all_hold {
        SquareVerdict::Fail
    } else if shaped || !conclusions.is_empty() {
        SquareVerdict::Pass
    } else {
        SquareVerdict::NoConclusion
    };
    Ok(SquareReport {
        equal_kernels_shape,
        equal_cokernels_shape,
        is_pullback,
        is_pushout,
        conclusions,
        verdict,
    })
}

/// Two short exact rows and three vertical maps making both squares
/// commute.
#[derive(Clone, Debug)]
pub struct SnakeInput {
    pub top: ShortExactSeq,
    pub bottom: ShortExactSeq,
    pub alpha: ModuleHom,
    pub beta: ModuleHom,
    pub gamma: ModuleHom,
}

/// The connecting map and exactness of
/// `0 -> Ker al -> Ker be -> Ker ga -> Coker al -> Coker be -> Coker ga -> 0`
/// at each of its six nodes.
#[derive(Clone, Debug)]
pub struct SnakeReport {
    pub delta: ModuleHom,
    pub exact_at: [bool; 6],
}

impl SnakeReport {
    pub fn exact(&self) -> bool {
        self.exact_at.iter().all(|&e| e)
    }
}

/// Exactness of `x --u--> y --v--> z` at `y`, as matrices.
fn exact_at(u: &Matrix, v: &Matrix) -> bool {
    v.mul(u).is_zero() && u.rank() + v.rank() == v.cols()
}

pub fn snake(input: &SnakeInput) -> Result<SnakeReport> {
    let SnakeInput {
        top,
        bottom,
        alpha,
        beta,
        gamma,
    } = input;
    let checks = [
        (alpha.source == *top.left(), "alpha does not start at the top left term"),
        (beta.source == *top.middle(), "beta does not start at the top middle term"),
        (gamma.source == *top.right(), "gamma does not start at the top right term"),
        (alpha.target == *bottom.left(), "alpha does not end at the bottom left term"),
        (beta.target == *bottom.middle(), "beta does not end at the bottom middle term"),
        (gamma.target == *bottom.right(), "gamma does not end at the bottom right term"),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::Invalid((*msg).into()));
    }
    if beta.matrix.mul(&top.f.matrix) != bottom.f.matrix.mul(&alpha.matrix) {
        return Err(Error::Invalid("left square does not commute".into()));
    }
    if gamma.matrix.mul(&top.g.matrix) != bottom.g.matrix.mul(&beta.matrix) {
        return Err(Error::Invalid("right square does not commute".into()));
    }
    let ka = kernel_cokernel(alpha)?;
    let kb = kernel_cokernel(beta)?;
    let kc = kernel_cokernel(gamma)?;
    let k1 = induced_on_kernels(&ka, &kb, &top.f)?;
    let k2 = induced_on_kernels(&kb, &kc, &top.g)?;
    let c1 = induced_on_cokernels(&ka, &kb, &bottom.f)?;
    let c2 = induced_on_cokernels(&kb, &kc, &bottom.g)?;
    // zig-zag: lift along the top epi, push down by beta, pull back along
    // the bottom mono, project to Coker alpha
    let kernel_vectors = &kc.inclusion.matrix;
    let lift = solve(&top.g.matrix, kernel_vectors)?
        .ok_or_else(|| Error::Invalid("top row is not surjective".into()))?
        .particular;
    let down = beta.matrix.mul(&lift);
    let back = solve(&bottom.f.matrix, &down)?
        .ok_or_else(|| Error::Invalid("bottom row is not exact at the middle".into()))?
        .particular;
    let delta = ModuleHom::new(kc.kernel(), ka.cokernel(), ka.projection.matrix.mul(&back))?;
    let p = alpha.matrix.modulus();
    let zero_in = |n: usize| Matrix::zeros(p, n, 0);
    let zero_out = |n: usize| Matrix::zeros(p, 0, n);
    let exact = [
        exact_at(&zero_in(ka.kernel().dim()), &k1.matrix),
        exact_at(&k1.matrix, &k2.matrix),
        exact_at(&k2.matrix, &delta.matrix),
        exact_at(&delta.matrix, &c1.matrix),
        exact_at(&c1.matrix, &c2.matrix),
        exact_at(&c2.matrix, &zero_out(kc.cokernel().dim())),
    ];
    Ok(SnakeReport {
        delta,
        exact_at: exact,
    })
}

/// A section of the epi when the sequence splits.
pub fn is_split(s: &ShortExactSeq) -> Result<Option<ModuleHom>> {
    let hs = hom_space(s.right(), s.middle())?;
    let id = Matrix::identity(s.right().modulus(), s.right().dim());
    Ok(hs
        .solve_linear(|h| s.g.matrix.mul(h), &id)
        .map(|m| ModuleHom::new(s.right(), s.middle(), m).expect("section")))
}

/// The completed diagram
///
/// ```text
/// 0 -> X --f--> Y --g--> Z -> 0
///      ||       |middle  |h
/// 0 -> X -emb-> I -pi--> TX -> 0
/// ```
#[derive(Clone, Debug)]
pub struct StandardTriangle {
    pub xi: ShortExactSeq,
    pub embedding: ModuleHom,
    pub cokernel: ModuleHom,
    pub middle: ModuleHom,
    pub h: ModuleHom,
}

impl StandardTriangle {
    pub fn commutes(&self) -> bool {
        self.middle.matrix.mul(&self.xi.f.matrix) == self.embedding.matrix
            && self.h.matrix.mul(&self.xi.g.matrix) == self.cokernel.matrix.mul(&self.middle.matrix)
    }
}

/// Completes the diagram, requiring the embedding target to be an
/// injective module.
pub fn standard_triangle(xi: &ShortExactSeq, emb: &ModuleHom) -> Result<StandardTriangle> {
    if !is_injective(&emb.target)? {
        return Err(Error::Invalid("embedding target is not injective".into()));
    }
    complete_standard_triangle(xi, emb)
}

/// Completes the diagram for an embedding into an object that is
/// injective relative to the sequence `xi` (checked by the lift existing).
pub fn complete_standard_triangle(xi: &ShortExactSeq, emb: &ModuleHom) -> Result<StandardTriangle> {
    if emb.source != *xi.left() || !emb.is_injective() {
        return Err(Error::Invalid("embedding is not a mono out of the first term".into()));
    }
    let hs = hom_space(xi.middle(), &emb.target)?;
    let middle = hs
        .solve_linear(|v| v.mul(&xi.f.matrix), &emb.matrix)
        .ok_or_else(|| Error::Invalid("embedding does not extend along the first map".into()))?;
    let middle = ModuleHom::new(xi.middle(), &emb.target, middle)?;
    let cokernel = kernel_cokernel(emb)?.projection;
    let hz = hom_space(xi.right(), &cokernel.target)?;
    let rhs = cokernel.matrix.mul(&middle.matrix);
    let h = hz
        .solve_linear(|h| h.mul(&xi.g.matrix), &rhs)
        .ok_or_else(|| Error::Invalid("no induced map on cokernels".into()))?;
    let h = ModuleHom::new(xi.right(), &cokernel.target, h)?;
    let t = StandardTriangle {
        xi: xi.clone(),
        embedding: emb.clone(),
        cokernel,
        middle,
        h,
    };
    debug_assert!(t.commutes());
    Ok(t)
}

/// Random modules and maps for property runs.
pub mod random {
    use super::*;

    /// A random invertible matrix.
    pub fn invertible(p: u32, n: usize, rng: &mut impl Rng) -> Matrix {
        loop {
            let m = Matrix::random(p, n, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// A direct sum of random cyclic modules `A / A v`, at most `max_dim`
    /// dimensional, in a random basis.
    pub fn module(algebra: &AlgebraRef, max_dim: usize, rng: &mut impl Rng) -> Module {
        let p = algebra.modulus();
        let regular = Module::regular(algebra);
        let mut parts: Vec<Module> = Vec::new();
        let mut total = 0;
        let target = rng.gen_range(0..=max_dim);
        let mut attempts = 0;
        while total < target && attempts < 16 {
            attempts += 1;
            let v = Matrix::random(p, algebra.dim(), 1, rng);
            let sub = regular.submodule_generated(&v);
            let q = regular.quotient_by(&sub).expect("submodule").target;
            if q.dim() > 0 && total + q.dim() <= target {
                total += q.dim();
                parts.push(q);
            }
        }
        let m = Module::direct_sum_all(algebra, &parts);
        let c = invertible(p, m.dim(), rng);
        m.conjugate(&c).expect("invertible change of basis")
    }

    /// A uniformly random module map.
    pub fn hom(x: &Module, y: &Module, rng: &mut impl Rng) -> ModuleHom {
        let hs = hom_space(x, y).expect("same algebra");
        let p = x.modulus();
        let c: Vec<u32> = (0..hs.dim()).map(|_| rng.gen_range(0..p)).collect();
        ModuleHom::new(x, y, hs.combine(&c)).expect("combination of module maps")
    }

    /// A random short exact sequence: a random submodule of a random module
    /// and its quotient.
    pub fn short_exact(algebra: &AlgebraRef, max_dim: usize, rng: &mut impl Rng) -> ShortExactSeq {
        let y = module(algebra, max_dim, rng);
        let k = rng.gen_range(0..=y.dim().max(1).min(2));
        let v = Matrix::random(algebra.modulus(), y.dim(), k.min(y.dim()), rng);
        let sub = y.submodule_generated(&v);
        let f = y.submodule(&sub).expect("submodule");
        let g = kernel_cokernel(&f).expect("cokernel").projection;
        ShortExactSeq::new(f, g).expect("submodule and quotient")
    }

    /// A random commutative square: random `a`, `f`, `b`, and a `g` solving
    /// `g a = b f` (the zero map always does).
    pub fn square(algebra: &AlgebraRef, max_dim: usize, rng: &mut impl Rng) -> CommSquare {
        let a_mod = module(algebra, max_dim, rng);
        let b_mod = module(algebra, max_dim, rng);
        let c_mod = module(algebra, max_dim, rng);
        let d_mod = module(algebra, max_dim, rng);
        let a = hom(&a_mod, &c_mod, rng);
        let f = hom(&a_mod, &b_mod, rng);
        let b = hom(&b_mod, &d_mod, rng);
        let hs = hom_space(&c_mod, &d_mod).expect("same algebra");
        let bf = b.matrix.mul(&f.matrix);
        let g = match hs.solve_linear(|g| g.mul(&a.matrix), &bf) {
            Some(particular) => {
                // add a random element of the solution space's kernel
                let extra = hom(&c_mod, &d_mod, rng);
                let shifted = particular.add(&extra.matrix);
                if shifted.mul(&a.matrix) == bf {
                    shifted
                } else {
                    particular
                }
            }
            None => {
                let zero_b = ModuleHom::new(&b_mod, &d_mod, Matrix::zeros(algebra.modulus(), d_mod.dim(), b_mod.dim()))
                    .expect("zero map");
                return CommSquare::new(a, f, zero_b, c_mod.zero_map_to(&d_mod))
                    .expect("zero square commutes");
            }
        };
        let g = ModuleHom::new(&c_mod, &d_mod, g).expect("module map");
        CommSquare::new(a, f, b, g).expect("commuting by construction")
    }

    /// Two random short exact rows joined by a random middle map `beta`
    /// with `g' beta f = 0`, and the induced `alpha`, `gamma`.
    pub fn snake_input(algebra: &AlgebraRef, max_dim: usize, rng: &mut impl Rng) -> SnakeInput {
        let top = short_exact(algebra, max_dim, rng);
        let bottom = short_exact(algebra, max_dim, rng);
        let p = algebra.modulus();
        let hs = hom_space(top.middle(), bottom.middle()).expect("same algebra");
        let mut coeffs = vec![0u32; hs.dim()];
        if hs.dim() > 0 {
            let images: Vec<Matrix> = hs
                .basis()
                .iter()
                .map(|h| bottom.g.matrix.mul(h).mul(&top.f.matrix).vectorize())
                .collect();
            let refs: Vec<&Matrix> = images.iter().collect();
            let allowed = Matrix::hstack(&refs).kernel();
            let rows = allowed.basis_rows();
            for r in 0..rows.rows() {
                let s = rng.gen_range(0..p);
                for (c, v) in coeffs.iter_mut().enumerate() {
                    *v = (*v + s * rows.get(r, c)) % p;
                }
            }
        }
        let beta = ModuleHom::new(top.middle(), bottom.middle(), hs.combine(&coeffs)).expect("module map");
        let bf = beta.matrix.mul(&top.f.matrix);
        let alpha = hom_space(top.left(), bottom.left())
            .expect("same algebra")
            .solve_linear(|a| bottom.f.matrix.mul(a), &bf)
            .expect("beta f lands in the image of f'");
        let gb = bottom.g.matrix.mul(&beta.matrix);
        let gamma = hom_space(top.right(), bottom.right())
            .expect("same algebra")
            .solve_linear(|c| c.mul(&top.g.matrix), &gb)
            .expect("g' beta vanishes on the image of f");
        SnakeInput {
            alpha: ModuleHom::new(top.left(), bottom.left(), alpha).expect("module map"),
            gamma: ModuleHom::new(top.right(), bottom.right(), gamma).expect("module map"),
            beta,
            top,
            bottom,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_isomorphic, Algebra};

    fn d2() -> AlgebraRef {
        Algebra::truncated_polynomial(2, 2).unwrap()
    }

    fn simple(a: &AlgebraRef) -> Module {
        Module::new(a, 1, vec![Matrix::identity(2, 1), Matrix::zeros(2, 1, 1)]).unwrap()
    }

    fn socle_sequence(a: &AlgebraRef) -> ShortExactSeq {
        let reg = Module::regular(a);
        let s = simple(a);
        let f = ModuleHom::new(&s, &reg, Matrix::column_vector(2, &[0, 1])).unwrap();
        let g = ModuleHom::new(&reg, &s, Matrix::from_rows(2, &[vec![1, 0]]).unwrap()).unwrap();
        ShortExactSeq::new(f, g).unwrap()
    }

    #[test]
    fn pushout_along_identity_and_from_zero() {
        let a = d2();
        let reg = Module::regular(&a);
        let s = simple(&a);
        let h = hom_space(&reg, &s).unwrap().hom(0);
        // the pushout of an identity is an identity on the opposite side
        let sq = pushout(&reg.identity(), &h).unwrap();
        assert!(sq.b.is_iso());
        assert!(sq.is_pushout());
        let z = Module::zero(&a);
        let sq = pushout(&z.zero_map_to(&reg), &z.zero_map_to(&s)).unwrap();
        assert_eq!(sq.g.target.dim(), 3);
    }

    #[test]
    fn pullback_along_identity_and_to_zero() {
        let a = d2();
        let reg = Module::regular(&a);
        let s = simple(&a);
        let h = hom_space(&reg, &s).unwrap().hom(0);
        let sq = pullback(&s.identity(), &h).unwrap();
        assert!(sq.a.is_iso());
        let z = Module::zero(&a);
        let sq = pullback(&reg.zero_map_to(&z), &s.zero_map_to(&z)).unwrap();
        assert_eq!(sq.a.source.dim(), 3);
        assert!(sq.is_pullback());
    }

    #[test]
    fn pushout_preserves_cokernels() {
        let a = d2();
        let seq = socle_sequence(&a);
        let s = simple(&a);
        let sq = pushout(&seq.f, &s.identity()).unwrap();
        let ca = kernel_cokernel(&sq.a).unwrap();
        let cb = kernel_cokernel(&sq.b).unwrap();
        assert!(is_isomorphic(ca.cokernel(), cb.cokernel(), 1 << 16).unwrap().is_iso());
        let r = verify_pushout_pullback(&sq).unwrap();
        assert_eq!(r.verdict, SquareVerdict::Pass);
    }

    #[test]
    fn nonsplit_and_split_sequences() {
        let a = d2();
        assert!(is_split(&socle_sequence(&a)).unwrap().is_none());
        let s = simple(&a);
        assert!(is_split(&ShortExactSeq::split(&s, &s)).unwrap().is_some());
        let reg = Module::regular(&a);
        assert!(is_split(&ShortExactSeq::split(&s, &reg)).unwrap().is_some());
    }

    #[test]
    fn snake_with_identity_verticals() {
        let a = d2();
        let seq = socle_sequence(&a);
        let input = SnakeInput {
            top: seq.clone(),
            bottom: seq.clone(),
            alpha: seq.left().identity(),
            beta: seq.middle().identity(),
            gamma: seq.right().identity(),
        };
        let r = snake(&input).unwrap();
        assert!(r.delta.is_zero());
        assert!(r.exact());
    }

    #[test]
    fn snake_with_multiplication_by_x() {
        // verticals: 0 on S, x on D2, 0 on S; delta is an isomorphism
        let a = d2();
        let seq = socle_sequence(&a);
        let s = seq.left().clone();
        let input = SnakeInput {
            top: seq.clone(),
            bottom: seq.clone(),
            alpha: s.zero_map_to(&s),
            beta: ModuleHom::new(seq.middle(), seq.middle(), a.left_regular()[1].clone()).unwrap(),
            gamma: s.zero_map_to(&s),
        };
        let r = snake(&input).unwrap();
        assert!(r.exact());
        assert!(r.delta.is_iso());
    }

    #[test]
    fn standard_triangle_of_the_socle_sequence() {
        let a = d2();
        let seq = socle_sequence(&a);
        let t = standard_triangle(&seq, &seq.f).unwrap();
        assert!(t.commutes());
        assert_eq!(t.h.target.dim(), 1);
        assert!(!t.h.is_zero());
        let s = simple(&a);
        assert!(standard_triangle(&seq, &s.identity()).is_err());
    }
}
