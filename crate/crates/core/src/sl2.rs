//! The Lie algebra sl2 as trace-zero 2×2 matrices.
//!
//! Elements keep both their matrix and their coordinates (β, α, γ) with
//! respect to e, h, f, so that y = βe + αh + γf = [[α, β], [γ, −α]].
//!
//! The bilinear form used throughout is ⟨y, z⟩ = tr(yz)/2, which is 1/8 of
//! the Killing form.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};
use crate::krawtchouk::IdentityReport;
use crate::linalg::{commutator, LinalgError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("p = {0} is not allowed (p must differ from 0 and 1)")]
    DegenerateP(Scalar),
    #[error("expected a 2x2 matrix, got order {0}")]
    WrongOrder(usize),
    #[error("matrix is not trace zero")]
    NotTraceless,
    #[error("element is not normalized semisimple (det must be -1)")]
    NotNormalized,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Element {
    mat: Matrix,
    coords: [Scalar; 3],
}

impl Sl2Element {
    pub fn from_coords(beta: Scalar, alpha: Scalar, gamma: Scalar) -> Sl2Element {
        let f = alpha.field();
        let mat = Matrix::from_rows(
            f,
            vec![
                vec![alpha.clone(), beta.clone()],
                vec![gamma.clone(), -&alpha],
            ],
        )
        .expect("coordinates share a field");
        Sl2Element {
            mat,
            coords: [beta, alpha, gamma],
        }
    }

    pub fn from_matrix(m: &Matrix) -> Result<Sl2Element, Sl2Error> {
        if m.n() != 2 {
            return Err(Sl2Error::WrongOrder(m.n()));
        }
        if !m.trace().is_zero() {
            return Err(Sl2Error::NotTraceless);
        }
        Ok(Sl2Element::from_coords(
            m.get(0, 1).clone(),
            m.get(0, 0).clone(),
            m.get(1, 0).clone(),
        ))
    }

    pub fn zero(f: FieldSpec) -> Sl2Element {
        Sl2Element::from_coords(f.zero(), f.zero(), f.zero())
    }

    pub fn e(f: FieldSpec) -> Sl2Element {
        Sl2Element::from_coords(f.one(), f.zero(), f.zero())
    }

    pub fn h(f: FieldSpec) -> Sl2Element {
        Sl2Element::from_coords(f.zero(), f.one(), f.zero())
    }

    pub fn f(f: FieldSpec) -> Sl2Element {
        Sl2Element::from_coords(f.zero(), f.zero(), f.one())
    }

    pub fn field(&self) -> FieldSpec {
        self.mat.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// (β, α, γ).
    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    pub fn beta(&self) -> &Scalar {
        &self.coords[0]
    }

    pub fn alpha(&self) -> &Scalar {
        &self.coords[1]
    }

    pub fn gamma(&self) -> &Scalar {
        &self.coords[2]
    }

    pub fn bracket(&self, other: &Sl2Element) -> Sl2Element {
        let m = commutator(&self.mat, &other.mat).expect("2x2 operands");
        Sl2Element::from_matrix(&m).expect("commutators are traceless")
    }

    pub fn add(&self, other: &Sl2Element) -> Sl2Element {
        Sl2Element::from_matrix(&(&self.mat + &other.mat)).expect("traceless")
    }

    pub fn sub(&self, other: &Sl2Element) -> Sl2Element {
        Sl2Element::from_matrix(&(&self.mat - &other.mat)).expect("traceless")
    }

    pub fn scale(&self, c: &Scalar) -> Sl2Element {
        Sl2Element::from_matrix(&self.mat.scale(c)).expect("traceless")
    }

    /// ‖y‖² = α² + βγ = −det y.
    pub fn norm2(&self) -> Scalar {
        self.alpha() * self.alpha() + self.beta() * self.gamma()
    }

    pub fn det(&self) -> Scalar {
        self.mat.det()
    }

    /// det y = −1, so y has eigenvalues ±1 and is diagonalizable.
    pub fn is_normalized_semisimple(&self) -> bool {
        self.det() == -self.field().one()
    }
}

impl fmt::Display for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})e + ({})h + ({})f",
            self.beta(),
            self.alpha(),
            self.gamma()
        )
    }
}

/// ⟨y, z⟩ = tr(yz)/2.
pub fn killing(y: &Sl2Element, z: &Sl2Element) -> Scalar {
    let two = y.field().from_i64(2);
    (y.matrix() * z.matrix()).trace() / two
}

/// The matrix of ad y with respect to e, h, f.
pub fn ad_matrix(y: &Sl2Element) -> Matrix {
    let f = y.field();
    let two = f.from_i64(2);
    let (b, a, g) = (y.beta(), y.alpha(), y.gamma());
    Matrix::from_rows(
        f,
        vec![
            vec![&two * a, -(&two * b), f.zero()],
            vec![-g, f.zero(), b.clone()],
            vec![f.zero(), &two * g, -(&two * a)],
        ],
    )
    .expect("3x3")
}

/// A pair of normalized semisimple elements and their parameter p, defined by
/// ⟨a, a*⟩ = 1 − 2p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Pair {
    pub a: Sl2Element,
    pub a_star: Sl2Element,
    pub p: Scalar,
}

impl Sl2Pair {
    /// Accepts any normalized pair, including ones whose p is 0 or 1.
    pub fn new(a: Sl2Element, a_star: Sl2Element) -> Result<Sl2Pair, Sl2Error> {
        if !a.is_normalized_semisimple() || !a_star.is_normalized_semisimple() {
            return Err(Sl2Error::NotNormalized);
        }
        let f = a.field();
        let p = (f.one() - killing(&a, &a_star)) / f.from_i64(2);
        Ok(Sl2Pair { a, a_star, p })
    }

    pub fn comm(&self) -> Sl2Element {
        self.a.bracket(&self.a_star)
    }

    /// Gram matrix of ⟨,⟩ on a, a*, [a, a*].
    pub fn gram_table(&self) -> Matrix {
        let elems = [self.a.clone(), self.a_star.clone(), self.comm()];
        gram(&elems, &elems)
    }

    /// [a,[a,a*]] = 4(2p−1)a + 4a* and [a*,[a*,a]] = 4(2p−1)a* + 4a.
    pub fn relations_check(&self) -> bool {
        let f = self.a.field();
        let four = f.from_i64(4);
        let c = &four * (f.from_i64(2) * &self.p - f.one());
        let lhs1 = self.a.bracket(&self.a.bracket(&self.a_star));
        let rhs1 = self.a.scale(&c).add(&self.a_star.scale(&four));
        let lhs2 = self.a_star.bracket(&self.a_star.bracket(&self.a));
        let rhs2 = self.a_star.scale(&c).add(&self.a.scale(&four));
        lhs1 == rhs1 && lhs2 == rhs2
    }

    /// Whether a, a*, [a, a*] are linearly independent.
    pub fn is_generating(&self) -> bool {
        !coordinate_matrix(&[self.a.clone(), self.a_star.clone(), self.comm()])
            .det()
            .is_zero()
    }
}

/// Coordinates of three elements as the columns of a 3×3 matrix.
pub fn coordinate_matrix(elems: &[Sl2Element; 3]) -> Matrix {
    let f = elems[0].field();
    Matrix::from_fn(f, 3, |i, j| elems[j].coords()[i].clone())
}

/// Entry (i, j) is ⟨x_i, y_j⟩.
pub fn gram(xs: &[Sl2Element; 3], ys: &[Sl2Element; 3]) -> Matrix {
    Matrix::from_fn(xs[0].field(), 3, |i, j| killing(&xs[i], &ys[j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    /// e, h, f
    Ehf,
    /// a, a*, [a, a*]
    Pair,
    /// e*, h*, f*
    Starred,
}

impl BasisKind {
    pub const ALL: [BasisKind; 3] = [BasisKind::Ehf, BasisKind::Pair, BasisKind::Starred];

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Ehf => "ehf",
            BasisKind::Pair => "pair",
            BasisKind::Starred => "starred",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Basis {
    pub kind: BasisKind,
    pub elems: [Sl2Element; 3],
}

/// The standard pair for a fixed p together with U2, W, R and the star and
/// dagger maps they define.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Model {
    p: Scalar,
}

impl Sl2Model {
    pub fn new(p: Scalar) -> Result<Sl2Model, Sl2Error> {
        if p.is_zero() || p.is_one() {
            return Err(Sl2Error::DegenerateP(p));
        }
        Ok(Sl2Model { p })
    }

    pub fn p(&self) -> &Scalar {
        &self.p
    }

    pub fn field(&self) -> FieldSpec {
        self.p.field()
    }

    fn int(&self, k: i64) -> Scalar {
        self.field().from_i64(k)
    }

    fn q(&self) -> Scalar {
        self.field().one() - &self.p
    }

    /// a = 2(1−p)e + (1−2p)h + 2pf.
    pub fn a(&self) -> Sl2Element {
        Sl2Element::from_coords(
            self.int(2) * self.q(),
            self.field().one() - self.int(2) * &self.p,
            self.int(2) * &self.p,
        )
    }

    /// a* = h.
    pub fn a_star(&self) -> Sl2Element {
        Sl2Element::h(self.field())
    }

    pub fn pair(&self) -> Sl2Pair {
        Sl2Pair {
            a: self.a(),
            a_star: self.a_star(),
            p: self.p.clone(),
        }
    }

    /// [[1, 1], [1, 1 − 1/p]].
    pub fn u2(&self) -> Matrix {
        let f = self.field();
        let last = f.one() - self.p.inv().expect("p is nonzero");
        Matrix::from_rows(f, vec![vec![f.one(), f.one()], vec![f.one(), last]]).expect("2x2")
    }

    /// diag(1 − p, p).
    pub fn w(&self) -> Matrix {
        Matrix::diag(self.field(), &[self.q(), self.p.clone()])
    }

    /// R = W U2.
    pub fn r(&self) -> Matrix {
        &self.w() * &self.u2()
    }

    pub fn r_inv(&self) -> Matrix {
        self.r()
            .inverse()
            .expect("R is invertible for p not in {0, 1}")
    }

    /// y* = R y R⁻¹.
    pub fn star(&self, y: &Sl2Element) -> Sl2Element {
        let m = &(&self.r() * y.matrix()) * &self.r_inv();
        Sl2Element::from_matrix(&m).expect("conjugation preserves trace")
    }

    /// y† = W yᵗ W⁻¹.
    pub fn dagger(&self, y: &Sl2Element) -> Sl2Element {
        let w = self.w();
        let m = &(&w * &y.matrix().transpose()) * &w.inverse().expect("W is invertible");
        Sl2Element::from_matrix(&m).expect("trace preserved")
    }

    /// e* = (p−1)e + ph + (p²/(1−p))f.
    pub fn e_star(&self) -> Sl2Element {
        let f = self.field();
        Sl2Element::from_coords(
            &self.p - f.one(),
            self.p.clone(),
            &self.p * &self.p / self.q(),
        )
    }

    /// h* = a.
    pub fn h_star(&self) -> Sl2Element {
        self.a()
    }

    /// f* = (1−p)e + (1−p)h + (p−1)f.
    pub fn f_star(&self) -> Sl2Element {
        Sl2Element::from_coords(self.q(), self.q(), -self.q())
    }

    pub fn basis(&self, kind: BasisKind) -> Sl2Basis {
        let f = self.field();
        let elems = match kind {
            BasisKind::Ehf => [Sl2Element::e(f), Sl2Element::h(f), Sl2Element::f(f)],
            BasisKind::Pair => [self.a(), self.a_star(), self.a().bracket(&self.a_star())],
            BasisKind::Starred => [self.e_star(), self.h_star(), self.f_star()],
        };
        Sl2Basis { kind, elems }
    }

    /// Columns are the coordinates of the `to` basis in the `from` basis.
    pub fn transition(&self, from: BasisKind, to: BasisKind) -> Matrix {
        let cx = coordinate_matrix(&self.basis(from).elems);
        let cy = coordinate_matrix(&self.basis(to).elems);
        &cx.inverse().expect("basis") * &cy
    }

    /// Entry (i, j) is ⟨x_i, y_j⟩.
    pub fn gram(&self, rows: BasisKind, cols: BasisKind) -> Matrix {
        gram(&self.basis(rows).elems, &self.basis(cols).elems)
    }

    /// Matrix of ad y in the given basis.
    pub fn ad_in(&self, y: &Sl2Element, kind: BasisKind) -> Matrix {
        let c = coordinate_matrix(&self.basis(kind).elems);
        &(&c.inverse().expect("basis") * &ad_matrix(y)) * &c
    }
}

/// The displayed closed forms of the transition, Gram and ad tables as
/// explicit functions of p.
pub mod closed_form {
    use super::*;

    struct P {
        f: FieldSpec,
        p: Scalar,
    }

    impl P {
        fn new(p: &Scalar) -> P {
            P {
                f: p.field(),
                p: p.clone(),
            }
        }
        fn k(&self, n: i64) -> Scalar {
            self.f.from_i64(n)
        }
        fn r(&self, n: i64, d: i64) -> Scalar {
            self.f
                .from_ratio(n, d)
                .expect("small denominators are invertible")
        }
        /// c + d·p
        fn lin(&self, c: i64, d: i64) -> Scalar {
            self.k(c) + self.k(d) * &self.p
        }
        fn m(&self, rows: [[Scalar; 3]; 3]) -> Matrix {
            Matrix::from_rows(self.f, rows.into_iter().map(Vec::from).collect()).expect("3x3")
        }
    }

    pub fn transition(p: &Scalar, from: BasisKind, to: BasisKind) -> Matrix {
        use BasisKind::*;
        let s = P::new(p);
        let z = || s.k(0);
        let q = s.lin(1, -1);
        let q_inv = q.inv().expect("p != 1");
        let p_inv = p.inv().expect("p != 0");
        let quarter = s.r(1, 4);
        let eighth = s.r(1, 8);
        match (from, to) {
            (Ehf, Ehf) | (Pair, Pair) | (Starred, Starred) => Matrix::identity(s.f, 3),
            (Ehf, Pair) => s.m([
                [s.lin(2, -2), z(), s.lin(-4, 4)],
                [s.lin(1, -2), s.k(1), z()],
                [s.lin(0, 2), z(), s.lin(0, 4)],
            ]),
            (Pair, Ehf) => s.m([
                [&quarter * &q_inv, z(), &quarter * &p_inv],
                [
                    &quarter * s.lin(-1, 2) * &q_inv,
                    s.k(1),
                    &quarter * s.lin(-1, 2) * &p_inv,
                ],
                [-(&eighth * &q_inv), z(), &eighth * &p_inv],
            ]),
            (Starred, Pair) => s.m([
                [z(), s.lin(2, -2), s.lin(4, -4)],
                [s.k(1), s.lin(1, -2), z()],
                [z(), s.lin(0, 2), s.lin(0, -4)],
            ]),
            (Pair, Starred) => s.m([
                [
                    &quarter * s.lin(-1, 2) * &q_inv,
                    s.k(1),
                    &quarter * s.lin(-1, 2) * &p_inv,
                ],
                [&quarter * &q_inv, z(), &quarter * &p_inv],
                [&eighth * &q_inv, z(), -(&eighth * &p_inv)],
            ]),
            (Ehf, Starred) | (Starred, Ehf) => s.m([
                [s.lin(-1, 1), s.lin(2, -2), s.lin(1, -1)],
                [s.lin(0, 1), s.lin(1, -2), s.lin(1, -1)],
                [p * p * &q_inv, s.lin(0, 2), s.lin(-1, 1)],
            ]),
        }
    }

    /// Gram matrix with rows from `rows` and columns from `cols`.
    pub fn gram(p: &Scalar, rows: BasisKind, cols: BasisKind) -> Matrix {
        use BasisKind::*;
        let s = P::new(p);
        let z = || s.k(0);
        let half = s.r(1, 2);
        let q = s.lin(1, -1);
        let q_inv = q.inv().expect("p != 1");
        let table = |r: BasisKind, c: BasisKind| -> Matrix {
            match (r, c) {
                (Ehf, Ehf) | (Starred, Starred) => s.m([
                    [z(), z(), half.clone()],
                    [z(), s.k(1), z()],
                    [half.clone(), z(), z()],
                ]),
                (Pair, Pair) => s.m([
                    [s.k(1), s.lin(1, -2), z()],
                    [s.lin(1, -2), s.k(1), z()],
                    [z(), z(), s.k(-16) * p * &q],
                ]),
                (Ehf, Starred) => s.m([
                    [p * p * &q_inv * &half, p.clone(), &half * s.lin(-1, 1)],
                    [p.clone(), s.lin(1, -2), q.clone()],
                    [&half * s.lin(-1, 1), q.clone(), &half * &q],
                ]),
                (Ehf, Pair) => s.m([
                    [p.clone(), z(), s.lin(0, 2)],
                    [s.lin(1, -2), s.k(1), z()],
                    [q.clone(), z(), s.lin(-2, 2)],
                ]),
                (Starred, Pair) => s.m([
                    [z(), p.clone(), s.lin(0, -2)],
                    [s.k(1), s.lin(1, -2), z()],
                    [z(), q.clone(), s.lin(2, -2)],
                ]),
                _ => unreachable!(),
            }
        };
        match (rows, cols) {
            (Starred, Ehf) | (Pair, Ehf) | (Pair, Starred) => table(cols, rows).transpose(),
            _ => table(rows, cols),
        }
    }

    /// Matrices of ad a (`star = false`) or ad a* (`star = true`) in a basis.
    pub fn ad(p: &Scalar, kind: BasisKind, star: bool) -> Matrix {
        use BasisKind::*;
        let s = P::new(p);
        let z = || s.k(0);
        let ehf_a = || {
            s.m([
                [s.lin(2, -4), s.lin(-4, 4), z()],
                [s.lin(0, -2), z(), s.lin(2, -2)],
                [z(), s.lin(0, 4), s.lin(-2, 4)],
            ])
        };
        let h_diag = || Matrix::diag(s.f, &[s.k(2), z(), s.k(-2)]);
        match (kind, star) {
            (Pair, false) => s.m([
                [z(), z(), s.lin(-4, 8)],
                [z(), z(), s.k(4)],
                [z(), s.k(1), z()],
            ]),
            (Pair, true) => s.m([
                [z(), z(), s.k(-4)],
                [z(), z(), s.lin(4, -8)],
                [s.k(-1), z(), z()],
            ]),
            (Ehf, false) | (Starred, true) => ehf_a(),
            (Ehf, true) | (Starred, false) => h_diag(),
        }
    }
}

/// Tables of the model recomputed from first principles and compared with
/// their closed forms, plus the identities involving R, W, star and dagger.
pub fn model_report(model: &Sl2Model) -> IdentityReport {
    use BasisKind::*;
    let f = model.field();
    let p = model.p();
    let q = f.one() - p;
    let id2 = Matrix::identity(f, 2);
    let id3 = Matrix::identity(f, 3);
    let pair = model.pair();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut push = |name: String, ok: bool| checks.push((name, ok));

    let expected_gram = closed_form::gram(p, Pair, Pair);
    push("pair gram table".into(), pair.gram_table() == expected_gram);
    let det_expected = f.from_i64(-64) * p * p * &q * &q;
    push(
        "pair gram determinant".into(),
        expected_gram.det() == det_expected,
    );
    push("pair relations".into(), pair.relations_check());
    push("pair generates".into(), pair.is_generating());
    push(
        "a, a* normalized".into(),
        pair.a.is_normalized_semisimple() && pair.a_star.is_normalized_semisimple(),
    );
    push(
        "R^2 = (1-p)I".into(),
        &model.r() * &model.r() == id2.scale(&q),
    );
    let wu = &model.w() * &model.u2();
    push("W U2 W U2 = (1-p)I".into(), &wu * &wu == id2.scale(&q));
    let r_inv_closed =
        Matrix::from_rows(f, vec![vec![f.one(), f.one()], vec![p / &q, -f.one()]]).expect("2x2");
    push("R inverse".into(), model.r_inv() == r_inv_closed);

    for from in BasisKind::ALL {
        for to in BasisKind::ALL {
            let t = model.transition(from, to);
            push(
                format!("transition {}->{}", from.name(), to.name()),
                t == closed_form::transition(p, from, to),
            );
            push(
                format!("transition {}->{} inverse", from.name(), to.name()),
                &t * &model.transition(to, from) == id3,
            );
            push(
                format!("gram {}x{}", from.name(), to.name()),
                model.gram(from, to) == closed_form::gram(p, from, to),
            );
        }
        push(
            format!("ad a in {}", from.name()),
            model.ad_in(&model.a(), from) == closed_form::ad(p, from, false),
        );
        push(
            format!("ad a* in {}", from.name()),
            model.ad_in(&model.a_star(), from) == closed_form::ad(p, from, true),
        );
    }
    push(
        "transition triangle".into(),
        &model.transition(Ehf, Pair) * &model.transition(Pair, Starred)
            == model.transition(Ehf, Starred),
    );

    let (a, a_star) = (model.a(), model.a_star());
    push(
        "star swaps a, a*".into(),
        model.star(&a) == a_star && model.star(&a_star) == a,
    );
    push(
        "dagger fixes a, a*".into(),
        model.dagger(&a) == a && model.dagger(&a_star) == a_star,
    );
    let ehf = model.basis(Ehf).elems;
    let starred = model.basis(Starred).elems;
    push(
        "star maps e,h,f to e*,h*,f*".into(),
        (0..3).all(|i| model.star(&ehf[i]) == starred[i]),
    );
    let ratio = p / &q;
    let ratio_inv = &q / p;
    for (basis, tag) in [(&ehf, ""), (&starred, "*")] {
        push(
            format!("dagger images{tag}"),
            model.dagger(&basis[0]) == basis[2].scale(&ratio)
                && model.dagger(&basis[1]) == basis[1]
                && model.dagger(&basis[2]) == basis[0].scale(&ratio_inv),
        );
    }
    for (i, y) in ehf.iter().chain(starred.iter()).enumerate() {
        push(
            format!("star involution {i}"),
            model.star(&model.star(y)) == *y,
        );
        push(
            format!("dagger involution {i}"),
            model.dagger(&model.dagger(y)) == *y,
        );
        push(
            format!("star and dagger commute {i}"),
            model.dagger(&model.star(y)) == model.star(&model.dagger(y)),
        );
    }
    push(
        "starred bracket relations".into(),
        starred[1].bracket(&starred[0]) == starred[0].scale(&f.from_i64(2))
            && starred[1].bracket(&starred[2]) == starred[2].scale(&f.from_i64(-2))
            && starred[0].bracket(&starred[2]) == starred[1],
    );
    IdentityReport::new(checks)
}
