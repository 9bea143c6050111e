//! The (N+1)-dimensional irreducible sl2-module, realized as matrices acting
//! on coordinates with respect to the monomial basis y^{N−i}z^i, i = 0..N.
//!
//! Four bases are tracked, each by its transition matrix from the monomial
//! basis. A vector with coordinates c in basis X has monomial coordinates
//! T_X·c.

use std::fmt;

use thiserror::Error;

use crate::field::Scalar;
use crate::krawtchouk::{IdentityReport, KrawtchoukTable, Params};
use crate::linalg::{commutator, Matrix, Poly};
use crate::sl2::{Sl2Element, Sl2Model};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("vector has length {found}, module has dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisTag {
    /// y^{N−i} z^i
    Mono,
    /// the basis dual to `Mono`
    MonoDual,
    /// y*^{N−i} z*^i
    Star,
    /// the basis dual to `Star`
    StarDual,
}

impl BasisTag {
    pub const ALL: [BasisTag; 4] = [
        BasisTag::Mono,
        BasisTag::MonoDual,
        BasisTag::Star,
        BasisTag::StarDual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisTag::Mono => "mono",
            BasisTag::MonoDual => "mono_dual",
            BasisTag::Star => "star",
            BasisTag::StarDual => "star_dual",
        }
    }

    pub fn dual(self) -> BasisTag {
        match self {
            BasisTag::Mono => BasisTag::MonoDual,
            BasisTag::MonoDual => BasisTag::Mono,
            BasisTag::Star => BasisTag::StarDual,
            BasisTag::StarDual => BasisTag::Star,
        }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRealization {
    pub params: Params,
    pub table: KrawtchoukTable,
    pub model: Sl2Model,
    pub rep_e: Matrix,
    pub rep_h: Matrix,
    pub rep_f: Matrix,
    pub rep_es: Matrix,
    pub rep_hs: Matrix,
    pub rep_fs: Matrix,
    /// A = (NI − a)/2 acting on the module.
    pub a: Matrix,
    /// A* = (NI − a*)/2 acting on the module.
    pub a_star: Matrix,
    star_basis: Matrix,
    /// inverses of `to_mono`, in `BasisTag::ALL` order
    from_mono: Vec<Matrix>,
}

impl ModuleRealization {
    pub fn build(params: &Params) -> ModuleRealization {
        let f = params.field();
        let n = params.n();
        let dim = n + 1;
        let int = |k: usize| f.from_i64(k as i64);
        let rep_e = Matrix::from_fn(f, dim, |i, j| if j == i + 1 { int(j) } else { f.zero() });
        let rep_f = Matrix::from_fn(
            f,
            dim,
            |i, j| if i == j + 1 { int(n - j) } else { f.zero() },
        );
        let rep_h = Matrix::from_fn(f, dim, |i, j| {
            if i == j {
                f.from_i64(n as i64 - 2 * i as i64)
            } else {
                f.zero()
            }
        });
        let model = Sl2Model::new(params.p().clone()).expect("params exclude p in {0, 1}");
        let combine = |y: &Sl2Element| {
            &(&rep_e.scale(y.beta()) + &rep_h.scale(y.alpha())) + &rep_f.scale(y.gamma())
        };
        let rep_es = combine(&model.e_star());
        let rep_hs = combine(&model.h_star());
        let rep_fs = combine(&model.f_star());
        let n_id = Matrix::identity(f, dim).scale(&int(n));
        let half = f.from_ratio(1, 2).expect("odd characteristic");
        let a = (&n_id - &combine(&model.a())).scale(&half);
        let a_star = (&n_id - &combine(&model.a_star())).scale(&half);
        let star_basis = star_basis_from_expansion(params);
        let mut m = ModuleRealization {
            params: params.clone(),
            table: KrawtchoukTable::build(params),
            model,
            rep_e,
            rep_h,
            rep_f,
            rep_es,
            rep_hs,
            rep_fs,
            a,
            a_star,
            star_basis,
            from_mono: Vec::new(),
        };
        m.from_mono = BasisTag::ALL
            .iter()
            .map(|&t| m.to_mono(t).inverse().expect("bases are invertible"))
            .collect();
        m
    }

    fn mono_to(&self, tag: BasisTag) -> &Matrix {
        &self.from_mono[BasisTag::ALL
            .iter()
            .position(|&t| t == tag)
            .expect("listed")]
    }

    pub fn dim(&self) -> usize {
        self.params.n() + 1
    }

    /// β·rep_e + α·rep_h + γ·rep_f.
    pub fn rep(&self, y: &Sl2Element) -> Matrix {
        &(&self.rep_e.scale(y.beta()) + &self.rep_h.scale(y.alpha())) + &self.rep_f.scale(y.gamma())
    }

    pub fn act(&self, y: &Sl2Element, v: &[Scalar]) -> Result<Vec<Scalar>, ModuleError> {
        if v.len() != self.dim() {
            return Err(ModuleError::LengthMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(self.rep(y).mul_vec(v).expect("length checked"))
    }

    /// Transition matrix from the monomial basis to `tag`.
    pub fn to_mono(&self, tag: BasisTag) -> Matrix {
        let t = &self.table;
        let qn = self.params.q_pow_n();
        match tag {
            BasisTag::Mono => Matrix::identity(self.params.field(), self.dim()),
            BasisTag::MonoDual => t.k.scale(&qn),
            BasisTag::Star => self.star_basis.clone(),
            BasisTag::StarDual => &self.star_basis * &t.k,
        }
    }

    /// Columns are the `to` basis vectors written in the `from` basis.
    pub fn transition(&self, from: BasisTag, to: BasisTag) -> Matrix {
        self.mono_to(from) * &self.to_mono(to)
    }

    /// The diagonal matrix taking a basis to its dual.
    pub fn dual_basis_transform(&self, tag: BasisTag) -> Matrix {
        self.transition(tag, tag.dual())
    }

    /// Gram matrix of the bilinear form on the monomial basis:
    /// diag(1/(k_i(1 − p)^N)).
    pub fn gram_mono(&self) -> Matrix {
        let qn = self.params.q_pow_n();
        let f = self.params.field();
        Matrix::diag(
            f,
            &self
                .table
                .weights
                .iter()
                .map(|k| (k * &qn).inv().expect("weights are nonzero"))
                .collect::<Vec<_>>(),
        )
    }

    /// Entry (i, j) is ⟨x_i, y_j⟩ for x_i in `rows`, y_j in `cols`.
    pub fn gram_matrix(&self, rows: BasisTag, cols: BasisTag) -> Matrix {
        &(&self.to_mono(rows).transpose() * &self.gram_mono()) * &self.to_mono(cols)
    }

    /// Closed-form label for a transition edge, in terms of U, K and (1 − p)^N.
    pub fn transition_label(&self, from: BasisTag, to: BasisTag) -> Matrix {
        use BasisTag::*;
        let t = &self.table;
        let qn = self.params.q_pow_n();
        let ku = &t.k * &t.u;
        let uk = &t.u * &t.k;
        let kuk = &ku * &t.k;
        match (from, to) {
            (x, y) if x == y => Matrix::identity(self.params.field(), self.dim()),
            (Mono, MonoDual) => t.k.scale(&qn),
            (Mono, Star) => ku.scale(&qn),
            (Mono, StarDual) => kuk.scale(&qn),
            (Star, Mono) => ku,
            (Star, StarDual) => t.k.clone(),
            (Star, MonoDual) => kuk.scale(&qn),
            (MonoDual, StarDual) => uk,
            (StarDual, MonoDual) => uk.scale(&qn),
            (x, y) => self.transition_label(y, x).inverse().expect("invertible"),
        }
    }

    /// Closed-form label for an inner-product table.
    pub fn gram_label(&self, rows: BasisTag, cols: BasisTag) -> Matrix {
        use BasisTag::*;
        let t = &self.table;
        let f = self.params.field();
        let qn = self.params.q_pow_n();
        let id = Matrix::identity(f, self.dim());
        let kinv = t.k_inv();
        match (rows, cols) {
            (Mono, Mono) => kinv.scale(&qn.inv().expect("1 - p is nonzero")),
            (MonoDual, MonoDual) => t.k.scale(&qn),
            (Star, Star) => kinv,
            (StarDual, StarDual) => t.k.clone(),
            (Mono, MonoDual) | (Star, StarDual) => id,
            (Mono, Star) => t.u.clone(),
            (Mono, StarDual) => &t.u * &t.k,
            (StarDual, Mono) => &t.k * &t.u,
            (Star, MonoDual) => (&t.u * &t.k).scale(&qn),
            (MonoDual, Star) => (&t.k * &t.u).scale(&qn),
            (StarDual, MonoDual) => (&(&t.k * &t.u) * &t.k).scale(&qn),
            (x, y) => self.gram_label(y, x).transpose(),
        }
    }

    /// A and A* written in `tag`.
    pub fn operators_in(&self, tag: BasisTag) -> (Matrix, Matrix) {
        let (t, ti) = (self.to_mono(tag), self.mono_to(tag));
        (&(ti * &self.a) * &t, &(ti * &self.a_star) * &t)
    }

    /// The expected matrices of A and A* in each basis, in terms of B and D.
    pub fn operator_table(&self, tag: BasisTag) -> (Matrix, Matrix) {
        let t = &self.table;
        let bt = t.b.transpose();
        match tag {
            BasisTag::Mono => (bt, t.d.clone()),
            BasisTag::MonoDual => (t.b.clone(), t.d.clone()),
            BasisTag::StarDual => (t.d.clone(), t.b.clone()),
            BasisTag::Star => (t.d.clone(), bt),
        }
    }

    pub fn operator_table_report(&self) -> IdentityReport {
        IdentityReport::new(
            BasisTag::ALL
                .iter()
                .map(|&tag| {
                    (
                        format!("A, A* in {tag}"),
                        self.operators_in(tag) == self.operator_table(tag),
                    )
                })
                .collect(),
        )
    }

    /// rep([y,z]) = [rep y, rep z] on both generating triples.
    pub fn lie_homomorphism_check(&self) -> bool {
        let f = self.params.field();
        let plain = [Sl2Element::e(f), Sl2Element::h(f), Sl2Element::f(f)];
        let starred = [
            self.model.e_star(),
            self.model.h_star(),
            self.model.f_star(),
        ];
        [plain, starred].iter().all(|triple| {
            triple.iter().all(|y| {
                triple.iter().all(|z| {
                    self.rep(&y.bracket(z))
                        == commutator(&self.rep(y), &self.rep(z)).expect("same order")
                })
            })
        })
    }

    /// The starred triple acts on the starred basis with the same matrices as
    /// e, h, f on the monomial basis.
    pub fn starred_action_check(&self) -> bool {
        let (t, ti) = (self.to_mono(BasisTag::Star), self.mono_to(BasisTag::Star));
        let conj = |m: &Matrix| &(ti * m) * &t;
        conj(&self.rep_es) == self.rep_e
            && conj(&self.rep_hs) == self.rep_h
            && conj(&self.rep_fs) == self.rep_f
    }

    /// M(y)ᵗ G = G M(y†) for y in e, h, f, e*, h*, f*.
    pub fn adjointness_check(&self) -> bool {
        let f = self.params.field();
        let g = self.gram_mono();
        let gens = [
            Sl2Element::e(f),
            Sl2Element::h(f),
            Sl2Element::f(f),
            self.model.e_star(),
            self.model.h_star(),
            self.model.f_star(),
        ];
        gens.iter().all(|y| {
            let m = self.rep(y);
            &m.transpose() * &g == &g * &self.rep(&self.model.dagger(y))
        })
    }

    /// The dual-to-monomial vectors sum to y*^N and the dual-to-starred
    /// vectors sum to y^N.
    pub fn sum_of_dual_basis_check(&self) -> (bool, bool) {
        let f = self.params.field();
        let ones = vec![f.one(); self.dim()];
        let md = self
            .to_mono(BasisTag::MonoDual)
            .mul_vec(&ones)
            .expect("dims");
        let sd = self
            .to_mono(BasisTag::StarDual)
            .mul_vec(&ones)
            .expect("dims");
        let mut e0 = vec![f.zero(); self.dim()];
        e0[0] = f.one();
        (md == self.to_mono(BasisTag::Star).column(0), sd == e0)
    }

    /// K_j(A) y^N = y^{N−j} z^j and K_j(A*) y*^N = y*^{N−j} z*^j for all j.
    pub fn polynomial_basis_check(&self) -> bool {
        let star = self.to_mono(BasisTag::Star);
        (0..self.dim()).all(|j| {
            let kj: Poly = self.params.kraw_coeffs(j).expect("in range");
            let mono = kj.eval_matrix(&self.a).column(0)
                == Matrix::identity(self.params.field(), self.dim()).column(j);
            let starred = kj
                .eval_matrix(&self.a_star)
                .mul_vec(&star.column(0))
                .expect("dims")
                == star.column(j);
            mono && starred
        })
    }

    /// Every check on the module, by name.
    pub fn report(&self) -> IdentityReport {
        use BasisTag::*;
        let f = self.params.field();
        let n = self.params.n() as i64;
        let mut checks: Vec<(String, bool)> = Vec::new();
        let h_diag = Matrix::diag(
            f,
            &(0..=n).map(|i| f.from_i64(n - 2 * i)).collect::<Vec<_>>(),
        );
        checks.push(("h acts as diag(N-2i)".into(), self.rep_h == h_diag));
        checks.push((
            "rep is a Lie homomorphism".into(),
            self.lie_homomorphism_check(),
        ));
        checks.push((
            "starred triple on starred basis".into(),
            self.starred_action_check(),
        ));
        checks.push(("A* = diag(0..N)".into(), self.a_star == self.table.d));
        checks.push(("adjointness".into(), self.adjointness_check()));
        let g = self.gram_mono();
        checks.push(("mono gram diagonal".into(), g.is_diagonal()));
        checks.push((
            "star gram = K^-1".into(),
            self.gram_matrix(Star, Star) == self.table.k_inv(),
        ));
        let (s1, s2) = self.sum_of_dual_basis_check();
        checks.push(("dual-to-mono sum".into(), s1));
        checks.push(("dual-to-star sum".into(), s2));
        checks.push((
            "star basis = K U (1-p)^N".into(),
            self.to_mono(Star) == (&self.table.k * &self.table.u).scale(&self.params.q_pow_n()),
        ));
        let id = Matrix::identity(f, self.dim());
        let trans: std::collections::HashMap<(BasisTag, BasisTag), Matrix> = BasisTag::ALL
            .iter()
            .flat_map(|&x| BasisTag::ALL.iter().map(move |&y| (x, y)))
            .map(|(x, y)| ((x, y), self.transition(x, y)))
            .collect();
        let transition = |x, y| &trans[&(x, y)];
        for x in BasisTag::ALL {
            checks.push((
                format!("dual transform {x} diagonal"),
                transition(x, x.dual()).is_diagonal(),
            ));
            for y in BasisTag::ALL {
                let t = transition(x, y);
                checks.push((
                    format!("transition {x}->{y}"),
                    *t == self.transition_label(x, y),
                ));
                checks.push((
                    format!("transition {x}->{y}->{x}"),
                    t * transition(y, x) == id,
                ));
                checks.push((
                    format!("gram {x}x{y}"),
                    self.gram_matrix(x, y) == self.gram_label(x, y),
                ));
                checks.push((
                    format!("gram {x}x{}", y.dual()),
                    self.gram_matrix(x, y.dual()) == transition(y, x).transpose(),
                ));
                for z in BasisTag::ALL {
                    checks.push((
                        format!("transition {x}->{y}->{z}"),
                        t * transition(y, z) == *transition(x, z),
                    ));
                }
            }
        }
        checks.extend(self.operator_table_report().checks);
        checks.push(("B^t = K B K^-1".into(), {
            let t = &self.table;
            t.b.transpose() == &(&t.k * &t.b) * &t.k_inv()
        }));
        checks.push(("polynomial basis".into(), self.polynomial_basis_check()));
        IdentityReport::new(checks)
    }
}

/// Coordinates of y*^{N−i} z*^i in the monomial basis, from y* = (1−p)y + pz
/// and z* = (1−p)y + (p−1)z.
fn star_basis_from_expansion(params: &Params) -> Matrix {
    let f = params.field();
    let n = params.n();
    let q = params.q();
    let ys = Poly::new(f, vec![q.clone(), params.p().clone()]);
    let zs = Poly::new(f, vec![q.clone(), -q.clone()]);
    let cols: Vec<Vec<Scalar>> = (0..=n)
        .map(|i| {
            let mut g = Poly::one(f);
            for _ in 0..n - i {
                g = g.mul(&ys);
            }
            for _ in 0..i {
                g = g.mul(&zs);
            }
            (0..=n).map(|j| g.coeff(j)).collect()
        })
        .collect();
    Matrix::from_columns(f, &cols).expect("square")
}
