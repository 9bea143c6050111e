//! Leonard systems: recognition from a pair of matrices, the cross relations
//! every system satisfies, and the classifier for pairs of Krawtchouk type.
//!
//! The classifier works in the convention where both operators have
//! eigenvalues N, N − 2, …, −N. A pair in the other convention (eigenvalues
//! 0, 1, …, N) can be brought over with [`shift`] or [`affine_normalize`].

use std::fmt;

use thiserror::Error;

use crate::field::{feasible, FieldSpec, Scalar};
use crate::krawtchouk::{IdentityReport, KrawtchoukTable, Params};
use crate::linalg::{commutator, is_multiplicity_free, rank, LinalgError, Matrix, SpectrumCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    AStar,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::AStar => "A*",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeonardError {
    #[error("eigenvalues of {0} repeat")]
    RepeatedTheta(Side),
    #[error("{side} does not have the supplied spectrum")]
    SpectrumMismatch { side: Side },
    #[error("{side} is not diagonalizable")]
    NotMultiplicityFree { side: Side },
    #[error("{0} is not tridiagonal in any ordering of the eigenbasis of the other operator")]
    NotTridiagonalizable(Side),
    #[error("{0} is block tridiagonal but an adjacent block vanishes")]
    TridiagonalButReducible(Side),
    #[error("A and A* have orders {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("expected {expected} eigenvalues, got {found}")]
    ThetaCount { expected: usize, found: usize },
    #[error("sequence is not an arithmetic progression with nonzero step")]
    NotArithmetic,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl LeonardError {
    fn on(self, side: Side) -> LeonardError {
        match self {
            LeonardError::RepeatedTheta(_) => LeonardError::RepeatedTheta(side),
            LeonardError::SpectrumMismatch { .. } => LeonardError::SpectrumMismatch { side },
            LeonardError::NotMultiplicityFree { .. } => LeonardError::NotMultiplicityFree { side },
            LeonardError::NotTridiagonalizable(_) => LeonardError::NotTridiagonalizable(side),
            LeonardError::TridiagonalButReducible(_) => LeonardError::TridiagonalButReducible(side),
            other => other,
        }
    }
}

/// E_i = ∏_{j≠i} (X − θ_j I)/(θ_i − θ_j), computed as v_i w_iᵗ from the
/// eigenvectors v_i and the rows w_i of their inverse.
pub fn primitive_idempotents(x: &Matrix, thetas: &[Scalar]) -> Result<Vec<Matrix>, LeonardError> {
    let eigenvectors = match is_multiplicity_free(x, thetas) {
        Err(LinalgError::RepeatedCandidate) => return Err(LeonardError::RepeatedTheta(Side::A)),
        Err(LinalgError::CandidateCount { expected, found }) => {
            return Err(LeonardError::ThetaCount { expected, found })
        }
        Err(e) => return Err(e.into()),
        Ok(SpectrumCheck::WrongSpectrum) => {
            return Err(LeonardError::SpectrumMismatch { side: Side::A })
        }
        Ok(SpectrumCheck::NotDiagonalizable) => {
            return Err(LeonardError::NotMultiplicityFree { side: Side::A })
        }
        Ok(SpectrumCheck::MultiplicityFree { eigenvectors }) => eigenvectors,
    };
    let f = x.field();
    let v = Matrix::from_columns(f, &eigenvectors)?;
    let w = v.inverse()?;
    Ok((0..thetas.len())
        .map(|i| Matrix::from_fn(f, x.n(), |r, c| v.get(r, i) * w.get(i, c)))
        .collect())
}

/// Decides which products E_i X E_j vanish. Rank-one idempotents E = c rᵗ
/// reduce this to the scalars r_iᵗ X c_j.
enum Sandwich<'a> {
    RankOne(Vec<(Vec<Scalar>, Vec<Scalar>)>),
    General(&'a [Matrix]),
}

fn rank_one_factor(e: &Matrix) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let n = e.n();
    let (k, l) = (0..n * n)
        .map(|t| (t / n, t % n))
        .find(|&(i, j)| !e.get(i, j).is_zero())?;
    let col = e.column(l);
    let pivot = e.get(k, l).inv().ok()?;
    let row: Vec<Scalar> = (0..n).map(|j| e.get(k, j) * &pivot).collect();
    let exact = (0..n).all(|i| (0..n).all(|j| *e.get(i, j) == &col[i] * &row[j]));
    exact.then_some((col, row))
}

impl<'a> Sandwich<'a> {
    fn new(idem: &'a [Matrix]) -> Self {
        match idem.iter().map(rank_one_factor).collect::<Option<Vec<_>>>() {
            Some(factors) => Sandwich::RankOne(factors),
            None => Sandwich::General(idem),
        }
    }

    /// `out[i][j]` is whether E_i X E_j ≠ 0.
    fn nonzero(&self, x: &Matrix) -> Vec<Vec<bool>> {
        match self {
            Sandwich::RankOne(factors) => {
                let xt = x.transpose();
                let left: Vec<Vec<Scalar>> = factors
                    .iter()
                    .map(|(_, r)| xt.mul_vec(r).expect("same order"))
                    .collect();
                left.iter()
                    .map(|l| {
                        factors
                            .iter()
                            .map(|(c, _)| {
                                let dot = l
                                    .iter()
                                    .zip(c)
                                    .fold(x.field().zero(), |acc, (a, b)| acc + a * b);
                                !dot.is_zero()
                            })
                            .collect()
                    })
                    .collect()
            }
            Sandwich::General(idem) => idem
                .iter()
                .map(|ei| {
                    let left = ei * x;
                    idem.iter().map(|ej| !(&left * ej).is_zero()).collect()
                })
                .collect(),
        }
    }
}

/// Orders idempotents so that `other` acts tridiagonally: vertices are the
/// idempotents, with an edge i–j whenever E_i·other·E_j ≠ 0. Returns the
/// vertex order along the path, starting from the endpoint of smaller index.
pub fn order_idempotents(
    other: &Matrix,
    idempotents: &[Matrix],
) -> Result<Vec<usize>, LeonardError> {
    let n = idempotents.len();
    if n <= 1 {
        return Ok((0..n).collect());
    }
    let nonzero = Sandwich::new(idempotents).nonzero(other);
    let mut adj = vec![Vec::new(); n];
    let mut edges = 0;
    for i in 0..n {
        for j in i + 1..n {
            if nonzero[i][j] {
                adj[i].push(j);
                adj[j].push(i);
                edges += 1;
            }
        }
    }
    if edges == 0 || adj.iter().any(|a| a.len() > 2) {
        return Err(LeonardError::NotTridiagonalizable(Side::AStar));
    }
    let Some(start) = (0..n).find(|&i| adj[i].len() == 1) else {
        // every vertex has degree 2: a cycle
        return Err(LeonardError::NotTridiagonalizable(Side::AStar));
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&v| v != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() == n {
        return Ok(order);
    }
    // the component of `start` is a path; decide whether all components are
    let mut seen = vec![false; n];
    for c in 0..n {
        if seen[c] {
            continue;
        }
        let mut stack = vec![c];
        let (mut verts, mut degs) = (0, 0);
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            verts += 1;
            degs += adj[v].len();
            stack.extend(adj[v].iter().copied());
        }
        if degs / 2 != verts - 1 {
            return Err(LeonardError::NotTridiagonalizable(Side::AStar));
        }
    }
    Err(LeonardError::TridiagonalButReducible(Side::AStar))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeonardSystem {
    pub a: Matrix,
    pub a_star: Matrix,
    pub e: Vec<Matrix>,
    pub e_star: Vec<Matrix>,
    pub theta: Vec<Scalar>,
    pub theta_star: Vec<Scalar>,
    /// a_i = tr(A E*_i)
    pub a_diag: Vec<Scalar>,
    /// a*_i = tr(A* E_i)
    pub a_star_diag: Vec<Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relative {
    Id,
    /// reverse the E* ordering
    Down,
    /// reverse the E ordering
    DDown,
    /// swap the roles of (A, E) and (A*, E*)
    Star,
}

/// Recognizes (A, A*) as a Leonard system for the given spectra. The returned
/// sequences are the supplied ones, reordered along the tridiagonal paths.
pub fn recognize_leonard_system(
    a: &Matrix,
    a_star: &Matrix,
    thetas: &[Scalar],
    thetas_star: &[Scalar],
) -> Result<LeonardSystem, LeonardError> {
    if a.n() != a_star.n() {
        return Err(LeonardError::OrderMismatch(a.n(), a_star.n()));
    }
    if a.field() != a_star.field() {
        return Err(LinalgError::FieldMismatch(a.field(), a_star.field()).into());
    }
    let e = primitive_idempotents(a, thetas).map_err(|e| e.on(Side::A))?;
    let es = primitive_idempotents(a_star, thetas_star).map_err(|e| e.on(Side::AStar))?;
    let order = order_idempotents(a_star, &e).map_err(|e| e.on(Side::AStar))?;
    let order_star = order_idempotents(a, &es).map_err(|e| e.on(Side::A))?;
    let pick = |v: &[Matrix], o: &[usize]| o.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
    let pick_s = |v: &[Scalar], o: &[usize]| o.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
    let sys = LeonardSystem::assemble(
        a.clone(),
        a_star.clone(),
        pick(&e, &order),
        pick(&es, &order_star),
        pick_s(thetas, &order),
        pick_s(thetas_star, &order_star),
    );
    if let Some(side) = sys.tridiagonality_failure() {
        return Err(LeonardError::TridiagonalButReducible(side));
    }
    Ok(sys)
}

impl LeonardSystem {
    fn assemble(
        a: Matrix,
        a_star: Matrix,
        e: Vec<Matrix>,
        e_star: Vec<Matrix>,
        theta: Vec<Scalar>,
        theta_star: Vec<Scalar>,
    ) -> LeonardSystem {
        let a_diag = e_star.iter().map(|m| a.trace_of_product(m)).collect();
        let a_star_diag = e.iter().map(|m| a_star.trace_of_product(m)).collect();
        LeonardSystem {
            a,
            a_star,
            e,
            e_star,
            theta,
            theta_star,
            a_diag,
            a_star_diag,
        }
    }

    /// N, one less than the order.
    pub fn diameter(&self) -> usize {
        self.e.len() - 1
    }

    fn tridiagonality_failure(&self) -> Option<Side> {
        let check = |e: &[Matrix], x: &Matrix| {
            let nonzero = Sandwich::new(e).nonzero(x);
            (0..e.len()).all(|i| {
                (0..e.len()).all(|j| match i.abs_diff(j) {
                    0 => true,
                    1 => nonzero[i][j],
                    _ => !nonzero[i][j],
                })
            })
        };
        if !check(&self.e, &self.a_star) {
            Some(Side::AStar)
        } else if !check(&self.e_star, &self.a) {
            Some(Side::A)
        } else {
            None
        }
    }

    /// Names of the defining conditions that fail; empty for a valid system.
    pub fn axiom_failures(&self) -> Vec<String> {
        let f = self.a.field();
        let n = self.a.n();
        let id = Matrix::identity(f, n);
        let zero = Matrix::zero(f, n);
        let mut out = Vec::new();
        for (name, x, e, th) in [
            ("A", &self.a, &self.e, &self.theta),
            ("A*", &self.a_star, &self.e_star, &self.theta_star),
        ] {
            let orth = (0..=self.diameter()).all(|i| {
                (0..=self.diameter())
                    .all(|j| &e[i] * &e[j] == if i == j { e[i].clone() } else { zero.clone() })
            });
            if !orth {
                out.push(format!("idempotents of {name} are not orthogonal"));
            }
            if e.iter().fold(zero.clone(), |acc, m| &acc + m) != id {
                out.push(format!("idempotents of {name} do not sum to I"));
            }
            let spectral = e
                .iter()
                .zip(th.iter())
                .fold(zero.clone(), |acc, (m, t)| &acc + &m.scale(t));
            if spectral != *x {
                out.push(format!("{name} is not the sum of theta_i E_i"));
            }
        }
        if let Some(side) = self.tridiagonality_failure() {
            out.push(format!("{side} is not irreducible tridiagonal"));
        }
        out
    }

    pub fn relative(&self, r: Relative) -> LeonardSystem {
        let rev_m = |v: &[Matrix]| v.iter().rev().cloned().collect::<Vec<_>>();
        let rev_s = |v: &[Scalar]| v.iter().rev().cloned().collect::<Vec<_>>();
        match r {
            Relative::Id => self.clone(),
            Relative::Down => LeonardSystem::assemble(
                self.a.clone(),
                self.a_star.clone(),
                self.e.clone(),
                rev_m(&self.e_star),
                self.theta.clone(),
                rev_s(&self.theta_star),
            ),
            Relative::DDown => LeonardSystem::assemble(
                self.a.clone(),
                self.a_star.clone(),
                rev_m(&self.e),
                self.e_star.clone(),
                rev_s(&self.theta),
                self.theta_star.clone(),
            ),
            Relative::Star => LeonardSystem::assemble(
                self.a_star.clone(),
                self.a.clone(),
                self.e_star.clone(),
                self.e.clone(),
                self.theta_star.clone(),
                self.theta.clone(),
            ),
        }
    }

    /// Applies the relatives left to right.
    pub fn relatives(&self, chain: &[Relative]) -> LeonardSystem {
        chain.iter().fold(self.clone(), |s, &r| s.relative(r))
    }

    /// Identities that hold in every Leonard system, checked exactly.
    pub fn cross_relations(&self) -> IdentityReport {
        let f = self.a.field();
        let n = self.diameter();
        let (a, a_s) = (&self.a, &self.a_star);
        let (e, es) = (&self.e, &self.e_star);
        let (th, ths) = (&self.theta, &self.theta_star);
        let mut checks: Vec<(String, bool)> = Vec::new();

        for (name, x, idem) in [("E*_i A^r E*_j", a, es), ("E_i A*^r E_j", a_s, e)] {
            let mut ok = true;
            let sandwich = Sandwich::new(idem);
            let mut power = Matrix::identity(f, n + 1);
            for r in 0..=n {
                let nonzero = sandwich.nonzero(&power);
                for i in 0..=n {
                    for j in 0..=n {
                        let d = i.abs_diff(j);
                        if r <= d {
                            ok &= nonzero[i][j] == (r == d);
                        }
                    }
                }
                power = &power * x;
            }
            checks.push((format!("{name} vanishing pattern"), ok));
        }
        checks.push((
            "E*_i A E*_i = a_i E*_i".into(),
            (0..=n).all(|i| &(&es[i] * a) * &es[i] == es[i].scale(&self.a_diag[i])),
        ));
        checks.push((
            "E_i A* E_i = a*_i E_i".into(),
            (0..=n).all(|i| &(&e[i] * a_s) * &e[i] == e[i].scale(&self.a_star_diag[i])),
        ));
        if n == 0 {
            return IdentityReport::new(checks);
        }
        let asa = a_s * a;
        let aas = a * a_s;
        let lhs = &asa * &es[0];
        let rhs =
            &(a * &es[0]).scale(&ths[1]) + &es[0].scale(&(&self.a_diag[0] * (&ths[0] - &ths[1])));
        checks.push(("A* A E*_0".into(), lhs == rhs));
        let lhs = &asa * &es[n];
        let rhs = &(a * &es[n]).scale(&ths[n - 1])
            + &es[n].scale(&(&self.a_diag[n] * (&ths[n] - &ths[n - 1])));
        checks.push(("A* A E*_N".into(), lhs == rhs));
        let lhs = &e[0] * &asa;
        let rhs =
            &(&e[0] * a_s).scale(&th[1]) + &e[0].scale(&(&self.a_star_diag[0] * (&th[0] - &th[1])));
        checks.push(("E_0 A* A".into(), lhs == rhs));
        let lhs = &e[n] * &asa;
        let rhs = &(&e[n] * a_s).scale(&th[n - 1])
            + &e[n].scale(&(&self.a_star_diag[n] * (&th[n] - &th[n - 1])));
        checks.push(("E_N A* A".into(), lhs == rhs));

        let e0es0 = &e[0] * &es[0];
        let e0asaes0 = &(&e[0] * &asa) * &es[0];
        let c = (&self.a_diag[0] - &th[0]) * (&ths[0] - &ths[1]) + &th[0] * &ths[0];
        checks.push(("E_0 A* A E*_0".into(), e0asaes0 == e0es0.scale(&c)));
        let lhs = &(&(&e[0] * &asa) * a) * &es[0];
        let rhs = &e0asaes0.scale(&(&th[0] + &th[1])) - &e0es0.scale(&(&th[0] * &th[1] * &ths[0]));
        checks.push(("E_0 A* A^2 E*_0".into(), lhs == rhs));

        let esnen = &es[n] * &e[n];
        let esnaasen = &(&es[n] * &aas) * &e[n];
        let c = (&self.a_star_diag[n] - &ths[n]) * (&th[n] - &th[n - 1]) + &th[n] * &ths[n];
        checks.push(("E*_N A A* E_N".into(), esnaasen == esnen.scale(&c)));
        let lhs = &(&(&es[n] * a) * &aas) * &e[n];
        let rhs = &esnaasen.scale(&(&th[n - 1] + &th[n]))
            - &esnen.scale(&(&th[n - 1] * &th[n] * &ths[n]));
        checks.push(("E*_N A^2 A* E_N".into(), lhs == rhs));

        let lhs =
            &self.a_diag[0] * (&ths[0] - &ths[1]) + &self.a_star_diag[n] * (&th[n - 1] - &th[n]);
        let rhs = &ths[0] * &th[n - 1] - &ths[1] * &th[n];
        checks.push(("a_0, a*_N scalar identity".into(), lhs == rhs));
        IdentityReport::new(checks)
    }

    /// Ranks of {A^r E*_0 A^s} and {E_i E*_0 E_j}, both of which equal
    /// (N + 1)² for a Leonard system.
    pub fn basis_ranks(&self) -> (usize, usize) {
        let n = self.diameter();
        let f = self.a.field();
        let mut powers = vec![Matrix::identity(f, n + 1)];
        for r in 1..=n {
            powers.push(&powers[r - 1] * &self.a);
        }
        let mut first = Vec::new();
        for ar in &powers {
            let left = ar * &self.e_star[0];
            for as_ in &powers {
                first.push((&left * as_).flatten());
            }
        }
        let mut second = Vec::new();
        for ei in &self.e {
            let left = ei * &self.e_star[0];
            for ej in &self.e {
                second.push((&left * ej).flatten());
            }
        }
        (rank(&first), rank(&second))
    }

    pub fn basis_theorem_holds(&self) -> bool {
        let d = (self.diameter() + 1).pow(2);
        self.basis_ranks() == (d, d)
    }
}

/// (N, N − 2, …, −N) in the given field.
pub fn krawtchouk_spectrum(field: FieldSpec, n: usize) -> Vec<Scalar> {
    (0..=n)
        .map(|i| field.from_i64(n as i64 - 2 * i as i64))
        .collect()
}

/// X ↦ N·I − 2X, taking spectrum 0..N to N − 2i.
pub fn shift(x: &Matrix) -> Matrix {
    let f = x.field();
    let n = x.n() - 1;
    &Matrix::identity(f, x.n()).scale(&f.from_i64(n as i64)) - &x.scale(&f.from_i64(2))
}

/// Coefficients with α θ_i + β = N − 2i and α* θ*_i + β* = N − 2i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineNormalization {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub alpha_star: Scalar,
    pub beta_star: Scalar,
}

pub fn affine_normalize(
    thetas: &[Scalar],
    thetas_star: &[Scalar],
) -> Result<AffineNormalization, LeonardError> {
    fn one(th: &[Scalar]) -> Result<(Scalar, Scalar), LeonardError> {
        let Some(t0) = th.first() else {
            return Err(LeonardError::NotArithmetic);
        };
        let f = t0.field();
        if th.len() == 1 {
            return Ok((f.one(), -t0));
        }
        let s = &th[1] - t0;
        if s.is_zero() || th.windows(2).any(|w| &w[1] - &w[0] != s) {
            return Err(LeonardError::NotArithmetic);
        }
        let n = f.from_i64(th.len() as i64 - 1);
        let two = f.from_i64(2);
        let alpha = -(&two / &s);
        let beta = n + &two * t0 / &s;
        Ok((alpha, beta))
    }
    if thetas.len() != thetas_star.len() {
        return Err(LeonardError::ThetaCount {
            expected: thetas.len(),
            found: thetas_star.len(),
        });
    }
    let (alpha, beta) = one(thetas)?;
    let (alpha_star, beta_star) = one(thetas_star)?;
    Ok(AffineNormalization {
        alpha,
        beta,
        alpha_star,
        beta_star,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    KrawtchoukType,
    LeonardNotKrawtchouk,
    NotLeonard,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::KrawtchoukType => "krawtchouk-type",
            Verdict::LeonardNotKrawtchouk => "leonard-but-not-krawtchouk",
            Verdict::NotLeonard => "not-leonard",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("A and A* have orders {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("A and A* are over different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("order {order} is too large for {field}")]
    Infeasible { order: usize, field: FieldSpec },
    #[error(
        "{side} does not have spectrum N, N-2, ..., -N ({reason}); if its eigenvalues are 0..N, apply --shift or affine_normalize first"
    )]
    WrongSpectrum { side: Side, reason: String },
    #[error("not a Leonard pair: {0}")]
    NotLeonard(LeonardError),
    #[error("relation coefficients disagree: {0}")]
    RelationMismatch(String),
    #[error("recovered parameter is degenerate: {0}")]
    DegenerateParameter(String),
    #[error("reconstruction of the module failed: {0}")]
    Reconstruction(String),
}

impl ClassifyError {
    pub fn code(&self) -> &'static str {
        match self {
            ClassifyError::OrderMismatch(..)
            | ClassifyError::FieldMismatch(..)
            | ClassifyError::Infeasible { .. } => "input-error",
            ClassifyError::WrongSpectrum { .. } => "wrong-spectrum",
            ClassifyError::NotLeonard(_) => "not-leonard",
            ClassifyError::RelationMismatch(_) => "relation-coefficient-mismatch",
            ClassifyError::DegenerateParameter(_) => "degenerate-parameter",
            ClassifyError::Reconstruction(_) => "reconstruction-failed",
        }
    }

    /// Whether the error concerns malformed input rather than the pair itself.
    pub fn is_input_error(&self) -> bool {
        self.code() == "input-error"
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub p: Option<Scalar>,
    pub alpha1: Option<Scalar>,
    pub alpha1_star: Option<Scalar>,
    pub system: Option<LeonardSystem>,
    /// T with T⁻¹AT and T⁻¹A*T equal to the reference module's a and a*.
    pub iso: Option<Matrix>,
    /// The e, h, f actions rebuilt from A and A*.
    pub ehf: Option<[Matrix; 3]>,
    pub notes: Vec<String>,
}

fn check_inputs(a: &Matrix, a_star: &Matrix) -> Result<(), ClassifyError> {
    if a.n() != a_star.n() {
        return Err(ClassifyError::OrderMismatch(a.n(), a_star.n()));
    }
    if a.field() != a_star.field() {
        return Err(ClassifyError::FieldMismatch(a.field(), a_star.field()));
    }
    let n = a.n() as i64 - 1;
    if !feasible(n, &a.field()) {
        return Err(ClassifyError::Infeasible {
            order: a.n(),
            field: a.field(),
        });
    }
    Ok(())
}

/// Classifies a pair with caller-supplied spectra. If both spectra are the
/// Krawtchouk spectrum this is [`classify_krawtchouk`]; otherwise a
/// successful recognition yields [`Verdict::LeonardNotKrawtchouk`].
pub fn classify_with_spectra(
    a: &Matrix,
    a_star: &Matrix,
    thetas: &[Scalar],
    thetas_star: &[Scalar],
) -> Result<Classification, ClassifyError> {
    check_inputs(a, a_star)?;
    let kspec = krawtchouk_spectrum(a.field(), a.n() - 1);
    let same_set = |th: &[Scalar]| th.len() == kspec.len() && kspec.iter().all(|t| th.contains(t));
    if same_set(thetas) && same_set(thetas_star) {
        return classify_krawtchouk(a, a_star);
    }
    let system = recognize_leonard_system(a, a_star, thetas, thetas_star)
        .map_err(ClassifyError::NotLeonard)?;
    let mut notes = Vec::new();
    if affine_normalize(&system.theta, &system.theta_star).is_ok() {
        notes.push(
            "eigenvalue sequences are arithmetic; an affine normalization may give Krawtchouk type"
                .into(),
        );
    }
    Ok(Classification {
        verdict: Verdict::LeonardNotKrawtchouk,
        p: None,
        alpha1: None,
        alpha1_star: None,
        system: Some(system),
        iso: None,
        ehf: None,
        notes,
    })
}

/// Solves m = c·x for the scalar c using the first nonzero entry of x in
/// row-major order, then checks the identity everywhere.
fn extract_multiple(m: &Matrix, x: &Matrix) -> Option<Scalar> {
    let n = x.n();
    let (i, j) = (0..n * n)
        .map(|k| (k / n, k % n))
        .find(|&(i, j)| !x.get(i, j).is_zero())?;
    let c = m.get(i, j) / x.get(i, j);
    (*m == x.scale(&c)).then_some(c)
}

/// Decides whether (A, A*) is a Leonard pair of Krawtchouk type, recovers p,
/// and builds the isomorphism onto the reference module.
pub fn classify_krawtchouk(a: &Matrix, a_star: &Matrix) -> Result<Classification, ClassifyError> {
    check_inputs(a, a_star)?;
    let f = a.field();
    let n = a.n() - 1;
    let spec = krawtchouk_spectrum(f, n);
    for (side, x) in [(Side::A, a), (Side::AStar, a_star)] {
        match is_multiplicity_free(x, &spec).expect("candidates are distinct in odd characteristic")
        {
            SpectrumCheck::MultiplicityFree { .. } => {}
            SpectrumCheck::WrongSpectrum => {
                return Err(ClassifyError::WrongSpectrum {
                    side,
                    reason: "characteristic polynomial differs".into(),
                })
            }
            SpectrumCheck::NotDiagonalizable => {
                return Err(ClassifyError::WrongSpectrum {
                    side,
                    reason: "not diagonalizable".into(),
                })
            }
        }
    }
    let system =
        recognize_leonard_system(a, a_star, &spec, &spec).map_err(ClassifyError::NotLeonard)?;
    let rev: Vec<Scalar> = spec.iter().rev().cloned().collect();
    let monotone = |th: &[Scalar]| th == spec.as_slice() || th == rev.as_slice();
    if !monotone(&system.theta) || !monotone(&system.theta_star) {
        return Ok(Classification {
            verdict: Verdict::LeonardNotKrawtchouk,
            p: None,
            alpha1: None,
            alpha1_star: None,
            system: Some(system),
            iso: None,
            ehf: None,
            notes: vec!["spectra are N-2i but the tridiagonal ordering is not monotone".into()],
        });
    }
    let mut system = system;
    if system.theta != spec {
        system = system.relative(Relative::DDown);
    }
    if system.theta_star != spec {
        system = system.relative(Relative::Down);
    }

    if a.is_zero() || a_star.is_zero() {
        return Err(ClassifyError::DegenerateParameter(
            "N = 0: the relations do not determine p".into(),
        ));
    }
    let four = f.from_i64(4);
    let c = commutator(a, a_star).expect("conformable");
    let c_rev = commutator(a_star, a).expect("conformable");
    let acc = commutator(a, &c).expect("conformable");
    let sacc = commutator(a_star, &c_rev).expect("conformable");
    if commutator(a, &acc).expect("conformable") != c.scale(&four) {
        return Err(ClassifyError::RelationMismatch(
            "[A,[A,[A,A*]]] != 4[A,A*]".into(),
        ));
    }
    if commutator(a_star, &sacc).expect("conformable") != c_rev.scale(&four) {
        return Err(ClassifyError::RelationMismatch(
            "[A*,[A*,[A*,A]]] != 4[A*,A]".into(),
        ));
    }
    let alpha1 = extract_multiple(&(&acc - &a_star.scale(&four)), a).ok_or_else(|| {
        ClassifyError::RelationMismatch("[A,[A,A*]] - 4A* is not a multiple of A".into())
    })?;
    let alpha1_star = extract_multiple(&(&sacc - &a.scale(&four)), a_star).ok_or_else(|| {
        ClassifyError::RelationMismatch("[A*,[A*,A]] - 4A is not a multiple of A*".into())
    })?;
    if alpha1 != alpha1_star {
        return Err(ClassifyError::RelationMismatch(format!(
            "alpha1 = {alpha1}, alpha1* = {alpha1_star}"
        )));
    }
    let two = f.from_i64(2);
    let p = (&alpha1 / &four + f.one()) / &two;
    if p.is_zero() || p.is_one() {
        return Err(ClassifyError::DegenerateParameter(format!("p = {p}")));
    }

    let q = f.one() - &p;
    let base = &a.scale(&two) + &a_star.scale(&(&two * (&two * &p - f.one())));
    let eight = f.from_i64(8);
    let e = (&base - &c).scale(&(&eight * &q).inv().expect("p != 1"));
    let ff = (&base + &c).scale(&(&eight * &p).inv().expect("p != 0"));
    let h = a_star.clone();
    let br = |x: &Matrix, y: &Matrix| commutator(x, y).expect("conformable");
    if br(&h, &e) != e.scale(&two) || br(&h, &ff) != ff.scale(&-&two) || br(&e, &ff) != h {
        return Err(ClassifyError::Reconstruction(
            "rebuilt e, h, f fail the sl2 relations".into(),
        ));
    }

    let iso = build_iso(&system, &e, &h, &ff)?;
    let params = Params::new(n as i64, p.clone())
        .map_err(|err| ClassifyError::DegenerateParameter(err.to_string()))?;
    let table = KrawtchoukTable::build(&params);
    let iso_inv = iso
        .inverse()
        .map_err(|_| ClassifyError::Reconstruction("basis is dependent".into()))?;
    let conj = |x: &Matrix| &(&iso_inv * x) * &iso;
    let ref_a = shift(&table.b.transpose());
    let ref_as = shift(&table.d);
    if conj(a) != ref_a || conj(a_star) != ref_as {
        return Err(ClassifyError::Reconstruction(
            "the rebuilt basis does not carry (A, A*) to the reference pair".into(),
        ));
    }
    Ok(Classification {
        verdict: Verdict::KrawtchoukType,
        p: Some(p),
        alpha1: Some(alpha1),
        alpha1_star: Some(alpha1_star),
        system: Some(system),
        iso: Some(iso),
        ehf: Some([e, h, ff]),
        notes: Vec::new(),
    })
}

/// v_0 spans the N-eigenspace of h, v_i = f v_{i−1}/(N − i + 1). The
/// conditions checked here single out the module up to isomorphism.
fn build_iso(
    system: &LeonardSystem,
    e: &Matrix,
    h: &Matrix,
    f_op: &Matrix,
) -> Result<Matrix, ClassifyError> {
    let fld = h.field();
    let n = system.diameter();
    let e0 = &system.e_star[0];
    let v0 = (0..=n)
        .map(|j| e0.column(j))
        .find(|c| c.iter().any(|x| !x.is_zero()))
        .ok_or_else(|| ClassifyError::Reconstruction("E*_0 vanishes".into()))?;
    let mut vs = vec![v0];
    for i in 1..=n {
        let w = f_op.mul_vec(&vs[i - 1]).expect("dims");
        let s = fld
            .from_i64((n - i + 1) as i64)
            .inv()
            .expect("N is feasible");
        vs.push(w.iter().map(|x| x * &s).collect());
    }
    let zero = vec![fld.zero(); n + 1];
    let scale = |v: &[Scalar], c: &Scalar| v.iter().map(|x| x * c).collect::<Vec<_>>();
    for (i, v) in vs.iter().enumerate() {
        let weight = fld.from_i64(n as i64 - 2 * i as i64);
        if h.mul_vec(v).expect("dims") != scale(v, &weight) {
            return Err(ClassifyError::Reconstruction(format!(
                "v_{i} is not an h-eigenvector"
            )));
        }
        let expect = if i == 0 {
            zero.clone()
        } else {
            scale(&vs[i - 1], &fld.from_i64(i as i64))
        };
        if e.mul_vec(v).expect("dims") != expect {
            return Err(ClassifyError::Reconstruction(format!("e v_{i} is wrong")));
        }
    }
    if f_op.mul_vec(&vs[n]).expect("dims") != zero {
        return Err(ClassifyError::Reconstruction("f v_N is nonzero".into()));
    }
    Matrix::from_columns(fld, &vs).map_err(|e| ClassifyError::Reconstruction(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::ModuleRealization;

    fn rat() -> FieldSpec {
        FieldSpec::rational()
    }

    fn s(x: &str) -> Scalar {
        rat().parse_scalar(x).unwrap()
    }

    fn pair(n: i64, p: &str) -> (Matrix, Matrix) {
        let m = ModuleRealization::build(&Params::parse(n, p, rat()).unwrap());
        (shift(&m.a), shift(&m.a_star))
    }

    fn ints(rows: &[&[i64]]) -> Matrix {
        let f = rat();
        Matrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn idempotents_match_product_formula() {
        let (a, _) = pair(4, "2/5");
        let th = krawtchouk_spectrum(rat(), 4);
        let id = Matrix::identity(rat(), 5);
        let e = primitive_idempotents(&a, &th).unwrap();
        for i in 0..5 {
            let mut prod = id.clone();
            for j in (0..5).filter(|&j| j != i) {
                prod = &prod * &(&a - &id.scale(&th[j])).scale(&(&th[i] - &th[j]).inv().unwrap());
            }
            assert_eq!(e[i], prod);
        }
    }

    #[test]
    fn sandwich_agrees_with_products() {
        let (a, a_s) = pair(3, "3");
        let e = primitive_idempotents(&a, &krawtchouk_spectrum(rat(), 3)).unwrap();
        let general = Sandwich::General(&e).nonzero(&a_s);
        assert!(matches!(Sandwich::new(&e), Sandwich::RankOne(_)));
        assert_eq!(Sandwich::new(&e).nonzero(&a_s), general);
        let two = [Matrix::identity(rat(), 2)];
        assert!(matches!(Sandwich::new(&two), Sandwich::General(_)));
    }

    #[test]
    fn idempotent_examples() {
        let f = rat();
        let d = ints(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        let th = krawtchouk_spectrum(f, 2);
        let e = primitive_idempotents(&d, &th).unwrap();
        assert_eq!(e[0], ints(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]));
        let (a, _) = pair(2, "1/2");
        let e = primitive_idempotents(&a, &th).unwrap();
        let sum = e.iter().fold(Matrix::zero(f, 3), |acc, m| &acc + m);
        assert_eq!(sum, Matrix::identity(f, 3));
        for i in 0..3 {
            assert_eq!(e[i].trace(), f.one());
            assert_eq!(e[i].rank(), 1);
            for j in 0..3 {
                let expect = if i == j {
                    e[i].clone()
                } else {
                    Matrix::zero(f, 3)
                };
                assert_eq!(&e[i] * &e[j], expect);
            }
        }
        assert_eq!(
            primitive_idempotents(&d, &[f.zero(), f.zero(), f.one()]),
            Err(LeonardError::RepeatedTheta(Side::A))
        );
        assert!(matches!(
            primitive_idempotents(&d, &[f.zero(), f.one(), f.from_i64(2)]),
            Err(LeonardError::SpectrumMismatch { .. })
        ));
    }

    #[test]
    fn ordering_recovers_shuffled_path() {
        let f = rat();
        let (a, a_s) = pair(4, "1/3");
        let th = krawtchouk_spectrum(f, 4);
        let shuffled: Vec<Scalar> = [3, 0, 4, 1, 2].iter().map(|&i| th[i].clone()).collect();
        let e = primitive_idempotents(&a_s, &shuffled).unwrap();
        let order = order_idempotents(&a, &e).unwrap();
        let got: Vec<Scalar> = order.iter().map(|&i| shuffled[i].clone()).collect();
        let rev: Vec<Scalar> = th.iter().rev().cloned().collect();
        assert!(got == th || got == rev);
        // starts at the endpoint with the smaller input index
        assert_eq!(order[0], 1);
    }

    #[test]
    fn ordering_failures() {
        let f = rat();
        let d = ints(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        let e = primitive_idempotents(&d, &krawtchouk_spectrum(f, 2)).unwrap();
        assert_eq!(
            order_idempotents(&d, &e),
            Err(LeonardError::NotTridiagonalizable(Side::AStar))
        );
        let block = ints(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let d4 = Matrix::diag(f, &krawtchouk_spectrum(f, 3));
        let e4 = primitive_idempotents(&d4, &krawtchouk_spectrum(f, 3)).unwrap();
        assert_eq!(
            order_idempotents(&block, &e4),
            Err(LeonardError::TridiagonalButReducible(Side::AStar))
        );
        let e1 =
            primitive_idempotents(&ints(&[&[1, 0], &[0, -1]]), &krawtchouk_spectrum(f, 1)).unwrap();
        assert_eq!(
            order_idempotents(&ints(&[&[0, 1], &[1, 0]]), &e1).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn recognition_examples() {
        let f = rat();
        let (a, a_s) = pair(2, "1/2");
        let th = krawtchouk_spectrum(f, 2);
        let sys = recognize_leonard_system(&a, &a_s, &th, &th).unwrap();
        assert!(sys.axiom_failures().is_empty());
        let d = ints(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        assert!(matches!(
            recognize_leonard_system(&d, &d, &th, &th),
            Err(LeonardError::NotTridiagonalizable(_))
        ));
    }

    #[test]
    fn relatives_examples() {
        let f = rat();
        let (a, a_s) = pair(3, "2/5");
        let th = krawtchouk_spectrum(f, 3);
        let sys = recognize_leonard_system(&a, &a_s, &th, &th).unwrap();
        assert_eq!(sys.relatives(&[Relative::DDown, Relative::DDown]), sys);
        let dd = sys.relative(Relative::DDown);
        assert_eq!(
            dd.theta,
            sys.theta.iter().rev().cloned().collect::<Vec<_>>()
        );
        for chain in [
            vec![Relative::Down],
            vec![Relative::Star],
            vec![Relative::Star, Relative::Down, Relative::DDown],
        ] {
            assert!(sys.relatives(&chain).axiom_failures().is_empty());
            assert!(sys.relatives(&chain).cross_relations().all());
        }
        let star = sys.relative(Relative::Star);
        let c = classify_krawtchouk(&star.a, &star.a_star).unwrap();
        assert_eq!(c.verdict, Verdict::KrawtchoukType);
    }

    #[test]
    fn cross_relation_examples() {
        let f = rat();
        for (n, p) in [(1, "1/3"), (2, "1/2"), (2, "1/3"), (4, "3")] {
            let (a, a_s) = pair(n, p);
            let th = krawtchouk_spectrum(f, n as usize);
            let sys = recognize_leonard_system(&a, &a_s, &th, &th).unwrap();
            let r = sys.cross_relations();
            assert!(r.all(), "{:?}", r.failures());
        }
        let (a, a_s) = pair(2, "1/2");
        let th = krawtchouk_spectrum(f, 2);
        let sys = recognize_leonard_system(&a, &a_s, &th, &th).unwrap();
        let m = &(&sys.e_star[0] * &(&a * &a)) * &sys.e_star[2];
        assert!(!m.is_zero());
    }

    #[test]
    fn basis_theorem_examples() {
        let f = rat();
        for n in [1, 2] {
            let (a, a_s) = pair(n, "1/2");
            let th = krawtchouk_spectrum(f, n as usize);
            let sys = recognize_leonard_system(&a, &a_s, &th, &th).unwrap();
            let d = (n as usize + 1).pow(2);
            assert_eq!(sys.basis_ranks(), (d, d));
        }
    }

    #[test]
    fn classify_examples() {
        let (a, a_s) = pair(2, "1/2");
        let c = classify_krawtchouk(&a, &a_s).unwrap();
        assert_eq!(c.verdict, Verdict::KrawtchoukType);
        assert_eq!(c.p, Some(s("1/2")));
        assert_eq!(c.alpha1, Some(rat().zero()));
        // the 4x4 Sylvester matrix against diag(3,1,-1,-3)
        let syl = ints(&[&[0, 1, 0, 0], &[3, 0, 2, 0], &[0, 2, 0, 3], &[0, 0, 1, 0]]);
        let diag = Matrix::diag(rat(), &krawtchouk_spectrum(rat(), 3));
        let c = classify_krawtchouk(&syl, &diag).unwrap();
        assert_eq!(c.p, Some(s("1/2")));
        let unshifted = ModuleRealization::build(&Params::parse(2, "1/3", rat()).unwrap());
        let err = classify_krawtchouk(&unshifted.a, &unshifted.a_star).unwrap_err();
        assert_eq!(err.code(), "wrong-spectrum");
        assert!(err.to_string().contains("affine_normalize"));
    }

    #[test]
    fn classify_round_trip_and_iso() {
        for (n, p) in [(1, "1/3"), (3, "2/5"), (4, "-1/2"), (5, "3")] {
            let (a, a_s) = pair(n, p);
            let c = classify_krawtchouk(&a, &a_s).unwrap();
            assert_eq!(c.p, Some(s(p)));
            let iso = c.iso.unwrap();
            assert_eq!(iso, Matrix::identity(rat(), n as usize + 1));
        }
    }

    #[test]
    fn classify_errors() {
        let f = rat();
        let z = Matrix::zero(f, 1);
        assert_eq!(
            classify_krawtchouk(&z, &z).unwrap_err().code(),
            "degenerate-parameter"
        );
        let d = ints(&[&[1, 0], &[0, -1]]);
        assert_eq!(
            classify_krawtchouk(&d, &d).unwrap_err().code(),
            "not-leonard"
        );
        let three = Matrix::identity(f, 3);
        assert_eq!(
            classify_krawtchouk(&d, &three).unwrap_err(),
            ClassifyError::OrderMismatch(2, 3)
        );
    }

    #[test]
    fn leonard_but_not_krawtchouk() {
        let f = rat();
        // split form of a system with eigenvalue sequence (0, 2, -2) and
        // dual sequence (2, 0, -2)
        let a2 = ints(&[&[0, 0, 0], &[1, 2, 0], &[0, 1, -2]]);
        let as2 = ints(&[&[2, 1, 0], &[0, 0, -11], &[0, 0, -2]]);
        let c = classify_krawtchouk(&a2, &as2).unwrap();
        assert_eq!(c.verdict, Verdict::LeonardNotKrawtchouk);
        let th = [f.from_i64(0), f.from_i64(1), f.from_i64(3)];
        let a3 = ints(&[&[0, 0, 0], &[1, 1, 0], &[0, 1, 3]]);
        let as3 = ints(&[&[2, 1, 0], &[0, 0, 3], &[0, 0, -2]]);
        let c = classify_with_spectra(&a3, &as3, &th, &krawtchouk_spectrum(f, 2)).unwrap();
        assert_eq!(c.verdict, Verdict::LeonardNotKrawtchouk);
    }

    #[test]
    fn affine_examples() {
        let f = rat();
        let th: Vec<Scalar> = (0..=4).map(|i| f.from_i64(i)).collect();
        let r = affine_normalize(&th, &krawtchouk_spectrum(f, 4)).unwrap();
        assert_eq!(
            (r.alpha.clone(), r.beta.clone()),
            (f.from_i64(-2), f.from_i64(4))
        );
        assert_eq!((r.alpha_star, r.beta_star), (f.one(), f.zero()));
        let bad = [f.from_i64(0), f.from_i64(1), f.from_i64(4)];
        assert_eq!(
            affine_normalize(&bad, &bad),
            Err(LeonardError::NotArithmetic)
        );
    }
}
