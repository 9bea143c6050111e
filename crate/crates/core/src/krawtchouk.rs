//! Krawtchouk polynomials K_i(x) for a feasible N and a parameter p ∉ {0, 1},
//! together with the eigenmatrix U and its companions B, D, K and P.

use thiserror::Error;

use crate::field::{
    binomial, factorial, feasible, shifted_factorial, FieldError, FieldSpec, Scalar,
};
use crate::linalg::{Matrix, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("N = {n} is not feasible over {field}")]
    Infeasible { n: i64, field: FieldSpec },
    #[error("p = {0} is not allowed (p must differ from 0 and 1)")]
    DegenerateP(Scalar),
    #[error("index {index} is outside 0..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The pair (N, p). The field is the field of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    p: Scalar,
}

impl Params {
    pub fn new(n: i64, p: Scalar) -> Result<Params, ParamsError> {
        let field = p.field();
        if !feasible(n, &field) {
            return Err(ParamsError::Infeasible { n, field });
        }
        if p.is_zero() || p.is_one() {
            return Err(ParamsError::DegenerateP(p));
        }
        Ok(Params { n: n as usize, p })
    }

    /// Parses `p` from text ("2/5", "-1", "6") in `field`.
    pub fn parse(n: i64, p: &str, field: FieldSpec) -> Result<Params, ParamsError> {
        Params::new(n, field.parse_scalar(p)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &Scalar {
        &self.p
    }

    pub fn field(&self) -> FieldSpec {
        self.p.field()
    }

    /// Image of these parameters under the reduction map into `target`.
    pub fn reduce_to(&self, target: &FieldSpec) -> Result<Params, ParamsError> {
        Params::new(self.n as i64, self.p.reduce_to(target)?)
    }

    fn int(&self, k: i64) -> Scalar {
        self.field().from_i64(k)
    }

    fn check(&self, index: usize) -> Result<(), ParamsError> {
        if index > self.n {
            Err(ParamsError::IndexOutOfRange { index, n: self.n })
        } else {
            Ok(())
        }
    }

    /// 1 − p.
    pub fn q(&self) -> Scalar {
        self.field().one() - &self.p
    }

    /// (1 − p)^N.
    pub fn q_pow_n(&self) -> Scalar {
        self.q().pow(self.n as u32)
    }

    /// b_i = (i − N)p.
    pub fn b(&self, i: usize) -> Scalar {
        self.int(i as i64 - self.n as i64) * &self.p
    }

    /// c_i = i(p − 1).
    pub fn c(&self, i: usize) -> Scalar {
        self.int(i as i64) * (&self.p - self.field().one())
    }

    /// a_i = −b_i − c_i.
    pub fn a(&self, i: usize) -> Scalar {
        -(self.b(i) + self.c(i))
    }

    /// K_i(x), summed directly from the terminating series.
    pub fn kraw_eval(&self, i: usize, x: &Scalar) -> Result<Scalar, ParamsError> {
        self.check(i)?;
        let f = self.field();
        let mut term = f.one();
        let mut sum = f.one();
        for n in 0..i {
            let n = n as i64;
            let num = self.int(n - i as i64) * (self.int(n) - x);
            let den = self.int(n - self.n as i64) * self.int(n + 1) * &self.p;
            term = term * num * den.inv()?;
            sum = sum + &term;
        }
        Ok(sum)
    }

    /// K_i(j) at an integer point.
    pub fn kraw_at(&self, i: usize, j: usize) -> Result<Scalar, ParamsError> {
        self.kraw_eval(i, &self.int(j as i64))
    }

    /// K_i as a polynomial in x.
    pub fn kraw_coeffs(&self, i: usize) -> Result<Poly, ParamsError> {
        self.check(i)?;
        let f = self.field();
        let minus_i = self.int(-(i as i64));
        let minus_n = self.int(-(self.n as i64));
        let mut falling = Poly::one(f);
        let mut out = Poly::zero(f);
        for n in 0..=i {
            let den = shifted_factorial(&minus_n, n) * factorial(n, &f) * self.p.pow(n as u32);
            let c = shifted_factorial(&minus_i, n) * den.inv()?;
            out = out.add(&falling.scale(&c));
            // (−x)_{n+1} = (−x)_n (n − x)
            falling = falling.mul(&Poly::new(f, vec![self.int(n as i64), -f.one()]));
        }
        Ok(out)
    }

    /// k_i = C(N, i)(p/(1 − p))^i.
    pub fn weight(&self, i: usize) -> Result<Scalar, ParamsError> {
        self.check(i)?;
        let ratio = &self.p * self.q().inv()?;
        Ok(binomial(self.n, i, &self.field()) * ratio.pow(i as u32))
    }

    /// k_i = b_0⋯b_{i−1} / (c_1⋯c_i).
    pub fn weight_by_ratio(&self, i: usize) -> Result<Scalar, ParamsError> {
        self.check(i)?;
        let f = self.field();
        let num = (0..i).fold(f.one(), |acc, j| acc * self.b(j));
        let den = (1..=i).fold(f.one(), |acc, j| acc * self.c(j));
        Ok(num * den.inv()?)
    }

    pub fn weights(&self) -> Vec<Scalar> {
        (0..=self.n)
            .map(|i| self.weight(i).expect("index in range"))
            .collect()
    }
}

/// U, B, D, K and P for one parameter pair, built eagerly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukTable {
    pub params: Params,
    pub u: Matrix,
    pub b: Matrix,
    pub d: Matrix,
    pub k: Matrix,
    pub p: Matrix,
    pub weights: Vec<Scalar>,
}

impl KrawtchoukTable {
    pub fn build(params: &Params) -> KrawtchoukTable {
        let f = params.field();
        let n = params.n() + 1;
        let u = Matrix::from_fn(f, n, |i, j| params.kraw_at(i, j).expect("index in range"));
        let b = Matrix::from_fn(f, n, |i, j| {
            if j == i + 1 {
                params.b(i)
            } else if i == j + 1 {
                params.c(i)
            } else if i == j {
                params.a(i)
            } else {
                f.zero()
            }
        });
        let d = Matrix::diag(f, &(0..n).map(|i| f.from_i64(i as i64)).collect::<Vec<_>>());
        let weights = params.weights();
        let k = Matrix::diag(f, &weights);
        let p = &u * &k;
        KrawtchoukTable {
            params: params.clone(),
            u,
            b,
            d,
            k,
            p,
            weights,
        }
    }

    pub fn k_inv(&self) -> Matrix {
        let f = self.params.field();
        Matrix::diag(
            f,
            &self
                .weights
                .iter()
                .map(|w| w.inv().expect("weights are nonzero"))
                .collect::<Vec<_>>(),
        )
    }

    /// Uᵗ = U, Bᵗ = KBK⁻¹, UD = BU, DU = UBᵗ, (1 − p)^N UKUK = I.
    pub fn eigenmatrix_identities(&self) -> IdentityReport {
        let f = self.params.field();
        let id = Matrix::identity(f, self.u.n());
        let bt = self.b.transpose();
        let kbk = &(&self.k * &self.b) * &self.k_inv();
        let ukuk = &(&(&self.u * &self.k) * &self.u) * &self.k;
        IdentityReport::new(vec![
            ("U^t = U", self.u.transpose() == self.u),
            ("B^t = K B K^-1", bt == kbk),
            ("U D = B U", &self.u * &self.d == &self.b * &self.u),
            ("D U = U B^t", &self.d * &self.u == &self.u * &bt),
            (
                "(1-p)^N U K U K = I",
                ukuk.scale(&self.params.q_pow_n()) == id,
            ),
        ])
    }

    /// Pᵗ = KPK⁻¹, Bᵗ = KBK⁻¹, PD = BP, PB = DP, P² = (1 − p)^{−N} I.
    pub fn p_identities(&self) -> IdentityReport {
        let f = self.params.field();
        let kinv = self.k_inv();
        let id = Matrix::identity(f, self.u.n());
        let qn_inv = self.params.q_pow_n().inv().expect("1 - p is nonzero");
        IdentityReport::new(vec![
            (
                "P^t = K P K^-1",
                self.p.transpose() == &(&self.k * &self.p) * &kinv,
            ),
            (
                "B^t = K B K^-1",
                self.b.transpose() == &(&self.k * &self.b) * &kinv,
            ),
            ("P D = B P", &self.p * &self.d == &self.b * &self.p),
            ("P B = D P", &self.p * &self.b == &self.d * &self.p),
            ("P^2 = (1-p)^-N I", &self.p * &self.p == id.scale(&qn_inv)),
        ])
    }
}

/// Named boolean outcomes of a group of identity checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<(String, bool)>,
}

impl IdentityReport {
    pub fn new<S: Into<String>>(checks: Vec<(S, bool)>) -> IdentityReport {
        IdentityReport {
            checks: checks.into_iter().map(|(n, b)| (n.into(), b)).collect(),
        }
    }

    pub fn all(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
    }
}

/// xK_i(x) − [c_i K_{i−1}(x) + a_i K_i(x) + b_i K_{i+1}(x)] at an integer x.
/// Terms whose coefficient vanishes are never evaluated.
pub fn three_term_residual(params: &Params, i: usize, x: usize) -> Result<Scalar, ParamsError> {
    params.check(i)?;
    params.check(x)?;
    let xs = params.int(x as i64);
    let mut rhs = params.a(i) * params.kraw_at(i, x)?;
    if i > 0 {
        rhs = rhs + params.c(i) * params.kraw_at(i - 1, x)?;
    }
    if i < params.n() {
        rhs = rhs + params.b(i) * params.kraw_at(i + 1, x)?;
    }
    Ok(xs * params.kraw_at(i, x)? - rhs)
}

/// iK_i(x) − [c_x K_i(x−1) + a_x K_i(x) + b_x K_i(x+1)], the same recurrence
/// in the variable.
pub fn difference_residual(params: &Params, i: usize, x: usize) -> Result<Scalar, ParamsError> {
    params.check(i)?;
    params.check(x)?;
    let is = params.int(i as i64);
    let mut rhs = params.a(x) * params.kraw_at(i, x)?;
    if x > 0 {
        rhs = rhs + params.c(x) * params.kraw_at(i, x - 1)?;
    }
    if x < params.n() {
        rhs = rhs + params.b(x) * params.kraw_at(i, x + 1)?;
    }
    Ok(is * params.kraw_at(i, x)? - rhs)
}

/// Both orthogonality relations, checked exhaustively: first summing over the
/// degree, then over the variable.
pub fn orthogonality_check(params: &Params) -> Result<(bool, bool), ParamsError> {
    let f = params.field();
    let n = params.n();
    let u = Matrix::from_fn(f, n + 1, |i, j| params.kraw_at(i, j).expect("in range"));
    let q = params.q();
    let mass: Vec<Scalar> = (0..=n)
        .map(|k| binomial(n, k, &f) * params.p().pow(k as u32) * q.pow((n - k) as u32))
        .collect();
    let ratio = &q * params.p().inv()?;
    let norm: Vec<Scalar> = (0..=n)
        .map(|i| binomial(n, i, &f).inv().map(|c| c * ratio.pow(i as u32)))
        .collect::<Result<_, _>>()?;
    let expected = |i: usize, j: usize| if i == j { norm[i].clone() } else { f.zero() };
    let mut over_degree = true;
    let mut over_variable = true;
    for i in 0..=n {
        for j in 0..=n {
            let s_deg = (0..=n).fold(f.zero(), |acc, k| {
                acc + u.get(k, i) * u.get(k, j) * &mass[k]
            });
            let s_var = (0..=n).fold(f.zero(), |acc, k| {
                acc + u.get(i, k) * u.get(j, k) * &mass[k]
            });
            over_degree &= s_deg == expected(i, j);
            over_variable &= s_var == expected(i, j);
        }
    }
    Ok((over_degree, over_variable))
}

/// Expands (1 − t(1 − p)/p)^x (1 + t)^{N−x} and compares the coefficient of
/// t^i with C(N, i)K_i(x).
pub fn generating_function_check(params: &Params, x: usize) -> Result<bool, ParamsError> {
    params.check(x)?;
    let f = params.field();
    let n = params.n();
    let slope = -(params.q() * params.p().inv()?);
    let left = Poly::new(f, vec![f.one(), slope]);
    let right = Poly::new(f, vec![f.one(), f.one()]);
    let mut g = Poly::one(f);
    for _ in 0..x {
        g = g.mul(&left);
    }
    for _ in x..n {
        g = g.mul(&right);
    }
    for i in 0..=n {
        if g.coeff(i) != binomial(n, i, &f) * params.kraw_at(i, x)? {
            return Ok(false);
        }
    }
    Ok(g.degree().is_none_or(|d| d <= n))
}

/// K_i(j) = K_j(i) for all i, j.
pub fn self_duality_check(params: &Params) -> Result<bool, ParamsError> {
    for i in 0..=params.n() {
        for j in 0..i {
            if params.kraw_at(i, j)? != params.kraw_at(j, i)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
