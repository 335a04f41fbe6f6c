//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are `x1..xd`, optionally followed by `y`. Terms are stored in a
//! map keyed by exponent vectors; zero coefficients are never stored.
//!
//! # Text syntax
//!
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*        divisor must be constant
//! unary  := "-" unary | power
//! power  := atom ["^" integer]
//! atom   := number | variable | "(" expr ")"
//! number := digits ["." digits]               parsed exactly
//! variable := "x1" | ... | "xd" | "y"         "x" means x1 when d = 1
//! ```
//!
//! Printing is in descending graded-lex order, e.g. `x1^2 - 3*y^2`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = BigRational;
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational from a finite double.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nx: usize,
    has_y: bool,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nx: usize, has_y: bool) -> Poly {
        Poly { nx, has_y, terms: BTreeMap::new() }
    }

    pub fn constant(nx: usize, has_y: bool, c: Rat) -> Poly {
        let mut p = Poly::zero(nx, has_y);
        p.add_term(vec![0; nx + has_y as usize], c);
        p
    }

    pub fn one(nx: usize, has_y: bool) -> Poly {
        Poly::constant(nx, has_y, Rat::one())
    }

    /// The variable with index `i` (`i = nx` is `y` when present).
    pub fn var(nx: usize, has_y: bool, i: usize) -> Poly {
        let mut e = vec![0; nx + has_y as usize];
        e[i] = 1;
        let mut p = Poly::zero(nx, has_y);
        p.add_term(e, Rat::one());
        p
    }

    pub fn monomial(nx: usize, has_y: bool, exps: Vec<u32>, c: Rat) -> Poly {
        let mut p = Poly::zero(nx, has_y);
        p.add_term(exps, c);
        p
    }

    /// The linear form `Σ β_j x_j`.
    pub fn linear_form(nx: usize, has_y: bool, beta: &[Rat]) -> Poly {
        let mut p = Poly::zero(nx, has_y);
        for (j, b) in beta.iter().enumerate() {
            let mut e = vec![0; nx + has_y as usize];
            e[j] = 1;
            p.add_term(e, b.clone());
        }
        p
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn has_y(&self) -> bool {
        self.has_y
    }

    pub fn nvars(&self) -> usize {
        self.nx + self.has_y as usize
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.nvars(), "exponent length does not match variable count");
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn same_space(&self, other: &Poly) {
        assert!(
            self.nx == other.nx && self.has_y == other.has_y,
            "polynomials live in different variable spaces"
        );
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nx, self.has_y);
        }
        Poly {
            nx: self.nx,
            has_y: self.has_y,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(self.nx, self.has_y);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nx, self.has_y);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = m.0.clone();
            n[i] -= 1;
            p.add_term(n, c * rat_int(e as i64));
        }
        p
    }

    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            nx: self.nx,
            has_y: self.has_y,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.nvars() {
            return Err(Error::Dimension { expected: self.nvars(), got });
        }
        Ok(())
    }

    /// Exact value at a rational point.
    pub fn eval_rat(&self, point: &[Rat]) -> Result<Rat> {
        self.check_dim(point.len())?;
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value at a real point, from per-variable power tables with the terms
    /// summed pairwise in canonical order.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.check_dim(point.len())?;
        Ok(self.compile().eval(point))
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly::new(self)
    }

    /// `p(M x, y)` for a `nx × nx` rational matrix `M`.
    pub fn act(&self, m: &RatMatrix) -> Poly {
        assert_eq!(m.len(), self.nx, "matrix size does not match variable count");
        if let Some(sp) = signed_permutation(m) {
            let mut p = Poly::zero(self.nx, self.has_y);
            for (mono, c) in &self.terms {
                let mut e = vec![0; self.nvars()];
                let mut neg = false;
                for i in 0..self.nx {
                    let (j, s) = sp[i];
                    e[j] += mono.0[i];
                    if s && mono.0[i] % 2 == 1 {
                        neg = !neg;
                    }
                }
                if self.has_y {
                    e[self.nx] = mono.0[self.nx];
                }
                p.add_term(e, if neg { -c.clone() } else { c.clone() });
            }
            return p;
        }
        let rows: Vec<Poly> = m.iter().map(|r| Poly::linear_form(self.nx, self.has_y, r)).collect();
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(self.nx, self.has_y);
        for (mono, c) in &self.terms {
            let mut t = Poly::constant(self.nx, self.has_y, c.clone());
            for i in 0..self.nx {
                let e = mono.0[i];
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| rows[i].pow(e)).clone();
                t = &t * &pw;
            }
            if self.has_y && mono.0[self.nx] > 0 {
                t = &t * &Poly::var(self.nx, true, self.nx).pow(mono.0[self.nx]);
            }
            out = &out + &t;
        }
        out
    }

    /// `p(σ_β x)` with `σ_β = I - 2ββᵀ/⟨β,β⟩`.
    pub fn reflect(&self, beta: &[Rat]) -> Poly {
        self.act(&reflection_matrix(beta))
    }

    /// Exact quotient by the linear form `⟨β,x⟩`; `None` if the remainder
    /// is nonzero.
    pub fn div_linear(&self, beta: &[Rat]) -> Option<Poly> {
        let k = beta.iter().position(|b| !b.is_zero())?;
        let bk = beta[k].clone();
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nx, self.has_y);
        loop {
            let lead = rem
                .terms
                .iter()
                .filter(|(m, _)| m.0[k] > 0)
                .max_by(|a, b| a.0 .0[k].cmp(&b.0 .0[k]).then_with(|| a.0.cmp(b.0)))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = lead else { break };
            let mut e = m.0.clone();
            e[k] -= 1;
            let coef = &c / &bk;
            for (j, b) in beta.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut f = e.clone();
                f[j] += 1;
                rem.add_term(f, -(&coef * b));
            }
            q.add_term(e, coef);
        }
        if rem.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// `(p - σ_β p) / ⟨β,x⟩`, against the linear form of `β` itself.
    ///
    /// Panics if the division is not exact, which would mean an arithmetic
    /// bug: `p - σ_β p` always vanishes on the hyperplane `⟨β,x⟩ = 0`.
    pub fn divided_reflection_difference(&self, beta: &[Rat]) -> Poly {
        let diff = self - &self.reflect(beta);
        diff.div_linear(beta).expect("reflection difference is not divisible by its linear form")
    }

    /// Substitute `x_i ↦ values[i]` for every `i` where `values[i]` is set.
    pub fn partial_eval(&self, values: &[Option<Rat>]) -> Poly {
        let mut p = Poly::zero(self.nx, self.has_y);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let mut t = c.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    t *= num_traits::pow(v.clone(), e[i] as usize);
                    e[i] = 0;
                }
            }
            p.add_term(e, t);
        }
        p
    }

    /// Multiply by a common factor so all coefficients become coprime
    /// integers with a positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rat::from_integer(l.clone())).to_integer();
            g = g.gcd(&n);
        }
        let lead_neg = self.terms.values().next_back().map(|c| c.is_negative()).unwrap_or(false);
        let mut f = Rat::new(l, g);
        if lead_neg {
            f = -f;
        }
        self.scale(&f)
    }

    pub fn parse(text: &str, nx: usize, has_y: bool) -> Result<Poly> {
        let mut p = Parser { s: text.as_bytes(), i: 0, nx, has_y };
        p.skip_ws();
        let e = p.expr()?;
        p.skip_ws();
        if p.i != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn var_name(&self, i: usize) -> String {
        if self.has_y && i == self.nx {
            "y".to_string()
        } else {
            format!("x{}", i + 1)
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.var_name(i)),
                    _ => factors.push(format!("{}^{}", self.var_name(i), e)),
                }
            }
            let coef = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            if factors.is_empty() {
                write!(f, "{coef}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", coef, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.same_space(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.0.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.same_space(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.0.clone(), -c.clone());
        }
        p
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.same_space(rhs);
        let mut p = Poly::zero(self.nx, self.has_y);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let e: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// `I - 2ββᵀ/⟨β,β⟩`.
pub fn reflection_matrix(beta: &[Rat]) -> RatMatrix {
    let nn: Rat = beta.iter().map(|b| b * b).fold(Rat::zero(), |a, b| a + b);
    let d = beta.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let id = if i == j { Rat::one() } else { Rat::zero() };
                    id - rat_int(2) * &beta[i] * &beta[j] / &nn
                })
                .collect()
        })
        .collect()
}

/// `(σx)_i = ±x_{π(i)}` as `(π(i), negative)` pairs, if `m` has that form.
fn signed_permutation(m: &RatMatrix) -> Option<Vec<(usize, bool)>> {
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut hit = None;
        for (j, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if hit.is_some() || !(v.is_one() || (-v).is_one()) {
                return None;
            }
            hit = Some((j, v.is_negative()));
        }
        out.push(hit?);
    }
    Some(out)
}

/// Floating-point form of a polynomial for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, f64)>,
}

impl CompiledPoly {
    fn new(p: &Poly) -> CompiledPoly {
        let n = p.nvars();
        let mut max_exp = vec![0; n];
        let mut terms = Vec::with_capacity(p.terms.len());
        for (m, c) in &p.terms {
            for i in 0..n {
                max_exp[i] = max_exp[i].max(m.0[i]);
            }
            terms.push((m.0.clone(), rat_to_f64(c)));
        }
        CompiledPoly { nvars: n, max_exp, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut pw: Vec<Vec<f64>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut v = Vec::with_capacity(self.max_exp[i] as usize + 1);
            let mut acc = 1.0;
            v.push(acc);
            for _ in 0..self.max_exp[i] {
                acc *= x[i];
                v.push(acc);
            }
            pw.push(v);
        }
        let vals: Vec<f64> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for i in 0..self.nvars {
                    t *= pw[i][e[i] as usize];
                }
                t
            })
            .collect();
        crate::quadrature::pairwise_sum(&vals)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    nx: usize,
    has_y: bool,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { column: self.i + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut neg = false;
        match self.peek() {
            Some(b'+') => self.i += 1,
            Some(b'-') => {
                self.i += 1;
                neg = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    let at = self.i;
                    let d = self.unary()?;
                    let c = match d.degree() {
                        Some(0) => d.coefficient(&vec![0; d.nvars()]),
                        _ => {
                            self.i = at;
                            return Err(self.err("division is only allowed by a nonzero constant"));
                        }
                    };
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.skip_ws();
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            if start == self.i {
                return Err(self.err("expected a nonnegative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.i])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Poly> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let int_part = std::str::from_utf8(&self.s[start..self.i]).unwrap().to_string();
        let mut frac = String::new();
        if self.i < self.s.len() && self.s[self.i] == b'.' {
            self.i += 1;
            let fs = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            frac = std::str::from_utf8(&self.s[fs..self.i]).unwrap().to_string();
        }
        if int_part.is_empty() && frac.is_empty() {
            return Err(self.err("malformed number"));
        }
        let digits = format!("{}{}", if int_part.is_empty() { "0" } else { &int_part }, frac);
        let num: BigInt = digits.parse().map_err(|_| self.err("malformed number"))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        Ok(Poly::constant(self.nx, self.has_y, Rat::new(num, den)))
    }

    fn variable(&mut self) -> Result<Poly> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_alphanumeric() {
            self.i += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        let idx = if name == "y" && self.has_y {
            Some(self.nx)
        } else if name == "x" && self.nx == 1 {
            Some(0)
        } else if let Some(n) = name.strip_prefix('x') {
            n.parse::<usize>().ok().filter(|k| *k >= 1 && *k <= self.nx).map(|k| k - 1)
        } else {
            None
        };
        match idx {
            Some(i) => Ok(Poly::var(self.nx, self.has_y, i)),
            None => {
                self.i = start;
                Err(self.err(&format!("unknown variable '{name}'")))
            }
        }
    }
}

/// All exponent vectors of total degree `deg` in `n` variables, ascending.
pub fn monomials_of_degree(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=deg {
            prefix.push(e);
            rec(n - 1, deg - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, deg, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| Monomial(a.clone()).cmp(&Monomial(b.clone())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, nx: usize, y: bool) -> Poly {
        Poly::parse(s, nx, y).unwrap()
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let q = p("x1^2 - 3*y^2 + 1/2*x1*y - 0.25", 1, true);
        assert_eq!(q.to_string(), "x1^2 + 1/2*x1*y - 3*y^2 - 1/4");
        assert_eq!(p(&q.to_string(), 1, true), q);
    }

    #[test]
    fn parse_errors_carry_column() {
        match Poly::parse("x1 + z", 1, false) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(Poly::parse("x1/x1", 1, false).is_err());
        assert!(Poly::parse("x3", 2, false).is_err());
    }

    #[test]
    fn eval_examples() {
        let q = p("x1^2 + y", 1, true);
        assert_eq!(q.eval(&[2.0, 3.0]).unwrap(), 7.0);
        assert_eq!(Poly::zero(2, true).eval(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert!(matches!(q.eval(&[1.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn act_examples() {
        let flip = vec![vec![rat_int(-1), rat_int(0)], vec![rat_int(0), rat_int(1)]];
        assert_eq!(p("x1*x2", 2, false).act(&flip), p("-x1*x2", 2, false));
        let swap = vec![vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(0)]];
        assert_eq!(p("x1^2", 2, false).act(&swap), p("x2^2", 2, false));
    }

    #[test]
    fn divided_difference_examples() {
        let one = vec![rat_int(1)];
        assert_eq!(p("x", 1, false).divided_reflection_difference(&one), p("2", 1, false));
        assert!(p("x^2", 1, false).divided_reflection_difference(&one).is_zero());
        let beta = vec![rat_int(1), rat_int(-1)];
        let l = Poly::linear_form(2, false, &beta);
        let q = l.pow(3).divided_reflection_difference(&beta);
        assert_eq!(q, l.pow(2).scale(&rat_int(2)));
    }

    #[test]
    fn general_matrix_action() {
        // rotation-free rational orthogonal matrix (3/5, 4/5; 4/5, -3/5).
        let m = vec![vec![rat(3, 5), rat(4, 5)], vec![rat(4, 5), rat(-3, 5)]];
        let q = p("x1^2 + x2^2 + x1*y", 2, true);
        let r = q.act(&m);
        assert_eq!(r.act(&m), q);
        assert_eq!(r.homogeneous_part(2).coefficient(&[2, 0, 0]) + r.coefficient(&[0, 2, 0]), rat_int(2));
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(1, 3), vec![vec![3]]);
    }
}
