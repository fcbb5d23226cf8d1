//! Sparse multivariate polynomials over an exact field.
//!
//! A [`Poly`] carries its own ordered variable list; exponent vectors are
//! aligned with it. Arithmetic between polynomials with different variable
//! lists first merges the lists, so constants and polynomials built in
//! different contexts combine freely.

mod text;
mod univariate;

pub use text::{parse_poly, parse_poly_in};
pub use univariate::UPoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug)]
pub struct Poly<F> {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn zero_in(vars: &[&str]) -> Self {
        Poly { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], F::one());
        Poly { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; zero
    /// coefficients are dropped and repeated exponents accumulate.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F)>,
    {
        let mut p = Self::zero_in(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<F> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(F::zero))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Variables that occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    fn add_term(&mut self, e: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Re-expresses the polynomial over a variable list that must contain
    /// every variable actually used.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] > 0) {
                        return Err(Error::Arity(format!("variable `{v}` not in target list")));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = Poly { vars: vars.to_vec(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = x;
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    fn merged_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.merged_vars(other);
        (self.with_vars(&vars).expect("merge"), other.with_vars(&vars).expect("merge"))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())).collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Degree in `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max(),
            None => Some(0),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Weighted degree when all terms share it.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().zip(weights).map(|(a, w)| a * w).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Coefficients with respect to `var`, lowest power first. Each
    /// coefficient keeps the full variable list with exponent 0 in `var`.
    pub fn coeffs_in(&self, var: &str) -> Vec<Self> {
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Poly { vars: self.vars.clone(), terms: BTreeMap::new() }; deg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[i] as usize;
            ne[i] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    pub fn derivative(&self, var: &str) -> Self {
        let mut out = Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        let Some(i) = self.var_index(var) else {
            return out;
        };
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.clone() * F::from_i64(e[i] as i64));
        }
        out
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: &str, value: &Self) -> Self {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let (base, value) = self.aligned(value);
        let deg = base.degree_in(var).unwrap_or(0);
        let mut powers = vec![Self::one()];
        for k in 1..=deg {
            let next = &powers[k as usize - 1] * &value;
            powers.push(next);
        }
        let mut out = Poly { vars: base.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &base.terms {
            let mut ne = e.clone();
            let k = ne[i];
            ne[i] = 0;
            let mono = Poly { vars: base.vars.clone(), terms: BTreeMap::from([(ne, c.clone())]) };
            out = &out + &(&mono * &powers[k as usize]);
        }
        out
    }

    pub fn eval_var(&self, var: &str, value: &F) -> Self {
        self.substitute(var, &Self::constant(value.clone()))
    }

    /// Evaluates every variable; missing variables are an error.
    pub fn eval_all(&self, values: &[(&str, F)]) -> Result<F> {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let v = values
                    .iter()
                    .find(|(n, _)| *n == self.vars[i])
                    .ok_or_else(|| Error::Arity(format!("no value for `{}`", self.vars[i])))?;
                for _ in 0..x {
                    term = term * v.1.clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Lex-leading term (first variable most significant).
    pub fn lex_leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (mut r, d) = self.aligned(d);
        if let Some(c) = d.as_constant() {
            return Some(r.scale(&c.inv()));
        }
        let (dl, dc) = d.lex_leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut q = Poly { vars: r.vars.clone(), terms: BTreeMap::new() };
        while let Some((rl, rc)) = r.lex_leading().map(|(e, c)| (e.clone(), c.clone())) {
            if rl.iter().zip(&dl).any(|(a, b)| a < b) {
                return None;
            }
            let e: Monomial = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let c = rc / dc.clone();
            let t = Poly { vars: r.vars.clone(), terms: BTreeMap::from([(e.clone(), c.clone())]) };
            r = &r - &(&t * &d);
            q.add_term(e, c);
        }
        Some(q)
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Dense univariate view in `var`; errors if any other variable occurs.
    pub fn to_upoly(&self, var: &str) -> Result<UPoly<F>> {
        let used = self.used_vars();
        if used.iter().any(|v| v != var) {
            return Err(Error::Arity(format!("expected a polynomial in `{var}` only")));
        }
        let coeffs = self
            .coeffs_in(var)
            .into_iter()
            .map(|c| c.as_constant().expect("constant coefficient"))
            .collect();
        Ok(UPoly::new(coeffs))
    }

    /// Dense univariate view in its single variable.
    pub fn as_univariate(&self) -> Result<(String, UPoly<F>)> {
        let used = self.used_vars();
        match used.len() {
            0 => {
                let name = self.vars.first().cloned().unwrap_or_else(|| "x".into());
                Ok((name, UPoly::new(vec![self.as_constant().unwrap()])))
            }
            1 => Ok((used[0].clone(), self.to_upoly(&used[0])?)),
            _ => Err(Error::Arity(format!("univariate input required, got {} variables", used.len()))),
        }
    }

    pub fn from_upoly(var: &str, u: &UPoly<F>) -> Self {
        let terms = u.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone()));
        Self::from_terms(&[var], terms)
    }

    /// Dehomogenises a form by setting `var` to 1.
    pub fn dehomogenize(&self, var: &str) -> Self {
        self.eval_var(var, &F::one())
    }

    /// Homogenises with respect to `hvar` up to total degree `deg` in the
    /// variables `among`.
    pub fn homogenize(&self, among: &[&str], hvar: &str, deg: u32) -> Self {
        let mut vars: Vec<String> = self.vars.clone();
        if !vars.iter().any(|v| v == hvar) {
            vars.push(hvar.to_string());
        }
        let base = self.with_vars(&vars).expect("superset");
        let h = base.var_index(hvar).unwrap();
        let idx: Vec<usize> = among.iter().filter_map(|v| base.var_index(v)).collect();
        let mut out = Poly { vars: vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &base.terms {
            let d: u32 = idx.iter().map(|&i| e[i]).sum();
            assert!(d <= deg, "degree exceeds homogenisation degree");
            let mut ne = e.clone();
            ne[h] += deg - d;
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Terms in graded-lex order, highest first.
    fn sorted_terms(&self) -> Vec<(&Monomial, &F)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }
}

pub(crate) fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub(crate) fn fmt_monomial(vars: &[String], e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &x) in vars.iter().zip(e) {
        match x {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{x}")),
        }
    }
    parts.join("*")
}

/// Writes `Σ c·m` in the canonical sign-aware form shared by polynomials
/// and ring elements.
pub(crate) fn fmt_sum<F: Field>(f: &mut fmt::Formatter<'_>, terms: &[(String, F)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (mono, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mono.is_empty() {
            if abs.needs_parens() {
                write!(f, "({abs})")?;
            } else {
                write!(f, "{abs}")?;
            }
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else if abs.needs_parens() {
            write!(f, "({abs})*{mono}")?;
        } else {
            write!(f, "{abs}*{mono}")?;
        }
    }
    Ok(())
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, F)> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| (fmt_monomial(&self.vars, e), c.clone()))
            .collect();
        fmt_sum(f, &terms)
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        let (a, b) = self.aligned(rhs);
        let mut out = Poly { vars: a.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        Poly { vars: self.vars.clone(), terms }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr<Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, F: Field> $tr<&'a Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: &Poly<F>) -> Poly<F> {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

/// Determinant of a square matrix of polynomials by fraction-free
/// (Bareiss) elimination; every division is exact.
pub fn det_bareiss<F: Field>(mut m: Vec<Vec<Poly<F>>>) -> Poly<F> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Sylvester matrix of `f` and `g` in `var` with formal degrees `df`, `dg`;
/// the `dg` rows of `f` come first, coefficients from highest power down.
pub fn sylvester_matrix<F: Field>(f: &Poly<F>, g: &Poly<F>, var: &str, df: u32, dg: u32) -> Vec<Vec<Poly<F>>> {
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let coeff = |c: &Vec<Poly<F>>, k: usize| c.get(k).cloned().unwrap_or_else(Poly::zero);
    let n = (df + dg) as usize;
    let mut m = vec![vec![Poly::zero(); n]; n];
    for r in 0..dg as usize {
        for k in 0..=df as usize {
            m[r][r + k] = coeff(&fc, df as usize - k);
        }
    }
    for r in 0..df as usize {
        for k in 0..=dg as usize {
            m[dg as usize + r][r + k] = coeff(&gc, dg as usize - k);
        }
    }
    m
}

/// Resultant with explicitly given formal degrees. When the formal degree of
/// a homogeneous form exceeds the actual degree of its dehomogenisation, this
/// is the resultant of the binary forms, and it also detects common roots at
/// infinity.
pub fn resultant_formal<F: Field>(f: &Poly<F>, g: &Poly<F>, var: &str, df: u32, dg: u32) -> Result<Poly<F>> {
    let af = f.degree_in(var).ok_or(Error::ZeroInput)?;
    let ag = g.degree_in(var).ok_or(Error::ZeroInput)?;
    if af > df || ag > dg {
        return Err(Error::Invalid("formal degree below actual degree".into()));
    }
    if df == 0 && dg == 0 {
        return Err(Error::Arity(format!("both inputs constant in `{var}`")));
    }
    let vars: Vec<String> = f.merged_vars(g).into_iter().filter(|v| v != var).collect();
    let det = det_bareiss(sylvester_matrix(f, g, var, df, dg));
    let det = if det.is_zero() { det } else { det.with_vars(&vars).unwrap_or(det) };
    Ok(det)
}

/// Coefficients `[s_j0, …, s_jj]` of the `j`-th subresultant of `f` and `g`
/// in `var` with formal degrees `df`, `dg`. Where not both formal leading
/// coefficients vanish, the gcd has degree `j` exactly when `S_0, …, S_{j−1}`
/// vanish and `s_jj` does not, and then `S_j` is that gcd up to a scalar.
pub fn subresultant_formal<F: Field>(f: &Poly<F>, g: &Poly<F>, var: &str, df: u32, dg: u32, j: u32) -> Result<Vec<Poly<F>>> {
    if j >= df.min(dg) {
        return Err(Error::Invalid(format!("subresultant index {j} too large for degrees {df}, {dg}")));
    }
    let (af, ag) = (f.degree_in(var).unwrap_or(0), g.degree_in(var).unwrap_or(0));
    if af > df || ag > dg {
        return Err(Error::Invalid("formal degree below actual degree".into()));
    }
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let coeff = |c: &Vec<Poly<F>>, k: i64| if k < 0 { Poly::zero() } else { c.get(k as usize).cloned().unwrap_or_else(Poly::zero) };
    let (df, dg, j) = (df as i64, dg as i64, j as i64);
    let width = df + dg - j;
    // Column c holds the coefficient of var^(width − 1 − c).
    let mut rows = Vec::new();
    for r in 0..dg - j {
        let shift = dg - j - 1 - r;
        rows.push((0..width).map(|c| coeff(&fc, width - 1 - c - shift)).collect::<Vec<_>>());
    }
    for r in 0..df - j {
        let shift = df - j - 1 - r;
        rows.push((0..width).map(|c| coeff(&gc, width - 1 - c - shift)).collect::<Vec<_>>());
    }
    let lead = (width - j - 1) as usize;
    let mut out = Vec::new();
    for i in 0..=j {
        let col = (width - 1 - i) as usize;
        let m: Vec<Vec<Poly<F>>> = rows.iter().map(|r| r[..lead].iter().cloned().chain([r[col].clone()]).collect()).collect();
        out.push(det_bareiss(m));
    }
    Ok(out)
}

/// Resultant of `f` and `g` with respect to `var`: the determinant of the
/// Sylvester matrix, rows of `f` first.
pub fn resultant<F: Field>(f: &Poly<F>, g: &Poly<F>, var: &str) -> Result<Poly<F>> {
    let df = f.degree_in(var).ok_or(Error::ZeroInput)?;
    let dg = g.degree_in(var).ok_or(Error::ZeroInput)?;
    resultant_formal(f, g, var, df, dg)
}
