//! Sparse multivariate polynomials over a field.
//!
//! Monomials are packed into a `u64`, eight bits per variable, so a chart may have at most eight
//! coordinates and each exponent stays below 256. Terms are kept sorted by the packed key, which
//! makes addition a linear merge.

use crate::scalar::{Field, Ring, Q};
use std::collections::HashMap;

/// Maximum number of chart variables supported by the packed monomial encoding.
pub const MAX_VARS: usize = 8;

/// Packed exponent vector.
pub type Mono = u64;

/// Packs an exponent vector.
pub fn pack(exps: &[u32]) -> Mono {
    assert!(exps.len() <= MAX_VARS, "too many chart variables");
    exps.iter().enumerate().fold(0u64, |acc, (i, &e)| {
        assert!(e < 256, "exponent too large");
        acc | ((e as u64) << (8 * i))
    })
}

/// Exponent of variable `i` in a packed monomial.
pub fn exponent(m: Mono, i: usize) -> u32 {
    ((m >> (8 * i)) & 0xff) as u32
}

/// Total degree of a packed monomial.
pub fn mono_degree(m: Mono) -> u32 {
    (0..MAX_VARS).map(|i| exponent(m, i)).sum()
}

/// Unpacks the first `nvars` exponents.
pub fn unpack(m: Mono, nvars: usize) -> Vec<u32> {
    (0..nvars).map(|i| exponent(m, i)).collect()
}

/// A polynomial with coefficients in `F`, stored as sorted `(monomial, coefficient)` terms with
/// no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field> {
    terms: Vec<(Mono, F)>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly { terms: Vec::new() }
    }
}

impl<F: Field> Poly<F> {
    pub fn constant(c: F) -> Self {
        if c.is_zero() {
            Self::default()
        } else {
            Poly { terms: vec![(0, c)] }
        }
    }

    /// The coordinate function `x_i`.
    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(1u64 << (8 * i), F::one())] }
    }

    pub fn monomial(exps: &[u32], c: F) -> Self {
        if c.is_zero() {
            Self::default()
        } else {
            Poly { terms: vec![(pack(exps), c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, F)>) -> Self {
        let mut map: HashMap<Mono, F> = HashMap::new();
        for (m, c) in terms {
            map.entry(m).and_modify(|e| e.add_assign(&c)).or_insert(c);
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|t| t.0);
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| mono_degree(t.0)).max()
    }

    /// Coefficient of the given monomial.
    pub fn coeff(&self, m: Mono) -> F {
        match self.terms.binary_search_by_key(&m, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => F::zero(),
        }
    }

    /// Constant term (value at the chart origin).
    pub fn constant_term(&self) -> F {
        self.coeff(0)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let shift = 8 * i;
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = exponent(*m, i);
                (e > 0).then(|| (m - (1u64 << shift), c.mul(&F::from_ratio(e as i64, 1))))
            })
            .collect::<Vec<_>>();
        // Lowering one exponent preserves the relative order of packed keys.
        Poly { terms }
    }

    pub fn eval(&self, x: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, xi) in x.iter().enumerate() {
                for _ in 0..exponent(*m, i) {
                    t = t.mul(xi);
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Keeps only the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly { terms: self.terms.iter().filter(|t| mono_degree(t.0) == d).cloned().collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    fn merge(&self, o: &Self, sign: bool) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                let c = if sign { b[j].1.neg() } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if sign { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Poly { terms: out }
    }

    /// Maps coefficients into another field.
    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Random polynomial with small integer coefficients in `[-range, range]`, all monomials of
    /// degree `<= deg` in `nvars` variables, each present with probability `density`.
    pub fn random<R: rand::Rng>(rng: &mut R, nvars: usize, deg: u32, range: i64, density: f64) -> Self {
        let mut terms = Vec::new();
        for m in monomials_up_to(nvars, deg) {
            if rng.gen_bool(density) {
                let c = rng.gen_range(-range..=range);
                if c != 0 {
                    terms.push((m, F::from_ratio(c, 1)));
                }
            }
        }
        Poly::from_terms(terms)
    }
}

impl<F: Field> Poly<F> {
    /// Human-readable rendering such as `3/2*x0^2*x3 + -1`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = (0..MAX_VARS)
                    .filter(|&i| exponent(*m, i) > 0)
                    .map(|i| match exponent(*m, i) {
                        1 => format!("x{i}"),
                        e => format!("x{i}^{e}"),
                    })
                    .collect();
                let cs = c.render();
                if vars.is_empty() {
                    cs
                } else if c == &F::one() {
                    vars.join("*")
                } else {
                    format!("{}*{}", cs, vars.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// All packed monomials of total degree `<= deg` in `nvars` variables, in graded order.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for d in 0..=deg {
        let mut cur = vec![0u32; nvars];
        fill(&mut out, &mut cur, 0, d);
    }
    out
}

fn fill(out: &mut Vec<Mono>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if i + 1 >= cur.len() {
        if !cur.is_empty() {
            cur[i] = left;
        } else if left > 0 {
            return;
        }
        out.push(pack(cur));
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, left - e);
    }
    cur[i] = 0;
}

impl<F: Field> Ring for Poly<F> {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        if o.terms.is_empty() {
            return self.clone();
        }
        if self.terms.is_empty() {
            return o.clone();
        }
        self.merge(o, false)
    }
    fn sub(&self, o: &Self) -> Self {
        if o.terms.is_empty() {
            return self.clone();
        }
        self.merge(o, true)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.terms.is_empty() || o.terms.is_empty() {
            return Self::default();
        }
        if o.terms.len() == 1 && o.terms[0].0 == 0 {
            return self.scale(&o.terms[0].1);
        }
        if self.terms.len() == 1 && self.terms[0].0 == 0 {
            return o.scale(&self.terms[0].1);
        }
        let mut map: HashMap<Mono, F> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let c = ca.mul(cb);
                map.entry(ma + mb).and_modify(|e| e.add_assign(&c)).or_insert(c);
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|t| t.0);
        Poly { terms }
    }
    fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }
    fn from_ratio(p: i64, den: i64) -> Self {
        Self::constant(F::from_ratio(p, den))
    }
    fn from_q(x: &Q) -> Self {
        Self::constant(F::from_q(x))
    }
    fn scale_q(&self, x: &Q) -> Self {
        self.scale(&F::from_q(x))
    }
    fn scale_ratio(&self, p: i64, den: i64) -> Self {
        self.scale(&F::from_ratio(p, den))
    }
    fn magnitude(&self) -> f64 {
        self.terms.iter().map(|t| t.1.magnitude()).fold(0.0, f64::max)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.1.is_negligible(tol))
    }
    fn render(&self) -> String {
        Poly::render(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    type P = Poly<Q>;

    #[test]
    fn derivative_of_product_rule() {
        let x0 = P::var(0);
        let x1 = P::var(1);
        let f = x0.mul(&x0).mul(&x1).add(&P::constant(qi(3)));
        assert_eq!(f.derivative(0), x0.mul(&x1).scale(&qi(2)));
        assert_eq!(f.derivative(1), x0.mul(&x0));
        assert!(f.derivative(2).is_zero());
    }

    #[test]
    fn monomial_counts() {
        // C(n+d, d)
        assert_eq!(monomials_up_to(6, 2).len(), 28);
        assert_eq!(monomials_up_to(6, 4).len(), 210);
        assert_eq!(monomials_up_to(2, 0), vec![0]);
    }

    #[test]
    fn eval_matches_structure() {
        let f = P::monomial(&[2, 1], q(1, 2)).sub(&P::var(1));
        assert_eq!(f.eval(&[qi(2), qi(3)]), qi(3));
        assert_eq!(f.render(), "-1*x1 + 1/2*x0^2*x1");
    }
}
