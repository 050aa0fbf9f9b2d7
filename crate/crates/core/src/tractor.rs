//! Hand transcription of the tractor-like operators on `Λ^k ⊗ T`, kept independent of the BGG
//! engine so the two can be compared entry by entry.
//!
//! A `T`-valued `k`-form is a triple `(r_{a_1…a_k}, s_{a_1…a_k d}, t_{a_1…a_k})` of lower-index
//! tensors, antisymmetric in the `a` slots, with density weights `1, −1, −1`. Raising uses
//! `X^d = J^{db}X_b`, so a trace `X_{…i}{}^i` is `J^{ib}X_{…ib}`.

use crate::bgg::{Engine, Flavor};
use crate::connection::{covariant_derivative, Connection};
use crate::curvature::curvature_of;
use crate::error::{AcafError, Result};
use crate::forms::{bits, sort_sign};
use crate::frame::PolyTensor;
use crate::poly::Poly;
use crate::scalar::{Ring, Q};
use crate::tensor::{std_j, Lower, Projection, SymmetryClass, Tensor, Variance};

/// A `T`-valued `k`-form in slot notation.
#[derive(Clone, Debug, PartialEq)]
pub struct TractorForm {
    pub k: usize,
    pub r: PolyTensor<Q>,
    pub s: PolyTensor<Q>,
    pub t: PolyTensor<Q>,
}

fn lower(k: usize) -> Vec<Variance> {
    vec![Lower; k]
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

fn jl(n: usize, a: usize, b: usize) -> i64 {
    std_j(n, a, b).unwrap_or(0)
}

/// `idx` with position `i` removed.
fn omit(idx: &[usize], i: usize) -> Vec<usize> {
    idx.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect()
}

fn cat(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

/// `J^{ib} X_{…ib}` over the last two slots.
fn j_trace_last(x: &PolyTensor<Q>) -> PolyTensor<Q> {
    let r = x.rank();
    x.contract_j(r - 2, r - 1).expect("two lower slots")
}

/// Totally trace-free part of an antisymmetric form.
fn trace_free(x: PolyTensor<Q>) -> PolyTensor<Q> {
    if x.rank() < 2 {
        return x;
    }
    let slots: Vec<usize> = (0..x.rank()).collect();
    x.symmetrize_project(&slots, Projection::TraceFree(SymmetryClass::Antisymmetric)).expect("lower slots")
}

impl TractorForm {
    pub fn zero(n: usize, k: usize) -> Self {
        TractorForm { k, r: Tensor::zeros(n, &lower(k), 1), s: Tensor::zeros(n, &lower(k + 1), -1), t: Tensor::zeros(n, &lower(k), -1) }
    }

    pub fn n(&self) -> usize {
        self.r.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.t.is_zero()
    }

    pub fn sub(&self, o: &Self) -> Self {
        TractorForm { k: self.k, r: self.r.sub(&o.r), s: self.s.sub(&o.s), t: self.t.sub(&o.t) }
    }

    /// Reads raw `L^k` coordinates of the standard engine.
    pub fn from_raw(engine: &Engine, k: usize, raw: &[Poly<Q>]) -> Result<Self> {
        let n = engine.n();
        let space = engine.space(Flavor::LV, k)?;
        if raw.len() != space.dim() || space.value_dim() != n + 2 {
            return Err(AcafError::Shape("raw vector is not a standard T-valued form".into()));
        }
        let entry = |idx: &[usize], val: usize| -> Poly<Q> {
            let sg = sort_sign(idx);
            if sg == 0 {
                return Poly::zero();
            }
            let mask = idx.iter().fold(0u32, |m, &a| m | (1 << a));
            let set = space.sets().index(mask).expect("k-subset");
            raw[space.index(set, val)].scale_ratio(sg, 1)
        };
        Ok(TractorForm {
            k,
            r: Tensor::from_fn(n, &lower(k), 1, |i| entry(i, 0)),
            s: Tensor::from_fn(n, &lower(k + 1), -1, |i| entry(&i[..k], 1 + i[k])),
            t: Tensor::from_fn(n, &lower(k), -1, |i| entry(i, n + 1)),
        })
    }

    /// Writes raw `L^k` coordinates of the standard engine.
    pub fn to_raw(&self, engine: &Engine) -> Result<Vec<Poly<Q>>> {
        let n = engine.n();
        let space = engine.space(Flavor::LV, self.k)?;
        if n != self.n() || space.value_dim() != n + 2 {
            return Err(AcafError::Shape("engine does not match the form".into()));
        }
        let mut out = vec![Poly::zero(); space.dim()];
        for (set, mask) in space.sets().iter() {
            let a = bits(mask);
            out[space.index(set, 0)] = self.r.get(&a).clone();
            out[space.index(set, n + 1)] = self.t.get(&a).clone();
            for d in 0..n {
                out[space.index(set, 1 + d)] = self.s.get(&cat(&a, &[d])).clone();
            }
        }
        Ok(out)
    }
}

/// `∇^T_a(r, s_d, t) = (∇_a r, ∇_a s_d + J_ad r, ∇_a t + s_a)` on sections (`k = 0`).
pub fn nabla_t(conn: &Connection<Q>, f: &TractorForm) -> Result<TractorForm> {
    if f.k != 0 {
        return Err(AcafError::Input("∇^T acts on sections".into()));
    }
    let n = f.n();
    let nr = covariant_derivative(conn, &f.r)?;
    let ns = covariant_derivative(conn, &f.s)?;
    let nt = covariant_derivative(conn, &f.t)?;
    Ok(TractorForm {
        k: 1,
        r: nr,
        s: Tensor::from_fn(n, &lower(2), -1, |i| ns.get(i).add(&f.r.get(&[]).scale_ratio(jl(n, i[0], i[1]), 1))),
        t: Tensor::from_fn(n, &lower(1), -1, |i| nt.get(i).add(f.s.get(i))),
    })
}

/// `d^T` on `k`-forms, with `r₀` the totally trace-free part of the last slot.
pub fn d_t(conn: &Connection<Q>, f: &TractorForm) -> Result<TractorForm> {
    let n = f.n();
    let k1 = f.k + 1;
    let nr = covariant_derivative(conn, &f.r)?;
    let ns = covariant_derivative(conn, &f.s)?;
    let nt = covariant_derivative(conn, &f.t)?;
    let r = Tensor::from_fn(n, &lower(k1), 1, |a| {
        (0..k1).fold(Poly::zero(), |acc, i| acc.add(&nr.get(&cat(&[a[i]], &omit(a, i))).scale_ratio(sign(i), 1)))
    });
    let s = Tensor::from_fn(n, &lower(k1 + 1), -1, |idx| {
        let (a, d) = (&idx[..k1], idx[k1]);
        (0..k1).fold(Poly::zero(), |acc, i| {
            let rest = omit(a, i);
            let v = ns.get(&cat(&[a[i]], &cat(&rest, &[d]))).add(&f.r.get(&rest).scale_ratio(jl(n, a[i], d), 1));
            acc.add(&v.scale_ratio(sign(i), 1))
        })
    });
    let t = Tensor::from_fn(n, &lower(k1), -1, |a| {
        (0..k1).fold(Poly::zero(), |acc, i| {
            let rest = omit(a, i);
            let v = nt.get(&cat(&[a[i]], &rest)).add(f.s.get(&cat(&rest, &[a[i]])));
            acc.add(&v.scale_ratio(sign(i), 1))
        })
    });
    Ok(TractorForm { k: k1, r, s, t: trace_free(t) })
}

/// `∂*₀(r, s, t) = (−1)^k k (s_{a_1…a_{k−1}i}{}^i, t_{a_1…a_{k−1}d}, 0)`.
pub fn codiff0(f: &TractorForm) -> Result<TractorForm> {
    if f.k == 0 {
        return Err(AcafError::Input("∂*₀ vanishes on sections".into()));
    }
    let n = f.n();
    let c = sign(f.k) * f.k as i64;
    let tr = j_trace_last(&f.s);
    Ok(TractorForm {
        k: f.k - 1,
        r: tr.scale_ratio(c, 1).with_weight(1),
        s: f.t.scale_ratio(c, 1),
        t: Tensor::zeros(n, &lower(f.k - 1), -1),
    })
}

/// The printed square `(∂*₀)²(r, s, t) = −k(k+1)(t_{a_1…a_{k−2}i}{}^i, 0, 0)`.
pub fn codiff0_squared_printed(f: &TractorForm) -> Result<TractorForm> {
    if f.k < 2 {
        return Err(AcafError::Input("(∂*₀)² needs k ≥ 2".into()));
    }
    let n = f.n();
    let k = f.k as i64;
    let mut out = TractorForm::zero(n, f.k - 2);
    out.r = j_trace_last(&f.t).scale_ratio(-k * (k + 1), 1).with_weight(1);
    Ok(out)
}

/// The printed composite `∂* d^T` on `L^k(T)`.
pub fn codiff_d_printed(conn: &Connection<Q>, f: &TractorForm) -> Result<TractorForm> {
    let n = f.n();
    let k = f.k;
    let c = sign(k + 1) * (k as i64 + 1);
    let ns = covariant_derivative(conn, &f.s)?;
    let nt = covariant_derivative(conn, &f.t)?;
    // ∇_e s_{… f} contracted as J^{fb} on the last value slot against the derivative slot or a form slot
    let r = Tensor::from_fn(n, &lower(k), 1, |a| {
        let mut acc = f.r.get(a).scale_ratio(sign(k) * (n - k) as i64, 1);
        for d in 0..n {
            for b in 0..n {
                let jdb = jl(n, d, b);
                if jdb == 0 {
                    continue;
                }
                for i in 0..k {
                    let idx = cat(&[a[i]], &cat(&omit(a, i), &[d, b]));
                    acc = acc.add(&ns.get(&idx).scale_ratio(sign(i) * jdb, 1));
                }
                acc = acc.add(&ns.get(&cat(&[d], &cat(a, &[b]))).scale_ratio(sign(k) * jdb, 1));
            }
        }
        acc.scale_ratio(c, 1)
    });
    let m = Tensor::from_fn(n, &lower(k + 1), -1, |idx| {
        let (a, d) = (&idx[..k], idx[k]);
        let mut acc = Poly::zero();
        for i in 0..k {
            let rest = omit(a, i);
            let v = f.s.get(&cat(&rest, &[d, a[i]])).add(nt.get(&cat(&[a[i]], &cat(&rest, &[d]))));
            acc = acc.add(&v.scale_ratio(sign(i), 1));
        }
        let v = f.s.get(&cat(a, &[d])).add(nt.get(&cat(&[d], a)));
        acc.add(&v.scale_ratio(sign(k), 1))
    });
    Ok(TractorForm { k, r, s: trace_free(m).scale_ratio(c, 1), t: Tensor::zeros(n, &lower(k), -1) })
}

/// The printed CF curvature of `d^T`: `(0, Σ_{i<j}(−1)^{i+j+1}R_{a_ia_jd}{}^e s_{…e}, 0)` on `k`-forms,
/// with the `a_i, a_j` omitted from `s`.
pub fn dt_squared_printed(conn: &Connection<Q>, f: &TractorForm) -> TractorForm {
    let n = f.n();
    let k2 = f.k + 2;
    let curv = curvature_of(conn);
    let mut out = TractorForm::zero(n, k2);
    out.s = Tensor::from_fn(n, &lower(k2 + 1), -1, |idx| {
        let (a, d) = (&idx[..k2], idx[k2]);
        let mut acc = Poly::zero();
        for i in 0..k2 {
            for j in i + 1..k2 {
                let rest: Vec<usize> = (0..k2).filter(|&p| p != i && p != j).map(|p| a[p]).collect();
                for e in 0..n {
                    let rv = curv.get(&[a[i], a[j], d, e]);
                    if rv.is_zero() {
                        continue;
                    }
                    // 1-based exponent i+j+1 has the same parity as the 0-based one
                    acc = acc.add(&rv.mul(f.s.get(&cat(&rest, &[e]))).scale_ratio(sign(i + j + 1), 1));
                }
            }
        }
        acc
    });
    out
}

/// `J^{ib}∇_i∇_b t` for a density `t`.
fn box_j(conn: &Connection<Q>, t: &PolyTensor<Q>) -> Result<Poly<Q>> {
    let nnt = covariant_derivative(conn, &covariant_derivative(conn, t)?)?;
    Ok(nnt.contract_j(0, 1)?.get(&[]).clone())
}

fn scalar(n: usize, p: Poly<Q>, w: i32) -> PolyTensor<Q> {
    Tensor::from_fn(n, &[], w, |_| p.clone())
}

/// The printed splitting operator `L₀(t) = (−(1/6)∇_i∇^i t, −∇_d t, t)` (coefficients of `n = 6`).
pub fn l0_printed(conn: &Connection<Q>, t: &PolyTensor<Q>) -> Result<TractorForm> {
    let n = conn.dim();
    let t = t.clone().with_weight(-1);
    let lap = box_j(conn, &t)?;
    Ok(TractorForm {
        k: 0,
        r: scalar(n, lap.scale_ratio(-1, 6), 1),
        s: covariant_derivative(conn, &t)?.neg(),
        t,
    })
}

/// The printed `B₀(t) = −∇_(a∇_d) t`.
pub fn b0_printed(conn: &Connection<Q>, t: &PolyTensor<Q>) -> Result<PolyTensor<Q>> {
    let t = t.clone().with_weight(-1);
    let nnt = covariant_derivative(conn, &covariant_derivative(conn, &t)?)?;
    Ok(nnt.symmetrize_project(&[0, 1], Projection::Sym)?.neg())
}

/// `∇_d(s_a{}^d + s^d{}_a)` for a two-index `s`.
fn l1_divergence(conn: &Connection<Q>, s: &PolyTensor<Q>) -> Result<PolyTensor<Q>> {
    let n = conn.dim();
    let ns = covariant_derivative(conn, s)?;
    Ok(Tensor::from_fn(n, &lower(1), 1, |a| {
        let mut acc = Poly::zero();
        for d in 0..n {
            for b in 0..n {
                let jdb = jl(n, d, b);
                if jdb != 0 {
                    acc = acc.add(&ns.get(&[d, a[0], b]).add(ns.get(&[d, b, a[0]])).scale_ratio(jdb, 1));
                }
            }
        }
        acc
    }))
}

/// The printed `L₁(s_(ad)) = (−(1/10)∇_d(s_a{}^d + s^d{}_a), s_(ad), 0)`.
pub fn l1_printed(conn: &Connection<Q>, s: &PolyTensor<Q>) -> Result<TractorForm> {
    let n = conn.dim();
    let s = s.clone().with_weight(-1);
    Ok(TractorForm { k: 1, r: l1_divergence(conn, &s)?.scale_ratio(-1, 10), s, t: Tensor::zeros(n, &lower(1), -1) })
}

/// The printed four-term `B₁(s_(a_1d))` as a tensor in `(a_1, a_2, d)`.
pub fn b1_printed(conn: &Connection<Q>, s: &PolyTensor<Q>) -> Result<PolyTensor<Q>> {
    let n = conn.dim();
    let s = s.clone().with_weight(-1);
    let ns = covariant_derivative(conn, &s)?;
    let div = l1_divergence(conn, &s)?;
    Ok(Tensor::from_fn(n, &lower(3), -1, |i| {
        let (a1, a2, d) = (i[0], i[1], i[2]);
        let mut acc = ns.get(&[a1, a2, d]).sub(ns.get(&[a2, a1, d]));
        acc = acc.sub(&div.get(&[a2]).scale_ratio(jl(n, a1, d), 10));
        acc.add(&div.get(&[a1]).scale_ratio(jl(n, a2, d), 10))
    }))
}

#[cfg(test)]
mod tests;
