//! Exact sparse multivariate arithmetic for the two coefficient rings:
//! the symmetric algebra `S = Q[t1..tn]` of the character lattice and the
//! group algebra `R(T) = Z[x1^{±1}..xn^{±1}]`, where the monomial `x^λ`
//! encodes the character `e^λ`. Both carry the same right Weyl action
//! `t_i ↦ ±t_{|w(i)|}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring bound shared by `BigRational` (cohomology) and `BigInt`
/// (K-theory). Everything stays exact; no floating point anywhere.
pub trait Coeff:
    Clone
    + Eq
    + Ord
    + Zero
    + One
    + Signed
    + Neg<Output = Self>
    + fmt::Display
    + FromStr
    + 'static
{
}

impl Coeff for BigRational {}
impl Coeff for BigInt {}

/// A character of the torus written in the weight basis, e.g. a root
/// `α_{14} = t4 - t1 = (-1, 0, 0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinearForm {
    coeffs: Vec<i32>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i32>) -> Self {
        LinearForm { coeffs }
    }

    /// The single weight `t_i` (1-based).
    pub fn weight(i: usize, n: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[i - 1] = 1;
        LinearForm { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![0; n] }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Euclidean inner product with the weight basis orthonormal.
    pub fn dot(&self, other: &LinearForm) -> i64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum()
    }

    /// Pairing with an integer cocharacter vector.
    pub fn pair(&self, eta: &[i64]) -> i64 {
        self.coeffs
            .iter()
            .zip(eta)
            .map(|(&a, &b)| a as i64 * b)
            .sum()
    }

    /// Cartan pairing `⟨self, other∨⟩ = 2(self, other)/(other, other)`.
    /// Integral on roots of a crystallographic system.
    pub fn cartan_pairing(&self, other: &LinearForm) -> i64 {
        let num = 2 * self.dot(other);
        let den = other.dot(other);
        debug_assert!(den != 0 && num % den == 0);
        num / den
    }

    pub fn scaled(&self, k: i32) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// `self - k * other`.
    pub fn sub_multiple(&self, k: i64, other: &LinearForm) -> Self {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a - (k as i32) * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &LinearForm) -> Self {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    /// Image under the signed window action `t_i ↦ ±t_{|w(i)|}`.
    pub fn apply_window(&self, window: &[i32]) -> Self {
        let mut coeffs = vec![0; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let img = window[i];
                let j = img.unsigned_abs() as usize - 1;
                coeffs[j] += if img < 0 { -c } else { c };
            }
        }
        LinearForm { coeffs }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PolyS::from_linear(self))
    }
}

/// A sparse polynomial with exponent vectors as keys. `PolyS` restricts
/// exponents to be nonnegative; `LaurentR` allows arbitrary integers.
/// Keys are kept in lexicographic `BTreeMap` order, which fixes the
/// canonical serialization; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SparsePoly<C: Coeff> {
    n: usize,
    terms: BTreeMap<Vec<i32>, C>,
}

/// The cohomology coefficient ring `S = Q[t1..tn]`.
pub type PolyS = SparsePoly<BigRational>;

/// The representation ring `R(T) = Z[x1^{±1}..xn^{±1}]`.
pub type LaurentR = SparsePoly<BigInt>;

impl<C: Coeff> SparsePoly<C> {
    pub fn zero(n: usize) -> Self {
        SparsePoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; n], c);
        }
        SparsePoly { n, terms }
    }

    pub fn monomial(n: usize, exps: Vec<i32>, c: C) -> Self {
        assert_eq!(exps.len(), n);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        SparsePoly { n, terms }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.n] as &Vec<i32>)
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&vec![0; self.n] as &Vec<i32>)
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn coefficient(&self, exps: &[i32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree of the highest term, or None for the zero polynomial.
    /// For Laurent polynomials this is the maximum exponent sum.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
    }

    pub fn is_homogeneous_of_degree(&self, d: i64) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().map(|&x| x as i64).sum::<i64>() == d)
    }

    fn insert_term(&mut self, exps: Vec<i32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Vec<i32>, C)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in it {
            assert_eq!(e.len(), n, "exponent vector with wrong rank");
            p.insert_term(e, c);
        }
        p
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Relabel variables along an unsigned window (`t_i ↦ t_{w(i)}`); for
    /// signed substitutions use the ring-specific `apply_window`.
    pub fn permute_variables(&self, window: &[i32]) -> Self {
        assert_eq!(window.len(), self.n);
        let mut out = Self::zero(self.n);
        for (exps, c) in &self.terms {
            let mut new_exps = vec![0; self.n];
            for (i, &e) in exps.iter().enumerate() {
                if e != 0 {
                    let img = window[i];
                    assert!(img > 0, "permute_variables requires an unsigned window");
                    new_exps[img as usize - 1] += e;
                }
            }
            out.insert_term(new_exps, c.clone());
        }
        out
    }

    /// Substitute each variable by a polynomial. Used for changes of basis
    /// such as rewriting in simple-root coordinates.
    pub fn substitute(&self, images: &[SparsePoly<C>]) -> SparsePoly<C> {
        assert_eq!(images.len(), self.n);
        let out_rank = images.first().map_or(self.n, |p| p.n);
        let mut out = SparsePoly::zero(out_rank);
        for (exps, c) in &self.terms {
            let mut term = SparsePoly::constant(out_rank, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                assert!(e >= 0, "substitute requires nonnegative exponents");
                for _ in 0..e {
                    term = &term * &images[i];
                }
            }
            out += &term;
        }
        out
    }

    /// Canonical JSON form: a list of `{exponents, coeff}` records in
    /// lexicographic key order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    serde_json::json!({
                        "exponents": e,
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(n: usize, v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::parse("expected a JSON array of terms"))?;
        let mut p = Self::zero(n);
        for item in arr {
            let exps = item
                .get("exponents")
                .and_then(|e| e.as_array())
                .ok_or_else(|| Error::parse("term missing exponents"))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .map(|v| v as i32)
                        .ok_or_else(|| Error::parse("bad exponent"))
                })
                .collect::<Result<Vec<i32>>>()?;
            if exps.len() != n {
                return Err(Error::parse("exponent vector with wrong rank"));
            }
            let coeff_str = item
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::parse("term missing coeff"))?;
            let c = C::from_str(coeff_str)
                .map_err(|_| Error::parse(format!("bad coefficient {coeff_str:?}")))?;
            p.insert_term(exps, c);
        }
        Ok(p)
    }
}

impl<C: Coeff> AddAssign<&SparsePoly<C>> for SparsePoly<C> {
    fn add_assign(&mut self, rhs: &SparsePoly<C>) {
        assert_eq!(self.n, rhs.n);
        for (e, c) in &rhs.terms {
            self.insert_term(e.clone(), c.clone());
        }
    }
}

impl<C: Coeff> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<C: Coeff> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        assert_eq!(self.n, rhs.n, "rank mismatch in product");
        let mut out = SparsePoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                out.insert_term(exps, ca.clone() * cb.clone());
            }
        }
        out
    }
}

/// Exact product with a rank check, per the module contract.
pub fn poly_mul(p: &PolyS, q: &PolyS) -> Result<PolyS> {
    p.check_rank(q)?;
    Ok(p * q)
}

/// Exact product in the Laurent ring with a rank check.
pub fn laurent_mul(p: &LaurentR, q: &LaurentR) -> Result<LaurentR> {
    p.check_rank(q)?;
    Ok(p * q)
}

impl PolyS {
    /// The right Weyl action `t_i ↦ ±t_{|w(i)|}` with `t_{-k} := -t_k`;
    /// a ring homomorphism, applied monomial by monomial.
    pub fn apply_window(&self, window: &[i32]) -> PolyS {
        assert_eq!(window.len(), self.n);
        let mut out = Self::zero(self.n);
        for (exps, c) in &self.terms {
            let mut new_exps = vec![0; self.n];
            let mut sign_flips = 0i64;
            for (i, &e) in exps.iter().enumerate() {
                if e != 0 {
                    let img = window[i];
                    new_exps[img.unsigned_abs() as usize - 1] += e;
                    if img < 0 {
                        sign_flips += e as i64;
                    }
                }
            }
            let coeff = if sign_flips % 2 != 0 {
                -c.clone()
            } else {
                c.clone()
            };
            out.insert_term(new_exps, coeff);
        }
        out
    }

    /// The linear form as a degree-1 polynomial.
    pub fn from_linear(alpha: &LinearForm) -> PolyS {
        let n = alpha.rank();
        PolyS::from_terms(
            n,
            alpha.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, BigRational::from(BigInt::from(c)))
            }),
        )
    }

    /// Exact division by a nonzero linear form. Returns `q` with
    /// `q * alpha == self`; fails with `NotDivisible` otherwise. This is the
    /// witness for the cohomology GKM relations `φ(u) - φ(s_α u) ∈ ⟨α⟩`.
    pub fn exact_div_linear(&self, alpha: &LinearForm) -> Result<PolyS> {
        if alpha.is_zero() {
            return Err(Error::invalid("division by the zero linear form"));
        }
        assert_eq!(alpha.rank(), self.n);
        // Leading variable of the divisor in lexicographic order.
        let lead = alpha
            .coeffs()
            .iter()
            .position(|&c| c != 0)
            .expect("nonzero form");
        let lead_coeff = BigRational::from(BigInt::from(alpha.coeffs()[lead]));
        let divisor = PolyS::from_linear(alpha);
        let mut rem = self.clone();
        let mut quot = PolyS::zero(self.n);
        while let Some((exps, coeff)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if exps[lead] == 0 {
                return Err(Error::NotDivisible);
            }
            let mut qe = exps;
            qe[lead] -= 1;
            let qc = coeff / lead_coeff.clone();
            let qterm = PolyS::monomial(self.n, qe, qc);
            rem = &rem - &(&qterm * &divisor);
            quot += &qterm;
        }
        Ok(quot)
    }
}

impl LaurentR {
    /// The right Weyl action on characters, `x^{t_i} ↦ x^{±t_{|w(i)|}}`:
    /// the exponent vector is permuted with signs, coefficients untouched.
    pub fn apply_window(&self, window: &[i32]) -> LaurentR {
        assert_eq!(window.len(), self.n);
        let mut out = Self::zero(self.n);
        for (exps, c) in &self.terms {
            let new_exps = LinearForm::new(exps.clone())
                .apply_window(window)
                .coeffs()
                .to_vec();
            out.insert_term(new_exps, c.clone());
        }
        out
    }

    /// The basis monomial `x^λ`.
    pub fn from_character(lambda: &LinearForm) -> LaurentR {
        LaurentR::monomial(
            lambda.rank(),
            lambda.coeffs().to_vec(),
            BigInt::one(),
        )
    }

    /// `1 - x^λ`.
    pub fn one_minus(lambda: &LinearForm) -> LaurentR {
        &LaurentR::one(lambda.rank()) - &LaurentR::from_character(lambda)
    }

    /// Exact division by `1 - x^α` for a nonzero character `α`; the witness
    /// for the K-theory GKM relations `ψ(u) - ψ(s_α u) ∈ ⟨1 - x^α⟩`.
    pub fn exact_div_one_minus(&self, alpha: &LinearForm) -> Result<LaurentR> {
        if alpha.is_zero() {
            return Err(Error::invalid("division by 1 - x^0 = 0"));
        }
        assert_eq!(alpha.rank(), self.n);
        // Grade exponents by ⟨µ, α⟩; the divisor spans levels 0 and a > 0.
        let a = alpha.dot(alpha);
        let level = |e: &[i32]| -> i64 {
            e.iter()
                .zip(alpha.coeffs())
                .map(|(&x, &c)| x as i64 * c as i64)
                .sum()
        };
        let max_level = match self.terms.keys().map(|e| level(e)).max() {
            Some(m) => m,
            None => return Ok(LaurentR::zero(self.n)),
        };
        let mut rem = self.clone();
        let mut quot = LaurentR::zero(self.n);
        while !rem.is_zero() {
            let (exps, _) = rem
                .terms
                .iter()
                .min_by_key(|(e, _)| (level(e), (*e).clone()))
                .expect("nonempty");
            let exps = exps.clone();
            if level(&exps) > max_level - a {
                return Err(Error::NotDivisible);
            }
            let coeff = rem.terms.remove(&exps).expect("present");
            let shifted: Vec<i32> = exps
                .iter()
                .zip(alpha.coeffs())
                .map(|(&e, &c)| e + c)
                .collect();
            rem.insert_term(shifted, coeff.clone());
            quot.insert_term(exps, coeff);
        }
        Ok(quot)
    }

    /// Degenerate a K-theory value to cohomology: substitute
    /// `x^λ ↦ Σ_{k≤d} λ^k / k!` and discard everything above degree `d`.
    pub fn truncate_to_cohomology(&self, d: u32) -> PolyS {
        let mut out = PolyS::zero(self.n);
        for (exps, c) in &self.terms {
            let lambda = PolyS::from_linear(&LinearForm::new(exps.clone()));
            let mut factorial = BigRational::one();
            let mut power = PolyS::one(self.n);
            let coeff = BigRational::from(c.clone());
            out += &power.scale(&(coeff.clone() / factorial.clone()));
            for k in 1..=d {
                factorial *= BigRational::from(BigInt::from(k));
                power = &power * &lambda;
                power = power.truncate_above_degree(d as i64);
                out += &power.scale(&(coeff.clone() / factorial.clone()));
            }
        }
        out.truncate_above_degree(d as i64)
    }
}

impl<C: Coeff> SparsePoly<C> {
    fn truncate_above_degree(&self, d: i64) -> Self {
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as i64).sum::<i64>() <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical text form and parsing
// ---------------------------------------------------------------------------

fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    var: &dyn Fn(usize) -> String,
    exps: &[i32],
    coeff_str: &str,
    coeff_is_one: bool,
) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    if !coeff_is_one || exps.iter().all(|&e| e == 0) {
        factors.push(coeff_str.to_string());
    }
    for (i, &e) in exps.iter().enumerate() {
        if e == 1 {
            factors.push(var(i));
        } else if e != 0 {
            factors.push(format!("{}^{}", var(i), e));
        }
    }
    write!(f, "{}", factors.join("*"))
}

fn fmt_poly<C: Coeff>(
    p: &SparsePoly<C>,
    f: &mut fmt::Formatter<'_>,
    var: &dyn Fn(usize) -> String,
) -> fmt::Result {
    if p.terms.is_empty() {
        return write!(f, "0");
    }
    // Descending lexicographic term order: "2*t1^2 + 2*t1*t3".
    for (k, (exps, c)) in p.terms.iter().rev().enumerate() {
        let abs = c.abs();
        if k == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        write_monomial(f, var, exps, &abs.to_string(), abs.is_one())?;
    }
    Ok(())
}

impl fmt::Display for PolyS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f, &|i| format!("t{}", i + 1))
    }
}

impl fmt::Display for LaurentR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f, &|i| format!("x{}", i + 1))
    }
}

/// Name resolver for a double polynomial ring `t1..tn, z1..zn`.
pub fn double_var_name(n: usize, i: usize) -> String {
    if i < n {
        format!("t{}", i + 1)
    } else {
        format!("z{}", i - n + 1)
    }
}

/// Display adaptor printing a rank-2n polynomial in `t`/`z` names.
pub struct DoubleDisplay<'a, C: Coeff>(pub &'a SparsePoly<C>, pub usize);

impl<C: Coeff> fmt::Display for DoubleDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.1;
        fmt_poly(self.0, f, &|i| double_var_name(n, i))
    }
}

struct Tokens<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Num(String),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl<'a> Tokens<'a> {
    fn lex(s: &'a str) -> Result<Vec<Tok>> {
        let mut t = Tokens {
            chars: s.chars().peekable(),
        };
        let mut out = Vec::new();
        while let Some(&c) = t.chars.peek() {
            match c {
                ' ' | '\t' | '\n' => {
                    t.chars.next();
                }
                '+' => {
                    t.chars.next();
                    out.push(Tok::Plus);
                }
                '-' => {
                    t.chars.next();
                    out.push(Tok::Minus);
                }
                '*' => {
                    t.chars.next();
                    out.push(Tok::Star);
                }
                '^' => {
                    t.chars.next();
                    out.push(Tok::Caret);
                }
                '/' => {
                    t.chars.next();
                    out.push(Tok::Slash);
                }
                '(' => {
                    t.chars.next();
                    out.push(Tok::LParen);
                }
                ')' => {
                    t.chars.next();
                    out.push(Tok::RParen);
                }
                '0'..='9' => {
                    let mut num = String::new();
                    while let Some(&d) = t.chars.peek() {
                        if d.is_ascii_digit() {
                            num.push(d);
                            t.chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Tok::Num(num));
                }
                'a'..='z' | 'A'..='Z' => {
                    let mut name = String::new();
                    while let Some(&d) = t.chars.peek() {
                        if d.is_ascii_alphanumeric() {
                            name.push(d);
                            t.chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Tok::Var(name));
                }
                other => {
                    return Err(Error::parse(format!("unexpected character {other:?}")));
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a, C: Coeff> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
    allow_rational: bool,
    _marker: std::marker::PhantomData<C>,
}

impl<'a, C: Coeff> Parser<'a, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<SparsePoly<C>> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.next();
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly<C>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.next();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<i32> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.next();
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(s)) => {
                let v: i32 = s
                    .parse()
                    .map_err(|_| Error::parse(format!("bad exponent {s:?}")))?;
                Ok(if neg { -v } else { v })
            }
            other => Err(Error::parse(format!("expected an exponent, got {other:?}"))),
        }
    }

    fn factor(&mut self) -> Result<SparsePoly<C>> {
        let base = match self.next() {
            Some(Tok::Num(s)) => {
                let mut lit = s;
                if self.allow_rational && self.peek() == Some(&Tok::Slash) {
                    self.next();
                    match self.next() {
                        Some(Tok::Num(d)) => lit = format!("{lit}/{d}"),
                        other => {
                            return Err(Error::parse(format!(
                                "expected a denominator, got {other:?}"
                            )))
                        }
                    }
                }
                let c = C::from_str(&lit)
                    .map_err(|_| Error::parse(format!("bad coefficient {lit:?}")))?;
                SparsePoly::constant(self.n, c)
            }
            Some(Tok::Var(name)) => {
                let idx = (self.resolve)(&name)
                    .ok_or_else(|| Error::parse(format!("unknown variable {name:?}")))?;
                if idx >= self.n {
                    return Err(Error::parse(format!("variable {name:?} out of range")));
                }
                let mut e = vec![0; self.n];
                e[idx] = 1;
                SparsePoly::monomial(self.n, e, C::one())
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::parse("expected ')'"));
                }
                inner
            }
            other => return Err(Error::parse(format!("unexpected token {other:?}"))),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.integer()?;
            return pow_poly(&base, e);
        }
        Ok(base)
    }
}

fn pow_poly<C: Coeff>(p: &SparsePoly<C>, e: i32) -> Result<SparsePoly<C>> {
    if e < 0 {
        // Only single monomials can be raised to negative powers.
        if p.terms.len() != 1 {
            return Err(Error::parse("negative power of a non-monomial"));
        }
        let (exps, c) = p.terms.iter().next().expect("one term");
        if !c.is_one() {
            return Err(Error::parse("negative power of a non-monic monomial"));
        }
        let scaled: Vec<i32> = exps.iter().map(|&x| x * e).collect();
        return Ok(SparsePoly::monomial(p.n, scaled, C::one()));
    }
    let mut acc = SparsePoly::one(p.n);
    for _ in 0..e {
        acc = &acc * p;
    }
    Ok(acc)
}

fn parse_with<C: Coeff>(
    s: &str,
    n: usize,
    resolve: &dyn Fn(&str) -> Option<usize>,
    allow_rational: bool,
) -> Result<SparsePoly<C>> {
    let toks = Tokens::lex(s)?;
    if toks.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    let mut parser: Parser<C> = Parser {
        toks: &toks,
        pos: 0,
        n,
        resolve,
        allow_rational,
        _marker: std::marker::PhantomData,
    };
    let p = parser.expr()?;
    if parser.pos != toks.len() {
        return Err(Error::parse("trailing input after polynomial"));
    }
    Ok(p)
}

fn resolve_prefixed(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    let idx: usize = rest.parse().ok()?;
    idx.checked_sub(1)
}

impl PolyS {
    /// Parse the canonical text form over `t1..tn`, e.g. `"2*t1^2 + 2*t1*t3"`.
    pub fn parse(s: &str, n: usize) -> Result<PolyS> {
        parse_with(s, n, &|name| resolve_prefixed(name, 't'), true)
    }

    /// Parse a rank-2n double polynomial over `t1..tn, z1..zn`.
    pub fn parse_double(s: &str, n: usize) -> Result<PolyS> {
        parse_with(s, 2 * n, &|name| {
            resolve_prefixed(name, 't').or_else(|| resolve_prefixed(name, 'z').map(|i| i + n))
        }, true)
    }
}

impl LaurentR {
    /// Parse the canonical text form over `x1..xn`, e.g. `"x1^-1*x2"`.
    pub fn parse(s: &str, n: usize) -> Result<LaurentR> {
        parse_with(s, n, &|name| resolve_prefixed(name, 'x'), false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize, n: usize) -> PolyS {
        PolyS::from_linear(&LinearForm::weight(i, n))
    }

    fn root(i: usize, j: usize, n: usize) -> LinearForm {
        // α_{ij} = t_j - t_i
        let mut c = vec![0; n];
        c[j - 1] = 1;
        c[i - 1] -= 1;
        LinearForm::new(c)
    }

    #[test]
    fn product_identity_case() {
        let a = PolyS::from_linear(&root(1, 2, 4));
        assert_eq!(poly_mul(&a, &PolyS::one(4)).unwrap(), a);
    }

    #[test]
    fn product_direct_expansion() {
        // (t2 - t1)(t4 - t3) = t2 t4 - t2 t3 - t1 t4 + t1 t3
        let p = poly_mul(
            &PolyS::from_linear(&root(1, 2, 4)),
            &PolyS::from_linear(&root(3, 4, 4)),
        )
        .unwrap();
        let expect = PolyS::parse("t2*t4 - t2*t3 - t1*t4 + t1*t3", 4).unwrap();
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "t1*t3 - t1*t4 - t2*t3 + t2*t4");
    }

    #[test]
    fn product_rank_mismatch() {
        assert!(poly_mul(&PolyS::one(3), &PolyS::one(4)).is_err());
    }

    #[test]
    fn exact_division_by_linear() {
        let n = 4;
        // (t2^2 - t1^2) / (t2 - t1) = t2 + t1
        let p = &(&t(2, n) * &t(2, n)) - &(&t(1, n) * &t(1, n));
        let q = p.exact_div_linear(&root(1, 2, n)).unwrap();
        assert_eq!(q, &t(2, n) + &t(1, n));

        // α12 α34 / α12 = α34
        let prod = &PolyS::from_linear(&root(1, 2, n)) * &PolyS::from_linear(&root(3, 4, n));
        assert_eq!(
            prod.exact_div_linear(&root(1, 2, n)).unwrap(),
            PolyS::from_linear(&root(3, 4, n))
        );

        // (t2 - t1 + 1) is not divisible by (t2 - t1)
        let bad = &PolyS::from_linear(&root(1, 2, n)) + &PolyS::one(n);
        assert!(matches!(
            bad.exact_div_linear(&root(1, 2, n)),
            Err(Error::NotDivisible)
        ));
    }

    #[test]
    fn laurent_division_by_one_minus() {
        let n = 2;
        let alpha = root(1, 2, n);
        let two_alpha = alpha.scaled(2);
        // (1 - x^{2α}) / (1 - x^α) = 1 + x^α
        let p = LaurentR::one_minus(&two_alpha);
        let q = p.exact_div_one_minus(&alpha).unwrap();
        assert_eq!(
            q,
            &LaurentR::one(n) + &LaurentR::from_character(&alpha)
        );

        // 0 / (1 - x^α) = 0
        assert!(LaurentR::zero(n)
            .exact_div_one_minus(&alpha)
            .unwrap()
            .is_zero());

        // (2 - x^α) is not divisible
        let bad = &LaurentR::constant(n, BigInt::from(2)) - &LaurentR::from_character(&alpha);
        assert!(matches!(
            bad.exact_div_one_minus(&alpha),
            Err(Error::NotDivisible)
        ));
    }

    #[test]
    fn window_substitution() {
        let n = 4;
        // s_{α12} = 2134 negates its root
        let a12 = PolyS::from_linear(&root(1, 2, n));
        assert_eq!(a12.apply_window(&[2, 1, 3, 4]), -&a12);

        // the sign change in C2 sends t1 to -t1
        let t1 = t(1, 2);
        assert_eq!(t1.apply_window(&[-1, 2]), -&t(1, 2));

        // and on the Laurent side x^{t1} ↦ x^{-t1}
        let x1 = LaurentR::from_character(&LinearForm::weight(1, 2));
        assert_eq!(
            x1.apply_window(&[-1, 2]),
            LaurentR::monomial(2, vec![-1, 0], BigInt::one())
        );
    }

    #[test]
    fn truncation_to_cohomology() {
        let n = 4;
        let a12 = root(1, 2, n);
        let a34 = root(3, 4, n);
        // 1 - x^{-α}, d = 1 → α
        let p = LaurentR::one_minus(&a12.scaled(-1));
        assert_eq!(p.truncate_to_cohomology(1), PolyS::from_linear(&a12));

        // x^λ, d = 0 → 1
        let xl = LaurentR::from_character(&LinearForm::new(vec![2, -1, 0, 3]));
        assert_eq!(xl.truncate_to_cohomology(0), PolyS::one(n));

        // (1 - x^{-α12})(1 - x^{-α34}), d = 2 → α12 α34
        let q = &LaurentR::one_minus(&a12.scaled(-1)) * &LaurentR::one_minus(&a34.scaled(-1));
        assert_eq!(
            q.truncate_to_cohomology(2),
            &PolyS::from_linear(&a12) * &PolyS::from_linear(&a34)
        );
    }

    #[test]
    fn canonical_text_round_trip() {
        let s = "2*t1^2 + 2*t1*t3";
        let p = PolyS::parse(s, 4).unwrap();
        assert_eq!(p.to_string(), s);

        let l = LaurentR::parse("x1^-1*x2", 3).unwrap();
        assert_eq!(l.to_string(), "x1^-1*x2");
        assert_eq!(LaurentR::parse(&l.to_string(), 3).unwrap(), l);
    }

    #[test]
    fn json_round_trip() {
        let p = PolyS::parse("3/2*t1^2 - t2 + 1", 3).unwrap();
        let v = p.to_json();
        assert_eq!(PolyS::from_json(3, &v).unwrap(), p);

        let l = LaurentR::parse("2*x1^-2*x3 - 5", 3).unwrap();
        assert_eq!(LaurentR::from_json(3, &l.to_json()).unwrap(), l);
    }
}
