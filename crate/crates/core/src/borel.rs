//! The type-A Borel presentation: double Schubert and double Grothendieck
//! polynomial representatives in `Q[t1..tn, z1..zn]` resp.
//! `Z[x^{±t}, x^{±z}]`, their evaluation at fixed points (`z_i ↦ t_{w(i)}`,
//! realizing `i_w^*(f ⊗ g) = f·(w.g)`), and the substitution form of the
//! pattern pullback (`z_i ↦ z_{ς(i)}`).
//!
//! Representatives are canonical polynomial lifts; reduction to a Levi
//! Schubert basis goes through evaluation to a localized class followed by
//! triangular expansion, so no quotient-ring arithmetic is needed.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::gkm::{expand_in_schubert_coh, expand_in_schubert_k, ExpansionK, ExpansionS, GkmClass};
use crate::pattern::LeviDatum;
use crate::symbolic::{Coeff, DoubleDisplay, LaurentR, LinearForm, PolyS, SparsePoly};
use crate::weyl::{RootDatum, TypeLabel, WeylElem, Window};

/// A polynomial in the doubled variable set `t1..tn, z1..zn` (rank 2n;
/// indices 0..n are the t-block, n..2n the z-block).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoublePoly<C: Coeff> {
    strands: usize,
    poly: SparsePoly<C>,
}

pub type DoublePolyS = DoublePoly<BigRational>;
pub type DoublePolyK = DoublePoly<BigInt>;

impl<C: Coeff> DoublePoly<C> {
    pub fn new(strands: usize, poly: SparsePoly<C>) -> Self {
        assert_eq!(poly.rank(), 2 * strands);
        DoublePoly { strands, poly }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn poly(&self) -> &SparsePoly<C> {
        &self.poly
    }

    /// Substitute `z_i ↦ z_{ς(i)}`, leaving the t-block untouched: the
    /// Borel form of the pattern pullback `f ⊗ g ↦ f ⊗ ς.g`.
    pub fn pullback(&self, rep: &WeylElem) -> DoublePoly<C> {
        let n = self.strands;
        let terms = self.poly.terms().map(|(exps, c)| {
            let mut e = exps[..n].to_vec();
            e.resize(2 * n, 0);
            for i in 0..n {
                let img = rep.apply(i as i32 + 1);
                debug_assert!(img > 0, "type A only");
                e[n + img as usize - 1] += exps[n + i];
            }
            (e, c.clone())
        });
        DoublePoly {
            strands: n,
            poly: SparsePoly::from_terms(2 * n, terms),
        }
    }

    /// Substitute `z_i ↦ t_{w(i)}`, collapsing to a rank-n value: the
    /// restriction to the fixed point `w`.
    pub fn eval(&self, w: &WeylElem) -> SparsePoly<C> {
        let n = self.strands;
        let terms = self.poly.terms().map(|(exps, c)| {
            let mut e = exps[..n].to_vec();
            for i in 0..n {
                let img = w.apply(i as i32 + 1);
                debug_assert!(img > 0, "type A only");
                e[img as usize - 1] += exps[n + i];
            }
            (e, c.clone())
        });
        SparsePoly::from_terms(n, terms)
    }

    /// Swap `z_i` and `z_{i+1}` (0-based `i`).
    fn swap_z(&self, i: usize) -> DoublePoly<C> {
        let n = self.strands;
        let mut window: Vec<i32> = (1..=2 * n as i32).collect();
        window.swap(n + i, n + i + 1);
        DoublePoly {
            strands: n,
            poly: self.poly.permute_variables(&window),
        }
    }
}

impl<C: Coeff> std::fmt::Display for DoublePoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", DoubleDisplay(&self.poly, self.strands))
    }
}

fn require_type_a(datum: &RootDatum) -> Result<()> {
    if datum.label() != TypeLabel::A {
        return Err(Error::invalid(
            "double polynomial representatives exist in type A only".to_string(),
        ));
    }
    Ok(())
}

/// `z_i - z_{i+1}` as a rank-2n linear form (0-based `i`).
fn z_difference(n: usize, i: usize) -> LinearForm {
    let mut c = vec![0; 2 * n];
    c[n + i] = 1;
    c[n + i + 1] = -1;
    LinearForm::new(c)
}

/// The divided difference in the z-variables,
/// `∂_i f = (f - s_i^z f) / (z_i - z_{i+1})`.
pub fn divided_difference(p: &DoublePolyS, i: usize) -> Result<DoublePolyS> {
    let n = p.strands;
    let num = &p.poly - &p.swap_z(i).poly;
    let q = num.exact_div_linear(&z_difference(n, i))?;
    Ok(DoublePoly::new(n, q))
}

/// The isobaric divided difference in the z-variables,
/// `π_i f = (f - x^{z_{i+1}-z_i} s_i^z f) / (1 - x^{z_{i+1}-z_i})`; the
/// Borel-side mirror of the pointwise Demazure operator.
pub fn isobaric_divided_difference(p: &DoublePolyK, i: usize) -> Result<DoublePolyK> {
    let n = p.strands;
    let delta = z_difference(n, i).scaled(-1); // z_{i+1} - z_i
    let shifted = &LaurentR::from_character(&delta) * &p.swap_z(i).poly;
    let num = &p.poly - &shifted;
    let q = num.exact_div_one_minus(&delta)?;
    Ok(DoublePoly::new(n, q))
}

/// All double Schubert polynomials of a type-A datum, generated by divided
/// differences from the top polynomial `∏_{i+j≤n} (z_i - t_j)`.
pub struct SchubertPolyTable {
    polys: BTreeMap<Window, DoublePolyS>,
}

impl SchubertPolyTable {
    pub fn new(datum: &RootDatum) -> Result<SchubertPolyTable> {
        require_type_a(datum)?;
        let n = datum.rank();
        let mut top = PolyS::one(2 * n);
        for i in 1..=n {
            for j in 1..=n {
                if i + j <= n {
                    let mut c = vec![0; 2 * n];
                    c[n + i - 1] = 1;
                    c[j - 1] = -1;
                    top = &top * &PolyS::from_linear(&LinearForm::new(c));
                }
            }
        }
        let mut elements = datum.enumerate();
        elements.sort_by_key(|w| std::cmp::Reverse(w.length()));
        let mut polys: BTreeMap<Window, DoublePolyS> = BTreeMap::new();
        polys.insert(
            elements[0].window().to_vec(),
            DoublePoly::new(n, top),
        );
        for w in &elements[1..] {
            // any ascent: 𝔖_w = ∂_i 𝔖_{w s_i} with ℓ(w s_i) > ℓ(w)
            let i = (0..n - 1)
                .find(|&i| {
                    let wsi = w
                        .multiply(&datum.simple_reflection(i))
                        .expect("same datum");
                    wsi.length() > w.length()
                })
                .expect("only the longest element has no ascent");
            let wsi = w
                .multiply(&datum.simple_reflection(i))
                .expect("same datum");
            let longer = polys[wsi.window()].clone();
            let poly = divided_difference(&longer, i)
                .expect("divided differences of Schubert polynomials are exact");
            polys.insert(w.window().to_vec(), poly);
        }
        Ok(SchubertPolyTable { polys })
    }

    pub fn class(&self, w: &WeylElem) -> &DoublePolyS {
        &self.polys[w.window()]
    }
}

/// All double Grothendieck polynomials, generated by isobaric divided
/// differences from `∏_{i+j≤n} (1 - x^{t_j - z_i})`; calibrated so that
/// evaluation agrees with the localized structure sheaves.
pub struct GrothendieckPolyTable {
    polys: BTreeMap<Window, DoublePolyK>,
}

impl GrothendieckPolyTable {
    pub fn new(datum: &RootDatum) -> Result<GrothendieckPolyTable> {
        require_type_a(datum)?;
        let n = datum.rank();
        let mut top = LaurentR::one(2 * n);
        for i in 1..=n {
            for j in 1..=n {
                if i + j <= n {
                    let mut c = vec![0; 2 * n];
                    c[j - 1] = 1;
                    c[n + i - 1] = -1;
                    top = &top * &LaurentR::one_minus(&LinearForm::new(c));
                }
            }
        }
        let mut elements = datum.enumerate();
        elements.sort_by_key(|w| std::cmp::Reverse(w.length()));
        let mut polys: BTreeMap<Window, DoublePolyK> = BTreeMap::new();
        polys.insert(elements[0].window().to_vec(), DoublePoly::new(n, top));
        for w in &elements[1..] {
            let i = (0..n - 1)
                .find(|&i| {
                    let wsi = w
                        .multiply(&datum.simple_reflection(i))
                        .expect("same datum");
                    wsi.length() > w.length()
                })
                .expect("only the longest element has no ascent");
            let wsi = w
                .multiply(&datum.simple_reflection(i))
                .expect("same datum");
            let longer = polys[wsi.window()].clone();
            let poly = isobaric_divided_difference(&longer, i)
                .expect("isobaric differences of Grothendieck polynomials are exact");
            polys.insert(w.window().to_vec(), poly);
        }
        Ok(GrothendieckPolyTable { polys })
    }

    pub fn class(&self, w: &WeylElem) -> &DoublePolyK {
        &self.polys[w.window()]
    }
}

/// The double Schubert polynomial of one element.
pub fn double_schubert(w: &WeylElem) -> Result<DoublePolyS> {
    Ok(SchubertPolyTable::new(w.datum())?.class(w).clone())
}

/// The double Grothendieck polynomial of one element.
pub fn double_grothendieck(w: &WeylElem) -> Result<DoublePolyK> {
    Ok(GrothendieckPolyTable::new(w.datum())?.class(w).clone())
}

/// Pull a Borel representative back along ι_ς and expand over the Levi
/// Schubert basis, by evaluating to a localized class on W′.
pub fn expand_pullback_via_borel(
    levi: &LeviDatum,
    p: &DoublePolyS,
    rep: &WeylElem,
) -> Result<ExpansionS> {
    let pulled = p.pullback(rep);
    let sub = levi.subsystem();
    let values: BTreeMap<Window, PolyS> = sub
        .elements()
        .iter()
        .map(|w| (w.window().to_vec(), pulled.eval(w)))
        .collect();
    expand_in_schubert_coh(&GkmClass::from_values(sub, values))
}

/// K-theory version of `expand_pullback_via_borel`.
pub fn expand_pullback_via_borel_k(
    levi: &LeviDatum,
    p: &DoublePolyK,
    rep: &WeylElem,
) -> Result<ExpansionK> {
    let pulled = p.pullback(rep);
    let sub = levi.subsystem();
    let values: BTreeMap<Window, LaurentR> = sub
        .elements()
        .iter()
        .map(|w| (w.window().to_vec(), pulled.eval(w)))
        .collect();
    expand_in_schubert_k(&GkmClass::from_values(sub, values))
}
