//! The pattern map: Levi data cut out by a cocharacter, the coset
//! decomposition of the Weyl group with minimal representatives, the
//! flattening map to the Levi Weyl group, and the pullback of equivariant
//! classes along the sections of the pattern map, in both the localization
//! and Schubert-basis presentations and in both cohomology and K-theory.
//!
//! The fixed locus of the cocharacter's torus is a disjoint union of copies
//! of the Levi flag variety, one per right coset of W′ in W; the copy
//! indexed by the minimal representative ς carries the section ι_ς, whose
//! pullback on localized classes is plain restriction `w ↦ φ(wς)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::gkm::{
    self, billey_localize, expand_in_schubert_coh, expand_in_schubert_k, Expansion, ExpansionK,
    ExpansionS, GkmClass, KFamily,
};
use crate::symbolic::{Coeff, LinearForm};
use crate::weyl::{RootDatum, TypeLabel, WeylElem, WeylSystem, Window};

/// One irreducible factor of the Levi root subsystem, with its simple roots
/// ordered to match a standard root datum of the same type, so that Levi
/// Weyl group elements get windows in the factor's own notation.
#[derive(Debug)]
pub struct LeviFactor {
    pub label: TypeLabel,
    /// Simple roots in ambient coordinates, in standard-datum order.
    pub simples: Vec<LinearForm>,
    /// The standard datum this factor is identified with.
    pub standard: RootDatum,
}

#[derive(Debug)]
pub struct Coset {
    pub rep: WeylElem,
    pub members: Vec<WeylElem>,
}

/// The Levi datum of a cocharacter: the root subsystem it centralizes, the
/// reflection subgroup W′, and the coset decomposition with minimal
/// representatives.
pub struct LeviDatum {
    datum: RootDatum,
    eta: Vec<i64>,
    ambient: Arc<WeylSystem>,
    sub: Arc<WeylSystem>,
    factors: Vec<LeviFactor>,
    /// Offsets of each factor's letters inside the subsystem simple list.
    factor_offsets: Vec<usize>,
    cosets: Vec<Coset>,
    coset_of: BTreeMap<Window, usize>,
}

/// The flattening of an ambient element: `x = w·ς` with `w ∈ W′` and `ς`
/// the minimal representative of the coset `W′x`.
pub struct FlattenResult {
    pub rep: WeylElem,
    /// The W′ part, still in ambient window notation.
    pub ambient_factor: WeylElem,
    /// The same element written per factor in the factor's own notation.
    pub factor_windows: Vec<WeylElem>,
}

impl fmt::Display for FlattenResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .factor_windows
            .iter()
            .map(|w| w.name())
            .collect::<Vec<_>>()
            .join("|");
        write!(f, "({parts})·{}", self.rep)
    }
}

impl LeviDatum {
    /// Compute the Levi datum of an integer cocharacter: the subsystem
    /// `Φ′ = {α : ⟨α, η⟩ = 0}`, its simple roots, the subgroup W′ and all
    /// right cosets with their minimal-length representatives.
    pub fn from_cocharacter(datum: &RootDatum, eta: &[i64]) -> Result<LeviDatum> {
        if eta.len() != datum.rank() {
            return Err(Error::invalid(format!(
                "cocharacter has {} entries, expected {}",
                eta.len(),
                datum.rank()
            )));
        }
        let ambient = WeylSystem::full(datum);
        let sub_positive: Vec<LinearForm> = datum
            .positive_roots()
            .iter()
            .filter(|a| a.pair(eta) == 0)
            .cloned()
            .collect();
        // Simple roots of the subsystem: positive roots that are not the
        // sum of two positive subsystem roots.
        let mut sub_simple: Vec<LinearForm> = sub_positive
            .iter()
            .filter(|a| {
                !sub_positive.iter().any(|b| {
                    let rest = a.sub_multiple(1, b);
                    !rest.is_zero() && sub_positive.contains(&rest)
                })
            })
            .cloned()
            .collect();
        sub_simple.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        let factors = split_factors(datum, &sub_simple)?;
        // Reorder the subsystem simples as the concatenation of the factor
        // orders, so subsystem letters map directly to factor letters.
        let mut ordered_simples = Vec::new();
        let mut factor_offsets = Vec::new();
        for f in &factors {
            factor_offsets.push(ordered_simples.len());
            ordered_simples.extend(f.simples.iter().cloned());
        }
        let sub = WeylSystem::subgroup(datum, sub_positive, ordered_simples);

        // Right cosets W′x, ordered by their minimal representatives.
        let mut coset_of: BTreeMap<Window, usize> = BTreeMap::new();
        let mut cosets: Vec<Coset> = Vec::new();
        for x in ambient.elements() {
            if coset_of.contains_key(x.window()) {
                continue;
            }
            let members: Vec<WeylElem> = sub
                .elements()
                .iter()
                .map(|w| w.multiply(x).expect("same datum"))
                .sorted_by_key(|y| (y.length(), y.window().to_vec()))
                .collect();
            let rep = members[0].clone();
            let id = cosets.len();
            for m in &members {
                coset_of.insert(m.window().to_vec(), id);
            }
            cosets.push(Coset { rep, members });
        }
        cosets.sort_by_key(|c| (c.rep.length(), c.rep.window().to_vec()));
        let coset_of = cosets
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.members.iter().map(move |m| (m.window().to_vec(), i)))
            .collect();
        Ok(LeviDatum {
            datum: datum.clone(),
            eta: eta.to_vec(),
            ambient,
            sub,
            factors,
            factor_offsets,
            cosets,
            coset_of,
        })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn eta(&self) -> &[i64] {
        &self.eta
    }

    pub fn ambient(&self) -> &Arc<WeylSystem> {
        &self.ambient
    }

    /// The Levi Weyl group W′ as a system in ambient coordinates.
    pub fn subsystem(&self) -> &Arc<WeylSystem> {
        &self.sub
    }

    pub fn factors(&self) -> &[LeviFactor] {
        &self.factors
    }

    /// Type label like `A1xA1` or `A3`.
    pub fn sub_type(&self) -> String {
        if self.factors.is_empty() {
            return "trivial".to_string();
        }
        self.factors
            .iter()
            .map(|f| f.standard.name())
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    /// Minimal coset representatives, sorted by (length, window).
    pub fn min_coset_reps(&self) -> Vec<WeylElem> {
        self.cosets.iter().map(|c| c.rep.clone()).collect()
    }

    pub fn is_minimal_rep(&self, w: &WeylElem) -> bool {
        let id = self.coset_of[w.window()];
        self.cosets[id].rep.window() == w.window()
    }

    fn require_minimal(&self, w: &WeylElem) -> Result<()> {
        if self.is_minimal_rep(w) {
            Ok(())
        } else {
            let valid = self
                .min_coset_reps()
                .iter()
                .map(|r| r.name())
                .collect::<Vec<_>>()
                .join(" ");
            Err(Error::RepNotMinimal(w.name(), valid))
        }
    }

    /// Write `x = w·ς` and express `w ∈ W′` in factor window notation.
    pub fn flatten(&self, x: &WeylElem) -> FlattenResult {
        let coset = &self.cosets[self.coset_of[x.window()]];
        let rep = coset.rep.clone();
        let w = x.multiply(&rep.inverse()).expect("same datum");
        debug_assert!(self.sub.contains(&w));
        let word = self.sub.canonical_word(&w);
        let mut factor_windows: Vec<WeylElem> = self
            .factors
            .iter()
            .map(|f| f.standard.identity())
            .collect();
        for &letter in word {
            let (fi, local) = self.factor_letter(letter);
            let s = self.factors[fi].standard.simple_reflection(local);
            factor_windows[fi] = factor_windows[fi].multiply(&s).expect("same datum");
        }
        FlattenResult {
            rep,
            ambient_factor: w,
            factor_windows,
        }
    }

    fn factor_letter(&self, letter: usize) -> (usize, usize) {
        for (fi, &off) in self.factor_offsets.iter().enumerate().rev() {
            if letter >= off {
                return (fi, letter - off);
            }
        }
        unreachable!("letter outside factor ranges")
    }

    /// Restriction of a localized class along the section ι_ς: the class on
    /// W′ with value `φ(w·ς)` at `w`.
    pub fn pullback_localized<C: Coeff>(
        &self,
        class: &GkmClass<C>,
        rep: &WeylElem,
    ) -> Result<GkmClass<C>> {
        self.require_minimal(rep)?;
        let values = self
            .sub
            .elements()
            .iter()
            .map(|w| {
                let wr = w.multiply(rep).expect("same datum");
                (w.window().to_vec(), class.value(&wr).clone())
            })
            .collect();
        Ok(GkmClass::from_values(&self.sub, values))
    }

    /// Keep only the terms of an ambient expansion indexed by the coset
    /// `W′ς`, re-keyed by the W′ part.
    pub fn restrict_expansion<C: Coeff>(
        &self,
        expansion: &Expansion<C>,
        rep: &WeylElem,
    ) -> Expansion<C> {
        let coset_id = self.coset_of[rep.window()];
        let rep_inv = rep.inverse();
        Expansion::from_terms(expansion.terms().filter_map(|(x, c)| {
            if self.coset_of.get(x) != Some(&coset_id) {
                return None;
            }
            let x = self.datum.element(x.clone()).expect("valid window");
            let w = x.multiply(&rep_inv).expect("same datum");
            Some((w.window().to_vec(), c.clone()))
        }))
    }

    /// `ι_ς^*(𝔖_u)` in the W′ Schubert basis. The localization route
    /// expands the restricted class over W′; checked mode also runs the
    /// structure-constant route (expand `𝔖_u·𝔖_ς` and keep the `wς` terms)
    /// and requires exact agreement.
    pub fn pullback_schubert_coh(
        &self,
        u: &WeylElem,
        rep: &WeylElem,
        checked: bool,
    ) -> Result<ExpansionS> {
        self.require_minimal(rep)?;
        let localized = billey_localize(&self.ambient, u);
        let restricted = self.pullback_localized(&localized, rep)?;
        if gkm::check_gkm_coh(&restricted).is_err() {
            return Err(Error::CrossCheckFailure(
                "restricted class violates the Levi GKM relations".to_string(),
            ));
        }
        let via_localization = expand_in_schubert_coh(&restricted)?;
        if checked {
            let product = gkm::structure_constants_coh(&self.ambient, u, rep)?;
            let via_product = self.restrict_expansion(&product, rep);
            if via_product != via_localization {
                return Err(Error::CrossCheckFailure(format!(
                    "Schubert-basis pullback routes disagree for u={u}, rep={rep}"
                )));
            }
        }
        Ok(via_localization)
    }

    /// `ι_ς^*([O_{X^u}])` in the W′ structure-sheaf basis, with the same
    /// two routes as the cohomology version.
    pub fn pullback_schubert_k(
        &self,
        u: &WeylElem,
        rep: &WeylElem,
        checked: bool,
    ) -> Result<ExpansionK> {
        self.require_minimal(rep)?;
        let family = KFamily::new(&self.ambient);
        let restricted = self.pullback_localized(family.class(u), rep)?;
        if gkm::check_gkm_k(&restricted).is_err() {
            return Err(Error::CrossCheckFailure(
                "restricted class violates the Levi K-GKM relations".to_string(),
            ));
        }
        let via_localization = expand_in_schubert_k(&restricted)?;
        if checked {
            let product = gkm::structure_constants_k(&self.ambient, u, rep)?;
            let via_product = self.restrict_expansion(&product, rep);
            if via_product != via_localization {
                return Err(Error::CrossCheckFailure(format!(
                    "K-theory pullback routes disagree for u={u}, rep={rep}"
                )));
            }
        }
        Ok(via_localization)
    }
}

/// Split the subsystem simples into irreducible factors and identify each
/// factor's Coxeter type, with simples reordered to match the standard
/// datum of that type.
fn split_factors(datum: &RootDatum, simples: &[LinearForm]) -> Result<Vec<LeviFactor>> {
    let k = simples.len();
    let mut assigned = vec![false; k];
    let mut factors = Vec::new();
    for start in 0..k {
        if assigned[start] {
            continue;
        }
        // connected component of the Coxeter graph
        let mut comp = vec![start];
        assigned[start] = true;
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for j in 0..k {
                if !assigned[j] && simples[i].dot(&simples[j]) != 0 {
                    assigned[j] = true;
                    comp.push(j);
                    frontier.push(j);
                }
            }
        }
        comp.sort();
        let roots: Vec<LinearForm> = comp.iter().map(|&i| simples[i].clone()).collect();
        factors.push(classify_factor(datum, roots)?);
    }
    factors.sort_by(|a, b| a.simples[0].coeffs().cmp(b.simples[0].coeffs()));
    Ok(factors)
}

fn cartan_matrix(roots: &[LinearForm]) -> Vec<Vec<i64>> {
    roots
        .iter()
        .map(|a| roots.iter().map(|b| a.cartan_pairing(b)).collect())
        .collect()
}

fn classify_factor(datum: &RootDatum, roots: Vec<LinearForm>) -> Result<LeviFactor> {
    let k = roots.len();
    let cartan = cartan_matrix(&roots);
    let label = if k == 1 {
        TypeLabel::A
    } else {
        let mut double_bonds = 0;
        let mut max_degree = 0;
        for i in 0..k {
            let mut deg = 0;
            for j in 0..k {
                if i != j && cartan[i][j] != 0 {
                    deg += 1;
                    if cartan[i][j] * cartan[j][i] == 2 {
                        double_bonds += 1;
                    }
                }
            }
            max_degree = max_degree.max(deg);
        }
        double_bonds /= 2;
        if double_bonds == 0 && max_degree <= 2 {
            TypeLabel::A
        } else if double_bonds == 0 && max_degree == 3 {
            TypeLabel::D
        } else if double_bonds == 1 && max_degree <= 2 {
            // ⟨α_i, α_j∨⟩ = -2 identifies α_j as the short root of the
            // double bond. In the classical ambients the long root of a C
            // factor is some 2t_i of norm 4, while a B factor pairs a
            // norm-1 short root with a norm-2 chain.
            let mut long = None;
            for i in 0..k {
                for j in 0..k {
                    if i != j && cartan[i][j] == -2 {
                        long = Some(i);
                    }
                }
            }
            let long = long.expect("double bond");
            if roots[long].dot(&roots[long]) == 4 {
                TypeLabel::C
            } else {
                TypeLabel::B
            }
        } else {
            return Err(Error::invalid(
                "subsystem factor is not of classical type".to_string(),
            ));
        }
    };
    let standard = match label {
        TypeLabel::A => RootDatum::new(TypeLabel::A, k + 1)?,
        other => RootDatum::new(other, k)?,
    };
    // Order the factor simples to match the standard datum's Cartan matrix;
    // among matching orders take the lexicographically smallest sequence.
    let std_cartan = cartan_matrix(standard.simple_roots());
    let mut best: Option<Vec<LinearForm>> = None;
    for perm in (0..k).permutations(k) {
        let ordered: Vec<LinearForm> = perm.iter().map(|&i| roots[i].clone()).collect();
        if cartan_matrix(&ordered) == std_cartan {
            let key: Vec<Vec<i32>> = ordered.iter().map(|r| r.coeffs().to_vec()).collect();
            let better = match &best {
                None => true,
                Some(b) => {
                    let bkey: Vec<Vec<i32>> = b.iter().map(|r| r.coeffs().to_vec()).collect();
                    key < bkey
                }
            };
            if better {
                best = Some(ordered);
            }
        }
    }
    let simples = best.ok_or_else(|| {
        Error::invalid("subsystem factor does not match a standard classical datum".to_string())
    })?;
    let _ = datum;
    Ok(LeviFactor {
        label,
        simples,
        standard,
    })
}

// ---------------------------------------------------------------------------
// Equivariant one-skeleton export
// ---------------------------------------------------------------------------

/// The moment graph: vertices are Weyl group elements, edges join `w` and
/// `s_α·w` and carry the positive root α. With a Levi datum, edges whose
/// root lies in Φ′ form the fixed-locus sub-skeleton and vertices group by
/// coset.
pub struct Skeleton {
    pub datum: RootDatum,
    pub vertices: Vec<Window>,
    /// (endpoint, endpoint, root, in_sub_skeleton)
    pub edges: Vec<(Window, Window, LinearForm, bool)>,
    /// One cluster of windows per coset, when built from a Levi datum.
    pub clusters: Option<Vec<Vec<Window>>>,
}

pub fn skeleton(datum: &RootDatum, levi: Option<&LeviDatum>) -> Skeleton {
    let system = WeylSystem::full(datum);
    let vertices: Vec<Window> = system
        .elements()
        .iter()
        .map(|w| w.window().to_vec())
        .collect();
    let mut edges = Vec::new();
    for w in system.elements() {
        for alpha in datum.positive_roots() {
            let s = datum.reflection(alpha).expect("positive root");
            let sw = s.multiply(w).expect("same datum");
            if w.window() < sw.window() {
                let in_sub = levi.is_some_and(|l| l.subsystem().positive_roots().contains(alpha));
                edges.push((w.window().to_vec(), sw.window().to_vec(), alpha.clone(), in_sub));
            }
        }
    }
    let clusters = levi.map(|l| {
        l.cosets()
            .iter()
            .map(|c| c.members.iter().map(|m| m.window().to_vec()).collect())
            .collect()
    });
    Skeleton {
        datum: datum.clone(),
        vertices,
        edges,
        clusters,
    }
}

impl Skeleton {
    pub fn to_dot(&self) -> String {
        let label = self.datum.label();
        let name = |w: &Window| crate::weyl::window_name(w, label);
        let mut out = String::new();
        out.push_str("graph skeleton {\n");
        match &self.clusters {
            Some(clusters) => {
                for (i, cluster) in clusters.iter().enumerate() {
                    out.push_str(&format!("  subgraph cluster_{i} {{\n"));
                    for w in cluster {
                        out.push_str(&format!("    \"{}\";\n", name(w)));
                    }
                    out.push_str("  }\n");
                }
            }
            None => {
                for w in &self.vertices {
                    out.push_str(&format!("  \"{}\";\n", name(w)));
                }
            }
        }
        for (a, b, root, in_sub) in &self.edges {
            let style = if *in_sub { ", style=bold" } else { "" };
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"{}];\n",
                name(a),
                name(b),
                root,
                style
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let label = self.datum.label();
        let name = |w: &Window| crate::weyl::window_name(w, label);
        serde_json::json!({
            "group": self.datum.name(),
            "vertices": self.vertices.iter().map(&name).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(a, b, root, in_sub)| {
                serde_json::json!({
                    "ends": [name(a), name(b)],
                    "root": root.to_string(),
                    "fixed_locus": in_sub,
                })
            }).collect::<Vec<_>>(),
            "clusters": self.clusters.as_ref().map(|cs| {
                cs.iter().map(|c| c.iter().map(&name).collect::<Vec<_>>()).collect::<Vec<_>>()
            }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::PolyS;

    fn a3_levi() -> LeviDatum {
        let d = RootDatum::parse("A3").unwrap();
        LeviDatum::from_cocharacter(&d, &[1, 1, -1, -1]).unwrap()
    }

    #[test]
    fn levi_a3_example() {
        let l = a3_levi();
        assert_eq!(l.sub_type(), "A1xA1");
        assert_eq!(l.subsystem().order(), 4);
        assert_eq!(l.cosets().len(), 6);
        let reps: Vec<String> = l.min_coset_reps().iter().map(|r| r.name()).collect();
        let expected: std::collections::BTreeSet<&str> =
            ["1234", "1324", "3124", "1342", "3142", "3412"].into();
        assert_eq!(
            reps.iter().map(String::as_str).collect::<std::collections::BTreeSet<_>>(),
            expected
        );
        // representatives come sorted by (length, window)
        assert_eq!(reps[0], "1234");
        assert_eq!(reps[5], "3412");
    }

    #[test]
    fn levi_c4_example() {
        let d = RootDatum::parse("C4").unwrap();
        let l = LeviDatum::from_cocharacter(&d, &[1, 1, 1, 1]).unwrap();
        assert_eq!(l.sub_type(), "A3");
        assert_eq!(l.subsystem().order(), 24);
        assert_eq!(l.cosets().len(), 16);
        let reps: Vec<Window> = l.min_coset_reps().iter().map(|r| r.window().to_vec()).collect();
        assert!(reps.contains(&vec![-2, -1, 3, 4]));
        assert!(reps.contains(&vec![2, 3, -1, 4]));
        assert!(reps.contains(&vec![3, -2, 4, -1]));
        assert!(reps.contains(&vec![-3, 4, -2, -1]));
    }

    #[test]
    fn degenerate_cocharacters() {
        let d = RootDatum::parse("A3").unwrap();
        let all = LeviDatum::from_cocharacter(&d, &[0, 0, 0, 0]).unwrap();
        assert_eq!(all.cosets().len(), 1);
        assert!(all.min_coset_reps()[0].is_identity());
        let generic = LeviDatum::from_cocharacter(&d, &[1, 2, 3, 4]).unwrap();
        assert_eq!(generic.subsystem().order(), 1);
        assert_eq!(generic.cosets().len(), 24);
    }

    #[test]
    fn minimal_reps_are_unique_and_inverse_positive() {
        for (name, eta) in [
            ("A3", vec![1i64, 1, -1, -1]),
            ("C4", vec![1, 1, 1, 1]),
            ("C2", vec![1, 1]),
        ] {
            let d = RootDatum::parse(name).unwrap();
            let l = LeviDatum::from_cocharacter(&d, &eta).unwrap();
            assert_eq!(
                l.ambient().order(),
                l.subsystem().order() * l.cosets().len()
            );
            for coset in l.cosets() {
                let min_len = coset.rep.length();
                let count = coset
                    .members
                    .iter()
                    .filter(|m| m.length() == min_len)
                    .count();
                assert_eq!(count, 1, "minimal member is unique");
                let rep_inv = coset.rep.inverse();
                for alpha in l.subsystem().positive_roots() {
                    let img = rep_inv.act_root(alpha);
                    assert!(
                        d.is_positive_root(&img),
                        "{}: rep {} sends {} negative",
                        name,
                        coset.rep,
                        alpha
                    );
                }
            }
        }
    }

    #[test]
    fn flatten_examples() {
        let l = a3_levi();
        let d = l.datum().clone();
        // a representative flattens to the identity
        let r = l.flatten(&d.parse_element("1324").unwrap());
        assert!(r.ambient_factor.is_identity());
        // 2413 = 2143 · 1324
        let r = l.flatten(&d.parse_element("2413").unwrap());
        assert_eq!(r.rep.name(), "1324");
        assert_eq!(r.ambient_factor.name(), "2143");
        assert_eq!(r.factor_windows.len(), 2);
        assert_eq!(r.factor_windows[0].name(), "21");
        assert_eq!(r.factor_windows[1].name(), "21");
        // re-multiplication reproduces the input
        let back = r.ambient_factor.multiply(&r.rep).unwrap();
        assert_eq!(back.name(), "2413");
    }

    #[test]
    fn flatten_is_equivariant() {
        let l = a3_levi();
        for w in l.subsystem().elements() {
            for x in l.ambient().elements() {
                let wx = w.multiply(x).unwrap();
                let lhs = l.flatten(&wx).ambient_factor;
                let rhs = w.multiply(&l.flatten(x).ambient_factor).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn flatten_respects_bruhat() {
        let l = a3_levi();
        let sub = l.subsystem().clone();
        let amb = l.ambient().clone();
        for w in sub.elements() {
            for x in amb.elements() {
                let wx = w.multiply(x).unwrap();
                let px = l.flatten(x).ambient_factor;
                let pwx = l.flatten(&wx).ambient_factor;
                if sub.bruhat_leq(&px, &pwx) {
                    assert!(amb.bruhat_leq(x, &wx), "x={x}, w={w}");
                }
            }
        }
    }

    #[test]
    fn pullback_localized_diamonds() {
        let l = a3_levi();
        let d = l.datum().clone();
        let s2143 = billey_localize(l.ambient(), &d.parse_element("2143").unwrap());
        let a = |s: &str| PolyS::parse(s, 4).unwrap();
        // ς = 1234: the restriction of the localization itself
        let p = l
            .pullback_localized(&s2143, &d.parse_element("1234").unwrap())
            .unwrap();
        assert_eq!(p.value(&d.parse_element("2143").unwrap()), &a("(t2-t1)*(t4-t3)"));
        for w in ["1234", "2134", "1243"] {
            assert!(p.value(&d.parse_element(w).unwrap()).is_zero());
        }
        // ς = 1342 diamond
        let p = l
            .pullback_localized(&s2143, &d.parse_element("1342").unwrap())
            .unwrap();
        assert_eq!(p.value(&d.parse_element("2143").unwrap()), &a("(t2-t1)*(t4-t1)"));
        assert_eq!(p.value(&d.parse_element("2134").unwrap()), &a("(t2-t1)*(t4-t1)"));
        assert!(p.value(&d.parse_element("1234").unwrap()).is_zero());
        assert!(p.value(&d.parse_element("1243").unwrap()).is_zero());
        // ς = 3412 diamond
        let p = l
            .pullback_localized(&s2143, &d.parse_element("3412").unwrap())
            .unwrap();
        assert_eq!(p.value(&d.parse_element("2143").unwrap()), &a("(t4-t1)^2"));
        assert_eq!(p.value(&d.parse_element("2134").unwrap()), &a("(t3-t1)*(t4-t1)"));
        assert_eq!(p.value(&d.parse_element("1243").unwrap()), &a("(t4-t1)*(t4-t2)"));
        assert_eq!(p.value(&d.parse_element("1234").unwrap()), &a("(t3-t1)*(t4-t2)"));
        assert!(gkm::check_gkm_coh(&p).is_ok());
    }

    #[test]
    fn pullback_schubert_worked_examples() {
        let l = a3_levi();
        let d = l.datum().clone();
        let u = d.parse_element("2143").unwrap();
        let a = |s: &str| PolyS::parse(s, 4).unwrap();
        // ι*_{1324} 𝔖_2143 = 𝔖_2143
        let e = l
            .pullback_schubert_coh(&u, &d.parse_element("1324").unwrap(), true)
            .unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.coefficient(&d.parse_element("2143").unwrap()).is_one());
        // ι*_{1342} 𝔖_2143 = α14 𝔖_2134
        let e = l
            .pullback_schubert_coh(&u, &d.parse_element("1342").unwrap(), true)
            .unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(
            e.coefficient(&d.parse_element("2134").unwrap()),
            a("t4-t1")
        );
        // ι*_{3412} 𝔖_2143: four terms, constant term α13·α24 (not α12·α24)
        let e = l
            .pullback_schubert_coh(&u, &d.parse_element("3412").unwrap(), true)
            .unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(
            e.coefficient(&d.parse_element("1234").unwrap()),
            a("(t3-t1)*(t4-t2)")
        );
        assert_eq!(
            e.coefficient(&d.parse_element("2134").unwrap()),
            a("t3-t1")
        );
        assert_eq!(
            e.coefficient(&d.parse_element("1243").unwrap()),
            a("t4-t2")
        );
        assert!(e.coefficient(&d.parse_element("2143").unwrap()).is_one());
    }

    #[test]
    fn pullback_rejects_non_minimal_reps() {
        let l = a3_levi();
        let d = l.datum().clone();
        let u = d.parse_element("2143").unwrap();
        let bad = d.parse_element("2134").unwrap();
        assert!(matches!(
            l.pullback_schubert_coh(&u, &bad, true),
            Err(Error::RepNotMinimal(..))
        ));
    }

    #[test]
    fn skeleton_counts() {
        let d = RootDatum::parse("A3").unwrap();
        let l = a3_levi();
        let sk = skeleton(&d, Some(&l));
        assert_eq!(sk.vertices.len(), 24);
        assert_eq!(sk.edges.len(), 72);
        let clusters = sk.clusters.as_ref().unwrap();
        assert_eq!(clusters.len(), 6);
        assert!(clusters.iter().all(|c| c.len() == 4));
        // each coset spans a 4-cycle in the sub-skeleton
        let sub_edges: Vec<_> = sk.edges.iter().filter(|e| e.3).collect();
        assert_eq!(sub_edges.len(), 24 * 2 / 2);
        let a1 = RootDatum::parse("A1").unwrap();
        let sk1 = skeleton(&a1, None);
        assert_eq!(sk1.vertices.len(), 2);
        assert_eq!(sk1.edges.len(), 1);
        let dot = sk.to_dot();
        assert!(dot.contains("cluster_5"));
        assert!(dot.contains("style=bold"));
    }
}
