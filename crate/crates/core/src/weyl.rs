//! Root data and Weyl groups of the classical types A, B, C, D.
//!
//! Elements are (signed) permutations in window notation `a_1 .. a_n`: the
//! absolute values form a permutation of `1..n`, negative entries are the
//! sign changes (none in type A, an even number in type D). The composition
//! convention is `(u·v)(i) = u(v(i))` with sign transport `u(-k) = -u(k)`,
//! and the induced action on characters is `t_i ↦ ±t_{|w(i)|}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::symbolic::{LaurentR, LinearForm, PolyS};

/// Window of a (signed) permutation; the map key used throughout.
pub type Window = Vec<i32>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::A => write!(f, "A"),
            TypeLabel::B => write!(f, "B"),
            TypeLabel::C => write!(f, "C"),
            TypeLabel::D => write!(f, "D"),
        }
    }
}

#[derive(Debug)]
struct DatumInner {
    label: TypeLabel,
    rank: usize,
    positive_roots: Vec<LinearForm>,
    simple_roots: Vec<LinearForm>,
    positive_set: BTreeSet<Vec<i32>>,
    reflections: BTreeMap<Vec<i32>, Window>,
}

/// A finite crystallographic root system in the rank-n character lattice,
/// with the positive and simple roots of the stated conventions.
#[derive(Clone, Debug)]
pub struct RootDatum(Arc<DatumInner>);

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.0.label == other.0.label && self.0.rank == other.0.rank
    }
}
impl Eq for RootDatum {}

fn root(n: usize, entries: &[(usize, i32)]) -> LinearForm {
    let mut c = vec![0; n];
    for &(i, v) in entries {
        c[i - 1] += v;
    }
    LinearForm::new(c)
}

impl RootDatum {
    /// Construct the root datum. `n` is the torus rank, so `(A, 4)` is the
    /// system usually written A3 (six positive roots).
    pub fn new(label: TypeLabel, n: usize) -> Result<RootDatum> {
        if n == 0 || (label == TypeLabel::D && n < 2) {
            return Err(Error::UnsupportedGroup(format!("{label}{n}")));
        }
        let mut positive = Vec::new();
        for j in 2..=n {
            for i in 1..j {
                positive.push(root(n, &[(j, 1), (i, -1)]));
            }
        }
        match label {
            TypeLabel::A => {}
            TypeLabel::B | TypeLabel::C | TypeLabel::D => {
                for j in 2..=n {
                    for i in 1..j {
                        positive.push(root(n, &[(i, 1), (j, 1)]));
                    }
                }
                if label == TypeLabel::B {
                    for i in 1..=n {
                        positive.push(root(n, &[(i, 1)]));
                    }
                } else if label == TypeLabel::C {
                    for i in 1..=n {
                        positive.push(root(n, &[(i, 2)]));
                    }
                }
            }
        }
        let mut simple: Vec<LinearForm> = (1..n)
            .map(|i| root(n, &[(i + 1, 1), (i, -1)]))
            .collect();
        match label {
            TypeLabel::A => {}
            TypeLabel::B => simple.push(root(n, &[(1, 1)])),
            TypeLabel::C => simple.push(root(n, &[(1, 2)])),
            TypeLabel::D => simple.push(root(n, &[(1, 1), (2, 1)])),
        }
        let positive_set: BTreeSet<Vec<i32>> =
            positive.iter().map(|a| a.coeffs().to_vec()).collect();
        let mut reflections = BTreeMap::new();
        for alpha in &positive {
            reflections.insert(alpha.coeffs().to_vec(), reflection_window(n, alpha));
        }
        Ok(RootDatum(Arc::new(DatumInner {
            label,
            rank: n,
            positive_roots: positive,
            simple_roots: simple,
            positive_set,
            reflections,
        })))
    }

    /// Parse a group name like `"A3"` or `"C4"`. The numeral is the Coxeter
    /// rank, so `A3` acts on a rank-4 torus.
    pub fn parse(name: &str) -> Result<RootDatum> {
        let mut chars = name.chars();
        let label = match chars.next() {
            Some('A') | Some('a') => TypeLabel::A,
            Some('B') | Some('b') => TypeLabel::B,
            Some('C') | Some('c') => TypeLabel::C,
            Some('D') | Some('d') => TypeLabel::D,
            _ => return Err(Error::UnsupportedGroup(name.to_string())),
        };
        let num: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedGroup(name.to_string()))?;
        let n = if label == TypeLabel::A { num + 1 } else { num };
        RootDatum::new(label, n)
    }

    pub fn label(&self) -> TypeLabel {
        self.0.label
    }

    /// Torus rank (the window length).
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Group name in the `A3`/`C4` convention.
    pub fn name(&self) -> String {
        let coxeter_rank = match self.0.label {
            TypeLabel::A => self.0.rank - 1,
            _ => self.0.rank,
        };
        format!("{}{}", self.0.label, coxeter_rank)
    }

    pub fn positive_roots(&self) -> &[LinearForm] {
        &self.0.positive_roots
    }

    pub fn simple_roots(&self) -> &[LinearForm] {
        &self.0.simple_roots
    }

    pub fn is_positive_root(&self, alpha: &LinearForm) -> bool {
        self.0.positive_set.contains(alpha.coeffs())
    }

    pub fn is_root(&self, alpha: &LinearForm) -> bool {
        self.is_positive_root(alpha) || self.is_positive_root(&alpha.scaled(-1))
    }

    pub fn identity(&self) -> WeylElem {
        WeylElem {
            datum: self.clone(),
            window: (1..=self.0.rank as i32).collect(),
        }
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElem {
        self.reflection(&self.0.simple_roots[i])
            .expect("simple roots are roots")
    }

    /// The reflection `λ ↦ λ - ⟨λ, α∨⟩ α` as a group element.
    pub fn reflection(&self, alpha: &LinearForm) -> Result<WeylElem> {
        let key = if self.is_positive_root(alpha) {
            alpha.coeffs().to_vec()
        } else {
            let neg = alpha.scaled(-1);
            if !self.is_positive_root(&neg) {
                return Err(Error::invalid(format!("{alpha} is not a root")));
            }
            neg.coeffs().to_vec()
        };
        Ok(WeylElem {
            datum: self.clone(),
            window: self.0.reflections[&key].clone(),
        })
    }

    pub fn element(&self, window: Window) -> Result<WeylElem> {
        self.validate_window(&window)?;
        Ok(WeylElem {
            datum: self.clone(),
            window,
        })
    }

    fn validate_window(&self, window: &[i32]) -> Result<()> {
        let n = self.0.rank;
        if window.len() != n {
            return Err(Error::parse(format!(
                "window has {} entries, expected {n}",
                window.len()
            )));
        }
        let mut seen = vec![false; n];
        let mut negatives = 0usize;
        for (pos, &a) in window.iter().enumerate() {
            let v = a.unsigned_abs() as usize;
            if v == 0 || v > n {
                return Err(Error::parse(format!(
                    "entry {a} at position {} is out of range 1..{n}",
                    pos + 1
                )));
            }
            if seen[v - 1] {
                return Err(Error::parse(format!(
                    "value {v} repeated at position {}",
                    pos + 1
                )));
            }
            seen[v - 1] = true;
            if a < 0 {
                negatives += 1;
            }
        }
        match self.0.label {
            TypeLabel::A if negatives > 0 => Err(Error::parse(
                "type A windows cannot contain negative entries",
            )),
            TypeLabel::D if negatives % 2 != 0 => Err(Error::parse(
                "type D windows need an even number of negative entries",
            )),
            _ => Ok(()),
        }
    }

    /// Parse `"3,-1,4,2"`, the compact form `"2143"`, or the bar-suffix
    /// form `"3,1b,4,2"` / `"2b1b34"` where `b` negates the preceding digit.
    pub fn parse_element(&self, s: &str) -> Result<WeylElem> {
        let s = s.trim();
        let window: Window = if s.contains(',') {
            s.split(',')
                .enumerate()
                .map(|(pos, tok)| {
                    let tok = tok.trim();
                    let (body, barred) = match tok.strip_suffix(['b', 'B']) {
                        Some(body) => (body, true),
                        None => (tok, false),
                    };
                    let v: i32 = body.parse().map_err(|_| {
                        Error::parse(format!("bad window entry {tok:?} at position {}", pos + 1))
                    })?;
                    Ok(if barred { -v } else { v })
                })
                .collect::<Result<_>>()?
        } else {
            let mut out = Vec::new();
            let mut chars = s.chars().peekable();
            let mut pos = 0usize;
            while let Some(c) = chars.next() {
                pos += 1;
                let d = c.to_digit(10).ok_or_else(|| {
                    Error::parse(format!("bad character {c:?} at position {pos}"))
                })? as i32;
                let neg = matches!(chars.peek(), Some('b') | Some('B'));
                if neg {
                    chars.next();
                }
                out.push(if neg { -d } else { d });
            }
            out
        };
        self.element(window)
    }

    /// All `|W|` elements.
    pub fn enumerate(&self) -> Vec<WeylElem> {
        let n = self.0.rank;
        let mut out = Vec::new();
        for perm in (1..=n as i32).permutations(n) {
            match self.0.label {
                TypeLabel::A => out.push(WeylElem {
                    datum: self.clone(),
                    window: perm,
                }),
                TypeLabel::B | TypeLabel::C | TypeLabel::D => {
                    for mask in 0u32..(1 << n) {
                        if self.0.label == TypeLabel::D && mask.count_ones() % 2 != 0 {
                            continue;
                        }
                        let window = perm
                            .iter()
                            .enumerate()
                            .map(|(i, &a)| if mask & (1 << i) != 0 { -a } else { a })
                            .collect();
                        out.push(WeylElem {
                            datum: self.clone(),
                            window,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn longest_element(&self) -> WeylElem {
        let mut w = self.identity();
        'outer: loop {
            for i in 0..self.0.simple_roots.len() {
                let ws = w.multiply(&self.simple_reflection(i)).expect("same datum");
                if ws.length() > w.length() {
                    w = ws;
                    continue 'outer;
                }
            }
            return w;
        }
    }
}

/// A (signed) permutation acting on characters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElem {
    datum: RootDatum,
    window: Window,
}

impl WeylElem {
    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    pub fn is_identity(&self) -> bool {
        self.window
            .iter()
            .enumerate()
            .all(|(i, &a)| a == i as i32 + 1)
    }

    /// `w(i)` with sign transport, for `i ∈ ±1..±n`.
    pub fn apply(&self, i: i32) -> i32 {
        let v = self.window[i.unsigned_abs() as usize - 1];
        if i < 0 {
            -v
        } else {
            v
        }
    }

    /// `(u·v)(i) = u(v(i))`.
    pub fn multiply(&self, other: &WeylElem) -> Result<WeylElem> {
        if self.datum != other.datum {
            return Err(Error::DatumMismatch);
        }
        Ok(WeylElem {
            datum: self.datum.clone(),
            window: other.window.iter().map(|&i| self.apply(i)).collect(),
        })
    }

    pub fn inverse(&self) -> WeylElem {
        let n = self.window.len();
        let mut window = vec![0; n];
        for (i, &a) in self.window.iter().enumerate() {
            let j = a.unsigned_abs() as usize - 1;
            window[j] = if a < 0 { -(i as i32 + 1) } else { i as i32 + 1 };
        }
        WeylElem {
            datum: self.datum.clone(),
            window,
        }
    }

    /// Coxeter length, by the window formulas: in type A the inversion
    /// count, in types B/C `inv + Σ_{a_i<0} |a_i|`, in type D
    /// `inv + Σ_{a_i<0} (|a_i| - 1)`.
    pub fn length(&self) -> usize {
        let w = &self.window;
        let mut inv = 0usize;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        let neg_sum: usize = w
            .iter()
            .filter(|&&a| a < 0)
            .map(|&a| a.unsigned_abs() as usize)
            .sum();
        let neg_count = w.iter().filter(|&&a| a < 0).count();
        match self.datum.label() {
            TypeLabel::A => inv,
            TypeLabel::B | TypeLabel::C => inv + neg_sum,
            TypeLabel::D => inv + neg_sum - neg_count,
        }
    }

    /// Number of positive roots sent negative; agrees with `length`.
    pub fn length_by_roots(&self) -> usize {
        self.datum
            .positive_roots()
            .iter()
            .filter(|alpha| !self.datum.is_positive_root(&self.act_root(alpha)))
            .count()
    }

    /// The character action `t_i ↦ ±t_{|w(i)|}` on a linear form.
    pub fn act_root(&self, alpha: &LinearForm) -> LinearForm {
        alpha.apply_window(&self.window)
    }

    /// The right Weyl action on the cohomology coefficient ring.
    pub fn subst_poly(&self, p: &PolyS) -> PolyS {
        p.apply_window(&self.window)
    }

    /// The right Weyl action on the representation ring.
    pub fn subst_laurent(&self, p: &LaurentR) -> LaurentR {
        p.apply_window(&self.window)
    }

    /// Canonical string: compact digits for type A, comma-separated with
    /// minus signs otherwise.
    pub fn name(&self) -> String {
        window_name(&self.window, self.datum.label())
    }
}

pub fn window_name(window: &[i32], label: TypeLabel) -> String {
    if label == TypeLabel::A && window.len() <= 9 {
        window.iter().map(|a| a.to_string()).collect()
    } else {
        window.iter().map(|a| a.to_string()).join(",")
    }
}

impl fmt::Display for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A reduced word: simple-root indices (0-based) whose reflections multiply
/// to the element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedWord(pub Vec<usize>);

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().map(|i| (i + 1).to_string()).join("."))
    }
}

fn reflection_window(n: usize, alpha: &LinearForm) -> Window {
    let mut window = Vec::with_capacity(n);
    for i in 1..=n {
        let e_i = LinearForm::weight(i, n);
        let c = e_i.cartan_pairing(alpha);
        let image = e_i.sub_multiple(c, alpha);
        let mut entry = None;
        for (j, &v) in image.coeffs().iter().enumerate() {
            match v {
                0 => {}
                1 | -1 if entry.is_none() => entry = Some(v * (j as i32 + 1)),
                _ => panic!("reflection image is not a signed weight"),
            }
        }
        window.push(entry.expect("reflection image is a signed weight"));
    }
    window
}

/// A Coxeter system acting in ambient coordinates: either a full Weyl group
/// or a reflection subgroup (a Levi Weyl group W′ with root subsystem Φ′).
/// Lengths, reduced words, descents and Bruhat order are all with respect
/// to this system's own simple roots.
#[derive(Debug)]
pub struct WeylSystem {
    datum: RootDatum,
    positive_roots: Vec<LinearForm>,
    positive_set: BTreeSet<Vec<i32>>,
    simple_roots: Vec<LinearForm>,
    simple_reflections: Vec<WeylElem>,
    elements: Vec<WeylElem>,
    index: BTreeMap<Window, usize>,
    lengths: Vec<usize>,
    words: Vec<Vec<usize>>,
}

impl WeylSystem {
    /// The full Weyl group of a root datum.
    pub fn full(datum: &RootDatum) -> Arc<WeylSystem> {
        let simples = datum.simple_roots().to_vec();
        let elements = datum.enumerate();
        Self::build(datum.clone(), datum.positive_roots().to_vec(), simples, elements)
    }

    /// A reflection subgroup given by its positive subsystem and simple
    /// roots; elements are generated by closure under the simple
    /// reflections.
    pub fn subgroup(
        datum: &RootDatum,
        positive_roots: Vec<LinearForm>,
        simple_roots: Vec<LinearForm>,
    ) -> Arc<WeylSystem> {
        let gens: Vec<WeylElem> = simple_roots
            .iter()
            .map(|a| datum.reflection(a).expect("subsystem roots are roots"))
            .collect();
        let mut seen: BTreeSet<Window> = BTreeSet::new();
        let mut queue = vec![datum.identity()];
        seen.insert(queue[0].window().to_vec());
        let mut elements = Vec::new();
        while let Some(w) = queue.pop() {
            elements.push(w.clone());
            for g in &gens {
                let next = w.multiply(g).expect("same datum");
                if seen.insert(next.window().to_vec()) {
                    queue.push(next);
                }
            }
        }
        Self::build(datum.clone(), positive_roots, simple_roots, elements)
    }

    fn build(
        datum: RootDatum,
        positive_roots: Vec<LinearForm>,
        simple_roots: Vec<LinearForm>,
        mut elements: Vec<WeylElem>,
    ) -> Arc<WeylSystem> {
        let positive_set: BTreeSet<Vec<i32>> =
            positive_roots.iter().map(|a| a.coeffs().to_vec()).collect();
        let length_of = |w: &WeylElem| -> usize {
            positive_roots
                .iter()
                .filter(|a| !positive_set.contains(w.act_root(a).coeffs()))
                .count()
        };
        elements.sort_by_key(|w| (length_of(w), w.window().to_vec()));
        let lengths: Vec<usize> = elements.iter().map(length_of).collect();
        let index: BTreeMap<Window, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.window().to_vec(), i))
            .collect();
        let simple_reflections: Vec<WeylElem> = simple_roots
            .iter()
            .map(|a| datum.reflection(a).expect("simple roots are roots"))
            .collect();
        let mut sys = WeylSystem {
            datum,
            positive_roots,
            positive_set,
            simple_roots,
            simple_reflections,
            elements,
            index,
            lengths,
            words: Vec::new(),
        };
        sys.words = sys
            .elements
            .iter()
            .map(|w| sys.compute_canonical_word(w))
            .collect();
        Arc::new(sys)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements sorted by (length, window); the expansion iteration order.
    pub fn elements(&self) -> &[WeylElem] {
        &self.elements
    }

    pub fn identity(&self) -> &WeylElem {
        &self.elements[0]
    }

    pub fn longest(&self) -> &WeylElem {
        self.elements.last().expect("nonempty group")
    }

    pub fn positive_roots(&self) -> &[LinearForm] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> &[LinearForm] {
        &self.simple_roots
    }

    pub fn simple_reflection(&self, i: usize) -> &WeylElem {
        &self.simple_reflections[i]
    }

    pub fn contains(&self, w: &WeylElem) -> bool {
        self.index.contains_key(w.window())
    }

    fn index_of(&self, w: &WeylElem) -> usize {
        *self
            .index
            .get(w.window())
            .unwrap_or_else(|| panic!("{w} is not in this system"))
    }

    /// Length with respect to this system's simple reflections.
    pub fn length(&self, w: &WeylElem) -> usize {
        self.lengths[self.index_of(w)]
    }

    /// Sign of a root of this system: true when it lies in the positive
    /// subsystem.
    pub fn is_positive(&self, alpha: &LinearForm) -> bool {
        if self.positive_set.contains(alpha.coeffs()) {
            return true;
        }
        debug_assert!(
            self.positive_set.contains(alpha.scaled(-1).coeffs()),
            "{alpha} is not a root of this system"
        );
        false
    }

    /// `ℓ(w s_i) > ℓ(w)` iff `w` sends the i-th simple root to a positive
    /// root.
    pub fn is_right_ascent(&self, w: &WeylElem, i: usize) -> bool {
        self.is_positive(&w.act_root(&self.simple_roots[i]))
    }

    pub fn right_descents(&self, w: &WeylElem) -> Vec<usize> {
        (0..self.simple_roots.len())
            .filter(|&i| !self.is_right_ascent(w, i))
            .collect()
    }

    pub fn left_descents(&self, w: &WeylElem) -> Vec<usize> {
        let winv = w.inverse();
        (0..self.simple_roots.len())
            .filter(|&i| !self.is_positive(&winv.act_root(&self.simple_roots[i])))
            .collect()
    }

    fn compute_canonical_word(&self, w: &WeylElem) -> Vec<usize> {
        // Leftmost-descent greedy: the lexicographically smallest reduced
        // word. Letters multiply left to right: w = s_{b1} s_{b2} ...
        let mut word = Vec::new();
        let mut cur = w.clone();
        loop {
            let winv = cur.inverse();
            let descent = (0..self.simple_roots.len())
                .find(|&i| !self.is_positive(&winv.act_root(&self.simple_roots[i])));
            match descent {
                None => break,
                Some(i) => {
                    word.push(i);
                    cur = self.simple_reflections[i]
                        .multiply(&cur)
                        .expect("same datum");
                }
            }
        }
        word
    }

    /// The canonical (lexicographically smallest) reduced word.
    pub fn canonical_word(&self, w: &WeylElem) -> &[usize] {
        &self.words[self.index_of(w)]
    }

    pub fn reduced_word(&self, w: &WeylElem) -> ReducedWord {
        ReducedWord(self.canonical_word(w).to_vec())
    }

    /// All reduced words of `w` (test-sized groups only).
    pub fn all_reduced_words(&self, w: &WeylElem) -> Vec<Vec<usize>> {
        if w.is_identity() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in self.left_descents(w) {
            let rest = self.simple_reflections[i]
                .multiply(w)
                .expect("same datum");
            for mut word in self.all_reduced_words(&rest) {
                word.insert(0, i);
                out.push(word);
            }
        }
        out
    }

    pub fn product_of_word(&self, word: &[usize]) -> WeylElem {
        let mut w = self.datum.identity();
        for &i in word {
            w = w
                .multiply(&self.simple_reflections[i])
                .expect("same datum");
        }
        w
    }

    /// Bruhat order by the descent recursion: pick a right descent `i` of
    /// `w`; then `v ≤ w` iff `v s_i ≤ w s_i` when `i` is also a descent of
    /// `v`, else `v ≤ w s_i`. Each step shortens `w`, so this is O(ℓ).
    pub fn bruhat_leq(&self, v: &WeylElem, w: &WeylElem) -> bool {
        let mut v = v.clone();
        let mut w = w.clone();
        loop {
            if v.window() == w.window() {
                return true;
            }
            if self.length(&v) >= self.length(&w) {
                return false;
            }
            let i = self.right_descents(&w)[0];
            w = w
                .multiply(self.simple_reflection(i))
                .expect("same datum");
            if !self.is_right_ascent(&v, i) {
                v = v
                    .multiply(self.simple_reflection(i))
                    .expect("same datum");
            }
        }
    }

    /// Inversion roots `{α ∈ Φ⁺ : w⁻¹·α ∈ Φ⁻}`; the diagonal Billey value
    /// is their product, and there are `ℓ(w)` of them.
    pub fn inversions(&self, w: &WeylElem) -> Vec<LinearForm> {
        let winv = w.inverse();
        self.positive_roots
            .iter()
            .filter(|a| !self.is_positive(&winv.act_root(a)))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(name: &str) -> RootDatum {
        RootDatum::parse(name).unwrap()
    }

    #[test]
    fn root_counts() {
        assert_eq!(datum("A3").positive_roots().len(), 6);
        assert_eq!(datum("C4").positive_roots().len(), 16);
        assert_eq!(datum("B3").positive_roots().len(), 9);
        assert_eq!(datum("D4").positive_roots().len(), 12);
        // A1 on a rank-1 torus: empty system, trivial group
        let a0 = RootDatum::new(TypeLabel::A, 1).unwrap();
        assert!(a0.positive_roots().is_empty());
        assert_eq!(a0.enumerate().len(), 1);
    }

    #[test]
    fn simple_roots_match_conventions() {
        let a3 = datum("A3");
        assert_eq!(
            a3.simple_roots()[0],
            LinearForm::new(vec![-1, 1, 0, 0]),
            "first simple root is t2 - t1"
        );
        let c2 = datum("C2");
        assert_eq!(c2.simple_roots()[1], LinearForm::new(vec![2, 0]));
        let b2 = datum("B2");
        assert_eq!(b2.simple_roots()[1], LinearForm::new(vec![1, 0]));
        let d3 = datum("D3");
        assert_eq!(d3.simple_roots()[2], LinearForm::new(vec![1, 1, 0]));
    }

    #[test]
    fn positive_roots_decompose_in_simples() {
        for name in ["A3", "B3", "C3", "D3", "C4"] {
            let d = datum(name);
            for alpha in d.positive_roots() {
                // Greedy peeling: subtract simple roots while staying positive.
                let mut rest = alpha.clone();
                let mut steps = 0;
                while !rest.is_zero() && steps < 100 {
                    let prev = rest.clone();
                    for s in d.simple_roots() {
                        let cand = rest.sub_multiple(1, s);
                        if cand.is_zero() || d.is_positive_root(&cand) {
                            rest = cand;
                            break;
                        }
                    }
                    assert_ne!(prev, rest, "stuck while peeling {alpha} in {name}");
                    steps += 1;
                }
                assert!(rest.is_zero());
            }
        }
    }

    #[test]
    fn paper_lengths_in_c4() {
        let c4 = datum("C4");
        assert_eq!(c4.parse_element("3,-1,4,2").unwrap().length(), 4);
        assert_eq!(c4.parse_element("-2,-3,4,1").unwrap().length(), 7);
        assert_eq!(c4.parse_element("-2,-1,3,4").unwrap().length(), 3);
        assert_eq!(c4.identity().length(), 0);
    }

    #[test]
    fn length_formula_agrees_with_root_count() {
        for name in ["A3", "B2", "C3", "D3"] {
            let d = datum(name);
            for w in d.enumerate() {
                assert_eq!(w.length(), w.length_by_roots(), "{name} {w}");
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let a3 = datum("A3");
        let m = |a: &str, b: &str| {
            a3.parse_element(a)
                .unwrap()
                .multiply(&a3.parse_element(b).unwrap())
                .unwrap()
                .name()
        };
        assert_eq!(m("2134", "3412"), "3421");
        assert_eq!(m("1243", "3412"), "4312");
        let w = a3.parse_element("3142").unwrap();
        assert_eq!(w.multiply(&a3.identity()).unwrap(), w);
        assert_eq!(
            w.multiply(&w.inverse()).unwrap(),
            a3.identity()
        );
    }

    #[test]
    fn reflection_windows() {
        let a3 = datum("A3");
        let alpha12 = LinearForm::new(vec![-1, 1, 0, 0]);
        assert_eq!(a3.reflection(&alpha12).unwrap().name(), "2134");
        let t4_minus_t1 = LinearForm::new(vec![-1, 0, 0, 1]);
        assert_eq!(a3.reflection(&t4_minus_t1).unwrap().name(), "4231");
        let c2 = datum("C2");
        let two_t1 = LinearForm::new(vec![2, 0]);
        assert_eq!(c2.reflection(&two_t1).unwrap().window(), &[-1, 2]);
        // reflections are involutions and permute the other positive roots
        for d in [datum("A3"), datum("C2")] {
            for alpha in d.positive_roots() {
                let s = d.reflection(alpha).unwrap();
                assert!(s.multiply(&s).unwrap().is_identity());
                for beta in d.positive_roots() {
                    assert!(d.is_root(&s.act_root(beta)));
                }
            }
        }
        assert!(a3.reflection(&LinearForm::new(vec![1, 1, 0, 0])).is_err());
    }

    #[test]
    fn longest_elements() {
        let a3 = datum("A3");
        let w0 = a3.longest_element();
        assert_eq!(w0.name(), "4321");
        assert_eq!(w0.length(), 6);
        let c2 = datum("C2");
        let w0 = c2.longest_element();
        assert_eq!(w0.window(), &[-1, -2]);
        assert_eq!(w0.length(), 4);
    }

    #[test]
    fn enumerate_c4_has_384_elements() {
        assert_eq!(datum("C4").enumerate().len(), 384);
        assert_eq!(datum("D3").enumerate().len(), 24);
    }

    #[test]
    fn canonical_words_are_reduced_and_lex_minimal() {
        for name in ["A3", "C2", "C3"] {
            let d = datum(name);
            let sys = WeylSystem::full(&d);
            for w in sys.elements() {
                let word = sys.canonical_word(w);
                assert_eq!(word.len(), w.length(), "{name} {w}");
                assert_eq!(&sys.product_of_word(word), w);
                if w.length() <= 4 {
                    let all = sys.all_reduced_words(w);
                    assert!(all.iter().all(|x| x.len() == w.length()));
                    assert_eq!(word, all.iter().min().unwrap().as_slice());
                }
            }
        }
    }

    #[test]
    fn random_c4_words_multiply_back() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let d = datum("C4");
        let sys = WeylSystem::full(&d);
        let all = d.enumerate();
        for _ in 0..1000 {
            let w = all.choose(&mut rng).unwrap();
            let word = sys.canonical_word(w);
            assert_eq!(word.len(), w.length());
            assert_eq!(&sys.product_of_word(word), w);
        }
    }

    #[test]
    fn simple_reflections_shift_length_by_one() {
        for name in ["A3", "C2"] {
            let d = datum(name);
            for w in d.enumerate() {
                for i in 0..d.simple_roots().len() {
                    let ws = w.multiply(&d.simple_reflection(i)).unwrap();
                    let diff = ws.length() as i64 - w.length() as i64;
                    assert!(diff == 1 || diff == -1);
                }
            }
        }
    }

    /// Independent Bruhat oracle: transitive closure of coverings, where
    /// `v ⋖ w` when some reflection drops the length by exactly one.
    fn bruhat_oracle(d: &RootDatum) -> BTreeMap<(Window, Window), bool> {
        let elements = d.enumerate();
        let mut leq: BTreeMap<(Window, Window), bool> = BTreeMap::new();
        for v in &elements {
            for w in &elements {
                leq.insert((v.window().to_vec(), w.window().to_vec()), v == w);
            }
        }
        // cover relations
        let mut changed = true;
        for w in &elements {
            for alpha in d.positive_roots() {
                let s = d.reflection(alpha).unwrap();
                let sw = s.multiply(w).unwrap();
                if sw.length() + 1 == w.length() {
                    leq.insert((sw.window().to_vec(), w.window().to_vec()), true);
                }
            }
        }
        while changed {
            changed = false;
            for v in &elements {
                for u in &elements {
                    if !leq[&(v.window().to_vec(), u.window().to_vec())] {
                        continue;
                    }
                    for w in &elements {
                        if leq[&(u.window().to_vec(), w.window().to_vec())]
                            && !leq[&(v.window().to_vec(), w.window().to_vec())]
                        {
                            leq.insert((v.window().to_vec(), w.window().to_vec()), true);
                            changed = true;
                        }
                    }
                }
            }
        }
        leq
    }

    #[test]
    fn bruhat_order_matches_cover_closure_oracle() {
        for name in ["A3", "C2"] {
            let d = datum(name);
            let sys = WeylSystem::full(&d);
            let oracle = bruhat_oracle(&d);
            for v in d.enumerate() {
                for w in d.enumerate() {
                    assert_eq!(
                        sys.bruhat_leq(&v, &w),
                        oracle[&(v.window().to_vec(), w.window().to_vec())],
                        "{name}: {v} vs {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let a3 = datum("A3");
        let sys = WeylSystem::full(&a3);
        let e = a3.identity();
        for w in a3.enumerate() {
            assert!(sys.bruhat_leq(&e, &w));
        }
        let w3412 = a3.parse_element("3412").unwrap();
        let w2143 = a3.parse_element("2143").unwrap();
        assert!(!sys.bruhat_leq(&w3412, &w2143));
        assert!(sys.bruhat_leq(&w2143, &w3412));
    }

    #[test]
    fn poincare_counts_for_a3() {
        let d = datum("A3");
        let mut counts = vec![0usize; 7];
        for w in d.enumerate() {
            counts[w.length()] += 1;
        }
        assert_eq!(counts, vec![1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn window_validation_messages() {
        let a3 = datum("A3");
        assert!(a3.parse_element("2143").is_ok());
        assert!(a3.parse_element("21,4,3").is_err());
        assert!(a3.parse_element("2,1,4,-3").is_err());
        assert!(a3.parse_element("1123").is_err());
        assert!(a3.parse_element("125").is_err());
        let c4 = datum("C4");
        assert_eq!(
            c4.parse_element("2b1b34").unwrap().window(),
            &[-2, -1, 3, 4]
        );
        assert_eq!(
            c4.parse_element("-2,-1,3,4").unwrap().window(),
            &[-2, -1, 3, 4]
        );
        let d3 = datum("D3");
        assert!(d3.parse_element("-1,2,3").is_err());
        assert!(d3.parse_element("-1,-2,3").is_ok());
    }
}
