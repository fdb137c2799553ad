//! Free graded nilpotent Lie algebras on weighted generators, in the Lyndon basis.
//!
//! Basis elements are Lyndon words of weight at most the depth `N`, bracketed
//! along their standard factorization. Brackets of basis elements are rewritten
//! into the basis with antisymmetry and the Jacobi identity, memoized by word pair.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::lie::{NilpotentLieAlgebra, Vector};
use crate::morphism::GradedMorphism;
use crate::scalar::Scalar;

/// Largest free algebra dimension we agree to build.
pub const MAX_FREE_DIM: usize = 5000;

/// A word over the alphabet, as 0-based letter indices.
pub type Word = Vec<usize>;

/// Generators `a_1, ..., a_m` with positive weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAlphabet {
    weights: Vec<u32>,
}

impl WeightedAlphabet {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidAlphabet("at least one generator is required".into()));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidAlphabet(format!("generator {} has weight 0", i + 1)));
        }
        Ok(WeightedAlphabet { weights })
    }

    /// `m` generators of weight 1.
    pub fn uniform(m: usize) -> Result<Self> {
        Self::new(vec![1; m])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn word_weight(&self, word: &[usize]) -> u32 {
        word.iter().map(|&l| self.weights[l]).sum()
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    fn min_weight(&self) -> u32 {
        self.weights.iter().copied().min().unwrap_or(1)
    }
}

/// Printable form of a word: letters `a, b, ...` for small alphabets, `1.2.10` otherwise.
pub fn format_word(word: &[usize], alphabet_len: usize) -> String {
    if alphabet_len <= 26 {
        word.iter().map(|&l| (b'a' + l as u8) as char).collect()
    } else {
        word.iter().map(|l| (l + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Whether `word` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(word: &[usize]) -> bool {
    if word.is_empty() {
        return false;
    }
    (1..word.len()).all(|r| {
        let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
        word < rotated.as_slice()
    })
}

/// Lyndon words over `letters` letters of length at most `max_len`, in lexicographic order (Duval).
pub fn lyndon_words_up_to_length(letters: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if letters == 0 || max_len == 0 {
        return out;
    }
    let mut w: Word = vec![0];
    loop {
        out.push(w.clone());
        let period = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&(letters - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Lyndon words of weight at most `depth`, in lexicographic order.
pub fn lyndon_words(alphabet: &WeightedAlphabet, depth: u32) -> Vec<Word> {
    let max_len = (depth / alphabet.min_weight()) as usize;
    lyndon_words_up_to_length(alphabet.len(), max_len)
        .into_iter()
        .filter(|w| alphabet.word_weight(w) <= depth)
        .collect()
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(word: &[usize]) -> Option<(Word, Word)> {
    if word.len() < 2 {
        return None;
    }
    (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .map(|i| (word[..i].to_vec(), word[i..].to_vec()))
}

/// Dimension of each layer `1..=depth` of the free algebra, counted without building it.
///
/// Uses the weighted necklace count: with `a_k` the number of words of weight `k`,
/// `p_n = Σ_i ν_i a_{n-ν_i}` and `ℓ_n = (1/n) Σ_{d|n} μ(n/d) p_d`.
pub fn free_dimension(alphabet: &WeightedAlphabet, depth: u32) -> Vec<usize> {
    let n = depth as usize;
    let mut words = vec![0i128; n + 1];
    words[0] = 1;
    for k in 1..=n {
        let mut total = 0i128;
        for &w in alphabet.weights() {
            if (w as usize) <= k {
                total = total.saturating_add(words[k - w as usize]);
            }
        }
        words[k] = total;
    }
    let p: Vec<i128> = (0..=n)
        .map(|k| {
            alphabet
                .weights()
                .iter()
                .filter(|&&w| (w as usize) <= k && k > 0)
                .fold(0i128, |acc, &w| acc.saturating_add((w as i128).saturating_mul(words[k - w as usize])))
        })
        .collect();
    (1..=n)
        .map(|k| {
            let sum: i128 = (1..=k).filter(|d| k % d == 0).map(|d| mobius(k / d) * p[d]).sum();
            usize::try_from(sum / k as i128).unwrap_or(usize::MAX)
        })
        .collect()
}

fn mobius(mut n: usize) -> i128 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The free graded nilpotent Lie algebra of depth `N` with its Lyndon words.
#[derive(Clone, Debug)]
pub struct FreeAlgebra<S> {
    algebra: NilpotentLieAlgebra<S>,
    alphabet: WeightedAlphabet,
    depth: u32,
    words: Vec<Word>,
    generators: Vec<usize>,
}

impl<S: Scalar> FreeAlgebra<S> {
    pub fn algebra(&self) -> &NilpotentLieAlgebra<S> {
        &self.algebra
    }

    pub fn into_algebra(self) -> NilpotentLieAlgebra<S> {
        self.algebra
    }

    pub fn alphabet(&self) -> &WeightedAlphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Lyndon word of each basis element.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word_strings(&self) -> Vec<String> {
        self.words.iter().map(|w| format_word(w, self.alphabet.len())).collect()
    }

    /// 0-based basis index of the `k`-th generator.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }

    /// Standard factorization of basis element `i` as basis indices, `None` for generators.
    pub fn factor_indices(&self, i: usize) -> Option<(usize, usize)> {
        let (u, v) = standard_factorization(&self.words[i])?;
        Some((self.index_of(&u)?, self.index_of(&v)?))
    }
}

impl<S: Scalar> fmt::Display for FreeAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.algebra.label(), self.word_strings().join(", "))
    }
}

/// Builds the free graded nilpotent Lie algebra of depth `depth` on `alphabet`.
///
/// Basis: Lyndon words of weight `<= depth`, ordered by non-increasing weight and
/// lexicographically within a weight.
pub fn free_algebra<S: Scalar>(alphabet: &WeightedAlphabet, depth: u32) -> Result<FreeAlgebra<S>> {
    let max_weight = alphabet.max_weight();
    if depth < max_weight {
        return Err(Error::DepthTooSmall { depth, max_weight });
    }
    let dim: usize = free_dimension(alphabet, depth).iter().fold(0usize, |a, &b| a.saturating_add(b));
    if dim > MAX_FREE_DIM {
        return Err(Error::DimensionCap { dim, limit: MAX_FREE_DIM });
    }
    let mut words = lyndon_words(alphabet, depth);
    words.sort_by(|a, b| alphabet.word_weight(b).cmp(&alphabet.word_weight(a)).then_with(|| a.cmp(b)));
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let weights: Vec<u32> = words.iter().map(|w| alphabet.word_weight(w)).collect();
    let generators: Vec<usize> = (0..alphabet.len()).map(|l| index[&vec![l]]).collect();

    let mut rewriter = Rewriter::<S> { alphabet, depth, memo: HashMap::new() };
    let mut entries = Vec::new();
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            if weights[i] + weights[j] > depth {
                continue;
            }
            for (w, c) in rewriter.bracket(&words[i], &words[j]) {
                entries.push((i, j, index[&w], c));
            }
        }
    }
    let label = format!(
        "free(m={}, weights={:?}, N={})",
        alphabet.len(),
        alphabet.weights(),
        depth
    );
    let algebra = NilpotentLieAlgebra::new(label, weights, entries)?;
    Ok(FreeAlgebra { algebra, alphabet: alphabet.clone(), depth, words, generators })
}

type Combination<S> = BTreeMap<Word, S>;

struct Rewriter<'a, S> {
    alphabet: &'a WeightedAlphabet,
    depth: u32,
    memo: HashMap<(Word, Word), Combination<S>>,
}

impl<S: Scalar> Rewriter<'_, S> {
    /// `[P(u), P(v)]` in the Lyndon basis, truncated above the depth.
    fn bracket(&mut self, u: &[usize], v: &[usize]) -> Combination<S> {
        if u == v || self.alphabet.word_weight(u) + self.alphabet.word_weight(v) > self.depth {
            return Combination::new();
        }
        if u > v {
            return self.bracket(v, u).into_iter().map(|(w, c)| (w, -c)).collect();
        }
        let key = (u.to_vec(), v.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let result = match standard_factorization(u) {
            Some((u1, u2)) if u2.as_slice() < v => {
                // [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
                let mut acc = Combination::new();
                let inner = self.bracket(&u2, v);
                self.bracket_into(&mut acc, &u1, &inner, S::one());
                let inner = self.bracket(&u1, v);
                self.bracket_into(&mut acc, &u2, &inner, -S::one());
                acc
            }
            _ => {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                Combination::from([(w, S::one())])
            }
        };
        self.memo.insert(key, result.clone());
        result
    }

    fn bracket_into(&mut self, acc: &mut Combination<S>, left: &[usize], right: &Combination<S>, sign: S) {
        for (w, c) in right {
            for (x, d) in self.bracket(left, w) {
                let entry = acc.entry(x).or_insert_with(S::zero);
                *entry = entry.clone() + sign.clone() * c.clone() * d;
            }
        }
        acc.retain(|_, c| !c.is_zero());
    }
}

/// Extends generator images to the whole free algebra by bracketing in the target.
///
/// The image of generator `k` must be zero or homogeneous of the generator's weight.
pub fn morphism_from_generators<S: Scalar>(
    free: &FreeAlgebra<S>,
    target: &NilpotentLieAlgebra<S>,
    images: &[Vector<S>],
) -> Result<GradedMorphism<S>> {
    let m = free.alphabet.len();
    if images.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: images.len() });
    }
    for (k, img) in images.iter().enumerate() {
        if img.len() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), found: img.len() });
        }
        let weight = free.alphabet.weights()[k];
        if !img.is_zero() && target.homogeneous_weight(img) != Some(weight) {
            return Err(Error::GeneratorWeight { generator: k + 1, weight });
        }
    }
    let n = free.algebra.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| free.words[i].len());
    let mut columns: Vec<Option<Vector<S>>> = vec![None; n];
    for i in order {
        let image = match free.factor_indices(i) {
            None => images[free.words[i][0]].clone(),
            Some((a, b)) => {
                let left = columns[a].as_ref().expect("shorter words come first");
                let right = columns[b].as_ref().expect("shorter words come first");
                target.bracket(left, right)?
            }
        };
        columns[i] = Some(image);
    }
    let columns: Vec<Vector<S>> = columns.into_iter().map(|c| c.expect("all words visited")).collect();
    GradedMorphism::from_images(free.algebra.clone(), target.clone(), &columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    #[test]
    fn duval_enumeration() {
        let words = lyndon_words_up_to_length(2, 4);
        let printed: Vec<String> = words.iter().map(|w| format_word(w, 2)).collect();
        assert_eq!(printed, ["a", "aaab", "aab", "aabb", "ab", "abb", "abbb", "b"]);
        assert!(words.iter().all(|w| is_lyndon(w)));
    }

    #[test]
    fn factorizations() {
        assert_eq!(standard_factorization(&[0, 0, 1]), Some((vec![0], vec![0, 1])));
        assert_eq!(standard_factorization(&[0, 1, 1]), Some((vec![0, 1], vec![1])));
        assert_eq!(standard_factorization(&[0, 0, 1, 0, 1]), Some((vec![0, 0, 1], vec![0, 1])));
        assert_eq!(standard_factorization(&[0]), None);
    }

    #[test]
    fn small_free_algebras() {
        let two = WeightedAlphabet::uniform(2).unwrap();
        let f = free_algebra::<Rational>(&two, 2).unwrap();
        assert_eq!(f.word_strings(), ["ab", "a", "b"]);
        assert_eq!(f.algebra().basis_bracket(1, 2), &[(0, q(1))]);
        let one = WeightedAlphabet::uniform(1).unwrap();
        assert_eq!(free_algebra::<Rational>(&one, 5).unwrap().algebra().dim(), 1);
        let f5 = free_algebra::<Rational>(&two, 5).unwrap();
        assert_eq!(f5.algebra().layer_dims(), vec![2, 1, 2, 3, 6]);
        assert_eq!(free_dimension(&two, 5), vec![2, 1, 2, 3, 6]);
        let mixed = WeightedAlphabet::new(vec![1, 2]).unwrap();
        assert_eq!(free_dimension(&mixed, 3), vec![1, 1, 1]);
    }

    #[test]
    fn errors() {
        let w = WeightedAlphabet::new(vec![1, 3]).unwrap();
        assert!(matches!(free_algebra::<Rational>(&w, 2), Err(Error::DepthTooSmall { depth: 2, max_weight: 3 })));
        assert!(WeightedAlphabet::new(vec![]).is_err());
        assert!(WeightedAlphabet::new(vec![1, 0]).is_err());
        let big = WeightedAlphabet::uniform(4).unwrap();
        assert!(matches!(free_algebra::<Rational>(&big, 8), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn engel_as_quotient() {
        let two = WeightedAlphabet::uniform(2).unwrap();
        let f = free_algebra::<Rational>(&two, 3).unwrap();
        assert_eq!(f.word_strings(), ["aab", "abb", "ab", "a", "b"]);
        let engel = catalog::engel::<Rational>();
        let images = [Vector(vec![q(0), q(0), q(0), q(1)]), Vector(vec![q(0), q(0), q(1), q(0)])];
        let phi = morphism_from_generators(&f, &engel, &images).unwrap();
        let report = phi.check();
        assert!(report.is_valid() && report.surjective);
        let kernel = phi.kernel();
        assert_eq!(kernel.len(), 1);
        let abb = f.index_of(&[0, 1, 1]).unwrap();
        assert!(kernel[0].iter().enumerate().all(|(i, c)| (i == abb) != c.is_zero()));
        let basis = phi.induced_jh_basis().unwrap();
        assert_eq!(basis.indices, vec![1, 3, 4, 5]);

        let wrong = [Vector(vec![q(0), q(1), q(0), q(0)]), Vector(vec![q(0), q(0), q(1), q(0)])];
        assert!(matches!(morphism_from_generators(&f, &engel, &wrong), Err(Error::GeneratorWeight { generator: 1, .. })));
        let zero = [Vector::zeros(4), Vector::zeros(4)];
        let phi = morphism_from_generators(&f, &engel, &zero).unwrap();
        assert!(phi.check().is_valid() && !phi.check().surjective);
    }
}
