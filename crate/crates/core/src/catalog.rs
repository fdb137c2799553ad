//! Standard graded nilpotent Lie algebras, built from named bracket relations.

use crate::lie::NilpotentLieAlgebra;
use crate::linalg::Matrix;
use crate::morphism::GradedMorphism;
use crate::scalar::Scalar;

/// Builds an algebra from named basis vectors (in Jordan-Hölder order) and
/// relations `[a, b] = Σ c · name`. Panics on unknown names or invalid tables;
/// intended for the hard-wired algebras below and for tests.
pub fn from_relations<S: Scalar>(
    label: &str,
    basis: &[(&str, u32)],
    relations: &[(&str, &str, &[(i64, &str)])],
) -> NilpotentLieAlgebra<S> {
    let index = |name: &str| {
        basis.iter().position(|(n, _)| *n == name).unwrap_or_else(|| panic!("unknown basis element {name}"))
    };
    let mut entries = Vec::new();
    for (a, b, terms) in relations {
        let (i, j) = (index(a), index(b));
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        for (c, name) in terms.iter() {
            entries.push((lo, hi, index(name), S::from_i64(sign * c).expect("small integer")));
        }
    }
    let weights = basis.iter().map(|(_, w)| *w).collect();
    NilpotentLieAlgebra::new(label, weights, entries).unwrap_or_else(|e| panic!("{label}: {e}"))
}

/// Heisenberg algebra `H_{2n+1}` in the order `(Z, Y_1..Y_n, X_1..X_n)` with `[X_i, Y_i] = Z`.
pub fn heisenberg<S: Scalar>(n: usize) -> NilpotentLieAlgebra<S> {
    let mut entries = Vec::new();
    for i in 0..n {
        // [Y_i, X_i] = -Z
        entries.push((1 + i, 1 + n + i, 0, -S::one()));
    }
    let mut weights = vec![2];
    weights.extend(std::iter::repeat(1).take(2 * n));
    NilpotentLieAlgebra::new(format!("H{}", 2 * n + 1), weights, entries).expect("Heisenberg algebra is valid")
}

/// Which real basis of the complex Heisenberg algebra to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexHeisenbergOrder {
    /// `(iZ, Z, iY, Y, iX, X)`
    ImaginaryFirst,
    /// `(iZ, Z, Y, iY, X, iX)`
    RealFirst,
    /// `(iZ, Z, Y, iY, iX, X)`
    Mixed,
}

/// The complex Heisenberg algebra seen as a real algebra of dimension 6.
pub fn complex_heisenberg<S: Scalar>(order: ComplexHeisenbergOrder) -> NilpotentLieAlgebra<S> {
    let basis: &[(&str, u32)] = match order {
        ComplexHeisenbergOrder::ImaginaryFirst => &[("iZ", 2), ("Z", 2), ("iY", 1), ("Y", 1), ("iX", 1), ("X", 1)],
        ComplexHeisenbergOrder::RealFirst => &[("iZ", 2), ("Z", 2), ("Y", 1), ("iY", 1), ("X", 1), ("iX", 1)],
        ComplexHeisenbergOrder::Mixed => &[("iZ", 2), ("Z", 2), ("Y", 1), ("iY", 1), ("iX", 1), ("X", 1)],
    };
    let label = match order {
        ComplexHeisenbergOrder::ImaginaryFirst => "H3C-imaginary-first",
        ComplexHeisenbergOrder::RealFirst => "H3C-real-first",
        ComplexHeisenbergOrder::Mixed => "H3C-mixed",
    };
    from_relations(
        label,
        basis,
        &[
            ("X", "Y", &[(1, "Z")]),
            ("iX", "Y", &[(1, "iZ")]),
            ("X", "iY", &[(1, "iZ")]),
            ("iX", "iY", &[(-1, "Z")]),
        ],
    )
}

/// Engel algebra in the order `(V, Z, Y, X)` with `[X, Y] = Z`, `[X, Z] = V`.
pub fn engel<S: Scalar>() -> NilpotentLieAlgebra<S> {
    from_relations(
        "Engel",
        &[("V", 3), ("Z", 2), ("Y", 1), ("X", 1)],
        &[("X", "Y", &[(1, "Z")]), ("X", "Z", &[(1, "V")])],
    )
}

/// Model filiform algebra `L_n` in the order `(Z_n, ..., Z_1, Z_0, X)` with `[X, Z_k] = Z_{k+1}`.
///
/// `L_1` is the Heisenberg algebra and `L_2` the Engel algebra in the orders used above.
pub fn filiform<S: Scalar>(n: usize) -> NilpotentLieAlgebra<S> {
    let dim = n + 2;
    let z = |k: usize| n - k; // position of Z_k
    let x = dim - 1;
    let mut weights: Vec<u32> = (0..=n).rev().map(|k| k as u32 + 1).collect();
    weights.push(1);
    let entries = (0..n).map(|k| (z(k), x, z(k + 1), -S::one()));
    NilpotentLieAlgebra::new(format!("L{n}"), weights, entries).expect("filiform algebra is valid")
}

/// Quotient `L_{n+1} → L_n` by the center `span(Z_{n+1})`.
pub fn filiform_center_quotient<S: Scalar>(n: usize) -> GradedMorphism<S> {
    let source = filiform::<S>(n + 1);
    let target = filiform::<S>(n);
    let mut matrix = Matrix::zeros(target.dim(), source.dim());
    for i in 1..source.dim() {
        matrix.set(i - 1, i, S::one());
    }
    GradedMorphism::new(source, target, matrix).expect("dimensions match")
}

/// The six-dimensional algebra `L_{6,21}(-1)` in the order `(Z', Y', X', Z, Y, X)`.
///
/// Relations: `[X,Y]=Z, [X,Z]=X', [X,Y']=Z', [Z,Y]=Y', [X',Y]=Z'`.
pub fn l6_21<S: Scalar>() -> NilpotentLieAlgebra<S> {
    from_relations(
        "L6_21(-1)",
        &[("Z'", 4), ("Y'", 3), ("X'", 3), ("Z", 2), ("Y", 1), ("X", 1)],
        &[
            ("X", "Y", &[(1, "Z")]),
            ("X", "Z", &[(1, "X'")]),
            ("X", "Y'", &[(1, "Z'")]),
            ("Z", "Y", &[(1, "Y'")]),
            ("X'", "Y", &[(1, "Z'")]),
        ],
    )
}

/// Abelian algebra with the given (non-increasing) weights.
pub fn abelian<S: Scalar>(weights: Vec<u32>) -> NilpotentLieAlgebra<S> {
    let label = format!("abelian{}", weights.len());
    NilpotentLieAlgebra::abelian(label, weights).expect("abelian algebra is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn catalog_algebras_validate() {
        for a in [
            heisenberg::<Rational>(1),
            heisenberg::<Rational>(2),
            complex_heisenberg::<Rational>(ComplexHeisenbergOrder::ImaginaryFirst),
            complex_heisenberg::<Rational>(ComplexHeisenbergOrder::RealFirst),
            engel::<Rational>(),
            filiform::<Rational>(1),
            filiform::<Rational>(5),
            l6_21::<Rational>(),
        ] {
            assert!(a.validate().is_valid(), "{}", a.label());
        }
    }

    #[test]
    fn small_filiforms_are_heisenberg_and_engel() {
        assert_eq!(filiform::<Rational>(1).upper_entries(), heisenberg::<Rational>(1).upper_entries());
        assert_eq!(filiform::<Rational>(2).upper_entries(), engel::<Rational>().upper_entries());
    }
}
