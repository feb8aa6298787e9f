//! Q-tilde functions in the generators `c_i`: one row, two rows, and the
//! Pfaffian of two-row values for longer partitions. Schur Q-functions are
//! obtained by substituting the Chern series of `E - E*`.

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::symfunc::{ChernSeries, SymPoly};

/// Skew-symmetric matrix stored by its strict upper triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix<T> {
    size: usize,
    // row-major strict upper triangle
    upper: Vec<T>,
}

impl<T> SkewMatrix<T> {
    /// Builds the matrix from its entries `m(p, q)` for `p < q` (0-based).
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(size * size.saturating_sub(1) / 2);
        for p in 0..size {
            for q in p + 1..size {
                upper.push(f(p, q));
            }
        }
        SkewMatrix { size, upper }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `(p, q)` for `p < q`.
    pub fn upper(&self, p: usize, q: usize) -> &T {
        assert!(p < q && q < self.size, "({p}, {q}) is not above the diagonal");
        // rows 0..p contribute (size-1) + (size-2) + ... + (size-p) entries
        let offset = p * (2 * self.size - p - 1) / 2;
        &self.upper[offset + (q - p - 1)]
    }
}

/// Pfaffian by expansion along the first row,
/// `Pf(M) = sum_j (-1)^j m_{1,j} Pf(M without rows/cols 1, j)`,
/// with the minors memoized by their remaining index set.
pub fn pfaffian<T>(m: &SkewMatrix<T>) -> Result<T>
where
    T: Clone + Zero + One,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    if !m.size.is_multiple_of(2) {
        return Err(Error::invalid(format!("Pfaffian of odd size {}", m.size)));
    }
    if m.size > 32 {
        return Err(Error::invalid(format!("matrix of size {} is too large", m.size)));
    }
    let full: u64 = (1u64 << m.size) - 1;
    let mut memo = HashMap::new();
    Ok(pf_rec(m, full, &mut memo))
}

fn pf_rec<T>(m: &SkewMatrix<T>, set: u64, memo: &mut HashMap<u64, T>) -> T
where
    T: Clone + Zero + One,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    if set == 0 {
        return T::one();
    }
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let first = set.trailing_zeros() as usize;
    let rest = set & !(1u64 << first);
    let mut acc = T::zero();
    // position of j among the remaining indices; the first one sits at 1
    let mut position = 1;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        position += 1;
        let entry = m.upper(first, j);
        if entry.is_zero() {
            continue;
        }
        let minor = pf_rec(m, rest & !(1u64 << j), memo);
        let term = entry * &minor;
        acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    memo.insert(set, acc.clone());
    acc
}

static PAIR_CACHE: LazyLock<RwLock<HashMap<(usize, usize), SymPoly>>> =
    LazyLock::new(Default::default);
static QTILDE_CACHE: LazyLock<RwLock<HashMap<Partition, SymPoly>>> =
    LazyLock::new(Default::default);

/// `Q~_i = e_i`, i.e. the generator `c_i` (and `1` for `i = 0`).
pub fn qtilde_one(i: usize) -> SymPoly {
    SymPoly::gen(i)
}

/// `Q~_{i,j} = Q~_i Q~_j + 2 sum_{p=1..j} (-1)^p Q~_{i+p} Q~_{j-p}` for `i >= j`.
pub fn qtilde_pair(i: usize, j: usize) -> Result<SymPoly> {
    if i < j {
        return Err(Error::invalid(format!("Q~_{{{i},{j}}} needs i >= j")));
    }
    if let Some(p) = PAIR_CACHE.read().unwrap().get(&(i, j)) {
        return Ok(p.clone());
    }
    let mut p = &qtilde_one(i) * &qtilde_one(j);
    let two = BigInt::from(2);
    for k in 1..=j {
        let term = (&qtilde_one(i + k) * &qtilde_one(j - k)).scale(&two);
        if k % 2 == 1 {
            p -= &term;
        } else {
            p += &term;
        }
    }
    PAIR_CACHE.write().unwrap().insert((i, j), p.clone());
    Ok(p)
}

/// The skew matrix `m_{p,q} = Q~_{i_p, i_q}` for the parts of `i`, padded with
/// a trailing zero part when the length is odd.
pub fn qtilde_matrix(i: &Partition) -> SkewMatrix<SymPoly> {
    let mut parts = i.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    SkewMatrix::from_fn(parts.len(), |p, q| {
        qtilde_pair(parts[p], parts[q]).expect("parts are weakly decreasing")
    })
}

/// `Q~_I` for an arbitrary (not necessarily strict) partition.
pub fn qtilde(i: &Partition) -> SymPoly {
    match i.parts() {
        [] => return SymPoly::one(),
        [a] => return qtilde_one(*a),
        [a, b] => return qtilde_pair(*a, *b).expect("parts are weakly decreasing"),
        _ => {}
    }
    if let Some(p) = QTILDE_CACHE.read().unwrap().get(i) {
        return p.clone();
    }
    let p = pfaffian(&qtilde_matrix(i)).expect("padded matrix has even size");
    QTILDE_CACHE.write().unwrap().insert(i.clone(), p.clone());
    p
}

/// Schur `Q_I`, obtained as `Q~_I(E - E*)`.
pub fn schur_q(i: &Partition) -> SymPoly {
    qtilde(i)
        .subst(&ChernSeries::chern_difference(i.weight()))
        .expect("series truncated at the weight of the partition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::XPoly;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn c(i: usize) -> SymPoly {
        SymPoly::gen(i)
    }

    fn k(v: i64) -> SymPoly {
        SymPoly::constant(v)
    }

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn one_row() {
        assert_eq!(qtilde_one(1), c(1));
        assert_eq!(qtilde_one(0), SymPoly::one());
        assert_eq!(qtilde_one(4), c(4));
    }

    #[test]
    fn two_rows() {
        assert_eq!(qtilde_pair(1, 1).unwrap(), &c(1).pow(2) - &(&k(2) * &c(2)));
        let x = XPoly::var(2, 1);
        let y = XPoly::var(2, 2);
        assert_eq!(qtilde_pair(1, 1).unwrap().evaluate(2), &(&x * &x) + &(&y * &y));
        assert_eq!(qtilde_pair(2, 1).unwrap(), &(&c(2) * &c(1)) - &(&k(2) * &c(3)));
        for i in 0..6 {
            assert_eq!(qtilde_pair(i, 0).unwrap(), c(i));
        }
        assert!(matches!(qtilde_pair(1, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn pfaffian_small_cases() {
        let m = SkewMatrix::from_fn(2, |_, _| BigInt::from(7));
        assert_eq!(pfaffian(&m).unwrap(), BigInt::from(7));
        let empty: SkewMatrix<BigInt> = SkewMatrix::from_fn(0, |_, _| unreachable!());
        assert_eq!(pfaffian(&empty).unwrap(), BigInt::one());
        let odd = SkewMatrix::from_fn(3, |_, _| BigInt::one());
        assert!(matches!(pfaffian(&odd), Err(Error::InvalidArgument(_))));

        // m12 m34 - m13 m24 + m14 m23 with distinct generator entries
        let gens = [[0, 1, 2, 3], [0, 0, 4, 5], [0, 0, 0, 6]];
        let m = SkewMatrix::from_fn(4, |a, b| c(gens[a][b]));
        let expected = &(&(&c(1) * &c(6)) - &(&c(2) * &c(5))) + &(&c(3) * &c(4));
        assert_eq!(pfaffian(&m).unwrap(), expected);
    }

    #[test]
    fn upper_indexing() {
        let m = SkewMatrix::from_fn(5, |a, b| (a, b));
        for a in 0..5 {
            for b in a + 1..5 {
                assert_eq!(*m.upper(a, b), (a, b));
            }
        }
    }

    #[test]
    fn longer_partitions() {
        assert_eq!(qtilde(&p(&[2, 1])), &(&c(2) * &c(1)) - &(&k(2) * &c(3)));
        assert_eq!(qtilde(&p(&[1, 1, 1])), &c(1).pow(3) - &(&k(2) * &(&c(2) * &c(1))));
        assert_eq!(qtilde(&p(&[])), SymPoly::one());
    }

    #[test]
    fn schur_q_examples() {
        assert_eq!(schur_q(&p(&[1])), &k(2) * &c(1));
        for i in 1..=5 {
            assert!(schur_q(&p(&[i, i])).is_zero(), "Q_({i},{i})");
        }
        // 4(c1 c2 - c3); at two variables this is 4 x1 x2 (x1 + x2)
        let q21 = schur_q(&p(&[2, 1]));
        assert_eq!(q21, &k(4) * &(&(&c(2) * &c(1)) - &c(3)));
        let mut expected = XPoly::zero(2);
        expected.add_term(vec![2, 1], BigInt::from(4));
        expected.add_term(vec![1, 2], BigInt::from(4));
        assert_eq!(q21.evaluate(2), expected);
    }

    fn leibniz_det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        let mut total = BigInt::zero();
        for perm in (0..n).permutations(n) {
            let mut inversions = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if perm[a] > perm[b] {
                        inversions += 1;
                    }
                }
            }
            let prod = (0..n).fold(BigInt::one(), |acc, r| acc * m[r][perm[r]]);
            if inversions % 2 == 0 {
                total += prod;
            } else {
                total -= prod;
            }
        }
        total
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn pfaffian_squares_to_determinant(half in 1usize..=3, seed in proptest::collection::vec(-4i64..=4, 15)) {
            let size = 2 * half;
            let m = SkewMatrix::from_fn(size, |a, b| BigInt::from(seed[(a * size + b) % seed.len()]));
            let dense: Vec<Vec<i64>> = (0..size)
                .map(|a| (0..size).map(|b| match a.cmp(&b) {
                    std::cmp::Ordering::Less => seed[(a * size + b) % seed.len()],
                    std::cmp::Ordering::Greater => -seed[(b * size + a) % seed.len()],
                    std::cmp::Ordering::Equal => 0,
                }).collect())
                .collect();
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, leibniz_det(&dense));
        }
    }

    #[test]
    fn homogeneous_of_partition_weight() {
        for d in 0..=8 {
            for i in crate::partitions::enumerate_partitions(d, None, false) {
                let q = qtilde(&i);
                assert!(q.is_homogeneous(), "{i:?}");
                assert_eq!(q.degree(), Some(d), "{i:?}");
            }
        }
    }

    #[test]
    fn zero_part_position_only_changes_sign() {
        // Prepending the zero part moves it across h-1 rows, an odd number
        // when h is even, so the Pfaffian changes sign. The matrix is no
        // longer built from weakly decreasing parts, hence Q~_{0,i} = -Q~_{i,0}.
        for d in 1..=7 {
            for i in crate::partitions::enumerate_partitions(d, None, false) {
                if i.len() % 2 == 0 {
                    continue;
                }
                let mut parts = vec![0];
                parts.extend_from_slice(i.parts());
                let m = SkewMatrix::from_fn(parts.len(), |a, b| {
                    let (x, y) = (parts[a], parts[b]);
                    if x >= y {
                        qtilde_pair(x, y).unwrap()
                    } else {
                        -qtilde_pair(y, x).unwrap()
                    }
                });
                let prepended = pfaffian(&m).unwrap();
                assert_eq!(prepended, -qtilde(&i), "{i:?}");
            }
        }
    }
}
