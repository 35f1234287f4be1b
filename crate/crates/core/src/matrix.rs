//! Square nonnegative integer matrices with arbitrary precision, indexed by
//! label (row `i`, column `j` both 1-based in the public API).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::interval::Label;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    n: usize,
    // row-major
    entries: Vec<BigUint>,
}

impl TransitionMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![BigUint::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigUint::one();
        }
        m
    }

    /// `I + e_w e_l^T`: old lengths = E · new lengths for a step where `w`
    /// beats `l`.
    pub fn elementary(n: usize, winner: Label, loser: Label) -> Self {
        let mut m = Self::identity(n);
        m.entries[(winner - 1) * n + (loser - 1)] += 1u32;
        m
    }

    pub fn from_rows<T: Into<BigUint> + Clone>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: Label, col: Label) -> &BigUint {
        &self.entries[(row - 1) * self.n + (col - 1)]
    }

    pub fn set(&mut self, row: Label, col: Label, value: BigUint) {
        self.entries[(row - 1) * self.n + (col - 1)] = value;
    }

    pub fn rows(&self) -> Vec<Vec<BigUint>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let entries: Vec<BigUint> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let mut acc = BigUint::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect();
        Self { n, entries }
    }

    pub fn pow(&self, mut exp: BigUint) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while !exp.is_zero() {
            if exp.bit(0) {
                acc = acc.mul(&base);
            }
            exp >>= 1u32;
            if !exp.is_zero() {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// In-place `self = self · (I + e_w e_l^T)^k`, i.e. column `l` gains
    /// `k` times column `w`. Requires `w != l`.
    pub fn right_mul_elementary_power(&mut self, winner: Label, loser: Label, k: &BigUint) {
        debug_assert_ne!(winner, loser);
        let n = self.n;
        for i in 0..n {
            let add = &self.entries[i * n + (winner - 1)] * k;
            self.entries[i * n + (loser - 1)] += add;
        }
    }

    pub fn apply_rational(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self.entries[i * self.n + j];
                    if !a.is_zero() {
                        acc += x * Rational::from_integer(BigInt::from(a.clone()));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn apply_int(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = BigUint::zero();
                for (j, x) in v.iter().enumerate() {
                    acc += &self.entries[i * self.n + j] * x;
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, col: Label) -> Vec<BigUint> {
        (0..self.n).map(|i| self.entries[i * self.n + (col - 1)].clone()).collect()
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        (1..=self.n).map(|j| self.column(j).iter().sum()).collect()
    }

    pub fn entry_sum(&self) -> BigUint {
        self.entries.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|e| !e.is_zero())
    }

    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.bits()).max().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.entries[i * n + j].clone());
            }
        }
        Self { n, entries }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self
            .entries
            .chunks(n)
            .map(|r| r.iter().map(|e| BigInt::from(e.clone())).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Permutation matrix with a 1 at `(sigma[k] - 1, k)`, so that
    /// `P e_k = e_{sigma(k)}`.
    pub fn permutation(sigma: &[Label]) -> Self {
        let n = sigma.len();
        let mut m = Self::zeros(n);
        for (k, &s) in sigma.iter().enumerate() {
            m.entries[(s - 1) * n + k] = BigUint::one();
        }
        m
    }
}

impl fmt::Debug for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TransitionMatrix({}x{})", self.n, self.n)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u32]]) -> TransitionMatrix {
        TransitionMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn elementary_has_one_extra_entry() {
        let e = TransitionMatrix::elementary(3, 1, 3);
        assert_eq!(e, m(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(e.determinant(), BigInt::one());
    }

    #[test]
    fn right_update_matches_product() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 4, 5]]);
        let k = BigUint::from(7u32);
        let mut fast = a.clone();
        fast.right_mul_elementary_power(2, 3, &k);
        let slow = a.mul(&TransitionMatrix::elementary(3, 2, 3).pow(k));
        assert_eq!(fast, slow);
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant(), BigInt::one());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
        assert_eq!(m(&[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]]).determinant(), BigInt::from(-30));
    }

    #[test]
    fn permutation_matrix_moves_basis_vectors() {
        let p = TransitionMatrix::permutation(&[2, 3, 1]);
        let e1 = vec![BigUint::one(), BigUint::zero(), BigUint::zero()];
        assert_eq!(p.apply_int(&e1), vec![BigUint::zero(), BigUint::one(), BigUint::zero()]);
    }

    #[test]
    fn column_sums_and_positivity() {
        let a = m(&[&[1, 2], &[3, 0]]);
        assert_eq!(a.column_sums(), vec![BigUint::from(4u32), BigUint::from(2u32)]);
        assert!(!a.is_positive());
        assert_eq!(a.entry_sum(), BigUint::from(6u32));
        assert_eq!(a.transpose().get(1, 2), &BigUint::from(3u32));
    }
}
