//! Exponent vectors shared by parameter polynomials and operator polynomials.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A monomial `x_1^a_1 * ... * x_n^a_n`, stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize, exponent: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exponent;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn set_exponent(&mut self, index: usize, e: u32) {
        self.0[index] = e;
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `true` when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` if the division is exact.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(self.0.iter()).map(|(b, a)| b - a).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of the variables that occur with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Copy of `self` with the exponent of `index` set to zero.
    pub fn without(&self, index: usize) -> Monomial {
        let mut m = self.clone();
        m.0[index] = 0;
        m
    }

    /// Remaps exponents into a monomial over `nvars` variables; `map[i]` is the new
    /// index of old variable `i`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Monomial {
        let mut m = Self::one(nvars);
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                m.0[map[i]] += e;
            }
        }
        m
    }

    /// Concatenates two exponent vectors (variables of `self` first).
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    /// Splits into the first `k` variables and the rest.
    pub fn split_at(&self, k: usize) -> (Monomial, Monomial) {
        (
            Monomial(SmallVec::from_slice(&self.0[..k])),
            Monomial(SmallVec::from_slice(&self.0[k..])),
        )
    }

    /// Renders the monomial with the given variable names; `1` is rendered as `"1"`.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Degree reverse lexicographic comparison (`x_1 > x_2 > ... > x_n`).
pub fn cmp_degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.nvars()).rev() {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => continue,
            // a smaller exponent in the last differing variable makes the monomial larger
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Lexicographic comparison (`x_1 > x_2 > ... > x_n`).
pub fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
    a.0.as_slice().cmp(b.0.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_basic() {
        let x = Monomial::from_exponents(&[1, 0, 0]);
        let y = Monomial::from_exponents(&[0, 1, 0]);
        let z = Monomial::from_exponents(&[0, 0, 1]);
        assert_eq!(cmp_degrevlex(&x, &y), Ordering::Greater);
        assert_eq!(cmp_degrevlex(&y, &z), Ordering::Greater);
        // x*z < y^2 in degrevlex
        let xz = x.mul(&z);
        let yy = y.mul(&y);
        assert_eq!(cmp_degrevlex(&xz, &yy), Ordering::Less);
        assert_eq!(cmp_lex(&xz, &yy), Ordering::Greater);
    }

    #[test]
    fn divisibility() {
        let a = Monomial::from_exponents(&[2, 1]);
        let b = Monomial::from_exponents(&[3, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b), Some(Monomial::from_exponents(&[1, 0])));
        assert_eq!(b.quotient_of(&a), None);
        assert_eq!(a.lcm(&Monomial::from_exponents(&[0, 4])), Monomial::from_exponents(&[2, 4]));
    }
}
