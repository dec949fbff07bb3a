use std::fmt;
use std::ops::{Add, Mul};

/// A polynomial in F2[τ], stored as a bitset over τ-degrees.
///
/// Bit `i` of the limb vector is the coefficient of τ^i. The limb vector never
/// ends in a zero limb, so the zero polynomial is the empty vector and equality
/// is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TauPoly {
    limbs: Vec<u64>,
}

impl TauPoly {
    pub fn zero() -> Self {
        TauPoly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::tau_pow(0)
    }

    /// τ^k.
    pub fn tau_pow(k: u32) -> Self {
        let mut limbs = vec![0u64; (k / 64) as usize + 1];
        limbs[(k / 64) as usize] = 1u64 << (k % 64);
        TauPoly { limbs }
    }

    /// Builds a polynomial from the low bits of `bits` (bit i = coefficient of τ^i).
    pub fn from_bits(bits: u64) -> Self {
        let mut p = TauPoly { limbs: vec![bits] };
        p.trim();
        p
    }

    /// Builds a polynomial from a list of exponents; repeated exponents cancel.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut p = TauPoly::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    fn toggle(&mut self, e: u32) {
        let i = (e / 64) as usize;
        if self.limbs.len() <= i {
            self.limbs.resize(i + 1, 0);
        }
        self.limbs[i] ^= 1u64 << (e % 64);
        self.trim();
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Units of F2[τ] are exactly the nonzero constants, i.e. 1.
    pub fn is_unit(&self) -> bool {
        self.is_one()
    }

    pub fn degree(&self) -> Option<u32> {
        let last = *self.limbs.last()?;
        Some((self.limbs.len() as u32 - 1) * 64 + 63 - last.leading_zeros())
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        for (i, &l) in self.limbs.iter().enumerate() {
            if l != 0 {
                return Some(i as u32 * 64 + l.trailing_zeros());
            }
        }
        None
    }

    pub fn coeff(&self, e: u32) -> bool {
        let i = (e / 64) as usize;
        i < self.limbs.len() && (self.limbs[i] >> (e % 64)) & 1 == 1
    }

    /// Returns `Some(k)` when the polynomial is exactly τ^k.
    pub fn monomial_exponent(&self) -> Option<u32> {
        let v = self.valuation()?;
        (self.degree() == Some(v)).then_some(v)
    }

    pub fn exponents(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &l) in self.limbs.iter().enumerate() {
            let mut bits = l;
            while bits != 0 {
                let b = bits.trailing_zeros();
                out.push(i as u32 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Value after substituting τ ↦ 0.
    pub fn eval_at_zero(&self) -> bool {
        self.coeff(0)
    }

    /// Value after substituting τ ↦ 1.
    pub fn eval_at_one(&self) -> bool {
        self.limbs.iter().map(|l| l.count_ones()).sum::<u32>() % 2 == 1
    }

    fn shifted(&self, s: u32) -> TauPoly {
        if self.is_zero() {
            return TauPoly::zero();
        }
        let (w, b) = ((s / 64) as usize, s % 64);
        let mut limbs = vec![0u64; self.limbs.len() + w + 1];
        for (i, &l) in self.limbs.iter().enumerate() {
            limbs[i + w] ^= l << b;
            if b != 0 {
                limbs[i + w + 1] ^= l >> (64 - b);
            }
        }
        let mut p = TauPoly { limbs };
        p.trim();
        p
    }

    fn add_assign_ref(&mut self, other: &TauPoly) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
        self.trim();
    }

    /// Euclidean division: returns (q, r) with self = q·d + r and deg r < deg d.
    ///
    /// Panics if `d` is zero.
    pub fn div_rem(&self, d: &TauPoly) -> (TauPoly, TauPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut q = TauPoly::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let s = rd - dd;
            q.toggle(s);
            r.add_assign_ref(&d.shifted(s));
        }
        (q, r)
    }

    /// True when `d` divides `self` (0 divides only 0).
    pub fn divisible_by(&self, d: &TauPoly) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        self.div_rem(d).1.is_zero()
    }

    /// Reduction modulo τ^k, i.e. dropping all terms of degree ≥ k.
    pub fn truncate(&self, k: u32) -> TauPoly {
        let mut p = TauPoly::zero();
        for e in self.exponents() {
            if e < k {
                p.toggle(e);
            }
        }
        p
    }
}

/// Greatest common divisor by the Euclidean algorithm; gcd(0, 0) = 0.
///
/// Over F2 every nonzero polynomial is already monic, so the result is unique.
pub fn poly_gcd(a: &TauPoly, b: &TauPoly) -> TauPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.div_rem(&b).1;
        a = b;
        b = r;
    }
    a
}

impl Add for &TauPoly {
    type Output = TauPoly;
    fn add(self, rhs: &TauPoly) -> TauPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for TauPoly {
    type Output = TauPoly;
    fn add(mut self, rhs: TauPoly) -> TauPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl std::ops::AddAssign<&TauPoly> for TauPoly {
    fn add_assign(&mut self, rhs: &TauPoly) {
        self.add_assign_ref(rhs);
    }
}

impl Mul for &TauPoly {
    type Output = TauPoly;
    fn mul(self, rhs: &TauPoly) -> TauPoly {
        let mut out = TauPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        // Schoolbook carry-less product; operands here are tiny.
        for e in rhs.exponents() {
            out.add_assign_ref(&self.shifted(e));
        }
        out
    }
}

impl Mul for TauPoly {
    type Output = TauPoly;
    fn mul(self, rhs: TauPoly) -> TauPoly {
        &self * &rhs
    }
}

impl fmt::Display for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut exps = self.exponents();
        exps.reverse();
        let terms: Vec<String> = exps
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "τ".to_string(),
                _ => format!("τ^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TauPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: u32) -> TauPoly {
        TauPoly::tau_pow(k)
    }

    #[test]
    fn gcd_of_monomials() {
        assert_eq!(poly_gcd(&t(2), &t(3)), t(2));
    }

    #[test]
    fn gcd_by_euclid() {
        let a = &t(2) + &t(1);
        assert_eq!(poly_gcd(&a, &t(1)), t(1));
        assert_eq!(poly_gcd(&TauPoly::zero(), &a), a);
        assert_eq!(
            poly_gcd(&TauPoly::zero(), &TauPoly::zero()),
            TauPoly::zero()
        );
    }

    #[test]
    fn gcd_of_coprime_factors() {
        // (τ+1)^2 and τ(τ+1) share τ+1
        let a = TauPoly::from_bits(0b101);
        let b = TauPoly::from_bits(0b110);
        assert_eq!(poly_gcd(&a, &b), TauPoly::from_bits(0b11));
    }

    #[test]
    fn division_identity() {
        let a = TauPoly::from_bits(0b1101_0111);
        let d = TauPoly::from_bits(0b1011);
        let (q, r) = a.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap_or(0) < d.degree().unwrap());
    }

    #[test]
    fn wide_products_cross_limbs() {
        let a = t(63) + t(0);
        let b = t(70) + t(1);
        let p = &a * &b;
        assert_eq!(p.exponents(), vec![1, 64, 70, 133]);
        assert_eq!(p.degree(), Some(133));
        assert_eq!(p.div_rem(&a), (b, TauPoly::zero()));
    }

    #[test]
    fn evaluation_and_monomials() {
        let p = TauPoly::from_bits(0b111);
        assert!(p.eval_at_zero());
        assert!(p.eval_at_one());
        assert!(!t(3).eval_at_zero());
        assert_eq!(t(3).monomial_exponent(), Some(3));
        assert_eq!(p.monomial_exponent(), None);
        assert_eq!(p.truncate(2), TauPoly::from_bits(0b11));
        assert_eq!(p.to_string(), "τ^2+τ+1");
    }
}
