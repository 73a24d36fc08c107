//! Table-driven arithmetic in F_{p^n} and the tower F_q ⊂ F_{q^2}.
//!
//! Elements are stored in the polynomial basis over F_p, packed base-p into a
//! `u32` (digit i is the coefficient of t^i). Every field carries a full
//! discrete-log table for its primitive element together with a Zech table
//! `log(1 + ξ^k)`, so multiplication, addition and power-residue tests are all
//! O(1) lookups.

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd_u, is_prime};
use crate::error::{Error, Result};

/// Largest field that will be built and enumerated.
pub const MAX_FIELD_ORDER: u64 = 1 << 21;

const NO_LOG: u32 = u32::MAX;

/// A field element in packed polynomial-basis form. Only meaningful together
/// with the [`Field`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn packed(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Presentation of a field, printed in every report so the exact ξ convention
/// can be reproduced elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub n: u32,
    /// Monic modulus, coefficients from t^0 up to t^n.
    pub modulus: Vec<u32>,
    /// Primitive element as a coefficient vector (t^0 first).
    pub xi: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    n: u32,
    order: u32,
    modulus: Vec<u32>,
    xi: Fe,
    exp: Vec<Fe>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

fn checked_order(p: u64, n: u32) -> Result<u32> {
    let too_large = || Error::FieldTooLarge {
        p,
        n,
        limit: MAX_FIELD_ORDER,
    };
    let q = p.checked_pow(n).ok_or_else(too_large)?;
    if q > MAX_FIELD_ORDER {
        return Err(too_large());
    }
    Ok(q as u32)
}

fn unpack(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(n as usize);
    for _ in 0..n {
        d.push(v % p);
        v /= p;
    }
    d
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Product of two packed elements modulo a monic modulus, without tables.
fn mul_slow(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let n = modulus.len() - 1;
    let (a, b) = (unpack(a, p, n as u32), unpack(b, p, n as u32));
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce t^k for k >= n using t^n = -(m_0 + ... + m_{n-1} t^{n-1})
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus[..n].iter().enumerate() {
            let sub = c * m as u64 % p as u64;
            prod[k - n + i] = (prod[k - n + i] + p as u64 - sub) % p as u64;
        }
    }
    let digits: Vec<u32> = prod[..n].iter().map(|&d| d as u32).collect();
    pack(&digits, p)
}

fn pow_slow(a: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_slow(acc, base, p, modulus);
        }
        base = mul_slow(base, base, p, modulus);
        e >>= 1;
    }
    acc
}

/// Remainder of `a` modulo monic `m` over F_p; both low-to-high.
fn rem_fp(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (c * mi) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=n/2.
pub(crate) fn is_irreducible_fp(modulus: &[u32], p: u32) -> bool {
    let n = modulus.len() as u32 - 1;
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg);
        for low in 0..count {
            let mut divisor = unpack(low as u32, p, deg);
            divisor.push(1);
            if rem_fp(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree n over F_p,
/// ordered by the packed value of its lower coefficients.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for low in 0..count {
        let mut m = unpack(low as u32, p, n);
        m.push(1);
        if is_irreducible_fp(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// F_{p^n} with the smallest monic irreducible modulus and the smallest
    /// primitive element.
    pub fn new(p: u32, n: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        checked_order(p as u64, n)?;
        let modulus = smallest_irreducible(p, n);
        Field::build(p, n, modulus, None)
    }

    /// Same as [`Field::new`] but with a caller-chosen modulus, e.g. to match
    /// an external table's ξ convention.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let n = modulus.len().saturating_sub(1) as u32;
        if n == 0 || modulus[n as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Parse {
                input: format!("{modulus:?}"),
                reason: "modulus must be monic with coefficients in 0..p".into(),
            });
        }
        checked_order(p as u64, n)?;
        if !is_irreducible_fp(&modulus, p) {
            return Err(Error::ReducibleModulus { p, n });
        }
        Field::build(p, n, modulus, None)
    }

    pub(crate) fn build(p: u32, n: u32, modulus: Vec<u32>, xi: Option<u32>) -> Result<Field> {
        let order = checked_order(p as u64, n)?;
        let units = order - 1;
        let primes: Vec<u64> = factorize(units as u64).into_iter().map(|(r, _)| r).collect();
        let is_primitive = |g: u32| {
            g != 0 && primes.iter().all(|&r| pow_slow(g, units as u64 / r, p, &modulus) != 1)
        };
        let xi = match xi {
            Some(g) => {
                if !is_primitive(g) {
                    return Err(Error::Hypothesis(format!(
                        "requested generator {g} is not primitive in F_{order}"
                    )));
                }
                g
            }
            None => (1..order).find(|&g| is_primitive(g)).expect("F^* is cyclic"),
        };

        let mut exp = Vec::with_capacity(units as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = 1u32;
        for k in 0..units {
            exp.push(Fe(cur));
            log[cur as usize] = k;
            cur = mul_slow(cur, xi, p, &modulus);
        }
        debug_assert_eq!(cur, 1);

        let zech = exp
            .iter()
            .map(|&Fe(v)| {
                let d0 = v % p;
                let w = v - d0 + (d0 + 1) % p;
                if w == 0 {
                    NO_LOG
                } else {
                    log[w as usize]
                }
            })
            .collect();
        let neg_one_log = if p == 2 { 0 } else { units / 2 };

        Ok(Field {
            p,
            n,
            order,
            modulus,
            xi: Fe(xi),
            exp,
            log,
            zech,
            neg_one_log,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the multiplicative group.
    pub fn units(&self) -> u32 {
        self.order - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn xi(&self) -> Fe {
        self.xi
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
            xi: self.coeffs(self.xi),
        }
    }

    /// Coefficient vector (t^0 first) of an element.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        unpack(a.0, self.p, self.n)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        assert!(coeffs.len() <= self.n as usize);
        Fe(pack(coeffs, self.p))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    /// Packed value back to an element, if it is in range.
    pub fn from_packed(&self, v: u32) -> Option<Fe> {
        (v < self.order).then_some(Fe(v))
    }

    /// The prime-field value, if `a` lies in F_p.
    pub fn as_prime_field(&self, a: Fe) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let units = self.order - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let diff = if lb >= la { lb - la } else { lb + units - la };
        let z = self.zech[diff as usize];
        if z == NO_LOG {
            Fe::ZERO
        } else {
            let s = la + z;
            self.exp[(if s >= units { s - units } else { s }) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        let units = self.order - 1;
        let s = self.log[a.0 as usize] + self.neg_one_log;
        self.exp[(if s >= units { s - units } else { s }) as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let units = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        self.exp[(if s >= units { s - units } else { s }) as usize]
    }

    pub fn checked_inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let units = self.order - 1;
        let l = self.log[a.0 as usize];
        Some(self.exp[((units - l) % units) as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        self.checked_inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let units = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        self.exp[((l * (e % units)) % units) as usize]
    }

    /// Power with a possibly negative exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: Fe, e: i64) -> Fe {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.pow(self.inv(a), e.unsigned_abs())
        }
    }

    /// ξ^k.
    pub fn xi_pow(&self, k: i64) -> Fe {
        let units = (self.order - 1) as i64;
        self.exp[k.rem_euclid(units) as usize]
    }

    /// Discrete logarithm base ξ.
    pub fn log(&self, a: Fe) -> Result<u32> {
        if a.0 == 0 {
            Err(Error::ZeroElement)
        } else {
            Ok(self.log[a.0 as usize])
        }
    }

    pub fn multiplicative_order(&self, a: Fe) -> Result<u32> {
        let l = self.log(a)?;
        let units = self.order - 1;
        Ok(units / gcd_u(l as u64, units as u64) as u32)
    }

    /// Whether `c` is an `nn`-th power in this field, via
    /// `log(c) ≡ 0 (mod gcd(nn, Q-1))`. Zero is rejected; callers branch on it.
    pub fn is_nth_power(&self, c: Fe, nn: u64) -> Result<bool> {
        let l = self.log(c)? as u64;
        let g = gcd_u(nn, (self.order - 1) as u64);
        Ok(l.is_multiple_of(g))
    }

    /// Number of `y` with `y^nn = c` for nonzero `c`.
    pub fn nth_root_count(&self, c: Fe, nn: u64) -> Result<u64> {
        let g = gcd_u(nn, (self.order - 1) as u64);
        Ok(if self.is_nth_power(c, nn)? { g } else { 0 })
    }

    /// a^(p^k).
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        self.pow(a, (self.p as u64).pow(k))
    }

    /// Element at position i of the canonical enumeration 0, ξ^0, ξ^1, …
    #[inline]
    pub fn element_at(&self, i: u32) -> Fe {
        if i == 0 {
            Fe::ZERO
        } else {
            self.exp[(i - 1) as usize]
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + '_ {
        self.exp.iter().copied()
    }
}

/// The pair F_q ⊂ F_{q^2} with a fixed embedding.
///
/// F_{q^2} uses the smallest irreducible modulus of degree 2n and its smallest
/// primitive element ξ_{q^2}. F_q uses the smallest irreducible modulus of
/// degree n; its primitive element is pinned to the preimage of ξ_{q^2}^{q+1},
/// so `xi` means the same element in both fields.
#[derive(Clone, Debug)]
pub struct Tower {
    q: u32,
    base: Field,
    ext: Field,
    embed: Vec<Fe>,
    restrict: Vec<u32>,
}

impl Tower {
    pub fn new(p: u32, n: u32) -> Result<Tower> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::Hypothesis("extension degree must be at least 1".into()));
        }
        checked_order(p as u64, 2 * n)?;
        let ext = Field::new(p, 2 * n)?;
        let q = (p as u64).pow(n) as u32;
        let base_modulus = smallest_irreducible(p, n);

        let eval_modulus = |a: Fe| {
            base_modulus
                .iter()
                .rev()
                .fold(Fe::ZERO, |acc, &c| ext.add(ext.mul(acc, a), ext.from_int(c as i64)))
        };
        let root = (0..ext.order)
            .map(Fe)
            .find(|&a| ext.pow(a, q as u64) == a && eval_modulus(a).is_zero())
            .expect("the modulus splits in F_{q^2}");

        let embed: Vec<Fe> = (0..q)
            .map(|v| {
                unpack(v, p, n).iter().rev().fold(Fe::ZERO, |acc, &c| {
                    ext.add(ext.mul(acc, root), ext.from_int(c as i64))
                })
            })
            .collect();
        let mut restrict = vec![NO_LOG; ext.order as usize];
        for (v, &e) in embed.iter().enumerate() {
            restrict[e.0 as usize] = v as u32;
        }
        let xi_base = restrict[ext.pow(ext.xi, q as u64 + 1).0 as usize];
        debug_assert_ne!(xi_base, NO_LOG);
        let base = Field::build(p, n, base_modulus, Some(xi_base))?;

        Ok(Tower {
            q,
            base,
            ext,
            embed,
            restrict,
        })
    }

    /// Tower over F_q given q itself.
    pub fn from_q(q: u64) -> Result<Tower> {
        let (p, n) = crate::arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Tower::new(p as u32, n)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Size of the big field, q^2.
    pub fn q2(&self) -> u32 {
        self.ext.order
    }

    pub fn p(&self) -> u32 {
        self.ext.p
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a.0 as usize]
    }

    pub fn restrict(&self, a: Fe) -> Option<Fe> {
        match self.restrict[a.0 as usize] {
            NO_LOG => None,
            v => Some(Fe(v)),
        }
    }

    #[inline]
    pub fn in_base(&self, a: Fe) -> bool {
        self.restrict[a.0 as usize] != NO_LOG
    }

    /// a ↦ a^q on F_{q^2}.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.ext.pow(a, self.q as u64)
    }

    /// ξ_q viewed inside F_{q^2}; equal to ξ_{q^2}^{q+1}.
    pub fn xi_base(&self) -> Fe {
        self.embed(self.base.xi)
    }

    /// a^{q+1} = 1.
    pub fn is_norm_one(&self, a: Fe) -> bool {
        !a.is_zero() && self.ext.pow(a, self.q as u64 + 1) == Fe::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_pow(f: &Field, a: Fe, e: u64) -> Fe {
        (0..e).fold(Fe::ONE, |acc, _| f.mul(acc, a))
    }

    #[test]
    fn small_tower_orders() {
        let t = Tower::new(3, 2).unwrap();
        assert_eq!(t.base().order(), 9);
        assert_eq!(t.ext().order(), 81);
        let e = t.xi_base();
        assert_eq!(t.ext().multiplicative_order(e).unwrap(), 8);
        assert_eq!(e, t.ext().pow(t.ext().xi(), 10));

        let t = Tower::new(5, 1).unwrap();
        assert_eq!((t.base().order(), t.ext().order()), (5, 25));
    }

    #[test]
    fn embedding_is_a_ring_map_and_fixed_by_frobenius() {
        let t = Tower::new(7, 2).unwrap();
        let (b, e) = (t.base(), t.ext());
        assert_eq!(t.embed(Fe::ONE), Fe::ONE);
        for x in b.elements() {
            let ex = t.embed(x);
            assert_eq!(e.pow(ex, 49), ex);
            assert_eq!(t.restrict(ex), Some(x));
            for y in b.elements().step_by(5) {
                assert_eq!(t.embed(b.mul(x, y)), e.mul(ex, t.embed(y)));
                assert_eq!(t.embed(b.add(x, y)), e.add(ex, t.embed(y)));
            }
        }
        let fixed = e.elements().filter(|&a| t.frobenius(a) == a).count();
        assert_eq!(fixed, 49);
    }

    #[test]
    fn tables_are_consistent() {
        for (p, n) in [(2, 1), (2, 4), (3, 3), (5, 2), (19, 1)] {
            let f = Field::new(p, n).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.xi_pow(f.log(a).unwrap() as i64), a);
                    assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                for b in f.elements().step_by(3) {
                    let lhs = f.coeffs(f.add(a, b));
                    let (ca, cb) = (f.coeffs(a), f.coeffs(b));
                    let rhs: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(lhs, rhs);
                    assert_eq!(f.mul(a, b), Fe(mul_slow(a.0, b.0, p, f.modulus())));
                }
            }
        }
    }

    #[test]
    fn nth_power_examples() {
        let f = Field::new(5, 2).unwrap();
        let xi = f.xi();
        assert!(f.is_nth_power(f.mul(xi, xi), 2).unwrap());
        assert!(!f.is_nth_power(xi, 2).unwrap());
        assert!(f.is_nth_power(xi, 1).unwrap());
        assert!(f.is_nth_power(Fe::ZERO, 3).is_err());

        let f81 = Field::new(3, 4).unwrap();
        let fifth_powers: std::collections::BTreeSet<Fe> =
            f81.nonzero_elements().map(|y| brute_pow(&f81, y, 5)).collect();
        assert_eq!(fifth_powers.len(), 16);
        let tested = f81
            .nonzero_elements()
            .filter(|&c| f81.is_nth_power(c, 5).unwrap())
            .count();
        assert_eq!(tested, 16);
    }

    #[test]
    fn frobenius_matches_repeated_multiplication() {
        let t = Tower::new(7, 1).unwrap();
        let e = t.ext();
        for a in e.elements() {
            assert_eq!(t.frobenius(a), brute_pow(e, a, 7));
            if t.is_norm_one(a) {
                assert_eq!(t.frobenius(a), e.inv(a));
            }
            assert_eq!(t.frobenius(t.frobenius(a)), a);
        }
    }

    #[test]
    fn enumeration_order_and_sum() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.elements().count(), 5);
        let f9 = Field::new(3, 2).unwrap();
        let all: Vec<Fe> = f9.elements().collect();
        assert_eq!(all[0], Fe::ZERO);
        assert_eq!(all[1], Fe::ONE);
        assert_eq!(all[2], f9.xi());
        let distinct: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 9);

        let big = Field::new(7, 4).unwrap();
        let sum = big.elements().fold(Fe::ZERO, |acc, a| big.add(acc, a));
        assert_eq!(sum, Fe::ZERO);
        assert_eq!(big.elements().count(), 2401);
    }

    #[test]
    fn guards() {
        assert!(matches!(Tower::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Tower::new(2, 11), Err(Error::FieldTooLarge { .. })));
        assert!(Tower::new(2, 10).is_ok());
    }

    #[test]
    fn custom_modulus() {
        // t^2 + 1 is irreducible over F_3; t^2 + 2 = (t + 1)(t + 2) is not
        let f = Field::with_modulus(3, vec![1, 0, 1]).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert!(matches!(
            Field::with_modulus(3, vec![2, 0, 1]),
            Err(Error::ReducibleModulus { .. })
        ));
    }
}
