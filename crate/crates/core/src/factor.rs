//! Factorization into monic irreducibles over a finite field: square-free
//! decomposition, distinct-degree splitting and Cantor–Zassenhaus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;

/// f = unit · Π factor^mult with monic irreducible factors, sorted by
/// degree and then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit), |acc, (g, e)| {
                acc.mul(field, &g.pow(field, *e as u64))
            })
    }
}

pub fn factor(field: &Field, f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = f.lc();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    for (sq, mult) in squarefree(field, &f.monic(field)) {
        for (block, d) in distinct_degree(field, &sq) {
            for g in equal_degree(field, &block, d, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0).cmp(&(b.0.deg(), &b.0)));
    Ok(Factorization { unit, factors: out })
}

/// Monic square-free parts with multiplicities, f = Π part^mult.
pub fn squarefree(field: &Field, f: &Poly) -> Vec<(Poly, u32)> {
    let mut acc = Vec::new();
    squarefree_into(field, &f.monic(field), 1, &mut acc);
    // the same part may arise from several recursion levels
    acc.sort_by_key(|a| a.1);
    acc
}

fn squarefree_into(field: &Field, f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.deg() == 0 {
        return;
    }
    let p = field.characteristic();
    let df = f.derivative(field);
    if df.is_zero() {
        squarefree_into(field, &pth_root(field, f), scale * p, out);
        return;
    }
    let mut c = f.gcd(field, &df);
    let mut w = f.div_exact(field, &c).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(field, &c);
        let fac = w.div_exact(field, &y).expect("gcd divides");
        if fac.deg() > 0 {
            out.push((fac, i * scale));
        }
        i += 1;
        c = c.div_exact(field, &y).expect("gcd divides");
        w = y;
    }
    if c.deg() > 0 {
        squarefree_into(field, &pth_root(field, &c), scale * p, out);
    }
}

/// g with g^p = f, for f whose exponents are all multiples of p.
fn pth_root(field: &Field, f: &Poly) -> Poly {
    let p = field.characteristic() as usize;
    let n = field.degree();
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&a| field.frobenius(a, n - 1))
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Splits a monic square-free f into blocks whose irreducible factors all
/// share the paired degree.
pub fn distinct_degree(field: &Field, f: &Poly) -> Vec<(Poly, usize)> {
    let q = field.order() as u128;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x();
    let mut h = x.rem(field, &rest);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(field, q, &rest);
        let g = rest.gcd(field, &h.sub(field, &x));
        if g.deg() > 0 {
            rest = rest.div_exact(field, &g).expect("gcd divides");
            h = h.rem(field, &rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// Cantor–Zassenhaus on a monic square-free product of degree-d irreducibles.
pub fn equal_degree(field: &Field, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.clone()];
    }
    loop {
        let a = random_poly(field, f.deg(), rng);
        if a.deg() == 0 {
            continue;
        }
        let b = splitting_poly(field, &a, f, d);
        let g = f.gcd(field, &b);
        if g.deg() > 0 && g.deg() < f.deg() {
            let h = f.div_exact(field, &g).expect("gcd divides");
            let mut out = equal_degree(field, &g, d, rng);
            out.extend(equal_degree(field, &h, d, rng));
            return out;
        }
    }
}

fn random_poly(field: &Field, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let order = field.order();
    Poly::from_coeffs(
        (0..below)
            .map(|_| field.element_at(rng.gen_range(0..order)))
            .collect(),
    )
}

/// For odd q: a^{(q^d - 1)/2} - 1, via the norm a^{1 + q + ... + q^{d-1}}.
/// For even q: the absolute trace Σ a^{2^k}, k < n·d.
fn splitting_poly(field: &Field, a: &Poly, f: &Poly, d: usize) -> Poly {
    let q = field.order() as u128;
    if field.characteristic() == 2 {
        let steps = field.degree() as usize * d;
        let mut t = a.rem(field, f);
        let mut acc = t.clone();
        for _ in 1..steps {
            t = t.mul_mod(field, &t, f);
            acc = acc.add(field, &t);
        }
        acc
    } else {
        let mut t = a.rem(field, f);
        let mut norm = t.clone();
        for _ in 1..d {
            t = t.pow_mod(field, q, f);
            norm = norm.mul_mod(field, &t, f);
        }
        norm.pow_mod(field, (q - 1) / 2, f).sub(field, &Poly::one())
    }
}

pub fn is_irreducible(field: &Field, f: &Poly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let fm = f.monic(field);
            if !fm.is_separable(field) {
                return false;
            }
            let dd = distinct_degree(field, &fm);
            dd.len() == 1 && dd[0].0.deg() == dd[0].1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Factor by dividing out every monic polynomial in increasing degree.
    fn trial_factor(field: &Field, f: &Poly) -> Vec<(Poly, u32)> {
        let mut rest = f.monic(field);
        let mut out = Vec::new();
        let mut deg = 1;
        while rest.deg() > 0 {
            if 2 * deg > rest.deg() {
                out.push((rest.clone(), 1));
                break;
            }
            let count = (field.order() as u64).pow(deg as u32);
            for idx in 0..count {
                let mut c = Vec::with_capacity(deg + 1);
                let mut v = idx;
                for _ in 0..deg {
                    c.push(field.element_at((v % field.order() as u64) as u32));
                    v /= field.order() as u64;
                }
                c.push(Fe::ONE);
                let g = Poly::from_coeffs(c);
                let mut e = 0;
                while let Some(qt) = rest.div_exact(field, &g) {
                    rest = qt;
                    e += 1;
                }
                if e > 0 {
                    out.push((g, e));
                }
            }
            deg += 1;
        }
        // merge the leftover with an earlier identical factor
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (g, e) in out {
            match merged.iter_mut().find(|(h, _)| *h == g) {
                Some(entry) => entry.1 += e,
                None => merged.push((g, e)),
            }
        }
        merged.sort_by(|a, b| (a.0.deg(), &a.0).cmp(&(b.0.deg(), &b.0)));
        merged
    }

    #[test]
    fn profile_over_f5() {
        let f5 = Field::new(5, 1).unwrap();
        // (x^2+1)^2 x^2 over F_5 = (x-2)^2 (x-3)^2 x^2
        let g = Poly::from_ints(&f5, &[1, 0, 1]).pow(&f5, 2).shift(2);
        let fac = factor(&f5, &g).unwrap();
        let shown: Vec<(Vec<u32>, u32)> = fac
            .factors
            .iter()
            .map(|(p, e)| (p.coeffs().iter().map(|a| a.packed()).collect(), *e))
            .collect();
        assert_eq!(shown, vec![(vec![0, 1], 2), (vec![2, 1], 2), (vec![3, 1], 2)]);
        assert_eq!(fac.expand(&f5), g);
    }

    #[test]
    fn matches_trial_division() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2), (7, 1)] {
            let field = Field::new(p, n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..40 {
                let deg = rng.gen_range(1..7);
                let mut f = random_poly(&field, deg + 1, &mut rng);
                if f.is_zero() {
                    continue;
                }
                if rng.gen_bool(0.3) {
                    f = f.mul(&field, &f);
                }
                let fac = factor(&field, &f).unwrap();
                assert_eq!(fac.factors, trial_factor(&field, &f), "{f:?} over {p}^{n}");
                assert_eq!(fac.expand(&field), f);
            }
        }
    }

    #[test]
    fn x4_plus_2_over_f19() {
        let f19 = Field::new(19, 1).unwrap();
        let f = Poly::from_ints(&f19, &[2, 0, 0, 0, 1]);
        let fac = factor(&f19, &f).unwrap();
        assert!(fac.factors.iter().all(|(_, e)| *e == 1));
        assert_eq!(fac.factors, trial_factor(&f19, &f));
    }

    #[test]
    fn large_binomial() {
        // x^12 + ξ^4 over F_121: all factors have the same degree
        let field = Field::new(11, 2).unwrap();
        let f = Poly::from_coeffs({
            let mut c = vec![Fe::ZERO; 13];
            c[0] = field.xi_pow(4);
            c[12] = Fe::ONE;
            c
        });
        let fac = factor(&field, &f).unwrap();
        assert_eq!(fac.expand(&field), f);
        let degs: Vec<usize> = fac.factors.iter().map(|(g, _)| g.deg()).collect();
        assert!(degs.windows(2).all(|w| w[0] == w[1]));
        assert!(fac.factors.iter().all(|(g, _)| is_irreducible(&field, g)));
    }

    #[test]
    fn inseparable_powers() {
        let f3 = Field::new(3, 2).unwrap();
        // (x + ξ)^3 (x^2 + 1)^6
        let a = Poly::from_coeffs(vec![f3.xi(), Fe::ONE]).pow(&f3, 3);
        let b = Poly::from_ints(&f3, &[1, 0, 1]).pow(&f3, 6);
        let f = a.mul(&f3, &b);
        let fac = factor(&f3, &f).unwrap();
        assert_eq!(fac.expand(&f3), f);
        assert_eq!(fac.factors.iter().map(|(_, e)| *e).sum::<u32>(), 3 + 12);
    }
}
