//! Rank-2 integer lattices: congruence sublattices, coordinates, and counting
//! solutions of 2×2 linear systems modulo N by diagonalization.

use crate::arith::{ext_gcd, gcd, mod_inverse};

/// Basis vectors as rows.
pub type Basis = [[i128; 2]; 2];

pub const STANDARD: Basis = [[1, 0], [0, 1]];

fn g(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// Basis (in Hermite form) of {(u, v) : a·u + b·v ≡ 0 (mod m)}.
pub fn congruence_kernel(a: i128, b: i128, m: i128) -> Basis {
    assert!(m >= 1);
    let ga = g(a.rem_euclid(m), m);
    let alpha = m / ga;
    let beta = ga / g(b.rem_euclid(ga), ga);
    let rhs = (-beta * b / ga).rem_euclid(alpha);
    let inv = mod_inverse((a / ga).rem_euclid(alpha), alpha).expect("coprime after division");
    let a0 = (rhs * inv).rem_euclid(alpha);
    [[alpha, 0], [a0, beta]]
}

/// The vectors of `basis`'s lattice whose dot product with `c` is 0 mod m.
pub fn congruence_sublattice(basis: &Basis, c: [i128; 2], m: i128) -> Basis {
    let dot = |v: [i128; 2]| c[0] * v[0] + c[1] * v[1];
    let k = congruence_kernel(dot(basis[0]), dot(basis[1]), m);
    mul(&k, basis)
}

pub fn mul(a: &Basis, b: &Basis) -> Basis {
    let mut out = [[0i128; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn det(b: &Basis) -> i128 {
    b[0][0] * b[1][1] - b[0][1] * b[1][0]
}

/// Integer coordinates of v in the basis, if v lies in the lattice.
pub fn coords(b: &Basis, v: [i128; 2]) -> Option<[i128; 2]> {
    let d = det(b);
    assert!(d != 0, "degenerate basis");
    // v = x·b0 + y·b1  (Cramer)
    let x = v[0] * b[1][1] - v[1] * b[1][0];
    let y = b[0][0] * v[1] - b[0][1] * v[0];
    (x % d == 0 && y % d == 0).then(|| [x / d, y / d])
}

pub fn contains(b: &Basis, v: [i128; 2]) -> bool {
    coords(b, v).is_some()
}

/// Number of x ∈ (Z/n)^2 with T·x ≡ rhs (mod n).
pub fn count_solutions(t: &Basis, rhs: [i128; 2], n: i128) -> u64 {
    assert!(n >= 1);
    let mut a = *t;
    let mut u: Basis = STANDARD;
    loop {
        while a[1][0] != 0 {
            let q = a[0][0] / a[1][0];
            for j in 0..2 {
                a[0][j] -= q * a[1][j];
                u[0][j] -= q * u[1][j];
            }
            a.swap(0, 1);
            u.swap(0, 1);
        }
        if a[0][1] == 0 {
            break;
        }
        // Column Euclid on row 0. If a00 already divides a01 the step leaves
        // a10 at zero; otherwise |a00| strictly drops, so the outer loop ends.
        while a[0][1] != 0 {
            if a[0][0] == 0 {
                for row in a.iter_mut() {
                    row.swap(0, 1);
                }
                continue;
            }
            let q = a[0][1] / a[0][0];
            for row in a.iter_mut() {
                row[1] -= q * row[0];
            }
            if a[0][1] != 0 {
                for row in a.iter_mut() {
                    row.swap(0, 1);
                }
            }
        }
    }
    let r = [
        (u[0][0] * rhs[0] + u[0][1] * rhs[1]).rem_euclid(n),
        (u[1][0] * rhs[0] + u[1][1] * rhs[1]).rem_euclid(n),
    ];
    let mut count = 1u64;
    for i in 0..2 {
        let gi = gcd(a[i][i] as i64, n as i64) as i128;
        if r[i] % gi != 0 {
            return 0;
        }
        count *= gi as u64;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_count(t: &Basis, rhs: [i128; 2], n: i128) -> u64 {
        let mut c = 0;
        for x in 0..n {
            for y in 0..n {
                let ok = (0..2).all(|i| (t[i][0] * x + t[i][1] * y - rhs[i]).rem_euclid(n) == 0);
                c += ok as u64;
            }
        }
        c
    }

    #[test]
    fn kernel_of_identical_covers() {
        // a + b ≡ 0 mod 6
        let k = congruence_kernel(1, 1, 6);
        assert_eq!(det(&k).abs(), 6);
        assert!(contains(&k, [1, -1]));
        assert!(!contains(&k, [1, 0]));
    }

    proptest! {
        #[test]
        fn kernel_is_exact(a in -30i128..30, b in -30i128..30, m in 1i128..24) {
            let k = congruence_kernel(a, b, m);
            for row in k {
                prop_assert_eq!((a * row[0] + b * row[1]).rem_euclid(m), 0);
            }
            // index of the kernel = size of the image of (a, b) in Z/m
            let image = m / gcd(gcd(a as i64, b as i64) as i64, m as i64) as i128;
            prop_assert_eq!(det(&k).abs(), image);
        }

        #[test]
        fn solution_count_matches_enumeration(
            t in prop::array::uniform2(prop::array::uniform2(-12i128..12)),
            r in prop::array::uniform2(-20i128..20),
            n in 1i128..13,
        ) {
            prop_assert_eq!(count_solutions(&t, r, n), brute_count(&t, r, n));
        }
    }
}
