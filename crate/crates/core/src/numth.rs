//! Shared exact number theory: factorization by trial division, unit groups,
//! periodic residue sets, and perfect-square detection.

use crate::{Error, Result};
use num_integer::Integer;

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// `a * b mod m` without overflow; result in `[0, m)`.
pub(crate) fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

pub(crate) fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    let mut acc = 1i64.rem_euclid(m);
    let mut b = base.rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (`m >= 1`), if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}

fn isqrt64(n: i64) -> i64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x > 0 && (x as i128) * (x as i128) > n as i128 {
        x -= 1;
    }
    while ((x + 1) as i128) * ((x + 1) as i128) <= n as i128 {
        x += 1;
    }
    x
}

/// `Some(r)` with `r >= 0` and `r*r = n`, if `n` is a perfect square.
pub fn is_perfect_square(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = isqrt64(n);
    (r * r == n).then_some(r)
}

/// Prime factorization of a positive integer, exponents collected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: i64,
    /// `(prime, exponent)` pairs in ascending prime order.
    pub factors: Vec<(i64, u32)>,
}

/// Factorize `n >= 1` by trial division. `factorize(1)` has no factors.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n <= 0 {
        return Err(Error::NonPositive("factorize", n));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2i64;
    while (p as i128) * (p as i128) <= rest as i128 {
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// A union of residue classes modulo a fixed positive modulus.
///
/// Modulus 1 with residue set `{0}` is the canonical encoding of all of `Z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueSet {
    modulus: i64,
    residues: Vec<i64>,
}

impl ResidueSet {
    /// Normalizes residues into `[0, modulus)`, sorted and deduplicated.
    pub fn new(modulus: i64, residues: impl IntoIterator<Item = i64>) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::NonPositive("residue set modulus", modulus));
        }
        let mut rs: Vec<i64> = residues
            .into_iter()
            .map(|r| r.rem_euclid(modulus))
            .collect();
        rs.sort_unstable();
        rs.dedup();
        Ok(ResidueSet {
            modulus,
            residues: rs,
        })
    }

    /// The canonical encoding of `Z`: modulus 1, residues `{0}`.
    pub fn all_integers() -> Self {
        ResidueSet {
            modulus: 1,
            residues: vec![0],
        }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn residues(&self) -> &[i64] {
        &self.residues
    }

    pub fn contains(&self, d: i64) -> bool {
        self.residues
            .binary_search(&d.rem_euclid(self.modulus))
            .is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Whether every residue class modulo the modulus is present.
    pub fn is_full(&self) -> bool {
        self.residues.len() as i64 == self.modulus
    }

    /// The set `{-x : x in self}`.
    pub fn negate(&self) -> Self {
        ResidueSet::new(self.modulus, self.residues.iter().map(|&r| -r))
            .expect("modulus unchanged")
    }

    /// Union of two residue sets, on the lcm of the moduli.
    pub fn union(&self, other: &ResidueSet) -> Self {
        let l = merged_modulus(self.modulus, other.modulus);
        ResidueSet::new(l, (0..l).filter(|&r| self.contains(r) || other.contains(r)))
            .expect("lcm >= 1")
    }

    /// Rewrites the set on its minimal period (a divisor of the modulus).
    pub fn minimal(&self) -> Self {
        for d in 1..=self.modulus {
            if self.modulus % d != 0 {
                continue;
            }
            // d is a period iff the set is closed under adding d.
            if self.residues.iter().all(|&r| self.contains(r + d)) {
                return ResidueSet::new(d, self.residues.iter().map(|&r| r % d))
                    .expect("divisor >= 1");
            }
        }
        self.clone()
    }
}

fn merged_modulus(a: i64, b: i64) -> i64 {
    let l = (a as i128 / a.gcd(&b) as i128) * b as i128;
    assert!(
        l <= 1 << 33,
        "residue moduli {a} and {b} merge to an lcm beyond desk scale"
    );
    l as i64
}

/// Units modulo `m >= 1` as a residue set. `units_mod(1)` is all of `Z`.
pub fn units_mod(m: i64) -> Result<ResidueSet> {
    if m < 1 {
        return Err(Error::NonPositive("units_mod", m));
    }
    ResidueSet::new(m, (0..m).filter(|&r| gcd(r, m) == 1))
}

/// Intersection of two residue sets on the lcm of their moduli.
///
/// The lcm stays at desk scale by assumption, so a direct scan of all lcm
/// residues is simpler than per-class CRT lifting and fast enough.
pub fn crt_merge(a: &ResidueSet, b: &ResidueSet) -> ResidueSet {
    let l = merged_modulus(a.modulus(), b.modulus());
    ResidueSet::new(l, (0..l).filter(|&r| a.contains(r) && b.contains(r))).expect("lcm >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(m: i64) -> i64 {
        let mut out = m;
        for (p, _) in factorize(m).unwrap().factors {
            out = out / p * (p - 1);
        }
        out
    }

    #[test]
    fn factorize_small_values() {
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert_eq!(factorize(120).unwrap().factors, vec![(2, 3), (3, 1), (5, 1)]);
        assert_eq!(factorize(840).unwrap().factors, vec![(2, 3), (3, 1), (5, 1), (7, 1)]);
        assert_eq!(factorize(97).unwrap().factors, vec![(97, 1)]);
    }

    #[test]
    fn factorize_rejects_nonpositive() {
        assert!(factorize(0).is_err());
        assert!(factorize(-12).is_err());
    }

    #[test]
    fn factorize_reconstructs() {
        for n in 1..=2000i64 {
            let f = factorize(n).unwrap();
            let back: i64 = f
                .factors
                .iter()
                .map(|&(p, e)| p.pow(e))
                .product();
            assert_eq!(back, n);
            for w in f.factors.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn units_small_moduli() {
        assert_eq!(units_mod(7).unwrap().residues(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(units_mod(1).unwrap().residues(), &[0]);
        assert_eq!(units_mod(12).unwrap().residues(), &[1, 5, 7, 11]);
    }

    #[test]
    fn units_cardinality_is_phi() {
        for m in 1..=10_000i64 {
            assert_eq!(units_mod(m).unwrap().residues().len() as i64, phi(m), "m = {m}");
        }
    }

    #[test]
    fn residue_set_normalizes_inputs() {
        let rs = ResidueSet::new(5, [7, -3, 2, 12]).unwrap();
        assert_eq!(rs.residues(), &[2]);
        assert!(rs.contains(-3));
        assert!(rs.contains(17));
        assert!(!rs.contains(0));
    }

    #[test]
    fn modulus_one_denotes_all_integers() {
        let z = ResidueSet::all_integers();
        for d in [-5i64, -1, 0, 1, 2, 10_000] {
            assert!(z.contains(d));
        }
        assert!(z.is_full());
    }

    #[test]
    fn crt_merge_agrees_with_direct_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let ma = rng.gen_range(1..=200i64);
            let mb = rng.gen_range(1..=200i64);
            let a = ResidueSet::new(ma, (0..ma).filter(|_| rng.gen_bool(0.4))).unwrap();
            let b = ResidueSet::new(mb, (0..mb).filter(|_| rng.gen_bool(0.4))).unwrap();
            let merged = crt_merge(&a, &b);
            for d in -300..=300i64 {
                assert_eq!(merged.contains(d), a.contains(d) && b.contains(d));
            }
        }
    }

    #[test]
    fn crt_merge_is_idempotent_on_equal_sets() {
        let a = ResidueSet::new(12, [1, 5, 7]).unwrap();
        let m = crt_merge(&a, &a);
        assert_eq!(m.minimal(), a.minimal());
    }

    // Frozen targets for the two composite residue sets exercised end to end
    // by the acceptance suite: unit classes mod 7 intersected with a mod-120
    // component, computed here by a direct scan.
    #[test]
    fn crt_merge_mod_120_and_7_components() {
        let a = ResidueSet::new(120, [1, 49, 71, 119]).unwrap();
        let b = units_mod(7).unwrap();
        let merged = crt_merge(&a, &b);
        assert_eq!(merged.modulus(), 840);
        let expected: Vec<i64> = (0..840)
            .filter(|&r| a.contains(r) && r % 7 != 0)
            .collect();
        assert_eq!(merged.residues(), expected.as_slice());
        assert_eq!(merged.residues().len(), 24);

        let c = ResidueSet::new(120, [1, 49]).unwrap();
        let d = ResidueSet::new(7, [1, 2, 4]).unwrap();
        let merged = crt_merge(&c, &d);
        assert_eq!(merged.residues(), &[1, 121, 169, 289, 361, 529]);
    }

    #[test]
    fn minimal_reduces_redundant_moduli() {
        let rs = ResidueSet::new(4, [0, 2]).unwrap();
        let m = rs.minimal();
        assert_eq!(m.modulus(), 2);
        assert_eq!(m.residues(), &[0]);

        let odd = ResidueSet::new(6, [1, 3, 5]).unwrap().minimal();
        assert_eq!(odd.modulus(), 2);
        assert_eq!(odd.residues(), &[1]);

        let stays = ResidueSet::new(24, [0, 1, 16]).unwrap().minimal();
        assert_eq!(stays.modulus(), 24);
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(is_perfect_square(49), Some(7));
        assert_eq!(is_perfect_square(0), Some(0));
        assert_eq!(is_perfect_square(1), Some(1));
        assert_eq!(is_perfect_square(-4), None);
        assert_eq!(is_perfect_square(2), None);
        for n in 0..=100_000i64 {
            let r = isqrt64(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "isqrt({n})");
        }
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(0, 1), Some(0));
        assert_eq!(pow_mod(3, 4, 10), 1);
        assert_eq!(pow_mod(2, 62, 1_000_000_007), {
            let mut acc = 1i64;
            for _ in 0..62 {
                acc = mul_mod(acc, 2, 1_000_000_007);
            }
            acc
        });
    }
}
