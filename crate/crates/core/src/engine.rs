//! The per-class degree-set computations.
//!
//! Each public operation takes validated coordinates and returns a
//! [`DegreeSet`]. The top-level entry point is [`degrees`], which dispatches
//! on the geometry of the description; everything below it is also exposed
//! so individual formulas can be exercised directly.

use std::collections::{BTreeMap, BTreeSet};

use crate::degset::{self, DegreeSet, IntegerPredicate, Membership, SolConditions};
use crate::forms::BinaryForm;
use crate::manifold::{
    canonicalize, classify, singular_orders, Geometry, ManifoldDesc, SphericalGroup,
};
use crate::numth::{crt_merge, factorize, gcd, inv_mod, mul_mod, pow_mod, units_mod, ResidueSet};
use crate::{Error, Result};

/// Residue materialization is refused beyond this group order (or lens
/// order). All interesting inputs are orders of magnitude smaller.
pub const MAX_ENUMERABLE_ORDER: i64 = 10_000_000;

fn checked_order(group: &SphericalGroup) -> Result<i64> {
    let n = group.order()?;
    if n > MAX_ENUMERABLE_ORDER {
        return Err(Error::OrderTooLarge(n, MAX_ENUMERABLE_ORDER));
    }
    Ok(n)
}

/// `{k^2 mod N : gcd(k, N) = 1}` for `N` the group order.
fn iso_residues(group: &SphericalGroup) -> Result<ResidueSet> {
    let n = checked_order(group)?;
    let units = units_mod(n)?;
    ResidueSet::new(n, units.residues().iter().map(|&k| mul_mod(k, k, n)))
}

/// Degrees of self-maps inducing a fundamental-group isomorphism, for a
/// manifold covered by the 3-sphere: the squares of units modulo the group
/// order.
pub fn d_iso_spherical(group: &SphericalGroup) -> Result<DegreeSet> {
    Ok(DegreeSet::Periodic(iso_residues(group)?))
}

/// Closure of `seed` under multiplication by each of `multipliers`, all
/// modulo `modulus`.
fn multiplicative_closure(
    modulus: i64,
    seed: impl IntoIterator<Item = i64>,
    multipliers: &[i64],
) -> Vec<i64> {
    let mut set = BTreeSet::new();
    let mut work: Vec<i64> = Vec::new();
    for s in seed {
        if set.insert(s) {
            work.push(s);
        }
    }
    while let Some(v) = work.pop() {
        for &m in multipliers {
            let w = mul_mod(v, m, modulus);
            if set.insert(w) {
                work.push(w);
            }
        }
    }
    set.into_iter().collect()
}

fn spherical_residues(group: &SphericalGroup) -> Result<ResidueSet> {
    let n = checked_order(group)?;
    match group {
        SphericalGroup::Lens { .. } => ResidueSet::new(n, (0..n).map(|k| mul_mod(k, k, n))),
        SphericalGroup::DStar { n: half } => {
            let mut res: Vec<i64> = (1..n).step_by(2).map(|h| mul_mod(h, h, n)).collect();
            res.push(mul_mod(half.rem_euclid(n), half.rem_euclid(n), n));
            res.push(0);
            ResidueSet::new(n, res)
        }
        SphericalGroup::T24 => ResidueSet::new(24, [0, 1, 16]),
        SphericalGroup::O48 => ResidueSet::new(48, [0, 1, 25]),
        SphericalGroup::I120 => ResidueSet::new(120, [0, 1, 49]),
        SphericalGroup::TPrime { q } => {
            let q64 = *q as u64;
            // 3^(2q-2p) minus 3^q for even q, minus 3^(q+1) for odd q.
            let sub = pow_mod(3, if q % 2 == 0 { q64 } else { q64 + 1 }, n);
            let terms: Vec<i64> = (1..=q64)
                .map(|p| (pow_mod(3, 2 * q64 - 2 * p, n) - sub).rem_euclid(n))
                .collect();
            let squares: BTreeSet<i64> = (0..n)
                .filter(|k| k % 3 != 0)
                .map(|k| mul_mod(k, k, n))
                .collect();
            let mut res = vec![0];
            for &s in &squares {
                for &t in &terms {
                    res.push(mul_mod(s, t, n));
                }
            }
            res.extend_from_slice(iso_residues(group)?.residues());
            ResidueSet::new(n, res)
        }
        SphericalGroup::DPrime { n: odd, q } => {
            let q64 = *q as u64;
            let base1 = (1 - pow_mod(odd.rem_euclid(n), (1u64 << q64) - 1, n)).rem_euclid(n);
            let mut multipliers = vec![base1];
            for p in 1..=q64 {
                // Exponents (2p - q)(odd - 1) with 2p < q have no integer
                // meaning modulo n and are skipped.
                if 2 * p < q64 {
                    continue;
                }
                let exp = (2 * p - q64) * ((odd - 1) as u64);
                multipliers.push((1 - pow_mod(2, exp, n)).rem_euclid(n));
            }
            let seed = (0..n).map(|k| mul_mod(k, k, n));
            let mut res = multiplicative_closure(n, seed, &multipliers);
            res.push(0);
            res.extend_from_slice(iso_residues(group)?.residues());
            ResidueSet::new(n, res)
        }
        SphericalGroup::ProductZm { m, inner } => {
            let inner_res = spherical_residues(inner)?;
            let squares_mod_m = ResidueSet::new(*m, (0..*m).map(|k| mul_mod(k, k, *m)))?;
            Ok(crt_merge(&inner_res, &squares_mod_m))
        }
    }
}

/// The full degree set of a manifold covered by the 3-sphere, one table row
/// per group family.
pub fn d_spherical(group: &SphericalGroup) -> Result<DegreeSet> {
    Ok(DegreeSet::Periodic(spherical_residues(group)?))
}

/// Degrees of maps `L(p,q) -> L(p,q')` inducing a group isomorphism:
/// `{k^2 q^{-1} q' mod p : gcd(k, p) = 1}`.
pub fn d_iso_lens_pair(p: i64, q: i64, q_prime: i64) -> Result<DegreeSet> {
    if p < 1 {
        return Err(Error::NonPositive("lens order", p));
    }
    if p > MAX_ENUMERABLE_ORDER {
        return Err(Error::OrderTooLarge(p, MAX_ENUMERABLE_ORDER));
    }
    if gcd(q, p) != 1 {
        return Err(Error::NotCoprime(q, p));
    }
    if gcd(q_prime, p) != 1 {
        return Err(Error::NotCoprime(q_prime, p));
    }
    let q_inv = inv_mod(q.rem_euclid(p), p).expect("coprime residue is invertible");
    let factor = mul_mod(q_inv, q_prime.rem_euclid(p), p);
    let units = units_mod(p)?;
    let residues = units
        .residues()
        .iter()
        .map(|&k| mul_mod(mul_mod(k, k, p), factor, p));
    Ok(DegreeSet::Periodic(ResidueSet::new(p, residues)?))
}

/// The occupancy-and-stabilizer computation shared by the lens-sum rule and
/// the flat-fiber intersection rule: a partition of the units modulo
/// `modulus` into classes, a multiset of inputs landing in those classes,
/// and the subgroup of classes whose multiplication preserves every
/// occupancy level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitClassData {
    modulus: i64,
    classes: Vec<Vec<i64>>,
    counts: Vec<usize>,
    b_sets: Vec<(usize, Vec<i64>)>,
    c_sets: Vec<(usize, Vec<i64>)>,
    stabilizer: Vec<i64>,
    residues: ResidueSet,
}

impl UnitClassData {
    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// The partition of the units, each class sorted, classes ordered by
    /// smallest member. A class is named by that smallest member.
    pub fn classes(&self) -> &[Vec<i64>] {
        &self.classes
    }

    /// Input multiplicity per class, aligned with `classes`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// For each occupancy level `l >= 1` that occurs: the class names with
    /// exactly that count.
    pub fn b_sets(&self) -> &[(usize, Vec<i64>)] {
        &self.b_sets
    }

    /// For the same levels: the class names stabilizing that level set.
    pub fn c_sets(&self) -> &[(usize, Vec<i64>)] {
        &self.c_sets
    }

    /// Names of the classes stabilizing every occupancy level.
    pub fn stabilizer(&self) -> &[i64] {
        &self.stabilizer
    }

    /// All integers whose residue lies in a stabilizing class.
    pub fn residues(&self) -> &ResidueSet {
        &self.residues
    }
}

/// `classes` must partition the units modulo `modulus`; `occupancy` holds
/// one canonical unit residue per input, repetition meaningful.
fn unit_class_data(
    modulus: i64,
    classes: Vec<Vec<i64>>,
    occupancy: &[i64],
) -> Result<UnitClassData> {
    let mut class_of = vec![usize::MAX; modulus as usize];
    for (i, class) in classes.iter().enumerate() {
        for &u in class {
            class_of[u as usize] = i;
        }
    }
    let mut counts = vec![0usize; classes.len()];
    for &v in occupancy {
        counts[class_of[v as usize]] += 1;
    }

    let mut by_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in counts.iter().enumerate() {
        if l >= 1 {
            by_level.entry(l).or_default().push(i);
        }
    }

    // A class j stabilizes a level iff multiplying every class of that
    // level by j lands back inside the level.
    let level_stabilizer = |members: &[usize]| -> Vec<usize> {
        let in_level: BTreeSet<usize> = members.iter().copied().collect();
        (0..classes.len())
            .filter(|&j| {
                members.iter().all(|&i| {
                    let prod = mul_mod(classes[j][0], classes[i][0], modulus);
                    in_level.contains(&class_of[prod as usize])
                })
            })
            .collect()
    };

    let mut b_sets = Vec::new();
    let mut c_sets = Vec::new();
    let mut stab: Vec<usize> = (0..classes.len()).collect();
    for (&l, members) in &by_level {
        let c_l = level_stabilizer(members);
        stab.retain(|j| c_l.contains(j));
        b_sets.push((l, members.iter().map(|&i| classes[i][0]).collect()));
        c_sets.push((l, c_l.iter().map(|&j| classes[j][0]).collect()));
    }

    let residues = ResidueSet::new(
        modulus,
        stab.iter().flat_map(|&j| classes[j].iter().copied()),
    )?;
    debug_assert!(residues.contains(1), "the stabilizer always keeps the trivial class");

    Ok(UnitClassData {
        modulus,
        stabilizer: stab.iter().map(|&j| classes[j][0]).collect(),
        classes,
        counts,
        b_sets,
        c_sets,
        residues,
    })
}

/// Partition data for a multiset of lens parameters sharing one order `p`:
/// classes are the square-unit cosets, occupancy counts the `q`s per coset.
pub fn lens_class_partition(p: i64, qs: &[i64]) -> Result<UnitClassData> {
    if p < 1 {
        return Err(Error::NonPositive("lens order", p));
    }
    if p > MAX_ENUMERABLE_ORDER {
        return Err(Error::OrderTooLarge(p, MAX_ENUMERABLE_ORDER));
    }
    let units = units_mod(p)?;
    let squares: BTreeSet<i64> = units.residues().iter().map(|&k| mul_mod(k, k, p)).collect();
    let mut assigned = vec![false; p as usize];
    let mut classes = Vec::new();
    for &u in units.residues() {
        if assigned[u as usize] {
            continue;
        }
        let mut class: Vec<i64> = squares.iter().map(|&s| mul_mod(u, s, p)).collect();
        class.sort_unstable();
        class.dedup();
        for &x in &class {
            assigned[x as usize] = true;
        }
        classes.push(class);
    }
    classes.sort();
    let mut occupancy = Vec::with_capacity(qs.len());
    for &q in qs {
        if gcd(q, p) != 1 {
            return Err(Error::NotCoprime(q, p));
        }
        occupancy.push(q.rem_euclid(p));
    }
    unit_class_data(p, classes, &occupancy)
}

/// Partition data where every unit is its own class; occupancy counts the
/// `values` landing on each unit.
fn unit_count_partition(modulus: i64, values: &[i64]) -> Result<UnitClassData> {
    if modulus < 1 {
        return Err(Error::NonPositive("modulus", modulus));
    }
    if modulus > MAX_ENUMERABLE_ORDER {
        return Err(Error::OrderTooLarge(modulus, MAX_ENUMERABLE_ORDER));
    }
    let units = units_mod(modulus)?;
    let classes: Vec<Vec<i64>> = units.residues().iter().map(|&u| vec![u]).collect();
    let mut occupancy = Vec::with_capacity(values.len());
    for &v in values {
        if gcd(v, modulus) != 1 {
            return Err(Error::NotCoprime(v, modulus));
        }
        occupancy.push(v.rem_euclid(modulus));
    }
    unit_class_data(modulus, classes, &occupancy)
}

/// Iso-degrees of a sum of lens spaces of one order `p`: the integers whose
/// residue class stabilizes the occupancy partition.
pub fn d_iso_lens_group(p: i64, qs: &[i64]) -> Result<DegreeSet> {
    if qs.is_empty() {
        return Err(Error::Invalid(
            "a lens summand group needs at least one member".to_string(),
        ));
    }
    let data = lens_class_partition(p, qs)?;
    Ok(DegreeSet::Periodic(data.residues().clone()))
}

/// Iso-degrees of `m` parallel plus `n` reversed copies of one non-cyclic
/// spherical piece: the piece's iso set, symmetrized when `m = n`.
pub fn d_iso_oriented_pair_group(group: &SphericalGroup, m: u32, n: u32) -> Result<DegreeSet> {
    if matches!(group, SphericalGroup::Lens { .. }) {
        return Err(Error::Invalid(
            "cyclic pieces are grouped by order and use the class-partition rule".to_string(),
        ));
    }
    if m + n == 0 {
        return Err(Error::Invalid(
            "need at least one copy of the piece".to_string(),
        ));
    }
    let iso = iso_residues(group)?;
    let residues = if m == n { iso.union(&iso.negate()) } else { iso };
    Ok(DegreeSet::Periodic(residues))
}

fn is_double_projective_sum(pieces: &[(ManifoldDesc, u32)]) -> bool {
    pieces
        == [(
            ManifoldDesc::Spherical {
                group: SphericalGroup::Lens { p: 2, q: 1 },
                reversed: false,
            },
            2,
        )]
}

/// Degree set of a connected sum whose pieces all carry spherical or
/// `S2 x S1` geometry: the intersection of the per-group iso sets. The sum
/// of two real projective spaces is excluded here; it has every integer as
/// a degree and is dispatched before this rule.
pub fn d_connected_sum(desc: &ManifoldDesc) -> Result<DegreeSet> {
    let canon = canonicalize(desc);
    let ManifoldDesc::ConnectedSum { pieces } = &canon else {
        return Err(Error::Invalid(
            "need a connected sum of at least two prime pieces".to_string(),
        ));
    };
    if is_double_projective_sum(pieces) {
        return Err(Error::Unsupported(
            "the sum of two copies of L(2,1) has every integer as a degree and bypasses the intersection rule"
                .to_string(),
        ));
    }

    let mut lens_groups: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let mut pair_groups: BTreeMap<SphericalGroup, (u32, u32)> = BTreeMap::new();
    let mut total: u64 = 0;
    for (piece, mult) in pieces {
        total += u64::from(*mult);
        match piece {
            ManifoldDesc::S2xS1 => {}
            ManifoldDesc::Spherical {
                group: SphericalGroup::Lens { p, q },
                ..
            } => {
                lens_groups
                    .entry(*p)
                    .or_default()
                    .extend(std::iter::repeat(*q).take(*mult as usize));
            }
            ManifoldDesc::Spherical { group, reversed } => {
                let entry = pair_groups.entry(group.clone()).or_insert((0, 0));
                if *reversed {
                    entry.1 += mult;
                } else {
                    entry.0 += mult;
                }
            }
            _ => {
                return Err(Error::Unsupported(
                    "connected sums are computed when every piece is a spherical space form or S2xS1"
                        .to_string(),
                ))
            }
        }
    }
    if total < 2 {
        return Err(Error::Invalid(
            "a connected sum needs at least two prime pieces counting multiplicity".to_string(),
        ));
    }

    let mut factors = Vec::new();
    for (group, (m, n)) in &pair_groups {
        factors.push(d_iso_oriented_pair_group(group, *m, *n)?);
    }
    for (p, qs) in &lens_groups {
        factors.push(d_iso_lens_group(*p, qs)?);
    }
    Ok(degset::normalize(&DegreeSet::Intersection(factors)))
}

fn unit_times_form(k: i64, delta: i64) -> DegreeSet {
    DegreeSet::UnitTimesForm {
        unit_modulus: k,
        form: BinaryForm::new(1, -delta, 1),
    }
}

/// Degree set of the mapping torus of `[a,b;c,d]`, determinant 1, by the
/// trace: all integers for involutions, a unit-times-form set for the other
/// finite orders, all squares in the parabolic case, and the conditioned
/// form image in the hyperbolic case.
pub fn d_torus_bundle(a: i64, b: i64, c: i64, d: i64) -> Result<DegreeSet> {
    let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
    if det != 1 {
        return Err(Error::BadDeterminant {
            a,
            b,
            c,
            d,
            det: i64::try_from(det).unwrap_or(i64::MAX),
        });
    }
    if (a, b, c, d) == (1, 0, 0, 1) || (a, b, c, d) == (-1, 0, 0, -1) {
        return Ok(DegreeSet::AllIntegers);
    }
    Ok(match (a as i128) + (d as i128) {
        1 => unit_times_form(6, 1),
        0 => unit_times_form(4, 0),
        -1 => unit_times_form(3, 1),
        2 | -2 => DegreeSet::SquaresOf(IntegerPredicate::All),
        _ => {
            let conditions = SolConditions::new(a, b, c, d)?;
            DegreeSet::FormImage {
                form: conditions.integer_form(),
                conditions: Some(conditions),
            }
        }
    })
}

/// Degree set of a torus semi-bundle whose gluing matrix is already in one
/// of the canonical shapes.
pub fn d_torus_semibundle(a: i64, b: i64, c: i64, d: i64) -> Result<DegreeSet> {
    use IntegerPredicate::{All, Odd};
    Ok(match (a, b, c, d) {
        (1, 0, 0, 1) => DegreeSet::AllIntegers,
        (0, 1, 1, 0) => DegreeSet::periodic(2, [1])?,
        (1, 0, z, 1) if z != 0 => DegreeSet::SquaresOf(All),
        (0, 1, 1, z) | (1, z, 0, 1) if z != 0 => DegreeSet::SquaresOf(Odd),
        (a, b, c, d)
            if a != 0
                && b != 0
                && c != 0
                && d != 0
                && (a as i128) * (d as i128) - (b as i128) * (c as i128) == 1 =>
        {
            let g = gcd(a, d);
            let delta = ((a / g) as i128) * ((d / g) as i128);
            let delta = i64::try_from(delta).map_err(|_| {
                Error::Unsupported(format!(
                    "a*d/gcd(a,d)^2 for the gluing matrix [{a},{b};{c},{d}] overflows 64-bit arithmetic"
                ))
            })?;
            if delta % 2 == 0 {
                DegreeSet::SquaresOf(Odd)
            } else {
                DegreeSet::SquaresOf(Odd).union(DegreeSet::SquaresOf(Odd).scale(delta))
            }
        }
        _ => return Err(Error::NonCanonicalSemiBundle { a, b, c, d }),
    })
}

/// Degree set of a twisted circle bundle over one of the three singular
/// genus-zero orbifolds: squares of the values of the attached definite
/// form, filtered by the congruence on the root.
pub fn d_nil_seifert(desc: &ManifoldDesc) -> Result<DegreeSet> {
    let ManifoldDesc::Seifert { slopes, .. } = desc else {
        return Err(Error::Invalid("expected Seifert data".to_string()));
    };
    if classify(desc)? != Geometry::Nil {
        return Err(Error::Unsupported(
            "this rule needs twisted Seifert data over a flat genus-zero orbifold".to_string(),
        ));
    }
    let orders = singular_orders(slopes);
    Ok(DegreeSet::SquaresOf(match orders.as_slice() {
        [2, 3, 6] => IntegerPredicate::LoeschianOneMod6,
        [3, 3, 3] => IntegerPredicate::LoeschianOneMod3,
        [2, 4, 4] => IntegerPredicate::TwoSquaresOneMod4,
        _ => unreachable!("the geometry dispatch enforces the singular triple"),
    }))
}

/// Degree set of an untwisted Seifert fibration over a hyperbolic base:
/// for each singular-fiber order, the integers stabilizing the occupancy
/// counts of the slope numerators among the units, merged over all orders.
pub fn d_h2e1(desc: &ManifoldDesc) -> Result<DegreeSet> {
    let ManifoldDesc::Seifert { slopes, .. } = desc else {
        return Err(Error::Invalid("expected Seifert data".to_string()));
    };
    if classify(desc)? != Geometry::H2xE1 {
        return Err(Error::Unsupported(
            "this rule needs a vanishing twisting number over a hyperbolic base".to_string(),
        ));
    }
    let mut by_alpha: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for &(beta, alpha) in slopes {
        if alpha >= 2 {
            by_alpha.entry(alpha).or_default().push(beta);
        }
    }
    let mut merged: Option<ResidueSet> = None;
    for (alpha, betas) in &by_alpha {
        let data = unit_count_partition(*alpha, betas)?;
        let next = data.residues().clone();
        merged = Some(match merged {
            Some(acc) => crt_merge(&acc, &next),
            None => next,
        });
    }
    Ok(match merged {
        Some(rs) => degset::normalize(&DegreeSet::Periodic(rs)),
        None => DegreeSet::AllIntegers,
    })
}

/// The set of self-mapping degrees of the described manifold.
///
/// Descriptions outside the computable families (twisted fibrations over
/// hyperbolic bases, sums with such pieces) come back as the two-sided
/// band: degree 1 and 0 always occur, nothing of larger magnitude does,
/// and -1 is left undecided.
pub fn degrees(desc: &ManifoldDesc) -> Result<DegreeSet> {
    if let Some(v) = crate::manifold::validate(desc).into_iter().next() {
        return Err(Error::Invalid(v.to_string()));
    }
    let canon = canonicalize(desc);
    Ok(match &canon {
        ManifoldDesc::S2xS1 => DegreeSet::AllIntegers,
        ManifoldDesc::Spherical { group, .. } => d_spherical(group)?,
        ManifoldDesc::ConnectedSum { pieces } => {
            if is_double_projective_sum(pieces) {
                DegreeSet::AllIntegers
            } else if pieces.iter().all(|(piece, _)| {
                matches!(piece, ManifoldDesc::S2xS1 | ManifoldDesc::Spherical { .. })
            }) {
                d_connected_sum(&canon)?
            } else {
                DegreeSet::TrivialBand
            }
        }
        ManifoldDesc::TorusBundle { a, b, c, d } => d_torus_bundle(*a, *b, *c, *d)?,
        ManifoldDesc::TorusSemiBundle { a, b, c, d } => d_torus_semibundle(*a, *b, *c, *d)?,
        ManifoldDesc::Seifert { .. } => match classify(&canon)? {
            Geometry::Nil => d_nil_seifert(&canon)?,
            Geometry::H2xE1 => d_h2e1(&canon)?,
            Geometry::PslOrOther => DegreeSet::TrivialBand,
            other => {
                return Err(Error::Unsupported(format!(
                    "Seifert data classified as {other} should use its dedicated syntax"
                )))
            }
        },
    })
}

/// Whether a degree -1 self-map exists; undecided exactly on the band.
pub fn minus_one_in(desc: &ManifoldDesc) -> Result<Membership> {
    Ok(degrees(desc)?.contains(-1))
}

/// Orientation-reversal facts for a lens space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReversalReport {
    /// Some self-map has degree -1.
    pub has_degree_minus_one: bool,
    /// An orientation-reversing self-homeomorphism exists.
    pub has_orientation_reversing_homeo: bool,
    /// Every degree -1 self-map is homotopic to such a homeomorphism.
    pub every_deg_minus_one_homotopic_to_homeo: bool,
}

/// The three reversal predicates for `L(p, q)`:
/// a degree -1 self-map exists iff -1 is a square modulo `p`;
/// an orientation-reversing homeomorphism exists iff `q^2 = -1 (mod p)`;
/// and the two notions coincide map-by-map iff additionally `p` is
/// 1, 2, a power of a prime congruent to 1 mod 4, or twice one.
pub fn lens_reversal_report(p: i64, q: i64) -> Result<ReversalReport> {
    if p < 1 {
        return Err(Error::NonPositive("lens order", p));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    if p > MAX_ENUMERABLE_ORDER {
        return Err(Error::OrderTooLarge(p, MAX_ENUMERABLE_ORDER));
    }
    let has_minus_one = (0..p).any(|h| (mul_mod(h, h, p) + 1) % p == 0);
    let qm = q.rem_euclid(p);
    let has_homeo = (mul_mod(qm, qm, p) + 1) % p == 0;
    let shape_ok = match factorize(p)?.factors.as_slice() {
        [] => true,
        [(2, 1)] => true,
        [(p1, _)] => p1 % 4 == 1,
        [(2, 1), (p1, _)] => p1 % 4 == 1,
        _ => false,
    };
    let report = ReversalReport {
        has_degree_minus_one: has_minus_one,
        has_orientation_reversing_homeo: has_homeo,
        every_deg_minus_one_homotopic_to_homeo: has_homeo && shape_ok,
    };
    debug_assert!(!report.has_orientation_reversing_homeo || report.has_degree_minus_one);
    Ok(report)
}
