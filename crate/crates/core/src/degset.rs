//! Symbolic degree sets and their algebra.
//!
//! A [`DegreeSet`] denotes a subset of `Z` closed under the operations the
//! engine needs: periodic residue sets, squares filtered by a predicate,
//! value sets of binary forms (optionally constrained by the side conditions
//! attached to a hyperbolic gluing matrix), unit-scaled form values, and
//! unions/intersections/negations/scalings of these. [`DegreeSet::TrivialBand`]
//! stands for the manifolds with no self-map of degree above 1, where the set
//! is pinned between `{0,1}` and `{0,1,-1}` and membership of `-1` is left
//! undecided.

use crate::forms::{
    self, fundamental_automorph, is_loeschian, is_sum_two_squares, represents, BinaryForm,
};
use crate::numth::{is_perfect_square, ResidueSet};
use crate::{Error, Result};

/// Three-valued membership answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl From<bool> for Membership {
    fn from(b: bool) -> Self {
        if b {
            Membership::In
        } else {
            Membership::Out
        }
    }
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Membership::In => "true",
            Membership::Out => "false",
            Membership::Unknown => "unknown",
        })
    }
}

/// Predicate applied to the non-negative square root in [`DegreeSet::SquaresOf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntegerPredicate {
    All,
    Odd,
    /// `l = m^2 + mn + n^2` with `l = 1 mod 6`.
    LoeschianOneMod6,
    /// `l = m^2 + mn + n^2` with `l = 1 mod 3`.
    LoeschianOneMod3,
    /// `l = m^2 + n^2` with `l = 1 mod 4`.
    TwoSquaresOneMod4,
}

impl IntegerPredicate {
    pub fn test(&self, l: i64) -> bool {
        match self {
            IntegerPredicate::All => true,
            IntegerPredicate::Odd => l.rem_euclid(2) == 1,
            IntegerPredicate::LoeschianOneMod6 => l.rem_euclid(6) == 1 && is_loeschian(l),
            IntegerPredicate::LoeschianOneMod3 => l.rem_euclid(3) == 1 && is_loeschian(l),
            IntegerPredicate::TwoSquaresOneMod4 => l.rem_euclid(4) == 1 && is_sum_two_squares(l),
        }
    }
}

/// The side conditions a hyperbolic torus-bundle gluing `[a,b;c,d]` imposes
/// on solutions `(p, r)` of `c p^2 + (d-a) pr - b r^2 = c n`: either
/// `c | br` and `c | (d-a)r`, or `c | p(d-a) - br`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolConditions {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

/// Largest gluing-matrix entry accepted for the hyperbolic case. Membership
/// walks solution orbits modulo `|c|`, so the cost grows with the entries;
/// beyond this the exact check stops being interactive.
pub const MAX_SOL_ENTRY: i64 = 10_000;

impl SolConditions {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
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
        if ((a as i128) + (d as i128)).abs() <= 2 {
            return Err(Error::Unsupported(format!(
                "matrix [{a},{b};{c},{d}] has |trace| <= 2 and carries no side conditions"
            )));
        }
        if [a, b, c, d].iter().any(|e| e.unsigned_abs() > MAX_SOL_ENTRY as u64) {
            return Err(Error::Unsupported(format!(
                "gluing matrix entries beyond {MAX_SOL_ENTRY} in absolute value are not supported"
            )));
        }
        Ok(SolConditions { a, b, c, d })
    }

    pub fn matrix(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// The integer form `c p^2 + (d-a) pr - b r^2` whose value at an
    /// admissible solution is `c` times the degree.
    pub fn integer_form(&self) -> BinaryForm {
        BinaryForm::new(self.c, self.d - self.a, -self.b)
    }

    /// Both conditions only depend on `(p, r)` modulo `c`, and both are
    /// invariant under negating the pair.
    fn satisfied(&self, p: i64, r: i64) -> bool {
        let c = self.c as i128;
        let (p, r) = (p as i128, r as i128);
        let (b, da) = (self.b as i128, (self.d - self.a) as i128);
        ((b * r) % c == 0 && (da * r) % c == 0) || ((p * da - b * r) % c == 0)
    }
}

/// A symbolic subset of `Z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DegreeSet {
    AllIntegers,
    Periodic(ResidueSet),
    SquaresOf(IntegerPredicate),
    /// Values `n` with `form(p, r) = n` (no conditions), or, with conditions
    /// present, `form(p, r) = c n` for a solution satisfying them.
    FormImage {
        form: BinaryForm,
        conditions: Option<SolConditions>,
    },
    /// `{ (kt + 1) * v : t in Z, v a value of form }`.
    UnitTimesForm { unit_modulus: i64, form: BinaryForm },
    Scaled(i64, Box<DegreeSet>),
    Negated(Box<DegreeSet>),
    Union(Vec<DegreeSet>),
    Intersection(Vec<DegreeSet>),
    /// `{0,1}` contained in the set, `{0,1,-1}` containing it; `-1` undecided.
    TrivialBand,
}

impl DegreeSet {
    pub fn periodic(modulus: i64, residues: impl IntoIterator<Item = i64>) -> Result<Self> {
        Ok(DegreeSet::Periodic(ResidueSet::new(modulus, residues)?))
    }

    /// Membership, exact except inside the trivial band where `-1` is
    /// genuinely undecided.
    pub fn contains(&self, d: i64) -> Membership {
        use Membership::*;
        match self {
            DegreeSet::AllIntegers => In,
            DegreeSet::Periodic(rs) => rs.contains(d).into(),
            DegreeSet::SquaresOf(pred) => match is_perfect_square(d) {
                Some(l) => pred.test(l).into(),
                None => Out,
            },
            DegreeSet::FormImage {
                form,
                conditions: None,
            } => represents(form, d).map(Membership::from).unwrap_or(Out),
            DegreeSet::FormImage {
                form,
                conditions: Some(sc),
            } => sol_member(form, sc, d).into(),
            DegreeSet::UnitTimesForm { unit_modulus, form } => {
                unit_times_form_member(*unit_modulus, form, d).into()
            }
            DegreeSet::Scaled(c, inner) => {
                if *c == 0 {
                    // {0 * s}: treated as {0}; engine-built operands are nonempty.
                    return (d == 0).into();
                }
                if d % c != 0 {
                    Out
                } else {
                    inner.contains(d / c)
                }
            }
            DegreeSet::Negated(inner) => match d.checked_neg() {
                Some(nd) => inner.contains(nd),
                None => Out,
            },
            DegreeSet::Union(children) => {
                let mut unknown = false;
                for ch in children {
                    match ch.contains(d) {
                        In => return In,
                        Unknown => unknown = true,
                        Out => {}
                    }
                }
                if unknown {
                    Unknown
                } else {
                    Out
                }
            }
            DegreeSet::Intersection(children) => {
                let mut unknown = false;
                for ch in children {
                    match ch.contains(d) {
                        Out => return Out,
                        Unknown => unknown = true,
                        In => {}
                    }
                }
                if unknown {
                    Unknown
                } else {
                    In
                }
            }
            DegreeSet::TrivialBand => match d {
                0 | 1 => In,
                -1 => Unknown,
                _ => Out,
            },
        }
    }

    pub fn union(self, other: DegreeSet) -> DegreeSet {
        DegreeSet::Union(vec![self, other])
    }

    pub fn intersect(self, other: DegreeSet) -> DegreeSet {
        DegreeSet::Intersection(vec![self, other])
    }

    pub fn negate(self) -> DegreeSet {
        DegreeSet::Negated(Box::new(self))
    }

    pub fn scale(self, c: i64) -> DegreeSet {
        DegreeSet::Scaled(c, Box::new(self))
    }

    fn has_band(&self) -> bool {
        match self {
            DegreeSet::TrivialBand => true,
            DegreeSet::Scaled(_, inner) | DegreeSet::Negated(inner) => inner.has_band(),
            DegreeSet::Union(ch) | DegreeSet::Intersection(ch) => {
                ch.iter().any(DegreeSet::has_band)
            }
            _ => false,
        }
    }
}

fn unit_times_form_member(k: i64, form: &BinaryForm, d: i64) -> bool {
    if d == 0 {
        return true; // v = 0 at the origin
    }
    // d = u * v with v a positive divisor and u = 1 mod k.
    let ad = d.abs();
    let mut i = 1i64;
    while i * i <= ad {
        if ad % i == 0 {
            for v in [i, ad / i] {
                let u = d / v;
                if (u - 1).rem_euclid(k) == 0 && represents(form, v).unwrap_or(false) {
                    return true;
                }
            }
        }
        i += 1;
    }
    false
}

/// Membership for the hyperbolic gluing row: some solution of
/// `form(p, r) = c n` must satisfy the side conditions. Orbit representatives
/// come from the reduction machinery; the rest of each orbit is walked
/// modulo `|c|`, where the automorph action is a permutation, so iterating
/// until the start pair recurs covers the whole orbit in both directions.
fn sol_member(form: &BinaryForm, sc: &SolConditions, n: i64) -> bool {
    let (_, _, c, _) = sc.matrix();
    let target = match c.checked_mul(n) {
        Some(t) => t,
        None => return false,
    };
    let reps = match forms::solution_orbit_reps(form, target) {
        Ok(reps) => reps,
        Err(_) => return false,
    };
    let l = c.abs();
    if l == 1 {
        return !reps.is_empty();
    }
    let auto = fundamental_automorph(form).expect("hyperbolic form has automorphs");
    let m = auto.0;
    for (p0, r0) in reps {
        let start = (
            (p0.rem_euclid(l as i128)) as i64,
            (r0.rem_euclid(l as i128)) as i64,
        );
        let mut cur = start;
        let mut steps = 0i64;
        loop {
            if sc.satisfied(cur.0, cur.1) {
                return true;
            }
            cur = (
                (m[0][0] * cur.0 + m[0][1] * cur.1).rem_euclid(l),
                (m[1][0] * cur.0 + m[1][1] * cur.1).rem_euclid(l),
            );
            steps += 1;
            if cur == start {
                break;
            }
            debug_assert!(steps <= l * l + 1, "orbit walk exceeded the group size");
            if steps > l * l + 1 {
                break;
            }
        }
    }
    false
}

/// Members of `set` in `[lo, hi]`, ascending. Sets involving the trivial
/// band are rejected: their exact extent is not known.
pub fn enumerate(set: &DegreeSet, lo: i64, hi: i64) -> Result<Vec<i64>> {
    if set.has_band() {
        return Err(Error::BandNotEnumerable);
    }
    if lo > hi {
        return Err(Error::EmptyRange(lo, hi));
    }
    Ok((lo..=hi)
        .filter(|&d| set.contains(d) == Membership::In)
        .collect())
}

/// Structural canonicalization: residue components are folded together and
/// rewritten on their minimal modulus, negation is pushed through residue
/// sets and set operations, stale wrappers are unwrapped, and n-ary
/// operations are flattened, sorted, and deduplicated. Form-based components
/// stay symbolic. Membership is unchanged.
pub fn normalize(set: &DegreeSet) -> DegreeSet {
    match set {
        DegreeSet::AllIntegers => DegreeSet::AllIntegers,
        DegreeSet::Periodic(rs) => {
            if rs.is_full() {
                return DegreeSet::AllIntegers;
            }
            DegreeSet::Periodic(rs.minimal())
        }
        DegreeSet::SquaresOf(_) | DegreeSet::FormImage { .. } | DegreeSet::UnitTimesForm { .. } => {
            set.clone()
        }
        DegreeSet::TrivialBand => DegreeSet::TrivialBand,
        DegreeSet::Scaled(c, inner) => {
            let inner = normalize(inner);
            match *c {
                1 => inner,
                -1 => normalize(&DegreeSet::Negated(Box::new(inner))),
                c => DegreeSet::Scaled(c, Box::new(inner)),
            }
        }
        DegreeSet::Negated(inner) => match normalize(inner) {
            DegreeSet::AllIntegers => DegreeSet::AllIntegers,
            DegreeSet::Periodic(rs) => normalize(&DegreeSet::Periodic(rs.negate())),
            DegreeSet::Negated(x) => *x,
            DegreeSet::Union(ch) => normalize(&DegreeSet::Union(
                ch.into_iter().map(|s| s.negate()).collect(),
            )),
            DegreeSet::Intersection(ch) => normalize(&DegreeSet::Intersection(
                ch.into_iter().map(|s| s.negate()).collect(),
            )),
            other => DegreeSet::Negated(Box::new(other)),
        },
        DegreeSet::Union(children) => {
            let mut flat: Vec<DegreeSet> = Vec::new();
            for ch in children {
                match normalize(ch) {
                    DegreeSet::AllIntegers => return DegreeSet::AllIntegers,
                    DegreeSet::Union(sub) => flat.extend(sub),
                    other => flat.push(other),
                }
            }
            // Fold all periodic components into one residue union.
            let mut periodic: Option<ResidueSet> = None;
            let mut rest = Vec::new();
            for ch in flat {
                match ch {
                    DegreeSet::Periodic(rs) => {
                        periodic = Some(match periodic {
                            None => rs,
                            Some(acc) => acc.union(&rs),
                        });
                    }
                    other => rest.push(other),
                }
            }
            if let Some(rs) = periodic {
                match normalize(&DegreeSet::Periodic(rs)) {
                    DegreeSet::AllIntegers => return DegreeSet::AllIntegers,
                    folded => rest.push(folded),
                }
            }
            rest.sort();
            rest.dedup();
            match rest.len() {
                1 => rest.pop().unwrap(),
                _ => DegreeSet::Union(rest),
            }
        }
        DegreeSet::Intersection(children) => {
            let mut flat: Vec<DegreeSet> = Vec::new();
            for ch in children {
                match normalize(ch) {
                    DegreeSet::AllIntegers => {}
                    DegreeSet::Intersection(sub) => flat.extend(sub),
                    other => flat.push(other),
                }
            }
            let mut periodic: Option<ResidueSet> = None;
            let mut rest = Vec::new();
            for ch in flat {
                match ch {
                    DegreeSet::Periodic(rs) => {
                        periodic = Some(match periodic {
                            None => rs,
                            Some(acc) => crate::numth::crt_merge(&acc, &rs),
                        });
                    }
                    other => rest.push(other),
                }
            }
            if let Some(rs) = periodic {
                match normalize(&DegreeSet::Periodic(rs)) {
                    DegreeSet::AllIntegers => {}
                    folded => rest.push(folded),
                }
            }
            rest.sort();
            rest.dedup();
            match rest.len() {
                0 => DegreeSet::AllIntegers,
                1 => rest.pop().unwrap(),
                _ => DegreeSet::Intersection(rest),
            }
        }
    }
}

fn fmt_term(coef: i64, var: &str, lead: bool) -> String {
    match (coef, lead) {
        (0, _) => String::new(),
        (1, true) => var.to_string(),
        (-1, true) => format!("-{var}"),
        (c, true) => format!("{c}{var}"),
        (1, false) => format!(" + {var}"),
        (-1, false) => format!(" - {var}"),
        (c, false) if c > 0 => format!(" + {c}{var}"),
        (c, false) => format!(" - {}{var}", -c),
    }
}

fn fmt_form(form: &BinaryForm, x: &str, y: &str) -> String {
    let (a, b, c) = form.coefficients();
    let xx = format!("{x}^2");
    let xy = format!("{x}{y}");
    let yy = format!("{y}^2");
    let mut out = fmt_term(a, &xx, true);
    out.push_str(&fmt_term(b, &xy, out.is_empty()));
    out.push_str(&fmt_term(c, &yy, out.is_empty()));
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Deterministic text rendering. Equal sets render identically; feeding the
/// set through [`normalize`] first gives the canonical text.
pub fn describe(set: &DegreeSet) -> String {
    match set {
        DegreeSet::AllIntegers => "Z".to_string(),
        DegreeSet::Periodic(rs) => {
            if rs.is_full() {
                return "Z".to_string();
            }
            if rs.is_empty() {
                return "\u{2205}".to_string();
            }
            let body = rs
                .residues()
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            format!("{}Z + {{{body}}}", rs.modulus())
        }
        DegreeSet::SquaresOf(pred) => match pred {
            IntegerPredicate::All => "{ l^2 : l in Z }".to_string(),
            IntegerPredicate::Odd => "{ l^2 : l odd }".to_string(),
            IntegerPredicate::LoeschianOneMod6 => {
                "{ l^2 : l = m^2+mn+n^2, l \u{2261} 1 (mod 6) }".to_string()
            }
            IntegerPredicate::LoeschianOneMod3 => {
                "{ l^2 : l = m^2+mn+n^2, l \u{2261} 1 (mod 3) }".to_string()
            }
            IntegerPredicate::TwoSquaresOneMod4 => {
                "{ l^2 : l = m^2+n^2, l \u{2261} 1 (mod 4) }".to_string()
            }
        },
        DegreeSet::FormImage {
            form,
            conditions: None,
        } => format!("{{ {} : x,y in Z }}", fmt_form(form, "x", "y")),
        DegreeSet::FormImage {
            form,
            conditions: Some(sc),
        } => {
            let (a, b, c, d) = sc.matrix();
            if c.abs() == 1 {
                let scaled = BinaryForm::new(1, (d - a) * c, -b * c);
                format!("{{ {} : p,r in Z }}", fmt_form(&scaled, "p", "r"))
            } else {
                format!(
                    "{{ ({})/{} : p,r in Z, ({}r \u{2261} 0 and {}r \u{2261} 0) or ({}p - {}r \u{2261} 0) (mod {}) }}",
                    fmt_form(form, "p", "r"),
                    c,
                    b,
                    d - a,
                    d - a,
                    b,
                    c
                )
            }
        }
        DegreeSet::UnitTimesForm { unit_modulus, form } => {
            format!(
                "{{ ({}t+1)({}) : t,p,q in Z }}",
                unit_modulus,
                fmt_form(form, "p", "q")
            )
        }
        DegreeSet::Scaled(c, inner) => format!("{c}\u{b7}{}", describe(inner)),
        DegreeSet::Negated(inner) => format!("-({})", describe(inner)),
        DegreeSet::Union(children) => children
            .iter()
            .map(describe)
            .collect::<Vec<_>>()
            .join(" \u{222a} "),
        DegreeSet::Intersection(children) => children
            .iter()
            .map(describe)
            .collect::<Vec<_>>()
            .join(" \u{2229} "),
        DegreeSet::TrivialBand => {
            "{0,1} \u{2286} D \u{2286} {0,1,-1} (no self-map of degree > 1; -1 undecided)"
                .to_string()
        }
    }
}
