//! Coordinate descriptions of the supported manifolds, their validation,
//! canonical forms, and geometry dispatch.

use crate::{Error, Result};
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedSub};

pub type Rational = Ratio<i64>;

/// Fundamental groups of the spherical space forms, with enough parameters
/// to pin the manifold down up to the orientation flag carried alongside.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SphericalGroup {
    /// Cyclic: the lens space `L(p, q)`, order `p`.
    Lens { p: i64, q: i64 },
    /// Binary dihedral `D*_{4n}`, order `4n`, `n >= 2`.
    DStar { n: i64 },
    /// Binary tetrahedral, order 24.
    T24,
    /// Binary octahedral, order 48.
    O48,
    /// Binary icosahedral, order 120.
    I120,
    /// `T'_{8 * 3^q}`, order `8 * 3^q`, `q >= 1`.
    TPrime { q: u32 },
    /// `D'_{n 2^q}`, order `n * 2^q`, odd `n >= 3`, `q >= 1`.
    DPrime { n: i64, q: u32 },
    /// `Z_m x inner` with `m >= 2` coprime to the inner order; the inner
    /// group is never cyclic (that product would be cyclic again).
    ProductZm { m: i64, inner: Box<SphericalGroup> },
}

impl SphericalGroup {
    pub fn order(&self) -> Result<i64> {
        let too_big = || Error::Unsupported("group order overflows i64".to_string());
        Ok(match self {
            SphericalGroup::Lens { p, .. } => *p,
            SphericalGroup::DStar { n } => n.checked_mul(4).ok_or_else(too_big)?,
            SphericalGroup::T24 => 24,
            SphericalGroup::O48 => 48,
            SphericalGroup::I120 => 120,
            SphericalGroup::TPrime { q } => 3i64
                .checked_pow(*q)
                .and_then(|t| t.checked_mul(8))
                .ok_or_else(too_big)?,
            SphericalGroup::DPrime { n, q } => 2i64
                .checked_pow(*q)
                .and_then(|t| t.checked_mul(*n))
                .ok_or_else(too_big)?,
            SphericalGroup::ProductZm { m, inner } => {
                inner.order()?.checked_mul(*m).ok_or_else(too_big)?
            }
        })
    }
}

/// A closed oriented 3-manifold in one of the supported coordinate families.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ManifoldDesc {
    S2xS1,
    Spherical {
        group: SphericalGroup,
        reversed: bool,
    },
    /// Prime pieces with multiplicities.
    ConnectedSum { pieces: Vec<(ManifoldDesc, u32)> },
    /// Torus bundle with gluing `[a,b;c,d]`, determinant 1.
    TorusBundle { a: i64, b: i64, c: i64, d: i64 },
    /// Torus semi-bundle; the matrix must already be in one of the canonical
    /// coordinate shapes (identity, antidiagonal, the three unipotent
    /// shapes, or the dense shape with `ad - bc = 1`).
    TorusSemiBundle { a: i64, b: i64, c: i64, d: i64 },
    /// Seifert fibration over a surface of the given genus with unnormalized
    /// slopes `beta/alpha`.
    Seifert {
        genus: u32,
        orientable: bool,
        slopes: Vec<(i64, i64)>,
    },
}

/// Geometry (or structural class) the degree computation dispatches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    S3,
    S2xE1,
    E3,
    Nil,
    Sol,
    H2xE1,
    /// Fibered over a hyperbolic base with twisting: no degree formula here.
    PslOrOther,
    NonPrime,
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Geometry::S3 => "S3",
            Geometry::S2xE1 => "S2xE1",
            Geometry::E3 => "E3",
            Geometry::Nil => "Nil",
            Geometry::Sol => "Sol",
            Geometry::H2xE1 => "H2xE1",
            Geometry::PslOrOther => "PSL-or-other",
            Geometry::NonPrime => "non-prime",
        })
    }
}

/// A single validation failure, with a human-readable position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub at: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.at, self.message)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    crate::numth::gcd(a, b)
}

fn validate_group(g: &SphericalGroup, at: &str, out: &mut Vec<Violation>) {
    fn violation(at: &str, msg: String) -> Violation {
        Violation {
            at: at.to_string(),
            message: msg,
        }
    }
    match g {
        SphericalGroup::Lens { p, q } => {
            if *p < 1 {
                out.push(violation(at, format!("lens order p must be >= 1, got {p}")));
            } else if gcd(*p, *q) != 1 {
                out.push(violation(
                    at,
                    format!("lens parameters ({p}, {q}) must be coprime"),
                ));
            }
        }
        SphericalGroup::DStar { n } => {
            if *n < 2 {
                out.push(violation(
                    at,
                    format!(
                        "D* needs n >= 2, got {n} (4n = {} is cyclic or dihedral-degenerate)",
                        4 * n
                    ),
                ));
            }
        }
        SphericalGroup::T24 | SphericalGroup::O48 | SphericalGroup::I120 => {}
        SphericalGroup::TPrime { q } => {
            if *q < 1 {
                out.push(violation(at, "T' needs q >= 1".to_string()));
            }
        }
        SphericalGroup::DPrime { n, q } => {
            if *n < 3 || n % 2 == 0 {
                out.push(violation(at, format!("D' needs odd n >= 3, got {n}")));
            }
            if *q < 1 {
                out.push(violation(at, "D' needs q >= 1".to_string()));
            }
        }
        SphericalGroup::ProductZm { m, inner } => {
            if *m < 2 {
                out.push(violation(at, format!("Z(m) factor needs m >= 2, got {m}")));
            }
            if matches!(**inner, SphericalGroup::Lens { .. }) {
                out.push(violation(
                    at,
                    "Z(m) x (cyclic) is cyclic: write it as a single lens space".to_string(),
                ));
            }
            validate_group(inner, at, out);
            if let Ok(ord) = inner.order() {
                if gcd(*m, ord) != 1 {
                    out.push(violation(
                        at,
                        format!("Z({m}) factor must be coprime to the group order {ord}"),
                    ));
                }
            }
        }
    }
    if let Err(e) = g.order() {
        out.push(violation(at, e.to_string()));
    }
}

fn det_i128(a: i64, b: i64, c: i64, d: i64) -> i128 {
    (a as i128) * (d as i128) - (b as i128) * (c as i128)
}

fn is_canonical_semibundle(a: i64, b: i64, c: i64, d: i64) -> bool {
    matches!((a, b, c, d), (1, 0, 0, 1) | (0, 1, 1, 0))
        || (b == 0 && a == 1 && d == 1 && c != 0)
        || (a == 0 && b == 1 && c == 1 && d != 0)
        || (a == 1 && c == 0 && d == 1 && b != 0)
        || (a != 0 && b != 0 && c != 0 && d != 0 && det_i128(a, b, c, d) == 1)
}

fn validate_at(desc: &ManifoldDesc, at: &str, top: bool, out: &mut Vec<Violation>) {
    match desc {
        ManifoldDesc::S2xS1 => {}
        ManifoldDesc::Spherical { group, .. } => validate_group(group, at, out),
        ManifoldDesc::ConnectedSum { pieces } => {
            if !top {
                out.push(Violation {
                    at: at.to_string(),
                    message: "connected sums must not nest".to_string(),
                });
                return;
            }
            if pieces.is_empty() {
                out.push(Violation {
                    at: at.to_string(),
                    message: "connected sum needs at least one piece".to_string(),
                });
            }
            for (i, (piece, mult)) in pieces.iter().enumerate() {
                let here = format!("piece {}", i + 1);
                if *mult < 1 {
                    out.push(Violation {
                        at: here.clone(),
                        message: "multiplicity must be >= 1".to_string(),
                    });
                }
                validate_at(piece, &here, false, out);
            }
        }
        ManifoldDesc::TorusBundle { a, b, c, d } => {
            let det = det_i128(*a, *b, *c, *d);
            if det != 1 {
                out.push(Violation {
                    at: at.to_string(),
                    message: format!("gluing matrix [{a},{b};{c},{d}] has determinant {det}, expected 1"),
                });
            }
        }
        ManifoldDesc::TorusSemiBundle { a, b, c, d } => {
            if !is_canonical_semibundle(*a, *b, *c, *d) {
                out.push(Violation {
                    at: at.to_string(),
                    message: format!("matrix [{a},{b};{c},{d}] is not one of the canonical semi-bundle shapes"),
                });
            }
        }
        ManifoldDesc::Seifert {
            genus,
            orientable,
            slopes,
        } => {
            if !orientable && *genus == 0 {
                out.push(Violation {
                    at: at.to_string(),
                    message: "a non-orientable base needs genus >= 1".to_string(),
                });
            }
            for (i, (beta, alpha)) in slopes.iter().enumerate() {
                let here = format!("{at}, slope {}", i + 1);
                if *alpha < 1 {
                    out.push(Violation {
                        at: here,
                        message: format!("slope denominator must be >= 1, got {alpha}"),
                    });
                } else if *alpha >= 2 && gcd(*beta, *alpha) != 1 {
                    out.push(Violation {
                        at: here,
                        message: format!("slope {beta}/{alpha} must be in lowest terms"),
                    });
                }
            }
        }
    }
}

/// Structural validation; an empty list means the description is admissible.
pub fn validate(desc: &ManifoldDesc) -> Vec<Violation> {
    let mut out = Vec::new();
    validate_at(desc, "manifold", true, &mut out);
    out
}

/// Canonical form: lens parameters reduced into `[0, p)` with orientation
/// reversal rewritten as `L(p, p-q)`, singleton sums unwrapped, sum pieces
/// canonicalized, merged, and sorted.
pub fn canonicalize(desc: &ManifoldDesc) -> ManifoldDesc {
    match desc {
        ManifoldDesc::Spherical {
            group: SphericalGroup::Lens { p, q },
            reversed,
        } => {
            let p = *p;
            let mut q = if p == 0 { *q } else { q.rem_euclid(p) };
            if *reversed && p > 0 {
                q = (p - q).rem_euclid(p);
            }
            ManifoldDesc::Spherical {
                group: SphericalGroup::Lens { p, q },
                reversed: false,
            }
        }
        ManifoldDesc::ConnectedSum { pieces } => {
            let mut merged: Vec<(ManifoldDesc, u32)> = Vec::new();
            for (piece, mult) in pieces {
                let canon = canonicalize(piece);
                match merged.iter_mut().find(|(p, _)| *p == canon) {
                    Some((_, m)) => *m += mult,
                    None => merged.push((canon, *mult)),
                }
            }
            merged.sort();
            if merged.len() == 1 && merged[0].1 == 1 {
                return merged.pop().unwrap().0;
            }
            ManifoldDesc::ConnectedSum { pieces: merged }
        }
        other => other.clone(),
    }
}

/// Sum of the slope fractions, exactly.
pub fn euler_number(desc: &ManifoldDesc) -> Result<Rational> {
    let ManifoldDesc::Seifert { slopes, .. } = desc else {
        return Err(Error::Invalid(
            "euler_number is defined for Seifert descriptions".to_string(),
        ));
    };
    let mut e = Rational::new(0, 1);
    for (beta, alpha) in slopes {
        if *alpha < 1 {
            return Err(Error::NonPositive("slope denominator", *alpha));
        }
        e = e.checked_add(&Rational::new(*beta, *alpha)).ok_or_else(|| {
            Error::Unsupported("slope fractions overflow exact rational arithmetic".to_string())
        })?;
    }
    Ok(e)
}

/// Orbifold Euler characteristic of the base, exactly.
pub fn orbifold_chi(desc: &ManifoldDesc) -> Result<Rational> {
    let ManifoldDesc::Seifert {
        genus,
        orientable,
        slopes,
    } = desc
    else {
        return Err(Error::Invalid(
            "orbifold_chi is defined for Seifert descriptions".to_string(),
        ));
    };
    let g = *genus as i64;
    let mut chi = Rational::new(if *orientable { 2 - 2 * g } else { 2 - g }, 1);
    for (_, alpha) in slopes {
        if *alpha < 1 {
            return Err(Error::NonPositive("slope denominator", *alpha));
        }
        if *alpha >= 2 {
            chi = chi
                .checked_sub(&Rational::new(*alpha - 1, *alpha))
                .ok_or_else(|| {
                    Error::Unsupported(
                        "slope fractions overflow exact rational arithmetic".to_string(),
                    )
                })?;
        }
    }
    Ok(chi)
}

/// The multiset of singular fiber orders (alpha >= 2), ascending.
pub(crate) fn singular_orders(slopes: &[(i64, i64)]) -> Vec<i64> {
    let mut orders: Vec<i64> = slopes
        .iter()
        .map(|&(_, alpha)| alpha)
        .filter(|&a| a >= 2)
        .collect();
    orders.sort_unstable();
    orders
}

const NIL_TRIPLES: [[i64; 3]; 3] = [[2, 3, 6], [3, 3, 3], [2, 4, 4]];

/// Geometry dispatch. Assumes `validate` passed. Seifert data whose geometry
/// is handled by a different coordinate family is rejected with guidance.
pub fn classify(desc: &ManifoldDesc) -> Result<Geometry> {
    Ok(match desc {
        ManifoldDesc::S2xS1 => Geometry::S2xE1,
        ManifoldDesc::Spherical { .. } => Geometry::S3,
        ManifoldDesc::ConnectedSum { pieces } => {
            if pieces.len() == 1 && pieces[0].1 == 1 {
                return classify(&pieces[0].0);
            }
            Geometry::NonPrime
        }
        ManifoldDesc::TorusBundle { a, b, c, d } => {
            let det = det_i128(*a, *b, *c, *d);
            if det != 1 {
                return Err(Error::BadDeterminant {
                    a: *a,
                    b: *b,
                    c: *c,
                    d: *d,
                    det: i64::try_from(det).unwrap_or(i64::MAX),
                });
            }
            let tr = (*a as i128) + (*d as i128);
            let identity = (*a, *b, *c, *d) == (1, 0, 0, 1) || (*a, *b, *c, *d) == (-1, 0, 0, -1);
            if identity || tr.abs() <= 1 {
                Geometry::E3
            } else if tr.abs() == 2 {
                Geometry::Nil
            } else {
                Geometry::Sol
            }
        }
        ManifoldDesc::TorusSemiBundle { a, b, c, d } => match (*a, *b, *c, *d) {
            (1, 0, 0, 1) | (0, 1, 1, 0) => Geometry::E3,
            (1, 0, _, 1) | (0, 1, 1, _) | (1, _, 0, 1) => Geometry::Nil,
            (a, b, c, d) if a != 0 && b != 0 && c != 0 && d != 0 && det_i128(a, b, c, d) == 1 => {
                Geometry::Sol
            }
            (a, b, c, d) => return Err(Error::NonCanonicalSemiBundle { a, b, c, d }),
        },
        ManifoldDesc::Seifert {
            genus,
            orientable,
            slopes,
        } => {
            let e = euler_number(desc)?;
            let chi = orbifold_chi(desc)?;
            let zero = Rational::new(0, 1);
            if chi > zero {
                return Err(Error::Unsupported(
                    "Seifert data over a spherical base: use the lens/spherical syntax instead"
                        .to_string(),
                ));
            }
            if chi == zero {
                if e == zero {
                    return Err(Error::Unsupported(
                        "flat Seifert data: describe this manifold as a torus (semi-)bundle via TB/TSB"
                            .to_string(),
                    ));
                }
                let orders = singular_orders(slopes);
                let is_triple = orders.len() == 3
                    && NIL_TRIPLES.iter().any(|t| t.as_slice() == orders.as_slice());
                if !(*orientable && *genus == 0 && is_triple) {
                    return Err(Error::Unsupported(
                        "this Nil Seifert data is a torus (semi-)bundle: describe it via TB/TSB"
                            .to_string(),
                    ));
                }
                Geometry::Nil
            } else if e == zero {
                Geometry::H2xE1
            } else {
                Geometry::PslOrOther
            }
        }
    })
}
