//! Integral binary quadratic forms.
//!
//! Two definite model forms are decided by factorization criteria:
//! `x^2 + xy + y^2` (values = Loeschian numbers) and `x^2 + y^2`.
//! Indefinite forms with positive non-square discriminant are decided by the
//! classical reduction-and-cycle algorithm: a form represents `n` iff for
//! some square divisor `e^2 | n` and some root `s` of `s^2 = disc mod 4|n'|`
//! (`n' = n/e^2`) the form `(n', s, (s^2 - disc)/(4n'))` lies in the proper
//! equivalence class of `f`, which for this discriminant range is decided by
//! comparing reduction cycles.

use crate::numth::{factorize, is_perfect_square};
use crate::{Error, Result};

/// The form `a x^2 + b xy + c y^2` with its discriminant cached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryForm {
    a: i64,
    b: i64,
    c: i64,
    disc: i64,
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        let disc = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        let disc = i64::try_from(disc).expect("discriminant fits in i64 at desk scale");
        BinaryForm { a, b, c, disc }
    }

    pub fn coefficients(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let (x, y) = (x as i128, y as i128);
        let v = self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y;
        i64::try_from(v).expect("form value fits in i64 at desk scale")
    }
}

/// A 2x2 integer matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        let m = self.0;
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Whether `n` is a value of `x^2 + xy + y^2`: every prime `p = 2 mod 3`
/// must divide `n` to an even power.
pub fn is_loeschian(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    if n == 0 {
        return true;
    }
    factorize(n)
        .expect("n > 0")
        .factors
        .iter()
        .all(|&(p, e)| p % 3 != 2 || e % 2 == 0)
}

/// Whether `n` is a sum of two squares: every prime `p = 3 mod 4` must
/// divide `n` to an even power.
pub fn is_sum_two_squares(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    if n == 0 {
        return true;
    }
    factorize(n)
        .expect("n > 0")
        .factors
        .iter()
        .all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// Minimal positive solution of `t^2 - d u^2 = 4` for non-square `d > 0`.
fn pell4_minimal(d: i64) -> (i64, i64) {
    let d = d as i128;
    let mut u: i128 = 1;
    loop {
        let v = d * u * u + 4;
        let r = isqrt128(v);
        if r * r == v {
            return (
                i64::try_from(r).expect("Pell t at desk scale"),
                i64::try_from(u).expect("Pell u at desk scale"),
            );
        }
        u += 1;
    }
}

/// Generator of the proper automorph group of an indefinite form, from the
/// minimal solution of `t^2 - disc u^2 = 4`.
pub fn fundamental_automorph(f: &BinaryForm) -> Result<Mat2> {
    let d = f.discriminant();
    if d <= 0 || is_perfect_square(d).is_some() {
        return Err(Error::UnsupportedDiscriminant(d));
    }
    let (t, u) = pell4_minimal(d);
    let (a, b, c) = f.coefficients();
    Ok(Mat2([[(t - b * u) / 2, -c * u], [a * u, (t + b * u) / 2]]))
}

// ---- indefinite reduction and cycles -------------------------------------

type Form128 = (i128, i128, i128);
type Mat128 = [[i128; 2]; 2];

const ID128: Mat128 = [[1, 0], [0, 1]];

fn mul128(a: &Mat128, b: &Mat128) -> Mat128 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn isqrt128(n: i128) -> i128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Reduced indefinite form: `0 < b < sqrt(disc)` and
/// `sqrt(disc) - b < 2|a| < sqrt(disc) + b`, phrased with `q = isqrt(disc)`
/// (exact because the discriminant is never a square here).
fn is_reduced(f: Form128, q: i128) -> bool {
    let (a, b, _) = f;
    let ta = 2 * a.abs();
    b >= 1 && b <= q && ta >= q - b + 1 && ta <= q + b
}

/// One reduction step `(a,b,c) -> (c, r, (r^2 - disc)/(4c))` where
/// `r = -b mod 2|c|` is placed in the standard window. Returns the new form
/// together with the unimodular column action `[[0,-1],[1,m]]`.
fn rho(f: Form128, disc: i128, q: i128) -> (Form128, Mat128) {
    let (_, b, c) = f;
    let ca = c.abs();
    let two_c = 2 * ca;
    let r0 = (-b).rem_euclid(two_c);
    let r = if ca > q {
        if r0 > ca {
            r0 - two_c
        } else {
            r0
        }
    } else {
        q - (q - r0).rem_euclid(two_c)
    };
    let c2 = (r * r - disc) / (4 * c);
    let m = (r + b) / (2 * c);
    ((c, r, c2), [[0, -1], [1, m]])
}

/// Reduce a form, tracking the accumulated transformation.
fn reduce_tracked(mut f: Form128, disc: i128, q: i128) -> (Form128, Mat128) {
    let mut acc = ID128;
    for _ in 0..20_000 {
        if is_reduced(f, q) {
            return (f, acc);
        }
        let (next, step) = rho(f, disc, q);
        acc = mul128(&acc, &step);
        f = next;
    }
    panic!("form reduction did not terminate; discriminant {disc}");
}

/// Walks the full cycle of a reduced form; entry `i` is `(form_i, M_i)` with
/// `start . M_i = form_i`.
fn cycle_tracked(start: Form128, disc: i128, q: i128) -> Vec<(Form128, Mat128)> {
    let mut out = vec![(start, ID128)];
    let (mut f, mut acc) = (start, ID128);
    loop {
        let (next, step) = rho(f, disc, q);
        if next == start {
            return out;
        }
        acc = mul128(&acc, &step);
        f = next;
        out.push((f, acc));
        assert!(out.len() <= 1_000_000, "reduction cycle too long");
    }
}

/// If `g` is properly equivalent to `f`, returns `U` with `f . U = g`.
fn equivalence_witness(f: Form128, g: Form128, disc: i128, q: i128) -> Option<Mat128> {
    let (f0, mf) = reduce_tracked(f, disc, q);
    let (g0, mg) = reduce_tracked(g, disc, q);
    for (form, mi) in cycle_tracked(f0, disc, q) {
        if form == g0 {
            // f.(mf mi) = g0 = g.mg, so U = mf mi mg^{-1} (det mg = 1).
            let inv = [[mg[1][1], -mg[0][1]], [-mg[1][0], mg[0][0]]];
            return Some(mul128(&mul128(&mf, &mi), &inv));
        }
    }
    None
}

/// One primitive representation of `m != 0` per orbit of the proper
/// automorph group; empty when `f` does not represent `m` primitively.
fn primitive_orbit_reps(f: &BinaryForm, m: i64) -> Vec<(i128, i128)> {
    let disc = f.discriminant() as i128;
    let q = isqrt128(disc);
    let (a, b, c) = f.coefficients();
    let f128 = (a as i128, b as i128, c as i128);
    let ma = m.abs() as i128;
    let m128 = m as i128;
    let mut reps = Vec::new();
    for s in 0..2 * ma {
        if (s * s - disc).rem_euclid(4 * ma) != 0 {
            continue;
        }
        let g = (m128, s, (s * s - disc) / (4 * m128));
        if let Some(u) = equivalence_witness(f128, g, disc, q) {
            // First column of U is a primitive representation of m.
            reps.push((u[0][0], u[1][0]));
        }
    }
    reps
}

/// One representative per automorph orbit of all integer solutions of
/// `f(x, y) = n`. For `n = 0` the only solution is the origin.
pub(crate) fn solution_orbit_reps(f: &BinaryForm, n: i64) -> Result<Vec<(i128, i128)>> {
    let d = f.discriminant();
    if d <= 0 || is_perfect_square(d).is_some() {
        return Err(Error::UnsupportedDiscriminant(d));
    }
    if n == 0 {
        return Ok(vec![(0, 0)]);
    }
    let mut reps = Vec::new();
    let mut e = 1i64;
    while e * e <= n.abs() {
        if n % (e * e) == 0 {
            for (x, y) in primitive_orbit_reps(f, n / (e * e)) {
                reps.push((e as i128 * x, e as i128 * y));
            }
        }
        e += 1;
    }
    Ok(reps)
}

fn definite_model(f: &BinaryForm) -> Option<fn(i64) -> bool> {
    match f.coefficients() {
        (1, 1, 1) | (1, -1, 1) => Some(is_loeschian),
        (1, 0, 1) => Some(is_sum_two_squares),
        _ => None,
    }
}

/// Whether `f` represents `n`. `f` must be indefinite with non-square
/// discriminant, or one of the definite model forms
/// `x^2 +- xy + y^2` / `x^2 + y^2`.
pub fn represents(f: &BinaryForm, n: i64) -> Result<bool> {
    if let Some(criterion) = definite_model(f) {
        return Ok(criterion(n));
    }
    let d = f.discriminant();
    if d <= 0 || is_perfect_square(d).is_some() {
        return Err(Error::UnsupportedDiscriminant(d));
    }
    if n == 0 {
        return Ok(true);
    }
    let mut e = 1i64;
    while e * e <= n.abs() {
        if n % (e * e) == 0 && !primitive_orbit_reps(f, n / (e * e)).is_empty() {
            return Ok(true);
        }
        e += 1;
    }
    Ok(false)
}

/// All values of `f` inside `[lo, hi]`, ascending.
pub fn form_values_in(f: &BinaryForm, lo: i64, hi: i64) -> Result<Vec<i64>> {
    if lo > hi {
        return Err(Error::EmptyRange(lo, hi));
    }
    let mut out = Vec::new();
    for n in lo..=hi {
        if represents(f, n)? {
            out.push(n);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loeschian_by_search(n: i64) -> bool {
        if n < 0 {
            return false;
        }
        let b = isqrt128(n as i128) as i64 + 1;
        for m in -b..=b {
            for k in -b..=b {
                if m * m + m * k + k * k == n {
                    return true;
                }
            }
        }
        false
    }

    fn two_squares_by_search(n: i64) -> bool {
        if n < 0 {
            return false;
        }
        let b = isqrt128(n as i128) as i64;
        for m in 0..=b {
            if is_perfect_square(n - m * m).is_some() {
                return true;
            }
        }
        false
    }

    #[test]
    fn loeschian_examples() {
        assert!(is_loeschian(0));
        assert!(is_loeschian(1));
        assert!(is_loeschian(91));
        assert!(!is_loeschian(55));
        assert!(!is_loeschian(85));
        assert!(!is_loeschian(-3));
    }

    #[test]
    fn loeschian_matches_search() {
        for n in 0..=2_000i64 {
            assert_eq!(is_loeschian(n), loeschian_by_search(n), "n = {n}");
        }
    }

    #[test]
    fn two_squares_examples() {
        assert!(is_sum_two_squares(25));
        assert!(is_sum_two_squares(0));
        assert!(!is_sum_two_squares(3));
        assert!(!is_sum_two_squares(45 * 7));
        assert!(is_sum_two_squares(45)); // 36 + 9
    }

    #[test]
    fn two_squares_matches_search() {
        for n in 0..=5_000i64 {
            assert_eq!(is_sum_two_squares(n), two_squares_by_search(n), "n = {n}");
        }
    }

    #[test]
    fn two_squares_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = rng.gen_range(0..500i64);
            let b = rng.gen_range(0..500i64);
            if is_sum_two_squares(a) && is_sum_two_squares(b) {
                assert!(is_sum_two_squares(a * b), "{a} * {b}");
            }
            if is_loeschian(a) && is_loeschian(b) {
                assert!(is_loeschian(a * b), "{a} * {b}");
            }
        }
    }

    #[test]
    fn automorph_minimal_solutions() {
        // disc 5: t=3, u=1 for x^2 + xy - y^2.
        let f = BinaryForm::new(1, 1, -1);
        let m = fundamental_automorph(&f).unwrap();
        assert_eq!(m, Mat2([[1, 1], [1, 2]]));
        assert_eq!(m.det(), 1);

        // disc 12: t=4, u=1.
        let g = BinaryForm::new(1, 0, -3);
        let m = fundamental_automorph(&g).unwrap();
        assert_eq!(m, Mat2([[2, 3], [1, 2]]));
    }

    #[test]
    fn automorph_preserves_form() {
        for (a, b, c) in [(1, 1, -1), (1, 0, -3), (2, 1, -2), (1, 3, -3), (3, 1, -5)] {
            let f = BinaryForm::new(a, b, c);
            let m = fundamental_automorph(&f).unwrap();
            assert_eq!(m.det(), 1);
            assert_ne!(m, Mat2::identity());
            for (x, y) in [(1, 0), (0, 1), (3, -2), (5, 7), (-4, 9)] {
                let (u, v) = m.apply(x, y);
                assert_eq!(f.eval(u, v), f.eval(x, y));
            }
        }
    }

    #[test]
    fn automorph_rejects_bad_discriminants() {
        assert!(fundamental_automorph(&BinaryForm::new(1, 0, 1)).is_err());
        assert!(fundamental_automorph(&BinaryForm::new(1, 3, 2)).is_err()); // disc 1
        assert!(fundamental_automorph(&BinaryForm::new(1, 4, 3)).is_err()); // disc 4
    }

    #[test]
    fn represents_fibonacci_form() {
        // x^2 - xy - y^2, disc 5.
        let f = BinaryForm::new(1, -1, -1);
        assert!(represents(&f, 11).unwrap());
        assert!(represents(&f, 0).unwrap());
        assert!(represents(&f, -1).unwrap());
        assert!(!represents(&f, 2).unwrap());
        assert!(!represents(&f, 3).unwrap());
    }

    #[test]
    fn represents_distinguishes_improper_class() {
        // x^2 - 3y^2 takes value 1 but never -1.
        let f = BinaryForm::new(1, 0, -3);
        assert!(represents(&f, 1).unwrap());
        assert!(!represents(&f, -1).unwrap());
        assert!(represents(&f, -3).unwrap());
    }

    #[test]
    fn represents_rejects_square_discriminant() {
        assert!(represents(&BinaryForm::new(1, 3, 2), 6).is_err());
        assert!(represents(&BinaryForm::new(0, 1, 0), 6).is_err());
        assert!(represents(&BinaryForm::new(2, 0, 2), 8).is_err());
    }

    #[test]
    fn values_of_trace_three_form() {
        let f = BinaryForm::new(1, -1, -1);
        assert_eq!(
            form_values_in(&f, 1, 20).unwrap(),
            vec![1, 4, 5, 9, 11, 16, 19, 20]
        );
        assert!(form_values_in(&f, 5, 4).is_err());
    }

    #[test]
    fn values_of_definite_models() {
        let hex = BinaryForm::new(1, 1, 1);
        assert_eq!(form_values_in(&hex, 1, 10).unwrap(), vec![1, 3, 4, 7, 9]);
        let twosq = BinaryForm::new(1, 0, 1);
        assert_eq!(form_values_in(&twosq, 1, 10).unwrap(), vec![1, 2, 4, 5, 8, 9, 10]);
    }

    /// Same answer as scanning the full |x|,|y| <= bound box: for each x the
    /// remaining equation is quadratic in y and solved exactly.
    pub(super) fn box_search_represents(f: &BinaryForm, n: i64, bound: i64) -> bool {
        let (a, b, c) = f.coefficients();
        for x in -bound..=bound {
            // c y^2 + (b x) y + (a x^2 - n) = 0
            let (p, q, r) = (c as i128, (b * x) as i128, (a * x * x - n) as i128);
            if p == 0 {
                if q == 0 {
                    if r == 0 {
                        return true;
                    }
                    continue;
                }
                if (-r) % q == 0 && ((-r) / q).abs() <= bound as i128 {
                    return true;
                }
                continue;
            }
            let disc = q * q - 4 * p * r;
            if disc < 0 {
                continue;
            }
            let root = isqrt128(disc);
            if root * root != disc {
                continue;
            }
            for s in [root, -root] {
                let num = -q + s;
                if num % (2 * p) == 0 && (num / (2 * p)).abs() <= bound as i128 {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn represents_agrees_with_box_search() {
        // Forms from trace-t monodromies and a few others, small disc.
        let forms = [
            BinaryForm::new(1, -1, -1),
            BinaryForm::new(1, 1, -1),
            BinaryForm::new(1, 0, -3),
            BinaryForm::new(1, 3, -3),
            BinaryForm::new(2, 1, -2),
            BinaryForm::new(3, 3, -1),
            BinaryForm::new(5, 1, -1),
            BinaryForm::new(1, 4, -1),
        ];
        for f in forms {
            for n in -50..=50i64 {
                assert_eq!(
                    represents(&f, n).unwrap(),
                    box_search_represents(&f, n, 1000),
                    "form {:?}, n = {n}",
                    f.coefficients()
                );
            }
        }
    }

    #[test]
    fn orbit_reps_are_solutions() {
        let f = BinaryForm::new(1, -1, -1);
        for n in [-20i64, -11, -5, 1, 4, 5, 9, 11, 16, 20] {
            let reps = solution_orbit_reps(&f, n).unwrap();
            if represents(&f, n).unwrap() {
                assert!(!reps.is_empty(), "n = {n}");
            }
            for (x, y) in reps {
                let (x, y) = (x as i64, y as i64);
                assert_eq!(f.eval(x, y), n, "n = {n}");
            }
        }
    }
}
