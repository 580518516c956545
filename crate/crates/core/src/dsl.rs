//! The text form of manifold descriptions.
//!
//! ```text
//! manifold  := piece ("#" piece)*
//! piece     := (nat "*")? atom
//! atom      := "S2xS1" | lens | spher | "~" spher | bundle | semibundle | seifert
//! lens      := "L(" nat "," int ")"
//! spher     := "D*(" nat ")" | "T24" | "O48" | "I120"
//!            | "T'(" nat ")" | "D'(" nat "," nat ")" | "Z(" nat ")x" spher
//! bundle    := "TB[" int "," int ";" int "," int "]"
//! semibundle:= "TSB[" int "," int ";" int "," int "]"
//! seifert   := "SF(" ("o"|"n") nat (";" slope ("," slope)*)? ")"
//! slope     := int "/" nat
//! ```
//!
//! Whitespace between tokens is ignored, `//` starts a comment running to
//! the end of the line, `~` reverses the orientation of a spherical piece,
//! and `k*` repeats a summand. A single piece denotes a prime manifold, two
//! or more a connected sum.

use crate::manifold::{canonicalize, validate, ManifoldDesc, SphericalGroup};

/// Half-open byte range into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
}

/// One parse or validation problem, located in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: SourceSpan,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at {}..{}: {}", self.span.begin, self.span.end, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Key(&'static str),
    Nat(i64),
    Punct(char),
}

/// Longest keyword first, so `TSB` is never read as `T` plus garbage and
/// `D*` claims its asterisk before the multiplicity rule can.
const KEYWORDS: [&str; 15] = [
    "S2xS1", "I120", "T24", "O48", "TSB", "TB", "SF", "D*", "D'", "T'", "L", "Z", "x", "o", "n",
];

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, Diagnostic> {
    let mut toks = Vec::new();
    let mut i = 0;
    'outer: while i < text.len() {
        let rest = &text[i..];
        let ch = rest.chars().next().expect("i sits on a char boundary");
        if ch.is_whitespace() {
            i += ch.len_utf8();
            continue;
        }
        if rest.starts_with("//") {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        for kw in KEYWORDS {
            if rest.starts_with(kw) {
                toks.push((
                    Tok::Key(kw),
                    SourceSpan {
                        begin: i,
                        end: i + kw.len(),
                    },
                ));
                i += kw.len();
                continue 'outer;
            }
        }
        if ch.is_ascii_digit() {
            let begin = i;
            let mut value: i64 = 0;
            let mut overflow = false;
            while i < text.len() && text.as_bytes()[i].is_ascii_digit() {
                let d = i64::from(text.as_bytes()[i] - b'0');
                value = match value.checked_mul(10).and_then(|v| v.checked_add(d)) {
                    Some(v) => v,
                    None => {
                        overflow = true;
                        0
                    }
                };
                i += 1;
            }
            let span = SourceSpan { begin, end: i };
            if overflow {
                return Err(Diagnostic {
                    span,
                    message: "number is too large".to_string(),
                });
            }
            toks.push((Tok::Nat(value), span));
            continue;
        }
        if matches!(ch, '(' | ')' | '[' | ']' | ';' | ',' | '#' | '*' | '~' | '/' | '-') {
            toks.push((
                Tok::Punct(ch),
                SourceSpan {
                    begin: i,
                    end: i + 1,
                },
            ));
            i += 1;
            continue;
        }
        return Err(Diagnostic {
            span: SourceSpan {
                begin: i,
                end: i + ch.len_utf8(),
            },
            message: format!("unrecognized input '{ch}'"),
        });
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    input_end: usize,
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|(t, _)| *t)
    }

    fn peek2(&self) -> Option<Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| *t)
    }

    fn here(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(
            SourceSpan {
                begin: self.input_end,
                end: self.input_end,
            },
            |(_, s)| *s,
        )
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn fail<T>(&mut self, message: impl Into<String>) -> Option<T> {
        self.diags.push(Diagnostic {
            span: self.here(),
            message: message.into(),
        });
        None
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Option<()> {
        if self.eat_punct(c) {
            Some(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn nat(&mut self, what: &str) -> Option<(i64, SourceSpan)> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let (_, span) = self.bump();
                Some((n, span))
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn int(&mut self, what: &str) -> Option<(i64, SourceSpan)> {
        if self.peek() == Some(Tok::Punct('-')) {
            let (_, minus) = self.bump();
            let (n, span) = self.nat(what)?;
            Some((
                -n,
                SourceSpan {
                    begin: minus.begin,
                    end: span.end,
                },
            ))
        } else {
            self.nat(what)
        }
    }

    fn small_nat(&mut self, what: &str) -> Option<(u32, SourceSpan)> {
        let (n, span) = self.nat(what)?;
        match u32::try_from(n) {
            Ok(v) => Some((v, span)),
            Err(_) => {
                self.diags.push(Diagnostic {
                    span,
                    message: format!("{what} is too large"),
                });
                Some((1, span))
            }
        }
    }

    fn manifold(&mut self) -> Option<ManifoldDesc> {
        let mut pieces = vec![self.piece()?];
        while self.eat_punct('#') {
            pieces.push(self.piece()?);
        }
        if pieces.len() == 1 && pieces[0].1 == 1 {
            Some(pieces.pop().expect("just checked the length").0)
        } else {
            Some(ManifoldDesc::ConnectedSum { pieces })
        }
    }

    fn piece(&mut self) -> Option<(ManifoldDesc, u32)> {
        let mut mult = 1u32;
        if let (Some(Tok::Nat(_)), Some(Tok::Punct('*'))) = (self.peek(), self.peek2()) {
            let (m, span) = self.small_nat("multiplicity")?;
            self.expect_punct('*')?;
            if m == 0 {
                self.diags.push(Diagnostic {
                    span,
                    message: "multiplicity must be at least 1".to_string(),
                });
                mult = 1;
            } else {
                mult = m;
            }
        }
        let begin = self.here().begin;
        let atom = self.atom()?;
        let span = SourceSpan {
            begin,
            end: self.prev_end(),
        };
        for v in validate(&atom) {
            self.diags.push(Diagnostic {
                span,
                message: v.message,
            });
        }
        Some((atom, mult))
    }

    fn atom(&mut self) -> Option<ManifoldDesc> {
        match self.peek() {
            Some(Tok::Key("S2xS1")) => {
                self.bump();
                Some(ManifoldDesc::S2xS1)
            }
            Some(Tok::Punct('~')) => {
                self.bump();
                let group = self.spherical_group()?;
                Some(ManifoldDesc::Spherical {
                    group,
                    reversed: true,
                })
            }
            Some(Tok::Key(
                "L" | "D*" | "T24" | "O48" | "I120" | "T'" | "D'" | "Z",
            )) => {
                let group = self.spherical_group()?;
                Some(ManifoldDesc::Spherical {
                    group,
                    reversed: false,
                })
            }
            Some(Tok::Key("TB")) => {
                self.bump();
                let (a, b, c, d) = self.matrix()?;
                Some(ManifoldDesc::TorusBundle { a, b, c, d })
            }
            Some(Tok::Key("TSB")) => {
                self.bump();
                let (a, b, c, d) = self.matrix()?;
                Some(ManifoldDesc::TorusSemiBundle { a, b, c, d })
            }
            Some(Tok::Key("SF")) => {
                self.bump();
                self.seifert()
            }
            _ => self.fail("expected a manifold piece"),
        }
    }

    fn spherical_group(&mut self) -> Option<SphericalGroup> {
        match self.peek() {
            Some(Tok::Key("L")) => {
                self.bump();
                self.expect_punct('(')?;
                let (p, _) = self.nat("the lens order")?;
                self.expect_punct(',')?;
                let (q, _) = self.int("the lens parameter")?;
                self.expect_punct(')')?;
                Some(SphericalGroup::Lens { p, q })
            }
            Some(Tok::Key("D*")) => {
                self.bump();
                self.expect_punct('(')?;
                let (n, _) = self.nat("the dihedral index")?;
                self.expect_punct(')')?;
                Some(SphericalGroup::DStar { n })
            }
            Some(Tok::Key("T24")) => {
                self.bump();
                Some(SphericalGroup::T24)
            }
            Some(Tok::Key("O48")) => {
                self.bump();
                Some(SphericalGroup::O48)
            }
            Some(Tok::Key("I120")) => {
                self.bump();
                Some(SphericalGroup::I120)
            }
            Some(Tok::Key("T'")) => {
                self.bump();
                self.expect_punct('(')?;
                let (q, _) = self.small_nat("the tower level")?;
                self.expect_punct(')')?;
                Some(SphericalGroup::TPrime { q })
            }
            Some(Tok::Key("D'")) => {
                self.bump();
                self.expect_punct('(')?;
                let (n, _) = self.nat("the odd index")?;
                self.expect_punct(',')?;
                let (q, _) = self.small_nat("the tower level")?;
                self.expect_punct(')')?;
                Some(SphericalGroup::DPrime { n, q })
            }
            Some(Tok::Key("Z")) => {
                self.bump();
                self.expect_punct('(')?;
                let (m, _) = self.nat("the cyclic order")?;
                self.expect_punct(')')?;
                match self.peek() {
                    Some(Tok::Key("x")) => {
                        self.bump();
                    }
                    _ => return self.fail("expected 'x' after the cyclic factor"),
                }
                let inner = self.spherical_group()?;
                Some(SphericalGroup::ProductZm {
                    m,
                    inner: Box::new(inner),
                })
            }
            _ => self.fail("expected a spherical piece"),
        }
    }

    fn matrix(&mut self) -> Option<(i64, i64, i64, i64)> {
        self.expect_punct('[')?;
        let (a, _) = self.int("a matrix entry")?;
        self.expect_punct(',')?;
        let (b, _) = self.int("a matrix entry")?;
        self.expect_punct(';')?;
        let (c, _) = self.int("a matrix entry")?;
        self.expect_punct(',')?;
        let (d, _) = self.int("a matrix entry")?;
        self.expect_punct(']')?;
        Some((a, b, c, d))
    }

    fn seifert(&mut self) -> Option<ManifoldDesc> {
        self.expect_punct('(')?;
        let orientable = match self.peek() {
            Some(Tok::Key("o")) => {
                self.bump();
                true
            }
            Some(Tok::Key("n")) => {
                self.bump();
                false
            }
            _ => return self.fail("expected 'o' or 'n' for the base surface"),
        };
        let (genus, _) = self.small_nat("the base genus")?;
        let mut slopes = Vec::new();
        if self.eat_punct(';') {
            slopes.push(self.slope()?);
            while self.eat_punct(',') {
                slopes.push(self.slope()?);
            }
        }
        self.expect_punct(')')?;
        Some(ManifoldDesc::Seifert {
            genus,
            orientable,
            slopes,
        })
    }

    fn slope(&mut self) -> Option<(i64, i64)> {
        let (beta, _) = self.int("a slope numerator")?;
        self.expect_punct('/')?;
        let (alpha, _) = self.nat("a slope denominator")?;
        Some((beta, alpha))
    }
}

/// Parse one manifold description. On failure every diagnostic carries a
/// byte span into `text`; validation problems are reported alongside
/// syntax errors when the shape of the input allows parsing to continue.
pub fn parse(text: &str) -> Result<ManifoldDesc, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut parser = Parser {
        toks,
        pos: 0,
        input_end: text.len(),
        diags: Vec::new(),
    };
    let desc = parser.manifold();
    if desc.is_some() {
        if parser.pos < parser.toks.len() {
            parser.diags.push(Diagnostic {
                span: parser.here(),
                message: "unexpected trailing input".to_string(),
            });
        }
    }
    match desc {
        Some(d) if parser.diags.is_empty() => Ok(d),
        _ => Err(parser.diags),
    }
}

fn group_text(group: &SphericalGroup) -> String {
    match group {
        SphericalGroup::Lens { p, q } => format!("L({p},{q})"),
        SphericalGroup::DStar { n } => format!("D*({n})"),
        SphericalGroup::T24 => "T24".to_string(),
        SphericalGroup::O48 => "O48".to_string(),
        SphericalGroup::I120 => "I120".to_string(),
        SphericalGroup::TPrime { q } => format!("T'({q})"),
        SphericalGroup::DPrime { n, q } => format!("D'({n},{q})"),
        SphericalGroup::ProductZm { m, inner } => format!("Z({m})x{}", group_text(inner)),
    }
}

fn render_canonical(desc: &ManifoldDesc) -> String {
    match desc {
        ManifoldDesc::S2xS1 => "S2xS1".to_string(),
        ManifoldDesc::Spherical { group, reversed } => {
            format!("{}{}", if *reversed { "~" } else { "" }, group_text(group))
        }
        ManifoldDesc::ConnectedSum { pieces } => pieces
            .iter()
            .map(|(piece, mult)| {
                let body = render_canonical(piece);
                if *mult == 1 {
                    body
                } else {
                    format!("{mult}*{body}")
                }
            })
            .collect::<Vec<_>>()
            .join(" # "),
        ManifoldDesc::TorusBundle { a, b, c, d } => format!("TB[{a},{b};{c},{d}]"),
        ManifoldDesc::TorusSemiBundle { a, b, c, d } => format!("TSB[{a},{b};{c},{d}]"),
        ManifoldDesc::Seifert {
            genus,
            orientable,
            slopes,
        } => {
            let base = if *orientable { "o" } else { "n" };
            if slopes.is_empty() {
                format!("SF({base}{genus})")
            } else {
                let body = slopes
                    .iter()
                    .map(|(beta, alpha)| format!("{beta}/{alpha}"))
                    .collect::<Vec<_>>()
                    .join(",");
                format!("SF({base}{genus}; {body})")
            }
        }
    }
}

/// Deterministic canonical text: parsing the result reproduces
/// `canonicalize(desc)` exactly.
pub fn render(desc: &ManifoldDesc) -> String {
    render_canonical(&canonicalize(desc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lens(p: i64, q: i64) -> ManifoldDesc {
        ManifoldDesc::Spherical {
            group: SphericalGroup::Lens { p, q },
            reversed: false,
        }
    }

    #[test]
    fn parses_prime_atoms() {
        assert_eq!(parse("S2xS1").unwrap(), ManifoldDesc::S2xS1);
        assert_eq!(parse("L(7,2)").unwrap(), lens(7, 2));
        assert_eq!(parse("L(7,-2)").unwrap(), lens(7, -2));
        assert_eq!(
            parse("~T24").unwrap(),
            ManifoldDesc::Spherical {
                group: SphericalGroup::T24,
                reversed: true
            }
        );
        assert_eq!(
            parse("D*(4)").unwrap(),
            ManifoldDesc::Spherical {
                group: SphericalGroup::DStar { n: 4 },
                reversed: false
            }
        );
        assert_eq!(
            parse("Z(5)xT'(2)").unwrap(),
            ManifoldDesc::Spherical {
                group: SphericalGroup::ProductZm {
                    m: 5,
                    inner: Box::new(SphericalGroup::TPrime { q: 2 })
                },
                reversed: false
            }
        );
        assert_eq!(
            parse("TB[2,1;1,1]").unwrap(),
            ManifoldDesc::TorusBundle {
                a: 2,
                b: 1,
                c: 1,
                d: 1
            }
        );
        assert_eq!(
            parse("TSB[0,1;1,-2]").unwrap(),
            ManifoldDesc::TorusSemiBundle {
                a: 0,
                b: 1,
                c: 1,
                d: -2
            }
        );
        assert_eq!(
            parse("SF(o2; 1/5,1/5,-2/5,1/7,2/7,-3/7)").unwrap(),
            ManifoldDesc::Seifert {
                genus: 2,
                orientable: true,
                slopes: vec![(1, 5), (1, 5), (-2, 5), (1, 7), (2, 7), (-3, 7)],
            }
        );
        assert_eq!(
            parse("SF(n3)").unwrap(),
            ManifoldDesc::Seifert {
                genus: 3,
                orientable: false,
                slopes: vec![],
            }
        );
    }

    #[test]
    fn parses_sums_with_multiplicity() {
        let m = parse("I120 # ~I120 # L(7,1) # L(7,2) # 2*L(7,3)").unwrap();
        let ManifoldDesc::ConnectedSum { pieces } = m else {
            panic!("expected a sum");
        };
        assert_eq!(pieces.len(), 5);
        assert_eq!(pieces[4], (lens(7, 3), 2));
        assert_eq!(
            pieces[1],
            (
                ManifoldDesc::Spherical {
                    group: SphericalGroup::I120,
                    reversed: true
                },
                1
            )
        );

        assert_eq!(
            parse("3*S2xS1").unwrap(),
            ManifoldDesc::ConnectedSum {
                pieces: vec![(ManifoldDesc::S2xS1, 3)]
            }
        );
        assert_eq!(parse("1*L(5,1)").unwrap(), lens(5, 1));
    }

    #[test]
    fn skips_whitespace_and_comments() {
        let text = "L(7, 2)  //  the q here is reduced\n # L( 7 ,1) // second piece";
        let m = parse(text).unwrap();
        assert_eq!(
            m,
            ManifoldDesc::ConnectedSum {
                pieces: vec![(lens(7, 2), 1), (lens(7, 1), 1)]
            }
        );
    }

    fn first_error(text: &str) -> Diagnostic {
        parse(text).unwrap_err().into_iter().next().unwrap()
    }

    #[test]
    fn syntax_errors_carry_spans() {
        let d = first_error("L(7,2");
        assert_eq!(d.span.begin, 5);
        assert!(d.message.contains("')'"));

        let d = first_error("L(7,2) L(5,1)");
        assert_eq!(d.span.begin, 7);
        assert!(d.message.contains("trailing"));

        let d = first_error("flurb");
        assert_eq!(d.span, SourceSpan { begin: 0, end: 1 });
        assert!(d.message.contains("unrecognized"));

        let d = first_error("~TB[1,0;0,1]");
        assert!(d.message.contains("spherical"));

        let d = first_error("99999999999999999999");
        assert!(d.message.contains("too large"));

        let d = first_error("");
        assert_eq!(d.span, SourceSpan { begin: 0, end: 0 });
    }

    #[test]
    fn validation_problems_point_at_the_offending_piece() {
        let errs = parse("L(7,1) # L(0,1)").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].span.begin, 9);
        assert_eq!(errs[0].span.end, 15);

        let errs = parse("L(6,2)").unwrap_err();
        assert!(errs[0].message.contains("coprime"));

        let errs = parse("Z(5)xL(7,1)").unwrap_err();
        assert!(errs[0].message.contains("single lens space"));

        let errs = parse("0*T24").unwrap_err();
        assert!(errs[0].message.contains("multiplicity"));

        let errs = parse("SF(n0)").unwrap_err();
        assert!(!errs.is_empty());

        // One bad piece does not hide another.
        let errs = parse("L(0,1) # L(4,2)").unwrap_err();
        assert_eq!(errs.len(), 2);
    }

    #[test]
    fn render_canonicalizes() {
        assert_eq!(render(&parse("L(7,9)").unwrap()), "L(7,2)");
        assert_eq!(render(&parse("~L(7,2)").unwrap()), "L(7,5)");
        assert_eq!(render(&parse("L(7,-2)").unwrap()), "L(7,5)");
        assert_eq!(
            render(&parse("2*L(7,3) # L(7,1)").unwrap()),
            "L(7,1) # 2*L(7,3)"
        );
        assert_eq!(
            render(&parse("L(7,3) # L(7,1) # L(7,3)").unwrap()),
            "L(7,1) # 2*L(7,3)"
        );
        assert_eq!(render(&parse("1*T24").unwrap()), "T24");
        assert_eq!(render(&parse("~I120").unwrap()), "~I120");
        assert_eq!(
            render(&parse("SF(o2; 1/5,1/5,-2/5,1/7,2/7,-3/7)").unwrap()),
            "SF(o2; 1/5,1/5,-2/5,1/7,2/7,-3/7)"
        );
        assert_eq!(render(&parse("SF(o0)").unwrap()), "SF(o0)");
        assert_eq!(render(&parse("TB[2,1;1,1]").unwrap()), "TB[2,1;1,1]");
        assert_eq!(
            render(&parse("Z(5)xD*(7)").unwrap()),
            "Z(5)xD*(7)"
        );
    }

    fn noncyclic_group_strategy() -> impl Strategy<Value = SphericalGroup> {
        prop_oneof![
            (2i64..12).prop_map(|n| SphericalGroup::DStar { n }),
            Just(SphericalGroup::T24),
            Just(SphericalGroup::O48),
            Just(SphericalGroup::I120),
            (1u32..4).prop_map(|q| SphericalGroup::TPrime { q }),
            (prop::sample::select(vec![3i64, 5, 7, 9]), 1u32..4)
                .prop_map(|(n, q)| SphericalGroup::DPrime { n, q }),
        ]
    }

    fn group_strategy() -> impl Strategy<Value = SphericalGroup> {
        let lens = (1i64..40).prop_flat_map(|p| {
            let qs: Vec<i64> = (0..p.max(1))
                .filter(|&q| crate::numth::gcd(q, p) == 1)
                .collect();
            prop::sample::select(qs).prop_map(move |q| SphericalGroup::Lens { p, q })
        });
        let product = noncyclic_group_strategy().prop_flat_map(|inner| {
            let order = inner.order().expect("generated orders are small");
            let ms: Vec<i64> = [5i64, 7, 11, 13, 17, 19, 23]
                .into_iter()
                .filter(|&m| crate::numth::gcd(m, order) == 1)
                .collect();
            prop::sample::select(ms).prop_map(move |m| SphericalGroup::ProductZm {
                m,
                inner: Box::new(inner.clone()),
            })
        });
        prop_oneof![
            3 => lens,
            4 => noncyclic_group_strategy(),
            1 => product,
        ]
    }

    fn det_one_matrix() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        // Words in the two standard generators keep the determinant at 1.
        prop::collection::vec((any::<bool>(), -3i64..=3), 1..5).prop_map(|word| {
            let (mut a, mut b, mut c, mut d) = (1i64, 0, 0, 1);
            for (use_s, k) in word {
                if use_s {
                    // Right-multiply by [0,1;-1,0].
                    (a, b, c, d) = (-b, a, -d, c);
                } else {
                    // Right-multiply by [1,k;0,1].
                    (b, d) = (a * k + b, c * k + d);
                }
            }
            (a, b, c, d)
        })
    }

    fn desc_strategy() -> impl Strategy<Value = ManifoldDesc> {
        let spherical = (group_strategy(), any::<bool>()).prop_map(|(group, reversed)| {
            ManifoldDesc::Spherical { group, reversed }
        });
        let bundle = det_one_matrix()
            .prop_map(|(a, b, c, d)| ManifoldDesc::TorusBundle { a, b, c, d });
        let semibundle = prop_oneof![
            Just((1i64, 0i64, 0i64, 1i64)),
            Just((0, 1, 1, 0)),
            (-5i64..=5).prop_filter("nonzero", |z| *z != 0).prop_map(|z| (1, 0, z, 1)),
            (-5i64..=5).prop_filter("nonzero", |z| *z != 0).prop_map(|z| (0, 1, 1, z)),
            (-5i64..=5).prop_filter("nonzero", |z| *z != 0).prop_map(|z| (1, z, 0, 1)),
            det_one_matrix().prop_filter("all entries nonzero", |(a, b, c, d)| {
                *a != 0 && *b != 0 && *c != 0 && *d != 0
            }),
        ]
        .prop_map(|(a, b, c, d)| ManifoldDesc::TorusSemiBundle { a, b, c, d });
        let seifert = (
            any::<bool>(),
            0u32..3,
            prop::collection::vec(
                (1i64..8).prop_flat_map(|alpha| {
                    let betas: Vec<i64> = (-alpha.max(1)..alpha.max(1))
                        .filter(|&b| crate::numth::gcd(b, alpha) == 1)
                        .collect();
                    prop::sample::select(betas).prop_map(move |beta| (beta, alpha))
                }),
                0..5,
            ),
        )
            .prop_filter_map("nonorientable base needs genus", |(orientable, genus, slopes)| {
                if !orientable && genus == 0 {
                    None
                } else {
                    Some(ManifoldDesc::Seifert {
                        genus,
                        orientable,
                        slopes,
                    })
                }
            });
        let atom = prop_oneof![
            1 => Just(ManifoldDesc::S2xS1),
            4 => spherical,
            2 => bundle,
            2 => semibundle,
            2 => seifert,
        ];
        let sum_piece = prop_oneof![
            1 => Just(ManifoldDesc::S2xS1),
            4 => (group_strategy(), any::<bool>()).prop_map(|(group, reversed)| {
                ManifoldDesc::Spherical { group, reversed }
            }),
        ];
        prop_oneof![
            3 => atom,
            1 => prop::collection::vec((sum_piece, 1u32..3), 1..4)
                .prop_map(|pieces| ManifoldDesc::ConnectedSum { pieces }),
        ]
    }

    proptest! {
        #[test]
        fn round_trip_matches_canonical_form(desc in desc_strategy()) {
            prop_assume!(validate(&desc).is_empty());
            let text = render(&desc);
            let parsed = parse(&text).unwrap_or_else(|e| {
                panic!("rendered text {text:?} failed to parse: {e:?}")
            });
            prop_assert_eq!(&parsed, &canonicalize(&desc));
            prop_assert_eq!(render(&parsed), text.clone());
            prop_assert_eq!(parse(&render(&parsed)).unwrap(), parsed);
        }

        #[test]
        fn arbitrary_input_never_panics(text in "\\PC*") {
            let _ = parse(&text);
        }

        #[test]
        fn alphabet_soup_never_panics(
            chars in prop::collection::vec(
                prop::sample::select("SF2xI1TBOL()[];,#*~/-oDnZ'049 ".chars().collect::<Vec<_>>()),
                0..40,
            )
        ) {
            let text: String = chars.into_iter().collect();
            if let Err(diags) = parse(&text) {
                for d in diags {
                    prop_assert!(d.span.begin <= d.span.end);
                    prop_assert!(d.span.end <= text.len());
                }
            }
        }
    }
}
