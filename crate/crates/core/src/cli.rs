//! Command-line front end.
//!
//! Polynomial expressions use `x`, decimal coefficients, `+`, `-`, `*`, `^`
//! and parentheses; juxtaposition multiplies (`2x`, `x(x+1)`). Coefficients
//! are reduced modulo `p` as they are read. The explicit form
//! `coeffs:c0,c1,...` lists coefficients from the constant term up.
//!
//! Sequences are `;`-separated element literals. A trailing `*m` with a
//! plain integer `m` repeats the element `m` times, so `2*4` is four copies
//! of the constant `2`; write `2x` or `(x*2)` for the product. `λ` is the
//! empty sequence.
//!
//! Exit codes: 0 verified (or evidence), 1 refuted, 2 usage error,
//! 3 incomplete, 4 outside the hypotheses (`p = 2`).

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::gfpoly::{factor, Poly, PolyError, Prime};
use crate::semigroup::{
    build_abelian_group, build_cyclic_with_zero, build_product, build_quotient_semigroup,
    check_group_with_zero_factors, invariant_factors_of_cyclic_product, units_of, CyclicSymbol, Elem, FiniteSemigroup,
    Kind, SgElement, StructureSource,
};
use crate::verify::{
    conjecture_probe, constructive_reduction, reduce_quadratic_case, square_of_x_plus_one, verify_lemma_product,
    verify_proposition, verify_theorem1, Status, VerificationReport, VerifyConfig, VerifyError,
};
use crate::zerosum::{davenport_exact, davenport_group_formula, reduction_witness, sigma, DavenportRecord, Sequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;
pub const EXIT_OUTSIDE: i32 = 4;

/// Syntax error in a polynomial, element or sequence literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }

    fn shifted(mut self, by: usize) -> Self {
        self.offset += by;
        self
    }
}

/// Parses a polynomial expression over `F_p`.
pub fn parse_poly_expr(text: &str, p: Prime) -> Result<Poly, ParseError> {
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("coeffs:") {
        let base = text.len() - rest.len();
        return parse_coeff_list(rest, p).map_err(|e| e.shifted(base));
    }
    let mut parser = PolyParser { bytes: text.as_bytes(), pos: 0, p };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(ParseError::new(parser.pos, format!("unexpected '{}'", parser.peek_char())));
    }
    Ok(poly)
}

fn parse_coeff_list(text: &str, p: Prime) -> Result<Poly, ParseError> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let lead = part.len() - part.trim_start().len();
        let item = part.trim();
        let (negative, digits) = match item.strip_prefix('-') {
            Some(d) => (true, d),
            None => (false, item),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::new(offset + lead, format!("expected an integer, found '{item}'")));
        }
        let r = reduce_digits(digits, p) as i64;
        coeffs.push(if negative { -r } else { r });
        offset += part.len() + 1;
    }
    Ok(Poly::new(p, &coeffs))
}

fn reduce_digits(digits: &str, p: Prime) -> u32 {
    let m = u64::from(p.get());
    digits.bytes().fold(0u64, |acc, b| (acc * 10 + u64::from(b - b'0')) % m) as u32
}

struct PolyParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    p: Prime,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.bytes[self.pos..]).ok().and_then(|s| s.chars().next()).unwrap_or('?')
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'x' | b'(' | b'0'..=b'9') => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        if digits.is_empty() {
            return Err(ParseError::new(start, "expected an exponent"));
        }
        let exp: u32 = digits.parse().map_err(|_| ParseError::new(start, "exponent too large"))?;
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let p = self.p;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly::x(p))
            }
            Some(b'0'..=b'9') => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
                Ok(Poly::constant(p, i64::from(reduce_digits(digits, p))))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::new(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(ParseError::new(self.pos, format!("unexpected '{}'", self.peek_char()))),
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
        }
    }
}

/// Splits on `sep` outside parentheses, returning `(offset, piece)` pairs.
fn split_top_level(text: &str, sep: char) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut depth = 0usize;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1).ok_or_else(|| ParseError::new(i, "unbalanced ')'"))?,
            c if c == sep && depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(ParseError::new(text.len(), "missing ')'"));
    }
    out.push((start, &text[start..]));
    Ok(out)
}

fn trim_with_offset(offset: usize, s: &str) -> (usize, &str) {
    (offset + s.len() - s.trim_start().len(), s.trim())
}

/// Parses one element literal of `s`.
pub fn parse_element(s: &FiniteSemigroup, text: &str) -> Result<Elem, ParseError> {
    let (offset, text) = trim_with_offset(0, text);
    let value = parse_value(s, text).map_err(|e| e.shifted(offset))?;
    s.index_of(&value).ok_or_else(|| ParseError::new(offset, format!("'{text}' is not an element of this semigroup")))
}

fn parse_value(s: &FiniteSemigroup, text: &str) -> Result<SgElement, ParseError> {
    match s.kind() {
        Kind::UnitGroup => parse_value(s.unit_parent().expect("unit group has a parent"), text),
        Kind::Quotient => {
            let p = s.modulus().expect("quotient has a modulus").prime();
            Ok(SgElement::Residue(parse_poly_expr(text, p)?))
        }
        Kind::CyclicWithZero => parse_cyclic(text, true),
        Kind::AbelianGroup if s.group_orders().map_or(0, <[u32]>::len) <= 1 => parse_cyclic(text, false),
        Kind::AbelianGroup => {
            let arity = s.group_orders().map_or(0, <[u32]>::len);
            let items = parse_tuple(text, arity)?;
            items
                .into_iter()
                .map(|(off, item)| parse_cyclic(item, false).map_err(|e| e.shifted(off)))
                .collect::<Result<_, _>>()
                .map(SgElement::Tuple)
        }
        Kind::Product => {
            let factors = s.product_factors().expect("product has factors");
            let items = parse_tuple(text, factors.len())?;
            items
                .into_iter()
                .zip(factors)
                .map(|((off, item), f)| parse_value(f, item).map_err(|e| e.shifted(off)))
                .collect::<Result<_, _>>()
                .map(SgElement::Tuple)
        }
    }
}

fn parse_tuple(text: &str, arity: usize) -> Result<Vec<(usize, &str)>, ParseError> {
    if arity == 1 && !text.starts_with('(') {
        return Ok(vec![(0, text)]);
    }
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| ParseError::new(0, format!("expected a {arity}-tuple '(..., ...)'")))?;
    let items: Vec<(usize, &str)> =
        split_top_level(inner, ',')?.into_iter().map(|(o, s)| trim_with_offset(o + 1, s)).collect();
    if items.len() != arity {
        return Err(ParseError::new(0, format!("expected {arity} coordinates, found {}", items.len())));
    }
    Ok(items)
}

fn parse_cyclic(text: &str, with_zero: bool) -> Result<SgElement, ParseError> {
    let text = text.trim();
    let symbol = match text {
        "inf" | "∞" if with_zero => CyclicSymbol::Infinity,
        "g" => CyclicSymbol::Power(1),
        "e" | "1" => CyclicSymbol::Power(0),
        _ => {
            let k = text.strip_prefix("g^").ok_or_else(|| {
                ParseError::new(
                    0,
                    format!("expected g, g^k, e{}, found '{text}'", if with_zero { " or inf" } else { "" }),
                )
            })?;
            CyclicSymbol::Power(k.trim().parse().map_err(|_| ParseError::new(2, format!("bad exponent '{k}'")))?)
        }
    };
    Ok(SgElement::Cyclic(symbol))
}

/// Parses a `;`-separated sequence literal over `s`.
pub fn parse_sequence(s: &FiniteSemigroup, text: &str) -> Result<Sequence, ParseError> {
    let mut seq = Sequence::new();
    if matches!(text.trim(), "" | "λ") {
        return Ok(seq);
    }
    for (offset, item) in split_top_level(text, ';')? {
        let (offset, item) = trim_with_offset(offset, item);
        if item.is_empty() {
            return Err(ParseError::new(offset, "empty sequence item"));
        }
        let (literal, count) = split_multiplicity(item)?;
        let e = parse_element(s, literal).map_err(|e| e.shifted(offset))?;
        seq.push_n(e, count);
    }
    Ok(seq)
}

fn split_multiplicity(item: &str) -> Result<(&str, u32), ParseError> {
    let pieces = split_top_level(item, '*')?;
    if pieces.len() >= 2 {
        let (off, last) = pieces[pieces.len() - 1];
        let last = last.trim();
        if !last.is_empty() && last.bytes().all(|b| b.is_ascii_digit()) {
            let count = last.parse().map_err(|_| ParseError::new(off, "multiplicity too large"))?;
            return Ok((&item[..off - 1], count));
        }
    }
    Ok((item, 1))
}

/// Comma-separated list of integers, e.g. `2,4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orders(pub Vec<u64>);

fn parse_list(text: &str) -> Result<Orders, String> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<u64>().map_err(|_| format!("expected a comma-separated list of integers, found '{t}'"))
        })
        .collect::<Result<_, _>>()
        .map(Orders)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable text.
    Text,
    /// One JSON object per line.
    Record,
}

#[derive(Debug, Parser)]
#[command(name = "davenport", version, about = "Davenport constants of finite commutative semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock timings (makes record output non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct SearchOpts {
    /// Wall-clock budget per exhaustive search, in milliseconds.
    #[arg(long, default_value_t = 30_000)]
    pub budget_ms: u64,
}

#[derive(Debug, Args)]
pub struct VerifyOpts {
    #[command(flatten)]
    pub search: SearchOpts,
    /// Monte-Carlo samples used when an exact search runs out of budget.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Random sequences fed to the constructive reductions.
    #[arg(long, default_value_t = 1000)]
    pub stress: usize,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of verification jobs run concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputOpts,
}

/// Selects a semigroup: `-p P -f EXPR`, `--cyclic-zero N,..` or `--group N,..`.
#[derive(Debug, Args)]
pub struct SemigroupOpts {
    /// Prime of the base field.
    #[arg(short)]
    pub p: Option<u64>,
    /// Modulus f(x); the semigroup is F_p[x]/<f(x)> under multiplication.
    #[arg(short, requires = "p", conflicts_with_all = ["cyclic_zero", "group"])]
    pub f: Option<String>,
    /// Product of cyclic groups with an adjoined zero, C_n ∪ {inf}, one per entry.
    #[arg(long, value_parser = parse_list, conflicts_with = "group")]
    pub cyclic_zero: Option<Orders>,
    /// Finite abelian group C_n1 x C_n2 x ...
    #[arg(long, value_parser = parse_list)]
    pub group: Option<Orders>,
    /// Work in the unit group of the selected semigroup.
    #[arg(long)]
    pub units: bool,
    /// Print the semigroup description before the result.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor f(x) over F_p.
    Factor {
        /// Prime of the base field.
        #[arg(short)]
        p: u64,
        /// Polynomial expression.
        #[arg(short)]
        f: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Unit group order, invariant factors and elements.
    Units {
        #[command(flatten)]
        semigroup: SemigroupOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Exact Davenport constant by exhaustive search.
    Davenport {
        #[command(flatten)]
        semigroup: SemigroupOpts,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Davenport constant of C_n1 x ... x C_nr: closed form where known, checked by search.
    DavenportGroup {
        /// Cyclic orders, e.g. 2,6.
        #[arg(value_parser = parse_list)]
        orders: Orders,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Check D(S) = D(U(S)) for a proven family.
    Verify {
        #[command(subcommand)]
        claim: VerifyClaim,
    },
    /// Compute both sides for an arbitrary modulus; equality is evidence only.
    Probe {
        /// Prime of the base field.
        #[arg(short)]
        p: u64,
        /// Modulus; repeat for a batch.
        #[arg(short, required = true)]
        f: Vec<String>,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Reduce a sequence: find a proper subsequence with the same product.
    Reduce {
        #[command(flatten)]
        semigroup: SemigroupOpts,
        /// Sequence literal, e.g. "x+1; 2*3".
        #[arg(long)]
        seq: String,
        /// Also run the reduction from the matching proof (groups with zeros or (x+1)^2).
        #[arg(long)]
        constructive: bool,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyClaim {
    /// D(S) = D(U(S)) for F_p[x]/<f> with squarefree f.
    Theorem1 {
        /// Prime of the base field.
        #[arg(short)]
        p: u64,
        /// Squarefree modulus; repeat for a batch.
        #[arg(short, required = true)]
        f: Vec<String>,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// D(S) = D(U(S)) for a product of cyclic groups with adjoined zeros.
    Lemma {
        /// Cyclic orders, e.g. 2,4; repeat for a batch.
        #[arg(long, value_parser = parse_list, required = true)]
        n_list: Vec<Orders>,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// D(S) = D(U(S)) for F_p[x]/<(x+1)^2>.
    Proposition {
        /// Odd prime; repeat for a batch.
        #[arg(short, required = true)]
        p: Vec<u64>,
        #[command(flatten)]
        opts: VerifyOpts,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl CliError {
    fn code(&self) -> i32 {
        EXIT_USAGE
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::semigroup::SemigroupError> for CliError {
    fn from(e: crate::semigroup::SemigroupError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::zerosum::ZeroSumError> for CliError {
    fn from(e: crate::zerosum::ZeroSumError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn prime(p: u64) -> Result<Prime, CliError> {
    Ok(Prime::new(p)?)
}

fn emit<R: Serialize>(out: &mut dyn Write, format: Format, record: &R, text: impl fmt::Display) {
    let _ = match format {
        Format::Record => writeln!(out, "{}", serde_json::to_string(record).expect("records serialize")),
        Format::Text => write!(out, "{text}"),
    };
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Factor { p, f, output } => run_factor(p, &f, &output, out),
        Command::Units { semigroup, output } => run_units(&semigroup, &output, out),
        Command::Davenport { semigroup, search, output } => run_davenport(&semigroup, &search, &output, out),
        Command::DavenportGroup { orders, search, output } => run_davenport_group(&orders.0, &search, &output, out),
        Command::Reduce { semigroup, seq, constructive, search, output } => {
            run_reduce(&semigroup, &seq, constructive, &search, &output, out)
        }
        Command::Verify { claim } => {
            let (jobs, opts) = match claim {
                VerifyClaim::Theorem1 { p, f, opts } => {
                    let p = prime(p)?;
                    let polys = f.iter().map(|t| parse_poly_expr(t, p)).collect::<Result<Vec<_>, _>>()?;
                    (polys.into_iter().map(Job::Theorem1).collect::<Vec<_>>(), opts)
                }
                VerifyClaim::Lemma { n_list, opts } => {
                    if let Some(bad) = n_list.iter().find(|ns| ns.0.iter().any(|&n| n < 2)) {
                        return Err(CliError::Usage(format!("every order must be at least 2, got {:?}", bad.0)));
                    }
                    (n_list.into_iter().map(|ns| Job::Lemma(ns.0)).collect(), opts)
                }
                VerifyClaim::Proposition { p, opts } => {
                    let primes = p.into_iter().map(prime).collect::<Result<Vec<_>, _>>()?;
                    (primes.into_iter().map(Job::Proposition).collect(), opts)
                }
            };
            run_jobs(jobs, &opts, out, err)
        }
        Command::Probe { p, f, opts } => {
            let p = prime(p)?;
            let polys = f.iter().map(|t| parse_poly_expr(t, p)).collect::<Result<Vec<_>, _>>()?;
            if let Some(c) = polys.iter().find(|f| f.degree().unwrap_or(0) == 0) {
                return Err(CliError::Usage(format!("the modulus must have degree at least 1, got {c}")));
            }
            run_jobs(polys.into_iter().map(Job::Probe).collect(), &opts, out, err)
        }
    }
}

#[derive(Serialize)]
struct FactorRecord {
    f: String,
    unit: u32,
    factors: Vec<(String, u32)>,
    squarefree: bool,
}

fn run_factor(p: u64, f: &str, output: &OutputOpts, out: &mut dyn Write) -> Result<i32, CliError> {
    let poly = parse_poly_expr(f, prime(p)?)?;
    let fac = factor(&poly)?;
    let record = FactorRecord {
        f: poly.to_string(),
        unit: fac.unit,
        factors: fac.factors.iter().map(|(g, e)| (g.to_string(), *e)).collect(),
        squarefree: fac.is_squarefree(),
    };
    let text = format!("{poly} = {fac}\nsquarefree: {}\n", if record.squarefree { "yes" } else { "no" });
    emit(out, output.format, &record, text);
    Ok(EXIT_OK)
}

fn build_semigroup(opts: &SemigroupOpts) -> Result<FiniteSemigroup, CliError> {
    let s = match (&opts.f, &opts.cyclic_zero, &opts.group) {
        (Some(f), None, None) => {
            let p = prime(opts.p.expect("clap enforces -p with -f"))?;
            build_quotient_semigroup(&parse_poly_expr(f, p)?)?
        }
        (None, Some(Orders(ns)), None) => {
            build_product(ns.iter().map(|&n| build_cyclic_with_zero(n)).collect::<Result<_, _>>()?)?
        }
        (None, None, Some(Orders(ns))) => build_abelian_group(ns)?,
        _ => return Err(CliError::Usage("select a semigroup with -p/-f, --cyclic-zero or --group".into())),
    };
    Ok(if opts.units { units_of(&s)?.as_semigroup().clone() } else { s })
}

fn dump(s: &FiniteSemigroup, opts: &SemigroupOpts, output: &OutputOpts, out: &mut dyn Write) {
    if opts.dump {
        let d = s.describe();
        emit(out, output.format, &d, format!("{}\n", serde_json::to_string_pretty(&d).expect("serializes")));
    }
}

#[derive(Serialize)]
struct UnitsRecord {
    size: usize,
    order: usize,
    invariant_factors: Option<Vec<u64>>,
    source: StructureSource,
    elements: Vec<String>,
}

fn run_units(opts: &SemigroupOpts, output: &OutputOpts, out: &mut dyn Write) -> Result<i32, CliError> {
    let s = build_semigroup(opts)?;
    dump(&s, opts, output, out);
    let u = units_of(&s)?;
    let record = UnitsRecord {
        size: s.size(),
        order: u.order(),
        invariant_factors: u.invariant_factors.clone(),
        source: u.source,
        elements: u.elements.iter().map(|&e| s.render(e)).collect(),
    };
    let structure = match &record.invariant_factors {
        Some(f) if f.is_empty() => "trivial".to_string(),
        Some(f) => f.iter().map(|n| format!("C_{n}")).collect::<Vec<_>>().join(" x "),
        None => "unknown".to_string(),
    };
    let mut text =
        format!("|S| = {}, |U(S)| = {}, U(S) = {structure} ({})\n", record.size, record.order, snake(&record.source));
    if record.order <= 64 {
        text += &format!("units: {}\n", record.elements.join(", "));
    }
    emit(out, output.format, &record, text);
    Ok(EXIT_OK)
}

fn snake<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn budget(search: &SearchOpts) -> Option<Duration> {
    Some(Duration::from_millis(search.budget_ms))
}

fn side_text(label: &str, r: &crate::zerosum::DavenportResult, s: &FiniteSemigroup, timings: bool) -> String {
    let rel = if r.complete { "=" } else { ">=" };
    let mut text = format!("{label} {rel} {} ({}, {} nodes", r.value, r.method, r.nodes);
    if timings {
        text += &format!(", {} ms", r.elapsed.as_millis());
    }
    text += ")\n";
    if !r.witness.is_empty() {
        text += &format!("  longest irreducible: {}\n", r.witness.display(s));
    }
    text
}

fn run_davenport(
    opts: &SemigroupOpts,
    search: &SearchOpts,
    output: &OutputOpts,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let s = build_semigroup(opts)?;
    dump(&s, opts, output, out);
    let r = davenport_exact(&s, budget(search))?;
    let label = if opts.units { "D(U(S))" } else { "D(S)" };
    emit(out, output.format, &r.to_record(&s, output.timings), side_text(label, &r, &s, output.timings));
    Ok(if r.complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

#[derive(Serialize)]
struct GroupRecord {
    orders: Vec<u64>,
    invariant_factors: Vec<u64>,
    value: u64,
    formula: Option<u64>,
    search: DavenportRecord,
}

fn run_davenport_group(
    orders: &[u64],
    search: &SearchOpts,
    output: &OutputOpts,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let g = build_abelian_group(orders)?;
    let invariant = invariant_factors_of_cyclic_product(orders);
    let formula = davenport_group_formula(&invariant)?;
    let r = davenport_exact(&g, budget(search))?;
    let (value, code) = match (r.complete, formula) {
        (true, Some(v)) if v != r.value => (r.value, EXIT_REFUTED),
        (true, _) => (r.value, EXIT_OK),
        (false, Some(v)) => (v, EXIT_INCOMPLETE),
        (false, None) => (r.value, EXIT_INCOMPLETE),
    };
    let name = if invariant.is_empty() {
        "C_1".to_string()
    } else {
        invariant.iter().map(|n| format!("C_{n}")).collect::<Vec<_>>().join(" x ")
    };
    let mut text = format!("D({name}) = {value}\n");
    text += &match formula {
        Some(v) => format!("  closed form: {v}\n"),
        None => "  closed form: none known for this structure\n".to_string(),
    };
    text += &format!("  {}", side_text("search:", &r, &g, output.timings));
    let record = GroupRecord {
        orders: orders.to_vec(),
        invariant_factors: invariant,
        value,
        formula,
        search: r.to_record(&g, output.timings),
    };
    emit(out, output.format, &record, text);
    Ok(code)
}

#[derive(Serialize)]
struct ReduceRecord {
    sequence: Vec<String>,
    sigma: String,
    reducible: bool,
    reduced: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constructive: Option<ConstructiveRecord>,
}

#[derive(Serialize)]
struct ConstructiveRecord {
    case: String,
    removed: Vec<String>,
    result: Vec<String>,
}

fn run_reduce(
    opts: &SemigroupOpts,
    seq: &str,
    constructive: bool,
    search: &SearchOpts,
    output: &OutputOpts,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let s = build_semigroup(opts)?;
    dump(&s, opts, output, out);
    let t = parse_sequence(&s, seq)?;
    let total = sigma(&s, &t)?;
    let witness = reduction_witness(&s, &t)?;
    let mut text = format!("T = {}\nsigma(T) = {}\n", t.display(&s), s.render(total));
    text += &match &witness {
        Some(w) => format!("reducible: yes\nT' = {}\n", w.display(&s)),
        None => "reducible: no\n".to_string(),
    };
    let mut record = ReduceRecord {
        sequence: t.render(&s),
        sigma: s.render(total),
        reducible: witness.is_some(),
        reduced: witness.as_ref().map(|w| w.render(&s)),
        constructive: None,
    };
    if constructive {
        let c = if check_group_with_zero_factors(&s).is_ok() {
            let u = units_of(&s)?;
            let d = davenport_exact(u.as_semigroup(), budget(search))?;
            if !d.complete {
                return Err(CliError::Usage("D(U(S)) search did not finish within the budget".into()));
            }
            let r = constructive_reduction(&s, d.value as usize, &t)?;
            ConstructiveRecord { case: snake(&r.case), removed: r.removed.render(&s), result: r.result.render(&s) }
        } else if s.modulus().is_some_and(|f| *f == square_of_x_plus_one(f.prime())) {
            let r = reduce_quadratic_case(&s, &t)?;
            ConstructiveRecord { case: snake(&r.case), removed: r.removed.render(&s), result: r.result.render(&s) }
        } else {
            return Err(CliError::Usage(
                "--constructive needs a product of groups with zeros or F_p[x]/<(x+1)^2>".into(),
            ));
        };
        text += &format!("constructive ({}): T' = {}\n", c.case, c.result.join("; "));
        record.constructive = Some(c);
    }
    emit(out, output.format, &record, text);
    Ok(EXIT_OK)
}

#[derive(Debug, Clone)]
enum Job {
    Theorem1(Poly),
    Lemma(Vec<u64>),
    Proposition(Prime),
    Probe(Poly),
}

impl Job {
    fn run(&self, config: &VerifyConfig) -> Result<VerificationReport, VerifyError> {
        match self {
            Job::Theorem1(f) => verify_theorem1(f, config),
            Job::Lemma(ns) => verify_lemma_product(ns, config),
            Job::Proposition(p) => verify_proposition(*p, config),
            Job::Probe(f) => conjecture_probe(f, config),
        }
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Verified | Status::Evidence => EXIT_OK,
        Status::Refuted => EXIT_REFUTED,
        Status::Incomplete => EXIT_INCOMPLETE,
        Status::OutsideHypothesis => EXIT_OUTSIDE,
    }
}

/// Worst outcome wins: refuted, usage, incomplete, outside, ok.
fn combine(a: i32, b: i32) -> i32 {
    let rank = |c| match c {
        EXIT_REFUTED => 4,
        EXIT_USAGE => 3,
        EXIT_INCOMPLETE => 2,
        EXIT_OUTSIDE => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn run_jobs(jobs: Vec<Job>, opts: &VerifyOpts, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let config =
        VerifyConfig { budget: budget(&opts.search), stress: opts.stress, samples: opts.samples, seed: opts.seed };
    let width = opts.jobs.max(1);
    let mut results = Vec::with_capacity(jobs.len());
    for chunk in jobs.chunks(width) {
        if width == 1 {
            results.extend(chunk.iter().map(|j| j.run(&config)));
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunk.iter().map(|j| scope.spawn(|| j.run(&config))).collect();
                results.extend(handles.into_iter().map(|h| h.join().expect("verification job panicked")));
            });
        }
    }

    let mut code = EXIT_OK;
    let mut rows = Vec::new();
    for result in results {
        match result {
            Ok(mut report) => {
                if !opts.output.timings {
                    report.strip_timings();
                }
                code = combine(code, status_code(report.status));
                emit(out, opts.output.format, &report, &report);
                rows.push(report);
            }
            Err(e) => {
                code = combine(code, EXIT_USAGE);
                let _ = writeln!(err, "error: {e}");
            }
        }
    }
    if opts.output.format == Format::Text && rows.len() > 1 {
        let _ = write!(out, "{}", summary_table(&rows));
    }
    Ok(code)
}

fn summary_table(rows: &[VerificationReport]) -> String {
    let label = |r: &VerificationReport| match (&r.params.f, &r.params.n_list) {
        (Some(f), _) => format!("p={} f={f}", r.params.p.unwrap_or(0)),
        (None, Some(ns)) => format!("n={ns:?}"),
        (None, None) => format!("p={}", r.params.p.unwrap_or(0)),
    };
    let width = rows.iter().map(|r| label(r).len()).max().unwrap_or(0).max(6);
    let mut text = format!("\n{:<18} {:<width$} {:>8} {:>8}  status\n", "claim", "params", "D(S)", "D(U(S))");
    for r in rows {
        let value = |side: &crate::verify::Side| format!("{}{}", if side.complete { "" } else { ">=" }, side.value);
        text += &format!(
            "{:<18} {:<width$} {:>8} {:>8}  {}\n",
            r.claim.to_string(),
            label(r),
            value(&r.lhs),
            value(&r.rhs),
            r.status
        );
    }
    text
}
