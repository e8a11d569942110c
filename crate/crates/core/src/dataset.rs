//! Datasets of `(x, y)` pairs: the v1 text format, train/validation splits,
//! and synthetic generation from planted targets.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::embedding::{interleave, PointND};
use crate::error::{Error, Result};
use crate::mahler::MahlerSeries;
use crate::model::RegressionModel;
use crate::padic::{Digit, PAdic, PrecisionPolicy, Prime};
use crate::rng::{derive_seed, seeded, SeededRng};

pub const DATA_HEADER: &str = "padic-regress-data v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Validation,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Validation => "val",
        })
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Validation),
            other => Err(format!("unknown split tag `{other}`")),
        }
    }
}

/// Which records a loss or fit looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Partition {
    Train,
    Validation,
    All,
}

impl Partition {
    pub fn contains(self, split: Split) -> bool {
        match self {
            Partition::All => true,
            Partition::Train => split == Split::Train,
            Partition::Validation => split == Split::Validation,
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Partition::Train => "train",
            Partition::Validation => "val",
            Partition::All => "all",
        })
    }
}

impl FromStr for Partition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "train" => Ok(Partition::Train),
            "val" => Ok(Partition::Validation),
            "all" => Ok(Partition::All),
            other => Err(format!("unknown partition `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub x: PointND,
    pub y: PAdic,
    pub split: Split,
}

impl Record {
    pub fn new(x: PointND, y: PAdic, split: Split) -> Self {
        Record { x, y, split }
    }
}

/// Records sharing one prime, dimension and precision `M`. All stored values
/// carry absolute precision exactly `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    prime: Prime,
    dimension: usize,
    precision: i64,
    records: Vec<Record>,
    comments: Vec<String>,
}

impl Dataset {
    pub fn new(prime: Prime, dimension: usize, precision: i64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig("dimension must be >= 1".into()));
        }
        if precision < 1 {
            return Err(Error::InvalidPrecision(format!("M must be >= 1, got {precision}")));
        }
        Ok(Dataset {
            prime,
            dimension,
            precision,
            records: Vec::new(),
            comments: Vec::new(),
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn add_comment(&mut self, comment: impl Into<String>) {
        self.comments.push(comment.into());
    }

    pub fn records_in(&self, partition: Partition) -> impl Iterator<Item = &Record> + '_ {
        self.records.iter().filter(move |r| partition.contains(r.split))
    }

    pub fn count(&self, partition: Partition) -> usize {
        self.records_in(partition).count()
    }

    /// Adds a record, normalizing every value to absolute precision `M`.
    pub fn push(&mut self, record: Record) -> Result<()> {
        if record.x.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: record.x.dimension(),
            });
        }
        if record.x.prime() != self.prime || record.y.prime() != self.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: record.y.prime().get(),
            });
        }
        if !record.y.is_integral() {
            return Err(Error::NotIntegral {
                valuation: record.y.valuation().unwrap_or(0),
            });
        }
        let m = self.precision;
        let coords = record.x.coords().iter().map(|c| c.with_abs_precision(m)).collect();
        self.records.push(Record {
            x: PointND::new(self.prime, coords)?,
            y: record.y.with_abs_precision(m),
            split: record.split,
        });
        Ok(())
    }

    /// Replaces the label of record `index`.
    pub fn set_label(&mut self, index: usize, y: PAdic) -> Result<()> {
        let m = self.precision;
        let record = self
            .records
            .get_mut(index)
            .ok_or_else(|| Error::InvalidConfig(format!("no record {index}")))?;
        record.y = y.with_abs_precision(m);
        Ok(())
    }

    /// The same records reduced to `precision <= M` digits.
    pub fn with_precision(&self, precision: i64) -> Result<Dataset> {
        let mut out = Dataset::new(self.prime, self.dimension, precision)?;
        out.comments = self.comments.clone();
        for r in &self.records {
            out.push(r.clone())?;
        }
        Ok(out)
    }

    /// Restricts to one partition (split tags are kept).
    pub fn subset(&self, partition: Partition) -> Dataset {
        Dataset {
            records: self.records_in(partition).cloned().collect(),
            ..self.clone()
        }
    }

    /// Seeded shuffle, then the first `floor(fraction * N)` shuffled records
    /// become training data and the rest validation. Record order is kept.
    pub fn split(&self, train_fraction: Ratio<u64>, seed: u64) -> Result<Dataset> {
        if *train_fraction.numer() == 0 || train_fraction > Ratio::from_integer(1) {
            return Err(Error::InvalidConfig(format!(
                "train fraction must lie in (0, 1], got {train_fraction}"
            )));
        }
        let n = self.records.len() as u64;
        let train = (train_fraction * n).to_integer() as usize;
        let mut order: Vec<usize> = (0..self.records.len()).collect();
        order.shuffle(&mut seeded(seed));
        let mut out = self.clone();
        for (rank, &idx) in order.iter().enumerate() {
            out.records[idx].split = if rank < train {
                Split::Train
            } else {
                Split::Validation
            };
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{DATA_HEADER} p={} n={} M={}\n",
            self.prime, self.dimension, self.precision
        );
        for c in &self.comments {
            out.push('#');
            out.push_str(c);
            out.push('\n');
        }
        for r in &self.records {
            for c in r.x.coords() {
                out.push_str(&c.to_string());
                out.push_str(" ; ");
            }
            out.push_str(&r.y.to_string());
            out.push_str(" ; ");
            out.push_str(&r.split.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dataset> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty dataset file".into(),
        })?;
        let mut data = parse_header(header)?;
        for (line, raw) in lines {
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            if let Some(comment) = raw.strip_prefix('#') {
                data.comments.push(comment.to_string());
                continue;
            }
            let record = data.parse_record(l).map_err(|message| Error::Parse { line, message })?;
            data.push(record).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(data)
    }

    fn parse_value(&self, field: &str) -> std::result::Result<PAdic, String> {
        let v = PAdic::parse_encoded(field, self.prime)?;
        if v.is_exact_zero() {
            return Ok(PAdic::zero_at(self.prime, self.precision));
        }
        if let Some(val) = v.valuation() {
            if val < 0 {
                return Err(format!("valuation {val} < 0: values must lie in Z_p"));
            }
        }
        if v.abs_precision().unwrap_or(0) > self.precision {
            return Err(format!("`{field}` has more than M = {} digits", self.precision));
        }
        Ok(v.with_abs_precision(self.precision))
    }

    fn parse_record(&self, line: &str) -> std::result::Result<Record, String> {
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() != self.dimension + 2 {
            return Err(format!(
                "expected {} fields (n inputs, label, split), found {}",
                self.dimension + 2,
                fields.len()
            ));
        }
        let coords = fields[..self.dimension]
            .iter()
            .map(|f| self.parse_value(f))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let y = self.parse_value(fields[self.dimension])?;
        let split = fields[self.dimension + 1].parse()?;
        let x = PointND::new(self.prime, coords).map_err(|e| e.to_string())?;
        Ok(Record::new(x, y, split))
    }
}

fn parse_header(header: &str) -> Result<Dataset> {
    let err = |message: String| Error::Parse { line: 1, message };
    let rest = header
        .trim()
        .strip_prefix(DATA_HEADER)
        .ok_or_else(|| err(format!("expected header `{DATA_HEADER} p=<p> n=<n> M=<M>`")))?;
    let (mut p, mut n, mut m) = (None, None, None);
    for token in rest.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| err(format!("bad header field `{token}`")))?;
        let value: u64 = value
            .parse()
            .map_err(|_| err(format!("bad number in `{token}`")))?;
        match key {
            "p" => p = Some(value),
            "n" => n = Some(value),
            "M" => m = Some(value),
            _ => return Err(err(format!("unknown header field `{key}`"))),
        }
    }
    let (Some(p), Some(n), Some(m)) = (p, n, m) else {
        return Err(err("header needs p, n and M".into()));
    };
    let prime = Prime::new(p).map_err(|e| err(e.to_string()))?;
    Dataset::new(prime, n as usize, m as i64).map_err(|e| err(e.to_string()))
}

/// One monomial `coef * prod_i x_i^{exponents[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: i64,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetFamily {
    /// Explicit Mahler weights over the interleaved variable.
    MahlerWeights(Vec<i64>),
    /// Integer polynomial in the coordinates.
    CoordinatePolynomial(Vec<Term>),
    /// Digit `j` of the label is `table[digit j of the interleaved input]`.
    DigitMap(Vec<Digit>),
}

/// Label perturbation `y += u p^exponent` with probability `probability`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Noise {
    pub exponent: u32,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpec {
    pub family: TargetFamily,
    pub noise: Option<Noise>,
}

impl TargetSpec {
    pub fn new(family: TargetFamily) -> Self {
        TargetSpec { family, noise: None }
    }

    pub fn with_noise(mut self, noise: Noise) -> Self {
        self.noise = Some(noise);
        self
    }

    fn validate(&self, prime: Prime, dimension: usize) -> Result<()> {
        match &self.family {
            TargetFamily::MahlerWeights(w) if w.is_empty() => {
                return Err(Error::InvalidConfig("mahler target needs weights".into()))
            }
            TargetFamily::CoordinatePolynomial(terms) => {
                if let Some(t) = terms.iter().find(|t| t.exponents.len() > dimension) {
                    return Err(Error::InvalidConfig(format!(
                        "term uses {} coordinates but n = {dimension}",
                        t.exponents.len()
                    )));
                }
            }
            TargetFamily::DigitMap(table) => {
                if table.len() != prime.get() as usize {
                    return Err(Error::InvalidConfig(format!(
                        "digit map needs {} entries, got {}",
                        prime,
                        table.len()
                    )));
                }
                if table.iter().any(|&d| d >= prime.get()) {
                    return Err(Error::InvalidConfig("digit map entry out of range".into()));
                }
            }
            _ => {}
        }
        if let Some(noise) = self.noise {
            if noise.exponent < 1 {
                return Err(Error::InvalidConfig("noise exponent must be >= 1".into()));
            }
            if !(noise.probability > 0.0 && noise.probability <= 1.0) {
                return Err(Error::InvalidConfig("noise probability must lie in (0, 1]".into()));
            }
        }
        Ok(())
    }

    /// The noiseless label `f(x)` modulo `p^precision`.
    pub fn label(&self, x: &PointND, precision: i64) -> Result<PAdic> {
        let prime = x.prime();
        let y = match &self.family {
            TargetFamily::MahlerWeights(w) => {
                let policy = PrecisionPolicy::new(precision, 0)?;
                let series = MahlerSeries::from_integers(prime, w, policy)?;
                RegressionModel::new(x.dimension(), precision, series)?.predict(x)?
            }
            TargetFamily::CoordinatePolynomial(terms) => {
                let mut acc = PAdic::exact_zero(prime);
                for t in terms {
                    let mut mono = PAdic::from_integer_abs(t.coef as i128, prime, precision);
                    for (c, &e) in x.coords().iter().zip(&t.exponents) {
                        for _ in 0..e {
                            mono = &mono * c;
                        }
                    }
                    acc = &acc + &mono;
                }
                acc
            }
            TargetFamily::DigitMap(table) => {
                let zeta = interleave(x).lift(precision);
                let digits = (0..precision)
                    .map(|j| table[zeta.digit(j).expect("lifted") as usize])
                    .collect();
                PAdic::from_digits(prime, 0, digits)?
            }
        };
        Ok(y.with_abs_precision(precision))
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
        match &self.family {
            TargetFamily::MahlerWeights(w) => {
                write!(f, "mahler:{}", join(&mut w.iter().map(|x| x.to_string())))?
            }
            TargetFamily::DigitMap(t) => {
                write!(f, "digitmap:{}", join(&mut t.iter().map(|x| x.to_string())))?
            }
            TargetFamily::CoordinatePolynomial(terms) => {
                let rendered: Vec<String> = terms
                    .iter()
                    .map(|t| {
                        let mut s = t.coef.to_string();
                        for (i, &e) in t.exponents.iter().enumerate() {
                            if e > 0 {
                                s.push_str(&format!("*x{}^{}", i + 1, e));
                            }
                        }
                        s
                    })
                    .collect();
                write!(f, "poly:{}", rendered.join("+"))?
            }
        }
        if let Some(noise) = self.noise {
            write!(f, " noise={}:{}", noise.exponent, noise.probability)?;
        }
        Ok(())
    }
}

/// Parses `mahler:<w0>,<w1>,...`, `digitmap:<t0>,...,<t_{p-1}>` or
/// `poly:<term>+<term>...` where a term is `c`, `x2`, `c*x1^2*x3`, `-x1`, ...
impl FromStr for TargetFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (family, params) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `<family>:<params>`, got `{s}`"))?;
        let ints = |p: &str| -> std::result::Result<Vec<i64>, String> {
            p.split(',')
                .map(|t| t.trim().parse().map_err(|_| format!("bad integer `{t}`")))
                .collect()
        };
        match family {
            "mahler" => Ok(TargetFamily::MahlerWeights(ints(params)?)),
            "digitmap" => Ok(TargetFamily::DigitMap(
                ints(params)?
                    .into_iter()
                    .map(|d| Digit::try_from(d).map_err(|_| format!("bad digit {d}")))
                    .collect::<std::result::Result<_, _>>()?,
            )),
            "poly" => params
                .split('+')
                .map(parse_term)
                .collect::<std::result::Result<_, _>>()
                .map(TargetFamily::CoordinatePolynomial),
            other => Err(format!("unknown target family `{other}`")),
        }
    }
}

fn parse_term(term: &str) -> std::result::Result<Term, String> {
    let term = term.trim();
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, term),
    };
    let mut coef = sign;
    let mut exponents: Vec<u32> = Vec::new();
    for factor in body.split('*').map(str::trim) {
        if let Some(var) = factor.strip_prefix('x') {
            let (index, power) = match var.split_once('^') {
                Some((i, e)) => (i, e.parse().map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (var, 1),
            };
            let index: usize = index
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| format!("bad variable `{factor}`"))?;
            if exponents.len() < index {
                exponents.resize(index, 0);
            }
            exponents[index - 1] += power;
        } else {
            let c: i64 = factor.parse().map_err(|_| format!("bad coefficient `{factor}`"))?;
            coef *= c;
        }
    }
    Ok(Term { coef, exponents })
}

fn random_digits(rng: &mut SeededRng, prime: Prime, count: i64) -> Vec<Digit> {
    (0..count).map(|_| rng.gen_range(0..prime.get())).collect()
}

/// Uniform `p`-adic integer modulo `p^precision`.
pub fn random_integer(rng: &mut SeededRng, prime: Prime, precision: i64) -> PAdic {
    PAdic::from_digits(prime, 0, random_digits(rng, prime, precision)).expect("digits in range")
}

/// Uniform unit of Z_p modulo `p^precision`.
pub fn random_unit(rng: &mut SeededRng, prime: Prime, precision: i64) -> PAdic {
    let mut digits = random_digits(rng, prime, precision);
    digits[0] = rng.gen_range(1..prime.get());
    PAdic::from_digits(prime, 0, digits).expect("digits in range")
}

/// Draws `count` uniform points of Z_p^n and labels them with `spec`.
/// All records start in the training split.
pub fn generate(
    spec: &TargetSpec,
    dimension: usize,
    count: usize,
    prime: Prime,
    precision: i64,
    seed: u64,
) -> Result<Dataset> {
    spec.validate(prime, dimension)?;
    let mut data = Dataset::new(prime, dimension, precision)?;
    data.add_comment(format!(" target: {spec}"));
    data.add_comment(format!(" seed: {seed}"));
    let mut rng = seeded(seed);
    // separate stream so that toggling noise leaves the inputs unchanged
    let mut noise_rng = seeded(derive_seed(seed, 1));
    for _ in 0..count {
        let coords = (0..dimension)
            .map(|_| random_integer(&mut rng, prime, precision))
            .collect();
        let x = PointND::new(prime, coords)?;
        let mut y = spec.label(&x, precision)?;
        if let Some(noise) = spec.noise {
            if noise_rng.gen_bool(noise.probability) {
                let bump = random_unit(&mut noise_rng, prime, precision).shifted(noise.exponent as i64);
                y = (&y + &bump).with_abs_precision(precision);
            }
        }
        data.push(Record::new(x, y, Split::Train))?;
    }
    Ok(data)
}
