use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bivar::{resultant, ZPoly};
use super::multi::MultiPoly;
use super::uni::{positive_rational_roots, rational_roots, UniPoly};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::strategy::GENERIC_VERTEX_NAMES;

/// Linear factors every vertex denominator is built from: `x`, `z`,
/// `x+y`, `y+z`. All are positive on the open positive orthant.
const FACTOR_NAMES: [&str; 4] = ["x", "z", "x+y", "y+z"];

fn factor_poly(i: usize) -> MultiPoly {
    match i {
        0 => MultiPoly::x(),
        1 => MultiPoly::z(),
        2 => MultiPoly::x() + MultiPoly::y(),
        3 => MultiPoly::y() + MultiPoly::z(),
        _ => unreachable!("four factors"),
    }
}

fn factor_product(exps: &[u32; 4]) -> MultiPoly {
    exps.iter()
        .enumerate()
        .fold(MultiPoly::constant(Rational::one()), |acc, (i, &e)| acc * factor_poly(i).pow(e))
}

/// One vertex of the generic 4-set tree as a rational function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFormula {
    pub name: &'static str,
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
    /// Exponents of `x`, `z`, `x+y`, `y+z` in the denominator.
    #[serde(skip)]
    pub denominator_factors: [u32; 4],
}

impl VertexFormula {
    pub fn eval(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        self.numerator.eval(x, y, z) / self.denominator.eval(x, y, z)
    }
}

/// The twelve vertices `0, 1, f₀, …, f₁₁₁` in tree order.
pub fn vertex_formulas() -> Vec<VertexFormula> {
    let p = MultiPoly::from_terms;
    let numerators: [(MultiPoly, [u32; 4]); 12] = [
        (MultiPoly::zero(), [0; 4]),
        (p(&[(1, [0, 0, 0])]), [0; 4]),
        (p(&[(1, [1, 0, 0]), (1, [0, 1, 0]), (1, [0, 0, 1])]), [1, 0, 0, 0]),
        (p(&[(1, [1, 0, 0]), (1, [0, 1, 0]), (1, [0, 0, 1])]), [0, 0, 1, 0]),
        (p(&[(1, [1, 0, 0]), (1, [0, 1, 0])]), [1, 0, 0, 0]),
        (p(&[(-1, [1, 1, 0]), (-1, [0, 2, 0]), (-1, [0, 1, 1])]), [1, 1, 0, 0]),
        (p(&[(1, [1, 0, 0])]), [0, 0, 1, 0]),
        (p(&[(1, [0, 1, 1]), (1, [1, 1, 0]), (1, [0, 2, 0])]), [0, 0, 1, 1]),
        (
            p(&[(-1, [2, 0, 0]), (-2, [1, 1, 0]), (-1, [0, 2, 0]), (-1, [0, 1, 1]), (-1, [1, 0, 1])]),
            [1, 1, 0, 0],
        ),
        (p(&[(-1, [0, 2, 0]), (1, [1, 0, 1]), (-1, [0, 1, 1])]), [1, 1, 0, 0]),
        (p(&[(-1, [2, 0, 0]), (-1, [1, 1, 0]), (-1, [1, 0, 1])]), [0, 0, 1, 1]),
        (p(&[(2, [0, 1, 1]), (1, [1, 1, 0]), (1, [0, 2, 0]), (1, [1, 0, 1])]), [0, 0, 1, 1]),
    ];
    GENERIC_VERTEX_NAMES
        .iter()
        .zip(numerators)
        .map(|(&name, (numerator, factors))| VertexFormula {
            name,
            numerator,
            denominator: factor_product(&factors),
            denominator_factors: factors,
        })
        .collect()
}

pub fn vertex_formula(name: &str) -> Result<VertexFormula> {
    vertex_formulas()
        .into_iter()
        .find(|v| v.name == name)
        .ok_or_else(|| Error::Domain(format!("no vertex named {name:?}")))
}

/// `p - q` over the least common denominator in the factor basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Difference {
    pub first: String,
    pub second: String,
    pub numerator: MultiPoly,
    /// Product of basis factors, positive on the positive orthant.
    pub denominator: String,
}

/// Numerator of `p - q` over the least common denominator built from
/// `x`, `z`, `x+y`, `y+z`. The denominator is positive on the open positive
/// orthant, so the numerator carries the sign of `p - q` there.
pub fn diff_numerator(p: &str, q: &str) -> Result<Difference> {
    if p == q {
        return Err(Error::Contract(format!("difference of {p} with itself")));
    }
    let (fp, fq) = (vertex_formula(p)?, vertex_formula(q)?);
    let lcm: [u32; 4] = std::array::from_fn(|i| fp.denominator_factors[i].max(fq.denominator_factors[i]));
    let cofactor = |f: &VertexFormula| {
        let e: [u32; 4] = std::array::from_fn(|i| lcm[i] - f.denominator_factors[i]);
        factor_product(&e)
    };
    let numerator = &fp.numerator * &cofactor(&fp) - &fq.numerator * &cofactor(&fq);
    let denominator = lcm
        .iter()
        .zip(FACTOR_NAMES)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, name)| if e == 1 { format!("({name})") } else { format!("({name})^{e}") })
        .collect::<Vec<_>>()
        .join("*");
    Ok(Difference {
        first: p.to_string(),
        second: q.to_string(),
        numerator,
        denominator: if denominator.is_empty() { "1".into() } else { denominator },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    AllPositive,
    AllNegative,
    Mixed,
}

/// Sign pattern of the coefficients; a uniform sign rules out zeros on the
/// open positive orthant.
pub fn uniform_sign(p: &MultiPoly) -> Result<SignClass> {
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial has no sign".into()));
    }
    let pos = p.terms().any(|(_, c)| c.is_positive());
    let neg = p.terms().any(|(_, c)| c.is_negative());
    Ok(match (pos, neg) {
        (true, false) => SignClass::AllPositive,
        (false, true) => SignClass::AllNegative,
        _ => SignClass::Mixed,
    })
}

/// The three exceptional relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "g1")]
    G1,
    #[serde(rename = "g2")]
    G2,
    #[serde(rename = "g3")]
    G3,
}

impl Relation {
    pub const ALL: [Relation; 3] = [Relation::G1, Relation::G2, Relation::G3];

    pub fn index(self) -> usize {
        match self {
            Relation::G1 => 1,
            Relation::G2 => 2,
            Relation::G3 => 3,
        }
    }

    pub fn from_index(i: usize) -> Result<Relation> {
        match i {
            1 => Ok(Relation::G1),
            2 => Ok(Relation::G2),
            3 => Ok(Relation::G3),
            _ => Err(Error::Domain(format!("relation index {i} is not in 1..3"))),
        }
    }

    /// The vertex pair whose difference defines the relation.
    pub fn vertices(self) -> (&'static str, &'static str) {
        match self {
            Relation::G1 => ("f11", "f011"),
            Relation::G2 => ("f110", "f01"),
            Relation::G3 => ("f110", "f011"),
        }
    }

    pub fn numerator(self) -> MultiPoly {
        let (p, q) = self.vertices();
        diff_numerator(p, q).expect("relation vertices exist").numerator
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.index())
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let i = s
            .trim()
            .trim_start_matches('g')
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("unknown relation {s:?}")))?;
        Relation::from_index(i)
    }
}

/// Vertex pairs whose coincidence makes `S` (or its reflection) symmetric.
pub const SYMMETRY_PAIRS: [(&str, &str); 3] = [("f00", "f1"), ("f10", "f11"), ("f011", "0")];

fn same_pair(a: (&str, &str), b: (&str, &str)) -> bool {
    a == b || (a.0 == b.1 && a.1 == b.0)
}

/// Relations that vanish at `(x, y, z)`: every vertex pair that coincides there.
pub fn vanishing_pairs(x: &Rational, y: &Rational, z: &Rational) -> Vec<(&'static str, &'static str)> {
    let values: Vec<(&'static str, Rational)> = vertex_formulas().iter().map(|v| (v.name, v.eval(x, y, z))).collect();
    let mut out = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i].1 == values[j].1 {
                out.push((values[i].0, values[j].0));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    /// Coincidence forces a symmetric target.
    Symmetry,
    /// One of g₁, g₂, g₃.
    Exceptional,
    /// Numerator coefficients share one sign.
    UniformSign,
    /// Mixed signs, but no positive root turned up in the bounded search.
    MixedNoRootFound,
    /// Mixed signs with a positive root or sign change found.
    MixedWithRoots,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAnalysis {
    pub first: String,
    pub second: String,
    pub class: PairClass,
    pub sign: SignClass,
    /// Whether the bounded search saw a zero or a sign change.
    pub root_evidence: bool,
}

/// Bounded evidence for a positive zero of a homogeneous numerator: rational
/// points `(a/b, 1, c/d)` with all parts at most 6, then a sign change on
/// the integer grid `{1..grid}³`.
fn positive_root_evidence(p: &MultiPoly, grid: i128) -> bool {
    let small: Vec<Rational> = (1..=6)
        .flat_map(|n| (1..=6).map(move |d| Rational::new(n, d)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let one = Rational::one();
    for x in &small {
        for z in &small {
            if p.eval(x, &one, z).is_zero() {
                return true;
            }
        }
    }
    let (mut pos, mut neg) = (false, false);
    for x in 1..=grid {
        for y in 1..=grid {
            for z in 1..=grid {
                let v = p
                    .eval_i128(x, y, z)
                    .unwrap_or_else(|| p.eval(&Rational::from(x as i64), &Rational::from(y as i64), &Rational::from(z as i64)).numer().sign_i128());
                if v == 0 {
                    return true;
                }
                pos |= v > 0;
                neg |= v < 0;
                if pos && neg {
                    return true;
                }
            }
        }
    }
    false
}

trait SignI128 {
    fn sign_i128(&self) -> i128;
}

impl SignI128 for num_bigint::BigInt {
    fn sign_i128(&self) -> i128 {
        match self.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// Classifies all 66 vertex pairs.
pub fn analyze_pairs(grid: i128, perturb: Option<Relation>) -> Vec<PairAnalysis> {
    let names = GENERIC_VERTEX_NAMES;
    let mut out = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let pair = (names[i], names[j]);
            let exceptional = Relation::ALL.into_iter().find(|r| same_pair(r.vertices(), pair));
            let mut numerator = diff_numerator(pair.0, pair.1).expect("known vertices").numerator;
            if let (Some(r), Some(p)) = (exceptional, perturb) {
                if r == p {
                    numerator = perturbed(&numerator);
                }
            }
            let sign = uniform_sign(&numerator).expect("distinct formulas differ");
            let root_evidence = sign == SignClass::Mixed && positive_root_evidence(&numerator, grid);
            let class = if SYMMETRY_PAIRS.iter().any(|&s| same_pair(s, pair)) {
                PairClass::Symmetry
            } else if exceptional.is_some() {
                PairClass::Exceptional
            } else if sign != SignClass::Mixed {
                PairClass::UniformSign
            } else if root_evidence {
                PairClass::MixedWithRoots
            } else {
                PairClass::MixedNoRootFound
            };
            out.push(PairAnalysis {
                first: pair.0.into(),
                second: pair.1.into(),
                class,
                sign,
                root_evidence,
            });
        }
    }
    out
}

/// Adds `y^d` (keeping homogeneity) to a numerator of total degree `d`.
fn perturbed(p: &MultiPoly) -> MultiPoly {
    p + &MultiPoly::monomial(Rational::one(), [0, p.total_degree(), 0])
}

fn relation_numerator(r: Relation, perturb: Option<Relation>) -> MultiPoly {
    let n = r.numerator();
    if perturb == Some(r) {
        perturbed(&n)
    } else {
        n
    }
}

/// A positive rational solution `(x, y, z)` with `y = 1`.
pub type Triple = [Rational; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub pair: [usize; 2],
    /// `gᵢ` numerator with `y = 1`.
    pub first: MultiPoly,
    /// `φ(gⱼ)` numerator with `y = 1`.
    pub second: MultiPoly,
    /// Common factor removed before elimination.
    pub common_factor: MultiPoly,
    /// The common factor has one coefficient sign, so it has no positive zeros.
    pub common_factor_harmless: bool,
    /// Resultant in `z`, coefficients lowest degree first.
    pub eliminant: UniPoly,
    pub eliminant_positive_rational_roots: Vec<Rational>,
    pub solutions: Vec<Triple>,
}

/// Solves `gᵢ = φ(gⱼ) = 0` over the positive rationals with `y = 1`.
pub fn appendix_pair(i: usize, j: usize) -> Result<PairReport> {
    appendix_pair_with(i, j, None)
}

fn appendix_pair_with(i: usize, j: usize, perturb: Option<Relation>) -> Result<PairReport> {
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i > j {
        return Err(Error::Domain(format!("pair ({i},{j}) must satisfy 1 <= i <= j <= 3")));
    }
    let one = Rational::one();
    let gi = relation_numerator(Relation::from_index(i)?, perturb).with_y(&one);
    let gj = relation_numerator(Relation::from_index(j)?, perturb).phi().with_y(&one);
    let (a, b) = (ZPoly::from_multi(&gi)?, ZPoly::from_multi(&gj)?);
    let common = a.gcd(&b);
    let (ar, br) = (a.exact_div(&common)?, b.exact_div(&common)?);
    let common_multi = common.to_multi();
    let common_factor_harmless = common.degree() == Some(0) && common.leading().degree() == Some(0)
        || uniform_sign(&common_multi)? != SignClass::Mixed;
    let eliminant = resultant(&ar, &br)?;
    if eliminant.is_zero() {
        return Err(Error::Internal(format!("eliminant of pair ({i},{j}) vanishes identically")));
    }
    let roots = positive_rational_roots(&eliminant)?;
    let mut solutions = BTreeSet::new();
    for x0 in &roots {
        let (za, zb) = (ar.at_x(x0), br.at_x(x0));
        let common_z = match (za.is_zero(), zb.is_zero()) {
            (true, true) => {
                return Err(Error::Internal(format!("pair ({i},{j}) has a whole line of solutions at x = {x0}")))
            }
            (true, false) => zb,
            (false, true) => za,
            (false, false) => za.gcd(&zb),
        };
        if common_z.degree().unwrap_or(0) == 0 {
            continue;
        }
        for z0 in positive_rational_roots(&common_z)? {
            if gi.eval(x0, &one, &z0).is_zero() && gj.eval(x0, &one, &z0).is_zero() {
                solutions.insert([x0.clone(), one.clone(), z0]);
            }
        }
    }
    Ok(PairReport {
        pair: [i, j],
        first: gi,
        second: gj,
        common_factor: common_multi,
        common_factor_harmless,
        eliminant,
        eliminant_positive_rational_roots: roots.into_iter().collect(),
        solutions: solutions.into_iter().collect(),
    })
}

/// A row of the appendix table: the polynomial `x` must be a root of.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub pair: [usize; 2],
    pub polynomial: UniPoly,
    pub positive_rational_roots: Vec<Rational>,
    pub divides_eliminant: bool,
}

pub fn table_polynomials() -> Vec<([usize; 2], UniPoly)> {
    vec![
        ([1, 1], UniPoly::from_ints_desc(&[1, 0, -4, -6, -4, -1])),
        ([1, 3], UniPoly::from_ints_desc(&[1, -4, -12, -4, 10, 11, 5, 1])),
        ([2, 3], UniPoly::from_ints_desc(&[1, 1, -7, -15, -3, 19, 23, 11, 2])),
        ([3, 3], UniPoly::from_ints_desc(&[3, 17, 23, -6, -34, -22, 2, 7, 2])),
    ]
}

/// `h`, the `y = 1` numerator of g₂ as printed.
pub fn printed_h() -> MultiPoly {
    MultiPoly::from_terms(&[
        (-1, [3, 0, 1]),
        (-1, [2, 0, 2]),
        (1, [1, 0, 2]),
        (1, [2, 0, 0]),
        (3, [1, 0, 1]),
        (1, [0, 0, 2]),
        (2, [1, 0, 0]),
        (2, [0, 0, 1]),
        (1, [0, 0, 0]),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortcutReport {
    /// `h` equals the `y = 1` numerator of g₂.
    pub h_matches: bool,
    /// `φ(h) - h = xz(1+x+z)(x-z)` as polynomials.
    pub identity_holds: bool,
    /// `h(x, x)`.
    pub diagonal: UniPoly,
    pub diagonal_matches_printed: bool,
    pub half_is_root: bool,
    pub diagonal_positive_rational_roots: Vec<Rational>,
}

fn shortcut_22(perturb: Option<Relation>) -> Result<ShortcutReport> {
    let h = relation_numerator(Relation::G2, perturb).with_y(&Rational::one());
    let x = MultiPoly::x();
    let z = MultiPoly::z();
    let one = MultiPoly::constant(Rational::one());
    let rhs = &x * &z * (&one + &x + &z) * (&x - &z);
    let identity_holds = h.phi() - &h == rhs;
    let diag = h.with_z_eq_x();
    let diagonal = UniPoly::new((0..=diag.degree_in(0)).map(|k| diag.coefficient([k, 0, 0])).collect());
    let printed = UniPoly::from_ints_desc(&[-2, 1, 5, 4, 1]);
    Ok(ShortcutReport {
        h_matches: h == printed_h(),
        identity_holds,
        diagonal_matches_printed: diagonal == printed,
        half_is_root: printed.eval(&Rational::new(1, 2)).is_zero(),
        diagonal_positive_rational_roots: positive_rational_roots(&diagonal)?.into_iter().collect(),
        diagonal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub samples: usize,
    pub first_chain_holds: bool,
    /// `f₁₁₀ < 0 < f₁₁ < 1 < f₁₁₁ < f₁` and `0 < f₁₀ < 1`.
    pub second_chain_holds: bool,
    /// The literal second chain `f₁₁₀ < f₀ < f₁₁` fails here.
    pub literal_second_chain_counterexample: Option<Triple>,
}

fn chain_holds(values: &BTreeMap<&str, Rational>, chain: &[&str]) -> bool {
    let get = |n: &str| match n {
        "0" => Rational::zero(),
        "1" => Rational::one(),
        _ => values[n].clone(),
    };
    chain.windows(2).all(|w| get(w[0]) < get(w[1]))
}

pub const FIRST_CHAINS: [&[&str]; 2] = [&["f010", "f01", "0", "1", "f00", "f0"], &["f01", "f011", "1"]];
pub const SECOND_CHAINS: [&[&str]; 2] = [&["f110", "0", "f11", "1", "f111", "f1"], &["0", "f10", "1"]];
pub const LITERAL_SECOND_CHAIN: &[&str] = &["f110", "f0", "f11", "1", "f111", "f1"];

fn values_at(t: &Triple) -> BTreeMap<&'static str, Rational> {
    vertex_formulas().iter().map(|v| (v.name, v.eval(&t[0], &t[1], &t[2]))).collect()
}

/// Checks both inequality chains at `samples` random positive rational triples.
pub fn check_chains(samples: usize, seed: u64) -> ChainReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(1..=60), rng.gen_range(1..=20));
    let (mut first, mut second) = (true, true);
    for _ in 0..samples {
        let t = [draw(&mut rng), draw(&mut rng), draw(&mut rng)];
        let values = values_at(&t);
        first &= FIRST_CHAINS.iter().all(|c| chain_holds(&values, c));
        second &= SECOND_CHAINS.iter().all(|c| chain_holds(&values, c));
    }
    let unit = [Rational::one(), Rational::one(), Rational::one()];
    let literal_second_chain_counterexample =
        (!chain_holds(&values_at(&unit), LITERAL_SECOND_CHAIN)).then_some(unit);
    ChainReport {
        samples,
        first_chain_holds: first,
        second_chain_holds: second,
        literal_second_chain_counterexample,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixOptions {
    pub chain_samples: usize,
    pub grid: i128,
    pub seed: u64,
    /// Replace one relation by a perturbed copy (mutation check).
    pub perturb: Option<Relation>,
}

impl Default for AppendixOptions {
    fn default() -> Self {
        AppendixOptions {
            chain_samples: 10_000,
            grid: 50,
            seed: 2024,
            perturb: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub passed: bool,
    pub chains: ChainReport,
    pub pairs: Vec<PairAnalysis>,
    pub exceptional_with_roots: Vec<Relation>,
    pub special_point: Triple,
    pub vanishing_at_special_point: Vec<String>,
    pub cases: Vec<PairReport>,
    pub shortcut_22: ShortcutReport,
    pub table: Vec<TableRow>,
    pub flagged_solutions: Vec<Triple>,
    pub discrepancies: Vec<String>,
}

pub fn verify_appendix() -> Result<AppendixReport> {
    verify_appendix_with(&AppendixOptions::default())
}

/// Runs every appendix check; any mismatch is listed in `discrepancies`
/// and clears `passed`.
pub fn verify_appendix_with(opts: &AppendixOptions) -> Result<AppendixReport> {
    let mut bad = Vec::new();
    let chains = check_chains(opts.chain_samples, opts.seed);
    if !chains.first_chain_holds {
        bad.push("first inequality chain fails at a sampled point".to_string());
    }
    if !chains.second_chain_holds {
        bad.push("second inequality chain fails at a sampled point".to_string());
    }

    let pairs = analyze_pairs(opts.grid, opts.perturb);
    let with_roots: Vec<&PairAnalysis> = pairs
        .iter()
        .filter(|p| p.class == PairClass::MixedWithRoots)
        .collect();
    for p in &with_roots {
        bad.push(format!("{} = {} has positive solutions but is not exceptional", p.first, p.second));
    }
    let mut exceptional_with_roots = Vec::new();
    for r in Relation::ALL {
        let (a, b) = r.vertices();
        let analysis = pairs
            .iter()
            .find(|p| same_pair((&p.first, &p.second), (a, b)))
            .expect("relation pairs are analyzed");
        if analysis.root_evidence {
            exceptional_with_roots.push(r);
        } else {
            bad.push(format!("{r} shows no positive solutions"));
        }
    }

    let special = [Rational::integer(3), Rational::one(), Rational::integer(2)];
    let g1 = relation_numerator(Relation::G1, opts.perturb);
    let g2_phi = relation_numerator(Relation::G2, opts.perturb).phi();
    if !g1.eval(&special[0], &special[1], &special[2]).is_zero() {
        bad.push("g1 does not vanish at (3,1,2)".into());
    }
    if !g2_phi.eval(&special[0], &special[1], &special[2]).is_zero() {
        bad.push("phi(g2) does not vanish at (3,1,2)".into());
    }
    let vanishing_at_special_point = vanishing_pairs(&special[0], &special[1], &special[2])
        .into_iter()
        .map(|(a, b)| format!("{a}={b}"))
        .collect();

    let printed_12 = [
        MultiPoly::from_terms(&[
            (-1, [2, 0, 2]),
            (1, [1, 0, 2]),
            (2, [1, 0, 1]),
            (1, [0, 0, 2]),
            (1, [1, 0, 0]),
            (2, [0, 0, 1]),
            (1, [0, 0, 0]),
        ]),
        MultiPoly::from_terms(&[
            (-1, [2, 0, 2]),
            (-1, [1, 0, 3]),
            (1, [2, 0, 1]),
            (1, [2, 0, 0]),
            (3, [1, 0, 1]),
            (1, [0, 0, 2]),
            (2, [1, 0, 0]),
            (2, [0, 0, 1]),
            (1, [0, 0, 0]),
        ]),
    ];

    let mut cases = Vec::new();
    let mut flagged = BTreeSet::new();
    for i in 1..=3 {
        for j in i..=3 {
            let case = appendix_pair_with(i, j, opts.perturb)?;
            if !case.common_factor_harmless {
                bad.push(format!("pair ({i},{j}) shares a factor with positive zeros: {}", case.common_factor));
            }
            let expected: Vec<Triple> = if (i, j) == (1, 2) { vec![special.clone()] } else { Vec::new() };
            if case.solutions != expected {
                bad.push(format!(
                    "pair ({i},{j}): expected solutions {expected:?}, found {:?}",
                    case.solutions
                ));
            }
            if (i, j) == (1, 2) {
                if case.first != printed_12[0] || case.second != printed_12[1] {
                    bad.push("pair (1,2) system differs from the printed equations".into());
                }
                if case.eliminant_positive_rational_roots != vec![Rational::integer(3)] {
                    bad.push(format!(
                        "pair (1,2) eliminant has positive rational roots {:?}, expected {{3}}",
                        case.eliminant_positive_rational_roots
                    ));
                }
                let printed_factor = UniPoly::from_ints_desc(&[1, -1, -5, -3]);
                if !printed_factor.divides(&case.eliminant) {
                    bad.push("x^3 - x^2 - 5x - 3 does not divide the (1,2) eliminant".into());
                }
            }
            flagged.extend(case.solutions.iter().cloned());
            cases.push(case);
        }
    }

    let shortcut = shortcut_22(opts.perturb)?;
    if !shortcut.h_matches {
        bad.push("g2 numerator with y = 1 differs from the printed h".into());
    }
    if !shortcut.identity_holds {
        bad.push("phi(h) - h != xz(1+x+z)(x-z)".into());
    }
    if !shortcut.diagonal_matches_printed {
        bad.push(format!("h(x,x) = {} differs from -2x^4 + x^3 + 5x^2 + 4x + 1", shortcut.diagonal));
    }
    if shortcut.half_is_root || !shortcut.diagonal_positive_rational_roots.is_empty() {
        bad.push("h(x,x) has a positive rational root".into());
    }

    let mut table = Vec::new();
    for (pair, polynomial) in table_polynomials() {
        let roots: Vec<Rational> = positive_rational_roots(&polynomial)?.into_iter().collect();
        if !roots.is_empty() {
            bad.push(format!("table row {pair:?} has positive rational roots {roots:?}"));
        }
        let eliminant = &cases
            .iter()
            .find(|c| c.pair == pair)
            .expect("every table pair is a case")
            .eliminant;
        if !polynomial.divides(eliminant) {
            bad.push(format!("table row {pair:?} does not divide the eliminant"));
        }
        table.push(TableRow {
            pair,
            divides_eliminant: polynomial.divides(eliminant),
            polynomial,
            positive_rational_roots: roots,
        });
    }

    Ok(AppendixReport {
        passed: bad.is_empty(),
        chains,
        pairs,
        exceptional_with_roots,
        special_point: special,
        vanishing_at_special_point,
        cases,
        shortcut_22: shortcut,
        table,
        flagged_solutions: flagged.into_iter().collect(),
        discrepancies: bad,
    })
}

/// All rational roots of the eliminant of a pair (not only positive ones).
pub fn eliminant_rational_roots(case: &PairReport) -> Result<BTreeSet<Rational>> {
    rational_roots(&case.eliminant)
}
