//! Spaces M_k(Γ0(N), χ): dimensions, the feasibility inequality, Sturm
//! bounds, and explicit echelon bases assembled from generator recipes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{CharKind, DirichletChar};
use crate::data::DataSet;
use crate::eisenstein::{eisenstein_basis, eisenstein_series, EisensteinElement};
use crate::error::{Error, Result};
use crate::eta::{sigma_table, EtaQuotient};
use crate::linalg::{rref, ModEchelon};
use crate::rational::{self, big, factor, frac, gamma0_index, int, Rational};
use crate::series::QSeries;

/// Levels for which dimensions and bases are supported.
pub const CURATED_LEVELS: [u64; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25];

/// Extra coefficients checked beyond every Sturm bound.
pub const SAFETY_MARGIN: i64 = 10;

/// Prime used when sieving candidate generators for linear independence.
const SIEVE_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub level: u64,
    pub character: DirichletChar,
    pub weight: i64,
}

impl SpaceSpec {
    pub fn new(level: u64, kind: CharKind, weight: i64) -> Result<Self> {
        if !CURATED_LEVELS.contains(&level) {
            return Err(Error::UnsupportedSpace(format!(
                "level {level} is not curated"
            )));
        }
        let character = DirichletChar::new(level, kind)
            .map_err(|_| Error::UnsupportedSpace(format!("{} at level {level}", kind.key())))?;
        Ok(SpaceSpec {
            level,
            character,
            weight,
        })
    }

    pub fn kind(&self) -> CharKind {
        self.character.kind()
    }

    pub fn with_weight(&self, weight: i64) -> Self {
        SpaceSpec { weight, ..*self }
    }

    /// χ(−1) = (−1)^k.
    pub fn parity_ok(&self) -> bool {
        let sign = if self.weight.rem_euclid(2) == 0 {
            1
        } else {
            -1
        };
        self.character.parity() == sign
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M_{}(Gamma0({}), {})",
            self.weight,
            self.level,
            self.kind().key()
        )
    }
}

/// ⌊k·[SL2(Z):Γ0(N)]/12⌋ + 1.
pub fn sturm_bound(level: u64, weight: i64) -> i64 {
    weight.max(0) * gamma0_index(level) as i64 / 12 + 1
}

fn lambda(r: u32, s: u32, p: u64) -> u64 {
    if 2 * s <= r {
        if r.is_multiple_of(2) {
            p.pow(r / 2) + p.pow(r / 2 - 1)
        } else {
            2 * p.pow(r / 2)
        }
    } else {
        2 * p.pow(r - s)
    }
}

/// Π λ(r_p, s_p, p): the number of Eisenstein series of weight ≥ 3 in
/// M_k(Γ0(N), χ) counted over all characters, complex ones included.
fn lambda_product(level: u64, conductor: u64) -> u64 {
    factor(level)
        .into_iter()
        .map(|(p, r)| {
            let s = factor(conductor)
                .into_iter()
                .find(|&(q, _)| q == p)
                .map_or(0, |(_, e)| e);
            lambda(r, s, p)
        })
        .product()
}

/// Σ χ(x) over roots of `poly` modulo N.
fn twisted_root_count(spec: &SpaceSpec, poly: impl Fn(i64) -> i64) -> i64 {
    let n = spec.level as i64;
    (0..n)
        .filter(|&x| poly(x).rem_euclid(n) == 0)
        .map(|x| spec.character.value(x) as i64)
        .sum()
}

fn check_curated(spec: &SpaceSpec) -> Result<()> {
    if !CURATED_LEVELS.contains(&spec.level) || spec.character.modulus() != spec.level {
        return Err(Error::UnsupportedSpace(spec.to_string()));
    }
    Ok(())
}

/// dim S_k(Γ0(N), χ) by Cohen–Oesterlé for k ≥ 2; weight one cusp forms are
/// absent at every curated level.
pub fn dim_s(spec: &SpaceSpec) -> Result<u64> {
    check_curated(spec)?;
    let k = spec.weight;
    if k < 2 || !spec.parity_ok() {
        return Ok(0);
    }
    let g4 = match k.rem_euclid(4) {
        0 => frac(1, 4),
        2 => frac(-1, 4),
        _ => Rational::zero(),
    };
    let g3 = match k.rem_euclid(3) {
        0 => frac(1, 3),
        2 => frac(-1, 3),
        _ => Rational::zero(),
    };
    let s4 = twisted_root_count(spec, |x| x * x + 1);
    let s3 = twisted_root_count(spec, |x| x * x + x + 1);
    let lam = lambda_product(spec.level, spec.character.conductor()) as i64;
    let mut d = frac((k - 1) * gamma0_index(spec.level) as i64, 12) - frac(lam, 2)
        + g4 * int(s4)
        + g3 * int(s3);
    if k == 2 && spec.character.is_trivial() {
        d += int(1);
    }
    debug_assert!(d.is_integer(), "non-integral dimension for {spec}");
    Ok(d.to_integer().try_into().unwrap_or(0))
}

/// Dimension of the Eisenstein subspace.
pub fn dim_e(spec: &SpaceSpec) -> Result<u64> {
    check_curated(spec)?;
    let k = spec.weight;
    if k < 0 || !spec.parity_ok() {
        return Ok(0);
    }
    let lam = lambda_product(spec.level, spec.character.conductor());
    let trivial = spec.character.is_trivial();
    Ok(match k {
        0 => u64::from(trivial),
        1 => lam / 2,
        2 if trivial => lam - 1,
        _ => lam,
    })
}

pub fn dim_m(spec: &SpaceSpec) -> Result<u64> {
    Ok(dim_s(spec)? + dim_e(spec)?)
}

/// Both readings of the feasibility inequality for weight k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarVerdict {
    pub dim_m_k: u64,
    pub dim_m_k2: u64,
    pub dim_e_k: u64,
    pub dim_e_k2: u64,
    /// dim M_{k+2} < dim M_k + dim E_k.
    pub display: bool,
    /// dim M_k + dim E_{k+2} > dim M_{k+2}, the inequality that makes the
    /// search's linear system underdetermined.
    pub proof: bool,
}

impl StarVerdict {
    pub fn readings_agree(&self) -> bool {
        self.display == self.proof
    }
}

pub fn condition_star(spec: &SpaceSpec) -> Result<StarVerdict> {
    let up = spec.with_weight(spec.weight + 2);
    let (m_k, m_k2) = (dim_m(spec)?, dim_m(&up)?);
    let (e_k, e_k2) = (dim_e(spec)?, dim_e(&up)?);
    Ok(StarVerdict {
        dim_m_k: m_k,
        dim_m_k2: m_k2,
        dim_e_k: e_k,
        dim_e_k2: e_k2,
        display: m_k2 < m_k + e_k,
        proof: m_k + e_k2 > m_k2,
    })
}

/// How to build one generator's q-expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    /// An eta quotient, written in the `eta(d)^r * ...` syntax.
    Eta(String),
    /// θt/t for a weight-zero eta quotient t.
    Dlog(String),
    Eisenstein {
        weight: u32,
        chi: CharKind,
        psi: CharKind,
        dilation: u64,
    },
    Product(Vec<Recipe>),
}

impl Recipe {
    pub fn eta(e: &EtaQuotient) -> Self {
        Recipe::Eta(e.to_string())
    }

    pub fn eisenstein(e: &EisensteinElement) -> Self {
        Recipe::Eisenstein {
            weight: e.weight,
            chi: e.chi,
            psi: e.psi,
            dilation: e.dilation,
        }
    }

    /// q-expansion to absolute precision `prec`, interpreting eta quotients
    /// at the given level.
    pub fn series(&self, level: u64, prec: i64) -> Result<QSeries> {
        match self {
            Recipe::Eta(s) => EtaQuotient::parse(s, Some(level))?.series(prec),
            Recipe::Dlog(s) => Ok(eta_dlog(&EtaQuotient::parse(s, Some(level))?, prec)),
            Recipe::Eisenstein {
                weight,
                chi,
                psi,
                dilation,
            } => eisenstein_series(
                *weight,
                &DirichletChar::primitive_of(*chi),
                &DirichletChar::primitive_of(*psi),
                *dilation,
                prec,
            ),
            Recipe::Product(parts) => {
                let mut acc = QSeries::one(prec);
                for p in parts {
                    acc = acc.mul(&p.series(level, prec)?);
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Eta(s) => f.write_str(s),
            Recipe::Dlog(s) => write!(f, "dlog({s})"),
            Recipe::Eisenstein {
                weight,
                chi,
                psi,
                dilation,
            } => write!(
                f,
                "{}",
                EisensteinElement::new(*weight, *chi, *psi, *dilation)
            ),
            Recipe::Product(parts) => {
                let s: Vec<String> = parts.iter().map(|p| format!("[{p}]")).collect();
                f.write_str(&s.join(" * "))
            }
        }
    }
}

/// θt/t for an eta quotient t, from log Π(1 − q^(dn)) = −Σ σ1(n) q^(dn)/n:
/// the result is Σ r_d·d/24 − Σ_d r_d·d Σ_n σ1(n) q^(dn).
pub fn eta_dlog(t: &EtaQuotient, prec: i64) -> QSeries {
    let n = prec.max(1) as usize;
    let sigma = sigma_table(1, n);
    let mut c = vec![Rational::zero(); n];
    c[0] = frac(t.ord_inf_24(), 24);
    for (&d, &r) in t.exponents() {
        let d = d as usize;
        let mut m = 1;
        while m * d < n {
            c[m * d] -= big(&sigma[m] * BigInt::from(r * d as i64));
            m += 1;
        }
    }
    QSeries::new(0, c, prec)
}

/// A rational combination Σ c_j · recipe_j, the exact description of a form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecipe {
    pub level: u64,
    pub terms: Vec<Term>,
}

/// One summand c·recipe of a [`FormRecipe`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "rational::serde_rational")]
    pub coefficient: Rational,
    pub recipe: Recipe,
}

impl FormRecipe {
    pub fn single(level: u64, recipe: Recipe) -> Self {
        FormRecipe {
            level,
            terms: vec![Term {
                coefficient: int(1),
                recipe,
            }],
        }
    }

    pub fn series(&self, prec: i64) -> Result<QSeries> {
        let mut acc = QSeries::zero(prec);
        for t in &self.terms {
            if !t.coefficient.is_zero() {
                acc = acc.add(&t.recipe.series(self.level, prec)?.scale(&t.coefficient));
            }
        }
        Ok(acc)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        FormRecipe {
            level: self.level,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coefficient: &t.coefficient * c,
                    recipe: t.recipe.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for FormRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|t| !t.coefficient.is_zero())
            .map(|t| {
                if t.coefficient.is_one() {
                    t.recipe.to_string()
                } else {
                    format!("{}*{}", rational::to_string(&t.coefficient), t.recipe)
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + ").replace(" + -", " - "))
        }
    }
}

/// An echelon basis of M_k(Γ0(N), χ) ∩ Q[[q]] with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct BasisSet {
    pub spec: SpaceSpec,
    /// Independent generators the echelon rows are built from.
    pub generators: Vec<Recipe>,
    /// Row i equals Σ_j transform[i][j] · generators[j].
    #[serde(skip)]
    pub transform: Vec<Vec<Rational>>,
    #[serde(skip)]
    pub forms: Vec<QSeries>,
    pub rank: usize,
    pub prec: i64,
}

impl BasisSet {
    pub fn leads(&self) -> Vec<i64> {
        self.forms.iter().map(QSeries::lead).collect()
    }

    /// Recipe for Σ x_i · form_i.
    pub fn combination(&self, x: &[Rational]) -> FormRecipe {
        let mut coeffs = vec![Rational::zero(); self.generators.len()];
        for (xi, row) in x.iter().zip(&self.transform) {
            if xi.is_zero() {
                continue;
            }
            for (c, t) in coeffs.iter_mut().zip(row) {
                *c += xi * t;
            }
        }
        FormRecipe {
            level: self.spec.level,
            terms: coeffs
                .into_iter()
                .zip(self.generators.iter().cloned())
                .filter(|(c, _)| !c.is_zero())
                .map(|(coefficient, recipe)| Term {
                    coefficient,
                    recipe,
                })
                .collect(),
        }
    }

    /// Recomputes form i from its recipe.
    pub fn regenerate(&self, i: usize, prec: i64) -> Result<QSeries> {
        let mut x = vec![Rational::zero(); self.rank];
        x[i] = Rational::one();
        self.combination(&x).series(prec)
    }

    /// Whether `f` lies in the span, checked on the stored precision.
    pub fn contains(&self, f: &QSeries) -> bool {
        let n = self.prec.min(f.prec());
        if n < 0 {
            return false;
        }
        let mut rows: Vec<Vec<Rational>> = self
            .forms
            .iter()
            .map(|b| (0..n).map(|i| b.coeff(i)).collect())
            .collect();
        let r0 = rref(rows.clone()).rank();
        rows.push((0..n).map(|i| f.coeff(i)).collect());
        rref(rows).rank() == r0
    }
}

/// Candidate generators for a space, in the order they are tried.
fn candidates(spec: &SpaceSpec, data: &DataSet) -> Result<Vec<Recipe>> {
    let k = spec.weight;
    let mut out = Vec::new();
    if k >= 3 {
        out.extend(
            eisenstein_basis(k as u32, spec.level, &spec.character)
                .iter()
                .map(Recipe::eisenstein),
        );
    }
    out.extend(table4_products(spec, data)?.iter().map(Recipe::eta));
    out.extend(
        data.generators
            .entries
            .iter()
            .filter(|g| {
                g.spec.level == spec.level && g.spec.character == spec.kind() && g.spec.weight == k
            })
            .map(|g| g.recipe.clone()),
    );
    Ok(out)
}

/// Holomorphic products A·B^n·t^j built from the tabulated forms and
/// Hauptmodul-type functions of the level.
pub fn table4_products(spec: &SpaceSpec, data: &DataSet) -> Result<Vec<EtaQuotient>> {
    let mut out = Vec::new();
    let ts: Vec<&EtaQuotient> = data
        .tables
        .table2
        .iter()
        .filter(|e| e.level == spec.level)
        .map(|e| &e.t)
        .collect();
    for row in data
        .tables
        .table4
        .iter()
        .filter(|r| r.level == spec.level && r.character == spec.kind())
    {
        let (wa, wb) = (row.a.weight()?, row.b.weight()?);
        if wb <= 0 || spec.weight < wa || (spec.weight - wa) % wb != 0 {
            continue;
        }
        let n = (spec.weight - wa) / wb;
        let base = row.a.mul(&row.b.pow(n))?;
        let js = spec.weight.max(1);
        for j in -js..=js {
            for t in &ts {
                let cand = base.mul(&t.pow(j))?.at_level(spec.level)?;
                if cand.is_holomorphic() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}

/// Echelon basis of the space from curated generators, failing loudly when
/// the generators do not reach the expected dimension.
pub fn build_basis(spec: &SpaceSpec, prec: i64, data: &DataSet) -> Result<BasisSet> {
    let expected = dim_m(spec)? as usize;
    let prec = prec.max(sturm_bound(spec.level, spec.weight) + SAFETY_MARGIN);
    let mut chosen: Vec<(Recipe, QSeries)> = Vec::new();
    if expected > 0 {
        let mut sieve = ModEchelon::new(SIEVE_PRIME);
        for cand in candidates(spec, data)? {
            let s = cand.series(spec.level, prec)?;
            let v: Vec<Rational> = (0..prec).map(|i| s.coeff(i)).collect();
            let Some(red) = sieve.reduce_vector(&v) else {
                continue;
            };
            if sieve.insert(red) {
                chosen.push((cand, s));
                if chosen.len() == expected {
                    break;
                }
            }
        }
    }
    if chosen.len() != expected {
        return Err(Error::RankDeficient {
            spec: spec.to_string(),
            achieved: chosen.len(),
            expected,
        });
    }
    // row-reduce [coefficients | identity] to track each echelon row's recipe
    let m = chosen.len();
    let rows: Vec<Vec<Rational>> = chosen
        .iter()
        .enumerate()
        .map(|(i, (_, s))| {
            let mut r: Vec<Rational> = (0..prec).map(|n| s.coeff(n)).collect();
            r.extend((0..m).map(|j| if i == j { int(1) } else { Rational::zero() }));
            r
        })
        .collect();
    let red = rref(rows);
    if red.rank() != m || red.pivots.iter().any(|&p| p >= prec as usize) {
        return Err(Error::RankDeficient {
            spec: spec.to_string(),
            achieved: red.pivots.iter().filter(|&&p| p < prec as usize).count(),
            expected,
        });
    }
    let forms = red
        .rows
        .iter()
        .map(|r| QSeries::new(0, r[..prec as usize].to_vec(), prec))
        .collect();
    let transform = red
        .rows
        .iter()
        .map(|r| r[prec as usize..].to_vec())
        .collect();
    Ok(BasisSet {
        spec: *spec,
        generators: chosen.into_iter().map(|(r, _)| r).collect(),
        transform,
        forms,
        rank: m,
        prec,
    })
}
