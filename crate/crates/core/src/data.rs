//! Bundled tables, generator recipes, eigenform expansions and fixtures, with
//! optional overrides from a user data directory.

use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::character::{CharKind, DirichletChar};
use crate::eisenstein::EisensteinElement;
use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::rational::{self, Rational};
use crate::spaces::{condition_star, dim_e, dim_m, Recipe, SpaceSpec, StarVerdict};

const TABLES_JSON: &str = include_str!("../data/tables.json");
const GENERATORS_JSON: &str = include_str!("../data/generators.json");
const EIGENFORMS_JSON: &str = include_str!("../data/eigenforms.json");
const DIMENSIONS_JSON: &str = include_str!("../data/fixtures/dimensions.json");
const EXAMPLES_JSON: &str = include_str!("../data/fixtures/examples.json");

/// Largest weight checked when validating weight-class rows.
pub const VALIDATION_MAX_WEIGHT: i64 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCondition {
    pub modulus: u64,
    pub value: u64,
}

/// A set of primes: none of `exclude`, every listed character equal to 1,
/// and optionally a fixed residue class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCondition {
    pub text: String,
    #[serde(default)]
    pub exclude: Vec<u64>,
    #[serde(default)]
    pub characters: Vec<CharKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<ResidueCondition>,
}

impl PrimeCondition {
    pub fn all_primes() -> Self {
        PrimeCondition {
            text: "all primes".into(),
            exclude: Vec::new(),
            characters: Vec::new(),
            residue: None,
        }
    }

    pub fn allows(&self, p: u64) -> bool {
        rational::is_prime(p)
            && !self.exclude.contains(&p)
            && self
                .characters
                .iter()
                .all(|c| DirichletChar::primitive_of(*c).value(p as i64) == 1)
            && self.residue.is_none_or(|r| p % r.modulus == r.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub level: u64,
    pub character: CharKind,
    pub weight_modulus: i64,
    pub weight_residue: i64,
    pub primes: PrimeCondition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Entry {
    pub level: u64,
    pub t: EtaQuotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3Row {
    pub level: u64,
    pub character: CharKind,
    pub weight_modulus: i64,
    pub weight_residue: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table4Entry {
    pub level: u64,
    pub character: CharKind,
    pub a: EtaQuotient,
    pub b: EtaQuotient,
}

fn weight_matches(k: i64, modulus: i64, residue: i64) -> bool {
    k.rem_euclid(modulus) == residue.rem_euclid(modulus)
}

impl Table1Row {
    pub fn covers(&self, k: i64) -> bool {
        weight_matches(k, self.weight_modulus, self.weight_residue)
    }

    /// Positive weights of the row up to `max`.
    pub fn weights(&self, max: i64) -> impl Iterator<Item = i64> + '_ {
        (1..=max).filter(|&k| self.covers(k))
    }
}

impl Table3Row {
    pub fn covers(&self, k: i64) -> bool {
        weight_matches(k, self.weight_modulus, self.weight_residue)
    }

    pub fn weights(&self, max: i64) -> impl Iterator<Item = i64> + '_ {
        (1..=max).filter(|&k| self.covers(k))
    }
}

/// Machine-readable Tables 1 to 4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableData {
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Entry>,
    pub table3: Vec<Table3Row>,
    pub table4: Vec<Table4Entry>,
}

impl TableData {
    pub fn from_json(s: &str) -> Result<Self> {
        let t: TableData = parse_json(s, "tables.json")?;
        t.validate()?;
        Ok(t)
    }

    pub fn table1_row(&self, level: u64, kind: CharKind, weight: i64) -> Option<&Table1Row> {
        self.table1
            .iter()
            .find(|r| r.level == level && r.character == kind && r.covers(weight))
    }

    pub fn table3_row(&self, level: u64, kind: CharKind, weight: i64) -> Option<&Table3Row> {
        self.table3
            .iter()
            .find(|r| r.level == level && r.character == kind && r.covers(weight))
    }

    pub fn hauptmodul(&self, level: u64) -> Option<&EtaQuotient> {
        self.table2.iter().find(|e| e.level == level).map(|e| &e.t)
    }

    /// Table 1 weights (up to [`VALIDATION_MAX_WEIGHT`]) at which the
    /// feasibility inequality fails, with the full verdict.
    pub fn feasibility_failures(&self) -> Result<Vec<(SpaceSpec, StarVerdict)>> {
        let mut out = Vec::new();
        for r in &self.table1 {
            for k in r.weights(VALIDATION_MAX_WEIGHT) {
                let spec = SpaceSpec::new(r.level, r.character, k)?;
                let v = condition_star(&spec)?;
                if !v.proof {
                    out.push((spec, v));
                }
            }
        }
        Ok(out)
    }

    /// Table 3 weights at which dim M_k = dim M_(k+2) or dim E_(k+2) = 2 fails.
    pub fn table3_failures(&self) -> Result<Vec<SpaceSpec>> {
        let mut out = Vec::new();
        for r in &self.table3 {
            for k in r.weights(VALIDATION_MAX_WEIGHT) {
                let spec = SpaceSpec::new(r.level, r.character, k)?;
                let up = spec.with_weight(k + 2);
                if dim_m(&spec)? != dim_m(&up)? || dim_e(&up)? != 2 {
                    out.push(spec);
                }
            }
        }
        Ok(out)
    }

    /// Fail-fast structural checks: every eta quotient is valid at its level,
    /// Table 2 entries start with q, Table 4 entries are holomorphic, and
    /// every row names a curated space.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Data(msg));
        for e in &self.table2 {
            let t = EtaQuotient::new(e.level, e.t.exponents().iter().map(|(&d, &r)| (d, r)))?;
            if t.weight()? != 0 {
                return bad(format!("table 2 entry {t} has nonzero weight"));
            }
            let s = t.series(4)?;
            if s.lead() != 1 || s.coeff(1) != rational::int(1) {
                return bad(format!("table 2 entry {t} does not start with q"));
            }
        }
        for e in &self.table4 {
            for x in [&e.a, &e.b] {
                let x = EtaQuotient::new(e.level, x.exponents().iter().map(|(&d, &r)| (d, r)))?;
                x.weight()?;
                if !x.is_holomorphic() {
                    return bad(format!("table 4 entry {x} is not holomorphic"));
                }
            }
        }
        for (level, kind) in self
            .table1
            .iter()
            .map(|r| (r.level, r.character))
            .chain(self.table3.iter().map(|r| (r.level, r.character)))
            .chain(self.table4.iter().map(|r| (r.level, r.character)))
        {
            SpaceSpec::new(level, kind, 0)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub level: u64,
    pub character: CharKind,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub spec: GeneratorSpec,
    pub recipe: Recipe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    #[serde(default)]
    pub provenance: String,
    pub entries: Vec<GeneratorEntry>,
}

/// q-expansion of a normalized eigenform, supplied as data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenform {
    pub label: String,
    pub weight: i64,
    pub level: u64,
    #[serde(with = "rational::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct DimEntry {
    pub level: u64,
    pub character: CharKind,
    pub weight: i64,
    pub dim_M: u64,
    pub dim_S: u64,
    pub dim_E: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimFixture {
    #[serde(default)]
    pub provenance: String,
    pub entries: Vec<DimEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleMode {
    Theorem1,
    Corollary,
    Theorem2,
}

/// Which congruence a stored sequence is expected to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqFlavor {
    Plain,
    Twisted(CharKind),
    Threeterm { eigenform: String, exponent: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Check {
    pub g: String,
    #[serde(with = "rational::serde_rational")]
    pub pin: Rational,
}

/// One coefficient sequence of a worked example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub label: String,
    #[serde(default)]
    pub f: Option<Recipe>,
    /// Overrides the example's expansion variable.
    #[serde(default)]
    pub t: Option<String>,
    pub flavor: SeqFlavor,
    #[serde(with = "rational::serde_rational_vec")]
    pub golden: Vec<Rational>,
    #[serde(default)]
    pub combo: Option<Vec<EisensteinElement>>,
    #[serde(default)]
    pub predicate: Option<String>,
    pub claimed: PrimeCondition,
    #[serde(default)]
    pub closed_form: Option<String>,
    #[serde(default, with = "rational::serde_rational_opt")]
    pub scale: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub id: String,
    pub reference: String,
    pub mode: ExampleMode,
    pub level: u64,
    pub character: CharKind,
    pub weight: i64,
    #[serde(default)]
    pub t: Option<String>,
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default, with = "rational::serde_rational_opt")]
    pub pin: Option<Rational>,
    #[serde(default)]
    pub search_predicate: Option<String>,
    #[serde(default)]
    pub theorem2_check: Option<Theorem2Check>,
    #[serde(default, with = "opt_rational_vec")]
    pub f_golden: Option<Vec<Rational>>,
    #[serde(default, with = "opt_rational_vec")]
    pub t_golden: Option<Vec<Rational>>,
    pub sequences: Vec<SequenceSpec>,
}

impl Example {
    pub fn spec(&self) -> Result<SpaceSpec> {
        SpaceSpec::new(self.level, self.character, self.weight)
    }
}

mod opt_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        x: &Option<Vec<Rational>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.iter().map(rational::to_string).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| {
                v.iter()
                    .map(|s| rational::parse(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleFile {
    pub examples: Vec<Example>,
}

/// Everything the engine reads from disk.
#[derive(Clone, Debug)]
pub struct DataSet {
    pub tables: TableData,
    pub generators: GeneratorFile,
    pub eigenforms: Vec<Eigenform>,
    pub dimensions: DimFixture,
    pub examples: ExampleFile,
}

fn parse_json<T: DeserializeOwned>(s: &str, name: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Data(format!("{name}: {e}")))
}

impl DataSet {
    /// The data compiled into the library.
    pub fn bundled() -> Result<Self> {
        Self::from_sources(
            TABLES_JSON,
            GENERATORS_JSON,
            EIGENFORMS_JSON,
            DIMENSIONS_JSON,
            EXAMPLES_JSON,
        )
    }

    /// Loads from `dir`, falling back to the bundled copy of any missing file.
    pub fn load(dir: &Path) -> Result<Self> {
        let read = |rel: &str, fallback: &str| -> Result<String> {
            let p = dir.join(rel);
            if p.exists() {
                std::fs::read_to_string(&p)
                    .map_err(|e| Error::Data(format!("{}: {e}", p.display())))
            } else {
                Ok(fallback.to_string())
            }
        };
        Self::from_sources(
            &read("tables.json", TABLES_JSON)?,
            &read("generators.json", GENERATORS_JSON)?,
            &read("eigenforms.json", EIGENFORMS_JSON)?,
            &read("fixtures/dimensions.json", DIMENSIONS_JSON)?,
            &read("fixtures/examples.json", EXAMPLES_JSON)?,
        )
    }

    fn from_sources(
        tables: &str,
        generators: &str,
        eigenforms: &str,
        dimensions: &str,
        examples: &str,
    ) -> Result<Self> {
        Ok(DataSet {
            tables: TableData::from_json(tables)?,
            generators: parse_json(generators, "generators.json")?,
            eigenforms: parse_json(eigenforms, "eigenforms.json")?,
            dimensions: parse_json(dimensions, "dimensions.json")?,
            examples: parse_json(examples, "examples.json")?,
        })
    }

    pub fn example(&self, id: &str) -> Result<&Example> {
        self.examples
            .examples
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownExample(id.to_string()))
    }

    pub fn eigenform(&self, label: &str) -> Result<&Eigenform> {
        self.eigenforms
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::Data(format!("no eigenform labelled {label:?}")))
    }

    pub fn dimension(&self, level: u64, kind: CharKind, weight: i64) -> Option<&DimEntry> {
        self.dimensions
            .entries
            .iter()
            .find(|e| e.level == level && e.character == kind && e.weight == weight)
    }
}
