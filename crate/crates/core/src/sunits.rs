//! S-unit systems E^𝔭 = ⟨units, π⟩ and the JSON fixtures that carry unit
//! data for fields where the internal search is not enough.
//!
//! A field fixture is an object
//! `{"field": {"poly": [...], "integral_basis"?: [[...]], "basis_den"?: d},
//!   "units": [{"num": [...], "den": d}], "class_number"?: h,
//!   "provenance": "...", "sha256": "..."}`.
//! Family fixtures are either a bare array of `{"lambda": λ, "units": [...]}`
//! records or an object holding such an array under `records`, with the
//! same `provenance` and `sha256` fields. Integers may be JSON numbers or
//! decimal strings. The checksum is SHA-256 over the compact JSON
//! serialization, keys sorted, with the top-level `sha256` key removed.

use crate::error::{Error, Result};
use crate::lattice::{self, GeneratorStatus, NfContext, SearchBounds};
use crate::matrix::ZMat;
use crate::nf::{NFElement, NumberField};
use crate::order::Order;
use crate::prime_split::PrimeSplitType;
use log::warn;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct FieldFixture {
    pub poly: Vec<BigInt>,
    pub integral_basis: Option<ZMat>,
    pub basis_den: Option<BigInt>,
    pub units: Vec<NFElement>,
    pub class_number: Option<u64>,
    pub provenance: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyRecord {
    pub lambda: i64,
    pub units: Vec<NFElement>,
    pub integral_basis: Option<ZMat>,
    pub basis_den: Option<BigInt>,
    pub class_number: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyFixture {
    pub records: Vec<FamilyRecord>,
    /// family polynomial, coefficient lists in t for X^0, X^1, …, when the
    /// batch names it under `family.g`
    pub family_g: Option<Vec<Vec<i64>>>,
    pub provenance: Option<String>,
    pub sha256: Option<String>,
}

impl FamilyFixture {
    pub fn get(&self, lambda: i64) -> Option<&FamilyRecord> {
        self.records.iter().find(|r| r.lambda == lambda)
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::SchemaError(msg.into())
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(schema(format!("{what}: not an integer")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| schema(format!("{what}: not an integer string"))),
        _ => Err(schema(format!("{what}: expected an integer"))),
    }
}

fn parse_int_vec(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| schema(format!("{what}: expected an array")))?
        .iter()
        .map(|x| parse_int(x, what))
        .collect()
}

fn parse_matrix(v: &Value, what: &str) -> Result<ZMat> {
    v.as_array()
        .ok_or_else(|| schema(format!("{what}: expected an array of rows")))?
        .iter()
        .map(|r| parse_int_vec(r, what))
        .collect()
}

fn parse_units(v: &Value, n: Option<usize>) -> Result<Vec<NFElement>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema("units: expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, u)| {
            let num = parse_int_vec(
                u.get("num")
                    .ok_or_else(|| schema(format!("units[{i}]: missing num")))?,
                "units.num",
            )?;
            let den = match u.get("den") {
                Some(d) => parse_int(d, "units.den")?,
                None => BigInt::one(),
            };
            if den.is_zero() {
                return Err(schema(format!("units[{i}]: zero denominator")));
            }
            if let Some(n) = n {
                if num.len() != n {
                    return Err(schema(format!("units[{i}]: expected {n} coordinates")));
                }
            }
            let mut e = NFElement { num, den };
            e.canonicalize();
            Ok(e)
        })
        .collect()
}

fn opt_u64(v: Option<&Value>, what: &str) -> Result<Option<u64>> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(x) => x
            .as_u64()
            .map(Some)
            .ok_or_else(|| schema(format!("{what}: expected a nonnegative integer"))),
    }
}

/// Hex SHA-256 of the canonical payload (top-level `sha256` removed).
pub fn payload_checksum(v: &Value) -> String {
    let mut v = v.clone();
    if let Value::Object(m) = &mut v {
        m.remove("sha256");
    }
    let text = serde_json::to_string(&v).expect("JSON values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn check_sum(v: &Value) -> Result<Option<String>> {
    let Some(expected) = v.get("sha256") else {
        return Ok(None);
    };
    let expected = expected
        .as_str()
        .ok_or_else(|| schema("sha256: expected a string"))?
        .to_lowercase();
    let actual = payload_checksum(v);
    if expected != actual {
        return Err(Error::ChecksumMismatch { expected, actual });
    }
    Ok(Some(expected))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))
}

pub fn load_fixture(path: &Path) -> Result<FieldFixture> {
    parse_fixture(&read_json(path)?)
}

/// Parse and verify a field fixture: checksum, shapes, and exact unit norms.
pub fn parse_fixture(v: &Value) -> Result<FieldFixture> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("top level must be an object"))?;
    let sha256 = check_sum(v)?.ok_or_else(|| schema("missing sha256"))?;
    let field = obj.get("field").ok_or_else(|| schema("missing field"))?;
    let poly = parse_int_vec(
        field
            .get("poly")
            .ok_or_else(|| schema("missing field.poly"))?,
        "field.poly",
    )?;
    let n = poly.len().saturating_sub(1);
    let integral_basis = field
        .get("integral_basis")
        .map(|b| parse_matrix(b, "field.integral_basis"))
        .transpose()?;
    let basis_den = field
        .get("basis_den")
        .map(|d| parse_int(d, "field.basis_den"))
        .transpose()?;
    let units = parse_units(
        obj.get("units").ok_or_else(|| schema("missing units"))?,
        Some(n),
    )?;
    let class_number = opt_u64(obj.get("class_number"), "class_number")?;
    let provenance = obj
        .get("provenance")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("missing provenance"))?
        .to_string();
    let fx = FieldFixture {
        poly,
        integral_basis,
        basis_den,
        units,
        class_number,
        provenance,
        sha256,
    };
    let k = fx.field()?;
    fx.order(&k)?;
    check_unit_norms(&k, &fx.units)?;
    if fx.units.is_empty() && k.r() > 1 {
        warn!(
            "fixture for {} carries no units; verdicts will be conservative",
            k.render()
        );
    }
    Ok(fx)
}

impl FieldFixture {
    pub fn field(&self) -> Result<NumberField> {
        NumberField::new(&self.poly)
    }

    /// The working order: the supplied integral basis, or ℤ[θ].
    pub fn order(&self, k: &NumberField) -> Result<Order> {
        order_from(k, &self.integral_basis, &self.basis_den)
    }

    pub fn to_value(&self) -> Value {
        let mut field = Map::new();
        field.insert("poly".into(), ints(&self.poly));
        if let Some(b) = &self.integral_basis {
            field.insert(
                "integral_basis".into(),
                Value::Array(b.iter().map(|r| ints(r)).collect()),
            );
        }
        if let Some(d) = &self.basis_den {
            field.insert("basis_den".into(), int(d));
        }
        let mut m = Map::new();
        m.insert("field".into(), Value::Object(field));
        m.insert("units".into(), units_value(&self.units));
        if let Some(h) = self.class_number {
            m.insert("class_number".into(), json!(h));
        }
        m.insert("provenance".into(), json!(self.provenance));
        let mut v = Value::Object(m);
        let sum = payload_checksum(&v);
        v.as_object_mut()
            .unwrap()
            .insert("sha256".into(), json!(sum));
        v
    }
}

fn order_from(k: &NumberField, basis: &Option<ZMat>, den: &Option<BigInt>) -> Result<Order> {
    match basis {
        Some(b) => {
            let d = den.clone().unwrap_or_else(BigInt::one);
            Order::from_basis(k, b.clone(), d).map_err(|e| schema(format!("integral basis: {e}")))
        }
        None => Ok(Order::equation_order(k)),
    }
}

fn int(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(i) => json!(i),
        Err(_) => json!(x.to_string()),
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn units_value(units: &[NFElement]) -> Value {
    Value::Array(
        units
            .iter()
            .map(|u| json!({"num": ints(&u.num), "den": int(&u.den)}))
            .collect(),
    )
}

fn check_unit_norms(k: &NumberField, units: &[NFElement]) -> Result<()> {
    for (i, u) in units.iter().enumerate() {
        let nm = k.norm(u);
        if !(nm.is_integer() && nm.to_integer().abs().is_one()) {
            return Err(schema(format!("norm: units[{i}] has norm {nm}, not ±1")));
        }
    }
    Ok(())
}

pub fn load_family_fixture(path: &Path) -> Result<FamilyFixture> {
    parse_family_fixture(&read_json(path)?)
}

/// Parse a family batch. Unit norms are checked later against each
/// specialized polynomial, which the batch itself does not name.
pub fn parse_family_fixture(v: &Value) -> Result<FamilyFixture> {
    let (arr, provenance, sha256) = match v {
        Value::Array(a) => (a, None, None),
        Value::Object(m) => {
            let sha = check_sum(v)?;
            let a = m
                .get("records")
                .and_then(Value::as_array)
                .ok_or_else(|| schema("family fixture: missing records array"))?;
            let prov = m
                .get("provenance")
                .and_then(Value::as_str)
                .map(str::to_string);
            (a, prov, sha)
        }
        _ => return Err(schema("family fixture must be an array or an object")),
    };
    let mut records = Vec::with_capacity(arr.len());
    for (i, r) in arr.iter().enumerate() {
        let lambda = r
            .get("lambda")
            .and_then(Value::as_i64)
            .ok_or_else(|| schema(format!("records[{i}]: missing integer lambda")))?;
        let units = parse_units(
            r.get("units")
                .ok_or_else(|| schema(format!("records[{i}]: missing units")))?,
            None,
        )?;
        let integral_basis = r
            .get("integral_basis")
            .map(|b| parse_matrix(b, "integral_basis"))
            .transpose()?;
        let basis_den = r
            .get("basis_den")
            .map(|d| parse_int(d, "basis_den"))
            .transpose()?;
        let class_number = opt_u64(r.get("class_number"), "class_number")?;
        records.push(FamilyRecord {
            lambda,
            units,
            integral_basis,
            basis_den,
            class_number,
        });
    }
    let family_g = match v.get("family").and_then(|f| f.get("g")) {
        None => None,
        Some(g) => Some(
            g.as_array()
                .ok_or_else(|| schema("family.g must be a list of coefficient lists"))?
                .iter()
                .map(|c| {
                    c.as_array()
                        .ok_or_else(|| schema("family.g must be a list of coefficient lists"))?
                        .iter()
                        .map(|x| {
                            x.as_i64()
                                .ok_or_else(|| schema("family.g: integer expected"))
                        })
                        .collect()
                })
                .collect::<Result<Vec<Vec<i64>>>>()?,
        ),
    };
    Ok(FamilyFixture {
        records,
        family_g,
        provenance,
        sha256,
    })
}

impl FamilyRecord {
    /// Check the record against the specialized field and return its
    /// working order.
    pub fn validate(&self, k: &NumberField) -> Result<Order> {
        if self.units.iter().any(|u| u.num.len() != k.n) {
            return Err(schema(format!(
                "lambda {}: unit length differs from degree",
                self.lambda
            )));
        }
        check_unit_norms(k, &self.units)?;
        order_from(k, &self.integral_basis, &self.basis_den)
    }
}

/// Content hash naming a field: SHA-256 of its coefficient list.
pub fn field_id(k: &NumberField) -> String {
    let text = serde_json::to_string(&ints(&k.poly)).expect("serializable");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct SUnitSystem {
    pub field_id: String,
    pub units: Vec<NFElement>,
    pub pi: Option<NFElement>,
    pub h_p: u32,
    pub prime_index: usize,
    pub provenance: String,
    /// false when fewer than r1+r2 generators are present; verdicts drawn
    /// from such a system are conservative
    pub complete: bool,
}

impl SUnitSystem {
    pub fn generators(&self) -> Vec<NFElement> {
        let mut g = self.units.clone();
        g.extend(self.pi.iter().cloned());
        g
    }
}

/// Exact checks of a system against the split of p; a short generator
/// list downgrades the system to incomplete rather than failing.
pub fn validate_sunit_system(
    k: &NumberField,
    s: SUnitSystem,
    split: &PrimeSplitType,
) -> Result<SUnitSystem> {
    let p = split.p;
    if p == 2 {
        return Err(Error::UnsupportedP { p, reason: "p = 2" });
    }
    if !split.unramified {
        return Err(Error::UnsupportedP {
            p,
            reason: "ramified",
        });
    }
    let model = split.model.as_ref().ok_or(Error::UnsupportedP {
        p,
        reason: "no local model",
    })?;
    let chosen = split
        .primes
        .get(s.prime_index)
        .ok_or_else(|| Error::Invalid(format!("no prime {} above {p}", s.prime_index)))?;
    for q in &split.primes {
        for g in s
            .units
            .iter()
            .chain(s.pi.iter().filter(|_| q.index != s.prime_index))
        {
            match model.residue(q, g) {
                Some(r) if !r.is_empty() => {}
                _ => return Err(Error::NotUnitAtQ { p, index: q.index }),
            }
        }
    }
    for (i, u) in s.units.iter().enumerate() {
        let nm = k.norm(u);
        if !(nm.is_integer() && nm.to_integer().abs().is_one()) {
            return Err(Error::BadNorm(format!("unit {i} has norm {nm}")));
        }
    }
    if let Some(pi) = &s.pi {
        let nm = k.norm(pi);
        let want = BigInt::from(p).pow(s.h_p * chosen.f_deg);
        if !nm.is_integer() || nm.to_integer().abs() != want {
            return Err(Error::BadNorm(format!(
                "pi has norm {nm}, expected ±{want}"
            )));
        }
    }
    let mut s = s;
    let want = k.r();
    let have = s.units.len() + usize::from(s.pi.is_some());
    if have != want {
        warn!(
            "S-unit system at p = {p} has {have} generators, expected {want}; verdicts are conservative"
        );
        s.complete = false;
    }
    Ok(s)
}

pub enum UnitsSource<'a> {
    Given(&'a [NFElement]),
    Search { effort: u64 },
}

/// Units from the source (searched if needed) and π for the chosen prime.
pub fn build_sunit_system(
    ctx: &NfContext,
    split: &PrimeSplitType,
    choice: usize,
    units: UnitsSource<'_>,
    bounds: &SearchBounds,
) -> Result<SUnitSystem> {
    let (units, provenance) = match units {
        UnitsSource::Given(u) => (u.to_vec(), "fixture".to_string()),
        UnitsSource::Search { effort } => (
            lattice::find_units(ctx, effort),
            "internal search".to_string(),
        ),
    };
    let q = split
        .primes
        .get(choice)
        .ok_or_else(|| Error::Invalid(format!("no prime {choice} above {}", split.p)))?;
    let res = lattice::prime_power_generator(ctx, split, q, &units, bounds)?;
    if res.status != GeneratorStatus::Found {
        return Err(Error::Inconclusive(format!(
            "no generator of a power of the prime {choice} above {} up to exponent {}",
            split.p, res.k_used
        )));
    }
    let complete = units.len() + 1 == ctx.k.r();
    let s = SUnitSystem {
        field_id: field_id(&ctx.k),
        units,
        pi: res.gen,
        h_p: res.k_used,
        prime_index: choice,
        provenance,
        complete,
    };
    validate_sunit_system(&ctx.k, s, split)
}
