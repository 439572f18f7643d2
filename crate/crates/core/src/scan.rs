//! Prime scans over a fixed field and λ-scans over a one-parameter family.
//!
//! Split-only scans need nothing but factorization shapes. τ scans add a
//! surjectivity verdict per odd unramified prime, from fixture units or the
//! internal unit search. Work is spread over a rayon pool and the rows are
//! sorted afterwards, so output does not depend on the thread count.

use crate::arith::{primes_up_to, render_decimal};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::NfContext;
use crate::nf::NumberField;
use crate::prime_split::{split_shape, split_type};
use crate::ranstat::{rank_full_probability, rp_term, sum_prime_power_terms};
use crate::sunits::FamilyFixture;
use crate::tau::{tau_verdict, GensSource, TauStatus};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt::Write as _;

/// Unit data for τ verdicts in a scan.
#[derive(Clone, Debug)]
pub enum ScanUnits {
    /// splitting statistics only
    SplitOnly,
    Fixture(NfContext, Vec<crate::nf::NFElement>),
    Search(NfContext),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowClass {
    Ramified,
    Counted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub p: u64,
    pub class: RowClass,
    pub split: String,
    pub max_f: u32,
    /// None in split-only mode and for ramified primes
    pub verdict: Option<TauStatus>,
    pub choice: Option<usize>,
    pub h_p: Option<u32>,
    /// R_p(n − max f) for counted primes
    pub rp_term: Option<BigRational>,
    /// ℤ[θ] was not p-maximal and the shape came from an enlarged order
    pub enlarged: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanAggregates {
    pub pi_nr: u64,
    pub pi_nr_f: u64,
    pub r_count: u64,
    pub rbar_count: u64,
    pub inconclusive_count: u64,
    pub unsupported_odd: u64,
    pub p2_rows: u64,
    /// Σ R_p(n − max f), which reproduces the published E columns
    pub e_table: BigRational,
    /// Σ R_p(max(r − max f, 0)), the formula as literally stated
    pub e_literal: BigRational,
    /// Σ Pr(a uniform (n − max f)×r matrix has full row rank)
    pub e_heuristic: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub field: String,
    pub signature: (usize, usize),
    pub xmax: u64,
    pub tau_mode: bool,
    pub rows: Vec<ScanRow>,
    pub agg: ScanAggregates,
    pub enlarged_primes: Vec<u64>,
    pub config: Config,
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn scan_one(k: &NumberField, p: u64, units: &ScanUnits, cfg: &Config) -> ScanRow {
    let order = match units {
        ScanUnits::Fixture(c, _) | ScanUnits::Search(c) => Some(&c.o),
        ScanUnits::SplitOnly => None,
    };
    let shape = split_shape(k, p, order);
    let max_f = shape.max_f();
    let mut row = ScanRow {
        p,
        class: RowClass::Counted,
        split: shape.render(),
        max_f,
        verdict: None,
        choice: None,
        h_p: None,
        rp_term: None,
        enlarged: !shape.equation_order_maximal,
        note: None,
    };
    if !shape.unramified() {
        row.class = RowClass::Ramified;
        return row;
    }
    let r = k.r() as u32;
    row.rp_term = Some(rp_term(p, k.n as u32 - max_f, r));
    let ctx = match units {
        ScanUnits::SplitOnly => return row,
        ScanUnits::Fixture(c, _) | ScanUnits::Search(c) => c,
    };
    if p == 2 {
        row.verdict = Some(TauStatus::Unsupported);
        row.note = Some("p = 2".into());
        return row;
    }
    let source = match units {
        ScanUnits::Fixture(_, u) => GensSource::Units(u),
        _ => GensSource::Search {
            effort: cfg.unit_effort,
        },
    };
    let verdict = split_type(k, p, Some(&ctx.o))
        .and_then(|st| tau_verdict(ctx, &st, source, &cfg.bounds(), cfg.candidates));
    match verdict {
        Ok(v) => {
            row.verdict = Some(v.status);
            row.choice = v.choice;
            row.h_p = v.h_p;
        }
        Err(e) => {
            row.verdict = Some(TauStatus::Unsupported);
            row.note = Some(e.to_string());
        }
    }
    row
}

pub fn scan_primes(k: &NumberField, xmax: u64, units: &ScanUnits, cfg: &Config) -> ScanReport {
    let primes = primes_up_to(xmax);
    let mut rows: Vec<ScanRow> = in_pool(cfg.threads, || {
        primes
            .par_iter()
            .map(|&p| scan_one(k, p, units, cfg))
            .collect()
    });
    rows.sort_by_key(|r| r.p);
    let tau_mode = !matches!(units, ScanUnits::SplitOnly);
    let agg = aggregate(k, &rows);
    let enlarged_primes = rows.iter().filter(|r| r.enlarged).map(|r| r.p).collect();
    ScanReport {
        field: k.render(),
        signature: k.signature(),
        xmax,
        tau_mode,
        rows,
        agg,
        enlarged_primes,
        config: cfg.clone(),
    }
}

fn aggregate(k: &NumberField, rows: &[ScanRow]) -> ScanAggregates {
    let mut a = ScanAggregates::default();
    let (n, r, r2) = (k.n as u32, k.r() as u32, k.r2 as u32);
    let (mut table, mut literal, mut heuristic) = (Vec::new(), Vec::new(), Vec::new());
    for row in rows.iter().filter(|r| r.class == RowClass::Counted) {
        a.pi_nr += 1;
        if row.max_f < r2 {
            a.pi_nr_f += 1;
        }
        if row.p == 2 {
            a.p2_rows += 1;
        }
        table.push((row.p, row.rp_term.clone().expect("counted rows carry R_p")));
        literal.push((row.p, rp_term(row.p, r.saturating_sub(row.max_f), r)));
        heuristic.push((row.p, rank_full_probability(row.p, n - row.max_f, r)));
        if row.p == 2 {
            continue;
        }
        match row.verdict {
            Some(TauStatus::Surjective) => a.r_count += 1,
            Some(TauStatus::NotSurjective) => a.rbar_count += 1,
            Some(TauStatus::InconclusiveData) => a.inconclusive_count += 1,
            Some(TauStatus::Unsupported) => a.unsupported_odd += 1,
            Some(TauStatus::ImpossibleShape) | None => {}
        }
    }
    a.e_table = sum_prime_power_terms(table);
    a.e_literal = sum_prime_power_terms(literal);
    a.e_heuristic = sum_prime_power_terms(heuristic);
    a
}

impl ScanAggregates {
    /// R + R̄ + π^f + inconclusive + unsupported = π_nr − (p = 2 rows),
    /// for τ-mode reports.
    pub fn identity_holds(&self) -> bool {
        self.r_count
            + self.rbar_count
            + self.inconclusive_count
            + self.unsupported_odd
            + self.pi_nr_f
            == self.pi_nr - self.p2_rows
    }
}

pub fn ratio(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn decimal(q: &BigRational, places: u32) -> String {
    render_decimal(q.numer(), q.denom(), places)
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or(String::new(), |v| v.to_string())
}

fn verdict_str(v: &Option<TauStatus>) -> String {
    v.map_or("-".to_string(), |s| s.as_str().to_string())
}

fn class_str(c: RowClass) -> &'static str {
    match c {
        RowClass::Ramified => "ramified",
        RowClass::Counted => "counted",
    }
}

impl ScanReport {
    pub fn bad_primes(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.verdict == Some(TauStatus::NotSurjective))
            .map(|r| r.p)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let places = self.config.round_places;
        let mut s = String::from("p,status,split,max_f,verdict,choice,h_p,rp_term\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.p,
                class_str(r.class),
                r.split,
                r.max_f,
                verdict_str(&r.verdict),
                opt(&r.choice),
                opt(&r.h_p),
                r.rp_term.as_ref().map_or(String::new(), ratio)
            );
        }
        let a = &self.agg;
        let _ = writeln!(s, "# field = {}", self.field);
        let _ = writeln!(s, "# signature = {},{}", self.signature.0, self.signature.1);
        let _ = writeln!(s, "# xmax = {}", self.xmax);
        let _ = writeln!(
            s,
            "# mode = {}",
            if self.tau_mode { "tau" } else { "split_only" }
        );
        let _ = writeln!(s, "# pi_nr = {}", a.pi_nr);
        let _ = writeln!(s, "# pi_nr_f = {}", a.pi_nr_f);
        if self.tau_mode {
            let _ = writeln!(s, "# R_count = {}", a.r_count);
            let _ = writeln!(s, "# Rbar_count = {}", a.rbar_count);
            let _ = writeln!(s, "# inconclusive_count = {}", a.inconclusive_count);
            let _ = writeln!(s, "# unsupported_odd = {}", a.unsupported_odd);
        }
        let _ = writeln!(s, "# E_table = {}", decimal(&a.e_table, places));
        let _ = writeln!(s, "# E_literal = {}", decimal(&a.e_literal, places));
        let _ = writeln!(s, "# E_heuristic = {}", decimal(&a.e_heuristic, places));
        let enl: Vec<String> = self.enlarged_primes.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "# enlarged_order_primes = {}", enl.join(" "));
        for line in self.config.render().lines() {
            let _ = writeln!(s, "# config {line}");
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let places = self.config.round_places;
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "p": r.p,
                    "status": class_str(r.class),
                    "split": r.split,
                    "max_f": r.max_f,
                    "verdict": r.verdict.map(|v| v.as_str()),
                    "choice": r.choice,
                    "h_p": r.h_p,
                    "rp_term": r.rp_term.as_ref().map(ratio),
                    "note": r.note,
                })
            })
            .collect();
        let a = &self.agg;
        json!({
            "field": self.field,
            "signature": [self.signature.0, self.signature.1],
            "xmax": self.xmax,
            "mode": if self.tau_mode { "tau" } else { "split_only" },
            "rows": rows,
            "aggregates": {
                "pi_nr": a.pi_nr,
                "pi_nr_f": a.pi_nr_f,
                "R_count": a.r_count,
                "Rbar_count": a.rbar_count,
                "inconclusive_count": a.inconclusive_count,
                "unsupported_odd": a.unsupported_odd,
                "E_table": ratio(&a.e_table),
                "E_table_decimal": decimal(&a.e_table, places),
                "E_literal": ratio(&a.e_literal),
                "E_literal_decimal": decimal(&a.e_literal, places),
                "E_heuristic": ratio(&a.e_heuristic),
                "E_heuristic_decimal": decimal(&a.e_heuristic, places),
            },
            "enlarged_order_primes": self.enlarged_primes,
            "config": self.config.render(),
        })
    }
}

/// g(X, t) = Σ_i g_i(t) X^i with integer polynomials g_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub g: Vec<Vec<i64>>,
    pub a: i64,
    pub b: i64,
}

impl FamilySpec {
    pub fn new(g: Vec<Vec<i64>>, a: i64, b: i64) -> Result<FamilySpec> {
        if g.len() < 3 || a > b {
            return Err(Error::Invalid("family needs X-degree ≥ 2 and a ≤ b".into()));
        }
        Ok(FamilySpec { g, a, b })
    }

    /// Parse "c0;c1;...;cn" where each ci is a comma-separated coefficient
    /// list in t, e.g. "-1;-3,1;0,1;1" for X³ + tX² + (t−3)X − 1.
    pub fn parse_g(text: &str) -> Result<Vec<Vec<i64>>> {
        text.split(';')
            .map(|c| {
                c.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Invalid(format!("bad family coefficient {x:?}")))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn substitute(&self, lambda: i64) -> Vec<BigInt> {
        let l = BigInt::from(lambda);
        self.g
            .iter()
            .map(|gi| {
                gi.iter()
                    .rev()
                    .fold(BigInt::zero(), |acc, c| acc * &l + BigInt::from(*c))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyRow {
    pub lambda: i64,
    /// "irreducible", "reducible" or "unverified"
    pub field: &'static str,
    pub unramified: Option<bool>,
    pub split: String,
    pub max_f: u32,
    pub verdict: Option<TauStatus>,
    pub rp_term: Option<BigRational>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub spec: FamilySpec,
    pub p: u64,
    pub rows: Vec<FamilyRow>,
    pub n_irr: u64,
    pub n_tau: u64,
    pub n_inconclusive: u64,
    pub e: BigRational,
    pub tau_mode: bool,
    pub config: Config,
}

fn family_one(
    spec: &FamilySpec,
    p: u64,
    lambda: i64,
    fx: Option<&FamilyFixture>,
    cfg: &Config,
) -> FamilyRow {
    let poly = spec.substitute(lambda);
    let mut row = FamilyRow {
        lambda,
        field: "reducible",
        unramified: None,
        split: String::new(),
        max_f: 0,
        verdict: None,
        rp_term: None,
        note: None,
    };
    let k = match NumberField::with_cert_primes(&poly, &cfg.cert_primes) {
        Ok(k) => k,
        Err(Error::ProvablyReducible) | Err(Error::Inseparable) => return row,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    row.field = match k.irreducibility {
        crate::nf::Irreducibility::UnverifiedIrreducible => "unverified",
        _ => "irreducible",
    };
    let rec = fx.and_then(|f| f.get(lambda));
    let order = match rec.map(|r| r.validate(&k)) {
        Some(Ok(o)) => Some(o),
        Some(Err(e)) => {
            row.note = Some(e.to_string());
            None
        }
        None => None,
    };
    let shape = split_shape(&k, p, order.as_ref());
    row.unramified = Some(shape.unramified());
    row.split = shape.render();
    row.max_f = shape.max_f();
    if !shape.unramified() {
        return row;
    }
    row.rp_term = Some(rp_term(p, k.n as u32 - row.max_f, k.r() as u32));
    if fx.is_none() {
        return row;
    }
    let (Some(rec), Some(order)) = (rec, order) else {
        row.verdict = Some(TauStatus::InconclusiveData);
        row.note.get_or_insert_with(|| "no fixture record".into());
        return row;
    };
    let ctx = NfContext::new(k.clone(), order);
    let v = split_type(&k, p, Some(&ctx.o)).and_then(|st| {
        tau_verdict(
            &ctx,
            &st,
            GensSource::Units(&rec.units),
            &cfg.bounds(),
            cfg.candidates,
        )
    });
    match v {
        Ok(v) => row.verdict = Some(v.status),
        Err(e) => {
            row.verdict = Some(TauStatus::Unsupported);
            row.note = Some(e.to_string());
        }
    }
    row
}

pub fn scan_family(
    spec: &FamilySpec,
    p: u64,
    fixtures: Option<&FamilyFixture>,
    cfg: &Config,
) -> FamilyReport {
    let lambdas: Vec<i64> = (spec.a..=spec.b).collect();
    let mut rows: Vec<FamilyRow> = in_pool(cfg.threads, || {
        lambdas
            .par_iter()
            .map(|&l| family_one(spec, p, l, fixtures, cfg))
            .collect()
    });
    rows.sort_by_key(|r| r.lambda);
    let mut n_irr = 0;
    let mut n_tau = 0;
    let mut n_inconclusive = 0;
    let mut terms = Vec::new();
    for r in &rows {
        if r.field == "reducible" || r.unramified != Some(true) {
            continue;
        }
        n_irr += 1;
        terms.push((p, r.rp_term.clone().unwrap_or_else(BigRational::one)));
        match r.verdict {
            Some(TauStatus::Surjective) => n_tau += 1,
            Some(TauStatus::InconclusiveData) | Some(TauStatus::Unsupported) => n_inconclusive += 1,
            _ => {}
        }
    }
    let e = sum_prime_power_terms(terms);
    FamilyReport {
        spec: spec.clone(),
        p,
        rows,
        n_irr,
        n_tau,
        n_inconclusive,
        e,
        tau_mode: fixtures.is_some(),
        config: cfg.clone(),
    }
}

impl FamilyReport {
    pub fn to_csv(&self) -> String {
        let places = self.config.round_places;
        let mut s = String::from("lambda,field,unramified,split,max_f,verdict,rp_term\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.lambda,
                r.field,
                opt(&r.unramified),
                r.split,
                r.max_f,
                verdict_str(&r.verdict),
                r.rp_term.as_ref().map_or(String::new(), ratio)
            );
        }
        let _ = writeln!(s, "# p = {}", self.p);
        let _ = writeln!(s, "# range = {}..{}", self.spec.a, self.spec.b);
        let _ = writeln!(s, "# n_irr = {}", self.n_irr);
        if self.tau_mode {
            let _ = writeln!(s, "# n_tau = {}", self.n_tau);
            let _ = writeln!(s, "# n_inconclusive = {}", self.n_inconclusive);
        }
        let _ = writeln!(s, "# E = {}", decimal(&self.e, places));
        for line in self.config.render().lines() {
            let _ = writeln!(s, "# config {line}");
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "lambda": r.lambda,
                    "field": r.field,
                    "unramified": r.unramified,
                    "split": r.split,
                    "max_f": r.max_f,
                    "verdict": r.verdict.map(|v| v.as_str()),
                    "rp_term": r.rp_term.as_ref().map(ratio),
                    "note": r.note,
                })
            })
            .collect();
        json!({
            "g": self.spec.g,
            "range": [self.spec.a, self.spec.b],
            "p": self.p,
            "rows": rows,
            "aggregates": {
                "n_irr": self.n_irr,
                "n_tau": if self.tau_mode { Some(self.n_tau) } else { None },
                "n_inconclusive": if self.tau_mode { Some(self.n_inconclusive) } else { None },
                "E": ratio(&self.e),
                "E_decimal": decimal(&self.e, self.config.round_places),
            },
            "config": self.config.render(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_examples() {
        let s = FamilySpec::new(FamilySpec::parse_g("-1;-3,1;0,1;1").unwrap(), -5, 5).unwrap();
        assert_eq!(s.substitute(1), crate::zpoly::from_i64(&[-1, -2, 1, 1]));
        let s = FamilySpec::new(vec![vec![0, -1], vec![-3], vec![0], vec![1]], 0, 3).unwrap();
        assert_eq!(s.substitute(2), crate::zpoly::from_i64(&[-2, -3, 0, 1]));
        let s =
            FamilySpec::new(vec![vec![1], vec![0], vec![0, 1], vec![0], vec![1]], 0, 0).unwrap();
        assert_eq!(s.substitute(0), crate::zpoly::from_i64(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn small_split_only_scan() {
        // ℚ(√2) to 50: 2 ramifies, 14 odd primes counted
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let rep = scan_primes(&k, 50, &ScanUnits::SplitOnly, &Config::default());
        assert_eq!(rep.agg.pi_nr, 14);
        assert_eq!(rep.rows[0].class, RowClass::Ramified);
        assert_eq!(rep.agg.pi_nr_f, 0);
    }

    #[test]
    fn sqrt2_tau_scan() {
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let ctx = NfContext::new(k.clone(), crate::order::Order::equation_order(&k));
        let rep = scan_primes(&k, 200, &ScanUnits::Search(ctx), &Config::default());
        assert!(rep.agg.identity_holds());
        assert_eq!(rep.agg.inconclusive_count, 0);
        assert!(rep
            .to_csv()
            .starts_with("p,status,split,max_f,verdict,choice,h_p,rp_term\n"));
    }
}
