use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::jn::{build_jn, check_nonsingleton_bound, nonsingleton_fits_allowance, tuple_count_closed_form, JnTrace};
use super::{factorial_big, jn_gamma_bound, nonsingleton_allowance};
use crate::bits::StringSet;
use crate::error::{Error, Result};
use crate::group::{factorial, SymEngine};
use crate::partition::coarsest_supporting_partition;
use crate::preorder::{classify, CaseReport, CaseThresholds, Family, OrderedPartition};
use crate::realize::SupportFamily;

/// The closed-form stabilizer bounds, each paired with the exact quantity it
/// bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundId {
    /// Realizable tuples over the selected classes: `(f!)^⌈n/(f−1)⌉ · 2^n`.
    RealizableTuples,
    /// `|Stab(𝒫)| ≤ (f!)^⌈n/(f−1)⌉ · 2^n · ⌊8 log₂ n⌋!`.
    PreorderStabilizer,
    /// `|Stab(SP(B))| ≤ s! · t! · (⌈n/t⌉!)^t`.
    SupportStabilizer,
    /// `|Stab(B)| ≤ (2cn)^⌊|S|/2⌋ · (n − |S|)!`.
    ClassStabilizer,
}

impl BoundId {
    pub const ALL: [BoundId; 4] = [
        BoundId::RealizableTuples,
        BoundId::PreorderStabilizer,
        BoundId::SupportStabilizer,
        BoundId::ClassStabilizer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::RealizableTuples => "realizable_tuples",
            BoundId::PreorderStabilizer => "preorder_stabilizer",
            BoundId::SupportStabilizer => "support_stabilizer",
            BoundId::ClassStabilizer => "class_stabilizer",
        }
    }

    pub fn quantity(self) -> &'static str {
        match self {
            BoundId::RealizableTuples => "realizable support-permutation tuples over selected classes",
            BoundId::PreorderStabilizer => "|Stab(P)|",
            BoundId::SupportStabilizer => "|Stab(SP(B))|",
            BoundId::ClassStabilizer => "|Stab(B)|",
        }
    }

    /// Whether the exact quantity is a stabilizer order, so that `n!/bound`
    /// is an orbit lower bound.
    pub fn bounds_orbit(self) -> bool {
        self != BoundId::RealizableTuples
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn ser_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BoundEntry {
    pub id: BoundId,
    pub quantity: &'static str,
    /// `None` when the formula is undefined for these inputs.
    #[serde(serialize_with = "ser_big")]
    pub bound: Option<BigUint>,
    /// Brute-forced value, when within the enumeration cap.
    #[serde(serialize_with = "ser_big")]
    pub exact: Option<BigUint>,
    pub hypotheses_ok: bool,
    /// Hypotheses that failed, by name.
    pub failed_hypotheses: Vec<String>,
}

impl BoundEntry {
    /// `Some(exact ≤ bound)` when both sides are known.
    pub fn holds(&self) -> Option<bool> {
        Some(self.exact.as_ref()? <= self.bound.as_ref()?)
    }

    /// A violation only counts when the hypotheses are met.
    pub fn is_sound(&self) -> bool {
        !self.hypotheses_ok || self.holds() != Some(false)
    }
}

/// Inputs to the bound formulas.
#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq)]
pub struct BoundParams {
    /// Class-size constant; measured as `⌈max |C| / n⌉` when absent.
    pub c: Option<u64>,
    pub thresholds: CaseThresholds,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub c: u64,
    /// `max_C |SP(C)|`.
    pub f: usize,
    /// Singleton parts of `SP(B)`.
    pub s: usize,
    /// Non-singleton parts of `SP(B)`.
    pub t: usize,
    /// `|S| / n` for the singletons of `SP(B)`.
    pub delta_s: f64,
    pub nonsingleton_positions: Option<usize>,
    pub entries: Vec<BoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<JnTrace>,
}

impl BoundReport {
    pub fn entry(&self, id: BoundId) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn all_sound(&self) -> bool {
        self.entries.iter().all(BoundEntry::is_sound)
    }
}

fn hyp(failed: &mut Vec<String>, ok: bool, name: &str) {
    if !ok {
        failed.push(name.to_string());
    }
}

fn entry(id: BoundId, bound: Option<BigUint>, exact: Option<BigUint>, failed: Vec<String>) -> BoundEntry {
    BoundEntry {
        id,
        quantity: id.quantity(),
        bound,
        exact,
        hypotheses_ok: failed.is_empty(),
        failed_hypotheses: failed,
    }
}

fn within_cap(engine: &SymEngine, n: usize) -> bool {
    engine.check(n).is_ok()
}

/// `s! · t! · (⌈n/t⌉!)^t`, or `s!` when there are no non-singleton parts.
fn support_stab_formula(n: usize, s: usize, t: usize) -> BigUint {
    if t == 0 {
        return factorial_big(s);
    }
    factorial_big(s) * factorial_big(t) * factorial_big(n.div_ceil(t)).pow(t as u32)
}

/// `(2cn)^⌊|S|/2⌋ · (n − |S|)!`.
fn class_stab_formula(n: usize, c: u64, singletons: usize) -> BigUint {
    BigUint::from(2 * c * n as u64).pow((singletons / 2) as u32) * factorial_big(n - singletons)
}

/// Bounds on `Stab(SP(B))` and `Stab(B)` for one class.
pub fn stab_bound_report_for_class(
    engine: &SymEngine,
    b: &StringSet,
    params: BoundParams,
) -> Result<BoundReport> {
    if b.is_empty() {
        return Err(Error::Empty("string set"));
    }
    let n = b.dim();
    let c = params.c.unwrap_or_else(|| (b.len() as u64).div_ceil(n as u64).max(1));
    let sp = coarsest_supporting_partition(b)?;
    let s = sp.singleton_positions().len();
    let t = sp.len() - s;
    let linear = !params.thresholds.support_is_sublinear(sp.len(), n);
    let exact = within_cap(engine, n);

    let mut failed = Vec::new();
    hyp(&mut failed, linear, "support_linear");
    let support = entry(
        BoundId::SupportStabilizer,
        Some(support_stab_formula(n, s, t)),
        if exact {
            Some(BigUint::from(engine.setwise_stabilizer(&sp)?.order()))
        } else {
            None
        },
        failed,
    );

    let mut failed = Vec::new();
    hyp(&mut failed, b.len() as u64 <= c * n as u64, "class_size_at_most_cn");
    hyp(&mut failed, linear, "support_linear");
    let class = entry(
        BoundId::ClassStabilizer,
        Some(class_stab_formula(n, c, s)),
        if exact {
            Some(BigUint::from(engine.stabilizer_of_set(b)?.order()))
        } else {
            None
        },
        failed,
    );

    Ok(BoundReport {
        n,
        c,
        f: sp.len(),
        s,
        t,
        delta_s: s as f64 / n as f64,
        nonsingleton_positions: None,
        entries: vec![support, class],
        case: None,
        selection: None,
    })
}

/// All four bounds for an ordered partition, with `B` the class whose support
/// has the most parts.
pub fn stab_bound_report(
    engine: &SymEngine,
    p: &OrderedPartition,
    params: BoundParams,
) -> Result<BoundReport> {
    let n = p.dim();
    let max_class = p.max_class_size() as u64;
    let c = params.c.unwrap_or_else(|| max_class.div_ceil(n as u64).max(1));
    let params = BoundParams { c: Some(c), ..params };
    let case = classify(p, params.thresholds)?;
    let b = &p.classes()[case.b_class_index];
    let class_report = stab_bound_report_for_class(engine, b, params)?;
    let f = case.sp_size;
    let sublinear = params.thresholds.support_is_sublinear(f, n);
    let exact = within_cap(engine, n);
    let selection = build_jn(p)?;
    let nonsingleton = check_nonsingleton_bound(p, c)?;

    let mut failed = Vec::new();
    hyp(&mut failed, f >= 2, "support_size_at_least_2");
    hyp(&mut failed, sublinear, "support_sublinear");
    let tuples_exact = if exact {
        let sets = selection
            .chosen
            .iter()
            .map(|&i| p.classes()[i].clone())
            .collect();
        let count = SupportFamily::new(n, sets)?.realizable_tuples(engine)?.len();
        Some(BigUint::from(count))
    } else {
        None
    };
    let tuples = entry(
        BoundId::RealizableTuples,
        (f >= 2).then(|| jn_gamma_bound(&selection, f).map(|b| b.closed_form)).transpose()?,
        tuples_exact,
        failed,
    );

    let mut failed = Vec::new();
    hyp(&mut failed, f >= 2, "support_size_at_least_2");
    hyp(&mut failed, sublinear, "support_sublinear");
    hyp(&mut failed, max_class <= c * n as u64, "class_size_at_most_cn");
    hyp(&mut failed, nonsingleton_fits_allowance(&nonsingleton), "few_nonsingleton_positions");
    let preorder = entry(
        BoundId::PreorderStabilizer,
        (f >= 2).then(|| tuple_count_closed_form(n, f) * factorial_big(nonsingleton_allowance(n))),
        if exact {
            Some(BigUint::from(engine.stabilizer_order_ordered_partition(p)?))
        } else {
            None
        },
        failed,
    );

    let mut entries = vec![tuples, preorder];
    entries.extend(class_report.entries);
    Ok(BoundReport {
        n,
        c,
        f,
        s: class_report.s,
        t: class_report.t,
        delta_s: class_report.delta_s,
        nonsingleton_positions: Some(nonsingleton.nonsingleton_positions),
        entries,
        case: Some(case),
        selection: Some(selection),
    })
}

pub const GROWTH_CSV_HEADER: &str = "n,family,exact_orbit,exact_stabilizer,poly,orbit_ratio,\
realizable_tuples,preorder_stabilizer,support_stabilizer,class_stabilizer,\
best_orbit_lower_bound,lower_bound_ratio,hypotheses_ok";

/// One row of the finite-n growth table.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub family: String,
    /// `n!/|Stab(𝒫)|`, when within the cap.
    pub exact_orbit: Option<u64>,
    pub exact_stabilizer: Option<u64>,
    /// `2^{kn}` as a decimal string.
    pub poly: String,
    /// `exact_orbit / 2^{kn}`.
    pub orbit_ratio: Option<f64>,
    /// Bound values by id, decimal strings; undefined formulas are absent.
    pub bounds: BTreeMap<String, String>,
    /// Largest `⌈n!/bound⌉` over stabilizer bounds whose hypotheses hold.
    pub best_orbit_lower_bound: Option<String>,
    pub lower_bound_ratio: Option<f64>,
    /// Cover and class-size hypotheses hold and at least one stabilizer
    /// bound applies.
    pub hypotheses_ok: bool,
}

impl GrowthRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mut cols = vec![
            self.n.to_string(),
            self.family.clone(),
            opt(self.exact_orbit.map(|v| v.to_string())),
            opt(self.exact_stabilizer.map(|v| v.to_string())),
            self.poly.clone(),
            opt(self.orbit_ratio.map(|v| format!("{v:e}"))),
        ];
        for id in BoundId::ALL {
            cols.push(self.bounds.get(id.name()).cloned().unwrap_or_default());
        }
        cols.push(opt(self.best_orbit_lower_bound.clone()));
        cols.push(opt(self.lower_bound_ratio.map(|v| format!("{v:e}"))));
        cols.push(self.hypotheses_ok.to_string());
        cols.join(",")
    }
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    // shift both into f64 range before dividing
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let a = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let b = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    a / b
}

/// Exact orbit sizes against bounds and `2^{kn}` for each `n`.
pub fn growth_report(
    engine: &SymEngine,
    family: Family,
    ns: impl IntoIterator<Item = usize>,
    c: u64,
    seed: u64,
    k: u32,
) -> Result<Vec<GrowthRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let p = family.generate(n, c, seed)?;
        let poly = BigUint::from(1u8) << (k as usize * n);
        let exact_stab = if within_cap(engine, n) {
            Some(engine.stabilizer_order_ordered_partition(&p)?)
        } else {
            None
        };
        let exact_orbit = exact_stab.map(|s| factorial(n) / s);
        let report = stab_bound_report(
            engine,
            &p,
            BoundParams {
                c: Some(c),
                thresholds: CaseThresholds::default(),
            },
        )?;
        let n_fact = factorial_big(n);
        let mut bounds = BTreeMap::new();
        let mut best: Option<BigUint> = None;
        for e in &report.entries {
            let Some(b) = &e.bound else { continue };
            bounds.insert(e.id.name().to_string(), b.to_string());
            if e.id.bounds_orbit() && e.hypotheses_ok {
                let lower = (&n_fact + b - 1u8) / b;
                if best.as_ref().is_none_or(|x| lower > *x) {
                    best = Some(lower);
                }
            }
        }
        let size_ok = p.validate(c).is_ok();
        rows.push(GrowthRow {
            n,
            family: family.name().to_string(),
            exact_orbit,
            exact_stabilizer: exact_stab,
            orbit_ratio: exact_orbit.map(|o| ratio(&BigUint::from(o), &poly)),
            poly: poly.to_string(),
            bounds,
            lower_bound_ratio: best.as_ref().map(|b| ratio(b, &poly)),
            best_orbit_lower_bound: best.as_ref().map(|b| b.to_string()),
            hypotheses_ok: size_ok && best.is_some(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::{hamming_preorder, lex_block_preorder};

    fn set(words: &[&str]) -> StringSet {
        StringSet::parse(words).unwrap()
    }

    fn big(v: u64) -> Option<BigUint> {
        Some(BigUint::from(v))
    }

    #[test]
    fn support_bound_examples() {
        let e = SymEngine::default();
        let r = stab_bound_report_for_class(&e, &set(&["01"]), BoundParams::default()).unwrap();
        assert_eq!((r.s, r.t), (2, 0));
        let sup = r.entry(BoundId::SupportStabilizer).unwrap();
        assert_eq!(sup.bound, big(2));
        assert_eq!(sup.exact, big(2));

        let r = stab_bound_report_for_class(&e, &set(&["0011"]), BoundParams::default()).unwrap();
        assert_eq!((r.s, r.t), (0, 2));
        let sup = r.entry(BoundId::SupportStabilizer).unwrap();
        assert_eq!(sup.bound, big(8));
        assert_eq!(sup.exact, big(8));
        // two parts out of four is not more than n/2
        assert!(!sup.hypotheses_ok);
    }

    #[test]
    fn uneven_parts_break_support_formula() {
        // SP = {1,2}|{3..8}: the formula assumes parts of size at most ⌈n/t⌉
        let e = SymEngine::default();
        let r = stab_bound_report_for_class(&e, &set(&["11000000"]), BoundParams::default())
            .unwrap();
        let sup = r.entry(BoundId::SupportStabilizer).unwrap();
        assert_eq!(sup.bound, big(1152));
        assert_eq!(sup.exact, big(2 * 720));
        assert_eq!(sup.holds(), Some(false));
        assert!(!sup.hypotheses_ok);
        assert!(sup.is_sound());
    }

    #[test]
    fn class_bound_example() {
        let e = SymEngine::default();
        let b = set(&["000011", "001111", "010101", "111000"]);
        let r = stab_bound_report_for_class(&e, &b, BoundParams::default()).unwrap();
        let cls = r.entry(BoundId::ClassStabilizer).unwrap();
        // c = 1, |S| = 6: (12)^3 · 0!
        assert_eq!(cls.bound, big(1728));
        assert_eq!(cls.exact, big(1));
        assert!(cls.hypotheses_ok);
    }

    #[test]
    fn hamming_report() {
        let e = SymEngine::default();
        let r = stab_bound_report(&e, &hamming_preorder(4).unwrap(), BoundParams::default())
            .unwrap();
        assert_eq!(r.f, 1);
        let pre = r.entry(BoundId::PreorderStabilizer).unwrap();
        assert_eq!(pre.bound, None);
        assert_eq!(pre.exact, big(24));
        assert!(!pre.hypotheses_ok);
        assert!(r.all_sound());
    }

    #[test]
    fn lex_block_bounds_hold() {
        let e = SymEngine::default();
        for n in 3..=6 {
            let p = lex_block_preorder(n, 1).unwrap();
            let r = stab_bound_report(&e, &p, BoundParams::default()).unwrap();
            for entry in &r.entries {
                if entry.bound.is_some() {
                    assert_eq!(entry.holds(), Some(true), "n={n} {:?}", entry.id);
                }
            }
        }
    }

    #[test]
    fn growth_rows() {
        let e = SymEngine::default();
        let rows = growth_report(&e, Family::Hamming, 3..=6, 1, 0, 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.exact_orbit == Some(1)));
        let ratios: Vec<f64> = rows.iter().map(|r| r.orbit_ratio.unwrap()).collect();
        assert_eq!(ratios, [0.125, 0.0625, 0.03125, 0.015625]);
        let csv = rows[0].to_csv();
        assert_eq!(csv.split(',').count(), GROWTH_CSV_HEADER.split(',').count());
        assert!(GROWTH_CSV_HEADER.starts_with("n,family,exact_orbit,"));

        let rows = growth_report(&e, Family::Singletons, 4..=6, 1, 0, 1).unwrap();
        for r in &rows {
            assert_eq!(r.exact_orbit, Some(factorial(r.n)));
        }
    }
}
