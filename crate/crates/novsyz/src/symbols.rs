//! Period symbols and exact exponent scalars.
//!
//! Exponents of the Novikov parameter live in a finitely generated ℚ-span
//! of declared symbols ("1", "sqrt2", ...).  Equality is decided
//! symbolically on coefficient maps; ordering is decided by refining
//! shrinking rational enclosures of the symbols until the sign of the
//! difference is certain.  Refinement is monotone and capped, so an
//! undeclared ℚ-dependence between symbols surfaces as
//! [`NovikovError::UnresolvedComparison`] instead of a silent loop.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use crate::error::NovikovError;

static TABLE_COUNTER: AtomicU64 = AtomicU64::new(1);

/// How a symbol's rational enclosure is shrunk on demand.
#[derive(Clone, Debug, PartialEq)]
pub enum RefinementRule {
    /// The enclosure is already a point; nothing to refine.
    Exact,
    /// The symbol is the positive square root of the given rational;
    /// refinement bisects against `mid² − q`.
    Sqrt(BigRational),
    /// A decimal expansion; each refinement consumes one more digit.
    /// Once the digits are exhausted the enclosure stops shrinking.
    Digits(String),
}

#[derive(Clone, Debug)]
struct Witness {
    lo: BigRational,
    hi: BigRational,
    /// Number of digits consumed so far (Digits rule only).
    consumed: usize,
}

#[derive(Clone, Debug)]
struct SymbolDef {
    name: String,
    rule: RefinementRule,
}

/// Ordered table of period symbols with refinable interval witnesses.
///
/// The first symbol is always the rational unit `"1"` with witness `[1,1]`.
/// ℚ-linear independence of the remaining symbols is declared, not
/// verified.  Witness refinement is internally synchronized; concurrent
/// readers observe valid (possibly differently refined) enclosures.
pub struct PeriodSymbolTable {
    id: u64,
    symbols: Vec<SymbolDef>,
    witnesses: RwLock<Vec<Witness>>,
    max_refinements: u32,
}

impl fmt::Debug for PeriodSymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PeriodSymbolTable({})",
            self.symbols
                .iter()
                .map(|s| s.name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

impl PeriodSymbolTable {
    /// A table holding only the rational unit symbol.
    pub fn rational_only() -> Arc<Self> {
        Self::build(Vec::new(), 80).expect("rational table is always valid")
    }

    /// Builds a table from `(name, rule, initial enclosure)` triples.  The
    /// unit symbol is installed automatically and must not be redeclared.
    pub fn build(
        decls: Vec<(String, RefinementRule, Option<(BigRational, BigRational)>)>,
        max_refinements: u32,
    ) -> Result<Arc<Self>, NovikovError> {
        let mut symbols = vec![SymbolDef {
            name: "1".to_string(),
            rule: RefinementRule::Exact,
        }];
        let mut witnesses = vec![Witness {
            lo: BigRational::one(),
            hi: BigRational::one(),
            consumed: 0,
        }];
        for (name, rule, enclosure) in decls {
            if name == "1" || symbols.iter().any(|s| s.name == name) {
                return Err(NovikovError::BadSymbolTable(format!(
                    "duplicate symbol {name:?}"
                )));
            }
            let (lo, hi) = match (&rule, enclosure) {
                (RefinementRule::Exact, Some((lo, hi))) => {
                    if lo != hi {
                        return Err(NovikovError::BadSymbolTable(format!(
                            "exact symbol {name:?} needs a point witness"
                        )));
                    }
                    (lo, hi)
                }
                (RefinementRule::Exact, None) => {
                    return Err(NovikovError::BadSymbolTable(format!(
                        "exact symbol {name:?} needs a witness"
                    )))
                }
                (RefinementRule::Sqrt(q), enc) => {
                    if q.is_negative() {
                        return Err(NovikovError::BadSymbolTable(format!(
                            "sqrt witness of negative rational for {name:?}"
                        )));
                    }
                    let (lo, hi) = enc.unwrap_or_else(|| initial_sqrt_enclosure(q));
                    if lo.is_negative() || &lo * &lo > *q || &hi * &hi < *q {
                        return Err(NovikovError::BadSymbolTable(format!(
                            "witness [{lo},{hi}] does not enclose sqrt for {name:?}"
                        )));
                    }
                    (lo, hi)
                }
                (RefinementRule::Digits(d), enc) => {
                    let parsed = digits_enclosure(d, 0).ok_or_else(|| {
                        NovikovError::BadSymbolTable(format!("bad digit string for {name:?}"))
                    })?;
                    enc.map(Ok).unwrap_or(Ok(parsed))?
                }
            };
            if lo > hi {
                return Err(NovikovError::BadSymbolTable(format!(
                    "empty witness interval for {name:?}"
                )));
            }
            symbols.push(SymbolDef { name, rule });
            witnesses.push(Witness { lo, hi, consumed: 0 });
        }
        Ok(Arc::new(Self {
            id: TABLE_COUNTER.fetch_add(1, AtomicOrdering::Relaxed),
            symbols,
            witnesses: RwLock::new(witnesses),
            max_refinements,
        }))
    }

    /// Convenience table declaring square roots by radicand: `sqrt2`, ...
    pub fn with_sqrts(radicands: &[u64]) -> Arc<Self> {
        let decls = radicands
            .iter()
            .map(|q| {
                (
                    format!("sqrt{q}"),
                    RefinementRule::Sqrt(BigRational::from(BigInt::from(*q))),
                    None,
                )
            })
            .collect();
        Self::build(decls, 80).expect("sqrt declarations are valid")
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn symbol_names(&self) -> Vec<String> {
        self.symbols.iter().map(|s| s.name.clone()).collect()
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize, NovikovError> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| NovikovError::UnknownSymbol(name.to_string()))
    }

    fn enclosure(&self, idx: usize) -> (BigRational, BigRational) {
        let w = self.witnesses.read().unwrap();
        (w[idx].lo.clone(), w[idx].hi.clone())
    }

    /// Current midpoint approximation of a symbol, for plotting only.
    pub fn approx(&self, idx: usize) -> f64 {
        let (lo, hi) = self.enclosure(idx);
        (rat_to_f64(&lo) + rat_to_f64(&hi)) / 2.0
    }

    /// Shrinks the witness of one symbol.  Returns false when the witness
    /// cannot shrink any further (exact, or digits exhausted).
    fn refine(&self, idx: usize) -> bool {
        let mut ws = self.witnesses.write().unwrap();
        let w = &mut ws[idx];
        match &self.symbols[idx].rule {
            RefinementRule::Exact => false,
            RefinementRule::Sqrt(q) => {
                if w.lo == w.hi {
                    return false;
                }
                let mid = (&w.lo + &w.hi) / BigRational::from(BigInt::from(2));
                if &mid * &mid >= *q {
                    w.hi = mid;
                } else {
                    w.lo = mid;
                }
                true
            }
            RefinementRule::Digits(d) => {
                if let Some((lo, hi)) = digits_enclosure(d, w.consumed + 1) {
                    if lo >= w.lo && hi <= w.hi && (lo != w.lo || hi != w.hi) {
                        w.lo = lo;
                        w.hi = hi;
                        w.consumed += 1;
                        true
                    } else {
                        w.consumed += 1;
                        lo <= hi && (w.lo < w.hi)
                    }
                } else {
                    false
                }
            }
        }
    }

    /// The zero scalar.
    pub fn zero(self: &Arc<Self>) -> ExponentScalar {
        ExponentScalar {
            table: Arc::clone(self),
            coeffs: BTreeMap::new(),
        }
    }

    /// A rational scalar `q·1`.
    pub fn rational(self: &Arc<Self>, q: BigRational) -> ExponentScalar {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(0, q);
        }
        ExponentScalar {
            table: Arc::clone(self),
            coeffs,
        }
    }

    pub fn integer(self: &Arc<Self>, n: i64) -> ExponentScalar {
        self.rational(BigRational::from(BigInt::from(n)))
    }

    /// `p/q` as a scalar.
    pub fn frac(self: &Arc<Self>, p: i64, q: i64) -> ExponentScalar {
        self.rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The scalar `q·symbol`.
    pub fn symbol(self: &Arc<Self>, name: &str) -> Result<ExponentScalar, NovikovError> {
        let idx = self.symbol_index(name)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, BigRational::one());
        Ok(ExponentScalar {
            table: Arc::clone(self),
            coeffs,
        })
    }

    /// Decides the sign of a coefficient map by witness refinement.
    fn sign_of(&self, coeffs: &BTreeMap<usize, BigRational>) -> Result<Ordering, NovikovError> {
        if coeffs.is_empty() {
            return Ok(Ordering::Equal);
        }
        // Pure rational part: exact.
        if coeffs.len() == 1 {
            if let Some(c) = coeffs.get(&0) {
                return Ok(c.cmp(&BigRational::zero()));
            }
        }
        for depth in 0..=self.max_refinements {
            let (lo, hi) = self.eval_interval(coeffs);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            let mut shrunk = false;
            for idx in coeffs.keys() {
                if *idx != 0 {
                    shrunk |= self.refine(*idx);
                }
            }
            if !shrunk {
                // All witnesses are points and the sum straddles zero: an
                // undeclared dependence.  Check exact zero of the point sum.
                if lo.is_zero() && hi.is_zero() {
                    return Err(NovikovError::UnresolvedComparison { depth });
                }
                return Err(NovikovError::UnresolvedComparison { depth });
            }
        }
        Err(NovikovError::UnresolvedComparison {
            depth: self.max_refinements,
        })
    }

    fn eval_interval(&self, coeffs: &BTreeMap<usize, BigRational>) -> (BigRational, BigRational) {
        let ws = self.witnesses.read().unwrap();
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (idx, c) in coeffs {
            let w = &ws[*idx];
            if c.is_positive() {
                lo += c * &w.lo;
                hi += c * &w.hi;
            } else {
                lo += c * &w.hi;
                hi += c * &w.lo;
            }
        }
        (lo, hi)
    }
}

fn initial_sqrt_enclosure(q: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    if *q >= one {
        (BigRational::zero(), q.clone())
    } else {
        (BigRational::zero(), one)
    }
}

fn digits_enclosure(digits: &str, extra: usize) -> Option<(BigRational, BigRational)> {
    let (sign, body) = match digits.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, digits),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let take = extra.min(frac_part.len());
    let mut num: BigInt = int_part.parse().ok()?;
    let mut den = BigInt::one();
    for d in frac_part[..take].bytes() {
        num = num * 10 + (d - b'0');
        den *= 10;
    }
    let lo = BigRational::new(num.clone(), den.clone());
    let hi = BigRational::new(num + 1, den);
    if sign < 0 {
        Some((-hi, -lo))
    } else {
        Some((lo, hi))
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// An element of the ℚ-span of the declared period symbols.
///
/// Zero coefficients are never stored.  Equality is symbolic; ordering is
/// via [`ExponentScalar::try_cmp`].
#[derive(Clone)]
pub struct ExponentScalar {
    table: Arc<PeriodSymbolTable>,
    coeffs: BTreeMap<usize, BigRational>,
}

impl ExponentScalar {
    pub fn table(&self) -> &Arc<PeriodSymbolTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the scalar lies in ℚ·1.
    pub fn is_rational(&self) -> bool {
        self.coeffs.keys().all(|k| *k == 0)
    }

    pub fn rational_part(&self) -> BigRational {
        self.coeffs.get(&0).cloned().unwrap_or_else(BigRational::zero)
    }

    fn assert_same_table(&self, other: &Self) {
        assert_eq!(
            self.table.id, other.table.id,
            "exponent scalars from different symbol tables"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_table(other);
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            let entry = coeffs.entry(*k).or_insert_with(BigRational::zero);
            *entry += v;
            if entry.is_zero() {
                coeffs.remove(k);
            }
        }
        Self {
            table: Arc::clone(&self.table),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            table: Arc::clone(&self.table),
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return self.table.zero();
        }
        Self {
            table: Arc::clone(&self.table),
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from(BigInt::from(n)))
    }

    pub fn halve(&self) -> Self {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Symbolic equality: identical coefficient maps.
    pub fn eq_symbolic(&self, other: &Self) -> bool {
        self.table.id == other.table.id && self.coeffs == other.coeffs
    }

    /// Total order via witness refinement.  Terminates whenever the two
    /// scalars are symbolically distinct and the witnesses can separate
    /// them within the table's refinement cap.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NovikovError> {
        self.assert_same_table(other);
        if self.coeffs == other.coeffs {
            return Ok(Ordering::Equal);
        }
        let d = self.sub(other);
        self.table.sign_of(&d.coeffs)
    }

    pub fn sign(&self) -> Result<Ordering, NovikovError> {
        self.table.sign_of(&self.coeffs)
    }

    pub fn is_positive(&self) -> Result<bool, NovikovError> {
        Ok(self.sign()? == Ordering::Greater)
    }

    pub fn is_negative(&self) -> Result<bool, NovikovError> {
        Ok(self.sign()? == Ordering::Less)
    }

    pub fn min(&self, other: &Self) -> Result<Self, NovikovError> {
        Ok(match self.try_cmp(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    pub fn max(&self, other: &Self) -> Result<Self, NovikovError> {
        Ok(match self.try_cmp(other)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }

    /// Midpoint approximation from the current witnesses (display only).
    pub fn approx(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, v)| rat_to_f64(v) * self.table.approx(*k))
            .sum()
    }

    /// A rational lower bound from the current witnesses.
    pub fn lower_bound(&self) -> BigRational {
        self.table.eval_interval(&self.coeffs).0
    }

    /// A rational upper bound from the current witnesses.
    pub fn upper_bound(&self) -> BigRational {
        self.table.eval_interval(&self.coeffs).1
    }
}

impl PartialEq for ExponentScalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_symbolic(other)
    }
}
impl Eq for ExponentScalar {}

impl fmt::Debug for ExponentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.coeffs {
            let name = &self.table.symbols[*k].name;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *k == 0 {
                write!(f, "{v}")?;
            } else if v.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{v}*{name}")?;
            }
        }
        Ok(())
    }
}

/// Sorts scalars ascending and removes symbolic duplicates.
pub fn sort_dedup(mut vals: Vec<ExponentScalar>) -> Result<Vec<ExponentScalar>, NovikovError> {
    let mut out: Vec<ExponentScalar> = Vec::with_capacity(vals.len());
    for v in vals.drain(..) {
        let mut lo = 0usize;
        let mut hi = out.len();
        let mut dup = false;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match v.try_cmp(&out[mid])? {
                Ordering::Less => hi = mid,
                Ordering::Greater => lo = mid + 1,
                Ordering::Equal => {
                    dup = true;
                    break;
                }
            }
        }
        if !dup {
            out.insert(lo, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_cancellation_is_equal() {
        // 2·√2 − √2 = √2
        let t = PeriodSymbolTable::with_sqrts(&[2]);
        let s2 = t.symbol("sqrt2").unwrap();
        let lhs = s2.scale_int(2).sub(&s2);
        assert_eq!(lhs.try_cmp(&s2).unwrap(), Ordering::Equal);
    }

    #[test]
    fn sqrt2_below_three_halves() {
        let t = PeriodSymbolTable::with_sqrts(&[2]);
        let s2 = t.symbol("sqrt2").unwrap();
        let th = t.frac(3, 2);
        assert_eq!(s2.try_cmp(&th).unwrap(), Ordering::Less);
    }

    #[test]
    fn sqrt2_plus_sqrt3_beats_pi_witness() {
        let t = PeriodSymbolTable::build(
            vec![
                (
                    "sqrt2".into(),
                    RefinementRule::Sqrt(BigRational::from(BigInt::from(2))),
                    None,
                ),
                (
                    "sqrt3".into(),
                    RefinementRule::Sqrt(BigRational::from(BigInt::from(3))),
                    None,
                ),
                (
                    "pi".into(),
                    RefinementRule::Digits("3.14159265358979".into()),
                    None,
                ),
            ],
            80,
        )
        .unwrap();
        let lhs = t.symbol("sqrt2").unwrap().add(&t.symbol("sqrt3").unwrap());
        let pi = t.symbol("pi").unwrap();
        assert_eq!(lhs.try_cmp(&pi).unwrap(), Ordering::Greater);
    }

    #[test]
    fn undeclared_dependence_is_diagnosed() {
        // A symbol "two" that secretly equals 2 cannot be separated from 2·1.
        let t = PeriodSymbolTable::build(
            vec![(
                "two".into(),
                RefinementRule::Exact,
                Some((
                    BigRational::from(BigInt::from(2)),
                    BigRational::from(BigInt::from(2)),
                )),
            )],
            16,
        )
        .unwrap();
        let two_sym = t.symbol("two").unwrap();
        let two_rat = t.integer(2);
        match two_sym.try_cmp(&two_rat) {
            Err(NovikovError::UnresolvedComparison { .. }) => {}
            other => panic!("expected UnresolvedComparison, got {other:?}"),
        }
    }

    #[test]
    fn concurrent_refinement_is_safe() {
        let t = PeriodSymbolTable::with_sqrts(&[2, 3, 5]);
        let mut handles = Vec::new();
        for k in 0..4 {
            let t = Arc::clone(&t);
            handles.push(std::thread::spawn(move || {
                let a = t.symbol("sqrt2").unwrap();
                let b = t.symbol("sqrt3").unwrap();
                let c = t.symbol("sqrt5").unwrap();
                for i in 0..50 {
                    let x = a.scale_int(1 + ((i + k) % 3)).add(&b);
                    let y = c.scale_int(1 + (i % 2));
                    let _ = x.try_cmp(&y).unwrap();
                }
            }));
        }
        for h in handles {
            h.join().unwrap();
        }
    }

    #[test]
    fn dedup_sorts_symbolically() {
        let t = PeriodSymbolTable::with_sqrts(&[2]);
        let vals = vec![
            t.symbol("sqrt2").unwrap(),
            t.integer(1),
            t.symbol("sqrt2").unwrap(),
            t.frac(3, 2),
        ];
        let sorted = sort_dedup(vals).unwrap();
        assert_eq!(sorted.len(), 3);
        assert_eq!(sorted[0], t.integer(1));
        assert_eq!(sorted[1], t.symbol("sqrt2").unwrap());
        assert_eq!(sorted[2], t.frac(3, 2));
    }
}
