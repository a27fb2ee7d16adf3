//! Elements of the Novikov field with lazy precision.
//!
//! An element is a finite sum `Σ aᵢ T^{λᵢ}` with strictly increasing
//! exponents plus a precision marker: all terms with exponent at or above
//! the marker are unknown.  This realizes the adic completion at a finite
//! working precision; every computation below the marker is exact.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::NovikovError;
use crate::field::{GroundField, Scalar};
use crate::symbols::{ExponentScalar, PeriodSymbolTable};

/// Valuation of an element: least stored exponent, the precision marker
/// for an empty tail-only element, or +∞ for exact zero.
#[derive(Clone, Debug, PartialEq)]
pub enum Valuation {
    Finite(ExponentScalar),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&ExponentScalar> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NovikovError> {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ok(Ordering::Equal),
            (Valuation::Infinite, _) => Ok(Ordering::Greater),
            (_, Valuation::Infinite) => Ok(Ordering::Less),
            (Valuation::Finite(a), Valuation::Finite(b)) => a.try_cmp(b),
        }
    }
}

/// Precision marker: `Finite(μ)` means terms with exponent ≥ μ are unknown.
pub type Precision = Option<ExponentScalar>;

/// A Novikov-field element over a configured ground field.
#[derive(Clone)]
pub struct NovikovElement {
    field: GroundField,
    table: Arc<PeriodSymbolTable>,
    /// Strictly increasing exponents, nonzero coefficients, all < precision.
    terms: Vec<(ExponentScalar, Scalar)>,
    /// `None` is +∞ (exact element).
    precision: Precision,
}

impl NovikovElement {
    pub fn zero(field: GroundField, table: &Arc<PeriodSymbolTable>) -> Self {
        Self {
            field,
            table: Arc::clone(table),
            terms: Vec::new(),
            precision: None,
        }
    }

    pub fn one(field: GroundField, table: &Arc<PeriodSymbolTable>) -> Self {
        Self::monomial(field, table.zero(), field.one())
    }

    /// Unknown below nothing: zero known only up to `precision`.
    pub fn zero_at_precision(
        field: GroundField,
        table: &Arc<PeriodSymbolTable>,
        precision: ExponentScalar,
    ) -> Self {
        Self {
            field,
            table: Arc::clone(table),
            terms: Vec::new(),
            precision: Some(precision),
        }
    }

    pub fn monomial(field: GroundField, exponent: ExponentScalar, coeff: Scalar) -> Self {
        let table = Arc::clone(exponent.table());
        if coeff.is_zero() {
            return Self::zero(field, &table);
        }
        Self {
            field,
            table,
            terms: vec![(exponent, coeff)],
            precision: None,
        }
    }

    /// Builds an element from arbitrary terms, merging and normalizing.
    pub fn from_terms(
        field: GroundField,
        table: &Arc<PeriodSymbolTable>,
        terms: Vec<(ExponentScalar, Scalar)>,
        precision: Precision,
    ) -> Result<Self, NovikovError> {
        let mut el = Self {
            field,
            table: Arc::clone(table),
            terms: Vec::new(),
            precision,
        };
        for (e, c) in terms {
            el.accumulate(e, c)?;
        }
        el.enforce_precision()?;
        Ok(el)
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn table(&self) -> &Arc<PeriodSymbolTable> {
        &self.table
    }

    pub fn terms(&self) -> &[(ExponentScalar, Scalar)] {
        &self.terms
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    /// True iff no terms are stored (zero up to the precision marker).
    pub fn is_zero_up_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff exactly zero (no terms, infinite precision).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => match &self.precision {
                Some(p) => Valuation::Finite(p.clone()),
                None => Valuation::Infinite,
            },
        }
    }

    /// `e^{-val}` as f64, for display.
    pub fn norm_f64(&self) -> f64 {
        match self.valuation() {
            Valuation::Infinite => 0.0,
            Valuation::Finite(v) => (-v.approx()).exp(),
        }
    }

    pub fn leading(&self) -> Option<(&ExponentScalar, &Scalar)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    fn accumulate(&mut self, e: ExponentScalar, c: Scalar) -> Result<(), NovikovError> {
        if c.is_zero() {
            return Ok(());
        }
        // Binary search by symbolic order.
        let mut lo = 0usize;
        let mut hi = self.terms.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match e.try_cmp(&self.terms[mid].0)? {
                Ordering::Less => hi = mid,
                Ordering::Greater => lo = mid + 1,
                Ordering::Equal => {
                    let merged = self.field.add(&self.terms[mid].1, &c);
                    if merged.is_zero() {
                        self.terms.remove(mid);
                    } else {
                        self.terms[mid].1 = merged;
                    }
                    return Ok(());
                }
            }
        }
        self.terms.insert(lo, (e, c));
        Ok(())
    }

    fn enforce_precision(&mut self) -> Result<(), NovikovError> {
        if let Some(p) = self.precision.clone() {
            let mut keep = Vec::with_capacity(self.terms.len());
            for (e, c) in self.terms.drain(..) {
                if e.try_cmp(&p)? == Ordering::Less {
                    keep.push((e, c));
                }
            }
            self.terms = keep;
        }
        Ok(())
    }

    fn check_compat(&self, other: &Self) -> Result<(), NovikovError> {
        if self.field != other.field {
            return Err(NovikovError::MixedFields);
        }
        if self.table.id() != other.table.id() {
            return Err(NovikovError::MixedSymbolTables);
        }
        Ok(())
    }

    fn min_precision(&self, other: &Self) -> Result<Precision, NovikovError> {
        Ok(match (&self.precision, &other.precision) {
            (None, None) => None,
            (Some(p), None) | (None, Some(p)) => Some(p.clone()),
            (Some(p), Some(q)) => Some(p.min(q)?),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check_compat(other)?;
        let mut out = Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms: self.terms.clone(),
            precision: self.min_precision(other)?,
        };
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone())?;
        }
        out.enforce_precision()?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NovikovError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.field.neg(c)))
                .collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self {
                field: self.field,
                table: Arc::clone(&self.table),
                terms: Vec::new(),
                precision: self.precision.clone(),
            };
        }
        Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), self.field.mul(k, c)))
                .collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiplies by the monomial `T^s`.
    pub fn shift(&self, s: &ExponentScalar) -> Self {
        Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(s), c.clone()))
                .collect(),
            precision: self.precision.as_ref().map(|p| p.add(s)),
        }
    }

    /// Cauchy product truncated at `min(prec_x + val_y, prec_y + val_x)`.
    pub fn mul(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check_compat(other)?;
        let precision = {
            let pa = match (&self.precision, other.valuation()) {
                (Some(p), Valuation::Finite(v)) => Some(p.add(&v)),
                _ => None,
            };
            let pb = match (&other.precision, self.valuation()) {
                (Some(p), Valuation::Finite(v)) => Some(p.add(&v)),
                _ => None,
            };
            match (pa, pb) {
                (None, None) => None,
                (Some(p), None) | (None, Some(p)) => Some(p),
                (Some(p), Some(q)) => Some(p.min(&q)?),
            }
        };
        let mut out = Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms: Vec::new(),
            precision,
        };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.add(e2);
                if let Some(p) = &out.precision {
                    if e.try_cmp(p)? != Ordering::Less {
                        continue;
                    }
                }
                out.accumulate(e, self.field.mul(c1, c2))?;
            }
        }
        Ok(out)
    }

    /// The class of the element in the window `[a, b)`: keeps the terms
    /// with exponent in the window and sets precision `b`.
    pub fn truncate_window(
        &self,
        a: &ExponentScalar,
        b: &ExponentScalar,
    ) -> Result<Self, NovikovError> {
        if a.try_cmp(b)? != Ordering::Less {
            return Err(NovikovError::BadSymbolTable(format!(
                "empty window [{a}, {b})"
            )));
        }
        if let Some(p) = &self.precision {
            if b.try_cmp(p)? == Ordering::Greater {
                return Err(NovikovError::InsufficientPrecision {
                    needed: b.to_string(),
                    have: p.to_string(),
                });
            }
        }
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e.try_cmp(a)? != Ordering::Less && e.try_cmp(b)? == Ordering::Less {
                terms.push((e.clone(), c.clone()));
            }
        }
        Ok(Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms,
            precision: Some(b.clone()),
        })
    }

    /// Truncates to precision `min(current, μ)` without a lower cut.
    pub fn truncate_precision(&self, mu: &ExponentScalar) -> Result<Self, NovikovError> {
        let precision = match &self.precision {
            None => Some(mu.clone()),
            Some(p) => Some(p.min(mu)?),
        };
        let mut out = Self {
            field: self.field,
            table: Arc::clone(&self.table),
            terms: self.terms.clone(),
            precision,
        };
        out.enforce_precision()?;
        Ok(out)
    }

    /// Multiplicative inverse up to the requested precision.
    ///
    /// Requires `precision(x) ≥ target + 2·val(x)`; the result has
    /// valuation `−val(x)` and precision `target`.
    pub fn invert(&self, target: &ExponentScalar) -> Result<Self, NovikovError> {
        let (val, lead) = match self.terms.first() {
            None => return Err(NovikovError::DivisionByZero),
            Some((e, c)) => (e.clone(), c.clone()),
        };
        if let Some(p) = &self.precision {
            let needed = target.add(&val).add(&val);
            if p.try_cmp(&needed)? == Ordering::Less {
                return Err(NovikovError::InsufficientPrecision {
                    needed: needed.to_string(),
                    have: p.to_string(),
                });
            }
        }
        let inv_lead = self.field.inv(&lead)?;
        // x = c T^v (1 + u): invert the unit part by a geometric series
        // truncated at target + v.
        let series_precision = target.add(&val);
        let unit = self
            .shift(&val.neg())
            .scale(&inv_lead)
            .truncate_precision(&series_precision)?;
        let u = unit.sub(&Self::one(self.field, &self.table))?;
        let mut acc = Self::one(self.field, &self.table).truncate_precision(&series_precision)?;
        let mut power = Self::one(self.field, &self.table).truncate_precision(&series_precision)?;
        loop {
            power = power.mul(&u.neg())?.truncate_precision(&series_precision)?;
            if power.is_zero_up_to_precision() {
                break;
            }
            acc = acc.add(&power)?;
        }
        let mut out = acc.scale(&inv_lead).shift(&val.neg());
        out.precision = Some(target.clone());
        out.enforce_precision()?;
        Ok(out)
    }

    /// Exact equality of terms and precision markers.
    pub fn eq_exact(&self, other: &Self) -> Result<bool, NovikovError> {
        self.check_compat(other)?;
        match (&self.precision, &other.precision) {
            (None, None) => {}
            (Some(p), Some(q)) => {
                if p.try_cmp(q)? != Ordering::Equal {
                    return Ok(false);
                }
            }
            _ => return Ok(false),
        }
        if self.terms.len() != other.terms.len() {
            return Ok(false);
        }
        for ((e1, c1), (e2, c2)) in self.terms.iter().zip(&other.terms) {
            if c1 != c2 || e1.try_cmp(e2)? != Ordering::Equal {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e, c) in &self.terms {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if e.is_zero() {
                    write!(f, "{c}")?;
                } else if c.is_one() {
                    write!(f, "T^({e})")?;
                } else {
                    write!(f, "{c}*T^({e})")?;
                }
            }
        }
        if let Some(p) = &self.precision {
            write!(f, " + O(T^({p}))")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> GroundField {
        GroundField::Rationals
    }

    #[test]
    fn add_cancels() {
        // (1 + T^{1/2}) + (−T^{1/2}) = 1
        let t = PeriodSymbolTable::rational_only();
        let one = NovikovElement::one(q(), &t);
        let half = NovikovElement::monomial(q(), t.frac(1, 2), q().one());
        let x = one.add(&half).unwrap();
        let y = half.neg();
        let sum = x.add(&y).unwrap();
        assert!(sum.eq_exact(&one).unwrap());
    }

    #[test]
    fn add_orders_by_witness() {
        // T^{√2} + T^{√3} has valuation √2.
        let t = PeriodSymbolTable::with_sqrts(&[2, 3]);
        let a = NovikovElement::monomial(q(), t.symbol("sqrt2").unwrap(), q().one());
        let b = NovikovElement::monomial(q(), t.symbol("sqrt3").unwrap(), q().one());
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.terms().len(), 2);
        assert_eq!(
            sum.valuation().finite().unwrap(),
            &t.symbol("sqrt2").unwrap()
        );
    }

    #[test]
    fn precision_absorbs_tail() {
        // (1, precision 1) + T^{3/2} = 1 with precision 1.
        let t = PeriodSymbolTable::rational_only();
        let one_prec = NovikovElement::from_terms(
            q(),
            &t,
            vec![(t.zero(), q().one())],
            Some(t.integer(1)),
        )
        .unwrap();
        let tail = NovikovElement::monomial(q(), t.frac(3, 2), q().one());
        let sum = one_prec.add(&tail).unwrap();
        assert!(sum.eq_exact(&one_prec).unwrap());
    }

    #[test]
    fn mul_difference_of_squares() {
        // (1 + T^{1/2})(1 − T^{1/2}) = 1 − T
        let t = PeriodSymbolTable::rational_only();
        let one = NovikovElement::one(q(), &t);
        let half = NovikovElement::monomial(q(), t.frac(1, 2), q().one());
        let prod = one.add(&half).unwrap().mul(&one.sub(&half).unwrap()).unwrap();
        let expected = one
            .sub(&NovikovElement::monomial(q(), t.integer(1), q().one()))
            .unwrap();
        assert!(prod.eq_exact(&expected).unwrap());
    }

    #[test]
    fn mul_exponent_cancellation() {
        // T^{√2}·T^{1−√2} = T
        let t = PeriodSymbolTable::with_sqrts(&[2]);
        let s2 = t.symbol("sqrt2").unwrap();
        let a = NovikovElement::monomial(q(), s2.clone(), q().one());
        let b = NovikovElement::monomial(q(), t.integer(1).sub(&s2), q().one());
        let prod = a.mul(&b).unwrap();
        let expected = NovikovElement::monomial(q(), t.integer(1), q().one());
        assert!(prod.eq_exact(&expected).unwrap());
    }

    #[test]
    fn mul_mod_two_cross_terms_cancel() {
        // over 𝔽₂: (1 + T^{0.3})² = 1 + T^{0.6}
        let f = GroundField::Prime(2);
        let t = PeriodSymbolTable::rational_only();
        let x = NovikovElement::from_terms(
            f,
            &t,
            vec![(t.zero(), f.one()), (t.frac(3, 10), f.one())],
            None,
        )
        .unwrap();
        let sq = x.mul(&x).unwrap();
        let expected = NovikovElement::from_terms(
            f,
            &t,
            vec![(t.zero(), f.one()), (t.frac(6, 10), f.one())],
            None,
        )
        .unwrap();
        assert!(sq.eq_exact(&expected).unwrap());
    }

    #[test]
    fn window_examples() {
        let t = PeriodSymbolTable::rational_only();
        let x = NovikovElement::from_terms(
            q(),
            &t,
            vec![
                (t.frac(1, 10), q().from_i64(3)),
                (t.frac(9, 10), q().from_i64(5)),
                (t.frac(12, 10), q().one()),
            ],
            None,
        )
        .unwrap();
        let w = x.truncate_window(&t.integer(0), &t.integer(1)).unwrap();
        assert_eq!(w.terms().len(), 2);
        assert_eq!(w.precision().as_ref().unwrap(), &t.integer(1));

        // lower cut: truncate_window(1 + T^{√2}, √2, √2+1) = T^{√2}
        let ts = PeriodSymbolTable::with_sqrts(&[2]);
        let s2 = ts.symbol("sqrt2").unwrap();
        let y = NovikovElement::from_terms(
            q(),
            &ts,
            vec![(ts.zero(), q().one()), (s2.clone(), q().one())],
            None,
        )
        .unwrap();
        let w2 = y.truncate_window(&s2, &s2.add(&ts.integer(1))).unwrap();
        assert_eq!(w2.terms().len(), 1);
        assert_eq!(w2.terms()[0].0, s2);

        // below-window term dropped entirely
        let z = NovikovElement::monomial(q(), t.frac(1, 2), q().one());
        let w3 = z.truncate_window(&t.frac(6, 10), &t.frac(9, 10)).unwrap();
        assert!(w3.is_zero_up_to_precision());
        assert_eq!(w3.precision().as_ref().unwrap(), &t.frac(9, 10));
    }

    #[test]
    fn invert_geometric_series() {
        // invert(1 + T^{0.3}, precision 1) = 1 − T^{0.3} + T^{0.6} − T^{0.9}
        let t = PeriodSymbolTable::rational_only();
        let x = NovikovElement::from_terms(
            q(),
            &t,
            vec![(t.zero(), q().one()), (t.frac(3, 10), q().one())],
            None,
        )
        .unwrap();
        let inv = x.invert(&t.integer(1)).unwrap();
        let expected = NovikovElement::from_terms(
            q(),
            &t,
            vec![
                (t.zero(), q().one()),
                (t.frac(3, 10), q().from_i64(-1)),
                (t.frac(6, 10), q().one()),
                (t.frac(9, 10), q().from_i64(-1)),
            ],
            Some(t.integer(1)),
        )
        .unwrap();
        assert!(inv.eq_exact(&expected).unwrap());
        // x · x⁻¹ − 1 has valuation ≥ 1
        let prod = x.mul(&inv).unwrap();
        let err = prod.sub(&NovikovElement::one(q(), &t)).unwrap();
        assert!(err.is_zero_up_to_precision());
    }

    #[test]
    fn invert_monomial_and_scalar() {
        let t = PeriodSymbolTable::with_sqrts(&[2]);
        let s2 = t.symbol("sqrt2").unwrap();
        let x = NovikovElement::monomial(q(), s2.clone(), q().one());
        let inv = x.invert(&t.integer(5)).unwrap();
        assert_eq!(inv.terms().len(), 1);
        assert_eq!(inv.terms()[0].0, s2.neg());

        let two = NovikovElement::monomial(q(), t.zero(), q().from_i64(2));
        let half = two.invert(&t.integer(3)).unwrap();
        assert_eq!(half.terms()[0].1, q().div(&q().one(), &q().from_i64(2)).unwrap());
    }

    #[test]
    fn invert_zero_fails() {
        let t = PeriodSymbolTable::rational_only();
        let z = NovikovElement::zero(q(), &t);
        assert!(matches!(
            z.invert(&t.integer(1)),
            Err(NovikovError::DivisionByZero)
        ));
    }
}
