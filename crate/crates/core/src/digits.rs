//! Exact eventually-periodic digit expansions of rationals and the
//! digit-doubling maps between binary expansions and Cantor-set
//! expansions in bases 3 and 4.
//!
//! Everything here is exact: rationals in, rationals out, no rounding.

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Branch selector for the two images of a dyadic rational.
///
/// A dyadic rational has two binary expansions; `Minus` doubles the
/// non-terminating (repeating-1s) form, `Plus` the terminating one.
/// This matches the min/max definition: the repeating form always maps
/// to the smaller image (see `tests::branch_is_min_max`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    Minus,
    Plus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Minus => write!(f, "minus"),
            Branch::Plus => write!(f, "plus"),
        }
    }
}

/// Exact base-`base` expansion of a rational: sign, integer digits,
/// a fractional prefix and a repeating tail (empty tail = terminating).
///
/// Canonical form (as produced by [`to_digits`]): the tail is never
/// all-(base-1) and has minimal length, the prefix is minimal, and the
/// integer part carries no leading zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatingDigits {
    pub negative: bool,
    pub base: u32,
    /// Most significant first; empty means 0.
    pub integer: Vec<u32>,
    pub prefix: Vec<u32>,
    pub tail: Vec<u32>,
}

impl RepeatingDigits {
    pub fn is_terminating(&self) -> bool {
        self.tail.is_empty()
    }

    fn all_digits(&self) -> impl Iterator<Item = u32> + '_ {
        self.integer
            .iter()
            .chain(self.prefix.iter())
            .chain(self.tail.iter())
            .copied()
    }

    /// Serialize as `s iii.ppp(ttt)_b`, e.g. `0.0(2)_3` or `-12.(34)_10`.
    pub fn to_string_form(&self) -> String {
        let digits = |v: &[u32]| -> String {
            v.iter().map(|d| char::from_digit(*d, 10).unwrap()).collect()
        };
        let mut s = String::new();
        if self.negative {
            s.push('-');
        }
        if self.integer.is_empty() {
            s.push('0');
        } else {
            s.push_str(&digits(&self.integer));
        }
        s.push('.');
        s.push_str(&digits(&self.prefix));
        if !self.tail.is_empty() {
            s.push('(');
            s.push_str(&digits(&self.tail));
            s.push(')');
        }
        s.push_str(&format!("_{}", self.base));
        s
    }
}

impl fmt::Display for RepeatingDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_form())
    }
}

fn big(n: u32) -> BigInt {
    BigInt::from(n)
}

/// Exact base-`base` expansion of `q`, canonical form.
///
/// Long division on the fractional part; the first repeated remainder
/// closes the (minimal) cycle. Dyadic rationals in base 2 come out in
/// the terminating form.
pub fn to_digits(q: &BigRational, base: u32) -> RepeatingDigits {
    assert!(base >= 2, "base must be >= 2");
    let negative = q.is_negative();
    let a = q.abs();

    // Integer part.
    let mut int_val = a.floor().to_integer();
    let mut integer = Vec::new();
    while !int_val.is_zero() {
        let (d, r) = num::Integer::div_rem(&int_val, &big(base));
        integer.push(u32::try_from(&r).unwrap());
        int_val = d;
    }
    integer.reverse();

    // Fractional part by long division: remainder r/den, digit = floor(r*base/den).
    let frac = &a - a.floor();
    let den = frac.denom().clone();
    let mut rem = frac.numer().clone();
    let mut digits: Vec<u32> = Vec::new();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let (prefix, tail) = loop {
        if rem.is_zero() {
            break (digits, Vec::new());
        }
        if let Some(&pos) = seen.get(&rem) {
            let tail = digits.split_off(pos);
            break (digits, tail);
        }
        seen.insert(rem.clone(), digits.len());
        rem *= big(base);
        let (d, r) = num::Integer::div_rem(&rem, &den);
        digits.push(u32::try_from(&d).unwrap());
        rem = r;
    };

    RepeatingDigits {
        negative: negative && !(integer.is_empty() && prefix.is_empty() && tail.is_empty()),
        base,
        integer,
        prefix,
        tail,
    }
}

/// Exact rational value of an expansion. Accepts non-canonical forms
/// (e.g. an all-ones tail), so `from_digits(to_digits(q, b)) == q` and
/// internal alternative forms evaluate correctly too.
pub fn from_digits(d: &RepeatingDigits) -> BigRational {
    let base = big(d.base);
    let mut int_val = BigInt::zero();
    for &dig in &d.integer {
        int_val = &int_val * &base + big(dig);
    }
    let mut val = BigRational::from_integer(int_val);

    let mut prefix_val = BigInt::zero();
    for &dig in &d.prefix {
        prefix_val = &prefix_val * &base + big(dig);
    }
    let bp = num::pow::pow(base.clone(), d.prefix.len());
    val += BigRational::new(prefix_val, bp.clone());

    if !d.tail.is_empty() {
        let mut tail_val = BigInt::zero();
        for &dig in &d.tail {
            tail_val = &tail_val * &base + big(dig);
        }
        let bt = num::pow::pow(base.clone(), d.tail.len());
        val += BigRational::new(tail_val, bp * (bt - BigInt::one()));
    }
    if d.negative {
        -val
    } else {
        val
    }
}

/// The non-terminating (repeating-(base-1)s) form of a positive
/// terminating expansion. Returns `None` for zero or non-terminating
/// input. The result is deliberately non-canonical.
pub fn repeating_form(d: &RepeatingDigits) -> Option<RepeatingDigits> {
    if !d.is_terminating() {
        return None;
    }
    // Work on integer ++ prefix as one digit string.
    let mut digits: Vec<u32> = d.integer.iter().chain(d.prefix.iter()).copied().collect();
    let point = d.integer.len();
    let last_nonzero = digits.iter().rposition(|&x| x != 0)?;
    digits[last_nonzero] -= 1;
    for dig in digits.iter_mut().skip(last_nonzero + 1) {
        *dig = d.base - 1;
    }
    let mut integer: Vec<u32> = digits[..point].to_vec();
    while integer.first() == Some(&0) {
        integer.remove(0);
    }
    Some(RepeatingDigits {
        negative: d.negative,
        base: d.base,
        integer,
        prefix: digits[point..].to_vec(),
        tail: vec![d.base - 1],
    })
}

/// Map each digit through `f`, reading the result in `target_base`.
pub fn map_digits(d: &RepeatingDigits, target_base: u32, f: impl Fn(u32) -> u32) -> RepeatingDigits {
    RepeatingDigits {
        negative: d.negative,
        base: target_base,
        integer: d.integer.iter().map(|&x| f(x)).collect(),
        prefix: d.prefix.iter().map(|&x| f(x)).collect(),
        tail: d.tail.iter().map(|&x| f(x)).collect(),
    }
}

/// Which images of the two Cantor branches a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    MinusOnly,
    PlusOnly,
    Both,
}

impl Membership {
    pub fn contains(self, branch: Branch) -> bool {
        matches!(
            (self, branch),
            (Membership::Both, _)
                | (Membership::MinusOnly, Branch::Minus)
                | (Membership::PlusOnly, Branch::Plus)
        )
    }
}

/// Classify a nonnegative rational as a point of the base-3 or base-4
/// Cantor image, returning the valid all-{0,2} expansion and which
/// branch image(s) it lies in.
///
/// Images of dyadic rationals are one-branch points: the terminating
/// all-{0,2} expansion is the Plus image; the Minus image shows up as
/// an all-2s tail (base 4) or, after carry normalization, as a
/// terminating expansion whose last digit is 1 (base 3). Non-dyadic
/// preimages give both branches.
pub fn classify_cantor(x: &BigRational, base: u32) -> Result<(RepeatingDigits, Membership)> {
    debug_assert!(base == 3 || base == 4);
    let d = to_digits(x, base);
    let valid = d.all_digits().all(|dig| dig == 0 || dig == 2);
    if valid {
        if d.is_terminating() {
            if x.is_zero() {
                return Ok((d, Membership::Both));
            }
            return Ok((d, Membership::PlusOnly));
        }
        if d.tail.iter().all(|&t| t == 2) {
            // Only reachable in base 4 (base-3 all-2 tails carry away).
            return Ok((d, Membership::MinusOnly));
        }
        return Ok((d, Membership::Both));
    }
    // Base 3: a terminating expansion ending in 1 hides the valid
    // alternative ...0(2) form, e.g. 0.1_3 = 0.0(2)_3 = 1/3.
    if base == 3 && d.is_terminating() {
        let last_nonzero = d.all_digits().collect::<Vec<_>>();
        if let Some(pos) = last_nonzero.iter().rposition(|&x| x != 0) {
            let ok = last_nonzero[pos] == 1
                && last_nonzero[..pos].iter().all(|&dig| dig == 0 || dig == 2);
            if ok {
                let alt = repeating_form(&d).expect("terminating nonzero form");
                return Ok((alt, Membership::MinusOnly));
            }
        }
    }
    let bad = d
        .all_digits()
        .find(|&dig| dig != 0 && dig != 2)
        .unwrap_or(1);
    Err(Error::NotInCantorSet {
        value: x.clone(),
        base,
        digit: bad,
    })
}

/// Digit-doubling map g: double each binary digit of `y` and read the
/// result in `target_base`. For base 3 the domain is the unit cell
/// `[0, 1)`; for base 4 the whole expansion (integer part included) is
/// mapped.
pub fn double_digits(y: &BigRational, target_base: u32, branch: Branch) -> Result<BigRational> {
    if y.is_negative() {
        return Err(Error::Domain(format!("digit doubling needs y >= 0, got {y}")));
    }
    if target_base == 3 && *y >= BigRational::one() {
        return Err(Error::Domain(format!(
            "base-3 digit doubling needs y in [0,1), got {y}"
        )));
    }
    if target_base != 3 && target_base != 4 {
        return Err(Error::Domain(format!("target base must be 3 or 4, got {target_base}")));
    }
    Ok(double_digits_unchecked(y, target_base, branch))
}

pub(crate) fn double_digits_unchecked(
    y: &BigRational,
    target_base: u32,
    branch: Branch,
) -> BigRational {
    let d = to_digits(&y.abs(), 2);
    let chosen = match branch {
        Branch::Plus => d,
        Branch::Minus => repeating_form(&d).unwrap_or(d),
    };
    let doubled = map_digits(&chosen, target_base, |dig| 2 * dig);
    let v = from_digits(&doubled);
    if y.is_negative() {
        -v
    } else {
        v
    }
}

/// Inverse of [`double_digits`]: halve the all-{0,2} expansion of `x`
/// and read it in base 2. Branch-agnostic (both sections share it).
pub fn halve_digits(x: &BigRational, source_base: u32) -> Result<BigRational> {
    if x.is_negative() {
        return Err(Error::Domain(format!("digit halving needs x >= 0, got {x}")));
    }
    let (form, _) = classify_cantor(x, source_base)?;
    let halved = map_digits(&form, 2, |dig| dig / 2);
    Ok(from_digits(&halved))
}

/// Cantor-line map f for the translated ternary construction:
/// `f(c + k) = f(c) + k` with `c` in the branch cell `C(0,1)`.
pub fn ternary_line_forward(upper: &BigRational, branch: Branch) -> Result<BigRational> {
    let k = upper.floor();
    let cell = upper - &k;
    let (form, membership) = classify_cantor(&cell, 3)?;
    if !membership.contains(branch) {
        return Err(Error::NotInCantorSet {
            value: upper.clone(),
            base: 3,
            digit: 2,
        });
    }
    let halved = map_digits(&form, 2, |dig| dig / 2);
    Ok(from_digits(&halved) + k)
}

/// Cantor-line map g = f^{-1} for the translated ternary construction.
pub fn ternary_line_inverse(lower: &BigRational, branch: Branch) -> BigRational {
    let k = lower.floor();
    let frac = lower - &k;
    double_digits_unchecked(&frac, 3, branch) + k
}

fn scaled_forward(upper: &BigRational, base: u32, branch: Branch) -> Result<BigRational> {
    let a = upper.abs();
    let (form, membership) = classify_cantor(&a, base)?;
    if !membership.contains(branch) {
        return Err(Error::NotInCantorSet {
            value: upper.clone(),
            base,
            digit: 2,
        });
    }
    let halved = map_digits(&form, 2, |dig| dig / 2);
    let v = from_digits(&halved);
    Ok(if upper.is_negative() { -v } else { v })
}

/// Quaternary Cantor map f: digit halving of the whole base-4
/// expansion, extended to negative values by odd symmetry.
pub fn quaternary_forward(upper: &BigRational, branch: Branch) -> Result<BigRational> {
    scaled_forward(upper, 4, branch)
}

/// Quaternary Cantor map g = f^{-1}: digit doubling of the whole
/// binary expansion, odd extension to negative values.
pub fn quaternary_inverse(lower: &BigRational, branch: Branch) -> BigRational {
    double_digits_unchecked(lower, 4, branch)
}

/// Self-similar middle-third map f (base-3 analog of the quaternary
/// construction, whole line, odd extension).
pub fn middle_third_forward(upper: &BigRational, branch: Branch) -> Result<BigRational> {
    scaled_forward(upper, 3, branch)
}

/// Self-similar middle-third map g = f^{-1}.
pub fn middle_third_inverse(lower: &BigRational, branch: Branch) -> BigRational {
    double_digits_unchecked(lower, 3, branch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn to_digits_examples() {
        // 1/2 in base 2 terminates.
        let d = to_digits(&rat(1, 2), 2);
        assert_eq!(d.to_string_form(), "0.1_2");
        // 1/3 in base 2 is 0.(01).
        let d = to_digits(&rat(1, 3), 2);
        assert_eq!(d.to_string_form(), "0.(01)_2");
        // 2/3 in base 3 is 0.2.
        let d = to_digits(&rat(2, 3), 3);
        assert_eq!(d.to_string_form(), "0.2_3");
    }

    #[test]
    fn from_digits_examples() {
        // 0.0(2)_3 = 1/3
        let d = RepeatingDigits {
            negative: false,
            base: 3,
            integer: vec![],
            prefix: vec![0],
            tail: vec![2],
        };
        assert_eq!(from_digits(&d), rat(1, 3));
        // 0.(2)_4 = 2/3
        let d = RepeatingDigits {
            negative: false,
            base: 4,
            integer: vec![],
            prefix: vec![],
            tail: vec![2],
        };
        assert_eq!(from_digits(&d), rat(2, 3));
        // 0.1_2 = 1/2
        let d = RepeatingDigits {
            negative: false,
            base: 2,
            integer: vec![],
            prefix: vec![1],
            tail: vec![],
        };
        assert_eq!(from_digits(&d), rat(1, 2));
    }

    #[test]
    fn doubling_matches_published_values() {
        assert_eq!(double_digits(&rat(1, 2), 3, Branch::Minus).unwrap(), rat(1, 3));
        assert_eq!(double_digits(&rat(1, 2), 3, Branch::Plus).unwrap(), rat(2, 3));
        assert_eq!(double_digits(&rat(1, 1), 4, Branch::Plus).unwrap(), rat(2, 1));
        assert_eq!(double_digits(&rat(1, 1), 4, Branch::Minus).unwrap(), rat(2, 3));
    }

    #[test]
    fn halving_inverts_doubling() {
        assert_eq!(halve_digits(&rat(1, 3), 3).unwrap(), rat(1, 2));
        assert_eq!(halve_digits(&rat(2, 1), 4).unwrap(), rat(1, 1));
        // 1/2 = 0.(1)_3: digit 1 everywhere, not a Cantor point.
        assert!(matches!(
            halve_digits(&rat(1, 2), 3),
            Err(Error::NotInCantorSet { .. })
        ));
    }

    #[test]
    fn ternary_line_translation() {
        for k in -3..=3i64 {
            assert_eq!(ternary_line_inverse(&rat(k, 1), Branch::Minus), rat(k, 1));
            assert_eq!(
                ternary_line_forward(&rat(k, 1), Branch::Minus).unwrap(),
                rat(k, 1)
            );
        }
        assert_eq!(ternary_line_inverse(&rat(3, 2), Branch::Minus), rat(4, 3));
        assert_eq!(
            ternary_line_forward(&rat(4, 3), Branch::Minus).unwrap(),
            rat(3, 2)
        );
    }

    #[test]
    fn quaternary_antisymmetry_and_values() {
        assert_eq!(quaternary_inverse(&rat(-1, 1), Branch::Plus), rat(-2, 1));
        assert_eq!(quaternary_inverse(&rat(2, 1), Branch::Plus), rat(8, 1));
        assert_eq!(quaternary_inverse(&rat(0, 1), Branch::Plus), rat(0, 1));
        assert_eq!(quaternary_forward(&rat(8, 1), Branch::Plus).unwrap(), rat(2, 1));
        assert_eq!(quaternary_forward(&rat(-2, 1), Branch::Plus).unwrap(), rat(-1, 1));
        // 2 is the Plus image of 1; it is not in the Minus set.
        assert!(quaternary_forward(&rat(2, 1), Branch::Minus).is_err());
        assert_eq!(quaternary_forward(&rat(2, 3), Branch::Minus).unwrap(), rat(1, 1));
    }

    #[test]
    fn branch_is_min_max() {
        // For a dyadic y the Minus image is the min over both binary
        // forms and the Plus image the max, computed here directly.
        for (n, d) in [(1i64, 2i64), (3, 8), (1, 4), (7, 16), (5, 8)] {
            let y = rat(n, d);
            for base in [3u32, 4] {
                let term = to_digits(&y, 2);
                let rep = repeating_form(&term).unwrap();
                let img_term = from_digits(&map_digits(&term, base, |x| 2 * x));
                let img_rep = from_digits(&map_digits(&rep, base, |x| 2 * x));
                let minus = double_digits(&y, base, Branch::Minus).unwrap();
                let plus = double_digits(&y, base, Branch::Plus).unwrap();
                assert!(minus < plus);
                assert_eq!(minus, img_term.clone().min(img_rep.clone()));
                assert_eq!(plus, img_term.max(img_rep));
            }
        }
    }

    #[test]
    fn repeating_form_of_integers() {
        // 2 = 1.(1)_2
        let d = to_digits(&rat(2, 1), 2);
        let r = repeating_form(&d).unwrap();
        assert_eq!(from_digits(&r), rat(2, 1));
        assert_eq!(r.tail, vec![1]);
    }
}

